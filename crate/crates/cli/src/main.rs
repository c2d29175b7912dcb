use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prehom::combinatorics::{classify, from_strings, one_strings, parse_int_list, OneStringSequence, ThinDimVector};
use prehom::constructions::{
    build_diagram, conjugator, decompose_jk, element_x, element_xbar, family, modified_family, modify_diagram,
};
use prehom::field::{Field, Rational};
use prehom::matrix_model::{orbit_codim, IdealElement};
use prehom::orbit_lab::{enumerate_orbits, finite_check, OrbitLab, DEFAULT_BUDGET};
use prehom::quiver::{ext1_dim, hom_dim, hom_dim_standard, module_from_element, standard_module, StandardSubset};
use prehom::verify::{run_suite, Suite, VerifyOptions};
use prehom::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Q = Rational;

#[derive(Parser)]
#[command(name = "prehom", version, about = "Borel orbits on thin ideals and the algebra A(t,1)")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of visited states in finite-field enumerations.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Plain,
    Minimal,
    Family,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DimInput {
    /// Thin dimension vector, e.g. `1,1,0,1`.
    #[arg(long)]
    d: Option<String>,
    /// Lengths of its 1-strings, e.g. `1,2,2,1`.
    #[arg(long)]
    a: Option<String>,
}

impl DimInput {
    fn resolve(&self) -> Result<ThinDimVector, Error> {
        match (&self.d, &self.a) {
            (Some(d), _) => ThinDimVector::new(&parse_int_list(d)?),
            (_, Some(a)) => Ok(from_strings(&OneStringSequence::new(&parse_int_list(a)?)?)),
            _ => Err(Error::Empty),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dense orbit test and modality.
    Classify {
        #[command(flatten)]
        input: DimInput,
    },
    /// Representatives, diagrams and their invariants.
    Represent {
        #[command(flatten)]
        input: DimInput,
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
        /// Family parameters (exact rationals); random nonzero if omitted.
        #[arg(long, value_delimiter = ',')]
        params: Option<Vec<String>>,
        /// Prime used for the minimality check.
        #[arg(long, default_value_t = 3)]
        q: u64,
    },
    /// Hom and Ext between standard modules.
    Ext {
        #[arg(long = "J")]
        j: String,
        #[arg(long = "K")]
        k: String,
        #[arg(long)]
        t: usize,
    },
    /// Census of B(q)-orbits on n(q).
    Enumerate {
        #[command(flatten)]
        input: DimInput,
        #[arg(long)]
        q: u64,
    },
    /// Largest B(q)-class against its predicted size.
    Finite {
        #[command(flatten)]
        input: DimInput,
        #[arg(long)]
        q: u64,
    },
    /// Run verification sweeps.
    Verify {
        /// Suite name (`codim-sweep`, .., or A1..A9) or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        t_max: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        q_list: Option<Vec<u64>>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

enum Failure {
    Input(Error),
    Unsupported(String),
    Budget(Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e),
            Error::UnsupportedLevel(_) => Failure::Unsupported(e.to_string()),
            e => Failure::Input(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("unsupported: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Budget(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
    }
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) {
    let out = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("json") + "\n",
        Format::Tsv | Format::Text => text(),
    };
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn with_schema(mut v: Value) -> Value {
    v["schema"] = json!(1);
    v
}

fn list(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Classify { input } => {
            let d = input.resolve()?;
            let c = classify(&d);
            let a: Vec<usize> = one_strings(&d).as_slice().to_vec();
            let v = with_schema(json!({
                "d": Vec::<i64>::from(d.clone()),
                "a": a,
                "e": c.e,
                "dense": c.dense,
                "codim": c.codim,
            }));
            emit(cli.format, &v, || match cli.format {
                Format::Tsv => format!("d\ta\te\tdense\tcodim\n{d}\t{}\t{}\t{}\t{}\n", list(&a), c.e, c.dense, c.codim),
                _ => format!("d = {d}\na = ({})\ne = {}\ndense = {}\ncodim = {}\n", list(&a), c.e, c.dense, c.codim),
            });
            Ok(())
        }
        Command::Represent { input, variant, params, q } => represent(cli, &input.resolve()?, *variant, params.as_deref(), *q),
        Command::Ext { j, k, t } => {
            let parse = |s: &str| -> Result<StandardSubset, Error> {
                let v: Vec<usize> = parse_int_list(s)?
                    .into_iter()
                    .map(|x| usize::try_from(x).map_err(|_| Error::ScalarParse(x.to_string())))
                    .collect::<Result<_, _>>()?;
                StandardSubset::new(*t, &v)
            };
            let (js, ks) = (parse(j)?, parse(k)?);
            let (mj, mk) = (standard_module::<Q>(&js), standard_module::<Q>(&ks));
            let formula = hom_dim_standard(&js, &ks);
            let solver = hom_dim(&mj, &mk)?;
            let (ext_jk, ext_kj) = (ext1_dim(&mj, &mk)?, ext1_dim(&mk, &mj)?);
            let v = with_schema(json!({
                "t": t,
                "J": js.elements(),
                "K": ks.elements(),
                "hom_formula": formula,
                "hom_solver": solver,
                "ext1_JK": ext_jk,
                "ext1_KJ": ext_kj,
            }));
            emit(cli.format, &v, || match cli.format {
                Format::Tsv => format!("hom_formula\thom_solver\text1_JK\text1_KJ\n{formula}\t{solver}\t{ext_jk}\t{ext_kj}\n"),
                _ => format!(
                    "hom(Delta(J),Delta(K)) = {formula} (formula), {solver} (solver)\next1(Delta(J),Delta(K)) = {ext_jk}\next1(Delta(K),Delta(J)) = {ext_kj}\n"
                ),
            });
            if formula != solver {
                return Err(Failure::Mismatch);
            }
            Ok(())
        }
        Command::Enumerate { input, q } => {
            let d = input.resolve()?;
            let census = enumerate_orbits(&d, *q, cli.budget)?;
            let check = finite_check(&census);
            let mut v = census.to_json();
            v["finite_check"] = serde_json::to_value(&check).expect("json");
            emit(cli.format, &v, || match cli.format {
                Format::Tsv => census.to_tsv(),
                _ => {
                    let mut s = format!(
                        "d = {d}, q = {q}: {} orbits on {} elements, largest class {}\n",
                        census.orbits.len(),
                        census.total,
                        check.max_size
                    );
                    s.push_str(&finite_text(&check));
                    s
                }
            });
            Ok(())
        }
        Command::Finite { input, q } => {
            let d = input.resolve()?;
            let check = finite_check(&enumerate_orbits(&d, *q, cli.budget)?);
            let v = with_schema(serde_json::to_value(&check).expect("json"));
            emit(cli.format, &v, || match cli.format {
                Format::Tsv => format!(
                    "d\tq\tmax_size\tpredicted\tmatch\tanomaly\n{d}\t{q}\t{}\t{}\t{}\t{}\n",
                    check.max_size,
                    check.predicted.map_or("undefined".into(), |p| p.to_string()),
                    check.matches,
                    check.anomaly.as_deref().unwrap_or("")
                ),
                _ => finite_text(&check),
            });
            if !check.matches && check.anomaly.is_none() {
                return Err(Failure::Mismatch);
            }
            Ok(())
        }
        Command::Verify { suite, t_max, n_max, q_list, samples } => {
            let suites: Vec<Suite> =
                if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse::<Suite>()?] };
            let opts = VerifyOptions {
                t_max: *t_max,
                n_max: *n_max,
                q_list: q_list.clone(),
                samples: *samples,
                seed: cli.seed,
                budget: cli.budget,
            };
            let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &opts)).collect();
            let v = json!({
                "schema": 1,
                "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            emit(cli.format, &v, || match cli.format {
                Format::Tsv => reports.iter().map(|r| r.to_tsv()).collect(),
                _ => reports.iter().map(|r| r.to_text()).collect(),
            });
            if reports.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
    }
}

fn finite_text(check: &prehom::orbit_lab::FiniteCheck) -> String {
    let predicted = check.predicted.map_or("undefined".into(), |p| p.to_string());
    let mut s = format!("largest class {} predicted {} match {}\n", check.max_size, predicted, check.matches);
    if let Some(a) = &check.anomaly {
        s.push_str(&format!("anomaly: {a}\n"));
    }
    s
}

fn invariants(x: &IdealElement<Q>) -> Result<(usize, usize), Error> {
    let m = module_from_element(x);
    Ok((orbit_codim(x), ext1_dim(&m, &m)?))
}

fn represent(cli: &Cli, d: &ThinDimVector, variant: Variant, params: Option<&[String]>, q: u64) -> Result<(), Failure> {
    let e = classify(d).e;
    if variant != Variant::Family && e >= 2 {
        return Err(Failure::Unsupported(format!(
            "e(d) = {e}: no single representative, use --variant family"
        )));
    }
    let jk = decompose_jk(d);
    let mut v = json!({
        "d": Vec::<i64>::from(d.clone()),
        "e": e,
        "J": jk.j.elements(),
        "K": jk.k.elements(),
    });
    let mut text = format!("d = {d}\nJ = {:?}\nK = {:?}\n", jk.j.elements(), jk.k.elements());
    match variant {
        Variant::Plain | Variant::Minimal => {
            let (x, diagram) = if variant == Variant::Plain {
                (element_x::<Q>(d)?, build_diagram(d))
            } else {
                (element_xbar::<Q>(d)?, modify_diagram(&build_diagram(d)))
            };
            let (codim, ext) = invariants(&x)?;
            v["element"] = x.to_json();
            v["diagram"] = diagram.to_json();
            v["orbit_codim"] = json!(codim);
            v["ext1"] = json!(ext);
            text += &format!("x = {}\norbit codim = {codim}\next1(M(x),M(x)) = {ext}\n", diagram.family().describe());
            if variant == Variant::Minimal {
                let lab = OrbitLab::new(d, q)?;
                let minimal = lab.coords_of(&x).and_then(|c| lab.is_minimal(&c, cli.budget));
                match minimal {
                    Ok(m) => {
                        v["is_minimal"] = json!({"q": q, "value": m});
                        text += &format!("minimal over F_{q}: {m}\n");
                    }
                    Err(Error::BudgetExceeded { needed, budget }) => {
                        v["is_minimal"] = json!({"q": q, "value": null, "budget_exceeded": needed, "budget": budget});
                        text += &format!("minimal over F_{q}: not checked (budget)\n");
                    }
                    Err(err) => return Err(err.into()),
                }
            }
            text += &diagram.to_dot();
        }
        Variant::Family => {
            let (f, fbar) = (family(d), modified_family(d));
            let count = f.parameter_count();
            let values: Vec<Q> = match params {
                Some(p) => p.iter().map(|s| Q::parse(s)).collect::<Result<_, _>>()?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (0..count)
                        .map(|_| loop {
                            let v = rng.gen_range(-100i64..=100);
                            if v != 0 {
                                break Q::from_i64(v);
                            }
                        })
                        .collect()
                }
            };
            let x = f.instantiate(&values)?;
            let (codim, ext) = invariants(&x)?;
            let (_, s) = conjugator::<Q>(d, &values, cli.seed)?;
            let xbar = fbar.instantiate(&s)?;
            let show = |v: &[Q]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
            v["family"] = f.to_json();
            v["modified_family"] = fbar.to_json();
            v["params"] = json!(show(&values));
            v["element"] = x.to_json();
            v["modified_params"] = json!(show(&s));
            v["modified_element"] = xbar.to_json();
            v["diagram"] = build_diagram(d).to_json();
            v["orbit_codim"] = json!(codim);
            v["ext1"] = json!(ext);
            text += &format!(
                "F = {}\nFbar = {}\nparams = ({})\nconjugate to Fbar at ({})\norbit codim = {codim}\next1(M(F),M(F)) = {ext}\n",
                f.describe(),
                fbar.describe(),
                show(&values).join(","),
                show(&s).join(",")
            );
            text += &build_diagram(d).to_dot();
        }
    }
    let v = with_schema(v);
    emit(cli.format, &v, || text);
    Ok(())
}
