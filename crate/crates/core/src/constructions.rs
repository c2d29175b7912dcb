//! The splitting `supp d = J ⊔ K`, the two-row diagrams built on it, and
//! the representatives and families read off from those diagrams.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{even_internal_count, even_string_ends, relabel, ThinDimVector};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SparseEchelon};
use crate::matrix_model::{element_from_sparse, IdealElement, Root};
use crate::quiver::StandardSubset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JKDecomposition {
    pub j: StandardSubset,
    pub k: StandardSubset,
    /// Ends `b_1 < .. < b_e` of the even internal 1-strings.
    pub b: Vec<usize>,
    /// `max J`.
    pub c: usize,
}

impl JKDecomposition {
    pub fn e(&self) -> usize {
        self.b.len()
    }
}

pub fn decompose_jk(d: &ThinDimVector) -> JKDecomposition {
    let t = d.len();
    let b = even_string_ends(d);
    let j: Vec<usize> = if b.is_empty() {
        d.support().into_iter().filter(|i| i % 2 == 1).collect()
    } else {
        let mut j = BTreeSet::new();
        let mut p = b[0] as isize - 1;
        while p >= 1 {
            j.insert(p as usize);
            p -= 2;
        }
        for w in b.windows(2) {
            j.extend((w[0] + 2..w[1]).step_by(2));
        }
        j.extend((b[b.len() - 1] + 2..=t).step_by(2));
        j.into_iter().collect()
    };
    assert!(j.iter().all(|&i| d.entry(i)), "J must lie in the support of {d}");
    let k: Vec<usize> = d.support().into_iter().filter(|i| !j.contains(i)).collect();
    let c = j.last().copied().unwrap_or(0);
    JKDecomposition {
        j: StandardSubset::new(t, &j).expect("J is standard"),
        k: StandardSubset::new(t, &k).expect("K is standard"),
        b,
        c,
    }
}

/// Vertex key: `(label, row)` with row 1 holding `J` and row 0 holding `K`.
pub type Vertex = (usize, u8);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub from: Vertex,
    pub to: Vertex,
    /// Index `i` of the twiddly arrow carrying the parameter `x_i`.
    pub param: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDiagram {
    pub d: Vec<i64>,
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
    pub modified: bool,
}

impl OrbitDiagram {
    fn arrow_to(&mut self, from: Vertex, to: Vertex, param: Option<usize>) {
        self.arrows.push(Arrow { from, to, param });
    }

    pub fn family(&self) -> ParametricFamily {
        let d = ThinDimVector::new(&self.d).expect("diagram built from a valid vector");
        let mut base: Vec<Root> = Vec::new();
        let mut params: Vec<(usize, Root)> = Vec::new();
        for a in &self.arrows {
            let root = (a.to.0, a.from.0);
            match a.param {
                None => base.push(root),
                Some(i) => params.push((i, root)),
            }
        }
        base.sort_unstable();
        params.sort_unstable();
        ParametricFamily { d, base, params }
    }

    pub fn to_dot(&self) -> String {
        let name = |v: &Vertex| format!("v{}_{}", v.0, v.1);
        let mut s = String::from("digraph D {\n  rankdir=RL;\n");
        for row in [1u8, 0] {
            let names: Vec<String> = self.vertices.iter().filter(|v| v.1 == row).map(name).collect();
            if !names.is_empty() {
                let _ = writeln!(s, "  {{ rank=same; {}; }}", names.join("; "));
            }
        }
        for v in &self.vertices {
            let _ = writeln!(s, "  {} [label=\"{}\", pos=\"{},{}!\"];", name(v), v.0, v.0, v.1);
        }
        for a in &self.arrows {
            match a.param {
                None => {
                    let _ = writeln!(s, "  {} -> {};", name(&a.from), name(&a.to));
                }
                Some(i) => {
                    let _ = writeln!(s, "  {} -> {} [style=dashed, label=\"{i}\"];", name(&a.from), name(&a.to));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("diagram serializes")
    }
}

/// `D(d)`.
pub fn build_diagram(d: &ThinDimVector) -> OrbitDiagram {
    let jk = decompose_jk(d);
    let mut vertices: Vec<Vertex> = jk.j.elements().iter().map(|&j| (j, 1)).collect();
    vertices.extend(jk.k.elements().iter().map(|&i| (i, 0)));
    vertices.sort_unstable();
    let mut diagram = OrbitDiagram { d: d.clone().into(), vertices, arrows: Vec::new(), modified: false };
    let skipped: Vec<usize> = jk.b.iter().skip(1).map(|&b| b + 2).collect();
    for (row, set) in [(1u8, &jk.j), (0u8, &jk.k)] {
        for w in set.elements().windows(2) {
            if row == 1 && skipped.contains(&w[1]) {
                continue;
            }
            diagram.arrow_to((w[1], row), (w[0], row), None);
        }
    }
    for &b in &jk.b {
        diagram.arrow_to((b + 2, 1), (b, 0), None);
    }
    for (i, &b) in jk.b.iter().enumerate().skip(1) {
        diagram.arrow_to((b + 2, 1), (b - 1, 1), Some(i + 1));
    }
    diagram
}

/// `D̄(d)`: the row-0 arrow into `b_i` coming from its right neighbour is
/// moved to `b_i - 1`.
pub fn modify_diagram(diagram: &OrbitDiagram) -> OrbitDiagram {
    let d = ThinDimVector::new(&diagram.d).expect("diagram built from a valid vector");
    let jk = decompose_jk(&d);
    let mut out = diagram.clone();
    out.modified = true;
    for &b in &jk.b {
        let Some(&right) = jk.k.elements().iter().find(|&&i| i > b) else {
            continue;
        };
        for a in out.arrows.iter_mut() {
            if a.from == (right, 0) && a.to == (b, 0) {
                a.to = (b - 1, 1);
            }
        }
    }
    out
}

/// `sum_{(i,j) in base} f_ij + sum_i x_i f_{root_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricFamily {
    pub d: ThinDimVector,
    pub base: Vec<Root>,
    /// `(i, root)` for the parameter `x_i`, `i = 2..=e`.
    pub params: Vec<(usize, Root)>,
}

impl ParametricFamily {
    pub fn parameter_count(&self) -> usize {
        self.params.len()
    }

    pub fn instantiate<F: Field>(&self, values: &[F]) -> Result<IdealElement<F>> {
        if values.len() != self.params.len() {
            return Err(Error::ParameterCount { expected: self.params.len(), got: values.len() });
        }
        if let Some(((i, _), _)) = self.params.iter().zip(values).find(|(_, v)| v.is_zero()) {
            return Err(Error::ZeroParameter(*i));
        }
        let pairs = self
            .base
            .iter()
            .map(|&r| (r, F::one()))
            .chain(self.params.iter().zip(values).map(|((_, r), v)| (*r, v.clone())));
        element_from_sparse(&self.d, pairs)
    }

    /// All parameters set to one.
    pub fn ones<F: Field>(&self) -> IdealElement<F> {
        self.instantiate(&vec![F::one(); self.params.len()]).expect("ones are nonzero")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": Vec::<i64>::from(self.d.clone()),
            "base": self.base.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "params": self.params.iter().map(|&(k, (i, j))| serde_json::json!({"index": k, "root": [i, j]})).collect::<Vec<_>>(),
        })
    }

    /// `f_{1,3} + x_2 f_{8,11} + ..` in increasing root order.
    pub fn describe(&self) -> String {
        let mut terms: Vec<(Root, String)> = self.base.iter().map(|&(i, j)| ((i, j), format!("f_{{{i},{j}}}"))).collect();
        terms.extend(self.params.iter().map(|&(k, (i, j))| ((i, j), format!("x_{k} f_{{{i},{j}}}"))));
        terms.sort_by_key(|((i, j), _)| (*i, *j));
        if terms.is_empty() {
            return "0".into();
        }
        terms.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join(" + ")
    }
}

/// `F` from `D(d)`; a single element when `e(d) <= 1`.
pub fn family(d: &ThinDimVector) -> ParametricFamily {
    build_diagram(d).family()
}

/// `F̄` from `D̄(d)`.
pub fn modified_family(d: &ThinDimVector) -> ParametricFamily {
    modify_diagram(&build_diagram(d)).family()
}

/// The representative `x` (requires `e(d) <= 1`).
pub fn element_x<F: Field>(d: &ThinDimVector) -> Result<IdealElement<F>> {
    let f = family(d);
    if f.parameter_count() > 0 {
        return Err(Error::Construction(format!("e(d) = {} has no single representative", even_internal_count(d))));
    }
    f.instantiate(&[])
}

/// The representative `x̄` (requires `e(d) <= 1`).
pub fn element_xbar<F: Field>(d: &ThinDimVector) -> Result<IdealElement<F>> {
    let f = modified_family(d);
    if f.parameter_count() > 0 {
        return Err(Error::Construction(format!("e(d) = {} has no single representative", even_internal_count(d))));
    }
    f.instantiate(&[])
}

/// For one even internal string: the base change `f_{i_l} -> f_{j_l} - f_{i_l}`
/// where `i_1 < .. < i_s` are the `K` labels past `b` and `j_1 = b+2 < ..`
/// the first `s` labels of `J` from `b + 2` on.
pub fn single_site_conjugator<F: Field>(d: &ThinDimVector) -> Result<Matrix<F>> {
    let jk = decompose_jk(d);
    let n = d.rank();
    let mut g = Matrix::identity(n);
    let &[b] = jk.b.as_slice() else {
        return Err(Error::Construction("the base change needs exactly one even internal string".into()));
    };
    let is: Vec<usize> = jk.k.elements().iter().copied().filter(|&i| i > b).collect();
    let js: Vec<usize> = jk.j.elements().iter().copied().filter(|&j| j >= b + 2).collect();
    if js.len() < is.len() {
        return Err(Error::Construction(format!("only {} vertices of J right of {b}, need {}", js.len(), is.len())));
    }
    let gamma = relabel(d);
    for (&i, &j) in is.iter().zip(&js) {
        let (ci, rj) = (gamma.gamma(i).unwrap() - 1, gamma.gamma(j).unwrap() - 1);
        g.set(ci, ci, -F::one());
        g.set(rj, ci, F::one());
    }
    Ok(g)
}

/// Solves `g y = z g` for upper triangular `g` and returns a random
/// invertible solution, or `None` if every solution found is singular.
pub fn solve_conjugator<F: Field>(y: &IdealElement<F>, z: &IdealElement<F>, seed: u64) -> Option<Matrix<F>> {
    let n = y.d().rank();
    let (ym, zm) = (y.to_matrix(), z.to_matrix());
    // unknowns g_ab, a <= b, numbered row by row
    let mut var = vec![usize::MAX; n * n];
    let mut count = 0;
    for a in 0..n {
        for b in a..n {
            var[a * n + b] = count;
            count += 1;
        }
    }
    let mut ech = SparseEchelon::new(count);
    for r in 0..n {
        for c in 0..n {
            // (g y)_rc - (z g)_rc
            let mut eq: std::collections::BTreeMap<usize, F> = Default::default();
            for k in r..n {
                let v = ym.get(k, c);
                if !v.is_zero() {
                    let e = eq.remove(&var[r * n + k]).unwrap_or_else(F::zero) + v.clone();
                    eq.insert(var[r * n + k], e);
                }
            }
            for k in 0..=c {
                let v = zm.get(r, k);
                if !v.is_zero() {
                    let e = eq.remove(&var[k * n + c]).unwrap_or_else(F::zero) - v.clone();
                    eq.insert(var[k * n + c], e);
                }
            }
            let row: Vec<(usize, F)> = eq.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if !row.is_empty() {
                ech.insert(row);
            }
        }
    }
    let basis = ech.nullspace();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let mut coeffs = vec![F::zero(); count];
        for v in &basis {
            let c = F::from_i64(rng.gen_range(-20..=20));
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    coeffs[k] = coeffs[k].clone() + c.clone() * x.clone();
                }
            }
        }
        let g = Matrix::from_fn(n, n, |a, b| if a <= b { coeffs[var[a * n + b]].clone() } else { F::zero() });
        if (0..n).all(|i| !g.get(i, i).is_zero()) {
            return Some(g);
        }
    }
    None
}

/// `f_{i_l} -> f_{j_l} - f_{i_l}` for the given label pairs.
fn base_change<F: Field>(d: &ThinDimVector, pairs: &[(usize, usize)]) -> Matrix<F> {
    let gamma = relabel(d);
    let mut g = Matrix::identity(d.rank());
    for &(i, j) in pairs {
        let (ci, rj) = (gamma.gamma(i).unwrap() - 1, gamma.gamma(j).unwrap() - 1);
        g.set(ci, ci, -F::one());
        g.set(rj, ci, F::one());
    }
    g
}

/// Candidate parameters for `F̄` in the orbit of `y = F(t)`: apply the
/// single-site base changes string by string, then scale basis vectors so
/// the unparametrized arrows of `D̄(d)` carry coefficient one.
pub fn staged_candidate<F: Field>(y: &IdealElement<F>) -> Option<Vec<F>> {
    let d = y.d();
    let jk = decompose_jk(d);
    let target = modified_family(d);
    let mut z = y.clone();
    for (k, &b) in jk.b.iter().enumerate() {
        let hi = jk.b.get(k + 1).copied().unwrap_or(usize::MAX);
        let is = jk.k.elements().iter().copied().filter(|&i| i > b && i <= hi);
        let js = jk.j.elements().iter().copied().filter(|&j| j >= b + 2);
        let pairs: Vec<(usize, usize)> = is.zip(js).collect();
        z = z.conjugate(&base_change(d, &pairs)).ok()?;
    }
    // scale factors along the forest of base arrows
    let mut c: std::collections::BTreeMap<usize, F> = Default::default();
    for v in d.support() {
        if c.contains_key(&v) {
            continue;
        }
        c.insert(v, F::one());
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &(i, j) in &target.base {
                let zij = z.coefficient((i, j));
                if i == u && !c.contains_key(&j) {
                    c.insert(j, c[&i].clone() * zij);
                    stack.push(j);
                } else if j == u && !c.contains_key(&i) {
                    c.insert(i, c[&j].clone() * zij.inv()?);
                    stack.push(i);
                }
            }
        }
    }
    let scaled = |(i, j): Root| Some(c[&i].clone() * c[&j].inv()? * z.coefficient((i, j)));
    for &r in &target.base {
        if !scaled(r)?.is_one() {
            return None;
        }
    }
    let s: Vec<F> = target.params.iter().map(|&(_, r)| scaled(r)).collect::<Option<_>>()?;
    s.iter().all(|v| !v.is_zero()).then_some(s)
}

/// Finds parameters `s` and `g` in `B` with `g y g^{-1} = target(s)`.
/// The products `s_k g_{j_k, c}` are treated as independent unknowns, which
/// makes the system linear; candidate answers are then checked exactly.
pub fn match_family<F: Field>(y: &IdealElement<F>, target: &ParametricFamily, seed: u64) -> Result<(Matrix<F>, Vec<F>)> {
    let d = y.d();
    let n = d.rank();
    let gamma = relabel(d);
    let ym = y.to_matrix();
    let z0 = element_from_sparse(d, target.base.iter().map(|&r| (r, F::one())))?.to_matrix();
    let prow: Vec<(usize, usize)> = target
        .params
        .iter()
        .map(|&(_, (i, j))| (gamma.gamma(i).unwrap() - 1, gamma.gamma(j).unwrap() - 1))
        .collect();
    let mut var = vec![usize::MAX; n * n];
    let mut count = 0;
    for a in 0..n {
        for b in a..n {
            var[a * n + b] = count;
            count += 1;
        }
    }
    // w[k][c] = s_k g_{j_k, c}, c >= j_k
    let mut wvar = vec![vec![usize::MAX; n]; prow.len()];
    for (k, &(_, jk)) in prow.iter().enumerate() {
        for c in jk..n {
            wvar[k][c] = count;
            count += 1;
        }
    }
    let mut ech = SparseEchelon::new(count);
    for r in 0..n {
        for c in 0..n {
            let mut eq: std::collections::BTreeMap<usize, F> = Default::default();
            let mut add = |k: usize, v: F| {
                let e = eq.remove(&k).unwrap_or_else(F::zero) + v;
                eq.insert(k, e);
            };
            for k in r..n {
                let v = ym.get(k, c);
                if !v.is_zero() {
                    add(var[r * n + k], v.clone());
                }
            }
            for k in 0..=c {
                let v = z0.get(r, k);
                if !v.is_zero() {
                    add(var[k * n + c], -v.clone());
                }
            }
            for (k, &(ik, jk)) in prow.iter().enumerate() {
                if ik == r && c >= jk {
                    add(wvar[k][c], -F::one());
                }
            }
            let row: Vec<(usize, F)> = eq.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if !row.is_empty() {
                ech.insert(row);
            }
        }
    }
    let basis = ech.nullspace();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let mut sol = vec![F::zero(); count];
        for v in &basis {
            let c = F::from_i64(rng.gen_range(-20..=20));
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    sol[k] = sol[k].clone() + c.clone() * x.clone();
                }
            }
        }
        let g = Matrix::from_fn(n, n, |a, b| if a <= b { sol[var[a * n + b]].clone() } else { F::zero() });
        if (0..n).any(|i| g.get(i, i).is_zero()) {
            continue;
        }
        let s: Vec<F> = prow
            .iter()
            .enumerate()
            .map(|(k, &(_, jk))| sol[wvar[k][jk]].div(g.get(jk, jk)))
            .collect();
        if s.iter().any(|v| v.is_zero()) {
            continue;
        }
        let z = target.instantiate(&s)?;
        if y.conjugate(&g)? == z {
            return Ok((g, s));
        }
        if let Some(h) = solve_conjugator(y, &z, seed) {
            return Ok((h, s));
        }
    }
    Err(Error::Construction("no matching member of the family found".into()))
}

/// A matrix `g` in `B` and parameters `s` with `g F(t) g^{-1} = F̄(s)`.
///
/// With one even string `s` is empty and `g` is the explicit base change.
/// With several, `F(t)` generally lands on `F̄(s)` for some `s != t` (for
/// `a = (1,2,2,1)` one gets `s = -1 - t`), so `s` is computed as well. The
/// result is always checked by exact conjugation.
pub fn conjugator<F: Field>(d: &ThinDimVector, params: &[F], seed: u64) -> Result<(Matrix<F>, Vec<F>)> {
    let x = family(d).instantiate(params)?;
    let target = modified_family(d);
    let (g, s) = if target.parameter_count() == 0 {
        let xbar = target.instantiate(&[])?;
        let g = if x == xbar { Matrix::identity(d.rank()) } else { single_site_conjugator(d)? };
        (g, vec![])
    } else {
        let staged = staged_candidate(&x).and_then(|s| {
            let z = target.instantiate(&s).ok()?;
            solve_conjugator(&x, &z, seed).map(|g| (g, s))
        });
        match staged {
            Some(found) => found,
            None => match_family(&x, &target, seed)?,
        }
    };
    if !g.is_upper_triangular() || x.conjugate(&g)? != target.instantiate(&s)? {
        return Err(Error::Construction("conjugator check failed".into()));
    }
    Ok((g, s))
}

/// Basis coordinates of `span{f_i : i in K}` and of the complementary `J`
/// part inside each `V_v = M(x)_v`.
pub fn split_coordinates(d: &ThinDimVector, jk: &JKDecomposition) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let gamma = relabel(d);
    let coords = |set: &StandardSubset, v: usize| -> Vec<usize> {
        set.elements().iter().filter(|&&i| i <= v).map(|&i| gamma.gamma(i).unwrap() - 1).collect()
    };
    let ks = (1..=d.len()).map(|v| coords(&jk.k, v)).collect();
    let js = (1..=d.len()).map(|v| coords(&jk.j, v)).collect();
    (ks, js)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{from_strings, OneStringSequence};
    use crate::field::Rational;
    use crate::matrix_model::{jordan_type, orbit_codim};

    type Q = Rational;

    fn d(v: &[i64]) -> ThinDimVector {
        ThinDimVector::new(v).unwrap()
    }

    fn roots_of<F: Field>(x: &IdealElement<F>) -> Vec<Root> {
        x.entries().keys().copied().collect()
    }

    const EX_T18: [i64; 18] = [1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1];
    const EX_JK: [i64; 15] = [1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 0, 1];
    const EX_D: [i64; 11] = [1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 1];

    #[test]
    fn jk_single_even_string() {
        let jk = decompose_jk(&d(&EX_T18));
        assert_eq!(jk.b, vec![15]);
        assert_eq!(jk.j.elements(), &[2, 4, 6, 8, 10, 12, 14, 17]);
        assert_eq!(jk.k.elements(), &[1, 9, 13, 15, 18]);
        assert_eq!(jk.c, 17);
    }

    #[test]
    fn jk_two_even_strings() {
        let jk = decompose_jk(&d(&EX_JK));
        assert_eq!(jk.b, vec![4, 9]);
        assert_eq!(jk.j.elements(), &[1, 3, 6, 8, 11, 13, 15]);
        assert_eq!(jk.k.elements(), &[4, 7, 9, 12]);
        assert_eq!(jk.c, 15);
    }

    #[test]
    fn jk_no_even_string() {
        let jk = decompose_jk(&d(&[1, 1, 0, 1]));
        assert_eq!(jk.j.elements(), &[1]);
        assert_eq!(jk.k.elements(), &[2, 4]);
    }

    #[test]
    fn diagram_single_even_string() {
        let v = d(&EX_D);
        let jk = decompose_jk(&v);
        assert_eq!((jk.b.clone(), jk.j.elements().to_vec(), jk.k.elements().to_vec()), (vec![7], vec![2, 4, 6, 9, 11], vec![1, 7, 10]));
        let x: IdealElement<Q> = element_x(&v).unwrap();
        assert_eq!(roots_of(&x), vec![(1, 7), (2, 4), (4, 6), (6, 9), (7, 9), (7, 10), (9, 11)]);
        assert_eq!(jordan_type(&x), vec![5, 3]);
        assert_eq!(orbit_codim(&x), 0);
        let xbar: IdealElement<Q> = element_xbar(&v).unwrap();
        assert_eq!(roots_of(&xbar), vec![(1, 7), (2, 4), (4, 6), (6, 9), (6, 10), (7, 9), (9, 11)]);
        let (g, s) = conjugator::<Q>(&v, &[], 0).unwrap();
        assert!(s.is_empty());
        assert_eq!(x.conjugate(&g).unwrap(), xbar);
        assert_eq!(g, single_site_conjugator(&v).unwrap());
    }

    #[test]
    fn family_two_even_strings() {
        let v = d(&EX_JK);
        let f = family(&v);
        assert_eq!(
            f.describe(),
            "f_{1,3} + f_{3,6} + f_{4,6} + f_{4,7} + f_{6,8} + f_{7,9} + x_2 f_{8,11} + f_{9,11} + f_{9,12} + f_{11,13} + f_{13,15}"
        );
        let fbar = modified_family(&v);
        assert_eq!(
            fbar.describe(),
            "f_{1,3} + f_{3,6} + f_{3,7} + f_{4,6} + f_{6,8} + f_{7,9} + x_2 f_{8,11} + f_{8,12} + f_{9,11} + f_{11,13} + f_{13,15}"
        );
        assert_eq!(f.instantiate(&[Q::from_i64(0)]), Err(Error::ZeroParameter(2)));
        assert_eq!(f.instantiate::<Q>(&[]), Err(Error::ParameterCount { expected: 1, got: 0 }));
        let p = [Q::from_i64(3)];
        let (g, s) = conjugator::<Q>(&v, &p, 1).unwrap();
        assert_eq!(f.instantiate(&p).unwrap().conjugate(&g).unwrap(), fbar.instantiate(&s).unwrap());
    }

    #[test]
    fn no_modification_without_right_neighbour() {
        // a = (1,2,1): K has nothing right of b
        let v = from_strings(&OneStringSequence::new(&[1, 2, 1]).unwrap());
        let jk = decompose_jk(&v);
        assert!(jk.k.elements().iter().all(|&i| i <= jk.b[0]));
        let dg = build_diagram(&v);
        assert_eq!(modify_diagram(&dg).arrows, dg.arrows);
        assert_eq!(conjugator::<Q>(&v, &[], 0).unwrap().0, Matrix::identity(v.rank()));
    }

    #[test]
    fn no_even_string_skips_cross_arrow() {
        let v = d(&[1, 1, 0, 1]);
        let x: IdealElement<Q> = element_x(&v).unwrap();
        assert_eq!(roots_of(&x), vec![(2, 4)]);
        assert_eq!(orbit_codim(&x), 0);
        assert_eq!(element_xbar::<Q>(&v).unwrap(), x);
    }

    #[test]
    fn diagram_exports() {
        let dg = build_diagram(&d(&EX_JK));
        let dot = dg.to_dot();
        assert!(dot.contains("v11_1 -> v8_1 [style=dashed, label=\"2\"]"));
        assert!(dot.contains("v6_1 -> v4_0;"));
        let js = dg.to_json();
        assert_eq!(js["arrows"].as_array().unwrap().len(), 11);
    }

    #[test]
    fn single_element_errors_for_families() {
        assert!(element_x::<Q>(&d(&EX_JK)).is_err());
    }

    #[test]
    fn parameters_move_under_conjugation() {
        // a = (1,2,2,1): F(t) meets F̄(-1-t), never F̄(t)
        let v = from_strings(&OneStringSequence::new(&[1, 2, 2, 1]).unwrap());
        for t in [1i64, 3, -5] {
            let (_, s) = conjugator::<Q>(&v, &[Q::from_i64(t)], 0).unwrap();
            assert_eq!(s, vec![Q::from_i64(-1 - t)]);
            let x = family(&v).instantiate(&[Q::from_i64(t)]).unwrap();
            let same = modified_family(&v).instantiate(&[Q::from_i64(t)]).unwrap();
            assert!(solve_conjugator(&x, &same, 0).is_none());
        }
        // a = (1,2,1,2,1): F(t) meets F̄(-t)
        let v = from_strings(&OneStringSequence::new(&[1, 2, 1, 2, 1]).unwrap());
        let (_, s) = conjugator::<Q>(&v, &[Q::from_i64(2)], 0).unwrap();
        assert_eq!(s, vec![Q::from_i64(-2)]);
    }

    #[test]
    fn conjugator_covers_every_family_up_to_twelve() {
        for v in crate::combinatorics::thin_vectors_up_to_len(12) {
            let e = decompose_jk(&v).e();
            let t: Vec<Q> = (0..e.saturating_sub(1)).map(|k| Q::from_i64(2 + 3 * k as i64)).collect();
            let (g, s) = conjugator::<Q>(&v, &t, 0).unwrap();
            assert!(g.is_upper_triangular());
            assert_eq!(s.len(), t.len());
        }
    }
}
