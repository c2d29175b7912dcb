//! Representations of the algebra `A(t,1)`: the quiver with arrows
//! `alpha_i: i -> i+1` and `beta_j: j+2 -> j`, subject to `beta_1 alpha_2 = 0`
//! and `beta_{i+1} alpha_{i+2} = alpha_i beta_i`.
//!
//! Linear maps are stored as matrices acting on column vectors, so the map
//! `M_a -> M_b` is a `dim M_b x dim M_a` matrix.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SparseEchelon};
use crate::matrix_model::IdealElement;

/// `J ⊆ {1..t}` with no two consecutive elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StandardSubset {
    t: usize,
    elems: Vec<usize>,
}

impl StandardSubset {
    pub fn new(t: usize, elems: &[usize]) -> Result<Self> {
        let mut v = elems.to_vec();
        v.sort_unstable();
        let bad = v.windows(2).any(|w| w[1] <= w[0] + 1) || v.first() == Some(&0) || v.last().is_some_and(|&m| m > t);
        if bad {
            return Err(Error::NotStandardSubset(elems.to_vec(), t));
        }
        Ok(StandardSubset { t, elems: v })
    }

    /// `{.., i-4, i-2, i}`.
    pub fn projective(t: usize, i: usize) -> Result<Self> {
        if i == 0 || i > t {
            return Err(Error::NotStandardSubset(vec![i], t));
        }
        let elems: Vec<usize> = (1..=i).rev().step_by(2).collect();
        StandardSubset::new(t, &elems)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elems.binary_search(&i).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.elems.last().copied()
    }

    /// `#{j in J : j <= i}`.
    pub fn count_up_to(&self, i: usize) -> usize {
        self.elems.partition_point(|&j| j <= i)
    }

    /// Every standard subset of `{1..t}`.
    pub fn all(t: usize) -> Vec<StandardSubset> {
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << t) {
            if mask & (mask >> 1) != 0 {
                continue;
            }
            let elems: Vec<usize> = (0..t).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            out.push(StandardSubset { t, elems });
        }
        out
    }
}

/// A finite dimensional representation of `A(t,l)`. Only `l = 1` is
/// supported by the operations below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverModule<F> {
    t: usize,
    l: usize,
    dims: Vec<usize>,
    alpha: Vec<Matrix<F>>,
    beta: Vec<Matrix<F>>,
}

impl<F: Field> QuiverModule<F> {
    /// Checks shapes and relations. `alpha[i-1]` is `alpha_i`, `beta[j-1]`
    /// is `beta_j`.
    pub fn new(t: usize, dims: Vec<usize>, alpha: Vec<Matrix<F>>, beta: Vec<Matrix<F>>) -> Result<Self> {
        let m = QuiverModule { t, l: 1, dims, alpha, beta };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let t = self.t;
        let bad = |s: String| Err(Error::InvalidModule(s));
        if self.dims.len() != t {
            return bad(format!("expected {t} dimensions, got {}", self.dims.len()));
        }
        if self.alpha.len() != t.saturating_sub(1) || self.beta.len() != t.saturating_sub(2) {
            return bad("wrong number of arrows".into());
        }
        for i in 1..t {
            let a = &self.alpha[i - 1];
            if a.rows() != self.dim(i + 1) || a.cols() != self.dim(i) {
                return bad(format!("alpha_{i} has the wrong shape"));
            }
        }
        for j in 1..t.saturating_sub(1) {
            let b = &self.beta[j - 1];
            if b.rows() != self.dim(j) || b.cols() != self.dim(j + 2) {
                return bad(format!("beta_{j} has the wrong shape"));
            }
        }
        if t >= 3 && !self.beta(1).mul(self.alpha(2)).is_zero() {
            return bad("beta_1 alpha_2 != 0".into());
        }
        for i in 1..t.saturating_sub(2) {
            if self.beta(i + 1).mul(self.alpha(i + 2)) != self.alpha(i).mul(self.beta(i)) {
                return bad(format!("beta_{} alpha_{} != alpha_{i} beta_{i}", i + 1, i + 2));
            }
        }
        Ok(())
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn level(&self) -> usize {
        self.l
    }

    /// `dim M_i`, zero outside `1..=t`.
    pub fn dim(&self, i: usize) -> usize {
        if i >= 1 && i <= self.t {
            self.dims[i - 1]
        } else {
            0
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn alpha(&self, i: usize) -> &Matrix<F> {
        &self.alpha[i - 1]
    }

    pub fn beta(&self, j: usize) -> &Matrix<F> {
        &self.beta[j - 1]
    }

    /// `(dim M_1, dim M_2 - dim M_1, ..)`; meaningful for Delta-good modules.
    pub fn delta_dim(&self) -> Vec<i64> {
        (1..=self.t).map(|i| self.dim(i) as i64 - self.dim(i - 1) as i64).collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.t != other.t {
            return Err(Error::QuiverMismatch(self.t, other.t));
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let alpha = self.alpha.iter().zip(&other.alpha).map(|(a, b)| block_diag(a, b)).collect();
        let beta = self.beta.iter().zip(&other.beta).map(|(a, b)| block_diag(a, b)).collect();
        Ok(QuiverModule { t: self.t, l: 1, dims, alpha, beta })
    }

    pub fn direct_sum_all(parts: &[Self]) -> Result<Self> {
        let (first, rest) = parts.split_first().ok_or(Error::Empty)?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.direct_sum(m))
    }

    /// The subrepresentation spanned by the chosen basis vectors at each
    /// vertex, or an error if those spans are not stable.
    pub fn submodule_on(&self, keep: &[Vec<usize>]) -> Result<Self> {
        self.restrict(keep, true)
    }

    /// The quotient by the span of the basis vectors *not* listed in `keep`.
    pub fn quotient_on(&self, keep: &[Vec<usize>]) -> Result<Self> {
        self.restrict(keep, false)
    }

    fn restrict(&self, keep: &[Vec<usize>], sub: bool) -> Result<Self> {
        if keep.len() != self.t {
            return Err(Error::InvalidModule("one coordinate list per vertex expected".into()));
        }
        let drop: Vec<Vec<usize>> = (1..=self.t)
            .map(|i| (0..self.dim(i)).filter(|c| !keep[i - 1].contains(c)).collect())
            .collect();
        // stability: a sub must not leak into the dropped coordinates; for a
        // quotient the dropped coordinates must form a sub.
        let (inside, outside) = if sub { (keep, &drop[..]) } else { (&drop[..], keep) };
        let leaks = |m: &Matrix<F>, src: usize, dst: usize| {
            outside[dst - 1].iter().any(|&r| inside[src - 1].iter().any(|&c| !m.get(r, c).is_zero()))
        };
        for i in 1..self.t {
            if leaks(self.alpha(i), i, i + 1) {
                return Err(Error::InvalidModule(format!("coordinates not stable under alpha_{i}")));
            }
        }
        for j in 1..self.t.saturating_sub(1) {
            if leaks(self.beta(j), j + 2, j) {
                return Err(Error::InvalidModule(format!("coordinates not stable under beta_{j}")));
            }
        }
        let pick = |m: &Matrix<F>, rows: &[usize], cols: &[usize]| {
            Matrix::from_fn(rows.len(), cols.len(), |r, c| m.get(rows[r], cols[c]).clone())
        };
        let dims = keep.iter().map(|k| k.len()).collect();
        let alpha = (1..self.t).map(|i| pick(self.alpha(i), &keep[i], &keep[i - 1])).collect();
        let beta = (1..self.t.saturating_sub(1))
            .map(|j| pick(self.beta(j), &keep[j - 1], &keep[j + 1]))
            .collect();
        QuiverModule::new(self.t, dims, alpha, beta)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mats = |ms: &[Matrix<F>]| -> Vec<Vec<Vec<String>>> {
            ms.iter()
                .map(|m| (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect()).collect())
                .collect()
        };
        serde_json::to_value(ModuleJson {
            t: self.t,
            l: self.l,
            dims: self.dims.clone(),
            alpha: mats(&self.alpha),
            beta: mats(&self.beta),
        })
        .expect("module serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: ModuleJson = serde_json::from_value(value.clone())?;
        if raw.l != 1 {
            return Err(Error::UnsupportedLevel(raw.l));
        }
        let dims = raw.dims.clone();
        let mat = |rows: usize, cols: usize, m: &Vec<Vec<String>>| -> Result<Matrix<F>> {
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(Error::InvalidModule("matrix shape does not match dimensions".into()));
            }
            let data = m.iter().flatten().map(|s| F::parse(s)).collect::<Result<Vec<F>>>()?;
            Ok(Matrix::from_rows(rows, cols, data).unwrap())
        };
        let d = |i: usize| if i >= 1 && i <= raw.t { dims.get(i - 1).copied().unwrap_or(0) } else { 0 };
        if raw.alpha.len() != raw.t.saturating_sub(1) || raw.beta.len() != raw.t.saturating_sub(2) {
            return Err(Error::InvalidModule("wrong number of arrows".into()));
        }
        let alpha = raw.alpha.iter().enumerate().map(|(k, m)| mat(d(k + 2), d(k + 1), m)).collect::<Result<_>>()?;
        let beta = raw.beta.iter().enumerate().map(|(k, m)| mat(d(k + 1), d(k + 3), m)).collect::<Result<_>>()?;
        QuiverModule::new(raw.t, raw.dims, alpha, beta)
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    t: usize,
    l: usize,
    dims: Vec<usize>,
    alpha: Vec<Vec<Vec<String>>>,
    beta: Vec<Vec<Vec<String>>>,
}

fn block_diag<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    Matrix::from_fn(a.rows() + b.rows(), a.cols() + b.cols(), |r, c| {
        if r < a.rows() && c < a.cols() {
            a.get(r, c).clone()
        } else if r >= a.rows() && c >= a.cols() {
            b.get(r - a.rows(), c - a.cols()).clone()
        } else {
            F::zero()
        }
    })
}

/// The shift `e_h -> e_{h+offset}` from `k^cols` to `k^rows`, with indices
/// running off either end sent to zero.
fn shift<F: Field>(rows: usize, cols: usize, offset: isize) -> Matrix<F> {
    Matrix::from_fn(rows, cols, |r, c| if r as isize == c as isize + offset { F::one() } else { F::zero() })
}

/// `Delta(J)`: `Delta(J)_i = k^{#{j in J, j <= i}}`, alpha the inclusions,
/// beta the shift `e_h -> e_{h-1}`.
pub fn standard_module<F: Field>(j: &StandardSubset) -> QuiverModule<F> {
    let t = j.t();
    let dims: Vec<usize> = (1..=t).map(|i| j.count_up_to(i)).collect();
    let d = |i: usize| dims[i - 1];
    let alpha = (1..t).map(|i| shift(d(i + 1), d(i), 0)).collect();
    let beta = (1..t.saturating_sub(1)).map(|k| shift(d(k), d(k + 2), -1)).collect();
    QuiverModule::new(t, dims.clone(), alpha, beta).expect("standard modules satisfy the relations")
}

/// `P(i) = Delta({.., i-2, i})`.
pub fn projective<F: Field>(t: usize, i: usize) -> Result<QuiverModule<F>> {
    Ok(standard_module(&StandardSubset::projective(t, i)?))
}

pub fn is_delta_good<F: Field>(m: &QuiverModule<F>) -> bool {
    (1..m.t()).all(|i| m.alpha(i).is_injective())
}

/// `M(x)`: `M_i = V_i`, alpha the flag inclusions, `beta_j = x|V_{j+2}`.
pub fn module_from_element<F: Field>(x: &IdealElement<F>) -> QuiverModule<F> {
    let d = x.d();
    let t = d.len();
    let sums = d.partial_sums();
    let dims: Vec<usize> = sums[1..].to_vec();
    let xm = x.to_matrix();
    let alpha = (1..t).map(|i| shift(sums[i + 1], sums[i], 0)).collect();
    let beta = (1..t.saturating_sub(1))
        .map(|j| Matrix::from_fn(sums[j], sums[j + 2], |r, c| xm.get(r, c).clone()))
        .collect();
    QuiverModule::new(t, dims, alpha, beta).expect("x maps V_i into V_{i-2}")
}

/// `hom(Delta(J), Delta(K))`: the greatest `m <= s` with `r >= m` and
/// `j_{r-i} >= k_{m-i}` for `0 <= i < m`, where `r = #J`, `s = #K`.
pub fn hom_dim_standard(j: &StandardSubset, k: &StandardSubset) -> usize {
    let (jv, kv) = (j.elements(), k.elements());
    let (r, s) = (jv.len(), kv.len());
    (1..=s.min(r))
        .rev()
        .find(|&m| (0..m).all(|i| jv[r - 1 - i] >= kv[m - 1 - i]))
        .unwrap_or(0)
}

/// A family of linear maps `phi_i: M_i -> N_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism<F> {
    components: Vec<Matrix<F>>,
}

impl<F: Field> ModuleMorphism<F> {
    pub fn new(components: Vec<Matrix<F>>) -> Self {
        ModuleMorphism { components }
    }

    pub fn zero(m: &QuiverModule<F>, n: &QuiverModule<F>) -> Self {
        ModuleMorphism { components: (1..=m.t()).map(|i| Matrix::zeros(n.dim(i), m.dim(i))).collect() }
    }

    pub fn identity(m: &QuiverModule<F>) -> Self {
        ModuleMorphism { components: (1..=m.t()).map(|i| Matrix::identity(m.dim(i))).collect() }
    }

    pub fn component(&self, i: usize) -> &Matrix<F> {
        &self.components[i - 1]
    }

    pub fn components(&self) -> &[Matrix<F>] {
        &self.components
    }

    pub fn is_homomorphism(&self, m: &QuiverModule<F>, n: &QuiverModule<F>) -> bool {
        let t = m.t();
        if n.t() != t || self.components.len() != t {
            return false;
        }
        let shapes = (1..=t).all(|i| self.component(i).rows() == n.dim(i) && self.component(i).cols() == m.dim(i));
        shapes
            && (1..t).all(|i| self.component(i + 1).mul(m.alpha(i)) == n.alpha(i).mul(self.component(i)))
            && (1..t.saturating_sub(1)).all(|j| self.component(j).mul(m.beta(j)) == n.beta(j).mul(self.component(j + 2)))
    }

    /// `other . self`.
    pub fn then(&self, other: &Self) -> Self {
        ModuleMorphism {
            components: self.components.iter().zip(&other.components).map(|(a, b)| b.mul(a)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ModuleMorphism { components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        ModuleMorphism { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|c| c.is_injective())
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().all(|c| c.is_surjective())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(|c| c.is_square() && c.inverse().is_some())
    }

    /// Assembles a morphism `sum_a M_a -> sum_b N_b` from blocks
    /// `blocks[b][a]: M_a -> N_b` (missing blocks are zero).
    pub fn from_blocks(
        sources: &[QuiverModule<F>],
        targets: &[QuiverModule<F>],
        blocks: &[Vec<Option<ModuleMorphism<F>>>],
    ) -> Self {
        let t = sources[0].t();
        let components = (1..=t)
            .map(|i| {
                let rows: usize = targets.iter().map(|n| n.dim(i)).sum();
                let cols: usize = sources.iter().map(|m| m.dim(i)).sum();
                let mut out = Matrix::zeros(rows, cols);
                let mut r0 = 0;
                for (b, n) in targets.iter().enumerate() {
                    let mut c0 = 0;
                    for (a, m) in sources.iter().enumerate() {
                        if let Some(f) = &blocks[b][a] {
                            let blk = f.component(i);
                            for r in 0..blk.rows() {
                                for c in 0..blk.cols() {
                                    out.set(r0 + r, c0 + c, blk.get(r, c).clone());
                                }
                            }
                        }
                        c0 += m.dim(i);
                    }
                    r0 += n.dim(i);
                }
                out
            })
            .collect();
        ModuleMorphism { components }
    }
}

/// The standard morphism `phi^{k_m}: Delta(J) -> Delta(K)`, determined by
/// `phi_t(e_r) = e_m` with `r = #J`; each `phi_i` is the restriction of
/// `phi_t`.
pub fn standard_morphism<F: Field>(j: &StandardSubset, k: &StandardSubset, k_m: usize) -> Result<ModuleMorphism<F>> {
    let m = k.elements().iter().position(|&v| v == k_m).ok_or(Error::InadmissibleIndex(k_m))? + 1;
    if m > hom_dim_standard(j, k) {
        return Err(Error::InadmissibleIndex(k_m));
    }
    let r = j.len() as isize;
    let components = (1..=j.t())
        .map(|i| shift(k.count_up_to(i), j.count_up_to(i), m as isize - r))
        .collect();
    let phi = ModuleMorphism { components };
    debug_assert!(phi.is_homomorphism(&standard_module(j), &standard_module(k)));
    Ok(phi)
}

#[derive(Clone, Debug)]
pub struct HomSpace<F> {
    pub dimension: usize,
    pub basis: Vec<ModuleMorphism<F>>,
}

/// Offsets of the unknowns `phi_i[r][c]`, vertex by vertex, row-major.
fn hom_layout<F: Field>(m: &QuiverModule<F>, n: &QuiverModule<F>) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(m.t());
    let mut total = 0;
    for i in 1..=m.t() {
        offsets.push(total);
        total += n.dim(i) * m.dim(i);
    }
    (offsets, total)
}

fn hom_system<F: Field>(m: &QuiverModule<F>, n: &QuiverModule<F>) -> Result<(SparseEchelon<F>, Vec<usize>)> {
    if m.t() != n.t() {
        return Err(Error::QuiverMismatch(m.t(), n.t()));
    }
    if m.level() != 1 || n.level() != 1 {
        return Err(Error::UnsupportedLevel(m.level().max(n.level())));
    }
    let t = m.t();
    let (off, total) = hom_layout(m, n);
    let var = |i: usize, r: usize, c: usize| off[i - 1] + r * m.dim(i) + c;
    let mut ech = SparseEchelon::new(total);
    let mut push = |eq: BTreeMap<usize, F>| {
        let row: Vec<(usize, F)> = eq.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if !row.is_empty() {
            ech.insert(row);
        }
    };
    let add = |eq: &mut BTreeMap<usize, F>, k: usize, v: F| {
        let e = eq.remove(&k).unwrap_or_else(F::zero) + v;
        eq.insert(k, e);
    };
    // phi_a . f = g . phi_b for an arrow b -> a with f on M, g on N
    let mut square = |a: usize, b: usize, f: &Matrix<F>, g: &Matrix<F>| {
        for r in 0..n.dim(a) {
            for c in 0..m.dim(b) {
                let mut eq = BTreeMap::new();
                for k in 0..m.dim(a) {
                    let v = f.get(k, c);
                    if !v.is_zero() {
                        add(&mut eq, var(a, r, k), v.clone());
                    }
                }
                for k in 0..n.dim(b) {
                    let v = g.get(r, k);
                    if !v.is_zero() {
                        add(&mut eq, var(b, k, c), -v.clone());
                    }
                }
                push(eq);
            }
        }
    };
    for i in 1..t {
        square(i + 1, i, m.alpha(i), n.alpha(i));
    }
    for j in 1..t.saturating_sub(1) {
        square(j, j + 2, m.beta(j), n.beta(j));
    }
    Ok((ech, off))
}

/// `dim Hom(M, N)` from the commutation equations.
pub fn hom_dim<F: Field>(m: &QuiverModule<F>, n: &QuiverModule<F>) -> Result<usize> {
    let (ech, _) = hom_system(m, n)?;
    Ok(ech.cols() - ech.rank())
}

/// A basis of `Hom(M, N)`.
pub fn hom_space<F: Field>(m: &QuiverModule<F>, n: &QuiverModule<F>) -> Result<HomSpace<F>> {
    let (ech, off) = hom_system(m, n)?;
    let basis: Vec<ModuleMorphism<F>> = ech
        .nullspace()
        .into_iter()
        .map(|v| {
            let components = (1..=m.t())
                .map(|i| {
                    let (rows, cols) = (n.dim(i), m.dim(i));
                    Matrix::from_rows(rows, cols, v[off[i - 1]..off[i - 1] + rows * cols].to_vec()).unwrap()
                })
                .collect();
            ModuleMorphism { components }
        })
        .collect();
    Ok(HomSpace { dimension: basis.len(), basis })
}

/// `<M, N> = sum_i (dim_Delta M)_i (dim N_i - dim N_{i-2})`.
pub fn euler_form<F: Field>(m: &QuiverModule<F>, n: &QuiverModule<F>) -> Result<i64> {
    if m.t() != n.t() {
        return Err(Error::QuiverMismatch(m.t(), n.t()));
    }
    if !is_delta_good(m) {
        return Err(Error::NotDeltaGood);
    }
    let dd = m.delta_dim();
    Ok((1..=m.t())
        .map(|i| dd[i - 1] * (n.dim(i) as i64 - if i > 2 { n.dim(i - 2) as i64 } else { 0 }))
        .sum())
}

/// `dim Ext^1(M, N) = dim Hom(M, N) - <M, N>` for Delta-good `M`.
pub fn ext1_dim<F: Field>(m: &QuiverModule<F>, n: &QuiverModule<F>) -> Result<usize> {
    let e = euler_form(m, n)?;
    let h = hom_dim(m, n)? as i64;
    let x = h - e;
    assert!(x >= 0, "negative Ext dimension: hom {h}, euler {e}");
    Ok(x as usize)
}

/// Looks for an isomorphism among random combinations of a Hom basis.
/// A `Some` answer is a verified isomorphism.
pub fn find_isomorphism<F: Field>(m: &QuiverModule<F>, n: &QuiverModule<F>, seed: u64) -> Result<Option<ModuleMorphism<F>>> {
    if m.dims() != n.dims() {
        return Ok(None);
    }
    let hom = hom_space(m, n)?;
    if hom.basis.is_empty() {
        return Ok(m.total_dim() == 0).map(|z| z.then(|| ModuleMorphism::zero(m, n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let mut phi = ModuleMorphism::zero(m, n);
        for b in &hom.basis {
            phi = phi.add(&b.scale(&F::from_i64(rng.gen_range(-50..=50))));
        }
        if phi.is_isomorphism() {
            debug_assert!(phi.is_homomorphism(m, n));
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

pub fn is_isomorphic<F: Field>(m: &QuiverModule<F>, n: &QuiverModule<F>, seed: u64) -> Result<bool> {
    Ok(find_isomorphism(m, n, seed)?.is_some())
}

/// The two-term projective resolution
/// `0 -> sum_i P(b_i) -> sum_i P(b_i - 1) + P(c) -> Delta(J) -> 0`
/// with `c = max J`.
#[derive(Clone, Debug)]
pub struct ProjResolution<F> {
    pub t: usize,
    pub b: Vec<usize>,
    pub c: usize,
    /// Indices `i` of the summands `P(i)` in degree one.
    pub p1: Vec<usize>,
    /// Indices `i` of the summands `P(i)` in degree zero.
    pub p0: Vec<usize>,
    pub p1_module: QuiverModule<F>,
    pub p0_module: QuiverModule<F>,
    pub target: QuiverModule<F>,
    pub psi: ModuleMorphism<F>,
    pub pi: ModuleMorphism<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionCheck {
    pub psi_homomorphism: bool,
    pub pi_homomorphism: bool,
    pub psi_injective: bool,
    pub pi_surjective: bool,
    pub composite_zero: bool,
    pub dimensions_add_up: bool,
}

impl ResolutionCheck {
    pub fn all(&self) -> bool {
        self.psi_homomorphism
            && self.pi_homomorphism
            && self.psi_injective
            && self.pi_surjective
            && self.composite_zero
            && self.dimensions_add_up
    }
}

pub fn proj_resolution_t<F: Field>(j: &StandardSubset, b: &[usize]) -> Result<ProjResolution<F>> {
    let t = j.t();
    let shape = |msg: String| Err(Error::WrongSubsetShape(msg));
    if b.is_empty() {
        return shape("no even internal strings".into());
    }
    if b.windows(2).any(|w| w[1] <= w[0] || (w[1] - w[0]) % 2 == 0) {
        return shape(format!("positions {b:?} must increase with odd gaps"));
    }
    for &bi in b {
        if bi < 2 || !j.contains(bi - 1) || !j.contains(bi + 2) {
            return shape(format!("{} and {} must lie in J", bi as isize - 1, bi + 2));
        }
    }
    let c = j.max().unwrap();
    let e = b.len();
    let next = |i: usize| if i + 1 < e { b[i + 1] - 1 } else { c };
    if !(next(e - 1) + b[e - 1]).is_multiple_of(2) {
        return shape(format!("c = {c} has the wrong parity"));
    }
    let p = |i: usize| -> Result<(StandardSubset, QuiverModule<F>)> {
        let s = StandardSubset::projective(t, i)?;
        let m = standard_module(&s);
        Ok((s, m))
    };
    let p1: Vec<usize> = b.to_vec();
    let mut p0: Vec<usize> = b.iter().map(|&bi| bi - 1).collect();
    p0.push(c);
    let src: Vec<(StandardSubset, QuiverModule<F>)> = p1.iter().map(|&i| p(i)).collect::<Result<_>>()?;
    let dst: Vec<(StandardSubset, QuiverModule<F>)> = p0.iter().map(|&i| p(i)).collect::<Result<_>>()?;
    let target = standard_module::<F>(j);

    // psi_i = (phi^{b_i - 1}, phi^{b_i}) into P(b_i - 1) and the next summand
    let mut blocks: Vec<Vec<Option<ModuleMorphism<F>>>> = vec![vec![None; e]; e + 1];
    for i in 0..e {
        blocks[i][i] = Some(standard_morphism(&src[i].0, &dst[i].0, b[i] - 1)?);
        blocks[i + 1][i] = Some(standard_morphism(&src[i].0, &dst[i + 1].0, b[i])?);
    }
    let src_mods: Vec<QuiverModule<F>> = src.iter().map(|(_, m)| m.clone()).collect();
    let dst_mods: Vec<QuiverModule<F>> = dst.iter().map(|(_, m)| m.clone()).collect();
    let psi = ModuleMorphism::from_blocks(&src_mods, &dst_mods, &blocks);

    // alternating signs make consecutive composites cancel
    let mut pi_blocks: Vec<Vec<Option<ModuleMorphism<F>>>> = vec![vec![None; e + 1]];
    for (k, &i) in p0.iter().enumerate() {
        let phi = standard_morphism(&dst[k].0, j, i)?;
        let sign = if k % 2 == 0 { F::one() } else { -F::one() };
        pi_blocks[0][k] = Some(phi.scale(&sign));
    }
    let pi = ModuleMorphism::from_blocks(&dst_mods, std::slice::from_ref(&target), &pi_blocks);

    Ok(ProjResolution {
        t,
        b: b.to_vec(),
        c,
        p1,
        p0,
        p1_module: QuiverModule::direct_sum_all(&src_mods)?,
        p0_module: QuiverModule::direct_sum_all(&dst_mods)?,
        target,
        psi,
        pi,
    })
}

impl<F: Field> ProjResolution<F> {
    pub fn verify(&self) -> ResolutionCheck {
        ResolutionCheck {
            psi_homomorphism: self.psi.is_homomorphism(&self.p1_module, &self.p0_module),
            pi_homomorphism: self.pi.is_homomorphism(&self.p0_module, &self.target),
            psi_injective: self.psi.is_injective(),
            pi_surjective: self.pi.is_surjective(),
            composite_zero: self.psi.then(&self.pi).is_zero(),
            dimensions_add_up: (1..=self.t)
                .all(|i| self.p0_module.dim(i) == self.p1_module.dim(i) + self.target.dim(i)),
        }
    }

    /// `dim Ext^1(T, N)` from the long exact sequence, using
    /// `hom(P(i), N) = dim N_i`.
    pub fn ext1_via_resolution(&self, n: &QuiverModule<F>) -> Result<usize> {
        let h1: usize = self.p1.iter().map(|&i| n.dim(i)).sum();
        let h0: usize = self.p0.iter().map(|&i| n.dim(i)).sum();
        let ht = hom_dim(&self.target, n)?;
        Ok((h1 + ht).checked_sub(h0).expect("exact sequence has nonnegative cokernel"))
    }
}
