//! The ideal `n = n(d)` of strictly upper triangular `n x n` matrices
//! mapping `V_i` into `V_{i-2}`, its elements, and rank computations for
//! the adjoint action of the Borel subgroup.
//!
//! Roots are written in flag labels: `(i, j)` with `i, j` in `supp d`. The
//! root vector `f_ij` is the matrix unit with a one at row `gamma(i)` and
//! column `gamma(j)`, so it maps `f_j` to `f_i`.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{relabel, Relabeling, ThinDimVector};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SparseEchelon};

pub type Root = (usize, usize);

/// The roots of `n(d)`, listed in the order `(i,j) < (i',j')` iff `j < j'`,
/// or `j = j'` and `i > i'`.
#[derive(Clone, Debug)]
pub struct RootSet {
    d: ThinDimVector,
    gamma: Relabeling,
    roots: Vec<Root>,
    index: HashMap<Root, usize>,
}

impl RootSet {
    pub fn new(d: &ThinDimVector) -> Self {
        let supp = d.support();
        let mut roots = Vec::new();
        for &j in &supp {
            for &i in supp.iter().rev() {
                if i + 2 <= j {
                    roots.push((i, j));
                }
            }
        }
        let index = roots.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        RootSet { d: d.clone(), gamma: relabel(d), roots, index }
    }

    pub fn d(&self) -> &ThinDimVector {
        &self.d
    }

    pub fn gamma(&self) -> &Relabeling {
        &self.gamma
    }

    /// `n = sum d_i`, the size of the matrices.
    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    /// `dim n`.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// 0-based position of a root; `beta_{l}` sits at position `l - 1`.
    pub fn position(&self, root: Root) -> Option<usize> {
        self.index.get(&root).copied()
    }

    pub fn contains(&self, root: Root) -> bool {
        self.index.contains_key(&root)
    }

    /// Matrix position (0-based row, column) of a root.
    pub fn matrix_position(&self, (i, j): Root) -> (usize, usize) {
        (self.gamma.gamma(i).unwrap() - 1, self.gamma.gamma(j).unwrap() - 1)
    }

    /// Root sitting at a 0-based matrix position, if that position lies in `n`.
    pub fn root_at(&self, row: usize, col: usize) -> Option<Root> {
        let i = self.gamma.label(row + 1)?;
        let j = self.gamma.label(col + 1)?;
        self.contains((i, j)).then_some((i, j))
    }

    /// Lookup table from matrix position to root position.
    pub fn position_table(&self) -> Vec<Option<usize>> {
        let n = self.n();
        let mut table = vec![None; n * n];
        for (k, &r) in self.roots.iter().enumerate() {
            let (a, b) = self.matrix_position(r);
            table[a * n + b] = Some(k);
        }
        table
    }
}

pub fn ideal_roots(d: &ThinDimVector) -> RootSet {
    RootSet::new(d)
}

/// A sparse element of `n(d)`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealElement<F> {
    d: ThinDimVector,
    entries: BTreeMap<Root, F>,
}

impl<F: Field> IdealElement<F> {
    pub fn zero(d: &ThinDimVector) -> Self {
        IdealElement { d: d.clone(), entries: BTreeMap::new() }
    }

    pub fn d(&self) -> &ThinDimVector {
        &self.d
    }

    pub fn entries(&self) -> &BTreeMap<Root, F> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coefficient(&self, root: Root) -> F {
        self.entries.get(&root).cloned().unwrap_or_else(F::zero)
    }

    /// Coordinates in root order.
    pub fn coordinates(&self, roots: &RootSet) -> Vec<F> {
        roots.roots().iter().map(|&r| self.coefficient(r)).collect()
    }

    pub fn from_coordinates(roots: &RootSet, coords: &[F]) -> Self {
        let entries = roots
            .roots()
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&r, c)| (r, c.clone()))
            .collect();
        IdealElement { d: roots.d().clone(), entries }
    }

    pub fn to_matrix(&self) -> Matrix<F> {
        let g = relabel(&self.d);
        let mut m = Matrix::zeros(g.len(), g.len());
        for (&(i, j), c) in &self.entries {
            m.set(g.gamma(i).unwrap() - 1, g.gamma(j).unwrap() - 1, c.clone());
        }
        m
    }

    /// Reads an `n x n` matrix back as an element; fails if some nonzero
    /// entry lies outside `n`.
    pub fn from_matrix(d: &ThinDimVector, m: &Matrix<F>) -> Result<Self> {
        let g = relabel(d);
        let roots = RootSet::new(d);
        let mut entries = BTreeMap::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if v.is_zero() {
                    continue;
                }
                let root = (g.label(r + 1).unwrap(), g.label(c + 1).unwrap());
                if !roots.contains(root) {
                    return Err(Error::RootNotInIdeal(root.0, root.1));
                }
                entries.insert(root, v.clone());
            }
        }
        Ok(IdealElement { d: d.clone(), entries })
    }

    /// `g x g^{-1}`.
    pub fn conjugate(&self, g: &Matrix<F>) -> Result<Self> {
        let inv = g
            .inverse()
            .ok_or_else(|| Error::Construction("conjugating matrix is singular".into()))?;
        Self::from_matrix(&self.d, &g.mul(&self.to_matrix()).mul(&inv))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        for (&r, c) in &other.entries {
            let v = entries.remove(&r).unwrap_or_else(F::zero) + c.clone();
            if !v.is_zero() {
                entries.insert(r, v);
            }
        }
        IdealElement { d: self.d.clone(), entries }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.d);
        }
        let entries = self.entries.iter().map(|(&r, v)| (r, v.clone() * c.clone())).collect();
        IdealElement { d: self.d.clone(), entries }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ElementJson::from(self)).expect("element serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: ElementJson = serde_json::from_value(value.clone())?;
        let d = ThinDimVector::new(&raw.d)?;
        let pairs = raw
            .entries
            .iter()
            .map(|(i, j, s)| Ok(((*i, *j), F::parse(s)?)))
            .collect::<Result<Vec<_>>>()?;
        element_from_sparse(&d, pairs)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    d: Vec<i64>,
    entries: Vec<(usize, usize, String)>,
}

impl<F: Field> From<&IdealElement<F>> for ElementJson {
    fn from(x: &IdealElement<F>) -> Self {
        ElementJson {
            d: x.d.clone().into(),
            entries: x.entries.iter().map(|(&(i, j), c)| (i, j, c.to_string())).collect(),
        }
    }
}

pub fn element_from_sparse<F: Field>(
    d: &ThinDimVector,
    pairs: impl IntoIterator<Item = (Root, F)>,
) -> Result<IdealElement<F>> {
    let roots = RootSet::new(d);
    let mut entries = BTreeMap::new();
    for ((i, j), c) in pairs {
        if !roots.contains((i, j)) {
            return Err(Error::RootNotInIdeal(i, j));
        }
        if c.is_zero() {
            return Err(Error::ZeroCoefficient(i, j));
        }
        entries.insert((i, j), c);
    }
    Ok(IdealElement { d: d.clone(), entries })
}

/// The quotient `n_l = n / m_l`, where `m_l` is spanned by the roots after
/// `beta_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub level: usize,
}

impl Truncation {
    pub fn new(roots: &RootSet, level: usize) -> Result<Self> {
        if level > roots.len() {
            return Err(Error::Construction(format!(
                "truncation level {level} exceeds dim n = {}",
                roots.len()
            )));
        }
        Ok(Truncation { level })
    }

    /// `pi_l(x)`, represented by zeroing every coordinate past `beta_l`.
    pub fn apply<F: Field>(&self, roots: &RootSet, x: &IdealElement<F>) -> IdealElement<F> {
        let entries = x
            .entries
            .iter()
            .filter(|(&r, _)| roots.position(r).is_some_and(|p| p < self.level))
            .map(|(&r, c)| (r, c.clone()))
            .collect();
        IdealElement { d: x.d.clone(), entries }
    }
}

/// Rank of `b -> n`, `b |-> bx - xb`, over the upper triangular matrix units.
pub fn ad_image_rank<F: Field>(x: &IdealElement<F>) -> usize {
    let roots = RootSet::new(&x.d);
    let n = roots.n();
    if roots.is_empty() || x.is_zero() {
        return 0;
    }
    let table = roots.position_table();
    let xm = x.to_matrix();
    let mut echelon = SparseEchelon::new(roots.len());
    for a in 0..n {
        for b in a..n {
            // E_ab x has row a equal to row b of x; x E_ab has column b equal
            // to column a of x.
            let mut v: BTreeMap<usize, F> = BTreeMap::new();
            for c in 0..n {
                let xv = xm.get(b, c);
                if !xv.is_zero() {
                    let k = table[a * n + c].expect("ideal is stable under b");
                    let e = v.remove(&k).unwrap_or_else(F::zero) + xv.clone();
                    v.insert(k, e);
                }
                let xv = xm.get(c, a);
                if !xv.is_zero() {
                    let k = table[c * n + b].expect("ideal is stable under b");
                    let e = v.remove(&k).unwrap_or_else(F::zero) - xv.clone();
                    v.insert(k, e);
                }
            }
            let row: Vec<(usize, F)> = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !row.is_empty() {
                echelon.insert(row);
            }
            if echelon.rank() == roots.len() {
                return echelon.rank();
            }
        }
    }
    echelon.rank()
}

/// `dim n - rank ad(x)`, the codimension of `B x` in `n`.
pub fn orbit_codim<F: Field>(x: &IdealElement<F>) -> usize {
    RootSet::new(&x.d).len() - ad_image_rank(x)
}

/// Jordan block sizes of the nilpotent matrix `x`, in decreasing order.
pub fn jordan_type<F: Field>(x: &IdealElement<F>) -> Vec<usize> {
    jordan_type_of_matrix(&x.to_matrix())
}

pub fn jordan_type_of_matrix<F: Field>(m: &Matrix<F>) -> Vec<usize> {
    let n = m.rows();
    // ranks[k] = rank m^k
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n);
    while *ranks.last().unwrap() > 0 {
        power = power.mul(m);
        let r = power.rank();
        assert!(r < *ranks.last().unwrap(), "matrix is not nilpotent");
        ranks.push(r);
    }
    // blocks of size >= k: ranks[k-1] - ranks[k]
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut blocks = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        blocks.extend(std::iter::repeat_n(k, exact));
    }
    blocks
}

/// An element with independent uniform coefficients in `[-bound, bound]`.
pub fn random_element<F: Field>(d: &ThinDimVector, seed: u64, bound: i64) -> IdealElement<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(d, &mut rng, bound)
}

pub fn random_element_with<F: Field, R: Rng>(
    d: &ThinDimVector,
    rng: &mut R,
    bound: i64,
) -> IdealElement<F> {
    let roots = RootSet::new(d);
    let coords: Vec<F> = roots
        .roots()
        .iter()
        .map(|_| F::from_i64(rng.gen_range(-bound..=bound)))
        .collect();
    IdealElement::from_coordinates(&roots, &coords)
}

/// A random invertible upper triangular matrix with entries in
/// `[-bound, bound]` and nonzero diagonal.
pub fn random_borel<F: Field, R: Rng>(n: usize, rng: &mut R, bound: i64) -> Matrix<F> {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            let mut v = 0;
            while v == 0 {
                v = rng.gen_range(-bound..=bound);
            }
            F::from_i64(v)
        } else if i < j {
            F::from_i64(rng.gen_range(-bound..=bound))
        } else {
            F::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{from_strings, thin_vectors_up_to_len, OneStringSequence};
    use crate::field::{Fp, Rational};
    use proptest::prelude::*;

    fn d(v: &[i64]) -> ThinDimVector {
        ThinDimVector::new(v).unwrap()
    }

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn root_examples() {
        let r = ideal_roots(&d(&[1, 1, 0, 1]));
        assert_eq!(r.roots(), &[(2, 4), (1, 4)]);
        assert_eq!(r.matrix_position((2, 4)), (1, 2));
        assert_eq!(ideal_roots(&d(&[1, 1, 1])).roots(), &[(1, 3)]);
        assert!(ideal_roots(&d(&[1, 1])).is_empty());
    }

    #[test]
    fn root_order_is_column_then_reverse_row() {
        let r = ideal_roots(&d(&[1, 1, 1, 1, 1]));
        assert_eq!(r.roots(), &[(1, 3), (2, 4), (1, 4), (3, 5), (2, 5), (1, 5)]);
    }

    /// `f(V_m) ⊆ V_{m-2}` for every `m`, applied to one matrix unit.
    fn unit_preserves_flag(d: &ThinDimVector, i: usize, j: usize) -> bool {
        (1..=d.len()).all(|m| {
            // f_ij maps f_j to f_i and kills the other basis vectors
            let in_v = |k: usize, level: isize| level >= 1 && k as isize <= level;
            !in_v(j, m as isize) || in_v(i, m as isize - 2)
        })
    }

    #[test]
    fn membership_matches_flag_definition() {
        for v in thin_vectors_up_to_len(12) {
            let roots = ideal_roots(&v);
            let supp = v.support();
            for &i in &supp {
                for &j in &supp {
                    assert_eq!(roots.contains((i, j)), unit_preserves_flag(&v, i, j), "{v} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn element_construction_errors() {
        let v = d(&[1, 1, 0, 1]);
        let x = element_from_sparse(&v, [((2, 4), q(1))]).unwrap();
        let m = x.to_matrix();
        assert!(m.get(1, 2).is_one());
        assert_eq!(element_from_sparse(&v, [((1, 2), q(1))]), Err(Error::RootNotInIdeal(1, 2)));
        assert_eq!(element_from_sparse(&v, [((1, 4), q(0))]), Err(Error::ZeroCoefficient(1, 4)));
    }

    #[test]
    fn ad_rank_examples() {
        let v = d(&[1, 1, 0, 1]);
        let x = element_from_sparse(&v, [((2, 4), q(1))]).unwrap();
        assert_eq!(ad_image_rank(&x), 2);
        assert_eq!(orbit_codim(&x), 0);
        let y = element_from_sparse(&v, [((1, 4), q(1))]).unwrap();
        assert_eq!(ad_image_rank(&y), 1);
        let z = IdealElement::<Rational>::zero(&v);
        assert_eq!(ad_image_rank(&z), 0);
        assert_eq!(orbit_codim(&z), 2);
    }

    #[test]
    fn jordan_examples() {
        let v = d(&[1, 1, 0, 1]);
        let x = element_from_sparse(&v, [((2, 4), q(1))]).unwrap();
        assert_eq!(jordan_type(&x), vec![2, 1]);
        assert_eq!(jordan_type(&IdealElement::<Rational>::zero(&v)), vec![1, 1, 1]);
        let w = d(&[1, 1, 1, 1, 1]);
        let chain = element_from_sparse(&w, [((1, 3), q(1)), ((3, 5), q(1))]).unwrap();
        assert_eq!(jordan_type(&chain), vec![3, 1, 1]);
    }

    #[test]
    fn json_round_trip() {
        let v = d(&[1, 1, 0, 1, 1]);
        let x = element_from_sparse(&v, [((1, 4), q(-3)), ((2, 5), Rational::parse("2/7").unwrap())]).unwrap();
        let js = x.to_json();
        assert_eq!(js["entries"][0], serde_json::json!([1, 4, "-3"]));
        assert_eq!(IdealElement::<Rational>::from_json(&js).unwrap(), x);
    }

    #[test]
    fn truncation_zeroes_tail() {
        let v = d(&[1, 1, 1, 1]);
        let roots = ideal_roots(&v);
        let x = element_from_sparse(&v, [((1, 3), q(1)), ((2, 4), q(2)), ((1, 4), q(3))]).unwrap();
        let t = Truncation::new(&roots, 2).unwrap();
        assert_eq!(t.apply(&roots, &x).entries().len(), 2);
        assert!(Truncation::new(&roots, 0).unwrap().apply(&roots, &x).is_zero());
        assert!(Truncation::new(&roots, 4).is_err());
    }

    #[test]
    fn random_element_is_deterministic() {
        let v = from_strings(&OneStringSequence::new(&[2, 3, 1]).unwrap());
        let a: IdealElement<Rational> = random_element(&v, 11, 100);
        let b: IdealElement<Rational> = random_element(&v, 11, 100);
        assert_eq!(a, b);
        assert!(random_element::<Rational>(&d(&[1, 1]), 3, 100).is_zero());
    }

    #[test]
    fn prime_field_rank_agrees_generically() {
        let v = from_strings(&OneStringSequence::new(&[1, 3, 2]).unwrap());
        let x: IdealElement<Rational> = random_element(&v, 5, 100);
        let y: IdealElement<Fp<10007>> = random_element(&v, 5, 100);
        assert_eq!(orbit_codim(&x), orbit_codim(&y));
    }

    fn arb_d() -> impl Strategy<Value = ThinDimVector> {
        prop::collection::vec(1i64..4, 1..5)
            .prop_map(|a| from_strings(&OneStringSequence::new(&a).unwrap()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn codim_and_jordan_are_conjugation_invariant(v in arb_d(), seed in any::<u64>(), bound in 1i64..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: IdealElement<Rational> = random_element_with(&v, &mut rng, bound);
            let g: Matrix<Rational> = random_borel(v.rank(), &mut rng, 5);
            let y = x.conjugate(&g).unwrap();
            prop_assert_eq!(orbit_codim(&x), orbit_codim(&y));
            prop_assert_eq!(jordan_type(&x), jordan_type(&y));
            let dim = ideal_roots(&v).len();
            prop_assert!(orbit_codim(&x) <= dim);
            prop_assert_eq!(jordan_type(&x).iter().sum::<usize>(), v.rank());
        }
    }
}
