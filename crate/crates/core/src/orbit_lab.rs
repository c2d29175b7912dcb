//! Brute force over a prime field `F_q`: orbits of `B(q)` and `U(q)` on
//! `n(q)` and on its quotients `n_l`, inert and ramification points,
//! minimal representatives and class sizes.
//!
//! An element of `n_l` is its coordinate vector `(a_1, .., a_l)` in root
//! order, stored as residues. Its index is `sum_m a_m q^{l-m}`, so `beta_1`
//! is the most significant digit; the index of a prefix is the index of the
//! truncation, and the smallest index in an orbit is its lexicographically
//! least element.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::combinatorics::{even_internal_count, ThinDimVector};
use crate::constructions::decompose_jk;
use crate::error::{Error, Result};
use crate::field::{is_prime, Field, Rational};
use crate::matrix_model::{IdealElement, RootSet};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteFieldContext {
    q: u64,
    omega: u64,
}

impl FiniteFieldContext {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) || q > 251 {
            return Err(Error::NonPrimeField(q));
        }
        let omega = (1..q.max(2))
            .find(|&g| (1..q - 1).all(|k| pow_mod(g, k, q) != 1))
            .unwrap_or(1);
        Ok(FiniteFieldContext { q, omega })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// A generator of `F_q^x`.
    pub fn primitive_root(&self) -> u64 {
        self.omega
    }

    /// `|B(q)| = (q-1)^n q^{n(n-1)/2}`.
    pub fn borel_order(&self, n: usize) -> u128 {
        ((self.q - 1) as u128).pow(n as u32) * (self.q as u128).pow((n * n.saturating_sub(1) / 2) as u32)
    }

    /// Generators of `B(q)` as `n x n` matrices: `1 + E_{a,a+1}` and
    /// `diag(1, .., omega, .., 1)`.
    pub fn borel_generators(&self, n: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let id = |m: &mut Vec<u8>| (0..n).for_each(|i| m[i * n + i] = 1);
        for a in 0..n.saturating_sub(1) {
            let mut m = vec![0u8; n * n];
            id(&mut m);
            m[a * n + a + 1] = 1;
            out.push(m);
        }
        if self.q > 2 {
            for i in 0..n {
                let mut m = vec![0u8; n * n];
                id(&mut m);
                m[i * n + i] = self.omega as u8;
                out.push(m);
            }
        }
        out
    }

    pub fn reduce_i64(&self, v: i64) -> u8 {
        v.rem_euclid(self.q as i64) as u8
    }

    /// Reduction of a rational with denominator prime to `q`.
    pub fn reduce_rational(&self, r: &Rational) -> Result<u8> {
        let q = self.q as i64;
        let m = |b: &num_bigint::BigInt| -> i64 {
            let r = b % num_bigint::BigInt::from(q);
            i64::try_from(r).expect("residue fits") .rem_euclid(q)
        };
        let (num, den) = (m(r.numer()), m(r.denom()));
        if den == 0 {
            return Err(Error::ScalarParse(format!("{r} has denominator divisible by {q}")));
        }
        Ok(((num as u64 * pow_mod(den as u64, self.q - 2, self.q)) % self.q) as u8)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Gen {
    /// `1 + E_{a,a+1}`
    Root(usize),
    /// `diag` with `omega` at position `i`
    Torus(usize),
}

/// The ideal `n(d)` over `F_q`, with the tables needed to act on
/// coordinate vectors.
#[derive(Clone, Debug)]
pub struct OrbitLab {
    ctx: FiniteFieldContext,
    d: ThinDimVector,
    roots: RootSet,
    n: usize,
    pos: Vec<(usize, usize)>,
    omega_inv: u8,
}

/// One level of the tower: the partition of `n_l` into orbits, each state
/// labelled by the least index in its orbit.
pub type Labels = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FibreKind {
    Inert,
    Ramified,
    /// Neither a single orbit nor pairwise distinct orbits.
    Mixed,
}

impl OrbitLab {
    pub fn new(d: &ThinDimVector, q: u64) -> Result<Self> {
        let ctx = FiniteFieldContext::new(q)?;
        let roots = RootSet::new(d);
        let pos = roots.roots().iter().map(|&r| roots.matrix_position(r)).collect();
        let omega_inv = pow_mod(ctx.omega, q - 2, q) as u8;
        Ok(OrbitLab { n: roots.n(), ctx, d: d.clone(), roots, pos, omega_inv })
    }

    pub fn q(&self) -> u64 {
        self.ctx.q
    }

    pub fn context(&self) -> &FiniteFieldContext {
        &self.ctx
    }

    pub fn d(&self) -> &ThinDimVector {
        &self.d
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    /// `dim n`.
    pub fn dim(&self) -> usize {
        self.roots.len()
    }

    /// `q^level`, or `None` on overflow.
    pub fn states(&self, level: usize) -> Option<u64> {
        self.ctx.q.checked_pow(level as u32)
    }

    fn check_budget(&self, level: usize, budget: u64) -> Result<u64> {
        match self.states(level) {
            Some(s) if s <= budget && s <= u32::MAX as u64 => Ok(s),
            Some(s) => Err(Error::BudgetExceeded { needed: s, budget }),
            None => Err(Error::BudgetExceeded { needed: u64::MAX, budget }),
        }
    }

    pub fn encode(&self, coords: &[u8]) -> u64 {
        coords.iter().fold(0u64, |acc, &a| acc * self.ctx.q + a as u64)
    }

    pub fn decode(&self, mut index: u64, level: usize) -> Vec<u8> {
        let mut out = vec![0u8; level];
        for slot in out.iter_mut().rev() {
            *slot = (index % self.ctx.q) as u8;
            index /= self.ctx.q;
        }
        out
    }

    /// Coordinates of an element over the rationals, reduced mod `q`.
    pub fn coords_of(&self, x: &IdealElement<Rational>) -> Result<Vec<u8>> {
        self.roots.roots().iter().map(|&r| self.ctx.reduce_rational(&x.coefficient(r))).collect()
    }

    pub fn coords_from_i64(&self, values: &[i64]) -> Vec<u8> {
        values.iter().map(|&v| self.ctx.reduce_i64(v)).collect()
    }

    /// Lifts residues to an element over the rationals (representatives
    /// `0..q`).
    pub fn element_of(&self, coords: &[u8]) -> IdealElement<Rational> {
        let mut full: Vec<Rational> = coords.iter().map(|&a| Rational::from_i64(a as i64)).collect();
        full.resize(self.dim(), Rational::from_i64(0));
        IdealElement::from_coordinates(&self.roots, &full)
    }

    fn generators(&self, unipotent_only: bool) -> Vec<Gen> {
        let mut g: Vec<Gen> = (0..self.n.saturating_sub(1)).map(Gen::Root).collect();
        if !unipotent_only && self.ctx.q > 2 {
            g.extend((0..self.n).map(Gen::Torus));
        }
        g
    }

    /// `g y g^{-1}` on the first `coords.len()` coordinates; the remaining
    /// coordinates are taken to be zero, which is harmless since `m_l` is
    /// `B`-stable.
    fn act(&self, g: Gen, coords: &[u8], out: &mut Vec<u8>, scratch: &mut Vec<u8>) {
        let (n, q) = (self.n, self.ctx.q as u16);
        let level = coords.len();
        out.clear();
        match g {
            Gen::Torus(i) => {
                let (w, wi) = (self.ctx.omega as u16, self.omega_inv as u16);
                for (k, &a) in coords.iter().enumerate() {
                    let (r, c) = self.pos[k];
                    let mut v = a as u16;
                    if r == i {
                        v = v * w % q;
                    }
                    if c == i {
                        v = v * wi % q;
                    }
                    out.push(v as u8);
                }
            }
            Gen::Root(a) => {
                scratch.clear();
                scratch.resize(n * n, 0);
                for (k, &v) in coords.iter().enumerate() {
                    let (r, c) = self.pos[k];
                    scratch[r * n + c] = v;
                }
                // row a += row a+1
                for c in 0..n {
                    let v = scratch[(a + 1) * n + c] as u16;
                    if v != 0 {
                        scratch[a * n + c] = ((scratch[a * n + c] as u16 + v) % q) as u8;
                    }
                }
                // column a+1 -= column a
                for r in 0..n {
                    let v = scratch[r * n + a] as u16;
                    if v != 0 {
                        scratch[r * n + a + 1] = ((scratch[r * n + a + 1] as u16 + q - v) % q) as u8;
                    }
                }
                out.extend((0..level).map(|k| {
                    let (r, c) = self.pos[k];
                    scratch[r * n + c]
                }));
            }
        }
    }

    /// Orbit labels of every state of `n_level`.
    pub fn labels(&self, level: usize, unipotent_only: bool, budget: u64) -> Result<Labels> {
        let states = self.check_budget(level, budget)?;
        let gens = self.generators(unipotent_only);
        let mut labels = vec![u32::MAX; states as usize];
        let mut queue = VecDeque::new();
        let (mut out, mut scratch) = (Vec::new(), Vec::new());
        for start in 0..states {
            if labels[start as usize] != u32::MAX {
                continue;
            }
            labels[start as usize] = start as u32;
            queue.push_back(start);
            while let Some(s) = queue.pop_front() {
                let c = self.decode(s, level);
                for &g in &gens {
                    self.act(g, &c, &mut out, &mut scratch);
                    let t = self.encode(&out) as usize;
                    if labels[t] == u32::MAX {
                        labels[t] = start as u32;
                        queue.push_back(t as u64);
                    }
                }
            }
        }
        Ok(labels)
    }

    /// `U`-labels for every level `0..=dim` and `B`-labels at the top.
    pub fn tower(&self, budget: u64) -> Result<Tower> {
        let dim = self.dim();
        self.check_budget(dim, budget)?;
        let unipotent = (0..=dim).map(|l| self.labels(l, true, budget)).collect::<Result<Vec<_>>>()?;
        let borel = self.labels(dim, false, budget)?;
        Ok(Tower { q: self.ctx.q, dim, unipotent, borel })
    }

    /// Breadth first closure of `start` in `n_level`; stops early once
    /// `stop_at` is reached.
    fn closure(
        &self,
        start: &[u8],
        unipotent_only: bool,
        budget: u64,
        stop_at: Option<u64>,
    ) -> Result<(HashSet<u64>, bool)> {
        let level = start.len();
        let gens = self.generators(unipotent_only);
        let s0 = self.encode(start);
        let mut seen = HashSet::from([s0]);
        if stop_at == Some(s0) {
            return Ok((seen, true));
        }
        let mut queue = VecDeque::from([s0]);
        let (mut out, mut scratch) = (Vec::new(), Vec::new());
        while let Some(s) = queue.pop_front() {
            let c = self.decode(s, level);
            for &g in &gens {
                self.act(g, &c, &mut out, &mut scratch);
                let t = self.encode(&out);
                if seen.insert(t) {
                    if stop_at == Some(t) {
                        return Ok((seen, true));
                    }
                    if seen.len() as u64 > budget {
                        return Err(Error::BudgetExceeded { needed: seen.len() as u64, budget });
                    }
                    queue.push_back(t);
                }
            }
        }
        Ok((seen, false))
    }

    fn pad(&self, y: &[u8]) -> Vec<u8> {
        let mut v = y.to_vec();
        v.resize(self.dim(), 0);
        v
    }

    /// `B(q) y` as coordinate vectors in increasing index order.
    pub fn orbit_of(&self, y: &[u8], budget: u64) -> Result<Vec<Vec<u8>>> {
        let y = self.pad(y);
        let (seen, _) = self.closure(&y, false, budget, None)?;
        let mut idx: Vec<u64> = seen.into_iter().collect();
        idx.sort_unstable();
        Ok(idx.into_iter().map(|i| self.decode(i, self.dim())).collect())
    }

    pub fn orbit_size(&self, y: &[u8], budget: u64) -> Result<u64> {
        Ok(self.closure(&self.pad(y), false, budget, None)?.0.len() as u64)
    }

    /// `|U(q) y|` and its exponent `In(y)`.
    pub fn u_orbit_size(&self, y: &[u8], budget: u64) -> Result<(u64, u32)> {
        let size = self.closure(&self.pad(y), true, budget, None)?.0.len() as u64;
        let q = self.ctx.q;
        let mut k = 0u32;
        let mut s = size;
        while s.is_multiple_of(q) {
            s /= q;
            k += 1;
        }
        if s != 1 {
            return Err(Error::NotAPowerOfQ { size, q });
        }
        Ok((size, k))
    }

    /// Are `y + 0 e_{beta_m}` and `y + 1 e_{beta_m}` (over the prefix of `y`
    /// of length `m - 1`) `U`-conjugate in `n_m`?
    fn fibre_pair_conjugate(&self, y: &[u8], m: usize, budget: u64) -> Result<bool> {
        let mut a = y[..m - 1].to_vec();
        let mut b = a.clone();
        a.push(0);
        b.push(1);
        Ok(self.closure(&a, true, budget, Some(self.encode(&b)))?.1)
    }

    /// Inert flags for the levels `1..=dim` of `y`.
    pub fn inert_points(&self, y: &[u8], budget: u64) -> Result<Vec<bool>> {
        let y = self.pad(y);
        (1..=self.dim()).map(|m| self.fibre_pair_conjugate(&y, m, budget)).collect()
    }

    /// Classifies every fibre of `y` by comparing all of its points.
    pub fn inert_points_exhaustive(&self, y: &[u8], budget: u64) -> Result<Vec<FibreKind>> {
        let y = self.pad(y);
        let q = self.ctx.q;
        (1..=self.dim())
            .map(|m| {
                let point = |lam: u64| {
                    let mut v = y[..m - 1].to_vec();
                    v.push(lam as u8);
                    v
                };
                let mut orbit_of_point = vec![usize::MAX; q as usize];
                for lam in 0..q {
                    if orbit_of_point[lam as usize] != usize::MAX {
                        continue;
                    }
                    let (seen, _) = self.closure(&point(lam), true, budget, None)?;
                    for mu in lam..q {
                        if seen.contains(&self.encode(&point(mu))) {
                            orbit_of_point[mu as usize] = lam as usize;
                        }
                    }
                }
                Ok(fibre_kind(&orbit_of_point))
            })
            .collect()
    }

    /// `mm(y)`: rank of the span of `eps_i - eps_j` over the support of `y`,
    /// i.e. touched vertices minus connected components.
    pub fn sublattice_rank(&self, y: &[u8]) -> usize {
        let mut uf = UnionFind::new(self.n);
        let mut touched = vec![false; self.n];
        for (k, &a) in y.iter().enumerate() {
            if a != 0 {
                let (r, c) = self.pos[k];
                touched[r] = true;
                touched[c] = true;
                uf.union(r, c);
            }
        }
        let comps: HashSet<usize> = (0..self.n).filter(|&v| touched[v]).map(|v| uf.find(v)).collect();
        touched.iter().filter(|&&t| t).count() - comps.len()
    }

    /// The characterization of minimal representatives: zero at inert
    /// points, and one at every nonzero coordinate whose root is independent
    /// of the earlier nonzero roots.
    pub fn is_minimal_with(&self, y: &[u8], inert: impl Fn(usize) -> Result<bool>) -> Result<bool> {
        let mut uf = UnionFind::new(self.n);
        for (k, &a) in self.pad(y).iter().enumerate() {
            if a == 0 {
                continue;
            }
            if inert(k + 1)? {
                return Ok(false);
            }
            let (r, c) = self.pos[k];
            if uf.find(r) != uf.find(c) {
                if a != 1 {
                    return Ok(false);
                }
                uf.union(r, c);
            }
        }
        Ok(true)
    }

    pub fn is_minimal(&self, y: &[u8], budget: u64) -> Result<bool> {
        let y = self.pad(y);
        self.is_minimal_with(&y, |m| self.fibre_pair_conjugate(&y, m, budget))
    }

    /// `(q-1)^{mm(y)} q^{In(y)}` for a minimal `y`.
    pub fn class_size_formula(&self, y: &[u8], budget: u64) -> Result<u64> {
        if !self.is_minimal(y, budget)? {
            return Err(Error::NotMinimal);
        }
        let inert = self.inert_points(y, budget)?.iter().filter(|&&b| b).count();
        Ok(class_size(self.ctx.q, self.sublattice_rank(y), inert))
    }

    /// `true` when the images of the `ys` in `n_level` lie in pairwise
    /// distinct `B(q)`-orbits (which forces distinct orbits in `n`).
    pub fn disjoint_in_quotient(&self, ys: &[Vec<u8>], level: usize, budget: u64) -> Result<bool> {
        let cut: Vec<Vec<u8>> = ys.iter().map(|y| self.pad(y)[..level].to_vec()).collect();
        let keys: Vec<u64> = cut.iter().map(|c| self.encode(c)).collect();
        for (i, c) in cut.iter().enumerate() {
            let (seen, _) = self.closure(c, false, budget, None)?;
            if keys.iter().enumerate().any(|(j, k)| j != i && seen.contains(k)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First level at which some two of the `ys` differ.
    pub fn first_difference(&self, ys: &[Vec<u8>]) -> Option<usize> {
        let ys: Vec<Vec<u8>> = ys.iter().map(|y| self.pad(y)).collect();
        (0..self.dim()).find(|&k| ys.iter().any(|y| y[k] != ys[0][k])).map(|k| k + 1)
    }
}

fn fibre_kind(orbit_of_point: &[usize]) -> FibreKind {
    let distinct: HashSet<usize> = orbit_of_point.iter().copied().collect();
    if distinct.len() == 1 {
        FibreKind::Inert
    } else if distinct.len() == orbit_of_point.len() {
        FibreKind::Ramified
    } else {
        FibreKind::Mixed
    }
}

pub fn class_size(q: u64, mm: usize, inert: usize) -> u64 {
    (q - 1).pow(mm as u32) * q.pow(inert as u32)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut v = v;
        while self.parent[v] != r {
            let next = self.parent[v];
            self.parent[v] = r;
            v = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Orbit labels of all quotients `n_0, .., n_dim`.
#[derive(Clone, Debug)]
pub struct Tower {
    q: u64,
    dim: usize,
    unipotent: Vec<Labels>,
    borel: Labels,
}

impl Tower {
    pub fn unipotent_labels(&self, level: usize) -> &Labels {
        &self.unipotent[level]
    }

    pub fn borel_labels(&self) -> &Labels {
        &self.borel
    }

    /// Inert flag of level `m` over the prefix of `index` (a state of `n`).
    pub fn is_inert(&self, index: u64, m: usize) -> bool {
        let prefix = index / self.q.pow((self.dim - m + 1) as u32);
        let lab = &self.unipotent[m];
        lab[(prefix * self.q) as usize] == lab[(prefix * self.q + 1) as usize]
    }

    pub fn inert_count(&self, index: u64) -> usize {
        (1..=self.dim).filter(|&m| self.is_inert(index, m)).count()
    }

    /// Every fibre of every level either lies in one `U`-orbit or meets
    /// `q` distinct ones.
    pub fn dichotomy_holds(&self) -> bool {
        (1..=self.dim).all(|m| {
            let lab = &self.unipotent[m];
            lab.chunks(self.q as usize).all(|fibre| {
                let ids: Vec<usize> = fibre.iter().map(|&l| l as usize).collect();
                fibre_kind(&ids) != FibreKind::Mixed
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    /// Least element of the orbit, as coordinates in root order.
    pub key: Vec<u8>,
    pub size: u64,
    /// The unique element passing the minimality test (first one found).
    pub minimal_rep: Option<Vec<u8>>,
    /// How many elements of the orbit pass the minimality test.
    pub minimal_count: usize,
    /// `mm` and `In` of `minimal_rep`.
    pub mm: usize,
    #[serde(rename = "In")]
    pub inert: usize,
}

impl OrbitRecord {
    pub fn is_minimal_rep(&self) -> bool {
        self.minimal_rep.as_ref() == Some(&self.key)
    }

    pub fn formula_size(&self, q: u64) -> u64 {
        class_size(q, self.mm, self.inert)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCensus {
    pub d: Vec<i64>,
    pub q: u64,
    pub dim: usize,
    pub total: u64,
    pub orbits: Vec<OrbitRecord>,
    pub dichotomy: bool,
}

impl OrbitCensus {
    pub fn max_size(&self) -> u64 {
        self.orbits.iter().map(|o| o.size).max().unwrap_or(0)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("canonical_key\tsize\tmm\tIn\tis_minimal_rep\n");
        for o in &self.orbits {
            let key: Vec<String> = o.key.iter().map(|v| v.to_string()).collect();
            s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", key.join(","), o.size, o.mm, o.inert, o.is_minimal_rep()));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("census serializes");
        v["schema"] = serde_json::json!(1);
        for (o, rec) in v["orbits"].as_array_mut().unwrap().iter_mut().zip(&self.orbits) {
            o["is_minimal_rep"] = serde_json::json!(rec.is_minimal_rep());
        }
        v
    }
}

pub fn census_from_tower(lab: &OrbitLab, tower: &Tower) -> OrbitCensus {
    let dim = lab.dim();
    let q = lab.q();
    let total = q.pow(dim as u32);
    let borel = tower.borel_labels();
    let mut by_label: std::collections::BTreeMap<u32, OrbitRecord> = Default::default();
    for index in 0..total {
        let label = borel[index as usize];
        let rec = by_label.entry(label).or_insert_with(|| OrbitRecord {
            key: lab.decode(label as u64, dim),
            size: 0,
            minimal_rep: None,
            minimal_count: 0,
            mm: 0,
            inert: 0,
        });
        rec.size += 1;
        let y = lab.decode(index, dim);
        let minimal = lab
            .is_minimal_with(&y, |m| Ok(tower.is_inert(index, m)))
            .expect("lookups cannot fail");
        if minimal {
            rec.minimal_count += 1;
            if rec.minimal_rep.is_none() {
                rec.mm = lab.sublattice_rank(&y);
                rec.inert = tower.inert_count(index);
                rec.minimal_rep = Some(y);
            }
        }
    }
    OrbitCensus {
        d: lab.d().clone().into(),
        q,
        dim,
        total,
        orbits: by_label.into_values().collect(),
        dichotomy: tower.dichotomy_holds(),
    }
}

pub fn enumerate_orbits(d: &ThinDimVector, q: u64, budget: u64) -> Result<OrbitCensus> {
    let lab = OrbitLab::new(d, q)?;
    let tower = lab.tower(budget)?;
    Ok(census_from_tower(&lab, &tower))
}

/// Predicted largest `B(q)`-class: `(q-1)^{n-2} q^{dim - (n-2)}` when
/// `e = 0`, `(q-1)^{n-1} q^{dim - (n-2+e)}` otherwise.
pub fn predicted_max_class_size(d: &ThinDimVector, q: u64) -> Option<u64> {
    let (n, dim, e) = (d.rank() as i64, RootSet::new(d).len() as i64, even_internal_count(d) as i64);
    let (a, b) = if e == 0 { (n - 2, dim - (n - 2)) } else { (n - 1, dim - (n - 2 + e)) };
    if a < 0 || b < 0 {
        return None;
    }
    (q - 1).checked_pow(a as u32)?.checked_mul(q.checked_pow(b as u32)?)
}

/// Class size of the dense orbit when `e <= 1`, used as the density profile.
pub fn dense_profile(d: &ThinDimVector, q: u64) -> Option<u64> {
    let (n, dim) = (d.rank() as i64, RootSet::new(d).len() as i64);
    let b = dim - (n - 1);
    if n < 1 || b < 0 {
        return None;
    }
    (q - 1).checked_pow((n - 1) as u32)?.checked_mul(q.checked_pow(b as u32)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteCheck {
    pub d: Vec<i64>,
    pub q: u64,
    pub n: usize,
    pub dim: usize,
    pub e: usize,
    pub orbits: usize,
    pub max_size: u64,
    pub predicted: Option<u64>,
    pub matches: bool,
    /// Set for the degenerate `K = ∅` vectors, where the prediction is not
    /// expected to hold.
    pub anomaly: Option<String>,
}

pub fn finite_check(census: &OrbitCensus) -> FiniteCheck {
    let d = ThinDimVector::new(&census.d).expect("census of a valid vector");
    let predicted = predicted_max_class_size(&d, census.q);
    let max_size = census.max_size();
    let anomaly = decompose_jk(&d)
        .k
        .is_empty()
        .then(|| "K is empty: the two-row decomposition has an empty second row".to_string());
    FiniteCheck {
        d: census.d.clone(),
        q: census.q,
        n: d.rank(),
        dim: census.dim,
        e: even_internal_count(&d),
        orbits: census.orbits.len(),
        max_size,
        predicted,
        matches: predicted == Some(max_size),
        anomaly,
    }
}

pub fn max_class_size(d: &ThinDimVector, q: u64, budget: u64) -> Result<FiniteCheck> {
    Ok(finite_check(&enumerate_orbits(d, q, budget)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{from_strings, thin_vectors_up_to_rank, OneStringSequence};
    use crate::constructions::{element_x, element_xbar, modified_family};
    use crate::field::Field;

    fn d(v: &[i64]) -> ThinDimVector {
        ThinDimVector::new(v).unwrap()
    }

    fn lab(v: &[i64], q: u64) -> OrbitLab {
        OrbitLab::new(&d(v), q).unwrap()
    }

    const B: u64 = DEFAULT_BUDGET;

    fn mat_mul(a: &[u8], b: &[u8], n: usize, q: u64) -> Vec<u8> {
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: u64 = (0..n).map(|k| a[i * n + k] as u64 * b[k * n + j] as u64).sum();
                out[i * n + j] = (s % q) as u8;
            }
        }
        out
    }

    #[test]
    fn generators_produce_the_borel_group() {
        for (n, q) in [(1, 2), (2, 3), (3, 2), (3, 3)] {
            let ctx = FiniteFieldContext::new(q).unwrap();
            let gens = ctx.borel_generators(n);
            let mut id = vec![0u8; n * n];
            (0..n).for_each(|i| id[i * n + i] = 1);
            let mut seen = HashSet::from([id.clone()]);
            let mut queue = VecDeque::from([id]);
            while let Some(m) = queue.pop_front() {
                for g in &gens {
                    let p = mat_mul(&m, g, n, q);
                    if seen.insert(p.clone()) {
                        queue.push_back(p);
                    }
                }
            }
            assert_eq!(seen.len() as u128, ctx.borel_order(n), "n = {n}, q = {q}");
        }
        assert!(FiniteFieldContext::new(4).is_err());
        assert_eq!(FiniteFieldContext::new(7).unwrap().primitive_root(), 3);
    }

    #[test]
    fn codec_round_trip() {
        let l = lab(&[1, 1, 0, 1, 1], 3);
        let c = vec![2, 0, 1];
        assert_eq!(l.decode(l.encode(&c), 3), c);
        assert_eq!(l.encode(&[1, 0]), 3);
    }

    #[test]
    fn census_examples() {
        let c = enumerate_orbits(&d(&[1, 1, 1]), 2, B).unwrap();
        assert_eq!(c.orbits.iter().map(|o| o.size).collect::<Vec<_>>(), vec![1, 1]);
        let c = enumerate_orbits(&d(&[1, 1, 0, 1]), 2, B).unwrap();
        let mut sizes: Vec<u64> = c.orbits.iter().map(|o| o.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
        assert_eq!(c.max_size(), 2);
        let c = enumerate_orbits(&d(&[1, 1]), 3, B).unwrap();
        assert_eq!(c.orbits.len(), 1);
    }

    #[test]
    fn single_orbit_examples() {
        let l = lab(&[1, 1, 0, 1], 2);
        assert_eq!(l.orbit_of(&[0, 0], B).unwrap(), vec![vec![0, 0]]);
        // roots in order (2,4), (1,4); e_23 is the first coordinate
        assert_eq!(l.orbit_size(&[1, 0], B).unwrap(), 2);
        assert_eq!(l.u_orbit_size(&[1, 0], B).unwrap(), (2, 1));
        let l3 = lab(&[1, 1, 1], 3);
        assert_eq!(l3.u_orbit_size(&[1], B).unwrap(), (1, 0));
        assert_eq!(l3.orbit_of(&[1], B).unwrap(), vec![vec![1], vec![2]]);
        assert_eq!(l3.class_size_formula(&[1], B).unwrap(), 2);
        assert_eq!(l3.class_size_formula(&[0], B).unwrap(), 1);
        assert_eq!(l3.class_size_formula(&[2], B), Err(Error::NotMinimal));
    }

    #[test]
    fn zero_is_ramified_at_first_level() {
        let l = lab(&[1, 1, 0, 1], 3);
        assert!(!l.inert_points(&[0, 0], B).unwrap()[0]);
        assert_eq!(l.u_orbit_size(&[0, 0], B).unwrap(), (1, 0));
    }

    #[test]
    fn budget_is_enforced() {
        let l = lab(&[1, 1, 1, 1, 1], 3);
        assert!(matches!(l.tower(10), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(l.orbit_of(&[1, 1, 0, 1, 0, 0], 3), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn sublattice_rank_examples() {
        let l = lab(&[1, 1, 1, 1, 1], 2);
        assert_eq!(l.sublattice_rank(&[0; 6]), 0);
        assert_eq!(l.sublattice_rank(&[1, 0, 0, 0, 0, 0]), 1);
        // (1,3), (3,5), (1,5) form a cycle
        let roots = l.roots().roots().to_vec();
        let mut y = vec![0u8; 6];
        for r in [(1, 3), (3, 5), (1, 5)] {
            y[roots.iter().position(|&x| x == r).unwrap()] = 1;
        }
        assert_eq!(l.sublattice_rank(&y), 2);
    }

    /// Exact rank of `eps_i - eps_j` vectors over the rationals.
    fn lattice_rank_oracle(l: &OrbitLab, y: &[u8]) -> usize {
        let n = l.n;
        let rows: Vec<crate::linalg::SparseVec<Rational>> = y
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(k, _)| {
                let (r, c) = l.pos[k];
                vec![(r, Rational::from_i64(1)), (c, Rational::from_i64(-1))]
            })
            .collect();
        let mut ech = crate::linalg::SparseEchelon::new(n);
        for r in rows {
            ech.insert(r);
        }
        ech.rank()
    }

    #[test]
    fn sublattice_rank_matches_linear_algebra() {
        let l = lab(&[1, 0, 1, 1, 0, 1, 1], 2);
        for idx in 0..l.states(l.dim()).unwrap() {
            let y = l.decode(idx, l.dim());
            assert_eq!(l.sublattice_rank(&y), lattice_rank_oracle(&l, &y));
        }
    }

    #[test]
    fn minimal_representatives_of_small_censuses() {
        for v in thin_vectors_up_to_rank(4) {
            for q in [2, 3] {
                let lab = OrbitLab::new(&v, q).unwrap();
                let tower = lab.tower(B).unwrap();
                let census = census_from_tower(&lab, &tower);
                assert!(census.dichotomy, "{v} q={q}");
                assert_eq!(census.orbits.iter().map(|o| o.size).sum::<u64>(), census.total);
                for o in &census.orbits {
                    assert_eq!(o.minimal_count, 1, "{v} q={q} orbit {:?}", o.key);
                    assert_eq!(o.size, o.formula_size(q), "{v} q={q} orbit {:?}", o.key);
                    assert_eq!(lab.context().borel_order(v.rank()) % o.size as u128, 0);
                }
            }
        }
    }

    #[test]
    fn u_orbits_are_q_powers_of_inert_count() {
        let v = from_strings(&OneStringSequence::new(&[1, 2, 1]).unwrap());
        let lab = OrbitLab::new(&v, 3).unwrap();
        let tower = lab.tower(B).unwrap();
        let top = tower.unipotent_labels(lab.dim());
        let mut sizes = std::collections::HashMap::<u32, u64>::new();
        for &l in top {
            *sizes.entry(l).or_default() += 1;
        }
        for idx in (0..lab.states(lab.dim()).unwrap()).step_by(7) {
            let y = lab.decode(idx, lab.dim());
            let (size, k) = lab.u_orbit_size(&y, B).unwrap();
            assert_eq!(size, sizes[&top[idx as usize]]);
            assert_eq!(k as usize, tower.inert_count(idx));
            let flags = lab.inert_points(&y, B).unwrap();
            assert_eq!(flags.iter().filter(|&&b| b).count(), k as usize);
        }
    }

    #[test]
    fn exhaustive_fibres_agree_with_pair_test() {
        let lab = lab(&[1, 1, 0, 1, 1], 3);
        for idx in 0..lab.states(lab.dim()).unwrap() {
            let y = lab.decode(idx, lab.dim());
            let kinds = lab.inert_points_exhaustive(&y, B).unwrap();
            let flags = lab.inert_points(&y, B).unwrap();
            for (k, f) in kinds.iter().zip(flags) {
                assert_ne!(*k, FibreKind::Mixed);
                assert_eq!(*k == FibreKind::Inert, f);
            }
        }
    }

    #[test]
    fn constructed_representatives_are_minimal() {
        let v = from_strings(&OneStringSequence::new(&[1, 2, 1]).unwrap());
        let lab = OrbitLab::new(&v, 3).unwrap();
        let xbar = lab.coords_of(&element_xbar::<Rational>(&v).unwrap()).unwrap();
        assert!(lab.is_minimal(&xbar, B).unwrap());
        let n = v.rank();
        assert_eq!(lab.sublattice_rank(&xbar), n - 1);
        let expected = class_size(3, n - 1, lab.dim() - (n - 1));
        assert_eq!(lab.orbit_size(&xbar, B).unwrap(), expected);
        assert_eq!(lab.class_size_formula(&xbar, B).unwrap(), expected);
        // x differs from x̄ only when a K vertex lies right of b
        let w = from_strings(&OneStringSequence::new(&[1, 2, 2]).unwrap());
        let lw = OrbitLab::new(&w, 2).unwrap();
        let x = lw.coords_of(&element_x::<Rational>(&w).unwrap()).unwrap();
        let xb = lw.coords_of(&element_xbar::<Rational>(&w).unwrap()).unwrap();
        assert_ne!(x, xb);
        assert!(!lw.is_minimal(&x, B).unwrap());
        assert!(lw.is_minimal(&xb, B).unwrap());
        assert_eq!(lw.orbit_size(&x, B).unwrap(), lw.orbit_size(&xb, B).unwrap());
    }

    #[test]
    fn max_class_examples() {
        let c = max_class_size(&d(&[1, 1, 0, 1]), 2, B).unwrap();
        assert_eq!((c.max_size, c.predicted, c.matches), (2, Some(2), true));
        let v = from_strings(&OneStringSequence::new(&[1, 2, 1]).unwrap());
        let c = max_class_size(&v, 2, B).unwrap();
        assert_eq!((c.dim, c.predicted, c.matches), (5, Some(4), true));
        let c = max_class_size(&d(&[1, 0, 1]), 2, B).unwrap();
        assert_eq!((c.max_size, c.predicted, c.matches), (1, Some(2), false));
        assert!(c.anomaly.is_some());
    }

    #[test]
    fn family_members_are_minimal_in_small_case() {
        let v = from_strings(&OneStringSequence::new(&[1, 2, 2, 1]).unwrap());
        let lab = OrbitLab::new(&v, 3).unwrap();
        let fam = modified_family(&v);
        let ys: Vec<Vec<u8>> = (1..3)
            .map(|t| lab.coords_of(&fam.instantiate(&[Rational::from_i64(t)]).unwrap()).unwrap())
            .collect();
        for y in &ys {
            assert!(lab.is_minimal(y, B).unwrap());
        }
        let level = lab.first_difference(&ys).unwrap();
        assert!(lab.disjoint_in_quotient(&ys, level, B).unwrap());
    }

    #[test]
    fn census_exports() {
        let c = enumerate_orbits(&d(&[1, 1, 0, 1]), 2, B).unwrap();
        let tsv = c.to_tsv();
        assert!(tsv.starts_with("canonical_key\tsize\tmm\tIn\tis_minimal_rep\n"));
        assert_eq!(tsv.lines().count(), 4);
        let js = c.to_json();
        assert_eq!(js["schema"], 1);
        assert_eq!(js["orbits"].as_array().unwrap().len(), 3);
    }
}
