//! Thin dimension vectors, their 1-string sequences and the dense-orbit
//! classification.
//!
//! A thin dimension vector `d = (d_1, .., d_t)` is a 0/1 vector with
//! `d_1 = d_t = 1` and no two consecutive zeros. Reading off the lengths of
//! its maximal runs of ones gives `a = (a_0, a_1, .., a_r, a_{r+1})`; the
//! runs `a_1..a_r` are *internal* and `e(d)` counts the even internal runs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated thin dimension vector. Positions are 1-based in all public
/// accessors, matching the usual labelling `1..=t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ThinDimVector {
    bits: Vec<bool>,
}

impl ThinDimVector {
    pub fn new(raw: &[i64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        let mut bits = Vec::with_capacity(raw.len());
        for (pos, &v) in raw.iter().enumerate() {
            match v {
                0 => bits.push(false),
                1 => bits.push(true),
                _ => return Err(Error::NonBinaryEntry { position: pos + 1, value: v }),
            }
        }
        if !bits[0] || !bits[bits.len() - 1] {
            return Err(Error::LeadingOrTrailingZero);
        }
        if let Some(i) = bits.windows(2).position(|w| !w[0] && !w[1]) {
            return Err(Error::ConsecutiveZeros(i + 1));
        }
        Ok(ThinDimVector { bits })
    }

    /// `t`, the length of the flag.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `d_i` for `1 <= i <= t`; zero outside that range.
    pub fn entry(&self, i: usize) -> bool {
        i >= 1 && i <= self.bits.len() && self.bits[i - 1]
    }

    pub fn entries(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| b as u8).collect()
    }

    /// `n = sum d_i`.
    pub fn rank(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `supp d`, increasing.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.entry(i)).collect()
    }

    /// Partial sums `(Sigma d)_i = dim V_i` for `i = 0..=t`.
    pub fn partial_sums(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(0);
        let mut acc = 0;
        for &b in &self.bits {
            acc += b as usize;
            out.push(acc);
        }
        out
    }

    pub fn zero_count(&self) -> usize {
        self.len() - self.rank()
    }
}

impl TryFrom<Vec<i64>> for ThinDimVector {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        ThinDimVector::new(&v)
    }
}

impl From<ThinDimVector> for Vec<i64> {
    fn from(d: ThinDimVector) -> Self {
        d.bits.iter().map(|&b| b as i64).collect()
    }
}

impl fmt::Display for ThinDimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.bits.iter().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ThinDimVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ThinDimVector::new(&parse_int_list(s)?)
    }
}

/// `a(d) = (a_0, .., a_{r+1})`. A single entry means `d` has no zeros,
/// which is the `r = -1` case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct OneStringSequence(Vec<usize>);

impl OneStringSequence {
    pub fn new(raw: &[i64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = raw.iter().enumerate().find(|(_, &v)| v < 1) {
            return Err(Error::NonPositiveEntry { index, value });
        }
        Ok(OneStringSequence(raw.iter().map(|&v| v as usize).collect()))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `r`; `-1` when there is a single string.
    pub fn r(&self) -> isize {
        self.0.len() as isize - 2
    }

    /// `a_1..a_r`.
    pub fn internal(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<i64>> for OneStringSequence {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        OneStringSequence::new(&v)
    }
}

impl From<OneStringSequence> for Vec<i64> {
    fn from(a: OneStringSequence) -> Self {
        a.0.iter().map(|&v| v as i64).collect()
    }
}

impl fmt::Display for OneStringSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for OneStringSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OneStringSequence::new(&parse_int_list(s)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub e: usize,
    pub dense: bool,
    pub codim: usize,
}

/// Order-preserving bijection `gamma: supp d -> {1..n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    forward: BTreeMap<usize, usize>,
    inverse: Vec<usize>,
}

impl Relabeling {
    pub fn gamma(&self, j: usize) -> Option<usize> {
        self.forward.get(&j).copied()
    }

    /// `gamma^{-1}(k)` for `1 <= k <= n`.
    pub fn label(&self, k: usize) -> Option<usize> {
        k.checked_sub(1).and_then(|i| self.inverse.get(i).copied())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward.iter().map(|(&j, &k)| (j, k))
    }

    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }
}

pub fn validate_thin(raw: &[i64]) -> Result<ThinDimVector> {
    ThinDimVector::new(raw)
}

pub fn one_strings(d: &ThinDimVector) -> OneStringSequence {
    let runs = d
        .bits
        .split(|&b| !b)
        .map(|run| run.len())
        .collect::<Vec<_>>();
    debug_assert!(runs.iter().all(|&r| r > 0));
    OneStringSequence(runs)
}

pub fn from_strings(a: &OneStringSequence) -> ThinDimVector {
    let mut bits = Vec::with_capacity(a.total() + a.0.len() - 1);
    for (k, &len) in a.0.iter().enumerate() {
        if k > 0 {
            bits.push(false);
        }
        bits.extend(std::iter::repeat_n(true, len));
    }
    ThinDimVector { bits }
}

/// `e(d)`: the number of even internal 1-strings.
pub fn even_internal_count(d: &ThinDimVector) -> usize {
    one_strings(d).internal().iter().filter(|&&a| a % 2 == 0).count()
}

pub fn classify(d: &ThinDimVector) -> Classification {
    let e = even_internal_count(d);
    Classification { e, dense: e <= 1, codim: e.saturating_sub(1) }
}

pub fn relabel(d: &ThinDimVector) -> Relabeling {
    let inverse = d.support();
    let forward = inverse.iter().enumerate().map(|(k, &j)| (j, k + 1)).collect();
    Relabeling { forward, inverse }
}

/// Positions (1-based) of the last entry of each even internal 1-string,
/// i.e. `b_1 < .. < b_e`.
pub fn even_string_ends(d: &ThinDimVector) -> Vec<usize> {
    let a = one_strings(d);
    let mut ends = Vec::new();
    let mut pos = 0;
    for (k, &len) in a.as_slice().iter().enumerate() {
        if k > 0 {
            pos += 1;
        }
        pos += len;
        let internal = k >= 1 && k + 1 < a.as_slice().len();
        if internal && len % 2 == 0 {
            ends.push(pos);
        }
    }
    ends
}

/// Every thin dimension vector with `t <= t_max`, ordered by `t` and then
/// lexicographically by 1-string sequence.
pub fn thin_vectors_up_to_len(t_max: usize) -> Vec<ThinDimVector> {
    let mut out = Vec::new();
    for t in 1..=t_max {
        // t = sum(a) + (#strings - 1)
        for strings in 1..=t.div_ceil(2) {
            let total = t + 1 - strings;
            for comp in compositions(total, strings) {
                out.push(from_strings(&OneStringSequence(comp)));
            }
        }
    }
    out.sort_by_key(|d| (d.len(), one_strings(d).0));
    out
}

/// Every thin dimension vector with `n = sum d_i <= n_max`.
pub fn thin_vectors_up_to_rank(n_max: usize) -> Vec<ThinDimVector> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for strings in 1..=n {
            for comp in compositions(n, strings) {
                out.push(from_strings(&OneStringSequence(comp)));
            }
        }
    }
    out.sort_by_key(|d| (d.rank(), d.len(), one_strings(d).0));
    out
}

/// Compositions of `total` into exactly `parts` positive parts, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if remaining < parts {
            return;
        }
        for first in 1..=remaining - (parts - 1) {
            prefix.push(first);
            rec(remaining - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Parses a comma separated list of integers (whitespace tolerant).
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Empty);
    }
    s.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| Error::ScalarParse(p.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: &[i64]) -> ThinDimVector {
        ThinDimVector::new(v).unwrap()
    }

    fn a(v: &[i64]) -> OneStringSequence {
        OneStringSequence::new(v).unwrap()
    }

    const INTRO_EXAMPLE: [i64; 17] = [1, 1, 0, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1, 1, 1, 0, 1];

    #[test]
    fn validates_running_example() {
        let v = d(&INTRO_EXAMPLE);
        assert_eq!(v.len(), 17);
        assert_eq!(v.rank(), 13);
    }

    #[test]
    fn rejects_malformed_vectors() {
        assert_eq!(ThinDimVector::new(&[1, 0, 0, 1]), Err(Error::ConsecutiveZeros(2)));
        assert_eq!(ThinDimVector::new(&[0, 1]), Err(Error::LeadingOrTrailingZero));
        assert_eq!(ThinDimVector::new(&[1, 1, 0]), Err(Error::LeadingOrTrailingZero));
        assert!(matches!(ThinDimVector::new(&[1, 2, 1]), Err(Error::NonBinaryEntry { position: 2, value: 2 })));
        assert_eq!(ThinDimVector::new(&[]), Err(Error::Empty));
        let one = d(&[1]);
        assert_eq!((one.len(), one.rank()), (1, 1));
    }

    #[test]
    fn one_string_examples() {
        assert_eq!(one_strings(&d(&INTRO_EXAMPLE)), a(&[2, 3, 2, 5, 1]));
        assert_eq!(
            one_strings(&d(&[1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 0, 1])),
            a(&[1, 2, 4, 3, 1])
        );
        assert_eq!(one_strings(&d(&[1])), a(&[1]));
        assert_eq!(one_strings(&d(&[1])).r(), -1);
    }

    #[test]
    fn from_strings_examples() {
        assert_eq!(from_strings(&a(&[2, 3, 2, 5, 1])), d(&INTRO_EXAMPLE));
        assert_eq!(from_strings(&a(&[1, 1])), d(&[1, 0, 1]));
        assert_eq!(from_strings(&a(&[1, 2, 2, 1])), d(&[1, 0, 1, 1, 0, 1, 1, 0, 1]));
        assert!(matches!(OneStringSequence::new(&[1, 0, 2]), Err(Error::NonPositiveEntry { index: 1, value: 0 })));
    }

    #[test]
    fn even_internal_examples() {
        assert_eq!(even_internal_count(&from_strings(&a(&[2, 3, 2, 5, 1]))), 1);
        assert_eq!(even_internal_count(&from_strings(&a(&[1, 2, 2, 1]))), 2);
        assert_eq!(even_internal_count(&d(&[1, 1, 1, 1])), 0);
        // external strings never count
        assert_eq!(even_internal_count(&from_strings(&a(&[2, 4]))), 0);
    }

    #[test]
    fn classification_examples() {
        let c = classify(&from_strings(&a(&[2, 3, 2, 5, 1])));
        assert!(c.dense);
        assert_eq!(c.codim, 0);
        let c = classify(&from_strings(&a(&[1, 2, 2, 1])));
        assert_eq!(c, Classification { e: 2, dense: false, codim: 1 });
        let c = classify(&from_strings(&a(&[1, 1])));
        assert_eq!(c, Classification { e: 0, dense: true, codim: 0 });
    }

    #[test]
    fn relabel_examples() {
        let g = relabel(&d(&[1, 1, 0, 1]));
        assert_eq!(g.pairs().collect::<Vec<_>>(), vec![(1, 1), (2, 2), (4, 3)]);
        assert_eq!(g.label(3), Some(4));
        assert_eq!(g.gamma(3), None);
        let g = relabel(&d(&[1, 0, 1]));
        assert_eq!(g.pairs().collect::<Vec<_>>(), vec![(1, 1), (3, 2)]);
        let g = relabel(&d(&[1, 1, 1, 1, 1]));
        assert!(g.pairs().all(|(j, k)| j == k));
    }

    #[test]
    fn even_string_ends_examples() {
        // a = (1,2,4,3,1): strings end at 1, 4, 9, 13, 15
        let v = d(&[1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 0, 1]);
        assert_eq!(even_string_ends(&v), vec![4, 9]);
        let v = d(&[1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1]);
        assert_eq!(even_string_ends(&v), vec![15]);
    }

    #[test]
    fn enumeration_counts() {
        // thin vectors of length t are counted by Fibonacci numbers
        let all = thin_vectors_up_to_len(10);
        let mut per_len = [0usize; 11];
        for v in &all {
            per_len[v.len()] += 1;
        }
        assert_eq!(&per_len[1..], &[1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        // 2^(n-1) compositions of n
        let by_rank = thin_vectors_up_to_rank(5);
        assert_eq!(by_rank.len(), 1 + 2 + 4 + 8 + 16);
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
    }

    #[test]
    fn text_round_trip() {
        let v: ThinDimVector = "1,1,0,1".parse().unwrap();
        assert_eq!(v.to_string(), "1,1,0,1");
        let s: OneStringSequence = " 2, 3 ,2".parse().unwrap();
        assert_eq!(s.to_string(), "2,3,2");
        assert!("1,x".parse::<ThinDimVector>().is_err());
    }

    fn arb_strings() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(1i64..6, 1..7)
    }

    proptest! {
        #[test]
        fn strings_round_trip(raw in arb_strings()) {
            let a = OneStringSequence::new(&raw).unwrap();
            let d = from_strings(&a);
            prop_assert_eq!(&one_strings(&d), &a);
            prop_assert_eq!(from_strings(&one_strings(&d)), d.clone());
            prop_assert_eq!(a.total(), d.rank());
            prop_assert_eq!(d.zero_count() as isize, a.r() + 1);
            let c = classify(&d);
            prop_assert_eq!(c.dense, c.codim == 0);
            prop_assert_eq!(c.dense, even_internal_count(&d) <= 1);
            prop_assert_eq!(even_string_ends(&d).len(), c.e);
        }
    }
}
