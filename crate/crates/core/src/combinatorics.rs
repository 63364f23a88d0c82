//! Exact shattering coefficients, VC dimensions and Sauer-bound arithmetic.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::concepts::Concept;
use crate::error::{Error, Result};
use crate::instance::{restrict_class, Group, GroupFamily, HypothesisClass, Label};

/// Widest point list a view can hold (patterns are packed into a `u64`).
pub const MAX_VIEW_POINTS: usize = 64;

/// Default cap on the number of k-subsets examined for one coefficient.
pub const SUBSET_CAP: u128 = 1_000_000;

/// A deduplicated set of binary vectors over an ordered point list.
///
/// Bit `i` of a pattern is set when the function takes the "on" value (+1 for
/// labels, membership for groups) at point `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryClassView {
    points: usize,
    patterns: Vec<u64>,
}

impl BinaryClassView {
    pub fn from_bits(points: usize, patterns: impl IntoIterator<Item = u64>) -> Result<Self> {
        if points > MAX_VIEW_POINTS {
            return Err(Error::CapExceeded {
                what: "view width",
                size: points as u128,
                limit: MAX_VIEW_POINTS as u128,
            });
        }
        let set: BTreeSet<u64> = patterns.into_iter().collect();
        if points < 64 && set.iter().any(|&p| p >> points != 0) {
            return Err(Error::invalid("pattern has bits beyond the point list"));
        }
        Ok(BinaryClassView {
            points,
            patterns: set.into_iter().collect(),
        })
    }

    pub fn from_labels<'a>(points: usize, rows: impl IntoIterator<Item = &'a [Label]>) -> Result<Self> {
        let mut bits = Vec::new();
        for row in rows {
            if row.len() != points {
                return Err(Error::invalid("pattern length differs from the point list"));
            }
            bits.push(pack(row.iter().map(|l| l.is_pos())));
        }
        Self::from_bits(points, bits)
    }

    /// Groups as 0/1 membership indicators.
    pub fn from_groups(groups: &GroupFamily, domain_len: usize) -> Result<Self> {
        let rows: Vec<u64> = groups
            .iter()
            .map(|g| pack((0..domain_len).map(|x| g.contains(x))))
            .collect();
        Self::from_bits(domain_len, rows)
    }

    /// The class over the whole domain; blocks are expanded to all completions.
    pub fn from_hypotheses(h: &HypothesisClass) -> Result<Self> {
        let n = h.domain_len();
        let all = Group::new("*", 0..n, n)?;
        let rows = restrict_class(h, &all)?;
        Self::from_labels(n, rows.iter().map(|r| r.as_slice()))
    }

    /// The class restricted to the members of `g`.
    pub fn from_restriction(h: &HypothesisClass, g: &Group) -> Result<Self> {
        let rows = restrict_class(h, g)?;
        Self::from_labels(g.len(), rows.iter().map(|r| r.as_slice()))
    }

    pub fn from_concepts(domain_len: usize, concepts: &[Concept]) -> Result<Self> {
        Self::from_labels(domain_len, concepts.iter().map(|c| c.values()))
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn patterns(&self) -> &[u64] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn without_pattern(&self, idx: usize) -> Self {
        let mut patterns = self.patterns.clone();
        patterns.remove(idx);
        BinaryClassView {
            points: self.points,
            patterns,
        }
    }

    fn distinct_on(&self, mask: u64, buf: &mut Vec<u64>) -> usize {
        buf.clear();
        buf.extend(self.patterns.iter().map(|p| p & mask));
        buf.sort_unstable();
        buf.dedup();
        buf.len()
    }
}

fn pack(bits: impl Iterator<Item = bool>) -> u64 {
    bits.enumerate()
        .fold(0u64, |acc, (i, b)| if b { acc | (1u64 << i) } else { acc })
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `sum_{i=0}^{min(d,k)} C(k, i)`.
pub fn sauer_bound(k: u64, d: u64) -> BigUint {
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 0..d.min(k) {
        term = term * (k - i) / (i + 1);
        total += &term;
    }
    total
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 64;
        let top: BigUint = x >> shift;
        top.to_f64().expect("fits in f64").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn choose_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Calls `visit` with the bitmask of every k-subset of `0..n` until it returns false.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(u64) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0u64, |m, &i| m | (1u64 << i));
        if !visit(mask) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn shattering_coefficient(view: &BinaryClassView, k: usize) -> Result<u64> {
    shattering_coefficient_capped(view, k, SUBSET_CAP)
}

/// Largest number of distinct k-tuples the class realizes on k points.
///
/// When `k` is at least the number of points, tuples may repeat points, so the
/// coefficient is the number of distinct patterns on the whole list.
pub fn shattering_coefficient_capped(view: &BinaryClassView, k: usize, cap: u128) -> Result<u64> {
    if k == 0 {
        return Err(Error::invalid("shattering coefficient needs k >= 1"));
    }
    if view.is_empty() {
        return Ok(0);
    }
    if k >= view.points {
        return Ok(view.len() as u64);
    }
    let subsets = choose_u128(view.points, k);
    if subsets > cap {
        return Err(Error::CapExceeded {
            what: "k-subset enumeration",
            size: subsets,
            limit: cap,
        });
    }
    let ceiling = if k >= 63 {
        u64::MAX
    } else {
        (1u64 << k).min(view.len() as u64)
    };
    let mut best = 0u64;
    let mut buf = Vec::with_capacity(view.len());
    for_each_subset(view.points, k, |mask| {
        best = best.max(view.distinct_on(mask, &mut buf) as u64);
        best < ceiling
    });
    Ok(best)
}

pub fn vc_dimension(view: &BinaryClassView) -> Result<usize> {
    vc_dimension_capped(view, SUBSET_CAP)
}

/// Largest k such that some k-subset of the points is shattered.
pub fn vc_dimension_capped(view: &BinaryClassView, cap: u128) -> Result<usize> {
    let mut d = 0;
    for k in 1..=view.points {
        // shattering k points needs 2^k patterns
        if k >= 63 || (1u64 << k) > view.len() as u64 {
            break;
        }
        if shattering_coefficient_capped(view, k, cap)? == 1u64 << k {
            d = k;
        } else {
            break;
        }
    }
    Ok(d)
}

/// `max_g VC(H|_g)` over the nonempty groups (0 for a family with none).
pub fn max_restricted_vc(groups: &GroupFamily, h: &HypothesisClass) -> Result<usize> {
    let mut best = 0;
    for g in groups.iter().filter(|g| !g.is_empty()) {
        best = best.max(vc_dimension(&BinaryClassView::from_restriction(h, g)?)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(points: usize) -> BinaryClassView {
        BinaryClassView::from_bits(points, 0..(1u64 << points)).unwrap()
    }

    fn constants(points: usize) -> BinaryClassView {
        BinaryClassView::from_bits(points, [0, (1u64 << points) - 1]).unwrap()
    }

    /// h_t(i) = +1 iff i >= t, t = 0..=n (t = n is the constant -1).
    fn thresholds(points: usize) -> BinaryClassView {
        BinaryClassView::from_bits(points, (0..=points).map(|t| ((1u64 << points) - 1) >> t << t)).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(shattering_coefficient(&constants(5), 3).unwrap(), 2);
        assert_eq!(shattering_coefficient(&full(5), 3).unwrap(), 8);
        assert_eq!(thresholds(10).len(), 11);
        assert_eq!(shattering_coefficient(&thresholds(10), 4).unwrap(), 5);
    }

    #[test]
    fn coefficient_beyond_point_count_counts_patterns() {
        assert_eq!(shattering_coefficient(&thresholds(10), 400).unwrap(), 11);
    }

    #[test]
    fn coefficient_rejects_zero_and_caps() {
        assert!(shattering_coefficient(&full(3), 0).is_err());
        let wide = BinaryClassView::from_bits(40, [0, 1, 2, 3]).unwrap();
        assert!(shattering_coefficient(&wide, 20).unwrap_err().is_cap());
    }

    #[test]
    fn vc_examples() {
        assert_eq!(vc_dimension(&constants(6)).unwrap(), 1);
        assert_eq!(vc_dimension(&full(5)).unwrap(), 5);
        assert_eq!(vc_dimension(&thresholds(8)).unwrap(), 1);
        let singletons = BinaryClassView::from_bits(6, (0..6).map(|i| 1u64 << i)).unwrap();
        assert_eq!(vc_dimension(&singletons).unwrap(), 1);
        let one = BinaryClassView::from_bits(3, [5]).unwrap();
        assert_eq!(vc_dimension(&one).unwrap(), 0);
    }

    #[test]
    fn sauer_examples() {
        assert_eq!(sauer_bound(200, 1), BigUint::from(201u32));
        assert_eq!(sauer_bound(4, 2), BigUint::from(11u32));
        assert_eq!(sauer_bound(3, 5), BigUint::from(8u32));
        assert_eq!(sauer_bound(0, 0), BigUint::from(1u32));
        assert_eq!(binomial(200, 2), BigUint::from(19900u32));
    }

    #[test]
    fn ln_big_matches_f64_and_scales() {
        let x = BigUint::from(32080u32);
        assert!((ln_big(&x) - 32080f64.ln()).abs() < 1e-12);
        let huge = BigUint::one() << 5000u32;
        assert!((ln_big(&huge) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn subsets_enumerated_once() {
        let mut seen = BTreeSet::new();
        for_each_subset(6, 3, |m| {
            assert_eq!(m.count_ones(), 3);
            assert!(seen.insert(m));
            true
        });
        assert_eq!(seen.len(), 20);
    }
}
