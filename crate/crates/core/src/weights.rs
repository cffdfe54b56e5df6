//! Dominant weights of SO(n,1) and the degree bookkeeping attached to them.
//!
//! A weight `(b₁,…,b_m)` with `m = ⌊(n+1)/2⌋` and `b₁ ≥ ⋯ ≥ b_m ≥ 0`. Its
//! support count `i(μ)` (number of nonzero entries) decides in which degrees
//! cohomology of a cocompact lattice with coefficients in the corresponding
//! representation can be nonzero.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::WeightError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DominantWeight {
    entries: Vec<u32>,
    ambient_n: usize,
}

impl DominantWeight {
    /// Validates length `⌊(n+1)/2⌋` and dominance.
    pub fn new(ambient_n: usize, entries: Vec<i64>) -> Result<Self, WeightError> {
        let m = (ambient_n + 1) / 2;
        if entries.len() != m {
            return Err(WeightError::WrongLength {
                n: ambient_n,
                expected: m,
                got: entries.len(),
            });
        }
        if entries.iter().any(|&b| b < 0) || entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::NotDominant(entries));
        }
        Ok(DominantWeight {
            entries: entries.into_iter().map(|b| b as u32).collect(),
            ambient_n,
        })
    }

    /// Parses a comma separated list such as `1,1,0`.
    pub fn parse(ambient_n: usize, s: &str) -> Result<Self, WeightError> {
        Self::new(ambient_n, parse_list(s)?)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    /// `m = ⌊(n+1)/2⌋`, the rank of SO(n+1).
    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.entries.clone()).expect("dominant weights are partitions")
    }

    /// `i(μ)`: the number of nonzero entries.
    pub fn support_count(&self) -> usize {
        self.entries.iter().filter(|&&b| b != 0).count()
    }

    /// Whether cohomology vanishes in every degree: `n = 2m − 1` and
    /// every entry is nonzero.
    pub fn vanishes_identically(&self) -> bool {
        let m = self.rank();
        self.ambient_n + 1 == 2 * m && self.support_count() == m
    }

    /// `{i(μ), …, n − i(μ)}`, or empty in the identically vanishing case.
    pub fn nonvanishing_range(&self) -> DegreeRange {
        if self.vanishes_identically() {
            return DegreeRange::default();
        }
        let i = self.support_count();
        DegreeRange {
            degrees: (i..=self.ambient_n - i).collect(),
        }
    }

    /// `R(𝔮(λ))`, which equals `i(λ)` whenever a compatible parabolic exists.
    pub fn levi_r(&self) -> Result<usize, WeightError> {
        if self.vanishes_identically() {
            return Err(WeightError::NoCompatibleParabolic {
                n: self.ambient_n,
                m: self.rank(),
            });
        }
        Ok(self.support_count())
    }

    /// Degrees `{i(λ), n − i(λ)}` in which `A_𝔮(λ)` has cohomology.
    pub fn aq_degrees(&self) -> Result<BTreeSet<usize>, WeightError> {
        let i = self.levi_r()?;
        Ok([i, self.ambient_n - i].into_iter().collect())
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A set of cohomological degrees; contiguous whenever nonempty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegreeRange {
    degrees: Vec<usize>,
}

impl DegreeRange {
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.degrees.binary_search(&p).is_ok()
    }
}

fn parse_list(s: &str) -> Result<Vec<i64>, WeightError> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| WeightError::Parse(s.to_string())))
        .collect()
}

/// A partition, stored without trailing zeros. The empty partition is
/// printed as `(0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, WeightError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::NotDominant(parts.iter().map(|&b| b as i64).collect()));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn parse(s: &str) -> Result<Self, WeightError> {
        let v = parse_list(s)?;
        if v.iter().any(|&b| b < 0) {
            return Err(WeightError::NotDominant(v));
        }
        Self::new(v.into_iter().map(|b| b as u32).collect())
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `|μ|`.
    pub fn size(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    /// Number of nonzero parts; equals the length of the first column.
    pub fn support_count(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Column lengths `μ'_1 ≥ μ'_2 ≥ ⋯`.
    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=width)
                .map(|c| self.0.iter().filter(|&&b| b >= c).count() as u32)
                .collect(),
        )
    }

    /// Interlacing branching `b₁ ≥ c₁ ≥ b₂ ≥ c₂ ≥ ⋯ ≥ b_l ≥ c_l ≥ 0`,
    /// sorted in decreasing lexicographic order.
    pub fn branch(&self) -> Vec<Partition> {
        let l = self.0.len();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(l);
        self.interlace(0, &mut cur, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    fn interlace(&self, j: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if j == self.0.len() {
            out.push(Partition::new(cur.clone()).expect("interlacing preserves order"));
            return;
        }
        let hi = self.0[j];
        let lo = self.0.get(j + 1).copied().unwrap_or(0);
        for c in (lo..=hi).rev() {
            cur.push(c);
            self.interlace(j + 1, cur, out);
            cur.pop();
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Partition::parse(s)
    }
}

/// Every partition of `d` into at most `max_parts` parts, in decreasing
/// lexicographic order.
pub fn partitions_of(d: usize, max_parts: usize) -> Vec<Partition> {
    fn go(rest: usize, cap: usize, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for part in (1..=cap.min(rest)).rev() {
            cur.push(part as u32);
            go(rest - part, part, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, max_parts, &mut Vec::new(), &mut out);
    out
}

/// All dominant weights for SO(n,1) with `|μ| ≤ max_size`.
pub fn dominant_weights(ambient_n: usize, max_size: usize) -> Vec<DominantWeight> {
    let m = (ambient_n + 1) / 2;
    (0..=max_size)
        .flat_map(|d| partitions_of(d, m))
        .map(|p| {
            let mut e: Vec<i64> = p.parts().iter().map(|&b| b as i64).collect();
            e.resize(m, 0);
            DominantWeight::new(ambient_n, e).expect("partition pads to a dominant weight")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, e: &[i64]) -> DominantWeight {
        DominantWeight::new(n, e.to_vec()).unwrap()
    }

    fn p(e: &[u32]) -> Partition {
        Partition::new(e.to_vec()).unwrap()
    }

    #[test]
    fn support_counts() {
        assert_eq!(w(5, &[2, 1, 0]).support_count(), 2);
        assert_eq!(w(3, &[0, 0]).support_count(), 0);
        assert_eq!(w(5, &[3, 3, 1]).support_count(), 3);
    }

    #[test]
    fn identically_vanishing() {
        assert!(w(5, &[1, 1, 1]).vanishes_identically());
        assert!(!w(6, &[1, 1, 1]).vanishes_identically());
        assert!(!w(5, &[1, 1, 0]).vanishes_identically());
    }

    #[test]
    fn ranges() {
        assert_eq!(w(4, &[1, 1]).nonvanishing_range().degrees(), &[2]);
        assert_eq!(w(3, &[0, 0]).nonvanishing_range().degrees(), &[0, 1, 2, 3]);
        assert_eq!(w(6, &[1, 1, 1]).nonvanishing_range().degrees(), &[3]);
        assert!(w(5, &[1, 1, 1]).nonvanishing_range().is_empty());
    }

    #[test]
    fn levi_and_aq() {
        assert_eq!(w(6, &[1, 1, 0]).levi_r(), Ok(2));
        assert_eq!(w(4, &[0, 0]).levi_r(), Ok(0));
        assert!(matches!(
            w(5, &[1, 1, 1]).levi_r(),
            Err(WeightError::NoCompatibleParabolic { .. })
        ));
        let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(w(6, &[1, 1, 0]).aq_degrees().unwrap(), set(&[2, 4]));
        assert_eq!(w(4, &[0, 0]).aq_degrees().unwrap(), set(&[0, 4]));
        assert_eq!(w(5, &[1, 0, 0]).aq_degrees().unwrap(), set(&[1, 4]));
        assert!(w(5, &[1, 1, 1]).aq_degrees().is_err());
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(matches!(
            DominantWeight::new(4, vec![1, 2]),
            Err(WeightError::NotDominant(_))
        ));
        assert!(matches!(
            DominantWeight::new(4, vec![1]),
            Err(WeightError::WrongLength { .. })
        ));
        assert!(DominantWeight::new(4, vec![1, -1]).is_err());
        assert!(DominantWeight::parse(4, "1,x").is_err());
    }

    #[test]
    fn branching_examples() {
        assert_eq!(p(&[1]).branch(), vec![p(&[1]), p(&[])]);
        assert_eq!(p(&[2, 1]).branch(), vec![p(&[2, 1]), p(&[2]), p(&[1, 1]), p(&[1])]);
        assert_eq!(p(&[]).branch(), vec![p(&[])]);
        assert_eq!(p(&[]).to_string(), "(0)");
    }

    #[test]
    fn conjugate_partition() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[2, 2, 2]).conjugate(), p(&[3, 3]));
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions_of(4, 4).len(), 5);
        assert_eq!(partitions_of(4, 2).len(), 3);
        assert_eq!(partitions_of(0, 0), vec![Partition::default()]);
    }
}
