//! Multi-indices in `Z^e` under the right-to-left lexicographic order.
//!
//! The rightmost component is the most significant: `(0,-1) < (-5,0)`
//! because the rightmost components already decide (`-1 < 0`). Elevation 0
//! gives the one-element index on which every comparison is `Equal`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn new(components: Vec<i64>) -> Self {
        MultiIndex(components)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn elevation(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    /// Concatenation `(self, other)` with `other` occupying the more
    /// significant (rightmost) positions.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    pub fn split_at(&self, mid: usize) -> (MultiIndex, MultiIndex) {
        let (a, b) = self.0.split_at(mid);
        (MultiIndex(a.to_vec()), MultiIndex(b.to_vec()))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v)
    }
}

/// Right-to-left lexicographic comparison of two slices of equal length.
pub fn rightlex_slices(a: &[i64], b: &[i64]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// Right-to-left lexicographic comparison; errors on elevation mismatch.
pub fn rightlex_cmp(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering> {
    if a.elevation() != b.elevation() {
        return Err(Error::ElevationMismatch(a.elevation(), b.elevation()));
    }
    Ok(rightlex_slices(&a.0, &b.0))
}

pub fn rightlex_min(a: &MultiIndex, b: &MultiIndex) -> Result<MultiIndex> {
    Ok(match rightlex_cmp(a, b)? {
        Ordering::Greater => b.clone(),
        _ => a.clone(),
    })
}

/// Iterator over the integer box `[lo, hi]` (componentwise), visited in
/// right-lex ascending order. The empty box (elevation 0) yields the single
/// empty index.
pub fn index_box(lo: &MultiIndex, hi: &MultiIndex) -> Result<Vec<MultiIndex>> {
    if lo.elevation() != hi.elevation() {
        return Err(Error::ElevationMismatch(lo.elevation(), hi.elevation()));
    }
    if lo.0.iter().zip(&hi.0).any(|(l, h)| l > h) {
        return Err(Error::invalid(format!("empty index box {lo}..{hi}")));
    }
    let volume: i128 =
        lo.0.iter()
            .zip(&hi.0)
            .map(|(l, h)| (h - l + 1) as i128)
            .product();
    if volume > 1 << 20 {
        return Err(Error::invalid(format!(
            "index box {lo}..{hi} beyond desk scale"
        )));
    }
    let mut out = vec![MultiIndex::empty()];
    for (l, h) in lo.0.iter().zip(&hi.0) {
        let mut next = Vec::with_capacity(out.len() * (h - l + 1) as usize);
        // new component is more significant, so it varies in the outer loop
        for c in *l..=*h {
            for base in &out {
                let mut v = base.0.clone();
                v.push(c);
                next.push(MultiIndex(v));
            }
        }
        // keep right-lex order: the component just pushed is the rightmost
        // so far; reorder by building with the most significant outermost.
        out = next;
    }
    // The construction above appends components left to right while varying
    // the freshly appended (most significant) one slowest within each stage,
    // which is exactly right-lex ascending.
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn rightmost_component_decides() {
        assert_eq!(
            rightlex_cmp(&mi(&[0, -1]), &mi(&[-5, 0])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            rightlex_cmp(&mi(&[1, 2]), &mi(&[1, 2])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            rightlex_cmp(&mi(&[3, 0, 0]), &mi(&[0, 0, 1])).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn elevation_zero_is_always_equal() {
        assert_eq!(rightlex_cmp(&mi(&[]), &mi(&[])).unwrap(), Ordering::Equal);
    }

    #[test]
    fn mismatched_elevations_error() {
        assert!(rightlex_cmp(&mi(&[1]), &mi(&[1, 2])).is_err());
    }

    #[test]
    fn box_iteration_is_rightlex_sorted() {
        let all = index_box(&mi(&[-1, 0]), &mi(&[1, 1])).unwrap();
        assert_eq!(all.len(), 6);
        for w in all.windows(2) {
            assert_eq!(rightlex_cmp(&w[0], &w[1]).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn brute_force_order_on_a_small_box() {
        // cross-check the comparison rule by sorting a box two ways
        let all = index_box(&mi(&[-2, -2, -2]), &mi(&[1, 1, 1])).unwrap();
        let mut resorted = all.clone();
        resorted.sort_by(|a, b| {
            let ra: Vec<i64> = a.0.iter().rev().cloned().collect();
            let rb: Vec<i64> = b.0.iter().rev().cloned().collect();
            ra.cmp(&rb)
        });
        assert_eq!(all, resorted);
        assert_eq!(
            rightlex_cmp(&mi(&[3, 0, 0]), &mi(&[0, 0, 1])).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn decreasing_but_bounded_below_in_z2() {
        // (-(n+1), 0) < (-n, 0) yet (0,-1) < (-n, 0) for every n
        for n in 0..200i64 {
            assert_eq!(
                rightlex_cmp(&mi(&[-(n + 1), 0]), &mi(&[-n, 0])).unwrap(),
                Ordering::Less
            );
            assert_eq!(
                rightlex_cmp(&mi(&[0, -1]), &mi(&[-n, 0])).unwrap(),
                Ordering::Less
            );
        }
    }
}
