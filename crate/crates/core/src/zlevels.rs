//! Discrete level structures on Z over the one-element base: the family
//! `{0}` at gamma >= 0 and `{0, d, ..., (n-1)d}` at gamma = -n, so that
//! `-level` of a finite set is the length of its longest stride-d
//! progression. Stride 2 on windows of primes gives the prime-pair
//! statistic: a window holds a pair of primes at distance 2 exactly when
//! the value is 2.
//!
//! All statements here are windowed: the verdicts mean "on this window",
//! nothing more.

use crate::error::{Error, Result};
use crate::structure::StructureDescriptor;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

/// The stride-d structure on Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrideStructure {
    pub d: u64,
}

impl StrideStructure {
    pub fn new(d: u64) -> Result<Self> {
        if d < 1 {
            return Err(Error::invalid("stride must be >= 1"));
        }
        Ok(StrideStructure { d })
    }

    pub fn descriptor(&self) -> StructureDescriptor {
        StructureDescriptor::ZStride { d: self.d }
    }

    /// The set at index gamma: `{0}` for gamma >= 0 and the first n
    /// multiples of d for gamma = -n.
    pub fn distinguished(&self, gamma: i64) -> Vec<i64> {
        if gamma >= 0 {
            vec![0]
        } else {
            (0..-gamma).map(|k| k * self.d as i64).collect()
        }
    }
}

/// A finite set inside an explicit window of Z.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZWindowSet {
    pub window: (i64, i64),
    pub members: BTreeSet<i64>,
}

impl ZWindowSet {
    pub fn new(window: (i64, i64), members: impl IntoIterator<Item = i64>) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::invalid("empty window"));
        }
        let members: BTreeSet<i64> = members.into_iter().collect();
        if let (Some(lo), Some(hi)) = (members.first(), members.last()) {
            if *lo < window.0 || *hi > window.1 {
                return Err(Error::invalid("members outside the window"));
            }
        }
        Ok(ZWindowSet { window, members })
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Shift everything by c; the window moves along.
    pub fn shift(&self, c: i64) -> ZWindowSet {
        ZWindowSet {
            window: (self.window.0 + c, self.window.1 + c),
            members: self.members.iter().map(|x| x + c).collect(),
        }
    }
}

/// Level of a windowed set: `-L` where `L` is the longest run
/// `a, a+d, ..., a+(L-1)d` inside the set (singletons give level -1, the
/// degeneracy convention of the structure). `None` when the set is empty.
pub fn z_level(s: StrideStructure, set: &ZWindowSet) -> Option<i64> {
    if set.is_empty() {
        return None;
    }
    Some(-(longest_run(s.d as i64, &set.members) as i64))
}

fn longest_run(d: i64, members: &BTreeSet<i64>) -> u64 {
    let mut best = 1u64;
    for &x in members {
        if members.contains(&(x - d)) {
            continue; // not the start of a maximal run
        }
        let mut len = 1u64;
        let mut y = x + d;
        while members.contains(&y) {
            len += 1;
            y += d;
        }
        best = best.max(len);
    }
    best
}

/// Uniformity: every member lies inside some run of the maximal length.
pub fn z_uniform(s: StrideStructure, set: &ZWindowSet) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::precondition("uniformity of the empty set"));
    }
    let need = longest_run(s.d as i64, &set.members);
    let d = s.d as i64;
    'members: for &x in &set.members {
        // x sits inside a run of length `need` iff for some offset the whole
        // run around x stays in the set
        for offset in 0..need as i64 {
            let start = x - offset * d;
            let mut ok = true;
            for k in 0..need as i64 {
                if !set.members.contains(&(start + k * d)) {
                    ok = false;
                    break;
                }
            }
            if ok {
                continue 'members;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Primes in the window `[k, k+n]`, by an offset sieve of Eratosthenes.
pub fn primes_window(k: i64, n: u64) -> Result<ZWindowSet> {
    if n < 1 {
        return Err(Error::invalid("window length must be >= 1"));
    }
    let lo = k;
    let hi = k
        .checked_add(n as i64)
        .ok_or_else(|| Error::invalid("window overflows"))?;
    if n > 100_000_000 || hi > 1 << 40 {
        return Err(Error::invalid("window beyond desk scale"));
    }
    let lo_clamped = lo.max(0);
    let size = (hi - lo_clamped + 1) as usize;
    let mut is_prime = vec![true; size];
    for (idx, flag) in is_prime.iter_mut().enumerate() {
        let v = lo_clamped + idx as i64;
        if v < 2 {
            *flag = false;
        }
    }
    let mut q: i64 = 2;
    while q * q <= hi {
        // first multiple of q in the window that is >= q^2
        let start = (q * q).max(lo_clamped.div_euclid(q).max(2) * q);
        let mut multiple = start;
        if multiple < lo_clamped {
            multiple += q * ((lo_clamped - multiple + q - 1) / q);
        }
        while multiple <= hi {
            if multiple >= lo_clamped && multiple != q {
                is_prime[(multiple - lo_clamped) as usize] = false;
            }
            multiple += q;
        }
        q += 1;
    }
    let members = is_prime
        .iter()
        .enumerate()
        .filter(|(_, f)| **f)
        .map(|(idx, _)| lo_clamped + idx as i64);
    ZWindowSet::new((lo, hi), members)
}

/// Trial-division oracle used to cross-check the sieve.
pub fn is_prime_naive(v: i64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2i64;
    while d * d <= v {
        if v % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The stride-2 statistic on a window of primes: `-z_level` under stride 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwinReport {
    pub neg_level: i64,
    pub window: (i64, i64),
    /// Set when the window evidence is weaker than a pair (no two primes at
    /// distance 2 inside the window).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn twin_level(k: i64, n: u64) -> Result<TwinReport> {
    let primes = primes_window(k, n)?;
    let s = StrideStructure::new(2)?;
    let neg_level = match z_level(s, &primes) {
        None => {
            return Ok(TwinReport {
                neg_level: 0,
                window: primes.window,
                note: Some("no primes in the window".into()),
            })
        }
        Some(l) => -l,
    };
    let note = if neg_level < 2 {
        Some("window too small: no prime pair at distance 2 inside it".into())
    } else {
        None
    };
    Ok(TwinReport {
        neg_level,
        window: primes.window,
        note,
    })
}

/// Concatenated runs of lengths 1, 2, ..., m separated by single gaps,
/// starting at 0. The level of the prefix is -m.
pub fn type_l_prefix(m: u64) -> Result<ZWindowSet> {
    if m < 1 {
        return Err(Error::invalid("need at least one chain"));
    }
    let mut members = Vec::new();
    let mut start = 0i64;
    for len in 1..=m as i64 {
        for k in 0..len {
            members.push(start + k);
        }
        start += len + 1;
    }
    let hi = *members.last().unwrap();
    ZWindowSet::new((0, hi), members)
}

/// Greedy subcover scan for windowed covers by finite sets; returns the
/// selected indices or the first uncovered member.
pub fn z_subcover_scan(
    target: &ZWindowSet,
    family: &[ZWindowSet],
) -> std::result::Result<Vec<usize>, i64> {
    let mut chosen = Vec::new();
    for &x in &target.members {
        match family.iter().position(|f| f.members.contains(&x)) {
            Some(k) => {
                if !chosen.contains(&k) {
                    chosen.push(k);
                }
            }
            None => return Err(x),
        }
    }
    Ok(chosen)
}

const SIEVE_MAGIC: &[u8; 8] = b"ZLVSIEVE";

/// Writes a primality bitmap for the window: 8-byte magic, little-endian
/// bit count, then the bits; bit i corresponds to `window.0 + i`.
pub fn write_sieve_cache(path: &Path, set: &ZWindowSet) -> Result<()> {
    let len = (set.window.1 - set.window.0 + 1) as u64;
    let mut bytes = vec![0u8; len.div_ceil(8) as usize];
    for &x in &set.members {
        let bit = (x - set.window.0) as u64;
        bytes[(bit / 8) as usize] |= 1 << (bit % 8);
    }
    let mut f = std::fs::File::create(path)
        .map_err(|e| Error::invalid(format!("cannot create sieve cache: {e}")))?;
    f.write_all(SIEVE_MAGIC)
        .and_then(|_| f.write_all(&len.to_le_bytes()))
        .and_then(|_| f.write_all(&bytes))
        .map_err(|e| Error::invalid(format!("cannot write sieve cache: {e}")))
}

/// Reads a bitmap written by `write_sieve_cache`, rebasing it at `start`.
pub fn read_sieve_cache(path: &Path, start: i64) -> Result<ZWindowSet> {
    let mut f = std::fs::File::open(path)
        .map_err(|e| Error::invalid(format!("cannot open sieve cache: {e}")))?;
    let mut magic = [0u8; 8];
    f.read_exact(&mut magic)
        .map_err(|e| Error::invalid(format!("truncated sieve cache: {e}")))?;
    if &magic != SIEVE_MAGIC {
        return Err(Error::invalid("bad sieve cache magic"));
    }
    let mut len_bytes = [0u8; 8];
    f.read_exact(&mut len_bytes)
        .map_err(|e| Error::invalid(format!("truncated sieve cache: {e}")))?;
    let len = u64::from_le_bytes(len_bytes);
    let mut bytes = Vec::new();
    f.read_to_end(&mut bytes)
        .map_err(|e| Error::invalid(format!("truncated sieve cache: {e}")))?;
    if (bytes.len() as u64) < len.div_ceil(8) {
        return Err(Error::invalid("sieve cache shorter than its header claims"));
    }
    let members = (0..len).filter_map(|bit| {
        if bytes[(bit / 8) as usize] >> (bit % 8) & 1 == 1 {
            Some(start + bit as i64)
        } else {
            None
        }
    });
    ZWindowSet::new((start, start + len as i64 - 1), members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stride(d: u64) -> StrideStructure {
        StrideStructure::new(d).unwrap()
    }

    fn set(window: (i64, i64), members: &[i64]) -> ZWindowSet {
        ZWindowSet::new(window, members.iter().copied()).unwrap()
    }

    #[test]
    fn distinguished_sets() {
        assert_eq!(stride(1).distinguished(-3), vec![0, 1, 2]);
        assert_eq!(stride(2).distinguished(-3), vec![0, 2, 4]);
        assert_eq!(stride(1).distinguished(5), vec![0]);
        assert_eq!(stride(7).distinguished(0), vec![0]);
    }

    #[test]
    fn level_is_longest_run() {
        // interleaved runs of lengths 1, 2, 3
        let s = set((0, 7), &[0, 2, 3, 5, 6, 7]);
        assert_eq!(z_level(stride(1), &s), Some(-3));
        // evens have level -1
        let evens = set((0, 100), &(0..=50).map(|k| 2 * k).collect::<Vec<_>>());
        assert_eq!(z_level(stride(1), &evens), Some(-1));
        assert!(z_uniform(stride(1), &evens).unwrap());
        // primes up to 100 have level -2, not uniformly
        let primes = primes_window(0, 100).unwrap();
        assert_eq!(z_level(stride(1), &primes), Some(-2));
        assert!(!z_uniform(stride(1), &primes).unwrap());
        // empty set has no level
        assert_eq!(z_level(stride(1), &set((0, 3), &[])), None);
    }

    #[test]
    fn uniformity_of_single_runs() {
        let s = set((0, 10), &[4, 5, 6]);
        assert!(z_uniform(stride(1), &s).unwrap());
        // 5 sits in no pair inside the primes window
        let primes = primes_window(0, 30).unwrap();
        assert!(!z_uniform(stride(1), &primes).unwrap());
    }

    #[test]
    fn sieve_windows() {
        let s = primes_window(5, 20).unwrap();
        assert_eq!(
            s.members.iter().copied().collect::<Vec<_>>(),
            vec![5, 7, 11, 13, 17, 19, 23]
        );
        let s = primes_window(0, 10).unwrap();
        assert_eq!(
            s.members.iter().copied().collect::<Vec<_>>(),
            vec![2, 3, 5, 7]
        );
        let s = primes_window(24, 4).unwrap();
        assert!(s.is_empty());
        assert_eq!(z_level(stride(1), &s), None);
    }

    #[test]
    fn sieve_matches_trial_division() {
        for (k, n) in [(0i64, 200u64), (90, 150), (1000, 300), (-50, 80)] {
            let s = primes_window(k, n).unwrap();
            for v in k..=(k + n as i64) {
                assert_eq!(s.members.contains(&v), is_prime_naive(v), "at {v}");
            }
        }
    }

    #[test]
    fn twin_statistic() {
        // {3,5,7} forces the value 3 on small windows from 1
        let r = twin_level(1, 10).unwrap();
        assert_eq!(r.neg_level, 3);
        // from 5 the best stride-2 run among primes is a pair
        let r = twin_level(5, 10_000).unwrap();
        assert_eq!(r.neg_level, 2);
        assert!(r.note.is_none());
        // a tiny window with no pair reports itself as too small
        let r = twin_level(24, 4).unwrap();
        assert_eq!(r.neg_level, 0);
        assert!(r.note.is_some());
    }

    #[test]
    fn type_l_prefixes() {
        let s = type_l_prefix(3).unwrap();
        assert_eq!(
            s.members.iter().copied().collect::<Vec<_>>(),
            vec![0, 2, 3, 5, 6, 7]
        );
        assert_eq!(z_level(stride(1), &s), Some(-3));
        let s = type_l_prefix(1).unwrap();
        assert_eq!(z_level(stride(1), &s), Some(-1));
        let s = type_l_prefix(4).unwrap();
        assert_eq!(
            s.members.iter().copied().collect::<Vec<_>>(),
            vec![0, 2, 3, 5, 6, 7, 9, 10, 11, 12]
        );
        assert_eq!(z_level(stride(1), &s), Some(-4));
        for m in 1..=20 {
            assert_eq!(
                z_level(stride(1), &type_l_prefix(m).unwrap()),
                Some(-(m as i64))
            );
        }
    }

    #[test]
    fn translation_invariance() {
        let s = set((0, 20), &[1, 2, 3, 7, 9, 10]);
        for c in [-5i64, 3, 11] {
            assert_eq!(z_level(stride(1), &s.shift(c)), z_level(stride(1), &s));
        }
    }

    #[test]
    fn monotonicity_under_inclusion() {
        let big = set((0, 20), &[0, 1, 2, 3, 8, 10, 12]);
        let small = set((0, 20), &[1, 2, 10]);
        let lb = z_level(stride(1), &big).unwrap();
        let ls = z_level(stride(1), &small).unwrap();
        assert!(ls >= lb);
    }

    #[test]
    fn subcover_scan_on_chain_covers() {
        let target = type_l_prefix(4).unwrap();
        // cover by the maximal chains
        let family = vec![
            set((0, 12), &[0]),
            set((0, 12), &[2, 3]),
            set((0, 12), &[5, 6, 7]),
            set((0, 12), &[9, 10, 11, 12]),
        ];
        let chosen = z_subcover_scan(&target, &family).unwrap();
        assert_eq!(chosen, vec![0, 1, 2, 3]);
        // remove one chain: scan reports an uncovered point
        let partial = &family[..3];
        assert!(z_subcover_scan(&target, partial).is_err());
    }

    #[test]
    fn sieve_cache_round_trip() {
        let dir = std::env::temp_dir().join("levelset-sieve-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.bin");
        let s = primes_window(100, 64).unwrap();
        write_sieve_cache(&path, &s).unwrap();
        let back = read_sieve_cache(&path, 100).unwrap();
        assert_eq!(back, s);
        std::fs::remove_file(&path).ok();
    }
}
