//! Finite quotient model of the field, used as a brute-force oracle.
//!
//! The model fixes a box of t-exponent vectors and a digit window
//! `[i_lo, i_hi)` for p-adic expansions; its points are exactly the field
//! elements supported on the box whose coefficients are `p^{i_lo} u` with
//! `0 <= u < p^{i_hi - i_lo}`. Membership of a model point in any coset
//! whose indices lie strictly inside the windows is decided slot by slot
//! from the digit data, so set expressions can be compared by exhaustive
//! enumeration. Queries touching a window boundary are rejected rather
//! than answered unreliably.

use crate::error::{Error, Result};
use crate::hlf::{DistinguishedSet, FieldElement, FieldShape};
use crate::multi_index::rightlex_slices;
use crate::padic;
use crate::setalg::{RankOneCoset, SymbolicSet};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

const MAX_POINTS: u128 = 1 << 22;

/// Set of model points, stored as a bitmap over point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    bits: Vec<u64>,
    len: usize,
}

impl PointSet {
    fn empty(len: usize) -> Self {
        PointSet {
            bits: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.len, other.len);
        PointSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a | b)
                .collect(),
            len: self.len,
        }
    }

    pub fn intersect(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.len, other.len);
        PointSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn subtract(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.len, other.len);
        PointSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & !b)
                .collect(),
            len: self.len,
        }
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |i| self.contains(*i))
    }
}

/// Per-slot value constraint of a coset inside the model.
enum SlotAllowed {
    All,
    Single(u64),
    /// `u ≡ first (mod step)`
    Progression {
        first: u64,
        step: u64,
    },
    None,
}

#[derive(Debug, Clone)]
pub struct QuotientModel {
    shape: FieldShape,
    t_lo: Vec<i64>,
    t_hi: Vec<i64>,
    i_lo: i64,
    i_hi: i64,
    slots: Vec<Vec<i64>>,
    radix: u64,
}

impl QuotientModel {
    pub fn new(
        shape: FieldShape,
        t_lo: Vec<i64>,
        t_hi: Vec<i64>,
        i_lo: i64,
        i_hi: i64,
    ) -> Result<Self> {
        if t_lo.len() != shape.tdim() || t_hi.len() != shape.tdim() {
            return Err(Error::invalid("t-window arity does not match the field"));
        }
        if t_lo.iter().zip(&t_hi).any(|(l, h)| l > h) || i_lo >= i_hi {
            return Err(Error::invalid("empty oracle window"));
        }
        let delta = (i_hi - i_lo) as u32;
        let mut slots = vec![Vec::new()];
        for (l, h) in t_lo.iter().zip(&t_hi) {
            let mut next = Vec::new();
            for base in &slots {
                for c in *l..=*h {
                    let mut v = base.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            slots = next;
        }
        slots.sort();
        let radix = (shape.p as u128).pow(delta);
        let total = radix.checked_pow(slots.len() as u32).unwrap_or(u128::MAX);
        if total > MAX_POINTS {
            return Err(Error::ModelTooLarge(total, MAX_POINTS));
        }
        Ok(QuotientModel {
            shape,
            t_lo,
            t_hi,
            i_lo,
            i_hi,
            slots,
            radix: radix as u64,
        })
    }

    pub fn shape(&self) -> FieldShape {
        self.shape
    }

    pub fn point_count(&self) -> usize {
        (self.radix as u128).pow(self.slots.len() as u32) as usize
    }

    fn slot_index(&self, exp: &[i64]) -> Option<usize> {
        self.slots.binary_search_by(|s| s.as_slice().cmp(exp)).ok()
    }

    /// Coefficient as a digit value `u` with `c = p^{i_lo} u`, if it is
    /// exactly representable in the window.
    fn coeff_value(&self, c: &BigRational) -> Option<u64> {
        if c.is_zero() {
            // 0 is representable only when i_lo <= 0 <= any; u = 0 works iff
            // p^{i_lo} * 0 = 0, always
            return Some(0);
        }
        let u = c / padic::p_pow(self.shape.p, self.i_lo);
        if !u.is_integer() || u.is_negative() {
            return None;
        }
        let u = u.to_integer().to_u64()?;
        if u >= self.radix {
            return None;
        }
        Some(u)
    }

    fn check_dset_safe(&self, d: &DistinguishedSet) -> Result<()> {
        self.shape.check_same(&d.shape())?;
        let tail = d.ideal().tail.components();
        for ((lo, hi), t) in self.t_lo.iter().zip(&self.t_hi).zip(tail) {
            if !(lo < t && t < hi) {
                return Err(Error::WindowUnsafe(format!("ideal tail component {t}")));
            }
        }
        if !(self.i_lo < d.ideal().i1 && d.ideal().i1 < self.i_hi) {
            return Err(Error::WindowUnsafe(format!(
                "ideal exponent {}",
                d.ideal().i1
            )));
        }
        self.check_element_safe(d.translate())
    }

    fn check_element_safe(&self, x: &FieldElement) -> Result<()> {
        for (exp, c) in x.terms() {
            if self.slot_index(exp).is_none() {
                return Err(Error::WindowUnsafe(format!("translate exponent {exp:?}")));
            }
            if self.coeff_value(c).is_none() {
                return Err(Error::WindowUnsafe(format!("translate coefficient {c}")));
            }
        }
        Ok(())
    }

    fn allowed_for_dset(&self, d: &DistinguishedSet) -> Result<Vec<SlotAllowed>> {
        self.check_dset_safe(d)?;
        let tail = d.ideal().tail.components();
        let i1 = d.ideal().i1;
        let step = self.shape.p.pow((i1 - self.i_lo) as u32);
        let mut out = Vec::with_capacity(self.slots.len());
        for slot in &self.slots {
            let alpha = d.translate().coeff(slot);
            match rightlex_slices(slot, tail) {
                Ordering::Greater => out.push(SlotAllowed::All),
                Ordering::Equal => {
                    let r = padic::residue_mod_p_power(self.shape.p, &alpha, i1);
                    match self.coeff_value(&r) {
                        Some(first) => out.push(SlotAllowed::Progression { first, step }),
                        None => out.push(SlotAllowed::None),
                    }
                }
                Ordering::Less => match self.coeff_value(&alpha) {
                    Some(u) => out.push(SlotAllowed::Single(u)),
                    None => out.push(SlotAllowed::None),
                },
            }
        }
        Ok(out)
    }

    fn allowed_for_rank_one(&self, r: &RankOneCoset) -> Result<Vec<SlotAllowed>> {
        self.shape.check_same(&r.shape())?;
        let j = r.index();
        if !(self.t_lo[0] < j && j < self.t_hi[0]) {
            return Err(Error::WindowUnsafe(format!("rank-one index {j}")));
        }
        self.check_element_safe(r.translate())?;
        let mut out = Vec::with_capacity(self.slots.len());
        for slot in &self.slots {
            if slot[0] >= j {
                out.push(SlotAllowed::All);
            } else {
                match self.coeff_value(&r.translate().coeff(slot)) {
                    Some(u) => out.push(SlotAllowed::Single(u)),
                    None => out.push(SlotAllowed::None),
                }
            }
        }
        Ok(out)
    }

    fn fill(&self, allowed: &[SlotAllowed]) -> PointSet {
        let mut set = PointSet::empty(self.point_count());
        let values: Vec<Vec<u64>> = allowed
            .iter()
            .map(|a| match a {
                SlotAllowed::All => (0..self.radix).collect(),
                SlotAllowed::Single(u) => vec![*u],
                SlotAllowed::Progression { first, step } => {
                    (*first..self.radix).step_by(*step as usize).collect()
                }
                SlotAllowed::None => Vec::new(),
            })
            .collect();
        if values.iter().any(|v| v.is_empty()) {
            return set;
        }
        // odometer over the per-slot value lists
        let mut cursor = vec![0usize; values.len()];
        loop {
            let mut idx: u64 = 0;
            for (s, vs) in values.iter().enumerate().rev() {
                idx = idx * self.radix + vs[cursor[s]];
            }
            set.set(idx as usize);
            let mut s = 0;
            loop {
                if s == values.len() {
                    return set;
                }
                cursor[s] += 1;
                if cursor[s] < values[s].len() {
                    break;
                }
                cursor[s] = 0;
                s += 1;
            }
        }
    }

    /// All model points of a distinguished set.
    pub fn points_of_dset(&self, d: &DistinguishedSet) -> Result<PointSet> {
        Ok(self.fill(&self.allowed_for_dset(d)?))
    }

    /// All model points of a normalized symbolic set.
    pub fn points_of(&self, s: &SymbolicSet) -> Result<PointSet> {
        match s {
            SymbolicSet::Empty => Ok(PointSet::empty(self.point_count())),
            SymbolicSet::Dist(d) => self.points_of_dset(d),
            SymbolicSet::RankOne(r) => Ok(self.fill(&self.allowed_for_rank_one(r)?)),
            SymbolicSet::Union(members) => {
                let mut acc = PointSet::empty(self.point_count());
                for m in members {
                    acc = acc.union(&self.points_of(m)?);
                }
                Ok(acc)
            }
            SymbolicSet::Diff(d) => {
                let mut acc = self.points_of(d.base())?;
                for h in d.holes() {
                    acc = acc.subtract(&self.points_of_dset(h)?);
                }
                Ok(acc)
            }
        }
    }

    /// Model point index of an explicitly given element, if the element is a
    /// model point.
    pub fn element_index(&self, x: &FieldElement) -> Result<usize> {
        self.shape.check_same(&x.shape())?;
        let mut values = vec![0u64; self.slots.len()];
        for (exp, c) in x.terms() {
            let s = self
                .slot_index(exp)
                .ok_or_else(|| Error::WindowUnsafe(format!("exponent {exp:?}")))?;
            values[s] = self
                .coeff_value(c)
                .ok_or_else(|| Error::WindowUnsafe(format!("coefficient {c}")))?;
        }
        let mut idx: u64 = 0;
        for v in values.iter().rev() {
            idx = idx * self.radix + v;
        }
        Ok(idx as usize)
    }

    /// The model point with the given index.
    pub fn element_at(&self, idx: usize) -> FieldElement {
        let mut rem = idx as u64;
        let mut terms = Vec::new();
        let scale = padic::p_pow(self.shape.p, self.i_lo);
        for slot in &self.slots {
            let u = rem % self.radix;
            rem /= self.radix;
            if u != 0 {
                terms.push((slot.clone(), BigRational::from_integer(u.into()) * &scale));
            }
        }
        FieldElement::from_terms(self.shape, terms).expect("model slots have the right arity")
    }

    /// Membership of a single model element, decided slot by slot.
    pub fn member_model(&self, x: &FieldElement, s: &SymbolicSet) -> Result<bool> {
        let idx = self.element_index(x)?;
        Ok(self.points_of(s)?.contains(idx))
    }

    /// Equality of two set expressions over the model.
    pub fn equal_model(&self, a: &SymbolicSet, b: &SymbolicSet) -> Result<bool> {
        Ok(self.points_of(a)? == self.points_of(b)?)
    }

    /// Does the family cover every model point of the target?
    pub fn covers_model(&self, target: &DistinguishedSet, family: &[SymbolicSet]) -> Result<bool> {
        let mut rest = self.points_of_dset(target)?;
        for m in family {
            rest = rest.subtract(&self.points_of(m)?);
            if rest.is_empty() {
                return Ok(true);
            }
        }
        Ok(rest.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hlf::IdealIndex;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn shape2() -> FieldShape {
        FieldShape::new(2, 2).unwrap()
    }

    fn model2() -> QuotientModel {
        QuotientModel::new(shape2(), vec![-1], vec![1], -1, 3).unwrap()
    }

    fn dset(terms: &[(i64, (i64, i64))], i1: i64, j: i64) -> DistinguishedSet {
        let s = shape2();
        let alpha =
            FieldElement::from_terms(s, terms.iter().map(|(e, (n, d))| (vec![*e], q(*n, *d))))
                .unwrap();
        DistinguishedSet::new(s, alpha, IdealIndex::new(i1, vec![j])).unwrap()
    }

    #[test]
    fn model_point_count() {
        // p=2, t-window {0,1}, digits [0,2): 2^4 = 16 elements
        let m = QuotientModel::new(shape2(), vec![0], vec![1], 0, 2).unwrap();
        assert_eq!(m.point_count(), 16);
    }

    #[test]
    fn coset_partition_is_exact_in_the_model() {
        let m = model2();
        let o = DistinguishedSet::integers(shape2());
        let o_pts = m.points_of_dset(&o).unwrap();
        let reps = o.coset_reps(1).unwrap();
        let a = m.points_of_dset(&reps[0]).unwrap();
        let b = m.points_of_dset(&reps[1]).unwrap();
        assert!(a.intersect(&b).is_empty());
        assert_eq!(a.union(&b), o_pts);
        assert_eq!(a.count() + b.count(), o_pts.count());
    }

    #[test]
    fn membership_agrees_with_the_public_rule() {
        let m = model2();
        let sets = [
            dset(&[], 0, 0),
            dset(&[(0, (1, 2))], 0, 0),
            dset(&[(0, (1, 1))], 2, 0),
            dset(&[(-1, (1, 2))], 1, 0),
        ];
        for d in &sets {
            let bits = m.points_of_dset(d).unwrap();
            for idx in 0..m.point_count() {
                let x = m.element_at(idx);
                assert_eq!(
                    d.member(&x).unwrap(),
                    bits.contains(idx),
                    "disagreement for point {x} in {d}"
                );
            }
        }
    }

    #[test]
    fn assembled_union_equals_the_parent() {
        let m = model2();
        let o = DistinguishedSet::integers(shape2());
        let union = SymbolicSet::Union(
            o.coset_reps(1)
                .unwrap()
                .into_iter()
                .map(SymbolicSet::Dist)
                .collect(),
        );
        assert!(m.equal_model(&union, &SymbolicSet::Dist(o)).unwrap());
    }

    #[test]
    fn membership_agrees_on_random_sets() {
        use crate::sample::{Rng, SafeWindow};
        let w = SafeWindow {
            shape: shape2(),
            t_lo: vec![-1],
            t_hi: vec![1],
            i_lo: -1,
            i_hi: 2,
        };
        let m = w.model().unwrap();
        let mut rng = Rng::new(99);
        for _ in 0..100 {
            let d = w.dset(&mut rng, 0);
            let bits = m.points_of_dset(&d).unwrap();
            for idx in 0..m.point_count() {
                let x = m.element_at(idx);
                assert_eq!(d.member(&x).unwrap(), bits.contains(idx), "{d} at {x}");
            }
        }
    }

    #[test]
    fn boundary_indices_are_rejected() {
        let m = model2();
        // tail touches the t-window boundary
        let d = dset(&[], 0, 1);
        assert!(matches!(m.points_of_dset(&d), Err(Error::WindowUnsafe(_))));
        // p-exponent touches the digit boundary
        let d = dset(&[], 3, 0);
        assert!(matches!(m.points_of_dset(&d), Err(Error::WindowUnsafe(_))));
    }

    #[test]
    fn element_round_trip() {
        let m = model2();
        for idx in [0usize, 1, 5, 100, m.point_count() - 1] {
            let x = m.element_at(idx);
            assert_eq!(m.element_index(&x).unwrap(), idx);
        }
    }
}
