//! Deterministic seeded sampling of oracle-safe values. Used by the
//! `oracle-check` command and by the test suites; everything drawn from a
//! given seed is reproducible.

use crate::hlf::{DistinguishedSet, FieldElement, FieldShape, IdealIndex};
use crate::oracle::QuotientModel;
use crate::padic;
use crate::setalg::{RankOneCoset, SymbolicSet};
use num_rational::BigRational;

/// SplitMix64.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform in the closed range `[lo, hi]`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// Window parameters from which samples stay strictly inside a quotient
/// model built with the same bounds.
#[derive(Debug, Clone)]
pub struct SafeWindow {
    pub shape: FieldShape,
    pub t_lo: Vec<i64>,
    pub t_hi: Vec<i64>,
    pub i_lo: i64,
    pub i_hi: i64,
}

impl SafeWindow {
    /// A small standard window for the given shape, sized so that the model
    /// stays comfortably enumerable. Two-dimensional shapes get a t-window
    /// wide enough for strictly-inside tails to vary.
    pub fn standard(shape: FieldShape) -> SafeWindow {
        let tdim = shape.tdim();
        let (t_radius, digits) = match (shape.p, tdim) {
            (2, 1) => (2, 3),
            (3, 1) => (2, 2),
            (2, _) => (1, 2),
            _ => (1, 2),
        };
        SafeWindow {
            shape,
            t_lo: vec![-t_radius; tdim],
            t_hi: vec![t_radius; tdim],
            i_lo: -1,
            i_hi: -1 + digits,
        }
    }

    /// A wider window for purely symbolic computations (levels, measures,
    /// containment). Too large to enumerate: do not build a model from it.
    pub fn wide(shape: FieldShape) -> SafeWindow {
        let tdim = shape.tdim();
        SafeWindow {
            shape,
            t_lo: vec![-2; tdim],
            t_hi: vec![2; tdim],
            i_lo: -2,
            i_hi: 3,
        }
    }

    pub fn model(&self) -> crate::error::Result<QuotientModel> {
        QuotientModel::new(
            self.shape,
            self.t_lo.clone(),
            self.t_hi.clone(),
            self.i_lo,
            self.i_hi,
        )
    }

    /// A model-representable coefficient: `p^{i_lo} u` with a random digit
    /// block `u`, occasionally zero.
    pub fn coeff(&self, rng: &mut Rng) -> BigRational {
        let delta = (self.i_hi - self.i_lo) as u32;
        let radix = self.shape.p.pow(delta);
        let u = rng.below(radix);
        BigRational::from_integer(u.into()) * padic::p_pow(self.shape.p, self.i_lo)
    }

    /// Random tail strictly inside the t-window.
    pub fn tail(&self, rng: &mut Rng) -> Vec<i64> {
        self.t_lo
            .iter()
            .zip(&self.t_hi)
            .map(|(lo, hi)| rng.range(lo + 1, hi - 1))
            .collect()
    }

    /// Random p-exponent leaving `headroom` digits below the upper bound,
    /// so that cells of that depth stay representable.
    pub fn p_exp(&self, rng: &mut Rng, headroom: u32) -> i64 {
        rng.range(self.i_lo + 1, self.i_hi - 1 - headroom as i64)
    }

    /// Random element supported inside the window. Exponents are kept
    /// distinct so that coefficients stay within the digit range.
    pub fn element(&self, rng: &mut Rng, max_terms: usize) -> FieldElement {
        let nterms = rng.below(max_terms as u64 + 1) as usize;
        let mut terms: Vec<(Vec<i64>, BigRational)> = Vec::with_capacity(nterms);
        for _ in 0..nterms {
            let exp: Vec<i64> = self
                .t_lo
                .iter()
                .zip(&self.t_hi)
                .map(|(lo, hi)| rng.range(*lo, *hi))
                .collect();
            if terms.iter().any(|(e, _)| e == &exp) {
                continue;
            }
            terms.push((exp, self.coeff(rng)));
        }
        FieldElement::from_terms(self.shape, terms).expect("window arity matches the shape")
    }

    /// Random distinguished set with all indices strictly inside the
    /// window and a model-representable translate.
    pub fn dset(&self, rng: &mut Rng, headroom: u32) -> DistinguishedSet {
        let tail = self.tail(rng);
        let i1 = self.p_exp(rng, headroom);
        let alpha = self.element(rng, 2);
        DistinguishedSet::new(self.shape, alpha, IdealIndex::new(i1, tail))
            .expect("window samples are valid")
    }

    /// Random rank-one coset (n = 2 only) with index strictly inside.
    pub fn rank_one(&self, rng: &mut Rng) -> RankOneCoset {
        let j = rng.range(self.t_lo[0] + 1, self.t_hi[0] - 1);
        RankOneCoset::new(self.shape, self.element(rng, 2), j).expect("window samples are valid")
    }

    /// The deepest cell refinement the digit window leaves room for.
    pub fn max_headroom(&self) -> u32 {
        (self.i_hi - self.i_lo - 2).max(0) as u32
    }

    /// Random normalized symbolic set built from window-safe pieces:
    /// distinguished sets, differences with p-holes, small disjoint unions
    /// and (for n = 2) rank-one cosets.
    pub fn symbolic(&self, rng: &mut Rng, allow_rank_one: bool) -> SymbolicSet {
        let max_h = self.max_headroom();
        let raw = match rng.below(4) {
            0 => SymbolicSet::Dist(self.dset(rng, 0)),
            1 if max_h >= 1 => {
                // a difference: base with one or two of its cells removed
                let deep = max_h >= 2 && rng.chance(1, 2);
                let base = self.dset(rng, if deep { 2 } else { 1 });
                let reps = base.coset_reps(1).expect("depth 1 is available");
                let mut holes = vec![reps[0].clone()];
                if deep {
                    let deeper = reps[reps.len() - 1].coset_reps(1).expect("depth 2 fits");
                    holes.push(deeper[0].clone());
                }
                SymbolicSet::difference(SymbolicSet::Dist(base), holes)
            }
            2 if max_h >= 1 => {
                // union of some depth-1 cells of a base
                let base = self.dset(rng, 1);
                let reps = base.coset_reps(1).expect("depth 1 is available");
                let keep: Vec<SymbolicSet> = reps
                    .into_iter()
                    .filter(|_| rng.chance(2, 3))
                    .map(SymbolicSet::Dist)
                    .collect();
                if keep.is_empty() {
                    SymbolicSet::Dist(self.dset(rng, 0))
                } else {
                    SymbolicSet::Union(keep)
                }
            }
            3 if allow_rank_one && self.shape.n == 2 => SymbolicSet::RankOne(self.rank_one(rng)),
            _ => SymbolicSet::Dist(self.dset(rng, 0)),
        };
        crate::setalg::normalize(&raw).expect("window samples normalize")
    }
}
