//! The finitely additive, translation-invariant measure on the ring of sets
//! generated by the distinguished sets, with values in Laurent polynomials
//! `Q[X_2^{±1}, ..., X_n^{±1}]`: `mu(alpha + p^{i_1} t^tail O_F) =
//! p^{-i_1} X^tail`, normalized by `mu(O_F) = 1`.
//!
//! Values are formal Laurent polynomials; no positivity is asserted or used.

use crate::error::{Error, Result};
use crate::hlf::{DistinguishedSet, FieldElement, FieldShape};
use crate::padic;
use crate::setalg::SymbolicSet;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial in `X_2,...,X_n` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MeasureValue {
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl MeasureValue {
    pub fn zero() -> Self {
        MeasureValue::default()
    }

    pub fn one(tdim: usize) -> Self {
        Self::monomial(vec![0; tdim], BigRational::one())
    }

    pub fn monomial(exps: Vec<i64>, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        MeasureValue { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &MeasureValue) -> MeasureValue {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MeasureValue { terms }
    }

    pub fn neg(&self) -> MeasureValue {
        MeasureValue {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MeasureValue) -> MeasureValue {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &BigRational) -> MeasureValue {
        if f.is_zero() {
            return MeasureValue::zero();
        }
        MeasureValue {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * f)).collect(),
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (k, exp) in e.iter().enumerate() {
                if *exp != 0 {
                    write!(f, "*X{}^{}", k + 2, exp)?;
                }
            }
        }
        Ok(())
    }
}

/// Wire format: a list of `[[e_2,...,e_n], numerator, denominator]`.
impl Serialize for MeasureValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let num = i64::try_from(c.numer())
                .map_err(|_| S::Error::custom("numerator out of i64 range"))?;
            let den = i64::try_from(c.denom())
                .map_err(|_| S::Error::custom("denominator out of i64 range"))?;
            seq.serialize_element(&(e.clone(), num, den))?;
        }
        seq.end()
    }
}

/// One region of a ddd-set: a distinguished outer set minus pairwise
/// disjoint distinguished holes strictly inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub outer: DistinguishedSet,
    pub holes: Vec<DistinguishedSet>,
}

/// Element of the ring generated by the distinguished sets, as a disjoint
/// list of regions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DDDSet {
    pub regions: Vec<Region>,
}

/// `mu` of a single distinguished set: `p^{-i_1} X^{tail}`, independent of
/// the translate.
pub fn mu_dist(d: &DistinguishedSet) -> MeasureValue {
    MeasureValue::monomial(
        d.ideal().tail.components().to_vec(),
        padic::p_pow(d.shape().p, -d.ideal().i1),
    )
}

impl DDDSet {
    pub fn empty() -> Self {
        DDDSet {
            regions: Vec::new(),
        }
    }

    pub fn from_dist(d: DistinguishedSet) -> Self {
        DDDSet {
            regions: vec![Region {
                outer: d,
                holes: Vec::new(),
            }],
        }
    }

    /// Validates the stated invariants: holes strictly inside their outer
    /// set and pairwise disjoint, regions pairwise disjoint.
    pub fn validate(&self) -> Result<()> {
        for r in &self.regions {
            for (k, h) in r.holes.iter().enumerate() {
                if !r.outer.contains_set(h)? || r.outer == *h {
                    return Err(Error::invalid(format!(
                        "hole {h} is not strictly inside {}",
                        r.outer
                    )));
                }
                for h2 in &r.holes[k + 1..] {
                    if h.intersect(h2)?.is_some() {
                        return Err(Error::invalid(format!("holes {h} and {h2} overlap")));
                    }
                }
            }
        }
        let syms: Vec<SymbolicSet> = self
            .regions
            .iter()
            .map(|r| {
                if r.holes.is_empty() {
                    SymbolicSet::Dist(r.outer.clone())
                } else {
                    SymbolicSet::difference(SymbolicSet::Dist(r.outer.clone()), r.holes.clone())
                }
            })
            .collect();
        for (k, a) in syms.iter().enumerate() {
            for b in &syms[k + 1..] {
                if !crate::setalg::intersect(a, b)?.is_empty_set() {
                    return Err(Error::invalid(format!("regions {a} and {b} overlap")));
                }
            }
        }
        Ok(())
    }

    pub fn translate_by(&self, g: &FieldElement) -> Result<DDDSet> {
        let regions = self
            .regions
            .iter()
            .map(|r| {
                Ok(Region {
                    outer: r.outer.translate_by(g)?,
                    holes: r
                        .holes
                        .iter()
                        .map(|h| h.translate_by(g))
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DDDSet { regions })
    }

    pub fn to_symbolic(&self) -> SymbolicSet {
        let members = self
            .regions
            .iter()
            .map(|r| {
                if r.holes.is_empty() {
                    SymbolicSet::Dist(r.outer.clone())
                } else {
                    SymbolicSet::difference(SymbolicSet::Dist(r.outer.clone()), r.holes.clone())
                }
            })
            .collect::<Vec<_>>();
        match members.len() {
            0 => SymbolicSet::Empty,
            1 => members.into_iter().next().unwrap(),
            _ => SymbolicSet::Union(members),
        }
    }
}

/// Structural translation of a normalized symbolic set into the ring of
/// ddd-sets. Rank-one cosets are not in the ring (they are infinite unions
/// of distinguished sets) and are rejected.
pub fn to_ddd(s: &SymbolicSet) -> Result<DDDSet> {
    match s {
        SymbolicSet::Empty => Ok(DDDSet::empty()),
        SymbolicSet::Dist(d) => Ok(DDDSet::from_dist(d.clone())),
        SymbolicSet::RankOne(r) => Err(Error::Unsupported(format!(
            "{r} is not finitely representable in the ring of ddd-sets"
        ))),
        SymbolicSet::Diff(d) => match d.base() {
            SymbolicSet::Dist(b) => Ok(DDDSet {
                regions: vec![Region {
                    outer: b.clone(),
                    holes: d.holes().to_vec(),
                }],
            }),
            other => Err(Error::Unsupported(format!(
                "difference base {other} is not a distinguished set"
            ))),
        },
        SymbolicSet::Union(ms) => {
            let mut regions = Vec::new();
            for m in ms {
                regions.extend(to_ddd(m)?.regions);
            }
            Ok(DDDSet { regions })
        }
    }
}

/// The measure: sum over regions of `mu(outer) - sum mu(holes)`. Exact.
pub fn mu(a: &DDDSet) -> Result<MeasureValue> {
    a.validate()?;
    let mut acc = MeasureValue::zero();
    for r in &a.regions {
        acc = acc.add(&mu_dist(&r.outer));
        for h in &r.holes {
            acc = acc.sub(&mu_dist(h));
        }
    }
    Ok(acc)
}

/// Measure of a normalized symbolic set, through its ddd form.
pub fn mu_symbolic(s: &SymbolicSet) -> Result<MeasureValue> {
    mu(&to_ddd(s)?)
}

fn ring_op(
    a: &DDDSet,
    b: &DDDSet,
    f: impl Fn(&SymbolicSet, &SymbolicSet) -> Result<SymbolicSet>,
) -> Result<DDDSet> {
    let sa = crate::setalg::normalize(&a.to_symbolic())?;
    let sb = crate::setalg::normalize(&b.to_symbolic())?;
    to_ddd(&f(&sa, &sb)?)
}

/// Union in the ring, returned as disjoint regions.
pub fn ring_union(a: &DDDSet, b: &DDDSet) -> Result<DDDSet> {
    ring_op(a, b, |x, y| {
        crate::setalg::normalize(&SymbolicSet::Union(vec![x.clone(), y.clone()]))
    })
}

pub fn ring_intersection(a: &DDDSet, b: &DDDSet) -> Result<DDDSet> {
    ring_op(a, b, crate::setalg::intersect)
}

pub fn ring_difference(a: &DDDSet, b: &DDDSet) -> Result<DDDSet> {
    ring_op(a, b, crate::setalg::diff)
}

/// Both sides of the Haar-lift identity for a ball `U = c + p^a Z_p` in the
/// residue field of a two-dimensional F: the set `t^j pi^{-1}(U)` is the
/// distinguished set `c t^j + p^a t^j O_F`, whose measure must equal
/// `X^j * mu_p(U) = X^j p^{-a}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HaarLiftReport {
    pub lifted: DistinguishedSet,
    pub lhs: MeasureValue,
    pub rhs: MeasureValue,
    pub pass: bool,
}

pub fn haar_lift_check(
    shape: FieldShape,
    c: &BigRational,
    a: i64,
    j: i64,
) -> Result<HaarLiftReport> {
    if shape.n != 2 {
        return Err(Error::Unsupported(
            "the Haar lift is a two-dimensional statement".into(),
        ));
    }
    let translate = FieldElement::monomial(shape, vec![j], c.clone())?;
    let lifted = DistinguishedSet::new(shape, translate, crate::hlf::IdealIndex::new(a, vec![j]))?;
    let lhs = mu_dist(&lifted);
    let rhs = MeasureValue::monomial(vec![j], padic::p_pow(shape.p, -a));
    let pass = lhs == rhs;
    Ok(HaarLiftReport {
        lifted,
        lhs,
        rhs,
        pass,
    })
}
