//! Elements and distinguished sets of `F = Q_p((t_2))...((t_n))`.
//!
//! An element is a finite sum of terms `c * t_2^{a_2} ... t_n^{a_n}` with
//! exact rational coefficients, interpreted inside Q_p. A distinguished set
//! is a coset `alpha + p^{i_1} t_2^{i_2} ... t_n^{i_n} O_F` of a principal
//! fractional ideal of the rank-n ring of integers `O_F`; for n = 2 this is
//! `O_F = Z_p + t Q_p[[t]]`. Distinguished sets are kept in a canonical
//! form, so structural equality is set equality.

use crate::error::{Error, Result};
use crate::multi_index::{rightlex_slices, MultiIndex};
use crate::padic;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// The base prime and the number of iterated residue steps. `n = 2` is the
/// two-dimensional field `Q_p((t))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldShape {
    pub p: u64,
    pub n: u8,
}

impl FieldShape {
    pub fn new(p: u64, n: u8) -> Result<Self> {
        if !padic::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n < 2 {
            return Err(Error::invalid(format!(
                "field dimension must be >= 2, got {n}"
            )));
        }
        Ok(FieldShape { p, n })
    }

    /// Number of t-variables, i.e. the length of exponent vectors.
    pub fn tdim(&self) -> usize {
        (self.n - 1) as usize
    }

    pub fn check_same(&self, other: &FieldShape) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch(self.p, self.n, other.p, other.n));
        }
        Ok(())
    }
}

/// Finite-term element of F: a map from t-exponent vectors to nonzero
/// rational coefficients. The empty map is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    shape: FieldShape,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl FieldElement {
    pub fn zero(shape: FieldShape) -> Self {
        FieldElement {
            shape,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        shape: FieldShape,
        terms: impl IntoIterator<Item = (Vec<i64>, BigRational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != shape.tdim() {
                return Err(Error::invalid(format!(
                    "exponent vector {exp:?} has arity {} but the field has {} t-variables",
                    exp.len(),
                    shape.tdim()
                )));
            }
            if coeff.is_zero() {
                continue;
            }
            let entry = map.entry(exp).or_insert_with(BigRational::zero);
            *entry += coeff;
        }
        map.retain(|_, c: &mut BigRational| !c.is_zero());
        Ok(FieldElement { shape, terms: map })
    }

    /// Convenience constructor for a single term.
    pub fn monomial(shape: FieldShape, exp: Vec<i64>, coeff: BigRational) -> Result<Self> {
        Self::from_terms(shape, [(exp, coeff)])
    }

    /// The rational `c` viewed as c * t^0.
    pub fn constant(shape: FieldShape, c: BigRational) -> Self {
        let exp = vec![0; shape.tdim()];
        Self::from_terms(shape, [(exp, c)]).expect("arity is correct by construction")
    }

    pub fn shape(&self) -> FieldShape {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i64]) -> BigRational {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.shape.check_same(&other.shape)?;
        let mut terms = self.terms.clone();
        for (exp, c) in &other.terms {
            let entry = terms.entry(exp.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(FieldElement {
            shape: self.shape,
            terms,
        })
    }

    pub fn neg(&self) -> FieldElement {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        FieldElement {
            shape: self.shape,
            terms,
        }
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.add(&other.neg())
    }

    /// Divide by the monomial `p^{i1} t^{tail}` (exact).
    fn div_monomial(&self, ideal: &IdealIndex) -> FieldElement {
        let scale = padic::p_pow(self.shape.p, -ideal.i1);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let shifted: Vec<i64> = e
                    .iter()
                    .zip(ideal.tail.components())
                    .map(|(a, b)| a - b)
                    .collect();
                (shifted, c * &scale)
            })
            .collect();
        FieldElement {
            shape: self.shape,
            terms,
        }
    }

    fn mul_monomial(&self, ideal: &IdealIndex) -> FieldElement {
        let scale = padic::p_pow(self.shape.p, ideal.i1);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let shifted: Vec<i64> = e
                    .iter()
                    .zip(ideal.tail.components())
                    .map(|(a, b)| a + b)
                    .collect();
                (shifted, c * &scale)
            })
            .collect();
        FieldElement {
            shape: self.shape,
            terms,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if exp.iter().all(|&e| e == 0) {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*")?;
                let mut started = false;
                for (k, e) in exp.iter().enumerate() {
                    if *e == 0 {
                        continue;
                    }
                    if started {
                        write!(f, "*")?;
                    }
                    started = true;
                    if self.shape.n == 2 {
                        write!(f, "t^{e}")?;
                    } else {
                        write!(f, "t{}^{}", k + 2, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Wire format: a list of `[numerator, denominator, [a_2,...,a_n]]` triples.
impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let mut triples = Vec::with_capacity(self.terms.len());
        for (exp, c) in &self.terms {
            let num = i64::try_from(c.numer())
                .map_err(|_| S::Error::custom("numerator out of i64 range"))?;
            let den = i64::try_from(c.denom())
                .map_err(|_| S::Error::custom("denominator out of i64 range"))?;
            triples.push((num, den, exp.clone()));
        }
        triples.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let triples: Vec<(i64, i64, Vec<i64>)> = Vec::deserialize(d)?;
        if triples.is_empty() {
            return Err(D::Error::custom(
                "cannot infer field shape from an empty term list; use the enclosing object",
            ));
        }
        let arity = triples[0].2.len();
        // the wire format does not carry the shape; the caller re-validates,
        // we only need a consistent arity here. The prime is irrelevant for
        // term bookkeeping, so a placeholder shape is used and fixed up by
        // `with_shape`.
        let shape = FieldShape {
            p: 2,
            n: (arity + 1) as u8,
        };
        let mut terms = BTreeMap::new();
        for (num, den, exp) in triples {
            if den == 0 {
                return Err(D::Error::custom("zero denominator"));
            }
            if exp.len() != arity {
                return Err(D::Error::custom("inconsistent exponent arity"));
            }
            let c = BigRational::new(num.into(), den.into());
            if !c.is_zero() {
                terms.insert(exp, c);
            }
        }
        Ok(FieldElement { shape, terms })
    }
}

impl FieldElement {
    pub fn to_json_terms(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("term serialization is infallible at desk scale")
    }

    /// Parse the term-list wire format against a known shape; the empty
    /// list is the zero element.
    pub fn from_json_terms(shape: FieldShape, v: &serde_json::Value) -> Result<Self> {
        if v.as_array().is_some_and(|a| a.is_empty()) {
            return Ok(FieldElement::zero(shape));
        }
        let elem: FieldElement = serde_json::from_value(v.clone())
            .map_err(|e| Error::invalid(format!("bad element JSON: {e}")))?;
        elem.with_shape(shape)
    }

    /// Rebind a deserialized element to its owning shape.
    pub fn with_shape(mut self, shape: FieldShape) -> Result<Self> {
        for exp in self.terms.keys() {
            if exp.len() != shape.tdim() {
                return Err(Error::invalid(format!(
                    "exponent arity {} does not match field with {} t-variables",
                    exp.len(),
                    shape.tdim()
                )));
            }
        }
        self.shape = shape;
        Ok(self)
    }
}

/// Index of the fractional ideal `p^{i1} t_2^{i_2} ... t_n^{i_n} O_F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IdealIndex {
    pub i1: i64,
    pub tail: MultiIndex,
}

impl IdealIndex {
    pub fn new(i1: i64, tail: impl Into<MultiIndex>) -> Self {
        IdealIndex {
            i1,
            tail: tail.into(),
        }
    }

    pub fn unit(shape: FieldShape) -> Self {
        IdealIndex {
            i1: 0,
            tail: MultiIndex::new(vec![0; shape.tdim()]),
        }
    }
}

/// Decides `J*O_F ⊆ I*O_F`.
///
/// With `d = J - I` componentwise, containment holds exactly when the
/// rightmost nonzero entry of the t-part of `d` is positive, or the t-part
/// vanishes and `d_1 >= 0`. Consequently ideal containment is a total order.
pub fn ideal_contains(shape: FieldShape, outer: &IdealIndex, inner: &IdealIndex) -> Result<bool> {
    let _ = shape;
    if outer.tail.elevation() != inner.tail.elevation() {
        return Err(Error::ElevationMismatch(
            outer.tail.elevation(),
            inner.tail.elevation(),
        ));
    }
    match rightlex_slices(inner.tail.components(), outer.tail.components()) {
        Ordering::Greater => Ok(true),
        Ordering::Less => Ok(false),
        Ordering::Equal => Ok(inner.i1 >= outer.i1),
    }
}

/// A coset `alpha + p^{i1} t^{tail} O_F` in canonical form: the translate is
/// reduced modulo the ideal, so two values are equal as sets exactly when
/// they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistinguishedSet {
    shape: FieldShape,
    translate: FieldElement,
    ideal: IdealIndex,
}

/// Reduce `terms` modulo `O` in `dims` t-variables: strip everything the
/// ideal absorbs, reduce the boundary coefficient, keep the untouchable part
/// verbatim. Mirrors the recursive membership rule.
fn reduce_mod_integers(
    p: u64,
    terms: &BTreeMap<Vec<i64>, BigRational>,
    dims: usize,
) -> BTreeMap<Vec<i64>, BigRational> {
    if dims == 0 {
        // base case should be handled by the caller (plain residue)
        unreachable!("reduce_mod_integers called with zero dims");
    }
    let mut out = BTreeMap::new();
    if dims == 1 {
        for (exp, c) in terms {
            let k = exp[0];
            if k > 0 {
                continue; // absorbed by t Q_p[[t]]
            }
            if k == 0 {
                let r = padic::residue_mod_p_power(p, c, 0);
                if !r.is_zero() {
                    out.insert(exp.clone(), r);
                }
            } else {
                out.insert(exp.clone(), c.clone());
            }
        }
        return out;
    }
    // group by the last (most significant) exponent
    let mut boundary: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (exp, c) in terms {
        let k = exp[dims - 1];
        if k > 0 {
            continue;
        }
        if k < 0 {
            out.insert(exp.clone(), c.clone());
        } else {
            boundary.insert(exp[..dims - 1].to_vec(), c.clone());
        }
    }
    for (sub, c) in reduce_mod_integers(p, &boundary, dims - 1) {
        let mut exp = sub;
        exp.push(0);
        out.insert(exp, c);
    }
    out
}

/// Membership of `x` in `O_F` for the recursive rank-n rule: any negative
/// power of the outermost variable is fatal, the constant slice must be
/// integral one rank down, positive powers are free.
fn in_integers(p: u64, terms: &BTreeMap<Vec<i64>, BigRational>, dims: usize) -> bool {
    if dims == 1 {
        return terms.iter().all(|(exp, c)| match exp[0].cmp(&0) {
            Ordering::Less => false,
            Ordering::Equal => padic::in_p_power(p, c, 0),
            Ordering::Greater => true,
        });
    }
    let mut boundary: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (exp, c) in terms {
        match exp[dims - 1].cmp(&0) {
            Ordering::Less => return false,
            Ordering::Equal => {
                boundary.insert(exp[..dims - 1].to_vec(), c.clone());
            }
            Ordering::Greater => {}
        }
    }
    boundary.is_empty() || in_integers(p, &boundary, dims - 1)
}

impl DistinguishedSet {
    /// Canonicalizing constructor: reduces the translate modulo the ideal.
    pub fn new(shape: FieldShape, translate: FieldElement, ideal: IdealIndex) -> Result<Self> {
        shape.check_same(&translate.shape())?;
        if ideal.tail.elevation() != shape.tdim() {
            return Err(Error::ElevationMismatch(
                ideal.tail.elevation(),
                shape.tdim(),
            ));
        }
        let scaled = translate.div_monomial(&ideal);
        let reduced = reduce_mod_integers(shape.p, &scaled.terms, shape.tdim());
        let canonical = FieldElement {
            shape,
            terms: reduced,
        }
        .mul_monomial(&ideal);
        Ok(DistinguishedSet {
            shape,
            translate: canonical,
            ideal,
        })
    }

    /// The whole ring of integers `O_F`.
    pub fn integers(shape: FieldShape) -> Self {
        DistinguishedSet {
            shape,
            translate: FieldElement::zero(shape),
            ideal: IdealIndex::unit(shape),
        }
    }

    /// The ideal `p^{i1} t^{tail} O_F` itself (zero translate).
    pub fn ideal_set(shape: FieldShape, ideal: IdealIndex) -> Result<Self> {
        Self::new(shape, FieldElement::zero(shape), ideal)
    }

    pub fn shape(&self) -> FieldShape {
        self.shape
    }

    pub fn translate(&self) -> &FieldElement {
        &self.translate
    }

    pub fn ideal(&self) -> &IdealIndex {
        &self.ideal
    }

    /// Re-canonicalization; a no-op on values built through `new`.
    pub fn canonicalize(&self) -> DistinguishedSet {
        DistinguishedSet::new(self.shape, self.translate.clone(), self.ideal.clone())
            .expect("canonical data stays canonical")
    }

    /// Membership test `x ∈ alpha + p^{i1} t^{tail} O_F`.
    pub fn member(&self, x: &FieldElement) -> Result<bool> {
        self.shape.check_same(&x.shape())?;
        let diff = x.sub(&self.translate)?;
        let scaled = diff.div_monomial(&self.ideal);
        Ok(in_integers(self.shape.p, &scaled.terms, self.shape.tdim()))
    }

    /// Does `self` contain `other` as a set?
    pub fn contains_set(&self, other: &DistinguishedSet) -> Result<bool> {
        self.shape.check_same(&other.shape)?;
        Ok(ideal_contains(self.shape, &self.ideal, &other.ideal)?
            && self.member(&other.translate)?)
    }

    /// Intersection of two distinguished sets: empty or the finer one.
    pub fn intersect(&self, other: &DistinguishedSet) -> Result<Option<DistinguishedSet>> {
        self.shape.check_same(&other.shape)?;
        let (coarse, fine) = if ideal_contains(self.shape, &self.ideal, &other.ideal)? {
            (self, other)
        } else {
            (other, self)
        };
        if coarse.member(&fine.translate)? {
            Ok(Some(fine.canonicalize()))
        } else {
            Ok(None)
        }
    }

    /// The level: the t-part of the ideal. Justified by rigidity of the
    /// field structure (the maximal index whose set still contains this one
    /// is the index itself).
    pub fn level(&self) -> MultiIndex {
        self.ideal.tail.clone()
    }

    /// The p^m cosets of `p^{i1+m} t^{tail} O_F` that partition this set.
    pub fn coset_reps(&self, m: u32) -> Result<Vec<DistinguishedSet>> {
        if m < 1 {
            return Err(Error::invalid("coset depth must be >= 1"));
        }
        let count = (self.shape.p as u128)
            .checked_pow(m)
            .filter(|c| *c <= 1 << 22)
            .ok_or_else(|| Error::invalid(format!("coset depth {m} beyond desk scale")))?;
        let monomial = FieldElement::monomial(
            self.shape,
            self.ideal.tail.components().to_vec(),
            padic::p_pow(self.shape.p, self.ideal.i1),
        )?;
        let child = IdealIndex::new(self.ideal.i1 + m as i64, self.ideal.tail.clone());
        let mut out = Vec::with_capacity(count as usize);
        let mut offset = FieldElement::zero(self.shape);
        for c in 0..count {
            if c > 0 {
                offset = offset.add(&monomial)?;
            }
            let translate = self.translate.add(&offset)?;
            out.push(DistinguishedSet::new(self.shape, translate, child.clone())?);
        }
        Ok(out)
    }

    /// Translate the whole coset by `g`.
    pub fn translate_by(&self, g: &FieldElement) -> Result<DistinguishedSet> {
        DistinguishedSet::new(self.shape, self.translate.add(g)?, self.ideal.clone())
    }
}

impl fmt::Display for DistinguishedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + p^{}", self.translate, self.ideal.i1)?;
        for (k, e) in self.ideal.tail.components().iter().enumerate() {
            if self.shape.n == 2 {
                write!(f, " t^{e}")?;
            } else {
                write!(f, " t{}^{}", k + 2, e)?;
            }
        }
        write!(f, " O")
    }
}

/// Wire format: `{"alpha": <element>, "i1": int, "tail": [int,...]}`.
#[derive(Serialize, Deserialize)]
struct DistWire {
    alpha: FieldElement,
    i1: i64,
    tail: Vec<i64>,
}

impl Serialize for DistinguishedSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DistWire {
            alpha: self.translate.clone(),
            i1: self.ideal.i1,
            tail: self.ideal.tail.components().to_vec(),
        }
        .serialize(s)
    }
}

impl DistinguishedSet {
    /// Deserialize against a known shape (the wire format does not carry p).
    pub fn from_json(shape: FieldShape, v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::invalid("distinguished-set JSON must be an object"))?;
        let i1 = obj
            .get("i1")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::invalid("distinguished-set JSON needs integer \"i1\""))?;
        let tail: Vec<i64> = obj
            .get("tail")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::invalid("distinguished-set JSON needs \"tail\" array"))?
            .iter()
            .map(|x| {
                x.as_i64()
                    .ok_or_else(|| Error::invalid("non-integer tail component"))
            })
            .collect::<Result<_>>()?;
        let alpha = match obj.get("alpha") {
            None => FieldElement::zero(shape),
            Some(a) => FieldElement::from_json_terms(shape, a)?,
        };
        DistinguishedSet::new(shape, alpha, IdealIndex::new(i1, tail))
    }
}

/// p-adic valuation of a rational, re-exported here because every membership
/// test in this module reduces to it. `None` is +infinity.
pub fn vp(p: u64, q: &BigRational) -> Option<i64> {
    padic::vp(p, q)
}

/// The induced structure on the base field Q_p of a two-dimensional F: the
/// constructor sends `(p^i Z_p, j)` to `Q_p` for j < 0, to `p^i Z_p` for
/// j = 0 and to `{0}` for j > 0.
pub fn induced_base_structure(shape: FieldShape) -> Result<crate::structure::StructureDescriptor> {
    if shape.n != 2 {
        return Err(Error::Unsupported(format!(
            "induced base structure is defined for n = 2, got n = {}",
            shape.n
        )));
    }
    Ok(crate::structure::StructureDescriptor::InducedBaseField { p: shape.p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn shape2() -> FieldShape {
        FieldShape::new(2, 2).unwrap()
    }

    fn elem(shape: FieldShape, terms: &[(i64, (i64, i64))]) -> FieldElement {
        FieldElement::from_terms(shape, terms.iter().map(|(e, (n, d))| (vec![*e], q(*n, *d))))
            .unwrap()
    }

    fn dset(shape: FieldShape, terms: &[(i64, (i64, i64))], i1: i64, j: i64) -> DistinguishedSet {
        DistinguishedSet::new(shape, elem(shape, terms), IdealIndex::new(i1, vec![j])).unwrap()
    }

    #[test]
    fn membership_in_o_f() {
        let s = shape2();
        let o = DistinguishedSet::integers(s);
        // 2 + t is in O_F: 2 is a 2-adic integer and the degree-1 slot is free
        assert!(o.member(&elem(s, &[(0, (2, 1)), (1, (1, 1))])).unwrap());
        // 1/2 has negative valuation at degree 0
        assert!(!o.member(&elem(s, &[(0, (1, 2))])).unwrap());
        // (1/2) t is fine: O_F = Z_p + t Q_p[[t]]
        assert!(o.member(&elem(s, &[(1, (1, 2))])).unwrap());
        // negative t-degree is fatal
        assert!(!o.member(&elem(s, &[(-1, (1, 1))])).unwrap());
    }

    #[test]
    fn vp_convention() {
        assert_eq!(vp(2, &q(12, 1)), Some(2));
        assert_eq!(vp(2, &q(3, 8)), Some(-3));
        assert_eq!(vp(7, &BigRational::zero()), None);
    }

    #[test]
    fn ideal_containment_rule() {
        let s = shape2();
        let o = IdealIndex::new(0, vec![0]);
        let t = IdealIndex::new(0, vec![1]);
        let two = IdealIndex::new(1, vec![0]);
        let deep_neg = IdealIndex::new(-3, vec![1]);
        // t O_F ⊆ O_F
        assert!(ideal_contains(s, &o, &t).unwrap());
        // 2^{-3} t O_F ⊆ O_F: t-coefficients above degree 0 are unconstrained
        assert!(ideal_contains(s, &o, &deep_neg).unwrap());
        // 2 O_F ⊄ t O_F
        assert!(!ideal_contains(s, &t, &two).unwrap());
        // total order
        assert!(ideal_contains(s, &two, &t).unwrap());
    }

    #[test]
    fn ideal_containment_is_total() {
        let s = shape2();
        for i in -2..=2 {
            for j in -2..=2 {
                for k in -2..=2 {
                    for l in -2..=2 {
                        let a = IdealIndex::new(i, vec![j]);
                        let b = IdealIndex::new(k, vec![l]);
                        assert!(
                            ideal_contains(s, &a, &b).unwrap()
                                || ideal_contains(s, &b, &a).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn canonicalization_examples() {
        let s = shape2();
        // 2 + 2O_F = 2O_F
        let d = dset(s, &[(0, (2, 1))], 1, 0);
        assert!(d.translate().is_zero());
        // zero translate is untouched
        let d = dset(s, &[], 3, -1);
        assert!(d.translate().is_zero());
        // 1/2 + t + O_F: the t-term is absorbed, 1/2 survives
        let d = dset(s, &[(0, (1, 2)), (1, (1, 1))], 0, 0);
        assert_eq!(d.translate(), &elem(s, &[(0, (1, 2))]));
    }

    #[test]
    fn canonical_equality_is_set_equality() {
        let s = shape2();
        // 5 + O_F and O_F are the same coset
        let a = dset(s, &[(0, (5, 1))], 0, 0);
        let b = DistinguishedSet::integers(s);
        assert_eq!(a, b);
        // 3 + 2O_F = 1 + 2O_F
        let a = dset(s, &[(0, (3, 1))], 1, 0);
        let b = dset(s, &[(0, (1, 1))], 1, 0);
        assert_eq!(a, b);
        // but 1 + 2O_F differs from 2O_F
        let c = dset(s, &[], 1, 0);
        assert_ne!(a, c);
    }

    #[test]
    fn intersection_trichotomy_examples() {
        let s = shape2();
        let o = DistinguishedSet::integers(s);
        // (0 + O) ∩ (1/2 + O) = ∅
        let half = dset(s, &[(0, (1, 2))], 0, 0);
        assert_eq!(o.intersect(&half).unwrap(), None);
        // (0 + O) ∩ (2 + 2O) = 2O
        let two = dset(s, &[(0, (2, 1))], 1, 0);
        let meet = o.intersect(&two).unwrap().unwrap();
        assert_eq!(meet, dset(s, &[], 1, 0));
        // idempotence
        assert_eq!(o.intersect(&o).unwrap().unwrap(), o);
    }

    #[test]
    fn level_is_the_tail() {
        let s = shape2();
        let d = dset(s, &[], 5, 3);
        assert_eq!(d.level(), MultiIndex::new(vec![3]));
        assert_eq!(
            DistinguishedSet::integers(s).level(),
            MultiIndex::new(vec![0])
        );
        let s3 = FieldShape::new(2, 3).unwrap();
        let d3 = DistinguishedSet::ideal_set(s3, IdealIndex::new(4, vec![2, -1])).unwrap();
        assert_eq!(d3.level(), MultiIndex::new(vec![2, -1]));
    }

    #[test]
    fn coset_reps_partition() {
        let s = shape2();
        let o = DistinguishedSet::integers(s);
        let reps = o.coset_reps(1).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], dset(s, &[], 1, 0));
        assert_eq!(reps[1], dset(s, &[(0, (1, 1))], 1, 0));
        assert_eq!(reps[0].intersect(&reps[1]).unwrap(), None);

        let s3p = FieldShape::new(3, 2).unwrap();
        let reps = DistinguishedSet::integers(s3p).coset_reps(1).unwrap();
        assert_eq!(reps.len(), 3);
        for a in 0..3 {
            for b in (a + 1)..3 {
                assert_eq!(reps[a].intersect(&reps[b]).unwrap(), None);
            }
        }
    }

    #[test]
    fn three_dimensional_canonical_form() {
        let s = FieldShape::new(2, 3).unwrap();
        // translate (1/2) t3^{-1} + t2^7, ideal p^2 t2^1: the t2^7 term sits
        // in the free region and is absorbed, the t3^{-1} term is untouchable
        let translate =
            FieldElement::from_terms(s, [(vec![0, -1], q(1, 2)), (vec![7, 0], q(1, 1))]).unwrap();
        let d = DistinguishedSet::new(s, translate, IdealIndex::new(2, vec![1, 0])).unwrap();
        let expect = FieldElement::from_terms(s, [(vec![0, -1], q(1, 2))]).unwrap();
        assert_eq!(d.translate(), &expect);
    }

    #[test]
    fn display_round_trips_visually() {
        let s = shape2();
        let d = dset(s, &[(0, (1, 2)), (-1, (3, 1))], 3, 1);
        assert_eq!(format!("{d}"), "[3*t^-1 + 1/2] + p^3 t^1 O");
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn check<T: Send + Sync>() {}
        check::<FieldShape>();
        check::<FieldElement>();
        check::<DistinguishedSet>();
        check::<crate::setalg::SymbolicSet>();
        check::<crate::measure::MeasureValue>();
        check::<crate::structure::StructureDescriptor>();
        check::<crate::oracle::QuotientModel>();
        check::<crate::zlevels::ZWindowSet>();
    }
}
