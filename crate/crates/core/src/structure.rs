//! Indexed families of identity neighbourhoods and their finite-window
//! checkers.
//!
//! A [`StructureDescriptor`] names a family of subsets `G_{U,gamma}` of a
//! group, indexed by a neighbourhood identifier `U` and a multi-index
//! `gamma`. The checkers evaluate the defining conditions — identity
//! membership, well-defined indexing, the nesting/intersection law and the
//! union/intersection compatibility in `U` — on an explicit finite window,
//! and report counterexamples instead of claiming anything beyond the
//! window. Two modes are provided for the third condition: `Strict`
//! tests the verbatim identity `G_{V,gamma} ∩ G_{U,delta} = G_{V,delta}`,
//! while `Compatible` tests the nesting consequence
//! `G_{U,delta} ⊆ G_{V,gamma}` for `gamma < delta`. The flagship field
//! structure satisfies the second and falsifies the first; `Compatible` is
//! the default elsewhere in this crate.

use crate::error::{Error, Result};
use crate::hlf::{DistinguishedSet, FieldShape, IdealIndex};
use crate::multi_index::{index_box, rightlex_cmp, rightlex_slices, MultiIndex};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Neighbourhood identifier in the base of a structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NbhdId {
    /// Fractional-ideal index of the base field: `p^{i1} t^subtail O`.
    /// For a one-dimensional base this is the ball `p^{i1} Z_p`.
    Ideal {
        i1: i64,
        subtail: Vec<i64>,
    },
    /// The single neighbourhood of the one-element base.
    Point,
    Pair(Box<NbhdId>, Box<NbhdId>),
}

impl NbhdId {
    pub fn ball(a: i64) -> Self {
        NbhdId::Ideal {
            i1: a,
            subtail: Vec::new(),
        }
    }
}

impl fmt::Display for NbhdId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NbhdId::Ideal { i1, subtail } if subtail.is_empty() => write!(f, "p^{i1}Zp"),
            NbhdId::Ideal { i1, subtail } => write!(f, "p^{i1}t^{subtail:?}O"),
            NbhdId::Point => write!(f, "x"),
            NbhdId::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// Concrete set handle owned by a structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetHandle {
    /// A coset in a field `Q_p((t_2))...((t_n))`.
    FieldSet(DistinguishedSet),
    /// `p^a Z_p` inside Q_p.
    PBall(i64),
    /// All of Q_p.
    PAll,
    /// `{0}` inside Q_p.
    PZero,
    /// `{0, d, 2d, ..., (len-1) d}` inside Z.
    ZRun {
        stride: u64,
        len: u64,
    },
    /// The whole group, when no closed-form handle exists for it.
    Whole,
    /// The identity singleton, when no closed-form handle exists for it.
    Identity,
    Pair(Box<SetHandle>, Box<SetHandle>),
}

impl fmt::Display for SetHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetHandle::FieldSet(d) => write!(f, "{d}"),
            SetHandle::PBall(a) => write!(f, "p^{a}Zp"),
            SetHandle::PAll => write!(f, "Qp"),
            SetHandle::PZero => write!(f, "{{0}}"),
            SetHandle::ZRun { stride, len } => {
                if *len <= 6 {
                    let elems: Vec<String> = (0..*len).map(|k| (k * stride).to_string()).collect();
                    write!(f, "{{{}}}", elems.join(","))
                } else {
                    write!(f, "run(stride {stride}, len {len})")
                }
            }
            SetHandle::Whole => write!(f, "G"),
            SetHandle::Identity => write!(f, "{{e}}"),
            SetHandle::Pair(a, b) => write!(f, "({a} x {b})"),
        }
    }
}

impl SetHandle {
    /// Set containment `other ⊆ self`.
    pub fn contains(&self, other: &SetHandle) -> Result<bool> {
        use SetHandle::*;
        Ok(match (self, other) {
            (Whole, _) => true,
            (_, Whole) => false,
            (Pair(a1, a2), Pair(b1, b2)) => a1.contains(b1)? && a2.contains(b2)?,
            (Pair(_, _), _) | (_, Pair(_, _)) => false,
            (PAll, PAll | PBall(_) | PZero | Identity) => true,
            (PBall(a), PBall(b)) => b >= a,
            (PBall(_), PZero | Identity) => true,
            (PZero, PZero | Identity) => true,
            (Identity, Identity | PZero) => true,
            (Identity, ZRun { len, .. }) => *len == 1,
            (ZRun { .. }, Identity) => true,
            (Identity, FieldSet(_)) => false,
            (FieldSet(d), Identity | PZero) => d.translate().is_zero(),
            (FieldSet(a), FieldSet(b)) => a.contains_set(b)?,
            (
                ZRun {
                    stride: d1,
                    len: l1,
                },
                ZRun {
                    stride: d2,
                    len: l2,
                },
            ) => {
                *l2 == 1
                    || (d2 % d1 == 0
                        && (*l2 as i128 - 1) * *d2 as i128 <= (*l1 as i128 - 1) * *d1 as i128)
            }
            _ => false,
        })
    }

    pub fn same_set(&self, other: &SetHandle) -> Result<bool> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    pub fn intersect(&self, other: &SetHandle) -> Result<Option<SetHandle>> {
        use SetHandle::*;
        if self.contains(other)? {
            return Ok(Some(other.clone()));
        }
        if other.contains(self)? {
            return Ok(Some(self.clone()));
        }
        Ok(match (self, other) {
            (FieldSet(a), FieldSet(b)) => a.intersect(b)?.map(FieldSet),
            (
                ZRun {
                    stride: d1,
                    len: l1,
                },
                ZRun {
                    stride: d2,
                    len: l2,
                },
            ) => {
                let g = (*d1).lcm(d2);
                let hi = ((*l1 - 1) * d1).min((*l2 - 1) * d2);
                Some(ZRun {
                    stride: g,
                    len: hi / g + 1,
                })
            }
            (Pair(a1, a2), Pair(b1, b2)) => match (a1.intersect(b1)?, a2.intersect(b2)?) {
                (Some(x), Some(y)) => Some(Pair(Box::new(x), Box::new(y))),
                _ => None,
            },
            _ => None,
        })
    }

    /// Does `a ∪ b = c` hold as sets?
    pub fn union_equals(a: &SetHandle, b: &SetHandle, c: &SetHandle) -> Result<bool> {
        use SetHandle::*;
        if a.contains(b)? {
            return a.same_set(c);
        }
        if b.contains(a)? {
            return b.same_set(c);
        }
        // incomparable from here on
        if !(c.contains(a)? && c.contains(b)?) {
            return Ok(false);
        }
        match (a, b, c) {
            (FieldSet(x), FieldSet(y), FieldSet(z)) => {
                // two disjoint cosets tile a coset only when they are the two
                // p-children of it
                let p = z.shape().p;
                if p != 2 {
                    return Ok(false);
                }
                let child = IdealIndex::new(z.ideal().i1 + 1, z.ideal().tail.clone());
                Ok(x.ideal() == &child && y.ideal() == &child && x != y)
            }
            (ZRun { .. }, ZRun { .. }, ZRun { stride, len }) => {
                // finite sets: compare element by element
                let elems = |h: &SetHandle| -> Vec<u64> {
                    match h {
                        ZRun { stride, len } => (0..*len).map(|k| k * stride).collect(),
                        Identity | PZero => vec![0],
                        _ => Vec::new(),
                    }
                };
                let mut u: Vec<u64> = elems(a).into_iter().chain(elems(b)).collect();
                u.sort();
                u.dedup();
                let want: Vec<u64> = (0..*len).map(|k| k * stride).collect();
                Ok(u == want)
            }
            (Pair(a1, a2), Pair(b1, b2), Pair(c1, c2)) => {
                if a1.same_set(c1)? && b1.same_set(c1)? {
                    return SetHandle::union_equals(a2, b2, c2);
                }
                if a2.same_set(c2)? && b2.same_set(c2)? {
                    return SetHandle::union_equals(a1, b1, c1);
                }
                Ok(false)
            }
            _ => Ok(false),
        }
    }

    pub fn contains_identity(&self) -> bool {
        match self {
            SetHandle::FieldSet(d) => d.translate().is_zero(),
            SetHandle::Pair(a, b) => a.contains_identity() && b.contains_identity(),
            _ => true,
        }
    }
}

/// Level of a handle relative to its owning structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelInfo {
    Exact(MultiIndex),
    /// The handle is degenerate (equal to sets at other indices); the value
    /// is the fallback convention, the least index realizing the set.
    Degenerate(MultiIndex),
    /// No maximal index exists.
    NoLevel,
}

impl LevelInfo {
    fn push(self, j: i64) -> LevelInfo {
        match self {
            LevelInfo::Exact(mut g) => {
                g.0.push(j);
                LevelInfo::Exact(g)
            }
            LevelInfo::Degenerate(mut g) => {
                g.0.push(j);
                LevelInfo::Degenerate(g)
            }
            LevelInfo::NoLevel => LevelInfo::NoLevel,
        }
    }
}

/// Descriptor of a structure: how to build the set at each index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureDescriptor {
    /// The field `Q_p((t_2))...((t_n))` over its `base_dim`-dimensional
    /// residue field, with elevation `n - base_dim`; neighbourhoods are the
    /// fractional-ideal indices of the base. `n = base_dim = 1` is the
    /// locally compact Q_p over itself (elevation 0).
    Field {
        p: u64,
        n: u8,
        #[serde(default = "default_base_dim")]
        base_dim: u8,
    },
    /// `Z` over the one-element group: `{0}` at gamma >= 0 and
    /// `{0, d, ..., (n-1)d}` at gamma = -n.
    #[serde(rename = "zstride")]
    ZStride { d: u64 },
    /// The structure induced on Q_p inside the two-dimensional field.
    #[serde(rename = "induced")]
    InducedBaseField { p: u64 },
    Product {
        left: Box<StructureDescriptor>,
        right: Box<StructureDescriptor>,
    },
    Inflated {
        inner: Box<StructureDescriptor>,
        pivot: i64,
    },
    Stacked {
        upper: Box<StructureDescriptor>,
        lower: Box<StructureDescriptor>,
    },
}

fn default_base_dim() -> u8 {
    1
}

impl fmt::Display for StructureDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureDescriptor::Field { p, n, base_dim } => {
                write!(f, "field(p={p}, n={n}, base_dim={base_dim})")
            }
            StructureDescriptor::ZStride { d } => write!(f, "zstride(d={d})"),
            StructureDescriptor::InducedBaseField { p } => write!(f, "induced(p={p})"),
            StructureDescriptor::Product { left, right } => write!(f, "product({left}, {right})"),
            StructureDescriptor::Inflated { inner, pivot } => {
                write!(f, "inflated({inner}, pivot={pivot})")
            }
            StructureDescriptor::Stacked { upper, lower } => {
                write!(f, "stacked({upper}, {lower})")
            }
        }
    }
}

impl StructureDescriptor {
    pub fn field(p: u64, n: u8) -> Result<Self> {
        if n >= 2 {
            FieldShape::new(p, n)?;
        } else if !crate::padic::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(StructureDescriptor::Field { p, n, base_dim: 1 })
    }

    pub fn field_over(p: u64, n: u8, base_dim: u8) -> Result<Self> {
        if base_dim < 1 || base_dim > n {
            return Err(Error::invalid(format!(
                "base_dim {base_dim} out of range for n={n}"
            )));
        }
        if n >= 2 {
            FieldShape::new(p, n)?;
        } else if !crate::padic::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(StructureDescriptor::Field { p, n, base_dim })
    }

    pub fn z_stride(d: u64) -> Result<Self> {
        if d < 1 {
            return Err(Error::invalid("stride must be >= 1"));
        }
        Ok(StructureDescriptor::ZStride { d })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StructureDescriptor::Field { p, n, base_dim } => {
                StructureDescriptor::field_over(*p, *n, *base_dim).map(|_| ())
            }
            StructureDescriptor::ZStride { d } => StructureDescriptor::z_stride(*d).map(|_| ()),
            StructureDescriptor::InducedBaseField { p } => {
                if !crate::padic::is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                Ok(())
            }
            StructureDescriptor::Product { left, right } => {
                left.validate()?;
                right.validate()?;
                if left.elevation() != right.elevation() {
                    return Err(Error::ElevationMismatch(
                        left.elevation(),
                        right.elevation(),
                    ));
                }
                Ok(())
            }
            StructureDescriptor::Inflated { inner, .. } => inner.validate(),
            StructureDescriptor::Stacked { upper, lower } => {
                upper.validate()?;
                lower.validate()?;
                stack_compatibility(upper, lower)
            }
        }
    }

    pub fn elevation(&self) -> usize {
        match self {
            StructureDescriptor::Field { n, base_dim, .. } => (*n - *base_dim) as usize,
            StructureDescriptor::ZStride { .. } => 1,
            StructureDescriptor::InducedBaseField { .. } => 1,
            StructureDescriptor::Product { left, .. } => left.elevation(),
            StructureDescriptor::Inflated { inner, .. } => inner.elevation() + 1,
            StructureDescriptor::Stacked { upper, lower } => upper.elevation() + lower.elevation(),
        }
    }

    pub fn whole_handle(&self) -> SetHandle {
        match self {
            StructureDescriptor::Field { n: 1, .. } => SetHandle::PAll,
            StructureDescriptor::Field { .. } => SetHandle::Whole,
            StructureDescriptor::ZStride { .. } => SetHandle::Whole,
            StructureDescriptor::InducedBaseField { .. } => SetHandle::PAll,
            StructureDescriptor::Product { left, right } => SetHandle::Pair(
                Box::new(left.whole_handle()),
                Box::new(right.whole_handle()),
            ),
            StructureDescriptor::Inflated { inner, .. } => inner.whole_handle(),
            StructureDescriptor::Stacked { upper, .. } => upper.whole_handle(),
        }
    }

    pub fn identity_handle(&self) -> SetHandle {
        match self {
            StructureDescriptor::Field { n: 1, .. } => SetHandle::PZero,
            StructureDescriptor::Field { .. } => SetHandle::Identity,
            StructureDescriptor::ZStride { d } => SetHandle::ZRun { stride: *d, len: 1 },
            StructureDescriptor::InducedBaseField { .. } => SetHandle::PZero,
            StructureDescriptor::Product { left, right } => SetHandle::Pair(
                Box::new(left.identity_handle()),
                Box::new(right.identity_handle()),
            ),
            StructureDescriptor::Inflated { inner, .. } => inner.identity_handle(),
            StructureDescriptor::Stacked { upper, .. } => upper.identity_handle(),
        }
    }

    /// The set at index `(id, gamma)`. Deterministic and total on valid
    /// indices.
    pub fn construct(&self, id: &NbhdId, gamma: &MultiIndex) -> Result<SetHandle> {
        if gamma.elevation() != self.elevation() {
            return Err(Error::ElevationMismatch(
                gamma.elevation(),
                self.elevation(),
            ));
        }
        match self {
            StructureDescriptor::Field { p, n, base_dim } => {
                let (i1, subtail) = match id {
                    NbhdId::Ideal { i1, subtail } if subtail.len() == (*base_dim - 1) as usize => {
                        (*i1, subtail.clone())
                    }
                    other => {
                        return Err(Error::IdentifierMismatch(format!(
                            "field structure expects an ideal index of the {base_dim}-dimensional base, got {other}"
                        )))
                    }
                };
                if *n == 1 {
                    return Ok(SetHandle::PBall(i1));
                }
                let shape = FieldShape::new(*p, *n)?;
                let mut tail = subtail;
                tail.extend_from_slice(gamma.components());
                Ok(SetHandle::FieldSet(DistinguishedSet::ideal_set(
                    shape,
                    IdealIndex::new(i1, tail),
                )?))
            }
            StructureDescriptor::ZStride { d } => {
                if !matches!(id, NbhdId::Point) {
                    return Err(Error::IdentifierMismatch(
                        "stride structure has the single neighbourhood `x`".into(),
                    ));
                }
                let g = gamma.components()[0];
                if g >= 0 {
                    Ok(SetHandle::ZRun { stride: *d, len: 1 })
                } else {
                    Ok(SetHandle::ZRun {
                        stride: *d,
                        len: (-g) as u64,
                    })
                }
            }
            StructureDescriptor::InducedBaseField { .. } => {
                let i = match id {
                    NbhdId::Ideal { i1, subtail } if subtail.is_empty() => *i1,
                    other => {
                        return Err(Error::IdentifierMismatch(format!(
                            "induced structure expects a ball index, got {other}"
                        )))
                    }
                };
                let j = gamma.components()[0];
                Ok(match j.cmp(&0) {
                    Ordering::Greater => SetHandle::PZero,
                    Ordering::Equal => SetHandle::PBall(i),
                    Ordering::Less => SetHandle::PAll,
                })
            }
            StructureDescriptor::Product { left, right } => {
                let (l, r) = match id {
                    NbhdId::Pair(l, r) => (l, r),
                    other => {
                        return Err(Error::IdentifierMismatch(format!(
                            "product expects a pair identifier, got {other}"
                        )))
                    }
                };
                Ok(SetHandle::Pair(
                    Box::new(left.construct(l, gamma)?),
                    Box::new(right.construct(r, gamma)?),
                ))
            }
            StructureDescriptor::Inflated { inner, pivot } => {
                let comps = gamma.components();
                let (head, last) = comps.split_at(comps.len() - 1);
                let j = last[0];
                match j.cmp(pivot) {
                    Ordering::Less => Ok(inner.whole_handle()),
                    Ordering::Equal => inner.construct(id, &MultiIndex::new(head.to_vec())),
                    Ordering::Greater => Ok(inner.identity_handle()),
                }
            }
            StructureDescriptor::Stacked { upper, lower } => {
                let (g_low, g_up) = gamma.split_at(lower.elevation());
                let h_low = lower.construct(id, &g_low)?;
                let nid = handle_as_nbhd(upper, &h_low)?;
                upper.construct(&nid, &g_up)
            }
        }
    }

    /// Structure-relative level of a handle.
    pub fn level_of(&self, h: &SetHandle) -> LevelInfo {
        match self {
            StructureDescriptor::Field { n, base_dim, .. } => match h {
                SetHandle::FieldSet(d) => {
                    let ev = (*n - *base_dim) as usize;
                    let tail = d.ideal().tail.components();
                    LevelInfo::Exact(MultiIndex::new(tail[tail.len() - ev..].to_vec()))
                }
                SetHandle::PBall(_) if *n == 1 => LevelInfo::Exact(MultiIndex::empty()),
                _ => LevelInfo::NoLevel,
            },
            StructureDescriptor::ZStride { .. } => match h {
                SetHandle::ZRun { len, .. } if *len >= 2 => {
                    LevelInfo::Exact(MultiIndex::new(vec![-(*len as i64)]))
                }
                SetHandle::ZRun { .. } | SetHandle::Identity => {
                    LevelInfo::Degenerate(MultiIndex::new(vec![-1]))
                }
                _ => LevelInfo::NoLevel,
            },
            StructureDescriptor::InducedBaseField { .. } => match h {
                SetHandle::PBall(_) => LevelInfo::Exact(MultiIndex::new(vec![0])),
                SetHandle::PAll => LevelInfo::Exact(MultiIndex::new(vec![-1])),
                SetHandle::PZero => LevelInfo::Degenerate(MultiIndex::new(vec![1])),
                _ => LevelInfo::NoLevel,
            },
            StructureDescriptor::Product { left, right } => match h {
                SetHandle::Pair(a, b) => match (left.level_of(a), right.level_of(b)) {
                    (LevelInfo::Exact(x), LevelInfo::Exact(y)) => {
                        match rightlex_slices(x.components(), y.components()) {
                            Ordering::Greater => LevelInfo::Exact(y),
                            _ => LevelInfo::Exact(x),
                        }
                    }
                    (LevelInfo::Exact(x), LevelInfo::Degenerate(_)) => LevelInfo::Exact(x),
                    (LevelInfo::Degenerate(_), LevelInfo::Exact(y)) => LevelInfo::Exact(y),
                    (LevelInfo::Degenerate(x), LevelInfo::Degenerate(y)) => {
                        match rightlex_slices(x.components(), y.components()) {
                            Ordering::Greater => LevelInfo::Degenerate(y),
                            _ => LevelInfo::Degenerate(x),
                        }
                    }
                    _ => LevelInfo::NoLevel,
                },
                _ => LevelInfo::NoLevel,
            },
            StructureDescriptor::Inflated { inner, pivot } => {
                if h.same_set(&inner.whole_handle()).unwrap_or(false) {
                    return LevelInfo::NoLevel;
                }
                inner.level_of(h).push(*pivot)
            }
            StructureDescriptor::Stacked { upper, lower } => match h {
                SetHandle::FieldSet(d) => {
                    let ev = upper.elevation() + lower.elevation();
                    let tail = d.ideal().tail.components();
                    if tail.len() >= ev {
                        LevelInfo::Exact(MultiIndex::new(tail[tail.len() - ev..].to_vec()))
                    } else {
                        LevelInfo::NoLevel
                    }
                }
                _ => LevelInfo::NoLevel,
            },
        }
    }

    /// `v ⊆ u` for neighbourhood identifiers of this structure.
    pub fn nbhd_contains(&self, u: &NbhdId, v: &NbhdId) -> Result<bool> {
        match (self, u, v) {
            (_, NbhdId::Point, NbhdId::Point) => Ok(true),
            (
                StructureDescriptor::Product { left, right },
                NbhdId::Pair(u1, u2),
                NbhdId::Pair(v1, v2),
            ) => Ok(left.nbhd_contains(u1, v1)? && right.nbhd_contains(u2, v2)?),
            (_, NbhdId::Ideal { i1: a, subtail: sa }, NbhdId::Ideal { i1: b, subtail: sb }) => {
                if sa.len() != sb.len() {
                    return Err(Error::IdentifierMismatch("mixed identifier arity".into()));
                }
                // same containment rule as for fractional ideals
                Ok(match rightlex_slices(sb, sa) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => b >= a,
                })
            }
            _ => Err(Error::IdentifierMismatch(format!(
                "cannot compare {u} and {v}"
            ))),
        }
    }

    pub fn nbhd_union(&self, u: &NbhdId, v: &NbhdId) -> Result<NbhdId> {
        match (self, u, v) {
            (_, NbhdId::Point, NbhdId::Point) => Ok(NbhdId::Point),
            (
                StructureDescriptor::Product { left, right },
                NbhdId::Pair(u1, u2),
                NbhdId::Pair(v1, v2),
            ) => Ok(NbhdId::Pair(
                Box::new(left.nbhd_union(u1, v1)?),
                Box::new(right.nbhd_union(u2, v2)?),
            )),
            _ => {
                // ideals are totally ordered: the union is the container
                if self.nbhd_contains(u, v)? {
                    Ok(u.clone())
                } else {
                    Ok(v.clone())
                }
            }
        }
    }

    pub fn nbhd_intersect(&self, u: &NbhdId, v: &NbhdId) -> Result<NbhdId> {
        match (self, u, v) {
            (_, NbhdId::Point, NbhdId::Point) => Ok(NbhdId::Point),
            (
                StructureDescriptor::Product { left, right },
                NbhdId::Pair(u1, u2),
                NbhdId::Pair(v1, v2),
            ) => Ok(NbhdId::Pair(
                Box::new(left.nbhd_intersect(u1, v1)?),
                Box::new(right.nbhd_intersect(u2, v2)?),
            )),
            _ => {
                if self.nbhd_contains(u, v)? {
                    Ok(v.clone())
                } else {
                    Ok(u.clone())
                }
            }
        }
    }
}

/// Interpret a handle produced by the lower structure as a neighbourhood
/// identifier of the upper structure.
fn handle_as_nbhd(upper: &StructureDescriptor, h: &SetHandle) -> Result<NbhdId> {
    match (upper, h) {
        (StructureDescriptor::Field { p, base_dim, .. }, SetHandle::FieldSet(d)) => {
            if d.shape().p != *p || d.shape().n != *base_dim {
                return Err(Error::IdentifierMismatch(format!(
                    "lower handle lives in ({},{}), upper base is ({p},{base_dim})",
                    d.shape().p,
                    d.shape().n
                )));
            }
            if !d.translate().is_zero() {
                return Err(Error::IdentifierMismatch(
                    "neighbourhood identifiers are identity-containing sets".into(),
                ));
            }
            Ok(NbhdId::Ideal {
                i1: d.ideal().i1,
                subtail: d.ideal().tail.components().to_vec(),
            })
        }
        (StructureDescriptor::Field { base_dim: 1, .. }, SetHandle::PBall(a)) => {
            Ok(NbhdId::ball(*a))
        }
        (u, h) => Err(Error::IdentifierMismatch(format!(
            "upper structure {u} does not accept lower handle {h}"
        ))),
    }
}

fn stack_compatibility(upper: &StructureDescriptor, lower: &StructureDescriptor) -> Result<()> {
    match (upper, lower) {
        (
            StructureDescriptor::Field { p, base_dim, .. },
            StructureDescriptor::Field { p: p2, n: n2, .. },
        ) => {
            if p == p2 && n2 == base_dim {
                Ok(())
            } else {
                Err(Error::IdentifierMismatch(format!(
                    "lower produces sets of the ({p2},{n2}) field, upper expects its \
                     ({p},{base_dim}) base"
                )))
            }
        }
        _ => Err(Error::IdentifierMismatch(format!(
            "stacking is supported for field structures, got upper {upper} over lower {lower}"
        ))),
    }
}

/// Product of two structures of equal elevation.
pub fn product(s1: &StructureDescriptor, s2: &StructureDescriptor) -> Result<StructureDescriptor> {
    if s1.elevation() != s2.elevation() {
        return Err(Error::ElevationMismatch(s1.elevation(), s2.elevation()));
    }
    Ok(StructureDescriptor::Product {
        left: Box::new(s1.clone()),
        right: Box::new(s2.clone()),
    })
}

/// Inflate the elevation by one around the pivot `w`: the new rightmost
/// index component selects the whole group below `w`, the original set at
/// `w`, and the identity singleton above `w`.
pub fn inflate(s: &StructureDescriptor, pivot: i64) -> StructureDescriptor {
    StructureDescriptor::Inflated {
        inner: Box::new(s.clone()),
        pivot,
    }
}

/// Stack `upper` (levelled over X) on top of `lower` (X over X'): the
/// combined index is `(gamma_lower, delta_upper)` with the upper part most
/// significant.
pub fn stack(
    upper: &StructureDescriptor,
    lower: &StructureDescriptor,
) -> Result<StructureDescriptor> {
    stack_compatibility(upper, lower)?;
    Ok(StructureDescriptor::Stacked {
        upper: Box::new(upper.clone()),
        lower: Box::new(lower.clone()),
    })
}

// ---------------------------------------------------------------------------
// windows and reports
// ---------------------------------------------------------------------------

/// Finite index window on which conditions are checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexWindow {
    pub neighborhoods: Vec<NbhdId>,
    pub gamma_lo: MultiIndex,
    pub gamma_hi: MultiIndex,
}

impl IndexWindow {
    pub fn new(
        neighborhoods: Vec<NbhdId>,
        gamma_lo: MultiIndex,
        gamma_hi: MultiIndex,
    ) -> Result<Self> {
        if neighborhoods.is_empty() {
            return Err(Error::invalid("window needs at least one neighbourhood"));
        }
        if gamma_lo.elevation() != gamma_hi.elevation()
            || gamma_lo
                .components()
                .iter()
                .zip(gamma_hi.components())
                .any(|(l, h)| l > h)
        {
            return Err(Error::invalid("empty or mismatched index box"));
        }
        Ok(IndexWindow {
            neighborhoods,
            gamma_lo,
            gamma_hi,
        })
    }

    /// Ball identifiers `p^a Z_p` for `a` in the given range.
    pub fn balls(a_lo: i64, a_hi: i64, gamma_lo: Vec<i64>, gamma_hi: Vec<i64>) -> Result<Self> {
        IndexWindow::new(
            (a_lo..=a_hi).map(NbhdId::ball).collect(),
            MultiIndex::new(gamma_lo),
            MultiIndex::new(gamma_hi),
        )
    }

    pub fn point(gamma_lo: Vec<i64>, gamma_hi: Vec<i64>) -> Result<Self> {
        IndexWindow::new(
            vec![NbhdId::Point],
            MultiIndex::new(gamma_lo),
            MultiIndex::new(gamma_hi),
        )
    }

    pub fn gammas(&self) -> Result<Vec<MultiIndex>> {
        index_box(&self.gamma_lo, &self.gamma_hi)
    }

    pub fn describe(&self) -> String {
        format!(
            "{} neighbourhood(s), gamma in {}..{}",
            self.neighborhoods.len(),
            self.gamma_lo,
            self.gamma_hi
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Strict,
    Compatible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    One,
    Two,
    Three,
    Four,
    Rigidity,
}

/// One failed instance of a condition, with printable set descriptions.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub condition: ConditionId,
    pub u: String,
    pub v: String,
    pub gamma: MultiIndex,
    pub delta: MultiIndex,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub mode: Mode,
    pub window: String,
    pub passed: bool,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
}

impl AxiomReport {
    fn new(mode: Mode, window: &IndexWindow) -> Self {
        AxiomReport {
            mode,
            window: window.describe(),
            passed: true,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, ce: Counterexample) {
        self.passed = false;
        self.counterexamples.push(ce);
    }
}

/// Checks conditions (1)-(4) of the definition on the window.
pub fn check_axioms(s: &StructureDescriptor, w: &IndexWindow, mode: Mode) -> Result<AxiomReport> {
    s.validate()?;
    let mut report = AxiomReport::new(mode, w);
    let gammas = w.gammas()?;
    if w.gamma_lo.elevation() != s.elevation() {
        return Err(Error::ElevationMismatch(
            w.gamma_lo.elevation(),
            s.elevation(),
        ));
    }

    // (1) identity membership and (2) well-defined, deterministic indexing
    for u in &w.neighborhoods {
        for g in &gammas {
            let h = s.construct(u, g)?;
            if !h.contains_identity() {
                report.fail(Counterexample {
                    condition: ConditionId::One,
                    u: u.to_string(),
                    v: u.to_string(),
                    gamma: g.clone(),
                    delta: g.clone(),
                    lhs: h.to_string(),
                    rhs: "identity element".into(),
                });
            }
            let again = s.construct(u, g)?;
            if again != h {
                report.fail(Counterexample {
                    condition: ConditionId::Two,
                    u: u.to_string(),
                    v: u.to_string(),
                    gamma: g.clone(),
                    delta: g.clone(),
                    lhs: h.to_string(),
                    rhs: again.to_string(),
                });
            }
        }
    }

    // (3) in the requested mode
    for u in &w.neighborhoods {
        for v in &w.neighborhoods {
            if !s.nbhd_contains(u, v)? {
                continue; // only V ⊆ U instances
            }
            for g in &gammas {
                for d in &gammas {
                    if rightlex_cmp(g, d)? == Ordering::Greater {
                        continue;
                    }
                    let lower = s.construct(v, g)?; // G_{V,gamma}
                    let upper = s.construct(u, d)?; // G_{U,delta}
                    match mode {
                        Mode::Strict => {
                            let rhs = s.construct(v, d)?;
                            let meet = lower.intersect(&upper)?;
                            let ok = match &meet {
                                Some(m) => m.same_set(&rhs)?,
                                None => false,
                            };
                            if !ok {
                                report.fail(Counterexample {
                                    condition: ConditionId::Three,
                                    u: u.to_string(),
                                    v: v.to_string(),
                                    gamma: g.clone(),
                                    delta: d.clone(),
                                    lhs: meet
                                        .map(|m| m.to_string())
                                        .unwrap_or_else(|| "empty".into()),
                                    rhs: rhs.to_string(),
                                });
                            }
                        }
                        Mode::Compatible => {
                            if g == d {
                                let meet = lower.intersect(&upper)?;
                                let ok = match &meet {
                                    Some(m) => m.same_set(&lower)?,
                                    None => false,
                                };
                                if !ok {
                                    report.fail(Counterexample {
                                        condition: ConditionId::Three,
                                        u: u.to_string(),
                                        v: v.to_string(),
                                        gamma: g.clone(),
                                        delta: d.clone(),
                                        lhs: meet
                                            .map(|m| m.to_string())
                                            .unwrap_or_else(|| "empty".into()),
                                        rhs: lower.to_string(),
                                    });
                                }
                            } else if !lower.contains(&upper)? {
                                report.fail(Counterexample {
                                    condition: ConditionId::Three,
                                    u: u.to_string(),
                                    v: v.to_string(),
                                    gamma: g.clone(),
                                    delta: d.clone(),
                                    lhs: upper.to_string(),
                                    rhs: format!("subset of {lower}"),
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    // (4) union and intersection compatibility in U at fixed gamma
    for u in &w.neighborhoods {
        for v in &w.neighborhoods {
            for g in &gammas {
                let hu = s.construct(u, g)?;
                let hv = s.construct(v, g)?;
                let union_id = s.nbhd_union(u, v)?;
                let meet_id = s.nbhd_intersect(u, v)?;
                let h_union = s.construct(&union_id, g)?;
                let h_meet = s.construct(&meet_id, g)?;
                if !SetHandle::union_equals(&hu, &hv, &h_union)? {
                    report.fail(Counterexample {
                        condition: ConditionId::Four,
                        u: u.to_string(),
                        v: v.to_string(),
                        gamma: g.clone(),
                        delta: g.clone(),
                        lhs: format!("{hu} ∪ {hv}"),
                        rhs: h_union.to_string(),
                    });
                }
                let meet = hu.intersect(&hv)?;
                let ok = match &meet {
                    Some(m) => m.same_set(&h_meet)?,
                    None => false,
                };
                if !ok {
                    report.fail(Counterexample {
                        condition: ConditionId::Four,
                        u: u.to_string(),
                        v: v.to_string(),
                        gamma: g.clone(),
                        delta: g.clone(),
                        lhs: format!("{hu} ∩ {hv}"),
                        rhs: h_meet.to_string(),
                    });
                }
            }
        }
    }

    Ok(report)
}

/// Rigidity on the window: the level of `G_{U,gamma}` must be `gamma`.
pub fn check_rigidity(s: &StructureDescriptor, w: &IndexWindow) -> Result<AxiomReport> {
    s.validate()?;
    let mut report = AxiomReport::new(Mode::Compatible, w);
    for u in &w.neighborhoods {
        for g in &w.gammas()? {
            let h = s.construct(u, g)?;
            match s.level_of(&h) {
                LevelInfo::Exact(found) => {
                    if &found != g {
                        report.fail(Counterexample {
                            condition: ConditionId::Rigidity,
                            u: u.to_string(),
                            v: u.to_string(),
                            gamma: g.clone(),
                            delta: found.clone(),
                            lhs: format!("lv({h}) = {found}"),
                            rhs: format!("{g}"),
                        });
                    }
                }
                LevelInfo::Degenerate(found) => {
                    report.notes.push(format!(
                        "degenerate index {g}: {h} realizes every index from {found} upward"
                    ));
                    if &found != g {
                        report.fail(Counterexample {
                            condition: ConditionId::Rigidity,
                            u: u.to_string(),
                            v: u.to_string(),
                            gamma: g.clone(),
                            delta: found.clone(),
                            lhs: format!("lv({h}) = {found} (degenerate)"),
                            rhs: format!("{g}"),
                        });
                    }
                }
                LevelInfo::NoLevel => {
                    report
                        .notes
                        .push(format!("no level exists for {h} at index {g}"));
                    report.fail(Counterexample {
                        condition: ConditionId::Rigidity,
                        u: u.to_string(),
                        v: u.to_string(),
                        gamma: g.clone(),
                        delta: g.clone(),
                        lhs: format!("lv({h}) undefined"),
                        rhs: format!("{g}"),
                    });
                }
            }
        }
    }
    Ok(report)
}
