//! Property tests for the algebraic invariants: total order laws, the
//! intersection trichotomy, canonical-form uniqueness, translation
//! invariance and additivity, all cross-checked against the finite quotient
//! model where one applies.

use levelset_core::hlf::{FieldElement, FieldShape, IdealIndex};
use levelset_core::measure::{self, DDDSet};
use levelset_core::multi_index::{rightlex_cmp, MultiIndex};
use levelset_core::sample::{Rng, SafeWindow};
use levelset_core::setalg::{self, LevelResult, SymbolicSet};
use levelset_core::zlevels::{self, StrideStructure, ZWindowSet};
use proptest::prelude::*;
use std::cmp::Ordering;

fn shape2() -> FieldShape {
    FieldShape::new(2, 2).unwrap()
}

fn mi(v: Vec<i64>) -> MultiIndex {
    MultiIndex::new(v)
}

proptest! {
    #[test]
    fn rightlex_is_a_total_order(
        a in prop::collection::vec(-50i64..50, 3),
        b in prop::collection::vec(-50i64..50, 3),
        c in prop::collection::vec(-50i64..50, 3),
    ) {
        let (a, b, c) = (mi(a), mi(b), mi(c));
        // totality + antisymmetry
        let ab = rightlex_cmp(&a, &b).unwrap();
        let ba = rightlex_cmp(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.reverse());
        if ab == Ordering::Equal {
            prop_assert_eq!(&a, &b);
        }
        // transitivity
        let bc = rightlex_cmp(&b, &c).unwrap();
        let ac = rightlex_cmp(&a, &c).unwrap();
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(ac, Ordering::Greater);
        }
    }

    #[test]
    fn ideal_containment_is_total(i in -4i64..4, j in -4i64..4, k in -4i64..4, l in -4i64..4) {
        let s = shape2();
        let a = IdealIndex::new(i, vec![j]);
        let b = IdealIndex::new(k, vec![l]);
        prop_assert!(
            levelset_core::hlf::ideal_contains(s, &a, &b).unwrap()
                || levelset_core::hlf::ideal_contains(s, &b, &a).unwrap()
        );
    }

    #[test]
    fn lower_level_blocks_ideal_containment(i in -4i64..4, j in -4i64..4, k in -4i64..4, l in -4i64..4) {
        // tails order the ideals: a strictly lower tail can never contain
        let s = shape2();
        let a = IdealIndex::new(i, vec![j]);
        let b = IdealIndex::new(k, vec![l]);
        if j < l {
            prop_assert!(!levelset_core::hlf::ideal_contains(s, &b, &a).unwrap());
        }
    }

    #[test]
    fn trichotomy_and_model_agreement(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let model = w.model().unwrap();
        let mut rng = Rng::new(seed);
        let d1 = w.dset(&mut rng, 0);
        let d2 = w.dset(&mut rng, 0);
        let meet = d1.intersect(&d2).unwrap();
        match &meet {
            None => {}
            Some(m) => prop_assert!(m == &d1 || m == &d2),
        }
        let bits = model.points_of_dset(&d1).unwrap().intersect(&model.points_of_dset(&d2).unwrap());
        match meet {
            None => prop_assert!(bits.is_empty()),
            Some(m) => prop_assert_eq!(bits, model.points_of_dset(&m).unwrap()),
        }
    }

    #[test]
    fn canonical_uniqueness_over_the_model(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let model = w.model().unwrap();
        let mut rng = Rng::new(seed);
        let d1 = w.dset(&mut rng, 0);
        let d2 = w.dset(&mut rng, 0);
        let same_points =
            model.points_of_dset(&d1).unwrap() == model.points_of_dset(&d2).unwrap();
        prop_assert_eq!(same_points, d1 == d2);
    }

    #[test]
    fn level_is_translation_invariant(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let mut rng = Rng::new(seed);
        let d = w.dset(&mut rng, 0);
        let g = w.element(&mut rng, 2);
        prop_assert_eq!(d.translate_by(&g).unwrap().level(), d.level());
        let s = w.symbolic(&mut rng, true);
        if !s.is_empty_set() {
            let shifted = setalg::normalize(&s.translate_by(&g).unwrap()).unwrap();
            prop_assert_eq!(
                setalg::level(&shifted).unwrap().gamma().cloned(),
                setalg::level(&s).unwrap().gamma().cloned()
            );
        }
    }

    #[test]
    fn coset_reps_partition_the_parent(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let model = w.model().unwrap();
        let mut rng = Rng::new(seed);
        let d = w.dset(&mut rng, 1);
        let reps = d.coset_reps(1).unwrap();
        let mut union = model.points_of_dset(&reps[0]).unwrap();
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                prop_assert_eq!(a.intersect(b).unwrap(), None);
            }
            union = union.union(&model.points_of_dset(a).unwrap());
        }
        prop_assert_eq!(union, model.points_of_dset(&d).unwrap());
    }

    #[test]
    fn normalize_is_idempotent_and_membership_preserving(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let model = w.model().unwrap();
        let mut rng = Rng::new(seed);
        // a raw union of overlapping samples
        let raw = SymbolicSet::Union(vec![
            w.symbolic(&mut rng, true),
            w.symbolic(&mut rng, false),
        ]);
        let n1 = setalg::normalize(&raw).unwrap();
        let n2 = setalg::normalize(&n1).unwrap();
        prop_assert_eq!(&n1, &n2);
        prop_assert!(model.equal_model(&raw, &n1).unwrap());
    }

    #[test]
    fn levelsize_blocks_containment(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let mut rng = Rng::new(seed);
        let a = w.symbolic(&mut rng, false);
        let b = w.symbolic(&mut rng, false);
        let la = setalg::level(&a).unwrap().gamma().cloned();
        let lb = setalg::level(&b).unwrap().gamma().cloned();
        if let (Some(la), Some(lb)) = (la, lb) {
            if rightlex_cmp(&la, &lb).unwrap() == Ordering::Less {
                // lv(A) < lv(B) forbids A ⊆ g + B
                for k in 0..3u64 {
                    let g = if k == 0 {
                        FieldElement::zero(shape2())
                    } else {
                        w.element(&mut rng, 2)
                    };
                    let shifted = setalg::normalize(&b.translate_by(&g).unwrap()).unwrap();
                    prop_assert!(!setalg::subset_of(&a, &shifted).unwrap());
                }
            }
        }
    }

    #[test]
    fn uniform_sets_have_pointwise_witnesses(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let model = w.model().unwrap();
        let mut rng = Rng::new(seed);
        let s = w.symbolic(&mut rng, true);
        if let LevelResult::Uniform(gamma) = setalg::uniform_level(&s).unwrap() {
            let pts = model.points_of(&s).unwrap();
            for idx in pts.ones().take(5) {
                let x = model.element_at(idx);
                let witness = setalg::uniform_witness(&s, &x).unwrap();
                match witness {
                    Some(d) => {
                        prop_assert_eq!(d.level(), gamma.clone());
                        prop_assert!(d.member(&x).unwrap());
                        prop_assert!(
                            setalg::subset_of(&SymbolicSet::Dist(d), &s).unwrap()
                        );
                    }
                    None => prop_assert!(false, "missing witness for a uniform set"),
                }
            }
        }
    }

    #[test]
    fn boolean_algebra_agrees_with_the_oracle(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let model = w.model().unwrap();
        let mut rng = Rng::new(seed);
        let a = w.symbolic(&mut rng, true);
        let b = w.symbolic(&mut rng, true);
        let bits_a = model.points_of(&a).unwrap();
        let bits_b = model.points_of(&b).unwrap();
        // subset decision vs brute force
        prop_assert_eq!(
            setalg::subset_of(&a, &b).unwrap(),
            bits_a.subtract(&bits_b).is_empty()
        );
        // symbolic intersection vs bitwise intersection
        let meet = setalg::intersect(&a, &b).unwrap();
        prop_assert_eq!(model.points_of(&meet).unwrap(), bits_a.intersect(&bits_b));
        // symbolic difference vs bitwise difference, where representable
        match setalg::diff(&a, &b) {
            Ok(d) => {
                prop_assert_eq!(model.points_of(&d).unwrap(), bits_a.subtract(&bits_b))
            }
            Err(levelset_core::Error::Unsupported(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn measure_matches_model_cardinality(seed in any::<u64>()) {
        // for a set assembled from cells of one base coset, the measure is
        // c * X^tail and the model point count is c * p^{i_hi} * (free-slot
        // volume): an independent bridge between mu and brute-force counting
        let w = SafeWindow::standard(shape2());
        let model = w.model().unwrap();
        let mut rng = Rng::new(seed);
        let base = w.dset(&mut rng, 1);
        let keep: Vec<SymbolicSet> = base
            .coset_reps(1)
            .unwrap()
            .into_iter()
            .filter(|_| rng.chance(2, 3))
            .map(SymbolicSet::Dist)
            .collect();
        prop_assume!(!keep.is_empty());
        let s = setalg::normalize(&SymbolicSet::Union(keep)).unwrap();
        let value = measure::mu_symbolic(&s).unwrap();
        let tail = base.ideal().tail.components().to_vec();
        let coeff = value
            .terms()
            .map(|(e, c)| {
                prop_assert_eq!(e, &tail);
                Ok(c.clone())
            })
            .next()
            .transpose()?
            .unwrap_or_else(|| num_rational::BigRational::from_integer(0.into()));
        // count the slots strictly above the tail in right-lex order
        let free_slots = {
            let mut n = 0u32;
            for e in w.t_lo[0]..=w.t_hi[0] {
                if levelset_core::multi_index::rightlex_slices(&[e], &tail)
                    == Ordering::Greater
                {
                    n += 1;
                }
            }
            n
        };
        let p = w.shape.p;
        let digits = (w.i_hi - w.i_lo) as u32;
        let expected = coeff
            * num_rational::BigRational::from_integer(p.into()).pow(w.i_hi as i32)
            * num_rational::BigRational::from_integer(
                num_bigint::BigInt::from(p).pow(digits * free_slots),
            );
        prop_assert!(expected.is_integer());
        let count = model.points_of(&s).unwrap().count();
        prop_assert_eq!(expected.to_integer(), num_bigint::BigInt::from(count));
    }

    #[test]
    fn measure_inclusion_exclusion(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let mut rng = Rng::new(seed);
        let a = measure::to_ddd(&w.symbolic(&mut rng, false)).unwrap();
        let b = measure::to_ddd(&w.symbolic(&mut rng, false)).unwrap();
        let union = measure::ring_union(&a, &b).unwrap();
        let meet = measure::ring_intersection(&a, &b).unwrap();
        let lhs = measure::mu(&union).unwrap().add(&measure::mu(&meet).unwrap());
        let rhs = measure::mu(&a).unwrap().add(&measure::mu(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn measure_partition_refinement(seed in any::<u64>()) {
        let w = SafeWindow::standard(shape2());
        let mut rng = Rng::new(seed);
        let d = w.dset(&mut rng, 1);
        let whole = measure::mu(&DDDSet::from_dist(d.clone())).unwrap();
        let refined = DDDSet {
            regions: d
                .coset_reps(1)
                .unwrap()
                .into_iter()
                .map(|c| measure::Region { outer: c, holes: vec![] })
                .collect(),
        };
        prop_assert_eq!(measure::mu(&refined).unwrap(), whole);
    }

    #[test]
    fn z_level_translation_and_monotonicity(
        members in prop::collection::btree_set(0i64..60, 0..25),
        extra in prop::collection::btree_set(0i64..60, 0..10),
        shift in -30i64..30,
    ) {
        let s = StrideStructure::new(1).unwrap();
        let set = ZWindowSet::new((0, 60), members.iter().copied()).unwrap();
        // translation invariance
        prop_assert_eq!(zlevels::z_level(s, &set.shift(shift)), zlevels::z_level(s, &set));
        // monotonicity under inclusion
        let bigger: std::collections::BTreeSet<i64> =
            members.union(&extra).copied().collect();
        let big = ZWindowSet::new((0, 60), bigger).unwrap();
        match (zlevels::z_level(s, &set), zlevels::z_level(s, &big)) {
            (Some(a), Some(b)) => prop_assert!(a >= b),
            (Some(_), None) => prop_assert!(false, "superset lost its level"),
            _ => {}
        }
    }
}
