// extended randomized cross-validation across many seeds
use levelset_core::hlf::FieldShape;
use levelset_core::sample::{Rng, SafeWindow};
use levelset_core::setalg::{self, LevelResult, SymbolicSet};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let mut checked = 0u64;
    for (p, n) in [(2u64, 2u8), (3, 2), (2, 3)] {
        let shape = FieldShape::new(p, n).unwrap();
        let w = SafeWindow::standard(shape);
        let model = w.model().unwrap();
        let allow_rank = n == 2;
        for seed in 0..4000u64 {
            let mut rng = Rng::new(seed * 31 + p * 7 + n as u64);
            let a = w.symbolic(&mut rng, allow_rank);
            let b = w.symbolic(&mut rng, allow_rank);
            let ba = model.points_of(&a).unwrap();
            let bb = model.points_of(&b).unwrap();
            assert_eq!(
                setalg::subset_of(&a, &b).unwrap(),
                ba.subtract(&bb).is_empty(),
                "subset {a} vs {b}"
            );
            let meet = setalg::intersect(&a, &b).unwrap();
            assert_eq!(
                model.points_of(&meet).unwrap(),
                ba.intersect(&bb),
                "meet {a} vs {b}"
            );
            match setalg::diff(&a, &b) {
                Ok(d) => assert_eq!(
                    model.points_of(&d).unwrap(),
                    ba.subtract(&bb),
                    "diff {a} vs {b}"
                ),
                Err(levelset_core::Error::Unsupported(_)) => {}
                Err(e) => panic!("{e}"),
            }
            // normalize of the overlapping union stays membership-equal
            let u = SymbolicSet::Union(vec![a.clone(), b.clone()]);
            let nu = setalg::normalize(&u).unwrap();
            assert_eq!(
                model.points_of(&nu).unwrap(),
                ba.union(&bb),
                "union {a} vs {b}"
            );
            // uniform witnesses exist at every model point when claimed
            if let LevelResult::Uniform(g) = setalg::uniform_level(&nu).unwrap() {
                for idx in model.points_of(&nu).unwrap().ones().take(3) {
                    let x = model.element_at(idx);
                    let wit = setalg::uniform_witness(&nu, &x)
                        .unwrap()
                        .unwrap_or_else(|| panic!("no witness for {x} in {nu}"));
                    assert_eq!(wit.level(), g);
                    assert!(wit.member(&x).unwrap());
                    assert!(setalg::subset_of(&SymbolicSet::Dist(wit), &nu).unwrap());
                }
            }
            checked += 1;
        }
    }
    println!(
        "fuzz: {checked} random pairs cross-validated in {:?}",
        t0.elapsed()
    );
}
