// randomized cover instances cross-validated against model coverage
use levelset_core::cover::{self, CoverInstance, CoverVerdict};
use levelset_core::hlf::FieldShape;
use levelset_core::sample::{Rng, SafeWindow};
use levelset_core::setalg::{self, SymbolicSet};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let shape = FieldShape::new(2, 2).unwrap();
    let w = SafeWindow {
        shape,
        t_lo: vec![-1],
        t_hi: vec![1],
        i_lo: -1,
        i_hi: 5,
    };
    let model = w.model().unwrap();
    let mut covered = 0u32;
    let mut rng = Rng::new(0xC0FFEE);
    for k in 0..3000u32 {
        let target = w.dset(&mut rng, 3);
        let depth = 1 + rng.below(3) as u32;
        let cells = target.coset_reps(depth).unwrap();
        let groups = 1 + rng.below(3) as usize;
        let mut members: Vec<Vec<SymbolicSet>> = vec![Vec::new(); groups];
        for cell in cells {
            if k % 2 == 0 && rng.chance(1, 5) {
                continue;
            }
            // occasionally punch a hole in a cell and re-add the hole as its
            // own member, exercising difference members
            if rng.chance(1, 6) && cell.ideal().i1 < 4 {
                let kids = cell.coset_reps(1).unwrap();
                let g = rng.below(groups as u64) as usize;
                members[g].push(SymbolicSet::difference(
                    SymbolicSet::Dist(cell),
                    vec![kids[0].clone()],
                ));
                members[rng.below(groups as u64) as usize].push(SymbolicSet::Dist(kids[0].clone()));
            } else {
                members[rng.below(groups as u64) as usize].push(SymbolicSet::Dist(cell));
            }
        }
        let family: Vec<SymbolicSet> = members
            .into_iter()
            .filter(|m| !m.is_empty())
            .map(|m| setalg::normalize(&SymbolicSet::Union(m)).unwrap())
            .collect();
        if family.is_empty() {
            continue;
        }
        let inst = CoverInstance::new(target.clone(), target.level(), family).unwrap();
        let report = match cover::covers(&inst) {
            Ok(r) => r,
            Err(e) => panic!("engine error on instance {k}: {e}"),
        };
        let oracle = model.covers_model(&inst.target, &inst.family).unwrap();
        assert_eq!(
            report.is_covered(),
            oracle,
            "verdict mismatch at instance {k}"
        );
        let was_covered = report.is_covered();
        match report.verdict {
            CoverVerdict::Covered { subcover } => {
                covered += 1;
                let sub: Vec<SymbolicSet> =
                    subcover.iter().map(|&i| inst.family[i].clone()).collect();
                assert!(
                    model.covers_model(&inst.target, &sub).unwrap(),
                    "unsound subcover at {k}"
                );
            }
            CoverVerdict::NotCovered { witness } => {
                assert!(inst.target.member(&witness).unwrap());
                for m in &inst.family {
                    assert!(!m.member(&witness).unwrap(), "witness covered at {k}");
                }
            }
        }

        // mixed-level variant: coarsen some plain members in the t-direction
        // and re-decide through the subcover path; the verdict can only
        // improve, and chosen subfamilies must still cover
        let mut coarsened = inst.family.clone();
        let mut touched = false;
        for m in coarsened.iter_mut() {
            if !rng.chance(1, 3) {
                continue;
            }
            if let SymbolicSet::Dist(d) = m.clone() {
                let mut tail = d.ideal().tail.components().to_vec();
                tail[0] -= 1;
                let coarser = levelset_core::hlf::DistinguishedSet::new(
                    w.shape,
                    d.translate().clone(),
                    levelset_core::hlf::IdealIndex::new(d.ideal().i1, tail),
                )
                .unwrap();
                *m = SymbolicSet::Dist(coarser);
                touched = true;
            }
        }
        if touched {
            let mixed =
                CoverInstance::new(inst.target.clone(), inst.target.level(), coarsened).unwrap();
            let mixed_report = cover::find_subcover(&mixed).unwrap();
            if was_covered {
                assert!(
                    mixed_report.is_covered(),
                    "coarsening uncovered instance {k}"
                );
            }
            if let CoverVerdict::Covered { subcover } = mixed_report.verdict {
                let sub: Vec<SymbolicSet> =
                    subcover.iter().map(|&i| mixed.family[i].clone()).collect();
                let union = setalg::normalize(&SymbolicSet::Union(sub)).unwrap();
                assert!(
                    setalg::subset_of(&SymbolicSet::Dist(mixed.target.clone()), &union).unwrap(),
                    "unsound mixed-level subcover at {k}"
                );
            }
        }
    }
    println!(
        "fuzz: 3000 cover instances ({covered} covered) plus mixed-level subcovers in {:?}",
        t0.elapsed()
    );
}
