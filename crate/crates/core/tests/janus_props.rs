use freewill_core::Ray;
use freewill_core::exactgeom::{ExtendedConfig, build_peres33, extended_configuration};
use freewill_core::janus::{
    ChoiceSource, FrameOrder, HexWorld, Move, SessionPlan, Site, left_right_face_test,
    no_signalling_check, possible_outcomes, run_session,
};
use rand::Rng;

fn ext() -> ExtendedConfig {
    extended_configuration(&build_peres33::<i64>())
}

fn triple(e: &ExtendedConfig, t: [usize; 3]) -> [Ray; 3] {
    t.map(|i| e.rays.rays()[i].clone())
}

#[test]
fn random_sessions_keep_spin_and_twin() {
    let e = ext();
    let mut rng = freewill_core::rng::rng_from_seed(7);
    let mut src = ChoiceSource::seeded(8);
    for _ in 0..100_000 {
        let mut t = e.triples[rng.random_range(0..e.triples.len())];
        // random measurement order within the triple
        let r = rng.random_range(0..3);
        t.rotate_left(r);
        if rng.random_bool(0.5) {
            t.swap(1, 2);
        }
        let b = if rng.random_bool(0.5) {
            t[rng.random_range(0..3)]
        } else {
            rng.random_range(0..e.rays.len())
        };
        let order = if rng.random_bool(0.5) {
            FrameOrder::AFirst
        } else {
            FrameOrder::BFirst
        };
        let plan = SessionPlan::new(triple(&e, t), e.rays.rays()[b].clone(), order).unwrap();
        let tr = run_session(&plan, &mut src).unwrap();
        assert!(tr.satisfies_spin() && tr.satisfies_twin());
        let again = run_session(&plan, &mut ChoiceSource::scripted(tr.free_bits.clone())).unwrap();
        assert_eq!(tr, again);
    }
}

#[test]
fn possible_outcomes_do_not_depend_on_frame() {
    let e = ext();
    for t in &e.triples {
        for perm in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            let a = triple(&e, perm.map(|i| t[i]));
            for w in e.rays.rays() {
                let plan = SessionPlan::new(a.clone(), w.clone(), FrameOrder::AFirst).unwrap();
                let first = possible_outcomes(&plan);
                assert_eq!(
                    first,
                    possible_outcomes(&plan.with_order(FrameOrder::BFirst))
                );
                let shared = plan.shared_slot();
                for o in &first {
                    assert_eq!(o[0] + o[1] + o[2], 2);
                    if let Some(s) = shared {
                        assert_eq!(o[s], o[3]);
                    }
                }
                let expected = if shared.is_some() { 3 } else { 6 };
                assert_eq!(first.len(), expected);
            }
        }
    }
}

/// For every ray `w` of the extended set: the plans over all 40 triples,
/// with `w` moved to the front of any triple containing it, so A measures a
/// shared direction first.
fn families(e: &ExtendedConfig, order: FrameOrder) -> Vec<Vec<SessionPlan>> {
    (0..e.rays.len())
        .map(|w| {
            e.triples
                .iter()
                .map(|t| {
                    let mut t = *t;
                    if let Some(p) = t.iter().position(|&i| i == w) {
                        t.swap(0, p);
                    }
                    SessionPlan::new(triple(e, t), e.rays.rays()[w].clone(), order).unwrap()
                })
                .collect()
        })
        .collect()
}

#[test]
fn no_signalling_on_enumerated_families() {
    let e = ext();
    for order in [FrameOrder::AFirst, FrameOrder::BFirst] {
        for fam in families(&e, order) {
            let report = no_signalling_check(&fam).unwrap();
            assert!(report.passes, "{report:?}");
            assert_eq!(report.max_tv_numerator, 0);
        }
    }
}

#[test]
fn b_first_is_blind_to_any_triple_order() {
    let e = ext();
    for w in 0..e.rays.len() {
        let mut fam = Vec::new();
        for t in &e.triples {
            for r in 0..3 {
                let mut t = *t;
                t.rotate_left(r);
                fam.push(
                    SessionPlan::new(triple(&e, t), e.rays.rays()[w].clone(), FrameOrder::BFirst)
                        .unwrap(),
                );
            }
        }
        assert!(no_signalling_check(&fam).unwrap().passes);
    }
}

#[test]
fn mixed_families_rejected() {
    let e = ext();
    let fam = families(&e, FrameOrder::AFirst);
    let mixed = vec![fam[0][0].clone(), fam[1][0].clone()];
    assert!(no_signalling_check(&mixed).is_err());
    let orders = vec![fam[0][0].clone(), fam[0][0].with_order(FrameOrder::BFirst)];
    assert!(no_signalling_check(&orders).is_err());
}

#[test]
fn hex_faces_over_ten_thousand_days() {
    let r = left_right_face_test(10_000, 7).unwrap();
    assert_eq!(r.left.parity_violations, 0);
    assert_eq!(r.right.parity_violations, 0);
    for run in [&r.left, &r.right] {
        for ones in [run.a_ones, run.b_ones] {
            let p = ones as f64 / 10_000.0;
            assert!((p - 0.5).abs() < 0.03, "marginal {p}");
        }
    }
}

#[test]
fn hex_api_refuses_future_reads() {
    let mut w = HexWorld::new(ChoiceSource::seeded(0));
    assert!(w.read(1, 0).is_err());
    w.step([Move::UpperLeft, Move::UpperRight]);
    assert!(
        w.read(1, 1).is_err(),
        "today's row is unfilled until someone measures"
    );
    w.measure(Site::B).unwrap();
    assert!(w.read(1, 1).is_ok());
    assert!(w.read(2, 0).is_err());
}
