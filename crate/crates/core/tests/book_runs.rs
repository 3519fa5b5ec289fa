use rbl_core::book::{final_book_is_red, run, BookParams, HaltReason, StepKind};
use rbl_core::colouring::random_colouring;
use rbl_core::invariants::{check_trace, mutation, Status, DIAGNOSTIC_IDS};
use rbl_core::rational::ratio;
use rbl_core::vertex_set::VertexSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn halves(n: usize) -> (VertexSet, VertexSet) {
    (VertexSet::range(n, 0, n / 2), VertexSet::range(n, n / 2, n))
}

fn params(w_min: usize) -> BookParams {
    BookParams {
        epsilon: ratio(1, 50),
        x_min: 10,
        w_min,
        ..BookParams::new(12, 12, ratio(2, 5))
    }
}

#[test]
fn dense_runs_replay_cleanly_and_end_in_red_books() {
    let (x, y) = halves(500);
    let mut kinds = std::collections::HashSet::new();
    for seed in 0..12 {
        let c = random_colouring(500, &ratio(3, 4), seed).unwrap();
        let t = run(&c, &x, &y, &params(600)).unwrap();
        let rep = check_trace(&c, &t).unwrap();
        assert!(rep.passed(), "seed {seed}: {:?}", rep.failures());
        for id in DIAGNOSTIC_IDS.iter().filter(|id| rep.diagnostics.contains_key(**id)) {
            assert!(rep.checks.get(*id).map_or(true, |r| r.status != Status::Fail));
        }
        let a = VertexSet::from_indices(500, t.summary.final_a.iter().copied());
        let yf = t.final_y(&c);
        assert!(final_book_is_red(&c, &a, &yf), "seed {seed}");
        assert_eq!(yf.len(), t.summary.final_y_size);
        assert!(HaltReason::ALL.contains(&t.summary.halting_reason));
        kinds.extend(t.steps.iter().map(|s| s.kind));
    }
    assert!(kinds.contains(&StepKind::Red));
    assert!(kinds.contains(&StepKind::DensityBoost));
}

#[test]
fn runs_are_deterministic() {
    let c = random_colouring(400, &ratio(7, 10), 9).unwrap();
    let (x, y) = halves(400);
    let a = run(&c, &x, &y, &params(600)).unwrap().to_json();
    let b = run(&c, &x, &y, &params(600)).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn single_field_mutations_are_detected() {
    let (x, y) = halves(500);
    let base: Vec<_> = (0..3)
        .map(|s| {
            let c = random_colouring(500, &ratio(3, 4), s).unwrap();
            let t = run(&c, &x, &y, &params(600)).unwrap();
            (c, t)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..300 {
        let (c, t) = &base[round % base.len()];
        let (m, what) = mutation::mutate(t, &mut rng);
        let caught = check_trace(c, &m).map_or(true, |r| !r.passed());
        assert!(caught, "missed: {what}");
    }
}
