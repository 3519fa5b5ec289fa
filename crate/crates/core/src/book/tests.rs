use super::*;
use crate::rational::ratio;

fn params(k: usize, mu: Rational, eps: Rational) -> BookParams {
    BookParams {
        epsilon: eps,
        ..BookParams::new(k, k, mu)
    }
}

/// a=0, b=1, c=2, d=3; red a–c, a–d, b–c.
fn hand_state() -> (Colouring, BookState, BookParams) {
    let c = Colouring::from_edges(4, &[(0, 2), (0, 3), (1, 2)]);
    let p = params(100, ratio(2, 5), ratio(1, 10));
    let x = VertexSet::from_indices(4, [0, 1]);
    let y = VertexSet::from_indices(4, [2, 3]);
    let st = BookState::new(&c, &x, &y, &p).unwrap();
    (c, st, p)
}

#[test]
fn hand_weights() {
    let (c, st, _) = hand_state();
    assert_eq!(st.p, ratio(3, 4));
    assert_eq!(pair_weight(&c, &st, 0, 1).unwrap(), ratio(-1, 4));
    assert_eq!(pair_weight(&c, &st, 1, 0).unwrap(), ratio(1, 8));
    let total: Rational = [0, 1]
        .iter()
        .flat_map(|&x| [0, 1].map(move |y| (x, y)))
        .map(|(x, y)| pair_weight(&c, &st, x, y).unwrap())
        .sum();
    assert_eq!(total, ratio(1, 4));
    assert_eq!(vertex_weight(&c, &st, 0).unwrap(), ratio(-1, 4));
    assert_eq!(vertex_weight(&c, &st, 1).unwrap(), ratio(1, 8));
    assert!(matches!(pair_weight(&c, &st, 0, 2), Err(BookError::NotInX(2))));
}

#[test]
fn vertex_weight_matches_pair_sum() {
    let c = crate::colouring::random_colouring(60, &ratio(1, 2), 3).unwrap();
    let p = params(12, ratio(2, 5), ratio(3, 10));
    let st = BookState::new(&c, &VertexSet::range(60, 0, 25), &VertexSet::range(60, 25, 60), &p).unwrap();
    for x in st.x.iter() {
        let direct: Rational = st
            .x
            .iter()
            .filter(|&y| y != x)
            .map(|y| pair_weight(&c, &st, x, y).unwrap())
            .sum();
        assert_eq!(vertex_weight(&c, &st, x).unwrap(), direct);
    }
}

#[test]
fn weights_vanish_when_all_red() {
    let c = Colouring::monochromatic(8, Colour::Red);
    let p = params(12, ratio(2, 5), ratio(3, 10));
    let st = BookState::new(&c, &VertexSet::range(8, 0, 4), &VertexSet::range(8, 4, 8), &p).unwrap();
    for x in 0..4 {
        assert_eq!(vertex_weight(&c, &st, x).unwrap(), ratio(0, 1));
        for y in 0..4 {
            assert_eq!(pair_weight(&c, &st, x, y).unwrap(), ratio(0, 1));
        }
    }
    let single = BookState::new(&c, &VertexSet::range(8, 0, 1), &VertexSet::range(8, 4, 8), &p).unwrap();
    assert_eq!(vertex_weight(&c, &single, 0).unwrap(), ratio(0, 1));
}

#[test]
fn hand_degree_regularisation() {
    // threshold (3/4 − sqrt(10)/1000)·2 ≈ 1.4937: b (degree 1) goes
    let (c, mut st, p) = hand_state();
    let StepOutcome::Recorded(rec) = degree_regularise(&c, &mut st, &p).unwrap() else {
        panic!("halted")
    };
    assert_eq!(st.x.to_vec(), vec![0]);
    assert_eq!(rec.removed_count, Some(1));
    assert_eq!(rec.p, ratio(1, 1));
    assert_eq!(rec.alpha, ratio(1, 1000));
}

#[test]
fn all_red_regularisation_keeps_everything() {
    let c = Colouring::monochromatic(20, Colour::Red);
    let p = params(10, ratio(2, 5), ratio(3, 10));
    let mut st = BookState::new(&c, &VertexSet::range(20, 0, 10), &VertexSet::range(20, 10, 20), &p).unwrap();
    let StepOutcome::Recorded(rec) = degree_regularise(&c, &mut st, &p).unwrap() else {
        panic!("halted")
    };
    assert_eq!(rec.removed_count, Some(0));
    assert_eq!(rec.p, ratio(1, 1));
}

#[test]
fn big_blue_candidates() {
    let p = params(12, ratio(2, 5), ratio(3, 10));
    let red = Colouring::monochromatic(20, Colour::Red);
    let st = BookState::new(&red, &VertexSet::range(20, 0, 10), &VertexSet::range(20, 10, 20), &p).unwrap();
    assert!(find_big_blue_candidates(&red, &st, &p).is_empty());

    let blue = Colouring::monochromatic(20, Colour::Blue);
    let st = BookState::new(&blue, &VertexSet::range(20, 0, 10), &VertexSet::range(20, 10, 20), &p).unwrap();
    assert_eq!(find_big_blue_candidates(&blue, &st, &p).len(), 10);

    // u1..u5 = 0..5, w1..w5 = 5..10, w–w red; Y = 10..12 joined in red
    let uw = Colouring::from_fn(12, |a, b| (a >= 5 && b >= 5) || b >= 10);
    let st = BookState::new(&uw, &VertexSet::range(12, 0, 10), &VertexSet::range(12, 10, 12), &p).unwrap();
    let w = find_big_blue_candidates(&uw, &st, &p);
    assert!(VertexSet::range(12, 0, 5).is_subset(&w));
}

#[test]
fn all_red_run_takes_k_red_steps() {
    let c = Colouring::monochromatic(200, Colour::Red);
    let p = BookParams {
        x_min: 5,
        ..params(10, ratio(2, 5), ratio(3, 10))
    };
    let trace = run(&c, &VertexSet::range(200, 0, 100), &VertexSet::range(200, 100, 200), &p).unwrap();
    assert_eq!(trace.summary.t, 10);
    assert_eq!(trace.summary.s, 0);
    assert_eq!(trace.summary.halting_reason, HaltReason::RedClique);
    assert_eq!(trace.summary.final_a, (0..10).collect::<Vec<_>>());
    assert_eq!(trace.count(StepKind::DegreeRegularise), 10);
    assert_eq!(trace.summary.beta_harmonic, ratio(2, 5));
    assert!(trace.steps.iter().all(|s| s.p == ratio(1, 1)));
}

#[test]
fn all_blue_run_halts_immediately() {
    let c = Colouring::monochromatic(200, Colour::Blue);
    let p = params(10, ratio(2, 5), ratio(3, 10));
    let trace = run(&c, &VertexSet::range(200, 0, 100), &VertexSet::range(200, 100, 200), &p).unwrap();
    assert!(trace.steps.is_empty());
    assert_eq!(trace.summary.halting_reason, HaltReason::PFloor);
    assert_eq!(trace.p0, ratio(0, 1));
}

#[test]
fn run_rejects_bad_inputs() {
    let c = Colouring::monochromatic(10, Colour::Red);
    let p = params(5, ratio(2, 5), ratio(3, 10));
    let x = VertexSet::range(10, 0, 5);
    assert!(matches!(run(&c, &x, &VertexSet::range(10, 4, 10), &p), Err(BookError::BadInitialSets(_))));
    assert!(matches!(run(&c, &x, &VertexSet::empty(10), &p), Err(BookError::BadInitialSets(_))));
    let bad = BookParams { mu: ratio(0, 1), ..p };
    assert!(matches!(run(&c, &x, &VertexSet::range(10, 5, 10), &bad), Err(BookError::InvalidParams(_))));
}

#[test]
fn moderate_jumps() {
    // ε = 3/10: ε^{-1/4} ≈ 1.351
    let eps = ratio(3, 10);
    assert!(is_moderate_jump(-2, &eps));
    assert!(is_moderate_jump(0, &eps));
    assert!(is_moderate_jump(1, &eps));
    assert!(!is_moderate_jump(2, &eps));
    // ε = 1/16: ε^{-1/4} = 2 exactly
    assert!(is_moderate_jump(2, &ratio(1, 16)));
    assert!(!is_moderate_jump(3, &ratio(1, 16)));
}

#[test]
fn random_run_respects_state_properties() {
    let c = crate::colouring::random_colouring(400, &ratio(7, 10), 11).unwrap();
    let p = BookParams {
        x_min: 10,
        w_min: 1000,
        ..params(12, ratio(2, 5), ratio(3, 10))
    };
    let trace = run(&c, &VertexSet::range(400, 0, 200), &VertexSet::range(400, 200, 400), &p).unwrap();
    assert!(trace.count(StepKind::Red) + trace.count(StepKind::DensityBoost) > 0, "{:?}", trace.summary);
    let a = VertexSet::from_indices(400, trace.summary.final_a.iter().copied());
    assert!(final_book_is_red(&c, &a, &trace.final_y(&c)));
    let back = Trace::from_json(&trace.to_json()).unwrap();
    assert_eq!(back, trace);
}


