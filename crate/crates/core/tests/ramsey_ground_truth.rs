use rbl_core::cliques::{has_mono_clique, max_clique, MonoClique};
use rbl_core::colouring::{paley_colouring, random_colouring, Colour, Colouring};
use rbl_core::rational::ratio;
use rbl_core::tables::{
    clique_numbers, es_bound, es_greedy, every_colouring_has, known_ramsey, improved_bound, ramsey_witness, GreedyOutcome,
    Theorem,
};
use rbl_core::vertex_set::VertexSet;

#[test]
fn every_colouring_of_k6_has_a_triangle() {
    assert!(every_colouring_has(6, 3, 3));
    assert!(!every_colouring_has(5, 3, 3));
}

#[test]
fn small_ramsey_numbers_by_search() {
    assert_eq!(known_ramsey(3, 3), Some(6));
    assert_eq!(known_ramsey(3, 4), Some(9));
    assert_eq!(known_ramsey(4, 3), Some(9));
    assert_eq!(known_ramsey(4, 4), None);
    let w = ramsey_witness(8, 3, 4).expect("witness on 8 vertices");
    let all = w.all_vertices();
    assert!(max_clique(&w, Colour::Red, &all, 8).len() < 3);
    assert!(max_clique(&w, Colour::Blue, &all, 8).len() < 4);
    assert!(ramsey_witness(9, 3, 4).is_none());
}

#[test]
fn paley17_has_no_monochromatic_k4() {
    let c = paley_colouring(17).unwrap();
    assert_eq!(clique_numbers(&c), (3, 3));
    assert_eq!(has_mono_clique(&c, 4, 4), MonoClique::Neither);
    // 17 < R(4,4), so the greedy may run out
    assert!(matches!(es_greedy(&c, 4, 4), GreedyOutcome::Exhausted { .. }));
}

#[test]
fn paley_red_and_blue_clique_numbers_agree() {
    for q in [5, 13, 17, 29, 37] {
        let (r, b) = clique_numbers(&paley_colouring(q).unwrap());
        assert_eq!(r, b, "q = {q}");
    }
}

fn greedy_never_exhausts(k: usize, ell: usize, seeds: u64) {
    let n: usize = es_bound(k as u64, ell as u64).try_into().unwrap();
    for seed in 0..seeds {
        let p = ratio(1 + (seed % 9) as i64, 10);
        let c = random_colouring(n, &p, seed).unwrap();
        match es_greedy(&c, k, ell) {
            GreedyOutcome::Red(a) => assert!(a.len() == k && c.is_clique(&VertexSet::from_indices(n, a), Colour::Red)),
            GreedyOutcome::Blue(b) => {
                assert!(b.len() == ell && c.is_clique(&VertexSet::from_indices(n, b), Colour::Blue))
            }
            GreedyOutcome::Exhausted { .. } => panic!("exhausted at n = {n}, seed {seed}"),
        }
    }
}

#[test]
fn greedy_reaches_a_clique_at_the_binomial_bound() {
    greedy_never_exhausts(3, 3, 2000);
    greedy_never_exhausts(3, 4, 2000);
    greedy_never_exhausts(4, 3, 500);
    greedy_never_exhausts(4, 4, 300);
}

#[test]
fn pentagon_exhausts_the_greedy() {
    // K_5 coloured by the pentagon: no mono triangle, and 5 < C(4,2) = 6
    let c = Colouring::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
    assert!(matches!(es_greedy(&c, 3, 3), GreedyOutcome::Exhausted { .. }));
}

#[test]
fn improved_bounds_divide_the_binomial_by_the_stated_factor() {
    for (t, k, ell, factor) in [
        (Theorem::Explicit, 400, 400, -1.0),
        (Theorem::Gamma, 400, 100, -2.0),
        (Theorem::Weak, 450, 50, -2.25),
        (Theorem::Near, 400, 360, -4.5),
        (Theorem::Nearer, 300, 200, -4.0),
    ] {
        let b = improved_bound(t, k, ell).unwrap();
        assert!((b.ln_ratio - factor).abs() < 1e-9, "{t}: {}", b.ln_ratio);
    }
    let d = improved_bound(Theorem::Diagonal, 100, 100).unwrap();
    assert!((d.ln_value - 100.0 * (4.0f64 - 1.0 / 1024.0).ln()).abs() < 1e-9);
    // with the o(k) factor dropped, C(2k,k) ~ 4^k/sqrt(πk) is still smaller at k = 100
    let expected = 100.0 * (1.0f64 - 1.0 / 4096.0).ln() + 0.5 * (std::f64::consts::PI * 100.0).ln();
    assert!(d.ln_ratio > 0.0 && (d.ln_ratio - expected).abs() < 0.01);
}
