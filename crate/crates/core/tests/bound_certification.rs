use rbl_core::bounds::binomial::{verify_binomial_facts, BinomialSweep, FACT_IDS};
use rbl_core::bounds::claims::{verify_appendix_claims, Appendix, ClaimStatus};
use rbl_core::bounds::search::{maximize_min_on_region, Region};
use rbl_core::bounds::BoundFunction;

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn diagonal_region_is_below_two_minus_delta() {
    let r = maximize_min_on_region(&BoundFunction::F, &BoundFunction::G, Region::new((0.0, 1.0), (0.0, 0.75)), 1e-5)
        .unwrap();
    assert!(r.converged);
    assert!(r.upper_bound < 2.0 - 2f64.powi(-11));
    assert!(r.best_value <= r.upper_bound);
}

#[test]
fn diagonal_lines_match_the_stated_maxima() {
    let rep = verify_appendix_claims(Appendix::A, 1e-3).unwrap();
    assert!(rep.passed() && rep.methods_agree);
    let g = rep.row("A:g_line").unwrap();
    assert!(near(g.value, 1.9993, 1e-3) && near(g.maximizer_y.unwrap(), 0.434, 0.01));
    let f1 = rep.row("A:f1_line").unwrap();
    assert!(near(f1.value, 1.994, 1e-3));
    let f2 = rep.row("A:f2_line").unwrap();
    assert!(near(f2.value, 1.9993, 1e-3) && near(f2.maximizer_x.unwrap(), 0.817, 0.01));
}

#[test]
fn near_diagonal_gaps_are_negative() {
    let cases = [
        (Appendix::B, "B", (-0.029, 0.4, 0.397), (-0.02, 0.4, 0.796)),
        (Appendix::C, "C", (-0.014, 9.0 / 19.0, 0.438), (-0.014, 9.0 / 19.0, 0.802)),
    ];
    for (a, p, gs, fs) in cases {
        let rep = verify_appendix_claims(a, 1e-3).unwrap();
        assert!(rep.passed() && rep.methods_agree, "{p}");
        for r in &rep.rows {
            assert_eq!(r.status, ClaimStatus::Pass, "{}", r.claim_id);
        }
        let g = rep.row(&format!("{p}:Gstar_line_gap")).unwrap();
        assert!(g.value <= gs.0 + 1e-3);
        assert!(near(g.maximizer_gamma.unwrap(), gs.1, 0.01) && near(g.maximizer_y.unwrap(), gs.2, 0.01));
        let f = rep.row(&format!("{p}:fstar_line_gap")).unwrap();
        assert!(f.value <= fs.0 + 1e-3);
        assert!(near(f.maximizer_gamma.unwrap(), fs.1, 0.01) && near(f.maximizer_x.unwrap(), fs.2, 0.01));
    }
}

#[test]
fn binomial_sweep_is_clean() {
    let rep = verify_binomial_facts(&BinomialSweep::default());
    assert!(rep.passed());
    for id in FACT_IDS {
        let t = &rep.facts[id];
        assert!(t.checked > 0 && t.violations == 0, "{id}: {:?}", t.first_violation);
    }
}
