//! The book algorithm: degree regularisation alternating with big blue, red
//! and density-boost steps, recorded step by step into a [`Trace`].
//!
//! All densities, heights and thresholds are exact. Irrational quantities
//! (`ε^{-1/2}`, `ε^{-1/4}`) only ever appear in comparisons, which are
//! decided by squaring.

mod ladder;
mod params;
mod trace;

pub use ladder::{alpha, height, q, Ladder};
pub use params::{default_epsilon, BookParams};
pub use trace::{HaltReason, StepKind, StepRecord, Summary, Trace};

use crate::cliques::{self, CliqueError};
use crate::colouring::{Colour, Colouring, ColouringError};
use crate::rational::{self, Rational};
use crate::vertex_set::VertexSet;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BookError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid initial sets: {0}")]
    BadInitialSets(String),
    #[error("vertex {0} is not in X")]
    NotInX(usize),
    #[error("density above every rung of the height ladder")]
    HeightOverflow,
    #[error(transparent)]
    Density(#[from] ColouringError),
    #[error(transparent)]
    Clique(#[from] CliqueError),
    #[error("final state failed its recheck: {0}")]
    FinalRecheck(String),
}

/// The evolving sets of one run.
#[derive(Debug, Clone)]
pub struct BookState {
    pub x: VertexSet,
    pub y: VertexSet,
    pub a: VertexSet,
    pub b: VertexSet,
    pub p: Rational,
    pub i: usize,
    ladder: Ladder,
}

impl BookState {
    pub fn new(c: &Colouring, x0: &VertexSet, y0: &VertexSet, params: &BookParams) -> Result<Self, BookError> {
        params.validate()?;
        if x0.universe() != c.n() || y0.universe() != c.n() {
            return Err(BookError::BadInitialSets("sets do not match the colouring size".into()));
        }
        if x0.is_empty() || y0.is_empty() {
            return Err(BookError::BadInitialSets("X and Y must be nonempty".into()));
        }
        if !x0.is_disjoint(y0) {
            return Err(BookError::BadInitialSets("X and Y must be disjoint".into()));
        }
        let p0 = c.red_density(x0, y0)?;
        let ladder = Ladder::new(p0.clone(), params.epsilon.clone(), params.k)?;
        Ok(Self {
            x: x0.clone(),
            y: y0.clone(),
            a: VertexSet::empty(c.n()),
            b: VertexSet::empty(c.n()),
            p: p0,
            i: 0,
            ladder,
        })
    }

    pub fn p0(&self) -> &Rational {
        self.ladder.p0()
    }

    pub fn ladder(&self) -> &Ladder {
        &self.ladder
    }

    pub fn height(&self) -> Result<u64, BookError> {
        self.ladder.height(&self.p)
    }
}

/// `ω(x, y) = (|N_R(x) ∩ N_R(y) ∩ Y| − p|N_R(x) ∩ Y|)/|Y|`.
pub fn pair_weight(c: &Colouring, st: &BookState, x: usize, y: usize) -> Result<Rational, BookError> {
    for v in [x, y] {
        if !st.x.contains(v) {
            return Err(BookError::NotInX(v));
        }
    }
    let rx = c.red_neighbours(x);
    let common = rx.intersection3_len(c.red_neighbours(y), &st.y);
    let dx = rx.intersection_len(&st.y);
    Ok((rational::from_usize(common) - &st.p * rational::from_usize(dx)) / rational::from_usize(st.y.len()))
}

/// `ω(x) = Σ_{y ∈ X∖{x}} ω(x, y)`.
pub fn vertex_weight(c: &Colouring, st: &BookState, x: usize) -> Result<Rational, BookError> {
    if !st.x.contains(x) {
        return Err(BookError::NotInX(x));
    }
    let (xs, ys) = (st.x.len(), st.y.len());
    let scaled = scaled_weights(c, &st.x, &st.y, std::iter::once(x))[0].1;
    Ok(Rational::new(BigInt::from(scaled), BigInt::from(xs as i128 * ys as i128 * ys as i128)))
}

/// `ω(x)·|X|·|Y|²` for each requested `x ∈ X`, as exact integers.
///
/// Uses `Σ_{y ∈ X∖x} |N_R(x)∩N_R(y)∩Y| = Σ_{z ∈ N_R(x)∩Y} d_X(z) − d_Y(x)`
/// where `d_X(z) = |N_R(z) ∩ X|`.
fn scaled_weights(
    c: &Colouring,
    xset: &VertexSet,
    yset: &VertexSet,
    vertices: impl Iterator<Item = usize>,
) -> Vec<(usize, i128)> {
    let n = c.n();
    let mut dx = vec![0i128; n];
    let mut e: i128 = 0;
    for z in yset.iter() {
        dx[z] = c.red_neighbours(z).intersection_len(xset) as i128;
        e += dx[z];
    }
    let (xs, ys) = (xset.len() as i128, yset.len() as i128);
    vertices
        .map(|x| {
            let ny = c.red_neighbours(x).intersection(yset);
            let dy = ny.len() as i128;
            let w: i128 = ny.iter().map(|z| dx[z]).sum::<i128>() - dy;
            (x, w * xs * ys - e * (xs - 1) * dy)
        })
        .collect()
}

/// Outcome of applying one step to the state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Recorded(StepRecord),
    Halted(HaltReason),
}

fn blank_record(st: &BookState, kind: StepKind, alpha: Rational) -> Result<StepRecord, BookError> {
    Ok(StepRecord {
        index: st.i,
        kind,
        x_size: st.x.len(),
        y_size: st.y.len(),
        p: st.p.clone(),
        h: st.height()?,
        alpha,
        beta: None,
        central_vertex: None,
        spine: None,
        pages: None,
        removed_count: None,
        moderate: None,
    })
}

fn red_degree(c: &Colouring, v: usize, into: &VertexSet) -> usize {
    c.red_neighbours(v).intersection_len(into)
}

/// Step 1: keep `x ∈ X` with `|N_R(x) ∩ Y| ≥ (p − ε^{-1/2} α_{h(p)})|Y|`.
pub fn degree_regularise(c: &Colouring, st: &mut BookState, params: &BookParams) -> Result<StepOutcome, BookError> {
    let h = st.height()?;
    let alpha = st.ladder.alpha(h);
    let ys = rational::from_usize(st.y.len());
    let scaled_alpha = &alpha * &ys;
    let p_y = &st.p * &ys;
    let radicand = params.epsilon.recip();
    let keep = VertexSet::from_indices(
        c.n(),
        st.x.iter().filter(|&v| {
            let deficit = &p_y - rational::from_usize(red_degree(c, v, &st.y));
            rational::le_coeff_sqrt(&deficit, &scaled_alpha, &radicand)
        }),
    );
    if keep.is_empty() {
        return Ok(StepOutcome::Halted(HaltReason::XExhausted));
    }
    let removed = st.x.len() - keep.len();
    st.x = keep;
    st.p = c.red_density(&st.x, &st.y)?;
    st.i += 1;
    let mut rec = blank_record(st, StepKind::DegreeRegularise, alpha)?;
    rec.removed_count = Some(removed);
    Ok(StepOutcome::Recorded(rec))
}

/// `W = {x ∈ X : |N_B(x) ∩ X| ≥ μ|X|}`.
pub fn find_big_blue_candidates(c: &Colouring, st: &BookState, params: &BookParams) -> VertexSet {
    let floor = &params.mu * rational::from_usize(st.x.len());
    VertexSet::from_indices(
        c.n(),
        st.x.iter()
            .filter(|&v| rational::from_usize(c.blue_neighbours(v).intersection_len(&st.x)) >= floor),
    )
}

/// Vertices of `X` with `|N_B(x) ∩ X| ≤ μ|X|`.
pub fn eligible_central(c: &Colouring, st: &BookState, params: &BookParams) -> VertexSet {
    let cap = &params.mu * rational::from_usize(st.x.len());
    VertexSet::from_indices(
        c.n(),
        st.x.iter()
            .filter(|&v| rational::from_usize(c.blue_neighbours(v).intersection_len(&st.x)) <= cap),
    )
}

/// Eligible vertex of maximum weight, lowest index on ties.
pub fn central_vertex(c: &Colouring, st: &BookState, params: &BookParams) -> Option<usize> {
    let eligible = eligible_central(c, st, params);
    scaled_weights(c, &st.x, &st.y, eligible.iter())
        .into_iter()
        .fold(None, |best: Option<(usize, i128)>, (v, w)| match best {
            Some((_, bw)) if bw >= w => best,
            _ => Some((v, w)),
        })
        .map(|(v, _)| v)
}

/// `d ≤ ε^{-1/4}` for an integer height jump `d`.
pub fn is_moderate_jump(d: i64, epsilon: &Rational) -> bool {
    d <= 0 || rational::pow(&rational::int(d), 4) * epsilon <= Rational::one()
}

/// Steps 2 to 5, applied after degree regularisation.
pub fn step(c: &Colouring, st: &mut BookState, params: &BookParams) -> Result<StepOutcome, BookError> {
    let h_prev = st.height()?;
    let alpha = st.ladder.alpha(h_prev);

    let w = find_big_blue_candidates(c, st, params);
    if w.len() >= params.w_min {
        let book = cliques::best_blue_book(c, &st.x, &params.mu, params.spine_budget)?;
        st.x = book.pages.clone();
        st.b = st.b.union(&book.spine);
        st.p = c.red_density(&st.x, &st.y)?;
        st.i += 1;
        let mut rec = blank_record(st, StepKind::BigBlue, alpha)?;
        rec.spine = Some(book.spine.to_vec());
        rec.pages = Some(book.pages.len());
        return Ok(StepOutcome::Recorded(rec));
    }

    let Some(x) = central_vertex(c, st, params) else {
        return Ok(StepOutcome::Halted(HaltReason::NoCentralVertex));
    };
    let blue_x = c.blue_neighbours(x).intersection(&st.x);
    let beta = Rational::new(BigInt::from(blue_x.len()), BigInt::from(st.x.len()));
    let red_x = c.red_neighbours(x).intersection(&st.x);
    let red_y = c.red_neighbours(x).intersection(&st.y);
    if red_x.is_empty() || red_y.is_empty() {
        return Ok(StepOutcome::Halted(HaltReason::XExhausted));
    }
    let red_density = c.red_density(&red_x, &red_y)?;
    let kind = if red_density >= &st.p - &alpha {
        st.x = red_x;
        st.y = red_y;
        st.a.insert(x);
        st.p = red_density;
        StepKind::Red
    } else {
        if blue_x.is_empty() {
            return Ok(StepOutcome::Halted(HaltReason::XExhausted));
        }
        st.x = blue_x;
        st.y = red_y;
        st.b.insert(x);
        st.p = c.red_density(&st.x, &st.y)?;
        StepKind::DensityBoost
    };
    st.i += 1;
    let mut rec = blank_record(st, kind, alpha)?;
    rec.beta = Some(beta);
    rec.central_vertex = Some(x);
    if kind == StepKind::DensityBoost {
        rec.moderate = Some(is_moderate_jump(rec.h as i64 - h_prev as i64, &params.epsilon));
    }
    Ok(StepOutcome::Recorded(rec))
}

/// `β` from the moderate boosts: harmonic mean of their `β_i`, or `μ` if none.
pub fn beta_harmonic(steps: &[StepRecord], mu: &Rational) -> Rational {
    let betas: Vec<&Rational> = steps
        .iter()
        .filter(|s| s.moderate == Some(true))
        .filter_map(|s| s.beta.as_ref())
        .collect();
    if betas.is_empty() || betas.iter().any(|b| !b.is_positive()) {
        return mu.clone();
    }
    let sum: Rational = betas.iter().map(|b| b.recip()).sum();
    rational::from_usize(betas.len()) / sum
}

/// Runs the algorithm from `(X0, Y0)` until a halting rule fires.
pub fn run(c: &Colouring, x0: &VertexSet, y0: &VertexSet, params: &BookParams) -> Result<Trace, BookError> {
    let mut st = BookState::new(c, x0, y0, params)?;
    let p0 = st.p.clone();
    let mut steps = Vec::new();
    let reason = loop {
        if st.x.len() <= params.x_min {
            break HaltReason::XSmall;
        }
        if st.p <= params.p_floor {
            break HaltReason::PFloor;
        }
        match degree_regularise(c, &mut st, params)? {
            StepOutcome::Recorded(r) => steps.push(r),
            StepOutcome::Halted(h) => break h,
        }
        match step(c, &mut st, params)? {
            StepOutcome::Recorded(r) => {
                let kind = r.kind;
                steps.push(r);
                if kind == StepKind::Red && st.a.len() >= params.k {
                    break HaltReason::RedClique;
                }
                if matches!(kind, StepKind::BigBlue | StepKind::DensityBoost) && st.b.len() >= params.ell {
                    break HaltReason::BlueClique;
                }
            }
            StepOutcome::Halted(h) => break h,
        }
    };
    recheck_final(c, &st)?;
    let trace = Trace {
        params: params.clone(),
        n: c.n(),
        p0,
        x0_size: x0.len(),
        y0_size: y0.len(),
        x0: x0.to_vec(),
        y0: y0.to_vec(),
        summary: Summary {
            t: steps.iter().filter(|s| s.kind == StepKind::Red).count(),
            s: steps.iter().filter(|s| s.kind == StepKind::DensityBoost).count(),
            big_blue_count: steps.iter().filter(|s| s.kind == StepKind::BigBlue).count(),
            beta_harmonic: beta_harmonic(&steps, &params.mu),
            halting_reason: reason,
            final_a: st.a.to_vec(),
            final_y_size: st.y.len(),
        },
        steps,
    };
    Ok(trace)
}

/// Direct edge recheck of the state properties: `A` a red clique joined in
/// red to `X ∪ Y`, `B` a blue clique joined in blue to `X`.
pub fn recheck_final(c: &Colouring, st: &BookState) -> Result<(), BookError> {
    let fail = |m: &str| Err(BookError::FinalRecheck(m.to_string()));
    if !c.is_clique(&st.a, Colour::Red) {
        return fail("A is not a red clique");
    }
    if !c.all_between(&st.a, &st.x.union(&st.y), Colour::Red) {
        return fail("an edge between A and X ∪ Y is blue");
    }
    if !c.is_clique(&st.b, Colour::Blue) {
        return fail("B is not a blue clique");
    }
    if !c.all_between(&st.b, &st.x, Colour::Blue) {
        return fail("an edge between B and X is red");
    }
    let sets = [&st.x, &st.y, &st.a, &st.b];
    for i in 0..4 {
        for j in i + 1..4 {
            if !sets[i].is_disjoint(sets[j]) {
                return fail("X, Y, A, B are not pairwise disjoint");
            }
        }
    }
    if !st.x.is_empty() && !st.y.is_empty() && c.red_density(&st.x, &st.y)? != st.p {
        return fail("stored density differs from the recount");
    }
    Ok(())
}

/// `(A, Y)` of a finished trace is a red book: `A` a red clique, every
/// `A`–`Y` edge red.
pub fn final_book_is_red(c: &Colouring, a: &VertexSet, y: &VertexSet) -> bool {
    a.is_disjoint(y) && c.is_clique(a, Colour::Red) && c.all_between(a, y, Colour::Red)
}

impl Trace {
    /// Rebuilds the final `Y` by replaying the recorded central vertices.
    pub fn final_y(&self, c: &Colouring) -> VertexSet {
        let mut y = VertexSet::from_indices(c.n(), self.y0.iter().copied());
        for s in &self.steps {
            if let (StepKind::Red | StepKind::DensityBoost, Some(x)) = (s.kind, s.central_vertex) {
                y = y.intersection(c.red_neighbours(x));
            }
        }
        y
    }
}

#[cfg(test)]
mod tests;
