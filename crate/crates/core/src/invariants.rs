//! Replays a [`Trace`] against its colouring, recomputing every set, density
//! and decision from scratch, and checks the exact per-step inequalities.
//!
//! Check ids:
//! - `1` containment of the `X` and `Y` chains
//! - `2` state properties: `A` red clique joined in red to `X ∪ Y`, `B` blue
//!   clique joined in blue to `X`, sets disjoint, recorded `p` equal to the
//!   recounted density
//! - `3` nonnegative total weight (diagonal included) at every central choice
//! - `4` degree-regularisation boost
//! - `5` red-step floor `p_i ≥ p_{i−1} − α`
//! - `6` density-boost lower bound
//! - `7` per-height decomposition of every density change
//! - `8` bounds on `α_{h(p)}`
//! - `9` step and clique bookkeeping
//! - `10` asymptotic diagnostics (reported only)
//! - `weight_bound` central vertex has maximal weight among eligible vertices
//! - `beta_floor` `β_i ≤ μ`
//! - `replay` every recorded field and decision equals the recomputed one

use crate::book::{self, BookParams, HaltReason, StepKind, StepRecord, Trace};
use crate::cliques;
use crate::colouring::{Colour, Colouring};
use crate::rational::{self, serde_ratio, Rational};
use crate::vertex_set::VertexSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub mod mutation;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("trace does not belong to this colouring: {0}")]
    Provenance(String),
    #[error("malformed trace: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Diagnostic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: Status,
    #[serde(with = "serde_ratio::option")]
    pub worst_slack: Option<Rational>,
    pub first_violation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckResult {
    fn new() -> Self {
        Self {
            status: Status::Pass,
            worst_slack: None,
            first_violation: None,
            detail: None,
        }
    }

    fn slack(&mut self, index: usize, slack: Rational) {
        let fails = slack.is_negative();
        if self.worst_slack.as_ref().map_or(true, |w| slack < *w) {
            self.worst_slack = Some(slack);
        }
        if fails {
            self.fail(index, "negative slack");
        }
    }

    fn require(&mut self, index: usize, ok: bool, what: &str) {
        if !ok {
            self.fail(index, what);
        }
    }

    fn fail(&mut self, index: usize, what: &str) {
        if self.status != Status::Fail {
            self.status = Status::Fail;
            self.first_violation = Some(index);
            self.detail = Some(what.to_string());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: BTreeMap<String, CheckResult>,
    #[serde(serialize_with = "ser_diag", deserialize_with = "de_diag")]
    pub diagnostics: BTreeMap<String, Rational>,
}

fn ser_diag<S: serde::Serializer>(m: &BTreeMap<String, Rational>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &rational::to_ratio_string(v))?;
    }
    map.end()
}

fn de_diag<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Rational>, D::Error> {
    let raw = BTreeMap::<String, String>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| rational::parse(&v).map(|r| (k, r)).map_err(serde::de::Error::custom))
        .collect()
}

pub const EXACT_CHECKS: [&str; 12] = [
    "1",
    "2",
    "3",
    "4",
    "5",
    "6",
    "7",
    "8",
    "9",
    "weight_bound",
    "beta_floor",
    "replay",
];

pub const DIAGNOSTIC_IDS: [&str; 8] = [
    "bounding_p",
    "y_bound",
    "x_bound",
    "zigzag",
    "s_bound",
    "beta_bound",
    "weight_bound",
    "beta_floor",
];

impl CheckReport {
    /// No exact check failed.
    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<(&str, Option<usize>)> {
        self.checks
            .iter()
            .filter(|(_, c)| c.status == Status::Fail)
            .map(|(id, c)| (id.as_str(), c.first_violation))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

/// Everything the replay learns about one red or density-boost step.
#[derive(Debug, Clone)]
pub struct CentralInfo {
    pub index: usize,
    pub vertex: usize,
    /// `ω(x_i)` at `(X_{i−1}, Y_{i−1})`.
    pub weight: Rational,
    pub is_argmax: bool,
    pub x_prev: usize,
    pub beta: Rational,
}

struct Replay<'a> {
    c: &'a Colouring,
    params: &'a BookParams,
    p0: Rational,
    x: VertexSet,
    y: VertexSet,
    a: VertexSet,
    b: VertexSet,
    p: Rational,
    checks: BTreeMap<&'static str, CheckResult>,
    central: Vec<CentralInfo>,
    /// Recomputed densities `p_0, p_1, ...` for the replayed prefix.
    densities: Vec<Rational>,
    spine_total: usize,
    complete: bool,
}

/// `q_h`, or `q_0 = p0` for `h = 0`.
fn rung(p0: &Rational, eps: &Rational, k: usize, h: u64) -> Rational {
    book::q(h, p0, eps, k)
}

/// Height by direct search on the ladder (independent of the cached ladder).
fn height_direct(p: &Rational, p0: &Rational, eps: &Rational, k: usize) -> Option<u64> {
    let mut h = 1u64;
    let base = Rational::one() + eps;
    let mut growth = base.clone();
    let kr = rational::from_usize(k);
    loop {
        if *p <= p0 + (&growth - Rational::one()) / &kr {
            return Some(h);
        }
        if h > 100_000 {
            return None;
        }
        h += 1;
        growth *= &base;
    }
}

fn ratio_of(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Weight `ω(x)` from pairwise common neighbourhoods.
fn weight_pairwise(c: &Colouring, x: usize, xs: &VertexSet, ys: &VertexSet, p: &Rational) -> Rational {
    let rx = c.red_neighbours(x);
    let common: usize = xs
        .iter()
        .filter(|&y| y != x)
        .map(|y| rx.intersection3_len(c.red_neighbours(y), ys))
        .sum();
    let dy = rx.intersection_len(ys);
    (rational::from_usize(common) - p * rational::from_usize((xs.len() - 1) * dy)) / rational::from_usize(ys.len())
}

impl<'a> Replay<'a> {
    fn check(&mut self, id: &'static str) -> &mut CheckResult {
        self.checks.get_mut(id).expect("known check id")
    }

    fn density(&self) -> Rational {
        ratio_of(self.c.red_edges_between(&self.x, &self.y), self.x.len() * self.y.len())
    }

    fn height(&self, p: &Rational) -> Option<u64> {
        height_direct(p, &self.p0, &self.params.epsilon, self.params.k)
    }

    fn alpha(&self, h: u64) -> Rational {
        book::alpha(h, &self.params.epsilon, self.params.k)
    }

    fn state_properties(&mut self, index: usize) {
        let c = self.c;
        let xy = self.x.union(&self.y);
        let ok_a = c.is_clique(&self.a, Colour::Red) && self.a.iter().all(|v| xy.is_subset(c.red_neighbours(v)));
        let ok_b = c.is_clique(&self.b, Colour::Blue) && self.b.iter().all(|v| self.x.is_subset(c.blue_neighbours(v)));
        let sets = [&self.x, &self.y, &self.a, &self.b];
        let disjoint = (0..4).all(|i| (i + 1..4).all(|j| sets[i].is_disjoint(sets[j])));
        let chk = self.check("2");
        chk.require(index, ok_a, "A is not a red clique joined in red to X and Y");
        chk.require(index, ok_b, "B is not a blue clique joined in blue to X");
        chk.require(index, disjoint, "X, Y, A, B overlap");
    }

    fn stop(&mut self, index: usize, what: &str) {
        self.check("replay").fail(index, what);
        self.complete = false;
    }

    /// Checks the recorded step against the replayed post-state.
    fn common_fields(&mut self, rec: &StepRecord, alpha: &Rational) -> bool {
        let i = rec.index;
        let p_new = self.density();
        let p_ok = rec.p == p_new;
        self.check("2").require(i, p_ok, "recorded p differs from the recounted density");
        let h_new = self.height(&p_new);
        let mut ok = rec.x_size == self.x.len() && rec.y_size == self.y.len();
        ok &= h_new == Some(rec.h);
        ok &= rec.alpha == *alpha;
        if !ok {
            self.stop(i, "recorded sizes, height or alpha differ from the replay");
        }
        self.p = p_new;
        self.densities.push(self.p.clone());
        ok && p_ok
    }

    fn fields_present(rec: &StepRecord) -> bool {
        let central = rec.central_vertex.is_some() && rec.beta.is_some();
        let none_central = rec.central_vertex.is_none() && rec.beta.is_none();
        match rec.kind {
            StepKind::DegreeRegularise => {
                rec.removed_count.is_some() && none_central && rec.spine.is_none() && rec.pages.is_none() && rec.moderate.is_none()
            }
            StepKind::BigBlue => {
                rec.removed_count.is_none() && none_central && rec.spine.is_some() && rec.pages.is_some() && rec.moderate.is_none()
            }
            StepKind::Red => {
                rec.removed_count.is_none() && central && rec.spine.is_none() && rec.pages.is_none() && rec.moderate.is_none()
            }
            StepKind::DensityBoost => {
                rec.removed_count.is_none() && central && rec.spine.is_none() && rec.pages.is_none() && rec.moderate.is_some()
            }
        }
    }

    fn degree_step(&mut self, rec: &StepRecord) -> bool {
        let i = rec.index;
        let c = self.c;
        let p_prev = self.p.clone();
        let Some(h) = self.height(&p_prev) else {
            self.stop(i, "height undefined");
            return false;
        };
        let alpha = self.alpha(h);
        // keep x iff d_Y(x) >= (p − ε^{-1/2} α)|Y|, i.e. (p|Y| − d)² ≤ (α|Y|)²/ε when p|Y| > d
        let ys = rational::from_usize(self.y.len());
        let keep = VertexSet::from_indices(
            c.n(),
            self.x.iter().filter(|&v| {
                let deficit = &p_prev * &ys - rational::from_usize(c.red_neighbours(v).intersection_len(&self.y));
                !deficit.is_positive() || &deficit * &deficit * &self.params.epsilon <= &alpha * &alpha * &ys * &ys
            }),
        );
        if keep.is_empty() {
            self.stop(i, "degree regularisation would empty X");
            return false;
        }
        let removed = self.x.len() - keep.len();
        let grew = !keep.is_subset(&self.x);
        self.check("1").require(i, !grew, "X grew");
        self.x = keep;
        if rec.removed_count != Some(removed) {
            self.stop(i, "removed_count differs from the replay");
            return false;
        }
        let ok = self.common_fields(rec, &alpha);
        if !ok {
            return false;
        }
        // p_i − p_{i−1} ≥ (removed/|X_i|) ε^{-1/2} α, squared with sign
        let lhs = &self.p - &p_prev;
        let coeff = &alpha * ratio_of(removed, self.x.len());
        let slack = &lhs * lhs.abs() - &coeff * &coeff / &self.params.epsilon;
        self.check("4").slack(i, slack);
        true
    }

    fn big_blue_step(&mut self, rec: &StepRecord, alpha: &Rational) -> bool {
        let i = rec.index;
        let c = self.c;
        let book = match cliques::best_blue_book(c, &self.x, &self.params.mu, self.params.spine_budget) {
            Ok(b) => b,
            Err(e) => {
                self.stop(i, &format!("blue book search failed on replay: {e}"));
                return false;
            }
        };
        let spine = rec.spine.clone().unwrap_or_default();
        if spine.iter().any(|&v| v >= c.n()) || spine != book.spine.to_vec() {
            self.stop(i, "recorded spine differs from the replayed book search");
            return false;
        }
        let s = VertexSet::from_indices(c.n(), spine.iter().copied());
        let mut pages = self.x.difference(&s);
        for v in s.iter() {
            pages = pages.intersection(c.blue_neighbours(v));
        }
        let bound_ok = rational::from_usize(2 * pages.len()) >= rational::pow(&self.params.mu, s.len()) * rational::from_usize(self.x.len());
        self.check("replay").require(i, bound_ok && c.is_clique(&s, Colour::Blue), "book page bound violated");
        if rec.pages != Some(pages.len()) {
            self.stop(i, "recorded page count differs");
            return false;
        }
        let shrank = pages.is_subset(&self.x);
        self.check("1").require(i, shrank, "X grew");
        self.x = pages;
        self.b = self.b.union(&s);
        self.spine_total += s.len();
        self.common_fields(rec, alpha)
    }

    fn central_step(&mut self, rec: &StepRecord, alpha: &Rational) -> bool {
        let i = rec.index;
        let c = self.c;
        let mu_x = &self.params.mu * rational::from_usize(self.x.len());
        let eligible: Vec<usize> = self
            .x
            .iter()
            .filter(|&v| rational::from_usize(c.blue_neighbours(v).intersection_len(&self.x)) <= mu_x)
            .collect();
        if eligible.is_empty() {
            self.stop(i, "no eligible central vertex on replay");
            return false;
        }

        // 3: |Y| Σ_z d_X(z)² ≥ e², slack = total weight
        let degs: Vec<usize> = self.y.iter().map(|z| c.red_neighbours(z).intersection_len(&self.x)).collect();
        let e: usize = degs.iter().sum();
        let sq: u128 = degs.iter().map(|&d| (d as u128) * (d as u128)).sum();
        let ys = self.y.len();
        let total_weight = (Rational::from_integer(BigInt::from(sq)) - ratio_of(e * e, ys)) / rational::from_usize(ys);
        self.check("3").slack(i, total_weight);

        let weights: Vec<(usize, Rational)> = eligible
            .iter()
            .map(|&v| (v, weight_pairwise(c, v, &self.x, &self.y, &self.p)))
            .collect();
        let best = weights
            .iter()
            .fold(None, |acc: Option<&(usize, Rational)>, w| match acc {
                Some(b) if b.1 >= w.1 => acc,
                _ => Some(w),
            })
            .expect("eligible is nonempty");
        let Some(x) = rec.central_vertex.filter(|&v| v < c.n()) else {
            self.stop(i, "central vertex missing");
            return false;
        };
        let Some(wx) = weights.iter().find(|(v, _)| *v == x).map(|(_, w)| w.clone()) else {
            self.check("beta_floor").fail(i, "central vertex is not eligible");
            self.stop(i, "central vertex is not an eligible vertex of X");
            return false;
        };
        let is_argmax = wx >= best.1;
        self.check("weight_bound").require(i, is_argmax, "central vertex weight is not maximal");
        if x != best.0 {
            self.stop(i, "central vertex differs from the lowest-index argmax");
            return false;
        }
        let blue_x = c.blue_neighbours(x).intersection(&self.x);
        let beta = ratio_of(blue_x.len(), self.x.len());
        let beta_ok = beta <= self.params.mu;
        self.check("beta_floor").require(i, beta_ok, "beta exceeds mu");
        if rec.beta.as_ref() != Some(&beta) {
            self.stop(i, "recorded beta differs");
            return false;
        }
        self.central.push(CentralInfo {
            index: i,
            vertex: x,
            weight: wx.clone(),
            is_argmax,
            x_prev: self.x.len(),
            beta: beta.clone(),
        });

        let red_x = c.red_neighbours(x).intersection(&self.x);
        let red_y = c.red_neighbours(x).intersection(&self.y);
        if red_x.is_empty() || red_y.is_empty() {
            self.stop(i, "step would empty X or Y");
            return false;
        }
        let red_density = ratio_of(c.red_edges_between(&red_x, &red_y), red_x.len() * red_y.len());
        let takes_red = red_density >= &self.p - alpha;
        let expected = if takes_red { StepKind::Red } else { StepKind::DensityBoost };
        if rec.kind != expected {
            self.stop(i, "step kind differs from the red-density test");
            return false;
        }
        let (p_prev, x_prev, y_prev) = (self.p.clone(), self.x.len(), self.y.len());
        let dy = red_y.len();
        let h_prev = self.height(&p_prev).unwrap_or(0);
        if takes_red {
            self.x = red_x;
            self.a.insert(x);
        } else {
            if blue_x.is_empty() {
                self.stop(i, "density boost would empty X");
                return false;
            }
            self.x = blue_x;
            self.b.insert(x);
        }
        self.y = red_y;
        if !self.common_fields(rec, alpha) {
            return false;
        }
        if takes_red {
            let gap = &self.p - &p_prev + alpha;
            self.check("5").slack(i, gap);
        } else {
            // p_i ≥ p + ((1−β)/β)α − α/(β|X|) + ω(x)|Y|/(β|X||N_R(x)∩Y|)
            let one = Rational::one();
            let xr = rational::from_usize(x_prev);
            let rhs = &p_prev + (&one - &beta) / &beta * alpha - alpha / (&beta * &xr)
                + &wx * rational::from_usize(y_prev) / (&beta * &xr * rational::from_usize(dy));
            let gap = &self.p - rhs;
            self.check("6").slack(i, gap);
            let h_new = self.height(&self.p).unwrap_or(0);
            let moderate = book::is_moderate_jump(h_new as i64 - h_prev as i64, &self.params.epsilon);
            if rec.moderate != Some(moderate) {
                self.stop(i, "moderate flag differs");
                return false;
            }
        }
        true
    }

    /// Halting rule that should fire after the replayed prefix, if any.
    fn halting_after(&self, last: Option<StepKind>) -> Option<HaltReason> {
        let c = self.c;
        let prm = self.params;
        match last {
            Some(StepKind::Red) if self.a.len() >= prm.k => return Some(HaltReason::RedClique),
            Some(StepKind::BigBlue | StepKind::DensityBoost) if self.b.len() >= prm.ell => {
                return Some(HaltReason::BlueClique)
            }
            _ => {}
        }
        if last == Some(StepKind::DegreeRegularise) {
            let mu_x = &prm.mu * rational::from_usize(self.x.len());
            let blue_deg = |v: usize| rational::from_usize(c.blue_neighbours(v).intersection_len(&self.x));
            let w = self.x.iter().filter(|&v| blue_deg(v) >= mu_x).count();
            if w >= prm.w_min {
                return None;
            }
            let eligible: Vec<usize> = self.x.iter().filter(|&v| blue_deg(v) <= mu_x).collect();
            if eligible.is_empty() {
                return Some(HaltReason::NoCentralVertex);
            }
            let x = eligible
                .iter()
                .map(|&v| (v, weight_pairwise(c, v, &self.x, &self.y, &self.p)))
                .fold(None, |acc: Option<(usize, Rational)>, w| match acc {
                    Some(ref b) if b.1 >= w.1 => acc,
                    _ => Some(w),
                })
                .map(|(v, _)| v)
                .expect("nonempty");
            let red_x = c.red_neighbours(x).intersection(&self.x);
            let red_y = c.red_neighbours(x).intersection(&self.y);
            if red_x.is_empty() || red_y.is_empty() {
                return Some(HaltReason::XExhausted);
            }
            let h = self.height(&self.p)?;
            let dens = ratio_of(c.red_edges_between(&red_x, &red_y), red_x.len() * red_y.len());
            if dens >= &self.p - self.alpha(h) {
                return None;
            }
            if c.blue_neighbours(x).intersection_len(&self.x) == 0 {
                return Some(HaltReason::XExhausted);
            }
            return None;
        }
        if self.x.len() <= prm.x_min {
            return Some(HaltReason::XSmall);
        }
        if self.p <= prm.p_floor {
            return Some(HaltReason::PFloor);
        }
        // a degree step would follow; it can only halt by emptying X
        let h = self.height(&self.p)?;
        let alpha = self.alpha(h);
        let ys = rational::from_usize(self.y.len());
        let any_kept = self.x.iter().any(|v| {
            let deficit = &self.p * &ys - rational::from_usize(c.red_neighbours(v).intersection_len(&self.y));
            !deficit.is_positive() || &deficit * &deficit * &prm.epsilon <= &alpha * &alpha * &ys * &ys
        });
        if any_kept {
            None
        } else {
            Some(HaltReason::XExhausted)
        }
    }
}

fn validate_structure(c: &Colouring, trace: &Trace) -> Result<(VertexSet, VertexSet), CheckError> {
    trace
        .params
        .validate()
        .map_err(|e| CheckError::Schema(e.to_string()))?;
    if trace.n != c.n() {
        return Err(CheckError::Provenance(format!("trace has n = {}, colouring has {}", trace.n, c.n())));
    }
    let n = c.n();
    let set = |v: &[usize], name: &str| -> Result<VertexSet, CheckError> {
        if let Some(bad) = v.iter().find(|&&u| u >= n) {
            return Err(CheckError::Provenance(format!("{name} contains vertex {bad} outside [0, {n})")));
        }
        Ok(VertexSet::from_indices(n, v.iter().copied()))
    };
    let x0 = set(&trace.x0, "x0")?;
    let y0 = set(&trace.y0, "y0")?;
    if x0.is_empty() || y0.is_empty() || !x0.is_disjoint(&y0) {
        return Err(CheckError::Provenance("x0 and y0 must be disjoint and nonempty".into()));
    }
    let p0 = c
        .red_density(&x0, &y0)
        .map_err(|e| CheckError::Provenance(e.to_string()))?;
    if p0 != trace.p0 {
        return Err(CheckError::Provenance(format!(
            "p0 {} does not match the recounted density {}",
            rational::to_ratio_string(&trace.p0),
            rational::to_ratio_string(&p0)
        )));
    }
    Ok((x0, y0))
}

fn replay<'a>(c: &'a Colouring, trace: &'a Trace) -> Result<Replay<'a>, CheckError> {
    let (x0, y0) = validate_structure(c, trace)?;
    let mut checks = BTreeMap::new();
    for id in EXACT_CHECKS {
        checks.insert(id, CheckResult::new());
    }
    let mut r = Replay {
        c,
        params: &trace.params,
        p0: trace.p0.clone(),
        x: x0,
        y: y0,
        a: VertexSet::empty(c.n()),
        b: VertexSet::empty(c.n()),
        p: trace.p0.clone(),
        checks,
        central: Vec::new(),
        densities: vec![trace.p0.clone()],
        spine_total: 0,
        complete: true,
    };
    if trace.x0_size != r.x.len() || trace.y0_size != r.y.len() {
        r.stop(0, "x0_size or y0_size differs from the vertex lists");
    }
    r.state_properties(0);

    let mut last: Option<StepKind> = None;
    let mut prev_sizes = (r.x.len(), r.y.len());
    for (pos, rec) in trace.steps.iter().enumerate() {
        if !r.complete {
            break;
        }
        let i = pos + 1;
        if rec.index != i || !Replay::fields_present(rec) {
            r.stop(i, "step index or kind-specific fields malformed");
            break;
        }
        let expect_degree = pos % 2 == 0;
        if (rec.kind == StepKind::DegreeRegularise) != expect_degree {
            r.stop(i, "degree regularisation does not alternate with the other steps");
            break;
        }
        if expect_degree {
            if let Some(reason) = r.halting_after(last) {
                r.stop(i, &format!("run should have halted ({})", reason.describe()));
                break;
            }
        }

        // 1: recorded sizes never grow; Y fixed on degree and big blue steps
        let fixed_y = matches!(rec.kind, StepKind::DegreeRegularise | StepKind::BigBlue);
        let sizes_ok = rec.x_size <= prev_sizes.0 && rec.y_size <= prev_sizes.1 && (!fixed_y || rec.y_size == prev_sizes.1);
        r.check("1").require(i, sizes_ok, "recorded X or Y sizes grow, or Y changes on a D/B step");
        prev_sizes = (rec.x_size, rec.y_size);

        let alpha_used = r.height(&r.p).map(|h| r.alpha(h));
        let Some(alpha_used) = alpha_used else {
            r.stop(i, "height undefined");
            break;
        };
        // 8: ε/k ≤ α_{h(p)} ≤ ε(p − q_0 + 1/k) when p ≥ q_0; α = ε/k when p ≤ q_1
        {
            let eps = r.params.epsilon.clone();
            let kr = rational::from_usize(r.params.k);
            let floor = &eps / &kr;
            let mut slack = &alpha_used - &floor;
            if r.p >= r.p0 {
                let cap = &eps * (&r.p - &r.p0 + kr.recip());
                let s2 = cap - &alpha_used;
                if s2 < slack {
                    slack = s2;
                }
            }
            let q1 = rung(&r.p0, &eps, r.params.k, 1);
            let at_floor_ok = r.p > q1 || alpha_used == floor;
            r.check("8").slack(i, slack);
            r.check("8").require(i, at_floor_ok, "alpha differs from ε/k below q_1");
        }

        let (x_before, y_before) = (r.x.clone(), r.y.clone());
        let ok = match rec.kind {
            StepKind::DegreeRegularise => r.degree_step(rec),
            StepKind::BigBlue => {
                let w = {
                    let mu_x = &r.params.mu * rational::from_usize(r.x.len());
                    r.x.iter()
                        .filter(|&v| rational::from_usize(c.blue_neighbours(v).intersection_len(&r.x)) >= mu_x)
                        .count()
                };
                if w < r.params.w_min {
                    r.stop(i, "big blue step without enough high blue degree vertices");
                    false
                } else {
                    r.big_blue_step(rec, &alpha_used)
                }
            }
            StepKind::Red | StepKind::DensityBoost => {
                let w = {
                    let mu_x = &r.params.mu * rational::from_usize(r.x.len());
                    r.x.iter()
                        .filter(|&v| rational::from_usize(c.blue_neighbours(v).intersection_len(&r.x)) >= mu_x)
                        .count()
                };
                if w >= r.params.w_min {
                    r.stop(i, "a big blue step should have been taken");
                    false
                } else {
                    r.central_step(rec, &alpha_used)
                }
            }
        };
        if !ok {
            break;
        }
        let contained = r.x.is_subset(&x_before) && r.y.is_subset(&y_before);
        r.check("1").require(i, contained, "replayed sets are not nested");
        r.state_properties(i);

        // 7: Δ_i = Σ_h Δ_i(h)
        {
            let p_prev = &r.densities[r.densities.len() - 2];
            let p_new = &r.densities[r.densities.len() - 1];
            let top = r.height(p_prev).unwrap_or(1).max(r.height(p_new).unwrap_or(1)) + 1;
            let eps = r.params.epsilon.clone();
            let k = r.params.k;
            let clamp = |p: &Rational, h: u64| -> Rational {
                let hi = rung(&r.p0, &eps, k, h);
                if h == 1 {
                    return if *p < hi { p.clone() } else { hi };
                }
                let lo = rung(&r.p0, &eps, k, h - 1);
                if *p < lo {
                    lo
                } else if *p > hi {
                    hi
                } else {
                    p.clone()
                }
            };
            let total: Rational = (1..=top).map(|h| clamp(p_new, h) - clamp(p_prev, h)).sum();
            let delta = p_new - p_prev;
            let slack = -(total - delta).abs();
            r.check("7").slack(i, slack);
        }
        last = Some(rec.kind);
    }

    if r.complete {
        let expected = r.halting_after(last);
        if expected != Some(trace.summary.halting_reason) {
            r.stop(trace.steps.len(), "halting reason differs from the replay");
        }
    }
    Ok(r)
}

/// Full replay of `trace` against `c`.
pub fn check_trace(c: &Colouring, trace: &Trace) -> Result<CheckReport, CheckError> {
    let mut r = replay(c, trace)?;
    let last = trace.steps.len();
    let sm = &trace.summary;
    let count = |k: StepKind| trace.steps.iter().filter(|s| s.kind == k).count();
    let (t, s, bb, d) = (
        count(StepKind::Red),
        count(StepKind::DensityBoost),
        count(StepKind::BigBlue),
        count(StepKind::DegreeRegularise),
    );

    // 9: bookkeeping (on the replayed sets when the replay completed)
    {
        let spine_sum: usize = trace.steps.iter().filter_map(|s| s.spine.as_ref()).map(Vec::len).sum();
        let mut ok = sm.t == t && sm.s == s && sm.big_blue_count == bb;
        ok &= d <= t + s + bb + 1;
        if r.complete {
            ok &= r.a.len() == t && s + r.spine_total == r.b.len() && spine_sum == r.spine_total;
        }
        r.check("9").require(last, ok, "step counts disagree with |A|, |B| or the summary");
    }
    if r.complete {
        let ok = sm.final_a == r.a.to_vec() && sm.final_y_size == r.y.len();
        r.check("replay").require(last, ok, "final A or |Y| differs from the replay");
        let beta = book::beta_harmonic(&trace.steps, &trace.params.mu);
        r.check("replay").require(last, sm.beta_harmonic == beta, "beta_harmonic differs");
        let red_book = book::final_book_is_red(c, &r.a, &r.y);
        r.check("2").require(last, red_book, "final (A, Y) is not a red book");
    }

    let diagnostics = diagnostics(trace, &r);
    let mut checks: BTreeMap<String, CheckResult> = r.checks.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    checks.insert(
        "10".into(),
        CheckResult {
            status: Status::Diagnostic,
            worst_slack: None,
            first_violation: None,
            detail: None,
        },
    );
    Ok(CheckReport { checks, diagnostics })
}

fn diagnostics(trace: &Trace, r: &Replay) -> BTreeMap<String, Rational> {
    let prm = &trace.params;
    let one = Rational::one();
    let mut out = BTreeMap::new();
    let steps = &trace.steps;
    let t = trace.summary.t;
    let s = trace.summary.s;
    let beta = &trace.summary.beta_harmonic;

    let three_eps = rational::int(3) * &prm.epsilon;
    let min_p = steps.iter().map(|st| &st.p).chain(std::iter::once(&trace.p0)).min().expect("p0 present");
    out.insert("bounding_p".into(), min_p - (&trace.p0 - three_eps));

    let y_final = rational::from_usize(trace.summary.final_y_size);
    let y_den = rational::pow(&trace.p0, s + t) * rational::from_usize(trace.y0_size);
    out.insert(
        "y_bound".into(),
        if y_den.is_zero() { y_final.clone() } else { &y_final / &y_den },
    );

    let x_final = rational::from_usize(steps.last().map_or(trace.x0_size, |st| st.x_size));
    let x_den = rational::pow(&prm.mu, prm.ell)
        * rational::pow(&(&one - &prm.mu), t)
        * rational::pow(&(beta / &prm.mu), s)
        * rational::from_usize(trace.x0_size);
    out.insert("x_bound".into(), &x_final / &x_den);

    let zig: Rational = steps
        .iter()
        .filter(|st| st.moderate == Some(true))
        .filter_map(|st| st.beta.as_ref())
        .filter(|b| b.is_positive())
        .map(|b| (&one - b) / b)
        .sum();
    out.insert("zigzag".into(), rational::from_usize(t) - zig);

    out.insert("s_bound".into(), beta / (&one - beta) * rational::from_usize(t) - rational::from_usize(s));
    out.insert(
        "beta_bound".into(),
        if s + t == 0 { Rational::zero() } else { beta - ratio_of(s, s + t) },
    );

    let k5 = rational::pow(&rational::from_usize(prm.k), 5);
    if let Some(m) = r
        .central
        .iter()
        .map(|ci| &ci.weight + rational::from_usize(ci.x_prev) / &k5)
        .min()
    {
        out.insert("weight_bound".into(), m);
    }
    let k2 = rational::pow(&rational::from_usize(prm.k), 2);
    if let Some(m) = steps
        .iter()
        .filter(|st| st.kind == StepKind::DensityBoost)
        .filter_map(|st| st.beta.as_ref())
        .min()
    {
        out.insert("beta_floor".into(), m - k2.recip());
    }
    out
}

/// Per-step margins `ω(x_i) + |X_{i−1}|/k^5` for every central choice, and
/// whether each central vertex had maximal weight among eligible vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightBoundReport {
    pub margins: Vec<(usize, Rational)>,
    pub argmax_ok: bool,
    pub first_violation: Option<usize>,
}

pub fn check_weight_bound(c: &Colouring, trace: &Trace) -> Result<WeightBoundReport, CheckError> {
    let r = replay(c, trace)?;
    let k5 = rational::pow(&rational::from_usize(trace.params.k), 5);
    let margins = r
        .central
        .iter()
        .map(|ci| (ci.index, &ci.weight + rational::from_usize(ci.x_prev) / &k5))
        .collect();
    let first = r.central.iter().find(|ci| !ci.is_argmax).map(|ci| ci.index);
    Ok(WeightBoundReport {
        margins,
        argmax_ok: first.is_none(),
        first_violation: first,
    })
}

/// `β_i` of every density-boost step against `1/k²`, and the exact `β_i ≤ μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaFloorReport {
    /// `(index, β_i, β_i − 1/k²)`.
    pub steps: Vec<(usize, Rational, Rational)>,
    pub le_mu_ok: bool,
    pub first_violation: Option<usize>,
}

pub fn check_beta_floor(trace: &Trace) -> BetaFloorReport {
    let k2 = rational::pow(&rational::from_usize(trace.params.k), 2).recip();
    let mut steps = Vec::new();
    let mut first = None;
    for st in trace.steps.iter().filter(|s| s.kind == StepKind::DensityBoost) {
        let beta = st.beta.clone().unwrap_or_else(Rational::zero);
        if beta > trace.params.mu && first.is_none() {
            first = Some(st.index);
        }
        steps.push((st.index, beta.clone(), beta - &k2));
    }
    BetaFloorReport {
        steps,
        le_mu_ok: first.is_none(),
        first_violation: first,
    }
}
