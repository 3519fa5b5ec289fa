//! Certified maximization over axis-aligned boxes by interval branch and bound.
//!
//! Cells are refined level by level. A cell is retired once its interval
//! upper bound is within `tol` of the best point value seen, so the final
//! certificate is at most `best + tol` when the search converges. Cells are
//! evaluated in parallel, but every reduction runs over the fixed cell order,
//! so results do not depend on the number of workers.

use rayon::prelude::*;
use serde::Serialize;

use super::{BoundError, BoundFunction, Interval};

/// Bisection levels allowed below the initial grid.
pub const MAX_DEPTH: u32 = 30;

/// Live cells allowed at any level before the search gives up.
pub const MAX_CELLS: usize = 1 << 22;

/// Initial cells per non-degenerate axis.
pub const INITIAL_SPLITS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Region {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Self { x, y }
    }

    /// A segment `[lo, hi]` on the first axis.
    pub fn segment(lo: f64, hi: f64) -> Self {
        Self { x: (lo, hi), y: (0.0, 0.0) }
    }

    fn validate(&self) -> Result<(), BoundError> {
        let ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
        if ok(self.x) && ok(self.y) {
            Ok(())
        } else {
            Err(BoundError::Region(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaximizationResult {
    /// Certified: no point of the region exceeds this.
    pub upper_bound: f64,
    pub best_value: f64,
    pub best_point: (f64, f64),
    /// Smallest cell width reached on the first axis.
    pub resolution: f64,
    pub depth: u32,
    pub cells_evaluated: usize,
    /// False when the depth or cell cap stopped refinement early.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    x: (f64, f64),
    y: (f64, f64),
}

impl Cell {
    fn centre(&self) -> (f64, f64) {
        (0.5 * (self.x.0 + self.x.1), 0.5 * (self.y.0 + self.y.1))
    }

    fn split(&self, out: &mut Vec<Cell>) {
        let halves = |(lo, hi): (f64, f64)| {
            if lo == hi {
                vec![(lo, hi)]
            } else {
                let m = 0.5 * (lo + hi);
                vec![(lo, m), (m, hi)]
            }
        };
        for x in halves(self.x) {
            for y in halves(self.y) {
                out.push(Cell { x, y });
            }
        }
    }
}

fn grid(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    if lo == hi {
        return vec![(lo, hi)];
    }
    let n = INITIAL_SPLITS;
    let at = |i: usize| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 };
    (0..n).map(|i| (at(i), at(i + 1))).collect()
}

/// Maximizes a function given by a cell upper bound and a point evaluator.
/// A NaN upper bound is treated as unbounded.
pub fn branch_and_bound<U, P>(region: Region, tol: f64, upper: U, value: P) -> Result<MaximizationResult, BoundError>
where
    U: Fn(Interval, Interval) -> f64 + Sync,
    P: Fn(f64, f64) -> f64 + Sync,
{
    region.validate()?;
    if !(tol > 0.0) {
        return Err(BoundError::Region(format!("tolerance must be positive, got {tol}")));
    }
    let mut live: Vec<Cell> = grid(region.x.0, region.x.1)
        .into_iter()
        .flat_map(|x| grid(region.y.0, region.y.1).into_iter().map(move |y| Cell { x, y }))
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut best_point = live[0].centre();
    let mut retired = f64::NEG_INFINITY;
    let mut depth = 0;
    let mut cells_evaluated = 0;
    let mut resolution = region.x.1 - region.x.0;
    let mut converged = true;
    loop {
        let evaluated: Vec<(f64, f64)> = live
            .par_iter()
            .map(|c| {
                let ub = upper(Interval::new(c.x.0, c.x.1), Interval::new(c.y.0, c.y.1));
                let (px, py) = c.centre();
                (if ub.is_nan() { f64::INFINITY } else { ub }, value(px, py))
            })
            .collect();
        cells_evaluated += live.len();
        for (c, &(_, v)) in live.iter().zip(&evaluated) {
            if v > best {
                best = v;
                best_point = c.centre();
            }
        }
        resolution = resolution.min(live.iter().map(|c| c.x.1 - c.x.0).fold(f64::INFINITY, f64::min));
        let open: Vec<(Cell, f64)> = live
            .iter()
            .zip(&evaluated)
            .filter_map(|(c, &(ub, _))| {
                if ub <= best + tol {
                    retired = retired.max(ub);
                    None
                } else {
                    Some((*c, ub))
                }
            })
            .collect();
        if open.is_empty() {
            break;
        }
        if depth >= MAX_DEPTH || open.len() * 4 > MAX_CELLS {
            converged = false;
            retired = open.iter().map(|&(_, ub)| ub).fold(retired, f64::max);
            break;
        }
        let mut next = Vec::with_capacity(open.len() * 4);
        for (c, _) in &open {
            c.split(&mut next);
        }
        live = next;
        depth += 1;
    }
    Ok(MaximizationResult {
        upper_bound: retired.max(best),
        best_value: best,
        best_point,
        resolution,
        depth,
        cells_evaluated,
        converged,
    })
}

/// Certified maximum of `min{a, b}` over `region`.
pub fn maximize_min_on_region(
    a: &BoundFunction,
    b: &BoundFunction,
    region: Region,
    tol: f64,
) -> Result<MaximizationResult, BoundError> {
    region.validate()?;
    let whole = (Interval::new(region.x.0, region.x.1), Interval::new(region.y.0, region.y.1));
    a.enclose(whole.0, whole.1)?;
    b.enclose(whole.0, whole.1)?;
    branch_and_bound(
        region,
        tol,
        |x, y| {
            let ea = a.enclose(x, y).map_or(f64::INFINITY, |i| i.hi);
            let eb = b.enclose(x, y).map_or(f64::INFINITY, |i| i.hi);
            ea.min(eb)
        },
        |x, y| {
            let va = a.eval(x, y).unwrap_or(f64::NEG_INFINITY);
            let vb = b.eval(x, y).unwrap_or(f64::NEG_INFINITY);
            va.min(vb)
        },
    )
}
