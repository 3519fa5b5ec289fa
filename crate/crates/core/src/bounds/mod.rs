//! Closed-form bound functions of the diagonal and near-diagonal arguments,
//! their certified maximization, and the supporting binomial inequalities.
//!
//! Base-2 functions: `h2`, `f1`, `f2`, `f`, `g`, `G_mu`. Natural-log
//! functions: `hstar`, `fstar_nu`, `Gstar_mu`.

pub mod binomial;
pub mod claims;
pub mod interval;
pub mod search;

use std::f64::consts::LN_2;

use thiserror::Error;

pub use interval::{Interval, Real};

#[derive(Debug, Error, PartialEq)]
pub enum BoundError {
    #[error("{function} is undefined at (x, y) = ({x}, {y})")]
    Domain { function: &'static str, x: f64, y: f64 },
    #[error("bad parameter for {function}: {msg}")]
    Parameter { function: &'static str, msg: String },
    #[error("bad region: {0}")]
    Region(String),
}

/// `f_2` subtracts this multiple of `(1−x)/(2−x)` from `f_1`: `log₂(e)/40`.
pub const F2_CORRECTION: f64 = 1.0 / (40.0 * LN_2);

/// Where `f` switches from `f_1` to `f_2`.
pub const F_SWITCH: f64 = 0.75;

pub fn h2<R: Real>(p: R) -> R {
    hstar(p) * R::c(1.0 / LN_2)
}

pub fn hstar<R: Real>(p: R) -> R {
    -(p.xlnx() + (R::c(1.0) - p).xlnx())
}

/// `x + y + (2−x)·h(1/(2−x))`, written as `x + y + [(2−x)ln(2−x) − (1−x)ln(1−x)]/ln 2`.
pub fn f1<R: Real>(x: R, y: R) -> R {
    x + y + ((R::c(2.0) - x).xlnx() - (R::c(1.0) - x).xlnx()) * R::c(1.0 / LN_2)
}

pub fn f2<R: Real>(x: R, y: R) -> R {
    f1(x, y) - R::c(F2_CORRECTION) * (R::c(1.0) - x) / (R::c(2.0) - x)
}

/// `log₂(1/μ) + x log₂(1/(1−μ)) + y log₂(μ(x+y)/y)`.
pub fn g_mu<R: Real>(mu: R, x: R, y: R) -> R {
    (-mu.ln() - x * (R::c(1.0) - mu).ln() + y * mu.ln() + R::y_ln_ratio(x, y)) * R::c(1.0 / LN_2)
}

/// `θ ln(1/μ) + x ln(1/(1−μ)) + y ln(μ(x+y)/y)`, with `θ = ℓ/k`.
pub fn gstar_mu<R: Real>(mu: R, theta: R, x: R, y: R) -> R {
    -(theta * mu.ln()) - x * (R::c(1.0) - mu).ln() + y * mu.ln() + R::y_ln_ratio(x, y)
}

/// `(x+y) ln(1/ν) + (1+θ−x)·h*(θ/(1+θ−x))`, expanded into `t ln t` terms.
pub fn fstar_nu<R: Real>(nu: R, theta: R, x: R, y: R) -> R {
    -((x + y) * nu.ln()) + (R::c(1.0) + theta - x).xlnx() - theta.xlnx() - (R::c(1.0) - x).xlnx()
}

/// `f` on an interval box: the `f_1` branch left of the switch, `f_2` from it on.
pub fn f_interval(x: Interval, y: Interval) -> Interval {
    if x.hi < F_SWITCH {
        f1(x, y)
    } else if x.lo >= F_SWITCH {
        f2(x, y)
    } else {
        f1(Interval::new(x.lo, F_SWITCH), y).hull(&f2(Interval::new(F_SWITCH, x.hi), y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundFunction {
    H2,
    HStar,
    F1,
    F2,
    F,
    G,
    GMu { mu: f64 },
    FStarNu { nu: f64, theta: f64 },
    GStarMu { mu: f64, theta: f64 },
}

impl BoundFunction {
    pub fn id(&self) -> &'static str {
        match self {
            Self::H2 => "h2",
            Self::HStar => "hstar",
            Self::F1 => "f1",
            Self::F2 => "f2",
            Self::F => "f",
            Self::G => "g",
            Self::GMu { .. } => "G_mu",
            Self::FStarNu { .. } => "fstar_nu",
            Self::GStarMu { .. } => "Gstar_mu",
        }
    }

    fn is_univariate(&self) -> bool {
        matches!(self, Self::H2 | Self::HStar)
    }

    fn check(&self, x: f64, y: f64) -> Result<(), BoundError> {
        let function = self.id();
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        let param = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(BoundError::Parameter {
                    function,
                    msg: msg.to_string(),
                })
            }
        };
        match *self {
            Self::GMu { mu } => param(open_unit(mu), "μ must lie in (0, 1)")?,
            Self::GStarMu { mu, theta } => {
                param(open_unit(mu), "μ must lie in (0, 1)")?;
                param(theta > 0.0 && theta.is_finite(), "θ must be positive")?;
            }
            Self::FStarNu { nu, theta } => {
                param(open_unit(nu), "ν must lie in (0, 1)")?;
                param(theta > 0.0 && theta.is_finite(), "θ must be positive")?;
            }
            _ => {}
        }
        let ok = unit(x) && (self.is_univariate() || unit(y));
        if ok {
            Ok(())
        } else {
            Err(BoundError::Domain { function, x, y })
        }
    }

    /// Value at `(x, y)`; univariate functions ignore `y`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64, BoundError> {
        self.check(x, y)?;
        Ok(match *self {
            Self::H2 => h2(x),
            Self::HStar => hstar(x),
            Self::F1 => f1(x, y),
            Self::F2 => f2(x, y),
            Self::F if x < F_SWITCH => f1(x, y),
            Self::F => f2(x, y),
            Self::G => g_mu(0.4, x, y),
            Self::GMu { mu } => g_mu(mu, x, y),
            Self::FStarNu { nu, theta } => fstar_nu(nu, theta, x, y),
            Self::GStarMu { mu, theta } => gstar_mu(mu, theta, x, y),
        })
    }

    /// Enclosure of the function over the box `x × y`.
    pub fn enclose(&self, x: Interval, y: Interval) -> Result<Interval, BoundError> {
        self.check(x.lo, y.lo)?;
        self.check(x.hi, y.hi)?;
        let c = Interval::point;
        Ok(match *self {
            Self::H2 => h2(x),
            Self::HStar => hstar(x),
            Self::F1 => f1(x, y),
            Self::F2 => f2(x, y),
            Self::F => f_interval(x, y),
            Self::G => g_mu(c(0.4), x, y),
            Self::GMu { mu } => g_mu(c(mu), x, y),
            Self::FStarNu { nu, theta } => fstar_nu(c(nu), c(theta), x, y),
            Self::GStarMu { mu, theta } => gstar_mu(c(mu), c(theta), x, y),
        })
    }

    /// Closed-form `∂/∂x` for `0 ≤ x < 1` (`0 < x < 1` for the entropies).
    pub fn derivative_x(&self, x: f64, y: f64) -> Result<f64, BoundError> {
        self.check(x, y)?;
        let interior = x < 1.0 && (x > 0.0 || !self.is_univariate());
        if !interior {
            return Err(BoundError::Domain {
                function: self.id(),
                x,
                y,
            });
        }
        let df1 = ((2.0 - 2.0 * x) / (2.0 - x)).log2();
        let df2 = df1 + F2_CORRECTION / ((2.0 - x) * (2.0 - x));
        // d/dx of y ln((x+y)/y)
        let dratio = if y == 0.0 { 0.0 } else { y / (x + y) };
        Ok(match *self {
            Self::H2 => ((1.0 - x) / x).log2(),
            Self::HStar => ((1.0 - x) / x).ln(),
            Self::F1 => df1,
            Self::F2 => df2,
            Self::F if x < F_SWITCH => df1,
            Self::F => df2,
            Self::G => (5.0f64 / 3.0).log2() + dratio / LN_2,
            Self::GMu { mu } => -(1.0 - mu).log2() + dratio / LN_2,
            Self::FStarNu { nu, theta } => -nu.ln() - ((1.0 + theta - x) / (1.0 - x)).ln(),
            Self::GStarMu { mu, .. } => -(1.0 - mu).ln() + dratio,
        })
    }
}
