//! Single-field trace mutations used as negative controls for the checker.

use crate::book::{HaltReason, StepKind, Trace};
use crate::rational::{self, Rational};
use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

/// Applies one randomly chosen semantic mutation to a copy of `trace` and
/// describes it. Only fields whose change alters the meaning of the trace
/// are touched.
pub fn mutate<R: Rng>(trace: &Trace, rng: &mut R) -> (Trace, String) {
    loop {
        let which = rng.gen_range(0..26);
        if let Some(m) = apply(trace, which, rng) {
            return m;
        }
    }
}

fn bump(r: &Rational) -> Rational {
    Rational::new(r.numer() + BigInt::one(), r.denom().clone())
}

fn apply<R: Rng>(trace: &Trace, which: u32, rng: &mut R) -> Option<(Trace, String)> {
    let mut t = trace.clone();
    let n = t.n;
    let has_steps = !t.steps.is_empty();
    let pos = if has_steps { rng.gen_range(0..t.steps.len()) } else { 0 };
    let desc = match which {
        0..=12 if !has_steps => return None,
        0 => {
            let st = &mut t.steps[pos];
            st.p = bump(&st.p);
            format!("step {} p numerator +1", st.index)
        }
        1 => {
            t.steps[pos].h += 1;
            format!("step {} h +1", t.steps[pos].index)
        }
        2 => {
            let st = &mut t.steps[pos];
            st.alpha = &st.alpha * rational::int(2);
            format!("step {} alpha doubled", st.index)
        }
        3 => {
            let st = &mut t.steps[pos];
            let b = st.beta.as_mut()?;
            *b = &*b + rational::ratio(1, 7);
            format!("step {} beta +1/7", st.index)
        }
        4 => {
            let st = &mut t.steps[pos];
            let v = st.central_vertex.as_mut()?;
            *v = (*v + 1) % n;
            format!("step {} central vertex shifted", st.index)
        }
        5 => {
            let st = &mut t.steps[pos];
            st.kind = match st.kind {
                StepKind::DegreeRegularise => StepKind::BigBlue,
                StepKind::BigBlue => StepKind::Red,
                StepKind::Red => StepKind::DensityBoost,
                StepKind::DensityBoost => StepKind::DegreeRegularise,
            };
            format!("step {} kind changed", st.index)
        }
        6 => {
            t.steps[pos].x_size += 1;
            format!("step {} x_size +1", t.steps[pos].index)
        }
        7 => {
            t.steps[pos].y_size += 1;
            format!("step {} y_size +1", t.steps[pos].index)
        }
        8 => {
            *t.steps[pos].removed_count.as_mut()? += 1;
            format!("step {} removed_count +1", t.steps[pos].index)
        }
        9 => {
            t.steps[pos].spine.as_mut()?.pop();
            format!("step {} spine vertex dropped", t.steps[pos].index)
        }
        10 => {
            *t.steps[pos].pages.as_mut()? += 1;
            format!("step {} pages +1", t.steps[pos].index)
        }
        11 => {
            let m = t.steps[pos].moderate.as_mut()?;
            *m = !*m;
            format!("step {} moderate flipped", t.steps[pos].index)
        }
        12 => {
            t.steps[pos].index += 1;
            format!("step {} index +1", pos + 1)
        }
        13 => {
            t.summary.t += 1;
            "summary t +1".into()
        }
        14 => {
            t.summary.s += 1;
            "summary s +1".into()
        }
        15 => {
            t.summary.big_blue_count += 1;
            "summary big_blue_count +1".into()
        }
        16 => {
            t.summary.beta_harmonic = &t.summary.beta_harmonic + rational::ratio(1, 3);
            "summary beta_harmonic +1/3".into()
        }
        17 => {
            let all = HaltReason::ALL;
            let at = all.iter().position(|r| *r == t.summary.halting_reason).unwrap();
            t.summary.halting_reason = all[(at + 1 + rng.gen_range(0..all.len() - 1)) % all.len()];
            "summary halting_reason changed".into()
        }
        18 => {
            let fa = &mut t.summary.final_a;
            if fa.is_empty() || rng.gen_bool(0.5) {
                let v = (0..n).find(|v| !fa.contains(v))?;
                fa.push(v);
                fa.sort_unstable();
            } else {
                fa.pop();
            }
            "summary final_A changed".into()
        }
        19 => {
            t.summary.final_y_size += 1;
            "summary final_Y_size +1".into()
        }
        20 => {
            t.p0 = &t.p0 + rational::ratio(1, 1000);
            "p0 +1/1000".into()
        }
        21 => {
            t.x0_size += 1;
            "x0_size +1".into()
        }
        22 => {
            t.y0_size += 1;
            "y0_size +1".into()
        }
        23 if has_steps => {
            t.params.epsilon = &t.params.epsilon / rational::int(2);
            "epsilon halved".into()
        }
        24 if has_steps => {
            t.params.k += 1;
            "k +1".into()
        }
        25 => {
            t.x0.remove(0);
            "first vertex of x0 dropped".into()
        }
        _ => return None,
    };
    Some((t, desc))
}
