//! Monodromy of the multiple logarithm: observed jumps `∫_{p q} - ∫_p` along
//! certified loops, compared with closed forms.
//!
//! Positions `s` and `j` in this module are 1-based, as in the formulas.
//! Loops are oriented so that `∮ dlog g = +2πi` for the defining function `g`
//! of the encircled component.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chen::{evaluate_legs, iterated_integral, CompiledIntegrand, EvalConfig, Leg};
use crate::error::{Error, Result};
use crate::integrand::{build_multilog_integrand, Integrand};
use crate::paths::{compose, line_from_origin, loop_around, DivisorComponent, LoopOptions, PathSpec, WindingCertificate};
use crate::polylog::multilog_value;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    pub component: DivisorComponent,
    pub observed: C64,
    pub predicted: C64,
    pub abs_err: f64,
    /// `∮ dlog g` of the target's defining function along the loop.
    pub loop_dlog: C64,
    /// `∮ dlog g / 2πi` for every component of `X'_n`.
    pub winding_certificate: Vec<(DivisorComponent, C64)>,
}

impl MonodromyResult {
    fn new(component: DivisorComponent, observed: C64, predicted: C64, cert: WindingCertificate) -> Self {
        MonodromyResult {
            component,
            observed,
            predicted,
            abs_err: (observed - predicted).norm(),
            loop_dlog: cert.loop_dlog,
            winding_certificate: cert.windings,
        }
    }
}

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

/// `∫_{p q} - ∫_p` for a path `p` and a loop `q` at its end.
pub fn monodromy_delta(integrand: &Integrand, p: &PathSpec, q: &PathSpec, cfg: &EvalConfig) -> Result<C64> {
    let pq = compose(p, q)?;
    Ok(iterated_integral(integrand, &pq, cfg)?.value - iterated_integral(integrand, p, cfg)?.value)
}

/// `y(s) = ((1 - x_s x_{s+1})/(1 - x_s), ..., (1 - x_s...x_n)/(1 - x_s...x_{n-1}))`.
pub fn y_transform(x: &[C64], s: usize) -> Result<Vec<C64>> {
    let n = x.len();
    if s == 0 || s > n {
        return Err(Error::Precondition(format!("s = {s} outside 1..={n}")));
    }
    let one = C64::new(1.0, 0.0);
    let mut out = vec![];
    let mut prev = x[s - 1];
    for &xk in &x[s..] {
        let next = prev * xk;
        let den = one - prev;
        if den.norm() < 1e-14 {
            return Err(Error::Singular(format!("1 - x_{s}... vanishes in y({s})")));
        }
        out.push((one - next) / den);
        prev = next;
    }
    if s == n && (one - x[s - 1]).norm() < 1e-14 {
        return Err(Error::Singular(format!("x_{s} = 1")));
    }
    Ok(out)
}

/// `-2πi L_{s-1}(x_1..x_{s-1}) L_{n-s}(y(s))`.
pub fn predicted_dsn(x: &[C64], s: usize, cfg: &EvalConfig) -> Result<C64> {
    let y = y_transform(x, s)?;
    Ok(-two_pi_i() * multilog_value(&x[..s - 1], cfg)? * multilog_value(&y, cfg)?)
}

/// The loop used for a component: coordinate moved and certified path.
fn certified_loop(
    component: DivisorComponent,
    x: &[C64],
    c: usize,
    cfg: &EvalConfig,
) -> Result<(PathSpec, WindingCertificate)> {
    let opts = LoopOptions { delta_min: cfg.delta_min, ..LoopOptions::default() };
    loop_around(component, x, c, 1, &opts, cfg)
}

/// Jump of the multiple logarithm at `x` around `{x_s...x_n = 1}`, with `x_n`
/// moving, against the closed form.
pub fn check_dsn(x: &[C64], s: usize, cfg: &EvalConfig) -> Result<MonodromyResult> {
    let n = x.len();
    if s == 0 || s > n {
        return Err(Error::Precondition(format!("s = {s} outside 1..={n}")));
    }
    let component = DivisorComponent::ProductOne(s - 1, n - 1);
    let (q, cert) = certified_loop(component, x, n - 1, cfg)?;
    let integrand = build_multilog_integrand(n)?;
    let observed = monodromy_delta(&integrand, &line_from_origin(x)?, &q, cfg)?;
    Ok(MonodromyResult::new(component, observed, predicted_dsn(x, s, cfg)?, cert))
}

/// Jump of the multiple logarithm around a component with trivial
/// monodromy: a coordinate hyperplane, or `{x_i...x_j = 1}` with `j < n`.
pub fn check_trivial(x: &[C64], component: DivisorComponent, cfg: &EvalConfig) -> Result<MonodromyResult> {
    let n = x.len();
    let c = match component {
        DivisorComponent::CoordZero(j) if j < n => j,
        DivisorComponent::ProductOne(i, j) if i <= j && j + 1 < n => j,
        _ => {
            return Err(Error::Precondition(format!(
                "{component} is not a trivial-monodromy component in dimension {n}"
            )))
        }
    };
    let (q, cert) = certified_loop(component, x, c, cfg)?;
    let integrand = build_multilog_integrand(n)?;
    let observed = monodromy_delta(&integrand, &line_from_origin(x)?, &q, cfg)?;
    Ok(MonodromyResult::new(component, observed, C64::new(0.0, 0.0), cert))
}

/// `F_ab(x)` for 1-based `a <= b`: `F_aa = 1`, otherwise the multiple
/// logarithm of depth `b - a` at `y` built from `x_a, ..., x_b`.
pub fn f_eval(a: usize, b: usize, x: &[C64], cfg: &EvalConfig) -> Result<C64> {
    if a == 0 || a > b || b > x.len() {
        return Err(Error::Precondition(format!("F_{{{a},{b}}} needs 1 <= a <= b <= {}", x.len())));
    }
    if a == b {
        return Ok(C64::new(1.0, 0.0));
    }
    multilog_value(&y_transform(&x[a - 1..b], 1)?, cfg)
}

/// Loop families of the `F_{1n}` relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FFamily {
    /// Around `{x_j = 0}`, `1 <= j < n`.
    J0,
    /// Around `{x_1...x_j = 1}` moving `x_j`, `1 <= j < n`.
    OneJ,
    /// Around `{x_j...x_n = 1}` moving `x_n`, `2 <= j <= n`.
    JN,
}

/// Closed form of `(Θ(q) - id) F_{1n}` for a family.
pub fn predicted_f(family: FFamily, j: usize, x: &[C64], cfg: &EvalConfig) -> Result<C64> {
    let n = x.len();
    let f = |a, b| f_eval(a, b, x, cfg);
    Ok(match family {
        FFamily::J0 => {
            let mut acc = C64::new(0.0, 0.0);
            for s in j..n {
                acc += f(1, s)? * f(s + 1, n)?;
            }
            -two_pi_i() * acc
        }
        FFamily::OneJ => two_pi_i() * f(1, j)? * f(j + 1, n)?,
        FFamily::JN => -two_pi_i() * f(1, j - 1)? * f(j, n)?,
    })
}

/// Jump of `F_{1n}` along the family's loop, against the closed form.
///
/// `F_{1n}` is integrated as the multiple logarithm of depth `n - 1` along
/// the straight path to `y(1)` in `y`-space, then continued along the loop
/// in `x`-space with the letters rewritten in the `x` coordinates.
pub fn check_f_relation(x: &[C64], family: FFamily, j: usize, cfg: &EvalConfig) -> Result<MonodromyResult> {
    let n = x.len();
    let legal = match family {
        FFamily::J0 | FFamily::OneJ => (1..n).contains(&j),
        FFamily::JN => (2..=n).contains(&j),
    };
    if n < 2 || !legal {
        return Err(Error::Precondition(format!("{family:?} with j = {j} is not defined for n = {n}")));
    }
    let (component, c) = match family {
        FFamily::J0 => (DivisorComponent::CoordZero(j - 1), j - 1),
        FFamily::OneJ => (DivisorComponent::ProductOne(0, j - 1), j - 1),
        FFamily::JN => (DivisorComponent::ProductOne(j - 1, n - 1), n - 1),
    };
    let (q, cert) = certified_loop(component, x, c, cfg)?;
    let compiled = CompiledIntegrand::new(&build_multilog_integrand(n - 1)?);
    let in_x = compiled.map_forms(|f| f.pullback_y_transform(0));
    let (ly, lx) = (compiled.letters(), in_x.letters());
    let py = line_from_origin(&y_transform(x, 1)?)?;
    let base = evaluate_legs(&compiled, &[Leg { letters: &ly, path: &py }], cfg)?.value;
    let moved = evaluate_legs(&compiled, &[Leg { letters: &ly, path: &py }, Leg { letters: &lx, path: &q }], cfg)?.value;
    Ok(MonodromyResult::new(component, moved - base, predicted_f(family, j, x, cfg)?, cert))
}
