//! Multiple polylogarithms: power series, hyperlogarithm oracle and
//! continuation along paths.

use crate::chen::{evaluate_words_with, iterated_integral, EvalConfig, Evaluation, PoleLetters};
use crate::error::{Error, Result};
use crate::index::Bounds;
use crate::integrand::{build_integrand, build_multilog_integrand, Integrand};
use crate::paths::{line_from_origin, line_path, validate, PathSpec};
use crate::C64;

/// Largest coordinate modulus accepted by [`series_eval`].
pub const SERIES_RADIUS: f64 = 0.95;

/// Hard cap on the number of series terms.
const MAX_TERMS: usize = 5_000_000;

/// Number of terms `M` such that `Σ_{N>M} C(N-1, n-1) r^N <= tol`.
fn terms_needed(n: usize, r: f64, tol: f64) -> Result<usize> {
    if r == 0.0 {
        return Ok(1);
    }
    let ln_r = r.ln();
    let ln_binom = |big: usize| -> f64 {
        // ln C(big, n-1)
        let k = n - 1;
        (0..k).map(|i| ((big - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
    };
    let mut m = n;
    while m < MAX_TERMS {
        // term for N = m + 1 and the ratio to the next term
        let term = (ln_binom(m) + (m + 1) as f64 * ln_r).exp();
        let ratio = (m + 1) as f64 / (m + 2 - n) as f64 * r;
        if ratio < 1.0 && term / (1.0 - ratio) <= tol {
            return Ok(m);
        }
        m += if m < 1000 { 1 } else { m / 100 };
    }
    Err(Error::NonConvergence(format!("series at radius {r} needs more than {MAX_TERMS} terms")))
}

/// `Li_m(x)` by direct summation of the nested series, with a geometric
/// tail bound below `tol`. Requires `max |x_i| <= 0.95`.
pub fn series_eval(bounds: &Bounds, x: &[C64], tol: f64) -> Result<C64> {
    let n = bounds.depth();
    if x.len() != n {
        return Err(Error::Precondition(format!("point has {} coordinates, bounds need {n}", x.len())));
    }
    let r = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if r > SERIES_RADIUS || !r.is_finite() {
        return Err(Error::OutsideSeriesRegion { radius: r, limit: SERIES_RADIUS });
    }
    if x.iter().any(|z| *z == C64::new(0.0, 0.0)) {
        return Ok(C64::new(0.0, 0.0));
    }
    let terms = terms_needed(n, r, tol.max(1e-300))?;
    let m = bounds.m();
    // level[k] = sum over k_1 < ... < k_t = k of the first t factors
    let mut level = vec![C64::new(0.0, 0.0); terms + 1];
    let mut pw = C64::new(1.0, 0.0);
    for k in 1..=terms {
        pw *= x[0];
        level[k] = pw / (k as f64).powi(m[0] as i32);
    }
    for t in 1..n {
        let mut next = vec![C64::new(0.0, 0.0); terms + 1];
        let mut acc = C64::new(0.0, 0.0);
        let mut pw = C64::new(1.0, 0.0);
        for k in 1..=terms {
            pw *= x[t];
            next[k] = acc * pw / (k as f64).powi(m[t] as i32);
            acc += level[k];
        }
        level = next;
    }
    Ok(level.iter().sum())
}

/// `F(a_1, ..., a_n | z)` with all lower limits zero: the iterated integral
/// of `dt/(t - a_1), ..., dt/(t - a_n)` along the segment `[0, z]`, first
/// letter innermost.
pub fn hyperlog_eval(a: &[C64], z: C64, cfg: &EvalConfig) -> Result<C64> {
    if a.is_empty() {
        return Ok(C64::new(1.0, 0.0));
    }
    if z == C64::new(0.0, 0.0) {
        return Ok(C64::new(0.0, 0.0));
    }
    if a[0] == C64::new(0.0, 0.0) {
        return Err(Error::Precondition("the innermost letter must not have its pole at 0".into()));
    }
    for p in a {
        // distance from p to the segment [0, z]
        let t = ((p * z.conj()).re / z.norm_sqr()).clamp(0.0, 1.0);
        let d = (p - z * t).norm();
        if *p != C64::new(0.0, 0.0) && d < cfg.delta_min {
            return Err(Error::Singular(format!("pole {p} lies within {d:e} of the segment [0, {z}]")));
        }
    }
    let path = line_from_origin(&[z])?;
    let letters = PoleLetters { poles: a.to_vec() };
    let word: Vec<usize> = (0..a.len()).collect();
    Ok(evaluate_words_with(&letters, &[word], &path, cfg)?[0])
}

/// `Li_m(x) = (-1)^n F_K(a_1, 0^{m_1-1}, ..., a_n, 0^{m_n-1} | 1)` with
/// `a_i = 1/(x_i...x_n)`.
pub fn hyperlog_li(bounds: &Bounds, x: &[C64], cfg: &EvalConfig) -> Result<C64> {
    let n = bounds.depth();
    if x.len() != n {
        return Err(Error::Precondition(format!("point has {} coordinates, bounds need {n}", x.len())));
    }
    if x.iter().any(|z| *z == C64::new(0.0, 0.0)) {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut poles = vec![];
    for i in 0..n {
        let p: C64 = x[i..].iter().product();
        poles.push(p.inv());
        poles.extend(std::iter::repeat(C64::new(0.0, 0.0)).take(bounds.m()[i] as usize - 1));
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(hyperlog_eval(&poles, C64::new(1.0, 0.0), cfg)? * sign)
}

fn check_from_origin(path: &PathSpec, n: usize, cfg: &EvalConfig) -> Result<()> {
    path.check()?;
    if path.dim() != n {
        return Err(Error::InvalidPath(format!("path lives in C^{} but the function has {n} variables", path.dim())));
    }
    if path.start().iter().any(|z| z.norm() > 0.0) || !path.start_exempt {
        return Err(Error::InvalidPath("continuation paths start at the origin and are marked start_exempt".into()));
    }
    let report = validate(path, cfg.delta_min, 200);
    if !report.ok {
        return Err(Error::InvalidPath(format!(
            "path comes within {:e} of {} (segment {}, parameter {:.3})",
            report.min_clearance,
            report.min_component.map(|c| c.to_string()).unwrap_or_default(),
            report.min_segment + 1,
            report.min_param
        )));
    }
    Ok(())
}

fn integrate_checked(integrand: &Integrand, path: &PathSpec, cfg: &EvalConfig) -> Result<Evaluation> {
    check_from_origin(path, integrand.n, cfg)?;
    iterated_integral(integrand, path, cfg)
}

/// `Li_m` continued along `path`, which starts at the origin.
pub fn continue_eval(bounds: &Bounds, path: &PathSpec, cfg: &EvalConfig) -> Result<Evaluation> {
    integrate_checked(&build_integrand(bounds), path, cfg)
}

/// The multiple logarithm of depth `n` continued along `path`.
pub fn multilog_eval(n: usize, path: &PathSpec, cfg: &EvalConfig) -> Result<Evaluation> {
    integrate_checked(&build_multilog_integrand(n)?, path, cfg)
}

/// Principal value of the multiple logarithm: `-log(1 - x)` in depth one,
/// otherwise the series inside the polydisk and continuation along the
/// straight path from the origin outside it. The empty argument gives 1.
pub fn multilog_value(x: &[C64], cfg: &EvalConfig) -> Result<C64> {
    match x {
        [] => return Ok(C64::new(1.0, 0.0)),
        [z] => return Ok(-(C64::new(1.0, 0.0) - z).ln()),
        _ => {}
    }
    let bounds = Bounds::ones(x.len())?;
    match series_eval(&bounds, x, 1e-15) {
        Err(Error::OutsideSeriesRegion { .. }) => Ok(multilog_eval(x.len(), &line_from_origin(x)?, cfg)?.value),
        other => other,
    }
}

/// A path from the origin to `x` through the listed intermediate points.
pub fn polyline_from_origin(points: &[Vec<C64>]) -> Result<PathSpec> {
    let n = points.first().map_or(0, Vec::len);
    let mut prev = vec![C64::new(0.0, 0.0); n];
    let mut segs = vec![];
    for p in points {
        segs.extend(line_path(&prev, p)?.segments);
        prev = p.clone();
    }
    PathSpec::new(segs, true)
}
