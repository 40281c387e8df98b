//! Piecewise paths in `C^n` made of straight lines and single-coordinate
//! circular arcs, their clearance from the divisor, and certified loops.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chen::{evaluate_words, EvalConfig};
use crate::error::{Error, Result};
use crate::forms::{LogAtom, OneForm};
use crate::C64;

/// Irreducible component of `X'_n`, with 0-based coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DivisorComponent {
    /// `{x_j = 0}`.
    CoordZero(usize),
    /// `{x_j...x_k = 1}`.
    ProductOne(usize, usize),
}

impl fmt::Display for DivisorComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorComponent::CoordZero(j) => write!(f, "Z:{}", j + 1),
            DivisorComponent::ProductOne(j, k) => write!(f, "D:{},{}", j + 1, k + 1),
        }
    }
}

impl DivisorComponent {
    /// The atom `dlog g` of the defining function `g`.
    pub fn atom(&self) -> LogAtom {
        match *self {
            DivisorComponent::CoordZero(j) => LogAtom::coord(j),
            DivisorComponent::ProductOne(j, k) => LogAtom::one_minus(j, k),
        }
    }

    /// `|g(x)|`, the clearance proxy.
    pub fn proxy(&self, x: &[C64]) -> f64 {
        self.atom().defining_value(x).norm()
    }

    pub fn contains_coordinate(&self, c: usize) -> bool {
        match *self {
            DivisorComponent::CoordZero(j) => j == c,
            DivisorComponent::ProductOne(j, k) => j <= c && c <= k,
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let ok = match *self {
            DivisorComponent::CoordZero(j) => j < n,
            DivisorComponent::ProductOne(j, k) => j <= k && k < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("component {self} does not exist in dimension {n}")))
        }
    }
}

/// Every component of `X'_n`: coordinate hyperplanes first, then products.
pub fn all_components(n: usize) -> Vec<DivisorComponent> {
    let mut out: Vec<DivisorComponent> = (0..n).map(DivisorComponent::CoordZero).collect();
    for j in 0..n {
        for k in j..n {
            out.push(DivisorComponent::ProductOne(j, k));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PathSegment {
    Line {
        from: Vec<C64>,
        to: Vec<C64>,
    },
    /// Coordinate `coordinate` (0-based) runs along `center + radius e^{iθ}`
    /// from `theta0` to `theta1`; the other coordinates are taken from `base`.
    Arc {
        base: Vec<C64>,
        coordinate: usize,
        center: C64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl PathSegment {
    pub fn dim(&self) -> usize {
        match self {
            PathSegment::Line { from, .. } => from.len(),
            PathSegment::Arc { base, .. } => base.len(),
        }
    }

    pub fn point(&self, tau: f64) -> Vec<C64> {
        match self {
            PathSegment::Line { from, to } => from.iter().zip(to).map(|(a, b)| a + (b - a) * tau).collect(),
            PathSegment::Arc { base, coordinate, center, radius, theta0, theta1 } => {
                let mut x = base.clone();
                let th = theta0 + (theta1 - theta0) * tau;
                x[*coordinate] = center + C64::from_polar(*radius, th);
                x
            }
        }
    }

    /// Derivative with respect to the segment parameter.
    pub fn velocity(&self, tau: f64) -> Vec<C64> {
        match self {
            PathSegment::Line { from, to } => from.iter().zip(to).map(|(a, b)| b - a).collect(),
            PathSegment::Arc { base, coordinate, radius, theta0, theta1, .. } => {
                let mut v = vec![C64::new(0.0, 0.0); base.len()];
                let th = theta0 + (theta1 - theta0) * tau;
                v[*coordinate] = C64::new(0.0, theta1 - theta0) * C64::from_polar(*radius, th);
                v
            }
        }
    }

    pub fn start(&self) -> Vec<C64> {
        self.point(0.0)
    }

    pub fn end(&self) -> Vec<C64> {
        self.point(1.0)
    }

    pub fn inverse(&self) -> PathSegment {
        match self.clone() {
            PathSegment::Line { from, to } => PathSegment::Line { from: to, to: from },
            PathSegment::Arc { base, coordinate, center, radius, theta0, theta1 } => {
                PathSegment::Arc { base, coordinate, center, radius, theta0: theta1, theta1: theta0 }
            }
        }
    }

    fn check(&self) -> Result<()> {
        let finite = |v: &[C64]| v.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        match self {
            PathSegment::Line { from, to } => {
                if from.len() != to.len() || from.is_empty() || !finite(from) || !finite(to) {
                    return Err(Error::InvalidPath("line endpoints must be finite and of equal dimension".into()));
                }
            }
            PathSegment::Arc { base, coordinate, center, radius, theta0, theta1 } => {
                if *coordinate >= base.len() || !finite(base) || !finite(&[*center]) {
                    return Err(Error::InvalidPath("arc coordinate out of range or non-finite data".into()));
                }
                if !(*radius > 0.0 && radius.is_finite() && theta0.is_finite() && theta1.is_finite()) {
                    return Err(Error::InvalidPath(format!("arc radius must be positive, got {radius}")));
                }
            }
        }
        Ok(())
    }
}

/// Monotone reparameterization `s -> s^p` applied to every segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Warp {
    #[default]
    Identity,
    Power { p: f64 },
}

impl Warp {
    /// `(τ(s), dτ/ds)`.
    pub fn apply(&self, s: f64) -> (f64, f64) {
        match *self {
            Warp::Identity => (s, 1.0),
            Warp::Power { p } => (s.powf(p), p * s.powf(p - 1.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub segments: Vec<PathSegment>,
    /// The start may lie on coordinate hyperplanes (typically the origin).
    #[serde(default)]
    pub start_exempt: bool,
    #[serde(default)]
    pub warp: Warp,
}

/// Endpoints closer than this are considered equal.
pub const ENDPOINT_TOL: f64 = 1e-12;

fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

impl PathSpec {
    pub fn new(segments: Vec<PathSegment>, start_exempt: bool) -> Result<Self> {
        let p = PathSpec { segments, start_exempt, warp: Warp::Identity };
        p.check()?;
        Ok(p)
    }

    /// Structural checks: nonempty, well-formed segments, matching endpoints.
    pub fn check(&self) -> Result<()> {
        let first = self.segments.first().ok_or_else(|| Error::InvalidPath("path has no segments".into()))?;
        let n = first.dim();
        for s in &self.segments {
            s.check()?;
            if s.dim() != n {
                return Err(Error::InvalidPath("segments have different dimensions".into()));
            }
        }
        for w in self.segments.windows(2) {
            if dist(&w[0].end(), &w[1].start()) > ENDPOINT_TOL {
                return Err(Error::InvalidPath("consecutive segments do not meet".into()));
            }
        }
        if let Warp::Power { p } = self.warp {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::InvalidPath(format!("warp exponent must be at least 1, got {p}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.segments[0].dim()
    }

    pub fn start(&self) -> Vec<C64> {
        self.segments[0].start()
    }

    pub fn end(&self) -> Vec<C64> {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn with_warp(mut self, warp: Warp) -> Self {
        self.warp = warp;
        self
    }
}

pub fn line_path(from: &[C64], to: &[C64]) -> Result<PathSpec> {
    PathSpec::new(vec![PathSegment::Line { from: from.to_vec(), to: to.to_vec() }], false)
}

/// Straight path from the origin, exempt at its start.
pub fn line_from_origin(to: &[C64]) -> Result<PathSpec> {
    let mut p = line_path(&vec![C64::new(0.0, 0.0); to.len()], to)?;
    p.start_exempt = true;
    Ok(p)
}

/// `p` followed by `q`; keeps the exemption and warp of `p`.
pub fn compose(p: &PathSpec, q: &PathSpec) -> Result<PathSpec> {
    if p.dim() != q.dim() || dist(&p.end(), &q.start()) > ENDPOINT_TOL {
        return Err(Error::InvalidPath("paths are not composable: end of the first is not the start of the second".into()));
    }
    let mut segments = p.segments.clone();
    segments.extend(q.segments.iter().cloned());
    Ok(PathSpec { segments, start_exempt: p.start_exempt, warp: p.warp })
}

pub fn inverse(p: &PathSpec) -> PathSpec {
    PathSpec { segments: p.segments.iter().rev().map(PathSegment::inverse).collect(), start_exempt: false, warp: p.warp }
}

/// The component of `X'_n` with the smallest proxy at `x`, and that proxy.
pub fn clearance(x: &[C64]) -> (DivisorComponent, f64) {
    all_components(x.len())
        .into_iter()
        .map(|c| (c, c.proxy(x)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one component")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub segment: usize,
    pub param: f64,
    pub component: DivisorComponent,
    pub proxy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub min_clearance: f64,
    pub min_component: Option<DivisorComponent>,
    pub min_segment: usize,
    pub min_param: f64,
    pub violations: Vec<Violation>,
}

/// Sample every segment and compare divisor proxies with `delta_min`.
/// Coordinate hyperplanes are not checked on the first segment of an
/// exempt path.
pub fn validate(path: &PathSpec, delta_min: f64, samples_per_segment: usize) -> ValidationReport {
    let n = path.dim();
    let comps = all_components(n);
    let mut report = ValidationReport {
        ok: true,
        min_clearance: f64::INFINITY,
        min_component: None,
        min_segment: 0,
        min_param: 0.0,
        violations: vec![],
    };
    let samples = samples_per_segment.max(2);
    for (si, seg) in path.segments.iter().enumerate() {
        let exempt = path.start_exempt && si == 0;
        for c in &comps {
            if exempt && matches!(c, DivisorComponent::CoordZero(_)) {
                continue;
            }
            let f = |tau: f64| c.proxy(&seg.point(tau));
            let grid: Vec<f64> = (0..=samples).map(|k| f(k as f64 / samples as f64)).collect();
            for k in 0..=samples {
                let is_local_min = (k == 0 || grid[k] <= grid[k - 1]) && (k == samples || grid[k] <= grid[k + 1]);
                if !is_local_min {
                    continue;
                }
                let lo = k.saturating_sub(1) as f64 / samples as f64;
                let hi = (k + 1).min(samples) as f64 / samples as f64;
                let (tau, d) = golden_min(&f, lo, hi, k as f64 / samples as f64, grid[k]);
                if d < report.min_clearance {
                    report.min_clearance = d;
                    report.min_component = Some(*c);
                    report.min_segment = si;
                    report.min_param = tau;
                }
                if d < delta_min {
                    report.ok = false;
                    if report.violations.len() < 32 {
                        report.violations.push(Violation { segment: si, param: tau, component: *c, proxy: d });
                    }
                }
            }
        }
    }
    report
}

/// Golden-section refinement of a sampled local minimum on `[lo, hi]`.
fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, best_t: f64, best: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut bt, mut bv) = (best_t, best);
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..60 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    for (t, v) in [(a, fa), (b, fb)] {
        if v < bv {
            bt = t;
            bv = v;
        }
    }
    (bt, bv)
}

/// `∮ dlog g / 2πi` for every component of `X'_n` along `path`.
pub fn winding_vector(path: &PathSpec, cfg: &EvalConfig) -> Result<Vec<(DivisorComponent, C64)>> {
    let n = path.dim();
    let comps = all_components(n);
    let forms: Vec<OneForm> = comps
        .iter()
        .map(|c| {
            let mut f = OneForm::zero();
            f.add_atom(c.atom(), 1);
            f
        })
        .collect();
    let words: Vec<Vec<usize>> = (0..forms.len()).map(|k| vec![k]).collect();
    let vals = evaluate_words(&forms, &words, path, cfg)?;
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    Ok(comps.into_iter().zip(vals).map(|(c, v)| (c, v / two_pi_i)).collect())
}

/// Certified winding data of a loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingCertificate {
    pub target: DivisorComponent,
    /// `∮ dlog g` of the target's defining function.
    pub loop_dlog: C64,
    pub windings: Vec<(DivisorComponent, C64)>,
}

impl WindingCertificate {
    /// Whether the target winds `sign` times and every other component zero
    /// times, within `tol`.
    pub fn matches(&self, sign: i32, tol: f64) -> bool {
        self.windings.iter().all(|(c, w)| {
            let want = if *c == self.target { sign as f64 } else { 0.0 };
            (w - want).norm() <= tol
        })
    }
}

pub fn certify(path: &PathSpec, target: DivisorComponent, cfg: &EvalConfig) -> Result<WindingCertificate> {
    let windings = winding_vector(path, cfg)?;
    let w = windings
        .iter()
        .find(|(c, _)| *c == target)
        .map(|(_, w)| *w)
        .ok_or_else(|| Error::Precondition(format!("{target} is not a component in dimension {}", path.dim())))?;
    Ok(WindingCertificate { target, loop_dlog: w * C64::new(0.0, 2.0 * PI), windings })
}

/// Points of the `x_c`-line (other coordinates fixed at `base`) where some
/// component of `X'_n` meets it.
pub fn punctures(base: &[C64], c: usize) -> Vec<(DivisorComponent, C64)> {
    let n = base.len();
    let mut out = vec![(DivisorComponent::CoordZero(c), C64::new(0.0, 0.0))];
    for j in 0..=c {
        for k in c..n {
            let q: C64 = (j..=k).filter(|&t| t != c).map(|t| base[t]).product();
            if q.norm() > 1e-300 {
                out.push((DivisorComponent::ProductOne(j, k), q.inv()));
            }
        }
    }
    out
}

/// Loop options beyond the component and base point.
#[derive(Debug, Clone, Copy)]
pub struct LoopOptions {
    /// Circle radius; defaults to `0.1` times the distance from the target
    /// puncture to the nearest other puncture.
    pub radius: Option<f64>,
    pub delta_min: f64,
    /// Tolerance on `∮ dlog g - sign 2πi`.
    pub dlog_tol: f64,
    /// Tolerance on the winding numbers of the other components.
    pub winding_tol: f64,
}

impl Default for LoopOptions {
    fn default() -> Self {
        LoopOptions { radius: None, delta_min: 1e-3, dlog_tol: 1e-8, winding_tol: 1e-6 }
    }
}

/// A loop at `base` moving only coordinate `c`: a straight approach towards
/// the puncture of `component`, a full circle around it with orientation
/// `sign` (+1 counterclockwise), and the same straight return.
///
/// The result is certified: `∮ dlog g = sign 2πi` for the target's defining
/// function `g`, winding zero around every other component, and clearance at
/// least `delta_min` everywhere.
pub fn loop_around(
    component: DivisorComponent,
    base: &[C64],
    c: usize,
    sign: i32,
    opts: &LoopOptions,
    cfg: &EvalConfig,
) -> Result<(PathSpec, WindingCertificate)> {
    let n = base.len();
    component.check(n)?;
    if c >= n || !component.contains_coordinate(c) {
        return Err(Error::Precondition(format!("coordinate {} does not move {component}", c + 1)));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Precondition(format!("loop sign must be +1 or -1, got {sign}")));
    }
    let (_, here) = clearance(base);
    if here < opts.delta_min {
        return Err(Error::Geometry(format!("base point is within {here:e} of the divisor")));
    }
    let all = punctures(base, c);
    let center = all
        .iter()
        .find(|(comp, _)| *comp == component)
        .map(|(_, z)| *z)
        .ok_or_else(|| Error::Geometry(format!("{component} does not meet the x_{} line", c + 1)))?;
    let others = all
        .iter()
        .filter(|(comp, z)| *comp != component && (z - center).norm() > 1e-12)
        .map(|(_, z)| (z - center).norm())
        .fold(f64::INFINITY, f64::min);
    let reach = (base[c] - center).norm();
    let radius = match opts.radius {
        Some(r) if r <= 0.0 || !r.is_finite() => {
            return Err(Error::Geometry(format!("loop radius must be positive, got {r}")))
        }
        Some(r) => r,
        None => (0.1 * others).min(0.5 * reach),
    };
    if radius > reach + ENDPOINT_TOL {
        return Err(Error::Geometry(format!("radius {radius} exceeds the distance {reach} from the base")));
    }
    if radius >= others {
        return Err(Error::Geometry(format!("radius {radius} encloses another puncture at distance {others}")));
    }
    let dir = (base[c] - center) / reach;
    let theta0 = dir.arg();
    let mut near = base.to_vec();
    near[c] = center + dir * radius;
    let arc = PathSegment::Arc {
        base: near.clone(),
        coordinate: c,
        center,
        radius,
        theta0,
        theta1: theta0 + sign as f64 * 2.0 * PI,
    };
    let segments = if reach - radius <= ENDPOINT_TOL {
        let mut a = arc;
        if let PathSegment::Arc { base: b, .. } = &mut a {
            *b = base.to_vec();
        }
        vec![a]
    } else {
        vec![
            PathSegment::Line { from: base.to_vec(), to: near.clone() },
            arc,
            PathSegment::Line { from: near, to: base.to_vec() },
        ]
    };
    let path = PathSpec::new(segments, false)?;
    let report = validate(&path, opts.delta_min, 400);
    if !report.ok {
        return Err(Error::Geometry(format!(
            "loop comes within {:e} of {}",
            report.min_clearance,
            report.min_component.map(|c| c.to_string()).unwrap_or_default()
        )));
    }
    let cert = certify(&path, component, cfg)?;
    let want = C64::new(0.0, 2.0 * PI * sign as f64);
    if (cert.loop_dlog - want).norm() > opts.dlog_tol || !cert.matches(sign, opts.winding_tol) {
        return Err(Error::Geometry(format!("loop around {component} failed winding certification")));
    }
    Ok((path, cert))
}

/// Sufficient test that two paths with common endpoints are homotopic in the
/// complement: the loop `p q^{-1}` winds zero times around every component.
pub fn homotopic(p: &PathSpec, q: &PathSpec, tol: f64, cfg: &EvalConfig) -> Result<bool> {
    if dist(&p.start(), &q.start()) > ENDPOINT_TOL || dist(&p.end(), &q.end()) > ENDPOINT_TOL {
        return Ok(false);
    }
    let mut p0 = p.clone();
    p0.start_exempt = false;
    p0.warp = Warp::Identity;
    let mut q0 = q.clone();
    q0.warp = Warp::Identity;
    let l = compose(&p0, &inverse(&q0))?;
    Ok(winding_vector(&l, cfg)?.iter().all(|(_, w)| w.norm() <= tol))
}
