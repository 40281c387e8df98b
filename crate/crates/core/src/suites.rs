//! Seeded property suites over the integrator, the integrands and the
//! evaluators. Each suite reports one residual per case against a fixed
//! tolerance.

use serde::{Deserialize, Serialize};

use crate::chen::{
    composition_check, inversion_check, iterated_integral, reparameterization_check, shuffle_check, EvalConfig,
};
use crate::error::{Error, Result};
use crate::forms::{multilog_w, OneForm};
use crate::index::Bounds;
use crate::integrand::{build_integrand, differential_check, integrability_residuals};
use crate::paths::{homotopic, line_from_origin, line_path, validate, PathSpec};
use crate::polylog::{continue_eval, hyperlog_li, series_eval};
use crate::sampling::Sampler;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Shuffle,
    Composition,
    Inversion,
    Reparameterization,
    Homotopy,
    Integrability,
    Differential,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Shuffle,
        Suite::Composition,
        Suite::Inversion,
        Suite::Reparameterization,
        Suite::Homotopy,
        Suite::Integrability,
        Suite::Differential,
        Suite::Oracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Shuffle => "shuffle",
            Suite::Composition => "composition",
            Suite::Inversion => "inversion",
            Suite::Reparameterization => "reparameterization",
            Suite::Homotopy => "homotopy",
            Suite::Integrability => "integrability",
            Suite::Differential => "differential",
            Suite::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        let s = s.trim().to_ascii_lowercase();
        let alias = match s.as_str() {
            "oracle-triangle" | "oracle_triangle" => "oracle",
            "reparam" => "reparameterization",
            other => other,
        };
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == alias)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }

    pub fn default_tolerance(&self) -> f64 {
        match self {
            Suite::Shuffle | Suite::Composition | Suite::Inversion | Suite::Reparameterization => 1e-8,
            Suite::Homotopy => 1e-7,
            Suite::Integrability => 1e-10,
            Suite::Differential | Suite::Oracle => 1e-6,
        }
    }

    pub fn default_trials(&self) -> usize {
        match self {
            Suite::Shuffle | Suite::Composition | Suite::Inversion | Suite::Reparameterization => 50,
            Suite::Homotopy => 10,
            Suite::Integrability => 100,
            Suite::Differential | Suite::Oracle => 20,
        }
    }

    /// Bounds exercised when none are given.
    pub fn default_bounds(&self) -> Vec<Bounds> {
        let mk = |v: &[&[u32]]| v.iter().map(|m| Bounds::new(m).expect("static bounds")).collect();
        match self {
            Suite::Integrability => all_bounds_up_to(4),
            Suite::Differential => all_bounds_up_to(3),
            Suite::Oracle => mk(&[&[2], &[3], &[1, 1], &[1, 2], &[2, 1], &[1, 1, 1], &[1, 1, 2]]),
            Suite::Homotopy => mk(&[&[1, 1], &[1, 1, 1]]),
            _ => vec![],
        }
    }
}

/// Every composition of every weight `1..=k`.
pub fn all_bounds_up_to(k: usize) -> Vec<Bounds> {
    fn rec(left: u32, cur: &mut Vec<u32>, out: &mut Vec<Bounds>) {
        if left == 0 {
            out.push(Bounds::new(cur).expect("positive parts"));
            return;
        }
        for p in 1..=left {
            cur.push(p);
            rec(left - p, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    for w in 1..=k as u32 {
        rec(w, &mut vec![], &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub label: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub tolerance: f64,
    pub passed: bool,
    pub max_residual: f64,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64, tolerance: f64, cases: Vec<Case>) -> Self {
        let max_residual = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
        let passed = !cases.is_empty() && cases.iter().all(|c| c.residual <= tolerance);
        SuiteReport { suite, seed, tolerance, passed, max_residual, cases }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    /// Empty means the suite's defaults.
    pub bounds: Vec<Bounds>,
    pub cfg: EvalConfig,
}

impl SuiteOptions {
    pub fn defaults(suite: Suite) -> Self {
        SuiteOptions {
            seed: 0,
            trials: suite.default_trials(),
            tolerance: suite.default_tolerance(),
            bounds: vec![],
            cfg: EvalConfig::default(),
        }
    }
}

pub fn run(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    opts.cfg.check()?;
    let bounds = if opts.bounds.is_empty() { suite.default_bounds() } else { opts.bounds.clone() };
    let mut s = Sampler::new(opts.seed);
    let cases = match suite {
        Suite::Shuffle | Suite::Composition | Suite::Inversion | Suite::Reparameterization => {
            chen_cases(suite, &mut s, opts.trials, &opts.cfg)?
        }
        Suite::Homotopy => homotopy_cases(&bounds, &mut s, opts.trials, &opts.cfg)?,
        Suite::Integrability => {
            let mut out = vec![];
            for b in &bounds {
                let integrand = build_integrand(b);
                for k in 0..opts.trials {
                    let res = integrability_residuals(&integrand, &mut s, opts.cfg.sing_tol)?;
                    let worst = res.into_iter().fold(0.0, f64::max);
                    out.push(Case { label: format!("{:?} #{k}", b.m()), residual: worst });
                }
            }
            out
        }
        Suite::Differential => {
            let mut out = vec![];
            for b in &bounds {
                for k in 0..opts.trials {
                    let x = s.polydisk_where(b.depth(), 1000, |x| x.iter().all(|z| z.norm() < 0.9))?;
                    let worst = differential_check(b, &x, 1e-5)?.into_iter().fold(0.0, f64::max);
                    out.push(Case { label: format!("{:?} #{k}", b.m()), residual: worst });
                }
            }
            out
        }
        Suite::Oracle => {
            let mut out = vec![];
            for b in &bounds {
                for k in 0..opts.trials {
                    let x = s.polydisk(b.depth());
                    let r = oracle_triangle(b, &x, &opts.cfg)?;
                    out.push(Case { label: format!("{:?} #{k}", b.m()), residual: r[0].max(r[1]) });
                }
            }
            out
        }
    };
    Ok(SuiteReport::new(suite, opts.seed, opts.tolerance, cases))
}

/// `[|series - continuation|, |series - hyperlogarithm|]` at `x`.
pub fn oracle_triangle(bounds: &Bounds, x: &[C64], cfg: &EvalConfig) -> Result<[f64; 2]> {
    let series = series_eval(bounds, x, 1e-15)?;
    let cont = continue_eval(bounds, &line_from_origin(x)?, cfg)?.value;
    let hyper = hyperlog_li(bounds, x, cfg)?;
    Ok([(series - cont).norm(), (series - hyper).norm()])
}

/// Letters for the algebra suites: the multiple-logarithm forms in two
/// variables and two single atoms.
fn letter_pool() -> Vec<OneForm> {
    vec![
        multilog_w(1, 2).expect("w1"),
        multilog_w(2, 2).expect("w2"),
        OneForm::coord_range(1, 1, 1),
        OneForm::one_minus(0, 1, -1),
    ]
}

fn random_word(s: &mut Sampler, len: usize, letters: usize) -> Vec<usize> {
    (0..len).map(|_| s.index(letters)).collect()
}

/// A straight segment between two points of the polydisk, which is convex
/// and free of the divisor.
fn random_line(s: &mut Sampler, from: Option<Vec<C64>>) -> Result<PathSpec> {
    let a = from.unwrap_or_else(|| s.polydisk(2));
    let b = s.polydisk(2);
    line_path(&a, &b)
}

fn chen_cases(suite: Suite, s: &mut Sampler, trials: usize, cfg: &EvalConfig) -> Result<Vec<Case>> {
    let forms = letter_pool();
    let mut out = vec![];
    for k in 0..trials {
        let p = random_line(s, None)?;
        let (label, residual) = match suite {
            Suite::Shuffle => {
                let la = 1 + s.index(2);
                let lb = 1 + s.index(3 - la);
                let a = random_word(s, la, forms.len());
                let b = random_word(s, lb, forms.len());
                (format!("{a:?} x {b:?}"), shuffle_check(&forms, &a, &b, &p, cfg)?)
            }
            Suite::Composition => {
                let len = 1 + s.index(3);
                let w = random_word(s, len, forms.len());
                let q = random_line(s, Some(p.end()))?;
                (format!("{w:?}"), composition_check(&forms, &w, &p, &q, cfg)?)
            }
            Suite::Inversion => {
                let len = 1 + s.index(3);
                let w = random_word(s, len, forms.len());
                (format!("{w:?}"), inversion_check(&forms, &w, &p, cfg)?)
            }
            _ => {
                let len = 1 + s.index(3);
                let w = random_word(s, len, forms.len());
                let power = 1.0 + 2.0 * s.unit();
                (format!("{w:?} s^{power:.3}"), reparameterization_check(&forms, &w, &p, power, cfg)?)
            }
        };
        out.push(Case { label: format!("#{k} {label}"), residual });
    }
    Ok(out)
}

/// Pairs of a straight segment and a two-segment detour with the same
/// endpoints, kept only when both clear the divisor and the winding test
/// certifies them homotopic.
fn homotopy_cases(bounds: &[Bounds], s: &mut Sampler, trials: usize, cfg: &EvalConfig) -> Result<Vec<Case>> {
    let mut out = vec![];
    for b in bounds {
        let n = b.depth();
        let integrand = build_integrand(b);
        let mut found = 0;
        let mut tries = 0;
        while found < trials {
            tries += 1;
            if tries > 100 * trials {
                return Err(Error::Geometry(format!("no certified homotopic pair for {:?}", b.m())));
            }
            let a = s.polydisk(n);
            let z = s.polydisk(n);
            let mid: Vec<C64> = a.iter().zip(&z).zip(s.vector(n, 0.6)).map(|((p, q), d)| (p + q) * 0.5 + d).collect();
            let straight = line_path(&a, &z)?;
            let mut detour = line_path(&a, &mid)?;
            detour.segments.extend(line_path(&mid, &z)?.segments);
            if !validate(&straight, cfg.delta_min, 200).ok || !validate(&detour, cfg.delta_min, 200).ok {
                continue;
            }
            if !homotopic(&straight, &detour, 1e-6, cfg)? {
                continue;
            }
            let d = (iterated_integral(&integrand, &straight, cfg)?.value - iterated_integral(&integrand, &detour, cfg)?.value).norm();
            out.push(Case { label: format!("{:?} #{found}", b.m()), residual: d });
            found += 1;
        }
    }
    Ok(out)
}
