//! Iterated path integrals as triangular linear ODEs.
//!
//! Words are stored in a prefix trie; the node for `w_1...w_k` carries
//! `I_k(t) = ∫ w_1...w_k` along the path so far, with
//! `dI_k/dt = I_{k-1}(t) f_k(t)` and `f_k dt` the pullback of `w_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{LogAtom, OneForm};
use crate::integrand::Integrand;
use crate::paths::{PathSpec, Warp};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Initial step is `1 / initial_steps_per_segment` of a segment.
    pub initial_steps_per_segment: usize,
    /// Number of ten-fold tolerance reductions before giving up.
    pub max_refinements: usize,
    /// Parameter value where integration starts on an exempt first segment.
    pub start_offset: f64,
    pub sing_tol: f64,
    pub delta_min: f64,
    /// Hard limit on accepted plus rejected steps per pass.
    pub max_steps: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            initial_steps_per_segment: 16,
            max_refinements: 6,
            start_offset: 1e-16,
            sing_tol: 1e-9,
            delta_min: 1e-3,
            max_steps: 2_000_000,
        }
    }
}

impl EvalConfig {
    pub fn check(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !(pos(self.rel_tol) && pos(self.abs_tol) && pos(self.sing_tol) && pos(self.delta_min)) {
            return Err(Error::Precondition("tolerances must be positive".into()));
        }
        if !(self.start_offset > 0.0 && self.start_offset < 1.0) {
            return Err(Error::Precondition(format!("start_offset must lie in (0, 1), got {}", self.start_offset)));
        }
        if self.initial_steps_per_segment == 0 || self.max_refinements == 0 {
            return Err(Error::Precondition("initial steps and refinements must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: C64,
    /// Difference between the last two refinement passes.
    pub est_error: f64,
    /// Accepted steps in the final pass.
    pub steps: usize,
}

/// Values `f_k` of a family of 1-forms along a tangent vector.
pub trait Letters {
    fn count(&self) -> usize;
    /// Fill `out[k]` with letter `k` applied to `v` at `x`. Coordinate poles
    /// are tolerated when `check_coord` is false.
    fn eval(&self, x: &[C64], v: &[C64], check_coord: bool, sing_tol: f64, out: &mut [C64]) -> Result<()>;
}

/// Linear combinations of shared atoms, evaluated once per point.
#[derive(Debug, Clone)]
pub struct FormLetters {
    atoms: Vec<LogAtom>,
    forms: Vec<Vec<(usize, f64)>>,
}

impl FormLetters {
    pub fn new(forms: &[OneForm]) -> Self {
        let mut atoms: Vec<LogAtom> = vec![];
        let mut compiled = vec![];
        for f in forms {
            let mut terms = vec![];
            for (a, &c) in f.terms() {
                let k = atoms.iter().position(|b| b == a).unwrap_or_else(|| {
                    atoms.push(*a);
                    atoms.len() - 1
                });
                terms.push((k, c as f64));
            }
            compiled.push(terms);
        }
        FormLetters { atoms, forms: compiled }
    }
}

impl Letters for FormLetters {
    fn count(&self) -> usize {
        self.forms.len()
    }

    fn eval(&self, x: &[C64], v: &[C64], check_coord: bool, sing_tol: f64, out: &mut [C64]) -> Result<()> {
        let mut vals = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            if a.end >= x.len() {
                return Err(Error::Precondition(format!("letter uses x_{} on a path in C^{}", a.end + 1, x.len())));
            }
            vals.push(a.pullback(x, v, sing_tol, check_coord)?);
        }
        for (o, f) in out.iter_mut().zip(&self.forms) {
            *o = f.iter().map(|&(k, c)| vals[k] * c).sum();
        }
        Ok(())
    }
}

/// One-variable letters `dt / (t - a)`.
#[derive(Debug, Clone)]
pub struct PoleLetters {
    pub poles: Vec<C64>,
}

impl Letters for PoleLetters {
    fn count(&self) -> usize {
        self.poles.len()
    }

    fn eval(&self, x: &[C64], v: &[C64], check_coord: bool, sing_tol: f64, out: &mut [C64]) -> Result<()> {
        for (o, a) in out.iter_mut().zip(&self.poles) {
            let d = x[0] - a;
            if d.norm() < sing_tol && (check_coord || *a != C64::new(0.0, 0.0)) {
                return Err(Error::Singular(format!("t = {} meets the pole {a}", x[0])));
            }
            *o = v[0] / d;
        }
        Ok(())
    }
}

/// Prefix trie of words over letter indices.
#[derive(Debug, Clone, Default)]
pub struct WordTrie {
    parent: Vec<Option<usize>>,
    letter: Vec<usize>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
}

/// Handle to a trie node, or the empty word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRef {
    Empty,
    Node(usize),
}

impl WordTrie {
    pub fn insert(&mut self, word: &[usize]) -> NodeRef {
        let mut cur: Option<usize> = None;
        for &l in word {
            let siblings = match cur {
                None => &self.roots,
                Some(p) => &self.children[p],
            };
            let found = siblings.iter().copied().find(|&k| self.letter[k] == l);
            let k = match found {
                Some(k) => k,
                None => {
                    let k = self.parent.len();
                    self.parent.push(cur);
                    self.letter.push(l);
                    self.children.push(vec![]);
                    match cur {
                        None => self.roots.push(k),
                        Some(p) => self.children[p].push(k),
                    }
                    k
                }
            };
            cur = Some(k);
        }
        cur.map_or(NodeRef::Empty, NodeRef::Node)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    fn deriv(&self, state: &[C64], f: &[C64], out: &mut [C64]) {
        for k in 0..self.parent.len() {
            let prev = match self.parent[k] {
                None => C64::new(1.0, 0.0),
                Some(p) => state[p],
            };
            out[k] = prev * f[self.letter[k]];
        }
    }
}

/// One stretch of path together with the letters used along it.
pub struct Leg<'a> {
    pub letters: &'a dyn Letters,
    pub path: &'a PathSpec,
}

struct Stepper<'a> {
    trie: &'a WordTrie,
    cfg: &'a EvalConfig,
    tol: f64,
    steps: usize,
    attempts: usize,
}

impl Stepper<'_> {
    fn letters_at(&self, leg: &Leg, seg: usize, s: f64, check_coord: bool, out: &mut [C64]) -> Result<()> {
        let (tau, dtau) = leg.path.warp.apply(s);
        let segment = &leg.path.segments[seg];
        let x = segment.point(tau);
        let mut v = segment.velocity(tau);
        if dtau != 1.0 {
            for z in v.iter_mut() {
                *z *= dtau;
            }
        }
        leg.letters.eval(&x, &v, check_coord, self.cfg.sing_tol, out)
    }

    fn rk4(&self, y: &[C64], fa: &[C64], fm: &[C64], fb: &[C64], h: f64, scratch: &mut [Vec<C64>; 5]) -> Vec<C64> {
        let n = y.len();
        let [k1, k2, k3, k4, tmp] = scratch;
        self.trie.deriv(y, fa, k1);
        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (h / 2.0);
        }
        self.trie.deriv(tmp, fm, k2);
        for i in 0..n {
            tmp[i] = y[i] + k2[i] * (h / 2.0);
        }
        self.trie.deriv(tmp, fm, k3);
        for i in 0..n {
            tmp[i] = y[i] + k3[i] * h;
        }
        self.trie.deriv(tmp, fb, k4);
        (0..n).map(|i| y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0)).collect()
    }

    fn segment(&mut self, leg: &Leg, seg: usize, s0: f64, check_coord: bool, state: &mut Vec<C64>) -> Result<()> {
        let nl = leg.letters.count();
        let mut f: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); nl]; 5];
        let mut scratch: [Vec<C64>; 5] = std::array::from_fn(|_| vec![C64::new(0.0, 0.0); state.len()]);
        let mut s = s0;
        let mut h = if s0 > 0.0 { s0 } else { 1.0 / self.cfg.initial_steps_per_segment as f64 };
        self.letters_at(leg, seg, s, check_coord, &mut f[0])?;
        while s < 1.0 {
            if 1.0 - s < 1.1 * h {
                h = 1.0 - s;
            }
            if self.attempts >= self.cfg.max_steps || h < 1e-300 {
                return Err(Error::NonConvergence(format!(
                    "step control failed on segment {seg} at parameter {s} after {} attempts",
                    self.attempts
                )));
            }
            self.attempts += 1;
            for (k, frac) in [(1, 0.25), (2, 0.5), (3, 0.75), (4, 1.0)] {
                let t = if frac == 1.0 { (s + h).min(1.0) } else { s + h * frac };
                self.letters_at(leg, seg, t, check_coord, &mut f[k])?;
            }
            let full = self.rk4(state, &f[0], &f[2], &f[4], h, &mut scratch);
            let half = self.rk4(state, &f[0], &f[1], &f[2], h / 2.0, &mut scratch);
            let fine = self.rk4(&half, &f[2], &f[3], &f[4], h / 2.0, &mut scratch);
            let err = fine.iter().zip(&full).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / 15.0;
            let scale = 1.0 + fine.iter().map(|z| z.norm()).fold(0.0, f64::max);
            // floor at the rounding level of the state
            let allowed = (self.tol * h + 64.0 * f64::EPSILON) * scale;
            if err <= allowed {
                for i in 0..state.len() {
                    state[i] = fine[i] + (fine[i] - full[i]) / 15.0;
                }
                s += h;
                self.steps += 1;
                f.swap(0, 4);
                let grow = if err == 0.0 { 4.0 } else { (0.9 * (allowed / err).powf(0.25)).clamp(0.2, 4.0) };
                h *= grow;
            } else {
                if !err.is_finite() {
                    return Err(Error::NonConvergence(format!("non-finite values on segment {seg} near {s}")));
                }
                h *= (0.9 * (allowed / err).powf(0.25)).clamp(0.1, 0.5);
            }
        }
        Ok(())
    }
}

fn run(trie: &WordTrie, legs: &[Leg], cfg: &EvalConfig, tol: f64) -> Result<(Vec<C64>, usize)> {
    let mut st = Stepper { trie, cfg, tol, steps: 0, attempts: 0 };
    let mut state = vec![C64::new(0.0, 0.0); trie.len()];
    for (li, leg) in legs.iter().enumerate() {
        leg.path.check()?;
        for si in 0..leg.path.segments.len() {
            let exempt = li == 0 && si == 0 && leg.path.start_exempt;
            let s0 = if exempt { cfg.start_offset } else { 0.0 };
            let s0 = match leg.path.warp {
                Warp::Power { p } if exempt => s0.powf(1.0 / p),
                _ => s0,
            };
            st.segment(leg, si, s0, !exempt, &mut state)?;
        }
    }
    Ok((state, st.steps))
}

/// Integrate `trie` along `legs`, refining the tolerance ten-fold until the
/// quantity `read` of two successive passes agrees.
fn refine<T>(
    trie: &WordTrie,
    legs: &[Leg],
    cfg: &EvalConfig,
    read: impl Fn(&[C64]) -> Vec<C64>,
    finish: impl Fn(Vec<C64>, f64, usize) -> T,
) -> Result<T> {
    cfg.check()?;
    let mut tol = (cfg.rel_tol * 10.0).min(1e-6);
    let mut prev: Option<Vec<C64>> = None;
    for _ in 0..=cfg.max_refinements {
        let (state, steps) = run(trie, legs, cfg, tol)?;
        let vals = read(&state);
        if let Some(p) = &prev {
            let diff = vals.iter().zip(p).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let size = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if diff <= cfg.abs_tol.max(cfg.rel_tol * size) {
                return Ok(finish(vals, diff, steps));
            }
        }
        prev = Some(vals);
        tol /= 10.0;
    }
    Err(Error::NonConvergence(format!("no agreement after {} refinements", cfg.max_refinements)))
}

fn node_value(state: &[C64], r: NodeRef) -> C64 {
    match r {
        NodeRef::Empty => C64::new(1.0, 0.0),
        NodeRef::Node(k) => state[k],
    }
}

/// An integrand compiled to shared letters and a word trie.
#[derive(Debug, Clone)]
pub struct CompiledIntegrand {
    pub forms: Vec<OneForm>,
    pub trie: WordTrie,
    pub weights: Vec<(NodeRef, f64)>,
}

impl CompiledIntegrand {
    pub fn new(integrand: &Integrand) -> Self {
        let mut forms: Vec<OneForm> = vec![];
        let mut trie = WordTrie::default();
        let mut weights = vec![];
        for w in &integrand.words {
            let idx: Vec<usize> = w
                .letters
                .iter()
                .map(|l| {
                    forms.iter().position(|f| f == l).unwrap_or_else(|| {
                        forms.push(l.clone());
                        forms.len() - 1
                    })
                })
                .collect();
            weights.push((trie.insert(&idx), w.coeff as f64));
        }
        CompiledIntegrand { forms, trie, weights }
    }

    /// The same word structure with every letter rewritten by `f`.
    pub fn map_forms(&self, f: impl Fn(&OneForm) -> OneForm) -> CompiledIntegrand {
        CompiledIntegrand { forms: self.forms.iter().map(f).collect(), trie: self.trie.clone(), weights: self.weights.clone() }
    }

    pub fn letters(&self) -> FormLetters {
        FormLetters::new(&self.forms)
    }

    fn total(&self, state: &[C64]) -> C64 {
        self.weights.iter().map(|&(r, c)| node_value(state, r) * c).sum()
    }
}

/// `∫_path` of the integrand.
pub fn iterated_integral(integrand: &Integrand, path: &PathSpec, cfg: &EvalConfig) -> Result<Evaluation> {
    let compiled = CompiledIntegrand::new(integrand);
    let letters = compiled.letters();
    evaluate_legs(&compiled, &[Leg { letters: &letters, path }], cfg)
}

/// Integrate a compiled integrand along consecutive legs, carrying the
/// state across legs; each leg may use its own letters for the same words.
pub fn evaluate_legs(compiled: &CompiledIntegrand, legs: &[Leg], cfg: &EvalConfig) -> Result<Evaluation> {
    if compiled.weights.iter().all(|(r, _)| *r == NodeRef::Empty) {
        let value = compiled.weights.iter().map(|(_, c)| C64::new(*c, 0.0)).sum();
        return Ok(Evaluation { value, est_error: 0.0, steps: 0 });
    }
    refine(
        &compiled.trie,
        legs,
        cfg,
        |s| vec![compiled.total(s)],
        |v, err, steps| Evaluation { value: v[0], est_error: err, steps },
    )
}

/// `∫_path w` for each word `w` of letter indices into `forms`.
pub fn evaluate_words(forms: &[OneForm], words: &[Vec<usize>], path: &PathSpec, cfg: &EvalConfig) -> Result<Vec<C64>> {
    let letters = FormLetters::new(forms);
    evaluate_words_with(&letters, words, path, cfg)
}

pub fn evaluate_words_with(letters: &dyn Letters, words: &[Vec<usize>], path: &PathSpec, cfg: &EvalConfig) -> Result<Vec<C64>> {
    let mut trie = WordTrie::default();
    let nodes: Vec<NodeRef> = words.iter().map(|w| trie.insert(w)).collect();
    if trie.is_empty() {
        return Ok(vec![C64::new(1.0, 0.0); words.len()]);
    }
    if let Some(bad) = words.iter().flatten().find(|&&l| l >= letters.count()) {
        return Err(Error::Precondition(format!("letter index {bad} out of range")));
    }
    refine(
        &trie,
        &[Leg { letters, path }],
        cfg,
        |s| nodes.iter().map(|&r| node_value(s, r)).collect(),
        |v, _, _| v,
    )
}

/// All interleavings of `a` and `b` preserving the order inside each.
pub fn shuffle<T: Clone>(a: &[T], b: &[T]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = vec![];
    for mut w in shuffle(&a[1..], b) {
        w.insert(0, a[0].clone());
        out.push(w);
    }
    for mut w in shuffle(a, &b[1..]) {
        w.insert(0, b[0].clone());
        out.push(w);
    }
    out
}

fn is_constant(p: &PathSpec) -> bool {
    p.segments.iter().all(|s| match s {
        crate::paths::PathSegment::Line { from, to } => from == to,
        crate::paths::PathSegment::Arc { .. } => false,
    })
}

/// Integrals along a path, with the constant path giving the empty-word value
/// for every nonempty word.
fn words_on(forms: &[OneForm], words: &[Vec<usize>], p: &PathSpec, cfg: &EvalConfig) -> Result<Vec<C64>> {
    if is_constant(p) {
        return Ok(words.iter().map(|w| C64::new(if w.is_empty() { 1.0 } else { 0.0 }, 0.0)).collect());
    }
    evaluate_words(forms, words, p, cfg)
}

/// `|∫_{pq} w - Σ_k ∫_p w_1..w_k ∫_q w_{k+1}..w_r|`.
pub fn composition_check(forms: &[OneForm], word: &[usize], p: &PathSpec, q: &PathSpec, cfg: &EvalConfig) -> Result<f64> {
    let pq = crate::paths::compose(p, q)?;
    let lhs = words_on(forms, &[word.to_vec()], &pq, cfg)?[0];
    let r = word.len();
    let prefixes: Vec<Vec<usize>> = (0..=r).map(|k| word[..k].to_vec()).collect();
    let suffixes: Vec<Vec<usize>> = (0..=r).map(|k| word[k..].to_vec()).collect();
    let on_p = words_on(forms, &prefixes, p, cfg)?;
    let on_q = words_on(forms, &suffixes, q, cfg)?;
    let rhs: C64 = on_p.iter().zip(&on_q).map(|(a, b)| a * b).sum();
    Ok((lhs - rhs).norm())
}

/// `|∫_{p^{-1}} w_1..w_r - (-1)^r ∫_p w_r..w_1|`.
pub fn inversion_check(forms: &[OneForm], word: &[usize], p: &PathSpec, cfg: &EvalConfig) -> Result<f64> {
    let inv = crate::paths::inverse(p);
    let lhs = words_on(forms, &[word.to_vec()], &inv, cfg)?[0];
    let rev: Vec<usize> = word.iter().rev().copied().collect();
    let sign = if word.len() % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = words_on(forms, &[rev], p, cfg)?[0] * sign;
    Ok((lhs - rhs).norm())
}

/// `|∫_p a ∫_p b - Σ_{shuffles} ∫_p w|`.
pub fn shuffle_check(forms: &[OneForm], a: &[usize], b: &[usize], p: &PathSpec, cfg: &EvalConfig) -> Result<f64> {
    let mut words = vec![a.to_vec(), b.to_vec()];
    words.extend(shuffle(a, b));
    let vals = words_on(forms, &words, p, cfg)?;
    let sum: C64 = vals[2..].iter().sum();
    Ok((vals[0] * vals[1] - sum).norm())
}

/// `|∫_p w - ∫_{p∘φ} w|` for the warp `s -> s^power`.
pub fn reparameterization_check(forms: &[OneForm], word: &[usize], p: &PathSpec, power: f64, cfg: &EvalConfig) -> Result<f64> {
    let warped = p.clone().with_warp(Warp::Power { p: power });
    let a = words_on(forms, &[word.to_vec()], p, cfg)?[0];
    let b = words_on(forms, &[word.to_vec()], &warped, cfg)?[0];
    Ok((a - b).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::multilog_w;
    use crate::integrand::TensorWord;
    use crate::paths::{line_from_origin, line_path};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn empty_word_is_one() {
        let mut i = Integrand::new(1);
        i.words.push(TensorWord { coeff: 1, letters: vec![] });
        let p = line_path(&[c(0.1, 0.0)], &[c(0.2, 0.0)]).unwrap();
        assert_eq!(iterated_integral(&i, &p, &EvalConfig::default()).unwrap().value, c(1.0, 0.0));
    }

    #[test]
    fn li1_and_li2() {
        let cfg = EvalConfig::default();
        let p = line_from_origin(&[c(0.5, 0.0)]).unwrap();
        let w1 = multilog_w(1, 1).unwrap();
        let li1 = Integrand { n: 1, words: vec![TensorWord { coeff: 1, letters: vec![w1.clone()] }] };
        let v = iterated_integral(&li1, &p, &cfg).unwrap().value;
        assert!((v - c(2f64.ln(), 0.0)).norm() < 1e-10);
        let li2 = Integrand {
            n: 1,
            words: vec![TensorWord { coeff: 1, letters: vec![w1, OneForm::coord_range(0, 0, 1)] }],
        };
        let v = iterated_integral(&li2, &p, &cfg).unwrap().value;
        let exact = std::f64::consts::PI.powi(2) / 12.0 - 2f64.ln().powi(2) / 2.0;
        assert!((v - c(exact, 0.0)).norm() < 1e-10, "{v}");
    }

    #[test]
    fn shuffles() {
        assert_eq!(shuffle(&['a'], &['b']), vec![vec!['a', 'b'], vec!['b', 'a']]);
        assert_eq!(shuffle(&[1, 2], &[3]).len(), 3);
        assert_eq!(shuffle::<u8>(&[], &[]), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn algebra_on_a_line() {
        let cfg = EvalConfig::default();
        let forms = vec![
            OneForm::one_minus(0, 0, -1),
            OneForm::coord_range(1, 1, 1),
            OneForm::one_minus(0, 1, 1),
        ];
        let p = line_path(&[c(0.2, 0.1), c(0.3, -0.1)], &[c(0.5, 0.2), c(0.1, 0.3)]).unwrap();
        let q = line_path(&[c(0.5, 0.2), c(0.1, 0.3)], &[c(0.4, -0.2), c(0.6, 0.1)]).unwrap();
        assert!(composition_check(&forms, &[0, 1, 2], &p, &q, &cfg).unwrap() < 1e-9);
        assert!(inversion_check(&forms, &[0, 2], &p, &cfg).unwrap() < 1e-9);
        assert!(shuffle_check(&forms, &[0, 1], &[2], &p, &cfg).unwrap() < 1e-9);
        assert!(reparameterization_check(&forms, &[2, 0, 1], &p, 2.0, &cfg).unwrap() < 1e-9);
        let constant = line_path(&p.end(), &p.end()).unwrap();
        assert!(composition_check(&forms, &[0, 1], &p, &constant, &cfg).unwrap() < 1e-12);
    }

    #[test]
    fn singular_path_is_reported() {
        let p = line_path(&[c(0.5, 0.0)], &[c(1.5, 0.0)]).unwrap();
        let li1 = Integrand {
            n: 1,
            words: vec![TensorWord { coeff: 1, letters: vec![multilog_w(1, 1).unwrap()] }],
        };
        assert!(iterated_integral(&li1, &p, &EvalConfig::default()).is_err());
    }

    #[test]
    fn pole_letters() {
        let cfg = EvalConfig::default();
        let p = line_from_origin(&[c(1.0, 0.0)]).unwrap();
        let letters = PoleLetters { poles: vec![c(2.0, 0.0)] };
        let v = evaluate_words_with(&letters, &[vec![0]], &p, &cfg).unwrap()[0];
        assert!((v - c(0.5f64.ln(), 0.0)).norm() < 1e-10);
    }
}
