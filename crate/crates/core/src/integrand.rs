//! Sums of tensor words: the continuation integrand for general bounds, the
//! factored multiple-logarithm integrand, and their paper-style rendering.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{build_w, fractions, latex_sum, multilog_w, two_form_eval, variable_map, Fraction, OneForm};
use crate::index::{enumerate_queues, v_index, Bounds, MultiIndex};
use crate::polylog::series_eval;
use crate::sampling::Sampler;
use crate::C64;

/// A coefficient times an ordered word of 1-forms; the first letter is the
/// innermost integrand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorWord {
    pub coeff: i64,
    pub letters: Vec<OneForm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Integrand {
    /// Number of coordinates the letters live on.
    pub n: usize,
    pub words: Vec<TensorWord>,
}

impl Integrand {
    pub fn new(n: usize) -> Self {
        Integrand { n, words: vec![] }
    }

    /// Add a word, merging it with an identical letter sequence. Words with a
    /// zero letter or zero total coefficient are dropped.
    pub fn push(&mut self, word: TensorWord) {
        if word.coeff == 0 || word.letters.iter().any(OneForm::is_zero) {
            return;
        }
        if let Some(w) = self.words.iter_mut().find(|w| w.letters == word.letters) {
            w.coeff += word.coeff;
        } else {
            self.words.push(word);
        }
        self.words.retain(|w| w.coeff != 0);
    }

    fn from_words(n: usize, words: impl IntoIterator<Item = TensorWord>) -> Self {
        let mut index: HashMap<Vec<OneForm>, usize> = HashMap::new();
        let mut out: Vec<TensorWord> = vec![];
        for w in words {
            if w.coeff == 0 || w.letters.iter().any(OneForm::is_zero) {
                continue;
            }
            match index.get(&w.letters) {
                Some(&k) => out[k].coeff += w.coeff,
                None => {
                    index.insert(w.letters.clone(), out.len());
                    out.push(w);
                }
            }
        }
        out.retain(|w| w.coeff != 0);
        Integrand { n, words: out }
    }

    /// Word length, or 0 for the empty integrand.
    pub fn weight(&self) -> usize {
        self.words.first().map_or(0, |w| w.letters.len())
    }

    /// Split every letter into its single-fraction summands and expand.
    pub fn distribute(&self) -> Integrand {
        let mut words = vec![];
        for w in &self.words {
            let mut partial: Vec<(i64, Vec<OneForm>)> = vec![(w.coeff, vec![])];
            for letter in &w.letters {
                let parts: Vec<(i64, OneForm)> = fractions(letter).into_iter().map(fraction_form).collect();
                let mut next = vec![];
                for (c, prefix) in &partial {
                    for (k, f) in &parts {
                        let mut p = prefix.clone();
                        p.push(f.clone());
                        next.push((c * k, p));
                    }
                }
                partial = next;
            }
            words.extend(partial.into_iter().map(|(coeff, letters)| TensorWord { coeff, letters }));
        }
        Integrand::from_words(self.n, words)
    }

    /// Equality as formal sums of words.
    pub fn same_sum(&self, other: &Integrand) -> bool {
        let key = |i: &Integrand| {
            let mut v: Vec<(Vec<OneForm>, i64)> = i.words.iter().map(|w| (w.letters.clone(), w.coeff)).collect();
            v.sort();
            v
        };
        self.n == other.n && key(self) == key(other)
    }

    /// Rewrite every letter through `f`, keeping the word structure.
    pub fn map_letters(&self, n: usize, f: impl Fn(&OneForm) -> OneForm) -> Integrand {
        Integrand {
            n,
            words: self
                .words
                .iter()
                .map(|w| TensorWord { coeff: w.coeff, letters: w.letters.iter().map(&f).collect() })
                .collect(),
        }
    }
}

/// Normalized single fraction as a unit-coefficient form plus its multiplier.
fn fraction_form(f: Fraction) -> (i64, OneForm) {
    match f {
        Fraction::OneMinus { start, end, coeff } => (coeff, OneForm::one_minus(start, end, -1)),
        Fraction::Pole { start, end, coeff } => {
            (coeff, OneForm::one_minus(start, end, 1).add(&OneForm::coord_range(start, end, -1)))
        }
        Fraction::Coord { start, end, coeff } => (coeff, OneForm::coord_range(start, end, 1)),
    }
}

/// The continuation integrand of `Li_m`: one word per queue and switch
/// vector, with letters built through the effective indices; zero words are
/// pruned and duplicates merged.
pub fn build_integrand(bounds: &Bounds) -> Integrand {
    let k = bounds.weight();
    let mut words = vec![];
    for q in enumerate_queues(bounds) {
        'delta: for mask in 0u64..(1u64 << k) {
            let deltas: Vec<bool> = (0..k).map(|r| mask >> r & 1 == 1).collect();
            let mut letters = Vec::with_capacity(k);
            for r in 0..k {
                let eff = q.effective_index(r, &deltas).expect("queue and switches have matching length");
                let w = build_w(&q, r, deltas[r], &eff).expect("effective index has the depth of j_r");
                if w.is_zero() {
                    continue 'delta;
                }
                letters.push(w);
            }
            words.push(TensorWord { coeff: 1, letters });
        }
    }
    Integrand::from_words(bounds.depth(), words)
}

/// The multiple-logarithm integrand with composite letters: one word per
/// queue, letter `t` equal to `w_{f^t}` written through `x(j_t)`.
pub fn build_multilog_integrand(n: usize) -> Result<Integrand> {
    let bounds = Bounds::ones(n)?;
    let mut words = vec![];
    for q in enumerate_queues(&bounds) {
        let f = q.position_functions()?;
        let mut letters = vec![];
        for (jt, &ft) in q.entries().iter().zip(&f) {
            let map = variable_map(jt)?;
            letters.push(multilog_w(ft, map.blocks.len())?.substitute(&map)?);
        }
        words.push(TensorWord { coeff: 1, letters });
    }
    Ok(Integrand::from_words(n, words))
}

/// A product of sums of forms, produced by regrouping distributed words.
#[derive(Debug, Clone, PartialEq)]
pub struct Product {
    pub coeff: i64,
    pub factors: Vec<Vec<OneForm>>,
}

/// Regroup a distributed integrand into products by repeatedly merging words
/// that differ at a single position, scanning positions from last to first.
pub fn regroup(integrand: &Integrand) -> Vec<Product> {
    let mut prods: Vec<Product> = integrand
        .distribute()
        .words
        .into_iter()
        .map(|w| Product { coeff: w.coeff, factors: w.letters.into_iter().map(|l| vec![l]).collect() })
        .collect();
    let k = integrand.weight();
    loop {
        let mut changed = false;
        for p in (0..k).rev() {
            let mut merged: Vec<Product> = vec![];
            let mut slot: HashMap<(i64, Vec<Vec<OneForm>>), usize> = HashMap::new();
            for prod in prods {
                let mut ctx = prod.factors.clone();
                ctx.remove(p);
                match slot.get(&(prod.coeff, ctx.clone())) {
                    Some(&at) => {
                        merged[at].factors[p].extend(prod.factors[p].iter().cloned());
                        changed = true;
                    }
                    None => {
                        slot.insert((prod.coeff, ctx), merged.len());
                        merged.push(prod);
                    }
                }
            }
            prods = merged;
        }
        if !changed {
            return prods;
        }
    }
}

/// Paper-notation rendering of an integrand, one product per line.
pub fn render(integrand: &Integrand) -> String {
    let prods = regroup(integrand);
    if prods.is_empty() {
        return "0".into();
    }
    let mut lines = vec![];
    for (k, p) in prods.iter().enumerate() {
        let body: Vec<String> = p.factors.iter().map(|f| latex_sum(f, integrand.n)).collect();
        let body = body.join(" ");
        let line = match p.coeff {
            1 if k == 0 => body,
            1 => format!("+{body}"),
            -1 => format!("-{body}"),
            c if c > 0 && k > 0 => format!("+{c}{body}"),
            c => format!("{c}{body}"),
        };
        lines.push(line);
    }
    lines.join("\n")
}

/// Series value of `Li_m` at `x`, with the empty family equal to 1.
fn li_or_one(m: &[u32], x: &[C64], tol: f64) -> Result<C64> {
    if m.is_empty() {
        return Ok(C64::new(1.0, 0.0));
    }
    series_eval(&Bounds::new(m)?, x, tol)
}

/// Coordinates of `x(i)` at the point `x`.
pub fn substituted_point(i: &MultiIndex, x: &[C64]) -> Result<Vec<C64>> {
    if i.weight() == 0 {
        return Ok(vec![]);
    }
    Ok(variable_map(i)?.blocks.iter().map(|&(a, b)| x[a..=b].iter().product()).collect())
}

/// Per-coordinate residuals between central finite differences of `Li_m`
/// and the closed-form partial derivatives, both from the series.
pub fn differential_check(bounds: &Bounds, x: &[C64], h: f64) -> Result<Vec<f64>> {
    let n = bounds.depth();
    if x.len() != n {
        return Err(Error::Precondition(format!("point has {} coordinates, bounds need {n}", x.len())));
    }
    let tol = 1e-14;
    let m = bounds.m();
    let one = C64::new(1.0, 0.0);
    let mut out = vec![];
    for t in 0..n {
        if x[t].norm() < 1e-9 || (one - x[t]).norm() < 1e-9 {
            return Err(Error::Singular(format!("x_{} = {}", t + 1, x[t])));
        }
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[t] += h;
        xm[t] -= h;
        let fd = (series_eval(bounds, &xp, tol)? - series_eval(bounds, &xm, tol)?) / (2.0 * h);
        let rhs = if m[t] > 1 {
            let mut lower = m.to_vec();
            lower[t] -= 1;
            series_eval(&Bounds::new(&lower)?, x, tol)? / x[t]
        } else {
            let mut rest = m.to_vec();
            rest.remove(t);
            let first = li_or_one(&rest, &substituted_point(&v_index(bounds, t)?, x)?, tol)? / (one - x[t]);
            if t + 1 < n {
                let second = li_or_one(&rest, &substituted_point(&v_index(bounds, t + 1)?, x)?, tol)?
                    / (x[t] * (x[t] - one));
                first + second
            } else {
                first
            }
        };
        out.push((fd - rhs).norm());
    }
    Ok(out)
}

/// Residual of the wedge of adjacent letters at each position `i`:
/// `|Σ c_w w_1 ⊗ .. ⊗ (w_i ∧ w_{i+1}) ⊗ .. ⊗ w_r|`, with every other slot
/// evaluated at its own random point and direction in the polydisk.
pub fn integrability_residuals(integrand: &Integrand, sampler: &mut Sampler, sing_tol: f64) -> Result<Vec<f64>> {
    let n = integrand.n;
    let r = integrand.weight();
    let mut out = vec![];
    for i in 0..r.saturating_sub(1) {
        let points: Vec<Vec<C64>> = (0..r).map(|_| sampler.polydisk(n)).collect();
        let dirs: Vec<Vec<C64>> = (0..r).map(|_| sampler.vector(n, 1.0)).collect();
        let extra = sampler.vector(n, 1.0);
        let mut sum = C64::new(0.0, 0.0);
        for w in &integrand.words {
            let mut term = C64::new(w.coeff as f64, 0.0);
            for (k, letter) in w.letters.iter().enumerate() {
                if k == i {
                    term *= two_form_eval(letter, &w.letters[i + 1], &points[i], &dirs[i], &extra, sing_tol)?;
                } else if k != i + 1 {
                    term *= letter.pullback_eval(&points[k], &dirs[k], sing_tol)?;
                }
            }
            sum += term;
        }
        out.push(sum.norm());
    }
    Ok(out)
}
