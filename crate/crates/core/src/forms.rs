//! Integer combinations of logarithmic 1-forms `dlog(x_a...x_b)` and
//! `dlog(1 - x_a...x_b)` over contiguous coordinate ranges.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{rank_in_support, IndexQueue, MultiIndex};
use crate::C64;

/// Default threshold below which an atom argument counts as singular.
pub const DEFAULT_SING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AtomKind {
    /// `dlog(x_a...x_b)`; always stored with `a == b` inside a [`OneForm`].
    Coord,
    /// `dlog(1 - x_a...x_b)`.
    OneMinus,
}

/// A logarithmic atom over the inclusive 0-based coordinate range `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LogAtom {
    pub kind: AtomKind,
    pub start: usize,
    pub end: usize,
}

impl LogAtom {
    pub fn coord(t: usize) -> Self {
        LogAtom { kind: AtomKind::Coord, start: t, end: t }
    }

    pub fn one_minus(start: usize, end: usize) -> Self {
        LogAtom { kind: AtomKind::OneMinus, start, end }
    }

    /// Value of the defining function at `x`.
    pub fn defining_value(&self, x: &[C64]) -> C64 {
        let p: C64 = x[self.start..=self.end].iter().product();
        match self.kind {
            AtomKind::Coord => p,
            AtomKind::OneMinus => C64::new(1.0, 0.0) - p,
        }
    }

    /// `(d/dt) log g(x + t v)` at `t = 0`.
    ///
    /// A coordinate atom with zero velocity contributes zero even at `x_t = 0`;
    /// `check_coord = false` disables the singularity test for coordinate atoms.
    pub fn pullback(&self, x: &[C64], v: &[C64], sing_tol: f64, check_coord: bool) -> Result<C64> {
        match self.kind {
            AtomKind::Coord => {
                let mut acc = C64::new(0.0, 0.0);
                for t in self.start..=self.end {
                    if v[t] == C64::new(0.0, 0.0) {
                        continue;
                    }
                    if check_coord && x[t].norm() < sing_tol {
                        return Err(Error::Singular(format!("x_{} = {} on dlog x_{}", t + 1, x[t], t + 1)));
                    }
                    acc += v[t] / x[t];
                }
                Ok(acc)
            }
            AtomKind::OneMinus => {
                let (p, dp) = product_and_derivative(&x[self.start..=self.end], &v[self.start..=self.end]);
                let g = C64::new(1.0, 0.0) - p;
                if g.norm() < sing_tol {
                    return Err(Error::Singular(format!(
                        "1 - x_{}...x_{} = {g} on dlog(1 - x_{}...x_{})",
                        self.start + 1,
                        self.end + 1,
                        self.start + 1,
                        self.end + 1
                    )));
                }
                Ok(-dp / g)
            }
        }
    }
}

/// Product of `x` and its directional derivative along `v`, without dividing
/// by any coordinate.
pub fn product_and_derivative(x: &[C64], v: &[C64]) -> (C64, C64) {
    let mut p = C64::new(1.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for (xi, vi) in x.iter().zip(v) {
        dp = dp * xi + p * vi;
        p *= xi;
    }
    (p, dp)
}

/// Canonical integer combination of atoms.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<Term>", from = "Vec<Term>")]
pub struct OneForm {
    terms: BTreeMap<LogAtom, i64>,
}

/// Serialized form of one `coeff * atom` summand (positions 1-based).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Term {
    pub kind: AtomKind,
    pub start: usize,
    pub end: usize,
    pub coeff: i64,
}

impl From<OneForm> for Vec<Term> {
    fn from(f: OneForm) -> Self {
        f.terms
            .iter()
            .map(|(a, &c)| Term { kind: a.kind, start: a.start + 1, end: a.end + 1, coeff: c })
            .collect()
    }
}

impl From<Vec<Term>> for OneForm {
    fn from(terms: Vec<Term>) -> Self {
        let mut f = OneForm::zero();
        for t in terms {
            let (start, end) = (t.start.saturating_sub(1), t.end.saturating_sub(1));
            f.add_atom(LogAtom { kind: t.kind, start, end: end.max(start) }, t.coeff);
        }
        f
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            let name = match a.kind {
                AtomKind::Coord => format!("dlog x{}", a.start + 1),
                AtomKind::OneMinus => format!("dlog(1-x{}..x{})", a.start + 1, a.end + 1),
            };
            write!(f, "{c:+}*{name}")?;
        }
        Ok(())
    }
}

impl OneForm {
    pub fn zero() -> Self {
        OneForm::default()
    }

    /// `coeff * dlog(x_a...x_b)`, expanded into single coordinates.
    pub fn coord_range(start: usize, end: usize, coeff: i64) -> Self {
        let mut f = OneForm::zero();
        for t in start..=end {
            f.add_atom(LogAtom::coord(t), coeff);
        }
        f
    }

    /// `coeff * dlog(1 - x_a...x_b)`.
    pub fn one_minus(start: usize, end: usize, coeff: i64) -> Self {
        let mut f = OneForm::zero();
        f.add_atom(LogAtom::one_minus(start, end), coeff);
        f
    }

    pub fn add_atom(&mut self, atom: LogAtom, coeff: i64) {
        if atom.kind == AtomKind::Coord && atom.start != atom.end {
            for t in atom.start..=atom.end {
                self.add_atom(LogAtom::coord(t), coeff);
            }
            return;
        }
        let e = self.terms.entry(atom).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&atom);
        }
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_atom(*a, *c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> OneForm {
        let mut out = OneForm::zero();
        for (a, c) in &self.terms {
            out.add_atom(*a, c * k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<LogAtom, i64> {
        &self.terms
    }

    /// Largest coordinate touched, plus one.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|a| a.end + 1).max().unwrap_or(0)
    }

    /// The form applied to the tangent vector `v` at `x`.
    pub fn pullback_eval(&self, x: &[C64], v: &[C64], sing_tol: f64) -> Result<C64> {
        self.pullback_eval_with(x, v, sing_tol, true)
    }

    pub fn pullback_eval_with(&self, x: &[C64], v: &[C64], sing_tol: f64, check_coord: bool) -> Result<C64> {
        if x.len() < self.arity() || v.len() != x.len() {
            return Err(Error::Precondition(format!(
                "form needs {} coordinates, got point {} and velocity {}",
                self.arity(),
                x.len(),
                v.len()
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (a, &c) in &self.terms {
            acc += a.pullback(x, v, sing_tol, check_coord)? * c as f64;
        }
        Ok(acc)
    }

    /// Rewrite a form in `y`-coordinates of the substitution described by
    /// `map` into the original coordinates.
    pub fn substitute(&self, map: &VariableMap) -> Result<OneForm> {
        let mut out = OneForm::zero();
        for (a, &c) in &self.terms {
            if a.end >= map.blocks.len() {
                return Err(Error::Precondition(format!(
                    "form uses y_{} but the map has {} blocks",
                    a.end + 1,
                    map.blocks.len()
                )));
            }
            let start = map.blocks[a.start].0;
            let end = map.blocks[a.end].1;
            out.add_atom(LogAtom { kind: a.kind, start, end }, c);
        }
        Ok(out)
    }

    /// Pull a form written in the variables
    /// `y_k = (1 - x_a...x_{a+k+1}) / (1 - x_a...x_{a+k})` (0-based `k`) back
    /// to the `x` coordinates.
    pub fn pullback_y_transform(&self, a: usize) -> OneForm {
        let mut out = OneForm::zero();
        for (atom, &c) in &self.terms {
            match atom.kind {
                AtomKind::Coord => {
                    let k = atom.start;
                    out.add_atom(LogAtom::one_minus(a, a + k + 1), c);
                    out.add_atom(LogAtom::one_minus(a, a + k), -c);
                }
                AtomKind::OneMinus => {
                    let (i, j) = (atom.start, atom.end);
                    out.add_atom(LogAtom { kind: AtomKind::Coord, start: a, end: a + i }, c);
                    out.add_atom(LogAtom::one_minus(a + i + 1, a + j + 1), c);
                    out.add_atom(LogAtom::one_minus(a, a + i), -c);
                }
            }
        }
        out
    }
}

/// `x(i)`: the substitution `y_m = x_{τ_m}...x_{τ_{m+1}-1}` attached to an index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableMap {
    /// Inclusive 0-based coordinate ranges, one per nonzero component.
    pub blocks: Vec<(usize, usize)>,
    pub n: usize,
}

pub fn variable_map(i: &MultiIndex) -> Result<VariableMap> {
    let support = i.support();
    if support.is_empty() {
        return Err(Error::Precondition("the zero index has no variable map".into()));
    }
    let n = i.len();
    let blocks = support
        .iter()
        .enumerate()
        .map(|(m, &tau)| (tau, support.get(m + 1).map_or(n, |&next| next) - 1))
        .collect();
    Ok(VariableMap { blocks, n })
}

/// The letter `w^{r,δ}` of queue `q` at 0-based step `r`, written through the
/// variable map of `effective` (the image of `j_r` under the later
/// transpositions).
pub fn build_w(q: &IndexQueue, r: usize, delta: bool, effective: &MultiIndex) -> Result<OneForm> {
    if r >= q.len() {
        return Err(Error::Precondition(format!("step {r} outside a queue of length {}", q.len())));
    }
    let jr = &q.entries()[r];
    let s = q.steps()[r];
    let ts = jr.components()[s];
    let lambda = rank_in_support(jr, s);
    let l = jr.depth();
    let map = variable_map(effective)?;
    if map.blocks.len() != l {
        return Err(Error::Precondition(format!(
            "effective index {effective:?} has depth {} but j_r = {jr:?} has depth {l}",
            map.blocks.len()
        )));
    }
    let (a, b) = map.blocks[lambda];
    Ok(match (ts > 1, delta) {
        (true, true) => OneForm::zero(),
        (true, false) => OneForm::coord_range(a, b, 1),
        (false, false) => OneForm::one_minus(a, b, -1),
        (false, true) if lambda + 1 < l => OneForm::one_minus(a, b, 1).add(&OneForm::coord_range(a, b, -1)),
        (false, true) => OneForm::zero(),
    })
}

/// `w_t` (1-based `t`) in `n` plain variables.
pub fn multilog_w(t: usize, n: usize) -> Result<OneForm> {
    if t == 0 || t > n {
        return Err(Error::Precondition(format!("w_{t} is defined for 1 <= t <= {n}")));
    }
    let f = OneForm::one_minus(t - 1, t - 1, -1);
    if t == 1 {
        return Ok(f);
    }
    Ok(f.add(&OneForm::one_minus(t - 2, t - 2, 1)).add(&OneForm::coord_range(t - 2, t - 2, -1)))
}

/// `ω1(u) ω2(v) - ω1(v) ω2(u)` at `x`.
pub fn two_form_eval(w1: &OneForm, w2: &OneForm, x: &[C64], u: &[C64], v: &[C64], sing_tol: f64) -> Result<C64> {
    Ok(w1.pullback_eval(x, u, sing_tol)? * w2.pullback_eval(x, v, sing_tol)?
        - w1.pullback_eval(x, v, sing_tol)? * w2.pullback_eval(x, u, sing_tol)?)
}

/// `dω(u, v)` for constant vector fields, by central differences with step `h`.
pub fn exterior_derivative(w: &OneForm, x: &[C64], u: &[C64], v: &[C64], h: f64, sing_tol: f64) -> Result<C64> {
    let shift = |dir: &[C64], k: f64| -> Vec<C64> { x.iter().zip(dir).map(|(a, d)| a + d * k).collect() };
    let dv_u = (w.pullback_eval(&shift(u, h), v, sing_tol)? - w.pullback_eval(&shift(u, -h), v, sing_tol)?) / (2.0 * h);
    let du_v = (w.pullback_eval(&shift(v, h), u, sing_tol)? - w.pullback_eval(&shift(v, -h), u, sing_tol)?) / (2.0 * h);
    Ok(dv_u - du_v)
}

/// Difference between `w_2(X, Y)` and `w_1((1 - XY) / (1 - X))` evaluated on
/// the same tangent vector.
pub fn w2w1_check(x: C64, y: C64) -> Result<f64> {
    let one = C64::new(1.0, 0.0);
    let tol = DEFAULT_SING_TOL;
    if (one - x).norm() < tol || (one - x * y).norm() < tol || x.norm() < tol {
        return Err(Error::Singular(format!("w2w1 check at X = {x}, Y = {y}")));
    }
    let dir = [C64::new(0.37, 0.11), C64::new(-0.23, 0.41)];
    let lhs = multilog_w(2, 2)?.pullback_eval(&[x, y], &dir, tol)?;
    let u = (one - x * y) / (one - x);
    let du = ((-y * dir[0] - x * dir[1]) * (one - x) + (one - x * y) * dir[0]) / ((one - x) * (one - x));
    let rhs = multilog_w(1, 1)?.pullback_eval(&[u], &[du], tol)?;
    Ok((lhs - rhs).norm())
}

/// A single paper-notation fraction: `coeff * d(y)/(1-y)`, `d(y)/(y(y-1))`
/// or `d(y)/y` with `y` the product over a coordinate range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fraction {
    OneMinus { start: usize, end: usize, coeff: i64 },
    Pole { start: usize, end: usize, coeff: i64 },
    Coord { start: usize, end: usize, coeff: i64 },
}

/// Split a form into paper-notation fractions. Leftover coordinate atoms
/// are grouped into contiguous runs of equal coefficient.
pub fn fractions(w: &OneForm) -> Vec<Fraction> {
    let mut rest = w.clone();
    let mut out = vec![];
    let ones: Vec<(LogAtom, i64)> = w
        .terms()
        .iter()
        .filter(|(a, _)| a.kind == AtomKind::OneMinus)
        .map(|(a, c)| (*a, *c))
        .collect();
    for (a, c) in ones {
        let coords_match = (a.start..=a.end).all(|t| rest.terms().get(&LogAtom::coord(t)) == Some(&-c));
        if c > 0 && coords_match {
            out.push(Fraction::Pole { start: a.start, end: a.end, coeff: c });
            rest.add_atom(LogAtom::one_minus(a.start, a.end), -c);
            rest.add_atom(LogAtom { kind: AtomKind::Coord, start: a.start, end: a.end }, c);
        } else {
            out.push(Fraction::OneMinus { start: a.start, end: a.end, coeff: -c });
            rest.add_atom(a, -c);
        }
    }
    let mut run: Option<(usize, usize, i64)> = None;
    for (a, &c) in rest.terms() {
        match run {
            Some((s, e, k)) if k == c && e + 1 == a.start => run = Some((s, a.start, k)),
            Some((s, e, k)) => {
                out.push(Fraction::Coord { start: s, end: e, coeff: k });
                run = Some((a.start, a.start, c));
            }
            None => run = Some((a.start, a.start, c)),
        }
    }
    if let Some((s, e, k)) = run {
        out.push(Fraction::Coord { start: s, end: e, coeff: k });
    }
    out
}

fn var_name(t: usize, n: usize) -> String {
    if n <= 3 {
        ["x", "y", "z"][t].to_string()
    } else {
        format!("x_{{{}}}", t + 1)
    }
}

fn product_name(start: usize, end: usize, n: usize) -> String {
    (start..=end).map(|t| var_name(t, n)).collect()
}

fn differential(start: usize, end: usize, n: usize) -> String {
    if start == end {
        format!("d{}", product_name(start, end, n))
    } else {
        format!("d({})", product_name(start, end, n))
    }
}

fn with_coeff(body: String, coeff: i64) -> String {
    match coeff {
        1 => body,
        -1 => format!("-{body}"),
        k => format!("{k}{body}"),
    }
}

impl Fraction {
    /// LaTeX in the variables `x, y, z` (or `x_{i}` when `n > 3`).
    pub fn latex(&self, n: usize) -> String {
        match *self {
            Fraction::OneMinus { start, end, coeff } => with_coeff(
                format!("\\frac{{{}}}{{1-{}}}", differential(start, end, n), product_name(start, end, n)),
                coeff,
            ),
            Fraction::Pole { start, end, coeff } => {
                let p = product_name(start, end, n);
                with_coeff(format!("\\frac{{{}}}{{{p}({p}-1)}}", differential(start, end, n)), coeff)
            }
            Fraction::Coord { start, end, coeff } => with_coeff(
                format!("\\frac{{{}}}{{{}}}", differential(start, end, n), product_name(start, end, n)),
                coeff,
            ),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Fraction::OneMinus { .. } => 0,
            Fraction::Pole { .. } => 1,
            Fraction::Coord { .. } => 2,
        }
    }
}

/// LaTeX for a sum of forms, one summand per form, ordered with the
/// `1/(1-y)` fractions first.
pub fn latex_sum(forms: &[OneForm], n: usize) -> String {
    let mut fr: Vec<Fraction> = forms.iter().flat_map(fractions).collect();
    fr.sort_by_key(|f| f.rank());
    if fr.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, f) in fr.iter().enumerate() {
        let t = f.latex(n);
        if k > 0 && !t.starts_with('-') {
            s.push('+');
        }
        s.push_str(&t);
    }
    if fr.len() > 1 {
        format!("\\left({s}\\right)")
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{enumerate_queues, Bounds};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn real(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&r| c(r, 0.0)).collect()
    }

    #[test]
    fn canonical_expansion() {
        let a = OneForm::coord_range(0, 2, 1);
        let mut b = OneForm::zero();
        b.add_atom(LogAtom::coord(2), 1);
        b.add_atom(LogAtom::coord(0), 1);
        b.add_atom(LogAtom::coord(1), 1);
        assert_eq!(a, b);
        let mut z = a.clone();
        z.add_atom(LogAtom { kind: AtomKind::Coord, start: 0, end: 2 }, -1);
        assert!(z.is_zero());
    }

    #[test]
    fn variable_maps() {
        let b3 = Bounds::new(&[1, 1, 1]).unwrap();
        assert_eq!(variable_map(&b3.index(&[0, 1, 0]).unwrap()).unwrap().blocks, vec![(1, 2)]);
        assert_eq!(variable_map(&b3.index(&[1, 0, 1]).unwrap()).unwrap().blocks, vec![(0, 1), (2, 2)]);
        assert_eq!(variable_map(&b3.top()).unwrap().blocks, vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(variable_map(&b3.index(&[1, 1, 0]).unwrap()).unwrap().blocks, vec![(0, 0), (1, 2)]);
        assert!(variable_map(&b3.zero()).is_err());
    }

    #[test]
    fn build_w_examples() {
        let b2 = Bounds::new(&[1, 1]).unwrap();
        let q = IndexQueue::from_steps(&b2, &[0, 1]).unwrap();
        let first = build_w(&q, 0, false, &q.entries()[0]).unwrap();
        assert_eq!(first, OneForm::one_minus(0, 1, -1));
        assert!(build_w(&q, 1, true, &q.entries()[1]).unwrap().is_zero());
        // the pole letter comes from the other queue, whose first entry is
        // swapped to (1,0) by the switch at step 2
        let q = IndexQueue::from_steps(&b2, &[1, 0]).unwrap();
        let swapped = q.effective_index(0, &[false, true]).unwrap();
        assert_eq!(swapped.components(), &[1, 0]);
        assert_eq!(build_w(&q, 0, false, &swapped).unwrap(), first);
        let second = build_w(&q, 1, true, &q.entries()[1]).unwrap();
        assert_eq!(second, OneForm::one_minus(0, 0, 1).add(&OneForm::coord_range(0, 0, -1)));
        assert_eq!(latex_sum(&[first], 2), "\\frac{d(xy)}{1-xy}");
        assert_eq!(latex_sum(&[second], 2), "\\frac{dx}{x(x-1)}");

        let b2 = Bounds::new(&[2]).unwrap();
        let q = IndexQueue::from_steps(&b2, &[0, 0]).unwrap();
        assert!(build_w(&q, 1, true, &q.entries()[1]).unwrap().is_zero());
        assert_eq!(build_w(&q, 1, false, &q.entries()[1]).unwrap(), OneForm::coord_range(0, 0, 1));
    }

    #[test]
    fn first_letter_never_has_a_pole_at_zero() {
        for m in [vec![1, 1, 1], vec![2, 1], vec![1, 2], vec![3]] {
            let b = Bounds::new(&m).unwrap();
            for q in enumerate_queues(&b) {
                let f = build_w(&q, 0, true, &q.entries()[0]).unwrap();
                assert!(f.is_zero());
                let f = build_w(&q, 0, false, &q.entries()[0]).unwrap();
                assert!(f.terms().keys().all(|a| a.kind == AtomKind::OneMinus));
            }
        }
    }

    #[test]
    fn multilog_forms() {
        assert_eq!(multilog_w(1, 3).unwrap(), OneForm::one_minus(0, 0, -1));
        let w2 = multilog_w(2, 2).unwrap();
        let map = VariableMap { blocks: vec![(0, 0), (1, 1)], n: 2 };
        assert_eq!(latex_sum(&[w2.substitute(&map).unwrap()], 2), "\\left(\\frac{dy}{1-y}+\\frac{dx}{x(x-1)}\\right)");
        assert!(multilog_w(0, 2).is_err());
        assert!(multilog_w(2, 1).is_err());
    }

    #[test]
    fn pullback_examples() {
        let d = OneForm::coord_range(0, 0, 1);
        assert!((d.pullback_eval(&real(&[2.0]), &real(&[1.0]), 1e-9).unwrap() - 0.5).norm() < 1e-15);
        let w1 = multilog_w(1, 1).unwrap();
        assert!((w1.pullback_eval(&real(&[0.0]), &real(&[1.0]), 1e-9).unwrap() - 1.0).norm() < 1e-15);
        assert!(matches!(w1.pullback_eval(&real(&[1.0]), &real(&[1.0]), 1e-9), Err(Error::Singular(_))));
        assert!(matches!(d.pullback_eval(&real(&[0.0]), &real(&[1.0]), 1e-9), Err(Error::Singular(_))));
        assert_eq!(d.pullback_eval(&real(&[0.0]), &real(&[0.0]), 1e-9).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn pullback_matches_finite_difference_of_log() {
        let w2 = multilog_w(2, 2).unwrap();
        let x = [c(0.31, 0.2), c(0.42, -0.15)];
        let v = [c(0.7, -0.1), c(-0.3, 0.5)];
        let g = |x: &[C64]| (C64::new(1.0, 0.0) - x[0].inv()) / (C64::new(1.0, 0.0) - x[1]);
        let h = 1e-6;
        let xp: Vec<C64> = x.iter().zip(&v).map(|(a, b)| a + b * h).collect();
        let xm: Vec<C64> = x.iter().zip(&v).map(|(a, b)| a - b * h).collect();
        let fd = (g(&xp).ln() - g(&xm).ln()) / (2.0 * h);
        assert!((w2.pullback_eval(&x, &v, 1e-9).unwrap() - fd).norm() < 1e-8);
    }

    #[test]
    fn two_form_examples() {
        let a = OneForm::coord_range(0, 0, 1);
        let b = OneForm::coord_range(1, 1, 1);
        let x = real(&[2.0, 3.0]);
        let val = two_form_eval(&a, &b, &x, &real(&[1.0, 0.0]), &real(&[0.0, 1.0]), 1e-9).unwrap();
        assert!((val - 1.0 / 6.0).norm() < 1e-15);
        let w = multilog_w(2, 2).unwrap();
        let u = [c(0.3, 0.1), c(0.2, -0.4)];
        let v = [c(-0.5, 0.2), c(0.1, 0.3)];
        let x = [c(0.3, 0.2), c(0.6, 0.1)];
        assert!(two_form_eval(&w, &w, &x, &u, &v, 1e-9).unwrap().norm() < 1e-15);
    }

    #[test]
    fn w2w1() {
        assert!(w2w1_check(c(0.3, 0.0), c(0.4, 0.0)).unwrap() <= 1e-12);
        assert!(w2w1_check(c(0.5, 0.0), c(0.0, 0.0)).unwrap() <= 1e-12);
        assert!(w2w1_check(c(1.0, 0.0), c(0.4, 0.0)).is_err());
    }

    #[test]
    fn y_transform_pullback_is_exact() {
        // dlog y_2 and dlog(1 - y_1 y_2) with y_k = (1 - x1..x_{k+1}) / (1 - x1..x_k)
        let x = [c(0.3, 0.2), c(0.5, -0.1), c(0.4, 0.3)];
        let v = [c(0.2, 0.1), c(-0.3, 0.4), c(0.5, -0.2)];
        let one = C64::new(1.0, 0.0);
        let y = |x: &[C64]| {
            let p1 = x[0];
            let p2 = x[0] * x[1];
            let p3 = p2 * x[2];
            [(one - p2) / (one - p1), (one - p3) / (one - p2)]
        };
        let h = 1e-6;
        let xp: Vec<C64> = x.iter().zip(&v).map(|(a, b)| a + b * h).collect();
        let xm: Vec<C64> = x.iter().zip(&v).map(|(a, b)| a - b * h).collect();
        let (yp, ym) = (y(&xp), y(&xm));
        let fd_coord = (yp[1].ln() - ym[1].ln()) / (2.0 * h);
        let fd_prod = ((one - yp[0] * yp[1]).ln() - (one - ym[0] * ym[1]).ln()) / (2.0 * h);
        let got_coord = OneForm::coord_range(1, 1, 1).pullback_y_transform(0).pullback_eval(&x, &v, 1e-9).unwrap();
        let got_prod = OneForm::one_minus(0, 1, 1).pullback_y_transform(0).pullback_eval(&x, &v, 1e-9).unwrap();
        assert!((got_coord - fd_coord).norm() < 1e-7);
        assert!((got_prod - fd_prod).norm() < 1e-7);
    }

    #[test]
    fn fraction_rendering() {
        assert_eq!(latex_sum(&[OneForm::coord_range(0, 1, 1)], 2), "\\frac{d(xy)}{xy}");
        let pole = OneForm::one_minus(0, 1, 1).add(&OneForm::coord_range(0, 1, -1));
        assert_eq!(latex_sum(&[pole], 3), "\\frac{d(xy)}{xy(xy-1)}");
        assert_eq!(latex_sum(&[OneForm::one_minus(3, 4, -2)], 5), "2\\frac{d(x_{4}x_{5})}{1-x_{4}x_{5}}");
        assert_eq!(latex_sum(&[], 2), "0");
    }

    #[test]
    fn key_wedge_relation_n2() {
        // dy/(1-y) ^ dx/(1-x) + d(xy)/(1-xy) ^ (dy/(1-y) - dx/(1-x) - dx/x) = 0
        let dx = OneForm::one_minus(0, 0, -1);
        let dy = OneForm::one_minus(1, 1, -1);
        let dxy = OneForm::one_minus(0, 1, -1);
        let rest = dy.add(&dx.scale(-1)).add(&OneForm::coord_range(0, 0, -1));
        let mut sampler = crate::sampling::Sampler::new(11);
        for _ in 0..10 {
            let x = sampler.polydisk(2);
            let (u, v) = (sampler.vector(2, 1.0), sampler.vector(2, 1.0));
            let total = two_form_eval(&dy, &dx, &x, &u, &v, 1e-9).unwrap() + two_form_eval(&dxy, &rest, &x, &u, &v, 1e-9).unwrap();
            assert!(total.norm() < 1e-12, "{total}");
        }
    }
}
