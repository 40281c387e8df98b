//! Reader for the fraction notation used in the golden expansion files.
//!
//! Each nonempty line is one product of factors; a factor is a single
//! `\frac{..}{..}` or a `\left( .. \right)` sum of them. Variables are the
//! letters `x, y, z` for coordinates 1, 2, 3.

#![allow(dead_code)]

use std::path::PathBuf;

use mpolylog::forms::OneForm;
use mpolylog::integrand::{Integrand, TensorWord};

pub fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn range(product: &str) -> (usize, usize) {
    let idx: Vec<usize> = product
        .chars()
        .map(|c| "xyz".find(c).unwrap_or_else(|| panic!("unknown variable {c}")))
        .collect();
    assert!(idx.windows(2).all(|w| w[1] == w[0] + 1), "non-contiguous product {product}");
    (idx[0], *idx.last().unwrap())
}

/// `\frac{num}{den}` as a form.
fn fraction(num: &str, den: &str) -> OneForm {
    let p = num.strip_prefix('d').expect("numerator is a differential");
    let p = p.trim_start_matches('(').trim_end_matches(')');
    let (a, b) = range(p);
    if den == format!("1-{p}") {
        OneForm::one_minus(a, b, -1)
    } else if den == format!("{p}({p}-1)") {
        OneForm::one_minus(a, b, 1).add(&OneForm::coord_range(a, b, -1))
    } else if den == p {
        OneForm::coord_range(a, b, 1)
    } else {
        panic!("unrecognised fraction \\frac{{{num}}}{{{den}}}")
    }
}

/// Contents of the brace group starting at `s[0] == '{'`, and the rest.
fn braced(s: &str) -> (&str, &str) {
    assert!(s.starts_with('{'), "expected a brace group at {s}");
    let mut depth = 0;
    for (k, ch) in s.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return (&s[1..k], &s[k + 1..]);
                }
            }
            _ => {}
        }
    }
    panic!("unbalanced braces in {s}")
}

/// Signed fractions of a sum `\frac..+\frac..-\frac..`.
fn sum(mut s: &str) -> Vec<(i64, OneForm)> {
    let mut out = vec![];
    while !s.is_empty() {
        let sign = if let Some(r) = s.strip_prefix('-') {
            s = r;
            -1
        } else {
            s = s.strip_prefix('+').unwrap_or(s);
            1
        };
        let r = s.strip_prefix("\\frac").unwrap_or_else(|| panic!("expected \\frac at {s}"));
        let (num, r) = braced(r);
        let (den, r) = braced(r);
        out.push((sign, fraction(num, den)));
        s = r;
    }
    out
}

/// Parse a display into the distributed integrand it denotes.
pub fn parse_display(text: &str, n: usize) -> Integrand {
    let mut integrand = Integrand::new(n);
    for line in text.lines() {
        let mut s: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            continue;
        }
        let mut coeff = 1;
        if let Some(r) = s.strip_prefix('+') {
            s = r.to_string();
        } else if let Some(r) = s.strip_prefix('-') {
            coeff = -1;
            s = r.to_string();
        }
        let mut factors: Vec<Vec<(i64, OneForm)>> = vec![];
        let mut rest = s.as_str();
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix("\\left(") {
                let end = r.find("\\right)").expect("closing \\right)");
                factors.push(sum(&r[..end]));
                rest = &r[end + "\\right)".len()..];
            } else {
                let r = rest.strip_prefix("\\frac").unwrap_or_else(|| panic!("expected a factor at {rest}"));
                let (num, r) = braced(r);
                let (den, r) = braced(r);
                factors.push(vec![(1, fraction(num, den))]);
                rest = r;
            }
        }
        let mut words: Vec<(i64, Vec<OneForm>)> = vec![(coeff, vec![])];
        for f in &factors {
            let mut next = vec![];
            for (c, w) in &words {
                for (k, form) in f {
                    let mut w = w.clone();
                    w.push(form.clone());
                    next.push((c * k, w));
                }
            }
            words = next;
        }
        for (coeff, letters) in words {
            integrand.push(TensorWord { coeff, letters });
        }
    }
    integrand
}

/// Product lines with whitespace and leading `+` removed, sorted.
pub fn product_lines(text: &str) -> Vec<String> {
    let mut v: Vec<String> = text
        .lines()
        .map(|l| l.chars().filter(|c| !c.is_whitespace()).collect::<String>())
        .filter(|l| !l.is_empty())
        .map(|l| l.strip_prefix('+').map(str::to_owned).unwrap_or(l))
        .collect();
    v.sort();
    v
}
