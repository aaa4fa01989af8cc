//! Shared text/LaTeX layout for sums of coefficient·factor products.

use super::gaussian::{coeff_parts, GaussianRational};
use super::monomial::JMonomial;

/// Name of parameter slot `k` (zero-based) in plain text.
pub fn param_name(k: usize, nil: u16) -> String {
    if nil & (1 << k) != 0 {
        format!("iota{}", k + 1)
    } else {
        format!("j{}", k + 1)
    }
}

pub fn param_latex(k: usize, nil: u16) -> String {
    if nil & (1 << k) != 0 {
        format!("\\iota_{{{}}}", k + 1)
    } else {
        format!("j_{{{}}}", k + 1)
    }
}

pub fn mono_factors(m: &JMonomial, nil: u16) -> Vec<String> {
    m.render_with(|k| param_name(k, nil))
}

pub fn mono_latex(m: &JMonomial, nil: u16) -> Vec<String> {
    m.latex_with(|k| param_latex(k, nil))
}

pub fn v_factor(p: u32) -> Option<String> {
    match p {
        0 => None,
        1 => Some("v".into()),
        p => Some(format!("v^{p}")),
    }
}

/// One signed term: `(negative, body)`.
pub fn text_term(c: &GaussianRational, factors: Vec<String>) -> (bool, String) {
    let parts = coeff_parts(c);
    let mut all = parts.factors;
    all.extend(factors);
    let mut body = if all.is_empty() { "1".to_string() } else { all.join("*") };
    if let Some(d) = parts.denom {
        body = format!("{body}/{d}");
    }
    (parts.negative, body)
}

pub fn latex_term(c: &GaussianRational, factors: Vec<String>) -> (bool, String) {
    let parts = coeff_parts(c);
    let num: Vec<String> = parts.factors;
    let mut body = match (&parts.denom, num.is_empty()) {
        (Some(d), true) => format!("\\frac{{1}}{{{d}}}"),
        (Some(d), false) => format!("\\frac{{{}}}{{{d}}}", num.join("")),
        (None, _) => num.join(""),
    };
    if !factors.is_empty() {
        if !body.is_empty() {
            body.push(' ');
        }
        body.push_str(&factors.join(" "));
    }
    if body.is_empty() {
        body = "1".into();
    }
    (parts.negative, body)
}

pub fn join_signed(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (neg, body)) in terms.into_iter().enumerate() {
        match (idx, neg) {
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (0, false) => out.push_str(&body),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
    }
    out
}

/// Wraps a sum in parentheses when it has more than one term.
pub fn paren_if_sum(s: &str) -> String {
    let inner = s.strip_prefix('-').unwrap_or(s);
    if inner.contains(" + ") || inner.contains(" - ") {
        format!("({s})")
    } else {
        s.to_string()
    }
}
