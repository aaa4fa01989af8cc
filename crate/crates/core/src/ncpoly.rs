//! Noncommutative polynomials: finite maps from words to coefficients.

use std::collections::BTreeMap;

use crate::scalar::{GaussianRational, ScalarExpr, VSeries};

/// A word over generator indices (zero-based); the empty word is the unit.
pub type Word = Vec<u8>;

/// Coefficient ring of an [`NCPoly`].
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn scale(&self, c: &GaussianRational) -> Self;
    /// `(negative, body)` for display in front of a word.
    fn render(&self, latex: bool) -> (bool, String);
    fn is_one(&self) -> bool;
}

impl Coeff for ScalarExpr {
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ScalarExpr::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarExpr::mul(self, o)
    }
    fn neg(&self) -> Self {
        ScalarExpr::neg(self)
    }
    fn conj(&self) -> Self {
        ScalarExpr::conj(self)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        ScalarExpr::scale(self, c)
    }
    fn render(&self, latex: bool) -> (bool, String) {
        if latex {
            self.coeff_latex()
        } else {
            self.coeff_text()
        }
    }
    fn is_one(&self) -> bool {
        ScalarExpr::is_one(self)
    }
}

impl Coeff for VSeries {
    fn is_zero(&self) -> bool {
        VSeries::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        VSeries::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        VSeries::mul(self, o)
    }
    fn neg(&self) -> Self {
        VSeries::neg(self)
    }
    fn conj(&self) -> Self {
        VSeries::conj(self)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        VSeries::scale(self, c)
    }
    fn render(&self, latex: bool) -> (bool, String) {
        let s = if latex { self.to_latex() } else { self.to_string() };
        let single = !s.trim_start_matches('-').contains(" + ") && !s.trim_start_matches('-').contains(" - ");
        if single {
            match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            }
        } else if latex {
            (false, format!("\\left({s}\\right)"))
        } else {
            (false, format!("({s})"))
        }
    }
    fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCPoly<C> {
    terms: BTreeMap<Word, C>,
}

impl<C> Default for NCPoly<C> {
    fn default() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> NCPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(w: Word, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, C> {
        self.terms
    }

    pub fn coeff(&self, w: &[u8]) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&w) {
            Some(v) => {
                *v = v.add(&c);
                v.is_zero()
            }
            None => {
                self.terms.insert(w, c);
                return;
            }
        };
        if remove {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                r.add_term(w, c1.mul(c2));
            }
        }
        r
    }

    /// Multiplies every coefficient by `c` (central scalar).
    pub fn scale_by(&self, c: &C) -> Self {
        let mut r = Self::zero();
        for (w, k) in &self.terms {
            r.add_term(w.clone(), k.mul(c));
        }
        r
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut r = Self::zero();
        for (w, k) in &self.terms {
            r.add_term(w.clone(), k.scale(c));
        }
        r
    }

    /// Renames generators letter by letter.
    pub fn relabel(&self, f: impl Fn(u8) -> u8) -> Self {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            r.add_term(w.iter().map(|&x| f(x)).collect(), c.clone());
        }
        r
    }

    pub fn map_coeffs<D: Coeff, E>(&self, mut f: impl FnMut(&C) -> Result<D, E>) -> Result<NCPoly<D>, E> {
        let mut r = NCPoly::zero();
        for (w, c) in &self.terms {
            r.add_term(w.clone(), f(c)?);
        }
        Ok(r)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn contains_letter(&self, x: u8) -> bool {
        self.terms.keys().any(|w| w.contains(&x))
    }

    /// Text rendering with generator names supplied by `name`.
    pub fn render(&self, name: &dyn Fn(u8) -> String, latex: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // longer words first, then lexicographic: matches reading order of
        // hand-written relations
        let mut items: Vec<(&Word, &C)> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(b.1.is_one().cmp(&a.1.is_one())).then(a.0.cmp(b.0)));
        for (idx, (w, c)) in items.into_iter().enumerate() {
            let (neg, body) = c.render(latex);
            let word = render_word(w, name, latex);
            let piece = match (w.is_empty(), body.as_str()) {
                (true, _) => body.clone(),
                (false, "1") => word,
                (false, _) if latex => format!("{body}\\,{word}"),
                (false, _) => match body.rsplit_once('/') {
                    Some((num, den)) if !body.starts_with('(') && !den.contains(')') => format!("{num}*{word}/{den}"),
                    _ => format!("{body}*{word}"),
                },
            };
            match (idx, neg) {
                (0, true) => out.push_str(&format!("-{piece}")),
                (0, false) => out.push_str(&piece),
                (_, true) => out.push_str(&format!(" - {piece}")),
                (_, false) => out.push_str(&format!(" + {piece}")),
            }
        }
        out
    }
}

/// `x1*x2^2` style rendering of a word with runs collapsed.
pub fn render_word(w: &[u8], name: &dyn Fn(u8) -> String, latex: bool) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let n = j - i;
        let base = name(w[i]);
        parts.push(match (n, latex) {
            (1, _) => base,
            (n, true) => format!("{base}^{{{n}}}"),
            (n, false) => format!("{base}^{n}"),
        });
        i = j;
    }
    parts.join(if latex { " " } else { "*" })
}

/// Generator names `xi1…`, `r1…`, `rh1…`.
pub fn xi_name(x: u8) -> String {
    format!("xi{}", x + 1)
}

pub fn xi_latex(x: u8) -> String {
    format!("\\xi_{{{}}}", x + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ScalarExpr {
        ScalarExpr::int(2, n)
    }

    #[test]
    fn multiplication_concatenates() {
        let a = NCPoly::term(vec![0], s(1)).add(&NCPoly::term(vec![1], s(2)));
        let b = NCPoly::term(vec![1], s(1));
        let p = a.mul(&b);
        assert_eq!(p.coeff(&[0, 1]), Some(&s(1)));
        assert_eq!(p.coeff(&[1, 1]), Some(&s(2)));
        assert_eq!(p.render(&xi_name, false), "xi1*xi2 + 2*xi2^2");
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = NCPoly::term(vec![0, 1], s(3));
        assert!(a.sub(&a).is_zero());
    }
}
