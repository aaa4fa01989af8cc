use std::collections::BTreeMap;
use std::fmt;

use super::gaussian::GaussianRational;

/// Largest number of contraction parameters supported (N ≤ 8).
pub const MAX_PARAMS: usize = 7;

/// Laurent monomial `j1^e1 … j{n}^e{n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JMonomial {
    len: u8,
    exps: [i16; MAX_PARAMS],
}

impl JMonomial {
    pub fn one(len: usize) -> Self {
        assert!(len <= MAX_PARAMS, "at most {MAX_PARAMS} parameters");
        JMonomial { len: len as u8, exps: [0; MAX_PARAMS] }
    }

    pub fn from_exps(exps: &[i32]) -> Self {
        let mut m = Self::one(exps.len());
        for (k, &e) in exps.iter().enumerate() {
            m.exps[k] = e as i16;
        }
        m
    }

    /// `j_{k+1}^e` (zero-based slot `k`).
    pub fn var(len: usize, k: usize, e: i32) -> Self {
        let mut m = Self::one(len);
        m.exps[k] = e as i16;
        m
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn exps(&self) -> &[i16] {
        &self.exps[..self.len as usize]
    }

    pub fn exp(&self, k: usize) -> i32 {
        self.exps[k] as i32
    }

    pub fn set_exp(&mut self, k: usize, e: i32) {
        self.exps[k] = e as i16;
    }

    pub fn to_vec(&self) -> Vec<i32> {
        self.exps().iter().map(|&e| e as i32).collect()
    }

    pub fn is_one(&self) -> bool {
        self.exps().iter().all(|&e| e == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.exps().iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, o: &JMonomial) -> JMonomial {
        debug_assert_eq!(self.len, o.len);
        let mut r = *self;
        for k in 0..self.len as usize {
            r.exps[k] += o.exps[k];
        }
        r
    }

    pub fn div(&self, o: &JMonomial) -> JMonomial {
        self.mul(&o.inv())
    }

    pub fn inv(&self) -> JMonomial {
        self.pow(-1)
    }

    pub fn pow(&self, p: i32) -> JMonomial {
        let mut r = *self;
        for k in 0..self.len as usize {
            r.exps[k] = (self.exps[k] as i32 * p) as i16;
        }
        r
    }

    /// Componentwise `max(0, −e)`.
    pub fn negative_part(&self) -> JMonomial {
        let mut r = *self;
        for k in 0..self.len as usize {
            r.exps[k] = (-self.exps[k]).max(0);
        }
        r
    }

    /// Componentwise maximum.
    pub fn lcm(&self, o: &JMonomial) -> JMonomial {
        let mut r = *self;
        for k in 0..self.len as usize {
            r.exps[k] = self.exps[k].max(o.exps[k]);
        }
        r
    }

    pub fn dominates(&self, o: &JMonomial) -> bool {
        self.exps().iter().zip(o.exps()).all(|(a, b)| a >= b)
    }

    /// Text form with a custom name per slot, e.g. `j1^2*j2`.
    pub fn render_with(&self, name: impl Fn(usize) -> String) -> Vec<String> {
        self.exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(k, &e)| if e == 1 { name(k) } else { format!("{}^{}", name(k), e) })
            .collect()
    }

    pub fn latex_with(&self, name: impl Fn(usize) -> String) -> Vec<String> {
        self.exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(k, &e)| if e == 1 { name(k) } else { format!("{}^{{{}}}", name(k), e) })
            .collect()
    }
}

impl fmt::Debug for JMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{:?}", self.exps())
    }
}

impl fmt::Display for JMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.render_with(|k| format!("j{}", k + 1));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Finite Laurent polynomial in the j-parameters with Gaussian coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JPolynomial {
    nvars: u8,
    terms: BTreeMap<JMonomial, GaussianRational>,
}

impl JPolynomial {
    pub fn zero(nvars: usize) -> Self {
        JPolynomial { nvars: nvars as u8, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::term(JMonomial::one(nvars), c)
    }

    pub fn term(m: JMonomial, c: GaussianRational) -> Self {
        let mut p = Self::zero(m.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &JMonomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The single term, if there is exactly one.
    pub fn single(&self) -> Option<(&JMonomial, &GaussianRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: JMonomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, o: &JPolynomial) -> JPolynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c);
        }
        r
    }

    pub fn neg(&self) -> JPolynomial {
        JPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, o: &JPolynomial) -> JPolynomial {
        self.add(&o.neg())
    }

    /// Product; terms whose exponent in a slot of `nil` reaches 2 are dropped.
    pub fn mul_masked(&self, o: &JPolynomial, nil: u16) -> JPolynomial {
        let mut r = JPolynomial::zero(self.nvars());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                if nil_annihilates(&m, nil) {
                    continue;
                }
                r.add_term(m, &(c1 * c2));
            }
        }
        r
    }

    pub fn mul(&self, o: &JPolynomial) -> JPolynomial {
        self.mul_masked(o, 0)
    }

    pub fn scale(&self, c: &GaussianRational) -> JPolynomial {
        if c.is_zero() {
            return JPolynomial::zero(self.nvars());
        }
        JPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &JMonomial, nil: u16) -> JPolynomial {
        let mut r = JPolynomial::zero(self.nvars());
        for (m1, c) in &self.terms {
            let mm = m1.mul(m);
            if !nil_annihilates(&mm, nil) {
                r.add_term(mm, c);
            }
        }
        r
    }

    pub fn conj(&self) -> JPolynomial {
        JPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn map_terms(&self, f: impl Fn(&JMonomial, &GaussianRational) -> Option<(JMonomial, GaussianRational)>) -> JPolynomial {
        let mut r = JPolynomial::zero(self.nvars());
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                r.add_term(m2, &c2);
            }
        }
        r
    }
}

/// A term dies when a nilpotent slot carries exponent ≥ 2.
pub(crate) fn nil_annihilates(m: &JMonomial, nil: u16) -> bool {
    if nil == 0 {
        return false;
    }
    (0..m.len()).any(|k| nil & (1 << k) != 0 && m.exp(k) >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_algebra() {
        let a = JMonomial::from_exps(&[1, 2, 0]);
        let b = JMonomial::from_exps(&[0, 1, 1]);
        assert_eq!(a.lcm(&b), JMonomial::from_exps(&[1, 2, 1]));
        assert_eq!(a.mul(&b.inv()), JMonomial::from_exps(&[1, 1, -1]));
        assert_eq!(a.mul(&b.inv()).negative_part(), JMonomial::from_exps(&[0, 0, 1]));
        assert_eq!(a.to_string(), "j1*j2^2");
        assert_eq!(JMonomial::one(2).to_string(), "1");
    }

    #[test]
    fn masked_product_kills_squares() {
        let iota = JPolynomial::term(JMonomial::var(2, 0, 1), GaussianRational::one());
        let sq = iota.mul_masked(&iota, 0b01);
        assert!(sq.is_zero());
        let other = JPolynomial::term(JMonomial::var(2, 1, 1), GaussianRational::one());
        assert!(!iota.mul_masked(&other, 0b11).is_zero());
    }
}
