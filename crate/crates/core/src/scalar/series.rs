use std::fmt;

use serde::{Deserialize, Serialize};

use super::assignment::{JAssignment, UndefinedContraction};
use super::gaussian::{parse_rational, rational_str, GaussianRational};
use super::monomial::{nil_annihilates, JMonomial, JPolynomial};
use super::render::{join_signed, latex_term, mono_factors, mono_latex, text_term, v_factor};
use super::ScalarError;

/// Shape shared by every series in one computation: number of parameters,
/// truncation order and the mask of nilpotent slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeriesCtx {
    pub nvars: usize,
    pub order: usize,
    pub nil: u16,
}

impl SeriesCtx {
    pub fn new(nvars: usize, order: usize) -> Self {
        SeriesCtx { nvars, order, nil: 0 }
    }

    pub fn with_nil(self, nil: u16) -> Self {
        SeriesCtx { nil, ..self }
    }
}

/// Truncated power series in `v` with Laurent-polynomial coefficients,
/// exact to `v^order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VSeries {
    ctx: SeriesCtx,
    coeffs: Vec<JPolynomial>,
}

impl VSeries {
    pub fn zero(ctx: SeriesCtx) -> Self {
        VSeries { ctx, coeffs: vec![JPolynomial::zero(ctx.nvars); ctx.order + 1] }
    }

    pub fn one(ctx: SeriesCtx) -> Self {
        Self::constant(ctx, GaussianRational::one())
    }

    pub fn constant(ctx: SeriesCtx, c: GaussianRational) -> Self {
        Self::term(ctx, JMonomial::one(ctx.nvars), c, 0)
    }

    /// `c · m · v^p`.
    pub fn term(ctx: SeriesCtx, m: JMonomial, c: GaussianRational, p: usize) -> Self {
        let mut s = Self::zero(ctx);
        if p <= ctx.order && !nil_annihilates(&m, ctx.nil) {
            s.coeffs[p] = JPolynomial::term(m, c);
        }
        s
    }

    pub fn v(ctx: SeriesCtx) -> Self {
        Self::term(ctx, JMonomial::one(ctx.nvars), GaussianRational::one(), 1)
    }

    pub fn from_coeffs(ctx: SeriesCtx, mut coeffs: Vec<JPolynomial>) -> Self {
        coeffs.resize(ctx.order + 1, JPolynomial::zero(ctx.nvars));
        coeffs.truncate(ctx.order + 1);
        VSeries { ctx, coeffs }
    }

    pub fn ctx(&self) -> SeriesCtx {
        self.ctx
    }

    pub fn order(&self) -> usize {
        self.ctx.order
    }

    pub fn coeff(&self, k: usize) -> &JPolynomial {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[JPolynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest power of `v` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_v_divisible(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// Constant term is a nonzero multiple of one monomial free of nilpotents.
    pub fn is_unit(&self) -> bool {
        match self.coeffs[0].single() {
            Some((m, _)) => (0..m.len()).all(|k| self.ctx.nil & (1 << k) == 0 || m.exp(k) == 0),
            None => false,
        }
    }

    fn joint(&self, o: &VSeries) -> Result<SeriesCtx, ScalarError> {
        if self.ctx.order != o.ctx.order {
            return Err(ScalarError::OrderMismatch(self.ctx.order, o.ctx.order));
        }
        Ok(SeriesCtx { nil: self.ctx.nil | o.ctx.nil, ..self.ctx })
    }

    pub fn try_add(&self, o: &VSeries) -> Result<VSeries, ScalarError> {
        let ctx = self.joint(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect();
        Ok(VSeries { ctx, coeffs })
    }

    pub fn try_mul(&self, o: &VSeries) -> Result<VSeries, ScalarError> {
        let ctx = self.joint(o)?;
        let mut out = VSeries::zero(ctx);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(ctx.order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                let p = a.mul_masked(b, ctx.nil);
                out.coeffs[i + j] = out.coeffs[i + j].add(&p);
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &VSeries) -> VSeries {
        self.try_add(o).expect("series order mismatch")
    }

    pub fn sub(&self, o: &VSeries) -> VSeries {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &VSeries) -> VSeries {
        self.try_mul(o).expect("series order mismatch")
    }

    pub fn neg(&self) -> VSeries {
        VSeries { ctx: self.ctx, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> VSeries {
        VSeries { ctx: self.ctx, coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn mul_monomial(&self, m: &JMonomial) -> VSeries {
        VSeries {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|p| p.mul_monomial(m, self.ctx.nil)).collect(),
        }
    }

    /// Multiplication by `v^p`.
    pub fn shift(&self, p: usize) -> VSeries {
        let mut out = VSeries::zero(self.ctx);
        for k in 0..=self.ctx.order {
            if k + p <= self.ctx.order {
                out.coeffs[k + p] = self.coeffs[k].clone();
            }
        }
        out
    }

    pub fn conj(&self) -> VSeries {
        VSeries { ctx: self.ctx, coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    /// Multiplicative inverse to order `O`; the constant term must be a
    /// unit (single nonzero monomial, no nilpotent factor).
    pub fn try_inv(&self) -> Result<VSeries, ScalarError> {
        let (m0, c0) = match self.coeffs[0].single() {
            Some(t) if self.is_unit() => t,
            _ => return Err(ScalarError::NotInvertible(self.to_string())),
        };
        let b0 = JPolynomial::term(m0.inv(), c0.inv().expect("nonzero"));
        let mut out = VSeries::zero(self.ctx);
        out.coeffs[0] = b0.clone();
        for k in 1..=self.ctx.order {
            let mut acc = JPolynomial::zero(self.ctx.nvars);
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul_masked(&out.coeffs[k - i], self.ctx.nil));
            }
            out.coeffs[k] = acc.mul_masked(&b0, self.ctx.nil).neg();
        }
        Ok(out)
    }

    pub fn pow(&self, p: i32) -> Result<VSeries, ScalarError> {
        let base = if p < 0 { self.try_inv()? } else { self.clone() };
        let mut acc = VSeries::one(self.ctx);
        for _ in 0..p.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Same series viewed at another truncation order (padding with zeros).
    pub fn with_order(&self, order: usize) -> VSeries {
        VSeries::from_coeffs(SeriesCtx { order, ..self.ctx }, self.coeffs.clone())
    }

    /// Pimenov specialization; the result carries the nilpotent mask of `a`.
    pub fn specialize(&self, a: &JAssignment) -> Result<VSeries, UndefinedContraction> {
        let ctx = SeriesCtx { nil: a.nil_mask(), ..self.ctx };
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| a.specialize_poly(c).map_err(|e| e.within(format!("coefficient of v^{k}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VSeries { ctx, coeffs })
    }

    fn signed_terms(&self, latex: bool) -> Vec<(bool, String)> {
        let mut out = Vec::new();
        for (k, p) in self.coeffs.iter().enumerate() {
            for (m, c) in p.terms() {
                let mut f = if latex { mono_latex(m, self.ctx.nil) } else { mono_factors(m, self.ctx.nil) };
                f.extend(v_factor(k as u32));
                out.push(if latex { latex_term(c, f) } else { text_term(c, f) });
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        join_signed(self.signed_terms(true))
    }

    pub fn to_json(&self) -> SeriesJson {
        let mut coeffs = Vec::new();
        for (k, p) in self.coeffs.iter().enumerate() {
            for (m, c) in p.terms() {
                coeffs.push(TermJson {
                    v: k,
                    jexp: m.to_vec(),
                    re: rational_str(&c.re),
                    im: rational_str(&c.im),
                });
            }
        }
        let nil = (0..self.ctx.nvars).filter(|k| self.ctx.nil & (1 << k) != 0).map(|k| k + 1).collect();
        SeriesJson { order: self.ctx.order, nvars: self.ctx.nvars, nil, coeffs }
    }

    pub fn from_json(j: &SeriesJson) -> Result<VSeries, ScalarError> {
        let nil = j.nil.iter().fold(0u16, |m, k| m | (1 << (k - 1)));
        let ctx = SeriesCtx { nvars: j.nvars, order: j.order, nil };
        let mut out = VSeries::zero(ctx);
        for t in &j.coeffs {
            if t.v > j.order || t.jexp.len() != j.nvars {
                return Err(ScalarError::Malformed(format!("series term out of range: v^{}", t.v)));
            }
            let re = parse_rational(&t.re).ok_or_else(|| ScalarError::Malformed(t.re.clone()))?;
            let im = parse_rational(&t.im).ok_or_else(|| ScalarError::Malformed(t.im.clone()))?;
            out.coeffs[t.v].add_term(JMonomial::from_exps(&t.jexp), &GaussianRational::new(re, im));
        }
        Ok(out)
    }

    /// True when every coefficient is a plain number (no parameters left).
    pub fn is_numeric(&self) -> bool {
        self.coeffs.iter().all(|p| p.terms().all(|(m, _)| m.is_one()))
    }

    pub fn constant_value(&self) -> Option<GaussianRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            match self.coeffs[0].len() {
                0 => Some(GaussianRational::zero()),
                1 => self.coeffs[0].single().filter(|(m, _)| m.is_one()).map(|(_, c)| c.clone()),
                _ => None,
            }
        } else {
            None
        }
    }
}

impl fmt::Display for VSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join_signed(self.signed_terms(false)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: usize,
    pub nvars: usize,
    /// one-based indices of nilpotent parameters
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nil: Vec<usize>,
    pub coeffs: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub v: usize,
    pub jexp: Vec<i32>,
    pub re: String,
    pub im: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(order: usize) -> SeriesCtx {
        SeriesCtx::new(2, order)
    }

    #[test]
    fn difference_of_squares() {
        let one = VSeries::one(ctx(2));
        let v = VSeries::v(ctx(2));
        let p = one.add(&v).mul(&one.sub(&v));
        let expect = one.sub(&v.mul(&v));
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "1 - v^2");
    }

    #[test]
    fn geometric_inverse() {
        let s = VSeries::one(ctx(3)).add(&VSeries::v(ctx(3)));
        assert_eq!(s.try_inv().unwrap().to_string(), "1 - v + v^2 - v^3");
    }

    #[test]
    fn monomial_product() {
        let c = ctx(2);
        let a = VSeries::term(c, JMonomial::var(2, 0, 1), GaussianRational::one(), 1);
        let b = VSeries::term(c, JMonomial::var(2, 1, 1), GaussianRational::one(), 1);
        assert_eq!(a.mul(&b).to_string(), "j1*j2*v^2");
    }

    #[test]
    fn order_mismatch_is_an_error() {
        assert!(VSeries::one(ctx(2)).try_mul(&VSeries::one(ctx(3))).is_err());
    }

    #[test]
    fn non_unit_not_invertible() {
        assert!(VSeries::v(ctx(2)).try_inv().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let c = ctx(3);
        let s = VSeries::term(c, JMonomial::from_exps(&[2, 1]), &GaussianRational::from_ratio(1, 6) * &GaussianRational::i(), 3)
            .add(&VSeries::one(c));
        assert_eq!(VSeries::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(s.to_string(), "1 + i*j1^2*j2*v^3/6");
    }
}
