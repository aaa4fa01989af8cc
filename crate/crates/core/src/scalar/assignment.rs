use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gaussian::GaussianRational;
use super::monomial::{JMonomial, JPolynomial};

/// Value taken by one contraction parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JValue {
    /// `j_k = 1`
    Unit,
    /// `j_k = i`
    Imaginary,
    /// `j_k = ι_k`, with `ι_k² = 0`
    Nilpotent,
    /// `j_k` left as an indeterminate
    Symbolic,
}

impl JValue {
    pub fn token(self) -> &'static str {
        match self {
            JValue::Unit => "1",
            JValue::Imaginary => "i",
            JValue::Nilpotent => "iota",
            JValue::Symbolic => "j",
        }
    }
}

impl FromStr for JValue {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "1" => Ok(JValue::Unit),
            "i" => Ok(JValue::Imaginary),
            "iota" | "ι" => Ok(JValue::Nilpotent),
            "j" | "sym" => Ok(JValue::Symbolic),
            other => Err(format!("unknown parameter value `{other}` (expected 1, i, iota or j)")),
        }
    }
}

/// One value per contraction parameter `j_1 … j_{N−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JAssignment {
    values: Vec<JValue>,
}

impl JAssignment {
    pub fn new(values: Vec<JValue>) -> Self {
        JAssignment { values }
    }

    pub fn symbolic(nvars: usize) -> Self {
        Self::new(vec![JValue::Symbolic; nvars])
    }

    pub fn units(nvars: usize) -> Self {
        Self::new(vec![JValue::Unit; nvars])
    }

    /// Units everywhere except `ι` at zero-based slot `k`.
    pub fn contract_one(nvars: usize, k: usize) -> Self {
        let mut v = vec![JValue::Unit; nvars];
        v[k] = JValue::Nilpotent;
        Self::new(v)
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        s.split(',').map(JValue::from_str).collect::<Result<Vec<_>, _>>().map(Self::new)
    }

    /// Every assignment over `{1, i, ι}`.
    pub fn all_physical(nvars: usize) -> Vec<JAssignment> {
        let vals = [JValue::Unit, JValue::Imaginary, JValue::Nilpotent];
        let mut out = vec![vec![]];
        for _ in 0..nvars {
            out = out
                .into_iter()
                .flat_map(|p: Vec<JValue>| {
                    vals.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(*v);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(Self::new).collect()
    }

    pub fn values(&self) -> &[JValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> JValue {
        self.values[k]
    }

    pub fn is_symbolic(&self) -> bool {
        self.values.iter().all(|v| *v == JValue::Symbolic)
    }

    pub fn nil_mask(&self) -> u16 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == JValue::Nilpotent)
            .fold(0, |m, (k, _)| m | (1 << k))
    }

    /// Zero-based slots set to `ι`.
    pub fn nilpotent_slots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.values[k] == JValue::Nilpotent).collect()
    }

    /// Folds unit and imaginary slots into the coefficient; nilpotent and
    /// symbolic exponents are kept.
    pub fn fold(&self, m: &JMonomial, c: &GaussianRational) -> (JMonomial, GaussianRational) {
        let mut out = *m;
        let mut ipow = 0i64;
        for (k, v) in self.values.iter().enumerate() {
            match v {
                JValue::Unit => out.set_exp(k, 0),
                JValue::Imaginary => {
                    ipow += m.exp(k) as i64;
                    out.set_exp(k, 0);
                }
                JValue::Nilpotent | JValue::Symbolic => {}
            }
        }
        let c = if ipow == 0 { c.clone() } else { c * &GaussianRational::i_pow(ipow) };
        (out, c)
    }

    /// Nilpotent truncation of an already folded term: `Ok(false)` when the
    /// term vanishes, an error when a nilpotent sits in a denominator.
    pub fn nil_check(&self, m: &JMonomial, c: &GaussianRational) -> Result<bool, UndefinedContraction> {
        let mut alive = true;
        for k in self.nilpotent_slots() {
            let e = m.exp(k);
            if e < 0 {
                return Err(UndefinedContraction {
                    slot: k + 1,
                    exponents: m.to_vec(),
                    term: format!("{} * {}", c, m),
                    context: None,
                });
            }
            if e >= 2 {
                alive = false;
            }
        }
        Ok(alive)
    }

    pub fn specialize_poly(&self, p: &JPolynomial) -> Result<JPolynomial, UndefinedContraction> {
        let folded = p.map_terms(|m, c| Some(self.fold(m, c)));
        let mut out = JPolynomial::zero(p.nvars());
        for (m, c) in folded.terms() {
            if self.nil_check(m, c)? {
                out.add_term(*m, c);
            }
        }
        Ok(out)
    }

    pub fn tokens(&self) -> String {
        self.values.iter().map(|v| v.token()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for JAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| match v {
                JValue::Unit => format!("j{}=1", k + 1),
                JValue::Imaginary => format!("j{}=i", k + 1),
                JValue::Nilpotent => format!("j{}=iota{}", k + 1, k + 1),
                JValue::Symbolic => format!("j{}", k + 1),
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A nilpotent parameter ended up in a denominator with a surviving
/// coefficient: the multiplier `J` does not cover this contraction.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("undefined contraction: term {term} has negative exponent of nilpotent j{slot} (exponents {exponents:?}){}", context.as_ref().map(|c| format!(" in {c}")).unwrap_or_default())]
pub struct UndefinedContraction {
    /// one-based parameter index
    pub slot: usize,
    pub exponents: Vec<i32>,
    pub term: String,
    pub context: Option<String>,
}

impl UndefinedContraction {
    pub fn within(mut self, ctx: impl Into<String>) -> Self {
        if self.context.is_none() {
            self.context = Some(ctx.into());
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_tokens() {
        let a = JAssignment::parse("iota,1,i").unwrap();
        assert_eq!(a.values(), &[JValue::Nilpotent, JValue::Unit, JValue::Imaginary]);
        assert_eq!(a.nil_mask(), 1);
        assert!(JAssignment::parse("2,1").is_err());
    }

    #[test]
    fn nilpotent_inverse_is_undefined() {
        let a = JAssignment::parse("iota,1").unwrap();
        let p = JPolynomial::term(JMonomial::var(2, 0, -1), GaussianRational::one());
        let err = a.specialize_poly(&p).unwrap_err();
        assert_eq!(err.slot, 1);
    }

    #[test]
    fn imaginary_square_is_minus_one() {
        let a = JAssignment::parse("i").unwrap();
        let p = JPolynomial::term(JMonomial::var(1, 0, 2), GaussianRational::one());
        let s = a.specialize_poly(&p).unwrap();
        assert_eq!(s.coeff(&JMonomial::one(1)), GaussianRational::from_int(-1));
    }

    #[test]
    fn enumerates_all_assignments() {
        assert_eq!(JAssignment::all_physical(3).len(), 27);
    }
}
