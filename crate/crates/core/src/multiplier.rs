//! The multiplier `J` of `z = Jv`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ck::ck_product;
use crate::perm::SigmaPermutation;
use crate::presentation::Presentation;
use crate::scalar::{JAssignment, JMonomial, UndefinedContraction};

/// Non-negative exponent vector over `j_1 … j_{N−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiplier(JMonomial);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MultiplierError {
    #[error("multiplier lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("negative exponent in multiplier {0:?}")]
    Negative(Vec<i32>),
}

#[derive(Serialize, Deserialize)]
struct MultiplierJson {
    exponents: Vec<i32>,
}

impl Multiplier {
    pub fn one(nvars: usize) -> Self {
        Multiplier(JMonomial::one(nvars))
    }

    pub fn from_exps(exps: &[i32]) -> Result<Self, MultiplierError> {
        if exps.iter().any(|&e| e < 0) {
            return Err(MultiplierError::Negative(exps.to_vec()));
        }
        Ok(Multiplier(JMonomial::from_exps(exps)))
    }

    pub fn monomial(&self) -> &JMonomial {
        &self.0
    }

    pub fn exponents(&self) -> Vec<i32> {
        self.0.to_vec()
    }

    /// Componentwise maximum.
    pub fn union(&self, o: &Multiplier) -> Result<Multiplier, MultiplierError> {
        if self.0.len() != o.0.len() {
            return Err(MultiplierError::LengthMismatch(self.0.len(), o.0.len()));
        }
        Ok(Multiplier(self.0.lcm(&o.0)))
    }

    pub fn dominates(&self, o: &Multiplier) -> bool {
        self.0.dominates(&o.0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MultiplierJson { exponents: self.exponents() }).expect("plain data")
    }

    pub fn to_latex(&self) -> String {
        let f = self.0.latex_with(|k| format!("j_{{{}}}", k + 1));
        if f.is_empty() {
            "1".into()
        } else {
            f.join("")
        }
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn ck(i: usize, k: usize, n: usize) -> JMonomial {
    ck_product(i, k, n).expect("indices from a permutation")
}

fn conj(p: usize, n: usize) -> usize {
    n + 1 - p
}

/// First-power multiplier: `∪_k (σ_k, σ_{k'})`, over `k ≤ n` for odd `N`
/// and `k ≤ n−1` for even `N` (the single pair when `N = 2`).
pub fn j_zero(sigma: &SigmaPermutation) -> Multiplier {
    let n = sigma.n();
    let half = n / 2;
    let top = if n % 2 == 1 { half } else { (half - 1).max(1) };
    let mut m = JMonomial::one(n - 1);
    for k in 1..=top {
        m = m.lcm(&ck(sigma.at(k), sigma.at(conj(k, n)), n));
    }
    Multiplier(m)
}

/// Compensating multiplier for the conjugate-pair commutators.
///
/// For each pair `k` the smallest label among the inner pairs
/// `{σ_m, σ_{m'} : k < m ≤ n}` (plus `σ_{n+1}` for odd `N`) decides
/// the case; the pair itself is ordered so that `σ_k < σ_{k'}`.
pub fn j_one(sigma: &SigmaPermutation) -> Multiplier {
    let n = sigma.n();
    let half = n / 2;
    let mut m = JMonomial::one(n - 1);
    for k in 1..=half {
        let (a, b) = {
            let (x, y) = (sigma.at(k), sigma.at(conj(k, n)));
            (x.min(y), x.max(y))
        };
        let mut inner: Vec<usize> = ((k + 1)..=half).flat_map(|q| [sigma.at(q), sigma.at(conj(q, n))]).collect();
        if n % 2 == 1 {
            inner.push(sigma.at(half + 1));
        }
        let Some(&ik) = inner.iter().min() else { continue };
        let term = if ik < a {
            ck(ik, a, n).pow(2).mul(&ck(a, b, n))
        } else if ik < b {
            ck(ik, b, n)
        } else {
            JMonomial::one(n - 1)
        };
        m = m.lcm(&term);
    }
    Multiplier(m)
}

/// `J = J₀ ∪ J₁`.
pub fn theorem_multiplier(sigma: &SigmaPermutation) -> Multiplier {
    j_zero(sigma).union(&j_one(sigma)).expect("same length")
}

/// Scans the relations and the star map built with `J = 1`: every
/// monomial standing in front of a sinh/tanh factor must be made
/// non-negative by `J`. The result is joined with `J₀`.
pub fn oracle_multiplier(sigma: &SigmaPermutation) -> Multiplier {
    let n = sigma.n();
    let p = Presentation::generate(sigma, &Multiplier::one(n - 1));
    let mut need = JMonomial::one(n - 1);
    let mut scan = |e: &crate::scalar::ScalarExpr| {
        for m in e.odd_atom_monomials() {
            need = need.lcm(&m.negative_part());
        }
    };
    for r in &p.relations {
        for (_, c) in r.rhs.terms().chain(r.lhs.terms()) {
            scan(c);
        }
    }
    for img in &p.star {
        for (_, c) in img.terms() {
            scan(c);
        }
    }
    for (_, c) in p.invariant.terms() {
        scan(c);
    }
    Multiplier(need).union(&j_zero(sigma)).expect("same length")
}

/// Which multiplier rule to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MultiplierChoice {
    Theorem,
    J0,
    Oracle,
}

impl std::str::FromStr for MultiplierChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theorem" => Ok(MultiplierChoice::Theorem),
            "j0" => Ok(MultiplierChoice::J0),
            "oracle" => Ok(MultiplierChoice::Oracle),
            o => Err(format!("unknown multiplier `{o}` (expected theorem, j0 or oracle)")),
        }
    }
}

pub fn choose(sigma: &SigmaPermutation, choice: MultiplierChoice) -> Multiplier {
    match choice {
        MultiplierChoice::Theorem => theorem_multiplier(sigma),
        MultiplierChoice::J0 => j_zero(sigma),
        MultiplierChoice::Oracle => oracle_multiplier(sigma),
    }
}

/// Specializes the full presentation at every assignment over `{1, i, ι}`;
/// returns the first failure.
pub fn check_all_contractions(sigma: &SigmaPermutation, j: &Multiplier) -> Result<(), (JAssignment, UndefinedContraction)> {
    let p = Presentation::generate(sigma, j);
    for a in JAssignment::all_physical(sigma.n() - 1) {
        p.specialize(&a).map_err(|e| (a.clone(), e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> SigmaPermutation {
        x.parse().unwrap()
    }

    #[test]
    fn union_is_componentwise_max() {
        let a = Multiplier::from_exps(&[1, 2, 0]).unwrap();
        let b = Multiplier::from_exps(&[0, 1, 1]).unwrap();
        assert_eq!(a.union(&b).unwrap().to_string(), "j1*j2^2*j3");
        assert_eq!(a.union(&a).unwrap(), a);
        assert!(a.union(&Multiplier::one(2)).is_err());
    }

    #[test]
    fn j_zero_values() {
        assert_eq!(j_zero(&s("1,3,2")).to_string(), "j1");
        assert_eq!(j_zero(&s("2,1,4,3")).to_string(), "j2");
        assert_eq!(j_zero(&s("1,2,3,4")).to_string(), "j1*j2*j3");
        assert_eq!(j_zero(&s("1,2")).to_string(), "j1");
    }

    #[test]
    fn j_one_values() {
        assert_eq!(j_one(&s("2,1,3")).to_string(), "j1^2*j2");
        assert_eq!(j_one(&s("1,2,3")).to_string(), "j2");
        assert_eq!(j_one(&s("3,1,2,4")).to_string(), "j1^2*j2^2*j3");
    }

    #[test]
    fn theorem_small_cases() {
        assert_eq!(theorem_multiplier(&s("1,2")).to_string(), "j1");
        assert_eq!(theorem_multiplier(&s("1,2,3")).to_string(), "j1*j2");
    }

    #[test]
    fn oracle_matches_named_cases() {
        assert_eq!(oracle_multiplier(&s("2,1,3")).to_string(), "j1^2*j2");
        assert_eq!(oracle_multiplier(&s("1,3,2")).to_string(), "j1");
        assert_eq!(oracle_multiplier(&s("2,1,4,3")).to_string(), "j1^2*j2");
    }

    #[test]
    fn json_shape() {
        let m = Multiplier::from_exps(&[2, 1]).unwrap();
        assert_eq!(m.to_json().to_string(), r#"{"exponents":[2,1]}"#);
        assert!(Multiplier::from_exps(&[-1]).is_err());
    }
}
