use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A permutation `σ = (σ_1, …, σ_N)` of `1…N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SigmaPermutation {
    image: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("not a permutation: {0}")]
pub struct PermutationError(pub String);

impl SigmaPermutation {
    pub fn new(image: Vec<usize>) -> Result<Self, PermutationError> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &x in &image {
            if x == 0 || x > n || seen[x] {
                return Err(PermutationError(format!("{image:?}")));
            }
            seen[x] = true;
        }
        if n == 0 {
            return Err(PermutationError("empty".into()));
        }
        Ok(SigmaPermutation { image })
    }

    pub fn identity(n: usize) -> Self {
        SigmaPermutation { image: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `σ_p` for one-based position `p`.
    pub fn at(&self, p: usize) -> usize {
        self.image[p - 1]
    }

    /// One-based position `p` with `σ_p = label`.
    pub fn position_of(&self, label: usize) -> usize {
        self.image.iter().position(|&x| x == label).expect("label in range") + 1
    }

    /// `(σ∘τ)_p = σ_{τ_p}`.
    pub fn compose(&self, tau: &SigmaPermutation) -> SigmaPermutation {
        assert_eq!(self.n(), tau.n());
        SigmaPermutation { image: tau.image.iter().map(|&t| self.image[t - 1]).collect() }
    }

    pub fn inverse(&self) -> SigmaPermutation {
        let mut inv = vec![0; self.n()];
        for (p, &x) in self.image.iter().enumerate() {
            inv[x - 1] = p + 1;
        }
        SigmaPermutation { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(p, &x)| x == p + 1)
    }

    /// All of `S(n)` in lexicographic order.
    pub fn all(n: usize) -> Vec<SigmaPermutation> {
        use itertools::Itertools;
        (1..=n).permutations(n).map(|image| SigmaPermutation { image }).collect()
    }

    /// The permutations singled out in the low-dimensional analysis, with
    /// their conventional names.
    pub fn named(n: usize) -> Vec<(&'static str, SigmaPermutation)> {
        let table: &[(&str, &[usize])] = match n {
            3 => &[("sigma0", &[1, 2, 3]), ("sigma'", &[1, 3, 2]), ("sigma^", &[2, 1, 3])],
            4 => &[
                ("sigma0", &[1, 2, 3, 4]),
                ("sigmaI", &[1, 2, 4, 3]),
                ("sigmaII", &[1, 3, 4, 2]),
                ("sigmaIII", &[3, 1, 2, 4]),
                ("sigmaIV", &[2, 1, 3, 4]),
                ("sigmaV", &[2, 1, 4, 3]),
            ],
            _ => &[],
        };
        table.iter().map(|(name, img)| (*name, SigmaPermutation { image: img.to_vec() })).collect()
    }

    /// Looks up a conventional name (`sigma0`, `sigmaIII`, …).
    pub fn by_name(n: usize, name: &str) -> Option<SigmaPermutation> {
        Self::named(n).into_iter().find(|(k, _)| *k == name).map(|(_, s)| s)
    }

    pub fn name(&self) -> Option<&'static str> {
        Self::named(self.n()).into_iter().find(|(_, s)| s == self).map(|(k, _)| k)
    }
}

impl FromStr for SigmaPermutation {
    type Err = PermutationError;
    fn from_str(s: &str) -> Result<Self, PermutationError> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let image = t
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PermutationError(s.to_string()))?;
        Self::new(image).map_err(|_| PermutationError(s.to_string()))
    }
}

impl TryFrom<Vec<usize>> for SigmaPermutation {
    type Error = PermutationError;
    fn try_from(v: Vec<usize>) -> Result<Self, PermutationError> {
        Self::new(v)
    }
}

impl From<SigmaPermutation> for Vec<usize> {
    fn from(s: SigmaPermutation) -> Vec<usize> {
        s.image
    }
}

impl fmt::Display for SigmaPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let s: SigmaPermutation = "2,1,3".parse().unwrap();
        assert_eq!(s.at(1), 2);
        assert_eq!(s.position_of(1), 2);
        assert!("1,1,2".parse::<SigmaPermutation>().is_err());
        assert!("1,2,4".parse::<SigmaPermutation>().is_err());
        assert!("1,x".parse::<SigmaPermutation>().is_err());
    }

    #[test]
    fn group_structure() {
        let s: SigmaPermutation = "3,1,2,4".parse().unwrap();
        assert!(s.compose(&s.inverse()).is_identity());
        assert_eq!(SigmaPermutation::all(4).len(), 24);
        assert_eq!(SigmaPermutation::by_name(4, "sigmaV").unwrap().to_string(), "(2,1,4,3)");
    }
}
