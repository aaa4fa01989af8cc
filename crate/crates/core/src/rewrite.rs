//! Rewriting over series coefficients: solving relation sets into
//! quadratic rules, normal forms and overlap (diamond) checks.

use std::collections::BTreeMap;

use crate::ncpoly::{render_word, NCPoly, Word};
use crate::scalar::{ScalarError, SeriesCtx, VSeries};

pub type SPoly = NCPoly<VSeries>;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RewriteError {
    #[error("normalization exceeded {cap} steps; recent words: {trace}")]
    IterationCap { cap: usize, trace: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A resolved overlap that failed: the two reductions of `word` differ.
#[derive(Clone, Debug, PartialEq)]
pub struct Overlap {
    pub word: Word,
    pub difference: SPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteSystem {
    ctx: SeriesCtx,
    rank: Vec<u32>,
    rules: BTreeMap<(u8, u8), SPoly>,
    cap: usize,
}

const DEFAULT_CAP: usize = 200_000;

impl RewriteSystem {
    pub fn new(ctx: SeriesCtx, rank: Vec<u32>) -> Self {
        RewriteSystem { ctx, rank, rules: BTreeMap::new(), cap: DEFAULT_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn ctx(&self) -> SeriesCtx {
        self.ctx
    }

    pub fn ngens(&self) -> usize {
        self.rank.len()
    }

    pub fn rank(&self) -> &[u32] {
        &self.rank
    }

    pub fn rules(&self) -> &BTreeMap<(u8, u8), SPoly> {
        &self.rules
    }

    pub fn insert_rule(&mut self, x: u8, y: u8, rhs: SPoly) {
        self.rules.insert((x, y), rhs);
    }

    /// `xy` is out of order (and must be rewritten).
    pub fn is_ascending(&self, x: u8, y: u8) -> bool {
        self.rank[x as usize] < self.rank[y as usize]
    }

    fn reducible_at(&self, w: &[u8]) -> Option<usize> {
        (0..w.len().saturating_sub(1)).find(|&i| self.rules.contains_key(&(w[i], w[i + 1])))
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.reducible_at(w).is_none()
    }

    /// Rewrites to the unique fixpoint (leftmost-first, deterministic).
    pub fn normalize(&self, p: &SPoly) -> Result<SPoly, RewriteError> {
        let mut pending: BTreeMap<Word, VSeries> = p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut done = SPoly::zero();
        let mut steps = 0usize;
        let mut trace: Vec<Word> = Vec::new();
        while let Some((w, c)) = pending.pop_first() {
            if c.is_zero() {
                continue;
            }
            let Some(i) = self.reducible_at(&w) else {
                done.add_term(w, c);
                continue;
            };
            steps += 1;
            if steps > self.cap {
                let trace = trace.iter().map(|w| render_word(w, &|x| format!("g{}", x + 1), false)).collect::<Vec<_>>();
                return Err(RewriteError::IterationCap { cap: self.cap, trace: trace.join(", ") });
            }
            if trace.len() >= 8 {
                trace.remove(0);
            }
            trace.push(w.clone());
            let rhs = &self.rules[&(w[i], w[i + 1])];
            for (rw, rc) in rhs.terms() {
                let coeff = c.mul(rc);
                if coeff.is_zero() {
                    continue;
                }
                let mut nw = Vec::with_capacity(w.len() + rw.len());
                nw.extend_from_slice(&w[..i]);
                nw.extend_from_slice(rw);
                nw.extend_from_slice(&w[i + 2..]);
                add_into(&mut pending, nw, coeff);
            }
        }
        Ok(done)
    }

    /// Resolves every overlap `xyz` with rules for `xy` and `yz` both ways.
    pub fn overlaps(&self) -> Result<Vec<Overlap>, RewriteError> {
        let mut out = Vec::new();
        for (&(x, y), rhs_xy) in &self.rules {
            for (&(y2, z), rhs_yz) in self.rules.range((y, 0)..=(y, u8::MAX)) {
                debug_assert_eq!(y, y2);
                let left = self.normalize(&rhs_xy.mul(&letter(self.ctx, z)))?;
                let right = self.normalize(&letter(self.ctx, x).mul(rhs_yz))?;
                let diff = left.sub(&right);
                if !diff.is_zero() {
                    out.push(Overlap { word: vec![x, y, z], difference: diff });
                }
            }
        }
        Ok(out)
    }

    /// Every relation reduces to zero here.
    pub fn annihilates(&self, rels: &[SPoly]) -> Result<bool, RewriteError> {
        for r in rels {
            if !self.normalize(r)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relations `lhs − rhs` of the rules.
    pub fn relations(&self) -> Vec<SPoly> {
        self.rules.iter().map(|(&(x, y), rhs)| NCPoly::term(vec![x, y], VSeries::one(self.ctx)).sub(rhs)).collect()
    }

    /// Canonical, order-independent rendering of the rule set.
    pub fn digest(&self, name: &dyn Fn(u8) -> String) -> String {
        self.rules
            .iter()
            .map(|(&(x, y), rhs)| format!("{} -> {}", render_word(&[x, y], name, false), rhs.render(name, false)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn add_into(map: &mut BTreeMap<Word, VSeries>, w: Word, c: VSeries) {
    let remove = match map.get_mut(&w) {
        Some(v) => {
            *v = v.add(&c);
            v.is_zero()
        }
        None => {
            map.insert(w, c);
            return;
        }
    };
    if remove {
        map.remove(&w);
    }
}

pub fn letter(ctx: SeriesCtx, x: u8) -> SPoly {
    NCPoly::term(vec![x], VSeries::one(ctx))
}

/// Result of solving a relation set.
#[derive(Clone, Debug, PartialEq)]
pub struct Solved {
    pub system: RewriteSystem,
    /// Relations left over after the pivots were used, in normal form.
    pub residuals: Vec<SPoly>,
}

/// Gauss-Jordan elimination on the out-of-order quadratic words.
///
/// A word becomes a rule head when some row carries it with an invertible
/// coefficient; that word is then cleared from every other row.
pub fn solve_relations(rels: &[SPoly], rank: Vec<u32>, ctx: SeriesCtx) -> Result<Solved, RewriteError> {
    let mut rows: Vec<SPoly> = rels.iter().filter(|r| !r.is_zero()).cloned().collect();
    let n = rank.len() as u8;
    let mut heads: Vec<(u8, u8)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if rank[x as usize] < rank[y as usize] {
                heads.push((x, y));
            }
        }
    }
    heads.sort_by_key(|&(x, y)| (rank[x as usize], rank[y as usize]));
    let mut pivot_of: BTreeMap<(u8, u8), usize> = BTreeMap::new();
    let mut used = vec![false; rows.len()];
    for &(x, y) in &heads {
        let w = vec![x, y];
        let Some(i) = (0..rows.len()).find(|&i| !used[i] && rows[i].coeff(&w).map(|c| c.is_unit()).unwrap_or(false))
        else {
            continue;
        };
        used[i] = true;
        let inv = rows[i].coeff(&w).expect("present").try_inv()?;
        rows[i] = rows[i].scale_by(&inv);
        let pivot = rows[i].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == i {
                continue;
            }
            if let Some(c) = row.coeff(&w).cloned() {
                *row = row.sub(&pivot.scale_by(&c));
            }
        }
        pivot_of.insert((x, y), i);
    }
    let mut system = RewriteSystem::new(ctx, rank);
    for (&(x, y), &i) in &pivot_of {
        let head = NCPoly::term(vec![x, y], VSeries::one(ctx));
        system.insert_rule(x, y, head.sub(&rows[i]));
    }
    let raw = system.clone();
    for (&(x, y), rhs) in raw.rules() {
        let canon = raw.normalize(rhs)?;
        system.insert_rule(x, y, canon);
    }
    let mut residuals = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if used[i] {
            continue;
        }
        let r = system.normalize(row)?;
        if !r.is_zero() {
            residuals.push(r);
        }
    }
    Ok(Solved { system, residuals })
}

/// Two presentations define the same ideal (to the truncation order) when
/// each side's relations reduce to zero modulo the other's rules.
pub fn ideal_equal(a: &Solved, b: &Solved) -> Result<bool, RewriteError> {
    let rel_a: Vec<SPoly> = a.system.relations().into_iter().chain(a.residuals.iter().cloned()).collect();
    let rel_b: Vec<SPoly> = b.system.relations().into_iter().chain(b.residuals.iter().cloned()).collect();
    Ok(b.system.annihilates(&rel_a)? && a.system.annihilates(&rel_b)? && a.residuals.is_empty() == b.residuals.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    fn ctx() -> SeriesCtx {
        SeriesCtx::new(1, 4)
    }

    fn c(n: i64) -> VSeries {
        VSeries::constant(ctx(), GaussianRational::from_int(n))
    }

    fn w(x: &[u8], k: VSeries) -> SPoly {
        NCPoly::term(x.to_vec(), k)
    }

    #[test]
    fn q_plane_solves_and_is_confluent() {
        // x y = (1+v) y x  with rank x < rank y
        let q = c(1).add(&VSeries::v(ctx()));
        let rel = w(&[0, 1], c(1)).sub(&w(&[1, 0], q.clone()));
        let s = solve_relations(&[rel], vec![0, 1], ctx()).unwrap();
        assert!(s.residuals.is_empty());
        assert_eq!(s.system.rules().len(), 1);
        let n = s.system.normalize(&w(&[0, 0, 1], c(1))).unwrap();
        assert_eq!(n, w(&[1, 0, 0], q.mul(&q)));
        assert!(s.system.overlaps().unwrap().is_empty());
    }

    #[test]
    fn elimination_of_coupled_pair() {
        // A = c A0 − s B,  B = c B0 − s A   (the two-row system)
        let ctxx = ctx();
        let v = VSeries::v(ctxx);
        let one = c(1);
        let a = w(&[0, 1], one.clone()).sub(&w(&[1, 0], one.clone())).add(&w(&[1, 2], v.clone()));
        let b = w(&[1, 2], one.clone()).sub(&w(&[2, 1], one.clone())).add(&w(&[0, 1], v.clone()));
        let s = solve_relations(&[a.clone(), b.clone()], vec![0, 1, 2], ctxx).unwrap();
        assert!(s.residuals.is_empty());
        assert!(s.system.annihilates(&[a, b]).unwrap());
        for rhs in s.system.rules().values() {
            for (word, _) in rhs.terms() {
                assert!(s.system.is_normal(word));
            }
        }
    }

    #[test]
    fn corrupted_rule_shows_overlap() {
        let ctxx = SeriesCtx::new(1, 3);
        let v = VSeries::v(ctxx);
        let one = VSeries::one(ctxx);
        let mut sys = RewriteSystem::new(ctxx, vec![0, 1, 2]);
        let two = one.add(&one);
        sys.insert_rule(0, 1, w(&[1, 0], two));
        sys.insert_rule(1, 2, w(&[2, 1], one.clone()));
        sys.insert_rule(0, 2, w(&[2, 0], one.clone()).add(&w(&[1, 1], v.clone())));
        let bad = sys.overlaps().unwrap();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].word, vec![0, 1, 2]);
    }
}
