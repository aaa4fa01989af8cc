//! Presentations of the quantum Cayley-Klein vector spaces: relations in
//! closed form, solved rules, star map and invariant form; plus the
//! series-level algebra used for all verification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ck::{rho, weight};
use crate::multiplier::Multiplier;
use crate::ncpoly::{xi_latex, xi_name, NCPoly, Word};
use crate::perm::SigmaPermutation;
use crate::rewrite::{letter, solve_relations, Overlap, RewriteError, RewriteSystem, SPoly};
use crate::scalar::{
    GaussianRational, JAssignment, JMonomial, JValue, ScalarError, ScalarExpr, SeriesCtx, SeriesJson, UndefinedContraction,
    VSeries,
};

pub type CPoly = NCPoly<ScalarExpr>;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PresentationError {
    #[error(transparent)]
    Undefined(#[from] UndefinedContraction),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("elimination left {0} independent relation(s) unsolved")]
    Inconsistent(usize),
    #[error("malformed presentation: {0}")]
    Malformed(String),
}

/// `lhs = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub lhs: CPoly,
    pub rhs: CPoly,
}

impl Relation {
    pub fn difference(&self) -> CPoly {
        self.lhs.sub(&self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub sigma: SigmaPermutation,
    pub multiplier: Multiplier,
    pub assignment: JAssignment,
    /// The explicit relations, one per unordered pair.
    pub relations: Vec<Relation>,
    /// Solved rules in closed form, keyed by the out-of-order pair.
    pub rules: BTreeMap<(u8, u8), CPoly>,
    /// `star[x]` is the image of generator `x`.
    pub star: Vec<CPoly>,
    pub invariant: CPoly,
}

struct Builder {
    n: usize,
    nv: usize,
    sigma: SigmaPermutation,
    j: JMonomial,
}

impl Builder {
    fn x(&self, p: usize) -> u8 {
        (self.sigma.at(p) - 1) as u8
    }
    fn w(&self, p: usize) -> JMonomial {
        weight(&self.sigma, p)
    }
    fn conj(&self, p: usize) -> usize {
        self.n + 1 - p
    }
    fn mono(&self, m: JMonomial) -> ScalarExpr {
        ScalarExpr::mono(m)
    }
    fn c(&self) -> ScalarExpr {
        ScalarExpr::cosh(GaussianRational::one(), self.j)
    }
    fn cpow(&self, e: i32) -> ScalarExpr {
        self.c().pow(e).expect("cosh powers are invertible")
    }
    fn s(&self) -> ScalarExpr {
        ScalarExpr::sinh(GaussianRational::one(), self.j)
    }
    fn t(&self) -> ScalarExpr {
        ScalarExpr::tanh(GaussianRational::one(), self.j)
    }
    fn i(&self) -> ScalarExpr {
        ScalarExpr::i(self.nv)
    }
    fn word(&self, w: &[u8], c: ScalarExpr) -> CPoly {
        NCPoly::term(w.to_vec(), c)
    }
    fn one(&self) -> ScalarExpr {
        ScalarExpr::one(self.nv)
    }

    /// Right-hand side of `[X_k, X_{k'}]`.
    fn conjugate_rhs(&self, k: usize) -> CPoly {
        let n = self.n;
        let half = n / 2;
        let kp = self.conj(k);
        let den = self.w(k).mul(&self.w(kp)).inv();
        let mut out = CPoly::zero();
        if n % 2 == 1 {
            let mid = half + 1;
            let coeff = ScalarExpr::sinh(GaussianRational::from_ratio(1, 2), self.j)
                .scale(&(&GaussianRational::i() * &GaussianRational::from_int(2)))
                .mul(&self.cpow((half - k) as i32))
                .mul(&self.mono(self.w(mid).pow(2).mul(&den)));
            out = out.add(&self.word(&[self.x(mid), self.x(mid)], coeff));
        }
        for m in (k + 1)..=half {
            let base = self.i().mul(&self.s()).mul(&self.cpow(m as i32 - k as i32 - 1));
            for q in [m, self.conj(m)] {
                let coeff = base.mul(&self.mono(self.w(q).pow(2).mul(&den)));
                out = out.add(&self.word(&[self.x(q), self.x(q)], coeff));
            }
        }
        out
    }

    fn relations(&self) -> Vec<Relation> {
        let n = self.n;
        let mut out = Vec::new();
        let ni = self.i().neg();
        for a in 1..=n {
            for b in (a + 1)..=n {
                let (xa, xb) = (self.x(a), self.x(b));
                let lhs = self.word(&[xa, xb], self.one());
                let rhs = if b == self.conj(a) {
                    self.word(&[xb, xa], self.one()).add(&self.conjugate_rhs(a))
                } else if b < self.conj(a) {
                    let ap = self.conj(a);
                    let r = self.w(ap).div(&self.w(a));
                    self.word(&[xb, xa], self.c())
                        .add(&self.word(&[xb, self.x(ap)], ni.mul(&self.mono(r)).mul(&self.s())))
                } else {
                    let bp = self.conj(b);
                    let r = self.w(bp).div(&self.w(b));
                    self.word(&[xb, xa], self.c())
                        .add(&self.word(&[self.x(bp), xa], ni.mul(&self.mono(r)).mul(&self.s())))
                };
                out.push(Relation { lhs, rhs });
            }
        }
        out
    }

    fn rules(&self) -> BTreeMap<(u8, u8), CPoly> {
        let n = self.n;
        let sech = self.cpow(-1);
        let ni = self.i().neg();
        let mut out = BTreeMap::new();
        for a in 1..=n {
            let ap = self.conj(a);
            for b in (a + 1)..=n {
                let (xa, xb) = (self.x(a), self.x(b));
                if b == ap {
                    out.insert((xa, xb), self.word(&[xb, xa], self.one()).add(&self.conjugate_rhs(a)));
                } else if b < ap {
                    let xap = self.x(ap);
                    let r = self.w(ap).div(&self.w(a));
                    out.insert(
                        (xa, xb),
                        self.word(&[xb, xa], sech.clone())
                            .add(&self.word(&[xap, xb], ni.mul(&self.mono(r)).mul(&self.t()))),
                    );
                    out.insert(
                        (xb, xap),
                        self.word(&[xap, xb], sech.clone())
                            .add(&self.word(&[xb, xa], ni.mul(&self.mono(r.inv())).mul(&self.t()))),
                    );
                }
            }
        }
        out
    }

    fn star(&self) -> Vec<CPoly> {
        let n = self.n;
        let rho = rho(n).expect("n ≥ 2");
        let mut out: Vec<CPoly> = (0..n).map(|x| self.word(&[x as u8], self.one())).collect();
        for k in 1..=n / 2 {
            let kp = self.conj(k);
            let r = GaussianRational::real(rho[k - 1].clone());
            let ch = ScalarExpr::cosh(r.clone(), self.j);
            let sh = ScalarExpr::sinh(r, self.j);
            let up = self.i().mul(&self.mono(self.w(kp).div(&self.w(k)))).mul(&sh);
            let down = self.i().neg().mul(&self.mono(self.w(k).div(&self.w(kp)))).mul(&sh);
            out[self.x(k) as usize] = self.word(&[self.x(k)], ch.clone()).add(&self.word(&[self.x(kp)], up));
            out[self.x(kp) as usize] = self.word(&[self.x(kp)], ch).add(&self.word(&[self.x(k)], down));
        }
        out
    }

    fn invariant(&self) -> CPoly {
        let n = self.n;
        let half = n / 2;
        let rho1 = GaussianRational::real(rho(n).expect("n ≥ 2")[0].clone());
        let mut out = CPoly::zero();
        if n % 2 == 1 {
            let mid = half + 1;
            let coeff = self
                .mono(self.w(mid).pow(2))
                .mul(&self.cpow(half as i32))
                .mul(&ScalarExpr::cosh(GaussianRational::from_ratio(1, 2), self.j).pow(-1).expect("cosh"));
            out = out.add(&self.word(&[self.x(mid), self.x(mid)], coeff));
        }
        for k in 1..=half {
            for q in [k, self.conj(k)] {
                let coeff = self.mono(self.w(q).pow(2)).mul(&self.cpow(k as i32 - 1));
                out = out.add(&self.word(&[self.x(q), self.x(q)], coeff));
            }
        }
        out.scale_by(&ScalarExpr::cosh(rho1, self.j))
    }
}

impl Presentation {
    /// The presentation with symbolic parameters and the given multiplier.
    pub fn generate(sigma: &SigmaPermutation, multiplier: &Multiplier) -> Presentation {
        let n = sigma.n();
        let b = Builder { n, nv: n - 1, sigma: sigma.clone(), j: *multiplier.monomial() };
        Presentation {
            sigma: sigma.clone(),
            multiplier: *multiplier,
            assignment: JAssignment::symbolic(n - 1),
            relations: b.relations(),
            rules: b.rules(),
            star: b.star(),
            invariant: b.invariant(),
        }
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    /// Position rank of each generator label.
    pub fn rank(&self) -> Vec<u32> {
        (1..=self.n()).map(|l| self.sigma.position_of(l) as u32).collect()
    }

    /// Specializes every coefficient; errors name the offending relation.
    pub fn specialize(&self, a: &JAssignment) -> Result<Presentation, UndefinedContraction> {
        let sp = |p: &CPoly, ctx: &dyn Fn() -> String| -> Result<CPoly, UndefinedContraction> {
            p.map_coeffs(|c| c.specialize(a)).map_err(|e| e.within(ctx()))
        };
        let name = |w: &[u8]| crate::ncpoly::render_word(w, &xi_name, false);
        let mut relations = Vec::new();
        for r in &self.relations {
            let ctx = || format!("relation {} = {}", r.lhs.render(&xi_name, false), r.rhs.render(&xi_name, false));
            relations.push(Relation { lhs: sp(&r.lhs, &ctx)?, rhs: sp(&r.rhs, &ctx)? });
        }
        let mut rules = BTreeMap::new();
        for (&(x, y), rhs) in &self.rules {
            rules.insert((x, y), sp(rhs, &|| format!("rule {}", name(&[x, y])))?);
        }
        let mut star = Vec::new();
        for (x, img) in self.star.iter().enumerate() {
            star.push(sp(img, &|| format!("star of xi{}", x + 1))?);
        }
        let invariant = sp(&self.invariant, &|| "invariant form".to_string())?;
        Ok(Presentation {
            sigma: self.sigma.clone(),
            multiplier: self.multiplier,
            assignment: a.clone(),
            relations,
            rules,
            star,
            invariant,
        })
    }

    fn ctx(&self, order: usize) -> SeriesCtx {
        SeriesCtx::new(self.n() - 1, order).with_nil(self.assignment.nil_mask())
    }

    /// Expands to order `order` and solves the explicit relations by
    /// elimination.
    pub fn to_series(&self, order: usize) -> Result<SeriesPresentation, PresentationError> {
        let ctx = self.ctx(order);
        let ex = |p: &CPoly| -> Result<SPoly, ScalarError> { expand_poly(p, ctx) };
        let rels = self.relations.iter().map(|r| ex(&r.difference())).collect::<Result<Vec<_>, _>>()?;
        let solved = solve_relations(&rels, self.rank(), ctx)?;
        if !solved.residuals.is_empty() {
            return Err(PresentationError::Inconsistent(solved.residuals.len()));
        }
        Ok(SeriesPresentation {
            sigma: self.sigma.clone(),
            multiplier: self.multiplier,
            assignment: self.assignment.clone(),
            order,
            system: solved.system,
            star: self.star.iter().map(&ex).collect::<Result<_, _>>()?,
            invariant: ex(&self.invariant)?,
        })
    }

    /// Rules that are not plain commutations `xy = yx`.
    pub fn nontrivial_rules(&self) -> Vec<((u8, u8), &CPoly)> {
        self.rules
            .iter()
            .filter(|(&(x, y), rhs)| **rhs != NCPoly::term(vec![y, x], ScalarExpr::one(self.n() - 1)))
            .map(|(&k, v)| (k, v))
            .collect()
    }

    fn header(&self) -> String {
        let mut s = format!("O^{}(sigma={}), J = {}", self.n(), self.sigma, self.multiplier);
        if !self.assignment.is_symbolic() {
            s.push_str(&format!(", {}", self.assignment));
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = vec![self.header()];
        out.push(format!("generators: {}", (1..=self.n()).map(|k| format!("xi{k}")).collect::<Vec<_>>().join(", ")));
        out.push("relations:".into());
        for r in &self.relations {
            out.push(format!("  {} = {}", r.lhs.render(&xi_name, false), r.rhs.render(&xi_name, false)));
        }
        out.push("rules:".into());
        for (&(x, y), rhs) in &self.rules {
            out.push(format!("  {} -> {}", crate::ncpoly::render_word(&[x, y], &xi_name, false), rhs.render(&xi_name, false)));
        }
        out.push("star:".into());
        for (x, img) in self.star.iter().enumerate() {
            out.push(format!("  xi{}* = {}", x + 1, img.render(&xi_name, false)));
        }
        out.push(format!("invariant: {}", self.invariant.render(&xi_name, false)));
        out.join("\n")
    }

    pub fn to_latex(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!("% {}", self.header()));
        lines.push(format!("J = {}", self.multiplier.to_latex()));
        lines.push("\\begin{align*}".into());
        let mut body = Vec::new();
        for r in &self.relations {
            body.push(format!("{} &= {}", r.lhs.render(&xi_latex, true), r.rhs.render(&xi_latex, true)));
        }
        for (x, img) in self.star.iter().enumerate() {
            body.push(format!("\\xi_{{{}}}^{{*}} &= {}", x + 1, img.render(&xi_latex, true)));
        }
        body.push(format!("\\mathrm{{inv}} &= {}", self.invariant.render(&xi_latex, true)));
        lines.push(body.join(" \\\\\n"));
        lines.push("\\end{align*}".into());
        lines.join("\n")
    }
}

pub fn expand_poly(p: &CPoly, ctx: SeriesCtx) -> Result<SPoly, ScalarError> {
    p.map_coeffs(|c| c.expand(ctx.order).map(|s| s.add(&VSeries::zero(ctx))))
}

/// The algebra truncated at order `order` in `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPresentation {
    pub sigma: SigmaPermutation,
    pub multiplier: Multiplier,
    pub assignment: JAssignment,
    pub order: usize,
    pub system: RewriteSystem,
    pub star: Vec<SPoly>,
    pub invariant: SPoly,
}

#[derive(Serialize, Deserialize)]
struct TermOut {
    word: Vec<usize>,
    coeff: SeriesJson,
}

fn poly_json(p: &SPoly) -> Vec<TermOut> {
    p.terms()
        .map(|(w, c)| TermOut { word: w.iter().map(|&x| x as usize + 1).collect(), coeff: c.to_json() })
        .collect()
}

fn poly_from_json(v: &Value, ctx: SeriesCtx) -> Result<SPoly, PresentationError> {
    let terms: Vec<TermOut> = serde_json::from_value(v.clone()).map_err(|e| PresentationError::Malformed(e.to_string()))?;
    let mut p = SPoly::zero();
    for t in terms {
        let w: Word = t.word.iter().map(|&x| (x - 1) as u8).collect();
        let c = VSeries::from_json(&t.coeff)?;
        p.add_term(w, c.add(&VSeries::zero(ctx)));
    }
    Ok(p)
}

impl SeriesPresentation {
    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn ctx(&self) -> SeriesCtx {
        self.system.ctx()
    }

    pub fn normalize(&self, p: &SPoly) -> Result<SPoly, RewriteError> {
        self.system.normalize(p)
    }

    pub fn overlaps(&self) -> Result<Vec<Overlap>, RewriteError> {
        self.system.overlaps()
    }

    /// `inv·x − x·inv` reduces to zero for every generator.
    pub fn check_central(&self) -> Result<bool, RewriteError> {
        for x in 0..self.n() as u8 {
            let g = letter(self.ctx(), x);
            let c = self.invariant.mul(&g).sub(&g.mul(&self.invariant));
            if !self.normalize(&c)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Antilinear antihomomorphic extension of the star map.
    pub fn apply_star(&self, p: &SPoly) -> SPoly {
        let mut out = SPoly::zero();
        for (w, c) in p.terms() {
            let mut acc = NCPoly::term(vec![], c.conj());
            for &x in w.iter().rev() {
                acc = acc.mul(&self.star[x as usize]);
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn star_involutive(&self) -> Result<bool, RewriteError> {
        for x in 0..self.n() as u8 {
            let g = letter(self.ctx(), x);
            let back = self.apply_star(&self.apply_star(&g));
            if !self.normalize(&back.sub(&g))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The star of every relation lies in the ideal.
    pub fn star_compatible(&self) -> Result<bool, RewriteError> {
        for rel in self.system.relations() {
            if !self.normalize(&self.apply_star(&rel))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// At `v = 0` (order zero) every rule is a plain commutation.
    pub fn is_commutative(&self) -> bool {
        self.system.rules().iter().all(|(&(x, y), rhs)| *rhs == NCPoly::term(vec![y, x], VSeries::one(self.ctx())))
    }

    pub fn rules_text(&self) -> Vec<String> {
        self.system
            .rules()
            .iter()
            .map(|(&(x, y), rhs)| format!("{} -> {}", crate::ncpoly::render_word(&[x, y], &xi_name, false), rhs.render(&xi_name, false)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let rules: Vec<Value> = self
            .system
            .rules()
            .iter()
            .map(|(&(x, y), rhs)| json!({"lhs": [x as usize + 1, y as usize + 1], "rhs": poly_json(rhs)}))
            .collect();
        let star: Vec<Value> = self
            .star
            .iter()
            .enumerate()
            .map(|(x, img)| json!({"generator": x + 1, "image": poly_json(img)}))
            .collect();
        json!({
            "n": self.n(),
            "sigma": self.sigma.image(),
            "multiplier": self.multiplier.to_json(),
            "assignment": self.assignment.values(),
            "order": self.order,
            "rules": rules,
            "star": star,
            "invariant": poly_json(&self.invariant),
        })
    }

    pub fn from_json(v: &Value) -> Result<SeriesPresentation, PresentationError> {
        let bad = |m: &str| PresentationError::Malformed(m.to_string());
        let sigma: SigmaPermutation =
            serde_json::from_value(v["sigma"].clone()).map_err(|e| PresentationError::Malformed(e.to_string()))?;
        let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
        if sigma.n() != n {
            return Err(bad("sigma length differs from n"));
        }
        let exps: Vec<i32> = serde_json::from_value(v["multiplier"]["exponents"].clone()).map_err(|_| bad("multiplier"))?;
        let multiplier = Multiplier::from_exps(&exps).map_err(|e| PresentationError::Malformed(e.to_string()))?;
        let values: Vec<JValue> = serde_json::from_value(v["assignment"].clone()).map_err(|_| bad("assignment"))?;
        let assignment = JAssignment::new(values);
        let order = v["order"].as_u64().ok_or_else(|| bad("order"))? as usize;
        let ctx = SeriesCtx::new(n - 1, order).with_nil(assignment.nil_mask());
        let rank: Vec<u32> = (1..=n).map(|l| sigma.position_of(l) as u32).collect();
        let mut system = RewriteSystem::new(ctx, rank);
        for r in v["rules"].as_array().ok_or_else(|| bad("rules"))? {
            let lhs: Vec<usize> = serde_json::from_value(r["lhs"].clone()).map_err(|_| bad("rule lhs"))?;
            if lhs.len() != 2 || lhs.iter().any(|&x| x == 0 || x > n) {
                return Err(bad("rule lhs"));
            }
            system.insert_rule((lhs[0] - 1) as u8, (lhs[1] - 1) as u8, poly_from_json(&r["rhs"], ctx)?);
        }
        let mut star = vec![SPoly::zero(); n];
        for s in v["star"].as_array().ok_or_else(|| bad("star"))? {
            let g = s["generator"].as_u64().ok_or_else(|| bad("star generator"))? as usize;
            if g == 0 || g > n {
                return Err(bad("star generator"));
            }
            star[g - 1] = poly_from_json(&s["image"], ctx)?;
        }
        let invariant = poly_from_json(&v["invariant"], ctx)?;
        Ok(SeriesPresentation { sigma, multiplier, assignment, order, system, star, invariant })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::theorem_multiplier;

    fn pres(s: &str) -> Presentation {
        let sigma: SigmaPermutation = s.parse().unwrap();
        Presentation::generate(&sigma, &theorem_multiplier(&sigma))
    }

    #[test]
    fn n3_identity_relations() {
        let p = pres("1,2,3");
        let txt: Vec<String> =
            p.relations.iter().map(|r| format!("{} = {}", r.lhs.render(&xi_name, false), r.rhs.render(&xi_name, false))).collect();
        assert_eq!(
            txt,
            [
                "xi1*xi2 = cosh(j1*j2*v)*xi2*xi1 - i*j1*j2*sinh(j1*j2*v)*xi2*xi3",
                "xi1*xi3 = xi3*xi1 + 2*i*j1*j2^-1*sinh(j1*j2*v/2)*xi2^2",
                "xi2*xi3 = -i*j1^-1*j2^-1*sinh(j1*j2*v)*xi1*xi2 + cosh(j1*j2*v)*xi3*xi2",
            ]
        );
    }

    #[test]
    fn n3_star_and_invariant() {
        let p = pres("1,2,3");
        assert_eq!(p.star[0].render(&xi_name, false), "cosh(j1*j2*v/2)*xi1 + i*j1*j2*sinh(j1*j2*v/2)*xi3");
        assert_eq!(p.star[1].render(&xi_name, false), "xi2");
    }

    #[test]
    fn closed_rules_match_elimination() {
        for s in ["1,2,3", "2,1,3", "1,3,2", "3,1,2,4", "2,1,4,3"] {
            let p = pres(s);
            let sp = p.to_series(6).unwrap();
            let ctx = sp.ctx();
            for (k, rhs) in &p.rules {
                let e = expand_poly(rhs, ctx).unwrap();
                assert_eq!(sp.system.rules()[k], sp.normalize(&e).unwrap(), "{s} {k:?}");
            }
        }
    }

    #[test]
    fn generic_checks_n3() {
        let sp = pres("1,2,3").to_series(6).unwrap();
        assert!(sp.overlaps().unwrap().is_empty());
        assert!(sp.check_central().unwrap());
        assert!(sp.star_involutive().unwrap());
        assert!(sp.star_compatible().unwrap());
    }

    #[test]
    fn contraction_31() {
        let p = pres("1,2,3").specialize(&JAssignment::parse("iota,1").unwrap()).unwrap();
        let sp = p.to_series(4).unwrap();
        let nontrivial: Vec<String> = sp
            .rules_text()
            .into_iter()
            .filter(|r| !matches!(r.as_str(), "xi1*xi2 -> xi2*xi1" | "xi1*xi3 -> xi3*xi1" | "xi2*xi3 -> xi3*xi2"))
            .collect();
        assert_eq!(nontrivial, ["xi2*xi3 -> xi3*xi2 - i*v*xi2*xi1"]);
        assert_eq!(p.star[2].render(&xi_name, false), "xi3 - i*v*xi1/2");
    }

    #[test]
    fn json_round_trip() {
        let sp = pres("2,1,3").to_series(3).unwrap();
        let back = SeriesPresentation::from_json(&sp.to_json()).unwrap();
        assert_eq!(back, sp);
    }

    #[test]
    fn corrupted_invariant_is_not_central() {
        let mut sp = pres("1,2,3").to_series(4).unwrap();
        let ctx = sp.ctx();
        sp.invariant = sp.invariant.add(&NCPoly::term(vec![0, 0], VSeries::v(ctx).mul(&VSeries::v(ctx))));
        assert!(!sp.check_central().unwrap());
    }
}
