//! Reference results and the runner that checks the engine against them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ck::check_orthogonality;
use crate::classify::{classify, permutation_isomorphic, Algebra, ClassifyRequest, Family, SearchMode};
use crate::multiplier::{j_zero, theorem_multiplier};
use crate::ncpoly::NCPoly;
use crate::parse::{parse_expr, parse_relation, ParseCtx};
use crate::perm::SigmaPermutation;
use crate::presentation::{expand_poly, CPoly, Presentation, PresentationError};
use crate::rewrite::{ideal_equal, letter, solve_relations, SPoly, Solved};
use crate::scalar::{JAssignment, SeriesCtx, VSeries};
use crate::sphere::{specialize_sphere, sphere_presentation};

pub const REFERENCE_TOML: &str = include_str!("../data/reference.toml");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceData {
    pub version: u32,
    #[serde(default)]
    pub multiplier: Vec<MultiplierRef>,
    #[serde(default)]
    pub orthogonality: Vec<OrthogonalityRef>,
    #[serde(default)]
    pub undefined: Vec<UndefinedRef>,
    #[serde(default)]
    pub vector: Vec<RelationRef>,
    #[serde(default)]
    pub sphere: Vec<RelationRef>,
    #[serde(default)]
    pub isomorphism: Vec<IsomorphismRef>,
    #[serde(default)]
    pub count: Vec<CountRef>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MultiplierRef {
    pub id: String,
    pub sigma: Vec<usize>,
    pub expected: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OrthogonalityRef {
    pub id: String,
    pub n: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct UndefinedRef {
    pub id: String,
    pub sigma: Vec<usize>,
    pub j: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Correction {
    pub sigma: Option<Vec<usize>>,
    pub relations: Option<Vec<String>>,
    pub star: Option<BTreeMap<String, String>>,
    pub note: String,
}

/// A relation set as printed, with an optional corrected form.
#[derive(Clone, Debug, Deserialize)]
pub struct RelationRef {
    pub id: String,
    pub sigma: Vec<usize>,
    pub j: String,
    pub relations: Vec<String>,
    /// Vector spaces only; `None` skips the star check.
    pub star: Option<BTreeMap<String, String>>,
    pub corrected: Option<Correction>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct IsomorphismRef {
    pub id: String,
    pub family: String,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub j: String,
    pub expected: bool,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CountRef {
    pub id: String,
    pub family: String,
    pub n: usize,
    /// One-based slot set to `iota`.
    pub slot: usize,
    pub expected: usize,
}

pub fn reference() -> &'static ReferenceData {
    static DATA: OnceLock<ReferenceData> = OnceLock::new();
    DATA.get_or_init(|| toml::from_str(REFERENCE_TOML).expect("bundled reference data is well formed"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// The printed form fails but the recorded correction holds.
    Erratum,
    Fail,
}

impl Status {
    pub fn is_ok(self) -> bool {
        self != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub kind: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Scoreboard {
    pub order: usize,
    pub checks: Vec<CheckResult>,
    pub pass: usize,
    pub erratum: usize,
    pub fail: usize,
}

impl Scoreboard {
    pub fn all_ok(&self) -> bool {
        self.fail == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                let tag = match c.status {
                    Status::Pass => "PASS   ",
                    Status::Erratum => "ERRATUM",
                    Status::Fail => "FAIL   ",
                };
                let mut s = format!("{tag} [{}] {}: {}", c.kind, c.id, c.detail);
                if let Some(n) = &c.note {
                    s.push_str(&format!(" ({n})"));
                }
                s
            })
            .collect();
        out.push(format!("{} pass, {} erratum, {} fail (order {})", self.pass, self.erratum, self.fail, self.order));
        out.join("\n")
    }

    pub fn to_latex(&self) -> String {
        let mut out = vec!["\\begin{tabular}{lll}".to_string(), "\\hline".into(), "reference & kind & status \\\\".into(), "\\hline".into()];
        for c in &self.checks {
            let st = match c.status {
                Status::Pass => "pass",
                Status::Erratum => "erratum",
                Status::Fail => "fail",
            };
            out.push(format!("\\texttt{{{}}} & {} & {} \\\\", tex_escape(&c.id), c.kind, st));
        }
        out.push("\\hline".into());
        out.push("\\end{tabular}".into());
        out.join("\n")
    }
}

fn tex_escape(s: &str) -> String {
    s.replace('_', "\\_").replace('^', "\\^{}").replace('~', "$\\sim$")
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub order: usize,
    /// Perturbs the expectation of the named check (negative control).
    pub corrupt: Option<String>,
    /// Restricts the run to these check ids.
    pub only: Option<Vec<String>>,
}

type Outcome = Result<(bool, String), String>;

fn sigma(v: &[usize]) -> Result<SigmaPermutation, String> {
    SigmaPermutation::new(v.to_vec()).map_err(|e| e.to_string())
}

fn assignment(s: &str) -> Result<JAssignment, String> {
    JAssignment::parse(s)
}

fn family(s: &str) -> Result<Family, String> {
    s.parse()
}

/// Specializes and expands parsed relations.
fn expected_rels(rels: &[String], pctx: &ParseCtx, a: &JAssignment, ctx: SeriesCtx) -> Result<Vec<SPoly>, String> {
    rels.iter()
        .map(|r| {
            let (l, rhs) = parse_relation(r, pctx).map_err(|e| format!("`{r}`: {e}"))?;
            series(&l.sub(&rhs), a, ctx)
        })
        .collect()
}

fn series(p: &CPoly, a: &JAssignment, ctx: SeriesCtx) -> Result<SPoly, String> {
    let sp = p.map_coeffs(|c| c.specialize(a)).map_err(|e| e.to_string())?;
    expand_poly(&sp, ctx).map_err(|e| e.to_string())
}

fn corruption(ctx: SeriesCtx) -> SPoly {
    // 2iv·x₁²
    let c = VSeries::v(ctx).scale(&(crate::scalar::GaussianRational::i() * crate::scalar::GaussianRational::from_int(2)));
    NCPoly::term(vec![0, 0], c)
}

/// Adds `[a,b] = 0` for every pair no relation mentions.
fn fill_commutators(rels: &mut Vec<SPoly>, n: usize, ctx: SeriesCtx) {
    let mut mentioned = BTreeSet::new();
    for r in rels.iter() {
        for (w, c) in r.terms() {
            if w.len() == 2 && w[0] != w[1] && !c.coeff(0).is_zero() {
                mentioned.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
    }
    for x in 0..n as u8 {
        for y in x + 1..n as u8 {
            if !mentioned.contains(&(x, y)) {
                let (a, b) = (letter(ctx, x), letter(ctx, y));
                rels.push(a.mul(&b).sub(&b.mul(&a)));
            }
        }
    }
}

struct Attempt<'a> {
    sigma: &'a [usize],
    relations: &'a [String],
    star: Option<&'a BTreeMap<String, String>>,
}

fn vector_attempt(e: &RelationRef, t: &Attempt, order: usize, corrupt: bool) -> Outcome {
    let s = sigma(t.sigma)?;
    let a = assignment(&e.j)?;
    let j = theorem_multiplier(&s);
    let sp = Presentation::generate(&s, &j)
        .specialize(&a)
        .map_err(|e| e.to_string())?
        .to_series(order)
        .map_err(|e: PresentationError| e.to_string())?;
    let ctx = sp.ctx();
    let pctx = ParseCtx::vector(s.n(), *j.monomial());
    let mut rels = expected_rels(t.relations, &pctx, &a, ctx)?;
    if corrupt {
        rels[0] = rels[0].add(&corruption(ctx));
    }
    fill_commutators(&mut rels, s.n(), ctx);
    let expected = solve_relations(&rels, sp.system.rank().to_vec(), ctx).map_err(|e| e.to_string())?;
    let engine = Solved { system: sp.system.clone(), residuals: Vec::new() };
    if !ideal_equal(&engine, &expected).map_err(|e| e.to_string())? {
        return Ok((false, "relations differ".into()));
    }
    if let Some(star) = t.star {
        for x in 0..s.n() {
            let name = format!("xi{}", x + 1);
            let want = match star.get(&name) {
                Some(img) => series(&parse_expr(img, &pctx).map_err(|e| format!("`{img}`: {e}"))?, &a, ctx)?,
                None => letter(ctx, x as u8),
            };
            let diff = sp.normalize(&sp.star[x].sub(&want)).map_err(|e| e.to_string())?;
            if !diff.is_zero() {
                return Ok((false, format!("star image of {name} differs")));
            }
        }
        return Ok((true, "relations and star map agree".into()));
    }
    Ok((true, "relations agree".into()))
}

fn sphere_attempt(e: &RelationRef, t: &Attempt, order: usize, corrupt: bool) -> Outcome {
    let s = sigma(t.sigma)?;
    let a = assignment(&e.j)?;
    let entry = sphere_presentation(&s).map_err(|e| e.to_string())?;
    let c = specialize_sphere(entry, &a, order).map_err(|e| e.to_string())?;
    let Some(engine) = c.solved() else {
        return Ok((false, "left generators not eliminated".into()));
    };
    let ctx = c.ctx();
    let mut rels = expected_rels(t.relations, &ParseCtx::sphere(s.n(), *entry.multiplier.monomial()), &a, ctx)?;
    if corrupt {
        rels[0] = rels[0].add(&corruption(ctx));
    }
    let expected = solve_relations(&rels, engine.system.rank().to_vec(), ctx).map_err(|e| e.to_string())?;
    if ideal_equal(engine, &expected).map_err(|e| e.to_string())? {
        Ok((true, format!("relations agree ({})", entry.label)))
    } else {
        Ok((false, format!("relations differ ({})", entry.label)))
    }
}

/// Runs the printed form, then the correction if the printed form fails.
fn relation_check(
    kind: &'static str,
    e: &RelationRef,
    order: usize,
    corrupt: bool,
    run: fn(&RelationRef, &Attempt, usize, bool) -> Outcome,
) -> CheckResult {
    let printed = Attempt { sigma: &e.sigma, relations: &e.relations, star: e.star.as_ref() };
    let first = run(e, &printed, order, corrupt);
    let result = |status, detail: String, note| CheckResult { id: e.id.clone(), kind, status, detail, note };
    match (first, &e.corrected) {
        (Ok((true, d)), _) => result(Status::Pass, d, None),
        (first, Some(fix)) => {
            let fixed = Attempt {
                sigma: fix.sigma.as_deref().unwrap_or(&e.sigma),
                relations: fix.relations.as_deref().unwrap_or(&e.relations),
                star: fix.star.as_ref().or(e.star.as_ref()),
            };
            let printed_detail = match first {
                Ok((_, d)) => d,
                Err(d) => d,
            };
            match run(e, &fixed, order, corrupt) {
                Ok((true, _)) => result(Status::Erratum, format!("printed form: {printed_detail}; corrected form agrees"), Some(fix.note.clone())),
                Ok((false, d)) | Err(d) => result(Status::Fail, format!("printed form: {printed_detail}; corrected form: {d}"), Some(fix.note.clone())),
            }
        }
        (Ok((false, d)), None) | (Err(d), None) => result(Status::Fail, d, None),
    }
}

fn simple(id: &str, kind: &'static str, o: Outcome) -> CheckResult {
    let (status, detail) = match o {
        Ok((true, d)) => (Status::Pass, d),
        Ok((false, d)) | Err(d) => (Status::Fail, d),
    };
    CheckResult { id: id.to_string(), kind, status, detail, note: None }
}

enum Job<'a> {
    Multiplier(&'a MultiplierRef),
    Orthogonality(&'a OrthogonalityRef),
    Undefined(&'a UndefinedRef),
    Vector(&'a RelationRef),
    Sphere(&'a RelationRef),
    Isomorphism(&'a IsomorphismRef),
    Count(&'a CountRef),
}

impl Job<'_> {
    fn id(&self) -> &str {
        match self {
            Job::Multiplier(r) => &r.id,
            Job::Orthogonality(r) => &r.id,
            Job::Undefined(r) => &r.id,
            Job::Vector(r) | Job::Sphere(r) => &r.id,
            Job::Isomorphism(r) => &r.id,
            Job::Count(r) => &r.id,
        }
    }

    fn run(&self, order: usize, corrupt: bool) -> CheckResult {
        match self {
            Job::Multiplier(r) => simple(&r.id, "multiplier", (|| {
                let got = theorem_multiplier(&sigma(&r.sigma)?).to_string();
                let want = if corrupt { format!("{}*j1", r.expected) } else { r.expected.clone() };
                Ok((got == want, format!("J = {got}, expected {want}")))
            })()),
            Job::Orthogonality(r) => simple(&r.id, "orthogonality", {
                let bad: Vec<String> = SigmaPermutation::all(r.n)
                    .par_iter()
                    .filter(|s| !check_orthogonality(s))
                    .map(|s| s.to_string())
                    .collect();
                if bad.is_empty() && !corrupt {
                    Ok((true, format!("all {} permutations", SigmaPermutation::all(r.n).len())))
                } else {
                    Ok((false, format!("not orthogonal: {}", bad.join(" "))))
                }
            }),
            Job::Undefined(r) => simple(&r.id, "contraction", (|| {
                let s = sigma(&r.sigma)?;
                let a = assignment(&r.j)?;
                let res = Presentation::generate(&s, &j_zero(&s)).specialize(&a);
                let raised = res.is_err() != corrupt;
                Ok((
                    raised,
                    match res {
                        Err(e) => format!("undefined as expected: {e}"),
                        Ok(_) => "contraction unexpectedly defined".into(),
                    },
                ))
            })()),
            Job::Vector(r) => relation_check("vector", r, order, corrupt, vector_attempt),
            Job::Sphere(r) => relation_check("sphere", r, order, corrupt, sphere_attempt),
            Job::Isomorphism(r) => simple(&r.id, "isomorphism", (|| {
                let f = family(&r.family)?;
                let a = assignment(&r.j)?;
                let x = Algebra::build(f, &sigma(&r.a)?, &a, order).map_err(|e| e.to_string())?;
                let y = Algebra::build(f, &sigma(&r.b)?, &a, order).map_err(|e| e.to_string())?;
                let w = permutation_isomorphic(&x, &y, SearchMode::STRICT).map_err(|e| e.to_string())?;
                let want = r.expected != corrupt;
                let detail = match &w {
                    Some(w) => format!("isomorphic via {}", w.perm.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",")),
                    None => "no admissible renumbering".into(),
                };
                Ok((w.is_some() == want, detail))
            })()),
            Job::Count(r) => simple(&r.id, "classes", (|| {
                let mut req = ClassifyRequest::at_slot(r.n, family(&r.family)?, r.slot - 1);
                req.order = order;
                let rep = classify(&req).map_err(|e| e.to_string())?;
                let want = r.expected + corrupt as usize;
                let names: Vec<String> = rep
                    .classes
                    .iter()
                    .map(|c| {
                        c.members.iter().map(|&i| rep.entries[i].sigma_name.unwrap_or("?")).collect::<Vec<_>>().join("~")
                    })
                    .collect();
                Ok((rep.class_count() == want, format!("{} classes [{}], expected {}", rep.class_count(), names.join(", "), want)))
            })()),
        }
    }
}

/// Runs every reference check. The result depends only on the options.
pub fn verify(opts: &VerifyOptions) -> Scoreboard {
    let d = reference();
    let mut jobs: Vec<Job> = Vec::new();
    jobs.extend(d.multiplier.iter().map(Job::Multiplier));
    jobs.extend(d.orthogonality.iter().map(Job::Orthogonality));
    jobs.extend(d.undefined.iter().map(Job::Undefined));
    jobs.extend(d.vector.iter().map(Job::Vector));
    jobs.extend(d.sphere.iter().map(Job::Sphere));
    jobs.extend(d.isomorphism.iter().map(Job::Isomorphism));
    jobs.extend(d.count.iter().map(Job::Count));
    if let Some(only) = &opts.only {
        jobs.retain(|j| only.iter().any(|id| id == j.id()));
    }
    let order = opts.order.max(2);
    let checks: Vec<CheckResult> = jobs
        .par_iter()
        .map(|j| j.run(order, opts.corrupt.as_deref() == Some(j.id())))
        .collect();
    let count = |s| checks.iter().filter(|c| c.status == s).count();
    Scoreboard { order, pass: count(Status::Pass), erratum: count(Status::Erratum), fail: count(Status::Fail), checks }
}

/// Every check id, in scoreboard order.
pub fn check_ids() -> Vec<String> {
    let d = reference();
    d.multiplier
        .iter()
        .map(|r| r.id.clone())
        .chain(d.orthogonality.iter().map(|r| r.id.clone()))
        .chain(d.undefined.iter().map(|r| r.id.clone()))
        .chain(d.vector.iter().map(|r| r.id.clone()))
        .chain(d.sphere.iter().map(|r| r.id.clone()))
        .chain(d.isomorphism.iter().map(|r| r.id.clone()))
        .chain(d.count.iter().map(|r| r.id.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_loads_with_unique_ids() {
        let ids = check_ids();
        let set: BTreeSet<_> = ids.iter().collect();
        assert_eq!(set.len(), ids.len());
        assert_eq!(reference().version, 1);
    }

    #[test]
    fn fill_adds_missing_commutators() {
        let ctx = SeriesCtx::new(2, 2);
        let mut rels = vec![letter(ctx, 0).mul(&letter(ctx, 1)).sub(&letter(ctx, 1).mul(&letter(ctx, 0)))];
        fill_commutators(&mut rels, 3, ctx);
        assert_eq!(rels.len(), 3);
    }
}
