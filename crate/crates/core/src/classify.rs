//! Classification of contracted algebras up to renumbering of generators.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::multiplier::theorem_multiplier;
use crate::ncpoly::xi_name;
use crate::perm::SigmaPermutation;
use crate::presentation::{Presentation, PresentationError};
use crate::rewrite::{RewriteError, SPoly, Solved};
use crate::scalar::{JAssignment, JValue, VSeries};
use crate::sphere::{kinematics_label, specialize_sphere, sphere_name, sphere_presentation, SphereError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Vector,
    Sphere,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "vector" => Ok(Family::Vector),
            "sphere" => Ok(Family::Sphere),
            _ => Err(format!("unknown family `{s}` (expected vector or sphere)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("left generators could not be eliminated for sigma={sigma} at {assignment}")]
    NotEliminated { sigma: String, assignment: String },
    #[error("unsupported classification request: {0}")]
    Unsupported(String),
}

/// A fully specialized algebra with its fibering.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub family: Family,
    pub n: usize,
    pub sigma: SigmaPermutation,
    pub assignment: JAssignment,
    pub solved: Solved,
    /// Base sizes, one per nilpotent slot: the letters `0..b` form a base.
    pub splits: Vec<usize>,
}

impl Algebra {
    pub fn vector(sigma: &SigmaPermutation, a: &JAssignment, order: usize) -> Result<Algebra, ClassifyError> {
        let p = Presentation::generate(sigma, &theorem_multiplier(sigma)).specialize(a).map_err(PresentationError::from)?;
        let sp = p.to_series(order)?;
        Ok(Algebra {
            family: Family::Vector,
            n: sigma.n(),
            sigma: sigma.clone(),
            assignment: a.clone(),
            solved: Solved { system: sp.system, residuals: Vec::new() },
            splits: a.nilpotent_slots().iter().map(|&s| s + 1).collect(),
        })
    }

    pub fn sphere(sigma: &SigmaPermutation, a: &JAssignment, order: usize) -> Result<Algebra, ClassifyError> {
        let entry = sphere_presentation(sigma)?;
        let c = specialize_sphere(entry, a, order)?;
        let solved = c.solved().cloned().ok_or_else(|| ClassifyError::NotEliminated {
            sigma: sigma.to_string(),
            assignment: a.to_string(),
        })?;
        Ok(Algebra {
            family: Family::Sphere,
            n: sigma.n(),
            sigma: sigma.clone(),
            assignment: a.clone(),
            solved,
            splits: a.nilpotent_slots().iter().map(|&s| s).filter(|&b| b > 0).collect(),
        })
    }

    pub fn build(family: Family, sigma: &SigmaPermutation, a: &JAssignment, order: usize) -> Result<Algebra, ClassifyError> {
        match family {
            Family::Vector => Algebra::vector(sigma, a, order),
            Family::Sphere => Algebra::sphere(sigma, a, order),
        }
    }

    pub fn ngens(&self) -> usize {
        self.solved.system.ngens()
    }

    pub fn name(&self) -> Box<dyn Fn(u8) -> String> {
        match self.family {
            Family::Vector => Box::new(xi_name),
            Family::Sphere => Box::new(sphere_name(self.n - 1)),
        }
    }

    pub fn digest(&self) -> String {
        let name = self.name();
        let mut d = self.solved.system.digest(&*name);
        for r in &self.solved.residuals {
            d.push_str(&format!("; {} = 0", r.render(&*name, false)));
        }
        d
    }

    fn relations(&self) -> Vec<SPoly> {
        self.solved.system.relations().into_iter().chain(self.solved.residuals.iter().cloned()).collect()
    }

    /// Base and fiber dimensions for each nilpotent slot.
    pub fn fibering(&self) -> Vec<(usize, usize)> {
        self.splits.iter().map(|&b| (b, self.ngens() - b)).collect()
    }
}

/// Extra freedom granted by the extended search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchMode {
    /// Ignore the base/fiber split.
    pub ignore_fibering: bool,
    /// Also allow `v -> -v`.
    pub reflect_v: bool,
}

impl SearchMode {
    pub const STRICT: SearchMode = SearchMode { ignore_fibering: false, reflect_v: false };
    pub const EXTENDED: SearchMode = SearchMode { ignore_fibering: true, reflect_v: true };
}

/// A permutation `pi` of letters (letter `x` of A becomes `pi[x]` of B),
/// optionally with `v -> -v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub perm: Vec<usize>,
    pub reflect_v: bool,
}

impl Witness {
    pub fn is_identity(&self) -> bool {
        !self.reflect_v && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

fn admissible(perm: &[usize], splits: &[usize]) -> bool {
    splits.iter().all(|&b| perm[..b].iter().all(|&p| p < b))
}

fn reflect(p: &SPoly) -> SPoly {
    p.map_coeffs(|c| -> Result<VSeries, ()> {
        let coeffs = c
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, q)| if k % 2 == 1 { q.neg() } else { q.clone() })
            .collect();
        Ok(VSeries::from_coeffs(c.ctx(), coeffs))
    })
    .expect("infallible")
}

fn transport(rels: &[SPoly], perm: &[usize], flip: bool) -> Vec<SPoly> {
    rels.iter()
        .map(|r| {
            let q = r.relabel(|x| perm[x as usize] as u8);
            if flip {
                reflect(&q)
            } else {
                q
            }
        })
        .collect()
}

/// Searches for a renumbering carrying A onto B; both directions are
/// verified. Permutations are tried in lexicographic order, so the witness is
/// deterministic.
pub fn permutation_isomorphic(a: &Algebra, b: &Algebra, mode: SearchMode) -> Result<Option<Witness>, RewriteError> {
    if a.ngens() != b.ngens() || a.solved.residuals.is_empty() != b.solved.residuals.is_empty() {
        return Ok(None);
    }
    let fibered = !mode.ignore_fibering;
    if fibered && a.splits != b.splits {
        return Ok(None);
    }
    let n = a.ngens();
    let ra = a.relations();
    let rb = b.relations();
    let flips: &[bool] = if mode.reflect_v { &[false, true] } else { &[false] };
    for &flip in flips {
        for perm in (0..n).permutations(n) {
            if fibered && !admissible(&perm, &a.splits) {
                continue;
            }
            let mut inv = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            if b.solved.system.annihilates(&transport(&ra, &perm, flip))?
                && a.solved.system.annihilates(&transport(&rb, &inv, flip))?
            {
                return Ok(Some(Witness { perm, reflect_v: flip }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEntry {
    pub sigma: Vec<usize>,
    pub sigma_name: Option<&'static str>,
    pub assignment: String,
    pub digest: String,
    /// (base, fiber) dimensions per nilpotent slot.
    pub fibering: Vec<(usize, usize)>,
    pub kinematics: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    pub witness: Witness,
}

#[derive(Clone, Debug, Serialize)]
pub struct Class {
    pub members: Vec<usize>,
    /// Spanning witnesses inside the block.
    pub links: Vec<Link>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub family: Family,
    pub order: usize,
    pub entries: Vec<ReportEntry>,
    pub classes: Vec<Class>,
    /// Classes under the extended search (fibering ignored, `v -> -v`
    /// allowed); reported separately and never used for the counts.
    pub extended: Option<Vec<Class>>,
}

/// Which permutations to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// The named permutations of the catalogue.
    Named,
    /// All of `S(N)` (vector spaces only).
    All,
}

#[derive(Clone, Debug)]
pub struct ClassifyRequest {
    pub n: usize,
    pub family: Family,
    pub assignment: JAssignment,
    pub order: usize,
    pub scope: Scope,
    pub extended: bool,
}

impl ClassifyRequest {
    /// Units everywhere except `iota` at slot `k` (0-based).
    pub fn at_slot(n: usize, family: Family, k: usize) -> Self {
        let mut v = vec![JValue::Unit; n - 1];
        v[k] = JValue::Nilpotent;
        ClassifyRequest { n, family, assignment: JAssignment::new(v), order: 4, scope: Scope::Named, extended: false }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn partition(algebras: &[Algebra], mode: SearchMode) -> Result<Vec<Class>, RewriteError> {
    let pairs: Vec<(usize, usize)> = (0..algebras.len()).tuple_combinations().collect();
    let found: Vec<Option<Link>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            permutation_isomorphic(&algebras[i], &algebras[j], mode)
                .map(|w| w.map(|witness| Link { from: i, to: j, witness }))
        })
        .collect::<Result<_, _>>()?;
    let mut parent: Vec<usize> = (0..algebras.len()).collect();
    let mut links: Vec<Link> = Vec::new();
    for link in found.into_iter().flatten() {
        let (ri, rj) = (find(&mut parent, link.from), find(&mut parent, link.to));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
            links.push(link);
        }
    }
    let mut classes: Vec<Class> = Vec::new();
    for i in 0..algebras.len() {
        let r = find(&mut parent, i);
        if r == i {
            classes.push(Class { members: Vec::new(), links: Vec::new() });
        }
    }
    let roots: Vec<usize> = (0..algebras.len()).filter(|&i| find(&mut parent, i) == i).collect();
    for i in 0..algebras.len() {
        let r = find(&mut parent, i);
        let c = roots.iter().position(|&x| x == r).expect("root");
        classes[c].members.push(i);
    }
    for l in links {
        let r = find(&mut parent, l.from);
        let c = roots.iter().position(|&x| x == r).expect("root");
        classes[c].links.push(l);
    }
    Ok(classes)
}

fn sigmas(req: &ClassifyRequest) -> Result<Vec<SigmaPermutation>, ClassifyError> {
    match (req.scope, req.family) {
        (Scope::Named, _) => {
            let v: Vec<_> = SigmaPermutation::named(req.n).into_iter().map(|(_, s)| s).collect();
            if v.is_empty() {
                return Err(ClassifyError::Unsupported(format!("no named permutations for N={}", req.n)));
            }
            Ok(v)
        }
        (Scope::All, Family::Vector) => Ok(SigmaPermutation::all(req.n)),
        (Scope::All, Family::Sphere) => Err(ClassifyError::Unsupported("spheres are catalogued for the named permutations only".into())),
    }
}

/// Enumerates the permutations at one assignment and partitions them into
/// isomorphism classes.
pub fn classify(req: &ClassifyRequest) -> Result<ClassificationReport, ClassifyError> {
    if req.assignment.len() + 1 != req.n {
        return Err(ClassifyError::Unsupported(format!("assignment {} does not fit N={}", req.assignment, req.n)));
    }
    let algebras: Vec<Algebra> = sigmas(req)?
        .par_iter()
        .map(|s| Algebra::build(req.family, s, &req.assignment, req.order))
        .collect::<Result<_, _>>()?;
    let entries = algebras
        .iter()
        .map(|a| ReportEntry {
            sigma: a.sigma.image().to_vec(),
            sigma_name: a.sigma.name(),
            assignment: a.assignment.tokens(),
            digest: a.digest(),
            fibering: a.fibering(),
            kinematics: match a.family {
                Family::Sphere => Some(kinematics_label(&a.assignment, a.n)),
                Family::Vector => None,
            },
        })
        .collect();
    let classes = partition(&algebras, SearchMode::STRICT)?;
    let extended = if req.extended { Some(partition(&algebras, SearchMode::EXTENDED)?) } else { None };
    Ok(ClassificationReport { n: req.n, family: req.family, order: req.order, entries, classes, extended })
}

impl ClassificationReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    fn entry_name(&self, i: usize) -> String {
        let e = &self.entries[i];
        match e.sigma_name {
            Some(s) => s.to_string(),
            None => format!("({})", e.sigma.iter().join(",")),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = vec![format!(
            "{:?} N={} at {}: {} class(es)",
            self.family,
            self.n,
            self.entries.first().map(|e| e.assignment.as_str()).unwrap_or("-"),
            self.classes.len()
        )];
        for (k, c) in self.classes.iter().enumerate() {
            let names = c.members.iter().map(|&i| self.entry_name(i)).join(", ");
            out.push(format!("  class {}: {}", k + 1, names));
            out.push(format!("    {}", self.entries[c.members[0]].digest));
            for l in &c.links {
                out.push(format!(
                    "    {} ~ {} via {}",
                    self.entry_name(l.from),
                    self.entry_name(l.to),
                    l.witness.perm.iter().map(|p| p + 1).join(",")
                ));
            }
        }
        if let Some(ext) = &self.extended {
            out.push(format!("  extended search: {} class(es)", ext.len()));
            for c in ext {
                out.push(format!("    {}", c.members.iter().map(|&i| self.entry_name(i)).join(", ")));
            }
        }
        out.join("\n")
    }

    /// Summary table as a standalone LaTeX fragment.
    pub fn to_latex(&self) -> String {
        let mut out = vec![
            "\\begin{tabular}{lll}".to_string(),
            "\\hline".into(),
            "class & $\\sigma$ & relations \\\\".into(),
            "\\hline".into(),
        ];
        for (k, c) in self.classes.iter().enumerate() {
            for &i in &c.members {
                let e = &self.entries[i];
                out.push(format!(
                    "{} & $({})$ & \\texttt{{{}}} \\\\",
                    k + 1,
                    e.sigma.iter().join(","),
                    latex_escape(&e.digest)
                ));
            }
        }
        out.push("\\hline".into());
        out.push("\\end{tabular}".into());
        out.join("\n")
    }
}

fn latex_escape(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}")
        .replace('_', "\\_")
        .replace('^', "\\^{}")
        .replace('&', "\\&")
        .replace('#', "\\#")
        .replace('%', "\\%")
        .replace('{', "\\{")
        .replace('}', "\\}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> SigmaPermutation {
        SigmaPermutation::new(v.to_vec()).unwrap()
    }

    fn a(t: &str) -> JAssignment {
        JAssignment::parse(t).unwrap()
    }

    #[test]
    fn renumbered_fiber_is_isomorphic() {
        let x = Algebra::vector(&s(&[1, 3, 2]), &a("iota,1"), 4).unwrap();
        let y = Algebra::vector(&s(&[1, 2, 3]), &a("iota,1"), 4).unwrap();
        let w = permutation_isomorphic(&x, &y, SearchMode::STRICT).unwrap().unwrap();
        assert_eq!(w.perm, vec![0, 2, 1]);
    }

    #[test]
    fn hat_sigma_differs_from_identity() {
        let x = Algebra::vector(&s(&[2, 1, 3]), &a("iota,1"), 4).unwrap();
        let y = Algebra::vector(&s(&[1, 2, 3]), &a("iota,1"), 4).unwrap();
        assert!(permutation_isomorphic(&x, &y, SearchMode::STRICT).unwrap().is_none());
    }

    #[test]
    fn reflexive() {
        let x = Algebra::sphere(&s(&[2, 1, 4, 3]), &a("1,iota,1"), 4).unwrap();
        let w = permutation_isomorphic(&x, &x, SearchMode::STRICT).unwrap().unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn fibering_blocks_base_moves() {
        assert!(admissible(&[0, 2, 1], &[1]));
        assert!(!admissible(&[1, 0, 2], &[1]));
        assert!(admissible(&[1, 0, 2], &[]));
    }

    #[test]
    fn plane_counts() {
        let r = classify(&ClassifyRequest::at_slot(3, Family::Vector, 0)).unwrap();
        assert_eq!(r.class_count(), 2);
        let r = classify(&ClassifyRequest::at_slot(3, Family::Sphere, 0)).unwrap();
        assert_eq!(r.class_count(), 2);
    }
}
