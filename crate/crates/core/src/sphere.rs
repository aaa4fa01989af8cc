//! Quantum spheres in Beltrami generators: the catalogued presentations,
//! their contractions with elimination of the left generators, and
//! kinematic labels.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::multiplier::{theorem_multiplier, Multiplier};
use crate::ncpoly::{render_word, Coeff, NCPoly};
use crate::parse::{parse_relation, ParseCtx, ParseError};
use crate::perm::SigmaPermutation;
use crate::presentation::{expand_poly, CPoly, Relation};
use crate::rewrite::{solve_relations, RewriteError, SPoly, Solved};
use crate::scalar::{JAssignment, JValue, ScalarError, ScalarExpr, SeriesCtx, UndefinedContraction, VSeries};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SphereError {
    #[error("no catalogued sphere for N={n}, sigma={sigma}")]
    Uncatalogued { n: usize, sigma: String },
    #[error("sphere catalog entry {label}: {err}")]
    Catalog { label: String, err: ParseError },
    #[error("malformed sphere catalog: {0}")]
    Malformed(String),
    #[error(transparent)]
    Undefined(#[from] UndefinedContraction),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Deserialize)]
struct CatalogFile {
    version: u32,
    sphere: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    label: String,
    n: usize,
    sigma: Vec<usize>,
    relations: Vec<String>,
    note: Option<String>,
}

/// One catalogued sphere `S^{N−1}(j;σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereEntry {
    pub label: String,
    pub n: usize,
    pub sigma: SigmaPermutation,
    pub multiplier: Multiplier,
    pub relations: Vec<Relation>,
    pub source: Vec<String>,
    pub note: Option<String>,
}

pub const CATALOG_TOML: &str = include_str!("../data/spheres.toml");

impl SphereEntry {
    /// Number of right generators `r_k`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn parse_ctx(&self) -> ParseCtx {
        ParseCtx::sphere(self.n, *self.multiplier.monomial())
    }

    pub fn to_text(&self) -> String {
        let name = sphere_name(self.rank());
        let mut out = vec![format!(
            "S^{}(sigma={}), J = {}  [{}]",
            self.n - 1,
            self.sigma,
            self.multiplier,
            self.label
        )];
        for r in &self.relations {
            out.push(format!("  {} = {}", r.lhs.render(&name, false), r.rhs.render(&name, false)));
        }
        out.join("\n")
    }
}

/// Parses a catalog document.
pub fn parse_catalog(text: &str) -> Result<Vec<SphereEntry>, SphereError> {
    let file: CatalogFile = toml::from_str(text).map_err(|e| SphereError::Malformed(e.to_string()))?;
    if file.version != 1 {
        return Err(SphereError::Malformed(format!("unsupported catalog version {}", file.version)));
    }
    let mut out = Vec::new();
    for raw in file.sphere {
        let sigma = SigmaPermutation::new(raw.sigma.clone()).map_err(|e| SphereError::Malformed(e.to_string()))?;
        if sigma.n() != raw.n {
            return Err(SphereError::Malformed(format!("{}: sigma length differs from n", raw.label)));
        }
        let multiplier = theorem_multiplier(&sigma);
        let ctx = ParseCtx::sphere(raw.n, *multiplier.monomial());
        let relations = raw
            .relations
            .iter()
            .map(|s| {
                parse_relation(s, &ctx)
                    .map(|(lhs, rhs)| Relation { lhs, rhs })
                    .map_err(|err| SphereError::Catalog { label: raw.label.clone(), err })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(SphereEntry {
            label: raw.label,
            n: raw.n,
            sigma,
            multiplier,
            relations,
            source: raw.relations,
            note: raw.note,
        });
    }
    Ok(out)
}

/// The shipped catalog.
pub fn catalog() -> Result<&'static [SphereEntry], SphereError> {
    static CELL: OnceLock<Result<Vec<SphereEntry>, SphereError>> = OnceLock::new();
    CELL.get_or_init(|| parse_catalog(CATALOG_TOML)).as_ref().map(|v| v.as_slice()).map_err(Clone::clone)
}

pub fn sphere_presentation(sigma: &SigmaPermutation) -> Result<&'static SphereEntry, SphereError> {
    catalog()?
        .iter()
        .find(|e| e.sigma == *sigma)
        .ok_or_else(|| SphereError::Uncatalogued { n: sigma.n(), sigma: sigma.to_string() })
}

/// Names `r1…`, then `rh1…`, for `m` right generators.
pub fn sphere_name(m: usize) -> impl Fn(u8) -> String {
    move |x| {
        let x = x as usize;
        if x < m {
            format!("r{}", x + 1)
        } else {
            format!("rh{}", x - m + 1)
        }
    }
}

pub fn sphere_latex(m: usize) -> impl Fn(u8) -> String {
    move |x| {
        let x = x as usize;
        if x < m {
            format!("r_{{{}}}", x + 1)
        } else {
            format!("\\hat{{r}}_{{{}}}", x - m + 1)
        }
    }
}

/// Outcome of removing the left generators after a contraction.
#[derive(Clone, Debug, PartialEq)]
pub enum Reduction {
    /// No parameter is nilpotent: the relations are kept as they are.
    NotAttempted,
    /// Exact elimination; `relations` are closed-form polynomials in `r`.
    Closed { relations: Vec<CPoly>, solved: Solved },
    /// Elimination by fixed-point iteration in the series ring.
    Series { solved: Solved },
    /// The left generators could not be removed; relations stay symbolic.
    NonEliminable(String),
}

/// A catalogued sphere specialized at an assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereContraction {
    pub entry: SphereEntry,
    pub assignment: JAssignment,
    pub order: usize,
    /// `lhs − rhs` of every catalogued relation, specialized.
    pub relations: Vec<CPoly>,
    pub reduction: Reduction,
}

impl SphereContraction {
    pub fn solved(&self) -> Option<&Solved> {
        match &self.reduction {
            Reduction::Closed { solved, .. } | Reduction::Series { solved } => Some(solved),
            _ => None,
        }
    }

    pub fn is_eliminated(&self) -> bool {
        self.solved().is_some()
    }

    pub fn ctx(&self) -> SeriesCtx {
        SeriesCtx::new(self.entry.n - 1, self.order).with_nil(self.assignment.nil_mask())
    }

    pub fn label(&self) -> String {
        kinematics_label(&self.assignment, self.entry.n)
    }

    /// Rules over `r` (when eliminated) rendered as text.
    pub fn rules_text(&self) -> Vec<String> {
        let name = sphere_name(self.entry.rank());
        match self.solved() {
            Some(s) => s
                .system
                .rules()
                .iter()
                .map(|(&(x, y), rhs)| format!("{} -> {}", render_word(&[x, y], &name, false), rhs.render(&name, false)))
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let m = self.entry.rank();
        let name = sphere_name(m);
        let mut out = vec![format!(
            "S^{}(sigma={}), J = {}, {}  [{}]",
            m,
            self.entry.sigma,
            self.entry.multiplier,
            self.assignment,
            self.entry.label
        )];
        out.push(format!("label: {}", self.label()));
        match &self.reduction {
            Reduction::NotAttempted | Reduction::NonEliminable(_) => {
                if let Reduction::NonEliminable(why) = &self.reduction {
                    out.push(format!("left generators kept: {why}"));
                }
                out.push("relations:".into());
                for r in &self.relations {
                    out.push(format!("  {} = 0", r.render(&name, false)));
                }
            }
            Reduction::Closed { relations, .. } => {
                out.push("relations:".into());
                for r in relations {
                    out.push(format!("  {} = 0", r.render(&name, false)));
                }
            }
            Reduction::Series { .. } => {}
        }
        if self.is_eliminated() {
            out.push(format!("rules (to order {}):", self.order));
            for r in self.rules_text() {
                out.push(format!("  {r}"));
            }
        }
        out.join("\n")
    }

    pub fn to_latex(&self) -> String {
        let m = self.entry.rank();
        let name = sphere_latex(m);
        let rels: Vec<&CPoly> = match &self.reduction {
            Reduction::Closed { relations, .. } => relations.iter().collect(),
            _ => self.relations.iter().collect(),
        };
        let mut lines = vec![format!("% S^{}(sigma={}), {}", m, self.entry.sigma, self.assignment)];
        lines.push("\\begin{align*}".into());
        lines.push(rels.iter().map(|r| format!("{} &= 0", r.render(&name, true))).collect::<Vec<_>>().join(" \\\\\n"));
        lines.push("\\end{align*}".into());
        lines.join("\n")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let name = sphere_name(self.entry.rank());
        let (kind, why) = match &self.reduction {
            Reduction::NotAttempted => ("symbolic", None),
            Reduction::Closed { .. } => ("closed", None),
            Reduction::Series { .. } => ("series", None),
            Reduction::NonEliminable(w) => ("non-eliminable", Some(w.clone())),
        };
        serde_json::json!({
            "reference": self.entry.label,
            "n": self.entry.n,
            "sigma": self.entry.sigma.image(),
            "multiplier": self.entry.multiplier.to_json(),
            "assignment": self.assignment.values(),
            "order": self.order,
            "label": self.label(),
            "reduction": kind,
            "reason": why,
            "relations": self.relations.iter().map(|r| r.render(&name, false)).collect::<Vec<_>>(),
            "rules": self.rules_text(),
        })
    }
}

/// `p` with every occurrence of letter `x` replaced by `g`.
pub fn substitute<C: Coeff>(p: &NCPoly<C>, x: u8, g: &NCPoly<C>, one: &C) -> NCPoly<C> {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        if !w.contains(&x) {
            out.add_term(w.clone(), c.clone());
            continue;
        }
        let mut acc = NCPoly::term(vec![], c.clone());
        for &y in w {
            acc = if y == x { acc.mul(g) } else { acc.mul(&NCPoly::term(vec![y], one.clone())) };
        }
        out = out.add(&acc);
    }
    out
}

/// Strategy used by the generic eliminator for one coefficient ring.
trait Eliminator<C: Coeff> {
    fn one(&self) -> C;
    /// Inverse of the coefficient of a defining word, if it qualifies.
    fn pivot_inverse(&self, c: &C) -> Option<C>;
    /// Whether an occurrence of the eliminated letter with this coefficient
    /// is allowed on the right-hand side.
    fn recursive_ok(&self, c: &C) -> bool;
    fn max_iterations(&self) -> usize;
}

struct ClosedForm(usize);

impl Eliminator<ScalarExpr> for ClosedForm {
    fn one(&self) -> ScalarExpr {
        ScalarExpr::one(self.0)
    }
    fn pivot_inverse(&self, c: &ScalarExpr) -> Option<ScalarExpr> {
        // constants and j-monomials only: the contraction has already
        // collapsed the hyperbolic factors
        let plain = c.terms().all(|(p, _)| p.atoms.is_empty() && p.vpow == 0);
        if plain {
            c.inv().ok()
        } else {
            None
        }
    }
    fn recursive_ok(&self, _: &ScalarExpr) -> bool {
        true
    }
    fn max_iterations(&self) -> usize {
        6
    }
}

struct SeriesForm(SeriesCtx);

impl Eliminator<VSeries> for SeriesForm {
    fn one(&self) -> VSeries {
        VSeries::one(self.0)
    }
    fn pivot_inverse(&self, c: &VSeries) -> Option<VSeries> {
        if c.is_unit() {
            c.try_inv().ok()
        } else {
            None
        }
    }
    fn recursive_ok(&self, c: &VSeries) -> bool {
        c.is_v_divisible()
    }
    fn max_iterations(&self) -> usize {
        self.0.order + 2
    }
}

/// Removes letters `hats` from `rels`; returns the remaining relations or
/// the reason for failure.
fn eliminate<C: Coeff, E: Eliminator<C>>(mut rels: Vec<NCPoly<C>>, hats: &[u8], el: &E) -> Result<Vec<NCPoly<C>>, String> {
    let one = el.one();
    let mut pending: Vec<u8> = hats.iter().copied().filter(|&h| rels.iter().any(|r| r.contains_letter(h))).collect();
    while !pending.is_empty() {
        let mut progress = None;
        'search: for (pi, &h) in pending.iter().enumerate() {
            for (ri, rel) in rels.iter().enumerate() {
                let Some(c) = rel.coeff(&[h]) else { continue };
                let Some(inv) = el.pivot_inverse(c) else { continue };
                let rest = rel.sub(&NCPoly::term(vec![h], c.clone()));
                if rest.terms().any(|(w, k)| w.contains(&h) && !el.recursive_ok(k)) {
                    continue;
                }
                // h = −rest·c⁻¹, iterated to a fixed point
                let mut f = rest.neg().scale_by(&inv);
                let mut it = 0;
                while f.contains_letter(h) && it < el.max_iterations() {
                    f = substitute(&f, h, &f, &one);
                    it += 1;
                }
                if f.contains_letter(h) {
                    continue;
                }
                progress = Some((pi, ri, f));
                break 'search;
            }
        }
        let Some((pi, ri, f)) = progress else {
            let names: Vec<String> = pending.iter().map(|h| format!("letter {h}")).collect();
            return Err(format!("no triangular defining relation for {}", names.join(", ")));
        };
        let h = pending.remove(pi);
        rels.remove(ri);
        rels = rels.iter().map(|r| substitute(r, h, &f, &one)).filter(|r| !r.is_zero()).collect();
        pending.retain(|&x| rels.iter().any(|r| r.contains_letter(x)));
    }
    Ok(rels)
}

/// Specializes a catalogued sphere and, for contractions, eliminates the
/// left generators.
pub fn specialize_sphere(entry: &SphereEntry, a: &JAssignment, order: usize) -> Result<SphereContraction, SphereError> {
    let mut relations = Vec::new();
    for (r, src) in entry.relations.iter().zip(&entry.source) {
        let d = r.difference();
        let sp = d.map_coeffs(|c| c.specialize(a)).map_err(|e| e.within(format!("{} relation {src}", entry.label)))?;
        if !sp.is_zero() {
            relations.push(sp);
        }
    }
    let m = entry.rank();
    let ctx = SeriesCtx::new(entry.n - 1, order).with_nil(a.nil_mask());
    let hats: Vec<u8> = (m..2 * m).map(|x| x as u8).collect();
    let rank: Vec<u32> = (0..m as u32).collect();
    let reduction = if a.nilpotent_slots().is_empty() {
        Reduction::NotAttempted
    } else {
        match eliminate(relations.clone(), &hats, &ClosedForm(entry.n - 1)) {
            Ok(closed) => {
                let rels = closed.iter().map(|p| expand_poly(p, ctx)).collect::<Result<Vec<SPoly>, _>>()?;
                let solved = solve_relations(&rels, rank, ctx)?;
                Reduction::Closed { relations: closed, solved }
            }
            Err(_) => {
                let rels = relations.iter().map(|p| expand_poly(p, ctx)).collect::<Result<Vec<SPoly>, _>>()?;
                match eliminate(rels, &hats, &SeriesForm(ctx)) {
                    Ok(rels) => Reduction::Series { solved: solve_relations(&rels, rank, ctx)? },
                    Err(why) => Reduction::NonEliminable(why),
                }
            }
        }
    };
    Ok(SphereContraction { entry: entry.clone(), assignment: a.clone(), order, relations, reduction })
}

/// Kinematic name of a contraction; a neutral descriptor otherwise.
pub fn kinematics_label(a: &JAssignment, n: usize) -> String {
    use JValue::*;
    let grid = |j1: JValue, j2: JValue| -> Option<&'static str> {
        let col = match j1 {
            Unit => 0,
            Nilpotent => 1,
            Imaginary => 2,
            Symbolic => return None,
        };
        let row = match j2 {
            Unit => ["Spherical", "Euclid", "Lobachevsky"],
            Nilpotent => ["Newton(+)", "Galilei", "Newton(-)"],
            Imaginary => ["anti de Sitter", "Minkowski", "de Sitter"],
            Symbolic => return None,
        };
        Some(row[col])
    };
    let v = a.values();
    let named = match (n, v) {
        (3, [j1, j2]) => grid(*j1, *j2),
        (4, [j1, Nilpotent, Unit]) if *j1 != Symbolic => grid(*j1, Nilpotent),
        _ => None,
    };
    match named {
        Some(s) => s.to_string(),
        None => format!("S^{}(j) with assignment {}", n - 1, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> JAssignment {
        JAssignment::parse(s).unwrap()
    }

    #[test]
    fn catalog_loads() {
        let c = catalog().unwrap();
        assert_eq!(c.len(), 9);
        let e = sphere_presentation(&SigmaPermutation::identity(3)).unwrap();
        assert_eq!(e.label, "1-3q-6");
        assert_eq!(e.multiplier.to_string(), "j1*j2");
        assert!(sphere_presentation(&SigmaPermutation::new(vec![3, 2, 1]).unwrap()).is_err());
    }

    #[test]
    fn euclid_plane_from_sigma0() {
        let e = sphere_presentation(&SigmaPermutation::identity(3)).unwrap();
        let c = specialize_sphere(e, &a("iota,j"), 6).unwrap();
        let Reduction::Closed { relations, .. } = &c.reduction else { panic!("{:?}", c.reduction) };
        assert_eq!(relations.len(), 1);
        assert_eq!(c.rules_text(), vec!["r1*r2 -> r2*r1 - i*v*r1"]);
    }

    #[test]
    fn units_keep_left_generators() {
        let e = sphere_presentation(&SigmaPermutation::identity(3)).unwrap();
        let c = specialize_sphere(e, &a("1,1"), 4).unwrap();
        assert_eq!(c.reduction, Reduction::NotAttempted);
        assert_eq!(c.relations.len(), 3);
    }

    #[test]
    fn substitution_replaces_letters() {
        let one = ScalarExpr::one(1);
        let p = NCPoly::term(vec![0, 1, 0], one.clone());
        let g = NCPoly::term(vec![2], one.clone()).add(&NCPoly::term(vec![], one.clone()));
        let s = substitute(&p, 0, &g, &one);
        assert_eq!(s.len(), 4);
        assert!(s.coeff(&[2, 1, 2]).is_some() && s.coeff(&[1]).is_some());
    }

    #[test]
    fn kinematics_grid() {
        assert_eq!(kinematics_label(&a("iota,iota"), 3), "Galilei");
        assert_eq!(kinematics_label(&a("i,1"), 3), "Lobachevsky");
        assert_eq!(kinematics_label(&a("1,1"), 3), "Spherical");
        assert_eq!(kinematics_label(&a("i,i"), 3), "de Sitter");
        assert_eq!(kinematics_label(&a("iota,iota,1"), 4), "Galilei");
        assert!(kinematics_label(&a("iota,1,1"), 4).starts_with("S^3(j)"));
    }
}
