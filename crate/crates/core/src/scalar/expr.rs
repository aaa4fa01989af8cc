use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::assignment::{JAssignment, UndefinedContraction};
use super::gaussian::GaussianRational;
use super::monomial::{nil_annihilates, JMonomial, JPolynomial};
use super::render::{join_signed, latex_term, mono_factors, mono_latex, paren_if_sum, text_term, v_factor};
use super::series::{SeriesCtx, VSeries};
use super::ScalarError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trig {
    Cosh,
    Sinh,
    Tanh,
}

impl Trig {
    pub fn name(self) -> &'static str {
        match self {
            Trig::Cosh => "cosh",
            Trig::Sinh => "sinh",
            Trig::Tanh => "tanh",
        }
    }

    fn is_odd(self) -> bool {
        !matches!(self, Trig::Cosh)
    }
}

/// `f(c·J·v)` with `c` kept in canonical sign (odd functions absorb it).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub kind: Trig,
    pub c: GaussianRational,
    pub j: JMonomial,
}

impl Atom {
    fn arg_text(&self, nil: u16) -> String {
        let mut f = mono_factors(&self.j, nil);
        f.push("v".into());
        text_term(&self.c, f).1
    }

    fn arg_latex(&self, nil: u16) -> String {
        let mut f = mono_latex(&self.j, nil);
        f.push("v".into());
        latex_term(&self.c, f).1
    }

    /// Series of `f(c·J·v)` to `ctx.order`.
    fn series(&self, ctx: SeriesCtx) -> VSeries {
        match self.kind {
            Trig::Tanh => {
                let s = Atom { kind: Trig::Sinh, ..self.clone() }.series(ctx);
                let ch = Atom { kind: Trig::Cosh, ..self.clone() }.series(ctx);
                s.mul(&ch.try_inv().expect("cosh is a unit"))
            }
            kind => {
                let start = if kind == Trig::Cosh { 0 } else { 1 };
                let mut out = VSeries::zero(ctx);
                let mut fact = GaussianRational::one();
                for k in 0..=ctx.order {
                    if k > 0 {
                        fact = &fact * &GaussianRational::from_int(k as i64);
                    }
                    if k % 2 != start {
                        continue;
                    }
                    let c = &self.c.pow(k as u32) * &fact.inv().expect("nonzero");
                    out = out.add(&VSeries::term(ctx, self.j.pow(k as i32), c, k));
                }
                out
            }
        }
    }
}

enum Canon {
    Const(GaussianRational),
    Atom(Atom, bool),
}

fn canon_atom(kind: Trig, c: GaussianRational, j: JMonomial) -> Canon {
    if c.is_zero() {
        return Canon::Const(if kind == Trig::Cosh { GaussianRational::one() } else { GaussianRational::zero() });
    }
    if c.is_negative_canonical() {
        Canon::Atom(Atom { kind, c: -c, j }, kind.is_odd())
    } else {
        Canon::Atom(Atom { kind, c, j }, false)
    }
}

/// One product `mono · v^vpow · Π atom^power`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Product {
    pub mono: JMonomial,
    pub vpow: u32,
    pub atoms: Vec<(Atom, i32)>,
}

impl Product {
    fn one(nvars: usize) -> Self {
        Product { mono: JMonomial::one(nvars), vpow: 0, atoms: Vec::new() }
    }

    fn mul(&self, o: &Product) -> Product {
        let mut atoms: BTreeMap<Atom, i32> = self.atoms.iter().cloned().collect();
        for (a, p) in &o.atoms {
            *atoms.entry(a.clone()).or_insert(0) += p;
        }
        Product {
            mono: self.mono.mul(&o.mono),
            vpow: self.vpow + o.vpow,
            atoms: atoms.into_iter().filter(|(_, p)| *p != 0).collect(),
        }
    }

    fn factors(&self, nil: u16, latex: bool) -> Vec<String> {
        let mut f = if latex { mono_latex(&self.mono, nil) } else { mono_factors(&self.mono, nil) };
        f.extend(v_factor(self.vpow));
        for (a, p) in &self.atoms {
            if latex {
                let head = format!("\\{}", a.kind.name());
                let pw = if *p == 1 { String::new() } else { format!("^{{{p}}}") };
                f.push(format!("{head}{pw}({})", a.arg_latex(nil)));
            } else {
                let pw = match *p {
                    1 => String::new(),
                    p if p < 0 => format!("^({p})"),
                    p => format!("^{p}"),
                };
                f.push(format!("{}({}){pw}", a.kind.name(), a.arg_text(nil)));
            }
        }
        f
    }
}

/// Closed-form scalar: a canonical sum of products of Gaussian constants,
/// j-monomials, powers of `v` and hyperbolic atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    nvars: usize,
    nil: u16,
    terms: BTreeMap<Product, GaussianRational>,
}

impl ScalarExpr {
    pub fn zero(nvars: usize) -> Self {
        ScalarExpr { nvars, nil: 0, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut s = Self::zero(nvars);
        s.push(Product::one(nvars), c);
        s
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn int(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, GaussianRational::from_int(n))
    }

    pub fn i(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::i())
    }

    pub fn mono(m: JMonomial) -> Self {
        let mut s = Self::zero(m.len());
        s.push(Product { mono: m, vpow: 0, atoms: vec![] }, GaussianRational::one());
        s
    }

    pub fn v(nvars: usize) -> Self {
        let mut s = Self::zero(nvars);
        s.push(Product { mono: JMonomial::one(nvars), vpow: 1, atoms: vec![] }, GaussianRational::one());
        s
    }

    /// `f(c·J·v)`.
    pub fn trig(kind: Trig, c: GaussianRational, j: JMonomial) -> Self {
        let nvars = j.len();
        match canon_atom(kind, c, j) {
            Canon::Const(k) => Self::constant(nvars, k),
            Canon::Atom(a, neg) => {
                let mut s = Self::zero(nvars);
                let sign = if neg { GaussianRational::from_int(-1) } else { GaussianRational::one() };
                s.push(Product { mono: JMonomial::one(nvars), vpow: 0, atoms: vec![(a, 1)] }, sign);
                s
            }
        }
    }

    pub fn cosh(c: GaussianRational, j: JMonomial) -> Self {
        Self::trig(Trig::Cosh, c, j)
    }

    pub fn sinh(c: GaussianRational, j: JMonomial) -> Self {
        Self::trig(Trig::Sinh, c, j)
    }

    pub fn tanh(c: GaussianRational, j: JMonomial) -> Self {
        Self::trig(Trig::Tanh, c, j)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nil(&self) -> u16 {
        self.nil
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Product, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(p, c)| c.is_one() && *p == Product::one(self.nvars)).unwrap_or(false)
    }

    fn push(&mut self, p: Product, c: GaussianRational) {
        if c.is_zero() || nil_annihilates(&p.mono, self.nil) {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&p);
                }
            }
            None => {
                self.terms.insert(p, c);
            }
        }
    }

    pub fn add(&self, o: &ScalarExpr) -> ScalarExpr {
        let mut r = self.clone();
        r.nil |= o.nil;
        for (p, c) in &o.terms {
            r.push(p.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> ScalarExpr {
        ScalarExpr { terms: self.terms.iter().map(|(p, c)| (p.clone(), -c)).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &ScalarExpr) -> ScalarExpr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ScalarExpr) -> ScalarExpr {
        let mut r = ScalarExpr { nvars: self.nvars, nil: self.nil | o.nil, terms: BTreeMap::new() };
        for (p1, c1) in &self.terms {
            for (p2, c2) in &o.terms {
                r.push(p1.mul(p2), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &GaussianRational) -> ScalarExpr {
        let mut r = ScalarExpr { terms: BTreeMap::new(), ..self.clone() };
        for (p, k) in &self.terms {
            r.push(p.clone(), k * c);
        }
        r
    }

    /// Integer power; negative powers only for a single product built from
    /// constants, monomials and `cosh` atoms.
    pub fn pow(&self, e: i32) -> Result<ScalarExpr, ScalarError> {
        if e >= 0 {
            let mut acc = ScalarExpr { terms: BTreeMap::new(), ..self.clone() };
            acc.push(Product::one(self.nvars), GaussianRational::one());
            for _ in 0..e {
                acc = acc.mul(self);
            }
            return Ok(acc);
        }
        self.inv()?.pow(-e)
    }

    pub fn inv(&self) -> Result<ScalarExpr, ScalarError> {
        let bad = || ScalarError::IllFormedNegativePower(self.to_string());
        if self.terms.len() != 1 {
            return Err(bad());
        }
        let (p, c) = self.terms.iter().next().expect("one term");
        if p.vpow != 0 || p.atoms.iter().any(|(a, _)| a.kind != Trig::Cosh) {
            return Err(bad());
        }
        if (0..self.nvars).any(|k| self.nil & (1 << k) != 0 && p.mono.exp(k) != 0) {
            return Err(bad());
        }
        let q = Product {
            mono: p.mono.inv(),
            vpow: 0,
            atoms: p.atoms.iter().map(|(a, e)| (a.clone(), -e)).collect(),
        };
        let mut r = ScalarExpr { terms: BTreeMap::new(), ..self.clone() };
        r.push(q, c.inv().ok_or_else(bad)?);
        Ok(r)
    }

    pub fn div(&self, o: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Complex conjugation with `v` and the `j` treated as real.
    pub fn conj(&self) -> ScalarExpr {
        let mut r = ScalarExpr { terms: BTreeMap::new(), ..self.clone() };
        for (p, c) in &self.terms {
            let mut term = ScalarExpr { terms: BTreeMap::new(), ..self.clone() };
            term.push(Product { atoms: vec![], ..p.clone() }, c.conj());
            for (a, e) in &p.atoms {
                let conj_atom = ScalarExpr { nil: self.nil, ..Self::trig(a.kind, a.c.conj(), a.j) };
                let f = if *e >= 0 { conj_atom.pow(*e) } else { conj_atom.pow(*e) }.expect("cosh powers invert");
                term = term.mul(&f);
            }
            r = r.add(&term);
        }
        r
    }

    /// `(c, J)` when this expression is exactly `c·J·v`.
    pub fn as_trig_argument(&self) -> Option<(GaussianRational, JMonomial)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (p, c) = self.terms.iter().next()?;
        (p.vpow == 1 && p.atoms.is_empty()).then(|| (c.clone(), p.mono))
    }

    /// Monomials multiplying a sinh/tanh atom, the places where a nilpotent
    /// denominator would need compensation by `J`.
    pub fn odd_atom_monomials(&self) -> Vec<JMonomial> {
        self.terms
            .keys()
            .filter(|p| p.atoms.iter().any(|(a, e)| a.kind.is_odd() && *e > 0))
            .map(|p| p.mono)
            .collect()
    }

    /// Truncated series to `order`.
    pub fn expand(&self, order: usize) -> Result<VSeries, ScalarError> {
        let ctx = SeriesCtx { nvars: self.nvars, order, nil: self.nil };
        let mut cache: HashMap<Atom, VSeries> = HashMap::new();
        let mut out = VSeries::zero(ctx);
        for (p, c) in &self.terms {
            if p.vpow as usize > order {
                continue;
            }
            let mut t = VSeries::term(ctx, p.mono, c.clone(), p.vpow as usize);
            for (a, e) in &p.atoms {
                if *e < 0 && a.kind != Trig::Cosh {
                    return Err(ScalarError::IllFormedNegativePower(self.to_string()));
                }
                let s = cache.entry(a.clone()).or_insert_with(|| a.series(ctx)).clone();
                t = t.mul(&s.pow(*e)?);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Pimenov specialization in closed form: atoms whose argument becomes
    /// nilpotent collapse to first order before the monomials are
    /// specialized, so cancellations such as `sinh(ι v)/ι = v` happen.
    pub fn specialize(&self, a: &JAssignment) -> Result<ScalarExpr, UndefinedContraction> {
        let nilmask = a.nil_mask();
        let nvars = self.nvars;
        // collapse atoms, keeping raw exponents
        let mut stage: BTreeMap<Product, GaussianRational> = BTreeMap::new();
        for (p, c) in &self.terms {
            let mut coeff = c.clone();
            let mut prod = Product { mono: p.mono, vpow: p.vpow, atoms: vec![] };
            for (atom, e) in &p.atoms {
                let touches_nil = (0..nvars).any(|k| nilmask & (1 << k) != 0 && atom.j.exp(k) != 0);
                if touches_nil {
                    match atom.kind {
                        Trig::Cosh => {}
                        _ => {
                            prod.mono = prod.mono.mul(&atom.j.pow(*e));
                            prod.vpow += *e as u32;
                            coeff = &coeff * &atom.c.pow(*e as u32);
                        }
                    }
                    continue;
                }
                let (j2, k) = a.fold(&atom.j, &GaussianRational::one());
                match canon_atom(atom.kind, &atom.c * &k, j2) {
                    Canon::Const(k) => {
                        if k.is_zero() {
                            coeff = GaussianRational::zero();
                        } else {
                            coeff = &coeff * &k.pow(e.unsigned_abs());
                        }
                    }
                    Canon::Atom(at, neg) => {
                        if neg && e % 2 != 0 {
                            coeff = -coeff;
                        }
                        prod = prod.mul(&Product { mono: JMonomial::one(nvars), vpow: 0, atoms: vec![(at, *e)] });
                    }
                }
            }
            let (m, c2) = a.fold(&prod.mono, &coeff);
            prod.mono = m;
            add_into(&mut stage, prod, c2);
        }
        let mut out = ScalarExpr { nvars, nil: nilmask, terms: BTreeMap::new() };
        for (p, c) in stage {
            let keep = a.nil_check(&p.mono, &c).map_err(|mut e| {
                e.term = Self { nvars, nil: 0, terms: [(p.clone(), c.clone())].into_iter().collect() }.to_string();
                e
            })?;
            if keep {
                out.push(p, c);
            }
        }
        Ok(out)
    }

    fn signed(&self, latex: bool) -> Vec<(bool, String)> {
        self.terms
            .iter()
            .map(|(p, c)| {
                let f = p.factors(self.nil, latex);
                if latex {
                    latex_term(c, f)
                } else {
                    text_term(c, f)
                }
            })
            .collect()
    }

    pub fn to_latex(&self) -> String {
        join_signed(self.signed(true))
    }

    /// Rendering used as a coefficient in front of a word.
    pub fn coeff_text(&self) -> (bool, String) {
        let t = self.signed(false);
        if t.len() == 1 {
            t.into_iter().next().expect("one")
        } else {
            (false, paren_if_sum(&join_signed(t)))
        }
    }

    pub fn coeff_latex(&self) -> (bool, String) {
        let t = self.signed(true);
        if t.len() == 1 {
            t.into_iter().next().expect("one")
        } else {
            (false, format!("\\left({}\\right)", join_signed(t)))
        }
    }

    /// Drops everything but the polynomial-in-`v` part when no atoms are
    /// present; used to render contracted coefficients.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|p| p.atoms.is_empty())
    }

    pub fn to_jpoly_at_v0(&self) -> JPolynomial {
        let mut r = JPolynomial::zero(self.nvars);
        for (p, c) in &self.terms {
            if p.vpow == 0 {
                r.add_term(p.mono, c);
            }
        }
        r
    }
}

fn add_into(map: &mut BTreeMap<Product, GaussianRational>, p: Product, c: GaussianRational) {
    if c.is_zero() {
        return;
    }
    let remove = match map.get_mut(&p) {
        Some(v) => {
            *v += &c;
            v.is_zero()
        }
        None => {
            map.insert(p, c);
            return;
        }
    };
    if remove {
        map.remove(&p);
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join_signed(self.signed(false)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn cosh_taylor() {
        let e = ScalarExpr::cosh(g(1, 1), JMonomial::from_exps(&[1, 1]));
        assert_eq!(e.expand(4).unwrap().to_string(), "1 + j1^2*j2^2*v^2/2 + j1^4*j2^4*v^4/24");
    }

    #[test]
    fn sinh_half_argument() {
        let e = ScalarExpr::sinh(g(1, 2), JMonomial::from_exps(&[1]));
        assert_eq!(e.expand(3).unwrap().to_string(), "j1*v/2 + j1^3*v^3/48");
    }

    #[test]
    fn tanh_taylor() {
        let e = ScalarExpr::tanh(g(1, 1), JMonomial::from_exps(&[1]));
        assert_eq!(e.expand(3).unwrap().to_string(), "j1*v - j1^3*v^3/3");
    }

    #[test]
    fn odd_atoms_absorb_sign() {
        let j = JMonomial::from_exps(&[1]);
        assert_eq!(ScalarExpr::sinh(g(-1, 2), j), ScalarExpr::sinh(g(1, 2), j).neg());
        assert_eq!(ScalarExpr::cosh(g(-1, 2), j), ScalarExpr::cosh(g(1, 2), j));
        assert!(ScalarExpr::sinh(g(0, 1), j).is_zero());
    }

    #[test]
    fn sinh_over_argument_contracts_to_v() {
        let j = JMonomial::from_exps(&[1, 1]);
        let e = ScalarExpr::sinh(g(1, 1), j).mul(&ScalarExpr::mono(j.inv()));
        let a = JAssignment::parse("iota,1").unwrap();
        assert_eq!(e.specialize(&a).unwrap(), ScalarExpr::v(2).specialize(&a).unwrap());
    }

    #[test]
    fn bare_inverse_nilpotent_is_undefined() {
        let e = ScalarExpr::mono(JMonomial::from_exps(&[-1, 0]));
        let a = JAssignment::parse("iota,1").unwrap();
        assert!(e.specialize(&a).is_err());
    }

    #[test]
    fn imaginary_parameter() {
        let e = ScalarExpr::mono(JMonomial::from_exps(&[2])).mul(&ScalarExpr::v(1).pow(2).unwrap());
        let s = e.specialize(&JAssignment::parse("i").unwrap()).unwrap();
        assert_eq!(s.to_string(), "-v^2");
    }

    #[test]
    fn negative_power_only_for_cosh() {
        let j = JMonomial::from_exps(&[1]);
        assert!(ScalarExpr::cosh(g(1, 1), j).pow(-2).is_ok());
        assert!(ScalarExpr::sinh(g(1, 1), j).pow(-1).is_err());
        let e = ScalarExpr::cosh(g(1, 1), j).pow(-1).unwrap();
        let prod = e.expand(6).unwrap().mul(&ScalarExpr::cosh(g(1, 1), j).expand(6).unwrap());
        assert_eq!(prod, VSeries::one(SeriesCtx::new(1, 6)));
    }

    #[test]
    fn rendering() {
        let j = JMonomial::from_exps(&[1, 1]);
        let e = ScalarExpr::sinh(g(1, 2), j).scale(&GaussianRational::i()).mul(&ScalarExpr::cosh(g(1, 1), j).pow(-2).unwrap());
        assert_eq!(e.to_string(), "i*cosh(j1*j2*v)^(-2)*sinh(j1*j2*v/2)");
    }
}
