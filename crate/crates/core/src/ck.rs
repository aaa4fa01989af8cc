//! Cayley-Klein scaffolding: `(i,k)` products, the ρ-vector and the
//! matrices `C₀`, `D`, `V_σ`, `D_σ`, `ψ` and `C_σ(j)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::perm::SigmaPermutation;
use crate::scalar::{GaussianRational, JMonomial, ScalarExpr};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CkError {
    #[error("index out of range: ({0},{1}) for N={2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
}

/// `(i,k) = j_{min} ⋯ j_{max−1}`, with `(k,k) = 1`.
pub fn ck_product(i: usize, k: usize, n: usize) -> Result<JMonomial, CkError> {
    if i == 0 || k == 0 || i > n || k > n {
        return Err(CkError::IndexOutOfRange(i, k, n));
    }
    let mut m = JMonomial::one(n - 1);
    for l in i.min(k)..i.max(k) {
        m.set_exp(l - 1, 1);
    }
    Ok(m)
}

/// `(1, σ_p)`, the Cartesian weight of position `p`.
pub fn weight(sigma: &SigmaPermutation, p: usize) -> JMonomial {
    ck_product(1, sigma.at(p), sigma.n()).expect("valid position")
}

/// The ρ-vector.
pub fn rho(n: usize) -> Result<Vec<BigRational>, CkError> {
    if n < 2 {
        return Err(CkError::Dimension(n));
    }
    let half = n / 2;
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let mut out = Vec::with_capacity(n);
    if n % 2 == 1 {
        for k in 0..half {
            out.push(r(2 * (half - k) as i64 - 1, 2));
        }
        out.push(BigRational::zero());
        for k in 0..half {
            out.push(r(-(2 * k as i64 + 1), 2));
        }
    } else {
        for k in 0..half {
            out.push(r((half - 1 - k) as i64, 1));
        }
        for k in 0..half {
            out.push(r(-(k as i64), 1));
        }
    }
    Ok(out)
}

/// `a + b·s` with `s² = 1/2`; exact home of `1/√2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExtendedScalar {
    pub a: GaussianRational,
    pub b: GaussianRational,
}

impl ExtendedScalar {
    pub fn new(a: GaussianRational, b: GaussianRational) -> Self {
        ExtendedScalar { a, b }
    }

    pub fn of(a: GaussianRational) -> Self {
        Self::new(a, GaussianRational::zero())
    }

    /// `c/√2`.
    pub fn over_sqrt2(c: GaussianRational) -> Self {
        Self::new(GaussianRational::zero(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The value as a Gaussian rational when the `s` part vanishes.
    pub fn as_gaussian(&self) -> Option<&GaussianRational> {
        self.b.is_zero().then_some(&self.a)
    }
}

impl fmt::Display for ExtendedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*s", self.b),
            (false, false) => write!(f, "{} + {}*s", self.a, self.b),
        }
    }
}

/// Entry types usable in [`Matrix`] products.
pub trait MatEntry: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn latex(&self) -> String;
    fn text(&self) -> String;
}

impl MatEntry for ExtendedScalar {
    fn zero_like(&self) -> Self {
        ExtendedScalar::default()
    }
    fn add(&self, o: &Self) -> Self {
        ExtendedScalar::new(&self.a + &o.a, &self.b + &o.b)
    }
    fn mul(&self, o: &Self) -> Self {
        let half = GaussianRational::from_ratio(1, 2);
        ExtendedScalar::new(
            &(&self.a * &o.a) + &(&(&self.b * &o.b) * &half),
            &(&self.a * &o.b) + &(&self.b * &o.a),
        )
    }
    fn is_zero(&self) -> bool {
        ExtendedScalar::is_zero(self)
    }
    fn latex(&self) -> String {
        let a = self.a.to_string();
        let b = self.b.to_string();
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => a,
            (true, false) => format!("\\frac{{{b}}}{{\\sqrt{{2}}}}"),
            (false, false) => format!("{a} + \\frac{{{b}}}{{\\sqrt{{2}}}}"),
        }
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl MatEntry for ScalarExpr {
    fn zero_like(&self) -> Self {
        ScalarExpr::zero(self.nvars())
    }
    fn add(&self, o: &Self) -> Self {
        ScalarExpr::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarExpr::mul(self, o)
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
    fn latex(&self) -> String {
        self.to_latex()
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

/// Dense square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    pub rows: Vec<Vec<T>>,
}

impl<T: MatEntry> Matrix<T> {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        Matrix { rows: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.rows[j][i].clone())
    }

    pub fn mul(&self, o: &Matrix<T>) -> Matrix<T> {
        let n = self.dim();
        Self::from_fn(n, |i, j| {
            let mut acc = self.rows[0][0].zero_like();
            for k in 0..n {
                acc = acc.add(&self.rows[i][k].mul(&o.rows[k][j]));
            }
            acc
        })
    }

    pub fn to_latex(&self) -> String {
        let n = self.dim();
        let body: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|x| x.latex()).collect::<Vec<_>>().join(" & ")).collect();
        format!("\\left(\\begin{{array}}{{{}}}\n{}\n\\end{{array}}\\right)", "c".repeat(n), body.join(" \\\\\n"))
    }

    /// Row-major JSON of text renderings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.rows
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(|x| serde_json::Value::String(x.text())).collect()))
                .collect(),
        )
    }
}

fn es(re: i64, im: i64, over_sqrt2: bool) -> ExtendedScalar {
    let c = GaussianRational::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()));
    if over_sqrt2 {
        ExtendedScalar::over_sqrt2(c)
    } else {
        ExtendedScalar::of(c)
    }
}

/// `(C₀)_{ij} = δ_{i′j}`.
pub fn c0(n: usize) -> Matrix<ExtendedScalar> {
    Matrix::from_fn(n, |i, j| es((j == n - 1 - i) as i64, 0, false))
}

pub fn identity(n: usize) -> Matrix<ExtendedScalar> {
    Matrix::from_fn(n, |i, j| es((i == j) as i64, 0, false))
}

/// The odd-dimensional block matrix; for even `N` the middle row and
/// column are filtered out.
pub fn d_matrix(n: usize) -> Matrix<ExtendedScalar> {
    let h = n / 2;
    let big = 2 * h + 1;
    let entry = |i: usize, j: usize| -> ExtendedScalar {
        let (top, mid, bot) = (i < h, i == h, i > h);
        let (left, centre, right) = (j < h, j == h, j > h);
        let anti = i + j == big - 1;
        if mid || centre {
            return es((mid && centre) as i64, 0, false);
        }
        match (top, bot, left, right) {
            (true, _, true, _) => es((i == j) as i64, 0, true),
            (true, _, _, true) => es(0, -(anti as i64), true),
            (_, true, true, _) => es(anti as i64, 0, true),
            (_, true, _, true) => es(0, (i == j) as i64, true),
            _ => es(0, 0, false),
        }
    };
    let keep: Vec<usize> = (0..big).filter(|&k| n % 2 == 1 || k != h).collect();
    Matrix::from_fn(n, |i, j| entry(keep[i], keep[j]))
}

/// `(V_σ)_{ik} = δ_{σ_i,k}`.
pub fn v_sigma(sigma: &SigmaPermutation) -> Matrix<ExtendedScalar> {
    Matrix::from_fn(sigma.n(), |i, k| es((sigma.image()[i] == k + 1) as i64, 0, false))
}

pub fn d_sigma(sigma: &SigmaPermutation) -> Matrix<ExtendedScalar> {
    d_matrix(sigma.n()).mul(&v_sigma(sigma))
}

/// `Dᵗ C₀ D = I` for an arbitrary candidate `D`.
pub fn is_orthogonal(d: &Matrix<ExtendedScalar>) -> bool {
    d.transpose().mul(&c0(d.dim())).mul(d) == identity(d.dim())
}

pub fn check_orthogonality(sigma: &SigmaPermutation) -> bool {
    is_orthogonal(&d_sigma(sigma))
}

/// `ψ = diag(1, (1,2), …, (1,N))` as monomials.
pub fn psi(n: usize) -> Vec<JMonomial> {
    (1..=n).map(|k| ck_product(1, k, n).expect("in range")).collect()
}

/// `C_σ(j) = ψ V_σᵗ Dᵗ C D V_σ ψ` with `q^{ρ} = cosh(ρJv) + sinh(ρJv)`.
pub fn build_c_sigma(sigma: &SigmaPermutation, multiplier: &JMonomial) -> Matrix<ScalarExpr> {
    let n = sigma.n();
    let ds = d_sigma(sigma);
    let rho = rho(n).expect("n ≥ 2");
    let ps = psi(n);
    let nv = n - 1;
    let mut entries = vec![vec![ScalarExpr::zero(nv); n]; n];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            // Σ_k (D_σ)_{ki} q^{ρ_{k'}} (D_σ)_{k'j}
            let mut by_rho: BTreeMap<BigRational, ExtendedScalar> = BTreeMap::new();
            for k in 0..n {
                let kp = n - 1 - k;
                let t = MatEntry::mul(ds.get(k, i), ds.get(kp, j));
                let e = by_rho.entry(rho[kp].clone()).or_default();
                *e = MatEntry::add(e, &t);
            }
            let mut acc = ScalarExpr::zero(nv);
            for (r, c) in by_rho {
                let g = c.as_gaussian().expect("s-part cancels").clone();
                if g.is_zero() {
                    continue;
                }
                let q = if r.is_zero() {
                    ScalarExpr::one(nv)
                } else {
                    let rr = GaussianRational::real(r);
                    ScalarExpr::cosh(rr.clone(), *multiplier).add(&ScalarExpr::sinh(rr, *multiplier))
                };
                acc = acc.add(&q.scale(&g));
            }
            *slot = acc.mul(&ScalarExpr::mono(ps[i].mul(&ps[j])));
        }
    }
    Matrix { rows: entries }
}

/// Diagonal of `C_σ(j)` read in σ-position order: entry `p` belongs to
/// `ξ_{σ_p}`.
pub fn diagonal_in_sigma_order(c: &Matrix<ScalarExpr>, sigma: &SigmaPermutation) -> Vec<ScalarExpr> {
    (1..=sigma.n()).map(|p| c.get(sigma.at(p) - 1, sigma.at(p) - 1).clone()).collect()
}

/// Sets every `v` to zero: atoms become `cosh → 1`, `sinh, tanh → 0`.
pub fn at_v_zero(e: &ScalarExpr) -> ScalarExpr {
    let mut acc = ScalarExpr::zero(e.nvars());
    for (p, c) in e.terms() {
        if p.vpow > 0 || p.atoms.iter().any(|(a, pw)| a.kind != crate::scalar::Trig::Cosh && *pw > 0) {
            continue;
        }
        acc = acc.add(&ScalarExpr::mono(p.mono).scale(c));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        assert!(ck_product(2, 2, 3).unwrap().is_one());
        assert_eq!(ck_product(1, 3, 3).unwrap(), JMonomial::from_exps(&[1, 1]));
        assert_eq!(ck_product(4, 2, 4).unwrap(), JMonomial::from_exps(&[0, 1, 1]));
        assert!(ck_product(0, 2, 3).is_err());
        assert!(ck_product(1, 4, 3).is_err());
    }

    #[test]
    fn rho_vectors() {
        let show = |n| rho(n).unwrap().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(show(3), "1/2,0,-1/2");
        assert_eq!(show(4), "1,0,0,-1");
        assert_eq!(show(5), "3/2,1/2,0,-1/2,-3/2");
        assert_eq!(show(2), "0,0");
    }

    #[test]
    fn d_is_orthogonal() {
        for n in 2..=5 {
            for s in SigmaPermutation::all(n) {
                assert!(check_orthogonality(&s), "{s}");
            }
        }
    }

    #[test]
    fn flipped_sign_breaks_orthogonality() {
        let mut d = d_matrix(3);
        d.rows[0][2] = ExtendedScalar::over_sqrt2(GaussianRational::i());
        assert!(!is_orthogonal(&d));
    }

    #[test]
    fn v_sigma_rows() {
        let v = v_sigma(&"2,1,3".parse().unwrap());
        assert_eq!(v, Matrix::from_fn(3, |i, k| es(([1, 0, 2][i] == k) as i64, 0, false)));
    }

    #[test]
    fn c_sigma_at_v_zero_is_psi_squared() {
        let s: SigmaPermutation = "2,1,3".parse().unwrap();
        let j = JMonomial::from_exps(&[2, 1]);
        let c = build_c_sigma(&s, &j);
        let diag: Vec<String> = diagonal_in_sigma_order(&c, &s).iter().map(|e| at_v_zero(e).to_string()).collect();
        assert_eq!(diag, ["j1^2", "1", "j1^2*j2^2"]);
        for i in 0..3 {
            for k in 0..3 {
                if i != k {
                    assert!(at_v_zero(c.get(i, k)).is_zero());
                }
            }
        }
    }
}
