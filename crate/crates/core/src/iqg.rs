//! Expressions in the generators `B_i`, `k̃_i^{±1}` of `Ũ^ı`, their
//! evaluation into `Ũ`, and the families of identities built from them.

use std::fmt;

use crate::cartan::CartanDatum;
use crate::coeff::Coefficients;
use crate::error::{Error, Result};
use crate::ncalg::{Letter, NCPoly, Word};
use crate::scalars::{pochhammer, qfact, qint, Scalar};
use crate::udouble::{TriState, UElement, UEngine, ULetter};

/// Generators of `Ũ^ı`, ordered `B < k`, then by index (`k_i` before `k_i^{-1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ILetter {
    B(u8),
    /// `k̃_i^{±1}`; the flag is true for the inverse.
    K(u8, bool),
}

impl Letter for ILetter {
    fn inverse(&self) -> Option<Self> {
        match *self {
            ILetter::K(i, inv) => Some(ILetter::K(i, !inv)),
            ILetter::B(_) => None,
        }
    }
}

impl fmt::Display for ILetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ILetter::B(i) => write!(f, "B{}", i + 1),
            ILetter::K(i, false) => write!(f, "k{}", i + 1),
            ILetter::K(i, true) => write!(f, "k{}^-1", i + 1),
        }
    }
}

pub type IExpr = NCPoly<ILetter>;

/// Which exponent the higher-order Serre family uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum YgenVariant {
    /// `e r (-c_ij - m + 1)`.
    Literal,
    /// `e r (-n c_ij - m + 1)`.
    NCorrected,
}

impl YgenVariant {
    pub fn name(self) -> &'static str {
        match self {
            YgenVariant::Literal => "literal",
            YgenVariant::NCorrected => "n_corrected",
        }
    }
}

pub fn b(i: usize) -> IExpr {
    NCPoly::letter(ILetter::B(i as u8))
}

pub fn k(i: usize) -> IExpr {
    NCPoly::letter(ILetter::K(i as u8, false))
}

pub fn kinv(i: usize) -> IExpr {
    NCPoly::letter(ILetter::K(i as u8, true))
}

/// `k_i^p` for any integer `p`.
pub fn kpow(i: usize, p: i64) -> IExpr {
    let l = ILetter::K(i as u8, p < 0);
    NCPoly::term(Scalar::one(), Word::from_letters(std::iter::repeat_n(l, p.unsigned_abs() as usize)))
}

pub fn scalar(c: Scalar) -> IExpr {
    NCPoly::constant(c)
}

/// `q_i^k` as a scalar.
pub fn qi(datum: &CartanDatum, i: usize, k: i64) -> Scalar {
    Scalar::q_pow(datum.eps(i) * k)
}

fn d_i(datum: &CartanDatum, i: usize) -> Scalar {
    &qi(datum, i, 1) - &qi(datum, i, -1)
}

fn d_pow(datum: &CartanDatum, i: usize, k: i64) -> Scalar {
    d_i(datum, i).pow(k).expect("q_i - q_i^{-1} is nonzero")
}

fn sign(k: i64) -> Scalar {
    Scalar::from_int(if k.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn div(a: &Scalar, b: &Scalar) -> Scalar {
    (a / b).expect("nonzero divisor")
}

/// `B_i^{(m)} = B_i^m / [m]_{q_i}^!`; zero for `m < 0`.
pub fn divided_power(datum: &CartanDatum, i: usize, m: i64) -> IExpr {
    if m < 0 {
        return IExpr::zero();
    }
    let f = qfact(m, datum.eps(i)).expect("m >= 0");
    b(i).pow(m as usize).scale(&f.inv().expect("nonzero factorial"))
}

/// The ıdivided power `B_{i,p}^{(m)}` for `τi = i`.
pub fn idivided_power(datum: &CartanDatum, i: usize, m: i64, parity: u8) -> Result<IExpr> {
    if datum.tau(i) != i {
        return Err(Error::InvalidParameter(format!("ıdivided powers need τi = i (i = {})", i + 1)));
    }
    if m < 0 {
        return Ok(IExpr::zero());
    }
    let e = datum.eps(i);
    let bb = b(i).mul(&b(i));
    let factor = |n: i64| bb.sub(&k(i).scale(&(&qi(datum, i, 1) * &(&qint(n, e) * &qint(n, e)))));
    let kk = m / 2;
    let mut acc = if m % 2 == 1 { b(i) } else { IExpr::one() };
    for j in 1..=kk {
        let n = match (parity % 2, m % 2) {
            (1, _) => 2 * j - 1,
            (0, 1) => 2 * j,
            _ => 2 * j - 2,
        };
        acc = acc.mul(&factor(n));
    }
    Ok(acc.scale(&qfact(m, e).unwrap().inv().unwrap()))
}

/// The anti-involution `σ`: reverses words, `k_i -> k_{τi}`.
pub fn sigma(datum: &CartanDatum, x: &IExpr) -> IExpr {
    x.reverse()
        .substitute(
            |l| {
                Some(NCPoly::letter(match *l {
                    ILetter::B(i) => ILetter::B(i),
                    ILetter::K(i, inv) => ILetter::K(datum.tau(i as usize) as u8, inv),
                }))
            },
            false,
        )
        .expect("total map")
}

/// The bar involution `ψ_ı`: semilinear, `B_i` fixed, `k_i -> q_i^{c_{i,τi}} k_{τi}`.
pub fn psi(datum: &CartanDatum, x: &IExpr) -> IExpr {
    x.substitute(
        |l| {
            Some(match *l {
                ILetter::B(i) => b(i as usize),
                ILetter::K(i, inv) => {
                    let i = i as usize;
                    let t = datum.tau(i);
                    let c = datum.c(i, t);
                    let l = NCPoly::letter(ILetter::K(t as u8, inv));
                    l.scale(&qi(datum, i, if inv { -c } else { c }))
                }
            })
        },
        true,
    )
    .expect("total map")
}

fn require_orbit_pair(datum: &CartanDatum, i: usize) -> Result<()> {
    if i >= datum.rank() {
        return Err(Error::IndexOutOfRange(i + 1));
    }
    if datum.tau(i) == i {
        return Err(Error::InvalidParameter(format!("requires τi ≠ i (i = {})", i + 1)));
    }
    Ok(())
}

/// `Σ_{r+s=m} (-1)^{r+c} q_i^{x r} B_i^{(r)} B_{τi} B_i^{(s)}` with `x` given.
fn serre_sum(datum: &CartanDatum, i: usize, m: i64, x: i64) -> IExpr {
    let t = datum.tau(i);
    let c = datum.c(i, t);
    let mut acc = IExpr::zero();
    for r in 0..=m {
        let coef = &sign(r + c) * &qi(datum, i, x * r);
        let term = divided_power(datum, i, r).mul(&b(t)).mul(&divided_power(datum, i, m - r));
        acc = acc.add(&term.scale(&coef));
    }
    acc
}

/// How `∏_{j=0}^{N} f(j)` is read when `N < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProductConvention {
    /// Every such product is 1.
    Literal,
    /// `∏_{j=0}^{N} f(j) = ∏_{j=N+1}^{-1} f(j)^{-1}`, so that
    /// `∏_{j=0}^{N+1} f(j) = f(N+1) ∏_{j=0}^{N} f(j)` for every `N`.
    Extended,
}

impl ProductConvention {
    pub fn name(self) -> &'static str {
        match self {
            ProductConvention::Literal => "literal",
            ProductConvention::Extended => "extended",
        }
    }
}

/// `∏_{j=0}^{c+m-2} (-q_i^{e(2j-c-2m+2)} + q_i^{base})`.
pub fn messy_product(datum: &CartanDatum, i: usize, m: i64, e: i64, base: i64, conv: ProductConvention) -> Result<Scalar> {
    let c = datum.c(i, datum.tau(i));
    let f = |j: i64| &qi(datum, i, base) - &qi(datum, i, e * (2 * j - c - 2 * m + 2));
    let mut acc = Scalar::one();
    for j in 0..=(c + m - 2) {
        acc = &acc * &f(j);
    }
    if conv == ProductConvention::Extended {
        for j in (c + m - 1)..0 {
            acc = (&acc / &f(j))?;
        }
    }
    Ok(acc)
}

/// `ỹ_{i,τi;1,m,e}` with empty products read as 1.
pub fn ytilde(datum: &CartanDatum, i: usize, m: i64, e: i64) -> Result<IExpr> {
    ytilde_with(datum, i, m, e, ProductConvention::Literal)
}

/// `ỹ_{i,τi;1,m,e}` under the given product convention; both agree for `m ≥ 1 - c_{i,τi}`.
pub fn ytilde_with(datum: &CartanDatum, i: usize, m: i64, e: i64, conv: ProductConvention) -> Result<IExpr> {
    require_orbit_pair(datum, i)?;
    if m < 1 {
        return Err(Error::InvalidParameter("m = 0 is ill-defined".to_string()));
    }
    if e != 1 && e != -1 {
        return Err(Error::InvalidParameter(format!("e must be ±1, got {e}")));
    }
    let t = datum.tau(i);
    let c = datum.c(i, t);
    let eps = datum.eps(i);
    let main = serre_sum(datum, i, m, e * (1 - c - m));
    let pre = div(&(&qfact(1 - c, eps).unwrap() * &d_pow(datum, i, -c - 1)), &qint(m, eps));
    let p1 = &messy_product(datum, i, m, e, c - 2, conv)? * &qi(datum, i, (-c * c + 3 * c) / 2);
    let p2 = &(&sign(c) * &messy_product(datum, i, m, e, 2 - c, conv)?) * &qi(datum, i, (c * c - c) / 2);
    let bm1 = divided_power(datum, i, m - 1);
    let corr = bm1.mul(&k(i)).scale(&p1).sub(&bm1.mul(&k(t)).scale(&p2));
    Ok(main.sub(&corr.scale(&pre)))
}

/// `ỹ'_{i,τi;1,m,e} = σ(ỹ_{i,τi;1,m,e})`.
pub fn ytilde_prime(datum: &CartanDatum, i: usize, m: i64, e: i64) -> Result<IExpr> {
    ytilde_prime_with(datum, i, m, e, ProductConvention::Literal)
}

pub fn ytilde_prime_with(datum: &CartanDatum, i: usize, m: i64, e: i64, conv: ProductConvention) -> Result<IExpr> {
    Ok(sigma(datum, &ytilde_with(datum, i, m, e, conv)?))
}

/// `ỹ_{i,j;n,m,e}` for pairwise distinct `i, τi, j`.
pub fn ygen(datum: &CartanDatum, i: usize, j: usize, n: i64, m: i64, e: i64, variant: YgenVariant) -> Result<IExpr> {
    if i >= datum.rank() || j >= datum.rank() {
        return Err(Error::IndexOutOfRange(i.max(j) + 1));
    }
    let t = datum.tau(i);
    if i == t || i == j || j == t {
        return Err(Error::InvalidParameter("i, τi, j must be pairwise distinct".to_string()));
    }
    if n < 1 || m < 0 {
        return Err(Error::InvalidParameter("need n ≥ 1 and m ≥ 0".to_string()));
    }
    let c = datum.c(i, j);
    let x = match variant {
        YgenVariant::Literal => -c - m + 1,
        YgenVariant::NCorrected => -n * c - m + 1,
    };
    let bj = divided_power(datum, j, n);
    let mut acc = IExpr::zero();
    for r in 0..=m {
        let coef = &sign(r) * &qi(datum, i, e * r * x);
        acc = acc.add(&divided_power(datum, i, r).mul(&bj).mul(&divided_power(datum, i, m - r)).scale(&coef));
    }
    Ok(acc)
}

/// LHS − RHS of the recursion `-q_i^{-e(2m+c)} B_i ỹ_m + ỹ_m B_i = [m+1]_i ỹ_{m+1}`.
pub fn recursion_rr1(datum: &CartanDatum, i: usize, m: i64, e: i64, conv: ProductConvention) -> Result<IExpr> {
    let c = datum.c(i, datum.tau(i));
    let y = ytilde_with(datum, i, m, e, conv)?;
    let y1 = ytilde_with(datum, i, m + 1, e, conv)?;
    let lhs = y.mul(&b(i)).sub(&b(i).mul(&y).scale(&qi(datum, i, -e * (2 * m + c))));
    Ok(lhs.sub(&y1.scale(&qint(m + 1, datum.eps(i)))))
}

/// The σ-mirrored recursion for `ỹ'`.
pub fn recursion_rr2(datum: &CartanDatum, i: usize, m: i64, e: i64, conv: ProductConvention) -> Result<IExpr> {
    let c = datum.c(i, datum.tau(i));
    let y = ytilde_prime_with(datum, i, m, e, conv)?;
    let y1 = ytilde_prime_with(datum, i, m + 1, e, conv)?;
    let lhs = b(i).mul(&y).sub(&y.mul(&b(i)).scale(&qi(datum, i, -e * (2 * m + c))));
    Ok(lhs.sub(&y1.scale(&qint(m + 1, datum.eps(i)))))
}

/// The recursion for `ỹ_{i,j;n,m,e}` with coefficient `-q_i^{-e(2m + n c_ij)}`.
pub fn ygen_recursion(datum: &CartanDatum, i: usize, j: usize, n: i64, m: i64, e: i64, variant: YgenVariant) -> Result<IExpr> {
    let c = datum.c(i, j);
    let y = ygen(datum, i, j, n, m, e, variant)?;
    let y1 = ygen(datum, i, j, n, m + 1, e, variant)?;
    let lhs = y.mul(&b(i)).sub(&b(i).mul(&y).scale(&qi(datum, i, -e * (2 * m + n * c))));
    Ok(lhs.sub(&y1.scale(&qint(m + 1, datum.eps(i)))))
}

/// LHS − RHS of the `e = +1` closed form, valid for `m > 1 - c_{i,τi}`.
pub fn hosii1(datum: &CartanDatum, i: usize, m: i64) -> Result<IExpr> {
    require_orbit_pair(datum, i)?;
    let t = datum.tau(i);
    let c = datum.c(i, t);
    let eps = datum.eps(i);
    let lhs = serre_sum(datum, i, m, 1 - c - m);
    let coef = &(&(&sign(1 - c) * &qfact(m - 1, eps)?) * &d_pow(datum, i, m - 2)) * &qi(datum, i, (1 - m) * (m - 2 + 2 * c) / 2);
    let rhs = divided_power(datum, i, m - 1).mul(&k(t)).scale(&coef);
    Ok(lhs.sub(&rhs))
}

/// LHS − RHS of the `e = -1` closed form, valid for `m > 1 - c_{i,τi}`.
pub fn hosii2(datum: &CartanDatum, i: usize, m: i64) -> Result<IExpr> {
    require_orbit_pair(datum, i)?;
    let t = datum.tau(i);
    let c = datum.c(i, t);
    let eps = datum.eps(i);
    let lhs = serre_sum(datum, i, m, -(1 - c - m));
    let coef = &(&(&sign(m + c + 1) * &qfact(m - 1, eps)?) * &d_pow(datum, i, m - 2)) * &qi(datum, i, (m - 1) * (m - 2 + 2 * c) / 2 + c);
    let rhs = divided_power(datum, i, m - 1).mul(&k(i)).scale(&coef);
    Ok(lhs.sub(&rhs))
}

/// Left side shared by the BKL relation and its rewritten form.
pub fn bkl_lhs(datum: &CartanDatum, i: usize) -> IExpr {
    let c = datum.c(i, datum.tau(i));
    serre_sum(datum, i, 1 - c, 0)
}

/// Right side of the BKL relation, with q-Pochhammer coefficients.
pub fn bkl_rhs_pochhammer(datum: &CartanDatum, i: usize) -> IExpr {
    let t = datum.tau(i);
    let c = datum.c(i, t);
    let n = -c;
    let p_minus = pochhammer(&qi(datum, i, -2), &qi(datum, i, -2), n).expect("n >= 0");
    let p_plus = pochhammer(&qi(datum, i, 2), &qi(datum, i, 2), n).expect("n >= 0");
    let bn = divided_power(datum, i, n);
    let inner = bn.mul(&k(i)).scale(&(&qi(datum, i, c) * &p_minus)).sub(&bn.mul(&k(t)).scale(&p_plus));
    inner.scale(&d_pow(datum, i, -1))
}

/// Right side of the BKL relation with the Pochhammer symbols expanded.
pub fn bkl_rhs_rewritten(datum: &CartanDatum, i: usize) -> IExpr {
    let t = datum.tau(i);
    let c = datum.c(i, t);
    let eps = datum.eps(i);
    let pre = &qfact(-c, eps).unwrap() * &d_pow(datum, i, -c - 1);
    let bn = divided_power(datum, i, -c);
    let a = qi(datum, i, (-c * c + 3 * c) / 2);
    let bcoef = &sign(c) * &qi(datum, i, (c * c - c) / 2);
    bn.mul(&k(i)).scale(&a).sub(&bn.mul(&k(t)).scale(&bcoef)).scale(&pre)
}

/// `B_{τi}^{(N)} B_i^{(M)}` minus its rank-one expansion (requires `c_{i,τi} = 0`).
pub fn bb1(datum: &CartanDatum, i: usize, nn: i64, mm: i64) -> Result<IExpr> {
    require_commuting_pair(datum, i)?;
    Ok(bb_expansion(datum, i, datum.tau(i), i, nn, mm))
}

/// `B_i^{(N)} B_{τi}^{(M)}` minus its rank-one expansion (requires `c_{i,τi} = 0`).
pub fn bb2(datum: &CartanDatum, i: usize, nn: i64, mm: i64) -> Result<IExpr> {
    require_commuting_pair(datum, i)?;
    Ok(bb_expansion(datum, i, i, datum.tau(i), nn, mm))
}

fn require_commuting_pair(datum: &CartanDatum, i: usize) -> Result<()> {
    require_orbit_pair(datum, i)?;
    if datum.c(i, datum.tau(i)) != 0 {
        return Err(Error::InvalidParameter("requires c_{i,τi} = 0".to_string()));
    }
    Ok(())
}

/// `B_a^{(N)} B_b^{(M)} - Σ_t B_b^{(M-t)} ∏_s (q_i^{x} k_b - q_i^{-x} k_a)/(q_i^s - q_i^{-s}) B_a^{(N-t)}`
/// with `x = 2t - N - M - s + 1`.
fn bb_expansion(datum: &CartanDatum, i: usize, a: usize, bidx: usize, nn: i64, mm: i64) -> IExpr {
    let lhs = divided_power(datum, a, nn).mul(&divided_power(datum, bidx, mm));
    let mut rhs = IExpr::zero();
    for t in 0..=nn.min(mm) {
        let mut prod = IExpr::one();
        for s in 1..=t {
            let x = 2 * t - nn - mm - s + 1;
            let num = k(bidx).scale(&qi(datum, i, x)).sub(&k(a).scale(&qi(datum, i, -x)));
            let den = &qi(datum, i, s) - &qi(datum, i, -s);
            prod = prod.mul(&num.scale(&den.inv().unwrap()));
        }
        rhs = rhs.add(&divided_power(datum, bidx, mm - t).mul(&prod).mul(&divided_power(datum, a, nn - t)));
    }
    lhs.sub(&rhs)
}

/// Labelled defining relations (LHS − RHS) applicable to the datum.
pub fn relation_set(datum: &CartanDatum) -> Vec<(String, IExpr)> {
    let n = datum.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for l in i + 1..n {
            out.push((format!("relation1:kk(i={},l={})", i + 1, l + 1), k(i).mul(&k(l)).sub(&k(l).mul(&k(i)))));
        }
    }
    for l in 0..n {
        for i in 0..n {
            let coef = qi(datum, i, datum.c(i, datum.tau(l)) - datum.c(i, l));
            out.push((format!("relation1:kB(l={},i={})", l + 1, i + 1), k(l).mul(&b(i)).sub(&b(i).mul(&k(l)).scale(&coef))));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if datum.c(i, j) == 0 && datum.tau(i) != j {
                out.push((format!("relation2(i={},j={})", i + 1, j + 1), b(i).mul(&b(j)).sub(&b(j).mul(&b(i)))));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if j != i && datum.tau(i) != i && j != datum.tau(i) {
                let top = 1 - datum.c(i, j);
                let mut acc = IExpr::zero();
                for r in 0..=top {
                    let term = divided_power(datum, i, r).mul(&b(j)).mul(&divided_power(datum, i, top - r));
                    acc = acc.add(&term.scale(&sign(r)));
                }
                out.push((format!("relation3(i={},j={})", i + 1, j + 1), acc));
            }
        }
    }
    for i in 0..n {
        if datum.tau(i) != i {
            out.push((format!("relation5(i={})", i + 1), bkl_lhs(datum, i).sub(&bkl_rhs_pochhammer(datum, i))));
        }
    }
    for i in 0..n {
        if datum.tau(i) != i {
            continue;
        }
        for j in 0..n {
            if j == i {
                continue;
            }
            let c = datum.c(i, j);
            let top = 1 - c;
            for p in 0..2u8 {
                let p2 = (p as i64 + c).rem_euclid(2) as u8;
                let mut acc = IExpr::zero();
                for r in 0..=top {
                    let term = idivided_power(datum, i, r, p).unwrap().mul(&b(j)).mul(&idivided_power(datum, i, top - r, p2).unwrap());
                    acc = acc.add(&term.scale(&sign(r)));
                }
                out.push((format!("relation6(i={},j={},p={})", i + 1, j + 1, p), acc));
            }
        }
    }
    out
}

/// The images of one ı-generator in `Ũ` as a sum of letter words.
fn letter_image<C: Coefficients>(datum: &CartanDatum, coeffs: &C, l: ILetter) -> Vec<(C::Elem, Vec<ULetter>)> {
    match l {
        ILetter::B(i) => {
            let t = datum.tau(i as usize) as u8;
            vec![(coeffs.one(), vec![ULetter::F(i)]), (coeffs.one(), vec![ULetter::E(t), ULetter::Kp(i, false)])]
        }
        ILetter::K(i, inv) => {
            let t = datum.tau(i as usize) as u8;
            vec![(coeffs.one(), vec![ULetter::K(i, inv), ULetter::Kp(t, inv)])]
        }
    }
}

/// Evaluates `x` in `Ũ`: `B_i -> F_i + E_{τi} K'_i`, `k_i -> K_i K'_{τi}`.
pub fn embed<C: Coefficients + Clone>(eng: &UEngine<C>, x: &IExpr) -> Result<UElement<C::Elem>> {
    eng.reduce_state(embed_state(eng, x)?)
}

/// Unreduced triangular form of `x`, sharing work across common prefixes.
pub fn embed_state<C: Coefficients + Clone>(eng: &UEngine<C>, x: &IExpr) -> Result<TriState<C::Elem>> {
    let k = eng.coeffs();
    let mut terms: Vec<(Vec<ILetter>, C::Elem)> = Vec::with_capacity(x.len());
    for (w, c) in x.terms() {
        terms.push((w.letters().to_vec(), k.from_scalar(c)?));
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: TriState<C::Elem> = TriState::default();
    let datum = eng.datum().clone();
    walk(eng, &datum, &eng.unit_state(), &terms, 0, &mut out);
    Ok(out)
}

fn walk<C: Coefficients + Clone>(
    eng: &UEngine<C>,
    datum: &CartanDatum,
    state: &TriState<C::Elem>,
    terms: &[(Vec<ILetter>, C::Elem)],
    depth: usize,
    out: &mut TriState<C::Elem>,
) {
    let k = eng.coeffs();
    let mut idx = 0;
    while idx < terms.len() && terms[idx].0.len() == depth {
        let c = &terms[idx].1;
        for (key, x) in state {
            let v = k.mul(x, c);
            let e = out.entry(key.clone()).or_insert_with(|| k.zero());
            *e = k.add(e, &v);
        }
        idx += 1;
    }
    out.retain(|_, v| !k.is_zero(v));
    while idx < terms.len() {
        let l = terms[idx].0[depth];
        let mut end = idx;
        while end < terms.len() && terms[end].0.len() > depth && terms[end].0[depth] == l {
            end += 1;
        }
        let next = eng.mul_poly_words(state, &letter_image(datum, k, l));
        walk(eng, datum, &next, &terms[idx..end], depth + 1, out);
        idx = end;
    }
}
