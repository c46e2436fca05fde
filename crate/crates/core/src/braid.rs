//! Conjectured braid-group operators `T'_{i,e}`, `T''_{i,e}` on `Ũ^ı` for
//! `c_{i,τi} = 0`, as generator-image tables, with `v` read as `q_i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::{CartanDatum, Weight};
use crate::coeff::Coefficients;
use crate::error::{Error, Result};
use crate::iqg::{b, divided_power, embed, k, kpow, psi, qi, relation_set, sigma, IExpr, ILetter};
use crate::scalars::Scalar;
use crate::udouble::UEngine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OperatorKind {
    /// `T'`
    Prime,
    /// `T''`
    DoublePrime,
}

/// Images of every `B_j`, `k_j^{±1}` under one operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    pub kind: OperatorKind,
    pub i: usize,
    pub e: i64,
    pub table: BTreeMap<ILetter, IExpr>,
}

impl GeneratorMap {
    pub fn label(&self) -> String {
        let name = match self.kind {
            OperatorKind::Prime => "T'",
            OperatorKind::DoublePrime => "T''",
        };
        format!("{name}_{{{},{}}}", self.i + 1, if self.e > 0 { "+1" } else { "-1" })
    }

    pub fn image(&self, l: &ILetter) -> Option<&IExpr> {
        self.table.get(l)
    }
}

impl fmt::Display for GeneratorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.label())?;
        for (l, x) in &self.table {
            writeln!(f, "  {l} -> {x}")?;
        }
        Ok(())
    }
}

pub fn tprime(datum: &CartanDatum, i: usize, e: i64) -> Result<GeneratorMap> {
    build(datum, OperatorKind::Prime, i, e)
}

pub fn tdoubleprime(datum: &CartanDatum, i: usize, e: i64) -> Result<GeneratorMap> {
    build(datum, OperatorKind::DoublePrime, i, e)
}

/// All four operators attached to `i`, in the order `T'_{i,±1}`, `T''_{i,±1}`.
pub fn all_operators(datum: &CartanDatum, i: usize) -> Result<Vec<GeneratorMap>> {
    let mut out = Vec::new();
    for kind in [OperatorKind::Prime, OperatorKind::DoublePrime] {
        for e in [1, -1] {
            out.push(build(datum, kind, i, e)?);
        }
    }
    Ok(out)
}

fn build(datum: &CartanDatum, kind: OperatorKind, i: usize, e: i64) -> Result<GeneratorMap> {
    let n = datum.rank();
    if i >= n {
        return Err(Error::IndexOutOfRange(i + 1));
    }
    if e != 1 && e != -1 {
        return Err(Error::InvalidParameter(format!("e must be ±1, got {e}")));
    }
    let t = datum.tau(i);
    if t == i || datum.c(i, t) != 0 {
        return Err(Error::OutsideHypothesis(format!("requires τi ≠ i and c_{{i,τi}} = 0 (i = {})", i + 1)));
    }
    let mut table = BTreeMap::new();
    for j in 0..n {
        let (a, bexp) = (-datum.c(i, j), -datum.c(t, j));
        let img = kpow(i, a).mul(&kpow(t, bexp)).mul(&k(j));
        let inv = crate::iqg::kinv(j).mul(&kpow(t, -bexp)).mul(&kpow(i, -a));
        table.insert(ILetter::K(j as u8, false), img);
        table.insert(ILetter::K(j as u8, true), inv);
    }
    let minus = Scalar::from_int(-1);
    // rank-one images: (B_i, B_{τi})
    let (bi, bt) = match (kind, e) {
        (OperatorKind::Prime, -1) => (b(t).mul(&kpow(t, -1)), kpow(i, -1).mul(&b(i))),
        (OperatorKind::Prime, _) => (b(t).mul(&kpow(i, -1)), kpow(t, -1).mul(&b(i))),
        (OperatorKind::DoublePrime, 1) => (kpow(i, -1).mul(&b(t)), b(i).mul(&kpow(t, -1))),
        (OperatorKind::DoublePrime, _) => (kpow(t, -1).mul(&b(t)), b(i).mul(&kpow(i, -1))),
    };
    table.insert(ILetter::B(i as u8), bi.scale(&minus));
    table.insert(ILetter::B(t as u8), bt.scale(&minus));
    for j in 0..n {
        if j != i && j != t {
            table.insert(ILetter::B(j as u8), general_image(datum, kind, i, e, j));
        }
    }
    Ok(GeneratorMap { kind, i, e, table })
}

fn general_image(datum: &CartanDatum, kind: OperatorKind, i: usize, e: i64, j: usize) -> IExpr {
    let t = datum.tau(i);
    let (cij, ctj) = (datum.c(i, j), datum.c(t, j));
    // T'_{i,-1} and T''_{i,1} carry v^{+(...)}; the other two v^{-(...)}.
    let sgn = match kind {
        OperatorKind::Prime => -e,
        OperatorKind::DoublePrime => e,
    };
    let kfac = match (kind, e) {
        (OperatorKind::Prime, -1) | (OperatorKind::DoublePrime, -1) => i,
        _ => t,
    };
    let dp = |x: usize, m: i64| divided_power(datum, x, m);
    let mut acc = IExpr::zero();
    for u in 0..=(-cij.max(ctj)) {
        for r in 0..=(-cij - u) {
            for s in 0..=(-ctj - u) {
                let x = r - s + (-cij - r - s - u) * u;
                let coef = &Scalar::from_int(if (r + s) % 2 == 0 { 1 } else { -1 }) * &qi(datum, i, sgn * x);
                let term = match kind {
                    OperatorKind::Prime => kpow(kfac, u)
                        .mul(&dp(i, -cij - r - u))
                        .mul(&dp(t, s))
                        .mul(&b(j))
                        .mul(&dp(t, -ctj - u - s))
                        .mul(&dp(i, r)),
                    OperatorKind::DoublePrime => dp(i, r)
                        .mul(&dp(t, -ctj - u - s))
                        .mul(&b(j))
                        .mul(&dp(t, s))
                        .mul(&dp(i, -cij - r - u))
                        .mul(&kpow(kfac, u)),
                };
                acc = acc.add(&term.scale(&coef));
            }
        }
    }
    acc
}

/// Multiplicative extension of the table.
pub fn apply(map: &GeneratorMap, x: &IExpr) -> Result<IExpr> {
    x.substitute(|l| map.table.get(l).cloned(), false)
}

/// `σ ∘ T ∘ σ` on a generator.
pub fn sigma_conjugate(datum: &CartanDatum, map: &GeneratorMap, g: &IExpr) -> Result<IExpr> {
    Ok(sigma(datum, &apply(map, &sigma(datum, g))?))
}

/// `ψ ∘ T ∘ ψ` on a generator.
pub fn psi_conjugate(datum: &CartanDatum, map: &GeneratorMap, g: &IExpr) -> Result<IExpr> {
    Ok(psi(datum, &apply(map, &psi(datum, g))?))
}

/// Generators not fixed by `outer ∘ inner`, compared after `embed`.
pub fn composite_moved<C: Coefficients + Clone>(eng: &UEngine<C>, outer: &GeneratorMap, inner: &GeneratorMap) -> Result<Vec<ILetter>> {
    let mut moved = Vec::new();
    for (g, x) in generators(eng.datum()) {
        let y = apply(outer, &apply(inner, &x)?)?;
        if embed(eng, &y.sub(&x))?.is_zero() {
            continue;
        }
        moved.push(g);
    }
    Ok(moved)
}

/// Every generator `B_j`, `k_j`, `k_j^{-1}` as an expression.
pub fn generators(datum: &CartanDatum) -> Vec<(ILetter, IExpr)> {
    let mut out = Vec::new();
    for j in 0..datum.rank() {
        for l in [ILetter::B(j as u8), ILetter::K(j as u8, false), ILetter::K(j as u8, true)] {
            out.push((l, IExpr::letter(l)));
        }
    }
    out
}

/// Relations with their images under `map`, still unevaluated.
pub fn transported_relations(datum: &CartanDatum, map: &GeneratorMap) -> Result<Vec<(String, IExpr)>> {
    relation_set(datum).into_iter().map(|(l, r)| Ok((l, apply(map, &r)?))).collect()
}

/// Labels of the relations whose images under `map` are nonzero.
pub fn violated_relations<C: Coefficients + Clone>(eng: &UEngine<C>, map: &GeneratorMap) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for (l, x) in transported_relations(eng.datum(), map)? {
        if !embed(eng, &x)?.is_zero() {
            bad.push(l);
        }
    }
    Ok(bad)
}

/// Canonical image of a `ℤ^I` weight in `ℤ^I / span{α_j + α_{τj}}`:
/// `a_j - a_{τj}` on orbit representatives with `τj ≠ j`, `a_j mod 2` on fixed nodes.
pub fn weight_mod_l(datum: &CartanDatum, w: &Weight) -> Vec<i64> {
    let mut out = Vec::new();
    for j in 0..datum.rank() {
        let t = datum.tau(j);
        if t == j {
            out.push(w.0[j].rem_euclid(2));
        } else if j < t {
            out.push(w.0[j] - w.0[t]);
        }
    }
    out
}

/// Expected weight of `T(g)` modulo `L`: `𝐬_i` applied to the weight of `g`.
pub fn expected_weight(datum: &CartanDatum, map: &GeneratorMap, g: ILetter) -> Result<Vec<i64>> {
    let n = datum.rank();
    let src = match g {
        ILetter::B(j) => -&Weight::simple(n, j as usize),
        ILetter::K(..) => Weight::zero(n),
    };
    let refl = datum.restricted_generator(map.i)?;
    Ok(weight_mod_l(datum, &refl.apply(datum, &src)))
}

/// Checks that every term of `embed(T(g))` has the expected weight modulo `L`;
/// returns the offending weights.
pub fn weight_mismatches<C: Coefficients + Clone>(eng: &UEngine<C>, map: &GeneratorMap, g: ILetter) -> Result<Vec<Vec<i64>>> {
    let datum = eng.datum();
    let want = expected_weight(datum, map, g)?;
    let img = map.image(&g).ok_or_else(|| Error::MissingImage(g.to_string()))?;
    let mut bad = Vec::new();
    for (key, _) in embed(eng, img)?.terms() {
        let w = weight_mod_l(datum, &key.weight(datum.rank()));
        if w != want && !bad.contains(&w) {
            bad.push(w);
        }
    }
    Ok(bad)
}
