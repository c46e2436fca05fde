//! The Drinfeld double `Ũ`: straightening into triangular form
//! `F-word · K-monomial · E-word` and canonical reduction of the outer
//! parts modulo the q-Serre ideals.

mod basis;
mod form;

pub use basis::{basis_from_text, basis_to_text, words_of_weight, weight_of_word, BasisCache, OneWord, Sign, SparseRow, WeightBasis, CACHE_FORMAT};
pub use form::{form_matrix_entry, form_radical_oracle};

use std::any::Any;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::{CartanDatum, Weight};
use crate::coeff::{Coefficients, Exact, ModP};
use crate::error::{Error, Result};
use crate::ncalg::{Letter, NCPoly};
use crate::scalars::{Scalar, DEFAULT_PRIME};

/// Default maximum number of letters in a one-sign word.
pub const DEFAULT_BUDGET: usize = 12;

/// Generators of `Ũ`, ordered `F < K < K' < E`, then by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ULetter {
    F(u8),
    /// `K_i^{±1}`; the flag is true for the inverse.
    K(u8, bool),
    /// `K'_i^{±1}`.
    Kp(u8, bool),
    E(u8),
}

impl Letter for ULetter {
    fn inverse(&self) -> Option<Self> {
        match *self {
            ULetter::K(i, inv) => Some(ULetter::K(i, !inv)),
            ULetter::Kp(i, inv) => Some(ULetter::Kp(i, !inv)),
            _ => None,
        }
    }
}

impl fmt::Display for ULetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ULetter::F(i) => write!(f, "F{}", i + 1),
            ULetter::E(i) => write!(f, "E{}", i + 1),
            ULetter::K(i, false) => write!(f, "K{}", i + 1),
            ULetter::K(i, true) => write!(f, "K{}^-1", i + 1),
            ULetter::Kp(i, false) => write!(f, "Kp{}", i + 1),
            ULetter::Kp(i, true) => write!(f, "Kp{}^-1", i + 1),
        }
    }
}

impl ULetter {
    pub fn weight(&self, n: usize) -> Weight {
        match *self {
            ULetter::E(i) => Weight::simple(n, i as usize),
            ULetter::F(i) => -&Weight::simple(n, i as usize),
            _ => Weight::zero(n),
        }
    }
}

pub type UPoly = NCPoly<ULetter>;

/// A triangular monomial: F-word, exponents of `(K_1..K_n, K'_1..K'_n)`, E-word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UKey {
    pub f: OneWord,
    pub k: Vec<i32>,
    pub e: OneWord,
}

impl UKey {
    pub fn unit(n: usize) -> Self {
        UKey { f: Vec::new(), k: vec![0; 2 * n], e: Vec::new() }
    }

    /// The letters of this monomial in triangular order.
    pub fn letters(&self) -> Vec<ULetter> {
        let n = self.k.len() / 2;
        let mut out: Vec<ULetter> = self.f.iter().map(|i| ULetter::F(*i)).collect();
        for (idx, &x) in self.k.iter().enumerate() {
            let l = if idx < n { ULetter::K(idx as u8, x < 0) } else { ULetter::Kp((idx - n) as u8, x < 0) };
            out.extend(std::iter::repeat_n(l, x.unsigned_abs() as usize));
        }
        out.extend(self.e.iter().map(|i| ULetter::E(*i)));
        out
    }

    /// `Z^I`-degree: E-letters minus F-letters.
    pub fn weight(&self, n: usize) -> Weight {
        let mut w = Weight::zero(n);
        for &i in &self.e {
            w.0[i as usize] += 1;
        }
        for &i in &self.f {
            w.0[i as usize] -= 1;
        }
        w
    }
}

/// A canonical element of `Ũ`: standard F-word, K-exponents, standard E-word.
#[derive(Clone, PartialEq, Eq)]
pub struct UElement<E> {
    terms: BTreeMap<UKey, E>,
}

impl<E: Clone> UElement<E> {
    pub fn zero() -> Self {
        UElement { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UKey, &E)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &UKey) -> Option<&E> {
        self.terms.get(key)
    }
}

impl UElement<Scalar> {
    /// Expression-language form, parseable back into the same element.
    pub fn to_expr_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let letters: Vec<String> = k.letters().iter().map(|l| l.to_string()).collect();
                match (letters.is_empty(), c.is_one()) {
                    (true, _) => format!("({})", c.pretty()),
                    (false, true) => letters.join("*"),
                    (false, false) => format!("({})*{}", c.pretty(), letters.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_poly(&self) -> UPoly {
        NCPoly::from_terms(self.terms.iter().map(|(k, c)| (crate::ncalg::Word::from_letters(k.letters()), c.clone())))
    }
}

impl fmt::Display for UElement<Scalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr_string())
    }
}

impl<E: fmt::Debug> fmt::Debug for UElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Unreduced triangular sum.
pub type TriState<E> = HashMap<UKey, E>;

/// Receives every homogeneous one-sign polynomial handed to the Serre reduction.
pub type OneSignObserver<E> = Arc<dyn Fn(Sign, &[i64], &[(OneWord, E)]) + Send + Sync>;

/// Reduction engine over a coefficient system.
#[derive(Clone)]
pub struct UEngine<C: Coefficients> {
    datum: Arc<CartanDatum>,
    coeffs: C,
    cache: Arc<BasisCache<C>>,
    /// `1 / (q_j - q_j^{-1})`.
    inv_d: Vec<C::Elem>,
    budget: usize,
    observer: Option<OneSignObserver<C::Elem>>,
}

type Registry = Mutex<HashMap<(String, String, Option<PathBuf>), Arc<dyn Any + Send + Sync>>>;

fn registry() -> &'static Registry {
    static R: OnceLock<Registry> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared basis cache per (datum, coefficient system, disk directory).
fn shared_cache<C: Coefficients + Clone>(datum: &Arc<CartanDatum>, coeffs: &C, disk: Option<PathBuf>) -> Arc<BasisCache<C>> {
    let key = (datum.hash_hex(), coeffs.tag(), disk.clone());
    let mut r = registry().lock().unwrap();
    let entry = r
        .entry(key)
        .or_insert_with(|| Arc::new(BasisCache::new(datum.clone(), coeffs.clone(), disk)) as Arc<dyn Any + Send + Sync>)
        .clone();
    entry.downcast::<BasisCache<C>>().expect("registry key includes the coefficient tag")
}

/// Engine configuration.
#[derive(Clone, Debug, Default)]
pub struct EngineOptions {
    /// Maximum letters per one-sign word; [`DEFAULT_BUDGET`] when `None`.
    pub budget: Option<usize>,
    /// Directory for persisted weight bases; memory only when `None`.
    pub cache_dir: Option<PathBuf>,
    /// Use a private in-memory cache instead of the process-wide one.
    pub private_cache: bool,
}

impl<C: Coefficients + Clone> UEngine<C> {
    pub fn with_options(datum: &CartanDatum, coeffs: C, opts: &EngineOptions) -> Result<Self> {
        let datum = Arc::new(datum.clone());
        let mut inv_d = Vec::new();
        for j in 0..datum.rank() {
            let e = datum.eps(j);
            let d = coeffs.sub(&coeffs.q_pow(e), &coeffs.q_pow(-e));
            inv_d.push(coeffs.inv(&d).ok_or(crate::scalars::ScalarError::BadSample)?);
        }
        let cache = if opts.private_cache {
            Arc::new(BasisCache::new(datum.clone(), coeffs.clone(), opts.cache_dir.clone()))
        } else {
            shared_cache(&datum, &coeffs, opts.cache_dir.clone())
        };
        Ok(UEngine { datum, coeffs, cache, inv_d, budget: opts.budget.unwrap_or(DEFAULT_BUDGET), observer: None })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn coeffs(&self) -> &C {
        &self.coeffs
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn cache(&self) -> &BasisCache<C> {
        &self.cache
    }

    pub fn set_observer(&mut self, obs: Option<OneSignObserver<C::Elem>>) {
        self.observer = obs;
    }

    fn n(&self) -> usize {
        self.datum.rank()
    }

    /// The basis of `U^+` (or `U^-`, with the same letters) at `weight`.
    pub fn serre_basis(&self, weight: &[i64], _sign: Sign) -> Result<Arc<WeightBasis<C::Elem>>> {
        self.cache.get(weight, self.budget)
    }

    pub fn unit_state(&self) -> TriState<C::Elem> {
        let mut s = HashMap::new();
        s.insert(UKey::unit(self.n()), self.coeffs.one());
        s
    }

    fn push(&self, out: &mut TriState<C::Elem>, key: UKey, c: C::Elem) {
        if self.coeffs.is_zero(&c) {
            return;
        }
        match out.entry(key) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let s = self.coeffs.add(o.get(), &c);
                if self.coeffs.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Right multiplication of a triangular sum by one generator.
    pub fn mul_letter(&self, state: &TriState<C::Elem>, l: ULetter) -> TriState<C::Elem> {
        let k = &self.coeffs;
        let n = self.n();
        let mut out: TriState<C::Elem> = HashMap::with_capacity(state.len() * 2);
        match l {
            ULetter::E(j) => {
                for (key, c) in state {
                    let mut nk = key.clone();
                    nk.e.push(j);
                    self.push(&mut out, nk, c.clone());
                }
            }
            ULetter::K(j, inv) | ULetter::Kp(j, inv) => {
                let primed = matches!(l, ULetter::Kp(..));
                let s: i64 = if inv { -1 } else { 1 };
                let ej = self.datum.eps(j as usize);
                for (key, c) in state {
                    let sum: i64 = key.e.iter().map(|&a| self.datum.c(j as usize, a as usize)).sum();
                    // E_a K_j = q_j^{-c_ja} K_j E_a and E_a K'_j = q_j^{c_ja} K'_j E_a
                    let exp = if primed { s * ej * sum } else { -s * ej * sum };
                    let mut nk = key.clone();
                    nk.k[j as usize + if primed { n } else { 0 }] += s as i32;
                    self.push(&mut out, nk, k.mul_q_pow(c, exp));
                }
            }
            ULetter::F(j) => {
                let ju = j as usize;
                let ej = self.datum.eps(ju);
                for (key, c) in state {
                    // K_i F_j = q_i^{-c_ij} F_j K_i, K'_i F_j = q_i^{c_ij} F_j K'_i
                    let exp: i64 = (0..n).map(|i| self.datum.eps(i) * self.datum.c(i, ju) * (key.k[n + i] - key.k[i]) as i64).sum();
                    let mut nk = key.clone();
                    nk.f.push(j);
                    self.push(&mut out, nk, k.mul_q_pow(c, exp));
                    // [E_j, F_j] = (K_j - K'_j) / (q_j - q_j^{-1}) at each occurrence
                    let mut prefix_sum = 0i64;
                    for (p, &a) in key.e.iter().enumerate() {
                        if a == j {
                            let base = k.mul(c, &self.inv_d[ju]);
                            let mut e2 = key.e.clone();
                            e2.remove(p);
                            let mut k1 = key.k.clone();
                            k1[ju] += 1;
                            self.push(&mut out, UKey { f: key.f.clone(), k: k1, e: e2.clone() }, k.mul_q_pow(&base, -ej * prefix_sum));
                            let mut k2 = key.k.clone();
                            k2[n + ju] += 1;
                            self.push(&mut out, UKey { f: key.f.clone(), k: k2, e: e2 }, k.neg(&k.mul_q_pow(&base, ej * prefix_sum)));
                        }
                        prefix_sum += self.datum.c(ju, a as usize);
                    }
                }
            }
        }
        out
    }

    /// Right multiplication by a sum of words with coefficients.
    pub fn mul_poly_words(&self, state: &TriState<C::Elem>, poly: &[(C::Elem, Vec<ULetter>)]) -> TriState<C::Elem> {
        let mut out: TriState<C::Elem> = HashMap::new();
        for (c, word) in poly {
            let mut s = if self.coeffs.is_zero(&self.coeffs.sub(c, &self.coeffs.one())) {
                state.clone()
            } else {
                state.iter().map(|(k, x)| (k.clone(), self.coeffs.mul(x, c))).collect()
            };
            for l in word {
                s = self.mul_letter(&s, *l);
            }
            for (k, x) in s {
                self.push(&mut out, k, x);
            }
        }
        out
    }

    /// Triangular form of a word-polynomial in the generators.
    pub fn straighten(&self, p: &UPoly) -> Result<TriState<C::Elem>> {
        let mut out = HashMap::new();
        for (w, c) in p.terms() {
            let mut s = self.unit_state();
            for l in w.letters() {
                s = self.mul_letter(&s, *l);
            }
            let c = self.coeffs.from_scalar(c)?;
            for (k, x) in s {
                self.push(&mut out, k, self.coeffs.mul(&x, &c));
            }
        }
        Ok(out)
    }

    /// Normal form of a one-sign polynomial of the given weight.
    pub fn reduce_one_sign(&self, sign: Sign, weight: &[i64], poly: Vec<(OneWord, C::Elem)>) -> Result<Vec<(OneWord, C::Elem)>> {
        if let Some(obs) = &self.observer {
            obs(sign, weight, &poly);
        }
        let b = self.serre_basis(weight, sign)?;
        let k = &self.coeffs;
        let mut acc: BTreeMap<usize, C::Elem> = BTreeMap::new();
        for (w, c) in poly {
            let idx = b.index_of(&w).expect("word of the basis weight");
            match &b.reduction[idx] {
                None => {
                    let e = acc.entry(idx).or_insert_with(|| k.zero());
                    *e = k.add(e, &c);
                }
                Some(red) => {
                    for (s, r) in red {
                        let e = acc.entry(*s).or_insert_with(|| k.zero());
                        *e = k.add(e, &k.mul(&c, r));
                    }
                }
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| !k.is_zero(c)).map(|(i, c)| (b.words[i].clone(), c)).collect())
    }

    /// Canonical form of a triangular sum.
    pub fn reduce_state(&self, state: TriState<C::Elem>) -> Result<UElement<C::Elem>> {
        let n = self.n();
        for key in state.keys() {
            let d = key.e.len().max(key.f.len());
            if d > self.budget {
                return Err(Error::DegreeBudget { degree: d, budget: self.budget });
            }
        }
        // E side: group by (F-word, K-part, E-weight)
        let mut groups: BTreeMap<(OneWord, Vec<i32>, Vec<i64>), Vec<(OneWord, C::Elem)>> = BTreeMap::new();
        for (key, c) in state {
            let w = weight_of_word(n, &key.e);
            groups.entry((key.f, key.k, w)).or_default().push((key.e, c));
        }
        let mut fgroups: BTreeMap<(Vec<i32>, OneWord, Vec<i64>), Vec<(OneWord, C::Elem)>> = BTreeMap::new();
        for ((f, kv, w), poly) in groups {
            let fw = weight_of_word(n, &f);
            for (e, c) in self.reduce_one_sign(Sign::Plus, &w, poly)? {
                fgroups.entry((kv.clone(), e, fw.clone())).or_default().push((f.clone(), c));
            }
        }
        let mut terms = BTreeMap::new();
        for ((kv, e, fw), poly) in fgroups {
            for (f, c) in self.reduce_one_sign(Sign::Minus, &fw, poly)? {
                terms.insert(UKey { f, k: kv.clone(), e: e.clone() }, c);
            }
        }
        Ok(UElement { terms })
    }

    pub fn reduce(&self, p: &UPoly) -> Result<UElement<C::Elem>> {
        self.reduce_state(self.straighten(p)?)
    }

    pub fn is_zero(&self, p: &UPoly) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    pub fn uadd(&self, x: &UElement<C::Elem>, y: &UElement<C::Elem>) -> UElement<C::Elem> {
        let mut terms = x.terms.clone();
        for (k, c) in &y.terms {
            let s = match terms.get(k) {
                Some(a) => self.coeffs.add(a, c),
                None => c.clone(),
            };
            if self.coeffs.is_zero(&s) {
                terms.remove(k);
            } else {
                terms.insert(k.clone(), s);
            }
        }
        UElement { terms }
    }

    pub fn uscale(&self, x: &UElement<C::Elem>, c: &C::Elem) -> UElement<C::Elem> {
        if self.coeffs.is_zero(c) {
            return UElement::zero();
        }
        UElement { terms: x.terms.iter().map(|(k, a)| (k.clone(), self.coeffs.mul(a, c))).collect() }
    }

    pub fn umul(&self, x: &UElement<C::Elem>, y: &UElement<C::Elem>) -> Result<UElement<C::Elem>> {
        let xs: TriState<C::Elem> = x.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        let ys: Vec<(C::Elem, Vec<ULetter>)> = y.terms.iter().map(|(k, c)| (c.clone(), k.letters())).collect();
        self.reduce_state(self.mul_poly_words(&xs, &ys))
    }

    pub fn to_state(&self, x: &UElement<C::Elem>) -> TriState<C::Elem> {
        x.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect()
    }
}

/// Exact engine with the process-wide cache.
pub fn exact_engine(datum: &CartanDatum) -> UEngine<Exact> {
    UEngine::with_options(datum, Exact, &EngineOptions::default()).expect("exact engine")
}

/// Probabilistic zero test: reduction over `F_p` at `trials` random points.
/// `false` is certain (the input is nonzero); `true` holds with high probability.
pub fn is_zero_modular<F>(datum: &CartanDatum, trials: usize, seed: u64, budget: usize, mut eval: F) -> Result<bool>
where
    F: FnMut(&UEngine<ModP>) -> Result<UElement<u64>>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > 16 {
                return Err(Error::SamplingExhausted);
            }
            let q0 = rng.gen_range(2..DEFAULT_PRIME - 1);
            let opts = EngineOptions { budget: Some(budget), cache_dir: None, private_cache: false };
            let eng = match UEngine::with_options(datum, ModP::new(DEFAULT_PRIME, q0), &opts) {
                Ok(e) => e,
                Err(Error::Scalar(_)) => continue,
                Err(e) => return Err(e),
            };
            match eval(&eng) {
                Ok(x) => {
                    if !x.is_zero() {
                        return Ok(false);
                    }
                    break;
                }
                Err(Error::Scalar(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(true)
}

/// [`is_zero_modular`] for a word-polynomial in the generators of `Ũ`.
pub fn is_zero_modular_poly(datum: &CartanDatum, p: &UPoly, trials: usize, seed: u64) -> Result<bool> {
    is_zero_modular(datum, trials, seed, DEFAULT_BUDGET, |eng| eng.reduce(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::preset;
    use crate::ncalg::Word;

    fn l(x: ULetter) -> UPoly {
        NCPoly::letter(x)
    }

    fn inv_d() -> Scalar {
        (&Scalar::one() / &(&Scalar::q() - &Scalar::q_pow(-1))).unwrap()
    }

    #[test]
    fn commutator_e_f() {
        let eng = exact_engine(&preset("a2-swap").unwrap());
        let lhs = l(ULetter::E(0)).mul(&l(ULetter::F(0)));
        let rhs = l(ULetter::F(0))
            .mul(&l(ULetter::E(0)))
            .add(&l(ULetter::K(0, false)).sub(&l(ULetter::Kp(0, false))).scale(&inv_d()));
        assert!(eng.is_zero(&lhs.sub(&rhs)).unwrap());
        let ef2 = eng.reduce(&l(ULetter::E(0)).mul(&l(ULetter::F(1)))).unwrap();
        assert_eq!(ef2, eng.reduce(&l(ULetter::F(1)).mul(&l(ULetter::E(0)))).unwrap());
    }

    #[test]
    fn k_e_commutation() {
        let eng = exact_engine(&preset("a2-swap").unwrap());
        let lhs = l(ULetter::K(0, false)).mul(&l(ULetter::E(1)));
        let rhs = l(ULetter::E(1)).mul(&l(ULetter::K(0, false))).scale(&Scalar::q_pow(-1));
        assert!(eng.is_zero(&lhs.sub(&rhs)).unwrap());
    }

    #[test]
    fn serre_elements_vanish() {
        let eng = exact_engine(&preset("a2-swap").unwrap());
        let two = crate::scalars::qint(2, 1);
        for mk in [ULetter::E as fn(u8) -> ULetter, ULetter::F as fn(u8) -> ULetter] {
            let (a, b) = (l(mk(0)), l(mk(1)));
            let s = a.mul(&a).mul(&b).sub(&a.mul(&b).mul(&a).scale(&two)).add(&b.mul(&a).mul(&a));
            assert!(eng.is_zero(&s).unwrap());
        }
        assert!(!eng.is_zero(&l(ULetter::E(0)).mul(&l(ULetter::E(1)))).unwrap());
        assert_eq!(eng.reduce(&l(ULetter::E(0)).mul(&l(ULetter::E(1)))).unwrap().len(), 1);
    }

    #[test]
    fn k_inverse_cancels() {
        let eng = exact_engine(&preset("a1xa1-swap").unwrap());
        let p = l(ULetter::K(0, false)).mul(&l(ULetter::E(1))).mul(&l(ULetter::K(0, true)));
        let e = eng.reduce(&p).unwrap();
        assert_eq!(e, eng.reduce(&l(ULetter::E(1))).unwrap());
        assert_eq!(NCPoly::term(Scalar::one(), Word::from_letters([ULetter::K(0, false), ULetter::K(0, true)])), NCPoly::one());
    }

    #[test]
    fn modular_agrees_on_zero_and_nonzero() {
        let d = preset("a2-swap").unwrap();
        let e1 = l(ULetter::E(0));
        let f1 = l(ULetter::F(0));
        let comm = e1.mul(&f1).sub(&f1.mul(&e1)).sub(&l(ULetter::K(0, false)).sub(&l(ULetter::Kp(0, false))).scale(&inv_d()));
        assert!(is_zero_modular_poly(&d, &comm, 3, 7).unwrap());
        assert!(!is_zero_modular_poly(&d, &e1.mul(&f1), 3, 7).unwrap());
    }
}
