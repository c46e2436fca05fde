//! Per-weight bases of the positive half modulo the q-Serre ideal.
//!
//! Words of a weight are sorted ascending; all have the same length, so this
//! is the degree-lex order and the leading monomial of a vector is its
//! largest word. The ideal component `I_μ` is spanned by `E_i I_{μ-α_i}`,
//! `I_{μ-α_i} E_i` and the Serre element when `μ` is a Serre weight.

use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use crate::cartan::CartanDatum;
use crate::coeff::Coefficients;
use crate::error::{Error, Result};
use crate::scalars::qbinom;

/// Letter indices of a one-sign word.
pub type OneWord = Vec<u8>;

/// Sparse vector over word indices, sorted by index.
pub type SparseRow<E> = Vec<(usize, E)>;

pub const CACHE_FORMAT: &str = "iquantum-weight-basis v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Standard monomials and reduction data for one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBasis<E> {
    pub weight: Vec<i64>,
    pub words: Vec<OneWord>,
    pub standard: Vec<bool>,
    /// Semi-echelon basis of the ideal component, one row per pivot.
    pub rows: Vec<SparseRow<E>>,
    /// For each non-standard word, its normal form over standard words.
    pub reduction: Vec<Option<SparseRow<E>>>,
    index: HashMap<OneWord, usize>,
}

impl<E: Clone> WeightBasis<E> {
    fn assemble(weight: Vec<i64>, words: Vec<OneWord>, standard: Vec<bool>, rows: Vec<SparseRow<E>>, reduction: Vec<Option<SparseRow<E>>>) -> Self {
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        WeightBasis { weight, words, standard, rows, reduction, index }
    }

    pub fn dim(&self) -> usize {
        self.standard.iter().filter(|s| **s).count()
    }

    pub fn index_of(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn standard_words(&self) -> impl Iterator<Item = &OneWord> {
        self.words.iter().zip(&self.standard).filter(|(_, s)| **s).map(|(w, _)| w)
    }
}

/// All words with the given letter multiplicities, ascending.
pub fn words_of_weight(weight: &[i64]) -> Vec<OneWord> {
    let mut out = Vec::new();
    let mut rem = weight.to_vec();
    let total: i64 = weight.iter().sum();
    let mut cur = Vec::with_capacity(total as usize);
    fn rec(rem: &mut [i64], left: i64, cur: &mut OneWord, out: &mut Vec<OneWord>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(i as u8);
                rec(rem, left - 1, cur, out);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    rec(&mut rem, total, &mut cur, &mut out);
    out
}

pub fn weight_of_word(n: usize, w: &[u8]) -> Vec<i64> {
    let mut out = vec![0; n];
    for &l in w {
        out[l as usize] += 1;
    }
    out
}

type Slot<E> = Arc<OnceLock<Arc<WeightBasis<E>>>>;

/// Lazily computed, shared weight bases for one datum and coefficient system.
pub struct BasisCache<C: Coefficients> {
    datum: Arc<CartanDatum>,
    coeffs: C,
    slots: Mutex<HashMap<Vec<i64>, Slot<C::Elem>>>,
    disk: Option<PathBuf>,
}

impl<C: Coefficients + Clone> BasisCache<C> {
    pub fn new(datum: Arc<CartanDatum>, coeffs: C, disk: Option<PathBuf>) -> Self {
        BasisCache { datum, coeffs, slots: Mutex::new(HashMap::new()), disk }
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn coeffs(&self) -> &C {
        &self.coeffs
    }

    /// Number of weights currently held in memory.
    pub fn len(&self) -> usize {
        self.slots.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The basis at `weight`, computing it (and the lower weights it needs)
    /// at most once per key.
    pub fn get(&self, weight: &[i64], budget: usize) -> Result<Arc<WeightBasis<C::Elem>>> {
        let deg: i64 = weight.iter().sum();
        if weight.iter().any(|x| *x < 0) || weight.len() != self.datum.rank() {
            return Err(Error::InvalidParameter(format!("not a positive weight: {weight:?}")));
        }
        if deg as usize > budget {
            return Err(Error::DegreeBudget { degree: deg as usize, budget });
        }
        let slot = {
            let mut m = self.slots.lock().unwrap();
            m.entry(weight.to_vec()).or_default().clone()
        };
        Ok(slot.get_or_init(|| Arc::new(self.load_or_build(weight, budget))).clone())
    }

    fn cache_path(&self, weight: &[i64]) -> Option<PathBuf> {
        let dir = self.disk.as_ref()?;
        let w: Vec<String> = weight.iter().map(|x| x.to_string()).collect();
        Some(dir.join(self.datum.hash_hex()).join(format!("{}_{}.basis", self.coeffs.tag(), w.join("-"))))
    }

    fn load_or_build(&self, weight: &[i64], budget: usize) -> WeightBasis<C::Elem> {
        if let Some(path) = self.cache_path(weight) {
            if let Some(b) = read_basis(&self.coeffs, &path, &self.datum.hash_hex(), weight) {
                return b;
            }
            let b = self.build(weight, budget);
            // a failed write only costs a recomputation later
            let _ = write_basis(&self.coeffs, &path, &self.datum.hash_hex(), &b);
            return b;
        }
        self.build(weight, budget)
    }

    fn build(&self, weight: &[i64], budget: usize) -> WeightBasis<C::Elem> {
        let n = self.datum.rank();
        let words = words_of_weight(weight);
        let nw = words.len();
        let deg: i64 = weight.iter().sum();
        let index: HashMap<&[u8], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let k = &self.coeffs;

        let mut candidates: Vec<SparseRow<C::Elem>> = Vec::new();
        if deg >= 2 {
            if let Some(s) = self.serre_vector(weight, &index) {
                candidates.push(s);
            }
            for i in 0..n {
                if weight[i] == 0 {
                    continue;
                }
                let mut lower = weight.to_vec();
                lower[i] -= 1;
                let lb = self.get(&lower, budget).expect("lower weight within budget");
                for row in &lb.rows {
                    for prepend in [true, false] {
                        let mut v: SparseRow<C::Elem> = row
                            .iter()
                            .map(|(idx, c)| {
                                let mut w = Vec::with_capacity(deg as usize);
                                if prepend {
                                    w.push(i as u8);
                                    w.extend_from_slice(&lb.words[*idx]);
                                } else {
                                    w.extend_from_slice(&lb.words[*idx]);
                                    w.push(i as u8);
                                }
                                (index[w.as_slice()], c.clone())
                            })
                            .collect();
                        v.sort_by_key(|(i, _)| *i);
                        candidates.push(v);
                    }
                }
            }
        }

        // semi-echelon elimination keyed by leading (largest) index
        let mut pivots: Vec<Option<SparseRow<C::Elem>>> = vec![None; nw];
        let mut dense: Vec<C::Elem> = vec![k.zero(); nw];
        let one = k.one();
        let mut rank = 0usize;
        for cand in candidates {
            if rank == nw {
                break;
            }
            for (i, c) in &cand {
                dense[*i] = c.clone();
            }
            let mut top = cand.last().map(|(i, _)| *i);
            while let Some(t) = top {
                if k.is_zero(&dense[t]) {
                    top = (0..t).rev().find(|&j| !k.is_zero(&dense[j]));
                    continue;
                }
                let Some(prow) = &pivots[t] else { break };
                let lead = &prow.last().unwrap().1;
                let (s, m) = k.elimination_multipliers(lead, &dense[t]);
                if !k.is_zero(&k.sub(&s, &k.one())) {
                    for x in dense[..t].iter_mut() {
                        if !k.is_zero(x) {
                            *x = k.mul(x, &s);
                        }
                    }
                }
                for (j, c) in prow {
                    let d = k.mul(&m, c);
                    dense[*j] = k.sub(&k.mul(&dense[*j], if *j == t { &s } else { &one }), &d);
                }
                debug_assert!(k.is_zero(&dense[t]));
                top = (0..t).rev().find(|&j| !k.is_zero(&dense[j]));
            }
            if let Some(t) = top {
                let mut row: Vec<C::Elem> = dense[..=t].to_vec();
                k.normalize_row(&mut row);
                let sparse: SparseRow<C::Elem> = row.into_iter().enumerate().filter(|(_, c)| !k.is_zero(c)).collect();
                pivots[t] = Some(sparse);
                rank += 1;
            }
            for x in dense.iter_mut() {
                if !k.is_zero(x) {
                    *x = k.zero();
                }
            }
        }

        let standard: Vec<bool> = pivots.iter().map(|p| p.is_none()).collect();
        let mut reduction: Vec<Option<SparseRow<C::Elem>>> = vec![None; nw];
        for lead in 0..nw {
            let Some(row) = &pivots[lead] else { continue };
            let (_, a) = row.last().unwrap();
            let neg_inv = k.neg(&k.inv(a).expect("pivot is nonzero"));
            let mut acc: HashMap<usize, C::Elem> = HashMap::new();
            for (j, c) in &row[..row.len() - 1] {
                let f = k.mul(c, &neg_inv);
                if standard[*j] {
                    let e = acc.entry(*j).or_insert_with(|| k.zero());
                    *e = k.add(e, &f);
                } else {
                    for (s, r) in reduction[*j].as_ref().expect("smaller leads reduced first") {
                        let e = acc.entry(*s).or_insert_with(|| k.zero());
                        *e = k.add(e, &k.mul(&f, r));
                    }
                }
            }
            let mut red: SparseRow<C::Elem> = acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
            red.sort_by_key(|(i, _)| *i);
            reduction[lead] = Some(red);
        }
        let rows: Vec<SparseRow<C::Elem>> = pivots.into_iter().flatten().collect();
        WeightBasis::assemble(weight.to_vec(), words, standard, rows, reduction)
    }

    /// The q-Serre element for `(i, j)` when `weight = (1 - c_ij) α_i + α_j`,
    /// scaled by `[1 - c_ij]_{q_i}^!` so its coefficients are Laurent.
    fn serre_vector(&self, weight: &[i64], index: &HashMap<&[u8], usize>) -> Option<SparseRow<C::Elem>> {
        let n = self.datum.rank();
        let support: Vec<usize> = (0..n).filter(|&i| weight[i] > 0).collect();
        if support.len() != 2 {
            return None;
        }
        for (i, j) in [(support[0], support[1]), (support[1], support[0])] {
            let top = 1 - self.datum.c(i, j);
            if weight[i] == top && weight[j] == 1 {
                let e = self.datum.eps(i);
                let mut v: SparseRow<C::Elem> = (0..=top)
                    .map(|r| {
                        let mut w = vec![i as u8; r as usize];
                        w.push(j as u8);
                        w.extend(std::iter::repeat_n(i as u8, (top - r) as usize));
                        let mut c = self.coeffs.from_scalar(&qbinom(top, r, e)).expect("Laurent coefficient");
                        if r % 2 == 1 {
                            c = self.coeffs.neg(&c);
                        }
                        (index[w.as_slice()], c)
                    })
                    .collect();
                v.sort_by_key(|(i, _)| *i);
                return Some(v);
            }
        }
        None
    }
}

fn write_sparse<C: Coefficients>(k: &C, out: &mut String, row: &SparseRow<C::Elem>) -> Option<()> {
    let parts: Option<Vec<String>> = row.iter().map(|(i, c)| k.to_text(c).map(|t| format!("{i}={t}"))).collect();
    out.push_str(&parts?.join(" "));
    out.push('\n');
    Some(())
}

fn parse_sparse<C: Coefficients>(k: &C, line: &str) -> Option<SparseRow<C::Elem>> {
    if line.is_empty() {
        return Some(Vec::new());
    }
    line.split(' ')
        .map(|tok| {
            let (i, t) = tok.split_once('=')?;
            Some((i.parse().ok()?, k.from_text(t)?))
        })
        .collect()
}

fn word_text(w: &[u8]) -> String {
    w.iter().map(|l| (l + 1).to_string()).collect::<Vec<_>>().join(".")
}

/// Serializes a basis; `None` when the coefficient system has no text form.
pub fn basis_to_text<C: Coefficients>(k: &C, datum_hash: &str, b: &WeightBasis<C::Elem>) -> Option<String> {
    let mut s = String::new();
    let w: Vec<String> = b.weight.iter().map(|x| x.to_string()).collect();
    s.push_str(CACHE_FORMAT);
    s.push('\n');
    s.push_str(&format!("datum {datum_hash}\nsign +\nweight {}\norder deglex\ncoefficients {}\n", w.join(","), k.tag()));
    s.push_str(&format!("words {}\n", b.words.len()));
    for (w, st) in b.words.iter().zip(&b.standard) {
        s.push_str(&format!("{} {}\n", if *st { 's' } else { 'r' }, word_text(w)));
    }
    s.push_str(&format!("rows {}\n", b.rows.len()));
    for r in &b.rows {
        write_sparse(k, &mut s, r)?;
    }
    s.push_str("reductions\n");
    for r in b.reduction.iter().flatten() {
        write_sparse(k, &mut s, r)?;
    }
    s.push_str("end\n");
    Some(s)
}

pub fn basis_from_text<C: Coefficients>(k: &C, text: &str, datum_hash: &str, weight: &[i64]) -> Option<WeightBasis<C::Elem>> {
    let mut lines = text.lines();
    let w: Vec<String> = weight.iter().map(|x| x.to_string()).collect();
    let header = [
        CACHE_FORMAT.to_string(),
        format!("datum {datum_hash}"),
        "sign +".to_string(),
        format!("weight {}", w.join(",")),
        "order deglex".to_string(),
        format!("coefficients {}", k.tag()),
    ];
    for h in &header {
        if lines.next()? != h {
            return None;
        }
    }
    let nw: usize = lines.next()?.strip_prefix("words ")?.parse().ok()?;
    let expected = words_of_weight(weight);
    if expected.len() != nw {
        return None;
    }
    let mut standard = Vec::with_capacity(nw);
    for w in &expected {
        let line = lines.next()?;
        let (flag, text) = line.split_once(' ')?;
        if text != word_text(w) {
            return None;
        }
        standard.push(match flag {
            "s" => true,
            "r" => false,
            _ => return None,
        });
    }
    let nr: usize = lines.next()?.strip_prefix("rows ")?.parse().ok()?;
    let mut rows = Vec::with_capacity(nr);
    for _ in 0..nr {
        rows.push(parse_sparse(k, lines.next()?)?);
    }
    if lines.next()? != "reductions" {
        return None;
    }
    let mut reduction = vec![None; nw];
    for (i, st) in standard.iter().enumerate() {
        if !*st {
            reduction[i] = Some(parse_sparse(k, lines.next()?)?);
        }
    }
    if lines.next()? != "end" || nr != nw - standard.iter().filter(|s| **s).count() {
        return None;
    }
    Some(WeightBasis::assemble(weight.to_vec(), expected, standard, rows, reduction))
}

fn read_basis<C: Coefficients>(k: &C, path: &Path, datum_hash: &str, weight: &[i64]) -> Option<WeightBasis<C::Elem>> {
    let text = fs::read_to_string(path).ok()?;
    basis_from_text(k, &text, datum_hash, weight)
}

fn write_basis<C: Coefficients>(k: &C, path: &Path, datum_hash: &str, b: &WeightBasis<C::Elem>) -> std::io::Result<()> {
    let Some(text) = basis_to_text(k, datum_hash, b) else { return Ok(()) };
    let dir = path.parent().expect("cache path has a parent");
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{}.{}.tmp", path.file_name().unwrap().to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(text.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::preset;
    use crate::coeff::{Exact, ModP};

    fn cache(name: &str) -> BasisCache<Exact> {
        BasisCache::new(Arc::new(preset(name).unwrap()), Exact, None)
    }

    #[test]
    fn word_lists() {
        assert_eq!(words_of_weight(&[1, 1]), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(words_of_weight(&[2, 1]).len(), 3);
        assert_eq!(words_of_weight(&[0, 0]), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn a2_dimensions() {
        let c = cache("a2-swap");
        assert_eq!(c.get(&[1, 1], 12).unwrap().dim(), 2);
        assert_eq!(c.get(&[2, 1], 12).unwrap().dim(), 2);
        assert_eq!(c.get(&[0, 0], 12).unwrap().dim(), 1);
        assert_eq!(c.get(&[2, 2], 12).unwrap().dim(), 3);
    }

    #[test]
    fn budget_is_enforced() {
        let c = cache("a2-swap");
        assert!(matches!(c.get(&[2, 2], 3), Err(Error::DegreeBudget { .. })));
    }

    #[test]
    fn modular_dimensions_match() {
        let d = Arc::new(preset("a1aff-swap").unwrap());
        let ex = BasisCache::new(d.clone(), Exact, None);
        let md = BasisCache::new(d, ModP::new(crate::scalars::DEFAULT_PRIME, 123_456_789), None);
        for w in [[3, 1], [3, 2], [4, 2], [3, 3]] {
            assert_eq!(ex.get(&w, 12).unwrap().dim(), md.get(&w, 12).unwrap().dim());
        }
    }

    #[test]
    fn text_round_trip() {
        let c = cache("a2-swap");
        let b = c.get(&[2, 2], 12).unwrap();
        let h = c.datum().hash_hex();
        let t = basis_to_text(&Exact, &h, &b).unwrap();
        assert_eq!(basis_from_text(&Exact, &t, &h, &[2, 2]).as_ref(), Some(&*b));
        assert!(basis_from_text(&Exact, &t, "other", &[2, 2]).is_none());
    }
}
