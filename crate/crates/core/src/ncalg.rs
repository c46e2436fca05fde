//! Noncommutative polynomials over [`Scalar`] in an abstract alphabet.
//!
//! The alphabet is a type parameter, so mixing alphabets is a compile error.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// A generator symbol. `inverse` returns the formal inverse letter, if any;
/// adjacent inverse pairs cancel when words are built.
pub trait Letter: Clone + Ord + Hash + Debug + Display + Send + Sync {
    fn inverse(&self) -> Option<Self> {
        None
    }
}

/// A word, ordered by length first and lexicographically within a length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word<L>(Vec<L>);

impl<L: Letter> Word<L> {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: L) -> Self {
        Word(vec![l])
    }

    /// Builds a word, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = L>>(letters: I) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: L) {
        if let (Some(last), Some(inv)) = (self.0.last(), l.inverse()) {
            if *last == inv {
                self.0.pop();
                return;
            }
        }
        self.0.push(l);
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut w = self.clone();
        for l in &o.0 {
            w.push(l.clone());
        }
        w
    }

    pub fn reversed(&self) -> Self {
        Word::from_letters(self.0.iter().rev().cloned())
    }
}

impl<L: Letter> Ord for Word<L> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl<L: Letter> PartialOrd for Word<L> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<L: Letter> Debug for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<L: Letter> Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A finite linear combination of words with nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct NCPoly<L: Letter> {
    terms: BTreeMap<Word<L>, Scalar>,
}

/// Result of a homogeneity query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyWeight {
    Homogeneous(Weight),
    Inhomogeneous,
}

impl<L: Letter> Default for NCPoly<L> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<L: Letter> NCPoly<L> {
    pub fn zero() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Word::empty())
    }

    pub fn letter(l: L) -> Self {
        Self::term(Scalar::one(), Word::letter(l))
    }

    pub fn term(c: Scalar, w: Word<L>) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word<L>, Scalar)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word<L>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word<L>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word<L>) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (w, c) in &o.terms {
            p.add_term(w.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (w, c) in &o.terms {
            p.add_term(w.clone(), -c);
        }
        p
    }

    pub fn neg(&self) -> Self {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                p.add_term(w1.concat(w2), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn reverse(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())))
    }

    /// Multiplicative extension of `map`; with `bar_twist` the coefficients
    /// are bar-conjugated first, giving the semilinear extension.
    pub fn substitute<M: Letter, F>(&self, map: F, bar_twist: bool) -> Result<NCPoly<M>>
    where
        F: Fn(&L) -> Option<NCPoly<M>>,
    {
        let mut cache: BTreeMap<L, NCPoly<M>> = BTreeMap::new();
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(if bar_twist { c.bar() } else { c.clone() });
            for l in w.letters() {
                if !cache.contains_key(l) {
                    let img = map(l).ok_or_else(|| Error::MissingImage(l.to_string()))?;
                    cache.insert(l.clone(), img);
                }
                acc = acc.mul(&cache[l]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    /// The common weight of all words; the zero polynomial has weight 0.
    pub fn weight<F: Fn(&L) -> Weight>(&self, n: usize, wt: F) -> PolyWeight {
        let mut found: Option<Weight> = None;
        for w in self.terms.keys() {
            let mut acc = Weight::zero(n);
            for l in w.letters() {
                acc = &acc + &wt(l);
            }
            match &found {
                None => found = Some(acc),
                Some(f) if *f != acc => return PolyWeight::Inhomogeneous,
                _ => {}
            }
        }
        PolyWeight::Homogeneous(found.unwrap_or_else(|| Weight::zero(n)))
    }
}

impl<L: Letter> Debug for NCPoly<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<L: Letter> Display for NCPoly<L> {
    /// Parenthesized coefficients times words, in word order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if w.is_empty() {
                write!(f, "({})", c.pretty())?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "({})*{w}", c.pretty())?;
            }
        }
        Ok(())
    }
}

/// All words over `letters` (each with a nonzero nonnegative weight) whose
/// weights sum to `target`, in lexicographic order of letter sequences.
pub fn enumerate_words<L: Letter>(letters: &[(L, Weight)], target: &Weight) -> Vec<Word<L>> {
    let mut sorted: Vec<(L, Weight)> = letters.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::new();
    if !target.is_nonnegative() {
        return out;
    }
    let mut cur = Vec::new();
    fn rec<L: Letter>(letters: &[(L, Weight)], rem: &Weight, cur: &mut Vec<L>, out: &mut Vec<Word<L>>) {
        if rem.is_zero() {
            out.push(Word(cur.clone()));
            return;
        }
        for (l, w) in letters {
            let next = rem - w;
            if next.is_nonnegative() {
                cur.push(l.clone());
                rec(letters, &next, cur, out);
                cur.pop();
            }
        }
    }
    rec(&sorted, target, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
    enum T {
        X(u8),
        G(bool),
    }

    impl Display for T {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match self {
                T::X(i) => write!(f, "x{i}"),
                T::G(true) => write!(f, "g"),
                T::G(false) => write!(f, "g^-1"),
            }
        }
    }

    impl Letter for T {
        fn inverse(&self) -> Option<T> {
            match self {
                T::G(b) => Some(T::G(!b)),
                _ => None,
            }
        }
    }

    fn x(i: u8) -> NCPoly<T> {
        NCPoly::letter(T::X(i))
    }

    #[test]
    fn noncommutative_product() {
        assert_ne!(x(1).mul(&x(2)), x(2).mul(&x(1)));
        assert!(x(1).scale(&Scalar::zero()).is_zero());
    }

    #[test]
    fn inverse_letters_cancel() {
        let g = NCPoly::letter(T::G(true));
        let gi = NCPoly::letter(T::G(false));
        assert_eq!(g.mul(&gi), NCPoly::one());
        assert_eq!(x(1).mul(&g).mul(&gi).mul(&x(2)), x(1).mul(&x(2)));
    }

    #[test]
    fn reverse_words() {
        let p = x(1).mul(&x(2)).mul(&x(3));
        assert_eq!(p.reverse(), x(3).mul(&x(2)).mul(&x(1)));
        assert_eq!(p.reverse().reverse(), p);
    }

    #[test]
    fn substitution() {
        let p = x(1).mul(&x(2)).add(&x(2).scale(&Scalar::q()));
        let id = p.substitute(|l| Some(NCPoly::letter(*l)), false).unwrap();
        assert_eq!(id, p);
        let twisted = p.substitute(|l| Some(NCPoly::letter(*l)), true).unwrap();
        assert_eq!(twisted.coeff(&Word::letter(T::X(2))), Scalar::q_pow(-1));
        assert!(NCPoly::<T>::zero().substitute(|_| None::<NCPoly<T>>, false).unwrap().is_zero());
        assert!(p.substitute(|_| None::<NCPoly<T>>, false).is_err());
    }

    #[test]
    fn weights() {
        let wt = |l: &T| match l {
            T::X(i) => Weight::simple(2, *i as usize),
            T::G(_) => Weight::zero(2),
        };
        assert_eq!(x(0).mul(&x(1)).weight(2, wt), PolyWeight::Homogeneous(Weight(vec![1, 1])));
        assert_eq!(x(0).add(&NCPoly::one()).weight(2, wt), PolyWeight::Inhomogeneous);
        assert_eq!(NCPoly::<T>::one().weight(2, wt), PolyWeight::Homogeneous(Weight::zero(2)));
    }

    #[test]
    fn word_enumeration() {
        let letters = [(T::X(1), Weight::simple(2, 0)), (T::X(2), Weight::simple(2, 1))];
        let ws = enumerate_words(&letters, &Weight(vec![1, 1]));
        assert_eq!(ws.len(), 2);
        assert_eq!(ws[0].letters(), &[T::X(1), T::X(2)]);
        assert_eq!(enumerate_words(&letters, &Weight(vec![2, 1])).len(), 3);
        assert_eq!(enumerate_words(&letters, &Weight(vec![0, 0])), vec![Word::empty()]);
        assert!(enumerate_words(&letters, &Weight(vec![-1, 0])).is_empty());
    }
}
