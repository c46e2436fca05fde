//! Zero test for the free half through Lusztig's bilinear form.
//!
//! The form is normalized so `(θ_i, θ_i) = 1`; the true form differs by the
//! nonzero factor `∏ (1 - q_i^{-2})^{-μ_i}`, so both have the same radical.
//! With `r_j` the component of the twisted coproduct ending in `θ_j`,
//! `(x, y θ_j) = (r_j x, y)`, and
//! `r_j(w) = Σ_{p : w_p = j} q^{(α_j, wt(w_{p+1..}))} w with position p removed`.

use std::collections::BTreeMap;

use super::basis::{weight_of_word, OneWord};
use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::scalars::Scalar;

type Poly = BTreeMap<OneWord, Scalar>;

fn add_to(p: &mut Poly, w: OneWord, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let s = match p.get(&w) {
        Some(a) => a + &c,
        None => c,
    };
    if s.is_zero() {
        p.remove(&w);
    } else {
        p.insert(w, s);
    }
}

fn r_j(datum: &CartanDatum, j: u8, x: &Poly) -> Poly {
    let mut out = Poly::new();
    for (w, c) in x {
        // (α_j, weight of the suffix), accumulated right to left
        let mut suffix = 0i64;
        for p in (0..w.len()).rev() {
            if w[p] == j {
                let mut v = w.clone();
                v.remove(p);
                add_to(&mut out, v, c.mul_q_pow(suffix));
            }
            suffix += datum.pairing(j as usize, w[p] as usize);
        }
    }
    out
}

fn in_radical(datum: &CartanDatum, x: &Poly, rem: &mut [i64]) -> bool {
    if x.is_empty() {
        return true;
    }
    if rem.iter().all(|r| *r == 0) {
        return false;
    }
    for j in 0..rem.len() {
        if rem[j] == 0 {
            continue;
        }
        let y = r_j(datum, j as u8, x);
        rem[j] -= 1;
        let ok = in_radical(datum, &y, rem);
        rem[j] += 1;
        if !ok {
            return false;
        }
    }
    true
}

/// True iff the homogeneous one-sign polynomial pairs to zero with every word
/// of its weight, i.e. it vanishes in `U^±`.
pub fn form_radical_oracle(datum: &CartanDatum, poly: &[(OneWord, Scalar)], weight: &[i64]) -> Result<bool> {
    let n = datum.rank();
    let mut x = Poly::new();
    for (w, c) in poly {
        if weight_of_word(n, w) != weight {
            return Err(Error::InvalidParameter("inhomogeneous input".to_string()));
        }
        add_to(&mut x, w.clone(), c.clone());
    }
    let mut rem = weight.to_vec();
    Ok(in_radical(datum, &x, &mut rem))
}

/// The normalized pairing of two words.
pub fn form_matrix_entry(datum: &CartanDatum, x: &[u8], y: &[u8]) -> Scalar {
    let mut p = Poly::new();
    p.insert(x.to_vec(), Scalar::one());
    for &j in y.iter().rev() {
        p = r_j(datum, j, &p);
    }
    p.get(&Vec::new()).cloned().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::preset;
    use crate::scalars::qint;

    #[test]
    fn single_letter_is_not_radical() {
        let d = preset("a2-swap").unwrap();
        assert!(!form_radical_oracle(&d, &[(vec![0], Scalar::one())], &[1, 0]).unwrap());
        assert_eq!(form_matrix_entry(&d, &[0], &[0]), Scalar::one());
        assert!(form_matrix_entry(&d, &[0], &[1]).is_zero());
    }

    #[test]
    fn serre_element_is_radical() {
        let d = preset("a2-swap").unwrap();
        let p = vec![(vec![0, 0, 1], Scalar::one()), (vec![0, 1, 0], -qint(2, 1)), (vec![1, 0, 0], Scalar::one())];
        assert!(form_radical_oracle(&d, &p, &[2, 1]).unwrap());
        let q = vec![(vec![0, 0, 1], Scalar::one()), (vec![1, 0, 0], Scalar::one())];
        assert!(!form_radical_oracle(&d, &q, &[2, 1]).unwrap());
    }

    #[test]
    fn inhomogeneous_is_rejected() {
        let d = preset("a2-swap").unwrap();
        assert!(form_radical_oracle(&d, &[(vec![0], Scalar::one())], &[0, 1]).is_err());
    }

    #[test]
    fn form_is_symmetric() {
        let d = preset("a3-tau13").unwrap();
        let words = crate::udouble::words_of_weight(&[1, 2, 1]);
        for x in &words {
            for y in &words {
                assert_eq!(form_matrix_entry(&d, x, y), form_matrix_entry(&d, y, x));
            }
        }
    }
}
