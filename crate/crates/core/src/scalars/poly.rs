//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending degree order and the vector is kept
//! trimmed: it is either empty (the zero polynomial) or its last entry is
//! nonzero. These helpers back the Laurent polynomial type and the
//! canonical-form gcd of rational functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type Dense = Vec<BigInt>;

pub(crate) fn trim(p: &mut Dense) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Gcd of the integer coefficients, always nonnegative. Zero for the zero polynomial.
pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Splits `p` into its content and primitive part, the latter with positive leading coefficient.
pub(crate) fn primitive_part(p: &[BigInt]) -> (BigInt, Dense) {
    if p.is_empty() {
        return (BigInt::zero(), Vec::new());
    }
    let mut c = content(p);
    if p.last().unwrap().is_negative() {
        c = -c;
    }
    if c.is_one() {
        return (c, p.to_vec());
    }
    let pp = p.iter().map(|x| x / &c).collect();
    (c.abs(), pp)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
pub(crate) fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Dense {
    debug_assert!(!b.is_empty());
    let mut r = a.to_vec();
    if a.len() < b.len() {
        return r;
    }
    let db = b.len() - 1;
    let lb = &b[db];
    let mut remaining = (a.len() - b.len() + 1) as u32;
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] -= &lr * bc;
        }
        trim(&mut r);
        remaining -= 1;
    }
    if remaining > 0 {
        let f = num_traits::pow(lb.clone(), remaining as usize);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Exact division over the integers; `None` if `b` does not divide `a` in `Z[x]`.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Dense> {
    assert!(!b.is_empty(), "division by the zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = &b[db];
    if b.len() == 1 {
        let mut out = Vec::with_capacity(a.len());
        for c in a {
            let (qt, rm) = c.div_rem(lb);
            if !rm.is_zero() {
                return None;
            }
            out.push(qt);
        }
        return Some(out);
    }
    let mut r = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (qt, rm) = top.div_rem(lb);
        if !rm.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] -= &qt * bc;
        }
        quot[k] = qt;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut quot);
    Some(quot)
}

/// Greatest common divisor in `Z[x]` via the subresultant remainder sequence.
///
/// The result includes the gcd of the contents and has positive leading
/// coefficient. `gcd(0, 0) = 0`.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> Dense {
    if a.is_empty() {
        return primitive_signed(b);
    }
    if b.is_empty() {
        return primitive_signed(a);
    }
    let (ca, mut u) = primitive_part(a);
    let (cb, mut v) = primitive_part(b);
    let d = ca.gcd(&cb);
    if u.len() < v.len() {
        std::mem::swap(&mut u, &mut v);
    }
    if v.len() == 1 {
        return vec![d];
    }
    if div_exact(&u, &v).is_some() {
        return v.into_iter().map(|c| c * &d).collect();
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = u.len() - v.len();
        let r = pseudo_rem(&u, &v);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![d];
        }
        u = v;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        v = r.into_iter().map(|c| c / &divisor).collect();
        g = u.last().unwrap().clone();
        if delta > 0 {
            h = num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1);
        }
    }
    let (_, pv) = primitive_part(&v);
    pv.into_iter().map(|c| c * &d).collect()
}

fn primitive_signed(p: &[BigInt]) -> Dense {
    if p.last().is_some_and(|c| c.is_negative()) {
        p.iter().map(|c| -c).collect()
    } else {
        p.to_vec()
    }
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Dense {
        let mut d: Dense = v.iter().map(|&c| BigInt::from(c)).collect();
        trim(&mut d);
        d
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (x^2 - 1)(x + 2) and (x - 1)(x^2 + 1)
        let a = mul(&p(&[-1, 0, 1]), &p(&[2, 1]));
        let b = mul(&p(&[-1, 1]), &p(&[1, 0, 1]));
        assert_eq!(gcd(&a, &b), p(&[-1, 1]));
    }

    #[test]
    fn gcd_keeps_common_content() {
        assert_eq!(gcd(&p(&[4, 4]), &p(&[6, 6])), p(&[2, 2]));
        assert_eq!(gcd(&p(&[3]), &p(&[1, 1])), p(&[1]));
    }

    #[test]
    fn gcd_with_nontrivial_remainder_sequence() {
        // Knuth's classic example: gcd is 1.
        let a = p(&[-5, 2, 8, -3, -3, 0, 1, 0, 1]);
        let b = p(&[21, -9, -4, 0, 5, 0, 3]);
        assert_eq!(gcd(&a, &b), p(&[1]));
        let f = p(&[1, 1, 1]);
        assert_eq!(gcd(&mul(&a, &f), &mul(&b, &f)), f);
    }

    #[test]
    fn exact_division() {
        let a = mul(&p(&[1, 2, 3]), &p(&[-1, 1]));
        assert_eq!(div_exact(&a, &p(&[-1, 1])), Some(p(&[1, 2, 3])));
        assert_eq!(div_exact(&a, &p(&[1, 1])), None);
        assert_eq!(div_exact(&p(&[2, 4]), &p(&[2])), Some(p(&[1, 2])));
        assert_eq!(div_exact(&p(&[3, 4]), &p(&[2])), None);
    }

    #[test]
    fn pseudo_remainder_is_multiple_of_divisor_mod() {
        let a = p(&[1, 0, 0, 1]);
        let b = p(&[1, 2]);
        // lc(b)^3 * a(-1/2) = 8 * (1 - 1/8) = 7
        assert_eq!(pseudo_rem(&a, &b), p(&[7]));
    }
}
