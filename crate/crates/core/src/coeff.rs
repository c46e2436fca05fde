//! Coefficient systems the reduction engine can run over: exact `Q(q)` or a
//! prime field with `q` specialized to a sample point.

use std::fmt::Debug;
use std::hash::Hash;

use crate::scalars::{self, LaurentPoly, Scalar, ScalarError};

pub trait Coefficients: Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn q_pow(&self, k: i64) -> Self::Elem;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem, ScalarError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn mul_q_pow(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        self.mul(a, &self.q_pow(k))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// Multipliers `(s, t)` so that `s * entry - t * pivot_lead == 0`.
    fn elimination_multipliers(&self, pivot_lead: &Self::Elem, entry: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// Rescales an echelon row by a unit so its entries stay small.
    fn normalize_row(&self, row: &mut [Self::Elem]);

    /// Serialization hook for persisted caches; `None` when not supported.
    fn to_text(&self, _a: &Self::Elem) -> Option<String> {
        None
    }

    fn from_text(&self, _s: &str) -> Option<Self::Elem> {
        None
    }

    /// Identifies the coefficient system in cache keys.
    fn tag(&self) -> String;
}

/// Exact arithmetic in `Q(q)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Coefficients for Exact {
    type Elem = Scalar;

    fn zero(&self) -> Scalar {
        Scalar::zero()
    }
    fn one(&self) -> Scalar {
        Scalar::one()
    }
    fn from_int(&self, n: i64) -> Scalar {
        Scalar::from_int(n)
    }
    fn q_pow(&self, k: i64) -> Scalar {
        Scalar::q_pow(k)
    }
    fn from_scalar(&self, s: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(s.clone())
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a - b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        -a
    }
    fn inv(&self, a: &Scalar) -> Option<Scalar> {
        a.inv().ok()
    }
    fn mul_q_pow(&self, a: &Scalar, k: i64) -> Scalar {
        a.mul_q_pow(k)
    }

    // Fraction-free step: rows carry Laurent polynomial entries, so divide
    // both multipliers by their gcd instead of dividing by the pivot.
    fn elimination_multipliers(&self, pivot_lead: &Scalar, entry: &Scalar) -> (Scalar, Scalar) {
        if pivot_lead.is_laurent() && entry.is_laurent() {
            let (a, b) = (pivot_lead.numerator(), entry.numerator());
            let g = a.gcd(b);
            // q-power units: strip the smaller shift as well
            let shift = a.low_exp().min(b.low_exp());
            let a2 = a.shift(-shift).div_exact(&g).expect("gcd divides");
            let b2 = b.shift(-shift).div_exact(&g).expect("gcd divides");
            (Scalar::from_laurent(a2), Scalar::from_laurent(b2))
        } else {
            (pivot_lead.clone(), entry.clone())
        }
    }

    fn normalize_row(&self, row: &mut [Scalar]) {
        // clear denominators, then divide out the polynomial content
        let mut den = LaurentPoly::one();
        for x in row.iter() {
            if !x.is_laurent() {
                let g = den.gcd(x.denominator());
                den = &den * &x.denominator().div_exact(&g).unwrap();
            }
        }
        if !den.is_one() {
            let d = Scalar::from_laurent(den);
            for x in row.iter_mut() {
                *x = &*x * &d;
            }
        }
        let mut g = LaurentPoly::zero();
        let mut low = i64::MAX;
        for x in row.iter() {
            if x.is_zero() {
                continue;
            }
            low = low.min(x.numerator().low_exp());
            g = if g.is_zero() { x.numerator().shift(-x.numerator().low_exp()) } else { g.gcd(x.numerator()) };
            if g.is_one() {
                // keep scanning for the minimal exponent only
                continue;
            }
        }
        if g.is_zero() {
            return;
        }
        let lead_negative = row
            .iter()
            .rev()
            .find(|x| !x.is_zero())
            .map(|x| x.numerator().leading_coeff().unwrap() < &num_bigint::BigInt::from(0))
            .unwrap_or(false);
        let mut g = g.shift(low);
        if lead_negative {
            g = -g;
        }
        if g.is_one() {
            return;
        }
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = Scalar::from_laurent(x.numerator().div_exact(&g).expect("content divides"));
            }
        }
    }

    fn to_text(&self, a: &Scalar) -> Option<String> {
        Some(a.to_canonical_string())
    }

    fn from_text(&self, s: &str) -> Option<Scalar> {
        Scalar::parse_canonical(s)
    }

    fn tag(&self) -> String {
        "exact".into()
    }
}

/// `F_p` with `q` specialized to `q_image`.
#[derive(Clone, Copy, Debug)]
pub struct ModP {
    pub prime: u64,
    pub q_image: u64,
}

impl ModP {
    pub fn new(prime: u64, q_image: u64) -> Self {
        ModP { prime, q_image: q_image % prime }
    }
}

impl Coefficients for ModP {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.prime as i128) as u64
    }
    fn q_pow(&self, k: i64) -> u64 {
        scalars::mod_pow_signed(self.q_image, k, self.prime)
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u64, ScalarError> {
        scalars::eval_mod(s, self.q_image, self.prime).map(|m| m.value)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.prime as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.prime as u128 - *b as u128) % self.prime as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        scalars::mul_mod(*a, *b, self.prime)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.prime - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| scalars::inv_mod(*a, self.prime))
    }
    fn elimination_multipliers(&self, pivot_lead: &u64, entry: &u64) -> (u64, u64) {
        (1, self.mul(entry, &self.inv(pivot_lead).expect("nonzero pivot")))
    }
    fn normalize_row(&self, row: &mut [u64]) {
        if let Some(lead) = row.iter().rev().find(|x| **x != 0).copied() {
            let inv = self.inv(&lead).unwrap();
            for x in row.iter_mut() {
                *x = self.mul(x, &inv);
            }
        }
    }
    fn tag(&self) -> String {
        format!("mod{}@{}", self.prime, self.q_image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_row_normalization_removes_content() {
        let two_q = Scalar::from_laurent(LaurentPoly::from_terms([(1, 2)]));
        let four = Scalar::from_int(4);
        let mut row = vec![two_q, Scalar::zero(), four];
        Exact.normalize_row(&mut row);
        assert_eq!(row[0], Scalar::q());
        assert_eq!(row[2], Scalar::from_int(2));
    }

    #[test]
    fn modular_field_ops() {
        let f = ModP::new(101, 2);
        assert_eq!(f.q_pow(-1), 51);
        assert_eq!(f.add(&f.q_pow(1), &f.q_pow(-1)), 53);
        assert_eq!(f.mul(&f.inv(&7).unwrap(), &7), 1);
        assert_eq!(f.from_int(-1), 100);
    }
}
