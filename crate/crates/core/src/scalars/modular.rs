use num_bigint::BigInt;
use num_traits::Signed;

use super::{Scalar, ScalarError};

/// The Mersenne prime `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

/// Image of a [`Scalar`] in `F_p` under `q -> q_image`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModularScalar {
    pub value: u64,
    pub prime: u64,
    pub q_image: u64,
}

impl ModularScalar {
    pub fn new(value: u64, prime: u64, q_image: u64) -> Self {
        ModularScalar { value: value % prime, prime, q_image }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Self::new((self.value as u128 + o.value as u128).rem_euclid(self.prime as u128) as u64, self.prime, self.q_image)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        Self::new(mul_mod(self.value, o.value, self.prime), self.prime, self.q_image)
    }

    fn check(&self, o: &Self) {
        assert!(self.prime == o.prime && self.q_image == o.q_image, "mixed evaluation points");
    }
}

/// Evaluates `x` at `q = q_image` modulo `prime`.
pub fn eval_mod(x: &Scalar, q_image: u64, prime: u64) -> Result<ModularScalar, ScalarError> {
    let q0 = q_image % prime;
    if q0 == 0 {
        return Err(ScalarError::BadSample);
    }
    let d = x.denominator().eval_mod(q0, prime);
    if d == 0 {
        return Err(ScalarError::BadSample);
    }
    let n = x.numerator().eval_mod(q0, prime);
    Ok(ModularScalar::new(mul_mod(n, inv_mod(d, prime), prime), prime, q0))
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse by Fermat; `p` must be prime and `a` nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub(crate) fn mod_pow_signed(x: u64, e: i64, p: u64) -> u64 {
    if e >= 0 {
        pow_mod(x, e as u64, p)
    } else {
        inv_mod(pow_mod(x, e.unsigned_abs(), p), p)
    }
}

pub(crate) fn reduce_bigint(c: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = c % &m;
    let r = if r.is_negative() { r + m } else { r };
    u64::try_from(r).expect("residue fits in u64")
}
