//! Exact arithmetic in `Q(q)` and the quantum-number combinatorics built on it.
//!
//! [`Scalar`] is a canonically reduced rational function, so equality is
//! structural. [`ModularScalar`] is the image under an evaluation
//! homomorphism `q -> q_image` into a prime field, used for fast
//! probabilistic zero tests.

mod laurent;
mod modular;
pub(crate) mod poly;
mod rational;

pub use laurent::LaurentPoly;
pub use modular::{eval_mod, ModularScalar, DEFAULT_PRIME};
pub(crate) use modular::{inv_mod, mod_pow_signed, mul_mod};
pub use rational::Scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("bad sample, resample")]
    BadSample,
    #[error("quantum factorial of negative argument {0}")]
    NegativeFactorial(i64),
    #[error("negative length {0} in q-Pochhammer symbol")]
    NegativePochhammer(i64),
}

/// `bar(x)`: the field automorphism `q -> q^{-1}`.
pub fn bar(x: &Scalar) -> Scalar {
    x.bar()
}

/// Quantum integer `[n]_t` at `t = q^k`.
pub fn qint(n: i64, k: i64) -> Scalar {
    assert!(k > 0, "quantum integers need a positive power of q");
    let m = n.abs();
    let sign = n.signum();
    // [m]_t = t^{m-1} + t^{m-3} + ... + t^{1-m}
    let terms = (0..m).map(|j| (k * (m - 1 - 2 * j), sign));
    Scalar::from_laurent(LaurentPoly::from_terms(terms))
}

/// Quantum factorial `[m]_t^!` at `t = q^k`.
pub fn qfact(m: i64, k: i64) -> Result<Scalar, ScalarError> {
    if m < 0 {
        return Err(ScalarError::NegativeFactorial(m));
    }
    Ok((1..=m).fold(Scalar::one(), |acc, j| &acc * &qint(j, k)))
}

/// Quantum binomial `[n choose d]_t` at `t = q^k`; zero for `d < 0`.
pub fn qbinom(n: i64, d: i64, k: i64) -> Scalar {
    if d < 0 {
        return Scalar::zero();
    }
    let top = (0..d).fold(Scalar::one(), |acc, t| &acc * &qint(n - t, k));
    let bottom = qfact(d, k).expect("d >= 0");
    (&top / &bottom).expect("quantum factorials are nonzero")
}

/// q-Pochhammer symbol `(a; x)_n = (1 - a)(1 - a x) ... (1 - a x^{n-1})`.
pub fn pochhammer(a: &Scalar, x: &Scalar, n: i64) -> Result<Scalar, ScalarError> {
    if n < 0 {
        return Err(ScalarError::NegativePochhammer(n));
    }
    let one = Scalar::one();
    let mut acc = Scalar::one();
    let mut ax = a.clone();
    for _ in 0..n {
        acc = &acc * &(&one - &ax);
        ax = &ax * x;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> Scalar {
        Scalar::from_laurent(LaurentPoly::from_terms(t.iter().copied()))
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(qint(2, 1), lp(&[(1, 1), (-1, 1)]));
        assert_eq!(qint(0, 1), Scalar::zero());
        assert_eq!(qint(-3, 1), -qint(3, 1));
        assert_eq!(qint(2, 2), lp(&[(2, 1), (-2, 1)]));
        for n in 1..6 {
            assert_eq!(bar(&qint(n, 1)), qint(n, 1));
        }
    }

    #[test]
    fn quantum_binomials() {
        assert_eq!(qbinom(5, -1, 1), Scalar::zero());
        assert_eq!(qbinom(3, 1, 1), lp(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(qbinom(4, 0, 1), Scalar::one());
        for n in 0..7 {
            for d in 0..=n {
                assert_eq!(qbinom(n, d, 1), qbinom(n, n - d, 1));
                assert!(qbinom(n, d, 2).is_laurent());
            }
        }
        // binomial with negative top: [-2 choose 2] = [-2][-3]/[2]! = [3]
        assert_eq!(qbinom(-2, 2, 1), qint(3, 1));
    }

    #[test]
    fn factorial_rejects_negative() {
        assert_eq!(qfact(-1, 1), Err(ScalarError::NegativeFactorial(-1)));
        assert_eq!(qfact(0, 1), Ok(Scalar::one()));
    }

    #[test]
    fn pochhammer_values() {
        let qm2 = Scalar::q_pow(-2);
        assert_eq!(pochhammer(&Scalar::q(), &Scalar::from_int(7), 0).unwrap(), Scalar::one());
        let expect = &(&Scalar::one() - &Scalar::q_pow(-2)) * &(&Scalar::one() - &Scalar::q_pow(-4));
        assert_eq!(pochhammer(&qm2, &qm2, 2).unwrap(), expect);
        // (q;q^2)_2 = (1 - q)(1 - q^3), bar -> (1 - q^-1)(1 - q^-3)
        let p = pochhammer(&Scalar::q(), &Scalar::q_pow(2), 2).unwrap();
        let barred = &(&Scalar::one() - &Scalar::q_pow(-1)) * &(&Scalar::one() - &Scalar::q_pow(-3));
        assert_eq!(bar(&p), barred);
    }
}
