use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;
use super::ScalarError;

/// An element of `Q(q)`, kept in canonical form.
///
/// Canonical form: numerator and denominator share no nonunit factor in
/// `Z[q, q^{-1}]` (integer content included), the denominator has lowest
/// exponent 0 and a positive lowest coefficient, and zero is `0/1`. Equality
/// and hashing are therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { num: LaurentPoly::constant(n), den: LaurentPoly::one() }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar { num: LaurentPoly::monomial(n, 0), den: LaurentPoly::one() }
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Scalar { num: LaurentPoly::q_pow(k), den: LaurentPoly::one() }
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        Scalar { num: p, den: LaurentPoly::one() }
    }

    /// Brings `num / den` to canonical form.
    pub fn normalize(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let shift = num.low_exp() - den.low_exp();
        let mut n = num.shift(-num.low_exp());
        let mut d = den.shift(-den.low_exp());
        if !d.is_one() {
            let g = if d.is_monomial() {
                // constant denominator: only integer content can cancel
                LaurentPoly::constant(num_integer::Integer::gcd(&n.content(), d.lowest_coeff().unwrap()))
            } else if n.is_monomial() {
                LaurentPoly::constant(num_integer::Integer::gcd(n.lowest_coeff().unwrap(), &d.content()))
            } else {
                n.gcd(&d)
            };
            if !g.is_one() {
                n = n.div_exact(&g).expect("gcd divides numerator");
                d = d.div_exact(&g).expect("gcd divides denominator");
            }
            if d.lowest_coeff().unwrap().is_negative() {
                n = -n;
                d = -d;
            }
        }
        Ok(Scalar { num: n.shift(shift), den: d })
    }

    fn from_parts_unchecked(num: LaurentPoly, den: LaurentPoly) -> Self {
        Self::normalize(num, den).expect("nonzero denominator")
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn mul_q_pow(&self, k: i64) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        Scalar { num: self.num.shift(k), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Self::normalize(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// The image under `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        Self::from_parts_unchecked(self.num.bar(), self.den.bar())
    }

    /// Canonical text form: `num:[(e,c),...];den:[(e,c),...]`.
    pub fn to_canonical_string(&self) -> String {
        format!("num:{};den:{}", self.num.to_term_list(), self.den.to_term_list())
    }

    /// Parses [`Scalar::to_canonical_string`] output; rejects non-canonical input.
    pub fn parse_canonical(s: &str) -> Option<Self> {
        let (n, d) = s.trim().split_once(";den:")?;
        let n = n.strip_prefix("num:")?;
        let num = LaurentPoly::parse_term_list(n)?;
        let den = LaurentPoly::parse_term_list(d)?;
        let out = Self::normalize(num.clone(), den.clone()).ok()?;
        (out.num == num && out.den == den).then_some(out)
    }

    /// Expression-language form: `q + q^-1`, `(q^2 - 1)/(q^2 + 1)`.
    pub fn pretty(&self) -> String {
        if self.den.is_one() {
            self.num.pretty()
        } else {
            format!("({})/({})", self.num.pretty(), self.den.pretty())
        }
    }

    /// True if the value is an integer constant (possibly zero); returns it.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        (self.den.is_one() && self.num.is_monomial() && self.num.low_exp() == 0)
            .then(|| self.num.lowest_coeff().unwrap().clone())
    }

    fn add_signed(&self, rhs: &Scalar, negate: bool) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -rhs } else { rhs.clone() };
        }
        let combine = |a: &LaurentPoly, b: &LaurentPoly| if negate { a - b } else { a + b };
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar { num: combine(&self.num, &rhs.num), den: LaurentPoly::one() };
        }
        if self.den == rhs.den {
            return Self::from_parts_unchecked(combine(&self.num, &rhs.num), self.den.clone());
        }
        if self.den.is_one() {
            return Self::from_parts_unchecked(combine(&(&self.num * &rhs.den), &rhs.num), rhs.den.clone());
        }
        if rhs.den.is_one() {
            return Self::from_parts_unchecked(combine(&self.num, &(&rhs.num * &self.den)), self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let (d1, d2) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (self.den.div_exact(&g).unwrap(), rhs.den.div_exact(&g).unwrap())
        };
        let num = combine(&(&self.num * &d2), &(&rhs.num * &d1));
        Self::from_parts_unchecked(num, &self.den * &d2)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_signed(rhs, false)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_signed(rhs, true)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar { num: &self.num * &rhs.num, den: LaurentPoly::one() };
        }
        if self.num.is_monomial() && self.den.is_one() && self.num.lowest_coeff().unwrap().is_one() {
            return rhs.mul_q_pow(self.num.low_exp());
        }
        if rhs.num.is_monomial() && rhs.den.is_one() && rhs.num.lowest_coeff().unwrap().is_one() {
            return self.mul_q_pow(rhs.num.low_exp());
        }
        // cross-cancel before multiplying to keep the final gcd small
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        let num = &n1 * &n2;
        let mut den = &d1 * &d2;
        let mut num = num;
        if den.lowest_coeff().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        let shift = den.low_exp();
        Scalar { num: num.shift(-shift), den: den.shift(-shift) }
    }
}

fn cancel(n: &LaurentPoly, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = if d.is_monomial() || n.is_monomial() {
        LaurentPoly::constant(num_integer::Integer::gcd(&n.content(), &d.content()))
    } else {
        n.gcd(d)
    };
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
    }
}

impl Div for &Scalar {
    type Output = Result<Scalar, ScalarError>;
    fn div(self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.inv()?)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}
