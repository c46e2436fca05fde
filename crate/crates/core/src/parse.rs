//! Expression language for `Ũ^ı` (`B1`, `k1`, `k1^-1`) and `Ũ` (`F1`, `E1`,
//! `K1`, `Kp1` and inverses), with rational scalars in `q`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exp)?
//! exp    := int | '-' int | '(' ['-'] int ')'
//! atom   := int | 'q' | B<i> | k<i> | iB<i>[p] | F<i> | E<i> | K<i> | Kp<i> | '(' expr ')'
//! ```
//! `B<i>^(m)` is the divided power, `iB<i>[p]^(m)` the ıdivided power of parity `p`.

use std::fmt;

use crate::cartan::CartanDatum;
use crate::iqg::{divided_power, idivided_power, IExpr, ILetter};
use crate::ncalg::{Letter, NCPoly, Word};
use crate::scalars::Scalar;
use crate::udouble::{UPoly, ULetter};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub expected: Vec<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Sym {
    I(ILetter),
    U(ULetter),
}

impl Letter for Sym {
    fn inverse(&self) -> Option<Self> {
        match self {
            Sym::I(l) => l.inverse().map(Sym::I),
            Sym::U(l) => l.inverse().map(Sym::U),
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::I(l) => write!(f, "{l}"),
            Sym::U(l) => write!(f, "{l}"),
        }
    }
}

type P = NCPoly<Sym>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn show(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Op(c) => c.to_string(),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| err(start, &[], "integer too large"))?;
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()[]".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(err(i, &[], &format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

fn err(pos: usize, expected: &[&str], msg: &str) -> ParseError {
    ParseError { column: pos + 1, expected: expected.iter().map(|s| s.to_string()).collect(), message: msg.to_string() }
}

const ATOM_START: &[&str] = &["integer", "q", "B<i>", "k<i>", "iB<i>[p]", "F<i>", "E<i>", "K<i>", "Kp<i>", "(", "-"];

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    datum: &'a CartanDatum,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_op(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            let e = c.to_string();
            Err(err(self.at(), &[&e], &format!("unexpected {}", self.peek().show())))
        }
    }

    fn expr(&mut self) -> Result<P, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<P, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Op('/') => {
                    self.bump();
                    let at = self.at();
                    let d = self.unary()?;
                    let c = constant(&d).ok_or_else(|| err(at, &[], "divisor must be a scalar"))?;
                    let inv = c.inv().map_err(|_| err(at, &[], "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<P, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = if *self.peek() == Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Int(n) => Ok(if neg { -n } else { n }),
            t => Err(err(self.toks[self.pos.saturating_sub(1)].1, &["integer"], &format!("unexpected {}", t.show()))),
        }
    }

    /// Returns the exponent and whether it was parenthesized.
    fn exponent(&mut self) -> Result<(i64, bool), ParseError> {
        if *self.peek() == Tok::Op('(') {
            self.bump();
            let n = self.int()?;
            self.expect_op(')')?;
            Ok((n, true))
        } else {
            Ok((self.int()?, false))
        }
    }

    fn index(&self, s: &str, prefix: &str, at: usize) -> Result<usize, ParseError> {
        let digits = &s[prefix.len()..];
        let i: usize = digits.parse().map_err(|_| err(at, &["index"], &format!("missing index in '{s}'")))?;
        if i == 0 || i > self.datum.rank() {
            return Err(err(at, &[], &format!("unknown index {i} (rank {})", self.datum.rank())));
        }
        Ok(i - 1)
    }

    fn power(&mut self) -> Result<P, ParseError> {
        let at = self.at();
        let tok = self.bump();
        let (base, b_index) = match &tok {
            Tok::Int(n) => (P::constant(Scalar::from_int(*n)), None),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect_op(')')?;
                (e, None)
            }
            Tok::Ident(s) => self.ident(s, at)?,
            t => return Err(err(at, ATOM_START, &format!("unexpected {}", t.show()))),
        };
        if let Some(Some(p)) = b_index.map(|(_, p)| p) {
            // iB<i>[p] must carry ^(m)
            let i = b_index.unwrap().0;
            self.expect_op('^')?;
            let eat = self.at();
            let (m, paren) = self.exponent()?;
            if !paren || m < 0 {
                return Err(err(eat, &["(m) with m ≥ 0"], "ıdivided power needs a parenthesized nonnegative exponent"));
            }
            let x = idivided_power(self.datum, i, m, p).map_err(|e| err(at, &[], &e.to_string()))?;
            return Ok(lift(&x));
        }
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let eat = self.at();
        let (n, paren) = self.exponent()?;
        if let (Some((i, None)), true) = (b_index, paren) {
            if n < 0 {
                return Err(err(eat, &[], "divided power with m < 0"));
            }
            return Ok(lift(&divided_power(self.datum, i, n)));
        }
        if n >= 0 {
            return Ok(base.pow(n as usize));
        }
        if let Some(c) = constant(&base) {
            let v = c.pow(n).map_err(|_| err(eat, &[], "negative power of zero"))?;
            return Ok(P::constant(v));
        }
        let inv = single_letter(&base).and_then(|l| l.inverse()).ok_or_else(|| err(eat, &[], "negative power of a non-invertible expression"))?;
        Ok(P::letter(inv).pow(n.unsigned_abs() as usize))
    }

    /// Atom for an identifier; `Some((i, parity))` marks `B<i>` / `iB<i>[p]`.
    #[allow(clippy::type_complexity)]
    fn ident(&mut self, s: &str, at: usize) -> Result<(P, Option<(usize, Option<u8>)>), ParseError> {
        if s == "q" {
            return Ok((P::constant(Scalar::q()), None));
        }
        let head: String = s.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
        let i = |p: &Self| p.index(s, &head, at);
        let u = |l: ULetter| P::letter(Sym::U(l));
        Ok(match head.as_str() {
            "B" => {
                let i = i(self)?;
                (P::letter(Sym::I(ILetter::B(i as u8))), Some((i, None)))
            }
            "iB" => {
                let i = i(self)?;
                self.expect_op('[')?;
                let pat = self.at();
                let p = self.int()?;
                if p != 0 && p != 1 {
                    return Err(err(pat, &["0", "1"], "parity must be 0 or 1"));
                }
                self.expect_op(']')?;
                (P::zero(), Some((i, Some(p as u8))))
            }
            "k" => (P::letter(Sym::I(ILetter::K(i(self)? as u8, false))), None),
            "F" => (u(ULetter::F(i(self)? as u8)), None),
            "E" => (u(ULetter::E(i(self)? as u8)), None),
            "K" => (u(ULetter::K(i(self)? as u8, false)), None),
            "Kp" => (u(ULetter::Kp(i(self)? as u8, false)), None),
            _ => return Err(err(at, ATOM_START, &format!("unknown symbol '{s}'"))),
        })
    }
}

fn constant(p: &P) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero());
    }
    (p.len() == 1 && p.degree() == 0).then(|| p.coeff(&Word::empty()))
}

fn single_letter(p: &P) -> Option<Sym> {
    let (w, c) = p.terms().next()?;
    (p.len() == 1 && c.is_one() && w.len() == 1).then(|| w.letters()[0])
}

fn lift(x: &IExpr) -> P {
    x.substitute(|l| Some(P::letter(Sym::I(*l))), false).expect("total map")
}

fn parse_sym(datum: &CartanDatum, text: &str) -> Result<P, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, datum };
    let x = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(err(p.at(), &["+", "-", "*", "/", "^", "end of input"], &format!("unexpected {}", p.peek().show())));
    }
    Ok(x)
}

/// Parses an expression in `B_i`, `k_i^{±1}` and scalars.
pub fn parse_iexpr(datum: &CartanDatum, text: &str) -> Result<IExpr, ParseError> {
    let p = parse_sym(datum, text)?;
    p.substitute(
        |s| match s {
            Sym::I(l) => Some(IExpr::letter(*l)),
            Sym::U(_) => None,
        },
        false,
    )
    .map_err(|_| err(0, &[], "Ũ letters (E, F, K, Kp) are not allowed in a Ũ^ı expression"))
}

/// Parses an expression in the generators of `Ũ`; `B_i` and `k_i` are replaced by their images.
pub fn parse_upoly(datum: &CartanDatum, text: &str) -> Result<UPoly, ParseError> {
    let p = parse_sym(datum, text)?;
    let ul = |l: ULetter| UPoly::letter(l);
    Ok(p.substitute(
        |s| {
            Some(match *s {
                Sym::U(l) => ul(l),
                Sym::I(ILetter::B(i)) => {
                    let t = datum.tau(i as usize) as u8;
                    ul(ULetter::F(i)).add(&ul(ULetter::E(t)).mul(&ul(ULetter::Kp(i, false))))
                }
                Sym::I(ILetter::K(i, inv)) => {
                    let t = datum.tau(i as usize) as u8;
                    ul(ULetter::K(i, inv)).mul(&ul(ULetter::Kp(t, inv)))
                }
            })
        },
        false,
    )
    .expect("total map"))
}

/// True if the text mentions a generator of `Ũ` outside `Ũ^ı`.
pub fn mentions_u_letters(datum: &CartanDatum, text: &str) -> Result<bool, ParseError> {
    let p = parse_sym(datum, text)?;
    let found = p.terms().any(|(w, _)| w.letters().iter().any(|l| matches!(l, Sym::U(_))));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::preset;
    use crate::iqg::{b, k, kinv};
    use crate::scalars::qint;

    fn d() -> CartanDatum {
        preset("a3-tau13").unwrap()
    }

    #[test]
    fn commutator() {
        let x = parse_iexpr(&d(), "B1*B2 - B2*B1").unwrap();
        assert_eq!(x, b(0).mul(&b(1)).sub(&b(1).mul(&b(0))));
    }

    #[test]
    fn divided_power_sugar() {
        let x = parse_iexpr(&d(), "B1^(2)").unwrap();
        assert_eq!(x, b(0).mul(&b(0)).scale(&qint(2, 1).inv().unwrap()));
        assert_eq!(parse_iexpr(&d(), "B1^2").unwrap(), b(0).mul(&b(0)));
        let y = parse_iexpr(&d(), "iB2[1]^(2)").unwrap();
        assert_eq!(y, idivided_power(&d(), 1, 2, 1).unwrap());
        assert!(parse_iexpr(&d(), "B1^(-1)").is_err());
    }

    #[test]
    fn scalars_and_inverses() {
        let x = parse_iexpr(&d(), "(q - q^-1)^-1 * (k1 - k2)").unwrap();
        let c = (&Scalar::q() - &Scalar::q_pow(-1)).inv().unwrap();
        assert_eq!(x, k(0).sub(&k(1)).scale(&c));
        assert_eq!(parse_iexpr(&d(), "k1^-1*k1").unwrap(), IExpr::one());
        assert_eq!(parse_iexpr(&d(), "k3^-2").unwrap(), kinv(2).mul(&kinv(2)));
        assert_eq!(parse_iexpr(&d(), "B1/(q+1)").unwrap(), b(0).scale(&(&Scalar::q() + &Scalar::one()).inv().unwrap()));
        assert_eq!(parse_iexpr(&d(), "-q^2*B1").unwrap(), b(0).scale(&-&Scalar::q_pow(2)));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_iexpr(&d(), "B1 * * B2").unwrap_err();
        assert_eq!(e.column, 6);
        assert!(e.expected.contains(&"B<i>".to_string()));
        let e = parse_iexpr(&d(), "B9").unwrap_err();
        assert!(e.message.contains("unknown index"));
        assert!(parse_iexpr(&d(), "(B1").is_err());
        assert!(parse_iexpr(&d(), "B1^-1").is_err());
        assert!(parse_iexpr(&d(), "B1/B2").is_err());
        assert!(parse_iexpr(&d(), "F1").is_err());
        assert!(parse_iexpr(&d(), "x1").is_err());
    }

    #[test]
    fn print_round_trip() {
        let x = b(0).mul(&kinv(2)).scale(&(&Scalar::q_pow(3) - &Scalar::one())).add(&b(1).mul(&b(0)).scale(&(&Scalar::one() / &qint(3, 1)).unwrap()));
        assert_eq!(parse_iexpr(&d(), &x.to_string()).unwrap(), x);
    }

    #[test]
    fn u_letters() {
        let p = parse_upoly(&d(), "E1*F1 - F1*E1 - (K1 - Kp1)/(q - q^-1)").unwrap();
        let eng = crate::udouble::exact_engine(&d());
        assert!(eng.is_zero(&p).unwrap());
        let u = eng.reduce(&parse_upoly(&d(), "E2*F1*K3^-1").unwrap()).unwrap();
        assert_eq!(eng.reduce(&parse_upoly(&d(), &u.to_expr_string()).unwrap()).unwrap(), u);
        assert_eq!(parse_upoly(&d(), &u.to_expr_string()).unwrap(), u.to_poly());
    }
}
