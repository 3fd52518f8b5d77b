//! Text format for polynomials: a sum of terms `c * x1^a1 * ... * xn^an`.
//!
//! Coefficients are integers, rationals `p/q`, decimals, or complex pairs
//! `(re,im)` of those. Exact polynomials print their rationals verbatim and
//! parse back bit-exactly; numeric ones print `(re,im)` pairs in `{:.16e}`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::ExactCoeff;
use super::poly::{ExactPoly, Exponents, MultiPoly, NumericPoly};
use crate::error::{Error, Result};

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &Exponents) -> fmt::Result {
    let mut first = true;
    for (i, &a) in e.0.iter().enumerate() {
        if a == 0 {
            continue;
        }
        if !first {
            write!(f, " * ")?;
        }
        first = false;
        if a == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, a)?;
        }
    }
    Ok(())
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for MultiPoly<ExactCoeff> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let constant = e.degree() == 0;
            if c.im.is_zero() {
                let neg = c.re.is_negative();
                match (idx, neg) {
                    (0, true) => write!(f, "-")?,
                    (0, false) => {}
                    (_, true) => write!(f, " - ")?,
                    (_, false) => write!(f, " + ")?,
                }
                let mag = c.re.abs();
                if constant {
                    write_rational(f, &mag)?;
                } else {
                    if !mag.is_one() {
                        write_rational(f, &mag)?;
                        write!(f, " * ")?;
                    }
                    write_monomial(f, e)?;
                }
            } else {
                if idx > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "(")?;
                write_rational(f, &c.re)?;
                write!(f, ",")?;
                write_rational(f, &c.im)?;
                write!(f, ")")?;
                if !constant {
                    write!(f, " * ")?;
                    write_monomial(f, e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly<Complex64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.16e},{:.16e})", c.re, c.im)?;
            if e.degree() > 0 {
                write!(f, " * ")?;
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

/// A coefficient as read from text, before conversion to a field.
#[derive(Clone, Debug)]
struct RawNumber {
    text: String,
}

impl RawNumber {
    fn exact(&self, position: usize) -> Result<BigRational> {
        parse_rational(&self.text).ok_or_else(|| Error::Parse {
            position,
            message: format!("invalid number '{}'", self.text),
        })
    }

    fn numeric(&self, position: usize) -> Result<f64> {
        let bad = || Error::Parse {
            position,
            message: format!("invalid number '{}'", self.text),
        };
        match self.text.split_once('/') {
            Some((a, b)) => {
                let a: f64 = a.parse().map_err(|_| bad())?;
                let b: f64 = b.parse().map_err(|_| bad())?;
                Ok(a / b)
            }
            None => self.text.parse().map_err(|_| bad()),
        }
    }
}

/// Exact value of a decimal (`-1.25e-3`) or fraction (`7/3`) literal.
fn parse_rational(text: &str) -> Option<BigRational> {
    if let Some((a, b)) = text.split_once('/') {
        let a = parse_rational(a)?;
        let b = parse_rational(b)?;
        if b.is_zero() {
            return None;
        }
        return Some(a / b);
    }
    let (neg, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(digits);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

#[derive(Clone, Debug)]
enum RawCoeff {
    Real(RawNumber),
    Complex(RawNumber, RawNumber),
}

struct RawTerm {
    position: usize,
    negate: bool,
    coeff: Option<RawCoeff>,
    exponents: Vec<u32>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    /// `[sign] digits [. digits] [e [sign] digits] [/ digits]`
    fn number(&mut self) -> Result<RawNumber> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let int = self.digits().len();
        let mut frac = 0;
        if self.eat(b'.') {
            frac = self.digits().len();
        }
        if int + frac == 0 {
            self.pos = start;
            return self.err("expected a number");
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits().is_empty() {
                return self.err("expected exponent digits");
            }
        }
        let save = self.pos;
        self.skip_ws();
        if self.eat(b'/') {
            self.skip_ws();
            let den_start = self.pos;
            let den = self.digits();
            if den.is_empty() {
                return self.err("expected denominator digits");
            }
            if den.bytes().all(|b| b == b'0') {
                self.pos = den_start;
                return self.err("zero denominator");
            }
            let num = std::str::from_utf8(&self.src[start..save]).unwrap_or("");
            return Ok(RawNumber {
                text: format!("{num}/{den}"),
            });
        }
        self.pos = save;
        Ok(RawNumber {
            text: std::str::from_utf8(&self.src[start..save])
                .unwrap_or("")
                .to_string(),
        })
    }

    fn coefficient(&mut self) -> Result<RawCoeff> {
        if self.eat(b'(') {
            self.skip_ws();
            let re = self.number()?;
            self.skip_ws();
            if !self.eat(b',') {
                return self.err("expected ',' in complex coefficient");
            }
            self.skip_ws();
            let im = self.number()?;
            self.skip_ws();
            if !self.eat(b')') {
                return self.err("expected ')' closing complex coefficient");
            }
            Ok(RawCoeff::Complex(re, im))
        } else {
            Ok(RawCoeff::Real(self.number()?))
        }
    }

    /// `x<i>[^<a>]`, accumulating into `exps`.
    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        if !self.eat(b'x') {
            return self.err("expected a variable 'x<i>'");
        }
        let idx_pos = self.pos;
        let idx = self.digits();
        let i: usize = match idx.parse() {
            Ok(i) if i >= 1 && i <= self.n => i,
            _ => {
                self.pos = idx_pos;
                return self.err(format!("variable index must be in 1..={}", self.n));
            }
        };
        let mut a: u32 = 1;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            a = match self.digits().parse() {
                Ok(a) => a,
                Err(_) => {
                    self.pos = at;
                    return self.err("expected a nonnegative integer exponent");
                }
            };
        }
        exps[i - 1] = exps[i - 1]
            .checked_add(a)
            .ok_or(Error::Overflow("exponent"))?;
        Ok(())
    }

    fn term(&mut self, negate: bool) -> Result<RawTerm> {
        let position = self.pos;
        let mut exps = vec![0u32; self.n];
        let mut coeff = None;
        if self.peek() != Some(b'x') {
            coeff = Some(self.coefficient()?);
            self.skip_ws();
            if !self.eat(b'*') {
                if self.peek() != Some(b'x') {
                    return Ok(RawTerm {
                        position,
                        negate,
                        coeff,
                        exponents: exps,
                    });
                }
            } else {
                self.skip_ws();
            }
        }
        loop {
            self.factor(&mut exps)?;
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                continue;
            }
            if self.peek() == Some(b'x') {
                continue;
            }
            break;
        }
        Ok(RawTerm {
            position,
            negate,
            coeff,
            exponents: exps,
        })
    }

    fn parse(mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        self.skip_ws();
        loop {
            terms.push(self.term(negate)?);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
            self.pos += 1;
            self.skip_ws();
        }
        Ok(terms)
    }
}

fn raw_terms(text: &str, n: usize) -> Result<Vec<RawTerm>> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    Parser {
        src: text.as_bytes(),
        pos: 0,
        n,
    }
    .parse()
}

/// Parses an exact polynomial in `n` variables.
pub fn parse_exact(text: &str, n: usize) -> Result<ExactPoly> {
    let mut out = ExactPoly::zero(n);
    for t in raw_terms(text, n)? {
        let c: ExactCoeff = match &t.coeff {
            None => Complex::new(BigRational::one(), BigRational::zero()),
            Some(RawCoeff::Real(r)) => Complex::new(r.exact(t.position)?, BigRational::zero()),
            Some(RawCoeff::Complex(a, b)) => Complex::new(a.exact(t.position)?, b.exact(t.position)?),
        };
        let c = if t.negate { -c } else { c };
        out.add_term(Exponents(t.exponents), c);
    }
    Ok(out)
}

/// Parses a numeric polynomial in `n` variables.
pub fn parse_numeric(text: &str, n: usize) -> Result<NumericPoly> {
    let mut out = NumericPoly::zero(n);
    for t in raw_terms(text, n)? {
        let c = match &t.coeff {
            None => Complex64::new(1.0, 0.0),
            Some(RawCoeff::Real(r)) => Complex64::new(r.numeric(t.position)?, 0.0),
            Some(RawCoeff::Complex(a, b)) => {
                Complex64::new(a.numeric(t.position)?, b.numeric(t.position)?)
            }
        };
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::Parse {
                position: t.position,
                message: "coefficient is not finite".into(),
            });
        }
        let c = if t.negate { -c } else { c };
        out.add_term(Exponents(t.exponents), c);
    }
    Ok(out)
}
