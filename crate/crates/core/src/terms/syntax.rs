//! Text form of words and polynomials.
//!
//! ```text
//! poly   := [sign] term ( sign term )*
//! term   := coeff [ '*' word ] | word
//! coeff  := int [ '/' int ]
//! word   := factor ( WS factor )* | '1'
//! factor := ident | '{' [word] '}'
//! ```
//!
//! Printing is canonical: monomials in descending order, unit coefficients
//! elided before non-unit words, the unit word as `1` and its bracket as `{}`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{Context, Factor, Letter, Poly, Scalar, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { position: usize, name: String },
    #[error("division by zero in coefficient at position {position}")]
    ZeroDenominator { position: usize },
}

/// Ordered list of basis names. Index order is the well-order on letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Letter>,
}

impl Alphabet {
    /// Fails on a duplicate or syntactically invalid name.
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Self, String> {
        let mut out = Alphabet {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(format!("`{name}` is not a valid basis name"));
            }
            if out.index.contains_key(&name) {
                return Err(format!("duplicate basis name `{name}`"));
            }
            out.index
                .insert(name.clone(), Letter(out.names.len() as u32));
            out.names.push(name);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator {
        (0..self.names.len() as u32).map(Letter)
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let mut p = Parser::new(text, self);
        let w = p.word_or_unit()?;
        p.expect_end()?;
        Ok(w)
    }

    pub fn parse_poly(&self, text: &str) -> Result<Poly, ParseError> {
        let mut p = Parser::new(text, self);
        let f = p.poly()?;
        p.expect_end()?;
        Ok(f)
    }

    pub fn word<'a>(&'a self, w: &'a Word) -> impl fmt::Display + 'a {
        WordDisplay {
            alphabet: self,
            word: w,
        }
    }

    pub fn poly<'a>(&'a self, f: &'a Poly) -> impl fmt::Display + 'a {
        PolyDisplay {
            alphabet: self,
            poly: f,
        }
    }

    /// Context rendered like a word, with `*` for the hole.
    pub fn context<'a>(&'a self, q: &'a Context) -> impl fmt::Display + 'a {
        ContextDisplay {
            alphabet: self,
            context: q,
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.word(w).to_string()
    }

    pub fn format_poly(&self, f: &Poly) -> String {
        self.poly(f).to_string()
    }

    fn write_factors(&self, f: &mut fmt::Formatter<'_>, factors: &[Factor]) -> fmt::Result {
        for (i, factor) in factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            self.write_factor(f, factor)?;
        }
        Ok(())
    }

    fn write_factor(&self, f: &mut fmt::Formatter<'_>, factor: &Factor) -> fmt::Result {
        match factor {
            Factor::Letter(l) => f.write_str(self.name(*l)),
            Factor::Bracket(w) => {
                f.write_str("{")?;
                self.write_factors(f, w.factors())?;
                f.write_str("}")
            }
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct WordDisplay<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_unit() {
            return f.write_str("1");
        }
        self.alphabet.write_factors(f, self.word.factors())
    }
}

struct ContextDisplay<'a> {
    alphabet: &'a Alphabet,
    context: &'a Context,
}

impl ContextDisplay<'_> {
    fn write_level(&self, f: &mut fmt::Formatter<'_>, level: usize) -> fmt::Result {
        let frame = &self.context.frames()[level];
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if !std::mem::take(&mut first) {
                f.write_str(" ")
            } else {
                Ok(())
            }
        };
        for factor in &frame.left {
            sep(f)?;
            self.alphabet.write_factor(f, factor)?;
        }
        sep(f)?;
        if level + 1 < self.context.frames().len() {
            f.write_str("{")?;
            self.write_level(f, level + 1)?;
            f.write_str("}")?;
        } else {
            f.write_str("*")?;
        }
        for factor in &frame.right {
            sep(f)?;
            self.alphabet.write_factor(f, factor)?;
        }
        Ok(())
    }
}

impl fmt::Display for ContextDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_level(f, 0)
    }
}

struct PolyDisplay<'a> {
    alphabet: &'a Alphabet,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.poly.iter().enumerate() {
            let magnitude = c.abs();
            match (i == 0, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if w.is_unit() {
                f.write_str(&format_scalar(&magnitude))?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{}*", format_scalar(&magnitude))?;
                }
                write!(f, "{}", self.alphabet.word(w))?;
            }
        }
        Ok(())
    }
}

/// `n` or `n/d`, reduced, sign on the numerator.
pub fn format_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// A possibly signed rational literal such as `-3/2`.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let alphabet = Alphabet::new(Vec::<String>::new()).expect("empty alphabet");
    let mut p = Parser::new(text, &alphabet);
    p.skip_ws();
    let negative = match p.peek() {
        Some(b'-') => {
            p.pos += 1;
            true
        }
        Some(b'+') => {
            p.pos += 1;
            false
        }
        _ => false,
    };
    p.skip_ws();
    let c = p.coeff()?;
    p.expect_end()?;
    Ok(if negative { -c } else { c })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, alphabet: &'a Alphabet) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            alphabet,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            expected: expected.to_string(),
        })
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(_) => self.error("end of input"),
        }
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let mut out = Poly::zero();
        self.skip_ws();
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            self.skip_ws();
            let (c, w) = self.term()?;
            out.add_term(w, if negative { -c } else { c });
            self.skip_ws();
            negative = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                None => return Ok(out),
                Some(_) => return self.error("'+', '-' or end of input"),
            };
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Scalar, Word), ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.coeff()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    let w = self.word_or_unit()?;
                    Ok((coeff, w))
                } else {
                    Ok((coeff, Word::unit()))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'{' => Ok((Scalar::one(), self.word()?)),
            _ => self.error("a coefficient or a word"),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("decimal digits");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty decimal digits"))
    }

    fn coeff(&mut self) -> Result<Scalar, ParseError> {
        let numer = self.int()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let denom = self.int()?;
            if denom.is_zero() {
                return Err(ParseError::ZeroDenominator { position: at });
            }
            Ok(Scalar::new(numer, denom))
        } else {
            Ok(Scalar::from_integer(numer))
        }
    }

    /// `'1'` or a nonempty factor sequence.
    fn word_or_unit(&mut self) -> Result<Word, ParseError> {
        self.skip_ws();
        if self.peek() == Some(b'1') {
            let save = self.pos;
            self.pos += 1;
            if !matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                return Ok(Word::unit());
            }
            self.pos = save;
            return self.error("'1' or a word");
        }
        self.word()
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() || c == b'{' => factors.push(self.factor()?),
                _ => return Ok(Word::from_factors(factors)),
            }
        }
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'{') => {
                self.pos += 1;
                self.skip_ws();
                let inner = match self.peek() {
                    Some(b'}') => Word::unit(),
                    _ => self.word_or_unit()?,
                };
                self.skip_ws();
                if self.peek() != Some(b'}') {
                    return self.error("'}'");
                }
                self.pos += 1;
                Ok(Factor::Bracket(inner))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                match self.alphabet.lookup(name) {
                    Some(l) => Ok(Factor::Letter(l)),
                    None => Err(ParseError::UnknownIdentifier {
                        position: start,
                        name: name.to_string(),
                    }),
                }
            }
            _ => self.error("an identifier or '{'"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Alphabet {
        Alphabet::new(["x", "y"]).unwrap()
    }

    #[test]
    fn parses_bracket_words() {
        let a = xy();
        let x = Word::letter(Letter(0));
        let w = a.parse_word("{x} {x x}").unwrap();
        assert_eq!(
            w,
            Word::bracket(x.clone()).concat(&Word::bracket(x.concat(&x)))
        );
        assert_eq!(a.format_word(&w), "{x} {x x}");
    }

    #[test]
    fn parses_coefficients_and_unit() {
        let a = xy();
        let f = a.parse_poly("3/2*{x} - 1").unwrap();
        let bx = Word::bracket(Word::letter(Letter(0)));
        assert_eq!(f.coeff(&bx), Scalar::new(3.into(), 2.into()));
        assert_eq!(f.coeff(&Word::unit()), Scalar::from_integer((-1).into()));
        assert_eq!(a.format_poly(&f), "3/2*{x} - 1");
    }

    #[test]
    fn unknown_identifier_is_reported() {
        let err = xy().parse_poly("{z}").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownIdentifier {
                position: 1,
                name: "z".into()
            }
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let a = xy();
        assert!(matches!(
            a.parse_poly("{x"),
            Err(ParseError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            a.parse_poly("2 x"),
            Err(ParseError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            a.parse_poly(""),
            Err(ParseError::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            a.parse_poly("1/0"),
            Err(ParseError::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn unit_forms() {
        let a = xy();
        assert_eq!(a.parse_word("1").unwrap(), Word::unit());
        assert_eq!(a.parse_word("{}").unwrap(), Word::bracket(Word::unit()));
        assert_eq!(a.parse_word("{1}").unwrap(), Word::bracket(Word::unit()));
        assert_eq!(a.format_word(&Word::bracket(Word::unit())), "{}");
        assert_eq!(a.format_poly(&Poly::zero()), "0");
        assert_eq!(a.parse_poly("0").unwrap(), Poly::zero());
        assert_eq!(a.format_poly(&Poly::one()), "1");
    }

    #[test]
    fn canonical_order_and_signs() {
        let a = xy();
        let f = a.parse_poly("-y + x y - 2*{x} + 1/3").unwrap();
        assert_eq!(a.format_poly(&f), "x y - 2*{x} - y + 1/3");
        let g = a.parse_poly("-x").unwrap();
        assert_eq!(a.format_poly(&g), "-x");
    }

    #[test]
    fn context_display() {
        let a = xy();
        let x = Word::letter(Letter(0));
        let q = Context::from_frames(vec![
            super::super::Frame {
                left: x.factors().to_vec(),
                right: vec![],
            },
            super::super::Frame {
                left: vec![],
                right: x.factors().to_vec(),
            },
        ]);
        assert_eq!(a.context(&q).to_string(), "x {* x}");
        assert_eq!(a.context(&Context::identity()).to_string(), "*");
    }

    #[test]
    fn signed_scalars() {
        assert_eq!(
            parse_scalar("-1").unwrap(),
            Scalar::from_integer((-1).into())
        );
        assert_eq!(
            parse_scalar("3/6").unwrap(),
            Scalar::new(1.into(), 2.into())
        );
        assert_eq!(format_scalar(&Scalar::new((-3).into(), 6.into())), "-1/2");
    }
}
