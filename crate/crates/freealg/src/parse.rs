//! Text format for polynomials.
//!
//! ```text
//! expression  := [sign] term ((`+`|`-`) term)*
//! term        := coefficient [`*` factor (`*` factor)*] | factor (`*` factor)*
//! factor      := variable [`^` positive-integer]
//!              | `(` expression `)` [`^` positive-integer]
//! coefficient := integer [`/` positive-integer]      (fractions only over Q)
//! variable    := `x` | `y`, or `x1` .. `xn` for alphabets larger than two
//! ```
//!
//! Whitespace is ignored. A power of a parenthesized expression means the
//! repeated noncommutative product. Printing (the `Display` impl on
//! [`Polynomial`]) emits terms in degree-descending, then lexicographic
//! order; `parse` after `print` is the identity on canonical forms.

use num_bigint::BigInt;

use crate::error::AlgError;
use crate::field::Field;
use crate::poly::Polynomial;
use crate::word::Word;

pub fn parse_poly<F: Field>(
    text: &str,
    field: &F,
    alphabet_size: usize,
) -> Result<Polynomial<F>, AlgError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        field,
        alphabet_size,
    };
    let poly = p.expression()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a, F: Field> {
    bytes: &'a [u8],
    pos: usize,
    field: &'a F,
    alphabet_size: usize,
}

impl<'a, F: Field> Parser<'a, F> {
    fn err(&self, msg: &str) -> AlgError {
        AlgError::SyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), AlgError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&format!("expected `{}`", c as char))),
        }
    }

    fn expression(&mut self) -> Result<Polynomial<F>, AlgError> {
        let mut acc = Polynomial::zero(self.field.clone(), self.alphabet_size);
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t)? } else { acc.add(&t)? };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial<F>, AlgError> {
        let mut acc = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.coefficient()?;
                Polynomial::constant(self.field.clone(), self.alphabet_size, coeff)
            }
            Some(_) => {
                let f = self.factor()?;
                return self.factor_chain(f);
            }
            None => return Err(self.err("expected a term")),
        };
        // Coefficient alone, or coefficient '*' factors.
        if self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f)?;
            return self.factor_chain(acc);
        }
        Ok(acc)
    }

    fn factor_chain(&mut self, mut acc: Polynomial<F>) -> Result<Polynomial<F>, AlgError> {
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<F>, AlgError> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expression()?;
                self.expect(b')')?;
                inner
            }
            Some(c) if c.is_ascii_alphabetic() => self.variable()?,
            Some(c) if c.is_ascii_digit() => {
                return Err(self.err("coefficient must lead its term"));
            }
            _ => return Err(self.err("expected a variable or `(`")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.positive_integer()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn variable(&mut self) -> Result<Polynomial<F>, AlgError> {
        let start = self.pos;
        let c = self.bump().unwrap();
        let mut name = (c as char).to_string();
        if self.alphabet_size <= 2 {
            let idx = match c {
                b'x' => 0u8,
                b'y' if self.alphabet_size == 2 => 1u8,
                _ => {
                    self.pos = start;
                    return Err(AlgError::UnknownVariable { pos: start, name });
                }
            };
            return Ok(Polynomial::var(self.field.clone(), self.alphabet_size, idx));
        }
        // Rank above two: names are x1..xn.
        let mut digits = String::new();
        while let Some(d) = self.bytes.get(self.pos).copied() {
            if d.is_ascii_digit() {
                digits.push(d as char);
                self.pos += 1;
            } else {
                break;
            }
        }
        name.push_str(&digits);
        if c != b'x' || digits.is_empty() {
            self.pos = start;
            return Err(AlgError::UnknownVariable { pos: start, name });
        }
        let n: usize = digits.parse().map_err(|_| AlgError::UnknownVariable {
            pos: start,
            name: name.clone(),
        })?;
        if n == 0 || n > self.alphabet_size {
            self.pos = start;
            return Err(AlgError::UnknownVariable { pos: start, name });
        }
        Ok(Polynomial::var(
            self.field.clone(),
            self.alphabet_size,
            (n - 1) as u8,
        ))
    }

    fn positive_integer(&mut self) -> Result<usize, AlgError> {
        let mut digits = String::new();
        self.skip_ws();
        while let Some(d) = self.bytes.get(self.pos).copied() {
            if d.is_ascii_digit() {
                digits.push(d as char);
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(self.err("expected a positive integer"));
        }
        let n: usize = digits
            .parse()
            .map_err(|_| self.err("integer out of range"))?;
        if n == 0 {
            return Err(self.err("exponent must be positive"));
        }
        Ok(n)
    }

    fn coefficient(&mut self) -> Result<F::Elem, AlgError> {
        let start = self.pos;
        let mut digits = String::new();
        self.skip_ws();
        while let Some(d) = self.bytes.get(self.pos).copied() {
            if d.is_ascii_digit() {
                digits.push(d as char);
                self.pos += 1;
            } else {
                break;
            }
        }
        let num: BigInt = digits.parse().map_err(|_| AlgError::BadCoefficient {
            pos: start,
            msg: "cannot read integer".to_string(),
        })?;
        let den = if self.bytes.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let mut den_digits = String::new();
            while let Some(d) = self.bytes.get(self.pos).copied() {
                if d.is_ascii_digit() {
                    den_digits.push(d as char);
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if den_digits.is_empty() {
                return Err(AlgError::BadCoefficient {
                    pos: self.pos,
                    msg: "expected denominator digits".to_string(),
                });
            }
            let d: BigInt = den_digits.parse().map_err(|_| AlgError::BadCoefficient {
                pos: start,
                msg: "cannot read denominator".to_string(),
            })?;
            Some(d)
        } else {
            None
        };
        self.field.from_fraction(num, den).map_err(|e| match e {
            AlgError::BadCoefficient { msg, .. } => AlgError::BadCoefficient { pos: start, msg },
            other => other,
        })
    }
}

/// Parses a bare word given in compact letter form, e.g. `xyx`.
pub fn parse_compact_word(text: &str) -> Result<Word, AlgError> {
    let mut letters = Vec::new();
    for (i, ch) in text.trim().chars().enumerate() {
        match ch {
            'x' => letters.push(0u8),
            'y' => letters.push(1u8),
            '1' if text.trim().len() == 1 => return Ok(Word::empty()),
            _ => {
                return Err(AlgError::UnknownVariable {
                    pos: i,
                    name: ch.to_string(),
                })
            }
        }
    }
    Ok(Word::from_letters(letters))
}
