//! Shared pieces of the text parsers.

use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{Integer, Rational};

/// Parse failure with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

/// Byte cursor over ASCII-oriented input.
pub(crate) struct Cursor<'a> {
    pub src: &'a [u8],
    pub pos: usize,
}

/// Digit runs longer than this are rejected.
const MAX_DIGITS: usize = 4096;

impl<'a> Cursor<'a> {
    pub fn new(s: &'a str) -> Self {
        Cursor {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }

    pub fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(c) if c.is_ascii_graphic() => self.error(format!("unexpected '{}'", c as char)),
            Some(_) => self.error("unexpected byte"),
            None => self.error("unexpected end of input"),
        }
    }

    /// Unsigned decimal digits.
    pub fn digits(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::new(start, "expected digits"));
        }
        if self.pos - start > MAX_DIGITS {
            return Err(ParseError::new(start, "number too long"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    pub fn small_uint(&mut self, max: u32) -> Result<u32, ParseError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse::<u32>()
            .ok()
            .filter(|v| *v <= max)
            .ok_or_else(|| ParseError::new(start, format!("value exceeds {max}")))
    }

    /// Optionally signed `n` or `n/d`.
    pub fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            if self.peek() == Some(b'+') {
                self.pos += 1;
            }
            false
        };
        let value = self.unsigned_rational()?;
        Ok(if negative { -value } else { value })
    }

    pub fn unsigned_rational(&mut self) -> Result<Rational, ParseError> {
        let num = Integer::from_str(self.digits()?).expect("digits");
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = Integer::from_str(self.digits()?).expect("digits");
            if den.is_zero() {
                return Err(ParseError::new(at, "zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            self.pos = save;
            Ok(Rational::from_integer(num))
        }
    }
}
