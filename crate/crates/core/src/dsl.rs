//! Text syntax for presentations.
//!
//! ```text
//! group := term { "+" term } | "0"
//! term  := block [ "^" card ]
//! block := "Z(" int ")" | "Z(" prime "^" int ")" | "Z(" prime "^inf)" | "Z" | "Q"
//!        | "L(" prime ")" | "Soc(P)" | "Soc(P\{" primes "})" | "Soc({" primes "})"
//! card  := int | "w" | "c" | "c+" | "2^c" | "2^2^c" | ...
//! ```
//!
//! Whitespace between tokens is ignored. Errors carry the byte offset at which
//! they were detected.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::is_prime;
use crate::cardinal::Cardinal;
use crate::presentation::{Block, Presentation, RawBlock};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid modulus {n} at byte {pos}: Z(n) needs n >= 2")]
    InvalidModulus { pos: usize, n: u64 },
    #[error("{p} is not a prime (byte {pos})")]
    InvalidPrime { pos: usize, p: u64 },
}

impl DslError {
    pub fn position(&self) -> usize {
        match self {
            DslError::Syntax { pos, .. }
            | DslError::InvalidModulus { pos, .. }
            | DslError::InvalidPrime { pos, .. } => *pos,
        }
    }
}

pub fn parse(text: &str) -> Result<Presentation, DslError> {
    let mut p = Parser::new(text);
    let terms = p.group()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(Presentation::normalize(terms).expect("parser validates every block"))
}

pub fn print(g: &Presentation) -> String {
    g.to_string()
}

/// Parses a single block (as used in the JSON form of a presentation).
pub fn parse_raw_block(text: &str) -> Result<RawBlock, DslError> {
    let mut p = Parser::new(text);
    let b = p.block()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(b)
}

pub fn parse_cardinal(text: &str) -> Result<Cardinal, DslError> {
    let mut p = Parser::new(text);
    let c = p.card()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(c)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn syntax(&self, msg: &str) -> DslError {
        DslError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), DslError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{tok}`")))
        }
    }

    fn digits(&mut self) -> Result<(usize, &'a str), DslError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.syntax("expected an integer"));
        }
        self.pos += len;
        Ok((start, &self.src[start..start + len]))
    }

    fn int(&mut self) -> Result<(usize, u64), DslError> {
        let (start, s) = self.digits()?;
        let n = s
            .parse::<u64>()
            .map_err(|_| DslError::Syntax { pos: start, msg: "integer out of range".into() })?;
        Ok((start, n))
    }

    fn prime(&mut self) -> Result<u64, DslError> {
        let (start, p) = self.int()?;
        if is_prime(p) {
            Ok(p)
        } else {
            Err(DslError::InvalidPrime { pos: start, p })
        }
    }

    fn prime_list(&mut self) -> Result<BTreeSet<u64>, DslError> {
        let mut out = BTreeSet::new();
        self.skip_ws();
        if self.rest().starts_with('}') {
            return Ok(out);
        }
        loop {
            out.insert(self.prime()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn group(&mut self) -> Result<Vec<(RawBlock, Cardinal)>, DslError> {
        self.skip_ws();
        if self.at_end() {
            return Err(self.syntax("empty expression"));
        }
        let save = self.pos;
        if self.eat("0") {
            self.skip_ws();
            if self.at_end() {
                return Ok(Vec::new());
            }
            self.pos = save;
        }
        let mut terms = vec![self.term()?];
        while self.eat("+") {
            terms.push(self.term()?);
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(RawBlock, Cardinal), DslError> {
        let block = self.block()?;
        let mult = if self.eat("^") { self.card()? } else { Cardinal::one() };
        Ok((block, mult))
    }

    fn block(&mut self) -> Result<RawBlock, DslError> {
        self.skip_ws();
        if self.eat("Soc(") {
            let b = if self.eat("P") {
                if self.eat("\\") {
                    self.expect("{")?;
                    let ex = self.prime_list()?;
                    self.expect("}")?;
                    RawBlock::Block(Block::Soc(ex))
                } else {
                    RawBlock::Block(Block::soc_all())
                }
            } else if self.eat("{") {
                let ps = self.prime_list()?;
                self.expect("}")?;
                RawBlock::FiniteSoc(ps)
            } else {
                return Err(self.syntax("expected `P`, `P\\{...}` or `{...}` inside Soc(...)"));
            };
            self.expect(")")?;
            return Ok(b);
        }
        if self.eat("L(") {
            let p = self.prime()?;
            self.expect(")")?;
            return Ok(RawBlock::Block(Block::Tower(p)));
        }
        if self.eat("Q") {
            return Ok(RawBlock::Block(Block::RatQ));
        }
        if self.eat("Z") {
            if !self.eat("(") {
                return Ok(RawBlock::Block(Block::IntZ));
            }
            let (start, n) = self.int()?;
            let b = if self.eat("^") {
                if !is_prime(n) {
                    return Err(DslError::InvalidPrime { pos: start, p: n });
                }
                if self.eat("inf") {
                    RawBlock::Block(Block::Prufer(n))
                } else {
                    let (kpos, k) = self.int()?;
                    let k = u32::try_from(k)
                        .ok()
                        .filter(|&k| k >= 1)
                        .ok_or(DslError::Syntax { pos: kpos, msg: "exponent must be in 1..2^32".into() })?;
                    RawBlock::Block(Block::Cyclic { p: n, k })
                }
            } else {
                if n < 2 {
                    return Err(DslError::InvalidModulus { pos: start, n });
                }
                RawBlock::Mod(n)
            };
            self.expect(")")?;
            return Ok(b);
        }
        Err(self.syntax("expected a block (Z, Q, Z(..), L(..), Soc(..))"))
    }

    fn card(&mut self) -> Result<Cardinal, DslError> {
        self.skip_ws();
        let start = self.pos;
        let mut towers = 0u32;
        while self.rest().starts_with("2^") {
            self.pos += 2;
            towers += 1;
        }
        let k = if self.rest().starts_with('c') {
            self.pos += 1;
            Some(towers + 1)
        } else if towers == 0 && self.rest().starts_with('w') {
            self.pos += 1;
            Some(0)
        } else if towers == 0 {
            None
        } else {
            return Err(self.syntax("expected `c` after `2^`"));
        };
        match k {
            Some(k) => {
                if self.rest().starts_with('+') && !self.plus_starts_term() {
                    self.pos += 1;
                    Ok(Cardinal::Succ(k))
                } else {
                    Ok(Cardinal::Beth(k))
                }
            }
            None => {
                self.pos = start;
                let (_, s) = self.digits()?;
                Ok(Cardinal::Fin(s.parse::<BigUint>().expect("digits")))
            }
        }
    }

    /// Distinguishes the successor mark in `c+` from a `+` joining two terms:
    /// a joining `+` is followed by another block.
    fn plus_starts_term(&self) -> bool {
        let after = self.rest()[1..].trim_start();
        !after.is_empty()
            && (after.starts_with('Z')
                || after.starts_with('Q')
                || after.starts_with('L')
                || after.starts_with("Soc"))
    }
}
