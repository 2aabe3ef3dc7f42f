//! The ring-spec language.
//!
//! ```text
//! spec := term (("x" | "×") term)* ;
//! term := atom [ "(+)" atom [ "^" INT ] ] ;
//! atom := "Z" INT | "GF(" INT ")" | "Z" INT "[x]/(" poly ")" | "(" spec ")" ;
//! ```
//!
//! Whitespace is ignored and keywords are case-insensitive. Products are
//! flattened, and `(+)` binds tighter than `x`. An idealization `A(+)A^n`
//! requires both atoms to denote the same ring; the exponent defaults to 1.

use std::fmt;

use thiserror::Error;

use crate::ring::{is_prime, prime_power, FiniteRing, Poly, RingBuilder, RingError};

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug)]
pub enum SpecKind {
    Zn(u64),
    Gf(u64),
    Quotient { p: u64, poly: Poly },
    Product(Vec<RingSpec>),
    Idealization { base: Box<RingSpec>, rank: usize },
}

/// A parsed ring spec. Equality is structural and ignores spans.
#[derive(Clone, Debug)]
pub struct RingSpec {
    pub kind: SpecKind,
    pub span: Span,
}

impl PartialEq for SpecKind {
    fn eq(&self, other: &Self) -> bool {
        use SpecKind::*;
        match (self, other) {
            (Zn(a), Zn(b)) | (Gf(a), Gf(b)) => a == b,
            (Quotient { p: p1, poly: f1 }, Quotient { p: p2, poly: f2 }) => p1 == p2 && f1 == f2,
            (Product(a), Product(b)) => a == b,
            (Idealization { base: b1, rank: r1 }, Idealization { base: b2, rank: r2 }) => b1 == b2 && r1 == r2,
            _ => false,
        }
    }
}

impl Eq for SpecKind {}

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for RingSpec {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("Z{n} at position {pos}: modulus must be at least 2")]
    ModulusTooSmall { n: u64, pos: usize },
    #[error("GF({q}) at position {pos}: {q} is not a prime power")]
    NotPrimePower { q: u64, pos: usize },
    #[error("Z{p}[x] at position {pos}: {p} is not prime")]
    NotPrime { p: u64, pos: usize },
    #[error("polynomial {poly} at position {pos} is not monic over Z{p}")]
    NonMonic { poly: String, p: u64, pos: usize },
    #[error("polynomial {poly} at position {pos} must have degree at least 2")]
    DegreeTooSmall { poly: String, pos: usize },
    #[error("idealization at position {pos}: module {module} does not match base {base}")]
    IdealizationMismatch { base: String, module: String, pos: usize },
    #[error("idealization at position {pos}: rank must be at least 1")]
    ZeroRank { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::ModulusTooSmall { pos, .. }
            | ParseError::NotPrimePower { pos, .. }
            | ParseError::NotPrime { pos, .. }
            | ParseError::NonMonic { pos, .. }
            | ParseError::DegreeTooSmall { pos, .. }
            | ParseError::IdealizationMismatch { pos, .. }
            | ParseError::ZeroRank { pos } => *pos,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, chars: src.char_indices().collect(), pos: 0 }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(o, _)| o)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    /// Peek `n` non-whitespace characters ahead without consuming.
    fn peek_seq(&mut self, want: &str) -> bool {
        let save = self.pos;
        let ok = want.chars().all(|w| match self.peek() {
            Some(c) if c.eq_ignore_ascii_case(&w) => {
                self.pos += 1;
                true
            }
            _ => false,
        });
        self.pos = save;
        ok
    }

    fn eat_seq(&mut self, want: &str) -> bool {
        if self.peek_seq(want) {
            for _ in want.chars() {
                self.peek();
                self.pos += 1;
            }
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: &str) -> Result<(), ParseError> {
        if self.eat_seq(want) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{want}`")))
        }
    }

    fn syntax(&mut self, message: impl Into<String>) -> ParseError {
        self.skip_ws();
        let found = match self.chars.get(self.pos) {
            Some((_, c)) => format!(", found `{c}`"),
            None => ", found end of input".to_string(),
        };
        ParseError::Syntax { pos: self.offset(), message: format!("{}{found}", message.into()) }
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.chars.get(self.pos).and_then(|(_, c)| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d)))
                .ok_or_else(|| ParseError::Syntax { pos: self.chars[start].0, message: "integer too large".into() })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an integer"));
        }
        Ok(value)
    }

    fn is_product_op(c: char) -> bool {
        matches!(c, 'x' | 'X' | '×')
    }

    fn spec(&mut self) -> Result<RingSpec, ParseError> {
        self.skip_ws();
        let start = self.offset();
        let mut factors = vec![self.term()?];
        while self.peek().is_some_and(Self::is_product_op) {
            self.pos += 1;
            factors.push(self.term()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f.kind {
                SpecKind::Product(inner) => flat.extend(inner),
                _ => flat.push(f),
            }
        }
        Ok(RingSpec { kind: SpecKind::Product(flat), span: Span { start, end: self.offset() } })
    }

    fn term(&mut self) -> Result<RingSpec, ParseError> {
        self.skip_ws();
        let start = self.offset();
        let base = self.atom()?;
        if !self.eat_seq("(+)") {
            return Ok(base);
        }
        let module = self.atom()?;
        let rank = if self.eat_seq("^") { self.int()? as usize } else { 1 };
        if rank == 0 {
            return Err(ParseError::ZeroRank { pos: start });
        }
        if base != module {
            return Err(ParseError::IdealizationMismatch {
                base: base.to_string(),
                module: module.to_string(),
                pos: module.span.start,
            });
        }
        Ok(RingSpec {
            kind: SpecKind::Idealization { base: Box::new(base), rank },
            span: Span { start, end: self.offset() },
        })
    }

    fn atom(&mut self) -> Result<RingSpec, ParseError> {
        self.skip_ws();
        let start = self.offset();
        if self.peek_seq("(+)") {
            return Err(self.syntax("expected a ring"));
        }
        if self.eat_seq("(") {
            let inner = self.spec()?;
            self.expect(")")?;
            return Ok(RingSpec { kind: inner.kind, span: Span { start, end: self.offset() } });
        }
        if self.eat_seq("GF(") {
            let q = self.int()?;
            self.expect(")")?;
            if prime_power(q).is_none() {
                return Err(ParseError::NotPrimePower { q, pos: start });
            }
            return Ok(RingSpec { kind: SpecKind::Gf(q), span: Span { start, end: self.offset() } });
        }
        if self.eat_seq("Z") {
            let n = self.int()?;
            if self.eat_seq("[") {
                if !self.peek().is_some_and(|c| c == 'x' || c == 'X') {
                    return Err(self.syntax("expected polynomial variable `x`"));
                }
                self.pos += 1;
                self.expect("]")?;
                self.expect("/")?;
                self.expect("(")?;
                let poly_pos = self.offset();
                let coeffs = self.poly()?;
                self.expect(")")?;
                if !is_prime(n) {
                    return Err(ParseError::NotPrime { p: n, pos: start });
                }
                let reduced: Vec<u32> = coeffs.iter().map(|&c| c.rem_euclid(n as i64) as u32).collect();
                let poly = Poly::new(reduced, n as u32);
                if !poly.is_monic() {
                    return Err(ParseError::NonMonic { poly: poly.to_string(), p: n, pos: poly_pos });
                }
                if poly.degree().unwrap_or(0) < 2 {
                    return Err(ParseError::DegreeTooSmall { poly: poly.to_string(), pos: poly_pos });
                }
                return Ok(RingSpec {
                    kind: SpecKind::Quotient { p: n, poly },
                    span: Span { start, end: self.offset() },
                });
            }
            if n < 2 {
                return Err(ParseError::ModulusTooSmall { n, pos: start });
            }
            return Ok(RingSpec { kind: SpecKind::Zn(n), span: Span { start, end: self.offset() } });
        }
        Err(self.syntax("expected `Z`, `GF(` or `(`"))
    }

    /// Integer-coefficient polynomial in `x`, returned little-endian.
    fn poly(&mut self) -> Result<Vec<i64>, ParseError> {
        let mut coeffs: Vec<i64> = Vec::new();
        let mut sign = 1i64;
        if self.eat_seq("-") {
            sign = -1;
        } else {
            self.eat_seq("+");
        }
        loop {
            let (c, d) = self.monomial()?;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, 0);
            }
            coeffs[d] += sign * c;
            if self.eat_seq("+") {
                sign = 1;
            } else if self.eat_seq("-") {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(coeffs)
    }

    fn monomial(&mut self) -> Result<(i64, usize), ParseError> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => Some(self.int()? as i64),
            _ => None,
        };
        if coeff.is_some() {
            self.eat_seq("*");
        }
        if self.peek().is_some_and(|c| c == 'x' || c == 'X') {
            self.pos += 1;
            let deg = if self.eat_seq("^") { self.int()? as usize } else { 1 };
            Ok((coeff.unwrap_or(1), deg))
        } else {
            match coeff {
                Some(c) => Ok((c, 0)),
                None => Err(self.syntax("expected a monomial")),
            }
        }
    }
}

/// Parse ring-spec text into a [`RingSpec`].
pub fn parse(text: &str) -> Result<RingSpec, ParseError> {
    let mut parser = Parser::new(text);
    let spec = parser.spec()?;
    if parser.peek().is_some() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(spec)
}

impl fmt::Display for RingSpec {
    /// Canonical form: single `x` for products, lowercase `x` in
    /// polynomials, no whitespace.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpecKind::Zn(n) => write!(f, "Z{n}"),
            SpecKind::Gf(q) => write!(f, "GF({q})"),
            SpecKind::Quotient { p, poly } => write!(f, "Z{p}[x]/({poly})"),
            SpecKind::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str("x")?;
                    }
                    match factor.kind {
                        SpecKind::Product(_) => write!(f, "({factor})")?,
                        _ => write!(f, "{factor}")?,
                    }
                }
                Ok(())
            }
            SpecKind::Idealization { base, rank } => {
                let b = match base.kind {
                    SpecKind::Product(_) | SpecKind::Idealization { .. } => format!("({base})"),
                    _ => base.to_string(),
                };
                if *rank == 1 {
                    write!(f, "{b}(+){b}")
                } else {
                    write!(f, "{b}(+){b}^{rank}")
                }
            }
        }
    }
}

/// Build the ring a spec denotes. `GF(p)` for prime `p` produces the same
/// tables as `Zp`.
pub fn elaborate(spec: &RingSpec, builder: &RingBuilder) -> Result<FiniteRing, RingError> {
    let mut ring = match &spec.kind {
        SpecKind::Zn(n) => builder.zn(usize::try_from(*n)
            .map_err(|_| RingError::SizeLimit { order: u128::from(*n), cap: builder.max_order() })?)?,
        SpecKind::Gf(q) => {
            let (p, k) = prime_power(*q).ok_or(RingError::InvalidCharacteristic(*q))?;
            builder.gf(p, k)?
        }
        SpecKind::Quotient { p, poly } => builder.quotient(*p, poly)?,
        SpecKind::Product(factors) => {
            let rings = factors.iter().map(|f| elaborate(f, builder)).collect::<Result<Vec<_>, _>>()?;
            builder.product(&rings)?
        }
        SpecKind::Idealization { base, rank } => builder.idealization(&elaborate(base, builder)?, *rank)?,
    };
    ring.set_spec_text(spec.to_string());
    Ok(ring)
}

/// Parse and elaborate in one step.
pub fn build(text: &str, builder: &RingBuilder) -> Result<FiniteRing, SpecError> {
    let spec = parse(text)?;
    Ok(elaborate(&spec, builder)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
