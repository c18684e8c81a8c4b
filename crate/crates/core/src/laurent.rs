//! Exact Laurent-polynomial arithmetic in the variable `u`, plus the wrapped
//! value types used by the bracket invariants.
//!
//! `LaurentU` is a plain integer Laurent polynomial. `JPoly` attaches the
//! global `v^k` factor (the `v` variable only ever occurs as a single global
//! power, so one exponent suffices). `ClassPoly` is the module-valued
//! refinement: coefficients attached to multisets of nontrivial Z/2-homology
//! classes of circles.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::ParseError;

/// Integer Laurent polynomial in `u`. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentU {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentU {
    pub fn zero() -> Self {
        LaurentU::default()
    }

    pub fn one() -> Self {
        LaurentU::monomial(0, 1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        LaurentU::monomial(0, c)
    }

    /// The single term `c * u^exp` (zero if `c` is zero).
    pub fn monomial<C: Into<BigInt>>(exp: i64, c: C) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentU { terms }
    }

    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = LaurentU::zero();
        for (e, c) in iter {
            out.add_term(e, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentU {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentU::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentU::zero();
        }
        LaurentU {
            terms: self.terms.iter().map(|(&e, k)| (e, k * c)).collect(),
        }
    }

    /// Multiply by `u^n`.
    pub fn shift(&self, n: i64) -> Self {
        LaurentU {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e + n, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = LaurentU::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// The substitution `u -> u^{-1}`: every exponent is negated.
    pub fn substitute_u_inverse(&self) -> Self {
        LaurentU {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Total order on term lists: ascending-exponent sequences compared
    /// lexicographically by `(exponent, coefficient)`.
    pub fn cmp_terms(&self, other: &Self) -> Ordering {
        let mut a = self.terms();
        let mut b = other.terms();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(&eb).then_with(|| ca.cmp(cb)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }

    /// The smaller of `self` and `self` with `u -> u^{-1}`, under `cmp_terms`.
    pub fn canonical_u_inverse(&self) -> Self {
        let inv = self.substitute_u_inverse();
        if inv.cmp_terms(self) == Ordering::Less {
            inv
        } else {
            self.clone()
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut s = Scanner::new(text);
        let p = s.poly()?;
        s.expect_end()?;
        Ok(p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "u_terms": json_terms(self) })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ParseError> {
        terms_from_json(
            v.get("u_terms")
                .ok_or_else(|| ParseError::at(0, 0, "missing u_terms"))?,
        )
    }
}

impl fmt::Display for LaurentU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "u^{e}")?;
            } else {
                write!(f, "{mag}*u^{e}")?;
            }
        }
        Ok(())
    }
}

fn json_terms(p: &LaurentU) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = p
        .terms()
        .map(|(e, c)| {
            // Coefficients that fit i64 stay JSON numbers, larger ones become
            // decimal strings so no consumer silently rounds them.
            let cv = match i64::try_from(c.clone()) {
                Ok(n) => serde_json::json!(n),
                Err(_) => serde_json::json!(c.to_string()),
            };
            serde_json::json!([e, cv])
        })
        .collect();
    serde_json::Value::Array(terms)
}

fn terms_from_json(v: &serde_json::Value) -> Result<LaurentU, ParseError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ParseError::at(0, 0, "u_terms must be an array"))?;
    let mut out = LaurentU::zero();
    for pair in arr {
        let p = pair
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| ParseError::at(0, 0, "each term must be [exp, coeff]"))?;
        let e = p[0]
            .as_i64()
            .ok_or_else(|| ParseError::at(0, 0, "exponent must be an integer"))?;
        let c = match &p[1] {
            serde_json::Value::Number(n) => BigInt::from(n.as_i64().ok_or_else(|| {
                ParseError::at(0, 0, "coefficient out of i64 range; use a string")
            })?),
            serde_json::Value::String(s) => s
                .parse::<BigInt>()
                .map_err(|_| ParseError::at(0, 0, "bad coefficient string"))?,
            _ => return Err(ParseError::at(0, 0, "coefficient must be number or string")),
        };
        out.add_term(e, c);
    }
    Ok(out)
}

/// A Laurent polynomial in `u` carrying the global factor `v^v_exp`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JPoly {
    v_exp: u32,
    body: LaurentU,
}

impl JPoly {
    /// Canonical zero has `v_exp = 0`.
    pub fn new(v_exp: u32, body: LaurentU) -> Self {
        if body.is_zero() {
            JPoly { v_exp: 0, body }
        } else {
            JPoly { v_exp, body }
        }
    }

    pub fn v_exp(&self) -> u32 {
        self.v_exp
    }

    pub fn body(&self) -> &LaurentU {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Representative of the pair `{p(u), p(u^{-1})}` that is minimal under
    /// the term-list order. Idempotent; `v_exp` is untouched.
    pub fn canonical_pair(&self) -> Self {
        JPoly::new(self.v_exp, self.body.canonical_u_inverse())
    }

    pub fn to_text(&self) -> String {
        format!("v^{}*({})", self.v_exp, self.body)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut s = Scanner::new(text);
        let j = s.jpoly()?;
        s.expect_end()?;
        Ok(j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "v": self.v_exp, "u_terms": json_terms(&self.body) })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ParseError> {
        let k = v
            .get("v")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| ParseError::at(0, 0, "missing v exponent"))?;
        let body = LaurentU::from_json(v)?;
        Ok(JPoly::new(k as u32, body))
    }
}

impl fmt::Display for JPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Z/2-homology coordinates of a circle: parity of passes through the
/// vertical-gluing wall and the horizontal-gluing wall. `(0,0)` is the
/// trivial class and never appears inside a `ClassPoly` key.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct ClassKey {
    pub hv: bool,
    pub hh: bool,
}

impl ClassKey {
    pub fn new(hv: bool, hh: bool) -> Self {
        ClassKey { hv, hh }
    }

    pub fn is_trivial(&self) -> bool {
        !self.hv && !self.hh
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g[{},{}]", self.hv as u8, self.hh as u8)
    }
}

/// Element of the free module over `Z[u^{±1}]` spanned by multisets of
/// nontrivial circle classes, with a global `v` power. The empty multiset is
/// the scalar part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassPoly {
    v_exp: u32,
    terms: BTreeMap<Vec<ClassKey>, LaurentU>,
}

impl ClassPoly {
    pub fn new(v_exp: u32) -> Self {
        ClassPoly {
            v_exp,
            terms: BTreeMap::new(),
        }
    }

    pub fn v_exp(&self) -> u32 {
        self.v_exp
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Keys are kept sorted; the value for an all-cancelled key is dropped.
    pub fn add_term(&mut self, mut key: Vec<ClassKey>, val: LaurentU) {
        if val.is_zero() {
            return;
        }
        debug_assert!(key.iter().all(|k| !k.is_trivial()));
        key.sort();
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(val);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&val);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[ClassKey], &LaurentU)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn scalar_part(&self) -> LaurentU {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    /// Evaluate every generator at `gen_value` (the bracket sends each one to
    /// `-u^2 - u^{-2}`), collapsing the module element to a `JPoly`.
    pub fn specialize(&self, gen_value: &LaurentU) -> JPoly {
        let mut body = LaurentU::zero();
        for (key, val) in self.terms() {
            body = body.add(&val.mul(&gen_value.pow(key.len() as u32)));
        }
        JPoly::new(self.v_exp, body)
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return format!("v^{}*{{(0)}}", self.v_exp);
        }
        let mut parts = Vec::new();
        for (key, val) in self.terms() {
            let gens: String = key.iter().map(|k| k.to_string()).collect();
            if gens.is_empty() {
                parts.push(format!("({val})"));
            } else {
                parts.push(format!("({val})*{gens}"));
            }
        }
        format!("v^{}*{{{}}}", self.v_exp, parts.join(" + "))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut s = Scanner::new(text);
        let c = s.classpoly()?;
        s.expect_end()?;
        Ok(c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(key, val)| {
                let classes: Vec<serde_json::Value> = key
                    .iter()
                    .map(|k| serde_json::json!([k.hv as u8, k.hh as u8]))
                    .collect();
                serde_json::json!({ "classes": classes, "u_terms": json_terms(val) })
            })
            .collect();
        serde_json::json!({ "v": self.v_exp, "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ParseError> {
        let bad = |m: &str| ParseError::at(0, 0, m);
        let k = v
            .get("v")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| bad("missing v exponent"))?;
        let mut out = ClassPoly::new(k as u32);
        for term in v
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| bad("missing terms"))?
        {
            let mut key = Vec::new();
            for c in term
                .get("classes")
                .and_then(|c| c.as_array())
                .ok_or_else(|| bad("missing classes"))?
            {
                let pair = c
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| bad("bad class"))?;
                let hv = pair[0].as_u64().ok_or_else(|| bad("bad class bit"))?;
                let hh = pair[1].as_u64().ok_or_else(|| bad("bad class bit"))?;
                let ck = ClassKey::new(hv == 1, hh == 1);
                if ck.is_trivial() {
                    return Err(bad("trivial class [0,0] is not a generator"));
                }
                key.push(ck);
            }
            out.add_term(
                key,
                terms_from_json(term.get("u_terms").ok_or_else(|| bad("missing u_terms"))?)?,
            );
        }
        Ok(out)
    }
}

impl fmt::Display for ClassPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

// ---------------------------------------------------------------------------
// text parsing

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            src: text.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::at(self.line, self.col, msg)
    }

    fn skip_ws(&mut self) {
        while let Some(&b) = self.src.get(self.pos) {
            if b == b'\n' {
                self.line += 1;
                self.col = 1;
                self.pos += 1;
            } else if b.is_ascii_whitespace() {
                self.col += 1;
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
            self.col += 1;
        }
        b
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
            self.bump();
        }
        let digits_start = self.pos;
        while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits_start {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn small_int(&mut self) -> Result<i64, ParseError> {
        let n = self.integer()?;
        i64::try_from(n).map_err(|_| self.err("integer out of range"))
    }

    /// `<term> {± <term>}` with term = `[<int>][*]u^<int>` or an integer.
    fn poly(&mut self) -> Result<LaurentU, ParseError> {
        let mut out = LaurentU::zero();
        let mut sign = BigInt::one();
        match self.peek() {
            Some(b'-') => {
                self.bump();
                sign = -sign;
            }
            Some(b'+') => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let (e, c) = self.term()?;
            out.add_term(e, c * &sign);
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    sign = BigInt::one();
                }
                Some(b'-') => {
                    self.bump();
                    sign = -BigInt::one();
                }
                _ => break,
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(i64, BigInt), ParseError> {
        match self.peek() {
            Some(b'u') => {
                self.bump();
                self.expect(b'^')?;
                Ok((self.small_int()?, BigInt::one()))
            }
            Some(b) if b.is_ascii_digit() => {
                let c = self.integer()?;
                // optional "*u^e" or juxtaposed "u^e"
                let times = self.eat(b'*');
                if self.peek() == Some(b'u') {
                    self.bump();
                    self.expect(b'^')?;
                    Ok((self.small_int()?, c))
                } else if times {
                    Err(self.err("expected 'u' after '*'"))
                } else {
                    Ok((0, c))
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn v_prefix(&mut self) -> Result<u32, ParseError> {
        if self.peek() != Some(b'v') {
            return Err(self.err("expected 'v'"));
        }
        self.bump();
        self.expect(b'^')?;
        let k = self.small_int()?;
        if k < 0 {
            return Err(self.err("v exponent must be nonnegative"));
        }
        self.expect(b'*')?;
        Ok(k as u32)
    }

    fn jpoly(&mut self) -> Result<JPoly, ParseError> {
        let k = self.v_prefix()?;
        self.expect(b'(')?;
        let body = self.poly()?;
        self.expect(b')')?;
        Ok(JPoly::new(k, body))
    }

    fn classpoly(&mut self) -> Result<ClassPoly, ParseError> {
        let k = self.v_prefix()?;
        self.expect(b'{')?;
        let mut out = ClassPoly::new(k);
        loop {
            self.expect(b'(')?;
            let val = self.poly()?;
            self.expect(b')')?;
            let mut key = Vec::new();
            if self.eat(b'*') {
                while self.peek() == Some(b'g') {
                    self.bump();
                    self.expect(b'[')?;
                    let hv = self.small_int()?;
                    self.expect(b',')?;
                    let hh = self.small_int()?;
                    self.expect(b']')?;
                    if !(0..=1).contains(&hv) || !(0..=1).contains(&hh) {
                        return Err(self.err("class bits must be 0 or 1"));
                    }
                    let ck = ClassKey::new(hv == 1, hh == 1);
                    if ck.is_trivial() {
                        return Err(self.err("trivial class g[0,0] is not a generator"));
                    }
                    key.push(ck);
                }
                if key.is_empty() {
                    return Err(self.err("expected a generator after '*'"));
                }
            }
            out.add_term(key, val);
            if !self.eat(b'+') {
                break;
            }
        }
        self.expect(b'}')?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentU {
        LaurentU::from_terms(terms.iter().copied())
    }

    #[test]
    fn add_cancels() {
        // u^2 + (-u^2) = 0
        assert!(p(&[(2, 1)]).add(&p(&[(2, -1)])).is_zero());
        // (-u^2 - u^-2) + u^-2 = -u^2
        assert_eq!(p(&[(2, -1), (-2, -1)]).add(&p(&[(-2, 1)])), p(&[(2, -1)]));
        // (u^6 + 2u^2 + u^-2) + (-u^2 - u^-2) = u^6 + u^2
        assert_eq!(
            p(&[(6, 1), (2, 2), (-2, 1)]).add(&p(&[(2, -1), (-2, -1)])),
            p(&[(6, 1), (2, 1)])
        );
    }

    #[test]
    fn mul_examples() {
        // u * u^-1 = 1
        assert_eq!(p(&[(1, 1)]).mul(&p(&[(-1, 1)])), LaurentU::one());
        // (-u^2 - u^-2)^2 = u^4 + 2 + u^-4
        let d = p(&[(2, -1), (-2, -1)]);
        assert_eq!(d.mul(&d), p(&[(4, 1), (0, 2), (-4, 1)]));
        // u^2 * (-u^2-u^-2)^2 = u^6 + 2u^2 + u^-2
        assert_eq!(p(&[(2, 1)]).mul(&d.pow(2)), p(&[(6, 1), (2, 2), (-2, 1)]));
    }

    #[test]
    fn substitution_is_involutive_homomorphism() {
        let a = p(&[(6, 1)]);
        assert_eq!(a.substitute_u_inverse(), p(&[(-6, 1)]));
        // body of the second Klein-bottle example, exponents negated
        let b = p(&[(2, 1), (0, 1), (-4, -1)]);
        assert_eq!(b.substitute_u_inverse(), p(&[(-2, 1), (0, 1), (4, -1)]));
        assert_eq!(LaurentU::zero().substitute_u_inverse(), LaurentU::zero());
        assert_eq!(b.substitute_u_inverse().substitute_u_inverse(), b);
    }

    #[test]
    fn canonical_pair_picks_term_order_minimum() {
        let j = JPoly::new(2, p(&[(6, 1)]));
        assert_eq!(j.canonical_pair(), JPoly::new(2, p(&[(-6, 1)])));
        // palindromic body is a fixed point
        let pal = JPoly::new(0, p(&[(2, -1), (-2, -1)]));
        assert_eq!(pal.canonical_pair(), pal);
        // idempotent
        let a = JPoly::new(2, p(&[(2, 1), (0, 1), (-4, -1)]));
        assert_eq!(a.canonical_pair().canonical_pair(), a.canonical_pair());
        // canonical of a = canonical of a with u -> u^-1
        let b = JPoly::new(2, a.body().substitute_u_inverse());
        assert_eq!(a.canonical_pair(), b.canonical_pair());
    }

    #[test]
    fn text_round_trips() {
        let j = JPoly::new(2, p(&[(6, 1)]));
        assert_eq!(j.to_text(), "v^2*(u^6)");
        let back = JPoly::parse("v^2*(-u^-4 + 1 + u^2)").unwrap();
        assert_eq!(back, JPoly::new(2, p(&[(-4, -1), (0, 1), (2, 1)])));
        assert_eq!(JPoly::parse(&back.to_text()).unwrap(), back);
        // the 10-term double-cover bracket value, here in u
        let long = p(&[
            (-18, 1),
            (-14, -1),
            (-10, 1),
            (-6, -1),
            (-2, -1),
            (2, -1),
            (6, -1),
            (10, 1),
            (14, -1),
            (18, 1),
        ]);
        assert_eq!(LaurentU::parse(&long.to_text()).unwrap(), long);
        assert_eq!(LaurentU::parse("0").unwrap(), LaurentU::zero());
    }

    #[test]
    fn parse_reports_location() {
        let e = JPoly::parse("v^2*(u^6 + )").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.col > 1);
    }

    #[test]
    fn classpoly_round_trip_and_specialize() {
        let mut c = ClassPoly::new(2);
        c.add_term(vec![], p(&[(2, 1), (0, 2)]));
        c.add_term(vec![ClassKey::new(true, false)], p(&[(-2, 1)]));
        let text = c.to_text();
        assert_eq!(ClassPoly::parse(&text).unwrap(), c);
        let d = p(&[(2, -1), (-2, -1)]);
        let spec = c.specialize(&d);
        // (u^2 + 2) + u^-2 * (-u^2 - u^-2) = u^2 + 1 - u^-4
        assert_eq!(spec, JPoly::new(2, p(&[(2, 1), (0, 1), (-4, -1)])));
    }

    #[test]
    fn json_round_trips() {
        let j = JPoly::new(2, p(&[(-4, -1), (0, 1), (2, 1)]));
        let v = j.to_json();
        assert_eq!(JPoly::from_json(&v).unwrap(), j);
        let big = LaurentU::monomial(
            1,
            BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap(),
        );
        assert_eq!(LaurentU::from_json(&big.to_json()).unwrap(), big);

        let mut c = ClassPoly::new(1);
        c.add_term(vec![], p(&[(0, 3)]));
        c.add_term(
            vec![ClassKey::new(false, true), ClassKey::new(true, true)],
            p(&[(2, -1)]),
        );
        assert_eq!(ClassPoly::from_json(&c.to_json()).unwrap(), c);
    }
}
