//! Text and JSON forms of polynomials and field elements.
//!
//! Text: `c0 + c1*T + c2*T^2`, ascending, zero terms omitted, unit
//! coefficients written as bare `T^k`. Over a prime field a coefficient is
//! an integer in `[0, p)`; otherwise it is its coordinate list, e.g.
//! `[1,1]*T^2`. JSON: an array of coefficients in the same literal forms.

use std::fmt;

use serde::{Serialize, Serializer};
use serde_json::Value;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::{Fe, Field, FieldRef};

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = self.field();
        let mut first = true;
        for (i, &c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let lit = field.format_elem(c);
            match (i, c == Fe::ONE) {
                (0, _) => write!(f, "{lit}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{lit}*T")?,
                (_, true) => write!(f, "T^{i}")?,
                (_, false) => write!(f, "{lit}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected integer at offset {start}")));
        }
        let v: i64 = std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::Parse(format!("{e}")))?;
        Ok(if neg { -v } else { v })
    }

    fn elem(&mut self, field: &Field) -> Result<Fe> {
        if self.eat(b'[') {
            let mut coords = Vec::new();
            if !self.eat(b']') {
                loop {
                    coords.push(self.int()?);
                    if self.eat(b']') {
                        break;
                    }
                    if !self.eat(b',') {
                        return Err(Error::Parse("expected ',' or ']'".into()));
                    }
                }
            }
            field.from_coords(&coords)
        } else {
            Ok(field.from_int(self.int()?))
        }
    }
}

/// Parses the text form, also accepting `-` between terms and repeated degrees.
impl Poly {
    pub fn parse(field: &FieldRef, s: &str) -> Result<Poly> {
        let mut lx = Lexer {
            s: s.as_bytes(),
            pos: 0,
        };
        let mut acc: Vec<Fe> = Vec::new();
        let mut negate = lx.eat(b'-');
        loop {
            let c = match lx.peek() {
                Some(b'T') => Fe::ONE,
                Some(_) => lx.elem(field)?,
                None => return Err(Error::Parse("unexpected end of input".into())),
            };
            let mut k = 0usize;
            let has_t = if lx.peek() == Some(b'T') {
                true
            } else if lx.eat(b'*') {
                if lx.peek() != Some(b'T') {
                    return Err(Error::Parse("expected T after '*'".into()));
                }
                true
            } else {
                false
            };
            if has_t {
                lx.pos += 1;
                k = 1;
                if lx.eat(b'^') {
                    let e = lx.int()?;
                    if e < 0 {
                        return Err(Error::Parse("negative exponent".into()));
                    }
                    k = e as usize;
                }
            }
            if acc.len() <= k {
                acc.resize(k + 1, Fe::ZERO);
            }
            let c = if negate { field.neg(c) } else { c };
            acc[k] = field.add(acc[k], c);
            match lx.peek() {
                None => break,
                Some(b'+') => {
                    lx.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    lx.pos += 1;
                    negate = true;
                }
                Some(ch) => {
                    return Err(Error::Parse(format!(
                        "unexpected '{}' at offset {}",
                        ch as char, lx.pos
                    )))
                }
            }
        }
        Ok(Poly::from_coeffs(field, acc))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs()
                .iter()
                .map(|&c| elem_to_json(self.field(), c))
                .collect(),
        )
    }

    pub fn from_json(field: &FieldRef, v: &Value) -> Result<Poly> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("expected a JSON array".into()))?;
        let c: Result<Vec<Fe>> = arr.iter().map(|x| elem_from_json(field, x)).collect();
        Ok(Poly::from_coeffs(field, c?))
    }
}

/// Field element literal: an integer or a coordinate list.
pub fn parse_elem(field: &FieldRef, s: &str) -> Result<Fe> {
    let mut lx = Lexer {
        s: s.as_bytes(),
        pos: 0,
    };
    let v = lx.elem(field)?;
    if lx.peek().is_some() {
        return Err(Error::Parse(format!("trailing input in element literal {s:?}")));
    }
    Ok(v)
}

pub fn elem_to_json(field: &Field, c: Fe) -> Value {
    if field.degree() == 1 {
        Value::from(c.0)
    } else {
        Value::Array(field.coords(c).into_iter().map(Value::from).collect())
    }
}

pub fn elem_from_json(field: &Field, v: &Value) -> Result<Fe> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| field.from_int(x))
            .ok_or_else(|| Error::Parse(format!("bad coefficient {n}"))),
        Value::Array(a) => {
            let coords: Option<Vec<i64>> = a.iter().map(|x| x.as_i64()).collect();
            field.from_coords(&coords.ok_or_else(|| Error::Parse("bad coordinate".into()))?)
        }
        _ => Err(Error::Parse(format!("bad coefficient {v}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn emit_prime_field() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(Poly::from_ints(&f, &[1, 0, 1]).to_string(), "1 + T^2");
        assert_eq!(Poly::from_ints(&f, &[0, 2, 2]).to_string(), "2*T + 2*T^2");
        assert_eq!(Poly::zero(&f).to_string(), "0");
    }

    #[test]
    fn emit_extension_field() {
        let f = build_field(2, 2).unwrap();
        let p = Poly::from_coeffs(&f, vec![Fe(2), Fe(1), Fe(3)]);
        assert_eq!(p.to_string(), "[0,1] + T + [1,1]*T^2");
        assert_eq!(Poly::parse(&f, "[0,1] + T + [1,1]*T^2").unwrap(), p);
    }

    #[test]
    fn parse_forms() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(
            Poly::parse(&f, "T^2 - 1").unwrap(),
            Poly::from_ints(&f, &[-1, 0, 1])
        );
        assert_eq!(
            Poly::parse(&f, "-T + 2*T + 5").unwrap(),
            Poly::from_ints(&f, &[2, 1])
        );
        assert_eq!(Poly::parse(&f, "0").unwrap(), Poly::zero(&f));
        assert!(Poly::parse(&f, "T^").is_err());
        assert!(Poly::parse(&f, "2*").is_err());
        assert!(Poly::parse(&f, "X").is_err());
    }

    #[test]
    fn json_forms() {
        let f = build_field(3, 2).unwrap();
        let p = Poly::from_coeffs(&f, vec![Fe(5), Fe(0), Fe(1)]);
        let v = p.to_json();
        assert_eq!(v.to_string(), "[[2,1],[0,0],[1,0]]");
        assert_eq!(Poly::from_json(&f, &v).unwrap(), p);
        let g = build_field(5, 1).unwrap();
        let v: Value = serde_json::from_str("[4,0,1]").unwrap();
        assert_eq!(Poly::from_json(&g, &v).unwrap().to_string(), "4 + T^2");
    }
}
