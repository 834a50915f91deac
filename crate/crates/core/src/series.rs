//! Truncated Laurent series in `1/T` with absolute precision.
//!
//! A series is `Σ_{j ≥ v} c_j T^{-j} + O(T^{-N})`: `v` is the lead exponent,
//! `N` the absolute precision. Coefficients of `T^{-j}` with `j < N` are exact.
//! `v_∞(T) = -1`, so the valuation of a nonzero series is its lead exponent.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, FieldRef};
use crate::poly::{elem_from_json, elem_to_json, Poly};

#[derive(Clone, PartialEq)]
pub struct LaurentSeries {
    field: FieldRef,
    start: i64,
    /// `coeffs[k]` is the coefficient of `T^{-(start+k)}`; `start + len == prec`.
    coeffs: Vec<Fe>,
    prec: i64,
}

impl LaurentSeries {
    fn build(field: &FieldRef, start: i64, mut coeffs: Vec<Fe>, prec: i64) -> Self {
        let want = (prec - start).max(0) as usize;
        coeffs.resize(want, Fe::ZERO);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => LaurentSeries {
                field: field.clone(),
                start: start + k as i64,
                coeffs: coeffs.split_off(k),
                prec,
            },
            None => LaurentSeries::zero(field, prec),
        }
    }

    /// `O(T^{-prec})`.
    pub fn zero(field: &FieldRef, prec: i64) -> Self {
        LaurentSeries {
            field: field.clone(),
            start: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn constant(field: &FieldRef, c: Fe, prec: i64) -> Self {
        Self::monomial(field, c, 0, prec)
    }

    pub fn one(field: &FieldRef, prec: i64) -> Self {
        Self::constant(field, Fe::ONE, prec)
    }

    /// `c T^{-j}`.
    pub fn monomial(field: &FieldRef, c: Fe, j: i64, prec: i64) -> Self {
        if j >= prec {
            return Self::zero(field, prec);
        }
        Self::build(field, j, vec![c], prec)
    }

    pub fn from_poly(p: &Poly, prec: i64) -> Self {
        let f = p.field();
        if p.is_zero() {
            return Self::zero(f, prec);
        }
        let start = -(p.deg() as i64);
        let c: Vec<Fe> = p.coeffs().iter().rev().copied().collect();
        Self::build(f, start, c, prec)
    }

    /// `1/p` to absolute precision `prec`.
    pub fn inv_poly(p: &Poly, prec: i64) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::NotInvertible("zero polynomial".into()));
        }
        let d = p.deg() as i64;
        if prec <= d {
            return Ok(Self::zero(p.field(), prec));
        }
        Self::from_poly(p, prec - 2 * d).inverse()
    }

    /// `num/den` to absolute precision `prec`.
    pub fn from_rational(num: &Poly, den: &Poly, prec: i64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NotInvertible("zero denominator".into()));
        }
        if num.is_zero() || den.deg() as i64 - num.deg() as i64 >= prec {
            return Ok(Self::zero(num.field(), prec));
        }
        let inv = Self::inv_poly(den, prec + num.deg() as i64)?;
        Ok(Self::from_poly(num, prec - den.deg() as i64).mul(&inv).truncate(prec))
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Lead exponent: the first stored index (equals `prec` for a zero series).
    pub fn lead_exp(&self) -> i64 {
        self.start
    }

    /// `v_∞`, or `None` when the series is zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `T^{-j}`, `None` beyond the precision.
    pub fn coeff(&self, j: i64) -> Option<Fe> {
        if j >= self.prec {
            None
        } else if j < self.start {
            Some(Fe::ZERO)
        } else {
            Some(self.coeffs[(j - self.start) as usize])
        }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = (prec - self.start).max(0) as usize;
        Self::build(&self.field, self.start, self.coeffs[..keep].to_vec(), prec)
    }

    /// Agreement below `prec` (both sides must be known that far).
    pub fn agrees_to(&self, o: &Self, prec: i64) -> bool {
        self.prec >= prec
            && o.prec >= prec
            && (self.start.min(o.start)..prec).all(|j| self.coeff(j) == o.coeff(j))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(*self.field == *o.field, "series over different fields");
        let f = &self.field;
        let prec = self.prec.min(o.prec);
        let start = self.start.min(o.start).min(prec);
        let c = (start..prec)
            .map(|j| f.add(self.coeff(j).unwrap(), o.coeff(j).unwrap()))
            .collect();
        Self::build(f, start, c, prec)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|f, c| f.neg(c))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: Fe) -> Self {
        if k.is_zero() {
            return Self::zero(&self.field, self.prec);
        }
        self.map_coeffs(|f, c| f.mul(c, k))
    }

    fn map_coeffs(&self, g: impl Fn(&crate::field::Field, Fe) -> Fe) -> Self {
        let f = &self.field;
        let c = self.coeffs.iter().map(|&x| g(f, x)).collect();
        Self::build(f, self.start, c, self.prec)
    }

    /// Product, known below `min(N_a + v_b, N_b + v_a)`.
    pub fn mul(&self, o: &Self) -> Self {
        assert!(*self.field == *o.field, "series over different fields");
        let f = &self.field;
        let prec = (self.prec + o.start).min(o.prec + self.start);
        let start = self.start + o.start;
        if self.is_zero() || o.is_zero() || prec <= start {
            return Self::zero(f, prec);
        }
        let len = (prec - start) as usize;
        let mut c = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (k, &b) in o.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    c[i + k] = f.add(c[i + k], f.mul(a, b));
                }
            }
        }
        Self::build(f, start, c, prec)
    }

    /// Inverse of a series with exact valuation `v`; precision becomes `N - 2v`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("series is zero to its precision".into()));
        }
        let f = &self.field;
        let u = &self.coeffs;
        let len = u.len();
        let inv0 = f.inv(u[0]);
        let mut w = vec![Fe::ZERO; len];
        w[0] = inv0;
        for k in 1..len {
            let mut s = Fe::ZERO;
            for i in 1..=k {
                if !u[i].is_zero() && !w[k - i].is_zero() {
                    s = f.add(s, f.mul(u[i], w[k - i]));
                }
            }
            w[k] = f.neg(f.mul(s, inv0));
        }
        Ok(Self::build(f, -self.start, w, self.prec - 2 * self.start))
    }

    /// `self^(p^t)`, coefficient-wise, with precision capped at `cap`.
    pub fn pow_char_capped(&self, t: u32, cap: i64) -> Self {
        let f = &self.field;
        let step = (f.characteristic() as i64).pow(t);
        let prec = self.prec.saturating_mul(step).min(cap);
        let start = self.start.saturating_mul(step);
        if self.is_zero() || start >= prec {
            return Self::zero(f, prec);
        }
        let len = (prec - start) as usize;
        let mut c = vec![Fe::ZERO; len];
        for (k, &a) in self.coeffs.iter().enumerate() {
            let idx = k * step as usize;
            if idx >= len {
                break;
            }
            c[idx] = f.frob(a, t as u64);
        }
        Self::build(f, start, c, prec)
    }

    pub fn pow_char(&self, t: u32) -> Self {
        self.pow_char_capped(t, i64::MAX)
    }

    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            return Self::one(&self.field, self.prec);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient-wise Frobenius `c ↦ c^(p^t)`.
    pub fn frob_coeffs(&self, t: u64) -> Self {
        self.map_coeffs(|f, c| f.frob(c, t))
    }

    pub fn embed(&self, emb: &Embedding) -> Self {
        let c = self.coeffs.iter().map(|&x| emb.map(x)).collect();
        Self::build(emb.target(), self.start, c, self.prec)
    }

    /// Pulls coefficients back through `emb`; `None` if one lies outside the image.
    pub fn descend(&self, emb: &Embedding) -> Option<Self> {
        let c: Option<Vec<Fe>> = self.coeffs.iter().map(|&x| emb.preimage(x)).collect();
        Some(Self::build(emb.source(), self.start, c?, self.prec))
    }

    /// Multiplies by the unit `s` so the lead coefficient becomes 1.
    pub fn monic(&self) -> Self {
        match self.coeffs.first() {
            Some(&c) => self.scale(self.field.inv(c)),
            None => self.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("series serializes")
    }

    pub fn from_json(field: &FieldRef, v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("series JSON lacks {k}")))
        };
        let start = get("leadExp")?
            .as_i64()
            .ok_or_else(|| Error::Parse("leadExp must be an integer".into()))?;
        let prec = get("absPrec")?
            .as_i64()
            .ok_or_else(|| Error::Parse("absPrec must be an integer".into()))?;
        let arr = get("coeffs")?
            .as_array()
            .ok_or_else(|| Error::Parse("coeffs must be an array".into()))?;
        let c: Result<Vec<Fe>> = arr.iter().map(|x| elem_from_json(field, x)).collect();
        let c = c?;
        if start + c.len() as i64 > prec {
            return Err(Error::Parse("coefficients extend past absPrec".into()));
        }
        Ok(Self::build(field, start, c, prec))
    }
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LaurentSeries", 3)?;
        st.serialize_field("leadExp", &self.start)?;
        let c: Vec<Value> = self
            .coeffs
            .iter()
            .map(|&x| elem_to_json(&self.field, x))
            .collect();
        st.serialize_field("coeffs", &c)?;
        st.serialize_field("absPrec", &self.prec)?;
        st.end()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = -(self.start + k as i64);
            let lit = self.field.format_elem(c);
            match (e, c == Fe::ONE) {
                (0, _) => write!(f, "{lit}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{lit}*T")?,
                (_, true) => write!(f, "T^{e}")?,
                (_, false) => write!(f, "{lit}*T^{e}")?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(T^{})", -self.prec)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn inverse_of_l1() {
        // 1/(T - T^3) = -T^-3 - T^-5 - ...
        let f = build_field(3, 1).unwrap();
        let l1 = Poly::from_ints(&f, &[0, 1, 0, -1]);
        let s = LaurentSeries::inv_poly(&l1, 12).unwrap();
        assert_eq!(s.valuation(), Some(3));
        assert_eq!(s.prec(), 12);
        for j in 0..12 {
            let want = if j >= 3 && j % 2 == 1 { f.from_int(-1) } else { Fe::ZERO };
            assert_eq!(s.coeff(j), Some(want), "j={j}");
        }
        let back = s.mul(&LaurentSeries::from_poly(&l1, 40));
        assert!(back.agrees_to(&LaurentSeries::one(&f, 9), 9));
    }

    #[test]
    fn precision_rules() {
        let f = build_field(5, 1).unwrap();
        let a = LaurentSeries::monomial(&f, Fe(2), 1, 10);
        let b = LaurentSeries::monomial(&f, Fe(3), -2, 6);
        let p = a.mul(&b);
        assert_eq!(p.prec(), 6 + 1);
        assert_eq!(p.valuation(), Some(-1));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.prec(), 8);
        assert_eq!(inv.valuation(), Some(-1));
        assert_eq!(a.add(&b).prec(), 6);
        let fr = a.pow_char(1);
        assert_eq!((fr.valuation(), fr.prec()), (Some(5), 50));
    }

    #[test]
    fn rational_matches_poly_division() {
        let f = build_field(3, 1).unwrap();
        let num = Poly::from_ints(&f, &[1, 2, 0, 1]);
        let den = Poly::from_ints(&f, &[2, 0, 1]);
        let (q, r) = num.divmod(&den).unwrap();
        let lhs = LaurentSeries::from_rational(&num, &den, 15).unwrap();
        let rhs = LaurentSeries::from_poly(&q, 15)
            .add(&LaurentSeries::from_rational(&r, &den, 15).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_roundtrip() {
        let f = build_field(3, 2).unwrap();
        let s = LaurentSeries::from_poly(&Poly::from_coeffs(&f, vec![Fe(4), Fe(1)]), 3);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"leadExp":-1,"coeffs":[[1,0],[1,1],[0,0],[0,0]],"absPrec":3}"#);
        let v = s.to_json();
        assert_eq!(LaurentSeries::from_json(&f, &v).unwrap(), s);
    }

    #[test]
    fn display() {
        let f = build_field(3, 1).unwrap();
        let s = LaurentSeries::from_poly(&Poly::from_ints(&f, &[1, 0, 2]), 2);
        assert_eq!(s.to_string(), "2*T^2 + 1 + O(T^-2)");
        assert_eq!(LaurentSeries::zero(&f, 4).to_string(), "O(T^-4)");
    }
}
