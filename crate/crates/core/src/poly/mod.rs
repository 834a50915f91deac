//! Dense univariate polynomials over a [`crate::field::Field`], i.e. the rings `F_q[T]` and
//! `F_{q^n}[T]`.
//!
//! Coefficients are stored in ascending degree order; the vector is empty for
//! the zero polynomial and has a nonzero last entry otherwise.

mod factor;
mod norm;
mod text;

pub use factor::{monic_irreducibles, Factorization, MonicIter};
pub use norm::norm_to_base;
pub use text::{elem_from_json, elem_to_json, parse_elem};

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, FieldRef};

#[derive(Clone)]
pub struct Poly {
    field: FieldRef,
    coeffs: Vec<Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn from_coeffs(field: &FieldRef, coeffs: Vec<Fe>) -> Self {
        Poly {
            field: field.clone(),
            coeffs,
        }
        .normalize()
    }

    /// Coefficients given as integers of the prime subfield, ascending degree.
    pub fn from_ints(field: &FieldRef, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Self::from_coeffs(field, c)
    }

    pub fn zero(field: &FieldRef) -> Self {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn constant(field: &FieldRef, c: Fe) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// The indeterminate `T`.
    pub fn t(field: &FieldRef) -> Self {
        Self::monomial(field, Fe::ONE, 1)
    }

    pub fn monomial(field: &FieldRef, c: Fe, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero(field);
        }
        let mut coeffs = vec![Fe::ZERO; k + 1];
        coeffs[k] = c;
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0 (callers check `is_zero`).
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    fn same_field(&self, o: &Poly) {
        assert!(self.field == o.field, "polynomials over different fields");
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.same_field(o);
        let f = &self.field;
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut c = long.coeffs.clone();
        for (i, &b) in short.coeffs.iter().enumerate() {
            c[i] = f.add(c[i], b);
        }
        Poly::from_coeffs(f, c)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by `T^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; k];
        c.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field.clone(),
            coeffs: c,
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        self.same_field(o);
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let n = self.coeffs.len() + o.coeffs.len() - 1;
        if f.degree() == 1 {
            let p = f.characteristic() as u64;
            let mut acc = vec![0u64; n];
            // p < 2^20, so p^2 * 2^20 terms stays below 2^60 before the reductions.
            let mut pending = 0usize;
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, &b) in o.coeffs.iter().enumerate() {
                    acc[i + j] += a.0 as u64 * b.0 as u64;
                }
                pending += 1;
                if pending >= 1 << 19 {
                    acc.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
            }
            let c = acc.into_iter().map(|x| Fe((x % p) as u32)).collect();
            return Poly::from_coeffs(f, c);
        }
        let mut c = vec![Fe::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, c)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(b);
        if b.is_zero() {
            return Err(Error::DivideByZeroPoly);
        }
        let f = &self.field;
        let db = b.deg();
        if self.coeffs.len() < b.coeffs.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lc = f.inv(b.lead());
        let mut r = self.coeffs.clone();
        let mut q = vec![Fe::ZERO; self.coeffs.len() - db];
        for i in (db..r.len()).rev() {
            let c = f.mul(r[i], inv_lc);
            if c.is_zero() {
                continue;
            }
            q[i - db] = c;
            let nc = f.neg(c);
            for (j, &bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    r[i - db + j] = f.add(r[i - db + j], f.mul(nc, bj));
                }
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(f, q), Poly::from_coeffs(f, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    /// Exact quotient; `InexactDivision` if `b` does not divide `self`.
    pub fn div_exact(&self, b: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(b)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("({self}) / ({b})")));
        }
        Ok(q)
    }

    pub fn divides(&self, a: &Poly) -> bool {
        !self.is_zero() && a.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g`, `g` the monic gcd.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(r0.lead());
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ok()?.xgcd(m);
        if g.is_one() {
            s.rem(m).ok()
        } else {
            None
        }
    }

    pub fn mul_mod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m).expect("nonzero modulus")
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = Poly::one(&self.field).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Applies `x -> x^(p^t)` to every coefficient.
    pub fn frob_coeffs(&self, t: u64) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&c| f.frob(c, t)).collect())
    }

    /// `self^(p^t)`, computed coefficient-wise since the characteristic is `p`.
    pub fn pow_char(&self, t: u32) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let f = &self.field;
        let step = (f.characteristic() as usize).pow(t);
        let mut c = vec![Fe::ZERO; self.deg() * step + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[i * step] = f.frob(a, t as u64);
        }
        Poly::from_coeffs(f, c)
    }

    /// `self^Q` where `Q` is the size of the coefficient field.
    pub fn pow_field_size(&self) -> Poly {
        self.pow_char(self.field.degree())
    }

    /// `self^Q mod m`, `Q` the size of the coefficient field.
    pub fn pow_field_size_mod(&self, m: &Poly) -> Poly {
        self.rem(m)
            .expect("nonzero modulus")
            .pow_field_size()
            .rem(m)
            .expect("nonzero modulus")
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_int(i as i64)))
            .collect();
        Poly::from_coeffs(f, c)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Largest `k <= limit` with `p^k | self`, together with `self / p^k`.
    pub fn valuation(&self, p: &Poly, limit: u32) -> (u32, Poly) {
        let mut cur = self.clone();
        let mut k = 0;
        if cur.is_zero() {
            return (limit, cur);
        }
        while k < limit {
            let (q, r) = cur.divmod(p).expect("nonzero prime");
            if !r.is_zero() {
                break;
            }
            cur = q;
            k += 1;
        }
        (k, cur)
    }

    /// Maps coefficients through a field embedding.
    pub fn embed(&self, emb: &Embedding) -> Poly {
        assert!(**emb.source() == *self.field);
        Poly::from_coeffs(
            emb.target(),
            self.coeffs.iter().map(|&c| emb.map(c)).collect(),
        )
    }

    /// Pulls coefficients back through an embedding; `None` if one is outside the image.
    pub fn descend(&self, emb: &Embedding) -> Option<Poly> {
        assert!(**emb.target() == *self.field);
        let c: Option<Vec<Fe>> = self.coeffs.iter().map(|&c| emb.preimage(c)).collect();
        Some(Poly::from_coeffs(emb.source(), c?))
    }

    /// Lexicographic order on ascending coefficient tuples (coefficients by
    /// their own coordinate lex order); shorter tuples first.
    pub fn lex_cmp(&self, o: &Poly) -> Ordering {
        self.coeffs.len().cmp(&o.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().zip(&o.coeffs) {
                let c = self.field.lex_key(*a).cmp(&self.field.lex_key(*b));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}


impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        Poly::add(self, o)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        Poly::sub(self, o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        Poly::mul(self, o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn f3() -> FieldRef {
        build_field(3, 1).unwrap()
    }

    #[test]
    fn divmod_examples() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 0, 1]);
        let (q, r) = a.divmod(&Poly::t(&f)).unwrap();
        assert_eq!(q, Poly::t(&f));
        assert_eq!(r, Poly::one(&f));

        let a = Poly::from_ints(&f, &[1, 1, 1, 1]);
        let (q, r) = a.divmod(&Poly::from_ints(&f, &[1, 0, 1])).unwrap();
        assert_eq!(q, Poly::from_ints(&f, &[1, 1]));
        assert!(r.is_zero());

        let (q, r) = a.divmod(&Poly::one(&f)).unwrap();
        assert_eq!(q, a);
        assert!(r.is_zero());

        assert_eq!(a.divmod(&Poly::zero(&f)).err(), Some(Error::DivideByZeroPoly));
    }

    #[test]
    fn canonical_form() {
        let f = f3();
        let z = Poly::from_ints(&f, &[0, 0, 3]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        let a = Poly::from_ints(&f, &[1, 2, 0]);
        assert_eq!(a.degree(), Some(1));
        assert_eq!(a.sub(&a), Poly::zero(&f));
    }

    #[test]
    fn xgcd_and_inverse() {
        let f = build_field(5, 1).unwrap();
        let m = Poly::from_ints(&f, &[2, 0, 1, 1]);
        let a = Poly::from_ints(&f, &[1, 3, 4]);
        let inv = a.inv_mod(&m).unwrap();
        assert!(a.mul_mod(&inv, &m).is_one());
        let (g, s, t) = a.xgcd(&m);
        assert_eq!(s.mul(&a).add(&t.mul(&m)), g);
    }

    #[test]
    fn pow_char_matches_pow() {
        let f = build_field(2, 2).unwrap();
        let a = Poly::from_coeffs(&f, vec![Fe(2), Fe(3), Fe(1)]);
        assert_eq!(a.pow_char(1), a.pow(2));
        assert_eq!(a.pow_field_size(), a.pow(4));
        let g = build_field(3, 1).unwrap();
        let b = Poly::from_ints(&g, &[2, 1, 1]);
        assert_eq!(b.pow_field_size(), b.pow(3));
    }

    #[test]
    fn valuation_counts() {
        let f = f3();
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        let x = p.pow(3).mul(&Poly::t(&f));
        let (k, rest) = x.valuation(&p, 10);
        assert_eq!(k, 3);
        assert_eq!(rest, Poly::t(&f));
        assert_eq!(x.valuation(&p, 2).0, 2);
    }
}
