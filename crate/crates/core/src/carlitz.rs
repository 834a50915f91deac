//! The Carlitz module `φ`: the sequences `D_i`, `L_i`, the coefficients
//! `[a,k] = Ψ_k(a)` of `φ_a`, and evaluation of `φ_a` in several `A`-algebras.

use std::sync::RwLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, FieldRef};
use crate::padic::{PadicElement, PadicRing};
use crate::poly::Poly;
use crate::series::LaurentSeries;

/// Carlitz module data for one constant field `F_q`.
///
/// The `D_i` and `L_i` caches only grow; readers never see a partial entry.
pub struct Carlitz {
    field: FieldRef,
    seqs: RwLock<Sequences>,
}

struct Sequences {
    d: Vec<Poly>,
    l: Vec<Poly>,
}

impl Carlitz {
    pub fn new(field: &FieldRef) -> Self {
        let one = Poly::one(field);
        Carlitz {
            field: field.clone(),
            seqs: RwLock::new(Sequences {
                d: vec![one.clone()],
                l: vec![one],
            }),
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.size() as u64
    }

    /// `T^(q^i) - T`.
    pub fn t_qi_minus_t(&self, i: u32) -> Poly {
        let deg = (self.q() as usize).pow(i);
        Poly::monomial(&self.field, Fe::ONE, deg).sub(&Poly::t(&self.field))
    }

    fn grow(&self, i: usize) {
        if self.seqs.read().unwrap().d.len() > i {
            return;
        }
        let mut s = self.seqs.write().unwrap();
        while s.d.len() <= i {
            let k = s.d.len() as u32;
            let f = self.t_qi_minus_t(k);
            let d = f.mul(&s.d[k as usize - 1].pow_field_size());
            let l = f.neg().mul(&s.l[k as usize - 1]);
            s.d.push(d);
            s.l.push(l);
        }
    }

    /// `D_i = (T^(q^i) - T) D_{i-1}^q`, `D_0 = 1`.
    pub fn d(&self, i: usize) -> Poly {
        self.grow(i);
        self.seqs.read().unwrap().d[i].clone()
    }

    /// `L_i = (T - T^(q^i)) L_{i-1}`, `L_0 = 1`.
    pub fn l(&self, i: usize) -> Poly {
        self.grow(i);
        self.seqs.read().unwrap().l[i].clone()
    }

    pub fn basic_seq(&self, i: usize) -> (Poly, Poly) {
        (self.d(i), self.l(i))
    }

    /// `deg L_i = (q^(i+1) - q)/(q - 1)`.
    pub fn deg_l(&self, i: u32) -> u64 {
        let q = self.q();
        (q.pow(i + 1) - q) / (q - 1)
    }

    /// `deg D_i = i q^i`.
    pub fn deg_d(&self, i: u32) -> u64 {
        i as u64 * self.q().pow(i)
    }

    /// Coefficients of `φ_a` via `Ψ_{k+1} = (Ψ_k^q - Ψ_k)/(T^(q^(k+1)) - T)`.
    pub fn phi_coeffs(&self, a: &Poly) -> Result<CarlitzCoeffs> {
        if **a.field() != *self.field {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() {
            return Err(Error::InvalidArgument("φ_a requires a ≠ 0".into()));
        }
        let n = a.deg();
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut psi = a.clone();
        coeffs.push(psi.clone());
        for k in 0..n {
            let num = psi.pow_field_size().sub(&psi);
            let den = self.t_qi_minus_t(k as u32 + 1);
            psi = num
                .div_exact(&den)
                .map_err(|_| Error::InexactDivision(format!("Ψ_{}({a})", k + 1)))?;
            coeffs.push(psi.clone());
        }
        debug_assert_eq!(coeffs[n], Poly::constant(&self.field, a.lead()));
        Ok(CarlitzCoeffs {
            a: a.clone(),
            coeffs,
        })
    }

    /// `φ_a(1) = Σ_k [a,k]`.
    pub fn unit_image(&self, a: &Poly) -> Result<Poly> {
        Ok(self.phi_coeffs(a)?.eval_at_one())
    }

    /// `φ_a(1) mod m`, reducing the coefficients before summing.
    pub fn unit_image_mod(&self, a: &Poly, m: &Poly) -> Result<Poly> {
        let c = self.phi_coeffs(a)?;
        let mut acc = Poly::zero(&self.field);
        for k in &c.coeffs {
            acc = acc.add(&k.rem(m)?);
        }
        acc.rem(m)
    }

    /// True iff `φ_{P-1}(1) ≡ 0 (mod P^2)`.
    pub fn is_wieferich(&self, prime: &Poly) -> Result<bool> {
        let pm1 = prime.sub(&Poly::one(&self.field));
        Ok(self.unit_image_mod(&pm1, &prime.square())?.is_zero())
    }

    pub fn check_prime(&self, prime: &Poly) -> Result<()> {
        if **prime.field() != *self.field {
            return Err(Error::FieldMismatch);
        }
        if prime.is_constant() || !prime.is_monic() || !prime.is_irreducible()? {
            return Err(Error::NotPrime(prime.to_string()));
        }
        Ok(())
    }

    /// Checks `[P,0] = P`, `[P,d] = 1`, `P | [P,k]` and `([P,k]/P) L_k ≡ 1 (mod P)` for `k < d`.
    pub fn lemma3_report(&self, prime: &Poly) -> Result<Lemma3Report> {
        self.check_prime(prime)?;
        let d = prime.deg();
        let c = self.phi_coeffs(prime)?;
        let mut rows = Vec::with_capacity(d);
        for k in 0..d {
            let (quot, r) = c.coeffs[k].divmod(prime)?;
            let divisible = r.is_zero();
            let congruence = divisible && quot.mul_mod(&self.l(k), prime).is_one();
            rows.push(Lemma3Row {
                k,
                divisible,
                congruence,
            });
        }
        Ok(Lemma3Report {
            prime: prime.clone(),
            d,
            constant_term_ok: c.coeffs[0] == *prime,
            top_coeff_ok: c.coeffs[d].is_one(),
            rows,
        })
    }
}

#[derive(Clone, Debug)]
pub struct CarlitzCoeffs {
    pub a: Poly,
    /// `coeffs[k] = [a,k]`, `k = 0..=deg a`.
    pub coeffs: Vec<Poly>,
}

impl CarlitzCoeffs {
    pub fn eval_at_one(&self) -> Poly {
        self.coeffs
            .iter()
            .fold(Poly::zero(self.a.field()), |acc, c| acc.add(c))
    }

    /// `Σ_k [a,k] x^(q^k)` in the given algebra.
    pub fn apply<R: CarlitzAlgebra>(&self, x: &R::Elem, alg: &R) -> R::Elem {
        let mut acc = alg.scale(&self.coeffs[0], x);
        let mut y = x.clone();
        for c in &self.coeffs[1..] {
            y = alg.pow_q(&y);
            if !c.is_zero() {
                acc = alg.add(&acc, &alg.scale(c, &y));
            }
        }
        acc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma3Row {
    pub k: usize,
    pub divisible: bool,
    pub congruence: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma3Report {
    pub prime: Poly,
    pub d: usize,
    pub constant_term_ok: bool,
    pub top_coeff_ok: bool,
    pub rows: Vec<Lemma3Row>,
}

impl Lemma3Report {
    pub fn pass(&self) -> bool {
        self.constant_term_ok && self.top_coeff_ok && self.rows.iter().all(|r| r.congruence)
    }
}

/// An `F_q`-algebra with an `A`-algebra structure map and a `q`-power map.
pub trait CarlitzAlgebra {
    type Elem: Clone;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplication by the image of `a ∈ A`.
    fn scale(&self, a: &Poly, x: &Self::Elem) -> Self::Elem;
    fn pow_q(&self, x: &Self::Elem) -> Self::Elem;
}

/// `F_{q^n}[T]` as an `A`-algebra (`n = 1` is `A` itself).
#[derive(Clone)]
pub struct PolyAlgebra {
    pub emb: Embedding,
}

impl PolyAlgebra {
    pub fn new(base: &FieldRef) -> Self {
        PolyAlgebra {
            emb: Embedding::identity(base),
        }
    }
}

impl CarlitzAlgebra for PolyAlgebra {
    type Elem = Poly;

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn scale(&self, a: &Poly, x: &Poly) -> Poly {
        a.embed(&self.emb).mul(x)
    }

    fn pow_q(&self, x: &Poly) -> Poly {
        x.pow_char(self.emb.source().degree())
    }
}

/// `A/MA`, elements are residues of degree `< deg M`.
#[derive(Clone)]
pub struct QuotientAlgebra {
    pub modulus: Poly,
}

impl QuotientAlgebra {
    pub fn new(modulus: &Poly) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::DivideByZeroPoly);
        }
        Ok(QuotientAlgebra {
            modulus: modulus.clone(),
        })
    }

    pub fn reduce(&self, x: &Poly) -> Poly {
        x.rem(&self.modulus).expect("nonzero modulus")
    }
}

impl CarlitzAlgebra for QuotientAlgebra {
    type Elem = Poly;

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn scale(&self, a: &Poly, x: &Poly) -> Poly {
        a.mul_mod(x, &self.modulus)
    }

    fn pow_q(&self, x: &Poly) -> Poly {
        x.pow_field_size_mod(&self.modulus)
    }
}

/// `F_{q^N}((1/T))`, truncated series with `A` embedded through `emb`.
#[derive(Clone)]
pub struct LaurentAlgebra {
    pub emb: Embedding,
}

impl CarlitzAlgebra for LaurentAlgebra {
    type Elem = LaurentSeries;

    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.add(b)
    }

    fn scale(&self, a: &Poly, x: &LaurentSeries) -> LaurentSeries {
        let a = a.embed(&self.emb);
        let prec = x.prec() + a.deg() as i64;
        LaurentSeries::from_poly(&a, prec).mul(x)
    }

    fn pow_q(&self, x: &LaurentSeries) -> LaurentSeries {
        x.pow_char(self.emb.source().degree())
    }
}

/// Runtime choice of algebra for [`phi_apply`].
#[derive(Clone)]
pub enum AlgebraHandle {
    Poly(PolyAlgebra),
    Quotient(QuotientAlgebra),
    Laurent(LaurentAlgebra),
    Padic(PadicRing),
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraElement {
    Poly(Poly),
    Residue(Poly),
    Series(LaurentSeries),
    Padic(PadicElement),
}

/// `φ_a(x)` in whichever algebra `alg` names.
pub fn phi_apply(
    carlitz: &Carlitz,
    a: &Poly,
    x: &AlgebraElement,
    alg: &AlgebraHandle,
) -> Result<AlgebraElement> {
    let c = carlitz.phi_coeffs(a)?;
    match (alg, x) {
        (AlgebraHandle::Poly(r), AlgebraElement::Poly(x)) if *x.field() == *r.emb.target() => {
            Ok(AlgebraElement::Poly(c.apply(x, r)))
        }
        (AlgebraHandle::Quotient(r), AlgebraElement::Residue(x))
            if *x.field() == *r.modulus.field() =>
        {
            Ok(AlgebraElement::Residue(c.apply(&r.reduce(x), r)))
        }
        (AlgebraHandle::Laurent(r), AlgebraElement::Series(x)) if *x.field() == *r.emb.target() => {
            Ok(AlgebraElement::Series(c.apply(x, r)))
        }
        (AlgebraHandle::Padic(r), AlgebraElement::Padic(x)) if r.contains(x) => {
            Ok(AlgebraElement::Padic(c.apply(x, r)))
        }
        _ => Err(Error::AlgebraMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn c3() -> Carlitz {
        Carlitz::new(&build_field(3, 1).unwrap())
    }

    #[test]
    fn basic_sequences() {
        let c = c3();
        let f = c.field().clone();
        let (d0, l0) = c.basic_seq(0);
        assert!(d0.is_one() && l0.is_one());
        let (d1, l1) = c.basic_seq(1);
        assert_eq!(d1, Poly::from_ints(&f, &[0, -1, 0, 1]));
        assert_eq!(l1, Poly::from_ints(&f, &[0, 1, 0, -1]));
        assert_eq!(c.l(2).deg(), 12);
        for i in 0..4 {
            assert_eq!(c.l(i).deg() as u64, c.deg_l(i as u32));
            assert_eq!(c.d(i).deg() as u64, c.deg_d(i as u32));
        }
    }

    #[test]
    fn phi_coeff_examples() {
        let c = c3();
        let f = c.field().clone();
        let t = c.phi_coeffs(&Poly::t(&f)).unwrap();
        assert_eq!(t.coeffs, vec![Poly::t(&f), Poly::one(&f)]);

        let a = Poly::from_ints(&f, &[1, 0, 1]);
        let k = c.phi_coeffs(&a).unwrap();
        assert_eq!(
            k.coeffs,
            vec![
                a.clone(),
                Poly::from_ints(&f, &[0, 1, 0, 1]),
                Poly::one(&f)
            ]
        );

        let two = Poly::from_ints(&f, &[2]);
        assert_eq!(c.phi_coeffs(&two).unwrap().coeffs, vec![two.clone()]);
    }

    #[test]
    fn phi_apply_in_a() {
        let c = c3();
        let f = c.field().clone();
        let alg = AlgebraHandle::Poly(PolyAlgebra::new(&f));
        let one = AlgebraElement::Poly(Poly::one(&f));
        let r = phi_apply(&c, &Poly::t(&f), &one, &alg).unwrap();
        assert_eq!(r, AlgebraElement::Poly(Poly::from_ints(&f, &[1, 1])));
        let t2 = Poly::monomial(&f, Fe::ONE, 2);
        let r = phi_apply(&c, &t2, &one, &alg).unwrap();
        assert_eq!(r, AlgebraElement::Poly(Poly::from_ints(&f, &[1, 1, 1, 1])));
    }

    #[test]
    fn phi_apply_mod_p_squared() {
        let c = c3();
        let f = c.field().clone();
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        let p2 = p.square();
        let alg = AlgebraHandle::Quotient(QuotientAlgebra::new(&p2).unwrap());
        let pm1 = p.sub(&Poly::one(&f));
        let r = phi_apply(&c, &pm1, &AlgebraElement::Residue(Poly::one(&f)), &alg).unwrap();
        let expected = Poly::from_ints(&f, &[1, 1]).mul(&p).rem(&p2).unwrap();
        assert_eq!(r, AlgebraElement::Residue(expected));
    }

    #[test]
    fn algebra_mismatch() {
        let c = c3();
        let f = c.field().clone();
        let alg = AlgebraHandle::Poly(PolyAlgebra::new(&f));
        let x = AlgebraElement::Residue(Poly::one(&f));
        assert_eq!(
            phi_apply(&c, &Poly::t(&f), &x, &alg).err(),
            Some(Error::AlgebraMismatch)
        );
    }

    #[test]
    fn lemma3_examples() {
        let c = c3();
        let f = c.field().clone();
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        let rep = c.lemma3_report(&p).unwrap();
        assert!(rep.pass());
        assert_eq!(rep.rows.len(), 2);
        let rep = c.lemma3_report(&Poly::t(&f)).unwrap();
        assert!(rep.pass());
        assert!(matches!(
            c.lemma3_report(&Poly::from_ints(&f, &[-1, 0, 1])),
            Err(Error::NotPrime(_))
        ));
    }
}
