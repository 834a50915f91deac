//! Finite fields `F_{p^E}` with deterministic moduli.
//!
//! Elements are packed coordinate vectors in the power basis of the modulus:
//! `Fe(c0 + c1*p + ... + c_{E-1}*p^{E-1})`. Multiplication and addition go
//! through exponential/logarithm and Zech tables built once per field, so
//! fields are limited to [`MAX_FIELD_SIZE`] elements.
//!
//! Extensions `F_{q^n}` of `F_q = F_{p^e}` are plain `F_p`-extensions of degree
//! `e*n`; the copy of `F_q` inside them is given by an [`Embedding`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::Poly;

pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const ZECH_NONE: u32 = u32::MAX;

/// A packed field element; meaningful only together with its [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub type FieldRef = Arc<Field>;

pub struct Field {
    p: u32,
    degree: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    lex: Vec<Fe>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.degree)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Field", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("e", &self.degree)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.end()
    }
}

/// Builds the field `F_{p^e}` used as the constant field `F_q`.
///
/// Rejects `q = p^e < 3`; see [`build_field_with`] for the override.
pub fn build_field(p: u64, e: u32) -> Result<FieldRef> {
    build_field_with(p, e, false)
}

pub fn build_field_with(p: u64, e: u32, allow_q2: bool) -> Result<FieldRef> {
    if !arith::is_prime(p) {
        return Err(Error::NonPrimeP(p));
    }
    if e == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    let q = (p as u128).saturating_pow(e);
    if q < 3 && !allow_q2 {
        return Err(Error::QTooSmall(q as u64));
    }
    field(p as u32, e)
}

/// Builds `F_q` from a literal `q = p^e`.
pub fn build_field_q(q: u64, allow_q2: bool) -> Result<FieldRef> {
    let (p, e) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    build_field_with(p, e, allow_q2)
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), FieldRef>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), FieldRef>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Unchecked constructor (no `q >= 3` rule); results are cached per `(p, degree)`.
pub(crate) fn field(p: u32, degree: u32) -> Result<FieldRef> {
    if let Some(f) = cache().lock().unwrap().get(&(p, degree)) {
        return Ok(f.clone());
    }
    let size = (p as u128).checked_pow(degree).unwrap_or(u128::MAX);
    if size > MAX_FIELD_SIZE as u128 {
        return Err(Error::FieldTooLarge(size));
    }
    let built = Arc::new(if degree == 1 {
        Field::prime(p)
    } else {
        Field::extension(p, degree)?
    });
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry((p, degree)).or_insert(built).clone())
}

impl Field {
    fn prime(p: u32) -> Field {
        let n = p - 1;
        let g = if p == 2 {
            1
        } else {
            let divs = arith::prime_divisors(n as u64);
            (2..p)
                .find(|&g| {
                    divs.iter()
                        .all(|&r| arith::pow_mod(g as u64, n as u64 / r, p as u64) != 1)
                })
                .expect("primitive root exists")
        };
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![u32::MAX; p as usize];
        let mut cur = 1u64;
        for k in 0..n as usize {
            exp[k] = cur as u32;
            exp[k + n as usize] = cur as u32;
            log[cur as usize] = k as u32;
            cur = cur * g as u64 % p as u64;
        }
        Field {
            p,
            degree: 1,
            size: p,
            modulus: vec![0, 1],
            exp,
            log,
            zech: Vec::new(),
            lex: (0..p).map(Fe).collect(),
        }
    }

    fn extension(p: u32, degree: u32) -> Result<Field> {
        let base = field(p, 1)?;
        let size = p.pow(degree);
        let modulus = smallest_irreducible(&base, degree as usize);
        let modpoly = Poly::from_coeffs(&base, modulus.iter().map(|&c| Fe(c)).collect());

        let to_poly = |idx: u32| -> Poly {
            let mut coeffs = Vec::with_capacity(degree as usize);
            let mut v = idx;
            for _ in 0..degree {
                coeffs.push(Fe(v % p));
                v /= p;
            }
            Poly::from_coeffs(&base, coeffs)
        };
        let pack = |f: &Poly| -> u32 {
            let mut v = 0u32;
            for (i, c) in f.coeffs().iter().enumerate() {
                v += c.0 * p.pow(i as u32);
            }
            v
        };

        let n = size - 1;
        let divs = arith::prime_divisors(n as u64);
        let one = Poly::one(&base);
        let g = (2..size)
            .map(to_poly)
            .find(|cand| {
                divs.iter()
                    .all(|&r| cand.pow_mod(n as u64 / r, &modpoly) != one)
            })
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = one;
        for k in 0..n as usize {
            let v = pack(&cur);
            exp[k] = v;
            exp[k + n as usize] = v;
            log[v as usize] = k as u32;
            cur = cur.mul(&g).rem(&modpoly).expect("nonzero modulus");
        }

        let mut zech = Vec::new();
        if p != 2 {
            zech = (0..n as usize)
                .map(|k| {
                    let v = exp[k];
                    let c0 = v % p;
                    let w = v - c0 + (c0 + 1) % p;
                    if w == 0 {
                        ZECH_NONE
                    } else {
                        log[w as usize]
                    }
                })
                .collect();
        }

        let mut f = Field {
            p,
            degree,
            size,
            modulus,
            exp,
            log,
            zech,
            lex: Vec::new(),
        };
        let mut lex: Vec<Fe> = (0..size).map(Fe).collect();
        lex.sort_by_key(|&x| f.lex_key(x));
        f.lex = lex;
        Ok(f)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Ascending coefficients of the defining modulus (monic, degree = `degree()`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements, sorted lexicographically by ascending coordinate tuple.
    pub fn elements_lex(&self) -> &[Fe] {
        &self.lex
    }

    /// Sort key realising the lexicographic order on `(c0, c1, ...)`.
    pub fn lex_key(&self, x: Fe) -> u32 {
        let mut v = x.0;
        let mut key = 0u32;
        for _ in 0..self.degree {
            key = key * self.p + v % self.p;
            v /= self.p;
        }
        key
    }

    pub fn coords(&self, x: Fe) -> Vec<u32> {
        let mut v = x.0;
        (0..self.degree)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[i64]) -> Result<Fe> {
        if coords.len() > self.degree as usize {
            return Err(Error::Parse(format!(
                "coordinate list of length {} for a degree-{} field",
                coords.len(),
                self.degree
            )));
        }
        let mut v = 0u32;
        for (i, &c) in coords.iter().enumerate() {
            v += c.rem_euclid(self.p as i64) as u32 * self.p.pow(i as u32);
        }
        Ok(Fe(v))
    }

    /// Image of an integer in the prime subfield.
    #[inline]
    pub fn from_int(&self, c: i64) -> Fe {
        Fe(c.rem_euclid(self.p as i64) as u32)
    }

    /// The generator `u` of the power basis (a root of the modulus).
    pub fn generator(&self) -> Fe {
        if self.degree == 1 {
            Fe(0)
        } else {
            Fe(self.p)
        }
    }

    #[inline]
    fn order(&self) -> u32 {
        self.size - 1
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.degree == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.order();
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[d as usize];
        if z == ZECH_NONE {
            Fe(0)
        } else {
            Fe(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        if self.degree == 1 {
            return Fe(self.p - a.0);
        }
        let n = self.order();
        Fe(self.exp[(self.log[a.0 as usize] + n / 2) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        if self.degree == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero in {self:?}");
        let n = self.order();
        let l = self.log[a.0 as usize];
        Fe(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe(0);
        }
        let n = self.order() as u128;
        let l = (self.log[a.0 as usize] as u128 * (k as u128 % n)) % n;
        Fe(self.exp[l as usize])
    }

    /// `a^(p^t)`.
    pub fn frob(&self, a: Fe, t: u64) -> Fe {
        if a.0 == 0 || self.size == self.p {
            return a;
        }
        let k = arith::pow_mod(self.p as u64, t % self.degree as u64, self.order() as u64);
        self.pow(a, k)
    }

    /// `g^k` for the table generator `g` of the multiplicative group.
    pub fn exp_gen(&self, k: u64) -> Fe {
        Fe(self.exp[(k % self.order() as u64) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fe) -> u64 {
        assert!(!a.is_zero());
        let n = self.order() as u64;
        let l = self.log[a.0 as usize] as u64;
        n / arith::gcd(n, l)
    }

    pub fn format_elem(&self, a: Fe) -> String {
        if self.degree == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }
}

/// Lexicographically smallest monic irreducible of the given degree over `F_p`.
fn smallest_irreducible(base: &FieldRef, degree: usize) -> Vec<u32> {
    let p = base.characteristic();
    let total = (p as u64).pow(degree as u32);
    for k in 0..total {
        // c0 is the most significant digit of k, so increasing k walks the lex order.
        let mut coeffs = vec![0u32; degree + 1];
        let mut v = k;
        for i in (0..degree).rev() {
            coeffs[i] = (v % p as u64) as u32;
            v /= p as u64;
        }
        coeffs[degree] = 1;
        let f = Poly::from_coeffs(base, coeffs.iter().map(|&c| Fe(c)).collect());
        if f.is_irreducible().unwrap_or(false) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A field element bundled with its field.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldRef,
    value: Fe,
}

impl FieldElement {
    pub fn new(field: &FieldRef, value: Fe) -> Self {
        FieldElement {
            field: field.clone(),
            value,
        }
    }

    pub fn from_coords(field: &FieldRef, coords: &[i64]) -> Result<Self> {
        Ok(Self::new(field, field.from_coords(coords)?))
    }

    pub fn zero(field: &FieldRef) -> Self {
        Self::new(field, Fe::ZERO)
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::new(field, Fe::ONE)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn coords(&self) -> Vec<u32> {
        self.field.coords(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &Self) {
        assert!(self.field == other.field, "field mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Self::new(&self.field, self.field.add(self.value, o.value))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Self::new(&self.field, self.field.sub(self.value, o.value))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        Self::new(&self.field, self.field.mul(self.value, o.value))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.field.neg(self.value))
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(&self.field, self.field.inv(self.value)))
    }

    pub fn pow(&self, k: u64) -> Self {
        Self::new(&self.field, self.field.pow(self.value, k))
    }

    pub fn frobenius(&self, t: u64) -> Self {
        frobenius(self, t)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", c.join(","))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

/// `x^(p^t)`.
pub fn frobenius(x: &FieldElement, t: u64) -> FieldElement {
    FieldElement::new(&x.field, x.field.frob(x.value, t))
}

/// A ring embedding `F_{p^a} -> F_{p^b}` (`a | b`), fixed by sending the source
/// generator to the lexicographically smallest root of its modulus in the target.
#[derive(Clone)]
pub struct Embedding {
    source: FieldRef,
    target: FieldRef,
    root: Fe,
    image: Vec<Fe>,
    preimage: HashMap<Fe, Fe>,
}

impl Embedding {
    pub fn new(source: &FieldRef, target: &FieldRef) -> Result<Self> {
        if source.p != target.p || !target.degree.is_multiple_of(source.degree) {
            return Err(Error::NoEmbedding {
                src_p: source.p,
                src_deg: source.degree,
                dst_p: target.p,
                dst_deg: target.degree,
            });
        }
        let eval_modulus = |r: Fe| -> Fe {
            let mut acc = Fe::ZERO;
            for &c in source.modulus.iter().rev() {
                acc = target.add(target.mul(acc, r), target.from_int(c as i64));
            }
            acc
        };
        let root = *target
            .elements_lex()
            .iter()
            .find(|&&r| eval_modulus(r).is_zero())
            .expect("source modulus splits in the target");

        let mut image = Vec::with_capacity(source.size as usize);
        let mut preimage = HashMap::with_capacity(source.size as usize);
        for idx in 0..source.size {
            let coords = source.coords(Fe(idx));
            let mut acc = Fe::ZERO;
            for &c in coords.iter().rev() {
                acc = target.add(target.mul(acc, root), target.from_int(c as i64));
            }
            image.push(acc);
            preimage.insert(acc, Fe(idx));
        }
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            root,
            image,
            preimage,
        })
    }

    pub fn identity(field: &FieldRef) -> Self {
        Embedding::new(field, field).expect("identity embedding")
    }

    pub fn source(&self) -> &FieldRef {
        &self.source
    }

    pub fn target(&self) -> &FieldRef {
        &self.target
    }

    /// Image of the source generator.
    pub fn root(&self) -> Fe {
        self.root
    }

    #[inline]
    pub fn map(&self, x: Fe) -> Fe {
        self.image[x.0 as usize]
    }

    /// Inverse image, if `y` lies in the embedded copy of the source.
    #[inline]
    pub fn preimage(&self, y: Fe) -> Option<Fe> {
        self.preimage.get(&y).copied()
    }
}

pub fn embed(x: &FieldElement, target: &FieldRef) -> Result<FieldElement> {
    let emb = Embedding::new(&x.field, target)?;
    Ok(FieldElement::new(target, emb.map(x.value)))
}

/// `F_q ⊂ F_{q^n}` with the fixed embedding.
#[derive(Clone)]
pub struct Tower {
    pub base: FieldRef,
    pub ext: FieldRef,
    pub n: u32,
    pub emb: Embedding,
}

impl Tower {
    pub fn new(base: &FieldRef, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree n must be >= 1".into()));
        }
        let ext = field(base.p, base.degree * n)?;
        let emb = Embedding::new(base, &ext)?;
        Ok(Tower {
            base: base.clone(),
            ext,
            n,
            emb,
        })
    }

    /// `q = |F_q|`.
    pub fn q(&self) -> u64 {
        self.base.size as u64
    }

    /// The `q`-power Frobenius of `F_{q^n}/F_q`, applied `t` times.
    pub fn frob_q(&self, x: Fe, t: u64) -> Fe {
        self.ext.frob(x, t * self.base.degree as u64)
    }
}

pub struct RootsOfUnity {
    pub tower: Tower,
    pub roots: Vec<FieldElement>,
}

/// All `m`-th roots of unity, inside `F_{q^N}` with `N = ord_m(q)`, in lex order.
pub fn roots_of_unity(m: u64, base: &FieldRef) -> Result<RootsOfUnity> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    if m.is_multiple_of(base.p as u64) {
        return Err(Error::MNotCoprimeToP { m, p: base.p });
    }
    let q = base.size as u64;
    let big_n = arith::multiplicative_order(q % m, m) as u32;
    let tower = Tower::new(base, big_n)?;
    let ext = tower.ext.clone();
    let step = (ext.size as u64 - 1) / m;
    let mut roots: Vec<Fe> = (0..m).map(|k| ext.exp_gen(k * step)).collect();
    roots.sort_by_key(|&x| ext.lex_key(x));
    let roots = roots.into_iter().map(|r| FieldElement::new(&ext, r)).collect();
    Ok(RootsOfUnity { tower, roots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(f: &FieldRef) -> Vec<Fe> {
        (0..f.size()).map(Fe).collect()
    }

    #[test]
    fn prime_field_modulus() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 3);
    }

    #[test]
    fn quadratic_moduli() {
        assert_eq!(build_field(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(build_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rebuild_is_identical() {
        let a = field(5, 2).unwrap();
        let b = Field::extension(5, 2).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.exp, b.exp);
    }

    #[test]
    fn errors() {
        assert_eq!(build_field(4, 1).err(), Some(Error::NonPrimeP(4)));
        assert_eq!(build_field(2, 1).err(), Some(Error::QTooSmall(2)));
        assert!(build_field_with(2, 1, true).is_ok());
    }

    #[test]
    fn field_axioms_small() {
        for (p, e) in [(2u64, 2u32), (3, 1), (3, 2), (5, 1), (2, 3)] {
            let f = build_field(p, e).unwrap();
            let els = all(&f);
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                assert_eq!(f.pow(a, f.size() as u64), a, "Fermat in {f:?}");
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_on_f4() {
        let f = build_field(2, 2).unwrap();
        let w = FieldElement::new(&f, f.generator());
        let w2 = frobenius(&w, 1);
        assert_eq!(w2, w.add(&FieldElement::one(&f)));
        assert_eq!(frobenius(&w, 2), w);
    }

    #[test]
    fn frobenius_full_cycle_f9() {
        let f = build_field(3, 2).unwrap();
        for x in all(&f) {
            let mut y = x;
            for _ in 0..4 {
                y = f.pow(y, 3);
            }
            assert_eq!(f.frob(x, 4), y);
            assert_eq!(y, x);
        }
    }

    #[test]
    fn embedding_f3_into_f9() {
        let f3 = build_field(3, 1).unwrap();
        let f9 = build_field(3, 2).unwrap();
        let one = embed(&FieldElement::one(&f3), &f9).unwrap();
        assert_eq!(one, FieldElement::one(&f9));
        assert!(embed(&FieldElement::zero(&f3), &f9).unwrap().is_zero());
        let g = FieldElement::new(&f3, Fe(2));
        let img = embed(&g, &f9).unwrap();
        assert_eq!(f9.element_order(img.value()), 2);
    }

    #[test]
    fn embedding_is_homomorphism() {
        let src = build_field(2, 2).unwrap();
        let dst = field(2, 4).unwrap();
        let e = Embedding::new(&src, &dst).unwrap();
        for a in all(&src) {
            for b in all(&src) {
                assert_eq!(e.map(src.add(a, b)), dst.add(e.map(a), e.map(b)));
                assert_eq!(e.map(src.mul(a, b)), dst.mul(e.map(a), e.map(b)));
            }
            assert_eq!(e.map(src.frob(a, 1)), dst.frob(e.map(a), 1));
            assert_eq!(e.preimage(e.map(a)), Some(a));
        }
        assert!(Embedding::new(&dst, &src).is_err());
        assert!(Embedding::new(&build_field(3, 2).unwrap(), &field(3, 3).unwrap()).is_err());
    }

    #[test]
    fn roots_of_unity_small() {
        let f3 = build_field(3, 1).unwrap();
        let r1 = roots_of_unity(1, &f3).unwrap();
        assert_eq!(r1.roots.len(), 1);
        assert_eq!(r1.roots[0].value(), Fe::ONE);

        let r2 = roots_of_unity(2, &f3).unwrap();
        assert_eq!(r2.tower.n, 1);
        let vals: Vec<u32> = r2.roots.iter().map(|r| r.value().0).collect();
        assert_eq!(vals, vec![1, 2]);

        let r4 = roots_of_unity(4, &f3).unwrap();
        assert_eq!(r4.tower.n, 2);
        assert_eq!(r4.roots.len(), 4);
        let f9 = r4.tower.ext.clone();
        let one = FieldElement::one(&f9);
        for z in &r4.roots {
            let sq = z.mul(z);
            assert!(sq == one || sq == one.neg());
            assert_eq!(z.pow(4), one);
        }
        assert_eq!(
            roots_of_unity(3, &f3).err(),
            Some(Error::MNotCoprimeToP { m: 3, p: 3 })
        );
    }
}
