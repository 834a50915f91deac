//! Power sums `S_j(i)` over monic polynomials of degree `j`, Bernoulli–Goss
//! numbers `B(i)`, and the congruences tying them to `φ_{P-1}(1)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::carlitz::Carlitz;
use crate::error::{Error, Result};
use crate::poly::{MonicIter, Poly};

pub const DEFAULT_SUM_BUDGET: u128 = 100_000;

/// `num/den` with `gcd = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: &Poly, den: &Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivideByZeroPoly);
        }
        let g = num.gcd(den);
        let (mut n, mut d) = (num.div_exact(&g)?, den.div_exact(&g)?);
        let lc = d.lead();
        if lc != crate::field::Fe::ONE {
            let inv = d.field().inv(lc);
            n = n.scale(inv);
            d = d.scale(inv);
        }
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(p: &Poly) -> Self {
        RationalFunction {
            num: p.clone(),
            den: Poly::one(p.field()),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(&n, &self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num.mul(&o.num), &self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn pow(&self, e: u64) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// `1/self`.
    pub fn recip(&self) -> Result<Self> {
        Self::new(&self.den, &self.num)
    }

    /// Reduction mod a prime not dividing the denominator.
    pub fn reduce_mod(&self, m: &Poly) -> Result<Poly> {
        let inv = self
            .den
            .inv_mod(m)
            .ok_or_else(|| Error::NotInvertible(format!("{} mod {m}", self.den)))?;
        Ok(self.num.mul_mod(&inv, m))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn check_budget(c: &Carlitz, j: u32, budget: u128) -> Result<()> {
    let terms = (c.q() as u128).checked_pow(j).unwrap_or(u128::MAX);
    if terms > budget {
        return Err(Error::budget("power-sum terms", terms, budget));
    }
    Ok(())
}

/// `Σ_{a monic, deg a = j} a^i` by direct summation.
pub fn power_sum_bruteforce(c: &Carlitz, j: u32, i: i64, budget: u128) -> Result<RationalFunction> {
    check_budget(c, j, budget)?;
    let f = c.field();
    if i >= 0 {
        let mut acc = Poly::zero(f);
        for a in MonicIter::new(f, j as usize) {
            acc = acc.add(&a.pow(i as u64));
        }
        return Ok(RationalFunction::from_poly(&acc));
    }
    let e = i.unsigned_abs();
    let mut acc = RationalFunction::from_poly(&Poly::zero(f));
    for a in MonicIter::new(f, j as usize) {
        acc = acc.add(&RationalFunction::new(&Poly::one(f), &a.pow(e))?);
    }
    Ok(acc)
}

/// Closed forms where known (`S_k(i) = 0` for `0 ≤ i ≤ q^k - 2`,
/// `S_k(-c) = 1/L_k^c` for `1 ≤ c ≤ q-1`), brute force otherwise.
pub fn power_sum(c: &Carlitz, j: u32, i: i64, budget: u128) -> Result<RationalFunction> {
    let q = c.q() as i128;
    let f = c.field();
    let qj = q.checked_pow(j).unwrap_or(i128::MAX);
    if i >= 0 && (i as i128) <= qj - 2 {
        return Ok(RationalFunction::from_poly(&Poly::zero(f)));
    }
    if i < 0 && (-i as i128) < q {
        let l = c.l(j as usize).pow(i.unsigned_abs());
        return RationalFunction::new(&Poly::one(f), &l);
    }
    power_sum_bruteforce(c, j, i, budget)
}

/// Largest `j` whose term can survive in `B(i)`: `q^j ≤ i + 1`.
fn b_range(q: u64, i: u64) -> u32 {
    let mut j = 0u32;
    while (q as u128).pow(j + 1) < i as u128 + 2 {
        j += 1;
    }
    j
}

/// `B(i) ∈ A`; the weight-`j` sum is used when `(q-1) | i`.
pub fn bernoulli_goss(c: &Carlitz, i: u64) -> Result<Poly> {
    let f = c.field();
    if i == 0 {
        return Ok(Poly::one(f));
    }
    let q = c.q();
    let weighted = i.is_multiple_of(q - 1);
    let mut acc = RationalFunction::from_poly(&Poly::zero(f));
    for j in 0..=b_range(q, i) {
        let s = power_sum(c, j, i as i64, u128::MAX)?;
        let s = if weighted {
            s.mul(&RationalFunction::from_poly(&Poly::constant(f, f.from_int(j as i64))))
        } else {
            s
        };
        acc = acc.add(&s);
    }
    acc.as_poly().cloned().ok_or(Error::NonIntegralResult(i))
}

/// `B(i) mod m`, summing `a^i mod m` without forming `B(i)`.
pub fn bernoulli_goss_mod(c: &Carlitz, i: u64, m: &Poly) -> Result<Poly> {
    let f = c.field();
    if m.is_zero() {
        return Err(Error::DivideByZeroPoly);
    }
    if i == 0 {
        return Poly::one(f).rem(m);
    }
    let q = c.q();
    let weighted = i.is_multiple_of(q - 1);
    let mut acc = Poly::zero(f);
    for j in 0..=b_range(q, i) {
        if (i as u128) + 2 <= (q as u128).pow(j) {
            continue;
        }
        let w = if weighted { f.from_int(j as i64) } else { crate::field::Fe::ONE };
        if w.is_zero() {
            continue;
        }
        let mut s = Poly::zero(f);
        for a in MonicIter::new(f, j as usize) {
            s = s.add(&a.pow_mod(i, m));
        }
        acc = acc.add(&s.scale(w));
    }
    acc.rem(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma1Row {
    #[serde(rename = "P")]
    pub prime: Poly,
    pub d: usize,
    pub c: u64,
    pub lhs: Poly,
    pub rhs: Poly,
    pub pass: bool,
}

/// `Σ_{k<d} L_k^{-(c-1)} mod P`.
fn lemma1_rhs(carlitz: &Carlitz, prime: &Poly, c: u64) -> Result<Poly> {
    let f = carlitz.field();
    let mut acc = Poly::zero(f);
    for k in 0..prime.deg() {
        let inv = carlitz
            .l(k)
            .inv_mod(prime)
            .ok_or_else(|| Error::NotInvertible(format!("L_{k} mod {prime}")))?;
        acc = acc.add(&inv.pow_mod(c - 1, prime));
    }
    acc.rem(prime)
}

fn check_c(carlitz: &Carlitz, c: u64) -> Result<()> {
    let max = carlitz.q() - 1;
    if c < 2 || c > max {
        return Err(Error::COutOfRange { c, max });
    }
    Ok(())
}

/// `B(q^d - c) ≡ Σ_{k<d} 1/L_k^{c-1} (mod P)`.
pub fn lemma1_check(carlitz: &Carlitz, prime: &Poly, c: u64) -> Result<Lemma1Row> {
    carlitz.check_prime(prime)?;
    check_c(carlitz, c)?;
    let d = prime.deg();
    let b = bernoulli_goss(carlitz, carlitz.q().pow(d as u32) - c)?;
    lemma1_row(carlitz, prime, c, &b)
}

fn lemma1_row(carlitz: &Carlitz, prime: &Poly, c: u64, b: &Poly) -> Result<Lemma1Row> {
    let lhs = b.rem(prime)?;
    let rhs = lemma1_rhs(carlitz, prime, c)?;
    Ok(Lemma1Row {
        prime: prime.clone(),
        d: prime.deg(),
        c,
        pass: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Rows for every prime of degree `≤ dmax` and every admissible `c`;
/// each `B(q^d - c)` is computed once.
pub fn lemma1_suite(carlitz: &Carlitz, dmax: usize) -> Result<Vec<Lemma1Row>> {
    let q = carlitz.q();
    let mut rows = Vec::new();
    for d in 1..=dmax {
        let primes = crate::poly::monic_irreducibles(carlitz.field(), d);
        for c in 2..q {
            let b = bernoulli_goss(carlitz, q.pow(d as u32) - c)?;
            for p in &primes {
                rows.push(lemma1_row(carlitz, p, c, &b)?);
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary1Row {
    #[serde(rename = "P")]
    pub prime: Poly,
    pub d: usize,
    /// `φ_{P-1}(1) mod P^2`.
    pub lhs: Poly,
    /// `P B(q^d - 2) mod P^2`.
    pub rhs: Poly,
    pub pass: bool,
}

/// `φ_{P-1}(1) ≡ P B(q^d - 2) (mod P^2)`.
pub fn corollary1_check(carlitz: &Carlitz, prime: &Poly) -> Result<Corollary1Row> {
    carlitz.check_prime(prime)?;
    let b = bernoulli_goss(carlitz, carlitz.q().pow(prime.deg() as u32) - 2)?;
    corollary1_row(carlitz, prime, &b)
}

fn corollary1_row(carlitz: &Carlitz, prime: &Poly, b: &Poly) -> Result<Corollary1Row> {
    let f = carlitz.field();
    let p2 = prime.square();
    let pm1 = prime.sub(&Poly::one(f));
    let lhs = carlitz.unit_image_mod(&pm1, &p2)?;
    let rhs = prime.mul(&b.rem(prime)?).rem(&p2)?;
    Ok(Corollary1Row {
        prime: prime.clone(),
        d: prime.deg(),
        pass: lhs == rhs,
        lhs,
        rhs,
    })
}

pub fn corollary1_suite(carlitz: &Carlitz, dmax: usize) -> Result<Vec<Corollary1Row>> {
    let q = carlitz.q();
    let mut rows = Vec::new();
    for d in 1..=dmax {
        let b = bernoulli_goss(carlitz, q.pow(d as u32) - 2)?;
        for p in crate::poly::monic_irreducibles(carlitz.field(), d) {
            rows.push(corollary1_row(carlitz, &p, &b)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn c3() -> Carlitz {
        Carlitz::new(&build_field(3, 1).unwrap())
    }

    #[test]
    fn bruteforce_examples() {
        let c = c3();
        let f = c.field().clone();
        let s = power_sum_bruteforce(&c, 1, -1, DEFAULT_SUM_BUDGET).unwrap();
        let want = RationalFunction::new(&Poly::one(&f), &c.l(1)).unwrap();
        assert_eq!(s, want);
        assert_eq!(s.den(), &Poly::from_ints(&f, &[0, -1, 0, 1]));
        assert!(power_sum_bruteforce(&c, 0, 17, DEFAULT_SUM_BUDGET).unwrap().num().is_one());
        assert!(power_sum_bruteforce(&c, 1, 1, DEFAULT_SUM_BUDGET).unwrap().is_zero());
        assert!(matches!(
            power_sum_bruteforce(&c, 11, 1, DEFAULT_SUM_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn closed_forms_match() {
        let c = c3();
        for j in 0..=3 {
            for i in -2..=27 {
                let a = power_sum(&c, j, i, DEFAULT_SUM_BUDGET).unwrap();
                let b = power_sum_bruteforce(&c, j, i, DEFAULT_SUM_BUDGET).unwrap();
                assert_eq!(a, b, "j={j} i={i}");
            }
        }
        assert!(power_sum(&c, 2, 5, DEFAULT_SUM_BUDGET).unwrap().is_zero());
    }

    #[test]
    fn bernoulli_examples() {
        let c = c3();
        let f = c.field().clone();
        assert!(bernoulli_goss(&c, 0).unwrap().is_one());
        assert!(bernoulli_goss(&c, 1).unwrap().is_one());
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        let b7 = bernoulli_goss(&c, 7).unwrap();
        assert_eq!(b7.rem(&p).unwrap(), Poly::from_ints(&f, &[1, 1]));
        for i in 0..40 {
            let b = bernoulli_goss(&c, i).unwrap();
            assert_eq!(bernoulli_goss_mod(&c, i, &p).unwrap(), b.rem(&p).unwrap(), "i={i}");
        }
    }

    #[test]
    fn lemma1_and_corollary1() {
        let c = c3();
        let f = c.field().clone();
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        assert!(lemma1_check(&c, &p, 2).unwrap().pass);
        let r = lemma1_check(&c, &Poly::t(&f), 2).unwrap();
        assert!(r.pass && r.rhs.is_one());
        assert!(matches!(
            lemma1_check(&c, &p, 3),
            Err(Error::COutOfRange { c: 3, max: 2 })
        ));
        assert!(corollary1_check(&c, &p).unwrap().pass);
        assert!(corollary1_check(&c, &Poly::t(&f)).unwrap().pass);
        assert!(lemma1_suite(&c, 2).unwrap().iter().all(|r| r.pass));
        assert!(corollary1_suite(&c, 2).unwrap().iter().all(|r| r.pass));
    }
}
