//! Truncated `P`-adic arithmetic in `A/P^n`, `P`-adic `e_C` and `log_C`,
//! and the unit-module checks that live there.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::carlitz::{Carlitz, CarlitzAlgebra, QuotientAlgebra};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::poly::{MonicIter, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Valuation {
    Exact(u32),
    /// The residue is zero mod `P^n`.
    AtLeast(u32),
}

impl Valuation {
    /// The known lower bound.
    pub fn lower(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }
}

/// `A/P^n` for a prime `P`.
#[derive(Clone, Debug)]
pub struct PadicRing {
    prime: Poly,
    n: u32,
    modulus: Poly,
}

impl PadicRing {
    pub fn new(carlitz: &Carlitz, prime: &Poly, n: u32) -> Result<Self> {
        carlitz.check_prime(prime)?;
        if n == 0 {
            return Err(Error::InvalidArgument("precision n must be >= 1".into()));
        }
        Ok(PadicRing {
            prime: prime.clone(),
            n,
            modulus: prime.pow(n as u64),
        })
    }

    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn contains(&self, x: &PadicElement) -> bool {
        x.prime == self.prime && x.n == self.n
    }

    pub fn elem(&self, a: &Poly) -> PadicElement {
        PadicElement::new(&self.prime, self.n, a)
    }

    /// Same prime, smaller precision.
    pub fn with_precision(&self, n: u32) -> PadicRing {
        PadicRing {
            prime: self.prime.clone(),
            n,
            modulus: self.prime.pow(n as u64),
        }
    }
}

impl CarlitzAlgebra for PadicRing {
    type Elem = PadicElement;

    fn add(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        a.add(b)
    }

    fn scale(&self, a: &Poly, x: &PadicElement) -> PadicElement {
        x.mul(&self.elem(a))
    }

    fn pow_q(&self, x: &PadicElement) -> PadicElement {
        x.pow_q()
    }
}

/// A residue mod `P^n` with its `P`-adic valuation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PadicElement {
    #[serde(rename = "P")]
    prime: Poly,
    n: u32,
    residue: Poly,
    val: Valuation,
}

impl PadicElement {
    pub fn new(prime: &Poly, n: u32, a: &Poly) -> Self {
        let modulus = prime.pow(n as u64);
        let residue = a.rem(&modulus).expect("nonzero modulus");
        let val = if residue.is_zero() {
            Valuation::AtLeast(n)
        } else {
            Valuation::Exact(residue.valuation(prime, n).0)
        };
        PadicElement {
            prime: prime.clone(),
            n,
            residue,
            val,
        }
    }

    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn residue(&self) -> &Poly {
        &self.residue
    }

    pub fn val(&self) -> Valuation {
        self.val
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    fn common(&self, o: &Self) -> u32 {
        assert!(self.prime == o.prime, "P-adic elements for different primes");
        self.n.min(o.n)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.prime, self.common(o), &self.residue.add(&o.residue))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.prime, self.common(o), &self.residue.sub(&o.residue))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.prime, self.n, &self.residue.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.prime, self.common(o), &self.residue.mul(&o.residue))
    }

    pub fn pow_q(&self) -> Self {
        Self::new(&self.prime, self.n, &self.residue.pow_field_size())
    }

    pub fn truncate(&self, n: u32) -> Self {
        Self::new(&self.prime, n.min(self.n), &self.residue)
    }

    /// `self / P`, known mod `P^{n-1}`.
    pub fn div_p(&self) -> Result<Self> {
        if self.val.lower() < 1 {
            return Err(Error::NotInDomain(format!("{} is not divisible by P", self.residue)));
        }
        let q = self.residue.div_exact(&self.prime)?;
        Ok(Self::new(&self.prime, self.n - 1, &q))
    }

    /// Inverse of a unit.
    pub fn inv(&self) -> Result<Self> {
        let m = self.prime.pow(self.n as u64);
        let r = self
            .residue
            .inv_mod(&m)
            .ok_or_else(|| Error::NotInvertible(format!("{} mod P^{}", self.residue, self.n)))?;
        Ok(Self::new(&self.prime, self.n, &r))
    }
}

/// `(v_P(L_i), v_P(D_i))` for a prime of degree `d` in `F_q[T]`.
pub fn vp_of_sequences(q: u64, i: u32, d: u32) -> (u64, Ratio<u64>) {
    let k = i / d;
    let vl = k as u64;
    let vd = Ratio::new(q.pow(i) - q.pow(i - k * d), q.pow(d) - 1);
    (vl, vd)
}

/// Unit parts of `L_i` or `D_i` mod `P^n`: `seq = P^{v_i} u_i`.
struct UnitParts {
    units: Vec<Poly>,
    vals: Vec<u64>,
}

fn unit_parts(c: &Carlitz, prime: &Poly, n: u32, count: usize, dlike: bool) -> Result<UnitParts> {
    let f = c.field();
    let modn = prime.pow(n as u64);
    let modn1 = prime.pow(n as u64 + 1);
    let d = prime.deg();
    let mut units = vec![Poly::one(f)];
    let mut vals = vec![0u64];
    // T^(q^i) mod P^{n+1}
    let mut tq = Poly::t(f).rem(&modn1)?;
    for i in 1..count {
        tq = tq.pow_field_size_mod(&modn1);
        // T^(q^i) - T for D, T - T^(q^i) for L
        let mut fac = tq.sub(&Poly::t(f));
        if !dlike {
            fac = fac.neg();
        }
        let mut step = 0;
        if i % d == 0 {
            fac = fac.rem(&modn1)?.div_exact(prime)?;
            step = 1;
        }
        let fac = fac.rem(&modn)?;
        let (u, v) = if dlike {
            (
                fac.mul_mod(&units[i - 1].pow_field_size_mod(&modn), &modn),
                c.q() * vals[i - 1] + step,
            )
        } else {
            (fac.mul_mod(&units[i - 1], &modn), vals[i - 1] + step)
        };
        units.push(u);
        vals.push(v);
    }
    Ok(UnitParts { units, vals })
}

/// `Σ x^{q^i}/S_i` where `S` is `L` or `D`, to the precision of `x`.
fn padic_carlitz_sum(c: &Carlitz, x: &PadicElement, dlike: bool) -> Result<PadicElement> {
    let v = x.val.lower();
    if v < 1 {
        return Err(Error::NotInDomain(format!(
            "P-adic valuation {v} is not positive"
        )));
    }
    let n = x.n;
    if x.is_zero() {
        return Ok(x.clone());
    }
    let prime = &x.prime;
    let d = prime.deg() as u32;
    let q = c.q();
    // terms with q^i v - v_P(S_i) < n
    let mut count = 0usize;
    loop {
        let i = count as u32;
        let qi = q.checked_pow(i).ok_or(Error::NotInDomain("term count overflow".into()))?;
        let vs = if dlike {
            *vp_of_sequences(q, i, d).1.numer()
        } else {
            (i / d) as u64
        };
        if qi * v as u64 >= n as u64 + vs {
            break;
        }
        count += 1;
    }
    let parts = unit_parts(c, prime, n, count, dlike)?;
    let max_extra = parts.vals.iter().copied().max().unwrap_or(0);
    let big = prime.pow(n as u64 + max_extra);
    let modn = prime.pow(n as u64);
    let mut acc = Poly::zero(c.field());
    let mut y = x.residue.clone();
    for i in 0..count {
        if i > 0 {
            y = y.pow_field_size_mod(&big);
        }
        let k = parts.vals[i];
        let pk = prime.pow(k);
        let num = y.rem(&prime.pow(n as u64 + k))?.div_exact(&pk)?;
        let uinv = parts.units[i]
            .inv_mod(&modn)
            .expect("unit part is prime to P");
        acc = acc.add(&num.mul_mod(&uinv, &modn));
    }
    Ok(PadicElement::new(prime, n, &acc))
}

/// `log_C(x) = Σ x^{q^i}/L_i` for `v_P(x) ≥ 1`.
pub fn log_c_p(c: &Carlitz, x: &PadicElement) -> Result<PadicElement> {
    padic_carlitz_sum(c, x, false)
}

/// `e_C(x) = Σ x^{q^i}/D_i` for `v_P(x) ≥ 1`.
pub fn e_c_p(c: &Carlitz, x: &PadicElement) -> Result<PadicElement> {
    padic_carlitz_sum(c, x, true)
}

/// `φ_a(x) mod P^n` for a residue `x`; well defined once `x` is known mod `P^{n-1}`
/// and `P | a`.
pub fn phi_mod(c: &Carlitz, a: &Poly, x: &Poly, modulus: &Poly) -> Result<Poly> {
    let coeffs = c.phi_coeffs(a)?;
    let alg = QuotientAlgebra::new(modulus)?;
    Ok(coeffs.apply(&alg.reduce(x), &alg))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Lemma4Outcome {
    Solution {
        w: PadicElement,
        y: PadicElement,
        x: PadicElement,
        /// `φ_P(x) mod P^n`, equal to `w` by construction.
        phi_p_x: Poly,
    },
    Obstruction {
        w: PadicElement,
        /// `P | [P,k]` for `k < d` and `[P,d] = 1`.
        lower_coeffs_divisible: bool,
        /// `v_P` of the constant term `-w` of `φ_P(X) - w`.
        constant_valuation: u32,
    },
}

impl Lemma4Outcome {
    pub fn is_solution(&self) -> bool {
        matches!(self, Lemma4Outcome::Solution { .. })
    }
}

/// Solves `φ_P(x) = φ_{P-1}(1)` mod `P^n`, or returns the Eisenstein obstruction.
pub fn lemma4_solve(c: &Carlitz, prime: &Poly, n: u32) -> Result<Lemma4Outcome> {
    c.check_prime(prime)?;
    if n < 2 {
        return Err(Error::InvalidArgument("the solver needs n >= 2".into()));
    }
    let f = c.field();
    let modn = prime.pow(n as u64);
    let pm1 = prime.sub(&Poly::one(f));
    let w = PadicElement::new(prime, n, &c.unit_image_mod(&pm1, &modn)?);
    match w.val {
        Valuation::Exact(0) => Err(Error::UnexpectedValuation(0)),
        Valuation::Exact(1) => {
            let lemma3 = c.lemma3_report(prime)?;
            let divisible = lemma3.top_coeff_ok && lemma3.rows.iter().all(|r| r.divisible);
            Ok(Lemma4Outcome::Obstruction {
                w,
                lower_coeffs_divisible: divisible,
                constant_valuation: 1,
            })
        }
        _ => {
            let log_w = log_c_p(c, &w)?;
            let y = log_w.div_p()?;
            let x = e_c_p(c, &y)?;
            let phi_p_x = phi_mod(c, prime, &x.residue, &modn)?;
            if phi_p_x != w.residue {
                return Err(Error::VerificationFailed(format!(
                    "φ_P(x) = {phi_p_x} but φ_(P-1)(1) = {} mod P^{n}",
                    w.residue
                )));
            }
            Ok(Lemma4Outcome::Solution { w, y, x, phi_p_x })
        }
    }
}

pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 6561;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct ModuleStructureReport {
    #[serde(rename = "P")]
    pub prime: Poly,
    pub n: u32,
    /// `P^{n-1}(P-1)`.
    pub annihilator: Poly,
    /// `M/ℓ` for each prime `ℓ | M`.
    pub maximal_divisors: Vec<Poly>,
    pub exhaustive: bool,
    pub checked: u64,
    pub annihilator_ok: bool,
    pub witness: Option<Poly>,
}

impl ModuleStructureReport {
    pub fn pass(&self) -> bool {
        self.annihilator_ok && self.witness.is_some()
    }
}

fn residues(c: &Carlitz, deg: usize) -> impl Iterator<Item = Poly> + '_ {
    let f = c.field().clone();
    let q = c.q() as u128;
    let total = q.pow(deg as u32);
    (0..total).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(deg);
        for _ in 0..deg {
            coeffs.push(Fe((idx % q) as u32));
            idx /= q;
        }
        Poly::from_coeffs(&f, coeffs)
    })
}

/// `C(A/P^n) ≅ A/P^{n-1}(P-1)`: annihilator on every (or sampled) element and
/// a witness of full order.
pub fn module_structure_check(
    c: &Carlitz,
    prime: &Poly,
    n: u32,
    seed: u64,
    exhaustive_budget: u128,
) -> Result<ModuleStructureReport> {
    c.check_prime(prime)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let f = c.field();
    let modn = prime.pow(n as u64);
    let alg = QuotientAlgebra::new(&modn)?;
    let pm1 = prime.sub(&Poly::one(f));
    let m = prime.pow(n as u64 - 1).mul(&pm1);
    let mut ells: Vec<Poly> = pm1.factor(seed).factors.into_iter().map(|(g, _)| g).collect();
    if n > 1 {
        ells.push(prime.clone());
    }
    let maximal: Vec<Poly> = ells.iter().map(|l| m.div_exact(l)).collect::<Result<_>>()?;
    let reduce = |coeffs: crate::carlitz::CarlitzCoeffs| crate::carlitz::CarlitzCoeffs {
        a: coeffs.a,
        coeffs: coeffs.coeffs.iter().map(|k| alg.reduce(k)).collect(),
    };
    let phi_m = reduce(c.phi_coeffs(&m)?);
    let phi_div: Vec<_> = maximal
        .iter()
        .map(|a| c.phi_coeffs(a).map(reduce))
        .collect::<Result<_>>()?;

    let size = (c.q() as u128).checked_pow(modn.deg() as u32).unwrap_or(u128::MAX);
    let exhaustive = size <= exhaustive_budget;
    let candidates: Box<dyn Iterator<Item = Poly>> = if exhaustive {
        Box::new(residues(c, modn.deg()))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = c.q() as u32;
        let deg = modn.deg();
        let f = f.clone();
        Box::new((0..DEFAULT_SAMPLES).map(move |_| {
            let coeffs = (0..deg).map(|_| Fe(rng.gen_range(0..q))).collect();
            Poly::from_coeffs(&f, coeffs)
        }))
    };
    let mut checked = 0u64;
    let mut annihilator_ok = true;
    let mut witness = None;
    for x in candidates {
        checked += 1;
        if !phi_m.apply(&x, &alg).is_zero() {
            annihilator_ok = false;
        }
        if witness.is_none() && phi_div.iter().all(|k| !k.apply(&x, &alg).is_zero()) {
            witness = Some(x);
        }
    }
    Ok(ModuleStructureReport {
        prime: prime.clone(),
        n,
        annihilator: m,
        maximal_divisors: maximal,
        exhaustive,
        checked,
        annihilator_ok,
        witness,
    })
}

/// `v_P(φ_P(a)) = 1 + v_P(a)` for `a ∈ PA`, checked mod `P^n`.
pub fn lemma8_step_holds(c: &Carlitz, prime: &Poly, a: &Poly, n: u32) -> Result<bool> {
    let modn = prime.pow(n as u64);
    let va = PadicElement::new(prime, n, a).val;
    if va.lower() < 1 {
        return Err(Error::NotInDomain("a must lie in PA".into()));
    }
    let img = PadicElement::new(prime, n, &phi_mod(c, prime, a, &modn)?);
    Ok(match va {
        Valuation::Exact(v) if v + 1 < n => img.val == Valuation::Exact(v + 1),
        _ => img.val.lower() >= (va.lower() + 1).min(n),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary3Result {
    #[serde(rename = "P")]
    pub prime: Poly,
    pub cap: usize,
    pub wieferich: bool,
    pub witness: Option<Poly>,
    pub searched: u64,
}

/// Smallest monic `a ∉ PA` with `deg a ≤ cap` and `P^2 | φ_a(1)`.
pub fn corollary3_search(c: &Carlitz, prime: &Poly, cap: usize) -> Result<Corollary3Result> {
    c.check_prime(prime)?;
    let f = c.field();
    let p2 = prime.square();
    let alg = QuotientAlgebra::new(&p2)?;
    // φ_{T^i}(1) mod P^2
    let mut basis = vec![Poly::one(f)];
    for i in 0..cap {
        let u = &basis[i];
        let next = alg.reduce(&Poly::t(f).mul(u).add(&u.pow_field_size_mod(&p2)));
        basis.push(next);
    }
    let wieferich = c.is_wieferich(prime)?;
    let mut searched = 0u64;
    let mut witness = None;
    'outer: for deg in 0..=cap {
        for a in MonicIter::new(f, deg) {
            searched += 1;
            if prime.divides(&a) {
                continue;
            }
            let mut s = Poly::zero(f);
            for (i, &ai) in a.coeffs().iter().enumerate() {
                if !ai.is_zero() {
                    s = s.add(&basis[i].scale(ai));
                }
            }
            if s.is_zero() {
                witness = Some(a);
                break 'outer;
            }
        }
    }
    if witness.is_some() != wieferich && (witness.is_some() || cap >= prime.deg()) {
        return Err(Error::VerificationFailed(format!(
            "witness search disagrees with the Wieferich test for {prime}"
        )));
    }
    Ok(Corollary3Result {
        prime: prime.clone(),
        cap,
        wieferich,
        witness,
        searched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn c3() -> Carlitz {
        Carlitz::new(&build_field(3, 1).unwrap())
    }

    #[test]
    fn sequence_valuations() {
        for (q, pe) in [(3u64, (3u64, 1u32)), (4, (2, 2)), (5, (5, 1))] {
            let f = build_field(pe.0, pe.1).unwrap();
            let c = Carlitz::new(&f);
            for d in 1..=2usize {
                let prime = crate::poly::monic_irreducibles(&f, d)[0].clone();
                for i in 0..=(3 * d).min(5) {
                    let (vl, vd) = vp_of_sequences(q, i as u32, d as u32);
                    assert_eq!(c.l(i).valuation(&prime, 1000).0 as u64, vl);
                    assert!(vd.is_integer());
                    assert_eq!(c.d(i).valuation(&prime, 1000).0 as u64, vd.to_integer());
                }
            }
        }
        assert_eq!(vp_of_sequences(3, 2, 2).0, 1);
        assert_eq!(vp_of_sequences(3, 4, 2).0, 2);
    }

    #[test]
    fn log_exp_inverse() {
        let c = c3();
        let f = c.field().clone();
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let u: Vec<i64> = (0..6).map(|_| rng.gen_range(0..3)).collect();
            let a = Poly::from_ints(&f, &u).mul(&p);
            let x = PadicElement::new(&p, 4, &a);
            let l = log_c_p(&c, &x).unwrap();
            let e = e_c_p(&c, &x).unwrap();
            assert_eq!(l.val(), x.val());
            assert_eq!(e.val(), x.val());
            assert_eq!(e_c_p(&c, &l).unwrap(), x);
            assert_eq!(log_c_p(&c, &e).unwrap(), x);
        }
        let unit = PadicElement::new(&p, 3, &Poly::one(&f));
        assert!(matches!(log_c_p(&c, &unit), Err(Error::NotInDomain(_))));
        let pp = PadicElement::new(&p, 3, &p);
        let l = log_c_p(&c, &pp).unwrap();
        assert_eq!(l.val(), Valuation::Exact(1));
    }

    #[test]
    fn lemma4_cases() {
        let c = c3();
        let f = c.field().clone();
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        let out = lemma4_solve(&c, &p, 4).unwrap();
        assert!(!out.is_solution());
        let out = lemma4_solve(&c, &Poly::t(&f), 3).unwrap();
        assert!(!out.is_solution());

        let f4 = build_field(2, 2).unwrap();
        let c4 = Carlitz::new(&f4);
        let omega = Fe(2);
        let p = Poly::from_coeffs(&f4, vec![omega, Fe::ONE, Fe::ONE]);
        let out = lemma4_solve(&c4, &p, 4).unwrap();
        match out {
            Lemma4Outcome::Solution { w, phi_p_x, .. } => assert_eq!(&phi_p_x, w.residue()),
            _ => panic!("expected a solution"),
        }
    }

    #[test]
    fn lemma8_examples() {
        let c = c3();
        let f = c.field().clone();
        let t = Poly::t(&f);
        let r = module_structure_check(&c, &t, 1, 0, DEFAULT_EXHAUSTIVE_BUDGET).unwrap();
        assert!(r.pass());
        assert_eq!(r.annihilator, Poly::from_ints(&f, &[-1, 1]));
        let r = module_structure_check(&c, &t, 2, 0, DEFAULT_EXHAUSTIVE_BUDGET).unwrap();
        assert!(r.pass());
        assert_eq!(r.annihilator, Poly::from_ints(&f, &[0, -1, 1]));
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        let r = module_structure_check(&c, &p, 1, 0, DEFAULT_EXHAUSTIVE_BUDGET).unwrap();
        assert!(r.pass() && r.exhaustive && r.checked == 9);
        assert_eq!(r.annihilator, Poly::from_ints(&f, &[0, 0, 1]));
    }

    #[test]
    fn corollary3_examples() {
        let c = c3();
        let f = c.field().clone();
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        assert!(corollary3_search(&c, &p, 4).unwrap().witness.is_none());
        assert!(corollary3_search(&c, &Poly::t(&f), 3).unwrap().witness.is_none());
        let f4 = build_field(2, 2).unwrap();
        let c4 = Carlitz::new(&f4);
        let p = Poly::from_coeffs(&f4, vec![Fe(2), Fe::ONE, Fe::ONE]);
        let r = corollary3_search(&c4, &p, 2).unwrap();
        let a = r.witness.unwrap();
        assert!(a.deg() <= 2 && !p.divides(&a));
        assert!(c4.unit_image_mod(&a, &p.square()).unwrap().is_zero());
    }

    #[test]
    fn lemma8_step() {
        let c = c3();
        let f = c.field().clone();
        let p = Poly::from_ints(&f, &[2, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let u: Vec<i64> = (0..5).map(|_| rng.gen_range(0..3)).collect();
            let a = Poly::from_ints(&f, &u).mul(&p);
            if a.is_zero() {
                continue;
            }
            assert!(lemma8_step_holds(&c, &p, &a, 5).unwrap());
        }
    }
}
