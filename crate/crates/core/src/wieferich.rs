//! Search for primes `P` with `φ_{P-1}(1) ≡ 0 (mod P^2)`.

use num_rational::Ratio;
use serde::Serialize;

use crate::arith;
use crate::carlitz::Carlitz;
use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, FieldRef, Tower};
use crate::poly::{monic_irreducibles, MonicIter, Poly};
use crate::sums::bernoulli_goss_mod;

pub const EXHAUSTIVE_PRIME_LIMIT: u128 = 10_000;
pub const DEFAULT_CANDIDATE_BUDGET: u128 = 100_000;

/// `V(d) = Σ_{i<d} L_{d-1}/L_i`. The `i = 0` term dominates, so
/// `deg V(d) = deg L_{d-1} = (q^d - q)/(q - 1)`; this is `q^{d-1}` only for `d = 2`.
pub fn v_poly(c: &Carlitz, d: usize) -> Result<Poly> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    let top = c.l(d - 1);
    let mut acc = Poly::zero(c.field());
    for i in 0..d {
        acc = acc.add(&top.div_exact(&c.l(i))?);
    }
    let want = c.deg_l(d as u32 - 1) as usize;
    if acc.deg() != want {
        return Err(Error::VerificationFailed(format!(
            "deg V({d}) = {} but deg L_(d-1) = {want}",
            acc.deg()
        )));
    }
    Ok(acc)
}

/// `φ_a(1) mod m` through `φ_{T^{i+1}}(1) = T φ_{T^i}(1) + φ_{T^i}(1)^q`.
pub fn unit_image_mod_linear(c: &Carlitz, a: &Poly, m: &Poly) -> Result<Poly> {
    let f = c.field();
    let t = Poly::t(f);
    let mut u = Poly::one(f).rem(m)?;
    let mut acc = Poly::zero(f);
    for (i, &ai) in a.coeffs().iter().enumerate() {
        if i > 0 {
            u = t.mul(&u).add(&u.pow_field_size_mod(m)).rem(m)?;
        }
        if !ai.is_zero() {
            acc = acc.add(&u.scale(ai));
        }
    }
    Ok(acc)
}

/// Direct test: `P^2 | φ_{P-1}(1)`.
pub fn is_wieferich_direct(c: &Carlitz, prime: &Poly) -> Result<bool> {
    let pm1 = prime.sub(&Poly::one(c.field()));
    Ok(unit_image_mod_linear(c, &pm1, &prime.square())?.is_zero())
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifiedPrime {
    #[serde(rename = "P")]
    pub prime: Poly,
    /// `φ_{P-1}(1) mod P^2`.
    pub phi_mod_p2: Poly,
    /// `B(q^d - 2) mod P`.
    pub bernoulli_mod_p: Poly,
}

fn certify(c: &Carlitz, prime: &Poly) -> Result<CertifiedPrime> {
    let pm1 = prime.sub(&Poly::one(c.field()));
    let phi = unit_image_mod_linear(c, &pm1, &prime.square())?;
    let i = c.q().pow(prime.deg() as u32) - 2;
    let b = bernoulli_goss_mod(c, i, prime)?;
    if !phi.is_zero() || !b.is_zero() {
        return Err(Error::CertificateMismatch(format!(
            "{prime}: φ_(P-1)(1) mod P^2 = {phi}, B(q^d-2) mod P = {b}"
        )));
    }
    Ok(CertifiedPrime {
        prime: prime.clone(),
        phi_mod_p2: phi,
        bernoulli_mod_p: b,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveCheck {
    pub primes_tested: u64,
    pub wieferich: u64,
    pub non_wieferich: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WieferichReport {
    pub q: u64,
    pub d: usize,
    /// Number of primes of degree `d`.
    #[serde(rename = "Nq")]
    pub nq: u128,
    /// Wieferich primes of degree `d`.
    #[serde(rename = "M")]
    pub m: u128,
    /// Non-Wieferich primes of degree `d`.
    #[serde(rename = "N")]
    pub n: u128,
    /// Lower bound for `N` as an exact string.
    pub bound: String,
    pub bound_holds: bool,
    /// `d M ≤ q^{d-1}`.
    pub m_bound_holds: bool,
    pub primes: Vec<CertifiedPrime>,
    pub seed: u64,
    pub exhaustive: Option<ExhaustiveCheck>,
}

/// `N > (q-1)q^{d-1}/d - q^{1+d/2}/(d(q-1))`, compared exactly.
pub fn lemma7_bound(q: u64, d: u32, n: u128) -> (String, bool) {
    let q_ = q as i128;
    let den = d as i128 * (q_ - 1);
    let a = (q_ - 1) * (q_ - 1) * q_.pow(d - 1);
    let x = den * n as i128;
    if d.is_multiple_of(2) {
        let b = q_.pow(1 + d / 2);
        let bound = Ratio::new(a - b, den);
        (bound.to_string(), x > a - b)
    } else {
        // q^{1+d/2} = q^{(d+1)/2} sqrt(q)
        let b = q_.pow(d.div_ceil(2));
        let holds = a - x < 0 || b * b * q_ > (a - x) * (a - x);
        let r1 = Ratio::new(a, den);
        let r2 = Ratio::new(b, den);
        (format!("{r1} - {r2}*sqrt({q})"), holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhaustive {
    Auto,
    Off,
    On,
}

/// Wieferich primes of degree `d` as the degree-`d` factors of `gcd(V(d), T^{q^d} - T)`.
pub fn wieferich_primes(
    c: &Carlitz,
    d: usize,
    seed: u64,
    mode: Exhaustive,
    budget: u128,
) -> Result<WieferichReport> {
    let q = c.q();
    let f = c.field();
    let space = (q as u128)
        .checked_pow(d as u32)
        .map_or(u128::MAX, |qd| (qd - q as u128) / (q as u128 - 1));
    if space > budget {
        return Err(Error::budget("deg V(d)", space, budget));
    }
    let v = v_poly(c, d)?;
    let mut found = Vec::new();
    if !v.is_constant() {
        let mut h = Poly::t(f).rem(&v)?;
        for _ in 0..d {
            h = h.pow_field_size_mod(&v);
        }
        let g = v.gcd(&h.sub(&Poly::t(f)));
        if !g.is_constant() {
            for (p, _) in g.factor(seed).factors {
                if p.deg() == d {
                    found.push(certify(c, &p)?);
                }
            }
        }
    }
    let nq = arith::necklace_count(q, d as u64);
    let m = found.len() as u128;
    let exhaustive = match mode {
        Exhaustive::Off => None,
        Exhaustive::Auto if nq > EXHAUSTIVE_PRIME_LIMIT => None,
        _ => {
            if nq > budget {
                return Err(Error::budget("exhaustive prime scan", nq, budget));
            }
            let mut w = Vec::new();
            let mut tested = 0u64;
            for p in monic_irreducibles(f, d) {
                tested += 1;
                if is_wieferich_direct(c, &p)? {
                    w.push(p);
                }
            }
            let listed: Vec<&Poly> = found.iter().map(|x| &x.prime).collect();
            if w.iter().collect::<Vec<_>>() != listed {
                return Err(Error::CertificateMismatch(format!(
                    "exhaustive scan found {} Wieferich primes of degree {d}, the gcd path {}",
                    w.len(),
                    listed.len()
                )));
            }
            Some(ExhaustiveCheck {
                primes_tested: tested,
                wieferich: w.len() as u64,
                non_wieferich: tested - w.len() as u64,
            })
        }
    };
    let n = nq - m;
    let (bound, bound_holds) = lemma7_bound(q, d as u32, n);
    Ok(WieferichReport {
        q,
        d,
        nq,
        m,
        n,
        bound,
        bound_holds,
        m_bound_holds: m * d as u128 <= (q as u128).pow(d as u32 - 1),
        primes: found,
        seed,
        exhaustive,
    })
}

pub fn counts_table(c: &Carlitz, dmax: usize, seed: u64, budget: u128) -> Result<Vec<WieferichReport>> {
    (1..=dmax)
        .map(|d| wieferich_primes(c, d, seed, Exhaustive::Off, budget))
        .collect()
}

pub fn counts_csv(rows: &[WieferichReport]) -> String {
    let mut s = String::from("d,Nq,M,N,bound\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{}\n", r.d, r.nq, r.m, r.n, r.bound));
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct CriteriaRow {
    #[serde(rename = "P")]
    pub prime: Poly,
    pub v_divisible: bool,
    pub direct: bool,
    pub bernoulli: bool,
}

impl CriteriaRow {
    pub fn agree(&self) -> bool {
        self.v_divisible == self.direct && self.direct == self.bernoulli
    }
}

/// The three equivalent Wieferich tests on one prime.
pub fn wieferich_criteria(c: &Carlitz, prime: &Poly) -> Result<CriteriaRow> {
    c.check_prime(prime)?;
    let d = prime.deg();
    let v = v_poly(c, d)?;
    let b = bernoulli_goss_mod(c, c.q().pow(d as u32) - 2, prime)?;
    Ok(CriteriaRow {
        prime: prime.clone(),
        v_divisible: prime.divides(&v),
        direct: is_wieferich_direct(c, prime)?,
        bernoulli: b.is_zero(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaBranch {
    pub alpha: Vec<u32>,
    pub primes: Vec<CertifiedPrime>,
    /// `L_k ≡ (-α)^k/k! (mod P)` for `k < p` on every listed prime.
    pub congruences_hold: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreePReport {
    pub q: u64,
    pub p: u32,
    /// `H(X) = Σ_{i<p} X^i/i!` over `F_p`.
    #[serde(rename = "H")]
    pub h: Poly,
    /// Degree over `F_p` of the splitting field of `H`.
    pub splitting_degree: u32,
    /// Roots of `H` in the splitting field.
    pub roots: Vec<Vec<u32>>,
    pub hypothesis_holds: bool,
    pub branches: Vec<AlphaBranch>,
    pub count: usize,
    pub expected_at_least: u64,
    pub count_ok: bool,
}

fn h_poly(fp: &FieldRef) -> Poly {
    let p = fp.characteristic();
    let mut coeffs = Vec::with_capacity(p as usize);
    let mut fact = Fe::ONE;
    for i in 0..p {
        if i > 0 {
            fact = fp.mul(fact, fp.from_int(i as i64));
        }
        coeffs.push(fp.inv(fact));
    }
    Poly::from_coeffs(fp, coeffs)
}

/// Degree-`p` Wieferich primes from the roots of `H(X)` when they lie in `F_q`.
pub fn degree_p_construction(c: &Carlitz, seed: u64) -> Result<DegreePReport> {
    let f = c.field();
    let p = f.characteristic();
    let q = c.q();
    let fp = crate::field::build_field_with(p as u64, 1, true)?;
    let h = h_poly(&fp);
    let split = h
        .factor(seed)
        .factors
        .iter()
        .fold(1u64, |acc, (g, _)| acc / arith::gcd(acc, g.deg() as u64) * g.deg() as u64)
        as u32;
    let tower = Tower::new(&fp, split)?;
    let hs = h.embed(&tower.emb);
    let roots: Vec<Fe> = tower
        .ext
        .elements_lex()
        .iter()
        .copied()
        .filter(|&x| hs.eval(x).is_zero())
        .collect();
    let hypothesis = f.degree().is_multiple_of(split);
    let mut branches = Vec::new();
    if hypothesis {
        let emb = Embedding::new(&fp, f)?;
        let hq = h.embed(&emb);
        let t = Poly::t(f);
        for &alpha in f.elements_lex() {
            if alpha.is_zero() || !hq.eval(f.neg(f.inv(alpha))).is_zero() {
                continue;
            }
            // T^q - T - α
            let g = Poly::monomial(f, Fe::ONE, q as usize)
                .sub(&t)
                .sub(&Poly::constant(f, alpha));
            let mut primes = Vec::new();
            let mut congruences = true;
            for (pr, _) in g.factor(seed).factors {
                if pr.deg() != p as usize {
                    continue;
                }
                primes.push(certify(c, &pr)?);
                let mut fact = Fe::ONE;
                for k in 0..p as usize {
                    if k > 0 {
                        fact = f.mul(fact, f.from_int(k as i64));
                    }
                    let want = f.div(f.pow(f.neg(alpha), k as u64), fact);
                    if c.l(k).rem(&pr)? != Poly::constant(f, want) {
                        congruences = false;
                    }
                }
            }
            branches.push(AlphaBranch {
                alpha: f.coords(alpha),
                primes,
                congruences_hold: congruences,
            });
        }
    }
    let mut all: Vec<&Poly> = branches
        .iter()
        .flat_map(|b| b.primes.iter().map(|x| &x.prime))
        .collect();
    let listed = all.len();
    all.sort_by(|a, b| a.lex_cmp(b));
    all.dedup();
    if all.len() != listed {
        return Err(Error::VerificationFailed(
            "a prime divides T^q - T - α for two values of α".into(),
        ));
    }
    let expected = if hypothesis { (p as u64 - 1) * q / p as u64 } else { 0 };
    Ok(DegreePReport {
        q,
        p,
        h,
        splitting_degree: split,
        roots: roots.iter().map(|&r| tower.ext.coords(r)).collect(),
        hypothesis_holds: hypothesis,
        count: listed,
        expected_at_least: expected,
        count_ok: !hypothesis || listed as u64 >= expected,
        branches,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Question1Hit {
    #[serde(rename = "Q")]
    pub q_prime: Poly,
    #[serde(rename = "P")]
    pub p_prime: Poly,
    pub multiplicity: u32,
    /// `φ_Q(1) mod P^2`, zero by construction.
    pub phi_mod_p2: Poly,
    pub p_differs_from_q: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Question1Report {
    pub b: Poly,
    pub dmin: usize,
    pub dmax: usize,
    pub seed: u64,
    pub primes_tested: u64,
    pub hits: Vec<Question1Hit>,
}

/// Primes `Q ≡ 1 (mod b)` with `φ_Q(1)` not squarefree.
pub fn question1_search(
    c: &Carlitz,
    b: &Poly,
    dmin: usize,
    dmax: usize,
    seed: u64,
    budget: u128,
) -> Result<Question1Report> {
    let f = c.field();
    if b.is_zero() || !b.is_monic() {
        return Err(Error::NotMonic);
    }
    if dmin == 0 || dmin > dmax {
        return Err(Error::InvalidArgument("need 1 <= dmin <= dmax".into()));
    }
    let q = c.q() as u128;
    let candidates: u128 = (dmin..=dmax).map(|d| q.saturating_pow(d as u32)).sum();
    let phi_deg = q.saturating_pow(dmax as u32 - 1);
    if candidates.max(phi_deg) > budget {
        return Err(Error::budget("search candidates", candidates.max(phi_deg), budget));
    }
    let one = Poly::one(f);
    let mut tested = 0u64;
    let mut hits = Vec::new();
    for d in dmin..=dmax {
        for qp in MonicIter::new(f, d) {
            if !b.divides(&qp.sub(&one)) || !qp.is_irreducible()? {
                continue;
            }
            tested += 1;
            let phi = c.unit_image(&qp)?;
            if phi.is_squarefree() {
                continue;
            }
            let rep = phi
                .factor(seed)
                .factors
                .into_iter()
                .find(|(_, e)| *e >= 2)
                .ok_or_else(|| Error::VerificationFailed(format!("φ_Q(1) for Q = {qp}")))?;
            let p2 = rep.0.square();
            let r = phi.rem(&p2)?;
            if !r.is_zero() {
                return Err(Error::CertificateMismatch(format!("{} ∤ φ_Q(1)", p2)));
            }
            hits.push(Question1Hit {
                p_differs_from_q: rep.0 != qp,
                q_prime: qp,
                p_prime: rep.0,
                multiplicity: rep.1,
                phi_mod_p2: r,
            });
        }
    }
    Ok(Question1Report {
        b: b.clone(),
        dmin,
        dmax,
        seed,
        primes_tested: tested,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn carlitz(p: u64, e: u32) -> Carlitz {
        Carlitz::new(&build_field(p, e).unwrap())
    }

    #[test]
    fn v2_identity() {
        for (p, e) in [(3, 1), (2, 2), (5, 1)] {
            let c = carlitz(p, e);
            let f = c.field().clone();
            let q = c.q() as usize;
            let want = Poly::from_ints(&f, &[1, 1])
                .sub(&Poly::monomial(&f, Fe::ONE, q));
            assert_eq!(v_poly(&c, 2).unwrap(), want);
            assert!(v_poly(&c, 1).unwrap().is_one());
        }
    }

    #[test]
    fn linear_unit_image_matches() {
        let c = carlitz(3, 1);
        let f = c.field().clone();
        let m = Poly::from_ints(&f, &[1, 0, 1]).square();
        for a in (0..4).flat_map(|d| MonicIter::new(&f, d)) {
            assert_eq!(
                unit_image_mod_linear(&c, &a, &m).unwrap(),
                c.unit_image_mod(&a, &m).unwrap()
            );
        }
    }

    #[test]
    fn degree_two_census() {
        let c = carlitz(3, 1);
        let r = wieferich_primes(&c, 2, 0, Exhaustive::Auto, DEFAULT_CANDIDATE_BUDGET).unwrap();
        assert_eq!((r.nq, r.m, r.n), (3, 0, 3));
        assert_eq!(r.bound, "3/4");
        assert!(r.bound_holds && r.exhaustive.is_some());

        let c = carlitz(2, 2);
        let r = wieferich_primes(&c, 2, 7, Exhaustive::Auto, DEFAULT_CANDIDATE_BUDGET).unwrap();
        assert_eq!((r.nq, r.m, r.n), (6, 2, 4));
        let f = c.field().clone();
        let names: Vec<String> = r.primes.iter().map(|x| x.prime.to_string()).collect();
        let w = Poly::from_coeffs(&f, vec![Fe(2), Fe::ONE, Fe::ONE]).to_string();
        let w2 = Poly::from_coeffs(&f, vec![Fe(3), Fe::ONE, Fe::ONE]).to_string();
        assert_eq!(names, vec![w, w2]);

        let r = wieferich_primes(&carlitz(3, 1), 1, 0, Exhaustive::Auto, DEFAULT_CANDIDATE_BUDGET)
            .unwrap();
        assert_eq!(r.m, 0);
    }

    #[test]
    fn bound_odd_degree() {
        // q = 3, d = 1: (4 - 3 sqrt 3)/2 < 0 < N
        let (s, ok) = lemma7_bound(3, 1, 3);
        assert_eq!(s, "2 - 3/2*sqrt(3)");
        assert!(ok);
        // q = 3, d = 3: (36 - 9 sqrt 3)/6 ≈ 3.40
        assert!(lemma7_bound(3, 3, 4).1);
        assert!(!lemma7_bound(3, 3, 3).1);
    }

    #[test]
    fn degree_p_remark() {
        let r = degree_p_construction(&carlitz(2, 2), 0).unwrap();
        assert!(r.hypothesis_holds && r.count == 2 && r.count_ok);
        assert!(r.branches.iter().all(|b| b.congruences_hold));
        let r = degree_p_construction(&carlitz(3, 1), 0).unwrap();
        assert!(!r.hypothesis_holds);
        assert_eq!(r.splitting_degree, 2);
        assert_eq!(r.count, 0);
    }

    #[test]
    fn question1_degree_one() {
        let c = carlitz(3, 1);
        let one = Poly::one(c.field());
        let r = question1_search(&c, &one, 1, 1, 0, DEFAULT_CANDIDATE_BUDGET).unwrap();
        assert_eq!(r.primes_tested, 3);
        assert!(r.hits.is_empty());
    }
}
