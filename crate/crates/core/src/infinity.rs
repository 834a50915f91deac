//! Analysis at `∞`: `e_C`, `log_C` on truncated series, `ζ_A(1)`, and the
//! unit-module quantities for `A_n = F_{q^n}[T]`.

use serde::Serialize;

use crate::arith;
use crate::carlitz::Carlitz;
use crate::error::{Error, Result};
use crate::field::{roots_of_unity, Embedding, Fe, FieldRef, Tower};
use crate::poly::{norm_to_base, MonicIter, Poly};
use crate::series::LaurentSeries;

/// Default cap on the number of ideal-sum terms.
pub const DEFAULT_TERM_BUDGET: u128 = 100_000;

fn embedding_into(c: &Carlitz, target: &FieldRef) -> Result<Embedding> {
    Embedding::new(c.field(), target)
}

/// `Σ_{i in terms} x^{q^i} / den(i)` to precision `n`.
fn carlitz_sum(
    c: &Carlitz,
    x: &LaurentSeries,
    den: impl Fn(usize) -> Poly,
    include: impl Fn(usize, i128) -> bool,
) -> Result<LaurentSeries> {
    let f = x.field();
    let emb = embedding_into(c, f)?;
    let n = x.prec();
    let v = x.valuation().expect("caller handles zero") as i128;
    let e = c.field().degree();
    let q = c.q() as i128;
    let mut acc = LaurentSeries::zero(f, n);
    let mut qi: i128 = 1;
    let mut i = 0usize;
    while include(i, qi) {
        let d = den(i).embed(&emb);
        let deg = d.deg() as i64;
        let pow = x.pow_char_capped(e * i as u32, n - deg);
        let sa = (qi * v) as i64;
        let term = pow.mul(&LaurentSeries::inv_poly(&d, n - sa.min(pow.lead_exp()))?);
        acc = acc.add(&term);
        i += 1;
        qi *= q;
    }
    Ok(acc.truncate(n))
}

/// `log_C(x) = Σ x^{q^i}/L_i`, defined when `v_∞(x) > -q/(q-1)`.
pub fn log_c_eval(c: &Carlitz, x: &LaurentSeries) -> Result<LaurentSeries> {
    let Some(v) = x.valuation() else {
        return Ok(x.clone());
    };
    let q = c.q() as i128;
    let v = v as i128;
    if v * (q - 1) <= -q {
        return Err(Error::OutsideConvergenceDomain { valuation: v as i64 });
    }
    let n = x.prec() as i128;
    carlitz_sum(
        c,
        x,
        |i| c.l(i),
        |_, qi| qi * v + (qi * q - q) / (q - 1) < n,
    )
}

/// `e_C(x) = Σ x^{q^i}/D_i`. Entire; the result precision reflects any loss.
pub fn e_c_eval(c: &Carlitz, x: &LaurentSeries) -> Result<LaurentSeries> {
    let Some(v) = x.valuation() else {
        return Ok(x.clone());
    };
    let v = v as i128;
    let n = x.prec() as i128;
    carlitz_sum(
        c,
        x,
        |i| c.d(i),
        |i, qi| (i as i128) <= -v || qi * (v + i as i128) < n,
    )
}

/// `ζ_A(1) = Σ_j 1/L_j` to precision `prec`.
pub fn zeta_a1(c: &Carlitz, prec: i64) -> LaurentSeries {
    let mut acc = LaurentSeries::zero(c.field(), prec);
    let mut j = 0u32;
    while (c.deg_l(j) as i64) < prec {
        let inv = LaurentSeries::inv_poly(&c.l(j as usize), prec).expect("L_j is nonzero");
        acc = acc.add(&inv);
        j += 1;
    }
    acc
}

#[derive(Clone)]
pub struct NormalBasis {
    pub tower: Tower,
    pub alpha: Fe,
    /// Rank over `F_p` of the coordinates of `{g^k α^{q^i}}`; equals `e n` on success.
    pub rank: usize,
}

impl NormalBasis {
    pub fn conjugates(&self) -> Vec<Fe> {
        (0..self.tower.n as u64)
            .map(|i| self.tower.frob_q(self.alpha, i))
            .collect()
    }
}

fn rank_mod_p(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = arith::pow_mod(rows[rank][col].rem_euclid(p) as u64, p as u64 - 2, p as u64) as i64;
        for r in 0..rows.len() {
            if r != rank && rows[r][col] % p != 0 {
                let k = rows[r][col] * inv % p;
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x - k * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The first `α` in packed-integer order whose `q`-conjugates are `F_q`-independent.
pub fn normal_basis_element(base: &FieldRef, n: u32) -> Result<NormalBasis> {
    let tower = Tower::new(base, n)?;
    let ext = tower.ext.clone();
    let e = base.degree();
    let p = ext.characteristic() as i64;
    let scalars: Vec<Fe> = (0..e).map(|k| ext.pow(tower.emb.root(), k as u64)).collect();
    let full = (e * n) as usize;
    for a in 1..ext.size() {
        let alpha = Fe(a);
        let mut rows = Vec::with_capacity(full);
        for i in 0..n as u64 {
            let conj = tower.frob_q(alpha, i);
            for &s in &scalars {
                rows.push(ext.coords(ext.mul(s, conj)).iter().map(|&x| x as i64).collect());
            }
        }
        let rank = rank_mod_p(rows, p);
        if rank == full {
            return Ok(NormalBasis { tower, alpha, rank });
        }
    }
    unreachable!("every finite extension has a normal basis")
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitCheck {
    pub n: u32,
    pub alpha: Vec<u32>,
    pub log_alpha: LaurentSeries,
    pub pass: bool,
}

/// `log_C(α)` is a unit of `F_{q^n}[[1/T]]` for the normal-basis `α`.
pub fn log_alpha_unit_check(c: &Carlitz, n: u32, prec: i64) -> Result<UnitCheck> {
    let nb = normal_basis_element(c.field(), n)?;
    let ext = &nb.tower.ext;
    let x = LaurentSeries::constant(ext, nb.alpha, prec);
    let log = log_c_eval(c, &x)?;
    Ok(UnitCheck {
        n,
        alpha: ext.coords(nb.alpha),
        pass: log.valuation() == Some(0),
        log_alpha: log,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaAnReport {
    pub n: u32,
    pub prec: i64,
    pub cap: usize,
    pub terms: u128,
    pub value: LaurentSeries,
    /// `layers[j] = Σ_{deg f = j} 1/N(f)`.
    pub layers: Vec<LaurentSeries>,
    /// Largest `j ≤ cap` whose layer is nonzero to precision.
    pub last_contributing_degree: Option<usize>,
}

/// `Σ_{f ∈ A_n monic, deg f ≤ cap} 1/N_{A_n/A}(f)` to precision `prec`.
pub fn zeta_an(c: &Carlitz, n: u32, prec: i64, cap: usize, budget: u128) -> Result<ZetaAnReport> {
    let tower = Tower::new(c.field(), n)?;
    let qn = tower.ext.size() as u128;
    let mut needed: u128 = 0;
    for j in 0..=cap {
        needed = qn
            .checked_pow(j as u32)
            .and_then(|t| needed.checked_add(t))
            .unwrap_or(u128::MAX);
    }
    if needed > budget {
        return Err(Error::budget("zeta_An ideal-sum terms", needed, budget));
    }
    let mut layers = Vec::with_capacity(cap + 1);
    let mut value = LaurentSeries::zero(c.field(), prec);
    for j in 0..=cap {
        let mut layer = LaurentSeries::zero(c.field(), prec);
        if (n as usize * j) < prec as usize {
            for f in MonicIter::new(&tower.ext, j) {
                let nf = norm_to_base(&f, &tower)?;
                layer = layer.add(&LaurentSeries::inv_poly(&nf, prec)?);
            }
        }
        value = value.add(&layer);
        layers.push(layer);
    }
    let last = layers.iter().rposition(|l| !l.is_zero());
    Ok(ZetaAnReport {
        n,
        prec,
        cap,
        terms: needed,
        value,
        layers,
        last_contributing_degree: last,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RegulatorReport {
    pub n: u32,
    pub m: u64,
    pub ell: u32,
    /// `(∏_{ζ ∈ μ_m} Σ_i c_i ζ^i)^{p^ℓ}`, the determinant of the circulant.
    pub value: LaurentSeries,
    /// The same with the factor `(-1)^{m-1}` applied before the `p^ℓ` power.
    pub signed_value: LaurentSeries,
}

/// `c_i = Σ_{j ≡ i mod n} 1/L_j`, `i < n`.
pub fn residue_class_sums(c: &Carlitz, n: u32, prec: i64) -> Vec<LaurentSeries> {
    let mut cs = vec![LaurentSeries::zero(c.field(), prec); n as usize];
    let mut j = 0u32;
    while (c.deg_l(j) as i64) < prec {
        let inv = LaurentSeries::inv_poly(&c.l(j as usize), prec).expect("L_j is nonzero");
        let k = (j % n) as usize;
        cs[k] = cs[k].add(&inv);
        j += 1;
    }
    cs
}

/// The regulator `[A_n : e_C^{-1}(A_n)]` as a product over `μ_m`, `n = m p^ℓ`.
pub fn regulator_an(c: &Carlitz, n: u32, prec: i64) -> Result<RegulatorReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let p = c.field().characteristic();
    let (mut m, mut ell) = (n as u64, 0u32);
    while m % p as u64 == 0 {
        m /= p as u64;
        ell += 1;
    }
    let cs = residue_class_sums(c, n, prec);
    let mu = roots_of_unity(m, c.field())?;
    let big = mu.tower.ext.clone();
    let lifted: Vec<LaurentSeries> = cs.iter().map(|s| s.embed(&mu.tower.emb)).collect();
    let mut prod = LaurentSeries::one(&big, prec);
    for zeta in &mu.roots {
        let mut factor = LaurentSeries::zero(&big, prec);
        for (i, ci) in lifted.iter().enumerate() {
            factor = factor.add(&ci.scale(big.pow(zeta.value(), i as u64)));
        }
        prod = prod.mul(&factor);
    }
    let descended = prod.descend(&mu.tower.emb).ok_or_else(|| {
        let bad = (prod.lead_exp()..prod.prec())
            .find(|&j| mu.tower.emb.preimage(prod.coeff(j).unwrap()).is_none())
            .unwrap_or(prod.lead_exp());
        Error::DescentFailure { exponent: bad }
    })?;
    let f = c.field();
    let sign = if m % 2 == 0 { f.neg(Fe::ONE) } else { Fe::ONE };
    let value = descended.pow_char_capped(ell, prec);
    let signed_value = descended.scale(sign).pow_char_capped(ell, prec);
    Ok(RegulatorReport {
        n,
        m,
        ell,
        value,
        signed_value,
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
    fn log_of_one_leading_terms() {
        let c = c3();
        let f = c.field().clone();
        let l = log_c_eval(&c, &LaurentSeries::one(&f, 8)).unwrap();
        let m1 = f.from_int(-1);
        let want: Vec<Fe> = vec![Fe::ONE, Fe::ZERO, Fe::ZERO, m1, Fe::ZERO, m1, Fe::ZERO, m1];
        assert_eq!(l.coeffs(), &want[..]);
    }

    #[test]
    fn zeta_a1_is_log_of_one() {
        let c = c3();
        let f = c.field().clone();
        for n in 1..=40 {
            let z = zeta_a1(&c, n);
            assert_eq!(z, log_c_eval(&c, &LaurentSeries::one(&f, n)).unwrap(), "N={n}");
        }
    }

    #[test]
    fn round_trip_and_valuation() {
        let c = c3();
        let f = c.field().clone();
        let x = LaurentSeries::monomial(&f, Fe::ONE, 1, 30);
        let l = log_c_eval(&c, &x).unwrap();
        let e = e_c_eval(&c, &x).unwrap();
        assert_eq!(l.valuation(), Some(1));
        assert_eq!(e.valuation(), Some(1));
        assert!(e_c_eval(&c, &l).unwrap().agrees_to(&x, 30));
        assert!(log_c_eval(&c, &e).unwrap().agrees_to(&x, 30));
        let zero = LaurentSeries::zero(&f, 10);
        assert!(log_c_eval(&c, &zero).unwrap().is_zero());
        assert!(e_c_eval(&c, &zero).unwrap().is_zero());
    }

    #[test]
    fn outside_domain() {
        let c = c3();
        let f = c.field().clone();
        let x = LaurentSeries::monomial(&f, Fe::ONE, -2, 10);
        assert_eq!(
            log_c_eval(&c, &x).err(),
            Some(Error::OutsideConvergenceDomain { valuation: -2 })
        );
        let t = LaurentSeries::monomial(&f, Fe::ONE, -1, 10);
        assert_eq!(log_c_eval(&c, &t).unwrap().valuation(), Some(-1));
    }

    #[test]
    fn normal_basis() {
        let f3 = build_field(3, 1).unwrap();
        let nb = normal_basis_element(&f3, 1).unwrap();
        assert_eq!(nb.alpha, Fe::ONE);
        for n in 2..=4 {
            let nb = normal_basis_element(&f3, n).unwrap();
            assert_eq!(nb.rank, n as usize);
        }
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(normal_basis_element(&f4, 3).unwrap().rank, 6);
    }

    #[test]
    fn unit_checks() {
        let c = c3();
        for n in 1..=3 {
            assert!(log_alpha_unit_check(&c, n, 20).unwrap().pass);
        }
    }

    #[test]
    fn zeta_an_n1_layers() {
        let c = c3();
        let rep = zeta_an(&c, 1, 30, 3, DEFAULT_TERM_BUDGET).unwrap();
        for j in 0..=3 {
            let want = LaurentSeries::inv_poly(&c.l(j), 30).unwrap();
            assert_eq!(rep.layers[j], want, "layer {j}");
        }
        assert!(rep.value.agrees_to(&zeta_a1(&c, 30), 30));
        assert!(zeta_an(&c, 3, 20, 4, DEFAULT_TERM_BUDGET).is_err());
    }

    #[test]
    fn regulator_small_cases() {
        let c = c3();
        let r1 = regulator_an(&c, 1, 30).unwrap();
        assert_eq!(r1.value, zeta_a1(&c, 30));
        let cs = residue_class_sums(&c, 2, 20);
        let r2 = regulator_an(&c, 2, 20).unwrap();
        let diff = cs[0].mul(&cs[0]).sub(&cs[1].mul(&cs[1]));
        assert_eq!(r2.value, diff);
        assert_eq!(r2.signed_value, diff.neg());
        let cs = residue_class_sums(&c, 3, 20);
        let r3 = regulator_an(&c, 3, 20).unwrap();
        assert_eq!(r3.value, cs[0].add(&cs[1]).add(&cs[2]).pow_char(1).truncate(20));
    }

    #[test]
    fn class_number_identity_q3_n2() {
        let c = c3();
        let z = zeta_an(&c, 2, 20, 3, DEFAULT_TERM_BUDGET).unwrap();
        let r = regulator_an(&c, 2, 20).unwrap();
        assert!(z.value.agrees_to(&r.value, 20), "{} vs {}", z.value, r.value);
    }
}
