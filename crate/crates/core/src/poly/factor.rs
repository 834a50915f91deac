//! Irreducibility, enumeration and factorization over finite fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::arith;
use crate::error::{Error, Result};
use crate::field::{Fe, FieldRef};

/// Monic polynomials of a fixed degree, in lexicographic order of their
/// ascending coefficient tuples.
pub struct MonicIter {
    field: FieldRef,
    idx: Vec<usize>,
    done: bool,
}

impl MonicIter {
    pub fn new(field: &FieldRef, degree: usize) -> Self {
        MonicIter {
            field: field.clone(),
            idx: vec![0; degree],
            done: false,
        }
    }
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.done {
            return None;
        }
        let els = self.field.elements_lex();
        let mut coeffs: Vec<Fe> = self.idx.iter().map(|&i| els[i]).collect();
        coeffs.push(Fe::ONE);
        let out = Poly::from_coeffs(&self.field, coeffs);

        // c0 is the most significant position.
        let q = els.len();
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < q {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(out)
    }
}

impl Poly {
    /// Rabin's test: `T^(Q^d) = T mod f` and `gcd(T^(Q^(d/l)) - T, f) = 1` for
    /// every prime `l | d`, `Q` the size of the coefficient field.
    pub fn is_irreducible(&self) -> Result<bool> {
        if self.is_constant() {
            return Err(Error::ConstantPolynomial);
        }
        let f = self.monic();
        let d = f.deg();
        if d == 1 {
            return Ok(true);
        }
        let field = self.field();
        let t = Poly::t(field);
        let mut checkpoints: Vec<usize> = arith::prime_divisors(d as u64)
            .into_iter()
            .map(|l| d / l as usize)
            .collect();
        checkpoints.sort_unstable();
        let mut x = t.clone();
        for i in 1..=d {
            x = x.pow_field_size_mod(&f);
            if checkpoints.binary_search(&i).is_ok() && !x.sub(&t).gcd(&f).is_one() {
                return Ok(false);
            }
        }
        Ok(x == t.rem(&f)?)
    }

    /// True iff no square of a nonconstant polynomial divides `self`.
    pub fn is_squarefree(&self) -> bool {
        if self.is_constant() {
            return !self.is_zero();
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).is_one()
    }

    /// `p`-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Poly {
        let field = self.field();
        let p = field.characteristic() as usize;
        let back = field.degree() as u64 - 1;
        let c = self
            .coeffs()
            .iter()
            .step_by(p)
            .map(|&a| field.frob(a, back))
            .collect();
        Poly::from_coeffs(field, c)
    }

    /// Complete factorization into monic irreducibles times the leading unit.
    /// The equal-degree splitting is randomized and driven only by `seed`.
    pub fn factor(&self, seed: u64) -> Factorization {
        assert!(!self.is_zero(), "factor of zero polynomial");
        let unit = self.lead();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        for (sq, mult) in squarefree_decomposition(&self.monic()) {
            for (g, deg) in distinct_degree(&sq) {
                let mut parts = Vec::new();
                equal_degree(&g, deg, &mut rng, &mut parts);
                factors.extend(parts.into_iter().map(|h| (h, mult)));
            }
        }
        factors.sort_by(|a, b| a.0.lex_cmp(&b.0));
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (g, m) in factors {
            match merged.last_mut() {
                Some((h, k)) if *h == g => *k += m,
                _ => merged.push((g, m)),
            }
        }
        Factorization {
            unit,
            factors: merged,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    /// Monic irreducible factors with multiplicities, sorted by degree then lex.
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn product(&self, field: &FieldRef) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit), |acc, (g, m)| {
                acc.mul(&g.pow(*m as u64))
            })
    }
}

/// Squarefree parts with multiplicities for a monic input.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let p = f.field().characteristic();
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides");
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let t = Poly::t(f.field());
    let mut rest = f.clone();
    let mut h = t.clone();
    let mut i = 0usize;
    while rest.deg() >= 2 * (i + 1) {
        i += 1;
        h = h.pow_field_size_mod(&rest);
        let g = h.sub(&t).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, i));
        }
    }
    if rest.deg() >= 1 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus splitting of a monic squarefree product of degree-`d` irreducibles.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    if f.deg() == d {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let n = f.deg();
    loop {
        let a = Poly::from_coeffs(
            field,
            (0..n)
                .map(|_| Fe(rng.gen_range(0..field.size())))
                .collect(),
        );
        if a.is_constant() {
            continue;
        }
        let g = a.gcd(f);
        let split = if !g.is_one() {
            g
        } else {
            splitting_element(&a, f, d).gcd(f)
        };
        if !split.is_one() && split.deg() < n {
            let other = f.div_exact(&split).expect("gcd divides");
            equal_degree(&split, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}

/// `a^((Q^d-1)/2) - 1` in odd characteristic, the absolute trace of `a` in characteristic 2.
fn splitting_element(a: &Poly, f: &Poly, d: usize) -> Poly {
    let field = f.field();
    if field.characteristic() == 2 {
        let steps = field.degree() as usize * d;
        let mut cur = a.rem(f).expect("nonzero");
        let mut acc = cur.clone();
        for _ in 1..steps {
            cur = cur.mul_mod(&cur, f);
            acc = acc.add(&cur);
        }
        acc
    } else {
        // (Q^d - 1)/2 = (1 + Q + ... + Q^(d-1)) * (Q - 1)/2
        let mut conj = a.rem(f).expect("nonzero");
        let mut norm = conj.clone();
        for _ in 1..d {
            conj = conj.pow_field_size_mod(f);
            norm = norm.mul_mod(&conj, f);
        }
        let half = (field.size() as u64 - 1) / 2;
        norm.pow_mod(half, f).sub(&Poly::one(field))
    }
}

/// All monic irreducibles of degree `d`, in lexicographic order.
pub fn monic_irreducibles(field: &FieldRef, d: usize) -> Vec<Poly> {
    assert!(d >= 1);
    MonicIter::new(field, d)
        .filter(|f| f.is_irreducible().unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn irreducibility_examples() {
        let f = build_field(3, 1).unwrap();
        assert!(Poly::from_ints(&f, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(Poly::from_ints(&f, &[-1, -1, 0, 1]).is_irreducible().unwrap());
        assert!(!Poly::from_ints(&f, &[-1, 0, 1]).is_irreducible().unwrap());
        assert_eq!(
            Poly::one(&f).is_irreducible().err(),
            Some(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn irreducibles_f3() {
        let f = build_field(3, 1).unwrap();
        let d1: Vec<String> = monic_irreducibles(&f, 1).iter().map(|p| p.to_string()).collect();
        assert_eq!(d1, vec!["T", "1 + T", "2 + T"]);
        let d2 = monic_irreducibles(&f, 2);
        assert_eq!(
            d2,
            vec![
                Poly::from_ints(&f, &[1, 0, 1]),
                Poly::from_ints(&f, &[2, 1, 1]),
                Poly::from_ints(&f, &[2, 2, 1]),
            ]
        );
    }

    #[test]
    fn necklace_counts() {
        for q in [3u64, 4, 5] {
            let (p, e) = arith::prime_power(q).unwrap();
            let f = build_field(p, e).unwrap();
            let dmax = if q == 3 { 6 } else { 4 };
            for d in 1..=dmax {
                assert_eq!(
                    monic_irreducibles(&f, d).len() as u128,
                    arith::necklace_count(q, d as u64),
                    "q={q} d={d}"
                );
            }
        }
    }

    #[test]
    fn factor_examples() {
        let f3 = build_field(3, 1).unwrap();
        let fac = Poly::from_ints(&f3, &[-1, 0, 1]).factor(1);
        assert_eq!(
            fac.factors,
            vec![
                (Poly::from_ints(&f3, &[1, 1]), 1),
                (Poly::from_ints(&f3, &[2, 1]), 1)
            ]
        );
        let sq = Poly::from_ints(&f3, &[1, 0, 1]).pow(2);
        assert_eq!(sq.factor(5).factors, vec![(Poly::from_ints(&f3, &[1, 0, 1]), 2)]);

        let f4 = build_field(2, 2).unwrap();
        let w = f4.generator();
        let w2 = f4.mul(w, w);
        let g = Poly::from_coeffs(&f4, vec![Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE]);
        let fac = g.factor(7);
        let mut expected = vec![
            Poly::from_coeffs(&f4, vec![w, Fe::ONE, Fe::ONE]),
            Poly::from_coeffs(&f4, vec![w2, Fe::ONE, Fe::ONE]),
        ];
        expected.sort_by(|a, b| a.lex_cmp(b));
        let got: Vec<Poly> = fac.factors.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(got, expected);
        assert!(fac.factors.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn squarefree_examples() {
        let f = build_field(3, 1).unwrap();
        assert!(Poly::from_ints(&f, &[1, 0, 1]).is_squarefree());
        assert!(!Poly::from_ints(&f, &[1, 1]).pow(2).is_squarefree());
        assert!(!Poly::from_ints(&f, &[2, 0, 0, 1]).is_squarefree());
    }

    #[test]
    fn product_of_irreducibles_dividing_degree() {
        let f = build_field(3, 1).unwrap();
        for d in 1..=3usize {
            let mut prod = Poly::one(&f);
            for e in arith::divisors(d as u64) {
                for p in monic_irreducibles(&f, e as usize) {
                    prod = prod.mul(&p);
                }
            }
            let target = Poly::monomial(&f, Fe::ONE, 3usize.pow(d as u32)).sub(&Poly::t(&f));
            assert_eq!(prod, target);
        }
    }

    #[test]
    fn factor_inseparable_power() {
        let f = build_field(3, 1).unwrap();
        // (T+2)^3 * (T^2+1)^6 * T
        let g = Poly::from_ints(&f, &[2, 1])
            .pow(3)
            .mul(&Poly::from_ints(&f, &[1, 0, 1]).pow(6))
            .mul(&Poly::t(&f))
            .scale(Fe(2));
        let fac = g.factor(3);
        assert_eq!(fac.product(&f), g);
        assert_eq!(fac.unit, Fe(2));
        assert_eq!(fac.factors.len(), 3);
    }
}
