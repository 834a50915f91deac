use super::Poly;
use crate::error::{Error, Result};
use crate::field::Tower;

/// Norm from `F_{q^n}[T]` down to `F_q[T]`: the product of the `n` Frobenius
/// conjugates of a monic `f`. For monic `f` this is `[A_n / f A_n]_A`.
pub fn norm_to_base(f: &Poly, tower: &Tower) -> Result<Poly> {
    if **f.field() != *tower.ext {
        return Err(Error::FieldMismatch);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let e = tower.base.degree() as u64;
    let mut acc = f.clone();
    for i in 1..tower.n as u64 {
        acc = acc.mul(&f.frob_coeffs(i * e));
    }
    acc.descend(&tower.emb).ok_or(Error::DescentFailure { exponent: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{build_field, Fe};

    #[test]
    fn galois_stable_input_gives_power() {
        let f3 = build_field(3, 1).unwrap();
        let tower = Tower::new(&f3, 2).unwrap();
        let base = Poly::from_ints(&f3, &[1, 2, 1]);
        let up = base.embed(&tower.emb);
        assert_eq!(norm_to_base(&up, &tower).unwrap(), base.pow(2));
    }

    #[test]
    fn linear_over_f9() {
        let f3 = build_field(3, 1).unwrap();
        let tower = Tower::new(&f3, 2).unwrap();
        let f9 = tower.ext.clone();
        // g of order 8
        let g = (1..9).map(Fe).find(|&x| f9.element_order(x) == 8).unwrap();
        let lin = Poly::from_coeffs(&f9, vec![g, Fe::ONE]);
        let n = norm_to_base(&lin, &tower).unwrap();
        let g3 = f9.pow(g, 3);
        let expected = Poly::from_coeffs(&f9, vec![f9.mul(g, g3), f9.add(g, g3), Fe::ONE]);
        assert_eq!(n.embed(&tower.emb), expected);
        assert!(n.is_monic() && n.deg() == 2);
        assert_eq!(
            norm_to_base(&lin.scale(f9.from_int(2)), &tower).err(),
            Some(Error::NotMonic)
        );
    }
}
