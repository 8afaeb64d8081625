use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Cochain, Coefficients, IntCoeff, LazyCochain, QZCoeff};
use crate::error::{Error, Result};
use crate::group::FinGroup;
use crate::qz::QZ;

/// `(f ∪ g)(x_1, …, x_{p+q}) = pair(f(x_1, …, x_p), (x_1⋯x_p) · g(x_{p+1}, …))`.
pub fn cup_with<A: Coefficients, B: Coefficients, C: Coefficients>(
    f: &Cochain<A>,
    g: &Cochain<B>,
    coeff: C,
    pair: impl Fn(&A::Value, &B::Value) -> C::Value,
) -> Result<Cochain<C>> {
    if f.group() != g.group() {
        return Err(Error::GroupMismatch(
            "cup product of cochains on different groups".into(),
        ));
    }
    let (p, q) = (f.degree(), g.degree());
    let grp = f.group().clone();
    Cochain::from_fn(grp.clone(), coeff, p + q, |t| {
        let head = grp.product(&t[..p]);
        pair(&f.get(&t[..p]), &g.coeff().act(head, &g.get(&t[p..])))
    })
}

/// Cup product of a ℚ/ℤ cochain with an integral one, trivial actions.
pub fn cup_product(f: &Cochain<QZCoeff>, g: &Cochain<IntCoeff>) -> Result<Cochain<QZCoeff>> {
    if !f.coeff().is_trivial() {
        return Err(Error::Unsupported(
            "cup product with a nontrivial sign action".into(),
        ));
    }
    cup_with(f, g, QZCoeff::trivial(), |a, b| a.scale(b))
}

pub fn cup_int(f: &Cochain<IntCoeff>, g: &Cochain<IntCoeff>) -> Result<Cochain<IntCoeff>> {
    cup_with(f, g, IntCoeff, |a, b| a * b)
}

fn cyclic(m: u64) -> Result<Arc<FinGroup>> {
    if m < 2 {
        return Err(Error::InvalidGroup(
            "cyclic group of order at least 2 expected".into(),
        ));
    }
    Ok(Arc::new(FinGroup::cyclic(m)?))
}

/// The 1-cocycle `σ^i ↦ i·a/m` on `ℤ/m`.
pub fn cyclic_character(m: u64, a: i64) -> Result<Cochain<QZCoeff>> {
    let g = cyclic(m)?;
    Cochain::from_fn(g, QZCoeff::trivial(), 1, |t| {
        QZ::new(t[0] as i64 * a, m as i64)
    })
}

/// The integral carry cocycle `(σ^i, σ^j) ↦ [i + j ≥ m]`.
pub fn cyclic_carry(m: u64) -> Result<Cochain<IntCoeff>> {
    let g = cyclic(m)?;
    let m = m as usize;
    Cochain::from_fn(g, IntCoeff, 2, |t| {
        if t[0] + t[1] >= m {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

/// `f_1 ∪ u ∪ ⋯ ∪ u`, a generator of `H^{2i+1}(ℤ/m, ℚ/ℤ) ≅ ℤ/m`.
pub fn cyclic_generator(m: u64, degree: usize) -> Result<Cochain<QZCoeff>> {
    if degree % 2 == 0 {
        return Err(Error::Precondition("odd degree expected".into()));
    }
    let u = cyclic_carry(m)?;
    let mut acc = cyclic_character(m, 1)?;
    for _ in 0..degree / 2 {
        acc = cup_product(&acc, &u)?;
    }
    Ok(acc)
}

/// `(σ^i, σ^j, σ^k) ↦ i·[j + k ≥ m] / m`.
pub fn cyclic_generator_3(m: u64) -> Result<Cochain<QZCoeff>> {
    cyclic_generator(m, 3)
}

/// `(σ^i, σ^j, σ^k) ↦ [j + k ≥ m] / m`, the closed form with the factor `i` dropped.
/// It is not a cocycle.
pub fn cyclic_generator_without_factor(m: u64) -> Result<LazyCochain<QZCoeff>> {
    let g = cyclic(m)?;
    let mm = m as usize;
    LazyCochain::new(g, QZCoeff::trivial(), 3, move |t| {
        if t[1] + t[2] >= mm {
            QZ::new(1, mm as i64)
        } else {
            QZ::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{is_cocycle, triviality_qz};

    #[test]
    fn dropping_the_factor_breaks_the_cocycle_condition() {
        for m in 2..5 {
            assert!(!is_cocycle(&cyclic_generator_without_factor(m).unwrap()).holds());
        }
    }

    #[test]
    fn carry_is_a_cocycle() {
        for m in 2..7 {
            assert!(is_cocycle(&cyclic_carry(m).unwrap()).holds());
        }
    }

    #[test]
    fn generator_closed_form() {
        let m = 5;
        let f = cyclic_generator_3(m).unwrap();
        for i in 1..5usize {
            for j in 1..5usize {
                for k in 1..5usize {
                    let expect = QZ::new(if j + k >= 5 { i as i64 } else { 0 }, m as i64);
                    assert_eq!(f.get(&[i, j, k]), expect);
                }
            }
        }
    }

    #[test]
    fn generator_has_order_m() {
        for m in [2u64, 3, 4] {
            let f = cyclic_generator_3(m).unwrap();
            assert!(is_cocycle(&f).holds());
            for k in 1..m as i64 {
                assert!(
                    !triviality_qz(&f.scaled(k)).unwrap().is_trivial(),
                    "m={m} k={k}"
                );
            }
            assert!(triviality_qz(&f.scaled(m as i64)).unwrap().is_trivial());
        }
    }

    #[test]
    fn degree_five_generator_is_a_cocycle() {
        let f = cyclic_generator(3, 5).unwrap();
        assert!(is_cocycle(&f).holds());
        assert!(!triviality_qz(&f).unwrap().is_trivial());
    }
}
