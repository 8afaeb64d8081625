//! Super-groups `(G, α)` and the extension groups they present.

use std::sync::Arc;

use crate::cochain::{is_cocycle, ModuleCochain};
use crate::error::{Error, Result};
use crate::group::{FinGroup, GModule};

/// The trivial `G`-module `ℤ/2`.
pub fn z2_trivial(group: &Arc<FinGroup>) -> Result<Arc<GModule>> {
    Ok(Arc::new(GModule::trivial(
        group.clone(),
        Arc::new(FinGroup::cyclic(2)?),
    )?))
}

/// The group on pairs `(a, g)`, stored at index `a + |C|·g`, with product
/// `(a, g)(b, h) = (a + g·b + φ(g, h), gh)`.
pub fn supergroup_extension(phi: &ModuleCochain) -> Result<FinGroup> {
    if phi.degree() != 2 {
        return Err(Error::Input("an extension needs a 2-cochain".into()));
    }
    if let Some(t) = is_cocycle(phi).violation {
        return Err(Error::NotCocycle { tuple: t });
    }
    let module = phi.coeff();
    let (g, c) = (module.group(), module.module());
    let (n, m) = (g.order(), c.order());
    let rows = (0..n * m)
        .map(|x| {
            let (a, gx) = (x % m, x / m);
            (0..n * m)
                .map(|y| {
                    let (b, hy) = (y % m, y / m);
                    let s = c.mul(c.mul(a, module.act(gx, b)), phi.get(&[gx, hy]));
                    s + m * g.mul(gx, hy)
                })
                .collect()
        })
        .collect();
    FinGroup::from_table(rows)
}

/// A super-group given as a quotient `G` and a class `α ∈ H²(G, ℤ/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperGroupPresentation {
    alpha: ModuleCochain,
}

impl SuperGroupPresentation {
    pub fn new(alpha: ModuleCochain) -> Result<Self> {
        let m = alpha.coeff();
        if m.module().factors() != Some(&[2][..]) || !m.is_trivial() {
            return Err(Error::InvalidModule(
                "α takes values in the trivial module ℤ/2".into(),
            ));
        }
        if alpha.degree() != 2 {
            return Err(Error::Input("α is a 2-cochain".into()));
        }
        if let Some(t) = is_cocycle(&alpha).violation {
            return Err(Error::NotCocycle { tuple: t });
        }
        Ok(SuperGroupPresentation { alpha })
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        self.alpha.group()
    }

    pub fn alpha(&self) -> &ModuleCochain {
        &self.alpha
    }

    /// The extension `G̃`; its central involution is [`SuperGroupPresentation::central_element`].
    pub fn extension(&self) -> Result<FinGroup> {
        supergroup_extension(&self.alpha)
    }

    pub fn central_element(&self) -> usize {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::Cochain;

    fn klein() -> Arc<FinGroup> {
        Arc::new(FinGroup::from_invariants(&[2, 2]).unwrap())
    }

    #[test]
    fn split_extension_of_z2_is_klein() {
        let g = Arc::new(FinGroup::cyclic(2).unwrap());
        let z2 = z2_trivial(&g).unwrap();
        let phi = Cochain::zero(g, z2, 2).unwrap();
        let e = supergroup_extension(&phi).unwrap();
        assert_eq!(e.order(), 4);
        assert!(e.is_abelian());
        assert_eq!(e.exponent(), 2);
    }

    #[test]
    fn nonsplit_extension_of_z2_is_cyclic() {
        let g = Arc::new(FinGroup::cyclic(2).unwrap());
        let z2 = z2_trivial(&g).unwrap();
        let mut phi = Cochain::zero(g, z2, 2).unwrap();
        phi.set(&[1, 1], 1).unwrap();
        let e = supergroup_extension(&phi).unwrap();
        let sigma = 2;
        assert_eq!(e.mul(sigma, sigma), 1);
        assert_eq!(e.element_order(sigma), 4);
    }

    #[test]
    fn dihedral_class() {
        let g = klein();
        let z2 = z2_trivial(&g).unwrap();
        let phi = Cochain::from_fn(g.clone(), z2, 2, |t| {
            let (x, y) = (g.tuple(t[0]), g.tuple(t[1]));
            ((x[1] * y[0]) % 2) as usize
        })
        .unwrap();
        let sg = SuperGroupPresentation::new(phi).unwrap();
        let e = sg.extension().unwrap();
        assert_eq!(e.order(), 8);
        assert!(!e.is_abelian());
        assert_eq!(e.center(), vec![0, sg.central_element()]);
        let squares_to_z: Vec<usize> = e.elements().filter(|&x| e.mul(x, x) == 1).collect();
        assert_eq!(squares_to_z.len(), 2);
        assert!(squares_to_z.iter().all(|&x| e.element_order(x) == 4));
    }

    #[test]
    fn trivial_phi_gives_direct_product() {
        let g = klein();
        let c = Arc::new(FinGroup::cyclic(3).unwrap());
        let m = Arc::new(GModule::trivial(g.clone(), c.clone()).unwrap());
        let phi = Cochain::zero(g.clone(), m, 2).unwrap();
        let e = supergroup_extension(&phi).unwrap();
        for x in e.elements() {
            for y in e.elements() {
                let expect = c.mul(x % 3, y % 3) + 3 * g.mul(x / 3, y / 3);
                assert_eq!(e.mul(x, y), expect);
            }
        }
    }

    #[test]
    fn rejects_non_cocycles() {
        let g = Arc::new(FinGroup::cyclic(3).unwrap());
        let z2 = z2_trivial(&g).unwrap();
        let mut phi = Cochain::zero(g, z2.clone(), 2).unwrap();
        phi.set(&[1, 1], 1).unwrap();
        assert!(matches!(
            supergroup_extension(&phi),
            Err(Error::NotCocycle { .. })
        ));
        assert!(SuperGroupPresentation::new(phi).is_err());
    }
}
