use std::sync::Arc;

use super::{coboundary, require_cocycle, Cochain};
use crate::error::{Error, Result};
use crate::group::{GModule, ModuleHom, ShortExactSeq};

/// Valuewise image `φ_* f`.
pub fn pushforward(f: &Cochain<Arc<GModule>>, phi: &ModuleHom) -> Result<Cochain<Arc<GModule>>> {
    if f.coeff() != phi.source() {
        return Err(Error::GroupMismatch(
            "cochain does not take values in the source of the map".into(),
        ));
    }
    f.map_into(phi.target().clone(), |&x| phi.apply(x))
}

/// The connecting map `Hⁿ(G, C) → Hⁿ⁺¹(G, A)`: lift along the section, take the
/// coboundary in `B`, and read it back in `A`.
pub fn connecting_map(
    ses: &ShortExactSeq,
    f: &Cochain<Arc<GModule>>,
) -> Result<Cochain<Arc<GModule>>> {
    if f.coeff() != ses.quotient() {
        return Err(Error::GroupMismatch(
            "cochain does not take values in the quotient".into(),
        ));
    }
    require_cocycle(f)?;
    let lifted = f.map_into(ses.middle().clone(), |&c| ses.lift(c))?;
    let d = coboundary(&lifted)?;
    if d.values().iter().any(|&b| ses.preimage(b).is_none()) {
        return Err(Error::Precondition(
            "lifted coboundary left the submodule".into(),
        ));
    }
    d.map_into(ses.sub().clone(), |&b| {
        ses.preimage(b).expect("checked above")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::triviality_finite;
    use crate::group::FinGroup;

    #[test]
    fn bockstein_of_the_identity_character() {
        // 0 → ℤ/2 → ℤ/4 → ℤ/2 → 0 over ℤ/2
        let g = Arc::new(FinGroup::cyclic(2).unwrap());
        let z2 =
            Arc::new(GModule::trivial(g.clone(), Arc::new(FinGroup::cyclic(2).unwrap())).unwrap());
        let z4 =
            Arc::new(GModule::trivial(g.clone(), Arc::new(FinGroup::cyclic(4).unwrap())).unwrap());
        let i = ModuleHom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let r = ModuleHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let ses = ShortExactSeq::new(i.clone(), r, None).unwrap();
        let mut chi = Cochain::zero(g, z2.clone(), 1).unwrap();
        chi.set(&[1], 1).unwrap();
        let beta = connecting_map(&ses, &chi).unwrap();
        assert_eq!(beta.get(&[1, 1]), 1);
        assert!(!triviality_finite(&beta).unwrap().is_trivial());
        let pushed = pushforward(&beta, &i).unwrap();
        assert!(triviality_finite(&pushed).unwrap().is_trivial());
    }
}
