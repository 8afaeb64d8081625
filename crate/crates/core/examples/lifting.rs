//! Does the ℤ/4 super-group act fermionically? The two criteria side by side.

use std::sync::Arc;

use pointed_obstructions::cochain::Cochain;
use pointed_obstructions::fermion::{builtin_action, gamma_tilde, BuiltinAction};
use pointed_obstructions::group::{FinGroup, GModule, GroupHom};
use pointed_obstructions::obstruct::{classify_fermionic_actions, FermionModule};
use pointed_obstructions::{Result, QZ};

fn main() -> Result<()> {
    let act = builtin_action(BuiltinAction::Caso1, QZ::zero())?;
    for n in [2u64, 4, 6] {
        let g = Arc::new(FinGroup::cyclic(n)?);
        for (label, images) in [
            ("x mod 2", (0..n as usize).map(|x| x % 2).collect()),
            ("trivial", vec![0; n as usize]),
        ] {
            let rho = GroupHom::new(g.clone(), act.data.group().clone(), images)?;
            let data = act.data.pullback(&rho)?;
            let module = FermionModule::new(data.star_module()?, act.family.f)?;
            let theta = gamma_tilde(&data, &act.fermion)?;
            let z2 = Arc::new(GModule::trivial(g.clone(), Arc::new(FinGroup::cyclic(2)?))?);
            // the carry cocycle presenting ℤ/2n as an extension of ℤ/n
            let alpha =
                Cochain::from_fn(g.clone(), z2, 2, |t| usize::from(t[0] + t[1] >= n as usize))?;
            let c = classify_fermionic_actions(&module, &theta, &alpha)?;
            println!(
                "ℤ/{n} acting through {label}: O₃ vanishes {}, θ − α in the image of r_* {}, liftings {:?}",
                c.exists(),
                c.lifting.exists,
                c.torsor_order
            );
        }
    }
    Ok(())
}
