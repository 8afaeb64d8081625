//! Checking the two built-in ℤ/2 actions, and completing the one that fails the axioms.

use std::sync::Arc;

use pointed_obstructions::cochain::Cochain;
use pointed_obstructions::fermion::{
    builtin_action, fermionic_ratio_table, verify_fermionic_action, BuiltinAction,
};
use pointed_obstructions::group::{FinGroup, GModule};
use pointed_obstructions::obstruct::o3_pointed;
use pointed_obstructions::{Result, QZ};

fn main() -> Result<()> {
    for (which, k) in [
        (BuiltinAction::Caso1, QZ::zero()),
        (BuiltinAction::Caso2, QZ::new(1, 8)),
    ] {
        let act = builtin_action(which, k)?;
        let report = act.data.verify();
        println!("{which:?}: bosonic action {}", report.valid);
        for t in &report.axioms {
            if t.violations > 0 {
                println!("  {:?}: {} violations", t.axiom, t.violations);
            }
        }
        let rows: Vec<String> = fermionic_ratio_table(&act.data, &act.fermion)
            .iter()
            .filter(|r| r.g == 1)
            .map(|r| format!("a={}: {}", r.a, r.mu_side))
            .collect();
        println!("  ratio row at the generator: {}", rows.join(", "));

        let z2 = Arc::new(GModule::trivial(
            act.data.group().clone(),
            Arc::new(FinGroup::cyclic(2)?),
        )?);
        let alpha = Cochain::zero(act.data.group().clone(), z2, 2)?;
        let o3 = o3_pointed(&act.data, act.data.gamma_table())?;
        println!(
            "  γ completed at {:?}; coherence class {:?}",
            o3.completed_pairs, o3.verdict.status
        );
        let usable = if report.valid {
            Some(act.data.clone())
        } else {
            o3.repaired
        };
        if let Some(data) = usable {
            let v = verify_fermionic_action(&data, &act.fermion, &alpha)?;
            println!(
                "  fermionic for the trivial super-group: {}",
                v.is_fermionic()
            );
        }
    }
    Ok(())
}
