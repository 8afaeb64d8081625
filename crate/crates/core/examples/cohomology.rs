//! Cohomology groups of small groups and a coboundary with its witness.

use std::sync::Arc;

use pointed_obstructions::cochain::{
    coboundary, cohomology_invariants, triviality_qz, Cochain, QZCoeff,
};
use pointed_obstructions::group::{FinGroup, GModule};
use pointed_obstructions::{Result, QZ};

fn show(inv: &[num_bigint::BigInt]) -> String {
    if inv.is_empty() {
        "0".into()
    } else {
        inv.iter()
            .map(|d| format!("ℤ/{d}"))
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }
}

fn main() -> Result<()> {
    for factors in [vec![2u64], vec![4], vec![2, 2], vec![2, 4]] {
        let g = Arc::new(FinGroup::from_invariants(&factors)?);
        let z2 = Arc::new(GModule::trivial(g.clone(), Arc::new(FinGroup::cyclic(2)?))?);
        let row: Vec<String> = (1..=3)
            .map(|n| cohomology_invariants(&z2, n).map(|i| show(&i)))
            .collect::<Result<_>>()?;
        println!(
            "G = {factors:?}: H¹, H², H³ with ℤ/2 coefficients = {}",
            row.join(" | ")
        );
    }

    // a 2-cocycle on ℤ/4 that is secretly ∂p
    let g = Arc::new(FinGroup::cyclic(4)?);
    let p = Cochain::from_fn(g.clone(), QZCoeff::trivial(), 1, |t| {
        QZ::new(t[0] as i64, 8)
    })?;
    let f = coboundary(&p)?;
    let verdict = triviality_qz(&f)?;
    let w = verdict.witness.expect("coboundaries are trivial");
    println!(
        "∂p on ℤ/4 is {:?}; witness bounds it: {}",
        verdict.status,
        coboundary(&w)? == f
    );
    Ok(())
}
