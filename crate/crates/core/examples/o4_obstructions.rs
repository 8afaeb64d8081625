//! O₄ for the Drinfeld-center example (dense and filtration) and for an odd cyclic group
//! (certificates only, since the dense table is refused).

use std::sync::Arc;

use pointed_obstructions::braided::AbelianCocycle;
use pointed_obstructions::group::{FinGroup, GModule};
use pointed_obstructions::lyndon::ProductSplit;
use pointed_obstructions::obstruct::{
    anomaly_verdict, o4_twisted_identity, AnomalyStrategy, TwistCocycle, DENSE_CAP,
};
use pointed_obstructions::scenario::{reproduce_paper, Scenario};
use pointed_obstructions::{Result, QZ};

fn main() -> Result<()> {
    let ac = AbelianCocycle::from_fns(
        Arc::new(FinGroup::cyclic(2)?),
        |x, y, z| QZ::new((x * y * z) as i64, 2),
        |x, y| QZ::new((x * y) as i64, 4),
    )?;
    let g = Arc::new(FinGroup::from_invariants(&[2, 2])?);
    let m = Arc::new(GModule::trivial(g.clone(), ac.group().clone())?);
    let gc = g.clone();
    let mu = TwistCocycle::from_fn(m, |t| (gc.tuple(t[0])[0] * gc.tuple(t[1])[1]) as usize)?;
    let o4 = o4_twisted_identity(&ac, &mu)?;
    let split = ProductSplit::from_subgroups(g.clone(), &[2], &[1])?;
    for strategy in [
        AnomalyStrategy::Dense { cap: DENSE_CAP },
        AnomalyStrategy::Filtration { split, k: 1 },
    ] {
        let r = anomaly_verdict(&o4, &strategy)?;
        println!("Drinfeld example, {} strategy: {:?}", r.strategy, r.status);
    }

    // the odd-m instance has |G| = 81, so its verdict comes from certificates
    let report = reproduce_paper(&Scenario::OddM { m: 3, n: 2 })?;
    for c in &report.checks {
        println!(
            "odd m = 3, {}: {} {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    Ok(())
}
