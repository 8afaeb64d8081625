//! Lyndon normal form of a 3-cocycle on ℤ/2 × ℤ/2 and the class of its lowest component.

use std::sync::Arc;

use pointed_obstructions::cochain::{coboundary, Cochain, QZCoeff};
use pointed_obstructions::group::FinGroup;
use pointed_obstructions::lyndon::{component_class, lyndon_normalize, ProductSplit};
use pointed_obstructions::{Result, QZ};
use rand::{Rng, SeedableRng};

fn main() -> Result<()> {
    let g = Arc::new(FinGroup::from_invariants(&[2, 2])?);
    let split = ProductSplit::from_subgroups(g.clone(), &[2], &[1])?;
    // x₀(g₁)·x₁(g₂)·x₁(g₃)/2 plus a random coboundary
    let gg = g.clone();
    let base = Cochain::from_fn(g.clone(), QZCoeff::trivial(), 3, |t| {
        QZ::new(
            (gg.tuple(t[0])[0] * gg.tuple(t[1])[1] * gg.tuple(t[2])[1]) as i64,
            2,
        )
    })?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let noise = Cochain::from_fn(g.clone(), QZCoeff::trivial(), 2, |_| {
        QZ::new(rng.gen_range(0..4), 4)
    })?;
    let f = base.plus(&coboundary(&noise)?);

    let nf = lyndon_normalize(&f, &split)?;
    println!(
        "normal form equals f + ∂(trail): {}",
        nf.normalized().minus(&f) == coboundary(nf.trail())?
    );
    for c in nf.components() {
        println!(
            "component ({}, {}): {} nonzero entries",
            c.p,
            c.q,
            c.entries.len()
        );
    }
    let lowest = nf
        .components()
        .into_iter()
        .find(|c| !c.is_zero())
        .map(|c| c.p)
        .unwrap_or(0);
    let class = component_class(nf.normalized(), &split, lowest)?;
    println!(
        "class of component ({}, {}): {:?}",
        class.k, class.q, class.status
    );
    Ok(())
}
