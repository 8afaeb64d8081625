//! The generator (i/m)·[j+k ≥ m] of H³(ℤ/m, ℚ/ℤ) and its order.

use pointed_obstructions::cochain::{
    cyclic_generator_3, cyclic_generator_without_factor, is_cocycle, triviality_qz,
};
use pointed_obstructions::Result;

fn main() -> Result<()> {
    for m in 2..=6u64 {
        let gen = cyclic_generator_3(m)?;
        let orders: Vec<bool> = (1..=m as i64)
            .map(|k| triviality_qz(&gen.scaled(k)).map(|v| v.is_trivial()))
            .collect::<Result<_>>()?;
        let order = orders.iter().position(|&t| t).map(|i| i + 1);
        let broken = is_cocycle(&cyclic_generator_without_factor(m)?);
        println!(
            "m = {m}: cocycle {}, order {:?}; without the i factor: cocycle {} (first failure at {:?})",
            is_cocycle(&gen).holds(),
            order,
            broken.holds(),
            broken.violation
        );
    }
    Ok(())
}
