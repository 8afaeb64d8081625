//! The eight rank-four spin braided categories, their quadratic forms and their fermions.

use pointed_obstructions::braided::{rank_four_family, RankFourVariant};
use pointed_obstructions::fermion::{find_fermions, ConditionC};
use pointed_obstructions::Result;

fn main() -> Result<()> {
    for variant in [RankFourVariant::KleinFour, RankFourVariant::Cyclic4] {
        for k in variant.admissible_k() {
            let fam = rank_four_family(variant, k.clone())?;
            let ac = &fam.cocycle;
            let q = ac.quadratic_form()?;
            let [_, v, f, vf] = fam.named_elements();
            let fermions = find_fermions(&ac.pointed()?, Some(ac), ConditionC::Corrected)?;
            println!(
                "{variant:?} k = {k}: braided {}, non-degenerate {}, q(v) = {}, q(f) = {}, q(v+f) = {}, fermions at {:?}",
                ac.check().valid,
                ac.is_non_degenerate()?,
                q.q(v),
                q.q(f),
                q.q(vf),
                fermions.iter().map(|x| x.fermion.f).collect::<Vec<_>>()
            );
        }
    }
    Ok(())
}
