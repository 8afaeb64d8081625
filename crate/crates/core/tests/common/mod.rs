#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use pointed_obstructions::braided::{rank_four_family, RankFourFamily, RankFourVariant};
use pointed_obstructions::cochain::{
    coboundary, coboundary_matrix, connecting_map, enumerate_cocycles, is_cocycle,
    triviality_finite, triviality_qz, Cochain, CochainFn, IntCoeff, ModuleCochain, QZCochain,
    QZCoeff,
};
use pointed_obstructions::fermion::{
    builtin_action, gamma_tilde, BosonicActionData, BuiltinAction,
};
use pointed_obstructions::group::{FinGroup, GModule, ModuleHom, ShortExactSeq};
use pointed_obstructions::linalg::Smith;
use pointed_obstructions::obstruct::{
    alpha_lifting_exists, o3_fermionic, o3_pointed, o4_general, o4_twisted_identity, FermionModule,
    TwistCocycle,
};
use pointed_obstructions::QZ;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Outcome = std::result::Result<String, String>;

pub fn arc(g: FinGroup) -> Arc<FinGroup> {
    Arc::new(g)
}

pub fn dihedral8() -> FinGroup {
    let idx = |r: usize, s: usize| r + 4 * s;
    let rows = (0..8)
        .map(|x| {
            let (a, b) = (x % 4, x / 4);
            (0..8)
                .map(|y| {
                    let (c, d) = (y % 4, y / 4);
                    let r = if b == 1 { (a + 4 - c) % 4 } else { (a + c) % 4 };
                    idx(r, b ^ d)
                })
                .collect()
        })
        .collect();
    FinGroup::from_table(rows).unwrap()
}

pub fn quaternion8() -> FinGroup {
    // units 1, i, j, k at 0..4, their negatives at 4..8
    let unit = |x: usize, y: usize| -> (usize, bool) {
        match (x, y) {
            (0, y) => (y, false),
            (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let rows = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (u, neg) = unit(x % 4, y % 4);
                    let sign = neg ^ (x >= 4) ^ (y >= 4);
                    u + if sign { 4 } else { 0 }
                })
                .collect()
        })
        .collect();
    FinGroup::from_table(rows).unwrap()
}

pub fn symmetric3() -> FinGroup {
    FinGroup::from_table(vec![
        vec![0, 1, 2, 3, 4, 5],
        vec![1, 2, 0, 4, 5, 3],
        vec![2, 0, 1, 5, 3, 4],
        vec![3, 5, 4, 0, 2, 1],
        vec![4, 3, 5, 1, 0, 2],
        vec![5, 4, 3, 2, 1, 0],
    ])
    .unwrap()
}

/// Every group of order at most eight up to isomorphism, except the trivial one.
pub fn groups_up_to_8() -> Vec<(&'static str, Arc<FinGroup>)> {
    let inv = |f: &[u64]| arc(FinGroup::from_invariants(f).unwrap());
    vec![
        ("Z2", inv(&[2])),
        ("Z3", inv(&[3])),
        ("Z4", inv(&[4])),
        ("Z2xZ2", inv(&[2, 2])),
        ("Z5", inv(&[5])),
        ("Z6", inv(&[6])),
        ("S3", arc(symmetric3())),
        ("Z7", inv(&[7])),
        ("Z8", inv(&[8])),
        ("Z2xZ4", inv(&[2, 4])),
        ("Z2xZ2xZ2", inv(&[2, 2, 2])),
        ("D8", arc(dihedral8())),
        ("Q8", arc(quaternion8())),
    ]
}

pub fn groups_up_to_4() -> Vec<(&'static str, Arc<FinGroup>)> {
    groups_up_to_8()
        .into_iter()
        .filter(|(_, g)| g.order() <= 4)
        .collect()
}

/// Homomorphisms `G → ℤ/2`, as indicator vectors.
pub fn signs_of(g: &FinGroup) -> Vec<Vec<bool>> {
    let n = g.order();
    (0u32..1 << n)
        .map(|mask| (0..n).map(|x| mask >> x & 1 == 1).collect::<Vec<bool>>())
        .filter(|s| {
            !s[0]
                && g.elements()
                    .all(|x| g.elements().all(|y| s[g.mul(x, y)] == (s[x] ^ s[y])))
        })
        .collect()
}

/// `ℤ/m` over `G`, with `g` acting by `−1` where `sign[g]`.
pub fn signed_cyclic(g: &Arc<FinGroup>, m: u64, sign: &[bool]) -> Arc<GModule> {
    let a = arc(FinGroup::cyclic(m).unwrap());
    let neg: Vec<usize> = (0..m as usize)
        .map(|x| (m as usize - x) % m as usize)
        .collect();
    let id: Vec<usize> = (0..m as usize).collect();
    let action = g
        .elements()
        .map(|x| if sign[x] { neg.clone() } else { id.clone() })
        .collect();
    Arc::new(GModule::new(g.clone(), a, action).unwrap())
}

pub fn families() -> Vec<RankFourFamily> {
    [RankFourVariant::KleinFour, RankFourVariant::Cyclic4]
        .into_iter()
        .flat_map(|v| {
            v.admissible_k()
                .into_iter()
                .map(move |k| rank_four_family(v, k).unwrap())
        })
        .collect()
}

fn random_module_cochain(rng: &mut ChaCha8Rng, m: &Arc<GModule>, n: usize) -> ModuleCochain {
    let size = m.module().order();
    Cochain::from_fn(m.group().clone(), m.clone(), n, |_| rng.gen_range(0..size)).unwrap()
}

/// `∂∂ = 0` on random cochains of degree `n` for one group, with finite twisted and ℚ/ℤ
/// coefficients.
pub fn coboundary_squares_to_zero(seed: u64, group: &Arc<FinGroup>, n: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs = signs_of(group);
    let sign = &signs[rng.gen_range(0..signs.len())];
    let m = rng.gen_range(2..=6u64);
    let module = signed_cyclic(group, m, sign);
    let f = random_module_cochain(&mut rng, &module, n);
    let dd = coboundary(&coboundary(&f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    if !dd.is_zero() {
        return Err(format!("∂∂ ≠ 0 for ℤ/{m} in degree {n}"));
    }
    let den = rng.gen_range(1..=12i64);
    let q = Cochain::from_fn(group.clone(), QZCoeff::with_signs(sign.clone()), n, |_| {
        QZ::new(rng.gen_range(0..den), den)
    })
    .map_err(|e| e.to_string())?;
    let dd = coboundary(&coboundary(&q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    if !dd.is_zero() {
        return Err(format!("∂∂ ≠ 0 for ℚ/ℤ in degree {n}"));
    }
    Ok(format!("ℤ/{m} and ℚ/ℤ, degree {n}"))
}

/// Short exact sequences with quotient of order at most four.
pub fn small_sequences() -> Vec<(String, ShortExactSeq)> {
    let mut out = Vec::new();
    let cyclic = |n| arc(FinGroup::cyclic(n).unwrap());
    for (name, g) in groups_up_to_4() {
        let trivial = |n| Arc::new(GModule::trivial(g.clone(), cyclic(n)).unwrap());
        // multiplication by p into ℤ/p·q followed by reduction mod q
        for (sub, mid, quo) in [(2u64, 4u64, 2u64), (2, 8, 4), (3, 9, 3)] {
            let (a, b, c) = (trivial(sub), trivial(mid), trivial(quo));
            let step = (mid / sub) as usize;
            let i = ModuleHom::new(a, b.clone(), (0..sub as usize).map(|x| x * step).collect())
                .unwrap();
            let r = ModuleHom::new(b, c, (0..mid as usize).map(|x| x % quo as usize).collect())
                .unwrap();
            out.push((
                format!("{name}: ℤ/{sub} → ℤ/{mid} → ℤ/{quo}"),
                ShortExactSeq::new(i, r, None).unwrap(),
            ));
        }
        // ℤ/2 → ℤ/4 → ℤ/2 with a sign action on all three
        for sign in signs_of(&g).into_iter().skip(1).take(1) {
            let (a, b, c) = (
                signed_cyclic(&g, 2, &sign),
                signed_cyclic(&g, 4, &sign),
                signed_cyclic(&g, 2, &sign),
            );
            let i = ModuleHom::new(a, b.clone(), vec![0, 2]).unwrap();
            let r = ModuleHom::new(b, c, vec![0, 1, 0, 1]).unwrap();
            out.push((
                format!("{name}: signed ℤ/2 → ℤ/4 → ℤ/2"),
                ShortExactSeq::new(i, r, None).unwrap(),
            ));
        }
    }
    for k in RankFourVariant::KleinFour.admissible_k() {
        let act = builtin_action(BuiltinAction::Caso1, k.clone()).unwrap();
        let fm = FermionModule::new(act.data.star_module().unwrap(), act.family.f).unwrap();
        if let Some(ses) = fm.ses {
            out.push((format!("Ker r → Â → ℤ/2 for the swap action, k = {k}"), ses));
        }
    }
    out
}

/// `δ(f)` does not depend on the section, for every section and every cocycle of degree 1
/// and 2 (all of them when few enough, a seeded sample otherwise).
pub fn connecting_map_is_section_independent(
    name: &str,
    ses: &ShortExactSeq,
    seed: u64,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sections = ses.all_sections();
    let mut checked = 0usize;
    for n in 1..=2 {
        let q = ses.quotient();
        let cocycles = match enumerate_cocycles(q, n, 1 << 18) {
            Ok(all) => all,
            Err(_) => continue,
        };
        let chosen: Vec<&ModuleCochain> = if cocycles.len() <= 24 {
            cocycles.iter().collect()
        } else {
            (0..24)
                .map(|_| &cocycles[rng.gen_range(0..cocycles.len())])
                .collect()
        };
        for f in chosen {
            let base = connecting_map(ses, f).map_err(|e| e.to_string())?;
            if !is_cocycle(&base).holds() {
                return Err(format!("{name}: δ(f) is not a cocycle in degree {}", n + 1));
            }
            for s in &sections {
                let other = connecting_map(&ses.with_section(s.clone()).unwrap(), f)
                    .map_err(|e| e.to_string())?;
                let diff = other.minus(&base);
                if !triviality_finite(&diff)
                    .map_err(|e| e.to_string())?
                    .is_trivial()
                {
                    return Err(format!(
                        "{name}: section {s:?} changes the class of δ(f) in degree {}",
                        n + 1
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{name}: {} sections, {checked} comparisons",
        sections.len()
    ))
}

/// The coefficient module of `μ` for a family over `G` with the trivial action.
pub fn trivial_twist_module(fam: &RankFourFamily, g: &Arc<FinGroup>) -> Arc<GModule> {
    Arc::new(GModule::trivial(g.clone(), fam.cocycle.group().clone()).unwrap())
}

fn random_one_cochain(rng: &mut ChaCha8Rng, m: &Arc<GModule>) -> ModuleCochain {
    random_module_cochain(rng, m, 1)
}

/// `O₄` is a cocycle, and replacing `μ` by `μ + ∂ν` moves it by a coboundary.
pub fn o4_cocycle_and_shift(
    data: &BosonicActionData,
    fam: &RankFourFamily,
    mu: &TwistCocycle,
    seed: u64,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ac = &fam.cocycle;
    let table = |m: &TwistCocycle| -> std::result::Result<QZCochain, String> {
        let lazy = if m.module().is_trivial() {
            o4_twisted_identity(ac, m)
        } else {
            o4_general(data, ac, m)
        }
        .map_err(|e| e.to_string())?;
        Cochain::materialize(&lazy).map_err(|e| e.to_string())
    };
    let o4 = table(mu)?;
    if let Some(t) = is_cocycle(&o4).violation {
        return Err(format!("O₄ is not a cocycle at {t:?}"));
    }
    let nu = random_one_cochain(&mut rng, mu.module());
    let shifted = mu.shifted(&nu).map_err(|e| e.to_string())?;
    let diff = table(&shifted)?.minus(&o4);
    let v = triviality_qz(&diff).map_err(|e| e.to_string())?;
    if !v.is_trivial() {
        return Err("O₄(μ + ∂ν) − O₄(μ) is not a coboundary".into());
    }
    let w = v.witness.expect("trivial verdicts carry a witness");
    if coboundary(&w).map_err(|e| e.to_string())? != diff {
        return Err("the witness of O₄(μ + ∂ν) − O₄(μ) is wrong".into());
    }
    Ok(format!("{:?} k = {}", fam.variant, fam.k))
}

/// Both `O₄` formulas agree at every tuple when the action is trivial.
pub fn o4_formulas_agree(fam: &RankFourFamily, mu: &TwistCocycle) -> Outcome {
    let ac = &fam.cocycle;
    let g = mu.module().group().clone();
    let data = BosonicActionData::trivial(g, ac.pointed().map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let a = o4_twisted_identity(ac, mu).map_err(|e| e.to_string())?;
    let b = o4_general(&data, ac, mu).map_err(|e| e.to_string())?;
    let code = pointed_obstructions::cochain::TupleCode::new(a.group().order(), 4);
    for i in 0..code.count().unwrap() {
        let t = code.decode(i);
        if a.eval(&t) != b.eval(&t) {
            return Err(format!("the formulas differ at {t:?}"));
        }
    }
    Ok(format!("{} tuples", code.count().unwrap()))
}

/// A uniformly random normalized cocycle with values in `(1/N)ℤ/ℤ`.
pub fn random_qz_cocycle(
    rng: &mut ChaCha8Rng,
    g: &Arc<FinGroup>,
    n: usize,
    modulus: u64,
) -> QZCochain {
    let d = coboundary_matrix(g, &IntCoeff, n).unwrap();
    let s = Smith::new(&d);
    let nb = BigInt::from(modulus);
    let (_, cols) = s.dims();
    let y: Vec<BigInt> = (0..cols)
        .map(|i| {
            let step = match s.diagonal().get(i) {
                Some(di) => &nb / di.gcd(&nb),
                None => BigInt::from(1),
            };
            BigInt::from(rng.gen_range(0..modulus)) * step
        })
        .collect();
    let x = s.apply_v(y);
    let values = x
        .iter()
        .map(|v| QZ::new(v.mod_floor(&nb), nb.clone()))
        .collect();
    Cochain::from_values(g.clone(), QZCoeff::trivial(), n, values).unwrap()
}

/// Whether `f = ∂p` for some `p` with values in `(1/M)ℤ/ℤ`, solved over `ℤ/M`.
pub fn mod_m_witness(f: &QZCochain, modulus: u64) -> Option<Vec<BigInt>> {
    let g = f.group();
    let n = f.degree();
    let d = coboundary_matrix(g, &IntCoeff, n - 1).unwrap();
    let m = BigInt::from(modulus);
    let b: Vec<BigInt> = f
        .values()
        .iter()
        .map(|v| {
            let (num, den) = v.lift();
            assert!(
                (&m % &den).is_zero(),
                "the modulus must be a multiple of every denominator"
            );
            num * (&m / den)
        })
        .collect();
    if d.cols() == 0 {
        return b.iter().all(|x| x.mod_floor(&m).is_zero()).then(Vec::new);
    }
    pointed_obstructions::linalg::solve_mod(&d, &b, &m).unwrap()
}

/// Exhaustive search over all `(1/M)ℤ/ℤ`-valued cochains, when there are at most `limit`.
pub fn brute_force_witness(f: &QZCochain, modulus: u64, limit: u64) -> Option<bool> {
    let g = f.group().clone();
    let n = f.degree();
    let len = pointed_obstructions::cochain::TupleCode::new(g.order(), n - 1).count()?;
    let total = modulus.checked_pow(len as u32).filter(|&t| t <= limit)?;
    let mut values = vec![0u64; len];
    for code in 0..total {
        let mut c = code;
        for v in values.iter_mut() {
            *v = c % modulus;
            c /= modulus;
        }
        let p = Cochain::from_values(
            g.clone(),
            QZCoeff::trivial(),
            n - 1,
            values
                .iter()
                .map(|&v| QZ::new(v as i64, modulus as i64))
                .collect(),
        )
        .unwrap();
        if coboundary(&p).unwrap() == *f {
            return Some(true);
        }
    }
    Some(false)
}

/// `triviality_qz` agrees with a direct search for a witness over `ℤ/(N·|G|)`.
pub fn triviality_matches_search(seed: u64, g: &Arc<FinGroup>, n: usize, modulus: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = if rng.gen_bool(0.5) {
        random_qz_cocycle(&mut rng, g, n, modulus)
    } else {
        let p = Cochain::from_fn(g.clone(), QZCoeff::trivial(), n - 1, |_| {
            QZ::new(rng.gen_range(0..modulus as i64), modulus as i64)
        })
        .unwrap();
        coboundary(&p).unwrap()
    };
    if !is_cocycle(&f).holds() {
        return Err("the sampled cochain is not a cocycle".into());
    }
    let verdict = triviality_qz(&f).map_err(|e| e.to_string())?;
    let big = modulus * g.order() as u64;
    let searched = mod_m_witness(&f, big).is_some();
    if verdict.is_trivial() != searched {
        return Err(format!(
            "triviality_qz says {:?} but the ℤ/{big} search says {}",
            verdict.status,
            if searched { "trivial" } else { "nontrivial" }
        ));
    }
    if let Some(found) = brute_force_witness(&f, big, 1 << 14) {
        if found != searched {
            return Err("exhaustive search disagrees with the ℤ/M solve".into());
        }
    }
    if let Some(w) = &verdict.witness {
        if coboundary(w).map_err(|e| e.to_string())? != f {
            return Err("the witness does not bound".into());
        }
    }
    Ok(format!("{:?}", verdict.status))
}

/// Automorphisms of a rank-four group fixing the fermion.
pub fn fermion_fixing_actions(fam: &RankFourFamily, g: &Arc<FinGroup>) -> Vec<Arc<GModule>> {
    let a = fam.cocycle.group().clone();
    let f = fam.f;
    let (v, vf) = (fam.v, fam.v_plus_f());
    let moved: Vec<usize> = match fam.variant {
        RankFourVariant::KleinFour => (0..4)
            .map(|x| {
                if x == v {
                    vf
                } else if x == vf {
                    v
                } else {
                    x
                }
            })
            .collect(),
        RankFourVariant::Cyclic4 => (0..4).map(|x| a.inv(x)).collect(),
    };
    let autos = [(0..4).collect::<Vec<usize>>(), moved];
    debug_assert_eq!(autos[1][f], f);
    signs_of(g)
        .into_iter()
        .map(|s| {
            let action = g
                .elements()
                .map(|x| autos[usize::from(s[x])].clone())
                .collect();
            Arc::new(GModule::new(g.clone(), a.clone(), action).unwrap())
        })
        .collect()
}

/// The two criteria for the existence of an `α`-lifting agree on every pair of `ℤ/2`-valued
/// cocycles `(θ, α)`.
pub fn lifting_criteria_agree(g: &Arc<FinGroup>) -> Outcome {
    let z2 = Arc::new(GModule::trivial(g.clone(), arc(FinGroup::cyclic(2).unwrap())).unwrap());
    let cocycles = enumerate_cocycles(&z2, 2, 1 << 20).map_err(|e| e.to_string())?;
    let mut pairs = 0usize;
    let mut exist = 0usize;
    let mut modules = 0usize;
    for fam in [RankFourVariant::KleinFour, RankFourVariant::Cyclic4]
        .map(|v| rank_four_family(v, v.admissible_k()[0].clone()).unwrap())
    {
        for module in fermion_fixing_actions(&fam, g) {
            modules += 1;
            let fm = FermionModule::new(module, fam.f).map_err(|e| e.to_string())?;
            let r = fm.restriction_data();
            for theta in &cocycles {
                for alpha in &cocycles {
                    let o3 = o3_fermionic(theta, alpha, &r).map_err(|e| e.to_string())?;
                    let lift = alpha_lifting_exists(theta, alpha, &fm.restriction)
                        .map_err(|e| e.to_string())?;
                    if o3.vanishes() != lift.exists {
                        return Err(format!(
                            "{:?}: O₃ vanishes = {} but lifting exists = {} at θ = {:?}, α = {:?}",
                            fam.variant,
                            o3.vanishes(),
                            lift.exists,
                            theta,
                            alpha
                        ));
                    }
                    pairs += 1;
                    exist += usize::from(lift.exists);
                }
            }
        }
    }
    Ok(format!(
        "{modules} modules, {pairs} pairs, {exist} with a lifting"
    ))
}

/// `θ` of the `β`-shifted action is `θ + r(β)` for every cocycle `β` on every valid
/// rank-four action (the second one after completing its `γ`).
pub fn torsor_relation_on_rank_four() -> Outcome {
    let mut total = 0usize;
    for which in [BuiltinAction::Caso1, BuiltinAction::Caso2] {
        for k in which.variant().admissible_k() {
            let act = builtin_action(which, k.clone()).map_err(|e| e.to_string())?;
            let data = if act.data.verify().valid {
                act.data.clone()
            } else {
                o3_pointed(&act.data, act.data.gamma_table())
                    .map_err(|e| e.to_string())?
                    .repaired
                    .ok_or_else(|| format!("{which:?} k = {k} cannot be repaired"))?
            };
            gamma_tilde(&data, &act.fermion).map_err(|e| e.to_string())?;
            let (ok, count) = pointed_obstructions::scenario::torsor_relation(&data, &act.fermion)
                .map_err(|e| e.to_string())?;
            if !ok {
                return Err(format!("{which:?} k = {k}: θ does not shift by r(β)"));
            }
            total += count;
        }
    }
    Ok(format!("{total} shifts"))
}

pub fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().unwrap()
}
