//! File-driven runs shared by the command line and the built-in scenarios. Each function
//! takes parsed descriptors and returns a serializable report.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::braided::AbelianCocycle;
use crate::cochain::{
    cohomology_invariants, is_cocycle, triviality_finite, triviality_qz, Certificate, LazyCochain,
    ModuleCochain, QZCoeff, Status,
};
use crate::error::{Error, Result};
use crate::fermion::{
    find_fermions, gamma_tilde, verify_fermionic_action, BosonicActionData, BosonicReport, Fermion,
    FoundFermion, RatioRow,
};
use crate::group::GModule;
use crate::io::{
    z2_cochain, z2_table, CochainFile, GroupSpec, LoadedCochain, LyndonFile, ModuleSpec, O3File,
    O4Bundle, StrategySpec, Table, VerifyActionFile,
};
use crate::lyndon::{component_class, lyndon_normalize, ComponentClass, ProductSplit};
use crate::obstruct::{
    anomaly_verdict, classify_fermionic_actions, o3_pointed, o4_general, o4_twisted_identity,
    AnomalyReport, AnomalyStrategy, FermionModule, FermionicClassification, O3Branch, O3Pointed,
    DENSE_CAP,
};
use crate::qz::bigint_to_json;

fn big_list(v: &[BigInt]) -> Vec<Value> {
    v.iter().map(bigint_to_json).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyFile {
    pub group: GroupSpec,
    pub module: ModuleSpec,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub degree: usize,
    /// Invariant factors other than 1.
    pub invariants: Vec<Value>,
    pub order: Value,
}

pub fn run_cohomology(file: &CohomologyFile) -> Result<CohomologyReport> {
    let g = file.group.build()?;
    let m = file.module.build(&g)?;
    let inv = cohomology_invariants(&m, file.degree)?;
    let order = inv.iter().fold(BigInt::from(1), |acc, d| acc * d);
    Ok(CohomologyReport {
        degree: file.degree,
        invariants: big_list(&inv),
        order: bigint_to_json(&order),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialityReport {
    pub status: Status,
    pub certificate: Certificate,
    /// A cochain `p` with `∂p` equal to the input, when trivial.
    pub witness: Option<CochainFile>,
}

pub fn run_triviality(c: &LoadedCochain) -> Result<TrivialityReport> {
    match c {
        LoadedCochain::Qz(f) => {
            if let Some(t) = is_cocycle(f).violation {
                return Err(Error::NotCocycle { tuple: t });
            }
            let v = triviality_qz(f)?;
            Ok(TrivialityReport {
                status: v.status,
                witness: v.witness.as_ref().map(CochainFile::from_qz),
                certificate: v.certificate,
            })
        }
        LoadedCochain::Finite(f) => {
            if let Some(t) = is_cocycle(f).violation {
                return Err(Error::NotCocycle { tuple: t });
            }
            let v = triviality_finite(f)?;
            Ok(TrivialityReport {
                status: v.status,
                witness: v.witness.as_ref().map(CochainFile::from_module),
                certificate: v.certificate,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub p: usize,
    pub q: usize,
    pub nonzero_entries: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyndonReport {
    pub normalized: CochainFile,
    /// `normalized = input + ∂trail`.
    pub trail: CochainFile,
    pub components: Vec<ComponentSummary>,
    pub class: Option<ComponentClass>,
}

pub fn run_lyndon(file: &LyndonFile) -> Result<LyndonReport> {
    let LoadedCochain::Qz(f) = file.cochain.load()? else {
        return Err(Error::Unsupported(
            "Lyndon normalization is run on ℚ/ℤ-valued cochains".into(),
        ));
    };
    if let Some(t) = is_cocycle(&f).violation {
        return Err(Error::NotCocycle { tuple: t });
    }
    let split = ProductSplit::from_spec(f.group().clone(), &file.split)?;
    let nf = lyndon_normalize(&f, &split)?;
    let components: Vec<ComponentSummary> = nf
        .components()
        .iter()
        .map(|c| ComponentSummary {
            p: c.p,
            q: c.q,
            nonzero_entries: c.entries.len(),
        })
        .collect();
    let k = file.k.or_else(|| {
        components
            .iter()
            .find(|c| c.nonzero_entries > 0)
            .map(|c| c.p)
    });
    let class = match k {
        Some(k) => Some(component_class(nf.normalized(), &split, k)?),
        None => None,
    };
    Ok(LyndonReport {
        normalized: CochainFile::from_qz(nf.normalized()),
        trail: CochainFile::from_qz(nf.trail()),
        components,
        class,
    })
}

pub fn run_fermions(file: &crate::io::FermionsFile) -> Result<Vec<FoundFermion>> {
    let (host, braiding) = file.build()?;
    find_fermions(&host, braiding.as_ref(), file.reading)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermionicPart {
    pub fermion: Fermion,
    pub condition_b_holds: bool,
    pub ratio_rows: Vec<RatioRow>,
    pub gamma_tilde: Table<u8>,
    pub class_matches_alpha: bool,
    pub witness: Option<CochainFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyActionReport {
    pub bosonic: BosonicReport,
    pub fermionic: Option<FermionicPart>,
    /// Why the fermionic part was not evaluated.
    pub skipped: Option<String>,
    pub passed: bool,
}

pub fn run_verify_action(file: &VerifyActionFile) -> Result<VerifyActionReport> {
    let loaded = file.action.build()?;
    let fermion = match &file.fermion {
        Some(f) => Some(f.build(&loaded.target)?),
        None => loaded.fermion.clone(),
    };
    let bosonic = loaded.data.verify();
    let (fermionic, skipped) = match (&fermion, bosonic.valid) {
        (None, _) => (None, Some("no fermion given".to_string())),
        (Some(_), false) => (None, Some("the bosonic axioms fail".to_string())),
        (Some(f), true) => {
            let alpha = z2_cochain(loaded.data.group(), &file.alpha)?;
            let v = verify_fermionic_action(&loaded.data, f, &alpha)?;
            (
                Some(FermionicPart {
                    fermion: f.clone(),
                    condition_b_holds: v.condition_b_holds,
                    class_matches_alpha: v.class_matches_alpha,
                    gamma_tilde: z2_table(&v.gamma_tilde),
                    witness: v.witness.as_ref().map(CochainFile::from_module),
                    ratio_rows: v.condition_b,
                }),
                None,
            )
        }
    };
    let passed = bosonic.valid
        && fermionic
            .as_ref()
            .is_some_and(|f| f.condition_b_holds && f.class_matches_alpha);
    Ok(VerifyActionReport {
        bosonic,
        fermionic,
        skipped,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointedSummary {
    pub completed_pairs: Vec<(usize, usize)>,
    pub obstruction: CochainFile,
    pub status: Status,
    pub certificate: Certificate,
    pub repaired: bool,
}

impl PointedSummary {
    pub fn of(o3: &O3Pointed) -> Self {
        PointedSummary {
            completed_pairs: o3.completed_pairs.clone(),
            obstruction: CochainFile::from_module(&o3.obstruction),
            status: o3.verdict.status,
            certificate: o3.verdict.certificate.clone(),
            repaired: o3.repaired.is_some(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub branch: O3Branch,
    pub obstruction: CochainFile,
    pub obstruction_status: Status,
    pub certificate: Certificate,
    pub lifting_exists: bool,
    pub lifting_tau: Option<CochainFile>,
    pub h2_dual: Vec<Value>,
    pub image_order: Value,
    pub torsor_order: Option<Value>,
    /// Whether the vanishing of the obstruction and the image criterion agree.
    pub criteria_agree: bool,
}

impl ClassificationSummary {
    pub fn of(c: &FermionicClassification) -> Self {
        ClassificationSummary {
            branch: c.obstruction.branch,
            obstruction: CochainFile::from_module(&c.obstruction.obstruction),
            obstruction_status: c.obstruction.verdict.status,
            certificate: c.obstruction.verdict.certificate.clone(),
            lifting_exists: c.lifting.exists,
            lifting_tau: c
                .lifting
                .preimage
                .as_ref()
                .map(|p| CochainFile::from_module(&p.tau)),
            h2_dual: big_list(&c.h2_dual),
            image_order: bigint_to_json(&c.image_order),
            torsor_order: c.torsor_order.as_ref().map(bigint_to_json),
            criteria_agree: c.exists() == c.lifting.exists,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct O3Report {
    pub pointed: PointedSummary,
    pub theta: Table<u8>,
    pub alpha: Table<u8>,
    pub fermion: usize,
    pub classification: ClassificationSummary,
}

/// The action after the optional repair and pullback, with the pieces the fermionic `O₃` needs.
pub struct O3Inputs {
    pub pointed: O3Pointed,
    pub data: BosonicActionData,
    pub fermion: Fermion,
    pub theta: ModuleCochain,
    pub alpha: ModuleCochain,
    pub module: FermionModule,
}

pub fn prepare_o3(file: &O3File) -> Result<O3Inputs> {
    let loaded = file.action.build()?;
    let fermion = match &file.fermion {
        Some(f) => f.build(&loaded.target)?,
        None => loaded
            .fermion
            .clone()
            .ok_or_else(|| Error::Input("no fermion given for the action".into()))?,
    };
    let pointed = o3_pointed(&loaded.data, loaded.data.gamma_table())?;
    let base = if file.repair {
        pointed.repaired.clone().ok_or_else(|| {
            Error::Precondition("the coherence class is nonzero, so γ cannot be repaired".into())
        })?
    } else {
        loaded.data.clone()
    };
    let data = match &file.pullback {
        Some(h) => base.pullback(&h.build(base.group())?)?,
        None => base,
    };
    let theta = gamma_tilde(&data, &fermion)?;
    let alpha = z2_cochain(data.group(), &file.alpha)?;
    let module = FermionModule::new(data.star_module()?, fermion.f)?;
    Ok(O3Inputs {
        pointed,
        data,
        fermion,
        theta,
        alpha,
        module,
    })
}

pub fn run_o3(file: &O3File) -> Result<(O3Report, FermionicClassification)> {
    let inp = prepare_o3(file)?;
    let c = classify_fermionic_actions(&inp.module, &inp.theta, &inp.alpha)?;
    Ok((
        O3Report {
            pointed: PointedSummary::of(&inp.pointed),
            theta: z2_table(&inp.theta),
            alpha: z2_table(&inp.alpha),
            fermion: inp.fermion.f,
            classification: ClassificationSummary::of(&c),
        },
        c,
    ))
}

/// A built `O₄` together with what the strategies need.
pub struct BuiltO4 {
    pub o4: LazyCochain<QZCoeff>,
    pub target: AbelianCocycle,
    pub split: Option<ProductSplit>,
    pub formula: &'static str,
}

pub fn build_o4(bundle: &O4Bundle) -> Result<BuiltO4> {
    let ac = bundle.abelian.build()?;
    let (o4, group, formula) = match &bundle.action {
        Some(action) => {
            let loaded = action.build()?;
            if let Some(g) = &bundle.group {
                if g.build()?.as_ref() != loaded.data.group().as_ref() {
                    return Err(Error::GroupMismatch(
                        "the bundle group differs from the action's group".into(),
                    ));
                }
            }
            let mu = bundle.mu.build(loaded.data.star_module()?)?;
            (
                o4_general(&loaded.data, &ac, &mu)?,
                loaded.data.group().clone(),
                "general",
            )
        }
        None => {
            let g = bundle
                .group
                .as_ref()
                .ok_or_else(|| Error::Input("an O₄ bundle without an action needs a group".into()))?
                .build()?;
            let m = Arc::new(GModule::trivial(g.clone(), ac.group().clone())?);
            let mu = bundle.mu.build(m)?;
            (o4_twisted_identity(&ac, &mu)?, g, "twisted_identity")
        }
    };
    let split = bundle
        .split
        .as_ref()
        .map(|s| ProductSplit::from_spec(group, s))
        .transpose()?;
    Ok(BuiltO4 {
        o4,
        target: ac,
        split,
        formula,
    })
}

/// Turns a strategy descriptor into a strategy; `Alt` arguments are elements of the factors
/// inside the acting group.
pub fn anomaly_strategy(
    spec: &StrategySpec,
    split: Option<&ProductSplit>,
    cap: Option<u128>,
) -> Result<AnomalyStrategy> {
    let need_split = || {
        split
            .cloned()
            .ok_or_else(|| Error::Input("this strategy needs a product split".into()))
    };
    match spec {
        StrategySpec::Dense { cap: c } => Ok(AnomalyStrategy::Dense {
            cap: cap.or(*c).unwrap_or(DENSE_CAP),
        }),
        StrategySpec::Filtration { k } => Ok(AnomalyStrategy::Filtration {
            split: need_split()?,
            k: *k,
        }),
        StrategySpec::Alt { a, b, samples } => {
            let split = need_split()?;
            let in_a = |g: usize| match split.parts(g) {
                (i, 0) => Ok(i),
                _ => Err(Error::Input(format!("element {g} does not lie in A"))),
            };
            let in_b = |g: usize| match split.parts(g) {
                (0, j) => Ok(j),
                _ => Err(Error::Input(format!("element {g} does not lie in B"))),
            };
            let order = split.group().order();
            if a.iter().chain(b).any(|&g| g >= order) {
                return Err(Error::Input(
                    "Alt arguments must be elements of the group".into(),
                ));
            }
            Ok(AnomalyStrategy::Alt {
                a: [in_a(a[0])?, in_a(a[1])?],
                b: [in_b(b[0])?, in_b(b[1])?],
                samples: *samples,
                split,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct O4Report {
    pub formula: String,
    pub group_order: usize,
    pub report: AnomalyReport,
}

pub fn run_o4(
    bundle: &O4Bundle,
    strategy: Option<&StrategySpec>,
    cap: Option<u128>,
) -> Result<O4Report> {
    let built = build_o4(bundle)?;
    let spec = strategy
        .or(bundle.strategy.as_ref())
        .cloned()
        .unwrap_or(StrategySpec::Dense { cap: None });
    let strategy = anomaly_strategy(&spec, built.split.as_ref(), cap)?;
    if let AnomalyStrategy::Dense { cap } = &strategy {
        let table = crate::obstruct::o4_table(&built.o4, *cap)?;
        if let Some(t) = is_cocycle(&table).violation {
            return Err(Error::NotCocycle { tuple: t });
        }
    }
    Ok(O4Report {
        formula: built.formula.into(),
        group_order: crate::cochain::CochainFn::group(&built.o4).order(),
        report: anomaly_verdict(&built.o4, &strategy)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_json, FermionsFile};

    #[test]
    fn cohomology_of_klein_four() {
        let f: CohomologyFile =
            parse_json(r#"{"group":{"invariants":[2,2]},"module":{"invariants":[2]},"degree":2}"#)
                .unwrap();
        let r = run_cohomology(&f).unwrap();
        assert_eq!(r.order, Value::from(8));
    }

    #[test]
    fn one_fermion_on_z2() {
        let f: FermionsFile = parse_json(r#"{"pointed":{"group":{"invariants":[2]}}}"#).unwrap();
        let found = run_fermions(&f).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].fermion.f, 1);
    }

    #[test]
    fn caso1_passes_verification() {
        let f: VerifyActionFile =
            parse_json(r#"{"action":{"builtin":"caso1","k":{"num":0,"den":1}}}"#).unwrap();
        let r = run_verify_action(&f).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn caso2_fails_and_is_repairable() {
        let f: VerifyActionFile =
            parse_json(r#"{"action":{"builtin":"caso2","k":{"num":1,"den":8}}}"#).unwrap();
        let r = run_verify_action(&f).unwrap();
        assert!(!r.passed);
        assert!(r.skipped.is_some());
        let o3: O3File =
            parse_json(r#"{"action":{"builtin":"caso2","k":{"num":1,"den":8}},"repair":true}"#)
                .unwrap();
        let (rep, c) = run_o3(&o3).unwrap();
        assert!(rep.pointed.repaired);
        assert!(c.exists());
        assert!(rep.classification.criteria_agree);
    }

    #[test]
    fn drinfeld_bundle_dense() {
        let b: O4Bundle = parse_json(
            r#"{"abelian":{"group":{"invariants":[2]},"omega":{"1|1|1":{"num":1,"den":2}},"c":{"1|1":{"num":1,"den":4}}},
                "group":{"invariants":[2,2]},"mu":{"bilinear":[[[0,1],[0,0]]]}}"#,
        )
        .unwrap();
        let r = run_o4(&b, None, None).unwrap();
        assert_eq!(r.report.status, crate::obstruct::AnomalyStatus::Nontrivial);
    }
}
