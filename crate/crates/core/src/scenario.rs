//! Built-in reproduction scenarios.
//!
//! A scenario is a data bundle ([`ScenarioInputs`]) and a runner that turns it into a
//! [`ScenarioReport`]: named checks with pass flags, the computed results, and the SHA-256
//! of the canonical input. The fixed bundles ship as JSON files; the parametric ones are
//! generated from their parameters. Either kind can be dumped, edited and replayed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::braided::rank_four_family;
use crate::cochain::{
    coboundary, cyclic_generator_3, cyclic_generator_without_factor, enumerate_cocycles,
    is_cocycle, triviality_qz, Cochain, CochainFn, QZCochain, QZCoeff, TupleCode,
};
use crate::error::{Error, Result};
use crate::fermion::{
    check_fermion, fermionic_ratio_table, gamma_tilde, verify_fermionic_action, ConditionC, Fermion,
};
use crate::group::FinGroup;
use crate::io::{
    canonical_json, format_key, input_hash, parse_json, z2_cochain, AbelianSpec, ActionSpec,
    GroupSpec, HomSpec, O3File, O4Bundle, StrategySpec, Table, TwistSpec,
};
use crate::lyndon::{alt_alt, check_normalization, lyndon_normalize, SplitSpec};
use crate::obstruct::{
    anomaly_verdict, o3_pointed, o4_table, shift_action, theta_shift, AnomalyCertificate,
    AnomalyStatus, AnomalyStrategy, FermionModule, DENSE_CAP,
};
use crate::pipeline::{anomaly_strategy, build_o4, run_o3};
use crate::qz::QZ;

const DRINFELD: &str = include_str!("../scenarios/drinfeld.json");
const RANK4_ACTIONS: &str = include_str!("../scenarios/rank4_actions.json");
const D8: &str = include_str!("../scenarios/d8.json");
const CYCLIC_GENERATORS: &str = include_str!("../scenarios/cyclic_generators.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Drinfeld,
    OddM { m: u64, n: usize },
    Rank4Actions,
    D8,
    Z2n { n: u64 },
    CyclicGenerators,
}

impl Scenario {
    pub const NAMES: [&'static str; 6] = [
        "drinfeld",
        "odd_m",
        "rank4_actions",
        "d8",
        "z2n",
        "cyclic_generators",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Drinfeld => "drinfeld",
            Scenario::OddM { .. } => "odd_m",
            Scenario::Rank4Actions => "rank4_actions",
            Scenario::D8 => "d8",
            Scenario::Z2n { .. } => "z2n",
            Scenario::CyclicGenerators => "cyclic_generators",
        }
    }

    /// Parameters default to `m = 3, n = 2` for `odd_m` and `n = 2` for `z2n`.
    pub fn from_name(name: &str, m: Option<u64>, n: Option<u64>) -> Result<Self> {
        Ok(match name {
            "drinfeld" => Scenario::Drinfeld,
            "odd_m" => Scenario::OddM {
                m: m.unwrap_or(3),
                n: n.unwrap_or(2) as usize,
            },
            "rank4_actions" => Scenario::Rank4Actions,
            "d8" => Scenario::D8,
            "z2n" => Scenario::Z2n { n: n.unwrap_or(2) },
            "cyclic_generators" => Scenario::CyclicGenerators,
            _ => {
                return Err(Error::Input(format!(
                    "unknown scenario {name:?}; expected one of {}",
                    Scenario::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn all() -> Vec<Scenario> {
        vec![
            Scenario::Drinfeld,
            Scenario::OddM { m: 3, n: 2 },
            Scenario::Rank4Actions,
            Scenario::D8,
            Scenario::Z2n { n: 2 },
            Scenario::CyclicGenerators,
        ]
    }
}

/// `Σ coeff · Π x[arg][coord]`, with `arg` counted from 1 and `x[arg]` the residue tuple of
/// the argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: QZ,
    pub vars: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub degree: usize,
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn eval(&self, group: &FinGroup, args: &[usize]) -> QZ {
        let x: Vec<Vec<u64>> = args.iter().map(|&g| group.tuple(g)).collect();
        self.terms
            .iter()
            .map(|t| {
                t.coeff
                    .scale_i64(t.vars.iter().map(|&[a, c]| x[a - 1][c] as i64).product())
            })
            .sum()
    }

    fn check(&self, group: &FinGroup) -> Result<()> {
        let rank = group.factors().map_or(0, <[u64]>::len);
        for t in &self.terms {
            if t.vars
                .iter()
                .any(|&[a, c]| a == 0 || a > self.degree || c >= rank)
            {
                return Err(Error::Input(format!(
                    "monomial {:?} does not fit degree {} and rank {rank}",
                    t.vars, self.degree
                )));
            }
        }
        Ok(())
    }

    pub fn cochain(&self, group: &Arc<FinGroup>) -> Result<QZCochain> {
        self.check(group)?;
        Cochain::from_fn(group.clone(), QZCoeff::trivial(), self.degree, |t| {
            self.eval(group, t)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrinfeldInputs {
    pub o4: O4Bundle,
    /// Closed form of the seven-term `O₄`.
    pub simplified: Polynomial,
    /// The printed normal form `Õ₄`.
    pub normal_form: Polynomial,
    /// The hand-chosen 3-cochain `p`.
    pub hand_p: Polynomial,
    pub filtration_k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OddMInputs {
    pub m: u64,
    pub n: usize,
    pub o4: O4Bundle,
    pub closed_form: Polynomial,
    pub normal_form: Polynomial,
    pub samples: usize,
    pub seed: u64,
    pub alt_claim: QZ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: String,
    pub k: QZ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionCase {
    pub name: String,
    pub action: ActionSpec,
    /// Elements `a` at which `μ(u; f, a) − μ(u; a, f)` is compared with `row_claim`.
    pub row: Vec<usize>,
    pub row_claim: Vec<QZ>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rank4Inputs {
    pub families: Vec<FamilySpec>,
    pub cases: Vec<ActionCase>,
    pub reading: ConditionC,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftingCase {
    pub name: String,
    pub o3: O3File,
    pub claim_exists: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftingInputs {
    pub cases: Vec<LiftingCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorInputs {
    pub moduli: Vec<u64>,
    pub without_factor: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum ScenarioInputs {
    Drinfeld(DrinfeldInputs),
    OddM(OddMInputs),
    Rank4Actions(Rank4Inputs),
    D8(LiftingInputs),
    Z2n(LiftingInputs),
    CyclicGenerators(GeneratorInputs),
}

impl ScenarioInputs {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioInputs::Drinfeld(_) => "drinfeld",
            ScenarioInputs::OddM(_) => "odd_m",
            ScenarioInputs::Rank4Actions(_) => "rank4_actions",
            ScenarioInputs::D8(_) => "d8",
            ScenarioInputs::Z2n(_) => "z2n",
            ScenarioInputs::CyclicGenerators(_) => "cyclic_generators",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub input_sha256: String,
    pub checks: Vec<Check>,
    pub results: Value,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// The input bundle of a scenario.
pub fn scenario_inputs(s: &Scenario) -> Result<ScenarioInputs> {
    let parsed = |text: &str| parse_json::<ScenarioInputs>(text);
    match *s {
        Scenario::Drinfeld => parsed(DRINFELD),
        Scenario::Rank4Actions => parsed(RANK4_ACTIONS),
        Scenario::D8 => parsed(D8),
        Scenario::CyclicGenerators => parsed(CYCLIC_GENERATORS),
        Scenario::OddM { m, n } => odd_m_inputs(m, n).map(ScenarioInputs::OddM),
        Scenario::Z2n { n } => z2n_inputs(n).map(ScenarioInputs::Z2n),
    }
}

pub fn reproduce_paper(s: &Scenario) -> Result<ScenarioReport> {
    run_scenario(&scenario_inputs(s)?)
}

pub fn run_scenario(inputs: &ScenarioInputs) -> Result<ScenarioReport> {
    let (checks, results) = match inputs {
        ScenarioInputs::Drinfeld(i) => run_drinfeld(i)?,
        ScenarioInputs::OddM(i) => run_odd_m(i)?,
        ScenarioInputs::Rank4Actions(i) => run_rank4(i)?,
        ScenarioInputs::D8(i) | ScenarioInputs::Z2n(i) => run_lifting(i)?,
        ScenarioInputs::CyclicGenerators(i) => run_generators(i)?,
    };
    Ok(ScenarioReport {
        scenario: inputs.name().into(),
        input_sha256: input_hash(inputs)?,
        checks: checks.0,
        results,
    })
}

/// Canonical JSON of a scenario's inputs.
pub fn emit_inputs(s: &Scenario) -> Result<String> {
    canonical_json(&scenario_inputs(s)?)
}

fn all_tuples(order: usize, degree: usize) -> impl Iterator<Item = Vec<usize>> {
    let code = TupleCode::new(order, degree);
    (0..code.count().unwrap_or(0)).map(move |i| code.decode(i))
}

fn run_drinfeld(inp: &DrinfeldInputs) -> Result<(Checks, Value)> {
    let built = build_o4(&inp.o4)?;
    let g = built.o4.group().clone();
    let split = built
        .split
        .clone()
        .ok_or_else(|| Error::Input("the scenario needs a product split".into()))?;
    let mut checks = Checks::default();

    inp.simplified.check(&g)?;
    let mismatches: Vec<String> = all_tuples(g.order(), 4)
        .filter(|t| built.o4.eval(t) != inp.simplified.eval(&g, t))
        .map(|t| format_key(&t))
        .collect();
    checks.push(
        "seven_term_matches_simplified",
        mismatches.is_empty(),
        json!({"tuples": g.order().pow(4), "mismatches": mismatches}),
    );

    let table = o4_table(&built.o4, DENSE_CAP)?;
    let cocycle = is_cocycle(&table);
    checks.push(
        "o4_is_cocycle",
        cocycle.holds(),
        json!({"violation": cocycle.violation}),
    );

    let dense = anomaly_verdict(&built.o4, &AnomalyStrategy::Dense { cap: DENSE_CAP })?;
    checks.push(
        "dense_nontrivial",
        dense.status == AnomalyStatus::Nontrivial,
        to_value(&dense),
    );

    let filt = anomaly_verdict(
        &built.o4,
        &AnomalyStrategy::Filtration {
            split: split.clone(),
            k: inp.filtration_k,
        },
    )?;
    checks.push(
        "filtration_nonzero",
        filt.status == AnomalyStatus::Nontrivial,
        to_value(&filt),
    );

    let nf = lyndon_normalize(&table, &split)?;
    let reconstructs = *nf.normalized() == table.plus(&coboundary(nf.trail())?);
    let in_normal_form = check_normalization(nf.normalized(), &split);
    checks.push(
        "normal_form_differs_by_trail",
        reconstructs && in_normal_form.is_none(),
        json!({"reconstructs": reconstructs, "normalization_violation": in_normal_form,
               "trail_support": nf.trail().support().len()}),
    );

    let tilde = inp.normal_form.cochain(&g)?;
    let same_class = triviality_qz(&nf.normalized().minus(&tilde))?;
    checks.push(
        "normal_form_matches_printed_class",
        same_class.is_trivial(),
        json!({"status": same_class.status, "certificate": same_class.certificate}),
    );

    let p = inp.hand_p.cochain(&g)?;
    let dp = coboundary(&p)?;
    let displayed = dp.minus(&table).minus(&tilde).support();
    let opposite = table.plus(&dp).minus(&tilde).support();
    checks.push(
        "hand_cochain_identity",
        displayed.is_empty(),
        json!({
            "identity": "∂p − O₄ = Õ₄",
            "mismatches": displayed.len(),
            "first_mismatch": displayed.first().map(|(t, v)| json!({"tuple": t, "difference": v})),
            "with_opposite_sign": {"identity": "O₄ + ∂p = Õ₄", "mismatches": opposite.len()},
        }),
    );

    let components: Vec<Value> = nf
        .components()
        .iter()
        .map(|c| json!({"p": c.p, "q": c.q, "nonzero_entries": c.entries.len()}))
        .collect();
    Ok((
        checks,
        json!({"dense": dense, "filtration": filt, "normal_form_components": components,
               "o4_support": table.support().len()}),
    ))
}

fn odd_m_inputs(m: u64, n: usize) -> Result<OddMInputs> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::Input(format!("odd_m needs an odd m ≥ 3, got {m}")));
    }
    if n < 2 {
        return Err(Error::Input(format!("odd_m needs n ≥ 2, got {n}")));
    }
    let g = FinGroup::from_invariants(&vec![m; 2 * n])?;
    let unit = |i: usize| {
        let mut t = vec![0i64; 2 * n];
        t[i] = 1;
        g.index_of(&t)
    };
    let mut matrix = vec![vec![0i64; 2 * n]; 2 * n];
    for (i, row) in matrix.iter_mut().enumerate().take(n) {
        row[n + i] = 1;
    }
    let dot_dot = |x: [usize; 2], y: [usize; 2], coeff: QZ| Polynomial {
        degree: 4,
        terms: (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| Monomial {
                coeff: coeff.clone(),
                vars: vec![[x[0], i], [x[1], n + i], [y[0], j], [y[1], n + j]],
            })
            .collect(),
    };
    let mm = m as i64;
    Ok(OddMInputs {
        m,
        n,
        o4: O4Bundle {
            abelian: AbelianSpec::Bicharacter { bicharacter: m },
            group: Some(GroupSpec::invariants(&vec![m; 2 * n])),
            mu: TwistSpec::Bilinear {
                bilinear: vec![matrix],
            },
            action: None,
            split: Some(SplitSpec {
                a_generators: (0..n).map(unit).collect(),
                b_generators: (n..2 * n).map(unit).collect(),
            }),
            strategy: Some(StrategySpec::Alt {
                a: [unit(0), unit(1)],
                b: [unit(n), unit(n + 1)],
                samples: 64,
            }),
        },
        closed_form: dot_dot([1, 2], [3, 4], QZ::new(1, mm)),
        normal_form: dot_dot([1, 3], [2, 4], QZ::new(-1, mm)),
        samples: 100,
        seed: 0x0dd,
        alt_claim: QZ::new(2, mm),
    })
}

fn run_odd_m(inp: &OddMInputs) -> Result<(Checks, Value)> {
    let built = build_o4(&inp.o4)?;
    let g = built.o4.group().clone();
    let split = built
        .split
        .clone()
        .ok_or_else(|| Error::Input("the scenario needs a product split".into()))?;
    let mut checks = Checks::default();

    inp.closed_form.check(&g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(inp.seed);
    let mut mismatches = Vec::new();
    for _ in 0..inp.samples {
        let t: Vec<usize> = (0..4).map(|_| rng.gen_range(0..g.order())).collect();
        if built.o4.eval(&t) != inp.closed_form.eval(&g, &t) {
            mismatches.push(format_key(&t));
        }
    }
    checks.push(
        "pointwise_closed_form",
        mismatches.is_empty(),
        json!({"samples": inp.samples, "seed": inp.seed, "mismatches": mismatches}),
    );

    let refusal = match anomaly_verdict(&built.o4, &AnomalyStrategy::Dense { cap: DENSE_CAP }) {
        Err(e @ Error::TooLarge { .. }) => Ok(e.to_string()),
        Err(e) => Err(format!("unexpected error: {e}")),
        Ok(_) => Err("the dense strategy ran".to_string()),
    };
    checks.push(
        "dense_refused",
        refusal.is_ok(),
        json!({"message": refusal.unwrap_or_else(|e| e)}),
    );

    let spec = inp
        .o4
        .strategy
        .clone()
        .ok_or_else(|| Error::Input("the scenario needs an Alt strategy".into()))?;
    let strategy = anomaly_strategy(&spec, Some(&split), None)?;
    let report = anomaly_verdict(&built.o4, &strategy)?;
    let value = match &report.certificate {
        AnomalyCertificate::Alt { value, .. } => value.clone(),
        _ => return Err(Error::Input("the scenario strategy must be Alt".into())),
    };
    checks.push(
        "alt_certificate_nonzero",
        report.status == AnomalyStatus::Nontrivial,
        to_value(&report),
    );
    let printed = match &strategy {
        AnomalyStrategy::Alt { a, b, .. } => {
            let f = inp.normal_form.clone();
            let gg = g.clone();
            let lazy =
                crate::cochain::LazyCochain::new(g.clone(), QZCoeff::trivial(), 4, move |t| {
                    f.eval(&gg, t)
                })?;
            Some(alt_alt(&lazy, &split, *a, *b)?)
        }
        _ => None,
    };
    checks.push(
        "alt_value_matches_claim",
        value == inp.alt_claim,
        json!({"value": value, "claim": inp.alt_claim, "printed_normal_form_value": printed}),
    );
    Ok((checks, json!({"alt": report, "group_order": g.order()})))
}

fn run_rank4(inp: &Rank4Inputs) -> Result<(Checks, Value)> {
    let mut checks = Checks::default();
    let mut fam_rows = Vec::new();
    let (mut all_valid, mut all_q, mut all_fermion) = (true, true, true);
    for spec in &inp.families {
        let variant = spec.family.parse().map_err(Error::Input)?;
        let fam = rank_four_family(variant, spec.k.clone())?;
        let ac = &fam.cocycle;
        let report = ac.check();
        let mueger = ac.mueger_center()?;
        let q = ac.quadratic_form()?;
        let [zero, v, f, vf] = fam.named_elements();
        let q_ok =
            q.q(zero).is_zero() && q.q(f) == QZ::half() && q.q(v) == spec.k && q.q(vf) == spec.k;
        let host = ac.pointed()?;
        let fermion = Fermion::from_braiding(ac, f);
        let chosen = check_fermion(&host, &fermion, inp.reading)?;
        let displayed = check_fermion(&host, &fermion, ConditionC::Displayed)?;
        all_valid &= report.valid && mueger == vec![0];
        all_q &= q_ok;
        all_fermion &= chosen.holds();
        fam_rows.push(json!({
            "family": spec.family, "k": spec.k, "valid": report.valid, "mueger_center": mueger,
            "q": {"0": q.q(zero), "v": q.q(v), "f": q.q(f), "v+f": q.q(vf)},
            "fermion": {"reading": inp.reading, "holds": chosen.holds(), "displayed_reading_holds": displayed.holds()},
        }));
    }
    checks.push(
        "families_valid_and_non_degenerate",
        all_valid,
        Value::Array(fam_rows.clone()),
    );
    checks.push("q_profile", all_q, Value::Null);
    checks.push(
        "fermion_conditions",
        all_fermion,
        json!({"reading": inp.reading}),
    );

    let mut names: Vec<&str> = Vec::new();
    for c in &inp.cases {
        if !names.contains(&c.name.as_str()) {
            names.push(&c.name);
        }
    }
    let mut case_rows = Vec::new();
    let mut torsor_ok = true;
    let mut torsor_rows = Vec::new();
    for name in names {
        let (mut bosonic, mut row, mut fermionic, mut repaired_ok) = (true, true, true, true);
        let mut details = Vec::new();
        let (mut bosonic_rows, mut row_rows, mut fermionic_rows) =
            (Vec::new(), Vec::new(), Vec::new());
        for case in inp.cases.iter().filter(|c| c.name == name) {
            let loaded = case.action.build()?;
            let fermion = loaded
                .fermion
                .clone()
                .ok_or_else(|| Error::Input(format!("case {name} has no fermion")))?;
            let data = &loaded.data;
            let report = data.verify();
            let rows = fermionic_ratio_table(data, &fermion);
            let got: Vec<(QZ, QZ)> = case
                .row
                .iter()
                .map(|&a| {
                    rows.iter()
                        .find(|r| r.g == 1 && r.a == a)
                        .map(|r| (r.mu_side.clone(), r.eta_side.clone()))
                        .ok_or_else(|| Error::Input(format!("no ratio row at a = {a}")))
                })
                .collect::<Result<_>>()?;
            let row_ok = got.len() == case.row_claim.len()
                && got
                    .iter()
                    .zip(&case.row_claim)
                    .all(|((mu, eta), claim)| mu == claim && eta == claim);
            let zero_alpha = z2_cochain(data.group(), &Table::new())?;
            let fermionic_now = if report.valid {
                Some(verify_fermionic_action(data, &fermion, &zero_alpha)?.is_fermionic())
            } else {
                None
            };
            let o3 = o3_pointed(data, data.gamma_table())?;
            let fixed = o3.repaired.clone();
            let after_repair = match &fixed {
                Some(d) => verify_fermionic_action(d, &fermion, &zero_alpha)?.is_fermionic(),
                None => false,
            };
            if !report.valid {
                let failing: serde_json::Map<String, Value> = report
                    .axioms
                    .iter()
                    .filter(|t| t.violations > 0)
                    .map(|t| (format!("{:?}", t.axiom).to_lowercase(), json!(t.violations)))
                    .collect();
                bosonic_rows.push(json!({"action": case.action, "violations": failing}));
            }
            if !row_ok {
                row_rows.push(json!({"action": case.action, "got": got.iter().map(|(m, _)| m.clone()).collect::<Vec<_>>()}));
            }
            if fermionic_now != Some(true) {
                fermionic_rows.push(json!({
                    "action": case.action,
                    "reason": if report.valid { "γ̃ is not cohomologous to α" } else { "not a bosonic action" },
                }));
            }
            bosonic &= report.valid;
            row &= row_ok;
            fermionic &= fermionic_now == Some(true);
            repaired_ok &= after_repair;
            details.push(json!({
                "action": case.action,
                "bosonic": report,
                "ratio_row": got.iter().map(|(m, _)| m.clone()).collect::<Vec<_>>(),
                "eta_row": got.iter().map(|(_, e)| e.clone()).collect::<Vec<_>>(),
                "row_claim": case.row_claim,
                "fermionic_with_trivial_alpha": fermionic_now,
                "completed_pairs": o3.completed_pairs,
                "coherence_class": o3.verdict.status,
                "fermionic_after_repair": after_repair,
            }));

            let usable = if report.valid {
                Some(data.clone())
            } else {
                fixed
            };
            if let Some(d) = usable {
                let (ok, count) = torsor_relation(&d, &fermion)?;
                torsor_ok &= ok;
                torsor_rows.push(
                    json!({"case": name, "action": case.action, "betas": count, "holds": ok}),
                );
            } else {
                torsor_ok = false;
            }
        }
        checks.push(
            format!("{name}_bosonic"),
            bosonic,
            Value::Array(bosonic_rows),
        );
        checks.push(format!("{name}_ratio_row"), row, Value::Array(row_rows));
        checks.push(
            format!("{name}_fermionic"),
            fermionic,
            Value::Array(fermionic_rows),
        );
        checks.push(
            format!("{name}_fermionic_after_repair"),
            repaired_ok,
            Value::Null,
        );
        case_rows.push(json!({"name": name, "cases": details}));
    }
    checks.push("torsor_shift", torsor_ok, Value::Array(torsor_rows));
    Ok((checks, json!({"families": fam_rows, "actions": case_rows})))
}

/// Whether `θ` of every `β`-shifted action equals `θ + r(β)`; returns the number of `β` tried.
pub fn torsor_relation(
    data: &crate::fermion::BosonicActionData,
    fermion: &Fermion,
) -> Result<(bool, usize)> {
    let module = FermionModule::new(data.star_module()?, fermion.f)?;
    let theta = gamma_tilde(data, fermion)?;
    let betas = enumerate_cocycles(module.dual.module(), 2, 1 << 16)?;
    for beta in &betas {
        let shifted = shift_action(data, &module.dual, beta)?;
        let lhs = gamma_tilde(&shifted, fermion)?;
        let rhs = theta.plus(&theta_shift(&module.restriction, beta)?);
        if lhs != rhs {
            return Ok((false, betas.len()));
        }
    }
    Ok((true, betas.len()))
}

fn z2n_inputs(n: u64) -> Result<LiftingInputs> {
    if n < 2 {
        return Err(Error::Input(format!("z2n needs n ≥ 2, got {n}")));
    }
    let carry: Table<u8> = (1..n)
        .flat_map(|i| (1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i + j >= n)
        .map(|(i, j)| (format!("{i}|{j}"), 1))
        .collect();
    let case = |name: &str, images: Vec<usize>, claim: bool| LiftingCase {
        name: name.into(),
        o3: O3File {
            action: ActionSpec::Builtin {
                builtin: crate::fermion::BuiltinAction::Caso1,
                k: QZ::zero(),
            },
            pullback: Some(HomSpec {
                group: GroupSpec::invariants(&[n]),
                images,
            }),
            fermion: None,
            alpha: carry.clone(),
            repair: false,
        },
        claim_exists: claim,
    };
    let mut cases = Vec::new();
    if n % 2 == 0 {
        cases.push(case(
            "nontrivial_rho",
            (0..n as usize).map(|x| x % 2).collect(),
            false,
        ));
    }
    cases.push(case("trivial_rho", vec![0; n as usize], true));
    Ok(LiftingInputs { cases })
}

fn run_lifting(inp: &LiftingInputs) -> Result<(Checks, Value)> {
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for case in &inp.cases {
        let (report, _) = run_o3(&case.o3)?;
        let c = &report.classification;
        checks.push(
            case.name.clone(),
            c.lifting_exists == case.claim_exists && c.criteria_agree,
            json!({"claim_exists": case.claim_exists, "lifting_exists": c.lifting_exists,
                   "obstruction": c.obstruction_status, "branch": c.branch, "criteria_agree": c.criteria_agree}),
        );
        rows.push(json!({"name": case.name, "report": report}));
    }
    Ok((checks, Value::Array(rows)))
}

fn run_generators(inp: &GeneratorInputs) -> Result<(Checks, Value)> {
    let mut checks = Checks::default();
    let mut closed_ok = true;
    let mut cocycle_ok = true;
    let mut order_ok = true;
    let mut rows = Vec::new();
    for &m in &inp.moduli {
        let gen = cyclic_generator_3(m)?;
        let g = gen.group().clone();
        let closed = Cochain::from_fn(g, QZCoeff::trivial(), 3, |t| {
            QZ::new(
                (t[0] * usize::from(t[1] + t[2] >= m as usize)) as i64,
                m as i64,
            )
        })?;
        closed_ok &= closed == gen;
        cocycle_ok &= is_cocycle(&gen).holds();
        let mut multiples = Vec::new();
        for k in 1..=m {
            let f = gen.scaled(k as i64);
            let v = triviality_qz(&f)?;
            let witness_ok = v
                .witness
                .as_ref()
                .map(|w| coboundary(w).map(|d| d == f))
                .transpose()?;
            let expected_trivial = k == m;
            order_ok &= v.is_trivial() == expected_trivial
                && (!expected_trivial || witness_ok == Some(true));
            multiples.push(json!({"k": k, "status": v.status, "witness_checks": witness_ok}));
        }
        rows.push(json!({"m": m, "multiples": multiples}));
    }
    checks.push("closed_form_matches_cup_product", closed_ok, Value::Null);
    checks.push("generators_are_cocycles", cocycle_ok, Value::Null);
    checks.push("generator_order_is_m", order_ok, Value::Array(rows.clone()));
    let mut literal_rows = Vec::new();
    let mut literal_ok = true;
    for &m in &inp.without_factor {
        let f = cyclic_generator_without_factor(m)?;
        let c = is_cocycle(&f);
        literal_ok &= !c.holds();
        literal_rows.push(json!({"m": m, "is_cocycle": c.holds(), "violation": c.violation}));
    }
    checks.push(
        "without_factor_is_not_a_cocycle",
        literal_ok,
        Value::Array(literal_rows),
    );
    Ok((checks, json!({"generators": rows})))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_inputs_parse_and_are_canonical() {
        for s in Scenario::all() {
            let text = emit_inputs(&s).unwrap();
            let back: ScenarioInputs = parse_json(&text).unwrap();
            assert_eq!(canonical_json(&back).unwrap(), text, "{}", s.name());
        }
    }

    #[test]
    fn parameters_are_validated() {
        assert!(scenario_inputs(&Scenario::OddM { m: 4, n: 2 }).is_err());
        assert!(scenario_inputs(&Scenario::OddM { m: 3, n: 1 }).is_err());
        assert!(scenario_inputs(&Scenario::Z2n { n: 1 }).is_err());
        assert!(Scenario::from_name("nope", None, None).is_err());
    }

    #[test]
    fn polynomial_evaluation() {
        let g = FinGroup::from_invariants(&[2, 2]).unwrap();
        let p = Polynomial {
            degree: 2,
            terms: vec![Monomial {
                coeff: QZ::new(1, 4),
                vars: vec![[1, 0], [2, 1]],
            }],
        };
        let x = g.index_of(&[1, 0]);
        let y = g.index_of(&[0, 1]);
        assert_eq!(p.eval(&g, &[x, y]), QZ::new(1, 4));
        assert_eq!(p.eval(&g, &[y, x]), QZ::zero());
    }
}
