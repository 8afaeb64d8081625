mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use pointed_obstructions::braided::RankFourVariant;
use pointed_obstructions::fermion::{builtin_action, BosonicActionData, BuiltinAction};
use pointed_obstructions::group::FinGroup;
use pointed_obstructions::obstruct::TwistCocycle;
use pointed_obstructions::scenario::{reproduce_paper, Scenario, ScenarioReport};
use pointed_obstructions::QZ;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Verdict {
    passed: bool,
    summary: String,
    notes: Vec<String>,
}

impl Verdict {
    fn from_checks(report: &ScenarioReport, names: &[&str]) -> Verdict {
        let mut notes = Vec::new();
        let mut passed = true;
        for name in names {
            match report.check(name) {
                Some(c) if c.passed => {}
                Some(c) => {
                    passed = false;
                    notes.push(format!(
                        "{}/{} failed: {}",
                        report.scenario,
                        name,
                        brief(&c.detail)
                    ));
                }
                None => {
                    passed = false;
                    notes.push(format!("{}/{} missing", report.scenario, name));
                }
            }
        }
        let ok = names.len() - notes.len();
        Verdict {
            passed,
            summary: format!("{ok}/{} {} checks", names.len(), report.scenario),
            notes,
        }
    }

    fn and(mut self, other: Verdict) -> Verdict {
        self.passed &= other.passed;
        self.summary = format!("{}; {}", self.summary, other.summary);
        self.notes.extend(other.notes);
        self
    }
}

fn brief(v: &Value) -> String {
    let s = v.to_string();
    if s.chars().count() > 400 {
        format!("{}…", s.chars().take(400).collect::<String>())
    } else {
        s
    }
}

fn from_outcomes(label: &str, outcomes: Vec<Outcome>) -> Verdict {
    let total = outcomes.len();
    let notes: Vec<String> = outcomes.into_iter().filter_map(|o| o.err()).collect();
    Verdict {
        passed: notes.is_empty(),
        summary: format!("{label}: {}/{total}", total - notes.len()),
        notes,
    }
}

fn scenario(s: Scenario) -> ScenarioReport {
    reproduce_paper(&s).unwrap_or_else(|e| panic!("{} failed to run: {e}", s.name()))
}

fn criterion_1() -> Verdict {
    let mut notes = Vec::new();
    let fams = families();
    for fam in &fams {
        let report = fam.cocycle.check();
        let mueger = fam.cocycle.mueger_center().unwrap();
        if !report.valid || mueger != vec![0] {
            notes.push(format!(
                "{:?} k = {}: valid = {}, Müger centre {:?}",
                fam.variant, fam.k, report.valid, mueger
            ));
        }
    }
    Verdict {
        passed: notes.is_empty() && fams.len() == 8,
        summary: format!("{} families checked", fams.len()),
        notes,
    }
}

fn criterion_2() -> Verdict {
    let mut notes = Vec::new();
    for fam in families() {
        let q = fam.cocycle.quadratic_form().unwrap();
        let [zero, v, f, vf] = fam.named_elements();
        let got = [q.q(zero), q.q(v), q.q(f), q.q(vf)];
        let want = [QZ::zero(), fam.k.clone(), QZ::half(), fam.k.clone()];
        if got != want {
            notes.push(format!(
                "{:?} k = {}: q = {:?}, expected {:?}",
                fam.variant, fam.k, got, want
            ));
        }
    }
    Verdict {
        passed: notes.is_empty(),
        summary: "q(0), q(v), q(f), q(v+f) on 8 families".into(),
        notes,
    }
}

fn criterion_3() -> Verdict {
    let r = scenario(Scenario::Rank4Actions);
    Verdict::from_checks(
        &r,
        &[
            "caso1_bosonic",
            "caso1_ratio_row",
            "caso1_fermionic",
            "caso2_bosonic",
            "caso2_ratio_row",
            "caso2_fermionic",
        ],
    )
}

fn criterion_4() -> Verdict {
    let r = scenario(Scenario::Drinfeld);
    Verdict::from_checks(
        &r,
        &[
            "seven_term_matches_simplified",
            "o4_is_cocycle",
            "dense_nontrivial",
            "filtration_nonzero",
            "normal_form_differs_by_trail",
            "hand_cochain_identity",
        ],
    )
}

fn criterion_5() -> Verdict {
    let r = scenario(Scenario::OddM { m: 3, n: 2 });
    Verdict::from_checks(
        &r,
        &[
            "pointwise_closed_form",
            "dense_refused",
            "alt_certificate_nonzero",
            "alt_value_matches_claim",
        ],
    )
}

fn criterion_6() -> Verdict {
    let r = scenario(Scenario::CyclicGenerators);
    Verdict::from_checks(
        &r,
        &[
            "closed_form_matches_cup_product",
            "generators_are_cocycles",
            "generator_order_is_m",
            "without_factor_is_not_a_cocycle",
        ],
    )
}

fn criterion_7() -> Verdict {
    let z2n = Verdict::from_checks(&scenario(Scenario::Z2n { n: 2 }), &["nontrivial_rho"]);
    let d8 = Verdict::from_checks(&scenario(Scenario::D8), &["trivial_rho"]);
    let sweep = [("Z2", vec![2u64]), ("Z2xZ2", vec![2, 2])]
        .into_iter()
        .map(|(name, f)| {
            lifting_criteria_agree(&arc(FinGroup::from_invariants(&f).unwrap()))
                .map(|s| format!("{name}: {s}"))
        })
        .collect::<Vec<_>>();
    let detail: Vec<String> = sweep
        .iter()
        .filter_map(|o| o.as_ref().ok().cloned())
        .collect();
    let mut v = z2n.and(d8).and(from_outcomes("exhaustive sweeps", sweep));
    v.summary = format!("{} ({})", v.summary, detail.join("; "));
    v
}

fn random_trivial_twist(
    rng: &mut ChaCha8Rng,
    fam: &pointed_obstructions::braided::RankFourFamily,
    g: &Arc<FinGroup>,
) -> TwistCocycle {
    let module = trivial_twist_module(fam, g);
    let a = module.module().order();
    let x = rng.gen_range(0..a);
    let m = g.factors().unwrap()[0] as usize;
    let gg = g.clone();
    let base = TwistCocycle::from_fn(module.clone(), |t| {
        if gg.tuple(t[0])[0] as usize + gg.tuple(t[1])[0] as usize >= m {
            x
        } else {
            0
        }
    })
    .unwrap();
    let nu = pointed_obstructions::cochain::Cochain::from_fn(g.clone(), module, 1, |_| {
        rng.gen_range(0..a)
    })
    .unwrap();
    base.shifted(&nu).unwrap()
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut dd = Vec::new();
    for (_, g) in groups_up_to_8() {
        for n in 1..=3 {
            for _ in 0..3 {
                dd.push(coboundary_squares_to_zero(rng.gen(), &g, n));
            }
        }
    }
    let sections = small_sequences()
        .iter()
        .enumerate()
        .map(|(i, (name, ses))| connecting_map_is_section_independent(name, ses, i as u64))
        .collect();
    let mut o4 = Vec::new();
    let mut agree = Vec::new();
    for (_, g) in groups_up_to_4() {
        for fam in families() {
            let mu = random_trivial_twist(&mut rng, &fam, &g);
            let data =
                BosonicActionData::trivial(g.clone(), fam.cocycle.pointed().unwrap()).unwrap();
            o4.push(o4_cocycle_and_shift(&data, &fam, &mu, rng.gen()));
            agree.push(o4_formulas_agree(&fam, &mu));
        }
    }
    for k in RankFourVariant::KleinFour.admissible_k() {
        let act = builtin_action(BuiltinAction::Caso1, k).unwrap();
        let module = act.data.star_module().unwrap();
        let f = act.family.f;
        let mu = TwistCocycle::from_fn(module, |t| if t == [1, 1] { f } else { 0 }).unwrap();
        o4.push(o4_cocycle_and_shift(&act.data, &act.family, &mu, rng.gen()));
    }
    let mut triv = Vec::new();
    let (mut trivial, mut nontrivial) = (0, 0);
    for (_, g) in groups_up_to_4() {
        for n in 1..=4 {
            for modulus in [2u64, 3, 4, 6] {
                for _ in 0..2 {
                    let o = triviality_matches_search(rng.gen(), &g, n, modulus);
                    match o.as_deref() {
                        Ok("Trivial") => trivial += 1,
                        Ok(_) => nontrivial += 1,
                        Err(_) => {}
                    }
                    triv.push(o);
                }
            }
        }
    }
    let mut v = from_outcomes("∂∂ = 0", dd)
        .and(from_outcomes("section independence", sections))
        .and(from_outcomes("O₄ cocycle and shift", o4))
        .and(from_outcomes("triviality vs ℤ/M search", triv))
        .and(from_outcomes("O₄ formulas agree", agree));
    v.summary = format!(
        "{} ({trivial} trivial, {nontrivial} nontrivial samples)",
        v.summary
    );
    v
}

fn criterion_9() -> Verdict {
    let r = Verdict::from_checks(&scenario(Scenario::Rank4Actions), &["torsor_shift"]);
    r.and(from_outcomes(
        "all rank-four actions",
        vec![torsor_relation_on_rank_four()],
    ))
}

fn main() {
    let criteria: [(usize, &str, Duration, fn() -> Verdict); 9] = [
        (
            1,
            "rank-four families are braided and non-degenerate",
            Duration::from_secs(1),
            criterion_1,
        ),
        (
            2,
            "quadratic form profile",
            Duration::from_secs(1),
            criterion_2,
        ),
        (
            3,
            "both ℤ/2 actions are fermionic for the trivial super-group",
            Duration::from_secs(1),
            criterion_3,
        ),
        (
            4,
            "Drinfeld-center obstruction",
            Duration::from_secs(30),
            criterion_4,
        ),
        (
            5,
            "odd-m obstruction via certificates",
            Duration::from_secs(5),
            criterion_5,
        ),
        (
            6,
            "cyclic generators have order m",
            Duration::from_secs(10),
            criterion_6,
        ),
        (
            7,
            "fermionic-action classification",
            Duration::from_secs(30),
            criterion_7,
        ),
        (8, "property suites", Duration::from_secs(120), criterion_8),
        (9, "torsor relation", Duration::from_secs(5), criterion_9),
    ];
    let mut failed = 0;
    for (n, title, budget, run) in criteria {
        let start = Instant::now();
        let mut v = run();
        let elapsed = start.elapsed();
        if elapsed > budget {
            v.passed = false;
            v.notes
                .push(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        failed += usize::from(!v.passed);
        println!(
            "{} criterion {n}: {title} [{}] ({:.0?})",
            if v.passed { "PASS" } else { "FAIL" },
            v.summary,
            elapsed
        );
        for note in &v.notes {
            println!("    {note}");
        }
    }
    println!("{} of 9 criteria pass", 9 - failed);
}
