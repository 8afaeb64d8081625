//! The `pobs` command line: JSON in, canonical JSON out, with `--human` for tables.
//!
//! Exit status: 0 when the computation ran (and any assertion held), 1 when an assertion
//! failed, 2 on malformed input or a failed precondition.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::cochain::Status;
use crate::error::{Error, Result};
use crate::fermion::FoundFermion;
use crate::io::{canonical_json, parse_json, read_json, CochainFile, StrategySpec};
use crate::obstruct::{AnomalyCertificate, AnomalyStatus};
use crate::pipeline::{
    run_cohomology, run_fermions, run_lyndon, run_o3, run_o4, run_triviality, run_verify_action,
    CohomologyReport, LyndonReport, O3Report, O4Report, TrivialityReport, VerifyActionReport,
};
use crate::scenario::{
    emit_inputs, run_scenario, scenario_inputs, Scenario, ScenarioInputs, ScenarioReport,
};

#[derive(Parser, Debug)]
#[command(
    name = "pobs",
    version,
    about = "Exact obstruction classes for actions on pointed braided fusion categories"
)]
pub struct Cli {
    /// Render tables instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// Largest number of entries the dense O₄ strategy may tabulate.
    #[arg(long, global = true)]
    pub dense_cap: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct Assertions {
    /// Exit with status 1 unless the class is trivial.
    #[arg(long, conflicts_with = "assert_nontrivial")]
    pub assert_trivial: bool,
    /// Exit with status 1 unless the class is nontrivial.
    #[arg(long)]
    pub assert_nontrivial: bool,
}

impl Assertions {
    fn holds(&self, trivial: bool) -> bool {
        !(self.assert_trivial && !trivial || self.assert_nontrivial && trivial)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyKind {
    Dense,
    Filtration,
    Alt,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariant factors of H^n(G, M) from {"group", "module", "degree"}.
    Cohomology {
        /// A JSON file, inline JSON, or `-` for standard input.
        input: String,
    },
    /// Decide whether a cocycle file is a coboundary.
    Trivial {
        /// A JSON file, inline JSON, or `-` for standard input.
        input: String,
        #[command(flatten)]
        assert: Assertions,
        /// Write the witness cochain here when the class is trivial.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Lyndon normal form, components and the class of the lowest component.
    Lyndon {
        /// A JSON file, inline JSON, or `-` for standard input.
        input: String,
    },
    /// All fermions of a pointed category.
    Fermions {
        /// A JSON file, inline JSON, or `-` for standard input.
        input: String,
    },
    /// Check the bosonic axioms and the fermionic conditions of an action bundle.
    VerifyAction {
        /// A JSON file, inline JSON, or `-` for standard input.
        input: String,
        /// Exit with status 1 unless the action is fermionic for the given α.
        #[arg(long)]
        assert: bool,
    },
    /// Pointed and fermionic O₃ of an action.
    O3 {
        /// A JSON file, inline JSON, or `-` for standard input.
        input: String,
        #[command(flatten)]
        assert: Assertions,
    },
    /// The O₄ obstruction and its verdict.
    O4 {
        /// A JSON file, inline JSON, or `-` for standard input.
        input: String,
        /// Override the strategy named in the input bundle.
        #[arg(long, value_enum)]
        strategy: Option<StrategyKind>,
        /// Component index for the filtration strategy.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Two elements of the first factor for the Alt strategy, e.g. 27,9.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        alt_a: Option<Vec<usize>>,
        /// Two elements of the second factor for the Alt strategy.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        alt_b: Option<Vec<usize>>,
        /// Random tuples used to check that lower components vanish.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[command(flatten)]
        assert: Assertions,
    },
    /// Run a built-in scenario, or `all` of them.
    Paper {
        /// drinfeld, odd_m, rank4_actions, d8, z2n, cyclic_generators or all.
        scenario: String,
        /// m for odd_m.
        #[arg(long)]
        m: Option<u64>,
        /// n for odd_m and z2n.
        #[arg(long)]
        n: Option<u64>,
        /// Print the scenario's input bundle instead of running it.
        #[arg(long)]
        emit_inputs: bool,
        /// Run on an edited input bundle.
        #[arg(long)]
        inputs: Option<PathBuf>,
        /// Exit with status 1 if any check fails.
        #[arg(long)]
        assert: bool,
    },
}

enum Outcome {
    Done,
    AssertionFailed(String),
}

fn load<T: DeserializeOwned>(input: &str) -> Result<T> {
    let t = input.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        parse_json(t)
    } else if input == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Input(e.to_string()))?;
        parse_json(&s)
    } else {
        read_json(Path::new(input))
    }
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    human: bool,
    value: &T,
    render: impl FnOnce(&T) -> String,
) -> Result<()> {
    let text = if human {
        render(value)
    } else {
        canonical_json(value)?
    };
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Input(e.to_string()))
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Trivial => "trivial",
        Status::Nontrivial => "nontrivial",
    }
}

/// Runs the command line on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::AssertionFailed(msg)) => {
            let _ = writeln!(err, "assertion failed: {msg}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn assertion(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Done
    } else {
        Outcome::AssertionFailed(msg())
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let human = cli.human;
    match &cli.command {
        Command::Cohomology { input } => {
            let r = run_cohomology(&load(input)?)?;
            emit(out, human, &r, render_cohomology)?;
            Ok(Outcome::Done)
        }
        Command::Trivial {
            input,
            assert,
            witness_out,
        } => {
            let file: CochainFile = load(input)?;
            let r = run_triviality(&file.load()?)?;
            if let (Some(path), Some(w)) = (witness_out, &r.witness) {
                std::fs::write(path, canonical_json(w)?)
                    .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            }
            emit(out, human, &r, render_triviality)?;
            let trivial = r.status == Status::Trivial;
            Ok(assertion(assert.holds(trivial), || {
                format!("the class is {}", status_word(r.status))
            }))
        }
        Command::Lyndon { input } => {
            let r = run_lyndon(&load(input)?)?;
            emit(out, human, &r, render_lyndon)?;
            Ok(Outcome::Done)
        }
        Command::Fermions { input } => {
            let r = run_fermions(&load(input)?)?;
            emit(out, human, &r, |v| render_fermions(v))?;
            Ok(Outcome::Done)
        }
        Command::VerifyAction { input, assert } => {
            let r = run_verify_action(&load(input)?)?;
            emit(out, human, &r, render_verify)?;
            Ok(assertion(!assert || r.passed, || {
                "the action is not fermionic for the given α".into()
            }))
        }
        Command::O3 { input, assert } => {
            let (r, c) = run_o3(&load(input)?)?;
            emit(out, human, &r, render_o3)?;
            let trivial = c.exists();
            Ok(assertion(assert.holds(trivial), || {
                format!(
                    "the fermionic obstruction is {}",
                    if trivial { "trivial" } else { "nontrivial" }
                )
            }))
        }
        Command::O4 {
            input,
            strategy,
            k,
            alt_a,
            alt_b,
            samples,
            assert,
        } => {
            let bundle = load(input)?;
            let spec = match strategy {
                None => None,
                Some(StrategyKind::Dense) => Some(StrategySpec::Dense { cap: None }),
                Some(StrategyKind::Filtration) => Some(StrategySpec::Filtration { k: *k }),
                Some(StrategyKind::Alt) => {
                    let pair = |v: &Option<Vec<usize>>, flag: &str| match v.as_deref() {
                        Some([x, y]) => Ok([*x, *y]),
                        _ => Err(Error::Input(format!("the alt strategy needs {flag} x,y"))),
                    };
                    Some(StrategySpec::Alt {
                        a: pair(alt_a, "--alt-a")?,
                        b: pair(alt_b, "--alt-b")?,
                        samples: *samples,
                    })
                }
            };
            let r = run_o4(&bundle, spec.as_ref(), cli.dense_cap)?;
            emit(out, human, &r, render_o4)?;
            let status = r.report.status;
            if (assert.assert_trivial || assert.assert_nontrivial)
                && status == AnomalyStatus::Inconclusive
            {
                return Ok(Outcome::AssertionFailed(
                    "the certificate is inconclusive".into(),
                ));
            }
            Ok(assertion(
                assert.holds(status == AnomalyStatus::Trivial),
                || format!("the O₄ class is {status:?}").to_lowercase(),
            ))
        }
        Command::Paper {
            scenario,
            m,
            n,
            emit_inputs: dump,
            inputs,
            assert,
        } => {
            let chosen: Vec<Scenario> = if scenario == "all" {
                Scenario::all()
            } else {
                vec![Scenario::from_name(scenario, *m, *n)?]
            };
            if *dump {
                for s in &chosen {
                    out.write_all(emit_inputs(s)?.as_bytes())
                        .map_err(|e| Error::Input(e.to_string()))?;
                }
                return Ok(Outcome::Done);
            }
            let bundles: Vec<ScenarioInputs> = match inputs {
                Some(path) => {
                    let b: ScenarioInputs = read_json(path)?;
                    if scenario != "all" && b.name() != scenario {
                        return Err(Error::Input(format!(
                            "the input bundle is for {}, not {scenario}",
                            b.name()
                        )));
                    }
                    vec![b]
                }
                None => chosen.iter().map(scenario_inputs).collect::<Result<_>>()?,
            };
            let reports = bundles
                .iter()
                .map(run_scenario)
                .collect::<Result<Vec<_>>>()?;
            if reports.len() == 1 {
                emit(out, human, &reports[0], |r| render_scenario(r))?;
            } else {
                emit(out, human, &reports, |rs| {
                    rs.iter().map(render_scenario).collect()
                })?;
            }
            let failed: Vec<String> = reports
                .iter()
                .flat_map(|r| {
                    r.checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(move |c| format!("{}/{}", r.scenario, c.name))
                })
                .collect();
            Ok(assertion(!assert || failed.is_empty(), || {
                format!("failing checks: {}", failed.join(", "))
            }))
        }
    }
}

fn render_cohomology(r: &CohomologyReport) -> String {
    let factors: Vec<String> = r.invariants.iter().map(|d| format!("ℤ/{d}")).collect();
    let group = if factors.is_empty() {
        "0".to_string()
    } else {
        factors.join(" ⊕ ")
    };
    format!("H^{} = {group}   (order {})\n", r.degree, r.order)
}

fn render_triviality(r: &TrivialityReport) -> String {
    let mut s = format!("class: {}\n", status_word(r.status));
    let c = &r.certificate;
    let _ = writeln!(
        s,
        "certificate: {} ({}×{}, rank {})",
        c.method, c.rows, c.cols, c.rank
    );
    if !c.detail.is_empty() {
        let _ = writeln!(s, "  {}", c.detail);
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(s, "witness: {} nonzero entries", w.values.len());
    }
    s
}

fn render_lyndon(r: &LyndonReport) -> String {
    let mut s = String::from(" p  q  nonzero\n");
    for c in &r.components {
        let _ = writeln!(s, "{:>2} {:>2}  {:>7}", c.p, c.q, c.nonzero_entries);
    }
    let _ = writeln!(s, "trail: {} nonzero entries", r.trail.values.len());
    if let Some(c) = &r.class {
        let _ = writeln!(s, "component ({}, {}): {}", c.k, c.q, status_word(c.status));
    }
    s
}

fn render_fermions(found: &[FoundFermion]) -> String {
    let mut s = format!("{} fermion(s)\n", found.len());
    for f in found {
        let eta: Vec<String> = f.fermion.eta.iter().map(ToString::to_string).collect();
        let braid = match f.eta_from_braiding {
            Some(true) => "  (η = c(·, f))",
            Some(false) => "",
            None => "",
        };
        let _ = writeln!(s, "f = {}  η = [{}]{braid}", f.fermion.f, eta.join(", "));
    }
    s
}

fn render_verify(r: &VerifyActionReport) -> String {
    let mut s = String::from("axiom          violations\n");
    for t in &r.bosonic.axioms {
        let _ = writeln!(
            s,
            "{:<14} {}",
            format!("{:?}", t.axiom).to_lowercase(),
            t.violations
        );
    }
    match (&r.fermionic, &r.skipped) {
        (Some(f), _) => {
            let _ = writeln!(s, "fermion f = {}", f.fermion.f);
            let _ = writeln!(s, " g  a  μ(g;f,a)−μ(g;a,f)  η(g·a)−η(a)");
            for row in &f.ratio_rows {
                let _ = writeln!(
                    s,
                    "{:>2} {:>2}  {:>19}  {:>11}",
                    row.g,
                    row.a,
                    row.mu_side.to_string(),
                    row.eta_side.to_string()
                );
            }
            let _ = writeln!(s, "ratio condition: {}", f.condition_b_holds);
            let _ = writeln!(s, "γ̃ cohomologous to α: {}", f.class_matches_alpha);
        }
        (None, Some(why)) => {
            let _ = writeln!(s, "fermionic check skipped: {why}");
        }
        (None, None) => {}
    }
    let _ = writeln!(s, "{}", if r.passed { "PASS" } else { "FAIL" });
    s
}

fn render_o3(r: &O3Report) -> String {
    let mut s = String::new();
    let p = &r.pointed;
    let _ = writeln!(
        s,
        "pointed O₃: {} (repaired: {})",
        status_word(p.status),
        p.repaired
    );
    if !p.completed_pairs.is_empty() {
        let _ = writeln!(s, "  γ completed at {:?}", p.completed_pairs);
    }
    let c = &r.classification;
    let _ = writeln!(s, "fermion: {}", r.fermion);
    let _ = writeln!(s, "branch: {:?}", c.branch);
    let _ = writeln!(s, "fermionic O₃: {}", status_word(c.obstruction_status));
    let _ = writeln!(s, "α-lifting exists: {}", c.lifting_exists);
    let _ = writeln!(s, "criteria agree: {}", c.criteria_agree);
    if let Some(t) = &c.torsor_order {
        let _ = writeln!(s, "liftings up to equivalence: {t}");
    }
    s
}

fn render_o4(r: &O4Report) -> String {
    let mut s = format!("O₄ ({}) on a group of order {}\n", r.formula, r.group_order);
    let rep = &r.report;
    let _ = writeln!(s, "strategy: {}", rep.strategy);
    let _ = writeln!(s, "status: {:?}", rep.status);
    match &rep.certificate {
        AnomalyCertificate::Dense {
            certificate,
            entries,
            ..
        } => {
            let _ = writeln!(
                s,
                "{} entries; {} ({}×{}, rank {})",
                entries, certificate.method, certificate.rows, certificate.cols, certificate.rank
            );
        }
        AnomalyCertificate::Filtration { class } => {
            let _ = writeln!(
                s,
                "component ({}, {}): {} with {} nonzero entries",
                class.k,
                class.q,
                status_word(class.status),
                class.nonzero_entries
            );
        }
        AnomalyCertificate::Alt {
            a,
            b,
            value,
            lower_samples,
            lower_nonzero,
        } => {
            let _ = writeln!(s, "Alt∘Alt at {a:?}, {b:?} = {value}");
            let _ = writeln!(
                s,
                "lower components nonzero at {lower_nonzero} of {lower_samples} samples"
            );
        }
    }
    s
}

fn render_scenario(r: &ScenarioReport) -> String {
    let mut s = format!("== {} (input {})\n", r.scenario, &r.input_sha256[..16]);
    for c in &r.checks {
        let _ = writeln!(s, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["pobs"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn malformed_json_exits_with_two() {
        let (code, _, err) = call(&["cohomology", "{\"group\":"]);
        assert_eq!(code, 2);
        assert!(err.contains("malformed"));
    }

    #[test]
    fn cohomology_inline() {
        let (code, out, _) = call(&[
            "cohomology",
            r#"{"group":{"invariants":[2]},"module":{"invariants":[2]},"degree":2}"#,
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = parse_json(&out).unwrap();
        assert_eq!(v["invariants"], serde_json::json!([2]));
    }

    #[test]
    fn assertion_failure_exits_with_one() {
        let zero = r#"{"group":{"invariants":[2]},"module":{"kind":"qz"},"degree":3}"#;
        assert_eq!(call(&["trivial", zero, "--assert-trivial"]).0, 0);
        assert_eq!(call(&["trivial", zero, "--assert-nontrivial"]).0, 1);
    }

    #[test]
    fn unknown_scenario_is_an_input_error() {
        assert_eq!(call(&["paper", "nope"]).0, 2);
    }

    #[test]
    fn help_exits_cleanly() {
        assert_eq!(call(&["--help"]).0, 0);
    }
}
