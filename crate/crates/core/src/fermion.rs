//! Fermions in pointed fusion categories, bosonic and fermionic group actions on
//! them, and fermionic tensor functors.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::braided::{
    rank_four_family, AbelianCocycle, PointedData, RankFourFamily, RankFourVariant,
};
use crate::cochain::{
    coboundary_matrix, triviality_finite, Cochain, ModuleCochain, QZCoeff, TupleCode,
};
use crate::error::{Error, Result};
use crate::group::{FinGroup, GModule, GroupHom};
use crate::linalg::Smith;
use crate::qz::QZ;
use crate::supergroup::z2_trivial;

/// Which form of the `2η(x)` condition to test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionC {
    /// `ω(x, f, f) + ω(f, x, f) − ω(x, f, f) + 2η(x) = 0`, term for term as printed.
    #[default]
    Displayed,
    /// `ω(x, f, f) + ω(f, f, x) − ω(f, x, f) + 2η(x) = 0`.
    Corrected,
}

impl std::str::FromStr for ConditionC {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "displayed" => Ok(ConditionC::Displayed),
            "corrected" => Ok(ConditionC::Corrected),
            _ => Err(format!(
                "unknown reading {s:?}; expected displayed or corrected"
            )),
        }
    }
}

/// A candidate fermion `(f, η)` with `η` listed over all elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fermion {
    pub f: usize,
    pub eta: Vec<QZ>,
}

impl Fermion {
    /// `η(a) = c(a, f)`.
    pub fn from_braiding(ac: &AbelianCocycle, f: usize) -> Fermion {
        Fermion {
            f,
            eta: ac.group().elements().map(|a| ac.c(a, f)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermionCheck {
    pub central_of_order_two: bool,
    pub twisted_additivity: bool,
    pub square_condition: bool,
    pub eta_at_f_is_half: bool,
}

impl FermionCheck {
    pub fn holds(&self) -> bool {
        self.central_of_order_two
            && self.twisted_additivity
            && self.square_condition
            && self.eta_at_f_is_half
    }
}

fn additivity_defect(host: &PointedData, f: usize, x: usize, y: usize) -> QZ {
    host.omega(f, x, y) + host.omega(x, y, f) - host.omega(x, f, y)
}

fn square_word(host: &PointedData, f: usize, x: usize, reading: ConditionC) -> QZ {
    match reading {
        ConditionC::Displayed => host.omega(x, f, f) + host.omega(f, x, f) - host.omega(x, f, f),
        ConditionC::Corrected => host.omega(x, f, f) + host.omega(f, f, x) - host.omega(f, x, f),
    }
}

pub fn check_fermion(
    host: &PointedData,
    fermion: &Fermion,
    reading: ConditionC,
) -> Result<FermionCheck> {
    let g = host.group();
    if fermion.f >= g.order() || fermion.eta.len() != g.order() {
        return Err(Error::Input("fermion data does not fit the group".into()));
    }
    let f = fermion.f;
    let eta = &fermion.eta;
    Ok(FermionCheck {
        central_of_order_two: g.element_order(f) == 2 && g.center().contains(&f),
        twisted_additivity: g.elements().all(|x| {
            g.elements()
                .all(|y| &eta[x] + &eta[y] - &eta[g.mul(x, y)] == additivity_defect(host, f, x, y))
        }),
        square_condition: g
            .elements()
            .all(|x| (square_word(host, f, x, reading) + eta[x].scale_i64(2)).is_zero()),
        eta_at_f_is_half: eta[f] == QZ::half(),
    })
}

/// Every homomorphism `G → ℚ/ℤ`, as value lists.
pub fn characters(group: &FinGroup) -> Vec<Vec<QZ>> {
    let e = group.exponent() as i64;
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![true];
    span.resize(group.order(), false);
    for x in group.elements() {
        if !span[x] {
            gens.push(x);
            let mut members: Vec<usize> = group.elements().filter(|&y| span[y]).collect();
            let mut i = 0;
            while i < members.len() {
                for &s in &gens {
                    let z = group.mul(members[i], s);
                    if !span[z] {
                        span[z] = true;
                        members.push(z);
                    }
                }
                i += 1;
            }
        }
    }
    let mut out = Vec::new();
    let total = (e as u64).pow(gens.len() as u32);
    'assign: for code in 0..total {
        let mut c = code;
        let vals: Vec<QZ> = gens
            .iter()
            .map(|_| {
                let v = QZ::new((c % e as u64) as i64, e);
                c /= e as u64;
                v
            })
            .collect();
        let mut chi: Vec<Option<QZ>> = vec![None; group.order()];
        chi[0] = Some(QZ::zero());
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for (s, v) in gens.iter().zip(&vals) {
                let y = group.mul(x, *s);
                let w = chi[x].as_ref().unwrap() + v;
                match &chi[y] {
                    Some(old) if *old != w => continue 'assign,
                    Some(_) => {}
                    None => {
                        chi[y] = Some(w);
                        queue.push(y);
                    }
                }
            }
        }
        let chi: Vec<QZ> = chi
            .into_iter()
            .map(|v| v.expect("generators span"))
            .collect();
        let hom = group.elements().all(|x| {
            group
                .elements()
                .all(|y| chi[group.mul(x, y)] == &chi[x] + &chi[y])
        });
        if hom {
            out.push(chi);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundFermion {
    pub fermion: Fermion,
    /// With a braiding supplied: whether `η(a) = c(a, f)`.
    pub eta_from_braiding: Option<bool>,
}

/// All pairs `(f, η)` satisfying the fermion conditions in the chosen reading, sorted.
pub fn find_fermions(
    host: &PointedData,
    braiding: Option<&AbelianCocycle>,
    reading: ConditionC,
) -> Result<Vec<FoundFermion>> {
    let g = host.group().clone();
    if let Some(ac) = braiding {
        if ac.omega_cochain() != host.omega_cochain() {
            return Err(Error::Input(
                "the braiding belongs to another associator".into(),
            ));
        }
    }
    let d1 = coboundary_matrix(&g, &QZCoeff::trivial(), 1)?;
    let smith = Smith::new(&d1);
    let code = TupleCode::new(g.order(), 2);
    let chars = characters(&g);
    let mut out = Vec::new();
    for f in g.elements_of_order(2) {
        if !g.center().contains(&f) {
            continue;
        }
        let rhs: Vec<QZ> = (0..code.count().unwrap_or(0))
            .map(|i| {
                let t = code.decode(i);
                additivity_defect(host, f, t[0], t[1])
            })
            .collect();
        let Some(sol) = smith.solve_qz(&rhs)? else {
            continue;
        };
        let mut base = vec![QZ::zero()];
        base.extend(sol);
        for chi in &chars {
            let eta: Vec<QZ> = base.iter().zip(chi).map(|(a, b)| a + b).collect();
            let fermion = Fermion { f, eta };
            if check_fermion(host, &fermion, reading)?.holds() {
                let eta_from_braiding =
                    braiding.map(|ac| g.elements().all(|a| fermion.eta[a] == ac.c(a, f)));
                out.push(FoundFermion {
                    fermion,
                    eta_from_braiding,
                });
            }
        }
    }
    out.sort_by(|a, b| a.fermion.cmp(&b.fermion));
    Ok(out)
}

/// A bosonic action `(*, μ, γ)` of `G` on `Vec_A^ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct BosonicActionData {
    group: Arc<FinGroup>,
    target: PointedData,
    star: Vec<Vec<usize>>,
    mu: Vec<QZ>,
    gamma: Vec<QZ>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionAxiom {
    /// `g ↦ g_*` is a homomorphism into `Aut(A)`.
    Star,
    /// `μ(g; a, b)` vanishes when `a` or `b` is `0`; `γ(g, h; a)` when `g` or `h` is `e`.
    Normalization,
    /// `ω(a,b,c) − ω(g_*a, g_*b, g_*c) = μ(g;b,c) + μ(g;a,b+c) − μ(g;a+b,c) − μ(g;a,b)`.
    Associator,
    /// `μ(g; h_*a, h_*b) + μ(h; a, b) − μ(gh; a, b) = γ(g,h;a+b) − γ(g,h;a) − γ(g,h;b)`.
    Composition,
    /// `γ(gh,k;a) + γ(g,h;k_*a) − γ(h,k;a) − γ(g,hk;a) = 0`.
    Coherence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub g: Vec<usize>,
    pub a: Vec<usize>,
    /// Both sides of the failing equation; absent for failures of `*` itself.
    pub sides: Option<(QZ, QZ)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomTally {
    pub axiom: ActionAxiom,
    pub violations: usize,
    pub first: Option<AxiomFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BosonicReport {
    pub valid: bool,
    pub axioms: Vec<AxiomTally>,
}

impl BosonicReport {
    pub fn violations(&self, axiom: ActionAxiom) -> usize {
        self.axioms
            .iter()
            .find(|t| t.axiom == axiom)
            .map_or(0, |t| t.violations)
    }

    fn first_failure(&self) -> Option<&AxiomTally> {
        self.axioms.iter().find(|t| t.violations > 0)
    }
}

struct Tally {
    axiom: ActionAxiom,
    violations: usize,
    first: Option<AxiomFailure>,
}

impl Tally {
    fn new(axiom: ActionAxiom) -> Tally {
        Tally {
            axiom,
            violations: 0,
            first: None,
        }
    }

    fn record(&mut self, g: Vec<usize>, a: Vec<usize>, lhs: QZ, rhs: QZ) {
        if lhs != rhs {
            self.violations += 1;
            self.first.get_or_insert(AxiomFailure {
                g,
                a,
                sides: Some((lhs, rhs)),
            });
        }
    }

    fn record_structural(&mut self, g: Vec<usize>, a: Vec<usize>) {
        self.violations += 1;
        self.first.get_or_insert(AxiomFailure { g, a, sides: None });
    }

    fn finish(self) -> AxiomTally {
        AxiomTally {
            axiom: self.axiom,
            violations: self.violations,
            first: self.first,
        }
    }
}

impl BosonicActionData {
    /// Tables: `star[g][a] = g_*(a)`, `mu[(g·|A| + a)·|A| + b] = μ(g; a, b)`,
    /// `gamma[(g·|G| + h)·|A| + a] = γ(g, h; a)`.
    pub fn new(
        group: Arc<FinGroup>,
        target: PointedData,
        star: Vec<Vec<usize>>,
        mu: Vec<QZ>,
        gamma: Vec<QZ>,
    ) -> Result<Self> {
        let (n, m) = (group.order(), target.group().order());
        if star.len() != n
            || star
                .iter()
                .any(|s| s.len() != m || s.iter().any(|&x| x >= m))
        {
            return Err(Error::Input(
                "star needs one permutation of A per group element".into(),
            ));
        }
        if mu.len() != n * m * m || gamma.len() != n * n * m {
            return Err(Error::Input("μ or γ table has the wrong size".into()));
        }
        Ok(BosonicActionData {
            group,
            target,
            star,
            mu,
            gamma,
        })
    }

    pub fn from_fns(
        group: Arc<FinGroup>,
        target: PointedData,
        star: impl Fn(usize, usize) -> usize,
        mu: impl Fn(usize, usize, usize) -> QZ,
        gamma: impl Fn(usize, usize, usize) -> QZ,
    ) -> Result<Self> {
        let (n, m) = (group.order(), target.group().order());
        let star_t = (0..n)
            .map(|g| (0..m).map(|a| star(g, a)).collect())
            .collect();
        let mu_t = (0..n * m * m)
            .map(|i| mu(i / (m * m), (i / m) % m, i % m))
            .collect();
        let gamma_t = (0..n * n * m)
            .map(|i| gamma(i / (n * m), (i / m) % n, i % m))
            .collect();
        BosonicActionData::new(group, target, star_t, mu_t, gamma_t)
    }

    /// The identity action, with `μ = γ = 0`.
    pub fn trivial(group: Arc<FinGroup>, target: PointedData) -> Result<Self> {
        BosonicActionData::from_fns(
            group,
            target,
            |_, a| a,
            |_, _, _| QZ::zero(),
            |_, _, _| QZ::zero(),
        )
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn target(&self) -> &PointedData {
        &self.target
    }

    pub fn target_group(&self) -> &Arc<FinGroup> {
        self.target.group()
    }

    #[inline]
    pub fn star(&self, g: usize, a: usize) -> usize {
        self.star[g][a]
    }

    pub fn star_table(&self) -> &[Vec<usize>] {
        &self.star
    }

    #[inline]
    pub fn mu(&self, g: usize, a: usize, b: usize) -> QZ {
        let m = self.target.group().order();
        self.mu[(g * m + a) * m + b].clone()
    }

    #[inline]
    pub fn gamma(&self, g: usize, h: usize, a: usize) -> QZ {
        let (n, m) = (self.group.order(), self.target.group().order());
        self.gamma[(g * n + h) * m + a].clone()
    }

    pub fn mu_table(&self) -> &[QZ] {
        &self.mu
    }

    pub fn gamma_table(&self) -> &[QZ] {
        &self.gamma
    }

    pub fn with_gamma(&self, gamma: Vec<QZ>) -> Result<Self> {
        BosonicActionData::new(
            self.group.clone(),
            self.target.clone(),
            self.star.clone(),
            self.mu.clone(),
            gamma,
        )
    }

    pub fn with_gamma_fn(&self, gamma: impl Fn(usize, usize, usize) -> QZ) -> Result<Self> {
        let (n, m) = (self.group.order(), self.target.group().order());
        self.with_gamma(
            (0..n * n * m)
                .map(|i| gamma(i / (n * m), (i / m) % n, i % m))
                .collect(),
        )
    }

    /// `A` as a `G`-module through `*`.
    pub fn star_module(&self) -> Result<Arc<GModule>> {
        Ok(Arc::new(GModule::new(
            self.group.clone(),
            self.target.group().clone(),
            self.star.clone(),
        )?))
    }

    /// The action restricted along `ρ: H → G`.
    pub fn pullback(&self, rho: &GroupHom) -> Result<Self> {
        if rho.target().as_ref() != self.group.as_ref() {
            return Err(Error::GroupMismatch(
                "ρ does not land in the acting group".into(),
            ));
        }
        let r = |g: usize| rho.apply(g);
        BosonicActionData::from_fns(
            rho.source().clone(),
            self.target.clone(),
            |g, a| self.star(r(g), a),
            |g, a, b| self.mu(r(g), a, b),
            |g, h, a| self.gamma(r(g), r(h), a),
        )
    }

    fn star_tally(&self) -> Tally {
        let (g, a) = (&self.group, self.target.group());
        let mut t = Tally::new(ActionAxiom::Star);
        for x in g.elements() {
            for p in a.elements() {
                if x == 0 && self.star(x, p) != p {
                    t.record_structural(vec![x], vec![p]);
                }
                for q in a.elements() {
                    if self.star(x, a.mul(p, q)) != a.mul(self.star(x, p), self.star(x, q)) {
                        t.record_structural(vec![x], vec![p, q]);
                    }
                }
                for y in g.elements() {
                    if self.star(g.mul(x, y), p) != self.star(x, self.star(y, p)) {
                        t.record_structural(vec![x, y], vec![p]);
                    }
                }
            }
            let mut seen = vec![false; a.order()];
            for p in a.elements() {
                seen[self.star(x, p)] = true;
            }
            if seen.contains(&false) {
                t.record_structural(vec![x], vec![]);
            }
        }
        t
    }

    fn normalization_tally(&self) -> Tally {
        let (g, a) = (&self.group, self.target.group());
        let mut t = Tally::new(ActionAxiom::Normalization);
        for x in g.elements() {
            for p in a.elements() {
                t.record(vec![x], vec![0, p], self.mu(x, 0, p), QZ::zero());
                t.record(vec![x], vec![p, 0], self.mu(x, p, 0), QZ::zero());
                t.record(vec![0, x], vec![p], self.gamma(0, x, p), QZ::zero());
                t.record(vec![x, 0], vec![p], self.gamma(x, 0, p), QZ::zero());
            }
        }
        t
    }

    /// Checks each axiom family exhaustively, counting violations and keeping the first.
    pub fn verify(&self) -> BosonicReport {
        let (g, a) = (&self.group, self.target.group());
        let star = self.star_tally();
        let norm = self.normalization_tally();
        let mut assoc = Tally::new(ActionAxiom::Associator);
        let mut comp = Tally::new(ActionAxiom::Composition);
        let mut coh = Tally::new(ActionAxiom::Coherence);
        let om = |x, y, z| self.target.omega(x, y, z);
        for x in g.elements() {
            for p in a.elements() {
                for q in a.elements() {
                    for r in a.elements() {
                        let lhs =
                            om(p, q, r) - om(self.star(x, p), self.star(x, q), self.star(x, r));
                        let rhs = self.mu(x, q, r) + self.mu(x, p, a.mul(q, r))
                            - self.mu(x, a.mul(p, q), r)
                            - self.mu(x, p, q);
                        assoc.record(vec![x], vec![p, q, r], lhs, rhs);
                    }
                }
            }
            for y in g.elements() {
                for p in a.elements() {
                    for q in a.elements() {
                        let lhs = self.mu(x, self.star(y, p), self.star(y, q)) + self.mu(y, p, q)
                            - self.mu(g.mul(x, y), p, q);
                        let rhs = self.gamma(x, y, a.mul(p, q))
                            - self.gamma(x, y, p)
                            - self.gamma(x, y, q);
                        comp.record(vec![x, y], vec![p, q], lhs, rhs);
                    }
                }
                for z in g.elements() {
                    for p in a.elements() {
                        let lhs = self.gamma(g.mul(x, y), z, p) + self.gamma(x, y, self.star(z, p))
                            - self.gamma(y, z, p)
                            - self.gamma(x, g.mul(y, z), p);
                        coh.record(vec![x, y, z], vec![p], lhs, QZ::zero());
                    }
                }
            }
        }
        let axioms: Vec<AxiomTally> = [star, norm, assoc, comp, coh]
            .into_iter()
            .map(Tally::finish)
            .collect();
        BosonicReport {
            valid: axioms.iter().all(|t| t.violations == 0),
            axioms,
        }
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        match self.verify().first_failure() {
            None => Ok(()),
            Some(t) => Err(Error::Precondition(format!(
                "bosonic action fails {:?} ({} violations, first {:?})",
                t.axiom, t.violations, t.first
            ))),
        }
    }
}

pub fn verify_bosonic_action(data: &BosonicActionData) -> BosonicReport {
    data.verify()
}

/// One row of the comparison `μ(g; f, a) − μ(g; a, f)` against `η(g_*a) − η(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRow {
    pub g: usize,
    pub a: usize,
    pub mu_side: QZ,
    pub eta_side: QZ,
    pub holds: bool,
}

pub fn fermionic_ratio_table(data: &BosonicActionData, fermion: &Fermion) -> Vec<RatioRow> {
    let f = fermion.f;
    let mut rows = Vec::new();
    for g in data.group().elements() {
        for a in data.target_group().elements().skip(1) {
            let mu_side = data.mu(g, f, a) - data.mu(g, a, f);
            let eta_side = &fermion.eta[data.star(g, a)] - &fermion.eta[a];
            rows.push(RatioRow {
                g,
                a,
                holds: mu_side == eta_side,
                mu_side,
                eta_side,
            });
        }
    }
    rows
}

/// `γ̃(g, h) = γ(g, h; f)`, read in `ℤ/2` through `⟨f⟩^ ≅ ℤ/2`.
pub fn gamma_tilde(data: &BosonicActionData, fermion: &Fermion) -> Result<ModuleCochain> {
    data.require_valid()?;
    let f = fermion.f;
    if data.group().elements().any(|g| data.star(g, f) != f) {
        return Err(Error::Precondition("the action moves the fermion".into()));
    }
    let z2 = z2_trivial(data.group())?;
    let mut bad = None;
    let out = Cochain::from_fn(data.group().clone(), z2, 2, |t| {
        let v = data.gamma(t[0], t[1], f);
        if v.is_zero() {
            0
        } else if v == QZ::half() {
            1
        } else {
            bad.get_or_insert((t.to_vec(), v));
            0
        }
    })?;
    match bad {
        Some((t, v)) => Err(Error::Precondition(format!(
            "γ{t:?}(f) = {v} is not of order two"
        ))),
        None => Ok(out),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermionicVerdict {
    pub condition_b: Vec<RatioRow>,
    pub condition_b_holds: bool,
    pub gamma_tilde: ModuleCochain,
    pub class_matches_alpha: bool,
    /// When the classes agree, a 1-cochain `w` with `∂w = γ̃ − α`.
    pub witness: Option<ModuleCochain>,
}

impl FermionicVerdict {
    pub fn is_fermionic(&self) -> bool {
        self.condition_b_holds && self.class_matches_alpha
    }
}

pub fn verify_fermionic_action(
    data: &BosonicActionData,
    fermion: &Fermion,
    alpha: &ModuleCochain,
) -> Result<FermionicVerdict> {
    let gt = gamma_tilde(data, fermion)?;
    if alpha.coeff() != gt.coeff() || alpha.degree() != 2 {
        return Err(Error::Input(
            "α must be a ℤ/2-valued 2-cochain on the acting group".into(),
        ));
    }
    let rows = fermionic_ratio_table(data, fermion);
    let verdict = triviality_finite(&gt.minus(alpha))?;
    Ok(FermionicVerdict {
        condition_b_holds: rows.iter().all(|r| r.holds),
        condition_b: rows,
        class_matches_alpha: verdict.is_trivial(),
        witness: verdict.witness,
        gamma_tilde: gt,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinAction {
    Caso1,
    Caso2,
}

impl BuiltinAction {
    pub fn variant(self) -> RankFourVariant {
        match self {
            BuiltinAction::Caso1 => RankFourVariant::KleinFour,
            BuiltinAction::Caso2 => RankFourVariant::Cyclic4,
        }
    }
}

impl std::str::FromStr for BuiltinAction {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "caso1" => Ok(BuiltinAction::Caso1),
            "caso2" => Ok(BuiltinAction::Caso2),
            _ => Err(format!("unknown built-in action {s:?}")),
        }
    }
}

/// A built-in `ℤ/2` action on a rank-four family, with the family's fermion `η = c(·, f)`.
#[derive(Clone, Debug)]
pub struct RankFourAction {
    pub which: BuiltinAction,
    pub family: RankFourFamily,
    pub data: BosonicActionData,
    pub fermion: Fermion,
}

/// The tables of the two `ℤ/2` actions, entry for entry; `u` is index 1.
pub fn builtin_action(which: BuiltinAction, k: QZ) -> Result<RankFourAction> {
    let family = rank_four_family(which.variant(), k)?;
    let a = family.cocycle.group().clone();
    let (v, f, vf) = (family.v, family.f, family.v_plus_f());
    let half = QZ::half();
    let quarter = QZ::new(1, 4);
    let (star_u, mu_u, gamma_uu): (
        Vec<usize>,
        Box<dyn Fn(usize, usize) -> QZ>,
        Box<dyn Fn(usize) -> QZ>,
    ) = match which {
        BuiltinAction::Caso1 => (
            vec![0, f, vf, v],
            Box::new(move |x, y| {
                if (x == v || x == vf) && (y == v || y == f) {
                    QZ::half()
                } else {
                    QZ::zero()
                }
            }),
            Box::new(move |x| {
                if x == v || x == vf {
                    quarter.clone()
                } else {
                    QZ::zero()
                }
            }),
        ),
        BuiltinAction::Caso2 => (
            a.elements().map(|x| a.inv(x)).collect(),
            Box::new(move |x, y| {
                if (x == v || x == vf) && y == f {
                    half.clone()
                } else {
                    QZ::zero()
                }
            }),
            Box::new(move |x| if x == vf { quarter.clone() } else { QZ::zero() }),
        ),
    };
    let g = Arc::new(FinGroup::cyclic(2)?);
    let data = BosonicActionData::from_fns(
        g,
        family.cocycle.pointed()?,
        |g, x| if g == 1 { star_u[x] } else { x },
        |g, x, y| if g == 1 { mu_u(x, y) } else { QZ::zero() },
        |g, h, x| {
            if g == 1 && h == 1 {
                gamma_uu(x)
            } else {
                QZ::zero()
            }
        },
    )?;
    let fermion = Fermion::from_braiding(&family.cocycle, f);
    Ok(RankFourAction {
        which,
        family,
        data,
        fermion,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorViolation {
    pub args: Vec<usize>,
    pub lhs: QZ,
    pub rhs: QZ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermionicFunctorReport {
    pub maps_fermion: bool,
    pub monoidal: Option<FunctorViolation>,
    pub fermionic: Option<FunctorViolation>,
}

impl FermionicFunctorReport {
    pub fn holds(&self) -> bool {
        self.maps_fermion && self.monoidal.is_none() && self.fermionic.is_none()
    }
}

/// Checks a pointed tensor functor `(F, τ)` with `τ(x, y)` at `x·|A₁| + y`:
/// `ω₁(g,h,l) + τ(g+h,l) + τ(g,h) = τ(g,h+l) + τ(h,l) + ω₂(Fg,Fh,Fl)` and
/// `τ(f,g) − τ(g,f) = η′(F g) − η(g)`.
pub fn verify_fermionic_functor(
    src: (&PointedData, &Fermion),
    dst: (&PointedData, &Fermion),
    functor: &GroupHom,
    tau: &[QZ],
) -> Result<FermionicFunctorReport> {
    let (a1, a2) = (src.0.group(), dst.0.group());
    if functor.source().as_ref() != a1.as_ref() || functor.target().as_ref() != a2.as_ref() {
        return Err(Error::GroupMismatch(
            "F does not go from the source group to the target group".into(),
        ));
    }
    let n = a1.order();
    if tau.len() != n * n {
        return Err(Error::Input("τ needs one value per ordered pair".into()));
    }
    let t = |x: usize, y: usize| tau[x * n + y].clone();
    let fm = |x: usize| functor.apply(x);
    let mut monoidal = None;
    'outer: for g in a1.elements() {
        for h in a1.elements() {
            for l in a1.elements() {
                let lhs = src.0.omega(g, h, l) + t(a1.mul(g, h), l) + t(g, h);
                let rhs = t(g, a1.mul(h, l)) + t(h, l) + dst.0.omega(fm(g), fm(h), fm(l));
                if lhs != rhs {
                    monoidal = Some(FunctorViolation {
                        args: vec![g, h, l],
                        lhs,
                        rhs,
                    });
                    break 'outer;
                }
            }
        }
    }
    let (f, f2) = (src.1.f, dst.1.f);
    let fermionic = a1.elements().find_map(|g| {
        let lhs = t(f, g) - t(g, f);
        let rhs = &dst.1.eta[fm(g)] - &src.1.eta[g];
        (lhs != rhs).then(|| FunctorViolation {
            args: vec![g],
            lhs,
            rhs,
        })
    });
    Ok(FermionicFunctorReport {
        maps_fermion: fm(f) == f2,
        monoidal,
        fermionic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::Cochain;

    fn quarter_ks(v: RankFourVariant) -> Vec<QZ> {
        v.admissible_k()
    }

    #[test]
    fn characters_of_small_groups() {
        let k = FinGroup::from_invariants(&[2, 2]).unwrap();
        assert_eq!(characters(&k).len(), 4);
        let c6 = FinGroup::cyclic(6).unwrap();
        assert_eq!(characters(&c6).len(), 6);
        let s3 = FinGroup::from_table(vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 2, 0, 5, 3, 4],
            vec![2, 0, 1, 4, 5, 3],
            vec![3, 4, 5, 0, 1, 2],
            vec![4, 5, 3, 2, 0, 1],
            vec![5, 3, 4, 1, 2, 0],
        ])
        .unwrap();
        assert_eq!(characters(&s3).len(), 2);
    }

    #[test]
    fn fermions_of_z2_and_z3() {
        let z2 = PointedData::untwisted(Arc::new(FinGroup::cyclic(2).unwrap())).unwrap();
        let found = find_fermions(&z2, None, ConditionC::Displayed).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(
            found[0].fermion,
            Fermion {
                f: 1,
                eta: vec![QZ::zero(), QZ::half()]
            }
        );
        let z3 = PointedData::untwisted(Arc::new(FinGroup::cyclic(3).unwrap())).unwrap();
        assert!(find_fermions(&z3, None, ConditionC::Displayed)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn toric_code_fermion_is_found() {
        let fam = rank_four_family(RankFourVariant::KleinFour, QZ::zero()).unwrap();
        let host = fam.cocycle.pointed().unwrap();
        let found = find_fermions(&host, Some(&fam.cocycle), ConditionC::Displayed).unwrap();
        let eta0 = Fermion::from_braiding(&fam.cocycle, fam.f);
        let hit = found
            .iter()
            .find(|x| x.fermion == eta0)
            .expect("η = c(·, f) is a fermion");
        assert_eq!(hit.eta_from_braiding, Some(true));
        for x in &found {
            assert!(check_fermion(&host, &x.fermion, ConditionC::Displayed)
                .unwrap()
                .holds());
        }
    }

    #[test]
    fn square_condition_readings_on_cyclic4() {
        for k in quarter_ks(RankFourVariant::Cyclic4) {
            let fam = rank_four_family(RankFourVariant::Cyclic4, k).unwrap();
            let host = fam.cocycle.pointed().unwrap();
            let eta = Fermion::from_braiding(&fam.cocycle, fam.f);
            let lit = check_fermion(&host, &eta, ConditionC::Displayed).unwrap();
            let cor = check_fermion(&host, &eta, ConditionC::Corrected).unwrap();
            assert!(lit.twisted_additivity && lit.eta_at_f_is_half && !lit.square_condition);
            assert!(cor.holds());
            assert_eq!(fam.cocycle.c(fam.f, fam.f), QZ::half());
        }
    }

    #[test]
    fn builtin_tables() {
        let c1 = builtin_action(BuiltinAction::Caso1, QZ::zero()).unwrap();
        let (v, f) = (c1.family.v, c1.family.f);
        assert_eq!(c1.data.mu(1, v, f), QZ::half());
        assert_eq!(c1.data.gamma(1, 1, v), QZ::new(1, 4));
        assert_eq!(c1.data.star(1, f), f);
        assert_eq!(c1.data.star(1, v), c1.family.v_plus_f());
        let c2 = builtin_action(BuiltinAction::Caso2, QZ::new(1, 8)).unwrap();
        assert_eq!(c2.data.gamma(1, 1, c2.family.v_plus_f()), QZ::new(1, 4));
        assert_eq!(c2.data.gamma(1, 1, c2.family.v), QZ::zero());
    }

    #[test]
    fn caso1_is_a_bosonic_action_for_every_k() {
        for k in quarter_ks(RankFourVariant::KleinFour) {
            let c1 = builtin_action(BuiltinAction::Caso1, k).unwrap();
            let rep = c1.data.verify();
            assert!(rep.valid, "{rep:?}");
        }
    }

    #[test]
    fn caso2_tables_fail_composition_and_coherence() {
        for k in quarter_ks(RankFourVariant::Cyclic4) {
            let c2 = builtin_action(BuiltinAction::Caso2, k).unwrap();
            let rep = c2.data.verify();
            assert_eq!(rep.violations(ActionAxiom::Star), 0);
            assert_eq!(rep.violations(ActionAxiom::Associator), 0);
            assert_eq!(rep.violations(ActionAxiom::Composition), 7);
            assert_eq!(rep.violations(ActionAxiom::Coherence), 2);
        }
    }

    #[test]
    fn flipped_gamma_breaks_caso1() {
        let c1 = builtin_action(BuiltinAction::Caso1, QZ::zero()).unwrap();
        let v = c1.family.v;
        let bad = c1
            .data
            .with_gamma_fn(|g, h, a| {
                let x = c1.data.gamma(g, h, a);
                if g == 1 && h == 1 && a == v {
                    x + QZ::half()
                } else {
                    x
                }
            })
            .unwrap();
        let rep = bad.verify();
        assert!(!rep.valid);
        assert!(
            rep.violations(ActionAxiom::Coherence) > 0
                || rep.violations(ActionAxiom::Composition) > 0
        );
    }

    #[test]
    fn caso1_ratio_table_and_fermionic_verdicts() {
        let c1 = builtin_action(BuiltinAction::Caso1, QZ::zero()).unwrap();
        let rows = fermionic_ratio_table(&c1.data, &c1.fermion);
        let at = |a: usize| rows.iter().find(|r| r.g == 1 && r.a == a).unwrap().clone();
        let fam = &c1.family;
        assert_eq!(at(fam.v).mu_side, QZ::half());
        assert_eq!(at(fam.f).mu_side, QZ::zero());
        assert_eq!(at(fam.v_plus_f()).mu_side, QZ::half());
        assert!(rows.iter().all(|r| r.holds));

        let g = c1.data.group().clone();
        let z2 = z2_trivial(&g).unwrap();
        let zero = Cochain::zero(g.clone(), z2.clone(), 2).unwrap();
        let ok = verify_fermionic_action(&c1.data, &c1.fermion, &zero).unwrap();
        assert!(ok.is_fermionic());
        assert!(ok.gamma_tilde.is_zero());
        let mut gen = zero.clone();
        gen.set(&[1, 1], 1).unwrap();
        let mismatch = verify_fermionic_action(&c1.data, &c1.fermion, &gen).unwrap();
        assert!(!mismatch.class_matches_alpha);
    }

    #[test]
    fn identity_action_is_fermionic() {
        let g = Arc::new(FinGroup::cyclic(2).unwrap());
        let host = PointedData::untwisted(Arc::new(FinGroup::cyclic(2).unwrap())).unwrap();
        let data = BosonicActionData::trivial(g.clone(), host.clone()).unwrap();
        let fermion = find_fermions(&host, None, ConditionC::Displayed)
            .unwrap()
            .remove(0)
            .fermion;
        let zero = Cochain::zero(g.clone(), z2_trivial(&g).unwrap(), 2).unwrap();
        assert!(gamma_tilde(&data, &fermion).unwrap().is_zero());
        assert!(verify_fermionic_action(&data, &fermion, &zero)
            .unwrap()
            .is_fermionic());
    }

    #[test]
    fn functor_checks() {
        let c1 = builtin_action(BuiltinAction::Caso1, QZ::zero()).unwrap();
        let host = c1.data.target().clone();
        let a = host.group().clone();
        let id = GroupHom::identity(a.clone());
        let zero_tau = vec![QZ::zero(); 16];
        let src = (&host, &c1.fermion);
        assert!(verify_fermionic_functor(src, src, &id, &zero_tau)
            .unwrap()
            .holds());

        let u_star = GroupHom::new(a.clone(), a.clone(), c1.data.star_table()[1].clone()).unwrap();
        let tau: Vec<QZ> = (0..16).map(|i| c1.data.mu(1, i / 4, i % 4)).collect();
        assert!(verify_fermionic_functor(src, src, &u_star, &tau)
            .unwrap()
            .holds());

        let other = Fermion {
            f: c1.family.v_plus_f(),
            eta: c1.fermion.eta.clone(),
        };
        let rep = verify_fermionic_functor(src, (&host, &other), &id, &zero_tau).unwrap();
        assert!(!rep.maps_fermion && !rep.holds());
    }

    #[test]
    fn pullback_along_identity_is_unchanged() {
        let c1 = builtin_action(BuiltinAction::Caso1, QZ::new(1, 4)).unwrap();
        let id = GroupHom::identity(c1.data.group().clone());
        assert_eq!(c1.data.pullback(&id).unwrap(), c1.data);
    }
}
