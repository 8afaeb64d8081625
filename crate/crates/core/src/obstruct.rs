//! Obstruction classes: `O₃` for lifting problems and `O₄` for anomalies, with verdicts.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::braided::AbelianCocycle;
use crate::cochain::connecting_map;
use crate::cochain::{
    coboundary_matrix, cohomology_invariants, is_cocycle, triviality_finite, triviality_qz,
    z2_class_representatives, Certificate, Cochain, CochainFn, ImagePreimage, ImageSolver,
    IntCoeff, LazyCochain, ModuleCochain, QZCochain, QZCoeff, Status, TrivialityVerdict, TupleCode,
};
use crate::error::{Error, Result};
use crate::fermion::{ActionAxiom, BosonicActionData};
use crate::group::{FinGroup, GModule, ModuleHom, ShortExactSeq};
use crate::linalg::Smith;
use crate::lyndon::{
    alt_alt, component_class, component_value, ComponentClass, LazyNormalized, ProductSplit,
};
use crate::qz::QZ;
use crate::supergroup::z2_trivial;

/// Default bound on `(|G| − 1)⁴` for dense `O₄` tables.
pub const DENSE_CAP: u128 = 1_000_000;

/// `Â = Hom(A, ℚ/ℤ)` for a `G`-module `A`, with `(g·χ)(a) = χ(g⁻¹_* a)`.
///
/// Characters are indexed like the elements of `A`: the tuple `t` is the character
/// `a ↦ Σ t_i a_i / d_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualModule {
    source: Arc<GModule>,
    dual: Arc<GModule>,
}

impl DualModule {
    pub fn new(source: Arc<GModule>) -> Result<Self> {
        let a = source.module().clone();
        let factors = a
            .factors()
            .ok_or_else(|| Error::InvalidModule("A needs an abelian presentation".into()))?;
        let dual_group = Arc::new(FinGroup::from_invariants(factors)?);
        let g = source.group().clone();
        let mut partial = DualModule {
            dual: Arc::new(GModule::new_unchecked(
                g.clone(),
                dual_group.clone(),
                vec![dual_group.elements().collect(); g.order()],
            )?),
            source: source.clone(),
        };
        let mut action = Vec::with_capacity(g.order());
        for x in g.elements() {
            let xi = g.inv(x);
            let row: Option<Vec<usize>> = dual_group
                .elements()
                .map(|chi| {
                    let values: Vec<QZ> = a
                        .elements()
                        .map(|p| partial.eval(chi, source.act(xi, p)))
                        .collect();
                    partial.character_of(&values)
                })
                .collect();
            action.push(row.ok_or_else(|| {
                Error::InvalidModule("the action does not preserve characters".into())
            })?);
        }
        partial.dual = Arc::new(GModule::new(g, dual_group, action)?);
        Ok(partial)
    }

    pub fn source(&self) -> &Arc<GModule> {
        &self.source
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.dual
    }

    pub fn eval(&self, chi: usize, a: usize) -> QZ {
        let t = self.dual.module().tuple(chi);
        let x = self.source.module().tuple(a);
        self.source
            .factors()
            .iter()
            .zip(t.iter().zip(&x))
            .map(|(&d, (&ti, &xi))| QZ::new((ti * xi) as i64, d as i64))
            .sum()
    }

    pub fn values(&self, chi: usize) -> Vec<QZ> {
        self.source
            .module()
            .elements()
            .map(|a| self.eval(chi, a))
            .collect()
    }

    /// The character with the given values on the elements of `A`, if there is one.
    pub fn character_of(&self, values: &[QZ]) -> Option<usize> {
        let a = self.source.module();
        if values.len() != a.order() {
            return None;
        }
        let mut t = Vec::new();
        for (e, &d) in a.generators().into_iter().zip(self.source.factors()) {
            let v = values[e].scale_i64(d as i64);
            if !v.is_zero() {
                return None;
            }
            let (num, den) = values[e].lift();
            let ti = (num * BigInt::from(d)).div_floor(&den);
            t.push(ti.to_i64()?);
        }
        let chi = self.dual.module().index_of(&t);
        (self.values(chi) == values).then_some(chi)
    }
}

/// A 2-cocycle `μ: G² → A` for the action of `G` on `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistCocycle {
    mu: ModuleCochain,
}

impl TwistCocycle {
    pub fn new(mu: ModuleCochain) -> Result<Self> {
        if mu.degree() != 2 {
            return Err(Error::Input("μ is a 2-cochain".into()));
        }
        if let Some(t) = is_cocycle(&mu).violation {
            return Err(Error::NotCocycle { tuple: t });
        }
        Ok(TwistCocycle { mu })
    }

    pub fn from_fn(module: Arc<GModule>, f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        TwistCocycle::new(Cochain::from_fn(module.group().clone(), module, 2, f)?)
    }

    pub fn zero(module: Arc<GModule>) -> Result<Self> {
        TwistCocycle::new(Cochain::zero(module.group().clone(), module, 2)?)
    }

    pub fn module(&self) -> &Arc<GModule> {
        self.mu.coeff()
    }

    pub fn cochain(&self) -> &ModuleCochain {
        &self.mu
    }

    pub fn get(&self, g: usize, h: usize) -> usize {
        self.mu.get(&[g, h])
    }

    /// `μ + ∂ν` for a 1-cochain `ν: G → A`.
    pub fn shifted(&self, nu: &ModuleCochain) -> Result<Self> {
        TwistCocycle::new(self.mu.plus(&crate::cochain::coboundary(nu)?))
    }
}

fn require_non_degenerate(ac: &AbelianCocycle) -> Result<()> {
    if ac.is_non_degenerate()? {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "the braiding is degenerate; Müger center {:?}",
            ac.mueger_center()?
        )))
    }
}

fn check_twist_target(ac: &AbelianCocycle, mu: &TwistCocycle) -> Result<()> {
    if mu.module().module().as_ref() != ac.group().as_ref() {
        return Err(Error::GroupMismatch(
            "μ takes values outside the group of the abelian cocycle".into(),
        ));
    }
    Ok(())
}

/// `O₄` of `(ω, c)` and `μ` with the identity action:
/// `c(μ₁₂, μ₃₄) + ω(μ₃₄, μ₁₂, μ₁₂,₃₄) − ω(μ₃₄, μ₂,₃₄, μ₁,₂₃₄) + ω(μ₂₃, μ₂₃,₄, μ₁,₂₃₄)
///  − ω(μ₂₃, μ₁,₂₃, μ₁₂₃,₄) + ω(μ₁₂, μ₁₂,₃, μ₁₂₃,₄) − ω(μ₁₂, μ₃₄, μ₁₂,₃₄)`.
pub fn o4_twisted_identity(ac: &AbelianCocycle, mu: &TwistCocycle) -> Result<LazyCochain<QZCoeff>> {
    require_non_degenerate(ac)?;
    check_twist_target(ac, mu)?;
    if !mu.module().is_trivial() {
        return Err(Error::Precondition(
            "the twisted-identity formula needs the trivial action".into(),
        ));
    }
    let (ac, mu) = (ac.clone(), mu.clone());
    let g = mu.module().group().clone();
    let gg = g.clone();
    LazyCochain::new(g, QZCoeff::trivial(), 4, move |t| {
        let (g1, g2, g3, g4) = (t[0], t[1], t[2], t[3]);
        let m = |x, y| mu.get(x, y);
        let (g12, g23, g34) = (gg.mul(g1, g2), gg.mul(g2, g3), gg.mul(g3, g4));
        let (m12, m34, m23) = (m(g1, g2), m(g3, g4), m(g2, g3));
        let m12_34 = m(g12, g34);
        let m2_34 = m(g2, g34);
        let m1_234 = m(g1, gg.mul(g2, g34));
        let m23_4 = m(g23, g4);
        let m1_23 = m(g1, g23);
        let m123_4 = m(gg.mul(g12, g3), g4);
        let m12_3 = m(g12, g3);
        let w = |x, y, z| ac.omega(x, y, z);
        ac.c(m12, m34) + w(m34, m12, m12_34) - w(m34, m2_34, m1_234) + w(m23, m23_4, m1_234)
            - w(m23, m1_23, m123_4)
            + w(m12, m12_3, m123_4)
            - w(m12, m34, m12_34)
    })
}

/// `O₄` of a bosonic action `(*, ψ, φ)` on `(ω, c)` and a twisted cocycle `μ`, with
/// `ψ^g = μ_action(g; ·, ·)` and `φ_{g,h} = γ(g, h; ·)`:
/// `c(μ₁₂, (g₁g₂)_*μ₃₄) + ω((g₁g₂)_*μ₃₄, μ₁₂, μ₁₂,₃₄) − ω((g₁g₂)_*μ₃₄, (g₁)_*μ₂,₃₄, μ₁,₂₃₄)
///  + ω((g₁)_*μ₂₃, (g₁)_*μ₂₃,₄, μ₁,₂₃₄) − ω((g₁)_*μ₂₃, μ₁,₂₃, μ₁₂₃,₄) + ω(μ₁₂, μ₁₂,₃, μ₁₂₃,₄)
///  − ω(μ₁₂, (g₁g₂)_*μ₃₄, μ₁₂,₃₄) + φ_{g₁,g₂}(μ₃₄) − ψ^{g₁}((g₂)_*μ₃₄, μ₂,₃₄) + ψ^{g₁}(μ₂₃, μ₂₃,₄)`.
pub fn o4_general(
    data: &BosonicActionData,
    ac: &AbelianCocycle,
    mu: &TwistCocycle,
) -> Result<LazyCochain<QZCoeff>> {
    require_non_degenerate(ac)?;
    check_twist_target(ac, mu)?;
    data.require_valid()?;
    if data.target().omega_cochain() != ac.omega_cochain() {
        return Err(Error::Input(
            "the action and the abelian cocycle carry different associators".into(),
        ));
    }
    if mu.module().group().as_ref() != data.group().as_ref()
        || mu.module().action_table() != data.star_table()
    {
        return Err(Error::Input(
            "μ must be a cocycle for the action of the bosonic data".into(),
        ));
    }
    let (ac, mu, data) = (ac.clone(), mu.clone(), data.clone());
    let g = data.group().clone();
    let gg = g.clone();
    LazyCochain::new(g, QZCoeff::trivial(), 4, move |t| {
        let (g1, g2, g3, g4) = (t[0], t[1], t[2], t[3]);
        let m = |x, y| mu.get(x, y);
        let s = |x, a| data.star(x, a);
        let (g12, g23, g34) = (gg.mul(g1, g2), gg.mul(g2, g3), gg.mul(g3, g4));
        let (m12, m34, m23) = (m(g1, g2), m(g3, g4), m(g2, g3));
        let m12_34 = m(g12, g34);
        let m2_34 = m(g2, g34);
        let m1_234 = m(g1, gg.mul(g2, g34));
        let m23_4 = m(g23, g4);
        let m1_23 = m(g1, g23);
        let m123_4 = m(gg.mul(g12, g3), g4);
        let m12_3 = m(g12, g3);
        let s34 = s(g12, m34);
        let w = |x, y, z| ac.omega(x, y, z);
        ac.c(m12, s34) + w(s34, m12, m12_34) - w(s34, s(g1, m2_34), m1_234)
            + w(s(g1, m23), s(g1, m23_4), m1_234)
            - w(s(g1, m23), m1_23, m123_4)
            + w(m12, m12_3, m123_4)
            - w(m12, s34, m12_34)
            + data.gamma(g1, g2, m34)
            - data.mu(g1, s(g2, m34), m2_34)
            + data.mu(g1, m23, m23_4)
    })
}

/// `(|G| − 1)⁴`, the size of a dense normalized 4-cochain.
pub fn dense_entries(group: &FinGroup) -> u128 {
    TupleCode::new(group.order(), 4).count_u128()
}

fn dense_hint() -> String {
    "use the filtration (Lyndon P_k) or Alt certificate strategies".into()
}

/// Tabulates a pointwise 4-cochain, refusing above `cap` entries.
pub fn o4_table(o4: &LazyCochain<QZCoeff>, cap: u128) -> Result<QZCochain> {
    let entries = dense_entries(o4.group());
    if entries > cap {
        return Err(Error::TooLarge {
            entries,
            cap,
            hint: dense_hint(),
        });
    }
    Cochain::materialize(o4)
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnomalyStrategy {
    Dense {
        cap: u128,
    },
    Filtration {
        split: ProductSplit,
        k: usize,
    },
    Alt {
        split: ProductSplit,
        a: [usize; 2],
        b: [usize; 2],
        samples: usize,
    },
}

impl AnomalyStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            AnomalyStrategy::Dense { .. } => "dense",
            AnomalyStrategy::Filtration { .. } => "filtration",
            AnomalyStrategy::Alt { .. } => "alt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnomalyStatus {
    Trivial,
    Nontrivial,
    /// The certificate vanished, which does not decide the class.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnomalyCertificate {
    Dense {
        certificate: Certificate,
        entries: usize,
        /// Nonzero entries of a 3-cochain `p` with `∂p = O₄`, when trivial.
        witness_support: Option<usize>,
    },
    Filtration {
        class: ComponentClass,
    },
    Alt {
        a: [usize; 2],
        b: [usize; 2],
        value: QZ,
        /// Random tuples in bidegrees `(0, 4)` and `(1, 3)` at which the normal form was evaluated.
        lower_samples: usize,
        lower_nonzero: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnomalyReport {
    pub strategy: String,
    pub status: AnomalyStatus,
    pub certificate: AnomalyCertificate,
}

/// Decides or certifies the class of a 4-cocycle.
pub fn anomaly_verdict(
    o4: &LazyCochain<QZCoeff>,
    strategy: &AnomalyStrategy,
) -> Result<AnomalyReport> {
    let (status, certificate) = match strategy {
        AnomalyStrategy::Dense { cap } => {
            let table = o4_table(o4, *cap)?;
            let v = triviality_qz(&table)?;
            let status = if v.is_trivial() {
                AnomalyStatus::Trivial
            } else {
                AnomalyStatus::Nontrivial
            };
            (
                status,
                AnomalyCertificate::Dense {
                    entries: table.len(),
                    witness_support: v.witness.as_ref().map(|w| w.support().len()),
                    certificate: v.certificate,
                },
            )
        }
        AnomalyStrategy::Filtration { split, k } => {
            let lazy = LazyNormalized::new(Arc::new(o4.clone()), split)?;
            let class = component_class(&lazy, split, *k)?;
            let status = match class.status {
                Status::Nontrivial => AnomalyStatus::Nontrivial,
                Status::Trivial => AnomalyStatus::Inconclusive,
            };
            (status, AnomalyCertificate::Filtration { class })
        }
        AnomalyStrategy::Alt {
            split,
            a,
            b,
            samples,
        } => {
            let lazy = LazyNormalized::new(Arc::new(o4.clone()), split)?;
            let value = alt_alt(&lazy, split, *a, *b)?;
            let lower_nonzero = sample_lower_components(&lazy, split, *samples);
            let status = if !value.is_zero() && lower_nonzero == 0 {
                AnomalyStatus::Nontrivial
            } else {
                AnomalyStatus::Inconclusive
            };
            (
                status,
                AnomalyCertificate::Alt {
                    a: *a,
                    b: *b,
                    value,
                    lower_samples: *samples,
                    lower_nonzero,
                },
            )
        }
    };
    Ok(AnomalyReport {
        strategy: strategy.name().into(),
        status,
        certificate,
    })
}

fn sample_lower_components(
    f: &LazyNormalized<QZCoeff>,
    split: &ProductSplit,
    samples: usize,
) -> usize {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let (na, nb) = (split.a().order(), split.b().order());
    let mut bad = 0;
    for i in 0..samples {
        let p = i % 2;
        let a: Vec<usize> = (0..p).map(|_| rng.gen_range(0..na)).collect();
        let b: Vec<usize> = (0..4 - p).map(|_| rng.gen_range(0..nb)).collect();
        if !component_value(f, split, &a, &b).is_zero() {
            bad += 1;
        }
    }
    bad
}

/// `O₃` of a bosonic action whose `γ` is replaced by a candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct O3Pointed {
    /// Pairs `(g, h)` at which the candidate was adjusted to satisfy the composition axiom.
    pub completed_pairs: Vec<(usize, usize)>,
    pub completed_gamma: Vec<QZ>,
    pub dual: DualModule,
    /// The coherence defect as a 3-cochain `G³ → Â`.
    pub obstruction: ModuleCochain,
    pub verdict: TrivialityVerdict<Arc<GModule>>,
    /// When the class vanishes, the action with the corrected `γ`.
    pub repaired: Option<BosonicActionData>,
}

impl O3Pointed {
    pub fn is_zero(&self) -> bool {
        self.obstruction.is_zero()
    }
}

fn gamma_index(n: usize, m: usize, g: usize, h: usize, a: usize) -> usize {
    (g * n + h) * m + a
}

/// Deviation of `candidate_gamma` from the coherence axiom,
/// `D(g,h,l)(a) = γ(h,l;a) + γ(g,hl;a) − γ(gh,l;a) − γ(g,h;l_*a)`, read as the cochain
/// `(x₁, x₂, x₃) ↦ D(x₃⁻¹, x₂⁻¹, x₁⁻¹)` valued in `Â`.
///
/// A candidate failing the composition axiom is first corrected pair by pair.
pub fn o3_pointed(data: &BosonicActionData, candidate_gamma: &[QZ]) -> Result<O3Pointed> {
    let trial = data.with_gamma(candidate_gamma.to_vec())?;
    let report = trial.verify();
    for axiom in [ActionAxiom::Star, ActionAxiom::Associator] {
        if report.violations(axiom) > 0 {
            return Err(Error::Precondition(format!(
                "the data fails the {axiom:?} axiom"
            )));
        }
    }
    if report.violations(ActionAxiom::Normalization) > 0 {
        return Err(Error::Input(
            "μ and the candidate γ must be normalized".into(),
        ));
    }
    let g = data.group().clone();
    let a = data.target_group().clone();
    let (n, m) = (g.order(), a.order());
    let mut gamma = candidate_gamma.to_vec();
    let mut completed_pairs = Vec::new();
    let delta = coboundary_matrix(&a, &IntCoeff, 1)?;
    let smith = Smith::new(&delta);
    let rows = TupleCode::new(m, 2);
    for x in g.elements().skip(1) {
        for y in g.elements().skip(1) {
            let defect: Vec<QZ> = (0..rows.count().unwrap_or(0))
                .map(|o| {
                    let t = rows.decode(o);
                    let (p, q) = (t[0], t[1]);
                    let lhs = data.mu(x, data.star(y, p), data.star(y, q)) + data.mu(y, p, q)
                        - data.mu(g.mul(x, y), p, q);
                    let gm = |c: usize| gamma[gamma_index(n, m, x, y, c)].clone();
                    let rhs = gm(a.mul(p, q)) - gm(p) - gm(q);
                    rhs - lhs
                })
                .collect();
            if defect.iter().all(QZ::is_zero) {
                continue;
            }
            let d = smith.solve_qz(&defect)?.ok_or_else(|| {
                Error::Precondition(format!("no γ({x},{y};·) satisfies the composition axiom"))
            })?;
            for (c, v) in d.into_iter().enumerate() {
                let i = gamma_index(n, m, x, y, c + 1);
                gamma[i] = &gamma[i] + &v;
            }
            completed_pairs.push((x, y));
        }
    }
    let completed = data.with_gamma(gamma.clone())?;
    debug_assert_eq!(completed.verify().violations(ActionAxiom::Composition), 0);

    let dual = DualModule::new(data.star_module()?)?;
    let mut bad = None;
    let obstruction = Cochain::from_fn(g.clone(), dual.module().clone(), 3, |t| {
        let (x, y, z) = (g.inv(t[2]), g.inv(t[1]), g.inv(t[0]));
        let values: Vec<QZ> = a
            .elements()
            .map(|p| {
                completed.gamma(y, z, p) + completed.gamma(x, g.mul(y, z), p)
                    - completed.gamma(g.mul(x, y), z, p)
                    - completed.gamma(x, y, data.star(z, p))
            })
            .collect();
        dual.character_of(&values).unwrap_or_else(|| {
            bad.get_or_insert(t.to_vec());
            0
        })
    })?;
    if let Some(t) = bad {
        return Err(Error::Precondition(format!(
            "the coherence defect at {t:?} is not a character"
        )));
    }
    let verdict = triviality_finite(&obstruction)?;
    let repaired = match &verdict.witness {
        None => None,
        Some(w) => {
            let fixed = completed.with_gamma_fn(|x, y, p| {
                completed.gamma(x, y, p) + dual.eval(w.get(&[g.inv(y), g.inv(x)]), p)
            })?;
            if !fixed.verify().valid {
                return Err(Error::Precondition(
                    "the corrected γ fails the action axioms".into(),
                ));
            }
            Some(fixed)
        }
    };
    Ok(O3Pointed {
        completed_pairs,
        completed_gamma: gamma,
        dual,
        obstruction,
        verdict,
        repaired,
    })
}

/// The fermion data of a `G`-module `A`: the dual `Â`, the restriction `r(χ) = 2χ(f)` onto
/// `ℤ/2`, and when `r ≠ 0` the sequence `0 → Ker r → Â → ℤ/2 → 0`.
#[derive(Clone, Debug)]
pub struct FermionModule {
    pub dual: DualModule,
    pub fermion: usize,
    pub restriction: ModuleHom,
    pub ses: Option<ShortExactSeq>,
}

#[derive(Clone, Debug)]
pub enum Restriction {
    Trivial,
    Nontrivial(ShortExactSeq),
}

impl FermionModule {
    pub fn new(module: Arc<GModule>, f: usize) -> Result<Self> {
        let a = module.module().clone();
        if f >= a.order() || a.element_order(f) != 2 {
            return Err(Error::Input(format!("the fermion {f} is not of order two")));
        }
        if module.group().elements().any(|g| module.act(g, f) != f) {
            return Err(Error::Precondition("the action moves the fermion".into()));
        }
        let dual = DualModule::new(module)?;
        let z2 = z2_trivial(dual.module().group())?;
        let images: Vec<usize> = dual
            .module()
            .module()
            .elements()
            .map(|chi| if dual.eval(chi, f).is_zero() { 0 } else { 1 })
            .collect();
        let restriction = ModuleHom::new(dual.module().clone(), z2, images)?;
        let ses = if restriction.is_zero() {
            None
        } else {
            Some(kernel_sequence(&restriction)?)
        };
        Ok(FermionModule {
            dual,
            fermion: f,
            restriction,
            ses,
        })
    }

    pub fn restriction_data(&self) -> Restriction {
        match &self.ses {
            None => Restriction::Trivial,
            Some(s) => Restriction::Nontrivial(s.clone()),
        }
    }
}

fn kernel_sequence(r: &ModuleHom) -> Result<ShortExactSeq> {
    let src = r.source();
    let kernel = r.kernel();
    let k = kernel.len() as u64;
    let gen = kernel
        .iter()
        .copied()
        .find(|&x| src.module().element_order(x) as u64 == k)
        .ok_or_else(|| Error::Unsupported("the kernel of r is not cyclic".into()))?;
    let c = Arc::new(FinGroup::cyclic(k)?);
    let mut powers = vec![0; k as usize];
    for i in 1..k as usize {
        powers[i] = src.module().mul(powers[i - 1], gen);
    }
    let action = src
        .group()
        .elements()
        .map(|g| {
            (0..k as usize)
                .map(|i| {
                    let y = src.act(g, powers[i]);
                    powers
                        .iter()
                        .position(|&p| p == y)
                        .expect("the kernel is a submodule")
                })
                .collect()
        })
        .collect();
    let sub = Arc::new(GModule::new(src.group().clone(), c, action)?);
    let inclusion = ModuleHom::new(sub, src.clone(), powers)?;
    ShortExactSeq::new(inclusion, r.clone(), None)
}

/// `O₃(ρ̃, α)`: the class of `θ − α`, or its image under the connecting map when `r ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct O3Fermionic {
    pub difference: ModuleCochain,
    pub branch: O3Branch,
    pub obstruction: ModuleCochain,
    pub verdict: TrivialityVerdict<Arc<GModule>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum O3Branch {
    /// `r = 0`; the obstruction lives in `H²(G, ℤ/2)`.
    Restriction,
    /// `r ≠ 0`; the obstruction is `d₂(θ − α) ∈ H³(G, Ker r)`.
    Connecting,
}

impl O3Fermionic {
    pub fn vanishes(&self) -> bool {
        self.verdict.is_trivial()
    }
}

fn require_z2_cocycle(f: &ModuleCochain, name: &str) -> Result<()> {
    let m = f.coeff();
    if f.degree() != 2 || m.module().order() != 2 || !m.is_trivial() {
        return Err(Error::Input(format!(
            "{name} must be a 2-cochain with values in the trivial module ℤ/2"
        )));
    }
    if let Some(t) = is_cocycle(f).violation {
        return Err(Error::NotCocycle { tuple: t });
    }
    Ok(())
}

pub fn o3_fermionic(
    theta: &ModuleCochain,
    alpha: &ModuleCochain,
    r: &Restriction,
) -> Result<O3Fermionic> {
    require_z2_cocycle(theta, "θ")?;
    require_z2_cocycle(alpha, "α")?;
    if theta.coeff() != alpha.coeff() {
        return Err(Error::GroupMismatch(
            "θ and α live on different groups".into(),
        ));
    }
    let difference = theta.minus(alpha);
    let (branch, obstruction) = match r {
        Restriction::Trivial => (O3Branch::Restriction, difference.clone()),
        Restriction::Nontrivial(ses) => {
            if ses.quotient() != difference.coeff() {
                return Err(Error::InvalidModule(
                    "the sequence does not end in the trivial module ℤ/2 over G".into(),
                ));
            }
            (O3Branch::Connecting, connecting_map(ses, &difference)?)
        }
    };
    let verdict = triviality_finite(&obstruction)?;
    Ok(O3Fermionic {
        difference,
        branch,
        obstruction,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftingVerdict {
    pub exists: bool,
    /// `τ` with `r_*(τ) − ∂q = θ − α`, when it exists.
    pub preimage: Option<ImagePreimage>,
}

/// Whether `θ − α` lies in the image of `r_*: H²(G, Â) → H²(G, ℤ/2)`.
pub fn alpha_lifting_exists(
    theta: &ModuleCochain,
    alpha: &ModuleCochain,
    r: &ModuleHom,
) -> Result<LiftingVerdict> {
    require_z2_cocycle(theta, "θ")?;
    require_z2_cocycle(alpha, "α")?;
    let preimage = ImageSolver::new(r.clone(), 2)?.solve(&theta.minus(alpha))?;
    Ok(LiftingVerdict {
        exists: preimage.is_some(),
        preimage,
    })
}

/// The decision procedure for fermionic actions on a module with a fermion.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionicClassification {
    pub obstruction: O3Fermionic,
    pub lifting: LiftingVerdict,
    pub h2_dual: Vec<BigInt>,
    pub image_order: BigInt,
    /// `|ker r_*|`, the number of `α`-liftings up to equivalence, when one exists.
    pub torsor_order: Option<BigInt>,
}

impl FermionicClassification {
    pub fn exists(&self) -> bool {
        self.obstruction.vanishes()
    }
}

fn order_of(invariants: &[BigInt]) -> Result<BigInt> {
    if invariants.iter().any(Zero::is_zero) {
        return Err(Error::Precondition(
            "cohomology of a finite group came out infinite".into(),
        ));
    }
    Ok(invariants.iter().fold(BigInt::one(), |acc, d| acc * d))
}

/// `|im(r_*: H²(G, Â) → H²(G, ℤ/2))|`, counted over one cocycle per class.
pub fn restriction_image_order(r: &ModuleHom) -> Result<BigInt> {
    let classes = z2_class_representatives(r.target(), 2)?;
    let solver = ImageSolver::new(r.clone(), 2)?;
    let mut hits = 0u64;
    for c in &classes {
        if solver.solve(c)?.is_some() {
            hits += 1;
        }
    }
    Ok(BigInt::from(hits))
}

pub fn classify_fermionic_actions(
    module: &FermionModule,
    theta: &ModuleCochain,
    alpha: &ModuleCochain,
) -> Result<FermionicClassification> {
    let obstruction = o3_fermionic(theta, alpha, &module.restriction_data())?;
    let lifting = alpha_lifting_exists(theta, alpha, &module.restriction)?;
    let h2_dual = cohomology_invariants(module.dual.module(), 2)?;
    let image_order = restriction_image_order(&module.restriction)?;
    let torsor_order = if obstruction.vanishes() {
        Some(order_of(&h2_dual)? / &image_order)
    } else {
        None
    };
    Ok(FermionicClassification {
        obstruction,
        lifting,
        h2_dual,
        image_order,
        torsor_order,
    })
}

/// `β ▷ ρ̃`: the action with `γ(g, h; a)` replaced by `γ(g, h; a) + β(h⁻¹, g⁻¹)(a)` for a
/// cocycle `β: G² → Â`.
pub fn shift_action(
    data: &BosonicActionData,
    dual: &DualModule,
    beta: &ModuleCochain,
) -> Result<BosonicActionData> {
    if beta.coeff() != dual.module() || beta.degree() != 2 {
        return Err(Error::Input(
            "β must be a 2-cochain with values in Â".into(),
        ));
    }
    if dual.source().action_table() != data.star_table() {
        return Err(Error::Input(
            "Â is not the dual of the acted-on group".into(),
        ));
    }
    if let Some(t) = is_cocycle(beta).violation {
        return Err(Error::NotCocycle { tuple: t });
    }
    let g = data.group().clone();
    data.with_gamma_fn(|x, y, p| {
        data.gamma(x, y, p) + dual.eval(beta.get(&[g.inv(y), g.inv(x)]), p)
    })
}

/// `(g, h) ↦ r(β(h⁻¹, g⁻¹))`, the change in `θ` caused by [`shift_action`].
pub fn theta_shift(r: &ModuleHom, beta: &ModuleCochain) -> Result<ModuleCochain> {
    let g = beta.group().clone();
    Cochain::from_fn(g.clone(), r.target().clone(), 2, |t| {
        r.apply(beta.get(&[g.inv(t[1]), g.inv(t[0])]))
    })
}
