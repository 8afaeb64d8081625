//! JSON descriptors for groups, modules, cochains, braided data and actions.
//!
//! Every emitted document goes through [`canonical_json`], which sorts object keys, so
//! re-parsing and re-emitting is byte-stable. Rational values are `{"den", "num"}` records
//! in lowest terms; finite-module values are element indices.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::braided::{rank_four_family, AbelianCocycle, PointedData, RankFourVariant};
use crate::cochain::{Cochain, Coefficients, ModuleCochain, QZCochain, QZCoeff};
use crate::error::{Error, Result};
use crate::fermion::{builtin_action, BosonicActionData, BuiltinAction, ConditionC, Fermion};
use crate::group::{FinGroup, GModule, GroupHom};
use crate::lyndon::SplitSpec;
use crate::obstruct::TwistCocycle;
use crate::qz::QZ;
use crate::supergroup::z2_trivial;

/// A sparse table keyed by `"i1|i2|…"`; absent keys are zero.
pub type Table<V> = BTreeMap<String, V>;

/// Serializes with sorted keys and a trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Input(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Hex SHA-256 of the compact canonical form.
pub fn input_hash<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Input(e.to_string()))?;
    let s = serde_json::to_string(&v).map_err(|e| Error::Input(e.to_string()))?;
    Ok(hex::encode(Sha256::digest(s.as_bytes())))
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

pub fn read_json<T: DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_json(&text)
}

pub fn format_key(t: &[usize]) -> String {
    t.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("|")
}

/// Parses `"i1|…|in"`, checking arity and that each index is below its bound.
pub fn parse_key(key: &str, bounds: &[usize]) -> Result<Vec<usize>> {
    let parts: Vec<&str> = if key.is_empty() {
        vec![]
    } else {
        key.split('|').collect()
    };
    if parts.len() != bounds.len() {
        return Err(Error::Input(format!(
            "key {key:?} should have {} entries",
            bounds.len()
        )));
    }
    parts
        .iter()
        .zip(bounds)
        .map(|(p, &b)| match p.trim().parse::<usize>() {
            Ok(i) if i < b => Ok(i),
            _ => Err(Error::Input(format!("bad index {p:?} in key {key:?}"))),
        })
        .collect()
}

fn dense_from_table<V: Clone>(table: &Table<V>, bounds: &[usize], zero: V) -> Result<Vec<V>> {
    let mut out = vec![zero; bounds.iter().product()];
    for (k, v) in table {
        let t = parse_key(k, bounds)?;
        let i = t.iter().zip(bounds).fold(0, |acc, (&x, &b)| acc * b + x);
        out[i] = v.clone();
    }
    Ok(out)
}

fn sparse_from_dense(values: &[QZ], bounds: &[usize]) -> Table<QZ> {
    let mut out = Table::new();
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let mut t = vec![0; bounds.len()];
        let mut r = i;
        for (slot, &b) in t.iter_mut().zip(bounds).rev() {
            *slot = r % b;
            r /= b;
        }
        out.insert(format_key(&t), v.clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Invariants { invariants: Vec<u64> },
    Table { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn invariants(factors: &[u64]) -> Self {
        GroupSpec::Invariants {
            invariants: factors.to_vec(),
        }
    }

    pub fn build(&self) -> Result<Arc<FinGroup>> {
        Ok(Arc::new(match self {
            GroupSpec::Invariants { invariants } => FinGroup::from_invariants(invariants)?,
            GroupSpec::Table { table } => FinGroup::from_table(table.clone())?,
        }))
    }

    pub fn describe(g: &FinGroup) -> Self {
        match g.factors() {
            Some(f) => GroupSpec::invariants(f),
            None => GroupSpec::Table {
                table: g.table_rows(),
            },
        }
    }
}

/// A finite abelian group with, per acting element, the images of its generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub invariants: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<usize>>>,
}

impl ModuleSpec {
    pub fn build(&self, group: &Arc<FinGroup>) -> Result<Arc<GModule>> {
        let m = Arc::new(FinGroup::from_invariants(&self.invariants)?);
        Ok(Arc::new(match &self.action {
            None => GModule::trivial(group.clone(), m)?,
            Some(images) => GModule::from_generator_images(group.clone(), m, images)?,
        }))
    }

    pub fn describe(m: &GModule) -> Self {
        let gens = m.module().generators();
        ModuleSpec {
            invariants: m.factors().to_vec(),
            action: (!m.is_trivial()).then(|| {
                m.group()
                    .elements()
                    .map(|g| gens.iter().map(|&x| m.act(g, x)).collect())
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSpec {
    Qz {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signs: Option<Vec<bool>>,
    },
    Finite(ModuleSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub group: GroupSpec,
    pub module: CoefficientSpec,
    pub degree: usize,
    #[serde(default)]
    pub values: Table<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoadedCochain {
    Qz(QZCochain),
    Finite(ModuleCochain),
}

impl LoadedCochain {
    pub fn degree(&self) -> usize {
        match self {
            LoadedCochain::Qz(c) => c.degree(),
            LoadedCochain::Finite(c) => c.degree(),
        }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        match self {
            LoadedCochain::Qz(c) => c.group(),
            LoadedCochain::Finite(c) => c.group(),
        }
    }
}

fn fill_cochain<C: Coefficients>(
    group: Arc<FinGroup>,
    coeff: C,
    degree: usize,
    values: &Table<Value>,
    parse: impl Fn(&Value) -> Result<C::Value>,
) -> Result<Cochain<C>> {
    let bounds = vec![group.order(); degree];
    let mut c = Cochain::zero(group, coeff, degree)?;
    for (k, v) in values {
        let t = parse_key(k, &bounds)?;
        if t.contains(&0) {
            return Err(Error::Input(format!("key {k:?} contains the identity")));
        }
        c.set(&t, parse(v)?)?;
    }
    Ok(c)
}

impl CochainFile {
    pub fn load(&self) -> Result<LoadedCochain> {
        let g = self.group.build()?;
        match &self.module {
            CoefficientSpec::Qz { signs } => {
                let coeff = match signs {
                    None => QZCoeff::trivial(),
                    Some(s) if s.len() == g.order() => QZCoeff::with_signs(s.clone()),
                    Some(_) => {
                        return Err(Error::Input("one sign per group element expected".into()))
                    }
                };
                let parse = |v: &Value| {
                    QZ::deserialize(v).map_err(|e| Error::Input(format!("bad ℚ/ℤ value: {e}")))
                };
                Ok(LoadedCochain::Qz(fill_cochain(
                    g,
                    coeff,
                    self.degree,
                    &self.values,
                    parse,
                )?))
            }
            CoefficientSpec::Finite(spec) => {
                let m = spec.build(&g)?;
                let order = m.module().order();
                let parse = |v: &Value| match v.as_u64() {
                    Some(i) if (i as usize) < order => Ok(i as usize),
                    _ => Err(Error::Input(format!("bad module element {v}"))),
                };
                Ok(LoadedCochain::Finite(fill_cochain(
                    g,
                    m,
                    self.degree,
                    &self.values,
                    parse,
                )?))
            }
        }
    }

    pub fn from_qz(c: &QZCochain) -> Self {
        CochainFile {
            group: GroupSpec::describe(c.group()),
            module: CoefficientSpec::Qz {
                signs: c
                    .coeff()
                    .signs()
                    .filter(|s| s.iter().any(|&f| f))
                    .map(|s| s.to_vec()),
            },
            degree: c.degree(),
            values: c
                .support()
                .into_iter()
                .map(|(t, v)| {
                    (
                        format_key(&t),
                        serde_json::to_value(v).expect("QZ serializes"),
                    )
                })
                .collect(),
        }
    }

    pub fn from_module(c: &ModuleCochain) -> Self {
        CochainFile {
            group: GroupSpec::describe(c.group()),
            module: CoefficientSpec::Finite(ModuleSpec::describe(c.coeff())),
            degree: c.degree(),
            values: c
                .support()
                .into_iter()
                .map(|(t, v)| (format_key(&t), Value::from(v)))
                .collect(),
        }
    }

    pub fn from_loaded(c: &LoadedCochain) -> Self {
        match c {
            LoadedCochain::Qz(c) => CochainFile::from_qz(c),
            LoadedCochain::Finite(c) => CochainFile::from_module(c),
        }
    }
}

/// A ℤ/2-valued 2-cochain on `group`, read from a sparse `"g|h": 0 or 1` table.
pub fn z2_cochain(group: &Arc<FinGroup>, table: &Table<u8>) -> Result<ModuleCochain> {
    let z2 = z2_trivial(group)?;
    let values = table
        .iter()
        .map(|(k, v)| (k.clone(), Value::from(*v)))
        .collect();
    let parse = |v: &Value| match v.as_u64() {
        Some(i @ 0..=1) => Ok(i as usize),
        _ => Err(Error::Input(format!("ℤ/2 values are 0 or 1, got {v}"))),
    };
    fill_cochain(group.clone(), z2, 2, &values, parse)
}

pub fn z2_table(c: &ModuleCochain) -> Table<u8> {
    c.support()
        .into_iter()
        .map(|(t, v)| (format_key(&t), v as u8))
        .collect()
}

/// An abelian 3-cocycle `(ω, c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AbelianSpec {
    /// A rank-four family by variant name (`klein_four` or `cyclic4`) and parameter.
    Family { family: String, k: QZ },
    /// `ℤ/m` with `ω = 0` and `c(x, y) = xy/m`.
    Bicharacter { bicharacter: u64 },
    /// Sparse tables `"x|y|z"` and `"x|y"`.
    Tables {
        group: GroupSpec,
        #[serde(default)]
        omega: Table<QZ>,
        #[serde(default)]
        c: Table<QZ>,
    },
}

impl AbelianSpec {
    pub fn family(variant: RankFourVariant, k: QZ) -> Self {
        AbelianSpec::Family {
            family: match variant {
                RankFourVariant::KleinFour => "klein_four".into(),
                RankFourVariant::Cyclic4 => "cyclic4".into(),
            },
            k,
        }
    }

    pub fn build(&self) -> Result<AbelianCocycle> {
        match self {
            AbelianSpec::Family { family, k } => {
                let v: RankFourVariant = family.parse().map_err(Error::Input)?;
                Ok(rank_four_family(v, k.clone())?.cocycle)
            }
            AbelianSpec::Bicharacter { bicharacter } => {
                crate::braided::cyclic_bicharacter_data(*bicharacter)
            }
            AbelianSpec::Tables { group, omega, c } => {
                let g = group.build()?;
                let n = g.order();
                let om = omega_cochain(&g, omega)?;
                let ct = dense_from_table(c, &[n, n], QZ::zero())?;
                AbelianCocycle::new(om, ct)
            }
        }
    }

    pub fn describe(ac: &AbelianCocycle) -> Self {
        let n = ac.group().order();
        AbelianSpec::Tables {
            group: GroupSpec::describe(ac.group()),
            omega: ac
                .omega_cochain()
                .support()
                .into_iter()
                .map(|(t, v)| (format_key(&t), v))
                .collect(),
            c: sparse_from_dense(ac.c_table(), &[n, n]),
        }
    }
}

fn omega_cochain(g: &Arc<FinGroup>, omega: &Table<QZ>) -> Result<QZCochain> {
    let values = omega
        .iter()
        .map(|(k, v)| {
            Ok((
                k.clone(),
                serde_json::to_value(v).map_err(|e| Error::Input(e.to_string()))?,
            ))
        })
        .collect::<Result<Table<Value>>>()?;
    let parse = |v: &Value| QZ::deserialize(v).map_err(|e| Error::Input(e.to_string()));
    fill_cochain(g.clone(), QZCoeff::trivial(), 3, &values, parse)
}

/// A pointed fusion category `Vec_A^ω` without a braiding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointedSpec {
    pub group: GroupSpec,
    #[serde(default)]
    pub omega: Table<QZ>,
}

impl PointedSpec {
    pub fn build(&self) -> Result<PointedData> {
        let g = self.group.build()?;
        PointedData::new(omega_cochain(&g, &self.omega)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FermionsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian: Option<AbelianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointed: Option<PointedSpec>,
    #[serde(default)]
    pub reading: ConditionC,
}

impl FermionsFile {
    pub fn build(&self) -> Result<(PointedData, Option<AbelianCocycle>)> {
        match (&self.abelian, &self.pointed) {
            (Some(a), None) => {
                let ac = a.build()?;
                Ok((ac.pointed()?, Some(ac)))
            }
            (None, Some(p)) => Ok((p.build()?, None)),
            _ => Err(Error::Input(
                "give exactly one of \"abelian\" or \"pointed\"".into(),
            )),
        }
    }
}

/// A fermion `f`; `eta` defaults to `c(·, f)` when a braiding is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FermionSpec {
    pub f: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<QZ>>,
}

impl FermionSpec {
    pub fn build(&self, ac: &AbelianCocycle) -> Result<Fermion> {
        if self.f >= ac.group().order() {
            return Err(Error::Input(format!(
                "fermion {} is not an element",
                self.f
            )));
        }
        match &self.eta {
            None => Ok(Fermion::from_braiding(ac, self.f)),
            Some(eta) if eta.len() == ac.group().order() => Ok(Fermion {
                f: self.f,
                eta: eta.clone(),
            }),
            Some(_) => Err(Error::Input("η needs one value per element".into())),
        }
    }
}

/// Action tables of `G` on `Vec_A^ω`: `star[g]` lists the images of the generators of `A`,
/// `mu` is keyed `"g|a|b"` and `gamma` is keyed `"g|h|a"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionTables {
    pub group: GroupSpec,
    pub target: AbelianSpec,
    pub star: Vec<Vec<usize>>,
    #[serde(default)]
    pub mu: Table<QZ>,
    #[serde(default)]
    pub gamma: Table<QZ>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fermion: Option<FermionSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionSpec {
    /// One of the two built-in `ℤ/2` actions on a rank-four family.
    Builtin {
        builtin: BuiltinAction,
        k: QZ,
    },
    Tables(ActionTables),
}

/// A parsed action together with its braided target and fermion, when known.
#[derive(Clone, Debug)]
pub struct LoadedAction {
    pub data: BosonicActionData,
    pub target: AbelianCocycle,
    pub fermion: Option<Fermion>,
}

impl ActionSpec {
    pub fn build(&self) -> Result<LoadedAction> {
        match self {
            ActionSpec::Builtin { builtin, k } => {
                let act = builtin_action(*builtin, k.clone())?;
                Ok(LoadedAction {
                    data: act.data,
                    target: act.family.cocycle,
                    fermion: Some(act.fermion),
                })
            }
            ActionSpec::Tables(t) => {
                let g = t.group.build()?;
                let ac = t.target.build()?;
                let a = ac.group().clone();
                let (n, m) = (g.order(), a.order());
                if t.star.len() != n {
                    return Err(Error::Input(
                        "star needs one generator-image list per group element".into(),
                    ));
                }
                let star = t
                    .star
                    .iter()
                    .map(|imgs| {
                        Ok(GroupHom::from_generator_images(a.clone(), a.clone(), imgs)?
                            .images()
                            .to_vec())
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mu = dense_from_table(&t.mu, &[n, m, m], QZ::zero())?;
                let gamma = dense_from_table(&t.gamma, &[n, n, m], QZ::zero())?;
                let data = BosonicActionData::new(g, ac.pointed()?, star, mu, gamma)?;
                let fermion = t.fermion.as_ref().map(|f| f.build(&ac)).transpose()?;
                Ok(LoadedAction {
                    data,
                    target: ac,
                    fermion,
                })
            }
        }
    }

    /// The explicit-table form of an action.
    pub fn describe(
        data: &BosonicActionData,
        target: &AbelianCocycle,
        fermion: Option<&Fermion>,
    ) -> Self {
        let (n, m) = (data.group().order(), data.target_group().order());
        let gens = data.target_group().generators();
        ActionSpec::Tables(ActionTables {
            group: GroupSpec::describe(data.group()),
            target: AbelianSpec::describe(target),
            star: (0..n)
                .map(|g| gens.iter().map(|&x| data.star(g, x)).collect())
                .collect(),
            mu: sparse_from_dense(data.mu_table(), &[n, m, m]),
            gamma: sparse_from_dense(data.gamma_table(), &[n, n, m]),
            fermion: fermion.map(|f| FermionSpec {
                f: f.f,
                eta: Some(f.eta.clone()),
            }),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyActionFile {
    pub action: ActionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fermion: Option<FermionSpec>,
    /// The super-group class `α`, keyed `"g|h"`.
    #[serde(default)]
    pub alpha: Table<u8>,
}

/// A group homomorphism given by the full image list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub group: GroupSpec,
    pub images: Vec<usize>,
}

impl HomSpec {
    pub fn build(&self, target: &Arc<FinGroup>) -> Result<GroupHom> {
        GroupHom::new(self.group.build()?, target.clone(), self.images.clone())
    }
}

/// Input of the fermionic `O₃` pipeline: an action, optionally repaired and pulled back
/// along `ρ: G → H`, a fermion and a super-group class on `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct O3File {
    pub action: ActionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullback: Option<HomSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fermion: Option<FermionSpec>,
    #[serde(default)]
    pub alpha: Table<u8>,
    /// Replace `γ` by its coherent completion before reading off `θ`.
    #[serde(default)]
    pub repair: bool,
}

/// A twist `μ: G² → A`, either as a sparse table of element indices or, for each cyclic
/// factor of `A`, a matrix `M` with `μ(g, h)_t = Σ M_t[i][j] g_i h_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TwistSpec {
    Bilinear { bilinear: Vec<Vec<Vec<i64>>> },
    Table { table: Table<usize> },
}

impl TwistSpec {
    pub fn build(&self, module: Arc<GModule>) -> Result<TwistCocycle> {
        let g = module.group().clone();
        let a = module.module().clone();
        match self {
            TwistSpec::Bilinear { bilinear } => {
                let gf = g
                    .factors()
                    .ok_or_else(|| Error::Input("a bilinear twist needs an abelian G".into()))?;
                let af = a.factors().unwrap_or(&[]);
                let square = bilinear
                    .iter()
                    .all(|mat| mat.len() == gf.len() && mat.iter().all(|r| r.len() == gf.len()));
                if bilinear.len() != af.len() || !square {
                    return Err(Error::Input(
                        "one |G|-rank square matrix per factor of A expected".into(),
                    ));
                }
                TwistCocycle::from_fn(module, |t| {
                    let (x, y) = (g.tuple(t[0]), g.tuple(t[1]));
                    let coords: Vec<i64> = bilinear
                        .iter()
                        .map(|mat| {
                            mat.iter()
                                .enumerate()
                                .flat_map(|(i, row)| {
                                    row.iter().enumerate().map(move |(j, &c)| (i, j, c))
                                })
                                .map(|(i, j, c)| c * (x[i] * y[j]) as i64)
                                .sum()
                        })
                        .collect();
                    a.index_of(&coords)
                })
            }
            TwistSpec::Table { table } => {
                let n = g.order();
                let mut bad = None;
                let mut dense = vec![0usize; n * n];
                for (k, &v) in table {
                    let t = parse_key(k, &[n, n])?;
                    if v >= a.order() {
                        bad = Some(v);
                    }
                    dense[t[0] * n + t[1]] = v;
                }
                if let Some(v) = bad {
                    return Err(Error::Input(format!("{v} is not an element of A")));
                }
                TwistCocycle::from_fn(module, |t| dense[t[0] * n + t[1]])
            }
        }
    }
}

/// Strategy selection as it appears in bundles and on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategySpec {
    Dense {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cap: Option<u128>,
    },
    Filtration {
        k: usize,
    },
    Alt {
        a: [usize; 2],
        b: [usize; 2],
        #[serde(default = "default_samples")]
        samples: usize,
    },
}

fn default_samples() -> usize {
    64
}

/// Input of `O₄`: the braided target, the acting group and twist, optionally a full
/// action (for the general formula), a product split and a default strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct O4Bundle {
    pub abelian: AbelianSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    pub mu: TwistSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyndonFile {
    pub cochain: CochainFile,
    pub split: SplitSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::cyclic_generator_3;

    #[test]
    fn cochain_round_trip_is_byte_stable() {
        let c = cyclic_generator_3(3).unwrap();
        let file = CochainFile::from_qz(&c);
        let text = canonical_json(&file).unwrap();
        let back: CochainFile = parse_json(&text).unwrap();
        assert_eq!(canonical_json(&back).unwrap(), text);
        assert_eq!(back.load().unwrap(), LoadedCochain::Qz(c));
        assert!(text.contains("\"den\": 3"));
    }

    #[test]
    fn identity_keys_are_rejected() {
        let text = r#"{"group":{"invariants":[2]},"module":{"kind":"qz"},"degree":2,"values":{"0|1":{"num":1,"den":2}}}"#;
        let file: CochainFile = parse_json(text).unwrap();
        assert!(matches!(file.load(), Err(Error::Input(_))));
    }

    #[test]
    fn finite_module_files() {
        let text = r#"{"group":{"invariants":[2]},"module":{"kind":"finite","invariants":[2,2],"action":[[2,1],[1,2]]},"degree":1,"values":{"1":3}}"#;
        let file: CochainFile = parse_json(text).unwrap();
        let LoadedCochain::Finite(c) = file.load().unwrap() else {
            panic!()
        };
        assert!(!c.coeff().is_trivial());
        assert_eq!(c.get(&[1]), 3);
        assert_eq!(CochainFile::from_module(&c), file);
    }

    #[test]
    fn malformed_json_is_an_input_error() {
        assert!(matches!(
            parse_json::<CochainFile>("{"),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn builtin_and_table_actions_agree() {
        let spec: ActionSpec = parse_json(r#"{"builtin":"caso1","k":{"num":1,"den":4}}"#).unwrap();
        let loaded = spec.build().unwrap();
        let tables = ActionSpec::describe(&loaded.data, &loaded.target, loaded.fermion.as_ref());
        let text = canonical_json(&tables).unwrap();
        let again = parse_json::<ActionSpec>(&text).unwrap().build().unwrap();
        assert_eq!(again.data.mu_table(), loaded.data.mu_table());
        assert_eq!(again.data.gamma_table(), loaded.data.gamma_table());
        assert_eq!(again.data.star_table(), loaded.data.star_table());
        assert_eq!(again.fermion, loaded.fermion);
        assert_eq!(again.target.c_table(), loaded.target.c_table());
    }

    #[test]
    fn bilinear_twist() {
        let g = Arc::new(FinGroup::from_invariants(&[2, 2]).unwrap());
        let a = Arc::new(FinGroup::cyclic(2).unwrap());
        let m = Arc::new(GModule::trivial(g.clone(), a).unwrap());
        let mu = TwistSpec::Bilinear {
            bilinear: vec![vec![vec![0, 1], vec![0, 0]]],
        }
        .build(m)
        .unwrap();
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(mu.get(x, y) as u64, g.tuple(x)[0] * g.tuple(y)[1] % 2);
            }
        }
    }

    #[test]
    fn hash_ignores_key_order() {
        let a: Value = parse_json(r#"{"b":1,"a":2}"#).unwrap();
        let b: Value = parse_json(r#"{"a":2,"b":1}"#).unwrap();
        assert_eq!(input_hash(&a).unwrap(), input_hash(&b).unwrap());
    }
}
