//! Abelian 3-cocycles `(ω, c)` on finite abelian groups, their quadratic forms,
//! Müger centers, the `Ξ` pairing, and the two rank-four spin families.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cochain::{is_cocycle, Cochain, QZCochain, QZCoeff};
use crate::error::{Error, Result};
use crate::group::FinGroup;
use crate::qz::QZ;

/// Pointed fusion data `Vec_A^ω`: a group together with a normalized 3-cocycle.
#[derive(Clone, PartialEq)]
pub struct PointedData {
    omega: QZCochain,
}

impl fmt::Debug for PointedData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PointedData({:?}, ω = {:?})",
            self.omega.group(),
            self.omega
        )
    }
}

impl PointedData {
    pub fn new(omega: QZCochain) -> Result<Self> {
        if omega.degree() != 3 || !omega.coeff().is_trivial() {
            return Err(Error::Input(
                "ω is a 3-cochain with trivial ℚ/ℤ coefficients".into(),
            ));
        }
        if let Some(t) = is_cocycle(&omega).violation {
            return Err(Error::NotCocycle { tuple: t });
        }
        Ok(PointedData { omega })
    }

    /// `Vec_A` with the trivial associator.
    pub fn untwisted(group: Arc<FinGroup>) -> Result<Self> {
        PointedData::new(Cochain::zero(group, QZCoeff::trivial(), 3)?)
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        self.omega.group()
    }

    pub fn omega_cochain(&self) -> &QZCochain {
        &self.omega
    }

    pub fn omega(&self, x: usize, y: usize, z: usize) -> QZ {
        self.omega.get(&[x, y, z])
    }
}

/// An abelian 3-cocycle. Construction does not enforce the hexagons; see
/// [`AbelianCocycle::check`].
#[derive(Clone, PartialEq)]
pub struct AbelianCocycle {
    group: Arc<FinGroup>,
    omega: QZCochain,
    c: Arc<Vec<QZ>>,
}

impl fmt::Debug for AbelianCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianCocycle({:?})", self.group)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbelianIdentity {
    Cocycle,
    FirstHexagon,
    SecondHexagon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianViolation {
    pub identity: AbelianIdentity,
    pub tuple: Vec<usize>,
    /// Left side minus right side.
    pub defect: QZ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianReport {
    pub valid: bool,
    pub violations: Vec<AbelianViolation>,
}

impl AbelianCocycle {
    /// `c` is the full table with `c(x, y)` at `x·|A| + y`.
    pub fn new(omega: QZCochain, c: Vec<QZ>) -> Result<Self> {
        let group = omega.group().clone();
        if group.factors().is_none() {
            return Err(Error::InvalidGroup(
                "an abelian 3-cocycle lives on an abelian presentation".into(),
            ));
        }
        if omega.degree() != 3 || !omega.coeff().is_trivial() {
            return Err(Error::Input(
                "ω is a 3-cochain with trivial ℚ/ℤ coefficients".into(),
            ));
        }
        if c.len() != group.order() * group.order() {
            return Err(Error::Input("c needs one value per ordered pair".into()));
        }
        Ok(AbelianCocycle {
            group,
            omega,
            c: Arc::new(c),
        })
    }

    /// Tabulates closed forms. `omega` must already vanish on tuples containing 0.
    pub fn from_fns(
        group: Arc<FinGroup>,
        omega: impl Fn(usize, usize, usize) -> QZ,
        c: impl Fn(usize, usize) -> QZ,
    ) -> Result<Self> {
        for x in group.elements() {
            for y in group.elements() {
                for v in [omega(0, x, y), omega(x, 0, y), omega(x, y, 0)] {
                    if !v.is_zero() {
                        return Err(Error::Input(
                            "ω must vanish on triples containing the identity".into(),
                        ));
                    }
                }
            }
        }
        let om = Cochain::from_fn(group.clone(), QZCoeff::trivial(), 3, |t| {
            omega(t[0], t[1], t[2])
        })?;
        let n = group.order();
        let table = (0..n * n).map(|i| c(i / n, i % n)).collect();
        AbelianCocycle::new(om, table)
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn omega_cochain(&self) -> &QZCochain {
        &self.omega
    }

    pub fn c_table(&self) -> &[QZ] {
        &self.c
    }

    #[inline]
    pub fn omega(&self, x: usize, y: usize, z: usize) -> QZ {
        self.omega.get(&[x, y, z])
    }

    #[inline]
    pub fn c(&self, x: usize, y: usize) -> QZ {
        self.c[x * self.group.order() + y].clone()
    }

    /// The underlying pointed data, when `ω` is a cocycle.
    pub fn pointed(&self) -> Result<PointedData> {
        PointedData::new(self.omega.clone())
    }

    /// Scans the 3-cocycle identity on all quadruples and both hexagons
    /// `c(g, h+k) − c(g, h) − c(g, k) = ω(g, h, k) + ω(h, k, g) − ω(h, g, k)` and
    /// `c(g+h, k) − c(g, k) − c(h, k) = ω(g, k, h) − ω(g, h, k) − ω(k, g, h)`.
    pub fn check(&self) -> AbelianReport {
        let a = &self.group;
        let mut violations = Vec::new();
        for x in a.elements() {
            for y in a.elements() {
                for z in a.elements() {
                    for w in a.elements() {
                        let d = self.omega(y, z, w) - self.omega(a.mul(x, y), z, w)
                            + self.omega(x, a.mul(y, z), w)
                            - self.omega(x, y, a.mul(z, w))
                            + self.omega(x, y, z);
                        if !d.is_zero() {
                            violations.push(AbelianViolation {
                                identity: AbelianIdentity::Cocycle,
                                tuple: vec![x, y, z, w],
                                defect: d,
                            });
                        }
                    }
                }
            }
        }
        for g in a.elements() {
            for h in a.elements() {
                for k in a.elements() {
                    let lhs = self.c(g, a.mul(h, k)) - self.c(g, h) - self.c(g, k);
                    let rhs = self.omega(g, h, k) + self.omega(h, k, g) - self.omega(h, g, k);
                    if lhs != rhs {
                        violations.push(AbelianViolation {
                            identity: AbelianIdentity::FirstHexagon,
                            tuple: vec![g, h, k],
                            defect: lhs - rhs,
                        });
                    }
                    let lhs = self.c(a.mul(g, h), k) - self.c(g, k) - self.c(h, k);
                    let rhs = self.omega(g, k, h) - self.omega(g, h, k) - self.omega(k, g, h);
                    if lhs != rhs {
                        violations.push(AbelianViolation {
                            identity: AbelianIdentity::SecondHexagon,
                            tuple: vec![g, h, k],
                            defect: lhs - rhs,
                        });
                    }
                }
            }
        }
        AbelianReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    fn require_valid(&self) -> Result<()> {
        match self.check().violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::Precondition(format!(
                "not an abelian 3-cocycle: {:?} fails at {:?}",
                v.identity, v.tuple
            ))),
        }
    }

    /// `q(l) = c(l, l)`.
    pub fn quadratic_form(&self) -> Result<QuadraticForm> {
        self.require_valid()?;
        Ok(QuadraticForm {
            group: self.group.clone(),
            values: self.group.elements().map(|l| self.c(l, l)).collect(),
        })
    }

    /// The radical of `b_q`.
    pub fn mueger_center(&self) -> Result<Vec<usize>> {
        Ok(self.quadratic_form()?.radical())
    }

    pub fn is_non_degenerate(&self) -> Result<bool> {
        Ok(self.mueger_center()? == vec![0])
    }

    /// `Ξ(x)(y) = c(y, x) + c(x, y)`, listed over `y`.
    pub fn xi_pairing(&self, x: usize) -> Result<Vec<QZ>> {
        if !self.is_non_degenerate()? {
            return Err(Error::Precondition(
                "Ξ is defined for non-degenerate data".into(),
            ));
        }
        if x >= self.group.order() {
            return Err(Error::Input(format!("element {x} out of range")));
        }
        Ok(self
            .group
            .elements()
            .map(|y| self.c(y, x) + self.c(x, y))
            .collect())
    }
}

/// A quadratic form `q: A → ℚ/ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    group: Arc<FinGroup>,
    values: Vec<QZ>,
}

impl QuadraticForm {
    pub fn new(group: Arc<FinGroup>, values: Vec<QZ>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Input("one value per element expected".into()));
        }
        Ok(QuadraticForm { group, values })
    }

    pub fn q(&self, x: usize) -> QZ {
        self.values[x].clone()
    }

    pub fn values(&self) -> &[QZ] {
        &self.values
    }

    /// `b_q(k, l) = q(k + l) − q(k) − q(l)`.
    pub fn bicharacter(&self, k: usize, l: usize) -> QZ {
        self.q(self.group.mul(k, l)) - self.q(k) - self.q(l)
    }

    /// `q(−l) = q(l)` and bi-additivity of `b_q`, checked exhaustively.
    pub fn is_valid(&self) -> bool {
        let a = &self.group;
        a.elements().all(|l| self.q(a.inv(l)) == self.q(l))
            && a.elements().all(|x| {
                a.elements().all(|y| {
                    a.elements().all(|z| {
                        self.bicharacter(a.mul(x, y), z)
                            == self.bicharacter(x, z) + self.bicharacter(y, z)
                    })
                })
            })
    }

    pub fn radical(&self) -> Vec<usize> {
        let a = &self.group;
        a.elements()
            .filter(|&g| a.elements().all(|h| self.bicharacter(g, h).is_zero()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RankFourVariant {
    KleinFour,
    Cyclic4,
}

impl RankFourVariant {
    pub fn admissible_k(self) -> Vec<QZ> {
        match self {
            RankFourVariant::KleinFour => (0..4).map(|i| QZ::new(i, 4)).collect(),
            RankFourVariant::Cyclic4 => [1, 3, 5, 7].iter().map(|&i| QZ::new(i, 8)).collect(),
        }
    }
}

impl std::str::FromStr for RankFourVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "kleinfour" | "klein" => Ok(RankFourVariant::KleinFour),
            "cyclic4" | "cyclic" => Ok(RankFourVariant::Cyclic4),
            _ => Err(format!("unknown rank-four variant {s:?}")),
        }
    }
}

/// One of the rank-four spin data, with `v` a generator and `f` the fermion.
#[derive(Clone, Debug, PartialEq)]
pub struct RankFourFamily {
    pub variant: RankFourVariant,
    pub k: QZ,
    pub cocycle: AbelianCocycle,
    pub v: usize,
    pub f: usize,
}

impl RankFourFamily {
    pub fn v_plus_f(&self) -> usize {
        self.cocycle.group().mul(self.v, self.f)
    }

    /// `(0, v, f, v+f)`.
    pub fn named_elements(&self) -> [usize; 4] {
        [0, self.v, self.f, self.v_plus_f()]
    }
}

/// Coordinates `(x_v, x_f)` on the Klein four-group `{0, f, v, v+f}` at indices `0..4`.
fn klein_coords(x: usize) -> (i64, i64) {
    ((x / 2) as i64, (x % 2) as i64)
}

pub fn rank_four_family(variant: RankFourVariant, k: QZ) -> Result<RankFourFamily> {
    let four_k = k.scale_i64(4);
    match variant {
        RankFourVariant::KleinFour => {
            if !four_k.is_zero() {
                return Err(Error::Input(format!("KleinFour needs 4k = 0, got k = {k}")));
            }
            let a = Arc::new(FinGroup::from_invariants(&[2, 2])?);
            let kk = k.clone();
            let cocycle = AbelianCocycle::from_fns(
                a,
                |x, y, z| {
                    let ((xv, _), (yv, _), (zv, _)) =
                        (klein_coords(x), klein_coords(y), klein_coords(z));
                    if yv + zv >= 2 {
                        k.scale_i64(2 * xv)
                    } else {
                        QZ::zero()
                    }
                },
                |x, y| {
                    let ((xv, xf), (yv, yf)) = (klein_coords(x), klein_coords(y));
                    QZ::new((xv + xf) * yf, 2) + kk.scale_i64(xv * yv)
                },
            )?;
            Ok(RankFourFamily {
                variant,
                k: kk,
                cocycle,
                v: 2,
                f: 1,
            })
        }
        RankFourVariant::Cyclic4 => {
            if four_k != QZ::half() {
                return Err(Error::Input(format!("Cyclic4 needs 4k = 1/2, got k = {k}")));
            }
            let cocycle = cyclic4_cocycle(&k, |x| QZ::new(x as i64, 2))?;
            Ok(RankFourFamily {
                variant,
                k,
                cocycle,
                v: 1,
                f: 2,
            })
        }
    }
}

/// The Cyclic4 data with the associator value `½` on every carrying triple, as
/// printed in the rank-four example; it is not a 3-cocycle.
pub fn cyclic4_displayed_omega(k: &QZ) -> Result<AbelianCocycle> {
    cyclic4_cocycle(k, |x| if x == 0 { QZ::zero() } else { QZ::half() })
}

fn cyclic4_cocycle(k: &QZ, carry_value: impl Fn(usize) -> QZ) -> Result<AbelianCocycle> {
    let a = Arc::new(FinGroup::cyclic(4)?);
    AbelianCocycle::from_fns(
        a,
        |x, y, z| {
            if y + z >= 4 {
                carry_value(x)
            } else {
                QZ::zero()
            }
        },
        |x, y| k.scale_i64((x * y) as i64),
    )
}

/// `ω ≡ 0`, `c(x, y) = xy/m` on `ℤ/m`.
pub fn cyclic_bicharacter_data(m: u64) -> Result<AbelianCocycle> {
    let a = Arc::new(FinGroup::cyclic(m)?);
    AbelianCocycle::from_fns(
        a,
        |_, _, _| QZ::zero(),
        |x, y| QZ::new((x * y) as i64, m as i64),
    )
}
