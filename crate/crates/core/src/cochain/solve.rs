use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{
    coboundary, require_cocycle, Cochain, Coefficients, IntCoeff, LinearCoefficients, QZCoeff,
    TupleCode,
};
use crate::error::{Error, Result};
use crate::group::{FinGroup, GModule, ModuleHom};
use crate::linalg::{quotient_invariants, IntMatrix, Smith};
use crate::qz::QZ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Trivial,
    Nontrivial,
}

/// What was solved to reach a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub method: String,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Smith diagonal entries other than 1.
    #[serde(with = "crate::qz::bigint_list")]
    pub invariant_factors: Vec<BigInt>,
    pub detail: String,
}

impl Certificate {
    pub(crate) fn from_smith(method: &str, s: &Smith, detail: String) -> Certificate {
        let (rows, cols) = s.dims();
        Certificate {
            method: method.to_string(),
            rows,
            cols,
            rank: s.rank(),
            invariant_factors: s
                .diagonal()
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect(),
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrivialityVerdict<C: Coefficients> {
    pub status: Status,
    /// When trivial, a cochain `p` of one degree lower with `∂p = f`.
    pub witness: Option<Cochain<C>>,
    pub certificate: Certificate,
}

impl<C: Coefficients> TrivialityVerdict<C> {
    pub fn is_trivial(&self) -> bool {
        self.status == Status::Trivial
    }
}

fn block(m: &mut IntMatrix, row0: usize, col0: usize, a: &[Vec<BigInt>], sign: i64) {
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                m.add_to(row0 + i, col0 + j, &(x * sign));
            }
        }
    }
}

/// The matrix of `∂: Cⁿ → Cⁿ⁺¹` on coordinates, `rank` consecutive coordinates per tuple.
pub fn coboundary_matrix<C: LinearCoefficients>(
    group: &FinGroup,
    coeff: &C,
    n: usize,
) -> Result<IntMatrix> {
    coeff.check_group(group)?;
    let r = coeff.rank();
    let src = TupleCode::new(group.order(), n);
    let dst = TupleCode::new(group.order(), n + 1);
    let (ns, nd) = match (src.count(), dst.count()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::TooLarge {
                entries: dst.count_u128(),
                cap: usize::MAX as u128,
                hint: "coboundary matrix does not fit in memory".into(),
            })
        }
    };
    let mut m = IntMatrix::zeros(nd * r, ns * r);
    let actions: Vec<Vec<Vec<BigInt>>> = group.elements().map(|g| coeff.action_matrix(g)).collect();
    let identity: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut args = vec![0; n + 1];
    let mut buf = vec![0; n];
    for o in 0..nd {
        dst.decode_into(o, &mut args);
        let c = src.encode(&args[1..]).expect("non-identity tail");
        block(&mut m, o * r, c * r, &actions[args[0]], 1);
        for i in 1..=n {
            buf[..i - 1].copy_from_slice(&args[..i - 1]);
            buf[i - 1] = group.mul(args[i - 1], args[i]);
            buf[i..].copy_from_slice(&args[i + 1..]);
            if let Some(c) = src.encode(&buf) {
                block(
                    &mut m,
                    o * r,
                    c * r,
                    &identity,
                    if i % 2 == 1 { -1 } else { 1 },
                );
            }
        }
        let c = src.encode(&args[..n]).expect("non-identity head");
        block(
            &mut m,
            o * r,
            c * r,
            &identity,
            if (n + 1) % 2 == 1 { -1 } else { 1 },
        );
    }
    Ok(m)
}

fn modulus_block(module: &GModule, tuples: usize) -> Vec<BigInt> {
    let fs = module.factors();
    (0..tuples)
        .flat_map(|_| fs.iter().map(|&d| BigInt::from(d)))
        .collect()
}

fn diag_columns(moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    moduli
        .iter()
        .enumerate()
        .map(|(j, d)| {
            let mut v = vec![BigInt::zero(); moduli.len()];
            v[j] = d.clone();
            v
        })
        .collect()
}

fn module_coords(f: &Cochain<Arc<GModule>>) -> Vec<BigInt> {
    f.values()
        .iter()
        .flat_map(|&x| f.coeff().coords(x))
        .collect()
}

fn cochain_from_coords(
    group: &Arc<FinGroup>,
    m: &Arc<GModule>,
    n: usize,
    x: &[BigInt],
) -> Result<Cochain<Arc<GModule>>> {
    let r = m.rank();
    let values = if r == 0 {
        vec![0; TupleCode::new(group.order(), n).count().unwrap_or(0)]
    } else {
        x.chunks(r).map(|c| m.from_coords(c)).collect()
    };
    Cochain::from_values(group.clone(), m.clone(), n, values)
}

/// Decides triviality in `Hⁿ(G, ℚ/ℤ)` for one `(G, n)`, reusing two factorizations.
///
/// The ℚ-lift `f̃` of a cocycle has integral coboundary `F`. The class of `f` vanishes iff
/// `F = ∂P` for an integral `P`; then `f̃ − P` is a rational cocycle, hence a rational
/// coboundary `∂q`, and `q mod ℤ` is the witness.
pub struct QzTrivialitySolver {
    group: Arc<FinGroup>,
    degree: usize,
    delta: IntMatrix,
    smith: Smith,
    smith_prev: Smith,
}

impl QzTrivialitySolver {
    pub fn new(group: Arc<FinGroup>, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Precondition(
                "triviality is decided in degrees n >= 1".into(),
            ));
        }
        let delta = coboundary_matrix(&group, &IntCoeff, degree)?;
        let prev = coboundary_matrix(&group, &IntCoeff, degree - 1)?;
        Ok(QzTrivialitySolver {
            smith: Smith::new(&delta),
            smith_prev: Smith::new(&prev),
            delta,
            group,
            degree,
        })
    }

    pub fn decide(&self, f: &Cochain<QZCoeff>) -> Result<TrivialityVerdict<QZCoeff>> {
        if !f.coeff().is_trivial() {
            return Err(Error::Unsupported(
                "ℚ/ℤ coefficients with a nontrivial action".into(),
            ));
        }
        if f.degree() != self.degree || f.group() != &self.group {
            return Err(Error::GroupMismatch(
                "solver was built for another group or degree".into(),
            ));
        }
        require_cocycle(f)?;
        let lift: Vec<BigRational> = f
            .values()
            .iter()
            .map(|v| BigRational::new(v.num().clone(), v.den().clone()))
            .collect();
        let denom = f.values().iter().fold(BigInt::one(), |l, v| l.lcm(v.den()));
        let scaled: Vec<BigInt> = lift
            .iter()
            .map(|x| (x * BigRational::from_integer(denom.clone())).to_integer())
            .collect();
        let big_f: Vec<BigInt> = self
            .delta
            .mul_vec(&scaled)
            .into_iter()
            .map(|x| {
                let (q, r) = x.div_rem(&denom);
                debug_assert!(r.is_zero(), "coboundary of a cocycle lift is integral");
                q
            })
            .collect();
        let Some(p) = self.smith.solve_integer(&big_f)? else {
            let detail = format!(
                "∂P = ∂f̃ has no integer solution in degree {}; the Bockstein image of [f] is nonzero",
                self.degree + 1
            );
            return Ok(TrivialityVerdict {
                status: Status::Nontrivial,
                witness: None,
                certificate: Certificate::from_smith("integral-bockstein", &self.smith, detail),
            });
        };
        let rhs: Vec<BigRational> = lift
            .iter()
            .zip(&p)
            .map(|(x, pi)| x - BigRational::from_integer(pi.clone()))
            .collect();
        let q = self
            .smith_prev
            .solve_rational(&rhs)?
            .expect("rational cohomology of a finite group vanishes in positive degree");
        let values: Vec<QZ> = q
            .iter()
            .map(|x| QZ::new(x.numer().clone(), x.denom().clone()))
            .collect();
        let witness = Cochain::from_values(
            self.group.clone(),
            QZCoeff::trivial(),
            self.degree - 1,
            values,
        )?;
        debug_assert_eq!(&coboundary(&witness)?, f);
        let detail =
            "∂P = ∂f̃ solved over ℤ; witness from ∂q = f̃ − P over ℚ reduced mod ℤ".to_string();
        Ok(TrivialityVerdict {
            status: Status::Trivial,
            witness: Some(witness),
            certificate: Certificate::from_smith("integral-bockstein", &self.smith, detail),
        })
    }
}

/// Decides whether a cocycle with trivial ℚ/ℤ coefficients is a coboundary.
pub fn triviality_qz(f: &Cochain<QZCoeff>) -> Result<TrivialityVerdict<QZCoeff>> {
    if !f.coeff().is_trivial() {
        return Err(Error::Unsupported(
            "ℚ/ℤ coefficients with a nontrivial action".into(),
        ));
    }
    QzTrivialitySolver::new(f.group().clone(), f.degree())?.decide(f)
}

/// Decides triviality in `Hⁿ(G, M)` for a finite module by one integer solve of
/// `[Δ_{n−1} | diag(d)] · (p, y) = f`.
pub struct FiniteTrivialitySolver {
    module: Arc<GModule>,
    degree: usize,
    prev_cols: usize,
    smith: Smith,
}

impl FiniteTrivialitySolver {
    pub fn new(module: Arc<GModule>, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Precondition(
                "triviality is decided in degrees n >= 1".into(),
            ));
        }
        let g = module.group().clone();
        let prev = coboundary_matrix(&g, &module, degree - 1)?;
        let tuples = TupleCode::new(g.order(), degree).count().unwrap_or(0);
        let moduli = modulus_block(&module, tuples);
        let slack = IntMatrix::from_columns(moduli.len(), &diag_columns(&moduli));
        let system = prev.hconcat(&slack);
        Ok(FiniteTrivialitySolver {
            prev_cols: prev.cols(),
            smith: Smith::new(&system),
            module,
            degree,
        })
    }

    pub fn decide(&self, f: &Cochain<Arc<GModule>>) -> Result<TrivialityVerdict<Arc<GModule>>> {
        if f.degree() != self.degree || f.coeff() != &self.module {
            return Err(Error::GroupMismatch(
                "solver was built for another module or degree".into(),
            ));
        }
        require_cocycle(f)?;
        let b = module_coords(f);
        match self.smith.solve_integer(&b)? {
            None => Ok(TrivialityVerdict {
                status: Status::Nontrivial,
                witness: None,
                certificate: Certificate::from_smith(
                    "finite-module-solve",
                    &self.smith,
                    "∂p = f has no solution over the invariant factors".into(),
                ),
            }),
            Some(x) => {
                let witness = cochain_from_coords(
                    self.module.group(),
                    &self.module,
                    self.degree - 1,
                    &x[..self.prev_cols],
                )?;
                debug_assert_eq!(&coboundary(&witness)?, f);
                Ok(TrivialityVerdict {
                    status: Status::Trivial,
                    witness: Some(witness),
                    certificate: Certificate::from_smith(
                        "finite-module-solve",
                        &self.smith,
                        "∂p = f solved over the invariant factors".into(),
                    ),
                })
            }
        }
    }
}

pub fn triviality_finite(f: &Cochain<Arc<GModule>>) -> Result<TrivialityVerdict<Arc<GModule>>> {
    FiniteTrivialitySolver::new(f.coeff().clone(), f.degree())?.decide(f)
}

/// Invariant factors of `Hⁿ(G, M)`: cocycle lattice modulo coboundaries plus the
/// relation lattice of the cochain group, read off a Smith form.
pub fn cohomology_invariants(module: &Arc<GModule>, n: usize) -> Result<Vec<BigInt>> {
    let g = module.group().clone();
    let delta = coboundary_matrix(&g, module, n)?;
    let here = TupleCode::new(g.order(), n).count().unwrap_or(0);
    let next = TupleCode::new(g.order(), n + 1).count().unwrap_or(0);
    let k = here * module.rank();
    let moduli_here = modulus_block(module, here);
    let moduli_next = modulus_block(module, next);
    let relations_here = diag_columns(&moduli_here);
    let system = delta.hconcat(&IntMatrix::from_columns(
        moduli_next.len(),
        &diag_columns(&moduli_next),
    ));
    let kernel = Smith::new(&system).kernel_basis();
    let mut cocycles: Vec<Vec<BigInt>> = kernel.into_iter().map(|v| v[..k].to_vec()).collect();
    cocycles.extend(relations_here.iter().cloned());
    let mut boundaries = relations_here;
    if n > 0 {
        let prev = coboundary_matrix(&g, module, n - 1)?;
        let prev_t = prev.transpose();
        boundaries.extend((0..prev.cols()).map(|j| prev_t.row(j).to_vec()));
    }
    Ok(quotient_invariants(k, &cocycles, &boundaries)?)
}

/// A preimage of a class under `r_*`, with the correction `q` making
/// `r(τ) − ∂q = target` hold exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ImagePreimage {
    pub tau: Cochain<Arc<GModule>>,
    pub correction: Cochain<Arc<GModule>>,
}

/// Solves `∂τ = 0`, `r(τ) − ∂q = target` jointly for one `(r, n)`.
pub struct ImageSolver {
    map: ModuleHom,
    degree: usize,
    tau_len: usize,
    q_len: usize,
    rows_cocycle: usize,
    smith: Smith,
}

impl ImageSolver {
    pub fn new(map: ModuleHom, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Precondition(
                "image membership is decided in degrees n >= 1".into(),
            ));
        }
        let (src, dst) = (map.source().clone(), map.target().clone());
        let g = src.group().clone();
        let d_src = coboundary_matrix(&g, &src, degree)?;
        let d_dst = coboundary_matrix(&g, &dst, degree - 1)?;
        let here = TupleCode::new(g.order(), degree).count().unwrap_or(0);
        let next = TupleCode::new(g.order(), degree + 1).count().unwrap_or(0);
        let (rs, rt) = (src.rank(), dst.rank());
        let tau_len = here * rs;
        let q_len = d_dst.cols();
        let m_next = modulus_block(&src, next);
        let m_here = modulus_block(&dst, here);
        let rows_cocycle = m_next.len();
        let cols = tau_len + q_len + m_next.len() + m_here.len();
        let mut sys = IntMatrix::zeros(rows_cocycle + m_here.len(), cols);
        for i in 0..d_src.rows() {
            for j in 0..d_src.cols() {
                let x = d_src.get(i, j);
                if !x.is_zero() {
                    sys.set(i, j, x.clone());
                }
            }
        }
        for (i, d) in m_next.iter().enumerate() {
            sys.set(i, tau_len + q_len + i, d.clone());
        }
        let rmat = map.matrix();
        for t in 0..here {
            for (a, row) in rmat.iter().enumerate() {
                for (b, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        sys.set(rows_cocycle + t * rt + a, t * rs + b, x.clone());
                    }
                }
            }
        }
        for i in 0..d_dst.rows() {
            for j in 0..d_dst.cols() {
                let x = d_dst.get(i, j);
                if !x.is_zero() {
                    sys.set(rows_cocycle + i, tau_len + j, -x);
                }
            }
        }
        for (i, d) in m_here.iter().enumerate() {
            sys.set(
                rows_cocycle + i,
                tau_len + q_len + m_next.len() + i,
                d.clone(),
            );
        }
        Ok(ImageSolver {
            smith: Smith::new(&sys),
            map,
            degree,
            tau_len,
            q_len,
            rows_cocycle,
        })
    }

    pub fn solve(&self, target: &Cochain<Arc<GModule>>) -> Result<Option<ImagePreimage>> {
        if target.coeff() != self.map.target() || target.degree() != self.degree {
            return Err(Error::GroupMismatch(
                "target lives in another module or degree".into(),
            ));
        }
        require_cocycle(target)?;
        let mut b = vec![BigInt::zero(); self.rows_cocycle];
        b.extend(module_coords(target));
        let Some(x) = self.smith.solve_integer(&b)? else {
            return Ok(None);
        };
        let src = self.map.source();
        let g = src.group();
        let tau = cochain_from_coords(g, src, self.degree, &x[..self.tau_len])?;
        let correction = cochain_from_coords(
            g,
            self.map.target(),
            self.degree - 1,
            &x[self.tau_len..self.tau_len + self.q_len],
        )?;
        Ok(Some(ImagePreimage { tau, correction }))
    }
}

/// Finds a cocycle `τ` over the source with `r_*(τ)` cohomologous to `target`, if one exists.
pub fn in_image_upto_coboundary(
    r: &ModuleHom,
    target: &Cochain<Arc<GModule>>,
) -> Result<Option<ImagePreimage>> {
    ImageSolver::new(r.clone(), target.degree())?.solve(target)
}

/// Every normalized cocycle of degree `n`, by exhaustive search over at most `limit` cochains.
pub fn enumerate_cocycles(
    module: &Arc<GModule>,
    n: usize,
    limit: u128,
) -> Result<Vec<Cochain<Arc<GModule>>>> {
    let g = module.group().clone();
    let len = TupleCode::new(g.order(), n).count().unwrap_or(usize::MAX);
    let size = module.module().order() as u128;
    let total = size.checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > limit {
        return Err(Error::TooLarge {
            entries: total,
            cap: limit,
            hint: "enumerate a smaller instance".into(),
        });
    }
    let mut out = Vec::new();
    let mut values = vec![0usize; len];
    for code in 0..total {
        let mut c = code;
        for v in values.iter_mut().rev() {
            *v = (c % size) as usize;
            c /= size;
        }
        let f = Cochain::from_values(g.clone(), module.clone(), n, values.clone())?;
        if super::is_cocycle(&f).holds() {
            out.push(f);
        }
    }
    Ok(out)
}

type Bits = Vec<u64>;

fn bits_new(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

fn bit(v: &Bits, i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn flip(v: &mut Bits, i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

fn xor_into(a: &mut Bits, b: &Bits) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
}

fn lowest_bit(v: &Bits) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// An 𝔽₂ basis kept in echelon form by lowest set bit.
#[derive(Default)]
struct Echelon(Vec<(usize, Bits)>);

impl Echelon {
    /// Reduces `v` and keeps it if independent; returns whether it was.
    fn insert(&mut self, mut v: Bits) -> bool {
        for (p, b) in &self.0 {
            if bit(&v, *p) {
                xor_into(&mut v, b);
            }
        }
        match lowest_bit(&v) {
            None => false,
            Some(p) => {
                for (_, b) in self.0.iter_mut() {
                    if bit(b, p) {
                        xor_into(b, &v);
                    }
                }
                self.0.push((p, v));
                true
            }
        }
    }
}

/// One cocycle from each class of `Hⁿ(G, ℤ/2)`, by linear algebra over 𝔽₂.
pub fn z2_class_representatives(
    module: &Arc<GModule>,
    n: usize,
) -> Result<Vec<Cochain<Arc<GModule>>>> {
    if module.module().order() != 2 || !module.is_trivial() {
        return Err(Error::Input(
            "class representatives need the trivial module ℤ/2".into(),
        ));
    }
    let g = module.group().clone();
    let d = coboundary_matrix(&g, module, n)?;
    let cols = d.cols();
    let row_bits = |m: &IntMatrix, i: usize| {
        let mut v = bits_new(m.cols());
        for (j, x) in m.row(i).iter().enumerate() {
            if x.is_odd() {
                flip(&mut v, j);
            }
        }
        v
    };
    let mut rows = Echelon::default();
    for i in 0..d.rows() {
        rows.insert(row_bits(&d, i));
    }
    let pivots: Vec<usize> = rows.0.iter().map(|(p, _)| *p).collect();
    let mut kernel = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = bits_new(cols);
        flip(&mut v, free);
        for (p, r) in &rows.0 {
            if bit(r, free) {
                flip(&mut v, *p);
            }
        }
        kernel.push(v);
    }
    let mut span = Echelon::default();
    if n > 0 {
        let prev = coboundary_matrix(&g, module, n - 1)?.transpose();
        for i in 0..prev.rows() {
            span.insert(row_bits(&prev, i));
        }
    }
    let reps: Vec<Bits> = kernel
        .into_iter()
        .filter(|v| span.insert(v.clone()))
        .collect();
    if reps.len() > 20 {
        return Err(Error::TooLarge {
            entries: 1u128 << reps.len(),
            cap: 1 << 20,
            hint: "too many cohomology classes to list".into(),
        });
    }
    (0u32..1 << reps.len())
        .map(|mask| {
            let mut v = bits_new(cols);
            for (i, r) in reps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    xor_into(&mut v, r);
                }
            }
            Cochain::from_values(
                g.clone(),
                module.clone(),
                n,
                (0..cols).map(|j| usize::from(bit(&v, j))).collect(),
            )
        })
        .collect()
}
