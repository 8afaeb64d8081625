//! Normalized bar-resolution cochains and the coboundary.
//!
//! A dense [`Cochain`] stores one value per tuple of non-identity elements, indexed by a
//! mixed-radix code with the first argument most significant. Anything implementing
//! [`CochainFn`] can be evaluated pointwise, which is how large instances are handled
//! without materializing tables.

mod cup;
mod maps;
mod solve;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{FinGroup, GModule};
use crate::qz::QZ;

pub use cup::{
    cup_int, cup_product, cup_with, cyclic_carry, cyclic_character, cyclic_generator,
    cyclic_generator_3, cyclic_generator_without_factor,
};
pub use maps::{connecting_map, pushforward};
pub use solve::{
    coboundary_matrix, cohomology_invariants, enumerate_cocycles, in_image_upto_coboundary,
    triviality_finite, triviality_qz, z2_class_representatives, Certificate,
    FiniteTrivialitySolver, ImagePreimage, ImageSolver, QzTrivialitySolver, Status,
    TrivialityVerdict,
};

/// A coefficient object: values, addition and the left action of the acting group.
pub trait Coefficients: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Value: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn act(&self, g: usize, a: &Self::Value) -> Self::Value;
    /// Errors when the coefficients are attached to a different acting group.
    fn check_group(&self, group: &FinGroup) -> Result<()>;

    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Value) -> bool {
        *a == self.zero()
    }

    fn scale(&self, a: &Self::Value, k: i64) -> Self::Value {
        let mut base = if k < 0 { self.neg(a) } else { a.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = self.zero();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }
}

/// Coefficients with integer coordinates, so coboundaries become integer matrices.
pub trait LinearCoefficients: Coefficients {
    fn rank(&self) -> usize;
    fn action_matrix(&self, g: usize) -> Vec<Vec<BigInt>>;
}

/// ℚ/ℤ, with the trivial action or a sign action `g · x = ±x`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QZCoeff {
    signs: Option<Arc<Vec<bool>>>,
}

impl QZCoeff {
    pub fn trivial() -> Self {
        QZCoeff { signs: None }
    }

    /// `flips[g]` says whether `g` acts by negation.
    pub fn with_signs(flips: Vec<bool>) -> Self {
        QZCoeff {
            signs: Some(Arc::new(flips)),
        }
    }

    pub fn signs(&self) -> Option<&[bool]> {
        self.signs.as_deref().map(|v| v.as_slice())
    }

    pub fn is_trivial(&self) -> bool {
        self.signs.as_ref().is_none_or(|s| s.iter().all(|f| !f))
    }
}

impl Coefficients for QZCoeff {
    type Value = QZ;

    fn zero(&self) -> QZ {
        QZ::zero()
    }
    fn add(&self, a: &QZ, b: &QZ) -> QZ {
        a + b
    }
    fn neg(&self, a: &QZ) -> QZ {
        -a
    }
    fn act(&self, g: usize, a: &QZ) -> QZ {
        match &self.signs {
            Some(s) if s[g] => -a,
            _ => a.clone(),
        }
    }
    fn check_group(&self, group: &FinGroup) -> Result<()> {
        match &self.signs {
            Some(s) if s.len() != group.order() => Err(Error::GroupMismatch(
                "sign action is defined on a group of another order".into(),
            )),
            Some(s) => {
                for a in group.elements() {
                    for b in group.elements() {
                        if s[group.mul(a, b)] != (s[a] ^ s[b]) {
                            return Err(Error::InvalidModule(
                                "sign action is not a homomorphism".into(),
                            ));
                        }
                    }
                }
                Ok(())
            }
            None => Ok(()),
        }
    }
    fn is_zero(&self, a: &QZ) -> bool {
        a.is_zero()
    }
    fn scale(&self, a: &QZ, k: i64) -> QZ {
        a.scale_i64(k)
    }
}

impl LinearCoefficients for QZCoeff {
    fn rank(&self) -> usize {
        1
    }
    fn action_matrix(&self, g: usize) -> Vec<Vec<BigInt>> {
        let flip = self.signs.as_ref().is_some_and(|s| s[g]);
        vec![vec![if flip { -BigInt::one() } else { BigInt::one() }]]
    }
}

/// ℤ with the trivial action.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntCoeff;

impl Coefficients for IntCoeff {
    type Value = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn act(&self, _g: usize, a: &BigInt) -> BigInt {
        a.clone()
    }
    fn check_group(&self, _group: &FinGroup) -> Result<()> {
        Ok(())
    }
    fn scale(&self, a: &BigInt, k: i64) -> BigInt {
        a * k
    }
}

impl LinearCoefficients for IntCoeff {
    fn rank(&self) -> usize {
        1
    }
    fn action_matrix(&self, _g: usize) -> Vec<Vec<BigInt>> {
        vec![vec![BigInt::one()]]
    }
}

impl Coefficients for Arc<GModule> {
    type Value = usize;

    fn zero(&self) -> usize {
        0
    }
    fn add(&self, a: &usize, b: &usize) -> usize {
        self.module().mul(*a, *b)
    }
    fn neg(&self, a: &usize) -> usize {
        self.module().inv(*a)
    }
    fn act(&self, g: usize, a: &usize) -> usize {
        GModule::act(self, g, *a)
    }
    fn check_group(&self, group: &FinGroup) -> Result<()> {
        if self.group().as_ref() == group {
            Ok(())
        } else {
            Err(Error::GroupMismatch(
                "module is defined over another group".into(),
            ))
        }
    }
    fn is_zero(&self, a: &usize) -> bool {
        *a == 0
    }
}

impl LinearCoefficients for Arc<GModule> {
    fn rank(&self) -> usize {
        GModule::rank(self)
    }
    fn action_matrix(&self, g: usize) -> Vec<Vec<BigInt>> {
        GModule::action_matrix(self, g)
    }
}

/// Mixed-radix codes for tuples of non-identity elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleCode {
    base: usize,
    degree: usize,
}

impl TupleCode {
    pub fn new(group_order: usize, degree: usize) -> TupleCode {
        TupleCode {
            base: group_order.saturating_sub(1),
            degree,
        }
    }

    /// Number of normalized tuples, `(|G| − 1)^n`, or `None` if it does not fit.
    pub fn count(&self) -> Option<usize> {
        self.base.checked_pow(self.degree as u32)
    }

    pub fn count_u128(&self) -> u128 {
        (self.base as u128).saturating_pow(self.degree as u32)
    }

    /// `None` when some argument is the identity.
    pub fn encode(&self, args: &[usize]) -> Option<usize> {
        debug_assert_eq!(args.len(), self.degree);
        let mut code = 0;
        for &a in args {
            if a == 0 {
                return None;
            }
            code = code * self.base + (a - 1);
        }
        Some(code)
    }

    pub fn decode_into(&self, mut code: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = code % self.base + 1;
            code /= self.base;
        }
    }

    pub fn decode(&self, code: usize) -> Vec<usize> {
        let mut out = vec![0; self.degree];
        self.decode_into(code, &mut out);
        out
    }
}

/// Pointwise access to an `n`-cochain.
pub trait CochainFn<C: Coefficients>: Sync {
    fn group(&self) -> &Arc<FinGroup>;
    fn coeff(&self) -> &C;
    fn degree(&self) -> usize;
    fn eval(&self, args: &[usize]) -> C::Value;
}

/// A dense normalized cochain.
#[derive(Clone, PartialEq)]
pub struct Cochain<C: Coefficients> {
    group: Arc<FinGroup>,
    coeff: C,
    degree: usize,
    values: Vec<C::Value>,
}

pub type QZCochain = Cochain<QZCoeff>;
pub type ModuleCochain = Cochain<Arc<GModule>>;
pub type IntCochain = Cochain<IntCoeff>;

impl<C: Coefficients> fmt::Debug for Cochain<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = self.code();
        let mut m = f.debug_map();
        for (i, v) in self.values.iter().enumerate() {
            if !self.coeff.is_zero(v) {
                m.entry(&code.decode(i), v);
            }
        }
        m.finish()
    }
}

impl<C: Coefficients> Cochain<C> {
    pub fn zero(group: Arc<FinGroup>, coeff: C, degree: usize) -> Result<Self> {
        coeff.check_group(&group)?;
        let n = TupleCode::new(group.order(), degree)
            .count()
            .ok_or_else(|| Error::TooLarge {
                entries: u128::MAX,
                cap: usize::MAX as u128,
                hint: "use a pointwise evaluator".into(),
            })?;
        let z = coeff.zero();
        Ok(Cochain {
            values: vec![z; n],
            group,
            coeff,
            degree,
        })
    }

    /// Tabulates `f` on all normalized tuples.
    pub fn from_fn(
        group: Arc<FinGroup>,
        coeff: C,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> C::Value,
    ) -> Result<Self> {
        let mut c = Cochain::zero(group, coeff, degree)?;
        let code = c.code();
        let mut args = vec![0; degree];
        for i in 0..c.values.len() {
            code.decode_into(i, &mut args);
            c.values[i] = f(&args);
        }
        Ok(c)
    }

    /// Tabulates any pointwise cochain.
    pub fn materialize<F: CochainFn<C> + ?Sized>(f: &F) -> Result<Self> {
        Cochain::from_fn(f.group().clone(), f.coeff().clone(), f.degree(), |t| {
            f.eval(t)
        })
    }

    pub fn from_values(
        group: Arc<FinGroup>,
        coeff: C,
        degree: usize,
        values: Vec<C::Value>,
    ) -> Result<Self> {
        coeff.check_group(&group)?;
        let expected = TupleCode::new(group.order(), degree).count();
        if expected != Some(values.len()) {
            return Err(Error::Input(format!(
                "expected {:?} values for a degree-{degree} cochain, got {}",
                expected,
                values.len()
            )));
        }
        Ok(Cochain {
            group,
            coeff,
            degree,
            values,
        })
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn coeff(&self) -> &C {
        &self.coeff
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[C::Value] {
        &self.values
    }

    pub fn code(&self) -> TupleCode {
        TupleCode::new(self.group.order(), self.degree)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, args: &[usize]) -> C::Value {
        assert_eq!(args.len(), self.degree, "wrong number of arguments");
        match self.code().encode(args) {
            Some(i) => self.values[i].clone(),
            None => self.coeff.zero(),
        }
    }

    pub fn set(&mut self, args: &[usize], v: C::Value) -> Result<()> {
        if args.len() != self.degree || args.iter().any(|&a| a >= self.group.order()) {
            return Err(Error::Input(format!("bad argument tuple {args:?}")));
        }
        match self.code().encode(args) {
            Some(i) => {
                self.values[i] = v;
                Ok(())
            }
            None if self.coeff.is_zero(&v) => Ok(()),
            None => Err(Error::Input(format!(
                "normalized cochains vanish on {args:?}, which contains the identity"
            ))),
        }
    }

    /// Non-identity tuples with nonzero values.
    pub fn support(&self) -> Vec<(Vec<usize>, C::Value)> {
        let code = self.code();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !self.coeff.is_zero(v))
            .map(|(i, v)| (code.decode(i), v.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| self.coeff.is_zero(v))
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(
            self.degree == other.degree && self.group == other.group && self.coeff == other.coeff,
            "cochains live in different groups"
        );
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        self.zip_with(other, |a, b| self.coeff.add(a, b))
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        self.zip_with(other, |a, b| self.coeff.sub(a, b))
    }

    pub fn negated(&self) -> Self {
        self.map_values(|v| self.coeff.neg(v))
    }

    pub fn scaled(&self, k: i64) -> Self {
        self.map_values(|v| self.coeff.scale(v, k))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C::Value, &C::Value) -> C::Value) -> Self {
        Cochain {
            group: self.group.clone(),
            coeff: self.coeff.clone(),
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn map_values(&self, f: impl Fn(&C::Value) -> C::Value) -> Self {
        Cochain {
            group: self.group.clone(),
            coeff: self.coeff.clone(),
            degree: self.degree,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Valuewise image under `f` into other coefficients over the same group.
    pub fn map_into<D: Coefficients>(
        &self,
        coeff: D,
        f: impl Fn(&C::Value) -> D::Value,
    ) -> Result<Cochain<D>> {
        coeff.check_group(&self.group)?;
        Ok(Cochain {
            group: self.group.clone(),
            coeff,
            degree: self.degree,
            values: self.values.iter().map(f).collect(),
        })
    }
}

impl<C: Coefficients> CochainFn<C> for Cochain<C> {
    fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }
    fn coeff(&self) -> &C {
        &self.coeff
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn eval(&self, args: &[usize]) -> C::Value {
        self.get(args)
    }
}

type Evaluator<V> = Arc<dyn Fn(&[usize]) -> V + Send + Sync>;

/// A cochain given by a closed-form evaluator. Nothing forces it to vanish on tuples that
/// contain the identity; see [`LazyCochain::normalized`].
#[derive(Clone)]
pub struct LazyCochain<C: Coefficients> {
    group: Arc<FinGroup>,
    coeff: C,
    degree: usize,
    eval: Evaluator<C::Value>,
}

impl<C: Coefficients> fmt::Debug for LazyCochain<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LazyCochain(degree {} on {:?})", self.degree, self.group)
    }
}

impl<C: Coefficients> LazyCochain<C> {
    pub fn new(
        group: Arc<FinGroup>,
        coeff: C,
        degree: usize,
        eval: impl Fn(&[usize]) -> C::Value + Send + Sync + 'static,
    ) -> Result<Self> {
        coeff.check_group(&group)?;
        Ok(LazyCochain {
            group,
            coeff,
            degree,
            eval: Arc::new(eval),
        })
    }

    /// Same evaluator, forced to 0 on tuples containing the identity.
    pub fn normalized(self) -> Self {
        let inner = self.eval.clone();
        let zero = self.coeff.zero();
        LazyCochain {
            eval: Arc::new(move |t: &[usize]| {
                if t.contains(&0) {
                    zero.clone()
                } else {
                    inner(t)
                }
            }),
            ..self
        }
    }
}

impl<C: Coefficients> CochainFn<C> for LazyCochain<C> {
    fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }
    fn coeff(&self) -> &C {
        &self.coeff
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn eval(&self, args: &[usize]) -> C::Value {
        (self.eval)(args)
    }
}

/// `(∂f)(g_1, …, g_{n+1}) = g_1·f(g_2, …) + Σ_{i=1}^{n} (−1)^i f(…, g_i g_{i+1}, …) + (−1)^{n+1} f(g_1, …, g_n)`
pub fn coboundary_at<C: Coefficients, F: CochainFn<C> + ?Sized>(f: &F, args: &[usize]) -> C::Value {
    let n = f.degree();
    assert_eq!(args.len(), n + 1, "coboundary needs n + 1 arguments");
    let (g, coeff) = (f.group(), f.coeff());
    let mut acc = coeff.act(args[0], &f.eval(&args[1..]));
    let mut buf = vec![0; n];
    for i in 1..=n {
        buf[..i - 1].copy_from_slice(&args[..i - 1]);
        buf[i - 1] = g.mul(args[i - 1], args[i]);
        buf[i..].copy_from_slice(&args[i + 1..]);
        let v = f.eval(&buf);
        acc = if i % 2 == 1 {
            coeff.sub(&acc, &v)
        } else {
            coeff.add(&acc, &v)
        };
    }
    let last = f.eval(&args[..n]);
    if (n + 1) % 2 == 1 {
        coeff.sub(&acc, &last)
    } else {
        coeff.add(&acc, &last)
    }
}

pub fn coboundary<C: Coefficients, F: CochainFn<C> + ?Sized>(f: &F) -> Result<Cochain<C>> {
    Cochain::from_fn(f.group().clone(), f.coeff().clone(), f.degree() + 1, |t| {
        coboundary_at(f, t)
    })
}

/// The coboundary of a pointwise cochain, itself pointwise.
pub struct LazyCoboundary<'a, C: Coefficients, F: CochainFn<C> + ?Sized> {
    inner: &'a F,
    _c: std::marker::PhantomData<fn() -> C>,
}

impl<'a, C: Coefficients, F: CochainFn<C> + ?Sized> LazyCoboundary<'a, C, F> {
    pub fn new(inner: &'a F) -> Self {
        LazyCoboundary {
            inner,
            _c: std::marker::PhantomData,
        }
    }
}

impl<C: Coefficients, F: CochainFn<C> + ?Sized> CochainFn<C> for LazyCoboundary<'_, C, F> {
    fn group(&self) -> &Arc<FinGroup> {
        self.inner.group()
    }
    fn coeff(&self) -> &C {
        self.inner.coeff()
    }
    fn degree(&self) -> usize {
        self.inner.degree() + 1
    }
    fn eval(&self, args: &[usize]) -> C::Value {
        coboundary_at(self.inner, args)
    }
}

/// Outcome of a cocycle test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleCheck {
    pub violation: Option<Vec<usize>>,
}

impl CocycleCheck {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustive check of `∂f = 0` on normalized tuples, reporting the first failure.
pub fn is_cocycle<C: Coefficients, F: CochainFn<C> + ?Sized>(f: &F) -> CocycleCheck {
    first_violation(f, false)
}

/// Like [`is_cocycle`] but scanning every tuple, including those containing the identity.
/// This is the right test for evaluators that are not known to be normalized.
pub fn is_cocycle_unnormalized<C: Coefficients, F: CochainFn<C> + ?Sized>(f: &F) -> CocycleCheck {
    first_violation(f, true)
}

fn first_violation<C: Coefficients, F: CochainFn<C> + ?Sized>(f: &F, all: bool) -> CocycleCheck {
    let order = f.group().order();
    let n = f.degree() + 1;
    let (base, offset) = if all { (order, 0) } else { (order - 1, 1) };
    let total = base.checked_pow(n as u32).expect("tuple count overflow");
    let coeff = f.coeff();
    let mut t = vec![0; n];
    for code in 0..total {
        let mut c = code;
        for slot in t.iter_mut().rev() {
            *slot = c % base + offset;
            c /= base;
        }
        if !coeff.is_zero(&coboundary_at(f, &t)) {
            return CocycleCheck { violation: Some(t) };
        }
    }
    CocycleCheck { violation: None }
}

pub(crate) fn require_cocycle<C: Coefficients, F: CochainFn<C> + ?Sized>(f: &F) -> Result<()> {
    match is_cocycle(f).violation {
        None => Ok(()),
        Some(tuple) => Err(Error::NotCocycle { tuple }),
    }
}
