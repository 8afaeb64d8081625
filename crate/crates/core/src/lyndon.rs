//! Lyndon normal form of cochains on a direct product `G = A × B`.
//!
//! A normalized cocycle `f` is modified by coboundaries until it vanishes on every tuple of
//! the shape `(a_1, …, a_h, b_{h+1}, …, b_k, a, g_{k+2}, …, g_n)`. The result then splits as
//! a sum of components `f_{p,q}(a_1, …, a_p, b_{p+1}, …, b_n)`.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cochain::{
    coboundary, coboundary_at, require_cocycle, Certificate, Cochain, CochainFn, Coefficients,
    QZCoeff, Status, TupleCode,
};
use crate::error::{Error, Result};
use crate::group::FinGroup;
use crate::linalg::{IntMatrix, Smith};
use crate::qz::QZ;

/// Largest table the component solver will build.
pub const COMPONENT_CAP: u128 = 1_000_000;

/// A decomposition `G = A × B` into commuting subgroups with trivial intersection.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSplit {
    group: Arc<FinGroup>,
    a: Arc<FinGroup>,
    b: Arc<FinGroup>,
    a_elems: Vec<usize>,
    b_elems: Vec<usize>,
    a_generators: Vec<usize>,
    b_generators: Vec<usize>,
    parts: Vec<(usize, usize)>,
}

/// The generator form of a split, as read from and written to JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub a_generators: Vec<usize>,
    pub b_generators: Vec<usize>,
}

fn closure(group: &FinGroup, gens: &[usize]) -> Result<Vec<usize>> {
    if let Some(&g) = gens.iter().find(|&&g| g >= group.order()) {
        return Err(Error::Input(format!(
            "generator {g} is not an element of a group of order {}",
            group.order()
        )));
    }
    let mut seen = vec![false; group.order()];
    seen[group.identity()] = true;
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = group.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok(group.elements().filter(|&x| seen[x]).collect())
}

fn subgroup_table(group: &FinGroup, elems: &[usize]) -> Result<FinGroup> {
    let mut pos = vec![usize::MAX; group.order()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    let rows = elems
        .iter()
        .map(|&x| elems.iter().map(|&y| pos[group.mul(x, y)]).collect())
        .collect();
    FinGroup::from_table(rows)
}

impl ProductSplit {
    /// The split with `A` and `B` generated by the given elements of `group`.
    pub fn from_subgroups(
        group: Arc<FinGroup>,
        a_gens: &[usize],
        b_gens: &[usize],
    ) -> Result<Self> {
        let a_elems = closure(&group, a_gens)?;
        let b_elems = closure(&group, b_gens)?;
        if a_elems.len() * b_elems.len() != group.order() {
            return Err(Error::InvalidGroup(format!(
                "|A|·|B| = {}·{} differs from |G| = {}",
                a_elems.len(),
                b_elems.len(),
                group.order()
            )));
        }
        for &x in &a_elems {
            for &y in &b_elems {
                if group.mul(x, y) != group.mul(y, x) {
                    return Err(Error::InvalidGroup(format!(
                        "elements {x} of A and {y} of B do not commute"
                    )));
                }
            }
        }
        let mut parts = vec![None; group.order()];
        for (i, &x) in a_elems.iter().enumerate() {
            for (j, &y) in b_elems.iter().enumerate() {
                let g = group.mul(x, y);
                if parts[g].is_some() {
                    return Err(Error::InvalidGroup("A and B intersect nontrivially".into()));
                }
                parts[g] = Some((i, j));
            }
        }
        Ok(ProductSplit {
            a: Arc::new(subgroup_table(&group, &a_elems)?),
            b: Arc::new(subgroup_table(&group, &b_elems)?),
            parts: parts
                .into_iter()
                .map(|p| p.expect("|A||B| = |G| with trivial intersection"))
                .collect(),
            a_generators: a_gens.to_vec(),
            b_generators: b_gens.to_vec(),
            group,
            a_elems,
            b_elems,
        })
    }

    pub fn from_spec(group: Arc<FinGroup>, spec: &SplitSpec) -> Result<Self> {
        Self::from_subgroups(group, &spec.a_generators, &spec.b_generators)
    }

    /// `A × B` itself, with `(a, b)` at index `a·|B| + b`. The factors keep their presentations.
    pub fn direct(a: &FinGroup, b: &FinGroup) -> Result<Self> {
        let group = Arc::new(FinGroup::direct_product(a, b));
        let m = b.order();
        let a_gens: Vec<usize> = a.elements().map(|x| x * m).collect();
        let b_gens: Vec<usize> = b.elements().collect();
        let mut split = Self::from_subgroups(group, &a_gens, &b_gens)?;
        split.a = Arc::new(a.clone());
        split.b = Arc::new(b.clone());
        Ok(split)
    }

    pub fn spec(&self) -> SplitSpec {
        SplitSpec {
            a_generators: self.a_generators.clone(),
            b_generators: self.b_generators.clone(),
        }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn a(&self) -> &Arc<FinGroup> {
        &self.a
    }

    pub fn b(&self) -> &Arc<FinGroup> {
        &self.b
    }

    pub fn a_elements(&self) -> &[usize] {
        &self.a_elems
    }

    pub fn b_elements(&self) -> &[usize] {
        &self.b_elems
    }

    pub fn embed_a(&self, i: usize) -> usize {
        self.a_elems[i]
    }

    pub fn embed_b(&self, j: usize) -> usize {
        self.b_elems[j]
    }

    /// Indices `(i, j)` in `A` and `B` with `g = a_i b_j`.
    pub fn parts(&self, g: usize) -> (usize, usize) {
        self.parts[g]
    }

    /// The `A`-part of `g`, as an element of `G`.
    pub fn a_part(&self, g: usize) -> usize {
        self.a_elems[self.parts[g].0]
    }

    pub fn b_part(&self, g: usize) -> usize {
        self.b_elems[self.parts[g].1]
    }

    fn pattern(&self, h: usize, k: usize, g: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(g.len() + 1);
        out.extend(g[..h].iter().map(|&x| self.a_part(x)));
        out.extend(g[h..k].iter().map(|&x| self.b_part(x)));
        out.push(g[h..k].iter().fold(self.group.identity(), |acc, &x| {
            self.group.mul(acc, self.a_part(x))
        }));
        out.extend_from_slice(&g[k..]);
        out
    }

    fn check_group(&self, g: &Arc<FinGroup>) -> Result<()> {
        if Arc::ptr_eq(g, &self.group) || **g == *self.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch(
                "the cochain lives on a different group than the split".into(),
            ))
        }
    }
}

fn steps(n: usize) -> Vec<(usize, usize, i64)> {
    (0..n)
        .flat_map(|h| (h + 1..n).map(move |k| (h, k, if k % 2 == 0 { -1 } else { 1 })))
        .collect()
}

/// The first tuple of normal-form shape on which `f` is nonzero.
pub fn check_normalization<C: Coefficients, F: CochainFn<C> + ?Sized>(
    f: &F,
    split: &ProductSplit,
) -> Option<Vec<usize>> {
    let n = f.degree();
    let coeff = f.coeff();
    let a_star = &split.a_elems[1..];
    let b_star = &split.b_elems[1..];
    let g_star: Vec<usize> = split.group.elements().skip(1).collect();
    for h in 0..n {
        for k in h + 1..n {
            let slots: Vec<&[usize]> = (0..n)
                .map(|i| {
                    if i < h || i == k {
                        a_star
                    } else if i < k {
                        b_star
                    } else {
                        &g_star[..]
                    }
                })
                .collect();
            if let Some(t) = first_nonzero(&slots, |t| !coeff.is_zero(&f.eval(t))) {
                return Some(t);
            }
        }
    }
    None
}

fn first_nonzero(slots: &[&[usize]], mut hit: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if slots.iter().any(|s| s.is_empty()) {
        return None;
    }
    let mut idx = vec![0; slots.len()];
    let mut t: Vec<usize> = slots.iter().map(|s| s[0]).collect();
    loop {
        if hit(&t) {
            return Some(t);
        }
        let mut i = slots.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < slots[i].len() {
                t[i] = slots[i][idx[i]];
                break;
            }
            idx[i] = 0;
            t[i] = slots[i][0];
        }
    }
}

/// A cocycle in Lyndon normal form together with the cochain that produced it:
/// `normalized = original + ∂trail`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedForm<C: Coefficients> {
    normalized: Cochain<C>,
    trail: Cochain<C>,
    split: ProductSplit,
}

/// One component `f_{p,q}`, listing its nonzero values by indices in `A` and `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct Component<V> {
    pub p: usize,
    pub q: usize,
    pub entries: Vec<(Vec<usize>, Vec<usize>, V)>,
}

impl<V> Component<V> {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Runs the normalization on a dense cocycle.
pub fn lyndon_normalize<C: Coefficients>(
    f: &Cochain<C>,
    split: &ProductSplit,
) -> Result<NormalizedForm<C>> {
    split.check_group(f.group())?;
    require_cocycle(f)?;
    let n = f.degree();
    let (group, coeff) = (f.group().clone(), f.coeff().clone());
    let mut cur = f.clone();
    let mut trail = Cochain::zero(group.clone(), coeff.clone(), n.saturating_sub(1))?;
    for (h, k, s) in steps(n) {
        let p = Cochain::from_fn(group.clone(), coeff.clone(), n - 1, |g| {
            cur.get(&split.pattern(h, k, g))
        })?;
        cur = cur.plus(&coboundary(&p)?.scaled(s));
        trail = trail.plus(&p.scaled(s));
    }
    Ok(NormalizedForm {
        normalized: cur,
        trail,
        split: split.clone(),
    })
}

/// The value of the component `f_{p, n−p}` at `A`-indices `a` and `B`-indices `b`.
pub fn component_value<C: Coefficients, F: CochainFn<C> + ?Sized>(
    f: &F,
    split: &ProductSplit,
    a: &[usize],
    b: &[usize],
) -> C::Value {
    let args: Vec<usize> = a
        .iter()
        .map(|&i| split.embed_a(i))
        .chain(b.iter().map(|&j| split.embed_b(j)))
        .collect();
    f.eval(&args)
}

/// The component `f_{p, n−p}` of a pointwise cochain.
pub fn component<C: Coefficients, F: CochainFn<C> + ?Sized>(
    f: &F,
    split: &ProductSplit,
    p: usize,
) -> Component<C::Value> {
    let n = f.degree();
    let q = n - p;
    let ca = TupleCode::new(split.a.order(), p);
    let cb = TupleCode::new(split.b.order(), q);
    let mut entries = Vec::new();
    for i in 0..ca.count().unwrap_or(0) {
        let a = ca.decode(i);
        for j in 0..cb.count().unwrap_or(0) {
            let b = cb.decode(j);
            let v = component_value(f, split, &a, &b);
            if !f.coeff().is_zero(&v) {
                entries.push((a.clone(), b, v));
            }
        }
    }
    Component { p, q, entries }
}

impl<C: Coefficients> NormalizedForm<C> {
    pub fn normalized(&self) -> &Cochain<C> {
        &self.normalized
    }

    pub fn trail(&self) -> &Cochain<C> {
        &self.trail
    }

    pub fn split(&self) -> &ProductSplit {
        &self.split
    }

    pub fn component(&self, p: usize) -> Component<C::Value> {
        component(&self.normalized, &self.split, p)
    }

    pub fn components(&self) -> Vec<Component<C::Value>> {
        (0..=self.normalized.degree())
            .map(|p| self.component(p))
            .collect()
    }

    /// `Σ_p f_{p,q}(a(g_1), …, a(g_p), b(g_{p+1}), …, b(g_n))`, which agrees with the
    /// normalized cochain everywhere.
    pub fn reconstruct(&self, g: &[usize]) -> C::Value {
        let coeff = self.normalized.coeff();
        let n = g.len();
        (0..=n).fold(coeff.zero(), |acc, p| {
            let args: Vec<usize> = g[..p]
                .iter()
                .map(|&x| self.split.a_part(x))
                .chain(g[p..].iter().map(|&x| self.split.b_part(x)))
                .collect();
            coeff.add(&acc, &self.normalized.get(&args))
        })
    }
}

/// The normal form of a pointwise cocycle, evaluated on demand with memoized layers.
/// The base evaluator is treated as normalized.
pub struct LazyNormalized<C: Coefficients> {
    base: Arc<dyn CochainFn<C> + Send + Sync>,
    split: ProductSplit,
    steps: Vec<(usize, usize, i64)>,
    memo: Vec<Mutex<HashMap<Vec<usize>, C::Value>>>,
}

struct Layer<'a, C: Coefficients> {
    lazy: &'a LazyNormalized<C>,
    level: usize,
    h: usize,
    k: usize,
}

impl<C: Coefficients> CochainFn<C> for Layer<'_, C> {
    fn group(&self) -> &Arc<FinGroup> {
        self.lazy.base.group()
    }
    fn coeff(&self) -> &C {
        self.lazy.base.coeff()
    }
    fn degree(&self) -> usize {
        self.lazy.base.degree() - 1
    }
    fn eval(&self, args: &[usize]) -> C::Value {
        self.lazy
            .eval_level(self.level, &self.lazy.split.pattern(self.h, self.k, args))
    }
}

impl<C: Coefficients> LazyNormalized<C> {
    pub fn new(base: Arc<dyn CochainFn<C> + Send + Sync>, split: &ProductSplit) -> Result<Self> {
        split.check_group(base.group())?;
        let steps = steps(base.degree());
        Ok(LazyNormalized {
            memo: steps.iter().map(|_| Mutex::new(HashMap::new())).collect(),
            base,
            split: split.clone(),
            steps,
        })
    }

    pub fn split(&self) -> &ProductSplit {
        &self.split
    }

    /// Number of values held in the memo tables.
    pub fn memo_size(&self) -> usize {
        self.memo
            .iter()
            .map(|m| m.lock().expect("memo lock").len())
            .sum()
    }

    fn eval_level(&self, level: usize, args: &[usize]) -> C::Value {
        let coeff = self.base.coeff();
        if args.contains(&self.base.group().identity()) {
            return coeff.zero();
        }
        if level == 0 {
            return self.base.eval(args);
        }
        if let Some(v) = self.memo[level - 1].lock().expect("memo lock").get(args) {
            return v.clone();
        }
        let (h, k, s) = self.steps[level - 1];
        let layer = Layer {
            lazy: self,
            level: level - 1,
            h,
            k,
        };
        let prev = self.eval_level(level - 1, args);
        let v = coeff.add(&prev, &coeff.scale(&coboundary_at(&layer, args), s));
        self.memo[level - 1]
            .lock()
            .expect("memo lock")
            .insert(args.to_vec(), v.clone());
        v
    }
}

impl<C: Coefficients> CochainFn<C> for LazyNormalized<C> {
    fn group(&self) -> &Arc<FinGroup> {
        self.base.group()
    }
    fn coeff(&self) -> &C {
        self.base.coeff()
    }
    fn degree(&self) -> usize {
        self.base.degree()
    }
    fn eval(&self, args: &[usize]) -> C::Value {
        self.eval_level(self.steps.len(), args)
    }
}

/// The class of `f_{k,q}` in `H^k(A, H^q(B, ℚ/ℤ))`, for a normal-form cocycle whose
/// components `f_{p, n−p}` with `p < k` vanish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentClass {
    pub k: usize,
    pub q: usize,
    pub status: Status,
    pub nonzero_entries: usize,
    pub certificate: Certificate,
}

fn trivial_terms(group: &FinGroup, args: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let n = args.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = vec![(args[1..].to_vec(), 1)];
    for i in 1..n {
        let mut t = args[..i - 1].to_vec();
        t.push(group.mul(args[i - 1], args[i]));
        t.extend_from_slice(&args[i + 1..]);
        out.push((t, if i % 2 == 1 { -1 } else { 1 }));
    }
    out.push((args[..n - 1].to_vec(), if n % 2 == 1 { -1 } else { 1 }));
    out
}

/// Decides whether the lowest surviving component is a coboundary in the double complex:
/// solves `F = ∂_A h + ∂_B t` with `∂_B h = 0` over ℚ/ℤ.
pub fn component_class<F: CochainFn<QZCoeff> + ?Sized>(
    f: &F,
    split: &ProductSplit,
    k: usize,
) -> Result<ComponentClass> {
    split.check_group(f.group())?;
    if !f.coeff().is_trivial() {
        return Err(Error::Unsupported(
            "component classes need trivial ℚ/ℤ coefficients".into(),
        ));
    }
    let n = f.degree();
    if k > n {
        return Err(Error::Input(format!(
            "component index {k} exceeds the degree {n}"
        )));
    }
    let q = n - k;
    let (ga, gb) = (split.a.clone(), split.b.clone());
    let code = |g: &FinGroup, d: usize| TupleCode::new(g.order(), d);
    let size =
        code(&ga, k).count_u128() * code(&gb, q + 1).count_u128().max(code(&gb, q).count_u128());
    if size > COMPONENT_CAP {
        return Err(Error::TooLarge {
            entries: size,
            cap: COMPONENT_CAP,
            hint: "evaluate the Alt pairing instead".into(),
        });
    }
    for p in 0..k {
        if let Some((a, b, _)) = component(f, split, p).entries.first() {
            return Err(Error::Precondition(format!(
                "component ({p}, {}) is nonzero at A-indices {a:?}, B-indices {b:?}",
                n - p
            )));
        }
    }
    let count = |g: &FinGroup, d: usize| code(g, d).count().unwrap_or(0);
    let (na_k, nb_q) = (count(&ga, k), count(&gb, q));
    let values: Vec<QZ> = (0..na_k * nb_q)
        .map(|r| {
            component_value(
                f,
                split,
                &code(&ga, k).decode(r / nb_q),
                &code(&gb, q).decode(r % nb_q),
            )
        })
        .collect();
    let big_f = |a: &[usize], b: &[usize]| -> QZ {
        match (code(&ga, k).encode(a), code(&gb, q).encode(b)) {
            (Some(i), Some(j)) => values[i * nb_q + j].clone(),
            _ => QZ::zero(),
        }
    };
    for i in 0..na_k {
        let a = code(&ga, k).decode(i);
        for j in 0..count(&gb, q + 1) {
            let b = code(&gb, q + 1).decode(j);
            let d: QZ = trivial_terms(&gb, &b)
                .iter()
                .map(|(t, s)| big_f(&a, t).scale_i64(*s))
                .sum();
            if !d.is_zero() {
                return Err(Error::Precondition(format!(
                    "component ({k}, {q}) is not a B-cocycle at A-indices {a:?}, B-indices {b:?}"
                )));
            }
        }
    }

    let h_cols = if k >= 1 { count(&ga, k - 1) * nb_q } else { 0 };
    let nb_q1 = if q >= 1 { count(&gb, q - 1) } else { 0 };
    let t_cols = if q >= 1 { na_k * nb_q1 } else { 0 };
    let e2_rows = if k >= 1 {
        count(&ga, k - 1) * count(&gb, q + 1)
    } else {
        0
    };
    let rows = na_k * nb_q + e2_rows;
    let mut m = IntMatrix::zeros(rows, h_cols + t_cols);
    let mut rhs = vec![QZ::zero(); rows];
    let one = |s: i64| BigInt::from(s);
    for i in 0..na_k {
        let a = code(&ga, k).decode(i);
        for j in 0..nb_q {
            let b = code(&gb, q).decode(j);
            let row = i * nb_q + j;
            rhs[row] = values[row].clone();
            if k >= 1 {
                for (t, s) in trivial_terms(&ga, &a) {
                    if let Some(c) = code(&ga, k - 1).encode(&t) {
                        m.add_to(row, c * nb_q + j, &one(s));
                    }
                }
            }
            if q >= 1 {
                for (t, s) in trivial_terms(&gb, &b) {
                    if let Some(c) = code(&gb, q - 1).encode(&t) {
                        m.add_to(row, h_cols + i * nb_q1 + c, &one(s));
                    }
                }
            }
        }
    }
    if k >= 1 {
        let nb_up = count(&gb, q + 1);
        for i in 0..count(&ga, k - 1) {
            for j in 0..nb_up {
                let b = code(&gb, q + 1).decode(j);
                let row = na_k * nb_q + i * nb_up + j;
                for (t, s) in trivial_terms(&gb, &b) {
                    if let Some(c) = code(&gb, q).encode(&t) {
                        m.add_to(row, i * nb_q + c, &one(s));
                    }
                }
            }
        }
    }
    let smith = Smith::new(&m);
    let solved = smith.solve_qz(&rhs)?.is_some();
    let nonzero_entries = values.iter().filter(|v| !v.is_zero()).count();
    let (status, detail) = if solved {
        (
            Status::Trivial,
            format!("F = ∂_A h + ∂_B t solved with ∂_B h = 0 in bidegree ({k}, {q})"),
        )
    } else {
        (
            Status::Nontrivial,
            format!("F = ∂_A h + ∂_B t has no solution with ∂_B h = 0 in bidegree ({k}, {q})"),
        )
    };
    Ok(ComponentClass {
        k,
        q,
        status,
        nonzero_entries,
        certificate: Certificate::from_smith("component-class", &smith, detail),
    })
}

/// The antisymmetrization `Alt(f)(x, y) = f(x, y) − f(y, x)` of a 2-cocycle on an abelian group.
#[derive(Clone, Debug, PartialEq)]
pub struct AltPairing {
    group: Arc<FinGroup>,
    values: Vec<QZ>,
}

impl AltPairing {
    pub fn get(&self, x: usize, y: usize) -> &QZ {
        &self.values[x * self.group.order() + y]
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn is_alternating(&self) -> bool {
        self.group.elements().all(|x| self.get(x, x).is_zero())
    }

    pub fn is_bimultiplicative(&self) -> bool {
        let g = &self.group;
        g.elements().all(|x| {
            g.elements().all(|y| {
                g.elements().all(|z| {
                    *self.get(g.mul(x, y), z) == self.get(x, z) + self.get(y, z)
                        && *self.get(x, g.mul(y, z)) == self.get(x, y) + self.get(x, z)
                })
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(QZ::is_zero)
    }
}

pub fn alt_map<F: CochainFn<QZCoeff> + ?Sized>(f: &F) -> Result<AltPairing> {
    if f.degree() != 2 {
        return Err(Error::Input("Alt is defined on 2-cochains".into()));
    }
    if !f.group().is_abelian() {
        return Err(Error::Precondition("Alt needs an abelian group".into()));
    }
    if !f.coeff().is_trivial() {
        return Err(Error::Unsupported(
            "Alt needs trivial ℚ/ℤ coefficients".into(),
        ));
    }
    let g = f.group().clone();
    let values = g
        .elements()
        .flat_map(|x| g.elements().map(move |y| (x, y)))
        .map(|(x, y)| f.eval(&[x, y]) - f.eval(&[y, x]))
        .collect();
    Ok(AltPairing { group: g, values })
}

/// `Alt ∘ Alt` of the `(2, 2)`-component of a 4-cochain: with
/// `ψ(x_1, x_2)(y_1, y_2) = f(x_1, x_2, y_1, y_2)`, returns
/// `ψ(a_1,a_2)(b_1,b_2) − ψ(a_1,a_2)(b_2,b_1) − ψ(a_2,a_1)(b_1,b_2) + ψ(a_2,a_1)(b_2,b_1)`.
/// Arguments are indices in `A` and `B`.
pub fn alt_alt<F: CochainFn<QZCoeff> + ?Sized>(
    f: &F,
    split: &ProductSplit,
    a: [usize; 2],
    b: [usize; 2],
) -> Result<QZ> {
    split.check_group(f.group())?;
    if f.degree() != 4 {
        return Err(Error::Input("Alt ∘ Alt is taken on 4-cochains".into()));
    }
    if a.iter().any(|&i| i >= split.a.order()) || b.iter().any(|&j| j >= split.b.order()) {
        return Err(Error::Input("index out of range for A or B".into()));
    }
    let psi = |x: [usize; 2], y: [usize; 2]| component_value(f, split, &x, &y);
    let (ar, br) = ([a[1], a[0]], [b[1], b[0]]);
    Ok(psi(a, b) - psi(a, br) - psi(ar, b) + psi(ar, br))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{is_cocycle, LazyCochain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(n: u64) -> FinGroup {
        FinGroup::cyclic(n).unwrap()
    }

    fn random_coboundary(g: &Arc<FinGroup>, n: usize, den: i64, seed: u64) -> Cochain<QZCoeff> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = Cochain::from_fn(g.clone(), QZCoeff::trivial(), n - 1, |_| {
            QZ::new(rng.gen_range(0..den), den)
        })
        .unwrap();
        coboundary(&r).unwrap()
    }

    fn product_cocycle(split: &ProductSplit) -> Cochain<QZCoeff> {
        let g = split.group().clone();
        Cochain::from_fn(g.clone(), QZCoeff::trivial(), 3, |t| {
            let a = |x: usize| split.parts(x).0 as i64;
            let b = |x: usize| split.parts(x).1 as i64;
            QZ::new(a(t[0]) * b(t[1]) * b(t[2]) + b(t[0]) * b(t[1]) * a(t[2]), 2)
        })
        .unwrap()
    }

    #[test]
    fn splits_agree() {
        let g = Arc::new(FinGroup::from_invariants(&[2, 3]).unwrap());
        let s = ProductSplit::from_subgroups(g.clone(), &[3], &[1]).unwrap();
        assert_eq!(s.a().order(), 2);
        assert_eq!(s.b().order(), 3);
        for x in g.elements() {
            let (i, j) = s.parts(x);
            assert_eq!(g.mul(s.embed_a(i), s.embed_b(j)), x);
        }
        let d = ProductSplit::direct(&z(2), &z(3)).unwrap();
        assert_eq!(d.a_elements(), s.a_elements());
        assert_eq!(d.b_elements(), s.b_elements());
    }

    #[test]
    fn rejects_bad_splits() {
        let g = Arc::new(FinGroup::from_invariants(&[2, 2]).unwrap());
        assert!(ProductSplit::from_subgroups(g.clone(), &[1], &[1]).is_err());
        assert!(ProductSplit::from_subgroups(g.clone(), &[1], &[]).is_err());
        let z4 = Arc::new(z(4));
        assert!(ProductSplit::from_subgroups(z4, &[2], &[2]).is_err());
    }

    #[test]
    fn normal_form_of_cocycle_plus_coboundary() {
        let split = ProductSplit::direct(&z(2), &z(2)).unwrap();
        let g = split.group().clone();
        let f = product_cocycle(&split).plus(&random_coboundary(&g, 3, 4, 7));
        assert!(is_cocycle(&f).holds());
        let nf = lyndon_normalize(&f, &split).unwrap();
        assert_eq!(check_normalization(nf.normalized(), &split), None);
        assert_eq!(nf.normalized().minus(&f), coboundary(nf.trail()).unwrap());
        for code in 0..f.len() {
            let t = f.code().decode(code);
            assert_eq!(nf.reconstruct(&t), nf.normalized().get(&t));
        }
    }

    #[test]
    fn lazy_matches_dense() {
        let split = ProductSplit::direct(&z(2), &z(3)).unwrap();
        let g = split.group().clone();
        let f = random_coboundary(&g, 3, 6, 11);
        let dense = lyndon_normalize(&f, &split).unwrap();
        let lazy = LazyNormalized::new(Arc::new(f.clone()), &split).unwrap();
        let materialized = Cochain::materialize(&lazy).unwrap();
        assert_eq!(&materialized, dense.normalized());
        assert!(lazy.memo_size() > 0);
    }

    #[test]
    fn component_classes() {
        let split = ProductSplit::direct(&z(2), &z(2)).unwrap();
        let g = split.group().clone();
        let f = product_cocycle(&split).plus(&random_coboundary(&g, 3, 2, 3));
        let nf = lyndon_normalize(&f, &split).unwrap();
        let c0 = component_class(nf.normalized(), &split, 0).unwrap();
        assert_eq!(c0.status, Status::Trivial);
        let pure_b = Cochain::from_fn(g.clone(), QZCoeff::trivial(), 3, |t| {
            let b = |x: usize| split.parts(x).1 as i64;
            QZ::new(b(t[0]) * b(t[1]) * b(t[2]), 2)
        })
        .unwrap();
        let nb = lyndon_normalize(&pure_b, &split).unwrap();
        assert_eq!(
            component_class(nb.normalized(), &split, 0).unwrap().status,
            Status::Nontrivial
        );
        let cross = Cochain::from_fn(g.clone(), QZCoeff::trivial(), 2, |t| {
            QZ::new((split.parts(t[0]).0 * split.parts(t[1]).1) as i64, 2)
        })
        .unwrap();
        let nc = lyndon_normalize(&cross, &split).unwrap();
        assert!(nc.component(0).is_zero());
        let c1 = component_class(nc.normalized(), &split, 1).unwrap();
        assert_eq!(c1.status, Status::Nontrivial);
        assert_eq!(c1.nonzero_entries, 1);
        let c1_of_bound = lyndon_normalize(&random_coboundary(&g, 2, 2, 5), &split).unwrap();
        if c1_of_bound.component(0).is_zero() {
            assert_eq!(
                component_class(c1_of_bound.normalized(), &split, 1)
                    .unwrap()
                    .status,
                Status::Trivial
            );
        }
    }

    #[test]
    fn alt_of_bilinear_form() {
        let g = Arc::new(FinGroup::from_invariants(&[2, 2]).unwrap());
        let gc = g.clone();
        let f = LazyCochain::new(g.clone(), QZCoeff::trivial(), 2, move |t| {
            let (x, y) = (gc.tuple(t[0]), gc.tuple(t[1]));
            QZ::new((x[0] * y[1]) as i64, 2)
        })
        .unwrap();
        let alt = alt_map(&f).unwrap();
        assert!(alt.is_alternating());
        assert!(alt.is_bimultiplicative());
        assert_eq!(*alt.get(2, 1), QZ::half());
    }

    #[test]
    fn alt_alt_of_product_form() {
        let split = ProductSplit::direct(
            &FinGroup::from_invariants(&[3, 3]).unwrap(),
            &FinGroup::from_invariants(&[3, 3]).unwrap(),
        )
        .unwrap();
        let s2 = split.clone();
        let f = LazyCochain::new(split.group().clone(), QZCoeff::trivial(), 4, move |t| {
            let a = s2.a();
            let b = s2.b();
            let x: Vec<Vec<u64>> = t.iter().map(|&g| a.tuple(s2.parts(g).0)).collect();
            let y: Vec<Vec<u64>> = t.iter().map(|&g| b.tuple(s2.parts(g).1)).collect();
            let dot = |u: &[u64], v: &[u64]| (u[0] * v[0] + u[1] * v[1]) as i64;
            QZ::new(dot(&x[0], &y[1]) * dot(&x[2], &y[3]), 3)
        })
        .unwrap()
        .normalized();
        let (e1, e2) = (3, 1);
        let v = alt_alt(&f, &split, [e1, e2], [e1, e2]).unwrap();
        assert_eq!(v, QZ::zero());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = split.group().clone();
        let t: Vec<usize> = (0..5).map(|_| rng.gen_range(1..g.order())).collect();
        assert!(coboundary_at(&f, &t).is_zero());
    }
}
