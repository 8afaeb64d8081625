//! Finite groups given by multiplication tables, abelian groups with residue-tuple
//! coordinates, homomorphisms, G-modules and short exact sequences of G-modules.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group on the indices `0..order`, with `0` the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FinGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    /// Cyclic factors of an abelian presentation; element `i` is the mixed-radix tuple
    /// of `i` with the last factor varying fastest.
    factors: Option<Vec<u64>>,
}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.factors {
            Some(fs) => write!(f, "FinGroup(abelian {:?})", fs),
            None => write!(f, "FinGroup(order {})", self.order),
        }
    }
}

impl FinGroup {
    pub fn from_invariants(factors: &[u64]) -> Result<FinGroup> {
        if let Some(bad) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!(
                "cyclic factor {bad} is smaller than 2"
            )));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .filter(|&n| n <= 1 << 16)
            .ok_or_else(|| {
                Error::InvalidGroup("group too large for a multiplication table".into())
            })?;
        let strides = strides(factors);
        let tuple = |i: usize| -> Vec<u64> {
            factors
                .iter()
                .zip(&strides)
                .map(|(&d, &s)| ((i / s) as u64) % d)
                .collect()
        };
        let tuples: Vec<Vec<u64>> = (0..order).map(tuple).collect();
        let index =
            |t: &[u64]| -> usize { t.iter().zip(&strides).map(|(&x, &s)| x as usize * s).sum() };
        let mut table = vec![0; order * order];
        let mut inverse = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                let sum: Vec<u64> = tuples[a]
                    .iter()
                    .zip(&tuples[b])
                    .zip(factors)
                    .map(|((x, y), d)| (x + y) % d)
                    .collect();
                table[a * order + b] = index(&sum);
            }
            let neg: Vec<u64> = tuples[a]
                .iter()
                .zip(factors)
                .map(|(x, d)| (d - x) % d)
                .collect();
            inverse[a] = index(&neg);
        }
        Ok(FinGroup {
            order,
            table,
            inverse,
            factors: Some(factors.to_vec()),
        })
    }

    pub fn cyclic(n: u64) -> Result<FinGroup> {
        FinGroup::from_invariants(&[n])
    }

    pub fn trivial() -> FinGroup {
        FinGroup::from_invariants(&[]).expect("trivial group")
    }

    /// Validates a Cayley table: identity at index 0, closure, associativity, inverses.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<FinGroup> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let m = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            if m(0, a) != a || m(a, 0) != a {
                return Err(Error::InvalidGroup(format!(
                    "index 0 is not an identity at element {a}"
                )));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| m(a, b) == 0) {
                Some(b) if m(b, a) == 0 => inverse[a] = b,
                _ => {
                    return Err(Error::InvalidGroup(format!(
                        "element {a} has no two-sided inverse"
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FinGroup {
            order: n,
            table,
            inverse,
            factors: None,
        })
    }

    /// `G × H` with `(g, h)` at index `g·|H| + h`; abelian presentations concatenate.
    pub fn direct_product(g: &FinGroup, h: &FinGroup) -> FinGroup {
        if let (Some(a), Some(b)) = (&g.factors, &h.factors) {
            let mut fs = a.clone();
            fs.extend(b);
            return FinGroup::from_invariants(&fs).expect("product of valid factors");
        }
        let (n, m) = (g.order, h.order);
        let order = n * m;
        let mut table = vec![0; order * order];
        let mut inverse = vec![0; order];
        for x in 0..order {
            let (x1, x2) = (x / m, x % m);
            inverse[x] = g.inv(x1) * m + h.inv(x2);
            for y in 0..order {
                let (y1, y2) = (y / m, y % m);
                table[x * order + y] = g.mul(x1, y1) * m + h.mul(x2, y2);
            }
        }
        FinGroup {
            order,
            table,
            inverse,
            factors: None,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn product(&self, xs: &[usize]) -> usize {
        xs.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    pub fn pow(&self, g: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|g| self.element_order(g))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.factors.is_some()
            || self
                .elements()
                .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    pub fn factors(&self) -> Option<&[u64]> {
        self.factors.as_deref()
    }

    pub(crate) fn require_factors(&self) -> Result<&[u64]> {
        self.factors().ok_or_else(|| {
            Error::InvalidModule("coefficient group needs an abelian presentation".into())
        })
    }

    /// Residue tuple of an element of an abelian presentation.
    pub fn tuple(&self, i: usize) -> Vec<u64> {
        let fs = self
            .factors
            .as_ref()
            .expect("group has no abelian presentation");
        fs.iter()
            .zip(strides(fs))
            .map(|(&d, s)| ((i / s) as u64) % d)
            .collect()
    }

    /// Index of a residue tuple; entries are reduced modulo their factor.
    pub fn index_of(&self, t: &[i64]) -> usize {
        let fs = self
            .factors
            .as_ref()
            .expect("group has no abelian presentation");
        assert_eq!(t.len(), fs.len(), "tuple length");
        t.iter()
            .zip(fs)
            .zip(strides(fs))
            .map(|((&x, &d), s)| x.rem_euclid(d as i64) as usize * s)
            .sum()
    }

    pub fn index_of_big(&self, t: &[BigInt]) -> usize {
        let fs = self
            .factors
            .as_ref()
            .expect("group has no abelian presentation");
        let small: Vec<i64> = t
            .iter()
            .zip(fs)
            .map(|(x, &d)| {
                let r = x % BigInt::from(d);
                r.to_i64().unwrap()
            })
            .collect();
        self.index_of(&small)
    }

    /// The unit tuples `e_1, …, e_k` of an abelian presentation.
    pub fn generators(&self) -> Vec<usize> {
        let k = self.factors.as_ref().map_or(0, |f| f.len());
        (0..k)
            .map(|j| {
                let mut t = vec![0i64; k];
                t[j] = 1;
                self.index_of(&t)
            })
            .collect()
    }

    pub fn elements_of_order(&self, k: usize) -> Vec<usize> {
        self.elements()
            .filter(|&g| self.element_order(g) == k)
            .collect()
    }

    /// Multiplication table rows, as accepted by [`FinGroup::from_table`].
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }
}

fn strides(factors: &[u64]) -> Vec<usize> {
    let mut s = vec![1usize; factors.len()];
    for j in (0..factors.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * factors[j + 1] as usize;
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FinGroup>,
    target: Arc<FinGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        source: Arc<FinGroup>,
        target: Arc<FinGroup>,
        images: Vec<usize>,
    ) -> Result<GroupHom> {
        if images.len() != source.order() || images.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidHom("image table has the wrong shape".into()));
        }
        for x in source.elements() {
            for y in source.elements() {
                if images[source.mul(x, y)] != target.mul(images[x], images[y]) {
                    return Err(Error::InvalidHom(format!(
                        "h(xy) != h(x)h(y) at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: Arc<FinGroup>) -> GroupHom {
        let images = g.elements().collect();
        GroupHom {
            source: g.clone(),
            target: g,
            images,
        }
    }

    /// Extends generator images of an abelian source additively.
    pub fn from_generator_images(
        source: Arc<FinGroup>,
        target: Arc<FinGroup>,
        gens: &[usize],
    ) -> Result<GroupHom> {
        let fs = source
            .factors()
            .ok_or_else(|| Error::InvalidHom("source has no abelian presentation".into()))?
            .to_vec();
        if gens.len() != fs.len() {
            return Err(Error::InvalidHom(
                "one image per cyclic factor expected".into(),
            ));
        }
        let images = source
            .elements()
            .map(|x| {
                source
                    .tuple(x)
                    .iter()
                    .zip(gens)
                    .fold(0, |acc, (&k, &g)| target.mul(acc, target.pow(g, k)))
            })
            .collect();
        GroupHom::new(source, target, images)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn source(&self) -> &Arc<FinGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinGroup> {
        &self.target
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source
            .elements()
            .filter(|&x| self.images[x] == 0)
            .collect()
    }
}

/// A finite abelian group `M` with a left action of `G` by automorphisms.
#[derive(Clone, PartialEq, Eq)]
pub struct GModule {
    group: Arc<FinGroup>,
    module: Arc<FinGroup>,
    action: Vec<Vec<usize>>,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GModule({:?} over {:?}, {})",
            self.module,
            self.group,
            if self.is_trivial() {
                "trivial"
            } else {
                "twisted"
            }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum ModuleViolation {
    Shape { detail: String },
    IdentityActsNontrivially { element: usize },
    NotBijective { g: usize },
    NotHomomorphism { g: usize, x: usize, y: usize },
    NotCompatible { g: usize, h: usize, x: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReport {
    pub valid: bool,
    pub violations: Vec<ModuleViolation>,
}

impl GModule {
    pub fn new(
        group: Arc<FinGroup>,
        module: Arc<FinGroup>,
        action: Vec<Vec<usize>>,
    ) -> Result<GModule> {
        let m = GModule::new_unchecked(group, module, action)?;
        let report = m.verify();
        match report.violations.first() {
            None => Ok(m),
            Some(v) => Err(Error::InvalidModule(format!("{v:?}"))),
        }
    }

    /// Builds the module without checking the action axioms; see [`GModule::verify`].
    pub fn new_unchecked(
        group: Arc<FinGroup>,
        module: Arc<FinGroup>,
        action: Vec<Vec<usize>>,
    ) -> Result<GModule> {
        module.require_factors()?;
        Ok(GModule {
            group,
            module,
            action,
        })
    }

    pub fn trivial(group: Arc<FinGroup>, module: Arc<FinGroup>) -> Result<GModule> {
        let action = vec![module.elements().collect(); group.order()];
        GModule::new(group, module, action)
    }

    /// Action given by the images of the module's generators under each group element.
    pub fn from_generator_images(
        group: Arc<FinGroup>,
        module: Arc<FinGroup>,
        images: &[Vec<usize>],
    ) -> Result<GModule> {
        if images.len() != group.order() {
            return Err(Error::InvalidModule(
                "one generator-image list per group element expected".into(),
            ));
        }
        let mut action = Vec::with_capacity(group.order());
        for gi in images {
            let hom = GroupHom::from_generator_images(module.clone(), module.clone(), gi)
                .map_err(|e| Error::InvalidModule(e.to_string()))?;
            action.push(hom.images().to_vec());
        }
        GModule::new(group, module, action)
    }

    /// Action pulled back along `rho: G → H` from an `H`-module.
    pub fn pullback(&self, rho: &GroupHom) -> Result<GModule> {
        if rho.target().as_ref() != self.group.as_ref() {
            return Err(Error::GroupMismatch(
                "pullback along a map into another group".into(),
            ));
        }
        let action = rho
            .source()
            .elements()
            .map(|g| self.action[rho.apply(g)].clone())
            .collect();
        GModule::new(rho.source().clone(), self.module.clone(), action)
    }

    pub fn verify(&self) -> ModuleReport {
        let mut violations = Vec::new();
        let (g, m) = (&self.group, &self.module);
        if self.action.len() != g.order()
            || self
                .action
                .iter()
                .any(|a| a.len() != m.order() || a.iter().any(|&x| x >= m.order()))
        {
            violations.push(ModuleViolation::Shape {
                detail: "action table must list one permutation of M per group element".into(),
            });
            return ModuleReport {
                valid: false,
                violations,
            };
        }
        if let Some(x) = m.elements().find(|&x| self.action[0][x] != x) {
            violations.push(ModuleViolation::IdentityActsNontrivially { element: x });
        }
        for gi in g.elements() {
            let mut seen = vec![false; m.order()];
            for &y in &self.action[gi] {
                seen[y] = true;
            }
            if seen.iter().any(|s| !s) {
                violations.push(ModuleViolation::NotBijective { g: gi });
            }
            'hom: for x in m.elements() {
                for y in m.elements() {
                    if self.action[gi][m.mul(x, y)] != m.mul(self.action[gi][x], self.action[gi][y])
                    {
                        violations.push(ModuleViolation::NotHomomorphism { g: gi, x, y });
                        break 'hom;
                    }
                }
            }
        }
        'comp: for a in g.elements() {
            for b in g.elements() {
                for x in m.elements() {
                    if self.action[a][self.action[b][x]] != self.action[g.mul(a, b)][x] {
                        violations.push(ModuleViolation::NotCompatible { g: a, h: b, x });
                        break 'comp;
                    }
                }
            }
        }
        ModuleReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn module(&self) -> &Arc<FinGroup> {
        &self.module
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn is_trivial(&self) -> bool {
        self.action
            .iter()
            .all(|a| a.iter().enumerate().all(|(i, &x)| i == x))
    }

    pub fn factors(&self) -> &[u64] {
        self.module.factors().expect("checked at construction")
    }

    pub fn rank(&self) -> usize {
        self.factors().len()
    }

    pub fn coords(&self, x: usize) -> Vec<BigInt> {
        self.module.tuple(x).into_iter().map(BigInt::from).collect()
    }

    pub fn from_coords(&self, c: &[BigInt]) -> usize {
        self.module.index_of_big(c)
    }

    /// Column `j` holds the coordinates of `g · e_j`.
    pub fn action_matrix(&self, g: usize) -> Vec<Vec<BigInt>> {
        let gens = self.module.generators();
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|&e| self.coords(self.act(g, e))).collect();
        let r = gens.len();
        (0..r)
            .map(|i| (0..r).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// Fixed points `M^G`.
    pub fn invariants(&self) -> Vec<usize> {
        self.module
            .elements()
            .filter(|&x| self.group.elements().all(|g| self.act(g, x) == x))
            .collect()
    }
}

/// A `G`-equivariant homomorphism between modules over the same group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    source: Arc<GModule>,
    target: Arc<GModule>,
    images: Vec<usize>,
}

impl ModuleHom {
    pub fn new(
        source: Arc<GModule>,
        target: Arc<GModule>,
        images: Vec<usize>,
    ) -> Result<ModuleHom> {
        if source.group() != target.group() {
            return Err(Error::GroupMismatch(
                "module homomorphism between modules over different groups".into(),
            ));
        }
        let hom = GroupHom::new(source.module().clone(), target.module().clone(), images)?;
        for g in source.group().elements() {
            for x in source.module().elements() {
                if hom.apply(source.act(g, x)) != target.act(g, hom.apply(x)) {
                    return Err(Error::InvalidHom(format!(
                        "not equivariant at g = {g}, x = {x}"
                    )));
                }
            }
        }
        Ok(ModuleHom {
            source,
            target,
            images: hom.images().to_vec(),
        })
    }

    pub fn from_generator_images(
        source: Arc<GModule>,
        target: Arc<GModule>,
        gens: &[usize],
    ) -> Result<ModuleHom> {
        let hom = GroupHom::from_generator_images(
            source.module().clone(),
            target.module().clone(),
            gens,
        )?;
        ModuleHom::new(source, target, hom.images().to_vec())
    }

    pub fn identity(m: Arc<GModule>) -> ModuleHom {
        let images = m.module().elements().collect();
        ModuleHom {
            source: m.clone(),
            target: m,
            images,
        }
    }

    pub fn zero(source: Arc<GModule>, target: Arc<GModule>) -> Result<ModuleHom> {
        let images = vec![0; source.module().order()];
        ModuleHom::new(source, target, images)
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn source(&self) -> &Arc<GModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GModule> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|&x| x == 0)
    }

    /// Integer matrix on coordinates: column `j` is the target coordinates of the image of `e_j`.
    pub fn matrix(&self) -> Vec<Vec<BigInt>> {
        let gens = self.source.module().generators();
        let cols: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|&e| self.target.coords(self.apply(e)))
            .collect();
        (0..self.target.rank())
            .map(|i| (0..gens.len()).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source
            .module()
            .elements()
            .filter(|&x| self.images[x] == 0)
            .collect()
    }
}

/// `0 → A --i--> B --r--> C → 0` with a normalized set-theoretic section `s` of `r`.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    inclusion: ModuleHom,
    projection: ModuleHom,
    section: Vec<usize>,
    preimage: HashMap<usize, usize>,
}

impl ShortExactSeq {
    /// Without a section, each `c` is sent to its least-index preimage.
    pub fn new(
        inclusion: ModuleHom,
        projection: ModuleHom,
        section: Option<Vec<usize>>,
    ) -> Result<ShortExactSeq> {
        if inclusion.target() != projection.source() {
            return Err(Error::InvalidModule("i and r do not compose".into()));
        }
        let b = inclusion.target().module().clone();
        let c = projection.target().module().clone();
        let mut preimage = HashMap::new();
        for a in inclusion.source().module().elements() {
            if preimage.insert(inclusion.apply(a), a).is_some() {
                return Err(Error::InvalidModule("i is not injective".into()));
            }
        }
        for x in b.elements() {
            let in_image = preimage.contains_key(&x);
            let in_kernel = projection.apply(x) == 0;
            if in_image != in_kernel {
                return Err(Error::InvalidModule(format!(
                    "im(i) != ker(r) at element {x}"
                )));
            }
        }
        let section = match section {
            Some(s) => s,
            None => {
                let mut s = vec![usize::MAX; c.order()];
                for x in b.elements().rev() {
                    s[projection.apply(x)] = x;
                }
                if s.contains(&usize::MAX) {
                    return Err(Error::InvalidModule("r is not surjective".into()));
                }
                s
            }
        };
        if section.len() != c.order() || section.iter().any(|&x| x >= b.order()) {
            return Err(Error::InvalidModule("section has the wrong shape".into()));
        }
        if section[0] != 0 {
            return Err(Error::InvalidModule("section must send 0 to 0".into()));
        }
        if let Some(x) = c.elements().find(|&x| projection.apply(section[x]) != x) {
            return Err(Error::InvalidModule(format!("r(s(c)) != c at c = {x}")));
        }
        Ok(ShortExactSeq {
            inclusion,
            projection,
            section,
            preimage,
        })
    }

    pub fn with_section(&self, section: Vec<usize>) -> Result<ShortExactSeq> {
        ShortExactSeq::new(
            self.inclusion.clone(),
            self.projection.clone(),
            Some(section),
        )
    }

    pub fn inclusion(&self) -> &ModuleHom {
        &self.inclusion
    }

    pub fn projection(&self) -> &ModuleHom {
        &self.projection
    }

    pub fn sub(&self) -> &Arc<GModule> {
        self.inclusion.source()
    }

    pub fn middle(&self) -> &Arc<GModule> {
        self.inclusion.target()
    }

    pub fn quotient(&self) -> &Arc<GModule> {
        self.projection.target()
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    pub fn lift(&self, c: usize) -> usize {
        self.section[c]
    }

    pub fn preimage(&self, b: usize) -> Option<usize> {
        self.preimage.get(&b).copied()
    }

    /// Every normalized section, for exhaustive checks on small quotients.
    pub fn all_sections(&self) -> Vec<Vec<usize>> {
        let b = self.middle().module().clone();
        let c = self.quotient().module().order();
        let fibers: Vec<Vec<usize>> = (0..c)
            .map(|x| {
                if x == 0 {
                    vec![0]
                } else {
                    b.elements()
                        .filter(|&y| self.projection.apply(y) == x)
                        .collect()
                }
            })
            .collect();
        let mut out = vec![Vec::new()];
        for fiber in &fibers {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    fiber.iter().map(move |&y| {
                        let mut p = prefix.clone();
                        p.push(y);
                        p
                    })
                })
                .collect();
        }
        out
    }
}
