//! Hochschild chains of degree at most 2 and their reduction to
//! conjugacy-class components.
//!
//! A 1-chain term `u (x) v` has marker `x = uv`. If `t_x` is the canonical
//! conjugator of `x` (so `t_x x t_x^-1 = c`), the term is sent to the class of
//! `t_x u t_(vu)^-1` in the abelianized centralizer of `c`. Because the
//! conjugator depends only on the element, this is a chain map, and it kills
//! degree-2 boundaries.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groupring::{mat_trace_product, GroupRingElement, GroupRingMatrix};
use crate::groups::abelian::AbelianElement;
use crate::groups::{same_oracle, ClassId, Collapsed, GroupOracle, OracleKind, Word};

fn bump<K: Ord + Clone>(map: &mut BTreeMap<K, BigInt>, k: K, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(k.clone()).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(&k);
    }
}

/// `sum n_i u_i (x) v_i` with normalized words.
#[derive(Clone, Debug)]
pub struct Chain1 {
    oracle: Arc<GroupOracle>,
    terms: BTreeMap<(Word, Word), BigInt>,
}

impl PartialEq for Chain1 {
    fn eq(&self, other: &Self) -> bool {
        same_oracle(&self.oracle, &other.oracle) && self.terms == other.terms
    }
}

impl Eq for Chain1 {}

impl Chain1 {
    pub fn zero(oracle: &Arc<GroupOracle>) -> Self {
        Chain1 { oracle: oracle.clone(), terms: BTreeMap::new() }
    }

    pub fn term(oracle: &Arc<GroupOracle>, u: &Word, v: &Word, c: impl Into<BigInt>) -> Result<Self> {
        let mut z = Self::zero(oracle);
        z.push(u, v, c.into())?;
        Ok(z)
    }

    pub fn from_terms<I, C>(oracle: &Arc<GroupOracle>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Word, C)>,
        C: Into<BigInt>,
    {
        let mut z = Self::zero(oracle);
        for (u, v, c) in terms {
            z.push(&u, &v, c.into())?;
        }
        Ok(z)
    }

    fn push(&mut self, u: &Word, v: &Word, c: BigInt) -> Result<()> {
        let key = (self.oracle.normalize(u)?, self.oracle.normalize(v)?);
        bump(&mut self.terms, key, c);
        Ok(())
    }

    /// Bilinear expansion of `a (x) b`.
    pub fn tensor(a: &GroupRingElement, b: &GroupRingElement) -> Result<Self> {
        if !same_oracle(a.oracle(), b.oracle()) {
            return Err(Error::OracleMismatch);
        }
        let mut z = Self::zero(a.oracle());
        for (u, x) in a.terms() {
            for (v, y) in b.terms() {
                bump(&mut z.terms, (u.clone(), v.clone()), x * y);
            }
        }
        Ok(z)
    }

    pub fn oracle(&self) -> &Arc<GroupOracle> {
        &self.oracle
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &BigInt)> {
        self.terms.iter().map(|((u, v), c)| (u, v, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_oracle(&self.oracle, &other.oracle) {
            return Err(Error::OracleMismatch);
        }
        let mut z = self.clone();
        for (k, c) in &other.terms {
            bump(&mut z.terms, k.clone(), c.clone());
        }
        Ok(z)
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut z = Self::zero(&self.oracle);
        for (key, c) in &self.terms {
            bump(&mut z.terms, key.clone(), c * k);
        }
        z
    }

    /// `d(u (x) v) = vu - uv`
    pub fn boundary(&self) -> Result<GroupRingElement> {
        let o = &self.oracle;
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for ((u, v), c) in &self.terms {
            terms.push((v.concat(u), c.clone()));
            terms.push((u.concat(v), -c));
        }
        GroupRingElement::from_terms(o, terms)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((u, v), c)| format!("{c}·{} ⊗ {}", self.oracle.render(u), self.oracle.render(v)))
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Chain1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `sum n_i s1_i (x) s2_i (x) m_i`
#[derive(Clone, Debug)]
pub struct Chain2 {
    oracle: Arc<GroupOracle>,
    terms: BTreeMap<(Word, Word, Word), BigInt>,
}

impl Chain2 {
    pub fn zero(oracle: &Arc<GroupOracle>) -> Self {
        Chain2 { oracle: oracle.clone(), terms: BTreeMap::new() }
    }

    pub fn from_terms<I, C>(oracle: &Arc<GroupOracle>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Word, Word, C)>,
        C: Into<BigInt>,
    {
        let mut z = Self::zero(oracle);
        for (a, b, m, c) in terms {
            let key = (oracle.normalize(&a)?, oracle.normalize(&b)?, oracle.normalize(&m)?);
            bump(&mut z.terms, key, c.into());
        }
        Ok(z)
    }

    pub fn oracle(&self) -> &Arc<GroupOracle> {
        &self.oracle
    }

    /// `d(s1 (x) s2 (x) m) = s2 (x) m s1 - s1 s2 (x) m + s1 (x) s2 m`
    pub fn boundary(&self) -> Result<Chain1> {
        let mut out = Chain1::zero(&self.oracle);
        for ((s1, s2, m), c) in &self.terms {
            out.push(s2, &m.concat(s1), c.clone())?;
            out.push(&s1.concat(s2), m, -c)?;
            out.push(s1, &s2.concat(m), c.clone())?;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleStatus {
    Cycle,
    /// Boundary survives only on words the oracle cannot compare.
    Undecided,
}

#[derive(Clone, Debug)]
pub struct Traced {
    pub chain: Chain1,
    pub status: CycleStatus,
}

pub fn cycle_status(boundary: &GroupRingElement, what: &str) -> Result<CycleStatus> {
    match boundary.decide_zero() {
        Some(true) => Ok(CycleStatus::Cycle),
        Some(false) => Err(Error::NotACycle(format!("{what}: boundary {boundary}"))),
        None => Ok(CycleStatus::Undecided),
    }
}

/// `sum_ij A_ij (x) B_ji`, checked against `trace(AB) = trace(BA)`.
pub fn trace_t1(a: &GroupRingMatrix, b: &GroupRingMatrix) -> Result<Traced> {
    let ab = mat_trace_product(a, b)?;
    let ba = mat_trace_product(b, a)?;
    let mut chain = Chain1::zero(a.oracle());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (x, y) = (a.get(i, j), b.get(j, i));
            if x.is_zero() || y.is_zero() {
                continue;
            }
            chain = chain.add(&Chain1::tensor(x, y)?)?;
        }
    }
    let status = cycle_status(&ba.sub(&ab)?, "trace")?;
    Ok(Traced { chain, status })
}

pub fn dennis_trace(u: &GroupRingMatrix, uinv: &GroupRingMatrix) -> Result<Traced> {
    if u.rows() != u.cols() || uinv.rows() != u.rows() || uinv.cols() != u.cols() {
        return Err(Error::DimensionMismatch("Dennis trace needs square matrices of equal size".into()));
    }
    let id = GroupRingMatrix::identity(u.oracle(), u.rows());
    if u.mul(uinv)? != id || uinv.mul(u)? != id {
        return Err(Error::NotInverse);
    }
    trace_t1(u, uinv)
}

/// `u (x) v -> u (x) v w^-1` for central `w`.
pub fn central_action(w: &Word, c: &Chain1) -> Result<Chain1> {
    let o = c.oracle();
    if !o.is_central(w)? {
        return Err(Error::NotCentral(o.render(w)));
    }
    let wi = w.inverse();
    Chain1::from_terms(o, c.terms().map(|(u, v, n)| (u.clone(), v.concat(&wi), n.clone())))
}

/// Splits a chain by the conjugacy class of each term's marker `uv`.
pub fn canonical_decompose(c: &Chain1) -> Result<BTreeMap<ClassId, Chain1>> {
    let o = c.oracle();
    let mut parts: BTreeMap<ClassId, Chain1> = BTreeMap::new();
    for (u, v, n) in c.terms() {
        let class = o.class_id(&u.concat(v))?;
        let part = parts.entry(class).or_insert_with(|| Chain1::zero(o));
        part.push(u, v, n.clone())?;
    }
    Ok(parts)
}

/// One conjugacy-class component: centralizer entries and their collapsed
/// value.
#[derive(Clone, Debug)]
pub struct Component {
    pub entries: BTreeMap<Word, BigInt>,
    pub value: Collapsed,
}

impl Component {
    pub fn new(value: Collapsed) -> Self {
        Component { entries: BTreeMap::new(), value }
    }

    pub fn with_entry(mut self, w: Word, n: impl Into<BigInt>) -> Self {
        bump(&mut self.entries, w, n.into());
        self
    }

    fn merge(&mut self, other: &Component) {
        for (w, n) in &other.entries {
            bump(&mut self.entries, w.clone(), n.clone());
        }
        self.value = self.value.add(&other.value);
    }
}

/// Element of the direct sum over conjugacy classes of the abelianized
/// centralizers. Equality compares collapsed values only.
#[derive(Clone, Debug)]
pub struct ComponentClass {
    oracle: Arc<GroupOracle>,
    components: BTreeMap<ClassId, Component>,
}

impl PartialEq for ComponentClass {
    fn eq(&self, other: &Self) -> bool {
        same_oracle(&self.oracle, &other.oracle) && self.nonzero() == other.nonzero()
    }
}

impl ComponentClass {
    pub fn zero(oracle: &Arc<GroupOracle>) -> Self {
        ComponentClass { oracle: oracle.clone(), components: BTreeMap::new() }
    }

    pub fn oracle(&self) -> &Arc<GroupOracle> {
        &self.oracle
    }

    pub fn insert(&mut self, class: ClassId, comp: Component) {
        match self.components.get_mut(&class) {
            Some(existing) => existing.merge(&comp),
            None => {
                self.components.insert(class, comp);
            }
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (&ClassId, &Component)> {
        self.components.iter()
    }

    pub fn get(&self, class: &ClassId) -> Option<&Collapsed> {
        self.components.get(class).map(|c| &c.value)
    }

    /// Collapsed values with zero components dropped.
    pub fn nonzero(&self) -> BTreeMap<ClassId, Collapsed> {
        self.components.iter().filter(|(_, c)| !c.value.is_zero()).map(|(k, c)| (k.clone(), c.value.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero().is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_oracle(&self.oracle, &other.oracle) {
            return Err(Error::OracleMismatch);
        }
        let mut z = self.clone();
        for (k, c) in &other.components {
            z.insert(k.clone(), c.clone());
        }
        Ok(z)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut z = Self::zero(&self.oracle);
        for (class, c) in &self.components {
            let mut entries = BTreeMap::new();
            for (w, n) in &c.entries {
                bump(&mut entries, w.clone(), n * k);
            }
            z.components.insert(class.clone(), Component { entries, value: c.value.scale(k) });
        }
        z
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Image under the central action of `w`: component `C` moves to
    /// `C w^-1`, values unchanged.
    pub fn act(&self, w: &Word) -> Result<Self> {
        let o = &self.oracle;
        if !o.is_central(w)? {
            return Err(Error::NotCentral(o.render(w)));
        }
        let wi = w.inverse();
        let mut z = Self::zero(o);
        for (class, c) in &self.components {
            let rep = class_representative(o, class);
            let moved = o.class_id(&rep.concat(&wi))?;
            z.insert(moved, c.clone());
        }
        Ok(z)
    }

    /// Image in `H1(G)` under the inclusions of the centralizers.
    pub fn epsilon(&self) -> Result<AbelianElement> {
        let o = &self.oracle;
        let mut acc = o.abelianization().group.zero();
        for c in self.components.values() {
            let img = match &c.value {
                Collapsed::Abelian(x) => x.clone(),
                Collapsed::FiberMultiple { fiber, n } => {
                    let g = o.fiber_generator(*fiber).ok_or_else(|| Error::Invalid(format!("no fiber {fiber}")))?;
                    o.abelianize(&g)?.scale(n)
                }
                Collapsed::RootLattice { root, a, b } => {
                    let g0 = o.gamma0().unwrap_or_default();
                    o.abelianize(root)?.scale(a).add(&o.abelianize(&g0)?.scale(b))
                }
            };
            acc = acc.add(&img);
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        let nz: Vec<String> = self.nonzero().iter().map(|(k, v)| format!("{k}: {v}")).collect();
        if nz.is_empty() {
            "0".into()
        } else {
            nz.join("; ")
        }
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A word in the class labelled `class`.
pub fn class_representative(o: &GroupOracle, class: &ClassId) -> Word {
    match class {
        ClassId::Central(k) => Word::gen_pow(0, *k),
        ClassId::Exceptional { fiber, exponent, offset } => {
            let g = o.fiber_generator(*fiber).expect("fiber exists");
            Word::gen_pow(0, *offset).concat(&g.pow(*exponent))
        }
        ClassId::FreeAbelianValue(v) => Word::from_syllables(v.iter().copied().enumerate()),
        ClassId::Opaque(w) => w.clone(),
    }
}

pub fn reduce_class(c: &Chain1) -> Result<ComponentClass> {
    let o = c.oracle();
    let mut out = ComponentClass::zero(o);
    for (u, v, n) in c.terms() {
        let x = o.conjugacy_normal_form(&u.concat(v))?;
        let y = o.conjugacy_normal_form(&v.concat(u))?;
        if x.class != y.class {
            return Err(Error::IrreducibleTerm(format!(
                "{} ⊗ {}: markers {} and {} not identified as conjugate",
                o.render(u),
                o.render(v),
                x.class,
                y.class
            )));
        }
        let z = o.normalize(&x.conjugator.concat(u).concat(&y.conjugator.inverse()))?;
        let value = o.collapse(&x.class, &z)?.scale(n);
        out.insert(x.class, Component::new(value).with_entry(z, n.clone()));
    }
    Ok(out)
}

/// `sum n_i A(u_i)`
pub fn epsilon_star(c: &Chain1) -> Result<AbelianElement> {
    cycle_status(&c.boundary()?, "epsilon_star input")?;
    let o = c.oracle();
    let mut acc = o.abelianization().group.zero();
    for (u, _, n) in c.terms() {
        acc = acc.add(&o.abelianize(u)?.scale(n));
    }
    Ok(acc)
}

/// Partitions by membership of the class in the Gottlieb set.
pub fn split_components(c: &ComponentClass, gottlieb: impl Fn(&ClassId) -> bool) -> (ComponentClass, ComponentClass) {
    let mut prime = ComponentClass::zero(c.oracle());
    let mut second = ComponentClass::zero(c.oracle());
    for (k, comp) in c.components() {
        if gottlieb(k) {
            prime.insert(k.clone(), comp.clone());
        } else {
            second.insert(k.clone(), comp.clone());
        }
    }
    (prime, second)
}

/// Gottlieb classes used throughout: every class for abelian oracles, the
/// central classes for Seifert oracles.
pub fn default_gottlieb(o: &GroupOracle) -> impl Fn(&ClassId) -> bool + '_ {
    move |k| match o.kind() {
        OracleKind::Seifert(_) => k.is_central(),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::SeifertData;

    fn w(s: &[(usize, i64)]) -> Word {
        Word::from_syllables(s.iter().copied())
    }

    fn bounded23() -> Arc<GroupOracle> {
        GroupOracle::seifert(&SeifertData::Bounded { genus: 0, boundary: 1, fibers: vec![2, 3] }).unwrap()
    }

    #[test]
    fn abelian_boundaries() {
        let o = GroupOracle::free_abelian(1);
        let x = Word::gen(0);
        assert!(Chain1::term(&o, &x, &x.pow(2), 1).unwrap().boundary().unwrap().is_zero());
        let c2 = Chain2::from_terms(&o, [(x.clone(), x.clone(), Word::identity(), 1)]).unwrap();
        let expect = Chain1::from_terms(&o, [(x.clone(), x.clone(), 2), (x.pow(2), Word::identity(), -1)]).unwrap();
        assert_eq!(c2.boundary().unwrap(), expect);
    }

    #[test]
    fn nonabelian_boundary() {
        let o = bounded23();
        let c = Chain1::term(&o, &Word::gen(1), &Word::gen(2), 1).unwrap();
        let d = c.boundary().unwrap();
        assert_eq!(d.decide_zero(), Some(false));
    }

    #[test]
    fn traces_and_cycles() {
        let o = bounded23();
        let g = |s: &[(usize, i64)]| GroupRingElement::word(&o, &w(s)).unwrap();
        let a = GroupRingMatrix::diagonal(&o, vec![g(&[(1, 1)])]).unwrap();
        let ai = GroupRingMatrix::diagonal(&o, vec![g(&[(1, -1)])]).unwrap();
        let t = trace_t1(&a, &ai).unwrap();
        assert_eq!(t.status, CycleStatus::Cycle);
        assert_eq!(t.chain, Chain1::term(&o, &Word::gen(1), &Word::gen_pow(1, -1), 1).unwrap());
        let b = GroupRingMatrix::diagonal(&o, vec![g(&[(2, 1)])]).unwrap();
        assert!(matches!(trace_t1(&a, &b), Err(Error::NotACycle(_))));
    }

    #[test]
    fn dennis_trace_examples() {
        let o = GroupOracle::free_abelian(1);
        let x = GroupRingElement::word(&o, &Word::gen(0)).unwrap();
        let one = GroupRingElement::one(&o);
        let zero = GroupRingElement::zero(&o);
        let u = GroupRingMatrix::from_rows(&o, vec![vec![one.clone(), x.clone()], vec![zero.clone(), one.clone()]])
            .unwrap();
        let ui = GroupRingMatrix::from_rows(&o, vec![vec![one.clone(), x.neg()], vec![zero, one.clone()]]).unwrap();
        let t = dennis_trace(&u, &ui).unwrap();
        assert_eq!(t.chain, Chain1::term(&o, &Word::identity(), &Word::identity(), 2).unwrap());
        assert!(reduce_class(&t.chain).unwrap().is_zero());

        let m = GroupRingMatrix::diagonal(&o, vec![one.neg()]).unwrap();
        let t = dennis_trace(&m, &m).unwrap();
        assert!(reduce_class(&t.chain).unwrap().is_zero());

        assert_eq!(dennis_trace(&u, &u).unwrap_err(), Error::NotInverse);
    }

    #[test]
    fn action_of_gamma0() {
        let o = bounded23();
        let c = Chain1::term(&o, &Word::gen(1), &Word::gen(2), 1).unwrap();
        let acted = central_action(&Word::gen(0), &c).unwrap();
        assert_eq!(acted, Chain1::term(&o, &Word::gen(1), &w(&[(2, 1), (0, -1)]), 1).unwrap());
        assert_eq!(central_action(&Word::identity(), &c).unwrap(), c);
        let twice = central_action(&Word::gen(0), &acted).unwrap();
        assert_eq!(twice, central_action(&Word::gen_pow(0, 2), &c).unwrap());
        assert!(matches!(central_action(&Word::gen(1), &c), Err(Error::NotCentral(_))));
    }

    #[test]
    fn decompose_by_marker() {
        let o = bounded23();
        let g1 = Word::gen(1);
        let c = Chain1::from_terms(&o, [(g1.clone(), w(&[(1, -1), (0, -1)]), 1), (g1.clone(), g1.pow(-2), 1)]).unwrap();
        let parts = canonical_decompose(&c).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.contains_key(&ClassId::Central(-1)));
        assert!(parts.contains_key(&ClassId::Exceptional { fiber: 1, exponent: 1, offset: -1 }));
        let total = parts.values().try_fold(Chain1::zero(&o), |acc, p| acc.add(p)).unwrap();
        assert_eq!(total, c);
    }

    #[test]
    fn reduction_examples() {
        let o = GroupOracle::free_abelian(1);
        let x = Word::gen(0);
        let c = Chain1::from_terms(&o, [(x.clone(), x.clone(), 3), (x.pow(2), Word::identity(), 1)]).unwrap();
        let r = reduce_class(&c).unwrap();
        let five = o.abelianization().group.free_generator(0).scale(&BigInt::from(5));
        assert_eq!(r.get(&ClassId::FreeAbelianValue(vec![2])), Some(&Collapsed::Abelian(five)));

        let c = Chain1::term(&o, &x, &x.pow(-2), -1).unwrap();
        let r = reduce_class(&c).unwrap();
        let minus = o.abelianization().group.free_generator(0).neg();
        assert_eq!(
            r.nonzero().into_iter().collect::<Vec<_>>(),
            vec![(ClassId::FreeAbelianValue(vec![-1]), Collapsed::Abelian(minus))]
        );

        let c = Chain1::term(&o, &Word::identity(), &x, 1).unwrap();
        assert!(reduce_class(&c).unwrap().is_zero());
    }

    #[test]
    fn epsilon_examples() {
        let o = GroupOracle::free_abelian(1);
        let x = Word::gen(0);
        let c = Chain1::term(&o, &x, &x.pow(-2), -1).unwrap();
        assert_eq!(epsilon_star(&c).unwrap(), o.abelianization().group.free_generator(0).neg());
        let s = bounded23();
        let bad = Chain1::term(&s, &Word::gen(1), &Word::gen(2), 1).unwrap();
        assert!(matches!(epsilon_star(&bad), Err(Error::NotACycle(_))));
    }

    #[test]
    fn split_extremes() {
        let o = bounded23();
        let g1 = Word::gen(1);
        let c = Chain1::from_terms(&o, [(g1.clone(), g1.pow(-3), -1), (g1.clone(), g1.pow(-2), -1)]).unwrap();
        let r = reduce_class(&c).unwrap();
        let (p, q) = split_components(&r, |_| false);
        assert!(p.is_zero());
        assert_eq!(q, r);
        let (p, q) = split_components(&r, default_gottlieb(&o));
        assert_eq!(p.nonzero().len(), 1);
        assert_eq!(q.nonzero().len(), 1);
        assert_eq!(p.add(&q).unwrap(), r);
    }
}
