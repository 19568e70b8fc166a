//! Group elements, normal forms and the decision services used by the
//! Hochschild calculus.
//!
//! Seifert groups are handled through the projection to `G / <γ0>`. For
//! bounded data that quotient is a free product of copies of `Z` and the
//! cyclic groups `Z/μ_j`, so reduced free-product words lifted with
//! exponents `0 < i < μ_j` give a genuine normal form. For closed data the
//! same reduction is valid but no longer unique; only the words
//! `γ0^k` and `γ0^k g_j^i` are treated as decided.

pub mod abelian;
pub mod smith;
mod word;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seifert::{self, SeifertData};
use abelian::{abelian_quotient, AbelianElement, Abelianization};
use smith::IntMatrix;
pub use word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleKind {
    FreeAbelian { rank: usize },
    FiniteCyclic { order: u64 },
    Seifert(SeifertData),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Gamma0,
    Free,
    /// 1-based fiber number and its order.
    Fiber(usize, i64),
}

/// Conjugacy class label. Fiber numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassId {
    Central(i64),
    Exceptional { fiber: usize, exponent: i64, offset: i64 },
    FreeAbelianValue(Vec<i64>),
    Opaque(Word),
}

impl ClassId {
    /// Label of the class after multiplying its elements by `γ0^shift`.
    pub fn shifted(&self, shift: i64) -> ClassId {
        match self {
            ClassId::Central(k) => ClassId::Central(k + shift),
            ClassId::Exceptional { fiber, exponent, offset } => {
                ClassId::Exceptional { fiber: *fiber, exponent: *exponent, offset: offset + shift }
            }
            other => other.clone(),
        }
    }

    pub fn is_central(&self) -> bool {
        matches!(self, ClassId::Central(_))
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassId::Central(k) => write!(f, "C(γ0^{k})"),
            ClassId::Exceptional { fiber, exponent, offset } => {
                write!(f, "C(γ0^{offset} g{fiber}^{exponent})")
            }
            ClassId::FreeAbelianValue(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "C({})", s.join(","))
            }
            ClassId::Opaque(w) => write!(f, "C[{w}]"),
        }
    }
}

/// A word together with the conjugator taking it to its class representative:
/// `conjugator * word * conjugator^-1 == rep`.
#[derive(Clone, Debug)]
pub struct Conjugated {
    pub class: ClassId,
    pub rep: Word,
    pub conjugator: Word,
}

/// Image of a centralizer element in the abelianized centralizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Collapsed {
    /// Centralizer is all of `G`; value in `H1(G)`.
    Abelian(AbelianElement),
    /// Centralizer `<g_j>`; value `n {g_j}`.
    FiberMultiple { fiber: usize, n: BigInt },
    /// Centralizer `<root, γ0>`; value `a {root} + b {γ0}`.
    RootLattice { root: Word, a: BigInt, b: BigInt },
}

impl Collapsed {
    pub fn is_zero(&self) -> bool {
        use num_traits::Zero;
        match self {
            Collapsed::Abelian(x) => x.is_zero(),
            Collapsed::FiberMultiple { n, .. } => n.is_zero(),
            Collapsed::RootLattice { a, b, .. } => a.is_zero() && b.is_zero(),
        }
    }

    pub fn add(&self, other: &Collapsed) -> Collapsed {
        match (self, other) {
            (Collapsed::Abelian(x), Collapsed::Abelian(y)) => Collapsed::Abelian(x.add(y)),
            (Collapsed::FiberMultiple { fiber, n }, Collapsed::FiberMultiple { fiber: f2, n: n2 }) => {
                assert_eq!(fiber, f2, "fiber multiples of different fibers");
                Collapsed::FiberMultiple { fiber: *fiber, n: n + n2 }
            }
            (Collapsed::RootLattice { root, a, b }, Collapsed::RootLattice { root: r2, a: a2, b: b2 }) => {
                assert_eq!(root, r2, "root lattices with different roots");
                Collapsed::RootLattice { root: root.clone(), a: a + a2, b: b + b2 }
            }
            _ => panic!("collapsed values of different centralizer types"),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Collapsed {
        match self {
            Collapsed::Abelian(x) => Collapsed::Abelian(x.scale(k)),
            Collapsed::FiberMultiple { fiber, n } => Collapsed::FiberMultiple { fiber: *fiber, n: n * k },
            Collapsed::RootLattice { root, a, b } => Collapsed::RootLattice { root: root.clone(), a: a * k, b: b * k },
        }
    }
}

impl fmt::Display for Collapsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Collapsed::Abelian(x) => write!(f, "{x}"),
            Collapsed::FiberMultiple { fiber, n } => write!(f, "{n}{{g{fiber}}}"),
            Collapsed::RootLattice { root, a, b } => write!(f, "{a}{{{root}}} + {b}{{γ0}}"),
        }
    }
}

#[derive(Debug)]
pub struct GroupOracle {
    kind: OracleKind,
    names: Vec<String>,
    roles: Vec<Role>,
    ab: Abelianization,
    exact: bool,
}

impl PartialEq for GroupOracle {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for GroupOracle {}

pub fn same_oracle(a: &Arc<GroupOracle>, b: &Arc<GroupOracle>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GroupOracle {
    pub fn free_abelian(rank: usize) -> Arc<Self> {
        let names = (1..=rank).map(|i| format!("x{i}")).collect();
        let ab = abelian_quotient(rank, &IntMatrix::zeros(0, rank));
        Arc::new(GroupOracle { kind: OracleKind::FreeAbelian { rank }, names, roles: vec![], ab, exact: true })
    }

    pub fn cyclic(order: u64) -> Result<Arc<Self>> {
        if order == 0 {
            return Err(Error::Invalid("cyclic group order must be positive".into()));
        }
        let ab = abelian_quotient(1, &IntMatrix::from_rows(1, &[vec![BigInt::from(order)]]));
        Ok(Arc::new(GroupOracle {
            kind: OracleKind::FiniteCyclic { order },
            names: vec!["x".into()],
            roles: vec![],
            ab,
            exact: true,
        }))
    }

    pub fn seifert(d: &SeifertData) -> Result<Arc<Self>> {
        d.validate()?;
        let pres = seifert::presentation(d);
        let n = pres.generators.len();
        let mut roles = vec![Role::Gamma0];
        roles.extend(std::iter::repeat_n(Role::Free, 2 * d.genus() as usize));
        for (j, &mu) in d.mus().iter().enumerate() {
            roles.push(Role::Fiber(j + 1, mu));
        }
        if let SeifertData::Bounded { boundary, .. } = d {
            roles.extend(std::iter::repeat_n(Role::Free, *boundary as usize - 1));
        }
        debug_assert_eq!(roles.len(), n);

        let rows: Vec<Vec<BigInt>> =
            pres.relations.iter().map(|r| (0..n).map(|g| BigInt::from(r.exponent_sum(g))).collect()).collect();
        let ab = abelian_quotient(n, &IntMatrix::from_rows(n, &rows));
        let exact = match d {
            SeifertData::Bounded { .. } => true,
            SeifertData::Closed { .. } => ab.images[0].order().is_none(),
        };
        Ok(Arc::new(GroupOracle { kind: OracleKind::Seifert(d.clone()), names: pres.generators, roles, ab, exact }))
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// False for closed Seifert data whose ordinary fiber has finite order in
    /// `H1`; class arithmetic is then formal.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_abelian_kind(&self) -> bool {
        !matches!(self.kind, OracleKind::Seifert(_))
    }

    pub fn seifert_data(&self) -> Option<&SeifertData> {
        match &self.kind {
            OracleKind::Seifert(d) => Some(d),
            _ => None,
        }
    }

    pub fn gamma0(&self) -> Option<Word> {
        self.seifert_data().map(|_| Word::gen(0))
    }

    /// Generator word of fiber `j` (1-based).
    pub fn fiber_generator(&self, j: usize) -> Option<Word> {
        self.roles.iter().position(|r| matches!(r, Role::Fiber(f, _) if *f == j)).map(Word::gen)
    }

    pub fn fiber_order(&self, j: usize) -> Option<i64> {
        self.roles.iter().find_map(|r| match r {
            Role::Fiber(f, mu) if *f == j => Some(*mu),
            _ => None,
        })
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.names)
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.generator_count() => {
                Err(Error::UnknownGenerator { id: g, count: self.generator_count() })
            }
            _ => Ok(()),
        }
    }

    pub fn normalize(&self, w: &Word) -> Result<Word> {
        self.check(w)?;
        Ok(match &self.kind {
            OracleKind::FreeAbelian { rank } => {
                let v = exponent_vector(w, *rank);
                Word::from_syllables(v.into_iter().enumerate())
            }
            OracleKind::FiniteCyclic { order } => {
                let e = w.exponent_sum(0).mod_floor(&(*order as i64));
                Word::gen_pow(0, e)
            }
            OracleKind::Seifert(_) => {
                let (k, rest) = self.reduce(w);
                assemble(k, &rest)
            }
        })
    }

    pub fn mul(&self, a: &Word, b: &Word) -> Result<Word> {
        self.normalize(&a.concat(b))
    }

    /// Splits a Seifert word into `γ0^k` and a reduced free-product word with
    /// fiber exponents in `(0, μ_j)`.
    fn reduce(&self, w: &Word) -> (i64, Vec<(usize, i64)>) {
        let mut k = 0i64;
        let mut stack: Vec<(usize, i64)> = Vec::new();
        for &(g, e) in w.syllables() {
            match self.roles[g] {
                Role::Gamma0 => k += e,
                role => {
                    let mut e = e;
                    if let Some(&(top, te)) = stack.last() {
                        if top == g {
                            e += te;
                            stack.pop();
                        }
                    }
                    if let Role::Fiber(_, mu) = role {
                        k += Integer::div_floor(&e, &mu);
                        e = e.mod_floor(&mu);
                    }
                    if e != 0 {
                        stack.push((g, e));
                    }
                }
            }
        }
        (k, stack)
    }

    /// Whether the word's normal form is decided by this oracle.
    pub fn is_recognized(&self, w: &Word) -> Result<bool> {
        self.check(w)?;
        Ok(match &self.kind {
            OracleKind::Seifert(SeifertData::Closed { .. }) => {
                let (_, rest) = self.reduce(w);
                match rest.as_slice() {
                    [] => true,
                    [(g, _)] => matches!(self.roles[*g], Role::Fiber(..)),
                    _ => false,
                }
            }
            _ => true,
        })
    }

    /// `None` when equality cannot be decided.
    pub fn equal(&self, a: &Word, b: &Word) -> Result<Option<bool>> {
        let (na, nb) = (self.normalize(a)?, self.normalize(b)?);
        if na == nb {
            return Ok(Some(true));
        }
        if self.is_recognized(&na)? && self.is_recognized(&nb)? {
            Ok(Some(false))
        } else {
            Ok(None)
        }
    }

    pub fn is_central(&self, w: &Word) -> Result<bool> {
        let d = match &self.kind {
            OracleKind::Seifert(d) => d,
            _ => {
                self.check(w)?;
                return Ok(true);
            }
        };
        self.check(w)?;
        let (_, rest) = self.reduce(w);
        if rest.is_empty() || self.quotient_factor_count() <= 1 {
            return Ok(true);
        }
        match d {
            SeifertData::Bounded { .. } => Ok(false),
            SeifertData::Closed { genus: 0, fibers, .. } if fibers.len() <= 2 => Ok(true),
            SeifertData::Closed { .. } => {
                if self.is_recognized(w)? {
                    Ok(false)
                } else {
                    Err(Error::Undecidable(format!("centrality of {}", self.render(w))))
                }
            }
        }
    }

    fn quotient_factor_count(&self) -> usize {
        self.roles.iter().filter(|r| !matches!(r, Role::Gamma0)).count()
    }

    pub fn class_id(&self, w: &Word) -> Result<ClassId> {
        Ok(self.conjugacy_normal_form(w)?.class)
    }

    /// Canonical class representative and a conjugator reaching it.
    pub fn conjugacy_normal_form(&self, w: &Word) -> Result<Conjugated> {
        let n = self.normalize(w)?;
        match &self.kind {
            OracleKind::FreeAbelian { rank } => Ok(Conjugated {
                class: ClassId::FreeAbelianValue(exponent_vector(&n, *rank)),
                rep: n,
                conjugator: Word::identity(),
            }),
            OracleKind::FiniteCyclic { .. } => Ok(Conjugated {
                class: ClassId::FreeAbelianValue(vec![n.exponent_sum(0)]),
                rep: n,
                conjugator: Word::identity(),
            }),
            OracleKind::Seifert(SeifertData::Closed { .. }) => {
                if !self.is_recognized(&n)? {
                    return Err(Error::UnrecognizedWord(self.render(&n)));
                }
                let (k, rest) = self.reduce(&n);
                Ok(Conjugated { class: self.label(k, &rest, &n), rep: n, conjugator: Word::identity() })
            }
            OracleKind::Seifert(SeifertData::Bounded { .. }) => Ok(self.bounded_conjugacy(&n)),
        }
    }

    fn label(&self, k: i64, rest: &[(usize, i64)], rep: &Word) -> ClassId {
        match rest {
            [] => ClassId::Central(k),
            [(g, i)] => match self.roles[*g] {
                Role::Fiber(fiber, _) => ClassId::Exceptional { fiber, exponent: *i, offset: k },
                _ => ClassId::Opaque(rep.clone()),
            },
            _ => ClassId::Opaque(rep.clone()),
        }
    }

    fn bounded_conjugacy(&self, n: &Word) -> Conjugated {
        let (mut k, mut rest) = self.reduce(n);
        let mut t = Word::identity();
        // cyclic reduction: conjugate by the last syllable while it merges with the first
        while rest.len() >= 2 && rest[0].0 == rest[rest.len() - 1].0 {
            let (g, e) = rest[rest.len() - 1];
            let s = Word::gen_pow(g, e);
            t = s.concat(&t);
            let x = s.concat(&assemble(k, &rest)).concat(&s.inverse());
            (k, rest) = self.reduce(&x);
        }
        // least rotation; rotating by i conjugates by (s_0 ... s_{i-1})^-1
        if rest.len() >= 2 {
            let len = rest.len();
            let best = (0..len)
                .min_by(|&i, &j| {
                    let ri = rest[i..].iter().chain(&rest[..i]);
                    let rj = rest[j..].iter().chain(&rest[..j]);
                    ri.cmp(rj)
                })
                .unwrap_or(0);
            let prefix = Word::from_syllables(rest[..best].iter().copied());
            t = prefix.inverse().concat(&t);
            rest.rotate_left(best);
        }
        let rep = assemble(k, &rest);
        let conjugator = assemble_reduced(self, &t);
        Conjugated { class: self.label(k, &rest, &rep), rep, conjugator }
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.ab
    }

    pub fn abelianize(&self, w: &Word) -> Result<AbelianElement> {
        self.check(w)?;
        let v: Vec<BigInt> = (0..self.generator_count()).map(|g| BigInt::from(w.exponent_sum(g))).collect();
        Ok(self.ab.image(&v))
    }

    /// Value of a centralizer element `z` of the class representative in the
    /// abelianized centralizer.
    pub fn collapse(&self, class: &ClassId, z: &Word) -> Result<Collapsed> {
        let irreducible = || Error::IrreducibleTerm(format!("{} in centralizer of {class}", self.render(z)));
        match class {
            ClassId::FreeAbelianValue(_) | ClassId::Central(_) => Ok(Collapsed::Abelian(self.abelianize(z)?)),
            ClassId::Exceptional { fiber, .. } => {
                let (a, rest) = self.reduce(&self.normalize(z)?);
                let mu = self.fiber_order(*fiber).ok_or_else(irreducible)?;
                let b = match rest.as_slice() {
                    [] => 0,
                    [(g, b)] if self.roles[*g] == Role::Fiber(*fiber, mu) => *b,
                    _ => return Err(irreducible()),
                };
                Ok(Collapsed::FiberMultiple { fiber: *fiber, n: BigInt::from(a) * mu + b })
            }
            ClassId::Opaque(rep) => {
                let (_, rep_rest) = self.reduce(rep);
                let root = root_of(&rep_rest);
                let (kz, zrest) = self.reduce(&self.normalize(z)?);
                let a: i64 = if zrest.is_empty() {
                    0
                } else if root.len() == 1 {
                    match zrest.as_slice() {
                        [(g, c)] if *g == root[0].0 => *c,
                        _ => return Err(irreducible()),
                    }
                } else {
                    let q = (zrest.len() / root.len()) as i64;
                    let rw = Word::from_syllables(root.iter().copied());
                    if self.reduce(&rw.pow(q)).1 == zrest {
                        q
                    } else if self.reduce(&rw.pow(-q)).1 == zrest {
                        -q
                    } else {
                        return Err(irreducible());
                    }
                };
                let root_word = Word::from_syllables(root.iter().copied());
                let (ka, arest) = self.reduce(&root_word.pow(a));
                if arest != zrest {
                    return Err(irreducible());
                }
                Ok(Collapsed::RootLattice { root: root_word, a: BigInt::from(a), b: BigInt::from(kz - ka) })
            }
        }
    }
}

fn exponent_vector(w: &Word, rank: usize) -> Vec<i64> {
    (0..rank).map(|g| w.exponent_sum(g)).collect()
}

fn assemble(k: i64, rest: &[(usize, i64)]) -> Word {
    Word::from_syllables(std::iter::once((0, k)).chain(rest.iter().copied()))
}

fn assemble_reduced(o: &GroupOracle, w: &Word) -> Word {
    let (k, rest) = o.reduce(w);
    assemble(k, &rest)
}

/// Primitive root of a cyclically reduced free-product word: its shortest
/// period, or `g^1` for a single free syllable.
fn root_of(rest: &[(usize, i64)]) -> Vec<(usize, i64)> {
    if rest.len() == 1 {
        return vec![(rest[0].0, 1)];
    }
    let n = rest.len();
    let p = (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| rest[i] == rest[i - p])).unwrap_or(n);
    rest[..p].to_vec()
}
