//! Seifert invariants and the computations built on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::abelian::{AbelianElement, FgAbelianGroup};
use crate::groups::{ClassId, Collapsed, GroupOracle, Word};
use crate::hochschild::{Component, ComponentClass};

/// Seifert invariants. Closed fibers are `(μ, β)` with `0 < β < μ` coprime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SeifertData {
    Closed { genus: i64, b: i64, fibers: Vec<(i64, i64)> },
    Bounded { genus: i64, boundary: i64, fibers: Vec<i64> },
}

impl SeifertData {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if self.genus() < 0 {
            return bad(format!("genus {} is negative", self.genus()));
        }
        match self {
            SeifertData::Closed { fibers, .. } => {
                for &(mu, beta) in fibers {
                    if mu < 2 || beta <= 0 || beta >= mu || mu.gcd(&beta) != 1 {
                        return bad(format!("fiber ({mu}, {beta}) needs mu >= 2, 0 < beta < mu, coprime"));
                    }
                }
            }
            SeifertData::Bounded { boundary, fibers, .. } => {
                if *boundary < 1 {
                    return bad("boundary count must be at least 1".into());
                }
                if let Some(mu) = fibers.iter().find(|&&mu| mu < 2) {
                    return bad(format!("fiber order {mu} is below 2"));
                }
            }
        }
        Ok(())
    }

    pub fn genus(&self) -> i64 {
        match self {
            SeifertData::Closed { genus, .. } | SeifertData::Bounded { genus, .. } => *genus,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, SeifertData::Closed { .. })
    }

    pub fn mus(&self) -> Vec<i64> {
        match self {
            SeifertData::Closed { fibers, .. } => fibers.iter().map(|f| f.0).collect(),
            SeifertData::Bounded { fibers, .. } => fibers.clone(),
        }
    }

    /// Number of exceptional fibers.
    pub fn r(&self) -> usize {
        self.mus().len()
    }

    /// Euler characteristic of the base surface.
    pub fn surface_chi(&self) -> i64 {
        match self {
            SeifertData::Closed { genus, .. } => 2 - 2 * genus,
            SeifertData::Bounded { genus, boundary, .. } => 2 - 2 * genus - boundary,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Word>,
}

pub fn admissible(d: &SeifertData) -> bool {
    match d {
        SeifertData::Closed { genus: 0, fibers, .. } => fibers.len() >= 3,
        SeifertData::Bounded { genus: 0, boundary: 1, fibers } => fibers.len() != 1,
        _ => true,
    }
}

/// Solves `alpha mu + beta nu = 1` with `0 < beta < mu`.
pub fn tietze_convert(mu: i64, nu: i64) -> Result<(i64, i64)> {
    if mu < 2 || nu <= 0 || nu >= mu {
        return Err(Error::Invalid(format!("need 0 < nu < mu, got mu={mu}, nu={nu}")));
    }
    let e = mu.extended_gcd(&nu);
    if e.gcd != 1 {
        return Err(Error::Invalid(format!("gcd({mu}, {nu}) = {} is not 1", e.gcd)));
    }
    let beta = e.y.mod_floor(&mu);
    let alpha = (1 - beta * nu) / mu;
    debug_assert_eq!(alpha * mu + beta * nu, 1);
    Ok((alpha, beta))
}

/// The presentation with generators `γ0, a_i, b_i, g_j` (then `d_k` for
/// bounded data) and relations `g_j^μ_j = γ0`, centrality of `γ0`, and for
/// closed data `prod [a_i, b_i] prod g_j^-β_j γ0^b = 1`.
pub fn presentation(d: &SeifertData) -> Presentation {
    let sigma = d.genus() as usize;
    let mus = d.mus();
    let mut generators = vec!["γ0".to_string()];
    generators.extend((1..=sigma).map(|i| format!("a{i}")));
    generators.extend((1..=sigma).map(|i| format!("b{i}")));
    generators.extend((1..=mus.len()).map(|j| format!("g{j}")));
    if let SeifertData::Bounded { boundary, .. } = d {
        generators.extend((1..*boundary as usize).map(|k| format!("d{k}")));
    }
    let a = |i: usize| 1 + i;
    let b = |i: usize| 1 + sigma + i;
    let g = |j: usize| 1 + 2 * sigma + j;

    let mut relations = Vec::new();
    for (j, &mu) in mus.iter().enumerate() {
        relations.push(Word::from_syllables([(g(j), mu), (0, -1)]));
    }
    if let SeifertData::Closed { b: bb, fibers, .. } = d {
        let mut long = Word::identity();
        for i in 0..sigma {
            long = long.concat(&Word::from_syllables([(a(i), 1), (b(i), 1), (a(i), -1), (b(i), -1)]));
        }
        for (j, &(_, beta)) in fibers.iter().enumerate() {
            long.push(g(j), -beta);
        }
        long.push(0, *bb);
        relations.push(long);
    }
    for x in 1..generators.len() {
        relations.push(Word::from_syllables([(0, 1), (x, 1), (0, -1), (x, -1)]));
    }
    Presentation { generators, relations }
}

/// `H1` with the classes of `γ0` and each `g_j`.
#[derive(Clone, Debug)]
pub struct H1 {
    pub group: FgAbelianGroup,
    pub gamma0: AbelianElement,
    pub fibers: Vec<AbelianElement>,
}

pub fn h1(d: &SeifertData) -> Result<H1> {
    let o = GroupOracle::seifert(d)?;
    let gamma0 = o.abelianize(&Word::gen(0))?;
    let fibers = (1..=d.r())
        .map(|j| o.abelianize(&o.fiber_generator(j).expect("fiber generator")))
        .collect::<Result<Vec<_>>>()?;
    Ok(H1 { group: o.abelianization().group.clone(), gamma0, fibers })
}

pub fn euler_number(d: &SeifertData) -> Result<BigRational> {
    match d {
        SeifertData::Closed { b, fibers, .. } => {
            let mut e = BigRational::from_integer(BigInt::from(*b));
            for &(mu, beta) in fibers {
                e -= BigRational::new(BigInt::from(beta), BigInt::from(mu));
            }
            Ok(e)
        }
        SeifertData::Bounded { .. } => Err(Error::BoundedVariant),
    }
}

pub fn orbifold_chi(d: &SeifertData) -> BigRational {
    let mut chi = BigRational::from_integer(BigInt::from(d.surface_chi()));
    for mu in d.mus() {
        chi += BigRational::new(BigInt::one(), BigInt::from(mu)) - BigRational::one();
    }
    chi
}

/// The component class predicted for `χ̃_{S¹}`: `(r - χ(Σ)){γ0} - sum {g_j}`
/// at `C(γ0^-1)` and `-1` times `{g_j}` at each `C(g_j^-i)`, `0 < i < μ_j`.
pub fn components_closed_form(d: &SeifertData) -> Result<ComponentClass> {
    d.validate()?;
    if !admissible(d) {
        return Err(Error::NotAdmissible);
    }
    let o = GroupOracle::seifert(d)?;
    let h = h1(d)?;
    let r = BigInt::from(d.r());
    let chi = BigInt::from(d.surface_chi());
    let mut central = h.gamma0.scale(&(r - chi));
    for g in &h.fibers {
        central = central.sub(g);
    }
    let mut out = ComponentClass::zero(&o);
    out.insert(ClassId::Central(-1), Component::new(Collapsed::Abelian(central)));
    for (j, mu) in d.mus().into_iter().enumerate() {
        for i in 1..mu {
            let key = ClassId::Exceptional { fiber: j + 1, exponent: mu - i, offset: -1 };
            out.insert(key, Component::new(Collapsed::FiberMultiple { fiber: j + 1, n: BigInt::from(-1) }));
        }
    }
    Ok(out)
}

/// `(χ(Σ) - r){γ0} + sum {g_j}`
pub fn pd_euler_seifert(d: &SeifertData) -> Result<AbelianElement> {
    d.validate()?;
    if !admissible(d) {
        return Err(Error::NotAdmissible);
    }
    let h = h1(d)?;
    let mut acc = h.gamma0.scale(&BigInt::from(d.surface_chi() - d.r() as i64));
    for g in &h.fibers {
        acc = acc.add(g);
    }
    Ok(acc)
}

/// Order of `{γ0}` (`None` for infinite) and whether it agrees with the
/// criterion "infinite iff bounded or e = 0".
pub fn gamma0_order(d: &SeifertData) -> Result<(Option<BigInt>, bool)> {
    d.validate()?;
    let order = h1(d)?.gamma0.order();
    let predicted_infinite = match d {
        SeifertData::Bounded { .. } => true,
        SeifertData::Closed { .. } => euler_number(d)?.is_zero(),
    };
    Ok((order.clone(), order.is_none() == predicted_infinite))
}

/// Whether some exceptional component is visibly outside the image of the
/// Dennis trace. `false` only means nothing was detected.
pub fn dt_obstruction(d: &SeifertData) -> Result<bool> {
    d.validate()?;
    if !admissible(d) {
        return Err(Error::NotAdmissible);
    }
    Ok(d.r() > 0 && gamma0_order(d)?.0.is_none())
}

/// `q` with `x = q {γ0}` in `H1 ⊗ Q`, if `{γ0}` survives rationally and `x`
/// is a rational multiple of it.
pub fn rational_multiple(x: &AbelianElement, gamma0: &AbelianElement) -> Option<BigRational> {
    let pivot = gamma0.free().iter().position(|c| !c.is_zero())?;
    let q = BigRational::new(x.free()[pivot].clone(), gamma0.free()[pivot].clone());
    let fits = x
        .free()
        .iter()
        .zip(gamma0.free())
        .all(|(a, g)| BigRational::from_integer(a.clone()) == &q * BigRational::from_integer(g.clone()));
    fits.then_some(q)
}

/// Components of `Δ(γ)` indexed by the power of `γ`; `γ` moves index `k`
/// to `k - 1`.
pub type Graded = BTreeMap<i64, AbelianElement>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedDerivation {
    pub normalized: AbelianElement,
    /// `u_i` for each nonzero input index `i`.
    pub witnesses: BTreeMap<i64, Graded>,
}

fn graded_add(acc: &mut Graded, k: i64, x: &AbelianElement) {
    let cur = match acc.get(&k) {
        Some(v) => v.add(x),
        None => x.clone(),
    };
    if cur.is_zero() {
        acc.remove(&k);
    } else {
        acc.insert(k, cur);
    }
}

fn one_minus_gamma(x: &Graded) -> Graded {
    let mut out = Graded::new();
    for (&k, v) in x {
        graded_add(&mut out, k, v);
        graded_add(&mut out, k - 1, &v.neg());
    }
    out
}

/// `Δ'` concentrated at index 0 and witnesses with `Δ - Δ' = (1 - γ) sum u_i`.
pub fn normalize_derivation(group: &FgAbelianGroup, values: &Graded) -> Result<NormalizedDerivation> {
    let mut normalized = group.zero();
    let mut witnesses = BTreeMap::new();
    for (&i, a) in values {
        if a.group() != group {
            return Err(Error::Invalid(format!("component at {i} lives in {} not {group}", a.group())));
        }
        normalized = normalized.add(a);
        if i == 0 || a.is_zero() {
            continue;
        }
        let mut u = Graded::new();
        if i > 0 {
            for p in 1..=i {
                graded_add(&mut u, p, a);
            }
        } else {
            for p in i + 1..=0 {
                graded_add(&mut u, p, &a.neg());
            }
        }
        witnesses.insert(i, u);
    }
    let out = NormalizedDerivation { normalized, witnesses };
    if reconstruct_derivation(&out) != strip(values) {
        return Err(Error::RelationFailure("derivation normalization".into()));
    }
    Ok(out)
}

fn strip(values: &Graded) -> Graded {
    values.iter().filter(|(_, v)| !v.is_zero()).map(|(&k, v)| (k, v.clone())).collect()
}

/// `Δ' + (1 - γ) sum u_i`
pub fn reconstruct_derivation(n: &NormalizedDerivation) -> Graded {
    let mut total = Graded::new();
    for u in n.witnesses.values() {
        for (&k, v) in u {
            graded_add(&mut total, k, v);
        }
    }
    let mut out = one_minus_gamma(&total);
    graded_add(&mut out, 0, &n.normalized);
    out
}
