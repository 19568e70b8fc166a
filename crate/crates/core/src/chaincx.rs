//! Based free chain complexes over the group ring, chain homotopies of the
//! identity, and the trace invariant built from them.
//!
//! Sign conventions. Everything is assembled into square matrices over all
//! cells: `∂~` has block `(k-1, k)` equal to `∂_k`, `D~` has block `(k+1, k)`
//! equal to `(-1)^(k+1) D_k`, and `I~ = diag((-1)^k)`, with `k` the absolute
//! degree. A homotopy with translation element `η` must satisfy
//!
//! ```text
//! D~ ∂~ - ∂~ D~ = I~ (1 - η^-1)
//! ```
//!
//! Changing basis by `e'_j = e_j u_j` conjugates both matrices by `U`, and
//! the trace changes by `(1 - γ) sum_j (-1)^(k_j + 1) u_j (x) u_j^-1`, where
//! `γ` acts by `u (x) v -> u (x) v η^-1`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::groupring::{GroupRingElement, GroupRingMatrix};
use crate::groups::{same_oracle, GroupOracle, Word};
use crate::hochschild::{central_action, trace_t1, Chain1, Traced};

fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedComplex {
    oracle: Arc<GroupOracle>,
    base_degree: i64,
    sizes: Vec<usize>,
    /// `boundaries[k]` maps degree `base + k + 1` to `base + k`.
    boundaries: Vec<GroupRingMatrix>,
}

impl BasedComplex {
    pub fn new(
        oracle: &Arc<GroupOracle>,
        base_degree: i64,
        sizes: Vec<usize>,
        boundaries: Vec<GroupRingMatrix>,
    ) -> Result<Self> {
        if boundaries.len() + 1 != sizes.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} boundary maps, got {}",
                sizes.len(),
                sizes.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (k, b) in boundaries.iter().enumerate() {
            if !same_oracle(b.oracle(), oracle) {
                return Err(Error::OracleMismatch);
            }
            if b.rows() != sizes[k] || b.cols() != sizes[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "boundary out of degree {} is {}x{}, expected {}x{}",
                    base_degree + k as i64 + 1,
                    b.rows(),
                    b.cols(),
                    sizes[k],
                    sizes[k + 1]
                )));
            }
        }
        for k in 1..boundaries.len() {
            let dd = boundaries[k - 1].mul(&boundaries[k])?;
            for i in 0..dd.rows() {
                for j in 0..dd.cols() {
                    if dd.get(i, j).decide_zero() == Some(false) {
                        return Err(Error::Invalid(format!(
                            "boundary squares to {} in degree {}",
                            dd.get(i, j),
                            base_degree + k as i64 + 1
                        )));
                    }
                }
            }
        }
        Ok(BasedComplex { oracle: oracle.clone(), base_degree, sizes, boundaries })
    }

    pub fn oracle(&self) -> &Arc<GroupOracle> {
        &self.oracle
    }

    pub fn base_degree(&self) -> i64 {
        self.base_degree
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn boundary(&self, k: usize) -> &GroupRingMatrix {
        &self.boundaries[k]
    }

    pub fn rank(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// First aggregate index of each degree slot.
    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.sizes
            .iter()
            .map(|s| {
                let o = acc;
                acc += s;
                o
            })
            .collect()
    }

    /// Absolute degree of every aggregate basis index.
    pub fn degrees(&self) -> Vec<i64> {
        self.sizes.iter().enumerate().flat_map(|(k, &s)| std::iter::repeat_n(self.base_degree + k as i64, s)).collect()
    }

    pub fn tilde_boundary(&self) -> GroupRingMatrix {
        let off = self.offsets();
        let mut m = GroupRingMatrix::zeros(&self.oracle, self.rank(), self.rank());
        for (k, b) in self.boundaries.iter().enumerate() {
            m.place(off[k], off[k + 1], b);
        }
        m
    }

    pub fn tilde_sign(&self) -> GroupRingMatrix {
        let entries = self.degrees().into_iter().map(|d| GroupRingElement::from_int(&self.oracle, sign(d))).collect();
        GroupRingMatrix::diagonal(&self.oracle, entries).expect("same oracle")
    }

    /// Aggregate matrix whose block `(k+1, k)` is `maps[k]` scaled by the
    /// given per-degree sign.
    fn assemble_up(&self, maps: &[GroupRingMatrix], fold: impl Fn(i64) -> BigInt) -> GroupRingMatrix {
        let off = self.offsets();
        let mut m = GroupRingMatrix::zeros(&self.oracle, self.rank(), self.rank());
        for (k, d) in maps.iter().enumerate() {
            let s = fold(self.base_degree + k as i64);
            m.place(off[k + 1], off[k], &d.scale(&s));
        }
        m
    }
}

/// Chain homotopy from the identity to the action of `η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    /// `maps[k]` raises degree `base + k` to `base + k + 1`.
    maps: Vec<GroupRingMatrix>,
    eta: Word,
}

impl Homotopy {
    pub fn new(c: &BasedComplex, maps: Vec<GroupRingMatrix>, eta: &Word) -> Result<Self> {
        if maps.len() + 1 != c.sizes.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} homotopy maps, got {}",
                c.sizes.len(),
                c.sizes.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (k, d) in maps.iter().enumerate() {
            if !same_oracle(d.oracle(), &c.oracle) {
                return Err(Error::OracleMismatch);
            }
            if d.rows() != c.sizes[k + 1] || d.cols() != c.sizes[k] {
                return Err(Error::DimensionMismatch(format!(
                    "homotopy out of degree {} is {}x{}, expected {}x{}",
                    c.base_degree + k as i64,
                    d.rows(),
                    d.cols(),
                    c.sizes[k + 1],
                    c.sizes[k]
                )));
            }
        }
        Ok(Homotopy { maps, eta: c.oracle.normalize(eta)? })
    }

    pub fn zero(c: &BasedComplex) -> Self {
        let maps =
            (0..c.boundaries.len()).map(|k| GroupRingMatrix::zeros(&c.oracle, c.sizes[k + 1], c.sizes[k])).collect();
        Homotopy { maps, eta: Word::identity() }
    }

    pub fn eta(&self) -> &Word {
        &self.eta
    }

    pub fn map(&self, k: usize) -> &GroupRingMatrix {
        &self.maps[k]
    }

    pub fn maps(&self) -> &[GroupRingMatrix] {
        &self.maps
    }

    pub fn tilde(&self, c: &BasedComplex) -> GroupRingMatrix {
        c.assemble_up(&self.maps, |k| sign(k + 1))
    }

    /// Copy with one map replaced, for fault injection.
    pub fn with_map(&self, k: usize, m: GroupRingMatrix) -> Self {
        let mut h = self.clone();
        h.maps[k] = m;
        h
    }
}

/// `D~ ∂~ - ∂~ D~ - I~ (1 - η^-1)`
fn relation_defect(c: &BasedComplex, h: &Homotopy) -> Result<GroupRingMatrix> {
    let d = c.tilde_boundary();
    let dt = h.tilde(c);
    let lhs = dt.mul(&d)?.sub(&d.mul(&dt)?)?;
    let one = GroupRingElement::one(&c.oracle);
    let factor = one.sub(&GroupRingElement::word(&c.oracle, &h.eta.inverse())?)?;
    let n = c.rank();
    let rhs = c.tilde_sign().mul(&GroupRingMatrix::diagonal(&c.oracle, vec![factor; n])?)?;
    lhs.sub(&rhs)
}

pub fn verify_homotopy(c: &BasedComplex, h: &Homotopy) -> Result<bool> {
    if h.maps.len() != c.boundaries.len() {
        return Err(Error::DimensionMismatch("homotopy and complex have different lengths".into()));
    }
    Ok(relation_defect(c, h)?.is_zero())
}

/// `T1(∂~ (x) D~)`
pub fn x1_trace(c: &BasedComplex, h: &Homotopy) -> Result<Traced> {
    if !verify_homotopy(c, h)? {
        return Err(Error::RelationFailure(format!("defect {}", relation_defect(c, h)?)));
    }
    trace_t1(&c.tilde_boundary(), &h.tilde(c))
}

/// Sum of the level traces; all levels must share one translation element.
pub fn x1_filtered(levels: &[(BasedComplex, Homotopy)]) -> Result<Traced> {
    let Some((first, _)) = levels.first() else {
        return Err(Error::Invalid("no levels".into()));
    };
    let o = first.oracle.clone();
    let eta = &levels[0].1.eta;
    let mut chain = Chain1::zero(&o);
    let mut status = crate::hochschild::CycleStatus::Cycle;
    for (c, h) in levels {
        if !same_oracle(&c.oracle, &o) {
            return Err(Error::OracleMismatch);
        }
        if o.equal(&h.eta, eta)? != Some(true) {
            return Err(Error::MixedEta);
        }
        let t = x1_trace(c, h)?;
        if t.status != crate::hochschild::CycleStatus::Cycle {
            status = t.status;
        }
        chain = chain.add(&t.chain)?;
    }
    Ok(Traced { chain, status })
}

/// Rebases by a diagonal matrix of signed group elements (one per aggregate
/// basis index). Returns the new complex and homotopy with the correction
/// `old trace - new trace`.
pub fn rebase(c: &BasedComplex, h: &Homotopy, u: &GroupRingMatrix) -> Result<(BasedComplex, Homotopy, Chain1)> {
    let n = c.rank();
    if u.rows() != n || u.cols() != n {
        return Err(Error::DimensionMismatch(format!("rebasing matrix must be {n}x{n}")));
    }
    let o = &c.oracle;
    let mut units = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && !u.get(i, j).is_zero() {
                return Err(Error::NotDiagonalUnit);
            }
        }
        let x = u.get(i, i);
        let mut terms = x.terms();
        let (Some((w, s)), None) = (terms.next(), terms.next()) else {
            return Err(Error::NotDiagonalUnit);
        };
        if !(s.is_one() || (-s).is_one()) {
            return Err(Error::NotDiagonalUnit);
        }
        units.push((w.clone(), s.clone()));
    }
    let uinv_entries =
        units.iter().map(|(w, s)| GroupRingElement::monomial(o, &w.inverse(), s.clone())).collect::<Result<_>>()?;
    let uinv = GroupRingMatrix::diagonal(o, uinv_entries)?;

    let off = c.offsets();
    let blk = |m: &GroupRingMatrix, k: usize| m.block(off[k], off[k], c.sizes[k], c.sizes[k]);
    let boundaries = (0..c.boundaries.len())
        .map(|k| blk(&uinv, k).mul(&c.boundaries[k])?.mul(&blk(u, k + 1)))
        .collect::<Result<Vec<_>>>()?;
    let maps =
        (0..h.maps.len()).map(|k| blk(&uinv, k + 1).mul(&h.maps[k])?.mul(&blk(u, k))).collect::<Result<Vec<_>>>()?;
    let c2 = BasedComplex::new(o, c.base_degree, c.sizes.clone(), boundaries)?;
    let h2 = Homotopy::new(&c2, maps, &h.eta)?;

    let mut base = Chain1::zero(o);
    for ((w, _), deg) in units.iter().zip(c.degrees()) {
        base = base.add(&Chain1::term(o, w, &w.inverse(), sign(deg + 1))?)?;
    }
    let correction = base.sub(&central_action(&h.eta, &base)?)?;
    Ok((c2, h2, correction))
}

/// Homotopy for `η1 η2`: `D = D1 + D2 η1^-1`.
pub fn concat_homotopies(c: &BasedComplex, h1: &Homotopy, h2: &Homotopy) -> Result<Homotopy> {
    let o = &c.oracle;
    if !o.is_central(&h1.eta)? || !o.is_central(&h2.eta)? {
        return Err(Error::NotCentral(format!("{} or {}", o.render(&h1.eta), o.render(&h2.eta))));
    }
    let e1i = h1.eta.inverse();
    let maps = h1.maps.iter().zip(&h2.maps).map(|(a, b)| a.add(&b.mul_word(&e1i)?)).collect::<Result<Vec<_>>>()?;
    let h = Homotopy::new(c, maps, &h1.eta.concat(&h2.eta))?;
    if !verify_homotopy(c, &h)? {
        return Err(Error::RelationFailure("concatenated homotopy".into()));
    }
    Ok(h)
}

/// Torsion representative of an acyclic complex from a caller-supplied
/// contraction (`delta[k]` raises degree `base + k`). Returns
/// `(∂ + δ')|odd -> even` and `(∂ + δ')|even -> odd` with `δ' = δ ∂ δ`.
pub fn torsion_rep(c: &BasedComplex, delta: &[GroupRingMatrix]) -> Result<(GroupRingMatrix, GroupRingMatrix)> {
    let hd = Homotopy::new(c, delta.to_vec(), &Word::identity())?;
    let d = c.tilde_boundary();
    let dl = c.assemble_up(&hd.maps, |_| BigInt::one());
    let n = c.rank();
    let id = GroupRingMatrix::identity(&c.oracle, n);
    if dl.mul(&d)?.add(&d.mul(&dl)?)? != id {
        return Err(Error::NotAContraction);
    }
    let dp = dl.mul(&d)?.mul(&dl)?;
    let m = d.add(&dp)?;
    debug_assert!(dp.mul(&dp)?.is_zero());
    let degrees = c.degrees();
    let even: Vec<usize> = (0..n).filter(|&i| degrees[i].rem_euclid(2) == 0).collect();
    let odd: Vec<usize> = (0..n).filter(|&i| degrees[i].rem_euclid(2) == 1).collect();
    if even.len() != odd.len() {
        return Err(Error::DimensionMismatch("odd and even ranks differ".into()));
    }
    let v = m.select(&even, &odd);
    let vinv = m.select(&odd, &even);
    let k = even.len();
    let idk = GroupRingMatrix::identity(&c.oracle, k);
    if v.mul(&vinv)? != idk || vinv.mul(&v)? != idk {
        return Err(Error::NotInverse);
    }
    Ok((v, vinv))
}

/// `(∂ + δ')^2` and `δ'^2` for the property checks.
pub fn contraction_squares(c: &BasedComplex, delta: &[GroupRingMatrix]) -> Result<(GroupRingMatrix, GroupRingMatrix)> {
    let hd = Homotopy::new(c, delta.to_vec(), &Word::identity())?;
    let d = c.tilde_boundary();
    let dl = c.assemble_up(&hd.maps, |_| BigInt::one());
    let dp = dl.mul(&d)?.mul(&dl)?;
    let m = d.add(&dp)?;
    Ok((m.mul(&m)?, dp.mul(&dp)?))
}

/// The circle with its rotation: `∂ d = e (g^-1 - 1)`, `D_0 e = -d`, `η = g`.
pub fn circle_complex(oracle: &Arc<GroupOracle>, g: &Word) -> Result<(BasedComplex, Homotopy)> {
    let one = GroupRingElement::one(oracle);
    let p = GroupRingElement::word(oracle, &g.inverse())?.sub(&one)?;
    let c = BasedComplex::new(oracle, 0, vec![1, 1], vec![GroupRingMatrix::diagonal(oracle, vec![p])?])?;
    let h = Homotopy::new(&c, vec![GroupRingMatrix::diagonal(oracle, vec![one.neg()])?], g)?;
    Ok((c, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::reduce_class;

    fn z1() -> Arc<GroupOracle> {
        GroupOracle::free_abelian(1)
    }

    #[test]
    fn circle_relation_holds() {
        let o = z1();
        let (c, h) = circle_complex(&o, &Word::gen(0)).unwrap();
        assert!(verify_homotopy(&c, &h).unwrap());
        assert!(verify_homotopy(&c, &Homotopy::zero(&c)).unwrap());
        let bumped = h.map(0).add(&GroupRingMatrix::identity(&o, 1)).unwrap();
        assert!(!verify_homotopy(&c, &h.with_map(0, bumped)).unwrap());
    }

    #[test]
    fn circle_trace_reduces_to_minus_g() {
        let o = z1();
        let g = Word::gen(0);
        let (c, h) = circle_complex(&o, &g).unwrap();
        let t = x1_trace(&c, &h).unwrap();
        let one = GroupRingElement::one(&o);
        let expect =
            Chain1::tensor(&GroupRingElement::word(&o, &g.inverse()).unwrap().sub(&one).unwrap(), &one).unwrap();
        assert_eq!(t.chain, expect);
        let r = reduce_class(&t.chain).unwrap();
        let minus_g = crate::groups::Collapsed::Abelian(o.abelianization().group.free_generator(0).neg());
        assert_eq!(r.get(&crate::groups::ClassId::FreeAbelianValue(vec![-1])), Some(&minus_g));
        assert!(x1_trace(&c, &Homotopy::zero(&c)).unwrap().chain.is_zero());
    }

    #[test]
    fn identity_rebase_has_no_correction() {
        let o = z1();
        let (c, h) = circle_complex(&o, &Word::gen(0)).unwrap();
        let (c2, h2, corr) = rebase(&c, &h, &GroupRingMatrix::identity(&o, 2)).unwrap();
        assert_eq!(c2, c);
        assert_eq!(h2, h);
        assert!(reduce_class(&corr).unwrap().is_zero());
    }

    #[test]
    fn rebase_rejects_non_units() {
        let o = z1();
        let (c, h) = circle_complex(&o, &Word::gen(0)).unwrap();
        let two = GroupRingMatrix::identity(&o, 2).scale(&BigInt::from(2));
        assert_eq!(rebase(&c, &h, &two).unwrap_err(), Error::NotDiagonalUnit);
    }

    #[test]
    fn cone_on_identity() {
        let o = z1();
        let one = GroupRingMatrix::identity(&o, 1);
        let c = BasedComplex::new(&o, 0, vec![1, 1], vec![one.clone()]).unwrap();
        let (v, vi) = torsion_rep(&c, std::slice::from_ref(&one)).unwrap();
        assert_eq!(v, one);
        assert_eq!(vi, one);
        assert!(matches!(torsion_rep(&c, &[one.scale(&BigInt::from(2))]), Err(Error::NotAContraction)));
    }
}
