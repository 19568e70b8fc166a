//! Finite S¹-CW complexes given as cell inventories.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::chaincx::{x1_filtered, BasedComplex, Homotopy};
use crate::error::{Error, Result};
use crate::groupring::{GroupRingElement, GroupRingMatrix};
use crate::groups::abelian::AbelianElement;
use crate::groups::{GroupOracle, Word};
use crate::hochschild::{cycle_status, epsilon_star, Chain1, Traced};
use crate::seifert::SeifertData;

fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// An equivariant cell `S¹/H × D^dim`; `isotropy` is `|H|`, 0 for `H = S¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct S1Cell {
    pub dim: usize,
    pub isotropy: u64,
    pub word: Word,
}

impl S1Cell {
    pub fn new(dim: usize, isotropy: u64, word: Word) -> Self {
        S1Cell { dim, isotropy, word }
    }

    pub fn is_fixed(&self) -> bool {
        self.isotropy == 0
    }
}

#[derive(Clone, Debug)]
pub struct S1CWComplex {
    pub oracle: Arc<GroupOracle>,
    pub gamma0: Word,
    pub cells: Vec<S1Cell>,
}

impl S1CWComplex {
    pub fn new(oracle: &Arc<GroupOracle>, gamma0: Word, cells: Vec<S1Cell>) -> Self {
        S1CWComplex { oracle: oracle.clone(), gamma0, cells }
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn cells_of_dim(&self, n: usize) -> impl Iterator<Item = &S1Cell> {
        self.cells.iter().filter(move |c| c.dim == n)
    }

    pub fn has_fixed_points(&self) -> bool {
        self.cells.iter().any(S1Cell::is_fixed)
    }

    /// `χ(X/S¹) = sum_n (-1)^n #cells_n`
    pub fn orbit_euler_char(&self) -> i64 {
        self.cells.iter().map(|c| if c.dim % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// Every violated constraint, in cell order.
    pub fn violations(&self) -> Vec<String> {
        let o = &self.oracle;
        let mut out = Vec::new();
        if let Err(e) = o.check(&self.gamma0) {
            out.push(format!("gamma0: {e}"));
            return out;
        }
        let gamma_trivial = o.equal(&self.gamma0, &Word::identity());
        for (idx, c) in self.cells.iter().enumerate() {
            if let Err(e) = o.check(&c.word) {
                out.push(format!("cell {idx}: {e}"));
                continue;
            }
            if c.is_fixed() {
                if o.equal(&c.word, &Word::identity()).ok().flatten() != Some(true) {
                    out.push(format!("cell {idx}: fixed cell has nontrivial word {}", o.render(&c.word)));
                }
                if gamma_trivial.clone().ok().flatten() != Some(true) {
                    out.push(format!(
                        "cell {idx}: fixed cell present but gamma0 = {} is not trivial",
                        o.render(&self.gamma0)
                    ));
                }
            } else {
                let p = c.word.pow(c.isotropy as i64);
                match o.equal(&p, &self.gamma0) {
                    Ok(Some(true)) => {}
                    Ok(Some(false)) => out.push(format!(
                        "cell {idx}: ({})^{} is not gamma0 = {}",
                        o.render(&c.word),
                        c.isotropy,
                        o.render(&self.gamma0)
                    )),
                    Ok(None) => out.push(format!(
                        "cell {idx}: cannot decide whether ({})^{} equals gamma0",
                        o.render(&c.word),
                        c.isotropy
                    )),
                    Err(e) => out.push(format!("cell {idx}: {e}")),
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v.join("; ")))
        }
    }
}

/// `sum_n (-1)^(n+1) sum_j sum_{i=1..μ_j} g_j (x) g_j^(-1-i)`
pub fn chi_s1(x: &S1CWComplex) -> Result<Traced> {
    x.validate()?;
    let o = &x.oracle;
    let mut chain = Chain1::zero(o);
    for c in &x.cells {
        let s = sign(c.dim as i64 + 1);
        for i in 1..=c.isotropy as i64 {
            chain = chain.add(&Chain1::term(o, &c.word, &c.word.pow(-1 - i), s.clone())?)?;
        }
    }
    let status = cycle_status(&chain.boundary()?, "chi_s1")?;
    Ok(Traced { chain, status })
}

/// One two-degree complex per skeleton level: `ẽ_j` in degree `n`, then
/// `d̃_j` in degree `n+1` for each non-fixed cell.
pub fn to_chain_data(x: &S1CWComplex) -> Result<Vec<(BasedComplex, Homotopy)>> {
    x.validate()?;
    let o = &x.oracle;
    let Some(top) = x.max_dim() else {
        return Ok(Vec::new());
    };
    let one = GroupRingElement::one(o);
    let mut levels = Vec::new();
    for n in 0..=top {
        let cells: Vec<&S1Cell> = x.cells_of_dim(n).collect();
        if cells.is_empty() {
            continue;
        }
        let free: Vec<usize> = (0..cells.len()).filter(|&j| !cells[j].is_fixed()).collect();
        let mut bd = GroupRingMatrix::zeros(o, cells.len(), free.len());
        let mut hd = GroupRingMatrix::zeros(o, free.len(), cells.len());
        let s = sign(n as i64);
        for (col, &j) in free.iter().enumerate() {
            let g = &cells[j].word;
            let ginv = GroupRingElement::word(o, &g.inverse())?;
            bd.set(j, col, ginv.sub(&one)?.scale(&s));
            let norm =
                GroupRingElement::from_terms(o, (0..cells[j].isotropy as i64).map(|i| (g.pow(-i), BigInt::one())))?;
            hd.set(col, j, norm.scale(&-&s));
        }
        let c = BasedComplex::new(o, n as i64, vec![cells.len(), free.len()], vec![bd])?;
        let h = Homotopy::new(&c, vec![hd], &x.gamma0)?;
        levels.push((c, h));
    }
    Ok(levels)
}

/// Chain-level route: the filtered trace over all levels.
pub fn chi_s1_via_chains(x: &S1CWComplex) -> Result<Traced> {
    let levels = to_chain_data(x)?;
    if levels.is_empty() {
        return Ok(Traced { chain: Chain1::zero(&x.oracle), status: crate::hochschild::CycleStatus::Cycle });
    }
    x1_filtered(&levels)
}

/// `-χ(X/S¹) {γ0}`, or 0 with a fixed point; checked against `ε⋆(χ̃)`.
pub fn chi1_closed_form(x: &S1CWComplex) -> Result<AbelianElement> {
    let o = &x.oracle;
    let value = if x.has_fixed_points() {
        o.abelianization().group.zero()
    } else {
        o.abelianize(&x.gamma0)?.scale(&BigInt::from(-x.orbit_euler_char()))
    };
    let eps = epsilon_star(&chi_s1(x)?.chain)?;
    if eps != value {
        return Err(Error::Disagreement(format!("closed form {value} but epsilon_star gives {eps}")));
    }
    Ok(value)
}

/// `sum_n (-1)^n sum_j {g_j,n}`. Assumes the complex is a closed oriented
/// manifold; that is not checkable here.
pub fn pd_euler(x: &S1CWComplex) -> Result<AbelianElement> {
    if x.has_fixed_points() {
        return Err(Error::FixedPointPresent);
    }
    let o = &x.oracle;
    let mut acc = o.abelianization().group.zero();
    for c in &x.cells {
        acc = acc.add(&o.abelianize(&c.word)?.scale(&sign(c.dim as i64)));
    }
    Ok(acc)
}

/// Cell inventory over the base surface: one ordinary vertex and one per
/// exceptional fiber, `2σ` loop edges, a spoke edge per exceptional vertex,
/// an edge per boundary circle for bounded data, and one face.
pub fn from_seifert(d: &SeifertData) -> Result<S1CWComplex> {
    d.validate()?;
    let o = GroupOracle::seifert(d)?;
    let g0 = Word::gen(0);
    let mut cells = vec![S1Cell::new(0, 1, g0.clone())];
    for (j, mu) in d.mus().into_iter().enumerate() {
        cells.push(S1Cell::new(0, mu as u64, o.fiber_generator(j + 1).expect("fiber generator")));
    }
    let edges = 2 * d.genus() as usize
        + d.r()
        + match d {
            SeifertData::Bounded { boundary, .. } => *boundary as usize,
            SeifertData::Closed { .. } => 0,
        };
    cells.extend((0..edges).map(|_| S1Cell::new(1, 1, g0.clone())));
    cells.push(S1Cell::new(2, 1, g0.clone()));
    let x = S1CWComplex::new(&o, g0, cells);
    debug_assert_eq!(x.orbit_euler_char(), d.surface_chi());
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincx::verify_homotopy;
    use crate::hochschild::reduce_class;

    fn circle() -> S1CWComplex {
        let o = GroupOracle::free_abelian(1);
        S1CWComplex::new(&o, Word::gen(0), vec![S1Cell::new(0, 1, Word::gen(0))])
    }

    #[test]
    fn circle_is_valid_and_has_expected_chain() {
        let x = circle();
        assert!(x.validate().is_ok());
        let t = chi_s1(&x).unwrap();
        let expect = Chain1::term(&x.oracle, &Word::gen(0), &Word::gen_pow(0, -2), -1).unwrap();
        assert_eq!(t.chain, expect);
    }

    #[test]
    fn wrong_power_is_invalid() {
        let o = GroupOracle::free_abelian(1);
        let x = S1CWComplex::new(&o, Word::gen(0), vec![S1Cell::new(0, 2, Word::gen(0))]);
        assert!(matches!(x.validate(), Err(Error::Invalid(_))));
    }

    #[test]
    fn fixed_point_needs_trivial_gamma() {
        let o = GroupOracle::free_abelian(1);
        let x = S1CWComplex::new(&o, Word::gen(0), vec![S1Cell::new(0, 0, Word::identity())]);
        let v = x.violations();
        assert_eq!(v.len(), 1, "{v:?}");
    }

    #[test]
    fn circle_levels() {
        let x = circle();
        let levels = to_chain_data(&x).unwrap();
        assert_eq!(levels.len(), 1);
        let (c, h) = &levels[0];
        assert!(verify_homotopy(c, h).unwrap());
        let p = GroupRingElement::word(&x.oracle, &Word::gen_pow(0, -1))
            .unwrap()
            .sub(&GroupRingElement::one(&x.oracle))
            .unwrap();
        assert_eq!(c.boundary(0).get(0, 0), &p);
        assert_eq!(h.map(0).get(0, 0), &GroupRingElement::from_int(&x.oracle, -1));
        let a = reduce_class(&chi_s1(&x).unwrap().chain).unwrap();
        let b = reduce_class(&chi_s1_via_chains(&x).unwrap().chain).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn torus_values_vanish() {
        let o = GroupOracle::free_abelian(2);
        let xw = Word::gen(0);
        let x = S1CWComplex::new(&o, xw.clone(), vec![S1Cell::new(0, 1, xw.clone()), S1Cell::new(1, 1, xw)]);
        assert!(chi_s1(&x).unwrap().chain.is_zero());
        assert!(chi1_closed_form(&x).unwrap().is_zero());
        assert!(pd_euler(&x).unwrap().is_zero());
    }

    #[test]
    fn seifert_inventories() {
        let d = SeifertData::Closed { genus: 0, b: 1, fibers: vec![(2, 1), (3, 1), (5, 1)] };
        let x = from_seifert(&d).unwrap();
        let count = |n| x.cells_of_dim(n).count();
        assert_eq!((count(0), count(1), count(2)), (4, 3, 1));
        assert_eq!(x.orbit_euler_char(), 2);
        let d = SeifertData::Closed { genus: 1, b: 0, fibers: vec![] };
        let x = from_seifert(&d).unwrap();
        assert_eq!((x.cells_of_dim(0).count(), x.cells_of_dim(1).count(), x.cells_of_dim(2).count()), (1, 2, 1));
        assert!(x.validate().is_ok());
    }

    #[test]
    fn fixed_cell_level_has_zero_homotopy() {
        let o = GroupOracle::free_abelian(1);
        let x = S1CWComplex::new(&o, Word::identity(), vec![S1Cell::new(0, 0, Word::identity())]);
        let levels = to_chain_data(&x).unwrap();
        assert_eq!(levels[0].0.sizes(), &[1, 0]);
        assert!(levels[0].1.map(0).is_zero());
        assert!(chi1_closed_form(&x).unwrap().is_zero());
        assert_eq!(pd_euler(&x).unwrap_err(), Error::FixedPointPresent);
    }
}
