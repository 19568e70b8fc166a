//! T²-CW complexes with finite isotropy. Each cell `T²/H × D^n` is covered
//! by one cell in degree `n`, two in `n+1` and one in `n+2`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::chaincx::{verify_homotopy, x1_trace, BasedComplex, Homotopy};
use crate::error::{Error, Result};
use crate::groupring::{x_bracket, GroupRingElement, GroupRingMatrix};
use crate::groups::{GroupOracle, Word};

fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct T2Cell {
    pub dim: usize,
    pub g1: Word,
    pub g2: Word,
    pub twist: (i64, i64),
}

#[derive(Clone, Debug)]
pub struct T2CWComplex {
    pub oracle: Arc<GroupOracle>,
    pub cells: Vec<T2Cell>,
}

impl T2CWComplex {
    pub fn new(oracle: &Arc<GroupOracle>, cells: Vec<T2Cell>) -> Self {
        T2CWComplex { oracle: oracle.clone(), cells }
    }

    fn cell_eta(&self, c: &T2Cell) -> Word {
        c.g1.pow(c.twist.0).concat(&c.g2.pow(c.twist.1))
    }

    pub fn violations(&self) -> Vec<String> {
        let o = &self.oracle;
        let mut out = Vec::new();
        let mut eta: Option<Word> = None;
        for (idx, c) in self.cells.iter().enumerate() {
            if let Err(e) = o.check(&c.g1).and_then(|_| o.check(&c.g2)) {
                out.push(format!("cell {idx}: {e}"));
                continue;
            }
            if o.equal(&c.g1.concat(&c.g2), &c.g2.concat(&c.g1)).ok().flatten() == Some(false) {
                out.push(format!("cell {idx}: {} and {} do not commute", o.render(&c.g1), o.render(&c.g2)));
            }
            let e = self.cell_eta(c);
            match &eta {
                None => eta = Some(e),
                Some(first) => match o.equal(first, &e) {
                    Ok(Some(true)) => {}
                    Ok(_) => {
                        out.push(format!("cell {idx}: translation {} differs from {}", o.render(&e), o.render(first)))
                    }
                    Err(err) => out.push(format!("cell {idx}: {err}")),
                },
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

    /// Common `g1^a g2^b` of all cells.
    pub fn eta(&self) -> Result<Word> {
        self.validate()?;
        match self.cells.first() {
            Some(c) => self.oracle.normalize(&self.cell_eta(c)),
            None => Ok(Word::identity()),
        }
    }
}

/// Reference homotopy rows for the twisted torus over `Z[x1, x2]`; level `n`
/// stores `(-1)^(n+1)` times these:
/// `D(E0) = E1_1 (x1^-1)^[a] x2^-b + E1_2 (x2^-1)^[b]`,
/// `D(E1_1) = -E2 (x2^-1)^[b]`, `D(E1_2) = E2 (x1^-1)^[a] x2^-b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistRows {
    pub e0_to_e1: GroupRingElement,
    pub e0_to_e2: GroupRingElement,
    pub e1_to_top: GroupRingElement,
    pub e2_to_top: GroupRingElement,
}

fn rows(o: &Arc<GroupOracle>, g1: &Word, g2: &Word, a: i64, b: i64) -> Result<TwistRows> {
    let first = x_bracket(o, &g1.inverse(), a)?.mul_word(&g2.pow(-b))?;
    let second = x_bracket(o, &g2.inverse(), b)?;
    Ok(TwistRows { e1_to_top: second.neg(), e2_to_top: first.clone(), e0_to_e1: first, e0_to_e2: second })
}

pub fn twist_rows(a: i64, b: i64) -> Result<TwistRows> {
    let o = GroupOracle::free_abelian(2);
    rows(&o, &Word::gen(0), &Word::gen(1), a, b)
}

fn level(o: &Arc<GroupOracle>, n: usize, cells: &[&T2Cell], eta: &Word) -> Result<(BasedComplex, Homotopy)> {
    let k = cells.len();
    let one = GroupRingElement::one(o);
    let s = sign(n as i64);
    let mut d1 = GroupRingMatrix::zeros(o, k, 2 * k);
    let mut d2 = GroupRingMatrix::zeros(o, 2 * k, k);
    let mut h0 = GroupRingMatrix::zeros(o, 2 * k, k);
    let mut h1 = GroupRingMatrix::zeros(o, k, 2 * k);
    for (j, c) in cells.iter().enumerate() {
        let u1 = one.sub(&GroupRingElement::word(o, &c.g1.inverse())?)?;
        let u2 = one.sub(&GroupRingElement::word(o, &c.g2.inverse())?)?;
        d1.set(j, 2 * j, u1.scale(&-&s));
        d1.set(j, 2 * j + 1, u2.scale(&-&s));
        d2.set(2 * j, j, u2.scale(&s));
        d2.set(2 * j + 1, j, u1.scale(&-&s));
        let r = rows(o, &c.g1, &c.g2, c.twist.0, c.twist.1)?;
        let f = -&s;
        h0.set(2 * j, j, r.e0_to_e1.scale(&f));
        h0.set(2 * j + 1, j, r.e0_to_e2.scale(&f));
        h1.set(j, 2 * j, r.e1_to_top.scale(&f));
        h1.set(j, 2 * j + 1, r.e2_to_top.scale(&f));
    }
    let c = BasedComplex::new(o, n as i64, vec![k, 2 * k, k], vec![d1, d2])?;
    let h = Homotopy::new(&c, vec![h0, h1], eta)?;
    Ok((c, h))
}

/// The torus `T²` with translation `x1^a x2^b`.
pub fn torus_matrices(a: i64, b: i64) -> Result<(BasedComplex, Homotopy)> {
    let o = GroupOracle::free_abelian(2);
    let cell = T2Cell { dim: 0, g1: Word::gen(0), g2: Word::gen(1), twist: (a, b) };
    let eta = Word::from_syllables([(0, a), (1, b)]);
    level(&o, 0, &[&cell], &eta)
}

pub fn t2_chain_data(x: &T2CWComplex) -> Result<Vec<(BasedComplex, Homotopy)>> {
    let eta = x.eta()?;
    let top = x.cells.iter().map(|c| c.dim).max();
    let mut out = Vec::new();
    for n in 0..=top.unwrap_or(0) {
        let cells: Vec<&T2Cell> = x.cells.iter().filter(|c| c.dim == n).collect();
        if cells.is_empty() {
            continue;
        }
        let (c, h) = level(&x.oracle, n, &cells, &eta)?;
        if !verify_homotopy(&c, &h)? {
            return Err(Error::RelationFailure(format!("torus level {n}")));
        }
        out.push((c, h));
    }
    Ok(out)
}

/// Whether every level trace is the zero chain.
pub fn levels_vanish(levels: &[(BasedComplex, Homotopy)]) -> Result<bool> {
    for (c, h) in levels {
        if !x1_trace(c, h)?.chain.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_vanishing(x: &T2CWComplex) -> Result<bool> {
    levels_vanish(&t2_chain_data(x)?)
}
