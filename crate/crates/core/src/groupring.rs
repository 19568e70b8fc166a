//! The integral group ring and matrices over it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::abelian::AbelianElement;
use crate::groups::{same_oracle, GroupOracle, Word};

/// Finite integer combination of normalized group words.
#[derive(Clone, Debug)]
pub struct GroupRingElement {
    oracle: Arc<GroupOracle>,
    terms: BTreeMap<Word, BigInt>,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        same_oracle(&self.oracle, &other.oracle) && self.terms == other.terms
    }
}

impl Eq for GroupRingElement {}

impl GroupRingElement {
    pub fn zero(oracle: &Arc<GroupOracle>) -> Self {
        GroupRingElement { oracle: oracle.clone(), terms: BTreeMap::new() }
    }

    pub fn from_int(oracle: &Arc<GroupOracle>, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(oracle);
        z.accumulate(Word::identity(), n.into());
        z
    }

    pub fn one(oracle: &Arc<GroupOracle>) -> Self {
        Self::from_int(oracle, 1)
    }

    pub fn monomial(oracle: &Arc<GroupOracle>, w: &Word, c: impl Into<BigInt>) -> Result<Self> {
        let mut z = Self::zero(oracle);
        z.accumulate(oracle.normalize(w)?, c.into());
        Ok(z)
    }

    pub fn word(oracle: &Arc<GroupOracle>, w: &Word) -> Result<Self> {
        Self::monomial(oracle, w, 1)
    }

    pub fn from_terms<I, C>(oracle: &Arc<GroupOracle>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, C)>,
        C: Into<BigInt>,
    {
        let mut z = Self::zero(oracle);
        for (w, c) in terms {
            z.accumulate(oracle.normalize(&w)?, c.into());
        }
        Ok(z)
    }

    /// Adds `c * w` for an already normalized `w`.
    fn accumulate(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn oracle(&self) -> &Arc<GroupOracle> {
        &self.oracle
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.oracle.normalize(w).ok().and_then(|n| self.terms.get(&n).cloned()).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Formally zero (no surviving monomials).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(true)` if zero, `Some(false)` if provably nonzero, `None` if a
    /// surviving monomial lies outside the oracle's decided words.
    pub fn decide_zero(&self) -> Option<bool> {
        if self.terms.is_empty() {
            return Some(true);
        }
        let all_decided = self.terms.keys().all(|w| self.oracle.is_recognized(w).unwrap_or(false));
        all_decided.then_some(false)
    }

    fn same(&self, other: &Self) -> Result<()> {
        if same_oracle(&self.oracle, &other.oracle) {
            Ok(())
        } else {
            Err(Error::OracleMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let mut z = self.clone();
        for (w, c) in &other.terms {
            z.accumulate(w.clone(), c.clone());
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
        for (w, c) in &self.terms {
            z.accumulate(w.clone(), c * k);
        }
        z
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let mut z = Self::zero(&self.oracle);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                z.accumulate(self.oracle.mul(u, v)?, a * b);
            }
        }
        Ok(z)
    }

    /// `self * w`
    pub fn mul_word(&self, w: &Word) -> Result<Self> {
        let mut z = Self::zero(&self.oracle);
        for (u, a) in &self.terms {
            z.accumulate(self.oracle.mul(u, w)?, a.clone());
        }
        Ok(z)
    }

    /// `w * self`
    pub fn word_mul(&self, w: &Word) -> Result<Self> {
        let mut z = Self::zero(&self.oracle);
        for (u, a) in &self.terms {
            z.accumulate(self.oracle.mul(w, u)?, a.clone());
        }
        Ok(z)
    }

    /// Involution `sum n_i g_i -> sum n_i g_i^-1`.
    pub fn conjugate(&self) -> Result<Self> {
        Self::from_terms(&self.oracle, self.terms.iter().map(|(w, c)| (w.inverse(), c.clone())))
    }

    pub fn augment(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn abelianize_a(&self) -> Result<AbelianElement> {
        let mut acc = self.oracle.abelianization().group.zero();
        for (w, c) in &self.terms {
            acc = acc.add(&self.oracle.abelianize(w)?.scale(c));
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word = self.oracle.render(w);
            if w.is_identity() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&word);
            } else {
                out.push_str(&format!("{mag} {word}"));
            }
        }
        out
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn ring_mul(a: &GroupRingElement, b: &GroupRingElement) -> Result<GroupRingElement> {
    a.mul(b)
}

pub fn augment(a: &GroupRingElement) -> BigInt {
    a.augment()
}

pub fn abelianize_a(a: &GroupRingElement) -> Result<AbelianElement> {
    a.abelianize_a()
}

/// `1 + x + ... + x^(m-1)` for `m > 0`, `0` for `m = 0`, and
/// `-x^-1 - ... - x^m` for `m < 0`.
pub fn x_bracket(oracle: &Arc<GroupOracle>, x: &Word, m: i64) -> Result<GroupRingElement> {
    if m >= 0 {
        GroupRingElement::from_terms(oracle, (0..m).map(|k| (x.pow(k), 1)))
    } else {
        GroupRingElement::from_terms(oracle, (1..=-m).map(|k| (x.pow(-k), -1)))
    }
}

/// Matrix over the group ring. Column `j` holds the image of basis vector
/// `e_j`, so composition is the ordinary product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    oracle: Arc<GroupOracle>,
    rows: usize,
    cols: usize,
    data: Vec<GroupRingElement>,
}

impl GroupRingMatrix {
    pub fn zeros(oracle: &Arc<GroupOracle>, rows: usize, cols: usize) -> Self {
        GroupRingMatrix { oracle: oracle.clone(), rows, cols, data: vec![GroupRingElement::zero(oracle); rows * cols] }
    }

    pub fn identity(oracle: &Arc<GroupOracle>, n: usize) -> Self {
        let mut m = Self::zeros(oracle, n, n);
        for i in 0..n {
            m.set(i, i, GroupRingElement::one(oracle));
        }
        m
    }

    pub fn from_rows(oracle: &Arc<GroupOracle>, rows: Vec<Vec<GroupRingElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(oracle, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            for (j, x) in row.into_iter().enumerate() {
                if !same_oracle(x.oracle(), oracle) {
                    return Err(Error::OracleMismatch);
                }
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn diagonal(oracle: &Arc<GroupOracle>, entries: Vec<GroupRingElement>) -> Result<Self> {
        let n = entries.len();
        let mut m = Self::zeros(oracle, n, n);
        for (i, x) in entries.into_iter().enumerate() {
            if !same_oracle(x.oracle(), oracle) {
                return Err(Error::OracleMismatch);
            }
            m.set(i, i, x);
        }
        Ok(m)
    }

    pub fn oracle(&self) -> &Arc<GroupOracle> {
        &self.oracle
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GroupRingElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GroupRingElement::is_zero)
    }

    fn same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if !same_oracle(&self.oracle, &other.oracle) {
            return Err(Error::OracleMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "matrix sum")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(GroupRingElement::neg)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        self.map(|x| x.scale(k))
    }

    fn map(&self, f: impl Fn(&GroupRingElement) -> GroupRingElement) -> Self {
        GroupRingMatrix { data: self.data.iter().map(f).collect(), ..self.clone() }
    }

    /// Entrywise right multiplication by a group element.
    pub fn mul_word(&self, w: &Word) -> Result<Self> {
        let data = self.data.iter().map(|x| x.mul_word(w)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { data, ..self.clone() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !same_oracle(&self.oracle, &other.oracle) {
            return Err(Error::OracleMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.oracle, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b)?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(&self.oracle, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let r: Vec<usize> = (r0..r0 + rows).collect();
        let c: Vec<usize> = (c0..c0 + cols).collect();
        self.select(&r, &c)
    }
}

impl fmt::Display for GroupRingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).render()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `sum_ij A_ij B_ji`
pub fn mat_trace_product(a: &GroupRingMatrix, b: &GroupRingMatrix) -> Result<GroupRingElement> {
    if !same_oracle(a.oracle(), b.oracle()) {
        return Err(Error::OracleMismatch);
    }
    if a.rows() != b.cols() || a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "trace of {}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut acc = GroupRingElement::zero(a.oracle());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc = acc.add(&a.get(i, j).mul(b.get(j, i))?)?;
        }
    }
    Ok(acc)
}
