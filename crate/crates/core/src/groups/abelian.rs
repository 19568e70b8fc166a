use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::smith::{smith_normal_form, IntMatrix};

/// `Z^rank + Z/d_1 + ... + Z/d_t` with every `d_i >= 2` and `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// Panics if the divisibility chain is broken; use [`FgAbelianGroup::try_new`]
    /// for untrusted input.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Self {
        Self::try_new(rank, torsion).expect("torsion coefficients must satisfy d_i >= 2, d_i | d_(i+1)")
    }

    pub fn try_new(rank: usize, torsion: Vec<BigInt>) -> Option<Self> {
        let two = BigInt::from(2);
        if torsion.iter().any(|d| d < &two) {
            return None;
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return None;
        }
        Some(FgAbelianGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement {
            group: self.clone(),
            free: vec![BigInt::zero(); self.rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// Element from raw coordinates; torsion entries are reduced.
    pub fn element(&self, free: Vec<BigInt>, torsion: Vec<BigInt>) -> AbelianElement {
        assert_eq!(free.len(), self.rank, "free coordinate count");
        assert_eq!(torsion.len(), self.torsion.len(), "torsion coordinate count");
        let torsion = torsion.iter().zip(&self.torsion).map(|(t, d)| t.mod_floor(d)).collect();
        AbelianElement { group: self.clone(), free, torsion }
    }

    /// Basis vector `e_i` of the free part.
    pub fn free_generator(&self, i: usize) -> AbelianElement {
        let mut e = self.zero();
        e.free[i] = BigInt::one();
        e
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            n => parts.push(format!("Z^{n}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianElement {
    group: FgAbelianGroup,
    free: Vec<BigInt>,
    torsion: Vec<BigInt>,
}

impl AbelianElement {
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn free(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &AbelianElement) {
        assert_eq!(self.group, other.group, "abelian elements from different groups");
    }

    pub fn add(&self, other: &AbelianElement) -> AbelianElement {
        self.check_same(other);
        let free = self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect();
        let torsion = self.torsion.iter().zip(&other.torsion).map(|(a, b)| a + b).collect();
        self.group.element(free, torsion)
    }

    pub fn neg(&self) -> AbelianElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &AbelianElement) -> AbelianElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> AbelianElement {
        let free = self.free.iter().map(|a| a * k).collect();
        let torsion = self.torsion.iter().map(|a| a * k).collect();
        self.group.element(free, torsion)
    }

    /// `None` means infinite order.
    pub fn order(&self) -> Option<BigInt> {
        if self.free.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut n = BigInt::one();
        for (t, d) in self.torsion.iter().zip(self.group.torsion()) {
            let o = d / t.gcd(d);
            n = n.lcm(&o);
        }
        Some(n)
    }
}

impl fmt::Display for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({} | {}) in {}", show(&self.free), show(&self.torsion), self.group)
    }
}

/// Quotient `Z^n / rowspace(relations)` together with the images of the
/// `n` standard basis vectors.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub group: FgAbelianGroup,
    pub images: Vec<AbelianElement>,
}

impl Abelianization {
    /// Image of an integer exponent vector.
    pub fn image(&self, exponents: &[BigInt]) -> AbelianElement {
        let mut acc = self.group.zero();
        for (e, img) in exponents.iter().zip(&self.images) {
            if !e.is_zero() {
                acc = acc.add(&img.scale(e));
            }
        }
        acc
    }
}

/// Abelian group presented by `generators` generators and the given relation
/// rows (exponent sums).
pub fn abelian_quotient(generators: usize, relations: &IntMatrix) -> Abelianization {
    assert_eq!(relations.cols(), generators, "relation matrix width");
    let snf = smith_normal_form(relations);
    debug_assert!(snf.verify(relations));
    let diag = snf.diagonal();

    // classify each SNF column: dropped (d = 1), torsion (d >= 2) or free (d = 0)
    enum Slot {
        Dropped,
        Torsion(usize),
        Free(usize),
    }
    let mut torsion = Vec::new();
    let mut slots = Vec::with_capacity(generators);
    let mut free_count = 0;
    for i in 0..generators {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_one() {
            slots.push(Slot::Dropped);
        } else if d.is_zero() {
            slots.push(Slot::Free(free_count));
            free_count += 1;
        } else {
            slots.push(Slot::Torsion(torsion.len()));
            torsion.push(d.abs());
        }
    }
    let group = FgAbelianGroup::new(free_count, torsion);

    // generator i maps to row i of V
    let images = (0..generators)
        .map(|g| {
            let mut free = vec![BigInt::zero(); group.rank()];
            let mut tors = vec![BigInt::zero(); group.torsion().len()];
            for (col, slot) in slots.iter().enumerate() {
                let c = snf.v[(g, col)].clone();
                match slot {
                    Slot::Dropped => {}
                    Slot::Torsion(t) => tors[*t] = c,
                    Slot::Free(f) => free[*f] = c,
                }
            }
            group.element(free, tors)
        })
        .collect();
    Abelianization { group, images }
}
