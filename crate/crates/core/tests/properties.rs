mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use orbitrace::chaincx::{concat_homotopies, rebase, verify_homotopy, x1_trace, BasedComplex, Homotopy};
use orbitrace::groupring::{x_bracket, GroupRingElement, GroupRingMatrix};
use orbitrace::groups::abelian::FgAbelianGroup;
use orbitrace::groups::smith::{smith_normal_form, IntMatrix};
use orbitrace::groups::{GroupOracle, Word};
use orbitrace::hochschild::{central_action, default_gottlieb, reduce_class, split_components};
use orbitrace::s1cw::{chi_s1, S1CWComplex, S1Cell};
use orbitrace::seifert::{
    euler_number, normalize_derivation, presentation, reconstruct_derivation, Graded, SeifertData,
};
use orbitrace::t2cw::{t2_chain_data, torus_matrices, verify_vanishing};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn oracle_for(seed: u64) -> std::sync::Arc<GroupOracle> {
    let mut r = rng(seed ^ 0x5eed);
    match r.gen_range(0..3) {
        0 => GroupOracle::free_abelian(r.gen_range(1..=3)),
        1 => GroupOracle::cyclic(r.gen_range(2..=7)).unwrap(),
        _ => GroupOracle::seifert(&random_bounded_genus0(&mut r)).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed: u64) {
        let o = oracle_for(seed);
        let mut r = rng(seed);
        let (a, b, c) = (random_element(&mut r, &o, 3), random_element(&mut r, &o, 3), random_element(&mut r, &o, 3));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().augment(), a.augment() * b.augment());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn bracket_telescopes(seed: u64, m in -6i64..=6) {
        let o = oracle_for(seed);
        let mut r = rng(seed);
        let x = random_word(&mut r, &o, 3);
        let one = GroupRingElement::one(&o);
        let lhs = one.sub(&GroupRingElement::word(&o, &x).unwrap()).unwrap().mul(&x_bracket(&o, &x, m).unwrap()).unwrap();
        let rhs = one.sub(&GroupRingElement::word(&o, &x.pow(m)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_squares_to_zero(seed: u64) {
        let o = oracle_for(seed);
        let mut r = rng(seed);
        let c = random_chain2(&mut r, &o, 6);
        prop_assert!(c.boundary().unwrap().boundary().unwrap().is_zero());
    }

    #[test]
    fn boundaries_reduce_to_zero(seed: u64) {
        let o = oracle_for(seed);
        let mut r = rng(seed);
        let b = random_chain2(&mut r, &o, 5).boundary().unwrap();
        let red = reduce_class(&b).unwrap();
        prop_assert!(red.is_zero(), "{}", red);
    }

    #[test]
    fn reduction_respects_boundary_span(seed: u64) {
        let o = GroupOracle::free_abelian(2);
        let mut r = rng(seed);
        let z = random_chain2(&mut r, &o, 4).boundary().unwrap();
        let c = random_chain1(&mut r, &o, 4);
        prop_assert!(c.boundary().unwrap().is_zero());
        prop_assert_eq!(reduce_class(&c).unwrap(), reduce_class(&c.add(&z).unwrap()).unwrap());
    }

    #[test]
    fn abelianization_is_additive(seed: u64) {
        let o = oracle_for(seed);
        let mut r = rng(seed);
        let (g, h) = (random_word(&mut r, &o, 5), random_word(&mut r, &o, 5));
        prop_assert_eq!(o.abelianize(&g.concat(&h)).unwrap(), o.abelianize(&g).unwrap().add(&o.abelianize(&h).unwrap()));
    }

    #[test]
    fn smith_postconditions(seed: u64) {
        let mut r = rng(seed);
        let (rows, cols) = (r.gen_range(0..=4), r.gen_range(0..=4));
        let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(cols, &data);
        let s = smith_normal_form(&m);
        prop_assert!(s.verify(&m));
        if rows == cols && rows > 0 {
            let prod: BigInt = s.diagonal().iter().product();
            prop_assert_eq!(prod, m.determinant().abs());
        }
    }

    #[test]
    fn basepath_independence(seed: u64) {
        let mut r = rng(seed);
        let o = if r.gen_bool(0.5) {
            GroupOracle::free_abelian(2)
        } else {
            GroupOracle::seifert(&random_bounded_genus0(&mut r)).unwrap()
        };
        let g0 = o.gamma0().unwrap_or_else(|| Word::gen(0));
        let mut cells = vec![S1Cell::new(0, 1, g0.clone())];
        if let Some(d) = o.seifert_data() {
            for (j, mu) in d.mus().into_iter().enumerate() {
                cells.push(S1Cell::new(r.gen_range(0..=2), mu as u64, o.fiber_generator(j + 1).unwrap()));
            }
        }
        for _ in 0..r.gen_range(0..3) {
            cells.push(S1Cell::new(r.gen_range(0..=2), 1, g0.clone()));
        }
        let x = S1CWComplex::new(&o, g0.clone(), cells.clone());
        let moved: Vec<S1Cell> = cells
            .into_iter()
            .map(|c| {
                let h = random_word(&mut r, &o, 3);
                S1Cell::new(c.dim, c.isotropy, h.concat(&c.word).concat(&h.inverse()))
            })
            .collect();
        let y = S1CWComplex::new(&o, g0, moved);
        prop_assert_eq!(
            reduce_class(&chi_s1(&x).unwrap().chain).unwrap(),
            reduce_class(&chi_s1(&y).unwrap().chain).unwrap()
        );
    }

    #[test]
    fn normalization_reconstructs(seed: u64) {
        let mut r = rng(seed);
        let g = FgAbelianGroup::new(r.gen_range(0..=2), vec![BigInt::from(r.gen_range(2..=6))]);
        let mut values = Graded::new();
        for _ in 0..r.gen_range(0..=6) {
            let free = (0..g.rank()).map(|_| BigInt::from(r.gen_range(-5..=5))).collect();
            let tors = vec![BigInt::from(r.gen_range(0..=6))];
            values.insert(r.gen_range(-5..=5), g.element(free, tors));
        }
        let n = normalize_derivation(&g, &values).unwrap();
        let nonzero: Graded = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        prop_assert_eq!(reconstruct_derivation(&n), nonzero);
    }

    #[test]
    fn random_t2_complexes_vanish(seed: u64) {
        let mut r = rng(seed);
        let o = random_t2_oracle(&mut r);
        let x = random_t2(&mut r, &o);
        for (c, h) in t2_chain_data(&x).unwrap() {
            prop_assert!(verify_homotopy(&c, &h).unwrap());
        }
        prop_assert!(verify_vanishing(&x).unwrap());
    }

    #[test]
    fn rebase_correction(seed: u64) {
        let mut r = rng(seed);
        let o = random_t2_oracle(&mut r);
        let x = random_t2(&mut r, &o);
        let levels = t2_chain_data(&x).unwrap();
        let (c, h) = &levels[0];
        let n = c.rank();
        let units = (0..n)
            .map(|_| {
                let s = if r.gen_bool(0.5) { 1 } else { -1 };
                GroupRingElement::monomial(&o, &random_word(&mut r, &o, 3), s).unwrap()
            })
            .collect();
        let u = GroupRingMatrix::diagonal(&o, units).unwrap();
        let (c2, h2, corr) = rebase(c, h, &u).unwrap();
        prop_assert!(verify_homotopy(&c2, &h2).unwrap());
        let before = reduce_class(&x1_trace(c, h).unwrap().chain).unwrap();
        let after = reduce_class(&x1_trace(&c2, &h2).unwrap().chain).unwrap();
        prop_assert_eq!(before.sub(&after).unwrap(), reduce_class(&corr).unwrap());
        let (_, second) = split_components(&reduce_class(&corr).unwrap(), default_gottlieb(&o));
        prop_assert!(second.is_zero());
    }
}

fn torus_class(a: i64, b: i64) -> orbitrace::hochschild::ComponentClass {
    let (c, h) = torus_matrices(a, b).unwrap();
    reduce_class(&x1_trace(&c, &h).unwrap().chain).unwrap()
}

#[test]
fn torus_derivation_law() {
    for a in -3..=3 {
        for b in -3..=3 {
            let left = torus_class(a, b);
            for c in -3..=3 {
                for d in -3..=3 {
                    let whole = torus_class(a + c, b + d);
                    let (cc, hh) = torus_matrices(c, d).unwrap();
                    let eta = Word::from_syllables([(0, a), (1, b)]);
                    let moved = central_action(&eta, &x1_trace(&cc, &hh).unwrap().chain).unwrap();
                    let rhs = left.add(&reduce_class(&moved).unwrap()).unwrap();
                    assert_eq!(whole, rhs, "({a},{b}) + ({c},{d})");
                }
            }
        }
    }
}

#[test]
fn circle_derivation_law_is_nontrivial() {
    let o = GroupOracle::free_abelian(1);
    let (c, _) = orbitrace::chaincx::circle_complex(&o, &Word::gen(0)).unwrap();
    let (_, h1) = orbitrace::chaincx::circle_complex(&o, &Word::gen(0)).unwrap();
    let h2 = h1.clone();
    let h12 = concat_homotopies(&c, &h1, &h2).unwrap();
    assert_eq!(h12.eta(), &Word::gen_pow(0, 2));
    let t1 = x1_trace(&c, &h1).unwrap().chain;
    let lhs = reduce_class(&x1_trace(&c, &h12).unwrap().chain).unwrap();
    let rhs = reduce_class(&t1.add(&central_action(&Word::gen(0), &t1).unwrap()).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert!(!lhs.is_zero());
}

#[test]
fn determinant_matches_euler_number() {
    let mut r = rng(7);
    for _ in 0..60 {
        let k = r.gen_range(0..=4);
        let fibers: Vec<(i64, i64)> = (0..k)
            .map(|_| loop {
                let mu = r.gen_range(2i64..=7);
                let beta = r.gen_range(1..mu);
                if num_integer::Integer::gcd(&mu, &beta) == 1 {
                    break (mu, beta);
                }
            })
            .collect();
        let d = SeifertData::Closed { genus: 0, b: r.gen_range(-3..=3), fibers: fibers.clone() };
        let e = euler_number(&d).unwrap();
        if e.is_zero() {
            continue;
        }
        let p = presentation(&d);
        let n = p.generators.len();
        let rows: Vec<Vec<i64>> = p
            .relations
            .iter()
            .map(|w| (0..n).map(|g| w.exponent_sum(g)).collect::<Vec<_>>())
            .filter(|row| row.iter().any(|&x| x != 0))
            .collect();
        let m = IntMatrix::from_rows(n, &rows);
        let prod: i64 = fibers.iter().map(|f| f.0).product();
        let expect = (e * BigRational::from_integer(BigInt::from(prod))).abs();
        assert_eq!(BigRational::from_integer(m.determinant().abs()), expect, "{d:?}");
    }
}

#[test]
fn product_with_interval_keeps_circle_class() {
    let o = GroupOracle::free_abelian(1);
    let g = Word::gen(0);
    let one = GroupRingElement::one(&o);
    let zero = GroupRingElement::zero(&o);
    let p = GroupRingElement::word(&o, &g.inverse()).unwrap().sub(&one).unwrap();
    // degree 0: a0, a1; degree 1: b0, b1, c; degree 2: f
    let d1 = GroupRingMatrix::from_rows(
        &o,
        vec![vec![p.clone(), zero.clone(), one.neg()], vec![zero.clone(), p.clone(), one.clone()]],
    )
    .unwrap();
    let d2 = GroupRingMatrix::from_rows(&o, vec![vec![one.neg()], vec![one.clone()], vec![p.neg()]]).unwrap();
    let c = BasedComplex::new(&o, 0, vec![2, 3, 1], vec![d1, d2]).unwrap();
    let h0 = GroupRingMatrix::from_rows(
        &o,
        vec![vec![one.neg(), zero.clone()], vec![zero.clone(), one.neg()], vec![zero.clone(), zero.clone()]],
    )
    .unwrap();
    let h1 = GroupRingMatrix::from_rows(&o, vec![vec![zero.clone(), zero.clone(), one.clone()]]).unwrap();
    let h = Homotopy::new(&c, vec![h0, h1], &g).unwrap();
    assert!(verify_homotopy(&c, &h).unwrap());
    let (cc, hc) = orbitrace::chaincx::circle_complex(&o, &g).unwrap();
    assert_eq!(
        reduce_class(&x1_trace(&c, &h).unwrap().chain).unwrap(),
        reduce_class(&x1_trace(&cc, &hc).unwrap().chain).unwrap()
    );
}
