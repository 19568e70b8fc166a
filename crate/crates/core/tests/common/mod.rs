#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use num_integer::Integer;
use orbitrace::groupring::{GroupRingElement, GroupRingMatrix};
use orbitrace::groups::{GroupOracle, Word};
use orbitrace::hochschild::{Chain1, Chain2};
use orbitrace::report::{detect_kind, parse, Input};
use orbitrace::seifert::SeifertData;
use orbitrace::t2cw::{T2CWComplex, T2Cell};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus() -> Vec<(String, Input)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let kind = detect_kind(&text).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), parse(kind, &text).unwrap())
        })
        .collect()
}

pub fn random_bounded_genus0(rng: &mut ChaCha8Rng) -> SeifertData {
    let boundary = rng.gen_range(1..=2);
    let r = rng.gen_range(0..=3);
    SeifertData::Bounded { genus: 0, boundary, fibers: (0..r).map(|_| rng.gen_range(2..=5)).collect() }
}

/// Random word with up to `len` syllables over all generators.
pub fn random_word(rng: &mut ChaCha8Rng, o: &GroupOracle, len: usize) -> Word {
    let n = o.generator_count();
    if n == 0 {
        return Word::identity();
    }
    let k = rng.gen_range(0..=len);
    Word::from_syllables((0..k).map(|_| {
        let e = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        (rng.gen_range(0..n), e)
    }))
}

pub fn random_element(rng: &mut ChaCha8Rng, o: &Arc<GroupOracle>, terms: usize) -> GroupRingElement {
    let k = rng.gen_range(0..=terms);
    GroupRingElement::from_terms(o, (0..k).map(|_| (random_word(rng, o, 3), rng.gen_range(-3i64..=3)))).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, o: &Arc<GroupOracle>, rows: usize, cols: usize) -> GroupRingMatrix {
    let rows = (0..rows).map(|_| (0..cols).map(|_| random_element(rng, o, 2)).collect::<Vec<_>>()).collect::<Vec<_>>();
    if rows.is_empty() {
        return GroupRingMatrix::zeros(o, 0, cols);
    }
    GroupRingMatrix::from_rows(o, rows).unwrap()
}

pub fn random_chain1(rng: &mut ChaCha8Rng, o: &Arc<GroupOracle>, terms: usize) -> Chain1 {
    let k = rng.gen_range(0..=terms);
    Chain1::from_terms(o, (0..k).map(|_| (random_word(rng, o, 3), random_word(rng, o, 3), rng.gen_range(-3i64..=3))))
        .unwrap()
}

pub fn random_chain2(rng: &mut ChaCha8Rng, o: &Arc<GroupOracle>, terms: usize) -> Chain2 {
    let k = rng.gen_range(0..=terms);
    Chain2::from_terms(
        o,
        (0..k).map(|_| {
            (random_word(rng, o, 3), random_word(rng, o, 3), random_word(rng, o, 3), rng.gen_range(-3i64..=3))
        }),
    )
    .unwrap()
}

/// Either `FreeAbelian(2)` or a random genus-0 bounded Seifert oracle.
pub fn random_t2_oracle(rng: &mut ChaCha8Rng) -> Arc<GroupOracle> {
    if rng.gen_bool(0.5) {
        GroupOracle::free_abelian(2)
    } else {
        GroupOracle::seifert(&random_bounded_genus0(rng)).unwrap()
    }
}

/// Random T²-CW complex with dims <= 2 and twists in `[-3, 3]^2`. Every
/// cell gets `g1 = z^p w^(-b/d)`, `g2 = z^q w^(a/d)` with `ap + bq = d`,
/// `z = c^(L/d)` and `L` the lcm of the `d`s, so `g1^a g2^b = c^L` for all
/// cells. Seifert cells may be conjugated further.
pub fn random_t2(rng: &mut ChaCha8Rng, o: &Arc<GroupOracle>) -> T2CWComplex {
    let seifert = o.gamma0().is_some();
    let ncells = rng.gen_range(1..=4);
    let twists: Vec<(i64, i64)> = (0..ncells).map(|_| (rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3))).collect();
    let any_zero = twists.iter().any(|&(a, b)| a == 0 && b == 0);
    let c = if any_zero {
        Word::identity()
    } else if seifert {
        Word::gen_pow(0, rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 })
    } else {
        Word::from_syllables([(0, rng.gen_range(-2i64..=2)), (1, rng.gen_range(-2i64..=2))])
    };
    let l = twists.iter().filter(|t| **t != (0, 0)).fold(1i64, |acc, &(a, b)| acc.lcm(&a.gcd(&b)));
    let cells = twists
        .into_iter()
        .map(|(a, b)| {
            let dim = rng.gen_range(0..=2);
            let w = random_word(rng, o, 2);
            let (g1, g2) = if (a, b) == (0, 0) {
                (w.pow(rng.gen_range(-2..=2)), w.pow(rng.gen_range(-2..=2)))
            } else {
                let e = a.extended_gcd(&b);
                let (d, p, q) = if e.gcd < 0 { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
                let z = c.pow(l / d);
                (z.pow(p).concat(&w.pow(-b / d)), z.pow(q).concat(&w.pow(a / d)))
            };
            let (g1, g2) = if seifert && rng.gen_bool(0.5) {
                let h = random_word(rng, o, 2);
                (h.concat(&g1).concat(&h.inverse()), h.concat(&g2).concat(&h.inverse()))
            } else {
                (g1, g2)
            };
            T2Cell { dim, g1, g2, twist: (a, b) }
        })
        .collect();
    T2CWComplex::new(o, cells)
}
