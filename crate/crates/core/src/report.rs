//! JSON input schemas and the reports produced from them.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chaincx::{verify_homotopy, x1_filtered, BasedComplex, Homotopy};
use crate::error::{Error, Result};
use crate::groupring::{GroupRingElement, GroupRingMatrix};
use crate::groups::abelian::{AbelianElement, FgAbelianGroup};
use crate::groups::{ClassId, GroupOracle, Word};
use crate::hochschild::{default_gottlieb, reduce_class, split_components, ComponentClass, CycleStatus};
use crate::s1cw::{chi1_closed_form, chi_s1, from_seifert, pd_euler, to_chain_data, S1CWComplex, S1Cell};
use crate::seifert::{
    admissible, components_closed_form, dt_obstruction, euler_number, gamma0_order, h1, orbifold_chi, pd_euler_seifert,
    rational_multiple, SeifertData,
};
use crate::t2cw::{levels_vanish, t2_chain_data, T2CWComplex, T2Cell};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    FreeAbelian { rank: usize },
    Cyclic { order: u64 },
    Seifert(SeifertData),
}

impl OracleSpec {
    pub fn build(&self) -> Result<Arc<GroupOracle>> {
        match self {
            OracleSpec::FreeAbelian { rank } => Ok(GroupOracle::free_abelian(*rank)),
            OracleSpec::Cyclic { order } => GroupOracle::cyclic(*order),
            OracleSpec::Seifert(d) => {
                d.validate()?;
                GroupOracle::seifert(d)
            }
        }
    }
}

/// Group ring element as `[[word, coefficient], ...]`.
pub type ElementFile = Vec<(Word, i64)>;
/// Matrix as a list of rows.
pub type MatrixFile = Vec<Vec<ElementFile>>;

/// Explicit chain data for one level; checked against the cell inventory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelFile {
    pub base_degree: i64,
    pub sizes: Vec<usize>,
    pub boundaries: Vec<MatrixFile>,
    pub homotopy: Vec<MatrixFile>,
    pub eta: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct S1cwFile {
    pub oracle: OracleSpec,
    pub gamma0: Word,
    pub cells: Vec<S1Cell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<LevelFile>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct T2cwFile {
    pub oracle: OracleSpec,
    pub cells: Vec<T2Cell>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Seifert,
    S1cw,
    T2cw,
}

/// Parsed input of any kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Seifert(SeifertData),
    S1cw(S1cwFile),
    T2cw(T2cwFile),
}

/// Schema failure, kept apart from computation errors.
#[derive(Debug, thiserror::Error)]
#[error("schema: {0}")]
pub struct SchemaError(pub String);

pub fn parse(kind: Kind, text: &str) -> std::result::Result<Input, SchemaError> {
    let err = |e: serde_json::Error| SchemaError(e.to_string());
    Ok(match kind {
        Kind::Seifert => Input::Seifert(serde_json::from_str(text).map_err(err)?),
        Kind::S1cw => Input::S1cw(serde_json::from_str(text).map_err(err)?),
        Kind::T2cw => Input::T2cw(serde_json::from_str(text).map_err(err)?),
    })
}

/// Guesses the kind from the top-level keys.
pub fn detect_kind(text: &str) -> std::result::Result<Kind, SchemaError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| SchemaError(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| SchemaError("top level is not an object".into()))?;
    if obj.contains_key("closed") || obj.contains_key("bounded") {
        return Ok(Kind::Seifert);
    }
    if obj.contains_key("gamma0") {
        return Ok(Kind::S1cw);
    }
    if obj.contains_key("cells") {
        return Ok(Kind::T2cw);
    }
    Err(SchemaError("cannot tell the input kind from its keys".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDto {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelian {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
    pub group: GroupDto,
}

/// A value with the pipeline that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tagged<T> {
    pub value: T,
    pub source: String,
}

fn tag<T>(value: T, source: &str) -> Tagged<T> {
    Tagged { value, source: source.into() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDto {
    pub key: ClassId,
    pub label: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian: Option<Abelian>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiple: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertReport {
    pub input: SeifertData,
    pub admissible: bool,
    pub exact: bool,
    pub formal: bool,
    pub h1: Tagged<GroupDto>,
    pub gamma0: Tagged<Abelian>,
    pub fibers: Vec<Tagged<Abelian>>,
    /// `None` for infinite order.
    pub gamma0_order: Tagged<Option<i64>>,
    pub euler_number: Option<Tagged<Rational>>,
    pub orbifold_chi: Tagged<Rational>,
    pub central_formula: Option<Tagged<String>>,
    pub components_cycle: Tagged<Vec<ComponentDto>>,
    pub components_chain: Tagged<Vec<ComponentDto>>,
    pub components_closed_form: Option<Tagged<Vec<ComponentDto>>>,
    pub chi1: Tagged<Abelian>,
    pub pd_euler: Option<Tagged<Abelian>>,
    pub pi_prime_rational: Option<Tagged<Rational>>,
    pub dt_obstruction: Option<bool>,
    pub checks: Vec<Check>,
    pub agreement: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S1cwReport {
    pub input: S1cwFile,
    pub cycle: Tagged<String>,
    pub cycle_status: String,
    pub components_cycle: Tagged<Vec<ComponentDto>>,
    pub components_chain: Tagged<Vec<ComponentDto>>,
    pub epsilon_star: Tagged<Abelian>,
    pub chi1: Tagged<Abelian>,
    pub pd_euler: Option<Tagged<Abelian>>,
    pub checks: Vec<Check>,
    pub agreement: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T2cwReport {
    pub input: T2cwFile,
    pub levels: usize,
    pub vanishing: Tagged<bool>,
    pub checks: Vec<Check>,
    pub agreement: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Report {
    Seifert(SeifertReport),
    S1cw(S1cwReport),
    T2cw(T2cwReport),
}

impl Report {
    pub fn agreement(&self) -> bool {
        match self {
            Report::Seifert(r) => r.agreement,
            Report::S1cw(r) => r.agreement,
            Report::T2cw(r) => r.agreement,
        }
    }

    pub fn checks(&self) -> &[Check] {
        match self {
            Report::Seifert(r) => &r.checks,
            Report::S1cw(r) => &r.checks,
            Report::T2cw(r) => &r.checks,
        }
    }

    /// Short human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let kind = match self {
            Report::Seifert(_) => "seifert",
            Report::S1cw(_) => "s1cw",
            Report::T2cw(_) => "t2cw",
        };
        out.push_str(&format!("kind: {kind}\n"));
        match self {
            Report::Seifert(r) => {
                out.push_str(&format!("H1: rank {} torsion {:?}\n", r.h1.value.rank, r.h1.value.torsion));
                if let Some(f) = &r.central_formula {
                    out.push_str(&format!("central component: {}\n", f.value));
                }
                push_components(&mut out, "components", &r.components_cycle.value);
            }
            Report::S1cw(r) => {
                out.push_str(&format!("cycle: {}\n", r.cycle.value));
                push_components(&mut out, "components", &r.components_cycle.value);
            }
            Report::T2cw(r) => out.push_str(&format!("levels: {}, vanishing: {}\n", r.levels, r.vanishing.value)),
        }
        for c in self.checks() {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("[{mark}] {}", c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(": {}", c.detail));
            }
            out.push('\n');
        }
        out.push_str(&format!("agreement: {}\n", self.agreement()));
        out
    }
}

fn push_components(out: &mut String, title: &str, comps: &[ComponentDto]) {
    out.push_str(&format!("{title}:\n"));
    if comps.is_empty() {
        out.push_str("  0\n");
    }
    for c in comps {
        out.push_str(&format!("  {} = {}\n", c.label, c.value));
    }
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Invalid(format!("{x} does not fit in 64 bits")))
}

pub fn rational_dto(q: &BigRational) -> Result<Rational> {
    Ok(Rational { num: small(q.numer())?, den: small(q.denom())? })
}

pub fn group_dto(g: &FgAbelianGroup) -> Result<GroupDto> {
    Ok(GroupDto { rank: g.rank(), torsion: g.torsion().iter().map(small).collect::<Result<_>>()? })
}

pub fn abelian_dto(x: &AbelianElement) -> Result<Abelian> {
    Ok(Abelian {
        free: x.free().iter().map(small).collect::<Result<_>>()?,
        torsion: x.torsion().iter().map(small).collect::<Result<_>>()?,
        group: group_dto(x.group())?,
    })
}

fn class_label(o: &GroupOracle, k: &ClassId) -> String {
    match k {
        ClassId::Exceptional { fiber, exponent, offset } => {
            let mu = o.fiber_order(*fiber).unwrap_or(0);
            format!("C(g{fiber}^{})", offset * mu + exponent)
        }
        other => other.to_string(),
    }
}

pub fn components_dto(c: &ComponentClass) -> Result<Vec<ComponentDto>> {
    let o = c.oracle();
    c.nonzero()
        .into_iter()
        .map(|(k, v)| {
            let (abelian, multiple) = match &v {
                crate::groups::Collapsed::Abelian(x) => (Some(abelian_dto(x)?), None),
                crate::groups::Collapsed::FiberMultiple { n, .. } => (None, Some(small(n)?)),
                crate::groups::Collapsed::RootLattice { .. } => (None, None),
            };
            Ok(ComponentDto { label: class_label(o, &k), value: v.to_string(), key: k, abelian, multiple })
        })
        .collect()
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: if passed { String::new() } else { detail.into() } }
}

fn check_result(name: &str, r: Result<bool>) -> Check {
    match r {
        Ok(b) => check(name, b, "values differ"),
        Err(e) => check(name, false, e.to_string()),
    }
}

/// Symbolic `(r - χ){γ0} - sum {g_j}`, e.g. `2γ0 - g1 - g2`.
pub fn central_formula(d: &SeifertData) -> String {
    let k = d.r() as i64 - d.surface_chi();
    let mut s = match k {
        0 => String::new(),
        1 => "γ0".into(),
        -1 => "-γ0".into(),
        _ => format!("{k}γ0"),
    };
    for j in 1..=d.r() {
        if s.is_empty() {
            s = format!("-g{j}");
        } else {
            s.push_str(&format!(" - g{j}"));
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

pub fn seifert_report(d: &SeifertData) -> Result<SeifertReport> {
    d.validate()?;
    let adm = admissible(d);
    let x = from_seifert(d)?;
    let o = x.oracle.clone();
    let h = h1(d)?;
    let traced = chi_s1(&x)?;
    let geo = reduce_class(&traced.chain)?;
    let chain = reduce_class(&x1_filtered(&to_chain_data(&x)?)?.chain)?;
    let chi1 = chi1_closed_form(&x)?;
    let (order, criterion) = gamma0_order(d)?;
    let mut checks = vec![
        check("cycle_vs_chain_level", geo == chain, format!("{geo} vs {chain}")),
        check("gamma0_order_criterion", criterion, "order disagrees with the Euler number criterion"),
    ];
    let eps = geo.epsilon()?;
    let expect_eps = h.gamma0.scale(&BigInt::from(-d.surface_chi()));
    checks.push(check(
        "epsilon_is_minus_chi_gamma0",
        eps == expect_eps && eps == chi1,
        format!("{eps} vs {expect_eps}"),
    ));

    let (mut closed, mut pd, mut pi_q, mut obstruction, mut formula) = (None, None, None, None, None);
    if adm {
        let cf = components_closed_form(d)?;
        checks.push(check("closed_form_vs_cycle", cf == geo, format!("{cf} vs {geo}")));
        closed = Some(tag(components_dto(&cf)?, "closed_form"));
        formula = Some(tag(central_formula(d), "closed_form"));
        let pdv = pd_euler_seifert(d)?;
        let (prime, _) = split_components(&geo, default_gottlieb(&o));
        let pe = prime.epsilon()?;
        checks.push(check("pd_plus_pi_prime_vanishes", pdv.add(&pe).is_zero(), format!("{pdv} + {pe}")));
        let px = pd_euler(&x)?;
        checks.push(check("pd_closed_form_vs_cells", px == pdv, format!("{px} vs {pdv}")));
        if order.is_none() {
            let chi_v = orbifold_chi(d);
            match rational_multiple(&pe, &h.gamma0) {
                Some(q) => {
                    checks.push(check("pi_prime_rational", q == -chi_v.clone(), format!("{q} vs {}", -chi_v)));
                    pi_q = Some(tag(rational_dto(&q)?, "cycle"));
                }
                None => checks.push(check("pi_prime_rational", false, "not a rational multiple of γ0")),
            }
        }
        pd = Some(tag(abelian_dto(&pdv)?, "closed_form"));
        obstruction = Some(dt_obstruction(d)?);
    }
    let agreement = checks.iter().all(|c| c.passed);
    Ok(SeifertReport {
        input: d.clone(),
        admissible: adm,
        exact: o.is_exact(),
        formal: !o.is_exact(),
        h1: tag(group_dto(&h.group)?, "snf"),
        gamma0: tag(abelian_dto(&h.gamma0)?, "snf"),
        fibers: h.fibers.iter().map(|f| Ok(tag(abelian_dto(f)?, "snf"))).collect::<Result<_>>()?,
        gamma0_order: tag(order.as_ref().map(small).transpose()?, "snf"),
        euler_number: match d {
            SeifertData::Closed { .. } => Some(tag(rational_dto(&euler_number(d)?)?, "closed_form")),
            SeifertData::Bounded { .. } => None,
        },
        orbifold_chi: tag(rational_dto(&orbifold_chi(d))?, "closed_form"),
        central_formula: formula,
        components_cycle: tag(components_dto(&geo)?, "cycle"),
        components_chain: tag(components_dto(&chain)?, "chain_level"),
        components_closed_form: closed,
        chi1: tag(abelian_dto(&chi1)?, "closed_form"),
        pd_euler: pd,
        pi_prime_rational: pi_q,
        dt_obstruction: obstruction,
        checks,
        agreement,
    })
}

fn element_from_file(o: &Arc<GroupOracle>, e: &ElementFile) -> Result<GroupRingElement> {
    GroupRingElement::from_terms(o, e.iter().map(|(w, c)| (w.clone(), *c)))
}

fn matrix_from_file(o: &Arc<GroupOracle>, m: &MatrixFile, rows: usize, cols: usize) -> Result<GroupRingMatrix> {
    if rows == 0 || cols == 0 {
        return Ok(GroupRingMatrix::zeros(o, rows, cols));
    }
    let rows_el = m
        .iter()
        .map(|r| r.iter().map(|e| element_from_file(o, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mat = GroupRingMatrix::from_rows(o, rows_el)?;
    if mat.rows() != rows || mat.cols() != cols {
        return Err(Error::DimensionMismatch(format!("expected {rows}x{cols}, got {}x{}", mat.rows(), mat.cols())));
    }
    Ok(mat)
}

fn matrix_to_file(m: &GroupRingMatrix) -> Result<MatrixFile> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.get(i, j).terms().map(|(w, c)| Ok((w.clone(), small(c)?))).collect::<Result<ElementFile>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

pub fn level_from_file(o: &Arc<GroupOracle>, l: &LevelFile) -> Result<(BasedComplex, Homotopy)> {
    let n = l.sizes.len();
    if l.boundaries.len() + 1 != n || l.homotopy.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!("{n} degrees need {} maps", n.saturating_sub(1))));
    }
    let bd = (0..n - 1)
        .map(|k| matrix_from_file(o, &l.boundaries[k], l.sizes[k], l.sizes[k + 1]))
        .collect::<Result<Vec<_>>>()?;
    let hd = (0..n - 1)
        .map(|k| matrix_from_file(o, &l.homotopy[k], l.sizes[k + 1], l.sizes[k]))
        .collect::<Result<Vec<_>>>()?;
    let c = BasedComplex::new(o, l.base_degree, l.sizes.clone(), bd)?;
    let h = Homotopy::new(&c, hd, &l.eta)?;
    Ok((c, h))
}

pub fn level_to_file(c: &BasedComplex, h: &Homotopy) -> Result<LevelFile> {
    let k = c.sizes().len().saturating_sub(1);
    Ok(LevelFile {
        base_degree: c.base_degree(),
        sizes: c.sizes().to_vec(),
        boundaries: (0..k).map(|i| matrix_to_file(c.boundary(i))).collect::<Result<_>>()?,
        homotopy: (0..k).map(|i| matrix_to_file(h.map(i))).collect::<Result<_>>()?,
        eta: h.eta().clone(),
    })
}

pub fn s1cw_complex(f: &S1cwFile) -> Result<S1CWComplex> {
    let o = f.oracle.build()?;
    let x = S1CWComplex::new(&o, f.gamma0.clone(), f.cells.clone());
    x.validate()?;
    Ok(x)
}

pub fn s1cw_report(f: &S1cwFile) -> Result<S1cwReport> {
    let x = s1cw_complex(f)?;
    let traced = chi_s1(&x)?;
    let cyc = reduce_class(&traced.chain)?;
    let derived = to_chain_data(&x)?;
    let mut checks = Vec::new();
    checks.push(check_result(
        "generated_homotopies_verify",
        derived.iter().map(|(c, h)| verify_homotopy(c, h)).try_fold(true, |acc, r| r.map(|b| acc && b)),
    ));
    let chain =
        if derived.is_empty() { ComponentClass::zero(&x.oracle) } else { reduce_class(&x1_filtered(&derived)?.chain)? };
    checks.push(check("cycle_vs_chain_level", cyc == chain, format!("{cyc} vs {chain}")));
    if let Some(levels) = &f.levels {
        let supplied = levels.iter().map(|l| level_from_file(&x.oracle, l)).collect::<Result<Vec<_>>>()?;
        for (i, (c, h)) in supplied.iter().enumerate() {
            checks.push(check_result(&format!("supplied_level_{i}_homotopy"), verify_homotopy(c, h)));
        }
        let r = if supplied.is_empty() {
            Ok(cyc == ComponentClass::zero(&x.oracle))
        } else {
            x1_filtered(&supplied).and_then(|t| reduce_class(&t.chain)).map(|s| s == cyc)
        };
        checks.push(check_result("cycle_vs_supplied_levels", r));
    }
    let eps = cyc.epsilon()?;
    let chi1 = chi1_closed_form(&x);
    checks.push(check_result("epsilon_star_vs_closed_form", chi1.as_ref().map(|c| *c == eps).map_err(Clone::clone)));
    let chi1 = match chi1 {
        Ok(v) => v,
        Err(Error::Disagreement(_)) => eps.clone(),
        Err(e) => return Err(e),
    };
    let pd = if x.has_fixed_points() { None } else { Some(tag(abelian_dto(&pd_euler(&x)?)?, "closed_form")) };
    let agreement = checks.iter().all(|c| c.passed);
    Ok(S1cwReport {
        input: f.clone(),
        cycle: tag(traced.chain.render(), "cycle"),
        cycle_status: match traced.status {
            CycleStatus::Cycle => "cycle".into(),
            CycleStatus::Undecided => "undecided".into(),
        },
        components_cycle: tag(components_dto(&cyc)?, "cycle"),
        components_chain: tag(components_dto(&chain)?, "chain_level"),
        epsilon_star: tag(abelian_dto(&eps)?, "cycle"),
        chi1: tag(abelian_dto(&chi1)?, "closed_form"),
        pd_euler: pd,
        checks,
        agreement,
    })
}

pub fn t2cw_complex(f: &T2cwFile) -> Result<T2CWComplex> {
    let o = f.oracle.build()?;
    let x = T2CWComplex::new(&o, f.cells.clone());
    x.validate()?;
    Ok(x)
}

pub fn t2cw_report(f: &T2cwFile) -> Result<T2cwReport> {
    let x = t2cw_complex(f)?;
    let levels = t2_chain_data(&x)?;
    let vanishing = levels_vanish(&levels)?;
    let checks = vec![check("level_traces_vanish", vanishing, "a level trace is a nonzero chain")];
    Ok(T2cwReport {
        input: f.clone(),
        levels: levels.len(),
        vanishing: tag(vanishing, "chain_level"),
        agreement: vanishing,
        checks,
    })
}

pub fn report(input: &Input) -> Result<Report> {
    Ok(match input {
        Input::Seifert(d) => Report::Seifert(seifert_report(d)?),
        Input::S1cw(f) => Report::S1cw(s1cw_report(f)?),
        Input::T2cw(f) => Report::T2cw(t2cw_report(f)?),
    })
}

/// Denominator sign normalised: `den > 0`.
pub fn rational_from_dto(r: &Rational) -> Option<BigRational> {
    if r.den.is_zero() {
        return None;
    }
    let q = BigRational::new(BigInt::from(r.num), BigInt::from(r.den));
    debug_assert!(q.denom().is_positive());
    Some(q)
}
