//! Named verification checks grouped into suites, with deterministic reports.
//!
//! Every check has a stable id such as `lemma1.so.clifford.n3`. Negative
//! checks (constructions that must fail) pass when the construction fails.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::braid::{check_braid, extract_metric, Family, GroupSpec, ProjLabel};
use crate::consistency::{
    check_deco_identities, check_lemma1, check_metric_star, check_prop1, check_star,
    check_tensor_spectrum, expected_admissible, identity_perm, inverse_ordering, perturb, StarSpec,
};
use crate::error::{Error, Result};
use crate::pbw::analyze;
use crate::relations::{
    classical_limit_matches, expand_glm, gen_chain_with, gen_glm, glm_explicit,
    single_copy_with_cross, AlgebraPresentation, Braiding, ChainParams, CopyFlavor, GroupData,
    Sign,
};
use crate::scalar::RatFunc;
use crate::tensor::SparseMat;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    All,
    Braid,
    Lemma1,
    Chain,
    Glm,
    Star,
    Series,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Braid,
        SuiteName::Lemma1,
        SuiteName::Series,
        SuiteName::Chain,
        SuiteName::Glm,
        SuiteName::Star,
    ];
}

impl std::str::FromStr for SuiteName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => SuiteName::All,
            "braid" => SuiteName::Braid,
            "lemma1" => SuiteName::Lemma1,
            "chain" => SuiteName::Chain,
            "glm" => SuiteName::Glm,
            "star" => SuiteName::Star,
            "series" => SuiteName::Series,
            _ => return Err(Error::Config(format!("unknown suite '{s}'"))),
        })
    }
}

/// Which checks to generate. Unset fields fall back to the default ranges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    pub family: Option<Family>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub max_degree: usize,
    /// Adds per-check wall time; makes reports non-reproducible.
    #[serde(skip)]
    pub timings: bool,
}

impl SuiteConfig {
    pub fn new(suite: SuiteName) -> Self {
        SuiteConfig {
            suite,
            family: None,
            n: None,
            m: None,
            max_degree: DEFAULT_MAX_DEGREE,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let (Some(f), Some(n)) = (self.family, self.n) {
            GroupSpec::new(f, n)?;
        }
        if self.m == Some(0) {
            return Err(Error::Config("--m must be at least 1".into()));
        }
        if self.max_degree < 3 {
            return Err(Error::Config(
                "--max-degree must be at least 3 (overlaps live in degree 3)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub evidence: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!("{} {} {}\n", c.status.label(), c.id, c.evidence));
        }
        s.push_str(&format!(
            "summary: {} pass, {} fail, {} skip\n",
            self.summary.pass, self.summary.fail, self.summary.skip
        ));
        s
    }
}

type CheckFn = Box<dyn Fn(&Ctx) -> Result<(Status, Value)> + Send + Sync>;

struct Check {
    id: String,
    run: CheckFn,
}

/// Group data shared by the checks of one run.
#[derive(Default)]
struct Ctx {
    cache: Mutex<HashMap<GroupSpec, Arc<GroupData>>>,
}

impl Ctx {
    fn data(&self, g: GroupSpec) -> Result<Arc<GroupData>> {
        if let Some(d) = self.cache.lock().unwrap().get(&g) {
            return Ok(d.clone());
        }
        let d = Arc::new(GroupData::build(g)?);
        Ok(self.cache.lock().unwrap().entry(g).or_insert(d).clone())
    }
}

fn pass_if(ok: bool, evidence: Value) -> Result<(Status, Value)> {
    Ok((if ok { Status::Pass } else { Status::Fail }, evidence))
}

fn check(
    id: impl Into<String>,
    f: impl Fn(&Ctx) -> Result<(Status, Value)> + Send + Sync + 'static,
) -> Check {
    Check {
        id: id.into(),
        run: Box::new(f),
    }
}

fn family_id(f: Family) -> &'static str {
    match f {
        Family::SL => "sl",
        Family::SO => "so",
        Family::Sp => "sp",
    }
}

fn gid(g: GroupSpec) -> String {
    format!("{}.n{}", family_id(g.family), g.n)
}

fn default_groups() -> Vec<GroupSpec> {
    vec![
        GroupSpec::sl(2),
        GroupSpec::sl(3),
        GroupSpec::sl(4),
        GroupSpec::so(3),
        GroupSpec::so(4),
        GroupSpec::so(5),
        GroupSpec::sp(1),
        GroupSpec::sp(2),
    ]
}

fn groups_for(cfg: &SuiteConfig, defaults: Vec<GroupSpec>) -> Vec<GroupSpec> {
    match (cfg.family, cfg.n) {
        (Some(f), Some(n)) => GroupSpec::new(f, n).into_iter().collect(),
        (Some(f), None) => defaults.into_iter().filter(|g| g.family == f).collect(),
        (None, Some(n)) => defaults.into_iter().filter(|g| g.n == n).collect(),
        (None, None) => defaults,
    }
}

fn admissible_signs(g: GroupSpec) -> Vec<Sign> {
    [Sign::Weyl, Sign::Clifford]
        .into_iter()
        .filter(|&s| expected_admissible(g, s))
        .collect()
}

fn series_evidence(pres: &AlgebraPresentation, max_degree: usize) -> Result<(Status, Value)> {
    let a = analyze(pres, max_degree)?;
    let ok = a.series.as_ref().is_some_and(|s| s.all_match());
    pass_if(
        ok,
        json!({
            "overlaps": a.confluence.overlaps,
            "unresolved": a.confluence.unresolved.len(),
            "first_unresolved": a.confluence.unresolved.first(),
            "series": a.series.map(|s| s.rows),
        }),
    )
}

/// Pass when the system fails to be confluent.
fn negative_confluence(pres: &AlgebraPresentation) -> Result<(Status, Value)> {
    let a = analyze(pres, 3)?;
    let first = a.confluence.unresolved.first().cloned();
    pass_if(
        !a.confluence.is_confluent(),
        json!({
            "expected": "unresolved overlaps",
            "overlaps": a.confluence.overlaps,
            "unresolved": a.confluence.unresolved.len(),
            "witness": first,
        }),
    )
}

fn braid_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for g in groups_for(cfg, default_groups()) {
        out.push(check(format!("braid.{}", gid(g)), move |ctx| {
            let d = ctx.data(g)?;
            let r = d.rhat();
            let n2 = r.dim();
            let forward = check_braid(r, g.n);
            let inverse = check_braid(&d.inverse, g.n);
            let product = r.matmul(&d.inverse)? == SparseMat::identity(n2);
            pass_if(
                forward && inverse && product,
                json!({"braid": forward, "braid_inverse": inverse, "inverse_product": product, "nnz": r.nnz()}),
            )
        }));
        out.push(check(format!("projectors.{}", gid(g)), move |ctx| {
            let d = ctx.data(g)?;
            let mut ranks = serde_json::Map::new();
            let mut ok = true;
            for (entry, (label, p)) in d.braid.spectrum.iter().zip(&d.projectors.projectors) {
                let rank = p.rank();
                ok &= rank == entry.expected_rank && p.matmul(p)? == *p;
                ranks.insert(
                    label.to_string(),
                    json!({"eigenvalue": entry.eigenvalue, "rank": rank}),
                );
            }
            let id = SparseMat::identity(d.rhat().dim());
            ok &= d.projectors.plus.matadd(&d.projectors.minus)? == id;
            let mut ev = json!({
                "projectors": ranks,
                "plus_rank": d.projectors.plus.rank(),
                "minus_rank": d.projectors.minus.rank(),
            });
            if g.family == Family::SO {
                let m = extract_metric(&d.projectors, g.n)?;
                let factorizes = Some(&m.trace_projector()) == d.projectors.get(ProjLabel::Trace);
                ok &= factorizes;
                ev["metric_factorizes_trace"] = json!(factorizes);
            }
            pass_if(ok, ev)
        }));
    }
    out
}

fn lemma1_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let defaults = vec![
        GroupSpec::sl(2),
        GroupSpec::sl(3),
        GroupSpec::sl(4),
        GroupSpec::so(3),
        GroupSpec::so(4),
        GroupSpec::so(5),
        GroupSpec::sp(1),
        GroupSpec::sp(2),
        GroupSpec::sp(3),
    ];
    let mut out = Vec::new();
    for g in groups_for(cfg, defaults) {
        for sign in [Sign::Weyl, Sign::Clifford] {
            out.push(check(
                format!("lemma1.{}.{}.n{}", family_id(g.family), sign, g.n),
                move |ctx| {
                    let d = ctx.data(g)?;
                    let v = check_lemma1(&d, sign)?;
                    let expected = expected_admissible(g, sign);
                    pass_if(
                        v.admissible == expected,
                        json!({
                            "admissible": v.admissible,
                            "expected": expected,
                            "eigenvalues_of_required_sign": v.eigenvalues_of_required_sign,
                            "witness_nnz": v.witness_nnz,
                        }),
                    )
                },
            ));
        }
    }
    out
}

fn series_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let defaults = vec![
        GroupSpec::sl(2),
        GroupSpec::sl(3),
        GroupSpec::so(3),
        GroupSpec::sp(1),
    ];
    let ms: Vec<usize> = cfg.m.map(|m| vec![m]).unwrap_or_else(|| vec![1]);
    let deg = cfg.max_degree;
    let mut out = Vec::new();
    for g in groups_for(cfg, defaults) {
        for sign in admissible_signs(g) {
            for &m in &ms {
                for variant in [1i8, -1] {
                    let id = format!("series.{}.{}.m{}.v{:+}", gid(g), sign, m, variant);
                    out.push(check(id, move |ctx| {
                        let d = ctx.data(g)?;
                        let pres = gen_chain_with(&d, &ChainParams::uniform(m, sign, variant))?;
                        series_evidence(&pres, deg)
                    }));
                }
                out.push(check(
                    format!("classical.{}.{}.m{}", gid(g), sign, m),
                    move |ctx| {
                        let d = ctx.data(g)?;
                        let pres = gen_chain_with(
                            &d,
                            &ChainParams::uniform(m, sign, 1).with_generic_couplings(),
                        )?;
                        let ok = classical_limit_matches(&pres)?;
                        pass_if(
                            ok,
                            json!({"classical_span_equal": ok, "relations": pres.relations.len()}),
                        )
                    },
                ));
            }
        }
    }
    let negative_defaults = vec![GroupSpec::so(3), GroupSpec::sp(2)];
    for g in groups_for(cfg, negative_defaults) {
        for sign in [Sign::Weyl, Sign::Clifford] {
            if expected_admissible(g, sign) {
                continue;
            }
            for c_index in 0..2 {
                let id = format!("series.negative.{}.{}.c{}", gid(g), sign, c_index + 1);
                out.push(check(id, move |ctx| {
                    let d = ctx.data(g)?;
                    let eig = d.eigenvalues_of_required_sign(sign);
                    let Some(c) = eig.get(c_index) else {
                        return Ok((
                            Status::Skip,
                            json!({"reason": "fewer candidate eigenvalues"}),
                        ));
                    };
                    let s = d.rhat().scale(&-c.inv()?);
                    let mut r = negative_confluence(&single_copy_with_cross(&d, sign, &s))?;
                    r.1["candidate_eigenvalue"] = json!(c);
                    Ok(r)
                }));
            }
        }
    }
    out
}

fn chain_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let deg = cfg.max_degree;
    let mut out = Vec::new();
    let sl = matches!(cfg.family, None | Some(Family::SL));
    let groups = groups_for(
        cfg,
        vec![
            GroupSpec::sl(2),
            GroupSpec::sl(3),
            GroupSpec::so(3),
            GroupSpec::sp(1),
        ],
    );
    let ms: Vec<usize> = cfg.m.map(|m| vec![m]).unwrap_or_else(|| vec![2, 3]);
    for &g in &groups {
        for sign in admissible_signs(g) {
            for &m in &ms {
                // SO/Sp chains grow quickly; keep the default range small.
                if g.family != Family::SL && m > 2 && cfg.m.is_none() {
                    continue;
                }
                if g.n > 2 && m > 2 && cfg.m.is_none() {
                    continue;
                }
                let id = format!("chain.{}.m{}.{}", gid(g), m, sign);
                out.push(check(id, move |ctx| {
                    let d = ctx.data(g)?;
                    let pres = gen_chain_with(
                        &d,
                        &ChainParams::uniform(m, sign, 1).with_generic_couplings(),
                    )?;
                    series_evidence(&pres, deg)
                }));
            }
        }
    }
    let sl_groups: Vec<GroupSpec> = groups
        .iter()
        .copied()
        .filter(|g| g.family == Family::SL)
        .collect();
    for &g in sl_groups.iter().take(1) {
        let mixed: Vec<(&str, Vec<CopyFlavor>)> = vec![
            (
                "mixed-parity.m2",
                vec![
                    CopyFlavor::new(Sign::Weyl, 1),
                    CopyFlavor::new(Sign::Clifford, 1),
                ],
            ),
            (
                "mixed-parity.m3",
                vec![
                    CopyFlavor::new(Sign::Clifford, 1),
                    CopyFlavor::new(Sign::Weyl, -1),
                    CopyFlavor::new(Sign::Clifford, -1),
                ],
            ),
            (
                "mixed-variant.m2",
                vec![
                    CopyFlavor::new(Sign::Weyl, 1),
                    CopyFlavor::new(Sign::Weyl, -1),
                ],
            ),
        ];
        for (name, flavors) in mixed {
            out.push(check(format!("chain.{}.{}", gid(g), name), move |ctx| {
                let d = ctx.data(g)?;
                let pres = gen_chain_with(&d, &ChainParams::from_flavors(flavors.clone()))?;
                series_evidence(&pres, deg)
            }));
        }
        out.push(check(
            format!("chain.negative.{}.cyclic.m3", gid(g)),
            move |ctx| {
                let d = ctx.data(g)?;
                let mut p = ChainParams::uniform(3, Sign::Weyl, 1);
                p.braidings.insert((1, 3), Braiding::Under);
                negative_confluence(&gen_chain_with(&d, &p)?)
            },
        ));
        out.push(check(
            format!("chain.negative.{}.inverse-creator-braiding.m2", gid(g)),
            move |ctx| {
                let d = ctx.data(g)?;
                let mut p = ChainParams::uniform(2, Sign::Weyl, 1);
                p.braidings.insert((1, 2), Braiding::MixedInverse);
                negative_confluence(&gen_chain_with(&d, &p)?)
            },
        ));
    }
    if sl {
        let ns: Vec<usize> = match cfg.n {
            Some(n) => vec![n],
            None => vec![2, 3],
        };
        for n in ns {
            out.push(check(format!("prop1.sl.n{n}"), move |_| {
                let r = crate::braid::sl_rhat(n);
                let x: RatFunc = "(q^2 + 3)/(q - 2)".parse()?;
                let scaled = check_prop1(&r.scale(&x), &r)?;
                let plain = check_prop1(&r, &r)?;
                let inverse = check_prop1(&crate::braid::sl_rhat_inverse(n), &r)?;
                let identity = check_prop1(&SparseMat::identity(n * n), &r)?;
                let perturbed = check_prop1(&perturb(&r, 1, n, &RatFunc::q()), &r)?;
                pass_if(
                    scaled && plain && !inverse && !identity && !perturbed,
                    json!({
                        "x_r": scaled,
                        "r": plain,
                        "r_inverse": inverse,
                        "identity": identity,
                        "perturbed": perturbed,
                    }),
                )
            }));
        }
    }
    out
}

fn glm_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let deg = cfg.max_degree;
    let mut out = Vec::new();
    let ms: Vec<usize> = cfg.m.map(|m| vec![m]).unwrap_or_else(|| vec![2, 3]);
    let ns: Vec<usize> = cfg.n.map(|n| vec![n]).unwrap_or_else(|| vec![2, 3]);
    if matches!(cfg.family, None | Some(Family::SL)) {
        for &m in &ms {
            for &n in &ns {
                if m >= 2 && n >= 2 {
                    out.push(check(format!("glm.deco.m{m}.n{n}"), move |_| {
                        let d = check_deco_identities(m, n)?;
                        pass_if(d.holds(), serde_json::to_value(&d).unwrap())
                    }));
                }
                for sign in [Sign::Weyl, Sign::Clifford] {
                    out.push(check(format!("glm.expand.{sign}.m{m}.n{n}"), move |_| {
                        let pres = gen_glm(m, n, sign, false)?;
                        let explicit = expand_glm(&pres)?;
                        pass_if(
                            true,
                            json!({"span_equal": true, "relations": explicit.relations.len()}),
                        )
                    }));
                }
            }
        }
        let series_ms: Vec<usize> = cfg.m.map(|m| vec![m]).unwrap_or_else(|| vec![1, 2, 3]);
        for &m in &series_ms {
            for &n in &ns {
                for sign in [Sign::Weyl, Sign::Clifford] {
                    for inverse in [false, true] {
                        let v = if inverse { "rinv" } else { "r" };
                        out.push(check(
                            format!("glm.series.{sign}.{v}.m{m}.n{n}"),
                            move |_| series_evidence(&gen_glm(m, n, sign, inverse)?, deg),
                        ));
                    }
                    out.push(check(
                        format!("glm.classical.{sign}.m{m}.n{n}"),
                        move |_| {
                            let ok = classical_limit_matches(&gen_glm(m, n, sign, false)?)?;
                            pass_if(ok, json!({"classical_span_equal": ok}))
                        },
                    ));
                }
            }
        }
        for &n in &ns {
            let m = *ms.last().unwrap();
            out.push(check(format!("glm.last-copy.weyl.m{m}.n{n}"), move |ctx| {
                // The Weyl tail runs over later copies, so the last copy's
                // diagonal relations are those of a single copy.
                let explicit = glm_explicit(m, n, Sign::Weyl);
                let single = gen_chain_with(
                    &*ctx.data(GroupSpec::sl(n))?,
                    &ChainParams::uniform(1, Sign::Weyl, 1),
                )?;
                let last: Vec<_> = explicit
                    .relations
                    .iter()
                    .filter(|r| r.tag == "diagonal")
                    .filter(|r| {
                        r.terms.keys().all(|&(x, y)| {
                            explicit.symbol(x).copy == m && explicit.symbol(y).copy == m
                        })
                    })
                    .map(|r| {
                        r.terms
                            .iter()
                            .map(|(&(x, y), c)| {
                                (
                                    (
                                        explicit.symbol(x).kind,
                                        explicit.symbol(x).mode,
                                        explicit.symbol(y).kind,
                                        explicit.symbol(y).mode,
                                    ),
                                    c.clone(),
                                )
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
                let reference: Vec<_> = single
                    .relations
                    .iter()
                    .filter(|r| r.tag == "diagonal")
                    .map(|r| {
                        r.terms
                            .iter()
                            .map(|(&(x, y), c)| {
                                (
                                    (
                                        single.symbol(x).kind,
                                        single.symbol(x).mode,
                                        single.symbol(y).kind,
                                        single.symbol(y).mode,
                                    ),
                                    c.clone(),
                                )
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
                let ok = last == reference;
                pass_if(ok, json!({"relations": last.len(), "identical": ok}))
            }));
        }
        out.push(check("glm.spectrum.sl.n2.m2", |ctx| {
            let t = check_tensor_spectrum(&*ctx.data(GroupSpec::sl(2))?, 2, 1)?;
            pass_if(
                t.verified && t.negatives == 1,
                serde_json::to_value(&t).unwrap(),
            )
        }));
    }
    let nogo_groups = groups_for(
        cfg,
        vec![
            GroupSpec::so(3),
            GroupSpec::so(4),
            GroupSpec::so(5),
            GroupSpec::sp(1),
            GroupSpec::sp(2),
        ],
    );
    for g in nogo_groups.into_iter().filter(|g| g.family != Family::SL) {
        for &m in &ms {
            for variant in [1i8, -1] {
                let id = format!("glm.nogo.{}.m{}.v{:+}", gid(g), m, variant);
                out.push(check(id, move |ctx| {
                    let t = check_tensor_spectrum(&*ctx.data(g)?, m, variant)?;
                    pass_if(
                        t.verified && t.excludes_both_signs(),
                        serde_json::to_value(&t).unwrap(),
                    )
                }));
            }
        }
    }
    out
}

fn star_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let ms: Vec<usize> = cfg.m.map(|m| vec![m]).unwrap_or_else(|| vec![2, 3]);
    let sl_groups = groups_for(cfg, vec![GroupSpec::sl(2)]);
    for g in sl_groups.into_iter().filter(|g| g.family == Family::SL) {
        for &m in &ms {
            for sign in [Sign::Weyl, Sign::Clifford] {
                out.push(check(
                    format!("star.chain.{}.m{}.{}.inverse-order", gid(g), m, sign),
                    move |ctx| {
                        let d = ctx.data(g)?;
                        let pres = gen_chain_with(
                            &d,
                            &ChainParams::uniform(m, sign, 1).with_generic_couplings(),
                        )?;
                        let rep = check_star(&pres, &StarSpec::plain(inverse_ordering(m))?)?;
                        pass_if(rep.preserved, serde_json::to_value(&rep).unwrap())
                    },
                ));
            }
            if m >= 2 {
                out.push(check(
                    format!("star.negative.{}.m{}.identity-order", gid(g), m),
                    move |ctx| {
                        let d = ctx.data(g)?;
                        let pres = gen_chain_with(&d, &ChainParams::uniform(m, Sign::Weyl, 1))?;
                        let rep = check_star(&pres, &StarSpec::plain(identity_perm(m))?)?;
                        pass_if(!rep.preserved, serde_json::to_value(&rep).unwrap())
                    },
                ));
                let flavor_cases: [(&str, Vec<CopyFlavor>); 2] = [
                    ("mixed-parity", {
                        let mut f = vec![CopyFlavor::new(Sign::Weyl, 1); m];
                        f[0] = CopyFlavor::new(Sign::Clifford, 1);
                        f
                    }),
                    ("mixed-variant", {
                        let mut f = vec![CopyFlavor::new(Sign::Weyl, 1); m];
                        f[0] = CopyFlavor::new(Sign::Weyl, -1);
                        f
                    }),
                ];
                for (name, flavors) in flavor_cases {
                    out.push(check(
                        format!("star.negative.{}.m{}.{}", gid(g), m, name),
                        move |ctx| {
                            let d = ctx.data(g)?;
                            let pres =
                                gen_chain_with(&d, &ChainParams::from_flavors(flavors.clone()))?;
                            let rep = check_star(&pres, &StarSpec::plain(inverse_ordering(m))?)?;
                            pass_if(!rep.preserved, serde_json::to_value(&rep).unwrap())
                        },
                    ));
                }
            }
            if m >= 3 {
                out.push(check(
                    format!("star.negative.{}.m{}.asymmetric-couplings", gid(g), m),
                    move |ctx| {
                        let d = ctx.data(g)?;
                        let mut p = ChainParams::uniform(m, Sign::Weyl, 1).with_generic_couplings();
                        p.couplings.insert((1, 2), RatFunc::q_pow(2));
                        let pres = gen_chain_with(&d, &p)?;
                        let rep = check_star(&pres, &StarSpec::plain(inverse_ordering(m))?)?;
                        pass_if(!rep.preserved, serde_json::to_value(&rep).unwrap())
                    },
                ));
            }
        }
    }
    if matches!(cfg.family, None | Some(Family::SL)) {
        let gm: Vec<usize> = cfg.m.map(|m| vec![m]).unwrap_or_else(|| vec![2]);
        let gn: Vec<usize> = cfg.n.map(|n| vec![n]).unwrap_or_else(|| vec![2]);
        for &m in &gm {
            for &n in &gn {
                for sign in [Sign::Weyl, Sign::Clifford] {
                    out.push(check(format!("star.glm.{sign}.m{m}.n{n}"), move |_| {
                        let pres = gen_glm(m, n, sign, false)?;
                        let rep = check_star(&pres, &StarSpec::plain(identity_perm(m))?)?;
                        pass_if(rep.preserved, serde_json::to_value(&rep).unwrap())
                    }));
                }
            }
        }
    }
    let so_groups = groups_for(cfg, vec![GroupSpec::so(3)]);
    for g in so_groups.into_iter().filter(|g| g.family == Family::SO) {
        let metric_ms: Vec<usize> = cfg.m.map(|m| vec![m]).unwrap_or_else(|| vec![1, 2]);
        for m in metric_ms {
            out.push(check(
                format!("star.metric.{}.m{}.inverse-order", gid(g), m),
                move |ctx| {
                    let d = ctx.data(g)?;
                    let metric = extract_metric(&d.projectors, g.n)?;
                    let pres = gen_chain_with(&d, &ChainParams::uniform(m, Sign::Weyl, 1))?;
                    let rep = check_metric_star(&pres, &metric, inverse_ordering(m))?;
                    pass_if(rep.preserved, serde_json::to_value(&rep).unwrap())
                },
            ));
            if m >= 2 {
                out.push(check(
                    format!("star.metric.negative.{}.m{}.identity-order", gid(g), m),
                    move |ctx| {
                        let d = ctx.data(g)?;
                        let metric = extract_metric(&d.projectors, g.n)?;
                        let pres = gen_chain_with(&d, &ChainParams::uniform(m, Sign::Weyl, 1))?;
                        let rep = check_metric_star(&pres, &metric, identity_perm(m))?;
                        pass_if(!rep.preserved, serde_json::to_value(&rep).unwrap())
                    },
                ));
            }
        }
    }
    out
}

fn build_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let suites: Vec<SuiteName> = match cfg.suite {
        SuiteName::All => SuiteName::ALL.to_vec(),
        s => vec![s],
    };
    suites
        .into_iter()
        .flat_map(|s| match s {
            SuiteName::Braid => braid_checks(cfg),
            SuiteName::Lemma1 => lemma1_checks(cfg),
            SuiteName::Series => series_checks(cfg),
            SuiteName::Chain => chain_checks(cfg),
            SuiteName::Glm => glm_checks(cfg),
            SuiteName::Star => star_checks(cfg),
            SuiteName::All => unreachable!(),
        })
        .collect()
}

/// Ids of the checks a config selects, in report order.
pub fn check_ids(cfg: &SuiteConfig) -> Vec<String> {
    build_checks(cfg).into_iter().map(|c| c.id).collect()
}

/// Runs the selected checks concurrently; results keep the build order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let checks = build_checks(cfg);
    let ctx = Ctx::default();
    let checks: Vec<CheckResult> = checks
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let (status, evidence) = match (c.run)(&ctx) {
                Ok(r) => r,
                Err(e) => (Status::Fail, json!({"error": e.to_string()})),
            };
            CheckResult {
                id: c.id.clone(),
                status,
                evidence,
                wall_time_ms: cfg.timings.then(|| start.elapsed().as_millis()),
            }
        })
        .collect();
    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Skip => summary.skip += 1,
        }
    }
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        tool: "braidchain",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        checks,
        summary,
    })
}
