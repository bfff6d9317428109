//! Property suites over a corpus of groups, with machine-readable reports.
//!
//! Instances run on a worker pool; results are merged in corpus order, so a report depends
//! only on the corpus and the caps. An instance whose computation runs out of budget is
//! `skipped`, never `fail`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{conjugation_pair, trivial_pair, CompatiblePair};
use crate::catalog::{build, is_metacyclic, GroupSpec};
use crate::error::{Error, Result};
use crate::fp::{self, Limits, Presentation, Strategy};
use crate::group::FiniteGroup;
use crate::tensor::{
    abelian_exterior, abelian_tensor, enumerate_order, kappa_and_j, m0_and_bogomolov, metacyclic_m,
    nabla_consistency, phi_crossed_module, relator_count, schur_multiplier, tensor_product,
    tensor_square, Caps, RoutePolicy, TensorResult,
};

pub const SUITES: &[&str] = &[
    "crossed-module",
    "kappa-J",
    "class-bound",
    "strategy",
    "supersolvable",
    "abelian-oracle",
    "gamma-nabla",
    "b0-trivial",
    "b0-tensor",
    "metacyclic-M",
    "explore-solvable-length",
];

/// Suites whose records only report observations.
pub const REPORT_ONLY_SUITES: &[&str] = &["explore-solvable-length"];

/// `b0-tensor` pairs: metacyclic `G` up to this order...
pub const B0_TENSOR_MAX_G: usize = 16;
/// ...with `H` up to this order...
pub const B0_TENSOR_MAX_H: usize = 8;
/// ...and `|G (x) H|` up to this order.
pub const B0_TENSOR_MAX_PRODUCT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// Observation only; never counts as a failure.
    Report,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped (budget)",
            Status::Report => "report",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Conjugation,
    Trivial,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub suite: String,
    pub index: usize,
    /// Everything needed to replay the instance: `G`, and `H` for tensor products.
    pub specs: Vec<GroupSpec>,
    pub pair: Option<PairKind>,
    pub assertion: String,
    pub values: BTreeMap<String, Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl Record {
    /// One JSON line; runtime is included only on request so output stays byte-stable.
    pub fn to_json(&self, timings: bool) -> String {
        let mut v = serde_json::to_value(self).expect("records serialize");
        if timings {
            v["runtime_ms"] = json!(self.runtime.as_millis() as u64);
        }
        v.to_string()
    }

    pub fn name(&self) -> String {
        let names: Vec<String> = self.specs.iter().map(|s| s.to_string()).collect();
        match self.pair {
            Some(PairKind::Trivial) => format!("{} (trivial actions)", names.join(" (x) ")),
            _ => names.join(" (x) "),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub reported: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub records: Vec<Record>,
    pub summary: Summary,
    #[serde(skip)]
    pub runtime: Duration,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn json_lines(&self, timings: bool) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json(timings));
            out.push('\n');
        }
        out
    }
}

/// Human-readable table with one row per suite.
pub fn summary_table(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>6} {:>6} {:>6} {:>8} {:>7} {:>9}",
        "suite", "total", "pass", "fail", "skipped", "report", "time (s)"
    );
    for r in reports {
        let s = &r.summary;
        let _ = writeln!(
            out,
            "{:<24} {:>6} {:>6} {:>6} {:>8} {:>7} {:>9.1}",
            r.suite,
            s.total,
            s.passed,
            s.failed,
            s.skipped,
            s.reported,
            r.runtime.as_secs_f64()
        );
    }
    for r in reports {
        for f in r.failures() {
            let _ = writeln!(
                out,
                "FAIL {} #{} {}: {}{}",
                r.suite,
                f.index,
                f.name(),
                f.assertion,
                f.detail
                    .as_deref()
                    .map(|d| format!(" ({d})"))
                    .unwrap_or_default()
            );
        }
    }
    out
}

/// One unit of work: a group, or a pair of groups with their actions.
#[derive(Clone)]
pub struct Instance {
    pub specs: Vec<GroupSpec>,
    pub groups: Vec<FiniteGroup>,
    pub pair: Option<PairKind>,
}

impl Instance {
    fn single(spec: &GroupSpec, g: &FiniteGroup) -> Self {
        Instance {
            specs: vec![spec.clone()],
            groups: vec![g.clone()],
            pair: Some(PairKind::Conjugation),
        }
    }

    fn g(&self) -> &FiniteGroup {
        &self.groups[0]
    }

    fn compatible_pair(&self) -> CompatiblePair {
        match (self.pair, self.groups.len()) {
            (Some(PairKind::Trivial), 2) => trivial_pair(&self.groups[0], &self.groups[1]),
            _ => conjugation_pair(self.g()),
        }
    }
}

type Values = BTreeMap<String, Value>;

/// What an instance check produced: a verdict, the observed values, and the assertion.
struct Outcome {
    status: Status,
    values: Values,
    detail: Option<String>,
}

impl Outcome {
    fn verdict(ok: bool, values: Values) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            values,
            detail: None,
        }
    }
}

macro_rules! values {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = Values::new();
        $(m.insert($k.to_string(), json!($v));)*
        m
    }};
}

fn suite_assertion(name: &str) -> &'static str {
    match name {
        "crossed-module" => "phi is a crossed module with central kernel and normal image",
        "kappa-J" => "Im kappa = [G,G], J(G) central, |G(x)G| = |J(G)| |[G,G]|",
        "class-bound" => "class(G(x)G) <= ceil(class(G)/2)",
        "strategy" => "HLT and Felsch agree; D abelian/solvable/nilpotent lifts to G(x)G",
        "supersolvable" => "G supersolvable => G(x)G supersolvable; G solvable => G(x)G solvable",
        "abelian-oracle" => "G(x)G and G^G match the gcd closed forms",
        "gamma-nabla" => "|nabla(G)| divides |Gamma(G^ab)| and |G(x)G| = |nabla(G)| |G^G|",
        "b0-trivial" => "B0(G) = 0",
        "b0-tensor" => "B0(G(x)H) = 0",
        "metacyclic-M" => "M(G) = {x^s : x in N, [x,s] = 1} for a witness s",
        "explore-solvable-length" => "derived length of G(x)G (observation only)",
        "cross-check" => {
            "HLT, Felsch and the kernel route agree; abelian G matches the closed forms"
        }
        _ => "",
    }
}

/// Picks the instances a suite runs on out of a corpus.
pub fn suite_instances(name: &str, corpus: &[(GroupSpec, FiniteGroup)]) -> Result<Vec<Instance>> {
    let singles = |keep: &dyn Fn(&GroupSpec, &FiniteGroup) -> bool| -> Vec<Instance> {
        corpus
            .iter()
            .filter(|(s, g)| keep(s, g))
            .map(|(s, g)| Instance::single(s, g))
            .collect()
    };
    Ok(match name {
        "crossed-module" | "kappa-J" | "strategy" | "gamma-nabla" => singles(&|_, _| true),
        "class-bound" => singles(&|_, g| matches!(g.nilpotency_class(), Some(1..=3))),
        "supersolvable" => singles(&|_, g| g.is_solvable()),
        "abelian-oracle" => singles(&|_, g| g.is_abelian()),
        "b0-trivial" => singles(&|s, g| {
            g.is_abelian() || is_metacyclic(g) || matches!(s, GroupSpec::CentralExt { .. })
        }),
        "metacyclic-M" => singles(&|_, g| is_metacyclic(g)),
        "explore-solvable-length" => singles(&|_, g| matches!(g.derived_length(), Some(0..=2))),
        "b0-tensor" => {
            let mut out = Vec::new();
            let bases = corpus
                .iter()
                .filter(|(_, g)| g.order() <= B0_TENSOR_MAX_G && is_metacyclic(g));
            for (sg, g) in bases {
                if g.order() <= B0_TENSOR_MAX_H {
                    out.push(Instance::single(sg, g));
                }
                for (sh, h) in corpus.iter().filter(|(_, h)| h.order() <= B0_TENSOR_MAX_H) {
                    out.push(Instance {
                        specs: vec![sg.clone(), sh.clone()],
                        groups: vec![g.clone(), h.clone()],
                        pair: Some(PairKind::Trivial),
                    });
                }
            }
            out
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

/// Builds every spec; specs that fail to build are reported as errors.
pub fn build_corpus(specs: &[GroupSpec], cap: usize) -> Result<Vec<(GroupSpec, FiniteGroup)>> {
    specs
        .iter()
        .map(|s| Ok((s.clone(), crate::catalog::build_with_cap(s, cap)?)))
        .collect()
}

pub fn run_suite(
    name: &str,
    corpus: &[GroupSpec],
    caps: &Caps,
    threads: usize,
) -> Result<SuiteReport> {
    let built = build_corpus(corpus, caps.max_group_order)?;
    run_suite_on(name, &built, caps, threads)
}

pub fn run_suite_on(
    name: &str,
    corpus: &[(GroupSpec, FiniteGroup)],
    caps: &Caps,
    threads: usize,
) -> Result<SuiteReport> {
    caps.validate()?;
    let instances = suite_instances(name, corpus)?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let records: Vec<Record> = pool.install(|| {
        instances
            .par_iter()
            .enumerate()
            .map(|(i, inst)| run_instance(name, i, inst, caps))
            .collect()
    });
    let mut summary = Summary {
        total: records.len(),
        ..Summary::default()
    };
    for r in &records {
        match r.status {
            Status::Pass => summary.passed += 1,
            Status::Fail => summary.failed += 1,
            Status::Skipped => summary.skipped += 1,
            Status::Report => summary.reported += 1,
        }
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        records,
        summary,
        runtime: started.elapsed(),
    })
}

fn run_instance(suite: &str, index: usize, inst: &Instance, caps: &Caps) -> Record {
    let started = Instant::now();
    let mut caps = caps.clone();
    caps.deadline = Some(started + Duration::from_secs(caps.max_time_secs));
    let result = match suite {
        "crossed-module" => check_crossed_module(inst, &caps),
        "kappa-J" => check_kappa_j(inst, &caps),
        "class-bound" => check_class_bound(inst, &caps),
        "strategy" => check_strategy(inst, &caps),
        "supersolvable" => check_supersolvable(inst, &caps),
        "abelian-oracle" => check_abelian_oracle(inst, &caps),
        "gamma-nabla" => check_gamma_nabla(inst, &caps),
        "b0-trivial" => check_b0(inst.g(), &caps),
        "b0-tensor" => check_b0_tensor(inst, &caps),
        "metacyclic-M" => check_metacyclic_m(inst, &caps),
        "explore-solvable-length" => explore_solvable_length(inst, &caps),
        "cross-check" => cross_check_outcome(inst.g(), &caps),
        other => Err(Error::UnknownSuite(other.to_string())),
    };
    let outcome = result.unwrap_or_else(|e| Outcome {
        status: if e.is_budget() {
            Status::Skipped
        } else {
            Status::Fail
        },
        values: Values::new(),
        detail: Some(e.to_string()),
    });
    Record {
        suite: suite.to_string(),
        index,
        specs: inst.specs.clone(),
        pair: inst.pair,
        assertion: suite_assertion(suite).to_string(),
        values: outcome.values,
        status: outcome.status,
        detail: outcome.detail,
        runtime: started.elapsed(),
    }
}

fn square(inst: &Instance, caps: &Caps) -> Result<TensorResult> {
    tensor_product(&inst.compatible_pair(), caps)
}

fn check_crossed_module(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let ts = square(inst, caps)?;
    let (_, report) = phi_crossed_module(&ts)?;
    let mut out = Outcome::verdict(
        report.ok(),
        values! {
            "tensor_order" => ts.order(),
            "kernel_order" => report.kernel_order,
            "image_order" => report.image_order,
            "kernel_central" => report.kernel_central,
            "image_normal" => report.image_normal,
            "exhaustive" => report.exhaustive,
        },
    );
    if !report.violations.is_empty() {
        out.detail = Some(report.violations.join("; "));
    }
    Ok(out)
}

fn check_kappa_j(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let ts = square(inst, caps)?;
    let kj = kappa_and_j(&ts)?;
    let derived = inst.g().derived_subgroup().order();
    let product_ok = ts.order() == kj.j.order() * derived;
    Ok(Outcome::verdict(
        kj.image_is_derived_subgroup && kj.j_central && product_ok,
        values! {
            "square_order" => ts.order(),
            "j_order" => kj.j.order(),
            "j_invariants" => kj.j_invariants,
            "derived_order" => derived,
            "image_is_derived_subgroup" => kj.image_is_derived_subgroup,
            "j_central" => kj.j_central,
        },
    ))
}

fn check_class_bound(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let n = inst
        .g()
        .nilpotency_class()
        .ok_or_else(|| Error::InvalidInput("class-bound needs a nilpotent group".into()))?;
    let ts = square(inst, caps)?;
    let class = ts
        .nilpotency_class()
        .ok_or_else(|| Error::PropertyFailed("the tensor square is not nilpotent".into()))?;
    let bound = n.div_ceil(2);
    Ok(Outcome::verdict(
        class <= bound,
        values! {
            "class" => n,
            "square_class" => class,
            "bound" => bound,
            "square_order" => ts.order(),
        },
    ))
}

/// The presentation the group was defined by, or its Cayley presentation.
fn defining_presentation(spec: &GroupSpec, g: &FiniteGroup) -> Result<Presentation> {
    match spec {
        GroupSpec::Metacyclic { m, n, r } => Presentation::parse(&format!(
            "gens: a,b; rels: a^{m}, b^{n}, b a b^-1 a^-{}",
            r % m
        )),
        GroupSpec::Presentation { text } => Presentation::parse(text),
        _ => Ok(fp::presentation_of(g)),
    }
}

fn both_strategies(p: &Presentation, caps: &Caps) -> Result<(usize, usize)> {
    let limits = Limits {
        max_cosets: caps.max_cosets,
        max_time: Duration::from_secs(caps.max_time_secs),
        deadline: caps.deadline,
        ..Limits::default()
    };
    let hlt = fp::enumerate(p, Strategy::Hlt, &limits)?.live_count();
    let felsch = fp::enumerate(p, Strategy::Felsch, &limits)?.live_count();
    Ok((hlt, felsch))
}

fn check_strategy(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let g = inst.g();
    let p = defining_presentation(&inst.specs[0], g)?;
    let (hlt, felsch) = both_strategies(&p, caps)?;
    let mut ok = hlt == g.order() && felsch == g.order();
    let mut values = values! {
        "order" => g.order(),
        "presentation_hlt" => hlt,
        "presentation_felsch" => felsch,
    };
    let kernel_caps = Caps {
        route: RoutePolicy::Kernel,
        ..caps.clone()
    };
    let pair = conjugation_pair(g);
    let ts = tensor_product(&pair, &kernel_caps)?;
    values.insert("square_order".into(), json!(ts.order()));
    for exterior in [false, true] {
        let order = if exterior {
            schur_multiplier(g, &kernel_caps)?.order() as usize * g.derived_subgroup().order()
        } else {
            ts.order()
        };
        let key = if exterior { "wedge" } else { "square" };
        if order.saturating_mul(relator_count(&pair, exterior)) <= caps.auto_crosscheck_work {
            let h = enumerate_order(&pair, exterior, Strategy::Hlt, caps)?;
            let f = enumerate_order(&pair, exterior, Strategy::Felsch, caps)?;
            ok &= h == order && f == order;
            values.insert(format!("{key}_hlt"), json!(h));
            values.insert(format!("{key}_felsch"), json!(f));
        }
        values.insert(format!("{key}_order"), json!(order));
    }
    // Closure under D = D_G(G) = [G, G].
    let d = g.derived_subgroup();
    let (dg, _) = sub_group(g, &d)?;
    let (d_abelian, d_solvable, d_nilpotent) =
        (dg.is_abelian(), dg.is_solvable(), dg.is_nilpotent());
    let length = ts.derived_length();
    let nilpotent = ts.is_nilpotent();
    if d_abelian {
        ok &= matches!(length, Some(0..=2));
    }
    if d_solvable {
        ok &= length.is_some();
    }
    if d_nilpotent {
        ok &= nilpotent;
    }
    values.insert("d_abelian".into(), json!(d_abelian));
    values.insert("d_solvable".into(), json!(d_solvable));
    values.insert("d_nilpotent".into(), json!(d_nilpotent));
    values.insert("square_derived_length".into(), json!(length));
    values.insert("square_nilpotent".into(), json!(nilpotent));
    Ok(Outcome::verdict(ok, values))
}

/// A subgroup as a group in its own right, with the embedding.
fn sub_group(g: &FiniteGroup, s: &crate::subgroup::Subgroup) -> Result<(FiniteGroup, Vec<u32>)> {
    let members = s.members();
    let n = members.len();
    let pos = |x: u32| members.binary_search(&x).expect("closed") as u32;
    let mut table = Vec::with_capacity(n * n);
    for &a in members {
        for &b in members {
            table.push(pos(g.mul(a, b)));
        }
    }
    Ok((FiniteGroup::from_table(n, table, None)?, members.to_vec()))
}

fn check_supersolvable(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let g = inst.g();
    let ts = square(inst, caps)?;
    let (g_super, g_solvable) = (g.is_supersolvable(), g.is_solvable());
    let (t_super, t_solvable) = (ts.is_supersolvable(), ts.is_solvable());
    Ok(Outcome::verdict(
        (!g_super || t_super) && (!g_solvable || t_solvable),
        values! {
            "supersolvable" => g_super,
            "solvable" => g_solvable,
            "square_supersolvable" => t_super,
            "square_solvable" => t_solvable,
            "square_order" => ts.order(),
        },
    ))
}

fn check_abelian_oracle(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let g = inst.g();
    let inv = g.abelianization_invariants()?;
    let ts = square(inst, caps)?;
    // For abelian G the derivative is trivial, so the square is Ker phi.
    let square_inv = ts.kernel_invariants()?;
    let wedge_inv = schur_multiplier(g, caps)?;
    let (want_square, want_wedge) = (abelian_tensor(&inv, &inv), abelian_exterior(&inv));
    Ok(Outcome::verdict(
        ts.derivative().is_trivial() && square_inv == want_square && wedge_inv == want_wedge,
        values! {
            "invariants" => inv,
            "square" => square_inv,
            "square_expected" => want_square,
            "wedge" => wedge_inv,
            "wedge_expected" => want_wedge,
        },
    ))
}

fn check_gamma_nabla(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let r = nabla_consistency(inst.g(), caps)?;
    Ok(Outcome::verdict(
        r.divides_gamma && r.orders_multiply,
        values! {
            "nabla_order" => r.nabla_order,
            "gamma" => r.gamma,
            "square_order" => r.square_order,
            "wedge_order" => r.wedge_order,
        },
    ))
}

fn check_b0(g: &FiniteGroup, caps: &Caps) -> Result<Outcome> {
    let r = m0_and_bogomolov(g, caps)?;
    let schur = r.schur.order();
    Ok(Outcome::verdict(
        r.bogomolov.is_trivial()
            && schur % r.m0_order == 0
            && r.bogomolov.order() * r.m0_order == schur,
        values! {
            "schur" => r.schur,
            "m0_order" => r.m0_order,
            "bogomolov" => r.bogomolov,
        },
    ))
}

fn check_b0_tensor(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let ts = square(inst, caps)?;
    if ts.order() > B0_TENSOR_MAX_PRODUCT {
        return Ok(Outcome {
            status: Status::Skipped,
            values: values! { "tensor_order" => ts.order() },
            detail: Some(format!(
                "|G (x) H| = {} exceeds {}",
                ts.order(),
                B0_TENSOR_MAX_PRODUCT
            )),
        });
    }
    let t = ts.group().to_tabulated(B0_TENSOR_MAX_PRODUCT)?;
    let mut out = check_b0(&t, caps)?;
    out.values.insert("tensor_order".into(), json!(ts.order()));
    Ok(out)
}

fn check_metacyclic_m(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let r = metacyclic_m(inst.g(), caps)?;
    Ok(Outcome::verdict(
        r.witness.is_some(),
        values! {
            "n_generator" => inst.g().label(r.n_generator),
            "n_order" => r.n_order,
            "schur_order" => r.schur_order,
            "witness" => r.witness.map(|s| inst.g().label(s)),
            "candidates_tried" => r.candidates_tried,
        },
    ))
}

fn explore_solvable_length(inst: &Instance, caps: &Caps) -> Result<Outcome> {
    let ts = square(inst, caps)?;
    Ok(Outcome {
        status: Status::Report,
        values: values! {
            "derived_length" => inst.g().derived_length(),
            "square_derived_length" => ts.derived_length(),
            "square_order" => ts.order(),
        },
        detail: None,
    })
}

fn cross_check_outcome(g: &FiniteGroup, caps: &Caps) -> Result<Outcome> {
    let with = |route| Caps {
        route,
        ..caps.clone()
    };
    let kernel = tensor_square(g, &with(RoutePolicy::Kernel))?;
    let hlt = tensor_square(g, &with(RoutePolicy::Hlt))?;
    let felsch = tensor_square(g, &with(RoutePolicy::Felsch))?;
    let orders = [kernel.order(), hlt.order(), felsch.order()];
    let invariants = [
        kernel.kernel_invariants()?,
        hlt.kernel_invariants()?,
        felsch.kernel_invariants()?,
    ];
    let pair = conjugation_pair(g);
    let wedge_hlt = enumerate_order(&pair, true, Strategy::Hlt, caps)?;
    let wedge_felsch = enumerate_order(&pair, true, Strategy::Felsch, caps)?;
    let schur = schur_multiplier(g, &with(RoutePolicy::Kernel))?;
    let wedge_kernel = schur.order() as usize * g.derived_subgroup().order();
    let mut ok = orders.iter().all(|&o| o == orders[0])
        && invariants.iter().all(|i| *i == invariants[0])
        && wedge_hlt == wedge_kernel
        && wedge_felsch == wedge_kernel;
    let mut values = values! {
        "square_orders" => orders,
        "j_invariants" => &invariants,
        "wedge_orders" => [wedge_kernel, wedge_hlt, wedge_felsch],
        "schur" => schur,
    };
    if g.is_abelian() {
        let inv = g.abelianization_invariants()?;
        let (want_square, want_wedge) = (abelian_tensor(&inv, &inv), abelian_exterior(&inv));
        ok &= invariants[0] == want_square && schur == want_wedge;
        values.insert("square_expected".into(), json!(want_square));
        values.insert("wedge_expected".into(), json!(want_wedge));
    }
    Ok(Outcome::verdict(ok, values))
}

/// Tensor square under both enumeration strategies and the kernel route, with multiplier
/// invariants compared; abelian groups are also compared with the closed forms.
pub fn cross_check(spec: &GroupSpec, caps: &Caps) -> Record {
    let inst = match build(spec) {
        Ok(g) => Instance::single(spec, &g),
        Err(e) => {
            return Record {
                suite: "cross-check".into(),
                index: 0,
                specs: vec![spec.clone()],
                pair: Some(PairKind::Conjugation),
                assertion: suite_assertion("cross-check").into(),
                values: Values::new(),
                status: if e.is_budget() {
                    Status::Skipped
                } else {
                    Status::Fail
                },
                detail: Some(e.to_string()),
                runtime: Duration::ZERO,
            }
        }
    };
    run_instance("cross-check", 0, &inst, caps)
}
