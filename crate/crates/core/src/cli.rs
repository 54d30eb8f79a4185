//! Named verification suites, their reports, and one-shot computations.
//!
//! Reports are deterministic: checks run in a fixed order, fuzzing uses a fixed seed and
//! timings are only recorded on request.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coalgebra::{co_leibniz_check, Check};
use crate::error::{Error, Result};
use crate::freealg::{MultiTensor, Word};
use crate::lie::lyndon_basis;
use crate::qlba::{
    alt_condition_check, cocycle_check, cojacobi_rank_test, in_lambda2_of_lie, in_lambda3_of_lie, pr_qlba,
    qlba_s, quasi_cojacobi_check, twist_qlba, Bivector, QlbaData,
};
use crate::quant::{
    antipode_closed_form, classical_limit, coassoc_defect, convolution, counit_check, order2_solve,
    order2_structure, closed_form_coefficients, pentagon_defect, rank2_quantize, test_words, twist_qh, unit_counit,
    EndoMap, QhData,
};
use crate::scalars::{fmt_rational, int, rat, Rational};
use crate::traces::{
    compare_pr_with_algebraic, find_noncyclic_jacobi_witness, jacobi_on_traces, pr_bracket, z_symbol,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MAX_DIM: usize = 6;
pub const MAX_ORDER: usize = 8;
pub const WITNESS_TERMS: usize = 50;
const SEED: u64 = 0x5eed_2010;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Coleibniz,
    QlbaAxioms,
    CojacobiRank,
    TracesJacobi,
    PrVsAlgebraic,
    Rank2Quantization,
    Antipode,
    Order2,
    Twists,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Coleibniz,
        Suite::QlbaAxioms,
        Suite::CojacobiRank,
        Suite::TracesJacobi,
        Suite::PrVsAlgebraic,
        Suite::Rank2Quantization,
        Suite::Antipode,
        Suite::Order2,
        Suite::Twists,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Coleibniz => "coleibniz",
            Suite::QlbaAxioms => "qlba-axioms",
            Suite::CojacobiRank => "cojacobi-rank",
            Suite::TracesJacobi => "traces-jacobi",
            Suite::PrVsAlgebraic => "pr-vs-algebraic",
            Suite::Rank2Quantization => "rank2-quantization",
            Suite::Antipode => "antipode",
            Suite::Order2 => "order2",
            Suite::Twists => "twists",
        }
    }

    pub fn default_order(self) -> usize {
        match self {
            Suite::Rank2Quantization | Suite::Antipode => 5,
            _ => 3,
        }
    }

    pub fn default_degree(self) -> usize {
        match self {
            Suite::TracesJacobi => 8,
            Suite::PrVsAlgebraic => 6,
            Suite::Rank2Quantization => 2,
            _ => 3,
        }
    }

    fn max_degree(self, dim: usize) -> usize {
        match self {
            Suite::Coleibniz | Suite::QlbaAxioms => {
                (1..).take_while(|&k| dim.saturating_pow(k as u32) <= 4096).last().unwrap_or(1)
            }
            Suite::TracesJacobi => 10,
            Suite::PrVsAlgebraic => 9,
            Suite::Rank2Quantization | Suite::Antipode => 3,
            _ => usize::MAX,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Usage(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Metric {
    Minkowski,
    Matrix { label: String, g: Bivector },
}

impl Metric {
    /// "minkowski" or the path of a JSON matrix of rational strings.
    pub fn parse(arg: &str) -> Result<Self> {
        if arg == "minkowski" {
            return Ok(Metric::Minkowski);
        }
        let text = std::fs::read_to_string(arg).map_err(|e| Error::Usage(format!("cannot read metric {arg:?}: {e}")))?;
        Ok(Metric::Matrix { label: arg.to_string(), g: Bivector::from_json(&text)? })
    }

    pub fn label(&self) -> &str {
        match self {
            Metric::Minkowski => "minkowski",
            Metric::Matrix { label, .. } => label,
        }
    }

    pub fn bivector(&self, dim: usize) -> Result<Bivector> {
        match self {
            Metric::Minkowski => Ok(Bivector::minkowski(dim)),
            Metric::Matrix { g, .. } if g.dim() == dim => Ok(g.clone()),
            Metric::Matrix { g, .. } => Err(Error::Usage(format!("metric is {0}×{0} but --dim is {dim}", g.dim()))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub dim: usize,
    pub order: Option<usize>,
    pub degree: Option<usize>,
    pub metric: Metric,
    pub parallel: bool,
    pub timing: bool,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig { suite, dim: 3, order: None, degree: None, metric: Metric::Minkowski, parallel: false, timing: false }
    }

    pub fn order(&self) -> usize {
        self.order.unwrap_or(self.suite.default_order())
    }

    pub fn degree(&self) -> usize {
        self.degree.unwrap_or(self.suite.default_degree())
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.order() == 0 || self.degree() == 0 {
            return Err(Error::Usage("--dim, --order and --degree must be at least 1".into()));
        }
        if self.dim > MAX_DIM {
            return Err(Error::ResourceCap(format!("dim {} exceeds {MAX_DIM}", self.dim)));
        }
        if self.order() > MAX_ORDER {
            return Err(Error::ResourceCap(format!("order {} exceeds {MAX_ORDER}", self.order())));
        }
        let cap = self.suite.max_degree(self.dim);
        if self.degree() > cap {
            return Err(Error::ResourceCap(format!(
                "degree {} exceeds {cap} for suite {} at dim {}",
                self.degree(),
                self.suite.name(),
                self.dim
            )));
        }
        let needs_two = matches!(
            self.suite,
            Suite::CojacobiRank | Suite::Rank2Quantization | Suite::Antipode | Suite::Order2 | Suite::Twists
        );
        if needs_two && self.dim < 2 {
            return Err(Error::Usage(format!("suite {} needs --dim ≥ 2", self.suite.name())));
        }
        if matches!(self.suite, Suite::Rank2Quantization | Suite::Twists | Suite::Order2) && self.order() < 3 {
            return Err(Error::Usage(format!("suite {} needs --order ≥ 3", self.suite.name())));
        }
        let g = self.metric.bivector(self.dim)?;
        if matches!(self.suite, Suite::TracesJacobi | Suite::PrVsAlgebraic | Suite::Order2) && !g.is_symmetric() {
            return Err(Error::Usage(format!("suite {} needs a symmetric metric", self.suite.name())));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub dim: usize,
    pub order: usize,
    pub degree: usize,
    pub metric: String,
    pub parallel: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessTerm {
    pub coeff: String,
    pub words: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub description: String,
    pub terms: Vec<WitnessTerm>,
    pub truncated: bool,
}

impl Witness {
    pub fn tensor(description: impl Into<String>, t: &MultiTensor) -> Self {
        let terms: Vec<WitnessTerm> = t
            .terms()
            .take(WITNESS_TERMS)
            .map(|(k, v)| WitnessTerm { coeff: v.to_string(), words: k.iter().map(Word::to_string).collect() })
            .collect();
        Witness { description: description.into(), terms, truncated: t.len() > WITNESS_TERMS }
    }

    pub fn note(description: impl Into<String>) -> Self {
        Witness { description: description.into(), terms: Vec::new(), truncated: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: ConfigEcho,
    pub checks: Vec<CheckResult>,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "suite {} (dim {}, order {}, degree {}, metric {})",
            self.suite, c.dim, c.order, c.degree, c.metric
        );
        for check in &self.checks {
            let tag = match check.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let time = check.millis.map(|m| format!(" [{m} ms]")).unwrap_or_default();
            let _ = writeln!(out, "{tag} {}{time}", check.name);
            if let Some(w) = &check.witness {
                let _ = writeln!(out, "     witness: {}", w.description);
                for t in &w.terms {
                    let _ = writeln!(out, "       ({}) {}", t.coeff, t.words.join(" ⊗ "));
                }
                if w.truncated {
                    let _ = writeln!(out, "       … truncated");
                }
            }
        }
        let _ = writeln!(out, "{}", if self.passed() { "all checks passed" } else { "some checks FAILED" });
        out
    }
}

/// What a single check produced: whether it passed and, optionally, a witness (a failure
/// witness, or the recorded witness of an expected failure).
pub struct Outcome {
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome { pass: true, witness: None }
    }

    fn fail(w: Witness) -> Self {
        Outcome { pass: false, witness: Some(w) }
    }

    fn check(label: &str, c: &Check) -> Self {
        match c.witness() {
            None => Outcome::pass(),
            Some(d) => Outcome::fail(Witness::tensor(label, d)),
        }
    }

    fn expect(pass: bool, what: &str) -> Self {
        if pass {
            Outcome::pass()
        } else {
            Outcome::fail(Witness::note(what))
        }
    }
}

type Job = Box<dyn Fn() -> Result<Outcome> + Send + Sync>;

struct Plan {
    jobs: Vec<(String, Job)>,
}

impl Plan {
    fn new() -> Self {
        Plan { jobs: Vec::new() }
    }

    fn add(&mut self, name: impl Into<String>, job: impl Fn() -> Result<Outcome> + Send + Sync + 'static) {
        self.jobs.push((name.into(), Box::new(job)));
    }

    fn run(self, parallel: bool, timing: bool) -> Vec<CheckResult> {
        let exec = |(name, job): &(String, Job)| {
            let start = Instant::now();
            let outcome = job().unwrap_or_else(|e| Outcome::fail(Witness::note(format!("error: {e}"))));
            CheckResult {
                name: name.clone(),
                status: if outcome.pass { Status::Pass } else { Status::Fail },
                witness: outcome.witness,
                millis: timing.then(|| start.elapsed().as_millis() as u64),
            }
        };
        if parallel {
            self.jobs.par_iter().map(exec).collect()
        } else {
            self.jobs.iter().map(exec).collect()
        }
    }
}

/// Validates the configuration, runs the suite and collects its report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let g = cfg.metric.bivector(cfg.dim)?;
    let mut data = None;
    let plan = match cfg.suite {
        Suite::Coleibniz => coleibniz_plan(cfg, &g),
        Suite::QlbaAxioms => qlba_axioms_plan(cfg, &g),
        Suite::CojacobiRank => cojacobi_plan(cfg, &g),
        Suite::TracesJacobi => traces_jacobi_plan(cfg, &g)?,
        Suite::PrVsAlgebraic => pr_vs_algebraic_plan(cfg, &g),
        Suite::Rank2Quantization => rank2_plan(cfg)?,
        Suite::Antipode => antipode_plan(cfg)?,
        Suite::Order2 => {
            let (plan, record) = order2_plan(&g)?;
            data = Some(record);
            plan
        }
        Suite::Twists => twists_plan(cfg, &g)?,
    };
    Ok(SuiteReport {
        suite: cfg.suite.name().to_string(),
        config: ConfigEcho {
            dim: cfg.dim,
            order: cfg.order(),
            degree: cfg.degree(),
            metric: cfg.metric.label().to_string(),
            parallel: cfg.parallel,
        },
        checks: plan.run(cfg.parallel, cfg.timing),
        version: VERSION.to_string(),
        data,
    })
}

fn words_of_length(dim: usize, len: usize) -> Vec<MultiTensor> {
    Word::all_of_length(dim, len).into_iter().map(|w| MultiTensor::word(dim, 1, w)).collect()
}

fn first_failure(
    items: impl IntoIterator<Item = MultiTensor>,
    mut f: impl FnMut(&MultiTensor) -> Result<Check>,
) -> Result<Outcome> {
    for t in items {
        let c = f(&t)?;
        if let Some(d) = c.witness() {
            return Ok(Outcome::fail(Witness::tensor(format!("defect on {t}"), d)));
        }
    }
    Ok(Outcome::pass())
}

fn coleibniz_plan(cfg: &SuiteConfig, g: &Bivector) -> Plan {
    let q = Arc::new(qlba_s(g));
    let mut plan = Plan::new();
    for len in 0..=cfg.degree() {
        let q = Arc::clone(&q);
        let dim = cfg.dim;
        plan.add(format!("co-Leibniz on all words of length {len}"), move || {
            let handle = q.extend();
            let mut d = handle.derivation();
            first_failure(words_of_length(dim, len), |t| co_leibniz_check(&mut d, t))
        });
    }
    plan
}

fn qlba_axioms_plan(cfg: &SuiteConfig, g: &Bivector) -> Plan {
    let q = Arc::new(qlba_s(g));
    let (dim, n) = (cfg.dim, cfg.degree());
    let mut plan = Plan::new();
    {
        let q = Arc::clone(&q);
        plan.add(format!("δ of Lyndon bracketings of degree ≤ {n} lies in Λ²L(V)"), move || {
            let handle = q.extend();
            let mut d = handle.derivation();
            for b in lyndon_basis(dim, n) {
                let db = d.apply(&b.expansion)?;
                if !in_lambda2_of_lie(&db)? {
                    return Ok(Outcome::fail(Witness::tensor(format!("δ of the bracketing of {}", b.word), &db)));
                }
            }
            Ok(Outcome::pass())
        });
    }
    {
        let q = Arc::clone(&q);
        plan.add(format!("cocycle condition on Lyndon pairs of total degree ≤ {n}"), move || {
            let basis = lyndon_basis(dim, n.saturating_sub(1).max(1));
            for a in &basis {
                for b in &basis {
                    if a.word.len() + b.word.len() > n {
                        continue;
                    }
                    let c = cocycle_check(&q, &a.expansion, &b.expansion)?;
                    if let Some(d) = c.witness() {
                        return Ok(Outcome::fail(Witness::tensor(format!("on ({}, {})", a.word, b.word), d)));
                    }
                }
            }
            Ok(Outcome::pass())
        });
    }
    for len in 1..=n {
        let q = Arc::clone(&q);
        plan.add(format!("quasi-co-Jacobi on all words of length {len}"), move || {
            first_failure(words_of_length(dim, len), |t| quasi_cojacobi_check(&q, t))
        });
    }
    {
        let q = Arc::clone(&q);
        plan.add("φ lies in Λ³L(V)", move || Ok(Outcome::expect(in_lambda3_of_lie(&q.phi)?, "φ ≠ Alt(φ)/6 or a leg is not primitive")));
    }
    plan.add("Alt(δ⊗id⊗id)(φ) = 0", move || Ok(Outcome::check("Alt(δ⊗id⊗id)(φ)", &alt_condition_check(&q)?)));
    plan
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..dim).map(|_| int(rng.gen_range(-3..=3))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn random_rank_two(rng: &mut ChaCha8Rng, dim: usize) -> Bivector {
    loop {
        let a = Bivector::outer(&random_vector(rng, dim), &random_vector(rng, dim));
        let b = Bivector::outer(&random_vector(rng, dim), &random_vector(rng, dim));
        let s = a.add(&b);
        if s.rank() == 2 {
            return s;
        }
    }
}

fn random_skew(rng: &mut ChaCha8Rng, dim: usize) -> Bivector {
    loop {
        let mut m = vec![vec![Rational::zero(); dim]; dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let x = int(rng.gen_range(-2..=2));
                m[j][i] = -x.clone();
                m[i][j] = x;
            }
        }
        let s = Bivector::new(m).expect("square");
        if s.rank() > 0 {
            return s;
        }
    }
}

fn cojacobi_plan(cfg: &SuiteConfig, g: &Bivector) -> Plan {
    let dim = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rank_one: Vec<Bivector> =
        (0..20).map(|_| Bivector::outer(&random_vector(&mut rng, dim), &random_vector(&mut rng, dim))).collect();
    let rank_two: Vec<Bivector> = (0..10).map(|_| random_rank_two(&mut rng, dim)).collect();
    let mut plan = Plan::new();
    let metric = g.clone();
    plan.add(format!("configured metric (rank {}): co-Jacobi holds iff rank ≤ 1", g.rank()), move || {
        let out = cojacobi_rank_test(&metric)?;
        let expected = metric.rank() <= 1;
        let witness = out.witness.as_ref().map(|(i, t)| Witness::tensor(format!("cp(D⊗id)D(e{i})"), t));
        Ok(Outcome { pass: out.holds == expected, witness })
    });
    plan.add("co-Jacobi holds for 20 fuzzed rank ≤ 1 bivectors", move || {
        for s in &rank_one {
            if let Some((i, t)) = cojacobi_rank_test(s)?.witness {
                return Ok(Outcome::fail(Witness::tensor(format!("s = {}, cp(D⊗id)D(e{i})", s.to_json()), &t)));
            }
        }
        Ok(Outcome::pass())
    });
    plan.add("co-Jacobi fails for diag(-1,1) with nonzero witness", move || {
        let mut m = vec![vec![Rational::zero(); dim]; dim];
        m[0][0] = int(-1);
        m[1][1] = int(1);
        let s = Bivector::new(m)?;
        let out = cojacobi_rank_test(&s)?;
        Ok(match out.witness {
            Some((i, t)) if !out.holds && !t.is_zero() => Outcome {
                pass: true,
                witness: Some(Witness::tensor(format!("expected failure: cp(D⊗id)D(e{i})"), &t)),
            },
            _ => Outcome::fail(Witness::note("co-Jacobi unexpectedly holds")),
        })
    });
    plan.add("co-Jacobi fails for 10 fuzzed rank-2 bivectors", move || {
        let mut first = None;
        for s in &rank_two {
            match cojacobi_rank_test(s)?.witness {
                Some((i, t)) if !t.is_zero() => {
                    first.get_or_insert_with(|| Witness::tensor(format!("expected failure: s = {}, e{i}", s.to_json()), &t));
                }
                _ => return Ok(Outcome::fail(Witness::note(format!("co-Jacobi holds for s = {}", s.to_json())))),
            }
        }
        Ok(Outcome { pass: true, witness: first })
    });
    plan
}

fn traces_jacobi_plan(cfg: &SuiteConfig, g: &Bivector) -> Result<Plan> {
    let q = Arc::new(pr_qlba(g)?);
    let (n, parallel) = (cfg.degree(), cfg.parallel);
    let mut plan = Plan::new();
    {
        let q = Arc::clone(&q);
        plan.add(format!("Jacobi identity of {{,}}_D on cyclic classes of total degree ≤ {n}"), move || {
            let r = jacobi_on_traces(&q, n, parallel)?;
            Ok(match r.failure {
                None => Outcome::pass(),
                Some((a, b, c)) => Outcome::fail(Witness::note(format!("Z({a}), Z({b}), Z({c})"))),
            })
        });
    }
    plan.add("a non-cyclic triple violates the Jacobi identity", move || {
        Ok(match find_noncyclic_jacobi_witness(&q, 6)? {
            Some(w) => Outcome {
                pass: true,
                witness: Some(Witness {
                    description: format!(
                        "expected failure: a = {}, b = {}, c = {}",
                        Word(w.a.clone()),
                        Word(w.b.clone()),
                        Word(w.c.clone())
                    ),
                    terms: w
                        .jacobiator
                        .iter()
                        .map(|r| WitnessTerm { coeff: r.coeff.clone(), words: vec![Word(r.word.clone()).to_string()] })
                        .collect(),
                    truncated: false,
                }),
            },
            None => Outcome::fail(Witness::note("no witness up to total degree 6")),
        })
    });
    Ok(plan)
}

fn pr_vs_algebraic_plan(cfg: &SuiteConfig, g: &Bivector) -> Plan {
    let g = g.clone();
    let n = cfg.degree();
    let search = (n + 3).min(10);
    let cmp = Arc::new(compare_pr_with_algebraic(&g, n, search));
    let mut plan = Plan::new();
    let name = match cmp.as_ref() {
        Ok(c) => match (&c.constant, &c.determined_at) {
            (Some(k), Some((a, b))) => {
                format!("constant c = {} read off the first nonvanishing pair Z({a}), Z({b})", fmt_rational(k))
            }
            _ => format!("constant c determined on some pair with k+l ≤ {search}"),
        },
        Err(_) => "constant c determined".to_string(),
    };
    {
        let cmp = Arc::clone(&cmp);
        plan.add(name, move || {
            let c = Result::as_ref(&*cmp).map_err(|e| e.clone())?;
            Ok(Outcome::expect(c.constant.is_some(), "both brackets vanish on every searched pair"))
        });
    }
    plan.add(format!("direct bracket = c·{{,}}_D on all class pairs with k+l ≤ {n}"), move || {
        let c = Result::as_ref(&*cmp).map_err(|e| e.clone())?;
        Ok(match &c.mismatch {
            None => Outcome::pass(),
            Some((a, b)) => Outcome::fail(Witness::note(format!("Z({a}), Z({b})"))),
        })
    });
    plan
}

fn rank2_plan(cfg: &SuiteConfig) -> Result<Plan> {
    let (dim, order, n) = (cfg.dim, cfg.order(), cfg.degree());
    let s = Bivector::elementary(dim, 0, 1);
    let q = Arc::new(rank2_quantize(&s, order)?);
    let words = Arc::new(test_words(dim, order, n));
    let mut plan = Plan::new();
    {
        let (q, words) = (Arc::clone(&q), Arc::clone(&words));
        plan.add(format!("A'_h (s = e0⊗e1) is coassociative with Φ = 1 on words of length ≤ {n}"), move || {
            first_failure(words.iter().cloned(), |t| Ok(Check { defect: coassoc_defect(&q.aprime, t)? }))
        });
    }
    {
        let (q, words) = (Arc::clone(&q), Arc::clone(&words));
        plan.add(format!("A_h: (id⊗Δ)Δ(x)Φ = Φ(Δ⊗id)Δ(x) on words of length ≤ {n}"), move || {
            first_failure(words.iter().cloned(), |t| Ok(Check { defect: coassoc_defect(&q.a, t)? }))
        });
    }
    {
        let q = Arc::clone(&q);
        plan.add("A_h: pentagon identity", move || Ok(Outcome::check("pentagon defect", &Check { defect: pentagon_defect(&q.a)? })));
    }
    {
        let q = Arc::clone(&q);
        plan.add("counit conditions for A_h and A'_h", move || {
            let a = counit_check(&q.a)?;
            if !a.holds() {
                return Ok(Outcome::check("A_h counit defect", &a));
            }
            Ok(Outcome::check("A'_h counit defect", &counit_check(&q.aprime)?))
        });
    }
    {
        let q = Arc::clone(&q);
        plan.add("A_h: Φ ≡ 1⊗1⊗1 mod h²", move || Ok(Outcome::expect(q.a.check_invariants().is_ok(), "Φ or Δ violates the classical shape")));
    }
    {
        let q = Arc::clone(&q);
        let s = s.clone();
        plan.add("A_h: classical limit equals (δ_g, φ_g) for g = (s + s²¹)/2", move || {
            let expected = pr_qlba(&s.symmetric_part())?;
            let got = classical_limit(&q.a)?;
            Ok(qlba_outcome(&got, &expected))
        });
    }
    plan.add("A_h is the twist of A'_h by J = e^{-hs/2}", move || Ok(Outcome::expect(twist_qh(&q.aprime, &q.j)? == q.a, "twisted structure differs")));
    Ok(plan)
}

fn qlba_outcome(got: &QlbaData, expected: &QlbaData) -> Outcome {
    for i in 0..got.dim {
        let d = got.delta.image(i).try_sub(expected.delta.image(i)).expect("same shape");
        if !d.is_zero() {
            return Outcome::fail(Witness::tensor(format!("δ(e{i}) difference"), &d));
        }
    }
    let d = got.phi.try_sub(&expected.phi).expect("same shape");
    if !d.is_zero() {
        return Outcome::fail(Witness::tensor("φ difference", &d));
    }
    Outcome::pass()
}

fn antipode_plan(cfg: &SuiteConfig) -> Result<Plan> {
    let (dim, order, n) = (cfg.dim, cfg.order(), cfg.degree());
    let s = Bivector::elementary(dim, 0, 1);
    let q = Arc::new(rank2_quantize(&s, order)?);
    let anti = Arc::new(antipode_closed_form(&s, order)?);
    let mut plan = Plan::new();
    {
        let (q, anti) = (Arc::clone(&q), Arc::clone(&anti));
        plan.add(format!("S⋆id = unit∘counit on words of length ≤ {n} (A'_h, s = e0⊗e1)"), move || {
            let id = EndoMap::identity(dim, order);
            first_failure(test_words(dim, order, n), |t| {
                Ok(Check { defect: convolution(&anti, &id, &q.aprime, t)?.try_sub(&unit_counit(t)?)? })
            })
        });
    }
    plan.add("S(v) = -v", move || {
        let v = MultiTensor::generator(dim, order, 0);
        Ok(Outcome::check("S(v) + v", &Check { defect: anti.apply(&v)?.try_add(&v)? }))
    });
    Ok(plan)
}

fn order2_plan(g: &Bivector) -> Result<(Plan, serde_json::Value)> {
    let sys = Arc::new(order2_solve(g)?);
    let record = serde_json::to_value(sys.to_record()).expect("serializable");
    let mut plan = Plan::new();
    let unknowns = sys.matrix.cols();
    {
        let sys = Arc::clone(&sys);
        plan.add(format!("rank {} of {} equations in {unknowns} unknowns (fraction-free = rref)", sys.rank, sys.matrix.rows()), move || {
            Ok(Outcome::expect(sys.rank == sys.rank_rref, "elimination methods disagree"))
        });
    }
    {
        let sys = Arc::clone(&sys);
        plan.add(format!("solution space has dimension {}", sys.solutions.dimension()), move || {
            Ok(Outcome::expect(sys.solutions.dimension() + sys.rank == unknowns, "rank-nullity fails"))
        });
    }
    {
        let sys = Arc::clone(&sys);
        plan.add("closed-form (α, β) family equals the solution set", move || {
            Ok(Outcome::expect(sys.closed_form_matches(), "affine spaces differ"))
        });
    }
    for (a, b, label) in [(int(0), int(0), "(0, 0)"), (rat(1, 2), rat(1, 2), "(1/2, 1/2)"), (int(1), int(-2), "(1, -2)")] {
        let g = g.clone();
        plan.add(format!("coassociativity and pentagon mod h³ at (α, β) = {label}"), move || {
            let qh: QhData = order2_structure(&g, &closed_form_coefficients(&a, &b))?;
            for i in 0..g.dim() {
                let x = MultiTensor::generator(g.dim(), qh.order, i);
                let d = coassoc_defect(&qh, &x)?;
                if !d.is_zero() {
                    return Ok(Outcome::fail(Witness::tensor(format!("coassociativity defect on e{i}"), &d)));
                }
            }
            Ok(Outcome::check("pentagon defect", &Check { defect: pentagon_defect(&qh)? }))
        });
    }
    Ok((plan, record))
}

fn small_unital(rng: &mut ChaCha8Rng, dim: usize, order: usize) -> MultiTensor {
    let mut f = MultiTensor::unit(dim, 2, order);
    for k in 1..order.min(3) {
        for _ in 0..2 {
            let a: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..dim)).collect();
            let b: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..dim)).collect();
            let c = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            f = f.try_add(&MultiTensor::rational_term(dim, order, &[&a, &b], c).shift_h(k)).expect("same shape");
        }
    }
    f
}

fn twists_plan(cfg: &SuiteConfig, g: &Bivector) -> Result<Plan> {
    let (dim, order) = (cfg.dim, cfg.order());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x7157);
    let skew_pairs: Vec<(Bivector, Bivector)> =
        (0..3).map(|_| (random_skew(&mut rng, dim), random_skew(&mut rng, dim))).collect();
    let coboundaries: Vec<Bivector> = (0..3).map(|_| random_skew(&mut rng, dim)).collect();
    let base_s = random_skew(&mut rng, dim);
    let unital_pairs: Vec<(MultiTensor, MultiTensor)> =
        (0..2).map(|_| (small_unital(&mut rng, dim, order), small_unital(&mut rng, dim, order))).collect();
    let q = Arc::new(qlba_s(g));
    let mut plan = Plan::new();
    plan.add("QLBA twists compose additively (3 fuzzed skew pairs)", move || {
        for (f1, f2) in &skew_pairs {
            let stepwise = twist_qlba(&twist_qlba(&q, f1)?, f2)?;
            let at_once = twist_qlba(&q, &f1.add(f2))?;
            if stepwise != at_once {
                return Ok(qlba_outcome(&stepwise, &at_once));
            }
        }
        Ok(Outcome::pass())
    });
    plan.add("QH twist by F₁ then F₂ equals twist by F₂F₁ (2 fuzzed pairs)", move || {
        let f0 = base_s.to_tensor(order).scale(&rat(1, 2)).shift_h(1).exp()?;
        let base = twist_qh(&QhData::undeformed(dim, order), &f0)?;
        for (f1, f2) in &unital_pairs {
            let stepwise = twist_qh(&twist_qh(&base, f1)?, f2)?;
            let at_once = twist_qh(&base, &f2.try_mul(f1)?)?;
            if stepwise != at_once {
                return Ok(Outcome::fail(Witness::tensor("Φ difference", &stepwise.phi.try_sub(&at_once.phi)?)));
            }
        }
        Ok(Outcome::pass())
    });
    plan.add("coboundary structure twisted by s is trivial (3 fuzzed skew s)", move || {
        for s in &coboundaries {
            let t = twist_qlba(&qlba_s(s), s)?;
            if t != QlbaData::trivial(dim) {
                return Ok(qlba_outcome(&t, &QlbaData::trivial(dim)));
            }
        }
        Ok(Outcome::pass())
    });
    plan.add("f ≡ (F²¹ − F)/h mod h for F = e^{-hs/2}, s = e0⊗e1, and the limits match", move || {
        let s = Bivector::elementary(dim, 0, 1);
        let r2 = rank2_quantize(&s, order)?;
        let f_tensor = r2.j.swap()?.try_sub(&r2.j)?.h_coefficient(1);
        let f = s.skew_part();
        if f_tensor != f.to_tensor(1) {
            return Ok(Outcome::fail(Witness::tensor("(F²¹ − F)/h − f", &f_tensor.try_sub(&f.to_tensor(1))?)));
        }
        let via_qh = classical_limit(&twist_qh(&r2.aprime, &r2.j)?)?;
        let via_qlba = twist_qlba(&classical_limit(&r2.aprime)?, &f)?;
        Ok(qlba_outcome(&via_qh, &via_qlba))
    });
    Ok(plan)
}

/// One-shot computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComputeExpr {
    /// The direct bracket of two Z-symbols.
    ZBracket(Vec<usize>, Vec<usize>),
    /// D(w) for the cocycle of the metric.
    Delta(Vec<usize>),
    /// Δ(w) of the order-h² quantization (Δ₀ at order 1).
    Coproduct(Vec<usize>),
}

/// Index list "0,1,2" or, for single-digit indices, "012". `offset` is the position of
/// `s` in the full input, used in error messages.
pub fn parse_index_list(s: &str, offset: usize) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::Parse { pos: offset, msg: "empty index list".into() });
    }
    let parse_part = |part: &str, pos: usize| -> Result<usize> {
        part.parse::<usize>().map_err(|_| Error::Parse { pos, msg: format!("expected an index, found {part:?}") })
    };
    if s.contains(',') {
        let mut out = Vec::new();
        let mut pos = offset;
        for part in s.split(',') {
            out.push(parse_part(part, pos)?);
            pos += part.len() + 1;
        }
        Ok(out)
    } else {
        s.char_indices()
            .map(|(i, c)| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Parse { pos: offset + i, msg: format!("expected a digit, found {c:?}") })
            })
            .collect()
    }
}

/// Parses `z-bracket A B`, `delta W` or `coproduct W`.
pub fn parse_compute(args: &[String]) -> Result<ComputeExpr> {
    let mut offsets = Vec::with_capacity(args.len());
    let mut pos = 0;
    for a in args {
        offsets.push(pos);
        pos += a.chars().count() + 1;
    }
    let arg = |i: usize| -> Result<(&str, usize)> {
        args.get(i).map(|a| (a.as_str(), offsets[i])).ok_or(Error::Parse { pos, msg: "missing argument".into() })
    };
    let (cmd, _) = arg(0)?;
    let expect_len = |n: usize| -> Result<()> {
        if args.len() > n {
            return Err(Error::Parse { pos: offsets[n], msg: "unexpected extra argument".into() });
        }
        Ok(())
    };
    match cmd {
        "z-bracket" => {
            let (a, pa) = arg(1)?;
            let (b, pb) = arg(2)?;
            expect_len(3)?;
            Ok(ComputeExpr::ZBracket(parse_index_list(a, pa)?, parse_index_list(b, pb)?))
        }
        "delta" | "coproduct" => {
            let (w, pw) = arg(1)?;
            expect_len(2)?;
            let ix = parse_index_list(w, pw)?;
            Ok(if cmd == "delta" { ComputeExpr::Delta(ix) } else { ComputeExpr::Coproduct(ix) })
        }
        other => Err(Error::Parse {
            pos: 0,
            msg: format!("unknown command {other:?}; expected z-bracket, delta or coproduct"),
        }),
    }
}

fn check_indices(ix: &[usize], dim: usize) -> Result<()> {
    match ix.iter().find(|&&i| i >= dim) {
        Some(&i) => Err(Error::LetterOutOfRange { letter: i, dim }),
        None => Ok(()),
    }
}

/// Evaluates a one-shot expression and returns its canonical printed form.
pub fn compute(expr: &ComputeExpr, dim: usize, order: usize, metric: &Metric) -> Result<String> {
    let g = metric.bivector(dim)?;
    match expr {
        ComputeExpr::ZBracket(a, b) => {
            if !g.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
            let r = pr_bracket(&z_symbol(dim, a)?, &z_symbol(dim, b)?, &g)?;
            Ok(r.to_string())
        }
        ComputeExpr::Delta(w) => {
            check_indices(w, dim)?;
            let q = qlba_s(&g);
            let handle = q.extend();
            let t = handle.derivation().apply(&MultiTensor::word(dim, 1, Word::from_indices(w)))?;
            Ok(t.to_string())
        }
        ComputeExpr::Coproduct(w) => {
            check_indices(w, dim)?;
            if order > crate::quant::order2::ORDER {
                return Err(Error::Usage(format!(
                    "the general coproduct is only known mod h^{}",
                    crate::quant::order2::ORDER
                )));
            }
            let qh = order2_structure(&g, &closed_form_coefficients(&int(0), &int(0)))?;
            let delta = qh.delta.with_order(order);
            let t = delta.morphism().apply(&MultiTensor::word(dim, order, Word::from_indices(w)))?;
            Ok(t.to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::delta0;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(Error::Usage(_))));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SuiteConfig::new(Suite::Coleibniz);
        assert!(cfg.validate().is_ok());
        cfg.dim = 0;
        assert!(matches!(cfg.validate(), Err(Error::Usage(_))));
        cfg.dim = 3;
        cfg.degree = Some(40);
        assert!(matches!(cfg.validate(), Err(Error::ResourceCap(_))));
        let mut cfg = SuiteConfig::new(Suite::Order2);
        cfg.dim = 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn index_lists() {
        assert_eq!(parse_index_list("012", 0).unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_index_list("10,2", 0).unwrap(), vec![10, 2]);
        assert_eq!(parse_index_list("0x1", 4), Err(Error::Parse { pos: 5, msg: "expected a digit, found 'x'".into() }));
        assert!(matches!(parse_index_list("0,,1", 0), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn compute_commands() {
        let args = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
        let m = Metric::Minkowski;
        assert_eq!(parse_compute(&args("z-bracket 0,1 2")).unwrap(), ComputeExpr::ZBracket(vec![0, 1], vec![2]));
        assert!(matches!(parse_compute(&args("delta 0 1")), Err(Error::Parse { pos: 8, .. })));
        assert!(matches!(parse_compute(&args("frob 0")), Err(Error::Parse { pos: 0, .. })));
        let out = compute(&ComputeExpr::Coproduct(vec![0, 1]), 3, 1, &m).unwrap();
        assert_eq!(out, delta0(&MultiTensor::word(3, 1, Word::from_indices(&[0, 1]))).unwrap().to_string());
        let dg = compute(&ComputeExpr::Delta(vec![0]), 2, 1, &m).unwrap();
        let q = pr_qlba(&Bivector::minkowski(2)).unwrap();
        assert_eq!(dg, q.delta.image(0).to_string());
        assert_eq!(compute(&ComputeExpr::ZBracket(vec![0, 1], vec![2]), 3, 1, &m).unwrap(), "0");
    }

    #[test]
    fn witnesses_are_truncated() {
        let t = (0..60).fold(MultiTensor::zero(3, 1, 1), |acc, k| {
            let w: Vec<usize> = (0..4).map(|j| (k / 3usize.pow(j)) % 3).collect();
            acc.try_add(&MultiTensor::rational_term(3, 1, &[&w], int(1))).unwrap()
        });
        let w = Witness::tensor("t", &t);
        assert_eq!(w.terms.len(), WITNESS_TERMS);
        assert!(w.truncated);
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::QlbaAxioms, Suite::Antipode] {
            let mut cfg = SuiteConfig::new(suite);
            cfg.dim = 2;
            cfg.degree = Some(2);
            cfg.order = Some(3);
            let r = run_suite(&cfg).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }
}
