//! Named verification suites and their reports.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::braid::{all_operators, apply, generators, psi_conjugate, sigma_conjugate, tdoubleprime, tprime, weight_mismatches, GeneratorMap, OperatorKind};
use crate::cartan::CartanDatum;
use crate::coeff::Exact;
use crate::error::{Error, Result};
use crate::iqg::{
    b, bb1, bb2, bkl_lhs, bkl_rhs_pochhammer, bkl_rhs_rewritten, embed, hosii1, hosii2, k, messy_product, psi, qi, recursion_rr1, recursion_rr2, relation_set,
    sigma, ygen, ygen_recursion, ytilde, ytilde_prime, IExpr, ILetter, ProductConvention, YgenVariant,
};
use crate::scalars::{pochhammer, qfact, qint, Scalar};
use crate::udouble::{is_zero_modular, EngineOptions, OneSignObserver, UEngine, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Presentation,
    Involutions,
    Bkl,
    Recursion,
    SerreLusztig,
    Rank1,
    HigherSerre,
    BraidConjecture,
    Scalars,
    All,
}

impl Suite {
    /// Every concrete suite, in execution order.
    pub const CONCRETE: [Suite; 9] = [
        Suite::Presentation,
        Suite::Involutions,
        Suite::Bkl,
        Suite::Recursion,
        Suite::SerreLusztig,
        Suite::Rank1,
        Suite::HigherSerre,
        Suite::BraidConjecture,
        Suite::Scalars,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Presentation => "presentation",
            Suite::Involutions => "involutions",
            Suite::Bkl => "bkl",
            Suite::Recursion => "recursion",
            Suite::SerreLusztig => "serre_lusztig",
            Suite::Rank1 => "rank1",
            Suite::HigherSerre => "higher_serre",
            Suite::BraidConjecture => "braid_conjecture",
            Suite::Scalars => "scalars",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::CONCRETE
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    /// Probabilistic evaluation over `F_p`, then exact confirmation.
    ModularThenExact,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::ModularThenExact => "modular+exact",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    NonzeroAsExpected,
    Finding,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NonzeroAsExpected => "nonzero-as-expected",
            Status::Finding => "finding",
        }
    }
}

/// What a check is expected to show, fixed before it runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckClass {
    /// Must evaluate to zero.
    Theorem,
    /// Must evaluate to nonzero.
    Control,
    /// Outcome recorded without expectation.
    Finding,
}

impl CheckClass {
    pub fn name(self) -> &'static str {
        match self {
            CheckClass::Theorem => "theorem",
            CheckClass::Control => "control",
            CheckClass::Finding => "finding",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Zero,
    Nonzero,
    Error(String),
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Zero => "zero",
            Outcome::Nonzero => "nonzero",
            Outcome::Error(_) => "error",
        }
    }
}

#[derive(Clone)]
pub struct SuiteSpec {
    pub suite: Suite,
    pub datum: CartanDatum,
    /// Upper bound on `m`; each suite has its own default.
    pub max_m: Option<i64>,
    /// Upper bound on `n` in the higher-order Serre family (default 2).
    pub max_n: Option<i64>,
    /// Upper bound on `N`, `M` in the rank-one suite (default 3).
    pub max_nm: Option<i64>,
    pub e_set: Vec<i64>,
    pub method: Method,
    pub seed: u64,
    pub modular_trials: usize,
    pub budget: usize,
    pub cache_dir: Option<PathBuf>,
    /// Family name from [`mutation_set`] whose first relation is perturbed.
    pub mutation: Option<String>,
    pub observer: Option<OneSignObserver<Scalar>>,
}

impl SuiteSpec {
    pub fn new(suite: Suite, datum: CartanDatum) -> Self {
        SuiteSpec {
            suite,
            datum,
            max_m: None,
            max_n: None,
            max_nm: None,
            e_set: vec![1, -1],
            method: Method::Exact,
            seed: 0,
            modular_trials: 2,
            budget: DEFAULT_BUDGET,
            cache_dir: None,
            mutation: None,
            observer: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub suite: String,
    pub label: String,
    pub params: Vec<(String, String)>,
    pub class: CheckClass,
    pub status: Status,
    pub outcome: Outcome,
    pub witness: Option<String>,
    pub method: Method,
    /// Result of the modular pre-pass, when run.
    pub modular: Option<Outcome>,
    pub elapsed: Duration,
}

impl Record {
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// One tab-separated `key=value` line with a fixed key order.
    pub fn to_line(&self, timing: bool) -> String {
        let mut s = String::new();
        let _ = write!(s, "suite={}\tcase={}\tclass={}\tstatus={}\toutcome={}\tmethod={}", self.suite, self.label, self.class.name(), self.status.name(), self.outcome.name(), self.method.name());
        if let Some(m) = &self.modular {
            let _ = write!(s, "\tmodular={}", m.name());
        }
        for (k, v) in &self.params {
            let _ = write!(s, "\t{k}={v}");
        }
        let w = match (&self.outcome, &self.witness) {
            (Outcome::Error(e), _) => clean(e),
            (_, Some(w)) => clean(w),
            _ => "-".to_string(),
        };
        let _ = write!(s, "\twitness={w}");
        if timing {
            let _ = write!(s, "\telapsed_ms={}", self.elapsed.as_millis());
        }
        s
    }
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub records: Vec<Record>,
}

impl VerificationReport {
    /// Records output, one line per check, sorted by suite and case label.
    pub fn to_records(&self, timing: bool) -> String {
        self.records.iter().map(|r| r.to_line(timing) + "\n").collect()
    }

    pub fn theorem_failures(&self) -> Vec<&Record> {
        self.records.iter().filter(|r| r.status == Status::Fail).collect()
    }

    pub fn all_required_pass(&self) -> bool {
        self.theorem_failures().is_empty()
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn find(&self, label: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.label == label)
    }

    /// Human-readable table of counts per suite, followed by failures and findings.
    pub fn summary(&self) -> String {
        let mut suites: Vec<&str> = self.records.iter().map(|r| r.suite.as_str()).collect();
        suites.dedup();
        let mut s = String::new();
        let _ = writeln!(s, "{:<18} {:>6} {:>6} {:>8} {:>8}", "suite", "pass", "fail", "control", "finding");
        for name in suites {
            let of = |st: Status| self.records.iter().filter(|r| r.suite == name && r.status == st).count();
            let _ = writeln!(s, "{:<18} {:>6} {:>6} {:>8} {:>8}", name, of(Status::Pass), of(Status::Fail), of(Status::NonzeroAsExpected), of(Status::Finding));
        }
        let fails = self.theorem_failures();
        if !fails.is_empty() {
            let _ = writeln!(s, "\nfailures:");
            for r in fails {
                let _ = writeln!(s, "  {}/{}: {}", r.suite, r.label, r.outcome.name());
            }
        }
        let findings: Vec<&Record> = self.records.iter().filter(|r| r.status == Status::Finding).collect();
        if !findings.is_empty() {
            let _ = writeln!(s, "\nfindings:");
            for r in findings {
                let _ = writeln!(s, "  {}/{}: {}", r.suite, r.label, r.outcome.name());
            }
        }
        let _ = writeln!(s, "\n{} checks, {} failed", self.records.len(), self.count(Status::Fail));
        s
    }
}

#[derive(Clone)]
enum Body {
    /// Zero under `embed`.
    Embed(IExpr),
    /// Zero as an expression.
    Expr(IExpr),
    /// Zero scalar.
    Scalar(Scalar),
    /// Every term of `embed(T(g))` has the weight `𝐬_i(wt g)` modulo `L`.
    Weight(Arc<GeneratorMap>, ILetter),
}

#[derive(Clone)]
struct Check {
    suite: Suite,
    label: String,
    params: Vec<(String, String)>,
    class: CheckClass,
    body: Body,
}

fn check(suite: Suite, name: &str, params: &[(&str, String)], class: CheckClass, body: Body) -> Check {
    let inner: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    Check {
        suite,
        label: format!("{name}({})", inner.join(",")),
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        class,
        body,
    }
}

fn pe(e: i64) -> String {
    if e > 0 { "+1".to_string() } else { "-1".to_string() }
}

fn idx(i: usize) -> String {
    (i + 1).to_string()
}

/// Orbit representatives `i < τi`.
fn pair_reps(d: &CartanDatum) -> Vec<usize> {
    (0..d.rank()).filter(|&i| d.tau(i) > i).collect()
}

fn family(label: &str) -> &str {
    label.split('(').next().unwrap_or(label)
}

/// Relation families that can be mutated on this datum, each with the label of
/// the check its mutant perturbs.
pub fn mutation_set(d: &CartanDatum) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for c in presentation_checks(d, None) {
        let f = family(&c.label).to_string();
        if !out.iter().any(|(g, _)| *g == f) {
            out.push((f, c.label.clone()));
        }
    }
    out
}

fn perturb(x: &IExpr) -> IExpr {
    let (w, c) = x.terms().last().map(|(w, c)| (w.clone(), c.clone())).expect("nonzero relation");
    let mut y = x.clone();
    y.add_term(w, &c.mul_q_pow(1) - &c);
    y
}

fn presentation_checks(d: &CartanDatum, mutation: Option<&str>) -> Vec<Check> {
    let s = Suite::Presentation;
    let mut out = Vec::new();
    for (label, r) in relation_set(d) {
        let params = vec![("relation".to_string(), label.clone())];
        out.push(Check { suite: s, label, params, class: CheckClass::Theorem, body: Body::Embed(r) });
    }
    for i in 0..d.rank() {
        let t = d.tau(i);
        if t < i {
            continue;
        }
        let kk = k(i).mul(&k(t));
        for j in 0..d.rank() {
            let x = kk.mul(&b(j)).sub(&b(j).mul(&kk));
            out.push(check(s, "centrality", &[("i", idx(i)), ("j", idx(j))], CheckClass::Theorem, Body::Embed(x)));
        }
    }
    if let Some(m) = mutation {
        if let Some(c) = out.iter_mut().find(|c| family(&c.label) == m) {
            if let Body::Embed(x) = &c.body {
                c.body = Body::Embed(perturb(x));
            }
            c.params.push(("mutation".to_string(), m.to_string()));
        }
    }
    out
}

fn involution_checks(d: &CartanDatum) -> Vec<Check> {
    let s = Suite::Involutions;
    let mut out = Vec::new();
    for (label, r) in relation_set(d) {
        out.push(check(s, "psi", &[("relation", label.clone())], CheckClass::Theorem, Body::Embed(psi(d, &r))));
        out.push(check(s, "sigma", &[("relation", label)], CheckClass::Theorem, Body::Embed(sigma(d, &r))));
    }
    out
}

fn bkl_checks(d: &CartanDatum) -> Vec<Check> {
    pair_reps(d)
        .into_iter()
        .map(|i| {
            let x = bkl_lhs(d, i).sub(&bkl_rhs_rewritten(d, i));
            check(Suite::Bkl, "bkl", &[("i", idx(i)), ("c", d.c(i, d.tau(i)).to_string())], CheckClass::Theorem, Body::Embed(x))
        })
        .collect()
}

fn recursion_checks(spec: &SuiteSpec) -> Result<Vec<Check>> {
    let d = &spec.datum;
    let s = Suite::Recursion;
    let mut out = Vec::new();
    for i in pair_reps(d) {
        let c = d.c(i, d.tau(i));
        for m in 1..=spec.max_m.unwrap_or(5) {
            for &e in &spec.e_set {
                // both conventions agree once m ≥ 1 - c
                let convs: &[(ProductConvention, CheckClass)] = if m >= 1 - c {
                    &[(ProductConvention::Literal, CheckClass::Theorem)]
                } else {
                    &[(ProductConvention::Extended, CheckClass::Theorem), (ProductConvention::Literal, CheckClass::Finding)]
                };
                for &(conv, class) in convs {
                    let p = [("i", idx(i)), ("m", m.to_string()), ("e", pe(e)), ("convention", conv.name().to_string())];
                    out.push(check(s, "RR1", &p, class, Body::Embed(recursion_rr1(d, i, m, e, conv)?)));
                    out.push(check(s, "RR2", &p, class, Body::Embed(recursion_rr2(d, i, m, e, conv)?)));
                }
            }
        }
    }
    Ok(out)
}

fn serre_lusztig_checks(spec: &SuiteSpec) -> Result<Vec<Check>> {
    let d = &spec.datum;
    let s = Suite::SerreLusztig;
    let mut out = Vec::new();
    for i in pair_reps(d) {
        let c = d.c(i, d.tau(i));
        let top = spec.max_m.unwrap_or(1 - c + 3);
        for m in 1..=top {
            let class = if m >= 1 - c { CheckClass::Theorem } else { CheckClass::Control };
            for &e in &spec.e_set {
                let p = [("i", idx(i)), ("m", m.to_string()), ("e", pe(e))];
                out.push(check(s, "ytilde", &p, class, Body::Embed(ytilde(d, i, m, e)?)));
                out.push(check(s, "ytilde_prime", &p, class, Body::Embed(ytilde_prime(d, i, m, e)?)));
            }
            if m > 1 - c {
                let p = [("i", idx(i)), ("m", m.to_string())];
                out.push(check(s, "HOSII1", &p, CheckClass::Theorem, Body::Embed(hosii1(d, i, m)?)));
                out.push(check(s, "HOSII2", &p, CheckClass::Theorem, Body::Embed(hosii2(d, i, m)?)));
            }
        }
    }
    Ok(out)
}

fn rank1_checks(spec: &SuiteSpec) -> Result<Vec<Check>> {
    let d = &spec.datum;
    let s = Suite::Rank1;
    let mut out = Vec::new();
    let top = spec.max_nm.unwrap_or(3);
    for i in pair_reps(d) {
        if d.c(i, d.tau(i)) != 0 {
            continue;
        }
        for nn in 0..=top {
            for mm in 0..=top {
                let p = [("i", idx(i)), ("N", nn.to_string()), ("M", mm.to_string())];
                out.push(check(s, "BB1", &p, CheckClass::Theorem, Body::Embed(bb1(d, i, nn, mm)?)));
                out.push(check(s, "BB2", &p, CheckClass::Theorem, Body::Embed(bb2(d, i, nn, mm)?)));
            }
        }
    }
    Ok(out)
}

fn higher_serre_checks(spec: &SuiteSpec) -> Result<Vec<Check>> {
    let d = &spec.datum;
    let s = Suite::HigherSerre;
    let mut out = Vec::new();
    for i in 0..d.rank() {
        let t = d.tau(i);
        if t == i {
            continue;
        }
        for j in (0..d.rank()).filter(|&j| j != i && j != t) {
            let c = d.c(i, j);
            for n in 1..=spec.max_n.unwrap_or(2) {
                let variants: &[YgenVariant] = if n == 1 { &[YgenVariant::Literal] } else { &[YgenVariant::Literal, YgenVariant::NCorrected] };
                let top = if n == 1 { -c + 3 } else { spec.max_m.unwrap_or(4) };
                for &v in variants {
                    for m in 0..=top {
                        let class = match n {
                            1 if m > -c => CheckClass::Theorem,
                            1 => CheckClass::Control,
                            _ => CheckClass::Finding,
                        };
                        for &e in &spec.e_set {
                            let mut p = vec![("i", idx(i)), ("j", idx(j)), ("n", n.to_string()), ("m", m.to_string()), ("e", pe(e))];
                            if n > 1 {
                                p.push(("variant", v.name().to_string()));
                            }
                            let y = ygen(d, i, j, n, m, e, v)?;
                            out.push(check(s, "ygen", &p, class, Body::Embed(y.clone())));
                            out.push(check(s, "ygen_prime", &p, class, Body::Embed(sigma(d, &y))));
                            if m < top {
                                let rc = if n == 1 { CheckClass::Theorem } else { CheckClass::Finding };
                                let r = ygen_recursion(d, i, j, n, m, e, v)?;
                                out.push(check(s, "ygen_recursion", &p, rc, Body::Embed(r)));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn braid_checks(d: &CartanDatum) -> Result<Vec<Check>> {
    let s = Suite::BraidConjecture;
    let f = CheckClass::Finding;
    let mut out = Vec::new();
    for i in pair_reps(d) {
        if d.c(i, d.tau(i)) != 0 {
            continue;
        }
        let rels = relation_set(d);
        let gens = generators(d);
        for map in all_operators(d, i)? {
            let op = map.label();
            let map = Arc::new(map);
            for (label, r) in &rels {
                out.push(check(s, "hom", &[("op", op.clone()), ("relation", label.clone())], f, Body::Embed(apply(&map, r)?)));
            }
            for (g, x) in &gens {
                let p = [("op", op.clone()), ("gen", g.to_string())];
                out.push(check(s, "weight", &p, f, Body::Weight(map.clone(), *g)));
                // σ T'_{i,e} σ = T''_{i,-e};  ψ T_{i,e} ψ = T_{i,-e}
                let (mirror, same) = match map.kind {
                    OperatorKind::Prime => (Some(tdoubleprime(d, i, -map.e)?), tprime(d, i, -map.e)?),
                    OperatorKind::DoublePrime => (None, tdoubleprime(d, i, -map.e)?),
                };
                if let Some(mirror) = mirror {
                    let y = sigma_conjugate(d, &map, x)?.sub(&apply(&mirror, x)?);
                    out.push(check(s, "sigma_compat", &p, f, Body::Embed(y)));
                    let back = apply(&map, &apply(&mirror, x)?)?.sub(x);
                    out.push(check(s, "inverse", &p, f, Body::Embed(back)));
                }
                let y = psi_conjugate(d, &map, x)?.sub(&apply(&same, x)?);
                out.push(check(s, "psi_compat", &p, f, Body::Embed(y)));
            }
        }
    }
    Ok(out)
}

fn scalar_checks(d: &CartanDatum) -> Result<Vec<Check>> {
    let s = Suite::Scalars;
    let t = CheckClass::Theorem;
    let mut out = Vec::new();
    for i in pair_reps(d) {
        let c = d.c(i, d.tau(i));
        let eps = d.eps(i);
        let dd = &qi(d, i, 1) - &qi(d, i, -1);
        let core = &dd.pow(-c)? * &qfact(-c, eps)?;
        let minus = &pochhammer(&qi(d, i, -2), &qi(d, i, -2), -c)? - &(&qi(d, i, (-c * c + c) / 2) * &core);
        let sign = Scalar::from_int(if c % 2 == 0 { 1 } else { -1 });
        let plus = &pochhammer(&qi(d, i, 2), &qi(d, i, 2), -c)? - &(&(&sign * &qi(d, i, (c * c - c) / 2)) * &core);
        let p = [("i", idx(i)), ("c", c.to_string())];
        out.push(check(s, "pochhammer_minus", &p, t, Body::Scalar(minus)));
        out.push(check(s, "pochhammer_plus", &p, t, Body::Scalar(plus)));
        out.push(check(s, "bkl_forms", &p, t, Body::Expr(bkl_rhs_pochhammer(d, i).sub(&bkl_rhs_rewritten(d, i)))));
        for m in (2 - c)..=(4 - c) {
            let lit = ProductConvention::Literal;
            let p = [("i", idx(i)), ("m", m.to_string())];
            let mut prod1 = messy_product(d, i, m, 1, c - 2, lit)?;
            out.push(check(s, "prod1", &p, t, Body::Scalar(prod1.clone())));
            prod1 = messy_product(d, i, m, -1, 2 - c, lit)?;
            out.push(check(s, "prod1_bar", &p, t, Body::Scalar(prod1)));
            let mut closed = &qi(d, i, -(c + m - 2) * (c + m - 1) / 2) * &dd.pow(m + c - 1)?;
            for x in (2 - c)..=m {
                closed = &closed * &qint(x, eps);
            }
            let prod2 = &messy_product(d, i, m, 1, 2 - c, lit)? - &closed;
            out.push(check(s, "prod2", &p, t, Body::Scalar(prod2)));
        }
    }
    Ok(out)
}

fn build_checks(spec: &SuiteSpec, suite: Suite) -> Result<Vec<Check>> {
    let d = &spec.datum;
    Ok(match suite {
        Suite::Presentation => presentation_checks(d, spec.mutation.as_deref()),
        Suite::Involutions => involution_checks(d),
        Suite::Bkl => bkl_checks(d),
        Suite::Recursion => recursion_checks(spec)?,
        Suite::SerreLusztig => serre_lusztig_checks(spec)?,
        Suite::Rank1 => rank1_checks(spec)?,
        Suite::HigherSerre => higher_serre_checks(spec)?,
        Suite::BraidConjecture => braid_checks(d)?,
        Suite::Scalars => scalar_checks(d)?,
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::CONCRETE {
                out.extend(build_checks(spec, s)?);
            }
            out
        }
    })
}

fn status_of(class: CheckClass, outcome: &Outcome) -> Status {
    match (class, outcome) {
        (CheckClass::Finding, _) => Status::Finding,
        (CheckClass::Theorem, Outcome::Zero) => Status::Pass,
        (CheckClass::Control, Outcome::Nonzero) => Status::NonzeroAsExpected,
        _ => Status::Fail,
    }
}

fn evaluate(spec: &SuiteSpec, eng: &UEngine<Exact>, c: &Check) -> Record {
    let start = Instant::now();
    let mut modular = None;
    let (outcome, witness) = match &c.body {
        Body::Embed(x) => {
            if spec.method == Method::ModularThenExact {
                let m = is_zero_modular(&spec.datum, spec.modular_trials, spec.seed, spec.budget, |meng| embed(meng, x));
                modular = Some(match m {
                    Ok(true) => Outcome::Zero,
                    Ok(false) => Outcome::Nonzero,
                    Err(e) => Outcome::Error(e.to_string()),
                });
            }
            match embed(eng, x) {
                Ok(u) if u.is_zero() => (Outcome::Zero, None),
                Ok(u) => (Outcome::Nonzero, Some(u.to_expr_string())),
                Err(e) => (Outcome::Error(e.to_string()), None),
            }
        }
        Body::Expr(x) => {
            if x.is_zero() {
                (Outcome::Zero, None)
            } else {
                (Outcome::Nonzero, Some(x.to_string()))
            }
        }
        Body::Scalar(x) => {
            if x.is_zero() {
                (Outcome::Zero, None)
            } else {
                (Outcome::Nonzero, Some(x.to_canonical_string()))
            }
        }
        Body::Weight(map, g) => match weight_mismatches(eng, map, *g) {
            Ok(bad) if bad.is_empty() => (Outcome::Zero, None),
            Ok(bad) => (Outcome::Nonzero, Some(format!("weights mod L {bad:?}"))),
            Err(e) => (Outcome::Error(e.to_string()), None),
        },
    };
    Record {
        suite: c.suite.name().to_string(),
        label: c.label.clone(),
        params: c.params.clone(),
        class: c.class,
        status: status_of(c.class, &outcome),
        outcome,
        witness,
        method: spec.method,
        modular,
        elapsed: start.elapsed(),
    }
}

/// Runs the suite; checks execute in parallel and records are sorted by suite and label.
pub fn run_suite(spec: &SuiteSpec) -> Result<VerificationReport> {
    let opts = EngineOptions { budget: Some(spec.budget), cache_dir: spec.cache_dir.clone(), private_cache: false };
    let mut eng = UEngine::with_options(&spec.datum, Exact, &opts)?;
    eng.set_observer(spec.observer.clone());
    let checks = build_checks(spec, spec.suite)?;
    let mut records: Vec<Record> = checks.par_iter().map(|c| evaluate(spec, &eng, c)).collect();
    records.sort_by(|a, b| (a.suite.as_str(), a.label.as_str()).cmp(&(b.suite.as_str(), b.label.as_str())));
    Ok(VerificationReport { records })
}

/// Relation-preservation report for one operator.
pub fn check_hom(datum: &CartanDatum, map: &GeneratorMap) -> Result<VerificationReport> {
    let spec = SuiteSpec::new(Suite::BraidConjecture, datum.clone());
    let eng = UEngine::with_options(datum, Exact, &EngineOptions::default())?;
    let op = map.label();
    let mut records = Vec::new();
    for (label, r) in relation_set(datum) {
        let c = check(Suite::BraidConjecture, "hom", &[("op", op.clone()), ("relation", label)], CheckClass::Finding, Body::Embed(apply(map, &r)?));
        records.push(evaluate(&spec, &eng, &c));
    }
    records.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(VerificationReport { records })
}

/// True iff every relation is preserved.
pub fn hom_passes(report: &VerificationReport) -> bool {
    report.records.iter().all(|r| r.outcome == Outcome::Zero)
}
