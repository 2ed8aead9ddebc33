//! Run configuration, suite orchestration and the JSON report.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descent::{check_alpha_image, check_descent_diagram, check_eg4_congruence, sample_am_unit, sample_lattice_target, torsion_probe};
use crate::descent::{alpha_inverse_approx, DescentScenario};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GROUP_PRESETS};
use crate::local_field::{build_tower, h_exponent, lemma_2_5_check, preset, FieldTag, LocalFieldContext, TowerSpec, PRESET_NAMES};
use crate::logarithm::{agreement_digits, check_prop_2_3, check_prop_2_6, check_prop_2_8, check_theorem_2_1, log_f};
use crate::oracle::{check_oracle_c2, C2Oracle};
use crate::outcome::{min_margin, Outcome};
use crate::rep::{irreducible_table, CharTable};
use crate::sampling::{radical_sample, random_group_ring, random_integral, sample_rng, unit_sample};

pub const REPORT_VERSION: u32 = 1;

pub const CHECK_NAMES: [&str; 10] =
    ["thm21", "prop23", "prop26", "lemma25", "prop28", "eg4", "eg5", "eg6", "oracle-c2", "table-certify"];

/// Default sample counts. `eg5-targets` is the number of approximation targets
/// for the reverse inclusion of `eg5`.
pub fn default_samples() -> BTreeMap<String, usize> {
    [
        ("thm21", 200),
        ("prop23", 50),
        ("prop26", 50),
        ("lemma25", 50),
        ("prop28", 20),
        ("eg4", 50),
        ("eg5", 50),
        ("eg5-targets", 20),
        ("eg6", 50),
        ("oracle-c2", 50),
        ("table-certify", 1),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

fn default_checks() -> Vec<String> {
    vec!["all".into()]
}

fn default_seed() -> u64 {
    1
}

fn default_precision() -> i64 {
    crate::local_field::DEFAULT_PRECISION
}

/// Everything a run needs. Read from TOML, then overridden from the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Built-in tower name.
    #[serde(default)]
    pub preset: Option<String>,
    /// Inline tower description.
    #[serde(default)]
    pub tower: Option<TowerSpec>,
    /// File holding a TOML tower description.
    #[serde(default)]
    pub tower_file: Option<PathBuf>,
    #[serde(default)]
    pub group: Option<String>,
    /// Multiplication table file: `n`, then `n` rows of `n` indices.
    #[serde(default)]
    pub group_table: Option<PathBuf>,
    #[serde(default = "default_precision")]
    pub precision: i64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    /// Per-check overrides of [`default_samples`].
    #[serde(default)]
    pub samples: BTreeMap<String, usize>,
    /// JSON report path; stdout when absent.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Optional markdown rendering of the same report.
    #[serde(default)]
    pub markdown: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut c: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if c.precision == 0 {
            c.precision = default_precision();
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn new(preset: &str, group: &str) -> Self {
        RunConfig {
            preset: Some(preset.into()),
            group: Some(group.into()),
            precision: default_precision(),
            seed: default_seed(),
            checks: default_checks(),
            ..Default::default()
        }
    }

    /// Sets every sample count to `n`.
    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = default_samples().into_keys().map(|k| (k, n)).collect();
        self
    }

    pub fn with_checks(mut self, checks: &[&str]) -> Self {
        self.checks = checks.iter().map(|s| s.to_string()).collect();
        self
    }

    fn tower_spec(&self) -> Result<(String, TowerSpec)> {
        let spec = match (&self.preset, &self.tower, &self.tower_file) {
            (Some(name), None, None) => {
                let spec = preset(name).ok_or_else(|| Error::Config(format!("unknown tower preset `{name}`")))?;
                (format!("preset:{name}"), spec)
            }
            (None, Some(spec), None) => (format!("inline:{}", spec.name), spec.clone()),
            (None, None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                let spec: TowerSpec = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                (format!("file:{}", path.display()), spec)
            }
            (None, None, None) => return Err(Error::Config("no tower given".into())),
            _ => return Err(Error::Config("give exactly one of preset, tower and tower_file".into())),
        };
        Ok((spec.0, spec.1.with_precision(self.precision)))
    }

    fn group(&self, p: u64) -> Result<(String, FiniteGroup)> {
        let g = match (&self.group, &self.group_table) {
            (Some(name), None) => (format!("preset:{name}"), FiniteGroup::preset(name, p)),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                let name = path.file_stem().map_or("table".into(), |s| s.to_string_lossy().into_owned());
                (format!("file:{}", path.display()), FiniteGroup::parse_table(&name, &text, p))
            }
            (None, None) => return Err(Error::Config("no group given".into())),
            _ => return Err(Error::Config("give exactly one of group and group_table".into())),
        };
        Ok((g.0, g.1.map_err(|e| Error::Config(e.to_string()))?))
    }

    fn sample_counts(&self) -> Result<BTreeMap<String, usize>> {
        let mut counts = default_samples();
        for (k, &v) in &self.samples {
            if !counts.contains_key(k) {
                return Err(Error::Config(format!("unknown sample key `{k}`")));
            }
            if v < 1 {
                return Err(Error::Config(format!("sample count for `{k}` must be at least 1")));
            }
            counts.insert(k.clone(), v);
        }
        Ok(counts)
    }
}

/// Configuration as echoed into the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub tower: String,
    pub group: String,
    pub precision: i64,
    pub seed: u64,
    pub checks: Vec<String>,
    pub samples: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub samples: usize,
    /// Smallest valuation slack over all samples; `null` when every compared
    /// quantity vanished at working precision.
    pub worst_margin: Option<i64>,
    /// Witnesses, capped at [`MAX_WITNESSES`].
    pub failures: Vec<String>,
    pub failure_count: usize,
    /// Samples that raised an internal fault rather than failing the check.
    pub faults: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub const MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: u32,
    pub config: ConfigEcho,
    pub checks: Vec<CheckReport>,
    pub verdict: String,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 on a global pass, 3 if any sample hit an internal fault, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.faults > 0) {
            3
        } else if self.pass() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "# grouplog report\n");
        let _ = writeln!(s, "tower `{}`, group `{}`, precision {}, seed {}\n", c.tower, c.group, c.precision, c.seed);
        let _ = writeln!(s, "| check | verdict | samples | worst margin | failures |");
        let _ = writeln!(s, "|---|---|---|---|---|");
        for r in &self.checks {
            let margin = r.worst_margin.map_or("inf".to_string(), |m| m.to_string());
            let verdict = if r.pass { "pass" } else { "FAIL" };
            let _ = writeln!(s, "| {} | {verdict} | {} | {margin} | {} |", r.name, r.samples, r.failure_count);
        }
        let _ = writeln!(s, "\nverdict: **{}**", self.verdict);
        for r in &self.checks {
            if let Some(n) = &r.note {
                let _ = writeln!(s, "\n- {}: {n}", r.name);
            }
            for w in &r.failures {
                let _ = writeln!(s, "\n- {} witness: {w}", r.name);
            }
        }
        s
    }
}

struct Env {
    ctx: Arc<LocalFieldContext>,
    group: Arc<FiniteGroup>,
    table: CharTable,
    lifts: Vec<usize>,
    seed: u64,
    digits: i64,
    sm: Option<DescentScenario>,
    sk: Option<DescentScenario>,
    oracle: Option<Vec<C2Oracle>>,
}

impl Env {
    fn rng(&self, stream: &str, i: usize) -> rand_chacha::ChaCha8Rng {
        sample_rng(self.seed, stream, i as u64)
    }

    fn frob(&self, i: usize) -> usize {
        self.lifts[i % self.lifts.len()]
    }

    fn nonabelian(&self) -> Option<&DescentScenario> {
        self.sm.as_ref().filter(|s| s.commutator.is_some())
    }

    fn applicable(&self, check: &str) -> std::result::Result<(), String> {
        match check {
            "eg4" | "eg5" if self.nonabelian().is_none() => {
                Err("needs p = 2 and a central commutator of order 2".into())
            }
            "eg6" if self.sm.is_none() || self.sk.is_none() => Err("needs p = 2 and a valid descent scenario".into()),
            "oracle-c2" if self.oracle.is_none() => Err("needs G = C2 and [M : Q_p] <= 2".into()),
            _ => Ok(()),
        }
    }
}

/// Errors that mean the mathematics failed rather than the machinery.
fn is_check_failure(e: &Error) -> bool {
    matches!(e, Error::TheoremViolation(_) | Error::Stalled(_))
}

struct Tally {
    outcomes: Vec<(usize, Result<Outcome>)>,
}

impl Tally {
    fn report(self, name: &str, samples: usize, note: Option<String>) -> CheckReport {
        let mut pass = true;
        let mut margin: Option<i64> = None;
        let mut failures = Vec::new();
        let mut faults = 0;
        for (i, r) in self.outcomes {
            match r {
                Ok(o) => {
                    margin = min_margin(margin, o.margin);
                    if !o.pass {
                        pass = false;
                        failures.push(format!("sample {i}: {}", o.detail));
                    }
                }
                Err(e) => {
                    pass = false;
                    if !is_check_failure(&e) {
                        faults += 1;
                    }
                    failures.push(format!("sample {i}: {e}"));
                }
            }
        }
        let failure_count = failures.len();
        failures.truncate(MAX_WITNESSES);
        CheckReport { name: name.into(), pass, samples, worst_margin: margin, failures, failure_count, faults, note }
    }
}

fn per_sample(n: usize, f: impl Fn(usize) -> Result<Outcome> + Sync) -> Tally {
    let outcomes = (0..n).into_par_iter().map(|i| (i, f(i))).collect();
    Tally { outcomes }
}

fn run_thm21(env: &Env, n: usize) -> CheckReport {
    let len = env.table.len();
    let t = per_sample(n, |i| {
        let mut rng = env.rng("thm21", i);
        let z = unit_sample(&mut rng, i as u64, &env.group, FieldTag::M, &env.ctx);
        let virtuals: Vec<Vec<i64>> = (0..10).map(|_| (0..len).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        check_theorem_2_1(&z, env.frob(i), &env.table, &virtuals, &env.ctx)
    });
    t.report("thm21", n, None)
}

fn run_prop23(env: &Env, n: usize) -> CheckReport {
    let t = per_sample(n, |i| {
        let r = radical_sample(&mut env.rng("radical", i), i as u64, &env.group, FieldTag::M, &env.ctx);
        check_prop_2_3(&r, env.frob(i), &env.table, env.digits, &env.ctx)
    });
    t.report("prop23", n, Some(format!("required agreement {} digits", env.digits)))
}

fn run_prop26(env: &Env, n: usize) -> CheckReport {
    let t = per_sample(n, |i| {
        let r = radical_sample(&mut env.rng("radical", i), i as u64, &env.group, FieldTag::M, &env.ctx);
        check_prop_2_6(&r, env.frob(i), &env.ctx)
    });
    let h = h_exponent(env.ctx.p(), env.ctx.m.e as u64);
    t.report("prop26", n, Some(format!("h_exponent {h}; margin 0 means the bound is attained")))
}

fn run_lemma25(env: &Env, n: usize) -> CheckReport {
    let t = per_sample(n, |i| {
        let x = random_integral(&mut env.rng("lemma25", i), FieldTag::M, &env.ctx);
        let mut out = Vec::new();
        for &frob in &env.lifts {
            for k in 0..=4 {
                let r = lemma_2_5_check(&x, k, frob, &env.ctx)?;
                let margin = r.lhs.map(|v| v - r.rhs);
                out.push(Outcome { pass: r.pass, margin, detail: format!("k = {k}, valuation {:?} < {}", r.lhs, r.rhs) });
            }
        }
        Ok(Outcome::merge(out))
    });
    t.report("lemma25", n, None)
}

fn run_prop28(env: &Env, n: usize) -> CheckReport {
    let t = per_sample(n, |i| {
        let z = unit_sample(&mut env.rng("prop28", i), i as u64, &env.group, FieldTag::M, &env.ctx);
        let mut out = Vec::new();
        for coset in env.ctx.gal_mk() {
            out.push(check_prop_2_8(&z, coset[0], env.frob(i), &env.table, env.digits, &env.ctx)?);
        }
        Ok(Outcome::merge(out))
    });
    t.report("prop28", n, Some(format!("all {} elements of Gal(M/K)", env.ctx.gal_mk().len())))
}

fn run_eg4(env: &Env, n: usize) -> CheckReport {
    let s = env.nonabelian().expect("checked applicable");
    let t = per_sample(n, |i| {
        let x = random_group_ring(&mut env.rng("eg4", i), &env.group, FieldTag::M, &env.ctx);
        check_eg4_congruence(&x, s)
    });
    t.report("eg4", n, None)
}

fn run_eg5(env: &Env, n: usize, targets: usize) -> CheckReport {
    let sm = env.nonabelian().expect("checked applicable");
    let scenarios: Vec<&DescentScenario> = [Some(sm), env.sk.as_ref()].into_iter().flatten().collect();
    let mut t = per_sample(n, |i| {
        let mut out = Vec::new();
        for s in &scenarios {
            let u = sample_am_unit(s, &mut env.rng("eg5", i));
            out.push(check_alpha_image(&u, s)?);
        }
        Ok(Outcome::merge(out))
    });
    let back = per_sample(targets, |i| {
        let target = sample_lattice_target(sm, &mut env.rng("eg5-targets", i));
        let a = alpha_inverse_approx(&target, sm, env.digits)?;
        Ok(Outcome::new(Some(a.residual_digits - env.digits), format!("{} iterations", a.iterations)))
    });
    t.outcomes.extend(back.outcomes.into_iter().map(|(i, o)| (n + i, o)));
    let note = format!(
        "samples 0..{n}: alpha image of 1 + A(G); samples {n}..{}: approximation to {} digits",
        n + targets,
        env.digits
    );
    t.report("eg5", n + targets, Some(note))
}

fn run_eg6(env: &Env, n: usize) -> CheckReport {
    let (sm, sk) = (env.sm.as_ref().unwrap(), env.sk.as_ref().unwrap());
    let mut rng = env.rng("eg6", 0);
    let mut notes = Vec::new();
    let outcomes = match check_descent_diagram(sm, sk, &mut rng, n) {
        Ok(r) => {
            let parts = [
                ("fixed units", Some(r.fixed_units)),
                ("lattice fixed points", r.lattice_fixed_points),
                ("inclusion", r.inclusion),
                ("lift independence", r.lift_independence),
            ];
            parts
                .into_iter()
                .filter_map(|(label, o)| o.map(|o| Outcome { detail: format!("{label}: {}", o.detail), ..o }))
                .enumerate()
                .map(|(i, o)| (i, Ok(o)))
                .collect()
        }
        Err(e) => vec![(0, Err(e))],
    };
    if sm.commutator.is_some() {
        match torsion_probe(sm, &mut env.rng("eg6-torsion", 0), n.min(10)) {
            Ok(Some(w)) => notes.push(format!("torsion candidate, investigate: {w}")),
            Ok(None) => notes.push("torsion probe found nothing".into()),
            Err(e) => notes.push(format!("torsion probe fault: {e}")),
        }
    }
    if env.lifts.len() > 1 {
        let z = unit_sample(&mut env.rng("eg6-lifts", 1), 2, &env.group, FieldTag::M, &env.ctx);
        let logs: Result<Vec<_>> = env.lifts.iter().map(|&f| log_f(&z, f, &env.table, &env.ctx)).collect();
        match logs {
            Ok(logs) => {
                let d = agreement_digits(&logs[0].values, &logs[1].values);
                let cap = env.ctx.cap();
                if d < cap {
                    notes.push(format!("Log_F depends on the lift: two lifts agree to {d} of {cap} digits on a sample unit"));
                } else {
                    notes.push("Log_F agreed across lifts on the probe unit".into());
                }
            }
            Err(e) => notes.push(format!("lift probe fault: {e}")),
        }
    }
    Tally { outcomes }.report("eg6", n, Some(notes.join("; ")).filter(|s| !s.is_empty()))
}

fn run_oracle(env: &Env, n: usize) -> CheckReport {
    let oracles = env.oracle.as_ref().expect("checked applicable");
    let t = per_sample(n, |i| {
        let k = i % env.lifts.len();
        check_oracle_c2(&oracles[k], &env.table, env.lifts[k], &mut env.rng("oracle-c2", i), &env.ctx)
    });
    t.report("oracle-c2", n, None)
}

fn run_certify(env: &Env) -> CheckReport {
    let o = env
        .table
        .certify()
        .and_then(|_| env.ctx.self_check())
        .map(|_| Outcome::pass(""));
    Tally { outcomes: vec![(0, o)] }.report("table-certify", 1, Some(format!("{} classes", env.group.num_classes())))
}

/// Builds everything and runs the selected checks. `Err` means the
/// configuration is unusable (exit 2); failures and faults are in the report.
pub fn run_suite(config: &RunConfig) -> Result<SuiteReport> {
    if config.precision < 8 {
        return Err(Error::Config(format!("precision {} is below 8", config.precision)));
    }
    let counts = config.sample_counts()?;
    let (tower_label, spec) = config.tower_spec()?;
    let ctx = Arc::new(build_tower(&spec).map_err(|e| Error::Config(format!("tower: {e}")))?);
    let (group_label, group) = config.group(ctx.p())?;
    let group = Arc::new(group);
    let table = irreducible_table(&group, &ctx).map_err(|e| Error::Config(format!("character table: {e}")))?;
    let lifts = ctx.frobenius_lifts();
    if lifts.is_empty() {
        return Err(Error::Config("Gal(M/K) has no Frobenius lift".into()));
    }
    let sm = DescentScenario::new(&ctx, &group, FieldTag::M).ok();
    let sk = DescentScenario::new(&ctx, &group, FieldTag::K).ok();
    let oracle = (group.order() == 2)
        .then(|| lifts.iter().map(|&f| C2Oracle::new(&ctx, f)).collect::<Result<Vec<_>>>().ok())
        .flatten();
    let env = Env { digits: 20.min(ctx.cap() / 2), ctx, group, table, lifts, seed: config.seed, sm, sk, oracle };

    let explicit = !config.checks.iter().any(|c| c == "all");
    let mut checks = Vec::new();
    for name in CHECK_NAMES {
        let wanted = !explicit || config.checks.iter().any(|c| c == name);
        if !wanted {
            continue;
        }
        match env.applicable(name) {
            Ok(()) => checks.push(name),
            Err(why) if explicit => return Err(Error::Config(format!("check `{name}` {why}"))),
            Err(_) => {}
        }
    }
    if let Some(bad) = config.checks.iter().find(|c| *c != "all" && !CHECK_NAMES.contains(&c.as_str())) {
        return Err(Error::Config(format!("unknown check `{bad}`")));
    }

    let mut reports = Vec::new();
    for name in &checks {
        let n = counts[*name];
        let start = Instant::now();
        let report = match *name {
            "thm21" => run_thm21(&env, n),
            "prop23" => run_prop23(&env, n),
            "prop26" => run_prop26(&env, n),
            "lemma25" => run_lemma25(&env, n),
            "prop28" => run_prop28(&env, n),
            "eg4" => run_eg4(&env, n),
            "eg5" => run_eg5(&env, n, counts["eg5-targets"]),
            "eg6" => run_eg6(&env, n),
            "oracle-c2" => run_oracle(&env, n),
            "table-certify" => run_certify(&env),
            _ => unreachable!(),
        };
        eprintln!("{name}: {} in {:.2?}", if report.pass { "pass" } else { "FAIL" }, start.elapsed());
        reports.push(report);
    }
    let mut samples = BTreeMap::new();
    for name in &checks {
        samples.insert(name.to_string(), counts[*name]);
        if *name == "eg5" {
            samples.insert("eg5-targets".into(), counts["eg5-targets"]);
        }
    }
    let echo = ConfigEcho {
        tower: tower_label,
        group: group_label,
        precision: config.precision,
        seed: config.seed,
        checks: checks.iter().map(|s| s.to_string()).collect(),
        samples,
    };
    let verdict = if reports.iter().all(|r| r.pass) { "pass" } else { "fail" };
    Ok(SuiteReport { version: REPORT_VERSION, config: echo, checks: reports, verdict: verdict.into() })
}

/// Invariant summary of one built-in tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerSummary {
    pub name: String,
    pub p: u64,
    pub degree_n: usize,
    pub e_m: usize,
    pub f_m: usize,
    pub q: usize,
    pub h_exponent: i64,
    pub frobenius_lifts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub name: String,
    pub order: usize,
    pub classes: usize,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Catalogue {
    pub towers: Vec<TowerSummary>,
    pub groups: Vec<GroupSummary>,
}

impl fmt::Display for Catalogue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "towers:")?;
        for t in &self.towers {
            let h = match t.h_exponent {
                0 => "1".to_string(),
                1 if t.e_m == 1 => "p".to_string(),
                k => format!("pi_M^{k}"),
            };
            writeln!(
                f,
                "  {:<8} p = {}  [N:Q_p] = {}  e_M = {}  f_M = {}  q = {}  h_exponent = {}  h_M = {}  Frobenius lifts = {}",
                t.name, t.p, t.degree_n, t.e_m, t.f_m, t.q, t.h_exponent, h, t.frobenius_lifts
            )?;
        }
        writeln!(f, "groups:")?;
        for g in &self.groups {
            let kind = if g.abelian { "abelian" } else { "nonabelian" };
            writeln!(f, "  {:<8} order {}  {} classes  {kind}", g.name, g.order, g.classes)?;
        }
        Ok(())
    }
}

pub fn list_presets() -> Result<Catalogue> {
    let mut towers = Vec::new();
    for name in PRESET_NAMES {
        let ctx = build_tower(&preset(name).expect("preset exists"))?;
        towers.push(TowerSummary {
            name: name.into(),
            p: ctx.p(),
            degree_n: ctx.n.degree,
            e_m: ctx.m.e,
            f_m: ctx.m.f,
            q: ctx.q,
            h_exponent: h_exponent(ctx.p(), ctx.m.e as u64),
            frobenius_lifts: ctx.frobenius_lifts().len(),
        });
    }
    let mut groups = Vec::new();
    for name in GROUP_PRESETS {
        let g = FiniteGroup::preset(name, 2)?;
        groups.push(GroupSummary { name: name.into(), order: g.order(), classes: g.num_classes(), abelian: g.is_abelian() });
    }
    Ok(Catalogue { towers, groups })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_invariants() {
        let c = list_presets().unwrap();
        let ram = c.towers.iter().find(|t| t.name == "RAM2").unwrap();
        assert_eq!((ram.e_m, ram.h_exponent), (2, 0));
        let unr = c.towers.iter().find(|t| t.name == "UNR").unwrap();
        assert_eq!((unr.e_m, unr.h_exponent), (1, 1));
        assert!(c.to_string().contains("h_M = p"));
        let q8 = c.groups.iter().find(|g| g.name == "Q8").unwrap();
        assert_eq!(q8.classes, 5);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(run_suite(&RunConfig::new("NOPE", "C2")), Err(Error::Config(_))));
        assert!(matches!(run_suite(&RunConfig::new("RAM2", "C3")), Err(Error::Config(_))));
        let mut c = RunConfig::new("RAM2", "C2");
        c.precision = 4;
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
        let c = RunConfig::new("RAM2", "C2").with_checks(&["eg4"]);
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
        let c = RunConfig::new("RAM2", "C2").with_checks(&["bogus"]);
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
        let mut c = RunConfig::new("RAM2", "C2");
        c.samples.insert("thm21".into(), 0);
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
    }

    #[test]
    fn trivial_thm21_has_infinite_margin_on_one() {
        let c = RunConfig::new("TRIVIAL", "C2").with_checks(&["thm21"]).with_samples(1);
        let r = run_suite(&c).unwrap();
        assert!(r.pass());
        // sample 0 is z = 1, where every quotient is exactly 1
        assert_eq!(r.check("thm21").unwrap().worst_margin, None);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            preset = "UNR"
            group = "C2"
            seed = 7
            checks = ["prop23", "oracle-c2"]
            [samples]
            prop23 = 3
        "#;
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.precision, 32);
        assert_eq!(c.samples["prop23"], 3);
        assert!(RunConfig::from_toml("preset = 3").is_err());
        assert!(RunConfig::from_toml("colour = \"red\"").is_err());
    }
}
