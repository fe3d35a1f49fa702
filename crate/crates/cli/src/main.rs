mod cache;
mod config;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use gammapres_core::arith::{self, BoundCase, LocalData};
use gammapres_core::cohom::cohomology;
use gammapres_core::flmod::simple_modules;
use gammapres_core::io::{gamma_group_to_json, group_to_json, module_to_json, read_json, Loader, RationalString, Ref};
use gammapres_core::presentations::{prime_divisors, presentation_report, relator_rank};
use gammapres_core::randmodel::{
    decompose_relation_group, exhaustive_generation_probability, generation_probability, sample_quotients,
    RelationModuleDecomposition,
};
use gammapres_core::selftest::{run_criterion, SelftestBundle, CRITERIA};
use gammapres_core::varieties::{height_report, pro_c_completion};
use gammapres_core::{ElemSet, Error, FpModule, GammaGroup, Limits};
use serde::Serialize;
use serde_json::{json, Value};

use cache::Cache;
use config::{Format, RunConfig};

const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or malformed input files.
    Usage(String),
    Compute(Error),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(e) if e.is_capacity() => 3,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

/// Errors raised while reading inputs: capacity stays a capacity error,
/// everything else is a usage error.
fn input(e: Error) -> CliError {
    if e.is_capacity() {
        CliError::Compute(e)
    } else {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "gammapres", version, about = "Presentations of Γ-groups: multiplicities, completions, heights and random relations")]
struct Cli {
    /// RunConfig JSON.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ignore the cache for this run.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cocycle solve for H⁰, H¹ or H².
    Cohom {
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        module: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        degree: u8,
    },
    /// Multiplicities of simple modules in a presentation kernel.
    Mult {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: PathBuf,
        /// Modules over G ⋊ Γ; all simple modules at the scanned primes when absent.
        #[arg(long)]
        module: Vec<PathBuf>,
        /// A finite cover F → G for the oracle.
        #[arg(long)]
        oracle: Option<PathBuf>,
    },
    /// Minimal number of relations.
    RelatorRank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u32>>,
    },
    /// Pro-C completion of a finite Γ-group.
    Proc {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        variety: PathBuf,
    },
    /// Height ℌ and optionally ĥ.
    Height {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        hat: bool,
    },
    /// Monte Carlo histogram of quotients by random relations.
    Sample {
        #[arg(long)]
        gamma_group: PathBuf,
        /// Number of random relations n + u.
        #[arg(long)]
        relations: usize,
        #[arg(long)]
        draws: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact probability that random relations generate R.
    Genprob {
        #[arg(long, conflicts_with = "gamma_group", required_unless_present = "gamma_group")]
        decomp: Option<PathBuf>,
        /// Decompose R = F for this Γ-group.
        #[arg(long)]
        gamma_group: Option<PathBuf>,
        #[arg(long)]
        relations: usize,
        /// Also count tuples exhaustively (needs --gamma-group).
        #[arg(long, requires = "gamma_group")]
        exhaustive: bool,
    },
    /// Closed-form arithmetic evaluators on LocalData.
    Formula {
        #[arg(long)]
        op: String,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        n: u64,
        /// nf, ff or admissible for mult_bound_main.
        #[arg(long)]
        case: Option<String>,
        /// [k:ℚ] for fin_pres_relation_bound.
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Runs the acceptance suite; exits 1 on any failure.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        criterion: Vec<u8>,
    },
}

struct Ctx {
    config: RunConfig,
    limits: Limits,
    format: Format,
    out: Option<PathBuf>,
    cache: Cache,
    loader: Loader,
}

impl Ctx {
    fn path_ref<T>(p: &Path) -> Ref<T> {
        Ref::Path(p.to_string_lossy().into_owned())
    }

    fn gamma_group(&self, p: &Path) -> Result<GammaGroup, CliError> {
        self.loader.gamma_group(&Self::path_ref(p)).map_err(input)
    }

    /// Runs `compute` unless the cache holds a report for `material`.
    fn cached(&self, material: Value, compute: impl FnOnce() -> Result<Value, CliError>) -> Result<Value, CliError> {
        let key = Cache::key(&json!({ "version": env!("CARGO_PKG_VERSION"), "limits": self.limits, "inputs": material }));
        if let Some(v) = self.cache.get(&key) {
            return Ok(v);
        }
        let v = compute()?;
        if let Err(e) = self.cache.put(&key, &v) {
            eprintln!("warning: cache write failed: {e}");
        }
        Ok(v)
    }

    fn emit(&self, value: &Value) -> Result<(), CliError> {
        let text = render(value, self.format);
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn report(command: &str, provenance: &[(&str, &str)], result: impl Serialize) -> Value {
    let provenance: BTreeMap<&str, &str> = provenance.iter().copied().collect();
    json!({ "command": command, "provenance": provenance, "result": result })
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut s = String::from("path\tvalue\n");
            flatten("", value, &mut s);
            s
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push_str(&format!("{prefix}\t{s}\n")),
        other => out.push_str(&format!("{prefix}\t{other}\n")),
    }
}

fn ratio_string(r: &RationalString) -> String {
    format!("{}/{}", r.numerator, r.denominator)
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gammapres: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let config = RunConfig::load(cli.config.as_deref())?;
    let limits = config.limits();
    let ctx = Ctx {
        format: cli.format.or(config.format).unwrap_or_default(),
        out: cli.out,
        cache: Cache::new(if cli.no_cache { None } else { config.cache_dir() }),
        loader: Loader::new("", &limits),
        limits,
        config,
    };
    match cli.command {
        Command::Cohom { group, module, degree } => cohom(&ctx, group.as_deref(), &module, degree),
        Command::Mult { n, gamma, module, oracle } => mult(&ctx, n, &gamma, &module, oracle.as_deref()),
        Command::RelatorRank { n, gamma, primes } => rank(&ctx, n, &gamma, primes),
        Command::Proc { gamma, variety } => proc_c(&ctx, &gamma, &variety),
        Command::Height { group, hat } => height(&ctx, &group, hat),
        Command::Sample { gamma_group, relations, draws, seed } => sample(&ctx, &gamma_group, relations, draws, seed),
        Command::Genprob { decomp, gamma_group, relations, exhaustive } => {
            genprob(&ctx, decomp.as_deref(), gamma_group.as_deref(), relations, exhaustive)
        }
        Command::Formula { op, data, n, case, degree } => formula(&ctx, &op, data.as_deref(), n, case.as_deref(), degree),
        Command::Selftest { seed, criterion } => selftest(&ctx, seed, &criterion),
    }
}

fn cohom(ctx: &Ctx, group: Option<&Path>, module: &Path, degree: u8) -> Result<u8, CliError> {
    let g = group.map(|p| ctx.loader.group(&Ctx::path_ref(p))).transpose().map_err(input)?;
    let a = ctx.loader.module(&Ctx::path_ref(module), g.as_ref()).map_err(input)?;
    let material = json!({ "command": "cohom", "module": module_to_json(&a), "degree": degree });
    let v = ctx.cached(material, || {
        let r = cohomology(&a, degree, &ctx.limits)?;
        Ok(report(
            "cohom",
            &[("dim_cocycles", "oracle"), ("dim_coboundaries", "oracle"), ("dim_cohomology", "oracle")],
            r,
        ))
    })?;
    ctx.emit(&v)?;
    Ok(0)
}

/// Primes from the config, else those dividing |G| and not |Γ|.
fn scan_primes(ctx: &Ctx, h: &GammaGroup) -> Vec<u32> {
    match &ctx.config.primes {
        Some(p) => p.clone(),
        None => prime_divisors(h.order()).into_iter().filter(|&p| h.gamma().order() % p as usize != 0).collect(),
    }
}

fn mult(ctx: &Ctx, n: usize, gamma: &Path, modules: &[PathBuf], oracle: Option<&Path>) -> Result<u8, CliError> {
    let h = ctx.gamma_group(gamma)?;
    let sd = h.semidirect_product(&ctx.limits)?;
    let mods: Vec<FpModule> = if modules.is_empty() {
        let mut out = Vec::new();
        for p in scan_primes(ctx, &h) {
            out.extend(simple_modules(&sd.group, p, &ctx.limits)?);
        }
        out
    } else {
        modules.iter().map(|m| ctx.loader.module(&Ctx::path_ref(m), Some(&sd.group))).collect::<Result<_, _>>().map_err(input)?
    };
    let cover = oracle.map(|p| ctx.loader.cover(&Ctx::path_ref(p), &h)).transpose().map_err(input)?;
    let material = json!({
        "command": "mult",
        "n": n,
        "gamma": gamma_group_to_json(&h),
        "modules": mods.iter().map(module_to_json).collect::<Vec<_>>(),
        "cover": cover.as_ref().map(|(f, w)| json!({ "source": gamma_group_to_json(f), "images": w.images() })),
    });
    let v = ctx.cached(material, || {
        let r = presentation_report(n, &h, &mods, cover.as_ref().map(|(f, w)| (f, w)), &ctx.limits)?;
        Ok(report(
            "mult",
            &[
                ("rows[].m_formula", "formula"),
                ("rows[].terms", "formula"),
                ("rows[].m_admissible", "formula"),
                ("rows[].m_oracle", "oracle"),
                ("relator_rank.value", "formula"),
            ],
            r,
        ))
    })?;
    ctx.emit(&v)?;
    Ok(0)
}

fn rank(ctx: &Ctx, n: usize, gamma: &Path, primes: Option<Vec<u32>>) -> Result<u8, CliError> {
    let h = ctx.gamma_group(gamma)?;
    let primes = primes.or_else(|| ctx.config.primes.clone());
    let material = json!({ "command": "relator-rank", "n": n, "gamma": gamma_group_to_json(&h), "primes": primes });
    let v = ctx.cached(material, || {
        let r = relator_rank(n, &h, None, primes.as_deref(), &ctx.limits).map_err(|e| match e {
            Error::Precondition(m) => CliError::Usage(m),
            e => CliError::Compute(e),
        })?;
        Ok(report("relator-rank", &[("value", "formula"), ("attained_by", "formula")], r))
    })?;
    ctx.emit(&v)?;
    Ok(0)
}

fn proc_c(ctx: &Ctx, gamma: &Path, variety: &Path) -> Result<u8, CliError> {
    let h = ctx.gamma_group(gamma)?;
    let c = ctx.loader.variety(&Ctx::path_ref(variety)).map_err(input)?;
    let material = json!({
        "command": "proc",
        "gamma": gamma_group_to_json(&h),
        "members": c.members.iter().map(gamma_group_to_json).collect::<Vec<_>>(),
        "product_order_bound": c.product_order_bound,
        "search_depth": c.search_depth,
    });
    let v = ctx.cached(material, || {
        let done = pro_c_completion(&h, &c, &ctx.limits)?;
        let result = json!({
            "source_order": h.order(),
            "completion_order": done.quotient.order(),
            "kernel": done.kernel.iter().collect::<Vec<_>>(),
            "exhausted": done.exhausted,
            "completion": gamma_group_to_json(&done.quotient),
        });
        Ok(report("proc", &[("completion_order", "oracle"), ("kernel", "oracle")], result))
    })?;
    ctx.emit(&v)?;
    Ok(0)
}

fn height(ctx: &Ctx, group: &Path, hat: bool) -> Result<u8, CliError> {
    let g = ctx.loader.group(&Ctx::path_ref(group)).map_err(input)?;
    let material = json!({ "command": "height", "group": group_to_json(&g), "hat": hat });
    let v = ctx.cached(material, || {
        let r = height_report(&g, hat, &ctx.limits)?;
        Ok(report(
            "height",
            &[("h_value", "oracle"), ("h_exhaustive", "oracle"), ("hhat_value", "oracle"), ("hhat_exhaustive", "oracle")],
            r,
        ))
    })?;
    ctx.emit(&v)?;
    Ok(0)
}

fn sample(ctx: &Ctx, gamma_group: &Path, relations: usize, draws: u64, seed: Option<u64>) -> Result<u8, CliError> {
    let f = ctx.gamma_group(gamma_group)?;
    let seed = seed.or(ctx.config.seed).unwrap_or(DEFAULT_SEED);
    let material =
        json!({ "command": "sample", "gamma": gamma_group_to_json(&f), "relations": relations, "draws": draws, "seed": seed });
    let v = ctx.cached(material, || {
        let hist = sample_quotients(&f, relations, draws, seed, &ctx.limits)?;
        let mut value = to_value(&hist);
        if let Some(buckets) = value.get_mut("buckets").and_then(Value::as_array_mut) {
            for b in buckets {
                let count = b["count"].as_u64().unwrap_or(0);
                b["frequency"] = json!(count as f64 / draws.max(1) as f64);
            }
        }
        Ok(report("sample", &[("buckets[].count", "oracle"), ("buckets[].frequency", "oracle")], value))
    })?;
    ctx.emit(&v)?;
    Ok(0)
}

fn genprob(ctx: &Ctx, decomp: Option<&Path>, gamma_group: Option<&Path>, relations: usize, exhaustive: bool) -> Result<u8, CliError> {
    let (d, f) = match (decomp, gamma_group) {
        (Some(p), _) => {
            let raw: RelationModuleDecomposition = read_json(p).map_err(input)?;
            (RelationModuleDecomposition::new(raw.factors).map_err(input)?, None)
        }
        (None, Some(p)) => {
            let f = ctx.gamma_group(p)?;
            let full = ElemSet::full(f.order());
            (decompose_relation_group(&f, &full, &ctx.limits)?, Some(f))
        }
        (None, None) => return Err(CliError::Usage("genprob needs --decomp or --gamma-group".into())),
    };
    let material = json!({
        "command": "genprob",
        "decomposition": d,
        "relations": relations,
        "exhaustive": f.as_ref().filter(|_| exhaustive).map(gamma_group_to_json),
    });
    let v = ctx.cached(material, || {
        let p = generation_probability(&d, relations)?;
        let mut result = to_value(&p);
        result["decomposition"] = to_value(&d);
        if let (true, Some(f)) = (exhaustive, &f) {
            let e = exhaustive_generation_probability(f, &ElemSet::full(f.order()), relations, &ctx.limits)?;
            result["exhaustive"] = to_value(RationalString::big(&e));
            result["agree"] = json!(e == p.value);
        }
        Ok(report("genprob", &[("value", "formula"), ("exhaustive", "oracle"), ("decomposition", "evaluator-input")], result))
    })?;
    let value: RationalString = serde_json::from_value(v["result"]["value"].clone())
        .map_err(|e| CliError::Io(format!("cached report is malformed: {e}")))?;
    println!("{}", ratio_string(&value));
    if ctx.out.is_some() {
        ctx.emit(&v)?;
    }
    Ok(0)
}

fn formula(ctx: &Ctx, op: &str, data: Option<&Path>, n: u64, case: Option<&str>, degree: Option<u64>) -> Result<u8, CliError> {
    let load = || -> Result<LocalData, CliError> {
        let p = data.ok_or_else(|| CliError::Usage(format!("--op {op} needs --data")))?;
        read_json(p).map_err(input)
    };
    let usage = |e: Error| match e {
        Error::InvalidData(_) | Error::Precondition(_) => CliError::Usage(e.to_string()),
        e => CliError::Compute(e),
    };
    let small = |r: num_rational::Rational64| to_value(RationalString::small(&r));
    let (value, input_data, extra): (Value, Option<LocalData>, Value) = match op {
        "fin_pres_relation_bound" => {
            let degree = degree.ok_or_else(|| CliError::Usage("fin_pres_relation_bound needs --degree".into()))?;
            (json!(arith::fin_pres_relation_bound(n, degree).map_err(usage)?), None, json!({ "degree": degree }))
        }
        _ => {
            let d = load()?;
            let (value, extra) = match op {
                "log_chi" => {
                    let r = arith::log_chi(&d).map_err(usage)?;
                    (json!(r.value), json!({ "note": r.note }))
                }
                "delta_ff" => (json!(arith::delta_ff(&d).map_err(usage)?), Value::Null),
                "delta_nf_bound" => {
                    let r = arith::delta_nf_bound(&d).map_err(usage)?;
                    (json!(r.value), to_value(&r))
                }
                "mult_bound_main" => {
                    let case: BoundCase = case
                        .ok_or_else(|| CliError::Usage("mult_bound_main needs --case nf|ff|admissible".into()))?
                        .parse()
                        .map_err(usage)?;
                    (small(arith::mult_bound_main(n, &d, case).map_err(usage)?), json!({ "case": format!("{case:?}") }))
                }
                "mult_bound_other_signatures" => (small(arith::mult_bound_other_signatures(n, &d).map_err(usage)?), Value::Null),
                "mult_bound_roots_of_unity" => (small(arith::mult_bound_roots_of_unity(n, &d).map_err(usage)?), Value::Null),
                "positivity_threshold" => {
                    d.validate().map_err(usage)?;
                    (small(arith::positivity_threshold(n, d.dim_a, d.dim_a_gamma, d.endo_dim)), Value::Null)
                }
                other => return Err(CliError::Usage(format!("unknown formula op {other}"))),
            };
            (value, Some(d), extra)
        }
    };
    let result = json!({ "op": op, "n": n, "value": value, "detail": extra, "input": input_data });
    ctx.emit(&report("formula", &[("value", "formula"), ("detail", "formula"), ("input", "evaluator-input")], result))?;
    Ok(0)
}

fn selftest(ctx: &Ctx, seed: Option<u64>, only: &[u8]) -> Result<u8, CliError> {
    let seed = seed.or(ctx.config.seed).unwrap_or(DEFAULT_SEED);
    let ids: Vec<u8> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| !CRITERIA.iter().any(|c| c.0 == i)) {
        return Err(CliError::Usage(format!("no criterion {bad}")));
    }
    let start = Instant::now();
    let mut criteria = Vec::new();
    for id in ids {
        let t = Instant::now();
        let r = run_criterion(id, seed, &ctx.limits);
        eprintln!(
            "{} criterion {:>2} {}: {} instances, {:.2}s",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.instances,
            t.elapsed().as_secs_f64()
        );
        for line in r.detail.iter().filter(|l| l.starts_with("FAIL")) {
            eprintln!("    {line}");
        }
        criteria.push(r);
    }
    eprintln!("total {:.2}s", start.elapsed().as_secs_f64());
    let all_passed = criteria.iter().all(|c| c.passed);
    ctx.emit(&to_value(SelftestBundle { seed, criteria, all_passed }))?;
    Ok(if all_passed { 0 } else { 1 })
}
