mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use helly_core::census::{
    c_z2_profile, census_up_to, expand_to_maximal, maximal_membership, CensusCache, CensusError,
    Z2Profile,
};
use helly_core::constants::{
    andrews_constants, verify_andrews_estimates, verify_upper_chain, Check, CheckReport, DimRange,
    Verdict, DEFAULT_PRECISION, MIN_PRECISION,
};
use helly_core::engine::{bound_audit, helly_profile, EngineError, ExtInt, HellyProfile, SiteSpec};
use helly_core::lattice::{convex_hull, LatticeError};
use helly_core::witnesses::{
    lower_bound_witness, small_k_witness, verify_witness, ConstructionRecipe, WitnessError,
    REALIZATION_LIMIT,
};

use render::{csv, profile_csv, step_svg};

#[derive(Parser, Debug)]
#[command(
    name = "helly",
    version,
    about = "Quantitative Helly numbers of lattice point sets"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Treat inconclusive certifications as failures
    #[arg(long, global = true)]
    strict: bool,
    /// Starting precision in bits for certified enclosures
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// g and c for a box grid such as 3x3 or 2x2x2
    Grid {
        #[arg(long)]
        dims: SiteSpec,
        #[arg(long)]
        kmax: usize,
    },
    /// g and c for Z^2 from the polygon census
    Census {
        #[arg(long)]
        k: usize,
        /// Census cache directory
        #[arg(long, env = "HELLY_CENSUS_CACHE")]
        cache: Option<PathBuf>,
        /// Also write the step plot to this file
        #[arg(long)]
        emit_svg: Option<PathBuf>,
    },
    /// Build and verify explicit extremal polytopes
    Witness {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: usize,
        /// Required for the lower-bound suite; limits small-k to one k
        #[arg(long)]
        k: Option<u64>,
    },
    /// Maximal polygons with k interior lattice points, k = 1..=K
    Maximal {
        #[arg(long)]
        k: usize,
        #[arg(long, env = "HELLY_CENSUS_CACHE")]
        cache: Option<PathBuf>,
    },
    /// Certify the constant estimates behind Andrews' bound and the upper bound chain
    Constants {
        #[arg(long, default_value = "2..12")]
        n_range: DimRange,
    },
    /// Check known upper bounds against a computed profile
    Audit {
        #[arg(long)]
        site: SiteSpec,
        #[arg(long)]
        kmax: usize,
        /// Partition count for the Tverberg-type value
        #[arg(long, default_value_t = 2)]
        m: u64,
        #[arg(long, env = "HELLY_CENSUS_CACHE")]
        cache: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    #[value(alias = "theorem4")]
    SmallK,
    Lowerbound,
}

/// Exit status of a completed run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Pass,
    Finding,
}

impl Outcome {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Finding
        }
    }
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: "usage",
            message: message.into(),
            code: 2,
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let kind = match e {
            EngineError::BudgetExceeded { .. } => "budget",
            EngineError::Lattice(_) => "lattice",
            EngineError::Inconsistent(_) => "inconsistent",
        };
        let code = if kind == "inconsistent" { 1 } else { 2 };
        Self {
            kind,
            message: e.to_string(),
            code,
        }
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        let kind = match e {
            CensusError::Io(_) => "io",
            CensusError::NotFound(_)
            | CensusError::Incomplete(_)
            | CensusError::MissingLower { .. } => "cache",
            CensusError::Header(_)
            | CensusError::Version(_)
            | CensusError::Line { .. }
            | CensusError::Checksum { .. } => "census-file",
            _ => "census",
        };
        Self {
            kind,
            message: e.to_string(),
            code: 2,
        }
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        let (kind, code) = match e {
            WitnessError::Mismatch { .. } | WitnessError::Arithmetic(_) => ("verification", 1),
            WitnessError::TooLarge(_) => ("too-large", 2),
            WitnessError::Dimension { .. } => ("usage", 2),
            WitnessError::Lattice(_) => ("lattice", 2),
        };
        Self {
            kind,
            message: e.to_string(),
            code,
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Self {
            kind: "lattice",
            message: e.to_string(),
            code: 2,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            kind: "io",
            message: e.to_string(),
            code: 2,
        }
    }
}

type Run = Result<Outcome, Failure>;

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn profile_json(p: &HellyProfile) -> Value {
    json!({
        "site": p.site,
        "k_max": p.k_max,
        "g": p.g,
        "c": p.c,
        "witnesses": p.witnesses,
        "dim": p.dim,
        "site_cardinality": p.site_cardinality,
    })
}

fn emit_profile(opts: &GlobalOpts, p: &HellyProfile, title: &str, extra: Value) {
    match opts.format {
        Format::Csv => print!("{}", profile_csv(&p.g, &p.c)),
        Format::Json => {
            let mut v = profile_json(p);
            if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
                m.extend(e);
            }
            print_json(&v);
        }
        Format::Svg => print!("{}", step_svg(title, &p.g, &p.c)),
    }
}

fn cmd_grid(opts: &GlobalOpts, dims: &SiteSpec, kmax: usize) -> Run {
    let Some(site) = dims.to_site()? else {
        return Err(Failure::usage(
            "grid needs box dimensions such as 3x3; use census for z2",
        ));
    };
    let p = helly_profile(&site, kmax, Some(&dims.to_string()))?;
    emit_profile(opts, &p, &format!("g and c for the {dims} grid"), json!({}));
    Ok(Outcome::Pass)
}

fn z2_profile(k: usize, cache: Option<&PathBuf>) -> Result<Z2Profile, Failure> {
    let cache = cache.map(CensusCache::new);
    let census = census_up_to(k, cache.as_ref(), |i, n, hit| {
        eprintln!(
            "interior {i}: {n} classes ({})",
            if hit { "cached" } else { "computed" }
        );
    })?;
    Ok(c_z2_profile(k, &census)?)
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_census(opts: &GlobalOpts, k: usize, cache: Option<&PathBuf>, svg: Option<&PathBuf>) -> Run {
    let z = z2_profile(k, cache)?;
    let title = "g(Z^2,k) and c(Z^2,k)";
    if let Some(path) = svg {
        std::fs::write(path, step_svg(title, &z.profile.g, &z.profile.c))?;
    }
    if opts.format == Format::Csv {
        eprintln!("drops: {}", join(&z.drops));
    }
    emit_profile(
        opts,
        &z.profile,
        title,
        json!({ "drops": z.drops, "c_exceeds_g": z.c_exceeds_g }),
    );
    Ok(Outcome::Pass)
}

fn cmd_small_k(opts: &GlobalOpts, n: usize, only: Option<u64>) -> Run {
    let ks: Vec<usize> = match only {
        Some(k) if k <= 4 => vec![k as usize],
        Some(k) => {
            return Err(Failure::usage(format!(
                "the small-k suite covers k = 0..=4, got {k}"
            )))
        }
        None => (0..=4).collect(),
    };
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut ok = true;
    for k in ks {
        let recipe = ConstructionRecipe::for_k(n, k).expect("k <= 4");
        let (status, verts, nonvert) = match small_k_witness(&recipe) {
            Ok(p) => {
                let c = helly_core::lattice::census(&p, helly_core::lattice::Region::FullLattice)?;
                ("pass", c.vertex_count as u128, c.nonvertex_count as u128)
            }
            Err(WitnessError::Mismatch { .. }) => {
                ok = false;
                ("fail", 0, 0)
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(vec![
            n.to_string(),
            k.to_string(),
            format!("{:?}", recipe.kind),
            verts.to_string(),
            nonvert.to_string(),
            recipe.expected_vertices().to_string(),
            recipe.expected_nonvertex().to_string(),
            status.to_string(),
        ]);
        records.push(json!({
            "n": n, "k": k, "recipe": recipe.kind,
            "vertices": verts, "nonvertex": nonvert,
            "expected_vertices": recipe.expected_vertices(),
            "expected_nonvertex": recipe.expected_nonvertex(),
            "status": status,
        }));
    }
    match opts.format {
        Format::Json => print_json(&json!({ "suite": "small-k", "results": records })),
        _ => print!(
            "{}",
            csv(
                &[
                    "n",
                    "k",
                    "recipe",
                    "vertices",
                    "nonvertex",
                    "expected_vertices",
                    "expected_nonvertex",
                    "status"
                ],
                &rows
            )
        ),
    }
    Ok(Outcome::from_ok(ok))
}

fn cmd_lowerbound(opts: &GlobalOpts, n: usize, k: u64) -> Run {
    let mut w = lower_bound_witness(n, k)?;
    let box_ok = w.realized.is_some();
    let status = if box_ok {
        match verify_witness(&w) {
            Ok(_) => {
                w.verified = true;
                "verified"
            }
            Err(WitnessError::Mismatch { .. }) => "fail",
            Err(e) => return Err(e.into()),
        }
    } else {
        "formula-only"
    };
    match opts.format {
        Format::Json => {
            let mut v = to_value(&w);
            v["status"] = json!(status);
            v["realization_limit"] = json!(REALIZATION_LIMIT.to_string());
            print_json(&v);
        }
        _ => print!(
            "{}",
            csv(
                &[
                    "n",
                    "k",
                    "t",
                    "s",
                    "k_prime",
                    "vertices",
                    "helly_lower_bound",
                    "status"
                ],
                &[vec![
                    n.to_string(),
                    k.to_string(),
                    w.t.to_string(),
                    w.s.to_string(),
                    w.k_prime.to_string(),
                    w.predicted_vertices.to_string(),
                    w.helly_lower_bound.to_string(),
                    status.to_string(),
                ]]
            )
        ),
    }
    Ok(Outcome::from_ok(status != "fail"))
}

fn cmd_maximal(opts: &GlobalOpts, kmax: usize, cache: Option<&PathBuf>) -> Run {
    if kmax == 0 {
        return Err(Failure::usage("maximal needs k >= 1"));
    }
    let z = z2_profile(kmax, cache)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut ok = true;
    for k in 1..=kmax {
        let c = z.profile.c[k];
        if z.profile.g[k] != c {
            return Err(Failure {
                kind: "unsupported",
                message: format!(
                    "c(Z^2,{k}) exceeds g(Z^2,{k}); no polygon with k non-vertex points attains it"
                ),
                code: 2,
            });
        }
        let w = z.profile.witnesses[k]
            .as_ref()
            .expect("finite g has a witness");
        let m = expand_to_maximal(&convex_hull(w)?, k)?;
        let r = maximal_membership(&m.vertices()?, k)?;
        let matches = ExtInt::Fin(r.facets as i64) == c;
        ok &= r.member && matches;
        rows.push(vec![
            k.to_string(),
            c.to_string(),
            r.facets.to_string(),
            r.interior.to_string(),
            r.member.to_string(),
        ]);
        records.push(json!({
            "k": k, "c": c, "facets": r.facets, "interior": r.interior,
            "member": r.member, "inequalities": m.facets,
        }));
    }
    match opts.format {
        Format::Json => print_json(&json!({ "results": records })),
        _ => print!(
            "{}",
            csv(&["k", "c", "facets", "interior", "member"], &rows)
        ),
    }
    Ok(Outcome::from_ok(ok))
}

fn check_rows(section: &str, r: &CheckReport, rows: &mut Vec<Vec<String>>) {
    for c in &r.checks {
        rows.push(check_row(section, c));
    }
}

fn check_row(section: &str, c: &Check) -> Vec<String> {
    vec![
        section.to_string(),
        c.n.to_string(),
        format!("\"{}\"", c.name),
        format!("{:.6e}", c.lhs.midpoint_f64()),
        format!("{:.6e}", c.rhs.midpoint_f64()),
        c.verdict.to_string(),
    ]
}

fn cmd_constants(opts: &GlobalOpts, range: DimRange) -> Run {
    let b = verify_andrews_estimates(range.iter(), opts.precision);
    let u = verify_upper_chain(range.iter(), opts.precision);
    let verdict = b.verdict().and(u.verdict());
    match opts.format {
        Format::Json => {
            let reports: Vec<Value> = range
                .iter()
                .map(|n| to_value(&andrews_constants(n, b.precision)))
                .collect();
            print_json(&json!({
                "n_range": range.to_string(),
                "verdict": verdict,
                "andrews": b,
                "upper_chain": u,
                "constants": reports,
            }));
        }
        _ => {
            let mut rows = Vec::new();
            check_rows("andrews", &b, &mut rows);
            check_rows("upper_chain", &u, &mut rows);
            print!(
                "{}",
                csv(&["section", "n", "check", "lhs", "rhs", "verdict"], &rows)
            );
        }
    }
    let open = b.inconclusive() + u.inconclusive();
    if open > 0 {
        eprintln!(
            "{open} checks inconclusive at precision {}",
            b.precision.max(u.precision)
        );
    }
    Ok(match verdict {
        Verdict::Pass => Outcome::Pass,
        Verdict::Fail => Outcome::Finding,
        Verdict::Inconclusive if opts.strict => Outcome::Finding,
        Verdict::Inconclusive => Outcome::Pass,
    })
}

fn cmd_audit(
    opts: &GlobalOpts,
    site: &SiteSpec,
    kmax: usize,
    m: u64,
    cache: Option<&PathBuf>,
) -> Run {
    let (profile, n) = match site {
        SiteSpec::Lattice(2) => (z2_profile(kmax, cache)?.profile, 2),
        SiteSpec::Lattice(n) => {
            return Err(Failure::usage(format!(
                "audit of z{n} is not supported; use z2 or a grid"
            )))
        }
        SiteSpec::Grid(_) => {
            let s = site.to_site()?.expect("grid");
            (
                helly_profile(&s, kmax, Some(&site.to_string()))?,
                site.dim(),
            )
        }
    };
    let report = bound_audit(&profile, n, m, true)?;
    let ok = report.iter().all(|r| r.all_pass());
    let opt = |v: Option<i128>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
    match opts.format {
        Format::Json => print_json(&json!({
            "site": profile.site, "k_max": kmax, "m": m, "pass": ok, "rows": report,
        })),
        _ => {
            let rows: Vec<Vec<String>> = report
                .iter()
                .map(|r| {
                    vec![
                        r.k.to_string(),
                        r.c_value.to_string(),
                        r.halving_bound.to_string(),
                        r.linear_bound.to_string(),
                        opt(r.aliev_bound),
                        opt(r.bell_bound),
                        opt(r.tverberg_value),
                        r.aliev_equal.unwrap_or(false).to_string(),
                        if r.all_pass() { "pass" } else { "fail" }.to_string(),
                    ]
                })
                .collect();
            print!(
                "{}",
                csv(
                    &[
                        "k",
                        "c",
                        "halving",
                        "linear",
                        "aliev",
                        "bell",
                        "tverberg",
                        "aliev_tight",
                        "status"
                    ],
                    &rows
                )
            );
        }
    }
    Ok(Outcome::from_ok(ok))
}

fn run(cli: &Cli) -> Run {
    let opts = &cli.opts;
    if opts.precision < MIN_PRECISION {
        return Err(Failure::usage(format!(
            "precision must be at least {MIN_PRECISION} bits"
        )));
    }
    if opts.format == Format::Svg
        && !matches!(cli.command, Command::Grid { .. } | Command::Census { .. })
    {
        return Err(Failure::usage(
            "svg output is available for grid and census",
        ));
    }
    if let Some(t) = opts.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(usize::from(t))
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Grid { dims, kmax } => cmd_grid(opts, dims, *kmax),
        Command::Census { k, cache, emit_svg } => {
            cmd_census(opts, *k, cache.as_ref(), emit_svg.as_ref())
        }
        Command::Witness { suite, n, k } => match suite {
            Suite::SmallK => cmd_small_k(opts, *n, *k),
            Suite::Lowerbound => {
                let k = k.ok_or_else(|| Failure::usage("the lowerbound suite needs --k"))?;
                cmd_lowerbound(opts, *n, k)
            }
        },
        Command::Maximal { k, cache } => cmd_maximal(opts, *k, cache.as_ref()),
        Command::Constants { n_range } => cmd_constants(opts, *n_range),
        Command::Audit {
            site,
            kmax,
            m,
            cache,
        } => cmd_audit(opts, site, *kmax, *m, cache.as_ref()),
    }
}

fn wants_json(args: &[String]) -> bool {
    args.windows(2)
        .any(|w| w[0] == "--format" && w[1] == "json")
        || args.iter().any(|a| a == "--format=json")
}

fn report_failure(json: bool, f: &Failure) -> ExitCode {
    if json {
        eprintln!(
            "{}",
            json!({ "error": { "kind": f.kind, "message": f.message, "exit_code": f.code } })
        );
    } else {
        eprintln!("error: {}", f.message);
    }
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let json = wants_json(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if json {
                return report_failure(
                    json,
                    &Failure::usage(e.kind().to_string() + ": " + &e.to_string()),
                );
            }
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Finding) => ExitCode::from(1),
        Err(f) => report_failure(cli.opts.format == Format::Json, &f),
    }
}
