//! Command-line front end: exponent sweeps, trade-off curves, simulation,
//! and the verification suite.
//!
//! Exit codes: 0 on success, 1 when a verified property fails, 2 on
//! configuration errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chandet::channel::{capacity, BinaryChannelPair, Dmc, InputDistribution};
use chandet::composite::ChannelSet;
use chandet::config::{self, AlphaSpec, ConfigFile, RateSpec};
use chandet::exponents::{bsc, gf, te, ExponentQuery, ExponentResult, TypeGrid, Witness};
use chandet::sim::{
    draw_shared_codebook, exact_error_probabilities, monte_carlo_estimate, EnsembleKind,
    EnsembleSpec,
};
use chandet::verify::{self, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "chandet",
    about = "Joint channel detection/decoding: exponents, trade-offs, simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Achievable exponents per (method, rate, alpha)
    Exponents(RunArgs),
    /// False-alarm versus misdetection trade-off curves
    Tradeoff(RunArgs),
    /// Exact or Monte Carlo error probabilities of a detector
    Simulate(SimArgs),
    /// Property suites with measured slack
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON config file (channels, sets, sweep parameters)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset: figure-1 (zero rate) or figure-2 (half capacity)
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated methods: te_rc, te_ex, lowrate_rc, highrate_rc,
    /// gf_rc, gf_ex, universal_rc
    #[arg(long)]
    methods: Option<String>,
    /// Alpha grid: a number or start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Rate in nats, or a capacity fraction as xC:0.5
    #[arg(long)]
    rate: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Conditional-type grid resolution for non-binary channels
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args, Clone)]
struct SimArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    rate: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Force exact enumeration instead of Monte Carlo
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args, Clone)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scales every tolerance (smaller is stricter)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Reduced fuzz counts
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exponents(args) => cmd_exponents(args),
        Command::Tradeoff(args) => cmd_tradeoff(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type CliError = Box<dyn std::error::Error>;
type CliResult<T> = Result<T, CliError>;

// ---------------------------------------------------------------------------
// configuration resolution
// ---------------------------------------------------------------------------

struct Runtime {
    w: Dmc,
    v: Dmc,
    px: InputDistribution,
    pair: Option<BinaryChannelPair>,
    w_set: Option<ChannelSet>,
    v_set: Option<ChannelSet>,
    rate: f64,
    alphas: Vec<f64>,
    methods: Vec<String>,
    resolution: usize,
}

fn load_config(path: &Option<PathBuf>) -> CliResult<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            Ok(config::parse_config(&text)?)
        }
    }
}

fn apply_preset(cfg: &mut ConfigFile, preset: &str) -> CliResult<()> {
    match preset {
        "figure-1" => {
            cfg.bsc = Some(config::BscShorthand { w: 0.1, v: 0.4 });
            cfg.rate = Some(RateSpec::Nats(0.0));
            cfg.alpha = Some(AlphaSpec::List(verify::figure1_alphas()));
            cfg.methods = Some(
                ["te_rc", "te_ex", "gf_rc", "gf_ex"].iter().map(|s| s.to_string()).collect(),
            );
        }
        "figure-2" => {
            cfg.bsc = Some(config::BscShorthand { w: 0.1, v: 0.4 });
            cfg.rate = Some(RateSpec::Tagged("xC:0.5".into()));
            cfg.alpha = Some(AlphaSpec::List(verify::figure2_alphas()));
            cfg.methods =
                Some(["te_rc", "lowrate_rc", "gf_rc"].iter().map(|s| s.to_string()).collect());
        }
        other => return Err(format!("unknown preset '{other}'").into()),
    }
    Ok(())
}

fn resolve_runtime(args: &RunArgs) -> CliResult<Runtime> {
    let mut cfg = load_config(&args.config)?;
    if let Some(p) = &args.preset {
        apply_preset(&mut cfg, p)?;
    }
    let channels = config::resolve_channels(&cfg)?;
    let c_w = capacity(&channels.px, &channels.w)?;
    let rate_spec = match &args.rate {
        Some(text) => RateSpec::parse_flag(text)?,
        None => cfg.rate.clone().unwrap_or(RateSpec::Nats(0.0)),
    };
    let rate = rate_spec.resolve(c_w)?;
    let alphas = match &args.alpha {
        Some(text) => AlphaSpec::parse_flag(text)?.values()?,
        None => cfg.alpha.clone().unwrap_or(AlphaSpec::Single(0.0)).values()?,
    };
    let methods: Vec<String> = match &args.methods {
        Some(m) => m.split(',').map(|s| s.trim().to_string()).collect(),
        None => cfg
            .methods
            .clone()
            .unwrap_or_else(|| vec!["te_rc".to_string()]),
    };
    let w_set = cfg.w_set.as_ref().map(|s| s.resolve()).transpose()?;
    let v_set = cfg.v_set.as_ref().map(|s| s.resolve()).transpose()?;
    Ok(Runtime {
        w: channels.w,
        v: channels.v,
        px: channels.px,
        pair: channels.pair,
        w_set,
        v_set,
        rate,
        alphas,
        methods,
        resolution: args.resolution.or(cfg.resolution).unwrap_or(60),
    })
}

// ---------------------------------------------------------------------------
// output tables
// ---------------------------------------------------------------------------

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

/// Nine significant digits, the emission precision of every float column.
fn fmt9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).clamp(0, 30) as usize;
    format!("{x:.decimals$}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt9).unwrap_or_default()
}

impl Table {
    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let items: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (k, v) in self.header.iter().zip(row) {
                    obj.insert(k.to_string(), serde_json::Value::String(v.clone()));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::to_string_pretty(&items).expect("string-valued table")
    }

    fn emit(&self, output: &Option<PathBuf>, format: &str) -> CliResult<()> {
        let text = match format {
            "csv" => self.to_csv(),
            "json" => self.to_json(),
            other => return Err(format!("unknown format '{other}'").into()),
        };
        match output {
            Some(path) => {
                fs::write(path, text).map_err(|e| format!("cannot write output: {e}"))?
            }
            None => print!("{text}"),
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// exponent evaluation
// ---------------------------------------------------------------------------

struct MethodEval {
    grid: Option<TypeGrid>,
    resolution: usize,
}

impl MethodEval {
    fn new(resolution: usize) -> Self {
        MethodEval { grid: None, resolution }
    }

    fn grid(&mut self, rt: &Runtime) -> CliResult<&TypeGrid> {
        if self.grid.is_none() {
            self.grid = Some(TypeGrid::new(&rt.px, rt.w.output_size(), self.resolution)?);
        }
        Ok(self.grid.as_ref().unwrap())
    }

    fn uniform_binary(rt: &Runtime) -> bool {
        rt.pair.is_some() && rt.px.len() == 2 && (rt.px.prob(0) - 0.5).abs() < 1e-12
    }

    /// False-alarm exponent of a method; `alpha` may take any sign here (the
    /// trade-off command evaluates the low-rate formula on both sides).
    fn value(
        &mut self,
        rt: &Runtime,
        method: &str,
        rate: f64,
        alpha: f64,
        swapped: bool,
    ) -> CliResult<ExponentResult> {
        let (w, v) = if swapped { (&rt.v, &rt.w) } else { (&rt.w, &rt.v) };
        let pair = rt.pair.map(|p| if swapped { p.swapped() } else { p });
        let query = || {
            ExponentQuery::new(rate, alpha, rt.px.clone(), w.clone(), v.clone())
                .map_err(CliError::from)
        };
        let fast = Self::uniform_binary(rt);
        let res = match method {
            "te_rc" => {
                if let (true, Some(p)) = (fast, pair) {
                    bsc::exponent_te_rc_bsc(&p, rate, alpha, bsc::DEFAULT_Q_STEP)?
                } else {
                    te::exponent_te_rc(&query()?, self.grid(rt)?)?
                }
            }
            "te_ex" => {
                if let (true, Some(p)) = (fast, pair) {
                    bsc::exponent_te_ex_bsc(&p, rate, alpha)?
                } else {
                    te::exponent_te_ex(&query()?, 33)?
                }
            }
            "lowrate_rc" => {
                if let (true, Some(p)) = (fast, pair) {
                    bsc::lowrate_formula_bsc(&p, rate, alpha, bsc::DEFAULT_Q_STEP)?
                } else {
                    te::lowrate_formula(&query()?, self.grid(rt)?)?
                }
            }
            "highrate_rc" => {
                let r = te::exponent_highrate_rc(&rt.px, w, v, alpha)?;
                if r.clamped {
                    eprintln!(
                        "warning: alpha {alpha} outside the achievable range of the \
                         output-statistics detector; clamped to the endpoint"
                    );
                }
                ExponentResult {
                    value: r.value,
                    branch: chandet::exponents::Branch::None,
                    witness: Witness::Tilted { mu: r.mu },
                }
            }
            "gf_rc" => gf::exponent_gf_rc(&query()?, 201, 201)?,
            "gf_ex" => gf::exponent_gf_ex(&query()?, 201, 8.0)?,
            "universal_rc" => {
                let (ws, vs) = match (&rt.w_set, &rt.v_set) {
                    (Some(a), Some(b)) => {
                        if swapped {
                            (b.clone(), a.clone())
                        } else {
                            (a.clone(), b.clone())
                        }
                    }
                    _ => {
                        return Err(
                            "universal_rc needs w_set and v_set in the config".into()
                        )
                    }
                };
                let grid = self.grid(rt)?;
                te::exponent_universal_rc(rate, alpha, &rt.px, &ws, &vs, w, v, grid)?
            }
            other => return Err(format!("unknown method '{other}'").into()),
        };
        Ok(res)
    }

    /// Misdetection exponent: formula re-evaluated with swapped channels and
    /// negated alpha for the type-enumeration detectors, value minus alpha
    /// for the Gallager-style and output-statistics bounds.
    fn md_value(
        &mut self,
        rt: &Runtime,
        method: &str,
        rate: f64,
        alpha: f64,
        fa_value: f64,
    ) -> CliResult<f64> {
        match method {
            "te_rc" | "lowrate_rc" | "universal_rc" => {
                Ok(self.value(rt, method, rate, -alpha, true)?.value)
            }
            _ => Ok(fa_value - alpha),
        }
    }
}

fn cmd_exponents(args: RunArgs) -> CliResult<ExitCode> {
    let rt = resolve_runtime(&args)?;
    let mut eval = MethodEval::new(rt.resolution);
    let mut table = Table {
        header: vec![
            "method",
            "R",
            "alpha",
            "value",
            "branch",
            "witness_q_tilde",
            "witness_q_bar",
            "grid_resolution",
        ],
        rows: Vec::new(),
    };
    for method in &rt.methods {
        for &alpha in &rt.alphas {
            let res = eval.value(&rt, method, rt.rate, alpha, false)?;
            table.rows.push(vec![
                method.clone(),
                fmt9(rt.rate),
                fmt9(alpha),
                fmt9(res.value),
                res.branch.label().to_string(),
                fmt_opt(res.witness.q_tilde_summary()),
                fmt_opt(res.witness.q_bar_summary()),
                rt.resolution.to_string(),
            ]);
        }
    }
    table.emit(&args.output, &args.format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_tradeoff(args: RunArgs) -> CliResult<ExitCode> {
    let rt = resolve_runtime(&args)?;
    let mut eval = MethodEval::new(rt.resolution);
    let mut table = Table {
        header: vec!["method", "R", "alpha", "e_fa", "e_md"],
        rows: Vec::new(),
    };
    for method in &rt.methods {
        for &alpha in &rt.alphas {
            let fa = eval.value(&rt, method, rt.rate, alpha, false)?.value;
            let md = eval.md_value(&rt, method, rt.rate, alpha, fa)?;
            table.rows.push(vec![
                method.clone(),
                fmt9(rt.rate),
                fmt9(alpha),
                fmt9(fa),
                fmt9(md),
            ]);
        }
    }
    table.emit(&args.output, &args.format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimArgs) -> CliResult<ExitCode> {
    let cfg = load_config(&args.config)?;
    let channels = config::resolve_channels(&cfg)?;
    let c_w = capacity(&channels.px, &channels.w)?;
    let rate = match &args.rate {
        Some(text) => RateSpec::parse_flag(text)?.resolve(c_w)?,
        None => cfg.rate.clone().unwrap_or(RateSpec::Nats(0.0)).resolve(c_w)?,
    };
    let alphas = match &args.alpha {
        Some(text) => AlphaSpec::parse_flag(text)?.values()?,
        None => cfg.alpha.clone().unwrap_or(AlphaSpec::Single(0.0)).values()?,
    };
    let seed = args.seed.or(cfg.seed).unwrap_or(1);
    let trials = args.trials.or(cfg.trials).unwrap_or(100_000);
    let ensemble = cfg.ensemble.clone().unwrap_or_default();
    let kind = match ensemble.kind.as_deref() {
        None | Some("fixed_composition") => EnsembleKind::FixedComposition,
        Some("iid") => EnsembleKind::Iid,
        Some(other) => return Err(format!("unknown ensemble kind '{other}'").into()),
    };
    let ns: Vec<usize> = match (&ensemble.ns, ensemble.n) {
        (Some(list), _) => list.clone(),
        (None, Some(n)) => vec![n],
        (None, None) => vec![8],
    };
    let exact_mode = args.exact || ensemble.mode.as_deref() == Some("exact");
    let fresh = ensemble.fresh_code.unwrap_or(true);
    let detector = cfg.detector.clone().unwrap_or(config::DetectorSpec {
        rule: "asymptotic".into(),
        alpha: None,
        beta: None,
        a: None,
        b: None,
    });

    let mut table = Table {
        header: vec![
            "n", "detector", "alpha", "p_fa", "p_md", "p_ie", "stderr_fa", "stderr_md",
            "stderr_ie", "trials", "seed",
        ],
        rows: Vec::new(),
    };
    for &n in &ns {
        for &alpha in &alphas {
            let spec = EnsembleSpec { kind, px: channels.px.clone(), n, rate, seed };
            let mut det = detector.clone();
            det.alpha = Some(alpha);
            let rule = det.build(
                &channels.w,
                &channels.v,
                &channels.px,
                n,
                None,
                None,
            )?;
            let row = if exact_mode {
                let cb = draw_shared_codebook(&spec)?;
                match exact_error_probabilities(&cb, &rule, &channels.w, &channels.v) {
                    Ok(p) => vec![
                        n.to_string(),
                        rule.name().to_string(),
                        fmt9(alpha),
                        fmt9(p.p_fa),
                        fmt9(p.p_md),
                        fmt9(p.p_ie),
                        "0".into(),
                        "0".into(),
                        "0".into(),
                        "0".into(),
                        seed.to_string(),
                    ],
                    Err(e) => {
                        eprintln!("warning: n={n} alpha={alpha}: {e}");
                        vec![
                            n.to_string(),
                            rule.name().to_string(),
                            fmt9(alpha),
                            "nan".into(),
                            "nan".into(),
                            "nan".into(),
                            "0".into(),
                            "0".into(),
                            "0".into(),
                            "0".into(),
                            seed.to_string(),
                        ]
                    }
                }
            } else {
                let est =
                    monte_carlo_estimate(&spec, &rule, &channels.w, &channels.v, trials, fresh)?;
                vec![
                    n.to_string(),
                    rule.name().to_string(),
                    fmt9(alpha),
                    fmt9(est.fa.mean),
                    fmt9(est.md.mean),
                    fmt9(est.ie.mean),
                    fmt9(est.fa.stderr),
                    fmt9(est.md.stderr),
                    fmt9(est.ie.stderr),
                    trials.to_string(),
                    seed.to_string(),
                ]
            };
            table.rows.push(row);
        }
    }
    table.emit(&args.output, &args.format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<ExitCode> {
    // a config, when supplied, must itself validate
    let cfg = load_config(&args.config)?;
    if args.config.is_some() {
        config::resolve_channels(&cfg)?;
    }
    let opts = VerifyOptions {
        seed: args.seed.unwrap_or(VerifyOptions::default().seed),
        tolerance_scale: args.tolerance.unwrap_or(1.0),
        quick: args.quick,
    };
    let reports = verify::run_all(&opts);
    let mut all_pass = true;
    for r in &reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {} (slack {:.3e} vs tolerance {:.3e}) {}",
            r.name, r.slack, r.tolerance, r.detail
        );
        all_pass &= r.pass;
    }
    if all_pass {
        println!("all {} properties passed", reports.len());
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
