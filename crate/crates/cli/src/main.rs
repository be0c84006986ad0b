//! `mdc` command line: analyze two-level diversity coding instances, print
//! rate regions, build coding schemes, sweep the brute-force oracle, run
//! seeded blockage simulations, and export combination-network reductions.
//!
//! All output is deterministic given flags and seeds. JSON documents are
//! printed with sorted keys so repeated runs are byte-identical.
//!
//! Exit codes: 0 success, 2 config or assumption violation, 3 unachievable
//! target or unsupported case, 4 invalid flag value, 5 degenerate instance.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use mdc_core::capacity::{check_c1, classify, region, Exactness};
use mdc_core::codes::{build_scheme, CodingScheme, SchemeJson};
use mdc_core::combnet::reduce_to_combination_network;
use mdc_core::field::FieldOrder;
use mdc_core::oracle::sweep_rate_grid;
use mdc_core::patterns::{
    decode_probability, validate_grouping, BlockagePattern, Grouping, NetworkConfig,
};
use mdc_core::rational::{parse_rational, rat_from_f64, rat_int, rat_to_f64, rat_to_string};
use mdc_core::simulate::{chi_square_report, compare_with_analytic, run_monte_carlo};
use mdc_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "mdc", version, about = "Two-level priority diversity coding tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an instance and report assumptions, case, region, and decode probabilities
    Analyze {
        /// Instance config file (JSON)
        config: PathBuf,
        /// Human-readable text instead of JSON
        #[arg(long)]
        pretty: bool,
    },
    /// Print rate-region membership over a grid as CSV, plus corner-point rows
    Region {
        /// Instance config file (JSON)
        config: PathBuf,
        /// Grid spacing in rate units (exact rational such as 1/4 or 0.5)
        #[arg(long, default_value = "1/4")]
        grid_step: String,
    },
    /// Build a coding scheme hitting a target rate pair and print it as JSON
    Scheme {
        /// Instance config file (JSON)
        config: PathBuf,
        /// Target rate pair "r1,r2", each coordinate an exact rational
        #[arg(long)]
        target: String,
    },
    /// Run seeded Monte Carlo blockage trials for a stored scheme
    Simulate {
        /// Instance config file (JSON)
        config: PathBuf,
        /// Scheme file (JSON, as printed by `mdc scheme`)
        #[arg(long)]
        scheme: PathBuf,
        /// Number of trials
        #[arg(long)]
        trials: u64,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force achievable rate pairs at small block lengths and compare with the region
    Verify {
        /// Instance config file (JSON)
        config: PathBuf,
        /// Largest block length to try
        #[arg(long, default_value_t = 2)]
        max_n: usize,
        /// Field order (2, 3, 4, or 256)
        #[arg(long, default_value_t = 2)]
        field: usize,
        /// RNG seed for randomized fallback searches
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample budget per rate pair when exhaustive search is infeasible
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Output format: json or csv
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Export the combination-network reduction
    ExportCombnet {
        /// Instance config file (JSON)
        config: PathBuf,
        /// Output format: dot or json
        #[arg(long, default_value = "dot")]
        format: String,
    },
}

/// On-disk instance description. `capacity` defaults to 1.0 so rates are in
/// capacity units; pattern strings are leftmost = path 1, '1' = unblocked.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceConfig {
    num_paths: usize,
    capacity: Option<f64>,
    blockage_probs: Vec<f64>,
    #[serde(default)]
    group1: Vec<String>,
    #[serde(default)]
    group2: Vec<String>,
}

struct CmdError {
    code: i32,
    message: String,
}

impl CmdError {
    fn new(code: i32, message: impl Into<String>) -> CmdError {
        CmdError {
            code,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> CmdError {
        let code = match &e {
            CoreError::UnachievableTarget(_) | CoreError::UnsupportedCase(_) => 3,
            CoreError::DegenerateInstance(_) => 5,
            _ => 2,
        };
        CmdError::new(code, e.to_string())
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let _ = e.print();
            process::exit(code);
        }
    };
    match run(cli.command) {
        // ignore broken pipes so `mdc ... | head` exits quietly
        Ok(out) => {
            let _ = writeln!(std::io::stdout(), "{out}");
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            process::exit(e.code);
        }
    }
}

fn run(command: Command) -> Result<String, CmdError> {
    match command {
        Command::Analyze { config, pretty } => cmd_analyze(&config, pretty),
        Command::Region { config, grid_step } => cmd_region(&config, &grid_step),
        Command::Scheme { config, target } => cmd_scheme(&config, &target),
        Command::Simulate {
            config,
            scheme,
            trials,
            seed,
        } => cmd_simulate(&config, &scheme, trials, seed),
        Command::Verify {
            config,
            max_n,
            field,
            seed,
            budget,
            format,
        } => cmd_verify(&config, max_n, field, seed, budget, &format),
        Command::ExportCombnet { config, format } => cmd_export_combnet(&config, &format),
    }
}

fn load_instance(path: &Path) -> Result<(NetworkConfig, Grouping), CmdError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CmdError::new(2, format!("cannot read {}: {e}", path.display())))?;
    let ic: InstanceConfig = serde_json::from_str(&raw)
        .map_err(|e| CmdError::new(2, format!("invalid config {}: {e}", path.display())))?;
    let capacity = rat_from_f64(ic.capacity.unwrap_or(1.0))?;
    let cfg = NetworkConfig::new(ic.num_paths, capacity, ic.blockage_probs)?;
    let parse_group = |name: &str, raw: &[String]| -> Result<Vec<BlockagePattern>, CmdError> {
        raw.iter()
            .enumerate()
            .map(|(i, s)| {
                s.parse::<BlockagePattern>()
                    .map_err(|e| CmdError::new(2, format!("{name}[{i}]: {e}")))
            })
            .collect()
    };
    let g = Grouping::new(
        parse_group("group1", &ic.group1)?,
        parse_group("group2", &ic.group2)?,
    )?;
    if let Some(l) = g.num_paths() {
        if l != cfg.num_paths() {
            return Err(CmdError::new(
                2,
                format!(
                    "patterns have {l} paths but num_paths is {}",
                    cfg.num_paths()
                ),
            ));
        }
    }
    Ok((cfg, g))
}

fn pattern_strings(set: &std::collections::BTreeSet<BlockagePattern>) -> Vec<String> {
    set.iter().map(|b| b.to_string()).collect()
}

fn canonical(value: &Value) -> Result<String, CmdError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CmdError::new(2, format!("cannot serialize output: {e}")))
}

fn to_value<T: serde::Serialize>(t: &T) -> Result<Value, CmdError> {
    serde_json::to_value(t).map_err(|e| CmdError::new(2, format!("cannot serialize output: {e}")))
}

fn cmd_analyze(config: &Path, pretty: bool) -> Result<String, CmdError> {
    let (cfg, g) = load_instance(config)?;
    let report = validate_grouping(&g, cfg.num_paths());
    if !report.all_hold() {
        return Err(CmdError::new(
            2,
            format!("inadmissible grouping: {}", report.violations.join("; ")),
        ));
    }
    let label = classify(&g, &cfg)?;
    let reg = region(&g, &cfg)?;
    let c1 = if g.group2().is_empty() {
        None
    } else {
        Some(check_c1(&g)?)
    };
    let p1 = decode_probability(&g, &cfg, 1)?;
    let p2 = decode_probability(&g, &cfg, 2)?;
    let inequalities: Vec<String> = reg
        .inequalities()
        .iter()
        .map(|q| q.display(cfg.capacity()))
        .collect();

    if pretty {
        let mut out = String::new();
        out.push_str(&format!(
            "instance: {} paths, capacity {}\n",
            cfg.num_paths(),
            rat_to_string(cfg.capacity())
        ));
        let probs: Vec<String> = cfg.blockage_probs().iter().map(f64::to_string).collect();
        out.push_str(&format!("  blockage probabilities: {}\n", probs.join(", ")));
        out.push_str(&format!(
            "  group 1 (high-priority message): {}\n",
            pattern_strings(g.group1()).join(", ")
        ));
        out.push_str(&format!(
            "  group 2 (both messages): {}\n\n",
            pattern_strings(g.group2()).join(", ")
        ));
        out.push_str("assumptions: all hold\n");
        if let (Some(k), Some(m)) = (report.kappa1, &report.minimizer1) {
            out.push_str(&format!("  kappa1 = {k} (worst pattern {m})\n"));
        }
        if let (Some(k), Some(m)) = (report.kappa2, &report.minimizer2) {
            out.push_str(&format!("  kappa2 = {k} (worst pattern {m})\n"));
        }
        out.push_str(&format!("\ncase: {label}\n"));
        match &c1 {
            Some(v) if v.holds => {
                let w = v.witness.as_ref().map_or_else(String::new, |w| {
                    w.iter()
                        .map(|b| b.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                });
                out.push_str(&format!("coverage condition: holds (witness: {w})\n"));
            }
            Some(_) => out.push_str("coverage condition: does not hold\n"),
            None => out.push_str("coverage condition: not applicable (group 2 empty)\n"),
        }
        out.push_str(&format!("region ({}):\n", reg.exactness()));
        for q in &inequalities {
            out.push_str(&format!("  {q}\n"));
        }
        let corners: Vec<String> = reg
            .corner_points()
            .iter()
            .map(|(a, b)| format!("({}, {})", rat_to_string(a), rat_to_string(b)))
            .collect();
        out.push_str(&format!("  corners: {}\n\n", corners.join(", ")));
        out.push_str("analytic decode probability:\n");
        out.push_str(&format!("  high-priority message: {p1:.6}\n"));
        out.push_str(&format!("  both messages:         {p2:.6}\n"));
        return Ok(out.trim_end().to_string());
    }

    let corner_points: Vec<Value> = reg
        .corner_points()
        .iter()
        .map(|(a, b)| {
            json!({
                "r1": rat_to_string(a),
                "r1_float": rat_to_f64(a),
                "r2": rat_to_string(b),
                "r2_float": rat_to_f64(b),
            })
        })
        .collect();
    let coverage = c1.map(|v| {
        json!({
            "holds": v.holds,
            "witness": v.witness.map(|w| {
                w.iter().map(|b| b.to_string()).collect::<Vec<_>>()
            }),
        })
    });
    let doc = json!({
        "assumptions": {
            "a1_holds": report.a1_holds,
            "a2_holds": report.a2_holds,
            "rule_111_holds": report.rule_111_holds,
            "violations": report.violations,
        },
        "capacity": rat_to_string(cfg.capacity()),
        "case": label.as_str(),
        "corner_points": corner_points,
        "coverage_condition": coverage,
        "decode_probability_u1": p1,
        "decode_probability_u2": p2,
        "exactness": reg.exactness().as_str(),
        "group1": pattern_strings(g.group1()),
        "group2": pattern_strings(g.group2()),
        "inequalities": inequalities,
        "kappa1": report.kappa1,
        "kappa2": report.kappa2,
        "minimizer1": report.minimizer1.as_ref().map(|b| b.to_string()),
        "minimizer2": report.minimizer2.as_ref().map(|b| b.to_string()),
        "num_paths": cfg.num_paths(),
    });
    canonical(&doc)
}

fn cmd_region(config: &Path, grid_step: &str) -> Result<String, CmdError> {
    let step =
        parse_rational(grid_step).map_err(|e| CmdError::new(4, format!("--grid-step: {e}")))?;
    if step <= rat_int(0) {
        return Err(CmdError::new(4, "--grid-step must be positive"));
    }
    let (cfg, g) = load_instance(config)?;
    let reg = region(&g, &cfg)?;
    let mut limit = cfg.capacity().clone();
    for (a, b) in reg.corner_points() {
        limit = limit.max(a.clone()).max(b.clone());
    }
    limit += &step;
    let mut out = String::from("r1,r2,inside,kind\n");
    let mut r1 = rat_int(0);
    while r1 <= limit {
        let mut r2 = rat_int(0);
        while r2 <= limit {
            let inside = reg.contains(&r1, &r2)?;
            out.push_str(&format!(
                "{},{},{},grid\n",
                rat_to_f64(&r1),
                rat_to_f64(&r2),
                u8::from(inside)
            ));
            r2 += &step;
        }
        r1 += &step;
    }
    for (a, b) in reg.corner_points() {
        out.push_str(&format!("{},{},1,corner\n", rat_to_f64(a), rat_to_f64(b)));
    }
    Ok(out.trim_end().to_string())
}

fn cmd_scheme(config: &Path, target: &str) -> Result<String, CmdError> {
    let (raw1, raw2) = target
        .split_once(',')
        .ok_or_else(|| CmdError::new(4, "--target must be of the form r1,r2"))?;
    let r1 = parse_rational(raw1).map_err(|e| CmdError::new(4, format!("--target: {e}")))?;
    let r2 = parse_rational(raw2).map_err(|e| CmdError::new(4, format!("--target: {e}")))?;
    let (cfg, g) = load_instance(config)?;
    let scheme = build_scheme(&g, &cfg, &r1, &r2)?;
    canonical(&to_value(&scheme.to_json())?)
}

fn cmd_simulate(config: &Path, scheme: &Path, trials: u64, seed: u64) -> Result<String, CmdError> {
    if trials == 0 {
        return Err(CmdError::new(4, "--trials must be at least 1"));
    }
    let (cfg, g) = load_instance(config)?;
    let raw = fs::read_to_string(scheme)
        .map_err(|e| CmdError::new(2, format!("cannot read {}: {e}", scheme.display())))?;
    let sj: SchemeJson = serde_json::from_str(&raw)
        .map_err(|e| CmdError::new(2, format!("invalid scheme {}: {e}", scheme.display())))?;
    let s = CodingScheme::from_json(&sj, cfg.num_paths())?;
    let result = run_monte_carlo(&s, &g, &cfg, trials, seed)?;
    let deviation = compare_with_analytic(&result);
    let chi = chi_square_report(&result, &cfg)?;
    let mut doc = to_value(&result)?;
    let map = doc
        .as_object_mut()
        .expect("simulation result serializes to an object");
    map.insert("chi_square".into(), to_value(&chi)?);
    map.insert("deviation".into(), to_value(&deviation)?);
    canonical(&doc)
}

fn cmd_verify(
    config: &Path,
    max_n: usize,
    field: usize,
    seed: u64,
    budget: u64,
    format: &str,
) -> Result<String, CmdError> {
    if max_n == 0 {
        return Err(CmdError::new(4, "--max-n must be at least 1"));
    }
    let field = FieldOrder::from_order(field)
        .map_err(|e| CmdError::new(4, format!("--field: {e}")))?;
    if format != "json" && format != "csv" {
        return Err(CmdError::new(4, "--format must be json or csv"));
    }
    let (cfg, g) = load_instance(config)?;
    let label = classify(&g, &cfg)?;
    let reg = region(&g, &cfg)?;
    let exact = reg.exactness() == Exactness::ExactClosedForm;
    let verdicts = sweep_rate_grid(&g, &cfg, max_n, field, budget, seed)?;
    let mut any_fallback = false;
    let mut entries = Vec::with_capacity(verdicts.len());
    for v in &verdicts {
        let (a, b) = &v.rate;
        any_fallback |= v.randomized_fallback;
        let in_region = if exact { Some(reg.contains(a, b)?) } else { None };
        entries.push((v, in_region));
    }
    let warning = any_fallback.then(|| {
        "randomized fallback was used for part of the search; a miss there is not a proof"
            .to_string()
    });

    if format == "csv" {
        if let Some(w) = &warning {
            eprintln!("warning: {w}");
        }
        let mut out =
            String::from("r1,r2,achievable,search_exhausted,randomized_fallback,attempts,in_region\n");
        for (v, in_region) in &entries {
            let (a, b) = &v.rate;
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                rat_to_f64(a),
                rat_to_f64(b),
                v.achievable,
                v.search_exhausted,
                v.randomized_fallback,
                v.attempts,
                in_region.map_or_else(String::new, |x| x.to_string()),
            ));
        }
        return Ok(out.trim_end().to_string());
    }

    let entries: Vec<Value> = entries
        .iter()
        .map(|(v, in_region)| {
            let (a, b) = &v.rate;
            json!({
                "achievable": v.achievable,
                "attempts": v.attempts,
                "in_region": in_region,
                "r1": rat_to_string(a),
                "r1_float": rat_to_f64(a),
                "r2": rat_to_string(b),
                "r2_float": rat_to_f64(b),
                "randomized_fallback": v.randomized_fallback,
                "search_exhausted": v.search_exhausted,
            })
        })
        .collect();
    let doc = json!({
        "budget": budget,
        "case": label.as_str(),
        "entries": entries,
        "exactness": reg.exactness().as_str(),
        "field": field.order(),
        "max_n": max_n,
        "seed": seed,
        "warning": warning,
    });
    canonical(&doc)
}

fn cmd_export_combnet(config: &Path, format: &str) -> Result<String, CmdError> {
    if format != "dot" && format != "json" {
        return Err(CmdError::new(4, "--format must be dot or json"));
    }
    let (cfg, g) = load_instance(config)?;
    let net = reduce_to_combination_network(&g, &cfg)?;
    Ok(net.export(format)?.trim_end().to_string())
}
