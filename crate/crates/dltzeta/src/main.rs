//! Command-line surface: load models, run every engine, emit human- and
//! machine-readable results.
//!
//! Exit codes: 0 success (and verification passed), 1 verification failure,
//! 2 input or usage error.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dltzeta::engine;
use dltzeta::error::Error;
use dltzeta::jets::{self, JetPoly, DEFAULT_BUDGET};
use dltzeta::model::{load_model, ModelKind, StratifiedModel};
use dltzeta::poles;
use dltzeta::ring::NormalZeta;
use dltzeta::toric::{self, Monomial};
use dltzeta::util::{parse_rational64, rational64_to_string};

#[derive(Parser)]
#[command(
    name = "dltzeta",
    version,
    about = "Exact motivic zeta functions, stringy invariants and pole analysis from stratified models"
)]
struct Cli {
    /// Bound the rayon worker pool.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Auto,
    Naive,
    Dlt,
    GlobalNaive,
    GlobalDlt,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the normalized zeta function of a model and report its poles.
    Compute {
        #[arg(long)]
        model: PathBuf,
        /// Override the model kind (payloads are reinterpreted accordingly).
        #[arg(long, value_enum, default_value_t = KindArg::Auto)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Euler-number specialization over Q(s), fully reduced.
    Top {
        #[arg(long)]
        model: PathBuf,
        /// Euler numbers for class symbols, repeatable: NAME=P/Q.
        #[arg(long = "chi", value_name = "NAME=P/Q")]
        chi: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Candidate and effective poles; optionally compare against a second
    /// model (first = naive side, second = dlt side).
    Poles {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        compare: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generalized stringy motive of a dlt model with v_i = 0.
    Stringy {
        #[arg(long)]
        model: PathBuf,
        /// Drop the L^{-d} prefactor.
        #[arg(long)]
        drop_prefactor: bool,
        /// Euler numbers for class symbols (enables the stringy Euler number).
        #[arg(long = "chi", value_name = "NAME=P/Q")]
        chi: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check a model's zeta function against brute-force jet counts.
    Oracle {
        /// Polynomial over x,y,z,w or x1..xd with integer coefficients.
        #[arg(long)]
        poly: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        model: PathBuf,
        /// Point counts for class symbols, repeatable: NAME=P/Q.
        #[arg(long = "count", value_name = "NAME=P/Q")]
        counts: Vec<String>,
        /// Write the jet series as CSV (n,coefficient_num,coefficient_den).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build the snc model of a monomial from a fan, with optional star
    /// subdivisions (comma-separated ray indices, repeatable).
    Toric {
        /// Monomial exponents a1,..,ad.
        #[arg(long, value_delimiter = ',', required = true)]
        monomial: Vec<u32>,
        /// Ray-index set of a cone to subdivide; applied in order.
        #[arg(long = "subdivide", value_name = "I,J,..")]
        subdivide: Vec<String>,
        /// Write the model JSON here instead of stdout.
        #[arg(long)]
        emit_model: Option<PathBuf>,
    },
    /// Randomized star-subdivision invariance fuzzing for one monomial.
    Verify {
        /// Monomial exponents a1,..,ad.
        #[arg(long, value_delimiter = ',', required = true)]
        monomial: Vec<u32>,
        #[arg(long, default_value_t = 25)]
        seeds: u64,
        /// Longest subdivision chain per seed.
        #[arg(long, default_value_t = 4)]
        max_chain: u32,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Compute { model, kind, format } => cmd_compute(&model, kind, format),
        Command::Top { model, chi, format } => cmd_top(&model, &chi, format),
        Command::Poles { model, compare, format } => cmd_poles(&model, compare.as_deref(), format),
        Command::Stringy { model, drop_prefactor, chi, format } => {
            cmd_stringy(&model, drop_prefactor, &chi, format)
        }
        Command::Oracle { poly, p, depth, model, counts, csv } => {
            cmd_oracle(&poly, p, depth, &model, &counts, csv.as_deref())
        }
        Command::Toric { monomial, subdivide, emit_model } => {
            cmd_toric(&monomial, &subdivide, emit_model.as_deref())
        }
        Command::Verify { monomial, seeds, max_chain, seed_base } => {
            cmd_verify(&monomial, seeds, max_chain, seed_base)
        }
    }
}

fn load_with_kind(path: &Path, kind: KindArg) -> Result<StratifiedModel, Error> {
    let mut model = load_model(path)?;
    let wanted = match kind {
        KindArg::Auto => None,
        KindArg::Naive => Some(ModelKind::Naive),
        KindArg::Dlt => Some(ModelKind::Dlt),
        KindArg::GlobalNaive => Some(ModelKind::GlobalNaive),
        KindArg::GlobalDlt => Some(ModelKind::GlobalDlt),
    };
    if let Some(k) = wanted {
        model.kind = k;
        model.ensure_valid()?;
    }
    Ok(model)
}

fn zeta_for(model: &StratifiedModel) -> Result<dltzeta::ZetaExpr, Error> {
    match model.kind {
        ModelKind::Naive => engine::compute_naive_zeta(model),
        ModelKind::Dlt => engine::compute_dlt_zeta(model),
        ModelKind::GlobalNaive | ModelKind::GlobalDlt => engine::compute_global_zeta(model),
    }
}

fn parse_assignments(pairs: &[String]) -> Result<BTreeMap<String, BigRational>, Error> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (name, value) = pair.split_once('=').ok_or_else(|| {
            Error::Schema(format!("expected NAME=P/Q, got {pair:?}"))
        })?;
        let q = parse_rational64(value)?;
        out.insert(
            name.trim().to_string(),
            BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom())),
        );
    }
    Ok(out)
}

fn poles_json(effective: &BTreeMap<num_rational::Rational64, u32>) -> serde_json::Value {
    serde_json::Value::Array(
        effective
            .iter()
            .map(|(pole, order)| {
                serde_json::json!({ "pole": rational64_to_string(*pole), "order": order })
            })
            .collect(),
    )
}

fn cmd_compute(path: &Path, kind: KindArg, format: Format) -> Result<ExitCode, Error> {
    let model = load_with_kind(path, kind)?;
    let zeta = zeta_for(&model)?;
    let normal = zeta.normalize();
    let report = poles::PoleReport::new(&model, &normal);
    let minimal = if model.kind == ModelKind::GlobalDlt {
        Some(engine::validate_global_minimality(&model)?)
    } else {
        None
    };
    match format {
        Format::Json => {
            let mut obj = serde_json::json!({
                "kind": model.kind.as_str(),
                "zeta": normal.to_json(),
                "candidate_poles": report.candidates.iter()
                    .map(|p| rational64_to_string(*p)).collect::<Vec<_>>(),
                "effective_poles": poles_json(&report.effective),
            });
            if let Some(m) = minimal {
                obj["minimal_weight"] = serde_json::Value::Bool(m);
            }
            println!("{}", serde_json::to_string_pretty(&obj).expect("json"));
        }
        Format::Text => {
            println!("kind: {}", model.kind);
            println!("Z(s) = {normal}");
            println!(
                "candidate poles: {{{}}}",
                report
                    .candidates
                    .iter()
                    .map(|p| rational64_to_string(*p))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            println!(
                "effective poles (order upper bounds): {{{}}}",
                report
                    .effective
                    .iter()
                    .map(|(p, o)| format!("{} -> {}", rational64_to_string(*p), o))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            if let Some(m) = minimal {
                println!("minimal weight property: {m}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_top(path: &Path, chi: &[String], format: Format) -> Result<ExitCode, Error> {
    let model = load_model(path)?;
    let chi = parse_assignments(chi)?;
    let top = engine::compute_topological_zeta(&model, &chi)?;
    match format {
        Format::Json => {
            let poles: Vec<serde_json::Value> = top
                .poles()
                .iter()
                .map(|(p, m)| serde_json::json!({ "pole": p.to_string(), "order": m }))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "topological_zeta": top.to_string(),
                    "poles": poles,
                }))
                .expect("json")
            );
        }
        Format::Text => {
            println!("Z_top(s) = {top}");
            println!(
                "poles: {{{}}}",
                top.poles()
                    .iter()
                    .map(|(p, m)| format!("{p} (order {m})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_poles(path: &Path, compare: Option<&Path>, format: Format) -> Result<ExitCode, Error> {
    let model = load_model(path)?;
    let normal = zeta_for(&model)?.normalize();
    let report = poles::PoleReport::new(&model, &normal);
    let comparison = match compare {
        Some(other_path) => {
            let other = load_model(other_path)?;
            let other_normal = zeta_for(&other)?.normalize();
            Some((poles::PoleReport::new(&other, &other_normal),
                  poles::compare_pole_sets(&normal, &other_normal)))
        }
        None => None,
    };
    match format {
        Format::Json => {
            let mut obj = serde_json::json!({
                "candidate_poles": report.candidates.iter()
                    .map(|p| rational64_to_string(*p)).collect::<Vec<_>>(),
                "effective_poles": poles_json(&report.effective),
            });
            if let Some((other_report, cmp)) = &comparison {
                obj["compare"] = serde_json::json!({
                    "effective_poles": poles_json(&other_report.effective),
                    "subset_of_model_poles": cmp.subset,
                    "equals_intersection_with_unit_interval": cmp.equals_unit_interval_intersection,
                });
            }
            println!("{}", serde_json::to_string_pretty(&obj).expect("json"));
        }
        Format::Text => {
            println!(
                "candidate poles: {{{}}}",
                report
                    .candidates
                    .iter()
                    .map(|p| rational64_to_string(*p))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            println!(
                "effective poles (order upper bounds): {{{}}}",
                report
                    .effective
                    .iter()
                    .map(|(p, o)| format!("{} -> {}", rational64_to_string(*p), o))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            if let Some((other_report, cmp)) = &comparison {
                println!(
                    "compare model poles: {{{}}}",
                    other_report
                        .effective
                        .keys()
                        .map(|p| rational64_to_string(*p))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                println!("subset of model poles: {}", cmp.subset);
                println!(
                    "equals poles intersected with [-1, 0]: {}",
                    cmp.equals_unit_interval_intersection
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stringy(
    path: &Path,
    drop_prefactor: bool,
    chi: &[String],
    format: Format,
) -> Result<ExitCode, Error> {
    let model = load_model(path)?;
    let stringy = engine::compute_generalized_stringy(&model, drop_prefactor)?;
    let euler = if chi.is_empty() && !symbols_in_model(&model) {
        Some(engine::generalized_stringy_euler(&model, &BTreeMap::new())?)
    } else if !chi.is_empty() {
        Some(engine::generalized_stringy_euler(&model, &parse_assignments(chi)?)?)
    } else {
        None
    };
    match format {
        Format::Json => {
            let mut obj = serde_json::json!({ "stringy_motive": stringy.to_json() });
            if let Some(e) = &euler {
                obj["stringy_euler_number"] = serde_json::Value::String(e.to_string());
            }
            println!("{}", serde_json::to_string_pretty(&obj).expect("json"));
        }
        Format::Text => {
            println!("E_st = {stringy}");
            if let Some(e) = &euler {
                println!("chi_st = {e}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn symbols_in_model(model: &StratifiedModel) -> bool {
    model.strata.iter().any(|s| !s.payload.symbols_used().is_empty())
}

fn budget_from_env() -> u64 {
    std::env::var("DLTZETA_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn cmd_oracle(
    poly: &str,
    p: u64,
    depth: u32,
    model_path: &Path,
    counts: &[String],
    csv: Option<&Path>,
) -> Result<ExitCode, Error> {
    let model = load_model(model_path)?;
    let f = JetPoly::parse(poly)?;
    let counts = parse_assignments(counts)?;
    let budget = budget_from_env();
    let closed = jets::specialize_series(&engine::compute_naive_zeta(&model)?, p, &counts, depth)?;
    let counted = jets::igusa_series(&f, p, depth, budget)?;
    if let Some(csv_path) = csv {
        let mut file = std::fs::File::create(csv_path)?;
        writeln!(file, "n,coefficient_num,coefficient_den")?;
        for (n, c) in counted.iter().enumerate() {
            writeln!(file, "{n},{},{}", c.numer(), c.denom())?;
        }
    }
    let matches = closed == counted;
    if matches {
        println!("MATCH: closed form agrees with jet counts for p = {p} up to depth {depth}");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("MISMATCH:");
        for (n, (a, b)) in closed.iter().zip(counted.iter()).enumerate() {
            let marker = if a == b { ' ' } else { '*' };
            println!("{marker} T^{n}: closed form {a}, jet count {b}");
        }
        Ok(ExitCode::from(1))
    }
}

fn parse_cone(text: &str) -> Result<BTreeSet<usize>, Error> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::Schema(format!("invalid ray index {part:?}")))
        })
        .collect()
}

fn cmd_toric(
    monomial: &[u32],
    subdivide: &[String],
    emit: Option<&Path>,
) -> Result<ExitCode, Error> {
    let a = Monomial::new(monomial.to_vec())?;
    let mut fan = toric::orthant_fan(a.dimension())?;
    for step in subdivide {
        fan = fan.star_subdivide(&parse_cone(step)?)?;
    }
    let model = toric::model_from_monomial(&a, &fan)?;
    eprintln!(
        "fan: {} rays, {} cones; model: {} divisors, {} strata",
        fan.rays().len(),
        fan.cones().len(),
        model.divisors.len(),
        model.strata.len()
    );
    for d in &model.divisors {
        eprintln!(
            "  {}: (N, v) = ({}, {})",
            d.id,
            rational64_to_string(d.n),
            rational64_to_string(d.v)
        );
    }
    match emit {
        Some(path) => {
            model.save(path)?;
            eprintln!("model written to {}", path.display());
        }
        None => println!("{}", model.to_json_string()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    monomial: &[u32],
    seeds: u64,
    max_chain: u32,
    seed_base: u64,
) -> Result<ExitCode, Error> {
    use rayon::prelude::*;
    let a = Monomial::new(monomial.to_vec())?;
    let base_fan = toric::orthant_fan(a.dimension())?;
    let results: Vec<(u64, Result<bool, Error>)> = (0..seeds)
        .into_par_iter()
        .map(|i| (i, verify_one_seed(&a, &base_fan, seed_base + i, max_chain)))
        .collect();
    let mut passed = 0u64;
    for (seed, outcome) in &results {
        match outcome {
            Ok(true) => passed += 1,
            Ok(false) => println!("seed {seed}: INVARIANCE FAILED"),
            Err(e) => println!("seed {seed}: error: {e}"),
        }
    }
    println!("{passed}/{seeds} invariance passes");
    if passed == seeds {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn verify_one_seed(
    a: &Monomial,
    base_fan: &toric::Fan,
    seed: u64,
    max_chain: u32,
) -> Result<bool, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fan = base_fan.clone();
    let chain_len = rng.gen_range(1..=max_chain.max(1));
    for _ in 0..chain_len {
        let candidates = toric::stratum_cones(a, &fan);
        if candidates.is_empty() {
            break;
        }
        let cone = candidates[rng.gen_range(0..candidates.len())].clone();
        fan = fan.star_subdivide(&cone)?;
    }
    let before = toric::model_from_monomial(a, base_fan)?;
    let after = toric::model_from_monomial(a, &fan)?;
    let z1: NormalZeta = engine::compute_naive_zeta(&before)?.normalize();
    let z2: NormalZeta = engine::compute_naive_zeta(&after)?.normalize();
    Ok(z1 == z2)
}
