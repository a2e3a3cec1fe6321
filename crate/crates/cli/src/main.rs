//! Command-line driver: lowest-cell reports, Kazhdan-Lusztig cell
//! partitions with a table cache, verification batteries, and SVG
//! pictures for the rank-2 groups.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use affine_cells::gamma::WeightFunction;
use affine_cells::geometry::{GroupType, TypeGeometry};
use affine_cells::group::Ball;
use affine_cells::hecke::{
    cache_key, cell_partition, check_induction_conditions, kl_table, table_from_json,
    table_to_json, Flavor, KlContext, KlTable, KlTableJson,
};
use affine_cells::lowest::{
    c2_regime_weights, nu, sigma_cells, C2_REGIMES,
};
use affine_cells::params::{order_from_claim, semicontinuity_check, ClaimOrder};
use affine_cells::svg::render_rank2;

#[derive(Parser)]
#[command(name = "affine-cells", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest two-sided cell report: maximal-weight elements and the
    /// quarter pieces on a ball.
    Lowest(CommonArgs),
    /// Kazhdan-Lusztig cell partition on a ball (cache-aware).
    Cells(CommonArgs),
    /// Run a verification battery.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// claim3prime | bounds | induction | semicontinuity | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Combined lowest + cells report.
    Atlas(CommonArgs),
}

#[derive(Parser)]
struct CommonArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override the ball radius from the config.
    #[arg(long)]
    ball: Option<u64>,
    /// Table cache directory (also via AC_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Write an SVG picture (rank-2 groups only).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the JSON report here (default: stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

struct JobConfig {
    group_type: GroupType,
    weights: Vec<i64>,
    regime: Option<String>,
    order: Option<String>,
    ball: u64,
    n0: i64,
}

fn parse_config(path: &PathBuf) -> Result<JobConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config: {e}"))?;
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value", lineno + 1));
        };
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let label = kv
        .get("type")
        .cloned()
        .ok_or_else(|| "missing key: type".to_string())?;
    let rank: usize = kv
        .get("rank")
        .ok_or_else(|| "missing key: rank".to_string())?
        .parse()
        .map_err(|_| "rank must be an integer".to_string())?;
    let group_type = GroupType::parse(&label, rank).map_err(|e| e.to_string())?;
    let geom = TypeGeometry::new(group_type).map_err(|e| e.to_string())?;
    let regime = kv.get("regime").cloned();
    let weights: Vec<i64> = if let Some(r) = &regime {
        if group_type != GroupType::C(2) {
            return Err("named regimes are defined for type C rank 2 only".into());
        }
        c2_regime_weights(r)
            .ok_or_else(|| format!("unknown regime {r}"))?
            .to_vec()
    } else {
        let w = kv
            .get("weights")
            .ok_or_else(|| "missing key: weights (or regime)".to_string())?;
        let parsed: Result<Vec<i64>, _> = w.split_whitespace().map(|x| x.parse()).collect();
        parsed.map_err(|_| "weights must be integers".to_string())?
    };
    if weights.len() != geom.n_classes() {
        return Err(format!(
            "expected {} weight values for {}{} (classes {}), got {}",
            geom.n_classes(),
            label,
            rank,
            geom.class_names.join(","),
            weights.len()
        ));
    }
    let ball: u64 = match kv.get("ball") {
        Some(b) => b.parse().map_err(|_| "ball must be an integer".to_string())?,
        None => 6,
    };
    let n0: i64 = match kv.get("n0") {
        Some(b) => b.parse().map_err(|_| "n0 must be an integer".to_string())?,
        None => 10,
    };
    Ok(JobConfig {
        group_type,
        weights,
        regime,
        order: kv.get("order").cloned(),
        ball,
        n0,
    })
}

const EXIT_CONFIG: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Lowest(args) => cmd_lowest(args),
        Command::Cells(args) => cmd_cells(args),
        Command::Verify { common, suite } => cmd_verify(common, suite),
        Command::Atlas(args) => cmd_atlas(args),
    };
    match result {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type CmdResult = Result<ExitCode, (u8, String)>;

fn load(args: &CommonArgs) -> Result<(JobConfig, TypeGeometry, WeightFunction), (u8, String)> {
    let mut config = parse_config(&args.config).map_err(|m| (EXIT_CONFIG, m))?;
    if let Some(b) = args.ball {
        config.ball = b;
    }
    let geom = TypeGeometry::new(config.group_type).map_err(|e| (EXIT_CONFIG, e.to_string()))?;
    let l = geom
        .int_weights(&config.weights)
        .map_err(|e| (EXIT_CONFIG, e.to_string()))?;
    Ok((config, geom, l))
}

fn emit(args: &CommonArgs, value: &Value) -> Result<(), (u8, String)> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    match &args.json {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| (EXIT_INVARIANT, format!("cannot write json: {e}")))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_lowest(args: &CommonArgs) -> CmdResult {
    let (config, geom, l) = load(args)?;
    if l.is_zero() {
        return Err((
            EXIT_CONFIG,
            "the zero weight function puts every element in the lowest cell; nothing to report"
                .into(),
        ));
    }
    let ball = Ball::new(&geom, config.ball);
    let (nu_val, wmax) = nu(&geom, &l);
    let cells = sigma_cells(&geom, &l, &ball).map_err(|e| (EXIT_INVARIANT, e.to_string()))?;
    let piece_of: Vec<Option<usize>> = (0..ball.len())
        .map(|i| {
            let p = ball.elements[i].sample_point(&geom);
            cells.quarters.iter().position(|q| q.contains(&geom, &p))
        })
        .collect();
    let report = json!({
        "group": geom.group_type.label(),
        "weights": config.weights,
        "regime": config.regime,
        "ball": config.ball,
        "nu": nu_val.coords(),
        "wmax": wmax.iter().map(|w| w.word_string(&geom)).collect::<Vec<_>>(),
        "sigma_cells": cells.quarters.iter().enumerate().map(|(i, q)| {
            json!({
                "sigma_id": i,
                "b_sigma": q.gate.word_string(&geom),
                "vertex": q.vertex.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "stabilizer": q.stab.iter().map(|&s| geom.gen_names[s].clone()).collect::<Vec<_>>(),
                "members": cells.members[i].iter().map(|&m| ball.word_string(m)).collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
        "membership": (0..ball.len()).map(|i| {
            json!({"word": ball.word_string(i), "piece": piece_of[i]})
        }).collect::<Vec<_>>(),
    });
    emit(args, &report)?;
    if let Some(path) = &args.svg {
        if geom.rank != 2 {
            return Err((EXIT_CONFIG, "SVG output needs a rank-2 group".into()));
        }
        let starred: Vec<usize> = wmax.iter().filter_map(|w| ball.id_of(w)).collect();
        let svg = render_rank2(&geom, &ball, &piece_of, &starred, 6.0);
        std::fs::write(path, svg.as_bytes())
            .map_err(|e| (EXIT_INVARIANT, format!("cannot write svg: {e}")))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn weight_for_order(
    geom: &TypeGeometry,
    config: &JobConfig,
) -> Result<WeightFunction, (u8, String)> {
    match config.order.as_deref() {
        None | Some("integers") => geom
            .int_weights(&config.weights)
            .map_err(|e| (EXIT_CONFIG, e.to_string())),
        Some(id) => {
            let claim = ClaimOrder::parse(id).map_err(|e| (EXIT_CONFIG, e.to_string()))?;
            let spec = order_from_claim(claim, &config.weights, config.n0)
                .map_err(|e| (EXIT_CONFIG, e.to_string()))?;
            Ok(WeightFunction::generic(spec))
        }
    }
}

fn cache_dir(args: &CommonArgs) -> Option<PathBuf> {
    args.cache_dir
        .clone()
        .or_else(|| std::env::var_os("AC_CACHE_DIR").map(PathBuf::from))
}

fn table_with_cache(
    args: &CommonArgs,
    ctx: &KlContext,
) -> Result<(KlTable, bool), (u8, String)> {
    let dir = cache_dir(args);
    let key = cache_key(&ctx.geom, &ctx.l, ctx.ball.radius);
    if let Some(dir) = &dir {
        let path = dir.join(format!("{key}.json"));
        if path.exists() {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| (EXIT_INVARIANT, format!("cache read: {e}")))?;
            let parsed: KlTableJson = serde_json::from_str(&text)
                .map_err(|e| (EXIT_INVARIANT, format!("cache parse: {e}")))?;
            let table =
                table_from_json(ctx, &parsed).map_err(|e| (EXIT_INVARIANT, e.to_string()))?;
            return Ok((table, true));
        }
    }
    let table = kl_table(ctx);
    if let Some(dir) = &dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| (EXIT_INVARIANT, format!("cache dir: {e}")))?;
        let path = dir.join(format!("{key}.json"));
        let text = serde_json::to_string(&table_to_json(ctx, &table)).expect("serializes");
        std::fs::write(&path, text.as_bytes())
            .map_err(|e| (EXIT_INVARIANT, format!("cache write: {e}")))?;
    }
    Ok((table, false))
}

fn cells_report(
    args: &CommonArgs,
    config: &JobConfig,
    geom: &TypeGeometry,
) -> Result<Value, (u8, String)> {
    let l = weight_for_order(geom, config)?;
    let ctx = KlContext::new(geom, &l, config.ball).map_err(|e| (EXIT_CONFIG, e.to_string()))?;
    let (table, from_cache) = table_with_cache(args, &ctx)?;
    let left = cell_partition(&ctx, &table, Flavor::Left);
    let right = cell_partition(&ctx, &table, Flavor::Right);
    let two = cell_partition(&ctx, &table, Flavor::TwoSided);
    // Left/right duality on the ball.
    let mut duality_ok = true;
    for x in 0..ctx.n() {
        for y in 0..ctx.n() {
            let same_left = left.class_of[x] == left.class_of[y];
            let same_right =
                right.class_of[ctx.ball.inverse[x]] == right.class_of[ctx.ball.inverse[y]];
            if same_left != same_right {
                duality_ok = false;
            }
        }
    }
    let classes_json = |p: &affine_cells::hecke::CellPartition| -> Value {
        Value::Array(
            p.classes
                .iter()
                .map(|c| {
                    Value::Array(
                        c.iter()
                            .map(|&m| Value::String(ctx.ball.word_string(m)))
                            .collect(),
                    )
                })
                .collect(),
        )
    };
    Ok(json!({
        "group": geom.group_type.label(),
        "weights": config.weights,
        "order": config.order.clone().unwrap_or_else(|| "integers".into()),
        "ball": config.ball,
        "from_cache": from_cache,
        "truncated": left.truncated,
        "duality_ok": duality_ok,
        "left_classes": classes_json(&left),
        "right_class_count": right.classes.len(),
        "two_sided_classes": classes_json(&two),
        "p_entries": table.p.len(),
        "m_entries": table.m.len(),
    }))
}

fn cmd_cells(args: &CommonArgs) -> CmdResult {
    let (config, geom, _) = load(args)?;
    let report = cells_report(args, &config, &geom)?;
    emit(args, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_atlas(args: &CommonArgs) -> CmdResult {
    let (config, geom, l) = load(args)?;
    if l.is_zero() {
        return Err((EXIT_CONFIG, "zero weight function: the lowest cell is everything".into()));
    }
    let ball = Ball::new(&geom, config.ball);
    let (nu_val, wmax) = nu(&geom, &l);
    let cells = sigma_cells(&geom, &l, &ball).map_err(|e| (EXIT_INVARIANT, e.to_string()))?;
    let cells_part = cells_report(args, &config, &geom)?;
    let report = json!({
        "lowest": {
            "nu": nu_val.coords(),
            "wmax": wmax.iter().map(|w| w.word_string(&geom)).collect::<Vec<_>>(),
            "piece_count": cells.quarters.len(),
        },
        "cells": cells_part,
    });
    emit(args, &report)?;
    if let Some(path) = &args.svg {
        if geom.rank != 2 {
            return Err((EXIT_CONFIG, "SVG output needs a rank-2 group".into()));
        }
        let piece_of: Vec<Option<usize>> = (0..ball.len())
            .map(|i| {
                let p = ball.elements[i].sample_point(&geom);
                cells.quarters.iter().position(|q| q.contains(&geom, &p))
            })
            .collect();
        let starred: Vec<usize> = wmax.iter().filter_map(|w| ball.id_of(w)).collect();
        let svg = render_rank2(&geom, &ball, &piece_of, &starred, 6.0);
        std::fs::write(path, svg.as_bytes())
            .map_err(|e| (EXIT_INVARIANT, format!("cannot write svg: {e}")))?;
    }
    Ok(ExitCode::SUCCESS)
}

struct SuiteOutcome {
    lines: Vec<(String, bool)>,
}

impl SuiteOutcome {
    fn new() -> Self {
        SuiteOutcome { lines: Vec::new() }
    }
    fn push(&mut self, name: &str, ok: bool) {
        self.lines.push((name.to_string(), ok));
    }
    fn print_and_code(&self) -> ExitCode {
        let mut all_ok = true;
        for (name, ok) in &self.lines {
            println!("{}: {}", name, if *ok { "PASS" } else { "FAIL" });
            if !ok {
                all_ok = false;
            }
        }
        if all_ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    }
}

fn suite_claim3prime(out: &mut SuiteOutcome) {
    for case in affine_cells::claims::paper_cases() {
        let ok = match affine_cells::claims::verify_case(&case) {
            Ok(r) => r.failures.is_empty(),
            Err(_) => false,
        };
        out.push(&format!("claim3prime/{}", case.label), ok);
    }
    let direct: Vec<(GroupType, Vec<Vec<i64>>)> = vec![
        (
            GroupType::C(2),
            C2_REGIMES
                .iter()
                .filter(|r| **r != "zero")
                .map(|r| c2_regime_weights(r).unwrap().to_vec())
                .collect(),
        ),
        (GroupType::B(3), vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
        (GroupType::G2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
        (GroupType::F4, vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
    ];
    for (ty, weight_sets) in direct {
        let geom = TypeGeometry::new(ty).unwrap();
        for w in weight_sets {
            let ok = geom
                .int_weights(&w)
                .ok()
                .and_then(|l| affine_cells::claims::verify_direct(&geom, &l).ok())
                .map(|r| r.failures.is_empty())
                .unwrap_or(false);
            out.push(&format!("claim3direct/{}/{w:?}", ty.label()), ok);
        }
    }
}

fn suite_bounds(out: &mut SuiteOutcome, n0: i64) {
    let geom = TypeGeometry::new(GroupType::C(2)).unwrap();
    // Generic pair-gap order for the product bounds.
    let spec = order_from_claim(ClaimOrder::CPairGap, &[2 * n0 * n0, 1, n0 * n0 + 1], n0)
        .expect("witness satisfies the hypotheses");
    let l = WeightFunction::generic(spec);
    let ctx = KlContext::new(&geom, &l, 12).unwrap();
    let ok = affine_cells::hecke::verify_product_degree_bounds(&ctx, 6).is_ok();
    out.push("bounds/products ball(6)", ok);
    let ctx8 = KlContext::new(&geom, &l, 8).unwrap();
    let table = kl_table(&ctx8);
    let gens = vec![0usize, 1];
    let ok = match affine_cells::hecke::verify_klasym(&ctx8, &table, &gens) {
        Ok(r) => r.failures.is_empty(),
        Err(_) => false,
    };
    out.push("bounds/parabolic degree ball(8)", ok);
}

fn suite_induction(out: &mut SuiteOutcome, ball: u64, n0: i64) {
    let geom = TypeGeometry::new(GroupType::C(2)).unwrap();
    let big = n0 * n0 + 1;
    let chamber = geom.int_weights(&[big, 1, big]).unwrap();
    let plus = geom.int_weights(&[big, 0, big]).unwrap();
    let ctx = KlContext::new(&geom, &chamber, ball).unwrap();
    let table = kl_table(&ctx);
    match check_induction_conditions(&ctx, &table, &plus) {
        Ok(r) => {
            out.push("induction/I1", r.i1_ok);
            out.push("induction/I2", r.i2_ok);
            out.push("induction/I3", r.i3_ok);
            out.push("induction/I5", r.i5_failures.is_empty());
            out.push("induction/left-ideal", r.left_ideal_failures.is_empty());
        }
        Err(e) => out.push(&format!("induction ({e})"), false),
    }
}

fn suite_semicontinuity(out: &mut SuiteOutcome, ball: u64, n0: i64) {
    let geom = TypeGeometry::new(GroupType::C(2)).unwrap();
    let big = n0 * n0 + 1;
    match semicontinuity_check(&geom, &[big, 0, big], &[big, 1, big], ball) {
        Ok(r) => out.push(
            "semicontinuity/equal-pair facet",
            r.pieces_ok && r.cmin_two_sided_ok,
        ),
        Err(e) => out.push(&format!("semicontinuity ({e})"), false),
    }
    // Negative control: a facet with the middle class zero against a
    // balanced chamber (a - c < b < c < a up to scale) is NOT a union of
    // its cells.
    match semicontinuity_check(&geom, &[2, 0, 1], &[5, 3, 4], ball) {
        Ok(r) => out.push(
            "semicontinuity/negative control reports failure",
            !(r.pieces_ok && r.cmin_two_sided_ok),
        ),
        Err(e) => out.push(&format!("semicontinuity control ({e})"), false),
    }
}

fn cmd_verify(args: &CommonArgs, suite: &str) -> CmdResult {
    let (config, _, _) = load(args)?;
    let mut out = SuiteOutcome::new();
    match suite {
        "claim3prime" => suite_claim3prime(&mut out),
        "bounds" => suite_bounds(&mut out, config.n0),
        "induction" => suite_induction(&mut out, config.ball, config.n0),
        "semicontinuity" => suite_semicontinuity(&mut out, config.ball, config.n0),
        "all" => {
            suite_claim3prime(&mut out);
            suite_bounds(&mut out, config.n0);
            suite_induction(&mut out, config.ball, config.n0);
            suite_semicontinuity(&mut out, config.ball, config.n0);
        }
        other => return Err((EXIT_CONFIG, format!("unknown suite {other}"))),
    }
    Ok(out.print_and_code())
}
