//! `dunklkit`: command-line front end for the Dunkl analysis library.
//!
//! Subcommands: `kernel`, `vk`, `transform`, `translate`, `convolve`,
//! `check-hypo`, `verify`. Outputs are CSV (RFC 4180) or JSON with a
//! deterministic comment header (config hash, seed, quadrature metadata), so
//! reruns with the same run configuration are byte-identical.
//!
//! Exit codes: 0 success, 64 usage, 65 data/parse, 70 internal;
//! `check-hypo` exits 0/1/2 for hypoelliptic / not / inconclusive.

// `if !(tol >= floor)` rejects NaN tolerances along with small ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;
mod registry;

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use dunkl_core::convolve::{
    dunkl_convolve_radial_with, dunkl_convolve_with, translate_1d, translate_radial,
};
use dunkl_core::foundation::config::GroupConfig;
use dunkl_core::hypo::{verdict_with, HypoOptions};
use dunkl_core::intertwine::vk_function;
use dunkl_core::kernel::{kernel_1d, kernel_1d_integral, kernel_product};
use dunkl_core::polyalg::parse_poly;
use dunkl_core::transform::{
    default_nodes_per_halfaxis, dunkl_transform_with, plancherel_defect_with,
};
use dunkl_core::DunklError;

use output::{fmt_f64, Table};

const EXIT_USAGE: i32 = 64;
const EXIT_DATA: i32 = 65;
const EXIT_INTERNAL: i32 = 70;

#[derive(Parser)]
#[command(
    name = "dunklkit",
    version,
    about = "Dunkl analysis toolkit: kernel evaluation, intertwining operators, transform, translation/convolution, and hypoellipticity checks for Z2^d reflection groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Group configuration JSON file: {"variant":"rank1"|"product","k":[..]}
    #[arg(long)]
    config: PathBuf,
    /// RNG seed, recorded in every output artifact
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Tolerance (defaults are per-check when omitted); must be >= 1e-12
    #[arg(long)]
    tol: Option<f64>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Dunkl kernel K(x, z) at (x, z) pairs from a CSV file
    Kernel {
        #[command(flatten)]
        common: Common,
        /// CSV with columns x1..xd, re_z1..re_zd [, im_z1..im_zd]
        #[arg(long)]
        pairs: PathBuf,
        /// Also evaluate the d=1 integral route and report the agreement
        #[arg(long, default_value_t = false)]
        dual_route: bool,
    },
    /// Apply the intertwining operator V_k to a polynomial or named function
    Vk {
        #[command(flatten)]
        common: Common,
        /// Polynomial literal in x1..xd, e.g. "3/2 x1^2 x2 - x2"
        #[arg(long, conflicts_with = "function")]
        poly: Option<String>,
        /// Named function: gaussian | hermite1xgaussian | bump:a=R | exp:z=..
        #[arg(long)]
        function: Option<String>,
        /// Evaluation grid min,max,count (tensorized over coordinates)
        #[arg(long)]
        grid: String,
    },
    /// Dunkl transform of a named function on a frequency grid
    Transform {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        function: String,
        /// Frequency grid min,max,count (tensorized over coordinates)
        #[arg(long)]
        grid: String,
        /// Nodes per half-axis (default: dimension-dependent)
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Dunkl translation tau_y f on a grid of evaluation points
    Translate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        function: String,
        /// Translation point, comma-separated coordinates
        #[arg(long)]
        y: String,
        #[arg(long)]
        grid: String,
    },
    /// Dunkl convolution f *_D g on a grid
    Convolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        grid: String,
    },
    /// Hypoellipticity analysis of P(T) delta for an operator polynomial
    #[command(name = "check-hypo")]
    CheckHypo {
        #[command(flatten)]
        common: Common,
        /// Operator polynomial in T1..Td, e.g. "T1^2+T2^2"
        #[arg(long)]
        op: String,
    },
    /// Run an invariant suite and emit a defect table
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite: plancherel | kernel | product-formula | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl From<DunklError> for Failure {
    fn from(e: DunklError) -> Self {
        let code = match e {
            DunklError::Internal(_) | DunklError::QuadratureNonConvergence { .. } => EXIT_INTERNAL,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::data(format!("i/o error: {e}"))
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("dunklkit: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Kernel {
            common,
            pairs,
            dual_route,
        } => run_kernel(&common, &pairs, dual_route),
        Command::Vk {
            common,
            poly,
            function,
            grid,
        } => run_vk(&common, poly.as_deref(), function.as_deref(), &grid),
        Command::Transform {
            common,
            function,
            grid,
            nodes,
        } => run_transform(&common, &function, &grid, nodes),
        Command::Translate {
            common,
            function,
            y,
            grid,
        } => run_translate(&common, &function, &y, &grid),
        Command::Convolve { common, f, g, grid } => run_convolve(&common, &f, &g, &grid),
        Command::CheckHypo { common, op } => run_check_hypo(&common, &op),
        Command::Verify { common, suite } => run_verify(&common, &suite),
    }
}

fn load_config(common: &Common) -> Result<(GroupConfig, String), Failure> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", common.config.display())))?;
    let config = GroupConfig::from_json(&text)?;
    if let Some(tol) = common.tol {
        if !(tol >= 1e-12) {
            return Err(Failure::data(format!(
                "tolerance {tol:e} below the 1e-12 floor"
            )));
        }
    }
    Ok((config, text.trim().to_string()))
}

fn parse_grid(spec: &str, dimension: usize) -> Result<Vec<Vec<f64>>, Failure> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::data(format!(
            "grid spec must be min,max,count; got '{spec}'"
        )));
    }
    let min: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| Failure::data(format!("bad grid min: {e}")))?;
    let max: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| Failure::data(format!("bad grid max: {e}")))?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|e| Failure::data(format!("bad grid count: {e}")))?;
    if count == 0 || max < min {
        return Err(Failure::data("grid needs count >= 1 and max >= min"));
    }
    let axis: Vec<f64> = (0..count)
        .map(|i| {
            if count == 1 {
                0.5 * (min + max)
            } else {
                min + (max - min) * i as f64 / (count - 1) as f64
            }
        })
        .collect();
    let total = axis.len().pow(dimension as u32);
    let cap = match dimension {
        1 => 10_000,
        2 => 64 * 64,
        _ => 24 * 24 * 24,
    };
    if total > cap {
        return Err(Failure::data(format!(
            "grid of {total} points exceeds the desk-scale cap {cap} for d={dimension}"
        )));
    }
    let mut points = Vec::with_capacity(total);
    let mut idx = vec![0usize; dimension];
    'outer: loop {
        points.push(idx.iter().map(|&i| axis[i]).collect::<Vec<f64>>());
        let mut j = dimension;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < axis.len() {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok(points)
}

fn parse_point(spec: &str, dimension: usize) -> Result<Vec<f64>, Failure> {
    let point: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::data(format!("bad point '{spec}': {e}")))?;
    if point.len() != dimension {
        return Err(Failure::data(format!(
            "point '{spec}' has {} coordinates, expected {dimension}",
            point.len()
        )));
    }
    Ok(point)
}

fn point_columns(prefix: &str, dimension: usize) -> Vec<String> {
    (1..=dimension).map(|j| format!("{prefix}{j}")).collect()
}

fn run_kernel(common: &Common, pairs_path: &Path, dual_route: bool) -> Result<i32, Failure> {
    let (config, config_json) = load_config(common)?;
    let d = config.dimension();
    let text = std::fs::read_to_string(pairs_path)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", pairs_path.display())))?;
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Failure::data("pairs file is empty"))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let find = |name: &str| header.iter().position(|h| h == name);
    let x_cols: Vec<usize> = (1..=d)
        .map(|j| find(&format!("x{j}")).ok_or_else(|| Failure::data(format!("missing column x{j}"))))
        .collect::<Result<_, _>>()?;
    let re_cols: Vec<usize> = (1..=d)
        .map(|j| {
            find(&format!("re_z{j}")).ok_or_else(|| Failure::data(format!("missing column re_z{j}")))
        })
        .collect::<Result<_, _>>()?;
    let im_cols: Vec<Option<usize>> = (1..=d).map(|j| find(&format!("im_z{j}"))).collect();

    let mut columns: Vec<String> = point_columns("x", d);
    columns.extend(point_columns("re_z", d));
    columns.extend(point_columns("im_z", d));
    columns.extend(["re_value", "im_value", "route", "est_error"].map(String::from));
    if dual_route {
        columns.push("dual_route_diff".into());
    }
    let mut table = Table::new(&columns.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    table.standard_comments(&config_json, common.seed, "series per coordinate");

    for line in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |idx: usize| -> Result<f64, Failure> {
            fields
                .get(idx)
                .ok_or_else(|| Failure::data(format!("short row: '{line}'")))?
                .parse()
                .map_err(|e| Failure::data(format!("bad number in '{line}': {e}")))
        };
        let x: Vec<f64> = x_cols.iter().map(|&i| get(i)).collect::<Result<_, _>>()?;
        let mut z = Vec::with_capacity(d);
        for j in 0..d {
            let re = get(re_cols[j])?;
            let im = match im_cols[j] {
                Some(i) => get(i)?,
                None => 0.0,
            };
            z.push(Complex64::new(re, im));
        }
        let value = kernel_product(&config, &x, &z);
        let mut row: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
        row.extend(z.iter().map(|c| fmt_f64(c.re)));
        row.extend(z.iter().map(|c| fmt_f64(c.im)));
        row.push(fmt_f64(value.value.re));
        row.push(fmt_f64(value.value.im));
        row.push(value.route.as_str().to_string());
        row.push(fmt_f64(value.est_error));
        if dual_route {
            if d != 1 {
                return Err(Failure::data("--dual-route is a d=1 check"));
            }
            let other = kernel_1d_integral(config.multiplicities()[0], x[0], z[0])?;
            row.push(fmt_f64((value.value - other.value).norm()));
        }
        table.push_row(row);
    }
    table.emit(common.out.as_deref(), &common.format)?;
    Ok(0)
}

fn run_vk(
    common: &Common,
    poly: Option<&str>,
    function: Option<&str>,
    grid: &str,
) -> Result<i32, Failure> {
    let (config, config_json) = load_config(common)?;
    let d = config.dimension();
    let points = parse_grid(grid, d)?;
    let mut columns = point_columns("x", d);
    columns.push("value".into());
    let mut table = Table::new(&columns.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    table.standard_comments(&config_json, common.seed, "jacobi-type 64 nodes/axis");

    match (poly, function) {
        (Some(literal), None) => {
            let p = parse_poly(literal, d, 'x')?;
            let kq = dunkl_core::polyalg::RationalK::from_floats(config.multiplicities())?;
            let image = dunkl_core::intertwine::vk_poly(&kq, &p)?;
            table.comment(format!("vk_poly={image}"));
            for x in &points {
                let mut row: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
                row.push(fmt_f64(image.eval(x)));
                table.push_row(row);
            }
        }
        (None, Some(name)) => {
            let named = registry::lookup(name, &config)?;
            for x in &points {
                let value = vk_function(&config, &named.sampled, x)?;
                let mut row: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
                row.push(fmt_f64(value));
                table.push_row(row);
            }
        }
        _ => {
            return Err(Failure::data(
                "vk needs exactly one of --poly or --function",
            ))
        }
    }
    table.emit(common.out.as_deref(), &common.format)?;
    Ok(0)
}

fn run_transform(
    common: &Common,
    function: &str,
    grid: &str,
    nodes: Option<usize>,
) -> Result<i32, Failure> {
    let (config, config_json) = load_config(common)?;
    let d = config.dimension();
    let named = registry::lookup(function, &config)?;
    let ys = parse_grid(grid, d)?;
    let tol = common.tol.unwrap_or(1e-6);
    let nodes = nodes.unwrap_or_else(|| default_nodes_per_halfaxis(d));
    let result = dunkl_transform_with(&config, &named.sampled, &ys, tol, nodes)?;
    let mut columns = point_columns("y", d);
    columns.extend(["re", "im", "tail_bound"].map(String::from));
    let mut table = Table::new(&columns.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    table.standard_comments(
        &config_json,
        common.seed,
        &format!("halfaxis_nodes={nodes} box={}", result.info.box_halfwidth),
    );
    for (y, v) in result.points.iter().zip(&result.values) {
        let mut row: Vec<String> = y.iter().map(|&t| fmt_f64(t)).collect();
        row.push(fmt_f64(v.re));
        row.push(fmt_f64(v.im));
        row.push(fmt_f64(result.info.tail_bound));
        table.push_row(row);
    }
    table.emit(common.out.as_deref(), &common.format)?;
    Ok(0)
}

fn run_translate(common: &Common, function: &str, y: &str, grid: &str) -> Result<i32, Failure> {
    let (config, config_json) = load_config(common)?;
    let d = config.dimension();
    let named = registry::lookup(function, &config)?;
    let shift = parse_point(y, d)?;
    let points = parse_grid(grid, d)?;
    let mut columns = point_columns("x", d);
    columns.push("value".into());
    let mut table = Table::new(&columns.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    table.standard_comments(&config_json, common.seed, "translation 64 nodes");
    for x in &points {
        let value = if d == 1 {
            translate_1d(config.multiplicities()[0], shift[0], &named.sampled, x[0])?
        } else {
            let profile = named.radial.as_ref().ok_or_else(|| {
                Failure::data(
                    "translation in d >= 2 needs a radial function (gaussian or bump:a=R)",
                )
            })?;
            translate_radial(&config, &shift, profile, x)?
        };
        let mut row: Vec<String> = x.iter().map(|&t| fmt_f64(t)).collect();
        row.push(fmt_f64(value));
        table.push_row(row);
    }
    table.emit(common.out.as_deref(), &common.format)?;
    Ok(0)
}

fn run_convolve(common: &Common, f: &str, g: &str, grid: &str) -> Result<i32, Failure> {
    let (config, config_json) = load_config(common)?;
    let d = config.dimension();
    let named_f = registry::lookup(f, &config)?;
    let named_g = registry::lookup(g, &config)?;
    let points = parse_grid(grid, d)?;
    let tol = common.tol.unwrap_or(1e-5);
    let mut columns = point_columns("x", d);
    columns.push("value".into());
    let mut table = Table::new(&columns.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    table.standard_comments(&config_json, common.seed, "convolution 96x64 nodes");
    for x in &points {
        let value = if d == 1 {
            dunkl_convolve_with(&config, &named_f.sampled, &named_g.sampled, x, tol, 96, 64)?
        } else {
            let profile = named_f.radial.as_ref().ok_or_else(|| {
                Failure::data("convolution in d >= 2 needs a radial f (gaussian or bump:a=R)")
            })?;
            dunkl_convolve_radial_with(&config, profile, &named_g.sampled, x, tol, 48, 48)?
        };
        let mut row: Vec<String> = x.iter().map(|&t| fmt_f64(t)).collect();
        row.push(fmt_f64(value));
        table.push_row(row);
    }
    table.emit(common.out.as_deref(), &common.format)?;
    Ok(0)
}

fn run_check_hypo(common: &Common, op: &str) -> Result<i32, Failure> {
    let (config, config_json) = load_config(common)?;
    let operator = parse_poly(op, config.dimension(), 'T')?;
    let options = HypoOptions {
        seed: common.seed,
        ..HypoOptions::default()
    };
    let report = verdict_with(&config, &operator, &options)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: format!("report serialization: {e}"),
    })?;
    // human-readable summary
    println!("operator   : {}", report.operator);
    println!("symbol     : {}", report.symbol);
    println!(
        "growth     : {} (A = {}, M = {})",
        if report.growth.pass { "pass" } else { "fail" },
        report.growth.best_exponent,
        report.growth.threshold_radius
    );
    println!(
        "zero set   : {}{}",
        if report.zeroset.pass {
            "pass"
        } else if report.zeroset.inconclusive {
            "inconclusive"
        } else {
            "fail"
        },
        if report.zeroset.sparse_zero_evidence {
            " (sparse zero evidence: infinite-zero-set hypothesis not corroborated)"
        } else {
            ""
        }
    );
    println!("verdict    : {}", report.verdict.as_str());
    println!(
        "parametrix : {}",
        if report.parametrix_exists {
            "exists (implied by the verdict; not constructed)"
        } else {
            "not implied"
        }
    );
    println!("config_hash: {:016x}", output::fnv1a(config_json.as_bytes()));
    println!("seed       : {}", common.seed);
    match common.out.as_deref() {
        Some(path) => std::fs::write(path, json)?,
        None => println!("{json}"),
    }
    Ok(report.verdict.exit_code())
}

fn run_verify(common: &Common, suite: &str) -> Result<i32, Failure> {
    let (config, config_json) = load_config(common)?;
    let d = config.dimension();
    let mut table = Table::new(&["suite", "case", "measured", "tolerance", "pass"]);
    table.standard_comments(&config_json, common.seed, "verify defaults");
    let mut all_pass = true;
    let push = |table: &mut Table,
                all_pass: &mut bool,
                suite: &str,
                case: String,
                measured: f64,
                tolerance: f64| {
        let pass = measured <= tolerance;
        *all_pass &= pass;
        table.push_row(vec![
            suite.to_string(),
            case,
            fmt_f64(measured),
            fmt_f64(tolerance),
            pass.to_string(),
        ]);
    };

    let want = |name: &str| suite == "all" || suite == name;
    if !["all", "plancherel", "kernel", "product-formula"].contains(&suite) {
        return Err(Failure::data(format!(
            "unknown suite '{suite}'; known: plancherel, kernel, product-formula, all"
        )));
    }

    if want("plancherel") {
        if d > 2 {
            return Err(Failure::data("plancherel verification supports d <= 2"));
        }
        let default_tol = if d == 1 { 1e-6 } else { 1e-4 };
        let tol = common.tol.unwrap_or(default_tol);
        let nodes = if d == 1 { 96 } else { 48 };
        for name in ["gaussian", "hermite1xgaussian"] {
            let named = registry::lookup(name, &config)?;
            let defect = plancherel_defect_with(&config, &named.sampled, tol.max(1e-7), nodes)?;
            push(&mut table, &mut all_pass, "plancherel", name.to_string(), defect, tol);
        }
    }

    if want("kernel") {
        let tol = common.tol.unwrap_or(1e-8);
        for (j, &k) in config.multiplicities().iter().enumerate() {
            if k <= 0.0 {
                continue;
            }
            let mut worst = 0.0_f64;
            for ix in 0..9 {
                for iz in 0..9 {
                    let x = -5.0 + 10.0 * ix as f64 / 8.0;
                    let z = -5.0 + 10.0 * iz as f64 / 8.0;
                    let series = kernel_1d(k, x, Complex64::new(z, 0.0)).value;
                    let integral = kernel_1d_integral(k, x, Complex64::new(z, 0.0))?.value;
                    worst = worst.max((series - integral).norm() / series.norm().max(1.0));
                }
            }
            push(
                &mut table,
                &mut all_pass,
                "kernel",
                format!("dual-route-k{}", j + 1),
                worst,
                tol,
            );
        }
    }

    if want("product-formula") && d == 1 {
        let tol = common.tol.unwrap_or(1e-7);
        let k = config.multiplicities()[0];
        if k > 0.0 {
            let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
            let mut worst = 0.0_f64;
            for &x in &grid {
                for &y in &grid {
                    for &z in &grid {
                        let zc = Complex64::new(z, 0.0);
                        let translated = dunkl_core::convolve::translate_1d_fn(
                            k,
                            y,
                            |t| kernel_1d(k, t, zc).value,
                            x,
                            96,
                        )?;
                        let product = kernel_1d(k, x, zc).value * kernel_1d(k, y, zc).value;
                        worst = worst.max((translated - product).norm());
                    }
                }
            }
            push(
                &mut table,
                &mut all_pass,
                "product-formula",
                "kernel-lattice".to_string(),
                worst,
                tol,
            );
        }
    }

    table.emit(common.out.as_deref(), &common.format)?;
    Ok(if all_pass { 0 } else { 1 })
}
