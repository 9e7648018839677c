//! The `gridtri` command line.

pub mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gridtri_core::enumeration::{enumerate_codes, kth_with, tally_regularity_with, EnumerationOptions};
use gridtri_core::regularity::{fold_constraints, is_regular, minimal_irregular, Configuration};
use gridtri_core::reporting::{
    bound_checks, capacity_rows, count_triangulations, parse_results_csv, render_table, CountMethod, TableFormat,
};
use gridtri_core::shapes::{count_by_dp_with, dp_sample, DpOptions, ShapeCounts};
use gridtri_core::walk::{run_walk, WalkConfig, WalkStats, DEFAULT_SEED};
use gridtri_core::{GridSpec, Triangulation};

const DEFAULT_BUDGET: u64 = 2 << 30;

#[derive(Parser, Debug)]
#[command(name = "gridtri", version, about = "Unimodular triangulations of the m x n grid")]
pub struct Cli {
    /// Memory cap in bytes for enumeration and the shape DP.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget_bytes: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GridArgs {
    #[arg(short = 'm', value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    #[arg(short = 'n', value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
}

impl GridArgs {
    fn grid(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.m, self.n)?)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Dp,
    Strip,
    Enumerate,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMethod {
    /// Uniform index into the enumeration order.
    Kth,
    /// Dismantling by the shape counts.
    Dp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the exact number of triangulations.
    Count {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        /// Sum only over triangles right of the last upward jump (DP only).
        #[arg(long)]
        prune: bool,
        /// Also print the number of shapes and the peak number held (DP only).
        #[arg(long)]
        census: bool,
    },
    /// Walk the flip graph: count, tally regularity, dump, or pick the k-th.
    Enumerate {
        #[command(flatten)]
        grid: GridArgs,
        /// Print `total,regular,irregular`.
        #[arg(long)]
        tally_regularity: bool,
        /// Write triangulations as JSON files (only the irregular ones when tallying).
        #[arg(long, value_name = "DIR")]
        emit_json: Option<PathBuf>,
        /// Print the k-th triangulation (1-based) in visit order.
        #[arg(long, value_name = "K", conflicts_with_all = ["tally_regularity", "emit_json"])]
        kth: Option<u64>,
    },
    /// Draw random triangulations, one JSON document per line.
    Sample {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = SampleMethod::Kth)]
        method: SampleMethod,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the lazy flip walk from the initial triangulation.
    Walk {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        record_every: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Print `irregular,max_edge,avg_edge,avg_interior_edge` over the samples.
        #[arg(long)]
        stats: bool,
        #[arg(long, value_name = "DIR")]
        emit_json: Option<PathBuf>,
    },
    /// Decide regularity of a triangulation stored as JSON.
    Check {
        file: PathBuf,
        /// Also print the lifting or certificate on stdout.
        #[arg(long)]
        certificate: bool,
        /// For irregular input, shrink to a minimal irregular set of triangles.
        #[arg(long)]
        minimal_config: bool,
    },
    /// Capacities log2 f(m,n) / mn for n = 1..n_max.
    Capacity {
        #[arg(short = 'm', value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check the known inequalities against counts in a CSV file.
    Bounds {
        /// CSV with columns m,n,count and optionally irregular.
        #[arg(long)]
        from: PathBuf,
    },
    /// Draw a triangulation as SVG.
    Render {
        file: PathBuf,
        /// Shade the triangles of this JSON file (same schema as the input).
        #[arg(long, value_name = "FILE", conflicts_with = "minimal_config")]
        highlight: Option<PathBuf>,
        /// Shade a minimal irregular configuration of the input.
        #[arg(long)]
        minimal_config: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

/// Execute a parsed command line, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let budget = cli.budget_bytes;
    match &cli.command {
        Command::Count { grid, method, prune, census } => count(grid.grid()?, *method, *prune, *census, budget, out),
        Command::Enumerate { grid, tally_regularity, emit_json, kth } => {
            enumerate(grid.grid()?, *tally_regularity, emit_json.as_deref(), *kth, budget, out)
        }
        Command::Sample { grid, method, count, seed } => sample(grid.grid()?, *method, *count, *seed, budget, out),
        Command::Walk { grid, steps, record_every, seed, stats, emit_json } => {
            let cfg = WalkConfig::new(grid.grid()?, *steps, *record_every, *seed)?;
            walk(&cfg, *stats, emit_json.as_deref(), out)
        }
        Command::Check { file, certificate, minimal_config } => check(file, *certificate, *minimal_config, out),
        Command::Capacity { m, n_max, format } => {
            let format = match format {
                Format::Csv => TableFormat::Csv,
                Format::Text => TableFormat::Text,
            };
            let rows = capacity_rows(*m, *n_max, CountMethod::Auto, budget)?;
            out.write_all(render_table(&rows, format).as_bytes())?;
            Ok(())
        }
        Command::Bounds { from } => {
            let text = fs::read_to_string(from).with_context(|| format!("reading {}", from.display()))?;
            let (rows, tallies) = parse_results_csv(&text)?;
            let report = bound_checks(&rows, &tallies);
            out.write_all(report.render().as_bytes())?;
            let failed = report.failures().count();
            if failed > 0 {
                bail!("{failed} of {} inequalities fail", report.checks.len());
            }
            Ok(())
        }
        Command::Render { file, highlight, minimal_config, output } => {
            let t = read_triangulation(file)?;
            let config = if *minimal_config {
                Some(minimal_irregular(&t)?)
            } else if let Some(path) = highlight {
                let h = read_json_triangles(path)?;
                Some(Configuration::new(h.triangles().to_vec())?)
            } else {
                None
            };
            let doc = svg::render_svg(&t, config.as_ref());
            match output {
                Some(path) => fs::write(path, doc).with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(doc.as_bytes())?,
            }
            Ok(())
        }
    }
}

fn count(grid: GridSpec, method: Method, prune: bool, census: bool, budget: u64, out: &mut dyn Write) -> Result<()> {
    if (prune || census) && method != Method::Dp {
        bail!("--prune and --census apply to --method dp only");
    }
    match method {
        Method::Dp => {
            let r = count_by_dp_with(grid, &DpOptions { prune, budget_bytes: budget, ..DpOptions::default() })?;
            writeln!(out, "{}", r.count)?;
            if census {
                writeln!(out, "shape_count {}", r.shape_count)?;
                writeln!(out, "peak_resident {}", r.peak_resident)?;
                writeln!(out, "max_jump {}", r.max_jump)?;
            }
        }
        Method::Strip => writeln!(out, "{}", count_triangulations(grid, CountMethod::Strip, budget)?)?,
        Method::Enumerate => writeln!(out, "{}", count_triangulations(grid, CountMethod::Enumerate, budget)?)?,
    }
    Ok(())
}

fn json_name(dir: &Path, prefix: &str, i: u64) -> PathBuf {
    dir.join(format!("{prefix}-{i:06}.json"))
}

fn enumerate(
    grid: GridSpec,
    tally: bool,
    emit: Option<&Path>,
    kth: Option<u64>,
    budget: u64,
    out: &mut dyn Write,
) -> Result<()> {
    let opts = EnumerationOptions { budget_bytes: budget };
    if let Some(k) = kth {
        writeln!(out, "{}", kth_with(grid, k, &opts)?.to_json())?;
        return Ok(());
    }
    if let Some(dir) = emit {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut io_error = None;
    let mut written = 0u64;
    let mut save = |t: &Triangulation| {
        if let (Some(dir), None) = (emit, &io_error) {
            written += 1;
            if let Err(e) = fs::write(json_name(dir, "tri", written), t.to_json()) {
                io_error = Some(e);
            }
        }
    };
    if tally {
        let t = tally_regularity_with(grid, &opts, |mesh| save(&mesh.to_triangulation()))?;
        writeln!(out, "{}", t.csv_line())?;
    } else {
        let total = enumerate_codes(grid, &opts, |space, code| save(&space.decode(code)))?;
        writeln!(out, "{total}")?;
    }
    if let Some(e) = io_error {
        return Err(e).context("writing triangulation files");
    }
    Ok(())
}

fn sample(grid: GridSpec, method: SampleMethod, count: u64, seed: u64, budget: u64, out: &mut dyn Write) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match method {
        SampleMethod::Dp => {
            let counts = ShapeCounts::build(grid)?;
            for _ in 0..count {
                writeln!(out, "{}", dp_sample(&counts, &mut rng)?.to_json())?;
            }
        }
        SampleMethod::Kth => {
            let total = count_by_dp_with(grid, &DpOptions { budget_bytes: budget, ..DpOptions::default() })?.count;
            let Some(total) = total.to_u64() else {
                bail!("{grid} has {total} triangulations, too many to index");
            };
            let ks: Vec<u64> = (0..count).map(|_| rng.gen_range(1..=total)).collect();
            let mut wanted: Vec<(u64, usize)> = ks.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            wanted.sort_unstable();
            let mut found: Vec<Option<String>> = vec![None; ks.len()];
            let mut seen = 0u64;
            let mut next = 0usize;
            enumerate_codes(grid, &EnumerationOptions { budget_bytes: budget }, |space, code| {
                seen += 1;
                if next < wanted.len() && wanted[next].0 == seen {
                    let json = space.decode(code).to_json();
                    while next < wanted.len() && wanted[next].0 == seen {
                        found[wanted[next].1] = Some(json.clone());
                        next += 1;
                    }
                }
            })?;
            for json in found {
                writeln!(out, "{}", json.context("enumeration ended early")?)?;
            }
        }
    }
    Ok(())
}

fn walk(cfg: &WalkConfig, stats: bool, emit: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    if let Some(dir) = emit {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut acc = WalkStats::default();
    let mut io_error = None;
    let mut i = 0u64;
    let samples = run_walk(cfg, |mesh| {
        i += 1;
        if stats {
            acc.add_mesh(mesh, gridtri_core::regularity::is_regular_mesh(mesh));
        }
        if let (Some(dir), None) = (emit, &io_error) {
            if let Err(e) = fs::write(json_name(dir, "sample", i), mesh.to_triangulation().to_json()) {
                io_error = Some(e);
            }
        }
    })?;
    if let Some(e) = io_error {
        return Err(e).context("writing sample files");
    }
    if stats {
        writeln!(out, "{}", acc.csv_row())?;
    } else {
        writeln!(out, "{samples}")?;
    }
    Ok(())
}

fn read_json_triangles(path: &Path) -> Result<Triangulation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Triangulation::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_triangulation(path: &Path) -> Result<Triangulation> {
    let t = read_json_triangles(path)?;
    let report = t.validate();
    if !report.valid {
        bail!("{} is not a unimodular triangulation: {:?}", path.display(), report.violations);
    }
    Ok(t)
}

/// `dir/stem.suffix.json` next to `file`.
fn sibling(file: &Path, suffix: &str) -> PathBuf {
    let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
    file.with_file_name(format!("{stem}.{suffix}.json"))
}

fn check(file: &Path, print: bool, minimal: bool, out: &mut dyn Write) -> Result<()> {
    let t = read_triangulation(file)?;
    let sys = fold_constraints(&t)?;
    let result = is_regular(&t)?;
    if !result.verify(&sys) {
        bail!("solver witness failed verification");
    }
    let doc = serde_json::to_string_pretty(&result.to_json(&sys))?;
    let (verdict, suffix) = if result.regular { ("regular", "lifting") } else { ("irregular", "certificate") };
    let path = sibling(file, suffix);
    fs::write(&path, format!("{doc}\n")).with_context(|| format!("writing {}", path.display()))?;
    writeln!(out, "{verdict}")?;
    writeln!(out, "{}", path.display())?;
    if print {
        writeln!(out, "{doc}")?;
    }
    if minimal && !result.regular {
        let config = minimal_irregular(&t)?;
        let sub = Triangulation::from_triangles(t.grid(), config.triangles().to_vec());
        let path = sibling(file, "minimal");
        fs::write(&path, format!("{}\n", sub.to_json())).with_context(|| format!("writing {}", path.display()))?;
        writeln!(out, "minimal irregular configuration: {} triangles", config.len())?;
        writeln!(out, "{}", path.display())?;
    }
    Ok(())
}

/// Parse `argv`; usage errors exit with code 2, domain errors with 1.
pub fn main_with(argv: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock).and_then(|()| Ok(lock.flush()?)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
