mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lrising::bounds::{beta_threshold, peierls_constants, peierls_series, PeierlsConstants};
use lrising::contours::partition;
use lrising::covers::{canonical_cover, cover_family, cover_size, top_scale, ContourParams, OpenInterval};
use lrising::energy::{hamiltonian, FieldProfile, ModelParams, DEFAULT_TOL};
use lrising::enumerate::census;
use lrising::fields::{stability_certificate, DEFAULT_SCAN_LIMIT};
use lrising::lattice::{Sign, SpinFlipSet};
use lrising::montecarlo::{run_chain, ChainSpec};
use lrising::verify::{
    ratio_tail_check, sweep_cover_relation, sweep_energy_estimate, sweep_field_difference, sweep_geometric_estimate,
    sweep_interval_disjointness, Corpus, CorpusSpec, VerificationReport,
};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] lrising::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot encode CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(lrising::Error::Resource(_)) | CliError::Io(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "lrising", version, about = "Contours, energy bounds and sampling for the long-range Ising chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cap on worker threads for parallel sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Lemma {
    EnergyEstimate,
    GeometricEstimate,
    CoverRelation,
    IntervalDisjointness,
    FieldDifference,
    RatioTail,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Certified energy of a flip set given as comma-separated twice-values.
    Hamiltonian {
        #[arg(allow_hyphen_values = true)]
        flips: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// (M,a)-partition of a flip set into irreducible contours.
    Partition {
        #[arg(allow_hyphen_values = true)]
        flips: String,
        #[arg(long = "M")]
        m: f64,
        #[arg(long)]
        a: f64,
    },
    /// Canonical covers at every scale, with isolated intervals when M and a are given.
    Covers {
        #[arg(allow_hyphen_values = true)]
        flips: String,
        #[arg(long = "M", requires = "a")]
        m: Option<f64>,
        #[arg(long, requires = "m")]
        a: Option<f64>,
    },
    /// Exact contour counts |C(R)| against 2^{5R/2}.
    Census {
        #[arg(long)]
        rmax: u32,
    },
    /// Run one of the inequality sweeps.
    Verify {
        #[arg(value_enum)]
        lemma: Lemma,
        #[arg(long = "L", default_value_t = 6)]
        l: u32,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long = "M", default_value_t = 64.0)]
        m: f64,
        #[arg(long, default_value_t = 1.5)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        hstar: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        radius: u64,
        #[arg(long, default_value_t = 6)]
        max_flips: usize,
        #[arg(long, default_value_t = 32)]
        max_diam: i64,
        #[arg(long = "M-list", value_delimiter = ',', default_value = "4,16,64")]
        m_list: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Peierls constants and the threshold for one target.
    Constants {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        a: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value_t = 0.5)]
        target: f64,
    },
    /// Smallest β at which the contour series drops below the target.
    BetaThreshold {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        a: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        target: f64,
    },
    /// Stability certificate for the field h_* |x|^{-δ}.
    Stability {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        hstar: f64,
        #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT)]
        scan_limit: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Metropolis estimate of the origin magnetization.
    Mc {
        #[arg(long = "L")]
        l: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        hstar: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        radius: u64,
        #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
        boundary: Sign,
        #[arg(long)]
        steps: u64,
        /// Defaults to a tenth of the steps.
        #[arg(long)]
        burn_in: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

fn parse_sign(s: &str) -> Result<Sign, lrising::Error> {
    s.parse()
}

/// Accepts non-ASCII minus signs as pasted from typeset text.
fn parse_flips(s: &str) -> Result<SpinFlipSet, lrising::Error> {
    s.replace(['\u{2011}', '\u{2212}', '\u{2010}'], "-").parse()
}

#[derive(Serialize)]
struct PartitionReport {
    parts: Vec<SpinFlipSet>,
    externals: Vec<SpinFlipSet>,
}

#[derive(Serialize)]
struct CoverReport {
    n0: u32,
    cover: Vec<Vec<OpenInterval>>,
    cover_size: u64,
}

#[derive(Serialize)]
struct ConstantsReport {
    #[serde(flatten)]
    constants: PeierlsConstants,
    target: f64,
    beta_bar: f64,
}

#[derive(Serialize)]
struct ThresholdReport {
    beta_bar: f64,
    series_at_beta_bar: f64,
    constants: PeierlsConstants,
}

struct Rendered {
    bytes: Vec<u8>,
    violations: bool,
}

fn json<R: Serialize>(cli: &Cli, name: &str, result: &R) -> Result<Vec<u8>, CliError> {
    match cli.format {
        Format::Json => Ok(output::to_json(name, cli, result)?),
        Format::Csv => Err(CliError::Usage(format!("csv output is not available for {name}"))),
    }
}

fn verify(cli: &Cli) -> Result<VerificationReport, CliError> {
    let Command::Verify { lemma, l, alpha, m, a, hstar, delta, radius, max_flips, max_diam, ref m_list, n_max, tol } =
        cli.command
    else {
        unreachable!()
    };
    let params = ModelParams::new(alpha, tol)?;
    let contour = ContourParams::new(m, a)?;
    let corpus = || Corpus::generate(CorpusSpec { max_flips, max_diam, contour });
    Ok(match lemma {
        Lemma::EnergyEstimate => sweep_energy_estimate(l, &params, &contour)?,
        Lemma::GeometricEstimate => sweep_geometric_estimate(&corpus()?, &params, &contour)?,
        Lemma::CoverRelation => {
            // reject an invalid (M,a) before building the corpus
            lrising::bounds::c_of(&contour)?;
            sweep_cover_relation(&corpus()?, &contour)?
        }
        Lemma::IntervalDisjointness => sweep_interval_disjointness(&corpus()?, &contour)?,
        Lemma::FieldDifference => sweep_field_difference(l, &FieldProfile::new(hstar, delta, radius)?, &contour)?,
        Lemma::RatioTail => ratio_tail_check(&params, m_list, n_max)?,
    })
}

fn dispatch(cli: &Cli) -> Result<Rendered, CliError> {
    let mut violations = false;
    let bytes = match &cli.command {
        Command::Hamiltonian { flips, alpha, tol } => {
            let g = parse_flips(flips)?;
            json(cli, "hamiltonian", &hamiltonian(&g, &ModelParams::new(*alpha, *tol)?)?)?
        }
        Command::Partition { flips, m, a } => {
            let g = parse_flips(flips)?;
            let p = partition(&g, &ContourParams::new(*m, *a)?)?;
            json(cli, "partition", &PartitionReport { externals: p.externals(), parts: p.parts })?
        }
        Command::Covers { flips, m, a } => {
            let g = parse_flips(flips)?;
            match (m, a) {
                (Some(m), Some(a)) => json(cli, "covers", &cover_family(&g, &ContourParams::new(*m, *a)?)?)?,
                _ => {
                    let n0 = top_scale(&g)?;
                    let cover = (0..=n0).map(|n| canonical_cover(&g, n)).collect::<Result<_, _>>()?;
                    json(cli, "covers", &CoverReport { n0, cover, cover_size: cover_size(&g)? })?
                }
            }
        }
        Command::Census { rmax } => {
            let rows = census(*rmax)?;
            violations = rows.iter().any(|r| !r.within_bound());
            match cli.format {
                Format::Json => output::to_json("census", cli, &rows)?,
                Format::Csv => output::to_csv(&rows)?,
            }
        }
        Command::Verify { .. } => {
            let report = verify(cli)?;
            violations = !report.passed();
            json(cli, "verify", &report)?
        }
        Command::Constants { alpha, a, m, eta, target } => {
            let constants = peierls_constants(&ModelParams::with_alpha(*alpha)?, &ContourParams::new(*m, *a)?, *eta)?;
            let beta_bar = beta_threshold(&constants, *target)?;
            json(cli, "constants", &ConstantsReport { constants, target: *target, beta_bar })?
        }
        Command::BetaThreshold { alpha, a, m, eta, target } => {
            let constants = peierls_constants(&ModelParams::with_alpha(*alpha)?, &ContourParams::new(*m, *a)?, *eta)?;
            let beta_bar = beta_threshold(&constants, *target)?;
            let series_at_beta_bar = peierls_series(constants.c2 - beta_bar * constants.c3)?;
            json(cli, "beta-threshold", &ThresholdReport { beta_bar, series_at_beta_bar, constants })?
        }
        Command::Stability { alpha, delta, hstar, scan_limit, tol } => {
            let cert =
                stability_certificate(&ModelParams::new(*alpha, *tol)?, &FieldProfile::new(*hstar, *delta, 0)?, *scan_limit)?;
            json(cli, "stability", &cert)?
        }
        Command::Mc { l, alpha, beta, hstar, delta, radius, boundary, steps, burn_in, seed, tol } => {
            let spec = ChainSpec {
                l: *l,
                beta: *beta,
                model_params: ModelParams::new(*alpha, *tol)?,
                profile: FieldProfile::new(*hstar, *delta, *radius)?,
                boundary_sign: *boundary,
                steps: *steps,
                burn_in: burn_in.unwrap_or(steps / 10),
                seed: *seed,
            };
            let result = run_chain(&spec)?;
            match cli.format {
                Format::Json => output::to_json("mc", cli, &result)?,
                Format::Csv => output::to_csv(&result.magnetization_trace)?,
            }
        }
    };
    Ok(Rendered { bytes, violations })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(3);
        }
    }
    let rendered = dispatch(&cli).and_then(|r| {
        output::emit(&r.bytes, cli.output.as_deref())?;
        Ok(r)
    });
    match rendered {
        Ok(r) if r.violations => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
