//! `lipseg`: seeded region growing with LIP heterogeneity criteria.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lipseg::imgio::{self, real_or_inf, SegmentationStats};
use lipseg::synth::{self, PlateauSpec};
use lipseg::{
    grow, heterogeneity_additive, heterogeneity_multiplicative, heterogeneity_range, ConfigError,
    Connectivity, Criterion, CriterionConfig, GrayImage, GrayScale, GrowError, IoError, Point,
    Region,
};

#[derive(Parser)]
#[command(name = "lipseg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a region from a seed pixel and write the requested artifacts.
    Grow(GrowArgs),
    /// Generate synthetic images or apply LIP illumination transforms.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Print the heterogeneity of a masked region as JSON.
    Metrics(MetricsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    /// Gray-level range sup - inf.
    Range,
    /// LIP-additive heterogeneity.
    LipAdd,
    /// LIP-multiplicative heterogeneity (threshold >= 1).
    LipMul,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Range => Criterion::ClassicalRange,
            CriterionArg::LipAdd => Criterion::LipAdditive,
            CriterionArg::LipMul => Criterion::LipMultiplicative,
        }
    }
}

#[derive(Args)]
struct GrowArgs {
    /// Input image (PGM, PPM or LIPF).
    #[arg(long)]
    input: PathBuf,
    /// Seed pixel as COLUMN,ROW, 0-based.
    #[arg(long, value_parser = parse_seed)]
    seed: Point,
    #[arg(long, value_enum)]
    criterion: CriterionArg,
    /// Homogeneity threshold; required, there is no default.
    #[arg(long, allow_negative_numbers = true)]
    threshold: f64,
    /// Neighborhood: 4 or 8.
    #[arg(long, default_value_t = 8, value_parser = parse_connectivity)]
    connectivity: u8,
    /// Iteration budget (default: width x height).
    #[arg(long)]
    max_iters: Option<usize>,
    /// Output mask (binary PGM, members 255).
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Output overlay (binary PPM).
    #[arg(long)]
    overlay: Option<PathBuf>,
    /// Output statistics (JSON).
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Exact real-valued text format.
    Lipf,
    /// Binary PGM, values rounded to bytes.
    Pgm,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: PathBuf,
    /// Output format (default: lipf for a .lipf extension, pgm otherwise).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Two plateaus joined by a linear ramp.
    TwoPlateau {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        val_a: f64,
        #[arg(long)]
        val_b: f64,
        /// Ramp width in columns.
        #[arg(long, default_value_t = 0)]
        ramp: usize,
        /// Scale bound M.
        #[arg(long, default_value_t = 256.0)]
        bound: f64,
        #[command(flatten)]
        output: Output,
    },
    /// LIP-add a constant tone to every pixel.
    Bias {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        output: Output,
    },
    /// LIP-multiply every pixel by a positive scalar.
    Gain {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        output: Output,
    },
    /// LIP-add a tone varying linearly from the left to the right column.
    BiasGradient {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        c_left: f64,
        #[arg(long)]
        c_right: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    input: PathBuf,
    /// Mask image; nonzero pixels form the region.
    #[arg(long)]
    mask: PathBuf,
}

fn parse_seed(s: &str) -> Result<Point, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected COLUMN,ROW, got {s:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad seed coordinate {v:?}"))
    };
    Ok(Point::new(parse(x)?, parse(y)?))
}

fn parse_connectivity(s: &str) -> Result<u8, String> {
    match s {
        "4" => Ok(4),
        "8" => Ok(8),
        _ => Err(format!("connectivity must be 4 or 8, got {s:?}")),
    }
}

/// Failure of a subcommand, carrying its exit code.
enum Failure {
    /// Bad arguments or configuration.
    Usage(String),
    /// I/O or format error.
    Io(IoError),
    /// Seed outside the image.
    Seed(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Seed(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Seed(m) => m.clone(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Io(e)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GrowError> for Failure {
    fn from(e: GrowError) -> Self {
        match e {
            GrowError::SeedOutOfBounds { .. } => Failure::Seed(e.to_string()),
            GrowError::Config(c) => c.into(),
        }
    }
}

fn cmd_grow(args: GrowArgs) -> Result<(), Failure> {
    if args.mask.is_none() && args.overlay.is_none() && args.stats.is_none() {
        return Err(Failure::Usage(
            "at least one of --mask, --overlay, --stats is required".into(),
        ));
    }
    let crit = CriterionConfig::new(args.criterion.into(), args.threshold)?;
    let connectivity = match args.connectivity {
        4 => Connectivity::Four,
        _ => Connectivity::Eight,
    };
    let img = imgio::read_image(&args.input)?;
    let result = grow(&img, args.seed, crit, connectivity, args.max_iters)?;

    if let Some(path) = &args.mask {
        imgio::write_mask(&result.region, path)?;
    }
    if let Some(path) = &args.overlay {
        imgio::write_overlay(&img, &result.region, result.seed, path)?;
    }
    if let Some(path) = &args.stats {
        imgio::write_stats(&SegmentationStats::from_result(&result, &crit), path)?;
    }
    println!(
        "region_size={} iterations={} final_heterogeneity={}",
        result.region.len(),
        result.iterations,
        result.final_heterogeneity
    );
    Ok(())
}

fn write_output(img: &GrayImage, output: &Output) -> Result<(), Failure> {
    let format =
        output
            .format
            .unwrap_or_else(|| match output.out.extension().and_then(|e| e.to_str()) {
                Some(ext) if ext.eq_ignore_ascii_case("lipf") => Format::Lipf,
                _ => Format::Pgm,
            });
    match format {
        Format::Lipf => imgio::write_lipf(img, &output.out)?,
        Format::Pgm => imgio::write_pgm(img, &output.out)?,
    }
    Ok(())
}

fn cmd_synth(cmd: SynthCommand) -> Result<(), Failure> {
    let (img, output) = match cmd {
        SynthCommand::TwoPlateau {
            width,
            height,
            val_a,
            val_b,
            ramp,
            bound,
            output,
        } => {
            let scale = GrayScale::new(bound).map_err(ConfigError::from)?;
            let spec = PlateauSpec {
                width,
                height,
                val_a,
                val_b,
                ramp_width: ramp,
            };
            (synth::make_two_plateau(&spec, scale)?, output)
        }
        SynthCommand::Bias { input, c, output } => {
            let img = imgio::read_image(&input)?;
            (synth::apply_lip_bias(&img, c)?, output)
        }
        SynthCommand::Gain {
            input,
            lambda,
            output,
        } => {
            let img = imgio::read_image(&input)?;
            (synth::apply_lip_gain(&img, lambda)?, output)
        }
        SynthCommand::BiasGradient {
            input,
            c_left,
            c_right,
            output,
        } => {
            let img = imgio::read_image(&input)?;
            (
                synth::apply_lip_bias_gradient(&img, c_left, c_right)?,
                output,
            )
        }
    };
    write_output(&img, &output)
}

fn masked_region(img: &GrayImage, mask_path: &Path) -> Result<Region, Failure> {
    let (w, h, mask) = imgio::read_mask(mask_path)?;
    if (w, h) != (img.width(), img.height()) {
        return Err(Failure::Usage(format!(
            "mask is {w}x{h} but image is {}x{}",
            img.width(),
            img.height()
        )));
    }
    let mut region = Region::for_image(img);
    for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
        region
            .insert(img.point_of(i), img)
            .expect("mask pixels are distinct and in the domain");
    }
    if region.is_empty() {
        return Err(Failure::Usage("mask selects no pixel".into()));
    }
    Ok(region)
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), Failure> {
    let img = imgio::read_image(&args.input)?;
    let region = masked_region(&img, &args.mask)?;
    let h = |r: Result<f64, _>| real_or_inf::to_value(r.expect("region is nonempty"));
    let json = serde_json::json!({
        "range": h(heterogeneity_range(&region, &img)),
        "lip_add": h(heterogeneity_additive(&region, &img)),
        "lip_mul": h(heterogeneity_multiplicative(&region, &img)),
    });
    println!("{json}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("lipseg: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Grow(args) => cmd_grow(args),
        Command::Synth(cmd) => cmd_synth(cmd),
        Command::Metrics(args) => cmd_metrics(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lipseg: {}", f.message().replace('\n', " "));
            ExitCode::from(f.exit_code())
        }
    }
}
