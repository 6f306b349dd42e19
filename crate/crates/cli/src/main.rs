//! `hexgconv`: resampling, hexagonal and group convolution, property
//! checks and rendering from the command line.
//!
//! Exit codes: 0 on success, 1 when a property check fails, 2 on usage,
//! shape or I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hexgconv::gconv::{GConv, GFeatureMap, Layer};
use hexgconv::hexconv::{hexconv, Backend, ConvSpec};
use hexgconv::hexgrid::{read_pgm, render_pgm, resample_square_to_hex, HexFieldOfView};
use hexgconv::verify::{run_suites, write_failure_dumps, CheckConfig, Suite};
use hexgconv::{Group, HexFilter, HexImage};

#[derive(Parser)]
#[command(
    name = "hexgconv",
    version,
    about = "Hexagonal lattice processing and p6/p6m group convolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Axial,
    DoubleWidth,
    Offset,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Axial => Backend::Axial,
            BackendArg::DoubleWidth => Backend::DoubleWidth,
            BackendArg::Offset => Backend::Offset,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    P6,
    P6m,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::P6 => Group::P6,
            GroupArg::P6m => Group::P6m,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LayerArg {
    First,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Groups,
    Coords,
    Conv,
    Gconv,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Groups => vec![Suite::Groups],
            SuiteArg::Coords => vec![Suite::Coords],
            SuiteArg::Conv => vec![Suite::Conv],
            SuiteArg::Gconv => vec![Suite::Gconv],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Resample a PGM greymap onto a hexagonal lattice (bilinear).
    Resample {
        /// Source image, P2 or P5.
        src: PathBuf,
        /// Output HEXT feature map.
        out: PathBuf,
        /// Distance between neighbouring hex sites, in source pixels.
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
    },
    /// Planar hexagonal correlation of a feature map with a filter bank.
    Convolve {
        input: PathBuf,
        filter: PathBuf,
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = BackendArg::Axial)]
        backend: BackendArg,
    },
    /// Group convolution on p6 or p6m.
    Gconv {
        input: PathBuf,
        filters: PathBuf,
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = GroupArg::P6)]
        group: GroupArg,
        /// `first` lifts a planar map; `full` maps group maps to group maps.
        #[arg(long, value_enum, default_value_t = LayerArg::First)]
        layer: LayerArg,
        #[arg(long, value_enum, default_value_t = BackendArg::Axial)]
        backend: BackendArg,
    },
    /// Run seeded property suites.
    Check {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the tolerance of every numeric property.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Random instances per convolution property.
        #[arg(long, default_value_t = 50)]
        instances: usize,
        /// Directory for failing-instance dumps.
        #[arg(long, default_value = "check-failures")]
        dump_dir: PathBuf,
    },
    /// Write one plane of a feature map as a P5 greymap.
    Render {
        input: PathBuf,
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        channel: usize,
        /// Orientation channel; only valid for maps on a group.
        #[arg(long)]
        orientation: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Resample { src, out, spacing } => {
            let img = read_pgm(&src).map_err(|e| e.to_string())?;
            let hex = resample_square_to_hex(&img, spacing).map_err(|e| e.to_string())?;
            let fov =
                HexFieldOfView::new(img.width, img.height, spacing).map_err(|e| e.to_string())?;
            hex.write_hext(&out).map_err(|e| e.to_string())?;
            println!(
                "rows={} cols={} valid={} field_of_view={}",
                hex.rows(),
                hex.cols(),
                hex.valid_count(),
                fov.valid_count()
            );
        }
        Command::Convolve {
            input,
            filter,
            out,
            backend,
        } => {
            let f = HexImage::read_hext(&input).map_err(|e| e.to_string())?;
            let psi = HexFilter::read_hext(&filter).map_err(|e| e.to_string())?;
            let result =
                hexconv(&f, &psi, ConvSpec::new(backend.into())).map_err(|e| e.to_string())?;
            result.write_hext(&out).map_err(|e| e.to_string())?;
        }
        Command::Gconv {
            input,
            filters,
            out,
            group,
            layer,
            backend,
        } => {
            let group = Group::from(group);
            let layer = match layer {
                LayerArg::First => Layer::First,
                LayerArg::Full => Layer::Full,
            };
            let f = HexImage::read_hext(&input).map_err(|e| e.to_string())?;
            let psi = HexFilter::read_hext(&filters).map_err(|e| e.to_string())?;
            if layer == Layer::Full {
                // validates the orientation count against the group
                GFeatureMap::new(group, f.clone()).map_err(|e| e.to_string())?;
            }
            let conv = GConv::new(group, layer, psi.size()).map_err(|e| e.to_string())?;
            let bank = conv.bank(&psi).map_err(|e| e.to_string())?;
            let [a, b, s1, s2] = bank.shape();
            println!("bank shape: {a}x{b}x{s1}x{s2}");
            let result = conv
                .apply(&f, &psi, ConvSpec::new(backend.into()))
                .map_err(|e| e.to_string())?;
            result.image().write_hext(&out).map_err(|e| e.to_string())?;
        }
        Command::Check {
            suite,
            seed,
            tolerance,
            instances,
            dump_dir,
        } => {
            let cfg = CheckConfig {
                tolerance,
                instances,
                ..CheckConfig::with_seed(seed)
            };
            let suites = suite.suites();
            let reports = run_suites(&suites, &cfg);
            for r in &reports {
                println!("{r}");
            }
            if suites.contains(&Suite::Gconv) {
                let max = reports
                    .iter()
                    .filter(|r| r.name.starts_with("equivariance"))
                    .map(|r| r.max_error)
                    .fold(0.0, f64::max);
                println!("max equivariance residual: {max:.3e}");
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed == 0 {
                println!("all {} properties passed", reports.len());
                return Ok(ExitCode::SUCCESS);
            }
            let files = write_failure_dumps(&reports, &dump_dir).map_err(|e| e.to_string())?;
            println!(
                "{failed} of {} properties failed; {} reproduction files in {}",
                reports.len(),
                files.len(),
                dump_dir.display()
            );
            return Ok(ExitCode::from(1));
        }
        Command::Render {
            input,
            out,
            channel,
            orientation,
        } => {
            let f = HexImage::read_hext(&input).map_err(|e| e.to_string())?;
            if orientation.is_some() && f.orientations() == 1 {
                return Err("--orientation given but the map is planar (1 orientation)".into());
            }
            render_pgm(&f, channel, orientation.unwrap_or(0), &out).map_err(|e| e.to_string())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
