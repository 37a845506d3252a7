//! Command-line front end.
//!
//! Exit codes: 0 success, 1 rejected request or unreadable input, 2 dataset
//! error, 3 infeasible scenario, 64 bad command-line usage.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use freight_tco_core::dataset::{AdvancementLevel, InfraType, Powertrain, VehicleClass};
use freight_tco_core::fleet::FleetProfile;
use freight_tco_core::schedule::DepotVehicle;

use crate::dataset::{self, LoadedDataset};
use crate::engine::{
    BreakevenRequest, Engine, EngineError, FleetSelector, InfraTcoRequest, ProjectRequest, ScheduleRequest,
    SensitivityRequest, SeriesPair, SystemTcoRequest, VehicleTcoRequest,
};
use crate::fleetgen::{self, FleetGeneratorParams};
use crate::report::{self, Format, Report};

pub const EXIT_REQUEST: i32 = 1;
pub const EXIT_DATASET: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "freight-tco", version, about = "Total cost of ownership for freight trucks and their refueling infrastructure")]
pub struct Cli {
    /// Dataset file (TOML). Defaults to the bundled dataset.
    #[arg(long, global = true)]
    pub dataset: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct FleetArgs {
    /// Fleet file: JSON with a `vehicles` array (id, arrival_h, dwell_h, daily_miles).
    #[arg(long, conflicts_with_all = ["fleet_size", "seed"])]
    pub fleet: Option<PathBuf>,
    /// Trucks drawn from the calibration preset.
    #[arg(long)]
    pub fleet_size: Option<u32>,
    /// Seed for the calibration preset.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Whole-life cost of one vehicle.
    VehicleTco {
        #[arg(long, conflicts_with_all = ["class", "powertrain"], required_unless_present_all = ["class", "powertrain"])]
        variant: Option<String>,
        #[arg(long, value_parser = parse_class, requires = "powertrain")]
        class: Option<VehicleClass>,
        #[arg(long, value_parser = parse_powertrain, requires = "class")]
        powertrain: Option<Powertrain>,
        #[arg(long)]
        year: Option<i32>,
        #[arg(long, value_parser = parse_level)]
        advancement: Option<AdvancementLevel>,
    },
    /// Lifetime cost of a station installation.
    InfraTco {
        #[arg(long, value_parser = parse_infra)]
        infra_type: InfraType,
        #[arg(long)]
        stations: u32,
        /// Carrier units dispensed per day (gal, kWh or kg).
        #[arg(long)]
        daily_throughput: f64,
        #[arg(long)]
        year: Option<i32>,
        #[arg(long)]
        horizon_years: Option<u32>,
    },
    /// Vehicle plus allocated infrastructure cost per mile.
    SystemTco {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        year: Option<i32>,
        #[arg(long, value_parser = parse_level)]
        advancement: Option<AdvancementLevel>,
        #[command(flatten)]
        fleet: FleetArgs,
    },
    /// Minimum station count for a depot instance.
    Schedule {
        /// CSV with columns id,arrival_h,dwell_h,required_h, or `empty`.
        #[arg(long, conflicts_with = "variant", required_unless_present = "variant")]
        instance: Option<String>,
        /// Schedule the fleet's visits to the first station group of this variant.
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        station_max_hours: Option<f64>,
        #[command(flatten)]
        fleet: FleetArgs,
    },
    /// Levelized cost projections with advancement bands.
    Project {
        /// Comma-separated variant ids (default: all).
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<String>>,
        /// Comma-separated years (default: 2025,2030,2035,2040).
        #[arg(long, value_delimiter = ',')]
        years: Option<Vec<i32>>,
        #[arg(long)]
        baseline: Option<String>,
        #[command(flatten)]
        fleet: FleetArgs,
    },
    /// One-factor-at-a-time sensitivity of the system cost.
    Sensitivity {
        #[arg(long)]
        variant: String,
        /// Comma-separated factor ids (default: every applicable factor).
        #[arg(long, value_delimiter = ',')]
        factors: Option<Vec<String>>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        #[arg(long)]
        year: Option<i32>,
        #[arg(long, value_parser = parse_level)]
        advancement: Option<AdvancementLevel>,
        #[command(flatten)]
        fleet: FleetArgs,
    },
    /// First year each variant is at or below the baseline.
    Breakeven {
        /// JSON file with years, alt_usd_per_mile and baseline_usd_per_mile.
        #[arg(long, conflicts_with_all = ["variants", "years", "baseline", "fleet", "fleet_size", "seed"])]
        series: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        years: Option<Vec<i32>>,
        #[arg(long)]
        baseline: Option<String>,
        #[command(flatten)]
        fleet: FleetArgs,
    },
    /// Variants, their infrastructure and applicable factors.
    Variants,
    /// Draw a synthetic fleet and print it as JSON.
    Fleet {
        /// Generator parameters (JSON). Defaults to the calibration preset.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        fleet_size: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dataset utilities.
    Dataset {
        #[command(subcommand)]
        action: DatasetAction,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum DatasetAction {
    /// Validate and list warnings.
    Check,
    /// Print the dataset as TOML.
    Dump,
    /// Print the content hash.
    Hash,
}

fn parse_class(s: &str) -> Result<VehicleClass, String> {
    VehicleClass::parse(s).ok_or_else(|| format!("expected one of: {}", VehicleClass::ALL.map(|c| c.as_str()).join(", ")))
}

fn parse_powertrain(s: &str) -> Result<Powertrain, String> {
    Powertrain::parse(s).ok_or_else(|| format!("expected one of: {}", Powertrain::ALL.map(|c| c.as_str()).join(", ")))
}

fn parse_infra(s: &str) -> Result<InfraType, String> {
    InfraType::parse(s).ok_or_else(|| format!("expected one of: {}", InfraType::ALL.map(|c| c.as_str()).join(", ")))
}

fn parse_level(s: &str) -> Result<AdvancementLevel, String> {
    AdvancementLevel::ALL
        .into_iter()
        .find(|l| l.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| "expected one of: low, moderate, high".to_string())
}

/// A failure with its exit code and message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn request(message: impl Into<String>) -> Self {
        Self { code: EXIT_REQUEST, message: message.into() }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Self { code: e.exit_code(), message: e.to_string() }
    }
}

fn load(path: Option<&Path>) -> Result<LoadedDataset, Failure> {
    let loaded = match path {
        Some(p) => dataset::load_dataset(p),
        None => dataset::parse_dataset(dataset::DEFAULT_DATASET),
    };
    loaded.map_err(|e| Failure { code: EXIT_DATASET, message: e.to_string() })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::request(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        Failure::request(format!("{}: {field}: {}", path.display(), e.inner()))
    })
}

/// Reads a depot instance: CSV with header `id,arrival_h,dwell_h,required_h`.
pub fn read_instance(spec: &str) -> Result<Vec<DepotVehicle>, Failure> {
    if spec == "empty" {
        return Ok(Vec::new());
    }
    let text = read(Path::new(spec))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    rdr.deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Failure::request(format!("{spec}: record {}: {e}", i + 1))))
        .collect()
}

impl FleetArgs {
    fn selector(&self) -> Result<Option<FleetSelector>, Failure> {
        if let Some(path) = &self.fleet {
            let profile: FleetProfile = read_json(path)?;
            return Ok(Some(FleetSelector { vehicles: Some(profile.vehicles), ..Default::default() }));
        }
        if self.fleet_size.is_none() && self.seed.is_none() {
            return Ok(None);
        }
        Ok(Some(FleetSelector { fleet_size: self.fleet_size, seed: self.seed, vehicles: None }))
    }
}

fn emit<R: Report>(r: &R, format: Format) -> Result<String, Failure> {
    Ok(report::render(r, format))
}

/// Runs a parsed command and returns the text to print.
pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let fmt = cli.format;
    if let Command::Fleet { params, fleet_size, seed } = &cli.command {
        let mut p: FleetGeneratorParams = match params {
            Some(path) => read_json(path)?,
            None => fleetgen::calibration_preset(),
        };
        if let Some(n) = fleet_size {
            p.fleet_size = *n;
        }
        if let Some(s) = seed {
            p.seed = *s;
        }
        let fleet = fleetgen::generate(&p).map_err(Failure::request)?;
        return Ok(report::structured(&fleet));
    }
    if let Command::Schedule { instance: Some(spec), station_max_hours, .. } = &cli.command {
        let req = ScheduleRequest { vehicles: read_instance(spec)?, station_max_hours: *station_max_hours };
        let engine = Engine::from(load(cli.dataset.as_deref())?);
        return emit(&engine.schedule(&req)?, fmt);
    }

    let loaded = load(cli.dataset.as_deref())?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    if let Command::Dataset { action } = &cli.command {
        return Ok(match action {
            DatasetAction::Check => format!("ok: {} warning(s), sha256 {}\n", loaded.warnings.len(), loaded.hash),
            DatasetAction::Dump => dataset::to_toml(&loaded.dataset),
            DatasetAction::Hash => format!("{}\n", loaded.hash),
        });
    }
    let engine = Engine::from(loaded);

    match &cli.command {
        Command::VehicleTco { variant, class, powertrain, year, advancement } => {
            let req = VehicleTcoRequest {
                variant: variant.clone(),
                class: *class,
                powertrain: *powertrain,
                year: *year,
                advancement: *advancement,
            };
            emit(&engine.vehicle_tco(&req)?, fmt)
        }
        Command::InfraTco { infra_type, stations, daily_throughput, year, horizon_years } => {
            let req = InfraTcoRequest {
                infra_type: *infra_type,
                stations: *stations,
                daily_throughput: *daily_throughput,
                year: *year,
                horizon_years: *horizon_years,
            };
            emit(&engine.infra_tco(&req)?, fmt)
        }
        Command::SystemTco { variant, year, advancement, fleet } => {
            let req = SystemTcoRequest { variant: variant.clone(), year: *year, advancement: *advancement, fleet: fleet.selector()? };
            emit(&engine.system_tco(&req)?, fmt)
        }
        Command::Schedule { variant: Some(variant), station_max_hours, fleet, .. } => {
            let fleet = engine.fleet(fleet.selector()?.as_ref())?;
            let profile = freight_tco_core::vehicle::VehicleProfile::for_variant(&engine.dataset, variant)
                .map_err(|_| EngineError::field("variant", format!("unknown variant `{variant}`")))?;
            let kind = profile.infrastructure[0];
            let (instance, _) = freight_tco_core::fleet::service_instance(&engine.dataset, &profile, &fleet, kind)
                .map_err(|e| Failure::request(e.to_string()))?;
            let req = ScheduleRequest {
                vehicles: instance.vehicles,
                station_max_hours: Some(station_max_hours.unwrap_or(instance.station_max_hours)),
            };
            emit(&engine.schedule(&req)?, fmt)
        }
        Command::Project { variants, years, baseline, fleet } => {
            let req = ProjectRequest {
                variants: variants.clone(),
                years: years.clone(),
                baseline: baseline.clone(),
                fleet: fleet.selector()?,
            };
            emit(&engine.project(&req)?, fmt)
        }
        Command::Sensitivity { variant, factors, delta, year, advancement, fleet } => {
            let req = SensitivityRequest {
                variant: variant.clone(),
                year: *year,
                advancement: *advancement,
                factors: factors.clone(),
                delta: *delta,
                fleet: fleet.selector()?,
            };
            emit(&engine.sensitivity(&req)?, fmt)
        }
        Command::Breakeven { series, variants, years, baseline, fleet } => {
            let req = match series {
                Some(path) => BreakevenRequest { series: Some(read_json::<SeriesPair>(path)?), ..Default::default() },
                None => BreakevenRequest {
                    series: None,
                    variants: variants.clone(),
                    baseline: baseline.clone(),
                    years: years.clone(),
                    fleet: fleet.selector()?,
                },
            };
            emit(&engine.breakeven(&req)?, fmt)
        }
        Command::Variants => emit(&engine.variants()?, fmt),
        Command::Serve { bind } => {
            crate::service::serve(bind, engine).map_err(|e| Failure::request(format!("serve {bind}: {e}")))?;
            Ok(String::new())
        }
        Command::Schedule { .. } | Command::Fleet { .. } | Command::Dataset { .. } => unreachable!("handled above"),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, out.as_bytes()),
                None => std::io::stdout().lock().write_all(out.as_bytes()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    EXIT_REQUEST
                }
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
