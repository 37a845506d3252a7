//! Request and response records shared by the CLI and the HTTP service.
//!
//! Every command goes through [`Engine`], so both front ends produce the same
//! payload for the same request. Monetary fields carry a `_usd` suffix,
//! per-mile values `_usd_per_mile`, durations `_h` and distances `_mi`.

use std::fmt;

use freight_tco_core::dataset::{AdvancementLevel, InfraType, Powertrain, VehicleClass};
use freight_tco_core::fleet::{FleetProfile, FleetVehicle};
use freight_tco_core::infra::{self, InfraConfig, ItemGroup};
use freight_tco_core::schedule::{self, DepotVehicle, FleetInstance};
use freight_tco_core::sensitivity::{self, FactorCategory};
use freight_tco_core::system::{self, StationSizing, SystemScenario};
use freight_tco_core::vehicle::{self, VehicleProfile};
use freight_tco_core::{CostBreakdown, CostComponent, CostDataset, Error as CoreError};
use serde::{Deserialize, Serialize};

use crate::dataset::LoadedDataset;
use crate::fleetgen;

/// How station costs reach the vehicle: recorded in every system result.
pub const ALLOCATION_RULE: &str = "infrastructure TCO over its full system life divided by discounted fleet miles over the same years; the fleet is renewed as it retires and every vehicle generation carries the same adder";

pub const DEFAULT_YEARS: [i32; 4] = [2025, 2030, 2035, 2040];
const LAST_YEAR: i32 = 2100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Request,
    Dataset,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EngineError {
    Request(Vec<FieldError>),
    Dataset(String),
    Infeasible(String),
}

impl EngineError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        EngineError::Request(vec![FieldError::new(field, message)])
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            EngineError::Request(_) => ErrorKind::Request,
            EngineError::Dataset(_) => ErrorKind::Dataset,
            EngineError::Infeasible(_) => ErrorKind::Infeasible,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Request => 1,
            ErrorKind::Dataset => 2,
            ErrorKind::Infeasible => 3,
        }
    }

    pub fn body(&self) -> ErrorBody {
        let (error, message, diagnostics) = match self {
            EngineError::Request(d) => ("invalid_request", "request rejected".to_string(), d.clone()),
            EngineError::Dataset(m) => ("dataset", m.clone(), Vec::new()),
            EngineError::Infeasible(m) => ("infeasible", m.clone(), Vec::new()),
        };
        ErrorBody { error, message, diagnostics }
    }

    fn from_core(e: CoreError, variant_field: &str) -> Self {
        match e {
            CoreError::UnknownVariant(v) => EngineError::field(variant_field, format!("unknown variant `{v}`")),
            CoreError::UnknownFactor(f) => EngineError::field("factors", format!("unknown factor `{f}`")),
            CoreError::InvalidInput(m) => EngineError::field("request", m),
            CoreError::DatasetIncomplete(_) | CoreError::DatasetInvalid { .. } => EngineError::Dataset(e.to_string()),
            CoreError::Infeasible(_) | CoreError::TooLarge { .. } | CoreError::DegenerateDivision => {
                EngineError::Infeasible(e.to_string())
            }
        }
    }
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Request(d) => {
                write!(f, "invalid request")?;
                for e in d {
                    write!(f, "\n  {}: {}", e.field, e.message)?;
                }
                Ok(())
            }
            EngineError::Dataset(m) => write!(f, "dataset error: {m}"),
            EngineError::Infeasible(m) => write!(f, "infeasible: {m}"),
        }
    }
}

impl std::error::Error for EngineError {}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub error: &'static str,
    pub message: String,
    pub diagnostics: Vec<FieldError>,
}

type Result<T> = std::result::Result<T, EngineError>;

/// Which fleet a system-level request runs on. With no `vehicles`, the
/// seeded calibration preset is drawn at `fleet_size` trucks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FleetSelector {
    #[serde(default)]
    pub fleet_size: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub vehicles: Option<Vec<FleetVehicle>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleTcoRequest {
    #[serde(default)]
    pub variant: Option<String>,
    #[serde(default)]
    pub class: Option<VehicleClass>,
    #[serde(default)]
    pub powertrain: Option<Powertrain>,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub advancement: Option<AdvancementLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfraTcoRequest {
    pub infra_type: InfraType,
    pub stations: u32,
    /// Carrier units dispensed per operating day.
    pub daily_throughput: f64,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub horizon_years: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemTcoRequest {
    pub variant: String,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub advancement: Option<AdvancementLevel>,
    #[serde(default)]
    pub fleet: Option<FleetSelector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleRequest {
    pub vehicles: Vec<DepotVehicle>,
    #[serde(default)]
    pub station_max_hours: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectRequest {
    #[serde(default)]
    pub variants: Option<Vec<String>>,
    #[serde(default)]
    pub years: Option<Vec<i32>>,
    #[serde(default)]
    pub baseline: Option<String>,
    #[serde(default)]
    pub fleet: Option<FleetSelector>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivityRequest {
    pub variant: String,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub advancement: Option<AdvancementLevel>,
    #[serde(default)]
    pub factors: Option<Vec<String>>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub fleet: Option<FleetSelector>,
}

/// Two levelized-cost series compared directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesPair {
    pub years: Vec<i32>,
    pub alt_usd_per_mile: Vec<f64>,
    pub baseline_usd_per_mile: Vec<f64>,
}

/// Either `series` alone, or variants projected over `years`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakevenRequest {
    #[serde(default)]
    pub series: Option<SeriesPair>,
    #[serde(default)]
    pub variants: Option<Vec<String>>,
    #[serde(default)]
    pub baseline: Option<String>,
    #[serde(default)]
    pub years: Option<Vec<i32>>,
    #[serde(default)]
    pub fleet: Option<FleetSelector>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorInfo {
    pub id: &'static str,
    pub category: FactorCategory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantInfo {
    pub id: String,
    pub class: VehicleClass,
    pub powertrain: Powertrain,
    pub infrastructure: Vec<InfraType>,
    pub factors: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantsResponse {
    pub dataset_sha256: String,
    pub base_year: i32,
    pub baseline_variant: String,
    pub default_fleet_size: u32,
    pub default_years: Vec<i32>,
    pub advancement_levels: Vec<AdvancementLevel>,
    pub factors: Vec<FactorInfo>,
    pub variants: Vec<VariantInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRow {
    pub component: CostComponent,
    pub discounted_usd: f64,
    pub levelized_usd_per_mile: f64,
}

fn component_rows(b: &CostBreakdown) -> Vec<ComponentRow> {
    CostComponent::ALL
        .iter()
        .map(|&c| ComponentRow {
            component: c,
            discounted_usd: b.discounted.get(c),
            levelized_usd_per_mile: b.levelized.get(c),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YearRow {
    pub year: i32,
    pub total_usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceLine {
    pub component: String,
    pub usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceSummary {
    pub gross_usd: f64,
    pub incentive_usd: f64,
    pub net_usd: f64,
    pub components: Vec<PriceLine>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VehicleTcoResponse {
    pub dataset_sha256: String,
    pub vehicle: String,
    pub class: VehicleClass,
    pub powertrain: Powertrain,
    pub year: i32,
    pub advancement: AdvancementLevel,
    pub price: PriceSummary,
    pub residual_value_usd: f64,
    pub tco_usd: f64,
    pub discounted_vmt_mi: f64,
    pub levelized_usd_per_mile: f64,
    pub components: Vec<ComponentRow>,
    pub yearly: Vec<YearRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapexLine {
    pub id: String,
    pub kind: &'static str,
    pub group: ItemGroup,
    pub quantity: f64,
    pub unit_usd: f64,
    pub cost_usd: f64,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfraTcoResponse {
    pub dataset_sha256: String,
    pub infra_type: InfraType,
    pub stations: u32,
    pub daily_throughput: f64,
    pub throughput_unit: &'static str,
    pub year: i32,
    pub construction_years: u32,
    pub horizon_years: u32,
    pub capex_usd: f64,
    pub equipment_usd: f64,
    pub development_usd: f64,
    pub development_share: f64,
    pub capex_items: Vec<CapexLine>,
    pub replacement_years: Vec<u32>,
    pub residual_value_usd: f64,
    pub peak_kw: f64,
    pub overhead_kwh_per_year: f64,
    pub tco_usd: f64,
    pub levelized_usd_per_unit: f64,
    pub components: Vec<ComponentRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationRow {
    pub infra_type: InfraType,
    pub stations: u32,
    pub utilization: f64,
    pub daily_throughput: f64,
    pub throughput_unit: &'static str,
}

impl From<&StationSizing> for StationRow {
    fn from(s: &StationSizing) -> Self {
        Self {
            infra_type: s.kind,
            stations: s.stations,
            utilization: s.utilization,
            daily_throughput: s.daily_throughput,
            throughput_unit: s.kind.carrier().unit(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationRow {
    pub infra_type: InfraType,
    pub stations: u32,
    pub utilization: f64,
    pub infra_tco_usd: f64,
    pub discounted_fleet_mi: f64,
    pub adder_usd_per_mile: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemTcoResponse {
    pub dataset_sha256: String,
    pub variant: String,
    pub class: VehicleClass,
    pub powertrain: Powertrain,
    pub year: i32,
    pub advancement: AdvancementLevel,
    pub fleet_size: u32,
    pub allocation_rule: &'static str,
    pub infrastructure: Vec<AllocationRow>,
    pub vehicle_tco_usd: f64,
    pub adder_usd_per_mile: f64,
    pub levelized_without_infra_usd_per_mile: f64,
    pub levelized_with_infra_usd_per_mile: f64,
    pub components: Vec<ComponentRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentRow {
    pub vehicle: String,
    pub station: u32,
    pub start_h: f64,
    pub end_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleResponse {
    pub stations: u32,
    pub busy_h: f64,
    pub utilization: f64,
    pub assignments: Vec<AssignmentRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionRow {
    pub year: i32,
    pub without_infra_usd_per_mile: f64,
    pub with_infra_usd_per_mile: f64,
    pub low_without_infra_usd_per_mile: f64,
    pub high_without_infra_usd_per_mile: f64,
    pub low_with_infra_usd_per_mile: f64,
    pub high_with_infra_usd_per_mile: f64,
    /// At or below the baseline in this year.
    pub parity_without_infra: bool,
    pub parity_with_infra: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionOut {
    pub variant: String,
    pub class: VehicleClass,
    pub stations: Vec<StationRow>,
    pub breakeven_without_infra_year: Option<i32>,
    pub breakeven_with_infra_year: Option<i32>,
    pub points: Vec<ProjectionRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectResponse {
    pub dataset_sha256: String,
    pub years: Vec<i32>,
    pub baseline: String,
    pub fleet_size: u32,
    pub allocation_rule: &'static str,
    pub series: Vec<ProjectionOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub factor: String,
    pub category: FactorCategory,
    pub baseline_usd_per_mile: f64,
    pub perturbed_usd_per_mile: f64,
    pub relative_change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityResponse {
    pub dataset_sha256: String,
    pub variant: String,
    pub year: i32,
    pub advancement: AdvancementLevel,
    pub delta: f64,
    pub baseline_usd_per_mile: f64,
    /// Ranked by `|relative_change|`, ties by factor id.
    pub results: Vec<SensitivityRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakevenRow {
    pub variant: String,
    pub without_infra_year: Option<i32>,
    pub with_infra_year: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BreakevenResponse {
    Series { dataset_sha256: String, years: Vec<i32>, breakeven_year: Option<i32> },
    Variants { dataset_sha256: String, years: Vec<i32>, baseline: String, results: Vec<BreakevenRow> },
}

/// A loaded dataset plus every command that runs on it.
#[derive(Debug, Clone)]
pub struct Engine {
    pub dataset: CostDataset,
    pub hash: String,
}

impl From<LoadedDataset> for Engine {
    fn from(l: LoadedDataset) -> Self {
        Self { dataset: l.dataset, hash: l.hash }
    }
}

impl Engine {
    pub fn new(dataset: CostDataset) -> Self {
        let hash = crate::dataset::dataset_hash(&dataset);
        Self { dataset, hash }
    }

    fn year(&self, field: &str, year: Option<i32>) -> Result<i32> {
        let y = year.unwrap_or(self.dataset.base_year);
        if y < self.dataset.base_year || y > LAST_YEAR {
            return Err(EngineError::field(field, format!("year must lie in {}..={LAST_YEAR}", self.dataset.base_year)));
        }
        Ok(y)
    }

    fn years(&self, field: &str, years: Option<&[i32]>) -> Result<Vec<i32>> {
        let years = years.map(<[i32]>::to_vec).unwrap_or_else(|| DEFAULT_YEARS.to_vec());
        if years.is_empty() {
            return Err(EngineError::field(field, "at least one year is required"));
        }
        if years.windows(2).any(|w| w[1] <= w[0]) {
            return Err(EngineError::field(field, "years must be strictly increasing"));
        }
        for (i, &y) in years.iter().enumerate() {
            self.year(&format!("{field}[{i}]"), Some(y))?;
        }
        Ok(years)
    }

    fn variant(&self, field: &str, id: &str) -> Result<()> {
        self.dataset.variant(id).map(|_| ()).map_err(|_| EngineError::field(field, format!("unknown variant `{id}`")))
    }

    fn variant_list(&self, field: &str, ids: Option<&[String]>) -> Result<Vec<String>> {
        let ids = match ids {
            Some(ids) => ids.to_vec(),
            None => self.dataset.variants.iter().map(|v| v.id.clone()).collect(),
        };
        if ids.is_empty() {
            return Err(EngineError::field(field, "at least one variant is required"));
        }
        for (i, id) in ids.iter().enumerate() {
            self.variant(&format!("{field}[{i}]"), id)?;
            if ids[..i].contains(id) {
                return Err(EngineError::field(format!("{field}[{i}]"), format!("duplicate variant `{id}`")));
            }
        }
        Ok(ids)
    }

    pub fn fleet(&self, sel: Option<&FleetSelector>) -> Result<FleetProfile> {
        let sel = sel.cloned().unwrap_or_default();
        if let Some(vehicles) = sel.vehicles {
            if sel.fleet_size.is_some() || sel.seed.is_some() {
                return Err(EngineError::field("fleet", "give either vehicles or fleet_size/seed, not both"));
            }
            for (i, v) in vehicles.iter().enumerate() {
                let ok = (0.0..24.0).contains(&v.arrival_h) && v.dwell_h > 0.0 && v.daily_miles >= 0.0 && v.daily_miles.is_finite();
                if !ok || !v.dwell_h.is_finite() {
                    return Err(EngineError::field(
                        format!("fleet.vehicles[{i}]"),
                        "need 0 ≤ arrival_h < 24, dwell_h > 0 and daily_miles ≥ 0",
                    ));
                }
            }
            return Ok(FleetProfile { vehicles });
        }
        let mut params = fleetgen::calibration_preset();
        params.fleet_size = sel.fleet_size.unwrap_or(self.dataset.system.fleet_size);
        if let Some(seed) = sel.seed {
            params.seed = seed;
        }
        fleetgen::generate(&params).map_err(|m| EngineError::field("fleet", m))
    }

    pub fn variants(&self) -> Result<VariantsResponse> {
        let ds = &self.dataset;
        let variants = ds
            .variants
            .iter()
            .map(|v| {
                let factors = sensitivity::applicable_factors(ds, &v.id)
                    .map_err(|e| EngineError::from_core(e, "variant"))?
                    .iter()
                    .map(|f| f.id)
                    .collect();
                Ok(VariantInfo {
                    id: v.id.clone(),
                    class: v.class,
                    powertrain: v.powertrain,
                    infrastructure: v.infrastructure.clone(),
                    factors,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VariantsResponse {
            dataset_sha256: self.hash.clone(),
            base_year: ds.base_year,
            baseline_variant: ds.system.baseline_variant.clone(),
            default_fleet_size: ds.system.fleet_size,
            default_years: DEFAULT_YEARS.to_vec(),
            advancement_levels: AdvancementLevel::ALL.to_vec(),
            factors: sensitivity::FACTORS.iter().map(|f| FactorInfo { id: f.id, category: f.category }).collect(),
            variants,
        })
    }

    pub fn vehicle_tco(&self, req: &VehicleTcoRequest) -> Result<VehicleTcoResponse> {
        let year = self.year("year", req.year)?;
        let advancement = req.advancement.unwrap_or(AdvancementLevel::Moderate);
        let ds = self.dataset.with_advancement(advancement);
        let profile = match (&req.variant, req.class, req.powertrain) {
            (Some(id), None, None) => {
                self.variant("variant", id)?;
                VehicleProfile::for_variant(&ds, id)
            }
            (None, Some(c), Some(p)) => VehicleProfile::for_vehicle(&ds, c, p),
            _ => return Err(EngineError::field("variant", "give either variant or both class and powertrain")),
        }
        .map_err(|e| EngineError::from_core(e, "variant"))?;
        let t = vehicle::vehicle_tco(&ds, &profile, year).map_err(|e| EngineError::from_core(e, "variant"))?;
        let b = &t.breakdown;
        Ok(VehicleTcoResponse {
            dataset_sha256: self.hash.clone(),
            vehicle: profile.id.clone(),
            class: profile.spec.class,
            powertrain: profile.spec.powertrain,
            year,
            advancement,
            price: PriceSummary {
                gross_usd: t.price.gross,
                incentive_usd: t.price.incentive,
                net_usd: t.price.net,
                components: t.price.components.iter().map(|c| PriceLine { component: c.component.clone(), usd: c.usd }).collect(),
            },
            residual_value_usd: t.residual_value,
            tco_usd: b.total(),
            discounted_vmt_mi: b.discounted_quantity,
            levelized_usd_per_mile: b.levelized_total(),
            components: component_rows(b),
            yearly: b.yearly_totals().into_iter().enumerate().map(|(i, v)| YearRow { year: year + i as i32, total_usd: v }).collect(),
        })
    }

    pub fn infra_tco(&self, req: &InfraTcoRequest) -> Result<InfraTcoResponse> {
        let ds = &self.dataset;
        let year = self.year("year", req.year)?;
        let entry = ds.infra(req.infra_type).map_err(|e| EngineError::Dataset(e.to_string()))?;
        if req.stations == 0 {
            return Err(EngineError::field("stations", "at least one station is required"));
        }
        if !(req.daily_throughput.is_finite() && req.daily_throughput >= 0.0) {
            return Err(EngineError::field("daily_throughput", "must be finite and non-negative"));
        }
        let horizon = req.horizon_years.unwrap_or(entry.system_life_years);
        if horizon == 0 || horizon > entry.system_life_years {
            return Err(EngineError::field(
                "horizon_years",
                format!("must lie in 1..={} for {}", entry.system_life_years, req.infra_type),
            ));
        }
        let config = InfraConfig {
            kind: req.infra_type,
            stations: req.stations,
            daily_throughput: req.daily_throughput,
            operating_days_per_year: ds.system.operating_days_per_year,
        };
        let t = infra::infra_tco(ds, &config, year, horizon).map_err(|e| EngineError::from_core(e, "infra_type"))?;
        let c = &t.capex;
        Ok(InfraTcoResponse {
            dataset_sha256: self.hash.clone(),
            infra_type: req.infra_type,
            stations: req.stations,
            daily_throughput: req.daily_throughput,
            throughput_unit: req.infra_type.carrier().unit(),
            year,
            construction_years: t.construction_years,
            horizon_years: t.horizon_years,
            capex_usd: c.total,
            equipment_usd: c.equipment,
            development_usd: c.development,
            development_share: c.development_share(),
            capex_items: c
                .items
                .iter()
                .map(|i| CapexLine {
                    id: i.id.clone(),
                    kind: i.kind.as_str(),
                    group: i.group,
                    quantity: i.quantity,
                    unit_usd: i.unit_usd,
                    cost_usd: i.cost,
                    share: i.share,
                })
                .collect(),
            replacement_years: t.replacement_years.clone(),
            residual_value_usd: t.residual_value,
            peak_kw: t.peak_kw,
            overhead_kwh_per_year: t.overhead_kwh_per_year,
            tco_usd: t.breakdown.total(),
            levelized_usd_per_unit: t.levelized_per_unit,
            components: component_rows(&t.breakdown),
        })
    }

    fn sizing(&self, variant: &str, fleet: &FleetProfile) -> Result<Vec<StationSizing>> {
        system::size_stations(&self.dataset, variant, fleet).map_err(|e| EngineError::from_core(e, "variant"))
    }

    pub fn system_tco(&self, req: &SystemTcoRequest) -> Result<SystemTcoResponse> {
        self.variant("variant", &req.variant)?;
        let year = self.year("year", req.year)?;
        let advancement = req.advancement.unwrap_or(AdvancementLevel::Moderate);
        let fleet = self.fleet(req.fleet.as_ref())?;
        let sizing = self.sizing(&req.variant, &fleet)?;
        let scenario = SystemScenario { variant: req.variant.clone(), year, advancement };
        let s = system::system_tco_sized(&self.dataset, &scenario, fleet.len() as u32, &sizing)
            .map_err(|e| EngineError::from_core(e, "variant"))?;
        let spec = s.vehicle.profile.spec;
        Ok(SystemTcoResponse {
            dataset_sha256: self.hash.clone(),
            variant: req.variant.clone(),
            class: spec.class,
            powertrain: spec.powertrain,
            year,
            advancement,
            fleet_size: s.fleet_size,
            allocation_rule: ALLOCATION_RULE,
            infrastructure: s
                .infrastructure
                .iter()
                .map(|a| AllocationRow {
                    infra_type: a.sizing.kind,
                    stations: a.sizing.stations,
                    utilization: a.sizing.utilization,
                    infra_tco_usd: a.tco.breakdown.total(),
                    discounted_fleet_mi: a.discounted_fleet_miles,
                    adder_usd_per_mile: a.adder_usd_per_mile,
                })
                .collect(),
            vehicle_tco_usd: s.vehicle.breakdown.total(),
            adder_usd_per_mile: s.adder_usd_per_mile,
            levelized_without_infra_usd_per_mile: s.levelized_without_infra,
            levelized_with_infra_usd_per_mile: s.levelized_with_infra,
            components: component_rows(&s.vehicle.breakdown),
        })
    }

    pub fn schedule(&self, req: &ScheduleRequest) -> Result<ScheduleResponse> {
        let mut instance = FleetInstance::new(req.vehicles.clone());
        if let Some(h) = req.station_max_hours {
            instance.station_max_hours = h;
        }
        let s = schedule::min_stations(&instance).map_err(|e| match e {
            CoreError::InvalidInput(m) => EngineError::field("vehicles", m),
            e => EngineError::from_core(e, "vehicles"),
        })?;
        let horizon = instance.station_max_hours;
        Ok(ScheduleResponse {
            stations: s.stations,
            busy_h: s.busy_hours(),
            utilization: s.utilization(horizon),
            assignments: s
                .assignments
                .iter()
                .map(|a| AssignmentRow { vehicle: a.id.clone(), station: a.station, start_h: a.start_h, end_h: a.end_h })
                .collect(),
        })
    }

    fn projections(
        &self,
        variants: &[String],
        baseline: &str,
        years: &[i32],
        fleet: &FleetProfile,
    ) -> Result<(Vec<system::ProjectionSeries>, system::ProjectionSeries)> {
        let run = |id: &str| -> Result<system::ProjectionSeries> {
            let sizing = self.sizing(id, fleet)?;
            system::project_variant(&self.dataset, id, years, fleet.len() as u32, &sizing)
                .map_err(|e| EngineError::from_core(e, "variants"))
        };
        let series = variants.iter().map(|v| run(v)).collect::<Result<Vec<_>>>()?;
        let base = match series.iter().find(|s| s.variant == baseline) {
            Some(s) => s.clone(),
            None => run(baseline)?,
        };
        Ok((series, base))
    }

    fn baseline(&self, baseline: Option<&str>) -> Result<String> {
        let id = baseline.unwrap_or(&self.dataset.system.baseline_variant).to_string();
        self.variant("baseline", &id)?;
        Ok(id)
    }

    pub fn project(&self, req: &ProjectRequest) -> Result<ProjectResponse> {
        let variants = self.variant_list("variants", req.variants.as_deref())?;
        let years = self.years("years", req.years.as_deref())?;
        let baseline = self.baseline(req.baseline.as_deref())?;
        let fleet = self.fleet(req.fleet.as_ref())?;
        let (series, base) = self.projections(&variants, &baseline, &years, &fleet)?;
        let out = series
            .iter()
            .map(|s| {
                let b = system::breakeven(s, &base).map_err(|e| EngineError::from_core(e, "variants"))?;
                let points = s
                    .points
                    .iter()
                    .zip(&base.points)
                    .map(|(p, q)| ProjectionRow {
                        year: p.year,
                        without_infra_usd_per_mile: p.moderate.without_infra,
                        with_infra_usd_per_mile: p.moderate.with_infra,
                        low_without_infra_usd_per_mile: p.band_low.without_infra,
                        high_without_infra_usd_per_mile: p.band_high.without_infra,
                        low_with_infra_usd_per_mile: p.band_low.with_infra,
                        high_with_infra_usd_per_mile: p.band_high.with_infra,
                        parity_without_infra: p.moderate.without_infra <= q.moderate.without_infra,
                        parity_with_infra: p.moderate.with_infra <= q.moderate.with_infra,
                    })
                    .collect();
                Ok(ProjectionOut {
                    variant: s.variant.clone(),
                    class: s.class,
                    stations: s.sizing.iter().map(StationRow::from).collect(),
                    breakeven_without_infra_year: b.without_infra,
                    breakeven_with_infra_year: b.with_infra,
                    points,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjectResponse {
            dataset_sha256: self.hash.clone(),
            years,
            baseline,
            fleet_size: fleet.len() as u32,
            allocation_rule: ALLOCATION_RULE,
            series: out,
        })
    }

    pub fn sensitivity(&self, req: &SensitivityRequest) -> Result<SensitivityResponse> {
        self.variant("variant", &req.variant)?;
        let year = self.year("year", req.year)?;
        let advancement = req.advancement.unwrap_or(AdvancementLevel::Moderate);
        let delta = req.delta.unwrap_or(0.1);
        if !(delta.is_finite() && delta > -1.0) {
            return Err(EngineError::field("delta", "must be finite and greater than -1"));
        }
        let applicable: Vec<&str> = sensitivity::applicable_factors(&self.dataset, &req.variant)
            .map_err(|e| EngineError::from_core(e, "variant"))?
            .iter()
            .map(|f| f.id)
            .collect();
        let factors: Vec<&str> = match &req.factors {
            None => applicable.clone(),
            Some(list) => {
                let mut out = Vec::with_capacity(list.len());
                for (i, f) in list.iter().enumerate() {
                    let field = format!("factors[{i}]");
                    if sensitivity::factor(f).is_err() {
                        return Err(EngineError::field(field, format!("unknown factor `{f}`")));
                    }
                    if !applicable.contains(&f.as_str()) {
                        return Err(EngineError::field(field, format!("factor `{f}` does not apply to {}", req.variant)));
                    }
                    if out.contains(&f.as_str()) {
                        return Err(EngineError::field(field, format!("duplicate factor `{f}`")));
                    }
                    out.push(f.as_str());
                }
                out
            }
        };
        if factors.is_empty() {
            return Err(EngineError::field("factors", "at least one factor is required"));
        }
        let fleet = self.fleet(req.fleet.as_ref())?;
        let sizing = self.sizing(&req.variant, &fleet)?;
        let scenario = SystemScenario { variant: req.variant.clone(), year, advancement };
        let results = sensitivity::run_sensitivity(&self.dataset, &scenario, fleet.len() as u32, &sizing, &factors, delta)
            .map_err(|e| EngineError::from_core(e, "variant"))?;
        let baseline = results.first().map(|r| r.baseline).unwrap_or_default();
        Ok(SensitivityResponse {
            dataset_sha256: self.hash.clone(),
            variant: req.variant.clone(),
            year,
            advancement,
            delta,
            baseline_usd_per_mile: baseline,
            results: sensitivity::tornado_table(&results)
                .into_iter()
                .map(|r| SensitivityRow {
                    factor: r.factor,
                    category: r.category,
                    baseline_usd_per_mile: r.baseline,
                    perturbed_usd_per_mile: r.perturbed,
                    relative_change: r.relative_change,
                })
                .collect(),
        })
    }

    pub fn breakeven(&self, req: &BreakevenRequest) -> Result<BreakevenResponse> {
        if let Some(s) = &req.series {
            if req.variants.is_some() || req.baseline.is_some() || req.years.is_some() || req.fleet.is_some() {
                return Err(EngineError::field("series", "series cannot be combined with variants, baseline, years or fleet"));
            }
            if s.alt_usd_per_mile.len() != s.years.len() {
                return Err(EngineError::field("series.alt_usd_per_mile", "must have one value per year"));
            }
            if s.baseline_usd_per_mile.len() != s.years.len() {
                return Err(EngineError::field("series.baseline_usd_per_mile", "must have one value per year"));
            }
            if s.alt_usd_per_mile.iter().chain(&s.baseline_usd_per_mile).any(|x| !x.is_finite()) {
                return Err(EngineError::field("series", "values must be finite"));
            }
            let year = system::breakeven_year(&s.years, &s.alt_usd_per_mile, &s.baseline_usd_per_mile)
                .map_err(|e| match e {
                    CoreError::InvalidInput(m) => EngineError::field("series.years", m),
                    e => EngineError::from_core(e, "series"),
                })?;
            return Ok(BreakevenResponse::Series {
                dataset_sha256: self.hash.clone(),
                years: s.years.clone(),
                breakeven_year: year,
            });
        }
        let baseline = self.baseline(req.baseline.as_deref())?;
        let variants = match &req.variants {
            Some(v) => self.variant_list("variants", Some(v))?,
            None => self.variant_list("variants", None)?.into_iter().filter(|v| *v != baseline).collect(),
        };
        let years = match &req.years {
            Some(y) => self.years("years", Some(y))?,
            None => (self.dataset.system.first_year..=self.dataset.system.last_year).collect(),
        };
        let fleet = self.fleet(req.fleet.as_ref())?;
        let (series, base) = self.projections(&variants, &baseline, &years, &fleet)?;
        let results = series
            .iter()
            .map(|s| {
                let b = system::breakeven(s, &base).map_err(|e| EngineError::from_core(e, "variants"))?;
                Ok(BreakevenRow { variant: b.variant, without_infra_year: b.without_infra, with_infra_year: b.with_infra })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BreakevenResponse::Variants { dataset_sha256: self.hash.clone(), years, baseline, results })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> Engine {
        crate::dataset::load_default().into()
    }

    #[test]
    fn exit_codes() {
        assert_eq!(EngineError::field("a", "b").exit_code(), 1);
        assert_eq!(EngineError::Dataset("x".into()).exit_code(), 2);
        assert_eq!(EngineError::Infeasible("x".into()).exit_code(), 3);
    }

    #[test]
    fn request_validation_names_fields() {
        let e = engine();
        let err = e.system_tco(&SystemTcoRequest { variant: "BEV9".into(), ..Default::default() }).unwrap_err();
        assert_eq!(err, EngineError::field("variant", "unknown variant `BEV9`"));
        let err = e.project(&ProjectRequest { years: Some(vec![2030, 2025]), ..Default::default() }).unwrap_err();
        assert!(matches!(&err, EngineError::Request(d) if d[0].field == "years"));
        let err = e
            .sensitivity(&SensitivityRequest {
                variant: "D-ICE".into(),
                factors: Some(vec!["hydrogen_price".into()]),
                ..Default::default()
            })
            .unwrap_err();
        assert!(matches!(&err, EngineError::Request(d) if d[0].field == "factors[0]"));
    }

    #[test]
    fn infeasible_fleet_is_reported_as_such() {
        let e = engine();
        let fleet = FleetSelector {
            vehicles: Some(vec![FleetVehicle { id: "x".into(), arrival_h: 1.0, dwell_h: 0.1, daily_miles: 600.0 }]),
            ..Default::default()
        };
        let err = e.system_tco(&SystemTcoRequest { variant: "BEV700".into(), fleet: Some(fleet), ..Default::default() }).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Infeasible);
    }
}
