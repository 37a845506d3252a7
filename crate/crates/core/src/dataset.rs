//! The cost dataset: every unit cost, rate, price series and policy parameter
//! the engine consumes, plus structural validation.
//!
//! Field names carry their units. Parsing and serialization live in the
//! companion crate; this module only defines the shape and the invariants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finance::FinancialParams;

/// Schema version understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VehicleClass {
    BoxTruck,
    DayCab,
    Sleeper,
}

impl VehicleClass {
    pub const ALL: [VehicleClass; 3] = [VehicleClass::BoxTruck, VehicleClass::DayCab, VehicleClass::Sleeper];

    pub fn as_str(self) -> &'static str {
        match self {
            VehicleClass::BoxTruck => "box_truck",
            VehicleClass::DayCab => "day_cab",
            VehicleClass::Sleeper => "sleeper",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for VehicleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Powertrain {
    #[serde(rename = "D-ICE")]
    DieselIce,
    #[serde(rename = "H2-ICE")]
    HydrogenIce,
    #[serde(rename = "NG-ICE")]
    NaturalGasIce,
    #[serde(rename = "BEV")]
    Bev,
    #[serde(rename = "FCEV")]
    Fcev,
    #[serde(rename = "NZEV-H2")]
    NzevHydrogen,
    #[serde(rename = "NZEV-NG")]
    NzevNaturalGas,
    #[serde(rename = "NZEV-D")]
    NzevDiesel,
}

impl Powertrain {
    pub const ALL: [Powertrain; 8] = [
        Powertrain::DieselIce,
        Powertrain::HydrogenIce,
        Powertrain::NaturalGasIce,
        Powertrain::Bev,
        Powertrain::Fcev,
        Powertrain::NzevHydrogen,
        Powertrain::NzevNaturalGas,
        Powertrain::NzevDiesel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Powertrain::DieselIce => "D-ICE",
            Powertrain::HydrogenIce => "H2-ICE",
            Powertrain::NaturalGasIce => "NG-ICE",
            Powertrain::Bev => "BEV",
            Powertrain::Fcev => "FCEV",
            Powertrain::NzevHydrogen => "NZEV-H2",
            Powertrain::NzevNaturalGas => "NZEV-NG",
            Powertrain::NzevDiesel => "NZEV-D",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str().eq_ignore_ascii_case(s))
    }

    /// Zero- and near-zero-emission powertrains (BEV, FCEV, NZEV-*).
    pub fn is_zev_or_nzev(self) -> bool {
        matches!(
            self,
            Powertrain::Bev
                | Powertrain::Fcev
                | Powertrain::NzevHydrogen
                | Powertrain::NzevNaturalGas
                | Powertrain::NzevDiesel
        )
    }

    /// The liquid or gaseous fuel burned or converted on board, if any.
    pub fn fuel(self) -> Option<Carrier> {
        match self {
            Powertrain::DieselIce | Powertrain::NzevDiesel => Some(Carrier::Diesel),
            Powertrain::HydrogenIce | Powertrain::Fcev | Powertrain::NzevHydrogen => Some(Carrier::Hydrogen),
            Powertrain::NaturalGasIce | Powertrain::NzevNaturalGas => Some(Carrier::NaturalGas),
            Powertrain::Bev => None,
        }
    }

    /// Whether the vehicle is plugged in for grid electricity.
    pub fn charges_from_grid(self) -> bool {
        matches!(
            self,
            Powertrain::Bev | Powertrain::NzevHydrogen | Powertrain::NzevNaturalGas | Powertrain::NzevDiesel
        )
    }
}

impl fmt::Display for Powertrain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Energy carrier. Units: diesel gal, electricity kWh, hydrogen kg,
/// natural gas kg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Diesel,
    Electricity,
    Hydrogen,
    NaturalGas,
}

impl Carrier {
    pub const ALL: [Carrier; 4] = [Carrier::Diesel, Carrier::Electricity, Carrier::Hydrogen, Carrier::NaturalGas];

    pub fn as_str(self) -> &'static str {
        match self {
            Carrier::Diesel => "diesel",
            Carrier::Electricity => "electricity",
            Carrier::Hydrogen => "hydrogen",
            Carrier::NaturalGas => "natural_gas",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Carrier::Diesel => "gal",
            Carrier::Electricity => "kWh",
            Carrier::Hydrogen | Carrier::NaturalGas => "kg",
        }
    }
}

/// Refueling/charging infrastructure type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InfraType {
    #[serde(rename = "diesel")]
    Diesel,
    #[serde(rename = "DCFC")]
    Dcfc,
    #[serde(rename = "MCS")]
    Mcs,
    #[serde(rename = "H2")]
    Hydrogen,
    #[serde(rename = "NG")]
    NaturalGas,
}

impl InfraType {
    pub const ALL: [InfraType; 5] = [
        InfraType::Diesel,
        InfraType::Dcfc,
        InfraType::Mcs,
        InfraType::Hydrogen,
        InfraType::NaturalGas,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InfraType::Diesel => "diesel",
            InfraType::Dcfc => "DCFC",
            InfraType::Mcs => "MCS",
            InfraType::Hydrogen => "H2",
            InfraType::NaturalGas => "NG",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str().eq_ignore_ascii_case(s))
    }

    pub fn carrier(self) -> Carrier {
        match self {
            InfraType::Diesel => Carrier::Diesel,
            InfraType::Dcfc | InfraType::Mcs => Carrier::Electricity,
            InfraType::Hydrogen => Carrier::Hydrogen,
            InfraType::NaturalGas => Carrier::NaturalGas,
        }
    }
}

impl fmt::Display for InfraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Chassis,
    TwelveVoltSystem,
    AirCompressor,
    Hvac,
    PowerSteering,
    Engine,
    Transmission,
    ElectricDrive,
    HighVoltageHarness,
    HighVoltageJunctionBox,
    OnboardCharger,
    HybridGenset,
    AfterTreatment,
    CoolingSystem,
    FuelCell,
    Battery,
    FuelTank,
    Glider,
}

/// How a component's base cost is scaled by the vehicle specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostBasis {
    /// `usd` is the baseline (D-ICE box truck) manufacturing cost; the
    /// class-powertrain multiplier applies.
    Fixed,
    /// `usd` per kWh of battery.
    BatteryKwh,
    /// `usd` per kW of fuel cell.
    FuelCellKw,
    /// `usd` per unit of fuel tank capacity.
    FuelTank,
    /// `usd` per kW of electric traction drive.
    ElectricDriveKw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfraItemKind {
    Dispenser,
    Compressor,
    Storage,
    Refrigeration,
    Dryer,
    Electrical,
    Software,
    Civil,
    Permitting,
    Engineering,
    ProjectManagement,
    Contingency,
}

impl InfraItemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InfraItemKind::Dispenser => "dispenser",
            InfraItemKind::Compressor => "compressor",
            InfraItemKind::Storage => "storage",
            InfraItemKind::Refrigeration => "refrigeration",
            InfraItemKind::Dryer => "dryer",
            InfraItemKind::Electrical => "electrical",
            InfraItemKind::Software => "software",
            InfraItemKind::Civil => "civil",
            InfraItemKind::Permitting => "permitting",
            InfraItemKind::Engineering => "engineering",
            InfraItemKind::ProjectManagement => "project_management",
            InfraItemKind::Contingency => "contingency",
        }
    }
}

/// Provenance of a dataset value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Published,
    Assumption,
    User,
}

/// Contiguous yearly values starting at `start_year`; lookups outside the
/// table clamp to the nearest end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearSeries {
    pub start_year: i32,
    pub values: Vec<f64>,
}

impl YearSeries {
    pub fn flat(start_year: i32, value: f64) -> Self {
        Self { start_year, values: alloc::vec![value] }
    }

    pub fn at(&self, year: i32) -> f64 {
        match self.values.len() {
            0 => 0.0,
            n => {
                let idx = (year - self.start_year).clamp(0, n as i32 - 1) as usize;
                self.values[idx]
            }
        }
    }

    pub fn scale(&mut self, k: f64) {
        self.values.iter_mut().for_each(|v| *v *= k);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyPrices {
    pub diesel_usd_per_gal: YearSeries,
    pub electricity_usd_per_kwh: YearSeries,
    pub hydrogen_usd_per_kg: YearSeries,
    pub natural_gas_usd_per_kg: YearSeries,
    pub carbon_usd_per_kg: YearSeries,
}

impl EnergyPrices {
    pub fn series(&self, c: Carrier) -> &YearSeries {
        match c {
            Carrier::Diesel => &self.diesel_usd_per_gal,
            Carrier::Electricity => &self.electricity_usd_per_kwh,
            Carrier::Hydrogen => &self.hydrogen_usd_per_kg,
            Carrier::NaturalGas => &self.natural_gas_usd_per_kg,
        }
    }

    pub fn series_mut(&mut self, c: Carrier) -> &mut YearSeries {
        match c {
            Carrier::Diesel => &mut self.diesel_usd_per_gal,
            Carrier::Electricity => &mut self.electricity_usd_per_kwh,
            Carrier::Hydrogen => &mut self.hydrogen_usd_per_kg,
            Carrier::NaturalGas => &mut self.natural_gas_usd_per_kg,
        }
    }

    pub fn price(&self, c: Carrier, year: i32) -> f64 {
        self.series(c).at(year)
    }

    pub fn carbon(&self, year: i32) -> f64 {
        self.carbon_usd_per_kg.at(year)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierProperties {
    /// Tank-to-wheel CO2 per unit.
    pub tailpipe_co2_kg_per_unit: f64,
    pub kwh_per_unit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierTable {
    pub diesel: CarrierProperties,
    pub electricity: CarrierProperties,
    pub hydrogen: CarrierProperties,
    pub natural_gas: CarrierProperties,
    /// Grid carbon intensity applied to station overhead electricity.
    pub grid_co2_kg_per_kwh: f64,
}

impl CarrierTable {
    pub fn get(&self, c: Carrier) -> &CarrierProperties {
        match c {
            Carrier::Diesel => &self.diesel,
            Carrier::Electricity => &self.electricity,
            Carrier::Hydrogen => &self.hydrogen,
            Carrier::NaturalGas => &self.natural_gas,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaborParams {
    pub driver_wage_usd_per_hour: f64,
    /// Share of on-shift refueling/charging time paid as driver labor.
    pub dwell_labor_ratio: f64,
    /// Labor uplift on replacement parts (`r_labor`).
    pub repair_labor_uplift: f64,
}

/// Multipliers on every learning rate for the three technology-advancement levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdvancementLevels {
    pub low: f64,
    pub moderate: f64,
    pub high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentCost {
    pub id: String,
    pub kind: ComponentKind,
    pub basis: CostBasis,
    pub usd: f64,
    pub learning_rate: f64,
    /// Literature range for the unit cost, used for error bars.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_usd: Option<[f64; 2]>,
}

/// Residual value regression `C·exp(A·age + M·mileage_k)` expressed through
/// the yearly and per-1000-mile retention factors `exp(A)` and `exp(M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Retention {
    pub yearly_retention: f64,
    pub per_kmile_retention: f64,
    /// Regression price at age zero as a fraction of the retail price.
    pub price_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub class: VehicleClass,
    pub annual_vmt: f64,
    pub average_speed_mph: f64,
    /// Yearly insurance premium as a fraction of the retail price.
    pub insurance_rate: f64,
    pub registration_usd_per_year: f64,
    pub tax_usd_per_year: f64,
    pub payload_loss_usd_per_lb_mile: f64,
    pub retention: Retention,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnergyIntensity {
    pub diesel_gal_per_mile: f64,
    pub electricity_kwh_per_mile: f64,
    pub hydrogen_kg_per_mile: f64,
    pub natural_gas_kg_per_mile: f64,
}

impl EnergyIntensity {
    pub fn get(&self, c: Carrier) -> f64 {
        match c {
            Carrier::Diesel => self.diesel_gal_per_mile,
            Carrier::Electricity => self.electricity_kwh_per_mile,
            Carrier::Hydrogen => self.hydrogen_kg_per_mile,
            Carrier::NaturalGas => self.natural_gas_kg_per_mile,
        }
    }

    pub fn get_mut(&mut self, c: Carrier) -> &mut f64 {
        match c {
            Carrier::Diesel => &mut self.diesel_gal_per_mile,
            Carrier::Electricity => &mut self.electricity_kwh_per_mile,
            Carrier::Hydrogen => &mut self.hydrogen_kg_per_mile,
            Carrier::NaturalGas => &mut self.natural_gas_kg_per_mile,
        }
    }
}

/// Per-mile maintenance rate `usd_per_mile × (1 + growth × odometer/100k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaintenanceCurve {
    pub usd_per_mile: f64,
    pub growth_per_100k_miles: f64,
}

impl MaintenanceCurve {
    pub fn rate(&self, odometer_miles: f64) -> f64 {
        self.usd_per_mile * (1.0 + self.growth_per_100k_miles * odometer_miles / 100_000.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplacementTrigger {
    /// Cumulative battery energy throughput reaches `rated_cycles × battery_kwh`.
    Throughput,
    /// Odometer advances by `life_miles`.
    Odometer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryReplacement {
    pub trigger: ReplacementTrigger,
    pub rated_cycles: f64,
    pub life_miles: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BomLine {
    pub component: String,
    #[serde(default = "one")]
    pub margin: f64,
}

fn one() -> f64 {
    1.0
}

/// One (class, powertrain) row of the vehicle table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleEntry {
    pub class: VehicleClass,
    pub powertrain: Powertrain,
    /// Class-powertrain multiplier `M_jk` on fixed-basis components.
    pub multiplier: f64,
    pub battery_kwh: f64,
    /// Gallons for diesel, kilograms for hydrogen and natural gas.
    pub fuel_tank: f64,
    pub fuel_cell_kw: f64,
    pub electric_drive_kw: f64,
    pub curb_weight_lb: f64,
    pub bom: Vec<BomLine>,
    pub energy: EnergyIntensity,
    pub maintenance: MaintenanceCurve,
    /// Share of energy taken at the home depot during off-shift dwell.
    pub depot_refuel_ratio: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery_replacement: Option<BatteryReplacement>,
}

/// A named fleet variant (e.g. BEV700) built from a vehicle row with overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantEntry {
    pub id: String,
    pub class: VehicleClass,
    pub powertrain: Powertrain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery_kwh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuel_cell_kw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub electric_drive_kw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curb_weight_lb: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyIntensity>,
    pub infrastructure: Vec<InfraType>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncentiveEntry {
    pub class: VehicleClass,
    pub powertrain: Powertrain,
    pub usd: f64,
    pub first_year: i32,
    pub last_year: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfraItem {
    pub id: String,
    pub kind: InfraItemKind,
    pub unit_usd: f64,
    #[serde(default)]
    pub qty_fixed: f64,
    #[serde(default)]
    pub qty_per_station: f64,
    /// Quantity per unit of daily dispensed throughput (capacity-sized items).
    #[serde(default)]
    pub qty_per_daily_unit: f64,
    #[serde(default)]
    pub learning_rate: f64,
    /// Key equipment replaced at the end of its life and depreciated straight-line.
    #[serde(default)]
    pub depreciable: bool,
    /// Per-unit incentive deducted from the learned unit cost.
    #[serde(default)]
    pub incentive_usd: f64,
}

impl InfraItem {
    pub fn quantity(&self, stations: u32, daily_throughput: f64) -> f64 {
        self.qty_fixed + self.qty_per_station * stations as f64 + self.qty_per_daily_unit * daily_throughput
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfraMaintenance {
    pub base_usd_per_year: f64,
    pub per_station_usd_per_year: f64,
    /// Yearly growth of the base maintenance cost with infrastructure age.
    pub escalation_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfraOperation {
    /// Fraction of installed CapEx per year.
    pub insurance_rate: f64,
    /// Fraction of installed CapEx per year.
    pub property_tax_rate: f64,
    pub warranty_usd_per_station_year: f64,
    pub labor_usd_per_year: f64,
    pub licensing_usd_per_year: f64,
    pub downtime_hours_per_year: f64,
    pub downtime_usd_per_hour: f64,
}

/// Utility charges. The energy price defaults to the electricity series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityTariff {
    pub fixed_usd_per_year: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_usd_per_kwh: Option<f64>,
    pub demand_usd_per_kw_month: f64,
    pub delivery_usd_per_year: f64,
    pub transmission_usd_per_year: f64,
}

/// Configuration used for the headline CapEx share breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfraReference {
    pub stations: u32,
    pub daily_throughput: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfraEntry {
    pub kind: InfraType,
    /// Rated dispensing rate in carrier units per hour (kW for chargers).
    pub rate_per_hour: f64,
    /// Mean delivered rate over a session as a fraction of the rated rate.
    #[serde(default = "one")]
    pub effective_rate_fraction: f64,
    /// Connection, payment and positioning time per service event.
    pub service_overhead_hours: f64,
    pub construction_years: u32,
    pub system_life_years: u32,
    pub key_equipment_life_years: u32,
    pub electrical_kw_per_station: f64,
    pub coincidence_factor: f64,
    pub transfer_efficiency: f64,
    pub equipment: Vec<InfraItem>,
    pub development: Vec<InfraItem>,
    pub maintenance: InfraMaintenance,
    pub operation: InfraOperation,
    pub tariff: UtilityTariff,
    pub reference: InfraReference,
}

impl InfraEntry {
    /// Mean delivered rate in carrier units per hour.
    pub fn effective_rate(&self) -> f64 {
        self.rate_per_hour * self.effective_rate_fraction
    }
}

/// Defaults for the depot fleet what-if.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDefaults {
    pub fleet_size: u32,
    pub fleet_class: VehicleClass,
    pub operating_days_per_year: f64,
    pub usable_battery_fraction: f64,
    pub station_max_operational_hours: f64,
    pub baseline_variant: String,
    pub first_year: i32,
    pub last_year: i32,
}

/// Complete, immutable input snapshot for the engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostDataset {
    pub schema_version: u32,
    pub base_year: i32,
    #[serde(default)]
    pub sources: BTreeMap<String, Source>,
    pub financial: FinancialParams,
    pub advancement: AdvancementLevels,
    pub labor: LaborParams,
    pub prices: EnergyPrices,
    pub carriers: CarrierTable,
    pub system: SystemDefaults,
    pub classes: Vec<ClassParams>,
    pub components: Vec<ComponentCost>,
    pub vehicles: Vec<VehicleEntry>,
    pub variants: Vec<VariantEntry>,
    pub incentives: Vec<IncentiveEntry>,
    pub infrastructure: Vec<InfraEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdvancementLevel {
    Low,
    Moderate,
    High,
}

impl AdvancementLevel {
    pub const ALL: [AdvancementLevel; 3] = [AdvancementLevel::Low, AdvancementLevel::Moderate, AdvancementLevel::High];

    pub fn as_str(self) -> &'static str {
        match self {
            AdvancementLevel::Low => "low",
            AdvancementLevel::Moderate => "moderate",
            AdvancementLevel::High => "high",
        }
    }
}

impl CostDataset {
    pub fn class(&self, class: VehicleClass) -> Result<&ClassParams> {
        self.classes
            .iter()
            .find(|c| c.class == class)
            .ok_or_else(|| Error::incomplete(format!("no class parameters for {class}")))
    }

    pub fn class_mut(&mut self, class: VehicleClass) -> Result<&mut ClassParams> {
        self.classes
            .iter_mut()
            .find(|c| c.class == class)
            .ok_or_else(|| Error::incomplete(format!("no class parameters for {class}")))
    }

    pub fn vehicle(&self, class: VehicleClass, powertrain: Powertrain) -> Result<&VehicleEntry> {
        self.vehicles
            .iter()
            .find(|v| v.class == class && v.powertrain == powertrain)
            .ok_or_else(|| Error::incomplete(format!("no vehicle entry for {class}/{powertrain}")))
    }

    pub fn component(&self, id: &str) -> Result<&ComponentCost> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::incomplete(format!("unknown component `{id}`")))
    }

    pub fn component_mut(&mut self, id: &str) -> Result<&mut ComponentCost> {
        self.components
            .iter_mut()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::incomplete(format!("unknown component `{id}`")))
    }

    pub fn variant(&self, id: &str) -> Result<&VariantEntry> {
        self.variants
            .iter()
            .find(|v| v.id.eq_ignore_ascii_case(id))
            .ok_or_else(|| Error::UnknownVariant(id.to_string()))
    }

    pub fn variant_mut(&mut self, id: &str) -> Result<&mut VariantEntry> {
        self.variants
            .iter_mut()
            .find(|v| v.id.eq_ignore_ascii_case(id))
            .ok_or_else(|| Error::UnknownVariant(id.to_string()))
    }

    pub fn infra(&self, kind: InfraType) -> Result<&InfraEntry> {
        self.infrastructure
            .iter()
            .find(|i| i.kind == kind)
            .ok_or_else(|| Error::incomplete(format!("no infrastructure entry for {kind}")))
    }

    pub fn infra_mut(&mut self, kind: InfraType) -> Result<&mut InfraEntry> {
        self.infrastructure
            .iter_mut()
            .find(|i| i.kind == kind)
            .ok_or_else(|| Error::incomplete(format!("no infrastructure entry for {kind}")))
    }

    /// Infrastructure used for off-depot refueling of `carrier` (first match,
    /// DCFC before MCS for electricity).
    pub fn infra_for_carrier(&self, carrier: Carrier) -> Result<&InfraEntry> {
        self.infrastructure
            .iter()
            .find(|i| i.kind.carrier() == carrier)
            .ok_or_else(|| Error::incomplete(format!("no infrastructure supplies {}", carrier.as_str())))
    }

    /// Incentive for a vehicle bought in `year`; zero outside the window.
    pub fn incentive(&self, class: VehicleClass, powertrain: Powertrain, year: i32) -> f64 {
        self.incentives
            .iter()
            .filter(|i| i.class == class && i.powertrain == powertrain)
            .filter(|i| (i.first_year..=i.last_year).contains(&year))
            .map(|i| i.usd)
            .sum()
    }

    pub fn advancement_multiplier(&self, level: AdvancementLevel) -> f64 {
        match level {
            AdvancementLevel::Low => self.advancement.low,
            AdvancementLevel::Moderate => self.advancement.moderate,
            AdvancementLevel::High => self.advancement.high,
        }
    }

    /// Copy with every vehicle and infrastructure learning rate multiplied by `k`
    /// (clamped below 1).
    pub fn with_learning_multiplier(&self, k: f64) -> CostDataset {
        let mut ds = self.clone();
        let scale = |r: &mut f64| *r = (*r * k).clamp(0.0, 0.999);
        for c in &mut ds.components {
            scale(&mut c.learning_rate);
        }
        for infra in &mut ds.infrastructure {
            for item in infra.equipment.iter_mut().chain(infra.development.iter_mut()) {
                scale(&mut item.learning_rate);
            }
        }
        ds
    }

    pub fn with_advancement(&self, level: AdvancementLevel) -> CostDataset {
        self.with_learning_multiplier(self.advancement_multiplier(level))
    }

    /// Checks every invariant. Errors name the offending field; warnings
    /// flag suspicious but admissible values.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Validator::default();
        v.check(self);
        v.report
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub errors: Vec<Error>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn into_result(self) -> Result<Vec<String>> {
        match self.errors.into_iter().next() {
            Some(e) => Err(e),
            None => Ok(self.warnings),
        }
    }
}

#[derive(Default)]
struct Validator {
    report: ValidationReport,
}

impl Validator {
    fn err(&mut self, field: impl Into<String>, reason: &str) {
        self.report.errors.push(Error::field(field, reason));
    }

    fn non_negative(&mut self, field: &str, x: f64) {
        if !x.is_finite() || x < 0.0 {
            self.err(field, "must be a finite, non-negative number");
        }
    }

    fn positive(&mut self, field: &str, x: f64) {
        if !x.is_finite() || x <= 0.0 {
            self.err(field, "must be a finite, positive number");
        }
    }

    fn fraction(&mut self, field: &str, x: f64) {
        if !(0.0..=1.0).contains(&x) {
            self.err(field, "must lie in [0, 1]");
        }
    }

    fn rate(&mut self, field: &str, x: f64) {
        if !(0.0..1.0).contains(&x) {
            self.err(field, "must lie in [0, 1)");
        }
    }

    fn series(&mut self, field: &str, s: &YearSeries) {
        if s.values.is_empty() {
            self.err(field, "year series is empty");
        }
        for (i, v) in s.values.iter().enumerate() {
            self.non_negative(&format!("{field}.values[{i}]"), *v);
        }
    }

    fn check(&mut self, ds: &CostDataset) {
        if ds.schema_version != SCHEMA_VERSION {
            self.err("schema_version", "unsupported schema version");
        }
        if let Err(e) = ds.financial.validate() {
            self.report.errors.push(e);
        }
        for (name, k) in [
            ("advancement.low", ds.advancement.low),
            ("advancement.moderate", ds.advancement.moderate),
            ("advancement.high", ds.advancement.high),
        ] {
            self.non_negative(name, k);
        }
        self.non_negative("labor.driver_wage_usd_per_hour", ds.labor.driver_wage_usd_per_hour);
        self.fraction("labor.dwell_labor_ratio", ds.labor.dwell_labor_ratio);
        self.non_negative("labor.repair_labor_uplift", ds.labor.repair_labor_uplift);

        self.series("prices.diesel_usd_per_gal", &ds.prices.diesel_usd_per_gal);
        self.series("prices.electricity_usd_per_kwh", &ds.prices.electricity_usd_per_kwh);
        self.series("prices.hydrogen_usd_per_kg", &ds.prices.hydrogen_usd_per_kg);
        self.series("prices.natural_gas_usd_per_kg", &ds.prices.natural_gas_usd_per_kg);
        self.series("prices.carbon_usd_per_kg", &ds.prices.carbon_usd_per_kg);

        for c in Carrier::ALL {
            let p = ds.carriers.get(c);
            self.non_negative(&format!("carriers.{}.tailpipe_co2_kg_per_unit", c.as_str()), p.tailpipe_co2_kg_per_unit);
            self.positive(&format!("carriers.{}.kwh_per_unit", c.as_str()), p.kwh_per_unit);
        }
        self.non_negative("carriers.grid_co2_kg_per_kwh", ds.carriers.grid_co2_kg_per_kwh);

        let sys = &ds.system;
        self.positive("system.operating_days_per_year", sys.operating_days_per_year);
        if sys.operating_days_per_year > 366.0 {
            self.err("system.operating_days_per_year", "exceeds days in a year");
        }
        self.fraction("system.usable_battery_fraction", sys.usable_battery_fraction);
        self.positive("system.station_max_operational_hours", sys.station_max_operational_hours);
        if sys.first_year < ds.base_year || sys.last_year < sys.first_year {
            self.err("system.first_year", "projection range must start at or after the base year");
        }
        if ds.variants.iter().all(|v| v.id != sys.baseline_variant) {
            self.err("system.baseline_variant", "names no variant");
        }

        for class in VehicleClass::ALL {
            match ds.classes.iter().position(|c| c.class == class) {
                None => self.report.errors.push(Error::incomplete(format!("classes: missing {class}"))),
                Some(i) => self.class(i, &ds.classes[i]),
            }
        }

        for (i, c) in ds.components.iter().enumerate() {
            let f = format!("components[{i}]({})", c.id);
            self.non_negative(&format!("{f}.usd"), c.usd);
            self.rate(&format!("{f}.learning_rate"), c.learning_rate);
            if ds.components[..i].iter().any(|o| o.id == c.id) {
                self.err(format!("{f}.id"), "duplicate component id");
            }
            if let Some([lo, hi]) = c.range_usd {
                if !(lo <= hi) {
                    self.err(format!("{f}.range_usd"), "low end exceeds high end");
                }
            }
        }

        for class in VehicleClass::ALL {
            for pt in Powertrain::ALL {
                if ds.vehicles.iter().filter(|v| v.class == class && v.powertrain == pt).count() != 1 {
                    self.report
                        .errors
                        .push(Error::incomplete(format!("vehicles: need exactly one row for {class}/{pt}")));
                }
            }
        }
        for (i, v) in ds.vehicles.iter().enumerate() {
            self.vehicle(ds, i, v);
        }

        for (i, v) in ds.variants.iter().enumerate() {
            let f = format!("variants[{i}]({})", v.id);
            if ds.vehicles.iter().all(|e| e.class != v.class || e.powertrain != v.powertrain) {
                self.report
                    .errors
                    .push(Error::incomplete(format!("{f}: no vehicle row for {}/{}", v.class, v.powertrain)));
            }
            for (name, x) in [
                ("battery_kwh", v.battery_kwh),
                ("fuel_cell_kw", v.fuel_cell_kw),
                ("electric_drive_kw", v.electric_drive_kw),
                ("curb_weight_lb", v.curb_weight_lb),
            ] {
                if let Some(x) = x {
                    self.non_negative(&format!("{f}.{name}"), x);
                }
            }
            if let Some(e) = &v.energy {
                self.intensity(&format!("{f}.energy"), e);
            }
            if v.infrastructure.is_empty() {
                self.err(format!("{f}.infrastructure"), "variant needs at least one infrastructure type");
            }
            for kind in &v.infrastructure {
                if ds.infrastructure.iter().all(|e| e.kind != *kind) {
                    self.report.errors.push(Error::incomplete(format!("{f}: no infrastructure entry {kind}")));
                }
            }
            if ds.variants[..i].iter().any(|o| o.id.eq_ignore_ascii_case(&v.id)) {
                self.err(format!("{f}.id"), "duplicate variant id");
            }
        }

        for (i, inc) in ds.incentives.iter().enumerate() {
            self.non_negative(&format!("incentives[{i}].usd"), inc.usd);
            if inc.last_year < inc.first_year {
                self.err(format!("incentives[{i}].last_year"), "window ends before it starts");
            }
        }

        for (i, e) in ds.infrastructure.iter().enumerate() {
            self.infra(i, e);
        }
    }

    fn class(&mut self, i: usize, c: &ClassParams) {
        let f = format!("classes[{i}]({})", c.class);
        self.positive(&format!("{f}.annual_vmt"), c.annual_vmt);
        self.positive(&format!("{f}.average_speed_mph"), c.average_speed_mph);
        self.non_negative(&format!("{f}.insurance_rate"), c.insurance_rate);
        self.non_negative(&format!("{f}.registration_usd_per_year"), c.registration_usd_per_year);
        self.non_negative(&format!("{f}.tax_usd_per_year"), c.tax_usd_per_year);
        self.non_negative(&format!("{f}.payload_loss_usd_per_lb_mile"), c.payload_loss_usd_per_lb_mile);
        self.positive(&format!("{f}.retention.yearly_retention"), c.retention.yearly_retention);
        self.positive(&format!("{f}.retention.per_kmile_retention"), c.retention.per_kmile_retention);
        self.non_negative(&format!("{f}.retention.price_ratio"), c.retention.price_ratio);
        if c.retention.yearly_retention > 1.0 || c.retention.per_kmile_retention > 1.0 {
            self.report
                .warnings
                .push(format!("{f}.retention: retention above 1 implies appreciation"));
        }
    }

    fn intensity(&mut self, f: &str, e: &EnergyIntensity) {
        for c in Carrier::ALL {
            self.non_negative(&format!("{f}.{}", c.as_str()), e.get(c));
        }
    }

    fn vehicle(&mut self, ds: &CostDataset, i: usize, v: &VehicleEntry) {
        let f = format!("vehicles[{i}]({}/{})", v.class, v.powertrain);
        self.positive(&format!("{f}.multiplier"), v.multiplier);
        for (name, x) in [
            ("battery_kwh", v.battery_kwh),
            ("fuel_tank", v.fuel_tank),
            ("fuel_cell_kw", v.fuel_cell_kw),
            ("electric_drive_kw", v.electric_drive_kw),
            ("curb_weight_lb", v.curb_weight_lb),
        ] {
            self.non_negative(&format!("{f}.{name}"), x);
        }
        match v.powertrain {
            Powertrain::Bev if v.fuel_tank != 0.0 => self.err(format!("{f}.fuel_tank"), "BEV has no fuel tank"),
            Powertrain::DieselIce | Powertrain::HydrogenIce | Powertrain::NaturalGasIce
                if v.battery_kwh != 0.0 || v.fuel_cell_kw != 0.0 =>
            {
                self.err(format!("{f}.battery_kwh"), "ICE powertrains carry no traction battery or fuel cell")
            }
            _ => {}
        }
        self.intensity(&format!("{f}.energy"), &v.energy);
        self.non_negative(&format!("{f}.maintenance.usd_per_mile"), v.maintenance.usd_per_mile);
        self.non_negative(&format!("{f}.maintenance.growth_per_100k_miles"), v.maintenance.growth_per_100k_miles);
        self.fraction(&format!("{f}.depot_refuel_ratio"), v.depot_refuel_ratio);
        for (j, line) in v.bom.iter().enumerate() {
            self.positive(&format!("{f}.bom[{j}].margin"), line.margin);
            if ds.components.iter().all(|c| c.id != line.component) {
                self.report.errors.push(Error::incomplete(format!(
                    "{f}.bom[{j}]: unknown component `{}`",
                    line.component
                )));
            }
            if v.bom[..j].iter().any(|o| o.component == line.component) {
                self.err(format!("{f}.bom[{j}]"), "component listed twice");
            }
        }
        if let Some(r) = &v.battery_replacement {
            self.positive(&format!("{f}.battery_replacement.rated_cycles"), r.rated_cycles);
            self.positive(&format!("{f}.battery_replacement.life_miles"), r.life_miles);
        }
    }

    fn infra(&mut self, i: usize, e: &InfraEntry) {
        let f = format!("infrastructure[{i}]({})", e.kind);
        self.positive(&format!("{f}.rate_per_hour"), e.rate_per_hour);
        if !(e.effective_rate_fraction > 0.0 && e.effective_rate_fraction <= 1.0) {
            self.err(format!("{f}.effective_rate_fraction"), "must lie in (0, 1]");
        }
        self.non_negative(&format!("{f}.service_overhead_hours"), e.service_overhead_hours);
        if e.construction_years == 0 {
            self.err(format!("{f}.construction_years"), "must be at least 1");
        }
        if e.system_life_years == 0 || e.key_equipment_life_years == 0 {
            self.err(format!("{f}.system_life_years"), "lives must be at least one year");
        }
        self.non_negative(&format!("{f}.electrical_kw_per_station"), e.electrical_kw_per_station);
        self.fraction(&format!("{f}.coincidence_factor"), e.coincidence_factor);
        if !(e.transfer_efficiency > 0.0 && e.transfer_efficiency <= 1.0) {
            self.err(format!("{f}.transfer_efficiency"), "must lie in (0, 1]");
        }
        for (group, items) in [("equipment", &e.equipment), ("development", &e.development)] {
            for (j, item) in items.iter().enumerate() {
                let g = format!("{f}.{group}[{j}]({})", item.id);
                self.non_negative(&format!("{g}.unit_usd"), item.unit_usd);
                self.non_negative(&format!("{g}.qty_fixed"), item.qty_fixed);
                self.non_negative(&format!("{g}.qty_per_station"), item.qty_per_station);
                self.non_negative(&format!("{g}.qty_per_daily_unit"), item.qty_per_daily_unit);
                self.rate(&format!("{g}.learning_rate"), item.learning_rate);
                self.non_negative(&format!("{g}.incentive_usd"), item.incentive_usd);
            }
        }
        let m = &e.maintenance;
        self.non_negative(&format!("{f}.maintenance.base_usd_per_year"), m.base_usd_per_year);
        self.non_negative(&format!("{f}.maintenance.per_station_usd_per_year"), m.per_station_usd_per_year);
        self.non_negative(&format!("{f}.maintenance.escalation_rate"), m.escalation_rate);
        let o = &e.operation;
        for (name, x) in [
            ("insurance_rate", o.insurance_rate),
            ("property_tax_rate", o.property_tax_rate),
            ("warranty_usd_per_station_year", o.warranty_usd_per_station_year),
            ("labor_usd_per_year", o.labor_usd_per_year),
            ("licensing_usd_per_year", o.licensing_usd_per_year),
            ("downtime_hours_per_year", o.downtime_hours_per_year),
            ("downtime_usd_per_hour", o.downtime_usd_per_hour),
        ] {
            self.non_negative(&format!("{f}.operation.{name}"), x);
        }
        let t = &e.tariff;
        for (name, x) in [
            ("fixed_usd_per_year", t.fixed_usd_per_year),
            ("demand_usd_per_kw_month", t.demand_usd_per_kw_month),
            ("delivery_usd_per_year", t.delivery_usd_per_year),
            ("transmission_usd_per_year", t.transmission_usd_per_year),
        ] {
            self.non_negative(&format!("{f}.tariff.{name}"), x);
        }
        if let Some(p) = t.energy_usd_per_kwh {
            self.non_negative(&format!("{f}.tariff.energy_usd_per_kwh"), p);
        }
        if e.reference.stations == 0 {
            self.err(format!("{f}.reference.stations"), "must be at least 1");
        }
        self.non_negative(&format!("{f}.reference.daily_throughput"), e.reference.daily_throughput);
    }
}
