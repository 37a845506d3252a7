//! Vehicle plus allocated infrastructure cost per mile, breakeven against
//! diesel, and projections across technology-advancement levels.
//!
//! Infrastructure is levelized over its whole life against the fleet's
//! miles over the same years, assuming the fleet is renewed as it retires,
//! and the resulting $/mile adder is charged to every vehicle generation.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::dataset::{AdvancementLevel, CostDataset, InfraType, VehicleClass};
use crate::error::{Error, Result};
use crate::finance;
use crate::fleet::{self, FleetProfile, StationPlan};
use crate::infra::{self, InfraConfig, InfraTco};
use crate::vehicle::{self, VehicleProfile, VehicleTco};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemScenario {
    pub variant: String,
    pub year: i32,
    pub advancement: AdvancementLevel,
}

/// Station counts for a scenario, fixed before costing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationSizing {
    pub kind: InfraType,
    pub stations: u32,
    pub daily_throughput: f64,
    pub utilization: f64,
}

impl From<&StationPlan> for StationSizing {
    fn from(p: &StationPlan) -> Self {
        Self { kind: p.kind, stations: p.stations, daily_throughput: p.daily_throughput, utilization: p.utilization }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfraAllocation {
    pub sizing: StationSizing,
    pub tco: InfraTco,
    /// Fleet miles discounted over the infrastructure timeline.
    pub discounted_fleet_miles: f64,
    pub adder_usd_per_mile: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemTco {
    pub scenario: SystemScenario,
    pub fleet_size: u32,
    pub vehicle: VehicleTco,
    pub infrastructure: Vec<InfraAllocation>,
    pub adder_usd_per_mile: f64,
    pub levelized_without_infra: f64,
    pub levelized_with_infra: f64,
}

/// Sizes every station group of the variant by scheduling the fleet.
pub fn size_stations(ds: &CostDataset, variant: &str, fleet: &FleetProfile) -> Result<Vec<StationSizing>> {
    let profile = VehicleProfile::for_variant(ds, variant)?;
    Ok(fleet::plan_stations(ds, &profile, fleet)?.iter().map(StationSizing::from).collect())
}

/// Per-mile infrastructure charge for one station group.
pub fn allocate_infra(
    ds: &CostDataset,
    sizing: &StationSizing,
    fleet_size: u32,
    annual_vmt: f64,
    year: i32,
) -> Result<InfraAllocation> {
    let life = ds.infra(sizing.kind)?.system_life_years;
    let config = InfraConfig {
        kind: sizing.kind,
        stations: sizing.stations,
        daily_throughput: sizing.daily_throughput,
        operating_days_per_year: ds.system.operating_days_per_year,
    };
    if sizing.stations == 0 {
        return Err(Error::invalid(alloc::format!("no {} stations sized", sizing.kind)));
    }
    let tco = infra::infra_tco(ds, &config, year, life)?;
    let first = tco.first_operating_index();
    let fleet_vmt = fleet_size as f64 * annual_vmt;
    let d = ds.financial.discount_rate;
    let discounted_fleet_miles: f64 =
        (first..first + life as usize).map(|i| fleet_vmt * finance::discount_factor(d, i as u32)).sum();
    if !(discounted_fleet_miles > 0.0) {
        return Err(Error::DegenerateDivision);
    }
    let adder_usd_per_mile = tco.breakdown.total() / discounted_fleet_miles;
    Ok(InfraAllocation { sizing: *sizing, tco, discounted_fleet_miles, adder_usd_per_mile })
}

/// System TCO with station counts supplied by the caller.
pub fn system_tco_sized(
    ds: &CostDataset,
    scenario: &SystemScenario,
    fleet_size: u32,
    sizing: &[StationSizing],
) -> Result<SystemTco> {
    let ds = ds.with_advancement(scenario.advancement);
    let profile = VehicleProfile::for_variant(&ds, &scenario.variant)?;
    let vehicle = vehicle::vehicle_tco(&ds, &profile, scenario.year)?;
    let annual_vmt = ds.class(profile.spec.class)?.annual_vmt;
    let infrastructure = sizing
        .iter()
        .filter(|s| s.stations > 0)
        .map(|s| allocate_infra(&ds, s, fleet_size, annual_vmt, scenario.year))
        .collect::<Result<Vec<_>>>()?;
    let adder: f64 = infrastructure.iter().map(|a| a.adder_usd_per_mile).sum();
    let without = vehicle.breakdown.levelized_total();
    Ok(SystemTco {
        scenario: scenario.clone(),
        fleet_size,
        vehicle,
        infrastructure,
        adder_usd_per_mile: adder,
        levelized_without_infra: without,
        levelized_with_infra: without + adder,
    })
}

/// Schedules the fleet, then costs the scenario.
pub fn system_tco(ds: &CostDataset, scenario: &SystemScenario, fleet: &FleetProfile) -> Result<SystemTco> {
    let sizing = size_stations(ds, &scenario.variant, fleet)?;
    system_tco_sized(ds, scenario, fleet.len() as u32, &sizing)
}

/// First year in which `alt ≤ diesel`; `None` if never.
pub fn breakeven_year(years: &[i32], alt: &[f64], diesel: &[f64]) -> Result<Option<i32>> {
    if years.len() != alt.len() || years.len() != diesel.len() {
        return Err(Error::invalid("breakeven series must cover the same years"));
    }
    if years.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("breakeven years must be strictly increasing"));
    }
    Ok(years.iter().zip(alt.iter().zip(diesel)).find(|(_, (a, d))| a <= d).map(|(y, _)| *y))
}

/// Levelized values of one variant in one year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelizedPair {
    pub without_infra: f64,
    pub with_infra: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionPoint {
    pub year: i32,
    pub moderate: LevelizedPair,
    /// Elementwise minimum over the three advancement levels.
    pub band_low: LevelizedPair,
    /// Elementwise maximum over the three advancement levels.
    pub band_high: LevelizedPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSeries {
    pub variant: String,
    pub class: VehicleClass,
    pub sizing: Vec<StationSizing>,
    pub points: Vec<ProjectionPoint>,
}

impl ProjectionSeries {
    pub fn years(&self) -> Vec<i32> {
        self.points.iter().map(|p| p.year).collect()
    }

    pub fn moderate_without(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.moderate.without_infra).collect()
    }

    pub fn moderate_with(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.moderate.with_infra).collect()
    }
}

/// Projects one variant over `years` with station counts sized once on the
/// base dataset.
pub fn project_variant(
    ds: &CostDataset,
    variant: &str,
    years: &[i32],
    fleet_size: u32,
    sizing: &[StationSizing],
) -> Result<ProjectionSeries> {
    let profile = VehicleProfile::for_variant(ds, variant)?;
    let mut points = Vec::with_capacity(years.len());
    for &year in years {
        let mut pairs = [LevelizedPair { without_infra: 0.0, with_infra: 0.0 }; 3];
        for (slot, level) in pairs.iter_mut().zip(AdvancementLevel::ALL) {
            let scenario = SystemScenario { variant: profile.id.clone(), year, advancement: level };
            let s = system_tco_sized(ds, &scenario, fleet_size, sizing)?;
            *slot = LevelizedPair { without_infra: s.levelized_without_infra, with_infra: s.levelized_with_infra };
        }
        let pick = |f: fn(f64, f64) -> f64| LevelizedPair {
            without_infra: pairs.iter().map(|p| p.without_infra).reduce(f).unwrap(),
            with_infra: pairs.iter().map(|p| p.with_infra).reduce(f).unwrap(),
        };
        points.push(ProjectionPoint { year, moderate: pairs[1], band_low: pick(f64::min), band_high: pick(f64::max) });
    }
    Ok(ProjectionSeries { variant: profile.id, class: profile.spec.class, sizing: sizing.to_vec(), points })
}

/// Projects each variant, scheduling its station groups on `fleet`.
pub fn project(ds: &CostDataset, variants: &[String], years: &[i32], fleet: &FleetProfile) -> Result<Vec<ProjectionSeries>> {
    if years.is_empty() {
        return Err(Error::invalid("projection needs at least one year"));
    }
    if let Some(y) = years.iter().find(|&&y| y < ds.base_year) {
        return Err(Error::invalid(alloc::format!("year {y} precedes base year {}", ds.base_year)));
    }
    variants
        .iter()
        .map(|v| {
            let sizing = size_stations(ds, v, fleet)?;
            project_variant(ds, v, years, fleet.len() as u32, &sizing)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breakeven {
    pub variant: String,
    pub baseline: String,
    pub without_infra: Option<i32>,
    pub with_infra: Option<i32>,
}

/// Breakeven years of `alt` against `baseline` (moderate advancement).
pub fn breakeven(alt: &ProjectionSeries, baseline: &ProjectionSeries) -> Result<Breakeven> {
    let years = alt.years();
    if years != baseline.years() {
        return Err(Error::invalid("projection series cover different years"));
    }
    Ok(Breakeven {
        variant: alt.variant.clone(),
        baseline: baseline.variant.clone(),
        without_infra: breakeven_year(&years, &alt.moderate_without(), &baseline.moderate_without())?,
        with_infra: breakeven_year(&years, &alt.moderate_with(), &baseline.moderate_with())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakeven_examples() {
        let years = [2030, 2031, 2032];
        assert_eq!(breakeven_year(&years, &[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]).unwrap(), Some(2030));
        assert_eq!(breakeven_year(&years, &[3.0, 1.9, 1.0], &[2.0, 2.0, 2.0]).unwrap(), Some(2031));
        assert_eq!(breakeven_year(&years, &[3.0, 3.0, 3.0], &[2.0, 2.0, 2.0]).unwrap(), None);
        assert!(breakeven_year(&years, &[1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(breakeven_year(&[2031, 2030], &[1.0, 1.0], &[1.0, 1.0]).is_err());
        assert_eq!(breakeven_year(&[], &[], &[]).unwrap(), None);
    }
}
