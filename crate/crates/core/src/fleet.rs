//! Depot fleets: turning daily duty into refuelling/charging jobs and sizing
//! the station groups for a vehicle variant.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::dataset::{Carrier, CostDataset, InfraType};
use crate::error::{Error, Result};
use crate::schedule::{self, DepotVehicle, FleetInstance, Schedule};
use crate::vehicle::VehicleProfile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetVehicle {
    pub id: String,
    pub arrival_h: f64,
    pub dwell_h: f64,
    pub daily_miles: f64,
}

/// One representative operating day of a depot fleet.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FleetProfile {
    pub vehicles: Vec<FleetVehicle>,
}

impl FleetProfile {
    pub fn len(&self) -> usize {
        self.vehicles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vehicles.is_empty()
    }

    pub fn daily_miles(&self) -> f64 {
        self.vehicles.iter().map(|v| v.daily_miles).sum()
    }
}

/// Quantity a vehicle takes on at the depot in one day, capped by what its
/// tank or usable battery holds.
pub fn depot_quantity(ds: &CostDataset, profile: &VehicleProfile, carrier: Carrier, daily_miles: f64) -> f64 {
    let need = daily_miles * profile.energy.get(carrier) * profile.depot_refuel_ratio;
    let capacity = match carrier {
        Carrier::Electricity => profile.spec.battery_kwh * ds.system.usable_battery_fraction,
        _ => profile.spec.fuel_tank,
    };
    if capacity > 0.0 { need.min(capacity) } else { need }
}

/// Scheduling instance for one infrastructure type together with the daily
/// quantity dispensed. Vehicles that draw nothing from it are left out.
pub fn service_instance(
    ds: &CostDataset,
    profile: &VehicleProfile,
    fleet: &FleetProfile,
    kind: InfraType,
) -> Result<(FleetInstance, f64)> {
    let infra = ds.infra(kind)?;
    let carrier = kind.carrier();
    let mut vehicles = Vec::with_capacity(fleet.len());
    let mut daily = 0.0;
    for v in &fleet.vehicles {
        if !(v.daily_miles >= 0.0) {
            return Err(Error::invalid(alloc::format!("vehicle `{}`: daily miles must be non-negative", v.id)));
        }
        let q = depot_quantity(ds, profile, carrier, v.daily_miles);
        if q <= 0.0 {
            continue;
        }
        daily += q;
        vehicles.push(DepotVehicle {
            id: v.id.clone(),
            arrival_h: v.arrival_h,
            dwell_h: v.dwell_h,
            required_h: infra.service_overhead_hours + q / infra.effective_rate(),
        });
    }
    let instance = FleetInstance { vehicles, station_max_hours: ds.system.station_max_operational_hours };
    Ok((instance, daily))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationPlan {
    pub kind: InfraType,
    pub stations: u32,
    pub utilization: f64,
    /// Carrier units dispensed per operating day.
    pub daily_throughput: f64,
    pub schedule: Schedule,
}

/// Minimum station count for each infrastructure type the variant uses.
pub fn plan_stations(ds: &CostDataset, profile: &VehicleProfile, fleet: &FleetProfile) -> Result<Vec<StationPlan>> {
    profile
        .infrastructure
        .iter()
        .map(|&kind| {
            let (instance, daily) = service_instance(ds, profile, fleet, kind)?;
            let sched = schedule::min_stations(&instance)?;
            Ok(StationPlan {
                kind,
                stations: sched.stations,
                utilization: sched.utilization(24.0),
                daily_throughput: daily,
                schedule: sched,
            })
        })
        .collect()
}
