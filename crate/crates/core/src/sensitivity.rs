//! One-factor-at-a-time sensitivity of the system TCO.
//!
//! Each factor scales exactly one dataset field by `1 + delta`; which field
//! depends on the variant (its class row, vehicle row, fuel, and primary
//! infrastructure). Station counts stay at their baseline values.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::dataset::{Carrier, CostDataset, InfraEntry, InfraItem, InfraItemKind};
use crate::error::{Error, Result};
use crate::system::{self, StationSizing, SystemScenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorCategory {
    EnergyPrice,
    VehiclePrice,
    VehicleOm,
    FuelEfficiency,
    EndOfLife,
    Financial,
    InfraEquipmentPrice,
    InfraDevelopmentCost,
    InfraOm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorHandle {
    pub id: &'static str,
    pub category: FactorCategory,
}

const fn h(id: &'static str, category: FactorCategory) -> FactorHandle {
    FactorHandle { id, category }
}

use FactorCategory::*;

/// Every factor the engine knows, sorted by id.
pub const FACTORS: &[FactorHandle] = &[
    h("battery_cost", VehiclePrice),
    h("carbon_price", EnergyPrice),
    h("diesel_price", EnergyPrice),
    h("discount_rate", Financial),
    h("down_payment", Financial),
    h("driver_wage", VehicleOm),
    h("electric_drive_cost", VehiclePrice),
    h("electricity_consumption", FuelEfficiency),
    h("electricity_price", EnergyPrice),
    h("fuel_cell_cost", VehiclePrice),
    h("fuel_consumption", FuelEfficiency),
    h("glider_cost", VehiclePrice),
    h("h2_tank_cost", VehiclePrice),
    h("hydrogen_price", EnergyPrice),
    h("infra_civil_cost", InfraDevelopmentCost),
    h("infra_compressor_cost", InfraEquipmentPrice),
    h("infra_dispenser_cost", InfraEquipmentPrice),
    h("infra_electrical_cost", InfraEquipmentPrice),
    h("infra_engineering_cost", InfraDevelopmentCost),
    h("infra_insurance", InfraOm),
    h("infra_labor", InfraOm),
    h("infra_maintenance", InfraOm),
    h("infra_storage_cost", InfraEquipmentPrice),
    h("insurance", VehicleOm),
    h("interest_rate", Financial),
    h("natural_gas_price", EnergyPrice),
    h("residual_value", EndOfLife),
    h("vehicle_maintenance", VehicleOm),
    h("vehicle_multiplier", VehiclePrice),
    h("vmt", VehicleOm),
];

pub fn factor(id: &str) -> Result<FactorHandle> {
    FACTORS.iter().copied().find(|f| f.id == id).ok_or_else(|| Error::UnknownFactor(id.to_string()))
}

fn scale(x: &mut f64, k: f64) {
    *x *= k;
}

fn infra_item(e: &mut InfraEntry, kind: InfraItemKind) -> Option<&mut InfraItem> {
    e.equipment.iter_mut().chain(e.development.iter_mut()).find(|i| i.kind == kind)
}

fn not_applicable(id: &str, variant: &str) -> Error {
    Error::invalid(alloc::format!("factor `{id}` does not apply to {variant}"))
}

/// Scales the single field behind `factor_id` for `variant` by `1 + delta`.
pub fn apply_factor(ds: &mut CostDataset, variant: &str, factor_id: &str, delta: f64) -> Result<()> {
    let handle = factor(factor_id)?;
    let v = ds.variant(variant)?.clone();
    let k = 1.0 + delta;
    let na = || not_applicable(handle.id, &v.id);
    let fuel = v.powertrain.fuel();
    let primary = *v.infrastructure.first().ok_or_else(na)?;
    let consumption = |ds: &mut CostDataset, c: Carrier| -> Result<()> {
        if let Some(e) = ds.variant_mut(&v.id)?.energy.as_mut() {
            scale(e.get_mut(c), k);
        } else {
            let row = ds.vehicles.iter_mut().find(|r| r.class == v.class && r.powertrain == v.powertrain).ok_or_else(na)?;
            scale(row.energy.get_mut(c), k);
        }
        Ok(())
    };
    let item = |ds: &mut CostDataset, kind: InfraItemKind| -> Result<()> {
        let e = ds.infra_mut(primary)?;
        scale(&mut infra_item(e, kind).ok_or_else(na)?.unit_usd, k);
        Ok(())
    };
    let component = |ds: &mut CostDataset, id: &str| -> Result<()> {
        let used = ds.vehicle(v.class, v.powertrain)?.bom.iter().any(|l| l.component == id);
        if !used {
            return Err(na());
        }
        scale(&mut ds.component_mut(id)?.usd, k);
        Ok(())
    };
    match handle.id {
        "diesel_price" | "hydrogen_price" | "natural_gas_price" => {
            let c = match handle.id {
                "diesel_price" => Carrier::Diesel,
                "hydrogen_price" => Carrier::Hydrogen,
                _ => Carrier::NaturalGas,
            };
            if fuel != Some(c) {
                return Err(na());
            }
            ds.prices.series_mut(c).scale(k)
        }
        "electricity_price" => ds.prices.electricity_usd_per_kwh.scale(k),
        "carbon_price" => ds.prices.carbon_usd_per_kg.scale(k),
        "battery_cost" => component(ds, "battery")?,
        "fuel_cell_cost" => component(ds, "fuel_cell")?,
        "h2_tank_cost" => component(ds, "h2_tank")?,
        "electric_drive_cost" => component(ds, "electric_drive")?,
        "glider_cost" => component(ds, "glider")?,
        "vehicle_multiplier" => {
            let row = ds.vehicles.iter_mut().find(|r| r.class == v.class && r.powertrain == v.powertrain).ok_or_else(na)?;
            scale(&mut row.multiplier, k);
        }
        "vehicle_maintenance" => {
            let row = ds.vehicles.iter_mut().find(|r| r.class == v.class && r.powertrain == v.powertrain).ok_or_else(na)?;
            scale(&mut row.maintenance.usd_per_mile, k);
        }
        "vmt" => scale(&mut ds.class_mut(v.class)?.annual_vmt, k),
        "insurance" => scale(&mut ds.class_mut(v.class)?.insurance_rate, k),
        "residual_value" => scale(&mut ds.class_mut(v.class)?.retention.price_ratio, k),
        "driver_wage" => scale(&mut ds.labor.driver_wage_usd_per_hour, k),
        "fuel_consumption" => consumption(ds, fuel.ok_or_else(na)?)?,
        "electricity_consumption" => {
            if !v.powertrain.charges_from_grid() {
                return Err(na());
            }
            consumption(ds, Carrier::Electricity)?
        }
        "down_payment" => scale(&mut ds.financial.down_payment_ratio, k),
        "interest_rate" => scale(&mut ds.financial.interest_rate, k),
        "discount_rate" => scale(&mut ds.financial.discount_rate, k),
        "infra_dispenser_cost" => item(ds, InfraItemKind::Dispenser)?,
        "infra_compressor_cost" => item(ds, InfraItemKind::Compressor)?,
        "infra_storage_cost" => item(ds, InfraItemKind::Storage)?,
        "infra_electrical_cost" => item(ds, InfraItemKind::Electrical)?,
        "infra_civil_cost" => item(ds, InfraItemKind::Civil)?,
        "infra_engineering_cost" => item(ds, InfraItemKind::Engineering)?,
        "infra_maintenance" => scale(&mut ds.infra_mut(primary)?.maintenance.base_usd_per_year, k),
        "infra_labor" => scale(&mut ds.infra_mut(primary)?.operation.labor_usd_per_year, k),
        "infra_insurance" => scale(&mut ds.infra_mut(primary)?.operation.insurance_rate, k),
        other => return Err(Error::UnknownFactor(other.to_string())),
    }
    Ok(())
}

/// Factors that map to a field for `variant`, sorted by id.
pub fn applicable_factors(ds: &CostDataset, variant: &str) -> Result<Vec<FactorHandle>> {
    ds.variant(variant)?;
    let mut out = Vec::new();
    for f in FACTORS {
        let mut probe = ds.clone();
        match apply_factor(&mut probe, variant, f.id, 0.0) {
            Ok(()) => out.push(*f),
            Err(Error::InvalidInput(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityResult {
    pub variant: String,
    pub factor: String,
    pub category: FactorCategory,
    pub delta: f64,
    pub baseline: f64,
    pub perturbed: f64,
    /// `perturbed / baseline − 1`.
    pub relative_change: f64,
}

/// Re-runs the system TCO once per factor with that factor perturbed by `delta`.
pub fn run_sensitivity(
    ds: &CostDataset,
    scenario: &SystemScenario,
    fleet_size: u32,
    sizing: &[StationSizing],
    factors: &[&str],
    delta: f64,
) -> Result<Vec<SensitivityResult>> {
    if !delta.is_finite() || delta <= -1.0 {
        return Err(Error::invalid("delta must be finite and greater than −1"));
    }
    let handles = factors.iter().map(|id| factor(id)).collect::<Result<Vec<_>>>()?;
    let baseline = system::system_tco_sized(ds, scenario, fleet_size, sizing)?.levelized_with_infra;
    let mut out = Vec::with_capacity(handles.len());
    for f in handles {
        let mut perturbed_ds = ds.clone();
        apply_factor(&mut perturbed_ds, &scenario.variant, f.id, delta)?;
        let perturbed = system::system_tco_sized(&perturbed_ds, scenario, fleet_size, sizing)?.levelized_with_infra;
        out.push(SensitivityResult {
            variant: scenario.variant.clone(),
            factor: f.id.to_string(),
            category: f.category,
            delta,
            baseline,
            perturbed,
            relative_change: perturbed / baseline - 1.0,
        });
    }
    out.sort_by(|a, b| a.factor.cmp(&b.factor));
    Ok(out)
}

/// Results ranked by `|relative_change|`, ties broken by factor id.
pub fn tornado_table(results: &[SensitivityResult]) -> Vec<SensitivityResult> {
    let mut v = results.to_vec();
    v.sort_by(|a, b| {
        b.relative_change
            .abs()
            .total_cmp(&a.relative_change.abs())
            .then_with(|| a.variant.cmp(&b.variant))
            .then_with(|| a.factor.cmp(&b.factor))
    });
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_sorted_and_unique() {
        assert!(FACTORS.windows(2).all(|w| w[0].id < w[1].id));
        assert!(matches!(factor("nope"), Err(Error::UnknownFactor(_))));
    }

    #[test]
    fn tornado_orders_by_magnitude_then_id() {
        let r = |f: &str, c: f64| SensitivityResult {
            variant: "X".into(),
            factor: f.into(),
            category: FactorCategory::Financial,
            delta: 0.1,
            baseline: 1.0,
            perturbed: 1.0 + c,
            relative_change: c,
        };
        let t = tornado_table(&[r("b", 0.0), r("a", 0.0), r("c", -0.3), r("d", 0.2)]);
        let ids: Vec<_> = t.iter().map(|x| x.factor.as_str()).collect();
        assert_eq!(ids, ["c", "d", "a", "b"]);
    }
}
