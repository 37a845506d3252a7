//! Refuelling and charging infrastructure: CapEx by item, maintenance with
//! key-equipment replacement, operation, utility bill, carbon and residual value.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::cost::{ComponentCosts, CostBreakdown};
use crate::dataset::{
    CostDataset, InfraEntry, InfraItem, InfraItemKind, InfraMaintenance, InfraOperation, InfraType,
    UtilityTariff,
};
use crate::error::{Error, Result};
use crate::finance;

/// A sized installation of one infrastructure type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfraConfig {
    pub kind: InfraType,
    pub stations: u32,
    /// Units of the carrier dispensed per operating day.
    pub daily_throughput: f64,
    pub operating_days_per_year: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemGroup {
    Equipment,
    Development,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapexItem {
    pub id: String,
    pub kind: InfraItemKind,
    pub group: ItemGroup,
    pub quantity: f64,
    pub unit_usd: f64,
    pub cost: f64,
    pub share: f64,
    pub depreciable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfraCapex {
    pub year: i32,
    pub items: Vec<CapexItem>,
    pub equipment: f64,
    pub development: f64,
    pub total: f64,
}

impl InfraCapex {
    pub fn share_of(&self, kind: InfraItemKind) -> f64 {
        self.items.iter().filter(|i| i.kind == kind).map(|i| i.share).sum()
    }

    pub fn development_share(&self) -> f64 {
        if self.total > 0.0 { self.development / self.total } else { 0.0 }
    }
}

/// Learned unit cost net of the per-unit incentive, floored at zero.
pub fn item_unit_cost(item: &InfraItem, year: i32, base_year: i32) -> f64 {
    let learned = item.unit_usd * finance::learning_factor(item.learning_rate, year - base_year);
    (learned - item.incentive_usd).max(0.0)
}

/// `Σ A_l E_l + Σ B_f D_f` at `year`'s learned unit costs.
pub fn infra_capex(entry: &InfraEntry, stations: u32, daily_throughput: f64, year: i32, base_year: i32) -> InfraCapex {
    let mut items = Vec::with_capacity(entry.equipment.len() + entry.development.len());
    let groups = [(ItemGroup::Equipment, &entry.equipment), (ItemGroup::Development, &entry.development)];
    for (group, list) in groups {
        for item in list.iter() {
            let quantity = item.quantity(stations, daily_throughput);
            let unit_usd = item_unit_cost(item, year, base_year);
            items.push(CapexItem {
                id: item.id.clone(),
                kind: item.kind,
                group,
                quantity,
                unit_usd,
                cost: quantity * unit_usd,
                share: 0.0,
                depreciable: item.depreciable,
            });
        }
    }
    let sum = |g: ItemGroup| items.iter().filter(|i| i.group == g).map(|i| i.cost).sum::<f64>();
    let equipment = sum(ItemGroup::Equipment);
    let development = sum(ItemGroup::Development);
    let total = equipment + development;
    if total > 0.0 {
        for i in &mut items {
            i.share = i.cost / total;
        }
    }
    InfraCapex { year, items, equipment, development, total }
}

/// `fixed + price × E + demand × peak × 12 + delivery + transmission`.
pub fn utility_bill_year(tariff: &UtilityTariff, price_usd_per_kwh: f64, energy_kwh: f64, peak_kw: f64) -> f64 {
    tariff.fixed_usd_per_year
        + price_usd_per_kwh * energy_kwh
        + tariff.demand_usd_per_kw_month * peak_kw * 12.0
        + tariff.delivery_usd_per_year
        + tariff.transmission_usd_per_year
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InfraOpex {
    pub insurance: f64,
    pub warranty: f64,
    pub tax: f64,
    pub labor: f64,
    pub downtime: f64,
}

impl InfraOpex {
    pub fn total(&self) -> f64 {
        self.insurance + self.warranty + self.tax + self.labor + self.downtime
    }
}

pub fn infra_opex_year(op: &InfraOperation, installed_capex: f64, stations: u32) -> InfraOpex {
    InfraOpex {
        insurance: op.insurance_rate * installed_capex,
        warranty: op.warranty_usd_per_station_year * stations as f64,
        tax: op.property_tax_rate * installed_capex,
        labor: op.labor_usd_per_year + op.licensing_usd_per_year,
        downtime: op.downtime_hours_per_year * op.downtime_usd_per_hour,
    }
}

/// Age-based upkeep `F_g(age)` for an installation in its `age`-th operating year.
pub fn infra_base_maintenance(m: &InfraMaintenance, stations: u32, age: u32) -> f64 {
    let grown = m.base_usd_per_year * crate::math::powi(1.0 + m.escalation_rate, age.saturating_sub(1) as i32);
    grown + m.per_station_usd_per_year * stations as f64
}

/// `F_g(age) + Σ P × (1 + r_labor)` over units replaced this year.
pub fn infra_maintenance_year(
    m: &InfraMaintenance,
    stations: u32,
    age: u32,
    replacement_cost: f64,
    labor_uplift: f64,
) -> f64 {
    infra_base_maintenance(m, stations, age) + replacement_cost * (1.0 + labor_uplift)
}

/// Station overhead carbon cost: `kWh × grid intensity × carbon price`.
pub fn infra_environmental_year(overhead_kwh: f64, grid_co2_kg_per_kwh: f64, carbon_usd_per_kg: f64) -> f64 {
    overhead_kwh * grid_co2_kg_per_kwh * carbon_usd_per_kg
}

/// Operating years (1-based) in which a unit with life `life` is replaced
/// during an `horizon`-year operation. No replacement in the final year.
pub fn replacement_years(life: u32, horizon: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut age = 0;
    for year in 1..=horizon {
        age += 1;
        if age >= life && year < horizon {
            out.push(year);
            age = 0;
        }
    }
    out
}

/// Straight-line book value left at the end of `horizon` for a unit
/// (re)installed in operating year `installed` costing `cost`.
pub fn straight_line_residual(cost: f64, life: u32, installed: u32, horizon: u32) -> f64 {
    let age = horizon.saturating_sub(installed) as f64;
    cost * (1.0 - age / life as f64).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfraTco {
    pub config: InfraConfig,
    pub start_year: i32,
    pub construction_years: u32,
    pub horizon_years: u32,
    pub capex: InfraCapex,
    pub replacement_years: Vec<u32>,
    pub residual_value: f64,
    pub overhead_kwh_per_year: f64,
    pub peak_kw: f64,
    pub breakdown: CostBreakdown,
    /// Levelized cost per dispensed carrier unit.
    pub levelized_per_unit: f64,
}

impl InfraTco {
    /// Offset of the first operating year in the breakdown's year index.
    pub fn first_operating_index(&self) -> usize {
        self.construction_years as usize
    }
}

/// Lifetime cost of an installation whose construction starts in `start_year`.
///
/// Construction CapEx is spread evenly over the construction years (one year
/// for a single station) at indices `0..C`; operation follows for
/// `horizon` years. Depreciable equipment is replaced on reaching its life and
/// its straight-line book value is credited at the end.
pub fn infra_tco(ds: &CostDataset, config: &InfraConfig, start_year: i32, horizon: u32) -> Result<InfraTco> {
    let entry = ds.infra(config.kind)?;
    if config.stations == 0 {
        return Err(Error::invalid("infrastructure needs at least one station"));
    }
    if horizon == 0 || horizon > entry.system_life_years {
        return Err(Error::invalid(alloc::format!(
            "horizon {horizon} outside 1..={} years",
            entry.system_life_years
        )));
    }
    if !(config.daily_throughput >= 0.0) || !(config.operating_days_per_year >= 0.0) {
        return Err(Error::invalid("throughput and operating days must be non-negative"));
    }
    let c = if config.stations == 1 { 1 } else { entry.construction_years };
    let capex = infra_capex(entry, config.stations, config.daily_throughput, start_year, ds.base_year);
    let life = entry.key_equipment_life_years;
    let replacements = replacement_years(life, horizon);
    let carrier = config.kind.carrier();
    let yearly_units = config.daily_throughput * config.operating_days_per_year;
    let dispensed_kwh = yearly_units * ds.carriers.get(carrier).kwh_per_unit;
    let overhead_kwh = (1.0 / entry.transfer_efficiency - 1.0) * dispensed_kwh;
    let peak_kw = config.stations as f64 * entry.electrical_kw_per_station * entry.coincidence_factor;
    let opex = infra_opex_year(&entry.operation, capex.total, config.stations);

    let len = (c + horizon) as usize;
    let mut yearly = vec![ComponentCosts::default(); len];
    let mut quantity = vec![0.0; len];
    for y in yearly.iter_mut().take(c as usize) {
        y.acquisition = capex.total / c as f64;
    }
    let depreciable = |year: i32| -> f64 {
        infra_capex(entry, config.stations, config.daily_throughput, year, ds.base_year)
            .items
            .iter()
            .filter(|i| i.depreciable)
            .map(|i| i.cost)
            .sum()
    };
    let mut last_install = (0, capex.items.iter().filter(|i| i.depreciable).map(|i| i.cost).sum::<f64>());
    for k in 1..=horizon {
        let idx = (c + k - 1) as usize;
        let cal = start_year + idx as i32;
        let replaced = if replacements.contains(&k) {
            let cost = depreciable(cal);
            last_install = (k, cost);
            cost
        } else {
            0.0
        };
        let y = &mut yearly[idx];
        y.operation = opex.total();
        y.maintenance = infra_maintenance_year(&entry.maintenance, config.stations, k, replaced, ds.labor.repair_labor_uplift);
        let price = entry.tariff.energy_usd_per_kwh.unwrap_or_else(|| ds.prices.electricity_usd_per_kwh.at(cal));
        y.energy = utility_bill_year(&entry.tariff, price, overhead_kwh, peak_kw);
        y.environmental = infra_environmental_year(overhead_kwh, ds.carriers.grid_co2_kg_per_kwh, ds.prices.carbon(cal));
        quantity[idx] = yearly_units;
    }
    let residual_value = straight_line_residual(last_install.1, life, last_install.0, horizon);
    yearly[len - 1].end_of_life = -residual_value;

    let breakdown = CostBreakdown::from_yearly(start_year, yearly, quantity, ds.financial.discount_rate)?;
    let levelized_per_unit = breakdown.levelized_total();
    Ok(InfraTco {
        config: *config,
        start_year,
        construction_years: c,
        horizon_years: horizon,
        capex,
        replacement_years: replacements,
        residual_value,
        overhead_kwh_per_year: overhead_kwh,
        peak_kw,
        breakdown,
        levelized_per_unit,
    })
}
