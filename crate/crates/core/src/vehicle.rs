//! Vehicle-side costing: component pricing, financed acquisition, maintenance
//! with battery replacement, operating costs, energy, carbon and residual value.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::cost::{ComponentCosts, CostBreakdown};
use crate::dataset::{
    BatteryReplacement, Carrier, CostBasis, CostDataset, EnergyIntensity, EnergyPrices, InfraType,
    MaintenanceCurve, Powertrain, ReplacementTrigger, VehicleClass, VehicleEntry,
};
use crate::error::{Error, Result};
use crate::finance::{self, FinancialParams};
use crate::math;

/// Physical specification of one vehicle configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleSpec {
    pub class: VehicleClass,
    pub powertrain: Powertrain,
    pub battery_kwh: f64,
    pub fuel_tank: f64,
    pub fuel_cell_kw: f64,
    pub electric_drive_kw: f64,
    pub curb_weight_lb: f64,
}

/// A vehicle row with any variant overrides applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleProfile {
    pub id: String,
    pub spec: VehicleSpec,
    pub energy: EnergyIntensity,
    pub maintenance: MaintenanceCurve,
    pub depot_refuel_ratio: f64,
    pub battery_replacement: Option<BatteryReplacement>,
    pub infrastructure: Vec<InfraType>,
}

impl VehicleProfile {
    fn from_entry(id: String, e: &VehicleEntry, infrastructure: Vec<InfraType>) -> Self {
        Self {
            id,
            spec: VehicleSpec {
                class: e.class,
                powertrain: e.powertrain,
                battery_kwh: e.battery_kwh,
                fuel_tank: e.fuel_tank,
                fuel_cell_kw: e.fuel_cell_kw,
                electric_drive_kw: e.electric_drive_kw,
                curb_weight_lb: e.curb_weight_lb,
            },
            energy: e.energy,
            maintenance: e.maintenance,
            depot_refuel_ratio: e.depot_refuel_ratio,
            battery_replacement: e.battery_replacement,
            infrastructure,
        }
    }

    /// Table row for `(class, powertrain)` with the default infrastructure pairing.
    pub fn for_vehicle(ds: &CostDataset, class: VehicleClass, powertrain: Powertrain) -> Result<Self> {
        let e = ds.vehicle(class, powertrain)?;
        let id = alloc::format!("{}/{}", class, powertrain);
        Ok(Self::from_entry(id, e, default_infrastructure(powertrain)))
    }

    pub fn for_variant(ds: &CostDataset, id: &str) -> Result<Self> {
        let v = ds.variant(id)?;
        let e = ds.vehicle(v.class, v.powertrain)?;
        let mut p = Self::from_entry(v.id.clone(), e, v.infrastructure.clone());
        if let Some(x) = v.battery_kwh {
            p.spec.battery_kwh = x;
        }
        if let Some(x) = v.fuel_cell_kw {
            p.spec.fuel_cell_kw = x;
        }
        if let Some(x) = v.electric_drive_kw {
            p.spec.electric_drive_kw = x;
        }
        if let Some(x) = v.curb_weight_lb {
            p.spec.curb_weight_lb = x;
        }
        if let Some(x) = v.energy {
            p.energy = x;
        }
        Ok(p)
    }

    /// Energy drawn per year, by carrier.
    pub fn energy_use(&self, vmt: f64) -> CarrierQuantities {
        let mut q = CarrierQuantities::default();
        for c in Carrier::ALL {
            *q.get_mut(c) = self.energy.get(c) * vmt;
        }
        q
    }
}

pub fn default_infrastructure(p: Powertrain) -> Vec<InfraType> {
    match p {
        Powertrain::DieselIce => vec![InfraType::Diesel],
        Powertrain::HydrogenIce | Powertrain::Fcev => vec![InfraType::Hydrogen],
        Powertrain::NaturalGasIce => vec![InfraType::NaturalGas],
        Powertrain::Bev => vec![InfraType::Dcfc],
        Powertrain::NzevDiesel => vec![InfraType::Diesel, InfraType::Dcfc],
        Powertrain::NzevHydrogen => vec![InfraType::Hydrogen, InfraType::Dcfc],
        Powertrain::NzevNaturalGas => vec![InfraType::NaturalGas, InfraType::Dcfc],
    }
}

/// Amounts keyed by energy carrier, in each carrier's native unit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CarrierQuantities {
    pub diesel_gal: f64,
    pub electricity_kwh: f64,
    pub hydrogen_kg: f64,
    pub natural_gas_kg: f64,
}

impl CarrierQuantities {
    pub fn get(&self, c: Carrier) -> f64 {
        match c {
            Carrier::Diesel => self.diesel_gal,
            Carrier::Electricity => self.electricity_kwh,
            Carrier::Hydrogen => self.hydrogen_kg,
            Carrier::NaturalGas => self.natural_gas_kg,
        }
    }

    pub fn get_mut(&mut self, c: Carrier) -> &mut f64 {
        match c {
            Carrier::Diesel => &mut self.diesel_gal,
            Carrier::Electricity => &mut self.electricity_kwh,
            Carrier::Hydrogen => &mut self.hydrogen_kg,
            Carrier::NaturalGas => &mut self.natural_gas_kg,
        }
    }
}

/// `C₀ × F × M`.
pub fn component_price(baseline_cost: f64, margin: f64, multiplier: f64) -> f64 {
    baseline_cost * margin * multiplier
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricedComponent {
    pub component: String,
    pub usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehiclePrice {
    pub year: i32,
    pub components: Vec<PricedComponent>,
    /// Sum of learned component prices.
    pub gross: f64,
    pub incentive: f64,
    /// `max(gross − incentive, 0)`.
    pub net: f64,
}

fn sized_quantity(spec: &VehicleSpec, basis: CostBasis) -> f64 {
    match basis {
        CostBasis::Fixed => 1.0,
        CostBasis::BatteryKwh => spec.battery_kwh,
        CostBasis::FuelCellKw => spec.fuel_cell_kw,
        CostBasis::FuelTank => spec.fuel_tank,
        CostBasis::ElectricDriveKw => spec.electric_drive_kw,
    }
}

/// Learned price of one BOM line in `year`.
fn bom_line_price(ds: &CostDataset, spec: &VehicleSpec, multiplier: f64, id: &str, margin: f64, year: i32) -> Result<f64> {
    let c = ds.component(id)?;
    let m = if c.basis == CostBasis::Fixed { multiplier } else { 1.0 };
    let base = c.usd * sized_quantity(spec, c.basis);
    let learned = base * finance::learning_factor(c.learning_rate, year - ds.base_year);
    Ok(component_price(learned, margin, m))
}

/// Retail price in `year`: learned component prices less the incentive, floored at zero.
pub fn vehicle_price(ds: &CostDataset, profile: &VehicleProfile, year: i32) -> Result<VehiclePrice> {
    if year < ds.base_year {
        return Err(Error::invalid(alloc::format!("year {year} precedes base year {}", ds.base_year)));
    }
    let spec = &profile.spec;
    let entry = ds.vehicle(spec.class, spec.powertrain)?;
    if entry.bom.is_empty() {
        return Err(Error::incomplete(alloc::format!(
            "empty bill of materials for {}/{}",
            spec.class, spec.powertrain
        )));
    }
    let mut components = Vec::with_capacity(entry.bom.len());
    for line in &entry.bom {
        let usd = bom_line_price(ds, spec, entry.multiplier, &line.component, line.margin, year)?;
        components.push(PricedComponent { component: line.component.clone(), usd });
    }
    let gross: f64 = components.iter().map(|c| c.usd).sum();
    let incentive = ds.incentive(spec.class, spec.powertrain, year);
    Ok(VehiclePrice { year, components, gross, incentive, net: (gross - incentive).max(0.0) })
}

/// Price of a replacement traction battery bought in `year`, before labor.
pub fn battery_pack_price(ds: &CostDataset, profile: &VehicleProfile, year: i32) -> Result<f64> {
    let entry = ds.vehicle(profile.spec.class, profile.spec.powertrain)?;
    let mut total = 0.0;
    for line in &entry.bom {
        if ds.component(&line.component)?.basis == CostBasis::BatteryKwh {
            total += bom_line_price(ds, &profile.spec, entry.multiplier, &line.component, line.margin, year)?;
        }
    }
    Ok(total)
}

/// Acquisition outflows indexed from year 0 (down payment) through `analysis_period`.
/// A loan outliving the analysis period is settled in the final year.
pub fn vehicle_capex(price: f64, fp: &FinancialParams) -> Result<Vec<f64>> {
    let lp = finance::loan_payments(price, fp)?;
    let n = fp.analysis_period_years;
    let mut flows = vec![0.0; n as usize + 1];
    flows[0] = lp.down_payment;
    for i in 1..=n.min(fp.loan_term_years) {
        flows[i as usize] = lp.annual_payment;
    }
    if n < fp.loan_term_years {
        let principal = price - lp.down_payment;
        flows[n as usize] += finance::remaining_balance(principal, fp.interest_rate, fp.loan_term_years, n);
    }
    Ok(flows)
}

/// Usage counter for a replaceable component. Excess usage past a
/// replacement carries into the next life.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplacementCounter {
    pub threshold: f64,
    pub usage: f64,
}

impl ReplacementCounter {
    pub fn new(threshold: f64) -> Self {
        Self { threshold, usage: 0.0 }
    }

    /// Adds one year's usage; returns the number of replacements it triggers.
    pub fn advance(&mut self, usage: f64) -> u32 {
        if !(self.threshold > 0.0) {
            return 0;
        }
        self.usage += usage;
        let n = math::floor(self.usage / self.threshold);
        self.usage -= n * self.threshold;
        n as u32
    }
}

/// `F(M) × VMT + replacements × P × (1 + r_labor)`.
pub fn maintenance_year(
    curve: &MaintenanceCurve,
    vmt: f64,
    odometer: f64,
    replacements: u32,
    replacement_price: f64,
    labor_uplift: f64,
) -> f64 {
    curve.rate(odometer) * vmt + replacements as f64 * replacement_price * (1.0 + labor_uplift)
}

/// Inputs to one year of vehicle operating cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OpexInputs {
    pub driving_hours: f64,
    pub wage_usd_per_hour: f64,
    pub insurance_usd: f64,
    pub tax_and_fees_usd: f64,
    pub payload_penalty_lb: f64,
    pub payload_loss_usd_per_lb_mile: f64,
    pub vmt: f64,
    pub dwell_hours: f64,
    pub dwell_labor_ratio: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OpexYear {
    pub driver: f64,
    pub insurance: f64,
    pub tax_and_fees: f64,
    pub payload_loss: f64,
    pub dwell: f64,
}

impl OpexYear {
    pub fn total(&self) -> f64 {
        self.driver + self.insurance + self.tax_and_fees + self.payload_loss + self.dwell
    }
}

pub fn opex_year(x: &OpexInputs) -> OpexYear {
    OpexYear {
        driver: x.driving_hours * x.wage_usd_per_hour,
        insurance: x.insurance_usd,
        tax_and_fees: x.tax_and_fees_usd,
        payload_loss: x.payload_penalty_lb * x.payload_loss_usd_per_lb_mile * x.vmt,
        dwell: x.dwell_hours * x.wage_usd_per_hour * x.dwell_labor_ratio,
    }
}

/// `Σ price × quantity` over carriers.
pub fn energy_cost_year(energy: &CarrierQuantities, prices: &EnergyPrices, year: i32) -> f64 {
    Carrier::ALL
        .iter()
        .map(|c| match energy.get(*c) {
            0.0 => 0.0,
            q => q * prices.price(*c, year),
        })
        .sum()
}

/// Tank-to-wheel CO2 cost `Σ factor × quantity × carbon price`.
pub fn environmental_cost_year(energy: &CarrierQuantities, ds: &CostDataset, year: i32) -> f64 {
    let carbon = ds.prices.carbon(year);
    Carrier::ALL
        .iter()
        .map(|c| energy.get(*c) * ds.carriers.get(*c).tailpipe_co2_kg_per_unit * carbon)
        .sum()
}

/// `C × exp(A·age + M·mileage_k)` with `exp(A)`, `exp(M)` given as retention factors.
pub fn residual_value(c: f64, yearly_retention: f64, per_kmile_retention: f64, age: f64, mileage_k: f64) -> f64 {
    c * math::exp(math::ln(yearly_retention) * age + math::ln(per_kmile_retention) * mileage_k)
}

/// Yearly off-depot refuelling/charging hours: time at the dispenser plus
/// the per-visit service overhead.
pub fn dwell_hours(ds: &CostDataset, profile: &VehicleProfile, energy: &CarrierQuantities) -> Result<f64> {
    let off_depot = 1.0 - profile.depot_refuel_ratio;
    let mut hours = 0.0;
    for c in Carrier::ALL {
        let q = energy.get(c) * off_depot;
        if q <= 0.0 {
            continue;
        }
        let infra = ds.infra_for_carrier(c)?;
        let capacity = match c {
            Carrier::Electricity => profile.spec.battery_kwh * ds.system.usable_battery_fraction,
            _ => profile.spec.fuel_tank,
        };
        let visits = if capacity > 0.0 { q / capacity } else { 0.0 };
        hours += q / infra.effective_rate() + visits * infra.service_overhead_hours;
    }
    Ok(hours)
}

/// Per-year detail behind a vehicle TCO, undiscounted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VehicleYear {
    pub calendar_year: i32,
    pub vmt: f64,
    pub odometer_start: f64,
    pub energy: CarrierQuantities,
    pub opex: OpexYear,
    pub battery_replacements: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleTco {
    pub profile: VehicleProfile,
    pub price: VehiclePrice,
    pub residual_value: f64,
    pub years: Vec<VehicleYear>,
    pub breakdown: CostBreakdown,
}

/// Whole-life cost of a vehicle bought at the start of `start_year` and
/// operated for the analysis period.
pub fn vehicle_tco(ds: &CostDataset, profile: &VehicleProfile, start_year: i32) -> Result<VehicleTco> {
    let fp = &ds.financial;
    fp.validate()?;
    let spec = &profile.spec;
    let class = ds.class(spec.class)?;
    let price = vehicle_price(ds, profile, start_year)?;
    let capex = vehicle_capex(price.net, fp)?;
    let n = fp.analysis_period_years as usize;
    let vmt = class.annual_vmt;

    let diesel_curb = ds.vehicle(spec.class, Powertrain::DieselIce)?.curb_weight_lb;
    let payload_penalty = (spec.curb_weight_lb - diesel_curb).max(0.0);
    let energy = profile.energy_use(vmt);
    let dwell = dwell_hours(ds, profile, &energy)?;
    let opex_inputs = OpexInputs {
        driving_hours: vmt / class.average_speed_mph,
        wage_usd_per_hour: ds.labor.driver_wage_usd_per_hour,
        insurance_usd: class.insurance_rate * price.gross,
        tax_and_fees_usd: class.registration_usd_per_year + class.tax_usd_per_year,
        payload_penalty_lb: payload_penalty,
        payload_loss_usd_per_lb_mile: class.payload_loss_usd_per_lb_mile,
        vmt,
        dwell_hours: dwell,
        dwell_labor_ratio: ds.labor.dwell_labor_ratio,
    };
    let opex = opex_year(&opex_inputs);

    let mut counter = profile.battery_replacement.filter(|_| spec.battery_kwh > 0.0).map(|r| {
        let threshold = match r.trigger {
            ReplacementTrigger::Throughput => r.rated_cycles * spec.battery_kwh,
            ReplacementTrigger::Odometer => r.life_miles,
        };
        (r.trigger, ReplacementCounter::new(threshold))
    });

    let mut yearly = vec![ComponentCosts::default(); n + 1];
    let mut quantity = vec![0.0; n + 1];
    let mut years = Vec::with_capacity(n);
    yearly[0].acquisition = capex[0];
    let mut odometer = 0.0;
    for i in 1..=n {
        let cal = start_year + i as i32 - 1;
        let replacements = match &mut counter {
            Some((ReplacementTrigger::Throughput, c)) => c.advance(energy.electricity_kwh),
            Some((ReplacementTrigger::Odometer, c)) => c.advance(vmt),
            None => 0,
        };
        let pack = if replacements > 0 { battery_pack_price(ds, profile, cal)? } else { 0.0 };
        let y = &mut yearly[i];
        y.acquisition = capex[i];
        y.operation = opex.total();
        y.maintenance =
            maintenance_year(&profile.maintenance, vmt, odometer, replacements, pack, ds.labor.repair_labor_uplift);
        y.energy = energy_cost_year(&energy, &ds.prices, cal);
        y.environmental = environmental_cost_year(&energy, ds, cal);
        quantity[i] = vmt;
        years.push(VehicleYear {
            calendar_year: cal,
            vmt,
            odometer_start: odometer,
            energy,
            opex,
            battery_replacements: replacements,
        });
        odometer += vmt;
    }

    let rv = residual_value(
        price.gross * class.retention.price_ratio,
        class.retention.yearly_retention,
        class.retention.per_kmile_retention,
        n as f64,
        odometer / 1000.0,
    );
    if n > 0 {
        yearly[n].end_of_life = -rv;
    }
    let breakdown = CostBreakdown::from_yearly(start_year, yearly, quantity, fp.discount_rate)?;
    Ok(VehicleTco { profile: profile.clone(), price, residual_value: rv, years, breakdown })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_terms() -> FinancialParams {
        FinancialParams {
            discount_rate: 0.07,
            interest_rate: 0.04,
            loan_term_years: 5,
            down_payment_ratio: 0.2,
            analysis_period_years: 5,
        }
    }

    #[test]
    fn eq3_product() {
        assert!((component_price(10_000.0, 1.2, 1.5) - 18_000.0).abs() < 1e-9);
        assert_eq!(component_price(7_000.0, 1.0, 1.0), 7_000.0);
    }

    #[test]
    fn capex_flows() {
        let f = vehicle_capex(100_000.0, &reference_terms()).unwrap();
        assert_eq!(f.len(), 6);
        assert!((f[0] - 20_000.0).abs() < 1e-9);
        for p in &f[1..] {
            assert!((p - 17_970.169_079_442_71).abs() < 1e-6);
        }
        let cash = vehicle_capex(100_000.0, &FinancialParams { down_payment_ratio: 1.0, ..reference_terms() }).unwrap();
        assert_eq!(cash[0], 100_000.0);
        assert!(cash[1..].iter().all(|x| *x == 0.0));
        assert!(vehicle_capex(0.0, &reference_terms()).unwrap().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn early_disposal_settles_loan() {
        let fp = FinancialParams { analysis_period_years: 3, ..reference_terms() };
        let f = vehicle_capex(100_000.0, &fp).unwrap();
        let pay = finance::annuity_payment(80_000.0, 0.04, 5);
        let owed = finance::remaining_balance(80_000.0, 0.04, 5, 3);
        assert!((f[3] - (pay + owed)).abs() < 1e-9);
        // Undiscounted at the loan rate, the payments repay the principal exactly.
        let pv: f64 = f[1..].iter().enumerate().map(|(i, x)| x / libm::pow(1.04, (i + 1) as f64)).sum();
        assert!((pv - 80_000.0).abs() < 1e-6);
    }

    #[test]
    fn maintenance_examples() {
        let curve = MaintenanceCurve { usd_per_mile: 0.15, growth_per_100k_miles: 0.0 };
        assert!((maintenance_year(&curve, 60_000.0, 0.0, 0, 0.0, 0.2) - 9_000.0).abs() < 1e-9);
        let flat = MaintenanceCurve { usd_per_mile: 0.0, growth_per_100k_miles: 0.0 };
        assert!((maintenance_year(&flat, 0.0, 0.0, 1, 30_000.0, 0.2) - 36_000.0).abs() < 1e-9);
        assert_eq!(maintenance_year(&curve, 0.0, 5e5, 0, 30_000.0, 0.2), 0.0);
    }

    #[test]
    fn opex_examples() {
        assert_eq!(opex_year(&OpexInputs::default()).total(), 0.0);
        let o = opex_year(&OpexInputs {
            payload_penalty_lb: 2000.0,
            payload_loss_usd_per_lb_mile: 0.00002,
            vmt: 60_000.0,
            dwell_hours: 200.0,
            wage_usd_per_hour: 30.0,
            dwell_labor_ratio: 0.5,
            ..Default::default()
        });
        assert!((o.payload_loss - 2400.0).abs() < 1e-9);
        assert!((o.dwell - 3000.0).abs() < 1e-9);
    }

    #[test]
    fn residual_value_examples() {
        assert_eq!(residual_value(100_000.0, 0.85, 0.997, 0.0, 0.0), 100_000.0);
        // 100000 · 0.85^5 · 0.997^300 at 40 digits.
        let rv = residual_value(100_000.0, 0.85, 0.997, 5.0, 300.0);
        assert!((rv - 18_015.325_862_042_05).abs() < 1e-6);
    }

    #[test]
    fn counter_carries_excess() {
        let mut c = ReplacementCounter::new(100.0);
        assert_eq!(c.advance(60.0), 0);
        assert_eq!(c.advance(60.0), 1);
        assert!((c.usage - 20.0).abs() < 1e-12);
        assert_eq!(c.advance(250.0), 2);
        assert_eq!(ReplacementCounter::new(0.0).advance(1e9), 0);
    }
}
