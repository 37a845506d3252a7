//! One-factor-at-a-time behaviour of the sensitivity runner.

mod common;

use common::{ds, scenario, sizing};
use freight_tco_core::sensitivity::{self, apply_factor, applicable_factors, run_sensitivity, tornado_table, FactorCategory};
use freight_tco_core::system;
use freight_tco_core::CostDataset;
use serde_json::Value;

fn leaves(v: &Value, path: String, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, format!("{path}.{k}"), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| leaves(x, format!("{path}[{i}]"), out)),
        _ => out.push((path, v.clone())),
    }
}

fn changed_paths(a: &CostDataset, b: &CostDataset) -> Vec<String> {
    let (mut x, mut y) = (Vec::new(), Vec::new());
    leaves(&serde_json::to_value(a).unwrap(), String::new(), &mut x);
    leaves(&serde_json::to_value(b).unwrap(), String::new(), &mut y);
    assert_eq!(x.len(), y.len());
    x.into_iter().zip(y).filter(|(p, q)| p != q).map(|(p, _)| p.0).collect()
}

fn run(ds: &CostDataset, variant: &str, factors: &[&str], delta: f64) -> Vec<sensitivity::SensitivityResult> {
    run_sensitivity(ds, &scenario(variant, 2023), 30, &sizing(ds, variant), factors, delta).unwrap()
}

fn ids(ds: &CostDataset, variant: &str) -> Vec<&'static str> {
    applicable_factors(ds, variant).unwrap().iter().map(|f| f.id).collect()
}

#[test]
fn zero_delta_changes_nothing() {
    let ds = ds();
    for v in ["D-ICE", "BEV700", "FCEV200", "NZEV-NG"] {
        for r in run(&ds, v, &ids(&ds, v), 0.0) {
            assert_eq!(r.relative_change, 0.0, "{v} {}", r.factor);
            assert_eq!(r.perturbed, r.baseline);
        }
    }
}

#[test]
fn each_factor_touches_one_field() {
    let base = ds();
    for v in &base.variants {
        for f in ids(&base, &v.id) {
            let mut p = base.clone();
            apply_factor(&mut p, &v.id, f, 0.1).unwrap();
            let changed = changed_paths(&base, &p);
            // a price series is one field holding one value per year
            let field = |s: &String| s.split("[").next().unwrap().to_string();
            let fields: std::collections::BTreeSet<_> = changed
                .iter()
                .map(|s| if s.starts_with(".prices.") { field(s) } else { s.clone() })
                .collect();
            assert!(fields.len() <= 1, "{} {f}: {fields:?}", v.id);
        }
    }
}

#[test]
fn diesel_price_response_is_its_energy_share() {
    let ds = ds();
    let s = system::system_tco_sized(&ds, &scenario("D-ICE", 2023), 30, &sizing(&ds, "D-ICE")).unwrap();
    let share = s.vehicle.breakdown.levelized.energy / s.levelized_with_infra;
    for delta in [-0.1, -0.05, 0.05, 0.1] {
        let r = &run(&ds, "D-ICE", &["diesel_price"], delta)[0];
        assert!((r.relative_change - share * delta).abs() < 1e-9, "{delta}: {} vs {}", r.relative_change, share * delta);
    }
}

#[test]
fn linear_factors_have_no_curvature() {
    let ds = ds();
    let linear = [
        ("D-ICE", "diesel_price"),
        ("D-ICE", "driver_wage"),
        ("D-ICE", "vehicle_maintenance"),
        ("BEV700", "electricity_price"),
        ("BEV700", "infra_labor"),
        ("FCEV200", "hydrogen_price"),
        ("FCEV200", "glider_cost"),
        ("NG-ICE", "natural_gas_price"),
    ];
    for (v, f) in linear {
        for d in [0.05, 0.1] {
            let up = run(&ds, v, &[f], d)[0].relative_change;
            let down = run(&ds, v, &[f], -d)[0].relative_change;
            assert!((up + down).abs() < 1e-9, "{v} {f} at {d}: {up} {down}");
        }
    }
}

#[test]
fn raising_a_cost_never_lowers_tco() {
    let ds = ds();
    let pure = |c: FactorCategory, id: &str| {
        id != "vmt"
            && matches!(
                c,
                FactorCategory::EnergyPrice
                    | FactorCategory::VehiclePrice
                    | FactorCategory::VehicleOm
                    | FactorCategory::FuelEfficiency
                    | FactorCategory::InfraEquipmentPrice
                    | FactorCategory::InfraDevelopmentCost
                    | FactorCategory::InfraOm
            )
    };
    for v in &ds.variants {
        for r in run(&ds, &v.id, &ids(&ds, &v.id), 0.1) {
            if pure(r.category, &r.factor) {
                assert!(r.relative_change >= 0.0, "{} {}: {}", v.id, r.factor, r.relative_change);
            }
        }
    }
}

#[test]
fn more_miles_lower_levelized_cost_when_per_mile_costs_dominate() {
    let mut ds = ds();
    for c in ds.classes.iter_mut() {
        c.retention.per_kmile_retention = 1.0;
    }
    for v in ds.vehicles.iter_mut() {
        v.maintenance.growth_per_100k_miles = 0.0;
        v.battery_replacement = None;
    }
    for v in ["D-ICE", "BEV700", "FCEV200", "NZEV-D"] {
        for d in [0.05, 0.1, 0.3] {
            let r = &run(&ds, v, &["vmt"], d)[0];
            assert!(r.relative_change < 0.0, "{v} at {d}: {}", r.relative_change);
        }
    }
}

#[test]
fn tornado_is_sorted_by_magnitude() {
    let ds = ds();
    let t = tornado_table(&run(&ds, "BEV700", &ids(&ds, "BEV700"), 0.1));
    for w in t.windows(2) {
        let (a, b) = (w[0].relative_change.abs(), w[1].relative_change.abs());
        assert!(a > b || (a == b && w[0].factor < w[1].factor));
    }
}

#[test]
fn relative_change_is_exact_arithmetic() {
    let ds = ds();
    for r in run(&ds, "H2-ICE", &ids(&ds, "H2-ICE"), 0.1) {
        assert_eq!(r.relative_change, r.perturbed / r.baseline - 1.0);
    }
}

#[test]
fn calibration_bands() {
    let ds = ds();
    for (v, f, target) in [
        ("D-ICE", "diesel_price", 0.042),
        ("H2-ICE", "hydrogen_price", 0.049),
        ("FCEV200", "hydrogen_price", 0.047),
        ("FCEV200", "fuel_consumption", 0.057),
    ] {
        let c = run(&ds, v, &[f], 0.1)[0].relative_change;
        assert!((c - target).abs() <= 0.015, "{v} {f}: {c}");
    }
}
