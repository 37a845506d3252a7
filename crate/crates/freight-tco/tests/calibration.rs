//! Default dataset against published calibration targets.

mod common;

use common::{ds, sizing, system_2023};
use freight_tco_core::dataset::{InfraItemKind, InfraType, Powertrain, VehicleClass};
use freight_tco_core::system;
use freight_tco_core::vehicle::{vehicle_price, vehicle_tco, VehicleProfile};
use freight_tco_core::{infra, CostDataset};

fn price(ds: &CostDataset, class: VehicleClass, pt: Powertrain, year: i32) -> f64 {
    vehicle_price(ds, &VehicleProfile::for_vehicle(ds, class, pt).unwrap(), year).unwrap().net
}

#[test]
fn diesel_prices_2023() {
    let ds = ds();
    for (class, target) in [(VehicleClass::BoxTruck, 100e3), (VehicleClass::DayCab, 140e3), (VehicleClass::Sleeper, 175e3)] {
        let p = price(&ds, class, Powertrain::DieselIce, 2023);
        assert!((p / target - 1.0).abs() <= 0.10, "{class}: {p}");
    }
}

#[test]
fn fcev_is_the_priciest_zero_emission_truck() {
    let ds = ds();
    for class in VehicleClass::ALL {
        let fcev = price(&ds, class, Powertrain::Fcev, 2023);
        for pt in Powertrain::ALL.into_iter().filter(|p| p.is_zev_or_nzev() && *p != Powertrain::Fcev) {
            assert!(price(&ds, class, pt, 2023) < fcev, "{class} {pt}");
        }
    }
}

#[test]
fn zero_emission_prices_reach_diesel_by_2040() {
    let ds = ds();
    for class in VehicleClass::ALL {
        let diesel = price(&ds, class, Powertrain::DieselIce, 2040);
        for pt in Powertrain::ALL.into_iter().filter(|p| p.is_zev_or_nzev()) {
            assert!(price(&ds, class, pt, 2040) <= diesel, "{class} {pt}");
        }
    }
}

#[test]
fn box_bev_matches_diesel_price_by_2035() {
    let ds = ds();
    let bev = price(&ds, VehicleClass::BoxTruck, Powertrain::Bev, 2035);
    assert!(bev <= price(&ds, VehicleClass::BoxTruck, Powertrain::DieselIce, 2035));
}

#[test]
fn diesel_class_bands() {
    let ds = ds();
    let tco = |class| vehicle_tco(&ds, &VehicleProfile::for_vehicle(&ds, class, Powertrain::DieselIce).unwrap(), 2023).unwrap();
    let sleeper = tco(VehicleClass::Sleeper).breakdown.total();
    assert!((1.15e6..=2.0e6).contains(&sleeper), "{sleeper}");
    let box_truck = tco(VehicleClass::BoxTruck).breakdown.levelized_total();
    assert!((2.8..=5.0).contains(&box_truck), "{box_truck}");
}

#[test]
fn capex_shares() {
    let ds = ds();
    let capex = |kind| {
        let e = ds.infra(kind).unwrap();
        infra::infra_capex(e, e.reference.stations, e.reference.daily_throughput, 2023, ds.base_year)
    };
    use InfraItemKind::*;
    for (kind, item, share, dev) in [
        (InfraType::Dcfc, Electrical, 0.60, 0.21),
        (InfraType::Dcfc, Dispenser, 0.15, 0.21),
        (InfraType::Mcs, Dispenser, 0.43, 0.21),
        (InfraType::Hydrogen, Compressor, 0.67, 0.18),
        (InfraType::NaturalGas, Compressor, 0.36, 0.18),
        (InfraType::Diesel, Storage, 0.59, 0.18),
    ] {
        let c = capex(kind);
        assert!((c.share_of(item) - share).abs() <= 0.05, "{kind} {item:?}: {}", c.share_of(item));
        assert!((c.development_share() - dev).abs() <= 0.03, "{kind}: {}", c.development_share());
        let sum: f64 = c.items.iter().map(|i| i.share).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}

#[test]
fn depot_station_counts_and_utilization() {
    let ds = ds();
    let cases: &[(&str, &[(u32, f64)])] = &[
        ("D-ICE", &[(1, 0.15)]),
        ("H2-ICE", &[(1, 0.18)]),
        ("NG-ICE", &[(1, 0.24)]),
        ("BEV700", &[(9, 0.78)]),
        ("BEV1000", &[(11, 0.82)]),
        ("FCEV200", &[(1, 0.20)]),
        ("FCEV300", &[(1, 0.20)]),
        ("FCEV400", &[(1, 0.20)]),
        ("NZEV-H2", &[(1, 0.09), (3, 0.12)]),
        ("NZEV-NG", &[(1, 0.12), (3, 0.12)]),
        ("NZEV-D", &[(1, 0.07), (3, 0.12)]),
    ];
    for (variant, expect) in cases {
        let got = sizing(&ds, variant);
        assert_eq!(got.len(), expect.len(), "{variant}");
        for (s, (n, u)) in got.iter().zip(expect.iter()) {
            assert_eq!(s.stations, *n, "{variant} {}", s.kind);
            assert!((s.utilization - u).abs() <= 0.05, "{variant} {}: {}", s.kind, s.utilization);
        }
    }
}

#[test]
fn infrastructure_adders_2023() {
    let ds = ds();
    for (variant, lo, hi) in [
        ("BEV700", 0.20, 0.30),
        ("D-ICE", 0.0, 0.10),
        ("FCEV200", 0.25, 0.40),
        ("H2-ICE", 0.31, 0.41),
        ("NG-ICE", 0.09, 0.19),
        ("NZEV-D", 0.03, 0.13),
        ("NZEV-H2", 0.30, 0.40),
        ("NZEV-NG", 0.15, 0.25),
    ] {
        let a = system_2023(&ds, variant).adder_usd_per_mile;
        assert!((lo..=hi).contains(&a), "{variant}: {a}");
    }
}

fn parity(ds: &CostDataset, variant: &str) -> system::Breakeven {
    let years: Vec<i32> = (2023..=2040).collect();
    let alt = system::project_variant(ds, variant, &years, 30, &sizing(ds, variant)).unwrap();
    let base = system::project_variant(ds, "D-ICE", &years, 30, &sizing(ds, "D-ICE")).unwrap();
    system::breakeven(&alt, &base).unwrap()
}

#[test]
fn natural_gas_reaches_parity_around_2030() {
    let y = parity(&ds(), "NG-ICE").with_infra.expect("NG-ICE never reaches parity");
    assert!((2028..=2032).contains(&y), "{y}");
}

#[test]
fn bev_day_cab_vehicle_parity_around_2030() {
    let y = parity(&ds(), "BEV700").without_infra.expect("BEV700 never reaches parity");
    assert!((2028..=2032).contains(&y), "{y}");
}

#[test]
fn powertrain_spread_narrows() {
    let ds = ds();
    let years = [2025, 2040];
    let spread = |i: usize| {
        let v: Vec<f64> = ds
            .variants
            .iter()
            .map(|v| system::project_variant(&ds, &v.id, &years, 30, &sizing(&ds, &v.id)).unwrap().points[i].moderate.with_infra)
            .collect();
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    assert!(spread(1) < spread(0));
}

#[test]
fn fcev_hydrogen_price_ranks_in_top_two() {
    let ds = ds();
    let sz = sizing(&ds, "FCEV200");
    let factors: Vec<&str> = freight_tco_core::sensitivity::applicable_factors(&ds, "FCEV200").unwrap().iter().map(|f| f.id).collect();
    let r = freight_tco_core::sensitivity::run_sensitivity(&ds, &common::scenario("FCEV200", 2023), 30, &sz, &factors, 0.1).unwrap();
    let t = freight_tco_core::sensitivity::tornado_table(&r);
    assert!(t[..2].iter().any(|r| r.factor == "hydrogen_price"));
}
