//! Prints the calibrated quantities of a dataset on the calibration fleet.
//!
//! Usage: `calibration [dataset.toml] [fleet.json]`

use freight_tco::{dataset, fleetgen};
use freight_tco_core::dataset::{AdvancementLevel, InfraItemKind, InfraType, Powertrain, VehicleClass};
use freight_tco_core::system::{self, SystemScenario};
use freight_tco_core::vehicle::{vehicle_price, VehicleProfile};
use freight_tco_core::{infra, sensitivity};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ds = match args.first() {
        Some(p) => dataset::load_dataset(p).unwrap_or_else(|e| panic!("{e}")).dataset,
        None => dataset::load_default().dataset,
    };
    let fleet = match args.get(1) {
        Some(p) => {
            let params = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
            fleetgen::generate(&params).unwrap()
        }
        None => fleetgen::calibration_fleet(),
    };

    println!("== prices (k$) 2023 / 2040");
    for class in VehicleClass::ALL {
        let mut row = format!("{:10}", class.as_str());
        for pt in Powertrain::ALL {
            let p = VehicleProfile::for_vehicle(&ds, class, pt).unwrap();
            let a = vehicle_price(&ds, &p, 2023).unwrap();
            let b = vehicle_price(&ds, &p, 2040).unwrap();
            row += &format!(" {}={:.0}/{:.0}({:.0})", pt.as_str(), a.gross / 1e3, b.net / 1e3, a.net / 1e3);
        }
        println!("{row}");
    }

    println!("== capex shares");
    for kind in InfraType::ALL {
        let e = ds.infra(kind).unwrap();
        let c = infra::infra_capex(e, e.reference.stations, e.reference.daily_throughput, 2023, ds.base_year);
        let s = |k| c.share_of(k) * 100.0;
        println!(
            "{:6} total={:.0} disp={:.1} comp={:.1} stor={:.1} elec={:.1} dev={:.1}",
            kind.as_str(),
            c.total,
            s(InfraItemKind::Dispenser),
            s(InfraItemKind::Compressor),
            s(InfraItemKind::Storage),
            s(InfraItemKind::Electrical),
            c.development_share() * 100.0
        );
    }

    println!("== stations and 2023 system");
    let mut sizings = Vec::new();
    for v in &ds.variants {
        let t0 = std::time::Instant::now();
        let sizing = match system::size_stations(&ds, &v.id, &fleet) {
            Ok(s) => s,
            Err(e) => {
                println!("{:8} {e}", v.id);
                continue;
            }
        };
        let sc = SystemScenario { variant: v.id.clone(), year: 2023, advancement: AdvancementLevel::Moderate };
        let s = system::system_tco_sized(&ds, &sc, fleet.len() as u32, &sizing).unwrap();
        let st: Vec<String> = sizing
            .iter()
            .map(|z| format!("{}:{}@{:.1}%", z.kind.as_str(), z.stations, z.utilization * 100.0))
            .collect();
        println!(
            "{:8} {:40} adder={:.3} veh={:.3} sys={:.3} ({:.1?})",
            v.id,
            st.join(" "),
            s.adder_usd_per_mile,
            s.levelized_without_infra,
            s.levelized_with_infra,
            t0.elapsed()
        );
        sizings.push((v.id.clone(), sizing));
    }

    println!("== sensitivity (+10%)");
    for (variant, factor) in [("D-ICE", "diesel_price"), ("H2-ICE", "hydrogen_price"), ("FCEV200", "hydrogen_price"), ("FCEV200", "fuel_consumption")] {
        let sizing = &sizings.iter().find(|(id, _)| id == variant).unwrap().1;
        let sc = SystemScenario { variant: variant.into(), year: 2023, advancement: AdvancementLevel::Moderate };
        let r = sensitivity::run_sensitivity(&ds, &sc, fleet.len() as u32, sizing, &[factor], 0.1).unwrap();
        println!("{variant:8} {factor:18} {:+.2}%", r[0].relative_change * 100.0);
    }

    println!("== projections");
    let years: Vec<i32> = (2023..=2040).collect();
    let series: Vec<_> = sizings
        .iter()
        .map(|(id, sz)| system::project_variant(&ds, id, &years, fleet.len() as u32, sz).unwrap())
        .collect();
    let base = series.iter().find(|s| s.variant == "D-ICE").unwrap();
    for s in &series {
        let b = system::breakeven(s, base).unwrap();
        let w: Vec<String> = [0usize, 2, 7, 12, 17].iter().map(|&i| format!("{:.3}/{:.3}", s.points[i].moderate.without_infra, s.points[i].moderate.with_infra)).collect();
        println!("{:8} parity veh={:?} sys={:?}  {}", s.variant, b.without_infra, b.with_infra, w.join(" "));
    }
    let spread = |i: usize| {
        let v: Vec<f64> = series.iter().map(|s| s.points[i].moderate.with_infra).collect();
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    println!("spread 2025={:.3} 2040={:.3}", spread(2), spread(17));

    println!("== class bands");
    for class in [VehicleClass::BoxTruck, VehicleClass::Sleeper] {
        let p = VehicleProfile::for_vehicle(&ds, class, Powertrain::DieselIce).unwrap();
        let t = freight_tco_core::vehicle::vehicle_tco(&ds, &p, 2023).unwrap();
        println!("{} diesel tco={:.0} lev={:.3}", class.as_str(), t.breakdown.total(), t.breakdown.levelized_total());
    }
}
