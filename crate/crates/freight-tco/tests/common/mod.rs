#![allow(dead_code)]

use freight_tco::{dataset, fleetgen};
use freight_tco_core::dataset::AdvancementLevel;
use freight_tco_core::fleet::FleetProfile;
use freight_tco_core::system::{self, StationSizing, SystemScenario, SystemTco};
use freight_tco_core::CostDataset;

pub fn ds() -> CostDataset {
    dataset::load_default().dataset
}

pub fn fleet() -> FleetProfile {
    fleetgen::calibration_fleet()
}

pub fn sizing(ds: &CostDataset, variant: &str) -> Vec<StationSizing> {
    system::size_stations(ds, variant, &fleet()).unwrap()
}

pub fn scenario(variant: &str, year: i32) -> SystemScenario {
    SystemScenario { variant: variant.into(), year, advancement: AdvancementLevel::Moderate }
}

pub fn system_2023(ds: &CostDataset, variant: &str) -> SystemTco {
    system::system_tco_sized(ds, &scenario(variant, 2023), 30, &sizing(ds, variant)).unwrap()
}

/// Every numeric leaf of `v` whose path mentions a dollar amount, minus the
/// year keys of price series.
pub fn scale_money(v: &mut serde_json::Value, k: f64, money: bool) {
    match v {
        serde_json::Value::Number(n) if money => {
            *v = serde_json::json!(n.as_f64().unwrap() * k);
        }
        serde_json::Value::Object(m) => {
            for (key, x) in m.iter_mut() {
                let year_key = matches!(key.as_str(), "start_year" | "first_year" | "last_year" | "base_year");
                scale_money(x, k, !year_key && (money || key.contains("usd")));
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(|x| scale_money(x, k, money)),
        _ => {}
    }
}
