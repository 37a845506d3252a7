use freight_tco_core::schedule::{
    brute_force_min_stations, min_stations, ticks, verify, DepotVehicle, FleetInstance, Schedule,
};
use proptest::prelude::*;

fn instance(rows: &[(f64, f64, f64)]) -> FleetInstance {
    FleetInstance::new(
        rows.iter()
            .enumerate()
            .map(|(i, &(a, t, r))| DepotVehicle { id: format!("v{i}"), arrival_h: a, dwell_h: t, required_h: r })
            .collect(),
    )
}

/// Feasible vehicles on a coarse half-hour grid so that collisions and ties are common.
fn rows(max: usize) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0u32..40, 1u32..16, 1u32..=16), 0..=max).prop_map(|v| {
        v.into_iter()
            .map(|(a, t, r)| {
                let a = a as f64 * 0.5;
                let t = t as f64 * 0.5;
                let window = t.min(24.0 - a);
                (a, t, (r as f64 * 0.5).min(window))
            })
            .collect()
    })
}

/// Largest number of vehicles whose unavoidable service period
/// `[deadline − required, arrival + required)` covers a common instant.
fn compulsory_overlap(inst: &FleetInstance) -> u32 {
    let parts: Vec<(i64, i64)> = inst
        .vehicles
        .iter()
        .map(|v| {
            let r = ticks(v.arrival_h);
            let p = ticks(v.required_h);
            let d = ticks(v.arrival_h + v.dwell_h).min(ticks(inst.station_max_hours));
            (d - p, r + p)
        })
        .filter(|(s, e)| s < e)
        .collect();
    parts
        .iter()
        .map(|&(s, _)| parts.iter().filter(|&&(a, b)| a <= s && s < b).count() as u32)
        .max()
        .unwrap_or(0)
}

/// Re-checks a schedule from first principles, in ticks.
fn independent_check(inst: &FleetInstance, s: &Schedule) {
    assert_eq!(s.assignments.len(), inst.vehicles.len());
    for (i, a) in s.assignments.iter().enumerate() {
        let v = &inst.vehicles[i];
        let (start, end) = (ticks(a.start_h), ticks(a.end_h));
        assert!(start >= ticks(v.arrival_h));
        assert_eq!(end - start, ticks(v.required_h));
        assert!(end <= ticks(v.arrival_h + v.dwell_h));
        assert!(end <= ticks(inst.station_max_hours));
        for (k, b) in s.assignments.iter().enumerate().skip(i + 1) {
            if a.station == b.station && ticks(b.start_h) < end && start < ticks(b.end_h) {
                panic!("vehicles {i} and {k} overlap on station {}", a.station);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_brute_force(r in rows(6)) {
        let inst = instance(&r);
        let s = min_stations(&inst).unwrap();
        prop_assert_eq!(s.stations, brute_force_min_stations(&inst).unwrap());
        independent_check(&inst, &s);
        prop_assert!(verify(&inst, &s).is_ok());
    }

    #[test]
    fn bounds(r in rows(10)) {
        let inst = instance(&r);
        let s = min_stations(&inst).unwrap();
        prop_assert!(s.stations >= compulsory_overlap(&inst));
        prop_assert!(s.stations as usize <= inst.vehicles.len());
        independent_check(&inst, &s);
    }

    #[test]
    fn removing_a_vehicle_never_adds_stations(r in rows(7), pick in any::<prop::sample::Index>()) {
        prop_assume!(!r.is_empty());
        let full = min_stations(&instance(&r)).unwrap().stations;
        let mut fewer = r.clone();
        fewer.remove(pick.index(r.len()));
        prop_assert!(min_stations(&instance(&fewer)).unwrap().stations <= full);
    }

    #[test]
    fn shorter_service_never_adds_stations(r in rows(7), pick in any::<prop::sample::Index>()) {
        prop_assume!(!r.is_empty());
        let full = min_stations(&instance(&r)).unwrap().stations;
        let mut shorter = r.clone();
        let i = pick.index(r.len());
        shorter[i].2 *= 0.5;
        prop_assert!(min_stations(&instance(&shorter)).unwrap().stations <= full);
    }

    #[test]
    fn deterministic(r in rows(8)) {
        let inst = instance(&r);
        prop_assert_eq!(min_stations(&inst).unwrap(), min_stations(&inst).unwrap());
    }
}

#[test]
fn three_vehicle_example() {
    let inst = instance(&[(0.0, 8.0, 4.0), (0.0, 8.0, 4.0), (4.0, 4.0, 4.0)]);
    let s = min_stations(&inst).unwrap();
    assert_eq!(s.stations, 2);
    independent_check(&inst, &s);
}

#[test]
fn waiting_time_is_start_minus_arrival() {
    let inst = instance(&[(1.0, 6.0, 3.0), (1.0, 6.0, 3.0)]);
    let s = min_stations(&inst).unwrap();
    assert_eq!(s.stations, 1);
    let waits: Vec<f64> = s.assignments.iter().map(|a| a.waiting_h(&inst)).collect();
    assert_eq!(waits, vec![0.0, 3.0]);
}

#[test]
fn thirty_vehicle_instance_solves_quickly() {
    // Staggered evening arrivals with long services; exercises the search on
    // an instance the oracle cannot handle.
    let rows: Vec<_> = (0..30)
        .map(|i| {
            let a = 14.0 + (i % 10) as f64 * 0.25;
            (a, 24.0 - a, 3.0 + (i % 4) as f64 * 0.5)
        })
        .collect();
    let inst = instance(&rows);
    let start = std::time::Instant::now();
    let s = min_stations(&inst).unwrap();
    independent_check(&inst, &s);
    assert!(start.elapsed().as_secs() < 20);
}
