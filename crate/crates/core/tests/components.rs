use freight_tco_core::cost::{ComponentCosts, CostBreakdown};
use freight_tco_core::dataset::UtilityTariff;
use freight_tco_core::infra::{replacement_years, straight_line_residual, utility_bill_year};
use freight_tco_core::vehicle::{residual_value, ReplacementCounter};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Walks usage in small increments and counts threshold crossings.
fn stepped_replacements(yearly: &[f64], threshold: f64) -> u32 {
    let steps = 1000;
    let mut since = 0.0;
    let mut count = 0;
    for &u in yearly {
        for _ in 0..steps {
            since += u / steps as f64;
            if since >= threshold * (1.0 - 1e-12) {
                count += 1;
                since -= threshold;
            }
        }
    }
    count
}

fn tariff(fixed: f64, demand: f64) -> UtilityTariff {
    UtilityTariff {
        fixed_usd_per_year: fixed,
        energy_usd_per_kwh: None,
        demand_usd_per_kw_month: demand,
        delivery_usd_per_year: 1200.0,
        transmission_usd_per_year: 800.0,
    }
}

proptest! {
    #[test]
    fn replacements_match_stepped_usage(
        yearly in prop::collection::vec(0.0..5e4f64, 1..12),
        threshold in 1e4..8e4f64,
    ) {
        let mut c = ReplacementCounter::new(threshold);
        let n: u32 = yearly.iter().map(|&u| c.advance(u)).sum();
        let total: f64 = yearly.iter().sum();
        let expect = stepped_replacements(&yearly, threshold);
        // the stepped walk can land a hair short of an exact multiple
        let exact = (total / threshold).fract() < 1e-6 || (total / threshold).fract() > 1.0 - 1e-6;
        if !exact {
            prop_assert_eq!(n, expect);
        }
        prop_assert_eq!(n, (total / threshold + 1e-9).floor() as u32);
    }

    #[test]
    fn residual_value_decays_with_age_and_miles(
        c in 1e3..5e5f64, a in 0.5..0.99f64, m in 0.9..0.999f64,
        age in 0.0..15.0f64, miles in 0.0..1500.0f64, step in 0.1..3.0f64,
    ) {
        let rv = residual_value(c, a, m, age, miles);
        prop_assert!(residual_value(c, a, m, age + step, miles) < rv);
        prop_assert!(residual_value(c, a, m, age, miles + step * 10.0) < rv);
    }

    #[test]
    fn equipment_replacements_by_yearly_step(life in 1u32..20, horizon in 1u32..40) {
        let mut installed_age = 0;
        let mut oracle = 0;
        for _ in 1..horizon {
            installed_age += 1;
            if installed_age == life {
                oracle += 1;
                installed_age = 0;
            }
        }
        prop_assert_eq!(replacement_years(life, horizon).len() as u32, oracle);
        prop_assert_eq!(oracle, (horizon - 1) / life);
    }

    #[test]
    fn book_value_within_bounds(cost in 0.0..1e6f64, life in 1u32..20, installed in 0u32..30, horizon in 0u32..40) {
        let rv = straight_line_residual(cost, life, installed, horizon);
        prop_assert!((0.0..=cost).contains(&rv));
        if horizon >= installed + life {
            prop_assert_eq!(rv, 0.0);
        }
    }

    #[test]
    fn utility_bill_is_affine(
        fixed in 0.0..1e4f64, demand in 0.0..30.0f64, price in 0.0..0.5f64,
        e in 0.0..1e6f64, de in 0.0..1e5f64, p in 0.0..2e3f64, dp in 0.0..500.0f64,
    ) {
        let t = tariff(fixed, demand);
        let base = utility_bill_year(&t, price, e, p);
        let by_energy = utility_bill_year(&t, price, e + de, p) - base;
        let by_peak = utility_bill_year(&t, price, e, p + dp) - base;
        prop_assert!((by_energy - price * de).abs() <= 1e-9 * base.max(1.0));
        prop_assert!((by_peak - 12.0 * demand * dp).abs() <= 1e-9 * base.max(1.0));
    }

    #[test]
    fn breakdown_total_is_discounted_yearly_sum(
        rows in prop::collection::vec((0.0..1e5f64, 0.0..1e4f64, 0.0..5e3f64, 1e3..1e5f64), 1..15),
        d in 0.0..0.2f64,
    ) {
        let yearly: Vec<ComponentCosts> = rows
            .iter()
            .map(|&(a, e, m, _)| ComponentCosts { acquisition: a, energy: e, maintenance: m, ..Default::default() })
            .collect();
        let quantity: Vec<f64> = rows.iter().map(|r| r.3).collect();
        let b = CostBreakdown::from_yearly(2023, yearly, quantity, d).unwrap();
        let oracle: f64 = b.yearly_totals().iter().enumerate().map(|(i, x)| x / (1.0 + d).powi(i as i32)).sum();
        prop_assert!(rel(b.total(), oracle) < 1e-9);
        let miles: f64 = b.quantity.iter().enumerate().map(|(i, x)| x / (1.0 + d).powi(i as i32)).sum();
        prop_assert!(rel(b.levelized_total(), oracle / miles) < 1e-9);
    }
}
