use freight_tco_core::finance::{
    annuity_payment, discount_factor, discount_sum, learned_cost, levelize, CashFlowSeries, LearningParams,
};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn flows() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e6..1e6f64, 1..40)
}

/// 500,000 / (60,000 × Σ 1.07^-i, i = 1..5) as an exact fraction:
/// Σ (100/107)^i = Σ 100^i · 107^(5−i) / 107^5.
fn worked_example_exact() -> f64 {
    let (num_d, den_d) = (107u128, 100u128);
    let mut sum = 0u128;
    for i in 1..=5u32 {
        sum += den_d.pow(i) * num_d.pow(5 - i);
    }
    let numer = 500_000u128 * num_d.pow(5);
    let denom = 60_000u128 * sum;
    let whole = numer / denom;
    let rest = numer % denom;
    // Twenty decimal digits of the remainder are more than f64 can hold.
    let frac = rest * 10u128.pow(20) / denom;
    whole as f64 + frac as f64 / 1e20
}

#[test]
fn levelized_worked_example() {
    let got = levelize(500_000.0, &[60_000.0; 5], 0.07).unwrap();
    let exact = worked_example_exact();
    assert!((exact - 2.0324).abs() < 1e-4);
    assert!((got - exact).abs() < 1e-12, "{got} vs {exact}");
}

#[test]
fn first_flow_is_discounted_one_year() {
    let s = CashFlowSeries::new(2023, vec![107.0]).unwrap();
    assert!((discount_sum(&s, 0.07).unwrap() - 100.0).abs() < 1e-12);
    assert_eq!(discount_factor(0.07, 0), 1.0);
}

proptest! {
    #[test]
    fn zero_rate_is_plain_sum(f in flows()) {
        let s = CashFlowSeries::new(2023, f.clone()).unwrap();
        let plain: f64 = f.iter().sum();
        let scale: f64 = f.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        prop_assert!((discount_sum(&s, 0.0).unwrap() - plain).abs() / scale < 1e-12);
    }

    #[test]
    fn discounting_is_linear(
        pair in (1usize..30).prop_flat_map(|n| (prop::collection::vec(-1e6..1e6f64, n), prop::collection::vec(-1e6..1e6f64, n))),
        a in -10.0..10.0f64,
        b in -10.0..10.0f64,
        d in 0.0..0.5f64,
    ) {
        let (x, y) = pair;
        let pv = |v: &[f64]| discount_sum(&CashFlowSeries::new(2023, v.to_vec()).unwrap(), d).unwrap();
        let combo: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let lhs = pv(&combo);
        let rhs = a * pv(&x) + b * pv(&y);
        let scale = x.iter().chain(&y).map(|v| v.abs()).sum::<f64>() * (a.abs() + b.abs()) + 1.0;
        prop_assert!((lhs - rhs).abs() / scale < 1e-9);
    }

    #[test]
    fn annuity_closes_at_its_own_rate(p in 1.0..1e7f64, r in 0.0..0.3f64, n in 1u32..40) {
        let pay = annuity_payment(p, r, n);
        let s = CashFlowSeries::new(2023, vec![pay; n as usize]).unwrap();
        prop_assert!(rel(discount_sum(&s, r).unwrap(), p) < 1e-9);
    }

    #[test]
    fn levelized_scales_with_cost(c in 0.0..1e7f64, k in 0.1..10.0f64, vmt in 1.0..2e5f64, n in 1usize..20, d in 0.0..0.3f64) {
        let v = vec![vmt; n];
        let a = levelize(c, &v, d).unwrap();
        prop_assert!(rel(levelize(c * k, &v, d).unwrap(), a * k) < 1e-12);
    }

    #[test]
    fn learning_never_raises_cost(base in 0.0..1e5f64, r in 0.0..0.5f64, y in 2023i32..2060) {
        let lp = LearningParams { base_cost: base, annual_reduction_rate: r };
        let now = learned_cost(&lp, y, 2023).unwrap();
        let next = learned_cost(&lp, y + 1, 2023).unwrap();
        prop_assert!(next <= now && now <= base && next >= 0.0);
    }
}
