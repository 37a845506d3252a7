use freight_tco_core::system::breakeven_year;
use freight_tco_core::Error;
use proptest::prelude::*;

/// Walks the years and stops at the first tie or crossing.
fn scan(years: &[i32], alt: &[f64], diesel: &[f64]) -> Option<i32> {
    for i in 0..years.len() {
        if alt[i] <= diesel[i] {
            return Some(years[i]);
        }
    }
    None
}

fn pair() -> impl Strategy<Value = (i32, Vec<f64>, Vec<f64>)> {
    (2020i32..2030, 1usize..25).prop_flat_map(|(start, n)| {
        let v = || prop::collection::vec(prop_oneof![1.0..4.0f64, Just(2.0)], n);
        (Just(start), v(), v())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matches_linear_scan((start, alt, diesel) in pair()) {
        let years: Vec<i32> = (start..start + alt.len() as i32).collect();
        prop_assert_eq!(breakeven_year(&years, &alt, &diesel).unwrap(), scan(&years, &alt, &diesel));
    }
}

#[test]
fn identical_series_break_even_in_first_year() {
    let years = [2025, 2030, 2035, 2040];
    let v = [2.1, 2.0, 1.9, 1.8];
    assert_eq!(breakeven_year(&years, &v, &v).unwrap(), Some(2025));
}

#[test]
fn crossing_between_2030_and_2031() {
    let years: Vec<i32> = (2023..=2040).collect();
    let diesel = vec![2.0; years.len()];
    let alt: Vec<f64> = years.iter().map(|&y| 2.0 + 0.01 * (2030.5 - y as f64)).collect();
    assert_eq!(breakeven_year(&years, &alt, &diesel).unwrap(), Some(2031));
}

#[test]
fn mismatched_ranges_rejected() {
    assert!(matches!(breakeven_year(&[2030, 2031], &[1.0], &[1.0, 1.0]), Err(Error::InvalidInput(_))));
}
