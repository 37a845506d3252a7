//! Discounting, levelization, loan amortization and learning-curve arithmetic.
//!
//! All amounts are real base-year dollars. Year index `i = 1` is the first
//! full year after acquisition; flows at acquisition time are handled by the
//! callers as undiscounted year-0 amounts.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;

/// Real-dollar cash flows for years `1..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CashFlowSeries {
    pub base_year: i32,
    pub flows: Vec<f64>,
}

impl CashFlowSeries {
    pub fn new(base_year: i32, flows: Vec<f64>) -> Result<Self> {
        let series = Self { base_year, flows };
        series.validate()?;
        Ok(series)
    }

    pub fn validate(&self) -> Result<()> {
        if self.flows.is_empty() {
            return Err(Error::invalid("cash flow series must cover at least one year"));
        }
        if let Some(i) = self.flows.iter().position(|f| !f.is_finite()) {
            return Err(Error::invalid(alloc::format!("cash flow for year {} is not finite", i + 1)));
        }
        Ok(())
    }
}

/// Financing and evaluation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinancialParams {
    pub discount_rate: f64,
    pub interest_rate: f64,
    pub loan_term_years: u32,
    pub down_payment_ratio: f64,
    pub analysis_period_years: u32,
}

impl FinancialParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.discount_rate) {
            return Err(Error::field("financial.discount_rate", "must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.interest_rate) {
            return Err(Error::field("financial.interest_rate", "must lie in [0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.down_payment_ratio) {
            return Err(Error::field("financial.down_payment_ratio", "must lie in [0, 1]"));
        }
        if self.loan_term_years == 0 {
            return Err(Error::field("financial.loan_term_years", "must be at least 1"));
        }
        if self.analysis_period_years == 0 {
            return Err(Error::field("financial.analysis_period_years", "must be at least 1"));
        }
        Ok(())
    }
}

/// Base cost and annual fractional reduction of a technology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearningParams {
    pub base_cost: f64,
    pub annual_reduction_rate: f64,
}

/// Discount factor `(1 + d)^-i`.
#[inline]
pub fn discount_factor(d: f64, year: u32) -> f64 {
    1.0 / math::powi(1.0 + d, year as i32)
}

/// Present value of `flows[i-1]` received at the end of year `i`.
pub fn discount_sum(series: &CashFlowSeries, d: f64) -> Result<f64> {
    series.validate()?;
    check_rate(d, "discount rate")?;
    Ok(discount_flows(&series.flows, d))
}

/// Unchecked core of [`discount_sum`] for internal callers whose inputs are
/// already validated.
pub(crate) fn discount_flows(flows: &[f64], d: f64) -> f64 {
    let mut factor = 1.0;
    let growth = 1.0 + d;
    flows
        .iter()
        .map(|c| {
            factor /= growth;
            c * factor
        })
        .sum()
}

/// Sum of `VMT_i / (1 + d)^i`.
pub fn discounted_quantity(quantities: &[f64], d: f64) -> f64 {
    discount_flows(quantities, d)
}

/// Per-unit levelized cost: `tco / Σ VMT_i/(1+d)^i`.
pub fn levelize(tco_component: f64, vmt: &[f64], d: f64) -> Result<f64> {
    check_rate(d, "discount rate")?;
    if vmt.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::invalid("VMT entries must be finite and non-negative"));
    }
    if !vmt.iter().any(|v| *v > 0.0) {
        return Err(Error::DegenerateDivision);
    }
    Ok(tco_component / discounted_quantity(vmt, d))
}

/// Down payment, level annual payment, and present value of the financed purchase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoanPayments {
    pub down_payment: f64,
    pub annual_payment: f64,
    pub discounted_capex: f64,
}

/// Level annuity payment on `principal` over `term` years at rate `r`.
pub fn annuity_payment(principal: f64, r: f64, term: u32) -> f64 {
    if term == 0 {
        return principal;
    }
    if r == 0.0 {
        return principal / term as f64;
    }
    let growth = math::powi(1.0 + r, term as i32);
    principal * r * growth / (growth - 1.0)
}

/// Outstanding balance after `paid` level payments.
pub fn remaining_balance(principal: f64, r: f64, term: u32, paid: u32) -> f64 {
    if paid >= term {
        return 0.0;
    }
    if r == 0.0 {
        return principal * (term - paid) as f64 / term as f64;
    }
    let payment = annuity_payment(principal, r, term);
    // Present value of the payments still owed.
    let remaining = (term - paid) as i32;
    payment * (1.0 - math::powi(1.0 + r, -remaining)) / r
}

/// Financed acquisition: down payment at time zero plus `loan_term` level
/// payments discounted at `d`.
pub fn loan_payments(price: f64, fp: &FinancialParams) -> Result<LoanPayments> {
    if !price.is_finite() || price < 0.0 {
        return Err(Error::invalid("price must be finite and non-negative"));
    }
    fp.validate()?;
    let down_payment = price * fp.down_payment_ratio;
    let principal = price - down_payment;
    let annual_payment = annuity_payment(principal, fp.interest_rate, fp.loan_term_years);
    let discounted_payments: f64 = (1..=fp.loan_term_years)
        .map(|i| annual_payment * discount_factor(fp.discount_rate, i))
        .sum();
    Ok(LoanPayments {
        down_payment,
        annual_payment,
        discounted_capex: down_payment + discounted_payments,
    })
}

/// `base_cost × (1 − r)^(year − base_year)`.
pub fn learned_cost(lp: &LearningParams, year: i32, base_year: i32) -> Result<f64> {
    if year < base_year {
        return Err(Error::invalid(alloc::format!(
            "year {year} precedes base year {base_year}"
        )));
    }
    if !(0.0..1.0).contains(&lp.annual_reduction_rate) {
        return Err(Error::invalid("learning rate must lie in [0, 1)"));
    }
    if !lp.base_cost.is_finite() || lp.base_cost < 0.0 {
        return Err(Error::invalid("base cost must be finite and non-negative"));
    }
    Ok(learning_factor(lp.annual_reduction_rate, year - base_year) * lp.base_cost)
}

/// `(1 − r)^n`, with `n` clamped at zero.
#[inline]
pub fn learning_factor(rate: f64, elapsed_years: i32) -> f64 {
    math::powi(1.0 - rate, elapsed_years.max(0))
}

fn check_rate(d: f64, what: &str) -> Result<()> {
    if (0.0..1.0).contains(&d) {
        Ok(())
    } else {
        Err(Error::invalid(alloc::format!("{what} must lie in [0, 1)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn reference_terms() -> FinancialParams {
        FinancialParams {
            discount_rate: 0.07,
            interest_rate: 0.04,
            loan_term_years: 5,
            down_payment_ratio: 0.2,
            analysis_period_years: 5,
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn zero_discount_is_plain_sum() {
        let s = CashFlowSeries::new(2023, vec![100.0, 100.0]).unwrap();
        assert_eq!(discount_sum(&s, 0.0).unwrap(), 200.0);
    }

    #[test]
    fn two_year_discount() {
        let s = CashFlowSeries::new(2023, vec![100.0, 100.0]).unwrap();
        // 100/1.07 + 100/1.07^2, evaluated at 40 digits.
        assert!(rel(discount_sum(&s, 0.07).unwrap(), 180.801_816_752_554_8) < 1e-12);
    }

    #[test]
    fn empty_series_rejected() {
        assert!(matches!(CashFlowSeries::new(2023, vec![]), Err(Error::InvalidInput(_))));
        let s = CashFlowSeries { base_year: 2023, flows: vec![1.0, f64::NAN] };
        assert!(discount_sum(&s, 0.05).is_err());
    }

    #[test]
    fn levelize_examples() {
        let v = [60_000.0; 5];
        assert!((levelize(500_000.0, &v, 0.07).unwrap() - 2.032_422_453_678_117).abs() < 1e-9);
        assert_eq!(levelize(0.0, &v, 0.07).unwrap(), 0.0);
        assert_eq!(levelize(100.0, &[100.0], 0.0).unwrap(), 1.0);
        assert_eq!(levelize(100.0, &[0.0, 0.0], 0.07), Err(Error::DegenerateDivision));
    }

    #[test]
    fn loan_examples() {
        let lp = loan_payments(100_000.0, &reference_terms()).unwrap();
        assert!((lp.down_payment - 20_000.0).abs() < 1e-9);
        // 80,000 × 0.04·1.04^5 / (1.04^5 − 1)
        assert!((lp.annual_payment - 17_970.169_079_442_71).abs() < 1e-6);

        let cash = FinancialParams { down_payment_ratio: 1.0, ..reference_terms() };
        let lp = loan_payments(100_000.0, &cash).unwrap();
        assert_eq!(lp.down_payment, 100_000.0);
        assert_eq!(lp.annual_payment, 0.0);
        assert_eq!(lp.discounted_capex, 100_000.0);

        let free = FinancialParams {
            interest_rate: 0.0,
            down_payment_ratio: 0.0,
            loan_term_years: 4,
            ..reference_terms()
        };
        assert_eq!(loan_payments(80_000.0, &free).unwrap().annual_payment, 20_000.0);
    }

    #[test]
    fn remaining_balance_matches_amortization() {
        let (p, r, n) = (80_000.0, 0.04, 5);
        let pay = annuity_payment(p, r, n);
        let mut bal = p;
        for k in 1..=n {
            bal = bal * (1.0 + r) - pay;
            assert!((remaining_balance(p, r, n, k) - bal).abs() < 1e-6);
        }
        assert_eq!(remaining_balance(p, 0.0, 4, 1), 60_000.0);
    }

    #[test]
    fn learned_cost_examples() {
        let battery = LearningParams { base_cost: 250.0, annual_reduction_rate: 0.08 };
        assert_eq!(learned_cost(&battery, 2023, 2023).unwrap(), 250.0);
        assert!((learned_cost(&battery, 2034, 2023).unwrap() - 99.909_344_471_435_39).abs() < 1e-9);
        assert!(learned_cost(&battery, 2022, 2023).is_err());
    }

    #[test]
    fn hydrogen_tank_calibrated_to_675_by_2040() {
        // The annual rate that takes 1000 $/kg to 675 $/kg over 17 years.
        let rate = 1.0 - libm::pow(0.675, 1.0 / 17.0);
        let tank = LearningParams { base_cost: 1000.0, annual_reduction_rate: rate };
        assert!((learned_cost(&tank, 2040, 2023).unwrap() - 675.0).abs() < 1e-9);
    }
}
