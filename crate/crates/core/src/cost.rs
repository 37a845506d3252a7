//! The six-component cost vector shared by vehicles and infrastructure.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostComponent {
    Acquisition,
    Operation,
    Maintenance,
    Energy,
    Environmental,
    EndOfLife,
}

impl CostComponent {
    pub const ALL: [CostComponent; 6] = [
        CostComponent::Acquisition,
        CostComponent::Operation,
        CostComponent::Maintenance,
        CostComponent::Energy,
        CostComponent::Environmental,
        CostComponent::EndOfLife,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CostComponent::Acquisition => "acquisition",
            CostComponent::Operation => "operation",
            CostComponent::Maintenance => "maintenance",
            CostComponent::Energy => "energy",
            CostComponent::Environmental => "environmental",
            CostComponent::EndOfLife => "end_of_life",
        }
    }
}

/// One value per cost component.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ComponentCosts {
    pub acquisition: f64,
    pub operation: f64,
    pub maintenance: f64,
    pub energy: f64,
    pub environmental: f64,
    pub end_of_life: f64,
}

impl ComponentCosts {
    pub fn get(&self, c: CostComponent) -> f64 {
        match c {
            CostComponent::Acquisition => self.acquisition,
            CostComponent::Operation => self.operation,
            CostComponent::Maintenance => self.maintenance,
            CostComponent::Energy => self.energy,
            CostComponent::Environmental => self.environmental,
            CostComponent::EndOfLife => self.end_of_life,
        }
    }

    pub fn get_mut(&mut self, c: CostComponent) -> &mut f64 {
        match c {
            CostComponent::Acquisition => &mut self.acquisition,
            CostComponent::Operation => &mut self.operation,
            CostComponent::Maintenance => &mut self.maintenance,
            CostComponent::Energy => &mut self.energy,
            CostComponent::Environmental => &mut self.environmental,
            CostComponent::EndOfLife => &mut self.end_of_life,
        }
    }

    pub fn total(&self) -> f64 {
        CostComponent::ALL.iter().map(|c| self.get(*c)).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        self.map(|v| v * k)
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            acquisition: f(self.acquisition),
            operation: f(self.operation),
            maintenance: f(self.maintenance),
            energy: f(self.energy),
            environmental: f(self.environmental),
            end_of_life: f(self.end_of_life),
        }
    }
}

impl Add for ComponentCosts {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComponentCosts {
    fn add_assign(&mut self, rhs: Self) {
        for c in CostComponent::ALL {
            *self.get_mut(c) += rhs.get(c);
        }
    }
}

/// Yearly, discounted, and levelized costs.
///
/// `yearly[0]` holds amounts paid at acquisition (undiscounted); `yearly[i]`
/// for `i ≥ 1` is discounted by `(1 + d)^-i`. `quantity[i]` is the activity
/// (miles or dispensed units) used as the levelization denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub start_year: i32,
    pub discount_rate: f64,
    pub yearly: Vec<ComponentCosts>,
    pub quantity: Vec<f64>,
    pub discounted: ComponentCosts,
    pub discounted_quantity: f64,
    pub levelized: ComponentCosts,
}

impl CostBreakdown {
    pub fn from_yearly(
        start_year: i32,
        yearly: Vec<ComponentCosts>,
        quantity: Vec<f64>,
        discount_rate: f64,
    ) -> Result<Self> {
        if yearly.len() != quantity.len() {
            return Err(Error::invalid("yearly costs and quantities differ in length"));
        }
        let mut discounted = ComponentCosts::default();
        let mut discounted_quantity = 0.0;
        for (i, (costs, q)) in yearly.iter().zip(&quantity).enumerate() {
            let df = finance::discount_factor(discount_rate, i as u32);
            discounted += costs.scaled(df);
            discounted_quantity += q * df;
        }
        let levelized = if discounted_quantity > 0.0 {
            discounted.scaled(1.0 / discounted_quantity)
        } else {
            ComponentCosts::default()
        };
        Ok(Self {
            start_year,
            discount_rate,
            yearly,
            quantity,
            discounted,
            discounted_quantity,
            levelized,
        })
    }

    pub fn total(&self) -> f64 {
        self.discounted.total()
    }

    pub fn levelized_total(&self) -> f64 {
        self.levelized.total()
    }

    /// Undiscounted per-year totals, index 0 = acquisition time.
    pub fn yearly_totals(&self) -> Vec<f64> {
        self.yearly.iter().map(ComponentCosts::total).collect()
    }
}
