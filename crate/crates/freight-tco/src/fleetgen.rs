//! Seeded synthetic depot fleets.
//!
//! A fleet is drawn from weighted duty groups. Each group gives truncated
//! normal distributions for arrival hour, dwell and daily miles. Counts per
//! group use largest remainders, and drawn values are rounded to 0.01.

use freight_tco_core::fleet::{FleetProfile, FleetVehicle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub mean: f64,
    #[serde(default)]
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

impl Distribution {
    pub const fn fixed(v: f64) -> Self {
        Self { mean: v, sd: 0.0, min: v, max: v }
    }

    fn check(&self, name: &str) -> Result<(), String> {
        let finite = [self.mean, self.sd, self.min, self.max].iter().all(|x| x.is_finite());
        if !finite || self.sd < 0.0 || self.min > self.max || self.mean < self.min || self.mean > self.max {
            return Err(format!("{name}: need finite values, sd ≥ 0 and min ≤ mean ≤ max"));
        }
        Ok(())
    }

    /// Rejection sampling, falling back to clamping after 64 tries.
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        if self.sd == 0.0 {
            return self.mean;
        }
        let normal = Normal::new(self.mean, self.sd).expect("sd checked");
        for _ in 0..64 {
            let x = normal.sample(rng);
            if (self.min..=self.max).contains(&x) {
                return x;
            }
        }
        normal.sample(rng).clamp(self.min, self.max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DutyGroup {
    pub name: String,
    pub weight: f64,
    pub arrival_h: Distribution,
    pub dwell_h: Distribution,
    pub daily_miles: Distribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetGeneratorParams {
    pub fleet_size: u32,
    pub seed: u64,
    pub groups: Vec<DutyGroup>,
}

impl FleetGeneratorParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.groups.is_empty() {
            return Err("groups: at least one duty group is required".into());
        }
        for (i, g) in self.groups.iter().enumerate() {
            if !(g.weight.is_finite() && g.weight >= 0.0) {
                return Err(format!("groups[{i}].weight must be finite and non-negative"));
            }
            g.arrival_h.check(&format!("groups[{i}].arrival_h"))?;
            g.dwell_h.check(&format!("groups[{i}].dwell_h"))?;
            g.daily_miles.check(&format!("groups[{i}].daily_miles"))?;
            if g.arrival_h.min < 0.0 || g.arrival_h.max >= 24.0 {
                return Err(format!("groups[{i}].arrival_h must lie in [0, 24)"));
            }
            if g.dwell_h.min <= 0.0 {
                return Err(format!("groups[{i}].dwell_h must be positive"));
            }
            if g.daily_miles.min < 0.0 {
                return Err(format!("groups[{i}].daily_miles must be non-negative"));
            }
        }
        if self.groups.iter().map(|g| g.weight).sum::<f64>() <= 0.0 {
            return Err("groups: weights must not all be zero".into());
        }
        Ok(())
    }
}

/// Splits `n` across `weights` by largest remainder; ties go to the earlier group.
pub fn apportion(n: u32, weights: &[f64]) -> Vec<u32> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| n as f64 * w / total).collect();
    let mut counts: Vec<u32> = quotas.iter().map(|q| q.floor() as u32).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| (quotas[b] - quotas[b].floor()).total_cmp(&(quotas[a] - quotas[a].floor())).then(a.cmp(&b)));
    let short = n - counts.iter().sum::<u32>();
    for &i in order.iter().take(short as usize) {
        counts[i] += 1;
    }
    counts
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub fn generate(params: &FleetGeneratorParams) -> Result<FleetProfile, String> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let counts = apportion(params.fleet_size, &params.groups.iter().map(|g| g.weight).collect::<Vec<_>>());
    let mut vehicles = Vec::with_capacity(params.fleet_size as usize);
    for (g, &count) in params.groups.iter().zip(&counts) {
        for k in 0..count {
            let arrival_h = round2(g.arrival_h.sample(&mut rng)).min(23.99);
            let dwell_h = round2(g.dwell_h.sample(&mut rng)).max(0.01);
            let daily_miles = round2(g.daily_miles.sample(&mut rng));
            vehicles.push(FleetVehicle { id: format!("{}-{:02}", g.name, k + 1), arrival_h, dwell_h, daily_miles });
        }
    }
    Ok(FleetProfile { vehicles })
}

/// Thirty day cabs: three shifts of nine regional trucks returning 7.5 h
/// apart, plus three short-haul trucks that turn around at the same hour.
pub fn calibration_preset() -> FleetGeneratorParams {
    let shift = |name: &str, at: f64| DutyGroup {
        name: name.into(),
        weight: 9.0,
        arrival_h: Distribution { mean: at + 0.5, sd: 0.5, min: at, max: at + 1.0 },
        dwell_h: Distribution { mean: 9.5, sd: 0.2, min: 9.0, max: 10.0 },
        daily_miles: Distribution { mean: 370.0, sd: 15.0, min: 340.0, max: 400.0 },
    };
    FleetGeneratorParams {
        fleet_size: 30,
        seed: 20230101,
        groups: vec![
            shift("early", 0.0),
            shift("midday", 7.5),
            shift("late", 15.0),
            DutyGroup {
                name: "shuttle".into(),
                weight: 3.0,
                arrival_h: Distribution { mean: 22.5, sd: 0.01, min: 22.49, max: 22.51 },
                dwell_h: Distribution { mean: 0.34, sd: 0.01, min: 0.33, max: 0.35 },
                daily_miles: Distribution { mean: 5.0, sd: 0.2, min: 4.5, max: 5.5 },
            },
        ],
    }
}

pub fn calibration_fleet() -> FleetProfile {
    generate(&calibration_preset()).expect("preset is valid")
}
