// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeded piecewise-constant Gaussian signals.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// Changes at `⌊j·n / (n_changes + 1)⌋`.
    #[default]
    Equal,
    /// Distinct positions drawn uniformly from `1..n`.
    UniformRandom,
}

impl std::str::FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(Placement::Equal),
            "uniform-random" | "uniform" => Ok(Placement::UniformRandom),
            other => Err(Error::InvalidInput(format!("unknown placement '{other}'"))),
        }
    }
}

/// Parameters of a simulated signal. Means alternate `0, jump·σ, 0, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub n: usize,
    pub n_changes: usize,
    /// Mean shift per change, in units of `sigma`.
    pub jump_size: f64,
    pub sigma: f64,
    pub seed: u64,
    pub placement: Placement,
}

impl SimSpec {
    pub fn new(n: usize, n_changes: usize, seed: u64) -> Self {
        Self {
            n,
            n_changes,
            jump_size: 5.0,
            sigma: 1.0,
            seed,
            placement: Placement::Equal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        if self.n_changes >= self.n {
            return Err(Error::InvalidInput(format!(
                "n_changes = {} must be < n = {}",
                self.n_changes, self.n
            )));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !self.jump_size.is_finite() {
            return Err(Error::InvalidInput("jump size must be finite".into()));
        }
        Ok(())
    }
}

/// A simulated series and its true changepoints (last index of each segment).
#[derive(Debug, Clone, PartialEq)]
pub struct Simulated {
    pub values: Vec<f64>,
    pub changepoints: Vec<usize>,
}

pub fn simulate(spec: &SimSpec) -> Result<Simulated> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let changepoints: Vec<usize> = match spec.placement {
        Placement::Equal => (1..=spec.n_changes)
            .map(|j| j * spec.n / (spec.n_changes + 1))
            .collect(),
        Placement::UniformRandom => {
            let mut v: Vec<usize> = rand::seq::index::sample(&mut rng, spec.n - 1, spec.n_changes)
                .into_iter()
                .map(|i| i + 1)
                .collect();
            v.sort_unstable();
            v
        }
    };
    let noise = Normal::new(0.0, spec.sigma)
        .map_err(|e| Error::InvalidInput(format!("noise distribution: {e}")))?;
    let high = spec.jump_size * spec.sigma;
    let mut values = Vec::with_capacity(spec.n);
    let mut segment = 0;
    for i in 1..=spec.n {
        let mean = if segment % 2 == 1 { high } else { 0.0 };
        values.push(mean + noise.sample(&mut rng));
        if segment < changepoints.len() && changepoints[segment] == i {
            segment += 1;
        }
    }
    Ok(Simulated {
        values,
        changepoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_placement() {
        let sim = simulate(&SimSpec::new(100, 4, 1)).unwrap();
        assert_eq!(sim.changepoints, vec![20, 40, 60, 80]);
        assert_eq!(sim.values.len(), 100);
        // Second segment sits around the jump.
        let mean: f64 = sim.values[20..40].iter().sum::<f64>() / 20.0;
        assert!((mean - 5.0).abs() < 1.5, "{mean}");
    }

    #[test]
    fn no_changes_and_determinism() {
        let a = simulate(&SimSpec::new(50, 0, 9)).unwrap();
        assert!(a.changepoints.is_empty());
        let b = simulate(&SimSpec::new(50, 0, 9)).unwrap();
        assert_eq!(a, b);
        let c = simulate(&SimSpec::new(50, 0, 10)).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn uniform_placement_distinct_and_in_range() {
        let spec = SimSpec {
            placement: Placement::UniformRandom,
            ..SimSpec::new(30, 10, 3)
        };
        let sim = simulate(&spec).unwrap();
        assert_eq!(sim.changepoints.len(), 10);
        assert!(sim.changepoints.windows(2).all(|w| w[0] < w[1]));
        assert!(sim.changepoints.iter().all(|&c| (1..30).contains(&c)));
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(simulate(&SimSpec::new(5, 5, 0)).is_err());
        assert!(simulate(&SimSpec {
            sigma: 0.0,
            ..SimSpec::new(5, 1, 0)
        })
        .is_err());
    }
}
