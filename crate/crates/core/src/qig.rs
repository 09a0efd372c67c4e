//! Allocations on the probability simplex, unilateral best responses, and a
//! seeded coordinate search over superposition parameters.
//!
//! A change to one component rescales the others proportionally, so every
//! allocation produced here stays on the simplex.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::numkernel::RandomStream;

/// Allowed drift of an allocation's sum from 1.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Probability vector `λ₀…λ_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    values: Vec<f64>,
}

impl Allocation {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::dimension("empty allocation"));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
        {
            return Err(Error::contract(format!(
                "allocation entry {i} = {v} is negative"
            )));
        }
        let sum: f64 = values.iter().sum();
        if math::abs(sum - 1.0) > SIMPLEX_TOL {
            return Err(Error::contract(format!("allocation sums to {sum}, not 1")));
        }
        Ok(Self { values })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::dimension("empty allocation"));
        }
        Ok(Self {
            values: vec![1.0 / k as f64; k],
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sets component `j` to `g` and rescales the rest to keep the sum at 1.
    ///
    /// When the rest carries no mass and `g < 1` the remainder is spread
    /// uniformly instead; the returned flag reports that case.
    pub fn with_component(&self, j: usize, g: f64) -> Result<(Allocation, bool)> {
        if j >= self.len() {
            return Err(Error::InvalidIndex {
                index: j,
                len: self.len(),
            });
        }
        if !(0.0..=1.0).contains(&g) {
            return Err(Error::contract(format!(
                "component value {g} outside [0, 1]"
            )));
        }
        let k = self.len();
        if k == 1 {
            return Ok((self.clone(), false));
        }
        let rest: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, v)| v)
            .sum();
        let remainder = 1.0 - g;
        let redistributed = rest <= 0.0 && remainder > 0.0;
        let mut values: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if i == j {
                    g
                } else if redistributed {
                    remainder / (k - 1) as f64
                } else if rest > 0.0 {
                    v * remainder / rest
                } else {
                    0.0
                }
            })
            .collect();
        // Push the rounding residue into the largest entry.
        let residue = 1.0 - values.iter().sum::<f64>();
        if residue != 0.0 {
            let big = (0..k)
                .max_by(|&a, &b| values[a].total_cmp(&values[b]))
                .expect("k >= 2");
            values[big] = (values[big] + residue).max(0.0);
        }
        Ok((Allocation::new(values)?, redistributed))
    }
}

/// `λ_l`, the share held by agent `l`.
pub fn agent_value(alloc: &Allocation, l: usize) -> Result<f64> {
    alloc.values.get(l).copied().ok_or(Error::InvalidIndex {
        index: l,
        len: alloc.len(),
    })
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < 2 {
        return Err(Error::InvalidConfiguration(format!(
            "grid_points = {grid_points}, need at least 2"
        )));
    }
    Ok(())
}

#[inline]
fn grid_value(k: usize, grid_points: usize, lo: f64, hi: f64) -> f64 {
    if k + 1 == grid_points {
        hi
    } else {
        lo + (hi - lo) * k as f64 / (grid_points - 1) as f64
    }
}

fn snap(x: f64, grid_points: usize, lo: f64, hi: f64) -> f64 {
    let steps = (grid_points - 1) as f64;
    let k = libm::round((x - lo) / (hi - lo) * steps).clamp(0.0, steps) as usize;
    grid_value(k, grid_points, lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub allocation: Allocation,
    pub value: f64,
    /// The chosen allocation needed a uniform redistribution.
    pub redistributed: bool,
}

/// Agent `l`'s best grid deviation under proportional rescaling.
///
/// The current allocation is kept unless a grid point is strictly better.
pub fn best_response<F>(
    l: usize,
    alloc: &Allocation,
    objective: &mut F,
    grid_points: usize,
) -> Result<BestResponse>
where
    F: FnMut(&Allocation) -> f64 + ?Sized,
{
    agent_value(alloc, l)?;
    check_grid(grid_points)?;
    let mut best = BestResponse {
        allocation: alloc.clone(),
        value: objective(alloc),
        redistributed: false,
    };
    if alloc.len() == 1 {
        return Ok(best);
    }
    for k in 0..grid_points {
        let (candidate, redistributed) =
            alloc.with_component(l, grid_value(k, grid_points, 0.0, 1.0))?;
        let value = objective(&candidate);
        if value > best.value {
            best = BestResponse {
                allocation: candidate,
                value,
                redistributed,
            };
        }
    }
    Ok(best)
}

/// One agent's payoff as a function of the joint allocation.
pub type Objective<'a> = Box<dyn FnMut(&Allocation) -> f64 + 'a>;

/// True iff no agent can raise its own objective by more than `epsilon`
/// with a unilateral grid deviation.
pub fn nash_check(
    alloc: &Allocation,
    objectives: &mut [Objective<'_>],
    epsilon: f64,
    grid_points: usize,
) -> Result<bool> {
    if objectives.len() != alloc.len() {
        return Err(Error::shape(format!(
            "{} objectives for {} agents",
            objectives.len(),
            alloc.len()
        )));
    }
    for (l, objective) in objectives.iter_mut().enumerate() {
        let current = objective(alloc);
        let response = best_response(l, alloc, objective.as_mut(), grid_points)?;
        if response.value - current > epsilon {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub grid_points: usize,
    pub restarts: usize,
    pub max_rounds: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points: 11,
            restarts: 2,
            max_rounds: 10,
            tolerance: 1e-6,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        check_grid(self.grid_points)?;
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "tolerance = {} must be positive",
                self.tolerance
            )));
        }
        if self.restarts == 0 || self.max_rounds == 0 {
            return Err(Error::InvalidConfiguration(
                "restarts and max_rounds must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Starting point and free axes of a search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub base_weights: Allocation,
    pub base_energies: Vec<f64>,
    pub free_weights: Vec<usize>,
    pub free_energies: Vec<usize>,
    pub energy_bounds: (f64, f64),
}

/// Default energy range; only differences matter, so `E₀` stays fixed.
pub const DEFAULT_ENERGY_BOUNDS: (f64, f64) = (0.0, 10.0);

impl SearchSpace {
    /// Every weight free, every energy but the first free.
    pub fn full(base_weights: Allocation, base_energies: Vec<f64>) -> Self {
        let k = base_weights.len();
        let m = base_energies.len();
        Self {
            base_weights,
            base_energies,
            free_weights: (0..k).collect(),
            free_energies: (1..m).collect(),
            energy_bounds: DEFAULT_ENERGY_BOUNDS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.base_weights.len() != self.base_energies.len() {
            return Err(Error::shape(format!(
                "{} weights with {} energies",
                self.base_weights.len(),
                self.base_energies.len()
            )));
        }
        let k = self.base_weights.len();
        for &j in self.free_weights.iter().chain(&self.free_energies) {
            if j >= k {
                return Err(Error::InvalidIndex { index: j, len: k });
            }
        }
        let (lo, hi) = self.energy_bounds;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfiguration(format!(
                "energy bounds [{lo}, {hi}] are empty"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub weights: Allocation,
    pub energies: Vec<f64>,
    pub peak: f64,
    /// Every restart stopped improving before `max_rounds`.
    pub converged: bool,
    /// Best value seen after each evaluation.
    pub incumbent_history: Vec<f64>,
    pub evaluations: usize,
}

struct Point {
    weights: Allocation,
    energies: Vec<f64>,
    value: f64,
}

struct Climber<'a, F: ?Sized> {
    scenario: &'a mut F,
    best: Option<(Allocation, Vec<f64>, f64)>,
    history: Vec<f64>,
}

impl<F> Climber<'_, F>
where
    F: FnMut(&Allocation, &[f64]) -> Result<f64> + ?Sized,
{
    fn eval(&mut self, weights: &Allocation, energies: &[f64]) -> Result<f64> {
        let value = (self.scenario)(weights, energies)?;
        if !value.is_finite() {
            return Err(Error::contract(format!("scenario returned {value}")));
        }
        let better = match &self.best {
            None => true,
            Some((_, _, b)) => value > *b,
        };
        if better {
            self.best = Some((weights.clone(), energies.to_vec(), value));
        }
        let incumbent = self.best.as_ref().map(|b| b.2).expect("set above");
        self.history.push(incumbent);
        Ok(value)
    }
}

/// Seeded random-restart coordinate ascent of `scenario` over the free axes.
///
/// Free coordinates are kept on a grid of `grid_points` values: weights on
/// `[0, 1]` with proportional rescaling, energies on `energy_bounds`.
/// Restart 0 starts from the base point snapped to the grid; later restarts
/// start from random grid points. Each round sweeps every free weight and
/// then every free energy; a restart ends when a round gains at most
/// `tolerance`.
pub fn optimize_superposition<F>(
    scenario: &mut F,
    space: &SearchSpace,
    config: &SearchConfig,
) -> Result<SearchOutcome>
where
    F: FnMut(&Allocation, &[f64]) -> Result<f64> + ?Sized,
{
    config.validate()?;
    space.validate()?;
    let g = config.grid_points;
    let (lo, hi) = space.energy_bounds;
    let mut climber = Climber {
        scenario,
        best: None,
        history: Vec::new(),
    };
    let mut converged = true;

    for restart in 0..config.restarts {
        let mut stream = RandomStream::new(config.seed, restart as u64);
        let mut weights = space.base_weights.clone();
        let mut energies = space.base_energies.clone();
        for &j in &space.free_weights {
            let target = if restart == 0 {
                snap(weights.values[j], g, 0.0, 1.0)
            } else {
                grid_value(stream.index(g), g, 0.0, 1.0)
            };
            weights = weights.with_component(j, target)?.0;
        }
        for &j in &space.free_energies {
            energies[j] = if restart == 0 {
                snap(energies[j].clamp(lo, hi), g, lo, hi)
            } else {
                grid_value(stream.index(g), g, lo, hi)
            };
        }
        let value = climber.eval(&weights, &energies)?;
        let mut current = Point {
            weights,
            energies,
            value,
        };

        let mut settled = false;
        for _ in 0..config.max_rounds {
            let start = current.value;
            for &j in &space.free_weights {
                for k in 0..g {
                    let (w, _) = current
                        .weights
                        .with_component(j, grid_value(k, g, 0.0, 1.0))?;
                    let v = climber.eval(&w, &current.energies)?;
                    if v > current.value {
                        current.weights = w;
                        current.value = v;
                    }
                }
            }
            for &j in &space.free_energies {
                for k in 0..g {
                    let mut e = current.energies.clone();
                    e[j] = grid_value(k, g, lo, hi);
                    let v = climber.eval(&current.weights, &e)?;
                    if v > current.value {
                        current.energies = e;
                        current.value = v;
                    }
                }
            }
            if current.value - start <= config.tolerance {
                settled = true;
                break;
            }
        }
        converged &= settled;
    }

    let (weights, energies, peak) = climber.best.expect("at least one evaluation");
    Ok(SearchOutcome {
        weights,
        energies,
        peak,
        converged,
        evaluations: climber.history.len(),
        incumbent_history: climber.history,
    })
}
