//! The ten-node kill web: C2, sensor, platform and weapon capabilities.
//!
//! The blue force is a superposition over four category vectors. Each step
//! the state passes through a Haar unitary on `C^10 ⊗ C^d` drawn once from
//! the run seed, and the reduced state on the ten capability nodes drives the
//! masked update.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::{
    evolve, EvolutionConfig, FeasibilityMask, MaskedHamiltonian, RandomBipartiteSource, Snapshot,
    StateProvider, StateSample, StateSource, TraceRecord,
};
use crate::math;
use crate::numkernel::{
    gaussian_state, haar_unitary, is_irreducible, ComplexMatrix, ComplexVector, RandomStream,
};
use crate::qig::Allocation;
use crate::quantum_state::phase;

/// Number of capability nodes.
pub const KILLWEB_NODES: usize = 10;

/// Default per-category phase rates. Incommensurate gaps keep the phases from
/// realigning within a run.
pub const DEFAULT_ENERGIES: [f64; 4] =
    [0.0, 1.0, core::f64::consts::SQRT_2, 1.732_050_807_568_877_2];

/// Stream ids split off the run seed.
const STREAM_STATES: u64 = 0;
const STREAM_UNITARY: u64 = 1;
const STREAM_ANCILLA: u64 = 2;

const MASK_ROWS: [[u8; 10]; 10] = [
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 1, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 1, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 1, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 1, 0, 1, 0, 0],
    [0, 0, 0, 1, 1, 1, 0, 0, 1, 0],
    [0, 0, 0, 1, 1, 1, 0, 0, 0, 1],
];

const REFERENCE_ROWS: [[f64; 10]; 10] = [
    [0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.06, 0.08, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.03, 0.0, 0.02, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.19, 0.10, 0.45, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.06, 0.03, 0.0, 0.08, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.05, 0.02, 0.0, 0.0, 0.03, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.13, 0.05, 0.04, 0.04, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.19, 0.07, 0.05, 0.0, 0.08, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.17, 0.06, 0.04, 0.0, 0.0, 0.07, 0.0],
    [0.0, 0.0, 0.0, 0.19, 0.06, 0.04, 0.0, 0.0, 0.0, 0.08],
];

/// Which capability may feed which.
pub fn killweb_mask() -> FeasibilityMask {
    FeasibilityMask::from_rows(&MASK_ROWS).expect("static mask is valid")
}

/// A published final Hamiltonian of the scenario, to two decimals.
pub fn reference_final_h() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&REFERENCE_ROWS).expect("static matrix is 10x10")
}

/// Disjoint index ranges partitioning `0..n`, one per category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryLayout {
    ranges: Vec<Range<usize>>,
}

impl CategoryLayout {
    /// Ranges must be nonempty, contiguous and start at 0.
    pub fn new(ranges: Vec<Range<usize>>) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::dimension("layout with no categories"));
        }
        let mut next = 0;
        for r in &ranges {
            if r.start != next || r.end <= r.start {
                return Err(Error::InvalidConfiguration(format!(
                    "category range {}..{} does not continue from {next}",
                    r.start, r.end
                )));
            }
            next = r.end;
        }
        Ok(Self { ranges })
    }

    /// C2 `{0}`, sensors `{1,2}`, platforms `{3,4,5}`, weapons `{6..9}`.
    pub fn killweb() -> Self {
        Self::new(alloc::vec![0..1, 1..3, 3..6, 6..10]).expect("static layout")
    }

    /// `k` near-equal ranges over `0..n`; earlier ranges take the remainder.
    pub fn even(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidConfiguration(format!(
                "cannot split {n} nodes into {k} nonempty categories"
            )));
        }
        let (base, extra) = (n / k, n % k);
        let mut start = 0;
        let ranges = (0..k)
            .map(|i| {
                let len = base + usize::from(i < extra);
                let r = start..start + len;
                start += len;
                r
            })
            .collect();
        Self::new(ranges)
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn categories(&self) -> usize {
        self.ranges.len()
    }

    pub fn dim(&self) -> usize {
        self.ranges.last().map_or(0, |r| r.end)
    }
}

/// Uniform superposition over each category's range.
pub fn category_basis(layout: &CategoryLayout) -> Vec<ComplexVector> {
    let n = layout.dim();
    layout
        .ranges()
        .iter()
        .map(|r| {
            let amp = 1.0 / math::sqrt(r.len() as f64);
            let v: Vec<f64> = (0..n)
                .map(|i| if r.contains(&i) { amp } else { 0.0 })
                .collect();
            ComplexVector::from_real(&v).expect("n >= 1")
        })
        .collect()
}

fn superpose(
    basis: &[ComplexVector],
    weights: &Allocation,
    energies: &[f64],
    t: f64,
) -> ComplexVector {
    let n = basis[0].dim();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
    for ((v, &w), &e) in basis.iter().zip(weights.values()).zip(energies) {
        let a = phase(e * t) * math::sqrt(w);
        for (o, &x) in out.iter_mut().zip(v.as_slice()) {
            *o += a * x;
        }
    }
    ComplexVector::new(out).expect("n >= 1")
}

fn check_lengths(k: usize, weights: &Allocation, energies: &[f64]) -> Result<()> {
    if weights.len() != k || energies.len() != k {
        return Err(Error::shape(format!(
            "{} weights and {} energies for {k} categories",
            weights.len(),
            energies.len()
        )));
    }
    Ok(())
}

/// `Σ_c √λ_c e^{-iE_c t} |c⟩` over the kill-web categories.
pub fn blue_state(weights: &Allocation, energies: &[f64], t: f64) -> Result<ComplexVector> {
    let basis = category_basis(&CategoryLayout::killweb());
    check_lengths(basis.len(), weights, energies)?;
    Ok(superpose(&basis, weights, energies, t))
}

/// Category superposition entangled with a `d`-level ancilla through a fixed
/// Haar unitary. Step `t` evaluates the superposition at time `t`.
#[derive(Debug, Clone)]
pub struct BlueSuperpositionSource {
    basis: Vec<ComplexVector>,
    weights: Allocation,
    energies: Vec<f64>,
    ancilla: ComplexVector,
    unitary: ComplexMatrix,
    d: usize,
}

impl BlueSuperpositionSource {
    pub fn new(
        layout: &CategoryLayout,
        weights: Allocation,
        energies: Vec<f64>,
        d: usize,
        seed: u64,
    ) -> Result<Self> {
        check_lengths(layout.categories(), &weights, &energies)?;
        if d == 0 {
            return Err(Error::dimension("ancilla dimension 0"));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidConfiguration(format!(
                "energy {e} is not finite"
            )));
        }
        let n = layout.dim();
        let unitary = haar_unitary(n * d, &mut RandomStream::new(seed, STREAM_UNITARY))?;
        let ancilla = if d == 1 {
            ComplexVector::basis(1, 0)?
        } else {
            gaussian_state(d, &mut RandomStream::new(seed, STREAM_ANCILLA))?
        };
        Ok(Self {
            basis: category_basis(layout),
            weights,
            energies,
            ancilla,
            unitary,
            d,
        })
    }
}

impl StateProvider for BlueSuperpositionSource {
    fn sample(&mut self, t: usize) -> Result<StateSample> {
        let psi_b = superpose(&self.basis, &self.weights, &self.energies, t as f64);
        let n = psi_b.dim();
        let joint = self.unitary.matvec(&psi_b.kron(&self.ancilla))?;
        StateSample::from_bipartite(&joint, n, self.d)
    }
}

/// Builds the provider named by `config.state_source`.
pub fn state_provider(
    config: &EvolutionConfig,
    layout: &CategoryLayout,
    weights: &Allocation,
    energies: &[f64],
) -> Result<alloc::boxed::Box<dyn StateProvider>> {
    if layout.dim() != config.n {
        return Err(Error::InvalidConfiguration(format!(
            "layout covers {} nodes, n = {}",
            layout.dim(),
            config.n
        )));
    }
    Ok(match config.state_source {
        StateSource::BlueSuperposition => alloc::boxed::Box::new(BlueSuperpositionSource::new(
            layout,
            weights.clone(),
            energies.to_vec(),
            config.d,
            config.seed,
        )?),
        StateSource::RandomBipartite => alloc::boxed::Box::new(RandomBipartiteSource::new(
            config.n,
            config.d,
            RandomStream::new(config.seed, STREAM_STATES),
        )?),
    })
}

/// Outcome of one scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub records: Vec<TraceRecord>,
    pub snapshots: Vec<Snapshot>,
    pub best: Snapshot,
    pub final_h: Snapshot,
    pub peak_two_norm: f64,
    pub final_two_norm: f64,
    /// Whether the mask is irreducible, the setting in which a unique
    /// positive leading eigenvector is guaranteed. The kill-web mask is not.
    pub mask_irreducible: bool,
}

impl ScenarioResult {
    pub fn peak_step(&self) -> usize {
        self.best.t
    }

    pub fn best_h(&self) -> &MaskedHamiltonian {
        &self.best.hamiltonian
    }
}

/// Runs the scenario on [`killweb_mask`] with the given category weights and
/// phase rates.
pub fn run_killweb(
    config: &EvolutionConfig,
    weights: &Allocation,
    energies: &[f64],
) -> Result<ScenarioResult> {
    if config.n != KILLWEB_NODES {
        return Err(Error::InvalidConfiguration(format!(
            "kill web has {KILLWEB_NODES} nodes, config has n = {}",
            config.n
        )));
    }
    let mask = killweb_mask();
    let mut provider = state_provider(config, &CategoryLayout::killweb(), weights, energies)?;
    let ev = evolve(config, &mask, provider.as_mut())?;
    let mask_irreducible = is_irreducible(&mask.to_matrix())?;
    Ok(ScenarioResult {
        peak_two_norm: ev.peak_two_norm(),
        final_two_norm: ev.final_two_norm(),
        records: ev.records,
        snapshots: ev.snapshots,
        best: ev.best,
        final_h: ev.last,
        mask_irreducible,
    })
}
