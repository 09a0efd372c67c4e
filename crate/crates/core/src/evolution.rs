//! Masked rank-1 evolution of a nonnegative Hamiltonian.
//!
//! Each step blends the current operator with the entrywise modulus of a
//! reduced density matrix, restricted to a fixed feasibility mask:
//!
//! ```text
//! H(t+1) = (1 - λ)·H(t) + η·(|ρ_B(t)| ∘ K)
//! ```
//!
//! `ρ_B` is the partial trace over the ancilla of a bipartite pure state, so
//! it is `n×n` for any ancilla dimension `d` and equals `ψψ†` when `d = 1`.
//! Taking the modulus keeps `H` real and nonnegative; entries outside the
//! mask stay exactly zero.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::measurement::expectation;
use crate::numkernel::{
    eig_hermitian, gaussian_state, hermitian_eigenvalues, operator_norms, ComplexMatrix,
    ComplexVector, RandomStream,
};
use crate::quantum_state::{coherence, entropy_from_spectrum, purity_from_spectrum, DensityMatrix};

/// Default distance between retained snapshots.
pub const DEFAULT_SNAPSHOT_STRIDE: usize = 25;

/// Square binary matrix selecting the entries a Hamiltonian may occupy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityMask {
    n: usize,
    bits: Vec<bool>,
}

impl FeasibilityMask {
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMask("empty mask".into()));
        }
        let mut bits = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidMask(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => bits.push(false),
                    1 => bits.push(true),
                    other => {
                        return Err(Error::InvalidMask(format!(
                            "entry ({i},{j}) is {other}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Ok(Self { n, bits })
    }

    pub fn ones(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMask("empty mask".into()));
        }
        Ok(Self {
            n,
            bits: vec![true; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMask("empty mask".into()));
        }
        Ok(Self {
            n,
            bits: (0..n * n).map(|k| k / n == k % n).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn trace(&self) -> usize {
        (0..self.n).filter(|&i| self.allows(i, i)).count()
    }

    /// The mask as a 0/1 real matrix.
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |i, j| {
            Complex64::new(if self.allows(i, j) { 1.0 } else { 0.0 }, 0.0)
        })
        .expect("n >= 1")
    }
}

/// Real nonnegative operator supported inside a feasibility mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedHamiltonian {
    h: ComplexMatrix,
    mask: FeasibilityMask,
}

impl MaskedHamiltonian {
    pub fn new(h: ComplexMatrix, mask: FeasibilityMask) -> Result<Self> {
        let n = h.require_square("Hamiltonian")?;
        if n != mask.dim() {
            return Err(Error::shape(format!(
                "{n}x{n} Hamiltonian with a {0}x{0} mask",
                mask.dim()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let z = h[(i, j)];
                if z.im != 0.0 || !(z.re >= 0.0) {
                    return Err(Error::contract(format!(
                        "entry ({i},{j}) = {z} is not a nonnegative real"
                    )));
                }
                if !mask.allows(i, j) && z.re != 0.0 {
                    return Err(Error::contract(format!(
                        "entry ({i},{j}) = {} lies outside the mask",
                        z.re
                    )));
                }
            }
        }
        Ok(Self { h, mask })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn mask(&self) -> &FeasibilityMask {
        &self.mask
    }

    pub fn dim(&self) -> usize {
        self.mask.dim()
    }

    pub fn trace(&self) -> f64 {
        self.h.trace().re
    }

    /// Real entries, row-major.
    pub fn entries(&self) -> Vec<f64> {
        self.h.real_parts()
    }
}

/// `H₀ = K / trace(K)`: uniform weight on every allowed entry, unit trace.
pub fn init_hamiltonian(mask: &FeasibilityMask) -> Result<MaskedHamiltonian> {
    let tr = mask.trace();
    if tr == 0 {
        return Err(Error::InvalidMask(
            "diagonal has no allowed entry; cannot normalize to unit trace".into(),
        ));
    }
    let h = mask.to_matrix().scale(Complex64::new(1.0 / tr as f64, 0.0));
    MaskedHamiltonian::new(h, mask.clone())
}

/// Random pure state on `C^n ⊗ C^d`, flattened as `i·d + j` for `|i⟩_B|j⟩_A`.
pub fn bipartite_state(n: usize, d: usize, stream: &mut RandomStream) -> Result<ComplexVector> {
    if n == 0 || d == 0 {
        return Err(Error::dimension(format!("bipartite dimensions {n}x{d}")));
    }
    gaussian_state(n * d, stream)
}

/// Reduced state of subsystem B: `(ρ_B)_{ii'} = Σ_j c_{ij} conj(c_{i'j})`.
pub fn partial_trace_a(psi: &ComplexVector, n: usize, d: usize) -> Result<DensityMatrix> {
    if n == 0 || d == 0 {
        return Err(Error::dimension(format!("bipartite dimensions {n}x{d}")));
    }
    if psi.dim() != n * d {
        return Err(Error::shape(format!(
            "state of length {} is not {n}x{d}",
            psi.dim()
        )));
    }
    let norm = psi.norm();
    if math::abs(norm - 1.0) > 1e-10 {
        return Err(Error::contract(format!("state norm is {norm}, not 1")));
    }
    let c = psi.as_slice();
    let rho = ComplexMatrix::from_fn(n, n, |i, k| {
        (0..d).map(|j| c[i * d + j] * c[k * d + j].conj()).sum()
    })?;
    Ok(DensityMatrix::from_trusted(rho))
}

/// `U·(ψ_B ⊗ φ_A)`.
pub fn entangle(
    psi_b: &ComplexVector,
    phi_a: &ComplexVector,
    u: &ComplexMatrix,
) -> Result<ComplexVector> {
    let dim = psi_b.dim() * phi_a.dim();
    if u.rows() != dim || u.cols() != dim {
        return Err(Error::shape(format!(
            "{}x{} unitary for a product of dimension {dim}",
            u.rows(),
            u.cols()
        )));
    }
    if !u.is_unitary(1e-10) {
        return Err(Error::contract("entangling operator is not unitary"));
    }
    for (name, v) in [("psi_B", psi_b), ("phi_A", phi_a)] {
        let norm = v.norm();
        if math::abs(norm - 1.0) > 1e-10 {
            return Err(Error::contract(format!("{name} norm is {norm}, not 1")));
        }
    }
    u.matvec(&psi_b.kron(phi_a))
}

/// `H' = (1 - λ)·H + η·(|ρ| ∘ K)`.
pub fn step(
    current: &MaskedHamiltonian,
    update_term: &DensityMatrix,
    eta: f64,
    lambda_decay: f64,
) -> Result<MaskedHamiltonian> {
    let n = current.dim();
    if update_term.dim() != n {
        return Err(Error::shape(format!(
            "{0}x{0} update for a {n}x{n} Hamiltonian",
            update_term.dim()
        )));
    }
    let keep = 1.0 - lambda_decay;
    let rho = update_term.matrix();
    let mut h = current.h.clone();
    for i in 0..n {
        for j in 0..n {
            let v = if current.mask.allows(i, j) {
                keep * h[(i, j)].re + eta * rho[(i, j)].norm()
            } else {
                0.0
            };
            h[(i, j)] = Complex64::new(v, 0.0);
        }
    }
    Ok(MaskedHamiltonian {
        h,
        mask: current.mask.clone(),
    })
}

/// `(1 - s)·H_B + s·H_C`.
pub fn interpolate(h_b: &ComplexMatrix, h_c: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::contract(format!(
            "schedule value {s} outside [0, 1]"
        )));
    }
    h_b.linear_combination(1.0 - s, h_c, s)
}

/// Where each step's state comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSource {
    /// A fresh complex-Gaussian bipartite state every step.
    RandomBipartite,
    /// A phase-evolving superposition over fixed category vectors, passed
    /// through a seeded entangling unitary.
    BlueSuperposition,
}

impl StateSource {
    pub fn name(&self) -> &'static str {
        match self {
            StateSource::RandomBipartite => "random_bipartite",
            StateSource::BlueSuperposition => "blue_superposition",
        }
    }
}

impl core::str::FromStr for StateSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_bipartite" => Ok(StateSource::RandomBipartite),
            "blue_superposition" => Ok(StateSource::BlueSuperposition),
            other => Err(Error::InvalidConfiguration(format!(
                "unknown state source `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub eta: f64,
    pub lambda_decay: f64,
    pub steps: usize,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub state_source: StateSource,
    pub snapshot_stride: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            eta: 0.7,
            lambda_decay: 0.7,
            steps: 500,
            n: 10,
            d: 1,
            seed: 0,
            state_source: StateSource::BlueSuperposition,
            snapshot_stride: DEFAULT_SNAPSHOT_STRIDE,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidConfiguration(msg));
        // eta = 0 is admitted: it isolates the pure decay of the trace.
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return bad(format!("eta = {} must be finite and nonnegative", self.eta));
        }
        if !(0.0..=1.0).contains(&self.lambda_decay) {
            return bad(format!(
                "lambda_decay = {} outside [0, 1]",
                self.lambda_decay
            ));
        }
        if self.n == 0 || self.d == 0 {
            return bad(format!(
                "dimensions n = {}, d = {} must be positive",
                self.n, self.d
            ));
        }
        if self.snapshot_stride == 0 {
            return bad("snapshot_stride must be positive".into());
        }
        Ok(())
    }
}

/// Metrics of one Hamiltonian in the trajectory.
///
/// Record `t` describes `H(t)`. For `t ≥ 1` the state fields describe the
/// state `ψ(t-1)` and update term `ρ(t-1)` that produced it, with
/// `qtv = ⟨ψ(t-1)|H(t)|ψ(t-1)⟩`. The initial record has no state and
/// reports zeros there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub t: usize,
    pub two_norm: f64,
    pub spectral_radius: f64,
    pub qtv_real: f64,
    pub qtv_abs: f64,
    pub purity: f64,
    pub qee: f64,
    pub coherence: f64,
    pub trace_h: f64,
}

impl TraceRecord {
    pub fn is_finite(&self) -> bool {
        [
            self.two_norm,
            self.spectral_radius,
            self.qtv_real,
            self.qtv_abs,
            self.purity,
            self.qee,
            self.coherence,
            self.trace_h,
        ]
        .iter()
        .all(|x| x.is_finite())
    }
}

/// One state draw: the measured vector and the update it contributes.
#[derive(Debug, Clone)]
pub struct StateSample {
    pub psi: ComplexVector,
    pub update: DensityMatrix,
}

impl StateSample {
    /// Sample from a bipartite pure state. For `d = 1` the measured vector is
    /// the state itself; otherwise it is the leading eigenvector of `ρ_B`.
    pub fn from_bipartite(psi_ba: &ComplexVector, n: usize, d: usize) -> Result<Self> {
        let update = partial_trace_a(psi_ba, n, d)?;
        let psi = if d == 1 {
            psi_ba.clone()
        } else {
            eig_hermitian(update.matrix())?.vectors.column(0)
        };
        Ok(Self { psi, update })
    }
}

/// Supplies the state used at each step.
pub trait StateProvider {
    fn sample(&mut self, t: usize) -> Result<StateSample>;
}

impl<F> StateProvider for F
where
    F: FnMut(usize) -> Result<StateSample>,
{
    fn sample(&mut self, t: usize) -> Result<StateSample> {
        self(t)
    }
}

/// Draws an independent Gaussian bipartite state every step.
#[derive(Debug, Clone)]
pub struct RandomBipartiteSource {
    n: usize,
    d: usize,
    stream: RandomStream,
}

impl RandomBipartiteSource {
    pub fn new(n: usize, d: usize, stream: RandomStream) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::dimension(format!("bipartite dimensions {n}x{d}")));
        }
        Ok(Self { n, d, stream })
    }
}

impl StateProvider for RandomBipartiteSource {
    fn sample(&mut self, _t: usize) -> Result<StateSample> {
        let psi = bipartite_state(self.n, self.d, &mut self.stream)?;
        StateSample::from_bipartite(&psi, self.n, self.d)
    }
}

/// A retained Hamiltonian and the index of its record.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: usize,
    pub hamiltonian: MaskedHamiltonian,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    /// Records `0..=steps`.
    pub records: Vec<TraceRecord>,
    /// Every `snapshot_stride`-th Hamiltonian, starting at `t = 0`.
    pub snapshots: Vec<Snapshot>,
    /// First Hamiltonian attaining the largest two-norm.
    pub best: Snapshot,
    pub last: Snapshot,
}

impl Evolution {
    pub fn peak_two_norm(&self) -> f64 {
        self.records[self.best.t].two_norm
    }

    pub fn final_two_norm(&self) -> f64 {
        self.records[self.last.t].two_norm
    }
}

fn base_record(t: usize, h: &MaskedHamiltonian) -> Result<TraceRecord> {
    let norms = operator_norms(h.matrix())?;
    Ok(TraceRecord {
        t,
        two_norm: norms.two_norm,
        spectral_radius: norms.spectral_radius,
        qtv_real: 0.0,
        qtv_abs: 0.0,
        purity: 0.0,
        qee: 0.0,
        coherence: 0.0,
        trace_h: h.trace(),
    })
}

/// Iterates [`step`] from [`init_hamiltonian`] for `config.steps` steps.
pub fn evolve<P: StateProvider + ?Sized>(
    config: &EvolutionConfig,
    mask: &FeasibilityMask,
    provider: &mut P,
) -> Result<Evolution> {
    config.validate()?;
    if mask.dim() != config.n {
        return Err(Error::shape(format!(
            "{0}x{0} mask for n = {1}",
            mask.dim(),
            config.n
        )));
    }
    let n = config.n;
    let mut h = init_hamiltonian(mask)?;
    let mut records = Vec::with_capacity(config.steps + 1);
    records.push(base_record(0, &h)?);
    let mut snapshots = vec![Snapshot {
        t: 0,
        hamiltonian: h.clone(),
    }];
    let mut best = snapshots[0].clone();
    let mut best_norm = records[0].two_norm;

    for t in 0..config.steps {
        let sample = provider.sample(t)?;
        if sample.psi.dim() != n || sample.update.dim() != n {
            return Err(Error::shape(format!(
                "step {t}: provider returned state of length {} and {}x{} update for n = {n}",
                sample.psi.dim(),
                sample.update.dim(),
                sample.update.dim()
            )));
        }
        h = step(&h, &sample.update, config.eta, config.lambda_decay)?;

        let mut record = base_record(t + 1, &h)?;
        let q = expectation(&sample.psi, h.matrix());
        let spectrum: Vec<f64> = hermitian_eigenvalues(sample.update.matrix())?
            .into_iter()
            .map(|l| l.max(0.0))
            .collect();
        record.qtv_real = q.re;
        record.qtv_abs = q.norm();
        record.purity = purity_from_spectrum(&spectrum);
        record.qee = entropy_from_spectrum(&spectrum);
        record.coherence = coherence(sample.update.matrix())?;
        records.push(record);

        let snap = || Snapshot {
            t: t + 1,
            hamiltonian: h.clone(),
        };
        if record.two_norm > best_norm {
            best_norm = record.two_norm;
            best = snap();
        }
        if (t + 1) % config.snapshot_stride == 0 {
            snapshots.push(snap());
        }
    }

    let last = Snapshot {
        t: config.steps,
        hamiltonian: h,
    };
    Ok(Evolution {
        records,
        snapshots,
        best,
        last,
    })
}
