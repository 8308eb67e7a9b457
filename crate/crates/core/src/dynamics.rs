//! Effective three-level dynamics `i ∂_z ψ = H(z) ψ` over the basis
//! `|1⟩` (pump pair), `|2⟩` (second harmonic), `|3⟩` (converted output),
//! integrated with fixed-step fourth-order Runge–Kutta.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::profiles::{self, CouplingSchedule, ScheduleKind};
use crate::scalar::Real;

/// Amplitudes `(c₁, c₂, c₃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector<T>(pub [Complex<T>; 3]);

impl<T: Real> StateVector<T> {
    pub fn new(c1: Complex<T>, c2: Complex<T>, c3: Complex<T>) -> Self {
        Self([c1, c2, c3])
    }

    pub fn zero() -> Self {
        Self([Complex::new(T::zero(), T::zero()); 3])
    }

    /// Basis state `|index + 1⟩`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 3, "basis index out of range");
        let mut s = Self::zero();
        s.0[index] = Complex::new(T::one(), T::zero());
        s
    }

    /// Real amplitudes.
    pub fn real(c1: T, c2: T, c3: T) -> Self {
        Self::new(Complex::new(c1, T::zero()), Complex::new(c2, T::zero()), Complex::new(c3, T::zero()))
    }

    pub fn populations(&self) -> [T; 3] {
        [self.0[0].norm_sqr(), self.0[1].norm_sqr(), self.0[2].norm_sqr()]
    }

    pub fn norm_sqr(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.0.iter().zip(other.0.iter()).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr())
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn axpy(&self, k: T, other: &Self) -> Self {
        let mut out = *self;
        for (o, x) in out.0.iter_mut().zip(other.0.iter()) {
            *o = *o + x * k;
        }
        out
    }
}

/// Real symmetric 3×3 effective Hamiltonian (mm⁻¹).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSample<T> {
    pub entries: [[T; 3]; 3],
}

impl<T: Real> HamiltonianSample<T> {
    /// Tridiagonal matrix with couplings κ₁, κ₃ and diagonal `(0, Δ, δ)`.
    pub fn from_parts(kappa1: T, kappa3: T, delta: T, delta2: T) -> Self {
        let z = T::zero();
        Self { entries: [[z, kappa1, z], [kappa1, delta, kappa3], [z, kappa3, delta2]] }
    }

    pub fn kappa1(&self) -> T {
        self.entries[0][1]
    }

    pub fn kappa3(&self) -> T {
        self.entries[1][2]
    }

    /// `H ψ`.
    pub fn apply(&self, psi: &StateVector<T>) -> StateVector<T> {
        let mut out = StateVector::zero();
        for (row, o) in self.entries.iter().zip(out.0.iter_mut()) {
            *o = row.iter().zip(psi.0.iter()).fold(Complex::new(T::zero(), T::zero()), |acc, (h, c)| acc + c * *h);
        }
        out
    }

    /// `−i H ψ`.
    fn derivative(&self, psi: &StateVector<T>) -> StateVector<T> {
        let mut out = self.apply(psi);
        for c in out.0.iter_mut() {
            *c = Complex::new(c.im, -c.re);
        }
        out
    }
}

/// Fixed-step integrator settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegratorSettings {
    /// Number of RK4 steps across the domain (≥ 100).
    pub n_steps: usize,
    /// Keep every `sample_stride`-th grid point (the endpoint is always kept).
    pub sample_stride: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self { n_steps: 20_000, sample_stride: 100 }
    }
}

impl IntegratorSettings {
    pub fn new(n_steps: usize, sample_stride: usize) -> Result<Self> {
        let s = Self { n_steps, sample_stride };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 100 {
            return Err(Error::invalid("steps", format!("need at least 100 steps, got {}", self.n_steps)));
        }
        if self.sample_stride == 0 {
            return Err(Error::invalid("stride", "sample stride must be >= 1"));
        }
        Ok(())
    }

    /// Uniform grid node `k` of `n_steps` on `[0, length]`; the last node is exactly `length`.
    pub fn node<T: Real>(&self, k: usize, length: T) -> T {
        if k == self.n_steps {
            length
        } else {
            length * T::count(k) / T::count(self.n_steps)
        }
    }

    /// Whether node `k` is recorded in the sampled output.
    pub fn is_sample(&self, k: usize) -> bool {
        k.is_multiple_of(self.sample_stride) || k == self.n_steps
    }
}

/// Sampled output of [`propagate`].
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult<T> {
    pub z_grid: Vec<T>,
    pub states: Vec<StateVector<T>>,
    pub populations: Vec<[T; 3]>,
    /// `|dθ/dz| / κ(z)` at each sample.
    pub adiabaticity_trace: Vec<T>,
    /// `|c₃|²` at the last sample.
    pub final_fidelity: T,
}

impl<T: Real> PropagationResult<T> {
    /// Assembles a result from sampled states, computing the derived traces.
    pub fn from_states(sched: &CouplingSchedule<T>, z_grid: Vec<T>, states: Vec<StateVector<T>>) -> Result<Self> {
        if z_grid.is_empty() || z_grid.len() != states.len() {
            return Err(Error::invalid("states", "need one state per grid point and at least one sample"));
        }
        let populations: Vec<[T; 3]> = states.iter().map(StateVector::populations).collect();
        let adiabaticity_trace = adiabaticity_profile(sched, &z_grid)?;
        let final_fidelity = populations.last().map(|p| p[2]).unwrap_or_else(T::zero);
        Ok(Self { z_grid, states, populations, adiabaticity_trace, final_fidelity })
    }

    /// Largest `| ‖ψ‖² − 1 |` over the samples.
    pub fn max_norm_drift(&self) -> T {
        self.states.iter().map(|s| (s.norm_sqr() - T::one()).abs()).fold(T::zero(), T::max)
    }

    pub fn final_state(&self) -> &StateVector<T> {
        self.states.last().expect("non-empty result")
    }
}

/// Builds `H(z)`. The bottom diagonal is `delta2` for the plain schedule and
/// zero for both shortcut schedules.
pub fn hamiltonian_at<T: Real>(z: T, sched: &CouplingSchedule<T>, delta2: T) -> Result<HamiltonianSample<T>> {
    let (k1, k3) = profiles::coupling_pair(z, sched)?;
    let delta = profiles::detuning_at(z, sched)?;
    let bottom = match sched.kind() {
        ScheduleKind::Plain => delta2,
        ScheduleKind::TimeRescaled | ScheduleKind::GaussianApprox => T::zero(),
    };
    Ok(HamiltonianSample::from_parts(k1, k3, delta, bottom))
}

/// Zero-energy dark state `cos θ |1⟩ − sin θ |3⟩`.
pub fn dark_state<T: Real>(z: T, sched: &CouplingSchedule<T>) -> Result<StateVector<T>> {
    let (k1, k3) = profiles::coupling_pair(z, sched)?;
    dark_state_for(k1, k3)
}

/// Dark state for explicit couplings.
pub fn dark_state_for<T: Real>(kappa1: T, kappa3: T) -> Result<StateVector<T>> {
    let theta = profiles::mixing_angle(kappa1, kappa3)?;
    Ok(StateVector::real(theta.cos(), T::zero(), -theta.sin()))
}

/// One classic RK4 step of `dψ/dz = −i H(z) ψ` from `z` to `z + dz`.
fn rk4_step<T, F>(hamiltonian: &F, z: T, dz: T, psi: &StateVector<T>) -> Result<StateVector<T>>
where
    T: Real,
    F: Fn(T) -> Result<HamiltonianSample<T>>,
{
    let half = dz / T::lit(2.0);
    let h_mid = hamiltonian(z + half)?;
    let k1 = hamiltonian(z)?.derivative(psi);
    let k2 = h_mid.derivative(&psi.axpy(half, &k1));
    let k3 = h_mid.derivative(&psi.axpy(half, &k2));
    let k4 = hamiltonian(z + dz)?.derivative(&psi.axpy(dz, &k3));
    let sixth = dz / T::lit(6.0);
    let two = T::lit(2.0);
    let mut out = *psi;
    for i in 0..3 {
        out.0[i] = out.0[i] + (k1.0[i] + k2.0[i] * two + k3.0[i] * two + k4.0[i]) * sixth;
    }
    Ok(out)
}

/// Integrates through an arbitrary increasing sequence of nodes, returning
/// the state at every node (including the first).
pub fn integrate_nodes<T, F>(initial: StateVector<T>, nodes: &[T], hamiltonian: F) -> Result<Vec<StateVector<T>>>
where
    T: Real,
    F: Fn(T) -> Result<HamiltonianSample<T>>,
{
    let mut out = Vec::with_capacity(nodes.len());
    let mut psi = initial;
    out.push(psi);
    for (step, w) in nodes.windows(2).enumerate() {
        psi = rk4_step(&hamiltonian, w[0], w[1] - w[0], &psi)?;
        if !psi.is_finite() {
            return Err(Error::NumericalFailure { step: step + 1 });
        }
        out.push(psi);
    }
    Ok(out)
}

/// Integrates on the uniform grid over `[0, length]` and returns the sampled
/// `(z, ψ)` pairs selected by `settings.sample_stride`.
pub fn integrate<T, F>(
    initial: StateVector<T>,
    length: T,
    settings: &IntegratorSettings,
    hamiltonian: F,
) -> Result<(Vec<T>, Vec<StateVector<T>>)>
where
    T: Real,
    F: Fn(T) -> Result<HamiltonianSample<T>>,
{
    settings.validate()?;
    let n_samples = settings.n_steps / settings.sample_stride + 2;
    let mut zs = Vec::with_capacity(n_samples);
    let mut states = Vec::with_capacity(n_samples);
    let mut psi = initial;
    zs.push(T::zero());
    states.push(psi);
    let mut z = T::zero();
    for k in 1..=settings.n_steps {
        let next = settings.node(k, length);
        psi = rk4_step(&hamiltonian, z, next - z, &psi)?;
        if !psi.is_finite() {
            return Err(Error::NumericalFailure { step: k });
        }
        z = next;
        if settings.is_sample(k) {
            zs.push(z);
            states.push(psi);
        }
    }
    Ok((zs, states))
}

fn norm_tolerance<T: Real>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(100.0))
}

/// Solves `i ∂_z ψ = H(z) ψ` across the schedule domain.
///
/// The norm is monitored through the result but never renormalized.
pub fn propagate<T: Real>(
    initial: StateVector<T>,
    sched: &CouplingSchedule<T>,
    delta2: T,
    settings: &IntegratorSettings,
) -> Result<PropagationResult<T>> {
    let norm_sqr = initial.norm_sqr();
    if !((norm_sqr - T::one()).abs() <= norm_tolerance()) {
        return Err(Error::NotNormalized { norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN) });
    }
    let (z_grid, states) =
        integrate(initial, sched.domain_length(), settings, |z| hamiltonian_at(z, sched, delta2))?;
    PropagationResult::from_states(sched, z_grid, states)
}

/// Final-state fidelity `|⟨3|ψ_f⟩|²`.
pub fn fidelity<T: Real>(result: &PropagationResult<T>) -> T {
    result.final_state().0[2].norm_sqr()
}

/// `max_z |c₂|²`, the transient second-harmonic population.
pub fn max_intermediate_population<T: Real>(result: &PropagationResult<T>) -> T {
    result.populations.iter().map(|p| p[1]).fold(T::zero(), T::max)
}

/// Adiabaticity ratio `|dθ/dz| / κ(z)` using a central difference with step
/// `domain·1e-6` (clamped to the domain at the ends).
pub fn adiabaticity_ratio<T: Real>(z: T, sched: &CouplingSchedule<T>) -> Result<T> {
    let len = sched.domain_length();
    let z = profiles::check_domain(z, len)?;
    let h = len * T::lit(1e-6).max(T::epsilon().cbrt());
    let lo = (z - h).max(T::zero());
    let hi = (z + h).min(len);
    let (k1, k3) = profiles::coupling_pair(z, sched)?;
    let kappa = profiles::rms_coupling(k1, k3);
    if kappa == T::zero() {
        return Ok(T::zero());
    }
    let (a1, a3) = profiles::coupling_pair(lo, sched)?;
    let (b1, b3) = profiles::coupling_pair(hi, sched)?;
    let centre = profiles::mixing_angle(k1, k3)?;
    let theta_lo = profiles::mixing_angle(a1, a3).unwrap_or(centre);
    let theta_hi = profiles::mixing_angle(b1, b3).unwrap_or(centre);
    Ok(((theta_hi - theta_lo) / (hi - lo)).abs() / kappa)
}

fn adiabaticity_profile<T: Real>(sched: &CouplingSchedule<T>, z_grid: &[T]) -> Result<Vec<T>> {
    z_grid.iter().map(|&z| adiabaticity_ratio(z, sched)).collect()
}
