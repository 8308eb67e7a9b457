//! Scripted runs: population traces with the schedule alongside, sweeps of
//! final fidelity over the contraction parameter and the mismatch, and
//! adiabaticity reports.

use rayon::prelude::*;

use crate::dynamics::{self, IntegratorSettings, PropagationResult, StateVector};
use crate::error::{Error, Result};
use crate::profiles::{self, CouplingSchedule, DetuningMode, PlainGaussianParams, ScheduleKind};
use crate::scalar::Real;

/// Contraction parameters used by the default fidelity sweep.
pub const DEFAULT_A_VALUES: [f64; 11] = [1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];

/// A propagation together with the schedule sampled on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<T> {
    pub result: PropagationResult<T>,
    pub kappa1: Vec<T>,
    pub kappa3: Vec<T>,
    pub delta_eff: Vec<T>,
}

/// Propagates `|1⟩` through `sched` (δ = 0) and samples the schedule alongside.
pub fn run_trace<T: Real>(sched: &CouplingSchedule<T>, settings: &IntegratorSettings) -> Result<Trace<T>> {
    let result = dynamics::propagate(StateVector::basis(0), sched, T::zero(), settings)?;
    let mut kappa1 = Vec::with_capacity(result.z_grid.len());
    let mut kappa3 = Vec::with_capacity(result.z_grid.len());
    let mut delta_eff = Vec::with_capacity(result.z_grid.len());
    for &z in &result.z_grid {
        let (k1, k3) = profiles::coupling_pair(z, sched)?;
        kappa1.push(k1);
        kappa3.push(k3);
        delta_eff.push(profiles::detuning_at(z, sched)?);
    }
    Ok(Trace { result, kappa1, kappa3, delta_eff })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<T> {
    pub a_values: Vec<T>,
    pub delta_values: Vec<T>,
    pub schedule_kind: ScheduleKind,
    pub base: PlainGaussianParams<T>,
    pub settings: IntegratorSettings,
    pub detuning_mode: DetuningMode,
}

impl<T: Real> SweepSpec<T> {
    /// Gaussian-approximated schedule over the default `a` grid with Δ ∈ {0, κ₀}.
    pub fn reference() -> Self {
        let base = PlainGaussianParams::reference();
        Self {
            a_values: DEFAULT_A_VALUES.iter().map(|&a| T::lit(a)).collect(),
            delta_values: vec![T::zero(), base.kappa0],
            schedule_kind: ScheduleKind::GaussianApprox,
            base,
            settings: IntegratorSettings::default(),
            detuning_mode: DetuningMode::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.a_values.is_empty() {
            return Err(Error::invalid("a", "sweep needs at least one contraction parameter"));
        }
        if self.delta_values.is_empty() {
            return Err(Error::invalid("delta", "sweep needs at least one detuning"));
        }
        if let Some(a) = self.a_values.iter().find(|a| !(**a >= T::one())) {
            return Err(Error::invalid("a", format!("contraction parameter must be >= 1, got {a}")));
        }
        self.base.validate()?;
        self.settings.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub a: T,
    pub delta: T,
    pub fidelity: T,
    pub max_pop2: T,
    /// Propagation domain length (mm).
    pub length_mm: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub rows: Vec<SweepRow<T>>,
}

impl<T: Real> SweepResult<T> {
    pub fn min_fidelity(&self) -> T {
        self.rows.iter().map(|r| r.fidelity).fold(T::infinity(), T::min)
    }
}

/// One propagation per `(a, Δ)` pair, evaluated in parallel; rows come back
/// sorted by `(Δ, a)` regardless of completion order.
pub fn sweep_contraction<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    spec.validate()?;
    let pairs: Vec<(T, T)> = spec
        .delta_values
        .iter()
        .flat_map(|&delta| spec.a_values.iter().map(move |&a| (a, delta)))
        .collect();
    let mut rows = pairs
        .into_par_iter()
        .map(|(a, delta)| {
            let sched = CouplingSchedule::new(spec.schedule_kind, spec.base, a, delta)?
                .with_detuning_mode(spec.detuning_mode);
            let result = dynamics::propagate(StateVector::basis(0), &sched, T::zero(), &spec.settings)?;
            Ok(SweepRow {
                a,
                delta,
                fidelity: dynamics::fidelity(&result),
                max_pop2: dynamics::max_intermediate_population(&result),
                length_mm: sched.domain_length(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| {
        x.delta
            .partial_cmp(&y.delta)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.a.partial_cmp(&y.a).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(SweepResult { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticityReport<T> {
    /// Largest ratio over the guarded region.
    pub max_ratio: T,
    pub z_at_max: T,
    /// `(z, |dθ/dz|/κ)` over the guarded region.
    pub profile: Vec<(T, T)>,
}

/// Samples `|dθ/dz| / κ(z)` on the integrator grid (decimated by the sample
/// stride), keeping only points where `κ(z) > 1e-3·κ₀` so the vanishing tails
/// do not dominate.
pub fn adiabaticity_report<T: Real>(
    sched: &CouplingSchedule<T>,
    settings: &IntegratorSettings,
) -> Result<AdiabaticityReport<T>> {
    settings.validate()?;
    let len = sched.domain_length();
    let zs: Vec<T> = (0..=settings.n_steps)
        .filter(|&k| settings.is_sample(k))
        .map(|k| settings.node(k, len))
        .collect();
    let mut kappas = Vec::with_capacity(zs.len());
    for &z in &zs {
        let (k1, k3) = profiles::coupling_pair(z, sched)?;
        kappas.push(profiles::rms_coupling(k1, k3));
    }
    let guard = sched.base().kappa0 * T::lit(1e-3);
    let mut profile = Vec::new();
    let (mut max_ratio, mut z_at_max) = (T::zero(), T::zero());
    for (&z, &kappa) in zs.iter().zip(&kappas) {
        if kappa > guard {
            let ratio = dynamics::adiabaticity_ratio(z, sched)?;
            if ratio > max_ratio {
                max_ratio = ratio;
                z_at_max = z;
            }
            profile.push((z, ratio));
        }
    }
    Ok(AdiabaticityReport { max_ratio, z_at_max, profile })
}

/// Largest `‖ψ_TR(ζ) − ψ_plain(f(ζ))‖` over the integrator grid.
///
/// The rescaled schedule is integrated on the uniform grid in ζ; the plain
/// schedule is integrated on the mapped nodes `f(ζ_k)`, so both solutions are
/// available at corresponding points without interpolation.
pub fn rescaling_deviation<T: Real>(
    base: PlainGaussianParams<T>,
    a: T,
    delta0: T,
    settings: &IntegratorSettings,
) -> Result<T> {
    settings.validate()?;
    let tr = CouplingSchedule::time_rescaled(base, a, delta0)?;
    let plain = CouplingSchedule::plain(base, delta0)?;
    let rescale = *tr.rescaling().expect("time-rescaled schedule");
    let len = tr.domain_length();
    let zeta: Vec<T> = (0..=settings.n_steps).map(|k| settings.node(k, len)).collect();
    let mapped = zeta.iter().map(|&z| profiles::rescaling_map(z, &rescale)).collect::<Result<Vec<T>>>()?;
    let psi0 = StateVector::basis(0);
    let along_tr = dynamics::integrate_nodes(psi0, &zeta, |z| dynamics::hamiltonian_at(z, &tr, T::zero()))?;
    let along_plain = dynamics::integrate_nodes(psi0, &mapped, |z| dynamics::hamiltonian_at(z, &plain, T::zero()))?;
    Ok(along_tr.iter().zip(&along_plain).map(|(x, y)| x.distance(y)).fold(T::zero(), T::max))
}
