//! Classical coupled-wave equations for the SHG + DFG cascade with four
//! slowly varying envelopes `A_p, A_2, A_+, A_-`.
//!
//! This module does not share any code path with [`crate::dynamics`]; it is
//! used as an independent physical check of the three-level reduction.
//!
//! Units: `z` in mm, envelopes in V/m, χ⁽²⁾ in m/V, angular frequencies in
//! rad/s and the speed of light in mm/s, so every rate comes out in mm⁻¹.
//! Photon fluxes are reported up to a common constant as
//! `N_j = n_j |A_j|² / ω_j`.
//!
//! The pump equation carries the degeneracy factor 2 of the SHG term
//! (`i ∂_z A_p = 2 χ₁ ω_p / (n_p c) · A_2 A_p* e^{iΔk₁z}`); with it the
//! fluxes obey `N_p + 2N_2 + N_+ + N_- = const` and `N_+ − N_- = const`.
//!
//! # Matching to the three-level model
//!
//! In flux-normalized amplitudes `a_j = √(n_j/ω_j)·A_j` the equations read
//! `i a_p' = 2γ₁ a_2 a_p*`, `i a_2' = γ₁ a_p² + γ₂ a_+ a_-`,
//! `i a_±' = γ₂ a_2 a_∓*`, with
//! `γ₁ = χ₁ √(ω_p² ω_2 / (n_p² n_2)) / c` and
//! `γ₂ = χ₂ √(ω_+ ω_- ω_2 / (n_+ n_- n_2)) / c`.
//! With `c₁ = a_p/√N₀`, `c₂ = √2·a_2/√N₀`, `c₃ = √2·a_+/√N₀` and an
//! undepleted reference `a_- ≈ √N_-`, the linearization about an
//! unconverted pump gives the three-level couplings
//! `κ₁ = √2·γ₁·√N₀` and `κ₃ = γ₂·√N_-`. [`compare_models`] shapes the two
//! gratings so that these equal the schedule's κ₁(z), κ₃(z), and compares
//! `(N_p, 2N_2, 2N_+)/N_tot` against `(|c₁|², |c₂|², |c₃|²)`.

use num_complex::Complex;

use crate::dynamics::{self, IntegratorSettings, StateVector};
use crate::error::{Error, Result};
use crate::profiles::{self, CouplingSchedule, DetuningMode, ScheduleKind};
use crate::scalar::Real;

/// Speed of light in mm/s.
pub const SPEED_OF_LIGHT_MM_PER_S: f64 = 299_792_458_000.0;

/// Which coupling of a schedule a grating follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// κ₁, the SHG grating.
    Pump,
    /// κ₃, the DFG grating.
    Stokes,
}

/// Longitudinal profile of an effective nonlinear susceptibility (m/V).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChiProfile<T> {
    Zero,
    Constant(T),
    Gaussian { peak: T, centre: T, width: T },
    /// `scale · κ(z)` for one channel of a coupling schedule, zero outside
    /// the schedule's domain.
    FromSchedule { schedule: CouplingSchedule<T>, channel: Channel, scale: T },
}

impl<T: Real> ChiProfile<T> {
    pub fn at(&self, z: T) -> T {
        match self {
            ChiProfile::Zero => T::zero(),
            ChiProfile::Constant(c) => *c,
            ChiProfile::Gaussian { peak, centre, width } => {
                let x = (z - *centre) / *width;
                *peak * (-x * x).exp()
            }
            ChiProfile::FromSchedule { schedule, channel, scale } => match profiles::coupling_pair(z, schedule) {
                Ok((k1, k3)) => {
                    *scale
                        * match channel {
                            Channel::Pump => k1,
                            Channel::Stokes => k3,
                        }
                }
                Err(_) => T::zero(),
            },
        }
    }
}

/// Material and frequency constants plus grating profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParameters<T> {
    pub omega_p: T,
    pub omega_2: T,
    pub omega_plus: T,
    pub omega_minus: T,
    pub n_p: T,
    pub n_2: T,
    pub n_plus: T,
    pub n_minus: T,
    pub chi1: ChiProfile<T>,
    pub chi2: ChiProfile<T>,
    /// `Δk₁ = k₂ − 2k_p` (mm⁻¹).
    pub dk1: T,
    /// `Δk₂ = k₂ − k₊ − k₋` (mm⁻¹).
    pub dk2: T,
    /// Crystal length (mm).
    pub length: T,
}

impl<T: Real> WaveParameters<T> {
    /// Builds parameters from the pump frequency and the offset Ω, so that
    /// `ω₂ = 2ω_p` and `ω_± = ω_p ± Ω`.
    ///
    /// `indices` is `[n_p, n_2, n_+, n_-]`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega_p: T,
        offset: T,
        indices: [T; 4],
        chi1: ChiProfile<T>,
        chi2: ChiProfile<T>,
        dk1: T,
        dk2: T,
        length: T,
    ) -> Result<Self> {
        if !(offset >= T::zero() && offset < omega_p) {
            return Err(Error::invalid("offset", "need 0 <= Ω < ω_p"));
        }
        let omega_2 = omega_p + omega_p;
        let omega_plus = omega_p + offset;
        // exact: omega_plus lies in [omega_2/2, omega_2]
        let omega_minus = omega_2 - omega_plus;
        let p = Self {
            omega_p,
            omega_2,
            omega_plus,
            omega_minus,
            n_p: indices[0],
            n_2: indices[1],
            n_plus: indices[2],
            n_minus: indices[3],
            chi1,
            chi2,
            dk1,
            dk2,
            length,
        };
        p.validate()?;
        Ok(p)
    }

    /// Telecom-band placeholder constants: 1550 nm pump, Ω = 2π·10 THz,
    /// indices around 2.2, phase matched, no gratings, 80 mm crystal.
    pub fn reference() -> Self {
        let c = T::lit(SPEED_OF_LIGHT_MM_PER_S);
        let omega_p = T::TAU() * c / T::lit(1.55e-3);
        let offset = T::TAU() * T::lit(1e13);
        let indices = [T::lit(2.14), T::lit(2.18), T::lit(2.15), T::lit(2.13)];
        Self::new(omega_p, offset, indices, ChiProfile::Zero, ChiProfile::Zero, T::zero(), T::zero(), T::lit(80.0))
            .expect("reference constants are valid")
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_p", self.omega_p),
            ("omega_2", self.omega_2),
            ("omega_plus", self.omega_plus),
            ("omega_minus", self.omega_minus),
            ("n_p", self.n_p),
            ("n_2", self.n_2),
            ("n_plus", self.n_plus),
            ("n_minus", self.n_minus),
            ("length", self.length),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        if self.omega_2 != self.omega_p + self.omega_p {
            return Err(Error::invalid("omega_2", "must equal 2·omega_p"));
        }
        if self.omega_plus + self.omega_minus != self.omega_2 {
            return Err(Error::invalid("omega_plus", "omega_plus + omega_minus must equal omega_2"));
        }
        if !self.dk1.is_finite() || !self.dk2.is_finite() {
            return Err(Error::invalid("dk", "phase mismatches must be finite"));
        }
        Ok(())
    }

    /// γ₁ per unit χ₁ (mm⁻¹ per (m/V) per √flux).
    pub fn shg_rate(&self) -> T {
        let c = T::lit(SPEED_OF_LIGHT_MM_PER_S);
        (self.omega_p * self.omega_p * self.omega_2 / (self.n_p * self.n_p * self.n_2)).sqrt() / c
    }

    /// γ₂ per unit χ₂.
    pub fn dfg_rate(&self) -> T {
        let c = T::lit(SPEED_OF_LIGHT_MM_PER_S);
        (self.omega_plus * self.omega_minus * self.omega_2 / (self.n_plus * self.n_minus * self.n_2)).sqrt() / c
    }
}

/// Four complex envelopes (V/m). Also used for their z-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WaveState<T> {
    pub a_p: Complex<T>,
    pub a_2: Complex<T>,
    pub a_plus: Complex<T>,
    pub a_minus: Complex<T>,
}

/// The three flux invariants of the cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants<T> {
    /// `N_p + 2N_2 + N_+ + N_-`.
    pub photon_number: T,
    /// `N_+ − N_-`.
    pub signal_idler: T,
    /// `Σ ω_j N_j`.
    pub energy: T,
}

impl<T: Real> WaveState<T> {
    pub fn new(a_p: Complex<T>, a_2: Complex<T>, a_plus: Complex<T>, a_minus: Complex<T>) -> Self {
        Self { a_p, a_2, a_plus, a_minus }
    }

    fn as_array(&self) -> [Complex<T>; 4] {
        [self.a_p, self.a_2, self.a_plus, self.a_minus]
    }

    fn from_array(a: [Complex<T>; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// Photon fluxes `[N_p, N_2, N_+, N_-]` with `N_j = n_j|A_j|²/ω_j`.
    pub fn fluxes(&self, p: &WaveParameters<T>) -> [T; 4] {
        [
            p.n_p * self.a_p.norm_sqr() / p.omega_p,
            p.n_2 * self.a_2.norm_sqr() / p.omega_2,
            p.n_plus * self.a_plus.norm_sqr() / p.omega_plus,
            p.n_minus * self.a_minus.norm_sqr() / p.omega_minus,
        ]
    }

    pub fn invariants(&self, p: &WaveParameters<T>) -> Invariants<T> {
        let [np, n2, nplus, nminus] = self.fluxes(p);
        let two = T::lit(2.0);
        Invariants {
            photon_number: np + two * n2 + nplus + nminus,
            signal_idler: nplus - nminus,
            energy: p.omega_p * np + p.omega_2 * n2 + p.omega_plus * nplus + p.omega_minus * nminus,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn axpy(&self, k: T, other: &Self) -> Self {
        let (a, b) = (self.as_array(), other.as_array());
        Self::from_array([a[0] + b[0] * k, a[1] + b[1] * k, a[2] + b[2] * k, a[3] + b[3] * k])
    }
}

/// `dA/dz` for all four envelopes.
pub fn wave_rhs<T: Real>(z: T, s: &WaveState<T>, p: &WaveParameters<T>) -> WaveState<T> {
    let c = T::lit(SPEED_OF_LIGHT_MM_PER_S);
    let chi1 = p.chi1.at(z);
    let chi2 = p.chi2.at(z);
    let phase1 = Complex::from_polar(T::one(), p.dk1 * z);
    let phase2 = Complex::from_polar(T::one(), p.dk2 * z);
    let minus_i = Complex::new(T::zero(), -T::one());

    let g_p = T::lit(2.0) * chi1 * p.omega_p / (p.n_p * c);
    let g_2shg = chi1 * p.omega_2 / (p.n_2 * c);
    let g_2dfg = chi2 * p.omega_2 / (p.n_2 * c);
    let g_plus = chi2 * p.omega_plus / (p.n_plus * c);
    let g_minus = chi2 * p.omega_minus / (p.n_minus * c);

    WaveState {
        a_p: minus_i * s.a_2 * s.a_p.conj() * phase1 * g_p,
        a_2: minus_i
            * (s.a_p * s.a_p * phase1.conj() * g_2shg + s.a_plus * s.a_minus * phase2.conj() * g_2dfg),
        a_plus: minus_i * s.a_2 * s.a_minus.conj() * phase2 * g_plus,
        a_minus: minus_i * s.a_2 * s.a_plus.conj() * phase2 * g_minus,
    }
}

/// Sampled coupled-wave trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveTrajectory<T> {
    pub z_grid: Vec<T>,
    pub states: Vec<WaveState<T>>,
}

impl<T: Real> WaveTrajectory<T> {
    /// Largest relative deviation of each invariant from its initial value,
    /// as `[photon_number, signal_idler, energy]`. The signal–idler drift is
    /// taken relative to the photon-number scale since `N_+ − N_-` may start
    /// at zero.
    pub fn max_invariant_drift(&self, p: &WaveParameters<T>) -> [T; 3] {
        let first = match self.states.first() {
            Some(s) => s.invariants(p),
            None => return [T::zero(); 3],
        };
        let scale = first.photon_number.abs().max(T::min_positive_value());
        let escale = first.energy.abs().max(T::min_positive_value());
        let mut out = [T::zero(); 3];
        for s in &self.states {
            let inv = s.invariants(p);
            out[0] = out[0].max((inv.photon_number - first.photon_number).abs() / scale);
            out[1] = out[1].max((inv.signal_idler - first.signal_idler).abs() / scale);
            out[2] = out[2].max((inv.energy - first.energy).abs() / escale);
        }
        out
    }
}

/// RK4 integration of [`wave_rhs`] over `[0, p.length]`.
pub fn propagate_waves<T: Real>(
    initial: WaveState<T>,
    p: &WaveParameters<T>,
    settings: &IntegratorSettings,
) -> Result<WaveTrajectory<T>> {
    settings.validate()?;
    p.validate()?;
    if !initial.is_finite() {
        return Err(Error::invalid("initial", "envelopes must be finite"));
    }
    let mut z_grid = vec![T::zero()];
    let mut states = vec![initial];
    let mut s = initial;
    let mut z = T::zero();
    let two = T::lit(2.0);
    for k in 1..=settings.n_steps {
        let next = settings.node(k, p.length);
        let h = next - z;
        let half = h / two;
        let k1 = wave_rhs(z, &s, p);
        let k2 = wave_rhs(z + half, &s.axpy(half, &k1), p);
        let k3 = wave_rhs(z + half, &s.axpy(half, &k2), p);
        let k4 = wave_rhs(next, &s.axpy(h, &k3), p);
        let sixth = h / T::lit(6.0);
        s = s.axpy(sixth, &k1).axpy(sixth * two, &k2).axpy(sixth * two, &k3).axpy(sixth, &k4);
        if !s.is_finite() {
            return Err(Error::NumericalFailure { step: k });
        }
        z = next;
        if settings.is_sample(k) {
            z_grid.push(z);
            states.push(s);
        }
    }
    Ok(WaveTrajectory { z_grid, states })
}

/// Rotating-frame envelopes `(A_p, A_2 e^{iΔk₁z}, A_± e^{i(Δk₁−Δk₂)z/2})`.
pub fn envelope_transform<T: Real>(s: &WaveState<T>, z: T, p: &WaveParameters<T>) -> WaveState<T> {
    let rot2 = Complex::from_polar(T::one(), p.dk1 * z);
    let rot_s = Complex::from_polar(T::one(), (p.dk1 - p.dk2) * z / T::lit(2.0));
    WaveState { a_p: s.a_p, a_2: s.a_2 * rot2, a_plus: s.a_plus * rot_s, a_minus: s.a_minus * rot_s }
}

/// Side-by-side run of the classical cascade and the three-level model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison<T> {
    pub z_grid: Vec<T>,
    /// `(N_p, 2N_2, 2N_+)/N_tot` with `N_tot = N_p + 2N_2 + 2N_+`.
    pub wave_populations: Vec<[T; 3]>,
    /// `(|c₁|², |c₂|², |c₃|²)`.
    pub level_populations: Vec<[T; 3]>,
    /// Largest absolute population difference over samples and channels.
    pub max_discrepancy: T,
    /// Final fraction of pump photons converted into `ω_+` pairs.
    pub wave_conversion: T,
    /// Final `|c₃|²`.
    pub level_conversion: T,
    /// The gratings and mismatches actually used for the classical run.
    pub matched: WaveParameters<T>,
}

/// Gratings that reproduce `sched`'s κ₁(z), κ₃(z) for the given input
/// envelopes (see the module docs for the convention).
pub fn matched_parameters<T: Real>(
    sched: &CouplingSchedule<T>,
    p: &WaveParameters<T>,
    initial: &WaveState<T>,
) -> Result<WaveParameters<T>> {
    if sched.kind() != ScheduleKind::Plain
        && sched.detuning_mode() == DetuningMode::Rescaled
        && sched.delta0() != T::zero()
    {
        return Err(Error::invalid(
            "delta",
            "a z-dependent rescaled mismatch has no constant Δk counterpart; use Δ = 0 or the constant detuning mode",
        ));
    }
    let [np0, _, _, nminus0] = initial.fluxes(p);
    if np0 == T::zero() {
        return Err(Error::invalid("a_p", "pump envelope must be non-zero"));
    }
    let two = T::lit(2.0);
    let scale1 = T::one() / (two.sqrt() * np0.sqrt() * p.shg_rate());
    let scale3 = if nminus0 > T::zero() { T::one() / (nminus0.sqrt() * p.dfg_rate()) } else { T::zero() };
    let mut out = *p;
    out.chi1 = ChiProfile::FromSchedule { schedule: *sched, channel: Channel::Pump, scale: scale1 };
    out.chi2 = ChiProfile::FromSchedule { schedule: *sched, channel: Channel::Stokes, scale: scale3 };
    out.dk1 = sched.delta0();
    out.dk2 = sched.delta0();
    out.length = sched.domain_length();
    Ok(out)
}

/// Runs both models on the same grid and reports the population discrepancy.
///
/// `initial` must carry only the pump and the reference (`A_2 = A_+ = 0`),
/// with `|A_-| ≥ 10 |A_p|`. The material constants of `p` are kept; its
/// gratings, mismatches and length are replaced by the matched ones.
pub fn compare_models<T: Real>(
    sched: &CouplingSchedule<T>,
    p: &WaveParameters<T>,
    initial: &WaveState<T>,
    settings: &IntegratorSettings,
) -> Result<ModelComparison<T>> {
    let ratio = initial.a_minus.norm() / initial.a_p.norm();
    if !(ratio >= T::lit(10.0)) {
        return Err(Error::Regime { ratio: ratio.to_f64().unwrap_or(f64::NAN) });
    }
    if initial.a_2 != Complex::default() || initial.a_plus != Complex::default() {
        return Err(Error::invalid("initial", "A_2 and A_+ must start at zero"));
    }
    let matched = matched_parameters(sched, p, initial)?;
    let waves = propagate_waves(*initial, &matched, settings)?;
    let levels = dynamics::propagate(StateVector::basis(0), sched, T::zero(), settings)?;

    let two = T::lit(2.0);
    let wave_populations: Vec<[T; 3]> = waves
        .states
        .iter()
        .map(|s| {
            let [np, n2, nplus, _] = s.fluxes(&matched);
            let total = np + two * n2 + two * nplus;
            [np / total, two * n2 / total, two * nplus / total]
        })
        .collect();
    let max_discrepancy = wave_populations
        .iter()
        .zip(&levels.populations)
        .flat_map(|(w, l)| (0..3).map(move |i| (w[i] - l[i]).abs()))
        .fold(T::zero(), T::max);
    let np0 = initial.fluxes(&matched)[0];
    let final_plus = waves.states.last().map(|s| s.fluxes(&matched)[2]).unwrap_or_else(T::zero);

    Ok(ModelComparison {
        z_grid: waves.z_grid,
        wave_populations,
        level_conversion: levels.final_fidelity,
        level_populations: levels.populations,
        max_discrepancy,
        wave_conversion: two * final_plus / np0,
        matched,
    })
}

/// Pump and reference envelopes used by the comparison harness: 100 kV/m
/// pump under a 100× stronger reference.
pub fn reference_input<T: Real>() -> WaveState<T> {
    let zero = Complex::new(T::zero(), T::zero());
    WaveState::new(Complex::new(T::lit(1e5), T::zero()), zero, zero, Complex::new(T::lit(1e7), T::zero()))
}
