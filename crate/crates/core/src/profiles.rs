//! Coupling schedules for the pump-analog (κ₁) and Stokes-analog (κ₃)
//! couplings, the sinusoidal time-rescaling map, and schedule-level
//! diagnostics.
//!
//! Three schedule variants are supported:
//!
//! * `Plain`: two Gaussians on `[0, L]`, κ₃ peaking at `L/2 − d` before κ₁
//!   peaks at `L/2 + d` (counterintuitive ordering).
//! * `TimeRescaled`: the plain couplings evaluated at `f(z)` and multiplied
//!   by `f'(z)`, on the contracted domain `[0, L/a]`.
//! * `GaussianApprox`: Gaussians of height `(2a − 1)κ₀` centred at
//!   `(L/2 ± d)/a`, approximating the rescaled shapes on `[0, L/a]`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gaussian grating parameters for the uncontracted schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlainGaussianParams<T> {
    /// Peak coupling κ₀ (mm⁻¹).
    pub kappa0: T,
    /// Offset of each peak from the midpoint (mm).
    pub d: T,
    /// Gaussian width (mm).
    pub s: T,
    /// Medium length (mm).
    pub length: T,
}

impl<T: Real> PlainGaussianParams<T> {
    pub fn new(kappa0: T, d: T, s: T, length: T) -> Result<Self> {
        let p = Self { kappa0, d, s, length };
        p.validate()?;
        Ok(p)
    }

    /// `L = 80 mm`, `d = L/10`, `s = L/6`, `κ₀ = 1 mm⁻¹`.
    pub fn reference() -> Self {
        Self::with_length(T::lit(80.0), T::one())
    }

    /// Uses the reference proportions `d = L/10`, `s = L/6` for a given length.
    pub fn with_length(length: T, kappa0: T) -> Self {
        Self { kappa0, d: length / T::lit(10.0), s: length / T::lit(6.0), length }
    }

    /// Checks `κ₀ ≥ 0, s > 0, L > 0, 0 ≤ d < L/2`.
    ///
    /// κ₀ = 0 is accepted so that zero-coupling control runs can be built.
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa0 >= T::zero()) || !self.kappa0.is_finite() {
            return Err(Error::invalid("kappa0", format!("must be finite and >= 0, got {}", self.kappa0)));
        }
        if !(self.s > T::zero()) || !self.s.is_finite() {
            return Err(Error::invalid("s", format!("must be > 0, got {}", self.s)));
        }
        if !(self.length > T::zero()) || !self.length.is_finite() {
            return Err(Error::invalid("L", format!("must be > 0, got {}", self.length)));
        }
        if !(self.d >= T::zero() && self.d < self.length / T::lit(2.0)) {
            return Err(Error::invalid("d", format!("must satisfy 0 <= d < L/2, got {}", self.d)));
        }
        Ok(())
    }

    fn gaussian(&self, z: T, centre: T) -> T {
        let x = (z - centre) / self.s;
        (-x * x).exp()
    }

    /// Plain couplings `(κ₁, κ₃)` at `z`, without a domain check.
    fn plain_pair(&self, z: T) -> (T, T) {
        let mid = self.length / T::lit(2.0);
        (
            self.kappa0 * self.gaussian(z, mid + self.d),
            self.kappa0 * self.gaussian(z, mid - self.d),
        )
    }
}

/// Contraction parameter together with the original length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescalingParams<T> {
    pub a: T,
    pub length: T,
}

impl<T: Real> RescalingParams<T> {
    pub fn new(a: T, length: T) -> Result<Self> {
        if !(a >= T::one()) || !a.is_finite() {
            return Err(Error::invalid("a", format!("contraction parameter must be >= 1, got {a}")));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::invalid("L", format!("must be > 0, got {length}")));
        }
        Ok(Self { a, length })
    }

    /// `L/a`.
    pub fn contracted_length(&self) -> T {
        self.length / self.a
    }

    fn phase(&self, z: T) -> T {
        T::TAU() * self.a * z / self.length
    }
}

/// Which of the three schedule shapes to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    Plain,
    TimeRescaled,
    GaussianApprox,
}

/// How the single-photon mismatch Δ enters the shortcut schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DetuningMode {
    /// `Δ'(z) = Δ·f'(z)`.
    #[default]
    Rescaled,
    /// `Δ'(z) = Δ`.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant<T> {
    Plain(PlainGaussianParams<T>),
    TimeRescaled(PlainGaussianParams<T>, RescalingParams<T>),
    GaussianApprox(PlainGaussianParams<T>, RescalingParams<T>),
}

/// A complete coupling schedule: κ₁(z), κ₃(z) and the effective detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSchedule<T> {
    variant: Variant<T>,
    delta0: T,
    detuning_mode: DetuningMode,
}

impl<T: Real> CouplingSchedule<T> {
    pub fn plain(base: PlainGaussianParams<T>, delta0: T) -> Result<Self> {
        base.validate()?;
        check_delta(delta0)?;
        Ok(Self { variant: Variant::Plain(base), delta0, detuning_mode: DetuningMode::default() })
    }

    pub fn time_rescaled(base: PlainGaussianParams<T>, a: T, delta0: T) -> Result<Self> {
        base.validate()?;
        check_delta(delta0)?;
        let r = RescalingParams::new(a, base.length)?;
        Ok(Self { variant: Variant::TimeRescaled(base, r), delta0, detuning_mode: DetuningMode::default() })
    }

    pub fn gaussian_approx(base: PlainGaussianParams<T>, a: T, delta0: T) -> Result<Self> {
        base.validate()?;
        check_delta(delta0)?;
        let r = RescalingParams::new(a, base.length)?;
        Ok(Self { variant: Variant::GaussianApprox(base, r), delta0, detuning_mode: DetuningMode::default() })
    }

    /// Builds a schedule of the given kind. `a` is ignored for [`ScheduleKind::Plain`].
    pub fn new(kind: ScheduleKind, base: PlainGaussianParams<T>, a: T, delta0: T) -> Result<Self> {
        match kind {
            ScheduleKind::Plain => Self::plain(base, delta0),
            ScheduleKind::TimeRescaled => Self::time_rescaled(base, a, delta0),
            ScheduleKind::GaussianApprox => Self::gaussian_approx(base, a, delta0),
        }
    }

    pub fn with_detuning_mode(mut self, mode: DetuningMode) -> Self {
        self.detuning_mode = mode;
        self
    }

    pub fn variant(&self) -> &Variant<T> {
        &self.variant
    }

    pub fn kind(&self) -> ScheduleKind {
        match self.variant {
            Variant::Plain(_) => ScheduleKind::Plain,
            Variant::TimeRescaled(..) => ScheduleKind::TimeRescaled,
            Variant::GaussianApprox(..) => ScheduleKind::GaussianApprox,
        }
    }

    pub fn base(&self) -> &PlainGaussianParams<T> {
        match &self.variant {
            Variant::Plain(b) | Variant::TimeRescaled(b, _) | Variant::GaussianApprox(b, _) => b,
        }
    }

    pub fn rescaling(&self) -> Option<&RescalingParams<T>> {
        match &self.variant {
            Variant::Plain(_) => None,
            Variant::TimeRescaled(_, r) | Variant::GaussianApprox(_, r) => Some(r),
        }
    }

    /// Contraction parameter; 1 for the plain schedule.
    pub fn contraction(&self) -> T {
        self.rescaling().map_or(T::one(), |r| r.a)
    }

    pub fn delta0(&self) -> T {
        self.delta0
    }

    pub fn detuning_mode(&self) -> DetuningMode {
        self.detuning_mode
    }

    /// Length of the propagation domain `[0, domain_length]`.
    pub fn domain_length(&self) -> T {
        match &self.variant {
            Variant::Plain(b) => b.length,
            Variant::TimeRescaled(_, r) | Variant::GaussianApprox(_, r) => r.contracted_length(),
        }
    }

    /// Copy of this schedule with κ₀ replaced.
    pub fn with_kappa0(&self, kappa0: T) -> Result<Self> {
        let mut out = *self;
        match &mut out.variant {
            Variant::Plain(b) | Variant::TimeRescaled(b, _) | Variant::GaussianApprox(b, _) => {
                b.kappa0 = kappa0;
                b.validate()?;
            }
        }
        Ok(out)
    }
}

fn check_delta<T: Real>(delta0: T) -> Result<()> {
    if delta0.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("delta", "must be finite"))
    }
}

/// Checks `z ∈ [0, hi]` up to a few ulps and clamps into the interval.
pub(crate) fn check_domain<T: Real>(z: T, hi: T) -> Result<T> {
    let slack = hi * T::boundary_slack();
    if z >= -slack && z <= hi + slack {
        Ok(z.max(T::zero()).min(hi))
    } else {
        Err(Error::Domain {
            z: z.to_f64().unwrap_or(f64::NAN),
            lo: 0.0,
            hi: hi.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Sinusoidal rescaling map `f(z) = a·z − (L/(2πa))(a−1)·sin(2πaz/L)`.
///
/// Maps `[0, L/a]` monotonically onto `[0, L]`.
pub fn rescaling_map<T: Real>(z: T, p: &RescalingParams<T>) -> Result<T> {
    let z = check_domain(z, p.contracted_length())?;
    Ok(rescaling_map_unchecked(z, p))
}

fn rescaling_map_unchecked<T: Real>(z: T, p: &RescalingParams<T>) -> T {
    let a = p.a;
    p.a * z - p.length / (T::TAU() * a) * (a - T::one()) * p.phase(z).sin()
}

/// Derivative `f'(z) = a − (a−1)·cos(2πaz/L)`; ranges over `[1, 2a−1]`.
pub fn rescaling_rate<T: Real>(z: T, p: &RescalingParams<T>) -> Result<T> {
    let z = check_domain(z, p.contracted_length())?;
    Ok(rescaling_rate_unchecked(z, p))
}

fn rescaling_rate_unchecked<T: Real>(z: T, p: &RescalingParams<T>) -> T {
    p.a - (p.a - T::one()) * p.phase(z).cos()
}

/// Coupling pair `(κ₁(z), κ₃(z))` in mm⁻¹.
pub fn coupling_pair<T: Real>(z: T, sched: &CouplingSchedule<T>) -> Result<(T, T)> {
    let z = check_domain(z, sched.domain_length())?;
    Ok(match &sched.variant {
        Variant::Plain(b) => b.plain_pair(z),
        Variant::TimeRescaled(b, r) => {
            let (k1, k3) = b.plain_pair(rescaling_map_unchecked(z, r));
            let rate = rescaling_rate_unchecked(z, r);
            (k1 * rate, k3 * rate)
        }
        Variant::GaussianApprox(b, r) => {
            let two = T::lit(2.0);
            let peak = b.kappa0 * (two * r.a - T::one());
            let mid = b.length / two;
            let x1 = (r.a * z - mid - b.d) / b.s;
            let x3 = (r.a * z - mid + b.d) / b.s;
            (peak * (-x1 * x1).exp(), peak * (-x3 * x3).exp())
        }
    })
}

/// Effective single-photon detuning on the middle diagonal.
pub fn detuning_at<T: Real>(z: T, sched: &CouplingSchedule<T>) -> Result<T> {
    let z = check_domain(z, sched.domain_length())?;
    Ok(match (&sched.variant, sched.detuning_mode) {
        (Variant::Plain(_), _) | (_, DetuningMode::Constant) => sched.delta0,
        (Variant::TimeRescaled(_, r) | Variant::GaussianApprox(_, r), DetuningMode::Rescaled) => {
            sched.delta0 * rescaling_rate_unchecked(z, r)
        }
    })
}

/// Mixing angle `θ = atan2(κ₁, κ₃)`, in `[0, π/2]` for non-negative couplings.
pub fn mixing_angle<T: Real>(kappa1: T, kappa3: T) -> Result<T> {
    if kappa1 == T::zero() && kappa3 == T::zero() {
        return Err(Error::UndefinedAngle);
    }
    Ok(kappa1.atan2(kappa3))
}

/// `κ = √(κ₁² + κ₃²)`.
pub fn rms_coupling<T: Real>(kappa1: T, kappa3: T) -> T {
    kappa1.hypot(kappa3)
}
