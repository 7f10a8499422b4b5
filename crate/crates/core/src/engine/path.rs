//! Seeded sampling of whole paths.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::step::{delta_kernel, exact_digit, float_digit};
use super::system::{ArithmeticMode, OppenheimSystem, SystemKind};
use super::{luroth, EngineError};
use crate::dist::DistributionSpec;
use crate::rng::PathRng;

const TWO_POW_53: f64 = 9007199254740992.0;

/// A digit value: exact integer or float-mode real approximation.
#[derive(Debug, Clone, PartialEq)]
pub enum Digit {
    Int(BigUint),
    Real(f64),
}

impl Digit {
    pub fn to_f64(&self) -> f64 {
        match self {
            Digit::Int(v) => v.to_f64().unwrap_or(f64::INFINITY),
            Digit::Real(v) => *v,
        }
    }
}

impl core::fmt::Display for Digit {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Digit::Int(v) => write!(f, "{v}"),
            Digit::Real(v) => write!(f, "{v}"),
        }
    }
}

// Exact digits serialize as decimal strings: they routinely exceed every
// integer width a reader might use.
impl Serialize for Digit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Digit::Int(v) => serializer.collect_str(v),
            Digit::Real(v) => serializer.serialize_f64(*v),
        }
    }
}

/// Full record of one chain step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitStep {
    pub h_prev: Digit,
    pub h_next: Digit,
    pub q: f64,
    /// Open left end of the selected cell (float diagnostic).
    pub alpha_end: f64,
    /// Closed right end of the selected cell (float diagnostic).
    pub beta_end: f64,
    pub w: f64,
    /// 1 / beta_end.
    pub ratio: f64,
}

/// One simulated realization of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub system_id: String,
    pub seed: u64,
    /// Digits B_1 ..= B_{n+1} (one more than the number of steps).
    pub digits: Vec<Digit>,
    /// Q_1 ..= Q_n.
    pub q_values: Vec<f64>,
    /// R_1 ..= R_n.
    pub ratios: Vec<f64>,
    pub steps: Vec<DigitStep>,
    /// Float mode passed 2^53, or a step otherwise left exact integers.
    pub saturated: bool,
}

impl Serialize for SamplePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SamplePath", 6)?;
        st.serialize_field("system_id", &self.system_id)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("digits", &self.digits)?;
        st.serialize_field("q_values", &self.q_values)?;
        st.serialize_field("ratios", &self.ratios)?;
        st.serialize_field("saturated", &self.saturated)?;
        st.end()
    }
}

/// Sampling failure that keeps what was simulated before the failing step.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct PathFailure {
    #[source]
    pub error: EngineError,
    pub partial: SamplePath,
}

/// Source of the per-step draws `w`.
///
/// The seeded source pushes a uniform variate through the generalized
/// inverse of `F`; the injected source replays a fixed stream (the unit
/// test hook: examples become exactly assertable).
pub trait WSource {
    fn next_w(&mut self, dist: &DistributionSpec) -> Result<f64, EngineError>;
}

pub struct RngW(pub PathRng);

impl WSource for RngW {
    fn next_w(&mut self, dist: &DistributionSpec) -> Result<f64, EngineError> {
        Ok(dist.quantile(self.0.next_u01()))
    }
}

pub struct InjectedW<'a> {
    values: &'a [f64],
    pos: usize,
}

impl<'a> InjectedW<'a> {
    pub fn new(values: &'a [f64]) -> Self {
        Self { values, pos: 0 }
    }
}

impl WSource for InjectedW<'_> {
    fn next_w(&mut self, _dist: &DistributionSpec) -> Result<f64, EngineError> {
        let w = *self
            .values
            .get(self.pos)
            .ok_or(EngineError::WStreamExhausted)?;
        self.pos += 1;
        if !(w > 0.0 && w <= 1.0) {
            return Err(EngineError::BadW(w));
        }
        Ok(w)
    }
}

enum DigitState {
    Exact(BigUint),
    Float(f64),
}

impl DigitState {
    fn snapshot(&self) -> Digit {
        match self {
            DigitState::Exact(v) => Digit::Int(v.clone()),
            DigitState::Float(v) => Digit::Real(*v),
        }
    }
}

struct RawStep {
    q: f64,
    alpha: f64,
    beta: f64,
    ratio: f64,
}

struct Stepper<'s> {
    system: &'s OppenheimSystem,
    state: DigitState,
    saturated: bool,
    step_no: u64,
}

impl<'s> Stepper<'s> {
    fn new(system: &'s OppenheimSystem) -> Result<Self, EngineError> {
        system.validate()?;
        let state = match system.mode {
            ArithmeticMode::Exact => DigitState::Exact(BigUint::from(system.initial_digit)),
            ArithmeticMode::Float => DigitState::Float(system.initial_digit as f64),
        };
        Ok(Stepper {
            system,
            state,
            saturated: false,
            step_no: 0,
        })
    }

    fn advance(&mut self, w: f64) -> Result<RawStep, EngineError> {
        if !(w > 0.0 && w <= 1.0) {
            return Err(EngineError::BadW(w));
        }
        self.step_no += 1;
        let q = self.system.q.value();
        let (phi_f, next_f, exact) = match &mut self.state {
            DigitState::Exact(digit) => {
                let phi = self.system.phi.apply_big(digit);
                let next = exact_digit(&phi, q, w, self.system.digit_cap, self.step_no)?;
                let phi_f = phi.to_f64().unwrap_or(f64::INFINITY);
                let next_f = next.to_f64().unwrap_or(f64::INFINITY);
                *digit = next;
                (phi_f, next_f, true)
            }
            DigitState::Float(digit) => {
                let phi = self.system.phi.apply_f64(*digit);
                let next = float_digit(phi, q, w)
                    .ok_or(EngineError::NumericOverflow { step: self.step_no })?;
                if next >= TWO_POW_53 {
                    self.saturated = true;
                }
                *digit = next;
                (phi, next, false)
            }
        };
        let mut alpha = delta_kernel(phi_f, next_f + 1.0, q);
        let mut beta = delta_kernel(phi_f, next_f, q);
        if exact {
            // exact integer arithmetic guarantees the real bracket
            // alpha < w <= beta; round the float records toward it when the
            // digit conversions lose the last ulp
            beta = beta.max(w);
            if alpha >= w {
                alpha = w.next_down();
            }
        }
        let ratio = 1.0 / beta;
        if !ratio.is_finite() {
            return Err(EngineError::NumericOverflow { step: self.step_no });
        }
        Ok(RawStep {
            q,
            alpha,
            beta,
            ratio,
        })
    }
}

// the error variant intentionally carries the partial path for auditing
#[allow(clippy::result_large_err)]
fn collect_path<W: WSource>(
    system: &OppenheimSystem,
    n: u64,
    seed: u64,
    source: &mut W,
) -> Result<SamplePath, PathFailure> {
    let fail = |error: EngineError, partial: SamplePath| PathFailure { error, partial };
    let empty = SamplePath {
        system_id: system.id.clone(),
        seed,
        digits: Vec::new(),
        q_values: Vec::new(),
        ratios: Vec::new(),
        steps: Vec::new(),
        saturated: false,
    };
    if n == 0 {
        return Err(fail(EngineError::EmptyPath, empty));
    }
    let mut stepper = match Stepper::new(system) {
        Ok(s) => s,
        Err(e) => return Err(fail(e, empty)),
    };
    let mut path = empty;
    path.digits.push(stepper.state.snapshot());
    for _ in 0..n {
        let step_result = source
            .next_w(&system.dist)
            .and_then(|w| stepper.advance(w).map(|raw| (w, raw)));
        let (w, raw) = match step_result {
            Ok(v) => v,
            Err(e) => {
                path.saturated = matches!(e, EngineError::DigitCapExceeded { .. });
                return Err(fail(e, path));
            }
        };
        let h_prev = path.digits[path.digits.len() - 1].clone();
        let h_next = stepper.state.snapshot();
        path.digits.push(h_next.clone());
        path.q_values.push(raw.q);
        path.ratios.push(raw.ratio);
        path.steps.push(DigitStep {
            h_prev,
            h_next,
            q: raw.q,
            alpha_end: raw.alpha,
            beta_end: raw.beta,
            w,
            ratio: raw.ratio,
        });
    }
    path.saturated = stepper.saturated;
    Ok(path)
}

/// Simulates `n` steps from the system's initial digit.
///
/// Bit-for-bit reproducible: the same `(system, n, seed)` always produces
/// the same path.
#[allow(clippy::result_large_err)]
pub fn sample_path(system: &OppenheimSystem, n: u64, seed: u64) -> Result<SamplePath, PathFailure> {
    let mut source = RngW(PathRng::from_seed(seed));
    collect_path(system, n, seed, &mut source)
}

/// Runs the chain against an injected w-stream (length = number of steps).
pub fn run_injected(system: &OppenheimSystem, ws: &[f64]) -> Result<Vec<DigitStep>, EngineError> {
    let mut source = InjectedW::new(ws);
    collect_path(system, ws.len() as u64, 0, &mut source)
        .map(|p| p.steps)
        .map_err(|f| f.error)
}

/// Ratios only, without per-step records.
///
/// For chains this walks the same stepper as [`sample_path`]; for the iid
/// Lüroth preset it draws straight from the closed-form marginal.
pub fn sample_ratios(kind: &SystemKind, n: u64, seed: u64) -> Result<Vec<f64>, EngineError> {
    if n == 0 {
        return Err(EngineError::EmptyPath);
    }
    match kind {
        SystemKind::Chain(system) => {
            let mut stepper = Stepper::new(system)?;
            let mut source = RngW(PathRng::from_seed(seed));
            let mut ratios = Vec::with_capacity(n as usize);
            for _ in 0..n {
                let w = source.next_w(&system.dist)?;
                ratios.push(stepper.advance(w)?.ratio);
            }
            Ok(ratios)
        }
        SystemKind::LurothIid => Ok(luroth::sample_luroth_iid(n, seed)),
    }
}
