//! Link-level model of the two-packet superposition.
//!
//! The transmitter superposes a ciphered message packet (power `p_m`) and a
//! key packet (power `p_k < p_m`). Each receiver runs successive interference
//! cancellation: the message is decoded first with the key as interference,
//! then the key is decoded interference-free. If the message fails, the
//! receiver may still try the key directly under message interference.
//!
//! A receiver that recovers both packets gets utility +1, one that recovers
//! only the message deciphers with a wrong key and is deceived (utility −1),
//! and one that loses the message gets 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fbl::{self, BlockCode, FblError, Snr, MIN_BLOCKLENGTH};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkError {
    #[error(transparent)]
    Fbl(#[from] FblError),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("{name} must be non-negative and finite, got {value}")]
    NegativePower { name: &'static str, value: f64 },
    #[error("message power {p_m} is outside [0, {p_sigma}]")]
    PowerOutOfBudget { p_m: f64, p_sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Receiver {
    Bob,
    Eve,
}

/// Which composite key-error probability feeds utilities and constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMode {
    /// `(1 − ε_M)·ε_K + ε_M·ε'_K`.
    Exact,
    /// `min(1, ε_K + ε_M)`: direct key decoding assumed to fail and the
    /// second-order term dropped.
    #[default]
    Approx,
}

/// Error-probability thresholds of the feasibility constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Upper bound on Bob's message error.
    pub bob_message: f64,
    /// Upper bound on Eve's message error.
    pub eve_message: f64,
    /// Upper bound on Bob's key error.
    pub bob_key: f64,
    /// Lower bound on Eve's key error.
    pub eve_key: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            bob_message: 0.5,
            eve_message: 0.5,
            bob_key: 0.5,
            eve_key: 0.5,
        }
    }
}

/// Fixed physics of one transmission. Gains and powers are linear (mW).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub z_bob: f64,
    pub z_eve: f64,
    pub sigma2: f64,
    pub n: u32,
    pub d_m: u32,
    pub p_sigma: f64,
    pub thresholds: Thresholds,
}

impl Default for Scenario {
    /// Unit noise and Bob gain, `n = 64`, all thresholds 0.5, and the
    /// `z_E = −10 dB`, `P_Σ = 10 mW`, `d_M = 16` operating point.
    fn default() -> Self {
        Scenario {
            z_bob: 1.0,
            z_eve: 0.1,
            sigma2: 1.0,
            n: 64,
            d_m: 16,
            p_sigma: 10.0,
            thresholds: Thresholds::default(),
        }
    }
}

impl Scenario {
    /// Every violated invariant, in a fixed order. Empty means valid.
    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.z_bob) {
            out.push(format!("z_bob must be positive and finite, got {}", self.z_bob));
        }
        if !positive(self.z_eve) {
            out.push(format!("z_eve must be positive and finite, got {}", self.z_eve));
        }
        if self.z_eve > self.z_bob {
            out.push(format!(
                "z_eve ({}) exceeds z_bob ({}): secrecy requires z_bob >= z_eve",
                self.z_eve, self.z_bob
            ));
        }
        if !positive(self.sigma2) {
            out.push(format!("sigma2 must be positive and finite, got {}", self.sigma2));
        }
        if self.n < MIN_BLOCKLENGTH {
            out.push(format!("n >= {MIN_BLOCKLENGTH} required, got {}", self.n));
        }
        if self.d_m < 1 || self.d_m > self.n {
            out.push(format!("d_m must lie in [1, n = {}], got {}", self.n, self.d_m));
        }
        if !positive(self.p_sigma) {
            out.push(format!("p_sigma must be positive and finite, got {}", self.p_sigma));
        }
        let th = &self.thresholds;
        for (name, v) in [
            ("bob_message", th.bob_message),
            ("eve_message", th.eve_message),
            ("bob_key", th.bob_key),
            ("eve_key", th.eve_key),
        ] {
            if !(v > 0.0 && v < 1.0) {
                out.push(format!("threshold {name} must lie in (0, 1), got {v}"));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), LinkError> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(LinkError::Scenario(issues.join("; ")))
        }
    }

    /// Key thresholds under which the utility is concave in the key length.
    pub fn key_thresholds_support_concavity(&self) -> bool {
        self.thresholds.bob_key <= 0.5 && self.thresholds.eve_key >= 0.5
    }

    pub fn gain(&self, receiver: Receiver) -> f64 {
        match receiver {
            Receiver::Bob => self.z_bob,
            Receiver::Eve => self.z_eve,
        }
    }

    /// Strategy spending the whole budget: `p_k = p_sigma − p_m`.
    pub fn full_power(&self, d_k: f64, p_m: f64) -> Strategy {
        Strategy {
            d_k,
            p_m,
            p_k: self.p_sigma - p_m,
        }
    }
}

/// Decision variables: key length in bits and the two packet powers (mW).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    pub d_k: f64,
    pub p_m: f64,
    pub p_k: f64,
}

impl Strategy {
    fn check_powers(&self) -> Result<(), LinkError> {
        for (name, value) in [("p_m", self.p_m), ("p_k", self.p_k)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(LinkError::NegativePower { name, value });
            }
        }
        Ok(())
    }
}

/// Message SINR with the key packet as interference.
pub fn sinr_message(z: f64, s: &Strategy, sigma2: f64) -> Result<Snr, FblError> {
    Snr::new(z * s.p_m / (z * s.p_k + sigma2))
}

/// Key SNR once the message has been cancelled.
pub fn snr_key_after_sic(z: f64, s: &Strategy, sigma2: f64) -> Result<Snr, FblError> {
    Snr::new(z * s.p_k / sigma2)
}

/// Key SINR when decoding directly under message interference.
pub fn sinr_key_direct(z: f64, s: &Strategy, sigma2: f64) -> Result<Snr, FblError> {
    Snr::new(z * s.p_k / (z * s.p_m + sigma2))
}

/// Per-receiver SINRs and packet error probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkReport {
    pub receiver: Receiver,
    pub gamma_m: Snr,
    pub gamma_k: Snr,
    pub gamma_k_direct: Snr,
    /// Message error.
    pub eps_m: f64,
    /// Key error after cancelling the message.
    pub eps_k_sic: f64,
    /// Key error when decoding directly under message interference.
    pub eps_k_direct: f64,
    pub eps_k_exact: f64,
    /// Clamped to `[0, 1]`.
    pub eps_k_approx: f64,
}

impl LinkReport {
    pub fn eps_k(&self, mode: ErrorMode) -> f64 {
        match mode {
            ErrorMode::Exact => self.eps_k_exact,
            ErrorMode::Approx => self.eps_k_approx,
        }
    }

    /// `(1 − ε_M)(1 − 2ε_K)`.
    pub fn expected_utility(&self, mode: ErrorMode) -> f64 {
        (1.0 - self.eps_m) * (1.0 - 2.0 * self.eps_k(mode))
    }

    /// Probability that the payload is not recovered.
    pub fn payload_error(&self, mode: ErrorMode) -> f64 {
        1.0 - (1.0 - self.eps_m) * (1.0 - self.eps_k(mode))
    }

    /// Probability of accepting a falsely deciphered payload.
    pub fn deception_probability(&self, mode: ErrorMode) -> f64 {
        (1.0 - self.eps_m) * self.eps_k(mode)
    }
}

/// Evaluates the decoding chain of one receiver.
///
/// A zero-length key means no key packet: every key error is 0.
pub fn link_report(
    receiver: Receiver,
    scenario: &Scenario,
    s: &Strategy,
) -> Result<LinkReport, LinkError> {
    s.check_powers()?;
    let z = scenario.gain(receiver);
    let sigma2 = scenario.sigma2;
    let gamma_m = sinr_message(z, s, sigma2)?;
    let gamma_k = snr_key_after_sic(z, s, sigma2)?;
    let gamma_k_direct = sinr_key_direct(z, s, sigma2)?;

    let message = BlockCode::new(scenario.n, f64::from(scenario.d_m))?;
    let eps_m = fbl::fbl_error(gamma_m, &message);

    let (eps_k_sic, eps_k_direct, eps_k_exact, eps_k_approx) = if s.d_k == 0.0 {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        let key = BlockCode::new(scenario.n, s.d_k)?;
        let sic = fbl::fbl_error(gamma_k, &key);
        let direct = fbl::fbl_error(gamma_k_direct, &key);
        let exact = (1.0 - eps_m) * sic + eps_m * direct;
        (sic, direct, exact.clamp(0.0, 1.0), (sic + eps_m).min(1.0))
    };

    Ok(LinkReport {
        receiver,
        gamma_m,
        gamma_k,
        gamma_k_direct,
        eps_m,
        eps_k_sic,
        eps_k_direct,
        eps_k_exact,
        eps_k_approx,
    })
}

/// `E{U_i} = (1 − ε_M)(1 − 2ε_K)` for one receiver.
pub fn expected_utility(
    receiver: Receiver,
    scenario: &Scenario,
    s: &Strategy,
    mode: ErrorMode,
) -> Result<f64, LinkError> {
    Ok(link_report(receiver, scenario, s)?.expected_utility(mode))
}

/// `E{U_Bob} − E{U_Eve}` at an arbitrary (not necessarily full-power) strategy.
pub fn system_utility(scenario: &Scenario, s: &Strategy, mode: ErrorMode) -> Result<f64, LinkError> {
    let bob = link_report(Receiver::Bob, scenario, s)?;
    let eve = link_report(Receiver::Eve, scenario, s)?;
    Ok(bob.expected_utility(mode) - eve.expected_utility(mode))
}

/// System utility under full-power transmission, `p_k = p_sigma − p_m`.
pub fn u_fp(scenario: &Scenario, d_k: f64, p_m: f64, mode: ErrorMode) -> Result<f64, LinkError> {
    if !(0.0..=scenario.p_sigma).contains(&p_m) {
        return Err(LinkError::PowerOutOfBudget {
            p_m,
            p_sigma: scenario.p_sigma,
        });
    }
    system_utility(scenario, &scenario.full_power(d_k, p_m), mode)
}

/// Secure reliability and effective deception rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Bob recovers the payload while Eve does not.
    pub r_s: f64,
    /// Eve is deceived while Bob is not.
    pub r_d: f64,
}

fn metrics_from(bob: &LinkReport, eve: &LinkReport, mode: ErrorMode) -> Metrics {
    Metrics {
        r_s: (1.0 - bob.payload_error(mode)) * eve.payload_error(mode),
        r_d: (1.0 - bob.deception_probability(mode)) * eve.deception_probability(mode),
    }
}

pub fn metrics(scenario: &Scenario, s: &Strategy, mode: ErrorMode) -> Result<Metrics, LinkError> {
    let bob = link_report(Receiver::Bob, scenario, s)?;
    let eve = link_report(Receiver::Eve, scenario, s)?;
    Ok(metrics_from(&bob, &eve, mode))
}

/// Pass/fail state of every feasibility constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintFlags {
    pub message_power_nonneg: bool,
    pub key_power_nonneg: bool,
    pub power_budget: bool,
    pub key_length: bool,
    pub bob_message: bool,
    pub eve_message: bool,
    pub bob_key: bool,
    pub eve_key: bool,
    /// `p_m >= p_k`: closure of the superposition ordering.
    pub nom_ordering: bool,
}

impl ConstraintFlags {
    pub fn feasible(&self) -> bool {
        self.message_power_nonneg
            && self.key_power_nonneg
            && self.power_budget
            && self.key_length
            && self.bob_message
            && self.eve_message
            && self.bob_key
            && self.eve_key
            && self.nom_ordering
    }

    /// Names of the failing constraints.
    pub fn violations(&self) -> Vec<&'static str> {
        [
            ("message_power_nonneg", self.message_power_nonneg),
            ("key_power_nonneg", self.key_power_nonneg),
            ("power_budget", self.power_budget),
            ("key_length", self.key_length),
            ("bob_message", self.bob_message),
            ("eve_message", self.eve_message),
            ("bob_key", self.bob_key),
            ("eve_key", self.eve_key),
            ("nom_ordering", self.nom_ordering),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

/// Relative slack on the power budget so that `p_m + (p_sigma − p_m)`
/// rounding does not reject full-power strategies.
const BUDGET_SLACK: f64 = 1e-12;

/// Constraint check with the approximate key error, as used by the optimizer.
pub fn check_constraints(scenario: &Scenario, s: &Strategy) -> ConstraintFlags {
    check_constraints_with(scenario, s, ErrorMode::Approx)
}

pub fn check_constraints_with(scenario: &Scenario, s: &Strategy, mode: ErrorMode) -> ConstraintFlags {
    let n = f64::from(scenario.n);
    let th = &scenario.thresholds;
    let mut flags = ConstraintFlags {
        message_power_nonneg: s.p_m >= 0.0,
        key_power_nonneg: s.p_k >= 0.0,
        power_budget: s.p_m + s.p_k <= scenario.p_sigma * (1.0 + BUDGET_SLACK),
        key_length: (0.0..=n).contains(&s.d_k),
        bob_message: false,
        eve_message: false,
        bob_key: false,
        eve_key: false,
        nom_ordering: s.p_m >= s.p_k,
    };
    if let (Ok(bob), Ok(eve)) = (
        link_report(Receiver::Bob, scenario, s),
        link_report(Receiver::Eve, scenario, s),
    ) {
        flags.bob_message = bob.eps_m <= th.bob_message;
        flags.eve_message = eve.eps_m <= th.eve_message;
        flags.bob_key = bob.eps_k(mode) <= th.bob_key;
        flags.eve_key = eve.eps_k(mode) >= th.eve_key;
    }
    flags
}

/// Both receivers' utilities, the system utility, the metrics and the
/// constraint state of one strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityReport {
    pub u_bob: f64,
    pub u_eve: f64,
    pub u_sigma: f64,
    pub r_s: f64,
    pub r_d: f64,
    pub constraint_flags: ConstraintFlags,
}

pub fn utility_report(
    scenario: &Scenario,
    s: &Strategy,
    mode: ErrorMode,
) -> Result<UtilityReport, LinkError> {
    let bob = link_report(Receiver::Bob, scenario, s)?;
    let eve = link_report(Receiver::Eve, scenario, s)?;
    let u_bob = bob.expected_utility(mode);
    let u_eve = eve.expected_utility(mode);
    let Metrics { r_s, r_d } = metrics_from(&bob, &eve, mode);
    Ok(UtilityReport {
        u_bob,
        u_eve,
        u_sigma: u_bob - u_eve,
        r_s,
        r_d,
        constraint_flags: check_constraints_with(scenario, s, mode),
    })
}
