//! Finite-blocklength primitives for the AWGN channel.
//!
//! The packet error rate of an `n`-symbol codeword carrying `d` bits at SINR
//! `γ` follows the normal approximation
//!
//! ```text
//! ε = Q( sqrt(n / V(γ)) · (C(γ) − d/n) · ln 2 )
//! ```
//!
//! with `C(γ) = log2(1 + γ)` (bandwidth normalized to one) and the channel
//! dispersion `V(γ) = 1 − 1/(1 + γ)²`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_SQRT_PI, LN_2};

use thiserror::Error;

/// Smallest blocklength for which the normal approximation is used.
pub const MIN_BLOCKLENGTH: u32 = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FblError {
    #[error("argument must be finite, got {0}")]
    NonFinite(f64),
    #[error("SINR must be non-negative, got {0}")]
    NegativeSnr(f64),
    #[error("SINR must be strictly positive for this quantity")]
    ZeroSnr,
    #[error("blocklength {0} is below the minimum of {MIN_BLOCKLENGTH}")]
    BlocklengthTooShort(u32),
    #[error("payload of {bits} bits does not fit in [0, {n}]")]
    PayloadOutOfRange { bits: f64, n: u32 },
}

/// Linear signal-to-(interference-plus-)noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Snr(f64);

impl Snr {
    pub const ZERO: Snr = Snr(0.0);

    pub fn new(value: f64) -> Result<Self, FblError> {
        if !value.is_finite() {
            return Err(FblError::NonFinite(value));
        }
        if value < 0.0 {
            return Err(FblError::NegativeSnr(value));
        }
        Ok(Snr(value))
    }

    pub fn from_db(db: f64) -> Result<Self, FblError> {
        Snr::new(crate::units::db_to_linear(db))
    }

    /// `-inf` for a zero SNR.
    pub fn to_db(self) -> f64 {
        crate::units::linear_to_db(self.0)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// An `n`-symbol codeword carrying `bits` payload bits.
///
/// `bits` is real-valued so that the relaxed key-length subproblem can
/// evaluate non-integral payloads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockCode {
    n: u32,
    bits: f64,
}

impl BlockCode {
    pub fn new(n: u32, bits: f64) -> Result<Self, FblError> {
        if n < MIN_BLOCKLENGTH {
            return Err(FblError::BlocklengthTooShort(n));
        }
        if !bits.is_finite() {
            return Err(FblError::NonFinite(bits));
        }
        if bits < 0.0 || bits > f64::from(n) {
            return Err(FblError::PayloadOutOfRange { bits, n });
        }
        Ok(BlockCode { n, bits })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> f64 {
        self.bits
    }

    /// Coding rate `d/n` in bits per symbol.
    pub fn rate(&self) -> f64 {
        self.bits / f64::from(self.n)
    }
}

/// Gaussian tail probability `Q(x) = erfc(x/√2)/2`.
pub fn q_function(x: f64) -> Result<f64, FblError> {
    if !x.is_finite() {
        return Err(FblError::NonFinite(x));
    }
    Ok(gaussian_tail(x))
}

/// Low part of `1/√2`: `FRAC_1_SQRT_2 + FRAC_1_SQRT_2_LO` is exact to ~1e-33.
const FRAC_1_SQRT_2_LO: f64 = -4.833_646_656_726_457e-17;

fn gaussian_tail(x: f64) -> f64 {
    // Rounding x/√2 costs a relative error of about x²·2⁻⁵³ in the far tail,
    // so the rounding residual b is fed back through erfc' to first order.
    let a = x * FRAC_1_SQRT_2;
    let b = x.mul_add(FRAC_1_SQRT_2, -a) + x * FRAC_1_SQRT_2_LO;
    0.5 * (libm::erfc(a) - b * FRAC_2_SQRT_PI * (-a * a).exp())
}

/// Shannon capacity in bits per channel use.
pub fn capacity(snr: Snr) -> f64 {
    snr.0.ln_1p() / LN_2
}

/// Channel dispersion of the real AWGN channel.
pub fn dispersion(snr: Snr) -> f64 {
    // γ(γ+2)/(1+γ)² is the same quantity without the cancellation near γ = 0.
    let g = snr.0;
    g * (g + 2.0) / ((1.0 + g) * (1.0 + g))
}

/// Normalized gap between capacity and coding rate,
/// `ω = sqrt(n/V) · (C − d/n)`. The error probability is `Q(ω · ln 2)`.
pub fn omega(snr: Snr, code: &BlockCode) -> Result<f64, FblError> {
    if snr.0 == 0.0 {
        return Err(FblError::ZeroSnr);
    }
    Ok(rate_gap(snr, code))
}

fn rate_gap(snr: Snr, code: &BlockCode) -> f64 {
    (f64::from(code.n) / dispersion(snr)).sqrt() * (capacity(snr) - code.rate())
}

/// Packet error probability in the finite-blocklength regime.
///
/// At zero SNR the dispersion vanishes; the error is then 1 for a non-empty
/// payload and 0 for an empty one.
pub fn fbl_error(snr: Snr, code: &BlockCode) -> f64 {
    if snr.0 == 0.0 {
        return if code.bits > 0.0 { 1.0 } else { 0.0 };
    }
    gaussian_tail(rate_gap(snr, code) * LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snr(v: f64) -> Snr {
        Snr::new(v).unwrap()
    }

    #[test]
    fn q_anchors() {
        assert_eq!(q_function(0.0).unwrap(), 0.5);
        let tail = q_function(40.0).unwrap();
        assert!((0.0..1e-300).contains(&tail));
        assert!(matches!(q_function(f64::NAN), Err(FblError::NonFinite(_))));
        assert!(q_function(f64::INFINITY).is_err());
    }

    #[test]
    fn capacity_anchors() {
        assert_eq!(capacity(Snr::ZERO), 0.0);
        assert!((capacity(snr(1.0)) - 1.0).abs() < 1e-15);
        assert!((capacity(snr(3.0)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dispersion_anchors() {
        assert_eq!(dispersion(Snr::ZERO), 0.0);
        assert!((dispersion(snr(1.0)) - 0.75).abs() < 1e-15);
        assert!((dispersion(snr(1e9)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn negative_snr_rejected() {
        assert!(matches!(Snr::new(-0.1), Err(FblError::NegativeSnr(_))));
        assert!(Snr::new(f64::INFINITY).is_err());
    }

    #[test]
    fn block_code_validation() {
        assert!(matches!(
            BlockCode::new(5, 1.0),
            Err(FblError::BlocklengthTooShort(5))
        ));
        assert!(BlockCode::new(64, -1.0).is_err());
        assert!(BlockCode::new(64, 64.5).is_err());
        assert!(BlockCode::new(64, 30.25).is_ok());
    }

    #[test]
    fn error_is_half_at_capacity() {
        let code = BlockCode::new(64, 64.0).unwrap();
        assert!((fbl_error(snr(1.0), &code) - 0.5).abs() <= 1e-15);
        assert_eq!(omega(snr(1.0), &code).unwrap(), 0.0);
    }

    #[test]
    fn zero_snr_conventions() {
        let empty = BlockCode::new(64, 0.0).unwrap();
        let full = BlockCode::new(64, 3.0).unwrap();
        assert_eq!(fbl_error(Snr::ZERO, &empty), 0.0);
        assert_eq!(fbl_error(Snr::ZERO, &full), 1.0);
        assert_eq!(omega(Snr::ZERO, &full), Err(FblError::ZeroSnr));
    }

    #[test]
    fn omega_sign_follows_rate_gap() {
        let low_rate = BlockCode::new(64, 16.0).unwrap();
        let high_rate = BlockCode::new(64, 60.0).unwrap();
        assert!(omega(snr(4.5), &low_rate).unwrap() > 0.0);
        assert!(omega(snr(0.1), &high_rate).unwrap() < 0.0);
    }

    #[test]
    fn db_round_trip() {
        for &g in &[1e-6, 0.1, 1.0, 3.5, 1e4] {
            let back = Snr::from_db(snr(g).to_db()).unwrap().value();
            assert!(((back - g) / g).abs() < 1e-12);
        }
    }
}
