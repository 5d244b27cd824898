//! Domain types shared by every computation in this crate.
//!
//! Four validated value types carry all the state:
//!
//! - [`RateProfile`]: per-receiver source rates `R_1 >= ... >= R_T` in bits
//!   per source symbol (receiver 1 demands the most fidelity, receiver T is
//!   the most degraded).
//! - [`CapacityProfile`]: per-receiver point-to-point capacities
//!   `C_1 >= ... >= C_T` in bits per channel use.
//! - [`AwgnBroadcast`]: transmit power `P` and ordered noise powers
//!   `N_1 <= ... <= N_T` describing a degraded Gaussian broadcast channel.
//! - [`PowerAllocation`]: cumulative power fractions
//!   `0 = alpha_0 <= ... <= alpha_T <= 1` splitting `P` between layered
//!   messages; message `t` gets the fraction `alpha_t - alpha_{t-1}`.
//!
//! All information quantities are in bits, i.e. capacities are
//! `log2(1 + snr)`. Types are immutable after construction and every
//! function is pure, so values can be shared across threads freely.
//!
//! Equal adjacent entries (`R_t = R_{t+1}`, `N_t = N_{t+1}`) are legal and
//! simply produce zero-rate messages or zero power increments. Validation
//! reports the first offending index and never clamps silently.

use thiserror::Error;

/// Validation and shape errors for the domain types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be non-empty")]
    Empty { what: &'static str },
    #[error("{what} must be finite at index {index}")]
    NotFinite { what: &'static str, index: usize },
    #[error("{what} must be positive at index {index} (got {value})")]
    NotPositive {
        what: &'static str,
        index: usize,
        value: f64,
    },
    #[error("{what} not non-increasing at index {index}")]
    NotNonIncreasing { what: &'static str, index: usize },
    #[error("{what} not non-decreasing at index {index}")]
    NotNonDecreasing { what: &'static str, index: usize },
    #[error("{what} must be a positive finite number (got {value})")]
    BadScalar { what: &'static str, value: f64 },
    #[error(
        "distortion must satisfy 0 < distortion <= variance \
         (got distortion {distortion}, variance {variance})"
    )]
    BadDistortion { distortion: f64, variance: f64 },
    #[error("receiver count must be at least 1 (got {got})")]
    BadReceiverCount { got: usize },
    #[error("two-degree-of-freedom search requires at least 2 receivers (got {got})")]
    NeedsTwoReceivers { got: usize },
    #[error("rate range requires 0 < r_min <= r_max (got r_min {r_min}, r_max {r_max})")]
    BadRange { r_min: f64, r_max: f64 },
    #[error("{what} must be at least 1 (got {value})")]
    RatioBelowOne { what: &'static str, value: f64 },
    #[error("snr must be non-negative (got {got})")]
    NegativeSnr { got: f64 },
    #[error("length mismatch: {left_what} has {left} entries, {right_what} has {right}")]
    LengthMismatch {
        left_what: &'static str,
        left: usize,
        right_what: &'static str,
        right: usize,
    },
    #[error("power allocation must start at 0 (got {got})")]
    AllocStart { got: f64 },
    #[error("power allocation not non-decreasing at index {index}")]
    AllocDecreasing { index: usize },
    #[error("power allocation exceeds the power budget (alpha_T = {got})")]
    AllocOverflow { got: f64 },
    #[error("message rates must be non-negative at index {index} (got {value})")]
    NegativeMessageRate { index: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

fn validate_positive_list(what: &'static str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Empty { what });
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NotFinite { what, index });
        }
        if value <= 0.0 {
            return Err(Error::NotPositive { what, index, value });
        }
    }
    Ok(())
}

fn digest_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    format!("[{}]", parts.join(", "))
}

// ---------------------------------------------------------------------------
// RateProfile
// ---------------------------------------------------------------------------

/// Non-increasing per-receiver source rates, bits per source symbol.
///
/// The implicit terminal value `R_{T+1} = 0` is used wherever a sum over
/// message increments `R_t - R_{t+1}` is taken; see [`RateProfile::increments`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    rates: Vec<f64>,
}

impl RateProfile {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        validate_positive_list("rates", &rates)?;
        for index in 1..rates.len() {
            if rates[index] > rates[index - 1] {
                return Err(Error::NotNonIncreasing {
                    what: "rates",
                    index,
                });
            }
        }
        Ok(Self { rates })
    }

    pub fn receiver_count(&self) -> usize {
        self.rates.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.rates
    }

    /// Largest demand, `R_1`.
    pub fn max_rate(&self) -> f64 {
        self.rates[0]
    }

    /// Smallest demand, `R_T`.
    pub fn min_rate(&self) -> f64 {
        *self.rates.last().unwrap()
    }

    /// Message increments `R_t - R_{t+1}` with the terminal `R_{T+1} = 0`,
    /// so the last entry is `R_T` itself. Always non-negative.
    pub fn increments(&self) -> Vec<f64> {
        let t = self.rates.len();
        let mut out = Vec::with_capacity(t);
        for i in 0..t - 1 {
            out.push(self.rates[i] - self.rates[i + 1]);
        }
        out.push(self.rates[t - 1]);
        out
    }

    pub fn digest(&self) -> String {
        format!("rates={}", digest_list(&self.rates))
    }
}

// ---------------------------------------------------------------------------
// CapacityProfile
// ---------------------------------------------------------------------------

/// Non-increasing per-receiver point-to-point capacities, bits per channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityProfile {
    capacities: Vec<f64>,
}

impl CapacityProfile {
    pub fn new(capacities: Vec<f64>) -> Result<Self> {
        validate_positive_list("capacities", &capacities)?;
        for index in 1..capacities.len() {
            if capacities[index] > capacities[index - 1] {
                return Err(Error::NotNonIncreasing {
                    what: "capacities",
                    index,
                });
            }
        }
        Ok(Self { capacities })
    }

    pub fn receiver_count(&self) -> usize {
        self.capacities.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.capacities
    }

    pub fn max_capacity(&self) -> f64 {
        self.capacities[0]
    }

    pub fn min_capacity(&self) -> f64 {
        *self.capacities.last().unwrap()
    }

    pub fn digest(&self) -> String {
        format!("capacities={}", digest_list(&self.capacities))
    }
}

// ---------------------------------------------------------------------------
// AwgnBroadcast
// ---------------------------------------------------------------------------

/// Degraded Gaussian broadcast channel: one transmit power, ordered noises.
///
/// Receiver T sees the largest noise power and is the most degraded; the
/// per-receiver snr `P / N_t` is therefore non-increasing in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AwgnBroadcast {
    power: f64,
    noises: Vec<f64>,
}

impl AwgnBroadcast {
    pub fn new(power: f64, noises: Vec<f64>) -> Result<Self> {
        if !power.is_finite() || power <= 0.0 {
            return Err(Error::BadScalar {
                what: "power",
                value: power,
            });
        }
        validate_positive_list("noises", &noises)?;
        for index in 1..noises.len() {
            if noises[index] < noises[index - 1] {
                return Err(Error::NotNonDecreasing {
                    what: "noises",
                    index,
                });
            }
        }
        Ok(Self { power, noises })
    }

    pub fn receiver_count(&self) -> usize {
        self.noises.len()
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn noises(&self) -> &[f64] {
        &self.noises
    }

    /// `P / N_t` for each receiver, non-increasing.
    pub fn snrs(&self) -> Vec<f64> {
        self.noises.iter().map(|n| self.power / n).collect()
    }

    pub fn digest(&self) -> String {
        format!("P={} N={}", self.power, digest_list(&self.noises))
    }
}

/// Point-to-point capacities `C_t = log2(1 + P / N_t)` of the channel.
///
/// The ordering of the result follows from the noise ordering, so the
/// conversion cannot fail on a valid channel.
pub fn capacities_from_awgn(channel: &AwgnBroadcast) -> CapacityProfile {
    let capacities = channel
        .noises
        .iter()
        .map(|n| (1.0 + channel.power / n).log2())
        .collect();
    CapacityProfile::new(capacities).expect("noise ordering induces capacity ordering")
}

/// Inverse of [`capacities_from_awgn`]: noises `N_t = P / (2^{C_t} - 1)`
/// realizing a prescribed capacity profile at the given power.
pub fn noises_from_capacities(capacities: &CapacityProfile, power: f64) -> Result<AwgnBroadcast> {
    if !power.is_finite() || power <= 0.0 {
        return Err(Error::BadScalar {
            what: "power",
            value: power,
        });
    }
    let noises = capacities
        .values()
        .iter()
        .map(|c| power / (c.exp2() - 1.0))
        .collect();
    AwgnBroadcast::new(power, noises)
}

// ---------------------------------------------------------------------------
// PowerAllocation
// ---------------------------------------------------------------------------

/// Cumulative power fractions `alpha_0 ..= alpha_T` for superposition coding.
///
/// A full allocation has `alpha_T = 1`; a partial one (`alpha_T < 1`)
/// represents deliberately unspent power.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    alphas: Vec<f64>,
}

impl PowerAllocation {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::Empty {
                what: "power allocation",
            });
        }
        for (index, &a) in alphas.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::NotFinite {
                    what: "power allocation",
                    index,
                });
            }
        }
        if alphas[0].abs() > 1e-12 {
            return Err(Error::AllocStart { got: alphas[0] });
        }
        for index in 1..alphas.len() {
            if alphas[index] < alphas[index - 1] {
                return Err(Error::AllocDecreasing { index });
            }
        }
        let last = *alphas.last().unwrap();
        if last > 1.0 {
            return Err(Error::AllocOverflow { got: last });
        }
        Ok(Self { alphas })
    }

    /// Number of receivers served, `T = len - 1`.
    pub fn receiver_count(&self) -> usize {
        self.alphas.len() - 1
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Per-message power fractions `alpha_t - alpha_{t-1}`, length `T`.
    pub fn increments(&self) -> Vec<f64> {
        self.alphas.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `alpha_T`, the total spent fraction.
    pub fn total(&self) -> f64 {
        *self.alphas.last().unwrap()
    }

    /// `alpha_{T-1}`, the fraction spent before the most degraded message.
    pub fn before_last(&self) -> f64 {
        self.alphas[self.alphas.len() - 2]
    }
}

// ---------------------------------------------------------------------------
// RateTuple
// ---------------------------------------------------------------------------

/// Per-message information rates on the channel, bits per channel use.
///
/// `message_rates[t]` is the rate of the degraded message decoded by
/// receivers `1..=t`; `cumulative_rates[t] = sum_{s >= t} message_rates[s]`
/// is the total rate receiver `t` obtains, non-increasing in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTuple {
    message_rates: Vec<f64>,
    cumulative_rates: Vec<f64>,
}

impl RateTuple {
    pub fn from_message_rates(message_rates: Vec<f64>) -> Result<Self> {
        if message_rates.is_empty() {
            return Err(Error::Empty {
                what: "message rates",
            });
        }
        for (index, &value) in message_rates.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NotFinite {
                    what: "message rates",
                    index,
                });
            }
            if value < 0.0 {
                return Err(Error::NegativeMessageRate { index, value });
            }
        }
        let mut cumulative_rates = vec![0.0; message_rates.len()];
        let mut acc = 0.0;
        for t in (0..message_rates.len()).rev() {
            acc += message_rates[t];
            cumulative_rates[t] = acc;
        }
        Ok(Self {
            message_rates,
            cumulative_rates,
        })
    }

    pub fn receiver_count(&self) -> usize {
        self.message_rates.len()
    }

    pub fn message_rates(&self) -> &[f64] {
        &self.message_rates
    }

    pub fn cumulative_rates(&self) -> &[f64] {
        &self.cumulative_rates
    }
}

// ---------------------------------------------------------------------------
// SchemeResult
// ---------------------------------------------------------------------------

/// Outcome of one transmission scheme on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult {
    /// Source symbols per channel use.
    pub rate: f64,
    /// Channel uses per source symbol, `1 / rate`.
    pub uses_per_symbol: f64,
    /// Witnessing power allocation, for schemes that have one.
    pub allocation: Option<PowerAllocation>,
    /// Scheme identifier, e.g. `"time_sharing"`.
    pub label: &'static str,
}

impl SchemeResult {
    pub fn new(rate: f64, label: &'static str, allocation: Option<PowerAllocation>) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::BadScalar {
                what: "rate",
                value: rate,
            });
        }
        Ok(Self {
            rate,
            uses_per_symbol: rate.recip(),
            allocation,
            label,
        })
    }
}

// ---------------------------------------------------------------------------
// Gaussian rate-distortion helper
// ---------------------------------------------------------------------------

/// Quadratic-Gaussian rate-distortion `max(0, 0.5 * log2(variance / distortion))`
/// in bits per source symbol. Convenience for building example rate profiles
/// from distortion targets.
pub fn gaussian_rate_distortion(variance: f64, distortion: f64) -> Result<f64> {
    if !variance.is_finite() || variance <= 0.0 {
        return Err(Error::BadScalar {
            what: "variance",
            value: variance,
        });
    }
    if !distortion.is_finite() || distortion <= 0.0 || distortion > variance {
        return Err(Error::BadDistortion {
            distortion,
            variance,
        });
    }
    Ok((0.5 * (variance / distortion).log2()).max(0.0))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
