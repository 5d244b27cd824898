//! Multiplicative loss factors for separation-based source broadcasting.
//!
//! Against the joint-coding reference, a layered time-sharing scheme pays a
//! bounded multiplicative rate penalty. This module computes the closed
//! forms of those penalties:
//!
//! - [`naive_factor`] is `T`: serve each of the `T` receivers in its own
//!   time slice.
//! - [`refined_factor`] is `1 + sum_{t<T} (R_t - R_{t+1}) / R_t`: send the
//!   coarsest description to everyone, then only the increments.
//! - [`worst_case_factor`] is `T - (T-1) (r_min/r_max)^{1/(T-1)}`, the
//!   maximum of the refined factor over all profiles confined to
//!   `[r_min, r_max]`, attained by the geometric profile
//!   ([`maximizing_profile`]).
//! - [`asymptotic_factor`] is `1 + ln(r_max/r_min)`, the limit of the worst
//!   case as the number of receivers grows without bound.
//! - [`combined_factor`]: the sharper form using both the rate and the
//!   capacity profile, `[R_T/C_T + sum (R_t - R_{t+1})/C_t] / max_t(R_t/C_t)`.
//! - [`worst_case_combined`]: worst case of the combined factor over rate
//!   and capacity ranges; the larger of the two spreads governs.
//!
//! Every factor is dimensionless, at least 1, and depends only on ratios,
//! so it is invariant under a common rescaling of the inputs.

use crate::model::{CapacityProfile, Error, RateProfile, Result};

/// A computed loss factor together with what produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorReport {
    /// Dimensionless factor, always >= 1.
    pub factor: f64,
    /// Which bound produced this value.
    pub bound_name: &'static str,
    /// Compact summary of the generating inputs, so sweep outputs are
    /// self-describing.
    pub inputs_digest: String,
}

impl FactorReport {
    fn new(factor: f64, bound_name: &'static str, inputs_digest: String) -> Self {
        debug_assert!(factor >= 1.0 - 1e-9, "loss factor fell below 1: {factor}");
        Self {
            factor,
            bound_name,
            inputs_digest,
        }
    }
}

fn validate_range(r_min: f64, r_max: f64) -> Result<()> {
    if !r_min.is_finite() || !r_max.is_finite() || r_min <= 0.0 || r_min > r_max {
        return Err(Error::BadRange { r_min, r_max });
    }
    Ok(())
}

/// Time-sharing cost `R_T/C_T + sum_{t<T} (R_t - R_{t+1})/C_t` in channel
/// uses per source symbol. Shared with the scheme solvers so the factor and
/// the scheme rates stay consistent to the last bit of rounding.
pub(crate) fn time_sharing_uses(rates: &RateProfile, capacities: &CapacityProfile) -> f64 {
    let r = rates.values();
    let c = capacities.values();
    let t = r.len();
    let mut uses = r[t - 1] / c[t - 1];
    for i in 0..t - 1 {
        uses += (r[i] - r[i + 1]) / c[i];
    }
    uses
}

/// Joint-coding cost floor `max_t (R_t / C_t)` in channel uses per symbol.
pub(crate) fn joint_uses(rates: &RateProfile, capacities: &CapacityProfile) -> f64 {
    rates
        .values()
        .iter()
        .zip(capacities.values())
        .map(|(r, c)| r / c)
        .fold(f64::MIN, f64::max)
}

/// Loss factor equal to the receiver count: the coarsest possible bound.
pub fn naive_factor(receiver_count: usize) -> Result<FactorReport> {
    if receiver_count < 1 {
        return Err(Error::BadReceiverCount {
            got: receiver_count,
        });
    }
    Ok(FactorReport::new(
        receiver_count as f64,
        "naive",
        format!("T={receiver_count}"),
    ))
}

/// Incremental time-sharing factor `1 + sum_{t<T} (R_t - R_{t+1}) / R_t`.
///
/// Collapses to 1 when all rates are equal and approaches `T` only when
/// every ratio `R_{t+1}/R_t` vanishes.
pub fn refined_factor(rates: &RateProfile) -> FactorReport {
    let r = rates.values();
    let mut factor = 1.0;
    for i in 0..r.len() - 1 {
        factor += (r[i] - r[i + 1]) / r[i];
    }
    FactorReport::new(factor, "refined", rates.digest())
}

/// Worst case of [`refined_factor`] over profiles confined to
/// `[r_min, r_max]`: `T - (T-1) (r_min/r_max)^{1/(T-1)}`.
///
/// For a single receiver the factor is 1, the analytically forced
/// degenerate case.
pub fn worst_case_factor(r_min: f64, r_max: f64, receiver_count: usize) -> Result<FactorReport> {
    validate_range(r_min, r_max)?;
    if receiver_count < 1 {
        return Err(Error::BadReceiverCount {
            got: receiver_count,
        });
    }
    let digest = format!("r_min={r_min} r_max={r_max} T={receiver_count}");
    if receiver_count == 1 {
        return Ok(FactorReport::new(1.0, "worst_case", digest));
    }
    let t = receiver_count as f64;
    let factor = t - (t - 1.0) * (r_min / r_max).powf(1.0 / (t - 1.0));
    Ok(FactorReport::new(factor, "worst_case", digest))
}

/// Many-receiver limit of [`worst_case_factor`]: `1 + ln(r_max / r_min)`.
pub fn asymptotic_factor(r_min: f64, r_max: f64) -> Result<FactorReport> {
    validate_range(r_min, r_max)?;
    Ok(FactorReport::new(
        1.0 + (r_max / r_min).ln(),
        "asymptotic",
        format!("r_min={r_min} r_max={r_max}"),
    ))
}

/// The geometric profile attaining [`worst_case_factor`]: `R_1 = r_max`,
/// `R_T = r_min`, constant ratio `(r_min/r_max)^{1/(T-1)}` between steps.
///
/// For `T = 1` the profile is the single value `r_max` (the one receiver
/// demands the most); the range collapses only when `r_min = r_max`.
pub fn maximizing_profile(r_min: f64, r_max: f64, receiver_count: usize) -> Result<RateProfile> {
    validate_range(r_min, r_max)?;
    if receiver_count < 1 {
        return Err(Error::BadReceiverCount {
            got: receiver_count,
        });
    }
    if receiver_count == 1 {
        return RateProfile::new(vec![r_max]);
    }
    let span = (r_min / r_max).ln();
    let steps = (receiver_count - 1) as f64;
    let mut rates = Vec::with_capacity(receiver_count);
    rates.push(r_max);
    for t in 1..receiver_count - 1 {
        rates.push(r_max * (span * t as f64 / steps).exp());
    }
    rates.push(r_min);
    RateProfile::new(rates)
}

/// Two-sided factor using both profiles, Eq. form
/// `[R_T/C_T + sum (R_t - R_{t+1})/C_t] / max_t (R_t/C_t)`.
///
/// Coincides with [`refined_factor`] of the rates whenever the capacities
/// are proportional to them, and equals 1 for a single receiver.
pub fn combined_factor(
    rates: &RateProfile,
    capacities: &CapacityProfile,
) -> Result<FactorReport> {
    if rates.receiver_count() != capacities.receiver_count() {
        return Err(Error::LengthMismatch {
            left_what: "rates",
            left: rates.receiver_count(),
            right_what: "capacities",
            right: capacities.receiver_count(),
        });
    }
    let factor = time_sharing_uses(rates, capacities) / joint_uses(rates, capacities);
    Ok(FactorReport::new(
        factor,
        "combined",
        format!("{} {}", rates.digest(), capacities.digest()),
    ))
}

/// Worst case of [`combined_factor`] over profiles with rate spread
/// `rate_ratio` and capacity spread `capacity_ratio`: the larger spread
/// governs, `T - (T-1) * (1 / max(ratios))^{1/(T-1)}`.
pub fn worst_case_combined(
    rate_ratio: f64,
    capacity_ratio: f64,
    receiver_count: usize,
) -> Result<FactorReport> {
    if !rate_ratio.is_finite() || rate_ratio < 1.0 {
        return Err(Error::RatioBelowOne {
            what: "rate_ratio",
            value: rate_ratio,
        });
    }
    if !capacity_ratio.is_finite() || capacity_ratio < 1.0 {
        return Err(Error::RatioBelowOne {
            what: "capacity_ratio",
            value: capacity_ratio,
        });
    }
    let governing = rate_ratio.max(capacity_ratio);
    let report = worst_case_factor(1.0, governing, receiver_count)?;
    Ok(FactorReport::new(
        report.factor,
        "worst_case_combined",
        format!(
            "rate_ratio={rate_ratio} capacity_ratio={capacity_ratio} T={receiver_count}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
