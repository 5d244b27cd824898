//! End-to-end transmission schemes and the joint-coding reference.
//!
//! Every scheme answers the same question for a rate profile and a channel:
//! how many source symbols per channel use can it sustain while giving each
//! receiver its demanded fidelity? Rates are reported through
//! [`SchemeResult`] and always satisfy, instance by instance,
//!
//! ```text
//! time_sharing <= two_dof <= optimal_separation <= joint_reference
//! ```
//!
//! up to solver tolerances (the `two_dof` link assumes the channel is not
//! nearly degenerate; see [`two_dof_rate`]).
//!
//! - [`joint_reference_rate`]: the outer reference `1 / max_t(R_t / C_t)`;
//!   no scheme of any kind can beat the per-receiver point-to-point limits.
//! - [`time_sharing_rate`]: layered point-to-point slices, the closed-form
//!   baseline.
//! - [`optimal_separation_rate`]: the best superposition split for the
//!   layered messages, found by bisection on the rate with the tight
//!   minimum-power inversion as the feasibility oracle.
//! - [`two_dof_rate`]: the same objective restricted to power increments
//!   that are linear in the receiver index (plus a free last increment), a
//!   two-parameter family searched deterministically.
//!
//! All solvers are pure and deterministic: sweeps may evaluate points
//! concurrently without coordination.

use crate::awgn::min_power_allocation;
use crate::bounds::{joint_uses, time_sharing_uses};
use crate::model::{
    capacities_from_awgn, AwgnBroadcast, CapacityProfile, Error, PowerAllocation, RateProfile,
    RateTuple, Result, SchemeResult,
};
use std::collections::BTreeMap;

pub const JOINT_REFERENCE: &str = "joint_reference";
pub const TIME_SHARING: &str = "time_sharing";
pub const OPTIMAL_SEPARATION: &str = "optimal_separation";
pub const TWO_DOF: &str = "two_dof";

/// Relative bisection tolerance on scheme rates.
const RATE_REL_TOL: f64 = 1e-9;

/// Interval width at which the one-dimensional searches stop.
const SEARCH_TOL: f64 = 1e-9;

fn check_lengths(rates: &RateProfile, receivers: usize) -> Result<()> {
    if rates.receiver_count() != receivers {
        return Err(Error::LengthMismatch {
            left_what: "rates",
            left: rates.receiver_count(),
            right_what: "channel receivers",
            right: receivers,
        });
    }
    Ok(())
}

/// Best-achievable-point reference: `rate = 1 / max_t (R_t / C_t)`.
///
/// This is the rate at which every receiver would simultaneously sit at its
/// point-to-point capacity. It upper-bounds any joint scheme and is not
/// itself claimed achievable.
pub fn joint_reference_rate(
    rates: &RateProfile,
    capacities: &CapacityProfile,
) -> Result<SchemeResult> {
    check_lengths(rates, capacities.receiver_count())?;
    let uses = joint_uses(rates, capacities);
    SchemeResult::new(uses.recip(), JOINT_REFERENCE, None)
}

/// Layered time sharing: send the coarsest description to everyone at the
/// most degraded receiver's capacity, then each increment in its own slice.
///
/// `uses_per_symbol = R_T/C_T + sum_{t<T} (R_t - R_{t+1})/C_t`; the ratio of
/// the joint reference to this rate is exactly the combined loss factor.
pub fn time_sharing_rate(
    rates: &RateProfile,
    capacities: &CapacityProfile,
) -> Result<SchemeResult> {
    check_lengths(rates, capacities.receiver_count())?;
    let uses = time_sharing_uses(rates, capacities);
    SchemeResult::new(uses.recip(), TIME_SHARING, None)
}

fn feasibility_of(channel: &AwgnBroadcast, increments: &[f64], rate: f64) -> Option<PowerAllocation> {
    let messages: Vec<f64> = increments.iter().map(|d| rate * d).collect();
    let targets = RateTuple::from_message_rates(messages).expect("scaled increments non-negative");
    min_power_allocation(channel, &targets)
        .expect("lengths match")
        .into_allocation()
}

/// Best separation-based rate: the largest `r` such that the layered
/// messages `r * (R_t - R_{t+1})` (with `R_{T+1} = 0`) fit the
/// superposition region, found by bisection to 1e-9 relative.
///
/// The greedy minimum-power inversion is an exact feasibility oracle on a
/// degraded channel, so the bisection converges to the true optimum; the
/// witnessing allocation is attached to the result. The returned rate never
/// falls below the time-sharing rate on the same channel.
pub fn optimal_separation_rate(
    rates: &RateProfile,
    channel: &AwgnBroadcast,
) -> Result<SchemeResult> {
    check_lengths(rates, channel.receiver_count())?;
    let capacities = capacities_from_awgn(channel);
    let increments = rates.increments();

    // No scheme can push receiver t past C_t, so min(C_t/R_t) bounds the
    // rate; the extra factor T just makes the seed strictly infeasible for
    // T >= 2.
    let cap_over_rate = capacities
        .values()
        .iter()
        .zip(rates.values())
        .map(|(c, r)| c / r)
        .fold(f64::INFINITY, f64::min);
    let seed = cap_over_rate * rates.receiver_count() as f64;

    if let Some(alloc) = feasibility_of(channel, &increments, seed) {
        // Only reachable at the degenerate single-receiver boundary where
        // the seed equals the exact optimum.
        return SchemeResult::new(seed, OPTIMAL_SEPARATION, Some(alloc));
    }

    let mut lo = 0.0;
    let mut hi = seed;
    let mut witness = PowerAllocation::new(vec![0.0; channel.receiver_count() + 1])
        .expect("zero allocation is valid");
    for _ in 0..200 {
        if hi - lo <= RATE_REL_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match feasibility_of(channel, &increments, mid) {
            Some(alloc) => {
                lo = mid;
                witness = alloc;
            }
            None => hi = mid,
        }
    }
    SchemeResult::new(lo, OPTIMAL_SEPARATION, Some(witness))
}

/// Largest rate a fixed allocation can sustain: the binding stage governs.
fn rate_for_allocation(channel: &AwgnBroadcast, increments: &[f64], deltas: &[f64]) -> f64 {
    let p = channel.power();
    let n = channel.noises();
    let mut interference = 0.0;
    let mut best = f64::INFINITY;
    for t in 0..deltas.len() {
        let m_max = (1.0 + deltas[t] * p / (n[t] + interference * p)).log2();
        if increments[t] > 0.0 {
            best = best.min(m_max / increments[t]);
        }
        interference += deltas[t];
    }
    best
}

/// Deterministic 1-D maximizer: coarse scan, bracket, golden-section.
fn grid_golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const COARSE: usize = 32;
    if hi <= lo {
        return (lo, f(lo));
    }
    let step = (hi - lo) / COARSE as f64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=COARSE {
        let v = f(lo + step * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_i + 1) as f64).min(hi);

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if b - a <= SEARCH_TOL {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Near-optimal separation with two degrees of freedom: power increments
/// `delta_t = a + b*t` for `t < T`, with the most degraded message taking
/// whatever remains of the budget.
///
/// The `(a, b)` plane is reparameterized to the unit square (`u` is the
/// power spent on the linear stages, `v` mixes the slope between its two
/// sign-feasibility extremes) and searched by nested coarse-grid plus
/// golden-section passes, deterministically. With two receivers a single
/// free increment remains, so the family covers every allocation and the
/// search matches [`optimal_separation_rate`] to solver tolerance. With
/// three receivers the two free increments still span everything; the
/// restriction only binds for `T >= 4`, where it tracks the optimum closely
/// on spread channels but can dip below plain time sharing when all noises
/// nearly coincide.
pub fn two_dof_rate(rates: &RateProfile, channel: &AwgnBroadcast) -> Result<SchemeResult> {
    let t = channel.receiver_count();
    if t < 2 {
        return Err(Error::NeedsTwoReceivers { got: t });
    }
    check_lengths(rates, t)?;
    let increments = rates.increments();

    let deltas_for = |u: f64, v: f64| -> Vec<f64> {
        let mut deltas = Vec::with_capacity(t);
        if t == 2 {
            deltas.push(u);
        } else {
            let spread = 2.0 * u / ((t - 1) as f64 * (t - 2) as f64);
            let slope = (2.0 * v - 1.0) * spread;
            let base = u / (t - 1) as f64 - slope * t as f64 / 2.0;
            for stage in 1..t {
                deltas.push((base + slope * stage as f64).max(0.0));
            }
        }
        let spent: f64 = deltas.iter().sum();
        deltas.push((1.0 - spent).max(0.0));
        deltas
    };

    let objective = |u: f64, v: f64| rate_for_allocation(channel, &increments, &deltas_for(u, v));

    let (best_u, best_v, best_rate) = if t == 2 {
        let (u, r) = grid_golden_max(|u| objective(u, 0.5), 0.0, 1.0);
        (u, 0.5, r)
    } else {
        let inner = |u: f64| grid_golden_max(|v| objective(u, v), 0.0, 1.0);
        let (u, _) = grid_golden_max(|u| inner(u).1, 0.0, 1.0);
        let (v, r) = inner(u);
        (u, v, r)
    };

    let deltas = deltas_for(best_u, best_v);
    let mut alphas = Vec::with_capacity(t + 1);
    alphas.push(0.0);
    let mut acc = 0.0;
    for d in &deltas {
        acc += d;
        alphas.push(acc.min(1.0));
    }
    let allocation = PowerAllocation::new(alphas).expect("partial sums are monotone");
    SchemeResult::new(best_rate, TWO_DOF, Some(allocation))
}

/// Each scheme's rate divided by the joint reference rate; every ratio lies
/// in `(0, 1]`. Includes `two_dof` whenever there are at least two
/// receivers.
pub fn relative_rates(
    rates: &RateProfile,
    channel: &AwgnBroadcast,
) -> Result<BTreeMap<&'static str, f64>> {
    let capacities = capacities_from_awgn(channel);
    let reference = joint_reference_rate(rates, &capacities)?.rate;
    let mut out = BTreeMap::new();
    out.insert(
        TIME_SHARING,
        time_sharing_rate(rates, &capacities)?.rate / reference,
    );
    out.insert(
        OPTIMAL_SEPARATION,
        optimal_separation_rate(rates, channel)?.rate / reference,
    );
    if channel.receiver_count() >= 2 {
        out.insert(TWO_DOF, two_dof_rate(rates, channel)?.rate / reference);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Sweep records
// ---------------------------------------------------------------------------

/// One evaluated point of a parameter sweep: an x-coordinate plus the
/// labeled results computed there.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// The sweep abscissa; `P/N_1` in dB where applicable.
    pub snr_db: f64,
    /// Scheme label to ratio value, in stable label order.
    pub results: BTreeMap<&'static str, f64>,
    /// Compact summary of the generating parameters.
    pub params_digest: String,
}

/// True iff every point carries exactly the same label set.
pub fn labels_consistent(points: &[SweepPoint]) -> bool {
    match points.first() {
        None => true,
        Some(first) => {
            let keys: Vec<_> = first.results.keys().collect();
            points
                .iter()
                .all(|p| p.results.keys().collect::<Vec<_>>() == keys)
        }
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
