//! Superposition coding on the degraded Gaussian broadcast channel.
//!
//! With cumulative power fractions `alpha_0 <= ... <= alpha_T`, message `t`
//! is assigned the fraction `alpha_t - alpha_{t-1}`. Receiver `t` decodes
//! and cancels the coarser messages `t+1..T` first and sees the finer
//! messages `1..t-1` as extra noise, so its message rate is
//!
//! ```text
//! m_t = log2(1 + (alpha_t - alpha_{t-1}) P / (N_t + alpha_{t-1} P))
//! ```
//!
//! This module provides the forward map ([`superposition_rates`]), the
//! greedy tight inverse ([`min_power_allocation`]), the capacity-difference
//! recursion that carries every receiver's point-to-point capacity except
//! the most degraded one ([`tight_alpha_recursion`]), the resulting rate gap
//! at that receiver ([`construction_gap`]) together with its two closed-form
//! ceilings ([`gap_upper_bounds`]), and the exact uniform-backoff distance
//! of the all-capacities reference point from the achievable region
//! ([`uniform_backoff_distance`]).
//!
//! Infeasibility is a value, not an error: sweep drivers probe infeasible
//! targets routinely while bisecting, so [`min_power_allocation`] reports
//! budget overruns through [`Feasibility::Infeasible`].

use crate::model::{
    capacities_from_awgn, AwgnBroadcast, Error, PowerAllocation, RateTuple, Result,
};

/// Absolute tolerance on `alpha_T` when deciding feasibility.
const ALPHA_BUDGET_TOL: f64 = 1e-12;

/// Bisection tolerance for distances measured in bits.
const BITS_TOL: f64 = 1e-10;

/// Gaussian capacity `log2(1 + snr)` in bits per channel use.
pub fn c_awgn(snr: f64) -> Result<f64> {
    if !snr.is_finite() {
        return Err(Error::BadScalar {
            what: "snr",
            value: snr,
        });
    }
    if snr < 0.0 {
        return Err(Error::NegativeSnr { got: snr });
    }
    Ok((1.0 + snr).log2())
}

/// Message rates achieved by a power allocation on a channel.
pub fn superposition_rates(
    channel: &AwgnBroadcast,
    allocation: &PowerAllocation,
) -> Result<RateTuple> {
    if allocation.receiver_count() != channel.receiver_count() {
        return Err(Error::LengthMismatch {
            left_what: "allocation messages",
            left: allocation.receiver_count(),
            right_what: "channel receivers",
            right: channel.receiver_count(),
        });
    }
    let p = channel.power();
    let alphas = allocation.alphas();
    let rates = channel
        .noises()
        .iter()
        .enumerate()
        .map(|(t, n)| {
            let used = alphas[t + 1] - alphas[t];
            (1.0 + used * p / (n + alphas[t] * p)).log2()
        })
        .collect();
    RateTuple::from_message_rates(rates)
}

/// Outcome of the tight inversion: either the cheapest allocation carrying
/// the targets, or the amount by which the power budget is exceeded.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(PowerAllocation),
    Infeasible { overflow: f64 },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn allocation(&self) -> Option<&PowerAllocation> {
        match self {
            Feasibility::Feasible(a) => Some(a),
            Feasibility::Infeasible { .. } => None,
        }
    }

    pub fn into_allocation(self) -> Option<PowerAllocation> {
        match self {
            Feasibility::Feasible(a) => Some(a),
            Feasibility::Infeasible { .. } => None,
        }
    }
}

/// Cheapest allocation carrying the target message rates, stage by stage.
///
/// Each stage is made exactly tight:
/// `alpha_t = alpha_{t-1} + (2^{m_t} - 1)(N_t + alpha_{t-1} P) / P`.
/// Because the power a stage needs grows with the interference already
/// accumulated, the greedy minimum is the global minimum on a degraded
/// channel, and the targets are feasible iff the final `alpha_T` stays
/// within the budget (up to `1e-12`).
pub fn min_power_allocation(channel: &AwgnBroadcast, targets: &RateTuple) -> Result<Feasibility> {
    if targets.receiver_count() != channel.receiver_count() {
        return Err(Error::LengthMismatch {
            left_what: "target messages",
            left: targets.receiver_count(),
            right_what: "channel receivers",
            right: channel.receiver_count(),
        });
    }
    let p = channel.power();
    let mut alphas = Vec::with_capacity(channel.receiver_count() + 1);
    alphas.push(0.0);
    let mut acc: f64 = 0.0;
    for (m, n) in targets.message_rates().iter().zip(channel.noises()) {
        acc += (m.exp2() - 1.0) * (n + acc * p) / p;
        alphas.push(acc);
    }
    if acc > 1.0 + ALPHA_BUDGET_TOL {
        return Ok(Feasibility::Infeasible {
            overflow: acc - 1.0,
        });
    }
    // Rounding may leave the tail a hair above the budget; snap it back.
    for a in alphas.iter_mut() {
        if *a > 1.0 {
            *a = 1.0;
        }
    }
    let allocation = PowerAllocation::new(alphas).expect("greedy alphas are monotone");
    Ok(Feasibility::Feasible(allocation))
}

/// Raw recursion values `alpha_0 ..= alpha_{T-1}` for the allocation whose
/// message `t < T` carries the capacity difference `C_t - C_{t+1}`:
///
/// ```text
/// alpha_t (1 + P/N_{t+1}) = alpha_{t-1} (1 + P/N_t) + 1 - N_t / N_{t+1}
/// ```
///
/// The values are returned uncapped: on a wide, low-snr channel the
/// recursion can overrun the unit power budget.
fn tight_alpha_seq(channel: &AwgnBroadcast) -> Vec<f64> {
    let p = channel.power();
    let n = channel.noises();
    let mut alphas = Vec::with_capacity(n.len());
    alphas.push(0.0);
    let mut prev = 0.0;
    for t in 0..n.len() - 1 {
        let next = (prev * (1.0 + p / n[t]) + 1.0 - n[t] / n[t + 1]) / (1.0 + p / n[t + 1]);
        alphas.push(next);
        prev = next;
    }
    alphas
}

/// Closed form for the last recursion value:
/// `alpha_{T-1} = sum_{t<T} (1 - N_t/N_{t+1}) / (1 + P/N_T)`.
pub fn tight_alpha_closed_form(channel: &AwgnBroadcast) -> f64 {
    let n = channel.noises();
    let mut sum = 0.0;
    for t in 0..n.len() - 1 {
        sum += 1.0 - n[t] / n[t + 1];
    }
    sum / (1.0 + channel.power() / n[n.len() - 1])
}

/// The allocation in which message `t < T` carries exactly the capacity
/// difference `C_t - C_{t+1}` and the most degraded message takes all
/// remaining power (`alpha_T = 1`).
///
/// On wide, low-snr channels the recursion can ask for more than the whole
/// budget before reaching the last receiver; the returned allocation then
/// caps the cumulative fractions at 1, leaving the overrun stages with zero
/// power. [`construction_gap`] always reports the uncapped recursion value.
pub fn tight_alpha_recursion(channel: &AwgnBroadcast) -> PowerAllocation {
    let mut alphas = tight_alpha_seq(channel);
    for a in alphas.iter_mut() {
        if *a > 1.0 {
            *a = 1.0;
        }
    }
    alphas.push(1.0);
    PowerAllocation::new(alphas).expect("recursion alphas are monotone")
}

/// Rate gap of the capacity-difference construction, with its ceilings.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    /// Shortfall of the most degraded receiver from its point-to-point
    /// capacity, bits per channel use (per complex degree of freedom).
    pub gap_bits: f64,
    /// Uncapped `alpha_{T-1}` from the recursion.
    pub alpha_last: f64,
    /// Receiver-count ceiling `log2(T)`.
    pub receiver_count_bound: f64,
    /// Noise-spread ceiling `log2(1 + ln(N_T / N_1))`.
    pub noise_range_bound: f64,
}

/// Gap left by [`tight_alpha_recursion`] at the most degraded receiver:
/// `log2(1 + alpha_{T-1} P / N_T)`, together with both closed-form ceilings.
///
/// A single receiver has no gap. Two receivers always stay below one bit.
pub fn construction_gap(channel: &AwgnBroadcast) -> GapReport {
    let alphas = tight_alpha_seq(channel);
    let alpha_last = *alphas.last().unwrap();
    let n_last = *channel.noises().last().unwrap();
    let gap_bits = (1.0 + alpha_last * channel.power() / n_last).log2();
    let (receiver_count_bound, noise_range_bound) = gap_upper_bounds(channel);
    GapReport {
        gap_bits,
        alpha_last,
        receiver_count_bound,
        noise_range_bound,
    }
}

/// The two closed-form ceilings on [`construction_gap`]:
/// `log2(T)` and `log2(1 + ln(N_T / N_1))`.
pub fn gap_upper_bounds(channel: &AwgnBroadcast) -> (f64, f64) {
    let t = channel.receiver_count() as f64;
    let n = channel.noises();
    let spread = n[n.len() - 1] / n[0];
    (t.log2(), (1.0 + spread.ln()).log2())
}

/// Smallest uniform backoff `eps >= 0` such that the cumulative-rate point
/// `(C_1 - eps, ..., C_T - eps)`, floored at zero, is achievable by
/// superposition coding.
///
/// Found by bisection with [`min_power_allocation`] as the feasibility
/// oracle, to 1e-10 bits. Whenever the capacity-difference construction
/// fits the power budget this distance coincides with
/// [`construction_gap`]; in particular the two agree for every two-receiver
/// channel. It is zero iff the reference point itself is achievable
/// (a single receiver, or all noises equal).
pub fn uniform_backoff_distance(channel: &AwgnBroadcast) -> f64 {
    let caps = capacities_from_awgn(channel);
    let c = caps.values();
    let feasible = |eps: f64| {
        let t = c.len();
        let mut messages = Vec::with_capacity(t);
        for i in 0..t {
            let kappa = (c[i] - eps).max(0.0);
            let kappa_next = if i + 1 < t { (c[i + 1] - eps).max(0.0) } else { 0.0 };
            messages.push((kappa - kappa_next).max(0.0));
        }
        let targets = RateTuple::from_message_rates(messages).expect("backoff rates non-negative");
        min_power_allocation(channel, &targets)
            .expect("lengths match")
            .is_feasible()
    };

    if feasible(0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = caps.max_capacity();
    debug_assert!(feasible(hi), "zero targets must be feasible");
    for _ in 0..200 {
        if hi - lo <= BITS_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::capacities_from_awgn;
    use proptest::prelude::*;

    fn channel(power: f64, noises: &[f64]) -> AwgnBroadcast {
        AwgnBroadcast::new(power, noises.to_vec()).unwrap()
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        (a - b).abs() / a.abs().max(b.abs())
    }

    #[test]
    fn c_awgn_examples() {
        assert_eq!(c_awgn(0.0).unwrap(), 0.0);
        assert_eq!(c_awgn(1.0).unwrap(), 1.0);
        assert_eq!(c_awgn(3.0).unwrap(), 2.0);
        assert!(c_awgn(-0.5).is_err());
    }

    #[test]
    fn superposition_full_power_single_user() {
        let ch = channel(3.0, &[1.0]);
        let alloc = PowerAllocation::new(vec![0.0, 1.0]).unwrap();
        let rates = superposition_rates(&ch, &alloc).unwrap();
        assert_eq!(rates.message_rates(), &[2.0]);
    }

    #[test]
    fn superposition_zero_power_gives_zero_rates() {
        let ch = channel(2.0, &[0.5, 1.0, 4.0]);
        let alloc = PowerAllocation::new(vec![0.0; 4]).unwrap();
        let rates = superposition_rates(&ch, &alloc).unwrap();
        assert_eq!(rates.message_rates(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn superposition_two_user_worked_values() {
        // P=3, N=[1,3], alpha=[0, 1/5, 1]:
        //   m_1 = log2(1 + 0.6/1) = log2(8/5), m_2 = log2(1 + 2.4/3.6) = log2(5/3)
        let ch = channel(3.0, &[1.0, 3.0]);
        let alloc = PowerAllocation::new(vec![0.0, 0.2, 1.0]).unwrap();
        let rates = superposition_rates(&ch, &alloc).unwrap();
        assert!((rates.message_rates()[0] - 0.678071905112638).abs() < 1e-12);
        assert!((rates.message_rates()[1] - 0.736965594166206).abs() < 1e-12);
        assert!((rates.cumulative_rates()[0] - 1.415037499278844).abs() < 1e-12);
    }

    #[test]
    fn superposition_rejects_length_mismatch() {
        let ch = channel(1.0, &[1.0, 2.0]);
        let alloc = PowerAllocation::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            superposition_rates(&ch, &alloc),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn min_power_zero_targets() {
        let ch = channel(2.0, &[1.0, 2.0, 3.0]);
        let targets = RateTuple::from_message_rates(vec![0.0; 3]).unwrap();
        match min_power_allocation(&ch, &targets).unwrap() {
            Feasibility::Feasible(a) => assert_eq!(a.alphas(), &[0.0; 4]),
            Feasibility::Infeasible { .. } => panic!("zero targets must be feasible"),
        }
    }

    #[test]
    fn min_power_single_user_capacity_takes_all_power() {
        let ch = channel(3.0, &[1.0]);
        let c = capacities_from_awgn(&ch).values()[0];
        let targets = RateTuple::from_message_rates(vec![c]).unwrap();
        match min_power_allocation(&ch, &targets).unwrap() {
            Feasibility::Feasible(a) => assert!((a.total() - 1.0).abs() <= 1e-12),
            Feasibility::Infeasible { .. } => panic!("capacity itself is feasible"),
        }
    }

    #[test]
    fn min_power_inverts_worked_example() {
        let ch = channel(3.0, &[1.0, 3.0]);
        let targets =
            RateTuple::from_message_rates(vec![0.678071905112638, 0.736965594166206]).unwrap();
        let alloc = min_power_allocation(&ch, &targets)
            .unwrap()
            .into_allocation()
            .expect("feasible");
        assert!((alloc.alphas()[1] - 0.2).abs() < 1e-9);
        assert!((alloc.alphas()[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn min_power_reports_overflow() {
        let ch = channel(1.0, &[1.0]);
        let targets = RateTuple::from_message_rates(vec![2.0]).unwrap();
        match min_power_allocation(&ch, &targets).unwrap() {
            Feasibility::Infeasible { overflow } => {
                // Needs (2^2 - 1) = 3x the available power.
                assert!((overflow - 2.0).abs() < 1e-9);
            }
            Feasibility::Feasible(_) => panic!("target above capacity must overflow"),
        }
    }

    #[test]
    fn tight_alpha_single_receiver() {
        let ch = channel(2.0, &[1.0]);
        let alloc = tight_alpha_recursion(&ch);
        assert_eq!(alloc.alphas(), &[0.0, 1.0]);
        assert_eq!(alloc.before_last(), 0.0);
    }

    #[test]
    fn tight_alpha_two_receiver_closed_form() {
        // P=1, N=[0.5, 1]: alpha_1 = (1 - 0.5) / (1 + 1) = 0.25.
        let ch = channel(1.0, &[0.5, 1.0]);
        let alloc = tight_alpha_recursion(&ch);
        assert!((alloc.before_last() - 0.25).abs() < 1e-15);
        assert!((tight_alpha_closed_form(&ch) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn tight_alpha_equal_noises_needs_nothing_before_last() {
        let ch = channel(5.0, &[2.0, 2.0, 2.0]);
        let alloc = tight_alpha_recursion(&ch);
        assert_eq!(alloc.before_last(), 0.0);
        assert_eq!(construction_gap(&ch).gap_bits, 0.0);
    }

    #[test]
    fn construction_gap_worked_example() {
        let ch = channel(1.0, &[0.5, 1.0]);
        let report = construction_gap(&ch);
        assert!((report.gap_bits - 1.25f64.log2()).abs() < 1e-15);
        assert!((report.gap_bits - 0.321928094887362).abs() < 1e-12);
    }

    #[test]
    fn construction_gap_single_receiver_is_zero() {
        let ch = channel(7.0, &[0.3]);
        assert_eq!(construction_gap(&ch).gap_bits, 0.0);
    }

    #[test]
    fn gap_upper_bounds_examples() {
        let ch = channel(1.0, &[1.0, 2.0]);
        let (t_bound, _) = gap_upper_bounds(&ch);
        assert_eq!(t_bound, 1.0);

        let ch = channel(1.0, &[1.0, 1.5, 2.0, 4.0]);
        let (t_bound, _) = gap_upper_bounds(&ch);
        assert_eq!(t_bound, 2.0);

        let ch = channel(1.0, &[1.0, std::f64::consts::E]);
        let (_, range_bound) = gap_upper_bounds(&ch);
        assert!((range_bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn construction_carries_capacity_differences() {
        // Chosen so the recursion stays inside the budget (alpha_{T-1} < 1).
        let ch = channel(2.5, &[0.5, 1.0, 2.0]);
        let caps = capacities_from_awgn(&ch);
        let c = caps.values();
        let alloc = tight_alpha_recursion(&ch);
        let rates = superposition_rates(&ch, &alloc).unwrap();
        let report = construction_gap(&ch);
        for t in 0..c.len() - 1 {
            assert!(
                (rates.message_rates()[t] - (c[t] - c[t + 1])).abs() < 1e-12,
                "stage {t} off"
            );
        }
        let m_last = rates.message_rates()[c.len() - 1];
        assert!((m_last - (c[c.len() - 1] - report.gap_bits)).abs() < 1e-12);
    }

    #[test]
    fn uniform_backoff_trivial_cases() {
        assert_eq!(uniform_backoff_distance(&channel(3.0, &[1.0])), 0.0);
        assert_eq!(uniform_backoff_distance(&channel(3.0, &[2.0, 2.0, 2.0])), 0.0);
    }

    #[test]
    fn uniform_backoff_matches_gap_for_two_receivers() {
        let ch = channel(1.0, &[0.5, 1.0]);
        let eps = uniform_backoff_distance(&ch);
        let gap = construction_gap(&ch).gap_bits;
        assert!(eps > 0.0);
        assert!(eps <= gap + 1e-9);
        assert!((eps - gap).abs() < 1e-9);

        // Brute-force cross-check: best uniform backoff over a fine grid of
        // two-user allocations, evaluated straight from the rate formula.
        let caps = capacities_from_awgn(&ch);
        let c = caps.values();
        let (p, n) = (ch.power(), ch.noises());
        let mut best = f64::INFINITY;
        for i in 0..=10_000 {
            let a1 = i as f64 / 10_000.0;
            let m1 = (1.0 + a1 * p / n[0]).log2();
            let m2 = (1.0 + (1.0 - a1) * p / (n[1] + a1 * p)).log2();
            let backoff = (c[0] - (m1 + m2)).max(c[1] - m2).max(0.0);
            if backoff < best {
                best = backoff;
            }
        }
        assert!((eps - best).abs() < 1e-6, "bisection {eps} vs grid {best}");
    }

    #[test]
    fn uniform_backoff_can_exceed_gap_when_budget_overruns() {
        // Wide noise spread at low snr: the capacity-difference recursion asks
        // for more than the whole budget (alpha_{T-1} > 1), the construction
        // degenerates, and the true uniform distance exceeds the gap value.
        let ch = channel(1.0, &[1.0, 100.0, 10_000.0]);
        let report = construction_gap(&ch);
        assert!(report.alpha_last > 1.0);
        let eps = uniform_backoff_distance(&ch);
        assert!(eps > report.gap_bits);
        // The ceilings still hold.
        assert!(report.gap_bits <= report.receiver_count_bound);
        assert!(report.gap_bits <= report.noise_range_bound);
    }

    proptest! {
        /// Recursion and closed form agree tightly.
        #[test]
        fn recursion_matches_closed_form(
            mut noises in prop::collection::vec(0.01f64..100.0, 1..17),
            power in 0.01f64..100.0,
        ) {
            noises.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ch = AwgnBroadcast::new(power, noises).unwrap();
            let seq = tight_alpha_seq(&ch);
            let closed = tight_alpha_closed_form(&ch);
            prop_assert!(rel_err(*seq.last().unwrap(), closed) < 1e-10);
        }

        /// The two algebraic routes to the gap agree.
        #[test]
        fn gap_routes_agree(
            mut noises in prop::collection::vec(0.01f64..100.0, 2..17),
            power in 0.01f64..100.0,
        ) {
            noises.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ch = AwgnBroadcast::new(power, noises).unwrap();
            let report = construction_gap(&ch);
            let n = ch.noises();
            let mut sum = 0.0;
            for t in 0..n.len() - 1 {
                sum += 1.0 - n[t] / n[t + 1];
            }
            let displayed = (1.0 + power / (power + n[n.len() - 1]) * sum).log2();
            prop_assert!(rel_err(report.gap_bits, displayed) < 1e-12);
        }

        /// Both ceilings dominate the gap.
        #[test]
        fn ceilings_dominate_gap(
            mut noises in prop::collection::vec(0.01f64..100.0, 2..17),
            power in 0.01f64..100.0,
        ) {
            noises.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ch = AwgnBroadcast::new(power, noises).unwrap();
            let report = construction_gap(&ch);
            prop_assert!(report.gap_bits >= 0.0);
            prop_assert!(report.gap_bits <= report.receiver_count_bound);
            prop_assert!(report.gap_bits <= report.noise_range_bound);
        }

        /// Inverting then replaying a feasible target reproduces it.
        #[test]
        fn inversion_round_trip(
            mut noises in prop::collection::vec(0.05f64..20.0, 1..9),
            power in 0.1f64..50.0,
            weights in prop::collection::vec(0.0f64..1.0, 1..9),
            budget in 0.1f64..1.0,
        ) {
            noises.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let t = noises.len().min(weights.len());
            let noises = noises[..t].to_vec();
            let ch = AwgnBroadcast::new(power, noises).unwrap();
            // Build guaranteed-feasible targets from an explicit allocation.
            let wsum: f64 = weights[..t].iter().sum();
            let mut alphas = vec![0.0];
            let mut acc = 0.0;
            for w in &weights[..t] {
                acc += if wsum > 0.0 { w / wsum * budget } else { 0.0 };
                alphas.push(acc.min(1.0));
            }
            let alloc = PowerAllocation::new(alphas).unwrap();
            let targets = superposition_rates(&ch, &alloc).unwrap();
            let back = min_power_allocation(&ch, &targets).unwrap();
            prop_assert!(back.is_feasible());
            let replay = superposition_rates(&ch, back.allocation().unwrap()).unwrap();
            for (a, b) in replay.message_rates().iter().zip(targets.message_rates()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        /// Scaling feasible targets down keeps them feasible, and the spent
        /// power is monotone in the scale.
        #[test]
        fn feasibility_monotone_in_scale(
            mut noises in prop::collection::vec(0.05f64..20.0, 2..7),
            power in 0.1f64..50.0,
            s_lo in 0.05f64..1.0,
        ) {
            noises.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ch = AwgnBroadcast::new(power, noises).unwrap();
            let full = tight_alpha_recursion(&ch);
            let base = superposition_rates(&ch, &full).unwrap();
            let scaled = |s: f64| {
                let m: Vec<f64> = base.message_rates().iter().map(|x| x * s).collect();
                RateTuple::from_message_rates(m).unwrap()
            };
            let lo = min_power_allocation(&ch, &scaled(s_lo)).unwrap();
            let hi = min_power_allocation(&ch, &scaled(1.0)).unwrap();
            prop_assert!(lo.is_feasible());
            prop_assert!(hi.is_feasible());
            prop_assert!(
                lo.allocation().unwrap().total() <= hi.allocation().unwrap().total() + 1e-12
            );
        }

        /// Uniform backoff equals the construction gap whenever the
        /// recursion stays inside the budget (always true for 2 receivers).
        #[test]
        fn uniform_backoff_matches_feasible_gap(
            n2 in 0.011f64..100.0,
            power in 0.01f64..100.0,
            frac in 0.01f64..0.99,
        ) {
            let ch = AwgnBroadcast::new(power, vec![n2 * frac, n2]).unwrap();
            let report = construction_gap(&ch);
            prop_assert!(report.alpha_last <= 1.0);
            let eps = uniform_backoff_distance(&ch);
            prop_assert!((eps - report.gap_bits).abs() < 1e-8);
        }
    }
}
