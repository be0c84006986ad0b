//! Monte Carlo blockage simulation.
//!
//! Each trial draws independent per-path blockages, pushes a random message
//! through encode / erase / decode, and tallies which priority levels were
//! recovered. Empirical frequencies are then compared against the analytic
//! decoding probabilities, with a chi-square consistency check on the raw
//! pattern frequencies.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::codes::{decode, encode, CodingScheme, Message};
use crate::error::{Error, Result};
use crate::patterns::{decode_probability, BlockagePattern, Grouping, NetworkConfig};

/// Tallies of one simulation run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationResult {
    pub trials: u64,
    pub seed: u64,
    /// Fraction of trials in which u1 (resp. both messages) decoded.
    pub empirical_p_u1: f64,
    pub empirical_p_u2: f64,
    /// Among trials whose drawn pattern lies in either group: fraction whose
    /// required decodes all succeeded. 1.0 when no such trial occurred.
    pub required_success_rate: f64,
    pub analytic_p_u1: f64,
    pub analytic_p_u2: f64,
    /// Binomial standard errors of the empirical fractions.
    pub stderr_u1: f64,
    pub stderr_u2: f64,
    /// Draw counts per pattern string, including the all-blocked "000..".
    pub pattern_counts: BTreeMap<String, u64>,
}

/// Runs `trials` independent blockage draws against the scheme.
///
/// Trial t uses substream t of a seeded ChaCha generator, so results are
/// reproducible and independent of evaluation order. A draw that blocks
/// every path decodes nothing but still counts in the denominators.
pub fn run_monte_carlo(
    s: &CodingScheme,
    g: &Grouping,
    cfg: &NetworkConfig,
    trials: u64,
    seed: u64,
) -> Result<SimulationResult> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let e = cfg.num_paths();
    if s.num_paths() != e {
        return Err(Error::InvalidInput(format!(
            "scheme covers {} paths, network has {e}",
            s.num_paths()
        )));
    }
    if let Some(ge) = g.num_paths() {
        if ge != e {
            return Err(Error::InvalidInput(format!(
                "grouping is over {ge} paths, network has {e}"
            )));
        }
    }
    let probs = cfg.blockage_probs().to_vec();
    let mut u1_hits = 0u64;
    let mut u2_hits = 0u64;
    let mut required_trials = 0u64;
    let mut required_hits = 0u64;
    let mut pattern_counts: BTreeMap<String, u64> = BTreeMap::new();

    for trial in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let bits: Vec<bool> = probs.iter().map(|&q| rng.gen::<f64>() >= q).collect();
        let key: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        *pattern_counts.entry(key).or_insert(0) += 1;
        if bits.iter().all(|&b| !b) {
            continue; // everything blocked, nothing arrives
        }
        let pattern = BlockagePattern::new(bits)?;
        let msg = Message::random(s.k1(), s.k2(), s.field(), &mut rng);
        let sent = encode(s, &msg)?;
        let got = decode(s, &sent.erase(&pattern)?)?;
        let u1_ok = got.u1.as_ref() == Some(&msg.u1);
        let u2_ok = u1_ok && got.u2.as_ref() == Some(&msg.u2);
        u1_hits += u64::from(u1_ok);
        u2_hits += u64::from(u2_ok);
        let in_group1 = g.group1().contains(&pattern);
        let in_group2 = g.group2().contains(&pattern);
        if in_group1 || in_group2 {
            required_trials += 1;
            let ok = if in_group2 { u2_ok } else { u1_ok };
            required_hits += u64::from(ok);
        }
    }

    let n = trials as f64;
    let p1 = u1_hits as f64 / n;
    let p2 = u2_hits as f64 / n;
    Ok(SimulationResult {
        trials,
        seed,
        empirical_p_u1: p1,
        empirical_p_u2: p2,
        required_success_rate: if required_trials == 0 {
            1.0
        } else {
            required_hits as f64 / required_trials as f64
        },
        analytic_p_u1: decode_probability(g, cfg, 1)?,
        analytic_p_u2: decode_probability(g, cfg, 2)?,
        stderr_u1: (p1 * (1.0 - p1) / n).sqrt(),
        stderr_u2: (p2 * (1.0 - p2) / n).sqrt(),
        pattern_counts,
    })
}

/// How an empirical decoding fraction relates to its analytic value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeviationFlag {
    /// Within three standard errors of the analytic probability.
    Pass,
    /// More than three standard errors above: the scheme also decodes under
    /// patterns outside the groups, which is harmless.
    BenignSurplus,
    /// More than three standard errors below: a required decode is failing.
    Shortfall,
}

/// Empirical-versus-analytic comparison for both priority levels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationReport {
    pub deviation_u1: f64,
    pub deviation_u2: f64,
    pub flag_u1: DeviationFlag,
    pub flag_u2: DeviationFlag,
    /// Channels are error-free, so every required decode must succeed.
    pub required_success_ok: bool,
}

impl DeviationReport {
    /// No shortfalls and a perfect required-decode record.
    pub fn acceptable(&self) -> bool {
        self.required_success_ok
            && self.flag_u1 != DeviationFlag::Shortfall
            && self.flag_u2 != DeviationFlag::Shortfall
    }
}

fn classify_deviation(empirical: f64, analytic: f64, stderr: f64) -> DeviationFlag {
    let tolerance = 3.0 * stderr;
    if empirical < analytic - tolerance {
        DeviationFlag::Shortfall
    } else if empirical > analytic + tolerance {
        DeviationFlag::BenignSurplus
    } else {
        DeviationFlag::Pass
    }
}

/// Flags each level's deviation and checks the required-success invariant.
pub fn compare_with_analytic(r: &SimulationResult) -> DeviationReport {
    DeviationReport {
        deviation_u1: r.empirical_p_u1 - r.analytic_p_u1,
        deviation_u2: r.empirical_p_u2 - r.analytic_p_u2,
        flag_u1: classify_deviation(r.empirical_p_u1, r.analytic_p_u1, r.stderr_u1),
        flag_u2: classify_deviation(r.empirical_p_u2, r.analytic_p_u2, r.stderr_u2),
        required_success_ok: r.required_success_rate == 1.0,
    }
}

/// Goodness-of-fit of the drawn pattern frequencies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub threshold: f64,
    pub significance: f64,
    pub pass: bool,
}

/// Chi-square test of the observed pattern counts against the product law of
/// independent per-path blockages, over all 2^E cells at significance 1e-3.
/// Cells with zero probability contribute no degrees of freedom; any draw
/// observed in such a cell fails the test outright.
pub fn chi_square_report(r: &SimulationResult, cfg: &NetworkConfig) -> Result<ChiSquareReport> {
    const SIGNIFICANCE: f64 = 1e-3;
    let e = cfg.num_paths();
    if e > 20 {
        return Err(Error::InvalidInput("chi-square cell count too large".into()));
    }
    let n = r.trials as f64;
    let mut statistic = 0.0;
    let mut positive_cells = 0usize;
    let mut impossible_observed = false;
    for cell in 0..(1u32 << e) {
        let bits: Vec<bool> = (0..e).map(|i| cell & (1 << i) != 0).collect();
        let key: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let prob: f64 = bits
            .iter()
            .zip(cfg.blockage_probs())
            .map(|(&b, &q)| if b { 1.0 - q } else { q })
            .product();
        let observed = *r.pattern_counts.get(&key).unwrap_or(&0) as f64;
        if prob > 0.0 {
            positive_cells += 1;
            let expected = prob * n;
            statistic += (observed - expected).powi(2) / expected;
        } else if observed > 0.0 {
            impossible_observed = true;
        }
    }
    let degrees_of_freedom = positive_cells.saturating_sub(1);
    let threshold = if degrees_of_freedom == 0 {
        0.0
    } else {
        ChiSquared::new(degrees_of_freedom as f64)
            .map_err(|err| Error::InvalidInput(format!("chi-square setup failed: {err}")))?
            .inverse_cdf(1.0 - SIGNIFICANCE)
    };
    let pass = !impossible_observed && statistic <= threshold.max(f64::EPSILON);
    Ok(ChiSquareReport {
        statistic,
        degrees_of_freedom,
        threshold,
        significance: SIGNIFICANCE,
        pass,
    })
}
