//! Blockage patterns over E paths, their probabilities, and priority groupings.
//!
//! A blockage pattern records which of the E parallel paths remain unblocked
//! (bit 1 = unblocked). The all-zero state can occur in simulation but is
//! never a member of the pattern universe used for guarantees. Patterns are
//! split into two disjoint groups: under a group-1 pattern the high-priority
//! message must be decodable, under a group-2 pattern both messages must be.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, Rational};
use num_traits::Signed;

/// Number of message priority levels supported by the model.
pub const PRIORITY_LEVELS: usize = 2;

/// Availability of the E paths: bit i set means path i+1 is unblocked.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockagePattern {
    bits: Vec<bool>,
}

impl BlockagePattern {
    /// A pattern must cover at least two paths and leave at least one unblocked.
    pub fn new(bits: Vec<bool>) -> Result<BlockagePattern> {
        if bits.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a blockage pattern needs at least 2 paths, got {}",
                bits.len()
            )));
        }
        if bits.iter().all(|&b| !b) {
            return Err(Error::InvalidInput(
                "the all-blocked pattern is not part of the pattern universe".into(),
            ));
        }
        Ok(BlockagePattern { bits })
    }

    pub fn all_ones(num_paths: usize) -> Result<BlockagePattern> {
        BlockagePattern::new(vec![true; num_paths])
    }

    pub fn num_paths(&self) -> usize {
        self.bits.len()
    }

    /// True when path `i` (0-based) is unblocked.
    pub fn is_unblocked(&self, i: usize) -> bool {
        self.bits[i]
    }

    /// 1-indexed set of unblocked paths: "110" -> {1, 2}.
    pub fn unblocked_set(&self) -> BTreeSet<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i + 1))
            .collect()
    }

    pub fn unblocked_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// True when every path unblocked here is also unblocked in `other`.
    pub fn subset_of(&self, other: &BlockagePattern) -> bool {
        self.bits.len() == other.bits.len()
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }
}

impl fmt::Display for BlockagePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BlockagePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BlockagePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<BlockagePattern> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "pattern '{s}': invalid character '{other}' at position {}",
                        i + 1
                    )))
                }
            }
        }
        BlockagePattern::new(bits)
    }
}

impl Serialize for BlockagePattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BlockagePattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e: Error| D::Error::custom(e.to_string()))
    }
}

/// All 2^E - 1 patterns over `num_paths` paths, in ascending string order.
pub fn enumerate_patterns(num_paths: usize) -> Result<BTreeSet<BlockagePattern>> {
    if num_paths < 2 {
        return Err(Error::InvalidConfiguration(format!(
            "need at least 2 paths, got {num_paths}"
        )));
    }
    if num_paths > 20 {
        return Err(Error::InvalidConfiguration(format!(
            "pattern enumeration over {num_paths} paths is not supported (limit 20)"
        )));
    }
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << num_paths {
        let bits = (0..num_paths).map(|i| mask >> (num_paths - 1 - i) & 1 == 1).collect();
        out.insert(BlockagePattern::new(bits)?);
    }
    Ok(out)
}

/// Static description of the network: E paths of equal capacity, each path
/// independently blocked with its own probability.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    num_paths: usize,
    capacity: Rational,
    blockage_probs: Vec<f64>,
}

impl NetworkConfig {
    pub fn new(num_paths: usize, capacity: Rational, blockage_probs: Vec<f64>) -> Result<NetworkConfig> {
        if num_paths < 2 {
            return Err(Error::InvalidConfiguration(format!(
                "need at least 2 paths, got {num_paths}"
            )));
        }
        if !capacity.is_positive() {
            return Err(Error::InvalidConfiguration(
                "path capacity must be positive".into(),
            ));
        }
        if blockage_probs.len() != num_paths {
            return Err(Error::InvalidConfiguration(format!(
                "expected {num_paths} blockage probabilities, got {}",
                blockage_probs.len()
            )));
        }
        for (i, &p) in blockage_probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::InvalidConfiguration(format!(
                    "blockage probability for path {} must lie in [0, 1], got {p}",
                    i + 1
                )));
            }
        }
        Ok(NetworkConfig { num_paths, capacity, blockage_probs })
    }

    pub fn num_paths(&self) -> usize {
        self.num_paths
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    pub fn capacity_f64(&self) -> f64 {
        rat_to_f64(&self.capacity)
    }

    pub fn blockage_probs(&self) -> &[f64] {
        &self.blockage_probs
    }
}

/// Probability that exactly this pattern occurs: unblocked paths stay open
/// (factor 1 - q_i), blocked paths fail (factor q_i).
pub fn pattern_probability(pattern: &BlockagePattern, cfg: &NetworkConfig) -> Result<f64> {
    if pattern.num_paths() != cfg.num_paths() {
        return Err(Error::InvalidInput(format!(
            "pattern covers {} paths but the network has {}",
            pattern.num_paths(),
            cfg.num_paths()
        )));
    }
    let mut p = 1.0;
    for (i, &q) in cfg.blockage_probs().iter().enumerate() {
        p *= if pattern.is_unblocked(i) { 1.0 - q } else { q };
    }
    Ok(p)
}

/// Smallest number of unblocked paths over a group, with the pattern that
/// attains it (ties broken by smallest pattern string).
pub fn kappa(group: &BTreeSet<BlockagePattern>) -> Result<(usize, BlockagePattern)> {
    let best = group
        .iter()
        .min_by_key(|b| (b.unblocked_count(), (*b).clone()))
        .ok_or_else(|| Error::EmptyGroup("kappa of an empty group is undefined".into()))?;
    Ok((best.unblocked_count(), best.clone()))
}

/// Disjoint pair of pattern groups (group 1: high-priority message only,
/// group 2: both messages).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping {
    group1: BTreeSet<BlockagePattern>,
    group2: BTreeSet<BlockagePattern>,
}

impl Grouping {
    pub fn new(
        group1: impl IntoIterator<Item = BlockagePattern>,
        group2: impl IntoIterator<Item = BlockagePattern>,
    ) -> Result<Grouping> {
        let group1: BTreeSet<_> = group1.into_iter().collect();
        let group2: BTreeSet<_> = group2.into_iter().collect();
        if let Some(b) = group1.intersection(&group2).next() {
            return Err(Error::InvalidInput(format!(
                "pattern {b} appears in both groups"
            )));
        }
        let mut len = None;
        for b in group1.iter().chain(&group2) {
            match len {
                None => len = Some(b.num_paths()),
                Some(l) if l != b.num_paths() => {
                    return Err(Error::InvalidInput(
                        "patterns of different lengths in one grouping".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(Grouping { group1, group2 })
    }

    /// Convenience constructor from pattern strings.
    pub fn parse(group1: &[&str], group2: &[&str]) -> Result<Grouping> {
        let g1 = group1.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?;
        let g2 = group2.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?;
        Grouping::new(g1, g2)
    }

    pub fn group1(&self) -> &BTreeSet<BlockagePattern> {
        &self.group1
    }

    pub fn group2(&self) -> &BTreeSet<BlockagePattern> {
        &self.group2
    }

    pub fn union(&self) -> BTreeSet<BlockagePattern> {
        self.group1.union(&self.group2).cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.group1.is_empty() && self.group2.is_empty()
    }

    /// Path count implied by the member patterns; `None` when both groups are empty.
    pub fn num_paths(&self) -> Option<usize> {
        self.group1
            .iter()
            .chain(&self.group2)
            .next()
            .map(BlockagePattern::num_paths)
    }
}

/// Outcome of the admissibility checks for a grouping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupingReport {
    /// Priority consistency: group 1 never needs more unblocked paths than group 2.
    pub a1_holds: bool,
    /// No group-2 unblocked set is contained in a group-1 unblocked set.
    pub a2_holds: bool,
    /// The all-unblocked pattern may not sit in group 1 while group 2 is non-empty.
    pub rule_111_holds: bool,
    pub kappa1: Option<usize>,
    pub kappa2: Option<usize>,
    pub minimizer1: Option<BlockagePattern>,
    pub minimizer2: Option<BlockagePattern>,
    /// Human-readable findings for every violated condition.
    pub violations: Vec<String>,
}

impl GroupingReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a grouping against the admissibility assumptions for `num_paths` paths.
pub fn validate_grouping(g: &Grouping, num_paths: usize) -> GroupingReport {
    let mut violations = Vec::new();
    if let Some(l) = g.num_paths() {
        if l != num_paths {
            violations.push(format!(
                "patterns cover {l} paths but the network has {num_paths}"
            ));
        }
    }

    let (kappa1, minimizer1) = match kappa(g.group1()) {
        Ok((k, b)) => (Some(k), Some(b)),
        Err(_) => (None, None),
    };
    let (kappa2, minimizer2) = match kappa(g.group2()) {
        Ok((k, b)) => (Some(k), Some(b)),
        Err(_) => (None, None),
    };

    let a1_holds = match (kappa1, kappa2) {
        (Some(k1), Some(k2)) => k1 <= k2,
        _ => true,
    };
    if !a1_holds {
        violations.push(format!(
            "priority order violated: group 1 needs {} unblocked paths at minimum, group 2 only {}",
            kappa1.unwrap(),
            kappa2.unwrap()
        ));
    }

    let mut a2_holds = true;
    for b2 in g.group2() {
        for b1 in g.group1() {
            if b2.subset_of(b1) {
                a2_holds = false;
                violations.push(format!(
                    "group-2 pattern {b2} is unblocked-subset of group-1 pattern {b1}"
                ));
            }
        }
    }

    let all_ones_in_g1 = g.group1().iter().any(|b| b.unblocked_count() == b.num_paths());
    let rule_111_holds = g.group2().is_empty() || !all_ones_in_g1;
    if !rule_111_holds {
        violations.push(
            "the all-unblocked pattern sits in group 1 while group 2 is non-empty".into(),
        );
    }

    GroupingReport {
        a1_holds,
        a2_holds,
        rule_111_holds,
        kappa1,
        kappa2,
        minimizer1,
        minimizer2,
        violations,
    }
}

/// Probability that the given priority level is decodable: level 1 sums over
/// both groups, level 2 over group 2 only.
pub fn decode_probability(g: &Grouping, cfg: &NetworkConfig, level: usize) -> Result<f64> {
    if level == 0 || level > PRIORITY_LEVELS {
        return Err(Error::InvalidInput(format!(
            "priority level must be 1 or 2, got {level}"
        )));
    }
    let mut p = 0.0;
    if level == 1 {
        for b in g.group1() {
            p += pattern_probability(b, cfg)?;
        }
    }
    for b in g.group2() {
        p += pattern_probability(b, cfg)?;
    }
    Ok(p)
}
