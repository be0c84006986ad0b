//! Case classification and rate regions.
//!
//! For a grouping over E paths of capacity C the admissible rate pairs
//! (R1, R2) form a polytope. A handful of structures admit an exact
//! characterization; everything else gets the cut-set outer bound. All region
//! arithmetic is exact rational: inequalities store coefficients and a bound
//! in units of C, and corner points are computed by intersecting boundary
//! lines.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::patterns::{kappa, validate_grouping, BlockagePattern, Grouping, NetworkConfig};
use crate::rational::{rat_coeff_string, rat_int, rat_to_string, Rational};

/// Structural case of an instance, deciding which region formula applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CaseLabel {
    /// No group-2 patterns: only the high-priority message is ever required.
    G2Empty,
    /// No group-1 patterns: both messages always required together.
    G1Empty,
    /// The single-path coverage condition holds; exact for any path count.
    C1Holds,
    /// Exactly one group-1 pattern (three paths, coverage condition fails).
    Case2SingletonG1,
    /// More than three group-1 patterns, kappa2 = 2 (three paths).
    Case2LargeG1Kappa2Eq2,
    /// More than three group-1 patterns, kappa2 = 3 (three paths).
    Case3LargeG1Kappa2Eq3,
    /// Two or three group-1 patterns (three paths): no exact region known here.
    ExternalSmallG1,
    /// The grouping uses every pattern: no exact region known here.
    AllPatterns,
    /// Anything else (more than three paths without the coverage condition).
    Unsupported,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::G2Empty => "G2Empty",
            CaseLabel::G1Empty => "G1Empty",
            CaseLabel::C1Holds => "C1Holds",
            CaseLabel::Case2SingletonG1 => "Case2_SingletonG1",
            CaseLabel::Case2LargeG1Kappa2Eq2 => "Case2_LargeG1_Kappa2Eq2",
            CaseLabel::Case3LargeG1Kappa2Eq3 => "Case3_LargeG1_Kappa2Eq3",
            CaseLabel::ExternalSmallG1 => "ExternalSmallG1",
            CaseLabel::AllPatterns => "AllPatterns",
            CaseLabel::Unsupported => "Unsupported",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How trustworthy a region is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// The region equals the capacity region.
    ExactClosedForm,
    /// Outer bound only; the capacity region may be strictly smaller.
    OuterOnly,
    /// Outer bound plus numeric inner evidence from the search oracle.
    NumericallyBracketed,
}

impl Exactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exactness::ExactClosedForm => "ExactClosedForm",
            Exactness::OuterOnly => "OuterOnly",
            Exactness::NumericallyBracketed => "NumericallyBracketed",
        }
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One inequality `a1*R1 + a2*R2 <= bound * C` with `a1, a2, bound >= 0` and
/// `(a1, a2) != (0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateInequality {
    a1: Rational,
    a2: Rational,
    bound: Rational,
}

impl RateInequality {
    pub fn new(a1: Rational, a2: Rational, bound: Rational) -> Result<RateInequality> {
        if a1.is_negative() || a2.is_negative() || bound.is_negative() {
            return Err(Error::InvalidInput(
                "rate inequalities use non-negative coefficients and bounds".into(),
            ));
        }
        if a1.is_zero() && a2.is_zero() {
            return Err(Error::InvalidInput(
                "rate inequality needs a nonzero coefficient".into(),
            ));
        }
        Ok(RateInequality { a1, a2, bound })
    }

    pub fn a1(&self) -> &Rational {
        &self.a1
    }

    pub fn a2(&self) -> &Rational {
        &self.a2
    }

    /// Bound in units of C.
    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    /// True when (r1, r2) satisfies the inequality under capacity `c`.
    pub fn admits(&self, r1: &Rational, r2: &Rational, c: &Rational) -> bool {
        &self.a1 * r1 + &self.a2 * r2 <= &self.bound * c
    }

    /// Scale-invariant integer form (a1, a2, bound) for equality comparisons.
    pub fn canonical(&self) -> (num_bigint::BigInt, num_bigint::BigInt, num_bigint::BigInt) {
        let lcm = self
            .a1
            .denom()
            .lcm(self.a2.denom())
            .lcm(self.bound.denom());
        let i1 = (&self.a1 * &lcm).to_integer();
        let i2 = (&self.a2 * &lcm).to_integer();
        let ib = (&self.bound * &lcm).to_integer();
        let g = i1.gcd(&i2).gcd(&ib);
        if g.is_zero() {
            (i1, i2, ib)
        } else {
            (i1 / &g, i2 / &g, ib / &g)
        }
    }

    /// Rendering like "R1 + 0.5·R2 ≤ 1" with the bound evaluated at capacity `c`.
    pub fn display(&self, c: &Rational) -> String {
        let mut lhs = String::new();
        for (coeff, name) in [(&self.a1, "R1"), (&self.a2, "R2")] {
            if coeff.is_zero() {
                continue;
            }
            if !lhs.is_empty() {
                lhs.push_str(" + ");
            }
            if coeff.is_one() {
                lhs.push_str(name);
            } else {
                lhs.push_str(&format!("{}·{name}", rat_coeff_string(coeff)));
            }
        }
        format!("{lhs} ≤ {}", rat_to_string(&(&self.bound * c)))
    }
}

/// A set of rate inequalities plus metadata; non-empty by construction
/// (the origin always satisfies every inequality).
#[derive(Clone, Debug, PartialEq)]
pub struct RateRegion {
    inequalities: Vec<RateInequality>,
    exactness: Exactness,
    case_label: CaseLabel,
    capacity: Rational,
    corner_points: Vec<(Rational, Rational)>,
}

impl RateRegion {
    fn build(
        mut inequalities: Vec<RateInequality>,
        exactness: Exactness,
        case_label: CaseLabel,
        capacity: Rational,
    ) -> RateRegion {
        dedupe(&mut inequalities);
        drop_redundant(&mut inequalities, &capacity);
        let corner_points = corners(&inequalities, &capacity);
        RateRegion { inequalities, exactness, case_label, capacity, corner_points }
    }

    pub fn inequalities(&self) -> &[RateInequality] {
        &self.inequalities
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn with_exactness(mut self, exactness: Exactness) -> RateRegion {
        self.exactness = exactness;
        self
    }

    pub fn case_label(&self) -> CaseLabel {
        self.case_label
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    /// Corner points (polytope vertices other than the origin), sorted by
    /// ascending R1 and then descending R2.
    pub fn corner_points(&self) -> &[(Rational, Rational)] {
        &self.corner_points
    }

    /// Exact membership test for a non-negative rate pair.
    pub fn contains(&self, r1: &Rational, r2: &Rational) -> Result<bool> {
        if r1.is_negative() || r2.is_negative() {
            return Err(Error::InvalidInput(format!(
                "rates must be non-negative, got ({}, {})",
                rat_to_string(r1),
                rat_to_string(r2)
            )));
        }
        Ok(self
            .inequalities
            .iter()
            .all(|iq| iq.admits(r1, r2, &self.capacity)))
    }

    /// Inequalities that hold with equality at (r1, r2).
    pub fn tight_inequalities(&self, r1: &Rational, r2: &Rational) -> Vec<&RateInequality> {
        self.inequalities
            .iter()
            .filter(|iq| iq.a1() * r1 + iq.a2() * r2 == iq.bound() * &self.capacity)
            .collect()
    }
}

fn dedupe(ineqs: &mut Vec<RateInequality>) {
    let mut seen = BTreeSet::new();
    ineqs.retain(|iq| seen.insert(iq.canonical()));
}

/// Removes inequalities implied by the rest (exact 2-variable LP by vertex
/// enumeration; unboundedness detected by missing positive coefficients).
fn drop_redundant(ineqs: &mut Vec<RateInequality>, c: &Rational) {
    let mut i = 0;
    while i < ineqs.len() {
        let candidate = ineqs[i].clone();
        let others: Vec<RateInequality> =
            ineqs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
        if is_redundant(&candidate, &others, c) {
            ineqs.remove(i);
        } else {
            i += 1;
        }
    }
}

fn is_redundant(candidate: &RateInequality, others: &[RateInequality], c: &Rational) -> bool {
    // If the others leave a coordinate unbounded that the candidate constrains,
    // the candidate cuts something off.
    if candidate.a1.is_positive() && !others.iter().any(|iq| iq.a1.is_positive()) {
        return false;
    }
    if candidate.a2.is_positive() && !others.iter().any(|iq| iq.a2.is_positive()) {
        return false;
    }
    // Otherwise the feasible set of the others is a bounded polytope; the
    // candidate is redundant iff its left side never exceeds its bound there.
    let rhs = &candidate.bound * c;
    vertices(others, c)
        .into_iter()
        .all(|(r1, r2)| &candidate.a1 * &r1 + &candidate.a2 * &r2 <= rhs)
}

/// All vertices of {R >= 0} ∩ {inequalities}, origin included.
fn vertices(ineqs: &[RateInequality], c: &Rational) -> Vec<(Rational, Rational)> {
    // Boundary lines a1*x + a2*y = rhs, including the two axes.
    let mut lines: Vec<(Rational, Rational, Rational)> = vec![
        (rat_int(1), rat_int(0), rat_int(0)),
        (rat_int(0), rat_int(1), rat_int(0)),
    ];
    for iq in ineqs {
        lines.push((iq.a1.clone(), iq.a2.clone(), &iq.bound * c));
    }
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = &lines[i];
            let (a2, b2, c2) = &lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            let x = (c1 * b2 - c2 * b1) / &det;
            let y = (a1 * c2 - a2 * c1) / &det;
            if x.is_negative() || y.is_negative() {
                continue;
            }
            if !ineqs.iter().all(|iq| iq.admits(&x, &y, c)) {
                continue;
            }
            if !out.contains(&(x.clone(), y.clone())) {
                out.push((x, y));
            }
        }
    }
    out
}

fn corners(ineqs: &[RateInequality], c: &Rational) -> Vec<(Rational, Rational)> {
    let zero = rat_int(0);
    let mut pts: Vec<(Rational, Rational)> = vertices(ineqs, c)
        .into_iter()
        .filter(|(x, y)| !(x == &zero && y == &zero))
        .collect();
    pts.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    pts
}

/// Verdict of the single-path coverage condition: does group 1 contain one
/// single-path pattern for every path of some minimal group-2 pattern?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1Verdict {
    pub holds: bool,
    /// For a passing instance: the covering single-path patterns.
    pub witness: Option<BTreeSet<BlockagePattern>>,
}

/// Checks the coverage condition against every minimal group-2 pattern; it
/// holds if any of them is fully covered by group-1 single-path patterns.
pub fn check_c1(g: &Grouping) -> Result<C1Verdict> {
    if g.group2().is_empty() {
        return Err(Error::EmptyGroup(
            "the coverage condition needs a non-empty group 2".into(),
        ));
    }
    let (k2, _) = kappa(g.group2())?;
    let singles: BTreeSet<usize> = g
        .group1()
        .iter()
        .filter(|b| b.unblocked_count() == 1)
        .map(|b| *b.unblocked_set().iter().next().expect("non-empty"))
        .collect();
    for b in g.group2().iter().filter(|b| b.unblocked_count() == k2) {
        let paths = b.unblocked_set();
        if paths.is_subset(&singles) {
            let witness: BTreeSet<BlockagePattern> = g
                .group1()
                .iter()
                .filter(|s| {
                    s.unblocked_count() == 1
                        && paths.contains(s.unblocked_set().iter().next().unwrap())
                })
                .cloned()
                .collect();
            return Ok(C1Verdict { holds: true, witness: Some(witness) });
        }
    }
    Ok(C1Verdict { holds: false, witness: None })
}

fn ensure_admissible(g: &Grouping, cfg: &NetworkConfig) -> Result<()> {
    let report = validate_grouping(g, cfg.num_paths());
    if report.all_hold() {
        Ok(())
    } else {
        Err(Error::InadmissibleGrouping(report.violations))
    }
}

/// Assigns the structural case of an admissible grouping.
pub fn classify(g: &Grouping, cfg: &NetworkConfig) -> Result<CaseLabel> {
    ensure_admissible(g, cfg)?;
    if g.group2().is_empty() {
        return Ok(CaseLabel::G2Empty);
    }
    if g.group1().is_empty() {
        return Ok(CaseLabel::G1Empty);
    }
    let e = cfg.num_paths();
    if g.union().len() == (1usize << e) - 1 {
        return Ok(CaseLabel::AllPatterns);
    }
    if check_c1(g)?.holds {
        return Ok(CaseLabel::C1Holds);
    }
    if e == 3 {
        let (k2, _) = kappa(g.group2())?;
        return Ok(match (g.group1().len(), k2) {
            (1, _) => CaseLabel::Case2SingletonG1,
            (2..=3, _) => CaseLabel::ExternalSmallG1,
            (_, 2) => CaseLabel::Case2LargeG1Kappa2Eq2,
            (_, 3) => CaseLabel::Case3LargeG1Kappa2Eq3,
            // Unreachable for admissible groupings: kappa2 = 1 pins group 1
            // to the two remaining paths, so at most 3 patterns fit.
            _ => CaseLabel::Unsupported,
        });
    }
    Ok(CaseLabel::Unsupported)
}

/// Cut-set outer bound: R1 limited by the worst group-1 pattern, R1 + R2 by
/// the worst group-2 pattern. Errors when both groups are empty.
pub fn cutset_outer_bound(g: &Grouping, cfg: &NetworkConfig) -> Result<RateRegion> {
    ensure_admissible(g, cfg)?;
    if g.is_empty() {
        return Err(Error::DegenerateInstance(
            "cut-set bound over an empty grouping".into(),
        ));
    }
    let mut ineqs = Vec::new();
    for b in g.group1() {
        ineqs.push(RateInequality::new(
            rat_int(1),
            rat_int(0),
            rat_int(b.unblocked_count() as i64),
        )?);
    }
    for b in g.group2() {
        ineqs.push(RateInequality::new(
            rat_int(1),
            rat_int(1),
            rat_int(b.unblocked_count() as i64),
        )?);
    }
    Ok(RateRegion::build(
        ineqs,
        Exactness::OuterOnly,
        classify(g, cfg)?,
        cfg.capacity().clone(),
    ))
}

/// Rate region of an admissible instance: exact closed form where known,
/// otherwise the cut-set outer bound marked as such.
pub fn region(g: &Grouping, cfg: &NetworkConfig) -> Result<RateRegion> {
    let label = classify(g, cfg)?;
    let c = cfg.capacity().clone();
    let exact = |ineqs: Vec<RateInequality>| -> Result<RateRegion> {
        Ok(RateRegion::build(ineqs, Exactness::ExactClosedForm, label, c.clone()))
    };
    match label {
        CaseLabel::G2Empty => {
            if g.group1().is_empty() {
                // Nothing is ever required; the only sensible region is {0}.
                return exact(vec![
                    RateInequality::new(rat_int(1), rat_int(0), rat_int(0))?,
                    RateInequality::new(rat_int(0), rat_int(1), rat_int(0))?,
                ]);
            }
            let (k1, _) = kappa(g.group1())?;
            exact(vec![
                RateInequality::new(rat_int(1), rat_int(0), rat_int(k1 as i64))?,
                RateInequality::new(rat_int(0), rat_int(1), rat_int(0))?,
            ])
        }
        CaseLabel::G1Empty => {
            let (k2, _) = kappa(g.group2())?;
            exact(vec![RateInequality::new(
                rat_int(1),
                rat_int(1),
                rat_int(k2 as i64),
            )?])
        }
        CaseLabel::C1Holds => {
            let (k2, _) = kappa(g.group2())?;
            exact(vec![RateInequality::new(
                rat_int(1),
                Rational::new(1.into(), (k2 as i64).into()),
                rat_int(1),
            )?])
        }
        CaseLabel::Case2SingletonG1 | CaseLabel::Case2LargeG1Kappa2Eq2 => {
            let (k1, _) = kappa(g.group1())?;
            let (k2, _) = kappa(g.group2())?;
            exact(vec![
                RateInequality::new(rat_int(1), rat_int(0), rat_int(k1 as i64))?,
                RateInequality::new(rat_int(1), rat_int(1), rat_int(k2 as i64))?,
            ])
        }
        CaseLabel::Case3LargeG1Kappa2Eq3 => {
            let (k1, _) = kappa(g.group1())?;
            exact(vec![
                RateInequality::new(rat_int(1), rat_int(0), rat_int(k1 as i64))?,
                RateInequality::new(rat_int(2), rat_int(1), rat_int(3))?,
            ])
        }
        CaseLabel::ExternalSmallG1 | CaseLabel::AllPatterns | CaseLabel::Unsupported => {
            cutset_outer_bound(g, cfg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::enumerate_patterns;
    use crate::rational::rat;

    fn cfg(e: usize) -> NetworkConfig {
        NetworkConfig::new(e, rat_int(1), vec![0.1; e]).unwrap()
    }

    fn pats(strs: &[&str]) -> BTreeSet<BlockagePattern> {
        strs.iter().map(|s| s.parse().unwrap()).collect()
    }

    // Coverage condition satisfied; exact for any path count.
    fn instance_coverage() -> Grouping {
        Grouping::parse(&["100", "010", "101", "011"], &["110", "111"]).unwrap()
    }

    // Four group-1 patterns, minimal group-2 pattern has two paths.
    fn instance_two_path_bottleneck() -> Grouping {
        Grouping::parse(&["100", "010", "110", "011"], &["101", "111"]).unwrap()
    }

    // Four group-1 patterns, group 2 demands all three paths.
    fn instance_three_path_bottleneck() -> Grouping {
        Grouping::parse(&["100", "010", "110", "011"], &["111"]).unwrap()
    }

    fn points(region: &RateRegion) -> Vec<(Rational, Rational)> {
        region.corner_points().to_vec()
    }

    #[test]
    fn coverage_condition_verdicts() {
        let v = check_c1(&instance_coverage()).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.unwrap(), pats(&["100", "010"]));

        let v = check_c1(&instance_two_path_bottleneck()).unwrap();
        assert!(!v.holds);
        assert!(v.witness.is_none());

        let v = check_c1(&instance_three_path_bottleneck()).unwrap();
        assert!(!v.holds);

        let g2_empty = Grouping::parse(&["100"], &[]).unwrap();
        assert!(check_c1(&g2_empty).is_err());
    }

    #[test]
    fn coverage_condition_checks_every_minimizer() {
        // Two minimal group-2 patterns; only the second is covered.
        let g = Grouping::parse(&["010", "001", "100"], &["110", "011"]).unwrap();
        // singles {1,2,3} cover both; shrink to singles {2,3}: covers 011 only.
        let g_partial = Grouping::parse(&["010", "001"], &["110", "011"]).unwrap();
        assert!(check_c1(&g).unwrap().holds);
        let v = check_c1(&g_partial).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.unwrap(), pats(&["010", "001"]));
    }

    #[test]
    fn classify_examples() {
        let c = cfg(3);
        assert_eq!(classify(&instance_coverage(), &c).unwrap(), CaseLabel::C1Holds);
        assert_eq!(
            classify(&instance_two_path_bottleneck(), &c).unwrap(),
            CaseLabel::Case2LargeG1Kappa2Eq2
        );
        assert_eq!(
            classify(&instance_three_path_bottleneck(), &c).unwrap(),
            CaseLabel::Case3LargeG1Kappa2Eq3
        );
        let singleton = Grouping::parse(&["100"], &["011"]).unwrap();
        assert_eq!(classify(&singleton, &c).unwrap(), CaseLabel::Case2SingletonG1);
        let small = Grouping::parse(&["100", "110"], &["011", "101"]).unwrap();
        assert_eq!(classify(&small, &c).unwrap(), CaseLabel::ExternalSmallG1);
        let g1_empty = Grouping::parse(&[], &["111"]).unwrap();
        assert_eq!(classify(&g1_empty, &c).unwrap(), CaseLabel::G1Empty);
        let g2_empty = Grouping::parse(&["110"], &[]).unwrap();
        assert_eq!(classify(&g2_empty, &c).unwrap(), CaseLabel::G2Empty);

        // Empty group 1 wins over the all-patterns label.
        let all: Vec<_> = enumerate_patterns(3).unwrap().into_iter().collect();
        let g_all_in_2 = Grouping::new([], all).unwrap();
        assert_eq!(classify(&g_all_in_2, &c).unwrap(), CaseLabel::G1Empty);

        let g_all =
            Grouping::parse(&["100", "010", "001"], &["110", "101", "011", "111"]).unwrap();
        assert_eq!(classify(&g_all, &c).unwrap(), CaseLabel::AllPatterns);

        let bad = Grouping::parse(&["111"], &["100"]).unwrap();
        assert!(matches!(classify(&bad, &c), Err(Error::InadmissibleGrouping(_))));
    }

    #[test]
    fn classify_unsupported_beyond_three_paths() {
        let c = cfg(4);
        let g = Grouping::parse(&["1000"], &["0110"]).unwrap();
        assert_eq!(classify(&g, &c).unwrap(), CaseLabel::Unsupported);
        // Coverage condition still classifies exactly for 4 paths.
        let g = Grouping::parse(&["1000", "0100"], &["1100", "1111"]).unwrap();
        assert_eq!(classify(&g, &c).unwrap(), CaseLabel::C1Holds);
    }

    #[test]
    fn region_coverage_case() {
        let r = region(&instance_coverage(), &cfg(3)).unwrap();
        assert_eq!(r.exactness(), Exactness::ExactClosedForm);
        assert_eq!(r.inequalities().len(), 1);
        let iq = &r.inequalities()[0];
        assert_eq!(iq.canonical(), (2.into(), 1.into(), 2.into()));
        assert_eq!(iq.display(&rat_int(1)), "R1 + 0.5·R2 ≤ 1");
        assert_eq!(points(&r), vec![(rat_int(0), rat_int(2)), (rat_int(1), rat_int(0))]);
    }

    #[test]
    fn region_two_path_bottleneck() {
        let r = region(&instance_two_path_bottleneck(), &cfg(3)).unwrap();
        assert_eq!(r.inequalities().len(), 2);
        assert_eq!(
            points(&r),
            vec![
                (rat_int(0), rat_int(2)),
                (rat_int(1), rat_int(1)),
                (rat_int(1), rat_int(0)),
            ]
        );
    }

    #[test]
    fn region_three_path_bottleneck() {
        let r = region(&instance_three_path_bottleneck(), &cfg(3)).unwrap();
        let displays: Vec<String> =
            r.inequalities().iter().map(|iq| iq.display(&rat_int(1))).collect();
        assert_eq!(displays, vec!["R1 ≤ 1", "2·R1 + R2 ≤ 3"]);
        assert_eq!(
            points(&r),
            vec![
                (rat_int(0), rat_int(3)),
                (rat_int(1), rat_int(1)),
                (rat_int(1), rat_int(0)),
            ]
        );
    }

    #[test]
    fn region_group_extremes() {
        let c = cfg(3);
        let g2_empty = Grouping::parse(&["110", "111"], &[]).unwrap();
        let r = region(&g2_empty, &c).unwrap();
        assert_eq!(points(&r), vec![(rat_int(2), rat_int(0))]);

        let g1_empty = Grouping::parse(&[], &["111"]).unwrap();
        let r = region(&g1_empty, &c).unwrap();
        assert_eq!(r.inequalities().len(), 1);
        assert_eq!(points(&r), vec![(rat_int(0), rat_int(3)), (rat_int(3), rat_int(0))]);

        // Equal minima collapse the region to a single sum constraint.
        let equal = Grouping::parse(&["110"], &["011", "111"]).unwrap();
        assert_eq!(classify(&equal, &c).unwrap(), CaseLabel::Case2SingletonG1);
        let r = region(&equal, &c).unwrap();
        assert_eq!(r.inequalities().len(), 1);
        assert_eq!(r.inequalities()[0].canonical(), (1.into(), 1.into(), 2.into()));
    }

    #[test]
    fn degenerate_empty_grouping() {
        let c = cfg(3);
        let empty = Grouping::new([], []).unwrap();
        let r = region(&empty, &c).unwrap();
        assert!(r.corner_points().is_empty());
        assert!(r.contains(&rat_int(0), &rat_int(0)).unwrap());
        assert!(!r.contains(&rat(1, 2), &rat_int(0)).unwrap());
        assert!(cutset_outer_bound(&empty, &c).is_err());
    }

    #[test]
    fn cutset_examples() {
        let c = cfg(3);
        let r = cutset_outer_bound(&instance_two_path_bottleneck(), &c).unwrap();
        let canon: Vec<_> = r.inequalities().iter().map(|iq| iq.canonical()).collect();
        assert_eq!(
            canon,
            vec![
                (1.into(), 0.into(), 1.into()),
                (1.into(), 1.into(), 2.into()),
            ]
        );

        let g1_empty = Grouping::parse(&[], &["111"]).unwrap();
        let r = cutset_outer_bound(&g1_empty, &c).unwrap();
        assert_eq!(r.inequalities().len(), 1);
        assert_eq!(r.inequalities()[0].canonical(), (1.into(), 1.into(), 3.into()));

        // The exact region is strictly inside the cut-set bound here.
        let exact = region(&instance_coverage(), &c).unwrap();
        let outer = cutset_outer_bound(&instance_coverage(), &c).unwrap();
        let (p1, p2) = (rat(1, 2), rat(3, 2));
        assert!(outer.contains(&p1, &p2).unwrap());
        assert!(!exact.contains(&p1, &p2).unwrap());
    }

    #[test]
    fn contains_examples() {
        let r = region(&instance_coverage(), &cfg(3)).unwrap();
        assert!(r.contains(&rat_int(0), &rat_int(2)).unwrap());
        assert!(r.contains(&rat_int(1), &rat_int(0)).unwrap());
        assert!(r.contains(&rat(1, 2), &rat_int(1)).unwrap());
        assert!(!r.contains(&rat(3, 5), &rat(9, 10)).unwrap());
        assert!(r.contains(&rat_int(0), &rat_int(0)).unwrap());
        assert!(r.contains(&rat_int(0), &rat_int(0)).unwrap());
        assert!(r.contains(&rat(-1, 2), &rat_int(0)).is_err());
    }

    #[test]
    fn capacity_scales_bounds() {
        let c = NetworkConfig::new(3, rat(3, 2), vec![0.1, 0.1, 0.1]).unwrap();
        let r = region(&instance_two_path_bottleneck(), &c).unwrap();
        assert_eq!(
            points(&r),
            vec![
                (rat_int(0), rat_int(3)),
                (rat(3, 2), rat(3, 2)),
                (rat(3, 2), rat_int(0)),
            ]
        );
        assert_eq!(r.inequalities()[0].display(&rat(3, 2)), "R1 ≤ 3/2");
    }

    #[test]
    fn coverage_case_kappa1_is_one() {
        // Structural consequence: the coverage condition requires single-path
        // patterns in group 1.
        for g in [instance_coverage(), Grouping::parse(&["010", "001"], &["011"]).unwrap()] {
            if classify(&g, &cfg(3)).unwrap() == CaseLabel::C1Holds {
                assert_eq!(kappa(g.group1()).unwrap().0, 1);
            }
        }
    }
}
