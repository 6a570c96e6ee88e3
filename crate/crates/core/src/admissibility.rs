//! Exact decision procedures for the hypothesis sets of the product and
//! convolution theorems.
//!
//! Every check is an ordered list of [`Clause`]s. The first clause that
//! fails decides the [`Verdict`]; re-evaluating that clause alone with
//! [`clause_holds`] reproduces the failure. Clause order is fixed:
//! exponent condition, pairwise weight sums `(0,1), (0,2), (1,2)`, the
//! weight-sum inequality, the Hölder condition on `p`, the `t` condition.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponents::{
    cond_base, cond_prime, format_recip, format_rational, r_functional, Exponent, ExponentTriple,
    Rational,
};

/// Weight indices `(s0, s1, s2)` together with the dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightTriple {
    pub s: [Rational; 3],
    pub d: u32,
}

impl WeightTriple {
    pub fn new(s0: Rational, s1: Rational, s2: Rational, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(WeightTriple { s: [s0, s1, s2], d })
    }

    /// Parses decimal or `p/q` strings.
    pub fn parse<S: AsRef<str>>(items: &[S], d: u32) -> Result<Self> {
        let [a, b, c] = parse_three(items)?;
        Self::new(a, b, c, d)
    }

    pub fn d_rational(&self) -> Rational {
        Rational::from_integer(self.d as i64)
    }
}

pub(crate) fn parse_three<S: AsRef<str>>(items: &[S]) -> Result<[Rational; 3]> {
    if items.len() != 3 {
        return Err(Error::Parse {
            input: items.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(","),
            reason: "expected three values".into(),
        });
    }
    Ok([
        crate::exponents::parse_rational(items[0].as_ref())?,
        crate::exponents::parse_rational(items[1].as_ref())?,
        crate::exponents::parse_rational(items[2].as_ref())?,
    ])
}

/// Exponents and weights for the modulation / Wiener amalgam statements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FullSpec {
    pub q: ExponentTriple,
    pub s: WeightTriple,
    pub t: Option<[Rational; 3]>,
    pub p: Option<ExponentTriple>,
}

impl FullSpec {
    pub fn new(q: ExponentTriple, s: WeightTriple) -> Self {
        FullSpec {
            q,
            s,
            t: None,
            p: None,
        }
    }

    pub fn with_t(mut self, t: [Rational; 3]) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_p(mut self, p: ExponentTriple) -> Self {
        self.p = Some(p);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "FL")]
    FourierLebesgue,
    #[serde(rename = "L")]
    Lebesgue,
    #[serde(rename = "M")]
    Modulation,
    #[serde(rename = "W")]
    Wiener,
    /// Kernel class `L^{p,q}_1` (inner integral over the first variable).
    #[serde(rename = "L1-mixed")]
    Mixed1,
    /// Kernel class `L^{p,q}_2` (inner integral over the second variable).
    #[serde(rename = "L2-mixed")]
    Mixed2,
}

/// Space descriptor carried by a verdict, e.g. `FL^{2}_{0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetSpace {
    pub family: Family,
    pub exponents: Vec<String>,
    pub weights: Vec<String>,
}

impl fmt::Display for TargetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            Family::FourierLebesgue => "FL",
            Family::Lebesgue => "L",
            Family::Modulation => "M",
            Family::Wiener => "W",
            Family::Mixed1 => "L_1",
            Family::Mixed2 => "L_2",
        };
        write!(f, "{family}^{{{}}}", self.exponents.join(","))?;
        if !self.weights.is_empty() {
            write!(f, "_{{{}}}", self.weights.join(","))?;
        }
        Ok(())
    }
}

/// Which equalities upgrade the weight-sum inequality to a strict one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrictRule {
    /// `R(q) > 0` and `s_j = d R(q)` for some `j`.
    Product,
    /// One of `s0, s1, s2, -s0` equals `d R(q)` (no sign condition on `R`).
    Microlocal,
    /// One of `s1, s2, -s0` equals `d R(q)`.
    Decomposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    AllSatisfied,
    /// `0 <= R(q) <= 1/2` (equivalently its max/min form).
    ExponentRange,
    /// `0 <= s_j + s_k`.
    PairwiseSum(u8, u8),
    /// `0 <= s0 + s1 + s2 - d R(q)` with the given strictness rule.
    WeightSum(StrictRule),
    /// `1/p0 + 1/p1 + 1/p2 = 1`.
    Holder,
    /// `0 <= t0 + t1 + t2`.
    ModulationT,
    /// `t0 <= t1 + t2`.
    WienerT,
    /// `0 <= R(q)`, needed before `r = 1/R(q)` makes sense.
    NonNegativeR,
    /// Part 1: `R <= 1/q0'`; part 2: `R <= max(1/2, 1/q1)`; part 3: `R <= max(1/2, 1/q2)`.
    KernelExponent(u8),
    /// Exponent bound for region `j` of the frequency decomposition.
    RegionExponent(u8),
    /// `s0 <= s_k` for region `j` (`j = 1, 2`).
    RegionOrder(u8, u8),
    /// `s0 <= s1 + s2 - d R(q)`, with the region's strictness rule.
    RegionWeightSum(u8),
    /// `0 <= s1 + s2`, strict for `j = 4, 5` when `s0 = -d R(q)`.
    RegionPairSum(u8),
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::AllSatisfied => f.write_str("all-satisfied"),
            Clause::ExponentRange => f.write_str("lastineq1"),
            Clause::PairwiseSum(j, k) => write!(f, "lastineq2.pair{j}{k}"),
            Clause::WeightSum(_) => f.write_str("lastineq2.sum"),
            Clause::Holder => f.write_str("pjHoldercond"),
            Clause::ModulationT => f.write_str("t-sum"),
            Clause::WienerT => f.write_str("t-wiener"),
            Clause::NonNegativeR => f.write_str("r-nonnegative"),
            Clause::KernelExponent(part) => write!(f, "kernel.part{part}"),
            Clause::RegionExponent(j) => write!(f, "region{j}.exponent"),
            Clause::RegionOrder(j, k) => write!(f, "region{j}.s0<=s{k}"),
            Clause::RegionWeightSum(j) => write!(f, "region{j}.sum"),
            Clause::RegionPairSum(j) => write!(f, "region{j}.s1+s2"),
        }
    }
}

impl Serialize for Clause {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Outcome of a hypothesis check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub admissible: bool,
    /// First failed clause, or [`Clause::AllSatisfied`].
    pub clause: Clause,
    pub target: TargetSpace,
    /// Whether a strictness exception upgraded a weight inequality.
    pub strictness_triggered: bool,
}

impl Verdict {
    pub fn to_json(&self) -> serde_json::Value {
        let mut value = serde_json::to_value(self).expect("verdict serializes");
        value["schema_version"] = serde_json::Value::from("1");
        value
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

fn strictness(rule: StrictRule, spec: &FullSpec) -> bool {
    let r = r_functional(&spec.q);
    let dr = spec.s.d_rational() * r;
    let [s0, s1, s2] = spec.s.s;
    match rule {
        StrictRule::Product => r.is_positive() && [s0, s1, s2].contains(&dr),
        StrictRule::Microlocal => [s0, s1, s2, -s0].contains(&dr),
        StrictRule::Decomposition => [s1, s2, -s0].contains(&dr),
    }
}

fn region_strict(j: u8, spec: &FullSpec) -> bool {
    let dr = spec.s.d_rational() * r_functional(&spec.q);
    let [s0, s1, s2] = spec.s.s;
    match j {
        1 | 2 => s1 == dr || s2 == dr,
        4 | 5 => s0 == -dr,
        _ => false,
    }
}

/// Whether a clause's strictness exception is active for `spec`.
pub fn clause_strictness(clause: Clause, spec: &FullSpec) -> bool {
    match clause {
        Clause::WeightSum(rule) => strictness(rule, spec),
        Clause::RegionWeightSum(j) | Clause::RegionPairSum(j) => match (clause, j) {
            (Clause::RegionWeightSum(_), 1 | 2) => region_strict(j, spec),
            (Clause::RegionPairSum(_), 4 | 5) => region_strict(j, spec),
            _ => false,
        },
        _ => false,
    }
}

fn at_least(value: Rational, strict: bool) -> bool {
    if strict {
        value.is_positive()
    } else {
        !value.is_negative()
    }
}

/// Evaluates a single clause against `spec`.
pub fn clause_holds(clause: Clause, spec: &FullSpec) -> Result<bool> {
    let q = &spec.q;
    let r = r_functional(q);
    let d = spec.s.d_rational();
    let [s0, s1, s2] = spec.s.s;
    let strict = clause_strictness(clause, spec);
    Ok(match clause {
        Clause::AllSatisfied => true,
        Clause::ExponentRange => cond_base(q) || cond_prime(q),
        Clause::PairwiseSum(j, k) => {
            let (j, k) = (j as usize, k as usize);
            if j > 2 || k > 2 || j == k {
                return Err(Error::InvalidIndex {
                    index: j.max(k),
                    range: "distinct 0..=2",
                });
            }
            !(spec.s.s[j] + spec.s.s[k]).is_negative()
        }
        Clause::WeightSum(_) => at_least(s0 + s1 + s2 - d * r, strict),
        Clause::Holder => holder_ok(&spec.p.ok_or(Error::Missing("p"))?),
        Clause::ModulationT => {
            let [t0, t1, t2] = spec.t.ok_or(Error::Missing("t"))?;
            !(t0 + t1 + t2).is_negative()
        }
        Clause::WienerT => {
            let [t0, t1, t2] = spec.t.ok_or(Error::Missing("t"))?;
            t0 <= t1 + t2
        }
        Clause::NonNegativeR => !r.is_negative(),
        Clause::KernelExponent(part) => match part {
            1 => r <= q.q0.dual().recip(),
            2 => r <= half().max(q.q1.recip()),
            3 => r <= half().max(q.q2.recip()),
            _ => {
                return Err(Error::InvalidIndex {
                    index: part as usize,
                    range: "1..=3",
                })
            }
        },
        Clause::RegionExponent(j) => match j {
            1 | 2 => r <= q.q0.recip(),
            3 => {
                // q1, q2 < 2  <=>  both reciprocals exceed 1/2
                if q.q1.recip() > half() && q.q2.recip() > half() {
                    r <= q.q1.recip().min(q.q2.recip())
                } else {
                    r <= half()
                }
            }
            4 => r <= q.q2.recip().max(half()),
            5 => r <= q.q1.recip().max(half()),
            _ => return Err(region_index_error(j)),
        },
        Clause::RegionOrder(_, k) => match k {
            1 => s0 <= s1,
            2 => s0 <= s2,
            _ => {
                return Err(Error::InvalidIndex {
                    index: k as usize,
                    range: "1..=2",
                })
            }
        },
        Clause::RegionWeightSum(_) => at_least(s1 + s2 - d * r - s0, strict),
        Clause::RegionPairSum(_) => at_least(s1 + s2, strict),
    })
}

fn region_index_error(j: u8) -> Error {
    Error::InvalidIndex {
        index: j as usize,
        range: "1..=5",
    }
}

fn decide(clauses: &[Clause], spec: &FullSpec, target: TargetSpace) -> Result<Verdict> {
    let strictness_triggered = clauses.iter().any(|&c| clause_strictness(c, spec));
    for &clause in clauses {
        if !clause_holds(clause, spec)? {
            return Ok(Verdict {
                admissible: false,
                clause,
                target,
                strictness_triggered,
            });
        }
    }
    Ok(Verdict {
        admissible: true,
        clause: Clause::AllSatisfied,
        target,
        strictness_triggered,
    })
}

const PAIRS: [Clause; 3] = [
    Clause::PairwiseSum(0, 1),
    Clause::PairwiseSum(0, 2),
    Clause::PairwiseSum(1, 2),
];

fn single_target(family: Family, q0: Exponent, s0: Rational) -> TargetSpace {
    TargetSpace {
        family,
        exponents: vec![q0.dual().to_string()],
        weights: vec![format_rational(-s0)],
    }
}

/// `1/p0 + 1/p1 + 1/p2 = 1`, exactly.
pub fn holder_ok(p: &ExponentTriple) -> bool {
    p.recips().iter().copied().sum::<Rational>() == Rational::from_integer(1)
}

/// Pairwise sums and the weight-sum inequality, with the product-theorem
/// strictness rule (strict when `R(q) > 0` and some `s_j = d R(q)`).
pub fn weight_conditions(q: &ExponentTriple, s: &WeightTriple) -> Verdict {
    let spec = FullSpec::new(*q, *s);
    let mut clauses = PAIRS.to_vec();
    clauses.push(Clause::WeightSum(StrictRule::Product));
    decide(&clauses, &spec, single_target(Family::FourierLebesgue, q.q0, s.s[0]))
        .expect("clauses need no optional fields")
}

fn product_clauses() -> Vec<Clause> {
    let mut clauses = vec![Clause::ExponentRange];
    clauses.extend(PAIRS);
    clauses.push(Clause::WeightSum(StrictRule::Product));
    clauses
}

/// `FL^{q1}_{s1} x FL^{q2}_{s2} -> FL^{q0'}_{-s0}` for the pointwise product.
pub fn check_fl_product(q: &ExponentTriple, s: &WeightTriple) -> Verdict {
    decide(
        &product_clauses(),
        &FullSpec::new(*q, *s),
        single_target(Family::FourierLebesgue, q.q0, s.s[0]),
    )
    .expect("clauses need no optional fields")
}

/// `L^{q1}_{s1} x L^{q2}_{s2} -> L^{q0'}_{-s0}` for convolution.
pub fn check_prop44(q: &ExponentTriple, s: &WeightTriple) -> Verdict {
    decide(
        &product_clauses(),
        &FullSpec::new(*q, *s),
        single_target(Family::Lebesgue, q.q0, s.s[0]),
    )
    .expect("clauses need no optional fields")
}

fn time_frequency_check(spec: &FullSpec, family: Family, t_clause: Clause) -> Result<Verdict> {
    let p = spec.p.ok_or(Error::Missing("p"))?;
    let t = spec.t.ok_or(Error::Missing("t"))?;
    let mut clauses = product_clauses();
    clauses.push(Clause::Holder);
    clauses.push(t_clause);
    let target = TargetSpace {
        family,
        exponents: vec![p.q0.dual().to_string(), spec.q.q0.dual().to_string()],
        weights: vec![format_rational(-spec.s.s[0]), format_rational(-t[0])],
    };
    decide(&clauses, spec, target)
}

/// Products on modulation spaces: target `M^{p0',q0'}_{-s0,-t0}`.
pub fn check_modulation_product(spec: &FullSpec) -> Result<Verdict> {
    time_frequency_check(spec, Family::Modulation, Clause::ModulationT)
}

/// Products on Wiener amalgam spaces: target `W^{p0',q0'}_{-s0,-t0}`.
pub fn check_wiener_product(spec: &FullSpec) -> Result<Verdict> {
    time_frequency_check(spec, Family::Wiener, Clause::WienerT)
}

/// Hypotheses of the wavefront inclusion for products. The strict form of
/// the weight-sum inequality is required whenever one of `s0, s1, s2, -s0`
/// equals `d R(q)`, regardless of the sign of `R(q)`.
pub fn check_microlocal(q: &ExponentTriple, s: &WeightTriple) -> Verdict {
    let mut clauses = vec![Clause::ExponentRange];
    clauses.extend(PAIRS);
    clauses.push(Clause::WeightSum(StrictRule::Microlocal));
    decide(
        &clauses,
        &FullSpec::new(*q, *s),
        single_target(Family::FourierLebesgue, q.q0, s.s[0]),
    )
    .expect("clauses need no optional fields")
}

/// Hypotheses under which every region operator of the frequency
/// decomposition is bounded: strict weight sum when one of `s1, s2, -s0`
/// equals `d R(q)`.
pub fn check_decomposition(q: &ExponentTriple, s: &WeightTriple) -> Verdict {
    let mut clauses = vec![Clause::ExponentRange];
    clauses.extend(PAIRS);
    clauses.push(Clause::WeightSum(StrictRule::Decomposition));
    decide(
        &clauses,
        &FullSpec::new(*q, *s),
        single_target(Family::Lebesgue, q.q0, s.s[0]),
    )
    .expect("clauses need no optional fields")
}

/// Kernel conditions for `T_F` (part 1) and `T_{ΘF}` (parts 2, 3) with
/// `r = 1/R(q)`. Errors when `R(q) < 0`.
pub fn check_prop31(q: &ExponentTriple, part: u8) -> Result<Verdict> {
    let r = r_functional(q);
    if r.is_negative() {
        return Err(Error::Hypothesis(format!(
            "R(q) = {} is negative",
            format_rational(r)
        )));
    }
    let (clauses, target) = match part {
        1 => (
            vec![Clause::KernelExponent(1)],
            TargetSpace {
                family: Family::Mixed2,
                exponents: vec!["inf".into(), format_recip(r)],
                weights: vec![],
            },
        ),
        2 | 3 => (
            vec![Clause::KernelExponent(1), Clause::KernelExponent(part)],
            TargetSpace {
                family: Family::Mixed1,
                exponents: vec![format_recip(r), "inf".into()],
                weights: vec![],
            },
        ),
        _ => {
            return Err(Error::InvalidIndex {
                index: part as usize,
                range: "1..=3",
            })
        }
    };
    let s = WeightTriple::new(Rational::zero(), Rational::zero(), Rational::zero(), 1)?;
    decide(&clauses, &FullSpec::new(*q, s), target)
}

/// Per-region hypotheses for `T_{F_j}(u1, u2)`, `j = 1..=5`.
pub fn check_lemma_tfj(j: u8, q: &ExponentTriple, s: &WeightTriple) -> Result<Verdict> {
    let clauses = match j {
        1 | 2 => vec![
            Clause::RegionExponent(j),
            Clause::RegionOrder(j, 1),
            Clause::RegionOrder(j, 2),
            Clause::RegionWeightSum(j),
        ],
        3 => vec![Clause::RegionExponent(3), Clause::RegionPairSum(3)],
        4 | 5 => vec![
            Clause::RegionExponent(j),
            Clause::RegionPairSum(j),
            Clause::RegionWeightSum(j),
        ],
        _ => return Err(region_index_error(j)),
    };
    decide(
        &clauses,
        &FullSpec::new(*q, *s),
        single_target(Family::Lebesgue, q.q0, s.s[0]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::reciprocal_lattice;

    fn q3(a: &str, b: &str, c: &str) -> ExponentTriple {
        ExponentTriple::parse(&[a, b, c]).unwrap()
    }

    fn s3(a: &str, b: &str, c: &str, d: u32) -> WeightTriple {
        WeightTriple::parse(&[a, b, c], d).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn holder_examples() {
        assert!(holder_ok(&q3("3", "3", "3")));
        assert!(holder_ok(&q3("2", "2", "inf")));
        assert!(!holder_ok(&q3("2", "2", "2")));
    }

    #[test]
    fn weight_condition_examples() {
        let v = weight_conditions(&q3("2", "2", "2"), &s3("0.3", "0.3", "0.3", 1));
        assert!(v.admissible);
        assert!(!v.strictness_triggered);

        let v = weight_conditions(&q3("2", "2", "2"), &s3("0.5", "0.5", "-0.5", 1));
        assert!(!v.admissible);
        assert!(v.strictness_triggered);
        assert_eq!(v.clause, Clause::WeightSum(StrictRule::Product));

        let v = weight_conditions(&q3("1", "2", "2"), &s3("0", "0", "0", 3));
        assert!(v.admissible);
        assert!(!v.strictness_triggered);
    }

    #[test]
    fn fl_product_examples() {
        let v = check_fl_product(&q3("2", "2", "2"), &s3("0", "1", "1", 1));
        assert!(v.admissible);
        assert_eq!(v.target.to_string(), "FL^{2}_{0}");

        let v = check_fl_product(&q3("4", "4", "4"), &s3("5", "5", "5", 1));
        assert!(!v.admissible);
        assert_eq!(v.clause.to_string(), "lastineq1");

        let v = check_fl_product(&q3("2", "2", "2"), &s3("0.5", "0.5", "0.5", 1));
        assert!(v.admissible);
        assert!(v.strictness_triggered);
    }

    #[test]
    fn pairwise_order_is_fixed() {
        let v = check_fl_product(&q3("2", "2", "2"), &s3("-2", "1", "1", 1));
        assert_eq!(v.clause, Clause::PairwiseSum(0, 1));
        let v = check_fl_product(&q3("2", "2", "2"), &s3("1", "1", "-2", 1));
        assert_eq!(v.clause, Clause::PairwiseSum(0, 2));
        let v = check_fl_product(&q3("2", "2", "2"), &s3("3", "-1", "-1", 1));
        assert_eq!(v.clause, Clause::PairwiseSum(1, 2));
    }

    fn tf_spec(p: &str, t: [i64; 3]) -> FullSpec {
        FullSpec::new(q3("2", "2", "2"), s3("0", "1", "1", 1))
            .with_p(q3(p, p, p))
            .with_t(t.map(Rational::from_integer))
    }

    #[test]
    fn modulation_examples() {
        let v = check_modulation_product(&tf_spec("3", [0, 0, 0])).unwrap();
        assert!(v.admissible);
        assert_eq!(v.target.to_string(), "M^{3/2,2}_{0,0}");

        let v = check_modulation_product(&tf_spec("3", [-1, 0, 0])).unwrap();
        assert_eq!(v.clause.to_string(), "t-sum");

        let v = check_modulation_product(&tf_spec("2", [0, 0, 0])).unwrap();
        assert_eq!(v.clause.to_string(), "pjHoldercond");

        let missing = FullSpec::new(q3("2", "2", "2"), s3("0", "1", "1", 1));
        assert!(matches!(check_modulation_product(&missing), Err(Error::Missing("p"))));
    }

    #[test]
    fn wiener_examples() {
        assert!(check_wiener_product(&tf_spec("3", [1, 1, 0])).unwrap().admissible);
        let v = check_wiener_product(&tf_spec("3", [1, 0, 0])).unwrap();
        assert_eq!(v.clause, Clause::WienerT);
        assert!(check_wiener_product(&tf_spec("3", [0, 0, 0])).unwrap().admissible);
        assert_eq!(
            check_wiener_product(&tf_spec("3", [0, 0, 0])).unwrap().target.family,
            Family::Wiener
        );
    }

    #[test]
    fn microlocal_examples() {
        let v = check_microlocal(&q3("2", "2", "2"), &s3("-0.5", "1", "1", 1));
        assert!(v.strictness_triggered);

        let v = check_microlocal(&q3("1", "2", "2"), &s3("0", "0", "0", 1));
        assert!(v.strictness_triggered);
        assert!(!v.admissible);
        assert_eq!(v.clause, Clause::WeightSum(StrictRule::Microlocal));

        assert!(check_microlocal(&q3("2", "2", "2"), &s3("0.6", "0.6", "0.6", 1)).admissible);
    }

    #[test]
    fn prop31_examples() {
        let v = check_prop31(&q3("2", "2", "2"), 1).unwrap();
        assert!(v.admissible);
        assert_eq!(v.target.to_string(), "L_2^{inf,2}");

        assert!(check_prop31(&q3("inf", "1", "2"), 1).unwrap().admissible);
        let v = check_prop31(&q3("inf", "4", "4"), 1).unwrap();
        assert!(!v.admissible);
        assert_eq!(v.target.exponents[1], "2/3");

        assert!(check_prop31(&q3("1", "1", "1"), 1).is_err());
        assert!(check_prop31(&q3("2", "2", "2"), 4).is_err());
        let v = check_prop31(&q3("2", "2", "2"), 2).unwrap();
        assert_eq!(v.target.family, Family::Mixed1);
    }

    #[test]
    fn region_examples() {
        let v = check_lemma_tfj(3, &q3("2", "2", "2"), &s3("7", "1", "-0.5", 1)).unwrap();
        assert!(v.admissible);

        let v = check_lemma_tfj(1, &q3("2", "2", "2"), &s3("0", "0.5", "0.5", 1)).unwrap();
        assert!(v.admissible);
        assert!(v.strictness_triggered);

        // s0 = -d R with s1 + s2 = 0.
        let v = check_lemma_tfj(4, &q3("2", "2", "2"), &s3("-0.5", "1", "-1", 1)).unwrap();
        assert!(!v.admissible);
        assert_eq!(v.clause, Clause::RegionPairSum(4));

        assert!(check_lemma_tfj(0, &q3("2", "2", "2"), &s3("0", "0", "0", 1)).is_err());
        assert!(check_lemma_tfj(6, &q3("2", "2", "2"), &s3("0", "0", "0", 1)).is_err());
    }

    #[test]
    fn region3_case_split() {
        // q1, q2 < 2: bound is min(1/q1, 1/q2).
        let q = q3("inf", "3/2", "3/2");
        assert_eq!(r_functional(&q), rat(2, 3));
        let v = check_lemma_tfj(3, &q, &s3("0", "0", "0", 1)).unwrap();
        assert!(v.admissible);
        // q1 >= 2: bound drops to 1/2.
        let q = q3("inf", "2", "4/3");
        assert_eq!(r_functional(&q), rat(3, 4));
        let v = check_lemma_tfj(3, &q, &s3("0", "0", "0", 1)).unwrap();
        assert!(!v.admissible);
    }

    #[test]
    fn prop44_examples() {
        let v = check_prop44(&q3("2", "2", "2"), &s3("0", "1", "1", 1));
        assert!(v.admissible);
        assert_eq!(v.target.to_string(), "L^{2}_{0}");
        assert!(!check_prop44(&q3("1", "1", "1"), &s3("0", "0", "0", 1)).admissible);
        assert!(check_prop44(&q3("2", "1", "2"), &s3("0", "0", "0", 2)).admissible);
    }

    fn weight_lattice() -> Vec<[Rational; 3]> {
        let values: Vec<Rational> = (-4..=4).map(|k| rat(k, 4)).collect();
        let mut out = Vec::new();
        for &a in &values {
            for &b in &values {
                for &c in &values {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    #[test]
    fn failing_clause_reproduces_and_product_matches_convolution() {
        for q in reciprocal_lattice(rat(1, 4)).unwrap() {
            for s in weight_lattice() {
                for d in 1..=3 {
                    let w = WeightTriple { s, d };
                    let fl = check_fl_product(&q, &w);
                    assert_eq!(fl.admissible, check_prop44(&q, &w).admissible);
                    for v in [fl, check_microlocal(&q, &w)] {
                        if !v.admissible {
                            assert!(!clause_holds(v.clause, &FullSpec::new(q, w)).unwrap());
                        } else {
                            assert_eq!(v.clause, Clause::AllSatisfied);
                        }
                    }
                }
            }
        }
    }

    /// Decomposition hypotheses do not imply every per-region verdict:
    /// the region conditions are sufficient, not necessary.
    #[test]
    fn decomposition_hypotheses_versus_region_verdicts() {
        let mut implied = 0;
        let mut counterexamples = 0;
        let mut clauses = std::collections::BTreeSet::new();
        for q in reciprocal_lattice(rat(1, 4)).unwrap() {
            for s in weight_lattice() {
                for d in 1..=3 {
                    let w = WeightTriple { s, d };
                    if !check_decomposition(&q, &w).admissible {
                        continue;
                    }
                    let failed: Vec<Verdict> = (1..=5)
                        .map(|j| check_lemma_tfj(j, &q, &w).unwrap())
                        .filter(|v| !v.admissible)
                        .collect();
                    if failed.is_empty() {
                        implied += 1;
                    } else {
                        counterexamples += 1;
                        clauses.extend(failed.iter().map(|v| v.clause.to_string()));
                    }
                }
            }
        }
        println!("{implied} implied, {counterexamples} counterexamples, failing clauses {clauses:?}");
        assert!(implied > 0);
        assert!(counterexamples > 0);
        let v = check_lemma_tfj(1, &q3("1", "2", "2"), &s3("1", "0", "0", 1)).unwrap();
        assert!(check_decomposition(&q3("1", "2", "2"), &s3("1", "0", "0", 1)).admissible);
        assert_eq!(v.clause, Clause::RegionOrder(1, 1));
    }
}
