//! Exact feasibility and optimization over the achievable rate regions.
//!
//! A rate tuple is achievable iff a per-channel allocation `r` exists
//! satisfying a small linear system; this module decides that exactly over
//! the rationals. Two region variants are supported:
//!
//! * [`RegionVariant::General`]: only the message must be decodable. The
//!   allocation must satisfy `sum(r) <= R_K + R_M`, `sum(r) >= R_M`,
//!   `0 <= r_i <= C_i` and, per wiretap set, `R_j <= sum of r over the
//!   channels the set does not touch`, with the variable-free side
//!   conditions `0 <= R_j <= R_M`.
//! * [`RegionVariant::KeyRecovered`]: message and key must both be
//!   decodable; the key-budget inequality tightens to the equality
//!   `sum(r) = R_K + R_M`. Every tuple accepted here is accepted by the
//!   general variant.
//!
//! Feasible queries return the lexicographically smallest witness, so
//! output is canonical. Infeasible queries return either the violated
//! variable-free bounds or a Farkas combination of the constraint rows
//! that proves emptiness.
//!
//! Three scope notes. Membership depends only on rates and capacities,
//! never on the alphabet size: `q` matters for building a code, not for
//! deciding the region. Accepted points are realized exactly at the finite
//! block length returned by [`scale_to_integers`]; irrational boundary
//! points are outside the tool's arithmetic. And letting the
//! sender randomize beyond the shared key does not enlarge the achievable
//! message rates, so the characterization here is final for randomized
//! encoders as well.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

use num_bigint::BigInt;

use crate::lp::{self, Inequality};
use crate::model::{ProblemInstance, RateAllocation, RateTuple};
use crate::rational::{denominator_lcm, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionVariant {
    /// Only the message is decoded at the receiver.
    General,
    /// Message and key are both decoded at the receiver.
    KeyRecovered,
}

impl RegionVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionVariant::General => "general",
            RegionVariant::KeyRecovered => "key-recovered",
        }
    }
}

/// A membership query: instance, target tuple and region variant.
#[derive(Debug, Clone)]
pub struct RegionQuery<'a> {
    pub instance: &'a ProblemInstance,
    pub tuple: &'a RateTuple,
    pub variant: RegionVariant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionError {
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    WitnessRejected { violations: Vec<String> },
    ScaleOverflow,
    Internal(String),
}

impl fmt::Display for RegionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionError::DimensionMismatch { what, expected, got } => {
                write!(f, "{}: expected {} entries, got {}", what, expected, got)
            }
            RegionError::WitnessRejected { violations } => {
                write!(f, "witness rejected: {}", violations.join("; "))
            }
            RegionError::ScaleOverflow => write!(f, "scaled parameters exceed u64"),
            RegionError::Internal(msg) => write!(f, "internal error: {}", msg),
        }
    }
}

impl std::error::Error for RegionError {}

/// One Farkas term: a constraint row and its nonnegative multiplier.
#[derive(Debug, Clone, Serialize)]
pub struct FarkasTerm {
    pub label: String,
    pub constraint: String,
    pub multiplier: Rational,
}

/// Proof of infeasibility.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Variable-free bounds the tuple violates outright.
    BoundViolations { violations: Vec<String> },
    /// Nonnegative combination of constraint rows that, together with
    /// `r >= 0`, reduces to an impossible inequality.
    Farkas {
        terms: Vec<FarkasTerm>,
        combined_coeffs: Vec<Rational>,
        combined_rhs: Rational,
        combined: String,
    },
}

/// Outcome of a membership query. Feasible queries carry a witness that
/// satisfies every constraint exactly; infeasible ones carry a certificate.
#[derive(Debug, Clone)]
pub enum FeasibilityResult {
    Feasible { witness: RateAllocation },
    Infeasible { certificate: Certificate },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&RateAllocation> {
        match self {
            FeasibilityResult::Feasible { witness } => Some(witness),
            FeasibilityResult::Infeasible { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            FeasibilityResult::Feasible { .. } => None,
            FeasibilityResult::Infeasible { certificate } => Some(certificate),
        }
    }
}

impl Serialize for FeasibilityResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            FeasibilityResult::Feasible { witness } => {
                let mut s = serializer.serialize_struct("FeasibilityResult", 2)?;
                s.serialize_field("feasible", &true)?;
                s.serialize_field("witness", witness)?;
                s.end()
            }
            FeasibilityResult::Infeasible { certificate } => {
                let mut s = serializer.serialize_struct("FeasibilityResult", 2)?;
                s.serialize_field("feasible", &false)?;
                s.serialize_field("certificate", certificate)?;
                s.end()
            }
        }
    }
}

/// Result of key-rate minimization.
#[derive(Debug, Clone)]
pub enum KeyRateSolution {
    Optimal { key_rate: Rational, witness: RateAllocation },
    Infeasible { certificate: Certificate },
}

struct Row {
    label: String,
    display: String,
    ineq: Inequality,
}

fn sum_display(indices: &[usize]) -> String {
    if indices.is_empty() {
        "0".to_string()
    } else {
        indices.iter().map(|i| format!("r_{}", i + 1)).collect::<Vec<_>>().join(" + ")
    }
}

/// The constraint rows over the allocation variables for the chosen
/// variant, in a fixed documented order.
fn build_rows(instance: &ProblemInstance, tuple: &RateTuple, variant: RegionVariant) -> Vec<Row> {
    let h = instance.channel_count();
    let all: Vec<usize> = (0..h).collect();
    let ones = vec![Rational::one(); h];
    let neg_ones = vec![-Rational::one(); h];
    let budget = &tuple.key_rate + &tuple.message_rate;
    let mut rows = Vec::new();

    rows.push(Row {
        label: "key_budget".to_string(),
        display: format!("{} <= {}", sum_display(&all), budget),
        ineq: Inequality { coeffs: ones.clone(), rhs: budget.clone() },
    });
    if variant == RegionVariant::KeyRecovered {
        rows.push(Row {
            label: "key_budget_floor".to_string(),
            display: format!("{} >= {}", sum_display(&all), budget),
            ineq: Inequality { coeffs: neg_ones.clone(), rhs: -&budget },
        });
    }
    rows.push(Row {
        label: "message_floor".to_string(),
        display: format!("{} >= {}", sum_display(&all), tuple.message_rate),
        ineq: Inequality { coeffs: neg_ones.clone(), rhs: -&tuple.message_rate },
    });
    for i in 0..h {
        let mut coeffs = vec![Rational::zero(); h];
        coeffs[i] = Rational::one();
        let cap = Rational::from(instance.capacities()[i]);
        rows.push(Row {
            label: format!("capacity[{}]", i + 1),
            display: format!("r_{} <= {}", i + 1, cap),
            ineq: Inequality { coeffs, rhs: cap },
        });
    }
    for j in 0..instance.set_count() {
        let comp = instance.complement(j);
        let mut coeffs = vec![Rational::zero(); h];
        for &c in &comp {
            coeffs[c] = -Rational::one();
        }
        let bound = tuple.equivocations[j].clone();
        rows.push(Row {
            label: format!("equivocation[{}]", j + 1),
            display: format!("{} >= {}", sum_display(&comp), bound),
            ineq: Inequality { coeffs, rhs: -&bound },
        });
    }
    rows
}

/// Rows for key-rate minimization: everything except the key budget.
fn build_rows_unkeyed(instance: &ProblemInstance, tuple: &RateTuple) -> Vec<Row> {
    build_rows(instance, tuple, RegionVariant::General)
        .into_iter()
        .filter(|row| row.label != "key_budget")
        .collect()
}

/// The variable-free side conditions: rates nonnegative and no
/// equivocation demand above the message rate.
fn precheck_violations(tuple: &RateTuple, check_key_rate: bool) -> Vec<String> {
    let mut v = Vec::new();
    if tuple.message_rate.is_negative() {
        v.push(format!("message_rate >= 0 violated: R_M = {}", tuple.message_rate));
    }
    if check_key_rate && tuple.key_rate.is_negative() {
        v.push(format!("key_rate >= 0 violated: R_K = {}", tuple.key_rate));
    }
    for (j, rj) in tuple.equivocations.iter().enumerate() {
        if rj.is_negative() {
            v.push(format!("equivocation[{}] >= 0 violated: R_{} = {}", j + 1, j + 1, rj));
        }
        if *rj > tuple.message_rate {
            v.push(format!(
                "equivocation[{}] <= message_rate violated: R_{} = {} > R_M = {}",
                j + 1,
                j + 1,
                rj,
                tuple.message_rate
            ));
        }
    }
    v
}

fn check_dimensions(instance: &ProblemInstance, tuple: &RateTuple) -> Result<(), RegionError> {
    if tuple.equivocations.len() != instance.set_count() {
        return Err(RegionError::DimensionMismatch {
            what: "equivocations",
            expected: instance.set_count(),
            got: tuple.equivocations.len(),
        });
    }
    Ok(())
}

fn farkas_certificate(rows: &[Row], multipliers: Vec<Rational>, num_vars: usize) -> Certificate {
    let ineqs: Vec<Inequality> = rows.iter().map(|r| r.ineq.clone()).collect();
    debug_assert!(lp::farkas_is_valid(num_vars, &ineqs, &multipliers));
    let mut combined_coeffs = vec![Rational::zero(); num_vars];
    let mut combined_rhs = Rational::zero();
    let mut terms = Vec::new();
    for (row, y) in rows.iter().zip(&multipliers) {
        if y.is_zero() {
            continue;
        }
        for (acc, a) in combined_coeffs.iter_mut().zip(&row.ineq.coeffs) {
            *acc = &*acc + &(y * a);
        }
        combined_rhs = &combined_rhs + &(y * &row.ineq.rhs);
        terms.push(FarkasTerm {
            label: row.label.clone(),
            constraint: row.display.clone(),
            multiplier: y.clone(),
        });
    }
    let lhs: Vec<String> = combined_coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            if *c == Rational::one() {
                format!("r_{}", i + 1)
            } else {
                format!("{}*r_{}", c, i + 1)
            }
        })
        .collect();
    let lhs = if lhs.is_empty() { "0".to_string() } else { lhs.join(" + ") };
    let combined = format!("{} <= {}", lhs, combined_rhs);
    Certificate::Farkas { terms, combined_coeffs, combined_rhs, combined }
}

/// Decides membership of a rate tuple in the chosen region variant.
pub fn check_membership(query: &RegionQuery<'_>) -> Result<FeasibilityResult, RegionError> {
    check_dimensions(query.instance, query.tuple)?;
    let pre = precheck_violations(query.tuple, true);
    if !pre.is_empty() {
        return Ok(FeasibilityResult::Infeasible {
            certificate: Certificate::BoundViolations { violations: pre },
        });
    }
    let rows = build_rows(query.instance, query.tuple, query.variant);
    let h = query.instance.channel_count();
    solve_lex_min(h, &rows).map(|outcome| match outcome {
        LexOutcome::Point(point) => {
            let witness = RateAllocation::new(point);
            debug_assert!(verify_witness(query.instance, query.tuple, query.variant, &witness)
                .is_empty());
            FeasibilityResult::Feasible { witness }
        }
        LexOutcome::Farkas(y) => FeasibilityResult::Infeasible {
            certificate: farkas_certificate(&rows, y, h),
        },
    })
}

/// Witness-free membership: one feasibility solve, no canonical witness
/// and no certificate rendering. Same decision as [`check_membership`],
/// cheaper on bulk queries.
pub fn contains(query: &RegionQuery<'_>) -> Result<bool, RegionError> {
    check_dimensions(query.instance, query.tuple)?;
    if !precheck_violations(query.tuple, true).is_empty() {
        return Ok(false);
    }
    let rows = build_rows(query.instance, query.tuple, query.variant);
    let h = query.instance.channel_count();
    let ineqs: Vec<Inequality> = rows.iter().map(|r| r.ineq.clone()).collect();
    match lp::minimize(h, &vec![Rational::zero(); h], &ineqs) {
        lp::Minimum::Optimal { .. } => Ok(true),
        lp::Minimum::Infeasible(_) => Ok(false),
        lp::Minimum::Unbounded => {
            Err(RegionError::Internal("unbounded allocation polytope".into()))
        }
    }
}

enum LexOutcome {
    Point(Vec<Rational>),
    Farkas(Vec<Rational>),
}

fn solve_lex_min(num_vars: usize, rows: &[Row]) -> Result<LexOutcome, RegionError> {
    let mut ineqs: Vec<Inequality> = rows.iter().map(|r| r.ineq.clone()).collect();
    let mut last_point = Vec::new();
    for i in 0..num_vars {
        let mut obj = vec![Rational::zero(); num_vars];
        obj[i] = Rational::one();
        match lp::minimize(num_vars, &obj, &ineqs) {
            lp::Minimum::Optimal { value, point } => {
                // Pin coordinate i at its minimum; every remaining feasible
                // point has x_i exactly there.
                let mut pin = vec![Rational::zero(); num_vars];
                pin[i] = Rational::one();
                ineqs.push(Inequality { coeffs: pin, rhs: value });
                last_point = point;
            }
            lp::Minimum::Infeasible(y) => {
                if i == 0 {
                    return Ok(LexOutcome::Farkas(y));
                }
                return Err(RegionError::Internal("pinned system became infeasible".into()));
            }
            lp::Minimum::Unbounded => {
                return Err(RegionError::Internal("unbounded allocation polytope".into()));
            }
        }
    }
    Ok(LexOutcome::Point(last_point))
}

/// Minimal key rate supporting the given message rate and equivocation
/// bounds: minimize `sum(r) - R_M` over the key-budget-free system, then
/// report the lexicographically smallest optimal allocation.
pub fn minimize_key_rate(
    instance: &ProblemInstance,
    message_rate: &Rational,
    equivocations: &[Rational],
) -> Result<KeyRateSolution, RegionError> {
    let tuple = RateTuple::new(message_rate.clone(), Rational::zero(), equivocations.to_vec());
    check_dimensions(instance, &tuple)?;
    let pre = precheck_violations(&tuple, false);
    if !pre.is_empty() {
        return Ok(KeyRateSolution::Infeasible {
            certificate: Certificate::BoundViolations { violations: pre },
        });
    }
    let rows = build_rows_unkeyed(instance, &tuple);
    let h = instance.channel_count();
    let ineqs: Vec<Inequality> = rows.iter().map(|r| r.ineq.clone()).collect();
    let objective = vec![Rational::one(); h];
    let total = match lp::minimize(h, &objective, &ineqs) {
        lp::Minimum::Optimal { value, .. } => value,
        lp::Minimum::Infeasible(y) => {
            return Ok(KeyRateSolution::Infeasible {
                certificate: farkas_certificate(&rows, y, h),
            });
        }
        lp::Minimum::Unbounded => {
            return Err(RegionError::Internal("unbounded allocation polytope".into()));
        }
    };
    // Pin the optimal total and take the lexicographically smallest
    // allocation achieving it.
    let mut pinned: Vec<Row> = rows;
    pinned.push(Row {
        label: "optimal_total".to_string(),
        display: format!("{} <= {}", sum_display(&(0..h).collect::<Vec<_>>()), total),
        ineq: Inequality { coeffs: vec![Rational::one(); h], rhs: total.clone() },
    });
    match solve_lex_min(h, &pinned)? {
        LexOutcome::Point(point) => {
            let key_rate = {
                let raw = &total - message_rate;
                if raw.is_negative() {
                    Rational::zero()
                } else {
                    raw
                }
            };
            Ok(KeyRateSolution::Optimal { key_rate, witness: RateAllocation::new(point) })
        }
        LexOutcome::Farkas(_) => {
            Err(RegionError::Internal("pinned optimum became infeasible".into()))
        }
    }
}

/// Exhaustively checks a witness against the variant's constraints.
/// Returns human-readable violations; empty means the witness is valid.
pub fn verify_witness(
    instance: &ProblemInstance,
    tuple: &RateTuple,
    variant: RegionVariant,
    witness: &RateAllocation,
) -> Vec<String> {
    let mut v = precheck_violations(tuple, true);
    if tuple.equivocations.len() != instance.set_count() {
        v.push(format!(
            "equivocations: expected {} entries, got {}",
            instance.set_count(),
            tuple.equivocations.len()
        ));
        return v;
    }
    if witness.rates.len() != instance.channel_count() {
        v.push(format!(
            "allocation: expected {} entries, got {}",
            instance.channel_count(),
            witness.rates.len()
        ));
        return v;
    }
    for (i, r) in witness.rates.iter().enumerate() {
        if r.is_negative() {
            v.push(format!("r_{} = {} is negative", i + 1, r));
        }
        if *r > Rational::from(instance.capacities()[i]) {
            v.push(format!(
                "r_{} = {} exceeds capacity {}",
                i + 1,
                r,
                instance.capacities()[i]
            ));
        }
    }
    for row in build_rows(instance, tuple, variant) {
        let lhs: Rational =
            row.ineq.coeffs.iter().zip(&witness.rates).map(|(c, r)| c * r).sum();
        if lhs > row.ineq.rhs {
            v.push(format!("{} violated: {}", row.label, row.display));
        }
    }
    v
}

/// Scaled integer block parameters for code construction.
///
/// `block_length` is the smallest positive integer making every rate,
/// allocation entry and leakage budget integral; the remaining fields are
/// those quantities scaled by it. The identity
/// `message_symbols = sum(channel_symbols) - key_symbols` and the bounds
/// `channel_symbols[i] <= scaled_capacities[i]` and, per wiretap set,
/// `observed symbols <= key_symbols + leak_budget` all hold exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct IntegerParameters {
    pub block_length: u64,
    pub message_symbols: u64,
    pub key_symbols: u64,
    pub channel_symbols: Vec<u64>,
    pub leak_budgets: Vec<u64>,
    pub scaled_capacities: Vec<u64>,
}

impl IntegerParameters {
    pub fn total_symbols(&self) -> u64 {
        self.message_symbols + self.key_symbols
    }

    /// Shape checks plus the per-wiretap-set budget inequality required for
    /// construction: observed symbols at most `key_symbols + leak_budget`.
    /// Empty result means the parameters admit a code.
    pub fn validate(&self, instance: &ProblemInstance) -> Vec<String> {
        let mut v = self.validate_shape(instance);
        if !v.is_empty() {
            return v;
        }
        for (j, set) in instance.wiretap_sets().iter().enumerate() {
            let observed: u64 = set.channels().iter().map(|&c| self.channel_symbols[c]).sum();
            if observed > self.key_symbols + self.leak_budgets[j] {
                v.push(format!(
                    "wiretap set {} observes {} symbols, above key_symbols + leak budget = {}",
                    j + 1,
                    observed,
                    self.key_symbols + self.leak_budgets[j]
                ));
            }
        }
        v
    }

    /// Structural consistency against an instance: lengths, the symbol
    /// balance and capacity bounds. Budget inequalities are deliberately
    /// excluded so that a code can be audited against bounds it fails.
    pub fn validate_shape(&self, instance: &ProblemInstance) -> Vec<String> {
        let mut v = Vec::new();
        if self.block_length == 0 {
            v.push("block_length must be >= 1".to_string());
        }
        if self.channel_symbols.len() != instance.channel_count() {
            v.push(format!(
                "channel_symbols: expected {} entries, got {}",
                instance.channel_count(),
                self.channel_symbols.len()
            ));
            return v;
        }
        if self.leak_budgets.len() != instance.set_count() {
            v.push(format!(
                "leak_budgets: expected {} entries, got {}",
                instance.set_count(),
                self.leak_budgets.len()
            ));
            return v;
        }
        if self.scaled_capacities.len() != instance.channel_count() {
            v.push(format!(
                "scaled_capacities: expected {} entries, got {}",
                instance.channel_count(),
                self.scaled_capacities.len()
            ));
            return v;
        }
        let total: u64 = self.channel_symbols.iter().sum();
        if total != self.message_symbols + self.key_symbols {
            v.push(format!(
                "symbol balance violated: sum(channel_symbols) = {} but message_symbols + key_symbols = {}",
                total,
                self.message_symbols + self.key_symbols
            ));
        }
        for (i, (&n_i, &cap)) in
            self.channel_symbols.iter().zip(&self.scaled_capacities).enumerate()
        {
            if n_i > cap {
                v.push(format!(
                    "channel {} carries {} symbols, above its scaled capacity {}",
                    i + 1,
                    n_i,
                    cap
                ));
            }
        }
        for (i, (&c, &cap)) in
            instance.capacities().iter().zip(&self.scaled_capacities).enumerate()
        {
            if c.checked_mul(self.block_length) != Some(cap) {
                v.push(format!(
                    "scaled capacity of channel {} is {}, expected {}",
                    i + 1,
                    cap,
                    c * self.block_length
                ));
            }
        }
        v
    }
}

fn to_u64(value: BigInt) -> Result<u64, RegionError> {
    use num_traits::ToPrimitive;
    value.to_u64().ok_or(RegionError::ScaleOverflow)
}

/// Scales a key-recovered-region point to integer block parameters.
///
/// The pair must satisfy the key-recovered constraints exactly (apply
/// [`crate::synth::reduce_key`] first when holding a general-region point);
/// otherwise the symbol-balance identity would fail and the call errors.
/// The returned block length is minimal: it is the least common multiple of
/// the denominators of every scaled quantity.
pub fn scale_to_integers(
    tuple: &RateTuple,
    witness: &RateAllocation,
    instance: &ProblemInstance,
) -> Result<IntegerParameters, RegionError> {
    check_dimensions(instance, tuple)?;
    let violations = verify_witness(instance, tuple, RegionVariant::KeyRecovered, witness);
    if !violations.is_empty() {
        return Err(RegionError::WitnessRejected { violations });
    }
    let slacks: Vec<Rational> =
        (0..instance.set_count()).map(|j| tuple.slack(j).expect("dimension checked")).collect();
    let mut all = vec![tuple.message_rate.clone(), tuple.key_rate.clone()];
    all.extend(witness.rates.iter().cloned());
    all.extend(slacks.iter().cloned());
    let n = denominator_lcm(all.iter());

    let scale = |v: &Rational| -> Result<u64, RegionError> {
        to_u64(v.scaled_to_integer(&n).expect("n is the denominator lcm"))
    };
    let params = IntegerParameters {
        block_length: to_u64(n.clone())?,
        message_symbols: scale(&tuple.message_rate)?,
        key_symbols: scale(&tuple.key_rate)?,
        channel_symbols: witness.rates.iter().map(&scale).collect::<Result<_, _>>()?,
        leak_budgets: slacks.iter().map(&scale).collect::<Result<_, _>>()?,
        scaled_capacities: instance
            .capacities()
            .iter()
            .map(|&c| c.checked_mul(to_u64(n.clone())?).ok_or(RegionError::ScaleOverflow))
            .collect::<Result<_, _>>()?,
    };
    debug_assert!(params.validate(instance).is_empty());
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ri(n: i64) -> Rational {
        Rational::from(n)
    }

    /// Two unit channels, each one a wiretap set: the minimal instance.
    fn otp_instance() -> ProblemInstance {
        ProblemInstance::new(3, vec![1, 1], vec![vec![1], vec![2]])
    }

    fn check(
        instance: &ProblemInstance,
        tuple: &RateTuple,
        variant: RegionVariant,
    ) -> FeasibilityResult {
        check_membership(&RegionQuery { instance, tuple, variant }).unwrap()
    }

    #[test]
    fn one_time_pad_point_is_feasible() {
        let inst = otp_instance();
        let tuple = RateTuple::new(ri(1), ri(1), vec![ri(1), ri(1)]);
        let res = check(&inst, &tuple, RegionVariant::General);
        let witness = res.witness().expect("feasible");
        assert_eq!(witness.rates, vec![ri(1), ri(1)]);
        // Also on the key-recovered variant: sum(r) = R_K + R_M holds.
        let res = check(&inst, &tuple, RegionVariant::KeyRecovered);
        assert_eq!(res.witness().unwrap().rates, vec![ri(1), ri(1)]);
    }

    #[test]
    fn keyless_perfect_secrecy_is_infeasible_with_certificate() {
        let inst = otp_instance();
        let tuple = RateTuple::new(ri(1), ri(0), vec![ri(1), ri(1)]);
        let res = check(&inst, &tuple, RegionVariant::General);
        match res.certificate().expect("infeasible") {
            Certificate::Farkas { combined_coeffs, combined_rhs, terms, .. } => {
                assert!(combined_coeffs.iter().all(|c| !c.is_negative()));
                assert!(combined_rhs.is_negative());
                assert!(!terms.is_empty());
            }
            other => panic!("expected a Farkas certificate, got {:?}", other),
        }
    }

    #[test]
    fn imperfect_point_needs_no_key() {
        let inst = otp_instance();
        let tuple = RateTuple::new(ri(2), ri(0), vec![ri(1), ri(1)]);
        let res = check(&inst, &tuple, RegionVariant::General);
        assert_eq!(res.witness().expect("feasible").rates, vec![ri(1), ri(1)]);
    }

    #[test]
    fn no_wiretappers_reduces_to_capacity() {
        let inst = ProblemInstance::new(2, vec![3], vec![]);
        let tuple = RateTuple::new(ri(3), ri(0), vec![]);
        let res = check(&inst, &tuple, RegionVariant::General);
        assert_eq!(res.witness().expect("feasible").rates, vec![ri(3)]);
        let over = RateTuple::new(r(7, 2), ri(0), vec![]);
        assert!(!check(&inst, &over, RegionVariant::General).is_feasible());
    }

    #[test]
    fn overdemanding_equivocation_short_circuits() {
        let inst = otp_instance();
        let tuple = RateTuple::new(ri(1), ri(5), vec![r(3, 2), ri(1)]);
        let res = check(&inst, &tuple, RegionVariant::General);
        match res.certificate().expect("infeasible") {
            Certificate::BoundViolations { violations } => {
                assert!(violations.iter().any(|v| v.contains("equivocation[1]")));
            }
            other => panic!("expected bound violations, got {:?}", other),
        }
    }

    #[test]
    fn key_recovered_region_is_strictly_smaller() {
        let inst = otp_instance();
        // Huge key rate: fine when the key need not be decoded, impossible
        // when it must fit on the channels.
        let tuple = RateTuple::new(ri(1), ri(5), vec![ri(1), ri(1)]);
        assert!(check(&inst, &tuple, RegionVariant::General).is_feasible());
        assert!(!check(&inst, &tuple, RegionVariant::KeyRecovered).is_feasible());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let inst = otp_instance();
        let tuple = RateTuple::new(ri(1), ri(1), vec![ri(1)]);
        let err = check_membership(&RegionQuery {
            instance: &inst,
            tuple: &tuple,
            variant: RegionVariant::General,
        })
        .unwrap_err();
        assert!(matches!(err, RegionError::DimensionMismatch { .. }));
    }

    #[test]
    fn minimal_key_for_perfect_secrecy() {
        let inst = otp_instance();
        match minimize_key_rate(&inst, &ri(1), &[ri(1), ri(1)]).unwrap() {
            KeyRateSolution::Optimal { key_rate, witness } => {
                assert_eq!(key_rate, ri(1));
                assert_eq!(witness.rates, vec![ri(1), ri(1)]);
            }
            _ => panic!("must be solvable"),
        }
    }

    #[test]
    fn threshold_access_structure_recovers_classic_split() {
        // Four unit channels, adversary sees any two, perfect secrecy:
        // two message symbols protected by a two-symbol key.
        let sets: Vec<Vec<u64>> = vec![
            vec![1, 2],
            vec![1, 3],
            vec![1, 4],
            vec![2, 3],
            vec![2, 4],
            vec![3, 4],
        ];
        let inst = ProblemInstance::new(7, vec![1, 1, 1, 1], sets);
        match minimize_key_rate(&inst, &ri(2), &vec![ri(2); 6]).unwrap() {
            KeyRateSolution::Optimal { key_rate, witness } => {
                assert_eq!(key_rate, ri(2));
                assert_eq!(witness.rates, vec![ri(1), ri(1), ri(1), ri(1)]);
            }
            _ => panic!("must be solvable"),
        }
    }

    #[test]
    fn leaky_rate_needs_no_key() {
        let inst = otp_instance();
        match minimize_key_rate(&inst, &ri(2), &[ri(1), ri(1)]).unwrap() {
            KeyRateSolution::Optimal { key_rate, witness } => {
                assert_eq!(key_rate, ri(0));
                assert_eq!(witness.rates, vec![ri(1), ri(1)]);
            }
            _ => panic!("must be solvable"),
        }
    }

    #[test]
    fn capacity_bound_makes_minimization_infeasible() {
        let inst = otp_instance();
        match minimize_key_rate(&inst, &ri(3), &[ri(1), ri(1)]).unwrap() {
            KeyRateSolution::Infeasible { certificate } => match certificate {
                Certificate::Farkas { combined_rhs, .. } => assert!(combined_rhs.is_negative()),
                other => panic!("expected Farkas, got {:?}", other),
            },
            _ => panic!("must be infeasible"),
        }
    }

    #[test]
    fn scaling_identity_cases() {
        let inst = otp_instance();
        let tuple = RateTuple::new(ri(1), ri(1), vec![ri(1), ri(1)]);
        let witness = RateAllocation::new(vec![ri(1), ri(1)]);
        let p = scale_to_integers(&tuple, &witness, &inst).unwrap();
        assert_eq!(p.block_length, 1);
        assert_eq!(p.message_symbols, 1);
        assert_eq!(p.key_symbols, 1);
        assert_eq!(p.channel_symbols, vec![1, 1]);
        assert_eq!(p.leak_budgets, vec![0, 0]);
        assert_eq!(p.scaled_capacities, vec![1, 1]);
    }

    #[test]
    fn scaling_thirds() {
        let inst = ProblemInstance::new(2, vec![1, 1], vec![vec![1]]);
        let tuple = RateTuple::new(r(2, 3), r(1, 3), vec![r(1, 3)]);
        let witness = RateAllocation::new(vec![r(1, 3), r(2, 3)]);
        let p = scale_to_integers(&tuple, &witness, &inst).unwrap();
        assert_eq!(p.block_length, 3);
        assert_eq!(p.message_symbols, 2);
        assert_eq!(p.key_symbols, 1);
        assert_eq!(p.channel_symbols, vec![1, 2]);
        assert_eq!(p.leak_budgets, vec![1]);
        // Symbol balance: 2 = 3 - 1.
        assert_eq!(
            p.message_symbols,
            p.channel_symbols.iter().sum::<u64>() - p.key_symbols
        );
    }

    #[test]
    fn scaling_halves() {
        let inst = otp_instance();
        let tuple = RateTuple::new(r(1, 2), r(1, 2), vec![r(1, 2), r(1, 2)]);
        let witness = RateAllocation::new(vec![r(1, 2), r(1, 2)]);
        let p = scale_to_integers(&tuple, &witness, &inst).unwrap();
        assert_eq!(p.block_length, 2);
        assert_eq!(p.message_symbols, 1);
        assert_eq!(p.key_symbols, 1);
        assert_eq!(p.channel_symbols, vec![1, 1]);
    }

    #[test]
    fn scaling_overflow_is_reported() {
        // A denominator beyond u64 cannot be realized as a block length.
        let inst = ProblemInstance::new(2, vec![1], vec![]);
        let tiny: Rational = "1/99999999999999999999".parse().unwrap();
        let tuple = RateTuple::new(tiny.clone(), ri(0), vec![]);
        let witness = RateAllocation::new(vec![tiny]);
        let err = scale_to_integers(&tuple, &witness, &inst).unwrap_err();
        assert!(matches!(err, RegionError::ScaleOverflow));
    }

    #[test]
    fn scaling_rejects_non_balanced_witness() {
        let inst = otp_instance();
        // sum(r) = 2 but R_K + R_M = 3: key-recovered equality fails.
        let tuple = RateTuple::new(ri(1), ri(2), vec![ri(1), ri(1)]);
        let witness = RateAllocation::new(vec![ri(1), ri(1)]);
        let err = scale_to_integers(&tuple, &witness, &inst).unwrap_err();
        assert!(matches!(err, RegionError::WitnessRejected { .. }));
    }

    #[test]
    fn feasibility_json_shapes() {
        let inst = otp_instance();
        let tuple = RateTuple::new(ri(1), ri(1), vec![ri(1), ri(1)]);
        let res = check(&inst, &tuple, RegionVariant::General);
        let js = serde_json::to_value(&res).unwrap();
        assert_eq!(js["feasible"], serde_json::json!(true));
        assert_eq!(js["witness"], serde_json::json!([1, 1]));

        let bad = RateTuple::new(ri(1), ri(0), vec![ri(1), ri(1)]);
        let res = check(&inst, &bad, RegionVariant::General);
        let js = serde_json::to_value(&res).unwrap();
        assert_eq!(js["feasible"], serde_json::json!(false));
        assert_eq!(js["certificate"]["kind"], serde_json::json!("farkas"));
    }
}
