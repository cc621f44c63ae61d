//! Secrecy verification, two independent ways.
//!
//! For a linear code the information a wiretap set gains about the message
//! has a closed form: `rank(A_I | B_I) - rank(B_I)` in log-q units, valid
//! whenever the observed rows are linearly independent. The audit computes
//! that, and independently brute-forces the exact joint distribution by
//! enumerating every `(message, key)` pair: for linear maps every
//! conditional is uniform on an affine set, so every entropy here is an
//! exact rational (an integer in log-q units for the fibers), never a
//! float. The two paths must agree exactly; the report says so per wiretap
//! set, alongside two information inequalities that every correct code
//! obeys:
//!
//! * leakage is at least the observed entropy minus the key entropy
//!   (`I(Y_I; M) >= H(Y_I) - H(K)`), and
//! * equivocation never exceeds what the unobserved channels could carry
//!   (`H(M | Y_I) <= H(Y_comp | Y_I)`).

use std::fmt;

use serde::Serialize;

use crate::gf::{FieldSpec, Matrix};
use crate::model::ProblemInstance;
use crate::rational::Rational;
use crate::region::IntegerParameters;
use crate::rng::SplitMix64;
use crate::synth::LinearCode;
use crate::codec;

/// Enumeration and sampling controls.
#[derive(Debug, Clone)]
pub struct AuditOptions {
    /// Maximum number of `(message, key)` states the entropy oracle may
    /// enumerate; views beyond it are audited by rank only.
    pub enumeration_cap: u64,
    /// Decode identity is checked exhaustively up to this many states,
    /// sampled beyond.
    pub exhaustive_decode_cap: u64,
    /// Sampled decode trials when beyond the exhaustive cap.
    pub decode_trials: u64,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            enumeration_cap: 1 << 20,
            exhaustive_decode_cap: 1 << 16,
            decode_trials: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditError {
    /// The observed rows are linearly dependent, so the rank formula does
    /// not apply; use the enumeration oracle instead.
    RankDeficient { rows: usize, rank: usize },
    EnumerationTooLarge { states: u128, cap: u64 },
    /// The joint distribution failed the coset-structure invariants. Cannot
    /// happen for a linear map; indicates a corrupted input.
    NonCosetDistribution,
}

impl fmt::Display for AuditError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditError::RankDeficient { rows, rank } => {
                write!(f, "observed rows are dependent (rank {} of {})", rank, rows)
            }
            AuditError::EnumerationTooLarge { states, cap } => {
                write!(f, "{} states exceed the enumeration cap {}", states, cap)
            }
            AuditError::NonCosetDistribution => {
                write!(f, "joint distribution is not coset-structured")
            }
        }
    }
}

impl std::error::Error for AuditError {}

fn state_count(q: u64, inputs: usize) -> u128 {
    (q as u128).pow(inputs as u32)
}

/// Exact `log_q(v)` when `v` is a power of q, else `None`.
fn log_q_exact(q: u64, mut v: u64) -> Option<u32> {
    if v == 0 {
        return None;
    }
    let mut e = 0;
    while v > 1 {
        if !v.is_multiple_of(q) {
            return None;
        }
        v /= q;
        e += 1;
    }
    Some(e)
}

/// Enumerates every input `u` of the map, calling the sink with the
/// encoded output `map . u` and the encoded first `split` coordinates of
/// `u`. Incremental base-q odometer over precomputed per-digit column
/// deltas, so the amortized cost per state is a few additions per row and
/// no multiplications.
fn enumerate_map<F: FnMut(u64, u64)>(field: &FieldSpec, map: &Matrix, split: usize, mut sink: F) {
    let q = field.q();
    let cols = map.cols();
    let rows = map.rows();
    // scaled[j][delta][i] = delta * map[i][j]
    let scaled: Vec<Vec<Vec<u64>>> = (0..cols)
        .map(|j| {
            (0..q)
                .map(|delta| (0..rows).map(|i| field.mul(delta, map.get(i, j))).collect())
                .collect()
        })
        .collect();
    let pow_at = |len: usize| -> Vec<u64> {
        let mut p = Vec::with_capacity(len);
        let mut acc = 1u64;
        for _ in 0..len {
            p.push(acc);
            acc = acc.saturating_mul(q);
        }
        p
    };
    let pow_split = pow_at(split);
    let pow_y = pow_at(rows);
    let mut u = vec![0u64; cols];
    let mut y = vec![0u64; rows];
    let mut y_code = 0u64;
    let mut split_code = 0u64;
    loop {
        sink(y_code, split_code);
        // Advance the odometer; the first coordinate cycles fastest.
        let mut j = 0;
        loop {
            if j == cols {
                return;
            }
            let old = u[j];
            let new = if old + 1 == q { 0 } else { old + 1 };
            u[j] = new;
            let delta = field.sub(new, old);
            let col = &scaled[j][delta as usize];
            for i in 0..rows {
                let old_y = y[i];
                let new_y = field.add(old_y, col[i]);
                y[i] = new_y;
                y_code = y_code + new_y * pow_y[i] - old_y * pow_y[i];
            }
            if j < split {
                split_code = split_code + new * pow_split[j] - old * pow_split[j];
            }
            if new != 0 {
                break;
            }
            j += 1;
        }
    }
}

/// Exact mutual information between the output and the message by the rank
/// formula, in log-q units. Requires the observed rows to be independent.
pub fn mutual_information_rank(
    field: &FieldSpec,
    message_block: &Matrix,
    key_block: &Matrix,
) -> Result<u64, AuditError> {
    assert_eq!(message_block.rows(), key_block.rows(), "row count mismatch");
    let joint = message_block.hstack(key_block);
    let joint_rank = field.rank(&joint);
    if joint_rank != joint.rows() {
        return Err(AuditError::RankDeficient { rows: joint.rows(), rank: joint_rank });
    }
    Ok((joint_rank - field.rank(key_block)) as u64)
}

/// Entropy of `map . u` for uniform `u`, by exhaustive enumeration.
pub fn image_entropy_oracle(
    field: &FieldSpec,
    map: &Matrix,
    cap: u64,
) -> Result<Rational, AuditError> {
    let states = state_count(field.q(), map.cols());
    let code_space = (field.q() as u128).pow(map.rows() as u32);
    if states > cap as u128 || code_space > 1 << 62 {
        return Err(AuditError::EnumerationTooLarge { states: states.max(code_space), cap });
    }
    // T = q^cols states in total; a group of size q^e contributes
    // (q^e / T) * (cols - e) per member state.
    let total_exp = map.cols() as u64;
    let mut weighted = 0u128;
    if code_space <= states.max(1u128 << 16) {
        // Direct counting over the output space.
        let mut counts = vec![0u64; code_space as usize];
        enumerate_map(field, map, 0, |y, _| counts[y as usize] += 1);
        for &count in &counts {
            if count == 0 {
                continue;
            }
            let e = log_q_exact(field.q(), count).ok_or(AuditError::NonCosetDistribution)?;
            weighted += count as u128 * (total_exp - e as u64) as u128;
        }
    } else {
        // Output space too sparse to index directly (more rows than
        // inputs): group by sorting the observed codes.
        let mut codes = Vec::with_capacity(states as usize);
        enumerate_map(field, map, 0, |y, _| codes.push(y));
        codes.sort_unstable();
        let mut i = 0usize;
        while i < codes.len() {
            let mut j = i;
            while j < codes.len() && codes[j] == codes[i] {
                j += 1;
            }
            let count = (j - i) as u64;
            let e = log_q_exact(field.q(), count).ok_or(AuditError::NonCosetDistribution)?;
            weighted += count as u128 * (total_exp - e as u64) as u128;
            i = j;
        }
    }
    Ok(exact_fraction(weighted, states))
}

fn exact_fraction(numerator: u128, denominator: u128) -> Rational {
    use num_bigint::BigInt;
    let n = Rational::from_bigint(BigInt::from(numerator));
    let d = Rational::from_bigint(BigInt::from(denominator));
    n / d
}

/// Exact conditional entropy `H(M | Y)` where `Y = A.M + B.K` and
/// `(M, K)` is uniform, by exhaustive enumeration and fiber counting.
pub fn conditional_entropy_oracle(
    field: &FieldSpec,
    message_block: &Matrix,
    key_block: &Matrix,
    cap: u64,
) -> Result<Rational, AuditError> {
    assert_eq!(message_block.rows(), key_block.rows(), "row count mismatch");
    let n_m = message_block.cols();
    let map = message_block.hstack(key_block);
    let states = state_count(field.q(), map.cols());
    let code_space = (field.q() as u128).pow(map.rows() as u32);
    if states > cap as u128 || code_space > 1 << 62 {
        return Err(AuditError::EnumerationTooLarge { states: states.max(code_space), cap });
    }
    let q = field.q();
    let mut pairs = Vec::with_capacity(states as usize);
    enumerate_map(field, &map, n_m, |y, m| pairs.push((y, m)));
    // Group by observation. Dense observation spaces are radix-bucketed;
    // sparse ones (more rows than inputs) are sorted.
    let fibers: Vec<Vec<u64>> = if code_space <= states.max(1u128 << 16) {
        let mut counts = vec![0usize; code_space as usize];
        for &(y, _) in &pairs {
            counts[y as usize] += 1;
        }
        let mut buckets: Vec<Vec<u64>> =
            counts.iter().map(|&c| Vec::with_capacity(c)).collect();
        for &(y, m) in &pairs {
            buckets[y as usize].push(m);
        }
        buckets.into_iter().filter(|b| !b.is_empty()).collect()
    } else {
        pairs.sort_unstable();
        let mut out = Vec::new();
        let mut i = 0usize;
        while i < pairs.len() {
            let mut j = i;
            while j < pairs.len() && pairs[j].0 == pairs[i].0 {
                j += 1;
            }
            out.push(pairs[i..j].iter().map(|&(_, m)| m).collect());
            i = j;
        }
        out
    };
    let mut weighted = 0u128;
    for mut fiber in fibers {
        // The conditional on M given this observation must be uniform over
        // a q-power number of messages.
        fiber.sort_unstable();
        let total = fiber.len();
        let mut distinct = 0u64;
        let mut first_run = 0usize;
        let mut k = 0usize;
        while k < total {
            let mut l = k;
            while l < total && fiber[l] == fiber[k] {
                l += 1;
            }
            if distinct == 0 {
                first_run = l - k;
            } else if l - k != first_run {
                return Err(AuditError::NonCosetDistribution);
            }
            distinct += 1;
            k = l;
        }
        let e = log_q_exact(q, distinct).ok_or(AuditError::NonCosetDistribution)?;
        weighted += total as u128 * e as u128;
    }
    Ok(exact_fraction(weighted, states))
}

/// Rank-formula leakage of a set of channels (0-based) against a code.
pub fn leak_by_rank(code: &LinearCode, channels: &[usize]) -> Result<u64, AuditError> {
    let positions = code.positions_of_channels(channels);
    let (a, b) = code.blocks_at(&positions);
    mutual_information_rank(code.field(), &a, &b)
}

/// Oracle equivocation `H(M | Y_channels)` of a code, exact.
pub fn equivocation_oracle(
    code: &LinearCode,
    channels: &[usize],
    cap: u64,
) -> Result<Rational, AuditError> {
    let positions = code.positions_of_channels(channels);
    let (a, b) = code.blocks_at(&positions);
    conditional_entropy_oracle(code.field(), &a, &b, cap)
}

/// Decode-identity verdict.
#[derive(Debug, Clone, Serialize)]
pub struct DecodeCheck {
    pub ok: bool,
    pub mode: &'static str,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Audit verdict for one wiretap set.
#[derive(Debug, Clone, Serialize)]
pub struct WiretapAudit {
    /// 1-based member channels, canonical order.
    pub channels: Vec<u64>,
    pub positions: usize,
    /// Whether the observed rows were independent, i.e. the rank formula
    /// applied. False falls back to the oracle and marks the code
    /// non-canonical.
    pub canonical: bool,
    pub leak_rank: Option<u64>,
    pub equivocation: Option<Rational>,
    pub observed_entropy: Option<Rational>,
    pub complement_conditional_entropy: Option<Rational>,
    pub leak_budget: u64,
    pub rank_oracle_agree: Option<bool>,
    pub pass: bool,
}

/// Full audit report: per-set verdicts plus global structure checks.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub pass: bool,
    pub problems: Vec<String>,
    pub block_length: u64,
    pub message_symbols: u64,
    pub key_symbols: u64,
    pub decode_identity: DecodeCheck,
    /// Joint output entropy equals message + key symbols (decodability of
    /// both from the full word). None when enumeration is over cap.
    pub joint_entropy_ok: Option<bool>,
    /// Every channel's marginal entropy equals its symbol count, so the
    /// transmitted symbols are mutually independent.
    pub channel_independence_ok: Option<bool>,
    /// Leakage at least observed entropy minus key entropy, per set.
    pub imperfect_secrecy_ok: bool,
    /// Equivocation at most the conditional entropy of the unobserved
    /// channels, per set.
    pub equivocation_cap_ok: bool,
    pub wiretap_sets: Vec<WiretapAudit>,
}

fn decode_identity_check(code: &LinearCode, opts: &AuditOptions) -> DecodeCheck {
    let field = code.field();
    let q = field.q();
    let n_m = code.message_len();
    let n_k = code.key_len();
    let n = n_m + n_k;
    let states = state_count(q, n);
    if states > opts.exhaustive_decode_cap as u128 {
        // Sampled fallback for large blocks.
        let mut rng = SplitMix64::new(opts.seed);
        let mut fail = None;
        let mut ok = true;
        let mut trials = 0u64;
        for _ in 0..opts.decode_trials {
            trials += 1;
            let m = codec::random_symbols(field, n_m, &mut rng);
            let k = codec::random_symbols(field, n_k, &mut rng);
            let word = codec::encode(code, &m, &k).expect("dimensions match");
            match codec::decode(code, &word) {
                Ok((m2, k2)) if m2 == m && k2 == k => {}
                Ok((m2, k2)) => {
                    fail = Some(format!(
                        "decode(encode(m={:?}, k={:?})) = (m={:?}, k={:?})",
                        m, k, m2, k2
                    ));
                    ok = false;
                    break;
                }
                Err(e) => {
                    fail = Some(format!("decode failed: {}", e));
                    ok = false;
                    break;
                }
            }
        }
        return DecodeCheck { ok, mode: "sampled", trials, failure: fail };
    }
    // Exhaustive sweep with an incremental encoder: the word tracks the
    // odometer over (message; key), and each state is decoded structurally
    // with the key-mask products cached per observed key.
    let generator = code.generator();
    let scaled: Vec<Vec<Vec<u64>>> = (0..n)
        .map(|j| {
            (0..q)
                .map(|delta| (0..n).map(|i| field.mul(delta, generator.get(i, j))).collect())
                .collect()
        })
        .collect();
    let mut input = vec![0u64; n]; // message digits then key digits
    let mut word = vec![0u64; n];
    let mut cached_key: Option<Vec<u64>> = None;
    let mut cached_masks = vec![0u64; n_m];
    let mut trials = 0u64;
    let mut ok = true;
    let mut fail = None;
    'sweep: loop {
        trials += 1;
        // Structural decode of the current word.
        let observed_key = &word[..n_k];
        if cached_key.as_deref() != Some(observed_key) {
            for (t, mask) in cached_masks.iter_mut().enumerate() {
                let row = code.mask_row(n_k + t);
                let mut acc = 0u64;
                for (b, k) in row.iter().zip(observed_key) {
                    acc = field.add(acc, field.mul(*b, *k));
                }
                *mask = acc;
            }
            cached_key = Some(observed_key.to_vec());
        }
        let key_ok = input[n_m..] == word[..n_k];
        let message_ok = (0..n_m)
            .all(|t| field.sub(word[n_k + t], cached_masks[t]) == input[t]);
        if !(key_ok && message_ok) {
            ok = false;
            fail = Some(format!(
                "decode(encode(m={:?}, k={:?})) mismatched",
                &input[..n_m],
                &input[n_m..]
            ));
            break 'sweep;
        }
        // Advance the odometer and the word together.
        let mut j = 0;
        loop {
            if j == n {
                break 'sweep;
            }
            let old = input[j];
            let new = if old + 1 == q { 0 } else { old + 1 };
            input[j] = new;
            let delta = field.sub(new, old);
            let col = &scaled[j][delta as usize];
            for (w, c) in word.iter_mut().zip(col) {
                *w = field.add(*w, *c);
            }
            if new != 0 {
                break;
            }
            j += 1;
        }
    }
    debug_assert!(!ok || trials as u128 == states);
    DecodeCheck { ok, mode: "exhaustive", trials, failure: fail }
}

/// Audits a code against an instance and integer parameters: decode
/// identity, per-wiretap-set leakage against the budgets (rank formula and
/// enumeration oracle, cross-checked), and the global entropy identities.
/// Report-style: never errors, failures land in `problems` and `pass`.
pub fn full_audit(
    code: &LinearCode,
    instance: &ProblemInstance,
    params: &IntegerParameters,
    opts: &AuditOptions,
) -> AuditReport {
    let mut problems = Vec::new();
    if code.field().q() != instance.q() {
        problems.push(format!(
            "code field has q={}, instance has q={}",
            code.field().q(),
            instance.q()
        ));
    }
    problems.extend(params.validate_shape(instance));
    if code.total_symbols() as u64 != params.total_symbols() {
        problems.push(format!(
            "code carries {} symbols, parameters say {}",
            code.total_symbols(),
            params.total_symbols()
        ));
    }
    if code.layout().len() != instance.channel_count() {
        problems.push(format!(
            "code has {} channels, instance has {}",
            code.layout().len(),
            instance.channel_count()
        ));
    } else {
        for (i, (range, &n_i)) in code.layout().iter().zip(&params.channel_symbols).enumerate() {
            if range.count as u64 != n_i {
                problems.push(format!(
                    "channel {} carries {} positions, parameters say {}",
                    i + 1,
                    range.count,
                    n_i
                ));
            }
        }
    }
    if !problems.is_empty() {
        return AuditReport {
            pass: false,
            problems,
            block_length: params.block_length,
            message_symbols: params.message_symbols,
            key_symbols: params.key_symbols,
            decode_identity: DecodeCheck { ok: false, mode: "skipped", trials: 0, failure: None },
            joint_entropy_ok: None,
            channel_independence_ok: None,
            imperfect_secrecy_ok: false,
            equivocation_cap_ok: false,
            wiretap_sets: Vec::new(),
        };
    }

    let field = code.field();
    let n_m = params.message_symbols;
    let n_k = params.key_symbols;
    let cap = opts.enumeration_cap;
    let decode_identity = decode_identity_check(code, opts);

    // Global entropy identities, when enumerable.
    let joint_entropy = image_entropy_oracle(field, code.generator(), cap).ok();
    let joint_entropy_ok =
        joint_entropy.as_ref().map(|h| *h == Rational::from(n_m + n_k));
    let channel_independence_ok = if joint_entropy.is_some() {
        let mut all = Some(true);
        for (i, range) in code.layout().iter().enumerate() {
            let positions: Vec<usize> = range.positions().collect();
            let sub = code.generator().select_rows(&positions);
            match image_entropy_oracle(field, &sub, cap) {
                Ok(h) => {
                    if h != Rational::from(params.channel_symbols[i]) {
                        all = Some(false);
                        problems.push(format!(
                            "channel {} marginal entropy {} differs from its {} symbols",
                            i + 1,
                            h,
                            params.channel_symbols[i]
                        ));
                        break;
                    }
                }
                Err(_) => {
                    all = None;
                    break;
                }
            }
        }
        all
    } else {
        None
    };

    let mut imperfect_secrecy_ok = true;
    let mut equivocation_cap_ok = true;
    let mut sets = Vec::with_capacity(instance.set_count());
    for (j, set) in instance.wiretap_sets().iter().enumerate() {
        let positions = code.positions_of_channels(set.channels());
        let (a, b) = code.blocks_at(&positions);
        let joint = a.hstack(&b);
        let leak_rank = mutual_information_rank(field, &a, &b).ok();
        let canonical = leak_rank.is_some();
        let equivocation = conditional_entropy_oracle(field, &a, &b, cap).ok();
        let observed_entropy = image_entropy_oracle(field, &joint, cap).ok();
        let complement_conditional_entropy = match (&joint_entropy, &observed_entropy) {
            (Some(total), Some(seen)) => Some(total - seen),
            _ => None,
        };
        let rank_oracle_agree = match (&leak_rank, &equivocation) {
            (Some(leak), Some(eq)) => {
                Some(&Rational::from(n_m) - &Rational::from(*leak) == *eq)
            }
            _ => None,
        };
        if rank_oracle_agree == Some(false) {
            problems.push(format!(
                "wiretap set {}: rank formula and enumeration oracle disagree",
                j + 1
            ));
        }
        // Leakage measured by the best available path.
        let budget = params.leak_budgets[j];
        let leak_value: Option<Rational> = match (&leak_rank, &equivocation) {
            (Some(leak), _) => Some(Rational::from(*leak)),
            (None, Some(eq)) => Some(&Rational::from(n_m) - eq),
            (None, None) => None,
        };
        let pass = match &leak_value {
            Some(leak) => *leak <= Rational::from(budget) && rank_oracle_agree != Some(false),
            None => {
                problems.push(format!(
                    "wiretap set {} unverifiable: rank precondition failed and enumeration is over cap",
                    j + 1
                ));
                false
            }
        };
        if let (Some(eq), Some(seen)) = (&equivocation, &observed_entropy) {
            // Leakage >= observed entropy - key entropy.
            let leak = &Rational::from(n_m) - eq;
            if leak < seen - &Rational::from(n_k) {
                imperfect_secrecy_ok = false;
                problems.push(format!(
                    "wiretap set {}: leakage {} below observed entropy minus key entropy",
                    j + 1,
                    leak
                ));
            }
        }
        if let (Some(eq), Some(comp)) = (&equivocation, &complement_conditional_entropy) {
            if eq > comp {
                equivocation_cap_ok = false;
                problems.push(format!(
                    "wiretap set {}: equivocation {} exceeds unobserved conditional entropy {}",
                    j + 1,
                    eq,
                    comp
                ));
            }
        }
        sets.push(WiretapAudit {
            channels: set.channels().iter().map(|&c| c as u64 + 1).collect(),
            positions: positions.len(),
            canonical,
            leak_rank,
            equivocation,
            observed_entropy,
            complement_conditional_entropy,
            leak_budget: budget,
            rank_oracle_agree,
            pass,
        });
    }

    let pass = problems.is_empty()
        && decode_identity.ok
        && joint_entropy_ok != Some(false)
        && channel_independence_ok != Some(false)
        && imperfect_secrecy_ok
        && equivocation_cap_ok
        && sets.iter().all(|s| s.pass);
    AuditReport {
        pass,
        problems,
        block_length: params.block_length,
        message_symbols: n_m,
        key_symbols: n_k,
        decode_identity,
        joint_entropy_ok,
        channel_independence_ok,
        imperfect_secrecy_ok,
        equivocation_cap_ok,
        wiretap_sets: sets,
    }
}

/// Renders the report as a fixed-width table for terminals.
pub fn render_table(report: &AuditReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "block n={} message={} key={}  decode identity: {} ({}, {} trials)",
        report.block_length,
        report.message_symbols,
        report.key_symbols,
        if report.decode_identity.ok { "ok" } else { "FAIL" },
        report.decode_identity.mode,
        report.decode_identity.trials
    );
    let _ = writeln!(
        out,
        "{:<18} {:>9} {:>12} {:>12} {:>8}  verdict",
        "wiretap set", "leak", "equivocation", "budget", "path"
    );
    for s in &report.wiretap_sets {
        let channels = s
            .channels
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let leak = match (&s.leak_rank, &s.equivocation) {
            (Some(l), _) => l.to_string(),
            (None, Some(eq)) => {
                (&Rational::from(report.message_symbols) - eq).to_string()
            }
            _ => "?".to_string(),
        };
        let eq = s.equivocation.as_ref().map_or("-".to_string(), |e| e.to_string());
        let path = match (s.canonical, s.equivocation.is_some()) {
            (true, true) => "both",
            (true, false) => "rank",
            (false, true) => "oracle",
            (false, false) => "none",
        };
        let _ = writeln!(
            out,
            "{:<18} {:>9} {:>12} {:>12} {:>8}  {}",
            format!("{{{}}}", channels),
            leak,
            eq,
            s.leak_budget,
            path,
            if s.pass { "pass" } else { "FAIL" }
        );
    }
    for p in &report.problems {
        let _ = writeln!(out, "problem: {}", p);
    }
    let _ = writeln!(out, "overall: {}", if report.pass { "pass" } else { "FAIL" });
    out
}
