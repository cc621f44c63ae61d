//! Problem instances, rate tuples and allocation witnesses.
//!
//! An instance describes the transmission side: `h` parallel noiseless
//! channels with integer capacities (in symbols of GF(q) per use), and a
//! collection of wiretap sets, each a subset of channels that a single
//! eavesdropper may observe. A rate tuple asks for a message rate, a key
//! rate and one equivocation lower bound per wiretap set, all in log-q
//! units. Rate allocations are the per-channel witnesses the region checks
//! search for.

use serde::{Deserialize, Serialize};

use crate::gf::{prime_power_decompose, MAX_Q};
use crate::rational::Rational;

/// One wiretap set: the channel indices as given (1-based, order and
/// duplicates preserved for reporting) plus the canonical form used
/// everywhere else (0-based, sorted, deduplicated, in-range only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiretapSet {
    raw: Vec<u64>,
    channels: Vec<usize>,
}

impl WiretapSet {
    fn new(raw: Vec<u64>, h: usize) -> Self {
        let mut channels: Vec<usize> = raw
            .iter()
            .filter(|&&v| v >= 1 && v <= h as u64)
            .map(|&v| (v - 1) as usize)
            .collect();
        channels.sort_unstable();
        channels.dedup();
        WiretapSet { raw, channels }
    }

    /// Canonical 0-based member channels.
    pub fn channels(&self) -> &[usize] {
        &self.channels
    }

    /// The indices exactly as they appeared in the input (1-based).
    pub fn raw(&self) -> &[u64] {
        &self.raw
    }

    pub fn contains(&self, channel: usize) -> bool {
        self.channels.binary_search(&channel).is_ok()
    }
}

/// A transmission problem: alphabet size, channel capacities and the
/// collection of wiretap sets. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    q: u64,
    capacities: Vec<u64>,
    sets: Vec<WiretapSet>,
}

impl ProblemInstance {
    /// Builds an instance from raw data with 1-based channel indices.
    /// Construction never fails; run [`validate_instance`] to surface
    /// malformed data as a report.
    pub fn new(q: u64, capacities: Vec<u64>, wiretap_sets: Vec<Vec<u64>>) -> Self {
        let h = capacities.len();
        let sets = wiretap_sets.into_iter().map(|raw| WiretapSet::new(raw, h)).collect();
        ProblemInstance { q, capacities, sets }
    }

    /// Channel count `h`.
    pub fn channel_count(&self) -> usize {
        self.capacities.len()
    }

    /// Wiretap set count `d`.
    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn capacities(&self) -> &[u64] {
        &self.capacities
    }

    pub fn wiretap_sets(&self) -> &[WiretapSet] {
        &self.sets
    }

    /// Channels outside wiretap set `j` (0-based), ascending.
    pub fn complement(&self, j: usize) -> Vec<usize> {
        (0..self.channel_count()).filter(|c| !self.sets[j].contains(*c)).collect()
    }

    pub fn total_capacity(&self) -> Rational {
        self.capacities.iter().map(|&c| Rational::from(c)).sum()
    }
}

// Wire format: {"q": 3, "capacities": [1, 1], "wiretap_sets": [[1], [2]]}
// with 1-based channel indices.
#[derive(Serialize, Deserialize)]
struct InstanceWire {
    q: u64,
    capacities: Vec<u64>,
    wiretap_sets: Vec<Vec<u64>>,
}

impl Serialize for ProblemInstance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        InstanceWire {
            q: self.q,
            capacities: self.capacities.clone(),
            wiretap_sets: self.sets.iter().map(|s| s.raw.clone()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProblemInstance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = InstanceWire::deserialize(deserializer)?;
        Ok(ProblemInstance::new(wire.q, wire.capacities, wire.wiretap_sets))
    }
}

/// Outcome of instance validation: hard violations and advisory warnings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks an instance for well-formedness. Pure: same input, same report.
pub fn validate_instance(inst: &ProblemInstance) -> ValidationReport {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let h = inst.channel_count();

    if inst.q > MAX_Q {
        violations.push(format!("q={} exceeds the supported maximum {}", inst.q, MAX_Q));
    } else if prime_power_decompose(inst.q).is_none() {
        violations.push(format!("q={} is not a prime power", inst.q));
    }
    if h == 0 {
        violations.push("channel set is empty (h must be >= 1)".to_string());
    }
    for (i, &c) in inst.capacities.iter().enumerate() {
        if c == 0 {
            violations.push(format!("capacity of channel {} must be >= 1", i + 1));
        }
    }
    for (j, set) in inst.sets.iter().enumerate() {
        for &v in set.raw() {
            if v == 0 || v > h as u64 {
                violations.push(format!(
                    "wiretap set {}: channel index {} out of range 1..={}",
                    j + 1,
                    v,
                    h
                ));
            }
        }
        if h > 0 && set.channels().len() == h {
            warnings.push(format!(
                "wiretap set {} covers all channels; its equivocation bound is forced to 0",
                j + 1
            ));
        }
        for (k, other) in inst.sets.iter().enumerate().take(j) {
            if other.channels() == set.channels() {
                warnings.push(format!("wiretap set {} duplicates wiretap set {}", j + 1, k + 1));
                break;
            }
        }
    }
    ValidationReport { violations, warnings }
}

/// A target rate tuple: message rate, key rate and per-wiretap-set
/// equivocation lower bounds, in log-q units per channel use.
///
/// Construction is permissive (any exact rationals); the region checks
/// reject out-of-range values with explicit certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateTuple {
    pub message_rate: Rational,
    pub key_rate: Rational,
    #[serde(default)]
    pub equivocations: Vec<Rational>,
}

impl RateTuple {
    pub fn new(message_rate: Rational, key_rate: Rational, equivocations: Vec<Rational>) -> Self {
        RateTuple { message_rate, key_rate, equivocations }
    }

    /// Permitted leakage for wiretap set `j` (0-based): the message rate
    /// minus the required equivocation. Negative slack means the tuple
    /// demands more equivocation than the message carries and must be
    /// rejected by any region check.
    pub fn slack(&self, j: usize) -> Option<Rational> {
        let r = self.equivocations.get(j)?;
        Some(&self.message_rate - r)
    }
}

/// Per-channel rate allocation witnessing region membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RateAllocation {
    pub rates: Vec<Rational>,
}

impl RateAllocation {
    pub fn new(rates: Vec<Rational>) -> Self {
        RateAllocation { rates }
    }

    pub fn total(&self) -> Rational {
        self.rates.iter().sum()
    }
}
