//! Linear code construction for feasible rate points.
//!
//! Given scaled integer parameters, the constructed code sends
//! `N = message_symbols + key_symbols` field symbols across the channels:
//! the first `key_symbols` positions carry the key verbatim, and each
//! remaining position carries one message symbol masked by a key
//! combination, `x_i = m_{i-k} + b_i . K`. The mask rows `b_i` are chosen
//! greedily, smallest first in the natural encoding, so that for every
//! wiretap set the observed key-mixing block keeps full rank; full rank
//! caps the set's information gain at its leakage budget, which the audit
//! then certifies independently.
//!
//! The search for each mask row excludes the span of every unsaturated
//! wiretapped block built so far. A union of `s` proper subspaces cannot
//! cover GF(q)^k when `q > s`, so construction is guaranteed whenever `q`
//! exceeds the number of wiretap sets; below that bound it is still
//! attempted and fails loudly with the saturating position.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gf::{make_field, FieldSpec, Matrix, SpanBasis};
use crate::model::{ProblemInstance, RateAllocation, RateTuple};
use crate::rational::Rational;
use crate::region::{verify_witness, IntegerParameters, RegionError, RegionVariant};

/// Positions a channel occupies in the transmitted word (0-based,
/// contiguous).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelRange {
    pub start: usize,
    pub count: usize,
}

impl ChannelRange {
    pub fn positions(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.count
    }
}

/// A synthesized linear code: field, block parameters, channel layout and
/// the `N x N` generator mapping `(message; key)` to channel symbols.
///
/// The generator of a synthesized code has a fixed block shape: the key
/// rows are `(0 | I)` and the message rows are `(I | b_i)`. Codes loaded
/// from files may deviate (hand-authored or tampered); the audit detects
/// that rather than the parser, so a bad file still produces a readable
/// failure report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: FieldSpec,
    params: IntegerParameters,
    layout: Vec<ChannelRange>,
    generator: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthError {
    InvalidParams(Vec<String>),
    /// The excluded-union search exhausted GF(q)^k at the given 1-based
    /// position. Possible only when q is at most the number of wiretap
    /// sets.
    ConstructionFailed { position: usize, spans: usize },
    Field(crate::gf::FieldError),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::InvalidParams(v) => write!(f, "invalid parameters: {}", v.join("; ")),
            SynthError::ConstructionFailed { position, spans } => write!(
                f,
                "construction failed at position {}: all of GF(q)^k is covered by {} wiretap spans",
                position, spans
            ),
            SynthError::Field(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for SynthError {}

impl From<crate::gf::FieldError> for SynthError {
    fn from(e: crate::gf::FieldError) -> Self {
        SynthError::Field(e)
    }
}

impl LinearCode {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn params(&self) -> &IntegerParameters {
        &self.params
    }

    pub fn layout(&self) -> &[ChannelRange] {
        &self.layout
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Total transmitted symbols per block.
    pub fn total_symbols(&self) -> usize {
        self.generator.rows()
    }

    pub fn message_len(&self) -> usize {
        self.params.message_symbols as usize
    }

    pub fn key_len(&self) -> usize {
        self.params.key_symbols as usize
    }

    /// Message-side generator columns for one position.
    pub fn message_row(&self, position: usize) -> &[u64] {
        &self.generator.row(position)[..self.message_len()]
    }

    /// Key-side generator columns (the mask row) for one position.
    pub fn mask_row(&self, position: usize) -> &[u64] {
        &self.generator.row(position)[self.message_len()..]
    }

    /// All transmitted positions of the given channels, ascending.
    /// Channels are 0-based and deduplicated by the caller's set.
    pub fn positions_of_channels(&self, channels: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &c in channels {
            out.extend(self.layout[c].positions());
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The message-side and key-side submatrices at the given positions.
    pub fn blocks_at(&self, positions: &[usize]) -> (Matrix, Matrix) {
        let n_m = self.message_len();
        let a = Matrix::from_rows(
            positions.iter().map(|&p| self.generator.row(p)[..n_m].to_vec()).collect(),
            n_m,
        );
        let b = Matrix::from_rows(
            positions.iter().map(|&p| self.generator.row(p)[n_m..].to_vec()).collect(),
            self.key_len(),
        );
        (a, b)
    }

    /// Rebuilds a code from its serialized parts, checking shapes and the
    /// field, but deliberately not the generator's block structure.
    pub fn from_parts(
        field: FieldSpec,
        params: IntegerParameters,
        layout: Vec<ChannelRange>,
        generator: Matrix,
    ) -> Result<LinearCode, SynthError> {
        let mut problems = Vec::new();
        let n = params.total_symbols() as usize;
        if generator.rows() != n || generator.cols() != n {
            problems.push(format!(
                "generator must be {}x{}, got {}x{}",
                n,
                n,
                generator.rows(),
                generator.cols()
            ));
        }
        let mut expected_start = 0usize;
        for (i, range) in layout.iter().enumerate() {
            if range.start != expected_start {
                problems.push(format!(
                    "channel {} starts at position {}, expected {}",
                    i + 1,
                    range.start + 1,
                    expected_start + 1
                ));
            }
            expected_start += range.count;
        }
        if expected_start != n {
            problems.push(format!("layout covers {} positions, expected {}", expected_start, n));
        }
        if layout.len() != params.channel_symbols.len() {
            problems.push(format!(
                "layout has {} channels, parameters have {}",
                layout.len(),
                params.channel_symbols.len()
            ));
        } else {
            for (i, (range, &n_i)) in layout.iter().zip(&params.channel_symbols).enumerate() {
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
        for r in 0..generator.rows() {
            for &v in generator.row(r) {
                if v >= field.q() {
                    problems.push(format!("generator entry {} out of range for q={}", v, field.q()));
                }
            }
        }
        if !problems.is_empty() {
            return Err(SynthError::InvalidParams(problems));
        }
        Ok(LinearCode { field, params, layout, generator })
    }
}

// Wire format, nested plain integers throughout; round-trips bit-exactly.
#[derive(Serialize, Deserialize)]
struct FieldWire {
    p: u64,
    m: u32,
    modulus: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct CodeWire {
    field: FieldWire,
    params: IntegerParameters,
    /// 1-based inclusive start positions with counts, one per channel.
    channel_layout: Vec<[u64; 2]>,
    generator: Vec<Vec<u64>>,
}

impl Serialize for LinearCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CodeWire {
            field: FieldWire {
                p: self.field.p(),
                m: self.field.extension_degree(),
                modulus: self.field.modulus().to_vec(),
            },
            params: self.params.clone(),
            channel_layout: self
                .layout
                .iter()
                .map(|r| [r.start as u64 + 1, r.count as u64])
                .collect(),
            generator: self.generator.to_nested(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearCode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = CodeWire::deserialize(deserializer)?;
        let field = FieldSpec::from_parts(wire.field.p, wire.field.m, wire.field.modulus)
            .map_err(D::Error::custom)?;
        let layout: Vec<ChannelRange> = wire
            .channel_layout
            .iter()
            .map(|&[start, count]| {
                if start == 0 {
                    Err(D::Error::custom("channel_layout start positions are 1-based"))
                } else {
                    Ok(ChannelRange { start: (start - 1) as usize, count: count as usize })
                }
            })
            .collect::<Result<_, _>>()?;
        let cols = wire.generator.first().map_or(0, |r| r.len());
        if wire.generator.iter().any(|r| r.len() != cols) {
            return Err(D::Error::custom("generator rows have unequal lengths"));
        }
        let generator = Matrix::from_rows(wire.generator, cols);
        LinearCode::from_parts(field, wire.params, layout, generator).map_err(D::Error::custom)
    }
}

/// The lexicographically smallest vector of GF(q)^dim outside every given
/// span (vectors compared by their natural integer encoding, leftmost
/// coordinate most significant). `None` when the spans cover the whole
/// space, which the covering bound rules out whenever q exceeds the number
/// of spans.
pub fn choose_extension_vector(
    field: &FieldSpec,
    spans: &[Matrix],
    dim: usize,
) -> Option<Vec<u64>> {
    let bases: Vec<SpanBasis> = spans
        .iter()
        .map(|m| {
            let mut b = SpanBasis::new(dim);
            for r in 0..m.rows() {
                b.insert(field, m.row(r));
            }
            b
        })
        .collect();
    let refs: Vec<&SpanBasis> = bases.iter().collect();
    choose_outside(field, &refs, dim)
}

fn choose_outside(field: &FieldSpec, spans: &[&SpanBasis], dim: usize) -> Option<Vec<u64>> {
    let q = field.q();
    let mut v = vec![0u64; dim];
    loop {
        if !spans.iter().any(|s| s.contains(field, &v)) {
            return Some(v);
        }
        // Next candidate in lexicographic order: increment the rightmost
        // coordinate with carry.
        let mut i = dim;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
        }
    }
}

/// Builds a code realizing the given integer parameters on an instance.
///
/// The construction is deterministic: two runs on identical inputs produce
/// bit-identical codes.
pub fn synthesize(
    instance: &ProblemInstance,
    params: &IntegerParameters,
) -> Result<LinearCode, SynthError> {
    let problems = params.validate(instance);
    if !problems.is_empty() {
        return Err(SynthError::InvalidParams(problems));
    }
    let field = make_field(instance.q())?;
    let n_k = params.key_symbols as usize;
    let n_m = params.message_symbols as usize;
    let n = n_k + n_m;

    let mut layout = Vec::with_capacity(params.channel_symbols.len());
    let mut start = 0usize;
    for &count in &params.channel_symbols {
        layout.push(ChannelRange { start, count: count as usize });
        start += count as usize;
    }
    let mut channel_of = vec![0usize; n];
    for (c, range) in layout.iter().enumerate() {
        for p in range.positions() {
            channel_of[p] = c;
        }
    }

    // Per wiretap set: the span of its observed mask rows so far, plus how
    // many of its positions have been emitted.
    let d = instance.set_count();
    let mut set_spans: Vec<SpanBasis> = (0..d).map(|_| SpanBasis::new(n_k)).collect();
    let mut set_rows = vec![0usize; d];

    let mut mask_rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    for position in 0..n {
        let row = if position < n_k {
            // Key positions transmit the key verbatim: unit mask rows.
            let mut unit = vec![0u64; n_k];
            unit[position] = 1;
            unit
        } else {
            // Exclude the span of every wiretap set that observes this
            // position and has not yet saturated its key-mixing rank.
            let channel = channel_of[position];
            let active: Vec<&SpanBasis> = (0..d)
                .filter(|&j| {
                    instance.wiretap_sets()[j].contains(channel) && set_rows[j] < n_k
                })
                .map(|j| &set_spans[j])
                .collect();
            match choose_outside(&field, &active, n_k) {
                Some(v) => v,
                None => {
                    return Err(SynthError::ConstructionFailed {
                        position: position + 1,
                        spans: active.len(),
                    });
                }
            }
        };
        let channel = channel_of[position];
        for j in 0..d {
            if instance.wiretap_sets()[j].contains(channel) {
                set_spans[j].insert(&field, &row);
                set_rows[j] += 1;
            }
        }
        mask_rows.push(row);
    }

    // Assemble (message | key) generator rows.
    let mut generator = Matrix::zeros(n, n);
    for (position, mask) in mask_rows.iter().enumerate() {
        if position >= n_k {
            generator.set(position, position - n_k, 1);
        }
        for (j, &v) in mask.iter().enumerate() {
            generator.set(position, n_m + j, v);
        }
    }

    let code = LinearCode { field, params: params.clone(), layout, generator };
    debug_assert_eq!(code.field.rank(code.generator()), n, "generator must be invertible");
    debug_assert!(wiretap_blocks_full_rank(&code, instance));
    Ok(code)
}

/// Every wiretapped key-mixing block has rank `min(rows, key_symbols)`.
pub fn wiretap_blocks_full_rank(code: &LinearCode, instance: &ProblemInstance) -> bool {
    instance.wiretap_sets().iter().all(|set| {
        let positions = code.positions_of_channels(set.channels());
        let (_, b) = code.blocks_at(&positions);
        code.field().rank(&b) == positions.len().min(code.key_len())
    })
}

/// Drops the surplus key: replaces the key rate by the least value the
/// witness supports, `max(0, sum(r) - R_M)`. The pair must be a valid
/// general-region point; the result then satisfies the key-recovered
/// equality with the same witness, so it can be scaled and synthesized
/// directly.
pub fn reduce_key(
    instance: &ProblemInstance,
    tuple: &RateTuple,
    witness: &RateAllocation,
) -> Result<RateTuple, RegionError> {
    let violations = verify_witness(instance, tuple, RegionVariant::General, witness);
    if !violations.is_empty() {
        return Err(RegionError::WitnessRejected { violations });
    }
    let reduced = &witness.total() - &tuple.message_rate;
    let key_rate = if reduced.is_negative() { Rational::zero() } else { reduced };
    Ok(RateTuple::new(tuple.message_rate.clone(), key_rate, tuple.equivocations.clone()))
}
