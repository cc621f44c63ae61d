//! Shared test oracles and generators.
#![allow(dead_code)] // each test target uses a different subset
//!
//! The feasibility oracle here is deliberately independent of the simplex
//! path in the library: the allocation polytope is bounded (a box cut by a
//! few halfspaces), so it is nonempty iff some basic solution of an
//! active-constraint subsystem is feasible. Enumerating every such
//! subsystem and solving it by rational Gaussian elimination decides
//! membership by brute force.

use wiretap2::rational::Rational;
use wiretap2::rng::SplitMix64;
use wiretap2::{ProblemInstance, RateAllocation, RateTuple, RegionVariant};

pub fn ri(n: i64) -> Rational {
    Rational::from(n)
}

pub fn rq(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// `coeffs . r <= rhs`.
pub struct OracleRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// The variable-free side conditions; false means outright infeasible.
pub fn prechecks_hold(tuple: &RateTuple) -> bool {
    if tuple.message_rate.is_negative() || tuple.key_rate.is_negative() {
        return false;
    }
    tuple
        .equivocations
        .iter()
        .all(|rj| !rj.is_negative() && *rj <= tuple.message_rate)
}

/// Every constraint on the allocation, including nonnegativity, as `<=`
/// rows.
pub fn oracle_rows(
    instance: &ProblemInstance,
    tuple: &RateTuple,
    variant: RegionVariant,
) -> Vec<OracleRow> {
    let h = instance.channel_count();
    let budget = &tuple.key_rate + &tuple.message_rate;
    let mut rows = Vec::new();
    for i in 0..h {
        let mut neg = vec![Rational::zero(); h];
        neg[i] = -Rational::one();
        rows.push(OracleRow { coeffs: neg, rhs: Rational::zero() });
        let mut pos = vec![Rational::zero(); h];
        pos[i] = Rational::one();
        rows.push(OracleRow { coeffs: pos, rhs: Rational::from(instance.capacities()[i]) });
    }
    rows.push(OracleRow { coeffs: vec![Rational::one(); h], rhs: budget.clone() });
    rows.push(OracleRow { coeffs: vec![-Rational::one(); h], rhs: -&tuple.message_rate });
    if variant == RegionVariant::KeyRecovered {
        rows.push(OracleRow { coeffs: vec![-Rational::one(); h], rhs: -&budget });
    }
    for j in 0..instance.set_count() {
        let mut coeffs = vec![Rational::zero(); h];
        for c in instance.complement(j) {
            coeffs[c] = -Rational::one();
        }
        rows.push(OracleRow { coeffs, rhs: -&tuple.equivocations[j] });
    }
    rows
}

fn solve_square(rows: &[&OracleRow], h: usize) -> Option<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.iter().map(|r| r.coeffs.clone()).collect();
    let mut b: Vec<Rational> = rows.iter().map(|r| r.rhs.clone()).collect();
    for col in 0..h {
        let pivot = (col..h).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / a[col][col].clone();
        for cell in a[col].iter_mut() {
            *cell = &*cell * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..h {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            if f.is_zero() {
                continue;
            }
            let pivot_row = a[col].clone();
            for (cell, pv) in a[r].iter_mut().zip(&pivot_row) {
                let t = &f * pv;
                *cell = &*cell - &t;
            }
            let t = &f * &b[col];
            b[r] = &b[r] - &t;
        }
    }
    Some(b)
}

fn satisfies_all(rows: &[OracleRow], point: &[Rational]) -> bool {
    rows.iter().all(|row| {
        let lhs: Rational = row.coeffs.iter().zip(point).map(|(c, x)| c * x).sum();
        lhs <= row.rhs
    })
}

/// Brute-force membership: some size-h subsystem of active constraints has
/// a basic solution satisfying everything.
pub fn basic_solution_feasible(
    instance: &ProblemInstance,
    tuple: &RateTuple,
    variant: RegionVariant,
) -> bool {
    if !prechecks_hold(tuple) {
        return false;
    }
    let h = instance.channel_count();
    let rows = oracle_rows(instance, tuple, variant);
    let mut pick = vec![0usize; h];
    subsets_feasible(&rows, &mut pick, 0, 0, h)
}

fn subsets_feasible(
    rows: &[OracleRow],
    pick: &mut Vec<usize>,
    depth: usize,
    start: usize,
    h: usize,
) -> bool {
    if depth == h {
        let chosen: Vec<&OracleRow> = pick.iter().map(|&i| &rows[i]).collect();
        if let Some(point) = solve_square(&chosen, h) {
            if satisfies_all(rows, &point) {
                return true;
            }
        }
        return false;
    }
    for i in start..rows.len() {
        pick[depth] = i;
        if subsets_feasible(rows, pick, depth + 1, i + 1, h) {
            return true;
        }
    }
    false
}

/// Grid search over allocations with coordinates in steps of
/// `1/grid_denominator`, up to each capacity.
pub fn grid_feasible(
    instance: &ProblemInstance,
    tuple: &RateTuple,
    variant: RegionVariant,
    grid_denominator: i64,
) -> bool {
    if !prechecks_hold(tuple) {
        return false;
    }
    let h = instance.channel_count();
    let rows = oracle_rows(instance, tuple, variant);
    let limits: Vec<i64> =
        instance.capacities().iter().map(|&c| c as i64 * grid_denominator).collect();
    let mut counters = vec![0i64; h];
    loop {
        let point: Vec<Rational> =
            counters.iter().map(|&k| rq(k, grid_denominator)).collect();
        if satisfies_all(&rows, &point) {
            return true;
        }
        let mut j = h;
        loop {
            if j == 0 {
                return false;
            }
            j -= 1;
            counters[j] += 1;
            if counters[j] <= limits[j] {
                break;
            }
            counters[j] = 0;
        }
    }
}

/// Uniform rational in `[0, max_num / den]` with the given denominator.
pub fn random_rational(rng: &mut SplitMix64, max_num: i64, den: i64) -> Rational {
    rq(rng.next_range(max_num as u64 + 1) as i64, den)
}

/// Random instance: capacities in `1..=c_max`, `d` distinct nonempty
/// wiretap sets.
pub fn random_instance(
    rng: &mut SplitMix64,
    q: u64,
    h: usize,
    d: usize,
    c_max: u64,
) -> ProblemInstance {
    let capacities: Vec<u64> = (0..h).map(|_| 1 + rng.next_range(c_max)).collect();
    let all_subsets: Vec<Vec<u64>> = nonempty_subsets(h);
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < d.min(all_subsets.len()) {
        let pick = rng.next_range(all_subsets.len() as u64) as usize;
        if !chosen.contains(&pick) {
            chosen.push(pick);
        }
    }
    let sets = chosen.into_iter().map(|i| all_subsets[i].clone()).collect();
    ProblemInstance::new(q, capacities, sets)
}

/// All nonempty subsets of `{1..h}` as 1-based index lists.
pub fn nonempty_subsets(h: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << h) {
        let set: Vec<u64> =
            (0..h).filter(|&i| mask & (1 << i) != 0).map(|i| i as u64 + 1).collect();
        out.push(set);
    }
    out
}

/// All collections of at most `d_max` distinct nonempty wiretap sets.
pub fn all_collections(h: usize, d_max: usize) -> Vec<Vec<Vec<u64>>> {
    let subsets = nonempty_subsets(h);
    let mut out = vec![Vec::new()];
    let mut current: Vec<usize> = Vec::new();
    fn extend(
        subsets: &[Vec<u64>],
        current: &mut Vec<usize>,
        start: usize,
        d_max: usize,
        out: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if current.len() == d_max {
            return;
        }
        for i in start..subsets.len() {
            current.push(i);
            out.push(current.iter().map(|&k| subsets[k].clone()).collect());
            extend(subsets, current, i + 1, d_max, out);
            current.pop();
        }
    }
    extend(&subsets, &mut current, 0, d_max, &mut out);
    out
}

/// All capacity vectors over `{1..=c_max}^h`.
pub fn all_capacities(h: usize, c_max: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..h {
        let mut next = Vec::new();
        for prefix in &out {
            for c in 1..=c_max {
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// A random key-recovered-region point with its witness, all denominators
/// dividing `den`: allocation on the grid, message rate below the total,
/// key rate exactly the remainder, equivocations below both the message
/// rate and each complement sum.
pub fn random_key_recovered_point(
    rng: &mut SplitMix64,
    instance: &ProblemInstance,
    den: i64,
) -> (RateTuple, RateAllocation) {
    let h = instance.channel_count();
    let rates: Vec<Rational> = (0..h)
        .map(|i| random_rational(rng, instance.capacities()[i] as i64 * den, den))
        .collect();
    let witness = RateAllocation::new(rates);
    let total = witness.total();
    let total_num = (&total * &ri(den)).to_u64().expect("grid total");
    let message_rate = rq(rng.next_range(total_num + 1) as i64, den);
    let key_rate = &total - &message_rate;
    let equivocations: Vec<Rational> = (0..instance.set_count())
        .map(|j| {
            let comp_sum: Rational =
                instance.complement(j).iter().map(|&c| witness.rates[c].clone()).sum();
            let cap = if comp_sum < message_rate { comp_sum } else { message_rate.clone() };
            let cap_num = (&cap * &ri(den)).to_u64().expect("grid cap");
            rq(rng.next_range(cap_num + 1) as i64, den)
        })
        .collect();
    (RateTuple::new(message_rate, key_rate, equivocations), witness)
}
