//! End-to-end pipeline properties: sample a feasible point, drop surplus
//! key, scale, synthesize, then audit, plus the structural invariants of
//! the construction.

mod common;

use common::*;
use wiretap2::audit::{full_audit, AuditOptions};
use wiretap2::gf::{make_field, Matrix};
use wiretap2::rng::SplitMix64;
use wiretap2::synth::{
    choose_extension_vector, reduce_key, synthesize, wiretap_blocks_full_rank,
};
use wiretap2::{
    check_membership, scale_to_integers, FeasibilityResult, RateTuple, RegionQuery, RegionVariant,
};

fn smallest_prime_power_above(d: u64) -> u64 {
    (d + 1..).find(|&q| wiretap2::gf::prime_power_decompose(q).is_some()).unwrap()
}

#[test]
fn pipeline_codes_audit_clean_and_realize_their_tuples() {
    let mut rng = SplitMix64::new(1234);
    let opts = AuditOptions::default();
    let mut audited = 0;
    for _ in 0..60 {
        let h = 1 + rng.next_range(3) as usize;
        let d = rng.next_range(4) as usize;
        let q = smallest_prime_power_above(d as u64);
        let inst = random_instance(&mut rng, q, h, d, 2);
        let den = [1, 2, 3][rng.next_range(3) as usize];
        let (tuple, witness) = random_key_recovered_point(&mut rng, &inst, den);
        let params = scale_to_integers(&tuple, &witness, &inst).unwrap();
        if (q as u128).pow(params.total_symbols() as u32) > opts.enumeration_cap as u128 {
            continue;
        }
        let code = synthesize(&inst, &params).expect("q > d guarantees construction");
        assert_eq!(code.field().rank(code.generator()), code.total_symbols());
        assert!(wiretap_blocks_full_rank(&code, &inst));
        // Observed rows of an invertible generator are always independent.
        for set in inst.wiretap_sets() {
            let positions = code.positions_of_channels(set.channels());
            let (a, b) = code.blocks_at(&positions);
            assert_eq!(code.field().rank(&a.hstack(&b)), positions.len());
        }
        let report = full_audit(&code, &inst, &params, &opts);
        assert!(report.pass, "audit failed: {:?}", report.problems);

        // The realized rates, equivocations read from the oracle, land back
        // inside the key-recovered region.
        let n = ri(params.block_length as i64);
        let realized = RateTuple::new(
            &ri(params.message_symbols as i64) / &n,
            &ri(params.key_symbols as i64) / &n,
            report
                .wiretap_sets
                .iter()
                .map(|s| &s.equivocation.clone().expect("within cap") / &n)
                .collect(),
        );
        let res = check_membership(&RegionQuery {
            instance: &inst,
            tuple: &realized,
            variant: RegionVariant::KeyRecovered,
        })
        .unwrap();
        assert!(res.is_feasible(), "realized tuple rejected: {:?}", realized);
        audited += 1;
    }
    assert!(audited > 30, "too few codes audited: {}", audited);
}

#[test]
fn general_points_synthesize_after_key_reduction() {
    let mut rng = SplitMix64::new(77);
    let opts = AuditOptions::default();
    let mut done = 0;
    for _ in 0..40 {
        let h = 1 + rng.next_range(3) as usize;
        let d = rng.next_range(3) as usize;
        let q = smallest_prime_power_above(d as u64);
        let inst = random_instance(&mut rng, q, h, d, 2);
        let (mut tuple, _) = random_key_recovered_point(&mut rng, &inst, 2);
        // Inflate the key rate: still a general-region point.
        tuple.key_rate = &tuple.key_rate + &ri(rng.next_range(4) as i64 + 1);
        let witness = match check_membership(&RegionQuery {
            instance: &inst,
            tuple: &tuple,
            variant: RegionVariant::General,
        })
        .unwrap()
        {
            FeasibilityResult::Feasible { witness } => witness,
            FeasibilityResult::Infeasible { .. } => panic!("inflated key cannot hurt"),
        };
        let reduced = reduce_key(&inst, &tuple, &witness).unwrap();
        assert_eq!(reduced.key_rate, &witness.total() - &tuple.message_rate);
        let params = scale_to_integers(&reduced, &witness, &inst).unwrap();
        if (q as u128).pow(params.total_symbols() as u32) > opts.enumeration_cap as u128 {
            continue;
        }
        let code = synthesize(&inst, &params).unwrap();
        let report = full_audit(&code, &inst, &params, &opts);
        assert!(report.pass, "audit failed: {:?}", report.problems);
        done += 1;
    }
    assert!(done > 20, "too few pipelines exercised: {}", done);
}

#[test]
fn synthesis_is_bit_deterministic() {
    let mut rng = SplitMix64::new(31337);
    for _ in 0..20 {
        let h = 1 + rng.next_range(3) as usize;
        let d = rng.next_range(4) as usize;
        let q = smallest_prime_power_above(d as u64);
        let inst = random_instance(&mut rng, q, h, d, 2);
        let (tuple, witness) = random_key_recovered_point(&mut rng, &inst, 2);
        let params = scale_to_integers(&tuple, &witness, &inst).unwrap();
        let a = synthesize(&inst, &params).unwrap();
        let b = synthesize(&inst, &params).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "two runs differ"
        );
    }
}

#[test]
fn excluded_union_is_small_and_search_escapes_it() {
    // A union of s proper subspaces covers at most s * q^(dim-1) vectors,
    // so the lexicographic search succeeds whenever q > s.
    let mut rng = SplitMix64::new(515);
    for q in [2u64, 3, 4, 5] {
        let field = make_field(q).unwrap();
        for _ in 0..30 {
            let dim = 1 + rng.next_range(3) as usize;
            let span_count = 1 + rng.next_range(4) as usize;
            let spans: Vec<Matrix> = (0..span_count)
                .map(|_| {
                    let rows = rng.next_range(dim as u64) as usize; // < dim: proper subspace
                    let mut m = Matrix::zeros(rows, dim);
                    for r in 0..rows {
                        for c in 0..dim {
                            m.set(r, c, rng.next_range(q));
                        }
                    }
                    m
                })
                .collect();
            // Count covered vectors by enumeration.
            let mut covered = 0u64;
            let total = q.pow(dim as u32);
            for code in 0..total {
                let mut v = vec![0u64; dim];
                let mut x = code;
                for slot in v.iter_mut() {
                    *slot = x % q;
                    x /= q;
                }
                if spans.iter().any(|s| field.in_span(&v, s)) {
                    covered += 1;
                }
            }
            assert!(
                covered <= span_count as u64 * q.pow(dim as u32 - 1),
                "covering bound violated: {} spans cover {} of {}",
                span_count,
                covered,
                total
            );
            let found = choose_extension_vector(&field, &spans, dim);
            if q > span_count as u64 {
                let v = found.expect("guaranteed when q > span count");
                assert!(spans.iter().all(|s| !field.in_span(&v, s)));
            } else if let Some(v) = found {
                assert!(spans.iter().all(|s| !field.in_span(&v, s)));
            }
        }
    }
}

#[test]
fn entropy_oracle_agrees_with_plain_shannon_computation() {
    // Second-opinion oracle: enumerate states through the public encoder
    // (no incremental odometer), tally observation/message counts in maps,
    // and evaluate the Shannon formulas in floating point. The exact
    // rational oracle must match to within float error.
    use std::collections::HashMap;
    use wiretap2::audit::{equivocation_oracle, image_entropy_oracle};
    use wiretap2::codec::encode;

    let mut rng = SplitMix64::new(909);
    let mut checked = 0;
    for _ in 0..40 {
        let h = 1 + rng.next_range(3) as usize;
        let d = rng.next_range(3) as usize;
        let q = smallest_prime_power_above(d as u64).max(3);
        let inst = random_instance(&mut rng, q, h, d, 2);
        let (tuple, witness) = random_key_recovered_point(&mut rng, &inst, 1);
        let params = scale_to_integers(&tuple, &witness, &inst).unwrap();
        let n = params.total_symbols() as u32;
        if (q as u128).pow(n) > 1 << 14 {
            continue;
        }
        let code = synthesize(&inst, &params).unwrap();
        let n_m = code.message_len();
        let n_k = code.key_len();
        let states = q.pow(n);

        for set in inst.wiretap_sets() {
            let positions = code.positions_of_channels(set.channels());
            let mut fibers: HashMap<Vec<u64>, HashMap<Vec<u64>, u64>> = HashMap::new();
            let mut m = vec![0u64; n_m];
            let mut k = vec![0u64; n_k];
            loop {
                let word = encode(&code, &m, &k).unwrap();
                let seen: Vec<u64> = positions.iter().map(|&p| word[p]).collect();
                *fibers.entry(seen).or_default().entry(m.clone()).or_insert(0) += 1;
                let mut advanced = false;
                for digit in m.iter_mut().chain(k.iter_mut()) {
                    *digit += 1;
                    if *digit < q {
                        advanced = true;
                        break;
                    }
                    *digit = 0;
                }
                if !advanced {
                    break;
                }
            }
            let total = states as f64;
            let lnq = (q as f64).ln();
            let mut h_y = 0.0;
            let mut h_m_given_y = 0.0;
            for per_message in fibers.values() {
                let fiber: u64 = per_message.values().sum();
                let p_y = fiber as f64 / total;
                h_y -= p_y * p_y.ln() / lnq;
                for &count in per_message.values() {
                    let p_m_given = count as f64 / fiber as f64;
                    h_m_given_y -= p_y * p_m_given * p_m_given.ln() / lnq;
                }
            }
            let cap = 1 << 20;
            let eq = equivocation_oracle(&code, set.channels(), cap).unwrap();
            let (a, b) = code.blocks_at(&positions);
            let hy = image_entropy_oracle(code.field(), &a.hstack(&b), cap).unwrap();
            let to_f = |r: &wiretap2::Rational| {
                use num_traits::ToPrimitive;
                r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
            };
            assert!((to_f(&eq) - h_m_given_y).abs() < 1e-9, "H(M|Y): {} vs {}", eq, h_m_given_y);
            assert!((to_f(&hy) - h_y).abs() < 1e-9, "H(Y): {} vs {}", hy, h_y);
            checked += 1;
        }
    }
    assert!(checked > 25, "too few entropy cross-checks: {}", checked);
}

#[test]
fn empty_wiretap_set_flows_through_the_whole_pipeline() {
    // An eavesdropper who sees nothing: zero leakage, full equivocation,
    // and a bound of R_j = R_M is attainable without any key.
    let inst = wiretap2::ProblemInstance::new(2, vec![1, 1], vec![vec![]]);
    let tuple = RateTuple::new(ri(2), ri(0), vec![ri(2)]);
    let witness = match check_membership(&RegionQuery {
        instance: &inst,
        tuple: &tuple,
        variant: RegionVariant::KeyRecovered,
    })
    .unwrap()
    {
        FeasibilityResult::Feasible { witness } => witness,
        other => panic!("must be feasible: {:?}", other),
    };
    let params = scale_to_integers(&tuple, &witness, &inst).unwrap();
    let code = synthesize(&inst, &params).unwrap();
    let report = full_audit(&code, &inst, &params, &AuditOptions::default());
    assert!(report.pass, "problems: {:?}", report.problems);
    let set = &report.wiretap_sets[0];
    assert_eq!(set.positions, 0);
    assert_eq!(set.leak_rank, Some(0));
    assert_eq!(set.equivocation, Some(ri(2)));
}

#[test]
fn sampled_decode_identity_beyond_exhaustive_cap() {
    // Nine symbols over GF(3): 19683 states, past the lowered exhaustive
    // cap, so decode identity falls back to seeded sampling.
    let inst = wiretap2::ProblemInstance::new(3, vec![4, 4, 4], vec![vec![1], vec![2, 3]]);
    let tuple = RateTuple::new(ri(6), ri(3), vec![ri(6), ri(3)]);
    let witness = wiretap2::RateAllocation::new(vec![ri(3), ri(3), ri(3)]);
    let params = scale_to_integers(&tuple, &witness, &inst).unwrap();
    let code = synthesize(&inst, &params).unwrap();
    let opts = AuditOptions {
        exhaustive_decode_cap: 16,
        enumeration_cap: 1 << 20,
        decode_trials: 10_000,
        seed: 5,
    };
    let report = full_audit(&code, &inst, &params, &opts);
    assert_eq!(report.decode_identity.mode, "sampled");
    assert_eq!(report.decode_identity.trials, 10_000);
    assert!(report.decode_identity.ok);
    assert!(report.pass, "problems: {:?}", report.problems);
}
