//! The min/max coin-flip algorithm: each node independently takes the
//! smallest or largest label of its list with probability 1/2. After edge
//! filtering every edge is forward with probability at least 1/4, so the
//! expected value is at least W/4. The derandomized variant fixes nodes one
//! at a time by conditional expectations.

use crate::instance::{evaluate, filter_edges, Labeling, RmasInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per-node state during sampling and derandomization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeState {
    Fixed(i64),
    /// Min and max of the node's list, each taken with probability 1/2.
    Coin(i64, i64),
}

impl NodeState {
    /// The outcomes of this node with their probabilities.
    fn outcomes(self) -> [(i64, f64); 2] {
        match self {
            NodeState::Fixed(l) => [(l, 1.0), (l, 0.0)],
            NodeState::Coin(lo, hi) => [(lo, 0.5), (hi, 0.5)],
        }
    }
}

/// The all-Coin starting distribution: nodes with singleton lists (or equal
/// min and max) are Fixed.
pub fn initial_state(inst: &RmasInstance) -> Vec<NodeState> {
    (0..inst.node_count())
        .map(|v| {
            let (lo, hi) = (inst.min_label(v), inst.max_label(v));
            if lo == hi {
                NodeState::Fixed(lo)
            } else {
                NodeState::Coin(lo, hi)
            }
        })
        .collect()
}

/// One random min/max labeling. The generator is ChaCha8 seeded with the
/// given value, so identical seeds reproduce identical labelings on every
/// platform.
pub fn sample_minmax(inst: &RmasInstance, seed: u64) -> Labeling {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Labeling(
        (0..inst.node_count())
            .map(|v| {
                let (lo, hi) = (inst.min_label(v), inst.max_label(v));
                if lo == hi || rng.gen_bool(0.5) {
                    lo
                } else {
                    hi
                }
            })
            .collect(),
    )
}

/// Exact expected value under independent per-node min/max distributions.
/// Each edge probability is computed by enumerating the at most four
/// outcome pairs.
pub fn expected_minmax(inst: &RmasInstance, state: &[NodeState]) -> f64 {
    inst.edges
        .iter()
        .map(|e| {
            let mut p = 0.0;
            for (lt, pt) in state[e.tail].outcomes() {
                for (lh, ph) in state[e.head].outcomes() {
                    if lt < lh {
                        p += pt * ph;
                    }
                }
            }
            e.weight * p
        })
        .sum()
}

/// Conditional-expectation derandomization. Nodes are fixed in ascending
/// index order, each to the min or max label with the larger conditional
/// expectation (tie: min). The instance is filtered first; the returned
/// trace starts with the unconditioned expectation, appends the expectation
/// after each fixing step, and is nondecreasing, so the final value is at
/// least W/4 of the filtered instance.
pub fn derandomize_minmax(inst: &RmasInstance) -> (Labeling, Vec<f64>) {
    let filtered = filter_edges(inst).kept;
    let mut state = initial_state(&filtered);
    let mut trace = vec![expected_minmax(&filtered, &state)];
    for v in 0..filtered.node_count() {
        if let NodeState::Coin(lo, hi) = state[v] {
            state[v] = NodeState::Fixed(lo);
            let e_lo = expected_minmax(&filtered, &state);
            state[v] = NodeState::Fixed(hi);
            let e_hi = expected_minmax(&filtered, &state);
            if e_lo >= e_hi {
                state[v] = NodeState::Fixed(lo);
                trace.push(e_lo);
            } else {
                trace.push(e_hi);
            }
        } else {
            trace.push(*trace.last().unwrap());
        }
    }
    let labeling = Labeling(
        state
            .iter()
            .map(|s| match s {
                NodeState::Fixed(l) => *l,
                NodeState::Coin(..) => unreachable!("all nodes fixed"),
            })
            .collect(),
    );
    debug_assert_eq!(
        evaluate(&filtered, &labeling).unwrap(),
        *trace.last().unwrap()
    );
    (labeling, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{brute_force_opt, max_dicut, DEFAULT_ENUM_CAP};
    use crate::generators::{fixture, gen_mas, gen_random_dag};
    use crate::instance::{total_weight, Edge, RmasInstance};

    #[test]
    fn sample_singleton_lists_has_no_randomness() {
        let i2 = fixture("single-edge").unwrap();
        for seed in [0, 1, 42, u64::MAX] {
            let l = sample_minmax(&i2, seed);
            assert_eq!(l.0, vec![1, 2]);
            assert_eq!(evaluate(&i2, &l).unwrap(), 3.0);
        }
    }

    #[test]
    fn sample_is_seed_stable() {
        let i1 = fixture("two-cycle").unwrap();
        assert_eq!(sample_minmax(&i1, 7), sample_minmax(&i1, 7));
    }

    #[test]
    fn two_cycle_expectation_matches_outcome_enumeration() {
        // the four equally likely outcomes of I1 score {0, 1, 1, 0}
        let i1 = fixture("two-cycle").unwrap();
        let mut total = 0.0;
        for l0 in [1, 2] {
            for l1 in [1, 2] {
                total += evaluate(&i1, &Labeling(vec![l0, l1])).unwrap();
            }
        }
        assert_eq!(total / 4.0, 0.5);
        assert_eq!(expected_minmax(&i1, &initial_state(&i1)), 0.5);
        assert!(0.5 >= total_weight(&i1) / 4.0);
    }

    #[test]
    fn expectation_with_partial_fixing() {
        let i1 = fixture("two-cycle").unwrap();
        let mut state = initial_state(&i1);
        state[0] = NodeState::Fixed(1);
        assert_eq!(expected_minmax(&i1, &state), 0.5);
        let i2 = fixture("single-edge").unwrap();
        assert_eq!(expected_minmax(&i2, &initial_state(&i2)), 3.0);
    }

    #[test]
    fn derandomize_two_cycle() {
        let i1 = fixture("two-cycle").unwrap();
        let (labeling, trace) = derandomize_minmax(&i1);
        assert_eq!(labeling.0, vec![1, 2]);
        assert_eq!(trace, vec![0.5, 0.5, 1.0]);
        assert_eq!(evaluate(&i1, &labeling).unwrap(), 1.0);
    }

    #[test]
    fn derandomize_single_edge() {
        let i2 = fixture("single-edge").unwrap();
        let (labeling, _) = derandomize_minmax(&i2);
        assert_eq!(evaluate(&i2, &labeling).unwrap(), 3.0);
    }

    #[test]
    fn derandomize_blocked_instance() {
        let i3 = fixture("blocked").unwrap();
        let (labeling, trace) = derandomize_minmax(&i3);
        assert_eq!(evaluate(&i3, &labeling).unwrap(), 0.0);
        assert!(trace.iter().all(|&t| t == 0.0));
    }

    #[test]
    fn derandomize_mas_single_edge() {
        let inst = RmasInstance::new(
            vec![vec![1, 2], vec![1, 2]],
            vec![Edge { tail: 0, head: 1, weight: 1.0 }],
        );
        let (labeling, _) = derandomize_minmax(&inst);
        let value = evaluate(&inst, &labeling).unwrap();
        assert_eq!(value, 1.0);
        assert!(value >= total_weight(&inst) / 4.0);
    }

    #[test]
    fn minmax_labelings_cannot_beat_dicut_on_mas() {
        for seed in 0..5 {
            let g = gen_random_dag(5, 0.6, seed);
            let inst = gen_mas(&g);
            let dicut = max_dicut(&g).unwrap();
            let (labeling, trace) = derandomize_minmax(&inst);
            let value = evaluate(&inst, &labeling).unwrap();
            let w = total_weight(&inst);
            assert!(value >= w / 4.0 - 1e-9);
            assert!(value <= dicut + 1e-9);
            // the best {min,max}-only labeling achieves exactly the max dicut
            let mut best = 0.0f64;
            for mask in 0u32..(1 << inst.node_count()) {
                let l = Labeling(
                    (0..inst.node_count())
                        .map(|v| {
                            if mask & (1 << v) != 0 {
                                inst.min_label(v)
                            } else {
                                inst.max_label(v)
                            }
                        })
                        .collect(),
                );
                best = best.max(evaluate(&inst, &l).unwrap());
            }
            assert_eq!(best, dicut);
            assert!((trace.windows(2)).all(|w| w[1] >= w[0] - 1e-12));
        }
    }

    #[test]
    fn derandomized_value_bounded_by_best_minmax_labeling() {
        let i4 = fixture("triangle").unwrap();
        let (labeling, _) = derandomize_minmax(&i4);
        let value = evaluate(&i4, &labeling).unwrap();
        let opt = brute_force_opt(&i4, DEFAULT_ENUM_CAP).unwrap().value;
        assert!(value >= total_weight(&i4) / 4.0);
        assert!(value <= opt);
    }
}
