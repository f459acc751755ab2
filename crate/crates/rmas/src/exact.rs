//! Brute-force oracles: exact optimum by labeling enumeration and exact
//! maximum directed cut. Desk-scale by design; both enforce hard caps.

use crate::error::{Error, Result};
use crate::generators::Digraph;
use crate::instance::{evaluate, Labeling, RmasInstance};

pub const DEFAULT_ENUM_CAP: u128 = 10_000_000;
pub const DICUT_NODE_CAP: usize = 24;

/// An exact optimum together with the number of labelings inspected.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub labeling: Labeling,
    pub value: f64,
    pub enumerated_count: u128,
}

/// Enumerates every feasible labeling with a mixed-radix counter (node 0 is
/// the most significant digit) and returns a maximizer. Ties go to the
/// lexicographically smallest labeling vector, which the enumeration order
/// yields for free.
pub fn brute_force_opt(inst: &RmasInstance, cap: u128) -> Result<OptResult> {
    let n = inst.node_count();
    let mut product: u128 = 1;
    for list in &inst.label_lists {
        product = product.saturating_mul(list.len() as u128);
        if product > cap {
            return Err(Error::SearchSpaceExceedsCap { product, cap });
        }
    }

    let mut digits = vec![0usize; n];
    let mut best_value = f64::NEG_INFINITY;
    let mut best: Option<Labeling> = None;
    let mut count: u128 = 0;
    loop {
        count += 1;
        let labeling = Labeling(
            digits
                .iter()
                .enumerate()
                .map(|(v, &i)| inst.label_lists[v][i])
                .collect(),
        );
        let value = evaluate(inst, &labeling).expect("enumerated labeling is feasible");
        if value > best_value {
            best_value = value;
            best = Some(labeling);
        }
        // increment, least significant digit last
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(OptResult {
                    labeling: best.unwrap(),
                    value: best_value,
                    enumerated_count: count,
                });
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < inst.label_lists[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Maximum over all bipartitions (S, V \ S) of the weight of edges from S
/// to its complement.
pub fn max_dicut(g: &Digraph) -> Result<f64> {
    if g.node_count > DICUT_NODE_CAP {
        return Err(Error::DicutSizeCap {
            nodes: g.node_count,
            cap: DICUT_NODE_CAP,
        });
    }
    let mut best = 0.0f64;
    for mask in 0u32..(1u32 << g.node_count) {
        let cut: f64 = g
            .edges
            .iter()
            .filter(|&&(tail, head, _)| mask & (1 << tail) != 0 && mask & (1 << head) == 0)
            .map(|&(_, _, w)| w)
            .sum();
        best = best.max(cut);
    }
    Ok(best)
}
