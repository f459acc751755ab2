//! Independent randomized rounding of the LP marginals, the row/column-sum
//! matrix inequality it rests on, and the conditional-expectation
//! derandomization. An edge is forward with probability
//! p_e = sum over label pairs l < l' of x_tail(l) x_head(l'), and for
//! LP-feasible marginals p_e >= q_e^2 / 2, which aggregates to an expected
//! value of at least lp^2 / (2W).

use crate::error::{Error, Result};
use crate::instance::{Labeling, RmasInstance};
use crate::lp::{check_solution, LpProgram, LpSolution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per-node probability vectors over the label lists, possibly degenerate
/// after fixing steps.
#[derive(Debug, Clone)]
pub struct MarginalState {
    /// probs[v] aligns with the instance's label list of node v.
    pub probs: Vec<Vec<f64>>,
}

impl MarginalState {
    /// Marginals read off an LP solution. Simplex output may carry tiny
    /// negative noise; entries are clipped to [0, 1] and renormalized.
    pub fn from_lp(prog: &LpProgram, sol: &LpSolution, inst: &RmasInstance) -> Self {
        let probs = (0..inst.node_count())
            .map(|v| {
                let mut p = prog.marginal(sol, v);
                for x in p.iter_mut() {
                    *x = x.clamp(0.0, 1.0);
                }
                let total: f64 = p.iter().sum();
                if total > 0.0 {
                    for x in p.iter_mut() {
                        *x /= total;
                    }
                } else {
                    p[0] = 1.0;
                }
                p
            })
            .collect();
        MarginalState { probs }
    }

    /// Point mass on a single label.
    pub fn fix(&mut self, v: usize, label_idx: usize) {
        for x in self.probs[v].iter_mut() {
            *x = 0.0;
        }
        self.probs[v][label_idx] = 1.0;
    }
}

/// Probability that a label drawn from (labels_x, px) is strictly below one
/// drawn independently from (labels_y, py).
pub fn edge_probability(labels_x: &[i64], px: &[f64], labels_y: &[i64], py: &[f64]) -> f64 {
    let mut p = 0.0;
    for (i, &lx) in labels_x.iter().enumerate() {
        for (j, &ly) in labels_y.iter().enumerate() {
            if lx < ly {
                p += px[i] * py[j];
            }
        }
    }
    p
}

/// Expected value under independent per-node draws: sum of w_e p_e.
pub fn expected_from_marginals(inst: &RmasInstance, m: &MarginalState) -> f64 {
    inst.edges
        .iter()
        .map(|e| {
            e.weight
                * edge_probability(
                    &inst.label_lists[e.tail],
                    &m.probs[e.tail],
                    &inst.label_lists[e.head],
                    &m.probs[e.head],
                )
        })
        .sum()
}

/// One independent draw per node from its marginal, via seeded ChaCha8.
pub fn sample_from_marginals(inst: &RmasInstance, m: &MarginalState, seed: u64) -> Labeling {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Labeling(
        (0..inst.node_count())
            .map(|v| {
                let r: f64 = rng.gen();
                let mut acc = 0.0;
                let probs = &m.probs[v];
                for (i, &p) in probs.iter().enumerate() {
                    acc += p;
                    if r < acc {
                        return inst.label_lists[v][i];
                    }
                }
                // residual rounding mass goes to the last label
                *inst.label_lists[v].last().unwrap()
            })
            .collect(),
    )
}

/// Both sides of the row/column-sum inequality for a nonnegative square
/// matrix: lhs = sum_{i<j} r_i c_j, rhs = (sum_{i<j} a_ij)^2 / 2.
pub fn matrix_lemma_gap(a: &[Vec<f64>]) -> Result<(f64, f64)> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "matrix must be square");
        for (j, &x) in row.iter().enumerate() {
            if x < 0.0 {
                return Err(Error::NegativeMatrixEntry { row: i, col: j, value: x });
            }
        }
    }
    let rows: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..n).map(|j| a.iter().map(|r| r[j]).sum()).collect();
    let mut lhs = 0.0;
    let mut upper = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            lhs += rows[i] * cols[j];
            upper += a[i][j];
        }
    }
    Ok((lhs, 0.5 * upper * upper))
}

/// Derandomized rounding. Fixes nodes in ascending index order, each to the
/// support label with the largest conditional expectation (tie: smallest
/// label). Only edges incident to the node being fixed are re-evaluated;
/// the trace starts with the unconditioned expectation and is nondecreasing.
pub fn derandomize_rounding(
    inst: &RmasInstance,
    prog: &LpProgram,
    sol: &LpSolution,
) -> Result<(Labeling, Vec<f64>)> {
    let report = check_solution(prog, sol)?;
    if !report.passes() {
        return Err(Error::LpNumerics(format!(
            "rounding requires a feasible LP solution; residual {:.3e}",
            report.max_residual()
        )));
    }
    let mut m = MarginalState::from_lp(prog, sol, inst);

    let n = inst.node_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, e) in inst.edges.iter().enumerate() {
        incident[e.tail].push(idx);
        if e.head != e.tail {
            incident[e.head].push(idx);
        }
    }
    let edge_p = |m: &MarginalState, idx: usize| -> f64 {
        let e = &inst.edges[idx];
        edge_probability(
            &inst.label_lists[e.tail],
            &m.probs[e.tail],
            &inst.label_lists[e.head],
            &m.probs[e.head],
        )
    };

    let mut p: Vec<f64> = (0..inst.edges.len()).map(|i| edge_p(&m, i)).collect();
    let total = |p: &[f64]| -> f64 {
        inst.edges.iter().zip(p).map(|(e, pe)| e.weight * pe).sum()
    };
    let mut trace = vec![total(&p)];

    for v in 0..n {
        let support: Vec<usize> = (0..m.probs[v].len())
            .filter(|&i| m.probs[v][i] > 0.0)
            .collect();
        let saved = m.probs[v].clone();
        let mut best: Option<(usize, f64)> = None;
        for &cand in &support {
            m.probs[v] = saved.clone();
            m.fix(v, cand);
            let delta: f64 = incident[v]
                .iter()
                .map(|&idx| inst.edges[idx].weight * (edge_p(&m, idx) - p[idx]))
                .sum();
            let cond = trace.last().unwrap() + delta;
            // strictly-better keeps the smallest label on ties
            if best.is_none_or(|(_, b)| cond > b) {
                best = Some((cand, cond));
            }
        }
        let (choice, _) = best.expect("marginal has nonempty support");
        m.probs[v] = saved;
        m.fix(v, choice);
        for &idx in &incident[v] {
            p[idx] = edge_p(&m, idx);
        }
        trace.push(total(&p));
    }

    let labeling = Labeling(
        (0..n)
            .map(|v| {
                let i = m.probs[v].iter().position(|&x| x == 1.0).unwrap();
                inst.label_lists[v][i]
            })
            .collect(),
    );
    Ok((labeling, trace))
}
