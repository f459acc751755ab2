//! The LP relaxation: marginal variables x_u(l) for each node and on-list
//! label, joint variables y(l,l') for each adjacent node pair, equality
//! constraints tying the joints' row and column sums to the marginals, and
//! the forward-edge weight objective.
//!
//! One y-block is stored per unordered adjacent pair in canonical
//! orientation (lower node index first); the reverse orientation reads the
//! transposed entry, which makes the symmetry constraint exact by
//! construction. Non-adjacent pairs get no y-block: a product joint is
//! always feasible for them and they never appear in the objective.

mod simplex;

pub use simplex::PIVOT_TOL;

use crate::error::{Error, Result};
use crate::instance::{Labeling, RmasInstance};
use simplex::StandardForm;
use std::collections::HashMap;

/// A y-block for the unordered pair (lo, hi) with lo < hi. Entry (i, j)
/// is the joint probability of label_lists[lo][i] and label_lists[hi][j].
#[derive(Debug, Clone)]
pub struct PairBlock {
    pub lo: usize,
    pub hi: usize,
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    NodeSimplex(usize),
    /// Row sums of a pair block must equal the lo-node marginal.
    RowSum { pair: usize, label_idx: usize },
    /// Column sums must equal the hi-node marginal.
    ColSum { pair: usize, label_idx: usize },
}

/// The relaxation for one instance: variable catalog plus constraint rows.
pub struct LpProgram {
    label_lists: Vec<Vec<i64>>,
    x_offsets: Vec<usize>,
    pairs: Vec<PairBlock>,
    pair_index: HashMap<(usize, usize), usize>,
    num_vars: usize,
    objective: Vec<f64>,
    rows: Vec<(Vec<(usize, f64)>, f64)>,
    row_kinds: Vec<RowKind>,
}

/// Values for every cataloged variable plus the objective value.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
}

/// Worst constraint violations of a candidate solution, by family.
#[derive(Debug, Clone, Default)]
pub struct ResidualReport {
    pub node_simplex: f64,
    pub y_row_sums: f64,
    pub y_col_sums: f64,
    pub nonnegativity: f64,
    pub objective_mismatch: f64,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.node_simplex
            .max(self.y_row_sums)
            .max(self.y_col_sums)
            .max(self.nonnegativity)
            .max(self.objective_mismatch)
    }

    pub fn passes(&self) -> bool {
        self.max_residual() <= 1e-7
    }
}

impl LpProgram {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_x_vars(&self) -> usize {
        self.label_lists.iter().map(|l| l.len()).sum()
    }

    pub fn pair_blocks(&self) -> &[PairBlock] {
        &self.pairs
    }

    /// Index of x_v(label_lists[v][label_idx]).
    pub fn x_var(&self, v: usize, label_idx: usize) -> usize {
        debug_assert!(label_idx < self.label_lists[v].len());
        self.x_offsets[v] + label_idx
    }

    /// Index of the joint variable for the pair in canonical orientation.
    pub fn y_var(&self, pair: usize, lo_idx: usize, hi_idx: usize) -> usize {
        let block = &self.pairs[pair];
        block.offset + lo_idx * self.label_lists[block.hi].len() + hi_idx
    }

    /// Joint value for the ordered node pair (u, v); reads the transposed
    /// entry when (u, v) is in reverse orientation.
    pub fn y_value(&self, sol: &LpSolution, u: usize, v: usize, u_idx: usize, v_idx: usize) -> f64 {
        let key = (u.min(v), u.max(v));
        let pair = self.pair_index[&key];
        if u < v {
            sol.values[self.y_var(pair, u_idx, v_idx)]
        } else {
            sol.values[self.y_var(pair, v_idx, u_idx)]
        }
    }

    /// Marginal vector of node v, aligned with its label list.
    pub fn marginal(&self, sol: &LpSolution, v: usize) -> Vec<f64> {
        (0..self.label_lists[v].len())
            .map(|i| sol.values[self.x_var(v, i)])
            .collect()
    }

    /// q_e: the LP's fractional forward mass on an edge (per unit weight).
    pub fn edge_forward_mass(&self, sol: &LpSolution, tail: usize, head: usize) -> f64 {
        let mut q = 0.0;
        for (i, &lt) in self.label_lists[tail].iter().enumerate() {
            for (j, &lh) in self.label_lists[head].iter().enumerate() {
                if lt < lh {
                    q += self.y_value(sol, tail, head, i, j);
                }
            }
        }
        q
    }
}

/// Builds the relaxation for a (filtered) instance. Self-loop edges are
/// ignored; they can never be forward.
pub fn build_lp(inst: &RmasInstance) -> LpProgram {
    let n = inst.node_count();
    let mut x_offsets = Vec::with_capacity(n);
    let mut num_vars = 0;
    for list in &inst.label_lists {
        x_offsets.push(num_vars);
        num_vars += list.len();
    }

    let mut pair_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<PairBlock> = Vec::new();
    for e in &inst.edges {
        if e.tail == e.head {
            continue;
        }
        let key = (e.tail.min(e.head), e.tail.max(e.head));
        if let std::collections::hash_map::Entry::Vacant(slot) = pair_index.entry(key) {
            slot.insert(pairs.len());
            pairs.push(PairBlock {
                lo: key.0,
                hi: key.1,
                offset: num_vars,
            });
            num_vars += inst.label_lists[key.0].len() * inst.label_lists[key.1].len();
        }
    }

    let mut prog = LpProgram {
        label_lists: inst.label_lists.clone(),
        x_offsets,
        pairs,
        pair_index,
        num_vars,
        objective: vec![0.0; num_vars],
        rows: Vec::new(),
        row_kinds: Vec::new(),
    };

    // objective: each edge adds its weight to every joint entry whose tail
    // label is strictly below its head label
    for e in &inst.edges {
        if e.tail == e.head {
            continue;
        }
        let key = (e.tail.min(e.head), e.tail.max(e.head));
        let pair = prog.pair_index[&key];
        for (i, &l_lo) in inst.label_lists[key.0].iter().enumerate() {
            for (j, &l_hi) in inst.label_lists[key.1].iter().enumerate() {
                let forward = if e.tail == key.0 { l_lo < l_hi } else { l_hi < l_lo };
                if forward {
                    let var = prog.y_var(pair, i, j);
                    prog.objective[var] += e.weight;
                }
            }
        }
    }

    // per-node simplex rows
    for v in 0..n {
        let coeffs: Vec<(usize, f64)> = (0..inst.label_lists[v].len())
            .map(|i| (prog.x_var(v, i), 1.0))
            .collect();
        prog.rows.push((coeffs, 1.0));
        prog.row_kinds.push(RowKind::NodeSimplex(v));
    }

    // per-pair marginalization rows
    for pair in 0..prog.pairs.len() {
        let (lo, hi) = (prog.pairs[pair].lo, prog.pairs[pair].hi);
        let (lo_len, hi_len) = (inst.label_lists[lo].len(), inst.label_lists[hi].len());
        for i in 0..lo_len {
            let mut coeffs: Vec<(usize, f64)> =
                (0..hi_len).map(|j| (prog.y_var(pair, i, j), 1.0)).collect();
            coeffs.push((prog.x_var(lo, i), -1.0));
            prog.rows.push((coeffs, 0.0));
            prog.row_kinds.push(RowKind::RowSum { pair, label_idx: i });
        }
        for j in 0..hi_len {
            let mut coeffs: Vec<(usize, f64)> =
                (0..lo_len).map(|i| (prog.y_var(pair, i, j), 1.0)).collect();
            coeffs.push((prog.x_var(hi, j), -1.0));
            prog.rows.push((coeffs, 0.0));
            prog.row_kinds.push(RowKind::ColSum { pair, label_idx: j });
        }
    }

    prog
}

/// Solves the program with the embedded simplex.
pub fn solve_lp(prog: &LpProgram) -> Result<LpSolution> {
    let form = StandardForm {
        num_vars: prog.num_vars,
        objective: prog.objective.clone(),
        rows: prog.rows.clone(),
    };
    let res = simplex::solve(&form)?;
    let sol = LpSolution {
        values: res.values,
        objective: res.objective,
    };
    let report = check_solution(prog, &sol)?;
    if !report.passes() {
        return Err(Error::LpNumerics(format!(
            "solver output violates constraints by {:.3e}",
            report.max_residual()
        )));
    }
    Ok(sol)
}

/// Integral solution induced by a labeling: indicator marginals and outer
/// product joints. Satisfies every constraint exactly and scores exactly
/// the labeling's value.
pub fn embed_labeling(prog: &LpProgram, inst: &RmasInstance, labeling: &Labeling) -> Result<LpSolution> {
    inst.is_feasible(labeling)?;
    let mut values = vec![0.0; prog.num_vars];
    for v in 0..prog.label_lists.len() {
        let idx = prog.label_lists[v]
            .binary_search(&labeling.0[v])
            .expect("feasible label is on the list");
        values[prog.x_var(v, idx)] = 1.0;
    }
    for (pair, block) in prog.pairs.iter().enumerate() {
        let i = prog.label_lists[block.lo]
            .binary_search(&labeling.0[block.lo])
            .unwrap();
        let j = prog.label_lists[block.hi]
            .binary_search(&labeling.0[block.hi])
            .unwrap();
        values[prog.y_var(pair, i, j)] = 1.0;
    }
    let objective = values
        .iter()
        .zip(&prog.objective)
        .map(|(v, c)| v * c)
        .sum();
    Ok(LpSolution { values, objective })
}

/// Maximum absolute violation per constraint family.
pub fn check_solution(prog: &LpProgram, sol: &LpSolution) -> Result<ResidualReport> {
    if sol.values.len() != prog.num_vars {
        return Err(Error::CatalogMismatch(format!(
            "{} values for {} variables",
            sol.values.len(),
            prog.num_vars
        )));
    }
    let mut report = ResidualReport::default();
    for ((coeffs, rhs), kind) in prog.rows.iter().zip(&prog.row_kinds) {
        let lhs: f64 = coeffs.iter().map(|&(j, a)| a * sol.values[j]).sum();
        let violation = (lhs - rhs).abs();
        match kind {
            RowKind::NodeSimplex(_) => report.node_simplex = report.node_simplex.max(violation),
            RowKind::RowSum { .. } => report.y_row_sums = report.y_row_sums.max(violation),
            RowKind::ColSum { .. } => report.y_col_sums = report.y_col_sums.max(violation),
        }
    }
    for &v in &sol.values {
        report.nonnegativity = report.nonnegativity.max(-v);
    }
    let recomputed: f64 = sol
        .values
        .iter()
        .zip(&prog.objective)
        .map(|(v, c)| v * c)
        .sum();
    report.objective_mismatch = (recomputed - sol.objective).abs();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture;
    use crate::instance::{total_weight, Edge, RmasInstance};

    #[test]
    fn build_single_edge() {
        let i2 = fixture("single-edge").unwrap();
        let prog = build_lp(&i2);
        assert_eq!(prog.num_x_vars(), 2);
        assert_eq!(prog.pair_blocks().len(), 1);
        assert_eq!(prog.num_vars(), 3);
        assert_eq!(prog.objective[prog.y_var(0, 0, 0)], 3.0);
    }

    #[test]
    fn build_two_cycle() {
        let i1 = fixture("two-cycle").unwrap();
        let prog = build_lp(&i1);
        assert_eq!(prog.num_x_vars(), 4);
        assert_eq!(prog.pair_blocks().len(), 1);
        // edge 0->1 pays on (1,2); edge 1->0 pays on block entry (2,1)
        assert_eq!(prog.objective[prog.y_var(0, 0, 1)], 1.0);
        assert_eq!(prog.objective[prog.y_var(0, 1, 0)], 1.0);
        assert_eq!(prog.objective[prog.y_var(0, 0, 0)], 0.0);
        assert_eq!(prog.objective[prog.y_var(0, 1, 1)], 0.0);
    }

    #[test]
    fn isolated_node_gets_no_y_block() {
        let inst = RmasInstance::new(
            vec![vec![1], vec![2], vec![3, 4]],
            vec![Edge { tail: 0, head: 1, weight: 1.0 }],
        );
        let prog = build_lp(&inst);
        assert_eq!(prog.pair_blocks().len(), 1);
        let sol = solve_lp(&prog).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-7);
    }

    #[test]
    fn solve_single_edge_is_integral() {
        let i2 = fixture("single-edge").unwrap();
        let prog = build_lp(&i2);
        let sol = solve_lp(&prog).unwrap();
        assert!((sol.objective - 3.0).abs() < 1e-7);
        assert!((sol.values[prog.x_var(0, 0)] - 1.0).abs() < 1e-7);
        assert!((sol.values[prog.y_var(0, 0, 0)] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn solve_two_cycle() {
        let i1 = fixture("two-cycle").unwrap();
        let prog = build_lp(&i1);
        let sol = solve_lp(&prog).unwrap();
        // the single y-block has total mass 1 and only two profitable
        // entries, so lp = 1, achieved by an integral point
        assert!((sol.objective - 1.0).abs() < 1e-7);
    }

    #[test]
    fn solve_triangle_at_least_opt() {
        let i4 = fixture("triangle").unwrap();
        let prog = build_lp(&i4);
        let sol = solve_lp(&prog).unwrap();
        assert!(sol.objective >= 2.0 - 1e-7);
        assert!(sol.objective <= total_weight(&i4) + 1e-7);
    }

    #[test]
    fn embed_fixture_labelings() {
        for (name, labels, expect) in [
            ("two-cycle", vec![1, 2], 1.0),
            ("single-edge", vec![1, 2], 3.0),
            ("triangle", vec![1, 2, 3], 2.0),
        ] {
            let inst = fixture(name).unwrap();
            let prog = build_lp(&inst);
            let sol = embed_labeling(&prog, &inst, &Labeling(labels)).unwrap();
            assert_eq!(sol.objective, expect, "{name}");
            let report = check_solution(&prog, &sol).unwrap();
            assert_eq!(report.max_residual(), 0.0, "{name}");
        }
    }

    #[test]
    fn embed_rejects_infeasible_labeling() {
        let i2 = fixture("single-edge").unwrap();
        let prog = build_lp(&i2);
        assert!(embed_labeling(&prog, &i2, &Labeling(vec![9, 2])).is_err());
    }

    #[test]
    fn check_solution_flags_perturbation() {
        let i1 = fixture("two-cycle").unwrap();
        let prog = build_lp(&i1);
        let mut sol = solve_lp(&prog).unwrap();
        sol.values[prog.x_var(0, 0)] += 1e-3;
        let report = check_solution(&prog, &sol).unwrap();
        assert!(!report.passes());
        assert!(report.max_residual() >= 1e-3 - 1e-9);
    }

    #[test]
    fn check_solution_catalog_mismatch() {
        let prog = build_lp(&fixture("single-edge").unwrap());
        let sol = LpSolution { values: vec![0.0; 2], objective: 0.0 };
        assert!(matches!(
            check_solution(&prog, &sol),
            Err(Error::CatalogMismatch(_))
        ));
    }

    #[test]
    fn scaling_weights_scales_lp() {
        let i4 = fixture("triangle").unwrap();
        let base = solve_lp(&build_lp(&i4)).unwrap().objective;
        let mut scaled = i4.clone();
        for e in &mut scaled.edges {
            e.weight *= 5.0;
        }
        let lp5 = solve_lp(&build_lp(&scaled)).unwrap().objective;
        assert!((lp5 - 5.0 * base).abs() <= 1e-9 * (1.0 + lp5.abs()));
    }
}
