//! Core data model: instances, labelings, parsing, filtering, evaluation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A weighted directed edge. Parallel edges are distinct entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

/// An RMAS instance: per-node label lists and a weighted edge multiset.
///
/// Label lists are kept sorted ascending with no duplicates. Nodes are dense
/// 0-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmasInstance {
    pub label_lists: Vec<Vec<i64>>,
    pub edges: Vec<Edge>,
}

/// One label per node, drawn from that node's list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling(pub Vec<i64>);

/// Why an edge was dropped by [`filter_edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemovedReason {
    /// min L_tail >= max L_head: the edge can never be forward.
    Blocked,
    SelfLoop,
}

/// Result of the preprocessing pass.
#[derive(Debug, Clone)]
pub struct FilterReport {
    pub kept: RmasInstance,
    pub removed: Vec<(Edge, RemovedReason)>,
    pub removed_weight: f64,
}

impl RmasInstance {
    pub fn new(label_lists: Vec<Vec<i64>>, edges: Vec<Edge>) -> Self {
        let mut inst = RmasInstance { label_lists, edges };
        for list in &mut inst.label_lists {
            list.sort_unstable();
            list.dedup();
        }
        inst
    }

    pub fn node_count(&self) -> usize {
        self.label_lists.len()
    }

    pub fn min_label(&self, v: usize) -> i64 {
        self.label_lists[v][0]
    }

    pub fn max_label(&self, v: usize) -> i64 {
        *self.label_lists[v].last().unwrap()
    }

    /// Checks structural invariants; used by generators and tests.
    pub fn validate(&self) -> Result<()> {
        for (v, list) in self.label_lists.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("node {v} has an empty label list"),
                });
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("node {v} label list not sorted/deduplicated"),
                });
            }
        }
        let n = self.node_count();
        for e in &self.edges {
            if e.tail >= n || e.head >= n {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("edge ({}, {}) endpoint out of range", e.tail, e.head),
                });
            }
            if e.weight < 0.0 || !e.weight.is_finite() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("edge ({}, {}) has invalid weight {}", e.tail, e.head, e.weight),
                });
            }
        }
        Ok(())
    }

    pub fn is_feasible(&self, labeling: &Labeling) -> Result<()> {
        if labeling.0.len() != self.node_count() {
            return Err(Error::LabelingLength {
                expected: self.node_count(),
                got: labeling.0.len(),
            });
        }
        for (v, &label) in labeling.0.iter().enumerate() {
            if self.label_lists[v].binary_search(&label).is_err() {
                return Err(Error::InfeasibleLabel { node: v, label });
            }
        }
        Ok(())
    }
}

/// Parses the `.rmas` text format.
///
/// `nodes <n>`, then one `labels <v> <l1> ...` line per node, then zero or
/// more `edge <u> <v> <w>` lines. `#` starts a comment line. Duplicate labels
/// are deduplicated, lists sorted.
pub fn parse_instance(text: &str) -> Result<RmasInstance> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut node_count: Option<usize> = None;
    let mut label_lists: Vec<Option<Vec<i64>>> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let directive = tokens.next().unwrap();
        match directive {
            "nodes" => {
                if node_count.is_some() {
                    return Err(err(line_no, "duplicate nodes line".into()));
                }
                let n: usize = tokens
                    .next()
                    .ok_or_else(|| err(line_no, "nodes: missing count".into()))?
                    .parse()
                    .map_err(|_| err(line_no, "nodes: count is not a nonnegative integer".into()))?;
                node_count = Some(n);
                label_lists = vec![None; n];
            }
            "labels" => {
                let n = node_count
                    .ok_or_else(|| err(line_no, "labels before nodes line".into()))?;
                let v: usize = tokens
                    .next()
                    .ok_or_else(|| err(line_no, "labels: missing node index".into()))?
                    .parse()
                    .map_err(|_| err(line_no, "labels: bad node index".into()))?;
                if v >= n {
                    return Err(err(line_no, format!("labels: node index {v} out of range (n={n})")));
                }
                if label_lists[v].is_some() {
                    return Err(err(line_no, format!("labels: duplicate line for node {v}")));
                }
                let mut list = Vec::new();
                for tok in tokens {
                    let l: i64 = tok
                        .parse()
                        .map_err(|_| err(line_no, format!("labels: bad label {tok:?}")))?;
                    list.push(l);
                }
                if list.is_empty() {
                    return Err(err(line_no, format!("labels: empty list for node {v}")));
                }
                list.sort_unstable();
                list.dedup();
                label_lists[v] = Some(list);
            }
            "edge" => {
                let n = node_count
                    .ok_or_else(|| err(line_no, "edge before nodes line".into()))?;
                let mut next_idx = |what: &str| -> Result<usize> {
                    tokens
                        .next()
                        .ok_or_else(|| err(line_no, format!("edge: missing {what}")))?
                        .parse()
                        .map_err(|_| err(line_no, format!("edge: bad {what}")))
                };
                let tail = next_idx("tail")?;
                let head = next_idx("head")?;
                if tail >= n || head >= n {
                    return Err(err(line_no, format!("edge: endpoint out of range (n={n})")));
                }
                let weight: f64 = tokens
                    .next()
                    .ok_or_else(|| err(line_no, "edge: missing weight".into()))?
                    .parse()
                    .map_err(|_| err(line_no, "edge: bad weight".into()))?;
                if !weight.is_finite() || weight < 0.0 {
                    return Err(err(line_no, format!("edge: negative or non-finite weight {weight}")));
                }
                edges.push(Edge { tail, head, weight });
            }
            other => {
                return Err(err(line_no, format!("unknown directive {other:?}")));
            }
        }
    }

    let n = node_count.ok_or_else(|| err(0, "missing nodes line".into()))?;
    let mut lists = Vec::with_capacity(n);
    for (v, slot) in label_lists.into_iter().enumerate() {
        match slot {
            Some(list) => lists.push(list),
            None => return Err(err(0, format!("missing labels line for node {v}"))),
        }
    }
    Ok(RmasInstance {
        label_lists: lists,
        edges,
    })
}

/// Inverse of [`parse_instance`] up to canonical whitespace.
pub fn serialize_instance(inst: &RmasInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!("nodes {}\n", inst.node_count()));
    for (v, list) in inst.label_lists.iter().enumerate() {
        out.push_str(&format!("labels {v}"));
        for l in list {
            out.push_str(&format!(" {l}"));
        }
        out.push('\n');
    }
    for e in &inst.edges {
        out.push_str(&format!("edge {} {} {}\n", e.tail, e.head, e.weight));
    }
    out
}

/// Drops self-loops and blocked edges (min L_tail >= max L_head). Neither
/// kind can ever be forward, so the optimum is unchanged.
pub fn filter_edges(inst: &RmasInstance) -> FilterReport {
    let mut kept_edges = Vec::new();
    let mut removed = Vec::new();
    let mut removed_weight = 0.0;
    for &e in &inst.edges {
        if e.tail == e.head {
            removed.push((e, RemovedReason::SelfLoop));
            removed_weight += e.weight;
        } else if inst.min_label(e.tail) >= inst.max_label(e.head) {
            removed.push((e, RemovedReason::Blocked));
            removed_weight += e.weight;
        } else {
            kept_edges.push(e);
        }
    }
    FilterReport {
        kept: RmasInstance {
            label_lists: inst.label_lists.clone(),
            edges: kept_edges,
        },
        removed,
        removed_weight,
    }
}

/// Total weight of edges (u,v) with label(u) < label(v).
pub fn evaluate(inst: &RmasInstance, labeling: &Labeling) -> Result<f64> {
    inst.is_feasible(labeling)?;
    Ok(inst
        .edges
        .iter()
        .filter(|e| labeling.0[e.tail] < labeling.0[e.head])
        .map(|e| e.weight)
        .sum())
}

/// W, the sum of all edge weights.
pub fn total_weight(inst: &RmasInstance) -> f64 {
    inst.edges.iter().map(|e| e.weight).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture;

    #[test]
    fn parse_two_cycle() {
        let inst = parse_instance("nodes 2\nlabels 0 1 2\nlabels 1 1 2\nedge 0 1 1\nedge 1 0 1").unwrap();
        assert_eq!(inst.node_count(), 2);
        assert_eq!(inst.label_lists, vec![vec![1, 2], vec![1, 2]]);
        assert_eq!(inst.edges.len(), 2);
    }

    #[test]
    fn parse_single_edge() {
        let inst = parse_instance("nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 1 3").unwrap();
        assert_eq!(inst, fixture("single-edge").unwrap());
    }

    #[test]
    fn self_loop_survives_parsing() {
        let inst = parse_instance("nodes 1\nlabels 0 5\nedge 0 0 1").unwrap();
        assert_eq!(inst.edges.len(), 1);
        let report = filter_edges(&inst);
        assert!(report.kept.edges.is_empty());
        assert_eq!(report.removed[0].1, RemovedReason::SelfLoop);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 5 1", 4),
            ("nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 1 -1", 4),
            ("nodes 1\nfrobnicate\nlabels 0 1", 2),
            ("nodes 2\nlabels 0 1\nlabels 0 2", 3),
        ];
        for (text, expect_line) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, expect_line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
        assert!(matches!(
            parse_instance("nodes 2\nlabels 0 1"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn duplicate_labels_deduplicated() {
        let inst = parse_instance("nodes 1\nlabels 0 3 1 3 1").unwrap();
        assert_eq!(inst.label_lists[0], vec![1, 3]);
    }

    #[test]
    fn serialize_round_trip() {
        let i2 = fixture("single-edge").unwrap();
        assert_eq!(serialize_instance(&i2), "nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 1 3\n");
        let lonely = RmasInstance::new(vec![vec![7]], vec![]);
        assert_eq!(serialize_instance(&lonely), "nodes 1\nlabels 0 7\n");
        let i1 = fixture("two-cycle").unwrap();
        assert_eq!(parse_instance(&serialize_instance(&i1)).unwrap(), i1);
    }

    #[test]
    fn filter_blocked_edge() {
        let i3 = fixture("blocked").unwrap();
        let report = filter_edges(&i3);
        assert!(report.kept.edges.is_empty());
        assert_eq!(report.removed[0].1, RemovedReason::Blocked);
        assert_eq!(report.removed_weight, 2.0);

        let i1 = fixture("two-cycle").unwrap();
        let report = filter_edges(&i1);
        assert_eq!(report.kept.edges.len(), 2);
        assert!(report.removed.is_empty());
    }

    #[test]
    fn filter_conserves_weight() {
        let i3 = fixture("blocked").unwrap();
        let report = filter_edges(&i3);
        let total = total_weight(&i3);
        assert!((total_weight(&report.kept) + report.removed_weight - total).abs() < 1e-9);
    }

    #[test]
    fn evaluate_counts_forward_edges() {
        let i1 = fixture("two-cycle").unwrap();
        assert_eq!(evaluate(&i1, &Labeling(vec![1, 2])).unwrap(), 1.0);
        assert_eq!(evaluate(&i1, &Labeling(vec![1, 1])).unwrap(), 0.0);
        let i2 = fixture("single-edge").unwrap();
        assert_eq!(evaluate(&i2, &Labeling(vec![1, 2])).unwrap(), 3.0);
    }

    #[test]
    fn evaluate_rejects_off_list_label() {
        let i2 = fixture("single-edge").unwrap();
        assert!(matches!(
            evaluate(&i2, &Labeling(vec![1, 9])),
            Err(Error::InfeasibleLabel { node: 1, label: 9 })
        ));
        assert!(matches!(
            evaluate(&i2, &Labeling(vec![1])),
            Err(Error::LabelingLength { .. })
        ));
    }

    #[test]
    fn total_weight_examples() {
        assert_eq!(total_weight(&fixture("two-cycle").unwrap()), 2.0);
        assert_eq!(total_weight(&fixture("single-edge").unwrap()), 3.0);
        assert_eq!(total_weight(&RmasInstance::new(vec![vec![1]], vec![])), 0.0);
    }
}
