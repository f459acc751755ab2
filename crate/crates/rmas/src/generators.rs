//! Instance and digraph generators for test suites and benchmarks.

use crate::error::{Error, Result};
use crate::instance::{Edge, RmasInstance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain weighted directed graph, input to the MAS embedding and the
/// dicut experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    pub node_count: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

/// Parameters for [`gen_random`].
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub nodes: usize,
    pub edges: usize,
    pub label_min: i64,
    pub label_max: i64,
    pub max_list_len: usize,
    pub weight_min: f64,
    pub weight_max: f64,
    /// Draw weights as integers in [weight_min, weight_max].
    pub integer_weights: bool,
    pub seed: u64,
}

impl GenSpec {
    fn check(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::BadGenSpec("nodes must be >= 1".into()));
        }
        if self.label_min > self.label_max {
            return Err(Error::BadGenSpec("empty label pool".into()));
        }
        if self.max_list_len == 0 {
            return Err(Error::BadGenSpec("max_list_len must be >= 1".into()));
        }
        if self.weight_min < 0.0 || self.weight_min > self.weight_max {
            return Err(Error::BadGenSpec("bad weight range".into()));
        }
        if self.nodes == 1 && self.edges > 0 {
            return Err(Error::BadGenSpec("single-node instance cannot have edges".into()));
        }
        Ok(())
    }
}

/// Seeded random instance. Same spec and seed always produce the same
/// instance; self-loops are never generated.
pub fn gen_random(spec: &GenSpec) -> Result<RmasInstance> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pool: Vec<i64> = (spec.label_min..=spec.label_max).collect();
    let mut label_lists = Vec::with_capacity(spec.nodes);
    for _ in 0..spec.nodes {
        let len = rng.gen_range(1..=spec.max_list_len.min(pool.len()));
        let mut list: Vec<i64> = pool
            .choose_multiple(&mut rng, len)
            .copied()
            .collect();
        list.sort_unstable();
        label_lists.push(list);
    }
    let mut edges = Vec::with_capacity(spec.edges);
    for _ in 0..spec.edges {
        let tail = rng.gen_range(0..spec.nodes);
        let mut head = rng.gen_range(0..spec.nodes - 1);
        if head >= tail {
            head += 1;
        }
        let weight = if spec.integer_weights {
            rng.gen_range(spec.weight_min as i64..=spec.weight_max as i64) as f64
        } else {
            rng.gen_range(spec.weight_min..=spec.weight_max)
        };
        edges.push(Edge { tail, head, weight });
    }
    let inst = RmasInstance { label_lists, edges };
    inst.validate()?;
    Ok(inst)
}

/// Random-suite parameters: per-instance node counts and edge counts are
/// drawn from the given ranges with a seed-derived sub-seed each.
#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub n_min: usize,
    pub n_max: usize,
    pub label_min: i64,
    pub label_max: i64,
    pub max_list_len: usize,
    pub weight_min: f64,
    pub weight_max: f64,
    pub integer_weights: bool,
}

impl SuiteSpec {
    /// The acceptance-suite family: n in [2,6], lists of up to 4 labels
    /// drawn from [0,9], integer weights in [1,10].
    pub fn small_integer() -> Self {
        SuiteSpec {
            n_min: 2,
            n_max: 6,
            label_min: 0,
            label_max: 9,
            max_list_len: 4,
            weight_min: 1.0,
            weight_max: 10.0,
            integer_weights: true,
        }
    }
}

/// Deterministic suite of `count` random instances.
pub fn gen_suite(count: usize, suite: &SuiteSpec, seed: u64) -> Vec<RmasInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(suite.n_min..=suite.n_max);
            let m = if n == 1 { 0 } else { rng.gen_range(1..=2 * n) };
            let spec = GenSpec {
                nodes: n,
                edges: m,
                label_min: suite.label_min,
                label_max: suite.label_max,
                max_list_len: suite.max_list_len,
                weight_min: suite.weight_min,
                weight_max: suite.weight_max,
                integer_weights: suite.integer_weights,
                seed: rng.gen(),
            };
            gen_random(&spec).expect("suite spec is consistent")
        })
        .collect()
}

/// MAS embedding: every node's list becomes {1, ..., |V|}.
pub fn gen_mas(g: &Digraph) -> RmasInstance {
    let full: Vec<i64> = (1..=g.node_count as i64).collect();
    RmasInstance {
        label_lists: vec![full; g.node_count],
        edges: g
            .edges
            .iter()
            .map(|&(tail, head, weight)| Edge { tail, head, weight })
            .collect(),
    }
}

/// Instances where every list contains 0 and the positive labels are
/// pairwise disjoint across nodes: node v gets a block of k-1 consecutive
/// positive labels, block assignment shuffled by the seed. Edges are 2n
/// random unit-weight edges between distinct nodes.
pub fn gen_khandekar(n: usize, list_len: usize, seed: u64) -> Result<RmasInstance> {
    if n == 0 || list_len == 0 {
        return Err(Error::BadGenSpec("n and list size must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = list_len;
    let mut blocks: Vec<usize> = (0..n).collect();
    blocks.shuffle(&mut rng);
    let mut label_lists = Vec::with_capacity(n);
    for &block in &blocks {
        let base = (block * (k - 1)) as i64;
        let mut list = vec![0i64];
        list.extend((1..k as i64).map(|i| base + i));
        list.sort_unstable();
        label_lists.push(list);
    }
    let mut edges = Vec::new();
    if n > 1 {
        for _ in 0..2 * n {
            let tail = rng.gen_range(0..n);
            let mut head = rng.gen_range(0..n - 1);
            if head >= tail {
                head += 1;
            }
            edges.push(Edge { tail, head, weight: 1.0 });
        }
    }
    Ok(RmasInstance { label_lists, edges })
}

/// Random DAG: each edge i -> j with i < j included independently with
/// probability p, unit weights.
pub fn gen_random_dag(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((i, j, 1.0));
            }
        }
    }
    Digraph { node_count: n, edges }
}

/// Canonical small instances used throughout the test suites.
///
/// - `two-cycle`: two nodes with lists {1,2} and two opposing unit edges.
/// - `single-edge`: lists {1} and {2}, one edge of weight 3.
/// - `blocked`: lists {5} and {1,3}, one edge of weight 2 that filtering removes.
/// - `triangle`: directed triangle, lists {1,2,3}, unit weights.
pub fn fixture(name: &str) -> Result<RmasInstance> {
    let e = |tail, head, weight| Edge { tail, head, weight };
    match name {
        "two-cycle" => Ok(RmasInstance {
            label_lists: vec![vec![1, 2], vec![1, 2]],
            edges: vec![e(0, 1, 1.0), e(1, 0, 1.0)],
        }),
        "single-edge" => Ok(RmasInstance {
            label_lists: vec![vec![1], vec![2]],
            edges: vec![e(0, 1, 3.0)],
        }),
        "blocked" => Ok(RmasInstance {
            label_lists: vec![vec![5], vec![1, 3]],
            edges: vec![e(0, 1, 2.0)],
        }),
        "triangle" => Ok(RmasInstance {
            label_lists: vec![vec![1, 2, 3]; 3],
            edges: vec![e(0, 1, 1.0), e(1, 2, 1.0), e(2, 0, 1.0)],
        }),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}
