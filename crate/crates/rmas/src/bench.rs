//! Experiment harness: approximation-ratio sweeps against the brute-force
//! oracle, the max-dicut study on random DAGs, and Monte Carlo checks of
//! the randomized arms. All outputs are deterministic per seed; CSV files
//! are byte-identical across repeated runs.

use crate::combined::solve_combined;
use crate::error::Result;
use crate::exact::{brute_force_opt, max_dicut};
use crate::generators::{gen_random_dag, gen_suite, SuiteSpec};
use crate::instance::{evaluate, filter_edges, total_weight, RmasInstance};
use crate::lp::{build_lp, solve_lp};
use crate::rounding::{derandomize_rounding, expected_from_marginals, sample_from_marginals, MarginalState};
use crate::simple_approx::{derandomize_minmax, expected_minmax, initial_state, sample_minmax};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const RATIO_CSV_HEADER: &str = "id,n,m,W,opt,lp,simple,round,combined,ratio";
pub const DICUT_CSV_HEADER: &str = "id,n,m,maxdicut,ratio";

/// Renders with 12 significant digits, plain decimal, trailing zeros
/// trimmed.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i64;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// One instance's worth of the bound chain.
#[derive(Debug, Clone)]
pub struct RatioRow {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub total_weight: f64,
    pub opt: f64,
    pub lp: f64,
    pub value_simple: f64,
    pub value_round: f64,
    pub value_combined: f64,
    /// opt / value_combined; 1 by convention when opt = 0.
    pub ratio: f64,
}

impl RatioRow {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.id,
            self.n,
            self.m,
            fmt_sig(self.total_weight),
            fmt_sig(self.opt),
            fmt_sig(self.lp),
            fmt_sig(self.value_simple),
            fmt_sig(self.value_round),
            fmt_sig(self.value_combined),
            fmt_sig(self.ratio),
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct RatioExperiment {
    pub rows: Vec<RatioRow>,
    /// (instance id, reason) for instances the oracle could not certify.
    pub skipped: Vec<(String, String)>,
}

impl RatioExperiment {
    pub fn csv(&self) -> String {
        let mut out = String::from(RATIO_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }

    /// Max ratio and the id of the instance attaining it.
    pub fn max_ratio(&self) -> Option<(&str, f64)> {
        self.rows
            .iter()
            .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
            .map(|r| (r.id.as_str(), r.ratio))
    }

    pub fn summary(&self) -> String {
        match self.max_ratio() {
            Some((id, ratio)) => format!(
                "instances={} skipped={} max_ratio={} at {}",
                self.rows.len(),
                self.skipped.len(),
                fmt_sig(ratio),
                id
            ),
            None => format!("instances=0 skipped={}", self.skipped.len()),
        }
    }
}

/// Runs the full pipeline on each named instance.
pub fn ratio_experiment_on(
    instances: &[(String, RmasInstance)],
    cap: u128,
) -> Result<RatioExperiment> {
    let mut out = RatioExperiment::default();
    for (id, inst) in instances {
        let opt = match brute_force_opt(inst, cap) {
            Ok(res) => res.value,
            Err(err) => {
                out.skipped.push((id.clone(), err.to_string()));
                continue;
            }
        };
        let filtered = filter_edges(inst).kept;
        let w = total_weight(&filtered);
        let prog = build_lp(&filtered);
        let sol = solve_lp(&prog)?;
        let (simple_labeling, _) = derandomize_minmax(&filtered);
        let value_simple = evaluate(inst, &simple_labeling)?;
        let (round_labeling, _) = derandomize_rounding(&filtered, &prog, &sol)?;
        let value_round = evaluate(inst, &round_labeling)?;
        let report = solve_combined(inst)?;
        let ratio = if opt == 0.0 { 1.0 } else { opt / report.value };
        out.rows.push(RatioRow {
            id: id.clone(),
            n: inst.node_count(),
            m: inst.edges.len(),
            total_weight: w,
            opt,
            lp: sol.objective,
            value_simple,
            value_round,
            value_combined: report.value,
            ratio,
        });
    }
    Ok(out)
}

/// Random-suite ratio sweep, deterministic per seed.
pub fn ratio_experiment(
    count: usize,
    suite: &SuiteSpec,
    seed: u64,
    cap: u128,
) -> Result<RatioExperiment> {
    let instances: Vec<(String, RmasInstance)> = gen_suite(count, suite, seed)
        .into_iter()
        .enumerate()
        .map(|(i, inst)| (format!("i{i:04}"), inst))
        .collect();
    ratio_experiment_on(&instances, cap)
}

#[derive(Debug, Clone)]
pub struct DicutRow {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub maxdicut: f64,
    /// m / maxdicut, the loss of restricting a DAG's MAS instance to
    /// min/max labels.
    pub ratio: f64,
}

#[derive(Debug, Clone, Default)]
pub struct DicutExperiment {
    pub rows: Vec<DicutRow>,
}

impl DicutExperiment {
    pub fn csv(&self) -> String {
        let mut out = String::from(DICUT_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.id,
                r.n,
                r.m,
                fmt_sig(r.maxdicut),
                fmt_sig(r.ratio)
            ));
        }
        out
    }
}

/// Brute-force dicut study on random DAGs with node counts drawn from
/// [n_min, n_max]. Edgeless draws are skipped (their ratio is undefined).
pub fn dicut_experiment(
    n_min: usize,
    n_max: usize,
    count: usize,
    p: f64,
    seed: u64,
) -> Result<DicutExperiment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DicutExperiment::default();
    for i in 0..count {
        let n = rng.gen_range(n_min..=n_max);
        let g = gen_random_dag(n, p, rng.gen());
        let m = g.edges.len();
        if m == 0 {
            continue;
        }
        let maxdicut = max_dicut(&g)?;
        out.rows.push(DicutRow {
            id: format!("d{i:04}"),
            n,
            m,
            maxdicut,
            ratio: m as f64 / maxdicut,
        });
    }
    Ok(out)
}

/// Which randomized arm a Monte Carlo run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McArm {
    Simple,
    Rounding,
}

#[derive(Debug, Clone)]
pub struct McResult {
    pub exact: f64,
    pub mean: f64,
    pub stderr: f64,
    /// |mean - exact| > 4 stderr.
    pub flagged: bool,
}

/// Compares the empirical mean of a randomized arm against its exactly
/// computed expectation over seeded trials.
pub fn monte_carlo_experiment(
    inst: &RmasInstance,
    arm: McArm,
    trials: usize,
    seed: u64,
) -> Result<McResult> {
    assert!(trials >= 1);
    let filtered = filter_edges(inst).kept;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (exact, values) = match arm {
        McArm::Simple => {
            let exact = expected_minmax(&filtered, &initial_state(&filtered));
            let values: Vec<f64> = (0..trials)
                .map(|_| {
                    let l = sample_minmax(&filtered, rng.gen());
                    evaluate(&filtered, &l).expect("sampled labeling is feasible")
                })
                .collect();
            (exact, values)
        }
        McArm::Rounding => {
            let prog = build_lp(&filtered);
            let sol = solve_lp(&prog)?;
            let marginals = MarginalState::from_lp(&prog, &sol, &filtered);
            let exact = expected_from_marginals(&filtered, &marginals);
            let values: Vec<f64> = (0..trials)
                .map(|_| {
                    let l = sample_from_marginals(&filtered, &marginals, rng.gen());
                    evaluate(&filtered, &l).expect("sampled labeling is feasible")
                })
                .collect();
            (exact, values)
        }
    };

    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let stderr = (var / n).sqrt();
    let flagged = if stderr == 0.0 {
        (mean - exact).abs() > 1e-9
    } else {
        (mean - exact).abs() > 4.0 * stderr
    };
    Ok(McResult { exact, mean, stderr, flagged })
}
