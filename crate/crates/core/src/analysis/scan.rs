//! Search over connected subcubic bipartite graphs: sample graphs, solve,
//! and report any median pair outside `[-1, 1]`. The Heawood graph is the one expected exception.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{enumerate::EnumerationReport, AnalysisConfig};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{
    build_complete_bipartite_minus_matching, build_cube, build_cycle, build_heawood, build_path,
    build_pnk, build_wnk, Family, Graph, GraphFile,
};
use crate::spectral::{
    graph_spectrum, median_eigenvalues, multiset_distance, MedianPair, SolverOptions,
};

const RETRY_BUDGET: usize = 64;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for the `sample`-th graph of a given order under a run seed.
pub fn derive_seed(seed: u64, order: usize, sample: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ order as u64) ^ sample as u64)
}

fn try_generate(order: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    // A spanning tree puts order - 1 edge ends on each side, so each side
    // needs at least ceil((order - 1) / 3) vertices.
    let min_side = (order - 1).div_ceil(3).max(1);
    if 2 * min_side > order {
        return None;
    }
    let a = rng.random_range(min_side..=order - min_side);
    let side_a = |v: usize| v < a;

    let mut deg = vec![0usize; order];
    let mut edges = Vec::with_capacity(3 * order / 2);
    let mut in_tree = vec![false; order];
    let mut pending: Vec<usize> = (0..order).collect();
    pending.shuffle(rng);
    in_tree[pending.pop().unwrap()] = true;

    while !pending.is_empty() {
        let mut progressed = false;
        let mut i = 0;
        while i < pending.len() {
            let u = pending[i];
            let hosts: Vec<usize> = (0..order)
                .filter(|&h| in_tree[h] && side_a(h) != side_a(u) && deg[h] < 3)
                .collect();
            if hosts.is_empty() {
                i += 1;
                continue;
            }
            let h = hosts[rng.random_range(0..hosts.len())];
            edges.push((u.min(h), u.max(h)));
            deg[u] += 1;
            deg[h] += 1;
            in_tree[u] = true;
            pending.swap_remove(i);
            progressed = true;
        }
        if !progressed {
            return None;
        }
    }

    let density: f64 = rng.random();
    let tries = (density * 1.5 * order as f64).round() as usize;
    for _ in 0..tries {
        let u = rng.random_range(0..a);
        let v = rng.random_range(a..order);
        if deg[u] < 3 && deg[v] < 3 && !edges.contains(&(u, v)) {
            edges.push((u, v));
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    Graph::from_edges(order, edges, None, Family::Other).ok()
}

/// A connected bipartite graph of maximum degree at most 3, plus the number
/// of attempts it took. The same `(order, seed)` always gives the same graph.
pub(crate) fn generate_with_attempts(order: usize, seed: u64) -> Result<(Graph, usize)> {
    if order < 2 {
        return Err(Error::param(format!("order >= 2 required (got {order})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=RETRY_BUDGET {
        if let Some(g) = try_generate(order, &mut rng) {
            debug_assert!(g.is_connected() && g.is_bipartite() && g.max_degree() <= 3);
            return Ok((g, attempt));
        }
    }
    Err(Error::GenerationFailed {
        order,
        attempts: RETRY_BUDGET,
    })
}

pub fn random_subcubic_bipartite(order: usize, seed: u64) -> Result<Graph> {
    generate_with_attempts(order, seed).map(|(g, _)| g)
}

/// Fixed named graphs: even cycles, paths, Q3, K(3,3) minus a perfect
/// matching, a few cubic W(n,2) and their truncations, and Heawood.
pub fn catalog() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in (4..=16).step_by(2) {
        out.push((format!("cycle-{n}"), build_cycle(n).unwrap()));
    }
    for n in 2..=9 {
        out.push((format!("path-{n}"), build_path(n).unwrap()));
    }
    out.push(("cube".into(), build_cube()));
    out.push((
        "k33-minus-matching".into(),
        build_complete_bipartite_minus_matching(3).unwrap(),
    ));
    for n in 2..=4 {
        out.push((format!("wnk-{n}-2"), build_wnk(n, 2).unwrap()));
        out.push((format!("pnk-{n}-2"), build_pnk(n, 2).unwrap()));
    }
    out.push(("heawood".into(), build_heawood()));
    out
}

/// Recognises the Heawood graph by order, cubic regularity, bipartiteness,
/// girth 6 and the spectrum `{3, sqrt2^6, -sqrt2^6, -3}`.
pub fn is_heawood(g: &Graph) -> bool {
    if g.order() != 14 || g.regular_degree() != Some(3) || !g.is_bipartite() || g.girth() != Some(6)
    {
        return false;
    }
    let r2 = std::f64::consts::SQRT_2;
    let mut want = vec![3.0, -3.0];
    want.extend(std::iter::repeat_n(r2, 6));
    want.extend(std::iter::repeat_n(-r2, 6));
    let opts = SolverOptions::default().sequential();
    graph_spectrum(g, &opts)
        .and_then(|s| multiset_distance(&s, &want))
        .is_ok_and(|d| d <= 1e-8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanParams {
    pub order_min: usize,
    pub order_max: usize,
    pub samples_per_order: usize,
    pub seed: u64,
    pub include_catalog: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub id: String,
    pub order: usize,
    pub median_pair: MedianPair,
    /// Fraction of eigenvalues in `[-1, 1]` (guarded).
    pub fraction_in_unit: f64,
    pub heawood: bool,
}

/// A graph whose median pair leaves `[-1, 1]`, kept for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionRecord {
    pub id: String,
    pub heawood: bool,
    pub median_pair: MedianPair,
    pub graph: GraphFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub params: ScanParams,
    pub rng_seed: u64,
    pub graphs_examined: usize,
    pub exceptions: Vec<ExceptionRecord>,
    pub heawood_hits: usize,
    /// Smallest fraction of eigenvalues in `[-1, 1]` over non-Heawood
    /// graphs. An empirical bound over this sample only.
    pub delta_min: f64,
    pub generation_attempts: usize,
    pub generation_failures: usize,
    pub records: Vec<GraphRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<EnumerationReport>,
}

impl ScanReport {
    pub fn non_heawood_exceptions(&self) -> impl Iterator<Item = &ExceptionRecord> {
        self.exceptions.iter().filter(|e| !e.heawood)
    }

    pub fn failure_rate(&self) -> f64 {
        if self.generation_attempts == 0 {
            0.0
        } else {
            self.generation_failures as f64 / self.generation_attempts as f64
        }
    }
}

enum Item {
    Catalog(String, Graph),
    Random { order: usize, sample: usize },
}

struct Outcome {
    record: GraphRecord,
    exception: Option<ExceptionRecord>,
    attempts: usize,
}

fn examine(id: String, g: &Graph, attempts: usize, cfg: &AnalysisConfig) -> Result<Outcome> {
    let s = graph_spectrum(g, &cfg.solver)?;
    let median = median_eigenvalues(&s)?;
    let guard = cfg.guard(&s);
    let inside = s.values.iter().filter(|v| v.abs() <= 1.0 + guard).count();
    let out_of_unit = !median.within(-1.0, 1.0, guard);
    let heawood = is_heawood(g);
    let exception = out_of_unit.then(|| ExceptionRecord {
        id: id.clone(),
        heawood,
        median_pair: median,
        graph: GraphFile::from(g),
    });
    Ok(Outcome {
        record: GraphRecord {
            id,
            order: g.order(),
            median_pair: median,
            fraction_in_unit: inside as f64 / s.order as f64,
            heawood,
        },
        exception,
        attempts,
    })
}

pub fn scan_subcubic_bipartite(params: &ScanParams, cfg: &AnalysisConfig) -> Result<ScanReport> {
    if params.order_min < 2 {
        return Err(Error::param("order_min >= 2 required"));
    }
    if params.order_min > params.order_max {
        return Err(Error::param(format!(
            "order range {}:{} is empty (need min <= max)",
            params.order_min, params.order_max
        )));
    }
    if params.samples_per_order < 1 {
        return Err(Error::param("samples_per_order >= 1 required"));
    }
    scan_items(params, cfg, false)
}

/// Scan the fixed catalog alone.
pub fn scan_catalog(seed: u64, cfg: &AnalysisConfig) -> Result<ScanReport> {
    let params = ScanParams {
        order_min: 0,
        order_max: 0,
        samples_per_order: 0,
        seed,
        include_catalog: true,
    };
    scan_items(&params, cfg, true)
}

fn scan_items(params: &ScanParams, cfg: &AnalysisConfig, catalog_only: bool) -> Result<ScanReport> {
    let mut items = Vec::new();
    if params.include_catalog || catalog_only {
        items.extend(catalog().into_iter().map(|(id, g)| Item::Catalog(id, g)));
    }
    if !catalog_only {
        for order in params.order_min..=params.order_max {
            for sample in 0..params.samples_per_order {
                items.push(Item::Random { order, sample });
            }
        }
    }
    let outcomes = exec::try_map_slice(&items, cfg.exec, |item| match item {
        Item::Catalog(id, g) => examine(format!("catalog:{id}"), g, 0, cfg),
        Item::Random { order, sample } => {
            let seed = derive_seed(params.seed, *order, *sample);
            let (g, attempts) = generate_with_attempts(*order, seed)?;
            examine(
                format!("random:order={order}:sample={sample}"),
                &g,
                attempts,
                cfg,
            )
        }
    })?;

    let mut report = ScanReport {
        params: *params,
        rng_seed: params.seed,
        graphs_examined: outcomes.len(),
        exceptions: Vec::new(),
        heawood_hits: 0,
        delta_min: 1.0,
        generation_attempts: 0,
        generation_failures: 0,
        records: Vec::with_capacity(outcomes.len()),
        enumeration: None,
    };
    for o in outcomes {
        report.generation_attempts += o.attempts;
        report.generation_failures += o.attempts.saturating_sub(1);
        if o.record.heawood {
            report.heawood_hits += 1;
        } else {
            report.delta_min = report.delta_min.min(o.record.fraction_in_unit);
        }
        report.exceptions.extend(o.exception);
        report.records.push(o.record);
    }
    Ok(report)
}
