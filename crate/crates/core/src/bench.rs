//! Instance families by name, algorithm dispatch, the benchmark harness,
//! growth fitting and the text trace.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explorers::{
    cycle_optimal, explore_chord, explore_cycle_3n, explore_greedy, explore_grid_multi,
    explore_regular_mst, explore_treewidth, RegularMode, TreeDecomposition,
};
use crate::generators::{
    chained_stars, cycle_2n3, cycle_graph, cycle_with_chord, grid_graph, hardness_gadget,
    lifetime_for, path_graph, planar_rounds, random_connected_graph, random_realization,
    regular_scaffold, rng, rotating_star, two_tree, GadgetSpec, RegularityProfile, ScaffoldParams,
};
use crate::graph::Instance;
use crate::io::schedule_from_json;
use crate::io::schedule_to_json;
use crate::oracle::{exact_optimum, DEFAULT_LIMIT};
use crate::walk::{validate_schedule, MultiAgentSchedule, Violation};

/// `key=value` generator parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(pub BTreeMap<String, String>);

impl Params {
    pub fn parse<'a>(pairs: impl IntoIterator<Item = &'a str>) -> Result<Params> {
        let mut map = BTreeMap::new();
        for p in pairs {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {p:?}")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Params(map))
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Params {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.0
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse {key}={v}")))
            })
            .transpose()
    }

    fn need<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key}")))
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }
}

pub const FAMILIES: &[&str] = &[
    "rotating-star",
    "chained-stars",
    "planar-rounds",
    "gadget",
    "cycle-2n3",
    "random",
    "regular",
    "cycle",
    "chord",
    "grid",
    "series-parallel",
];

/// A generated instance with whatever side information its family offers.
#[derive(Clone, Debug)]
pub struct Built {
    pub instance: Instance,
    pub decomposition: Option<TreeDecomposition>,
    pub profile: Option<RegularityProfile>,
    pub witness: Option<MultiAgentSchedule>,
}

impl Built {
    fn plain(instance: Instance) -> Built {
        Built {
            instance,
            decomposition: None,
            profile: None,
            witness: None,
        }
    }
}

/// Builds a member of `family`. Every family takes `n` and an optional
/// `lifetime`; see the README for the rest.
pub fn build_family(family: &str, params: &Params, seed: u64) -> Result<Built> {
    let lifetime: Option<usize> = params.get("lifetime")?;
    let density = params.or("density", 0.2)?;
    let realize = |g: crate::graph::StaticGraph| {
        let l = lifetime_for(g.n, lifetime);
        random_realization(&g, l, density, seed)
    };
    Ok(match family {
        "rotating-star" => Built::plain(rotating_star(params.need("n")?, lifetime)?),
        "chained-stars" => Built::plain(chained_stars(params.or("d", 4)?, params.need("n")?, lifetime)?),
        "planar-rounds" => Built::plain(planar_rounds(params.need("n")?, lifetime)?),
        "cycle-2n3" => Built::plain(cycle_2n3(params.need("n")?, lifetime)?),
        "gadget" => {
            let k: usize = params.need("n")?;
            if k < 2 {
                return Err(Error::InvalidParameter(format!("gadget base path needs n >= 2, got {k}")));
            }
            let spec = GadgetSpec {
                base: path_graph(k),
                s: 0,
                t: k - 1,
                c: params.or("c", 1)?,
            };
            let path: Vec<usize> = (0..k).collect();
            let g = hardness_gadget(&spec, Some(&path))?;
            Built {
                witness: g.witness,
                ..Built::plain(g.instance)
            }
        }
        "random" => {
            let n: usize = params.need("n")?;
            if n < 2 {
                return Err(Error::InvalidParameter(format!("random needs n >= 2, got {n}")));
            }
            let extra = params.or("extra", n / 2)?;
            Built::plain(realize(random_connected_graph(n, extra, seed))?)
        }
        "cycle" => {
            let n: usize = params.need("n")?;
            if n < 3 {
                return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
            }
            Built::plain(realize(cycle_graph(n))?)
        }
        "chord" => {
            let n: usize = params.need("n")?;
            if n < 4 {
                return Err(Error::InvalidParameter(format!("chord needs n >= 4, got {n}")));
            }
            let (a, b) = match (params.get("a")?, params.get("b")?) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    let mut r = rng(seed ^ 0xc4);
                    let a = r.gen_range(0..n);
                    let d = r.gen_range(2..=n - 2);
                    (a, (a + d) % n)
                }
            };
            Built::plain(realize(cycle_with_chord(n, a, b))?)
        }
        "grid" => Built::plain(realize(grid_graph(params.need("n")?))?),
        "series-parallel" => {
            let n: usize = params.need("n")?;
            if n < 2 {
                return Err(Error::InvalidParameter(format!("series-parallel needs n >= 2, got {n}")));
            }
            let (g, td) = two_tree(n, params.or("keep", 0.5)?, seed);
            Built {
                decomposition: Some(td),
                ..Built::plain(realize(g)?)
            }
        }
        "regular" => {
            let p = ScaffoldParams {
                q: params.or("q", 1)?,
                extra: params.or("extra", 0.5)?,
                lifetime,
            };
            let (inst, prof) = regular_scaffold(params.need("n")?, p, seed)?;
            Built {
                profile: Some(prof),
                ..Built::plain(inst)
            }
        }
        other => return Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Greedy,
    Cycle3n,
    CycleOpt,
    Chord,
    Grid,
    Treewidth,
    Regular,
    Oracle,
}

impl Algo {
    pub const ALL: [Algo; 8] = [
        Algo::Greedy,
        Algo::Cycle3n,
        Algo::CycleOpt,
        Algo::Chord,
        Algo::Grid,
        Algo::Treewidth,
        Algo::Regular,
        Algo::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Greedy => "greedy",
            Algo::Cycle3n => "cycle3n",
            Algo::CycleOpt => "cycle-opt",
            Algo::Chord => "chord",
            Algo::Grid => "grid",
            Algo::Treewidth => "treewidth",
            Algo::Regular => "regular",
            Algo::Oracle => "oracle",
        }
    }

    /// Families whose shape this algorithm accepts; `None` means any.
    fn families(self) -> Option<&'static [&'static str]> {
        match self {
            Algo::Greedy | Algo::Oracle => None,
            Algo::Cycle3n | Algo::CycleOpt => Some(&["cycle", "cycle-2n3"]),
            Algo::Chord => Some(&["chord"]),
            Algo::Grid => Some(&["grid"]),
            Algo::Treewidth => Some(&["series-parallel"]),
            Algo::Regular => Some(&["regular"]),
        }
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algo> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

/// Inputs some algorithms need besides the instance.
#[derive(Clone, Debug)]
pub struct AlgoInputs<'a> {
    pub decomposition: Option<&'a TreeDecomposition>,
    /// Absence bounds for `regular`; measured from the instance if absent.
    pub profile: Option<&'a RegularityProfile>,
    pub regular_c: f64,
    pub oracle_limit: usize,
}

impl Default for AlgoInputs<'_> {
    fn default() -> Self {
        AlgoInputs {
            decomposition: None,
            profile: None,
            regular_c: 2.0,
            oracle_limit: DEFAULT_LIMIT,
        }
    }
}

/// Runs `algo` on `inst`. `cycle-opt` reports a lifetime overrun as
/// `LifetimeExhausted`, like the others.
pub fn run_algo(algo: Algo, inst: &Instance, inputs: &AlgoInputs<'_>) -> Result<MultiAgentSchedule> {
    let single = MultiAgentSchedule::single;
    Ok(match algo {
        Algo::Greedy => single(explore_greedy(inst)?),
        Algo::Cycle3n => single(explore_cycle_3n(inst)?),
        Algo::CycleOpt => {
            let r = cycle_optimal(inst)?;
            if !r.complete {
                return Err(Error::LifetimeExhausted {
                    step: inst.graph.lifetime() + 1,
                });
            }
            single(r.walk)
        }
        Algo::Chord => single(explore_chord(inst)?),
        Algo::Grid => explore_grid_multi(inst)?,
        Algo::Treewidth => {
            let td = inputs.decomposition.ok_or_else(|| {
                Error::InvalidParameter("treewidth needs a tree decomposition".into())
            })?;
            single(explore_treewidth(inst, td)?)
        }
        Algo::Regular => {
            let mode = match inputs.profile {
                Some(p) => RegularMode::Profile(p),
                None => RegularMode::Estimate { c: inputs.regular_c },
            };
            single(explore_regular_mst(inst, mode)?)
        }
        Algo::Oracle => single(exact_optimum(inst, inputs.oracle_limit)?.walk),
    })
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub families: Vec<String>,
    pub sizes: Vec<usize>,
    pub algos: Vec<Algo>,
    pub seeds: Vec<u64>,
    /// Extra generator parameters applied to every family.
    pub params: Params,
    /// When false, `wall_ms` is written as 0 so output is byte-identical
    /// across runs.
    pub timing: bool,
    pub oracle_limit: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub algo: String,
    pub agents: usize,
    pub arrival: Option<usize>,
    pub valid: bool,
    pub wall_ms: f64,
    pub note: String,
}

fn run_cell(cfg: &BenchConfig, family: &str, n: usize, algo: Algo, seed: u64, built: &Result<Built>) -> BenchRow {
    let mut row = BenchRow {
        family: family.to_string(),
        n,
        seed,
        algo: algo.name().to_string(),
        agents: 0,
        arrival: None,
        valid: false,
        wall_ms: 0.0,
        note: String::new(),
    };
    if let Some(fams) = algo.families() {
        if !fams.contains(&family) {
            row.note = format!("skipped: {} runs on {}", algo.name(), fams.join("/"));
            return row;
        }
    }
    let built = match built {
        Ok(b) => b,
        Err(e) => {
            row.note = format!("generation failed: {e}");
            return row;
        }
    };
    let inputs = AlgoInputs {
        decomposition: built.decomposition.as_ref(),
        profile: built.profile.as_ref(),
        oracle_limit: cfg.oracle_limit,
        ..AlgoInputs::default()
    };
    let clock = Instant::now();
    let out = run_algo(algo, &built.instance, &inputs);
    if cfg.timing {
        row.wall_ms = (clock.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    }
    let sched = match out {
        Ok(s) => s,
        Err(e) => {
            row.note = e.to_string();
            return row;
        }
    };
    row.agents = sched.agents.len();
    // Validity is judged on the serialised schedule.
    let reparsed = schedule_from_json(&schedule_to_json(&sched)).expect("schedule round-trips");
    match validate_schedule(&built.instance, &reparsed) {
        Ok(rep) if rep.covered => {
            row.valid = true;
            row.arrival = Some(rep.arrival);
        }
        Ok(rep) => {
            let seen = rep.first_visit.iter().flatten().count();
            row.note = format!("incomplete: {seen} of {} vertices", built.instance.n());
        }
        Err(v) => row.note = format!("invalid: {}", v[0]),
    }
    row
}

/// One row per (family, n, seed, algo), in that nesting order. Instances
/// are generated once per (family, n, seed) and shared by the algorithms.
pub fn run_bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    let mut cells = Vec::new();
    for f in &cfg.families {
        for &n in &cfg.sizes {
            for &seed in &cfg.seeds {
                cells.push((f.as_str(), n, seed));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(family, n, seed)| {
            let built = build_family(family, &cfg.params.clone().with("n", n), seed);
            cfg.algos
                .iter()
                .map(|&a| run_cell(cfg, family, n, a, seed, &built))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn write_rows<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Linear,
    NLogN,
    Power,
    Quadratic,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Model> {
        Ok(match s {
            "linear" | "n" => Model::Linear,
            "nlogn" | "n-log-n" => Model::NLogN,
            "power" => Model::Power,
            "quadratic" | "n2" => Model::Quadratic,
            _ => return Err(Error::InvalidParameter(format!("unknown model {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub model: Model,
    pub a: f64,
    /// Exponent of `n`: fitted for the power model, fixed otherwise.
    pub p: f64,
    /// Root mean square of the log-space residuals.
    pub residual: f64,
    pub points: usize,
    pub sizes: usize,
}

/// Least-squares fit of `y = a f(n)` (or `a n^p`) in log space. Needs
/// positive data at three or more distinct sizes.
pub fn fit_growth(points: &[(f64, f64)], model: Model) -> Result<Fit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(n, y)| n > 1.0 && y > 0.0)
        .map(|&(n, y)| (n.ln(), y.ln()))
        .collect();
    let mut sizes: Vec<f64> = pts.iter().map(|p| p.0).collect();
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need positive data at 3 or more sizes, got {}",
            sizes.len()
        )));
    }
    let k = pts.len() as f64;
    let (p, log_a) = match model {
        Model::Power => {
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let p = sxy / sxx;
            (p, my - p * mx)
        }
        Model::NLogN => {
            let log_a = pts.iter().map(|&(x, y)| y - x - x.ln()).sum::<f64>() / k;
            (1.0, log_a)
        }
        Model::Linear | Model::Quadratic => {
            let p = if model == Model::Linear { 1.0 } else { 2.0 };
            (p, pts.iter().map(|&(x, y)| y - p * x).sum::<f64>() / k)
        }
    };
    let predict = |x: f64| match model {
        Model::NLogN => log_a + x + x.ln(),
        _ => log_a + p * x,
    };
    let ssr: f64 = pts.iter().map(|&(x, y)| (y - predict(x)).powi(2)).sum();
    Ok(Fit {
        model,
        a: log_a.exp(),
        p,
        residual: (ssr / k).sqrt(),
        points: pts.len(),
        sizes: sizes.len(),
    })
}

/// `(n, arrival)` of the valid rows, optionally for one family and algo.
pub fn growth_points(rows: &[BenchRow], family: Option<&str>, algo: Option<&str>) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.valid && family.is_none_or(|f| r.family == f) && algo.is_none_or(|a| r.algo == a))
        .filter_map(|r| r.arrival.map(|a| (r.n as f64, a as f64)))
        .collect()
}

/// Position trace: `t=<time> at <vertex>` per position, with ` *` marking
/// the first visit of a vertex by the whole schedule. Multi-agent
/// schedules get an `agent <i>:` header per agent.
pub fn report(inst: &Instance, sched: &MultiAgentSchedule) -> std::result::Result<String, Vec<Violation>> {
    let rep = validate_schedule(inst, sched)?;
    let mut out = String::new();
    for (a, walk) in sched.agents.iter().enumerate() {
        if sched.agents.len() > 1 {
            writeln!(out, "agent {a}:").unwrap();
        }
        let mut seen = vec![false; inst.n()];
        for (t, v) in walk.positions(0) {
            let first = t > 0 && !seen[v] && rep.first_visit[v] == Some(t);
            seen[v] = true;
            writeln!(out, "t={t} at {v}{}", if first { " *" } else { "" }).unwrap();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::TemporalWalk;

    #[test]
    fn exact_power_laws() {
        let sq: Vec<(f64, f64)> = (2..8).map(|n| (n as f64, 3.0 * (n * n) as f64)).collect();
        let f = fit_growth(&sq, Model::Power).unwrap();
        assert!((f.p - 2.0).abs() < 0.01 && (f.a - 3.0).abs() < 1e-6 && f.residual < 1e-9);
        let lin: Vec<(f64, f64)> = (2..8).map(|n| (n as f64, 5.0 * n as f64)).collect();
        let f = fit_growth(&lin, Model::Power).unwrap();
        assert!((f.p - 1.0).abs() < 0.01);
        assert!(fit_growth(&lin, Model::Linear).unwrap().residual < 1e-9);
        assert!(fit_growth(&lin, Model::Quadratic).unwrap().residual > 0.1);
        let nl: Vec<(f64, f64)> = (2..8).map(|n| (n as f64, 2.0 * n as f64 * (n as f64).ln())).collect();
        let f = fit_growth(&nl, Model::NLogN).unwrap();
        assert!((f.a - 2.0).abs() < 1e-9 && f.residual < 1e-9);
    }

    #[test]
    fn too_few_sizes() {
        let pts = [(4.0, 1.0), (4.0, 2.0), (8.0, 3.0), (16.0, 0.0)];
        assert!(matches!(fit_growth(&pts, Model::Power), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn trace_format() {
        let inst = build_family("cycle-2n3", &Params::default().with("n", 4), 0).unwrap().instance;
        let empty = MultiAgentSchedule::single(TemporalWalk::new(0));
        assert_eq!(report(&inst, &empty).unwrap(), "t=0 at 0\n");
        let mut w = TemporalWalk::new(0);
        w.push(0, 3);
        w.push(2, 0);
        let text = report(&inst, &MultiAgentSchedule::single(w)).unwrap();
        assert_eq!(text, "t=0 at 0\nt=1 at 3 *\nt=3 at 0\n");
        let mut bad = TemporalWalk::new(0);
        bad.push(0, 2);
        assert!(report(&inst, &MultiAgentSchedule::single(bad)).is_err());
    }

    #[test]
    fn every_family_builds() {
        for fam in FAMILIES {
            let n = match *fam {
                "chained-stars" => 8,
                "planar-rounds" => 16,
                "gadget" => 3,
                _ => 6,
            };
            let b = build_family(fam, &Params::default().with("n", n), 3).unwrap();
            assert!(b.instance.graph.is_always_connected().connected, "{fam}");
        }
        assert!(build_family("nope", &Params::default().with("n", 4), 0).is_err());
        assert!(build_family("cycle", &Params::default(), 0).is_err());
    }

    #[test]
    fn bench_rows_and_skips() {
        let cfg = BenchConfig {
            families: vec!["rotating-star".into(), "cycle".into()],
            sizes: vec![3, 4],
            algos: vec![Algo::Greedy, Algo::Oracle, Algo::Cycle3n],
            seeds: vec![1],
            params: Params::default(),
            timing: false,
            oracle_limit: DEFAULT_LIMIT,
        };
        let rows = run_bench(&cfg);
        assert_eq!(rows.len(), 12);
        let star: Vec<_> = rows.iter().filter(|r| r.family == "rotating-star").collect();
        assert!(star.iter().filter(|r| r.algo != "cycle3n").all(|r| r.valid));
        assert!(star.iter().filter(|r| r.algo == "cycle3n").all(|r| r.note.starts_with("skipped")));
        assert!(rows.iter().filter(|r| r.family == "cycle").all(|r| r.valid));
        let mut a = Vec::new();
        write_rows(&mut a, &rows).unwrap();
        let mut b = Vec::new();
        write_rows(&mut b, &run_bench(&cfg)).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a.clone()).unwrap();
        assert!(text.starts_with("family,n,seed,algo,agents,arrival,valid,wall_ms,note\n"));
        assert_eq!(read_rows(&a[..]).unwrap(), rows);
    }
}
