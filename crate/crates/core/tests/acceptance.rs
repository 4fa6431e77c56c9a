//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use texp::bench::{build_family, fit_growth, Model, Params};
use texp::explorers::grid::explore_grid_from;
use texp::explorers::{
    cycle_optimal, explore_chord, explore_cycle_3n, explore_greedy, explore_grid_multi,
    explore_regular_mst, explore_treewidth, grid_agents, mst_weight_audit, RegularMode,
};
use texp::generators::{
    cycle_2n3, hardness_gadget, path_graph, planar_rounds, random_connected_graph, random_realization,
    regular_scaffold, rng, rotating_star, GadgetSpec, ScaffoldParams,
};
use texp::oracle::{exact_optimum, exhaustive_enum};
use texp::reductions::{
    contract_edges, multi_to_single, progress_per_phase_audit, transfer_schedule, Compression, Phase,
    RouteReplay,
};
use texp::{validate_schedule, validate_walk, Instance, MultiAgentSchedule, TemporalWalk};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn arrival(inst: &Instance, w: &TemporalWalk) -> Result<usize, String> {
    let rep = validate_walk(inst, w).map_err(|v| format!("invalid walk: {v}"))?;
    check(rep.complete, || format!("walk visits {} of {}", rep.visited, inst.n()))?;
    Ok(rep.arrival)
}

fn family(name: &str, n: usize, seed: u64) -> Instance {
    build_family(name, &Params::default().with("n", n), seed).unwrap().instance
}

fn log2(x: usize) -> f64 {
    (x as f64).log2()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn oracle_certification() -> Outcome {
    let mut r = rng(1);
    let mut cases = 0;
    for seed in 0..120u64 {
        let n = r.gen_range(3..=7);
        let extra = r.gen_range(0..=n);
        let g = random_connected_graph(n, extra, seed);
        let density = [0.0, 0.1, 0.3][seed as usize % 3];
        let inst = random_realization(&g, r.gen_range(n * n..=64), density, seed).unwrap();
        let a = exact_optimum(&inst, 15).map_err(|e| e.to_string())?.optimum;
        let b = exhaustive_enum(&inst).map_err(|e| e.to_string())?;
        check(a == b, || format!("seed {seed}: exact {a} vs enumeration {b}"))?;
        cases += 1;
    }
    for n in 2..=3 {
        let inst = rotating_star(n, None).unwrap();
        check(exact_optimum(&inst, 15).unwrap().optimum == exhaustive_enum(&inst).unwrap(), || {
            format!("rotating star {n} disagrees")
        })?;
        cases += 1;
    }
    Ok(format!("{cases} instances, 0 mismatches"))
}

fn rotating_star_growth() -> Outcome {
    let mut per_n = Vec::new();
    for n in 2..=6 {
        let opt = exact_optimum(&rotating_star(n, None).unwrap(), 15).map_err(|e| e.to_string())?.optimum;
        per_n.push((n, opt));
    }
    for w in per_n.windows(2) {
        let (a, b) = (w[0].1 as f64 / w[0].0 as f64, w[1].1 as f64 / w[1].0 as f64);
        check(b > a, || format!("opt(n)/n not increasing: {per_n:?}"))?;
    }
    let mut pts = Vec::new();
    for n in [8, 16, 32, 64] {
        let inst = rotating_star(n, None).unwrap();
        let w = explore_greedy(&inst).map_err(|e| e.to_string())?;
        pts.push((n as f64, arrival(&inst, &w)? as f64));
    }
    let fit = fit_growth(&pts, Model::Power).map_err(|e| e.to_string())?;
    check(fit.p >= 1.8, || format!("greedy exponent {:.3} < 1.8", fit.p))?;
    Ok(format!("optima {per_n:?}, greedy exponent {:.3}", fit.p))
}

fn cycle_three_n() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let n = r.gen_range(8..=64);
        let inst = family("cycle", n, seed);
        let w = explore_cycle_3n(&inst).map_err(|e| format!("seed {seed}: {e}"))?;
        let a = arrival(&inst, &w)?;
        check(a <= 3 * n, || format!("seed {seed} n={n}: arrival {a} > 3n"))?;
        worst = worst.max(a as f64 / n as f64);
    }
    Ok(format!("200 cycles, max arrival/n {worst:.2}"))
}

fn cycle_optimality() -> Outcome {
    let mut r = rng(4);
    for seed in 0..200u64 {
        let n = r.gen_range(4..=12);
        let inst = family("cycle", n, seed);
        let c = cycle_optimal(&inst).map_err(|e| e.to_string())?;
        let opt = exact_optimum(&inst, 15).map_err(|e| e.to_string())?.optimum;
        check(c.complete && c.arrival == opt, || {
            format!("seed {seed} n={n}: cycle_optimal {} vs oracle {opt}", c.arrival)
        })?;
        check(arrival(&inst, &c.walk)? == c.arrival, || format!("seed {seed}: reported arrival is off"))?;
    }
    for n in 4..=6 {
        let inst = cycle_2n3(n, None).unwrap();
        let opt = exact_optimum(&inst, 15).unwrap().optimum;
        let c = cycle_optimal(&inst).unwrap();
        check(opt == 2 * n - 3 && c.arrival == opt, || {
            format!("cycle_2n3({n}): oracle {opt}, cycle_optimal {}", c.arrival)
        })?;
    }
    Ok("200 cycles exact, cycle_2n3 optimum 2n-3 for n = 4..6".into())
}

fn chord() -> Outcome {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let n = r.gen_range(8..=64);
        let inst = family("chord", n, seed);
        let w = explore_chord(&inst).map_err(|e| format!("seed {seed}: {e}"))?;
        let a = arrival(&inst, &w)?;
        check(a <= 10 * n, || format!("seed {seed} n={n}: arrival {a} > 10n"))?;
        if n <= 12 {
            let opt = exact_optimum(&inst, 15).unwrap().optimum;
            check(a >= opt, || format!("seed {seed}: arrival {a} below optimum {opt}"))?;
        }
        worst = worst.max(a as f64 / n as f64);
    }
    Ok(format!("100 instances, max arrival/n {worst:.2}"))
}

/// Single-agent compression of the grid explorer run from every phase start.
fn grid_compression(inst: &Instance) -> Result<Compression, String> {
    let targets: Vec<usize> = (0..inst.n()).collect();
    let mut builder = |s: usize, p: usize| {
        let (schedule, _) = explore_grid_from(inst, s, p)?;
        let end = schedule.agents.iter().filter_map(|w| w.end_time()).max().unwrap_or(p);
        Ok(Phase {
            schedule,
            horizon: end - p,
        })
    };
    multi_to_single(&inst.graph, inst.start, 0, &targets, &mut builder).map_err(|e| e.to_string())
}

fn lemma2_ok(inst: &Instance, run: &Compression) -> Result<usize, String> {
    let a = arrival(inst, &run.walk)?;
    check(a <= run.bound(inst.n()), || format!("arrival {a} > bound {}", run.bound(inst.n())))?;
    progress_per_phase_audit(run).map_err(|p| format!("phase {p} gained too little"))?;
    Ok(a)
}

fn grid() -> Outcome {
    let mut ratios = Vec::new();
    let mut composed = 0;
    for n in [8usize, 16, 32, 64, 128] {
        let mut per = Vec::new();
        for seed in 0..50u64 {
            let inst = family("grid", n, seed);
            let sched = explore_grid_multi(&inst).map_err(|e| format!("n={n} seed {seed}: {e}"))?;
            let rep = validate_schedule(&inst, &sched).map_err(|v| format!("n={n} seed {seed}: {}", v[0]))?;
            check(rep.covered, || format!("n={n} seed {seed}: not covered"))?;
            let cap = 4 * log2(n).ceil() as usize;
            check(sched.agents.len() <= cap, || format!("n={n}: {} agents > {cap}", sched.agents.len()))?;
            per.push(rep.arrival as f64 / (n as f64 * log2(n)));
            if seed < 10 {
                let run = grid_compression(&inst)?;
                lemma2_ok(&inst, &run).map_err(|e| format!("grid n={n} seed {seed}: {e}"))?;
                composed += 1;
            }
        }
        ratios.push((n, mean(&per)));
    }
    let r16 = ratios[1].1;
    let r128 = ratios[4].1;
    check(r128 <= 1.5 * r16, || format!("ratio grows: {ratios:?}"))?;
    let shown: Vec<String> = ratios.iter().map(|(n, r)| format!("{n}:{r:.2}")).collect();
    Ok(format!(
        "250 grids, agents <= {} at n=128, arrival/(n log n) {}, {composed} compositions within bound",
        grid_agents(128),
        shown.join(" ")
    ))
}

fn treewidth() -> Outcome {
    let mut ratios = Vec::new();
    for n in [25usize, 50, 100, 200] {
        let mut per = Vec::new();
        for seed in 0..8u64 {
            let b = build_family("series-parallel", &Params::default().with("n", n), seed).unwrap();
            let td = b.decomposition.as_ref().unwrap();
            let k = td.width() as f64;
            let w = explore_treewidth(&b.instance, td).map_err(|e| format!("n={n} seed {seed}: {e}"))?;
            let a = arrival(&b.instance, &w)?;
            per.push(a as f64 / ((n as f64).powf(1.5) * k * k * log2(n)));
        }
        ratios.push((n, mean(&per)));
    }
    check(ratios[3].1 <= 1.5 * ratios[0].1, || format!("ratio grows: {ratios:?}"))?;
    let shown: Vec<String> = ratios.iter().map(|(n, r)| format!("{n}:{r:.4}")).collect();
    Ok(format!("32 instances, arrival/(n^1.5 k^2 log n) {}", shown.join(" ")))
}

fn regular() -> Outcome {
    let mut pts = Vec::new();
    let mut max_charge = 0.0f64;
    for n in [128usize, 256, 512, 1024] {
        for seed in 0..4u64 {
            let (inst, prof) = regular_scaffold(n, ScaffoldParams::default(), seed).map_err(|e| e.to_string())?;
            check(inst.graph.m() <= 3 * n, || format!("n={n}: {} edges", inst.graph.m()))?;
            let w = explore_regular_mst(&inst, RegularMode::Profile(&prof)).map_err(|e| e.to_string())?;
            pts.push((n as f64, arrival(&inst, &w)? as f64));
            let audit = mst_weight_audit(&inst, &prof).map_err(|e| e.to_string())?;
            check(audit.charge_ok && audit.weight_ok, || {
                format!("n={n} seed {seed}: max charge {:.2}", audit.max_charge)
            })?;
            max_charge = max_charge.max(audit.max_charge);
        }
    }
    let fit = fit_growth(&pts, Model::Power).map_err(|e| e.to_string())?;
    check(fit.p <= 1.1, || format!("exponent {:.3} > 1.1", fit.p))?;
    Ok(format!("exponent {:.3}, max charge {max_charge:.2} (limit 16)", fit.p))
}

fn lemma2() -> Outcome {
    let mut runs = 0;
    for n in [4usize, 8, 16, 32] {
        for seed in 0..5u64 {
            let inst = family("grid", n, seed);
            lemma2_ok(&inst, &grid_compression(&inst)?)?;
            let sched = explore_grid_multi(&inst).unwrap();
            let replay = RouteReplay::new(&inst.graph, &sched);
            let targets: Vec<usize> = (0..inst.n()).collect();
            let run = multi_to_single(&inst.graph, inst.start, 0, &targets, &mut |s, p| replay.build(s, p))
                .map_err(|e| e.to_string())?;
            lemma2_ok(&inst, &run)?;
            runs += 2;
        }
    }
    Ok(format!("{runs} compressions within (t+n)(ceil(k ln n)+1), progress audit clean"))
}

fn transfer() -> Outcome {
    let mut r = rng(10);
    let families = ["random", "cycle", "grid", "series-parallel"];
    for seed in 0..50u64 {
        let fam = families[seed as usize % families.len()];
        let n = r.gen_range(6..=20);
        let inst = family(fam, n, seed);
        let src = explore_greedy(&inst).map_err(|e| e.to_string())?;
        let a = arrival(&inst, &src)?;
        let m = inst.graph.m();
        let mut ids: Vec<usize> = (0..m).collect();
        ids.shuffle(&mut r);
        ids.truncate(r.gen_range(1..=m.min(inst.n() - 1)));
        let con = contract_edges(&inst, &ids).map_err(|e| e.to_string())?;
        let moved = transfer_schedule(&MultiAgentSchedule::single(src), &con.mapping);
        let rep = validate_schedule(&con.instance, &moved).map_err(|v| format!("seed {seed}: {}", v[0]))?;
        check(rep.covered && rep.arrival <= a, || {
            format!("seed {seed}: transferred arrival {} vs source {a}", rep.arrival)
        })?;
    }
    Ok("50 transfers valid, none slower".into())
}

fn planar() -> Outcome {
    for n in [8usize, 16, 32, 64] {
        let inst = planar_rounds(n, None).map_err(|e| e.to_string())?;
        let g = &inst.graph;
        for t in 0..=g.lifetime() {
            let edges: Vec<(usize, usize)> = g
                .snapshot(t)
                .unwrap()
                .into_iter()
                .map(|e| (g.edge(e).u, g.edge(e).v))
                .collect();
            check(texp::generators::is_simple_path(g.n(), &edges), || format!("n={n} step {t}: not a path"))?;
        }
        let d = g.underlying().max_degree();
        check(d <= 4, || format!("n={n}: max degree {d}"))?;
    }
    let o8 = exact_optimum(&planar_rounds(8, None).unwrap(), 16).map_err(|e| e.to_string())?.optimum;
    let o16 = exact_optimum(&planar_rounds(16, None).unwrap(), 16).map_err(|e| e.to_string())?.optimum;
    check(o16 as f64 / 16.0 > o8 as f64 / 8.0, || format!("opt(8) = {o8}, opt(16) = {o16}"))?;
    Ok(format!("all snapshots simple paths, opt(8) = {o8}, opt(16) = {o16}"))
}

fn gadget() -> Outcome {
    let mut shown = Vec::new();
    for c in [1u32, 2] {
        let spec = GadgetSpec {
            base: path_graph(4),
            s: 0,
            t: 3,
            c,
        };
        let g = hardness_gadget(&spec, Some(&[0, 1, 2, 3])).map_err(|e| e.to_string())?;
        let total = g.instance.n();
        let rep = validate_schedule(&g.instance, g.witness.as_ref().unwrap()).map_err(|v| v[0].to_string())?;
        check(rep.covered && rep.arrival <= 5 * total, || {
            format!("c={c}: witness arrival {} vs 5n* = {}", rep.arrival, 5 * total)
        })?;
        for (i, &(e, step)) in g.quick_links.iter().enumerate() {
            let copy = i + 1;
            check(step == copy * g.copy_size, || format!("link {copy} at step {step}"))?;
            let present: Vec<usize> = (0..=g.instance.graph.lifetime())
                .filter(|&t| g.instance.graph.is_present(e, t))
                .collect();
            check(present == [step], || format!("link {copy} present at {present:?}"))?;
        }
        shown.push(format!("c={c}: arrival/n* = {:.2}", rep.arrival as f64 / total as f64));
    }
    Ok(shown.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("oracle certification", oracle_certification),
        ("rotating star growth", rotating_star_growth),
        ("cycle within 3n", cycle_three_n),
        ("cycle optimality", cycle_optimality),
        ("cycle with chord", chord),
        ("2 x n grid", grid),
        ("bounded treewidth", treewidth),
        ("regular edges", regular),
        ("multi-agent compression", lemma2),
        ("contraction transfer", transfer),
        ("planar family", planar),
        ("hardness gadget", gadget),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let clock = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = clock.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {id:>2} {name}: PASS ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} {name}: FAIL ({why}) [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
