//! Acceptance checks, one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uniprior::codes::{self, ReportOptions};
use uniprior::decompose;
use uniprior::generate::{generate, GeneratorParams};
use uniprior::graphs::{self, DEFAULT_CYCLE_CAP};
use uniprior::minors::{self, MinorLimits, TightnessCertificate, UndirectedGraph};
use uniprior::model::{self, DemandEdge, DemandSupergraph, SupergraphCycle};
use uniprior::solvers::{self, SolverLimits};
use uniprior::transforms;

const EXAMPLE1: &str = include_str!("../../../data/example1.icp");
const EXTENDED: &str = include_str!("../../../data/extended.icp");

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example1_cycles(gc: &DemandSupergraph) -> Vec<SupergraphCycle> {
    let c = |pairs: &[(&str, &str)]| {
        SupergraphCycle::new(gc, pairs.iter().map(|&(m, r)| DemandEdge::new(m, r)).collect()).unwrap()
    };
    vec![
        c(&[("x1", "1"), ("x3", "3"), ("x2", "2")]),
        c(&[("x5", "3"), ("x4", "2")]),
        c(&[("x9", "3"), ("x6", "4")]),
        c(&[("x7", "2"), ("x8", "4")]),
    ]
}

/// Cycles of the supergraph itself, as bitmasks over demands in canonical
/// order. Each cycle is found once, starting from its smallest demand.
fn supergraph_cycle_masks(g: &DemandSupergraph) -> Vec<u32> {
    let demands: Vec<&DemandEdge> = g.demands().iter().collect();
    assert!(demands.len() <= 32);
    let holder = |d: &DemandEdge| g.holder(&d.message).unwrap().clone();
    let mut out = Vec::new();
    for d0 in 0..demands.len() {
        let close_at = holder(demands[d0]);
        let mut stack = vec![(d0, 1u32 << d0, vec![demands[d0].receiver.clone()])];
        while let Some((last, mask, heads)) = stack.pop() {
            let at = &demands[last].receiver;
            for (e, demand) in demands.iter().enumerate().skip(d0 + 1) {
                if &holder(demand) != at {
                    continue;
                }
                let r = &demand.receiver;
                if *r == close_at {
                    out.push(mask | 1 << e);
                } else if !heads.contains(r) {
                    let mut h = heads.clone();
                    h.push(r.clone());
                    stack.push((e, mask | 1 << e, h));
                }
            }
        }
    }
    out
}

/// Memoized maximum number of disjoint cycles inside `alive`.
fn oracle_nu(cycles: &[u32], alive: u32, memo: &mut HashMap<u32, usize>) -> usize {
    if let Some(&v) = memo.get(&alive) {
        return v;
    }
    let inside: Vec<u32> = cycles.iter().copied().filter(|&c| c & !alive == 0).collect();
    let best = match inside.first() {
        None => 0,
        Some(&first) => {
            let e = first.trailing_zeros();
            let without = oracle_nu(&inside, alive & !(1 << e), memo);
            inside
                .iter()
                .filter(|&&c| c >> e & 1 == 1)
                .map(|&c| 1 + oracle_nu(&inside, alive & !c, memo))
                .fold(without, usize::max)
        }
    };
    memo.insert(alive, best);
    best
}

/// Memoized minimum number of edges hitting every cycle inside `alive`.
fn oracle_tau(cycles: &[u32], alive: u32, memo: &mut HashMap<u32, usize>) -> usize {
    if let Some(&v) = memo.get(&alive) {
        return v;
    }
    let inside: Vec<u32> = cycles.iter().copied().filter(|&c| c & !alive == 0).collect();
    let best = match inside.iter().min_by_key(|c| c.count_ones()) {
        None => 0,
        Some(&c) => (0..32)
            .filter(|&e| c >> e & 1 == 1)
            .map(|e| 1 + oracle_tau(&inside, alive & !(1 << e), memo))
            .min()
            .unwrap(),
    };
    memo.insert(alive, best);
    best
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let g = model::parse_problem(EXAMPLE1).map_err(|e| e.to_string())?;
    ensure(model::is_generalized_cycle(&g).holds(), || "not classified as a generalized cycle".into())?;
    let nt = solvers::supergraph_nu_tau(&g, SolverLimits::default()).map_err(|e| e.to_string())?;
    ensure(nt.nu_e == 4 && nt.tau_e == 4, || format!("nu_e={} tau_e={}", nt.nu_e, nt.tau_e))?;
    let n = g.message_count();
    ensure(n - nt.tau_e == 5 && n - nt.nu_e == 5, || "bounds are not 5 and 5".into())?;
    for q in [2, 3] {
        let code = codes::cyclic_code(&g, &nt.packing, q).map_err(|e| e.to_string())?;
        ensure(code.len() == 5, || format!("GF({q}) code has {} rows", code.len()))?;
        let report = codes::verify_code(&g, &code).map_err(|e| e.to_string())?;
        ensure(report.decodable_count() == 9 && report.total() == 9, || {
            format!("GF({q}): {}/{} decodable", report.decodable_count(), report.total())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("nu_e=4 tau_e=4, 5 <= l <= 5, 9/9 decodable over GF(2) and GF(3), {elapsed:.2?}"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let g = model::parse_problem(EXAMPLE1).map_err(|e| e.to_string())?;
    let si = transforms::to_side_information_graph(&g).map_err(|e| e.to_string())?;
    let m = codes::minrank_oracle(&si, 2, codes::DEFAULT_ORACLE_MAX_EDGES).map_err(|e| e.to_string())?;
    ensure(m.free_entries == 23, || format!("{} free entries", m.free_entries))?;
    ensure(m.value == 5, || format!("minrank {}", m.value))?;
    ensure(m.witness.rank() == 5, || "witness rank differs".into())?;
    Ok(format!("minrank=5 over 2^23 matrices, {:.2?}", start.elapsed()))
}

fn criterion_3() -> Check {
    let g = model::parse_problem(EXTENDED).map_err(|e| e.to_string())?;
    let gc = model::parse_problem(EXAMPLE1).map_err(|e| e.to_string())?;
    let cycles = example1_cycles(&gc);
    let ok = decompose::is_demand_decomposable(&g, &gc, &cycles).map_err(|e| e.to_string())?;
    ensure(ok, || "extension is not decomposable by the four cycles".into())?;
    let code = codes::cyclic_code(&gc, &cycles, 2).map_err(|e| e.to_string())?;
    ensure(code.len() == 5, || format!("code has {} rows", code.len()))?;
    let report = codes::verify_code(&g, &code).map_err(|e| e.to_string())?;
    ensure(report.all_decodable(), || {
        format!("{}/{} extended demands decodable", report.decodable_count(), report.total())
    })?;
    let b = codes::bounds_report(&g, ReportOptions::default()).map_err(|e| e.to_string())?;
    ensure((b.lower, b.upper, b.achieved_length) == (5, 5, 5), || b.summary())?;
    Ok(format!("decomposable, {}/{} extended demands decodable with the 5-row code", report.decodable_count(), report.total()))
}

/// 200 seeded generalized cycles with at most 8 receivers and 20 demands.
fn random_instances() -> Vec<(u64, DemandSupergraph)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < 200 {
        let params = GeneratorParams {
            receivers: 2 + (seed % 7) as usize,
            cycles: 1 + (seed / 7 % 5) as usize,
            extra_demands: 0,
            seed,
        };
        if let Ok(gen) = generate(&params) {
            if gen.problem.demands().len() <= 20 {
                out.push((seed, gen.problem));
            }
        }
        seed += 1;
    }
    out
}

fn criterion_4(instances: &[(u64, DemandSupergraph)]) -> Check {
    let start = Instant::now();
    let limits = SolverLimits::default();
    let mut violations = Vec::new();
    let mut packings_checked = 0usize;
    for (seed, gc) in instances {
        let fail = |what: String| format!("seed {seed}: {what}");
        let view = transforms::to_eulerian(gc).map_err(|e| fail(e.to_string()))?;
        let (packing, fes) = solvers::edge_nu_tau(&view.graph, limits).map_err(|e| fail(e.to_string()))?;
        let (nu_e, tau_e) = (packing.len(), fes.len());

        // the same numbers computed on the supergraph directly
        let masks = supergraph_cycle_masks(gc);
        let all = (1u32 << gc.demands().len()) - 1;
        let nu_sg = oracle_nu(&masks, all, &mut HashMap::new());
        let tau_sg = oracle_tau(&masks, all, &mut HashMap::new());
        if (nu_sg, tau_sg) != (nu_e, tau_e) {
            violations.push(fail(format!("supergraph ({nu_sg},{tau_sg}) vs Eulerian ({nu_e},{tau_e})")));
        }

        // vertex versions on the side-information graph
        let si = transforms::to_side_information_graph(gc).map_err(|e| fail(e.to_string()))?;
        let nu_v = solvers::max_vertex_disjoint_packing(&si.graph, limits).map_err(|e| fail(e.to_string()))?.len();
        let tau_v = solvers::min_feedback_vertex_set(&si.graph, limits).map_err(|e| fail(e.to_string()))?.len();
        if (nu_v, tau_v) != (nu_e, tau_e) {
            violations.push(fail(format!("side-info ({nu_v},{tau_v}) vs ({nu_e},{tau_e})")));
        }

        // explicit code
        let nt = solvers::supergraph_nu_tau(gc, limits).map_err(|e| fail(e.to_string()))?;
        let code = codes::cyclic_code(gc, &nt.packing, 2).map_err(|e| fail(e.to_string()))?;
        let n = gc.message_count();
        if code.len() != n - nu_e {
            violations.push(fail(format!("code length {} != {}", code.len(), n - nu_e)));
        }
        if !codes::verify_code(gc, &code).map_err(|e| fail(e.to_string()))?.all_decodable() {
            violations.push(fail("cyclic code not fully decodable".into()));
        }

        // maximal packings in random orders cover every edge
        let mut cycles = graphs::enumerate_simple_cycles(&view.graph, DEFAULT_CYCLE_CAP).map_err(|e| fail(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(*seed);
        for _ in 0..5 {
            cycles.shuffle(&mut rng);
            let p = solvers::greedy_packing_in_order(&view.graph, &cycles);
            packings_checked += 1;
            if !p.covers(&view.graph) {
                violations.push(fail("a maximal packing leaves edges uncovered".into()));
            }
        }
        if !packing.covers(&view.graph) {
            violations.push(fail("maximum packing leaves edges uncovered".into()));
        }
    }
    let elapsed = start.elapsed();
    ensure(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} instances, {} maximal packings, zero violations, {elapsed:.2?}",
        instances.len(),
        packings_checked + instances.len()
    ))
}

fn criterion_5(instances: &[(u64, DemandSupergraph)]) -> Check {
    let start = Instant::now();
    let family = minors::petersen_family();
    ensure(family.len() == 7, || format!("{} family members", family.len()))?;
    ensure(family.iter().all(|g| g.edge_count() == 15), || "a member lacks 15 edges".into())?;
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            ensure(!minors::is_isomorphic(a, b), || "two members are isomorphic".into())?;
        }
    }
    let petersen = minors::petersen_graph();
    ensure(family.iter().any(|g| minors::is_isomorphic(g, &petersen)), || "Petersen graph missing".into())?;

    let ex1 = model::parse_problem(EXAMPLE1).map_err(|e| e.to_string())?;
    let ex1_und: UndirectedGraph = minors::underlying(&transforms::to_eulerian(&ex1).map_err(|e| e.to_string())?.graph)
        .map_err(|e| e.to_string())?;
    for member in &family {
        let found = minors::has_minor(&ex1_und, member, MinorLimits::default()).map_err(|e| e.to_string())?;
        ensure(!found, || "example 1 underlying graph contains a family member".into())?;
    }

    let mut certified = BTreeMap::new();
    for (seed, gc) in instances.iter().chain(std::iter::once(&(u64::MAX, ex1))) {
        let cert = minors::tightness_certificate(gc, MinorLimits::default(), SolverLimits::default())
            .map_err(|e| format!("seed {seed}: {e}"))?;
        *certified.entry(format!("{cert:?}").split(' ').next().unwrap().to_owned()).or_insert(0usize) += 1;
        if cert == TightnessCertificate::TightPetersenFree {
            let nt = solvers::supergraph_nu_tau(gc, SolverLimits::default()).map_err(|e| e.to_string())?;
            ensure(nt.nu_e == nt.tau_e, || format!("seed {seed}: Petersen-free but nu_e={} tau_e={}", nt.nu_e, nt.tau_e))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("7 members with 15 edges incl. Petersen, example 1 minor-free, certificates {certified:?}, {elapsed:.2?}"))
}

fn criterion_6(instances: &[(u64, DemandSupergraph)]) -> Check {
    let start = Instant::now();
    let mut tested = 0;
    let mut tight = 0;
    let toy = model::parse_problem("receiver 1\nside a\ndemand b\nreceiver 2\nside b\ndemand a\n").map_err(|e| e.to_string())?;
    for (seed, gc) in instances.iter().chain(std::iter::once(&(u64::MAX, toy))) {
        let si = transforms::to_side_information_graph(gc).map_err(|e| e.to_string())?;
        if si.graph.edge_count() > 24 {
            continue;
        }
        let m = codes::minrank_oracle(&si, 2, 24).map_err(|e| format!("seed {seed}: {e}"))?;
        let nt = solvers::supergraph_nu_tau(gc, SolverLimits::default()).map_err(|e| e.to_string())?;
        let n = gc.message_count();
        ensure(n - nt.tau_e <= m.value && m.value <= n - nt.nu_e, || {
            format!("seed {seed}: {} <= {} <= {} fails", n - nt.tau_e, m.value, n - nt.nu_e)
        })?;
        tested += 1;
        if nt.nu_e == nt.tau_e {
            tight += 1;
        }
    }
    ensure(tested >= 50, || format!("only {tested} oracle-sized instances"))?;
    Ok(format!("{tested} instances with <= 24 side-information edges ({tight} with equal bounds), {:.2?}", start.elapsed()))
}

fn main() -> ExitCode {
    let instances = random_instances();
    let criteria: Vec<Criterion> = vec![
        ("1 example-1 end-to-end", Box::new(criterion_1)),
        ("2 minrank oracle on example 1", Box::new(criterion_2)),
        ("3 extended example", Box::new(criterion_3)),
        ("4 random generalized-cycle properties", Box::new(|| criterion_4(&instances))),
        ("5 Petersen family and tightness", Box::new(|| criterion_5(&instances))),
        ("6 sandwich on oracle-sized instances", Box::new(|| criterion_6(&instances))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {name}: {reason}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
