//! One PASS/FAIL line per acceptance criterion, followed by the numbers
//! behind it. Runs as a plain binary so every line is printed even when an
//! earlier criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use poplab::experiment::{self, ExperimentConfig, Row, SuiteProblem};
use poplab_core::correspondence::{
    build_linearization_map, enumerate_tree, same_up_to_equivalence, to_extension_oracle, tree_stats, ua_extension_oracle,
    verify_disjointness, verify_pair, verify_unambiguous, SearchTree, DEFAULT_NODE_CEILING,
};
use poplab_core::domains::fixtures::depicted_plan;
use poplab_core::domains::{d1s1_problem, fixture, suite, BlocksworldSpec, D1s1Options};
use poplab_core::linearize::equivalent;
use poplab_core::oracle::minimal_length;
use poplab_core::planners::{specialize, specialize_with, SubsetMode};
use poplab_core::search::{
    leaf_sampling_estimate, min_goals_rating, search, Heuristic, PlanSpace, Strategy, StrategyConfig,
};
use poplab_core::{Conditional, Effects, Planner, PlannerConfig, PlannerKind, Problem, Prop, PropSet, Semantics};
use rand::seq::SliceRandom;
use rand::SeedableRng;

// Pinned parameters.
const TRIALS_DFS: usize = 25;
const TRIALS_ISAMP: usize = 10;
const ISAMP_RATIO_RANGE: (f64, f64) = (0.5, 2.0);
const ESTIMATOR_RUNS: usize = 10_000;
const ESTIMATOR_TOLERANCE: f64 = 0.10;
const MIN_GOALS_GAP: f64 = 0.20;
const COST_MULTIPLIER: usize = 4;
const EXTENSION_SAMPLES: usize = 100;
const MT_DEPTH: usize = 8;
const SAMPLE_SEED: u64 = 20;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn tree(pb: &Problem, kind: PlannerKind, depth: usize) -> SearchTree {
    enumerate_tree(&Planner::new(pb, PlannerConfig::new(kind)), depth, DEFAULT_NODE_CEILING).unwrap()
}

fn oracle_len(pb: &Problem) -> usize {
    minimal_length(pb).unwrap().expect("solvable")
}

/// Blocksworld problems (2-4 blocks, seeds 0..10) and every D¹S¹ goal set
/// of size 1 to 3.
fn small_instances() -> Vec<Problem> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for seed in 0..10 {
            out.push(BlocksworldSpec::random(n, seed).unwrap().problem().unwrap());
        }
    }
    for i in 1..=15 {
        out.push(d1s1_problem(&[i], D1s1Options::default()).unwrap());
        for j in i + 1..=15 {
            out.push(d1s1_problem(&[i, j], D1s1Options::default()).unwrap());
            for k in j + 1..=15 {
                out.push(d1s1_problem(&[i, j, k], D1s1Options::default()).unwrap());
            }
        }
    }
    out
}

struct Enumerated {
    problem: Problem,
    depth: usize,
    ua: SearchTree,
    to: SearchTree,
}

fn enumerated() -> Vec<Enumerated> {
    small_instances()
        .into_iter()
        .map(|problem| {
            let depth = oracle_len(&problem);
            let ua = tree(&problem, PlannerKind::Ua, depth);
            let to = tree(&problem, PlannerKind::To, depth);
            Enumerated { problem, depth, ua, to }
        })
        .collect()
}

fn c1_tree_size(e: &[Enumerated]) -> Verdict {
    let bw = e.iter().filter(|x| x.problem.name().starts_with("bw")).count();
    let mut bad = Vec::new();
    let mut strict = 0;
    for x in e {
        let partial = !x.ua.all_totally_ordered();
        let ok = if partial { x.ua.len() < x.to.len() } else { x.ua.len() <= x.to.len() };
        if partial {
            strict += 1;
        }
        if !ok {
            bad.push(format!("{} ({} vs {})", x.problem.name(), x.ua.len(), x.to.len()));
        }
    }
    let (ua, to): (usize, usize) = e.iter().fold((0, 0), |(a, b), x| (a + x.ua.len(), b + x.to.len()));
    verdict(
        bad.is_empty() && bw >= 20,
        format!(
            "{} instances ({bw} blocksworld); {strict} with partial orders, all strict; total nodes UA {ua} / TO {to}; violations {bad:?}",
            e.len()
        ),
    )
}

fn c2_verification(e: &[Enumerated]) -> Verdict {
    let mut failed = Vec::new();
    let mut checked = 0;
    for x in e {
        let (_, v) = verify_pair(&x.problem, &x.ua, &x.to).unwrap();
        checked += v.reports.iter().map(|r| r.checked).sum::<usize>();
        if !v.passed() || v.image_total != v.to_size {
            let why: Vec<_> = v.reports.iter().filter(|r| !r.passed()).map(|r| r.check).collect();
            failed.push(format!("{}: {why:?}", x.problem.name()));
        }
    }
    verdict(failed.is_empty(), format!("{} pairs, {checked} node checks; failures {failed:?}", e.len()))
}

fn c3_unambiguity(e: &[Enumerated]) -> Verdict {
    let mut nodes = 0;
    let mut bad = Vec::new();
    let mut check = |pb: &Problem, t: &SearchTree| {
        let r = verify_unambiguous(t);
        nodes += r.checked;
        if !r.passed() {
            bad.push(format!("{} {}: {:?}", pb.name(), t.kind.name(), r.violations));
        }
    };
    for x in e {
        check(&x.problem, &x.ua);
        check(&x.problem, &tree(&x.problem, PlannerKind::Uac, x.depth));
    }
    let roles = fixture("conditional_roles").unwrap();
    for depth in 1..=4 {
        check(&roles, &tree(&roles, PlannerKind::Uac, depth));
    }
    verdict(bad.is_empty(), format!("{nodes} UA/UA-C nodes; ambiguous {bad:?}"))
}

fn c4_completeness() -> Verdict {
    let mut bad = Vec::new();
    let entries = suite::suite();
    for e in &entries {
        let pb = e.problem().unwrap();
        let len = oracle_len(&pb);
        let depths: Vec<Option<usize>> = [PlannerKind::To, PlannerKind::Ua]
            .into_iter()
            .map(|k| {
                let planner = Planner::new(&pb, PlannerConfig::new(k));
                search(&PlanSpace { planner: &planner }, &StrategyConfig::new(Strategy::Bfs, len))
                    .unwrap()
                    .solution_depth
            })
            .collect();
        if depths != [Some(len), Some(len)] || len != e.length_class {
            bad.push(format!("{} oracle {len}: {depths:?}", e.id));
        }
    }
    verdict(bad.is_empty(), format!("{} suite problems, TO and UA BFS at oracle length; mismatches {bad:?}", entries.len()))
}

fn c5_extension_lemmas() -> Verdict {
    let mut problems: Vec<Problem> = (0..10).map(|s| BlocksworldSpec::random(3, s).unwrap().problem().unwrap()).collect();
    for name in ["sussman", "insertion_gaps", "interaction", "ordering_preference"] {
        problems.push(fixture(name).unwrap());
    }
    problems.push(d1s1_problem(&[1, 2, 3], D1s1Options::default()).unwrap());
    problems.push(d1s1_problem(&[2, 5, 6], D1s1Options::default()).unwrap());
    let mut rng = rand::rngs::StdRng::seed_from_u64(SAMPLE_SEED);
    let mut result = Vec::new();
    for kind in [PlannerKind::To, PlannerKind::Ua] {
        let mut parents = Vec::new();
        for (pi, pb) in problems.iter().enumerate() {
            let t = tree(pb, kind, oracle_len(pb));
            for n in t.nodes.iter().filter(|n| !n.is_solution) {
                parents.push((pi, n.plan.clone()));
            }
        }
        let pool = parents.len();
        parents.shuffle(&mut rng);
        parents.truncate(EXTENSION_SAMPLES);
        let mut mismatches = 0;
        for (pi, plan) in &parents {
            let pb = &problems[*pi];
            let planner = Planner::new(pb, PlannerConfig::new(kind));
            let goals = planner.goals(plan).unwrap().entries;
            let sel = planner.config().goal_selection;
            let (got, want) = match kind {
                PlannerKind::To => (planner.to_children(plan, &goals), to_extension_oracle(pb, plan, sel)),
                _ => (planner.ua_children(plan, &goals), ua_extension_oracle(pb, plan, sel)),
            };
            let got: Vec<_> = got.unwrap().children.into_iter().map(|c| c.plan).collect();
            if !same_up_to_equivalence(&got, &want.unwrap()) {
                mismatches += 1;
            }
        }
        result.push((kind.name(), parents.len(), pool, mismatches));
    }
    let pass = result.iter().all(|&(_, n, _, m)| n >= EXTENSION_SAMPLES && m == 0);
    let detail = result
        .iter()
        .map(|(k, n, pool, m)| format!("{k}: {n} sampled of {pool}, {m} mismatches"))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(pass, detail)
}

fn c6_child_counts() -> Verdict {
    let gaps = fixture("insertion_gaps").unwrap();
    let p = depicted_plan("insertion_gaps", &gaps).unwrap();
    let pl = Planner::new(&gaps, PlannerConfig::new(PlannerKind::To));
    let to = pl.to_children(&p, &pl.goals(&p).unwrap().entries).unwrap().children.len();
    let inter = fixture("interaction").unwrap();
    let p = depicted_plan("interaction", &inter).unwrap();
    let pl = Planner::new(&inter, PlannerConfig::new(PlannerKind::Ua));
    let ua = pl.ua_children(&p, &pl.goals(&p).unwrap().entries).unwrap().children.len();
    verdict(to == 3 && ua == 2, format!("insertion_gaps TO children {to} (want 3); interaction UA children {ua} (want 2)"))
}

fn c7_mt_redundancy() -> Verdict {
    let pb = fixture("overlap").unwrap();
    let bfs_nodes = |kind| {
        let planner = Planner::new(&pb, PlannerConfig::new(kind));
        search(&PlanSpace { planner: &planner }, &StrategyConfig::new(Strategy::Bfs, MT_DEPTH)).unwrap().nodes_expanded
    };
    let mut table = Vec::new();
    for d in 2..=MT_DEPTH {
        table.push(format!("d{d}: {}/{}", tree(&pb, PlannerKind::Mt, d).len(), tree(&pb, PlannerKind::To, d).len()));
    }
    let (mt, to) = (bfs_nodes(PlannerKind::Mt), bfs_nodes(PlannerKind::To));
    let mt_tree = tree(&pb, PlannerKind::Mt, 4);
    let to_tree = tree(&pb, PlannerKind::To, 4);
    let overlaps = verify_disjointness(&build_linearization_map(&mt_tree, &to_tree).unwrap()).violations.len();
    verdict(
        mt > to && overlaps >= 1,
        format!(
            "BFS nodes at depth {MT_DEPTH}: MT {mt}, TO {to}; shared linearizations at depth 4: {overlaps}; MT/TO sizes {}",
            table.join(" ")
        ),
    )
}

fn class_means(rows: &[Row], strategy: Strategy, heuristic: Heuristic, f: fn(&Row) -> usize) -> Vec<(usize, f64, f64)> {
    suite::LENGTH_CLASSES
        .iter()
        .map(|&c| {
            let mean = |planner: PlannerKind| {
                let xs: Vec<f64> = rows
                    .iter()
                    .filter(|r| {
                        r.length_class == c.to_string()
                            && r.planner == planner.name()
                            && r.strategy == strategy.name()
                            && r.heuristic == heuristic.name()
                    })
                    .map(|r| f(r) as f64)
                    .collect();
                xs.iter().sum::<f64>() / xs.len() as f64
            };
            (c, mean(PlannerKind::To), mean(PlannerKind::Ua))
        })
        .collect()
}

fn c8_dfs_trend(rows: &[Row]) -> Verdict {
    let m = class_means(rows, Strategy::Dfs, Heuristic::None, |r| r.nodes_expanded);
    let unsolved = rows.iter().filter(|r| r.strategy == "dfs" && r.heuristic == "none" && !r.solved).count();
    let pass = m.iter().all(|&(_, to, ua)| ua < to) && unsolved == 0;
    let detail = m.iter().map(|(c, to, ua)| format!("len{c} TO {to:.1} UA {ua:.1}")).collect::<Vec<_>>().join("; ");
    verdict(pass, format!("mean nodes, {TRIALS_DFS} trials: {detail}; unsolved runs {unsolved}"))
}

fn c9_isamp_parity(rows: &[Row]) -> Verdict {
    let m = class_means(rows, Strategy::IterativeSampling, Heuristic::None, |r| r.leaves_visited);
    let exhausted = rows.iter().filter(|r| r.strategy == "isamp" && r.error == "iteration limit").count();
    let ratios: Vec<(usize, f64)> = m.iter().map(|&(c, to, ua)| (c, ua / to)).collect();
    let ratio_ok = ratios.iter().all(|&(_, r)| (ISAMP_RATIO_RANGE.0..=ISAMP_RATIO_RANGE.1).contains(&r));
    let (n, k_large) = (1000, 100);
    let large = leaf_sampling_estimate(n, k_large, ESTIMATOR_RUNS, SAMPLE_SEED).unwrap();
    let one = leaf_sampling_estimate(n, 1, ESTIMATOR_RUNS, SAMPLE_SEED).unwrap();
    let want_large = n as f64 / k_large as f64;
    let want_one = 0.5 * n as f64;
    let close = |got: f64, want: f64| ((got - want) / want).abs() <= ESTIMATOR_TOLERANCE;
    let est_ok = close(large, want_large) && close(one, want_one);
    let detail = ratios.iter().map(|(c, r)| format!("len{c} {r:.2}")).collect::<Vec<_>>().join(", ");
    verdict(
        ratio_ok && est_ok,
        format!(
            "UA/TO mean leaf trials ({TRIALS_ISAMP} trials): {detail}; runs at the probe limit {exhausted}; \
             estimator N={n}: k={k_large} {large:.2} vs {want_large:.2}, k=1 {one:.1} vs {want_one:.1}"
        ),
    )
}

/// Problems in a class where ranked DFS expands more nodes on average than
/// plain DFS, per planner.
fn worse_with_ranking(rows: &[Row], class: usize, planner: PlannerKind) -> Vec<String> {
    let mut ids: Vec<&str> = rows.iter().filter(|r| r.length_class == class.to_string()).map(|r| r.problem_id.as_str()).collect();
    ids.sort();
    ids.dedup();
    let mean = |id: &str, h: Heuristic| {
        let xs: Vec<f64> = rows
            .iter()
            .filter(|r| r.problem_id == id && r.planner == planner.name() && r.strategy == "dfs" && r.heuristic == h.name())
            .map(|r| r.nodes_expanded as f64)
            .collect();
        xs.iter().sum::<f64>() / xs.len() as f64
    };
    ids.into_iter()
        .filter_map(|id| {
            let (plain, ranked) = (mean(id, Heuristic::None), mean(id, Heuristic::MinGoalsRank));
            (ranked > plain).then(|| format!("{id} {plain:.0}->{ranked:.0}"))
        })
        .collect()
}

fn c10_min_goals(rows: &[Row]) -> Verdict {
    let plain = class_means(rows, Strategy::Dfs, Heuristic::None, |r| r.nodes_expanded);
    let ranked = class_means(rows, Strategy::Dfs, Heuristic::MinGoalsRank, |r| r.nodes_expanded);
    let mut pass = true;
    let mut parts = Vec::new();
    for (&(c, to, ua), &(_, to_h, ua_h)) in plain.iter().zip(&ranked) {
        let (imp_to, imp_ua) = (1.0 - to_h / to, 1.0 - ua_h / ua);
        let ok = imp_to > 0.0 && imp_ua > 0.0 && (imp_to - imp_ua).abs() <= MIN_GOALS_GAP && to_h < ua;
        pass &= ok;
        parts.push(format!("len{c} TO {:.0}% UA {:.0}% (TO+h {to_h:.1} vs UA {ua:.1})", 100.0 * imp_to, 100.0 * imp_ua));
        if !ok {
            for k in [PlannerKind::To, PlannerKind::Ua] {
                parts.push(format!("len{c} {} worse with ranking on {:?}", k.name(), worse_with_ranking(rows, c, k)));
            }
        }
    }
    verdict(pass, parts.join("; "))
}

fn c11_d1s1() -> Verdict {
    let mut unique_total = 0;
    let mut denser = 0;
    let mut sets = 0;
    let mut failures = Vec::new();
    for i in 1..=15usize {
        for j in i + 1..=15 {
            let mut goal_sets = vec![vec![i, j]];
            goal_sets.extend((j + 1..=15).map(|k| vec![i, j, k]));
            for g in goal_sets {
                sets += 1;
                let pb = d1s1_problem(&g, D1s1Options::default()).unwrap();
                let len = oracle_len(&pb);
                let (ua, to) = (tree(&pb, PlannerKind::Ua, len), tree(&pb, PlannerKind::To, len));
                let mut distinct: Vec<_> = Vec::new();
                for n in ua.solutions() {
                    if !distinct.iter().any(|p| equivalent(p, &n.plan)) {
                        distinct.push(n.plan.clone());
                    }
                }
                let unique_total_order = distinct.len() == 1 && distinct[0].is_totally_ordered();
                let (du, dt) = (tree_stats(&ua, len).solution_density, tree_stats(&to, len).solution_density);
                unique_total += unique_total_order as usize;
                denser += (du > dt) as usize;
                if !(unique_total_order && du > dt) && failures.len() < 4 {
                    failures.push(format!("{g:?}: {} solutions, density UA {du:.3} TO {dt:.3}", distinct.len()));
                }
            }
        }
    }
    verdict(
        unique_total == sets && denser == sets,
        format!(
            "{sets} goal sets: {unique_total} with one totally ordered solution, {denser} with UA density > TO; e.g. {failures:?}"
        ),
    )
}

fn c12_cost(e: &[Enumerated]) -> Verdict {
    let (mut ua4, mut ua5, mut to4, mut to5) = (0.0f64, 0.0f64, 0usize, 0.0f64);
    let mut children = 0;
    for x in e {
        for n in x.ua.nodes.iter().skip(1) {
            let edges = n.plan.n_edges() as f64;
            ua4 = ua4.max(n.step4_visits as f64 / edges);
            ua5 = ua5.max(n.step5_visits as f64 / edges);
            children += 1;
        }
        for n in x.to.nodes.iter().skip(1) {
            to4 = to4.max(n.step4_visits);
            to5 = to5.max(n.step5_visits as f64 / n.plan.n_steps() as f64);
            children += 1;
        }
    }
    let k = COST_MULTIPLIER as f64;
    verdict(
        ua4 <= k && ua5 <= k && to4 <= COST_MULTIPLIER && to5 <= k,
        format!(
            "{children} children; max UA step4/e {ua4:.2}, UA goal-update/e {ua5:.2}, TO step4 {to4}, TO goal-update/n {to5:.2} (bound {COST_MULTIPLIER})"
        ),
    )
}

fn set(xs: &[u32]) -> PropSet {
    xs.iter().map(|&i| Prop::from_index(i as usize)).collect()
}

fn cond(deps: &[u32], effect: u32) -> Conditional {
    Conditional { deps: set(deps), effect: Prop::from_index(effect as usize), marked: false }
}

fn c13_specialize() -> Verdict {
    // p=0 q=1 r=2 t=3 u=4 v=5 w=6 x=7
    let o = Effects {
        pre: set(&[0]),
        adds: set(&[1]),
        dels: set(&[0]),
        cadds: vec![cond(&[3], 4), cond(&[0, 1], 2)],
        cdels: vec![cond(&[3], 5), cond(&[1, 6], 7)],
    };
    let s = specialize(&o, &set(&[3]));
    let checks = [
        ("pre gains D", s.pre == set(&[0, 3])),
        ("adds gain enabled cadds", s.adds == set(&[1, 4])),
        ("dels gain enabled cdels", s.dels == set(&[0, 5])),
        ("cadds keep the rest with D removed", s.cadds == vec![cond(&[0, 1], 2)]),
        ("cdels keep the rest with D removed", s.cdels == vec![cond(&[1, 6], 7)]),
        ("residual depset", {
            let r = specialize(&o, &set(&[0]));
            r.cadds == vec![cond(&[3], 4), cond(&[1], 2)] && r.adds == o.adds && r.pre == set(&[0])
        }),
        ("empty D is the identity", specialize(&o, &PropSet::new()) == o),
        ("strict mode keeps equal depsets conditional", {
            let r = specialize_with(&o, &set(&[3]), SubsetMode::Strict);
            r.adds == o.adds && r.cadds.len() == 2 && r.cadds[0] == cond(&[], 4)
        }),
    ];
    let failed: Vec<_> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    verdict(failed.is_empty(), format!("{} checks; failed {failed:?}", checks.len()))
}

fn c14_h_property(e: &[Enumerated]) -> Verdict {
    let (mut pairs, mut rating_bad, mut child_bad, mut compared) = (0, 0, 0, 0);
    for x in e {
        let (map, _) = verify_pair(&x.problem, &x.ua, &x.to).unwrap();
        for (u, ts) in map.images.iter().enumerate() {
            let un = x.ua.node(u);
            let r = min_goals_rating(&un.plan, Semantics::Unambiguous).unwrap();
            let best_u = un.children.iter().map(|&c| x.ua.node(c).goals.len()).min();
            for &t in ts {
                pairs += 1;
                let tn = x.to.node(t);
                if min_goals_rating(&tn.plan, Semantics::TotalOrder).unwrap() != r {
                    rating_bad += 1;
                }
                let best_t = tn.children.iter().map(|&c| x.to.node(c).goals.len()).min();
                if let (Some(bu), Some(bt)) = (best_u, best_t) {
                    compared += 1;
                    if bu > bt {
                        child_bad += 1;
                    }
                }
            }
        }
    }
    verdict(
        rating_bad == 0 && child_bad == 0,
        format!("{pairs} (U, T) pairs: rating mismatches {rating_bad}; {compared} child comparisons, UA worse in {child_bad}"),
    )
}

fn suite_rows() -> Vec<Row> {
    let problems: Vec<SuiteProblem> = experiment::resolve_problems("suite").unwrap();
    let dfs = ExperimentConfig {
        heuristics: vec![Heuristic::None, Heuristic::MinGoalsRank],
        trials: TRIALS_DFS,
        ..Default::default()
    };
    let isamp = ExperimentConfig { strategies: vec![Strategy::IterativeSampling], trials: TRIALS_ISAMP, ..Default::default() };
    let mut rows = experiment::run(&dfs, &problems);
    rows.extend(experiment::run(&isamp, &problems));
    let summary = experiment::summarize(&rows);
    print!("{}", experiment::summary_table(&summary));
    rows
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut run = |n: usize, name: &str, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let line = format!(
            "{} criterion {n:>2} {name}: {} [{:.1}s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            t.elapsed().as_secs_f64()
        );
        println!("{line}");
        lines.push((v.pass, line));
    };
    let e = enumerated();
    run(1, "tree size", &mut || c1_tree_size(&e));
    run(2, "correspondence verification", &mut || c2_verification(&e));
    run(3, "unambiguity", &mut || c3_unambiguity(&e));
    run(4, "completeness", &mut c4_completeness);
    run(5, "extension lemmas", &mut c5_extension_lemmas);
    run(6, "depicted child counts", &mut c6_child_counts);
    run(7, "MT redundancy", &mut c7_mt_redundancy);
    let rows = catch_unwind(suite_rows).unwrap_or_default();
    run(8, "DFS trend", &mut || c8_dfs_trend(&rows));
    run(9, "iterative sampling parity", &mut || c9_isamp_parity(&rows));
    run(10, "min-goals effect", &mut || c10_min_goals(&rows));
    run(11, "D1S1", &mut c11_d1s1);
    run(12, "cost instrumentation", &mut || c12_cost(&e));
    run(13, "specialize algebra", &mut c13_specialize);
    run(14, "h-property", &mut || c14_h_property(&e));

    let passed = lines.iter().filter(|l| l.0).count();
    println!("\nacceptance summary ({:.0}s): {passed}/{} passed", start.elapsed().as_secs_f64(), lines.len());
    for (_, l) in &lines {
        println!("{}", l.split(':').next().unwrap());
    }
    if passed == lines.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
