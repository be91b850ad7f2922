//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use edgeconn_cli::bench::run_bench;
use edgeconn_cli::Cli;
use edgeconn_core::field::field_for_instance;
use edgeconn_core::graph::{gen_random, write_edge_list};
use edgeconn_core::kapc::{dense_cb, sample_factors, structured_cb, verify_woodbury_identity};
use edgeconn_core::series::{run_corpus, CorpusConfig, Identity, Tally};
use edgeconn_core::{
    all_pairs_oracle, build_gadget, max_flow, solve_apc, solve_kapc, ConnectivityMatrix, Digraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_GRAPHS: usize = 200;
const CORPUS_SEED: u64 = 0xacce97;
const SEEDS_PER_GRAPH: u64 = 3;

struct Outcome {
    passed: bool,
    detail: String,
    sub: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
            sub: Vec::new(),
        }
    }
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Case {
    g: Digraph,
    oracle: ConnectivityMatrix,
}

fn corpus() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_GRAPHS)
        .map(|_| {
            let n = rng.random_range(4..=10);
            let m = rng.random_range(0..=n * (n - 1));
            let g = gen_random(n, m, false, &mut rng).expect("m fits");
            let oracle = all_pairs_oracle(&g);
            Case { g, oracle }
        })
        .collect()
}

fn run_seed(graph: usize, seed: u64) -> u64 {
    graph as u64 * SEEDS_PER_GRAPH + seed
}

/// Failed and total runs per vertex count.
#[derive(Default)]
struct Rates(BTreeMap<usize, (usize, usize)>);

impl Rates {
    fn record(&mut self, n: usize, ok: bool) {
        let e = self.0.entry(n).or_default();
        e.0 += usize::from(!ok);
        e.1 += 1;
    }

    fn within_bound(&self) -> bool {
        self.0
            .iter()
            .all(|(&n, &(failed, runs))| failed * n <= runs)
    }

    fn failed(&self) -> usize {
        self.0.values().map(|r| r.0).sum()
    }

    fn runs(&self) -> usize {
        self.0.values().map(|r| r.1).sum()
    }

    fn summary(&self) -> String {
        let mut s = String::new();
        for (n, (failed, runs)) in &self.0 {
            let _ = write!(s, " n={n}:{failed}/{runs}");
        }
        s
    }
}

fn apc_equivalence(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let mut rates = Rates::default();
    for (i, case) in cases.iter().enumerate() {
        for seed in 0..SEEDS_PER_GRAPH {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(i, seed));
            let ok = solve_apc(&case.g, &mut rng).is_ok_and(|c| c.same_values(&case.oracle));
            rates.record(case.g.n(), ok);
        }
    }
    let elapsed = start.elapsed();
    let in_time = elapsed < Duration::from_secs(120);
    Outcome::new(
        rates.within_bound() && in_time,
        format!(
            "{} of {} runs failed, per n:{}; {:.1}s",
            rates.failed(),
            rates.runs(),
            rates.summary(),
            elapsed.as_secs_f64()
        ),
    )
}

fn kapc_equivalence(cases: &[Case]) -> Outcome {
    let mut rates = Rates::default();
    let mut agreement_runs = 0;
    let mut full_bound_mismatches = 0;
    for (i, case) in cases.iter().enumerate() {
        let n = case.g.n();
        let mut ks = vec![1, 2, 3, n - 1];
        ks.dedup();
        for seed in 0..SEEDS_PER_GRAPH {
            let mut apc_rng = ChaCha8Rng::seed_from_u64(run_seed(i, seed));
            let apc = solve_apc(&case.g, &mut apc_rng)
                .ok()
                .filter(|c| c.same_values(&case.oracle));
            for &k in &ks {
                let mut rng = ChaCha8Rng::seed_from_u64(run_seed(i, seed));
                let result = solve_kapc(&case.g, k, &mut rng);
                let ok = result
                    .as_ref()
                    .is_ok_and(|c| c.same_values(&case.oracle.capped(k)));
                rates.record(n, ok);
                if k == n - 1 {
                    if let (Some(apc), Ok(kapc)) = (&apc, &result) {
                        agreement_runs += 1;
                        if !apc.mismatches(kapc).is_empty() {
                            full_bound_mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    Outcome::new(
        rates.within_bound() && full_bound_mismatches == 0,
        format!(
            "{} of {} runs failed, per n:{}; k=n-1 differs from apc on {} of {} agreement runs",
            rates.failed(),
            rates.runs(),
            rates.summary(),
            full_bound_mismatches,
            agreement_runs
        ),
    )
}

fn gadget_flows(cases: &[Case]) -> Outcome {
    let mut pairs = 0;
    let mut wrong = 0;
    for case in cases {
        let n = case.g.n();
        for k in 1..=3 {
            let gadget = build_gadget(&case.g, k).expect("k is positive");
            for s in 0..n {
                for t in (0..n).filter(|&t| t != s) {
                    pairs += 1;
                    if max_flow(&gadget.graph, s, t) != case.oracle.get(s, t).min(k) {
                        wrong += 1;
                    }
                }
            }
        }
    }
    Outcome::new(wrong == 0, format!("{wrong} of {pairs} pairs differ"))
}

fn line(label: &str, t: Tally) -> String {
    format!("{label} {} passed, {} failed", t.passed, t.failed)
}

fn enumeration_identities() -> Outcome {
    let start = Instant::now();
    let report = run_corpus(&CorpusConfig::default());
    let elapsed = start.elapsed();
    let tally = |table: &BTreeMap<Identity, Tally>, id| table.get(&id).copied().unwrap_or_default();
    let sub_line = |tag: &str, ids: &[Identity]| {
        let ok = ids.iter().all(|&id| report.failed(Some(id)) == 0);
        let parts: Vec<String> = ids
            .iter()
            .map(|&id| {
                format!(
                    "{id:?}: {}; {}",
                    line("acyclic", tally(&report.acyclic, id)),
                    line("cyclic", tally(&report.cyclic, id))
                )
            })
            .collect();
        format!(
            "{} 4{tag} {}",
            if ok { "PASS" } else { "FAIL" },
            parts.join(" | ")
        )
    };
    let mut outcome = Outcome::new(
        report.passed() && elapsed < Duration::from_secs(300),
        format!(
            "{} graphs ({} acyclic), {} failed checks; {:.1}s",
            report.graphs,
            report.dags,
            report.failed(None),
            elapsed.as_secs_f64()
        ),
    );
    outcome.sub = vec![
        sub_line("a", &[Identity::Inverse, Identity::WalkSums]),
        sub_line("b", &[Identity::DisjointMinor]),
        sub_line("c", &[Identity::Cancellation]),
        sub_line("d", &[Identity::DagRank]),
    ];
    outcome.sub.extend(
        report
            .examples
            .iter()
            .map(|e| format!("  failing instance: {e}")),
    );
    outcome
}

fn woodbury_instances() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x800db);
    let (mut identity_fails, mut cb_fails) = (0, 0);
    let instances = 50;
    for _ in 0..instances {
        let n = rng.random_range(2..=8);
        let m = rng.random_range(0..=n * (n - 1));
        let k = rng.random_range(1..=3);
        let g = gen_random(n, m, false, &mut rng).expect("m fits");
        let gadget = build_gadget(&g, k).expect("k is positive");
        let field = field_for_instance(n).expect("supported size");
        let factors = sample_factors(&gadget, field, &mut rng).expect("field meets the bound");
        if !verify_woodbury_identity(&factors).unwrap_or(false) {
            identity_fails += 1;
        }
        if structured_cb(&gadget, &factors) != dense_cb(&factors) {
            cb_fails += 1;
        }
    }
    Outcome::new(
        identity_fails == 0 && cb_fails == 0,
        format!("{instances} instances; woodbury failed {identity_fails}, structured CB differs {cb_fails}"),
    )
}

fn structural_cost() -> Outcome {
    let rows = match run_bench(&[(60, 600)], &[2], 0, false) {
        Ok(rows) => rows,
        Err(e) => return Outcome::new(false, format!("bench failed: {e}")),
    };
    let find = |algo: &str| rows.iter().find(|r| r.algo == algo).expect("bench row");
    let (apc, kapc) = (find("apc"), find("kapc"));
    let dims_ok = apc.invert_dim == Some(600) && kapc.invert_dim == Some(360);
    let faster = kapc.invert < apc.invert;
    Outcome::new(
        dims_ok && faster,
        format!(
            "invert dim apc {:?} kapc {:?}; invert apc {:.1}ms kapc {:.1}ms",
            apc.invert_dim,
            kapc.invert_dim,
            apc.invert.as_secs_f64() * 1e3,
            kapc.invert.as_secs_f64() * 1e3
        ),
    )
}

fn cli_json(args: &[String]) -> Result<Vec<u8>, String> {
    let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    edgeconn_cli::run(cli, &mut out, &mut std::io::sink()).map_err(|e| e.to_string())?;
    Ok(out)
}

fn reproducibility(dir: &Path) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut inputs = Vec::new();
    for (i, (n, m)) in [(6, 14), (10, 40), (12, 60)].into_iter().enumerate() {
        let g = gen_random(n, m, false, &mut rng).expect("m fits");
        let path = dir.join(format!("g{i}.txt"));
        let file = std::fs::File::create(&path).expect("temp file");
        write_edge_list(&g, file).expect("write edge list");
        inputs.push(path.display().to_string());
    }
    let mut invocations = Vec::new();
    for input in &inputs {
        for seed in ["0", "7", "123456789"] {
            for q in [None, Some("16"), Some("32"), Some("64")] {
                let mut base = vec!["edgeconn".to_string()];
                let tail = |mut v: Vec<String>| {
                    v.extend(["--seed".to_string(), seed.to_string()]);
                    if let Some(q) = q {
                        v.extend(["--q-override".to_string(), q.to_string()]);
                    }
                    v
                };
                base.extend(["apc".to_string(), input.clone()]);
                invocations.push(tail(base.clone()));
                for k in ["1", "3"] {
                    let v = vec![
                        "edgeconn".into(),
                        "kapc".into(),
                        input.clone(),
                        "--k".into(),
                        k.into(),
                    ];
                    invocations.push(tail(v));
                }
            }
        }
    }
    let mut differing = 0;
    let mut errors = 0;
    for args in &invocations {
        match (cli_json(args), cli_json(args)) {
            (Ok(a), Ok(b)) => differing += usize::from(a != b),
            _ => errors += 1,
        }
    }
    Outcome::new(
        differing == 0 && errors == 0,
        format!(
            "{} invocations run twice; {differing} differ, {errors} errored",
            invocations.len()
        ),
    )
}

fn main() -> ExitCode {
    let cases = corpus();
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        (
            "1 apc matches the max-flow oracle",
            Box::new(|| apc_equivalence(&cases)),
        ),
        (
            "2 kapc matches the capped oracle",
            Box::new(|| kapc_equivalence(&cases)),
        ),
        (
            "3 gadget preserves capped connectivity",
            Box::new(|| gadget_flows(&cases)),
        ),
        ("4 enumeration identities", Box::new(enumeration_identities)),
        (
            "5 woodbury identity and structured CB",
            Box::new(woodbury_instances),
        ),
        (
            "6 kapc inverts a smaller matrix faster",
            Box::new(structural_cost),
        ),
        (
            "7 byte-identical JSON across runs",
            Box::new(|| reproducibility(dir.path())),
        ),
    ];
    let mut all_passed = true;
    for (name, check) in criteria {
        let outcome = check();
        all_passed &= outcome.passed;
        println!(
            "{} {name}: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
        for sub in &outcome.sub {
            println!("    {sub}");
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
