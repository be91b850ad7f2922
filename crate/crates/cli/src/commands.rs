//! Subcommand dispatch. Results go to `out`; diagnostics to standard error.

use std::fs::File;
use std::io::{BufWriter, Write};

use edgeconn_core::graph::{gen_random, write_edge_list};
use edgeconn_core::series::{run_corpus, CorpusConfig, Identity};
use edgeconn_core::{
    all_pairs_oracle, solve_apc_with, solve_kapc_with, FieldChoice, FieldConfig, SolveOptions,
    SolveReport,
};

use crate::args::{Cli, Command, SeriesArgs, SolveArgs, VerifyArgs};
use crate::bench::{parse_ks, parse_sizes, run_bench, CSV_HEADER};
use crate::output::{render, OracleOutput, SolveOutput};
use crate::verify::verify_graphs;
use crate::{load_graph, seeded_rng, CliError};

/// Runs one subcommand. Results go to `out`, warnings and timings to `diag`.
pub fn run(cli: Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Apc(args) => solve(&args, None, false, out, diag),
        Command::Kapc {
            solve: args,
            k,
            dense_cb,
        } => solve(&args, Some(k), dense_cb, out, diag),
        Command::Oracle { input, format } => {
            let g = load_graph(&input)?;
            let table = all_pairs_oracle(&g);
            let report = OracleOutput {
                n: g.n(),
                m: g.m(),
                connectivity: table.rows(),
            };
            out.write_all(render(&report, &table, format).as_bytes())?;
            Ok(())
        }
        Command::Verify(args) => verify(&args, out),
        Command::Gen {
            n,
            m,
            acyclic,
            seed,
            output,
        } => {
            let g = gen_random(n, m, acyclic, &mut seeded_rng(seed))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            match output {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    write_edge_list(&g, &mut w)?;
                    w.flush()?;
                }
                None => write_edge_list(&g, &mut *out)?,
            }
            Ok(())
        }
        Command::Bench {
            sizes,
            k,
            seed,
            no_oracle,
        } => {
            let rows = run_bench(&parse_sizes(&sizes)?, &parse_ks(&k)?, seed, !no_oracle)?;
            writeln!(out, "{CSV_HEADER}")?;
            for r in rows {
                writeln!(out, "{}", r.csv())?;
            }
            Ok(())
        }
        Command::SeriesCheck(args) => series_check(&args, out),
    }
}

fn field_choice(q_override: Option<&str>) -> Result<FieldChoice, CliError> {
    match q_override {
        None => Ok(FieldChoice::Auto),
        Some(q) => {
            let q: u32 = q
                .parse()
                .map_err(|_| CliError::Usage(format!("bad width {q}")))?;
            let field = FieldConfig::for_width(q).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(FieldChoice::Fixed(field))
        }
    }
}

fn solve(
    args: &SolveArgs,
    k: Option<usize>,
    dense_cb: bool,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<(), CliError> {
    let g = load_graph(&args.input)?;
    let opts = SolveOptions {
        field: field_choice(args.q_override.as_deref())?,
        max_retries: args.max_retries,
        dense_cb,
    };
    let mut rng = seeded_rng(args.seed);
    let report: SolveReport = match k {
        Some(k) => solve_kapc_with(&g, k, &opts, &mut rng)?,
        None => solve_apc_with(&g, &opts, &mut rng)?,
    };
    if report.unsafe_field {
        writeln!(
            diag,
            "warning: GF(2^{}) is below the size bound for n = {}",
            report.q,
            g.n()
        )?;
    }
    if args.timings {
        let t = report.timings;
        writeln!(
            diag,
            "build {:?}  invert {:?} (dim {})  ranks {:?}  total {:?}",
            t.build,
            t.invert,
            report.invert_dim,
            t.ranks,
            t.total()
        )?;
    }
    let output = SolveOutput::new(&g, k, args.seed, &report);
    out.write_all(render(&output, &report.connectivity, args.format).as_bytes())?;
    Ok(())
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let graphs = match (&args.input, &args.random) {
        (Some(path), _) => vec![load_graph(path)?],
        (None, Some(spec)) => {
            let [n, m, count] = spec[..] else {
                return Err(CliError::Usage("--random takes N M COUNT".into()));
            };
            let mut rng = seeded_rng(args.seed);
            (0..count)
                .map(|_| gen_random(n, m, false, &mut rng))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, None) => return Err(CliError::Usage("give an input file or --random".into())),
    };
    let opts = SolveOptions {
        field: field_choice(args.q_override.as_deref())?,
        ..Default::default()
    };
    let report = verify_graphs(&graphs, args.k, args.seeds, args.seed, &opts)?;
    writeln!(
        out,
        "{}",
        serde_json::to_string(&report).expect("plain data serializes")
    )?;
    Ok(())
}

fn series_check(args: &SeriesArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = CorpusConfig {
        exhaustive_n: args.exhaustive_n,
        random_graphs: args.random,
        max_degree: args.max_degree,
        seed: args.seed,
        ..Default::default()
    };
    let report = run_corpus(&config);
    writeln!(out, "graphs {} (acyclic {})", report.graphs, report.dags)?;
    writeln!(
        out,
        "{:<14} {:>12} {:>12} {:>12} {:>12}",
        "identity", "dag pass", "dag fail", "cyclic pass", "cyclic fail"
    )?;
    for id in Identity::ALL {
        let a = report.acyclic.get(&id).copied().unwrap_or_default();
        let c = report.cyclic.get(&id).copied().unwrap_or_default();
        writeln!(
            out,
            "{:<14} {:>12} {:>12} {:>12} {:>12}",
            format!("{id:?}"),
            a.passed,
            a.failed,
            c.passed,
            c.failed
        )?;
    }
    for e in &report.examples {
        writeln!(out, "  {e}")?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(format!(
            "{} identity checks failed",
            report.failed(None)
        )))
    }
}
