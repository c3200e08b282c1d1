//! Command-line front end: `color`, `verify`, `density` and `bench`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::driver::{color_graph, verify, InitialK, RunConfig, RunError};
use crate::error::{Error, Result};
use crate::graph::{parse_graph, Multigraph};
use crate::io::{certificate_to_json, parse_coloring, write_coloring};
use crate::oracle::{gamma_bruteforce, DEFAULT_GAMMA_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "edgecolor", version, about = "Edge-color loopless multigraphs with max(Δ+1, Γ) colors")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Color a graph and write the coloring.
    Color {
        graph: PathBuf,
        /// Start from K colors instead of Δ+1.
        #[arg(long = "colors", value_name = "K")]
        colors: Option<usize>,
        /// Fail with exit status 2 instead of growing the palette.
        #[arg(long)]
        no_escalate: bool,
        /// Process edges in an order permuted by this seed.
        #[arg(long, value_name = "S")]
        shuffle: Option<u64>,
        /// Write the engine trace here.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Write the coloring here instead of standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Write density certificates here, one JSON object per line.
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
        /// Transformation budget multiplier C in C·|E|·|V|·Δ⁵.
        #[arg(long, default_value_t = 10.0)]
        budget: f64,
    },
    /// Check that a coloring file is a proper total coloring of a graph.
    Verify { graph: PathBuf, coloring: PathBuf },
    /// Print the exact density Γ and a set attaining it.
    Density {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GAMMA_LIMIT)]
        limit: usize,
    },
    /// Color every graph file in a directory and print one JSON line per instance.
    Bench {
        dir: PathBuf,
        /// Largest vertex count for the exact density column.
        #[arg(long, default_value_t = DEFAULT_GAMMA_LIMIT)]
        gamma_limit: usize,
    },
}

/// One instance of a `bench` run.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub k_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<usize>,
    pub wall_ms: f64,
    pub swaps: usize,
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return if code == 0 { EXIT_OK } else { EXIT_ERROR };
        }
    };
    let res = match cli.cmd {
        Command::Color { graph, colors, no_escalate, shuffle, trace, out: dest, certificate, budget } => {
            let cfg = RunConfig {
                initial_k: colors.map_or(InitialK::Auto, InitialK::Fixed),
                escalate: !no_escalate,
                budget_multiplier: budget,
                trace: trace.is_some(),
                shuffle,
            };
            cmd_color(&graph, &cfg, trace.as_deref(), dest.as_deref(), certificate.as_deref(), out, err)
        }
        Command::Verify { graph, coloring } => cmd_verify(&graph, &coloring, out),
        Command::Density { graph, limit } => cmd_density(&graph, limit, out),
        Command::Bench { dir, gamma_limit } => cmd_bench(&dir, gamma_limit, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read_graph(path: &Path) -> Result<Multigraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn cmd_color(
    graph: &Path,
    cfg: &RunConfig,
    trace: Option<&Path>,
    dest: Option<&Path>,
    certificate: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let g = read_graph(graph)?;
    match color_graph(&g, cfg) {
        Ok(r) => {
            let text = write_coloring(r.k_used, &r.coloring.colors());
            match dest {
                Some(p) => write_file(p, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            if let Some(p) = trace {
                write_file(p, &r.trace.to_text())?;
            }
            if let Some(p) = certificate {
                let lines: String = r.certificates.iter().map(|c| certificate_to_json(c) + "\n").collect();
                write_file(p, &lines)?;
            }
            let _ = writeln!(
                err,
                "colored {} edges with k = {} ({} colors used, {} certificates, {} swaps)",
                g.edge_count(),
                r.k_used,
                r.stats.colors_used,
                r.certificates.len(),
                r.stats.swaps
            );
            Ok(EXIT_OK)
        }
        Err(RunError::Infeasible { k, certificate: cert, trace: t }) => {
            if let Some(p) = trace {
                write_file(p, &t.to_text())?;
            }
            if let (Some(p), Some(c)) = (certificate, &cert) {
                write_file(p, &(certificate_to_json(c) + "\n"))?;
            }
            let _ = writeln!(err, "{}", RunError::Infeasible { k, certificate: cert, trace: t });
            Ok(EXIT_INFEASIBLE)
        }
        Err(RunError::Failed(e)) => Err(e),
    }
}

fn cmd_verify(graph: &Path, coloring: &Path, out: &mut dyn Write) -> Result<i32> {
    let g = read_graph(graph)?;
    let text = std::fs::read_to_string(coloring).map_err(|e| Error::Io(format!("{}: {e}", coloring.display())))?;
    let file = parse_coloring(&text, g.edge_count()).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", coloring.display()) },
        other => other,
    })?;
    match verify(&g, &file.colors, file.k) {
        Ok(()) => {
            writeln!(out, "OK")?;
            Ok(EXIT_OK)
        }
        Err(v) => {
            writeln!(out, "violation: {v}")?;
            Ok(EXIT_ERROR)
        }
    }
}

fn cmd_density(graph: &Path, limit: usize, out: &mut dyn Write) -> Result<i32> {
    let g = read_graph(graph)?;
    let r = gamma_bruteforce(&g, limit)?;
    writeln!(out, "gamma {}", r.gamma)?;
    let ids: Vec<String> = r.argmax_set.iter().map(|v| (v + 1).to_string()).collect();
    writeln!(out, "set {}", ids.join(" "))?;
    Ok(EXIT_OK)
}

/// Colors one instance and measures it.
pub fn bench_record(name: &str, g: &Multigraph, gamma_limit: usize) -> Result<BenchRecord> {
    let start = Instant::now();
    let r = color_graph(g, &RunConfig::default()).map_err(|e| match e {
        RunError::Failed(e) => e,
        other => Error::EngineInvariantViolation(other.to_string()),
    })?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let gamma = if g.vertex_count() <= gamma_limit { Some(gamma_bruteforce(g, gamma_limit)?.gamma) } else { None };
    Ok(BenchRecord {
        name: name.to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        delta: g.max_degree(),
        k_used: r.k_used,
        gamma,
        wall_ms,
        swaps: r.stats.swaps,
    })
}

fn cmd_bench(dir: &Path, gamma_limit: usize, out: &mut dyn Write) -> Result<i32> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|d| d.ok().map(|d| d.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "col"))
        .collect();
    paths.sort();
    for p in paths {
        let g = read_graph(&p)?;
        let name = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let rec = bench_record(&name, &g, gamma_limit)?;
        writeln!(out, "{}", serde_json::to_string(&rec).expect("plain record serializes"))?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::write_graph;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("edgecolor").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn color_then_verify() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("tri3.col");
        std::fs::write(&g, write_graph(&fat_triangle(3))).unwrap();
        let out = dir.path().join("tri3.sol");
        let (code, _, _) = call(&["color", g.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(std::fs::read_to_string(&out).unwrap().starts_with("s 9\n"));
        let (code, text, _) = call(&["verify", g.to_str().unwrap(), out.to_str().unwrap()]);
        assert_eq!((code, text.as_str()), (0, "OK\n"));
    }

    #[test]
    fn infeasible_exit_and_certificate() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("tri3.col");
        std::fs::write(&g, write_graph(&fat_triangle(3))).unwrap();
        let cert = dir.path().join("cert.json");
        let (code, _, _) =
            call(&["color", g.to_str().unwrap(), "--colors", "8", "--no-escalate", "--certificate", cert.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert_eq!(
            std::fs::read_to_string(&cert).unwrap().trim(),
            r#"{"k_failed":8,"vertices":[1,2,3],"edge_count":9,"bound":9}"#
        );
    }

    #[test]
    fn density_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("p.col");
        std::fs::write(&g, write_graph(&petersen())).unwrap();
        let (code, text, _) = call(&["density", g.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(text.starts_with("gamma 3\nset "));
        let bad = dir.path().join("bad.col");
        std::fs::write(&bad, "p edge 2 1\ne 1 1\n").unwrap();
        let (code, _, err) = call(&["color", bad.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("line 2"), "{err}");
        assert_eq!(call(&["frobnicate"]).0, 1);
    }
}
