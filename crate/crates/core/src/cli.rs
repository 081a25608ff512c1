//! Command-line front end.
//!
//! Exit codes: 0 success / condition holds / no certificate, 1 violation or
//! certificate found, 2 invalid input, 3 internal error. Stdout carries
//! key-value lines only; diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::format::{
    format_rational, parse_rational, read_document, write_cheg, write_sldc, Document,
};
use crate::generators::{
    hadamard_strong_ldc, hypercube_two_query_instance, planted_violation_instance,
    random_colored_hypergraph, GenConfig,
};
use crate::gf2::{check_condition_ii, enumerate_even_subgraphs, DEFAULT_MAX_EDGES};
use crate::hypergraph::validate;
use crate::ldc::{
    recovery_hypergraph, verify_strong_ldc, StrongLdcInstance, DEFAULT_EXHAUSTIVE_LIMIT,
};
use crate::signature::{
    build_signature_graph, claim22_lower_bound, exact_edge_count, sample_claim24_ratio,
};
use crate::witness::{
    find_violation, two_query_signatures, validate_certificate, FindOutcome, TwoQueryOutcome,
    WitnessConfig,
};
use crate::{ColoredHypergraph, Error, Rational, Result};

const CLAIM24_SAMPLES: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "ldc3",
    version,
    about = "Build, check and attack strong 3-query LDC hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Structural check of a .cheg file, or full verification of a .sldc file.
    Validate {
        input: PathBuf,
        /// Required matching density.
        #[arg(long, value_parser = rational_arg)]
        delta: Option<Rational>,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        exhaustive_limit: usize,
    },
    /// Decide the even-color condition by GF(2) elimination.
    Oracle {
        input: PathBuf,
        /// Cross-check against brute-force enumeration.
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
        max_edges: usize,
    },
    /// Signature graph statistics.
    Siggraph {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a certificate with rainbow trees.
    Witness {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        roots: usize,
        #[arg(long)]
        degree_threshold: Option<usize>,
        #[arg(long, value_parser = rational_arg)]
        growth: Option<Rational>,
    },
    /// Signatures on the k-dimensional hypercube with edges colored by direction.
    Demo2q {
        #[arg(long)]
        k: usize,
    },
    /// Counts, density and degree histogram.
    Stats { input: PathBuf },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Hadamard-based strong LDC with greedy matchings.
    Hadamard {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum density to accept.
        #[arg(long, value_parser = rational_arg)]
        delta: Option<Rational>,
        /// `.sldc` writes the code, `.cheg` its recovery hypergraph.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed six-vertex instance violating the even-color condition.
    Planted {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random linear colored hypergraph with ceil(delta*n) edges per color.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Runs the CLI on `args` (including the program name) against the process
/// stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let _ = writeln!(err, "{}", line.trim());
            return 2;
        }
    };
    let mut report = String::new();
    let result = dispatch(cli.command, &mut report);
    let _ = out.write_all(report.as_bytes());
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {}", e.to_string().replace('\n', " "));
            code
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => 3,
        _ => 2,
    }
}

fn line(report: &mut String, text: impl AsRef<str>) {
    report.push_str(text.as_ref());
    report.push('\n');
}

fn dispatch(command: Command, report: &mut String) -> Result<i32> {
    match command {
        Command::Gen { kind } => generate(kind, report),
        Command::Validate {
            input,
            delta,
            exhaustive_limit,
        } => validate_cmd(&load(&input)?, delta, exhaustive_limit, report),
        Command::Oracle {
            input,
            brute_force,
            max_edges,
        } => {
            let h = hypergraph_of(load(&input)?)?;
            oracle_cmd(&h, brute_force.then_some(max_edges), report)
        }
        Command::Siggraph { input, seed } => {
            let h = hypergraph_of(load(&input)?)?;
            siggraph_cmd(&h, seed, report)
        }
        Command::Witness {
            input,
            seed,
            roots,
            degree_threshold,
            growth,
        } => {
            let mut cfg = WitnessConfig {
                degree_threshold,
                root_attempts: roots,
                seed,
                ..WitnessConfig::default()
            };
            if let Some(g) = growth {
                cfg.growth_factor = g;
            }
            cfg.check()?;
            let h = hypergraph_of(load(&input)?)?;
            witness_cmd(&h, &cfg, report)
        }
        Command::Demo2q { k } => demo2q_cmd(k, report),
        Command::Stats { input } => {
            let h = hypergraph_of(load(&input)?)?;
            stats_cmd(&h, report)
        }
    }
}

fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    read_document(&text)
}

fn hypergraph_of(doc: Document) -> Result<ColoredHypergraph> {
    match doc {
        Document::Cheg(h) => Ok(h),
        Document::Sldc(inst) => recovery_hypergraph(&inst),
    }
}

fn wants_cheg(path: &Path) -> bool {
    path.extension().is_some_and(|ext| ext == "cheg")
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so a failure never leaves a partial file behind.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, document: String, report: &mut String) -> Result<()> {
    match out {
        Some(path) => {
            write_atomic(path, &document)?;
            line(report, format!("out {}", path.display()));
        }
        None => report.push_str(&document),
    }
    Ok(())
}

fn summary(h: &ColoredHypergraph, report: &mut String) {
    line(report, format!("n {}", h.n()));
    line(report, format!("k {}", h.k()));
    line(report, format!("m {}", h.num_edges()));
    line(report, format!("delta {}", format_rational(density(h))));
}

/// Smallest color class size over `n`.
fn density(h: &ColoredHypergraph) -> Rational {
    let min = h.color_class_sizes().into_iter().min().unwrap_or(0);
    if h.n() == 0 {
        return Rational::from_integer(0);
    }
    Rational::new(min as u64, h.n() as u64)
}

fn generate(kind: GenKind, report: &mut String) -> Result<i32> {
    match kind {
        GenKind::Hadamard {
            k,
            seed,
            delta,
            out,
        } => {
            line(report, format!("seed {seed}"));
            let cfg = GenConfig {
                seed,
                target_delta: delta,
                ..GenConfig::default()
            };
            let inst = hadamard_strong_ldc(k, &cfg)?;
            let h = recovery_hypergraph(&inst)?;
            let document = match &out {
                Some(p) if wants_cheg(p) => write_cheg(&h),
                _ => write_sldc(&inst),
            };
            if out.is_some() {
                summary(&h, report);
            }
            emit(out.as_deref(), document, report)?;
        }
        GenKind::Planted { out } => {
            let h = planted_violation_instance();
            cheg_only(out.as_deref())?;
            if out.is_some() {
                summary(&h, report);
            }
            emit(out.as_deref(), write_cheg(&h), report)?;
        }
        GenKind::Random {
            n,
            k,
            delta,
            seed,
            out,
        } => {
            cheg_only(out.as_deref())?;
            line(report, format!("seed {seed}"));
            let h = random_colored_hypergraph(n, k, delta, &GenConfig::with_seed(seed))?;
            if out.is_some() {
                summary(&h, report);
            }
            emit(out.as_deref(), write_cheg(&h), report)?;
        }
    }
    Ok(0)
}

fn cheg_only(out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) if !wants_cheg(p) => Err(Error::InvalidParameter(format!(
            "{} has no code; use a .cheg output",
            p.display()
        ))),
        _ => Ok(()),
    }
}

fn validate_cmd(
    doc: &Document,
    delta: Option<Rational>,
    exhaustive_limit: usize,
    report: &mut String,
) -> Result<i32> {
    match doc {
        Document::Cheg(h) => {
            let r = validate(h, delta);
            line(report, format!("linear {}", r.linear));
            line(report, format!("matchings_ok {}", r.matchings_ok));
            line(report, format!("min_matching_size {}", r.min_matching_size));
            line(
                report,
                format!("delta {}", format_rational(r.achieved_delta)),
            );
            for v in &r.violations {
                let edges: Vec<String> = v.edges.iter().map(usize::to_string).collect();
                line(
                    report,
                    format!("violation {:?} edges={}", v.kind, edges.join(",")),
                );
            }
            line(
                report,
                if r.is_valid() {
                    "valid ok"
                } else {
                    "valid FAIL"
                },
            );
            Ok(i32::from(!r.is_valid()))
        }
        Document::Sldc(inst) => validate_sldc(inst, delta, exhaustive_limit, report),
    }
}

fn validate_sldc(
    inst: &StrongLdcInstance,
    delta: Option<Rational>,
    exhaustive_limit: usize,
    report: &mut String,
) -> Result<i32> {
    let r = verify_strong_ldc(inst, exhaustive_limit);
    let flag = |b: bool| if b { "ok" } else { "FAIL" };
    line(report, format!("structural {}", flag(r.structural_ok)));
    line(report, format!("algebraic {}", flag(r.algebraic_ok)));
    line(
        report,
        format!("exhaustive {}", r.exhaustive_ok.map_or("skipped", flag)),
    );
    line(report, format!("paths_agree {}", flag(r.paths_agree)));
    line(
        report,
        format!("delta {}", format_rational(r.achieved_delta)),
    );
    for f in &r.failures {
        line(
            report,
            format!(
                "failure color={} index={} triple={:?}",
                f.color, f.index, f.triple
            ),
        );
    }
    let density_ok = delta.is_none_or(|d| r.achieved_delta >= d);
    if !density_ok {
        line(report, "density FAIL");
    }
    let ok = r.passed() && density_ok;
    line(report, if ok { "valid ok" } else { "valid FAIL" });
    Ok(i32::from(!ok))
}

fn oracle_cmd(
    h: &ColoredHypergraph,
    brute_force: Option<usize>,
    report: &mut String,
) -> Result<i32> {
    let verdict = check_condition_ii(h);
    if let Some(max_edges) = brute_force {
        let violated = enumerate_even_subgraphs(h, max_edges)?.any(|subset| {
            let mut counts = vec![0u32; h.k()];
            for e in subset {
                counts[h.edge(e).color() as usize] += 1;
            }
            counts.iter().any(|c| c % 2 == 1)
        });
        if violated == verdict.holds {
            return Err(Error::Internal(
                "elimination and enumeration disagree".into(),
            ));
        }
        line(report, "brute_force agree");
    }
    match (verdict.violating_color, verdict.witness) {
        (Some(color), Some(w)) => {
            line(report, format!("violation color={color}"));
            line(report, format!("edges {}", join(&w.support())));
            Ok(1)
        }
        _ => {
            line(report, "holds");
            Ok(0)
        }
    }
}

fn join(items: &[usize]) -> String {
    items
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn siggraph_cmd(h: &ColoredHypergraph, seed: u64, report: &mut String) -> Result<i32> {
    line(report, format!("seed {seed}"));
    let g = build_signature_graph(h)?;
    line(report, format!("sig_vertices {}", g.num_vertices()));
    line(report, format!("sig_edges {}", g.num_edges()));
    let identity = g.num_edges() as u64 == exact_edge_count(h);
    line(
        report,
        format!("exact_identity {}", if identity { "ok" } else { "FAIL" }),
    );
    let ratio = sample_claim24_ratio(&g, CLAIM24_SAMPLES, seed)?;
    line(
        report,
        format!("claim24_max_ratio {}", format_rational(ratio)),
    );
    if !identity {
        return Err(Error::Internal(
            "signature graph edge count differs from the cherry count".into(),
        ));
    }
    Ok(0)
}

fn witness_cmd(h: &ColoredHypergraph, cfg: &WitnessConfig, report: &mut String) -> Result<i32> {
    line(report, format!("seed {}", cfg.seed));
    match find_violation(h, cfg)? {
        FindOutcome::Found(cert) => {
            line(report, format!("certificate color={}", cert.odd_color));
            line(report, format!("edges {}", join(&cert.edge_indices())));
            if !validate_certificate(h, &cert)? {
                return Err(Error::Internal("certificate failed validation".into()));
            }
            line(report, "verified ok");
            Ok(1)
        }
        FindOutcome::NotFound {
            roots_tried,
            depth_max,
        } => {
            line(
                report,
                format!("not-found roots={roots_tried} depth_max={depth_max}"),
            );
            Ok(0)
        }
    }
}

fn demo2q_cmd(k: usize, report: &mut String) -> Result<i32> {
    let g = hypercube_two_query_instance(k)?;
    line(report, format!("k {k}"));
    line(report, format!("vertices {}", g.n));
    line(report, format!("edges {}", g.edges.len()));
    match two_query_signatures(&g, 0)? {
        TwoQueryOutcome::Consistent { distinct, .. } => {
            line(report, format!("distinct_signatures {distinct}"));
            line(report, "consistent ok");
            Ok(0)
        }
        TwoQueryOutcome::Inconsistent { cycle, odd_colors } => {
            line(report, format!("inconsistent cycle={}", join(&cycle)));
            let colors: Vec<usize> = odd_colors.iter().map(|&c| c as usize).collect();
            line(report, format!("odd_colors {}", join(&colors)));
            Ok(1)
        }
    }
}

fn stats_cmd(h: &ColoredHypergraph, report: &mut String) -> Result<i32> {
    summary(h, report);
    let mut histogram = std::collections::BTreeMap::new();
    for d in h.degrees() {
        *histogram.entry(d).or_insert(0usize) += 1;
    }
    for (d, count) in histogram {
        line(report, format!("degree {d} {count}"));
    }
    line(report, format!("cherry_edges {}", exact_edge_count(h)));
    let gamma = density(h);
    if gamma * Rational::from_integer(h.k() as u64) >= Rational::from_integer(1) {
        line(
            report,
            format!(
                "claim22_bound {}",
                claim22_lower_bound(h.n(), h.k(), gamma)?
            ),
        );
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(
            std::iter::once("ldc3").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_flag_is_invalid_input() {
        let (code, out, err) = run_capture(&["stats", "x.cheg", "--bogus"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn missing_file_is_invalid_input() {
        let (code, _, err) = run_capture(&["oracle", "/nonexistent/missing.cheg"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn planted_to_stdout() {
        let (code, out, _) = run_capture(&["gen", "planted"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("cheg 1\n"));
    }

    #[test]
    fn demo_reports_all_signatures() {
        let (code, out, _) = run_capture(&["demo2q", "--k", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("distinct_signatures 32\n"));
    }

    #[test]
    fn planted_needs_cheg_output() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.sldc");
        let (code, _, _) = run_capture(&["gen", "planted", "--out", path.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(!path.exists());
    }
}
