//! The `trkr` command line: argument parsing, dispatch and report output.

use std::ffi::OsString;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use trkr::braid::{transverse_move, BraidWord, Move, ResolvedWord};
use trkr::homology::{
    cone_pi0_check, default_kmax, sln_homology, stab_check, total_homology, unknot_homology,
    HomologyOptions, HomologyReport, SlnDims, SCHEMA_VERSION,
};
use trkr::moyoracle::{compare_resolved, KWindow, ModuleSeries, Oracle, Variant};

/// Exit code for a completed run whose audits all pass.
pub const EXIT_OK: i32 = 0;
/// Exit code for bad arguments, unparsable input or a failed computation.
pub const EXIT_USAGE: i32 = 1;
/// Exit code when a computed audit or check fails.
pub const EXIT_AUDIT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "trkr",
    version,
    about = "Exact transverse sl(N) Khovanov-Rozansky homology of closed braids"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Print the elapsed time on stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Debug, Clone)]
struct Window {
    /// Top x-degree (default 2N + 2·crossings + 5).
    #[arg(long, allow_negative_numbers = true)]
    kmax: Option<i32>,
    /// Top a-degree (default writhe + 3).
    #[arg(long, allow_negative_numbers = true)]
    jmax: Option<i32>,
    /// Keep every internal mark variable instead of eliminating them.
    #[arg(long)]
    no_eliminate: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute 𝓗_N of a closed braid with its module structure and audits.
    Homology {
        #[arg(long)]
        braid: String,
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[command(flatten)]
        window: Window,
        /// Also re-run the chain-level checks on the complex.
        #[arg(long)]
        check: bool,
    },
    /// Compute the sl(N) homology (a = 1) of a closed braid.
    Sln {
        #[arg(long)]
        braid: String,
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[command(flatten)]
        window: Window,
    },
    /// Reduce a closed resolved braid to circles and print its series.
    Oracle {
        /// Resolved word, e.g. "b=3; t1 t2 t1".
        #[arg(long)]
        word: String,
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[arg(long, value_enum, default_value = "triple")]
        variant: VariantArg,
        /// Also compute H(·, d_mf) directly and compare up to --kmax.
        #[arg(long)]
        compare: bool,
        /// Top x-degree of the printed and compared window
        /// (default: 2N + 4 above the lowest generator).
        #[arg(long, allow_negative_numbers = true)]
        kmax: Option<i32>,
        /// Include the rewrite trace.
        #[arg(long)]
        trace: bool,
    },
    /// Decide whether two braids have equal 𝓗_N within a common window.
    Compare {
        #[arg(long)]
        braid_a: String,
        #[arg(long)]
        braid_b: String,
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[command(flatten)]
        window: Window,
    },
    /// Check 𝓗_N(U_m) against the closed formulas for the transverse unknots.
    UnknotCheck {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        kmax: Option<i32>,
    },
    /// Check the stabilization exact sequences relating B and its negative stabilization.
    StabCheck {
        #[arg(long)]
        braid: String,
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        /// Top x-degree for the stabilized braid.
        #[arg(long, allow_negative_numbers = true)]
        kmax: Option<i32>,
    },
    /// Compare cone(π₀){−2,0} with the negative stabilization.
    ConeCheck {
        #[arg(long)]
        braid: String,
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        kmax: Option<i32>,
    },
    /// Apply transverse Markov moves to a braid word.
    Moves {
        #[arg(long)]
        braid: String,
        /// stab-pos, destab-pos, stab-neg, conj:<η>, rel:<site>, insert:<site>:<letter>;
        /// applied in order.
        #[arg(long = "move", required = true)]
        moves: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Triple,
    Sln,
}

/// What a run produced: exit code and the bytes for stdout and stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

/// A finished command: JSON body, text rendering and whether audits passed.
struct Done {
    json: Value,
    text: String,
    pass: bool,
}

fn diagnostic(kind: &str, message: &str) -> String {
    let v = json!({"schema_version": SCHEMA_VERSION, "error": {"kind": kind, "message": message}});
    format!(
        "{}\n",
        serde_json::to_string_pretty(&v).expect("serializable")
    )
}

/// Runs one command line (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    // Program name excluded so the echo does not depend on the install path.
    let echo: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            return Outcome {
                code: EXIT_OK,
                stdout: e.to_string(),
                ..Outcome::default()
            }
        }
        Err(e) => {
            return Outcome {
                code: EXIT_USAGE,
                stderr: diagnostic("usage", e.to_string().trim()),
                ..Outcome::default()
            }
        }
    };
    if let Err(Usage(msg)) = configure_threads() {
        return Outcome {
            code: EXIT_USAGE,
            stderr: diagnostic("usage", &msg),
            ..Outcome::default()
        };
    }
    let start = Instant::now();
    let result = dispatch(&cli.command, json!(echo));
    let mut out = match result {
        Ok(done) => {
            let stdout = match cli.format {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&done.json).expect("serializable")
                ),
                Format::Text => done.text,
            };
            Outcome {
                code: if done.pass { EXIT_OK } else { EXIT_AUDIT },
                stdout,
                stderr: String::new(),
            }
        }
        Err(Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stderr: diagnostic("input", &msg),
            ..Outcome::default()
        },
    };
    if cli.timing {
        out.stderr
            .push_str(&format!("elapsed: {:.3}s\n", start.elapsed().as_secs_f64()));
    }
    out
}

/// Sizes the global thread pool from `TRKR_THREADS`, if set.
fn configure_threads() -> Result<(), Usage> {
    let Ok(v) = std::env::var("TRKR_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Usage(format!("TRKR_THREADS={v:?} is not a thread count")))?;
    if n == 0 {
        return Err(Usage("TRKR_THREADS must be at least 1".into()));
    }
    // A second call in one process (tests) keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn parse_braid(s: &str) -> Result<BraidWord, Usage> {
    s.parse().map_err(|e| Usage(format!("braid {s:?}: {e}")))
}

fn check_n(n: u32) -> Result<(), Usage> {
    if n == 0 {
        return Err(Usage("N must be at least 1".into()));
    }
    Ok(())
}

fn homology_options(w: &Window, check: bool) -> HomologyOptions {
    HomologyOptions {
        kmax: w.kmax,
        jmax: w.jmax,
        eliminate: !w.no_eliminate,
        check_complex: check,
    }
}

fn dispatch(cmd: &Command, echo: Value) -> Result<Done, Usage> {
    let mut done = match cmd {
        Command::Homology {
            braid,
            n,
            window,
            check,
        } => {
            check_n(*n)?;
            let b = parse_braid(braid)?;
            let r = total_homology(&b, *n, homology_options(window, *check))?;
            let pass = r.audits.all_pass();
            Done {
                json: r.to_json(),
                text: report_text(&r),
                pass,
            }
        }
        Command::Sln { braid, n, window } => {
            check_n(*n)?;
            let b = parse_braid(braid)?;
            let kmax = window.kmax.unwrap_or_else(|| default_kmax(&b, *n));
            let dims = sln_homology(&b, *n, kmax, !window.no_eliminate)?;
            Done {
                json: json!({"braid": b.to_string(), "N": n, "kmax": kmax, "sln": sln_json(&dims)}),
                text: format!("braid: {b}\nN={n} kmax={kmax}\n{}", sln_text(&dims)),
                pass: true,
            }
        }
        Command::Oracle {
            word,
            n,
            variant,
            compare,
            kmax,
            trace,
        } => {
            check_n(*n)?;
            let g: ResolvedWord = word
                .parse()
                .map_err(|e| Usage(format!("word {word:?}: {e}")))?;
            if !g.closed {
                return Err(Usage("the oracle needs a closed resolved braid".into()));
            }
            oracle(&g, *n, *variant, *compare, *kmax, *trace)?
        }
        Command::Compare {
            braid_a,
            braid_b,
            n,
            window,
        } => {
            check_n(*n)?;
            let (a, b) = (parse_braid(braid_a)?, parse_braid(braid_b)?);
            // One window for both, wide enough for either default.
            let mut opts = homology_options(window, false);
            opts.kmax = Some(
                window
                    .kmax
                    .unwrap_or_else(|| default_kmax(&a, *n).max(default_kmax(&b, *n))),
            );
            opts.jmax = Some(
                window
                    .jmax
                    .unwrap_or_else(|| a.writhe().max(b.writhe()) + 3),
            );
            let (ra, rb) = (total_homology(&a, *n, opts)?, total_homology(&b, *n, opts)?);
            let equal = ra.module == rb.module;
            let verdict = if equal { "EQUAL" } else { "DIFFERENT" };
            let pass = ra.audits.all_pass() && rb.audits.all_pass();
            Done {
                json: json!({"verdict": verdict, "a": ra.to_json(), "b": rb.to_json()}),
                text: format!("{verdict}\n\n{}\n{}", report_text(&ra), report_text(&rb)),
                pass,
            }
        }
        Command::UnknotCheck { m, n, kmax } => {
            check_n(*n)?;
            let b = BraidWord::unknot(*m as usize);
            let kmax = kmax.unwrap_or(2 * *n as i32 + 2 * *m as i32 + 5);
            let opts = HomologyOptions {
                kmax: Some(kmax),
                ..HomologyOptions::default()
            };
            let r = total_homology(&b, *n, opts)?;
            let expected = unknot_homology(*m, *n, kmax);
            let matches = r.module == expected;
            let verdict = if matches { "MATCH" } else { "MISMATCH" };
            Done {
                json: json!({"m": m, "matches": matches, "expected": expected.to_json(), "computed": r.to_json()}),
                text: format!(
                    "U{m} N={n}: {verdict}\nexpected:\n{}\ncomputed:\n{}",
                    expected.render_text(kmax),
                    report_text(&r)
                ),
                pass: matches && r.audits.all_pass(),
            }
        }
        Command::StabCheck { braid, n, kmax } => {
            check_n(*n)?;
            let b = parse_braid(braid)?;
            let v = stab_check(&b, *n, *kmax, true)?;
            let status = if v.pass() { "PASS" } else { "FAIL" };
            Done {
                json: json!({
                    "braid": b.to_string(),
                    "N": n,
                    "short_sequence": v.short_sequence,
                    "long_sequence": v.long_sequence,
                    "failures": v.failures,
                    "report": v.report.to_json(),
                    "stabilized": v.stabilized.to_json(),
                }),
                text: format!(
                    "stab-check [{b}] N={n}: {status} (short sequence {}, long sequence {})\n{}",
                    v.short_sequence,
                    v.long_sequence,
                    v.failures
                        .iter()
                        .map(|f| format!("  {f}\n"))
                        .collect::<String>()
                ),
                pass: v.pass(),
            }
        }
        Command::ConeCheck { braid, n, kmax } => {
            check_n(*n)?;
            let b = parse_braid(braid)?;
            let v = cone_pi0_check(&b, *n, *kmax, true)?;
            let status = if v.pass { "PASS" } else { "FAIL" };
            Done {
                json: json!({
                    "braid": b.to_string(),
                    "N": n,
                    "pass": v.pass,
                    "compared_degrees": v.compared_degrees,
                    "mismatches": v.mismatches,
                }),
                text: format!(
                    "cone-check [{b}] N={n}: {status} ({} degrees compared)\n{}",
                    v.compared_degrees,
                    v.mismatches
                        .iter()
                        .map(|f| format!("  {f}\n"))
                        .collect::<String>()
                ),
                pass: v.pass,
            }
        }
        Command::Moves { braid, moves } => {
            let mut b = parse_braid(braid)?;
            let mut steps = vec![json!({"braid": b.to_string(), "sl": b.self_linking()})];
            let mut text = format!("{b}  (sl={})\n", b.self_linking());
            for m in moves {
                let mv = parse_move(m)?;
                b = transverse_move(&b, &mv)?;
                steps.push(json!({"move": m, "braid": b.to_string(), "sl": b.self_linking()}));
                text.push_str(&format!("--{m}--> {b}  (sl={})\n", b.self_linking()));
            }
            Done {
                json: json!({"steps": steps}),
                text,
                pass: true,
            }
        }
    };
    if let Value::Object(map) = &mut done.json {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        map.insert("command".into(), echo);
    }
    Ok(done)
}

fn parse_move(s: &str) -> Result<Move, Usage> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| {
        t.parse::<i64>()
            .map_err(|_| Usage(format!("move {s:?}: bad number {t:?}")))
    };
    Ok(match parts.as_slice() {
        ["stab-pos"] => Move::StabPos,
        ["destab-pos"] => Move::DestabPos,
        ["stab-neg"] => Move::StabNeg,
        ["conj", eta] => Move::Conjugate {
            eta: num(eta)? as i32,
        },
        ["rel", site] => Move::BraidRelation {
            site: num(site)? as usize,
        },
        ["insert", site, letter] => Move::InsertPair {
            site: num(site)? as usize,
            letter: num(letter)? as i32,
        },
        _ => return Err(Usage(format!("unknown move {s:?}"))),
    })
}

fn sln_json(dims: &SlnDims) -> Value {
    dims.iter()
        .map(|(&(eps, i, k), &dim)| json!({"eps": eps, "i": i, "k": k, "dim": dim}))
        .collect()
}

fn sln_text(dims: &SlnDims) -> String {
    let mut rows: std::collections::BTreeMap<(u8, i32), Vec<String>> = Default::default();
    for (&(eps, i, k), &d) in dims {
        let mono = match k {
            0 => "1".to_string(),
            1 => "q".to_string(),
            _ => format!("q^{k}"),
        };
        rows.entry((eps, i))
            .or_default()
            .push(if d == 1 { mono } else { format!("{d}{mono}") });
    }
    if rows.is_empty() {
        return "(zero)\n".into();
    }
    rows.iter()
        .map(|((eps, i), t)| format!("ε={eps} i={i} sl(N): {}\n", t.join(" + ")))
        .collect()
}

fn report_text(r: &HomologyReport) -> String {
    let mut s = r.render_text();
    s.push_str(&sln_text(&r.sln_dims));
    let a = &r.audits;
    s.push_str(&format!(
        "audits: structure theorem {}, parity vanishing {}, window stable {}{}\n",
        ok(a.structure_theorem.pass),
        ok(a.parity_vanishing),
        ok(a.window_stable),
        a.complex_checks
            .map(|c| format!(", complex checks {}", ok(c)))
            .unwrap_or_default()
    ));
    for f in &a.structure_theorem.failures {
        s.push_str(&format!("  {f}\n"));
    }
    s
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn series_json(s: &ModuleSeries, kmax: i32) -> Value {
    let closed: Vec<Value> = (0..2)
        .map(|e| json!({"eps": e, "free": s.free[e].to_string(), "torsion": s.torsion[e].to_string()}))
        .collect();
    let gens: Vec<Value> = s
        .generators(kmax)
        .into_iter()
        .map(|((part, eps, j, k), mult)| json!({"part": part, "eps": eps, "j": j, "k": k, "mult": mult}))
        .collect();
    json!({"closed_form": closed, "generators": gens})
}

fn oracle(
    g: &ResolvedWord,
    n: u32,
    variant: VariantArg,
    compare: bool,
    kmax: Option<i32>,
    trace: bool,
) -> Result<Done, Usage> {
    let variant = match variant {
        VariantArg::Triple => Variant::Triple,
        VariantArg::Sln => Variant::Sln,
    };
    let o = Oracle::new(n, variant);
    let s = o.series(g).map_err(|e| Usage(e.to_string()))?;
    let anchor = Oracle::new(n, Variant::Triple);
    let window = kmax.map_or(KWindow::standard(n), KWindow::Absolute);
    let k = window.k_max(&anchor, g).map_err(|e| Usage(e.to_string()))?;
    let mut json = json!({"word": g.to_string(), "N": n, "variant": variant, "kmax": k, "series": series_json(&s, k)});
    let mut text = format!("word: {g}\nN={n} variant={variant:?}\n{s}");
    let mut pass = true;
    if compare {
        let c = compare_resolved(&o, g, k, true, variant == Variant::Triple)
            .map_err(|e| Usage(e.to_string()))?;
        pass = c.pass();
        let dims = |v: &[((u8, i32, i32), usize)]| -> Vec<Value> {
            v.iter()
                .map(|&((eps, j, k), dim)| json!({"eps": eps, "j": j, "k": k, "dim": dim}))
                .collect()
        };
        json["comparison"] = json!({
            "dims_match": c.dims_match,
            "generators_compared": c.generators_compared,
            "generators_match": c.generators_match,
            "bound_violations": c.bound_violations,
            "oracle": dims(&c.oracle),
            "direct": dims(&c.direct),
        });
        text.push_str(&format!(
            "direct comparison up to k={k}: {}\n",
            if pass { "EQUAL" } else { "DIFFERENT" }
        ));
        for v in &c.bound_violations {
            text.push_str(&format!("  bound violated: {v}\n"));
        }
    }
    if trace {
        json["trace"] = serde_json::to_value(o.trace()).expect("serializable");
        for step in o.trace() {
            text.push_str(&format!("{} [{}]", step.word, step.case));
            for (sign, w, z2, j, kk) in &step.terms {
                text.push_str(&format!(
                    " {}({w})⟨{z2}⟩{{{j},{kk}}}",
                    if *sign > 0 { '+' } else { '−' }
                ));
            }
            text.push('\n');
        }
    }
    Ok(Done { json, text, pass })
}
