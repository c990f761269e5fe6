//! `gcf`: expansions, conversions, tracing and block decisions from the command line.
//!
//! Exit codes: 0 success, 2 parse error, 3 domain error, 4 budget exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use geodesic_cf::automata::{benchmark_tags, unbounded_lookahead_demo};
use geodesic_cf::cf::{
    acf_of, acf_of_digits, acf_to_farey, digits_of_acf, farey_of, farey_to_acf, fmt_acf, fmt_farey,
    ocf_digits, parse_acf, parse_farey, AcfSym, FareySym, OcfDigits,
};
use geodesic_cf::cutting::{
    cutting_from_mgcf, fmt_cutting, mgcf_from_cutting, parse_cutting, CutSym,
};
use geodesic_cf::exactnum::{parse_ext_real, ExtReal, QuadSurd, Rational};
use geodesic_cf::mgcf::{
    annotate_ones, annotated_from_mgcf, fmt_mgcf, mgcf_direct, mgcf_from_annotated, parse_mgcf,
    AnnotatedDigits, MgcfSym,
};
use geodesic_cf::shiftspace::{
    corner_words, decide_block, enumerate_minimal_forbidden, CentralSequence,
};
use geodesic_cf::tessellation::{
    corner_hits_vertical, periodic_corner_count, render_svg, trace, GeodesicSpec,
};
use geodesic_cf::{Error, Result};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gcf",
    version,
    about = "Geodesic continued fractions and modular cutting sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Ocf,
    /// OCF digits with each 1 tagged h, m or c.
    Annotated,
    Acf,
    Farey,
    Mgcf,
    Cutting,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Ocf => "ocf",
            Kind::Annotated => "annotated",
            Kind::Acf => "acf",
            Kind::Farey => "farey",
            Kind::Mgcf => "mgcf",
            Kind::Cutting => "cutting",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expand a number: `gcf expand ocf 5/14`.
    Expand {
        #[arg(value_enum)]
        kind: Kind,
        /// Exact value: integer, p/q, inf, or a surd such as "(1*sqrt(3)-1)/2".
        #[arg(allow_hyphen_values = true, required_unless_present = "theta")]
        value: Option<String>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "value")]
        theta: Option<String>,
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Convert a word between representations: `gcf convert --from cutting --to ocf JLLC1LLLLJ`.
    Convert {
        #[arg(long, value_enum)]
        from: Kind,
        #[arg(long, value_enum)]
        to: Kind,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Cutting sequence of a geodesic given by its endpoints.
    Trace {
        #[arg(long, allow_hyphen_values = true)]
        geodesic: String,
        #[arg(long, default_value_t = 64)]
        limit: usize,
        /// Write an SVG drawing of the crossed domains.
        #[arg(long)]
        svg: Option<std::path::PathBuf>,
    },
    /// Decide whether a cutting block occurs in some cutting sequence.
    Block { word: String },
    /// The central sequence of a head, its corner and the eight corner words.
    Central {
        /// Head digits d1,...,dn.
        head: String,
    },
    /// Minimal forbidden blocks up to a length.
    Forbidden {
        #[arg(long, default_value_t = 17)]
        max_len: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Corner hits of a vertical geodesic (--theta) or corners on the closed geodesic of √d (--surd).
    Corners {
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "surd",
            required_unless_present = "surd"
        )]
        theta: Option<String>,
        #[arg(long)]
        surd: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// Time the streamed 1-tag computation on prefixes of (√3−1)/2.
    Bench {
        #[arg(default_value_t = 1000)]
        ell: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

/// Rendered output of one command.
struct Output {
    text: String,
    json: Value,
}

fn truncated(word: String, terminated: bool) -> String {
    if terminated {
        word
    } else {
        format!("{}…", word)
    }
}

fn expand(kind: Kind, theta: &ExtReal, limit: usize) -> Result<Output> {
    if limit == 0 {
        return Err(Error::domain("limit must be at least 1"));
    }
    let (text, terminated) = match kind {
        Kind::Ocf => {
            let d = ocf_digits(theta, limit)?;
            let f = d.finite;
            (d.to_string(), f)
        }
        Kind::Annotated => {
            let d = ocf_digits(theta, limit)?;
            let a = annotate_ones(&d, theta)?;
            let f = a.finite;
            (a.to_string(), f)
        }
        Kind::Acf => {
            let w: Vec<AcfSym> = acf_of(theta)?.take(limit + 1).collect();
            let done = w.len() <= limit;
            (truncated(fmt_acf(&w[..w.len().min(limit)]), done), done)
        }
        Kind::Farey => {
            let w: Vec<FareySym> = farey_of(theta)?.take(limit + 1).collect();
            let done = w.len() <= limit;
            (truncated(fmt_farey(&w[..w.len().min(limit)]), done), done)
        }
        Kind::Mgcf => {
            let e = mgcf_direct(theta, limit)?;
            (truncated(fmt_mgcf(&e.word), e.terminated), e.terminated)
        }
        Kind::Cutting => {
            let t = trace(&GeodesicSpec::vertical(theta.clone())?, limit)?;
            (truncated(fmt_cutting(&t.symbols()), t.cusp), t.cusp)
        }
    };
    let json = json!({
        "kind": kind.name(),
        "theta": theta.to_string(),
        "expansion": text.trim_end_matches('…').trim_end_matches(','),
        "terminated": terminated,
    });
    Ok(Output { text, json })
}

/// A word in one of the representations; conversions walk the chain
/// cutting ↔ mgcf ↔ annotated ↔ ocf ↔ acf ↔ farey.
enum Word {
    Cutting(Vec<CutSym>),
    Mgcf(Vec<MgcfSym>),
    Annotated(AnnotatedDigits),
    Ocf(OcfDigits),
    Acf(Vec<AcfSym>),
    Farey(Vec<FareySym>),
}

fn rank(k: Kind) -> usize {
    match k {
        Kind::Cutting => 0,
        Kind::Mgcf => 1,
        Kind::Annotated => 2,
        Kind::Ocf => 3,
        Kind::Acf => 4,
        Kind::Farey => 5,
    }
}

impl Word {
    fn parse(kind: Kind, s: &str) -> Result<Word> {
        Ok(match kind {
            Kind::Cutting => Word::Cutting(parse_cutting(s)?),
            Kind::Mgcf => Word::Mgcf(parse_mgcf(s)?),
            Kind::Annotated => Word::Annotated(AnnotatedDigits::parse(s)?),
            Kind::Ocf => Word::Ocf(OcfDigits::parse(s)?),
            Kind::Acf => Word::Acf(parse_acf(s)?),
            Kind::Farey => Word::Farey(parse_farey(s)?),
        })
    }

    fn kind(&self) -> Kind {
        match self {
            Word::Cutting(_) => Kind::Cutting,
            Word::Mgcf(_) => Kind::Mgcf,
            Word::Annotated(_) => Kind::Annotated,
            Word::Ocf(_) => Kind::Ocf,
            Word::Acf(_) => Kind::Acf,
            Word::Farey(_) => Kind::Farey,
        }
    }

    fn right(self) -> Result<Word> {
        Ok(match self {
            Word::Cutting(w) => Word::Mgcf(mgcf_from_cutting(&w)?),
            Word::Mgcf(w) => Word::Annotated(annotated_from_mgcf(&w)?),
            Word::Annotated(a) => Word::Ocf(a.digits()),
            Word::Ocf(d) => Word::Acf(acf_of_digits(&d)?),
            Word::Acf(w) => Word::Farey(acf_to_farey(&w)),
            Word::Farey(_) => unreachable!("farey is the last representation"),
        })
    }

    fn left(self) -> Result<Word> {
        Ok(match self {
            Word::Farey(w) => Word::Acf(farey_to_acf(&w)),
            Word::Acf(w) => {
                let d = digits_of_acf(&w);
                Word::Ocf(OcfDigits::from_parts(d[0].into(), d[1..].to_vec(), true))
            }
            Word::Ocf(d) => {
                let v = d
                    .value()
                    .filter(|_| d.finite)
                    .ok_or_else(|| Error::domain("tagging 1s needs a terminating expansion"))?;
                let theta = ExtReal::rational(v);
                Word::Annotated(annotate_ones(&d, &theta)?)
            }
            Word::Annotated(a) => Word::Mgcf(mgcf_from_annotated(&a)?),
            Word::Mgcf(w) => Word::Cutting(cutting_from_mgcf(&w)),
            Word::Cutting(_) => unreachable!("cutting is the first representation"),
        })
    }

    fn render(&self) -> String {
        match self {
            Word::Cutting(w) => fmt_cutting(w),
            Word::Mgcf(w) => fmt_mgcf(w),
            Word::Annotated(a) => a.to_string(),
            Word::Ocf(d) => d.to_string(),
            Word::Acf(w) => fmt_acf(w),
            Word::Farey(w) => fmt_farey(w),
        }
    }
}

fn convert(from: Kind, to: Kind, s: &str) -> Result<Output> {
    let mut w = Word::parse(from, s)?;
    while rank(w.kind()) < rank(to) {
        w = w.right()?;
    }
    while rank(w.kind()) > rank(to) {
        w = w.left()?;
    }
    let text = w.render();
    let json = json!({ "from": from.name(), "to": to.name(), "input": s, "output": text });
    Ok(Output { text, json })
}

fn trace_cmd(geodesic: &str, limit: usize, svg: Option<&std::path::Path>) -> Result<Output> {
    let g = GeodesicSpec::parse(geodesic)?;
    let t = trace(&g, limit)?;
    if let Some(path) = svg {
        std::fs::write(path, render_svg(&g, &t))
            .map_err(|e| Error::domain(format!("cannot write {}: {}", path.display(), e)))?;
    }
    let word = fmt_cutting(&t.symbols());
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| json!({ "symbol": s.symbol.token(), "exit": s.exit_x.to_string() }))
        .collect();
    Ok(Output {
        text: truncated(word.clone(), t.cusp),
        json: json!({ "geodesic": g.to_string(), "cutting": word, "cusp": t.cusp, "steps": steps }),
    })
}

fn block_cmd(word: &str) -> Result<Output> {
    let w = parse_cutting(word)?;
    let v = decide_block(&w);
    let mut text = v.status.name().to_string();
    if let Some(g) = &v.witness {
        text.push_str(&format!("\nwitness: {}", g));
    }
    if let Some(r) = &v.reason {
        text.push_str(&format!("\nreason: {}", r));
    }
    Ok(Output {
        text,
        json: v.to_json(),
    })
}

fn parse_digits(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for tok in s.split(',') {
        let d: u64 = tok
            .trim()
            .parse()
            .map_err(|_| Error::parse(offset, format!("'{}' is not a digit", tok)))?;
        if d == 0 {
            return Err(Error::parse(offset, "digits must be positive"));
        }
        out.push(d);
        offset += tok.len() + 1;
    }
    Ok(out)
}

fn join(d: &[u64]) -> String {
    d.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn central_cmd(head: &str) -> Result<Output> {
    let head = parse_digits(head)?;
    let cs = CentralSequence::from_head(&head)
        .ok_or_else(|| Error::domain("the head has an empty central tail"))?;
    let cutting = cs.cutting()?;
    let (resolved, corner) = cs.corner()?;
    let words = corner_words(&cs)?;
    let mut text = format!(
        "head {}\ntail {}\ntheta {}\ncutting {}\ncorner at {} ({})",
        join(&cs.head),
        join(&cs.tail),
        cs.theta,
        fmt_cutting(&cutting),
        corner,
        resolved[corner].token()
    );
    for w in &words {
        text.push_str(&format!("\n{} {}", fmt_cutting(&w.word), w.status.name()));
    }
    let json = json!({
        "head": cs.head,
        "tail": cs.tail,
        "theta": cs.theta.to_string(),
        "cutting": fmt_cutting(&cutting),
        "corner": corner,
        "words": words
            .iter()
            .map(|w| json!({ "word": fmt_cutting(&w.word), "status": w.status.name() }))
            .collect::<Vec<_>>(),
    });
    Ok(Output { text, json })
}

fn forbidden_cmd(max_len: usize, jobs: Option<usize>) -> Result<Output> {
    let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let r = enumerate_minimal_forbidden(max_len, jobs)?;
    let words: Vec<String> = r.blocks.iter().map(|b| fmt_cutting(b)).collect();
    Ok(Output {
        text: words.join("\n"),
        json: json!({
            "max_len": max_len,
            "central_derived": r.central_derived,
            "blocks": words,
        }),
    })
}

fn corners_cmd(theta: Option<&str>, surd: Option<u64>, limit: usize) -> Result<Output> {
    if let Some(d) = surd {
        let p = periodic_corner_count(d, limit)?;
        let pts: Vec<String> = p
            .points
            .iter()
            .map(|(n, dd)| format!("{}/(2·{})", n, dd))
            .collect();
        return Ok(Output {
            text: format!("{} corners in a period of {} symbols", p.corners, p.period),
            json: json!({
                "surd": d,
                "preperiod": p.preperiod,
                "period": p.period,
                "corners": p.corners,
                "points": p.points.iter().map(|(n, dd)| json!({"n": n.to_string(), "d": dd.to_string()})).collect::<Vec<_>>(),
                "real_parts": pts,
            }),
        });
    }
    let theta = parse_ext_real(theta.expect("clap requires --theta or --surd"))?;
    let r: Rational = theta
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::domain("corner hits of vertical geodesics need a rational θ"))?;
    let hits = corner_hits_vertical(&r);
    let ts: Vec<String> = hits.iter().map(|h| h.t().to_string()).collect();
    Ok(Output {
        text: if ts.is_empty() {
            "no corner hits".to_string()
        } else {
            ts.join("\n")
        },
        json: json!({ "theta": theta.to_string(), "heights": ts }),
    })
}

fn bench_cmd(ell: usize, reps: usize) -> Result<Output> {
    if ell < 100 {
        return Err(Error::domain("bench needs ell ≥ 100"));
    }
    let half = QuadSurd::rational(Rational::new(1.into(), 2.into()));
    let x = &(&QuadSurd::sqrt(3) - &QuadSurd::from_int(1)) * &half;
    let r = benchmark_tags(&x, &[ell, 2 * ell, 4 * ell], reps)?;
    let mut text = String::from("len seconds max_consumed all_hits");
    for p in &r.points {
        text.push_str(&format!(
            "\n{} {:.6} {} {}",
            p.len, p.seconds, p.max_consumed, p.all_hits
        ));
    }
    text.push_str(&format!(
        "\nexponent {:.3}\nstate spread {:.3}",
        r.exponent, r.state_spread
    ));
    let mut demos = Vec::new();
    for j in 1..=3 {
        let d = unbounded_lookahead_demo(j)?;
        text.push_str(&format!(
            "\nlookahead j={} shared digits {} tags {}/{}/{} lookahead {}",
            j,
            d.common_digits,
            d.tags[0].letter(),
            d.tags[1].letter(),
            d.tags[2].letter(),
            d.lookahead
        ));
        demos.push(json!({
            "j": j,
            "common_digits": d.common_digits,
            "tags": d.tags.iter().map(|t| t.letter().to_string()).collect::<Vec<_>>(),
            "lookahead": d.lookahead,
        }));
    }
    let json = json!({
        "points": r.points.iter().map(|p| json!({
            "len": p.len,
            "seconds": p.seconds,
            "max_consumed": p.max_consumed,
            "all_hits": p.all_hits,
        })).collect::<Vec<_>>(),
        "exponent": r.exponent,
        "state_spread": r.state_spread,
        "lookahead": demos,
    });
    Ok(Output { text, json })
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Expand {
            kind,
            value,
            theta,
            limit,
        } => {
            let s = value
                .as_deref()
                .or(theta.as_deref())
                .expect("clap requires a value");
            expand(*kind, &parse_ext_real(s)?, *limit)
        }
        Command::Convert { from, to, word } => convert(*from, *to, word),
        Command::Trace {
            geodesic,
            limit,
            svg,
        } => trace_cmd(geodesic, *limit, svg.as_deref()),
        Command::Block { word } => block_cmd(word),
        Command::Central { head } => central_cmd(head),
        Command::Forbidden { max_len, jobs } => forbidden_cmd(*max_len, *jobs),
        Command::Corners { theta, surd, limit } => corners_cmd(theta.as_deref(), *surd, *limit),
        Command::Bench { ell, reps } => bench_cmd(*ell, *reps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
            } else {
                out.text
            };
            // a closed pipe (`gcf … | head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{}", text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(match e {
                Error::Parse { .. } => 2,
                Error::Domain(_) => 3,
                Error::Budget(_) => 4,
            })
        }
    }
}
