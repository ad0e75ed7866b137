use std::io::Write;

use num_bigint::BigUint;
use polychain::azi::{azi_extremal_report, is_azi, verify_azi_min_with, verify_azi_theorem_with, AziCheckOptions};
use polychain::dp::{classify_table, dedup_reversal, DpTable, Engine, Objective, MIN_SQUARES};
use polychain::index::{g_table, load_custom_index, ti_direct, ti_recursive, Preset};
use polychain::oracle::cross_check_engine;
use polychain::report::{ClaimRecord, VerificationReport};
use polychain::value::{parse_rational, DEFAULT_EPS};
use polychain::{IndexFunction, Link, LinkVector, Mode, Value};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Cli, Command, EndArg, Extremal, Format, IndexArgs, ModeArg};
use crate::CliError;

type Out<'a> = &'a mut dyn Write;

/// Dedup counts in `table` are only computed up to this many labeled maximizers.
pub const ISO_COUNT_CAP: u64 = 4096;

pub fn run(cli: &Cli, out: Out) -> Result<(), CliError> {
    let f = resolve_index(&cli.index)?;
    match &cli.command {
        Command::Value { links, json } => value(&f, links, *json, out),
        Command::Max(args) => extremal(&f, Objective::Max, args, out),
        Command::Min(args) => extremal(&f, Objective::Min, args, out),
        Command::Classify { minimize } => classify(&f, *minimize, out),
        Command::Table { from, to, format, exact } => table(&f, *from, *to, *format, *exact, out),
        Command::Verify {
            n_max,
            oracle_cap,
            verbose,
            inject_g22,
        } => verify(&f, *n_max, *oracle_cap, *verbose, inject_g22.as_deref(), out),
        Command::Show => show(&f, out),
    }
}

fn resolve_index(args: &IndexArgs) -> Result<IndexFunction, CliError> {
    let f = match &args.index_file {
        Some(path) => {
            if args.gamma.is_some() {
                return Err(CliError::Usage("--gamma applies to --index randic only".into()));
            }
            load_custom_index(&std::fs::read_to_string(path)?)?
        }
        None => {
            let name = args.index.as_deref().unwrap_or("azi");
            let preset = Preset::parse(name, args.gamma)?;
            if args.gamma.is_some() && !matches!(preset, Preset::Randic(_)) {
                return Err(CliError::Usage("--gamma applies to --index randic only".into()));
            }
            preset.build()
        }
    };
    if let Some(eps) = args.eps {
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(CliError::Usage("--eps must be a non-negative number".into()));
        }
    }
    match (args.mode, f.mode()) {
        (Some(ModeArg::Float), Mode::Rational) => Ok(f.to_float(args.eps.unwrap_or(DEFAULT_EPS))),
        (Some(ModeArg::Rational), Mode::Float { .. }) => Err(CliError::Usage(format!(
            "index '{}' has no exact rational form",
            f.name()
        ))),
        (_, Mode::Rational) if args.eps.is_some() && args.mode.is_none() => Err(CliError::Usage(
            "--eps applies to float mode; add --mode float".into(),
        )),
        (_, Mode::Float { .. }) => Ok(match args.eps {
            Some(eps) => f.with_eps(eps),
            None => f,
        }),
        _ => Ok(f),
    }
}

/// `p/q (≈d)` for rationals, `d` for floats.
fn render(v: &Value) -> String {
    match v.exact() {
        Some(exact) => format!("{exact} (≈{})", v.decimal()),
        None => v.decimal(),
    }
}

fn json_line<T: Serialize>(out: Out, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn value(f: &IndexFunction, links: &str, json: bool, out: Out) -> Result<(), CliError> {
    let chain: LinkVector = links.parse()?;
    let direct = ti_direct(&chain, f);
    let recursive = ti_recursive(&chain, f);
    let agree = direct.tie(&recursive);
    if json {
        #[derive(Serialize)]
        struct Report<'a> {
            index: &'a str,
            links: &'a LinkVector,
            squares: usize,
            value: &'a Value,
            recursive: &'a Value,
            agree: bool,
        }
        json_line(
            out,
            &Report {
                index: f.name(),
                links: &chain,
                squares: chain.square_count(),
                value: &direct,
                recursive: &recursive,
                agree,
            },
        )?;
    } else if agree {
        writeln!(out, "{}", render(&direct))?;
    } else {
        writeln!(out, "direct:    {}", render(&direct))?;
        writeln!(out, "recursive: {}", render(&recursive))?;
    }
    if agree {
        Ok(())
    } else {
        eprintln!("evaluators disagree");
        Err(CliError::Mismatch)
    }
}

fn end_link(end: Option<EndArg>) -> Option<Link> {
    end.map(|e| match e {
        EndArg::Straight => Link::Straight,
        EndArg::Turn => Link::Turn,
    })
}

fn extremal(f: &IndexFunction, objective: Objective, args: &Extremal, out: Out) -> Result<(), CliError> {
    let engine = Engine::new(f);
    if args.stream {
        let mut streamed = serde_json::to_value(engine.stream(args.n, objective)?).map_err(std::io::Error::from)?;
        streamed["index"] = f.name().into();
        return json_line(out, &streamed);
    }
    // Minima are maxima of the negated index.
    let working = match objective {
        Objective::Max => engine,
        Objective::Min => engine.negate(),
    };
    let table = working.run(args.n)?;
    let end = end_link(args.end);
    let mut result = table.extremal(f.name(), objective, end);
    if !args.enumerate {
        return json_line(out, &result);
    }
    write_enumeration(&table, &mut result, end, args, out)
}

/// Streams the chains as they are produced, after the summary.
fn write_enumeration(
    table: &DpTable,
    result: &mut polychain::ExtremalResult,
    end: Option<Link>,
    args: &Extremal,
    out: Out,
) -> Result<(), CliError> {
    let chains = table.optimal_chains(end);
    let mut chains: Box<dyn Iterator<Item = LinkVector>> = if args.dedup {
        Box::new(dedup_reversal(chains))
    } else {
        Box::new(chains)
    };
    let limit = args.limit.unwrap_or(usize::MAX);

    // Enumeration has to finish before the dedup count is known, so the
    // summary follows the chain list.
    writeln!(out, "{{")?;
    writeln!(out, "  \"chains\": [")?;
    let mut emitted = 0usize;
    let mut truncated = false;
    for chain in chains.by_ref() {
        if emitted == limit {
            truncated = true;
            break;
        }
        let sep = if emitted == 0 { "" } else { ",\n" };
        write!(out, "{sep}    {}", serde_json::to_string(&chain).map_err(std::io::Error::from)?)?;
        emitted += 1;
    }
    if emitted > 0 {
        writeln!(out)?;
    }
    writeln!(out, "  ],")?;
    writeln!(out, "  \"emitted\": {emitted},")?;
    writeln!(out, "  \"truncated\": {truncated},")?;
    if args.dedup && !truncated {
        result.iso_count = Some(BigUint::from(emitted));
    }
    let summary = serde_json::to_string_pretty(result).map_err(std::io::Error::from)?;
    writeln!(out, "  \"result\": {}", summary.replace('\n', "\n  "))?;
    writeln!(out, "}}")?;
    Ok(())
}

fn classify(f: &IndexFunction, minimize: bool, out: Out) -> Result<(), CliError> {
    let mut g = g_table(f);
    if minimize {
        g = g.negate();
    }
    let verdict = classify_table(&g)?;
    #[derive(Serialize)]
    struct Report<'a> {
        index: &'a str,
        objective: Objective,
        #[serde(flatten)]
        verdict: polychain::dp::ClassifierVerdict,
        gtable: &'a polychain::GTable,
    }
    json_line(
        out,
        &Report {
            index: f.name(),
            objective: if minimize { Objective::Min } else { Objective::Max },
            verdict,
            gtable: &g,
        },
    )
}

#[derive(Debug, Serialize)]
struct Row {
    n: usize,
    #[serde(rename = "M")]
    max: Value,
    #[serde(rename = "m")]
    min: Value,
    #[serde(with = "count")]
    labeled_count: BigUint,
    /// Absent above [`ISO_COUNT_CAP`] labeled maximizers.
    iso_count: Option<u64>,
    family: Option<String>,
}

mod count {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }
}

fn table(f: &IndexFunction, from: usize, to: usize, format: Format, exact: bool, out: Out) -> Result<(), CliError> {
    if from > to {
        return Err(CliError::Usage(format!("--from {from} exceeds --to {to}")));
    }
    if from < MIN_SQUARES {
        return Err(polychain::Error::TooFewSquares {
            what: "table",
            min: MIN_SQUARES,
            n: from,
        }
        .into());
    }
    let engine = Engine::new(f);
    let max = engine.run(to)?;
    let min = engine.negate().run(to)?;
    let family = is_azi(f);
    let rows: Vec<Row> = (from..=to)
        .into_par_iter()
        .map(|n| {
            let ends = max.winning_ends(n);
            let labeled: BigUint = ends.iter().map(|l| max.count(n, l)).sum();
            let iso = (labeled <= BigUint::from(ISO_COUNT_CAP))
                .then(|| dedup_reversal(max.optimal_chains_at(n, None)).count() as u64);
            let lo = min.winning_ends(n).first().expect("nonempty");
            Row {
                n,
                max: max.value(n, ends.first().expect("nonempty")),
                min: min.value(n, lo).neg(),
                labeled_count: labeled,
                iso_count: iso,
                family: family.then(|| azi_extremal_report(n).map(|r| r.family.to_string())).transpose().ok().flatten(),
            }
        })
        .collect();

    let cell = |v: &Value| match (exact, v.exact()) {
        (true, Some(e)) => e,
        _ => v.decimal(),
    };
    let opt = |x: &Option<u64>| x.map_or(String::new(), |x| x.to_string());
    match format {
        Format::Json => json_line(out, &rows),
        Format::Csv => {
            writeln!(out, "n,M,m,labeled_count,iso_count,family")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.n,
                    cell(&r.max),
                    cell(&r.min),
                    r.labeled_count,
                    opt(&r.iso_count),
                    r.family.as_deref().unwrap_or("")
                )?;
            }
            Ok(())
        }
        Format::Plain => {
            let mut grid = vec![["n", "M", "m", "labeled", "iso", "family"].map(String::from).to_vec()];
            for r in &rows {
                grid.push(vec![
                    r.n.to_string(),
                    cell(&r.max),
                    cell(&r.min),
                    r.labeled_count.to_string(),
                    r.iso_count.map_or("-".into(), |x| x.to_string()),
                    r.family.clone().unwrap_or("-".into()),
                ]);
            }
            let widths: Vec<usize> = (0..6).map(|c| grid.iter().map(|row| row[c].chars().count()).max().unwrap_or(0)).collect();
            for row in &grid {
                let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                writeln!(out, "{}", line.join("  "))?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct VerifySection {
    name: &'static str,
    checked: usize,
    failed: usize,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    index: &'a str,
    n_max: usize,
    oracle_through: Option<usize>,
    injected_g22: Option<&'a str>,
    passed: bool,
    checked: usize,
    sections: Vec<VerifySection>,
    failures: Vec<&'a ClaimRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    records: Option<&'a [ClaimRecord]>,
}

fn verify(
    f: &IndexFunction,
    n_max: usize,
    oracle_cap: usize,
    verbose: bool,
    inject_g22: Option<&str>,
    out: Out,
) -> Result<(), CliError> {
    if n_max < MIN_SQUARES {
        return Err(polychain::Error::TooFewSquares {
            what: "verify",
            min: MIN_SQUARES,
            n: n_max,
        }
        .into());
    }
    let engine = match inject_g22 {
        None => Engine::new(f),
        Some(delta) => {
            let delta = parse_rational(delta)?;
            let mut g = g_table(f);
            g.g22 = match g.g22 {
                Value::Rational(r) => Value::Rational(r + delta),
                Value::Float { value, eps } => Value::Float {
                    value: value + polychain::value::rational_to_f64(&delta),
                    eps,
                },
            };
            Engine::from_gtable(f.name(), g)?
        }
    };

    let mut sections = Vec::new();
    let mut all = VerificationReport::new();
    let oracle_through = n_max.min(oracle_cap);
    let oracle_runs = if oracle_through >= MIN_SQUARES {
        (MIN_SQUARES..=oracle_through)
            .map(|n| cross_check_engine(f, &engine, n))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let mut oracle = VerificationReport::new();
    for run in oracle_runs {
        oracle.extend(run.report);
    }
    push_section(&mut sections, &mut all, "oracle cross-check", oracle);

    if is_azi(f) {
        let opts = AziCheckOptions {
            oracle_max: oracle_through.min(AziCheckOptions::new(n_max).oracle_max),
            ..AziCheckOptions::new(n_max)
        };
        if n_max >= 5 {
            push_section(&mut sections, &mut all, "azi maximum", verify_azi_theorem_with(&engine, &opts)?);
        }
        push_section(&mut sections, &mut all, "azi minimum", verify_azi_min_with(&engine, &opts)?);
    }

    let report = VerifyReport {
        index: f.name(),
        n_max,
        oracle_through: (oracle_through >= MIN_SQUARES).then_some(oracle_through),
        injected_g22: inject_g22,
        passed: all.passed(),
        checked: all.checked(),
        sections,
        failures: all.failures().collect(),
        records: verbose.then_some(&all.records[..]),
    };
    json_line(out, &report)?;
    if all.passed() {
        Ok(())
    } else {
        Err(CliError::Mismatch)
    }
}

fn push_section(
    sections: &mut Vec<VerifySection>,
    all: &mut VerificationReport,
    name: &'static str,
    part: VerificationReport,
) {
    sections.push(VerifySection {
        name,
        checked: part.checked(),
        failed: part.failures().count(),
    });
    all.extend(part);
}

fn show(f: &IndexFunction, out: Out) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Report {
        document: polychain::index::IndexDocument,
        gtable: polychain::GTable,
    }
    json_line(
        out,
        &Report {
            document: f.to_document(),
            gtable: g_table(f),
        },
    )
}
