use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::{ThreadPool, ThreadPoolBuilder};
use serde::Serialize;

use sdepth_core::criteria::{combinatorial_criterion, strong_cc, CriterionResult};
use sdepth_core::enumeration::{
    canonical_form, gap_census_with_cache, run_census_with, CensusOptions, Category, ClassificationRecord,
};
use sdepth_core::lattice::{complement_upset, down_closure, f_vector, Antichain, SetFamily};
use sdepth_core::multigraded::{
    default_bound, grid_sdepth, ideal_poset, n3_construct, quotient_poset, validate_grid_partition, Multidegree,
};
use sdepth_core::reductions::{
    bad_degree, cone, delete_common_vertex, purify, reduce_to_fixpoint, split_condition_i, splits_over, SplitMode,
};
use sdepth_core::solver::naive::naive_sdepth_with_witness;
use sdepth_core::solver::{SdepthCache, Solver};
use sdepth_core::text::parse_antichain;

use crate::tables::{parse_tables, Tables, BUILTIN};
use crate::{Cli, CliError, Command, Input, Side, EXIT_FAILURE, EXIT_OK};

type Out<'a> = &'a mut dyn Write;

pub(crate) fn dispatch(cli: &Cli, out: Out<'_>) -> Result<i32, CliError> {
    let mut pool = ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs as usize);
    }
    let pool = pool.build().map_err(|e| CliError::Input(format!("cannot start worker pool: {e}")))?;
    match &cli.command {
        Command::Sdepth { input, side, at_least, witness, oracle } => {
            let facets = read_antichain(input, cli.n)?;
            sdepth(&facets, *side, *at_least, *witness, *oracle, out)
        }
        Command::Scc { input } => scc(&read_antichain(input, cli.n)?, out),
        Command::Reduce { input, purify, delete_common, cone } => {
            reduce(&read_antichain(input, cli.n)?, *purify, *delete_common, *cone, out)
        }
        Command::Splits { input, split_mode } => splits(&read_antichain(input, cli.n)?, *split_mode, out),
        Command::Grid { generators, input, g, side, witness, construct_n3 } => {
            let text = read_text(generators.as_deref(), input.as_deref(), "generators")?;
            let gens = parse_points(&text)?;
            let g = match g {
                Some(g) => parse_point(g)?,
                None => default_bound(&gens).map_err(|e| CliError::Input(e.to_string()))?,
            };
            grid(&gens, &g, *side, *witness, *construct_n3, out)
        }
        Command::Census { vertices, k, long_running, out: path, sort, split_mode, include_empty } => {
            let options = CensusOptions {
                split_mode: *split_mode,
                long_running: *long_running,
                include_empty: *include_empty,
                ..CensusOptions::default()
            };
            census(*vertices, *k, &options, path.as_deref(), *sort, &pool, out)
        }
        Command::Gap { vertices, k, long_running, csv } => gap(*vertices, *k, *long_running, csv.as_deref(), &pool, out),
        Command::VerifyTables { long_running, split_mode, data } => {
            let tables = match data {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(CliError::io(path.display().to_string()))?;
                    parse_tables(&text).map_err(|e| CliError::Input(e.to_string()))?
                }
                None => parse_tables(BUILTIN).expect("built-in tables are well formed"),
            };
            verify_tables(&tables, *long_running, *split_mode, &pool, out)
        }
    }
}

fn read_text(inline: Option<&str>, path: Option<&Path>, what: &str) -> Result<String, CliError> {
    match (inline, path) {
        (Some(text), _) => Ok(text.to_string()),
        (None, Some(path)) => fs::read_to_string(path).map_err(CliError::io(path.display().to_string())),
        (None, None) => Err(CliError::Usage(format!("no {what} given; pass them inline or with --input FILE"))),
    }
}

fn read_antichain(input: &Input, n: Option<usize>) -> Result<Antichain, CliError> {
    let text = read_text(input.antichain.as_deref(), input.input.as_deref(), "antichain")?;
    parse_antichain(&text, n).map_err(|e| CliError::Input(e.to_string()))
}

fn parse_point(text: &str) -> Result<Multidegree, CliError> {
    let body = text.trim().trim_start_matches('(').trim_end_matches(')');
    let coords = body
        .split(',')
        .map(|c| c.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Input(format!("malformed exponent vector `{text}`")))?;
    Ok(Multidegree::new(coords))
}

fn parse_points(text: &str) -> Result<Vec<Multidegree>, CliError> {
    text.split_whitespace().map(parse_point).collect()
}

fn family(facets: &Antichain, side: Side) -> SetFamily {
    match side {
        Side::Ideal => complement_upset(facets),
        Side::Quotient => down_closure(facets),
    }
}

fn w(out: Out<'_>, line: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    out.write_fmt(line).and_then(|_| out.write_all(b"\n")).map_err(CliError::io("stdout"))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => { w($out, format_args!($($arg)*)) };
}

fn sdepth(
    facets: &Antichain,
    side: Side,
    at_least: Option<usize>,
    witness: bool,
    oracle: bool,
    out: Out<'_>,
) -> Result<i32, CliError> {
    let fam = family(facets, side);
    let solver = Solver::default();
    let value = match at_least {
        Some(k) => {
            let (decision, _) = solver.decide(&fam, k);
            say!(out, "{}", if decision.is_achievable() { "yes" } else { "no" })?;
            if let (true, Some(p)) = (witness, decision.witness()) {
                say!(out, "witness {p}")?;
            }
            decision.is_achievable() as usize
        }
        None => {
            let answer = solver.sdepth(&fam);
            say!(out, "{}", answer.value)?;
            if witness {
                say!(out, "witness {}", answer.witness)?;
            }
            answer.value
        }
    };
    if oracle {
        let (reference, _) = naive_sdepth_with_witness(&fam).map_err(|e| CliError::Input(e.to_string()))?;
        let expected = match at_least {
            Some(k) => (reference >= k) as usize,
            None => reference,
        };
        say!(out, "oracle {reference}")?;
        if expected != value {
            say!(out, "mismatch: solver and oracle disagree")?;
            return Ok(EXIT_FAILURE);
        }
    }
    Ok(EXIT_OK)
}

fn trace(r: &CriterionResult) -> String {
    r.residual.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" ")
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "Pass"
    } else {
        "Fail"
    }
}

fn scc(facets: &Antichain, out: Out<'_>) -> Result<i32, CliError> {
    let strong = strong_cc(facets);
    match strong.witness {
        Some(face) => say!(out, "Fail witness {face}")?,
        None => say!(out, "Pass")?,
    }
    say!(out, "k {}", strong.k)?;
    let plain = combinatorial_criterion(&f_vector(&down_closure(facets), strong.k), strong.k)
        .map_err(|e| CliError::Input(e.to_string()))?;
    say!(out, "criterion {} trace {}", verdict(plain.passed()), trace(&plain))?;
    if let Some(face) = strong.witness {
        say!(out, "link of {face} trace {}", trace(&strong.criterion))?;
    }
    Ok(EXIT_OK)
}

fn reduce(
    facets: &Antichain,
    k: Option<usize>,
    delete: Option<usize>,
    make_cone: bool,
    out: Out<'_>,
) -> Result<i32, CliError> {
    let failed = |e: sdepth_core::reductions::ReductionError| CliError::Input(e.to_string());
    let single = match (k, delete, make_cone) {
        (Some(k), _, _) => Some(purify(facets, k).map_err(failed)?),
        (_, Some(x), _) => Some(delete_common_vertex(facets, x).map_err(failed)?),
        (_, _, true) => Some(cone(facets).map_err(failed)?),
        _ => None,
    };
    if let Some(result) = single {
        say!(out, "n={} {}", result.n(), result)?;
        return Ok(EXIT_OK);
    }
    let report = bad_degree(facets);
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    say!(out, "bad-degree {}", yes_no(report.bad_degree))?;
    if let Some(v) = report.uncovered_vertex {
        say!(out, "uncovered-vertex {v}")?;
    }
    if let Some(v) = report.common_vertex {
        say!(out, "common-vertex {v}")?;
    }
    say!(out, "pure {}", yes_no(report.pure))?;
    let (result, steps) = reduce_to_fixpoint(facets).map_err(failed)?;
    for (step, after) in &steps {
        say!(out, "step {step}: n={} {}", after.n(), after)?;
    }
    say!(out, "result n={} {}", result.n(), result)?;
    if let Ok(canon) = canonical_form(&result) {
        say!(out, "canonical {canon}")?;
    }
    Ok(EXIT_OK)
}

fn splits(facets: &Antichain, mode: SplitMode, out: Out<'_>) -> Result<i32, CliError> {
    let cache = SdepthCache::new();
    let mut first = None;
    for x in 1..=facets.n() {
        let status = if splits_over(facets, x, mode, &cache) {
            first.get_or_insert(x);
            "splits"
        } else if !split_condition_i(facets, x) {
            "no (condition i)"
        } else {
            "no (condition ii)"
        };
        say!(out, "vertex {x}: {status}")?;
    }
    match first {
        Some(x) => say!(out, "first {x}")?,
        None => say!(out, "first none")?,
    }
    Ok(EXIT_OK)
}

fn grid(
    gens: &[Multidegree],
    g: &Multidegree,
    side: Side,
    witness: bool,
    construct_n3: bool,
    out: Out<'_>,
) -> Result<i32, CliError> {
    let grid_err = |e: sdepth_core::multigraded::GridError| CliError::Input(e.to_string());
    if construct_n3 {
        let built = n3_construct(gens, g).map_err(grid_err)?;
        let poset = ideal_poset(gens, g).map_err(grid_err)?;
        let valid = validate_grid_partition(&built.partition, &poset);
        let value = built.partition.sdepth().unwrap_or(g.n());
        say!(out, "{value}")?;
        for step in &built.trace {
            say!(out, "step {step}")?;
        }
        if witness {
            for iv in &built.partition.intervals {
                say!(out, "interval {iv}")?;
            }
        }
        return match valid {
            Ok(()) => Ok(EXIT_OK),
            Err(v) => {
                say!(out, "invalid partition: {v}")?;
                Ok(EXIT_FAILURE)
            }
        };
    }
    let poset = match side {
        Side::Ideal => ideal_poset(gens, g),
        Side::Quotient => quotient_poset(gens, g),
    }
    .map_err(grid_err)?;
    let answer = grid_sdepth(&poset).map_err(grid_err)?;
    say!(out, "{}", answer.value)?;
    if witness {
        for iv in &answer.partition.intervals {
            say!(out, "interval {iv}")?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RecordLine {
    n: usize,
    k: usize,
    canon: String,
    category: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    split_vertex: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scc_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

impl RecordLine {
    fn new(r: &ClassificationRecord) -> Self {
        RecordLine {
            n: r.n,
            k: r.k,
            canon: r.canon.to_string(),
            category: r.category.label(),
            split_vertex: match r.category {
                Category::Splits(x) => Some(x),
                _ => None,
            },
            scc_witness: r.scc_witness.map(|f| f.to_string()),
            witness: r.witness.as_ref().map(|p| p.to_string()),
        }
    }
}

fn census(
    n: usize,
    k: usize,
    options: &CensusOptions,
    path: Option<&Path>,
    sort: bool,
    pool: &ThreadPool,
    out: Out<'_>,
) -> Result<i32, CliError> {
    let mut records: Vec<(Antichain, String)> = Vec::new();
    let keep = path.is_some();
    let report = pool
        .install(|| {
            run_census_with(n, k, options, |r| {
                if keep {
                    let line = serde_json::to_string(&RecordLine::new(r)).expect("record serializes");
                    records.push((r.canon.clone(), line));
                }
            })
        })
        .map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(path) = path {
        if sort {
            records.sort();
        }
        let context = path.display().to_string();
        let file = fs::File::create(path).map_err(CliError::io(context.clone()))?;
        let mut file = BufWriter::new(file);
        for (_, line) in &records {
            writeln!(file, "{line}").map_err(CliError::io(context.clone()))?;
        }
        file.flush().map_err(CliError::io(context))?;
    }
    say!(out, "{report}")?;
    Ok(if report.counterexamples == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn gap(
    n: usize,
    k: usize,
    long_running: bool,
    csv_path: Option<&Path>,
    pool: &ThreadPool,
    out: Out<'_>,
) -> Result<i32, CliError> {
    let report = pool
        .install(|| gap_census_with_cache(n, k, long_running, &SdepthCache::new()))
        .map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(path) = csv_path {
        let context = path.display().to_string();
        let csv_err = |e: csv::Error| CliError::Input(format!("{context}: {e}"));
        let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
        writer.write_record(["sdepth_quotient", "sdepth_ideal", "count"]).map_err(csv_err)?;
        for (&(q, i), c) in &report.cells {
            writer.serialize((q, i, c)).map_err(csv_err)?;
        }
        writer.flush().map_err(CliError::io(context.clone()))?;
    }
    write!(out, "{report}").map_err(CliError::io("stdout"))?;
    Ok(if report.strictly_below_diagonal() { EXIT_OK } else { EXIT_FAILURE })
}

const COLUMNS: [&str; 6] = ["total", "bad-degree", "fail-scc", "splits", "sdepth-ok", "counterexamples"];

fn verify_tables(
    tables: &Tables,
    long_running: bool,
    mode: SplitMode,
    pool: &ThreadPool,
    out: Out<'_>,
) -> Result<i32, CliError> {
    let mut mismatches = 0;
    for row in &tables.census {
        let label = format!("census n={} k={}", row.n, row.k);
        if row.long_running && !long_running {
            say!(out, "skip {label} (needs --long-running)")?;
            continue;
        }
        let options = CensusOptions {
            split_mode: mode,
            long_running: row.long_running,
            include_empty: row.include_empty,
            ..CensusOptions::default()
        };
        let report = pool.install(|| run_census_with(row.n, row.k, &options, |_| {})).map_err(|e| CliError::Input(e.to_string()))?;
        let found = report.row();
        if found == row.expected {
            say!(out, "ok {label}")?;
            continue;
        }
        mismatches += 1;
        say!(out, "MISMATCH {label} split-mode={mode}")?;
        for ((name, e), f) in COLUMNS.iter().zip(row.expected).zip(found) {
            if e != f {
                say!(out, "  {name}: expected {e}, found {f}")?;
            }
        }
    }
    let cache = SdepthCache::new();
    for row in &tables.gap {
        let label = format!("gap n={} k={}", row.n, row.k);
        if row.long_running && !long_running {
            say!(out, "skip {label} (needs --long-running)")?;
            continue;
        }
        let report = pool
            .install(|| gap_census_with_cache(row.n, row.k, row.long_running, &cache))
            .map_err(|e| CliError::Input(e.to_string()))?;
        if report.cells == row.cells {
            say!(out, "ok {label}")?;
            continue;
        }
        mismatches += 1;
        say!(out, "MISMATCH {label}")?;
        let keys: std::collections::BTreeSet<_> = row.cells.keys().chain(report.cells.keys()).collect();
        for &(q, i) in keys {
            let (e, f) = (row.cells.get(&(q, i)).copied().unwrap_or(0), report.get(q, i));
            if e != f {
                say!(out, "  ({q},{i}): expected {e}, found {f}")?;
            }
        }
    }
    if mismatches == 0 {
        say!(out, "all tables match")?;
        Ok(EXIT_OK)
    } else {
        say!(out, "{mismatches} table(s) differ")?;
        Ok(EXIT_FAILURE)
    }
}
