//! Command-line front end: report emission and character-table caching.
//!
//! Exit codes: 0 success, 2 unsupported input, 3 resource cap exceeded,
//! 4 verification mismatch, 1 internal error.

pub mod cache;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde_json::{json, Value};

use cache::{load_or_compute, CacheStatus};
use wordmap_core::chartab::CharacterTable;
use wordmap_core::error::Error;
use wordmap_core::group::aut::{aut_class_orbits, automorphism_action};
use wordmap_core::group::classes::{conjugacy_classes, min_centralizer_order, ClassData};
use wordmap_core::group::{GroupHandle, COMPOSITION_CONVENTION};
use wordmap_core::spectral::{
    deviation_bounds, deviation_report, frobenius_fibers, l1_distance, squares_word_fibers,
    witten_zeta, zeta_trend, Distribution, FiberMode, FiberTable, AN_TREND_BOUND,
    PSL2_TREND_BOUND,
};
use wordmap_core::tsys::{
    commutator_generating_coverage, generating_tuples, graph_components, higman_invariant,
    pra_walk, t2_invariant_census, t_systems, EdgeSet, MoveSet,
};
use wordmap_core::words::{parse_word, Word};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_DIR_ENV: &str = "WORDMAP_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FiberCmdMode {
    Formula,
    Brute,
    Both,
}

impl FiberCmdMode {
    fn as_str(self) -> &'static str {
        match self {
            FiberCmdMode::Formula => "formula",
            FiberCmdMode::Brute => "brute",
            FiberCmdMode::Both => "both",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "wordmap", version, about = "Exact word-map and T-system computations on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Character-table cache directory (also WORDMAP_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Group summary: order, classes, centralizers, zeta invariants.
    Info {
        #[arg(long)]
        group: String,
    },
    /// Per-class word-map fiber counts (character formula, brute force, or both).
    Fibers {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = FiberCmdMode::Both)]
        mode: FiberCmdMode,
        /// Sample count when brute-force enumeration exceeds the cap.
        #[arg(long, default_value_t = wordmap_core::words::DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form PSL(2,q) commutator deviations vs the character table.
    Prop51 {
        #[arg(long)]
        group: String,
    },
    /// Witten zeta values for one group or across a family.
    Zeta {
        #[arg(long, conflicts_with = "family")]
        group: Option<String>,
        /// Family trend: "An" (n = 5..9) or "PSL2" (q = 5..13).
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
    /// Connected components of the tuple graph (PRA edges, optionally extended).
    Components {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Also list components of the extended (all Nielsen moves) graph.
        #[arg(long, default_value_t = false)]
        extended: bool,
    },
    /// T_k-system count with the component-count inequality chain.
    Tsystems {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Higman-invariant census over generating pairs.
    Census {
        #[arg(long)]
        group: String,
    },
    /// Product replacement walk with seeded sampling.
    Walk {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        steps: u64,
        #[arg(long, default_value_t = 1000)]
        burn_in: u64,
        #[arg(long, default_value_t = 10000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Character bound (S_n) or fixed-point tail bounds (A_n).
    BoundCheck {
        #[arg(long)]
        group: String,
    },
    /// Cache write/reload/verify roundtrip for a group.
    CacheCheck {
        #[arg(long)]
        group: String,
    },
}

/// Ordered header plus per-format bodies.
struct Report {
    header: Vec<(String, String)>,
    json: Value,
    text: String,
    csv: String,
}

impl Report {
    fn new(command: String) -> Report {
        Report {
            header: vec![
                ("tool".into(), format!("wordmap {TOOL_VERSION}")),
                ("command".into(), command),
                ("convention".into(), COMPOSITION_CONVENTION.into()),
            ],
            json: json!({}),
            text: String::new(),
            csv: String::new(),
        }
    }

    fn header_entry(&mut self, key: &str, value: String) {
        self.header.push((key.into(), value));
    }

    fn emit(&self, format: Format) {
        match format {
            Format::Text => {
                for (k, v) in &self.header {
                    println!("# {k}: {v}");
                }
                print!("{}", self.text);
            }
            Format::Json => {
                let mut top = serde_json::Map::new();
                let mut header = serde_json::Map::new();
                for (k, v) in &self.header {
                    header.insert(k.clone(), Value::String(v.clone()));
                }
                top.insert("header".into(), Value::Object(header));
                if let Value::Object(payload) = &self.json {
                    for (k, v) in payload {
                        top.insert(k.clone(), v.clone());
                    }
                }
                println!("{}", serde_json::to_string_pretty(&Value::Object(top)).unwrap());
            }
            Format::Csv => {
                for (k, v) in &self.header {
                    println!("# {k},{v}");
                }
                print!("{}", self.csv);
            }
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NotPrime(_)
        | Error::UnsupportedGroup(_)
        | Error::InvalidParameter(_)
        | Error::ZeroInverse { .. }
        | Error::WordSyntax { .. }
        | Error::ExceptionalOuterAutomorphism(_) => 2,
        Error::SizeCap(_) => 3,
        Error::Mismatch(_) => 4,
        Error::NoDixonPrime { .. } | Error::Internal(_) => 1,
    }
}

pub fn run_from_env() -> i32 {
    let cli = Cli::parse();
    run(cli)
}

fn run(cli: Cli) -> i32 {
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from));
    match dispatch(&cli.command, cli.format, cache_dir.as_deref()) {
        Ok((report, code)) => {
            report.emit(cli.format);
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

type CmdResult = Result<(Report, i32), Error>;

fn dispatch(cmd: &Cmd, format: Format, cache_dir: Option<&std::path::Path>) -> CmdResult {
    match cmd {
        Cmd::Info { group } => cmd_info(group, format, cache_dir),
        Cmd::Fibers {
            group,
            word,
            mode,
            samples,
            seed,
        } => cmd_fibers(group, word, *mode, *samples, *seed, format, cache_dir),
        Cmd::Prop51 { group } => cmd_prop51(group, format, cache_dir),
        Cmd::Zeta { group, family, s } => cmd_zeta(group.as_deref(), family.as_deref(), *s, format, cache_dir),
        Cmd::Components { group, k, extended } => cmd_components(group, *k, *extended, format, cache_dir),
        Cmd::Tsystems { group, k } => cmd_tsystems(group, *k, format, cache_dir),
        Cmd::Census { group } => cmd_census(group, format, cache_dir),
        Cmd::Walk {
            group,
            k,
            steps,
            burn_in,
            samples,
            seed,
        } => cmd_walk(group, *k, *steps, *burn_in, *samples, *seed, format),
        Cmd::BoundCheck { group } => cmd_bound_check(group, format, cache_dir),
        Cmd::CacheCheck { group } => cmd_cache_check(group, format, cache_dir),
    }
}

fn setup(desc: &str) -> Result<(GroupHandle, ClassData), Error> {
    let group = GroupHandle::from_descriptor(desc)?;
    let classes = conjugacy_classes(&group);
    Ok((group, classes))
}

fn rational_str(r: &num::BigRational) -> String {
    format!("{r}")
}

fn rational_f64(r: &num::BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn cmd_info(desc: &str, format: Format, cache_dir: Option<&std::path::Path>) -> CmdResult {
    let (group, classes) = setup(desc)?;
    let (table, status) = load_or_compute(&group, &classes, cache_dir)?;
    let bounds = deviation_bounds(&table);
    let zeta2 = witten_zeta(&table, 2.0);
    let c_g = min_centralizer_order(&classes);
    let (out_order, out_note) = match automorphism_action(&group) {
        Ok(act) => (Some(act.out_order()), String::new()),
        Err(e) => (None, format!("{e}")),
    };

    let mut report = Report::new(format!("info --group {desc} --format {}", format.as_str()));
    report.header_entry("group", desc.into());
    report.header_entry("cache", status.as_str().into());

    let mut text = String::new();
    text.push_str(&format!("order: {}\nclasses: {}\n", group.order(), classes.count()));
    text.push_str("class\torder\tsize\tcentralizer\trepresentative\n");
    let mut csv = String::from("class,order,size,centralizer,representative\n");
    let mut class_rows = Vec::new();
    for c in 0..classes.count() {
        let rep = classes.representative(c);
        let row = (
            c,
            classes.order(c),
            classes.size(c),
            classes.centralizer_order(c),
            group.label(rep),
        );
        text.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", row.0, row.1, row.2, row.3, row.4));
        csv.push_str(&format!("{},{},{},{},\"{}\"\n", row.0, row.1, row.2, row.3, row.4));
        class_rows.push(json!({
            "index": row.0,
            "order": row.1,
            "size": row.2,
            "centralizer": row.3,
            "representative": row.4,
        }));
    }
    text.push_str(&format!("min_centralizer: {c_g}\n"));
    match out_order {
        Some(o) => text.push_str(&format!("out_order: {o}\n")),
        None => text.push_str(&format!("out_order: unavailable ({out_note})\n")),
    }
    text.push_str(&format!(
        "zeta2: {zeta2}\nzeta2_minus_one: {}\ndelta: {}\nepsilon: {}\n",
        rational_str(&bounds.zeta2_minus_one),
        bounds.delta,
        bounds.epsilon
    ));

    report.json = json!({
        "group": desc,
        "order": group.order(),
        "class_count": classes.count(),
        "classes": class_rows,
        "min_centralizer": c_g,
        "out_order": out_order,
        "out_note": if out_note.is_empty() { Value::Null } else { Value::String(out_note) },
        "zeta2": zeta2,
        "zeta2_minus_one": rational_str(&bounds.zeta2_minus_one),
        "delta": bounds.delta,
        "epsilon": bounds.epsilon,
    });
    report.text = text;
    report.csv = csv;
    Ok((report, 0))
}

/// The two words backed by character-sum formulas.
fn formula_fibers(table: &CharacterTable, word: &Word) -> Result<Option<FiberTable>, Error> {
    let commutator = parse_word("[x1,x2]").unwrap();
    let squares = parse_word("x1^2x2^2").unwrap();
    if *word == commutator {
        Ok(Some(frobenius_fibers(table)?))
    } else if *word == squares {
        Ok(Some(squares_word_fibers(table)?))
    } else {
        Ok(None)
    }
}

fn cmd_fibers(
    desc: &str,
    word_text: &str,
    mode: FiberCmdMode,
    samples: u64,
    seed: u64,
    format: Format,
    cache_dir: Option<&std::path::Path>,
) -> CmdResult {
    let (group, classes) = setup(desc)?;
    let word = parse_word(word_text)?;
    if word.arity() == 0 {
        return Err(Error::InvalidParameter("the empty word has no fiber table".into()));
    }

    let mut status = CacheStatus::Off;
    let mut table: Option<CharacterTable> = None;
    let mut load_table = |cache_dir: Option<&std::path::Path>| -> Result<CharacterTable, Error> {
        let (t, s) = load_or_compute(&group, &classes, cache_dir)?;
        status = s;
        Ok(t)
    };

    let (fibers, mut exit, mut match_note) = match mode {
        FiberCmdMode::Formula => {
            let t = load_table(cache_dir)?;
            let f = formula_fibers(&t, &word)?.ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "mode=formula supports [x1,x2] and x1^2x2^2, not {}",
                    word.render()
                ))
            })?;
            table = Some(t);
            (f, 0, Value::Null)
        }
        FiberCmdMode::Brute => {
            let f = wordmap_core::words::fibers_auto(&word, &group, &classes, samples, seed)?;
            // Character data still powers the per-class deviation columns
            // when the class count is within the table cap.
            if classes.count() <= wordmap_core::chartab::MAX_CLASS_COUNT {
                table = Some(load_table(cache_dir)?);
            }
            (f, 0, Value::Null)
        }
        FiberCmdMode::Both => {
            // Brute first: the cap check fails fast before any table work.
            let brute = wordmap_core::words::brute_force_fibers(&word, &group, &classes)?;
            let t = load_table(cache_dir)?;
            let formula = formula_fibers(&t, &word)?.ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "mode=both supports [x1,x2] and x1^2x2^2, not {}",
                    word.render()
                ))
            })?;
            let equal = formula.counts == brute.counts;
            table = Some(t);
            let note = json!({ "formula_equals_brute": equal });
            (formula, if equal { 0 } else { 4 }, note)
        }
    };
    fibers.check_conservation()?;

    let mut report = Report::new(format!(
        "fibers --group {desc} --word {word_text} --mode {} --format {}",
        mode.as_str(),
        format.as_str()
    ));
    report.header_entry("group", desc.into());
    report.header_entry("word", word.render());
    if let FiberMode::Sampled { samples, seed } = fibers.mode {
        report.header_entry("sampling", format!("sampled samples={samples} seed={seed}"));
    } else {
        report.header_entry("sampling", "exhaustive".into());
    }
    report.header_entry("cache", status.as_str().into());

    let dev_rows = match &table {
        Some(t) if matches!(fibers.mode, FiberMode::Exhaustive) && fibers.arity == 2 => {
            Some(deviation_report(t, &fibers)?)
        }
        _ => None,
    };

    let mut text = String::from("class\torder\tsize\tcount\tdelta\tdelta_float\te_bound\n");
    let mut csv = String::from("class,order,size,count,delta,delta_float,e_bound\n");
    let mut rows = Vec::new();
    for c in 0..classes.count() {
        let (delta_s, delta_f, e_s) = match &dev_rows {
            Some(rows) => (
                rational_str(&rows[c].delta),
                format!("{}", rational_f64(&rows[c].delta)),
                format!("{}", rows[c].e_bound),
            ),
            None => {
                let ratio = fibers.ratio(c) - num::BigRational::from_integer(1.into());
                (rational_str(&ratio), format!("{}", rational_f64(&ratio)), String::new())
            }
        };
        text.push_str(&format!(
            "{c}\t{}\t{}\t{}\t{delta_s}\t{delta_f}\t{e_s}\n",
            classes.order(c),
            classes.size(c),
            fibers.counts[c]
        ));
        csv.push_str(&format!(
            "{c},{},{},{},{delta_s},{delta_f},{e_s}\n",
            classes.order(c),
            classes.size(c),
            fibers.counts[c]
        ));
        rows.push(json!({
            "class": c,
            "order": classes.order(c),
            "size": classes.size(c),
            "count": fibers.counts[c].to_string(),
            "delta": delta_s,
            "delta_float": delta_f.parse::<f64>().ok(),
            "e_bound": e_s.parse::<f64>().ok(),
        }));
    }

    let mut summary = serde_json::Map::new();
    summary.insert("conservation_ok".into(), json!(true));
    if let Some(t) = &table {
        let bounds = deviation_bounds(t);
        if matches!(fibers.mode, FiberMode::Exhaustive) {
            let dist = Distribution::from_fibers(&fibers);
            let uniform = Distribution::uniform(t.class_sizes());
            let l1 = l1_distance(&dist, &uniform)?;
            summary.insert("l1_to_uniform".into(), json!(rational_str(&l1)));
            summary.insert("l1_to_uniform_float".into(), json!(rational_f64(&l1)));
        }
        summary.insert("zeta2".into(), json!(witten_zeta(t, 2.0)));
        summary.insert("delta_bound".into(), json!(bounds.delta));
        summary.insert("epsilon".into(), json!(bounds.epsilon));
    }
    if match_note != Value::Null {
        summary.insert("verification".into(), match_note.take());
    }
    for (k, v) in &summary {
        match v {
            Value::String(s) => text.push_str(&format!("{k}: {s}\n")),
            other => text.push_str(&format!("{k}: {other}\n")),
        }
    }

    report.json = json!({
        "group": desc,
        "word": word.render(),
        "arity": fibers.arity,
        "rows": rows,
        "summary": Value::Object(summary),
    });
    report.text = text;
    report.csv = csv;

    if exit == 4 {
        eprintln!("error: formula and brute-force fiber tables disagree");
    } else {
        exit = 0;
    }
    Ok((report, exit))
}

fn cmd_prop51(desc: &str, format: Format, cache_dir: Option<&std::path::Path>) -> CmdResult {
    let (group, classes) = setup(desc)?;
    let (table, status) = load_or_compute(&group, &classes, cache_dir)?;
    let rows = wordmap_core::spectral::psl2_delta_report(&group, &classes, &table)?;

    let mut report = Report::new(format!("prop51 --group {desc} --format {}", format.as_str()));
    report.header_entry("group", desc.into());
    report.header_entry("cache", status.as_str().into());

    let mut text = String::from("kind\texponent\tclass\tclosed_form\ttable_delta\tmatch\n");
    let mut csv = String::from("kind,exponent,class,closed_form,table_delta,match\n");
    let mut json_rows = Vec::new();
    let mut all_match = true;
    for r in &rows {
        all_match &= r.matches;
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.kind.name(),
            r.exponent,
            r.class,
            rational_str(&r.closed_form),
            rational_str(&r.table_delta),
            r.matches
        ));
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.kind.name(),
            r.exponent,
            r.class,
            rational_str(&r.closed_form),
            rational_str(&r.table_delta),
            r.matches
        ));
        json_rows.push(json!({
            "kind": r.kind.name(),
            "exponent": r.exponent,
            "class": r.class,
            "closed_form": rational_str(&r.closed_form),
            "table_delta": rational_str(&r.table_delta),
            "match": r.matches,
        }));
    }
    text.push_str(&format!("all_match: {all_match}\n"));
    report.json = json!({ "group": desc, "rows": json_rows, "all_match": all_match });
    report.text = text;
    report.csv = csv;
    if !all_match {
        eprintln!("error: closed-form deviation disagrees with the character table");
        return Ok((report, 4));
    }
    Ok((report, 0))
}

fn cmd_zeta(
    group: Option<&str>,
    family: Option<&str>,
    s: f64,
    format: Format,
    cache_dir: Option<&std::path::Path>,
) -> CmdResult {
    if let Some(desc) = group {
        let (g, classes) = setup(desc)?;
        let _ = &g;
        let (table, status) = load_or_compute(&g, &classes, cache_dir)?;
        let z = witten_zeta(&table, s);
        let bounds = deviation_bounds(&table);
        let mut report = Report::new(format!("zeta --group {desc} --s {s} --format {}", format.as_str()));
        report.header_entry("group", desc.into());
        report.header_entry("cache", status.as_str().into());
        report.text = format!(
            "s: {s}\nzeta: {z}\nexcess: {}\nzeta2_minus_one: {}\ndelta: {}\nepsilon: {}\n",
            z - 1.0,
            rational_str(&bounds.zeta2_minus_one),
            bounds.delta,
            bounds.epsilon
        );
        report.csv = format!(
            "s,zeta,excess,delta,epsilon\n{s},{z},{},{},{}\n",
            z - 1.0,
            bounds.delta,
            bounds.epsilon
        );
        report.json = json!({
            "group": desc,
            "s": s,
            "zeta": z,
            "excess": z - 1.0,
            "zeta2_minus_one": rational_str(&bounds.zeta2_minus_one),
            "delta": bounds.delta,
            "epsilon": bounds.epsilon,
        });
        return Ok((report, 0));
    }
    let family = family.ok_or_else(|| Error::InvalidParameter("zeta needs --group or --family".into()))?;
    let (params, scale_exponent, bound, label): (Vec<u64>, f64, f64, &str) = match family {
        "An" => (vec![5, 6, 7, 8, 9], s, AN_TREND_BOUND, "n"),
        "PSL2" => (vec![5, 7, 8, 9, 11, 13], 1.0, PSL2_TREND_BOUND, "q"),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown family {other} (expected An or PSL2)"
            )))
        }
    };
    let mut tables = Vec::new();
    let mut status = CacheStatus::Off;
    for &p in &params {
        let desc = if family == "An" { format!("A{p}") } else { format!("PSL2({p})") };
        let (g, classes) = setup(&desc)?;
        let (t, st) = load_or_compute(&g, &classes, cache_dir)?;
        status = st;
        tables.push((p, t));
    }
    let refs: Vec<(u64, &CharacterTable)> = tables.iter().map(|(p, t)| (*p, t)).collect();
    let trend = zeta_trend(&refs, s, scale_exponent);
    let bound_ok = trend.max_scaled <= bound;

    let mut report = Report::new(format!("zeta --family {family} --s {s} --format {}", format.as_str()));
    report.header_entry("family", family.into());
    report.header_entry("cache", status.as_str().into());
    let mut text = format!("{label}\tzeta\texcess\tscaled\n");
    let mut csv = format!("{label},zeta,excess,scaled\n");
    let mut json_rows = Vec::new();
    for r in &trend.rows {
        text.push_str(&format!("{}\t{}\t{}\t{}\n", r.parameter, r.zeta, r.excess, r.scaled));
        csv.push_str(&format!("{},{},{},{}\n", r.parameter, r.zeta, r.excess, r.scaled));
        json_rows.push(json!({
            "parameter": r.parameter,
            "zeta": r.zeta,
            "excess": r.excess,
            "scaled": r.scaled,
        }));
    }
    text.push_str(&format!(
        "monotone_decreasing: {}\nmax_scaled: {}\nbound: {bound}\nbound_ok: {bound_ok}\n",
        trend.monotone_decreasing, trend.max_scaled
    ));
    report.json = json!({
        "family": family,
        "s": s,
        "rows": json_rows,
        "monotone_decreasing": trend.monotone_decreasing,
        "max_scaled": trend.max_scaled,
        "bound": bound,
        "bound_ok": bound_ok,
    });
    report.text = text;
    report.csv = csv;
    if !(trend.monotone_decreasing && bound_ok) {
        eprintln!("error: zeta trend assertion failed");
        return Ok((report, 4));
    }
    Ok((report, 0))
}

fn cmd_components(
    desc: &str,
    k: usize,
    extended: bool,
    format: Format,
    cache_dir: Option<&std::path::Path>,
) -> CmdResult {
    let _ = cache_dir;
    let (group, classes) = setup(desc)?;
    let tuples = generating_tuples(&group, &classes, k)?;
    let basic = graph_components(&group, &tuples, &MoveSet::new(k, EdgeSet::Pra))?;
    let ext = graph_components(&group, &tuples, &MoveSet::new(k, EdgeSet::Extended))?;
    let chain_ok = ext.count <= basic.count && basic.count <= 2 * ext.count;
    let d = group.min_generators(&classes)?;
    let iff_applicable = k > d;
    let iff_holds = (basic.count == 1) == (ext.count == 1);

    let orbits = automorphism_action(&group)
        .ok()
        .map(|act| aut_class_orbits(&group, &classes, &act));

    let listed = if extended { &ext } else { &basic };
    let mut report = Report::new(format!(
        "components --group {desc} --k {k} --extended {extended} --format {}",
        format.as_str()
    ));
    report.header_entry("group", desc.into());
    report.header_entry("cache", "off".into());

    let mut text = format!(
        "tuples: {}\nchi_k: {}\nchi_k_extended: {}\nchain_ok: {chain_ok}\n",
        tuples.count(),
        basic.count,
        ext.count
    );
    if iff_applicable {
        text.push_str(&format!("basic_iff_extended_connected: {iff_holds}\n"));
    }
    let mut csv = String::from("component,size,representative_tuple,higman_label\n");
    let mut comp_rows = Vec::new();
    for (i, (&size, &rep)) in listed.sizes.iter().zip(&listed.representatives).enumerate() {
        let tuple = tuples.tuple(rep);
        let label = match (&orbits, k) {
            (Some(orb), 2) => {
                let l = higman_invariant(&group, &classes, orb, tuple);
                Some(l.0)
            }
            _ => None,
        };
        let tuple_str = tuple.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ");
        let label_str = label
            .as_ref()
            .map(|l| l.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        text.push_str(&format!("component {i}: size {size} rep ({tuple_str}) label [{label_str}]\n"));
        csv.push_str(&format!("{i},{size},\"{tuple_str}\",\"{label_str}\"\n"));
        comp_rows.push(json!({
            "component": i,
            "size": size,
            "representative_tuple": tuple,
            "higman_label": label,
        }));
    }
    report.json = json!({
        "group": desc,
        "k": k,
        "tuple_count": tuples.count(),
        "chi_k": basic.count,
        "chi_k_extended": ext.count,
        "chain_ok": chain_ok,
        "min_generators": d,
        "basic_iff_extended_connected": if iff_applicable { json!(iff_holds) } else { Value::Null },
        "listed_edge_set": if extended { "extended" } else { "pra" },
        "components": comp_rows,
    });
    report.text = text;
    report.csv = csv;
    if !chain_ok {
        eprintln!("error: component-count chain violated");
        return Ok((report, 4));
    }
    Ok((report, 0))
}

fn cmd_tsystems(desc: &str, k: usize, format: Format, cache_dir: Option<&std::path::Path>) -> CmdResult {
    let _ = cache_dir;
    let (group, classes) = setup(desc)?;
    let tuples = generating_tuples(&group, &classes, k)?;
    let action = automorphism_action(&group)?;
    let basic = graph_components(&group, &tuples, &MoveSet::new(k, EdgeSet::Pra))?;
    let ext = graph_components(&group, &tuples, &MoveSet::new(k, EdgeSet::Extended))?;
    let (t_count, _) = t_systems(&group, &tuples, &action)?;
    let chain_ok = t_count <= ext.count && ext.count <= basic.count && basic.count <= 2 * ext.count;

    let census = if k == 2 {
        let orbits = aut_class_orbits(&group, &classes, &action);
        Some(t2_invariant_census(&group, &tuples, &classes, &orbits, &action)?)
    } else {
        None
    };
    let census_ok = census.as_ref().map(|c| c.labels.len() <= t_count).unwrap_or(true);

    let mut report = Report::new(format!("tsystems --group {desc} --k {k} --format {}", format.as_str()));
    report.header_entry("group", desc.into());
    report.header_entry("cache", "off".into());
    let mut text = format!(
        "tuples: {}\nt_systems: {t_count}\nchi_k: {}\nchi_k_extended: {}\nchain_ok: {chain_ok}\n",
        tuples.count(),
        basic.count,
        ext.count
    );
    let mut census_json = Value::Null;
    if let Some(c) = &census {
        text.push_str(&format!(
            "census_size: {}\ncensus_le_t_systems: {census_ok}\nmin_centralizer: {}\nout_order: {}\nbound_quantity: {}\n",
            c.labels.len(),
            c.min_centralizer,
            c.out_order,
            rational_str(&c.bound_quantity)
        ));
        census_json = json!({
            "size": c.labels.len(),
            "labels": c.labels.iter().map(|l| l.0.clone()).collect::<Vec<_>>(),
            "min_centralizer": c.min_centralizer,
            "out_order": c.out_order,
            "bound_quantity": rational_str(&c.bound_quantity),
        });
    }
    report.csv = format!(
        "tuples,t_systems,chi_k,chi_k_extended,chain_ok,census_size\n{},{t_count},{},{},{chain_ok},{}\n",
        tuples.count(),
        basic.count,
        ext.count,
        census.as_ref().map(|c| c.labels.len()).unwrap_or(0)
    );
    report.json = json!({
        "group": desc,
        "k": k,
        "tuple_count": tuples.count(),
        "t_systems": t_count,
        "chi_k": basic.count,
        "chi_k_extended": ext.count,
        "chain_ok": chain_ok,
        "census": census_json,
        "census_le_t_systems": census_ok,
    });
    report.text = text;
    if !(chain_ok && census_ok) {
        eprintln!("error: T-system inequality chain violated");
        return Ok((report, 4));
    }
    Ok((report, 0))
}

fn cmd_census(desc: &str, format: Format, cache_dir: Option<&std::path::Path>) -> CmdResult {
    let (group, classes) = setup(desc)?;
    let tuples = generating_tuples(&group, &classes, 2)?;
    let action = automorphism_action(&group)?;
    let orbits = aut_class_orbits(&group, &classes, &action);
    let census = t2_invariant_census(&group, &tuples, &classes, &orbits, &action)?;
    let (t_count, _) = t_systems(&group, &tuples, &action)?;
    let (table, status) = load_or_compute(&group, &classes, cache_dir)?;
    let coverage = commutator_generating_coverage(&group, &tuples, &table)?;

    let mut report = Report::new(format!("census --group {desc} --format {}", format.as_str()));
    report.header_entry("group", desc.into());
    report.header_entry("cache", status.as_str().into());

    let mut text = format!(
        "tuples: {}\ncensus_size: {}\nt_systems: {t_count}\ncensus_le_t_systems: {}\nmin_centralizer: {}\nout_order: {}\nbound_quantity: {}\n",
        tuples.count(),
        census.labels.len(),
        census.labels.len() <= t_count,
        census.min_centralizer,
        census.out_order,
        rational_str(&census.bound_quantity)
    );
    text.push_str(&format!(
        "commutator_coverage: {} / {}\ncoverage_fraction: {}\ncoverage_bound_vacuous: {}\ncoverage_bound_ok: {}\n",
        coverage.count,
        group.order(),
        rational_str(&coverage.fraction),
        coverage.vacuous,
        coverage.ok
    ));
    let mut csv = String::from("label\n");
    for l in &census.labels {
        let s = l.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        text.push_str(&format!("label: [{s}]\n"));
        csv.push_str(&format!("\"{s}\"\n"));
    }
    report.json = json!({
        "group": desc,
        "tuple_count": tuples.count(),
        "census_size": census.labels.len(),
        "labels": census.labels.iter().map(|l| l.0.clone()).collect::<Vec<_>>(),
        "t_systems": t_count,
        "census_le_t_systems": census.labels.len() <= t_count,
        "min_centralizer": census.min_centralizer,
        "out_order": census.out_order,
        "bound_quantity": rational_str(&census.bound_quantity),
        "coverage_count": coverage.count,
        "coverage_fraction": rational_str(&coverage.fraction),
        "coverage_bound_vacuous": coverage.vacuous,
        "coverage_bound_ok": coverage.ok,
    });
    report.text = text;
    report.csv = csv;
    Ok((report, 0))
}

fn cmd_walk(desc: &str, k: usize, steps: u64, burn_in: u64, samples: u64, seed: u64, format: Format) -> CmdResult {
    let (group, classes) = setup(desc)?;
    let walk = pra_walk(&group, &classes, k, steps, burn_in, samples, seed)?;

    let mut report = Report::new(format!(
        "walk --group {desc} --k {k} --steps {steps} --burn-in {burn_in} --samples {samples} --seed {seed} --format {}",
        format.as_str()
    ));
    report.header_entry("group", desc.into());
    report.header_entry("seed", seed.to_string());
    report.header_entry("k", k.to_string());
    report.header_entry("steps", steps.to_string());
    report.header_entry("burn_in", burn_in.to_string());
    report.header_entry("samples", samples.to_string());
    report.header_entry("cache", "off".into());

    let start = walk
        .start_tuple
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let text = format!(
        "start_tuple: ({start})\nsamples: {}\nl1_to_uniform: {}\nl1_to_uniform_float: {}\n",
        walk.samples.len(),
        rational_str(&walk.l1_to_uniform),
        walk.l1_f64()
    );
    let mut csv = String::from("position,element\n");
    for (i, &g) in walk.samples.iter().enumerate() {
        csv.push_str(&format!("{i},{g}\n"));
    }
    report.json = json!({
        "group": desc,
        "k": k,
        "steps": steps,
        "burn_in": burn_in,
        "samples": samples,
        "seed": seed,
        "start_tuple": walk.start_tuple,
        "l1_to_uniform": rational_str(&walk.l1_to_uniform),
        "l1_to_uniform_float": walk.l1_f64(),
        "counts": walk.counts,
    });
    report.text = text;
    report.csv = csv;
    Ok((report, 0))
}

fn cmd_bound_check(desc: &str, format: Format, cache_dir: Option<&std::path::Path>) -> CmdResult {
    let (group, classes) = setup(desc)?;
    use wordmap_core::group::Family;
    match group.family() {
        Family::Symmetric(_) => {
            let (table, status) = load_or_compute(&group, &classes, cache_dir)?;
            let rows = wordmap_core::spectral::sn_character_bound_check(&group, &classes, &table)?;
            let total_violations: usize = rows.iter().map(|r| r.violations.len()).sum();
            let mut report = Report::new(format!("bound-check --group {desc} --format {}", format.as_str()));
            report.header_entry("group", desc.into());
            report.header_entry("cache", status.as_str().into());
            let mut text = String::from("class\tfixed_points\tskipped\texponent_deficit\tviolations\n");
            let mut csv = String::from("class,fixed_points,skipped,exponent_deficit,violations\n");
            let mut json_rows = Vec::new();
            for r in &rows {
                text.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    r.class,
                    r.fixed_points,
                    r.skipped,
                    r.exponent_deficit,
                    r.violations.len()
                ));
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.class,
                    r.fixed_points,
                    r.skipped,
                    r.exponent_deficit,
                    r.violations.len()
                ));
                json_rows.push(json!({
                    "class": r.class,
                    "fixed_points": r.fixed_points,
                    "skipped": r.skipped,
                    "exponent_deficit": r.exponent_deficit,
                    "violations": r.violations,
                }));
            }
            text.push_str(&format!("total_violations: {total_violations}\n"));
            report.json = json!({
                "group": desc,
                "kind": "sn-character-bound",
                "rows": json_rows,
                "total_violations": total_violations,
            });
            report.text = text;
            report.csv = csv;
            let code = if total_violations == 0 { 0 } else { 4 };
            if code == 4 {
                eprintln!("error: character bound violated");
            }
            Ok((report, code))
        }
        Family::Alternating(n) => {
            let n = *n;
            let mut report = Report::new(format!("bound-check --group {desc} --format {}", format.as_str()));
            report.header_entry("group", desc.into());
            report.header_entry("cache", "off".into());
            let mut text = String::from("fixed_points\tbound\texact_fraction\tok\n");
            let mut csv = String::from("fixed_points,bound,exact_fraction,ok\n");
            let mut json_rows = Vec::new();
            let mut all_ok = true;
            for f in 1..=n as u32 {
                let row = wordmap_core::spectral::an_fixed_point_tail(&group, &classes, f)?;
                all_ok &= row.ok;
                text.push_str(&format!(
                    "{f}\t{}\t{}\t{}\n",
                    rational_str(&row.bound),
                    rational_str(&row.exact_fraction),
                    row.ok
                ));
                csv.push_str(&format!(
                    "{f},{},{},{}\n",
                    rational_str(&row.bound),
                    rational_str(&row.exact_fraction),
                    row.ok
                ));
                json_rows.push(json!({
                    "fixed_points": f,
                    "bound": rational_str(&row.bound),
                    "exact_fraction": rational_str(&row.exact_fraction),
                    "ok": row.ok,
                }));
            }
            text.push_str(&format!("all_ok: {all_ok}\n"));
            report.json = json!({
                "group": desc,
                "kind": "an-fixed-point-tail",
                "rows": json_rows,
                "all_ok": all_ok,
            });
            report.text = text;
            report.csv = csv;
            let code = if all_ok { 0 } else { 4 };
            Ok((report, code))
        }
        _ => Err(Error::InvalidParameter(format!(
            "bound-check supports S_n and A_n groups, not {desc}"
        ))),
    }
}

fn cmd_cache_check(desc: &str, format: Format, cache_dir: Option<&std::path::Path>) -> CmdResult {
    let dir = cache_dir.ok_or_else(|| {
        Error::InvalidParameter("cache-check needs --cache-dir or WORDMAP_CACHE_DIR".into())
    })?;
    let (group, classes) = setup(desc)?;
    let rt = cache::cache_roundtrip(&group, &classes, dir)?;
    let ok = rt.exact_data_equal && rt.downstream_equal;
    let mut report = Report::new(format!("cache-check --group {desc} --format {}", format.as_str()));
    report.header_entry("group", desc.into());
    report.header_entry("cache", rt.status_after_write.as_str().into());
    report.text = format!(
        "reload_status: {}\nexact_data_equal: {}\ndownstream_equal: {}\nok: {ok}\n",
        rt.status_after_write.as_str(),
        rt.exact_data_equal,
        rt.downstream_equal
    );
    report.csv = format!(
        "reload_status,exact_data_equal,downstream_equal,ok\n{},{},{},{ok}\n",
        rt.status_after_write.as_str(),
        rt.exact_data_equal,
        rt.downstream_equal
    );
    report.json = json!({
        "group": desc,
        "reload_status": rt.status_after_write.as_str(),
        "exact_data_equal": rt.exact_data_equal,
        "downstream_equal": rt.downstream_equal,
        "ok": ok,
    });
    Ok((report, if ok { 0 } else { 4 }))
}
