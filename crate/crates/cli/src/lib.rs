//! The `andersen` command-line tool: Kazhdan-Lusztig queries, Andersen
//! filtration layer tables, the pairing-filtration engine and a persistent
//! cache of KL tables.

pub mod cache;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use andersen_core::andersen::{block_from_weight, AndersenBlock, AndersenError, AndersenReport, BlockDescriptor};
use andersen_core::characters::{bs_character, decompose_kl};
use andersen_core::coxeter::{CoxeterError, CoxeterSystem, GeneratorSet, Weight};
use andersen_core::filtration::{pairing_layer_dims, smith_valuations, FiltrationError, PSeriesMatrix};
use andersen_core::hecke::{HeckeElement, KLTable};
use andersen_core::laurent::{LaurentError, LaurentPoly};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cache::CacheError;
use crate::output::{Doc, Format};

/// Exit status for malformed input.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for well-formed input the mathematics rejects.
pub const EXIT_DOMAIN: i32 = 3;
/// Exit status for I/O failures.
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<CoxeterError> for CliError {
    fn from(e: CoxeterError) -> Self {
        match e {
            CoxeterError::UnknownType(_) | CoxeterError::Parse { .. } | CoxeterError::BadGenerator(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<FiltrationError> for CliError {
    fn from(e: FiltrationError) -> Self {
        match e {
            FiltrationError::NegativeExponent(_) | FiltrationError::Ragged { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<AndersenError> for CliError {
    fn from(e: AndersenError) -> Self {
        match e {
            AndersenError::Coxeter(c) => c.into(),
            AndersenError::Filtration(f) => f.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<LaurentError> for CliError {
    fn from(e: LaurentError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CacheError> for CliError {
    fn from(e: CacheError) -> Self {
        match e {
            CacheError::Io { .. } => CliError::Io(e.to_string()),
            CacheError::Coxeter(c) => c.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "andersen", version, about = "Kazhdan-Lusztig polynomials and Andersen filtration layers")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Do not read or write the KL cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Cache directory (default: $KL_CACHE_DIR, else ~/.cache/andersen).
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order, length of the longest element and number of positive roots.
    Group {
        #[arg(long = "type", value_name = "T")]
        ty: String,
    },
    /// P_{y,x}(q) and h_{y,x}(v).
    Kl {
        #[arg(long = "type", value_name = "T")]
        ty: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// The Kazhdan-Lusztig basis element of x in the standard basis.
    Klbasis {
        #[arg(long = "type", value_name = "T")]
        ty: String,
        #[arg(long)]
        x: String,
    },
    /// The mu-coefficient mu(y, x).
    Mu {
        #[arg(long = "type", value_name = "T")]
        ty: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        x: String,
    },
    /// Bott-Samelson character of a word and its KL decomposition.
    Bs {
        #[arg(long = "type", value_name = "T")]
        ty: String,
        #[arg(long)]
        word: String,
    },
    /// Andersen filtration layers for one pair of cosets.
    Andersen {
        #[arg(long = "type", value_name = "T")]
        ty: String,
        /// Singular subset, e.g. "1,3".
        #[arg(long, value_name = "I")]
        singular: Option<String>,
        /// A rho-dominant weight in fundamental coordinates, e.g. "0,-1/2";
        /// replaces --singular and re-presents the integral Weyl group.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "singular")]
        weight: Option<String>,
        #[arg(long)]
        ybar: String,
        #[arg(long)]
        xbar: String,
    },
    /// Every Andersen report of a block.
    Table {
        #[arg(long = "type", value_name = "T")]
        ty: String,
        #[arg(long, value_name = "I")]
        singular: Option<String>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "singular")]
        weight: Option<String>,
    },
    /// Smith valuations and layer dimensions of a pairing matrix (a JSON
    /// array of arrays of polynomials in v).
    Filtration {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[arg(long, value_name = "N")]
        trunc: Option<usize>,
    },
    /// Time the full KL table of a group.
    Bench {
        #[arg(long = "type", value_name = "T")]
        ty: String,
    },
    /// Save, load or verify a cache file.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    /// Compute the full table of a group and write it.
    Save {
        #[arg(long = "type", value_name = "T")]
        ty: String,
        #[arg(long)]
        path: PathBuf,
    },
    /// Read a cache file and report what it holds.
    Load {
        #[arg(long)]
        path: PathBuf,
    },
    /// Recompute every cached column and compare.
    Verify {
        #[arg(long)]
        path: PathBuf,
    },
}

/// Runs the tool with process streams; returns the exit status.
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
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut ctx = Context {
        cache_dir: cache_dir(&cli),
        err,
    };
    match execute(&cli.command, &mut ctx) {
        Ok(doc) => {
            let _ = out.write_all(doc.render(cli.format).as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    if cli.no_cache {
        return None;
    }
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os("KL_CACHE_DIR").filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache").join("andersen")))
}

struct Context<'a> {
    cache_dir: Option<PathBuf>,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    fn warn(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.err, "warning: {msg}");
    }

    /// A KL table for `system`, seeded from the cache directory if enabled.
    fn open_table(&mut self, system: &CoxeterSystem) -> Result<Tracked, CliError> {
        let kl = KLTable::new(system)?;
        let path = self.cache_dir.as_ref().map(|d| d.join(cache::file_name(system)));
        if let Some(p) = path.as_ref().filter(|p| p.exists()) {
            match cache::load(system, p) {
                Ok(data) => {
                    data.install(&kl);
                }
                Err(e) => self.warn(format!("ignoring cache: {e}")),
            }
        }
        let loaded = kl.num_computed();
        Ok(Tracked { kl, path, loaded })
    }

    /// Writes the table back if it gained columns since it was opened.
    fn close_table(&mut self, kl: &KLTable, path: Option<&Path>, loaded: usize) {
        if let Some(p) = path {
            if kl.num_computed() > loaded {
                if let Err(e) = cache::save(kl, p) {
                    self.warn(format!("could not write cache: {e}"));
                }
            }
        }
    }

    fn close(&mut self, t: &Tracked) {
        self.close_table(&t.kl, t.path.as_deref(), t.loaded);
    }
}

struct Tracked {
    kl: KLTable,
    path: Option<PathBuf>,
    loaded: usize,
}

fn parse_system(ty: &str) -> Result<CoxeterSystem, CliError> {
    Ok(CoxeterSystem::parse(ty)?)
}

fn word_of(system: &CoxeterSystem, w: &andersen_core::coxeter::Element) -> Value {
    Value::String(system.word_string(w))
}

fn poly(p: &LaurentPoly, var: char) -> Value {
    Value::String(p.to_text(var))
}

fn big(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(n.to_string()),
    }
}

fn execute(cmd: &Command, ctx: &mut Context<'_>) -> Result<Doc, CliError> {
    match cmd {
        Command::Group { ty } => group(ty),
        Command::Kl { ty, y, x } => kl_query(ctx, ty, y, x),
        Command::Klbasis { ty, x } => klbasis(ctx, ty, x),
        Command::Mu { ty, y, x } => mu(ctx, ty, y, x),
        Command::Bs { ty, word } => bs(ctx, ty, word),
        Command::Andersen {
            ty,
            singular,
            weight,
            ybar,
            xbar,
        } => {
            let (block, path, loaded) = open_block(ctx, ty, singular.as_deref(), weight.as_deref())?;
            let yc = block.coset_of_word(ybar)?;
            let xc = block.coset_of_word(xbar)?;
            let report = block.layers(yc, xc)?;
            ctx.close_table(block.kl(), path.as_deref(), loaded);
            Ok(report_doc(std::slice::from_ref(&report), true))
        }
        Command::Table { ty, singular, weight } => {
            let (block, path, loaded) = open_block(ctx, ty, singular.as_deref(), weight.as_deref())?;
            let reports = block.full_table();
            ctx.close_table(block.kl(), path.as_deref(), loaded);
            Ok(report_doc(&reports, false))
        }
        Command::Filtration { matrix, trunc } => filtration(matrix, *trunc),
        Command::Bench { ty } => bench(ty),
        Command::Cache { action } => cache_cmd(action),
    }
}

fn group(ty: &str) -> Result<Doc, CliError> {
    let s = parse_system(ty)?;
    let w0 = s.longest_element();
    Ok(Doc::record(vec![
        ("type", json!(s.descriptor())),
        ("rank", json!(s.rank())),
        ("order", big(&BigInt::from(s.order()))),
        ("longest_length", json!(w0.length())),
        ("longest_word", word_of(&s, &w0)),
        ("positive_roots", json!(s.num_positive_roots())),
        ("crystallographic", json!(s.is_crystallographic())),
    ]))
}

fn kl_query(ctx: &mut Context<'_>, ty: &str, y: &str, x: &str) -> Result<Doc, CliError> {
    let s = parse_system(ty)?;
    let (ye, xe) = (s.parse_element(y)?, s.parse_element(x)?);
    let t = ctx.open_table(&s)?;
    let h = t.kl.h_polynomial(&ye, &xe)?;
    let p = t.kl.kl_polynomial(&ye, &xe)?;
    ctx.close(&t);
    Ok(Doc::record(vec![
        ("y", word_of(&s, &ye)),
        ("x", word_of(&s, &xe)),
        ("ldiff", json!(xe.length() as i64 - ye.length() as i64)),
        ("P", poly(&p, 'q')),
        ("h", poly(&h, 'v')),
    ]))
}

fn hecke_rows(s: &CoxeterSystem, h: &HeckeElement) -> Vec<Vec<Value>> {
    h.terms().map(|(w, c)| vec![word_of(s, w), poly(c, 'v')]).collect()
}

fn klbasis(ctx: &mut Context<'_>, ty: &str, x: &str) -> Result<Doc, CliError> {
    let s = parse_system(ty)?;
    let xe = s.parse_element(x)?;
    let t = ctx.open_table(&s)?;
    let b = t.kl.kl_basis(&xe)?;
    ctx.close(&t);
    let rows = hecke_rows(&s, &b);
    let json = json!({
        "x": word_of(&s, &xe),
        "terms": rows.iter().map(|r| json!({"y": r[0], "h": r[1]})).collect::<Vec<_>>(),
    });
    Ok(Doc::table(&["y", "h"], rows).with_json(json))
}

fn mu(ctx: &mut Context<'_>, ty: &str, y: &str, x: &str) -> Result<Doc, CliError> {
    let s = parse_system(ty)?;
    let (ye, xe) = (s.parse_element(y)?, s.parse_element(x)?);
    let t = ctx.open_table(&s)?;
    let m = t.kl.mu(&ye, &xe)?;
    ctx.close(&t);
    Ok(Doc::record(vec![("y", word_of(&s, &ye)), ("x", word_of(&s, &xe)), ("mu", big(&m))]))
}

fn bs(ctx: &mut Context<'_>, ty: &str, word: &str) -> Result<Doc, CliError> {
    let s = parse_system(ty)?;
    let w = s.parse_word(word)?;
    let t = ctx.open_table(&s)?;
    let ch = bs_character(&t.kl, &w)?;
    let dec = decompose_kl(&t.kl, &ch);
    ctx.close(&t);
    let group = t.kl.group();
    let standard = hecke_rows(&s, &ch);
    let kl_rows: Vec<Vec<Value>> = dec.iter().map(|(y, c)| vec![word_of(&s, group.element(y)), poly(c, 'v')]).collect();
    let json = json!({
        "word": word,
        "character": standard.iter().map(|r| json!({"w": r[0], "coeff": r[1]})).collect::<Vec<_>>(),
        "decomposition": kl_rows.iter().map(|r| json!({"w": r[0], "coeff": r[1]})).collect::<Vec<_>>(),
    });
    let rows = standard
        .into_iter()
        .map(|r| [vec![json!("standard")], r].concat())
        .chain(kl_rows.into_iter().map(|r| [vec![json!("kl")], r].concat()))
        .collect();
    Ok(Doc::table(&["basis", "w", "coeff"], rows).with_json(json))
}

fn open_block(
    ctx: &mut Context<'_>,
    ty: &str,
    singular: Option<&str>,
    weight: Option<&str>,
) -> Result<(AndersenBlock, Option<PathBuf>, usize), CliError> {
    let s = parse_system(ty)?;
    let descriptor = match weight {
        Some(w) => {
            let lambda: Weight = w.parse()?;
            if lambda.rank() != s.rank() {
                return Err(CliError::Usage(format!("weight {w} has rank {}, expected {}", lambda.rank(), s.rank())));
            }
            block_from_weight(&s, &lambda)?
        }
        None => {
            let subset = GeneratorSet::parse(singular.unwrap_or(""), s.rank())?;
            BlockDescriptor::new(s, subset)?
        }
    };
    let t = ctx.open_table(&descriptor.ambient)?;
    let block = AndersenBlock::with_table(descriptor, t.kl)?;
    Ok((block, t.path, t.loaded))
}

fn layers_json(layers: &BTreeMap<usize, usize>) -> Value {
    Value::Object(layers.iter().map(|(i, n)| (i.to_string(), json!(n))).collect::<Map<_, _>>())
}

pub fn report_json(r: &AndersenReport) -> Value {
    json!({
        "ybar": r.ybar,
        "xbar": r.xbar,
        "y": r.y,
        "x": r.x,
        "ldiff": r.ldiff,
        "P": r.p.to_text('q'),
        "h": r.h.to_text('v'),
        "layers": layers_json(&r.layers),
        "total": big(&r.total),
    })
}

fn report_doc(reports: &[AndersenReport], single: bool) -> Doc {
    let columns = ["ybar", "xbar", "y", "x", "ldiff", "P", "h", "layers", "total"];
    let rows: Vec<Vec<Value>> = reports
        .iter()
        .map(|r| {
            let j = report_json(r);
            columns.iter().map(|c| j[*c].clone()).collect()
        })
        .collect();
    let mut doc = Doc::table(&columns, rows);
    doc.single = single;
    doc
}

fn filtration(path: &Path, trunc: Option<usize>) -> Result<Doc, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let raw: Vec<Vec<String>> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: expected an array of arrays of strings: {e}", path.display())))?;
    let grid = raw
        .iter()
        .map(|row| row.iter().map(|s| s.parse::<LaurentPoly>()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if grid.is_empty() {
        return Err(CliError::Usage("empty matrix".into()));
    }
    let m = PSeriesMatrix::from_polynomials(&grid, trunc)?;
    let vals = smith_valuations(&m)?;
    let layers = pairing_layer_dims(&m)?;
    Ok(Doc::record(vec![
        ("rows", json!(m.rows())),
        ("cols", json!(m.cols())),
        ("truncation", json!(m.truncation())),
        ("valuations", json!(vals)),
        ("layers", layers_json(&layers)),
    ]))
}

fn bench(ty: &str) -> Result<Doc, CliError> {
    let s = parse_system(ty)?;
    let start = Instant::now();
    let kl = KLTable::new(&s)?;
    let enumerated = start.elapsed();
    kl.compute_all();
    let total = start.elapsed();
    let t = kl.group();
    let (mut pairs, mut max_mu, mut max_coeff) = (0u64, BigInt::from(0), BigInt::from(0));
    for x in 0..t.len() as u32 {
        for (_, h) in kl.column_entries(x).unwrap_or_default() {
            pairs += 1;
            max_mu = max_mu.max(h.coeff(1));
            for (_, c) in h.terms() {
                max_coeff = max_coeff.clone().max(c.clone());
            }
        }
    }
    Ok(Doc::record(vec![
        ("type", json!(s.descriptor())),
        ("elements", json!(t.len())),
        ("comparable_pairs", json!(pairs)),
        ("max_mu", big(&max_mu)),
        ("max_coefficient", big(&max_coeff)),
        ("enumerate_ms", json!(enumerated.as_millis() as u64)),
        ("total_ms", json!(total.as_millis() as u64)),
    ]))
}

fn cache_cmd(action: &CacheAction) -> Result<Doc, CliError> {
    match action {
        CacheAction::Save { ty, path } => {
            let s = parse_system(ty)?;
            let kl = KLTable::new(&s)?;
            kl.compute_all();
            let entries = cache::save(&kl, path)?;
            Ok(Doc::record(vec![
                ("path", json!(path.display().to_string())),
                ("group", json!(s.descriptor())),
                ("columns", json!(kl.num_computed())),
                ("entries", json!(entries)),
            ]))
        }
        CacheAction::Load { path } => {
            let header = cache::read_header(path)?;
            let s = parse_system(&header.group)?;
            let data = cache::load(&s, path)?;
            Ok(Doc::record(vec![
                ("path", json!(path.display().to_string())),
                ("group", json!(header.group)),
                ("columns", json!(data.columns.len())),
                ("entries", json!(data.num_entries())),
            ]))
        }
        CacheAction::Verify { path } => {
            let header = cache::read_header(path)?;
            let s = parse_system(&header.group)?;
            let data = cache::load(&s, path)?;
            let reference = KLTable::new(&s)?;
            let mut mismatches = Vec::new();
            for (x, entries) in &data.columns {
                let mut got = entries.clone();
                got.sort_by_key(|(y, _)| *y);
                if reference.recompute_column(*x) != got {
                    mismatches.push(s.word_string(reference.group().element(*x)));
                }
            }
            if !mismatches.is_empty() {
                return Err(CliError::Domain(format!(
                    "{} cached column(s) disagree with recomputation: {}",
                    mismatches.len(),
                    mismatches.join(" ")
                )));
            }
            Ok(Doc::record(vec![
                ("path", json!(path.display().to_string())),
                ("group", json!(header.group)),
                ("columns", json!(data.columns.len())),
                ("entries", json!(data.num_entries())),
                ("ok", json!(true)),
            ]))
        }
    }
}
