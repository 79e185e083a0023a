//! On-disk cache of `h_{y,x}` columns as JSON lines.
//!
//! The first line is a header naming the group; every further line is one
//! entry `{"x": word, "y": word, "h": [[exponent, coefficient], ...]}`.
//! Entries are ordered by `x`, then `y` (each by length, then canonical key),
//! so saving the same table twice produces identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use andersen_core::coxeter::{CoxeterError, CoxeterSystem};
use andersen_core::hecke::KLTable;
use andersen_core::laurent::LaurentPoly;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const FORMAT: &str = "klcache";
pub const VERSION: u32 = 1;
pub const NORMALIZATION: &str = "soergel-v";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Malformed { path: PathBuf, line: usize, reason: String },
    #[error("cache is for group {found:?}, expected {expected:?}")]
    WrongGroup { found: String, expected: String },
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub group: String,
    pub normalization: String,
}

#[derive(Serialize)]
struct EntryOut<'a> {
    x: &'a str,
    y: &'a str,
    h: Vec<(i32, Value)>,
}

#[derive(Deserialize)]
struct EntryIn {
    x: String,
    y: String,
    h: Vec<(i32, Value)>,
}

/// Coefficients are JSON integers when they fit in 64 bits, and decimal
/// strings otherwise.
fn coeff_to_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(n) => Value::from(n),
        None => Value::String(c.to_string()),
    }
}

fn coeff_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// Loaded cache contents: column index -> nonzero `(y, h)` entries.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct CacheData {
    pub columns: BTreeMap<u32, Vec<(u32, LaurentPoly)>>,
}

impl CacheData {
    pub fn num_entries(&self) -> usize {
        self.columns.values().map(Vec::len).sum()
    }

    /// Installs every column not already present; returns how many were new.
    pub fn install(self, kl: &KLTable) -> usize {
        self.columns.into_iter().filter(|(x, e)| kl.insert_column(*x, e.clone())).count()
    }
}

/// File name used for a group inside a cache directory.
pub fn file_name(system: &CoxeterSystem) -> String {
    let stem: String = system
        .descriptor()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("{stem}.klcache")
}

/// Writes every computed column of `kl`, atomically (temp file, then rename).
/// Returns the number of entries written.
pub fn save(kl: &KLTable, path: &Path) -> Result<usize, CacheError> {
    let io_err = |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    };
    let system = kl.system();
    let table = kl.group();
    let mut buf = Vec::new();
    let header = Header {
        format: FORMAT.into(),
        version: VERSION,
        group: system.descriptor().into(),
        normalization: NORMALIZATION.into(),
    };
    serde_json::to_writer(&mut buf, &header).expect("serializable header");
    buf.push(b'\n');
    let mut count = 0;
    for x in kl.computed_columns() {
        let xw = system.word_string(table.element(x));
        for (y, h) in kl.column_entries(x).unwrap_or_default() {
            let yw = system.word_string(table.element(y));
            let entry = EntryOut {
                x: &xw,
                y: &yw,
                h: h.terms().map(|(e, c)| (e, coeff_to_json(c))).collect(),
            };
            serde_json::to_writer(&mut buf, &entry).expect("serializable entry");
            buf.push(b'\n');
            count += 1;
        }
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let write = || -> io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })?;
    Ok(count)
}

/// Reads only the header line.
pub fn read_header(path: &Path) -> Result<Header, CacheError> {
    let f = fs::File::open(path).map_err(|source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut first = String::new();
    BufReader::new(f).read_line(&mut first).map_err(|source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_header(path, &first)
}

fn parse_header(path: &Path, line: &str) -> Result<Header, CacheError> {
    let malformed = |reason: String| CacheError::Malformed {
        path: path.to_path_buf(),
        line: 1,
        reason,
    };
    let header: Header = serde_json::from_str(line).map_err(|e| malformed(format!("bad header: {e}")))?;
    if header.format != FORMAT || header.version != VERSION || header.normalization != NORMALIZATION {
        return Err(malformed(format!(
            "unsupported cache {} v{} ({})",
            header.format, header.version, header.normalization
        )));
    }
    Ok(header)
}

/// Loads a cache file for `system`. Every column in the file must be
/// complete: its entries are exactly the nonzero `h_{y,x}`.
pub fn load(system: &CoxeterSystem, path: &Path) -> Result<CacheData, CacheError> {
    let io_err = |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    };
    let f = fs::File::open(path).map_err(io_err)?;
    let table = system.table()?;
    let mut lines = BufReader::new(f).lines();
    let first = lines.next().transpose().map_err(io_err)?.unwrap_or_default();
    let header = parse_header(path, &first)?;
    if header.group != system.descriptor() {
        return Err(CacheError::WrongGroup {
            found: header.group,
            expected: system.descriptor().into(),
        });
    }
    let mut data = CacheData::default();
    for (n, line) in lines.enumerate() {
        let line = line.map_err(io_err)?;
        let lineno = n + 2;
        let malformed = |reason: String| CacheError::Malformed {
            path: path.to_path_buf(),
            line: lineno,
            reason,
        };
        if line.trim().is_empty() {
            continue;
        }
        let entry: EntryIn = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        let x = system.parse_element(&entry.x).map_err(|e| malformed(e.to_string()))?;
        let y = system.parse_element(&entry.y).map_err(|e| malformed(e.to_string()))?;
        let mut h = LaurentPoly::zero();
        for (e, c) in &entry.h {
            let c = coeff_from_json(c).ok_or_else(|| malformed(format!("bad coefficient {c}")))?;
            h.add_term(*e, c);
        }
        let xi = table.index_of(&x).expect("element of this group");
        let yi = table.index_of(&y).expect("element of this group");
        if yi > xi {
            return Err(malformed(format!("y = {:?} is not below x = {:?}", entry.y, entry.x)));
        }
        data.columns.entry(xi).or_default().push((yi, h));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_coefficients_roundtrip() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(coeff_to_json(&big), Value::String(big.to_string()));
        assert_eq!(coeff_from_json(&coeff_to_json(&big)), Some(big));
        assert_eq!(coeff_to_json(&BigInt::from(-7)), Value::from(-7));
        assert_eq!(coeff_from_json(&Value::from(3)), Some(BigInt::from(3)));
        assert_eq!(coeff_from_json(&Value::Bool(true)), None);
    }

    #[test]
    fn file_names() {
        let a3 = CoxeterSystem::from_label("A3").unwrap();
        assert_eq!(file_name(&a3), "A3.klcache");
        let i5 = CoxeterSystem::dihedral(5);
        assert!(file_name(&i5).ends_with(".klcache"));
        assert!(file_name(&i5).chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.'));
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a2.klcache");
        let a2 = CoxeterSystem::from_label("A2").unwrap();
        let kl = KLTable::new(&a2).unwrap();
        kl.compute_all();
        assert_eq!(save(&kl, &path).unwrap(), 19);
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            r#"{"format":"klcache","version":1,"group":"A2","normalization":"soergel-v"}"#
        );
        assert_eq!(text.lines().nth(1).unwrap(), r#"{"x":"","y":"","h":[[0,1]]}"#);
        let data = load(&a2, &path).unwrap();
        assert_eq!(data.num_entries(), 19);
        let fresh = KLTable::new(&a2).unwrap();
        assert_eq!(data.install(&fresh), 6);
        let again = dir.path().join("again.klcache");
        save(&fresh, &again).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());

        let b2 = CoxeterSystem::from_label("B2").unwrap();
        assert!(matches!(load(&b2, &path), Err(CacheError::WrongGroup { .. })));
        fs::write(&again, "{\"format\":\"other\"}\n").unwrap();
        assert!(matches!(load(&a2, &again), Err(CacheError::Malformed { line: 1, .. })));
    }
}
