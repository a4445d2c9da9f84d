//! Character-table cache: one tab-separated record per group file, keyed by
//! a content digest of the group's multiplication data so that any change
//! in element encoding or modulus selection invalidates old records.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use wordmap_core::chartab::{build_character_table, CharacterTable, CycValue};
use wordmap_core::error::{Error, Result};
use wordmap_core::group::classes::ClassData;
use wordmap_core::group::{Family, GroupHandle};

pub const CACHE_VERSION: &str = "v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Off,
    Hit,
    Miss,
    Refreshed,
}

impl CacheStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CacheStatus::Off => "off",
            CacheStatus::Hit => "hit",
            CacheStatus::Miss => "miss",
            CacheStatus::Refreshed => "refreshed",
        }
    }
}

/// Digest of the group's multiplication data: element encodings plus the
/// full product rows of every generator (and the field modulus for PSL2).
pub fn group_digest(group: &GroupHandle) -> String {
    let mut h = Sha256::new();
    h.update(group.descriptor().as_bytes());
    h.update([0u8]);
    h.update((group.order() as u64).to_le_bytes());
    for i in 0..group.order() as u32 {
        h.update(group.code(i).to_le_bytes());
    }
    for &g in group.generators() {
        for x in 0..group.order() as u32 {
            h.update(group.mul(g, x).to_le_bytes());
        }
    }
    if let Family::Psl2 { field, .. } = group.family() {
        for &c in field.modulus() {
            h.update(c.to_le_bytes());
        }
    }
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn record_path(dir: &Path, descriptor: &str) -> PathBuf {
    let sanitized: String = descriptor
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    dir.join(format!("{sanitized}.tsv"))
}

fn modulus_field(group: &GroupHandle) -> String {
    match group.family() {
        Family::Psl2 { field, .. } => field
            .modulus()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("."),
        _ => "-".to_string(),
    }
}

fn render_record(group: &GroupHandle, descriptor: &str, digest: &str, table: &CharacterTable) -> String {
    let classes: Vec<String> = (0..table.class_count())
        .map(|c| format!("{}:{}", table.class_orders()[c], table.class_sizes()[c]))
        .collect();
    let inverse: Vec<String> = (0..table.class_count())
        .map(|c| table.inverse_class(c).to_string())
        .collect();
    let degrees: Vec<String> = table.degrees().iter().map(|d| d.to_string()).collect();
    let values: Vec<String> = (0..table.char_count())
        .map(|chi| {
            (0..table.class_count())
                .map(|c| {
                    let v = table.value(chi, c);
                    let mults: Vec<String> = v.mults.iter().map(|m| m.to_string()).collect();
                    format!("{}~{}", v.order, mults.join("."))
                })
                .collect::<Vec<String>>()
                .join(",")
        })
        .collect();
    format!(
        "{CACHE_VERSION}\t{descriptor}\t{digest}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        modulus_field(group),
        table.group_order(),
        table.exponent(),
        table.prime(),
        table.primitive_root(),
        classes.join(","),
        inverse.join(","),
        degrees.join(","),
        values.join("|"),
    )
}

fn parse_record(line: &str, group: &GroupHandle, classes: &ClassData, digest: &str) -> Result<CharacterTable> {
    let fields: Vec<&str> = line.trim_end_matches('\n').split('\t').collect();
    if fields.len() != 12 {
        return Err(Error::Mismatch("malformed cache record".into()));
    }
    if fields[0] != CACHE_VERSION {
        return Err(Error::Mismatch(format!("cache version {} (want {CACHE_VERSION})", fields[0])));
    }
    if fields[1] != group.descriptor() {
        return Err(Error::Mismatch("cache descriptor mismatch".into()));
    }
    if fields[2] != digest {
        return Err(Error::Mismatch("cache digest mismatch".into()));
    }
    if fields[3] != modulus_field(group) {
        return Err(Error::Mismatch("cache modulus mismatch".into()));
    }
    let order: u64 = fields[4].parse().map_err(|_| Error::Mismatch("bad order field".into()))?;
    let exponent: u64 = fields[5].parse().map_err(|_| Error::Mismatch("bad exponent field".into()))?;
    let prime: u64 = fields[6].parse().map_err(|_| Error::Mismatch("bad prime field".into()))?;
    let root: u64 = fields[7].parse().map_err(|_| Error::Mismatch("bad root field".into()))?;
    let mut class_orders = Vec::new();
    let mut class_sizes = Vec::new();
    for part in fields[8].split(',') {
        let (o, s) = part
            .split_once(':')
            .ok_or_else(|| Error::Mismatch("bad class field".into()))?;
        class_orders.push(o.parse::<u32>().map_err(|_| Error::Mismatch("bad class order".into()))?);
        class_sizes.push(s.parse::<u64>().map_err(|_| Error::Mismatch("bad class size".into()))?);
    }
    let inverse_class: Vec<u32> = fields[9]
        .split(',')
        .map(|x| x.parse::<u32>().map_err(|_| Error::Mismatch("bad inverse class".into())))
        .collect::<Result<_>>()?;
    let degrees: Vec<u64> = fields[10]
        .split(',')
        .map(|x| x.parse::<u64>().map_err(|_| Error::Mismatch("bad degree".into())))
        .collect::<Result<_>>()?;
    let mut values = Vec::new();
    for chi_field in fields[11].split('|') {
        let mut row = Vec::new();
        for val in chi_field.split(',') {
            let (o, mults) = val
                .split_once('~')
                .ok_or_else(|| Error::Mismatch("bad value field".into()))?;
            let order: u64 = o.parse().map_err(|_| Error::Mismatch("bad value order".into()))?;
            let mults: Vec<u64> = mults
                .split('.')
                .map(|m| m.parse::<u64>().map_err(|_| Error::Mismatch("bad multiplicity".into())))
                .collect::<Result<_>>()?;
            if mults.len() != order as usize {
                return Err(Error::Mismatch("multiplicity length mismatch".into()));
            }
            row.push(CycValue { order, mults });
        }
        values.push(row);
    }
    // The record's class ordering must agree with the freshly computed one.
    if order != group.order() as u64
        || class_orders != classes.orders()
        || class_sizes != classes.sizes()
        || (0..classes.count()).any(|c| inverse_class[c] != classes.inverse_class(c))
    {
        return Err(Error::Mismatch("cache class data disagrees with group".into()));
    }
    CharacterTable::assemble(
        order,
        exponent,
        prime,
        root,
        class_sizes,
        class_orders,
        inverse_class,
        degrees,
        values,
    )
}

fn with_lock<T>(dir: &Path, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let lock = dir.join(format!("{name}.lock"));
    let mut tries = 0;
    loop {
        match fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => break,
            Err(_) if tries < 50 => {
                tries += 1;
                std::thread::sleep(std::time::Duration::from_millis(20));
            }
            Err(e) => {
                return Err(Error::Internal(format!("cache lock {}: {e}", lock.display())));
            }
        }
    }
    let out = f();
    let _ = fs::remove_file(&lock);
    out
}

/// Computes or reloads the character table, returning the cache status.
pub fn load_or_compute(
    group: &GroupHandle,
    classes: &ClassData,
    dir: Option<&Path>,
) -> Result<(CharacterTable, CacheStatus)> {
    let Some(dir) = dir else {
        return Ok((build_character_table(group, classes)?, CacheStatus::Off));
    };
    fs::create_dir_all(dir).map_err(|e| Error::Internal(format!("cache dir: {e}")))?;
    let digest = group_digest(group);
    let path = record_path(dir, group.descriptor());
    let mut stale = false;
    if let Ok(line) = fs::read_to_string(&path) {
        match parse_record(&line, group, classes, &digest) {
            Ok(table) => return Ok((table, CacheStatus::Hit)),
            Err(e) => {
                eprintln!("warning: cache record {} unusable ({e}); recomputing", path.display());
                stale = true;
            }
        }
    }
    let table = build_character_table(group, classes)?;
    let record = render_record(group, group.descriptor(), &digest, &table);
    let file_name = path.file_name().unwrap().to_string_lossy().to_string();
    with_lock(dir, &file_name, || {
        let tmp = dir.join(format!("{file_name}.tmp"));
        fs::write(&tmp, record).map_err(|e| Error::Internal(format!("cache write: {e}")))?;
        fs::rename(&tmp, &path).map_err(|e| Error::Internal(format!("cache rename: {e}")))?;
        Ok(())
    })?;
    Ok((table, if stale { CacheStatus::Refreshed } else { CacheStatus::Miss }))
}

/// Compute, write, reload, and verify that the reloaded table reproduces
/// the exact data and all downstream values.
pub struct RoundtripReport {
    pub status_after_write: CacheStatus,
    pub exact_data_equal: bool,
    pub downstream_equal: bool,
}

pub fn cache_roundtrip(group: &GroupHandle, classes: &ClassData, dir: &Path) -> Result<RoundtripReport> {
    let (fresh, _) = load_or_compute(group, classes, Some(dir))?;
    let (reloaded, status) = load_or_compute(group, classes, Some(dir))?;
    let mut exact = fresh.degrees() == reloaded.degrees()
        && fresh.prime() == reloaded.prime()
        && fresh.exponent() == reloaded.exponent()
        && fresh.primitive_root() == reloaded.primitive_root();
    if exact {
        'outer: for chi in 0..fresh.char_count() {
            for c in 0..fresh.class_count() {
                if fresh.value(chi, c) != reloaded.value(chi, c) {
                    exact = false;
                    break 'outer;
                }
            }
        }
    }
    let fresh_fibers = wordmap_core::spectral::frobenius_fibers(&fresh)?;
    let reload_fibers = wordmap_core::spectral::frobenius_fibers(&reloaded)?;
    let fresh_bounds = wordmap_core::spectral::deviation_bounds(&fresh);
    let reload_bounds = wordmap_core::spectral::deviation_bounds(&reloaded);
    let downstream = fresh_fibers.counts == reload_fibers.counts
        && fresh_bounds.zeta2_minus_one == reload_bounds.zeta2_minus_one
        && fresh_bounds.delta.to_bits() == reload_bounds.delta.to_bits()
        && fresh_bounds.epsilon.to_bits() == reload_bounds.epsilon.to_bits()
        && wordmap_core::spectral::witten_zeta(&fresh, 2.0).to_bits()
            == wordmap_core::spectral::witten_zeta(&reloaded, 2.0).to_bits();
    Ok(RoundtripReport {
        status_after_write: status,
        exact_data_equal: exact,
        downstream_equal: downstream,
    })
}
