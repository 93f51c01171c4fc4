//! Batch experiment runner: sweeps parameter grids, compares criterion
//! predictions with computed verdicts, manages the point-count cache, and
//! emits CSV / JSON-lines reports.
//!
//! Rows that would contradict a proved theorem abort the run — they indicate
//! a bug, not a discovery. The one open direction (the converse of the
//! Artin-Schreier sufficiency condition) is treated as an experiment: rows
//! where the condition fails but the verdict comes out supersingular are
//! reported as converse-counterexample candidates, never asserted away.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{predict, TriState};
use crate::weil::is_supersingular;
use crate::zeta::{l_polynomial_with_counter, count_points, CurveFamily, CurveInstance};

pub const CACHE_VERSION: u32 = 1;
pub const DEFAULT_PHI_BOUND: u64 = 1000;

// ---- point-count cache ----

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    key: String,
    count: u64,
}

/// Append-friendly JSON-lines cache: a version header line, then one record
/// per computed count. Entries are immutable once written; a conflicting
/// re-put is a determinism violation and a hard error.
pub struct PointCountCache {
    inner: Mutex<CacheInner>,
}

struct CacheInner {
    path: Option<PathBuf>,
    entries: BTreeMap<String, u64>,
}

impl PointCountCache {
    pub fn in_memory() -> Self {
        PointCountCache {
            inner: Mutex::new(CacheInner {
                path: None,
                entries: BTreeMap::new(),
            }),
        }
    }

    /// Load an existing cache file or start a fresh one at `path`. Parse or
    /// version failures report CorruptCache and leave the file untouched.
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = BTreeMap::new();
        match std::fs::read_to_string(path) {
            Ok(text) => {
                let mut lines = text.lines().filter(|l| !l.trim().is_empty());
                let header = lines
                    .next()
                    .ok_or_else(|| Error::CorruptCache("empty file".into()))?;
                let header: CacheHeader = serde_json::from_str(header)
                    .map_err(|e| Error::CorruptCache(format!("bad header: {e}")))?;
                if header.version != CACHE_VERSION {
                    return Err(Error::CorruptCache(format!(
                        "version {} (expected {CACHE_VERSION})",
                        header.version
                    )));
                }
                for line in lines {
                    let rec: CacheLine = serde_json::from_str(line)
                        .map_err(|e| Error::CorruptCache(format!("bad record: {e}")))?;
                    if let Some(existing) = entries.insert(rec.key.clone(), rec.count) {
                        if existing != rec.count {
                            return Err(Error::CorruptCache(format!(
                                "conflicting entries for {}",
                                rec.key
                            )));
                        }
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        Ok(PointCountCache {
            inner: Mutex::new(CacheInner {
                path: Some(path.to_path_buf()),
                entries,
            }),
        })
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.inner.lock().unwrap().entries.get(key).copied()
    }

    pub fn put(&self, key: &str, count: u64) -> Result<()> {
        let mut inner = self.inner.lock().unwrap();
        if let Some(&existing) = inner.entries.get(key) {
            if existing != count {
                return Err(Error::CacheConflict(key.to_string()));
            }
            return Ok(()); // idempotent re-put
        }
        inner.entries.insert(key.to_string(), count);
        if let Some(path) = inner.path.clone() {
            let fresh = !path.exists();
            let mut file = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(&path)?;
            if fresh {
                writeln!(
                    file,
                    "{}",
                    serde_json::to_string(&CacheHeader {
                        version: CACHE_VERSION
                    })
                    .unwrap()
                )?;
            }
            writeln!(
                file,
                "{}",
                serde_json::to_string(&CacheLine {
                    key: key.to_string(),
                    count
                })
                .unwrap()
            )?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Count points through the cache: hits skip enumeration entirely.
pub fn cached_count(
    cache: &PointCountCache,
    curve: &CurveInstance,
    k: u32,
) -> Result<u64> {
    let key = curve.cache_key(k);
    if let Some(hit) = cache.get(&key) {
        return Ok(hit);
    }
    let computed = count_points(curve, k)?;
    cache.put(&key, computed)?;
    Ok(computed)
}

// ---- survey configuration ----

fn default_cap_points() -> u64 {
    crate::zeta::DEFAULT_POINTS_CAP
}

fn default_phi_bound() -> u64 {
    DEFAULT_PHI_BOUND
}

/// One family grid of a survey.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GridSpec {
    /// y^qas - y = x^n over F_p for n in n_range (inclusive), gcd(n, p) = 1.
    ArtinSchreier { p: u64, qas: u64, n_range: [u64; 2] },
    /// Fermat curves over F_{p^r} for n in n_range (inclusive), gcd(n, p) = 1.
    Fermat { p: u64, r: u32, n_range: [u64; 2] },
    /// Explicit (n, a, b) cyclic-cover triples over F_{p^r}.
    ThreePoint { p: u64, r: u32, triples: Vec<[u64; 3]> },
}

/// Survey configuration: family grids plus the caps. `cap_points` bounds
/// q^genus for point counting; `phi_bound` bounds 2·genus, the largest
/// cyclotomic degree the root-of-unity test may need to trial-divide.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub families: Vec<GridSpec>,
    #[serde(default = "default_cap_points")]
    pub cap_points: u64,
    #[serde(default = "default_phi_bound")]
    pub phi_bound: u64,
}

/// One row of a survey report.
#[derive(Debug, Clone, Serialize)]
pub struct SurveyRecord {
    pub family: String,
    pub p: u64,
    pub r: u32,
    pub params: String,
    pub genus: u64,
    pub prediction: String,
    pub witness_s: Option<u64>,
    pub verdict: String,
    pub slopes: String,
    pub agreement: String,
    pub converse_candidate: bool,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct SurveySummary {
    pub rows: u64,
    pub skipped: u64,
    /// Counts per (prediction, verdict) cell.
    pub cells: BTreeMap<String, u64>,
    /// Rows where the open converse direction would have a counterexample.
    pub converse_candidates: u64,
    /// Rows in the converse experiment (condition failed, verdict computed).
    pub converse_rows: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub records: Vec<SurveyRecord>,
    pub summary: SurveySummary,
}

fn family_params(c: &CurveInstance) -> (String, String) {
    match c.family {
        CurveFamily::ArtinSchreier { qas, n } => {
            ("artin-schreier".into(), format!("qas={qas};n={n}"))
        }
        CurveFamily::FermatCurve { n } => ("fermat".into(), format!("n={n}")),
        CurveFamily::ThreePointCover { n, a, b } => {
            ("three-point".into(), format!("n={n};a={a};b={b}"))
        }
    }
}

fn grid_instances(grid: &GridSpec) -> Result<Vec<CurveInstance>> {
    let mut out = vec![];
    match grid {
        GridSpec::ArtinSchreier { p, qas, n_range } => {
            for n in n_range[0]..=n_range[1] {
                if crate::cyclotomic::gcd(n, *p) != 1 {
                    continue;
                }
                out.push(CurveInstance::new(
                    CurveFamily::ArtinSchreier { qas: *qas, n },
                    *p,
                    1,
                )?);
            }
        }
        GridSpec::Fermat { p, r, n_range } => {
            for n in n_range[0]..=n_range[1] {
                if crate::cyclotomic::gcd(n, *p) != 1 {
                    continue;
                }
                out.push(CurveInstance::new(CurveFamily::FermatCurve { n }, *p, *r)?);
            }
        }
        GridSpec::ThreePoint { p, r, triples } => {
            for t in triples {
                out.push(CurveInstance::new(
                    CurveFamily::ThreePointCover {
                        n: t[0],
                        a: t[1],
                        b: t[2],
                    },
                    *p,
                    *r,
                )?);
            }
        }
    }
    Ok(out)
}

fn within_caps(c: &CurveInstance, config: &SurveyConfig) -> bool {
    let g = c.genus();
    if 2 * g > config.phi_bound {
        return false;
    }
    let mut qg: u64 = 1;
    for _ in 0..g {
        qg = match qg.checked_mul(c.q()) {
            Some(v) if v <= config.cap_points => v,
            _ => return false,
        };
    }
    true
}

/// Run a survey. Rows contradicting a proved theorem abort with
/// [`Error::TheoremContradiction`]; over-cap instances become "skipped" rows.
pub fn survey(config: &SurveyConfig, cache: &PointCountCache) -> Result<SurveyReport> {
    let mut records = Vec::new();
    let mut summary = SurveySummary::default();
    for grid in &config.families {
        for instance in grid_instances(grid)? {
            let started = Instant::now();
            let (family, params) = family_params(&instance);
            let pred = predict(&instance)?;
            let prediction = match pred.prediction {
                TriState::Supersingular => "supersingular",
                TriState::NotSupersingular => "not-supersingular",
                TriState::Inapplicable => "inapplicable",
            };
            let mut record = SurveyRecord {
                family: family.clone(),
                p: instance.p,
                r: instance.r,
                params,
                genus: instance.genus(),
                prediction: prediction.into(),
                witness_s: pred.witness_s,
                verdict: "skipped".into(),
                slopes: String::new(),
                agreement: "n/a".into(),
                converse_candidate: false,
                elapsed_ms: 0,
            };
            if !within_caps(&instance, config) {
                summary.skipped += 1;
                record.elapsed_ms = started.elapsed().as_millis() as u64;
                bump(&mut summary, &record);
                records.push(record);
                continue;
            }
            let lpoly = l_polynomial_with_counter(&instance, config.cap_points, &mut |c, k| {
                cached_count(cache, c, k)
            })?;
            let verdict = is_supersingular(&lpoly)?;
            record.verdict = if verdict.supersingular {
                "supersingular"
            } else {
                "not-supersingular"
            }
            .into();
            record.slopes = verdict.slopes.compact();
            let is_as = matches!(instance.family, CurveFamily::ArtinSchreier { .. });
            if is_as && pred.power_condition == Some(false) {
                summary.converse_rows += 1;
                if verdict.supersingular {
                    record.converse_candidate = true;
                    summary.converse_candidates += 1;
                }
            }
            match pred.prediction {
                TriState::Supersingular => {
                    if !verdict.supersingular {
                        return Err(Error::TheoremContradiction(format!(
                            "{family} {} predicted supersingular but is not",
                            record.params
                        )));
                    }
                    record.agreement = "true".into();
                }
                TriState::NotSupersingular => {
                    if verdict.supersingular {
                        return Err(Error::TheoremContradiction(format!(
                            "{family} {} predicted not-supersingular but is",
                            record.params
                        )));
                    }
                    record.agreement = "true".into();
                }
                TriState::Inapplicable => {}
            }
            record.elapsed_ms = started.elapsed().as_millis() as u64;
            bump(&mut summary, &record);
            records.push(record);
        }
    }
    summary.rows = records.len() as u64;
    Ok(SurveyReport { records, summary })
}

fn bump(summary: &mut SurveySummary, record: &SurveyRecord) {
    *summary
        .cells
        .entry(format!("{}|{}", record.prediction, record.verdict))
        .or_default() += 1;
}

// ---- report writers ----

pub const CSV_HEADER: &str =
    "family,p,r,params,genus,prediction,witness_s,verdict,slopes,agreement,converse_candidate,elapsed_ms";

pub fn to_csv(report: &SurveyReport) -> String {
    let mut out = String::from("# weilss-survey v1\n");
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.family,
            r.p,
            r.r,
            r.params,
            r.genus,
            r.prediction,
            r.witness_s.map(|s| s.to_string()).unwrap_or_default(),
            r.verdict,
            r.slopes,
            r.agreement,
            r.converse_candidate,
            r.elapsed_ms
        ));
    }
    out
}

pub fn to_jsonl(report: &SurveyReport) -> String {
    let mut out = String::new();
    for r in &report.records {
        out.push_str(&serde_json::to_string(r).unwrap());
        out.push('\n');
    }
    out.push_str(
        &serde_json::to_string(&serde_json::json!({ "summary": report.summary })).unwrap(),
    );
    out.push('\n');
    out
}

/// Strip the elapsed_ms column so reports can be compared for determinism.
pub fn strip_elapsed(text: &str) -> String {
    text.lines()
        .map(|line| {
            if let Some(idx) = line.rfind(",") {
                if line[idx + 1..].chars().all(|c| c.is_ascii_digit()) && !line.starts_with('#') {
                    return line[..idx].to_string();
                }
            }
            if line.starts_with('{') {
                if let Ok(mut v) = serde_json::from_str::<serde_json::Value>(line) {
                    if let Some(obj) = v.as_object_mut() {
                        obj.remove("elapsed_ms");
                    }
                    return serde_json::to_string(&v).unwrap();
                }
            }
            line.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}
