//! File formats.
//!
//! * Edge list: header `# nodes=<n>`, then one whitespace-separated `i j`
//!   pair per line, 0-based, written with `i < j` in sorted order. Other
//!   lines starting with `#` and blank lines are ignored on read. Without a
//!   header the node count is one more than the largest id.
//! * Attributes: CSV `node,binary,continuous[,outcome]`, one row per node
//!   in id order. Continuous values are written with 17 significant digits.
//! * Waves: CSV `node,wave`.
//! * Parameters: CSV `effect,value` with each effect exactly once.
//! * Experiment summaries: CSV with one row per (cell, effect).
//!
//! Every writer goes through a temporary file in the target directory that
//! is renamed into place.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::effects::{Effect, ParameterVector, NUM_EFFECTS};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::harness::{ExperimentConfig, ExperimentSummary, SamplingCell};
use crate::model::AttributeTable;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Write `bytes` to `path` via a temporary file and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(io_err(path))
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# nodes={}\n", g.node_count());
    for (a, b) in g.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    write_atomic(path, format_edge_list(g).as_bytes())
}

pub fn read_edge_list(path: &Path, one_based: bool) -> Result<Graph> {
    parse_edge_list(BufReader::new(open(path)?), path, one_based)
}

/// Parse an edge list; `origin` only labels error messages.
pub fn parse_edge_list<R: BufRead>(reader: R, origin: &Path, one_based: bool) -> Result<Graph> {
    let mut declared: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    let mut lines = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(io_err(origin))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("nodes=") {
                if declared.is_some() {
                    return Err(parse_err(origin, lineno, "repeated nodes header"));
                }
                let n = v
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(origin, lineno, format!("bad node count {v:?}")))?;
                declared = Some((n, lineno));
            }
            continue;
        }
        let mut fields = text.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(origin, lineno, "expected two node ids"));
        };
        let id = |s: &str| -> Result<usize> {
            let v = s
                .parse::<usize>()
                .map_err(|_| parse_err(origin, lineno, format!("bad node id {s:?}")))?;
            if one_based {
                v.checked_sub(1)
                    .ok_or_else(|| parse_err(origin, lineno, "node id 0 in a 1-based file"))
            } else {
                Ok(v)
            }
        };
        let (a, b) = (id(a)?, id(b)?);
        if a == b {
            return Err(parse_err(origin, lineno, format!("self-loop on node {a}")));
        }
        pairs.push((a, b));
        lines.push(lineno);
    }
    let n = match declared {
        Some((n, _)) => n,
        None => pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0),
    };
    for (&(a, b), &lineno) in pairs.iter().zip(&lines) {
        if a.max(b) >= n {
            return Err(parse_err(
                origin,
                lineno,
                format!("node id {} exceeds declared count {n}", a.max(b)),
            ));
        }
    }
    Graph::from_edge_list(&pairs, n)
}

fn bool_field(s: &str, path: &Path, line: usize, column: &str) -> Result<bool> {
    match s.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(parse_err(path, line, format!("{column} must be 0 or 1, got {other:?}"))),
    }
}

/// Attribute table read from a file, and whether it had an outcome column.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeFile {
    pub table: AttributeTable,
    pub has_outcome: bool,
}

pub fn format_attributes(attrs: &AttributeTable, with_outcome: bool) -> String {
    let mut out = String::from(if with_outcome {
        "node,binary,continuous,outcome\n"
    } else {
        "node,binary,continuous\n"
    });
    for i in 0..attrs.len() {
        out.push_str(&format!("{i},{},{:.16e}", attrs.binary[i] as u8, attrs.continuous[i]));
        if with_outcome {
            out.push_str(&format!(",{}", attrs.outcome[i] as u8));
        }
        out.push('\n');
    }
    out
}

pub fn write_attributes(path: &Path, attrs: &AttributeTable, with_outcome: bool) -> Result<()> {
    write_atomic(path, format_attributes(attrs, with_outcome).as_bytes())
}

pub fn read_attributes(path: &Path) -> Result<AttributeFile> {
    parse_attributes(open(path)?, path)
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader)
}

fn header_check(rdr: &mut csv::Reader<impl Read>, origin: &Path, allowed: &[&[&str]]) -> Result<usize> {
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(origin, 1, e.to_string()))?
        .clone();
    let got: Vec<&str> = headers.iter().collect();
    allowed
        .iter()
        .position(|h| *h == got.as_slice())
        .ok_or_else(|| {
            parse_err(
                origin,
                1,
                format!("unexpected header {:?}, expected {}", got.join(","), allowed[0].join(",")),
            )
        })
}

fn row_line(rec: &csv::StringRecord, fallback: usize) -> usize {
    rec.position().map_or(fallback, |p| p.line() as usize)
}

pub fn parse_attributes<R: Read>(reader: R, origin: &Path) -> Result<AttributeFile> {
    let mut rdr = csv_reader(reader);
    let which = header_check(
        &mut rdr,
        origin,
        &[&["node", "binary", "continuous", "outcome"], &["node", "binary", "continuous"]],
    )?;
    let has_outcome = which == 0;
    let (mut binary, mut continuous, mut outcome) = (Vec::new(), Vec::new(), Vec::new());
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(origin, idx + 2, e.to_string()))?;
        let line = row_line(&rec, idx + 2);
        let node: usize = rec[0]
            .parse()
            .map_err(|_| parse_err(origin, line, format!("bad node id {:?}", &rec[0])))?;
        if node != idx {
            return Err(parse_err(origin, line, format!("expected node {idx}, found {node}")));
        }
        binary.push(bool_field(&rec[1], origin, line, "binary")?);
        let v: f64 = rec[2]
            .parse()
            .map_err(|_| parse_err(origin, line, format!("bad continuous value {:?}", &rec[2])))?;
        if !v.is_finite() {
            return Err(parse_err(origin, line, "continuous value must be finite"));
        }
        continuous.push(v);
        outcome.push(if has_outcome { bool_field(&rec[3], origin, line, "outcome")? } else { false });
    }
    Ok(AttributeFile {
        table: AttributeTable::new(binary, continuous, outcome)?,
        has_outcome,
    })
}

/// Read attributes and check they cover exactly the graph's nodes.
pub fn read_attributes_for(path: &Path, g: &Graph) -> Result<AttributeFile> {
    let a = read_attributes(path)?;
    if a.table.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "{} has {} rows but the network has {} nodes",
            path.display(),
            a.table.len(),
            g.node_count()
        )));
    }
    Ok(a)
}

pub fn format_waves(wave_of: &[usize]) -> String {
    let mut out = String::from("node,wave\n");
    for (i, w) in wave_of.iter().enumerate() {
        out.push_str(&format!("{i},{w}\n"));
    }
    out
}

pub fn write_waves(path: &Path, wave_of: &[usize]) -> Result<()> {
    write_atomic(path, format_waves(wave_of).as_bytes())
}

pub fn read_waves(path: &Path) -> Result<Vec<usize>> {
    parse_waves(open(path)?, path)
}

pub fn parse_waves<R: Read>(reader: R, origin: &Path) -> Result<Vec<usize>> {
    let mut rdr = csv_reader(reader);
    header_check(&mut rdr, origin, &[&["node", "wave"]])?;
    let mut waves = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(origin, idx + 2, e.to_string()))?;
        let line = row_line(&rec, idx + 2);
        let node: usize = rec[0]
            .parse()
            .map_err(|_| parse_err(origin, line, format!("bad node id {:?}", &rec[0])))?;
        if node != idx {
            return Err(parse_err(origin, line, format!("expected node {idx}, found {node}")));
        }
        let w: usize = rec[1]
            .parse()
            .map_err(|_| parse_err(origin, line, format!("bad wave {:?}", &rec[1])))?;
        waves.push(w);
    }
    Ok(waves)
}

pub fn format_params(theta: &ParameterVector) -> String {
    let mut out = String::from("effect,value\n");
    for e in Effect::ALL {
        out.push_str(&format!("{},{:.16e}\n", e.name(), theta[e]));
    }
    out
}

pub fn write_params(path: &Path, theta: &ParameterVector) -> Result<()> {
    write_atomic(path, format_params(theta).as_bytes())
}

pub fn read_params(path: &Path) -> Result<ParameterVector> {
    parse_params(open(path)?, path)
}

pub fn parse_params<R: Read>(reader: R, origin: &Path) -> Result<ParameterVector> {
    let mut rdr = csv_reader(reader);
    header_check(&mut rdr, origin, &[&["effect", "value"]])?;
    let mut seen = [false; NUM_EFFECTS];
    let mut theta = ParameterVector::ZERO;
    let mut last = 1;
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(origin, idx + 2, e.to_string()))?;
        let line = row_line(&rec, idx + 2);
        last = line;
        let e: Effect = rec[0]
            .parse()
            .map_err(|_| parse_err(origin, line, format!("unknown effect {:?}", &rec[0])))?;
        if seen[e.index()] {
            return Err(parse_err(origin, line, format!("{e} given twice")));
        }
        let v: f64 = rec[1]
            .parse()
            .map_err(|_| parse_err(origin, line, format!("bad value {:?}", &rec[1])))?;
        if !v.is_finite() {
            return Err(parse_err(origin, line, "parameter must be finite"));
        }
        seen[e.index()] = true;
        theta[e] = v;
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(parse_err(origin, last, format!("missing effect {}", Effect::ALL[k])));
    }
    Ok(theta)
}

/// Map of sample node ids to ids in the source network, CSV `node,original`.
pub fn format_id_map(to_original: &[usize]) -> String {
    let mut out = String::from("node,original\n");
    for (i, o) in to_original.iter().enumerate() {
        out.push_str(&format!("{i},{o}\n"));
    }
    out
}

pub fn read_experiment_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_experiment_config(&text, path)
}

pub fn parse_experiment_config(text: &str, origin: &Path) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        parse_err(origin, line, e.message().to_owned())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn cell_columns(cell: &SamplingCell) -> [String; 4] {
    match *cell {
        SamplingCell::Full => ["none".into(), String::new(), String::new(), String::new()],
        SamplingCell::RandomNode { .. } => ["random".into(), String::new(), String::new(), String::new()],
        SamplingCell::Snowball { waves, seeds, max_follow } => [
            "snowball".into(),
            waves.to_string(),
            seeds.to_string(),
            max_follow.to_string(),
        ],
    }
}

pub const SUMMARY_HEADER: &str = "scheme,waves,seeds,m,sample_size_mean,effect,true_value,rmse,rmse_lo,rmse_hi,type1,type1_lo,type1_hi,type2,type2_lo,type2_hi,n_converged,n_total";

/// Summary CSV, one row per (cell, effect). Missing values are empty.
pub fn format_summary_csv<'a>(summaries: impl IntoIterator<Item = &'a ExperimentSummary>) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for s in summaries {
        let cell = cell_columns(&s.cell);
        for e in &s.effects {
            let (r, rlo, rhi) = e.rmse.map_or((f64::NAN, f64::NAN, f64::NAN), |r| (r.rmse, r.lo, r.hi));
            let rate = |x: Option<crate::harness::Rate>| x.map_or((f64::NAN, f64::NAN, f64::NAN), |x| (x.rate, x.lo, x.hi));
            let (t1, t1lo, t1hi) = rate(e.type1);
            let (t2, t2lo, t2hi) = rate(e.type2);
            let row = [
                cell[0].clone(),
                cell[1].clone(),
                cell[2].clone(),
                cell[3].clone(),
                num(s.sample_size_mean),
                e.effect.name().to_owned(),
                num(e.true_value),
                num(r),
                num(rlo),
                num(rhi),
                num(t1),
                num(t1lo),
                num(t1hi),
                num(t2),
                num(t2lo),
                num(t2hi),
                s.converged_count.to_string(),
                s.total.to_string(),
            ];
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

/// One row per (cell, replicate) with estimates, standard errors and
/// t-ratios.
pub fn format_replicates_csv<'a>(summaries: impl IntoIterator<Item = &'a ExperimentSummary>) -> String {
    let mut out = String::from("scheme,waves,seeds,m,sample_size,replicate,free_count,converged,error");
    for prefix in ["est", "se", "t"] {
        for e in Effect::ALL {
            out.push_str(&format!(",{prefix}_{}", e.name()));
        }
    }
    out.push('\n');
    for s in summaries {
        let cell = cell_columns(&s.cell);
        for r in &s.records {
            let mut row = vec![
                cell[0].clone(),
                cell[1].clone(),
                cell[2].clone(),
                cell[3].clone(),
                r.sample_size.to_string(),
                r.replicate.to_string(),
                r.free_count.to_string(),
                (r.converged as u8).to_string(),
                csv_escape(r.error.as_deref().unwrap_or("")),
            ];
            row.extend(r.theta_hat.iter().chain(&r.std_errors).chain(&r.t_ratios).map(|&v| num(v)));
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub path: PathBuf,
    pub sha256: String,
}

/// Record of a run: configuration, seed, version, and hashes of every
/// output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub master_seed: u64,
    pub config: serde_json::Value,
    pub outcome_hash: Option<String>,
    pub artifacts: Vec<Artifact>,
    pub created_unix: u64,
}

impl RunManifest {
    pub fn new(config: &impl Serialize, master_seed: u64) -> Result<Self> {
        Ok(RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            master_seed,
            config: serde_json::to_value(config).map_err(|e| Error::invalid(e.to_string()))?,
            outcome_hash: None,
            artifacts: Vec::new(),
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        })
    }

    /// Hash an already written file and list it.
    pub fn add(&mut self, path: &Path) -> Result<()> {
        let sha256 = sha256_file(path)?;
        self.artifacts.push(Artifact {
            path: path.to_path_buf(),
            sha256,
        });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::invalid(e.to_string()))?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }
}
