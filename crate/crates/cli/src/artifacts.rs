use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use smallcovers::{is_characteristic, Alphabet, CombPolytope, EquivClass, Labeling};

use crate::error::CliError;

const LABELINGS_MAGIC: &str = "# smallcovers labelings";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// File names used for one polytope inside an output directory.
#[derive(Clone, Debug)]
pub struct Layout {
    dir: PathBuf,
    stem: String,
}

impl Layout {
    pub fn new(dir: &Path, stem: &str) -> Self {
        Layout {
            dir: dir.to_path_buf(),
            stem: stem.to_string(),
        }
    }

    fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}.{suffix}", self.stem))
    }

    pub fn polytope(&self) -> PathBuf {
        self.path("polytope.json")
    }

    pub fn labelings(&self) -> PathBuf {
        self.path("labelings.csv")
    }

    pub fn classes(&self) -> PathBuf {
        self.path("classes.json")
    }

    pub fn report(&self, format: Format) -> PathBuf {
        self.path(match format {
            Format::Csv => "classes.csv",
            Format::Markdown => "classes.md",
        })
    }

    pub fn summary(&self) -> PathBuf {
        self.path("summary.txt")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
}

pub fn labelings_header(polytope_hash: &str, alphabet: &Alphabet) -> String {
    format!(
        "{LABELINGS_MAGIC} polytope={polytope_hash} alphabet={}",
        alphabet.to_csv()
    )
}

pub fn render_labelings(header: &str, labelings: &[Labeling]) -> String {
    let mut out = String::with_capacity(header.len() + 1 + labelings.len() * 64);
    out.push_str(header);
    out.push('\n');
    for lab in labelings {
        out.push_str(&lab.to_csv());
        out.push('\n');
    }
    out
}

/// Header fields of a labelings file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelingsHeader {
    pub polytope_hash: String,
    pub alphabet: Vec<u32>,
}

fn parse_values(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|v| v.trim().parse::<u32>().map_err(|e| format!("{v:?}: {e}")))
        .collect()
}

pub fn parse_header(line: &str) -> Result<LabelingsHeader, CliError> {
    let bad = || CliError::malformed("labelings", format!("unrecognized header {line:?}"));
    let rest = line.strip_prefix(LABELINGS_MAGIC).ok_or_else(bad)?;
    let mut hash = None;
    let mut alphabet = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("polytope", v)) => hash = Some(v.to_string()),
            Some(("alphabet", v)) => alphabet = Some(parse_values(v).map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    Ok(LabelingsHeader {
        polytope_hash: hash.ok_or_else(bad)?,
        alphabet: alphabet.ok_or_else(bad)?,
    })
}

/// Parses a labelings file and re-validates every record against `p`.
pub fn load_labelings(
    text: &str,
    p: &CombPolytope,
) -> Result<(LabelingsHeader, Vec<Labeling>), CliError> {
    let mut lines = text.lines();
    let header = parse_header(lines.next().unwrap_or(""))?;
    let n = p.dim();
    let mut out = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = k + 2;
        let values = parse_values(line)
            .map_err(|e| CliError::malformed("labelings", format!("line {row}: {e}")))?;
        let lab = Labeling::from_values(&values, n)
            .map_err(|e| CliError::malformed("labelings", format!("line {row}: {e}")))?;
        let valid = is_characteristic(lab.labels(), p)
            .map_err(|e| CliError::validation("labelings", format!("line {row}: {e}")))?;
        if !valid {
            return Err(CliError::validation(
                "labelings",
                format!("line {row} is not a characteristic labeling"),
            ));
        }
        if !lab.is_normalized(n) {
            return Err(CliError::validation(
                "labelings",
                format!("line {row} is not normalized"),
            ));
        }
        out.push(lab);
    }
    Ok((header, out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub representative: Vec<u32>,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub group: String,
    pub fingerprint: String,
    pub isometry_order: u64,
}

impl ClassRow {
    pub fn from_class(class: &EquivClass) -> Self {
        ClassRow {
            representative: class.representative.values(),
            orbit_size: class.orbit_size,
            stabilizer_order: class.stabilizer_order(),
            group: class
                .name
                .clone()
                .unwrap_or_else(|| class.fingerprint.describe()),
            fingerprint: class.fingerprint.describe(),
            isometry_order: class.isometry_order,
        }
    }
}

/// Cached classification, keyed by the labelings it was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesFile {
    pub polytope: String,
    pub polytope_sha256: String,
    pub labelings_sha256: String,
    pub dimension: usize,
    pub alphabet: Vec<u32>,
    pub group_order: usize,
    pub labelings: usize,
    pub classes: Vec<ClassRow>,
}

impl ClassesFile {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plain data serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::malformed("classes", e))
    }
}

fn join(values: &[u32]) -> String {
    values
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn render_report(classes: &ClassesFile, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "class",
                "representative",
                "orbit_size",
                "stabilizer_order",
                "group",
                "fingerprint",
                "isometry_order",
            ])
            .expect("in-memory write");
            for (k, row) in classes.classes.iter().enumerate() {
                w.write_record([
                    (k + 1).to_string(),
                    join(&row.representative),
                    row.orbit_size.to_string(),
                    row.stabilizer_order.to_string(),
                    row.group.clone(),
                    row.fingerprint.clone(),
                    row.isometry_order.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
        Format::Markdown => {
            let mut out = String::from(
                "| class | representative | orbit size | stabilizer order | group | fingerprint | isometry order |\n\
                 |---:|---|---:|---:|---|---|---:|\n",
            );
            for (k, row) in classes.classes.iter().enumerate() {
                let rep: Vec<String> = row.representative.iter().map(u32::to_string).collect();
                out.push_str(&format!(
                    "| {} | ({}) | {} | {} | {} | {} | {} |\n",
                    k + 1,
                    rep.join(", "),
                    row.orbit_size,
                    row.stabilizer_order,
                    row.group,
                    row.fingerprint,
                    row.isometry_order
                ));
            }
            out
        }
    }
}

pub fn render_summary(classes: &ClassesFile) -> String {
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for row in &classes.classes {
        *histogram.entry(row.stabilizer_order).or_default() += 1;
    }
    let listing = |items: Vec<String>| {
        if items.is_empty() {
            "none".to_string()
        } else {
            items.join(" ")
        }
    };
    let histogram = listing(histogram.iter().map(|(o, c)| format!("{o}x{c}")).collect());
    let isometries = listing(
        classes
            .classes
            .iter()
            .map(|row| row.isometry_order.to_string())
            .collect(),
    );
    format!(
        "polytope: {}\npolytope sha256: {}\nalphabet: {}\nsymmetry group order: {}\nlabelings: {}\nclasses: {}\nstabilizer orders: {}\nisometry orders: {}\n",
        classes.polytope,
        classes.polytope_sha256,
        join(&classes.alphabet),
        classes.group_order,
        classes.labelings,
        classes.classes.len(),
        histogram,
        isometries,
    )
}
