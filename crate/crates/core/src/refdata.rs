//! Published K- and L-shell binding energies and comparison against them.
//!
//! Files are UTF-8 CSV with the header `z,shell,n,l,source,energy_kev` and an
//! optional trailing `notes` column. Energies are kept as printed (keV).

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::spectra::QuantumState;

const HEADER: [&str; 6] = ["z", "shell", "n", "l", "source", "energy_kev"];

const TABLE1: &str = include_str!("../data/table1.csv");
const TABLE2: &str = include_str!("../data/table2.csv");
const TABLE3: &str = include_str!("../data/table3.csv");

#[derive(Debug, Error)]
pub enum RefDataError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: duplicate entry for Z={z} {shell} {source_kind}")]
    DuplicateKey { line: u64, z: u32, shell: Shell, source_kind: Source },
    #[error("line {line}: binding energy for Z={z} must be negative, got {energy_kev}")]
    SignViolation { line: u64, z: u32, energy_kev: f64 },
    #[error("no {source_kind} reference for Z={z} {shell}")]
    MissingReference { z: u32, shell: Shell, source_kind: Source },
}

/// Level label E_{nl} in the tables' subscript convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shell {
    E00,
    E01,
    E10,
    E11,
}

impl Shell {
    pub const ALL: [Shell; 4] = [Shell::E00, Shell::E01, Shell::E10, Shell::E11];

    pub fn state(self) -> QuantumState {
        match self {
            Shell::E00 => QuantumState::new(0, 0),
            Shell::E01 => QuantumState::new(0, 1),
            Shell::E10 => QuantumState::new(1, 0),
            Shell::E11 => QuantumState::new(1, 1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Shell::E00 => "E00",
            Shell::E01 => "E01",
            Shell::E10 => "E10",
            Shell::E11 => "E11",
        }
    }

    /// Bundled file name for this shell, if the published tables cover it.
    pub fn bundled_file(self) -> Option<&'static str> {
        match self {
            Shell::E00 => Some("table1.csv"),
            Shell::E01 => Some("table2.csv"),
            Shell::E10 => Some("table3.csv"),
            Shell::E11 => None,
        }
    }

    fn bundled_text(self) -> Option<&'static str> {
        match self {
            Shell::E00 => Some(TABLE1),
            Shell::E01 => Some(TABLE2),
            Shell::E10 => Some(TABLE3),
            Shell::E11 => None,
        }
    }
}

impl fmt::Display for Shell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Shell {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Shell::ALL
            .into_iter()
            .find(|sh| sh.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown shell label '{s}' (expected E00, E01, E10 or E11)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Ewa,
    HypervirialPade,
    ShiftedN,
    Experiment,
    PresentWork,
}

impl Source {
    pub const ALL: [Source; 5] =
        [Source::Ewa, Source::HypervirialPade, Source::ShiftedN, Source::Experiment, Source::PresentWork];

    pub fn token(self) -> &'static str {
        match self {
            Source::Ewa => "ewa",
            Source::HypervirialPade => "hypervirial_pade",
            Source::ShiftedN => "shifted_n",
            Source::Experiment => "experiment",
            Source::PresentWork => "present_work",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Source::ALL.into_iter().find(|src| src.token() == s).ok_or_else(|| format!("unknown source token '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    pub z: u32,
    pub shell: Shell,
    pub n: u32,
    pub l: u32,
    pub source: Source,
    pub energy_kev: f64,
    pub notes: Option<String>,
}

/// A validated set of reference rows, immutable once loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<ReferenceRow>,
    has_notes: bool,
}

fn parse_field<T: FromStr>(record: &csv::StringRecord, idx: usize, line: u64) -> Result<T, RefDataError>
where
    T::Err: fmt::Display,
{
    let raw = record.get(idx).unwrap_or_default();
    raw.parse().map_err(|e| RefDataError::Parse {
        line,
        message: format!("column '{}': cannot parse '{raw}': {e}", HEADER[idx]),
    })
}

impl Dataset {
    pub fn parse(text: &str) -> Result<Self, RefDataError> {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
        let mut records = reader.records();

        let header = match records.next() {
            None => return Err(RefDataError::Parse { line: 1, message: "empty file, header required".into() }),
            Some(rec) => rec.map_err(|e| RefDataError::Parse { line: 1, message: e.to_string() })?,
        };
        let fields: Vec<&str> = header.iter().collect();
        let has_notes = match fields.as_slice() {
            f if f == HEADER => false,
            [head @ .., "notes"] if *head == HEADER => true,
            _ => {
                return Err(RefDataError::Parse {
                    line: 1,
                    message: format!("expected header '{}[,notes]', got '{}'", HEADER.join(","), fields.join(",")),
                })
            }
        };
        let width = HEADER.len() + usize::from(has_notes);

        let mut rows = Vec::new();
        let mut seen = HashSet::new();
        for rec in records {
            let rec = rec.map_err(|e| RefDataError::Parse {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != width {
                return Err(RefDataError::Parse {
                    line,
                    message: format!("expected {width} fields, got {}", rec.len()),
                });
            }
            let row = ReferenceRow {
                z: parse_field(&rec, 0, line)?,
                shell: parse_field(&rec, 1, line)?,
                n: parse_field(&rec, 2, line)?,
                l: parse_field(&rec, 3, line)?,
                source: parse_field(&rec, 4, line)?,
                energy_kev: parse_field(&rec, 5, line)?,
                notes: rec.get(6).filter(|s| !s.is_empty()).map(str::to_owned),
            };
            if row.z == 0 {
                return Err(RefDataError::Parse { line, message: "atomic number must be at least 1".into() });
            }
            if row.shell.state() != QuantumState::new(row.n, row.l) {
                return Err(RefDataError::Parse {
                    line,
                    message: format!("shell {} does not match n={}, l={}", row.shell, row.n, row.l),
                });
            }
            if row.energy_kev.is_nan() || row.energy_kev >= 0.0 {
                return Err(RefDataError::SignViolation { line, z: row.z, energy_kev: row.energy_kev });
            }
            if !seen.insert((row.z, row.shell, row.source)) {
                return Err(RefDataError::DuplicateKey { line, z: row.z, shell: row.shell, source_kind: row.source });
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(RefDataError::Parse { line: 2, message: "no data rows".into() });
        }
        Ok(Self { rows, has_notes })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RefDataError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| RefDataError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    /// Dataset compiled into the crate for `shell`; `None` for E11.
    pub fn bundled(shell: Shell) -> Option<Self> {
        shell.bundled_text().map(|text| Self::parse(text).expect("bundled reference data is valid"))
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let mut header = HEADER.to_vec();
        if self.has_notes {
            header.push("notes");
        }
        writer.write_record(&header).expect("write to memory");
        for row in &self.rows {
            let mut fields = vec![
                row.z.to_string(),
                row.shell.to_string(),
                row.n.to_string(),
                row.l.to_string(),
                row.source.to_string(),
                row.energy_kev.to_string(),
            ];
            if self.has_notes {
                fields.push(row.notes.clone().unwrap_or_default());
            }
            writer.write_record(&fields).expect("write to memory");
        }
        String::from_utf8(writer.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
    }

    pub fn rows(&self) -> &[ReferenceRow] {
        &self.rows
    }

    pub fn get(&self, z: u32, shell: Shell, source: Source) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.z == z && r.shell == shell && r.source == source)
    }

    /// Sorted atomic numbers tabulated for `shell` under `source`.
    pub fn z_values(&self, shell: Shell, source: Source) -> Vec<u32> {
        let mut zs: Vec<u32> =
            self.rows.iter().filter(|r| r.shell == shell && r.source == source).map(|r| r.z).collect();
        zs.sort_unstable();
        zs
    }

    pub fn count(&self, source: Source) -> usize {
        self.rows.iter().filter(|r| r.source == source).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub z: u32,
    pub shell: Shell,
    pub computed_kev: f64,
    pub reference_kev: f64,
    pub abs_diff_kev: f64,
    pub rel_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSummary {
    pub max_abs_diff: f64,
    pub max_rel_diff: f64,
    pub worst_z: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub summary: ComparisonSummary,
}

/// Compares computed energies (keV) with the `source` column of `dataset`.
pub fn compare(
    dataset: &Dataset,
    computed: &[(u32, Shell, f64)],
    source: Source,
) -> Result<ComparisonReport, RefDataError> {
    let mut rows = computed
        .iter()
        .map(|&(z, shell, computed_kev)| {
            let reference = dataset.get(z, shell, source).ok_or(RefDataError::MissingReference {
                z,
                shell,
                source_kind: source,
            })?;
            let abs_diff_kev = (computed_kev - reference.energy_kev).abs();
            Ok(ComparisonRow {
                z,
                shell,
                computed_kev,
                reference_kev: reference.energy_kev,
                abs_diff_kev,
                rel_diff: abs_diff_kev / reference.energy_kev.abs(),
            })
        })
        .collect::<Result<Vec<_>, RefDataError>>()?;
    rows.sort_by_key(|r| (r.z, r.shell));

    let mut summary = ComparisonSummary { max_abs_diff: 0.0, max_rel_diff: 0.0, worst_z: None };
    for row in &rows {
        summary.max_abs_diff = summary.max_abs_diff.max(row.abs_diff_kev);
        if summary.worst_z.is_none() || row.rel_diff > summary.max_rel_diff {
            summary.max_rel_diff = row.rel_diff;
            summary.worst_z = Some(row.z);
        }
    }
    Ok(ComparisonReport { rows, summary })
}
