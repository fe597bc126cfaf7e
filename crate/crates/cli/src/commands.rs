use std::env;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};
use yukawa_core::{
    breakdown_report, compare as compare_reference, screening_delta, to_kev, total_energy, AtomicSystem, Dataset,
    EnergyBreakdown, OracleError, QuantumState, ScreeningLaw, Shell, Source,
};

use crate::output::{fmt_g, json_num, Cell, Table};
use crate::zlist::parse_z_list;
use crate::{Failure, Format, RunConfig};

/// Overrides the directory holding `table1.csv`, `table2.csv` and `table3.csv`.
pub const REFDIR_VAR: &str = "YUKAWA_REFDIR";

/// Text destined for stdout and stderr, written out once a command finishes.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn line(&mut self, s: &str) {
        self.stdout.push_str(s);
        self.stdout.push('\n');
    }

    fn table(&mut self, table: &Table, format: Format) {
        match format {
            Format::Table => self.stdout.push_str(&table.to_text()),
            Format::Csv => self.stdout.push_str(&table.to_csv()),
            Format::Json => self.json(&table.to_json()),
        }
    }

    fn json(&mut self, doc: &Value) {
        self.line(&serde_json::to_string_pretty(doc).expect("serializable"));
    }
}

fn breakdown(config: &RunConfig, z: u32, state: QuantumState) -> Result<EnergyBreakdown, Failure> {
    let system = AtomicSystem::new(z).map_err(|e| Failure::Usage(e.to_string()))?;
    total_energy(&system, &config.model, state, config.order).map_err(|e| Failure::Usage(e.to_string()))
}

fn law_name(config: &RunConfig) -> &'static str {
    match config.model.law() {
        ScreeningLaw::ThomasFermi => "thomas_fermi",
        ScreeningLaw::FermiAmaldi => "fermi_amaldi",
    }
}

fn paper_z(shell: Shell) -> Option<Vec<u32>> {
    Dataset::bundled(shell).map(|d| d.z_values(shell, Source::PresentWork))
}

/// `--reference`, then `$YUKAWA_REFDIR/<table file>`, then the bundled table.
fn reference_for(shell: Shell, explicit: Option<&Path>) -> Result<Option<Dataset>, Failure> {
    let path: Option<PathBuf> = match (explicit, env::var_os(REFDIR_VAR)) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => shell.bundled_file().map(|f| Path::new(&dir).join(f)),
        (None, None) => return Ok(Dataset::bundled(shell)),
    };
    path.map(|p| Dataset::load(&p).map_err(|e| Failure::Input(e.to_string()))).transpose()
}

pub fn level(config: &RunConfig, z: u32, state: QuantumState, out: &mut Output) -> Result<(), Failure> {
    let b = breakdown(config, z, state)?;
    let kev = |h: f64| to_kev(h, &config.units);
    let terms =
        [("e0", b.e0), ("shift_const", b.shift_const), ("e1", b.e1), ("e2", b.e2), ("e3", b.e3), ("total", b.total)];
    match config.format {
        Format::Table => {
            out.line(&format!(
                "Z = {z}, {state}, {} screening, delta = {}, order {}",
                law_name(config),
                fmt_g(b.delta),
                b.order_used.as_u8()
            ));
            let mut t = Table::new(vec!["term", "hartree", "kev"]);
            for (name, h) in terms {
                t.push(vec![name.into(), h.into(), kev(h).into()]);
            }
            out.stdout.push_str(&t.to_text());
            if b.series_warning {
                out.line("warning: corrections exceed half of |e0|; the series is unreliable here");
            }
        }
        Format::Csv => {
            let mut t = Table::new(vec!["z", "n", "l", "delta", "order", "term", "hartree", "kev", "series_warning"]);
            for (name, h) in terms {
                t.push(vec![
                    z.into(),
                    state.n.into(),
                    state.l.into(),
                    b.delta.into(),
                    u32::from(b.order_used.as_u8()).into(),
                    name.into(),
                    h.into(),
                    kev(h).into(),
                    b.series_warning.into(),
                ]);
            }
            out.stdout.push_str(&t.to_csv());
        }
        Format::Json => {
            let terms: Vec<Value> = terms
                .iter()
                .map(|&(name, h)| json!({ "term": name, "hartree": json_num(h), "kev": json_num(kev(h)) }))
                .collect();
            let doc = json!({
                "z": z,
                "n": state.n,
                "l": state.l,
                "screening": law_name(config),
                "delta": json_num(b.delta),
                "order": b.order_used.as_u8(),
                "series_warning": b.series_warning,
                "terms": terms,
            });
            out.json(&doc);
        }
    }
    Ok(())
}

pub fn table(
    config: &RunConfig,
    shell: Shell,
    z_spec: &str,
    reference: Option<&Path>,
    out: &mut Output,
) -> Result<(), Failure> {
    let zs = parse_z_list(z_spec, paper_z(shell).as_deref()).map_err(Failure::Usage)?;
    let reference = reference_for(shell, reference)?;
    let rows: Vec<EnergyBreakdown> =
        zs.par_iter().map(|&z| breakdown(config, z, shell.state())).collect::<Result<_, _>>()?;

    let mut columns = vec!["z", "delta", "e0", "shift_const", "e1", "e2", "e3", "total_hartree", "total_kev"];
    if reference.is_some() {
        columns.extend(["reference_kev", "rel_diff"]);
    }
    columns.push("series_warning");
    let mut t = Table::new(columns);
    for (&z, b) in zs.iter().zip(&rows) {
        let total_kev = to_kev(b.total, &config.units);
        let mut row: Vec<Cell> = vec![
            z.into(),
            b.delta.into(),
            b.e0.into(),
            b.shift_const.into(),
            b.e1.into(),
            b.e2.into(),
            b.e3.into(),
            b.total.into(),
            total_kev.into(),
        ];
        if let Some(data) = &reference {
            let r = data.get(z, shell, Source::PresentWork).map(|r| r.energy_kev);
            row.push(r.into());
            row.push(r.map(|r| ((total_kev - r) / r).abs()).into());
        }
        row.push(b.series_warning.into());
        t.push(row);
    }
    out.table(&t, config.format);
    Ok(())
}

pub fn verify(config: &RunConfig, z_spec: &str, states: &[QuantumState], out: &mut Output) -> Result<(), Failure> {
    let zs = parse_z_list(z_spec, paper_z(Shell::E00).as_deref()).map_err(Failure::Usage)?;
    let jobs: Vec<(u32, QuantumState)> = zs.iter().flat_map(|&z| states.iter().map(move |&s| (z, s))).collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(z, state)| -> Result<_, Failure> {
            let system = AtomicSystem::new(z).map_err(|e| Failure::Usage(e.to_string()))?;
            let perturbative = breakdown(config, z, state)?.total;
            let delta = screening_delta(z, &config.model).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok((delta, perturbative, breakdown_report(&system, &config.model, state, config.order)))
        })
        .collect::<Result<_, _>>()?;

    let mut t = Table::new(vec![
        "z",
        "n",
        "l",
        "delta",
        "perturbative",
        "oracle",
        "abs_diff",
        "rel_diff",
        "oracle_error",
        "status",
    ]);
    let mut stalled = false;
    for (&(z, state), (delta, perturbative, outcome)) in jobs.iter().zip(results) {
        let (oracle, error, status) = match outcome {
            Ok(r) => {
                let status = if r.is_breakdown() { "BREAKDOWN" } else { "OK" };
                (Some(r.oracle), Some(r.oracle_result.estimated_error), status)
            }
            Err(OracleError::NoBoundState { .. }) => (None, None, "NO_BOUND_STATE"),
            Err(OracleError::NonConvergence { best }) => {
                stalled = true;
                (Some(best.energy), Some(best.estimated_error), "NON_CONVERGENCE")
            }
            Err(e) => return Err(Failure::Usage(e.to_string())),
        };
        let abs_diff = oracle.map(|o| (perturbative - o).abs());
        let rel_diff = oracle.zip(abs_diff).map(|(o, d)| d / o.abs());
        t.push(vec![
            z.into(),
            state.n.into(),
            state.l.into(),
            delta.into(),
            perturbative.into(),
            oracle.into(),
            abs_diff.into(),
            rel_diff.into(),
            error.into(),
            status.into(),
        ]);
    }
    out.table(&t, config.format);
    if stalled {
        return Err(Failure::NonConvergence);
    }
    Ok(())
}

pub fn compare(
    config: &RunConfig,
    shell: Shell,
    reference: Option<&Path>,
    tolerance: f64,
    source: Source,
    z_spec: Option<&str>,
    out: &mut Output,
) -> Result<(), Failure> {
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Failure::Usage(format!("tolerance must be a non-negative number, got {tolerance}")));
    }
    let data = reference_for(shell, reference)?
        .ok_or_else(|| Failure::Input(format!("no reference table exists for {shell}; pass --reference")))?;
    let available = data.z_values(shell, source);
    let zs = match z_spec {
        Some(spec) => parse_z_list(spec, Some(&available)).map_err(Failure::Usage)?,
        None if available.is_empty() => {
            return Err(Failure::Input(format!("reference has no {shell} rows in the {source} column")))
        }
        None => available,
    };
    let computed: Vec<(u32, Shell, f64)> = zs
        .par_iter()
        .map(|&z| breakdown(config, z, shell.state()).map(|b| (z, shell, to_kev(b.total, &config.units))))
        .collect::<Result<_, _>>()?;
    let report = compare_reference(&data, &computed, source).map_err(|e| Failure::Input(e.to_string()))?;
    let pass = report.summary.max_rel_diff < tolerance;

    let mut t = Table::new(vec!["z", "computed_kev", "reference_kev", "abs_diff_kev", "rel_diff"]);
    for r in &report.rows {
        t.push(vec![
            r.z.into(),
            r.computed_kev.into(),
            r.reference_kev.into(),
            r.abs_diff_kev.into(),
            r.rel_diff.into(),
        ]);
    }
    let verdict = if pass { "PASS" } else { "FAIL" };
    let worst = report.summary.worst_z.map_or("-".to_string(), |z| z.to_string());
    let summary = format!(
        "{shell} vs {source}: {} rows, max_rel_diff {} (Z = {worst}), tolerance {}: {verdict}",
        report.rows.len(),
        fmt_g(report.summary.max_rel_diff),
        fmt_g(tolerance)
    );
    match config.format {
        Format::Table => {
            out.stdout.push_str(&t.to_text());
            out.line(&summary);
        }
        Format::Csv => {
            out.stdout.push_str(&t.to_csv());
            out.stderr.push_str(&summary);
            out.stderr.push('\n');
        }
        Format::Json => {
            let doc = json!({
                "shell": shell.label(),
                "source": source.token(),
                "rows": t.to_json(),
                "summary": {
                    "max_abs_diff_kev": json_num(report.summary.max_abs_diff),
                    "max_rel_diff": json_num(report.summary.max_rel_diff),
                    "worst_z": report.summary.worst_z,
                    "tolerance": json_num(tolerance),
                    "pass": pass,
                },
            });
            out.json(&doc);
        }
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Tolerance)
    }
}
