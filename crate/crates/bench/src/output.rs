//! CSV emission and parsing. Rows are written in a fixed column order with
//! 17 significant digits; wall times go to a separate sidecar file so the
//! main CSV is byte-identical across runs.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

use crate::runner::{Outcome, ResultRow, SummaryLine};
use crate::scenario::{ScenarioConfig, ScenarioId};

pub const COLUMNS: [&str; 16] = [
    "scenario",
    "param",
    "replicate",
    "comparison",
    "status",
    "extended_bound_rescaled",
    "standard_dk_rescaled",
    "rho1_rescaled",
    "rho2",
    "c1_opt",
    "c0_opt",
    "variant",
    "supremum",
    "degree_extreme_difference",
    "attempts",
    "message",
];

pub const INFEASIBLE: &str = "infeasible";
pub const FAILED: &str = "failed";
pub const NOT_APPLICABLE: &str = "NA";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn record(row: &ResultRow) -> Vec<String> {
    let mut v = vec![
        row.scenario.to_string(),
        row.param.to_string(),
        row.replicate.to_string(),
        row.comparison.to_string(),
    ];
    match &row.outcome {
        Outcome::Ok(m) => {
            v.push("ok".into());
            v.push(fmt_f64(m.extended));
            v.push(m.standard.map_or_else(|| INFEASIBLE.into(), fmt_f64));
            v.push(fmt_f64(m.rho1_rescaled));
            v.push(fmt_f64(m.rho2));
            match m.params {
                Some(p) => {
                    v.push(fmt_f64(p.c1));
                    v.push(fmt_f64(p.c0));
                }
                None => v.extend([INFEASIBLE.into(), INFEASIBLE.into()]),
            }
            v.push(m.variant.map_or_else(|| INFEASIBLE.into(), |x| x.name().to_string()));
            v.push(m.supremum.to_string());
        }
        Outcome::Failed(_) => {
            v.push(FAILED.into());
            v.extend(std::iter::repeat_n(FAILED.to_string(), 8));
        }
    }
    v.push(
        row.degree_extreme_difference
            .map_or_else(|| NOT_APPLICABLE.into(), |d| d.to_string()),
    );
    v.push(row.attempts.to_string());
    v.push(match &row.outcome {
        Outcome::Failed(msg) => msg.clone(),
        Outcome::Ok(_) => String::new(),
    });
    v
}

/// Writes the header comment, the column line and one line per row.
pub fn write_rows<W: Write>(out: W, cfg: &ScenarioConfig, rows: &[ResultRow]) -> anyhow::Result<()> {
    let mut out = out;
    writeln!(out, "# {}", cfg.header())?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(record(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_timing<W: Write>(out: W, cfg: &ScenarioConfig, rows: &[ResultRow]) -> anyhow::Result<()> {
    let mut out = out;
    writeln!(out, "# {}", cfg.header())?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["scenario", "param", "replicate", "comparison", "wall_time_ms"])?;
    for r in rows {
        w.write_record([
            r.scenario.to_string(),
            r.param.to_string(),
            r.replicate.to_string(),
            r.comparison.to_string(),
            format!("{:.3}", r.wall_time_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, cfg: &ScenarioConfig, lines: &[SummaryLine]) -> anyhow::Result<()> {
    let mut out = out;
    writeln!(out, "# {}", cfg.header())?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record([
        "param",
        "comparison",
        "count",
        "failed",
        "median_extended",
        "median_standard",
        "standard_infeasible",
        "median_rho1_rescaled",
        "median_c1",
        "median_c0",
    ])?;
    for s in lines {
        w.write_record([
            s.param.to_string(),
            s.comparison.to_string(),
            s.count.to_string(),
            s.failed.to_string(),
            fmt_f64(s.median_extended),
            fmt_f64(s.median_standard),
            s.standard_infeasible.to_string(),
            fmt_f64(s.median_rho1_rescaled),
            fmt_f64(s.median_c1),
            fmt_f64(s.median_c0),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Paths of the files written by one run.
#[derive(Clone, Debug)]
pub struct RunFiles {
    pub rows: PathBuf,
    pub timing: PathBuf,
    pub summary: PathBuf,
}

pub fn write_run(
    dir: &Path,
    cfg: &ScenarioConfig,
    rows: &[ResultRow],
    summary: &[SummaryLine],
) -> anyhow::Result<RunFiles> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let files = RunFiles {
        rows: dir.join(format!("{}.csv", cfg.id)),
        timing: dir.join(format!("{}.timing.csv", cfg.id)),
        summary: dir.join(format!("{}.summary.csv", cfg.id)),
    };
    let create = |p: &Path| std::fs::File::create(p).with_context(|| format!("writing {}", p.display()));
    write_rows(std::io::BufWriter::new(create(&files.rows)?), cfg, rows)?;
    write_timing(std::io::BufWriter::new(create(&files.timing)?), cfg, rows)?;
    write_summary(std::io::BufWriter::new(create(&files.summary)?), cfg, summary)?;
    Ok(files)
}

/// A parsed row of a results CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub scenario: ScenarioId,
    pub param: usize,
    pub replicate: usize,
    pub comparison: String,
    pub ok: bool,
    pub extended: f64,
    pub standard: Option<f64>,
    pub rho1_rescaled: f64,
    pub rho2: f64,
    pub c1: Option<f64>,
    pub c0: Option<f64>,
    /// The bound is a limit approached as `|c0|` grows; `c1`, `c0` are a far-out representative.
    pub supremum: bool,
    pub degree_extreme_difference: Option<usize>,
}

fn number(field: &str, line: u64, name: &str) -> anyhow::Result<Option<f64>> {
    match field {
        INFEASIBLE | FAILED => Ok(None),
        s => s
            .parse::<f64>()
            .map(Some)
            .with_context(|| format!("line {line}: {name} = {s:?} is not a number")),
    }
}

pub fn read_rows(text: &str) -> anyhow::Result<Vec<CsvRow>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = r.headers().context("missing column line")?.clone();
    if headers.iter().ne(COLUMNS) {
        bail!("unexpected columns: {}", headers.iter().collect::<Vec<_>>().join(","));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let scenario =
            ScenarioId::parse(&rec[0]).with_context(|| format!("line {line}: unknown scenario {:?}", &rec[0]))?;
        let int = |i: usize| -> anyhow::Result<usize> {
            rec[i]
                .parse()
                .with_context(|| format!("line {line}: {} = {:?}", COLUMNS[i], &rec[i]))
        };
        let ok = match &rec[4] {
            "ok" => true,
            FAILED => false,
            s => bail!("line {line}: unknown status {s:?}"),
        };
        let num = |i: usize| number(&rec[i], line, COLUMNS[i]);
        rows.push(CsvRow {
            scenario,
            param: int(1)?,
            replicate: int(2)?,
            comparison: rec[3].to_string(),
            ok,
            extended: num(5)?.unwrap_or(f64::NAN),
            standard: num(6)?,
            rho1_rescaled: num(7)?.unwrap_or(f64::NAN),
            rho2: num(8)?.unwrap_or(f64::NAN),
            c1: num(9)?,
            c0: num(10)?,
            supremum: &rec[12] == "true",
            degree_extreme_difference: match &rec[13] {
                NOT_APPLICABLE => None,
                _ => Some(int(13)?),
            },
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::Metrics;
    use dkext::dkcore::{DeltaVariant, TransformParams};

    fn row(outcome: Outcome) -> ResultRow {
        ResultRow {
            scenario: ScenarioId::GsoPairwise,
            param: 30,
            replicate: 2,
            comparison: "A-vs-L",
            outcome,
            degree_extreme_difference: Some(4),
            attempts: 1,
            wall_time_ms: 12.5,
        }
    }

    #[test]
    fn floats_carry_seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn rows_round_trip_with_sentinels() {
        let ok = Outcome::Ok(Metrics {
            extended: 0.25,
            standard: None,
            rho1_rescaled: 0.05,
            rho2: 0.1,
            params: Some(TransformParams::new(-1.5, 3.0)),
            variant: Some(DeltaVariant::D1Minus),
            supremum: false,
        });
        let cfg = ScenarioConfig::preset(ScenarioId::GsoPairwise, false);
        let mut buf = Vec::new();
        write_rows(&mut buf, &cfg, &[row(ok), row(Outcome::Failed("bad, graph".into()))]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# scenario=gso-pairwise seed="));
        assert!(!text.contains("12.5"));
        let parsed = read_rows(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].standard, None);
        assert_eq!(parsed[0].c1, Some(-1.5));
        assert!(parsed[0].ok && !parsed[1].ok);
        assert_eq!(parsed[1].degree_extreme_difference, Some(4));
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(read_rows("a,b\n1,2\n").is_err());
        let header = COLUMNS.join(",");
        assert!(read_rows(&format!(
            "{header}\ngso-pairwise,x,0,A-vs-L,ok,1,1,1,1,1,1,D1+,false,0,1,\n"
        ))
        .is_err());
    }
}
