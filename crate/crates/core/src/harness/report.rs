//! CSV and SVG output. Floats are written in Rust's shortest round-trip
//! form, so files are byte-identical for identical results.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::harness::{DecileReport, FilterReport, SweepAggregate, SweepResult, SweepRow, WerPoint};
use crate::noise::NoiseStrategy;
use crate::{Error, Result};

fn flush<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn write_sweep_rows<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["beta", "strategy", "trial", "pair_id", "similarity"])?;
    for r in rows {
        w.write_record([
            r.beta.to_string(),
            r.strategy.to_string(),
            r.trial.to_string(),
            r.pair_id.clone(),
            r.similarity.to_string(),
        ])?;
    }
    flush(w)
}

pub fn write_sweep_aggregates<W: Write>(aggs: &[SweepAggregate], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["beta", "strategy", "mean_cs", "stderr", "n"])?;
    for a in aggs {
        w.write_record([
            a.beta.to_string(),
            a.strategy.to_string(),
            a.mean_cs.to_string(),
            a.stderr.to_string(),
            a.n.to_string(),
        ])?;
    }
    flush(w)
}

fn field<'a>(rec: &'a csv::StringRecord, idx: usize, line: usize) -> Result<&'a str> {
    rec.get(idx).ok_or_else(|| Error::MalformedLine {
        line,
        message: format!("missing column {idx}"),
    })
}

fn parse_field<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize, line: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    field(rec, idx, line)?
        .parse()
        .map_err(|e: T::Err| Error::MalformedLine {
            line,
            message: e.to_string(),
        })
}

pub fn read_sweep_rows<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        rows.push(SweepRow {
            beta: parse_field(&rec, 0, line)?,
            strategy: parse_field::<NoiseStrategy>(&rec, 1, line)?,
            trial: parse_field(&rec, 2, line)?,
            pair_id: field(&rec, 3, line)?.to_string(),
            similarity: parse_field(&rec, 4, line)?,
        });
    }
    Ok(rows)
}

pub fn read_sweep_aggregates<R: Read>(input: R) -> Result<Vec<SweepAggregate>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        out.push(SweepAggregate {
            beta: parse_field(&rec, 0, line)?,
            strategy: parse_field::<NoiseStrategy>(&rec, 1, line)?,
            mean_cs: parse_field(&rec, 2, line)?,
            stderr: parse_field(&rec, 3, line)?,
            n: parse_field(&rec, 4, line)?,
        });
    }
    Ok(out)
}

pub fn write_deciles<W: Write>(report: &DecileReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "decile",
        "size",
        "unique_shows",
        "dominant_show",
        "dominant_count",
        "min_similarity",
        "max_similarity",
    ])?;
    for (i, d) in report.deciles.iter().enumerate() {
        let min = d.scores.first().map(f64::to_string).unwrap_or_default();
        let max = d.scores.last().map(f64::to_string).unwrap_or_default();
        w.write_record([
            (i + 1).to_string(),
            d.episode_ids.len().to_string(),
            d.unique_shows.to_string(),
            d.dominant_show.0.clone(),
            d.dominant_show.1.to_string(),
            min,
            max,
        ])?;
    }
    flush(w)
}

pub fn write_wer_curve<W: Write>(points: &[WerPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["beta", "strategy", "mean_wer", "stderr", "n"])?;
    for p in points {
        w.write_record([
            p.beta.to_string(),
            p.strategy.to_string(),
            p.mean_wer.to_string(),
            p.stderr.to_string(),
            p.n.to_string(),
        ])?;
    }
    flush(w)
}

pub fn write_filter_report<W: Write>(report: &FilterReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "baseline_similarity", "retained"])?;
    let retained: std::collections::HashSet<&str> =
        report.retained.iter().map(|e| e.id.as_str()).collect();
    for (id, s) in &report.scores {
        w.write_record([
            id.clone(),
            s.to_string(),
            retained.contains(id.as_str()).to_string(),
        ])?;
    }
    flush(w)
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

struct Series<'a> {
    label: &'a str,
    /// `(x, mean, stderr)`
    points: Vec<(f64, f64, f64)>,
}

fn line_chart(title: &str, y_label: &str, series: &[Series<'_>]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY, 1.0f64);
    for &(x, m, se) in all {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        if (m + se).is_finite() {
            y_max = y_max.max(m + se);
        }
    }
    if !x_min.is_finite() {
        (x_min, x_max) = (0.0, 1.0);
    }
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let px = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * (W - LEFT - RIGHT);
    let py = |y: f64| TOP + (1.0 - y / y_max) * (H - TOP - BOTTOM);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (px(x_min), py(0.0), px(x_max), py(y_max));
    let _ = writeln!(
        svg,
        r#"<path d="M{x0:.2},{y1:.2} L{x0:.2},{y0:.2} L{x1:.2},{y0:.2}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let yv = y_max * i as f64 / 5.0;
        let xv = x_min + (x_max - x_min) * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{:.2}</text>"#,
            x0 - 6.0,
            py(yv) + 4.0,
            yv
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{:.2}</text>"#,
            px(xv),
            y0 + 16.0,
            xv
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="12">beta</text>"#,
        (x0 + x1) / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {:.1})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let upper: Vec<String> = s
            .points
            .iter()
            .map(|&(x, m, se)| format!("{:.2},{:.2}", px(x), py(m + se)))
            .collect();
        let lower: Vec<String> = s
            .points
            .iter()
            .rev()
            .map(|&(x, m, se)| format!("{:.2},{:.2}", px(x), py((m - se).max(0.0))))
            .collect();
        let line: Vec<String> = s
            .points
            .iter()
            .map(|&(x, m, _)| format!("{:.2},{:.2}", px(x), py(m)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polygon points="{} {}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
            upper.join(" "),
            lower.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            line.join(" ")
        );
        let ly = TOP + 16.0 * i as f64 + 8.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" text-anchor="end" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            W - RIGHT - 4.0,
            escape(s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn strategies_in_order<T>(items: &[T], strategy: impl Fn(&T) -> NoiseStrategy) -> Vec<NoiseStrategy> {
    let mut seen = Vec::new();
    for it in items {
        let s = strategy(it);
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    seen
}

/// Mean corpus similarity against beta, one line and stderr band per strategy.
pub fn sweep_svg(aggs: &[SweepAggregate]) -> String {
    let labels = strategies_in_order(aggs, |a| a.strategy);
    let series: Vec<Series> = labels
        .iter()
        .map(|s| Series {
            label: s.as_str(),
            points: aggs
                .iter()
                .filter(|a| a.strategy == *s)
                .map(|a| (a.beta, a.mean_cs, a.stderr))
                .collect(),
        })
        .collect();
    line_chart("Corpus similarity under injected noise", "mean CS", &series)
}

pub fn wer_svg(points: &[WerPoint]) -> String {
    let labels = strategies_in_order(points, |p| p.strategy);
    let series: Vec<Series> = labels
        .iter()
        .map(|s| Series {
            label: s.as_str(),
            points: points
                .iter()
                .filter(|p| p.strategy == *s)
                .map(|p| (p.beta, p.mean_wer, p.stderr))
                .collect(),
        })
        .collect();
    line_chart("Word error rate against beta", "mean WER", &series)
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes `sweep_rows.csv`, `sweep_agg.csv` and, when `svg` is set,
/// `sweep.svg` into `dir`.
pub fn export_sweep(result: &SweepResult, dir: &Path, svg: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rows = dir.join("sweep_rows.csv");
    write_sweep_rows(&result.rows, create(&rows)?)?;
    let agg = dir.join("sweep_agg.csv");
    write_sweep_aggregates(&result.aggregates, create(&agg)?)?;
    let mut written = vec![rows, agg];
    if svg {
        let path = dir.join("sweep.svg");
        std::fs::write(&path, sweep_svg(&result.aggregates)).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::aggregate_rows;

    fn rows() -> Vec<SweepRow> {
        let mut rows = Vec::new();
        for strategy in [NoiseStrategy::UniformVocab, NoiseStrategy::StatisticsConfusion] {
            for (b, beta) in [0.0, 0.5, 1.0].into_iter().enumerate() {
                for trial in 0..3 {
                    for pair in ["e1", "e,2"] {
                        rows.push(SweepRow {
                            beta,
                            strategy,
                            trial,
                            pair_id: pair.to_string(),
                            similarity: 1.0 / (1.0 + b as f64 + trial as f64 * 0.1 + pair.len() as f64 / 7.0),
                        });
                    }
                }
            }
        }
        rows
    }

    #[test]
    fn csv_round_trip_preserves_aggregates() {
        let rows = rows();
        let aggs = aggregate_rows(&rows);
        let mut buf = Vec::new();
        write_sweep_rows(&rows, &mut buf).unwrap();
        let back = read_sweep_rows(&buf[..]).unwrap();
        assert_eq!(back, rows);
        assert_eq!(aggregate_rows(&back), aggs);

        let mut buf = Vec::new();
        write_sweep_aggregates(&aggs, &mut buf).unwrap();
        assert_eq!(read_sweep_aggregates(&buf[..]).unwrap(), aggs);
    }

    #[test]
    fn empty_result_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        export_sweep(&SweepResult::default(), dir.path(), true).unwrap();
        let rows = std::fs::read_to_string(dir.path().join("sweep_rows.csv")).unwrap();
        assert_eq!(rows, "beta,strategy,trial,pair_id,similarity\n");
        let agg = std::fs::read_to_string(dir.path().join("sweep_agg.csv")).unwrap();
        assert_eq!(agg, "beta,strategy,mean_cs,stderr,n\n");
        let svg = std::fs::read_to_string(dir.path().join("sweep.svg")).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 0);
    }

    #[test]
    fn svg_has_one_line_per_strategy() {
        let aggs = aggregate_rows(&rows());
        let svg = sweep_svg(&aggs);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("uniform_vocab") && svg.contains("statistics_confusion"));
        assert_eq!(svg, sweep_svg(&aggs));
    }

    #[test]
    fn unwritable_path_errors() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("file");
        std::fs::write(&file, "x").unwrap();
        assert!(export_sweep(&SweepResult::default(), &file.join("sub"), false).is_err());
    }
}
