//! Curve file formats.
//!
//! The native curves CSV is a single self-describing file: a `#grid:` sidecar
//! line with the sampling points, then a header `id,t_1,...,t_m[,label]`,
//! then one row per curve. Raw spectral files (one specimen per row, header
//! of wavenumbers, trailing label string) are ingested into the same
//! structure.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fdata::{FunctionalDataset, SamplingGrid};
use crate::scalar::Scalar;

fn clean_cell(raw: &str) -> &str {
    raw.trim().trim_matches('"')
}

fn parse_cell<F: Scalar>(raw: &str, line: usize, column: usize) -> Result<F, F> {
    clean_cell(raw)
        .parse::<f64>()
        .map(F::c)
        .map_err(|_| Error::Data {
            line,
            column,
            message: format!("not a number: {:?}", clean_cell(raw)),
        })
}

/// Write a dataset in the native curves CSV format.
pub fn write_curves_csv<F: Scalar>(path: &Path, ds: &FunctionalDataset<F>) -> Result<(), F> {
    let mut out = String::new();
    out.push_str("#grid:");
    for &t in ds.grid().points() {
        out.push(' ');
        out.push_str(&format!("{}", t.as_f64()));
    }
    out.push('\n');
    out.push_str("id");
    for j in 1..=ds.n_points() {
        out.push_str(&format!(",t_{j}"));
    }
    if ds.labels().is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    for i in 0..ds.n_curves() {
        let mut row = format!("{i}");
        for v in ds.values().row(i) {
            row.push(',');
            row.push_str(&format!("{}", v.as_f64()));
        }
        if let Some(labels) = ds.labels() {
            row.push(',');
            row.push_str(&format!("{}", labels[i]));
        }
        row.push('\n');
        file.write_all(row.as_bytes())?;
    }
    Ok(())
}

/// Read a dataset written by [`write_curves_csv`].
pub fn read_curves_csv<F: Scalar>(path: &Path) -> Result<FunctionalDataset<F>, F> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, grid_line) = lines.next().ok_or(Error::Data {
        line: 1,
        column: 1,
        message: "empty file".into(),
    })?;
    let grid_body = grid_line.strip_prefix("#grid:").ok_or(Error::Data {
        line: 1,
        column: 1,
        message: "missing #grid: sidecar line".into(),
    })?;
    let mut grid_points = Vec::new();
    for (k, tok) in grid_body.split_whitespace().enumerate() {
        grid_points.push(parse_cell::<F>(tok, 1, k + 1)?);
    }
    let grid = SamplingGrid::new(grid_points)?;
    let m = grid.len();

    let (_, header) = lines.next().ok_or(Error::Data {
        line: 2,
        column: 1,
        message: "missing header".into(),
    })?;
    let header_fields: Vec<&str> = header.split(',').collect();
    let has_label = header_fields.last().map(|s| clean_cell(s)) == Some("label");
    let expected = 1 + m + usize::from(has_label);
    if header_fields.len() != expected {
        return Err(Error::Data {
            line: 2,
            column: header_fields.len(),
            message: format!(
                "header has {} fields, expected {} for a {}-point grid",
                header_fields.len(),
                expected,
                m
            ),
        });
    }

    let mut rows: Vec<F> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    let mut n = 0usize;
    for (line_idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected {
            return Err(Error::Data {
                line: line_idx + 1,
                column: fields.len(),
                message: format!("row has {} fields, expected {expected}", fields.len()),
            });
        }
        for (j, field) in fields[1..1 + m].iter().enumerate() {
            rows.push(parse_cell::<F>(field, line_idx + 1, j + 2)?);
        }
        if has_label {
            let lab = clean_cell(fields[expected - 1]);
            let value: u8 = lab.parse().map_err(|_| Error::Data {
                line: line_idx + 1,
                column: expected,
                message: format!("label {lab:?} is not 0/1"),
            })?;
            labels.push(value);
        }
        n += 1;
    }
    let values = Array2::from_shape_vec((n, m), rows).map_err(|e| {
        Error::Data {
            line: 0,
            column: 0,
            message: format!("shape error: {e}"),
        }
    })?;
    FunctionalDataset::new(values, grid, has_label.then_some(labels))
}

/// Summary of a raw-spectra ingestion.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IngestSummary {
    pub n_curves: usize,
    pub n_points: usize,
    pub n_positive: usize,
    /// Distinct raw label strings and the binary class they mapped to.
    pub label_mapping: Vec<(String, u8)>,
}

/// Ingest a raw spectral CSV: header row of wavenumbers plus a trailing
/// label-column name, one specimen per row with a trailing label string.
/// Rows whose label equals `positive_label` (case-insensitive) map to 1.
pub fn ingest_raw_spectra<F: Scalar>(
    path: &Path,
    positive_label: &str,
) -> Result<(FunctionalDataset<F>, IngestSummary), F> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Data {
        line: 1,
        column: 1,
        message: "empty file".into(),
    })?;
    let header_fields: Vec<&str> = header.split(',').collect();
    if header_fields.len() < 3 {
        return Err(Error::Data {
            line: 1,
            column: header_fields.len(),
            message: "expected at least two wavenumbers and a label column".into(),
        });
    }
    let m = header_fields.len() - 1;
    let mut grid_points = Vec::with_capacity(m);
    for (j, tok) in header_fields[..m].iter().enumerate() {
        grid_points.push(parse_cell::<F>(tok, 1, j + 1)?);
    }
    for (j, w) in grid_points.windows(2).enumerate() {
        if !(w[0] < w[1]) {
            return Err(Error::Data {
                line: 1,
                column: j + 2,
                message: "wavenumber header is not strictly increasing".into(),
            });
        }
    }
    let grid = SamplingGrid::new(grid_points)?;

    let mut rows: Vec<F> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    let mut mapping: Vec<(String, u8)> = Vec::new();
    let mut n = 0usize;
    for (line_idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != m + 1 {
            return Err(Error::Data {
                line: line_idx + 1,
                column: fields.len(),
                message: format!("row has {} fields, expected {}", fields.len(), m + 1),
            });
        }
        for (j, field) in fields[..m].iter().enumerate() {
            rows.push(parse_cell::<F>(field, line_idx + 1, j + 1)?);
        }
        let raw_label = clean_cell(fields[m]).to_string();
        if raw_label.is_empty() {
            return Err(Error::Data {
                line: line_idx + 1,
                column: m + 1,
                message: "empty label".into(),
            });
        }
        let mapped = u8::from(raw_label.eq_ignore_ascii_case(positive_label));
        if !mapping.iter().any(|(s, _)| *s == raw_label) {
            mapping.push((raw_label.clone(), mapped));
        }
        labels.push(mapped);
        n += 1;
    }
    let values = Array2::from_shape_vec((n, grid.len()), rows).map_err(|e| Error::Data {
        line: 0,
        column: 0,
        message: format!("shape error: {e}"),
    })?;
    let n_positive = labels.iter().filter(|&&v| v == 1).count();
    let ds = FunctionalDataset::new(values, grid, Some(labels))?;
    let summary = IngestSummary {
        n_curves: ds.n_curves(),
        n_points: ds.n_points(),
        n_positive,
        label_mapping: mapping,
    };
    Ok((ds, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simgen::{generate, SimConfig};

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("rfpls-io-tests");
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn curves_round_trip_is_byte_stable() {
        let ds = generate(&SimConfig::<f64>::case1(12, 0.0, 3)).unwrap();
        let p1 = tmp("roundtrip1.csv");
        let p2 = tmp("roundtrip2.csv");
        write_curves_csv(&p1, &ds.data).unwrap();
        let back = read_curves_csv::<f64>(&p1).unwrap();
        assert_eq!(back.values(), ds.data.values());
        assert_eq!(back.labels(), ds.data.labels());
        assert_eq!(back.grid().points(), ds.data.grid().points());
        write_curves_csv(&p2, &back).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    }

    #[test]
    fn bad_cells_are_reported_with_coordinates() {
        let p = tmp("bad.csv");
        fs::write(&p, "#grid: 0 1 2\nid,t_1,t_2,t_3,label\n0,1.0,oops,3.0,1\n").unwrap();
        match read_curves_csv::<f64>(&p) {
            Err(Error::Data { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 3);
            }
            other => panic!("expected data error, got {other:?}"),
        }
    }

    #[test]
    fn ingest_counts_positives_and_maps_labels() {
        let p = tmp("spectra.csv");
        let mut text = String::from("899.3,901.1,905.7,ClassLabel\n");
        text.push_str("0.1,0.2,0.3,strawberry\n");
        text.push_str("0.4,0.5,0.6,NON-strawberry\n");
        text.push_str("0.7,0.8,0.9,Strawberry\n");
        fs::write(&p, text).unwrap();
        let (ds, summary) = ingest_raw_spectra::<f64>(&p, "strawberry").unwrap();
        assert_eq!(summary.n_curves, 3);
        assert_eq!(summary.n_points, 3);
        assert_eq!(summary.n_positive, 2);
        assert_eq!(ds.labels(), Some(&[1u8, 0, 1][..]));
        assert_eq!(summary.label_mapping.len(), 3);
    }

    #[test]
    fn ingest_rejects_non_monotone_header_and_bad_cells() {
        let p = tmp("nonmono.csv");
        fs::write(&p, "2.0,1.0,label\n0.1,0.2,a\n").unwrap();
        assert!(matches!(
            ingest_raw_spectra::<f64>(&p, "a"),
            Err(Error::Data { line: 1, .. })
        ));
        let p2 = tmp("badcell.csv");
        fs::write(&p2, "1.0,2.0,label\n0.1,x,a\n").unwrap();
        match ingest_raw_spectra::<f64>(&p2, "a") {
            Err(Error::Data { line, column, .. }) => {
                assert_eq!((line, column), (2, 2));
            }
            other => panic!("expected data error, got {other:?}"),
        }
    }
}
