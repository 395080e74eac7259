//! CSV reading and writing for spectrum datasets.
//!
//! The format is plain CSV with `#`-prefixed metadata lines:
//!
//! ```text
//! # abscissa_kind: wavelength | frequency | angular      (default: angular)
//! # ordinate_kind: per_lambda | per_nu | per_omega       (default: per_omega)
//! # units: si | natural                                  (default: si)
//! abscissa,value[,sigma]
//! 1.0e13,4.2e-18
//! ...
//! ```
//!
//! Unrecognized comment lines are ignored, so provenance annotations written
//! by the command-line tool read back cleanly. Parse errors carry 1-based
//! line numbers.

use std::path::Path;

use crate::error::{Error, Result};
use crate::radiation::UnitsMode;

use super::dataset::{AbscissaKind, OrdinateKind, SpectrumDataset, SpectrumSample};

/// Parse a dataset from CSV text. `source_label` is attached to the dataset
/// for provenance (typically a file path).
pub fn read_csv_str(
    text: &str,
    source_label: Option<&str>,
) -> Result<(SpectrumDataset, UnitsMode)> {
    let mut abscissa_kind: Option<AbscissaKind> = None;
    let mut ordinate_kind: Option<OrdinateKind> = None;
    let mut units: Option<UnitsMode> = None;
    let mut expect_sigma: Option<bool> = None;
    let mut samples: Vec<SpectrumSample> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let Some((key, value)) = comment.split_once(':') else {
                continue; // plain comment
            };
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            match key.as_str() {
                "abscissa_kind" => {
                    if abscissa_kind.is_some() {
                        return Err(line_err(lineno, "duplicate 'abscissa_kind' metadata"));
                    }
                    abscissa_kind = Some(
                        value
                            .parse::<AbscissaKind>()
                            .map_err(|e| line_err(lineno, &e.to_string()))?,
                    );
                }
                "ordinate_kind" => {
                    if ordinate_kind.is_some() {
                        return Err(line_err(lineno, "duplicate 'ordinate_kind' metadata"));
                    }
                    ordinate_kind = Some(
                        value
                            .parse::<OrdinateKind>()
                            .map_err(|e| line_err(lineno, &e.to_string()))?,
                    );
                }
                "units" => {
                    if units.is_some() {
                        return Err(line_err(lineno, "duplicate 'units' metadata"));
                    }
                    units = Some(
                        value
                            .parse::<UnitsMode>()
                            .map_err(|e| line_err(lineno, &e.to_string()))?,
                    );
                }
                _ => {} // provenance or free-form comment
            }
            continue;
        }

        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match expect_sigma {
            None => {
                // First non-comment line must be the column header.
                match fields.as_slice() {
                    ["abscissa", "value"] => expect_sigma = Some(false),
                    ["abscissa", "value", "sigma"] => expect_sigma = Some(true),
                    _ => {
                        return Err(line_err(
                            lineno,
                            "expected column header 'abscissa,value' or 'abscissa,value,sigma'",
                        ))
                    }
                }
            }
            Some(with_sigma) => {
                let expected_cols = if with_sigma { 3 } else { 2 };
                if fields.len() != expected_cols {
                    return Err(line_err(
                        lineno,
                        &format!("expected {expected_cols} columns, found {}", fields.len()),
                    ));
                }
                let abscissa = parse_number(fields[0], lineno)?;
                let value = parse_number(fields[1], lineno)?;
                let sigma = if with_sigma {
                    Some(parse_number(fields[2], lineno)?)
                } else {
                    None
                };
                if !abscissa.is_finite() || abscissa <= 0.0 {
                    return Err(line_err(
                        lineno,
                        &format!("abscissa must be positive and finite, got {abscissa}"),
                    ));
                }
                if !value.is_finite() {
                    return Err(line_err(
                        lineno,
                        &format!("value must be finite, got {value}"),
                    ));
                }
                if let Some(sig) = sigma {
                    if !sig.is_finite() || sig <= 0.0 {
                        return Err(line_err(
                            lineno,
                            &format!("sigma must be positive and finite, got {sig}"),
                        ));
                    }
                }
                samples.push(SpectrumSample {
                    abscissa,
                    value,
                    sigma,
                });
            }
        }
    }

    if expect_sigma.is_none() {
        return Err(Error::InvalidInput(
            "no column header found (expected 'abscissa,value' or 'abscissa,value,sigma')"
                .to_string(),
        ));
    }
    if samples.is_empty() {
        return Err(Error::InvalidInput("no data rows found".to_string()));
    }

    let dataset = SpectrumDataset::new(
        samples,
        abscissa_kind.unwrap_or(AbscissaKind::Angular),
        ordinate_kind.unwrap_or(OrdinateKind::PerOmega),
        source_label.map(str::to_string),
    )?;
    Ok((dataset, units.unwrap_or(UnitsMode::Si)))
}

/// Read a dataset from a CSV file; the path becomes the source label.
pub fn read_csv_path(path: &Path) -> Result<(SpectrumDataset, UnitsMode)> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidInput(format!("could not read '{}': {e}", path.display()))
    })?;
    read_csv_str(&text, Some(&path.display().to_string()))
}

/// Render a dataset as CSV with full float precision (round-trips exactly).
pub fn write_csv(dataset: &SpectrumDataset, units: UnitsMode) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# abscissa_kind: {}\n",
        dataset.abscissa_kind().as_str()
    ));
    out.push_str(&format!(
        "# ordinate_kind: {}\n",
        dataset.ordinate_kind().as_str()
    ));
    out.push_str(&format!("# units: {}\n", units.as_str()));
    let with_sigma = dataset.has_sigmas();
    out.push_str(if with_sigma {
        "abscissa,value,sigma\n"
    } else {
        "abscissa,value\n"
    });
    for s in dataset.samples() {
        match (with_sigma, s.sigma) {
            (true, Some(sig)) => {
                out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", s.abscissa, s.value, sig))
            }
            _ => out.push_str(&format!("{:.16e},{:.16e}\n", s.abscissa, s.value)),
        }
    }
    out
}

fn line_err(lineno: usize, message: &str) -> Error {
    Error::InvalidInput(format!("line {lineno}: {message}"))
}

fn parse_number(token: &str, lineno: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| line_err(lineno, &format!("could not parse '{token}' as a number")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_file_with_defaults() {
        let text = "abscissa,value\n1.0,2.0\n3.0,4.0\n";
        let (ds, units) = read_csv_str(text, None).unwrap();
        assert_eq!(units, UnitsMode::Si);
        assert_eq!(ds.abscissa_kind(), AbscissaKind::Angular);
        assert_eq!(ds.ordinate_kind(), OrdinateKind::PerOmega);
        assert_eq!(ds.len(), 2);
        assert!(!ds.has_sigmas());
    }

    #[test]
    fn parses_metadata_and_sigma_column() {
        let text = "\
# abscissa_kind: wavelength
# ordinate_kind: per_lambda
# units: natural

# free-form comment, ignored
# generated_by: someone's lab notebook
abscissa,value,sigma
5.0e-7,1.25e3,1.2e1
6.0e-7,1.10e3,1.1e1
";
        let (ds, units) = read_csv_str(text, Some("t.csv")).unwrap();
        assert_eq!(units, UnitsMode::Natural);
        assert_eq!(ds.abscissa_kind(), AbscissaKind::Wavelength);
        assert_eq!(ds.ordinate_kind(), OrdinateKind::PerLambda);
        assert_eq!(ds.source_label(), Some("t.csv"));
        assert!(ds.has_sigmas());
        assert_eq!(ds.samples()[0].sigma, Some(12.0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_number = "abscissa,value\n1.0,2.0\n3.0,oops\n";
        let err = read_csv_str(bad_number, None).unwrap_err().to_string();
        assert!(err.contains("line 3"), "message was: {err}");
        assert!(err.contains("oops"), "message was: {err}");

        let bad_header = "wavelength,intensity\n1.0,2.0\n";
        let err = read_csv_str(bad_header, None).unwrap_err().to_string();
        assert!(err.contains("line 1"), "message was: {err}");

        let wrong_cols = "abscissa,value,sigma\n1.0,2.0\n";
        let err = read_csv_str(wrong_cols, None).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("3 columns"), "message was: {err}");

        let neg_abscissa = "abscissa,value\n-1.0,2.0\n";
        let err = read_csv_str(neg_abscissa, None).unwrap_err().to_string();
        assert!(err.contains("line 2"), "message was: {err}");

        let dup_meta = "# units: si\n# units: si\nabscissa,value\n1.0,2.0\n";
        let err = read_csv_str(dup_meta, None).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("duplicate"), "message was: {err}");

        let bad_kind = "# abscissa_kind: wavenumber\nabscissa,value\n1.0,2.0\n";
        let err = read_csv_str(bad_kind, None).unwrap_err().to_string();
        assert!(err.contains("line 1") && err.contains("wavenumber"), "message was: {err}");
    }

    #[test]
    fn rejects_empty_and_headerless_input() {
        assert!(read_csv_str("", None).is_err());
        assert!(read_csv_str("# units: si\n", None).is_err());
        assert!(read_csv_str("abscissa,value\n", None).is_err());
    }

    #[test]
    fn write_read_round_trip_is_exact() {
        let samples = vec![
            SpectrumSample {
                abscissa: 0.1 + 0.2, // deliberately non-representable decimals
                value: 1.0 / 3.0,
                sigma: Some(std::f64::consts::PI * 1e-7),
            },
            SpectrumSample {
                abscissa: 7.213_941_872_634_1e14,
                value: -3.2e-19,
                sigma: Some(1.7e-21),
            },
        ];
        let ds = SpectrumDataset::new(
            samples,
            AbscissaKind::Frequency,
            OrdinateKind::PerNu,
            None,
        )
        .unwrap();
        let text = write_csv(&ds, UnitsMode::Natural);
        let (back, units) = read_csv_str(&text, None).unwrap();
        assert_eq!(units, UnitsMode::Natural);
        assert_eq!(back.abscissa_kind(), AbscissaKind::Frequency);
        assert_eq!(back.ordinate_kind(), OrdinateKind::PerNu);
        assert_eq!(back.len(), ds.len());
        for (a, b) in ds.samples().iter().zip(back.samples()) {
            assert_eq!(a.abscissa.to_bits(), b.abscissa.to_bits());
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            assert_eq!(
                a.sigma.unwrap().to_bits(),
                b.sigma.unwrap().to_bits()
            );
        }
    }
}
