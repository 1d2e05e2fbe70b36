//! The `SPINORFIELD v1` tabulated-field file format: a plain-text grid of
//! spinor samples that round-trips bit-exactly and is trivially parseable
//! from any language.
//!
//! Layout:
//! ```text
//! SPINORFIELD v1
//! lo0 lo1 lo2 lo3 hi0 hi1 hi2 hi3 n0 n1 n2 n3
//! mass <m>
//! <one row per grid point, x^0 slowest: Re psi0 Im psi0 ... Re psi3 Im psi3>
//! ```
//! Floats are written with 17 significant digits, which reconstructs every
//! `f64` exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use spinor_gordon::fields::FieldError;
use spinor_gordon::{Complex64, Grid, SpacetimePoint, SpinorField, SpinorValue};
use thiserror::Error;

pub const MAGIC: &str = "SPINORFIELD v1";

#[derive(Debug, Error)]
pub enum TabulatedError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed tabulated field, line {line}: {what}")]
    Malformed { line: usize, what: String },
    #[error("sample-count mismatch: grid has {expected} points, file has {got} rows")]
    SampleCount { expected: usize, got: usize },
    #[error("non-finite sample in row {row}")]
    NonFinite { row: usize },
    #[error("grid leaves the evaluation domain of field '{label}'")]
    Domain { label: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A spinor field sampled on a grid, with the mass it was declared with and
/// one value per node in row-major (`x^0` slowest) order.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedField {
    pub grid: Grid,
    pub mass: f64,
    pub samples: Vec<SpinorValue>,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl TabulatedField {
    /// Samples `field` on `grid`. Fails if the grid leaves the field's
    /// domain or any sample is non-finite.
    pub fn from_field(field: &SpinorField, grid: &Grid) -> Result<Self, TabulatedError> {
        if !grid.within_domain(field) {
            return Err(TabulatedError::Domain { label: field.label().to_string() });
        }
        let samples: Vec<SpinorValue> = grid.points().map(|x| field.jet(&x).value).collect();
        for (row, v) in samples.iter().enumerate() {
            if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(TabulatedError::NonFinite { row });
            }
        }
        Ok(Self { grid: grid.clone(), mass: field.mass(), samples })
    }

    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{MAGIC}")?;
        let lo = self.grid.lo();
        let hi = self.grid.hi();
        let counts = self.grid.counts();
        let mut header: Vec<String> = (0..4).map(|k| fmt_f64(lo[k])).collect();
        header.extend((0..4).map(|k| fmt_f64(hi[k])));
        header.extend(counts.iter().map(|n| n.to_string()));
        writeln!(w, "{}", header.join(" "))?;
        writeln!(w, "mass {}", fmt_f64(self.mass))?;
        for v in &self.samples {
            let row: Vec<String> = v
                .iter()
                .flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)])
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), TabulatedError> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from(r: impl BufRead) -> Result<Self, TabulatedError> {
        let mut lines = r.lines().enumerate();
        let mut next_content = || -> Result<Option<(usize, String)>, TabulatedError> {
            for (idx, line) in lines.by_ref() {
                let line = line?;
                let trimmed = line.trim();
                if !trimmed.is_empty() {
                    return Ok(Some((idx + 1, trimmed.to_string())));
                }
            }
            Ok(None)
        };

        let (line_no, magic) = next_content()?
            .ok_or(TabulatedError::Malformed { line: 1, what: "empty file".into() })?;
        if magic != MAGIC {
            return Err(TabulatedError::Malformed {
                line: line_no,
                what: format!("expected header '{MAGIC}', got '{magic}'"),
            });
        }

        let (line_no, spec) = next_content()?
            .ok_or(TabulatedError::Malformed { line: 2, what: "missing grid spec".into() })?;
        let fields: Vec<&str> = spec.split_whitespace().collect();
        if fields.len() != 12 {
            return Err(TabulatedError::Malformed {
                line: line_no,
                what: format!("grid spec needs 12 fields, got {}", fields.len()),
            });
        }
        let parse_f = |s: &str| -> Result<f64, TabulatedError> {
            s.parse().map_err(|_| TabulatedError::Malformed {
                line: line_no,
                what: format!("bad number '{s}'"),
            })
        };
        let parse_n = |s: &str| -> Result<usize, TabulatedError> {
            s.parse().map_err(|_| TabulatedError::Malformed {
                line: line_no,
                what: format!("bad count '{s}'"),
            })
        };
        let lo = SpacetimePoint::new(
            parse_f(fields[0])?,
            parse_f(fields[1])?,
            parse_f(fields[2])?,
            parse_f(fields[3])?,
        );
        let hi = SpacetimePoint::new(
            parse_f(fields[4])?,
            parse_f(fields[5])?,
            parse_f(fields[6])?,
            parse_f(fields[7])?,
        );
        let counts =
            [parse_n(fields[8])?, parse_n(fields[9])?, parse_n(fields[10])?, parse_n(fields[11])?];
        let grid = Grid::new(lo, hi, counts)?;

        let (line_no, mass_line) = next_content()?
            .ok_or(TabulatedError::Malformed { line: 3, what: "missing mass line".into() })?;
        let mass = mass_line
            .strip_prefix("mass ")
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| TabulatedError::Malformed {
                line: line_no,
                what: format!("expected 'mass <m>', got '{mass_line}'"),
            })?;
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(TabulatedError::Malformed {
                line: line_no,
                what: format!("mass must be finite and nonnegative, got {mass}"),
            });
        }

        let expected = grid.len();
        let mut samples = Vec::with_capacity(expected);
        while let Some((line_no, row)) = next_content()? {
            let nums: Result<Vec<f64>, _> = row
                .split_whitespace()
                .map(|s| {
                    s.parse::<f64>().map_err(|_| TabulatedError::Malformed {
                        line: line_no,
                        what: format!("bad number '{s}'"),
                    })
                })
                .collect();
            let nums = nums?;
            if nums.len() != 8 {
                return Err(TabulatedError::Malformed {
                    line: line_no,
                    what: format!("sample row needs 8 numbers, got {}", nums.len()),
                });
            }
            if !nums.iter().all(|x| x.is_finite()) {
                return Err(TabulatedError::NonFinite { row: samples.len() });
            }
            samples.push(SpinorValue::new(
                Complex64::new(nums[0], nums[1]),
                Complex64::new(nums[2], nums[3]),
                Complex64::new(nums[4], nums[5]),
                Complex64::new(nums[6], nums[7]),
            ));
        }
        if samples.len() != expected {
            return Err(TabulatedError::SampleCount { expected, got: samples.len() });
        }
        Ok(Self { grid, mass, samples })
    }

    pub fn load(path: &Path) -> Result<Self, TabulatedError> {
        Self::read_from(BufReader::new(File::open(path)?))
    }

    /// The sub-grid on which the wrapped field may be probed: one cell of
    /// margin per side so central differences stay on tabulated nodes.
    pub fn interior_grid(&self) -> Result<Grid, TabulatedError> {
        Ok(self.grid.interior()?)
    }

    /// Wraps the samples in a central finite-difference provider with the
    /// grid spacings as steps. The field's evaluation domain is the interior
    /// box; probing it off-node is a programming error and panics.
    pub fn into_field(self) -> Result<SpinorField, TabulatedError> {
        let spacings = self.grid.spacings();
        for (k, &h) in spacings.iter().enumerate() {
            if h <= 0.0 {
                return Err(TabulatedError::Malformed {
                    line: 2,
                    what: format!("axis {k} needs at least 2 distinct samples to difference"),
                });
            }
        }
        let interior = self.grid.interior()?;
        let domain: [(f64, f64); 4] = std::array::from_fn(|k| (interior.lo()[k], interior.hi()[k]));
        let label = format!("tabulated({} points, m={})", self.grid.len(), self.mass);

        let lo = self.grid.lo();
        let counts = self.grid.counts();
        let samples = self.samples;
        let lookup = move |x: &SpacetimePoint| -> SpinorValue {
            let mut idx = [0usize; 4];
            for k in 0..4 {
                let t = (x[k] - lo[k]) / spacings[k];
                let i = t.round();
                assert!(
                    (t - i).abs() <= 1e-3 && i >= 0.0 && (i as usize) < counts[k],
                    "tabulated field probed off-node at {:?} (axis {k})",
                    x
                );
                idx[k] = i as usize;
            }
            let linear = ((idx[0] * counts[1] + idx[1]) * counts[2] + idx[2]) * counts[3] + idx[3];
            samples[linear]
        };
        let mass = self.mass;
        Ok(SpinorField::finite_difference(lookup, spacings, mass, label)?.with_domain(domain))
    }
}
