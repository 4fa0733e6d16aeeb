use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::problems::linalg::DenseMat;

/// Labeled sparse design matrix stored as sorted (row, col, value) triplets.
#[derive(Clone, Debug)]
pub struct SparseDataset {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(usize, usize, f64)>,
    pub labels: Vec<f64>,
}

impl SparseDataset {
    /// Validates shapes, sorts entries by (row, col), and rejects duplicate
    /// coordinates and non-finite values.
    pub fn new(
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, f64)>,
        labels: Vec<f64>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(
                "dataset shape must be positive".to_string(),
            ));
        }
        if labels.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                actual: labels.len(),
            });
        }
        if labels.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "dataset labels".to_string(),
            });
        }
        for &(i, j, v) in &entries {
            if i >= rows || j >= cols {
                return Err(Error::InvalidParameter(format!(
                    "entry ({i}, {j}) outside a {rows} x {cols} dataset"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("dataset entry ({i}, {j})"),
                });
            }
        }
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        if entries.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidParameter(
                "duplicate (row, col) coordinate in dataset".to_string(),
            ));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            labels,
        })
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Inner product of every row with `x` in one pass over the triplets.
    pub fn row_dots(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "row_dots dimension mismatch");
        let mut s = vec![0.0; self.rows];
        for &(i, j, v) in &self.entries {
            s[i] += v * x[j];
        }
        s
    }

    /// Weighted sum of rows: `A^T c`.
    pub fn accumulate_rows(&self, coeffs: &[f64]) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.rows, "accumulate_rows dimension mismatch");
        let mut g = vec![0.0; self.cols];
        for &(i, j, v) in &self.entries {
            g[j] += coeffs[i] * v;
        }
        g
    }

    pub fn to_dense(&self) -> DenseMat {
        let mut a = DenseMat::zeros(self.rows, self.cols);
        for &(i, j, v) in &self.entries {
            a.set(i, j, v);
        }
        a
    }

    /// Synthetic binary classification data: a sparse Gaussian design and
    /// labels from the sign of a planted linear score.
    pub fn synthetic_classification(
        rows: usize,
        cols: usize,
        density: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(density > 0.0 && density <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "density must lie in (0, 1], got {density}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<f64> = (0..cols).map(|_| rng.sample(StandardNormal)).collect();
        let mut entries = Vec::new();
        let mut labels = vec![0.0; rows];
        for i in 0..rows {
            let mut score = 0.0;
            for j in 0..cols {
                if rng.random::<f64>() < density {
                    let v: f64 = rng.sample(StandardNormal);
                    entries.push((i, j, v));
                    score += v * w[j];
                }
            }
            labels[i] = if score >= 0.0 { 1.0 } else { -1.0 };
        }
        Self::new(rows, cols, entries, labels)
    }
}

/// Reads a dataset in the plain text `label idx:value ...` format with
/// one-based, strictly ascending feature indices per line. A line holding
/// only a label is a valid all-zero row. Whitespace-only lines are skipped.
pub fn load_libsvm(path: &Path) -> Result<SparseDataset> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut labels: Vec<f64> = Vec::new();
    let mut max_col = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let mut tokens = line.split_whitespace();
        let Some(label_tok) = tokens.next() else {
            continue;
        };
        let label: f64 = label_tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("cannot parse label '{label_tok}'"),
        })?;
        if !label.is_finite() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("label '{label_tok}' is not finite"),
            });
        }
        let row = labels.len();
        labels.push(label);

        let mut prev_idx = 0usize;
        for tok in tokens {
            let Some((idx_s, val_s)) = tok.split_once(':') else {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("feature token '{tok}' is not index:value"),
                });
            };
            let idx: usize = idx_s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("cannot parse feature index '{idx_s}'"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "feature indices are one-based; found 0".to_string(),
                });
            }
            if idx <= prev_idx {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!(
                        "feature indices must be strictly ascending; {idx} follows {prev_idx}"
                    ),
                });
            }
            let val: f64 = val_s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("cannot parse feature value '{val_s}'"),
            })?;
            if !val.is_finite() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("feature value '{val_s}' is not finite"),
                });
            }
            prev_idx = idx;
            max_col = max_col.max(idx);
            entries.push((row, idx - 1, val));
        }
    }

    if labels.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "file holds no data rows".to_string(),
        });
    }
    // A file of all-zero rows still needs one column for a usable shape.
    SparseDataset::new(labels.len(), max_col.max(1), entries, labels)
}
