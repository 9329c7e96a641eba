//! Dense matrices over [`Scalar`] with exact and floating elimination.
//!
//! Rational mode clears row denominators and runs fraction-free (Bareiss)
//! elimination, so every rank, kernel, and determinant decision is exact.
//! Float mode uses partial pivoting with a relative pivot threshold.

use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// Row-major dense matrix; all entries share one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Mat> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::ShapeMismatch("empty matrix".into()));
        }
        let cols = rows[0].len();
        let mode = rows[0][0].mode();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "ragged rows: {} vs {}",
                    row.len(),
                    cols
                )));
            }
            for s in row {
                if s.mode() != mode {
                    return Err(Error::ShapeMismatch("mixed scalar modes".into()));
                }
                data.push(s.clone());
            }
        }
        Ok(Mat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize, mode: Mode) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![mode.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, mode: Mode) -> Mat {
        let mut m = Mat::zeros(n, n, mode);
        for i in 0..n {
            *m.at_mut(i, i) = mode.one();
        }
        m
    }

    pub fn from_columns(cols: &[Vec<Scalar>]) -> Result<Mat> {
        if cols.is_empty() || cols[0].is_empty() {
            return Err(Error::ShapeMismatch("empty matrix".into()));
        }
        let n = cols[0].len();
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Mat::from_rows(rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn mode(&self) -> Mode {
        self.data[0].mode()
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows, self.mode());
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mode = self.mode();
        let mut out = Mat::zeros(self.rows, other.cols, mode);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = mode.zero();
                for k in 0..self.cols {
                    acc = acc + self.at(i, k) * other.at(k, j);
                }
                *out.at_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * vec{}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mode = self.mode();
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = mode.zero();
                for j in 0..self.cols {
                    acc = acc + self.at(i, j) * &v[j];
                }
                acc
            })
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Mat {
        let rows = row_idx
            .iter()
            .map(|&i| col_idx.iter().map(|&j| self.at(i, j).clone()).collect())
            .collect();
        Mat::from_rows(rows).expect("submatrix of a valid matrix")
    }

    pub fn max_abs_entry(&self) -> Scalar {
        let mut best = self.data[0].abs();
        for s in &self.data[1..] {
            let a = s.abs();
            if a.cmp_abs(&best) == std::cmp::Ordering::Greater {
                best = a;
            }
        }
        best
    }

    /// Determinant of a square matrix. Exact in rational mode.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        let ech = self.echelon(DEFAULT_PIVOT_EPS);
        if ech.pivots.len() < self.rows {
            return Ok(self.mode().zero());
        }
        let sign = if ech.sign < 0 {
            -self.mode().one()
        } else {
            self.mode().one()
        };
        match self.mode() {
            Mode::Rational => {
                // Bareiss: the last pivot is det of the row-scaled matrix.
                let (r, c) = *ech.pivots.last().expect("full rank");
                Ok(sign * ech.mat.at(r, c) / &ech.det_scale)
            }
            Mode::Float => {
                let mut prod = Mode::Float.one();
                for &(r, c) in &ech.pivots {
                    prod = prod * ech.mat.at(r, c);
                }
                Ok(sign * prod)
            }
        }
    }

    /// Rank via fraction-free elimination (exact) or thresholded pivoting.
    pub fn rank(&self, eps: f64) -> usize {
        self.echelon(eps).pivots.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self, eps: f64) -> Vec<Vec<Scalar>> {
        let ech = self.echelon(eps);
        let mode = self.mode();
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        free_cols
            .iter()
            .map(|&f| {
                let mut v = vec![mode.zero(); self.cols];
                v[f] = mode.one();
                for &(r, c) in ech.pivots.iter().rev() {
                    let mut acc = mode.zero();
                    for j in (c + 1)..self.cols {
                        if !v[j].is_zero() {
                            acc = acc + ech.mat.at(r, j) * &v[j];
                        }
                    }
                    v[c] = -acc / ech.mat.at(r, c);
                }
                normalize_kernel_vector(v)
            })
            .collect()
    }

    /// Solve `self * x = b` when consistent; `None` when inconsistent.
    /// Free variables are set to zero, so the output is deterministic.
    pub fn solve_consistent(&self, b: &[Scalar], eps: f64) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve: {} rows vs {} rhs",
                self.rows,
                b.len()
            )));
        }
        let mut aug_rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row: Vec<Scalar> = self.row(i).to_vec();
            row.push(b[i].clone());
            aug_rows.push(row);
        }
        let aug = Mat::from_rows(aug_rows)?;
        let ech = aug.echelon(eps);
        let mode = self.mode();
        if ech.pivots.iter().any(|&(_, c)| c == self.cols) {
            return Ok(None);
        }
        let mut x = vec![mode.zero(); self.cols];
        for &(r, c) in ech.pivots.iter().rev() {
            let mut acc = ech.mat.at(r, self.cols).clone();
            for j in (c + 1)..self.cols {
                if !x[j].is_zero() {
                    acc = acc - ech.mat.at(r, j) * &x[j];
                }
            }
            x[c] = acc / ech.mat.at(r, c);
        }
        Ok(Some(x))
    }

    /// Least-squares solution of `self * x = b` through the normal equations,
    /// with the max-abs residual of the original system. Exact in rational
    /// mode: the residual is exactly zero iff the system is consistent.
    pub fn least_squares(&self, b: &[Scalar]) -> Result<(Vec<Scalar>, Scalar)> {
        let at = self.transpose();
        let ata = at.mul(self)?;
        let atb = at.mul_vec(b)?;
        let x = ata
            .solve_consistent(&atb, DEFAULT_PIVOT_EPS)?
            .ok_or(Error::SingularJacobian)?;
        let ax = self.mul_vec(&x)?;
        let mut worst = self.mode().zero();
        for i in 0..self.rows {
            let r = (&ax[i] - &b[i]).abs();
            if r.cmp_abs(&worst) == std::cmp::Ordering::Greater {
                worst = r;
            }
        }
        Ok((x, worst))
    }

    fn echelon(&self, eps: f64) -> Echelon {
        match self.mode() {
            Mode::Rational => self.echelon_fraction_free(),
            Mode::Float => self.echelon_float(eps),
        }
    }

    /// Bareiss one-step fraction-free elimination after clearing row
    /// denominators. Intermediate entries stay integer-valued.
    fn echelon_fraction_free(&self) -> Echelon {
        let mut m = self.clone();
        let mut det_scale = Mode::Rational.one();
        for i in 0..m.rows {
            let mut lcm = num_bigint::BigInt::one();
            for j in 0..m.cols {
                let r = m.at(i, j).as_rational().expect("rational mode");
                lcm = lcm.lcm(r.denom());
            }
            let mult = Scalar::from_big_rational(num_rational::BigRational::from_integer(lcm));
            for j in 0..m.cols {
                *m.at_mut(i, j) = m.at(i, j) * &mult;
            }
            det_scale = det_scale * &mult;
        }
        let mut pivots = Vec::new();
        let mut sign = 1i32;
        let mut prev = Mode::Rational.one();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let tmp = m.at(r, j).clone();
                    *m.at_mut(r, j) = m.at(p, j).clone();
                    *m.at_mut(p, j) = tmp;
                }
                sign = -sign;
            }
            let pivot = m.at(r, c).clone();
            for i in (r + 1)..m.rows {
                let lead = m.at(i, c).clone();
                for j in (c + 1)..m.cols {
                    let v = (m.at(i, j) * &pivot - &lead * m.at(r, j)) / &prev;
                    *m.at_mut(i, j) = v;
                }
                *m.at_mut(i, c) = Mode::Rational.zero();
            }
            prev = pivot;
            pivots.push((r, c));
            r += 1;
        }
        Echelon {
            mat: m,
            pivots,
            sign,
            det_scale,
        }
    }

    fn echelon_float(&self, eps: f64) -> Echelon {
        let mut m = self.clone();
        let mut max_row_norm = 0f64;
        for i in 0..m.rows {
            let norm: f64 = m
                .row(i)
                .iter()
                .map(|s| s.to_f64().powi(2))
                .sum::<f64>()
                .sqrt();
            max_row_norm = max_row_norm.max(norm);
        }
        let threshold = eps * max_row_norm.max(1.0);
        let mut pivots = Vec::new();
        let mut sign = 1i32;
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut best = r;
            for i in (r + 1)..m.rows {
                if m.at(i, c).cmp_abs(m.at(best, c)) == std::cmp::Ordering::Greater {
                    best = i;
                }
            }
            if m.at(best, c).to_f64().abs() <= threshold {
                continue;
            }
            if best != r {
                for j in 0..m.cols {
                    let tmp = m.at(r, j).clone();
                    *m.at_mut(r, j) = m.at(best, j).clone();
                    *m.at_mut(best, j) = tmp;
                }
                sign = -sign;
            }
            let pivot = m.at(r, c).clone();
            for i in (r + 1)..m.rows {
                let factor = m.at(i, c) / &pivot;
                for j in (c + 1)..m.cols {
                    let v = m.at(i, j) - &factor * m.at(r, j);
                    *m.at_mut(i, j) = v;
                }
                *m.at_mut(i, c) = Mode::Float.zero();
            }
            pivots.push((r, c));
            r += 1;
        }
        Echelon {
            mat: m,
            pivots,
            sign,
            det_scale: Mode::Float.one(),
        }
    }
}

/// Pivot threshold factor for float elimination when no caller value applies.
pub const DEFAULT_PIVOT_EPS: f64 = 1e-9;

struct Echelon {
    mat: Mat,
    pivots: Vec<(usize, usize)>,
    sign: i32,
    det_scale: Scalar,
}

/// Scale a rational kernel vector to coprime integer entries; float vectors
/// pass through unchanged.
fn normalize_kernel_vector(v: Vec<Scalar>) -> Vec<Scalar> {
    match v[0].mode() {
        Mode::Float => v,
        Mode::Rational => {
            let mut lcm = num_bigint::BigInt::one();
            for s in &v {
                lcm = lcm.lcm(s.as_rational().expect("rational").denom());
            }
            let scaled: Vec<num_bigint::BigInt> = v
                .iter()
                .map(|s| {
                    let r = s.as_rational().expect("rational")
                        * num_rational::BigRational::from_integer(lcm.clone());
                    r.to_integer()
                })
                .collect();
            let mut g = num_bigint::BigInt::from(0);
            for z in &scaled {
                g = g.gcd(z);
            }
            if g.is_one() || g == num_bigint::BigInt::from(0) {
                return scaled
                    .into_iter()
                    .map(|z| Scalar::from_big_rational(num_rational::BigRational::from_integer(z)))
                    .collect();
            }
            scaled
                .into_iter()
                .map(|z| Scalar::from_big_rational(num_rational::BigRational::from_integer(z / &g)))
                .collect()
        }
    }
}
