//! Dense vectors and matrices over `F_q`, plus the few structured matrices the
//! coset codes need: Vandermonde generators, their completion to a square
//! invertible matrix and the matching dual parity check.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{gcd, ExponentElement, FieldError, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("need {n} distinct nonzero evaluation points but F_{q} only has {}", q - 1)]
    NotEnoughPoints { n: usize, q: u64 },
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn expect_len(expected: usize, got: usize) -> Result<(), LinalgError> {
    if expected != got {
        return Err(LinalgError::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn same_field(a: PrimeField, b: PrimeField) -> Result<(), LinalgError> {
    if a != b {
        return Err(FieldError::ModulusMismatch(a.modulus(), b.modulus()).into());
    }
    Ok(())
}

/// A vector over `F_q`. Components are stored reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vector {
    field: PrimeField,
    coords: Vec<u64>,
}

impl Vector {
    pub fn new(field: PrimeField, coords: Vec<u64>) -> Self {
        let coords = coords.into_iter().map(|c| field.reduce(c)).collect();
        Vector { field, coords }
    }

    pub fn zeros(field: PrimeField, len: usize) -> Self {
        Vector {
            field,
            coords: vec![0; len],
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }

    pub fn get(&self, i: usize) -> u64 {
        self.coords[i]
    }

    pub fn checked_add(&self, other: &Vector) -> Result<Vector, LinalgError> {
        same_field(self.field, other.field)?;
        expect_len(self.len(), other.len())?;
        let f = self.field;
        Ok(Vector {
            field: f,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Vector) -> Result<Vector, LinalgError> {
        same_field(self.field, other.field)?;
        expect_len(self.len(), other.len())?;
        let f = self.field;
        Ok(Vector {
            field: f,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u64) -> Vector {
        let f = self.field;
        Vector {
            field: f,
            coords: self.coords.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `[self, other]`.
    pub fn concat(&self, other: &Vector) -> Result<Vector, LinalgError> {
        same_field(self.field, other.field)?;
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(Vector {
            field: self.field,
            coords,
        })
    }

    /// Components at `indices` (0-based), in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Vec<u64> {
        indices.iter().map(|&i| self.coords[i]).collect()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Row-major dense matrix over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn new(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: Vec<u64>,
    ) -> Result<Self, LinalgError> {
        expect_len(rows * cols, entries.len())?;
        let entries = entries.into_iter().map(|e| field.reduce(e)).collect();
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            expect_len(cols, r.len())?;
            entries.extend_from_slice(r);
        }
        Matrix::new(field, rows.len(), cols, entries)
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        same_field(self.field, other.field)?;
        expect_len(self.cols, other.rows)?;
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] = f.add(out.entries[idx], f.mul(a, other.get(l, j)));
                }
            }
        }
        Ok(out)
    }

    /// `M · vᵀ` on raw residues; `v.len()` must equal `cols`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// `v · M` on raw residues; `v.len()` must equal `rows`.
    pub fn apply_left(&self, v: &[u64]) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.rows);
        let f = self.field;
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, a));
            }
        }
        out
    }

    /// Column vector product `M · vᵀ`.
    pub fn matvec(&self, v: &Vector) -> Result<Vector, LinalgError> {
        same_field(self.field, v.field())?;
        expect_len(self.cols, v.len())?;
        Ok(Vector {
            field: self.field,
            coords: self.apply(v.coords()),
        })
    }

    /// Row vector product `v · M`.
    pub fn vecmat(&self, v: &Vector) -> Result<Vector, LinalgError> {
        same_field(self.field, v.field())?;
        expect_len(self.rows, v.len())?;
        Ok(Vector {
            field: self.field,
            coords: self.apply_left(v.coords()),
        })
    }

    /// `[self; other]`, stacked vertically.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        same_field(self.field, other.field)?;
        if self.rows > 0 && other.rows > 0 {
            expect_len(self.cols, other.cols)?;
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols,
            entries,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            entries.extend(cols.iter().map(|&j| self.get(i, j)));
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    /// Gaussian elimination in place; returns (rank, determinant factor).
    /// The determinant factor is only meaningful for square matrices.
    fn eliminate(&mut self) -> (usize, u64) {
        let f = self.field;
        let mut det = 1;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col) != 0) else {
                det = 0;
                continue;
            };
            if pivot != rank {
                for j in 0..self.cols {
                    self.entries.swap(pivot * self.cols + j, rank * self.cols + j);
                }
                det = f.neg(det);
            }
            let p = self.get(rank, col);
            det = f.mul(det, p);
            let p_inv = f.inv(p).expect("nonzero pivot");
            for j in 0..self.cols {
                let idx = rank * self.cols + j;
                self.entries[idx] = f.mul(self.entries[idx], p_inv);
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.mul(factor, self.get(rank, j));
                    let idx = r * self.cols + j;
                    self.entries[idx] = f.sub(self.entries[idx], v);
                }
            }
            rank += 1;
        }
        if rank < self.rows {
            det = 0;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0
    }

    pub fn det(&self) -> Result<u64, LinalgError> {
        expect_len(self.rows, self.cols)?;
        if self.rows == 0 {
            return Ok(1);
        }
        Ok(self.clone().eliminate().1)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        expect_len(self.rows, self.cols)?;
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.entries[i * 2 * n + j] = self.get(i, j);
            }
            aug.entries[i * 2 * n + n + i] = 1;
        }
        // pivots only from the left half
        let rank = aug.eliminate_left(n);
        if rank < n {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.entries[i * n + j] = aug.get(i, n + j);
            }
        }
        Ok(inv)
    }

    fn eliminate_left(&mut self, left_cols: usize) -> usize {
        let full_cols = self.cols;
        let f = self.field;
        let mut rank = 0;
        for col in 0..left_cols {
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pivot != rank {
                for j in 0..full_cols {
                    self.entries.swap(pivot * full_cols + j, rank * full_cols + j);
                }
            }
            let p_inv = f.inv(self.get(rank, col)).expect("nonzero pivot");
            for j in 0..full_cols {
                let idx = rank * full_cols + j;
                self.entries[idx] = f.mul(self.entries[idx], p_inv);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == rank || factor == 0 {
                    continue;
                }
                for j in 0..full_cols {
                    let v = f.mul(factor, self.get(rank, j));
                    let idx = r * full_cols + j;
                    self.entries[idx] = f.sub(self.entries[idx], v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Unique solution of `M x = b` for square invertible `M`.
    pub fn solve(&self, b: &Vector) -> Result<Vector, LinalgError> {
        expect_len(self.rows, b.len())?;
        let inv = self.inverse()?;
        inv.matvec(b)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Vandermonde matrix with `dim` rows over the points `1..=n`: row `i` holds
/// the `i`-th powers. Any `dim` columns are linearly independent, so this
/// generates an `[n, dim]` MDS (Reed-Solomon) code.
pub fn rs_generator(n: usize, dim: usize, field: PrimeField) -> Result<Matrix, LinalgError> {
    if n as u64 >= field.modulus() {
        return Err(LinalgError::NotEnoughPoints {
            n,
            q: field.modulus(),
        });
    }
    if dim > n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            got: dim,
        });
    }
    Ok(vandermonde_rows(n, 0..dim, field))
}

fn vandermonde_rows(n: usize, powers: std::ops::Range<usize>, field: PrimeField) -> Matrix {
    let rows = powers.len();
    let mut entries = Vec::with_capacity(rows * n);
    for p in powers {
        entries.extend((1..=n as u64).map(|x| field.pow(x, p as u64)));
    }
    Matrix {
        field,
        rows,
        cols: n,
        entries,
    }
}

/// Extends a full-row-rank `G` to a square invertible `[G; G̃]` and returns
/// `G̃`. Candidate rows are the Vandermonde power rows following `G`'s own
/// (exponents `rows(G)..n`), then unit vectors; each candidate is kept only
/// if it raises the rank.
pub fn complete_basis(g: &Matrix) -> Result<Matrix, LinalgError> {
    let n = g.cols();
    if g.rank() < g.rows() {
        return Err(LinalgError::RankDeficient);
    }
    let f = g.field();
    let need = n - g.rows();
    let mut stacked = g.clone();
    let mut extra = Matrix::zeros(f, 0, n);
    let power_rows = (g.rows()..n).map(|p| {
        (1..=n as u64)
            .map(|x| f.pow(x, p as u64))
            .collect::<Vec<_>>()
    });
    let unit_rows = (0..n).map(|i| {
        let mut e = vec![0; n];
        e[i] = 1;
        e
    });
    for cand in power_rows.chain(unit_rows) {
        if extra.rows() == need {
            break;
        }
        let row = Matrix::new(f, 1, n, cand)?;
        let trial = stacked.stack(&row)?;
        if trial.rank() == trial.rows() {
            stacked = trial;
            extra = extra.stack(&row)?;
        }
    }
    debug_assert_eq!(extra.rows(), need);
    Ok(extra)
}

/// Parity check `H` (k × n) for the code generated by `G`, normalised so
/// that `H·Gᵀ = 0` and `H·G̃ᵀ = I_k`. The syndrome of `[r, m]·[G; G̃]` is
/// therefore `m` itself.
pub fn dual_parity_check(g: &Matrix, g_tilde: &Matrix) -> Result<Matrix, LinalgError> {
    let full = g.stack(g_tilde)?;
    expect_len(full.rows(), full.cols())?;
    let inv_t = full.transpose().inverse()?;
    let n = full.cols();
    let k = g_tilde.rows();
    // H = [0 | I_k] · (Aᵀ)⁻¹, i.e. the last k rows of (Aᵀ)⁻¹.
    let mut entries = Vec::with_capacity(k * n);
    for i in n - k..n {
        entries.extend_from_slice(inv_t.row(i));
    }
    Matrix::new(g.field(), k, n, entries)
}

/// Whether `d` is invertible in `Z_{q-1}`.
pub fn is_unit_mod(d: ExponentElement) -> bool {
    d.is_unit()
}

/// Integer matrix with entries reduced into `Z_m` for a possibly composite
/// modulus `m` (here always `q - 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ExponentMatrix {
    pub fn new(modulus: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self, LinalgError> {
        expect_len(rows * cols, entries.len())?;
        Ok(ExponentMatrix {
            modulus,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<u64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            expect_len(cols, r.len())?;
            entries.extend_from_slice(r);
        }
        ExponentMatrix::new(modulus, rows.len(), cols, entries)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry as the integer it was constructed with (not reduced).
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn max_entry(&self) -> u64 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// No column repeats an entry (compared modulo `m`).
    pub fn columns_distinct(&self) -> bool {
        (0..self.cols).all(|j| {
            let mut col: Vec<u64> = (0..self.rows)
                .map(|i| self.get(i, j) % self.modulus)
                .collect();
            col.sort_unstable();
            col.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Determinant reduced into `Z_m`. Uses unimodular integer row
    /// operations (Euclidean pivoting) so it is exact for composite `m`.
    pub fn det_mod(&self) -> Result<ExponentElement, LinalgError> {
        expect_len(self.rows, self.cols)?;
        let m = self.modulus as i128;
        let n = self.rows;
        let mut a: Vec<i128> = self.entries.iter().map(|&e| e as i128 % m).collect();
        let mut sign: i128 = 1;
        for col in 0..n {
            loop {
                // smallest nonzero entry at or below the diagonal
                let pivot = (col..n)
                    .filter(|&r| a[r * n + col] != 0)
                    .min_by_key(|&r| a[r * n + col]);
                let Some(p) = pivot else {
                    return Ok(ExponentElement::new(0, self.modulus));
                };
                if p != col {
                    for j in 0..n {
                        a.swap(p * n + j, col * n + j);
                    }
                    sign = -sign;
                }
                let pv = a[col * n + col];
                let mut clean = true;
                for r in col + 1..n {
                    let factor = a[r * n + col] / pv;
                    if factor != 0 {
                        for j in col..n {
                            a[r * n + j] = (a[r * n + j] - factor * a[col * n + j]).rem_euclid(m);
                        }
                    }
                    if a[r * n + col] != 0 {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
        }
        let mut det = sign.rem_euclid(m);
        for i in 0..n {
            det = (det * a[i * n + i]).rem_euclid(m);
        }
        Ok(ExponentElement::new(det as u64, self.modulus))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det_mod()
            .map(|d| gcd(d.value(), self.modulus) == 1)
            .unwrap_or(false)
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| {
                let r: Vec<String> = r.iter().map(u64::to_string).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every vector of `F_q^len` in lexicographic order.
pub fn all_vectors(q: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = q.checked_pow(len as u32).expect("vector space too large");
    (0..total).map(move |mut idx| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = idx % q;
            idx /= q;
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn rs_generator_examples() {
        assert_eq!(rs_generator(2, 1, f(5)).unwrap().to_rows(), vec![vec![1, 1]]);
        assert_eq!(
            rs_generator(4, 2, f(5)).unwrap().to_rows(),
            vec![vec![1, 1, 1, 1], vec![1, 2, 3, 4]]
        );
        assert_eq!(
            rs_generator(6, 2, f(5)),
            Err(LinalgError::NotEnoughPoints { n: 6, q: 5 })
        );
    }

    #[test]
    fn rs_generator_is_mds() {
        for q in [5u64, 7, 11] {
            for n in 1..=8usize.min(q as usize - 1) {
                for dim in 1..=n {
                    let g = rs_generator(n, dim, f(q)).unwrap();
                    for cols in subsets(n, dim) {
                        let sub = g.select_columns(&cols);
                        assert_ne!(sub.det().unwrap(), 0, "q={q} n={n} dim={dim} {cols:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn complete_basis_examples() {
        let g = rs_generator(4, 2, f(5)).unwrap();
        let gt = complete_basis(&g).unwrap();
        assert_eq!(gt.to_rows(), vec![vec![1, 4, 4, 1], vec![1, 3, 2, 4]]);
        assert_ne!(g.stack(&gt).unwrap().det().unwrap(), 0);

        let id = Matrix::identity(f(5), 1);
        assert_eq!(complete_basis(&id).unwrap().rows(), 0);

        let rep = Matrix::from_rows(f(5), &[vec![1, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(complete_basis(&rep), Err(LinalgError::RankDeficient));
    }

    #[test]
    fn complete_basis_falls_back_to_unit_rows() {
        // second power row 1,4,4,1 is not independent of this G
        let g = Matrix::from_rows(f(5), &[vec![1, 4, 4, 1], vec![0, 1, 0, 0]]).unwrap();
        let gt = complete_basis(&g).unwrap();
        assert_eq!(gt.rows(), 2);
        assert_ne!(g.stack(&gt).unwrap().det().unwrap(), 0);
    }

    #[test]
    fn dual_parity_check_examples() {
        let g = Matrix::from_rows(f(5), &[vec![1, 1]]).unwrap();
        let gt = Matrix::from_rows(f(5), &[vec![1, 2]]).unwrap();
        let h = dual_parity_check(&g, &gt).unwrap();
        assert_eq!(h.to_rows(), vec![vec![4, 1]]);
        assert_eq!(h.mul(&g.transpose()).unwrap().to_rows(), vec![vec![0]]);
        assert_eq!(h.mul(&gt.transpose()).unwrap().to_rows(), vec![vec![1]]);

        let top = Matrix::from_rows(f(7), &[vec![1, 0, 0]]).unwrap();
        let bottom = Matrix::from_rows(f(7), &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(
            dual_parity_check(&top, &bottom).unwrap().to_rows(),
            vec![vec![0, 1, 0], vec![0, 0, 1]]
        );

        assert_eq!(dual_parity_check(&g, &g), Err(LinalgError::Singular));
    }

    #[test]
    fn dual_identities_for_vandermonde_family() {
        for q in [5u64, 7, 11] {
            for n in 2..(q as usize).min(7) {
                for k in 1..n {
                    let g = rs_generator(n, n - k, f(q)).unwrap();
                    let gt = complete_basis(&g).unwrap();
                    let h = dual_parity_check(&g, &gt).unwrap();
                    let hg = h.mul(&g.transpose()).unwrap();
                    assert!(hg.to_rows().iter().flatten().all(|&x| x == 0));
                    assert_eq!(h.mul(&gt.transpose()).unwrap(), Matrix::identity(f(q), k));
                }
            }
        }
    }

    #[test]
    fn det_and_inverse_basics() {
        assert_eq!(Matrix::identity(f(7), 3).det().unwrap(), 1);
        let m = Matrix::from_rows(f(7), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.det().unwrap(), 0);
        assert_eq!(m.inverse(), Err(LinalgError::Singular));
        let b = Vector::new(f(7), vec![1, 1]);
        assert_eq!(m.solve(&b), Err(LinalgError::Singular));

        let a = Matrix::from_rows(f(7), &[vec![2, 1], vec![1, 1]]).unwrap();
        let x = a.solve(&Vector::new(f(7), vec![3, 2])).unwrap();
        assert_eq!(x.coords(), &[1, 1]);
    }

    #[test]
    fn exponent_det_examples() {
        let m = ExponentMatrix::from_rows(10, &[vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(m.det_mod().unwrap().value(), 9);
        assert!(m.is_unimodular());
        let id = ExponentMatrix::from_rows(6, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(id.det_mod().unwrap().value(), 1);
        let s = ExponentMatrix::from_rows(10, &[vec![2, 4], vec![1, 2]]).unwrap();
        assert_eq!(s.det_mod().unwrap().value(), 0);
    }

    /// Leibniz expansion over i128, the independent route for det_mod.
    fn leibniz(rows: &[Vec<u64>]) -> i128 {
        let n = rows.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i128;
        fn heap(k: usize, perm: &mut Vec<usize>, rows: &[Vec<u64>], total: &mut i128) {
            if k == 1 {
                let n = perm.len();
                let mut inv = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if perm[i] > perm[j] {
                            inv += 1;
                        }
                    }
                }
                let prod: i128 = (0..n).map(|i| rows[i][perm[i]] as i128).product();
                *total += if inv % 2 == 0 { prod } else { -prod };
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, rows, total);
                if k % 2 == 0 {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
            }
        }
        heap(n, &mut perm, rows, &mut total);
        total
    }

    #[test]
    fn is_unit_mod_examples() {
        assert!(is_unit_mod(ExponentElement::new(9, 10)));
        assert!(!is_unit_mod(ExponentElement::new(5, 10)));
        assert!(is_unit_mod(ExponentElement::new(1, 12)));
    }

    #[test]
    fn subsets_and_vectors() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        let all: Vec<_> = all_vectors(3, 2).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
    }

    proptest! {
        #[test]
        fn inverse_times_matrix_is_identity(
            q in prop::sample::select(vec![5u64, 7, 11, 13]),
            n in 1usize..5,
            seed in prop::collection::vec(0u64..1000, 16),
        ) {
            let entries: Vec<u64> = seed.into_iter().take(n * n).collect();
            let m = Matrix::new(f(q), n, n, entries).unwrap();
            match m.inverse() {
                Ok(inv) => {
                    prop_assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(f(q), n));
                    prop_assert_ne!(m.det().unwrap(), 0);
                }
                Err(_) => prop_assert_eq!(m.det().unwrap(), 0),
            }
        }

        #[test]
        fn det_mod_matches_leibniz(
            modulus in prop::sample::select(vec![4u64, 6, 10, 12, 16]),
            n in 1usize..5,
            seed in prop::collection::vec(0u64..9, 16),
        ) {
            let rows: Vec<Vec<u64>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
            let m = ExponentMatrix::from_rows(modulus, &rows).unwrap();
            let expect = leibniz(&rows).rem_euclid(modulus as i128) as u64;
            prop_assert_eq!(m.det_mod().unwrap().value(), expect);
        }
    }
}
