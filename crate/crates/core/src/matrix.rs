//! Exact integer matrices and Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` is used when there
    /// are no rows.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let c = rows.first().map_or(cols, Vec::len);
        assert!(rows.iter().all(|r| r.len() == c), "ragged matrix");
        let data = rows
            .iter()
            .flat_map(|r| r.iter().cloned().map(Into::into))
            .collect();
        IntegerMatrix {
            rows: rows.len(),
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = q * &self[(src, j)];
            self[(dst, j)] -= v;
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = q * &self[(i, src)];
            self[(i, dst)] -= v;
        }
    }

    fn neg_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Diagonal form `D = U A V` with `d_1 | d_2 | ... | d_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// Positive invariant factors, in divisibility order.
    pub factors: Vec<BigInt>,
    /// `min(rows, cols) - rank`: diagonal zeros.
    pub zero_factors: usize,
    pub rows: usize,
    pub cols: usize,
    pub transforms: Option<(IntegerMatrix, IntegerMatrix)>,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Rank of the cokernel `Z^rows / image`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.rows - self.rank()
    }

    /// Invariant factors greater than one, i.e. the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    pub fn diagonal(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.rows, self.cols);
        for (i, f) in self.factors.iter().enumerate() {
            d[(i, i)] = f.clone();
        }
        d
    }
}

/// Smith normal form; pivots on the smallest nonzero absolute value,
/// breaking ties in row-major order.
pub fn snf(m: &IntegerMatrix) -> SmithNormalForm {
    reduce(m, false)
}

/// As [`snf`], also returning unimodular `U`, `V` with `U A V = D`.
pub fn snf_with_transforms(m: &IntegerMatrix) -> SmithNormalForm {
    reduce(m, true)
}

fn reduce(m: &IntegerMatrix, track: bool) -> SmithNormalForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(if track { rows } else { 0 });
    let mut v = IntegerMatrix::identity(if track { cols } else { 0 });
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if track {
            u.swap_rows(t, pi);
            v.swap_cols(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if !a[(i, t)].is_zero() {
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                a.sub_row(i, t, &q);
                if track {
                    u.sub_row(i, t, &q);
                }
                clean &= a[(i, t)].is_zero();
            }
        }
        for j in t + 1..cols {
            if !a[(t, j)].is_zero() {
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                a.sub_col(j, t, &q);
                if track {
                    v.sub_col(j, t, &q);
                }
                clean &= a[(t, j)].is_zero();
            }
        }
        if !clean {
            continue;
        }
        // the pivot must divide the remaining block
        let bad =
            (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
        if let Some(i) = bad {
            for j in 0..cols {
                let x = a[(i, j)].clone();
                a[(t, j)] += x;
            }
            if track {
                for j in 0..rows {
                    let x = u[(i, j)].clone();
                    u[(t, j)] += x;
                }
            }
            continue;
        }
        if a[(t, t)].is_negative() {
            a.neg_row(t);
            if track {
                u.neg_row(t);
            }
        }
        t += 1;
    }
    let factors: Vec<BigInt> = (0..t).map(|i| a[(i, i)].clone()).collect();
    SmithNormalForm {
        zero_factors: rows.min(cols) - factors.len(),
        factors,
        rows,
        cols,
        transforms: track.then_some((u, v)),
    }
}

fn smallest_entry(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Rank over the rationals.
pub fn rank(m: &IntegerMatrix) -> usize {
    snf(m).rank()
}

/// Abelian group `Z^r / image`, summarised for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    /// Torsion invariant factors, each greater than one.
    pub factors: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn from_snf(s: &SmithNormalForm) -> Self {
        AbelianGroup {
            factors: s
                .torsion()
                .iter()
                .map(|d| d.to_u64().expect("invariant factor fits in u64"))
                .collect(),
            free_rank: s.cokernel_free_rank(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }

    /// Order of a finite group; `None` when the free rank is positive.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.factors.iter().product())
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() + self.free_rank <= 1
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
