//! Dense matrices over arbitrary-precision integers with exact determinants.

use std::fmt;
use std::ops::{Index, IndexMut, Range};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::continuants::Word;
use crate::error::{Error, Result};

/// Row-major dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {r} has {} entries, expected {cols}",
                rows[r].len()
            )));
        }
        let data = rows.iter().flatten().cloned().map(Into::into).collect();
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scaled(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * &k).collect(),
        }
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        assert!(
            rows.end <= self.rows && cols.end <= self.cols,
            "submatrix out of bounds"
        );
        let c0 = cols.start;
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, c0 + j)].clone()
        })
    }

    /// Assembles a block matrix. Every block in a block row must have the
    /// same number of rows, and every block in a block column the same
    /// number of columns.
    pub fn from_blocks(grid: &[Vec<&IntMatrix>]) -> Result<Self> {
        let Some(first) = grid.first() else {
            return Ok(IntMatrix::zeros(0, 0));
        };
        let col_widths: Vec<usize> = first.iter().map(|b| b.cols).collect();
        let mut row_heights = Vec::with_capacity(grid.len());
        for (bi, block_row) in grid.iter().enumerate() {
            if block_row.len() != col_widths.len() {
                return Err(Error::DimensionMismatch(format!(
                    "block row {bi} has {} blocks, expected {}",
                    block_row.len(),
                    col_widths.len()
                )));
            }
            let h = block_row[0].rows;
            for (bj, b) in block_row.iter().enumerate() {
                if b.rows != h || b.cols != col_widths[bj] {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({bi},{bj}) is {}x{}, expected {h}x{}",
                        b.rows, b.cols, col_widths[bj]
                    )));
                }
            }
            row_heights.push(h);
        }
        let rows = row_heights.iter().sum();
        let cols = col_widths.iter().sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for (block_row, &h) in grid.iter().zip(&row_heights) {
            let mut c0 = 0;
            for b in block_row {
                for i in 0..h {
                    for j in 0..b.cols {
                        out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                    }
                }
                c0 += b.cols;
            }
            r0 += h;
        }
        Ok(out)
    }

    /// `diag(a, b)`.
    pub fn block_diag(a: &IntMatrix, b: &IntMatrix) -> Self {
        let mut out = IntMatrix::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out[(a.rows + i, a.cols + j)] = b[(i, j)].clone();
            }
        }
        out
    }

    /// Removes row `index` and column `index`, keeping the order of the rest.
    pub fn delete_row_col(&self, index: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if index >= self.rows {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.rows,
            });
        }
        let keep = |k: usize| if k < index { k } else { k + 1 };
        Ok(Self::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            self[(keep(i), keep(j))].clone()
        }))
    }

    /// Applies the same permutation to rows and columns: entry `(i, j)` of
    /// the result is entry `(perm[i], perm[j])` of `self`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut seen = vec![false; self.rows];
        if perm.len() != self.rows
            || !perm
                .iter()
                .all(|&p| p < self.rows && !std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(format!(
                "not a permutation of 0..{}",
                self.rows
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self[(perm[i], perm[j])].clone()
        }))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// After step `k` every remaining entry equals a `(k+1)`-minor of the
    /// input, so the division by the previous pivot is always exact.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                negate = !negate;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                let lead = std::mem::take(&mut a[i * n + k]);
                for j in k + 1..n {
                    let mut v = &a[i * n + j] * &pivot;
                    if !lead.is_zero() && !a[k * n + j].is_zero() {
                        v -= &lead * &a[k * n + j];
                    }
                    if !prev.is_one() {
                        v /= &prev;
                    }
                    a[i * n + j] = v;
                }
            }
            prev = pivot;
        }
        let d = std::mem::take(&mut a[n * n - 1]);
        Ok(if negate { -d } else { d })
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// `T_r(x_1..x_r)`: diagonal `x_i`, both off-diagonals `-1`.
pub fn tridiagonal_matrix(word: &Word) -> IntMatrix {
    let xs = word.entries();
    IntMatrix::from_fn(xs.len(), xs.len(), |i, j| {
        if i == j {
            BigInt::from(xs[i].clone())
        } else if i.abs_diff(j) == 1 {
            BigInt::from(-1)
        } else {
            BigInt::zero()
        }
    })
}

/// Both sides of the two-copy block identity
/// `det [[A,0,E],[0,A,E],[G,G,H]] = det(A) * det [[A,E],[2G,H]]`.
pub fn two_copy_identity_sides(
    a: &IntMatrix,
    e: &IntMatrix,
    g: &IntMatrix,
    h: &IntMatrix,
) -> Result<(BigInt, BigInt)> {
    let (s, t) = (a.rows, h.rows);
    if s == 0 || t == 0 || !a.is_square() || !h.is_square() {
        return Err(Error::DimensionMismatch(
            "A and H must be nonempty and square".into(),
        ));
    }
    if (e.rows, e.cols) != (s, t) || (g.rows, g.cols) != (t, s) {
        return Err(Error::DimensionMismatch(format!(
            "E must be {s}x{t} and G must be {t}x{s}, got {}x{} and {}x{}",
            e.rows, e.cols, g.rows, g.cols
        )));
    }
    let zs = IntMatrix::zeros(s, s);
    let lhs = IntMatrix::from_blocks(&[vec![a, &zs, e], vec![&zs, a, e], vec![g, g, h]])?;
    let g2 = g.scaled(2);
    let reduced = IntMatrix::from_blocks(&[vec![a, e], vec![&g2, h]])?;
    Ok((lhs.det()?, a.det()? * reduced.det()?))
}

/// Absolute value of the largest entry; handy for size diagnostics.
pub fn max_abs_entry(m: &IntMatrix) -> BigInt {
    m.data.iter().map(|x| x.abs()).max().unwrap_or_default()
}
