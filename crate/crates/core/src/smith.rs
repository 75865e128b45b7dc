//! Diagonalisation of integer matrices by unimodular row and column
//! operations, with optional tracking of the transforms.
//!
//! For `A` this produces `D = U A V` with `D` diagonal and nonnegative. The
//! divisibility chain of a full Smith form is not enforced; callers that need
//! invariant factors normalise the diagonal with [`invariant_factors`].
//!
//! Entries are `i128` with overflow checks; on the bar-complex matrices used
//! here they stay tiny.

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b != 0 {
                        let cell = out.at_mut(i, j);
                        *cell = checked(a.checked_mul(b).and_then(|p| cell.checked_add(p)))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `row_i += f · row_j`.
    fn row_addmul(&mut self, i: usize, j: usize, f: i128) -> Result<()> {
        for c in 0..self.cols {
            let x = self.at(j, c);
            if x != 0 {
                let cell = self.at_mut(i, c);
                *cell = checked(f.checked_mul(x).and_then(|p| cell.checked_add(p)))?;
            }
        }
        Ok(())
    }

    /// `col_j += f · col_i`.
    fn col_addmul(&mut self, i: usize, j: usize, f: i128) -> Result<()> {
        for r in 0..self.rows {
            let x = self.at(r, i);
            if x != 0 {
                let cell = self.at_mut(r, j);
                *cell = checked(f.checked_mul(x).and_then(|p| cell.checked_add(p)))?;
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let cell = self.at_mut(i, c);
            *cell = -*cell;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let cell = self.at_mut(r, j);
            *cell = -*cell;
        }
    }
}

fn checked(x: Option<i128>) -> Result<i128> {
    x.ok_or_else(|| Error::Inconsistent("integer overflow during diagonalisation".into()))
}

/// Which transforms to record.
#[derive(Default, Clone, Copy)]
pub(crate) struct Track {
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

pub(crate) struct Diagonal {
    /// `D[i][i]` for `i < min(rows, cols)`, all nonnegative.
    pub diag: Vec<i128>,
    /// `U · L` for the matrix `L` passed in, if any.
    pub left: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

struct State {
    a: IntMatrix,
    left: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl State {
    fn row_addmul(&mut self, i: usize, j: usize, f: i128) -> Result<()> {
        self.a.row_addmul(i, j, f)?;
        if let Some(l) = &mut self.left {
            l.row_addmul(i, j, f)?;
        }
        if let Some(u) = &mut self.u_inv {
            u.col_addmul(i, j, -f)?;
        }
        Ok(())
    }

    fn col_addmul(&mut self, i: usize, j: usize, f: i128) -> Result<()> {
        self.a.col_addmul(i, j, f)?;
        if let Some(v) = &mut self.v {
            v.col_addmul(i, j, f)?;
        }
        if let Some(w) = &mut self.v_inv {
            w.row_addmul(i, j, -f)?;
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(l) = &mut self.left {
            l.swap_rows(i, j);
        }
        if let Some(u) = &mut self.u_inv {
            u.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(w) = &mut self.v_inv {
            w.swap_rows(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(l) = &mut self.left {
            l.negate_row(i);
        }
        if let Some(u) = &mut self.u_inv {
            u.negate_col(i);
        }
    }

    /// Position of a nonzero entry of least absolute value in the lower
    /// right block starting at `(t, t)`; stops early at a unit.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = self.a.at(i, j).abs();
                if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                    best = Some((x, i, j));
                    if x == 1 {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

pub(crate) fn diagonalize(a: IntMatrix, left: Option<IntMatrix>, track: Track) -> Result<Diagonal> {
    if let Some(l) = &left {
        assert_eq!(l.rows, a.rows);
    }
    let (rows, cols) = (a.rows, a.cols);
    let mut s = State {
        u_inv: track.u_inv.then(|| IntMatrix::identity(rows)),
        v: track.v.then(|| IntMatrix::identity(cols)),
        v_inv: track.v_inv.then(|| IntMatrix::identity(cols)),
        a,
        left,
    };
    let k = rows.min(cols);
    for t in 0..k {
        let Some((pi, pj)) = s.find_pivot(t) else {
            break;
        };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            let p = s.a.at(t, t);
            let mut clean = true;
            for i in t + 1..rows {
                let x = s.a.at(i, t);
                if x != 0 {
                    let q = x / p;
                    if q != 0 {
                        s.row_addmul(i, t, -q)?;
                    }
                    if x % p != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                let x = s.a.at(t, j);
                if x != 0 {
                    let q = x / p;
                    if q != 0 {
                        s.col_addmul(t, j, -q)?;
                    }
                    if x % p != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // a smaller remainder is left in row t or column t; make it the pivot
            let mut best = (p.abs(), None);
            for i in t + 1..rows {
                let x = s.a.at(i, t).abs();
                if x != 0 && x < best.0 {
                    best = (x, Some((i, true)));
                }
            }
            for j in t + 1..cols {
                let x = s.a.at(t, j).abs();
                if x != 0 && x < best.0 {
                    best = (x, Some((j, false)));
                }
            }
            match best.1 {
                Some((i, true)) => s.swap_rows(t, i),
                Some((j, false)) => s.swap_cols(t, j),
                None => unreachable!("a nonzero remainder is smaller than the pivot"),
            }
        }
        if s.a.at(t, t) < 0 {
            s.negate_row(t);
        }
    }
    let diag = (0..k).map(|i| s.a.at(i, i)).collect();
    Ok(Diagonal {
        diag,
        left: s.left,
        u_inv: s.u_inv,
        v: s.v,
        v_inv: s.v_inv,
    })
}

/// Invariant factors (each dividing the next, all greater than one) of
/// `⊕ Z/d_i` for positive `d_i`.
pub(crate) fn invariant_factors(diag: &[u64]) -> Vec<u64> {
    let mut d: Vec<u64> = diag.iter().copied().filter(|&x| x > 1).collect();
    // Z/a ⊕ Z/b ≅ Z/gcd ⊕ Z/lcm pushes each prime power to the right
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let (g, l) = (d[i].gcd(&d[j]), d[i].lcm(&d[j]));
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|&x| x > 1);
    d
}
