//! Banded complex matrices for assembly. All mode operators are tridiagonal
//! on the grid, so products such as `(A + B)·A` stay banded and cost `O(N)`;
//! results are densified only at the very end.

use ndarray::Array2;

use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Band {
    n: usize,
    /// Half bandwidth.
    w: usize,
    /// Row-major, `2w + 1` entries per row; entry `(i, j)` sits at
    /// `i * (2w+1) + (j + w − i)`.
    data: Vec<C64>,
}

impl Band {
    pub fn zeros(n: usize, w: usize) -> Self {
        Self {
            n,
            w,
            data: vec![C64::new(0.0, 0.0); n * (2 * w + 1)],
        }
    }

    pub fn diagonal(values: impl IntoIterator<Item = C64>) -> Self {
        let data: Vec<C64> = values.into_iter().collect();
        Self {
            n: data.len(),
            w: 0,
            data,
        }
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        Self::diagonal(values.iter().map(|&v| C64::new(v, 0.0)))
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(std::iter::repeat_n(C64::new(1.0, 0.0), n))
    }

    /// Tridiagonal matrix with constant stencil `(lo, mid, up)`; the
    /// eliminated boundary values drop the out-of-range entries.
    pub fn stencil(n: usize, lo: f64, mid: f64, up: f64) -> Self {
        let mut b = Self::zeros(n, 1);
        for i in 0..n {
            if i > 0 {
                b.set(i, i - 1, C64::new(lo, 0.0));
            }
            b.set(i, i, C64::new(mid, 0.0));
            if i + 1 < n {
                b.set(i, i + 1, C64::new(up, 0.0));
            }
        }
        b
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (2 * self.w + 1) + (j + self.w - i)
    }

    #[inline]
    fn cols(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.w)..(i + self.w + 1).min(self.n)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        if i.abs_diff(j) > self.w {
            C64::new(0.0, 0.0)
        } else {
            self.data[self.idx(i, j)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        debug_assert!(i.abs_diff(j) <= self.w);
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    fn widened(&self, w: usize) -> Self {
        if w == self.w {
            return self.clone();
        }
        let mut out = Self::zeros(self.n, w);
        for i in 0..self.n {
            for j in self.cols(i) {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, C64::new(-1.0, 0.0))
    }

    /// `self + s·other`.
    pub fn combine(&self, other: &Self, s: C64) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.widened(self.w.max(other.w));
        for i in 0..other.n {
            for j in other.cols(i) {
                let v = out.get(i, j) + s * other.get(i, j);
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            n: self.n,
            w: self.w,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `diag(d)·self`.
    pub fn scale_rows(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.n);
        let mut out = self.clone();
        let stride = 2 * self.w + 1;
        for (row, &s) in out.data.chunks_mut(stride).zip(d) {
            for v in row {
                *v *= s;
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let mut out = Self::zeros(self.n, self.w + rhs.w);
        for i in 0..self.n {
            for k in self.cols(i) {
                let lik = self.get(i, k);
                if lik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in rhs.cols(k) {
                    let v = out.get(i, j) + lik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Real part of `self · v` for a real vector.
    pub fn apply_real(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.cols(i).map(|j| self.get(i, j).re * v[j]).sum())
            .collect()
    }

    /// Dense copy of the real parts.
    pub fn to_dense_real(&self) -> Array2<f64> {
        let mut m = Array2::zeros((self.n, self.n));
        for i in 0..self.n {
            for j in self.cols(i) {
                m[[i, j]] = self.get(i, j).re;
            }
        }
        m
    }

    pub fn to_dense(&self) -> Array2<C64> {
        let mut m = Array2::zeros((self.n, self.n));
        for i in 0..self.n {
            for j in self.cols(i) {
                m[[i, j]] = self.get(i, j);
            }
        }
        m
    }
}
