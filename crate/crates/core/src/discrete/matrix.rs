//! Dense complex matrices and vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex square matrix, row-major, indexed by grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row of length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// y = A x
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "apply: matrix dim {} vs vector len {}",
                self.n,
                x.len()
            )));
        }
        let mut y = vec![C64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            let row = self.row(i);
            let mut acc = C64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            y[i] = acc;
        }
        Ok(y)
    }

    /// C = A B (cache-friendly ikj ordering).
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "matmul: {} vs {}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow.iter()) {
                    *o += aik * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("add: {} vs {}", self.n, other.n)));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("sub: {} vs {}", self.n, other.n)));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    /// Induced infinity norm (max row sum of entry moduli).
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// max |a_ij - conj(a_ji)|; zero iff the matrix is exactly Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn max_imag_entry(&self) -> f64 {
        self.data.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Euclidean norm.
pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// <a, b> with conjugation on the left argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += alpha * xi;
    }
}

pub fn scale_vec(v: &mut [C64], s: C64) {
    for x in v.iter_mut() {
        *x *= s;
    }
}

/// LU factorization with partial pivoting. Exact zero pivots are replaced by
/// a tiny value so that solves against (nearly) singular shifts still return
/// a usable direction, as inverse iteration requires.
#[derive(Debug)]
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

pub fn lu_decompose(a: &ComplexMatrix) -> LuFactors {
    let n = a.dim();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let tiny = f64::EPSILON * a.max_abs_entry().max(f64::MIN_POSITIVE);
    for k in 0..n {
        // pivot search
        let mut p = k;
        let mut best = lu[(k, k)].norm();
        for i in (k + 1)..n {
            let v = lu[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
        }
        let mut pivot = lu[(k, k)];
        if pivot.norm() < tiny {
            pivot = C64::new(tiny, 0.0);
            lu[(k, k)] = pivot;
        }
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor != C64::new(0.0, 0.0) {
                for j in (k + 1)..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
    }
    LuFactors { lu, perm }
}

impl LuFactors {
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.lu.dim();
        if b.len() != n {
            return Err(Error::Dimension(format!(
                "solve: matrix dim {n} vs rhs len {}",
                b.len()
            )));
        }
        let mut y: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        // forward substitution (unit lower triangle)
        for i in 1..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        // back substitution
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in (i + 1)..n {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc / self.lu[(i, i)];
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn adjoint_is_involutive() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(-0.5, 0.25)],
            vec![c(0.0, -1.0), c(3.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn identity_application_is_exact() {
        let id = ComplexMatrix::identity(5);
        let v: Vec<C64> = (0..5).map(|i| c(i as f64, -(i as f64) / 3.0)).collect();
        assert_eq!(id.apply(&v).unwrap(), v);
    }

    #[test]
    fn product_with_adjoint_is_exactly_hermitian() {
        // pseudo-random but deterministic entries
        let n = 17;
        let mut a = ComplexMatrix::zeros(n);
        let mut s = 1u64;
        let mut rand = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = c(rand(), rand());
            }
        }
        let eta = a.adjoint().matmul(&a).unwrap();
        assert_eq!(eta.hermiticity_defect(), 0.0);
    }

    #[test]
    fn norm_inequality_bound() {
        // ||A v||_2 <= sqrt(n) * maxRowSum(A) * ||v||_2
        let n = 23;
        let mut s = 7u64;
        let mut rand = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for _case in 0..10 {
            let mut a = ComplexMatrix::zeros(n);
            let mut v = vec![c(0.0, 0.0); n];
            for i in 0..n {
                v[i] = c(rand(), rand());
                for j in 0..n {
                    a[(i, j)] = c(rand(), rand());
                }
            }
            let lhs = norm2(&a.apply(&v).unwrap());
            let rhs = (n as f64).sqrt() * a.max_row_sum() * norm2(&v);
            assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = ComplexMatrix::zeros(3);
        let b = ComplexMatrix::zeros(4);
        assert!(a.matmul(&b).is_err());
        assert!(a.apply(&vec![c(0.0, 0.0); 4]).is_err());
    }

    #[test]
    fn lu_solves_small_system() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 1.0), c(1.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.5), c(3.0, 0.0), c(1.0, 1.0)],
            vec![c(1.0, 0.0), c(-1.0, 2.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let x_true = vec![c(1.0, -1.0), c(0.5, 2.0), c(-3.0, 0.25)];
        let b = a.apply(&x_true).unwrap();
        let lu = lu_decompose(&a);
        let x = lu.solve(&b).unwrap();
        for (xa, xb) in x.iter().zip(x_true.iter()) {
            assert!((xa - xb).norm() < 1e-12);
        }
    }

    #[test]
    fn matrix_linearity_of_apply() {
        let n = 9;
        let mut s = 99u64;
        let mut rand = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut a = ComplexMatrix::zeros(n);
        let mut v = vec![c(0.0, 0.0); n];
        let mut w = vec![c(0.0, 0.0); n];
        for i in 0..n {
            v[i] = c(rand(), rand());
            w[i] = c(rand(), rand());
            for j in 0..n {
                a[(i, j)] = c(rand(), rand());
            }
        }
        let alpha = c(0.7, -0.3);
        let beta = c(-1.2, 0.8);
        let mut combo = v.clone();
        scale_vec(&mut combo, alpha);
        axpy(beta, &w, &mut combo);
        let lhs = a.apply(&combo).unwrap();
        let av = a.apply(&v).unwrap();
        let aw = a.apply(&w).unwrap();
        for i in 0..n {
            let rhs = alpha * av[i] + beta * aw[i];
            assert!((lhs[i] - rhs).norm() <= 1e-13 * (1.0 + rhs.norm()));
        }
    }
}
