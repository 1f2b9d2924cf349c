//! Dense exact linear algebra over a runtime field: reduced row echelon
//! form, kernel bases, and particular solutions. Sized for desk-scale
//! systems assembled from sparse polynomial data.

use crate::field::Field;

#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// pivot row in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !f.is_zero(self.get(r, col))) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = f
                .inv(self.get(row, col))
                .expect("pivot is nonzero by selection");
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), &inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !f.is_zero(self.get(r, col)) {
                    let factor = self.get(r, col).clone();
                    for c in col..self.cols {
                        let v = f.sub(self.get(r, c), &f.mul(&factor, self.get(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Basis of the right kernel `{v : Av = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains_key(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (&pc, &pr) in &pivot_set {
                v[pc] = f.neg(m.get(pr, free));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `Ax = b`, if the system is consistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field.clone();
        let mut aug = Matrix::zeros(f.clone(), self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs.clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for (c, vc) in v.iter().enumerate() {
                    acc = f.add(&acc, &f.mul(self.get(r, c), vc));
                }
                acc
            })
            .collect()
    }

    /// Determinant of a 2x2 matrix given flat as `[a, b, c, d]`.
    pub fn det2(field: &F, m: &[F::Elem; 4]) -> F::Elem {
        field.sub(&field.mul(&m[0], &m[3]), &field.mul(&m[1], &m[2]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn solves_rational_system() {
        let q = Rationals;
        let mut a = Matrix::zeros(q, 2, 2);
        a.set(0, 0, q.from_integer(2));
        a.set(0, 1, q.from_integer(1));
        a.set(1, 0, q.from_integer(1));
        a.set(1, 1, q.from_integer(3));
        let b = vec![q.from_integer(5), q.from_integer(10)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(a.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_over_f2() {
        let f2 = PrimeField::new(2).unwrap();
        // x + y = 0, over F_2: kernel = span{(1,1)}.
        let mut a = Matrix::zeros(f2, 1, 2);
        a.set(0, 0, 1);
        a.set(0, 1, 1);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert_eq!(a.mul_vec(&ker[0]), vec![0]);
    }

    #[test]
    fn inconsistent_system_detected() {
        let q = Rationals;
        let mut a = Matrix::zeros(q, 2, 1);
        a.set(0, 0, q.from_integer(1));
        a.set(1, 0, q.from_integer(1));
        let b = vec![q.from_integer(1), q.from_integer(2)];
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let f5 = PrimeField::new(5).unwrap();
        let mut a = Matrix::zeros(f5, 2, 4);
        let vals = [[1u64, 2, 3, 4], [0, 1, 2, 1]];
        for r in 0..2 {
            for c in 0..4 {
                a.set(r, c, vals[r][c]);
            }
        }
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert_eq!(a.mul_vec(v), vec![0, 0]);
        }
    }
}
