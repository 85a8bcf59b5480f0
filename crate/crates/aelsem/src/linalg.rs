//! Dense matrix arithmetic over F_p.
//!
//! Multiplication is cubic schoolbook; for the matrix sizes handled here no
//! asymptotically fast algorithm pays off. Pivoting takes the first nonzero
//! entry in a column, since F_p has no magnitude.

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: PrimeModulus,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, m: PrimeModulus) -> Matrix {
        Matrix { rows, cols, modulus: m, data: vec![m.zero(); rows * cols] }
    }

    pub fn identity(n: usize, m: PrimeModulus) -> Matrix {
        let mut out = Matrix::zeros(n, n, m);
        for i in 0..n {
            out.set(i, i, m.one());
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, m: PrimeModulus, mut f: impl FnMut(usize, usize) -> FieldElement) -> Matrix {
        let mut out = Matrix::zeros(rows, cols, m);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, f(i, j));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        assert_eq!(v.modulus(), self.modulus, "entry modulus differs from matrix modulus");
        self.data[i * self.cols + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, rhs.cols, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.modulus, |i, j| self.get(j, i))
    }

    /// Slice by explicit row/column index sequences; order is preserved and
    /// duplicates are not allowed.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Matrix {
        for w in [row_idx, col_idx] {
            let mut seen = vec![false; self.rows.max(self.cols)];
            for &i in w {
                assert!(!std::mem::replace(&mut seen[i], true), "duplicate index {i} in submatrix");
            }
        }
        Matrix::from_fn(row_idx.len(), col_idx.len(), self.modulus, |i, j| {
            self.get(row_idx[i], col_idx[j])
        })
    }

    /// B^T S B.
    pub fn congruence(b: &Matrix, s: &Matrix) -> Matrix {
        assert_eq!(s.rows, s.cols, "congruence needs a square middle matrix");
        assert_eq!(b.rows, s.rows, "dimension mismatch in congruence");
        b.transpose().mul(&s.mul(b))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols, "only square matrices can be inverted");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, self.modulus);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::Singular)?;
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let pinv = a.get(col, col).inv().expect("pivot nonzero");
            for j in 0..n {
                a.set(col, j, a.get(col, j) * pinv);
                inv.set(col, j, inv.get(col, j) * pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - factor * a.get(col, j));
                    inv.set(r, j, inv.get(r, j) - factor * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }

    /// Determinant by Gaussian elimination, row swaps tracked for sign.
    /// The empty 0x0 matrix has determinant 1.
    pub fn determinant(&self) -> FieldElement {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.modulus.one();
        for col in 0..n {
            let Some(pivot_row) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return self.modulus.zero();
            };
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                det = -det;
            }
            let pivot = a.get(col, col);
            det = det * pivot;
            let pinv = pivot.inv().expect("pivot nonzero");
            for r in col + 1..n {
                let factor = a.get(r, col) * pinv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    a.set(r, j, a.get(r, j) - factor * a.get(col, j));
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }
}

/// All k of the k x k minors of a k x (k+1) matrix obtained by deleting one
/// column, in column order: `result[j]` is the determinant with column `j`
/// deleted.
///
/// One forward elimination brings the matrix to row echelon form; each minor
/// is then a pivot-prefix product times the determinant of an upper
/// Hessenberg trailing block, evaluated by the O(m^2) Hessenberg recurrence.
/// Total cost O(k^3), and the values agree exactly with k+1 independent
/// determinant computations.
pub fn all_column_deleted_minors(m: &Matrix) -> Vec<FieldElement> {
    let k = m.rows();
    assert_eq!(m.cols(), k + 1, "expected a k x (k+1) matrix");
    let md = m.modulus();
    if k == 0 {
        return vec![md.one()];
    }

    // Forward elimination with row swaps; no row scaling, so every
    // column-deleted determinant of the echelon form differs from the
    // original only by the swap sign.
    let mut r = m.clone();
    let mut sign_neg = false;
    let mut pivots: Vec<usize> = Vec::with_capacity(k); // pivot column of each row
    let mut row = 0;
    for col in 0..=k {
        if row == k {
            break;
        }
        let Some(pr) = (row..k).find(|&i| !r.get(i, col).is_zero()) else {
            continue;
        };
        if pr != row {
            r.swap_rows(pr, row);
            sign_neg = !sign_neg;
        }
        let pinv = r.get(row, col).inv().expect("pivot nonzero");
        for i in row + 1..k {
            let factor = r.get(i, col) * pinv;
            if factor.is_zero() {
                continue;
            }
            for j in col..=k {
                r.set(i, j, r.get(i, j) - factor * r.get(row, j));
            }
        }
        pivots.push(col);
        row += 1;
    }

    if row < k {
        // rank deficient: every k x k submatrix is singular
        return vec![md.zero(); k + 1];
    }

    // Rank k: pivots occupy all columns except one, say `missing`, and the
    // pivot columns below `missing` are consecutive starting at 0.
    let missing = (0..=k).find(|c| !pivots.contains(c)).expect("one column is pivot-free");
    let sign = if sign_neg { -md.one() } else { md.one() };

    let mut out = Vec::with_capacity(k + 1);
    for j in 0..=k {
        if j == missing {
            // remaining columns are exactly the pivots: triangular
            let mut d = sign;
            for (i, &p) in pivots.iter().enumerate() {
                d = d * r.get(i, p);
            }
            out.push(d);
        } else if j > missing {
            // rows at and past the deleted pivot lose their leading column
            out.push(md.zero());
        } else {
            // j is the pivot of row j; prefix is triangular, the trailing
            // block on columns j+1..=k is upper Hessenberg
            let mut prefix = sign;
            for i in 0..j {
                prefix = prefix * r.get(i, i);
            }
            let msize = k - j;
            let hess = |bi: usize, bj: usize| r.get(j + bi, j + 1 + bj);
            out.push(prefix * hessenberg_det(msize, md, hess));
        }
    }
    out
}

/// Determinant of an upper Hessenberg matrix via the leading-principal-minor
/// recurrence, O(m^2).
fn hessenberg_det(m: usize, md: PrimeModulus, h: impl Fn(usize, usize) -> FieldElement) -> FieldElement {
    if m == 0 {
        return md.one();
    }
    let mut d = vec![md.one()]; // d[i] = det of leading i x i block
    for i in 1..=m {
        let mut acc = md.zero();
        let mut subdiag = md.one(); // product of H[l][l-1] for l in t..i-1
        let mut negate = false;
        for t in (1..=i).rev() {
            let term = h(t - 1, i - 1) * subdiag * d[t - 1];
            acc = if negate { acc - term } else { acc + term };
            if t > 1 {
                subdiag = subdiag * h(t - 1, t - 2);
                negate = !negate;
            }
        }
        d.push(acc);
    }
    d[m]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::stream_from_seed;

    fn m7() -> PrimeModulus {
        PrimeModulus::custom(7).unwrap()
    }

    fn mat(m: PrimeModulus, rows: &[&[i64]]) -> Matrix {
        Matrix::from_fn(rows.len(), rows[0].len(), m, |i, j| m.from_i64(rows[i][j]))
    }

    fn random_matrix(rows: usize, cols: usize, m: PrimeModulus, rng: &mut crate::field::RandomStream) -> Matrix {
        Matrix::from_fn(rows, cols, m, |_, _| m.sample_uniform(rng))
    }

    #[test]
    fn identity_and_transpose() {
        let m = m7();
        let a = mat(m, &[&[1, 2, 3], &[4, 5, 6], &[0, 1, 2]]);
        assert_eq!(Matrix::identity(3, m).mul(&a), a);
        assert_eq!(a.transpose().transpose(), a);
        let s = a.submatrix(&[0, 1], &[2]);
        assert_eq!(s.rows(), 2);
        assert_eq!(s.cols(), 1);
        assert_eq!(s.get(0, 0).value(), 3);
        assert_eq!(s.get(1, 0).value(), 6);
    }

    #[test]
    fn inverse_cases() {
        let m = m7();
        let id = Matrix::identity(3, m);
        assert_eq!(id.inverse().unwrap(), id);
        // unit upper triangular always invertible
        let a = mat(m, &[&[1, 3, 5], &[0, 1, 2], &[0, 0, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()), Matrix::identity(3, m));
        assert_eq!(Matrix::zeros(2, 2, m).inverse(), Err(Error::Singular));
    }

    #[test]
    fn determinant_cases() {
        let m = m7();
        assert_eq!(Matrix::identity(4, m).determinant().value(), 1);
        assert_eq!(mat(m, &[&[1, 2], &[0, 0]]).determinant().value(), 0);
        // det [[1,2],[3,4]] = -2 = 5 mod 7
        assert_eq!(mat(m, &[&[1, 2], &[3, 4]]).determinant().value(), 5);
        assert_eq!(Matrix::zeros(0, 0, m).determinant().value(), 1);
    }

    #[test]
    fn congruence_cases() {
        let m = m7();
        let s = mat(m, &[&[1, 2], &[2, 5]]);
        assert_eq!(Matrix::congruence(&Matrix::identity(2, m), &s), s);
        let b = mat(m, &[&[1, 3], &[2, 4]]);
        assert!(Matrix::congruence(&b, &s).is_symmetric());
        assert_eq!(Matrix::congruence(&Matrix::zeros(2, 2, m), &s), Matrix::zeros(2, 2, m));
    }

    #[test]
    fn minors_hand_cases() {
        let m = m7();
        // [I_k | 0]
        let mut a = Matrix::zeros(3, 4, m);
        for i in 0..3 {
            a.set(i, i, m.one());
        }
        let got: Vec<u128> = all_column_deleted_minors(&a).iter().map(|x| x.value()).collect();
        assert_eq!(got, vec![0, 0, 0, 1]);

        let b = mat(m, &[&[1, 0, 2], &[0, 1, 3]]);
        let got: Vec<u128> = all_column_deleted_minors(&b).iter().map(|x| x.value()).collect();
        assert_eq!(got, vec![5, 3, 1]);

        // 0 x 1 edge case: the single minor is the empty determinant
        let e = Matrix::zeros(0, 1, m);
        assert_eq!(all_column_deleted_minors(&e)[0].value(), 1);
    }

    fn naive_minors(a: &Matrix) -> Vec<FieldElement> {
        let k = a.rows();
        (0..=k)
            .map(|j| {
                let cols: Vec<usize> = (0..=k).filter(|&c| c != j).collect();
                let rows: Vec<usize> = (0..k).collect();
                a.submatrix(&rows, &cols).determinant()
            })
            .collect()
    }

    #[test]
    fn minors_match_naive_on_random_matrices() {
        for m in [PrimeModulus::m31(), PrimeModulus::p63(), PrimeModulus::m127()] {
            let mut rng = stream_from_seed(11);
            for k in 0..=12 {
                for _ in 0..90 {
                    let a = random_matrix(k, k + 1, m, &mut rng);
                    assert_eq!(all_column_deleted_minors(&a), naive_minors(&a));
                }
            }
        }
    }

    #[test]
    fn minors_match_naive_on_degenerate_matrices() {
        let m = m7();
        let mut rng = stream_from_seed(13);
        // small field forces frequent zero pivots and rank deficiency
        for k in 1..=6 {
            for _ in 0..400 {
                let a = random_matrix(k, k + 1, m, &mut rng);
                assert_eq!(all_column_deleted_minors(&a), naive_minors(&a));
            }
        }
    }

    #[test]
    fn cramer_sign_bridge() {
        // det(A with column j replaced by b) = (-1)^(k-1-j) * minors([A|b])[j]
        let m = PrimeModulus::m31();
        let mut rng = stream_from_seed(17);
        for k in 1..=8 {
            for _ in 0..40 {
                let a = random_matrix(k, k, m, &mut rng);
                let b = random_matrix(k, 1, m, &mut rng);
                let aug = Matrix::from_fn(k, k + 1, m, |i, j| {
                    if j < k { a.get(i, j) } else { b.get(i, 0) }
                });
                let minors = all_column_deleted_minors(&aug);
                for (j, &minor) in minors.iter().enumerate().take(k) {
                    let replaced = Matrix::from_fn(k, k, m, |r, c| {
                        if c == j { b.get(r, 0) } else { a.get(r, c) }
                    });
                    let expect = replaced.determinant();
                    let got = if (k - 1 - j) % 2 == 0 { minor } else { -minor };
                    assert_eq!(got, expect);
                }
                assert_eq!(minors[k], a.determinant());
            }
        }
    }

    #[test]
    fn inverse_and_det_properties() {
        let m = PrimeModulus::m31();
        let mut rng = stream_from_seed(23);
        for _ in 0..200 {
            let a = random_matrix(4, 4, m, &mut rng);
            let b = random_matrix(4, 4, m, &mut rng);
            assert_eq!(a.mul(&b).determinant(), a.determinant() * b.determinant());
            if let Ok(inv) = a.inverse() {
                assert_eq!(inv.mul(&a), Matrix::identity(4, m));
            } else {
                assert!(a.determinant().is_zero());
            }
        }
    }
}
