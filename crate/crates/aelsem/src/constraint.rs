//! Algebraic constraints on a covariance matrix: determinant patterns
//! (correlations, partial-correlation numerators, minors) and raw sparse
//! polynomials in the sigma entries.

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::Matrix;

/// One cell of a determinant pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternCell {
    Zero,
    SigmaRef(usize, usize),
}

/// An r x r grid of sigma references and structural zeros; the constraint is
/// that the determinant of the filled-in grid vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatrixConstraint {
    size: usize,
    cells: Vec<PatternCell>, // row-major, size * size
}

/// Sparse integer polynomial in the sigma entries; each term is a coefficient
/// times a product of entries. The constraint is that the polynomial vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialConstraint {
    pub terms: Vec<(i64, Vec<(usize, usize)>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    Pattern(PatternMatrixConstraint),
    Polynomial(PolynomialConstraint),
}

impl PatternMatrixConstraint {
    pub fn from_cells(size: usize, cells: Vec<PatternCell>) -> Result<PatternMatrixConstraint> {
        if size == 0 || cells.len() != size * size {
            return Err(Error::SizeMismatch(format!(
                "pattern of size {size} needs {} cells, got {}",
                size * size,
                cells.len()
            )));
        }
        Ok(PatternMatrixConstraint { size, cells })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cell(&self, i: usize, j: usize) -> PatternCell {
        assert!(i < self.size && j < self.size, "pattern index out of range");
        self.cells[i * self.size + j]
    }

    /// Largest node index referenced, if any cell is non-zero.
    pub fn max_node(&self) -> Option<usize> {
        self.cells
            .iter()
            .filter_map(|c| match c {
                PatternCell::Zero => None,
                PatternCell::SigmaRef(v, w) => Some(*v.max(w)),
            })
            .max()
    }

    pub fn evaluate(&self, sigma: &Matrix) -> Result<FieldElement> {
        let p = sigma.modulus();
        let mut filled = Matrix::zeros(self.size, self.size, p);
        for i in 0..self.size {
            for j in 0..self.size {
                if let PatternCell::SigmaRef(v, w) = self.cell(i, j) {
                    if v >= sigma.rows() || w >= sigma.cols() {
                        return Err(Error::NodeOutOfRange(v.max(w), sigma.rows()));
                    }
                    filled.set(i, j, sigma.get(v, w));
                }
            }
        }
        Ok(filled.determinant())
    }

    /// Symbolic determinant expansion into a term list; exponential in r, for
    /// cross-checking only.
    pub fn expand(&self) -> PolynomialConstraint {
        fn go(
            c: &PatternMatrixConstraint,
            row: usize,
            used: &mut Vec<bool>,
            sign: i64,
            monomial: &mut Vec<(usize, usize)>,
            out: &mut Vec<(i64, Vec<(usize, usize)>)>,
        ) {
            if row == c.size {
                out.push((sign, monomial.clone()));
                return;
            }
            for j in 0..c.size {
                if used[j] {
                    continue;
                }
                if let PatternCell::SigmaRef(v, w) = c.cell(row, j) {
                    // sign flips once per inversion against already-used columns
                    let inversions = (j + 1..c.size).filter(|&k| used[k]).count();
                    let s = if inversions % 2 == 0 { sign } else { -sign };
                    used[j] = true;
                    monomial.push((v, w));
                    go(c, row + 1, used, s, monomial, out);
                    monomial.pop();
                    used[j] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut vec![false; self.size], 1, &mut Vec::new(), &mut out);
        PolynomialConstraint { terms: out }
    }
}

impl PolynomialConstraint {
    pub fn evaluate(&self, sigma: &Matrix) -> Result<FieldElement> {
        let p = sigma.modulus();
        let mut total = p.zero();
        for (coeff, monomial) in &self.terms {
            let mut term = p.from_i64(*coeff);
            for &(v, w) in monomial {
                if v >= sigma.rows() || w >= sigma.cols() {
                    return Err(Error::NodeOutOfRange(v.max(w), sigma.rows()));
                }
                term = term * sigma.get(v, w);
            }
            total = total + term;
        }
        Ok(total)
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, m)| m.len()).max().unwrap_or(0)
    }
}

impl Constraint {
    pub fn evaluate(&self, sigma: &Matrix) -> Result<FieldElement> {
        match self {
            Constraint::Pattern(c) => c.evaluate(sigma),
            Constraint::Polynomial(c) => c.evaluate(sigma),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Constraint::Pattern(c) => c.size(),
            Constraint::Polynomial(c) => c.degree(),
        }
    }
}

pub fn build_correlation(v: usize, w: usize) -> PatternMatrixConstraint {
    PatternMatrixConstraint::from_cells(1, vec![PatternCell::SigmaRef(v, w)]).unwrap()
}

/// Numerator of the partial correlation of v and w given S:
/// the minor with rows {v} ∪ S and columns {w} ∪ S, in that order.
pub fn build_partial_correlation(v: usize, w: usize, s: &[usize]) -> PatternMatrixConstraint {
    let rows: Vec<usize> = std::iter::once(v).chain(s.iter().copied()).collect();
    let cols: Vec<usize> = std::iter::once(w).chain(s.iter().copied()).collect();
    build_minor(&rows, &cols).unwrap()
}

pub fn build_minor(a: &[usize], b: &[usize]) -> Result<PatternMatrixConstraint> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::SizeMismatch(format!(
            "minor needs equal non-empty row/column sets, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let r = a.len();
    let mut cells = Vec::with_capacity(r * r);
    for &v in a {
        for &w in b {
            cells.push(PatternCell::SigmaRef(v, w));
        }
    }
    PatternMatrixConstraint::from_cells(r, cells)
}
