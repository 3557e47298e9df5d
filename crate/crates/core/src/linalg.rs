//! Small exact linear algebra over `Ratio<i64>`: reduced row echelon form,
//! null spaces and span membership.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rational = Ratio<i64>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c];
        for x in rows[r].iter_mut() {
            *x /= lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(pivot_row) {
                    *x -= p * f;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` for `M` with `ncols` columns, returned in
/// reduced row echelon form.
pub fn null_space(matrix: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut rows = matrix.to_vec();
    let pivots = rref(&mut rows);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = -row[free];
        }
        basis.push(v);
    }
    rref(&mut basis);
    basis
}

/// A subspace of `ℚ^dim` stored by a basis in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(dim: usize, vectors: &[Vec<Rational>]) -> Self {
        let mut basis = vectors.to_vec();
        let pivots = rref(&mut basis);
        Self { dim, basis, pivots }
    }

    pub fn whole(dim: usize) -> Self {
        let vectors: Vec<Vec<Rational>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::span(dim, &vectors)
    }

    /// Common kernel of the given linear forms.
    pub fn kernel_of(dim: usize, forms: &[Vec<Rational>]) -> Self {
        Self::span(dim, &null_space(forms, dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        // Subtract the unique combination matching v on pivot columns.
        let mut residual = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = residual[pc];
            if !f.is_zero() {
                for (x, b) in residual.iter_mut().zip(row) {
                    *x -= *b * f;
                }
            }
        }
        residual.iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}
