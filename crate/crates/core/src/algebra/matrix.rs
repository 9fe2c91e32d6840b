use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::{AlgebraError, Namespace, Poly};

/// Dense matrix of polynomials, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        PolyMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
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

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix with row `i` and column `j` removed.
    pub fn submatrix(&self, i: usize, j: usize) -> PolyMatrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != i) {
            for c in (0..self.cols).filter(|&c| c != j) {
                data.push(self.get(r, c).clone());
            }
        }
        PolyMatrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }

    fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        PolyMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn column_sum(&self, j: usize) -> Poly {
        (0..self.rows).map(|i| self.get(i, j).clone()).sum()
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// `v^T * self`.
    pub fn vec_mul(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * self.get(i, j)).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    ///
    /// Every intermediate division is exact; a non-zero remainder means an
    /// arithmetic bug and is reported as `InexactDivision`.
    pub fn det(&self) -> Result<Poly, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one());
        }
        let mut m: Vec<Vec<Poly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(Poly::zero());
                };
                m.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = t.div_exact(&prev).ok_or(AlgebraError::InexactDivision)?;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// Determinant of the matrix with row `i` and column `j` deleted.
    pub fn minor(&self, i: usize, j: usize) -> Result<Poly, AlgebraError> {
        self.submatrix(i, j).det()
    }

    /// Fraction-free row echelon form. Returns the original indices of the
    /// pivot rows and the pivot columns; their lengths equal the rank.
    pub fn rank_profile(&self) -> Result<(Vec<usize>, Vec<usize>), AlgebraError> {
        let mut m: Vec<Vec<Poly>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut order: Vec<usize> = (0..self.rows).collect();
        let mut pivot_cols = Vec::new();
        let mut prev = Poly::one();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            order.swap(r, p);
            for i in r + 1..self.rows {
                for j in col + 1..self.cols {
                    let t = &m[r][col] * &m[i][j] - &m[i][col] * &m[r][j];
                    m[i][j] = t.div_exact(&prev).ok_or(AlgebraError::InexactDivision)?;
                }
                m[i][col] = Poly::zero();
            }
            prev = m[r][col].clone();
            pivot_cols.push(col);
            r += 1;
        }
        order.truncate(r);
        Ok((order, pivot_cols))
    }

    pub fn rank(&self) -> Result<usize, AlgebraError> {
        Ok(self.rank_profile()?.1.len())
    }

    /// Basis of the right nullspace over the fraction field, with polynomial
    /// entries (one vector per non-pivot column, built by Cramer's rule).
    pub fn nullspace(&self) -> Result<Vec<Vec<Poly>>, AlgebraError> {
        let (prows, pcols) = self.rank_profile()?;
        let base = self.select(&prows, &pcols);
        let d = base.det()?;
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| !pcols.contains(c)) {
            let mut v = vec![Poly::zero(); self.cols];
            v[f] = d.clone();
            for (k, &pc) in pcols.iter().enumerate() {
                let mut b = base.clone();
                for (row, &pr) in prows.iter().enumerate() {
                    b.set(row, k, -self.get(pr, f));
                }
                v[pc] = b.det()?;
            }
            out.push(reduce_vector(v));
        }
        Ok(out)
    }

    pub fn left_nullspace(&self) -> Result<Vec<Vec<Poly>>, AlgebraError> {
        self.transpose().nullspace()
    }

    pub fn display<'a>(&'a self, ns: &'a Namespace) -> MatrixDisplay<'a> {
        MatrixDisplay { m: self, ns }
    }
}

/// Removes the common monomial factor and rational content of a vector and
/// makes its first non-zero entry's leading coefficient positive.
pub fn reduce_vector(v: Vec<Poly>) -> Vec<Poly> {
    let nonzero: Vec<&Poly> = v.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return v;
    };
    let mono = nonzero
        .iter()
        .skip(1)
        .fold(first.monomial_content(), |g, p| g.gcd(&p.monomial_content()));
    let mut content: Option<BigRational> = None;
    for p in &nonzero {
        let (c, _) = p.primitive_part();
        content = Some(match content {
            None => c,
            Some(g) => rational_gcd(&g, &c),
        });
    }
    let mut scale = content.unwrap_or_else(BigRational::one).recip();
    if first.leading().is_some_and(|(_, c)| c < &num_traits::Zero::zero()) {
        scale = -scale;
    }
    v.into_iter()
        .map(|p| p.div_monomial(&mono).expect("common monomial divides").scale(&scale))
        .collect()
}

fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    use num_integer::Integer;
    BigRational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

pub struct MatrixDisplay<'a> {
    m: &'a PolyMatrix,
    ns: &'a Namespace,
}

impl fmt::Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m.rows {
            let cells: Vec<String> =
                self.m.row(i).iter().map(|p| p.display(self.ns).to_string()).collect();
            writeln!(f, "[ {} ]", cells.join(" | "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Sym;

    fn k(i: usize) -> Poly {
        Poly::var(Sym::rate(i))
    }

    fn c(i: usize) -> Poly {
        Poly::var(Sym::conc(i))
    }

    #[test]
    fn one_by_one() {
        let m = PolyMatrix::from_rows(vec![vec![k(1)]]);
        assert_eq!(m.det().unwrap(), k(1));
    }

    #[test]
    fn dependent_columns() {
        let m = PolyMatrix::from_rows(vec![
            vec![-k(2), k(1) * c(2)],
            vec![k(2), -(k(1) * c(2))],
        ]);
        assert!(m.det().unwrap().is_zero());
        assert_eq!(m.rank().unwrap(), 1);
    }

    #[test]
    fn needs_row_swap() {
        let m = PolyMatrix::from_rows(vec![vec![Poly::zero(), k(1)], vec![k(2), c(1)]]);
        assert_eq!(m.det().unwrap(), -(k(1) * k(2)));
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = PolyMatrix::from_rows(vec![
            vec![-k(1), k(2), Poly::zero()],
            vec![k(1), -k(2) - k(3), k(4)],
            vec![Poly::zero(), k(3), -k(4)],
        ]);
        let ns = m.nullspace().unwrap();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(Poly::is_zero));
        let left = m.left_nullspace().unwrap();
        assert_eq!(left.len(), 1);
        // column sums vanish, so the left kernel is spanned by all-ones
        assert!(left[0].iter().all(|p| p == &Poly::one()));
    }
}
