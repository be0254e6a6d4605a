//! Dense exact-rational matrices: just enough linear algebra for rank,
//! determinant, and null-space questions at oracle scale.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for RatMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RatMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rat) {
        let cur = self.get(i, j).clone();
        self.set(i, j, cur + v);
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMat {
        let mut m = RatMat::zeros(rows.len(), cols.len());
        for (bi, &i) in rows.iter().enumerate() {
            for (bj, &j) in cols.iter().enumerate() {
                m.set(bi, bj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut m = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut m = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        m.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        m
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let pivot = (rank..a.rows).find(|&r| !a.get(r, col).is_zero());
            let Some(p) = pivot else { continue };
            a.swap_rows(rank, p);
            let pv = a.get(rank, col).clone();
            for r in rank + 1..a.rows {
                if !a.get(r, col).is_zero() {
                    let factor = a.get(r, col) / &pv;
                    for c in col..a.cols {
                        let v = a.get(r, c) - &factor * a.get(rank, c);
                        a.set(r, c, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..a.cols {
            let pivot = (col..a.rows).find(|&r| !a.get(r, col).is_zero());
            let Some(p) = pivot else { return Rat::zero() };
            if p != col {
                a.swap_rows(col, p);
                det = -det;
            }
            let pv = a.get(col, col).clone();
            det *= &pv;
            for r in col + 1..a.rows {
                if !a.get(r, col).is_zero() {
                    let factor = a.get(r, col) / &pv;
                    for c in col..a.cols {
                        let v = a.get(r, c) - &factor * a.get(col, c);
                        a.set(r, c, v);
                    }
                }
            }
        }
        det
    }

    /// One nonzero vector q with qᵀ·self = 0 together with the left nullity,
    /// or None when the rows are independent.
    pub fn left_null_vector(&self) -> Option<(Vec<Rat>, usize)> {
        // null space of selfᵀ x = 0, x ∈ Q^rows
        let t = self.transpose();
        let mut a = t.clone();
        let n = a.cols; // = self.rows
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row of rref, col)
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..a.rows).find(|&r| !a.get(r, col).is_zero());
            let Some(p) = pivot else { continue };
            a.swap_rows(rank, p);
            let pv = a.get(rank, col).clone();
            for c in col..a.cols {
                let v = a.get(rank, c) / &pv;
                a.set(rank, c, v);
            }
            for r in 0..a.rows {
                if r != rank && !a.get(r, col).is_zero() {
                    let factor = a.get(r, col).clone();
                    for c in col..a.cols {
                        let v = a.get(r, c) - &factor * a.get(rank, c);
                        a.set(r, c, v);
                    }
                }
            }
            pivots.push((rank, col));
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        let nullity = n - rank;
        if nullity == 0 {
            return None;
        }
        // take the first free column and back-substitute
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free = (0..n).find(|c| !pivot_cols.contains(c)).unwrap();
        let mut x = vec![Rat::zero(); n];
        x[free] = Rat::one();
        for &(r, c) in &pivots {
            // x[c] = -a[r, free] (row-reduced)
            x[c] = -a.get(r, free).clone();
        }
        debug_assert!({
            let prod: Vec<Rat> = (0..self.cols)
                .map(|j| (0..self.rows).map(|i| &x[i] * self.get(i, j)).sum())
                .collect();
            prod.iter().all(|v| v.is_zero())
        });
        Some((x, nullity))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    pub fn max_abs_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.data.iter().map(|v| v.abs().to_f64().unwrap_or(0.0)).fold(0.0, f64::max)
    }
}

/// Controllability matrix [B, AB, ..., A^{n-1}B] for ab = [A | B].
pub fn ctrb(ab: &RatMat, n: usize, m: usize) -> RatMat {
    assert_eq!(ab.rows(), n);
    assert_eq!(ab.cols(), n + m);
    let a = ab.submatrix(&(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
    let b = ab.submatrix(&(0..n).collect::<Vec<_>>(), &(n..n + m).collect::<Vec<_>>());
    let mut c = RatMat::zeros(n, n * m);
    let mut power = b;
    for k in 0..n {
        for i in 0..n {
            for j in 0..m {
                c.set(i, k * m + j, power.get(i, j).clone());
            }
        }
        if k + 1 < n {
            power = a.mul(&power);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_det() {
        let mut m = RatMat::zeros(2, 2);
        m.set(0, 0, rat(2));
        m.set(0, 1, rat(4));
        m.set(1, 0, rat(1));
        m.set(1, 1, rat(2));
        assert_eq!(m.rank(), 1);
        assert!(m.det().is_zero());
        m.set(1, 1, rat(3));
        assert_eq!(m.rank(), 2);
        assert_eq!(m.det(), rat(2));
    }

    #[test]
    fn left_null() {
        // rows: (1, 2), (2, 4): left null vector (2, -1)
        let mut m = RatMat::zeros(2, 2);
        m.set(0, 0, rat(1));
        m.set(0, 1, rat(2));
        m.set(1, 0, rat(2));
        m.set(1, 1, rat(4));
        let (q, nullity) = m.left_null_vector().unwrap();
        assert_eq!(nullity, 1);
        let s0 = &q[0] * m.get(0, 0) + &q[1] * m.get(1, 0);
        let s1 = &q[0] * m.get(0, 1) + &q[1] * m.get(1, 1);
        assert!(s0.is_zero() && s1.is_zero());
        assert!(q.iter().any(|v| !v.is_zero()));

        assert!(RatMat::identity(3).left_null_vector().is_none());
    }

    #[test]
    fn ctrb_of_chain() {
        // A = [[0,0],[1,0]], b = (1, 0): C = [b, Ab] = [[1,0],[0,1]]
        let mut ab = RatMat::zeros(2, 3);
        ab.set(1, 0, rat(1));
        ab.set(0, 2, rat(1));
        let c = ctrb(&ab, 2, 1);
        assert_eq!(c, RatMat::identity(2));
    }
}
