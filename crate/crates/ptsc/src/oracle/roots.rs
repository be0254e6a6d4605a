//! Exact polynomial interpolation over the rationals, and numeric root
//! finding through companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::ratmat::{rat, Rat};

/// Coefficients of the unique interpolating polynomial through
/// (xs[k], ys[k]), ascending degree. Newton divided differences, exact.
pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Vec<Rat> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    assert!(n > 0);
    // divided-difference coefficients
    let mut dd: Vec<Rat> = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = &dd[k] - &dd[k - 1];
            let den = &xs[k] - &xs[k - level];
            dd[k] = num / den;
        }
    }
    // expand the Newton form to monomial coefficients
    let mut coeffs = vec![Rat::zero(); n];
    let mut basis = vec![Rat::zero(); n]; // product (x - x_0)...(x - x_{k-1})
    basis[0] = rat(1);
    let mut basis_len = 1;
    for (k, c) in dd.iter().enumerate() {
        for (t, b) in basis.iter().take(basis_len).enumerate() {
            coeffs[t] += c * b;
        }
        if k + 1 < n {
            // basis *= (x - xs[k])
            let mut next = vec![Rat::zero(); basis_len + 1];
            for t in 0..basis_len {
                next[t + 1] += &basis[t];
                next[t] -= &basis[t] * &xs[k];
            }
            basis_len += 1;
            basis[..basis_len].clone_from_slice(&next);
        }
    }
    coeffs
}

pub fn eval(coeffs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Degree after dropping exactly-zero leading coefficients; None for the
/// zero polynomial.
pub fn degree(coeffs: &[Rat]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

/// Multiplicity of the root at zero; None for the zero polynomial.
pub fn order_at_zero(coeffs: &[Rat]) -> Option<usize> {
    coeffs.iter().position(|c| !c.is_zero())
}

/// All complex roots of a rational-coefficient polynomial, via the
/// eigenvalues of the monic companion matrix in floating point.
pub fn roots_f64(coeffs: &[Rat]) -> Vec<Complex64> {
    let Some(deg) = degree(coeffs) else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg].to_f64().unwrap();
    let monic: Vec<f64> = coeffs[..deg].iter().map(|c| c.to_f64().unwrap() / lead).collect();
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for r in 1..deg {
        comp[(r, r - 1)] = 1.0;
    }
    for r in 0..deg {
        comp[(r, deg - 1)] = -monic[r];
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

/// One nonzero vector q with qᵀ·m = 0, by complex Gaussian elimination on
/// mᵀ, together with the left nullity.
pub fn left_null_complex(m: &DMatrix<Complex64>) -> Option<(Vec<Complex64>, usize)> {
    let t = m.transpose();
    let (rows, cols) = (t.nrows(), t.ncols());
    let mut a = t.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0usize;
    let scale = a.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1.0);
    let tol = scale * 1e-11;
    for col in 0..cols {
        // partial pivoting
        let pivot = (rank..rows)
            .max_by(|&r1, &r2| a[(r1, col)].norm().partial_cmp(&a[(r2, col)].norm()).unwrap());
        let Some(p) = pivot else { continue };
        if a[(p, col)].norm() <= tol {
            continue;
        }
        a.swap_rows(rank, p);
        let pv = a[(rank, col)];
        for c in col..cols {
            a[(rank, c)] /= pv;
        }
        for r in 0..rows {
            if r != rank && a[(r, col)].norm() > 0.0 {
                let factor = a[(r, col)];
                for c in col..cols {
                    let sub = factor * a[(rank, c)];
                    a[(r, c)] -= sub;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let nullity = cols - rank;
    if nullity == 0 {
        return None;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..cols).find(|c| !pivot_cols.contains(c)).unwrap();
    let mut x = vec![Complex64::new(0.0, 0.0); cols];
    x[free] = Complex64::new(1.0, 0.0);
    for &(r, c) in &pivots {
        x[c] = -a[(r, free)];
    }
    Some((x, nullity))
}
