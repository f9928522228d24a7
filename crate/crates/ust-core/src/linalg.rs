//! Dense square matrices with two elimination backends: fraction-free
//! (Bareiss) elimination over exact rationals, and partial-pivot Gaussian
//! elimination over `f64`.
//!
//! The exact path clears denominators row by row and then works entirely in
//! big integers; every interior division in the Bareiss recurrence is exact,
//! which keeps entry growth polynomial instead of exponential.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Rat, Result};

/// A square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Clears denominators of each row, returning integer rows plus the product
/// of the scaling factors (so `det(A) = det(A_int) / scale`).
fn clear_denominators(m: &Matrix<Rat>) -> (Vec<Vec<BigInt>>, BigInt) {
    let n = m.n();
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = BigInt::one();
        for j in 0..n {
            lcm = lcm.lcm(m.get(i, j).denom());
        }
        let row: Vec<BigInt> = (0..n)
            .map(|j| {
                let e = m.get(i, j);
                e.numer() * (&lcm / e.denom())
            })
            .collect();
        scale *= &lcm;
        rows.push(row);
    }
    (rows, scale)
}

/// Fraction-free forward elimination in place. Returns the permutation sign,
/// or None when the matrix is singular. Afterwards `rows` is upper
/// triangular and `rows[n-1][n-1]` is the determinant of the integer matrix
/// (times the sign). Rows may carry `extra` trailing columns (an augmented
/// right-hand side) that are transformed alongside.
fn bareiss_forward(rows: &mut [Vec<BigInt>], extra: usize) -> Option<i8> {
    let n = rows.len();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !rows[r][k].is_zero())?;
        if pivot_row != k {
            rows.swap(k, pivot_row);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..(n + extra) {
                let value = (&rows[i][j] * &rows[k][k] - &rows[i][k] * &rows[k][j]) / &prev;
                rows[i][j] = value;
            }
            rows[i][k] = BigInt::zero();
        }
        prev = rows[k][k].clone();
    }
    Some(sign)
}

/// Exact determinant of a rational matrix.
pub fn det_rational(m: &Matrix<Rat>) -> Rat {
    let n = m.n();
    if n == 0 {
        return Rat::one();
    }
    let (mut rows, scale) = clear_denominators(m);
    match bareiss_forward(&mut rows, 0) {
        None => Rat::zero(),
        Some(sign) => {
            let det_int = rows[n - 1][n - 1].clone();
            let signed = if sign < 0 { -det_int } else { det_int };
            Rat::new(signed, scale)
        }
    }
}

/// Exact solution of `A x = b` over the rationals.
pub fn solve_rational(a: &Matrix<Rat>, b: &[Rat]) -> Result<Vec<Rat>> {
    let n = a.n();
    assert_eq!(b.len(), n, "dimension mismatch");
    if n == 0 {
        return Ok(Vec::new());
    }
    // Clear denominators of each augmented row [A_i | b_i]; row scaling
    // multiplies both sides, so solutions are unchanged.
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = b[i].denom().clone();
        for j in 0..n {
            lcm = lcm.lcm(a.get(i, j).denom());
        }
        let mut row: Vec<BigInt> = (0..n)
            .map(|j| {
                let e = a.get(i, j);
                e.numer() * (&lcm / e.denom())
            })
            .collect();
        row.push(b[i].numer() * (&lcm / b[i].denom()));
        rows.push(row);
    }
    if bareiss_forward(&mut rows, 1).is_none() {
        return Err(Error::Singular);
    }
    // Back-substitution in rationals over the integral triangle.
    let mut x = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rat::from_integer(rows[i][n].clone());
        for j in (i + 1)..n {
            acc -= Rat::from_integer(rows[i][j].clone()) * x[j].clone();
        }
        x[i] = acc / Rat::from_integer(rows[i][i].clone());
    }
    Ok(x)
}

/// Determinant of an `f64` matrix by partial-pivot LU.
pub fn det_f64(m: &Matrix<f64>) -> f64 {
    let n = m.n();
    if n == 0 {
        return 1.0;
    }
    let mut a = m.clone();
    let mut det = 1.0;
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&r, &s| {
                a.get(r, k)
                    .abs()
                    .partial_cmp(&a.get(s, k).abs())
                    .expect("finite entries")
            })
            .expect("nonempty range");
        let pivot = *a.get(pivot_row, k);
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = *a.get(k, j);
                a.set(k, j, *a.get(pivot_row, j));
                a.set(pivot_row, j, tmp);
            }
            det = -det;
        }
        det *= pivot;
        for i in (k + 1)..n {
            let factor = a.get(i, k) / pivot;
            for j in k..n {
                let value = a.get(i, j) - factor * a.get(k, j);
                a.set(i, j, value);
            }
        }
    }
    det
}

/// Solves `A x = b` over `f64` with partial pivoting.
pub fn solve_f64(a: &Matrix<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n();
    assert_eq!(b.len(), n, "dimension mismatch");
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&r, &s| {
                m.get(r, k)
                    .abs()
                    .partial_cmp(&m.get(s, k).abs())
                    .expect("finite entries")
            })
            .expect("nonempty range");
        if m.get(pivot_row, k).abs() < 1e-300 {
            return Err(Error::Singular);
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = *m.get(k, j);
                m.set(k, j, *m.get(pivot_row, j));
                m.set(pivot_row, j, tmp);
            }
            rhs.swap(k, pivot_row);
        }
        let pivot = *m.get(k, k);
        for i in (k + 1)..n {
            let factor = m.get(i, k) / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                let value = m.get(i, j) - factor * m.get(k, j);
                m.set(i, j, value);
            }
            rhs[i] -= factor * rhs[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= m.get(i, j) * x[j];
        }
        x[i] = acc / m.get(i, i);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_int};

    #[test]
    fn det_small_integers() {
        let m = Matrix::from_rows(vec![
            vec![rat_int(8), rat_int(3), rat_int(4)],
            vec![rat_int(3), rat_int(8), rat_int(3)],
            vec![rat_int(4), rat_int(3), rat_int(8)],
        ]);
        assert_eq!(det_rational(&m), rat_int(312));
    }

    #[test]
    fn det_with_denominators() {
        // Same matrix scaled by 1/18: det scales by 18^-3.
        let m = Matrix::from_fn(3, |i, j| {
            let base = [[8, 3, 4], [3, 8, 3], [4, 3, 8]];
            rat(base[i][j], 18)
        });
        assert_eq!(det_rational(&m), rat(312, 5832));
    }

    #[test]
    fn det_empty_is_one() {
        let m: Matrix<Rat> = Matrix::from_rows(vec![]);
        assert_eq!(det_rational(&m), rat_int(1));
        let f: Matrix<f64> = Matrix::from_rows(vec![]);
        assert_eq!(det_f64(&f), 1.0);
    }

    #[test]
    fn det_singular_is_zero() {
        let m = Matrix::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        assert_eq!(det_rational(&m), rat_int(0));
    }

    #[test]
    fn solve_exact() {
        // 2x + y = 5, x + 3y/2 = 3  =>  x = 9/4, y = 1/2.
        let a = Matrix::from_rows(vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat(3, 2)],
        ]);
        let x = solve_rational(&a, &[rat_int(5), rat_int(3)]).unwrap();
        assert_eq!(x, vec![rat(9, 4), rat(1, 2)]);
    }

    #[test]
    fn solve_singular_errors() {
        let a = Matrix::from_rows(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ]);
        assert_eq!(
            solve_rational(&a, &[rat_int(1), rat_int(2)]),
            Err(Error::Singular)
        );
    }

    #[test]
    fn float_matches_exact_on_random_systems() {
        // Deterministic pseudo-random entries.
        let mut state = 1u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 19) as i64 - 9
        };
        for trial in 0..20 {
            let n = 2 + (trial % 4);
            let a_exact = Matrix::from_fn(n, |_, _| rat_int(next()));
            let a_float = Matrix::from_fn(n, |i, j| {
                use num_traits::ToPrimitive;
                a_exact.get(i, j).to_f64().unwrap()
            });
            let exact = det_rational(&a_exact);
            let float = det_f64(&a_float);
            use num_traits::ToPrimitive;
            assert!(
                (exact.to_f64().unwrap() - float).abs() < 1e-6 * (1.0 + float.abs()),
                "trial {trial}: {exact} vs {float}"
            );
        }
    }
}
