//! Thin safe wrappers over the LAPACK routines the engine needs.
//!
//! Everything here is eigenvalue-only: classification and spectra never
//! need eigenvectors, which keeps the banded full-spectrum path at
//! O(n² kd) instead of O(n³).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("LAPACK {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },
    #[error("singular linear system")]
    Singular,
}

/// Eigenvalues of a dense symmetric matrix (row-major, n x n), ascending.
pub fn sym_eigvals(a: &[f64], n: usize) -> Result<Vec<f64>, LinalgError> {
    assert_eq!(a.len(), n * n);
    // dsyev is column-major, but a symmetric matrix equals its transpose.
    let mut work_a = a.to_vec();
    let mut w = vec![0.0; n];
    let lwork = (3 * n).max(1) as i32;
    let mut work = vec![0.0; lwork as usize];
    let mut info = 0i32;
    unsafe {
        lapack_sys::dsyev_(
            &(b'N' as i8),
            &(b'L' as i8),
            &(n as i32),
            work_a.as_mut_ptr(),
            &(n.max(1) as i32),
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack { routine: "dsyev", info });
    }
    Ok(w)
}

/// Symmetric banded storage (lower), column `j` holding `A[j..=j+kd][j]`.
pub struct BandedSym {
    pub n: usize,
    pub kd: usize,
    /// Column-major band array, `ldab = kd + 1`.
    pub ab: Vec<f64>,
}

impl BandedSym {
    pub fn zeros(n: usize, kd: usize) -> Self {
        Self { n, kd, ab: vec![0.0; (kd + 1) * n] }
    }

    /// Add `value` at `(i, j)` with `i >= j` and `i - j <= kd`.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i >= j && i - j <= self.kd);
        self.ab[j * (self.kd + 1) + (i - j)] += value;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.kd {
            0.0
        } else {
            self.ab[j * (self.kd + 1) + (i - j)]
        }
    }

    /// y = A x, using the symmetric band structure.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let (n, kd, ldab) = (self.n, self.kd, self.kd + 1);
        y.fill(0.0);
        for j in 0..n {
            let diag = self.ab[j * ldab];
            y[j] += diag * x[j];
            let imax = (j + kd).min(n - 1);
            for i in (j + 1)..=imax {
                let v = self.ab[j * ldab + (i - j)];
                if v != 0.0 {
                    y[i] += v * x[j];
                    y[j] += v * x[i];
                }
            }
        }
    }

    /// All eigenvalues, ascending (dsbev, eigenvalues only).
    pub fn eigvals(&self) -> Result<Vec<f64>, LinalgError> {
        let n = self.n;
        let mut ab = self.ab.clone();
        let mut w = vec![0.0; n];
        let mut work = vec![0.0; (3 * n).max(1)];
        let mut info = 0i32;
        unsafe {
            lapack_sys::dsbev_(
                &(b'N' as i8),
                &(b'L' as i8),
                &(n as i32),
                &(self.kd as i32),
                ab.as_mut_ptr(),
                &((self.kd + 1) as i32),
                w.as_mut_ptr(),
                std::ptr::null_mut(),
                &1,
                work.as_mut_ptr(),
                &mut info,
            );
        }
        if info != 0 {
            return Err(LinalgError::Lapack { routine: "dsbev", info });
        }
        Ok(w)
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix (Lanczos back end).
pub fn tridiag_eigvals(diag: &[f64], off: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let n = diag.len();
    assert!(off.len() + 1 == n || (n == 0 && off.is_empty()));
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut info = 0i32;
    unsafe {
        lapack_sys::dsterf_(&(n as i32), d.as_mut_ptr(), e.as_mut_ptr(), &mut info);
    }
    if info != 0 {
        return Err(LinalgError::Lapack { routine: "dsterf", info });
    }
    Ok(d)
}

/// Complex eigenvalues of a general real 4x4 matrix (dgeev).
pub fn eigvals_general_4(a: &[[f64; 4]; 4]) -> Result<[num_complex::Complex64; 4], LinalgError> {
    // Column-major copy.
    let mut cm = [0.0f64; 16];
    for i in 0..4 {
        for j in 0..4 {
            cm[j * 4 + i] = a[i][j];
        }
    }
    let mut wr = [0.0f64; 4];
    let mut wi = [0.0f64; 4];
    let lwork = 64i32;
    let mut work = [0.0f64; 64];
    let mut info = 0i32;
    let n = 4i32;
    unsafe {
        lapack_sys::dgeev_(
            &(b'N' as i8),
            &(b'N' as i8),
            &n,
            cm.as_mut_ptr(),
            &n,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            std::ptr::null_mut(),
            &1,
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack { routine: "dgeev", info });
    }
    let mut out = [num_complex::Complex64::new(0.0, 0.0); 4];
    for k in 0..4 {
        out[k] = num_complex::Complex64::new(wr[k], wi[k]);
    }
    Ok(out)
}

/// Solve a 4x4 linear system by Gaussian elimination with partial pivoting.
pub fn solve4(a: &[[f64; 4]; 4], b: &[f64; 4]) -> Result<[f64; 4], LinalgError> {
    let mut m = *a;
    let mut x = *b;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() < 1e-300 {
            return Err(LinalgError::Singular);
        }
        m.swap(col, piv);
        x.swap(col, piv);
        for row in (col + 1)..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..4).rev() {
        let mut s = x[col];
        for k in (col + 1)..4 {
            s -= m[col][k] * x[k];
        }
        x[col] = s / m[col][col];
    }
    Ok(x)
}
