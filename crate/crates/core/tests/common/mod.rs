//! Dense scaling-and-squaring propagator, independent of the library's
//! spectral-decomposition path. Meant for small systems only.

use num_complex::Complex64;
use spintransfer::{StateVector, TridiagonalOperator};

type Mat = Vec<Vec<Complex64>>;

fn identity(n: usize) -> Mat {
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

/// exp(A) by scaling the matrix under 1/2 in 1-norm, summing the Taylor
/// series to machine tail, then repeated squaring.
fn expm(a: &Mat) -> Mat {
    let n = a.len();
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let factor = Complex64::new((2.0f64).powi(-s), 0.0);
    let b: Mat = a.iter().map(|row| row.iter().map(|&x| x * factor).collect()).collect();

    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=40u32 {
        term = matmul(&term, &b);
        let inv_k = Complex64::new(1.0 / k as f64, 0.0);
        let mut tail = 0.0f64;
        for (ri, ti) in result.iter_mut().zip(term.iter_mut()) {
            for (r, t) in ri.iter_mut().zip(ti.iter_mut()) {
                *t *= inv_k;
                *r += *t;
                tail = tail.max(t.norm());
            }
        }
        if tail < 1e-20 {
            break;
        }
    }
    let mut result = result;
    for _ in 0..s {
        result = matmul(&result, &result);
    }
    result
}

/// Reference evolution exp(-i H t) psi0 through the dense propagator.
pub fn evolve_dense(op: &TridiagonalOperator, psi0: &StateVector, t: f64) -> StateVector {
    let n = op.size();
    assert_eq!(psi0.len(), n);
    let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        a[i][i] = Complex64::new(0.0, -op.diagonal()[i] * t);
        if i + 1 < n {
            let v = Complex64::new(0.0, -op.offdiagonal()[i] * t);
            a[i][i + 1] = v;
            a[i + 1][i] = v;
        }
    }
    let u = expm(&a);
    let amps: Vec<Complex64> = (0..n)
        .map(|i| (0..n).map(|j| u[i][j] * psi0.amplitudes()[j]).sum())
        .collect();
    StateVector::new(amps).expect("dense propagator preserves norm to roundoff")
}
