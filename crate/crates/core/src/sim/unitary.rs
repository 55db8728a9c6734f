use num_complex::Complex64;

use super::circuit::Circuit;
use super::gate::Matrix;
use super::state::{apply_circuit, StateVector};
use crate::error::{Error, Result};

/// Largest register for which full unitaries are built.
pub const MAX_UNITARY_QUBITS: usize = 5;

/// The circuit's full unitary, column `j` being the image of basis state `j`.
/// Barriers are ignored; a trailing measurement is an error.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Matrix> {
    if circuit.measures() {
        return Err(Error::usage(
            "circuit_unitary needs a circuit without measurement",
        ));
    }
    let n = circuit.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::usage(format!(
            "circuit_unitary supports at most {MAX_UNITARY_QUBITS} qubits"
        )));
    }
    let dim = 1 << n;
    let mut u = Matrix::zeros(dim, dim);
    for j in 0..dim {
        let out = apply_circuit(circuit, &StateVector::basis(n, j)?, None)?;
        for (i, a) in out.amplitudes().iter().enumerate() {
            u[(i, j)] = *a;
        }
    }
    Ok(u)
}

/// Global phase `e^{iφ}` best aligning `v` with `u`, taken from the
/// largest-magnitude entry of `v†u` (first in row-major order on ties).
pub fn fitted_phase(u: &Matrix, v: &Matrix) -> Result<Complex64> {
    check_shapes(u, v)?;
    let m = v.adjoint() * u;
    let mut best = Complex64::new(1.0, 0.0);
    let mut best_norm = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            if z.norm() > best_norm {
                best_norm = z.norm();
                best = z;
            }
        }
    }
    if best_norm == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(best / best_norm)
}

/// `max |u − e^{iφ} v|` with φ from [`fitted_phase`].
pub fn phase_residual(u: &Matrix, v: &Matrix) -> Result<f64> {
    let phase = fitted_phase(u, v)?;
    Ok((u - v * phase).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// True iff `u` equals `v` up to a global phase, entry-wise within `tol`.
pub fn phase_equivalent(u: &Matrix, v: &Matrix, tol: f64) -> Result<bool> {
    Ok(phase_residual(u, v)? <= tol)
}

fn check_shapes(u: &Matrix, v: &Matrix) -> Result<()> {
    if !u.is_square() || !v.is_square() {
        return Err(Error::usage("phase comparison needs square matrices"));
    }
    if u.nrows() != v.nrows() {
        return Err(Error::Dimension {
            expected: u.nrows(),
            got: v.nrows(),
        });
    }
    Ok(())
}

/// Kronecker product of single-qubit operators, first factor most significant.
pub fn kron_all(factors: &[Matrix]) -> Matrix {
    factors
        .iter()
        .fold(Matrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{gate_matrix, GateKind, Segment};

    #[test]
    fn single_x_unitary() {
        let mut c = Circuit::new("x", 1).unwrap();
        c.gate(GateKind::X, &[0], Segment::Logic).unwrap();
        let u = circuit_unitary(&c).unwrap();
        assert!(phase_equivalent(&u, &gate_matrix(GateKind::X).unwrap(), 0.0).unwrap());
        assert_eq!(u[(1, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn measurement_rejected() {
        let mut c = Circuit::new("m", 1).unwrap();
        c.measure_all().unwrap();
        assert!(circuit_unitary(&c).is_err());
    }

    #[test]
    fn global_phase_is_ignored() {
        let h = gate_matrix(GateKind::H).unwrap();
        assert!(phase_equivalent(&h, &h, 1e-12).unwrap());
        assert!(phase_equivalent(&h, &(-h.clone()), 1e-12).unwrap());
        let i = Complex64::new(0.0, 1.0);
        assert!(phase_equivalent(&h, &(h.clone() * i), 1e-12).unwrap());
    }

    #[test]
    fn s_and_zs_differ() {
        let s = gate_matrix(GateKind::S).unwrap();
        let zs = gate_matrix(GateKind::Z).unwrap() * &s;
        assert!(!phase_equivalent(&s, &zs, 1e-9).unwrap());
    }

    #[test]
    fn shape_errors() {
        let a = Matrix::identity(2, 3);
        let b = Matrix::identity(2, 2);
        assert!(phase_equivalent(&a, &b, 1e-9).is_err());
        assert!(phase_equivalent(&b, &Matrix::identity(4, 4), 1e-9).is_err());
    }
}
