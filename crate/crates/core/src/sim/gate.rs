use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::turns::Turns;
use crate::error::{Error, Result};

pub type Matrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Every operation a circuit can hold.
///
/// `Gpi`/`Gpi2` are the trapped-ion single-qubit natives and `Ms` the
/// fully entangling Mølmer–Sørensen gate; their phases are in turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    Cnot,
    Cz,
    Swap,
    Gpi(Turns),
    Gpi2(Turns),
    Ms,
    Barrier,
    MeasureAll,
}

impl GateKind {
    /// Number of qubits the operation acts on; zero for barrier and measurement.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Swap | GateKind::Ms => 2,
            GateKind::Barrier | GateKind::MeasureAll => 0,
            _ => 1,
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, GateKind::Barrier | GateKind::MeasureAll)
    }

    pub fn turns(&self) -> Option<Turns> {
        match self {
            GateKind::Gpi(t) | GateKind::Gpi2(t) => Some(*t),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::Gpi(_) => "GPI",
            GateKind::Gpi2(_) => "GPI2",
            GateKind::Ms => "MS",
            GateKind::Barrier => "Barrier",
            GateKind::MeasureAll => "MeasureAll",
        }
    }

    /// Inverse of [`GateKind::name`]; `turns` is required for GPI/GPI2 and
    /// forbidden otherwise.
    pub fn from_name(name: &str, turns: Option<Turns>) -> Result<Self> {
        let kind = match (name, turns) {
            ("GPI", Some(t)) => return Ok(GateKind::Gpi(t)),
            ("GPI2", Some(t)) => return Ok(GateKind::Gpi2(t)),
            ("GPI" | "GPI2", None) => {
                return Err(Error::Json(format!("{name} requires param_turns")))
            }
            (_, Some(_)) => return Err(Error::Json(format!("{name} takes no param_turns"))),
            ("X", None) => GateKind::X,
            ("Y", None) => GateKind::Y,
            ("Z", None) => GateKind::Z,
            ("H", None) => GateKind::H,
            ("S", None) => GateKind::S,
            ("Sdg", None) => GateKind::Sdg,
            ("CNOT", None) => GateKind::Cnot,
            ("CZ", None) => GateKind::Cz,
            ("SWAP", None) => GateKind::Swap,
            ("MS", None) => GateKind::Ms,
            ("Barrier", None) => GateKind::Barrier,
            ("MeasureAll", None) => GateKind::MeasureAll,
            _ => return Err(Error::Json(format!("unknown gate kind `{name}`"))),
        };
        Ok(kind)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.turns() {
            Some(t) => write!(f, "{}({})", self.name(), t),
            None => f.write_str(self.name()),
        }
    }
}

/// Single-qubit Pauli operator, ordered I < X < Y < Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Matrix {
        match self {
            Pauli::I => Matrix::identity(2, 2),
            Pauli::X => gate_matrix(GateKind::X).unwrap(),
            Pauli::Y => gate_matrix(GateKind::Y).unwrap(),
            Pauli::Z => gate_matrix(GateKind::Z).unwrap(),
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// True if the Pauli flips computational-basis bits.
    pub fn flips_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(c)
    }
}

fn m2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Matrix {
    Matrix::from_row_slice(2, 2, &[a, b, c, d])
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The unitary of a gate. Two-qubit matrices use the basis |ab⟩ with the
/// first listed qubit as the most significant bit.
pub fn gate_matrix(kind: GateKind) -> Result<Matrix> {
    let h = re(FRAC_1_SQRT_2);
    let m = match kind {
        GateKind::X => m2(ZERO, ONE, ONE, ZERO),
        GateKind::Y => m2(ZERO, -I, I, ZERO),
        GateKind::Z => m2(ONE, ZERO, ZERO, -ONE),
        GateKind::H => m2(h, h, h, -h),
        GateKind::S => m2(ONE, ZERO, ZERO, I),
        GateKind::Sdg => m2(ONE, ZERO, ZERO, -I),
        GateKind::Gpi(t) => {
            let phi = t.radians();
            m2(ZERO, Complex64::cis(-phi), Complex64::cis(phi), ZERO)
        }
        GateKind::Gpi2(t) => {
            let phi = t.radians();
            m2(
                h,
                -I * Complex64::cis(-phi) * h,
                -I * Complex64::cis(phi) * h,
                h,
            )
        }
        GateKind::Cnot => Matrix::from_row_slice(
            4,
            4,
            &[
                ONE, ZERO, ZERO, ZERO, //
                ZERO, ONE, ZERO, ZERO, //
                ZERO, ZERO, ZERO, ONE, //
                ZERO, ZERO, ONE, ZERO,
            ],
        ),
        GateKind::Cz => {
            Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE]))
        }
        GateKind::Swap => Matrix::from_row_slice(
            4,
            4,
            &[
                ONE, ZERO, ZERO, ZERO, //
                ZERO, ZERO, ONE, ZERO, //
                ZERO, ONE, ZERO, ZERO, //
                ZERO, ZERO, ZERO, ONE,
            ],
        ),
        GateKind::Ms => {
            let n = -I * h;
            Matrix::from_row_slice(
                4,
                4,
                &[
                    h, ZERO, ZERO, n, //
                    ZERO, h, n, ZERO, //
                    ZERO, n, h, ZERO, //
                    n, ZERO, ZERO, h,
                ],
            )
        }
        GateKind::Barrier | GateKind::MeasureAll => {
            return Err(Error::usage(format!("{} has no matrix", kind.name())))
        }
    };
    Ok(m)
}

/// Maximum entry-wise distance of `u†u` from the identity.
pub fn unitarity_defect(u: &Matrix) -> f64 {
    let prod = u.adjoint() * u;
    let id = Matrix::identity(u.nrows(), u.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() <= tol)
    }

    #[test]
    fn gpi_zero_is_x() {
        let g = gate_matrix(GateKind::Gpi(Turns::ZERO)).unwrap();
        assert!(close(&g, &gate_matrix(GateKind::X).unwrap(), 1e-15));
    }

    #[test]
    fn ms_matches_native_definition() {
        let ms = gate_matrix(GateKind::Ms).unwrap();
        let s = FRAC_1_SQRT_2;
        let expected = Matrix::from_row_slice(
            4,
            4,
            &[
                re(s),
                ZERO,
                ZERO,
                -I * s, //
                ZERO,
                re(s),
                -I * s,
                ZERO, //
                ZERO,
                -I * s,
                re(s),
                ZERO, //
                -I * s,
                ZERO,
                ZERO,
                re(s),
            ],
        );
        assert!(close(&ms, &expected, 1e-15));
    }

    #[test]
    fn gpi_eighth_after_gpi_zero_is_phase_gate() {
        // GPI(1/8)·GPI(0) = e^{-iπ/4} diag(1, i)
        let a = gate_matrix(GateKind::Gpi(Turns::ZERO)).unwrap();
        let b = gate_matrix(GateKind::Gpi(Turns::new(1, 8))).unwrap();
        let phase = Complex64::cis(-std::f64::consts::FRAC_PI_4);
        let expected = m2(phase, ZERO, ZERO, phase * I);
        assert!(close(&(b * a), &expected, 1e-14));
    }

    #[test]
    fn all_gates_unitary() {
        let kinds = [
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::H,
            GateKind::S,
            GateKind::Sdg,
            GateKind::Cnot,
            GateKind::Cz,
            GateKind::Swap,
            GateKind::Ms,
            GateKind::Gpi(Turns::new(3, 8)),
            GateKind::Gpi2(Turns::new(1, 4)),
        ];
        for k in kinds {
            let u = gate_matrix(k).unwrap();
            assert_eq!(u.nrows(), 1 << k.arity());
            assert!(unitarity_defect(&u) < 1e-12, "{k}");
        }
    }

    #[test]
    fn non_gates_have_no_matrix() {
        assert!(matches!(
            gate_matrix(GateKind::Barrier),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            gate_matrix(GateKind::MeasureAll),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn names_round_trip() {
        for k in [
            GateKind::Sdg,
            GateKind::Ms,
            GateKind::Gpi2(Turns::new(1, 2)),
        ] {
            assert_eq!(GateKind::from_name(k.name(), k.turns()).unwrap(), k);
        }
        assert!(GateKind::from_name("GPI", None).is_err());
        assert!(GateKind::from_name("H", Some(Turns::ZERO)).is_err());
    }
}
