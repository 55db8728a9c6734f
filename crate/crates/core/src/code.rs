//! The [[4,2,2]] code: stabilizers XXXX and ZZZZ, two logical dictionaries,
//! parity post-selection and outcome decoding.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{
    gate_matrix, kron_all, parse_bits, phase_residual, GateKind, GateOp, Matrix, Pauli, Segment,
    StateVector,
};

/// Physical qubits per block.
pub const N: usize = 4;

pub const S1: &str = "XXXX";
pub const S2: &str = "ZZZZ";

/// A 4-qubit Pauli string such as `"ZZII"`, qubit 1 leftmost.
pub fn pauli_string(s: &str) -> Result<[Pauli; N]> {
    let chars: Vec<char> = s.chars().collect();
    if chars.len() != N {
        return Err(Error::usage(format!(
            "Pauli string `{s}` must have {N} letters"
        )));
    }
    let mut out = [Pauli::I; N];
    for (slot, c) in out.iter_mut().zip(chars) {
        *slot = Pauli::from_char(c)
            .ok_or_else(|| Error::usage(format!("bad Pauli letter `{c}` in `{s}`")))?;
    }
    Ok(out)
}

pub fn apply_pauli_string(state: &mut StateVector, s: &str) -> Result<()> {
    for (q, p) in pauli_string(s)?.into_iter().enumerate() {
        state.apply_pauli(p, q);
    }
    Ok(())
}

pub fn pauli_string_matrix(s: &str) -> Result<Matrix> {
    Ok(kron_all(&pauli_string(s)?.map(Pauli::matrix)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DictionaryName {
    /// X̄1=ZZII, Z̄1=XIXI, X̄2=XXII, Z̄2=ZIZI.
    Paper,
    /// X̄1=XIXI, Z̄1=ZZII, X̄2=XXII, Z̄2=ZIZI.
    Conventional,
}

impl DictionaryName {
    pub const ALL: [DictionaryName; 2] = [DictionaryName::Paper, DictionaryName::Conventional];

    pub fn as_str(self) -> &'static str {
        match self {
            DictionaryName::Paper => "paper",
            DictionaryName::Conventional => "conventional",
        }
    }

    /// Logical Pauli strings (X̄1, Z̄1, X̄2, Z̄2).
    pub fn logical_paulis(self) -> [&'static str; 4] {
        match self {
            DictionaryName::Paper => ["ZZII", "XIXI", "XXII", "ZIZI"],
            DictionaryName::Conventional => ["XIXI", "ZZII", "XXII", "ZIZI"],
        }
    }

    /// Names of the logical observables read by the two decoded bits.
    pub fn outcome_labels(self) -> (&'static str, &'static str) {
        match self {
            DictionaryName::Paper => ("X1", "Z2"),
            DictionaryName::Conventional => ("Z1", "Z2"),
        }
    }
}

impl fmt::Display for DictionaryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DictionaryName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(DictionaryName::Paper),
            "conventional" => Ok(DictionaryName::Conventional),
            _ => Err(Error::usage(format!(
                "unknown dictionary `{s}` (expected paper or conventional)"
            ))),
        }
    }
}

/// How a logical gate is realised on the four physical qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Physical {
    /// One word per physical qubit, e.g. `"ZS"`; `"I"` means nothing.
    /// Letters are applied left to right.
    Transversal([&'static str; N]),
    /// Exchange of two physical qubit labels (0-based), no gates.
    Relabel(usize, usize),
}

impl fmt::Display for Physical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Physical::Transversal(words) => write!(f, "{}", words.join(" ⊗ ")),
            Physical::Relabel(a, b) => write!(f, "relabel q{} <-> q{}", a + 1, b + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicalGate {
    Identity,
    X1,
    Z1,
    X2,
    Z2,
    /// Control logical qubit 2, target logical qubit 1.
    Cnot21,
    /// Control logical qubit 1, target logical qubit 2.
    Cnot12,
    Swap12,
    Cz,
    /// H on both logical qubits followed by their swap.
    SwapHh,
}

impl LogicalGate {
    /// The 4×4 logical unitary, logical qubit 1 most significant.
    pub fn matrix(self) -> Matrix {
        let one = Complex64::new(1.0, 0.0);
        let perm = |f: fn(usize) -> usize| {
            let mut m = Matrix::zeros(4, 4);
            for j in 0..4 {
                m[(f(j), j)] = one;
            }
            m
        };
        let g = |k| gate_matrix(k).expect("unitary");
        let id = Matrix::identity(2, 2);
        match self {
            LogicalGate::Identity => Matrix::identity(4, 4),
            LogicalGate::X1 => g(GateKind::X).kronecker(&id),
            LogicalGate::Z1 => g(GateKind::Z).kronecker(&id),
            LogicalGate::X2 => id.kronecker(&g(GateKind::X)),
            LogicalGate::Z2 => id.kronecker(&g(GateKind::Z)),
            LogicalGate::Cnot21 => perm(|j| if j & 1 == 1 { j ^ 2 } else { j }),
            LogicalGate::Cnot12 => perm(|j| if j & 2 == 2 { j ^ 1 } else { j }),
            LogicalGate::Swap12 => g(GateKind::Swap),
            LogicalGate::Cz => g(GateKind::Cz),
            LogicalGate::SwapHh => g(GateKind::Swap) * g(GateKind::H).kronecker(&g(GateKind::H)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DictionaryEntry {
    pub label: &'static str,
    pub gate: LogicalGate,
    pub physical: Physical,
    /// Other physical strings listed for the same logical gate.
    pub alternatives: Vec<Physical>,
}

#[derive(Clone, Debug)]
pub struct LogicalDictionary {
    pub name: DictionaryName,
    pub entries: Vec<DictionaryEntry>,
}

fn entry(label: &'static str, gate: LogicalGate, physical: Physical) -> DictionaryEntry {
    DictionaryEntry {
        label,
        gate,
        physical,
        alternatives: Vec::new(),
    }
}

fn pauli_words(s: &'static str) -> Physical {
    let w: Vec<&'static str> = (0..N).map(|i| &s[i..i + 1]).collect();
    Physical::Transversal([w[0], w[1], w[2], w[3]])
}

impl LogicalDictionary {
    pub fn new(name: DictionaryName) -> Self {
        use LogicalGate as G;
        use Physical::{Relabel, Transversal};
        let mut identity = entry("II", G::Identity, pauli_words("XXXX"));
        identity.alternatives.push(pauli_words("ZZZZ"));
        let [x1, z1, x2, z2] = name.logical_paulis();
        let mut entries = vec![
            identity,
            entry("XI", G::X1, pauli_words(x1)),
            entry("ZI", G::Z1, pauli_words(z1)),
            entry("IX", G::X2, pauli_words(x2)),
            entry("IZ", G::Z2, pauli_words(z2)),
        ];
        let phase = Transversal(["S", "ZS", "ZS", "S"]);
        let hadamards = Transversal(["H"; N]);
        match name {
            DictionaryName::Paper => {
                entries.push(entry("CNOT21", G::Cnot21, phase));
                entries.push(entry("SWAP12", G::Swap12, hadamards));
            }
            DictionaryName::Conventional => {
                entries.push(entry("SWAP12*HH", G::SwapHh, hadamards));
                entries.push(entry("CZ", G::Cz, phase));
                entries.push(entry("CNOT12", G::Cnot12, Relabel(0, 1)));
                entries.push(entry("CNOT21", G::Cnot21, Relabel(0, 2)));
                entries.push(entry("SWAP12", G::Swap12, Relabel(1, 2)));
            }
        }
        LogicalDictionary { name, entries }
    }

    pub fn get(&self, label: &str) -> Result<&DictionaryEntry> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::UnknownGate {
                label: label.to_string(),
                dictionary: self.name.to_string(),
            })
    }

    pub fn labels(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.label).collect()
    }
}

fn word_kinds(word: &str) -> Result<Vec<GateKind>> {
    if word == "I" {
        return Ok(Vec::new());
    }
    word.chars()
        .map(|c| GateKind::from_name(&c.to_string(), None))
        .collect()
}

/// The 16×16 physical unitary of a dictionary realisation.
pub fn physical_matrix(physical: &Physical) -> Result<Matrix> {
    match physical {
        Physical::Transversal(words) => {
            let mut factors = Vec::with_capacity(N);
            for w in words {
                let mut m = Matrix::identity(2, 2);
                for k in word_kinds(w)? {
                    m = gate_matrix(k)? * m;
                }
                factors.push(m);
            }
            Ok(kron_all(&factors))
        }
        &Physical::Relabel(a, b) => {
            let dim = 1 << N;
            let mut m = Matrix::zeros(dim, dim);
            let (ma, mb) = (1 << (N - 1 - a), 1 << (N - 1 - b));
            for j in 0..dim {
                let i = if ((j & ma != 0) as u8) != ((j & mb != 0) as u8) {
                    j ^ ma ^ mb
                } else {
                    j
                };
                m[(i, j)] = Complex64::new(1.0, 0.0);
            }
            Ok(m)
        }
    }
}

impl Physical {
    /// Gates of a transversal word placed on `wires` (physical index of
    /// each block position). Relabels produce no gates.
    pub fn ops(&self, wires: &[usize; N], segment: Segment) -> Result<Vec<GateOp>> {
        let mut ops = Vec::new();
        if let Physical::Transversal(words) = self {
            for (pos, w) in words.iter().enumerate() {
                for k in word_kinds(w)? {
                    ops.push(GateOp::new(k, &[wires[pos]], segment));
                }
            }
        }
        Ok(ops)
    }
}

/// How far `physical` pushes codespace vectors out of the codespace.
pub fn codespace_leakage(physical: &Physical) -> Result<f64> {
    let u = physical_matrix(physical)?;
    let b = basis_matrix(DictionaryName::Paper)?;
    let ub = &u * &b;
    let inside = &b * (b.adjoint() * &ub);
    Ok((ub - inside).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// What a logical gate turns into when a circuit is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fragment {
    Gates(Vec<GateOp>),
    /// Swap the wires of two physical qubits for every later operation and
    /// for decoding.
    Relabel {
        a: usize,
        b: usize,
    },
}

/// Physical realisation of `label` on qubits 0..4, tagged `segment`.
pub fn transversal_circuit(
    label: &str,
    dictionary: DictionaryName,
    segment: Segment,
) -> Result<Fragment> {
    let dict = LogicalDictionary::new(dictionary);
    let physical = &dict.get(label)?.physical;
    match *physical {
        Physical::Transversal(_) => Ok(Fragment::Gates(physical.ops(&[0, 1, 2, 3], segment)?)),
        Physical::Relabel(a, b) => Ok(Fragment::Relabel { a, b }),
    }
}

fn project(state: &StateVector, generators: &[&str]) -> Result<Vec<Complex64>> {
    let mut v = nalgebra::DVector::from_column_slice(state.amplitudes());
    for g in generators {
        v = (&v + pauli_string_matrix(g)? * &v) / Complex64::new(2.0, 0.0);
    }
    Ok(v.iter().copied().collect())
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn normalised(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = norm(v);
    if n < 1e-9 {
        return Err(Error::usage("projection vanished"));
    }
    Ok(v.iter().map(|a| a / n).collect())
}

/// Logical |00⟩, |01⟩, |10⟩, |11⟩ of a dictionary. |00⟩ is the first basis
/// state with a nonzero projection onto the joint +1 space of the
/// stabilizers and both logical Z̄, normalised; the rest follow by X̄.
pub fn computational_basis(dictionary: DictionaryName) -> Result<[StateVector; 4]> {
    let [x1, z1, x2, z2] = dictionary.logical_paulis();
    let mut zero = None;
    for j in 0..1 << N {
        let v = project(&StateVector::basis(N, j)?, &[S1, S2, z1, z2])?;
        if norm(&v) > 1e-6 {
            zero = Some(StateVector::from_amplitudes(normalised(&v)?)?);
            break;
        }
    }
    let zero = zero.ok_or_else(|| Error::usage("empty codespace"))?;
    let with = |a: bool, b: bool| -> Result<StateVector> {
        let mut s = zero.clone();
        if b {
            apply_pauli_string(&mut s, x2)?;
        }
        if a {
            apply_pauli_string(&mut s, x1)?;
        }
        Ok(s)
    };
    Ok([
        with(false, false)?,
        with(false, true)?,
        with(true, false)?,
        with(true, true)?,
    ])
}

fn combine(a: &StateVector, b: &StateVector, sign: f64) -> Result<StateVector> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_amplitudes(
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x + y * sign) * r)
            .collect(),
    )
}

/// Labelled logical basis: `+0, +1, −0, −1` for the paper dictionary
/// (superpositions over the first logical qubit), `00…11` for the
/// conventional one.
pub fn logical_basis(dictionary: DictionaryName) -> Result<Vec<(String, StateVector)>> {
    let [s00, s01, s10, s11] = computational_basis(dictionary)?;
    Ok(match dictionary {
        DictionaryName::Paper => vec![
            ("+0".into(), combine(&s00, &s10, 1.0)?),
            ("+1".into(), combine(&s01, &s11, 1.0)?),
            ("-0".into(), combine(&s00, &s10, -1.0)?),
            ("-1".into(), combine(&s01, &s11, -1.0)?),
        ],
        DictionaryName::Conventional => vec![
            ("00".into(), s00),
            ("01".into(), s01),
            ("10".into(), s10),
            ("11".into(), s11),
        ],
    })
}

fn check_bits(bits: &str) -> Result<usize> {
    parse_bits(bits, N)
}

/// True iff the 4-bit outcome has even parity (lies in the codespace support).
pub fn accept(bits: &str) -> Result<bool> {
    Ok(check_bits(bits)?.count_ones() % 2 == 0)
}

/// Eigenvalue bits of ZZII and ZIZI for an accepted outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LogicalOutcome {
    pub first: u8,
    pub second: u8,
}

impl LogicalOutcome {
    pub fn label(self) -> String {
        format!("{}{}", self.first, self.second)
    }

    pub fn index(self) -> usize {
        (self.first as usize) << 1 | self.second as usize
    }
}

/// first = b1⊕b2, second = b1⊕b3. The same formula holds for both
/// dictionaries; only the names of the bits differ.
pub fn decode(bits: &str) -> Result<LogicalOutcome> {
    let v = check_bits(bits)?;
    if v.count_ones() % 2 == 1 {
        return Err(Error::Rejected(bits.to_string()));
    }
    let b = |q: usize| ((v >> (N - 1 - q)) & 1) as u8;
    Ok(LogicalOutcome {
        first: b(0) ^ b(1),
        second: b(0) ^ b(2),
    })
}

/// Residuals from checking one dictionary entry.
#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub dictionary: DictionaryName,
    pub label: &'static str,
    pub physical: String,
    /// Largest entry of the part of `U·B` outside the codespace.
    pub leakage: f64,
    /// Max-entry distance between the restricted and the logical unitary
    /// after fitting a global phase.
    pub phase_residual: f64,
    pub pass: bool,
}

fn basis_matrix(dictionary: DictionaryName) -> Result<Matrix> {
    let basis = computational_basis(dictionary)?;
    let mut b = Matrix::zeros(1 << N, 4);
    for (c, s) in basis.iter().enumerate() {
        for (r, a) in s.amplitudes().iter().enumerate() {
            b[(r, c)] = *a;
        }
    }
    Ok(b)
}

/// Checks that `physical` maps the codespace to itself and acts on it as
/// `gate` up to a global phase.
pub fn check_realisation(
    dictionary: DictionaryName,
    label: &'static str,
    gate: LogicalGate,
    physical: &Physical,
    tol: f64,
) -> Result<EntryCheck> {
    let u = physical_matrix(physical)?;
    let b = basis_matrix(dictionary)?;
    let ub = &u * &b;
    let restricted = b.adjoint() * &ub;
    let leakage = (&ub - &b * &restricted)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let residual = phase_residual(&restricted, &gate.matrix())?;
    Ok(EntryCheck {
        dictionary,
        label,
        physical: physical.to_string(),
        leakage,
        phase_residual: residual,
        pass: leakage <= tol && residual <= tol,
    })
}

/// Full residual report for a dictionary entry and its alternatives.
pub fn check_dictionary_entry(
    label: &str,
    dictionary: DictionaryName,
    tol: f64,
) -> Result<Vec<EntryCheck>> {
    let dict = LogicalDictionary::new(dictionary);
    let e = dict.get(label)?;
    std::iter::once(&e.physical)
        .chain(&e.alternatives)
        .map(|p| check_realisation(dictionary, e.label, e.gate, p, tol))
        .collect()
}

/// True iff every listed realisation of `label` passes at `tol`. Unknown
/// labels are simply false.
pub fn verify_dictionary_entry(label: &str, dictionary: DictionaryName, tol: f64) -> bool {
    check_dictionary_entry(label, dictionary, tol)
        .map(|v| v.iter().all(|c| c.pass))
        .unwrap_or(false)
}

/// Checks every entry of a dictionary.
pub fn verify_dictionary(dictionary: DictionaryName, tol: f64) -> Result<Vec<EntryCheck>> {
    let dict = LogicalDictionary::new(dictionary);
    let mut out = Vec::new();
    for e in &dict.entries {
        out.extend(check_dictionary_entry(e.label, dictionary, tol)?);
    }
    Ok(out)
}
