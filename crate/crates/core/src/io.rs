//! JSON encodings for states, witnesses and reports.
//!
//! Matrices are arrays of rows, each row an array of `[re, im]` pairs. Every
//! float is written with 17 significant digits so that files round-trip
//! bit-for-bit.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::numerics::{Complex64, ComplexMatrix};
use crate::states::{BipartiteState, MultiQubitState};
use crate::witness::{Witness, WitnessKind};

/// `serde_json` formatter writing floats as `{:.16e}`; structure is
/// delegated to the wrapped formatter.
pub struct Sig17<F>(pub F);

fn write_sig17<W: ?Sized + Write>(writer: &mut W, value: f64) -> std::io::Result<()> {
    if value.is_finite() {
        write!(writer, "{value:.16e}")
    } else {
        // serde_json writes null for non-finite floats
        writer.write_all(b"null")
    }
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> std::io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Sig17<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write_sig17(writer, value)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        write_sig17(writer, value as f64)
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

/// Compact JSON with 17-digit floats.
pub fn to_json_compact<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17(CompactFormatter));
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// Indented JSON with 17-digit floats.
pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, Sig17(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<ComplexMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("matrix rows must be non-empty and of equal length".into()));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    ComplexMatrix::new(n, cols, data)
}

/// A state as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Bipartite(BipartiteState),
    MultiQubit(MultiQubitState),
}

impl StateFile {
    pub fn matrix(&self) -> &ComplexMatrix {
        match self {
            StateFile::Bipartite(s) => s.rho(),
            StateFile::MultiQubit(s) => s.rho(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateFile::Bipartite(_) => "bipartite",
            StateFile::MultiQubit(_) => "multiqubit",
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    matrix: MatrixJson,
}

pub fn state_to_json(s: &StateFile) -> Result<String> {
    let (d, n) = match s {
        StateFile::Bipartite(b) => (Some(b.dim()), None),
        StateFile::MultiQubit(q) => (None, Some(q.qubits())),
    };
    to_json_compact(&StateJson {
        kind: s.kind().into(),
        d,
        n,
        matrix: matrix_to_json(s.matrix()),
    })
}

/// Parses a state file and validates it as a density matrix at `tol`.
///
/// Malformed JSON or a wrong layout gives [`Error::Parse`]; a well-formed
/// matrix that is not a density matrix gives [`Error::Validation`].
pub fn parse_state(text: &str, tol: f64) -> Result<StateFile> {
    let raw: StateJson = serde_json::from_str(text)?;
    let m = matrix_from_json(&raw.matrix)?;
    let validated = |r: Result<StateFile>| {
        r.map_err(|e| match e {
            Error::Parse(_) => e,
            other => Error::Validation(other.to_string()),
        })
    };
    match (raw.kind.as_str(), raw.d, raw.n) {
        ("bipartite", Some(d), None) => validated(
            BipartiteState::with_tolerance(d, m, tol).map(StateFile::Bipartite),
        ),
        ("multiqubit", None, Some(n)) => validated(
            MultiQubitState::with_tolerance(n, m, tol).map(StateFile::MultiQubit),
        ),
        ("bipartite", ..) => Err(Error::Parse("bipartite states need `d` and no `n`".into())),
        ("multiqubit", ..) => Err(Error::Parse("multiqubit states need `n` and no `d`".into())),
        (other, ..) => Err(Error::Parse(format!("unknown state kind `{other}`"))),
    }
}

pub fn load_state(path: &Path, tol: f64) -> Result<StateFile> {
    parse_state(&std::fs::read_to_string(path)?, tol)
}

pub fn save_state(path: &Path, s: &StateFile) -> Result<()> {
    std::fs::write(path, state_to_json(s)? + "\n")?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessJson {
    kind: String,
    constant: f64,
    matrix: MatrixJson,
}

pub fn witness_to_json(w: &Witness) -> Result<String> {
    to_json_compact(&WitnessJson {
        kind: w.kind().as_str().into(),
        constant: w.constant(),
        matrix: matrix_to_json(w.operator()),
    })
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    let raw: WitnessJson = serde_json::from_str(text)?;
    let kind = WitnessKind::parse(&raw.kind)?;
    Witness::new(matrix_from_json(&raw.matrix)?, raw.constant, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::random::random_symmetric_state;
    use crate::states::{builtin_rho33, smolin_state};
    use crate::witness::WitnessKind;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json_compact(&[0.1f64, -2.5e-300, 1.0]).unwrap();
        assert_eq!(
            s,
            "[1.0000000000000001e-1,-2.5000000000000000e-300,1.0000000000000000e0]"
        );
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, -2.5e-300, 1.0]);
    }

    #[test]
    fn states_round_trip_exactly() {
        for s in [
            StateFile::Bipartite(builtin_rho33()),
            StateFile::Bipartite(random_symmetric_state(4, 3).unwrap()),
            StateFile::MultiQubit(smolin_state(2).unwrap()),
        ] {
            let text = state_to_json(&s).unwrap();
            let back = parse_state(&text, 1e-9).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn witness_round_trip() {
        let m = crate::states::flip_operator(2).unwrap();
        let w = Witness::new(m, 1.0 / 3.0, WitnessKind::SymmetricMixed).unwrap();
        assert_eq!(parse_witness(&witness_to_json(&w).unwrap()).unwrap(), w);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_state("{not json", 1e-9), Err(Error::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"kind":"qutrit","d":3,"matrix":[[[1,0]]]}"#, 1e-9),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_state(r#"{"kind":"bipartite","matrix":[[[1,0]]]}"#, 1e-9),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_state(r#"{"kind":"bipartite","d":2,"matrix":[[[1,0]],[[1,0],[0,0]]]}"#, 1e-9),
            Err(Error::Parse(_))
        ));
        // trace 2
        let bad = r#"{"kind":"bipartite","d":2,"matrix":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
        assert!(matches!(parse_state(bad, 1e-9), Err(Error::Validation(_))));
    }
}
