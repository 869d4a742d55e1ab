//! On-disk formats: the JSON measure document and the whitespace-separated
//! matrix text form used by fixtures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::measure::DiscreteMeasure;
use crate::spd::SpdMatrix;

/// Loader-side slack on the total weight; inside that slack the weights are
/// renormalized so the in-memory invariant holds exactly.
pub const LOAD_WEIGHT_TOL: f64 = 1e-9;

#[derive(Serialize, Deserialize)]
struct MeasureDoc {
    dim: usize,
    atoms: Vec<AtomDoc>,
}

#[derive(Serialize, Deserialize)]
struct AtomDoc {
    weight: f64,
    matrix: Vec<Vec<f64>>,
}

/// Serializes a measure as a JSON document with `dim` and an `atoms` array of
/// `{weight, matrix}` records.
pub fn measure_to_json(mu: &DiscreteMeasure) -> String {
    let doc = MeasureDoc {
        dim: mu.dim(),
        atoms: mu
            .atoms()
            .iter()
            .zip(mu.weights())
            .map(|(a, &w)| AtomDoc {
                weight: w,
                matrix: (0..a.dim())
                    .map(|i| (0..a.dim()).map(|j| a.get(i, j)).collect())
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("measure serialization cannot fail")
}

/// Parses a measure document. Matrices are symmetrized and validated as
/// positive definite; weights must sum to one within `LOAD_WEIGHT_TOL` and
/// are then renormalized.
pub fn measure_from_json(text: &str) -> Result<DiscreteMeasure> {
    let doc: MeasureDoc =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("measure parse: {e}")))?;
    if doc.atoms.is_empty() {
        return Err(Error::invalid("measure document has no atoms"));
    }
    let total: f64 = doc.atoms.iter().map(|a| a.weight).sum();
    if (total - 1.0).abs() > LOAD_WEIGHT_TOL {
        return Err(Error::invalid(format!(
            "weights sum to {total}, expected 1 within {LOAD_WEIGHT_TOL}"
        )));
    }
    let mut atoms = Vec::with_capacity(doc.atoms.len());
    let mut weights = Vec::with_capacity(doc.atoms.len());
    for (idx, atom) in doc.atoms.iter().enumerate() {
        if atom.matrix.len() != doc.dim || atom.matrix.iter().any(|r| r.len() != doc.dim) {
            return Err(Error::invalid(format!(
                "atom {idx} is not a {0}x{0} matrix",
                doc.dim
            )));
        }
        if !(atom.weight > 0.0) {
            return Err(Error::invalid(format!(
                "atom {idx} has non-positive weight {}",
                atom.weight
            )));
        }
        atoms.push(SpdMatrix::from_rows(&atom.matrix)?);
        weights.push(atom.weight / total);
    }
    DiscreteMeasure::new(atoms, weights)
}

/// Writes a matrix as whitespace-separated reals, row-major, one row per
/// line, with 17 significant digits (round-trip exact for doubles).
pub fn matrix_to_text(m: &SymMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim()).map(|j| fmt_f64(m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses whitespace-separated reals into a positive definite matrix; the
/// dimension is the square root of the token count.
pub fn spd_from_text(text: &str) -> Result<SpdMatrix> {
    let values: Vec<f64> = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad matrix entry {tok:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.is_empty() {
        return Err(Error::invalid("matrix text is empty"));
    }
    let dim = (values.len() as f64).sqrt().round() as usize;
    if dim * dim != values.len() {
        return Err(Error::invalid(format!(
            "{} entries do not form a square matrix",
            values.len()
        )));
    }
    let rows: Vec<Vec<f64>> = (0..dim)
        .map(|i| values[i * dim..(i + 1) * dim].to_vec())
        .collect();
    SpdMatrix::from_rows(&rows)
}

/// 17-significant-digit formatting, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_measure, SplitMix64, WeightMode};
    use crate::spd::riem_dist;

    #[test]
    fn measure_roundtrip() {
        let mut rng = SplitMix64::new(1);
        let mu = random_measure(3, 4, 0.7, WeightMode::Dirichlet, &mut rng).unwrap();
        let text = measure_to_json(&mu);
        let back = measure_from_json(&text).unwrap();
        assert_eq!(back.len(), mu.len());
        for (a, b) in mu.atoms().iter().zip(back.atoms()) {
            assert!(riem_dist(a, b).unwrap() < 1e-12);
        }
        for (wa, wb) in mu.weights().iter().zip(back.weights()) {
            assert!((wa - wb).abs() < 1e-14);
        }
    }

    #[test]
    fn loader_renormalizes_within_slack() {
        let text = r#"{
            "dim": 1,
            "atoms": [
                {"weight": 0.5000000001, "matrix": [[2.0]]},
                {"weight": 0.5, "matrix": [[8.0]]}
            ]
        }"#;
        let mu = measure_from_json(text).unwrap();
        let total: f64 = mu.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn loader_rejects_bad_documents() {
        assert!(measure_from_json("{").is_err());
        assert!(measure_from_json(r#"{"dim": 1, "atoms": []}"#).is_err());
        // weight sum off by more than the slack
        assert!(measure_from_json(
            r#"{"dim": 1, "atoms": [{"weight": 0.6, "matrix": [[1.0]]}]}"#
        )
        .is_err());
        // not positive definite
        assert!(measure_from_json(
            r#"{"dim": 1, "atoms": [{"weight": 1.0, "matrix": [[-1.0]]}]}"#
        )
        .is_err());
        // ragged matrix
        assert!(measure_from_json(
            r#"{"dim": 2, "atoms": [{"weight": 1.0, "matrix": [[1.0, 0.0], [0.0]]}]}"#
        )
        .is_err());
    }

    #[test]
    fn matrix_text_roundtrip() {
        let m = SpdMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let text = matrix_to_text(m.sym());
        let back = spd_from_text(&text).unwrap();
        assert!(riem_dist(&m, &back).unwrap() < 1e-15);
        assert!(spd_from_text("1 2 3").is_err());
        assert!(spd_from_text("").is_err());
        assert!(spd_from_text("a b c d").is_err());
    }

    #[test]
    fn fmt_roundtrips_doubles() {
        for x in [
            std::f64::consts::PI,
            1.0 / 3.0,
            4.9e-324,
            -2.2250738585072014e-308,
            12345.678901234567,
        ] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
