//! Finitely supported probability measures on the positive definite cone and
//! the push-forward maps that generate geometric mean flows.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::spd::{geodesic, recenter, riem_dist, SpdMatrix};

/// Absolute slack allowed on the total weight of a measure.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Mixture components below this weight are dropped.
pub const WEIGHT_DROP_TOL: f64 = 1e-15;

/// Probability measure with finite support: positive weights summing to one
/// attached to positive definite atoms of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<SpdMatrix>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<SpdMatrix>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("a measure needs at least one atom"));
        }
        if atoms.len() != weights.len() {
            return Err(Error::invalid(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        let dim = atoms[0].dim();
        if atoms.iter().any(|a| a.dim() != dim) {
            return Err(Error::invalid("atoms must share one dimension"));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::invalid("weights must be strictly positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(DiscreteMeasure { atoms, weights })
    }

    /// Point mass at A.
    pub fn dirac(atom: SpdMatrix) -> Self {
        DiscreteMeasure {
            atoms: vec![atom],
            weights: vec![1.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn atoms(&self) -> &[SpdMatrix] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atom(&self, i: usize) -> &SpdMatrix {
        &self.atoms[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    fn map_atoms(&self, f: impl Fn(&SpdMatrix) -> Result<SpdMatrix>) -> Result<Self> {
        let atoms = self.atoms.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(DiscreteMeasure {
            atoms,
            weights: self.weights.clone(),
        })
    }

    /// Push-forward under A ↦ A^t. At t = 0 every atom maps to the identity.
    pub fn power_pushforward(&self, t: f64) -> Result<Self> {
        self.map_atoms(|a| a.pow(t))
    }

    /// Push-forward under A ↦ X #_t A, the geometric mean flow at time t.
    ///
    /// At t = 0 every atom becomes X (the weight vector keeps its shape), at
    /// t = 1 the measure is unchanged, and flowing from the identity matches
    /// `power_pushforward`.
    pub fn geometric_flow(&self, x: &SpdMatrix, t: f64) -> Result<Self> {
        if x.dim() != self.dim() {
            return Err(Error::invalid("flow base point dimension mismatch"));
        }
        self.map_atoms(|a| geodesic(x, a, t))
    }

    /// Push-forward under A ↦ X^{-1/2} A X^{-1/2}.
    pub fn congruence_pushforward(&self, x: &SpdMatrix) -> Result<Self> {
        if x.dim() != self.dim() {
            return Err(Error::invalid("congruence base point dimension mismatch"));
        }
        self.map_atoms(|a| recenter(x, a))
    }

    /// Convex combination a·self + (1−a)·other as a concatenated measure.
    /// Components whose scaled weight falls below `WEIGHT_DROP_TOL` are
    /// dropped; coincident atoms are never merged.
    pub fn mixture(&self, other: &DiscreteMeasure, a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::invalid(format!(
                "mixture coefficient {a} outside [0, 1]"
            )));
        }
        if self.dim() != other.dim() {
            return Err(Error::invalid("mixture dimension mismatch"));
        }
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        for (atom, w) in self.atoms.iter().zip(&self.weights) {
            let scaled = a * w;
            if scaled > WEIGHT_DROP_TOL {
                atoms.push(atom.clone());
                weights.push(scaled);
            }
        }
        for (atom, w) in other.atoms.iter().zip(&other.weights) {
            let scaled = (1.0 - a) * w;
            if scaled > WEIGHT_DROP_TOL {
                atoms.push(atom.clone());
                weights.push(scaled);
            }
        }
        DiscreteMeasure::new(atoms, weights)
    }

    /// First moment ∫ d(A, Y) dμ(A), a finite weighted sum here.
    pub fn moment_integral(&self, y: &SpdMatrix) -> Result<f64> {
        if y.dim() != self.dim() {
            return Err(Error::invalid("moment base point dimension mismatch"));
        }
        let mut total = 0.0;
        for (atom, w) in self.atoms.iter().zip(&self.weights) {
            total += w * riem_dist(atom, y)?;
        }
        Ok(total)
    }

    /// Weighted mean of atom logarithms; its exponential is the
    /// log-Euclidean mean.
    pub fn log_mean(&self) -> SymMatrix {
        let mut acc = SymMatrix::zeros(self.dim());
        for (atom, w) in self.atoms.iter().zip(&self.weights) {
            acc = &acc + &atom.log().scaled(*w);
        }
        acc
    }
}
