//! Matrices of Fock-space operators in the orthonormalized partition basis.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{basis_norm_sq, partitions_up_to, FockVector, Partition};
use crate::error::{Error, Result};

/// Indexed partition basis of levels `≤ cutoff`, with `e_λ = J_{-λ}Ω/‖J_{-λ}Ω‖`.
#[derive(Clone, Debug)]
pub struct Basis {
    cutoff: u32,
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    norms: Vec<f64>,
}

impl Basis {
    pub fn new(cutoff: u32) -> Self {
        let parts = partitions_up_to(cutoff);
        let index = parts
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let norms = parts
            .iter()
            .map(|p| (basis_norm_sq(p) as f64).sqrt())
            .collect();
        Basis {
            cutoff,
            parts,
            index,
            norms,
        }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn partition(&self, i: usize) -> &Partition {
        &self.parts[i]
    }

    pub fn level(&self, i: usize) -> u32 {
        self.parts[i].level()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Number of basis vectors of level `≤ level` (they come first).
    pub fn count_up_to(&self, level: u32) -> usize {
        self.parts.partition_point(|p| p.level() <= level)
    }

    /// Normalized basis vector `e_i`.
    pub fn unit(&self, i: usize) -> FockVector {
        FockVector::basis(self.cutoff, self.parts[i].clone())
            .expect("basis partitions respect the cutoff")
            .scale(Complex64::new(1.0 / self.norms[i], 0.0))
    }

    /// Orthonormal coordinates of `v`.
    pub fn coords(&self, v: &FockVector) -> Result<DVector<Complex64>> {
        if v.cutoff() != self.cutoff {
            return Err(Error::CutoffMismatch(self.cutoff, v.cutoff()));
        }
        let mut x = DVector::zeros(self.len());
        for (p, a) in v.amplitudes() {
            let i = self.index[p];
            x[i] = a * self.norms[i];
        }
        Ok(x)
    }

    pub fn vector(&self, x: &DVector<Complex64>) -> FockVector {
        let amps = x
            .iter()
            .enumerate()
            .map(|(i, a)| (self.parts[i].clone(), a / self.norms[i]));
        FockVector::from_amplitudes(self.cutoff, amps).expect("basis partitions respect the cutoff")
    }
}

/// Row-major sparse matrix.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseOperator {
    /// Matrix of a linear map on the truncated space, assembled column by
    /// column from its action on normalized basis vectors.
    pub fn from_action(basis: &Basis, op: impl Fn(&FockVector) -> FockVector) -> Self {
        let mut rows = vec![Vec::new(); basis.len()];
        for j in 0..basis.len() {
            let image = op(&basis.unit(j));
            let x = basis.coords(&image).expect("operator preserves the cutoff");
            for (i, a) in x.iter().enumerate() {
                if *a != Complex64::new(0.0, 0.0) {
                    rows[i].push((j, *a));
                }
            }
        }
        SparseOperator { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(
            self.dim(),
            self.rows
                .iter()
                .map(|r| r.iter().map(|&(j, a)| a * x[j]).sum::<Complex64>()),
        )
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, a) in r {
                m[(i, j)] = a;
            }
        }
        m
    }

    /// Upper bound `√(‖A‖₁‖A‖_∞)` on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let inf = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(_, a)| a.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut cols = vec![0.0; self.dim()];
        for r in &self.rows {
            for &(j, a) in r {
                cols[j] += a.norm();
            }
        }
        let one = cols.into_iter().fold(0.0, f64::max);
        (one * inf).sqrt()
    }
}

/// `e^{tA}x` by a scaled Taylor series applied to the vector, never forming
/// the exponential.
pub fn expm_action(a: &SparseOperator, t: Complex64, x: &DVector<Complex64>) -> DVector<Complex64> {
    let steps = (t.norm() * a.norm_bound()).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut y = x.clone();
    for _ in 0..steps {
        let mut term = y.clone();
        let mut sum = y.clone();
        for k in 1..=60 {
            term = a.apply(&term) * (h / k as f64);
            sum += &term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        y = sum;
    }
    y
}

/// Dense matrix exponential (Padé approximant with scaling and squaring).
pub fn expm_dense(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.exp()
}
