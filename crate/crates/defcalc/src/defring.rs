//! The pro-representing deformation ring at a truncation order, its
//! universal Maurer-Cartan element, the universal derivation on the
//! cohomology of the module, cohomology jump ideals and the
//! weight-grading report.

use crate::artin::{
    graded_pieces, hilbert_data, ideal_generated, minor_ideal, quotient_by_ideal, ArtinAlgebra,
    ArtinError, Elem, GradedPieces, Ideal, TruncatedFreeAlgebra, DEFAULT_MINOR_CAP,
};
use crate::exactalg::Mat;
use crate::homalg::GradedSpace;
use crate::linf::{
    d_omega, degree_components, mc_residual, pair_to_sum, LInfinityAlgebra, LInfinityModule,
};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DefringError {
    #[error("the algebra has nonzero components in degrees <= 0 (degree {0})")]
    NonPositiveDegrees(i32),
    #[error("arity bound {have} too small for truncation order {need}")]
    ArityTooSmall { need: usize, have: usize },
    #[error(transparent)]
    Artin(#[from] ArtinError),
}

/// The truncated deformation ring `R_n = T_n / I_MC` with its universal
/// Maurer-Cartan element.
#[derive(Clone, Debug)]
pub struct DeformationRing {
    /// Free truncated presentation `T_n` on generators dual to `C^1`.
    pub presentation: TruncatedFreeAlgebra,
    /// Generators of the Maurer-Cartan relation ideal inside `T_n`:
    /// the `C^2` components of the residual of the generic element.
    pub relations: Vec<Elem>,
    /// The quotient `R_n` with its projection from `T_n`.
    pub ring: ArtinAlgebra,
    pub proj: Mat,
    /// Universal element: coefficients over the `C^1` basis, in `R_n`.
    pub omega_u: Vec<Elem>,
    pub order: usize,
}

/// `H(M) \otimes R_n` with the universal derivation, as matrices over
/// the ring per degree.
#[derive(Clone, Debug)]
pub struct UniversalComplex {
    pub ring: ArtinAlgebra,
    pub space: GradedSpace,
    /// `d_u^j : (H M)^j \otimes R -> (H M)^{j+1} \otimes R`.
    pub d: BTreeMap<i32, Vec<Vec<Elem>>>,
}

impl UniversalComplex {
    pub fn d_matrix(&self, j: i32) -> Vec<Vec<Elem>> {
        match self.d.get(&j) {
            Some(m) => m.clone(),
            None => {
                let rows = self.space.dim(j + 1);
                let cols = self.space.dim(j);
                (0..rows)
                    .map(|_| (0..cols).map(|_| self.ring.zero()).collect())
                    .collect()
            }
        }
    }

    /// `d_u \circ d_u = 0` over the ring, degree by degree.
    pub fn is_complex(&self) -> bool {
        for j in self.space.degrees() {
            let a = self.d_matrix(j);
            let b = self.d_matrix(j + 1);
            let rows = self.space.dim(j + 2);
            let mid = self.space.dim(j + 1);
            let cols = self.space.dim(j);
            for r in 0..rows {
                for c in 0..cols {
                    let mut acc = self.ring.zero();
                    for k in 0..mid {
                        acc = self.ring.add(&acc, &self.ring.mul(&b[r][k], &a[k][c]));
                    }
                    if !self.ring.is_zero_elem(&acc) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Build `R_n` from an L-infinity algebra concentrated in positive
/// degrees with finite-dimensional `C^1`.
pub fn deformation_ring(
    c: &LInfinityAlgebra,
    order: usize,
) -> Result<DeformationRing, DefringError> {
    for n in c.space.degrees() {
        if n <= 0 && c.space.dim(n) > 0 {
            return Err(DefringError::NonPositiveDegrees(n));
        }
    }
    if c.arity_bound < order {
        return Err(DefringError::ArityTooSmall {
            need: order,
            have: c.arity_bound,
        });
    }
    let b = c.space.dim(1);
    let gen_names: Vec<String> = (1..=b).map(|j| format!("x{j}")).collect();
    // dual generators carry the negated weights, making the universal
    // element weight 0
    let gen_weights: Vec<i64> = (0..b).map(|j| -c.space.weight(1, j)).collect();
    let presentation = TruncatedFreeAlgebra::new(gen_names, gen_weights, order);
    let t = presentation.algebra.clone();
    let generic: Vec<Elem> = (0..b).map(|j| presentation.generator_elem(j)).collect();
    let residual = mc_residual(c, &t, &generic, order);
    let relations = degree_components(&c.space, &residual, 2)
        .into_iter()
        .filter(|e| !t.is_zero_elem(e))
        .collect::<Vec<_>>();
    let ideal = ideal_generated(&t, &relations);
    // relations live in m^2, so the quotient is never the zero ring
    let (ring, proj) = quotient_by_ideal(&t, &ideal)?;
    let omega_u: Vec<Elem> = generic.iter().map(|g| proj.apply(g)).collect();
    Ok(DeformationRing {
        presentation,
        relations,
        ring,
        proj,
        omega_u,
        order,
    })
}

/// Universal derivation `d_u = d_{omega_u}` on `H(M) \otimes R_n`.
pub fn universal_derivation(
    c: &LInfinityAlgebra,
    hm: &LInfinityModule,
    def: &DeformationRing,
) -> UniversalComplex {
    let (sum, split) = pair_to_sum(c, hm);
    let arity = sum.arity_bound;
    let d = d_omega(&sum, &split, &def.ring, &def.omega_u, arity);
    UniversalComplex {
        ring: def.ring.clone(),
        space: hm.space.clone(),
        d,
    }
}

/// Jump ideal `J_k^i` of the universal complex: the minors of size
/// `r_i - k + 1` of the block map `d^{i-1} + d^i`; size <= 0 gives the
/// unit ideal (the jump condition fails everywhere).
pub fn jump_ideal(
    u: &UniversalComplex,
    i: i32,
    k: usize,
    cap: u128,
) -> Result<Ideal, DefringError> {
    let r_i = u.space.dim(i) as i64;
    let size = r_i - k as i64 + 1;
    // block matrix of d^{i-1} and d^i: rows (H M)^i + (H M)^{i+1},
    // columns (H M)^{i-1} + (H M)^i, off-diagonal blocks zero
    let a = u.d_matrix(i - 1);
    let b = u.d_matrix(i);
    let rows_a = u.space.dim(i);
    let rows_b = u.space.dim(i + 1);
    let cols_a = u.space.dim(i - 1);
    let cols_b = u.space.dim(i);
    let mut block: Vec<Vec<Elem>> = Vec::with_capacity(rows_a + rows_b);
    for r in 0..rows_a {
        let mut row: Vec<Elem> = Vec::with_capacity(cols_a + cols_b);
        for cc in 0..cols_a {
            row.push(a[r][cc].clone());
        }
        for _ in 0..cols_b {
            row.push(u.ring.zero());
        }
        block.push(row);
    }
    for r in 0..rows_b {
        let mut row: Vec<Elem> = Vec::with_capacity(cols_a + cols_b);
        for _ in 0..cols_a {
            row.push(u.ring.zero());
        }
        for cc in 0..cols_b {
            row.push(b[r][cc].clone());
        }
        block.push(row);
    }
    Ok(minor_ideal(&u.ring, &block, size, cap)?)
}

/// Outcome of the weight-grading verification.
#[derive(Clone, Debug)]
pub struct GradedReport {
    /// Witness element if the Maurer-Cartan ideal is inhomogeneous.
    pub imc_witness: Option<Elem>,
    /// Multiplication-table entries of `R_n` violating additivity of
    /// weights, as (i, j, output index).
    pub ring_violations: Vec<(usize, usize, usize)>,
    /// Generators of the universal element that are not concentrated in
    /// the dual weight (so the element is not of total weight 0).
    pub omega_u_violations: Vec<usize>,
    /// Per supplied jump ideal: witness if not weight-homogeneous.
    pub jump_witnesses: Vec<((i32, usize), Elem)>,
}

impl GradedReport {
    pub fn passed(&self) -> bool {
        self.imc_witness.is_none()
            && self.ring_violations.is_empty()
            && self.omega_u_violations.is_empty()
            && self.jump_witnesses.is_empty()
    }
}

/// Verify that the whole construction is weight-homogeneous: the
/// relation ideal, the induced grading on `R_n`, the weight of the
/// universal element and every supplied jump ideal.
pub fn graded_report(
    c_space: &GradedSpace,
    def: &DeformationRing,
    ideals: &[(i32, usize, Ideal)],
) -> Result<GradedReport, DefringError> {
    let t = &def.presentation.algebra;
    let imc = ideal_generated(t, &def.relations);
    let imc_witness = match graded_pieces(t, &imc)? {
        GradedPieces::Homogeneous(_) => None,
        GradedPieces::Witness(w) => Some(w),
    };
    // multiplication of R_n adds weights
    let r = &def.ring;
    let mut ring_violations = Vec::new();
    if let Some(w) = &r.weights {
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                let prod = r.mul(&r.basis_elem(i), &r.basis_elem(j));
                for (k, x) in prod.iter().enumerate() {
                    if !x.is_zero() && w[k] != w[i] + w[j] {
                        ring_violations.push((i, j, k));
                    }
                }
            }
        }
    }
    // omega_u component j must be homogeneous of weight -weight(e_j)
    let mut omega_u_violations = Vec::new();
    if let Some(w) = &r.weights {
        for (j, coeff) in def.omega_u.iter().enumerate() {
            let target = -c_space.weight(1, j);
            for (k, x) in coeff.iter().enumerate() {
                if !x.is_zero() && w[k] != target {
                    omega_u_violations.push(j);
                    break;
                }
            }
        }
    }
    let mut jump_witnesses = Vec::new();
    for (i, k, ideal) in ideals {
        match graded_pieces(r, ideal)? {
            GradedPieces::Homogeneous(_) => {}
            GradedPieces::Witness(w) => jump_witnesses.push(((*i, *k), w)),
        }
    }
    Ok(GradedReport {
        imc_witness,
        ring_violations,
        omega_u_violations,
        jump_witnesses,
    })
}

/// Convenience: hilbert data of the ring and of a list of ideals.
pub fn ring_hilbert_data(
    def: &DeformationRing,
    ideals: &[(i32, usize, Ideal)],
) -> (Vec<(usize, i64, usize)>, Vec<((i32, usize), Vec<(usize, i64, usize)>)>) {
    let base = hilbert_data(&def.ring, None);
    let per = ideals
        .iter()
        .map(|(i, k, ideal)| ((*i, *k), hilbert_data(&def.ring, Some(ideal))))
        .collect();
    (base, per)
}

/// Default minor cap re-exported for callers of [`jump_ideal`].
pub const MINOR_CAP: u128 = DEFAULT_MINOR_CAP;
