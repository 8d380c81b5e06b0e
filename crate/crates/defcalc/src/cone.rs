//! The L-infinity cone of an augmentation of a DG Lie algebra towards a
//! Lie algebra, and the induced L-infinity module structure on a DG
//! module, obtained by running the cone construction on the pair-sum
//! Lie algebra and splitting the result.
//!
//! The higher cone operations carry Bernoulli-number constants whose
//! signs are fixed by this implementation's convention and certified by
//! the codifferential axioms (`check_axioms`) on a nonabelian fixture;
//! any convention passing that certification differs from this one by an
//! isomorphism of the cone.

use crate::exactalg::{Mat, Matrix, Rat};
use crate::homalg::{CochainComplex, GradedSpace};
use crate::linf::{
    dg_pair_sum, sum_to_pair, DgLieAlgebra, DgModule, LInfinityAlgebra,
    LInfinityModule, LinfError, Splitting,
};
use itertools::Itertools;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConeError {
    #[error("epsilon is not a morphism of DG Lie algebras: {0}")]
    NotAMorphism(String),
    #[error("epsilon is not weight-preserving at entry ({0},{1})")]
    NotWeightStrict(usize, usize),
    #[error("target bracket entry ({0},{1}) violates antisymmetry")]
    BadTargetBracket(usize, usize),
    #[error("module is not bounded above")]
    Unbounded,
    #[error(transparent)]
    Linf(#[from] LinfError),
}

/// A finite-dimensional Lie algebra in degree 0 with weighted basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub labels: Vec<String>,
    pub weights: Vec<i64>,
    /// Keyed by pairs i < j; the value `[e_i, e_j]` is dense over g.
    bracket: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl LieAlgebra {
    pub fn new(
        labels: Vec<String>,
        weights: Vec<i64>,
        entries: Vec<((usize, usize), Vec<Rat>)>,
    ) -> Result<Self, ConeError> {
        assert_eq!(labels.len(), weights.len());
        let dim = labels.len();
        let mut bracket: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
        for ((i, j), v) in entries {
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            if i == j {
                return Err(ConeError::BadTargetBracket(i, j));
            }
            let (key, val) = if i < j {
                ((i, j), v)
            } else {
                ((j, i), v.iter().map(|x| -x.clone()).collect())
            };
            let e = bracket.entry(key).or_insert_with(|| vec![Rat::zero(); dim]);
            for (a, b) in e.iter_mut().zip(&val) {
                *a += b.clone();
            }
        }
        Ok(LieAlgebra {
            labels,
            weights,
            bracket,
        })
    }

    pub fn abelian(labels: Vec<String>, weights: Vec<i64>) -> Self {
        LieAlgebra {
            labels,
            weights,
            bracket: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        if i == j {
            return vec![Rat::zero(); self.dim()];
        }
        if i < j {
            self.bracket
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| vec![Rat::zero(); self.dim()])
        } else {
            self.bracket_basis(j, i).iter().map(|x| -x.clone()).collect()
        }
    }

    pub fn bracket_dense(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let v = self.bracket_basis(i, j);
                for (o, c) in out.iter_mut().zip(&v) {
                    *o += a.clone() * b.clone() * c.clone();
                }
            }
        }
        out
    }
}

/// An augmentation: a DG Lie map from `L` to a Lie algebra `g` in
/// degree 0, given by a matrix on the degree-0 basis.
#[derive(Clone, Debug)]
pub struct Augmentation {
    pub source: DgLieAlgebra,
    pub target: LieAlgebra,
    /// `dim g x dim L^0` matrix of epsilon.
    pub eps: Mat,
}

impl Augmentation {
    pub fn new(source: DgLieAlgebra, target: LieAlgebra, eps: Mat) -> Result<Self, ConeError> {
        let sp = &source.complex.space;
        let dim0 = sp.dim(0);
        if eps.rows() != target.dim() || eps.cols() != dim0 {
            return Err(ConeError::NotAMorphism(format!(
                "epsilon has shape {}x{}, expected {}x{}",
                eps.rows(),
                eps.cols(),
                target.dim(),
                dim0
            )));
        }
        // epsilon vanishes on boundaries from degree -1
        let dm1 = source.complex.d(-1);
        if dm1.cols() > 0 && !eps.mul(&dm1).is_zero_matrix() {
            return Err(ConeError::NotAMorphism(
                "epsilon does not kill the image of d^{-1}".into(),
            ));
        }
        // epsilon respects brackets on degree 0
        for a in 0..dim0 {
            for b in a + 1..dim0 {
                let br = source.bracket_basis(sp.global_index(0, a), sp.global_index(0, b));
                // degree-0 component of [a, b]
                let br0: Vec<Rat> = (0..dim0)
                    .map(|i| br[sp.global_index(0, i)].clone())
                    .collect();
                let lhs = eps.apply(&br0);
                let rhs = target.bracket_dense(&eps.col(a), &eps.col(b));
                if lhs != rhs {
                    return Err(ConeError::NotAMorphism(format!(
                        "epsilon[e_{a}, e_{b}] != [epsilon e_{a}, epsilon e_{b}]"
                    )));
                }
            }
        }
        if source.complex.weight_strict {
            for r in 0..eps.rows() {
                for c in 0..eps.cols() {
                    if !eps.at(r, c).is_zero() && target.weights[r] != sp.weight(0, c) {
                        return Err(ConeError::NotWeightStrict(r, c));
                    }
                }
            }
        }
        Ok(Augmentation {
            source,
            target,
            eps,
        })
    }

    pub fn eps_apply(&self, a_local: usize) -> Vec<Rat> {
        self.eps.col(a_local)
    }
}

/// The cone with its splitting markers: every degree is the matching
/// degree of `L`, except degree 1 which is `L^1` followed by `g`.
#[derive(Clone, Debug)]
pub struct ConeAlgebra {
    pub algebra: LInfinityAlgebra,
    pub complex: CochainComplex,
    /// Global `L` index -> global cone index.
    pub l_to_cone: Vec<usize>,
    /// `g` index -> global cone index.
    pub g_to_cone: Vec<usize>,
}

/// Bernoulli numbers `B_0 = 1, B_1 = -1/2, B_2 = 1/6, ...` by the
/// defining recursion.
pub fn bernoulli(upto: usize) -> Vec<Rat> {
    let mut b = vec![Rat::one()];
    for m in 1..=upto {
        // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
        let mut acc = Rat::zero();
        for (k, bk) in b.iter().enumerate() {
            let mut binom = Rat::one();
            for i in 0..k {
                binom *= Rat::from_integer(((m + 1 - i) as i64).into());
                binom /= Rat::from_integer(((i + 1) as i64).into());
            }
            acc += binom * bk.clone();
        }
        b.push(-acc / Rat::from_integer(((m + 1) as i64).into()));
    }
    b
}

fn factorial(n: usize) -> Rat {
    let mut acc = Rat::one();
    for k in 2..=n {
        acc *= Rat::from_integer((k as i64).into());
    }
    acc
}

fn cone_space(l_space: &GradedSpace, g: &LieAlgebra) -> GradedSpace {
    let n_min = l_space.n_min().min(1);
    let n_max = l_space.n_max().max(1);
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for n in n_min..=n_max {
        let mut l: Vec<String> = (0..l_space.dim(n))
            .map(|i| l_space.label(n, i).to_string())
            .collect();
        let mut w: Vec<i64> = (0..l_space.dim(n)).map(|i| l_space.weight(n, i)).collect();
        if n == 1 {
            l.extend(g.labels.iter().cloned());
            w.extend(g.weights.iter().copied());
        }
        labels.push(l);
        weights.push(w);
    }
    GradedSpace::new(n_min, labels, weights)
}

/// The Fiorenza-Manetti cone of an augmentation, with operations stored
/// up to `arity_bound`.
pub fn build_cone(aug: &Augmentation, arity_bound: usize) -> Result<ConeAlgebra, ConeError> {
    let lsp = &aug.source.complex.space;
    let g = &aug.target;
    let space = cone_space(lsp, g);
    let l_to_cone: Vec<usize> = (0..lsp.total_dim())
        .map(|gl| {
            let (n, i) = lsp.locate(gl);
            space.global_index(n, i)
        })
        .collect();
    let g_to_cone: Vec<usize> = (0..g.dim())
        .map(|j| space.global_index(1, lsp.dim(1) + j))
        .collect();

    // Differential: d_L everywhere, with epsilon stacked under d^0.
    let mut d = BTreeMap::new();
    for n in space.degrees() {
        let rows = space.dim(n + 1);
        let cols = space.dim(n);
        let mut m = Matrix::zero(rows, cols);
        let dl = aug.source.complex.d(n);
        for r in 0..dl.rows() {
            for c in 0..dl.cols() {
                *m.at_mut(r, c) = dl.at(r, c).clone();
            }
        }
        if n == 0 {
            for r in 0..g.dim() {
                for c in 0..cols {
                    *m.at_mut(lsp.dim(1) + r, c) = aug.eps.at(r, c).clone();
                }
            }
        }
        d.insert(n, m);
    }
    let complex = CochainComplex::new(space.clone(), d, aug.source.complex.weight_strict)
        .map_err(|e| ConeError::NotAMorphism(format!("cone differential invalid: {e}")))?;

    let arity = arity_bound.max(2);
    let mut alg = from_cone_complex(&complex, arity);
    let dim = space.total_dim();

    // q_2 from the bracket of L (decalage sign (-1)^{deg x_1}).
    for (&(i, j), v) in aug.source.bracket_entries() {
        let di = lsp.degree_of(i);
        let sgn = if di.rem_euclid(2) == 1 { -1i64 } else { 1 };
        let mut val = vec![Rat::zero(); dim];
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() {
                val[l_to_cone[k]] = x.clone() * Rat::from_integer(sgn.into());
            }
        }
        alg.add_to_op(2, &[l_to_cone[i], l_to_cone[j]], val);
    }

    // Higher corrections: for n >= 1,
    //   q_{n+1}(v_1, ..., v_n, a) = (B_n/n!) sum_{sigma} ad_{v_sigma(1)}
    //     ... ad_{v_sigma(n)} (epsilon a), valued in g inside C^1.
    let bern = bernoulli(arity);
    let dim0 = lsp.dim(0);
    for n in 1..arity {
        if bern[n].is_zero() {
            continue;
        }
        let coeff = bern[n].clone() / factorial(n);
        for vs in (0..g.dim()).combinations_with_replacement(n) {
            for a in 0..dim0 {
                let ea = aug.eps_apply(a);
                let mut acc = vec![Rat::zero(); g.dim()];
                for perm in vs.iter().permutations(n) {
                    let mut cur = ea.clone();
                    for &&vj in perm.iter().rev() {
                        let mut e = vec![Rat::zero(); g.dim()];
                        e[vj] = Rat::one();
                        cur = g.bracket_dense(&e, &cur);
                    }
                    for (o, c) in acc.iter_mut().zip(&cur) {
                        *o += c.clone();
                    }
                }
                let mut val = vec![Rat::zero(); dim];
                let mut nonzero = false;
                for (k, x) in acc.iter().enumerate() {
                    if !x.is_zero() {
                        nonzero = true;
                        val[g_to_cone[k]] = x.clone() * coeff.clone();
                    }
                }
                if nonzero {
                    let mut tuple: Vec<usize> = vs.iter().map(|&j| g_to_cone[j]).collect();
                    tuple.push(space.global_index(0, a));
                    alg.add_to_op(n + 1, &tuple, val);
                }
            }
        }
    }

    Ok(ConeAlgebra {
        algebra: alg,
        complex,
        l_to_cone,
        g_to_cone,
    })
}

/// `q_1` of a complex, as an otherwise empty operation table.
fn from_cone_complex(complex: &CochainComplex, arity: usize) -> LInfinityAlgebra {
    let space = complex.space.clone();
    let mut alg = LInfinityAlgebra::new(space.clone(), arity, complex.weight_strict);
    let dim = space.total_dim();
    for n in space.degrees() {
        let dn = complex.d(n);
        for col in 0..dn.cols() {
            let mut v = vec![Rat::zero(); dim];
            let mut nonzero = false;
            for row in 0..dn.rows() {
                let x = dn.at(row, col).clone();
                if !x.is_zero() {
                    nonzero = true;
                    v[space.global_index(n + 1, row)] = x;
                }
            }
            if nonzero {
                alg.add_to_op(1, &[space.global_index(n, col)], v);
            }
        }
    }
    alg
}

/// Cone of the pair: the L-infinity module structure on `M` over the
/// cone of `epsilon`, obtained by coning the extended augmentation
/// (zero on `M`) of the pair-sum Lie algebra and splitting.
pub fn build_cone_module(
    aug: &Augmentation,
    m: &DgModule,
    arity_bound: usize,
) -> Result<(ConeAlgebra, LInfinityModule), ConeError> {
    if m.complex.space.total_dim() > 0 && m.complex.space.n_max() == i32::MAX {
        return Err(ConeError::Unbounded);
    }
    let cone = build_cone(aug, arity_bound)?;

    // Extended augmentation on the pair-sum DGLA: epsilon on the L part
    // of degree 0, zero on the M part.
    let (sum, pair_split) = dg_pair_sum(&aug.source, m)?;
    let sum0 = sum.complex.space.dim(0);
    let lsp = &aug.source.complex.space;
    let msp = &m.complex.space;
    let mut eps_ext = Matrix::zero(aug.target.dim(), sum0);
    for c in 0..lsp.dim(0) {
        // the L basis precedes the M basis in each sum degree
        for r in 0..aug.target.dim() {
            *eps_ext.at_mut(r, c) = aug.eps.at(r, c).clone();
        }
    }
    let aug_ext = Augmentation::new(sum.clone(), aug.target.clone(), eps_ext)?;
    let big = build_cone(&aug_ext, arity_bound)?;

    // Splitting of the big cone into (cone of epsilon) and M.
    let big_sp = &big.complex.space;
    let cone_sp = &cone.complex.space;
    let mut c_to_sum = vec![0usize; cone_sp.total_dim()];
    for n in cone_sp.degrees() {
        for i in 0..lsp.dim(n) {
            // L part: L^n sits first within (L + M)^n inside the big cone
            c_to_sum[cone_sp.global_index(n, i)] = big_sp.global_index(n, i);
        }
    }
    for j in 0..aug.target.dim() {
        c_to_sum[cone.g_to_cone[j]] = big.g_to_cone[j];
    }
    let mut m_to_sum = vec![0usize; msp.total_dim()];
    for n in msp.degrees() {
        for i in 0..msp.dim(n) {
            m_to_sum[msp.global_index(n, i)] = big_sp.global_index(n, lsp.dim(n) + i);
        }
    }
    let split = Splitting {
        sum: big_sp.clone(),
        c: cone_sp.clone(),
        m: msp.clone(),
        c_to_sum,
        m_to_sum,
    };
    let _ = pair_split;
    let (c_alg, module) = sum_to_pair(&big.algebra, &split)?;
    // the algebra recovered from the split big cone is the cone itself
    debug_assert!({
        let mut same = true;
        for n in 1..=c_alg.arity_bound.min(cone.algebra.arity_bound) {
            let a: Vec<_> = c_alg.op_entries(n).collect();
            let b: Vec<_> = cone.algebra.op_entries(n).collect();
            if a != b {
                same = false;
            }
        }
        same
    });
    Ok((cone, module))
}

/// `dim H^1(C) = dim H^1(L) + dim g - dim eps(H^0(L))`: the dimensions
/// entering the exactness bookkeeping of the cone.
pub fn cone_h1_expected(aug: &Augmentation) -> usize {
    use crate::homalg::cohomology;
    let (hl, incl) = cohomology(&aug.source.complex);
    let h1 = hl.dim(1);
    // eps image of H^0(L): apply eps to representative cocycles
    let mut rows = Vec::new();
    if let Some(i0) = incl.get(&0) {
        for c in 0..i0.cols() {
            rows.push(aug.eps.apply(&i0.col(c)));
        }
    }
    let rank = crate::exactalg::Subspace::from_spanning(aug.target.dim(), rows).dim();
    h1 + aug.target.dim() - rank
}
