//! Rank-one resonance ideals in the coordinate ring of `H^1(L)`, the
//! weight bound on higher action maps, and a pointwise brute-force
//! oracle for the jump condition `dim H^i(H(M), d_omega) >= k`.

use crate::exactalg::{Mat, Rat};
use crate::linf::{d_omega, pair_to_sum, LInfinityAlgebra, LInfinityModule, PolyRing};
use crate::poly::{poly_det, Poly};
use itertools::Itertools;
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResonanceError {
    #[error("H^1 weight {weight} at basis index {index} is not positive; no finiteness bound")]
    NonPositiveWeight { index: usize, weight: i64 },
    #[error("minor enumeration needs {needed} determinants, cap is {cap}")]
    MinorCapExceeded { needed: u128, cap: u128 },
    #[error("the algebra is not abelian: nonzero operation of arity {0}")]
    NotAbelian(usize),
}

/// Smallest `N` such that every action map `m_n` with `n > N` vanishes
/// by weight bookkeeping, given positive weights on `H^1`.
pub fn action_arity_bound(
    h1_weights: &[i64],
    hm_weights: &[i64],
) -> Result<usize, ResonanceError> {
    for (index, &weight) in h1_weights.iter().enumerate() {
        if weight <= 0 {
            return Err(ResonanceError::NonPositiveWeight { index, weight });
        }
    }
    let span = match (hm_weights.iter().max(), hm_weights.iter().min()) {
        (Some(max), Some(min)) => (max - min) as usize,
        _ => 0,
    };
    Ok(span + 1)
}

/// Action maps stored beyond the weight bound that are not identically
/// zero; empty on weight-strict inputs satisfying the hypothesis.
pub fn action_bound_violations(hm: &LInfinityModule, bound: usize) -> Vec<usize> {
    (bound + 1..=hm.arity_bound)
        .filter(|&n| !hm.is_op_zero(n))
        .collect()
}

/// The determinantal generators of a resonance ideal `R_k^i`.
#[derive(Clone, Debug)]
pub struct ResonanceIdeal {
    pub i: i32,
    pub k: usize,
    pub nvars: usize,
    pub generators: Vec<Poly>,
}

impl ResonanceIdeal {
    pub fn is_unit(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.total_degree() == Some(0))
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// All generators vanish at the point.
    pub fn vanishes_at(&self, point: &[Rat]) -> bool {
        self.generators.iter().all(|g| g.eval(point).is_zero())
    }
}

fn assert_abelian(c: &LInfinityAlgebra) -> Result<(), ResonanceError> {
    for n in 2..=c.arity_bound {
        if !c.is_op_zero(n) {
            return Err(ResonanceError::NotAbelian(n));
        }
    }
    Ok(())
}

/// Symbolic differential `d_omega` with `omega = sum t_j e_j` over the
/// coordinate ring of `H^1(L)`, per module degree.
pub fn symbolic_d_omega(
    c: &LInfinityAlgebra,
    hm: &LInfinityModule,
) -> Result<BTreeMap<i32, Vec<Vec<Poly>>>, ResonanceError> {
    assert_abelian(c)?;
    let b = c.space.dim(1);
    let ring = PolyRing { nvars: b };
    let omega: Vec<Poly> = (0..b).map(|j| Poly::var(b, j)).collect();
    let (sum, split) = pair_to_sum(c, hm);
    let arity = sum.arity_bound;
    Ok(d_omega(&sum, &split, &ring, &omega, arity))
}

fn block_matrix(
    d: &BTreeMap<i32, Vec<Vec<Poly>>>,
    hm: &LInfinityModule,
    nvars: usize,
    i: i32,
) -> Vec<Vec<Poly>> {
    let dims = |j: i32| hm.space.dim(j);
    let get = |j: i32| -> Vec<Vec<Poly>> {
        match d.get(&j) {
            Some(m) => m.clone(),
            None => (0..dims(j + 1))
                .map(|_| (0..dims(j)).map(|_| Poly::zero(nvars)).collect())
                .collect(),
        }
    };
    let a = get(i - 1);
    let bb = get(i);
    let (ra, rb) = (dims(i), dims(i + 1));
    let (ca, cb) = (dims(i - 1), dims(i));
    let mut block = Vec::with_capacity(ra + rb);
    for r in 0..ra {
        let mut row = Vec::with_capacity(ca + cb);
        row.extend(a[r].iter().cloned());
        row.extend((0..cb).map(|_| Poly::zero(nvars)));
        block.push(row);
    }
    for r in 0..rb {
        let mut row = Vec::with_capacity(ca + cb);
        row.extend((0..ca).map(|_| Poly::zero(nvars)));
        row.extend(bb[r].iter().cloned());
        block.push(row);
    }
    block
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// All size-`(r_i - k + 1)` minors of the symbolic block map
/// `d_omega^{i-1} + d_omega^i`. A non-positive minor size yields the
/// unit ideal; a size exceeding the matrix yields the zero ideal.
pub fn resonance_ideal(
    c: &LInfinityAlgebra,
    hm: &LInfinityModule,
    i: i32,
    k: usize,
    cap: u128,
) -> Result<ResonanceIdeal, ResonanceError> {
    let b = c.space.dim(1);
    let d = symbolic_d_omega(c, hm)?;
    let r_i = hm.space.dim(i) as i64;
    let size = r_i - k as i64 + 1;
    if size <= 0 {
        return Ok(ResonanceIdeal {
            i,
            k,
            nvars: b,
            generators: vec![Poly::one(b)],
        });
    }
    let block = block_matrix(&d, hm, b, i);
    let rows = block.len();
    let cols = if rows == 0 { 0 } else { block[0].len() };
    let s = size as usize;
    if s > rows || s > cols {
        return Ok(ResonanceIdeal {
            i,
            k,
            nvars: b,
            generators: Vec::new(),
        });
    }
    let needed = binom(rows, s) * binom(cols, s);
    if needed > cap {
        return Err(ResonanceError::MinorCapExceeded { needed, cap });
    }
    let mut generators = Vec::new();
    for row_set in (0..rows).combinations(s) {
        for col_set in (0..cols).combinations(s) {
            let sub: Vec<Vec<Poly>> = row_set
                .iter()
                .map(|&r| col_set.iter().map(|&cc| block[r][cc].clone()).collect())
                .collect();
            let det = poly_det(&sub, b);
            if !det.is_zero() {
                generators.push(det);
            }
        }
    }
    Ok(ResonanceIdeal {
        i,
        k,
        nvars: b,
        generators,
    })
}

/// Brute-force oracle: instantiate `d_omega` at a rational point and
/// compare `dim H^i` with `k` using exact linear algebra.
pub fn resonance_point_test(
    c: &LInfinityAlgebra,
    hm: &LInfinityModule,
    point: &[Rat],
    i: i32,
    k: usize,
) -> Result<bool, ResonanceError> {
    if k == 0 {
        return Ok(true);
    }
    let d = symbolic_d_omega(c, hm)?;
    let inst = |j: i32| -> Mat {
        match d.get(&j) {
            Some(m) => Mat::from_rows(
                m.iter()
                    .map(|row| row.iter().map(|p| p.eval(point)).collect())
                    .collect(),
            ),
            None => Mat::zero(hm.space.dim(j + 1), hm.space.dim(j)),
        }
    };
    let rank_in = inst(i - 1).rank();
    let rank_out = inst(i).rank();
    let dim_h = hm.space.dim(i) as i64 - rank_in as i64 - rank_out as i64;
    Ok(dim_h >= k as i64)
}

/// Deterministic sample grid: rational points of `Q^b` with coordinates
/// in `{-2,-1,0,1,2}`, lexicographic in that coordinate order, capped.
pub fn sample_grid(b: usize, cap: usize) -> Vec<Vec<Rat>> {
    let coords: Vec<Rat> = (-2i64..=2).map(|n| Rat::from_integer(n.into())).collect();
    let mut grid = Vec::new();
    let total = 5usize.pow(b as u32);
    for idx in 0..total.min(if b == 0 { 1 } else { usize::MAX }) {
        if grid.len() >= cap {
            break;
        }
        let mut point = Vec::with_capacity(b);
        let mut rem = idx;
        for _ in 0..b {
            point.push(coords[rem % 5].clone());
            rem /= 5;
        }
        point.reverse();
        grid.push(point);
    }
    grid
}
