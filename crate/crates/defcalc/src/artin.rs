//! Finite-dimensional local Artin algebras with multiplication tables,
//! truncated free commutative algebras, ideals as saturated subspaces,
//! determinantal (minor) ideals, weight-homogeneity tests and m-adic
//! Hilbert data.
//!
//! Every ring here is a finite-dimensional vector space over Q, so all
//! ideal theory is exact linear algebra: ideals are echelonized
//! subspaces and no Groebner machinery appears anywhere.

use crate::exactalg::{format_rat, Mat, Matrix, Rat, Space};
use itertools::Itertools;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default cap on `C(rows,s) * C(cols,s)` during minor enumeration.
pub const DEFAULT_MINOR_CAP: u128 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArtinError {
    #[error("quotient by the unit ideal: the result is the zero ring")]
    ZeroRing,
    #[error("minor enumeration would visit {needed} minors, over the cap of {cap}")]
    MinorCapExceeded { needed: u128, cap: u128 },
    #[error("operation requires a weight-graded algebra")]
    NotGraded,
    #[error("multiplication table failed validation: {0}")]
    InvalidTable(String),
}

/// Finite-dimensional local commutative algebra.
///
/// The basis is adapted: `basis[0]` is the unit and the remaining basis
/// vectors span the maximal ideal.
#[derive(Clone, Debug)]
pub struct ArtinAlgebra {
    pub basis_labels: Vec<String>,
    /// Sparse products of basis vectors: `mult[i][j] = e_i * e_j`.
    mult: Vec<Vec<Vec<(usize, Rat)>>>,
    /// Per-basis-vector weights; the unit must have weight 0.
    pub weights: Option<Vec<i64>>,
    /// Truncation order: `m^{order+1} = 0`.
    pub order: usize,
}

/// An element is its coefficient vector over the algebra basis.
pub type Elem = Vec<Rat>;

impl ArtinAlgebra {
    pub fn new(
        basis_labels: Vec<String>,
        mult: Vec<Vec<Vec<(usize, Rat)>>>,
        weights: Option<Vec<i64>>,
        order: usize,
    ) -> Result<Self, ArtinError> {
        let a = ArtinAlgebra {
            basis_labels,
            mult,
            weights,
            order,
        };
        a.validate()?;
        Ok(a)
    }

    /// The rationals as a (trivial) Artin algebra.
    pub fn rationals() -> Self {
        ArtinAlgebra {
            basis_labels: vec!["1".to_string()],
            mult: vec![vec![vec![(0, Rat::one())]]],
            weights: Some(vec![0]),
            order: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    fn validate(&self) -> Result<(), ArtinError> {
        let n = self.dim();
        if n == 0 {
            return Err(ArtinError::InvalidTable("empty basis".into()));
        }
        if self.mult.len() != n || self.mult.iter().any(|row| row.len() != n) {
            return Err(ArtinError::InvalidTable("table shape mismatch".into()));
        }
        // unit
        for j in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[j] = Rat::one();
            if self.mul_basis(0, j) != e {
                return Err(ArtinError::InvalidTable(format!(
                    "basis[0] is not a unit at column {j}"
                )));
            }
        }
        // commutativity
        for i in 0..n {
            for j in i + 1..n {
                if self.mul_basis(i, j) != self.mul_basis(j, i) {
                    return Err(ArtinError::InvalidTable(format!(
                        "not commutative at ({i},{j})"
                    )));
                }
            }
        }
        // associativity
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                for k in 0..n {
                    let jk = self.mul_basis(j, k);
                    let mut ei = vec![Rat::zero(); n];
                    ei[i] = Rat::one();
                    let mut ek = vec![Rat::zero(); n];
                    ek[k] = Rat::one();
                    if self.mul(&ij, &ek) != self.mul(&ei, &jk) {
                        return Err(ArtinError::InvalidTable(format!(
                            "not associative at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != n || w[0] != 0 {
                return Err(ArtinError::InvalidTable(
                    "weights must cover the basis with weight(1) = 0".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn zero(&self) -> Elem {
        vec![Rat::zero(); self.dim()]
    }

    pub fn one(&self) -> Elem {
        let mut e = self.zero();
        e[0] = Rat::one();
        e
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = Rat::one();
        e
    }

    fn mul_basis(&self, i: usize, j: usize) -> Elem {
        let mut out = self.zero();
        for (k, c) in &self.mult[i][j] {
            out[*k] += c.clone();
        }
        out
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|x| -x.clone()).collect()
    }

    pub fn scale(&self, a: &Elem, c: &Rat) -> Elem {
        a.iter().map(|x| x.clone() * c.clone()).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                for (k, c) in &self.mult[i][j] {
                    out[*k] += ai.clone() * bj.clone() * c.clone();
                }
            }
        }
        out
    }

    pub fn is_zero_elem(&self, a: &Elem) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    pub fn from_rat(&self, c: Rat) -> Elem {
        let mut e = self.zero();
        e[0] = c;
        e
    }

    /// The maximal ideal as a subspace.
    pub fn maximal_ideal(&self) -> Space {
        let rows = (1..self.dim()).map(|i| {
            let mut v = vec![Rat::zero(); self.dim()];
            v[i] = Rat::one();
            v
        });
        Space::from_spanning(self.dim(), rows.collect())
    }

    /// Subspace spanned by the weight-`w` basis vectors.
    pub fn weight_piece(&self, w: i64) -> Result<Space, ArtinError> {
        let weights = self.weights.as_ref().ok_or(ArtinError::NotGraded)?;
        let rows = (0..self.dim())
            .filter(|&i| weights[i] == w)
            .map(|i| {
                let mut v = vec![Rat::zero(); self.dim()];
                v[i] = Rat::one();
                v
            })
            .collect();
        Ok(Space::from_spanning(self.dim(), rows))
    }

    /// Weight decomposition of an element, sparse by weight.
    pub fn weight_components(&self, a: &Elem) -> Result<BTreeMap<i64, Elem>, ArtinError> {
        let weights = self.weights.as_ref().ok_or(ArtinError::NotGraded)?;
        let mut out: BTreeMap<i64, Elem> = BTreeMap::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let entry = out.entry(weights[i]).or_insert_with(|| self.zero());
            entry[i] = c.clone();
        }
        Ok(out)
    }

    pub fn render_elem(&self, a: &Elem) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = format_rat(c);
            if self.basis_labels[i] == "1" {
                parts.push(coeff);
            } else if coeff == "1" {
                parts.push(self.basis_labels[i].clone());
            } else if coeff == "-1" {
                parts.push(format!("-{}", self.basis_labels[i]));
            } else {
                parts.push(format!("{}*{}", coeff, self.basis_labels[i]));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

/// Truncated free commutative algebra `Q[x_1..x_m]/m^{n+1}` with
/// weighted generators and a graded-lex monomial basis.
#[derive(Clone, Debug)]
pub struct TruncatedFreeAlgebra {
    pub algebra: ArtinAlgebra,
    pub generators: Vec<String>,
    pub gen_weights: Vec<i64>,
    /// Exponent vectors aligned with the algebra basis.
    pub monomials: Vec<Vec<u32>>,
}

impl TruncatedFreeAlgebra {
    pub fn new(generators: Vec<String>, gen_weights: Vec<i64>, order: usize) -> Self {
        assert_eq!(generators.len(), gen_weights.len());
        let m = generators.len();
        let mut monomials: Vec<Vec<u32>> = Vec::new();
        for total in 0..=order as u32 {
            let mut stack = vec![(Vec::<u32>::new(), total)];
            let mut at_degree = Vec::new();
            while let Some((prefix, rem)) = stack.pop() {
                if prefix.len() == m {
                    if rem == 0 {
                        at_degree.push(prefix);
                    }
                    continue;
                }
                // push in reverse so exponents come out lexicographically
                for e in (0..=rem).rev() {
                    let mut p = prefix.clone();
                    p.push(e);
                    stack.push((p, rem - e));
                }
            }
            at_degree.sort_by(|a, b| b.cmp(a));
            monomials.extend(at_degree);
        }
        if m == 0 {
            monomials = vec![vec![]];
        }
        let index: BTreeMap<Vec<u32>, usize> = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let dim = monomials.len();
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let sum: Vec<u32> = monomials[i]
                    .iter()
                    .zip(&monomials[j])
                    .map(|(a, b)| a + b)
                    .collect();
                if sum.iter().sum::<u32>() <= order as u32 {
                    mult[i][j] = vec![(index[&sum], Rat::one())];
                }
            }
        }
        let labels: Vec<String> = monomials
            .iter()
            .map(|mono| {
                let factors: Vec<String> = mono
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| {
                        if e == 1 {
                            generators[v].clone()
                        } else {
                            format!("{}^{}", generators[v], e)
                        }
                    })
                    .collect();
                if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        let weights: Vec<i64> = monomials
            .iter()
            .map(|mono| {
                mono.iter()
                    .enumerate()
                    .map(|(v, &e)| gen_weights[v] * e as i64)
                    .sum()
            })
            .collect();
        let algebra = ArtinAlgebra::new(labels, mult, Some(weights), order)
            .expect("free truncated algebra table is always valid");
        TruncatedFreeAlgebra {
            algebra,
            generators,
            gen_weights,
            monomials,
        }
    }

    pub fn generator_elem(&self, v: usize) -> Elem {
        let mut exps = vec![0u32; self.generators.len()];
        exps[v] = 1;
        match self.monomials.iter().position(|m| *m == exps) {
            Some(idx) => self.algebra.basis_elem(idx),
            // truncated away at order 0
            None => self.algebra.zero(),
        }
    }
}

/// An ideal of an Artin algebra, stored as its echelonized subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub space: Space,
}

impl Ideal {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.dim() == 0
    }

    pub fn is_unit(&self, owner: &ArtinAlgebra) -> bool {
        self.space.contains(&owner.one())
    }

    pub fn contains(&self, elem: &Elem) -> bool {
        self.space.contains(elem)
    }

    pub fn generators(&self) -> Vec<Elem> {
        self.space.basis_rows()
    }
}

/// Smallest multiplication-closed subspace containing `elems`.
///
/// One saturation round suffices: span{b * s} is already an A-submodule.
pub fn ideal_generated(owner: &ArtinAlgebra, elems: &[Elem]) -> Ideal {
    let mut rows = Vec::new();
    for s in elems {
        for i in 0..owner.dim() {
            rows.push(owner.mul(&owner.basis_elem(i), s));
        }
    }
    Ideal {
        space: Space::from_spanning(owner.dim(), rows),
    }
}

/// Whether `A * I` is contained in `I`.
pub fn is_ideal(owner: &ArtinAlgebra, candidate: &Ideal) -> bool {
    candidate.generators().iter().all(|g| {
        (0..owner.dim()).all(|i| candidate.contains(&owner.mul(&owner.basis_elem(i), g)))
    })
}

/// Quotient of an Artin algebra by the ideal generated by `gens`,
/// together with the projection matrix on coefficient vectors.
pub fn quotient(
    owner: &ArtinAlgebra,
    gens: &[Elem],
) -> Result<(ArtinAlgebra, Mat), ArtinError> {
    let ideal = ideal_generated(owner, gens);
    quotient_by_ideal(owner, &ideal)
}

pub fn quotient_by_ideal(
    owner: &ArtinAlgebra,
    ideal: &Ideal,
) -> Result<(ArtinAlgebra, Mat), ArtinError> {
    if ideal.is_unit(owner) {
        return Err(ArtinError::ZeroRing);
    }
    let n = owner.dim();
    let basis_rows = ideal.space.basis_rows();
    let pivots: Vec<usize> = basis_rows
        .iter()
        .map(|row| (0..n).find(|&c| !row[c].is_zero()).unwrap())
        .collect();
    let complement: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let qdim = complement.len();

    // Projection: reduce a vector modulo the echelon basis, read off the
    // complement coordinates.
    let reduce = |v: &Elem| -> Vec<Rat> {
        let mut v = v.clone();
        for (row, &p) in basis_rows.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for c in 0..n {
                    v[c] = v[c].clone() - f.clone() * row[c].clone();
                }
            }
        }
        complement.iter().map(|&c| v[c].clone()).collect()
    };

    let mut proj = Matrix::zero(qdim, n);
    for j in 0..n {
        let col = reduce(&owner.basis_elem(j));
        for r in 0..qdim {
            *proj.at_mut(r, j) = col[r].clone();
        }
    }

    // Section: complement standard vectors of the owner.
    let section: Vec<Elem> = complement.iter().map(|&c| owner.basis_elem(c)).collect();
    let mut mult = vec![vec![Vec::new(); qdim]; qdim];
    for i in 0..qdim {
        for j in 0..qdim {
            let prod = reduce(&owner.mul(&section[i], &section[j]));
            mult[i][j] = prod
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
        }
    }
    let labels: Vec<String> = complement
        .iter()
        .map(|&c| owner.basis_labels[c].clone())
        .collect();
    let weights = owner
        .weights
        .as_ref()
        .map(|w| complement.iter().map(|&c| w[c]).collect::<Vec<i64>>());

    let mut q = ArtinAlgebra {
        basis_labels: labels,
        mult,
        weights,
        order: owner.order,
    };
    // Adapt the basis so the unit comes first.
    let unit = reduce(&owner.one());
    let unit_is_e0 = unit
        .iter()
        .enumerate()
        .all(|(i, c)| if i == 0 { c.is_one() } else { c.is_zero() });
    if !unit_is_e0 {
        q = rebase_with_unit(&q, &unit);
    }
    q.validate()?;
    Ok((q, proj))
}

/// Change basis so that the given unit vector becomes `basis[0]`.
fn rebase_with_unit(q: &ArtinAlgebra, unit: &Elem) -> ArtinAlgebra {
    let n = q.dim();
    let lead = (0..n).find(|&i| !unit[i].is_zero()).expect("unit is nonzero");
    // New basis: unit, then the old basis without the lead position.
    let mut s: Mat = Matrix::zero(n, n);
    for r in 0..n {
        *s.at_mut(r, 0) = unit[r].clone();
    }
    let mut col = 1;
    for old in 0..n {
        if old == lead {
            continue;
        }
        *s.at_mut(old, col) = Rat::one();
        col += 1;
    }
    let s_inv = s.inverse().expect("basis change must be invertible");
    let new_elem = |v: &Elem| s_inv.apply(v);
    let mut mult = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        let bi = s.col(i);
        for j in 0..n {
            let bj = s.col(j);
            let prod = new_elem(&q.mul(&bi, &bj));
            mult[i][j] = prod
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
        }
    }
    let mut labels = vec!["1".to_string()];
    let mut weights = q.weights.as_ref().map(|_| vec![0i64]);
    for old in 0..n {
        if old == lead {
            continue;
        }
        labels.push(q.basis_labels[old].clone());
        if let (Some(ws), Some(w)) = (&mut weights, &q.weights) {
            ws.push(w[old]);
        }
    }
    ArtinAlgebra {
        basis_labels: labels,
        mult,
        weights,
        order: q.order,
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Determinant of a square matrix with entries in `owner`, by cofactor
/// expansion along the first row.
pub fn det(owner: &ArtinAlgebra, m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    if n == 0 {
        return owner.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = owner.zero();
    for (j, entry) in m[0].iter().enumerate() {
        if owner.is_zero_elem(entry) {
            continue;
        }
        let minor: Vec<Vec<Elem>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cof = owner.mul(entry, &det(owner, &minor));
        if j % 2 == 0 {
            acc = owner.add(&acc, &cof);
        } else {
            acc = owner.sub(&acc, &cof);
        }
    }
    acc
}

/// Ideal generated by all `size x size` minors of a matrix over `owner`.
///
/// `size > min(rows, cols)` yields the zero ideal; `size <= 0` is the
/// unit ideal by convention. Enumeration over the cap is an explicit
/// resource error, never a silent truncation.
pub fn minor_ideal(
    owner: &ArtinAlgebra,
    mat: &[Vec<Elem>],
    size: i64,
    cap: u128,
) -> Result<Ideal, ArtinError> {
    if size <= 0 {
        return Ok(ideal_generated(owner, &[owner.one()]));
    }
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let s = size as usize;
    if s > rows || s > cols {
        return Ok(Ideal {
            space: Space::zero(owner.dim()),
        });
    }
    let needed = binomial(rows, s) * binomial(cols, s);
    if needed > cap {
        return Err(ArtinError::MinorCapExceeded { needed, cap });
    }
    let mut minors = Vec::new();
    'outer: for row_set in (0..rows).combinations(s) {
        for col_set in (0..cols).combinations(s) {
            let sub: Vec<Vec<Elem>> = row_set
                .iter()
                .map(|&r| col_set.iter().map(|&c| mat[r][c].clone()).collect())
                .collect();
            let d = det(owner, &sub);
            if !owner.is_zero_elem(&d) {
                minors.push(d);
                // saturates at the unit ideal; no later minor changes it
                if minors.len() % 16 == 0
                    && ideal_generated(owner, &minors).is_unit(owner)
                {
                    break 'outer;
                }
            }
        }
    }
    Ok(ideal_generated(owner, &minors))
}

/// Result of the weight-homogeneity test on an ideal.
#[derive(Clone, Debug)]
pub enum GradedPieces {
    /// `I` equals the direct sum of its weight pieces `I \cap A_w`.
    Homogeneous(BTreeMap<i64, Vec<Elem>>),
    /// An element of `I` whose weight components do not all lie in `I`.
    Witness(Elem),
}

impl GradedPieces {
    pub fn is_homogeneous(&self) -> bool {
        matches!(self, GradedPieces::Homogeneous(_))
    }
}

/// Decompose an ideal into weight pieces, or produce a witness that it
/// is not weight-homogeneous.
pub fn graded_pieces(owner: &ArtinAlgebra, ideal: &Ideal) -> Result<GradedPieces, ArtinError> {
    if owner.weights.is_none() {
        return Err(ArtinError::NotGraded);
    }
    let mut pieces: BTreeMap<i64, Vec<Elem>> = BTreeMap::new();
    for row in ideal.generators() {
        let comps = owner.weight_components(&row)?;
        if comps.len() > 1 {
            // An echelon row of a homogeneous subspace is homogeneous, so
            // a mixed row witnesses inhomogeneity; confirm by membership.
            if comps.values().any(|c| !ideal.contains(c)) {
                return Ok(GradedPieces::Witness(row));
            }
        }
        for (w, c) in comps {
            pieces.entry(w).or_default().push(c);
        }
    }
    Ok(GradedPieces::Homogeneous(pieces))
}

/// Powers of the maximal ideal: `P[j] = m^j` as subspaces (`P[0] = A`).
fn madic_powers(owner: &ArtinAlgebra) -> Vec<Space> {
    let mut powers = vec![Space::full(owner.dim())];
    let m = owner.maximal_ideal();
    powers.push(m.clone());
    loop {
        let last = powers.last().unwrap();
        if last.dim() == 0 {
            break;
        }
        let mut rows = Vec::new();
        for a in m.basis_rows() {
            for b in last.basis_rows() {
                rows.push(owner.mul(&a, &b));
            }
        }
        let next = Space::from_spanning(owner.dim(), rows);
        let stable = next.dim() == last.dim();
        powers.push(next);
        if stable {
            break;
        }
    }
    powers
}

/// Dimensions of the graded pieces of `m^j / m^{j+1}` refined by weight,
/// restricted to a subspace (the algebra itself or an ideal).
///
/// Entries are `(m-adic degree, weight, dimension)` with dimension > 0,
/// sorted; equal for isomorphic graded algebras and ideals.
pub fn hilbert_data(owner: &ArtinAlgebra, subspace: Option<&Ideal>) -> Vec<(usize, i64, usize)> {
    let powers = madic_powers(owner);
    let full = Space::full(owner.dim());
    let restrict = |s: &Space| -> Space {
        match subspace {
            Some(ideal) => s.intersect(&ideal.space),
            None => s.clone(),
        }
    };
    let weight_classes: Vec<i64> = match &owner.weights {
        Some(w) => {
            let mut ws: Vec<i64> = w.clone();
            ws.sort();
            ws.dedup();
            ws
        }
        None => vec![0],
    };
    let mut out = Vec::new();
    for j in 0..powers.len() {
        let pj = restrict(&powers[j]);
        let pj1 = match powers.get(j + 1) {
            Some(p) => restrict(p),
            None => Space::zero(owner.dim()),
        };
        if pj.dim() == 0 {
            break;
        }
        for &w in &weight_classes {
            let piece = if owner.weights.is_some() {
                owner.weight_piece(w).unwrap()
            } else {
                full.clone()
            };
            let d = pj.intersect(&piece).dim() - pj1.intersect(&piece).dim();
            if d > 0 {
                out.push((j, w, d));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn free(vars: &[(&str, i64)], order: usize) -> TruncatedFreeAlgebra {
        TruncatedFreeAlgebra::new(
            vars.iter().map(|(n, _)| n.to_string()).collect(),
            vars.iter().map(|(_, w)| *w).collect(),
            order,
        )
    }

    #[test]
    fn truncated_free_basis() {
        let t = free(&[("x", -1), ("y", -2)], 2);
        // 1, x, y, x^2, xy, y^2
        assert_eq!(t.algebra.dim(), 6);
        assert_eq!(t.algebra.basis_labels[0], "1");
        let ws = t.algebra.weights.clone().unwrap();
        assert_eq!(ws, vec![0, -1, -2, -2, -3, -4]);
        // x * y = xy
        let x = t.generator_elem(0);
        let y = t.generator_elem(1);
        let xy = t.algebra.mul(&x, &y);
        let idx = t.monomials.iter().position(|m| *m == vec![1, 1]).unwrap();
        assert_eq!(xy, t.algebra.basis_elem(idx));
        // truncation: x^2 * y = 0 at order 2
        let x2 = t.algebra.mul(&x, &x);
        assert!(t.algebra.is_zero_elem(&t.algebra.mul(&x2, &y)));
    }

    #[test]
    fn quotient_examples() {
        // Q[x]/m^3 by {x^2}: basis {1, x}
        let t = free(&[("x", 0)], 2);
        let x = t.generator_elem(0);
        let x2 = t.algebra.mul(&x, &x);
        let (a, _) = quotient(&t.algebra, &[x2]).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.basis_labels, vec!["1", "x"]);
        assert!(a.is_zero_elem(&a.mul(&a.basis_elem(1), &a.basis_elem(1))));

        // Q[x,y]/m^3 by {}: dim 6
        let t2 = free(&[("x", 0), ("y", 0)], 2);
        let (a2, _) = quotient(&t2.algebra, &[]).unwrap();
        assert_eq!(a2.dim(), 6);

        // Q[x,y]/m^3 by {xy}: dim 5, basis {1,x,y,x^2,y^2}
        let x = t2.generator_elem(0);
        let y = t2.generator_elem(1);
        let xy = t2.algebra.mul(&x, &y);
        let (a3, _) = quotient(&t2.algebra, &[xy]).unwrap();
        assert_eq!(a3.dim(), 5);
        assert_eq!(a3.basis_labels, vec!["1", "x", "y", "x^2", "y^2"]);
    }

    #[test]
    fn quotient_by_unit_is_zero_ring() {
        let t = free(&[("x", 0)], 2);
        assert_eq!(
            quotient(&t.algebra, &[t.algebra.one()]).unwrap_err(),
            ArtinError::ZeroRing
        );
    }

    #[test]
    fn ideal_generated_examples() {
        let t = free(&[("x", 0), ("y", 0)], 2);
        let a = &t.algebra;
        assert!(ideal_generated(a, &[a.zero()]).is_zero());
        assert!(ideal_generated(a, &[a.one()]).is_unit(a));
        let x = t.generator_elem(0);
        let i = ideal_generated(a, &[x.clone()]);
        assert_eq!(i.dim(), 3); // x, x^2, xy
        assert!(is_ideal(a, &i));
        let x2 = a.mul(&x, &x);
        assert!(i.contains(&x2));
    }

    #[test]
    fn minor_ideal_examples() {
        let t = free(&[("x", 0), ("y", 0)], 2);
        let a = &t.algebra;
        // identity over A, size 1: unit ideal
        let id = vec![
            vec![a.one(), a.zero()],
            vec![a.zero(), a.one()],
        ];
        assert!(minor_ideal(a, &id, 1, DEFAULT_MINOR_CAP).unwrap().is_unit(a));
        // zero matrix: zero ideal
        let z = vec![vec![a.zero(); 2]; 2];
        assert!(minor_ideal(a, &z, 1, DEFAULT_MINOR_CAP).unwrap().is_zero());
        // diag(x, y), size 2: ideal (xy)
        let x = t.generator_elem(0);
        let y = t.generator_elem(1);
        let d = vec![
            vec![x.clone(), a.zero()],
            vec![a.zero(), y.clone()],
        ];
        let i = minor_ideal(a, &d, 2, DEFAULT_MINOR_CAP).unwrap();
        assert_eq!(i, ideal_generated(a, &[a.mul(&x, &y)]));
        // size 0: unit ideal; size 3 on a 2x2: zero ideal
        assert!(minor_ideal(a, &d, 0, DEFAULT_MINOR_CAP).unwrap().is_unit(a));
        assert!(minor_ideal(a, &d, 3, DEFAULT_MINOR_CAP).unwrap().is_zero());
    }

    #[test]
    fn minor_cap_is_enforced() {
        let t = free(&[("x", 0)], 1);
        let a = &t.algebra;
        let big = vec![vec![a.one(); 30]; 30];
        assert!(matches!(
            minor_ideal(a, &big, 15, 1000),
            Err(ArtinError::MinorCapExceeded { .. })
        ));
    }

    #[test]
    fn field_case_minor_rank_criterion() {
        // A = Q: minor_ideal(mat, s) = 0 iff rank(mat) <= s-1
        let a = ArtinAlgebra::rationals();
        let to_elems = |rows: Vec<Vec<i64>>| -> Vec<Vec<Elem>> {
            rows.into_iter()
                .map(|r| r.into_iter().map(|v| vec![q(v)]).collect())
                .collect()
        };
        let m = to_elems(vec![vec![1, 2], vec![2, 4]]);
        let rank = 1;
        for s in 1..=3i64 {
            let ideal = minor_ideal(&a, &m, s, DEFAULT_MINOR_CAP).unwrap();
            assert_eq!(ideal.is_zero(), rank <= (s - 1) as usize, "size {s}");
        }
    }

    #[test]
    fn det_multiplicativity() {
        let t = free(&[("x", 0), ("y", 0)], 3);
        let a = &t.algebra;
        let x = t.generator_elem(0);
        let y = t.generator_elem(1);
        let one = a.one();
        let m = vec![
            vec![a.add(&one, &x), y.clone()],
            vec![x.clone(), one.clone()],
        ];
        let n = vec![
            vec![one.clone(), a.mul(&x, &y)],
            vec![y.clone(), a.add(&one, &y)],
        ];
        let mn: Vec<Vec<Elem>> = (0..2)
            .map(|r| {
                (0..2)
                    .map(|c| {
                        let mut acc = a.zero();
                        for k in 0..2 {
                            acc = a.add(&acc, &a.mul(&m[r][k], &n[k][c]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        assert_eq!(det(a, &mn), a.mul(&det(a, &m), &det(a, &n)));
    }

    #[test]
    fn graded_pieces_examples() {
        let t = free(&[("x1", -1), ("x2", -2)], 2);
        let a = &t.algebra;
        let x1 = t.generator_elem(0);
        let x2 = t.generator_elem(1);
        // monomial ideal (x1): homogeneous with pieces at -1, -2, -3
        let i = ideal_generated(a, &[x1.clone()]);
        match graded_pieces(a, &i).unwrap() {
            GradedPieces::Homogeneous(pieces) => {
                assert_eq!(pieces.keys().copied().collect::<Vec<_>>(), vec![-3, -2, -1]);
            }
            GradedPieces::Witness(_) => panic!("monomial ideal must be homogeneous"),
        }
        // (x1 + x2): witness x1 + x2
        let mixed = a.add(&x1, &x2);
        let j = ideal_generated(a, &[mixed.clone()]);
        match graded_pieces(a, &j).unwrap() {
            GradedPieces::Witness(w) => assert!(j.contains(&w)),
            GradedPieces::Homogeneous(_) => panic!("(x1+x2) is not homogeneous"),
        }
        // zero ideal: homogeneous with no pieces
        let z = ideal_generated(a, &[]);
        match graded_pieces(a, &z).unwrap() {
            GradedPieces::Homogeneous(pieces) => assert!(pieces.is_empty()),
            _ => panic!(),
        }
    }

    #[test]
    fn hilbert_data_examples() {
        // torus R_2 = Q[x1,x2]/m^3: degrees (0,1,2) with dims (1,2,3)
        let t = free(&[("x1", -1), ("x2", -1)], 2);
        let data = hilbert_data(&t.algebra, None);
        let by_degree: BTreeMap<usize, usize> =
            data.iter().fold(BTreeMap::new(), |mut m, (j, _, d)| {
                *m.entry(*j).or_default() += d;
                m
            });
        assert_eq!(by_degree[&0], 1);
        assert_eq!(by_degree[&1], 2);
        assert_eq!(by_degree[&2], 3);

        // Q[x]/(x^2): dims (1,1)
        let t1 = free(&[("x", 0)], 3);
        let x = t1.generator_elem(0);
        let x2 = t1.algebra.mul(&x, &x);
        let (r, _) = quotient(&t1.algebra, &[x2]).unwrap();
        let data = hilbert_data(&r, None);
        assert_eq!(data, vec![(0, 0, 1), (1, 0, 1)]);

        // zero ideal: empty list
        let z = ideal_generated(&t1.algebra, &[]);
        assert!(hilbert_data(&t1.algebra, Some(&z)).is_empty());
    }

    #[test]
    fn minor_ideal_basis_independent_small() {
        // P * mat * Q for a specific invertible P, Q over A
        let t = free(&[("x", 0), ("y", 0)], 2);
        let a = &t.algebra;
        let x = t.generator_elem(0);
        let y = t.generator_elem(1);
        let mat = vec![
            vec![x.clone(), a.zero()],
            vec![a.zero(), y.clone()],
        ];
        let one = a.one();
        let p = vec![
            vec![one.clone(), x.clone()],
            vec![a.zero(), one.clone()],
        ];
        let qm = vec![
            vec![a.add(&one, &y), a.zero()],
            vec![y.clone(), one.clone()],
        ];
        let mul2 = |m1: &Vec<Vec<Elem>>, m2: &Vec<Vec<Elem>>| -> Vec<Vec<Elem>> {
            (0..2)
                .map(|r| {
                    (0..2)
                        .map(|c| {
                            let mut acc = a.zero();
                            for k in 0..2 {
                                acc = a.add(&acc, &a.mul(&m1[r][k], &m2[k][c]));
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        };
        let conj = mul2(&mul2(&p, &mat), &qm);
        for s in 1..=2 {
            assert_eq!(
                minor_ideal(a, &conj, s, DEFAULT_MINOR_CAP).unwrap(),
                minor_ideal(a, &mat, s, DEFAULT_MINOR_CAP).unwrap(),
                "size {s}"
            );
        }
    }
}
