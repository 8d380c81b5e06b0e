//! DG Lie algebras, DG modules and L-infinity structures given by sparse
//! operation tables; axiom checking through the coalgebra codifferential;
//! the pair-sum construction; homotopy transfer; Maurer-Cartan residuals
//! and twisted differentials with coefficients in an Artin or polynomial
//! ring.
//!
//! # Sign conventions
//!
//! Operations are stored internally in the shifted symmetric convention:
//! the table for arity `n` holds `q_n : Sym^n(C[1]) -> C[1]`, which is
//! graded symmetric with respect to the *shifted* degree
//! `sd(x) = deg(x) - 1`. The single source of truth relating the stored
//! `q_n` to the antisymmetric operations `l_n` of degree `2 - n` is the
//! decalage sign
//!
//! ```text
//! q_n(s x_1, ..., s x_n) = (-1)^{sum_j (n - j) deg(x_j)} s l_n(x_1, ..., x_n)
//! ```
//!
//! Every Koszul sign in this module is computed on shifted degrees, and
//! the conversion signs used by [`mc_residual`] and [`d_omega`] are the
//! specializations of the decalage sign to arguments of degree 1.

use crate::artin::{ArtinAlgebra, Elem};
use crate::exactalg::{Mat, Matrix, Rat};
use crate::homalg::{CochainComplex, Contraction, GradedSpace};
use crate::poly::Poly;
use itertools::Itertools;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinfError {
    #[error("operation table value has a forbidden component: arity {arity}, key {key:?}")]
    ForbiddenComponent { arity: usize, key: Vec<usize> },
    #[error("invalid contraction data: {0}")]
    InvalidContraction(String),
    #[error("arity bound {have} too small, need {need}")]
    ArityTooSmall { need: usize, have: usize },
    #[error("bracket entry ({0},{1}) violates graded antisymmetry")]
    BadBracketEntry(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Shifted degree of a basis vector: cohomological degree minus one.
fn sd(space: &GradedSpace, g: usize) -> i32 {
    space.degree_of(g) - 1
}

fn odd(space: &GradedSpace, g: usize) -> bool {
    sd(space, g).rem_euclid(2) == 1
}

/// Sort a basis tuple into ascending index order, tracking the Koszul
/// sign on shifted degrees. `None` means the symmetric power vanishes
/// (a repeated index of odd shifted degree).
fn koszul_sort(space: &GradedSpace, tuple: &[usize]) -> Option<(Vec<usize>, Rat)> {
    let mut t = tuple.to_vec();
    let mut sign = 1i64;
    // insertion sort; adjacent swap of two odd entries flips the sign
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            if odd(space, t[j - 1]) && odd(space, t[j]) {
                sign = -sign;
            }
            t.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in t.windows(2) {
        if w[0] == w[1] && odd(space, w[0]) {
            return None;
        }
    }
    Some((t, Rat::from_integer(sign.into())))
}

/// Koszul sign of reading the tuple in the order given by `perm`
/// (a list of positions into `tuple`).
fn perm_koszul_sign(space: &GradedSpace, tuple: &[usize], perm: &[usize]) -> Rat {
    let mut sign = 1i64;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b]
                && odd(space, tuple[perm[a]])
                && odd(space, tuple[perm[b]])
            {
                sign = -sign;
            }
        }
    }
    Rat::from_integer(sign.into())
}

fn add_into(acc: &mut Vec<Rat>, v: &[Rat], c: &Rat) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += c.clone() * x.clone();
    }
}

fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// All partitions of `{0..n-1}` into unordered blocks; blocks are listed
/// in increasing order of their minimum, elements ascending.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut parts: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for e in 0..n {
        let mut next = Vec::new();
        for p in &parts {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(e);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![e]);
            next.push(q);
        }
        parts = next;
    }
    parts
}

/// An L-infinity algebra as a sparse table of shifted symmetric
/// operations on a graded basis.
#[derive(Clone, Debug)]
pub struct LInfinityAlgebra {
    pub space: GradedSpace,
    pub arity_bound: usize,
    /// `ops[n-1]` maps a sorted global-index tuple of length `n` to the
    /// dense value of `q_n` on that basis tuple.
    ops: Vec<BTreeMap<Vec<usize>, Vec<Rat>>>,
    pub weight_strict: bool,
}

impl LInfinityAlgebra {
    pub fn new(space: GradedSpace, arity_bound: usize, weight_strict: bool) -> Self {
        LInfinityAlgebra {
            space,
            arity_bound,
            ops: vec![BTreeMap::new(); arity_bound],
            weight_strict,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Record `q_n` on a basis tuple (any order; sorted and sign-adjusted
    /// on insertion).
    pub fn add_to_op(&mut self, n: usize, tuple: &[usize], value: Vec<Rat>) {
        assert_eq!(tuple.len(), n);
        assert!(n >= 1 && n <= self.arity_bound, "arity {n} out of bounds");
        assert_eq!(value.len(), self.total_dim());
        if is_zero_vec(&value) {
            return;
        }
        let (key, sign) = match koszul_sort(&self.space, tuple) {
            Some(ks) => ks,
            None => panic!("nonzero value on a vanishing symmetric tuple {tuple:?}"),
        };
        let dim = self.total_dim();
        let entry = self.ops[n - 1]
            .entry(key)
            .or_insert_with(|| vec![Rat::zero(); dim]);
        // stored = sign * given, since q(tuple) = sign * q(sorted)
        add_into(entry, &value, &sign);
        if is_zero_vec(entry) {
            let key2 = koszul_sort(&self.space, tuple).unwrap().0;
            self.ops[n - 1].remove(&key2);
        }
    }

    /// Evaluate `q_n` on a basis tuple in the given order.
    pub fn op(&self, n: usize, tuple: &[usize]) -> Vec<Rat> {
        let zero = vec![Rat::zero(); self.total_dim()];
        if n == 0 || n > self.arity_bound {
            return zero;
        }
        match koszul_sort(&self.space, tuple) {
            None => zero,
            Some((key, sign)) => match self.ops[n - 1].get(&key) {
                None => zero,
                Some(v) => v.iter().map(|x| x.clone() * sign.clone()).collect(),
            },
        }
    }

    /// Multilinear evaluation of `q_n` on dense arguments.
    pub fn eval_dense(&self, n: usize, args: &[Vec<Rat>]) -> Vec<Rat> {
        assert_eq!(args.len(), n);
        let mut acc = vec![Rat::zero(); self.total_dim()];
        let supports: Vec<Vec<usize>> = args
            .iter()
            .map(|a| (0..a.len()).filter(|&i| !a[i].is_zero()).collect())
            .collect();
        if supports.iter().any(|s| s.is_empty()) {
            return acc;
        }
        let mut idx = vec![0usize; n];
        'outer: loop {
            let tuple: Vec<usize> = (0..n).map(|j| supports[j][idx[j]]).collect();
            let mut coeff = Rat::one();
            for (j, &t) in tuple.iter().enumerate() {
                coeff *= args[j][t].clone();
            }
            let v = self.op(n, &tuple);
            add_into(&mut acc, &v, &coeff);
            // advance the mixed-radix counter
            for j in (0..n).rev() {
                idx[j] += 1;
                if idx[j] < supports[j].len() {
                    continue 'outer;
                }
                idx[j] = 0;
                if j == 0 {
                    break 'outer;
                }
            }
        }
        acc
    }

    /// `q_n(v, e_{rest_1}, ..., e_{rest_{n-1}})` with one dense argument.
    fn eval_dense_first(&self, n: usize, dense: &[Rat], rest: &[usize]) -> Vec<Rat> {
        let mut acc = vec![Rat::zero(); self.total_dim()];
        for (k, c) in dense.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut tuple = Vec::with_capacity(n);
            tuple.push(k);
            tuple.extend_from_slice(rest);
            let v = self.op(n, &tuple);
            add_into(&mut acc, &v, c);
        }
        acc
    }

    /// Evaluate every component of `Q \circ Q` on basis tuples up to the
    /// given arity; the report lists the violating `(arity, tuple)` pairs.
    pub fn check_axioms(&self, arity: usize) -> Vec<(usize, Vec<usize>)> {
        let mut bad = Vec::new();
        let dim = self.total_dim();
        for n in 1..=arity.min(self.arity_bound) {
            for tuple in (0..dim).combinations_with_replacement(n) {
                if koszul_sort(&self.space, &tuple).is_none() {
                    continue;
                }
                let mut acc = vec![Rat::zero(); dim];
                // sum over (i, n-i)-unshuffles realized as position subsets
                for mask in 1u32..(1 << n) {
                    let s: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
                    let sc: Vec<usize> = (0..n).filter(|j| mask & (1 << j) == 0).collect();
                    let i = s.len();
                    let perm: Vec<usize> = s.iter().chain(sc.iter()).copied().collect();
                    let eps = perm_koszul_sign(&self.space, &tuple, &perm);
                    let inner_tuple: Vec<usize> = s.iter().map(|&j| tuple[j]).collect();
                    let inner = self.op(i, &inner_tuple);
                    if is_zero_vec(&inner) {
                        continue;
                    }
                    let rest: Vec<usize> = sc.iter().map(|&j| tuple[j]).collect();
                    let term = self.eval_dense_first(n - i + 1, &inner, &rest);
                    add_into(&mut acc, &term, &eps);
                }
                if !is_zero_vec(&acc) {
                    bad.push((n, tuple));
                }
            }
        }
        bad
    }

    /// Table entries connecting mismatched weights (empty when the
    /// structure is weight-strict in fact, not just by declaration).
    pub fn weight_violations(&self) -> Vec<(usize, Vec<usize>, usize)> {
        let mut out = Vec::new();
        for (n0, table) in self.ops.iter().enumerate() {
            for (key, value) in table {
                let in_w: i64 = key.iter().map(|&g| self.space.weight_of(g)).sum();
                for (k, c) in value.iter().enumerate() {
                    if !c.is_zero() && self.space.weight_of(k) != in_w {
                        out.push((n0 + 1, key.clone(), k));
                    }
                }
            }
        }
        out
    }

    /// The differential `q_1` as a total-space matrix.
    pub fn differential_matrix(&self) -> Mat {
        let dim = self.total_dim();
        let mut d = Matrix::zero(dim, dim);
        if self.arity_bound >= 1 {
            for (key, value) in &self.ops[0] {
                for (r, c) in value.iter().enumerate() {
                    *d.at_mut(r, key[0]) = c.clone();
                }
            }
        }
        d
    }

    pub fn op_entries(&self, n: usize) -> impl Iterator<Item = (&Vec<usize>, &Vec<Rat>)> {
        self.ops[n - 1].iter()
    }

    pub fn is_op_zero(&self, n: usize) -> bool {
        n > self.arity_bound || self.ops[n - 1].is_empty()
    }
}

/// A DG Lie algebra: a cochain complex with a graded antisymmetric
/// bracket given by structure constants on basis pairs.
#[derive(Clone, Debug)]
pub struct DgLieAlgebra {
    pub complex: CochainComplex,
    /// Keyed by sorted global index pairs; the value is `[e_i, e_j]`
    /// dense over the total space.
    bracket: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl DgLieAlgebra {
    pub fn new(
        complex: CochainComplex,
        entries: Vec<((usize, usize), Vec<Rat>)>,
    ) -> Result<Self, LinfError> {
        let dim = complex.space.total_dim();
        let mut bracket: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
        for ((i, j), v) in entries {
            if v.len() != dim {
                return Err(LinfError::Shape(format!(
                    "bracket value for ({i},{j}) has length {} != {dim}",
                    v.len()
                )));
            }
            if is_zero_vec(&v) {
                continue;
            }
            let (key, val) = if i <= j {
                ((i, j), v)
            } else {
                // [e_i, e_j] = -(-1)^{|i||j|} [e_j, e_i]
                let di = complex.space.degree_of(i);
                let dj = complex.space.degree_of(j);
                let sgn = if (di * dj).rem_euclid(2) == 1 { 1 } else { -1 };
                ((j, i), v.iter().map(|x| x.clone() * Rat::from_integer(sgn.into())).collect())
            };
            if key.0 == key.1 && complex.space.degree_of(key.0).rem_euclid(2) == 0 {
                // [x,x] = 0 is forced for even x by antisymmetry
                return Err(LinfError::BadBracketEntry(key.0, key.1));
            }
            let e = bracket.entry(key).or_insert_with(|| vec![Rat::zero(); dim]);
            add_into(e, &val, &Rat::one());
        }
        bracket.retain(|_, v| !is_zero_vec(v));
        Ok(DgLieAlgebra { complex, bracket })
    }

    pub fn abelian(complex: CochainComplex) -> Self {
        DgLieAlgebra {
            complex,
            bracket: BTreeMap::new(),
        }
    }

    /// `[e_i, e_j]` in the given order.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        let dim = self.complex.space.total_dim();
        if i <= j {
            self.bracket.get(&(i, j)).cloned().unwrap_or_else(|| vec![Rat::zero(); dim])
        } else {
            let v = self.bracket_basis(j, i);
            let di = self.complex.space.degree_of(i);
            let dj = self.complex.space.degree_of(j);
            let sgn = if (di * dj).rem_euclid(2) == 1 { 1 } else { -1 };
            v.iter().map(|x| x.clone() * Rat::from_integer(sgn.into())).collect()
        }
    }

    pub fn bracket_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<Rat>)> {
        self.bracket.iter()
    }

    /// Bracket of dense total-space vectors.
    pub fn bracket_dense(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let dim = self.complex.space.total_dim();
        let mut acc = vec![Rat::zero(); dim];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let v = self.bracket_basis(i, j);
                add_into(&mut acc, &v, &(a.clone() * b.clone()));
            }
        }
        acc
    }
}

/// A DG module over a DG Lie algebra: a cochain complex with an action
/// `L^i x M^j -> M^{i+j}` given on basis pairs.
#[derive(Clone, Debug)]
pub struct DgModule {
    pub complex: CochainComplex,
    /// `(l global in L, xi global in M) -> l . xi` dense over M.
    action: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl DgModule {
    pub fn new(
        complex: CochainComplex,
        entries: Vec<((usize, usize), Vec<Rat>)>,
    ) -> Result<Self, LinfError> {
        let dim = complex.space.total_dim();
        let mut action: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
        for (key, v) in entries {
            if v.len() != dim {
                return Err(LinfError::Shape(format!(
                    "action value for {key:?} has length {} != {dim}",
                    v.len()
                )));
            }
            if is_zero_vec(&v) {
                continue;
            }
            let e = action.entry(key).or_insert_with(|| vec![Rat::zero(); dim]);
            add_into(e, &v, &Rat::one());
        }
        action.retain(|_, v| !is_zero_vec(v));
        Ok(DgModule { complex, action })
    }

    pub fn action_basis(&self, l: usize, xi: usize) -> Vec<Rat> {
        let dim = self.complex.space.total_dim();
        self.action
            .get(&(l, xi))
            .cloned()
            .unwrap_or_else(|| vec![Rat::zero(); dim])
    }

    pub fn action_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<Rat>)> {
        self.action.iter()
    }
}

/// Marked direct-sum decomposition used by the pair-sum construction.
/// Sum-space indices interleave per degree: within each degree the
/// algebra basis comes first, then the module basis.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub sum: GradedSpace,
    pub c: GradedSpace,
    pub m: GradedSpace,
    pub c_to_sum: Vec<usize>,
    pub m_to_sum: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    C(usize),
    M(usize),
}

impl Splitting {
    pub fn new(c: &GradedSpace, m: &GradedSpace) -> Self {
        let sum = c.direct_sum(m);
        let mut c_to_sum = Vec::with_capacity(c.total_dim());
        for n in c.degrees() {
            for i in 0..c.dim(n) {
                c_to_sum.push(sum.global_index(n, i));
            }
        }
        let mut m_to_sum = Vec::with_capacity(m.total_dim());
        for n in m.degrees() {
            for i in 0..m.dim(n) {
                m_to_sum.push(sum.global_index(n, c.dim(n) + i));
            }
        }
        Splitting {
            sum,
            c: c.clone(),
            m: m.clone(),
            c_to_sum,
            m_to_sum,
        }
    }

    pub fn part_of(&self, sum_idx: usize) -> Part {
        if let Some(i) = self.c_to_sum.iter().position(|&s| s == sum_idx) {
            Part::C(i)
        } else if let Some(i) = self.m_to_sum.iter().position(|&s| s == sum_idx) {
            Part::M(i)
        } else {
            panic!("sum index {sum_idx} out of range");
        }
    }

    pub fn embed_c(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.sum.total_dim()];
        for (i, x) in v.iter().enumerate() {
            out[self.c_to_sum[i]] = x.clone();
        }
        out
    }

    pub fn embed_m(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.sum.total_dim()];
        for (i, x) in v.iter().enumerate() {
            out[self.m_to_sum[i]] = x.clone();
        }
        out
    }

    pub fn project_c(&self, v: &[Rat]) -> Vec<Rat> {
        self.c_to_sum.iter().map(|&s| v[s].clone()).collect()
    }

    pub fn project_m(&self, v: &[Rat]) -> Vec<Rat> {
        self.m_to_sum.iter().map(|&s| v[s].clone()).collect()
    }
}

/// An L-infinity module: action maps `m_n : C^{n-1} x M -> M`, stored in
/// the shifted convention as the one-module-argument components of the
/// pair-sum operations, with the module argument last.
#[derive(Clone, Debug)]
pub struct LInfinityModule {
    pub space: GradedSpace,
    pub algebra_space: GradedSpace,
    pub arity_bound: usize,
    /// `ops[n-1]` maps (sorted C tuple of length n-1, M index) to the
    /// dense value in M.
    ops: Vec<BTreeMap<(Vec<usize>, usize), Vec<Rat>>>,
}

impl LInfinityModule {
    pub fn new(space: GradedSpace, algebra_space: GradedSpace, arity_bound: usize) -> Self {
        LInfinityModule {
            space,
            algebra_space,
            arity_bound,
            ops: vec![BTreeMap::new(); arity_bound],
        }
    }

    pub fn add_to_op(&mut self, n: usize, c_tuple: &[usize], m_idx: usize, value: Vec<Rat>) {
        assert_eq!(c_tuple.len(), n - 1);
        assert!(n >= 1 && n <= self.arity_bound);
        assert_eq!(value.len(), self.space.total_dim());
        if is_zero_vec(&value) {
            return;
        }
        let (key, sign) = match koszul_sort(&self.algebra_space, c_tuple) {
            Some(ks) => ks,
            None => panic!("nonzero value on a vanishing symmetric tuple"),
        };
        let dim = self.space.total_dim();
        let entry = self.ops[n - 1]
            .entry((key, m_idx))
            .or_insert_with(|| vec![Rat::zero(); dim]);
        add_into(entry, &value, &sign);
        if is_zero_vec(entry) {
            let key2 = koszul_sort(&self.algebra_space, c_tuple).unwrap().0;
            self.ops[n - 1].remove(&(key2, m_idx));
        }
    }

    pub fn op(&self, n: usize, c_tuple: &[usize], m_idx: usize) -> Vec<Rat> {
        let zero = vec![Rat::zero(); self.space.total_dim()];
        if n == 0 || n > self.arity_bound {
            return zero;
        }
        match koszul_sort(&self.algebra_space, c_tuple) {
            None => zero,
            Some((key, sign)) => match self.ops[n - 1].get(&(key, m_idx)) {
                None => zero,
                Some(v) => v.iter().map(|x| x.clone() * sign.clone()).collect(),
            },
        }
    }

    pub fn op_entries(&self, n: usize) -> impl Iterator<Item = (&(Vec<usize>, usize), &Vec<Rat>)> {
        self.ops[n - 1].iter()
    }

    pub fn is_op_zero(&self, n: usize) -> bool {
        n > self.arity_bound || self.ops[n - 1].is_empty()
    }
}

impl PartialEq for LInfinityModule {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.algebra_space == other.algebra_space
            && self.ops == other.ops
    }
}

/// View a DG Lie algebra as an L-infinity algebra: `q_1` is the decalage
/// of the differential and `q_2` that of the bracket; nothing higher.
pub fn from_dgla(l: &DgLieAlgebra, arity_bound: usize) -> LInfinityAlgebra {
    let space = l.complex.space.clone();
    let mut alg = LInfinityAlgebra::new(space.clone(), arity_bound.max(2), l.complex.weight_strict);
    let dim = space.total_dim();
    for n in space.degrees() {
        let dn = l.complex.d(n);
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
    for (&(i, j), v) in l.bracket_entries() {
        // decalage at n = 2: q_2(s x, s y) = (-1)^{deg x} s [x, y]
        let di = space.degree_of(i);
        let sgn = if di.rem_euclid(2) == 1 { -1 } else { 1 };
        let val: Vec<Rat> = v.iter().map(|x| x.clone() * Rat::from_integer(sgn.into())).collect();
        alg.add_to_op(2, &[i, j], val);
    }
    alg
}

/// The DG Lie algebra on `L \oplus M` with bracket
/// `[(l1, x1), (l2, x2)] = ([l1, l2], l1.x2 - (-1)^{|l2||x1|} l2.x1)`.
pub fn dg_pair_sum(l: &DgLieAlgebra, m: &DgModule) -> Result<(DgLieAlgebra, Splitting), LinfError> {
    let split = Splitting::new(&l.complex.space, &m.complex.space);
    let mut d = BTreeMap::new();
    for n in split.sum.degrees() {
        // per-degree basis order is (algebra, module), so the sum
        // differential is block diagonal in that order
        let dl = l.complex.d(n);
        let dm = m.complex.d(n);
        d.insert(n, dl.block_diag(&dm));
    }
    let weight_strict = l.complex.weight_strict && m.complex.weight_strict;
    let complex = CochainComplex::new(split.sum.clone(), d, weight_strict)
        .map_err(|e| LinfError::Shape(format!("pair-sum complex invalid: {e}")))?;
    let mut entries = Vec::new();
    for (&(i, j), v) in l.bracket_entries() {
        entries.push(((split.c_to_sum[i], split.c_to_sum[j]), split.embed_c(v)));
    }
    for (&(lg, xg), v) in m.action_entries() {
        entries.push(((split.c_to_sum[lg], split.m_to_sum[xg]), split.embed_m(v)));
    }
    let sum = DgLieAlgebra::new(complex, entries)?;
    Ok((sum, split))
}

/// Assemble the L-infinity algebra on `C \oplus M` from an algebra and a
/// module over it.
pub fn pair_to_sum(
    c: &LInfinityAlgebra,
    m: &LInfinityModule,
) -> (LInfinityAlgebra, Splitting) {
    assert_eq!(c.space, m.algebra_space, "module is not over this algebra");
    let split = Splitting::new(&c.space, &m.space);
    let arity = c.arity_bound.max(m.arity_bound);
    let mut sum = LInfinityAlgebra::new(split.sum.clone(), arity, c.weight_strict);
    for n in 1..=c.arity_bound {
        for (key, v) in c.op_entries(n) {
            let tuple: Vec<usize> = key.iter().map(|&i| split.c_to_sum[i]).collect();
            sum.add_to_op(n, &tuple, split.embed_c(v));
        }
    }
    for n in 1..=m.arity_bound {
        for ((c_tuple, m_idx), v) in m.op_entries(n) {
            let mut tuple: Vec<usize> = c_tuple.iter().map(|&i| split.c_to_sum[i]).collect();
            tuple.push(split.m_to_sum[*m_idx]);
            sum.add_to_op(n, &tuple, split.embed_m(v));
        }
    }
    (sum, split)
}

/// Recover the algebra and module from a sum structure with a marked
/// splitting; rejects operations that do not respect the pair shape.
pub fn sum_to_pair(
    s: &LInfinityAlgebra,
    split: &Splitting,
) -> Result<(LInfinityAlgebra, LInfinityModule), LinfError> {
    let mut c = LInfinityAlgebra::new(split.c.clone(), s.arity_bound, s.weight_strict);
    let mut m = LInfinityModule::new(split.m.clone(), split.c.clone(), s.arity_bound);
    for n in 1..=s.arity_bound {
        for (key, v) in s.op_entries(n) {
            let parts: Vec<Part> = key.iter().map(|&g| split.part_of(g)).collect();
            let m_count = parts.iter().filter(|p| matches!(p, Part::M(_))).count();
            match m_count {
                0 => {
                    let mv = split.project_m(v);
                    if !is_zero_vec(&mv) {
                        return Err(LinfError::ForbiddenComponent {
                            arity: n,
                            key: key.clone(),
                        });
                    }
                    let tuple: Vec<usize> = parts
                        .iter()
                        .map(|p| match p {
                            Part::C(i) => *i,
                            Part::M(_) => unreachable!(),
                        })
                        .collect();
                    c.add_to_op(n, &tuple, split.project_c(v));
                }
                1 => {
                    let cv = split.project_c(v);
                    if !is_zero_vec(&cv) {
                        return Err(LinfError::ForbiddenComponent {
                            arity: n,
                            key: key.clone(),
                        });
                    }
                    // move the module argument to the last slot
                    let m_pos = parts.iter().position(|p| matches!(p, Part::M(_))).unwrap();
                    let m_idx = match parts[m_pos] {
                        Part::M(i) => i,
                        Part::C(_) => unreachable!(),
                    };
                    let mut sign = 1i64;
                    for &g in &key[m_pos + 1..] {
                        if odd(&split.sum, key[m_pos]) && odd(&split.sum, g) {
                            sign = -sign;
                        }
                    }
                    let c_tuple: Vec<usize> = parts
                        .iter()
                        .filter_map(|p| match p {
                            Part::C(i) => Some(*i),
                            Part::M(_) => None,
                        })
                        .collect();
                    let value: Vec<Rat> = split
                        .project_m(v)
                        .iter()
                        .map(|x| x.clone() * Rat::from_integer(sign.into()))
                        .collect();
                    m.add_to_op(n, &c_tuple, m_idx, value);
                }
                _ => {
                    if !is_zero_vec(v) {
                        return Err(LinfError::ForbiddenComponent {
                            arity: n,
                            key: key.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok((c, m))
}

/// A weak L-infinity morphism from `source` to `target`, as the
/// components `f_n : Sym^n(source[1]) -> target[1]`.
#[derive(Clone, Debug)]
pub struct WeakMorphism {
    pub source: GradedSpace,
    pub target: GradedSpace,
    comps: Vec<BTreeMap<Vec<usize>, Vec<Rat>>>,
}

impl WeakMorphism {
    fn new(source: GradedSpace, target: GradedSpace, arity: usize) -> Self {
        WeakMorphism {
            source,
            target,
            comps: vec![BTreeMap::new(); arity],
        }
    }

    fn add_comp(&mut self, n: usize, tuple: &[usize], value: Vec<Rat>) {
        if is_zero_vec(&value) {
            return;
        }
        let (key, sign) = koszul_sort(&self.source, tuple).expect("vanishing tuple");
        let dim = self.target.total_dim();
        let entry = self.comps[n - 1]
            .entry(key)
            .or_insert_with(|| vec![Rat::zero(); dim]);
        add_into(entry, &value, &sign);
    }

    pub fn comp(&self, n: usize, tuple: &[usize]) -> Vec<Rat> {
        let zero = vec![Rat::zero(); self.target.total_dim()];
        if n == 0 || n > self.comps.len() {
            return zero;
        }
        match koszul_sort(&self.source, tuple) {
            None => zero,
            Some((key, sign)) => match self.comps[n - 1].get(&key) {
                None => zero,
                Some(v) => v.iter().map(|x| x.clone() * sign.clone()).collect(),
            },
        }
    }

    fn comp_dense_first(&self, n: usize, dense: &[Rat], rest: &[usize]) -> Vec<Rat> {
        let mut acc = vec![Rat::zero(); self.target.total_dim()];
        for (k, c) in dense.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut tuple = Vec::with_capacity(n);
            tuple.push(k);
            tuple.extend_from_slice(rest);
            let v = self.comp(n, &tuple);
            add_into(&mut acc, &v, c);
        }
        acc
    }

    /// `f_1` as a matrix (target dim x source dim).
    pub fn linear_part(&self) -> Mat {
        let mut m = Matrix::zero(self.target.total_dim(), self.source.total_dim());
        for j in 0..self.source.total_dim() {
            let v = self.comp(1, &[j]);
            for (r, x) in v.iter().enumerate() {
                *m.at_mut(r, j) = x.clone();
            }
        }
        m
    }

    /// Verify that the morphism commutes with the codifferentials up to
    /// the given arity; returns the violating tuples.
    pub fn check_morphism(
        &self,
        h: &LInfinityAlgebra,
        c: &LInfinityAlgebra,
        arity: usize,
    ) -> Vec<(usize, Vec<usize>)> {
        let mut bad = Vec::new();
        let hdim = self.source.total_dim();
        for n in 1..=arity {
            for tuple in (0..hdim).combinations_with_replacement(n) {
                if koszul_sort(&self.source, &tuple).is_none() {
                    continue;
                }
                // lhs: sum over partitions into k blocks of
                // eps * q^C_k(f_{B_1}, ..., f_{B_k})
                let mut lhs = vec![Rat::zero(); self.target.total_dim()];
                for p in set_partitions(n) {
                    let k = p.len();
                    if k > c.arity_bound {
                        continue;
                    }
                    let perm: Vec<usize> = p.iter().flatten().copied().collect();
                    let eps = perm_koszul_sign(&self.source, &tuple, &perm);
                    let args: Vec<Vec<Rat>> = p
                        .iter()
                        .map(|b| {
                            let bt: Vec<usize> = b.iter().map(|&j| tuple[j]).collect();
                            self.comp(b.len(), &bt)
                        })
                        .collect();
                    if args.iter().any(|a| is_zero_vec(a)) {
                        continue;
                    }
                    let term = c.eval_dense(k, &args);
                    add_into(&mut lhs, &term, &eps);
                }
                // rhs: sum over subsets S of eps(S) * f(q^H(x_S), x_{S^c})
                let mut rhs = vec![Rat::zero(); self.target.total_dim()];
                for mask in 1u32..(1 << n) {
                    let s: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
                    let sc: Vec<usize> = (0..n).filter(|j| mask & (1 << j) == 0).collect();
                    let i = s.len();
                    let perm: Vec<usize> = s.iter().chain(sc.iter()).copied().collect();
                    let eps = perm_koszul_sign(&self.source, &tuple, &perm);
                    let inner_tuple: Vec<usize> = s.iter().map(|&j| tuple[j]).collect();
                    let inner = h.op(i, &inner_tuple);
                    if is_zero_vec(&inner) {
                        continue;
                    }
                    let rest: Vec<usize> = sc.iter().map(|&j| tuple[j]).collect();
                    let term = self.comp_dense_first(n - i + 1, &inner, &rest);
                    add_into(&mut rhs, &term, &eps);
                }
                let diff: Vec<Rat> = lhs.iter().zip(&rhs).map(|(a, b)| a.clone() - b.clone()).collect();
                if !is_zero_vec(&diff) {
                    bad.push((n, tuple));
                }
            }
        }
        bad
    }
}

fn total_matrix(
    rows_space: &GradedSpace,
    cols_space: &GradedSpace,
    degree_shift: i32,
    get: impl Fn(i32) -> Mat,
) -> Mat {
    let mut m = Matrix::zero(rows_space.total_dim(), cols_space.total_dim());
    for n in cols_space.degrees() {
        let b = get(n);
        for c in 0..cols_space.dim(n) {
            for r in 0..b.rows() {
                let x = b.at(r, c).clone();
                if !x.is_zero() {
                    let gr = rows_space.global_index(n + degree_shift, r);
                    *m.at_mut(gr, cols_space.global_index(n, c)) = x;
                }
            }
        }
    }
    m
}

/// Homotopy transfer along side-condition contraction data: returns the
/// transferred structure on the cohomology together with the weak
/// morphism back into `c` (whose linear part is the inclusion).
pub fn transfer(
    c: &LInfinityAlgebra,
    ctr: &Contraction,
    arity_bound: usize,
) -> Result<(LInfinityAlgebra, WeakMorphism), LinfError> {
    let cs = &c.space;
    let hs = &ctr.cohomology;
    let cdim = cs.total_dim();
    let hdim = hs.total_dim();
    let i_tot = total_matrix(cs, hs, 0, |n| ctr.incl(n, cs));
    let p_tot = total_matrix(hs, cs, 0, |n| ctr.proj(n, cs));
    let h_tot = total_matrix(cs, cs, -1, |n| ctr.homotopy(n, cs));
    let d_tot = c.differential_matrix();

    // Validate the contraction against q_1.
    if p_tot.mul(&i_tot) != Matrix::identity(hdim) {
        return Err(LinfError::InvalidContraction("p i != id".into()));
    }
    let dh_hd = d_tot.mul(&h_tot).add(&h_tot.mul(&d_tot));
    let ip_id = i_tot.mul(&p_tot).add(&Matrix::identity(cdim).neg());
    if dh_hd != ip_id {
        return Err(LinfError::InvalidContraction("dh + hd != ip - id".into()));
    }
    for (name, m) in [
        ("h h", h_tot.mul(&h_tot)),
        ("p h", p_tot.mul(&h_tot)),
        ("h i", h_tot.mul(&i_tot)),
    ] {
        if !m.is_zero_matrix() {
            return Err(LinfError::InvalidContraction(format!("{name} != 0")));
        }
    }

    let mut out = LInfinityAlgebra::new(hs.clone(), arity_bound, c.weight_strict);
    let mut morphism = WeakMorphism::new(hs.clone(), cs.clone(), arity_bound);

    // psi on a tuple of H basis indices, memoized on the (ascending)
    // tuple; every block value i(x) or h(psi(...)) has even shifted
    // operator degree, so only argument-unshuffle Koszul signs occur.
    let mut memo: BTreeMap<Vec<usize>, Vec<Rat>> = BTreeMap::new();
    fn psi(
        args: &[usize],
        c: &LInfinityAlgebra,
        hs: &GradedSpace,
        i_tot: &Mat,
        h_tot: &Mat,
        memo: &mut BTreeMap<Vec<usize>, Vec<Rat>>,
    ) -> Vec<Rat> {
        if let Some(v) = memo.get(args) {
            return v.clone();
        }
        let n = args.len();
        let mut acc = vec![Rat::zero(); c.total_dim()];
        for p in set_partitions(n) {
            let k = p.len();
            if k < 2 || k > c.arity_bound {
                continue;
            }
            let perm: Vec<usize> = p.iter().flatten().copied().collect();
            let eps = perm_koszul_sign(hs, args, &perm);
            let mut blocks = Vec::with_capacity(k);
            let mut vanished = false;
            for b in &p {
                let v = if b.len() == 1 {
                    let mut e = vec![Rat::zero(); hs.total_dim()];
                    e[args[b[0]]] = Rat::one();
                    i_tot.apply(&e)
                } else {
                    let sub: Vec<usize> = b.iter().map(|&j| args[j]).collect();
                    let inner = psi(&sub, c, hs, i_tot, h_tot, memo);
                    h_tot.apply(&inner)
                };
                if is_zero_vec(&v) {
                    vanished = true;
                    break;
                }
                blocks.push(v);
            }
            if vanished {
                continue;
            }
            let term = c.eval_dense(k, &blocks);
            add_into(&mut acc, &term, &eps);
        }
        memo.insert(args.to_vec(), acc.clone());
        acc
    }

    for n in 1..=arity_bound {
        for tuple in (0..hdim).combinations_with_replacement(n) {
            if koszul_sort(hs, &tuple).is_none() {
                continue;
            }
            if n == 1 {
                let mut e = vec![Rat::zero(); hdim];
                e[tuple[0]] = Rat::one();
                let qi = c.eval_dense(1, &[i_tot.apply(&e)]);
                out.add_to_op(1, &tuple, p_tot.apply(&qi));
                morphism.add_comp(1, &tuple, i_tot.apply(&e));
            } else {
                let v = psi(&tuple, c, hs, &i_tot, &h_tot, &mut memo);
                out.add_to_op(n, &tuple, p_tot.apply(&v));
                morphism.add_comp(n, &tuple, h_tot.apply(&v));
            }
        }
    }
    Ok((out, morphism))
}

/// Coefficient rings for Maurer-Cartan computations: local Artin
/// algebras and untruncated polynomial rings share one interface.
pub trait CoeffRing {
    type Elem: Clone + PartialEq;
    fn zero_elem(&self) -> Self::Elem;
    fn one_elem(&self) -> Self::Elem;
    fn add_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale_elem(&self, a: &Self::Elem, c: &Rat) -> Self::Elem;
    fn is_zero_elem(&self, a: &Self::Elem) -> bool;
}

impl CoeffRing for ArtinAlgebra {
    type Elem = Elem;

    fn zero_elem(&self) -> Elem {
        self.zero()
    }

    fn one_elem(&self) -> Elem {
        self.one()
    }

    fn add_elem(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, b)
    }

    fn mul_elem(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul(a, b)
    }

    fn scale_elem(&self, a: &Elem, c: &Rat) -> Elem {
        self.scale(a, c)
    }

    fn is_zero_elem(&self, a: &Elem) -> bool {
        ArtinAlgebra::is_zero_elem(self, a)
    }
}

/// The polynomial ring `Q[t_1..t_n]` as a coefficient ring.
#[derive(Clone, Debug)]
pub struct PolyRing {
    pub nvars: usize,
}

impl CoeffRing for PolyRing {
    type Elem = Poly;

    fn zero_elem(&self) -> Poly {
        Poly::zero(self.nvars)
    }

    fn one_elem(&self) -> Poly {
        Poly::one(self.nvars)
    }

    fn add_elem(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn mul_elem(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b)
    }

    fn scale_elem(&self, a: &Poly, c: &Rat) -> Poly {
        a.scale(c)
    }

    fn is_zero_elem(&self, a: &Poly) -> bool {
        a.is_zero()
    }
}

fn factorial(n: usize) -> Rat {
    let mut acc = Rat::one();
    for k in 2..=n {
        acc *= Rat::from_integer((k as i64).into());
    }
    acc
}

/// Multisets of ring-coefficient supports of a given size, together with
/// the coefficient `1/prod(multiplicities!)` from expanding `omega^n/n!`.
fn omega_multisets<R: CoeffRing>(
    ring: &R,
    omega: &[R::Elem],
    n: usize,
) -> Vec<(Vec<usize>, Rat, R::Elem)> {
    let support: Vec<usize> = (0..omega.len())
        .filter(|&j| !ring.is_zero_elem(&omega[j]))
        .collect();
    let mut out = Vec::new();
    for multi in support.into_iter().combinations_with_replacement(n) {
        // 1 / prod multiplicities!
        let mut coeff = Rat::one();
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &j in &multi {
            *counts.entry(j).or_default() += 1;
        }
        for &c in counts.values() {
            coeff /= factorial(c);
        }
        let mut prod = ring.one_elem();
        for &j in &multi {
            prod = ring.mul_elem(&prod, &omega[j]);
        }
        out.push((multi, coeff, prod));
    }
    out
}

/// Maurer-Cartan residual `sum_n l_n(omega, ..., omega)/n!` of an element
/// `omega` of `C^1 \otimes m_A`, given by its coefficient vector over the
/// degree-1 basis of `C`. The result is dense over the total space (and
/// supported in degree 2).
pub fn mc_residual<R: CoeffRing>(
    alg: &LInfinityAlgebra,
    ring: &R,
    omega: &[R::Elem],
    max_arity: usize,
) -> Vec<R::Elem> {
    assert_eq!(omega.len(), alg.space.dim(1));
    let dim = alg.total_dim();
    let mut out: Vec<R::Elem> = (0..dim).map(|_| ring.zero_elem()).collect();
    for n in 1..=max_arity.min(alg.arity_bound) {
        // decalage at degree-1 arguments: l_n(w^n) = (-1)^{n(n-1)/2} q_n
        let sigma = if (n * (n - 1) / 2) % 2 == 1 { -1i64 } else { 1 };
        let sigma = Rat::from_integer(sigma.into());
        for (multi, coeff, prod) in omega_multisets(ring, omega, n) {
            let tuple: Vec<usize> = multi
                .iter()
                .map(|&j| alg.space.global_index(1, j))
                .collect();
            let v = alg.op(n, &tuple);
            if is_zero_vec(&v) {
                continue;
            }
            let c = sigma.clone() * coeff;
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    let t = ring.scale_elem(&prod, &(c.clone() * x.clone()));
                    out[k] = ring.add_elem(&out[k], &t);
                }
            }
        }
    }
    out
}

/// Components of a dense total-space vector of ring elements in a fixed
/// degree, as a vector over that degree's basis.
pub fn degree_components<E: Clone>(space: &GradedSpace, v: &[E], n: i32) -> Vec<E> {
    (0..space.dim(n))
        .map(|i| v[space.global_index(n, i)].clone())
        .collect()
}

/// Matrices over the coefficient ring of the twisted differential
/// `d_omega(xi) = sum_n m_{n+1}(omega, ..., omega, xi)/n!` on the module
/// part of a pair-sum algebra. Keyed by module degree `j`; the matrix
/// has `dim M^{j+1}` rows and `dim M^j` columns.
pub fn d_omega<R: CoeffRing>(
    sum: &LInfinityAlgebra,
    split: &Splitting,
    ring: &R,
    omega: &[R::Elem],
    max_arity: usize,
) -> BTreeMap<i32, Vec<Vec<R::Elem>>> {
    assert_eq!(omega.len(), split.c.dim(1));
    let mut out = BTreeMap::new();
    for j in split.m.degrees() {
        let cols = split.m.dim(j);
        let rows = split.m.dim(j + 1);
        if cols == 0 {
            continue;
        }
        let mut mat: Vec<Vec<R::Elem>> = (0..rows)
            .map(|_| (0..cols).map(|_| ring.zero_elem()).collect())
            .collect();
        for col in 0..cols {
            let xi_sum = split.m_to_sum[split.m.global_index(j, col)];
            let mut acc: Vec<R::Elem> = (0..sum.total_dim()).map(|_| ring.zero_elem()).collect();
            for n in 0..max_arity.min(sum.arity_bound) {
                if n + 1 > sum.arity_bound {
                    break;
                }
                // decalage with n degree-1 arguments then xi:
                // m_{n+1}(w^n, xi) = (-1)^{n(n+1)/2} q_{n+1}(sw^n, s xi)
                let sigma = if (n * (n + 1) / 2) % 2 == 1 { -1i64 } else { 1 };
                let sigma = Rat::from_integer(sigma.into());
                for (multi, coeff, prod) in omega_multisets(ring, omega, n) {
                    let mut tuple: Vec<usize> = multi
                        .iter()
                        .map(|&p| split.c_to_sum[split.c.global_index(1, p)])
                        .collect();
                    tuple.push(xi_sum);
                    let v = sum.op(n + 1, &tuple);
                    if is_zero_vec(&v) {
                        continue;
                    }
                    let c = sigma.clone() * coeff;
                    for (k, x) in v.iter().enumerate() {
                        if !x.is_zero() {
                            let t = ring.scale_elem(&prod, &(c.clone() * x.clone()));
                            acc[k] = ring.add_elem(&acc[k], &t);
                        }
                    }
                }
            }
            for row in 0..rows {
                let k = split.m_to_sum[split.m.global_index(j + 1, row)];
                mat[row][col] = acc[k].clone();
            }
        }
        out.insert(j, mat);
    }
    out
}

/// Nilpotent gauge action `e^lambda . omega` for a DG Lie algebra with
/// coefficients in an Artin algebra: the finite sums
/// `sum_k ad_lambda^k(omega)/k! - sum_k ad_lambda^k(d lambda)/(k+1)!`.
pub fn gauge_act(
    l: &DgLieAlgebra,
    a: &ArtinAlgebra,
    lambda: &[Elem],
    omega: &[Elem],
) -> Vec<Elem> {
    let sp = &l.complex.space;
    let dim0 = sp.dim(0);
    let dim1 = sp.dim(1);
    assert_eq!(lambda.len(), dim0);
    assert_eq!(omega.len(), dim1);
    // ad_lambda on L^1 tensor A, in local degree-1 coordinates
    let ad = |v: &Vec<Elem>| -> Vec<Elem> {
        let mut out: Vec<Elem> = (0..dim1).map(|_| a.zero()).collect();
        for p in 0..dim0 {
            if a.is_zero_elem(&lambda[p]) {
                continue;
            }
            for q in 0..dim1 {
                if a.is_zero_elem(&v[q]) {
                    continue;
                }
                let br = l.bracket_basis(sp.global_index(0, p), sp.global_index(1, q));
                let coeff = a.mul(&lambda[p], &v[q]);
                for k in 0..dim1 {
                    let x = &br[sp.global_index(1, k)];
                    if !x.is_zero() {
                        let t = a.scale(&coeff, x);
                        out[k] = a.add(&out[k], &t);
                    }
                }
            }
        }
        out
    };
    let max_iter = a.order + 2;
    let mut result: Vec<Elem> = omega.to_vec();
    // sum_{k>=1} ad^k(omega)/k!
    let mut term = omega.to_vec();
    for k in 1..=max_iter {
        term = ad(&term);
        let inv = Rat::one() / Rat::from_integer((k as i64).into());
        term = term.iter().map(|e| a.scale(e, &inv)).collect();
        if term.iter().all(|e| a.is_zero_elem(e)) {
            break;
        }
        for (r, t) in result.iter_mut().zip(&term) {
            *r = a.add(r, t);
        }
    }
    // - sum_{k>=0} ad^k(d lambda)/(k+1)!
    let d0 = l.complex.d(0);
    let mut dl: Vec<Elem> = (0..dim1).map(|_| a.zero()).collect();
    for r in 0..dim1 {
        for c in 0..dim0 {
            let x = d0.at(r, c);
            if !x.is_zero() {
                let t = a.scale(&lambda[c], x);
                dl[r] = a.add(&dl[r], &t);
            }
        }
    }
    let mut term = dl;
    for k in 0..=max_iter {
        if k > 0 {
            term = ad(&term);
        }
        if term.iter().all(|e| a.is_zero_elem(e)) {
            break;
        }
        let fact = Rat::one() / factorial(k + 1);
        for (r, t) in result.iter_mut().zip(&term) {
            let s = a.scale(t, &fact);
            *r = a.sub(r, &s);
        }
    }
    result
}
