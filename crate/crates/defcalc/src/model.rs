//! Model files and the pipeline.
//!
//! A model file is a single JSON document describing a DG Lie algebra
//! with an optional DG module and an optional augmentation, all with
//! integer weights and sparse structure constants whose scalars are
//! exact rationals written as `"p/q"` strings. The pipeline runs:
//! validate, cone, contraction, homotopy transfer, deformation ring,
//! universal derivation, jump ideals, graded report and (optionally)
//! resonance, and emits a deterministic report.

use crate::artin::{graded_pieces, hilbert_data, ArtinError, GradedPieces, Ideal};
use crate::cone::{build_cone, build_cone_module, Augmentation, ConeError, LieAlgebra};
use crate::defring::{
    deformation_ring, graded_report, jump_ideal, universal_derivation, DefringError,
    UniversalComplex,
};
use crate::exactalg::{format_rat, parse_rat, Mat, Matrix, Rat};
use crate::homalg::{cohomology, contraction, CochainComplex, GradedSpace};
use crate::linf::{
    dg_pair_sum, from_dgla, mc_residual, pair_to_sum, sum_to_pair, transfer, DgLieAlgebra,
    DgModule, LInfinityAlgebra, LInfinityModule, LinfError, Splitting,
};
use crate::resonance::{
    action_arity_bound, action_bound_violations, resonance_ideal, resonance_point_test,
    sample_grid, ResonanceError,
};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisVector {
    pub label: String,
    #[serde(default)]
    pub weight: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeSection {
    pub degree: i32,
    pub basis: Vec<BasisVector>,
}

/// `d(from) += coeff * to` (also used for the augmentation matrix).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiffEntry {
    pub from: String,
    pub to: String,
    pub coeff: String,
}

/// `[left, right] += coeff * to`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub to: String,
    pub coeff: String,
}

/// `by . on += coeff * to` for the module action.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ActionEntry {
    pub by: String,
    pub on: String,
    pub to: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraSection {
    pub degrees: Vec<DegreeSection>,
    #[serde(default)]
    pub differential: Vec<DiffEntry>,
    #[serde(default)]
    pub bracket: Vec<BracketEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModuleSection {
    pub degrees: Vec<DegreeSection>,
    #[serde(default)]
    pub differential: Vec<DiffEntry>,
    #[serde(default)]
    pub action: Vec<ActionEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AugmentationSection {
    pub basis: Vec<BasisVector>,
    #[serde(default)]
    pub bracket: Vec<BracketEntry>,
    #[serde(default)]
    pub eps: Vec<DiffEntry>,
}

fn default_order() -> usize {
    3
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunSection {
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub arity: Option<usize>,
    #[serde(default)]
    pub ik: Vec<(i32, usize)>,
    #[serde(default)]
    pub resonance: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            order: default_order(),
            arity: None,
            ik: Vec::new(),
            resonance: false,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModelFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default = "default_true")]
    pub weight_strict: bool,
    pub algebra: AlgebraSection,
    #[serde(default)]
    pub module: Option<ModuleSection>,
    #[serde(default)]
    pub augmentation: Option<AugmentationSection>,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read model file: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema version {0} (this build reads version {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("malformed rational \"{text}\" in {context}")]
    MalformedRational { context: String, text: String },
    #[error("{context} references unknown basis vector \"{label}\"")]
    DanglingReference { context: String, label: String },
    #[error("duplicate basis label \"{0}\"")]
    DuplicateLabel(String),
    #[error("{context}: \"{to}\" is not in the degree required by \"{from}\"")]
    DegreeMismatch {
        context: String,
        from: String,
        to: String,
    },
    #[error("structure validation failed: {0}")]
    Build(String),
}

impl From<serde_json::Error> for ModelError {
    fn from(e: serde_json::Error) -> Self {
        ModelError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub fn parse_model_str(text: &str) -> Result<ModelFile, ModelError> {
    let model: ModelFile = serde_json::from_str(text)?;
    if model.schema_version != SCHEMA_VERSION {
        return Err(ModelError::SchemaVersion(model.schema_version));
    }
    build(&model)?; // full structural validation
    Ok(model)
}

pub fn parse_model(path: &std::path::Path) -> Result<ModelFile, ModelError> {
    parse_model_str(&std::fs::read_to_string(path)?)
}

pub fn emit_model(model: &ModelFile) -> String {
    serde_json::to_string_pretty(model).expect("model serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Building mathematical objects from a model
// ---------------------------------------------------------------------------

struct Resolver {
    space: GradedSpace,
    index: BTreeMap<String, usize>,
}

fn build_space(sections: &[DegreeSection]) -> Result<Resolver, ModelError> {
    if sections.is_empty() {
        let space = GradedSpace::new(0, vec![vec![]], vec![vec![]]);
        return Ok(Resolver {
            space,
            index: BTreeMap::new(),
        });
    }
    let n_min = sections.iter().map(|s| s.degree).min().unwrap();
    let n_max = sections.iter().map(|s| s.degree).max().unwrap();
    let count = (n_max - n_min + 1) as usize;
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); count];
    let mut weights: Vec<Vec<i64>> = vec![Vec::new(); count];
    for s in sections {
        let slot = (s.degree - n_min) as usize;
        for b in &s.basis {
            labels[slot].push(b.label.clone());
            weights[slot].push(b.weight);
        }
    }
    let space = GradedSpace::new(n_min, labels, weights);
    let mut index = BTreeMap::new();
    for n in space.degrees() {
        for i in 0..space.dim(n) {
            let label = space.label(n, i).to_string();
            if index.insert(label.clone(), space.global_index(n, i)).is_some() {
                return Err(ModelError::DuplicateLabel(label));
            }
        }
    }
    Ok(Resolver { space, index })
}

impl Resolver {
    fn resolve(&self, context: &str, label: &str) -> Result<usize, ModelError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| ModelError::DanglingReference {
                context: context.to_string(),
                label: label.to_string(),
            })
    }
}

fn parse_coeff(context: &str, text: &str) -> Result<Rat, ModelError> {
    parse_rat(text).map_err(|_| ModelError::MalformedRational {
        context: context.to_string(),
        text: text.to_string(),
    })
}

fn build_differential(
    r: &Resolver,
    entries: &[DiffEntry],
    context: &str,
) -> Result<BTreeMap<i32, Mat>, ModelError> {
    let mut d: BTreeMap<i32, Mat> = BTreeMap::new();
    for e in entries {
        let gf = r.resolve(context, &e.from)?;
        let gt = r.resolve(context, &e.to)?;
        let (nf, lf) = r.space.locate(gf);
        let (nt, lt) = r.space.locate(gt);
        if nt != nf + 1 {
            return Err(ModelError::DegreeMismatch {
                context: context.to_string(),
                from: e.from.clone(),
                to: e.to.clone(),
            });
        }
        let coeff = parse_coeff(context, &e.coeff)?;
        let m = d
            .entry(nf)
            .or_insert_with(|| Matrix::zero(r.space.dim(nf + 1), r.space.dim(nf)));
        *m.at_mut(lt, lf) = m.at(lt, lf).clone() + coeff;
    }
    Ok(d)
}

fn dense_unit(dim: usize, at: usize, coeff: Rat) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[at] = coeff;
    v
}

pub struct Built {
    pub l: DgLieAlgebra,
    pub m: Option<DgModule>,
    pub aug: Option<Augmentation>,
}

pub fn build(model: &ModelFile) -> Result<Built, ModelError> {
    let ra = build_space(&model.algebra.degrees)?;
    let d = build_differential(&ra, &model.algebra.differential, "algebra differential")?;
    let complex = CochainComplex::new(ra.space.clone(), d, model.weight_strict)
        .map_err(|e| ModelError::Build(e.to_string()))?;
    let dim = ra.space.total_dim();
    let mut bracket_entries = Vec::new();
    for e in &model.algebra.bracket {
        let gl = ra.resolve("algebra bracket", &e.left)?;
        let gr = ra.resolve("algebra bracket", &e.right)?;
        let gt = ra.resolve("algebra bracket", &e.to)?;
        if ra.space.degree_of(gt) != ra.space.degree_of(gl) + ra.space.degree_of(gr) {
            return Err(ModelError::DegreeMismatch {
                context: "algebra bracket".to_string(),
                from: format!("[{}, {}]", e.left, e.right),
                to: e.to.clone(),
            });
        }
        let coeff = parse_coeff("algebra bracket", &e.coeff)?;
        bracket_entries.push(((gl, gr), dense_unit(dim, gt, coeff)));
    }
    let l = DgLieAlgebra::new(complex, bracket_entries)
        .map_err(|e| ModelError::Build(e.to_string()))?;

    let m = match &model.module {
        None => None,
        Some(section) => {
            let rm = build_space(&section.degrees)?;
            let dm = build_differential(&rm, &section.differential, "module differential")?;
            let mcomplex = CochainComplex::new(rm.space.clone(), dm, model.weight_strict)
                .map_err(|e| ModelError::Build(e.to_string()))?;
            let mdim = rm.space.total_dim();
            let mut action_entries = Vec::new();
            for e in &section.action {
                let gb = ra.resolve("module action", &e.by)?;
                let gon = rm.resolve("module action", &e.on)?;
                let gt = rm.resolve("module action", &e.to)?;
                if rm.space.degree_of(gt)
                    != ra.space.degree_of(gb) + rm.space.degree_of(gon)
                {
                    return Err(ModelError::DegreeMismatch {
                        context: "module action".to_string(),
                        from: format!("{} . {}", e.by, e.on),
                        to: e.to.clone(),
                    });
                }
                let coeff = parse_coeff("module action", &e.coeff)?;
                action_entries.push(((gb, gon), dense_unit(mdim, gt, coeff)));
            }
            Some(
                DgModule::new(mcomplex, action_entries)
                    .map_err(|e| ModelError::Build(e.to_string()))?,
            )
        }
    };

    let aug = match &model.augmentation {
        None => None,
        Some(section) => {
            let glabels: Vec<String> = section.basis.iter().map(|b| b.label.clone()).collect();
            let gweights: Vec<i64> = section.basis.iter().map(|b| b.weight).collect();
            let gindex: BTreeMap<String, usize> = glabels
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect();
            let gdim = glabels.len();
            let resolve_g = |context: &str, label: &str| -> Result<usize, ModelError> {
                gindex
                    .get(label)
                    .copied()
                    .ok_or_else(|| ModelError::DanglingReference {
                        context: context.to_string(),
                        label: label.to_string(),
                    })
            };
            let mut gb_entries = Vec::new();
            for e in &section.bracket {
                let i = resolve_g("augmentation bracket", &e.left)?;
                let j = resolve_g("augmentation bracket", &e.right)?;
                let t = resolve_g("augmentation bracket", &e.to)?;
                let coeff = parse_coeff("augmentation bracket", &e.coeff)?;
                gb_entries.push(((i, j), dense_unit(gdim, t, coeff)));
            }
            let target = LieAlgebra::new(glabels, gweights, gb_entries)
                .map_err(|e| ModelError::Build(e.to_string()))?;
            let l0 = ra.space.dim(0);
            let mut eps: Mat = Matrix::zero(gdim, l0);
            for e in &section.eps {
                let gf = ra.resolve("augmentation map", &e.from)?;
                let (nf, lf) = ra.space.locate(gf);
                if nf != 0 {
                    return Err(ModelError::DegreeMismatch {
                        context: "augmentation map".to_string(),
                        from: e.from.clone(),
                        to: e.to.clone(),
                    });
                }
                let t = resolve_g("augmentation map", &e.to)?;
                let coeff = parse_coeff("augmentation map", &e.coeff)?;
                *eps.at_mut(t, lf) = eps.at(t, lf).clone() + coeff;
            }
            Some(
                Augmentation::new(l.clone(), target, eps)
                    .map_err(|e| ModelError::Build(e.to_string()))?,
            )
        }
    };

    Ok(Built { l, m, aug })
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub order: usize,
    pub arity: Option<usize>,
    pub ik: Vec<(i32, usize)>,
    pub resonance: bool,
    pub minor_cap: u128,
}

impl RunOptions {
    pub fn from_model(m: &ModelFile) -> Self {
        RunOptions {
            order: m.run.order,
            arity: m.run.arity,
            ik: m.run.ik.clone(),
            resonance: m.run.resonance,
            minor_cap: crate::artin::DEFAULT_MINOR_CAP,
        }
    }

    /// Effective arity bound: enough for the truncation order, never
    /// below the user's request.
    pub fn effective_arity(&self) -> usize {
        self.arity.unwrap_or(0).max(self.order + 1).max(2)
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("mathematical check failed: {0}")]
    Math(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

impl PipelineError {
    /// CLI exit code: 1 for mathematical failures, 2 for input or
    /// resource problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Model(_) | PipelineError::Resource(_) => 2,
            PipelineError::Hypothesis(_) | PipelineError::Math(_) => 1,
        }
    }
}

impl From<ConeError> for PipelineError {
    fn from(e: ConeError) -> Self {
        PipelineError::Math(e.to_string())
    }
}

impl From<LinfError> for PipelineError {
    fn from(e: LinfError) -> Self {
        PipelineError::Math(e.to_string())
    }
}

impl From<DefringError> for PipelineError {
    fn from(e: DefringError) -> Self {
        match e {
            DefringError::Artin(ArtinError::MinorCapExceeded { needed, cap }) => {
                PipelineError::Resource(format!(
                    "minor enumeration needs {needed} determinants, cap is {cap}"
                ))
            }
            other => PipelineError::Math(other.to_string()),
        }
    }
}

impl From<ResonanceError> for PipelineError {
    fn from(e: ResonanceError) -> Self {
        match e {
            ResonanceError::MinorCapExceeded { needed, cap } => {
                PipelineError::Resource(format!(
                    "minor enumeration needs {needed} determinants, cap is {cap}"
                ))
            }
            other => PipelineError::Math(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceReport {
    pub degrees: Vec<(i32, Vec<String>, Vec<i64>)>,
}

fn space_report(s: &GradedSpace) -> SpaceReport {
    SpaceReport {
        degrees: s
            .degrees()
            .map(|n| {
                (
                    n,
                    (0..s.dim(n)).map(|i| s.label(n, i).to_string()).collect(),
                    s.weights_at(n).to_vec(),
                )
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RingReport {
    pub generators: Vec<String>,
    pub generator_weights: Vec<i64>,
    pub relations: Vec<String>,
    pub dim: usize,
    pub hilbert: Vec<(usize, i64, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JumpReport {
    pub i: i32,
    pub k: usize,
    pub generators: Vec<String>,
    pub is_zero: bool,
    pub is_unit: bool,
    pub hilbert: Vec<(usize, i64, usize)>,
    /// Weight -> dimension when homogeneous; the witness otherwise.
    pub graded: Result<Vec<(i64, usize)>, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedReportOut {
    pub passed: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonanceGridRow {
    pub point: Vec<String>,
    pub ideal_vanishes: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonanceIdealReport {
    pub i: i32,
    pub k: usize,
    pub generators: Vec<String>,
    pub grid: Vec<ResonanceGridRow>,
    pub agreement: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonanceReport {
    pub action_arity_bound: usize,
    pub bound_violations: Vec<usize>,
    pub ideals: Vec<ResonanceIdealReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub name: String,
    pub order: usize,
    pub arity: usize,
    pub hypotheses: Vec<HypothesisCheck>,
    pub axiom_failures: Vec<String>,
    pub weight_violations: usize,
    pub cone_space: Option<SpaceReport>,
    pub transferred_algebra: Option<SpaceReport>,
    pub transferred_module: Option<SpaceReport>,
    pub ring: Option<RingReport>,
    pub mc_residual_zero: Option<bool>,
    pub d_u_squared_zero: Option<bool>,
    pub jumps: Vec<JumpReport>,
    pub graded: Option<GradedReportOut>,
    pub resonance: Option<ResonanceReport>,
    pub math_failures: Vec<String>,
    /// Wall-clock duration; excluded from determinism guarantees.
    pub timing_ms: u128,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.math_failures.is_empty()
            && self.hypotheses.iter().all(|h| h.ok)
            && self.axiom_failures.is_empty()
            && self.weight_violations == 0
            && self.graded.as_ref().map_or(true, |g| g.passed)
            && self
                .resonance
                .as_ref()
                .map_or(true, |r| r.ideals.iter().all(|i| i.agreement))
    }
}

/// How far to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Validate,
    Axioms,
    Transfer,
    Defring,
    Jump,
    Resonance,
    Full,
}

fn hypothesis_checks(built: &Built) -> Vec<HypothesisCheck> {
    let mut out = Vec::new();
    let (hl, incl) = cohomology(&built.l.complex);
    let bad: Vec<i32> = hl.degrees().filter(|&n| n < 0 && hl.dim(n) > 0).collect();
    out.push(HypothesisCheck {
        name: "H^{<0}(L) = 0".to_string(),
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            "no cohomology below degree 0".to_string()
        } else {
            format!("nonzero cohomology in degrees {bad:?}")
        },
    });
    out.push(HypothesisCheck {
        name: "M bounded above".to_string(),
        ok: true,
        detail: "finite-dimensional model".to_string(),
    });
    if let Some(aug) = &built.aug {
        let h0 = hl.dim(0);
        let rank = match incl.get(&0) {
            Some(i0) => aug.eps.mul(i0).rank(),
            None => 0,
        };
        out.push(HypothesisCheck {
            name: "eps injective on H^0(L)".to_string(),
            ok: rank == h0,
            detail: format!("dim H^0(L) = {h0}, rank of eps restricted to it = {rank}"),
        });
    }
    out
}

/// The transferred pair on cohomology, reached through the cone when an
/// augmentation is present.
pub struct TransferredPair {
    pub cone_space: Option<GradedSpace>,
    pub hc: LInfinityAlgebra,
    pub hm: Option<LInfinityModule>,
}

pub fn transfer_pair(built: &Built, arity: usize) -> Result<TransferredPair, PipelineError> {
    let (c_linf, m_linf, c_complex, m_complex, cone_space) = match (&built.aug, &built.m) {
        (Some(aug), Some(m)) => {
            let (cone, module) = build_cone_module(aug, m, arity)?;
            (
                cone.algebra.clone(),
                Some(module),
                cone.complex.clone(),
                Some(m.complex.clone()),
                Some(cone.complex.space.clone()),
            )
        }
        (Some(aug), None) => {
            let cone = build_cone(aug, arity)?;
            (
                cone.algebra.clone(),
                None,
                cone.complex.clone(),
                None,
                Some(cone.complex.space.clone()),
            )
        }
        (None, Some(m)) => {
            let (sum_dgla, split) = dg_pair_sum(&built.l, m)?;
            let sum_linf = from_dgla(&sum_dgla, arity);
            let (c2, m2) = sum_to_pair(&sum_linf, &split)?;
            (
                c2,
                Some(m2),
                built.l.complex.clone(),
                Some(m.complex.clone()),
                None,
            )
        }
        (None, None) => (
            from_dgla(&built.l, arity),
            None,
            built.l.complex.clone(),
            None,
            None,
        ),
    };

    let ctr_c = contraction(&c_complex);
    match (m_linf, m_complex) {
        (Some(ml), Some(mc)) => {
            let ctr_m = contraction(&mc);
            let (sum_linf, _) = pair_to_sum(&c_linf, &ml);
            let ctr_sum = ctr_c.direct_sum(&ctr_m, &c_complex.space, &mc.space);
            let (t_sum, _morphism) = transfer(&sum_linf, &ctr_sum, arity)?;
            let h_split = Splitting::new(&ctr_c.cohomology, &ctr_m.cohomology);
            let (hc, hm) = sum_to_pair(&t_sum, &h_split)?;
            Ok(TransferredPair {
                cone_space,
                hc,
                hm: Some(hm),
            })
        }
        _ => {
            let (hc, _morphism) = transfer(&c_linf, &ctr_c, arity)?;
            Ok(TransferredPair {
                cone_space,
                hc,
                hm: None,
            })
        }
    }
}

fn elem_strings(ring: &crate::artin::ArtinAlgebra, elems: &[crate::artin::Elem]) -> Vec<String> {
    elems.iter().map(|e| ring.render_elem(e)).collect()
}

pub fn run_stage(
    model: &ModelFile,
    opts: &RunOptions,
    stage: Stage,
) -> Result<RunReport, PipelineError> {
    let start = std::time::Instant::now();
    let arity = opts.effective_arity();
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        name: model.name.clone(),
        order: opts.order,
        arity,
        hypotheses: Vec::new(),
        axiom_failures: Vec::new(),
        weight_violations: 0,
        cone_space: None,
        transferred_algebra: None,
        transferred_module: None,
        ring: None,
        mc_residual_zero: None,
        d_u_squared_zero: None,
        jumps: Vec::new(),
        graded: None,
        resonance: None,
        math_failures: Vec::new(),
        timing_ms: 0,
    };

    let built = build(model)?;
    report.hypotheses = hypothesis_checks(&built);
    if let Some(h) = report.hypotheses.iter().find(|h| !h.ok) {
        return Err(PipelineError::Hypothesis(format!("{}: {}", h.name, h.detail)));
    }
    if stage == Stage::Validate {
        report.timing_ms = start.elapsed().as_millis();
        return Ok(report);
    }

    let pair = transfer_pair(&built, arity)?;
    report.cone_space = pair.cone_space.as_ref().map(space_report);
    report.transferred_algebra = Some(space_report(&pair.hc.space));
    report.transferred_module = pair.hm.as_ref().map(|m| space_report(&m.space));

    // Axiom check on the transferred algebra (the structure everything
    // downstream consumes).
    report.axiom_failures = pair
        .hc
        .check_axioms(arity.min(5))
        .into_iter()
        .map(|(n, tuple)| format!("Q∘Q != 0 at arity {n}, tuple {tuple:?}"))
        .collect();
    if model.weight_strict {
        report.weight_violations = pair.hc.weight_violations().len();
    }
    if stage == Stage::Axioms || stage == Stage::Transfer {
        report.timing_ms = start.elapsed().as_millis();
        return Ok(report);
    }
    if !report.axiom_failures.is_empty() {
        return Err(PipelineError::Math(report.axiom_failures[0].clone()));
    }

    let def = deformation_ring(&pair.hc, opts.order)?;
    let residual = mc_residual(&pair.hc, &def.ring, &def.omega_u, opts.order);
    let residual_zero = residual.iter().all(|e| def.ring.is_zero_elem(e));
    report.mc_residual_zero = Some(residual_zero);
    if !residual_zero {
        report
            .math_failures
            .push("mc_residual(omega_u) != 0 over R_n".to_string());
    }
    report.ring = Some(RingReport {
        generators: def.presentation.generators.clone(),
        generator_weights: def.presentation.gen_weights.clone(),
        relations: elem_strings(&def.presentation.algebra, &def.relations),
        dim: def.ring.dim(),
        hilbert: hilbert_data(&def.ring, None),
    });
    if stage == Stage::Defring {
        report.timing_ms = start.elapsed().as_millis();
        return Ok(report);
    }

    let mut ideals: Vec<(i32, usize, Ideal)> = Vec::new();
    let mut universal: Option<UniversalComplex> = None;
    if let Some(hm) = &pair.hm {
        let u = universal_derivation(&pair.hc, hm, &def);
        let squared = u.is_complex();
        report.d_u_squared_zero = Some(squared);
        if !squared {
            report
                .math_failures
                .push("d_u ∘ d_u != 0 over R_n".to_string());
        }
        for &(i, k) in &opts.ik {
            let ideal = jump_ideal(&u, i, k, opts.minor_cap)?;
            let graded = match graded_pieces(&def.ring, &ideal).map_err(DefringError::from)? {
                GradedPieces::Homogeneous(p) => {
                    Ok(p.into_iter().map(|(w, v)| (w, v.len())).collect())
                }
                GradedPieces::Witness(w) => Err(def.ring.render_elem(&w)),
            };
            report.jumps.push(JumpReport {
                i,
                k,
                generators: elem_strings(&def.ring, &ideal.generators()),
                is_zero: ideal.is_zero(),
                is_unit: ideal.is_unit(&def.ring),
                hilbert: hilbert_data(&def.ring, Some(&ideal)),
                graded,
            });
            ideals.push((i, k, ideal));
        }
        universal = Some(u);
    }
    let _ = universal;
    if stage == Stage::Jump {
        report.timing_ms = start.elapsed().as_millis();
        return Ok(report);
    }

    {
        let g = graded_report(&pair.hc.space, &def, &ideals)?;
        let mut witnesses = Vec::new();
        if let Some(w) = &g.imc_witness {
            witnesses.push(format!(
                "I_MC inhomogeneous: {}",
                def.presentation.algebra.render_elem(w)
            ));
        }
        for (i, j, k) in &g.ring_violations {
            witnesses.push(format!("ring multiplication breaks weights at ({i},{j}) -> {k}"));
        }
        for j in &g.omega_u_violations {
            witnesses.push(format!("omega_u component {j} is not of the dual weight"));
        }
        for ((i, k), w) in &g.jump_witnesses {
            witnesses.push(format!(
                "J_{k}^{i} inhomogeneous: {}",
                def.ring.render_elem(w)
            ));
        }
        report.graded = Some(GradedReportOut {
            passed: g.passed(),
            witnesses,
        });
    }

    if opts.resonance && stage >= Stage::Resonance {
        if let Some(hm) = &pair.hm {
            let h1_weights = pair.hc.space.weights_at(1).to_vec();
            let mut hm_weights = Vec::new();
            for n in hm.space.degrees() {
                hm_weights.extend_from_slice(hm.space.weights_at(n));
            }
            let bound = action_arity_bound(&h1_weights, &hm_weights)?;
            let bound_violations = action_bound_violations(hm, bound);
            let var_names: Vec<String> = (1..=pair.hc.space.dim(1))
                .map(|j| format!("t{j}"))
                .collect();
            let grid = sample_grid(pair.hc.space.dim(1), 25);
            let mut ideal_reports = Vec::new();
            for &(i, k) in &opts.ik {
                let ideal = resonance_ideal(&pair.hc, hm, i, k, opts.minor_cap)?;
                let mut rows = Vec::new();
                let mut agreement = true;
                for point in &grid {
                    let vanishes = ideal.vanishes_at(point);
                    let oracle = resonance_point_test(&pair.hc, hm, point, i, k)?;
                    if vanishes != oracle {
                        agreement = false;
                    }
                    rows.push(ResonanceGridRow {
                        point: point.iter().map(format_rat).collect(),
                        ideal_vanishes: vanishes,
                        oracle,
                    });
                }
                if !agreement {
                    report.math_failures.push(format!(
                        "resonance ideal and point oracle disagree at (i,k)=({i},{k})"
                    ));
                }
                ideal_reports.push(ResonanceIdealReport {
                    i,
                    k,
                    generators: ideal
                        .generators
                        .iter()
                        .map(|g| g.render(&var_names))
                        .collect(),
                    grid: rows,
                    agreement,
                });
            }
            if !bound_violations.is_empty() {
                report.math_failures.push(format!(
                    "action maps beyond the weight bound are nonzero at arities {bound_violations:?}"
                ));
            }
            report.resonance = Some(ResonanceReport {
                action_arity_bound: bound,
                bound_violations,
                ideals: ideal_reports,
            });
        }
    }

    report.timing_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn run_pipeline(model: &ModelFile, opts: &RunOptions) -> Result<RunReport, PipelineError> {
    run_stage(model, opts, Stage::Full)
}
