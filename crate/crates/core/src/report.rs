//! Versioned, serializable reports produced by the command-line front end.
//!
//! Coordinates are written in the user's basis order as rational strings.
//! Signatures index the internal flag, whose labels are listed in `flag`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{BasisEntry, DualPoint, GradedLieAlgebra};
use crate::error::ValidationError;
use crate::free::CoverReport;
use crate::rational::{format_rational, Q};
use crate::strata::family::FamilyStratification;
use crate::strata::{StratumSignature, StratumTable};

pub const SCHEMA_VERSION: u32 = 1;

/// Parameters of one run, echoed into its report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub height: u32,
    pub tol: f64,
    /// Subcommand-specific options, by flag name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    pub result: Outcome,
}

impl Report {
    pub fn new(config: RunConfig, result: Outcome) -> Self {
        Report { schema_version: SCHEMA_VERSION, config, result }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Validate(ValidateReport),
    Stratify(TableReport),
    StratifyFamily(FamilyReport),
    Classify(ClassifyReport),
    OrbitDim(OrbitDimReport),
    OrbitSample(OrbitSampleReport),
    Free(FreeReport),
    CoverCheck(CoverCheckReport),
    Bch(BchReport),
    FourierCheck(NumericCheck),
    Convolve(GridSummary),
    Homogenize(GridSummary),
}

pub fn user_coords(alg: &GradedLieAlgebra, internal: &[Q]) -> Vec<String> {
    alg.coords_to_user(internal).iter().map(format_rational).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub name: String,
    pub dim: usize,
    /// Basis in user order.
    pub basis: Vec<BasisEntry>,
    /// Labels in internal (descending weight) order.
    pub flag: Vec<String>,
    pub depth: u32,
    pub homogeneous_dimension: u32,
}

impl AlgebraSummary {
    pub fn new(alg: &GradedLieAlgebra) -> Self {
        AlgebraSummary {
            name: alg.name().to_string(),
            dim: alg.dim(),
            basis: alg.user_basis(),
            flag: alg.labels().to_vec(),
            depth: alg.depth(),
            homogeneous_dimension: alg.homogeneous_dimension(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFailure {
    pub identity: String,
    pub witness: [String; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    pub residual: String,
}

impl From<&ValidationError> for ValidationFailure {
    fn from(e: &ValidationError) -> Self {
        let (a, b, c) = e.witness.clone();
        ValidationFailure {
            identity: e.identity.to_string(),
            witness: [a, b, c],
            component: e.component.clone(),
            residual: format_rational(&e.residual),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub parameter: String,
    pub domain: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<ValidationFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    /// 1-based position in the table.
    pub index: usize,
    pub signature: StratumSignature,
    pub representative: Vec<String>,
    pub samples: usize,
    pub orbit_dimension: usize,
}

fn records(alg: &GradedLieAlgebra, table: &StratumTable) -> Vec<StratumRecord> {
    table
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| StratumRecord {
            index: i + 1,
            signature: e.signature.clone(),
            representative: user_coords(alg, &e.representative.0),
            samples: e.samples,
            orbit_dimension: e.orbit_dimension,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub algebra: AlgebraSummary,
    pub total_points: usize,
    pub origin_points: usize,
    pub strata: Vec<StratumRecord>,
}

impl TableReport {
    pub fn new(alg: &GradedLieAlgebra, table: &StratumTable, total_points: usize) -> Self {
        TableReport {
            algebra: AlgebraSummary::new(alg),
            total_points,
            origin_points: table.origin_samples,
            strata: records(alg, table),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberRecord {
    pub t: String,
    pub strata: Vec<StratumRecord>,
    /// Signature of each stratum's representative pulled back to the cover.
    pub cover_signatures: Vec<StratumSignature>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedRecord {
    pub cover_signature: StratumSignature,
    /// Per fiber, the 1-based stratum index or `null` when empty there.
    pub fibers: Vec<Option<usize>>,
    pub empty_at: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub name: String,
    pub parameter: String,
    pub flag: Vec<String>,
    pub fibers: Vec<FiberRecord>,
    pub merged: Vec<MergedRecord>,
}

impl FamilyReport {
    /// `fibers[i]` is the algebra at `strat.fibers[i].t`.
    pub fn new(
        name: &str,
        parameter: &str,
        fibers: &[GradedLieAlgebra],
        strat: &FamilyStratification,
    ) -> Self {
        let ts: Vec<String> = strat.fibers.iter().map(|f| format_rational(&f.t)).collect();
        FamilyReport {
            name: name.to_string(),
            parameter: parameter.to_string(),
            flag: fibers.first().map(|a| a.labels().to_vec()).unwrap_or_default(),
            fibers: strat
                .fibers
                .iter()
                .zip(fibers)
                .zip(&ts)
                .map(|((f, alg), t)| FiberRecord {
                    t: t.clone(),
                    strata: records(alg, &f.table),
                    cover_signatures: f.cover_signatures.clone(),
                })
                .collect(),
            merged: strat
                .merged
                .iter()
                .map(|m| MergedRecord {
                    cover_signature: m.cover_signature.clone(),
                    fibers: m.fibers.clone(),
                    empty_at: m
                        .fibers
                        .iter()
                        .zip(&ts)
                        .filter(|(f, _)| f.is_none())
                        .map(|(_, t)| t.clone())
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub xi: Vec<String>,
    pub flag: Vec<String>,
    pub signature: StratumSignature,
    /// 1-based index in the sampled table; `null` for the origin.
    pub stratum: Option<usize>,
    pub origin: bool,
    pub orbit_dimension: usize,
    pub strata_in_table: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDimReport {
    pub xi: Vec<String>,
    pub flag: Vec<String>,
    pub signature: StratumSignature,
    pub orbit_dimension: usize,
    /// `dim g_k(xi)` for `k = 1..=m`.
    pub radical_dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSampleReport {
    pub xi: Vec<String>,
    pub signature: StratumSignature,
    pub points: Vec<Vec<String>>,
    /// Points whose signature differs from that of `xi`.
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeReport {
    pub generators: Vec<BasisEntry>,
    pub depth: u32,
    pub dim: usize,
    /// `(weight, count)` pairs in increasing weight.
    pub weight_counts: Vec<(u32, usize)>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCheckReport {
    pub target: AlgebraSummary,
    pub generators: Vec<String>,
    pub free_depth: u32,
    pub source_dim: usize,
    /// Index map `u` (1-based, source flag positions of the target basis).
    pub u: Vec<usize>,
    pub kernel_dim: usize,
    pub cover: CoverReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BchReport {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub product: Vec<String>,
}

impl BchReport {
    pub fn new(alg: &GradedLieAlgebra, a: &[Q], b: &[Q], product: &[Q]) -> Self {
        BchReport {
            a: user_coords(alg, a),
            b: user_coords(alg, b),
            product: user_coords(alg, product),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericCheck {
    pub description: String,
    pub cases: Vec<NumericCase>,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericCase {
    pub lambda: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub half_ranges: Vec<f64>,
    pub counts: Vec<usize>,
    pub max_abs: f64,
    /// Riemann sum, as `[re, im]`.
    pub integral: [f64; 2],
}

/// Coordinates of a dual point in user order.
pub fn user_point(alg: &GradedLieAlgebra, xi: &DualPoint) -> Vec<String> {
    user_coords(alg, &xi.0)
}
