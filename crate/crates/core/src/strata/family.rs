//! Fiberwise stratification of a one-parameter family.
//!
//! Each fiber is stratified on its own. Strata are matched across fibers
//! through the free cover on all basis vectors, whose index map does not
//! depend on the parameter: a fiber stratum is keyed by the signature of its
//! pullback to the cover.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::family::AlgebraFamily;
use crate::free::free_cover;
use crate::rational::Q;

use super::{enumerate_strata, jump_indices, SamplingConfig, StratumSignature, StratumTable};

#[derive(Debug, Clone)]
pub struct FiberStrata {
    pub t: Q,
    pub table: StratumTable,
    /// Cover signature of each table entry, aligned with `table.entries`.
    pub cover_signatures: Vec<StratumSignature>,
}

/// One cover signature with the fiber stratum it labels, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedStratum {
    pub cover_signature: StratumSignature,
    /// Per fiber: 1-based stratum index, `None` when empty in that fiber.
    pub fibers: Vec<Option<usize>>,
}

impl MergedStratum {
    pub fn empty_somewhere(&self) -> bool {
        self.fibers.iter().any(Option::is_none)
    }
}

#[derive(Debug, Clone)]
pub struct FamilyStratification {
    pub fibers: Vec<FiberStrata>,
    pub merged: Vec<MergedStratum>,
}

pub fn stratify_family(
    fam: &AlgebraFamily,
    t_values: &[Q],
    cfg: &SamplingConfig,
) -> Result<FamilyStratification> {
    let mut fibers = Vec::with_capacity(t_values.len());
    for t in t_values {
        let alg = fam.evaluate(t)?;
        let table = enumerate_strata(&alg, cfg);
        let all: Vec<usize> = (0..alg.dim()).collect();
        let (_, surj) = free_cover(&alg, &all, Some(fam.depth()))?;
        let cover_signatures = table
            .entries
            .iter()
            .map(|e| jump_indices(surj.source(), &surj.pullback(&e.representative)))
            .collect::<Result<_>>()?;
        fibers.push(FiberStrata { t: t.clone(), table, cover_signatures });
    }
    let mut merged: BTreeMap<StratumSignature, Vec<Option<usize>>> = BTreeMap::new();
    for (f, fiber) in fibers.iter().enumerate() {
        for (i, sig) in fiber.cover_signatures.iter().enumerate() {
            merged.entry(sig.clone()).or_insert_with(|| vec![None; fibers.len()])[f] = Some(i + 1);
        }
    }
    Ok(FamilyStratification {
        fibers,
        merged: merged
            .into_iter()
            .map(|(cover_signature, fibers)| MergedStratum { cover_signature, fibers })
            .collect(),
    })
}
