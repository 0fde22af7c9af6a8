//! Jump indices and the stratification of the dual by signature.
//!
//! Flag ideals are heads of the internal basis: `g_k = span(X_1..X_k)`. For
//! `xi` in the dual, `g_k(xi)` is the radical of the skew form
//! `B(X, Y) = xi([X, Y])` restricted to `g_k`, and
//! `J^k = { j <= k : X_j not in g_{j-1} + g_k(xi) }`. Indices are 1-based in
//! every public type.

pub mod family;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{DualPoint, GradedLieAlgebra, Vector};
use crate::error::{Error, Result};
use crate::group::{coadjoint, GroupElement};
use crate::linalg;
use crate::rational::Q;

/// The tuple `(J^1, ..., J^m)` of jump-index sets, each sorted, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StratumSignature(pub Vec<Vec<usize>>);

impl StratumSignature {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `J^k`, with `k` 1-based.
    pub fn level(&self, k: usize) -> &[usize] {
        &self.0[k - 1]
    }

    pub fn top(&self) -> &[usize] {
        self.0.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(Vec::is_empty)
    }

    /// Checks `J^k ⊆ {1..k}` and that each set is strictly increasing.
    pub fn is_well_formed(&self) -> bool {
        self.0.iter().enumerate().all(|(i, set)| {
            set.windows(2).all(|w| w[0] < w[1]) && set.iter().all(|&j| j >= 1 && j <= i + 1)
        })
    }
}

/// Stratum order: scan `k = m` down to `1`; at the first level where the
/// sets differ, the larger set comes first, and among sets of equal size the
/// lexicographically smaller sorted list comes first. Generic strata sort
/// before degenerate ones.
impl Ord for StratumSignature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
                let ord = b.len().cmp(&a.len()).then_with(|| a.cmp(b));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for StratumSignature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StratumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| {
                if s.is_empty() {
                    "∅".to_string()
                } else {
                    let inner: Vec<String> = s.iter().map(usize::to_string).collect();
                    format!("{{{}}}", inner.join(","))
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Matrix `B[a][b] = xi([X_a, X_b])` of the skew form attached to `xi`.
pub fn skew_form(alg: &GradedLieAlgebra, xi: &DualPoint) -> Vec<Vec<Q>> {
    let m = alg.dim();
    let mut b = vec![vec![Q::zero(); m]; m];
    for (i, row) in b.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for (k, c) in alg.bracket_basis(i, j) {
                if !xi.0[*k].is_zero() {
                    *entry += c * &xi.0[*k];
                }
            }
        }
    }
    b
}

fn radical_from_form(form: &[Vec<Q>], k: usize, m: usize) -> Vec<Vector> {
    let block: Vec<Vec<Q>> = form[..k].iter().map(|row| row[..k].to_vec()).collect();
    linalg::kernel(&block, k)
        .into_iter()
        .map(|mut v| {
            v.resize(m, Q::zero());
            Vector(v)
        })
        .collect()
}

/// Basis of `g_k(xi)`, `k` in `1..=dim`, as vectors of the full algebra.
pub fn radical(alg: &GradedLieAlgebra, xi: &DualPoint, k: usize) -> Result<Vec<Vector>> {
    alg.check_len(xi.0.len())?;
    if k == 0 || k > alg.dim() {
        return Err(Error::InvalidArgument(format!(
            "flag index {k} outside 1..={}",
            alg.dim()
        )));
    }
    Ok(radical_from_form(&skew_form(alg, xi), k, alg.dim()))
}

/// Rank of the radical vectors restricted to coordinates `from..k`.
fn tail_rank(rad: &[Vector], from: usize, k: usize) -> usize {
    if from >= k {
        return 0;
    }
    let rows: Vec<Vec<Q>> = rad.iter().map(|v| v.0[from..k].to_vec()).collect();
    linalg::rank_of(&rows, k - from)
}

/// Jump indices of `xi`.
///
/// `X_j ∈ g_{j-1} + R` exactly when adjoining `e_j` to the projection of `R`
/// onto coordinates `j..k` does not raise its rank, i.e. when
/// `rank(R|_{>=j}) > rank(R|_{>j})`.
pub fn jump_indices(alg: &GradedLieAlgebra, xi: &DualPoint) -> Result<StratumSignature> {
    alg.check_len(xi.0.len())?;
    let m = alg.dim();
    let form = skew_form(alg, xi);
    let mut sets = Vec::with_capacity(m);
    for k in 1..=m {
        let rad = radical_from_form(&form, k, m);
        let mut set = Vec::new();
        let mut ranks: Vec<usize> = vec![0; k + 1];
        for j in (0..k).rev() {
            ranks[j] = tail_rank(&rad, j, k);
        }
        for j in 0..k {
            if ranks[j] == ranks[j + 1] {
                set.push(j + 1);
            }
        }
        sets.push(set);
    }
    Ok(StratumSignature(sets))
}

/// Dimension of the coadjoint orbit through `xi`: `m - dim g_m(xi)`.
pub fn orbit_dimension(alg: &GradedLieAlgebra, xi: &DualPoint) -> Result<usize> {
    alg.check_len(xi.0.len())?;
    let form = skew_form(alg, xi);
    Ok(linalg::rank(&form))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumEntry {
    pub signature: StratumSignature,
    pub representative: DualPoint,
    pub samples: usize,
    pub orbit_dimension: usize,
}

/// Strata found by sampling, sorted by the stratum order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumTable {
    pub entries: Vec<StratumEntry>,
    /// Sample points equal to zero, excluded from every stratum.
    pub origin_samples: usize,
}

impl StratumTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based position of a signature.
    pub fn index_of(&self, sig: &StratumSignature) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| &e.signature == sig)
            .map(|i| i + 1)
    }

    pub fn signatures(&self) -> Vec<StratumSignature> {
        self.entries.iter().map(|e| e.signature.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub signature: StratumSignature,
    /// 1-based stratum index; `None` at the origin.
    pub stratum: Option<usize>,
    pub origin: bool,
    pub orbit_dimension: usize,
}

/// Classifies `xi` against a table. The origin is reported with its own flag
/// and no stratum index.
pub fn classify(
    alg: &GradedLieAlgebra,
    xi: &DualPoint,
    table: &StratumTable,
) -> Result<Classification> {
    let signature = jump_indices(alg, xi)?;
    let orbit_dimension = orbit_dimension(alg, xi)?;
    if xi.is_zero() {
        return Ok(Classification {
            signature,
            stratum: None,
            origin: true,
            orbit_dimension,
        });
    }
    let stratum = table
        .index_of(&signature)
        .ok_or_else(|| Error::UnknownSignature(signature.to_string()))?;
    Ok(Classification {
        signature,
        stratum: Some(stratum),
        origin: false,
        orbit_dimension,
    })
}

/// Parameters of seeded sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u64,
    /// Bound on numerators and denominators of random rationals.
    pub height: u32,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            samples: 1000,
            seed: 0,
            height: 10,
        }
    }
}

const PROBE_LIMIT: usize = 6561;

/// Deterministic probe points: coordinate axes, then all `{0, ±1}` patterns
/// when there are at most `3^8` of them, else all `{0, 1}` patterns when
/// there are at most that many, else pairs of axes.
pub fn probe_points(dim: usize) -> Vec<Vec<Q>> {
    let one = Q::from_integer(1.into());
    let mut out: Vec<Vec<Q>> = (0..dim).map(|i| linalg::unit(dim, i)).collect();
    let patterns = |digits: &[i64]| -> Vec<Vec<Q>> {
        let base = digits.len();
        let total = base.checked_pow(dim as u32).unwrap_or(usize::MAX);
        (1..total)
            .map(|mut code| {
                (0..dim)
                    .map(|_| {
                        let d = digits[code % base];
                        code /= base;
                        Q::from_integer(d.into())
                    })
                    .collect()
            })
            .collect()
    };
    if 3usize.checked_pow(dim as u32).is_some_and(|n| n <= PROBE_LIMIT) {
        out.extend(patterns(&[0, 1, -1]));
    } else if 2usize.checked_pow(dim as u32).is_some_and(|n| n <= PROBE_LIMIT) {
        out.extend(patterns(&[0, 1]));
    } else {
        for i in 0..dim {
            for j in i + 1..dim {
                let mut v = linalg::unit(dim, i);
                v[j] = one.clone();
                out.push(v);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|v| seen.insert(v.clone()));
    out
}

pub fn random_rational(rng: &mut impl Rng, height: u32) -> Q {
    let h = height.max(1) as i64;
    let n: i64 = rng.gen_range(-h..=h);
    let d: i64 = rng.gen_range(1..=h);
    Q::new(n.into(), d.into())
}

pub fn random_vector(rng: &mut impl Rng, dim: usize, height: u32) -> Vec<Q> {
    (0..dim).map(|_| random_rational(rng, height)).collect()
}

/// `cfg.samples` seeded random nonzero points.
pub fn random_points(dim: usize, cfg: &SamplingConfig) -> Vec<DualPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pts = Vec::with_capacity(cfg.samples);
    while pts.len() < cfg.samples {
        let v = random_vector(&mut rng, dim, cfg.height);
        if !linalg::is_zero_vec(&v) {
            pts.push(DualPoint(v));
        }
    }
    pts
}

/// Probe points followed by [`random_points`].
pub fn sample_points(alg: &GradedLieAlgebra, cfg: &SamplingConfig) -> Vec<DualPoint> {
    let m = alg.dim();
    let mut pts: Vec<DualPoint> = probe_points(m).into_iter().map(DualPoint).collect();
    pts.extend(random_points(m, cfg));
    pts
}

/// Classifies the sampled points and aggregates distinct signatures.
///
/// Sampling can miss strata that are thin in every probe direction; the
/// table is a lower bound on the true stratification.
pub fn enumerate_strata(alg: &GradedLieAlgebra, cfg: &SamplingConfig) -> StratumTable {
    table_from_points(alg, &sample_points(alg, cfg))
}

pub fn table_from_points(alg: &GradedLieAlgebra, points: &[DualPoint]) -> StratumTable {
    let classified: Vec<(StratumSignature, usize)> = points
        .par_iter()
        .map(|xi| {
            (
                jump_indices(alg, xi).expect("dimension checked"),
                orbit_dimension(alg, xi).expect("dimension checked"),
            )
        })
        .collect();
    let mut agg: BTreeMap<StratumSignature, StratumEntry> = BTreeMap::new();
    let mut origin_samples = 0;
    for (xi, (sig, dim)) in points.iter().zip(classified) {
        if xi.is_zero() {
            origin_samples += 1;
            continue;
        }
        agg.entry(sig.clone())
            .and_modify(|e| e.samples += 1)
            .or_insert_with(|| StratumEntry {
                signature: sig,
                representative: xi.clone(),
                samples: 1,
                orbit_dimension: dim,
            });
    }
    StratumTable {
        entries: agg.into_values().collect(),
        origin_samples,
    }
}

/// `n` points `Ad*(exp A_i) xi` for seeded random rational `A_i`.
pub fn orbit_sample(
    alg: &GradedLieAlgebra,
    xi: &DualPoint,
    n: usize,
    seed: u64,
    height: u32,
) -> Result<Vec<DualPoint>> {
    alg.check_len(xi.0.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let g = GroupElement(Vector(random_vector(&mut rng, alg.dim(), height)));
            coadjoint(alg, &g, xi)
        })
        .collect()
}
