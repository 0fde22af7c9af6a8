//! Free graded nilpotent Lie algebras and canonical surjections onto a target.
//!
//! A Hall basis is generated weight by weight. A bracket `[a, b]` of earlier
//! words is basic when `a > b` in Hall order and either `a` is a letter or
//! `a = [x, y]` with `y <= b`. Hall order is generation order: by weight, then
//! by the order in which words were produced. Brackets of basic words are
//! rewritten into the basis with the Jacobi identity
//! `[[x, y], v] = [x, [y, v]] + [[x, v], y]` whenever `y > v`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{BasisEntry, Bracket, DualPoint, GradedLieAlgebra, Vector};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Q;
use crate::strata::{jump_indices, StratumSignature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WordShape {
    Letter(usize),
    /// Bracket of two earlier words, by Hall index.
    Bracket(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallWord {
    pub weight: u32,
    pub shape: WordShape,
}

type Lin = BTreeMap<usize, Q>;

/// Hall basis of the free graded Lie algebra on weighted generators,
/// truncated above total weight `depth`.
#[derive(Debug, Clone)]
pub struct HallBasis {
    generators: Vec<BasisEntry>,
    depth: u32,
    words: Vec<HallWord>,
    labels: Vec<String>,
    /// `table[i][j]` is `[w_i, w_j]` in the basis.
    table: Vec<Vec<Vec<(usize, Q)>>>,
}

impl HallBasis {
    pub fn new(generators: &[BasisEntry], depth: u32) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument("no generators".into()));
        }
        if generators.iter().any(|g| g.weight == 0) {
            return Err(Error::WeightMismatch("generator weights must be positive".into()));
        }
        let max_w = generators.iter().map(|g| g.weight).max().unwrap();
        if depth < max_w {
            return Err(Error::InvalidArgument(format!(
                "depth {depth} below largest generator weight {max_w}"
            )));
        }
        let mut words: Vec<HallWord> = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        for w in 1..=depth {
            for (g, entry) in generators.iter().enumerate() {
                if entry.weight == w {
                    words.push(HallWord { weight: w, shape: WordShape::Letter(g) });
                    labels.push(entry.label.clone());
                }
            }
            let existing = words.len();
            let mut fresh = Vec::new();
            for a in 0..existing {
                for b in 0..a {
                    if words[a].weight + words[b].weight != w {
                        continue;
                    }
                    let basic = match words[a].shape {
                        WordShape::Letter(_) => true,
                        WordShape::Bracket(_, y) => y <= b,
                    };
                    if basic {
                        fresh.push((a, b));
                    }
                }
            }
            for (a, b) in fresh {
                words.push(HallWord { weight: w, shape: WordShape::Bracket(a, b) });
                labels.push(format!("[{},{}]", labels[a], labels[b]));
            }
        }
        let pair_index: HashMap<(usize, usize), usize> = words
            .iter()
            .enumerate()
            .filter_map(|(i, w)| match w.shape {
                WordShape::Bracket(a, b) => Some(((a, b), i)),
                WordShape::Letter(_) => None,
            })
            .collect();
        let mut rw = Rewriter {
            words: &words,
            pair_index: &pair_index,
            depth,
            memo: HashMap::new(),
        };
        let n = words.len();
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = rw.bracket(i, j).into_iter().collect();
            }
        }
        Ok(HallBasis {
            generators: generators.to_vec(),
            depth,
            words,
            labels,
            table,
        })
    }

    pub fn generators(&self) -> &[BasisEntry] {
        &self.generators
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[HallWord] {
        &self.words
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of basis words of each weight.
    pub fn weight_counts(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for w in &self.words {
            *out.entry(w.weight).or_insert(0) += 1;
        }
        out
    }

    /// `[w_i, w_j]` in the Hall basis.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i][j]
    }

    /// The free algebra as a validated graded Lie algebra, with the Hall
    /// words as its basis in Hall order.
    pub fn to_algebra(&self) -> Result<GradedLieAlgebra> {
        let basis: Vec<BasisEntry> = self
            .words
            .iter()
            .zip(&self.labels)
            .map(|(w, l)| BasisEntry::new(l.clone(), w.weight))
            .collect();
        let mut brackets = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if !self.table[i][j].is_empty() {
                    let terms = self.table[i][j].iter().map(|(k, c)| (c.clone(), *k)).collect();
                    brackets.push(Bracket::new(i, j, terms));
                }
            }
        }
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}:{}", g.label, g.weight))
            .collect();
        let name = format!("free({};depth={})", gens.join(","), self.depth);
        GradedLieAlgebra::from_brackets(name, &basis, &brackets)
    }
}

struct Rewriter<'a> {
    words: &'a [HallWord],
    pair_index: &'a HashMap<(usize, usize), usize>,
    depth: u32,
    memo: HashMap<(usize, usize), Lin>,
}

fn add_into(acc: &mut Lin, c: &Q, v: &Lin) {
    for (k, x) in v {
        let e = acc.entry(*k).or_insert_with(Q::zero);
        *e += c * x;
    }
    acc.retain(|_, x| !x.is_zero());
}

impl Rewriter<'_> {
    fn bracket(&mut self, u: usize, v: usize) -> Lin {
        if u == v || self.words[u].weight + self.words[v].weight > self.depth {
            return Lin::new();
        }
        if let Some(r) = self.memo.get(&(u, v)) {
            return r.clone();
        }
        let result = if u < v {
            let mut r = self.bracket(v, u);
            for x in r.values_mut() {
                *x = -x.clone();
            }
            r
        } else {
            match self.words[u].shape {
                WordShape::Bracket(x, y) if y > v => {
                    let mut acc = Lin::new();
                    for (w, c) in self.bracket(y, v) {
                        let t = self.bracket(x, w);
                        add_into(&mut acc, &c, &t);
                    }
                    for (w, c) in self.bracket(x, v) {
                        let t = self.bracket(w, y);
                        add_into(&mut acc, &c, &t);
                    }
                    acc
                }
                _ => {
                    let k = self.pair_index[&(u, v)];
                    Lin::from([(k, Q::one())])
                }
            }
        };
        self.memo.insert((u, v), result.clone());
        result
    }
}

/// Number of Lyndon words of length `n` on `k` letters,
/// `(1/n) sum_{d | n} mu(d) k^(n/d)`.
pub fn witt_count(k: u64, n: u32) -> u64 {
    fn mobius(mut d: u32) -> i64 {
        let mut res = 1;
        let mut p = 2;
        while p * p <= d {
            if d.is_multiple_of(p) {
                d /= p;
                if d.is_multiple_of(p) {
                    return 0;
                }
                res = -res;
            }
            p += 1;
        }
        if d > 1 {
            res = -res;
        }
        res
    }
    let mut total: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += mobius(d) as i128 * (k as i128).pow(n / d);
        }
    }
    (total / n as i128) as u64
}

/// A weight-preserving surjective homomorphism `phi: source -> target` in the
/// adapted basis: each source basis vector maps to a target basis vector or
/// to zero.
#[derive(Debug, Clone)]
pub struct GradedSurjection {
    source: GradedLieAlgebra,
    target: GradedLieAlgebra,
    /// `dim target x dim source`, internal coordinates on both sides.
    matrix: Vec<Vec<Q>>,
    /// 1-based: `source basis u[j-1]` maps to target basis `j`.
    u: Vec<usize>,
    kernel: Vec<Vector>,
}

impl GradedSurjection {
    /// Checks weights, the homomorphism identity, surjectivity, and that the
    /// source basis is adapted to `phi`.
    pub fn new(
        source: GradedLieAlgebra,
        target: GradedLieAlgebra,
        matrix: Vec<Vec<Q>>,
    ) -> Result<Self> {
        let (m, n) = (target.dim(), source.dim());
        if matrix.len() != m || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: m, got: matrix.len() });
        }
        let column = |i: usize| Vector(matrix.iter().map(|r| r[i].clone()).collect());
        check_weights(&source, &target, &column)?;
        check_homomorphism(&source, &target, &column)?;
        let rank = linalg::rank(&matrix);
        if rank < m {
            return Err(Error::NotGenerating { rank, dim: m });
        }
        let u = adapted_positions(&source, &target, &column)?;
        let kernel = linalg::kernel(&matrix, n).into_iter().map(Vector).collect();
        Ok(GradedSurjection { source, target, matrix, u, kernel })
    }

    pub fn source(&self) -> &GradedLieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GradedLieAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    /// 1-based index map from target basis to source basis.
    pub fn u(&self) -> &[usize] {
        &self.u
    }

    pub fn kernel(&self) -> &[Vector] {
        &self.kernel
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(linalg::mat_vec(&self.matrix, &v.0))
    }

    /// `xi o phi`, a point of the source dual.
    pub fn pullback(&self, xi: &DualPoint) -> DualPoint {
        let t = linalg::transpose(&self.matrix);
        DualPoint(linalg::mat_vec(&t, &xi.0))
    }

    /// `max { j : u(j) <= k }`, 1-based; `None` when `k < u(1)`.
    pub fn k_bar(&self, k: usize) -> Option<usize> {
        self.u.iter().rposition(|&x| x <= k).map(|j| j + 1)
    }
}

fn check_weights(
    source: &GradedLieAlgebra,
    target: &GradedLieAlgebra,
    column: &dyn Fn(usize) -> Vector,
) -> Result<()> {
    for i in 0..source.dim() {
        if !column(i).is_homogeneous_of(target.weights(), source.weights()[i]) {
            return Err(Error::WeightMismatch(format!(
                "image of {} is not of weight {}",
                source.labels()[i],
                source.weights()[i]
            )));
        }
    }
    Ok(())
}

fn check_homomorphism(
    source: &GradedLieAlgebra,
    target: &GradedLieAlgebra,
    column: &dyn Fn(usize) -> Vector,
) -> Result<()> {
    let n = source.dim();
    let images: Vec<Vector> = (0..n).map(column).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut lhs = Vector::zero(target.dim());
            for (k, c) in source.bracket_basis(i, j) {
                lhs.add_scaled(c, &images[*k]);
            }
            let rhs = target.bracket_unchecked(&images[i], &images[j]);
            if lhs != rhs {
                return Err(Error::NotHomomorphism(format!(
                    "phi[{}, {}] != [phi {}, phi {}]",
                    source.labels()[i],
                    source.labels()[j],
                    source.labels()[i],
                    source.labels()[j]
                )));
            }
        }
    }
    Ok(())
}

/// Locates target basis vectors among source basis images and checks the
/// ordering: positions increase, and inside each weight block every
/// preimage precedes every kernel vector.
fn adapted_positions(
    source: &GradedLieAlgebra,
    target: &GradedLieAlgebra,
    column: &dyn Fn(usize) -> Vector,
) -> Result<Vec<usize>> {
    let m = target.dim();
    let mut u: Vec<Option<usize>> = vec![None; m];
    let mut is_kernel = vec![false; source.dim()];
    for i in 0..source.dim() {
        let c = column(i);
        if c.is_zero() {
            is_kernel[i] = true;
            continue;
        }
        let nz: Vec<usize> = (0..m).filter(|&k| !c.0[k].is_zero()).collect();
        if nz.len() != 1 || !c.0[nz[0]].is_one() {
            return Err(Error::ConventionMismatch(format!(
                "source vector {} is neither a preimage of a target basis vector nor in the kernel",
                source.labels()[i]
            )));
        }
        if u[nz[0]].replace(i + 1).is_some() {
            return Err(Error::ConventionMismatch(format!(
                "target basis vector {} has several preimages in the source basis",
                target.labels()[nz[0]]
            )));
        }
    }
    let u: Vec<usize> = u
        .into_iter()
        .enumerate()
        .map(|(j, x)| {
            x.ok_or_else(|| {
                Error::ConventionMismatch(format!(
                    "target basis vector {} has no preimage in the source basis",
                    target.labels()[j]
                ))
            })
        })
        .collect::<Result<_>>()?;
    if u.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ConventionMismatch(
            "preimages are not in target order".into(),
        ));
    }
    for i in 1..source.dim() {
        let same_block = source.weights()[i] == source.weights()[i - 1];
        if same_block && is_kernel[i - 1] && !is_kernel[i] {
            return Err(Error::ConventionMismatch(format!(
                "kernel vector {} precedes preimage {} in a weight block",
                source.labels()[i - 1],
                source.labels()[i]
            )));
        }
    }
    Ok(u)
}

/// The homomorphism from the free algebra sending each generator to its image
/// in `target` (internal coordinates), re-expressed in a source basis adapted
/// to it: for each weight, preimages of the target basis vectors in target
/// order, then a basis of the kernel in that weight.
pub fn canonical_surjection(
    hall: &HallBasis,
    target: &GradedLieAlgebra,
    images: &[Vector],
) -> Result<GradedSurjection> {
    if images.len() != hall.generators().len() {
        return Err(Error::DimensionMismatch {
            expected: hall.generators().len(),
            got: images.len(),
        });
    }
    for (g, img) in hall.generators().iter().zip(images) {
        target.check_len(img.0.len())?;
        if !img.is_homogeneous_of(target.weights(), g.weight) {
            return Err(Error::WeightMismatch(format!(
                "image of generator {} is not of weight {}",
                g.label, g.weight
            )));
        }
    }
    let mut word_images: Vec<Vector> = Vec::with_capacity(hall.dim());
    for w in hall.words() {
        let img = match w.shape {
            WordShape::Letter(g) => images[g].clone(),
            WordShape::Bracket(a, b) => {
                target.bracket_unchecked(&word_images[a], &word_images[b])
            }
        };
        word_images.push(img);
    }
    let free = hall.to_algebra()?;
    let n = free.dim();
    let m = target.dim();
    // Column i: image of the free algebra's internal basis vector i.
    let mut internal_to_hall = vec![0; n];
    for (h, &i) in free.user_to_internal().iter().enumerate() {
        internal_to_hall[i] = h;
    }
    let raw: Vec<Vec<Q>> = (0..m)
        .map(|r| (0..n).map(|i| word_images[internal_to_hall[i]].0[r].clone()).collect())
        .collect();
    let raw_column = |i: usize| Vector(raw.iter().map(|r| r[i].clone()).collect());
    check_homomorphism(&free, target, &raw_column)?;
    let rank = linalg::rank(&raw);
    if rank < m {
        return Err(Error::NotGenerating { rank, dim: m });
    }

    let mut weights_desc: Vec<u32> = free.weights().to_vec();
    weights_desc.dedup();
    let mut new_basis: Vec<Vector> = Vec::with_capacity(n);
    let mut labels: Vec<String> = Vec::with_capacity(n);
    let mut kernel_count = 0;
    for w in weights_desc {
        let cols: Vec<usize> = (0..n).filter(|&i| free.weights()[i] == w).collect();
        let block: Vec<Vec<Q>> = raw
            .iter()
            .map(|r| cols.iter().map(|&i| r[i].clone()).collect())
            .collect();
        let embed = |x: Vec<Q>| {
            let mut v = Vector::zero(n);
            for (c, &i) in x.into_iter().zip(&cols) {
                v.0[i] = c;
            }
            v
        };
        for j in (0..m).filter(|&j| target.weights()[j] == w) {
            let x = linalg::solve(&block, &linalg::unit(m, j), cols.len())
                .ok_or(Error::NotGenerating { rank, dim: m })?;
            new_basis.push(embed(x));
            labels.push(target.labels()[j].clone());
        }
        for x in linalg::kernel(&block, cols.len()) {
            kernel_count += 1;
            new_basis.push(embed(x));
            labels.push(format!("ker{kernel_count}"));
        }
    }
    for i in 0..labels.len() {
        while labels[..i].contains(&labels[i]) {
            labels[i].push('\'');
        }
    }
    let source = free.change_basis(format!("{} adapted", free.name()), &new_basis, &labels)?;
    let matrix: Vec<Vec<Q>> = (0..m)
        .map(|r| {
            new_basis
                .iter()
                .map(|v| (0..n).map(|i| &raw[r][i] * &v.0[i]).sum())
                .collect()
        })
        .collect();
    GradedSurjection::new(source, target.clone(), matrix)
}

/// A minimal generating set: by increasing weight, the basis vectors (input
/// order) outside the span of `[g, g]` and the vectors already chosen.
/// Returns internal indices.
pub fn minimal_generators(alg: &GradedLieAlgebra) -> Vec<usize> {
    let m = alg.dim();
    let mut span: Vec<Vec<Q>> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let b = alg.bracket_unchecked(&alg.basis(i), &alg.basis(j));
            if !b.is_zero() {
                span.push(b.0);
            }
        }
    }
    let mut rank = linalg::rank_of(&span, m);
    let mut chosen = Vec::new();
    let mut order: Vec<usize> = alg.user_to_internal().to_vec();
    order.sort_by_key(|&i| alg.weights()[i]);
    for i in order {
        span.push(linalg::unit(m, i));
        let r = linalg::rank_of(&span, m);
        if r > rank {
            rank = r;
            chosen.push(i);
        } else {
            span.pop();
        }
    }
    chosen
}

/// Free cover of `alg` on the given generators (internal indices), truncated
/// at `depth` (default: the algebra's depth).
pub fn free_cover(
    alg: &GradedLieAlgebra,
    generators: &[usize],
    depth: Option<u32>,
) -> Result<(HallBasis, GradedSurjection)> {
    let gens: Vec<BasisEntry> = generators
        .iter()
        .map(|&i| BasisEntry::new(alg.labels()[i].clone(), alg.weights()[i]))
        .collect();
    let hall = HallBasis::new(&gens, depth.unwrap_or(alg.depth()))?;
    let images: Vec<Vector> = generators.iter().map(|&i| alg.basis(i)).collect();
    let surj = canonical_surjection(&hall, alg, &images)?;
    Ok((hall, surj))
}

/// One level of the transfer formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub k: usize,
    /// `None` when no target index maps at or below `k`.
    pub k_bar: Option<usize>,
    /// `J^k` of the pulled-back point in the source.
    pub source_set: Vec<usize>,
    /// `u(J^{k_bar})` of the target point; empty when vacuous.
    pub mapped_set: Vec<usize>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub xi: Vec<String>,
    pub source_signature: StratumSignature,
    pub target_signature: StratumSignature,
    pub levels: Vec<LevelCheck>,
}

impl TransferReport {
    pub fn violations(&self) -> usize {
        self.levels.iter().filter(|l| !l.holds).count()
    }

    pub fn vacuous_levels(&self) -> usize {
        self.levels.iter().filter(|l| l.k_bar.is_none()).count()
    }

    pub fn holds(&self) -> bool {
        self.violations() == 0
    }
}

/// Compares `J^k` of `xi o phi` with `u(J^{k_bar})` of `xi` for every `k`.
/// Levels with no `k_bar` are vacuous and hold only when the source set is
/// empty.
pub fn transfer_check(surj: &GradedSurjection, xi: &DualPoint) -> Result<TransferReport> {
    surj.target.check_len(xi.0.len())?;
    let pulled = surj.pullback(xi);
    let source_signature = jump_indices(&surj.source, &pulled)?;
    let target_signature = jump_indices(&surj.target, xi)?;
    let levels = (1..=surj.source.dim())
        .map(|k| {
            let k_bar = surj.k_bar(k);
            let source_set = source_signature.level(k).to_vec();
            let mapped_set: Vec<usize> = match k_bar {
                Some(kb) => target_signature.level(kb).iter().map(|&j| surj.u[j - 1]).collect(),
                None => Vec::new(),
            };
            let holds = source_set == mapped_set;
            LevelCheck { k, k_bar, source_set, mapped_set, holds }
        })
        .collect();
    Ok(TransferReport {
        xi: surj
            .target
            .coords_to_user(&xi.0)
            .iter()
            .map(crate::rational::format_rational)
            .collect(),
        source_signature,
        target_signature,
        levels,
    })
}

/// Batch result of [`transfer_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub points: usize,
    /// Points with at least one failing level.
    pub violations: usize,
    pub vacuous_levels: usize,
    /// Source signatures that pull back from more than one target signature.
    pub non_injective: Vec<StratumSignature>,
    pub failures: Vec<TransferReport>,
}

pub fn transfer_check_batch(surj: &GradedSurjection, points: &[DualPoint]) -> Result<CoverReport> {
    let reports: Vec<TransferReport> = points
        .par_iter()
        .map(|xi| transfer_check(surj, xi))
        .collect::<Result<_>>()?;
    let mut images: BTreeMap<StratumSignature, Vec<StratumSignature>> = BTreeMap::new();
    for (xi, r) in points.iter().zip(&reports) {
        if xi.is_zero() {
            continue;
        }
        let seen = images.entry(r.source_signature.clone()).or_default();
        if !seen.contains(&r.target_signature) {
            seen.push(r.target_signature.clone());
        }
    }
    Ok(CoverReport {
        points: reports.len(),
        violations: reports.iter().filter(|r| !r.holds()).count(),
        vacuous_levels: reports.iter().map(TransferReport::vacuous_levels).sum(),
        non_injective: images
            .into_iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|(k, _)| k)
            .collect(),
        failures: reports.into_iter().filter(|r| !r.holds()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::{abelian, engel, heisenberg};
    use crate::rational::q;

    fn gens(ws: &[u32]) -> Vec<BasisEntry> {
        let names = ["X", "Y", "Z", "W", "V"];
        ws.iter().enumerate().map(|(i, &w)| BasisEntry::new(names[i], w)).collect()
    }

    #[test]
    fn small_free_algebras() {
        let h = HallBasis::new(&gens(&[1, 1]), 2).unwrap();
        assert_eq!(h.dim(), 3);
        assert_eq!(h.labels(), &["X", "Y", "[Y,X]"]);
        let f = HallBasis::new(&gens(&[1, 1, 2]), 2).unwrap();
        assert_eq!(f.dim(), 4);
        let alg = f.to_algebra().unwrap();
        let z = alg.index_of("Z").unwrap();
        assert!((0..4).all(|j| alg.bracket_basis(z, j).is_empty()));
        assert_eq!(HallBasis::new(&gens(&[1, 1]), 3).unwrap().dim(), 5);
    }

    #[test]
    fn witt_formula() {
        assert_eq!(witt_count(2, 1), 2);
        assert_eq!(witt_count(2, 2), 1);
        assert_eq!(witt_count(2, 3), 2);
        assert_eq!(witt_count(2, 4), 3);
        assert_eq!(witt_count(2, 6), 9);
        assert_eq!(witt_count(3, 3), 8);
        for k in 1..=3u64 {
            let h = HallBasis::new(&gens(&vec![1; k as usize]), 5).unwrap();
            for (w, c) in h.weight_counts() {
                assert_eq!(c as u64, witt_count(k, w), "k={k} n={w}");
            }
        }
    }

    #[test]
    fn free_algebras_validate() {
        HallBasis::new(&gens(&[1, 1, 1]), 4).unwrap().to_algebra().unwrap();
        HallBasis::new(&gens(&[1, 2]), 6).unwrap().to_algebra().unwrap();
        assert!(HallBasis::new(&gens(&[1, 3]), 2).is_err());
    }

    #[test]
    fn heisenberg_iso() {
        let h = heisenberg(1);
        let (_, s) = free_cover(&h, &[1, 2], None).unwrap();
        assert!(s.kernel().is_empty());
        assert_eq!(s.u(), &[1, 2, 3]);
    }

    #[test]
    fn abelian_kills_bracket() {
        let a = abelian(2);
        let hall = HallBasis::new(&gens(&[1, 1]), 2).unwrap();
        let s = canonical_surjection(&hall, &a, &[a.basis(0), a.basis(1)]).unwrap();
        assert_eq!(s.kernel().len(), 1);
        assert_eq!(s.u(), &[2, 3]);
        let r = transfer_check(&s, &DualPoint::basis(2, 0)).unwrap();
        assert!(r.holds());
        assert!(r.source_signature.is_empty());
        assert_eq!(r.vacuous_levels(), 1);
    }

    #[test]
    fn engel_cover() {
        let e = engel();
        let x = e.index_of("X").unwrap();
        let y = e.index_of("Y").unwrap();
        let (hall, s) = free_cover(&e, &[x, y], Some(3)).unwrap();
        assert_eq!(hall.dim(), 5);
        assert_eq!(s.kernel().len(), 1);
        assert_eq!(s.u(), &[1, 3, 4, 5]);
        let ker = &s.kernel()[0];
        assert!(ker.is_homogeneous_of(s.source().weights(), 3));
    }

    #[test]
    fn engel_transfer_holds() {
        use crate::strata::{sample_points, SamplingConfig};
        let e = engel();
        let (_, s) = free_cover(&e, &minimal_generators(&e), Some(3)).unwrap();
        let pts = sample_points(&e, &SamplingConfig { samples: 100, seed: 7, height: 9 });
        let report = transfer_check_batch(&s, &pts).unwrap();
        assert_eq!(report.violations, 0, "{:?}", report.failures.first());
        assert!(report.non_injective.is_empty());
    }

    #[test]
    fn generator_choice() {
        let e = engel();
        let g = minimal_generators(&e);
        let labels: Vec<&str> = g.iter().map(|&i| e.labels()[i].as_str()).collect();
        assert_eq!(labels, vec!["X", "Y"]);
        assert_eq!(minimal_generators(&abelian(3)).len(), 3);
    }

    #[test]
    fn not_generating() {
        let e = engel();
        let x = e.index_of("X").unwrap();
        assert!(matches!(free_cover(&e, &[x], Some(3)), Err(Error::NotGenerating { .. })));
    }

    #[test]
    fn weight_mismatch() {
        let h = heisenberg(1);
        let hall = HallBasis::new(&gens(&[1, 1]), 2).unwrap();
        let z = h.index_of("Z").unwrap();
        let r = canonical_surjection(&hall, &h, &[h.basis(z), h.basis(1)]);
        assert!(matches!(r, Err(Error::WeightMismatch(_))));
    }

    #[test]
    fn unadapted_source_rejected() {
        // In Hall order [Y,X] maps to -Z, not to a target basis vector.
        let h = heisenberg(1);
        let free = HallBasis::new(&gens(&[1, 1]), 2).unwrap().to_algebra().unwrap();
        let zi = free.index_of("[Y,X]").unwrap();
        let mut matrix = vec![vec![q(0); 3]; 3];
        matrix[h.index_of("Z").unwrap()][zi] = q(-1);
        matrix[h.index_of("X").unwrap()][free.index_of("X").unwrap()] = q(1);
        matrix[h.index_of("Y").unwrap()][free.index_of("Y").unwrap()] = q(1);
        let r = GradedSurjection::new(free, h, matrix);
        assert!(matches!(r, Err(Error::ConventionMismatch(_))));
    }

    #[test]
    fn kernel_before_preimage_rejected() {
        let a = abelian(2);
        let hall = HallBasis::new(&gens(&[1, 1, 1]), 1).unwrap();
        let free = hall.to_algebra().unwrap();
        // Third generator in the kernel but listed first.
        let matrix = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        let r = GradedSurjection::new(free, a, matrix);
        assert!(matches!(r, Err(Error::ConventionMismatch(_))));
    }
}
