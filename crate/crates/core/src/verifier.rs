//! The twelve relation families of the finite presentation of `G(ℤ)`,
//! checked as matrix identities under `ρ_λ`, and the kernel probe over the
//! diagonal subgroup `H(ℤ)`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cartan::GeneralizedCartanMatrix;
use crate::groupgen::{GeneratorSymbol as G, GroupError, GroupWord, Representation, Witness};
use crate::weightmod::{DominantWeight, TruncatedModule};

/// Relation checks need columns through at least this depth.
pub const MIN_WINDOW: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("nodes {nodes:?} do not match the pattern of {id}")]
    PatternMismatch { id: RelationId, nodes: Vec<usize> },
    #[error("both signs verify for the pair {0:?}")]
    SignAmbiguous((usize, usize)),
    #[error("no sign verifies for the pair {0:?}")]
    SignNone((usize, usize)),
    #[error("kernel criterion disagrees with the matrix oracle on subset {0:?}")]
    OracleMismatch(Vec<usize>),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelationId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
}

impl RelationId {
    pub const ALL: [RelationId; 12] = [
        Self::R1,
        Self::R2,
        Self::R3,
        Self::R4,
        Self::R5,
        Self::R6,
        Self::R7,
        Self::R8,
        Self::R9,
        Self::R10,
        Self::R11,
        Self::R12,
    ];

    pub fn pattern(self) -> NodePattern {
        use RelationId::*;
        match self {
            R1 | R2 | R3 => NodePattern::Each,
            R4 | R6 => NodePattern::NonAdjacentUnordered,
            R5 => NodePattern::NonAdjacentOrdered,
            R7 => NodePattern::AdjacentUnordered,
            R8 | R9 | R10 | R11 | R12 => NodePattern::AdjacentOrdered,
        }
    }

    /// Left and right words; `eps` is the sign slot of R11 and is ignored
    /// elsewhere.
    pub fn words(self, nodes: &[usize], eps: i64) -> (GroupWord, GroupWord) {
        use RelationId::*;
        let w = |v: Vec<G>| GroupWord::from_symbols(v);
        let one = GroupWord::identity;
        let i = nodes[0];
        let j = nodes.get(1).copied().unwrap_or(i);
        let (xi, xj, si, sj) = (G::x(i, 1), G::x(j, 1), G::s(i), G::s(j));
        match self {
            R1 => (w(vec![si; 4]), one()),
            R2 => (GroupWord::commutator(&w(vec![si, si]), &xi.into()), one()),
            R3 => (si.into(), w(vec![xi, si, xi, si.inverse(), xi])),
            R4 => (w(vec![si, sj]), w(vec![sj, si])),
            R5 => (GroupWord::commutator(&si.into(), &xj.into()), one()),
            R6 => (GroupWord::commutator(&xi.into(), &xj.into()), one()),
            R7 => (w(vec![si, sj, si]), w(vec![sj, si, sj])),
            R8 => (w(vec![si, si, sj, si.inverse(), si.inverse()]), sj.inverse().into()),
            R9 => (w(vec![xi, sj, si]), w(vec![sj, si, xj])),
            R10 => (w(vec![si, si, xj, si.inverse(), si.inverse()]), xj.inverse().into()),
            R11 => (GroupWord::commutator(&xi.into(), &xj.into()), w(vec![si, G::x(j, eps), si.inverse()])),
            R12 => (GroupWord::commutator(&xi.into(), &w(vec![si, xj, si.inverse()])), one()),
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodePattern {
    Each,
    NonAdjacentUnordered,
    NonAdjacentOrdered,
    AdjacentUnordered,
    AdjacentOrdered,
}

impl NodePattern {
    pub fn matches(self, gcm: &GeneralizedCartanMatrix, nodes: &[usize]) -> bool {
        let n = gcm.rank();
        match (self, nodes) {
            (NodePattern::Each, [i]) => *i < n,
            (_, [i, j]) if *i < n && *j < n && i != j => {
                let adj = gcm.adjacent(*i, *j);
                match self {
                    NodePattern::NonAdjacentUnordered => !adj && i < j,
                    NodePattern::NonAdjacentOrdered => !adj,
                    NodePattern::AdjacentUnordered => adj && i < j,
                    NodePattern::AdjacentOrdered => adj,
                    NodePattern::Each => false,
                }
            }
            _ => false,
        }
    }

    pub fn instances(self, gcm: &GeneralizedCartanMatrix) -> Vec<Vec<usize>> {
        let n = gcm.rank();
        if self == NodePattern::Each {
            return (0..n).map(|i| vec![i]).collect();
        }
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.matches(gcm, &[i, j]) {
                    out.push(vec![i, j]);
                }
            }
        }
        out
    }
}

/// All instances of the twelve families over the diagram, cheap ones first.
pub fn relation_instances(gcm: &GeneralizedCartanMatrix) -> Vec<(RelationId, Vec<usize>)> {
    RelationId::ALL.iter().flat_map(|&id| id.pattern().instances(gcm).into_iter().map(move |n| (id, n))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Verified { depth: i64 },
    Failed { depth: i64, witness: Box<Witness> },
    WindowEmpty { depth: i64 },
}

impl Outcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, Outcome::Verified { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub id: RelationId,
    #[serde(serialize_with = "one_based")]
    pub nodes: Vec<usize>,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i64>,
}

fn one_based<S: serde::Serializer>(nodes: &[usize], s: S) -> Result<S::Ok, S::Error> {
    nodes.iter().map(|n| n + 1).collect::<Vec<_>>().serialize(s)
}

fn compare(rep: &Representation<'_>, lhs: &GroupWord, rhs: &GroupWord) -> Result<Outcome, VerifyError> {
    let (l, r) = (rep.evaluate_word(lhs)?, rep.evaluate_word(rhs)?);
    let depth = l.valid_depth().min(r.valid_depth());
    match l.compare(&r, MIN_WINDOW) {
        Ok(None) => Ok(Outcome::Verified { depth }),
        Ok(Some(w)) => Ok(Outcome::Failed { depth, witness: Box::new(w) }),
        Err(GroupError::WindowEmpty { .. }) => Ok(Outcome::WindowEmpty { depth }),
        Err(e) => Err(e.into()),
    }
}

/// Checks one instance. For R11 both signs are tried and the one that
/// verifies is recorded; if both verify the sign is left open.
pub fn verify_relation(
    rep: &Representation<'_>,
    id: RelationId,
    nodes: &[usize],
) -> Result<InstanceResult, VerifyError> {
    if !id.pattern().matches(rep.module().gcm(), nodes) {
        return Err(VerifyError::PatternMismatch { id, nodes: nodes.to_vec() });
    }
    if id != RelationId::R11 {
        let (lhs, rhs) = id.words(nodes, 1);
        let outcome = compare(rep, &lhs, &rhs)?;
        return Ok(InstanceResult { id, nodes: nodes.to_vec(), outcome, sign: None });
    }
    let mut tried = Vec::new();
    for eps in [1, -1] {
        let (lhs, rhs) = id.words(nodes, eps);
        tried.push((eps, compare(rep, &lhs, &rhs)?));
    }
    let good: Vec<i64> = tried.iter().filter(|(_, o)| o.is_verified()).map(|(e, _)| *e).collect();
    let (sign, outcome) = match good.as_slice() {
        [e] => (Some(*e), tried.into_iter().find(|(x, _)| x == e).unwrap().1),
        [_, _] => (None, tried.swap_remove(0).1),
        _ => {
            let keep = tried.iter().position(|(_, o)| matches!(o, Outcome::WindowEmpty { .. })).unwrap_or(0);
            (None, tried.swap_remove(keep).1)
        }
    };
    Ok(InstanceResult { id, nodes: nodes.to_vec(), outcome, sign })
}

/// `ε` with `[χ_{αᵢ}(1), χ_{αⱼ}(1)] = w̃ᵢ χ_{αⱼ}(ε) w̃ᵢ⁻¹` on the window.
pub fn resolve_commutator_sign(rep: &Representation<'_>, i: usize, j: usize) -> Result<i64, VerifyError> {
    let r = verify_relation(rep, RelationId::R11, &[i, j])?;
    match (r.sign, &r.outcome) {
        (Some(e), _) => Ok(e),
        (None, Outcome::Verified { .. }) => Err(VerifyError::SignAmbiguous((i, j))),
        (None, Outcome::WindowEmpty { depth }) => {
            Err(GroupError::WindowEmpty { valid_depth: *depth, required: MIN_WINDOW }.into())
        }
        (None, Outcome::Failed { .. }) => Err(VerifyError::SignNone((i, j))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignEntry {
    #[serde(serialize_with = "one_based")]
    pub nodes: Vec<usize>,
    pub sign: i64,
}

/// Resolved R11 signs for every ordered adjacent pair.
pub fn commutator_sign_table(rep: &Representation<'_>) -> Result<Vec<SignEntry>, VerifyError> {
    NodePattern::AdjacentOrdered
        .instances(rep.module().gcm())
        .into_par_iter()
        .map(|n| Ok(SignEntry { sign: resolve_commutator_sign(rep, n[0], n[1])?, nodes: n }))
        .collect()
}

/// Every relation instance, in the order of [`relation_instances`].
pub fn verify_all(rep: &Representation<'_>) -> Result<Vec<InstanceResult>, VerifyError> {
    relation_instances(rep.module().gcm())
        .into_par_iter()
        .map(|(id, nodes)| verify_relation(rep, id, &nodes))
        .collect()
}

/// Nodes lying in a connected component on which `λ` is nonzero.
fn active_nodes(gcm: &GeneralizedCartanMatrix, lambda: &DominantWeight) -> Vec<bool> {
    let mut active = vec![false; gcm.rank()];
    for comp in gcm.components() {
        if comp.iter().any(|&i| lambda.coords()[i] != 0) {
            for &i in &comp {
                active[i] = true;
            }
        }
    }
    active
}

/// Whether `h_S = ∏_{i∈S} h_{αᵢ}(−1)` acts trivially on `V^λ`: `Σ_{i∈S} λᵢ`
/// and every `Σ_{i∈S} a_ij` for `j` in a component where `λ ≠ 0` are even.
pub fn kernel_membership(gcm: &GeneralizedCartanMatrix, lambda: &DominantWeight, subset: &[usize]) -> bool {
    let active = active_nodes(gcm, lambda);
    let lam: i64 = subset.iter().map(|&i| lambda.coords()[i]).sum();
    lam % 2 == 0
        && (0..gcm.rank())
            .filter(|&j| active[j])
            .all(|j| subset.iter().map(|&i| gcm.entry(i, j)).sum::<i64>() % 2 == 0)
}

/// Parity rows of the criterion over GF(2), one bitmask per condition.
fn parity_rows(gcm: &GeneralizedCartanMatrix, lambda: &DominantWeight) -> Vec<u64> {
    let n = gcm.rank();
    let active = active_nodes(gcm, lambda);
    let mask = |f: &dyn Fn(usize) -> i64| (0..n).filter(|&i| f(i) % 2 != 0).fold(0u64, |m, i| m | 1 << i);
    let mut rows = vec![mask(&|i| lambda.coords()[i])];
    for j in (0..n).filter(|&j| active[j]) {
        rows.push(mask(&|i| gcm.entry(i, j)));
    }
    rows
}

/// Basis of `{x ∈ GF(2)^n : r·x = 0 for every row r}`.
fn gf2_nullspace(n: usize, rows: &[u64]) -> Vec<u64> {
    let mut rows: Vec<u64> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&k| rows[k] >> c & 1 == 1) else { continue };
        rows.swap(r, p);
        for k in 0..rows.len() {
            if k != r && rows[k] >> c & 1 == 1 {
                rows[k] ^= rows[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = 1u64 << f;
            for (k, &p) in pivots.iter().enumerate() {
                if rows[k] >> f & 1 == 1 {
                    x |= 1 << p;
                }
            }
            x
        })
        .collect()
}

fn bits(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `K^λ ∩ H(ℤ)` as an elementary abelian 2-group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    /// Subsets `S` whose `h_S` generate the kernel (1-based nodes).
    pub generators: Vec<Vec<usize>>,
    pub order: u64,
    /// Every subset in the kernel, ascending by bitmask (0-based nodes).
    #[serde(skip)]
    pub members: Vec<Vec<usize>>,
}

/// Enumerates all subsets, applies the criterion, and checks it against the
/// diagonals of the `h_{αᵢ}(−1)` matrices on the window.
pub fn kernel_probe(rep: &Representation<'_>) -> Result<KernelReport, VerifyError> {
    let module = rep.module();
    let (gcm, lambda, n) = (module.gcm(), module.lambda(), module.rank());
    let diagonals = (0..n)
        .into_par_iter()
        .map(|i| {
            let h = rep.h_element(i, -1)?;
            if !h.is_diagonal_on_window() {
                return Err(VerifyError::OracleMismatch(vec![i]));
            }
            Ok(h.diagonal())
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let mut members = Vec::new();
    for mask in 0u64..1 << n {
        let subset = bits(mask, n);
        let claim = kernel_membership(gcm, lambda, &subset);
        let oracle = (0..diagonals[0].len()).all(|c| subset.iter().map(|&i| diagonals[i][c]).product::<i128>() == 1);
        if claim != oracle {
            return Err(VerifyError::OracleMismatch(subset));
        }
        if claim {
            members.push(subset);
        }
    }
    let generators: Vec<Vec<usize>> = gf2_nullspace(n, &parity_rows(gcm, lambda))
        .into_iter()
        .map(|m| bits(m, n).into_iter().map(|i| i + 1).collect())
        .collect();
    let order = 1u64 << generators.len();
    debug_assert_eq!(order as usize, members.len());
    Ok(KernelReport { generators, order, members })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub diagram: crate::cartan::DynkinDiagram,
    pub lambda: DominantWeight,
    pub depth: u32,
    pub relations: Vec<InstanceResult>,
    pub kernel: KernelReport,
}

impl VerificationReport {
    pub fn run(module: &TruncatedModule) -> Result<Self, VerifyError> {
        let rep = Representation::new(module);
        let relations = verify_all(&rep)?;
        let kernel = kernel_probe(&rep)?;
        Ok(Self {
            diagram: module.gcm().diagram(),
            lambda: module.lambda().clone(),
            depth: module.depth(),
            relations,
            kernel,
        })
    }

    pub fn all_verified(&self) -> bool {
        self.relations.iter().all(|r| r.outcome.is_verified())
    }

    pub fn any_failed(&self) -> bool {
        self.relations.iter().any(|r| matches!(r.outcome, Outcome::Failed { .. }))
    }

    pub fn any_window_empty(&self) -> bool {
        self.relations.iter().any(|r| matches!(r.outcome, Outcome::WindowEmpty { .. }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::diagrams::*;

    fn lam(v: &[i64]) -> DominantWeight {
        DominantWeight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn instance_counts() {
        let g = triangle_with_pendant();
        let count = |id: RelationId| relation_instances(&g).iter().filter(|(r, _)| *r == id).count();
        // four edges, two non-edges
        assert_eq!(count(RelationId::R1), 4);
        assert_eq!(count(RelationId::R4), 2);
        assert_eq!(count(RelationId::R5), 4);
        assert_eq!(count(RelationId::R7), 4);
        assert_eq!(count(RelationId::R11), 8);
        assert!(!RelationId::R8.pattern().matches(&g, &[1, 3]));
    }

    #[test]
    fn small_suite_on_a2() {
        let m = TruncatedModule::build(&a(2), &lam(&[1, 1]), 4).unwrap();
        let rep = Representation::new(&m);
        let results = verify_all(&rep).unwrap();
        assert!(results.iter().all(|r| r.outcome.is_verified()), "{results:?}");
        assert!(results.iter().filter(|r| r.id == RelationId::R11).all(|r| r.sign.is_some()));
    }

    #[test]
    fn pattern_mismatch_and_non_adjacent_sign() {
        let m = TruncatedModule::build(&a(3), &lam(&[1, 0, 1]), 2).unwrap();
        let rep = Representation::new(&m);
        assert!(matches!(verify_relation(&rep, RelationId::R8, &[0, 2]), Err(VerifyError::PatternMismatch { .. })));
        assert!(resolve_commutator_sign(&rep, 0, 2).is_err());
    }

    #[test]
    fn depth_one_window_is_empty() {
        let m = TruncatedModule::build(&a(2), &lam(&[1, 1]), 1).unwrap();
        let rep = Representation::new(&m);
        let r = verify_relation(&rep, RelationId::R1, &[0]).unwrap();
        assert_eq!(r.outcome, Outcome::WindowEmpty { depth: 1 });
    }

    #[test]
    fn kernel_criterion_examples() {
        let g = triangle_with_pendant();
        assert!(kernel_membership(&g, &lam(&[1, 1, 1, 1]), &[]));
        assert!(!kernel_membership(&g, &lam(&[1, 0, 0, 0]), &[0]));
        assert!(kernel_membership(&a(2), &lam(&[0, 0]), &[0, 1]));
    }

    #[test]
    fn gf2_nullspace_of_small_system() {
        // x0 + x1 = 0, x2 = 0 over three unknowns
        let basis = gf2_nullspace(3, &[0b011, 0b100]);
        assert_eq!(basis, vec![0b011]);
        assert_eq!(gf2_nullspace(2, &[]), vec![0b01, 0b10]);
    }

    #[test]
    fn kernel_probe_agrees_with_oracle() {
        let m = TruncatedModule::build(&triangle_with_pendant(), &lam(&[2, 0, 0, 0]), 3).unwrap();
        let k = kernel_probe(&Representation::new(&m)).unwrap();
        assert_eq!(k.order as usize, k.members.len());
        assert!(k.members.contains(&vec![]));
    }
}
