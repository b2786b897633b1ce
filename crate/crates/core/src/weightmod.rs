//! The ℤ-form `V^λ_ℤ = 𝒰⁻_ℤ · v_λ` of an integrable highest-weight module,
//! built weight space by weight space.
//!
//! A weight below `λ` is never represented by Verma monomials directly. A
//! vector `v` of weight `μ ≠ λ` in the irreducible module is zero iff
//! `e_j v = 0` for every `j`, so `V_μ` embeds in `⊕_j V_{μ+α_j}` via its
//! raising images. Each weight space is then the lattice spanned by the
//! images `f_i^{(m)} b` of the lattice bases `b` of `V_{μ+mα_i}`, whose
//! raising images follow from
//!
//! ```text
//! e_j f_i^{(m)} = f_i^{(m)} e_j                           (j ≠ i)
//! e_i f_i^{(m)} = f_i^{(m)} e_i + f_i^{(m-1)} (h_i − m + 1)
//! ```
//!
//! The lattice basis of `V_μ` is a subset of those images that spans all of
//! them over ℤ (checked exactly), and the operator blocks for `e_j` and `f_i^{(m)}` fall out as integer
//! coordinates against it. Building `V_μ` touches only weights in the box
//! `{ν : μ ≤ ν ≤ λ}`, so spaces below the eager truncation can be added on
//! demand.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use serde::Serialize;
use thiserror::Error;

use crate::cartan::GeneralizedCartanMatrix;
use crate::linalg::{self, Int, IntMatrix, LinalgError, LatticeBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("weight {0:?} is not dominant integral")]
    NonDominantWeight(Vec<i64>),
    #[error("weight has {got} coordinates, diagram has rank {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error("GCM must be simply laced")]
    NotSimplyLaced,
    #[error("resource cap exceeded: {0}")]
    DepthOverflow(String),
    #[error("slice {depth} is outside the built range 0..={built}")]
    SliceOutOfRange { depth: i64, built: u32 },
    #[error("divided power e_{node}^({power}) is not integral")]
    NotIntegral { node: usize, power: u32 },
    #[error(transparent)]
    Arithmetic(#[from] LinalgError),
}

/// `μ = λ − Σ k_i α_i`, stored as the depth vector `k`. Ordered by depth,
/// then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Weight(Vec<u32>);

impl Weight {
    pub fn top(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn from_depths(k: Vec<u32>) -> Self {
        Weight(k)
    }

    pub fn depths(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `μ + mα_i`, if it does not climb above `λ`.
    pub fn raised(&self, i: usize, m: u32) -> Option<Weight> {
        let k = self.0[i].checked_sub(m)?;
        let mut v = self.0.clone();
        v[i] = k;
        Some(Weight(v))
    }

    /// `μ − mα_i`.
    pub fn lowered(&self, i: usize, m: u32) -> Weight {
        let mut v = self.0.clone();
        v[i] += m;
        Weight(v)
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&k| i64::from(k)).collect()
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.depth(), &self.0).cmp(&(other.depth(), &other.0))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ-{:?}", self.0)
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DominantWeight(Vec<i64>);

impl DominantWeight {
    pub fn new(coords: Vec<i64>) -> Result<Self, ModuleError> {
        if coords.iter().any(|&c| c < 0) {
            return Err(ModuleError::NonDominantWeight(coords));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_regular(&self) -> bool {
        self.0.iter().all(|&c| c >= 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildLimits {
    /// Largest depth accepted for the eager truncation.
    pub max_depth: u32,
    /// Cap on the total number of basis vectors, including spaces added on demand.
    pub max_basis: usize,
}

impl Default for BuildLimits {
    fn default() -> Self {
        Self { max_depth: 6, max_basis: 2_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `e_i^{(m)}`
    E,
    /// `f_i^{(m)}`
    F,
}

/// One weight space with the operator blocks that start or end on it.
#[derive(Debug)]
pub struct WeightSpace {
    rank: usize,
    pairings: Vec<i64>,
    string_down: Vec<i64>,
    /// `raise[i][m-1]`: `e_i^{(m)}` from this space to `μ + mα_i`.
    raise: Vec<Vec<IntMatrix>>,
    /// `lower_from[i][m-1]`: `f_i^{(m)}` from `μ + mα_i` into this space.
    lower_from: Vec<Vec<IntMatrix>>,
}

impl WeightSpace {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `⟨μ, α_i^∨⟩`.
    pub fn pairing(&self, i: usize) -> i64 {
        self.pairings[i]
    }

    /// Largest `m` for which `f_i^{(m)}` can be nonzero on this space.
    pub fn string_down(&self, i: usize) -> i64 {
        self.string_down[i]
    }

    pub fn raise_block(&self, i: usize, m: u32) -> Option<&IntMatrix> {
        self.raise[i].get((m as usize).checked_sub(1)?)
    }

    pub fn lower_block(&self, i: usize, m: u32) -> Option<&IntMatrix> {
        self.lower_from[i].get((m as usize).checked_sub(1)?)
    }
}

/// A basis vector of the lattice: position `index` in the basis of `weight`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisVector {
    pub weight: Weight,
    pub index: usize,
}

/// Finitely supported vector of `V^λ_ℤ`, grouped by weight.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModVec(BTreeMap<Weight, Vec<Int>>);

impl ModVec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(b: &BasisVector, rank: usize) -> Self {
        let mut c = vec![0; rank];
        c[b.index] = 1;
        let mut m = BTreeMap::new();
        m.insert(b.weight.clone(), c);
        Self(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Weight, &[Int])> {
        self.0.iter().map(|(w, c)| (w, c.as_slice()))
    }

    pub fn component(&self, w: &Weight) -> Option<&[Int]> {
        self.0.get(w).map(Vec::as_slice)
    }

    /// Non-zero coordinates as `(basis vector, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (BasisVector, Int)> + '_ {
        self.0.iter().flat_map(|(w, c)| {
            c.iter()
                .enumerate()
                .filter(|&(_, &x)| x != 0)
                .map(move |(index, &x)| (BasisVector { weight: w.clone(), index }, x))
        })
    }

    /// `self += k · coords` on weight `w`.
    pub fn add_scaled(&mut self, w: &Weight, coords: &[Int], k: Int) -> Result<(), LinalgError> {
        if k == 0 || coords.iter().all(|&x| x == 0) {
            return Ok(());
        }
        let slot = self.0.entry(w.clone()).or_insert_with(|| vec![0; coords.len()]);
        for (s, &x) in slot.iter_mut().zip(coords) {
            *s = linalg::checked_add(*s, linalg::checked_mul(x, k)?)?;
        }
        if slot.iter().all(|&x| x == 0) {
            self.0.remove(w);
        }
        Ok(())
    }

    pub fn add_vec(&mut self, other: &ModVec, k: Int) -> Result<(), LinalgError> {
        for (w, c) in &other.0 {
            self.add_scaled(w, c, k)?;
        }
        Ok(())
    }
}

/// Weight spaces of `V^λ_ℤ` of depth at most `depth`, plus any deeper spaces
/// requested later through [`TruncatedModule::space`].
pub struct TruncatedModule {
    gcm: GeneralizedCartanMatrix,
    lambda: DominantWeight,
    depth: u32,
    limits: BuildLimits,
    spaces: RwLock<HashMap<Weight, Arc<WeightSpace>>>,
    basis_total: AtomicUsize,
}

impl fmt::Debug for TruncatedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedModule")
            .field("lambda", &self.lambda)
            .field("depth", &self.depth)
            .field("basis_total", &self.basis_total.load(Ordering::Relaxed))
            .finish()
    }
}

impl TruncatedModule {
    pub fn build(gcm: &GeneralizedCartanMatrix, lambda: &DominantWeight, depth: u32) -> Result<Self, ModuleError> {
        Self::build_with_limits(gcm, lambda, depth, BuildLimits::default())
    }

    pub fn build_with_limits(
        gcm: &GeneralizedCartanMatrix,
        lambda: &DominantWeight,
        depth: u32,
        limits: BuildLimits,
    ) -> Result<Self, ModuleError> {
        if !gcm.is_simply_laced() {
            return Err(ModuleError::NotSimplyLaced);
        }
        if lambda.coords().len() != gcm.rank() {
            return Err(ModuleError::RankMismatch { rank: gcm.rank(), got: lambda.coords().len() });
        }
        if depth > limits.max_depth {
            return Err(ModuleError::DepthOverflow(format!("depth {depth} exceeds cap {}", limits.max_depth)));
        }
        let module = Self {
            gcm: gcm.clone(),
            lambda: lambda.clone(),
            depth,
            limits,
            spaces: RwLock::new(HashMap::new()),
            basis_total: AtomicUsize::new(0),
        };
        {
            let mut map = module.spaces.write().unwrap();
            for d in 0..=depth {
                for k in compositions(gcm.rank(), d) {
                    module.build_into(&mut map, &Weight(k))?;
                }
            }
        }
        Ok(module)
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn lambda(&self) -> &DominantWeight {
        &self.lambda
    }

    /// Depth of the eager truncation.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    /// Total number of basis vectors held, including on-demand spaces.
    pub fn basis_total(&self) -> usize {
        self.basis_total.load(Ordering::Relaxed)
    }

    /// The weight space at `w`, building it (and everything above it) if needed.
    pub fn space(&self, w: &Weight) -> Result<Arc<WeightSpace>, ModuleError> {
        if let Some(s) = self.spaces.read().unwrap().get(w) {
            return Ok(Arc::clone(s));
        }
        let mut map = self.spaces.write().unwrap();
        self.build_into(&mut map, w)?;
        Ok(Arc::clone(&map[w]))
    }

    pub fn rank_of(&self, w: &Weight) -> Result<usize, ModuleError> {
        Ok(self.space(w)?.rank())
    }

    /// `⟨μ, α_i^∨⟩ = λ_i − Σ_j k_j a_ij`.
    pub fn coroot_pairing(&self, w: &Weight, i: usize) -> i64 {
        self.lambda.coords()[i] - self.gcm.coroot_pairing(i, &w.as_i64())
    }

    /// Weights of depth ≤ `depth` with nonzero rank, in basis order.
    pub fn weights(&self) -> Vec<(Weight, usize)> {
        let map = self.spaces.read().unwrap();
        let mut out: Vec<(Weight, usize)> = map
            .iter()
            .filter(|(w, s)| w.depth() <= self.depth && s.rank > 0)
            .map(|(w, s)| (w.clone(), s.rank))
            .collect();
        out.sort();
        out
    }

    /// Basis of the slice at depth `d`.
    pub fn slice_basis(&self, d: u32) -> Vec<BasisVector> {
        self.weights()
            .into_iter()
            .filter(|(w, _)| w.depth() == d)
            .flat_map(|(weight, r)| (0..r).map(move |index| BasisVector { weight: weight.clone(), index }))
            .collect()
    }

    /// Basis of the whole truncation, ordered by depth.
    pub fn basis(&self) -> Vec<BasisVector> {
        self.weights()
            .into_iter()
            .flat_map(|(weight, r)| (0..r).map(move |index| BasisVector { weight: weight.clone(), index }))
            .collect()
    }

    pub fn slice_rank(&self, d: u32) -> usize {
        self.weights().iter().filter(|(w, _)| w.depth() == d).map(|(_, r)| r).sum()
    }

    /// `e_i^{(m)}` applied to a vector.
    pub fn apply_e(&self, i: usize, m: u32, v: &ModVec) -> Result<ModVec, ModuleError> {
        let mut out = ModVec::zero();
        if m == 0 {
            return Ok(v.clone());
        }
        for (w, c) in v.components() {
            let Some(target) = w.raised(i, m) else { continue };
            let space = self.space(w)?;
            let block = space.raise_block(i, m).expect("raise block present when k_i ≥ m");
            out.add_scaled(&target, &block.apply(c)?, 1)?;
        }
        Ok(out)
    }

    /// `f_i^{(m)}` applied to a vector.
    pub fn apply_f(&self, i: usize, m: u32, v: &ModVec) -> Result<ModVec, ModuleError> {
        let mut out = ModVec::zero();
        if m == 0 {
            return Ok(v.clone());
        }
        for (w, c) in v.components() {
            if i64::from(m) > self.space(w)?.string_down(i) {
                continue;
            }
            let target = w.lowered(i, m);
            let space = self.space(&target)?;
            let block = space.lower_block(i, m).expect("lower block present");
            out.add_scaled(&target, &block.apply(c)?, 1)?;
        }
        Ok(out)
    }

    /// `h_i` acting diagonally.
    pub fn apply_h(&self, i: usize, v: &ModVec) -> Result<ModVec, ModuleError> {
        let mut out = ModVec::zero();
        for (w, c) in v.components() {
            out.add_scaled(w, c, Int::from(self.coroot_pairing(w, i)))?;
        }
        Ok(out)
    }

    /// Matrix of `e_i^{(m)}` (resp. `f_i^{(m)}`) from the slice at
    /// `source_depth` to the slice at `source_depth ∓ m`.
    pub fn divided_power_matrix(
        &self,
        i: usize,
        m: u32,
        direction: Direction,
        source_depth: u32,
    ) -> Result<SparseMatrix, ModuleError> {
        let target_depth = match direction {
            Direction::E => i64::from(source_depth) - i64::from(m),
            Direction::F => i64::from(source_depth) + i64::from(m),
        };
        for d in [i64::from(source_depth), target_depth] {
            if d < 0 || d > i64::from(self.depth) {
                return Err(ModuleError::SliceOutOfRange { depth: d, built: self.depth });
            }
        }
        let cols = self.slice_basis(source_depth);
        let rows = self.slice_basis(target_depth as u32);
        let row_index: HashMap<&BasisVector, usize> = rows.iter().enumerate().map(|(k, b)| (b, k)).collect();
        let mut triplets = Vec::new();
        for (c, b) in cols.iter().enumerate() {
            let unit = ModVec::unit(b, self.rank_of(&b.weight)?);
            let img = match direction {
                Direction::E => self.apply_e(i, m, &unit)?,
                Direction::F => self.apply_f(i, m, &unit)?,
            };
            for (bv, x) in img.terms() {
                triplets.push((row_index[&bv], c, x));
            }
        }
        triplets.sort_unstable();
        Ok(SparseMatrix { rows: rows.len(), cols: cols.len(), triplets })
    }

    /// Diagonal of `h_i` on the slice at depth `d`.
    pub fn coroot_diagonal(&self, i: usize, d: u32) -> Vec<i64> {
        self.slice_basis(d).iter().map(|b| self.coroot_pairing(&b.weight, i)).collect()
    }

    pub fn dump(&self) -> Result<ModuleDump, ModuleError> {
        let weights = self
            .weights()
            .into_iter()
            .map(|(w, r)| WeightRecord {
                pairings: (0..self.rank()).map(|i| self.coroot_pairing(&w, i)).collect(),
                depth: w.depth(),
                depth_vector: w,
                rank: r,
            })
            .collect();
        let mut operators = Vec::new();
        for d in 0..=self.depth {
            for i in 0..self.rank() {
                if d >= 1 {
                    operators.push(OperatorRecord::new(Direction::E, i, d, self.divided_power_matrix(i, 1, Direction::E, d)?));
                }
                if d < self.depth {
                    operators.push(OperatorRecord::new(Direction::F, i, d, self.divided_power_matrix(i, 1, Direction::F, d)?));
                }
            }
        }
        Ok(ModuleDump {
            lambda: self.lambda.clone(),
            depth: self.depth,
            total_rank: self.weights().iter().map(|(_, r)| r).sum(),
            weights,
            operators,
        })
    }

    fn build_into(&self, map: &mut HashMap<Weight, Arc<WeightSpace>>, mu: &Weight) -> Result<(), ModuleError> {
        if map.contains_key(mu) {
            return Ok(());
        }
        let n = self.rank();
        let k = mu.depths();
        for j in 0..n {
            if let Some(up) = mu.raised(j, 1) {
                self.build_into(map, &up)?;
            }
        }
        let pairings: Vec<i64> = (0..n).map(|i| self.coroot_pairing(mu, i)).collect();

        if mu.depth() == 0 {
            let space = WeightSpace {
                rank: 1,
                string_down: pairings.clone(),
                pairings,
                raise: vec![Vec::new(); n],
                lower_from: vec![Vec::new(); n],
            };
            self.account(1)?;
            map.insert(mu.clone(), Arc::new(space));
            return Ok(());
        }

        // Layout of raising-image coordinates: one segment per j with k_j ≥ 1.
        let mut segments = Vec::new();
        let mut width = 0;
        for j in 0..n {
            if let Some(up) = mu.raised(j, 1) {
                let r = map[&up].rank;
                segments.push((j, width, r, up));
                width += r;
            }
        }

        let mut generators: Vec<Vec<Int>> = Vec::new();
        let mut origin: Vec<(usize, u32, usize)> = Vec::new();
        // Higher divided powers first: they are the preferred basis vectors.
        let top = k.iter().copied().max().unwrap_or(0);
        for m in (1..=top).rev() {
            for i in (0..n).filter(|&i| k[i] >= m) {
                let nu = mu.raised(i, m).unwrap();
                let source = Arc::clone(&map[&nu]);
                if source.rank == 0 {
                    continue;
                }
                let first = generators.len();
                for c in 0..source.rank {
                    generators.push(vec![0; width]);
                    origin.push((i, m, c));
                }
                for (j, off, r, up) in &segments {
                    let (j, off, r) = (*j, *off, *r);
                    let via_up = &map[up];
                    // Block of e_j f_i^{(m)} on the basis of V_ν, in the basis of V_{μ+α_j}.
                    let mut block = if j != i || k[i] > m {
                        via_up.lower_from[i][m as usize - 1].mul(&source.raise[j][0])?
                    } else {
                        IntMatrix::zeros(r, source.rank)
                    };
                    if j == i {
                        let coeff = Int::from(source.pairings[i] - i64::from(m) + 1);
                        if coeff != 0 {
                            let down = if m == 1 {
                                IntMatrix::identity(r)
                            } else {
                                via_up.lower_from[i][m as usize - 2].clone()
                            };
                            block = block.add(&down.scale(coeff)?)?;
                        }
                    }
                    for t in 0..r {
                        for (c, &x) in block.row(t).iter().enumerate() {
                            if x != 0 {
                                generators[first + c][off + t] = x;
                            }
                        }
                    }
                }
            }
        }

        let (lattice, all_coords) = LatticeBasis::with_coordinates(width, &generators)?;
        let rank = lattice.rank();
        self.account(rank)?;

        let mut lower_from: Vec<Vec<IntMatrix>> = (0..n)
            .map(|i| {
                (1..=k[i])
                    .map(|m| IntMatrix::zeros(rank, map[&mu.raised(i, m).unwrap()].rank))
                    .collect()
            })
            .collect();
        for (coords, &(i, m, c)) in all_coords.into_iter().zip(&origin) {
            let block = &mut lower_from[i][m as usize - 1];
            for (row, x) in coords.into_iter().enumerate() {
                block.set(row, c, x);
            }
        }

        let mut raise: Vec<Vec<IntMatrix>> = vec![Vec::new(); n];
        for (j, off, r, _) in &segments {
            let mut e = IntMatrix::zeros(*r, rank);
            for (b, basis_row) in lattice.rows().iter().enumerate() {
                for t in 0..*r {
                    e.set(t, b, basis_row[off + t]);
                }
            }
            raise[*j].push(e);
        }
        // e^{(m)} = e · e^{(m-1)} / m
        for j in 0..n {
            for m in 2..=k[j] {
                let mid = mu.raised(j, m - 1).unwrap();
                let step = &map[&mid].raise[j][0];
                let prod = step.mul(&raise[j][m as usize - 2])?;
                let div = prod
                    .div_exact(Int::from(m))
                    .ok_or(ModuleError::NotIntegral { node: j, power: m })?;
                raise[j].push(div);
            }
        }

        let string_down = (0..n)
            .map(|i| {
                if rank == 0 {
                    return -1;
                }
                let mut p = 0;
                while let Some(up) = mu.raised(i, p + 1) {
                    if map[&up].rank == 0 {
                        break;
                    }
                    p += 1;
                }
                i64::from(p) + pairings[i]
            })
            .collect();

        map.insert(mu.clone(), Arc::new(WeightSpace { rank, pairings, string_down, raise, lower_from }));
        Ok(())
    }

    fn account(&self, rank: usize) -> Result<(), ModuleError> {
        let total = self.basis_total.fetch_add(rank, Ordering::Relaxed) + rank;
        if total > self.limits.max_basis {
            return Err(ModuleError::DepthOverflow(format!(
                "{total} basis vectors exceeds cap {}",
                self.limits.max_basis
            )));
        }
        Ok(())
    }
}


/// All `k ∈ ℕ^n` with `Σ k = d`, in lexicographic order.
pub fn compositions(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=d {
            prefix.push(x);
            rec(n, d - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Sparse integer matrix as sorted `(row, col, value)` triplets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(usize, usize, Int)>,
}

impl SparseMatrix {
    pub fn identity(n: usize) -> Self {
        Self { rows: n, cols: n, triplets: (0..n).map(|k| (k, k, 1)).collect() }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for &(r, c, v) in &self.triplets {
            m.set(r, c, v);
        }
        m
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightRecord {
    pub depth_vector: Weight,
    pub depth: u32,
    pub rank: usize,
    pub pairings: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorRecord {
    pub op: Direction,
    pub node: usize,
    pub power: u32,
    pub source_depth: u32,
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(usize, usize, Int)>,
}

impl OperatorRecord {
    fn new(op: Direction, node: usize, source_depth: u32, m: SparseMatrix) -> Self {
        Self { op, node: node + 1, power: 1, source_depth, rows: m.rows, cols: m.cols, triplets: m.triplets }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleDump {
    pub lambda: DominantWeight,
    pub depth: u32,
    pub total_rank: usize,
    pub weights: Vec<WeightRecord>,
    pub operators: Vec<OperatorRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::diagrams::*;

    fn module(gcm: &GeneralizedCartanMatrix, lambda: &[i64], depth: u32) -> TruncatedModule {
        TruncatedModule::build(gcm, &DominantWeight::new(lambda.to_vec()).unwrap(), depth).unwrap()
    }

    #[test]
    fn top_space_is_rank_one() {
        let m = module(&triangle_with_pendant(), &[1, 0, 2, 1], 2);
        assert_eq!(m.rank_of(&Weight::top(4)).unwrap(), 1);
        assert_eq!(m.slice_rank(0), 1);
    }

    #[test]
    fn first_slice_ranks_follow_lambda() {
        let m = module(&triangle_with_pendant(), &[1, 0, 2, 1], 1);
        for i in 0..4 {
            let w = Weight::top(4).lowered(i, 1);
            let expected = usize::from(m.lambda().coords()[i] >= 1);
            assert_eq!(m.rank_of(&w).unwrap(), expected);
        }
    }

    #[test]
    fn pairings() {
        let m = module(&triangle_with_pendant(), &[2, 1, 1, 3], 1);
        let top = Weight::top(4);
        assert_eq!(m.coroot_pairing(&top, 0), 2);
        assert_eq!(m.coroot_pairing(&top.lowered(0, 1), 0), 0);
        // nodes 0 and 1 are adjacent
        assert_eq!(m.coroot_pairing(&top.lowered(1, 1), 0), 3);
    }

    #[test]
    fn errors() {
        assert_eq!(DominantWeight::new(vec![-1, 0]), Err(ModuleError::NonDominantWeight(vec![-1, 0])));
        let lambda = DominantWeight::new(vec![1, 1]).unwrap();
        assert!(matches!(TruncatedModule::build(&a(2), &lambda, 7), Err(ModuleError::DepthOverflow(_))));
        let tiny = BuildLimits { max_depth: 6, max_basis: 3 };
        assert!(matches!(
            TruncatedModule::build_with_limits(&a(2), &lambda, 4, tiny),
            Err(ModuleError::DepthOverflow(_))
        ));
        let m = TruncatedModule::build(&a(2), &lambda, 2).unwrap();
        assert!(matches!(m.divided_power_matrix(0, 1, Direction::F, 2), Err(ModuleError::SliceOutOfRange { .. })));
        assert!(matches!(m.divided_power_matrix(0, 2, Direction::E, 1), Err(ModuleError::SliceOutOfRange { .. })));
    }

    #[test]
    fn zeroth_power_is_identity() {
        let m = module(&a(3), &[1, 1, 1], 3);
        for d in 0..=3 {
            let id = m.divided_power_matrix(1, 0, Direction::F, d).unwrap();
            assert_eq!(id, SparseMatrix::identity(m.slice_rank(d)));
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(10, 4).len(), 715);
    }
}
