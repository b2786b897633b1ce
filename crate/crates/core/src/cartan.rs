//! Generalized Cartan matrices, their Dynkin diagrams, and finite / affine /
//! indefinite classification by exact principal-minor arithmetic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Int, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("not simply laced: entry a[{row}][{col}] = {value}")]
    NotSimplyLaced { row: usize, col: usize, value: i64 },
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("diagram is disconnected")]
    DisconnectedInput,
    #[error("dimension mismatch: rank {rank}, vectors of length {left} and {right}")]
    DimensionMismatch { rank: usize, left: usize, right: usize },
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error(transparent)]
    Arithmetic(#[from] linalg::LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CartanType {
    Finite,
    Affine,
    Indefinite,
}

/// JSON input form: `{"matrix": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GcmInput {
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedCartanMatrix {
    entries: Vec<Vec<i64>>,
    simply_laced: bool,
}

impl GeneralizedCartanMatrix {
    /// Validates the GCM axioms. Non-simply-laced matrices are accepted.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = entries.len();
        if n == 0 {
            return Err(CartanError::NotGcm("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(CartanError::NotGcm(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if row[i] != 2 {
                return Err(CartanError::NotGcm(format!("diagonal entry a[{i}][{i}] = {}", row[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if entries[i][j] > 0 {
                    return Err(CartanError::NotGcm(format!("positive off-diagonal a[{i}][{j}] = {}", entries[i][j])));
                }
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(CartanError::NotGcm(format!("asymmetric zero pattern at ({i}, {j})")));
                }
            }
        }
        let simply_laced = (0..n).all(|i| (0..n).all(|j| i == j || entries[i][j] >= -1));
        Ok(Self { entries, simply_laced })
    }

    /// Validates and additionally insists on single bonds only.
    pub fn simply_laced(entries: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let gcm = Self::new(entries)?;
        gcm.require_simply_laced()?;
        Ok(gcm)
    }

    pub fn require_simply_laced(&self) -> Result<(), CartanError> {
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.entries[i][j] < -1 {
                    return Err(CartanError::NotSimplyLaced { row: i, col: j, value: self.entries[i][j] });
                }
            }
        }
        Ok(())
    }

    /// Simply-laced GCM of a graph on `n` nodes.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, CartanError> {
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(CartanError::NotGcm(format!("bad edge ({a}, {b})")));
            }
            m[a][b] = -1;
            m[b][a] = -1;
        }
        Self::simply_laced(m)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn is_simply_laced(&self) -> bool {
        self.simply_laced
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.entries[i][j] != 0
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank()).filter(move |&j| self.adjacent(i, j))
    }

    pub fn diagram(&self) -> DynkinDiagram {
        let n = self.rank();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.entries[i][j] != 0 {
                    edges.push((i, j));
                }
            }
        }
        DynkinDiagram { nodes: n, edges }
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.subset_connected(&all)
    }

    fn subset_connected(&self, nodes: &[usize]) -> bool {
        if nodes.is_empty() {
            return false;
        }
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(k) = stack.pop() {
            for (l, &node) in nodes.iter().enumerate() {
                if !seen[l] && self.adjacent(nodes[k], node) {
                    seen[l] = true;
                    stack.push(l);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Connected components, each sorted, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut k = 0;
            while k < members.len() {
                let v = members[k];
                for w in self.neighbours(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Principal submatrix on `nodes` (in the given order).
    pub fn submatrix(&self, nodes: &[usize]) -> Result<Self, CartanError> {
        if let Some(&bad) = nodes.iter().find(|&&k| k >= self.rank()) {
            return Err(CartanError::NodeOutOfRange(bad));
        }
        let entries = nodes.iter().map(|&i| nodes.iter().map(|&j| self.entries[i][j]).collect()).collect();
        Self::new(entries)
    }

    /// Symmetric integer matrix `D·A` with `D` a positive diagonal matrix.
    pub fn symmetrized(&self) -> Result<IntMatrix, CartanError> {
        let n = self.rank();
        // d_i as a rational num/den, propagated along edges within components.
        let mut d: Vec<Option<(Int, Int)>> = vec![None; n];
        for comp in self.components() {
            d[comp[0]] = Some((1, 1));
            let mut stack = vec![comp[0]];
            while let Some(i) = stack.pop() {
                let (num, den) = d[i].unwrap();
                for j in self.neighbours(i) {
                    // d_i a_ij = d_j a_ji
                    let cand = reduce(num * Int::from(self.entries[i][j]), den * Int::from(self.entries[j][i]));
                    match d[j] {
                        None => {
                            d[j] = Some(cand);
                            stack.push(j);
                        }
                        Some(existing) if existing != cand => return Err(CartanError::NotSymmetrizable),
                        Some(_) => {}
                    }
                }
            }
        }
        let lcm = d.iter().fold(1, |acc, x| lcm(acc, x.unwrap().1));
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            let (num, den) = d[i].unwrap();
            let scale = num * (lcm / den);
            for j in 0..n {
                out.set(i, j, scale * Int::from(self.entries[i][j]));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if out.get(i, j) != out.get(j, i) {
                    return Err(CartanError::NotSymmetrizable);
                }
            }
        }
        Ok(out)
    }

    /// `xᵀ A y`.
    pub fn bilinear_form(&self, x: &[i64], y: &[i64]) -> Result<i64, CartanError> {
        let n = self.rank();
        if x.len() != n || y.len() != n {
            return Err(CartanError::DimensionMismatch { rank: n, left: x.len(), right: y.len() });
        }
        let mut acc = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc += x[i] * self.entries[i][j] * y[j];
            }
        }
        Ok(acc)
    }

    /// `⟨x, α_i^∨⟩ = Σ_j a_ij x_j`.
    #[inline]
    pub fn coroot_pairing(&self, i: usize, x: &[i64]) -> i64 {
        self.entries[i].iter().zip(x).map(|(&a, &c)| a * c).sum()
    }

    /// Finite iff positive definite, affine iff positive semidefinite with a
    /// one-dimensional radical, indefinite otherwise.
    pub fn classify(&self) -> Result<CartanType, CartanError> {
        classify_symmetric(&self.symmetrized()?)
    }

    /// Classification of each connected component.
    pub fn classify_components(&self) -> Result<Vec<(Vec<usize>, CartanType)>, CartanError> {
        self.components()
            .into_iter()
            .map(|c| {
                let t = self.submatrix(&c)?.classify()?;
                Ok((c, t))
            })
            .collect()
    }

    /// Indefinite, and every proper connected subdiagram finite or affine.
    pub fn is_hyperbolic(&self) -> Result<bool, CartanError> {
        if !self.is_connected() {
            return Err(CartanError::DisconnectedInput);
        }
        if self.classify()? != CartanType::Indefinite {
            return Ok(false);
        }
        let n = self.rank();
        let sym = self.symmetrized()?;
        for mask in 1u64..(1u64 << n) - 1 {
            let nodes: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
            if !self.subset_connected(&nodes) {
                continue;
            }
            if classify_symmetric(&principal(&sym, &nodes))? == CartanType::Indefinite {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Node/edge description of the diagram; serializes with 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinDiagram {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Serialize for DynkinDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            nodes: usize,
            edges: Vec<[usize; 2]>,
        }
        Repr { nodes: self.nodes, edges: self.edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect() }.serialize(s)
    }
}

fn principal(m: &IntMatrix, nodes: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zeros(nodes.len(), nodes.len());
    for (a, &i) in nodes.iter().enumerate() {
        for (b, &j) in nodes.iter().enumerate() {
            out.set(a, b, m.get(i, j));
        }
    }
    out
}

fn classify_symmetric(sym: &IntMatrix) -> Result<CartanType, CartanError> {
    let n = sym.rows();
    // Sylvester: all leading principal minors positive.
    let mut positive_definite = true;
    for k in 1..=n {
        let nodes: Vec<usize> = (0..k).collect();
        if linalg::determinant(&principal(sym, &nodes))? <= 0 {
            positive_definite = false;
            break;
        }
    }
    if positive_definite {
        return Ok(CartanType::Finite);
    }
    // Semidefinite iff every principal minor is non-negative.
    for mask in 1u64..(1u64 << n) {
        let nodes: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
        if linalg::determinant(&principal(sym, &nodes))? < 0 {
            return Ok(CartanType::Indefinite);
        }
    }
    if n - linalg::rank(sym)? == 1 {
        Ok(CartanType::Affine)
    } else {
        Ok(CartanType::Indefinite)
    }
}

fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: Int, b: Int) -> Int {
    a / gcd(a, b) * b
}

fn reduce(num: Int, den: Int) -> (Int, Int) {
    let g = gcd(num, den);
    let (num, den) = (num / g, den / g);
    if den < 0 {
        (-num, -den)
    } else {
        (num, den)
    }
}

/// Representatives of the isomorphism classes of connected simply-laced
/// diagrams on `n` nodes, as canonical edge masks. Intended for small `n`.
pub fn connected_simply_laced_diagrams(n: usize) -> Vec<GeneralizedCartanMatrix> {
    assert!(n <= 6, "enumeration is exponential in the rank");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        let canon = perms
            .iter()
            .map(|p| {
                edges.iter().fold(0u32, |acc, &(a, b)| {
                    let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                    acc | 1 << pairs.iter().position(|&e| e == (x, y)).unwrap()
                })
            })
            .min()
            .unwrap_or(0);
        if !seen.insert(canon) {
            continue;
        }
        let gcm = GeneralizedCartanMatrix::from_edges(n, &edges).expect("valid edge list");
        if gcm.is_connected() {
            out.push(gcm);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// A few named diagrams used throughout tests and examples.
pub mod diagrams {
    use super::GeneralizedCartanMatrix;

    /// Path on `n` nodes.
    pub fn a(n: usize) -> GeneralizedCartanMatrix {
        let edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
        GeneralizedCartanMatrix::from_edges(n, &edges).unwrap()
    }

    /// Cycle on `n ≥ 3` nodes.
    pub fn cycle(n: usize) -> GeneralizedCartanMatrix {
        let mut edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
        edges.push((n - 1, 0));
        GeneralizedCartanMatrix::from_edges(n, &edges).unwrap()
    }

    /// Triangle on nodes 0,1,2 with node 3 hanging off node 0.
    pub fn triangle_with_pendant() -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap()
    }

    /// Four-cycle with one diagonal.
    pub fn square_with_diagonal() -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap()
    }

    pub fn complete4() -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// E₁₀: path 0..=8 with node 9 attached to node 2.
    pub fn e10() -> GeneralizedCartanMatrix {
        let mut edges: Vec<_> = (1..9).map(|k| (k - 1, k)).collect();
        edges.push((2, 9));
        GeneralizedCartanMatrix::from_edges(10, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::diagrams::*;
    use super::*;

    #[test]
    fn validation() {
        let a2 = GeneralizedCartanMatrix::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        assert!(a2.is_simply_laced());
        let double = vec![vec![2, -2], vec![-2, 2]];
        assert!(GeneralizedCartanMatrix::new(double.clone()).is_ok());
        assert!(matches!(
            GeneralizedCartanMatrix::simply_laced(double),
            Err(CartanError::NotSimplyLaced { .. })
        ));
        assert!(matches!(
            GeneralizedCartanMatrix::new(vec![vec![2, 0], vec![-1, 2]]),
            Err(CartanError::NotGcm(_))
        ));
        assert!(matches!(GeneralizedCartanMatrix::new(vec![vec![1]]), Err(CartanError::NotGcm(_))));
        assert!(matches!(
            GeneralizedCartanMatrix::new(vec![vec![2, 1], vec![1, 2]]),
            Err(CartanError::NotGcm(_))
        ));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(a(2).classify().unwrap(), CartanType::Finite);
        assert_eq!(cycle(3).classify().unwrap(), CartanType::Affine);
        assert_eq!(triangle_with_pendant().classify().unwrap(), CartanType::Indefinite);
        let b2 = GeneralizedCartanMatrix::new(vec![vec![2, -2], vec![-1, 2]]).unwrap();
        assert_eq!(b2.classify().unwrap(), CartanType::Finite);
        let a1_affine = GeneralizedCartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert_eq!(a1_affine.classify().unwrap(), CartanType::Affine);
    }

    #[test]
    fn hyperbolic_examples() {
        assert!(triangle_with_pendant().is_hyperbolic().unwrap());
        assert!(e10().is_hyperbolic().unwrap());
        assert!(!a(4).is_hyperbolic().unwrap());
        let disconnected = GeneralizedCartanMatrix::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(disconnected.is_hyperbolic(), Err(CartanError::DisconnectedInput));
    }

    #[test]
    fn bilinear_form_values() {
        let g = a(2);
        assert_eq!(g.bilinear_form(&[1, 0], &[1, 0]).unwrap(), 2);
        assert_eq!(g.bilinear_form(&[1, 0], &[0, 1]).unwrap(), -1);
        assert_eq!(g.bilinear_form(&[2, 1], &[2, 1]).unwrap(), 6);
        assert!(matches!(g.bilinear_form(&[1], &[1, 0]), Err(CartanError::DimensionMismatch { .. })));
    }

    #[test]
    fn components_and_per_component_types() {
        let g = GeneralizedCartanMatrix::from_edges(5, &[(0, 1), (2, 3), (3, 4), (4, 2)]).unwrap();
        let parts = g.classify_components().unwrap();
        assert_eq!(parts, vec![(vec![0, 1], CartanType::Finite), (vec![2, 3, 4], CartanType::Affine)]);
    }
}
