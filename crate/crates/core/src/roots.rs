//! Real roots: reflection-closure enumeration, prenilpotent pairs and the
//! positive real roots in the open cone spanned by a pair.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::GeneralizedCartanMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("height bound must be positive")]
    ZeroHeightBound,
    #[error("root lattice vector {0} is not a real root")]
    InputNotRealRoot(Root),
    #[error("pair ({0}, {1}) is not prenilpotent")]
    NotPrenilpotent(Root, Root),
    #[error("pairing {pairing} ≤ -2: the norm equation has infinitely many solutions, refusing to search")]
    UnboundedInterval { pairing: i64 },
    #[error("vector length {got} does not match rank {rank}")]
    DimensionMismatch { rank: usize, got: usize },
    #[error("GCM must be simply laced")]
    NotSimplyLaced,
}

/// Element of the root lattice in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }

    pub fn scaled_sum(&self, m: i64, other: &Root, n: i64) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(&a, &b)| m * a + n * b).collect())
    }

    pub fn norm(&self, gcm: &GeneralizedCartanMatrix) -> i64 {
        gcm.bilinear_form(&self.0, &self.0).expect("root length matches rank")
    }
}

impl std::ops::Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root(self.0.iter().map(|&c| -c).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `w_i(x) = x − ⟨x, α_i^∨⟩ α_i`.
pub fn simple_reflection(gcm: &GeneralizedCartanMatrix, i: usize, root: &Root) -> Root {
    let mut out = root.0.clone();
    out[i] -= gcm.coroot_pairing(i, &root.0);
    Root(out)
}

/// Decides real-rootness by descent: a positive real root other than a simple
/// root has some `i` with `⟨β, α_i^∨⟩ > 0`, and reflecting in it lowers the
/// height while staying a positive real root.
pub fn is_real_root(gcm: &GeneralizedCartanMatrix, v: &Root) -> bool {
    let mut cur = if v.is_negative() { -v } else { v.clone() };
    loop {
        if !cur.is_positive() {
            return false;
        }
        if cur.height() == 1 {
            return true;
        }
        let Some(i) = (0..gcm.rank()).find(|&i| gcm.coroot_pairing(i, &cur.0) > 0) else {
            return false;
        };
        cur = simple_reflection(gcm, i, &cur);
    }
}

#[derive(Debug, Clone)]
pub struct RealRootSet {
    gcm: GeneralizedCartanMatrix,
    height_bound: i64,
    roots: BTreeSet<Root>,
}

impl RealRootSet {
    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn height_bound(&self) -> i64 {
        self.height_bound
    }

    pub fn roots(&self) -> &BTreeSet<Root> {
        &self.roots
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.roots.contains(r)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn positive(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }
}

/// Breadth-first closure of `{±α_i}` under simple reflections, pruned at
/// `|height| ≤ height_bound`.
pub fn enumerate_real_roots(gcm: &GeneralizedCartanMatrix, height_bound: i64) -> Result<RealRootSet, RootError> {
    if height_bound <= 0 {
        return Err(RootError::ZeroHeightBound);
    }
    if !gcm.is_simply_laced() {
        return Err(RootError::NotSimplyLaced);
    }
    let n = gcm.rank();
    let mut roots = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let s = Root::simple(n, i);
        for r in [-&s, s] {
            if roots.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    while let Some(r) = queue.pop_front() {
        for i in 0..n {
            let img = simple_reflection(gcm, i, &r);
            if img.height().abs() > height_bound {
                continue;
            }
            if roots.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    Ok(RealRootSet { gcm: gcm.clone(), height_bound, roots })
}

fn check_real(gcm: &GeneralizedCartanMatrix, r: &Root) -> Result<(), RootError> {
    if r.0.len() != gcm.rank() {
        return Err(RootError::DimensionMismatch { rank: gcm.rank(), got: r.0.len() });
    }
    if !is_real_root(gcm, r) {
        return Err(RootError::InputNotRealRoot(r.clone()));
    }
    Ok(())
}

/// Prenilpotency of a pair of real roots. Pairs with `(α|β) ≥ −1` are
/// accepted directly; the rest go through [`prenilpotent_by_interval`].
pub fn is_prenilpotent(roots: &RealRootSet, alpha: &Root, beta: &Root) -> Result<bool, RootError> {
    let gcm = roots.gcm();
    check_real(gcm, alpha)?;
    check_real(gcm, beta)?;
    if *alpha == -beta {
        return Ok(false);
    }
    if gcm.bilinear_form(&alpha.0, &beta.0).unwrap() >= -1 {
        return Ok(true);
    }
    prenilpotent_by_interval(gcm, alpha, beta)
}

/// `α ≠ −β` and `(ℤ>0 α + ℤ>0 β) ∩ Δ⁺_re` finite.
///
/// Positive solutions of `m² + p·mn + n² = 1` exist only for `p ≤ −1`; for
/// `p = −1` the single solution is `(1, 1)`, and for `p ≤ −2` the solutions
/// are an infinite reflection orbit (every one of them a real root) whose
/// members approach the rays `ρα + β`, `ρ² + pρ + 1 = 0`. The intersection is
/// infinite iff one of those rays lies in the closed positive orthant.
pub fn prenilpotent_by_interval(gcm: &GeneralizedCartanMatrix, alpha: &Root, beta: &Root) -> Result<bool, RootError> {
    check_real(gcm, alpha)?;
    check_real(gcm, beta)?;
    if *alpha == -beta {
        return Ok(false);
    }
    let p = gcm.bilinear_form(&alpha.0, &beta.0).unwrap();
    if p >= -1 {
        return Ok(true);
    }
    // ρ = (−p ± √D) / 2 with D = p² − 4; test sign of 2(ρ α_k + β_k)
    //   = (−p α_k + 2 β_k) ± α_k √D.
    let disc = i128::from(p) * i128::from(p) - 4;
    let ray_nonneg = |sign: i128| {
        alpha.0.iter().zip(&beta.0).all(|(&a, &b)| {
            let u = -i128::from(p) * i128::from(a) + 2 * i128::from(b);
            let v = sign * i128::from(a);
            sign_of_surd(u, v, disc) >= 0
        })
    };
    Ok(!(ray_nonneg(1) || ray_nonneg(-1)))
}

/// Sign of `u + v·√d` for `d ≥ 0`.
fn sign_of_surd(u: i128, v: i128, d: i128) -> i32 {
    let s = |x: i128| x.signum() as i32;
    if v == 0 || d == 0 {
        return s(u);
    }
    if u == 0 {
        return s(v);
    }
    if s(u) == s(v) {
        return s(u);
    }
    // Opposite signs: compare u² with v² d.
    match (u * u).cmp(&(v * v * d)) {
        std::cmp::Ordering::Greater => s(u),
        std::cmp::Ordering::Less => s(v),
        std::cmp::Ordering::Equal => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalTerm {
    pub m: i64,
    pub n: i64,
    pub root: Root,
}

/// All `(m, n, mα + nβ)` with `m, n > 0` and `mα + nβ` a positive real root.
///
/// For `p = (α|β) ≥ −1` the quadratic form `m² + p·mn + n²` is at least
/// `(m² + n²)/2`, so the search box is `m, n ≤ 1`.
pub fn commutation_interval(roots: &RealRootSet, alpha: &Root, beta: &Root) -> Result<Vec<IntervalTerm>, RootError> {
    let gcm = roots.gcm();
    if !is_prenilpotent(roots, alpha, beta)? {
        return Err(RootError::NotPrenilpotent(alpha.clone(), beta.clone()));
    }
    let p = gcm.bilinear_form(&alpha.0, &beta.0).unwrap();
    if p <= -2 {
        return Err(RootError::UnboundedInterval { pairing: p });
    }
    let bound = 1;
    let mut out = Vec::new();
    for m in 1..=bound {
        for n in 1..=bound {
            if m * m + p * m * n + n * n != 1 {
                continue;
            }
            let v = alpha.scaled_sum(m, beta, n);
            let real = if v.height().abs() <= roots.height_bound() {
                roots.contains(&v)
            } else {
                is_real_root(gcm, &v)
            };
            if v.is_positive() && real {
                out.push(IntervalTerm { m, n, root: v });
            }
        }
    }
    Ok(out)
}
