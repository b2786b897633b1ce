//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library beyond plain data accessors.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use kacmoody::cartan::CartanType;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Classification from floating-point eigenvalues of the (symmetric) matrix.
pub fn eigen_type(a: &[Vec<i64>]) -> CartanType {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j] as f64);
    let eig = m.symmetric_eigen().eigenvalues;
    let zero = eig.iter().filter(|x| x.abs() < 1e-9).count();
    let neg = eig.iter().filter(|&&x| x < -1e-9).count();
    match (neg, zero) {
        (0, 0) => CartanType::Finite,
        (0, 1) => CartanType::Affine,
        _ => CartanType::Indefinite,
    }
}

pub fn connected(a: &[Vec<i64>], nodes: &[usize]) -> bool {
    if nodes.is_empty() {
        return false;
    }
    let mut seen = vec![nodes[0]];
    let mut stack = vec![nodes[0]];
    while let Some(u) = stack.pop() {
        for &v in nodes {
            if a[u][v] != 0 && u != v && !seen.contains(&v) {
                seen.push(v);
                stack.push(v);
            }
        }
    }
    seen.len() == nodes.len()
}

fn principal(a: &[Vec<i64>], nodes: &[usize]) -> Vec<Vec<i64>> {
    nodes.iter().map(|&i| nodes.iter().map(|&j| a[i][j]).collect()).collect()
}

/// Indefinite, and every proper connected subdiagram finite or affine.
pub fn hyperbolic_by_subsets(a: &[Vec<i64>]) -> bool {
    let n = a.len();
    let all: Vec<usize> = (0..n).collect();
    if !connected(a, &all) || eigen_type(a) != CartanType::Indefinite {
        return false;
    }
    (1u32..(1 << n) - 1).all(|mask| {
        let nodes: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        !connected(a, &nodes) || eigen_type(&principal(a, &nodes)) != CartanType::Indefinite
    })
}

pub fn norm(a: &[Vec<i64>], v: &[i64]) -> i64 {
    let n = a.len();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| v[i] * a[i][j] * v[j]).sum()
}

/// Reduces a positive vector by reflections that lower its height, choosing
/// the node with the largest pairing each time.
fn descends_to_simple(a: &[Vec<i64>], v: &[i64]) -> bool {
    let mut v = v.to_vec();
    loop {
        if v.iter().any(|&c| c < 0) {
            return false;
        }
        let h: i64 = v.iter().sum();
        if h == 1 {
            return true;
        }
        let pairing = |i: usize| (0..a.len()).map(|j| a[i][j] * v[j]).sum::<i64>();
        let Some(i) = (0..a.len()).filter(|&i| pairing(i) > 0).max_by_key(|&i| (pairing(i), std::cmp::Reverse(i))) else {
            return false;
        };
        v[i] -= pairing(i);
    }
}

/// Every lattice vector of one sign with `|height| ≤ bound`, norm 2, that
/// descends to a simple root.
pub fn real_roots_by_scan(a: &[Vec<i64>], bound: i64) -> BTreeSet<Vec<i64>> {
    let n = a.len();
    let mut out = BTreeSet::new();
    let mut v = vec![0i64; n];
    fn rec(a: &[Vec<i64>], k: usize, left: i64, v: &mut Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
        if k == v.len() {
            if v.iter().any(|&c| c > 0) && norm(a, v) == 2 && descends_to_simple(a, v) {
                out.insert(v.clone());
                out.insert(v.iter().map(|c| -c).collect());
            }
            return;
        }
        for c in 0..=left {
            v[k] = c;
            rec(a, k + 1, left - c, v, out);
        }
        v[k] = 0;
    }
    rec(a, 0, bound, &mut v, &mut out);
    let _ = n;
    out
}

/// Whether `v` is a real root, by descent.
pub fn is_real(a: &[Vec<i64>], v: &[i64]) -> bool {
    if v.iter().all(|&c| c <= 0) {
        let neg: Vec<i64> = v.iter().map(|c| -c).collect();
        return descends_to_simple(a, &neg);
    }
    descends_to_simple(a, v)
}

/// Weight-space dimensions of the irreducible module from the rank of the
/// Shapovalov form on monomials `f_{w₁} ⋯ f_{w_d} v_λ`.
pub struct Shapovalov<'a> {
    a: &'a [Vec<i64>],
    lambda: &'a [i64],
    memo: HashMap<(Vec<u8>, Vec<u8>), BigInt>,
}

impl<'a> Shapovalov<'a> {
    pub fn new(a: &'a [Vec<i64>], lambda: &'a [i64]) -> Self {
        Self { a, lambda, memo: HashMap::new() }
    }

    /// `e_i f_w v` in the Verma module, as shorter words with coefficients.
    fn raise(&self, i: u8, w: &[u8]) -> Vec<(Vec<u8>, i64)> {
        let mut out = Vec::new();
        for t in 0..w.len() {
            if w[t] != i {
                continue;
            }
            let h = self.lambda[i as usize] - w[t + 1..].iter().map(|&j| self.a[i as usize][j as usize]).sum::<i64>();
            if h != 0 {
                let mut rest = w.to_vec();
                rest.remove(t);
                out.push((rest, h));
            }
        }
        out
    }

    /// `⟨f_u v, f_w v⟩`.
    pub fn form(&mut self, u: &[u8], w: &[u8]) -> BigInt {
        if u.len() != w.len() {
            return BigInt::zero();
        }
        if u.is_empty() {
            return BigInt::one();
        }
        let key = (u.to_vec(), w.to_vec());
        if let Some(x) = self.memo.get(&key) {
            return x.clone();
        }
        let mut acc = BigInt::zero();
        for (rest, c) in self.raise(u[0], w) {
            acc += BigInt::from(c) * self.form(&u[1..], &rest);
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    /// Dimension of the weight space `λ − Σ k_i α_i`.
    pub fn dim(&mut self, k: &[u32]) -> usize {
        let words = words_with_content(k);
        let m: Vec<Vec<BigRational>> = words
            .iter()
            .map(|u| words.iter().map(|w| BigRational::from_integer(self.form(u, w))).collect())
            .collect();
        rational_rank(m)
    }
}

/// All words containing letter `i` exactly `k[i]` times.
pub fn words_with_content(k: &[u32]) -> Vec<Vec<u8>> {
    let total: u32 = k.iter().sum();
    let mut out = Vec::new();
    let mut left = k.to_vec();
    let mut cur = Vec::new();
    fn rec(left: &mut Vec<u32>, cur: &mut Vec<u8>, total: u32, out: &mut Vec<Vec<u8>>) {
        if cur.len() as u32 == total {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                cur.push(i as u8);
                rec(left, cur, total, out);
                cur.pop();
                left[i] += 1;
            }
        }
    }
    rec(&mut left, &mut cur, total, &mut out);
    out
}

pub fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for k in r + 1..rows {
            if m[k][c].is_zero() {
                continue;
            }
            let f = &m[k][c] / &piv;
            for j in c..cols {
                let d = &f * &m[r][j];
                m[k][j] -= d;
            }
        }
        r += 1;
    }
    r
}

/// Compositions of `d` into `n` non-negative parts.
pub fn compositions(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .flat_map(|first| {
            compositions(n - 1, d - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Weyl dimension formula for `sl₃` with highest weight `(a, b)`.
pub fn a2_weyl_dimension(a: i64, b: i64) -> i64 {
    (a + 1) * (b + 1) * (a + b + 2) / 2
}
