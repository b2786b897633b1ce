//! Small dense integer matrices and the exact routines the rest of the crate
//! needs: fraction-free determinants and ranks, and row-style Hermite normal
//! form with coordinate solving.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Int = i128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("vector is not in the row lattice")]
    NotInLattice,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self { rows: rows.len(), cols: ncols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Int {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let n = other.cols;
        for r in 0..self.rows {
            let dst = &mut out.data[r * n..(r + 1) * n];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    if b != 0 {
                        *d = checked_add(*d, checked_mul(a, b)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[Int]) -> Result<Vec<Int>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = vec![0; self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc: Int = 0;
            for (c, &x) in v.iter().enumerate() {
                if x != 0 {
                    acc = checked_add(acc, checked_mul(self.get(r, c), x)?)?;
                }
            }
            *slot = acc;
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch { expected: self.data.len(), got: other.data.len() });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| checked_add(a, b)).collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch { expected: self.data.len(), got: other.data.len() });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a.checked_sub(b).ok_or(LinalgError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: Int) -> Result<IntMatrix, LinalgError> {
        let data = self.data.iter().map(|&a| checked_mul(a, k)).collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Exact entrywise division; `None` if some entry is not divisible.
    pub fn div_exact(&self, k: Int) -> Option<IntMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for &a in &self.data {
            if a % k != 0 {
                return None;
            }
            data.push(a / k);
        }
        Some(Self { rows: self.rows, cols: self.cols, data })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

#[inline]
pub fn checked_mul(a: Int, b: Int) -> Result<Int, LinalgError> {
    a.checked_mul(b).ok_or(LinalgError::Overflow)
}

#[inline]
pub fn checked_add(a: Int, b: Int) -> Result<Int, LinalgError> {
    a.checked_add(b).ok_or(LinalgError::Overflow)
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<Int, LinalgError> {
    assert_eq!(m.rows(), m.cols(), "determinant of non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Ok(1);
    }
    let mut a = m.clone();
    let mut sign: Int = 1;
    let mut prev: Int = 1;
    for k in 0..n - 1 {
        if a.get(k, k) == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a.get(r, k) != 0) else {
                return Ok(0);
            };
            swap_rows(&mut a, k, swap);
            sign = -sign;
        }
        let pivot = a.get(k, k);
        for i in k + 1..n {
            for j in k + 1..n {
                let v = checked_mul(a.get(i, j), pivot)?
                    .checked_sub(checked_mul(a.get(i, k), a.get(k, j))?)
                    .ok_or(LinalgError::Overflow)?;
                a.set(i, j, v / prev);
            }
        }
        prev = pivot;
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// Rank over ℚ via fraction-free elimination.
pub fn rank(m: &IntMatrix) -> Result<usize, LinalgError> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    let mut prev: Int = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a.get(i, c) != 0) else {
            continue;
        };
        swap_rows(&mut a, r, p);
        let pivot = a.get(r, c);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = checked_mul(a.get(i, j), pivot)?
                    .checked_sub(checked_mul(a.get(i, c), a.get(r, j))?)
                    .ok_or(LinalgError::Overflow)?;
                a.set(i, j, v / prev);
            }
            a.set(i, c, 0);
        }
        prev = pivot;
        r += 1;
    }
    Ok(r)
}

fn swap_rows(a: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols {
        a.data.swap(i * a.cols + c, j * a.cols + c);
    }
}

/// Basis of a sublattice of ℤⁿ in row Hermite normal form: pivots strictly
/// increase down the rows, pivots are positive, and entries above a pivot lie
/// in `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteBasis {
    width: usize,
    rows: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}

impl HermiteBasis {
    /// Hermite normal form of the lattice spanned by `generators`.
    ///
    /// Generators are inserted one at a time into a fully reduced basis held
    /// in arbitrary precision, since intermediate entries can grow far beyond
    /// those of the final form.
    pub fn from_generators(width: usize, generators: &[Vec<Int>]) -> Result<Self, LinalgError> {
        let mut big = BigHermite { rows: Vec::new(), pivots: Vec::new() };
        for g in generators {
            if g.len() != width {
                return Err(LinalgError::DimensionMismatch { expected: width, got: g.len() });
            }
            if g.iter().all(|&x| x == 0) {
                continue;
            }
            big.insert(g.iter().map(|&x| BigInt::from(x)).collect());
        }
        let rows = big
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128().ok_or(LinalgError::Overflow)).collect())
            .collect::<Result<Vec<Vec<Int>>, _>>()?;
        Ok(Self { width, rows, pivots: big.pivots })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    /// Integer coordinates `c` with `v = Σ c_k · row_k`.
    pub fn coordinates(&self, v: &[Int]) -> Result<Vec<Int>, LinalgError> {
        if v.len() != self.width {
            return Err(LinalgError::DimensionMismatch { expected: self.width, got: v.len() });
        }
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            // Everything left of the pivot must already be cleared.
            let x = residual[p];
            if x % row[p] != 0 {
                return Err(LinalgError::NotInLattice);
            }
            let c = x / row[p];
            if c != 0 {
                axpy(&mut residual, row, -c)?;
            }
            coords.push(c);
        }
        if residual.iter().any(|&x| x != 0) {
            return Err(LinalgError::NotInLattice);
        }
        Ok(coords)
    }
}

struct BigHermite {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl BigHermite {
    fn insert(&mut self, mut v: Vec<BigInt>) {
        let mut k = 0;
        loop {
            let Some(c) = v.iter().position(|x| !x.is_zero()) else { break };
            while k < self.rows.len() && self.pivots[k] < c {
                k += 1;
            }
            if k == self.rows.len() || self.pivots[k] > c {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                self.rows.insert(k, v);
                self.pivots.insert(k, c);
                break;
            }
            let row = &mut self.rows[k];
            if (&v[c] % &row[c]).is_zero() {
                let q = &v[c] / &row[c];
                for (x, r) in v.iter_mut().zip(row.iter()) {
                    *x -= &q * r;
                }
                continue;
            }
            // Unimodular step on (row_k, v) leaving the gcd in row_k and 0 in v.
            let e = row[c].extended_gcd(&v[c]);
            let (a_g, b_g) = (&row[c] / &e.gcd, &v[c] / &e.gcd);
            for (r, x) in row.iter_mut().zip(v.iter_mut()) {
                let new_r = &e.x * &*r + &e.y * &*x;
                let new_x = &a_g * &*x - &b_g * &*r;
                *r = new_r;
                *x = new_x;
            }
            if row[c].is_negative() {
                row.iter_mut().for_each(|x| *x = -&*x);
            }
        }
        self.reduce();
    }

    /// Brings entries above each pivot into `[0, pivot)`.
    fn reduce(&mut self) {
        for k in 0..self.rows.len() {
            let p = self.pivots[k];
            for upper in 0..k {
                let q = self.rows[upper][p].div_floor(&self.rows[k][p]);
                if !q.is_zero() {
                    let (src, dst) = split_pair(&mut self.rows, k, upper);
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d -= &q * s;
                    }
                }
            }
        }
    }
}

/// A lattice basis with small entries, with fast exact coordinates.
///
/// The basis is taken from the generators themselves when some of them form
/// a ℤ-basis (every generator then has integer coordinates, which is checked
/// exactly); otherwise it is the LLL reduction of the Hermite form.
/// Coordinates come from a floating-point solve on the pivot columns that is
/// verified exactly, with an exact rational solve as fallback.
#[derive(Debug)]
pub struct LatticeBasis {
    rows: Vec<Vec<Int>>,
    rows64: Vec<Vec<i64>>,
    max_entry: u128,
    pivots: Vec<usize>,
    lu: OnceLock<Option<Lu>>,
    exact: OnceLock<Vec<Vec<BigRational>>>,
}

impl LatticeBasis {
    /// A basis of the lattice spanned by `generators`; earlier generators are
    /// preferred as basis vectors.
    pub fn from_generators(width: usize, generators: &[Vec<Int>]) -> Result<Self, LinalgError> {
        Ok(Self::with_coordinates(width, generators)?.0)
    }

    /// As [`LatticeBasis::from_generators`], also returning the coordinates
    /// of every generator.
    pub fn with_coordinates(width: usize, generators: &[Vec<Int>]) -> Result<(Self, Vec<Vec<Int>>), LinalgError> {
        for g in generators {
            if g.len() != width {
                return Err(LinalgError::DimensionMismatch { expected: width, got: g.len() });
            }
        }
        let (chosen, pivots, lifted) = independent_mod_p(generators);
        let candidate = Self::with_rows(chosen.iter().map(|&k| generators[k].clone()).collect(), pivots);
        let exact = generators.iter().zip(&lifted).all(|(g, c)| candidate.combine(c).is_ok_and(|x| &x == g));
        if exact {
            return Ok((candidate, lifted));
        }
        if let Ok(coords) = generators.iter().map(|g| candidate.coordinates(g)).collect::<Result<Vec<_>, _>>() {
            return Ok((candidate, coords));
        }
        let mut big = BigHermite { rows: Vec::new(), pivots: Vec::new() };
        for g in generators.iter().filter(|g| g.iter().any(|&x| x != 0)) {
            big.insert(g.iter().map(|&x| BigInt::from(x)).collect());
        }
        let pivots = big.pivots;
        let mut rows = big.rows;
        lll_reduce(&mut rows);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128().ok_or(LinalgError::Overflow)).collect())
            .collect::<Result<Vec<Vec<Int>>, _>>()?;
        let basis = Self::with_rows(rows, pivots);
        let coords = generators.iter().map(|g| basis.coordinates(g)).collect::<Result<Vec<_>, _>>()?;
        Ok((basis, coords))
    }

    /// `rows` must be independent and `pivots` columns on which they stay so.
    fn with_rows(rows: Vec<Vec<Int>>, pivots: Vec<usize>) -> Self {
        let max_entry = rows.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        let rows64 = if max_entry < 1 << 62 {
            rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
        } else {
            Vec::new()
        };
        Self { lu: OnceLock::new(), rows, rows64, max_entry, pivots, exact: OnceLock::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    fn combine(&self, c: &[Int]) -> Result<Vec<Int>, LinalgError> {
        let width = self.rows.first().map_or(0, Vec::len);
        let c_max = c.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        let bound = c_max
            .checked_mul(self.max_entry)
            .and_then(|x| x.checked_mul(self.rows.len() as u128 + 1));
        if bound.is_some_and(|b| b < 1 << 62) {
            let mut out = vec![0i64; width];
            for (&x, row) in c.iter().zip(&self.rows64) {
                if x != 0 {
                    let x = x as i64;
                    for (o, &r) in out.iter_mut().zip(row) {
                        *o += x * r;
                    }
                }
            }
            return Ok(out.into_iter().map(Int::from).collect());
        }
        let mut out = vec![0; width];
        for (&x, row) in c.iter().zip(&self.rows) {
            if x != 0 {
                axpy(&mut out, row, x)?;
            }
        }
        Ok(out)
    }

    /// Inverse of the pivot-column square block, over ℚ.
    fn exact_inverse(&self) -> &Vec<Vec<BigRational>> {
        self.exact.get_or_init(|| {
            let n = self.rows.len();
            let mut a: Vec<Vec<BigRational>> = (0..n)
                .map(|i| {
                    let mut row: Vec<BigRational> =
                        self.pivots.iter().map(|&p| BigRational::from_integer(self.rows[i][p].into())).collect();
                    row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from(u8::from(i == j)))));
                    row
                })
                .collect();
            for c in 0..n {
                let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("pivot block is invertible");
                a.swap(c, p);
                let inv = a[c][c].recip();
                a[c].iter_mut().for_each(|x| *x *= &inv);
                for r in 0..n {
                    if r != c && !a[r][c].is_zero() {
                        let f = a[r][c].clone();
                        for t in 0..2 * n {
                            let d = &f * &a[c][t];
                            a[r][t] -= d;
                        }
                    }
                }
            }
            a.into_iter().map(|row| row[n..].to_vec()).collect()
        })
    }

    /// Integer coordinates `c` with `v = Σ c_k · row_k`.
    pub fn coordinates(&self, v: &[Int]) -> Result<Vec<Int>, LinalgError> {
        if self.rows.is_empty() {
            return if v.iter().all(|&x| x == 0) { Ok(Vec::new()) } else { Err(LinalgError::NotInLattice) };
        }
        if v.len() != self.rows[0].len() {
            return Err(LinalgError::DimensionMismatch { expected: self.rows[0].len(), got: v.len() });
        }
        let lu = self.lu.get_or_init(|| {
            let n = self.rows.len();
            Lu::factor((0..n).map(|j| self.rows.iter().map(|r| r[self.pivots[j]] as f64).collect()).collect())
        });
        if let Some(lu) = lu {
            let rhs: Vec<f64> = self.pivots.iter().map(|&p| v[p] as f64).collect();
            let guess: Vec<Int> = lu.solve(rhs).iter().map(|x| x.round() as Int).collect();
            if self.combine(&guess).ok().as_deref() == Some(v) {
                return Ok(guess);
            }
        }
        // v_P = c · Q, so c = v_P · Q⁻¹ (row `i` of Q is basis row `i` on the pivots)
        let inv = self.exact_inverse();
        let n = self.rows.len();
        let mut coords = Vec::with_capacity(n);
        for j in 0..n {
            let x: BigRational =
                self.pivots.iter().enumerate().map(|(i, &p)| BigRational::from_integer(v[p].into()) * &inv[i][j]).sum();
            if !x.is_integer() {
                return Err(LinalgError::NotInLattice);
            }
            coords.push(x.to_integer().to_i128().ok_or(LinalgError::Overflow)?);
        }
        if self.combine(&coords)? != v {
            return Err(LinalgError::NotInLattice);
        }
        Ok(coords)
    }
}


const PRIME: u64 = 2_147_483_647;

fn mod_p(x: Int) -> u64 {
    x.rem_euclid(PRIME as Int) as u64
}

fn mul_p(a: u64, b: u64) -> u64 {
    a * b % PRIME
}

fn inv_p(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, PRIME - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_p(acc, base);
        }
        base = mul_p(base, base);
        e >>= 1;
    }
    acc
}

/// Greedy maximal subset of rows independent modulo a large prime, with the
/// pivot columns of its echelon form and, for every row, its coordinates in
/// the chosen rows lifted to the symmetric range.
fn independent_mod_p(rows: &[Vec<Int>]) -> (Vec<usize>, Vec<usize>, Vec<Vec<Int>>) {
    // Echelon rows with their expressions in the chosen rows.
    let mut echelon: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    let mut expressions: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
    for (k, r) in rows.iter().enumerate() {
        let mut v: Vec<u64> = r.iter().map(|&x| mod_p(x)).collect();
        // rows[k] ≡ Σ t_j · chosen_j + v
        let mut t = vec![0u64; chosen.len() + 1];
        for (p, e, te) in &echelon {
            let f = v[*p];
            if f != 0 {
                let g = PRIME - f;
                // echelon rows vanish left of their pivot
                for (x, y) in v[*p..].iter_mut().zip(&e[*p..]) {
                    *x = (*x + g * *y) % PRIME;
                }
                for (x, y) in t.iter_mut().zip(te) {
                    *x = (*x + f * *y) % PRIME;
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            // e = inv · (rows[k] − Σ t_j chosen_j)
            let inv = inv_p(v[p]);
            v.iter_mut().for_each(|x| *x = mul_p(*x, inv));
            let mut te: Vec<u64> = t.iter().map(|&x| mul_p(PRIME - x, inv) % PRIME).collect();
            te[chosen.len()] = inv;
            echelon.push((p, v, te));
            chosen.push(k);
            let mut unit = vec![0u64; chosen.len()];
            unit[chosen.len() - 1] = 1;
            expressions.push(unit);
        } else {
            t.truncate(chosen.len());
            expressions.push(t);
        }
    }
    let r = chosen.len();
    let lift = |x: u64| if x > PRIME / 2 { x as Int - PRIME as Int } else { x as Int };
    let coords = expressions
        .into_iter()
        .map(|mut t| {
            t.resize(r, 0);
            t.into_iter().map(lift).collect()
        })
        .collect();
    let mut pivots: Vec<usize> = echelon.iter().map(|(p, _, _)| *p).collect();
    pivots.sort_unstable();
    (chosen, pivots, coords)
}

/// Partial-pivoting LU of a square matrix, for `x` with `A x = b`.
#[derive(Debug, Clone)]
struct Lu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<Vec<f64>>) -> Option<Self> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
            if a[p][c] == 0.0 {
                return None;
            }
            a.swap(c, p);
            perm.swap(c, p);
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                a[r][c] = f;
                for t in c + 1..n {
                    a[r][t] -= f * a[c][t];
                }
            }
        }
        Some(Self { lu: a, perm })
    }

    fn solve(&self, b: Vec<f64>) -> Vec<f64> {
        let n = self.lu.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            for t in 0..r {
                y[r] -= self.lu[r][t] * y[t];
            }
        }
        for r in (0..n).rev() {
            for t in r + 1..n {
                y[r] -= self.lu[r][t] * y[t];
            }
            y[r] /= self.lu[r][r];
        }
        y
    }
}

/// LLL reduction (δ = 0.99) with floating-point Gram–Schmidt and exact row
/// operations. Lost precision only weakens the reduction; the rows always
/// stay a basis of the same lattice.
pub fn lll_reduce(b: &mut [Vec<BigInt>]) {
    let n = b.len();
    if n <= 1 {
        return;
    }
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, c)| a * c).sum::<f64>();
    let as_f = |v: &[BigInt]| v.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect::<Vec<f64>>();
    let mut bf: Vec<Vec<f64>> = b.iter().map(|r| as_f(r)).collect();
    let mut bstar: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut bn = vec![0.0; n];
    let mut mu = vec![vec![0.0; n]; n];
    let gso_row = |k: usize, bf: &[Vec<f64>], bstar: &mut [Vec<f64>], bn: &mut [f64], mu: &mut [Vec<f64>]| {
        let mut v = bf[k].clone();
        for j in 0..k {
            let m = if bn[j] > 0.0 { dot(&bf[k], &bstar[j]) / bn[j] } else { 0.0 };
            mu[k][j] = m;
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= m * y;
            }
        }
        bn[k] = dot(&v, &v);
        bstar[k] = v;
    };
    gso_row(0, &bf, &mut bstar, &mut bn, &mut mu);
    let mut k = 1;
    let mut steps = 0usize;
    let limit = 200 * n * n + 10_000;
    while k < n && steps < limit {
        steps += 1;
        // Size-reduce row k, repeating while floating error leaves large μ.
        for _ in 0..8 {
            gso_row(k, &bf, &mut bstar, &mut bn, &mut mu);
            if (0..k).all(|j| mu[k][j].abs() <= 0.51) {
                break;
            }
            for j in (0..k).rev() {
                let q = mu[k][j].round();
                if q == 0.0 || !q.is_finite() {
                    continue;
                }
                let qi = BigInt::from_f64(q).expect("finite");
                let (src, dst) = split_pair(b, j, k);
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &qi * s;
                }
                for t in 0..j {
                    mu[k][t] -= q * mu[j][t];
                }
                mu[k][j] -= q;
            }
            bf[k] = as_f(&b[k]);
        }
        gso_row(k, &bf, &mut bstar, &mut bn, &mut mu);
        if bn[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1] {
            b.swap(k, k - 1);
            bf.swap(k, k - 1);
            k = k.max(2) - 1;
            gso_row(k - 1, &bf, &mut bstar, &mut bn, &mut mu);
        } else {
            k += 1;
        }
    }
}

fn split_pair<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn axpy(dst: &mut [Int], src: &[Int], k: Int) -> Result<(), LinalgError> {
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = checked_add(*d, checked_mul(s, k)?)?;
        }
    }
    Ok(())
}
