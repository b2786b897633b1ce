//! The Chevalley generators `χ_{±αᵢ}(t)`, `w̃_{αᵢ}(t)` and `h_{αᵢ}(t)` acting
//! on `V^λ_ℤ`, and evaluation of words in the generators `Xᵢ(t)`, `Sᵢ^{±1}`.
//!
//! A word is evaluated column by column on the basis vectors of the eager
//! truncation. Intermediate vectors may leave the truncation; the module
//! builds the spaces they land in on demand, up to an optional headroom.
//! A column whose computation would need a weight beyond the headroom is
//! marked inexact, and the window of a matrix ends just above its shallowest
//! inexact column.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Int, LinalgError};
use crate::weightmod::{BasisVector, ModVec, ModuleError, TruncatedModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("validity window reaches depth {valid_depth}, need at least {required}; rebuild deeper")]
    WindowEmpty { valid_depth: i64, required: i64 },
    #[error("scalar {0} is not a unit of ℤ")]
    NonUnitScalar(i64),
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

impl From<LinalgError> for GroupError {
    fn from(e: LinalgError) -> Self {
        GroupError::Module(ModuleError::Arithmetic(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GenKind {
    X,
    S,
}

/// `Xᵢ(t)` or `Sᵢ^{±1}`; `node` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeneratorSymbol {
    pub kind: GenKind,
    pub node: usize,
    pub exponent: i64,
}

impl GeneratorSymbol {
    pub fn x(node: usize, t: i64) -> Self {
        Self { kind: GenKind::X, node, exponent: t }
    }

    pub fn s(node: usize) -> Self {
        Self { kind: GenKind::S, node, exponent: 1 }
    }

    pub fn s_inv(node: usize) -> Self {
        Self { kind: GenKind::S, node, exponent: -1 }
    }

    pub fn inverse(self) -> Self {
        Self { exponent: -self.exponent, ..self }
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::X => write!(f, "X{}({})", self.node + 1, self.exponent),
            GenKind::S if self.exponent == 1 => write!(f, "S{}", self.node + 1),
            GenKind::S => write!(f, "S{}^{}", self.node + 1, self.exponent),
        }
    }
}

/// Product of generators, read left to right; the rightmost letter acts first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord(Vec<GeneratorSymbol>);

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_symbols(symbols: Vec<GeneratorSymbol>) -> Self {
        Self(symbols)
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn then(&self, other: &GroupWord) -> GroupWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> GroupWord {
        a.then(b).then(&a.inverse()).then(&b.inverse())
    }

    pub fn max_node(&self) -> Option<usize> {
        self.0.iter().map(|g| g.node).max()
    }
}

impl From<GeneratorSymbol> for GroupWord {
    fn from(g: GeneratorSymbol) -> Self {
        GroupWord(vec![g])
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `"X1(1) S2 S1^-1 X3(-2)"`. Nodes are 1-based; `Xn` alone means
/// `Xn(1)` and `Xn^k` means `Xn(k)`.
impl FromStr for GroupWord {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |tok: &str| GroupError::Parse(format!("bad token {tok:?}"));
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            let kind = match tok.chars().next() {
                Some('X' | 'x') => GenKind::X,
                Some('S' | 's') => GenKind::S,
                _ => return Err(bad(tok)),
            };
            let rest = &tok[1..];
            let digits = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            let node: usize = rest[..digits].parse().map_err(|_| bad(tok))?;
            if node == 0 {
                return Err(bad(tok));
            }
            let suffix = &rest[digits..];
            let exponent: i64 = if suffix.is_empty() {
                1
            } else if let Some(e) = suffix.strip_prefix('^') {
                e.parse().map_err(|_| bad(tok))?
            } else if let Some(inner) = suffix.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
                if kind == GenKind::S {
                    return Err(bad(tok));
                }
                inner.parse().map_err(|_| bad(tok))?
            } else {
                return Err(bad(tok));
            };
            if kind == GenKind::S && exponent.abs() != 1 {
                return Err(GroupError::NonUnitScalar(exponent));
            }
            out.push(GeneratorSymbol { kind, node: node - 1, exponent });
        }
        Ok(GroupWord(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Action {
    ChiPlus(usize, i64),
    ChiMinus(usize, i64),
    WTilde(usize, i64),
}

/// Images of the truncation's basis vectors under a group element.
#[derive(Debug, Clone)]
pub struct WindowedMatrix {
    built_depth: u32,
    columns: Vec<BasisVector>,
    /// `None` marks a column that could not be computed exactly.
    images: Vec<Option<ModVec>>,
    valid_depth: i64,
}

/// A column on which two matrices differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub column: BasisVector,
    pub left: Vec<(BasisVector, Int)>,
    pub right: Vec<(BasisVector, Int)>,
}

impl WindowedMatrix {
    fn new(built_depth: u32, columns: Vec<BasisVector>, images: Vec<Option<ModVec>>) -> Self {
        let valid_depth = columns
            .iter()
            .zip(&images)
            .filter(|(_, img)| img.is_none())
            .map(|(b, _)| i64::from(b.weight.depth()) - 1)
            .min()
            .unwrap_or(i64::from(built_depth));
        Self { built_depth, columns, images, valid_depth }
    }

    /// Largest depth up to which every column is exact; `-1` if none is.
    pub fn valid_depth(&self) -> i64 {
        self.valid_depth
    }

    pub fn built_depth(&self) -> u32 {
        self.built_depth
    }

    pub fn columns(&self) -> &[BasisVector] {
        &self.columns
    }

    pub fn image(&self, k: usize) -> Option<&ModVec> {
        self.images[k].as_ref()
    }

    fn window(&self) -> impl Iterator<Item = (&BasisVector, &ModVec)> {
        let d = self.valid_depth;
        self.columns
            .iter()
            .zip(&self.images)
            .filter(move |(b, _)| i64::from(b.weight.depth()) <= d)
            .map(|(b, img)| (b, img.as_ref().expect("window columns are exact")))
    }

    /// Compares two matrices on their common window, which must reach at
    /// least `min_window`. Returns the first differing column, if any.
    pub fn compare(&self, other: &WindowedMatrix, min_window: i64) -> Result<Option<Witness>, GroupError> {
        let d = self.valid_depth.min(other.valid_depth);
        if d < min_window {
            return Err(GroupError::WindowEmpty { valid_depth: d, required: min_window });
        }
        for ((b, x), (_, y)) in self.window().zip(other.window()) {
            if i64::from(b.weight.depth()) > d {
                break;
            }
            if x != y {
                return Ok(Some(Witness { column: b.clone(), left: x.terms().collect(), right: y.terms().collect() }));
            }
        }
        Ok(None)
    }

    /// True iff every column in the window maps to itself.
    pub fn is_identity_on_window(&self) -> bool {
        self.window().all(|(b, img)| {
            let mut t = img.terms();
            matches!((t.next(), t.next()), (Some((c, 1)), None) if &c == b)
        })
    }

    /// Diagonal entries on the window, in column order.
    pub fn diagonal(&self) -> Vec<Int> {
        self.window()
            .map(|(b, img)| img.component(&b.weight).map_or(0, |c| c[b.index]))
            .collect()
    }

    /// True iff every column in the window is a multiple of itself.
    pub fn is_diagonal_on_window(&self) -> bool {
        self.window().all(|(b, img)| img.terms().all(|(c, _)| &c == b))
    }
}

/// The representation `ρ_λ` on a truncated module, with per-vector caches.
pub struct Representation<'m> {
    module: &'m TruncatedModule,
    headroom: Option<u32>,
    cache: RwLock<HashMap<(Action, BasisVector), Option<Arc<ModVec>>>>,
}

impl fmt::Debug for Representation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation").field("module", self.module).field("headroom", &self.headroom).finish()
    }
}

impl<'m> Representation<'m> {
    /// Intermediate vectors may reach any depth.
    pub fn new(module: &'m TruncatedModule) -> Self {
        Self { module, headroom: None, cache: RwLock::new(HashMap::new()) }
    }

    /// Intermediate vectors may reach at most `headroom` below the truncation.
    pub fn with_headroom(module: &'m TruncatedModule, headroom: u32) -> Self {
        Self { module, headroom: Some(headroom), cache: RwLock::new(HashMap::new()) }
    }

    pub fn module(&self) -> &'m TruncatedModule {
        self.module
    }

    fn check_node(&self, node: usize) -> Result<(), GroupError> {
        let rank = self.module.rank();
        if node >= rank {
            return Err(GroupError::NodeOutOfRange { node, rank });
        }
        Ok(())
    }

    fn depth_allowed(&self, depth: u32) -> bool {
        self.headroom.is_none_or(|h| depth <= self.module.depth() + h)
    }

    fn basis_image(&self, action: Action, b: &BasisVector) -> Result<Option<Arc<ModVec>>, GroupError> {
        let key = (action, b.clone());
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let unit = ModVec::unit(b, self.module.rank_of(&b.weight)?);
        let img = match action {
            Action::ChiPlus(i, t) => {
                let mut acc = unit.clone();
                for m in 1..=b.weight.depths()[i] {
                    let term = self.module.apply_e(i, m, &unit)?;
                    acc.add_vec(&term, power(t, m)?)?;
                }
                Some(acc)
            }
            Action::ChiMinus(i, t) => {
                let q = self.module.space(&b.weight)?.string_down(i);
                if q > 0 && !self.depth_allowed(b.weight.depth() + q as u32) {
                    None
                } else {
                    let mut acc = unit.clone();
                    for m in 1..=q.max(0) as u32 {
                        let term = self.module.apply_f(i, m, &unit)?;
                        acc.add_vec(&term, power(t, m)?)?;
                    }
                    Some(acc)
                }
            }
            Action::WTilde(i, t) => {
                let steps = [Action::ChiPlus(i, t), Action::ChiMinus(i, -t), Action::ChiPlus(i, t)];
                let mut v = Some(unit);
                for a in steps.iter().rev() {
                    v = match v {
                        Some(v) => self.apply(*a, &v)?,
                        None => None,
                    };
                }
                v
            }
        };
        let img = img.map(Arc::new);
        self.cache.write().unwrap().insert(key, img.clone());
        Ok(img)
    }

    fn apply(&self, action: Action, v: &ModVec) -> Result<Option<ModVec>, GroupError> {
        let mut out = ModVec::zero();
        for (b, c) in v.terms() {
            match self.basis_image(action, &b)? {
                Some(img) => out.add_vec(&img, c)?,
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    fn symbol_action(&self, g: GeneratorSymbol) -> Result<Action, GroupError> {
        self.check_node(g.node)?;
        match g.kind {
            GenKind::X => Ok(Action::ChiPlus(g.node, g.exponent)),
            GenKind::S if g.exponent.abs() == 1 => Ok(Action::WTilde(g.node, g.exponent)),
            GenKind::S => Err(GroupError::NonUnitScalar(g.exponent)),
        }
    }

    /// Applies a word to a vector; `None` if the result is not exact.
    pub fn apply_word(&self, word: &GroupWord, v: &ModVec) -> Result<Option<ModVec>, GroupError> {
        let actions = word.symbols().iter().map(|&g| self.symbol_action(g)).collect::<Result<Vec<_>, _>>()?;
        self.apply_actions(&actions, v)
    }

    fn apply_actions(&self, actions: &[Action], v: &ModVec) -> Result<Option<ModVec>, GroupError> {
        let mut v = v.clone();
        for &a in actions.iter().rev() {
            match self.apply(a, &v)? {
                Some(w) => v = w,
                None => return Ok(None),
            }
        }
        Ok(Some(v))
    }

    fn matrix_of(&self, actions: &[Action]) -> Result<WindowedMatrix, GroupError> {
        let columns = self.module.basis();
        let images = columns
            .par_iter()
            .map(|b| {
                let unit = ModVec::unit(b, self.module.rank_of(&b.weight)?);
                self.apply_actions(actions, &unit)
            })
            .collect::<Result<Vec<_>, GroupError>>()?;
        Ok(WindowedMatrix::new(self.module.depth(), columns, images))
    }

    /// `χ_{αᵢ}(t) = Σ_m t^m eᵢ^{(m)}`
    pub fn chi_plus(&self, i: usize, t: i64) -> Result<WindowedMatrix, GroupError> {
        self.check_node(i)?;
        self.matrix_of(&[Action::ChiPlus(i, t)])
    }

    /// `χ_{−αᵢ}(t) = Σ_m t^m fᵢ^{(m)}`
    pub fn chi_minus(&self, i: usize, t: i64) -> Result<WindowedMatrix, GroupError> {
        self.check_node(i)?;
        self.matrix_of(&[Action::ChiMinus(i, t)])
    }

    /// `w̃_{αᵢ}(t) = χ_{αᵢ}(t) χ_{−αᵢ}(−t⁻¹) χ_{αᵢ}(t)` for `t = ±1`.
    pub fn w_tilde(&self, i: usize, t: i64) -> Result<WindowedMatrix, GroupError> {
        self.check_node(i)?;
        if t.abs() != 1 {
            return Err(GroupError::NonUnitScalar(t));
        }
        self.matrix_of(&[Action::WTilde(i, t)])
    }

    /// `h_{αᵢ}(t) = w̃_{αᵢ}(t) w̃_{αᵢ}(1)⁻¹` for `t = ±1`.
    pub fn h_element(&self, i: usize, t: i64) -> Result<WindowedMatrix, GroupError> {
        self.check_node(i)?;
        if t.abs() != 1 {
            return Err(GroupError::NonUnitScalar(t));
        }
        // w̃(1)⁻¹ = χ(−1) χ₋(1) χ(−1) = w̃(−1)
        self.matrix_of(&[Action::WTilde(i, t), Action::WTilde(i, -1)])
    }

    pub fn evaluate_word(&self, word: &GroupWord) -> Result<WindowedMatrix, GroupError> {
        let actions = word.symbols().iter().map(|&g| self.symbol_action(g)).collect::<Result<Vec<_>, _>>()?;
        self.matrix_of(&actions)
    }
}

fn power(t: i64, m: u32) -> Result<Int, LinalgError> {
    let mut acc: Int = 1;
    for _ in 0..m {
        acc = linalg::checked_mul(acc, Int::from(t))?;
    }
    Ok(acc)
}
