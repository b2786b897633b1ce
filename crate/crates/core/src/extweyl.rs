//! Words in the extended Weyl group generators `w̃_i`, their action on the
//! root lattice, and the `w̃`-identities the presentation check relies on.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::cartan::GeneralizedCartanMatrix;
use crate::roots::{simple_reflection, Root};

/// A letter `w̃_node^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylLetter {
    pub node: usize,
    pub inverse: bool,
}

/// Freely reduced word in the `w̃_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ExtWeylWord {
    letters: Vec<WeylLetter>,
}

impl ExtWeylWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(node: usize) -> Self {
        Self { letters: vec![WeylLetter { node, inverse: false }] }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = WeylLetter>) -> Self {
        let mut w = Self::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Appends a letter on the right, cancelling against an inverse.
    pub fn push(&mut self, letter: WeylLetter) {
        match self.letters.last() {
            Some(last) if last.node == letter.node && last.inverse != letter.inverse => {
                self.letters.pop();
            }
            _ => self.letters.push(letter),
        }
    }

    pub fn letters(&self) -> &[WeylLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn then(&self, other: &ExtWeylWord) -> ExtWeylWord {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> ExtWeylWord {
        Self::from_letters(self.letters.iter().rev().map(|l| WeylLetter { node: l.node, inverse: !l.inverse }))
    }

    pub fn pow(&self, k: i32) -> ExtWeylWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::identity(), |acc, _| acc.then(&base))
    }
}

impl fmt::Display for ExtWeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "w{}", l.node + 1)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Serialized as signed 1-based node indices.
impl Serialize for ExtWeylWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<i64> = self
            .letters
            .iter()
            .map(|l| if l.inverse { -(l.node as i64 + 1) } else { l.node as i64 + 1 })
            .collect();
        v.serialize(s)
    }
}

/// Image of `root` under the Weyl element underlying `word`; the rightmost
/// letter acts first. Exponents are irrelevant on the lattice.
pub fn act_on_root_lattice(gcm: &GeneralizedCartanMatrix, word: &ExtWeylWord, root: &Root) -> Root {
    word.letters.iter().rev().fold(root.clone(), |r, l| simple_reflection(gcm, l.node, &r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum WeylSchema {
    /// `w̃_i⁴ = 1`
    FourthPower,
    /// `w̃_i w̃_j w̃_i⁻¹ w̃_j⁻¹ = 1`, non-adjacent
    Commute,
    /// `w̃_i w̃_j w̃_i = w̃_j w̃_i w̃_j`, adjacent
    Braid,
    /// `w̃_j w̃_i² w̃_j⁻¹ = w̃_i² w̃_j^{−2a_ij}`, adjacent
    SquareConjugation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeylRelation {
    pub schema: WeylSchema,
    pub nodes: Vec<usize>,
    pub lhs: ExtWeylWord,
    pub rhs: ExtWeylWord,
}

/// Every instance of the four schemas over the nodes and ordered node pairs
/// of the diagram.
pub fn kp_relation_schemas(gcm: &GeneralizedCartanMatrix) -> Vec<WeylRelation> {
    let n = gcm.rank();
    let w = ExtWeylWord::generator;
    let mut out = Vec::new();
    for i in 0..n {
        out.push(WeylRelation {
            schema: WeylSchema::FourthPower,
            nodes: vec![i],
            lhs: w(i).pow(4),
            rhs: ExtWeylWord::identity(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if !gcm.adjacent(i, j) {
                if i < j {
                    out.push(WeylRelation {
                        schema: WeylSchema::Commute,
                        nodes: vec![i, j],
                        lhs: w(i).then(&w(j)).then(&w(i).inverse()).then(&w(j).inverse()),
                        rhs: ExtWeylWord::identity(),
                    });
                }
                continue;
            }
            if i < j {
                out.push(WeylRelation {
                    schema: WeylSchema::Braid,
                    nodes: vec![i, j],
                    lhs: w(i).then(&w(j)).then(&w(i)),
                    rhs: w(j).then(&w(i)).then(&w(j)),
                });
            }
            let a_ij = gcm.entry(i, j);
            out.push(WeylRelation {
                schema: WeylSchema::SquareConjugation,
                nodes: vec![i, j],
                lhs: w(j).then(&w(i).pow(2)).then(&w(j).inverse()),
                rhs: w(i).pow(2).then(&w(j).pow((-2 * a_ij) as i32)),
            });
        }
    }
    out
}
