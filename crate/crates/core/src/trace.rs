//! Move traces: replayable certificates for reductions, and the `.trc` format.

use std::fmt;

use crate::complex::{Simplex, VertexId};
use crate::error::{Error, Result};

/// `dominated` lies only in facets that also contain `dominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DominationWitness {
    pub dominated: VertexId,
    pub dominator: VertexId,
}

/// Which side of a beat point is trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Covered by exactly one element (the strict up-set has a minimum).
    Up,
    /// Covers exactly one element (the strict down-set has a maximum).
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    StrongDelete(DominationWitness),
    FreeFaceCollapse { face: Simplex, coface: Simplex },
    /// Deletes `vertex`, whose link is a cone (`level == 0`) or is
    /// `(level - 1)`-collapsible.
    NeDelete { vertex: VertexId, level: u32 },
    BeatRemove { element: u32, direction: Direction },
    WeakRemove { element: u32 },
}

impl Move {
    pub fn strong_delete(dominated: VertexId, dominator: VertexId) -> Self {
        Move::StrongDelete(DominationWitness { dominated, dominator })
    }
}

/// An ordered list of elementary moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MoveTrace {
    moves: Vec<Move>,
}

impl MoveTrace {
    pub fn new() -> Self {
        MoveTrace::default()
    }

    pub fn push(&mut self, m: Move) {
        self.moves.push(m);
    }

    pub fn extend(&mut self, other: MoveTrace) {
        self.moves.extend(other.moves);
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Move> {
        self.moves.iter()
    }

    /// Renders the trace as `.trc` text, naming vertices and elements with `name`.
    pub fn to_trc(&self, name: impl Fn(u32) -> String) -> String {
        let names = |s: &Simplex| s.vertices().iter().map(|&v| name(v)).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        for m in &self.moves {
            let line = match m {
                Move::StrongDelete(w) => format!("SD {} by {}", name(w.dominated), name(w.dominator)),
                Move::FreeFaceCollapse { face, coface } => format!("CC {} | {}", names(face), names(coface)),
                Move::NeDelete { vertex, level } => format!("NE {} level {}", name(*vertex), level),
                Move::BeatRemove { element, direction } => {
                    let d = if *direction == Direction::Up { "up" } else { "down" };
                    format!("BR {} {}", name(*element), d)
                }
                Move::WeakRemove { element } => format!("WR {}", name(*element)),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Parses `.trc` text; `resolve` maps tokens to ids. Blank lines and
    /// `#` comments are skipped.
    pub fn parse_trc(text: &str, resolve: impl Fn(&str) -> Option<u32>) -> Result<MoveTrace> {
        let mut trace = MoveTrace::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let id = |t: &str| resolve(t).ok_or_else(|| err(format!("unknown token `{t}`")));
            let simplex = |ts: &[&str]| -> Result<Simplex> {
                let ids = ts.iter().map(|t| id(t)).collect::<Result<Vec<_>>>()?;
                Simplex::new(ids).map_err(|e| err(e.to_string()))
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let m = match tokens.as_slice() {
                ["SD", v, "by", w] => Move::strong_delete(id(v)?, id(w)?),
                ["CC", rest @ ..] => {
                    let bar = rest.iter().position(|&t| t == "|").ok_or_else(|| err("missing `|`".into()))?;
                    Move::FreeFaceCollapse { face: simplex(&rest[..bar])?, coface: simplex(&rest[bar + 1..])? }
                }
                ["NE", v, "level", k] => Move::NeDelete {
                    vertex: id(v)?,
                    level: k.parse().map_err(|_| err(format!("bad level `{k}`")))?,
                },
                ["BR", x, d] => {
                    let direction = match *d {
                        "up" => Direction::Up,
                        "down" => Direction::Down,
                        _ => return Err(err(format!("bad direction `{d}`"))),
                    };
                    Move::BeatRemove { element: id(x)?, direction }
                }
                ["WR", x] => Move::WeakRemove { element: id(x)? },
                _ => return Err(err(format!("unrecognized move `{line}`"))),
            };
            trace.push(m);
        }
        Ok(trace)
    }
}

impl<'a> IntoIterator for &'a MoveTrace {
    type Item = &'a Move;
    type IntoIter = std::slice::Iter<'a, Move>;

    fn into_iter(self) -> Self::IntoIter {
        self.moves.iter()
    }
}

impl FromIterator<Move> for MoveTrace {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        MoveTrace { moves: iter.into_iter().collect() }
    }
}

impl fmt::Display for MoveTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_trc(|v| v.to_string()))
    }
}
