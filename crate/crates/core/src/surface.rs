//! Combinatorial model of a closed orientable surface with embedded curves.
//!
//! A genus-`g` surface is the `4g`-gon with boundary word
//! `x1 y1 x1^-1 y1^-1 ... xg yg xg^-1 yg^-1`, read counterclockwise. All
//! polygon vertices are identified to a single point, so the edges form a
//! wedge of `2g` loops. Side `4(i-1)` is the positive occurrence of `x_i`,
//! side `4(i-1)+1` the positive occurrence of `y_i`, sides `4(i-1)+2` and
//! `4(i-1)+3` the negative occurrences of `x_i` and `y_i`.
//!
//! A curve transverse to the edges is recorded as the cyclic sequence of its
//! edge crossings. Each crossing carries a sign and a slot:
//!
//! * a `+` crossing leaves the polygon through the positive occurrence of its
//!   edge and re-enters through the negative occurrence; a `-` crossing does
//!   the opposite;
//! * slots order the crossings along an edge in the direction of the edge.
//!   Along a positive occurrence that order follows the counterclockwise
//!   boundary; along a negative occurrence it is reversed.
//!
//! Inside the polygon a curve is the union of its chords: chord `k` runs from
//! the re-entry point of crossing `k` to the exit point of crossing `k+1`.
//! Two chords cross iff their endpoints alternate around the boundary circle,
//! which makes embeddedness and intersection counts exact.
//!
//! Homology coordinates use the basis `([x1],[y1],...,[xg],[yg])` of the edge
//! loops. A crossing of `x_i` with sign `s` contributes `s` to the `[y_i]`
//! coordinate and a crossing of `y_i` with sign `s` contributes `-s` to the
//! `[x_i]` coordinate. With these conventions the signed chord crossing count
//! of two curves equals `sum_i (u_xi v_yi - u_yi v_xi)` on their classes.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("edge {edge} does not exist on a genus-{genus} surface")]
    UnknownEdge { edge: Edge, genus: usize },
    #[error("slot {slot} is used twice on edge {edge}")]
    DuplicateSlot { edge: Edge, slot: i64 },
    #[error("a genus-0 surface carries no curves")]
    CurveOnSphere,
    #[error("a curve needs at least one crossing")]
    EmptyCurve,
    #[error("homology classes have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid crossing token `{0}`")]
    BadToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    X,
    Y,
}

/// One of the `2g` edge loops `x_i`, `y_i` (handle numbers start at 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub handle: usize,
}

impl Edge {
    pub fn x(handle: usize) -> Self {
        Edge {
            kind: EdgeKind::X,
            handle,
        }
    }

    pub fn y(handle: usize) -> Self {
        Edge {
            kind: EdgeKind::Y,
            handle,
        }
    }

    /// Position of the edge in the ordering `x1, y1, x2, y2, ...`; also the
    /// index of its dual generator.
    pub fn index(self) -> usize {
        2 * (self.handle - 1)
            + match self.kind {
                EdgeKind::X => 0,
                EdgeKind::Y => 1,
            }
    }

    pub fn from_index(index: usize) -> Self {
        let handle = index / 2 + 1;
        if index.is_multiple_of(2) {
            Edge::x(handle)
        } else {
            Edge::y(handle)
        }
    }

    /// Zero-based polygon side carrying the positive (`true`) or negative
    /// occurrence.
    pub fn side(self, positive: bool) -> usize {
        let base = 4 * (self.handle - 1);
        match (self.kind, positive) {
            (EdgeKind::X, true) => base,
            (EdgeKind::Y, true) => base + 1,
            (EdgeKind::X, false) => base + 2,
            (EdgeKind::Y, false) => base + 3,
        }
    }

    fn shifted(self, handles: usize) -> Self {
        Edge {
            kind: self.kind,
            handle: self.handle + handles,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            EdgeKind::X => 'x',
            EdgeKind::Y => 'y',
        };
        write!(f, "{c}{}", self.handle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn is_pos(self) -> bool {
        self == Sign::Pos
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossingToken {
    pub edge: Edge,
    pub sign: Sign,
    pub slot: i64,
}

impl CrossingToken {
    pub fn new(edge: Edge, sign: Sign, slot: i64) -> Self {
        CrossingToken { edge, sign, slot }
    }

    /// Boundary point where the curve leaves the polygon at this crossing.
    pub fn exit_point(&self) -> BoundaryPoint {
        BoundaryPoint::on(self.edge, self.sign.is_pos(), self.slot)
    }

    /// Boundary point where the curve comes back into the polygon.
    pub fn reentry_point(&self) -> BoundaryPoint {
        BoundaryPoint::on(self.edge, !self.sign.is_pos(), self.slot)
    }

    pub fn reversed(&self) -> Self {
        CrossingToken {
            sign: self.sign.flip(),
            ..*self
        }
    }
}

impl fmt::Display for CrossingToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign.is_pos() { '+' } else { '-' };
        write!(f, "{}{}{}", self.edge, s, self.slot)
    }
}

impl FromStr for CrossingToken {
    type Err = SurfaceError;

    /// Parses `x1+0`, `y12-3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SurfaceError::BadToken(s.to_string());
        let mut chars = s.char_indices();
        let kind = match chars.next() {
            Some((_, 'x')) => EdgeKind::X,
            Some((_, 'y')) => EdgeKind::Y,
            _ => return Err(bad()),
        };
        let sign_at = s.find(['+', '-']).ok_or_else(bad)?;
        let handle: usize = s[1..sign_at].parse().map_err(|_| bad())?;
        if handle == 0 || !s[1..sign_at].bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let sign = if &s[sign_at..sign_at + 1] == "+" {
            Sign::Pos
        } else {
            Sign::Neg
        };
        let digits = &s[sign_at + 1..];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let slot: i64 = digits.parse().map_err(|_| bad())?;
        Ok(CrossingToken {
            edge: Edge { kind, handle },
            sign,
            slot,
        })
    }
}

/// A point on the boundary circle of the polygon. Ordering follows the
/// counterclockwise boundary starting at the first corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryPoint {
    /// Polygon side, numbered 1..4g counterclockwise.
    pub side: usize,
    /// Slot of the crossing; on negative occurrences the boundary order is
    /// the reverse of the slot order.
    pub slot: i64,
    positive: bool,
}

impl BoundaryPoint {
    fn on(edge: Edge, positive: bool, slot: i64) -> Self {
        BoundaryPoint {
            side: edge.side(positive) + 1,
            slot,
            positive,
        }
    }

    fn key(&self) -> (usize, i64) {
        (
            self.side,
            if self.positive { self.slot } else { -self.slot },
        )
    }
}

impl Ord for BoundaryPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for BoundaryPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Directed chord inside the polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chord {
    pub from: BoundaryPoint,
    pub to: BoundaryPoint,
}

impl Chord {
    /// Whether the endpoints of the two chords alternate around the circle.
    pub fn crosses(&self, other: &Chord) -> bool {
        let (lo, hi) = ordered(self.from, self.to);
        let inside = |p: BoundaryPoint| lo < p && p < hi;
        inside(other.from) != inside(other.to)
    }

    /// Sign of a crossing between two directed chords: `+1` when `other`
    /// starts on the counterclockwise arc from `self.from` to `self.to`.
    /// Only meaningful when the chords cross.
    pub fn crossing_sign(&self, other: &Chord) -> i64 {
        if on_ccw_arc(other.from, self.from, self.to) {
            1
        } else {
            -1
        }
    }
}

fn ordered(a: BoundaryPoint, b: BoundaryPoint) -> (BoundaryPoint, BoundaryPoint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn on_ccw_arc(p: BoundaryPoint, from: BoundaryPoint, to: BoundaryPoint) -> bool {
    if from < to {
        from < p && p < to
    } else {
        p > from || p < to
    }
}

/// A closed curve given by its cyclic crossing sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Curve {
    tokens: Vec<CrossingToken>,
}

impl Curve {
    pub fn new(tokens: Vec<CrossingToken>) -> Result<Self, SurfaceError> {
        if tokens.is_empty() {
            return Err(SurfaceError::EmptyCurve);
        }
        Ok(Curve { tokens })
    }

    pub fn tokens(&self) -> &[CrossingToken] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Same curve traversed the other way.
    pub fn reversed(&self) -> Self {
        Curve {
            tokens: self
                .tokens
                .iter()
                .rev()
                .map(CrossingToken::reversed)
                .collect(),
        }
    }

    /// Cyclic rotation so that token `k` comes first.
    pub fn rotated(&self, k: usize) -> Self {
        let mut tokens = self.tokens.clone();
        tokens.rotate_left(k % self.tokens.len());
        Curve { tokens }
    }

    pub(crate) fn map_tokens(&self, f: impl FnMut(&CrossingToken) -> CrossingToken) -> Self {
        Curve {
            tokens: self.tokens.iter().map(f).collect(),
        }
    }

    pub(crate) fn shift_handles(&self, handles: usize) -> Self {
        self.map_tokens(|t| CrossingToken {
            edge: t.edge.shifted(handles),
            ..*t
        })
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Coordinates in the basis `([x1],[y1],...,[xg],[yg])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyClass(pub Vec<i64>);

impl HomologyClass {
    pub fn zero(genus: usize) -> Self {
        HomologyClass(vec![0; 2 * genus])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        HomologyClass(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        HomologyClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Signed and unsigned crossing counts of two curve representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Intersection {
    pub geometric: usize,
    pub algebraic: i64,
}

/// `sum_i (u_xi v_yi - u_yi v_xi)`.
pub fn symplectic_form(u: &HomologyClass, v: &HomologyClass) -> Result<i64, SurfaceError> {
    if u.len() != v.len() {
        return Err(SurfaceError::LengthMismatch(u.len(), v.len()));
    }
    Ok(u.0
        .chunks(2)
        .zip(v.0.chunks(2))
        .map(|(a, b)| a[0] * b[1] - a[1] * b[0])
        .sum())
}

/// The closed genus-`g` surface as a `4g`-gon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    genus: usize,
}

impl Surface {
    pub fn new(genus: usize) -> Self {
        Surface { genus }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn sides(&self) -> usize {
        4 * self.genus
    }

    /// Edge and orientation of every polygon side, counterclockwise.
    pub fn boundary_word(&self) -> Vec<(Edge, Sign)> {
        (1..=self.genus)
            .flat_map(|h| {
                [
                    (Edge::x(h), Sign::Pos),
                    (Edge::y(h), Sign::Pos),
                    (Edge::x(h), Sign::Neg),
                    (Edge::y(h), Sign::Neg),
                ]
            })
            .collect()
    }

    pub fn has_edge(&self, edge: Edge) -> bool {
        edge.handle >= 1 && edge.handle <= self.genus
    }

    /// Checks edge labels and slot distinctness of one curve.
    pub fn check_curve(&self, curve: &Curve) -> Result<(), SurfaceError> {
        if self.genus == 0 {
            return Err(SurfaceError::CurveOnSphere);
        }
        let mut seen = HashSet::new();
        for t in curve.tokens() {
            if !self.has_edge(t.edge) {
                return Err(SurfaceError::UnknownEdge {
                    edge: t.edge,
                    genus: self.genus,
                });
            }
            if !seen.insert((t.edge, t.slot)) {
                return Err(SurfaceError::DuplicateSlot {
                    edge: t.edge,
                    slot: t.slot,
                });
            }
        }
        Ok(())
    }

    pub fn chords(&self, curve: &Curve) -> Result<Vec<Chord>, SurfaceError> {
        self.check_curve(curve)?;
        Ok(chords_unchecked(curve))
    }

    /// Number of crossing pairs among the chords of one curve.
    pub fn self_interleavings(&self, curve: &Curve) -> Result<usize, SurfaceError> {
        let chords = self.chords(curve)?;
        Ok(count_self_crossings(&chords))
    }

    /// First pair of chords of `curve` that cross, if any.
    pub fn first_self_crossing(
        &self,
        curve: &Curve,
    ) -> Result<Option<(usize, usize)>, SurfaceError> {
        let chords = self.chords(curve)?;
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                if chords[i].crosses(&chords[j]) {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn intersections(&self, c1: &Curve, c2: &Curve) -> Result<Intersection, SurfaceError> {
        let a = self.chords(c1)?;
        let b = self.chords(c2)?;
        Ok(chord_intersections(&a, &b))
    }

    pub fn homology_class(&self, curve: &Curve) -> Result<HomologyClass, SurfaceError> {
        self.check_curve(curve)?;
        let mut v = vec![0i64; 2 * self.genus];
        for t in curve.tokens() {
            let base = 2 * (t.edge.handle - 1);
            match t.edge.kind {
                EdgeKind::X => v[base + 1] += t.sign.value(),
                EdgeKind::Y => v[base] -= t.sign.value(),
            }
        }
        Ok(HomologyClass(v))
    }

    /// Relator of the dual one-relator presentation of the surface group,
    /// read by walking once around the polygon vertex.
    ///
    /// Generator `2(i-1)` is the loop `X_i` dual to `x_i` and `2(i-1)+1` is
    /// `Y_i`; a letter records an edge crossed on the way together with the
    /// sign of that crossing.
    pub fn dual_relator(&self) -> Word {
        let word = self.boundary_word();
        let n = word.len();
        if n == 0 {
            return Word::empty();
        }
        // Endpoint of `side` at its start (`true`) or end is the edge's tail
        // exactly when those two flags agree with the occurrence sign.
        let is_tail = |side: usize, at_start: bool| word[side].1.is_pos() == at_start;
        let mut letters = Vec::with_capacity(n);
        // Corner `c` sits between the end of side c-1 and the start of side c.
        let (mut corner, mut leave_at_start) = (0usize, true);
        for _ in 0..n {
            let side = if leave_at_start {
                corner
            } else {
                (corner + n - 1) % n
            };
            let (edge, occurrence) = word[side];
            letters.push(Word::letter(edge.index(), occurrence.is_pos()));
            let tail = is_tail(side, leave_at_start);
            let other = edge.side(!occurrence.is_pos());
            let arrive_at_start = is_tail(other, true) == tail;
            if arrive_at_start {
                corner = other;
                leave_at_start = false;
            } else {
                corner = (other + 1) % n;
                leave_at_start = true;
            }
        }
        Word::new(letters)
    }

    /// Word read by the curve in the dual generators.
    pub fn curve_word(&self, curve: &Curve) -> Word {
        Word::new(
            curve
                .tokens()
                .iter()
                .map(|t| Word::letter(t.edge.index(), t.sign.is_pos()))
                .collect(),
        )
    }

    /// Homology class of a word in the dual generators under the coordinate
    /// identification used by [`Surface::homology_class`].
    pub fn abelianize_dual(&self, word: &Word) -> HomologyClass {
        let exps = word.exponent_sums(2 * self.genus);
        let mut v = vec![0i64; 2 * self.genus];
        for h in 0..self.genus {
            v[2 * h + 1] = exps[2 * h];
            v[2 * h] = -exps[2 * h + 1];
        }
        HomologyClass(v)
    }
}

pub(crate) fn chords_unchecked(curve: &Curve) -> Vec<Chord> {
    let t = curve.tokens();
    let k = t.len();
    (0..k)
        .map(|i| Chord {
            from: t[i].reentry_point(),
            to: t[(i + 1) % k].exit_point(),
        })
        .collect()
}

pub(crate) fn count_self_crossings(chords: &[Chord]) -> usize {
    let mut n = 0;
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if chords[i].crosses(&chords[j]) {
                n += 1;
            }
        }
    }
    n
}

pub(crate) fn chord_intersections(a: &[Chord], b: &[Chord]) -> Intersection {
    let mut geometric = 0;
    let mut algebraic = 0;
    for u in a {
        for w in b {
            if u.crosses(w) {
                geometric += 1;
                algebraic += u.crossing_sign(w);
            }
        }
    }
    Intersection {
        geometric,
        algebraic,
    }
}
