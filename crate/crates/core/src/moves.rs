//! Diagram moves.
//!
//! Stabilizations are realised as connected sums with genus-1 diagrams,
//! which is their diagrammatic form; the handleslide is an explicit band sum
//! along a user-supplied arc.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::catalog;
use crate::diagram::{DiagramError, FamilySet, Mode, MultisectionDiagram};
use crate::surface::{
    chord_intersections, chords_unchecked, Chord, CrossingToken, Curve, Edge, Sign,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("family {0} does not exist")]
    NoSuchFamily(usize),
    #[error("curve {curve} does not exist in family {family}")]
    NoSuchCurve { family: usize, curve: usize },
    #[error("a curve cannot slide over itself")]
    SameCurve,
    #[error("attachment mismatch: {0}")]
    AttachmentMismatch(String),
    #[error("arc chord {arc_chord} crosses curve {curve} of the sliding family")]
    ArcCrossesFamily { arc_chord: usize, curve: usize },
    #[error("arc crosses edge {edge} twice in the gap before slot {slot}")]
    AmbiguousArc { edge: Edge, slot: i64 },
    #[error("arc uses edge {0}, which does not exist")]
    ArcEdge(Edge),
    #[error("slid curve is not embedded: chords {0} and {1} cross")]
    NotEmbedded(usize, usize),
    #[error("slid curve meets curve {curve} of its family {count} times")]
    MeetsFamily { curve: usize, count: usize },
    #[error("diagrams have {0} and {1} families")]
    FamilyCountMismatch(usize, usize),
    #[error("diagrams have modes {0} and {1}")]
    ModeMismatch(Mode, Mode),
    #[error("operation requires {0} mode")]
    WrongMode(Mode),
    #[error("family matching is not a bijection of 1..{0}")]
    BadMatching(usize),
    #[error("{set} is not a nonempty proper subset of 1..{n}")]
    BadSubset { set: FamilySet, n: usize },
    #[error("{set} is not a cyclic interval of 1..{n}")]
    NotInterval { set: FamilySet, n: usize },
    #[error("not a permutation of 1..{0}")]
    BadPermutation(usize),
    #[error("cyclic diagrams only allow rotations and reflections of the families")]
    IllegalCyclicPermutation,
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn value(self) -> i64 {
        match self {
            Side::Left => 1,
            Side::Right => -1,
        }
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            _ => Err(format!("side must be `left` or `right`, found `{s}`")),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Where an arc meets a curve: on the chord that follows token `pos` of
/// curve `curve` (both 0-based), approaching from `side` relative to the
/// curve's direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attachment {
    pub curve: usize,
    pub pos: usize,
    pub side: Side,
}

/// An arc from curve `a` to curve `b`.
///
/// The arc is an open token path. A token with slot `v` crosses its edge in
/// the gap just before the existing crossing with slot `v` (or after every
/// crossing when no slot is that large), so arcs are written against the
/// current slots of the diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSpec {
    pub tokens: Vec<CrossingToken>,
    pub start: Attachment,
    pub end: Attachment,
}

/// Sort key for slots on one edge while new crossings are inserted:
/// `(existing slot, tier, offset)`. Existing crossings are `(s, 0, 0)`.
type SlotKey = (i64, i64, i64);

struct Placement {
    keys: BTreeMap<Edge, Vec<SlotKey>>,
}

impl Placement {
    fn new(d: &MultisectionDiagram) -> Self {
        let mut keys: BTreeMap<Edge, Vec<SlotKey>> = BTreeMap::new();
        for t in d.curves().flat_map(Curve::tokens) {
            keys.entry(t.edge).or_default().push((t.slot, 0, 0));
        }
        Placement { keys }
    }

    fn add(&mut self, edge: Edge, key: SlotKey) {
        self.keys.entry(edge).or_default().push(key);
    }

    /// Final slot of every key on every edge.
    fn ranks(mut self) -> BTreeMap<(Edge, SlotKey), i64> {
        let mut out = BTreeMap::new();
        for (edge, v) in self.keys.iter_mut() {
            v.sort_unstable();
            for (i, k) in v.iter().enumerate() {
                out.insert((*edge, *k), i as i64);
            }
        }
        out
    }
}

fn check_attachment(
    fam: &[Curve],
    at: &Attachment,
    expected: usize,
    which: &str,
) -> Result<(), MoveError> {
    if at.curve != expected {
        return Err(MoveError::AttachmentMismatch(format!(
            "{which} attaches to curve {}, expected curve {}",
            at.curve + 1,
            expected + 1
        )));
    }
    if at.pos >= fam[expected].len() {
        return Err(MoveError::AttachmentMismatch(format!(
            "{which} position {} is beyond the {} tokens of curve {}",
            at.pos + 1,
            fam[expected].len(),
            expected + 1
        )));
    }
    Ok(())
}

/// Slides curve `a` of family `f` over curve `b` along `arc` (0-based
/// indices). The new curve is the band sum of `a` with a parallel copy of
/// `b` pushed off to the side the arc arrives from; its class is
/// `[a] + [b]` when both attachments are on the same side and `[a] - [b]`
/// otherwise.
pub fn handleslide(
    d: &MultisectionDiagram,
    f: usize,
    a: usize,
    b: usize,
    arc: &ArcSpec,
) -> Result<MultisectionDiagram, MoveError> {
    if f >= d.n() {
        return Err(MoveError::NoSuchFamily(f + 1));
    }
    let fam = d.family(f);
    for c in [a, b] {
        if c >= fam.len() {
            return Err(MoveError::NoSuchCurve {
                family: f + 1,
                curve: c + 1,
            });
        }
    }
    if a == b {
        return Err(MoveError::SameCurve);
    }
    check_attachment(fam, &arc.start, a, "start")?;
    check_attachment(fam, &arc.end, b, "end")?;
    let surface = d.surface();
    if let Some(t) = arc.tokens.iter().find(|t| !surface.has_edge(t.edge)) {
        return Err(MoveError::ArcEdge(t.edge));
    }
    let mut gaps = HashSet::new();
    for t in &arc.tokens {
        if !gaps.insert((t.edge, t.slot)) {
            return Err(MoveError::AmbiguousArc {
                edge: t.edge,
                slot: t.slot,
            });
        }
    }
    check_arc_interior(d, f, &arc.tokens)?;

    let (ca, cb) = (&fam[a], &fam[b]);
    let (la, lb) = (arc.start.side.value(), arc.end.side.value());
    let forward = la == lb;
    let (p, q) = (arc.start.pos, arc.end.pos);

    // (edge, sign, key) for each token of the new curve
    let mut plan: Vec<(Edge, Sign, SlotKey)> = Vec::new();
    let existing = |t: &CrossingToken| (t.edge, t.sign, (t.slot, 0, 0));
    plan.extend(ca.tokens()[..=p].iter().map(existing));
    for t in &arc.tokens {
        plan.push((t.edge, t.sign, (t.slot, -1, la * t.sign.value())));
    }
    let k = cb.len();
    let copy = |t: &CrossingToken| (t.slot, 0, lb * t.sign.value());
    if forward {
        for i in 1..=k {
            let t = &cb.tokens()[(q + i) % k];
            plan.push((t.edge, t.sign, copy(t)));
        }
    } else {
        for i in 0..k {
            let t = &cb.tokens()[(q + k - i) % k];
            plan.push((t.edge, t.sign.flip(), copy(t)));
        }
    }
    for t in arc.tokens.iter().rev() {
        plan.push((t.edge, t.sign.flip(), (t.slot, -1, -la * t.sign.value())));
    }
    plan.extend(ca.tokens()[p + 1..].iter().map(existing));

    let mut placement = Placement::new(d);
    for &(edge, _, key) in plan.iter().filter(|(_, _, key)| *key != (key.0, 0, 0)) {
        placement.add(edge, key);
    }
    let ranks = placement.ranks();
    let slot = |e: Edge, key: SlotKey| ranks[&(e, key)];
    let new_curve = Curve::new(
        plan.iter()
            .map(|&(e, s, key)| CrossingToken::new(e, s, slot(e, key)))
            .collect(),
    )
    .expect("nonempty");
    let remap = |c: &Curve| {
        c.map_tokens(|t| CrossingToken {
            slot: slot(t.edge, (t.slot, 0, 0)),
            ..*t
        })
    };
    let mut families: Vec<Vec<Curve>> = d
        .families()
        .iter()
        .map(|fam| fam.iter().map(remap).collect())
        .collect();
    families[f][a] = new_curve;
    let out = MultisectionDiagram::build(d.genus(), d.mode(), families)?;

    let new = &out.family(f)[a];
    if let Some((i, j)) = surface.first_self_crossing(new).expect("checked") {
        return Err(MoveError::NotEmbedded(i + 1, j + 1));
    }
    for (c, other) in out.family(f).iter().enumerate() {
        if c != a {
            let x = surface.intersections(new, other).expect("checked");
            if x.geometric > 0 {
                return Err(MoveError::MeetsFamily {
                    curve: c + 1,
                    count: x.geometric,
                });
            }
        }
    }
    Ok(out)
}

/// The chords between consecutive arc tokens must avoid every curve of the
/// sliding family.
fn check_arc_interior(
    d: &MultisectionDiagram,
    f: usize,
    tokens: &[CrossingToken],
) -> Result<(), MoveError> {
    if tokens.len() < 2 {
        return Ok(());
    }
    let mut placement = Placement::new(d);
    for t in tokens {
        placement.add(t.edge, (t.slot, -1, 0));
    }
    let ranks = placement.ranks();
    let placed: Vec<CrossingToken> = tokens
        .iter()
        .map(|t| CrossingToken {
            slot: ranks[&(t.edge, (t.slot, -1, 0))],
            ..*t
        })
        .collect();
    let arc_chords: Vec<Chord> = placed
        .windows(2)
        .map(|w| Chord {
            from: w[0].reentry_point(),
            to: w[1].exit_point(),
        })
        .collect();
    for (c, curve) in d.family(f).iter().enumerate() {
        let moved = curve.map_tokens(|t| CrossingToken {
            slot: ranks[&(t.edge, (t.slot, 0, 0))],
            ..*t
        });
        let chords = chords_unchecked(&moved);
        for (i, ac) in arc_chords.iter().enumerate() {
            if chord_intersections(std::slice::from_ref(ac), &chords).geometric > 0 {
                return Err(MoveError::ArcCrossesFamily {
                    arc_chord: i + 1,
                    curve: c + 1,
                });
            }
        }
    }
    Ok(())
}

/// Connected sum: `d2` moves to handles `g1+1..g1+g2` and family `i` of the
/// result is family `i` of `d1` followed by family `matching[i]` of `d2`.
///
/// Both polygons put the summing disk at their vertex, so crossings carry
/// over verbatim and chords of the two summands lie on disjoint arcs of the
/// boundary circle.
pub fn connected_sum(
    d1: &MultisectionDiagram,
    d2: &MultisectionDiagram,
    matching: &[usize],
) -> Result<MultisectionDiagram, MoveError> {
    if d1.n() != d2.n() {
        return Err(MoveError::FamilyCountMismatch(d1.n(), d2.n()));
    }
    if d1.mode() != d2.mode() {
        return Err(MoveError::ModeMismatch(d1.mode(), d2.mode()));
    }
    let n = d1.n();
    if !is_permutation(matching, n) {
        return Err(MoveError::BadMatching(n));
    }
    let g1 = d1.genus();
    let families = (0..n)
        .map(|i| {
            let mut fam = d1.family(i).to_vec();
            fam.extend(d2.family(matching[i]).iter().map(|c| c.shift_handles(g1)));
            fam
        })
        .collect();
    Ok(MultisectionDiagram::new(
        g1 + d2.genus(),
        d1.mode(),
        families,
    )?)
}

fn is_permutation(v: &[usize], n: usize) -> bool {
    v.len() == n && v.iter().collect::<HashSet<_>>().len() == n && v.iter().all(|&i| i < n)
}

/// Connected sum with the identity matching.
pub fn connected_sum_identity(
    d1: &MultisectionDiagram,
    d2: &MultisectionDiagram,
) -> Result<MultisectionDiagram, MoveError> {
    connected_sum(d1, d2, &(0..d1.n()).collect::<Vec<_>>())
}

/// `I`-stabilization: connected sum with the genus-1 sphere whose families
/// in `I` and in its complement carry two curves meeting once.
pub fn stabilize(d: &MultisectionDiagram, i: FamilySet) -> Result<MultisectionDiagram, MoveError> {
    if d.mode() != Mode::NSection {
        return Err(MoveError::WrongMode(Mode::NSection));
    }
    let n = d.n();
    if i.is_empty() || i.len() >= n || !FamilySet::full(n).is_superset(i) {
        return Err(MoveError::BadSubset { set: i, n });
    }
    connected_sum_identity(d, &catalog::two_slope_torus(n, Mode::NSection, i)?)
}

/// Whether `s` is a nonempty proper set of cyclically consecutive indices.
pub fn is_cyclic_interval(s: FamilySet, n: usize) -> bool {
    if s.is_empty() || s.len() >= n || !FamilySet::full(n).is_superset(s) {
        return false;
    }
    // exactly one position where membership switches on
    (0..n)
        .filter(|&i| s.contains(i) && !s.contains((i + n - 1) % n))
        .count()
        == 1
}

/// Cyclic stabilization: connected sum with a genus-1 diagram of `S^4`
/// whose families in `group` (a cyclic interval) share one slope and the
/// others share a transverse slope.
pub fn in_stabilize(
    d: &MultisectionDiagram,
    group: FamilySet,
) -> Result<MultisectionDiagram, MoveError> {
    if d.mode() != Mode::Cyclic {
        return Err(MoveError::WrongMode(Mode::Cyclic));
    }
    if !is_cyclic_interval(group, d.n()) {
        return Err(MoveError::NotInterval {
            set: group,
            n: d.n(),
        });
    }
    connected_sum_identity(d, &catalog::two_slope_torus(d.n(), Mode::Cyclic, group)?)
}

/// Connected sum with the genus-1 cyclic `S^2 x S^2`: slopes alternate on
/// families 1, 2, 3 and stay constant from family 4 on, so the slope
/// changes four times around the cycle.
pub fn fake_stabilize(d: &MultisectionDiagram) -> Result<MultisectionDiagram, MoveError> {
    if d.mode() != Mode::Cyclic {
        return Err(MoveError::WrongMode(Mode::Cyclic));
    }
    if d.n() < 4 {
        return Err(MoveError::Unsupported(format!(
            "fake stabilization needs at least four families, got {}",
            d.n()
        )));
    }
    connected_sum_identity(
        d,
        &catalog::two_slope_torus(d.n(), Mode::Cyclic, FamilySet::from_indices([0, 2]))?,
    )
}

/// Middle level of a quadrisection.
///
/// The cyclic pieces are `W_23, W_24, W_14, W_13`; their consecutive
/// intersections `W_234, W_124, W_134, W_123` have cut-systems
/// `α1, α3, α2, α4`, since `∩_{k≠i} W_k` is cut out by `α_i`. The result
/// keeps the curves and lists the families in that order.
pub fn middle_level(d: &MultisectionDiagram) -> Result<MultisectionDiagram, MoveError> {
    if d.mode() != Mode::NSection {
        return Err(MoveError::WrongMode(Mode::NSection));
    }
    if d.n() != 4 {
        return Err(MoveError::Unsupported(format!(
            "middle level needs four families, got {}",
            d.n()
        )));
    }
    Ok(d.reordered(&[0, 2, 1, 3]).with_mode(Mode::Cyclic))
}

/// Image of family `i` under the middle-level reordering.
pub fn middle_level_position(i: usize) -> usize {
    [0, 2, 1, 3][i]
}

/// Moves family `i` to position `sigma[i]` (0-based). Cyclic diagrams only
/// accept rotations and reflections.
pub fn permute_families(
    d: &MultisectionDiagram,
    sigma: &[usize],
) -> Result<MultisectionDiagram, MoveError> {
    let n = d.n();
    if !is_permutation(sigma, n) {
        return Err(MoveError::BadPermutation(n));
    }
    if d.mode() == Mode::Cyclic && !is_dihedral(sigma) {
        return Err(MoveError::IllegalCyclicPermutation);
    }
    let mut order = vec![0; n];
    for (i, &s) in sigma.iter().enumerate() {
        order[s] = i;
    }
    Ok(d.reordered(&order))
}

fn is_dihedral(sigma: &[usize]) -> bool {
    let n = sigma.len();
    let step = |i: usize| (sigma[(i + 1) % n] + n - sigma[i]) % n;
    n <= 3 || (0..n).all(|i| step(i) == 1) || (0..n).all(|i| step(i) == n - 1)
}
