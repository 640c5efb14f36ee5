//! Genus-1 census.
//!
//! On the torus a curve is determined by its slope, so a genus-1 diagram is
//! a tuple of primitive slopes. A slope `(p, q)` is the class
//! `p [x1] + q [y1]`, taken up to sign with the canonical representative
//! having `p > 0`, or `(0, 1)`.
//!
//! Two families of slopes `a`, `b` give `S^3` when `det(a, b) = ±1`,
//! `S^1 x S^2` when they are parallel and a lens space otherwise. With more
//! families, any three pairwise transverse slopes would have to give a
//! connected sum of `S^1 x S^3`, which they do not, so a valid tuple splits
//! into at most two parallel groups.
//!
//! Tuples are classified up to `GL(2, Z)` acting on all slopes at once
//! together with relabelling of the families.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::diagram::{DiagramError, Mode, MultisectionDiagram};
use crate::surface::{CrossingToken, Curve, Edge, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    /// Canonical representative of `±(p, q)`, or `None` unless primitive.
    pub fn new(p: i64, q: i64) -> Option<Slope> {
        if p.gcd(&q) != 1 {
            return None;
        }
        Some(if p < 0 || (p == 0 && q < 0) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        })
    }

    pub fn det(self, other: Slope) -> i64 {
        self.p * other.q - self.q * other.p
    }

    /// Image under the integer matrix `m` acting on column vectors.
    pub fn transform(self, m: [[i64; 2]; 2]) -> Slope {
        Slope::new(
            m[0][0] * self.p + m[0][1] * self.q,
            m[1][0] * self.p + m[1][1] * self.q,
        )
        .expect("unimodular image of a primitive vector is primitive")
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.p, self.q].serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeDiagram {
    pub slopes: Vec<Slope>,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// `S^(n+1)`, with `k` the size of the smaller parallel group.
    Sphere {
        k: usize,
    },
    S1xSn,
    /// `witness` holds 1-based family indices.
    Invalid {
        reason: String,
        witness: Vec<usize>,
    },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Sphere { k } => write!(f, "sphere({k})"),
            Classification::S1xSn => f.write_str("s1xsn"),
            Classification::Invalid { reason, witness } => {
                let w: Vec<String> = witness.iter().map(ToString::to_string).collect();
                write!(f, "invalid({reason}; families {})", w.join(","))
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("need at least two families, got {0}")]
    TooFewFamilies(usize),
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("lens determinants are only enumerated for n = 2, got n = {0}")]
    LensNeedsTwo(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Grouping analysis: a non-unimodular pair is a lens space, three parallel
/// groups are too many, otherwise the group sizes decide.
pub fn classify(slopes: &[Slope]) -> Classification {
    let n = slopes.len();
    for i in 0..n {
        for j in i + 1..n {
            if slopes[i].det(slopes[j]).abs() > 1 {
                return Classification::Invalid {
                    reason: "lens space pair".into(),
                    witness: vec![i + 1, j + 1],
                };
            }
        }
    }
    let mut groups: Vec<(Slope, Vec<usize>)> = Vec::new();
    for (i, s) in slopes.iter().enumerate() {
        match groups.iter_mut().find(|(g, _)| g == s) {
            Some((_, members)) => members.push(i + 1),
            None => groups.push((*s, vec![i + 1])),
        }
    }
    match groups.as_slice() {
        [] | [_] => Classification::S1xSn,
        [(_, a), (_, b)] => Classification::Sphere {
            k: a.len().min(b.len()),
        },
        _ => Classification::Invalid {
            reason: "three slope groups".into(),
            witness: groups.iter().take(3).map(|(_, m)| m[0]).collect(),
        },
    }
}

/// A matrix in `GL(2, Z)` sending `a` to `(1, 0)`.
fn to_first_basis(a: Slope) -> [[i64; 2]; 2] {
    let e = a.p.extended_gcd(&a.q);
    // e.x * p + e.y * q = ±1
    let s = e.gcd.signum();
    [[s * e.x, s * e.y], [-a.q, a.p]]
}

fn mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut m = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// Canonical form under `GL(2, Z)` and relabelling: the least sorted image
/// over all normalizations that send some slope `a` to `(1, 0)` and a
/// transverse slope `b` to `(r, d)` with `0 <= r < d`.
pub fn canonical_form(slopes: &[Slope]) -> Vec<Slope> {
    let n = slopes.len();
    let mut best: Option<Vec<Slope>> = None;
    for i in 0..n {
        let m = to_first_basis(slopes[i]);
        let mut any = false;
        for j in 0..n {
            let b = slopes[j].transform(m);
            if b.q == 0 {
                continue;
            }
            any = true;
            let d = b.q.abs();
            for reflect in [false, true] {
                let r0 = if reflect { -b.p } else { b.p };
                let y = if reflect { -b.q.signum() } else { b.q.signum() };
                // (x, y) -> (x + t y', y') with y' = ±y making b = (r, d)
                let r = r0.rem_euclid(d);
                let t = (r - r0) / d;
                let n2 = mul([[1, t], [0, 1]], mul([[1, 0], [0, y]], m));
                let mut img: Vec<Slope> = slopes.iter().map(|s| s.transform(n2)).collect();
                img.sort();
                if best.as_ref().is_none_or(|cur| img < *cur) {
                    best = Some(img);
                }
            }
        }
        if !any {
            // all slopes parallel
            return vec![Slope { p: 1, q: 0 }; n];
        }
    }
    best.unwrap_or_default()
}

/// All primitive canonical slopes with `|p|, |q| <= bound`.
pub fn slopes_in_box(bound: i64) -> Vec<Slope> {
    let mut out: Vec<Slope> = (-bound..=bound)
        .flat_map(|p| (-bound..=bound).map(move |q| (p, q)))
        .filter_map(|(p, q)| Slope::new(p, q))
        .filter(|s| s.p.abs() <= bound && s.q.abs() <= bound)
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusClass {
    pub canonical: Vec<Slope>,
    pub classification: Classification,
    /// Largest `|det|` over pairs of slopes.
    pub max_det: u64,
    /// Lexicographically least tuple in the class.
    pub representative: Vec<Slope>,
    /// Number of enumerated tuples in the class.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub bound: i64,
    pub allow_lens: bool,
    pub tuples: usize,
    pub classes: Vec<CensusClass>,
}

fn admissible(prefix: &[Slope], next: Slope, allow_lens: bool) -> bool {
    if allow_lens {
        return true;
    }
    if prefix.iter().any(|s| s.det(next).abs() > 1) {
        return false;
    }
    let mut groups: Vec<Slope> = Vec::new();
    for s in prefix.iter().chain([&next]) {
        if !groups.contains(s) {
            groups.push(*s);
        }
    }
    groups.len() <= 2
}

/// Enumerates every `n`-tuple of slopes in the box that passes the genus-1
/// validity test and groups them into classes, ordered by canonical form.
///
/// `allow_lens` (only for `n = 2`) keeps every pair, lens spaces included;
/// those classes are not multisections and exist to cross-check the
/// classification.
pub fn enumerate_genus1(
    n: usize,
    bound: i64,
    allow_lens: bool,
) -> Result<CensusReport, CensusError> {
    if n < 2 {
        return Err(CensusError::TooFewFamilies(n));
    }
    if bound < 1 {
        return Err(CensusError::ZeroBound);
    }
    if allow_lens && n != 2 {
        return Err(CensusError::LensNeedsTwo(n));
    }
    let slopes = slopes_in_box(bound);
    let mut classes: BTreeMap<Vec<Slope>, CensusClass> = BTreeMap::new();
    let mut tuples = 0;
    let mut stack: Vec<Slope> = Vec::with_capacity(n);
    fn rec(
        stack: &mut Vec<Slope>,
        n: usize,
        slopes: &[Slope],
        allow_lens: bool,
        visit: &mut dyn FnMut(&[Slope]),
    ) {
        if stack.len() == n {
            visit(stack);
            return;
        }
        for &s in slopes {
            if admissible(stack, s, allow_lens) {
                stack.push(s);
                rec(stack, n, slopes, allow_lens, visit);
                stack.pop();
            }
        }
    }
    rec(&mut stack, n, &slopes, allow_lens, &mut |t| {
        tuples += 1;
        let canonical = canonical_form(t);
        classes
            .entry(canonical.clone())
            .and_modify(|c| {
                c.count += 1;
                if t < c.representative.as_slice() {
                    c.representative = t.to_vec();
                }
            })
            .or_insert_with(|| CensusClass {
                classification: classify(&canonical),
                max_det: max_det(&canonical),
                canonical,
                representative: t.to_vec(),
                count: 1,
            });
    });
    Ok(CensusReport {
        n,
        bound,
        allow_lens,
        tuples,
        classes: classes.into_values().collect(),
    })
}

fn max_det(slopes: &[Slope]) -> u64 {
    let mut m = 0;
    for (i, a) in slopes.iter().enumerate() {
        for b in &slopes[i + 1..] {
            m = m.max(a.det(*b).unsigned_abs());
        }
    }
    m
}

type Q = Ratio<i64>;

/// Where a straight line crosses the sides of the unit square.
struct Event {
    t: Q,
    edge: Edge,
    sign: Sign,
    pos: Q,
}

fn frac(x: Q) -> Q {
    x - x.floor()
}

/// Crossings of the closed straight line through `(x0, y0)` with class
/// `(p, q)`, in order. The line runs in direction `-(p, q)`: moving down
/// through the bottom side is a positive `x1` crossing, moving right
/// through the right side is a positive `y1` crossing.
fn line_events(s: Slope, x0: Q, y0: Q) -> Vec<Event> {
    let (dx, dy) = (-s.p, -s.q);
    let mut ev = Vec::new();
    let crossings = |start: Q, step: i64| -> Vec<i64> {
        let end = start + Q::from(step);
        let (lo, hi) = if step > 0 { (start, end) } else { (end, start) };
        (lo.ceil().to_integer()..=hi.floor().to_integer()).collect()
    };
    if dx != 0 {
        for m in crossings(x0, dx) {
            let t = (Q::from(m) - x0) / Q::from(dx);
            let sign = if dx > 0 { Sign::Pos } else { Sign::Neg };
            ev.push(Event {
                t,
                edge: Edge::y(1),
                sign,
                pos: frac(y0 + t * Q::from(dy)),
            });
        }
    }
    if dy != 0 {
        for m in crossings(y0, dy) {
            let t = (Q::from(m) - y0) / Q::from(dy);
            let sign = if dy < 0 { Sign::Pos } else { Sign::Neg };
            ev.push(Event {
                t,
                edge: Edge::x(1),
                sign,
                pos: frac(x0 + t * Q::from(dx)),
            });
        }
    }
    ev.sort_by_key(|e| e.t);
    ev
}

/// Start points: `x0` increases with the family so that parallel families
/// keep their order; `attempt` perturbs until the lines are generic.
fn start_point(i: usize, n: usize, attempt: i64) -> (Q, Q) {
    const P: i64 = 1009;
    let (i, n) = (i as i64, n as i64);
    let h = 1 + (i * 31 + attempt * 17) % 97;
    let x0 = Q::new((i + 1) * 4 * P + h, (n + 1) * 4 * P);
    let y0 = Q::new(1 + (i * 7919 + attempt * 104_729) % (P - 1), P);
    (x0, y0)
}

/// A genus-1 token diagram whose curves are straight lines of the given
/// slopes on the square torus.
pub fn realize(d: &SlopeDiagram) -> Result<MultisectionDiagram, CensusError> {
    let n = d.slopes.len();
    if n < 2 {
        return Err(CensusError::TooFewFamilies(n));
    }
    let events = (0..)
        .map(|attempt| {
            d.slopes
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let (x0, y0) = start_point(i, n, attempt);
                    line_events(*s, x0, y0)
                })
                .collect::<Vec<_>>()
        })
        .find(|ev| generic(ev))
        .expect("some perturbation is generic");
    let mut positions: BTreeMap<Edge, Vec<Q>> = BTreeMap::new();
    for e in events.iter().flatten() {
        positions.entry(e.edge).or_default().push(e.pos);
    }
    for v in positions.values_mut() {
        v.sort();
    }
    let families = events
        .iter()
        .map(|ev| {
            let tokens = ev
                .iter()
                .map(|e| {
                    let slot = positions[&e.edge].binary_search(&e.pos).expect("recorded") as i64;
                    CrossingToken::new(e.edge, e.sign, slot)
                })
                .collect();
            vec![Curve::new(tokens).expect("a primitive slope crosses some side")]
        })
        .collect();
    Ok(MultisectionDiagram::new(1, d.mode, families)?)
}

/// No line passes through the corner and no two crossings share a point.
fn generic(events: &[Vec<Event>]) -> bool {
    let mut seen: BTreeMap<Edge, Vec<Q>> = BTreeMap::new();
    for e in events.iter().flatten() {
        if e.pos == Q::from(0) {
            return false;
        }
        seen.entry(e.edge).or_default().push(e.pos);
    }
    seen.values_mut().all(|v| {
        let len = v.len();
        v.sort();
        v.dedup();
        v.len() == len
    })
}
