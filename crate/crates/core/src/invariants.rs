//! Invariants of the manifold a diagram determines.
//!
//! Everything here is read off the curves. The diagram determines the
//! manifold up to homeomorphism, and each piece `W_J` is a 1-handlebody
//! whose boundary is multisected by the families not in `J`. That boundary
//! is a connected sum of `k` copies of `S^1 x S^m` with `H1 = Z^k`, so the
//! genus of `W_J` is the free rank of `Z^2g / <classes of families not in J>`.
//!
//! The whole manifold is built from `Sigma x (simplex)` by attaching pieces
//! along the curves; by van Kampen its fundamental group is the surface group
//! with every diagram curve killed, and the higher pieces add neither
//! generators nor relations. H1 is the abelianization of that group.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::diagram::{FamilySet, Mode, MultisectionDiagram};
use crate::group::{tietze_simplify, Certification, GroupPresentation};
use crate::matrix::{snf, AbelianGroup, IntegerMatrix, SmithNormalForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("operation requires {0} mode")]
    ModeMismatch(Mode),
    #[error("piece {piece} is not a nonempty proper subset of 1..{n}")]
    BadPiece { piece: FamilySet, n: usize },
    #[error("Euler characteristic {chi} is nonzero for a closed {dim}-manifold: the diagram is not a multisection")]
    OddDimensionEuler { chi: i64, dim: usize },
    #[error("cyclic invariants need at least three families, got {0}")]
    TooFewCyclicFamilies(usize),
}

/// `H1 = Z^2g / <classes of all curves in s>`.
pub fn h1_of(d: &MultisectionDiagram, s: FamilySet) -> SmithNormalForm {
    snf(&d.class_matrix(s))
}

pub fn h1(d: &MultisectionDiagram) -> SmithNormalForm {
    h1_of(d, FamilySet::full(d.n()))
}

pub fn h1_group(d: &MultisectionDiagram) -> AbelianGroup {
    AbelianGroup::from_snf(&h1(d))
}

fn generator_names(genus: usize) -> Vec<String> {
    (1..=genus)
        .flat_map(|h| [format!("X{h}"), format!("Y{h}")])
        .collect()
}

/// `< X_i, Y_i | surface relator, every curve of the families in s >`.
pub fn pi1_of(d: &MultisectionDiagram, s: FamilySet) -> GroupPresentation {
    let surface = d.surface();
    if d.genus() == 0 {
        return GroupPresentation::trivial();
    }
    let mut relators = vec![surface.dual_relator()];
    for i in s.indices().filter(|&i| i < d.n()) {
        relators.extend(d.family(i).iter().map(|c| surface.curve_word(c)));
    }
    GroupPresentation::with_names(generator_names(d.genus()), relators)
}

pub fn pi1(d: &MultisectionDiagram) -> GroupPresentation {
    pi1_of(d, FamilySet::full(d.n()))
}

/// Genus of the 1-handlebody `W_J` (n-section mode).
pub fn piece_genus(d: &MultisectionDiagram, j: FamilySet) -> Result<usize, InvariantError> {
    if d.mode() != Mode::NSection {
        return Err(InvariantError::ModeMismatch(Mode::NSection));
    }
    let n = d.n();
    if j.is_empty() || j.len() >= n || !FamilySet::full(n).is_superset(j) {
        return Err(InvariantError::BadPiece { piece: j, n });
    }
    Ok(h1_of(d, j.complement(n)).cokernel_free_rank())
}

/// Euler characteristic by inclusion-exclusion over the pieces, using
/// `W_I ∩ W_J = W_{I∪J}`: proper pieces are 1-handlebodies with
/// `χ = 1 - genus` and the intersection of all of them is the surface.
///
/// A nonzero result in odd dimension is reported as an error.
pub fn euler_characteristic(d: &MultisectionDiagram) -> Result<i64, InvariantError> {
    if d.mode() != Mode::NSection {
        return Err(InvariantError::ModeMismatch(Mode::NSection));
    }
    let n = d.n();
    let mut chi = 0i64;
    for s in FamilySet::proper_subsets(n) {
        let sign = if s.len() % 2 == 1 { 1 } else { -1 };
        chi += sign * (1 - piece_genus(d, s)? as i64);
    }
    let sign = if n % 2 == 1 { 1 } else { -1 };
    chi += sign * (2 - 2 * d.genus() as i64);
    let dim = n + 1;
    if dim % 2 == 1 && chi != 0 {
        return Err(InvariantError::OddDimensionEuler { chi, dim });
    }
    Ok(chi)
}

/// Genera `k_i` of the cyclic pieces. Family `i` is the cut-system of
/// `H_i = X_i ∩ X_{i+1}`, so `X_i` is bounded by families `i-1` and `i`.
pub fn cyclic_piece_genera(d: &MultisectionDiagram) -> Result<Vec<usize>, InvariantError> {
    if d.mode() != Mode::Cyclic {
        return Err(InvariantError::ModeMismatch(Mode::Cyclic));
    }
    let n = d.n();
    if n < 3 {
        return Err(InvariantError::TooFewCyclicFamilies(n));
    }
    Ok((0..n)
        .map(|i| h1_of(d, FamilySet::from_indices([(i + n - 1) % n, i])).cokernel_free_rank())
        .collect())
}

/// `χ = Σ(1 - k_i) - n(1 - g) + (2 - 2g)`: the pieces, minus the
/// consecutive intersections (handlebodies), plus the surface, which is the
/// intersection of every other collection.
pub fn cyclic_euler_characteristic(genus: usize, k: &[usize]) -> i64 {
    let g = genus as i64;
    let n = k.len() as i64;
    k.iter().map(|&ki| 1 - ki as i64).sum::<i64>() - n * (1 - g) + (2 - 2 * g)
}

/// Ordered `name -> genus` list serialized as a JSON object.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pieces(pub Vec<(String, usize)>);

impl Pieces {
    pub fn get(&self, name: &str) -> Option<usize> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

impl Serialize for Pieces {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pi1Report {
    #[serde(flatten)]
    pub presentation: GroupPresentation,
    pub certification: Certification,
}

/// JSON schema:
/// `{mode, genus, families, h1: {factors, free_rank}, pieces: {name: genus},
/// euler, pi1: {generators, relators, certification}}`. In n-section mode
/// pieces are named by their family sets (`{1,3}`); in cyclic mode `X1..Xn`
/// are the 4-dimensional pieces and `H1..Hn` their consecutive
/// intersections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub mode: Mode,
    pub genus: usize,
    pub families: usize,
    pub h1: AbelianGroup,
    pub pieces: Pieces,
    pub euler: i64,
    pub pi1: Pi1Report,
}

fn pi1_report(d: &MultisectionDiagram, budget: usize) -> Pi1Report {
    let s = tietze_simplify(&pi1(d), budget);
    Pi1Report {
        presentation: s.presentation,
        certification: s.certification,
    }
}

/// Full report, dispatching on the diagram mode.
pub fn invariant_report(
    d: &MultisectionDiagram,
    budget: usize,
) -> Result<InvariantReport, InvariantError> {
    match d.mode() {
        Mode::NSection => nsection_invariants(d, budget),
        Mode::Cyclic => in_invariants(d, budget),
    }
}

pub fn nsection_invariants(
    d: &MultisectionDiagram,
    budget: usize,
) -> Result<InvariantReport, InvariantError> {
    let pieces = FamilySet::proper_subsets(d.n())
        .into_iter()
        .map(|j| Ok((j.to_string(), piece_genus(d, j)?)))
        .collect::<Result<_, InvariantError>>()?;
    Ok(InvariantReport {
        mode: d.mode(),
        genus: d.genus(),
        families: d.n(),
        h1: h1_group(d),
        pieces: Pieces(pieces),
        euler: euler_characteristic(d)?,
        pi1: pi1_report(d, budget),
    })
}

/// Invariants of a cyclic 4-manifold multisection.
pub fn in_invariants(
    d: &MultisectionDiagram,
    budget: usize,
) -> Result<InvariantReport, InvariantError> {
    let k = cyclic_piece_genera(d)?;
    let mut pieces: Vec<(String, usize)> = k
        .iter()
        .enumerate()
        .map(|(i, &ki)| (format!("X{}", i + 1), ki))
        .collect();
    pieces.extend((1..=d.n()).map(|i| (format!("H{i}"), d.genus())));
    Ok(InvariantReport {
        mode: d.mode(),
        genus: d.genus(),
        families: d.n(),
        h1: h1_group(d),
        pieces: Pieces(pieces),
        euler: cyclic_euler_characteristic(d.genus(), &k),
        pi1: pi1_report(d, budget),
    })
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "mode {}, genus {}, {} families",
            self.mode, self.genus, self.families
        )?;
        writeln!(f, "H1 = {}", self.h1)?;
        writeln!(f, "Euler characteristic = {}", self.euler)?;
        writeln!(
            f,
            "pi1 = {} [{}]",
            self.pi1.presentation, self.pi1.certification
        )?;
        writeln!(f, "piece genera:")?;
        for (name, g) in &self.pieces.0 {
            writeln!(f, "  {name}: {g}")?;
        }
        Ok(())
    }
}

/// Exponent-sum abelianization of a presentation, for cross-checks.
pub fn abelianization(p: &GroupPresentation) -> SmithNormalForm {
    let rows = p.relation_matrix();
    let m = IntegerMatrix::from_rows(&rows, p.generators()).transpose();
    let cols = m.cols().max(m.rows());
    let mut padded = IntegerMatrix::zeros(m.rows(), cols);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            padded[(i, j)] = m[(i, j)].clone();
        }
    }
    snf(&padded)
}
