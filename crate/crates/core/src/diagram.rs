//! Multisection diagrams: `n` families of `g` curves on one surface.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::matrix::IntegerMatrix;
use crate::surface::{CrossingToken, Curve, Edge, HomologyClass, Surface, SurfaceError};

/// Largest number of families supported by [`FamilySet`].
pub const MAX_FAMILIES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Set-indexed `n`-section of an `(n+1)`-manifold.
    #[serde(rename = "nsection")]
    NSection,
    /// Cyclic multisection of a 4-manifold: consecutive families bound the
    /// 3-dimensional intersections of consecutive pieces.
    Cyclic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::NSection => "nsection",
            Mode::Cyclic => "cyclic",
        })
    }
}

impl FromStr for Mode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "nsection" => Ok(Mode::NSection),
            "cyclic" => Ok(Mode::Cyclic),
            _ => Err(()),
        }
    }
}

/// A set of family indices, stored 0-based and displayed 1-based as `{1,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FamilySet(u32);

impl FamilySet {
    pub fn empty() -> Self {
        FamilySet(0)
    }

    pub fn full(n: usize) -> Self {
        FamilySet(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    /// From 0-based indices.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        FamilySet(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn from_bits(bits: u32) -> Self {
        FamilySet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_superset(self, other: FamilySet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn complement(self, n: usize) -> Self {
        FamilySet(!self.0 & FamilySet::full(n).0)
    }

    /// 0-based members in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// Image under a map of 0-based indices.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Self {
        FamilySet::from_indices(self.indices().map(f))
    }

    /// All nonempty proper subsets of `{1..n}`, ordered by size then
    /// lexicographically.
    pub fn proper_subsets(n: usize) -> Vec<FamilySet> {
        Self::subsets_with(n, |s| s.len() < n)
    }

    /// Nonempty subsets of `{1..n}` accepted by `keep`, same order.
    pub fn subsets_with(n: usize, keep: impl Fn(FamilySet) -> bool) -> Vec<FamilySet> {
        let mut v: Vec<FamilySet> = (1..=FamilySet::full(n).0)
            .map(FamilySet)
            .filter(|s| keep(*s))
            .collect();
        v.sort_by_key(|s| (s.len(), s.indices().collect::<Vec<_>>()));
        v
    }
}

impl fmt::Display for FamilySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.indices().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl Serialize for FamilySet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.indices().map(|i| i + 1))
    }
}

impl FromStr for FamilySet {
    type Err = String;

    /// Parses `{1,3}`, `1,3` or `13` style 1-based lists (the last form only
    /// for single digits).
    fn from_str(s: &str) -> Result<Self, String> {
        let inner = s
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .trim();
        if inner.is_empty() {
            return Ok(FamilySet::empty());
        }
        let parts: Vec<&str> = if inner.contains(',') || inner.contains(' ') {
            inner.split([',', ' ']).filter(|p| !p.is_empty()).collect()
        } else {
            inner.split("").filter(|p| !p.is_empty()).collect()
        };
        let mut set = FamilySet::empty();
        for p in parts {
            let i: usize = p
                .trim()
                .parse()
                .map_err(|_| format!("bad family index `{p}` in `{s}`"))?;
            if i == 0 || i > MAX_FAMILIES {
                return Err(format!("family index {i} out of range in `{s}`"));
            }
            set.0 |= 1 << (i - 1);
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("a diagram needs at least two families, got {0}")]
    TooFewFamilies(usize),
    #[error("at most {MAX_FAMILIES} families are supported, got {0}")]
    TooManyFamilies(usize),
    #[error("family {family} has {found} curves, expected {genus}")]
    FamilySize {
        family: usize,
        found: usize,
        genus: usize,
    },
    #[error("family {family}, curve {curve}: {source}")]
    Curve {
        family: usize,
        curve: usize,
        source: SurfaceError,
    },
    #[error("slot {slot} on edge {edge} is used twice")]
    DuplicateSlot { edge: Edge, slot: i64 },
    #[error("empty family subset")]
    EmptySubset,
    #[error("family {0} does not exist")]
    NoSuchFamily(usize),
    #[error("operation requires {expected} mode")]
    ModeMismatch { expected: Mode },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisectionDiagram {
    surface: Surface,
    mode: Mode,
    families: Vec<Vec<Curve>>,
}

impl MultisectionDiagram {
    /// Checks family count and sizes, edge labels and global slot
    /// distinctness. Embeddedness, disjointness and independence are
    /// reported by [`crate::validity::wellformed`].
    pub fn new(genus: usize, mode: Mode, families: Vec<Vec<Curve>>) -> Result<Self, DiagramError> {
        if families.len() < 2 {
            return Err(DiagramError::TooFewFamilies(families.len()));
        }
        Self::build(genus, mode, families)
    }

    pub(crate) fn build(
        genus: usize,
        mode: Mode,
        families: Vec<Vec<Curve>>,
    ) -> Result<Self, DiagramError> {
        if families.len() > MAX_FAMILIES {
            return Err(DiagramError::TooManyFamilies(families.len()));
        }
        let surface = Surface::new(genus);
        let mut seen = HashSet::new();
        for (f, fam) in families.iter().enumerate() {
            if fam.len() != genus {
                return Err(DiagramError::FamilySize {
                    family: f + 1,
                    found: fam.len(),
                    genus,
                });
            }
            for (c, curve) in fam.iter().enumerate() {
                surface
                    .check_curve(curve)
                    .map_err(|source| DiagramError::Curve {
                        family: f + 1,
                        curve: c + 1,
                        source,
                    })?;
                for t in curve.tokens() {
                    if !seen.insert((t.edge, t.slot)) {
                        return Err(DiagramError::DuplicateSlot {
                            edge: t.edge,
                            slot: t.slot,
                        });
                    }
                }
            }
        }
        Ok(MultisectionDiagram {
            surface,
            mode,
            families,
        })
    }

    /// The genus-0 diagram with `n` empty families.
    pub fn empty(n: usize, mode: Mode) -> Result<Self, DiagramError> {
        Self::new(0, mode, vec![Vec::new(); n])
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn genus(&self) -> usize {
        self.surface.genus()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.families.len()
    }

    pub fn families(&self) -> &[Vec<Curve>] {
        &self.families
    }

    pub fn family(&self, i: usize) -> &[Curve] {
        &self.families[i]
    }

    pub fn curves(&self) -> impl Iterator<Item = &Curve> {
        self.families.iter().flatten()
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        MultisectionDiagram {
            mode,
            ..self.clone()
        }
    }

    pub fn into_families(self) -> Vec<Vec<Curve>> {
        self.families
    }

    /// Families in `s`, in index order. The result may have a single family.
    pub fn subdiagram(&self, s: FamilySet) -> Result<Self, DiagramError> {
        if s.is_empty() {
            return Err(DiagramError::EmptySubset);
        }
        if let Some(i) = s.indices().find(|&i| i >= self.n()) {
            return Err(DiagramError::NoSuchFamily(i + 1));
        }
        Ok(MultisectionDiagram {
            surface: self.surface,
            mode: self.mode,
            families: s.indices().map(|i| self.families[i].clone()).collect(),
        })
    }

    /// Homology classes of the curves of the families in `s`.
    pub fn classes(&self, s: FamilySet) -> Vec<HomologyClass> {
        s.indices()
            .filter(|&i| i < self.n())
            .flat_map(|i| self.families[i].iter())
            .map(|c| {
                self.surface
                    .homology_class(c)
                    .expect("checked on construction")
            })
            .collect()
    }

    /// `2g x m` matrix whose columns are the classes of the curves in `s`,
    /// padded with zero columns to at least `2g` columns so that the number
    /// of zero invariant factors equals the free rank of the quotient.
    pub fn class_matrix(&self, s: FamilySet) -> IntegerMatrix {
        let classes = self.classes(s);
        let rows = 2 * self.genus();
        let cols = classes.len().max(rows);
        let mut m = IntegerMatrix::zeros(rows, cols);
        for (j, c) in classes.iter().enumerate() {
            for (i, &v) in c.coords().iter().enumerate() {
                m[(i, j)] = v.into();
            }
        }
        m
    }

    /// Same diagram with slots renumbered `0..m-1` on every edge, keeping
    /// their order.
    pub fn renormalized(&self) -> Self {
        let mut by_edge: BTreeMap<Edge, Vec<i64>> = BTreeMap::new();
        for t in self.curves().flat_map(|c| c.tokens()) {
            by_edge.entry(t.edge).or_default().push(t.slot);
        }
        for v in by_edge.values_mut() {
            v.sort_unstable();
        }
        let rank = |t: &CrossingToken| {
            by_edge[&t.edge]
                .binary_search(&t.slot)
                .expect("slot present") as i64
        };
        let families = self
            .families
            .iter()
            .map(|fam| {
                fam.iter()
                    .map(|c| {
                        c.map_tokens(|t| CrossingToken {
                            slot: rank(t),
                            ..*t
                        })
                    })
                    .collect()
            })
            .collect();
        MultisectionDiagram {
            families,
            ..self.clone()
        }
    }

    /// Reorders families: family `i` of the result is family `order[i]` of
    /// `self` (0-based).
    pub(crate) fn reordered(&self, order: &[usize]) -> Self {
        MultisectionDiagram {
            families: order.iter().map(|&i| self.families[i].clone()).collect(),
            ..self.clone()
        }
    }

    pub fn require_mode(&self, expected: Mode) -> Result<(), DiagramError> {
        if self.mode == expected {
            Ok(())
        } else {
            Err(DiagramError::ModeMismatch { expected })
        }
    }

    /// Pairs of families whose 3-manifold is constrained: every pair in
    /// n-section mode, consecutive pairs in cyclic mode.
    pub fn constrained_pairs(&self) -> Vec<FamilySet> {
        let n = self.n();
        match self.mode {
            Mode::NSection => FamilySet::subsets_with(n, |s| s.len() == 2),
            Mode::Cyclic => {
                let mut v: Vec<FamilySet> = (0..n)
                    .map(|i| FamilySet::from_indices([i, (i + 1) % n]))
                    .filter(|s| s.len() == 2)
                    .collect();
                v.sort_by_key(|s| (s.len(), s.indices().collect::<Vec<_>>()));
                v.dedup();
                v
            }
        }
    }
}
