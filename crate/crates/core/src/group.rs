//! Finitely presented groups and Tietze simplification.
//!
//! Letters are nonzero `i32`s: `k > 0` is generator `k-1`, `-k` its inverse.

use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn new(letters: Vec<i32>) -> Self {
        debug_assert!(letters.iter().all(|&l| l != 0));
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Letter for generator `index`, inverted unless `positive`.
    pub fn letter(index: usize, positive: bool) -> i32 {
        let l = index as i32 + 1;
        if positive {
            l
        } else {
            -l
        }
    }

    pub fn generator_of(letter: i32) -> usize {
        letter.unsigned_abs() as usize - 1
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    pub fn reduced(&self) -> Self {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Self {
        let w = self.reduced().0;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let n = v.len();
            v.rotate_left(k % n);
        }
        Word(v)
    }

    pub fn is_cyclic_conjugate(&self, other: &Word) -> bool {
        let a = self.cyclically_reduced();
        let b = other.cyclically_reduced();
        a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|k| a.rotated(k) == b))
    }

    /// Exponent sum of each of the first `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for &l in &self.0 {
            v[Word::generator_of(l)] += l.signum() as i64;
        }
        v
    }

    /// Smallest representative among rotations of the word and its inverse,
    /// used to recognise relators that define the same normal closure.
    fn canonical(&self) -> Word {
        let w = self.cyclically_reduced();
        let inv = w.inverse();
        (0..w.len().max(1))
            .flat_map(|k| [w.rotated(k), inv.rotated(k)])
            .min_by_key(Word::sort_key)
            .unwrap_or_default()
    }

    /// Orders by generator first, with positive letters before inverses.
    fn sort_key(&self) -> Vec<(i32, bool)> {
        self.0.iter().map(|&l| (l.abs(), l < 0)).collect()
    }

    fn occurrences(&self, generator: usize) -> usize {
        self.0
            .iter()
            .filter(|&&l| Word::generator_of(l) == generator)
            .count()
    }

    fn substitute(&self, generator: usize, image: &Word) -> Word {
        let inv = image.inverse();
        let mut out = Vec::new();
        for &l in &self.0 {
            if Word::generator_of(l) == generator {
                out.extend_from_slice(if l > 0 { &image.0 } else { &inv.0 });
            } else {
                out.push(l);
            }
        }
        Word(out).reduced()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayWord { word: self, names }
    }
}

struct DisplayWord<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let letters = &self.word.0;
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let run = letters[i..].iter().take_while(|&&m| m == l).count();
            if i > 0 {
                f.write_str(" ")?;
            }
            let g = Word::generator_of(l);
            match self.names.get(g) {
                Some(n) => f.write_str(n)?,
                None => write!(f, "g{}", g + 1)?,
            }
            let e = if l < 0 { -(run as i64) } else { run as i64 };
            if e != 1 {
                write!(f, "^{e}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// `<generators | relators>`, with display names for the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Generators are named `g1..gn`. Relators are freely reduced on entry.
    pub fn new(generators: usize, relators: Vec<Word>) -> Self {
        let names = (1..=generators).map(|i| format!("g{i}")).collect();
        Self::with_names(names, relators)
    }

    pub fn with_names(names: Vec<String>, relators: Vec<Word>) -> Self {
        let relators = relators.iter().map(Word::reduced).collect();
        GroupPresentation { names, relators }
    }

    pub fn trivial() -> Self {
        GroupPresentation::new(0, Vec::new())
    }

    pub fn generators(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.generators()))
            .collect()
    }

    pub fn relator_strings(&self) -> Vec<String> {
        self.relators
            .iter()
            .map(|r| r.display_with(&self.names).to_string())
            .collect()
    }
}

/// `< a, b | a b A >`, or `< | >` for the empty presentation.
pub(crate) fn presentation_text(generators: &[String], relators: &[String]) -> String {
    let part = |v: &[String]| if v.is_empty() { " ".to_string() } else { format!(" {} ", v.join(", ")) };
    format!("<{}|{}>", part(generators), part(relators))
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&presentation_text(&self.names, &self.relator_strings()))
    }
}

impl Serialize for GroupPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GroupPresentation", 2)?;
        st.serialize_field("generators", &self.names)?;
        st.serialize_field("relators", &self.relator_strings())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// The group is trivial.
    Trivial,
    /// The group is free of the given rank (rank >= 1).
    Free { rank: usize },
    /// Simplification stalled or ran out of budget.
    Inconclusive,
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certification::Trivial => f.write_str("trivial-certified"),
            Certification::Free { rank } => write!(f, "free-certified(rank {rank})"),
            Certification::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

impl Serialize for Certification {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplified {
    pub presentation: GroupPresentation,
    pub certification: Certification,
    pub steps: usize,
}

pub const DEFAULT_BUDGET: usize = 10_000;

/// Tietze budget from `MSD_BUDGET`, or the default.
pub fn budget_from_env() -> usize {
    std::env::var("MSD_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Simplifies a presentation by Tietze transformations.
///
/// Each step is one of: cyclic reduction of a relator, deletion of an empty
/// or repeated relator, elimination of a generator occurring exactly once in
/// some relator, or shortening a relator by a subword making up more than
/// half of another relator. Every step preserves the isomorphism type, so
/// reaching an empty relator set certifies a free group. Surviving
/// generators are renamed `g1..gk`.
pub fn tietze_simplify(p: &GroupPresentation, budget: usize) -> Simplified {
    let mut gens = p.generators();
    let mut rels: Vec<Word> = p.relators.clone();
    let mut steps = 0usize;

    let certification = loop {
        rels = normalize(&rels);
        if rels.is_empty() {
            break if gens == 0 {
                Certification::Trivial
            } else {
                Certification::Free { rank: gens }
            };
        }
        if steps >= budget {
            break Certification::Inconclusive;
        }
        steps += 1;
        if let Some((ri, g)) = find_elimination(&rels, gens) {
            rels = eliminate(&rels, ri, g);
            gens -= 1;
            continue;
        }
        if let Some(next) = shorten(&rels) {
            rels = next;
            continue;
        }
        if gens == 1 {
            if let Some(next) = one_generator(&rels) {
                rels = next;
                continue;
            }
        }
        break Certification::Inconclusive;
    };

    let mut rels: Vec<Word> = rels.iter().map(Word::canonical).collect();
    rels.sort_by_key(|r| (r.len(), r.sort_key()));
    Simplified {
        presentation: GroupPresentation::new(gens, rels),
        certification,
        steps,
    }
}

fn normalize(rels: &[Word]) -> Vec<Word> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rels {
        let c = r.cyclically_reduced();
        if c.is_empty() {
            continue;
        }
        if seen.insert(c.canonical()) {
            out.push(c);
        }
    }
    out
}

/// Shortest relator containing some generator exactly once.
fn find_elimination(rels: &[Word], gens: usize) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..rels.len()).collect();
    order.sort_by_key(|&i| (rels[i].len(), i));
    order.into_iter().find_map(|i| {
        (0..gens)
            .find(|&g| rels[i].occurrences(g) == 1)
            .map(|g| (i, g))
    })
}

/// Uses relator `ri` to express generator `g` in the others, substitutes it
/// everywhere and renumbers the generators above `g`.
fn eliminate(rels: &[Word], ri: usize, g: usize) -> Vec<Word> {
    let r = &rels[ri];
    let pos =
        r.0.iter()
            .position(|&l| Word::generator_of(l) == g)
            .expect("generator occurs");
    let rot = r.rotated(pos);
    let positive = rot.0[0] > 0;
    // rot = x^e w, so x^e = w^-1
    let rest = Word(rot.0[1..].to_vec()).inverse();
    let image = if positive { rest } else { rest.inverse() };
    let renumber = |l: i32| {
        let k = Word::generator_of(l);
        if k > g {
            l - l.signum()
        } else {
            l
        }
    };
    rels.iter()
        .enumerate()
        .filter(|&(i, _)| i != ri)
        .map(|(_, w)| {
            Word(
                w.substitute(g, &image)
                    .0
                    .into_iter()
                    .map(renumber)
                    .collect(),
            )
        })
        .collect()
}

fn common_prefix(a: &[i32], b: &[i32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Replaces a cyclic subword `w` of one relator by `c^-1` where `w c` is a
/// cyclic conjugate of another relator (or its inverse) and `|w| > |c|`.
fn shorten(rels: &[Word]) -> Option<Vec<Word>> {
    for (i, r) in rels.iter().enumerate() {
        for (j, s) in rels.iter().enumerate() {
            if i == j || s.len() > 2 * r.len() {
                continue;
            }
            for k in 0..r.len() {
                let rr = r.rotated(k);
                for base in [s.clone(), s.inverse()] {
                    for m in 0..s.len() {
                        let ss = base.rotated(m);
                        let l = common_prefix(&rr.0, &ss.0).min(r.len());
                        if 2 * l > s.len() {
                            let c = Word(ss.0[l..].to_vec()).inverse();
                            let new = c.concat(&Word(rr.0[l..].to_vec())).cyclically_reduced();
                            if new.len() < r.len() {
                                let mut out = rels.to_vec();
                                out[i] = new;
                                return Some(out);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// With one generator every cyclically reduced relator is a power of it;
/// collapses them to a single power by the gcd of the exponents.
fn one_generator(rels: &[Word]) -> Option<Vec<Word>> {
    if rels.len() < 2 {
        return None;
    }
    let d = rels
        .iter()
        .fold(0i64, |acc, r| num_integer::gcd(acc, r.exponent_sums(1)[0]));
    Some(if d == 0 {
        Vec::new()
    } else {
        vec![Word(vec![1; d as usize])]
    })
}
