//! Well-formedness and the decidable part of the multisection condition.
//!
//! A subcollection of `k` families must itself be a diagram of a
//! multisection of a connected sum of copies of `S^1 x S^k`. Full
//! recognition is out of reach, so each subcollection gets one of:
//!
//! * `fail`: a concrete obstruction (torsion in H1, or a pairwise invariant
//!   factor outside `{0, 1}`), with the factors as witness;
//! * `free-certified`: Tietze moves reduced the fundamental group to a free
//!   group;
//! * `pass-necessary`: a pair whose intersection matrix passes but whose
//!   group was not certified free;
//! * `inconclusive`: a larger subcollection with torsion-free H1 whose
//!   group was not certified.
//!
//! In n-section mode the subcollections are those with `2 <= |S| <= n-1`;
//! the full collection describes the manifold itself and is unconstrained.
//! In cyclic mode only consecutive pairs are constrained.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::diagram::{FamilySet, Mode, MultisectionDiagram};
use crate::group::{presentation_text, tietze_simplify, Certification};
use crate::invariants::{h1_of, pi1_of};
use crate::matrix::{rank, snf, IntegerMatrix};
use crate::surface::symplectic_form;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    PassNecessary,
    Fail,
    FreeCertified,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::PassNecessary => "pass-necessary",
            Verdict::Fail => "fail",
            Verdict::FreeCertified => "free-certified",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: usize,
    pub verdict: Verdict,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Smith invariant factors of the `g x g` algebraic intersection matrix
    /// of a pair; a factor other than 0 or 1 is torsion in H1.
    IntersectionFactors { factors: Vec<u64> },
    /// Torsion invariant factors of H1 of the subcollection.
    Torsion { factors: Vec<u64> },
    /// The simplified fundamental group presentation.
    Presentation {
        generators: Vec<String>,
        relators: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubcollectionReport {
    pub families: FamilySet,
    pub verdict: Verdict,
    pub witness: Witness,
}

/// JSON schema: `{wellformed, ok, families: [{family, verdict, problems}],
/// subcollections: [{families, verdict, witness: {kind, ...}}]}`; `ok` is
/// false exactly when the diagram is malformed or some verdict is `fail`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub wellformed: bool,
    pub ok: bool,
    pub families: Vec<FamilyReport>,
    pub subcollections: Vec<SubcollectionReport>,
}

impl ValidityReport {
    pub fn has_fail(&self) -> bool {
        !self.ok
    }

    pub fn fails(&self) -> impl Iterator<Item = &SubcollectionReport> {
        self.subcollections
            .iter()
            .filter(|s| s.verdict == Verdict::Fail)
    }

    pub fn verdict_of(&self, s: FamilySet) -> Option<Verdict> {
        self.subcollections
            .iter()
            .find(|r| r.families == s)
            .map(|r| r.verdict)
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "wellformed: {}", self.wellformed)?;
        for fam in &self.families {
            writeln!(f, "family {}: {}", fam.family, fam.verdict)?;
            for p in &fam.problems {
                writeln!(f, "  {p}")?;
            }
        }
        for s in &self.subcollections {
            let w = match &s.witness {
                Witness::IntersectionFactors { factors } => {
                    format!("intersection factors {factors:?}")
                }
                Witness::Torsion { factors } => format!("H1 torsion {factors:?}"),
                Witness::Presentation {
                    generators,
                    relators,
                } => {
                    presentation_text(generators, relators)
                }
            };
            writeln!(f, "{}: {} ({w})", s.families, s.verdict)?;
        }
        writeln!(f, "{}", if self.ok { "OK" } else { "FAIL" })
    }
}

/// Per-family checks: embedded curves, pairwise disjoint curves and
/// independent classes.
pub fn family_reports(d: &MultisectionDiagram) -> Vec<FamilyReport> {
    let s = d.surface();
    (0..d.n())
        .map(|f| {
            let fam = d.family(f);
            let mut problems = Vec::new();
            for (i, c) in fam.iter().enumerate() {
                if let Ok(Some((a, b))) = s.first_self_crossing(c) {
                    problems.push(format!(
                        "curve {} is not embedded: chords {} and {} cross",
                        i + 1,
                        a + 1,
                        b + 1
                    ));
                }
            }
            for i in 0..fam.len() {
                for j in i + 1..fam.len() {
                    let x = s.intersections(&fam[i], &fam[j]).expect("checked curves");
                    if x.geometric > 0 {
                        problems.push(format!(
                            "curves {} and {} cross {} times",
                            i + 1,
                            j + 1,
                            x.geometric
                        ));
                    }
                }
            }
            let r = rank(&d.class_matrix(FamilySet::from_indices([f])));
            if r < d.genus() {
                problems.push(format!("classes have rank {r}, expected {}", d.genus()));
            }
            let verdict = if problems.is_empty() {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            FamilyReport {
                family: f + 1,
                verdict,
                problems,
            }
        })
        .collect()
}

/// The well-formedness part of the report only.
pub fn wellformed(d: &MultisectionDiagram) -> ValidityReport {
    let families = family_reports(d);
    let ok = families.iter().all(|f| f.verdict == Verdict::Pass);
    ValidityReport {
        wellformed: ok,
        ok,
        families,
        subcollections: Vec::new(),
    }
}

/// `g x g` matrix of algebraic intersections between two families.
pub fn intersection_matrix(d: &MultisectionDiagram, a: usize, b: usize) -> IntegerMatrix {
    let ca = d.classes(FamilySet::from_indices([a]));
    let cb = d.classes(FamilySet::from_indices([b]));
    let rows: Vec<Vec<i64>> = ca
        .iter()
        .map(|u| {
            cb.iter()
                .map(|v| symplectic_form(u, v).expect("same genus"))
                .collect()
        })
        .collect();
    IntegerMatrix::from_rows(&rows, d.genus())
}

fn to_u64(v: &num_bigint::BigInt) -> u64 {
    v.to_u64().expect("invariant factor fits in u64")
}

/// Subcollections checked by [`validate`].
pub fn constrained_subcollections(d: &MultisectionDiagram) -> Vec<FamilySet> {
    let n = d.n();
    match d.mode() {
        Mode::NSection => FamilySet::subsets_with(n, |s| s.len() >= 2 && s.len() < n),
        Mode::Cyclic => d.constrained_pairs(),
    }
}

fn check_subcollection(
    d: &MultisectionDiagram,
    s: FamilySet,
    budget: usize,
) -> SubcollectionReport {
    if s.len() == 2 {
        let mut it = s.indices();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        let f = snf(&intersection_matrix(d, a, b));
        let mut factors: Vec<u64> = f.factors.iter().map(to_u64).collect();
        factors.extend(std::iter::repeat_n(0, f.zero_factors));
        if f.factors.iter().any(|x| !x.is_one() && !x.is_zero()) {
            return SubcollectionReport {
                families: s,
                verdict: Verdict::Fail,
                witness: Witness::IntersectionFactors { factors },
            };
        }
    }
    let torsion: Vec<u64> = h1_of(d, s).torsion().iter().map(to_u64).collect();
    if !torsion.is_empty() {
        return SubcollectionReport {
            families: s,
            verdict: Verdict::Fail,
            witness: Witness::Torsion { factors: torsion },
        };
    }
    let simplified = tietze_simplify(&pi1_of(d, s), budget);
    let verdict = match simplified.certification {
        Certification::Trivial | Certification::Free { .. } => Verdict::FreeCertified,
        Certification::Inconclusive if s.len() == 2 => Verdict::PassNecessary,
        Certification::Inconclusive => Verdict::Inconclusive,
    };
    let p = &simplified.presentation;
    SubcollectionReport {
        families: s,
        verdict,
        witness: Witness::Presentation {
            generators: p.names().to_vec(),
            relators: p.relator_strings(),
        },
    }
}

/// Well-formedness followed by the subcollection checks.
pub fn validate(d: &MultisectionDiagram, budget: usize) -> ValidityReport {
    let mut report = wellformed(d);
    if !report.wellformed {
        return report;
    }
    report.subcollections = constrained_subcollections(d)
        .into_iter()
        .map(|s| check_subcollection(d, s, budget))
        .collect();
    report.ok = report
        .subcollections
        .iter()
        .all(|s| s.verdict != Verdict::Fail);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Curve;

    fn curve(s: &str) -> Curve {
        Curve::new(s.split_whitespace().map(|t| t.parse().unwrap()).collect()).unwrap()
    }

    fn genus1(fams: &[&str]) -> MultisectionDiagram {
        MultisectionDiagram::new(
            1,
            Mode::NSection,
            fams.iter().map(|c| vec![curve(c)]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn genus_zero_is_vacuous() {
        let r = validate(&MultisectionDiagram::empty(4, Mode::NSection).unwrap(), 100);
        assert!(r.ok);
        assert!(r
            .subcollections
            .iter()
            .all(|s| s.verdict == Verdict::FreeCertified));
    }

    #[test]
    fn lens_pair_fails_with_factor_two() {
        // slopes (0,1) and (2,1): |det| = 2
        let d = genus1(&["x1+0", "y1+0 x1+1 y1+1", "x1+2"]);
        let r = validate(&d, 100);
        assert!(r.wellformed);
        assert!(!r.ok);
        let fail = r.fails().next().unwrap();
        assert_eq!(fail.families.to_string(), "{1,2}");
        assert_eq!(
            fail.witness,
            Witness::IntersectionFactors { factors: vec![2] }
        );
    }

    #[test]
    fn dependent_family_fails() {
        let d = MultisectionDiagram::new(
            2,
            Mode::NSection,
            vec![
                vec![curve("x1+0"), curve("x1+1")],
                vec![curve("x2+0"), curve("y2+0")],
            ],
        )
        .unwrap();
        let r = wellformed(&d);
        assert!(!r.wellformed);
        assert!(r.families[0].problems.iter().any(|p| p.contains("rank 1")));
    }

    #[test]
    fn crossing_family_fails() {
        let d = MultisectionDiagram::new(
            2,
            Mode::NSection,
            vec![
                vec![curve("x1+0"), curve("y1+0")],
                vec![curve("x2+0"), curve("x1+1")],
            ],
        )
        .unwrap();
        let r = wellformed(&d);
        assert!(r.families[0].problems.iter().any(|p| p.contains("cross")));
        assert_eq!(r.families[1].verdict, Verdict::Pass);
    }

    #[test]
    fn non_embedded_curve_reports_chords() {
        let d = genus1(&["x1+0 x1+1", "y1+0"]);
        let r = wellformed(&d);
        assert!(r.families[0].problems[0].contains("not embedded"));
    }

    #[test]
    fn sphere_pair_passes() {
        let d = genus1(&["x1+0", "y1+0", "y1+1"]);
        let r = validate(&d, 100);
        assert!(r.ok, "{r}");
        assert_eq!(
            r.verdict_of("{1,2}".parse().unwrap()),
            Some(Verdict::FreeCertified)
        );
    }
}
