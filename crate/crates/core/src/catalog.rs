//! Standard diagrams.
//!
//! Genus-1 diagrams are built from the two slopes `x1+` and `y1+`, which
//! meet once. The genus-3 quadrisection of `S^2 x S^3` is a fixed asset;
//! the spun lens space diagrams `order_p` follow a rotational pattern over
//! `n` handles.

use std::fmt;

use thiserror::Error;

use crate::diagram::{DiagramError, FamilySet, Mode, MultisectionDiagram};
use crate::format;
use crate::surface::{CrossingToken, Curve, Edge, Sign};

const S2_X_S3: &str = include_str!("../assets/s2_x_s3.msd");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("{0}")]
    Parameters(String),
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
}

fn single(edge: Edge, sign: Sign, slot: i64) -> Curve {
    Curve::new(vec![CrossingToken::new(edge, sign, slot)]).expect("nonempty")
}

/// Genus-1 diagram: family `i` is a `x1+` curve when `i` is in `first`, a
/// `y1+` curve otherwise.
pub fn two_slope_torus(
    n: usize,
    mode: Mode,
    first: FamilySet,
) -> Result<MultisectionDiagram, DiagramError> {
    let families = (0..n)
        .map(|i| {
            let edge = if first.contains(i) {
                Edge::x(1)
            } else {
                Edge::y(1)
            };
            vec![single(edge, Sign::Pos, i as i64)]
        })
        .collect();
    MultisectionDiagram::new(1, mode, families)
}

fn check_n(n: usize) -> Result<(), CatalogError> {
    if n < 2 {
        return Err(CatalogError::Parameters(format!(
            "need at least two families, got {n}"
        )));
    }
    Ok(())
}

/// The genus-0 multisection of `S^{n+1}`.
pub fn genus0(n: usize) -> Result<MultisectionDiagram, CatalogError> {
    check_n(n)?;
    Ok(MultisectionDiagram::empty(n, Mode::NSection)?)
}

/// Genus-1 `n`-section of `S^{n+1}`: families `1..k` parallel to one slope,
/// the others parallel to a slope meeting it once.
pub fn sphere_genus1(n: usize, k: usize) -> Result<MultisectionDiagram, CatalogError> {
    check_n(n)?;
    if k == 0 || k >= n {
        return Err(CatalogError::Parameters(format!(
            "k must lie in 1..{}, got {k}",
            n - 1
        )));
    }
    Ok(two_slope_torus(
        n,
        Mode::NSection,
        FamilySet::from_indices(0..k),
    )?)
}

/// Genus-1 `n`-section of `S^1 x S^n`: `n` parallel curves.
pub fn s1_x_sn(n: usize) -> Result<MultisectionDiagram, CatalogError> {
    check_n(n)?;
    Ok(two_slope_torus(n, Mode::NSection, FamilySet::full(n))?)
}

/// Genus-3 quadrisection of `S^2 x S^3`.
pub fn s2_x_s3() -> MultisectionDiagram {
    format::parse(S2_X_S3).expect("bundled asset parses")
}

/// Genus-`n` `n`-section whose manifold has fundamental group of order `p`.
///
/// Family `t` is family 1 rotated by `t` handles. Family 1 (0-based handles
/// `h`, indices mod `n`) has `n - 2` bars `x_k+ y_k+ x_{k+1}- y_k-` for
/// `k < n-2`, the curve `y_{n-1}+`, and a winding curve crossing `y_0`,
/// then `x_1` `p` times, then `y_1 .. y_{n-1}`. Supported for
/// `n` in {4, 5} and `p >= 2`.
pub fn order_p(n: usize, p: usize) -> Result<MultisectionDiagram, CatalogError> {
    if !(4..=5).contains(&n) || p < 2 {
        return Err(CatalogError::Parameters(format!(
            "order_p is available for n in {{4,5}} and p >= 2, got n={n}, p={p}"
        )));
    }
    let families = (0..n).map(|t| order_p_family(n, p, t)).collect();
    Ok(MultisectionDiagram::new(n, Mode::NSection, families)?)
}

fn order_p_family(n: usize, p: usize, t: usize) -> Vec<Curve> {
    // slot blocks keep the families apart on shared edges
    let base = (t * (p + 10)) as i64;
    let x = |h: usize| Edge::x((h + t) % n + 1);
    let y = |h: usize| Edge::y((h + t) % n + 1);
    let tok = |e: Edge, s: Sign, slot: i64| CrossingToken::new(e, s, base + slot);
    let mut fam = Vec::with_capacity(n);
    for k in 0..n - 2 {
        // on x_k the bar sits after the winding curve's crossings
        let x_plus = match k {
            0 => 0,
            1 => p as i64 + 1,
            _ => 1,
        };
        fam.push(
            Curve::new(vec![
                tok(x(k), Sign::Pos, x_plus),
                tok(y(k), Sign::Pos, 2),
                tok(x(k + 1), Sign::Neg, 0),
                tok(y(k), Sign::Neg, 0),
            ])
            .expect("nonempty"),
        );
    }
    fam.push(Curve::new(vec![tok(y(n - 1), Sign::Pos, 1)]).expect("nonempty"));
    let mut w = vec![tok(y(0), Sign::Pos, 1)];
    w.extend((1..=p as i64).map(|s| tok(x(1), Sign::Neg, s)));
    w.extend((1..n - 1).map(|h| tok(y(h), Sign::Pos, 1)));
    w.push(tok(y(n - 1), Sign::Pos, 0));
    fam.push(Curve::new(w).expect("nonempty"));
    fam
}

/// Genus-1 cyclic quadrisection of `S^4`: two adjacent groups.
pub fn in_s4_genus1() -> MultisectionDiagram {
    two_slope_torus(4, Mode::Cyclic, FamilySet::from_indices([0, 1])).expect("valid")
}

/// Genus-1 cyclic quadrisection of `S^2 x S^2`: alternating slopes.
pub fn in_s2xs2_genus1() -> MultisectionDiagram {
    two_slope_torus(4, Mode::Cyclic, FamilySet::from_indices([0, 2])).expect("valid")
}

/// The genus-3 diagram drawn rightmost among the quadrisections of
/// `S^2 x S^2`: the `S^2 x S^3` curve system, read either as a
/// quadrisection of a 5-manifold or, with the families in drawn order, as a
/// cyclic quadrisection of a 4-manifold.
pub fn fig8_rightmost(mode: Mode) -> MultisectionDiagram {
    s2_x_s3().with_mode(mode)
}

/// A catalog entry with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Genus0(usize),
    SphereGenus1(usize, usize),
    S1xSn(usize),
    S2xS3,
    OrderP(usize, usize),
    InS4Genus1,
    InS2xS2Genus1,
    Fig8Rightmost(Mode),
}

impl Entry {
    pub fn build(&self) -> Result<MultisectionDiagram, CatalogError> {
        match *self {
            Entry::Genus0(n) => genus0(n),
            Entry::SphereGenus1(n, k) => sphere_genus1(n, k),
            Entry::S1xSn(n) => s1_x_sn(n),
            Entry::S2xS3 => Ok(s2_x_s3()),
            Entry::OrderP(n, p) => order_p(n, p),
            Entry::InS4Genus1 => Ok(in_s4_genus1()),
            Entry::InS2xS2Genus1 => Ok(in_s2xs2_genus1()),
            Entry::Fig8Rightmost(m) => Ok(fig8_rightmost(m)),
        }
    }

    /// File name used for the shipped `.msd` copy.
    pub fn file_stem(&self) -> String {
        match self {
            Entry::Genus0(n) => format!("genus0_{n}"),
            Entry::SphereGenus1(n, k) => format!("sphere_genus1_{n}_{k}"),
            Entry::S1xSn(n) => format!("s1_x_sn_{n}"),
            Entry::S2xS3 => "s2_x_s3".into(),
            Entry::OrderP(n, p) => format!("order_p_{n}_{p}"),
            Entry::InS4Genus1 => "in_s4_genus1".into(),
            Entry::InS2xS2Genus1 => "in_s2xs2_genus1".into(),
            Entry::Fig8Rightmost(m) => format!("fig8_rightmost_{m}"),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Genus0(n) => write!(f, "genus0({n})"),
            Entry::SphereGenus1(n, k) => write!(f, "sphere_genus1({n},{k})"),
            Entry::S1xSn(n) => write!(f, "s1_x_sn({n})"),
            Entry::S2xS3 => write!(f, "s2_x_s3()"),
            Entry::OrderP(n, p) => write!(f, "order_p({n},{p})"),
            Entry::InS4Genus1 => write!(f, "in_s4_genus1()"),
            Entry::InS2xS2Genus1 => write!(f, "in_s2xs2_genus1()"),
            Entry::Fig8Rightmost(m) => write!(f, "fig8_rightmost({m})"),
        }
    }
}

/// Parses `name(arg,...)` or `name arg ...`.
pub fn parse_entry(spec: &str) -> Result<Entry, CatalogError> {
    let spec = spec.trim();
    let (name, args) = match spec.find('(') {
        Some(i) => (&spec[..i], spec[i + 1..].trim_end_matches(')')),
        None => spec.split_once(char::is_whitespace).unwrap_or((spec, "")),
    };
    let args: Vec<&str> = args
        .split([',', ' '])
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .collect();
    let num = |i: usize| -> Result<usize, CatalogError> {
        let a = args.get(i).ok_or_else(|| {
            CatalogError::Parameters(format!("`{name}` needs {} arguments", i + 1))
        })?;
        a.parse()
            .map_err(|_| CatalogError::Parameters(format!("`{a}` is not a number")))
    };
    let arity = |k: usize| -> Result<(), CatalogError> {
        if args.len() == k {
            Ok(())
        } else {
            Err(CatalogError::Parameters(format!(
                "`{name}` takes {k} arguments, got {}",
                args.len()
            )))
        }
    };
    let entry = match name.trim() {
        "genus0" => {
            arity(1)?;
            Entry::Genus0(num(0)?)
        }
        "sphere_genus1" => {
            arity(2)?;
            Entry::SphereGenus1(num(0)?, num(1)?)
        }
        "s1_x_sn" => {
            arity(1)?;
            Entry::S1xSn(num(0)?)
        }
        "s2_x_s3" => {
            arity(0)?;
            Entry::S2xS3
        }
        "order_p" => {
            arity(2)?;
            Entry::OrderP(num(0)?, num(1)?)
        }
        "in_s4_genus1" => {
            arity(0)?;
            Entry::InS4Genus1
        }
        "in_s2xs2_genus1" => {
            arity(0)?;
            Entry::InS2xS2Genus1
        }
        "fig8_rightmost" => {
            let mode = match args.as_slice() {
                [] => Mode::NSection,
                [m] => m
                    .parse()
                    .map_err(|_| CatalogError::Parameters(format!("unknown mode `{m}`")))?,
                _ => {
                    return Err(CatalogError::Parameters(
                        "`fig8_rightmost` takes at most one argument".into(),
                    ))
                }
            };
            Entry::Fig8Rightmost(mode)
        }
        other => return Err(CatalogError::Unknown(other.to_string())),
    };
    Ok(entry)
}

/// Every generator with the parameters used in examples and tests.
pub fn standard_entries() -> Vec<Entry> {
    vec![
        Entry::Genus0(4),
        Entry::SphereGenus1(4, 1),
        Entry::SphereGenus1(4, 2),
        Entry::SphereGenus1(5, 1),
        Entry::SphereGenus1(5, 2),
        Entry::S1xSn(4),
        Entry::S1xSn(5),
        Entry::S2xS3,
        Entry::OrderP(4, 6),
        Entry::OrderP(5, 3),
        Entry::InS4Genus1,
        Entry::InS2xS2Genus1,
        Entry::Fig8Rightmost(Mode::NSection),
        Entry::Fig8Rightmost(Mode::Cyclic),
    ]
}

/// Usage lines for `catalog list`.
pub fn descriptions() -> Vec<(&'static str, &'static str)> {
    vec![
        ("genus0(n)", "genus-0 n-section of S^(n+1), n >= 2"),
        (
            "sphere_genus1(n,k)",
            "genus-1 n-section of S^(n+1), groups of k and n-k parallel curves",
        ),
        ("s1_x_sn(n)", "genus-1 n-section of S^1 x S^n"),
        ("s2_x_s3()", "genus-3 quadrisection of S^2 x S^3"),
        (
            "order_p(n,p)",
            "genus-n n-section with fundamental group of order p, n in {4,5}, p >= 2",
        ),
        ("in_s4_genus1()", "genus-1 cyclic quadrisection of S^4"),
        (
            "in_s2xs2_genus1()",
            "genus-1 cyclic quadrisection of S^2 x S^2",
        ),
        (
            "fig8_rightmost(mode)",
            "genus-3 quadrisection diagram read in nsection or cyclic mode",
        ),
    ]
}
