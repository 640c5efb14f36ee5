//! Move scripts: one move per line, applied in order.
//!
//! ```text
//! # comment
//! slide 1 1 2 : y1+0 @ (1,1,left) (2,1,right)
//! stab {1,2}
//! instab {1,2}
//! fake
//! csum other.msd
//! csum @sphere_genus1(4,1)
//! middle
//! permute 2 1 3 4
//! ```
//!
//! Indices are 1-based. A slide names family, sliding curve and target
//! curve, the arc tokens, and the two attachments `(curve, token, side)`.
//! Slots are renormalized after every move, so arc tokens refer to the
//! slots of the diagram as serialized at that point. `csum` reads a path
//! relative to the script's directory, or a catalog entry after `@`, and
//! matches families by index.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::catalog::{parse_entry, CatalogError};
use crate::diagram::{FamilySet, MultisectionDiagram};
use crate::format::{parse, ParseError};
use crate::moves::{self, ArcSpec, Attachment, MoveError, Side};
use crate::surface::CrossingToken;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Summand {
    File(PathBuf),
    Catalog(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Slide {
        family: usize,
        a: usize,
        b: usize,
        arc: ArcSpec,
    },
    Stabilize(FamilySet),
    InStabilize(FamilySet),
    Fake,
    ConnectedSum(Summand),
    Middle,
    Permute(Vec<usize>),
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Move { line: usize, source: MoveError },
    #[error("line {line}: cannot read {path}: {source}")]
    Io {
        line: usize,
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {path}: {source}")]
    Summand {
        line: usize,
        path: PathBuf,
        source: ParseError,
    },
    #[error("line {line}: {source}")]
    Catalog { line: usize, source: CatalogError },
}

fn index(s: &str, what: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v - 1),
        _ => Err(format!("bad {what} `{}`", s.trim())),
    }
}

fn attachment(s: &str) -> Result<Attachment, String> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("attachment `{s}` must look like (curve,token,side)"))?;
    let parts: Vec<&str> = inner.split(',').collect();
    let [c, p, side] = parts.as_slice() else {
        return Err(format!("attachment `{s}` needs three fields"));
    };
    Ok(Attachment {
        curve: index(c, "curve")?,
        pos: index(p, "token position")?,
        side: side.trim().parse::<Side>()?,
    })
}

fn parse_slide(rest: &str) -> Result<Move, String> {
    let (head, tail) = rest
        .split_once(':')
        .ok_or("slide needs `:` before the arc")?;
    let (arc_text, ats) = tail
        .split_once('@')
        .ok_or("slide needs `@` before the attachments")?;
    let nums: Vec<&str> = head.split_whitespace().collect();
    let [f, a, b] = nums.as_slice() else {
        return Err("slide takes family, curve and target curve".into());
    };
    let tokens = arc_text
        .split_whitespace()
        .map(|t| t.parse::<CrossingToken>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let ats: Vec<&str> = ats
        .split_inclusive(')')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let [start, end] = ats.as_slice() else {
        return Err("slide needs exactly two attachments".into());
    };
    Ok(Move::Slide {
        family: index(f, "family")?,
        a: index(a, "curve")?,
        b: index(b, "curve")?,
        arc: ArcSpec {
            tokens,
            start: attachment(start)?,
            end: attachment(end)?,
        },
    })
}

fn family_set(s: &str) -> Result<FamilySet, String> {
    s.trim().parse::<FamilySet>().map_err(|e| e.to_string())
}

fn parse_line(text: &str) -> Result<Option<Move>, String> {
    let text = text.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let (cmd, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let no_args = |m: Move| {
        if rest.is_empty() {
            Ok(m)
        } else {
            Err(format!("`{cmd}` takes no arguments"))
        }
    };
    let mv = match cmd {
        "slide" => parse_slide(rest)?,
        "stab" => Move::Stabilize(family_set(rest)?),
        "instab" => Move::InStabilize(family_set(rest)?),
        "fake" => no_args(Move::Fake)?,
        "middle" => no_args(Move::Middle)?,
        "csum" if rest.is_empty() => return Err("csum needs a file or @entry".into()),
        "csum" => Move::ConnectedSum(match rest.strip_prefix('@') {
            Some(e) => Summand::Catalog(e.trim().to_string()),
            None => Summand::File(PathBuf::from(rest)),
        }),
        "permute" => Move::Permute(
            rest.split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| index(s, "permutation entry"))
                .collect::<Result<_, _>>()?,
        ),
        other => return Err(format!("unknown move `{other}`")),
    };
    Ok(Some(mv))
}

/// Parses a script into `(line number, move)` pairs.
pub fn parse_script(text: &str) -> Result<Vec<(usize, Move)>, ScriptError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match parse_line(line) {
            Ok(Some(m)) => out.push((i + 1, m)),
            Ok(None) => {}
            Err(message) => {
                return Err(ScriptError::Syntax {
                    line: i + 1,
                    message,
                })
            }
        }
    }
    Ok(out)
}

fn summand(line: usize, s: &Summand, base: &Path) -> Result<MultisectionDiagram, ScriptError> {
    match s {
        Summand::Catalog(e) => parse_entry(e)
            .and_then(|e| e.build())
            .map_err(|source| ScriptError::Catalog { line, source }),
        Summand::File(p) => {
            let path = base.join(p);
            let text = std::fs::read_to_string(&path).map_err(|source| ScriptError::Io {
                line,
                path: path.clone(),
                source,
            })?;
            parse(&text).map_err(|source| ScriptError::Summand { line, path, source })
        }
    }
}

/// Applies one move; `line` only labels errors and `base` resolves
/// relative summand paths.
pub fn apply_move(
    d: &MultisectionDiagram,
    mv: &Move,
    base: &Path,
    line: usize,
) -> Result<MultisectionDiagram, ScriptError> {
    let out = match mv {
        Move::Slide { family, a, b, arc } => moves::handleslide(d, *family, *a, *b, arc),
        Move::Stabilize(i) => moves::stabilize(d, *i),
        Move::InStabilize(i) => moves::in_stabilize(d, *i),
        Move::Fake => moves::fake_stabilize(d),
        Move::Middle => moves::middle_level(d),
        Move::Permute(sigma) => moves::permute_families(d, sigma),
        Move::ConnectedSum(s) => moves::connected_sum_identity(d, &summand(line, s, base)?),
    };
    out.map_err(|source| ScriptError::Move { line, source })
}

/// Runs a whole script, renormalizing slots after each move.
pub fn run_script(
    d: &MultisectionDiagram,
    text: &str,
    base: &Path,
) -> Result<MultisectionDiagram, ScriptError> {
    let mut cur = d.renormalized();
    for (line, mv) in parse_script(text)? {
        cur = apply_move(&cur, &mv, base, line)?.renormalized();
    }
    Ok(cur)
}
