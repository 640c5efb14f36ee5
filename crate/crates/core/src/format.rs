//! The `.msd` text format.
//!
//! ```text
//! msd 1
//! mode nsection            # or: cyclic
//! genus 1
//! families 2
//! curve 1 : x1+0
//! curve 2 : y1+0
//! ```
//!
//! `#` starts a comment. Header lines come first, in this order. Curves are
//! listed per family (1-based) in any interleaving; within a family they
//! keep their input order. Serialization is canonical: slots renumbered
//! `0..m-1` per edge, families in index order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::diagram::{DiagramError, Mode, MultisectionDiagram};
use crate::surface::{CrossingToken, Curve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Semantic { line: usize, source: DiagramError },
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

struct Line<'a> {
    number: usize,
    /// Content before any comment.
    text: &'a str,
}

impl Line<'_> {
    /// 1-based column of a subslice of `text`.
    fn column_of(&self, part: &str) -> usize {
        part.as_ptr() as usize - self.text.as_ptr() as usize + 1
    }
}

fn header<'a>(
    lines: &mut impl Iterator<Item = Line<'a>>,
    key: &str,
    last_line: usize,
) -> Result<(usize, usize, &'a str), ParseError> {
    let line = lines
        .next()
        .ok_or_else(|| ParseError::at(last_line + 1, 1, format!("missing `{key}` line")))?;
    let mut words = line.text.split_whitespace();
    let k = words.next().unwrap_or("");
    if k != key {
        return Err(ParseError::at(
            line.number,
            line.column_of(k),
            format!("expected `{key}`, found `{k}`"),
        ));
    }
    let v = words.next().ok_or_else(|| {
        ParseError::at(
            line.number,
            line.text.trim_end().len() + 1,
            format!("`{key}` needs a value"),
        )
    })?;
    if let Some(extra) = words.next() {
        return Err(ParseError::at(
            line.number,
            line.column_of(extra),
            format!("unexpected `{extra}`"),
        ));
    }
    Ok((line.number, line.column_of(v), v))
}

fn number(line: usize, col: usize, v: &str) -> Result<usize, ParseError> {
    v.parse()
        .map_err(|_| ParseError::at(line, col, format!("`{v}` is not a non-negative integer")))
}

pub fn parse(text: &str) -> Result<MultisectionDiagram, ParseError> {
    let all: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            text: l.split('#').next().unwrap_or(""),
        })
        .filter(|l| !l.text.trim().is_empty())
        .collect();
    let last = text.lines().count();
    let mut it = all.into_iter();

    let (ln, col, v) = header(&mut it, "msd", last)?;
    if v != "1" {
        return Err(ParseError::at(
            ln,
            col,
            format!("unsupported format version `{v}`"),
        ));
    }
    let (ln, col, v) = header(&mut it, "mode", last)?;
    let mode: Mode = v.parse().map_err(|_| {
        ParseError::at(
            ln,
            col,
            format!("mode must be `nsection` or `cyclic`, found `{v}`"),
        )
    })?;
    let (ln, col, v) = header(&mut it, "genus", last)?;
    let genus = number(ln, col, v)?;
    let (ln_fam, col, v) = header(&mut it, "families", last)?;
    let n = number(ln_fam, col, v)?;
    if n > crate::diagram::MAX_FAMILIES {
        return Err(ParseError::Semantic {
            line: ln_fam,
            source: DiagramError::TooManyFamilies(n),
        });
    }

    let mut families: Vec<Vec<(usize, Curve)>> = vec![Vec::new(); n];
    for line in it {
        let rest = line.text.trim_start();
        let Some(after) = rest.strip_prefix("curve") else {
            let word = rest.split_whitespace().next().unwrap_or("");
            return Err(ParseError::at(
                line.number,
                line.column_of(word),
                format!("expected `curve`, found `{word}`"),
            ));
        };
        let Some((fam_part, tokens_part)) = after.split_once(':') else {
            return Err(ParseError::at(
                line.number,
                line.column_of(rest),
                "curve line needs `:`",
            ));
        };
        let fam_str = fam_part.trim();
        let fam_col = if fam_str.is_empty() {
            line.column_of(fam_part)
        } else {
            line.column_of(fam_str)
        };
        let f: usize = fam_str.parse().map_err(|_| {
            ParseError::at(
                line.number,
                fam_col,
                format!("bad family index `{fam_str}`"),
            )
        })?;
        if f == 0 || f > n {
            return Err(ParseError::at(
                line.number,
                fam_col,
                format!("family {f} outside 1..{n}"),
            ));
        }
        let mut tokens = Vec::new();
        for word in tokens_part.split_whitespace() {
            let t: CrossingToken = word.parse().map_err(|_| {
                ParseError::at(
                    line.number,
                    line.column_of(word),
                    format!("bad token `{word}`"),
                )
            })?;
            if t.edge.handle > genus {
                return Err(ParseError::at(
                    line.number,
                    line.column_of(word),
                    format!("edge {} does not exist on a genus-{genus} surface", t.edge),
                ));
            }
            tokens.push(t);
        }
        let curve = Curve::new(tokens).map_err(|_| {
            ParseError::at(
                line.number,
                line.column_of(tokens_part),
                "curve has no tokens",
            )
        })?;
        families[f - 1].push((line.number, curve));
    }

    let mut seen = std::collections::HashSet::new();
    for fam in &families {
        for (ln, c) in fam {
            for t in c.tokens() {
                if !seen.insert((t.edge, t.slot)) {
                    return Err(ParseError::Semantic {
                        line: *ln,
                        source: DiagramError::DuplicateSlot {
                            edge: t.edge,
                            slot: t.slot,
                        },
                    });
                }
            }
        }
    }
    for (i, fam) in families.iter().enumerate() {
        if fam.len() != genus {
            let line = fam.last().map_or(ln_fam, |(l, _)| *l);
            return Err(ParseError::Semantic {
                line,
                source: DiagramError::FamilySize {
                    family: i + 1,
                    found: fam.len(),
                    genus,
                },
            });
        }
    }
    let families = families
        .into_iter()
        .map(|f| f.into_iter().map(|(_, c)| c).collect())
        .collect();
    MultisectionDiagram::new(genus, mode, families).map_err(|source| ParseError::Semantic {
        line: ln_fam,
        source,
    })
}

pub fn serialize(d: &MultisectionDiagram) -> String {
    let d = d.renormalized();
    let mut out = String::new();
    writeln!(out, "msd 1").unwrap();
    writeln!(out, "mode {}", d.mode()).unwrap();
    writeln!(out, "genus {}", d.genus()).unwrap();
    writeln!(out, "families {}", d.n()).unwrap();
    for (i, fam) in d.families().iter().enumerate() {
        for c in fam {
            writeln!(out, "curve {} : {}", i + 1, c).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a sample
msd 1
mode nsection
genus 1
families 3
curve 1 : x1+5   # comment
curve 2 : x1+9
curve 3 : y1-2
";

    #[test]
    fn parse_and_serialize() {
        let d = parse(SAMPLE).unwrap();
        assert_eq!(d.n(), 3);
        let text = serialize(&d);
        assert_eq!(
            text,
            "msd 1\nmode nsection\ngenus 1\nfamilies 3\ncurve 1 : x1+0\ncurve 2 : x1+1\ncurve 3 : y1-0\n"
        );
        assert_eq!(parse(&text).unwrap(), d.renormalized());
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn genus_zero() {
        let d = parse("msd 1\nmode nsection\ngenus 0\nfamilies 4\n").unwrap();
        assert_eq!(d.genus(), 0);
        assert_eq!(d.n(), 4);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let bad = SAMPLE.replace("y1-2", "y1*2");
        match parse(&bad) {
            Err(ParseError::Syntax { line, column, .. }) => {
                assert_eq!(line, 8);
                assert_eq!(column, 11);
            }
            other => panic!("{other:?}"),
        }
        let bad = SAMPLE.replace("mode nsection", "mode other");
        assert!(matches!(
            parse(&bad),
            Err(ParseError::Syntax { line: 3, .. })
        ));
        let bad = SAMPLE.replace("x1+9", "x2+9");
        assert!(matches!(
            parse(&bad),
            Err(ParseError::Syntax {
                line: 7,
                column: 11,
                ..
            })
        ));
        assert!(matches!(
            parse("msd 1\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn semantic_errors() {
        let bad = SAMPLE.replace("x1+9", "x1+5");
        assert!(matches!(
            parse(&bad),
            Err(ParseError::Semantic {
                line: 7,
                source: DiagramError::DuplicateSlot { .. }
            })
        ));
        let bad = SAMPLE.replace("curve 3 : y1-2\n", "");
        assert!(matches!(
            parse(&bad),
            Err(ParseError::Semantic {
                source: DiagramError::FamilySize {
                    family: 3,
                    found: 0,
                    ..
                },
                ..
            })
        ));
    }
}
