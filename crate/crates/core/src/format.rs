//! The `act 1` text format.
//!
//! ```text
//! act 1
//! colours <n>
//! vertices <N>
//! arc <tail> <head> <colour>              # N(N-1)/2 lines
//! bag <bagIndex> <e1> <e2> ...            # optional bag metadata
//! vmap <vertexId> <bagIndex> <copyIndex>  # one per vertex when bags are present
//! ```
//!
//! `#` starts a comment. Serialization is canonical: arcs ordered by
//! `(min id, max id)`, then bags by index, then vmap lines by vertex id.

use std::fmt::Write as _;

use itertools::Itertools;
use thiserror::Error;

use crate::construction::{BagLayout, ConstructionError, Subset};
use crate::tournament::{Arc, ColouredTournament, ModelError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("expected {expected} arcs, found {found}")]
    WrongArcCount { expected: usize, found: usize },
    #[error("inconsistent header: {0}")]
    Header(String),
    #[error("inconsistent bag metadata: {0}")]
    Layout(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn serialize(t: &ColouredTournament, layout: Option<&BagLayout>) -> String {
    let mut out = String::new();
    out.push_str("act 1\n");
    writeln!(out, "colours {}", t.colour_count()).unwrap();
    writeln!(out, "vertices {}", t.vertex_count()).unwrap();
    for arc in t.arcs() {
        writeln!(out, "arc {} {} {}", arc.tail, arc.head, arc.colour).unwrap();
    }
    if let Some(layout) = layout {
        for (i, subset) in layout.family().iter().enumerate() {
            if subset.is_empty() {
                writeln!(out, "bag {i}").unwrap();
            } else {
                writeln!(out, "bag {i} {}", subset.elements().iter().join(" ")).unwrap();
            }
        }
        for v in 0..layout.vertex_count() {
            writeln!(out, "vmap {v} {} {}", layout.bag_of(v), layout.copy_of(v)).unwrap();
        }
    }
    out
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed { line, message: message.into() }
}

fn numbers<T: std::str::FromStr>(line: usize, tokens: &[&str]) -> Result<Vec<T>, ParseError> {
    tokens
        .iter()
        .map(|tok| tok.parse().map_err(|_| malformed(line, format!("invalid number {tok:?}"))))
        .collect()
}

pub fn parse(text: &str) -> Result<(ColouredTournament, Option<BagLayout>), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty());

    let mut header = |key: &str| -> Result<(usize, u64), ParseError> {
        let (line, toks) = lines.next().ok_or_else(|| ParseError::Header(format!("missing `{key}` line")))?;
        match toks.as_slice() {
            [k, v] if *k == key => Ok((line, v.parse().map_err(|_| malformed(line, format!("invalid {key} value {v:?}")))?)),
            _ => Err(ParseError::Header(format!("line {line}: expected `{key} <value>`"))),
        }
    };
    let (line, version) = header("act")?;
    if version != 1 {
        return Err(malformed(line, format!("unsupported format version {version}")));
    }
    let (line, colours) = header("colours")?;
    let colours = u32::try_from(colours).map_err(|_| malformed(line, "colour count too large"))?;
    let (line, vertices) = header("vertices")?;
    let vertices = usize::try_from(vertices).map_err(|_| malformed(line, "vertex count too large"))?;
    if vertices == 0 {
        return Err(ParseError::Header("vertex count must be at least 1".into()));
    }

    let mut arcs = Vec::new();
    let mut bags: Vec<(usize, usize, Vec<u32>)> = Vec::new();
    let mut vmaps: Vec<(usize, [usize; 3])> = Vec::new();
    for (line, toks) in lines {
        match toks[0] {
            "arc" => {
                let [tail, head, colour]: [u32; 3] = numbers(line, &toks[1..])?
                    .try_into()
                    .map_err(|_| malformed(line, "expected `arc <tail> <head> <colour>`"))?;
                arcs.push(Arc::new(tail, head, colour));
            }
            "bag" => {
                let index = toks.get(1).ok_or_else(|| malformed(line, "expected `bag <index> ...`"))?;
                let index: usize = numbers(line, &[index])?[0];
                bags.push((line, index, numbers(line, &toks[2..])?));
            }
            "vmap" => {
                let fields: [usize; 3] = numbers(line, &toks[1..])?
                    .try_into()
                    .map_err(|_| malformed(line, "expected `vmap <vertex> <bag> <copy>`"))?;
                vmaps.push((line, fields));
            }
            other => return Err(malformed(line, format!("unknown record {other:?}"))),
        }
    }

    let expected = vertices * (vertices - 1) / 2;
    if arcs.len() != expected {
        return Err(ParseError::WrongArcCount { expected, found: arcs.len() });
    }
    let t = ColouredTournament::build(vertices, colours, &arcs)?;
    let layout = parse_layout(&t, bags, vmaps)?;
    Ok((t, layout))
}

fn parse_layout(
    t: &ColouredTournament,
    bags: Vec<(usize, usize, Vec<u32>)>,
    vmaps: Vec<(usize, [usize; 3])>,
) -> Result<Option<BagLayout>, ParseError> {
    if bags.is_empty() {
        if let Some((line, _)) = vmaps.first() {
            return Err(malformed(*line, "vmap without bag records"));
        }
        return Ok(None);
    }
    let mut family = Vec::with_capacity(bags.len());
    for (expected, (line, index, elements)) in bags.into_iter().enumerate() {
        if index != expected {
            return Err(malformed(line, format!("bag index {index}, expected {expected}")));
        }
        if !elements.windows(2).all(|w| w[0] < w[1]) {
            return Err(malformed(line, "bag elements must be strictly ascending"));
        }
        if let Some(&c) = elements.iter().find(|&&c| c == 0 || c >= t.colour_count()) {
            return Err(malformed(line, format!("bag element {c} outside [1, {}]", t.colour_count() - 1)));
        }
        family.push(Subset::new(elements));
    }
    let bag_count = family.len();
    if t.vertex_count() % bag_count != 0 {
        return Err(ParseError::Layout(format!("{} vertices do not split into {bag_count} equal bags", t.vertex_count())));
    }
    let layout = BagLayout::new(family, t.vertex_count() / bag_count).map_err(|e| match e {
        ConstructionError::DuplicateBag(i) => ParseError::Layout(format!("bag {i} repeats an earlier subset")),
        other => ParseError::Layout(other.to_string()),
    })?;
    if vmaps.len() != t.vertex_count() {
        return Err(ParseError::Layout(format!("expected {} vmap records, found {}", t.vertex_count(), vmaps.len())));
    }
    let mut seen = vec![false; t.vertex_count()];
    for (line, [v, bag, copy]) in vmaps {
        if v >= t.vertex_count() || seen[v] {
            return Err(malformed(line, format!("vmap vertex {v} out of range or repeated")));
        }
        seen[v] = true;
        if layout.bag_of(v) != bag || layout.copy_of(v) != copy {
            return Err(malformed(
                line,
                format!("vertex {v} must map to bag {} copy {}", layout.bag_of(v), layout.copy_of(v)),
            ));
        }
    }
    Ok(Some(layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{generate, ConstructionParams};

    #[test]
    fn two_vertex_round_trip() {
        let t = ColouredTournament::build(2, 1, &[Arc::new(1, 0, 1)]).unwrap();
        let text = serialize(&t, None);
        assert_eq!(text, "act 1\ncolours 1\nvertices 2\narc 1 0 1\n");
        let (back, layout) = parse(&text).unwrap();
        assert_eq!(back, t);
        assert!(layout.is_none());
    }

    #[test]
    fn wrong_arc_count() {
        let text = "act 1\ncolours 1\nvertices 3\narc 0 1 1\narc 1 2 1\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err, ParseError::WrongArcCount { expected: 3, found: 2 });
        assert!(err.to_string().starts_with("expected 3 arcs"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\nact 1\n\ncolours 2 # two\nvertices 2\narc 0 1 2 # only arc\n";
        let (t, _) = parse(text).unwrap();
        assert_eq!(t.colour_between(0, 1).0, 2);
    }

    #[test]
    fn layout_round_trip() {
        let (t, layout) = generate(ConstructionParams::new(3, 2, 9)).unwrap();
        let text = serialize(&t, Some(&layout));
        assert!(text.contains("\nbag 0 1\nbag 1 2\nvmap 0 0 1\n"));
        let (back, back_layout) = parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back_layout.as_ref(), Some(&layout));
        assert_eq!(serialize(&back, back_layout.as_ref()), text);
    }

    #[test]
    fn empty_bag_line() {
        let (t, layout) = generate(ConstructionParams::new(1, 2, 0)).unwrap();
        let text = serialize(&t, Some(&layout));
        assert!(text.contains("\nbag 0\n"));
        assert_eq!(parse(&text).unwrap().1, Some(layout));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse(""), Err(ParseError::Header(_))));
        assert!(matches!(parse("act 2\ncolours 1\nvertices 1\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert!(matches!(parse("act 1\nvertices 1\ncolours 1\n"), Err(ParseError::Header(_))));
        assert!(matches!(parse("act 1\ncolours 1\nvertices 2\narc 0 1\n"), Err(ParseError::Malformed { line: 4, .. })));
        assert!(matches!(parse("act 1\ncolours 1\nvertices 2\narc 0 x 1\n"), Err(ParseError::Malformed { .. })));
        assert!(matches!(parse("act 1\ncolours 1\nvertices 2\nedge 0 1 1\n"), Err(ParseError::Malformed { .. })));
        assert!(matches!(
            parse("act 1\ncolours 1\nvertices 2\narc 0 1 1\narc 1 0 1\narc 0 1 1\n"),
            Err(ParseError::WrongArcCount { .. })
        ));
        assert!(matches!(
            parse("act 1\ncolours 1\nvertices 3\narc 0 1 1\narc 1 0 1\narc 0 2 1\n"),
            Err(ParseError::Model(ModelError::DuplicatePair(0, 1)))
        ));
    }

    #[test]
    fn inconsistent_vmap() {
        let (t, layout) = generate(ConstructionParams::new(3, 2, 9)).unwrap();
        let text = serialize(&t, Some(&layout)).replace("vmap 1 0 2", "vmap 1 1 2");
        assert!(matches!(parse(&text), Err(ParseError::Malformed { .. })));
        let text = serialize(&t, Some(&layout)).replace("vmap 3 1 2\n", "");
        assert!(matches!(parse(&text), Err(ParseError::Layout(_))));
    }
}
