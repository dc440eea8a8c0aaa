//! Reader for OR-Library non-guillotine cutting files.
//!
//! Layout: instance count; then per instance a piece-count line, a container
//! line `L W`, and one line per piece type. Piece lines hold either
//! `length width value` or `length width copies value`; column conventions
//! differ between mirrors, so the rule applied is reported, not assumed.

use std::fmt;

use crate::format::{BoxFile, InstanceFile, Num};
use packclass::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceRule {
    /// `length width value`
    ThreeColumn,
    /// `length width copies value`, piece repeated `copies` times.
    FourColumn,
}

impl fmt::Display for PieceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PieceRule::ThreeColumn => "3 integers per piece: (length, width, value)",
            PieceRule::FourColumn => "4 integers per piece: (length, width, copies, value), copies replicated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct Converted {
    pub instance: InstanceFile,
    pub rule: PieceRule,
}

/// Parses every instance in an ngcut file.
pub fn parse(text: &str) -> Result<Vec<Converted>, StructureError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count().max(1);

    let mut next = |what: &str, arity: &[usize]| -> Result<(usize, Vec<i64>), StructureError> {
        let (line, raw) =
            lines.next().ok_or_else(|| StructureError { line: last_line, message: format!("missing {what}") })?;
        let nums = raw
            .split_whitespace()
            .map(str::parse::<i64>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| StructureError { line, message: format!("expected integers for {what}, got {raw:?}") })?;
        if !arity.contains(&nums.len()) {
            let want = arity.iter().map(usize::to_string).collect::<Vec<_>>().join(" or ");
            return Err(StructureError { line, message: format!("{what} needs {want} integers, got {}", nums.len()) });
        }
        if let Some(bad) = nums.iter().find(|&&x| x < 0) {
            return Err(StructureError { line, message: format!("negative value {bad} in {what}") });
        }
        Ok((line, nums))
    };

    let (_, count) = next("instance count", &[1])?;
    let mut out = Vec::new();
    for k in 1..=count[0] {
        let (_, pieces) = next(&format!("piece count of instance {k}"), &[1])?;
        let (line, dims) = next(&format!("container of instance {k}"), &[2])?;
        if dims.contains(&0) {
            return Err(StructureError { line, message: "container sides must be positive".into() });
        }
        let mut rule = None;
        let mut boxes = Vec::new();
        for p in 1..=pieces[0] {
            let (line, v) = next(&format!("piece {p} of instance {k}"), &[3, 4])?;
            let this = if v.len() == 3 { PieceRule::ThreeColumn } else { PieceRule::FourColumn };
            if *rule.get_or_insert(this) != this {
                return Err(StructureError { line, message: "piece lines mix 3 and 4 integers".into() });
            }
            if v[0] == 0 || v[1] == 0 {
                return Err(StructureError { line, message: "piece sides must be positive".into() });
            }
            let (copies, value) = match this {
                PieceRule::ThreeColumn => (1, v[2]),
                PieceRule::FourColumn => (v[2], v[3]),
            };
            let size = vec![Num(Rational::from(v[0])), Num(Rational::from(v[1]))];
            for c in 1..=copies {
                let id = if this == PieceRule::ThreeColumn { format!("p{p}") } else { format!("p{p}_{c}") };
                boxes.push(BoxFile { id, size: size.clone(), value: Some(Num(Rational::from(value))) });
            }
        }
        let container = dims.iter().map(|&x| Num(Rational::from(x))).collect();
        out.push(Converted {
            instance: InstanceFile { d: 2, container, boxes },
            rule: rule.unwrap_or(PieceRule::ThreeColumn),
        });
    }
    if let Some((line, raw)) = lines.next() {
        return Err(StructureError { line, message: format!("unexpected trailing content {raw:?}") });
    }
    Ok(out)
}
