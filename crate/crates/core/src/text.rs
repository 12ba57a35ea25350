//! Shared helpers for the line-oriented file formats.

use crate::error::{Error, Result};

/// A non-blank input line with `#` comments stripped.
#[derive(Debug, Clone, Copy)]
pub struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.number, message)
    }

    /// Splits `key: rest` at the first colon.
    pub fn key_value(&self) -> Option<(&'a str, &'a str)> {
        let (k, v) = self.text.split_once(':')?;
        Some((k.trim(), v.trim()))
    }

    pub fn tokens(&self) -> impl Iterator<Item = &'a str> {
        self.text.split_whitespace()
    }
}

/// Splits input into logical lines. A `;` also ends a line, so short inputs
/// can be written on one physical line.
pub fn lines(input: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let raw = raw.split('#').next().unwrap_or("");
        for piece in raw.split(';') {
            let text = piece.trim();
            if !text.is_empty() {
                out.push(Line { number: i + 1, text });
            }
        }
    }
    out
}

/// Reads an optional `<keyword> <name> [on <ref>]` header from the front of
/// `lines`, returning `(name, reference)` and consuming the line if present.
pub fn header<'a>(
    lines: &mut &[Line<'a>],
    keyword: &str,
) -> Result<Option<(String, Option<String>)>> {
    let Some(first) = lines.first() else {
        return Ok(None);
    };
    let mut toks = first.tokens();
    if toks.next() != Some(keyword) {
        return Ok(None);
    }
    let name = toks
        .next()
        .ok_or_else(|| first.error(format!("`{keyword}` header needs a name")))?
        .to_string();
    let reference = match toks.next() {
        None => None,
        Some("on") => Some(
            toks.next()
                .ok_or_else(|| first.error("`on` needs a name"))?
                .to_string(),
        ),
        Some(other) => return Err(first.error(format!("unexpected token `{other}`"))),
    };
    if let Some(extra) = toks.next() {
        return Err(first.error(format!("unexpected token `{extra}`")));
    }
    *lines = &lines[1..];
    Ok(Some((name, reference)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicolons_split_lines() {
        let ls = lines("points: a b; le: a<b # comment\n\n  x: y");
        let texts: Vec<_> = ls.iter().map(|l| l.text).collect();
        assert_eq!(texts, vec!["points: a b", "le: a<b", "x: y"]);
        assert_eq!(ls[2].number, 3);
    }

    #[test]
    fn header_with_reference() {
        let ls = lines("cover cd on pc4\nc: a b c");
        let mut view = &ls[..];
        let h = header(&mut view, "cover").unwrap();
        assert_eq!(h, Some(("cd".into(), Some("pc4".into()))));
        assert_eq!(view.len(), 1);
    }
}
