//! A registry of loaded inputs with cross-references resolved at load time.

use std::collections::BTreeMap;
use std::fmt;

use crate::descent::DescentDatum;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::nerve::{component_nerve, ComponentNerve};
use crate::seqspace::SeqLCObject;
use crate::space::{Cover, FiniteSpace};
use crate::text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Space,
    Cover,
    Nerve,
    Datum,
    Group,
    SeqObject,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Space => "space",
            Kind::Cover => "cover",
            Kind::Nerve => "nerve",
            Kind::Datum => "datum",
            Kind::Group => "group",
            Kind::SeqObject => "seq-object",
        })
    }
}

impl Kind {
    /// Guesses the kind from the first meaningful line.
    pub fn detect(input: &str) -> Option<Kind> {
        let lines = text::lines(input);
        let first = lines.first()?.text;
        let word = first.split(|c: char| c.is_whitespace() || c == ':').next()?;
        Some(match word {
            "space" | "points" | "le" => Kind::Space,
            "cover" => Kind::Cover,
            "nerve" | "objects" => Kind::Nerve,
            "datum" | "fiber" => Kind::Datum,
            "group" | "elements" | "perm-group" => Kind::Group,
            "seq-object" | "coverU" | "coverV" => Kind::SeqObject,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub spaces: BTreeMap<String, FiniteSpace>,
    pub covers: BTreeMap<String, Cover>,
    pub nerves: BTreeMap<String, ComponentNerve>,
    pub data: BTreeMap<String, DescentDatum>,
    pub groups: BTreeMap<String, GroupTable>,
    pub seq_objects: BTreeMap<String, SeqLCObject>,
}

fn insert_unique<T>(map: &mut BTreeMap<String, T>, kind: Kind, name: &str, value: T) -> Result<()> {
    if map.contains_key(name) {
        return Err(Error::DuplicateIdentifier(format!("{kind} `{name}`")));
    }
    map.insert(name.to_string(), value);
    Ok(())
}

fn only<T>(map: &BTreeMap<String, T>, kind: Kind) -> Result<&T> {
    let mut it = map.values();
    match (it.next(), it.next()) {
        (Some(v), None) => Ok(v),
        (None, _) => Err(Error::UnknownIdentifier(format!("no {kind} loaded"))),
        _ => Err(Error::UnknownIdentifier(format!("several {kind}s loaded; name one"))),
    }
}

fn header_reference(input: &str, keyword: &str) -> Result<Option<String>> {
    let lines = text::lines(input);
    let mut rest = lines.as_slice();
    Ok(text::header(&mut rest, keyword)?.and_then(|(_, r)| r))
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads `input` as `kind` (detected when `None`) and returns its name.
    /// Referenced spaces and nerves must already be loaded; without a
    /// reference the single loaded candidate is used.
    pub fn load(&mut self, input: &str, kind: Option<Kind>) -> Result<(Kind, String)> {
        let kind = match kind.or_else(|| Kind::detect(input)) {
            Some(k) => k,
            None => return Err(Error::parse(1, "cannot tell what kind of file this is")),
        };
        let name = match kind {
            Kind::Space => {
                let s = FiniteSpace::parse(input)?;
                let name = s.name().to_string();
                insert_unique(&mut self.spaces, kind, &name, s)?;
                name
            }
            Kind::Cover => {
                let space = match header_reference(input, "cover")? {
                    Some(r) => self.space(&r)?,
                    None => only(&self.spaces, Kind::Space)?,
                };
                let c = Cover::parse(input, space)?;
                let name = c.name().to_string();
                insert_unique(&mut self.covers, kind, &name, c)?;
                name
            }
            Kind::Nerve => {
                let n = ComponentNerve::parse(input)?;
                let name = n.name().to_string();
                insert_unique(&mut self.nerves, kind, &name, n)?;
                name
            }
            Kind::Datum => {
                let nerve = match DescentDatum::parse_reference(input)? {
                    Some(r) => self.nerve(&r)?,
                    None => self.only_nerve()?,
                };
                let d = DescentDatum::parse(input, &nerve)?;
                let name = d.name().to_string();
                insert_unique(&mut self.data, kind, &name, d)?;
                name
            }
            Kind::Group => {
                let g = GroupTable::parse(input)?;
                let name = g.name().to_string();
                insert_unique(&mut self.groups, kind, &name, g)?;
                name
            }
            Kind::SeqObject => {
                let x = SeqLCObject::parse(input)?;
                let name = x.name.clone();
                insert_unique(&mut self.seq_objects, kind, &name, x)?;
                name
            }
        };
        Ok((kind, name))
    }

    /// Registers a cover built in memory (for instance a minimal cover).
    pub fn add_cover(&mut self, cover: Cover) -> Result<String> {
        self.space_of(&cover)?;
        let name = cover.name().to_string();
        insert_unique(&mut self.covers, Kind::Cover, &name, cover)?;
        Ok(name)
    }

    pub fn space(&self, name: &str) -> Result<&FiniteSpace> {
        self.spaces
            .get(name)
            .ok_or_else(|| Error::UnknownIdentifier(format!("space `{name}`")))
    }

    pub fn cover(&self, name: &str) -> Result<&Cover> {
        self.covers
            .get(name)
            .ok_or_else(|| Error::UnknownIdentifier(format!("cover `{name}`")))
    }

    /// The space a cover lives on.
    pub fn space_of(&self, cover: &Cover) -> Result<&FiniteSpace> {
        self.space(cover.space_name())
    }

    /// A loaded nerve, or the component nerve of a loaded cover.
    pub fn nerve(&self, name: &str) -> Result<ComponentNerve> {
        if let Some(n) = self.nerves.get(name) {
            return Ok(n.clone());
        }
        let c = self
            .covers
            .get(name)
            .ok_or_else(|| Error::UnknownIdentifier(format!("nerve or cover `{name}`")))?;
        Ok(component_nerve(self.space_of(c)?, c))
    }

    fn only_nerve(&self) -> Result<ComponentNerve> {
        match (self.nerves.len(), self.covers.len()) {
            (1, 0) => Ok(only(&self.nerves, Kind::Nerve)?.clone()),
            (0, 1) => self.nerve(self.covers.keys().next().unwrap()),
            (0, 0) => Err(Error::UnknownIdentifier("no nerve or cover loaded".into())),
            _ => Err(Error::UnknownIdentifier(
                "datum names no nerve and several candidates are loaded".into(),
            )),
        }
    }

    pub fn datum(&self, name: &str) -> Result<&DescentDatum> {
        self.data
            .get(name)
            .ok_or_else(|| Error::UnknownIdentifier(format!("datum `{name}`")))
    }

    pub fn group(&self, name: &str) -> Result<&GroupTable> {
        self.groups
            .get(name)
            .ok_or_else(|| Error::UnknownIdentifier(format!("group `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PC4: &str = "space pc4\npoints: a b c d\nle: a<c a<d b<c b<d";

    #[test]
    fn resolves_references() {
        let mut ws = Workspace::new();
        assert_eq!(ws.load(PC4, None).unwrap(), (Kind::Space, "pc4".into()));
        ws.load("cover cd on pc4\nc: a b c\nd: a b d", None).unwrap();
        let (_, d) = ws
            .load("datum dc on cd\nfiber c: 0 1\nfiber d: 0 1\nedge c-d@a: 0->0 1->1\nedge c-d@b: 0->1 1->0", None)
            .unwrap();
        assert_eq!(ws.datum(&d).unwrap().nerve().edges().len(), 2);
        assert!(matches!(ws.load(PC4, None), Err(Error::DuplicateIdentifier(_))));
        assert!(matches!(
            ws.load("cover x on nowhere\nc: a", None),
            Err(Error::UnknownIdentifier(_))
        ));
    }

    #[test]
    fn detects_kinds() {
        assert_eq!(Kind::detect("# c\nnerve t\nobjects: 0"), Some(Kind::Nerve));
        assert_eq!(Kind::detect("perm-group on 3: (0 1)"), Some(Kind::Group));
        assert_eq!(Kind::detect("seq-object s"), Some(Kind::SeqObject));
        assert_eq!(Kind::detect("hello"), None);
    }
}
