//! Descent data over a component nerve: finite fibers per object and one
//! bijection per edge, with the cocycle law imposed on triangles.
//!
//! Transitions are stored once per edge, oriented from the smaller object
//! index to the larger; the reverse direction is the inverse and identities
//! over repeated indices are implicit.

mod limits;
mod morphism;
mod orbits;
mod refine;
mod site;

pub use limits::{equalizer, image, product, sum, sum_all};
pub use morphism::{homs, isomorphisms, DatumMorphism, DEFAULT_HOM_LIMIT};
pub use orbits::{atoms, is_connected, orbits, pi0, Atoms, OrbitPartition, Pi0, Pi0Certificate};
pub use refine::{
    colimit_hom, colimit_hom_independent, prosystem_eval, pullback, stage_count, ColimitHoms,
    ProReport,
};
pub use site::{action_triples, is_covering_projection, ActionTriple, CoveringReport, PairReport, Probe, Site};

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::nerve::{ComponentNerve, Diagnostic};
use crate::perm::{self, Perm};
use crate::text;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentDatum {
    name: String,
    nerve: ComponentNerve,
    fibers: Vec<Vec<String>>,
    transitions: Vec<Perm>,
}

impl DescentDatum {
    /// Checks shape and bijectivity; the cocycle law is reported separately
    /// by [`DescentDatum::check_cocycle`].
    pub fn new(
        name: impl Into<String>,
        nerve: ComponentNerve,
        fibers: Vec<Vec<String>>,
        transitions: Vec<Perm>,
    ) -> Result<Self> {
        nerve.ensure_valid()?;
        if fibers.len() != nerve.objects().len() {
            return Err(Error::InvalidDatum(format!(
                "{} fibers for {} objects",
                fibers.len(),
                nerve.objects().len()
            )));
        }
        for (i, fiber) in fibers.iter().enumerate() {
            let mut seen = HashSet::new();
            if let Some(dup) = fiber.iter().find(|s| !seen.insert(s.as_str())) {
                return Err(Error::DuplicateIdentifier(format!(
                    "{dup} in fiber over `{}`",
                    nerve.objects()[i]
                )));
            }
        }
        if transitions.len() != nerve.edges().len() {
            return Err(Error::InvalidDatum(format!(
                "{} transitions for {} edges",
                transitions.len(),
                nerve.edges().len()
            )));
        }
        for (e, t) in transitions.iter().enumerate() {
            let edge = &nerve.edges()[e];
            let (n, m) = (fibers[edge.src].len(), fibers[edge.tgt].len());
            if t.len() != n || !perm::is_bijection(t, m) {
                return Err(Error::InvalidDatum(format!(
                    "transition at `{}` is not a bijection of fibers",
                    edge.id
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            nerve,
            fibers,
            transitions,
        })
    }

    /// Fibers `0..sizes[i]` with the given transitions.
    pub fn from_sizes(
        name: impl Into<String>,
        nerve: ComponentNerve,
        sizes: &[usize],
        transitions: Vec<Perm>,
    ) -> Result<Self> {
        let fibers = sizes
            .iter()
            .map(|&n| (0..n).map(|s| s.to_string()).collect())
            .collect();
        Self::new(name, nerve, fibers, transitions)
    }

    /// The constant datum: the same set over every object, identity transitions.
    pub fn constant(name: impl Into<String>, nerve: &ComponentNerve, labels: &[String]) -> Self {
        let n = labels.len();
        Self {
            name: name.into(),
            nerve: nerve.clone(),
            fibers: vec![labels.to_vec(); nerve.objects().len()],
            transitions: vec![perm::identity(n); nerve.edges().len()],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn nerve(&self) -> &ComponentNerve {
        &self.nerve
    }

    pub fn fibers(&self) -> &[Vec<String>] {
        &self.fibers
    }

    pub fn fiber(&self, i: usize) -> &[String] {
        &self.fibers[i]
    }

    pub fn fiber_len(&self, i: usize) -> usize {
        self.fibers[i].len()
    }

    pub fn total_len(&self) -> usize {
        self.fibers.iter().map(Vec::len).sum()
    }

    pub fn transitions(&self) -> &[Perm] {
        &self.transitions
    }

    pub fn transition(&self, e: usize) -> &Perm {
        &self.transitions[e]
    }

    /// The transition from object `i` to object `j` along edge `e`.
    pub fn oriented(&self, e: usize, from: usize) -> Perm {
        let edge = &self.nerve.edges()[e];
        if edge.src == from {
            self.transitions[e].clone()
        } else {
            perm::inverse(&self.transitions[e])
        }
    }

    /// True when some fiber is empty (e.g. an equalizer without fixed points).
    pub fn has_empty_fiber(&self) -> bool {
        self.fibers.iter().any(Vec::is_empty)
    }

    /// True when every fiber is empty: the initial object.
    pub fn is_empty(&self) -> bool {
        self.fibers.iter().all(Vec::is_empty)
    }

    /// Triangle violations of `t_jk ∘ t_ij = t_ik`, one per mismatching element.
    pub fn check_cocycle(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for tri in self.nerve.triangles() {
            let [ij, jk, ik] = tri.face_edges();
            let i = tri.vertices[0];
            for s in 0..self.fibers[i].len() {
                let via = self.transitions[jk][self.transitions[ij][s]];
                let direct = self.transitions[ik][s];
                if via != direct {
                    let k = tri.vertices[2];
                    out.push(Diagnostic {
                        code: "cocycle",
                        message: format!(
                            "triangle `{}`: element `{}` goes to `{}` via `{}` but to `{}` directly",
                            tri.id,
                            self.fibers[i][s],
                            self.fibers[k][via],
                            self.nerve.objects()[tri.vertices[1]],
                            self.fibers[k][direct]
                        ),
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.check_cocycle().is_empty()
    }

    pub fn ensure_cocycle(&self) -> Result<()> {
        match self.check_cocycle().first() {
            Some(d) => Err(Error::CocycleViolation(d.message.clone())),
            None => Ok(()),
        }
    }

    /// The nerve name recorded in the header (`on <nerve>`), if any.
    pub fn parse_reference(input: &str) -> Result<Option<String>> {
        let lines = text::lines(input);
        let mut rest = lines.as_slice();
        Ok(text::header(&mut rest, "datum")?.and_then(|(_, r)| r))
    }

    /// Parses the datum format against an already resolved nerve:
    ///
    /// ```text
    /// datum <name> on <nerve>
    /// fiber <object>: s0 s1 ...
    /// edge <edge-id>: s0->t0 s1->t1 ...
    /// ```
    pub fn parse(input: &str, nerve: &ComponentNerve) -> Result<Self> {
        let lines = text::lines(input);
        let mut rest = lines.as_slice();
        let name = text::header(&mut rest, "datum")?
            .map(|(n, _)| n)
            .unwrap_or_else(|| "datum".to_string());
        let n = nerve.objects().len();
        let mut fibers: Vec<Option<Vec<String>>> = vec![None; n];
        let mut edge_lines = Vec::new();
        for line in rest {
            let (key, value) = line
                .key_value()
                .ok_or_else(|| line.error("expected `fiber <object>: ...` or `edge <id>: ...`"))?;
            let mut head = key.split_whitespace();
            let (kind, id) = match (head.next(), head.next(), head.next()) {
                (Some(k), Some(id), None) => (k, id),
                _ => return Err(line.error(format!("malformed key `{key}`"))),
            };
            match kind {
                "fiber" => {
                    let i = nerve.object_index(id).map_err(|_| line.error(format!("unknown object `{id}`")))?;
                    if fibers[i].is_some() {
                        return Err(line.error(format!("fiber over `{id}` given twice")));
                    }
                    let labels: Vec<String> = value.split_whitespace().map(str::to_string).collect();
                    let mut seen = HashSet::new();
                    if let Some(dup) = labels.iter().find(|s| !seen.insert(s.as_str())) {
                        return Err(line.error(format!("duplicate element `{dup}`")));
                    }
                    fibers[i] = Some(labels);
                }
                "edge" => edge_lines.push((*line, id, value)),
                other => return Err(line.error(format!("unknown entry `{other}`"))),
            }
        }
        let fibers: Vec<Vec<String>> = fibers
            .into_iter()
            .enumerate()
            .map(|(i, f)| {
                f.ok_or_else(|| {
                    Error::InvalidDatum(format!("no fiber given over `{}`", nerve.objects()[i]))
                })
            })
            .collect::<Result<_>>()?;
        let mut transitions: Vec<Option<Perm>> = vec![None; nerve.edges().len()];
        for (line, id, value) in edge_lines {
            let e = nerve
                .edge_index(id)
                .map_err(|_| line.error(format!("unknown edge `{id}`")))?;
            if transitions[e].is_some() {
                return Err(line.error(format!("edge `{id}` given twice")));
            }
            let edge = &nerve.edges()[e];
            let (src, tgt) = (&fibers[edge.src], &fibers[edge.tgt]);
            let mut t = vec![usize::MAX; src.len()];
            for pair in value.split_whitespace() {
                let (a, b) = pair
                    .split_once("->")
                    .ok_or_else(|| line.error(format!("expected `s->t`, got `{pair}`")))?;
                let a = src
                    .iter()
                    .position(|s| s == a)
                    .ok_or_else(|| line.error(format!("`{a}` is not in the source fiber")))?;
                let b = tgt
                    .iter()
                    .position(|s| s == b)
                    .ok_or_else(|| line.error(format!("`{b}` is not in the target fiber")))?;
                if t[a] != usize::MAX {
                    return Err(line.error(format!("`{}` mapped twice", src[a])));
                }
                t[a] = b;
            }
            if t.contains(&usize::MAX) {
                return Err(Error::InvalidDatum(format!("transition at `{id}` is not total")));
            }
            transitions[e] = Some(t);
        }
        let transitions = transitions
            .into_iter()
            .enumerate()
            .map(|(e, t)| {
                t.ok_or_else(|| {
                    Error::InvalidDatum(format!("no transition given at `{}`", nerve.edges()[e].id))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(name, nerve.clone(), fibers, transitions)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("datum {} on {}\n", self.name, self.nerve.name());
        for (i, f) in self.fibers.iter().enumerate() {
            let _ = writeln!(out, "fiber {}: {}", self.nerve.objects()[i], f.join(" "));
        }
        for (e, t) in self.transitions.iter().enumerate() {
            let edge = &self.nerve.edges()[e];
            let pairs: Vec<String> = t
                .iter()
                .enumerate()
                .map(|(s, &u)| format!("{}->{}", self.fibers[edge.src][s], self.fibers[edge.tgt][u]))
                .collect();
            let _ = writeln!(out, "edge {}: {}", edge.id, pairs.join(" "));
        }
        out
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn cocycle_examples() {
        let tet = tet();
        let mut ts = vec![vec![0, 1]; 6];
        let ok = DescentDatum::from_sizes("x", tet.clone(), &[2; 4], ts.clone()).unwrap();
        assert!(ok.check_cocycle().is_empty());
        ts[0] = vec![1, 0];
        let bad = DescentDatum::from_sizes("x", tet, &[2; 4], ts).unwrap();
        let diags = bad.check_cocycle();
        assert!(!diags.is_empty());
        assert!(diags[0].message.contains("t012"));
        assert!(double_cover().check_cocycle().is_empty());
    }

    #[test]
    fn rejects_malformed() {
        let n = double_cover().nerve().clone();
        assert!(DescentDatum::from_sizes("x", n.clone(), &[2, 3], vec![vec![0, 1]; 2]).is_err());
        assert!(DescentDatum::from_sizes("x", n.clone(), &[2, 2], vec![vec![0, 0]; 2]).is_err());
        assert!(DescentDatum::from_sizes("x", n, &[2, 2], vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let x = double_cover();
        let text = x.to_text();
        assert_eq!(DescentDatum::parse_reference(&text).unwrap().as_deref(), Some("cd"));
        assert_eq!(DescentDatum::parse(&text, x.nerve()).unwrap(), x);
        let custom = "datum y on cd\nfiber c: p q\nfiber d: r s\nedge c-d@a: p->s q->r\nedge c-d@b: p->r q->s";
        let y = DescentDatum::parse(custom, x.nerve()).unwrap();
        assert_eq!(y.transition(0), &vec![1, 0]);
    }

    #[test]
    fn parse_errors() {
        let n = double_cover().nerve().clone();
        let e = DescentDatum::parse("fiber c: p p", &n).unwrap_err();
        assert!(e.is_parse());
        let e = DescentDatum::parse("fiber c: p\nfiber d: q\nedge c-d@a: p->q\n", &n).unwrap_err();
        assert!(matches!(e, Error::InvalidDatum(_)));
        let e = DescentDatum::parse("fiber c: p q\nfiber d: r s\nedge c-d@a: p->r\nedge c-d@b: p->r q->s", &n)
            .unwrap_err();
        assert!(matches!(e, Error::InvalidDatum(_)));
        assert!(DescentDatum::parse("fiber zz: p", &n).unwrap_err().is_parse());
    }

    #[test]
    fn empty_flags() {
        let n = double_cover().nerve().clone();
        let x = DescentDatum::from_sizes("x", n, &[0, 0], vec![vec![], vec![]]).unwrap();
        assert!(x.is_empty() && x.has_empty_fiber());
        assert!(!double_cover().has_empty_fiber());
    }
}
