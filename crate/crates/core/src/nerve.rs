//! Plain and component-enriched Čech nerves (2-truncated) and the nerve
//! morphisms induced by refinements.
//!
//! Pairs and triples are unordered. Each edge is stored once, oriented from
//! the smaller to the larger object index; degenerate simplexes are implicit.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::space::{components_of, Cover, FiniteSpace, PointSet, Refinement};
use crate::text;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainNerve {
    pub objects: Vec<String>,
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
    /// The connected component of `U_src ∩ U_tgt` this edge stands for, when
    /// the nerve comes from a cover of a finite space.
    pub component: Option<PointSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub id: String,
    /// Strictly increasing object indices `i < j < k`.
    pub vertices: [usize; 3],
    /// Face edges over `{i,j}`, `{j,k}`, `{i,k}` in that order.
    pub faces: [Option<usize>; 3],
    pub component: Option<PointSet>,
}

impl Triangle {
    /// The three vertex pairs, in face order.
    pub fn face_pairs(&self) -> [(usize, usize); 3] {
        let [i, j, k] = self.vertices;
        [(i, j), (j, k), (i, k)]
    }

    /// Faces of a triangle that passed validation.
    pub fn face_edges(&self) -> [usize; 3] {
        self.faces.map(|f| f.expect("validated triangle has all faces"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentNerve {
    name: String,
    objects: Vec<String>,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
}

/// A validation finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl ComponentNerve {
    /// Assembles a nerve without validating it; see [`ComponentNerve::validate`].
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        edges: Vec<Edge>,
        triangles: Vec<Triangle>,
    ) -> Self {
        Self {
            name: name.into(),
            objects,
            edges,
            triangles,
        }
    }

    /// Assembles and validates, failing on the first diagnostic.
    pub fn checked(
        name: impl Into<String>,
        objects: Vec<String>,
        edges: Vec<Edge>,
        triangles: Vec<Triangle>,
    ) -> Result<Self> {
        let n = Self::new(name, objects, edges, triangles);
        n.ensure_valid()?;
        Ok(n)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            Some(d) => Err(Error::InvalidNerve(d.to_string())),
            None => Ok(()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownIdentifier(id.to_string()))
    }

    pub fn edges_between(&self, i: usize, j: usize) -> Vec<usize> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        (0..self.edges.len())
            .filter(|&e| self.edges[e].src == a && self.edges[e].tgt == b)
            .collect()
    }

    /// True when there is at most one edge per pair and one triangle per triple.
    pub fn is_plain(&self) -> bool {
        let pairs: BTreeSet<_> = self.edges.iter().map(|e| (e.src, e.tgt)).collect();
        let triples: BTreeSet<_> = self.triangles.iter().map(|t| t.vertices).collect();
        pairs.len() == self.edges.len() && triples.len() == self.triangles.len()
    }

    /// Forgets multiplicities.
    pub fn forget(&self) -> PlainNerve {
        let pairs: BTreeSet<_> = self.edges.iter().map(|e| (e.src, e.tgt)).collect();
        let triples: BTreeSet<_> = self.triangles.iter().map(|t| t.vertices).collect();
        PlainNerve {
            objects: self.objects.clone(),
            pairs: pairs.into_iter().collect(),
            triples: triples.into_iter().collect(),
        }
    }

    /// Connected components of the object graph, ordered by least object.
    pub fn object_components(&self) -> Vec<Vec<usize>> {
        let mut uf = crate::unionfind::UnionFind::new(self.objects.len());
        for e in &self.edges {
            uf.union(e.src, e.tgt);
        }
        uf.classes()
    }

    /// Reports every violated structural invariant; empty iff valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let n = self.objects.len();
        let mut push = |code, message: String| out.push(Diagnostic { code, message });

        let mut names = BTreeSet::new();
        for o in &self.objects {
            if !names.insert(o) {
                push("duplicate-id", format!("object `{o}` listed twice"));
            }
        }
        let mut ids = BTreeSet::new();
        for e in &self.edges {
            if !ids.insert(&e.id) {
                push("duplicate-id", format!("edge `{}` listed twice", e.id));
            }
            if e.src >= n || e.tgt >= n {
                push("bad-edge", format!("edge `{}` names an unknown object", e.id));
            } else if e.src >= e.tgt {
                push(
                    "bad-edge",
                    format!("edge `{}` must join distinct objects, smaller first", e.id),
                );
            }
        }
        let mut tids = BTreeSet::new();
        for t in &self.triangles {
            if !tids.insert(&t.id) {
                push("duplicate-id", format!("triangle `{}` listed twice", t.id));
            }
            let [i, j, k] = t.vertices;
            if k >= n || !(i < j && j < k) {
                push(
                    "bad-triangle",
                    format!("triangle `{}` needs three distinct known objects", t.id),
                );
                continue;
            }
            for (face, (a, b)) in t.faces.iter().zip(t.face_pairs()) {
                match face {
                    None => push(
                        "missing-face",
                        format!(
                            "triangle `{}` has no edge at {{{},{}}}",
                            t.id, self.objects[a], self.objects[b]
                        ),
                    ),
                    Some(e) => match self.edges.get(*e) {
                        Some(edge) if edge.src == a && edge.tgt == b => {}
                        _ => push(
                            "bad-face",
                            format!(
                                "triangle `{}` face at {{{},{}}} is not an edge there",
                                t.id, self.objects[a], self.objects[b]
                            ),
                        ),
                    },
                }
            }
        }
        out
    }

    /// Parses the nerve file format. Faces may be listed in any order or
    /// omitted when the pair has exactly one edge.
    pub fn parse(input: &str) -> Result<Self> {
        let all = text::lines(input);
        let mut rest = &all[..];
        let name = text::header(&mut rest, "nerve")?
            .map(|(n, _)| n)
            .unwrap_or_else(|| "nerve".to_string());
        let mut objects: Option<Vec<String>> = None;
        let mut edges: Vec<Edge> = Vec::new();
        let mut raw_triangles = Vec::new();
        for line in rest {
            let (key, value) = line
                .key_value()
                .ok_or_else(|| line.error("expected `key: value`"))?;
            let mut key_toks = key.split_whitespace();
            let kind = key_toks.next().unwrap_or("");
            let id = key_toks.next();
            if key_toks.next().is_some() {
                return Err(line.error(format!("bad key `{key}`")));
            }
            match (kind, id) {
                ("objects", None) => {
                    if objects.is_some() {
                        return Err(line.error("`objects:` given twice"));
                    }
                    objects = Some(value.split_whitespace().map(str::to_string).collect());
                }
                ("edge", Some(id)) => {
                    let objs = objects
                        .as_ref()
                        .ok_or_else(|| line.error("`objects:` must come first"))?;
                    let toks: Vec<_> = value.split_whitespace().collect();
                    let [a, b] = toks[..] else {
                        return Err(line.error("edge needs two objects"));
                    };
                    let a = index_in(objs, a)?;
                    let b = index_in(objs, b)?;
                    if a == b {
                        return Err(line.error("edge endpoints must differ"));
                    }
                    edges.push(Edge {
                        id: id.to_string(),
                        src: a.min(b),
                        tgt: a.max(b),
                        component: None,
                    });
                }
                ("triangle", Some(id)) => {
                    let objs = objects
                        .as_ref()
                        .ok_or_else(|| line.error("`objects:` must come first"))?;
                    let toks: Vec<_> = value.split_whitespace().collect();
                    if toks.len() < 3 {
                        return Err(line.error("triangle needs three objects"));
                    }
                    let mut vs = [
                        index_in(objs, toks[0])?,
                        index_in(objs, toks[1])?,
                        index_in(objs, toks[2])?,
                    ];
                    vs.sort_unstable();
                    let faces: Vec<String> = match toks.get(3) {
                        None => Vec::new(),
                        Some(&"faces") => toks[4..].iter().map(|s| s.to_string()).collect(),
                        Some(other) => {
                            return Err(line.error(format!("expected `faces`, got `{other}`")))
                        }
                    };
                    if !faces.is_empty() && faces.len() != 3 {
                        return Err(line.error("`faces` needs three edge ids"));
                    }
                    raw_triangles.push((id.to_string(), vs, faces));
                }
                _ => return Err(line.error(format!("unknown key `{key}`"))),
            }
        }
        let objects = objects.ok_or_else(|| Error::parse(0, "missing `objects:` line"))?;
        let mut nerve = Self::new(name, objects, edges, Vec::new());
        for (id, vertices, faces) in raw_triangles {
            let mut t = Triangle {
                id,
                vertices,
                faces: [None; 3],
                component: None,
            };
            let pairs = t.face_pairs();
            if faces.is_empty() {
                for (slot, (a, b)) in pairs.iter().enumerate() {
                    if let [e] = nerve.edges_between(*a, *b)[..] {
                        t.faces[slot] = Some(e);
                    }
                }
            } else {
                for f in &faces {
                    let e = nerve.edge_index(f)?;
                    let edge = &nerve.edges[e];
                    if let Some(slot) = pairs.iter().position(|&p| p == (edge.src, edge.tgt)) {
                        if t.faces[slot].is_none() {
                            t.faces[slot] = Some(e);
                        }
                    }
                }
            }
            nerve.triangles.push(t);
        }
        Ok(nerve)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("nerve {}\nobjects: {}\n", self.name, self.objects.join(" "));
        for e in &self.edges {
            let _ = writeln!(
                out,
                "edge {}: {} {}",
                e.id, self.objects[e.src], self.objects[e.tgt]
            );
        }
        for t in &self.triangles {
            let [i, j, k] = t.vertices;
            let _ = write!(
                out,
                "triangle {}: {} {} {}",
                t.id, self.objects[i], self.objects[j], self.objects[k]
            );
            if t.faces.iter().all(Option::is_some) {
                let ids: Vec<_> = t.faces.iter().map(|f| self.edges[f.unwrap()].id.as_str()).collect();
                let _ = write!(out, " faces {}", ids.join(" "));
            }
            out.push('\n');
        }
        out
    }

    /// The same nerve with component witnesses dropped, as it would be read
    /// back from its text form.
    pub fn abstracted(&self) -> ComponentNerve {
        let mut n = self.clone();
        for e in &mut n.edges {
            e.component = None;
        }
        for t in &mut n.triangles {
            t.component = None;
        }
        n
    }
}

fn index_in(objects: &[String], name: &str) -> Result<usize> {
    objects
        .iter()
        .position(|o| o == name)
        .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
}

/// Pairs and triples of distinct indices with nonempty intersection.
pub fn plain_nerve(_space: &FiniteSpace, cover: &Cover) -> PlainNerve {
    let n = cover.len();
    let mut pairs = Vec::new();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let ij = cover.open(i).intersect(cover.open(j));
            if ij.is_empty() {
                continue;
            }
            pairs.push((i, j));
            for k in j + 1..n {
                if !ij.intersect(cover.open(k)).is_empty() {
                    triples.push([i, j, k]);
                }
            }
        }
    }
    PlainNerve {
        objects: cover.indices().to_vec(),
        pairs,
        triples,
    }
}

/// One edge per connected component of each pairwise intersection and one
/// triangle per component of each triple intersection.
pub fn component_nerve(space: &FiniteSpace, cover: &Cover) -> ComponentNerve {
    let n = cover.len();
    let idx = cover.indices();
    let mut edges = Vec::new();
    let mut triangles = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let ij = cover.open(i).intersect(cover.open(j));
            for comp in components_of(space, ij.members()) {
                let first = *comp.iter().next().unwrap();
                edges.push(Edge {
                    id: format!("{}-{}@{}", idx[i], idx[j], space.point_name(first)),
                    src: i,
                    tgt: j,
                    component: Some(comp),
                });
            }
        }
    }
    let containing = |edges: &[Edge], a: usize, b: usize, comp: &PointSet| {
        edges.iter().position(|e| {
            e.src == a && e.tgt == b && comp.is_subset(e.component.as_ref().unwrap())
        })
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let ijk = cover
                    .open(i)
                    .intersect(cover.open(j))
                    .intersect(cover.open(k));
                for comp in components_of(space, ijk.members()) {
                    let first = *comp.iter().next().unwrap();
                    let faces = [
                        containing(&edges, i, j, &comp),
                        containing(&edges, j, k, &comp),
                        containing(&edges, i, k, &comp),
                    ];
                    triangles.push(Triangle {
                        id: format!("{}-{}-{}@{}", idx[i], idx[j], idx[k], space.point_name(first)),
                        vertices: [i, j, k],
                        faces,
                        component: Some(comp),
                    });
                }
            }
        }
    }
    ComponentNerve::new(cover.name(), idx.to_vec(), edges, triangles)
}

/// Image of a source edge under a nerve morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeImage {
    /// Both endpoints land on this object; the edge becomes an identity.
    Identity(usize),
    /// A target edge, traversed along its orientation or against it.
    Edge { edge: usize, forward: bool },
}

/// Image of a source triangle under a nerve morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleImage {
    /// The image object triple has a repeated object.
    Degenerate,
    Triangle(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveMorphism {
    pub source: ComponentNerve,
    pub target: ComponentNerve,
    pub object_map: Vec<usize>,
    pub edge_map: Vec<EdgeImage>,
    pub triangle_map: Vec<TriangleImage>,
}

impl NerveMorphism {
    pub fn identity(nerve: &ComponentNerve) -> Self {
        Self {
            source: nerve.clone(),
            target: nerve.clone(),
            object_map: (0..nerve.objects().len()).collect(),
            edge_map: (0..nerve.edges().len())
                .map(|e| EdgeImage::Edge {
                    edge: e,
                    forward: true,
                })
                .collect(),
            triangle_map: (0..nerve.triangles().len())
                .map(TriangleImage::Triangle)
                .collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &NerveMorphism) -> Result<NerveMorphism> {
        if self.target != next.source {
            return Err(Error::InvalidNerve("morphisms are not composable".into()));
        }
        let edge_map = self
            .edge_map
            .iter()
            .map(|img| match *img {
                EdgeImage::Identity(o) => EdgeImage::Identity(next.object_map[o]),
                EdgeImage::Edge { edge, forward } => match next.edge_map[edge] {
                    EdgeImage::Identity(o) => EdgeImage::Identity(o),
                    EdgeImage::Edge { edge: e2, forward: f2 } => EdgeImage::Edge {
                        edge: e2,
                        forward: forward == f2,
                    },
                },
            })
            .collect();
        let triangle_map = self
            .triangle_map
            .iter()
            .map(|img| match *img {
                TriangleImage::Degenerate => TriangleImage::Degenerate,
                TriangleImage::Triangle(t) => next.triangle_map[t],
            })
            .collect();
        Ok(NerveMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            object_map: self.object_map.iter().map(|&o| next.object_map[o]).collect(),
            edge_map,
            triangle_map,
        })
    }

    /// Endpoints of an edge image, in the direction of the source edge.
    fn image_endpoints(&self, img: EdgeImage) -> (usize, usize) {
        match img {
            EdgeImage::Identity(o) => (o, o),
            EdgeImage::Edge { edge, forward } => {
                let e = &self.target.edges()[edge];
                if forward {
                    (e.src, e.tgt)
                } else {
                    (e.tgt, e.src)
                }
            }
        }
    }

    /// Checks that object, edge and triangle maps are compatible: edge images
    /// join the images of the endpoints, and faces of a triangle map onto the
    /// faces of its image (or, for degenerate images, onto identities and a
    /// doubled edge).
    pub fn respects_boundaries(&self) -> bool {
        let src_edges = self.source.edges();
        for (e, &img) in self.edge_map.iter().enumerate() {
            let expected = (self.object_map[src_edges[e].src], self.object_map[src_edges[e].tgt]);
            if self.image_endpoints(img) != expected {
                return false;
            }
        }
        for (t, &img) in self.triangle_map.iter().enumerate() {
            let tri = &self.source.triangles()[t];
            let faces = tri.face_edges().map(|f| self.edge_map[f]);
            match img {
                TriangleImage::Triangle(u) => {
                    // the object map need not preserve the order of vertices,
                    // so a face may run against the target face it lands on
                    let target = &self.target.triangles()[u];
                    let mut image = tri.vertices.map(|v| self.object_map[v]);
                    image.sort_unstable();
                    if image != target.vertices {
                        return false;
                    }
                    let (tp, tf) = (target.face_pairs(), target.face_edges());
                    for ((a, b), img) in tri.face_pairs().into_iter().zip(faces) {
                        let (a, b) = (self.object_map[a], self.object_map[b]);
                        let slot = tp.iter().position(|&p| p == (a.min(b), a.max(b)));
                        match slot {
                            Some(s) if img == (EdgeImage::Edge { edge: tf[s], forward: a < b }) => {}
                            _ => return false,
                        }
                    }
                }
                TriangleImage::Degenerate => {
                    let [i, j, k] = tri.vertices.map(|v| self.object_map[v]);
                    if i != j && j != k && i != k {
                        return false;
                    }
                    // faces ij, jk, ik: the two non-identity faces must agree
                    let as_edge = |img: EdgeImage| match img {
                        EdgeImage::Identity(_) => None,
                        EdgeImage::Edge { edge, .. } => Some(edge),
                    };
                    let [fij, fjk, fik] = faces.map(as_edge);
                    let ok = if i == j && j == k {
                        fij.is_none() && fjk.is_none() && fik.is_none()
                    } else if i == j {
                        fij.is_none() && fjk == fik
                    } else if j == k {
                        fjk.is_none() && fij == fik
                    } else {
                        fik.is_none() && fij == fjk
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The nerve morphism of a refinement `U → V` between covers of `space`.
pub fn nerve_map(
    space: &FiniteSpace,
    finer: &Cover,
    coarser: &Cover,
    refinement: &Refinement,
) -> Result<NerveMorphism> {
    refinement.validate(finer, coarser)?;
    let source = component_nerve(space, finer);
    let target = component_nerve(space, coarser);
    let alpha = &refinement.alpha;
    let edge_map = source
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (alpha[e.src], alpha[e.tgt]);
            if a == b {
                return Ok(EdgeImage::Identity(a));
            }
            let comp = e.component.as_ref().unwrap();
            let hit = target.edges_between(a, b).into_iter().find(|&t| {
                comp.is_subset(target.edges()[t].component.as_ref().unwrap())
            });
            match hit {
                Some(edge) => Ok(EdgeImage::Edge { edge, forward: a < b }),
                None => Err(Error::InvalidNerve(format!("no target edge contains `{}`", e.id))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let triangle_map = source
        .triangles()
        .iter()
        .map(|t| {
            let mut img = t.vertices.map(|v| alpha[v]);
            if img[0] == img[1] || img[1] == img[2] || img[0] == img[2] {
                return Ok(TriangleImage::Degenerate);
            }
            img.sort_unstable();
            let comp = t.component.as_ref().unwrap();
            target
                .triangles()
                .iter()
                .position(|u| u.vertices == img && comp.is_subset(u.component.as_ref().unwrap()))
                .map(TriangleImage::Triangle)
                .ok_or_else(|| {
                    Error::InvalidNerve(format!("no target triangle contains `{}`", t.id))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NerveMorphism {
        source,
        target,
        object_map: alpha.clone(),
        edge_map,
        triangle_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{find_refinement, minimal_cover, Cover};

    fn pc4() -> FiniteSpace {
        FiniteSpace::parse("points: a b c d; le: a<c a<d b<c b<d").unwrap()
    }

    fn cd(s: &FiniteSpace) -> Cover {
        Cover::from_names(s, "cd", &[("c", &["a", "b", "c"]), ("d", &["a", "b", "d"])]).unwrap()
    }

    pub(crate) fn circle6() -> (FiniteSpace, Cover) {
        let s = FiniteSpace::parse(
            "points: a0 a1 a2 b0 b1 b2; le: a0<b0 a1<b0 a1<b1 a2<b1 a2<b2 a0<b2",
        )
        .unwrap();
        let c = Cover::from_names(
            &s,
            "arcs",
            &[
                ("0", &["a0", "a1", "b0"]),
                ("1", &["a1", "a2", "b1"]),
                ("2", &["a2", "a0", "b2"]),
            ],
        )
        .unwrap();
        (s, c)
    }

    const TET: &str = "nerve tet\nobjects: 0 1 2 3\n\
        edge e01: 0 1\nedge e02: 0 2\nedge e03: 0 3\nedge e12: 1 2\nedge e13: 1 3\nedge e23: 2 3\n\
        triangle t012: 0 1 2\ntriangle t013: 0 1 3\ntriangle t023: 0 2 3\ntriangle t123: 1 2 3\n";

    #[test]
    fn plain_nerve_examples() {
        let s = pc4();
        let p = plain_nerve(&s, &cd(&s));
        assert_eq!(p.pairs, vec![(0, 1)]);
        assert!(p.triples.is_empty());

        let (c6, arcs) = circle6();
        let p = plain_nerve(&c6, &arcs);
        assert_eq!(p.pairs, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(p.triples.is_empty());

        let one = FiniteSpace::parse("points: p").unwrap();
        let single = minimal_cover(&one).unwrap();
        let p = plain_nerve(&one, &single);
        assert_eq!(p.objects.len(), 1);
        assert!(p.pairs.is_empty() && p.triples.is_empty());
    }

    #[test]
    fn component_nerve_pc4() {
        let s = pc4();
        let n = component_nerve(&s, &cd(&s));
        let ids: Vec<_> = n.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["c-d@a", "c-d@b"]);
        assert!(n.triangles().is_empty());
        assert!(!n.is_plain());

        let m = component_nerve(&s, &minimal_cover(&s).unwrap());
        assert_eq!(m.forget().pairs.len(), 5);
        assert_eq!(m.edges().len(), 6);
        assert_eq!(m.edges_between(2, 3).len(), 2);
        let tri: Vec<_> = m.triangles().iter().map(|t| t.vertices).collect();
        assert_eq!(tri, vec![[0, 2, 3], [1, 2, 3]]);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn tet_is_valid_and_round_trips() {
        let tet = ComponentNerve::parse(TET).unwrap();
        assert!(tet.validate().is_empty());
        assert_eq!(tet.edges().len(), 6);
        assert_eq!(tet.triangles().len(), 4);
        assert!(tet.is_plain());
        assert_eq!(ComponentNerve::parse(&tet.to_text()).unwrap(), tet);
    }

    #[test]
    fn missing_face_diagnostic() {
        let n = ComponentNerve::parse(
            "nerve bad\nobjects: 0 1 2\nedge a: 0 1\nedge b: 1 2\ntriangle t: 0 1 2",
        )
        .unwrap();
        let d = n.validate();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "missing-face");
        assert!(n.ensure_valid().is_err());
    }

    #[test]
    fn explicit_faces_in_any_order() {
        let n = ComponentNerve::parse(
            "objects: x y z\nedge p: x y\nedge q: y z\nedge r: x z\nedge r2: x z\n\
             triangle t: z x y faces r2 q p",
        )
        .unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.triangles()[0].faces, [Some(0), Some(1), Some(3)]);
    }

    #[test]
    fn unknown_face_is_an_error() {
        assert!(ComponentNerve::parse("objects: x y z\nedge p: x y\ntriangle t: x y z faces p q r")
            .is_err());
    }

    #[test]
    fn nerve_map_pc4() {
        let s = pc4();
        let m = minimal_cover(&s).unwrap();
        let u = cd(&s);
        let r = find_refinement(&m, &u).unwrap();
        let nm = nerve_map(&s, &m, &u, &r).unwrap();
        assert!(nm.respects_boundaries());
        let src = &nm.source;
        let e_cd_a = src.edge_index("c-d@a").unwrap();
        assert_eq!(nm.edge_map[e_cd_a], EdgeImage::Edge { edge: 0, forward: true });
        let e_cd_b = src.edge_index("c-d@b").unwrap();
        assert_eq!(nm.edge_map[e_cd_b], EdgeImage::Edge { edge: 1, forward: true });
        let e_ac = src.edge_index("a-c@a").unwrap();
        assert_eq!(nm.edge_map[e_ac], EdgeImage::Identity(0));
        // edge a-d@a lands on the target edge at {a}
        let e_ad = src.edge_index("a-d@a").unwrap();
        assert_eq!(nm.edge_map[e_ad], EdgeImage::Edge { edge: 0, forward: true });
        assert!(nm.triangle_map.iter().all(|t| *t == TriangleImage::Degenerate));
    }

    #[test]
    fn identity_and_composition() {
        let s = pc4();
        let u = cd(&s);
        let id = nerve_map(&s, &u, &u, &Refinement::identity(&u)).unwrap();
        assert_eq!(id, NerveMorphism::identity(&component_nerve(&s, &u)));
        let m = minimal_cover(&s).unwrap();
        let r = find_refinement(&m, &u).unwrap();
        let nm = nerve_map(&s, &m, &u, &r).unwrap();
        assert_eq!(nm.then(&id).unwrap(), nm);
        let whole = Cover::new(&s, "whole", vec!["X".into()], vec![s.top()]).unwrap();
        let r2 = find_refinement(&u, &whole).unwrap();
        let nm2 = nerve_map(&s, &u, &whole, &r2).unwrap();
        let direct = nerve_map(&s, &m, &whole, &r.then(&r2)).unwrap();
        assert_eq!(nm.then(&nm2).unwrap(), direct);
    }
}
