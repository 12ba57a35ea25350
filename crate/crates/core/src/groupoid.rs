//! The free groupoid on a component nerve, spanning-tree presentations of
//! its vertex groups, path evaluation against descent data, and enumeration
//! of representations into finite groups.
//!
//! Words are written in path order: the first letter is traversed first.
//! Evaluating a word in a group composes right to left, so the word
//! `g h` evaluates to `φ(h)·φ(g)`, matching the cocycle law
//! `k_ik = k_jk · k_ij`.

use std::collections::{HashMap, VecDeque};

use crate::descent::DescentDatum;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::nerve::{ComponentNerve, EdgeImage, NerveMorphism};
use crate::perm::{self, Perm};

/// Default cap on the number of candidate assignments examined.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    fn invert(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

pub type Word = Vec<Letter>;

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.invert()).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.invert()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by stripping cancelling letters at both ends.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].invert() {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

/// Evaluates a word under an assignment of group elements to generators.
pub fn eval_word(w: &[Letter], images: &[usize], k: &GroupTable) -> usize {
    w.iter().fold(k.identity(), |acc, l| {
        let v = images[l.generator];
        k.mul(if l.inverse { k.inv(v) } else { v }, acc)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// Generators are the nerve's edges (same indices); one relation per triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidPresentation {
    pub objects: Vec<String>,
    pub generators: Vec<Generator>,
    /// Relation words `e_ij e_jk e_ik⁻¹`, each a loop at `i`.
    pub relations: Vec<Word>,
}

impl GroupoidPresentation {
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = crate::unionfind::UnionFind::new(self.objects.len());
        for g in &self.generators {
            uf.union(g.src, g.tgt);
        }
        uf.classes()
    }

    /// True when an edge-indexed assignment satisfies every relation.
    pub fn satisfied_by(&self, values: &[usize], k: &GroupTable) -> bool {
        self.relations
            .iter()
            .all(|r| eval_word(r, values, k) == k.identity())
    }
}

pub fn free_groupoid(nerve: &ComponentNerve) -> Result<GroupoidPresentation> {
    nerve.ensure_valid()?;
    let generators = nerve
        .edges()
        .iter()
        .map(|e| Generator {
            name: e.id.clone(),
            src: e.src,
            tgt: e.tgt,
        })
        .collect();
    let relations = nerve
        .triangles()
        .iter()
        .map(|t| {
            let [ij, jk, ik] = t.face_edges();
            vec![
                Letter::new(ij, false),
                Letter::new(jk, false),
                Letter::new(ik, true),
            ]
        })
        .collect();
    Ok(GroupoidPresentation {
        objects: nerve.objects().to_vec(),
        generators,
        relations,
    })
}

/// A vertex-group presentation obtained by contracting a spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub base: usize,
    /// Objects of the connected component of `base`.
    pub component: Vec<usize>,
    pub tree_edges: Vec<usize>,
    /// Surviving generators, named by their groupoid generator (edge).
    pub generators: Vec<String>,
    pub generator_edges: Vec<usize>,
    pub relators: Vec<Word>,
    /// For every groupoid generator in the component, the word in the
    /// surviving generators representing its tree-closed loop at `base`.
    pub edge_words: Vec<(usize, Word)>,
}

impl GroupPresentation {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn satisfied_by(&self, images: &[usize], k: &GroupTable) -> bool {
        self.relators
            .iter()
            .all(|r| eval_word(r, images, k) == k.identity())
    }

    /// The free presentation of rank `r` (no relators), for tests and examples.
    pub fn free(rank: usize) -> Self {
        Self {
            base: 0,
            component: vec![0],
            tree_edges: Vec::new(),
            generators: (0..rank).map(|g| format!("x{g}")).collect(),
            generator_edges: (0..rank).collect(),
            relators: Vec::new(),
            edge_words: (0..rank).map(|g| (g, vec![Letter::new(g, false)])).collect(),
        }
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter()
            .map(|l| {
                let n = &self.generators[l.generator];
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Breadth-first spanning tree from `base`, neighbours visited in object
/// order (parallel edges by edge order), then tree contraction, reduction and
/// Tietze elimination of generators that occur exactly once in a relator.
pub fn pi1(g: &GroupoidPresentation, base: usize) -> Result<GroupPresentation> {
    let n = g.objects.len();
    if base >= n {
        return Err(Error::UnknownIdentifier(format!("object #{base}")));
    }
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, gen) in g.generators.iter().enumerate() {
        incident[gen.src].push((gen.tgt, e));
        incident[gen.tgt].push((gen.src, e));
    }
    for list in &mut incident {
        list.sort_unstable();
    }

    let mut path_to: Vec<Option<Word>> = vec![None; n];
    path_to[base] = Some(Vec::new());
    let mut tree_edges = Vec::new();
    let mut component = Vec::new();
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        component.push(v);
        for &(w, e) in &incident[v] {
            if path_to[w].is_none() {
                let mut p = path_to[v].clone().unwrap();
                p.push(Letter::new(e, g.generators[e].src != v));
                path_to[w] = Some(p);
                tree_edges.push(e);
                queue.push_back(w);
            }
        }
    }
    component.sort_unstable();
    tree_edges.sort_unstable();

    let in_component = |e: usize| path_to[g.generators[e].src].is_some();
    let component_edges: Vec<usize> = (0..g.generators.len()).filter(|&e| in_component(e)).collect();
    let mut generator_edges: Vec<usize> = component_edges
        .iter()
        .copied()
        .filter(|e| tree_edges.binary_search(e).is_err())
        .collect();
    let slot: HashMap<usize, usize> = generator_edges
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, k))
        .collect();
    let rewrite = |w: &[Letter]| -> Word {
        w.iter()
            .filter_map(|l| slot.get(&l.generator).map(|&k| Letter::new(k, l.inverse)))
            .collect()
    };

    let mut relators: Vec<Word> = g
        .relations
        .iter()
        .filter(|r| r.first().is_some_and(|l| in_component(l.generator)))
        .map(|r| cyclic_reduce(&rewrite(r)))
        .filter(|r| !r.is_empty())
        .collect();
    let mut edge_words: Vec<(usize, Word)> = component_edges
        .iter()
        .map(|&e| {
            let w = match slot.get(&e) {
                Some(&k) => vec![Letter::new(k, false)],
                None => Vec::new(),
            };
            (e, w)
        })
        .collect();

    // Tietze: g = w with w free of g, iterated to a fixed point
    loop {
        let found = relators.iter().enumerate().find_map(|(ri, r)| {
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for l in r {
                *counts.entry(l.generator).or_default() += 1;
            }
            counts
                .into_iter()
                .filter(|&(_, c)| c == 1)
                .map(|(gen, _)| gen)
                .min()
                .map(|gen| (ri, gen))
        });
        let Some((ri, gen)) = found else { break };
        let r = relators.remove(ri);
        let pos = r.iter().position(|l| l.generator == gen).unwrap();
        // rotate so the eliminated letter comes first: r ≡ g^ε · w
        let rotated: Word = r[pos..].iter().chain(&r[..pos]).copied().collect();
        let rest = &rotated[1..];
        let value = if rotated[0].inverse {
            rest.to_vec()
        } else {
            invert_word(rest)
        };
        // renumber `value` itself before substituting elsewhere
        let renumber = |w: &[Letter]| -> Word {
            w.iter()
                .map(|l| {
                    let k = if l.generator > gen { l.generator - 1 } else { l.generator };
                    Letter::new(k, l.inverse)
                })
                .collect()
        };
        let value_renumbered = renumber(&value);
        let substitute_all = |w: &[Letter]| -> Word {
            let mut out = Vec::new();
            for l in w {
                if l.generator == gen {
                    if l.inverse {
                        out.extend(invert_word(&value_renumbered));
                    } else {
                        out.extend(value_renumbered.iter().copied());
                    }
                } else {
                    out.extend(renumber(&[*l]));
                }
            }
            out
        };
        relators = relators
            .iter()
            .map(|w| cyclic_reduce(&substitute_all(w)))
            .filter(|w| !w.is_empty())
            .collect();
        for (_, w) in &mut edge_words {
            *w = free_reduce(&substitute_all(w));
        }
        generator_edges.remove(gen);
    }

    let generators = generator_edges
        .iter()
        .map(|&e| g.generators[e].name.clone())
        .collect();
    Ok(GroupPresentation {
        base,
        component,
        tree_edges,
        generators,
        generator_edges,
        relators,
        edge_words,
    })
}

/// A walk in the nerve's object graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWord {
    pub start: usize,
    /// `(edge, forward)`; forward steps go from the edge's source to its target.
    pub steps: Vec<(usize, bool)>,
}

impl PathWord {
    pub fn empty(start: usize) -> Self {
        Self {
            start,
            steps: Vec::new(),
        }
    }

    /// Checks that consecutive steps share endpoints and returns the end object.
    pub fn end(&self, nerve: &ComponentNerve) -> Result<usize> {
        if self.start >= nerve.objects().len() {
            return Err(Error::InvalidPath(format!("unknown start object #{}", self.start)));
        }
        let mut at = self.start;
        for &(e, forward) in &self.steps {
            let edge = nerve
                .edges()
                .get(e)
                .ok_or_else(|| Error::InvalidPath(format!("unknown edge #{e}")))?;
            let (from, to) = if forward {
                (edge.src, edge.tgt)
            } else {
                (edge.tgt, edge.src)
            };
            if from != at {
                return Err(Error::InvalidPath(format!(
                    "step along `{}` does not start at `{}`",
                    edge.id,
                    nerve.objects()[at]
                )));
            }
            at = to;
        }
        Ok(at)
    }

    pub fn then(&self, other: &PathWord) -> PathWord {
        PathWord {
            start: self.start,
            steps: self.steps.iter().chain(&other.steps).copied().collect(),
        }
    }
}

/// The composite bijection `S_start → S_end` of the transitions along a path.
pub fn evaluate_path(datum: &DescentDatum, path: &PathWord) -> Result<Perm> {
    path.end(datum.nerve())?;
    let mut acc = perm::identity(datum.fiber_len(path.start));
    for &(e, forward) in &path.steps {
        let t = datum.transition(e);
        acc = if forward {
            perm::compose(t, &acc)
        } else {
            perm::compose(&perm::inverse(t), &acc)
        };
    }
    Ok(acc)
}

pub type Hom = Vec<usize>;

/// All assignments of generators to elements of `k` that satisfy every
/// relator, in lexicographic order of image tuples.
pub fn hom_to_group(p: &GroupPresentation, k: &GroupTable, limit: usize) -> Result<Vec<Hom>> {
    let r = p.rank();
    let total = (k.order() as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if total > limit as u128 {
        return Err(Error::LimitExceeded(format!(
            "{}^{} candidate homomorphisms exceed the limit {}",
            k.order(),
            r,
            limit
        )));
    }
    let mut out = Vec::new();
    let mut images = vec![0usize; r];
    loop {
        if p.satisfied_by(&images, k) {
            out.push(images.clone());
        }
        // odometer, last generator fastest
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            images[pos] += 1;
            if images[pos] < k.order() {
                break;
            }
            images[pos] = 0;
        }
    }
}

/// Homomorphisms from each connected component's vertex group (based at the
/// component's least object).
pub fn groupoid_homs(
    g: &GroupoidPresentation,
    k: &GroupTable,
    limit: usize,
) -> Result<Vec<(GroupPresentation, Vec<Hom>)>> {
    g.components()
        .into_iter()
        .map(|comp| {
            let p = pi1(g, comp[0])?;
            let homs = hom_to_group(&p, k, limit)?;
            Ok((p, homs))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClass {
    pub representative: Hom,
    pub members: Vec<Hom>,
}

/// Orbits under simultaneous conjugation; the representative is the
/// lexicographically least member and classes are sorted by it.
pub fn conj_classes(homs: &[Hom], k: &GroupTable) -> Vec<ConjClass> {
    let mut seen: HashMap<&Hom, ()> = HashMap::new();
    let mut out = Vec::new();
    for h in homs {
        if seen.contains_key(h) {
            continue;
        }
        let mut members: Vec<Hom> = (0..k.order())
            .map(|g| h.iter().map(|&x| k.conjugate(g, x)).collect())
            .collect();
        members.sort();
        members.dedup();
        for m in &members {
            if let Some(orig) = homs.iter().find(|x| *x == m) {
                seen.insert(orig, ());
            }
        }
        out.push(ConjClass {
            representative: members[0].clone(),
            members,
        });
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    out
}

/// Number of isomorphism classes of `k`-representations of the groupoid:
/// the product over components of the conjugacy-class counts.
pub fn representation_class_count(
    g: &GroupoidPresentation,
    k: &GroupTable,
    limit: usize,
) -> Result<usize> {
    Ok(groupoid_homs(g, k, limit)?
        .iter()
        .map(|(_, homs)| conj_classes(homs, k).len())
        .product())
}

/// The map of presentations induced by a nerve morphism: every source
/// generator goes to a path in the target (empty for identity edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationMorphism {
    pub object_map: Vec<usize>,
    pub generator_images: Vec<PathWord>,
}

pub fn groupoid_morphism(nm: &NerveMorphism) -> PresentationMorphism {
    let generator_images = nm
        .edge_map
        .iter()
        .enumerate()
        .map(|(e, img)| {
            let start = nm.object_map[nm.source.edges()[e].src];
            match *img {
                EdgeImage::Identity(o) => PathWord::empty(o),
                EdgeImage::Edge { edge, forward } => PathWord {
                    start,
                    steps: vec![(edge, forward)],
                },
            }
        })
        .collect();
    PresentationMorphism {
        object_map: nm.object_map.clone(),
        generator_images,
    }
}

impl PresentationMorphism {
    /// Pulls an edge-indexed assignment on the target groupoid back to the
    /// source generators.
    pub fn precompose(&self, target_values: &[usize], k: &GroupTable) -> Vec<usize> {
        self.generator_images
            .iter()
            .map(|p| {
                p.steps.iter().fold(k.identity(), |acc, &(e, forward)| {
                    let v = target_values[e];
                    k.mul(if forward { v } else { k.inv(v) }, acc)
                })
            })
            .collect()
    }

    pub fn then(&self, next: &PresentationMorphism) -> PresentationMorphism {
        let generator_images = self
            .generator_images
            .iter()
            .map(|p| {
                let mut out = PathWord::empty(next.object_map[p.start]);
                for &(e, forward) in &p.steps {
                    let img = &next.generator_images[e];
                    let steps: Vec<(usize, bool)> = if forward {
                        img.steps.clone()
                    } else {
                        img.steps.iter().rev().map(|&(e, f)| (e, !f)).collect()
                    };
                    out.steps.extend(steps);
                }
                out
            })
            .collect();
        PresentationMorphism {
            object_map: self.object_map.iter().map(|&o| next.object_map[o]).collect(),
            generator_images,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerve::component_nerve;
    use crate::space::{minimal_cover, Cover, FiniteSpace};

    fn pc4() -> FiniteSpace {
        FiniteSpace::parse("points: a b c d; le: a<c a<d b<c b<d").unwrap()
    }

    fn cd(s: &FiniteSpace) -> Cover {
        Cover::from_names(s, "cd", &[("c", &["a", "b", "c"]), ("d", &["a", "b", "d"])]).unwrap()
    }

    fn tet() -> ComponentNerve {
        ComponentNerve::parse(
            "objects: 0 1 2 3\nedge e01: 0 1\nedge e02: 0 2\nedge e03: 0 3\nedge e12: 1 2\n\
             edge e13: 1 3\nedge e23: 2 3\ntriangle a: 0 1 2\ntriangle b: 0 1 3\n\
             triangle c: 0 2 3\ntriangle d: 1 2 3",
        )
        .unwrap()
    }

    fn c3() -> ComponentNerve {
        ComponentNerve::parse("objects: 0 1 2\nedge a: 0 1\nedge b: 1 2\nedge c: 0 2").unwrap()
    }

    #[test]
    fn free_groupoid_counts() {
        let s = pc4();
        let g = free_groupoid(&component_nerve(&s, &cd(&s))).unwrap();
        assert_eq!((g.objects.len(), g.generators.len(), g.relations.len()), (2, 2, 0));
        let g = free_groupoid(&tet()).unwrap();
        assert_eq!((g.objects.len(), g.generators.len(), g.relations.len()), (4, 6, 4));
        let single = ComponentNerve::parse("objects: x").unwrap();
        let g = free_groupoid(&single).unwrap();
        assert!(g.generators.is_empty() && g.relations.is_empty());
    }

    #[test]
    fn pi1_examples() {
        let s = pc4();
        let g = free_groupoid(&component_nerve(&s, &cd(&s))).unwrap();
        let p = pi1(&g, 0).unwrap();
        assert_eq!((p.rank(), p.relators.len()), (1, 0));
        assert_eq!(p.generators, ["c-d@b"]);

        let p = pi1(&free_groupoid(&tet()).unwrap(), 0).unwrap();
        assert!(p.is_trivial());
        assert!(p.relators.is_empty());

        let p = pi1(&free_groupoid(&c3()).unwrap(), 0).unwrap();
        assert_eq!((p.rank(), p.relators.len()), (1, 0));

        let g = free_groupoid(&component_nerve(&s, &minimal_cover(&s).unwrap())).unwrap();
        let p = pi1(&g, 0).unwrap();
        assert_eq!((p.rank(), p.relators.len()), (1, 0));
        assert!(pi1(&g, 9).is_err());
    }

    #[test]
    fn pi1_edge_words_respect_relations() {
        // every relation of the groupoid, rewritten through edge_words, is
        // trivial under any homomorphism
        let g = free_groupoid(&tet()).unwrap();
        let p = pi1(&g, 0).unwrap();
        assert!(p.edge_words.iter().all(|(_, w)| w.is_empty()));
    }

    #[test]
    fn hom_counts() {
        let z3 = GroupTable::cyclic(3);
        let s3 = GroupTable::symmetric(3);
        let z2 = GroupTable::cyclic(2);
        let s = pc4();
        let g = free_groupoid(&component_nerve(&s, &cd(&s))).unwrap();
        let p = pi1(&g, 0).unwrap();
        assert_eq!(hom_to_group(&p, &z3, DEFAULT_ENUMERATION_LIMIT).unwrap().len(), 3);
        let t = pi1(&free_groupoid(&tet()).unwrap(), 0).unwrap();
        assert_eq!(hom_to_group(&t, &s3, DEFAULT_ENUMERATION_LIMIT).unwrap().len(), 1);
        let f2 = GroupPresentation::free(2);
        assert_eq!(hom_to_group(&f2, &z2, DEFAULT_ENUMERATION_LIMIT).unwrap().len(), 4);
        assert!(hom_to_group(&GroupPresentation::free(9), &s3, 1000).is_err());
    }

    #[test]
    fn conjugacy_classes() {
        let z3 = GroupTable::cyclic(3);
        let s3 = GroupTable::symmetric(3);
        let f1 = GroupPresentation::free(1);
        let homs = hom_to_group(&f1, &z3, 100).unwrap();
        assert_eq!(conj_classes(&homs, &z3).len(), 3);
        let homs = hom_to_group(&f1, &s3, 100).unwrap();
        assert_eq!(homs.len(), 6);
        let classes = conj_classes(&homs, &s3);
        let sizes: Vec<_> = classes.iter().map(|c| c.members.len()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(conj_classes(&[vec![]], &s3).len(), 1);
    }

    #[test]
    fn word_reduction() {
        let a = Letter::new(0, false);
        let a_ = Letter::new(0, true);
        let b = Letter::new(1, false);
        assert_eq!(free_reduce(&[a, b, Letter::new(1, true), a_]), Vec::<Letter>::new());
        assert_eq!(cyclic_reduce(&[a, b, a_]), vec![b]);
        let z3 = GroupTable::cyclic(3);
        assert_eq!(eval_word(&[a, b, b], &[1, 2], &z3), 2);
    }

    #[test]
    fn figure_eight_rank_two() {
        let n = ComponentNerve::parse(
            "objects: 0 1 2\nedge a: 0 1\nedge b: 0 1\nedge c: 0 2\nedge d: 0 2",
        )
        .unwrap();
        let p = pi1(&free_groupoid(&n).unwrap(), 0).unwrap();
        assert_eq!(p.rank(), 2);
        let z2 = GroupTable::cyclic(2);
        assert_eq!(hom_to_group(&p, &z2, 100).unwrap().len(), 4);
    }

    #[test]
    fn disconnected_components() {
        let n = ComponentNerve::parse("objects: 0 1 2 3\nedge a: 0 1\nedge b: 0 1\nedge c: 2 3")
            .unwrap();
        let g = free_groupoid(&n).unwrap();
        let p = pi1(&g, 2).unwrap();
        assert_eq!(p.component, vec![2, 3]);
        assert_eq!(p.rank(), 0);
        let z3 = GroupTable::cyclic(3);
        assert_eq!(representation_class_count(&g, &z3, 1000).unwrap(), 3);
    }
}
