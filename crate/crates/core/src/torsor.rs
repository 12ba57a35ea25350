//! Non-abelian 1-cocycles, torsors as descent data, first cohomology, and
//! the three-way count comparison between representations of the free
//! groupoid, cohomology classes and torsor isomorphism classes.
//!
//! Transitions act by left multiplication `z ↦ k_e·z`; the torsor structure
//! is the right action `z ↦ z·a`, which commutes with every transition.
//! `x/y = x·y⁻¹` and `x\y = x⁻¹·y`.

use std::collections::HashMap;

use crate::descent::{product, DatumMorphism, DescentDatum};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::groupoid::{conj_classes, eval_word, free_groupoid, groupoid_homs, Hom};
use crate::nerve::{ComponentNerve, Edge, Triangle};
use crate::perm::{self, Perm};
use crate::unionfind::UnionFind;

/// Default cap on the number of cocycle candidates.
pub const DEFAULT_COCYCLE_LIMIT: usize = 1_000_000;

/// Edge-indexed group elements satisfying `k_ik = k_jk · k_ij` on triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub nerve: ComponentNerve,
    pub values: Vec<usize>,
}

fn satisfies_triangles(nerve: &ComponentNerve, k: &GroupTable, values: &[usize]) -> bool {
    nerve.triangles().iter().all(|t| {
        let [ij, jk, ik] = t.face_edges();
        values[ik] == k.mul(values[jk], values[ij])
    })
}

impl Cocycle {
    pub fn new(nerve: &ComponentNerve, k: &GroupTable, values: Vec<usize>) -> Result<Self> {
        nerve.ensure_valid()?;
        if values.len() != nerve.edges().len() || values.iter().any(|&v| v >= k.order()) {
            return Err(Error::InvalidDatum(format!(
                "expected {} values in `{}`",
                nerve.edges().len(),
                k.name()
            )));
        }
        if let Some(t) = nerve.triangles().iter().find(|t| {
            let [ij, jk, ik] = t.face_edges();
            values[ik] != k.mul(values[jk], values[ij])
        }) {
            return Err(Error::CocycleViolation(format!("triangle `{}`", t.id)));
        }
        Ok(Self {
            nerve: nerve.clone(),
            values,
        })
    }

    /// Parses element names separated by whitespace, one per edge in order.
    pub fn parse_values(nerve: &ComponentNerve, k: &GroupTable, input: &str) -> Result<Self> {
        let values = input
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| k.element_index(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nerve, k, values)
    }

    /// The gauge transform `k'_e = c_tgt · k_e · c_src⁻¹`.
    pub fn gauge(&self, k: &GroupTable, c: &[usize]) -> Cocycle {
        Cocycle {
            nerve: self.nerve.clone(),
            values: self
                .nerve
                .edges()
                .iter()
                .zip(&self.values)
                .map(|(e, &v)| k.mul(k.mul(c[e.tgt], v), k.inv(c[e.src])))
                .collect(),
        }
    }
}

/// A torsor datum with its fiberwise right action: `action[i][a]` is the
/// permutation `z ↦ z·a` of the fiber over object `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorDatum {
    pub datum: DescentDatum,
    pub action: Vec<Vec<Perm>>,
}

fn right_action(k: &GroupTable) -> Vec<Perm> {
    (0..k.order())
        .map(|a| (0..k.order()).map(|z| k.mul(z, a)).collect())
        .collect()
}

/// Fibers `K`, transition at `e` the left multiplication by `c(e)`.
pub fn torsor_datum(c: &Cocycle, k: &GroupTable) -> Result<TorsorDatum> {
    let c = Cocycle::new(&c.nerve, k, c.values.clone())?;
    let n = c.nerve.objects().len();
    let transitions = c
        .values
        .iter()
        .map(|&g| (0..k.order()).map(|z| k.mul(g, z)).collect())
        .collect();
    let datum = DescentDatum::new(
        format!("torsor-{}", k.name()),
        c.nerve.clone(),
        vec![k.elements().to_vec(); n],
        transitions,
    )?;
    Ok(TorsorDatum {
        datum,
        action: vec![right_action(k); n],
    })
}

/// Fibers nonempty; each `action[i]` a free and transitive action of `k`;
/// transitions equivariant; and the action map `K × X → X` a datum morphism
/// out of the product with the constant datum on `K`.
pub fn is_torsor(x: &DescentDatum, action: &[Vec<Perm>], k: &GroupTable) -> bool {
    let n = x.nerve().objects().len();
    if action.len() != n {
        return false;
    }
    for (i, act) in action.iter().enumerate() {
        let m = x.fiber_len(i);
        if m == 0 || act.len() != k.order() || act.iter().any(|p| !perm::is_bijection(p, m) || p.len() != m) {
            return false;
        }
        if !perm::is_identity(&act[k.identity()]) {
            return false;
        }
        // (s·a)·b = s·(ab)
        for a in 0..k.order() {
            for b in 0..k.order() {
                if (0..m).any(|s| act[b][act[a][s]] != act[k.mul(a, b)][s]) {
                    return false;
                }
            }
        }
        // free and transitive: a ↦ s·a is a bijection K → S_i
        for s in 0..m {
            let orbit: Vec<usize> = act.iter().map(|p| p[s]).collect();
            if !perm::is_bijection(&orbit, m) || orbit.len() != m {
                return false;
            }
        }
    }
    for (e, edge) in x.nerve().edges().iter().enumerate() {
        let t = x.transition(e);
        for a in 0..k.order() {
            if (0..x.fiber_len(edge.src)).any(|s| t[action[edge.src][a][s]] != action[edge.tgt][a][t[s]]) {
                return false;
            }
        }
    }
    let kx = DescentDatum::constant("K", x.nerve(), k.elements());
    let Ok(prod) = product(&kx, x) else {
        return false;
    };
    let lift = DatumMorphism {
        maps: (0..n)
            .map(|i| {
                let m = x.fiber_len(i);
                (0..k.order() * m).map(|p| action[i][p / m][p % m]).collect()
            })
            .collect(),
    };
    lift.is_morphism(&prod, x)
}

/// All cocycles in lexicographic order of value tuples.
pub fn all_cocycles(nerve: &ComponentNerve, k: &GroupTable, limit: usize) -> Result<Vec<Vec<usize>>> {
    nerve.ensure_valid()?;
    let m = nerve.edges().len();
    let total = (k.order() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if total > limit as u128 {
        return Err(Error::LimitExceeded(format!(
            "{}^{} cocycle candidates exceed the limit {limit}",
            k.order(),
            m
        )));
    }
    let mut out = Vec::new();
    let mut values = vec![0usize; m];
    loop {
        if satisfies_triangles(nerve, k, &values) {
            out.push(values.clone());
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < k.order() {
                break;
            }
            values[pos] = 0;
        }
    }
}

/// Spanning-forest edges: the union of the breadth-first trees used for the
/// vertex-group presentations.
pub fn tree_edges(nerve: &ComponentNerve) -> Result<Vec<usize>> {
    let g = free_groupoid(nerve)?;
    let mut out = Vec::new();
    for comp in g.components() {
        out.extend(crate::groupoid::pi1(&g, comp[0])?.tree_edges);
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Class {
    /// The least member whose spanning-forest values are the identity.
    pub representative: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

/// Orbits of the cocycles under the gauge action of `K^objects`.
pub fn h1(nerve: &ComponentNerve, k: &GroupTable, limit: usize) -> Result<Vec<H1Class>> {
    let cocycles = all_cocycles(nerve, k, limit)?;
    let index: HashMap<&Vec<usize>, usize> = cocycles.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut uf = UnionFind::new(cocycles.len());
    let n = nerve.objects().len();
    let edges = nerve.edges();
    for (ci, c) in cocycles.iter().enumerate() {
        // gauge by g at a single object generates the whole action
        for obj in 0..n {
            for g in 0..k.order() {
                let moved: Vec<usize> = edges
                    .iter()
                    .zip(c)
                    .map(|(e, &v)| {
                        let left = if e.tgt == obj { g } else { k.identity() };
                        let right = if e.src == obj { k.inv(g) } else { k.identity() };
                        k.mul(k.mul(left, v), right)
                    })
                    .collect();
                uf.union(ci, index[&moved]);
            }
        }
    }
    let tree = tree_edges(nerve)?;
    let mut classes: Vec<H1Class> = uf
        .classes()
        .into_iter()
        .map(|members| {
            let members: Vec<Vec<usize>> = members.into_iter().map(|i| cocycles[i].clone()).collect();
            let representative = members
                .iter()
                .find(|c| tree.iter().all(|&e| c[e] == k.identity()))
                .expect("every class meets the spanning-tree gauge")
                .clone();
            H1Class {
                representative,
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(classes)
}

/// Permutations of `K` commuting with the right action, found by filtering
/// all `|K|!` permutations.
pub fn equivariant_permutations(k: &GroupTable) -> Result<Vec<Perm>> {
    if k.order() > 8 {
        return Err(Error::LimitExceeded(format!(
            "{}! permutations of `{}`",
            k.order(),
            k.name()
        )));
    }
    let act = right_action(k);
    Ok(perm::all_perms(k.order())
        .into_iter()
        .filter(|p| act.iter().all(|a| (0..k.order()).all(|z| p[a[z]] == a[p[z]])))
        .collect())
}

/// Partition of the cocycles into isomorphism classes of their torsor data,
/// computed by transporting data along equivariant fiber permutations.
pub fn torsor_classes(nerve: &ComponentNerve, k: &GroupTable, limit: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    let cocycles = all_cocycles(nerve, k, limit)?;
    let index: HashMap<&Vec<usize>, usize> = cocycles.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let equiv = equivariant_permutations(k)?;
    let mut uf = UnionFind::new(cocycles.len());
    let n = nerve.objects().len();
    for (ci, c) in cocycles.iter().enumerate() {
        let t = torsor_datum(&Cocycle::new(nerve, k, c.clone())?, k)?;
        if !is_torsor(&t.datum, &t.action, k) {
            return Err(Error::InvalidDatum("torsor condition fails".into()));
        }
        for obj in 0..n {
            for p in &equiv {
                let pinv = perm::inverse(p);
                // ϑ = p over `obj`, identity elsewhere; transport the transitions
                let transported: Vec<Perm> = nerve
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(e, edge)| {
                        let mut tr = t.datum.transition(e).clone();
                        if edge.src == obj {
                            tr = perm::compose(&tr, &pinv);
                        }
                        if edge.tgt == obj {
                            tr = perm::compose(p, &tr);
                        }
                        tr
                    })
                    .collect();
                // the transported datum is again a torsor datum; read off its cocycle
                let values: Vec<usize> = transported.iter().map(|tr| tr[k.identity()]).collect();
                let expected: Vec<Perm> = values
                    .iter()
                    .map(|&g| (0..k.order()).map(|z| k.mul(g, z)).collect())
                    .collect();
                if expected != transported {
                    return Err(Error::InvalidDatum("transport left the torsor family".into()));
                }
                uf.union(ci, index[&values]);
            }
        }
    }
    Ok(uf
        .classes()
        .into_iter()
        .map(|c| c.into_iter().map(|i| cocycles[i].clone()).collect())
        .collect())
}

/// The cocycle of a representation, in the spanning-tree gauge: each edge
/// carries the image of its tree-closed loop.
pub fn cocycle_of_representation(
    nerve: &ComponentNerve,
    k: &GroupTable,
    per_component: &[(crate::groupoid::GroupPresentation, Hom)],
) -> Vec<usize> {
    let mut values = vec![k.identity(); nerve.edges().len()];
    for (p, hom) in per_component {
        for (e, w) in &p.edge_words {
            values[*e] = eval_word(w, hom, k);
        }
    }
    values
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountComparison {
    pub hom_classes: usize,
    pub h1_classes: usize,
    pub torsor_classes: usize,
    /// Representatives of conjugacy classes land in distinct cohomology
    /// classes and reach all of them.
    pub gauge_bijection: bool,
    /// Cohomologous ⇔ isomorphic torsors, as partitions of the cocycles.
    pub partitions_agree: bool,
}

impl CountComparison {
    pub fn equal(&self) -> bool {
        self.hom_classes == self.h1_classes && self.h1_classes == self.torsor_classes
    }
}

pub fn compare_counts(nerve: &ComponentNerve, k: &GroupTable, limit: usize) -> Result<CountComparison> {
    let g = free_groupoid(nerve)?;
    let per_component = groupoid_homs(&g, k, limit)?;
    let classes_per: Vec<_> = per_component
        .iter()
        .map(|(p, homs)| (p.clone(), conj_classes(homs, k)))
        .collect();
    let hom_classes: usize = classes_per.iter().map(|(_, c)| c.len()).product();

    let h1_list = h1(nerve, k, limit)?;
    let torsors = torsor_classes(nerve, k, limit)?;

    let class_of: HashMap<&Vec<usize>, usize> = h1_list
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.members.iter().map(move |m| (m, i)))
        .collect();
    let mut hit = vec![false; h1_list.len()];
    let mut gauge_bijection = true;
    let mut choice = vec![0usize; classes_per.len()];
    if classes_per.iter().all(|(_, c)| !c.is_empty()) {
        loop {
            let picked: Vec<_> = classes_per
                .iter()
                .zip(&choice)
                .map(|((p, cs), &i)| (p.clone(), cs[i].representative.clone()))
                .collect();
            let c = cocycle_of_representation(nerve, k, &picked);
            match class_of.get(&c) {
                Some(&i) if !hit[i] => hit[i] = true,
                _ => gauge_bijection = false,
            }
            let mut pos = choice.len();
            let done = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < classes_per[pos].1.len() {
                    break false;
                }
                choice[pos] = 0;
            };
            if done {
                break;
            }
        }
    }
    gauge_bijection &= hit.iter().all(|&h| h);

    let mut a: Vec<Vec<Vec<usize>>> = h1_list.iter().map(|c| c.members.clone()).collect();
    let mut b = torsors.clone();
    for part in a.iter_mut().chain(b.iter_mut()) {
        part.sort();
    }
    a.sort();
    b.sort();

    Ok(CountComparison {
        hom_classes,
        h1_classes: h1_list.len(),
        torsor_classes: torsors.len(),
        gauge_bijection,
        partitions_agree: a == b,
    })
}

/// The bijection `s(z) = (y/x)/z` with its inverse `h(z) = z\(y/x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorTriple {
    pub s: Perm,
    pub h: Perm,
    /// `s∘h = h∘s = id`.
    pub inverse_checked: bool,
    /// The square against the printed descent map holds for every `z, u`.
    pub square_checked: bool,
}

/// The descent map of the canonical torsor as printed:
/// `σ(z, u, v) = (v/(z·u), v, u)`, returning the first component.
pub fn sigma_printed(k: &GroupTable, z: usize, u: usize, v: usize) -> usize {
    k.div(v, k.mul(z, u))
}

/// The descent map forced by the charts `z ↦ z·u` of `ε(x, u) = (x·u, u)`:
/// the fiber element over `v` naming the same point is `(z·u)/v`.
pub fn sigma_from_charts(k: &GroupTable, z: usize, u: usize, v: usize) -> usize {
    k.div(k.mul(z, u), v)
}

pub fn action_triple_for_torsor(k: &GroupTable, x: usize, y: usize) -> TorsorTriple {
    let yx = k.div(y, x);
    let s: Perm = (0..k.order()).map(|z| k.div(yx, z)).collect();
    let h: Perm = (0..k.order()).map(|z| k.ldiv(z, yx)).collect();
    let inverse_checked = perm::is_identity(&perm::compose(&s, &h)) && perm::is_identity(&perm::compose(&h, &s));
    let square_checked = (0..k.order()).all(|u| {
        (0..k.order()).all(|z| sigma_printed(k, z, k.mul(x, u), k.mul(y, u)) == s[z])
    });
    TorsorTriple {
        s,
        h,
        inverse_checked,
        square_checked,
    }
}

/// Counts of violated descent laws for a candidate descent map on `K × K × K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaLaws {
    /// `σ(z, u, u) = z`, over all `(z, u)`.
    pub identity_failures: usize,
    pub identity_instances: usize,
    /// `σ(σ(z, u, v), v, u) = z`, over all `(z, u, v)`.
    pub inverse_failures: usize,
    pub inverse_instances: usize,
    /// `σ(σ(z, u, v), v, w) = σ(z, u, w)`, over all `(z, u, v, w)`.
    pub cocycle_failures: usize,
    pub cocycle_instances: usize,
}

impl SigmaLaws {
    pub fn all_hold(&self) -> bool {
        self.identity_failures == 0 && self.inverse_failures == 0 && self.cocycle_failures == 0
    }
}

pub fn sigma_laws(k: &GroupTable, sigma: impl Fn(&GroupTable, usize, usize, usize) -> usize) -> SigmaLaws {
    let n = k.order();
    let mut laws = SigmaLaws {
        identity_failures: 0,
        identity_instances: n * n,
        inverse_failures: 0,
        inverse_instances: n * n * n,
        cocycle_failures: 0,
        cocycle_instances: n * n * n * n,
    };
    for z in 0..n {
        for u in 0..n {
            laws.identity_failures += usize::from(sigma(k, z, u, u) != z);
            for v in 0..n {
                let zv = sigma(k, z, u, v);
                laws.inverse_failures += usize::from(sigma(k, zv, v, u) != z);
                for w in 0..n {
                    laws.cocycle_failures += usize::from(sigma(k, zv, v, w) != sigma(k, z, u, w));
                }
            }
        }
    }
    laws
}

/// The canonical torsor as a descent datum: one object per element `u` of
/// `K` (the points of the torsor), edges and triangles for all pairs and
/// triples, fibers `K`, and the chart-derived transitions.
pub fn canonical_torsor_datum(k: &GroupTable) -> Result<DescentDatum> {
    let n = k.order();
    let objects: Vec<String> = k.elements().to_vec();
    let mut edges = Vec::new();
    let mut edge_of = HashMap::new();
    for u in 0..n {
        for v in u + 1..n {
            edge_of.insert((u, v), edges.len());
            edges.push(Edge {
                id: format!("{}-{}", objects[u], objects[v]),
                src: u,
                tgt: v,
                component: None,
            });
        }
    }
    let mut triangles = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                triangles.push(Triangle {
                    id: format!("{}-{}-{}", objects[u], objects[v], objects[w]),
                    vertices: [u, v, w],
                    faces: [Some(edge_of[&(u, v)]), Some(edge_of[&(v, w)]), Some(edge_of[&(u, w)])],
                    component: None,
                });
            }
        }
    }
    let nerve = ComponentNerve::checked(format!("T{}", k.name()), objects, edges, triangles)?;
    let transitions = nerve
        .edges()
        .iter()
        .map(|e| (0..n).map(|z| sigma_from_charts(k, z, e.src, e.tgt)).collect())
        .collect();
    DescentDatum::from_sizes(format!("canonical-{}", k.name()), nerve, &vec![n; n], transitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::{is_connected, orbits};
    use crate::nerve::component_nerve;
    use crate::space::{Cover, FiniteSpace};

    fn c3() -> ComponentNerve {
        ComponentNerve::parse("nerve c3; objects: 0 1 2\nedge a: 0 1\nedge b: 1 2\nedge c: 0 2").unwrap()
    }

    fn tet() -> ComponentNerve {
        ComponentNerve::parse(
            "objects: 0 1 2 3\nedge e01: 0 1\nedge e02: 0 2\nedge e03: 0 3\nedge e12: 1 2\n\
             edge e13: 1 3\nedge e23: 2 3\ntriangle a: 0 1 2\ntriangle b: 0 1 3\n\
             triangle c: 0 2 3\ntriangle d: 1 2 3",
        )
        .unwrap()
    }

    fn pc4_cd() -> ComponentNerve {
        let s = FiniteSpace::parse("points: a b c d; le: a<c a<d b<c b<d").unwrap();
        let u = Cover::from_names(&s, "cd", &[("c", &["a", "b", "c"]), ("d", &["a", "b", "d"])]).unwrap();
        component_nerve(&s, &u)
    }

    #[test]
    fn torsor_data() {
        let z3 = GroupTable::cyclic(3);
        let t = torsor_datum(&Cocycle::new(&c3(), &z3, vec![1, 0, 0]).unwrap(), &z3).unwrap();
        assert!(is_connected(&t.datum));
        assert!(is_torsor(&t.datum, &t.action, &z3));
        let t = torsor_datum(&Cocycle::new(&c3(), &z3, vec![0, 0, 0]).unwrap(), &z3).unwrap();
        assert_eq!(orbits(&t.datum).blocks.len(), 3);
        let z2 = GroupTable::cyclic(2);
        let t = torsor_datum(&Cocycle::new(&pc4_cd(), &z2, vec![0, 1]).unwrap(), &z2).unwrap();
        assert!(is_connected(&t.datum));
        assert_eq!(t.datum.transitions(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn torsor_predicate() {
        let z2 = GroupTable::cyclic(2);
        let n = pc4_cd();
        let c = DescentDatum::constant("c", &n, &["p".into(), "q".into()]);
        let trivial = vec![vec![vec![0, 1], vec![0, 1]]; 2];
        assert!(!is_torsor(&c, &trivial, &z2));
        let d = DescentDatum::from_sizes("d", n, &[2, 2], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let swap = vec![vec![vec![0, 1], vec![1, 0]]; 2];
        assert!(is_torsor(&d, &swap, &z2));
    }

    #[test]
    fn rejects_non_cocycles() {
        let s3 = GroupTable::symmetric(3);
        let mut v = vec![0; 6];
        v[0] = 1;
        assert!(matches!(Cocycle::new(&tet(), &s3, v), Err(Error::CocycleViolation(_))));
    }

    #[test]
    fn h1_examples() {
        let z2 = GroupTable::cyclic(2);
        let classes = h1(&c3(), &z2, DEFAULT_COCYCLE_LIMIT).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.members.len() == 4));
        assert_eq!(h1(&tet(), &GroupTable::symmetric(3), DEFAULT_COCYCLE_LIMIT).unwrap().len(), 1);
        assert_eq!(h1(&pc4_cd(), &GroupTable::cyclic(3), DEFAULT_COCYCLE_LIMIT).unwrap().len(), 3);
        assert!(h1(&tet(), &GroupTable::symmetric(3), 100).is_err());
    }

    #[test]
    fn compare_examples() {
        for (nerve, k, expected) in [
            (c3(), GroupTable::cyclic(2), 2),
            (tet(), GroupTable::symmetric(3), 1),
            (pc4_cd(), GroupTable::cyclic(3), 3),
        ] {
            let r = compare_counts(&nerve, &k, DEFAULT_COCYCLE_LIMIT).unwrap();
            assert_eq!((r.hom_classes, r.h1_classes, r.torsor_classes), (expected, expected, expected));
            assert!(r.equal() && r.gauge_bijection && r.partitions_agree);
        }
    }

    #[test]
    fn torsor_action_triples() {
        let z3 = GroupTable::cyclic(3);
        let t = action_triple_for_torsor(&z3, 1, 2);
        assert_eq!(t.s, vec![1, 0, 2]);
        assert!(t.inverse_checked && t.square_checked);
        let s3 = GroupTable::symmetric(3);
        for x in 0..6 {
            let t = action_triple_for_torsor(&s3, x, x);
            assert_eq!(t.s, (0..6).map(|z| s3.inv(z)).collect::<Vec<_>>());
            assert!(t.inverse_checked);
        }
    }

    #[test]
    fn sigma_forms() {
        let s3 = GroupTable::symmetric(3);
        assert!(sigma_laws(&s3, sigma_from_charts).all_hold());
        let printed = sigma_laws(&s3, sigma_printed);
        // on the diagonal the printed map is z ↦ z⁻¹, wrong at the two 3-cycles
        assert_eq!(printed.identity_failures, 2 * 6);
        assert!(!printed.all_hold());
        // in an elementary abelian 2-group inversion is trivial and both agree
        let z2 = GroupTable::cyclic(2);
        assert!(sigma_laws(&z2, sigma_printed).all_hold());
    }

    #[test]
    fn canonical_datum_is_valid() {
        let s3 = GroupTable::symmetric(3);
        let d = canonical_torsor_datum(&s3).unwrap();
        assert!(d.is_valid());
        // the invariant z·u names the point of the torsor
        assert_eq!(orbits(&d).blocks.len(), 6);
    }
}
