//! Pullback along refinements, homs in the colimit over covers, and
//! evaluation of refinement chains.

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::groupoid::{free_groupoid, representation_class_count};
use crate::nerve::{component_nerve, nerve_map, ComponentNerve, EdgeImage, NerveMorphism};
use crate::perm;
use crate::space::{
    common_refinement, connected_refinement, find_refinement, Cover, FiniteSpace, Refinement,
};

use super::{homs, DatumMorphism, DescentDatum};

/// Restriction of `y` along `nm`: fibers `T_{α(i)}`, transitions read off the
/// image edges (identities over collapsed edges).
pub fn pullback(nm: &NerveMorphism, y: &DescentDatum) -> Result<DescentDatum> {
    if y.nerve() != &nm.target {
        return Err(Error::InvalidDatum(format!(
            "`{}` does not live over the morphism's target",
            y.name()
        )));
    }
    let fibers = nm.object_map.iter().map(|&a| y.fiber(a).to_vec()).collect();
    let transitions = nm
        .edge_map
        .iter()
        .map(|img| match *img {
            EdgeImage::Identity(o) => perm::identity(y.fiber_len(o)),
            EdgeImage::Edge { edge, forward: true } => y.transition(edge).clone(),
            EdgeImage::Edge { edge, forward: false } => perm::inverse(y.transition(edge)),
        })
        .collect();
    DescentDatum::new(y.name(), nm.source.clone(), fibers, transitions)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimitHoms {
    /// The common refinement over which both data were compared.
    pub refinement: Cover,
    pub source: DescentDatum,
    pub target: DescentDatum,
    pub morphisms: Vec<DatumMorphism>,
}

fn over_cover(space: &FiniteSpace, x: &DescentDatum, u: &Cover) -> Result<()> {
    if x.nerve() != &component_nerve(space, u) {
        return Err(Error::InvalidDatum(format!(
            "`{}` is not a datum over the component nerve of `{}`",
            x.name(),
            u.name()
        )));
    }
    Ok(())
}

fn pull_to(
    space: &FiniteSpace,
    w: &Cover,
    u: &Cover,
    r: &Refinement,
    x: &DescentDatum,
) -> Result<DescentDatum> {
    pullback(&nerve_map(space, w, u, r)?, x)
}

/// The lexicographic common refinement with every member split into its
/// components, and the two projections.
fn connected_common_refinement(
    space: &FiniteSpace,
    u: &Cover,
    v: &Cover,
) -> Result<(Cover, Refinement, Refinement)> {
    let (w, ru, rv) = common_refinement(space, u, v)?;
    let (c, r) = connected_refinement(space, &w)?;
    Ok((c, r.then(&ru), r.then(&rv)))
}

/// Morphisms from `x` (over `u`) to `y` (over `v`) computed over the
/// components of the lexicographic common refinement `u ∧ v`.
///
/// Over a disconnected member a datum morphism must use one map for all
/// components, so pullbacks along different refinement maps can fail to be
/// isomorphic there; splitting members into components reaches the stage of
/// the filtered union where the hom-set is attained.
pub fn colimit_hom(
    space: &FiniteSpace,
    x: &DescentDatum,
    u: &Cover,
    y: &DescentDatum,
    v: &Cover,
    limit: usize,
) -> Result<ColimitHoms> {
    over_cover(space, x, u)?;
    over_cover(space, y, v)?;
    let (w, ru, rv) = connected_common_refinement(space, u, v)?;
    let source = pull_to(space, &w, u, &ru, x)?;
    let target = pull_to(space, &w, v, &rv, y)?;
    let morphisms = homs(&source, &target, limit)?;
    Ok(ColimitHoms {
        refinement: w,
        source,
        target,
        morphisms,
    })
}

/// Recomputes the colimit homs over `v ∧ u` and checks that, after matching
/// the index `(j,i)` with `(i,j)`, the same morphisms come out.
pub fn colimit_hom_independent(
    space: &FiniteSpace,
    x: &DescentDatum,
    u: &Cover,
    y: &DescentDatum,
    v: &Cover,
    limit: usize,
) -> Result<bool> {
    let first = colimit_hom(space, x, u, y, v, limit)?;
    let (w2, rv2, ru2) = connected_common_refinement(space, v, u)?;
    let source = pull_to(space, &w2, u, &ru2, x)?;
    let target = pull_to(space, &w2, v, &rv2, y)?;
    let second = homs(&source, &target, limit)?;

    let (w, ru, rv) = connected_common_refinement(space, u, v)?;
    let mut matching = Vec::with_capacity(ru.alpha.len());
    for p in 0..ru.alpha.len() {
        let q = (0..ru2.alpha.len()).find(|&q| {
            ru2.alpha[q] == ru.alpha[p] && rv2.alpha[q] == rv.alpha[p] && w2.open(q) == w.open(p)
        });
        match q {
            Some(q) => matching.push(q),
            None => return Ok(false),
        }
    }
    if matching.len() != ru2.alpha.len() {
        return Ok(false);
    }
    let mut reindexed: Vec<DatumMorphism> = second
        .into_iter()
        .map(|m| DatumMorphism {
            maps: matching.iter().map(|&q| m.maps[q].clone()).collect(),
        })
        .collect();
    reindexed.sort();
    let mut original = first.morphisms;
    original.sort();
    Ok(original == reindexed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProReport {
    pub stage_counts: Vec<usize>,
    pub colimit: usize,
}

/// Isomorphism classes of `k`-representations of the free groupoid on `nerve`.
pub fn stage_count(nerve: &ComponentNerve, k: &GroupTable, limit: usize) -> Result<usize> {
    representation_class_count(&free_groupoid(nerve)?, k, limit)
}

/// Class counts along a chain of covers, coarse to fine, each refined by the
/// next (by `refinements[s]` when given, otherwise by the first admissible
/// one). The colimit count is read at the last stage, which must refine
/// every other stage.
pub fn prosystem_eval(
    space: &FiniteSpace,
    chain: &[Cover],
    refinements: Option<&[Refinement]>,
    k: &GroupTable,
    limit: usize,
) -> Result<ProReport> {
    let Some(last) = chain.last() else {
        return Err(Error::NotAChain("empty chain".into()));
    };
    for s in 0..chain.len().saturating_sub(1) {
        let (coarse, fine) = (&chain[s], &chain[s + 1]);
        match refinements {
            Some(rs) => {
                let r = rs.get(s).ok_or_else(|| {
                    Error::NotAChain(format!("no refinement given for stage {}", s + 1))
                })?;
                r.validate(fine, coarse)
                    .map_err(|e| Error::NotAChain(format!("stage {}: {e}", s + 1)))?;
            }
            None => {
                if find_refinement(fine, coarse).is_none() {
                    return Err(Error::NotAChain(format!(
                        "`{}` does not refine `{}`",
                        fine.name(),
                        coarse.name()
                    )));
                }
            }
        }
    }
    if let Some(c) = chain.iter().find(|c| find_refinement(last, c).is_none()) {
        return Err(Error::NotAChain(format!(
            "final stage `{}` does not refine `{}`",
            last.name(),
            c.name()
        )));
    }
    let stage_counts = chain
        .iter()
        .map(|c| stage_count(&component_nerve(space, c), k, limit))
        .collect::<Result<Vec<_>>>()?;
    let colimit = *stage_counts.last().unwrap();
    Ok(ProReport {
        stage_counts,
        colimit,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::orbits;
    use super::*;
    use crate::groupoid::DEFAULT_ENUMERATION_LIMIT;
    use crate::space::minimal_cover;

    fn whole(s: &FiniteSpace) -> Cover {
        Cover::from_names(s, "whole", &[("X", &["a", "b", "c", "d"])]).unwrap()
    }

    #[test]
    fn pullback_to_minimal_cover() {
        let s = pc4();
        let u = cd(&s);
        let m = minimal_cover(&s).unwrap();
        let r = find_refinement(&m, &u).unwrap();
        let nm = nerve_map(&s, &m, &u, &r).unwrap();
        let p = pullback(&nm, &double_cover()).unwrap();
        assert_eq!(p.nerve().objects().len(), 4);
        assert!(p.is_valid());
        assert_eq!(orbits(&p).blocks.len(), 1);
        let id = NerveMorphism::identity(double_cover().nerve());
        assert_eq!(pullback(&id, &double_cover()).unwrap(), double_cover());
        let c = DescentDatum::constant("c", double_cover().nerve(), &["p".into(), "q".into()]);
        let pc = pullback(&nm, &c).unwrap();
        assert!(pc.transitions().iter().all(|t| perm::is_identity(t)));
    }

    #[test]
    fn colimit_homs_of_double_cover() {
        let s = pc4();
        let u = cd(&s);
        let m = minimal_cover(&s).unwrap();
        let r = find_refinement(&m, &u).unwrap();
        let xm = pullback(&nerve_map(&s, &m, &u, &r).unwrap(), &double_cover()).unwrap();
        let h = colimit_hom(&s, &double_cover(), &u, &xm, &m, 32).unwrap();
        assert_eq!(h.morphisms.len(), 2);
        assert!(colimit_hom_independent(&s, &double_cover(), &u, &xm, &m, 32).unwrap());
        assert!(matches!(
            colimit_hom(&s, &double_cover(), &u, &xm, &m, 12),
            Err(Error::LimitExceeded(_))
        ));
    }

    #[test]
    fn colimit_homs_trivial_cases() {
        let s = pc4();
        let u = cd(&s);
        let w = whole(&s);
        let nw = component_nerve(&s, &w);
        let a = DescentDatum::constant("A", double_cover().nerve(), &["0".into(), "1".into()]);
        let b = DescentDatum::constant("B", &nw, &["x".into(), "y".into(), "z".into()]);
        let h = colimit_hom(&s, &a, &u, &b, &w, 32).unwrap();
        assert_eq!(h.morphisms.len(), 9);
        let empty = DescentDatum::constant("E", &nw, &[]);
        assert!(colimit_hom(&s, &double_cover(), &u, &empty, &w, 32).unwrap().morphisms.is_empty());
    }

    #[test]
    fn pro_eval_pseudocircle() {
        let s = pc4();
        let chain = [whole(&s), cd(&s), minimal_cover(&s).unwrap()];
        let z3 = GroupTable::cyclic(3);
        let r = prosystem_eval(&s, &chain, None, &z3, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(r.stage_counts, vec![1, 3, 3]);
        assert_eq!(r.colimit, 3);
        let reversed = [cd(&s), whole(&s)];
        assert!(matches!(
            prosystem_eval(&s, &reversed, None, &z3, DEFAULT_ENUMERATION_LIMIT),
            Err(Error::NotAChain(_))
        ));
        assert!(prosystem_eval(&s, &[], None, &z3, 10).is_err());
    }

    #[test]
    fn pro_eval_point_and_tet() {
        let p = FiniteSpace::parse("points: x").unwrap();
        let chain = [minimal_cover(&p).unwrap()];
        let s3 = GroupTable::symmetric(3);
        let r = prosystem_eval(&p, &chain, None, &s3, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(r.stage_counts, vec![1]);
        assert_eq!(stage_count(&tet(), &s3, DEFAULT_ENUMERATION_LIMIT).unwrap(), 1);
    }
}
