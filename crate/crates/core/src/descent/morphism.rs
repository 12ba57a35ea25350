use crate::error::{Error, Result};

use super::DescentDatum;

/// Default bound on the total source fiber size for hom enumeration.
pub const DEFAULT_HOM_LIMIT: usize = 12;

/// A family of fiber maps `S_i → T_i`; source and target are passed alongside.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DatumMorphism {
    pub maps: Vec<Vec<usize>>,
}

impl DatumMorphism {
    pub fn identity(x: &DescentDatum) -> Self {
        Self {
            maps: (0..x.nerve().objects().len())
                .map(|i| (0..x.fiber_len(i)).collect())
                .collect(),
        }
    }

    /// Checks shapes and every commuting square `ϑ_j ∘ t_e = t'_e ∘ ϑ_i`.
    pub fn is_morphism(&self, x: &DescentDatum, y: &DescentDatum) -> bool {
        if x.nerve() != y.nerve() || self.maps.len() != x.fibers().len() {
            return false;
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.len() != x.fiber_len(i) || m.iter().any(|&t| t >= y.fiber_len(i)) {
                return false;
            }
        }
        x.nerve().edges().iter().enumerate().all(|(e, edge)| {
            (0..x.fiber_len(edge.src)).all(|s| {
                self.maps[edge.tgt][x.transition(e)[s]] == y.transition(e)[self.maps[edge.src][s]]
            })
        })
    }

    pub fn ensure_morphism(&self, x: &DescentDatum, y: &DescentDatum) -> Result<()> {
        if self.is_morphism(x, y) {
            Ok(())
        } else {
            Err(Error::InvalidMorphism(format!(
                "maps do not form a morphism `{}` → `{}`",
                x.name(),
                y.name()
            )))
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &DatumMorphism) -> DatumMorphism {
        DatumMorphism {
            maps: self
                .maps
                .iter()
                .zip(&next.maps)
                .map(|(f, g)| f.iter().map(|&s| g[s]).collect())
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut seen = std::collections::HashSet::new();
            m.iter().all(|t| seen.insert(*t))
        })
    }

    pub fn is_surjective(&self, y: &DescentDatum) -> bool {
        self.maps
            .iter()
            .enumerate()
            .all(|(i, m)| (0..y.fiber_len(i)).all(|t| m.contains(&t)))
    }

    pub fn is_isomorphism(&self, y: &DescentDatum) -> bool {
        self.is_injective() && self.is_surjective(y)
    }
}

/// All morphisms `x → y`, in lexicographic order of the flattened maps.
/// Exhaustive backtracking with squares checked as soon as both sides are
/// known; guarded by `Σ|S_i| ≤ limit`.
pub fn homs(x: &DescentDatum, y: &DescentDatum, limit: usize) -> Result<Vec<DatumMorphism>> {
    search(x, y, limit, false)
}

/// The isomorphisms `x → y`, in the same order.
pub fn isomorphisms(x: &DescentDatum, y: &DescentDatum, limit: usize) -> Result<Vec<DatumMorphism>> {
    let same_sizes = (0..x.fibers().len()).all(|i| x.fiber_len(i) == y.fiber_len(i));
    if x.nerve() == y.nerve() && !same_sizes {
        return Ok(Vec::new());
    }
    search(x, y, limit, true)
}

fn search(x: &DescentDatum, y: &DescentDatum, limit: usize, injective: bool) -> Result<Vec<DatumMorphism>> {
    if x.nerve() != y.nerve() {
        return Err(Error::InvalidMorphism(format!(
            "`{}` and `{}` live over different nerves",
            x.name(),
            y.name()
        )));
    }
    if x.total_len() > limit {
        return Err(Error::LimitExceeded(format!(
            "source has {} fiber elements, limit is {limit}",
            x.total_len()
        )));
    }
    let slots: Vec<(usize, usize)> = (0..x.fibers().len())
        .flat_map(|i| (0..x.fiber_len(i)).map(move |s| (i, s)))
        .collect();
    let mut state = Search {
        x,
        y,
        injective,
        maps: (0..x.fibers().len()).map(|i| vec![None; x.fiber_len(i)]).collect(),
        out: Vec::new(),
    };
    state.go(&slots, 0);
    Ok(state.out)
}

struct Search<'a> {
    x: &'a DescentDatum,
    y: &'a DescentDatum,
    injective: bool,
    maps: Vec<Vec<Option<usize>>>,
    out: Vec<DatumMorphism>,
}

impl Search<'_> {
    fn go(&mut self, slots: &[(usize, usize)], k: usize) {
        if k == slots.len() {
            self.out.push(DatumMorphism {
                maps: self
                    .maps
                    .iter()
                    .map(|m| m.iter().map(|t| t.unwrap()).collect())
                    .collect(),
            });
            return;
        }
        let (i, s) = slots[k];
        for t in 0..self.y.fiber_len(i) {
            if self.injective && self.maps[i].contains(&Some(t)) {
                continue;
            }
            self.maps[i][s] = Some(t);
            if self.consistent(i, s) {
                self.go(slots, k + 1);
            }
            self.maps[i][s] = None;
        }
    }

    /// Squares through the element just assigned whose other corner is known.
    fn consistent(&self, i: usize, s: usize) -> bool {
        let t = self.maps[i][s].unwrap();
        for (e, edge) in self.x.nerve().edges().iter().enumerate() {
            let tx = self.x.transition(e);
            let ty = self.y.transition(e);
            if edge.src == i {
                if let Some(u) = self.maps[edge.tgt][tx[s]] {
                    if u != ty[t] {
                        return false;
                    }
                }
            }
            if edge.tgt == i {
                let r = tx.iter().position(|&v| v == s).unwrap();
                if let Some(u) = self.maps[edge.src][r] {
                    if ty[u] != t {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn endomorphisms_of_double_cover() {
        let x = double_cover();
        let hs = homs(&x, &x, DEFAULT_HOM_LIMIT).unwrap();
        assert_eq!(hs.len(), 2);
        assert!(hs.contains(&DatumMorphism::identity(&x)));
        assert!(hs.iter().all(|h| h.is_isomorphism(&x) && h.is_morphism(&x, &x)));
        assert_eq!(isomorphisms(&x, &x, DEFAULT_HOM_LIMIT).unwrap(), hs);
    }

    #[test]
    fn connected_into_constant() {
        let x = double_cover();
        let c = DescentDatum::constant("two", x.nerve(), &["p".into(), "q".into()]);
        assert_eq!(homs(&x, &c, DEFAULT_HOM_LIMIT).unwrap().len(), 2);
        // the trivial double cover has four maps into a two-point constant
        assert_eq!(homs(&identity2(), &c, DEFAULT_HOM_LIMIT).unwrap().len(), 4);
        assert!(isomorphisms(&x, &identity2(), DEFAULT_HOM_LIMIT).unwrap().is_empty());
    }

    #[test]
    fn guard_and_order() {
        let x = double_cover();
        assert!(matches!(homs(&x, &x, 3), Err(Error::LimitExceeded(_))));
        let c = DescentDatum::constant("three", x.nerve(), &["0".into(), "1".into(), "2".into()]);
        let hs = homs(&identity2(), &c, DEFAULT_HOM_LIMIT).unwrap();
        assert_eq!(hs.len(), 9);
        assert!(hs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn brute_force_agrees() {
        // oracle: filter every family of functions by the squares
        let x = double_cover();
        let y = identity2();
        let mut expected = Vec::new();
        for code in 0..16usize {
            let f = |k: usize| (code >> (3 - k)) & 1;
            let m = DatumMorphism {
                maps: vec![vec![f(0), f(1)], vec![f(2), f(3)]],
            };
            if m.is_morphism(&x, &y) {
                expected.push(m);
            }
        }
        assert_eq!(homs(&x, &y, DEFAULT_HOM_LIMIT).unwrap(), expected);
        // only the two constant maps survive
        assert_eq!(expected.len(), 2);
    }
}
