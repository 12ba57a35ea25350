//! Finite limits, sums and images, computed fiberwise.

use crate::error::{Error, Result};
use crate::nerve::ComponentNerve;

use super::{DatumMorphism, DescentDatum};

fn same_nerve(x: &DescentDatum, y: &DescentDatum) -> Result<()> {
    if x.nerve() == y.nerve() {
        Ok(())
    } else {
        Err(Error::InvalidDatum(format!(
            "`{}` and `{}` live over different nerves",
            x.name(),
            y.name()
        )))
    }
}

/// Fibers `S_i × T_i` in lexicographic order, labelled `(s,t)`.
pub fn product(x: &DescentDatum, y: &DescentDatum) -> Result<DescentDatum> {
    same_nerve(x, y)?;
    let nerve = x.nerve();
    let fibers = (0..nerve.objects().len())
        .map(|i| {
            x.fiber(i)
                .iter()
                .flat_map(|a| y.fiber(i).iter().map(move |b| format!("({a},{b})")))
                .collect()
        })
        .collect();
    let transitions = nerve
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let m = y.fiber_len(edge.src);
            let m2 = y.fiber_len(edge.tgt);
            (0..x.fiber_len(edge.src) * m)
                .map(|p| x.transition(e)[p / m] * m2 + y.transition(e)[p % m])
                .collect()
        })
        .collect();
    DescentDatum::new(format!("{}*{}", x.name(), y.name()), nerve.clone(), fibers, transitions)
}

/// The coproduct of `parts`; elements are labelled `k:s` for the `k`-th summand.
pub fn sum_all(nerve: &ComponentNerve, parts: &[DescentDatum]) -> Result<DescentDatum> {
    for p in parts {
        if p.nerve() != nerve {
            return Err(Error::InvalidDatum(format!("`{}` lives over a different nerve", p.name())));
        }
    }
    let n = nerve.objects().len();
    let fibers = (0..n)
        .map(|i| {
            parts
                .iter()
                .enumerate()
                .flat_map(|(k, p)| p.fiber(i).iter().map(move |s| format!("{k}:{s}")))
                .collect()
        })
        .collect();
    let transitions = nerve
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let mut t = Vec::new();
            let mut offset_tgt = 0;
            for p in parts {
                t.extend(p.transition(e).iter().map(|&u| u + offset_tgt));
                offset_tgt += p.fiber_len(edge.tgt);
            }
            t
        })
        .collect();
    let name = if parts.is_empty() {
        "empty".to_string()
    } else {
        parts.iter().map(|p| p.name()).collect::<Vec<_>>().join("+")
    };
    DescentDatum::new(name, nerve.clone(), fibers, transitions)
}

pub fn sum(x: &DescentDatum, y: &DescentDatum) -> Result<DescentDatum> {
    same_nerve(x, y)?;
    sum_all(x.nerve(), &[x.clone(), y.clone()])
}

/// The sub-datum on the elements picked by `keep`, with its inclusion.
fn restrict(
    x: &DescentDatum,
    name: String,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<(DescentDatum, DatumMorphism)> {
    let nerve = x.nerve();
    let inclusion: Vec<Vec<usize>> = (0..nerve.objects().len())
        .map(|i| (0..x.fiber_len(i)).filter(|&s| keep(i, s)).collect())
        .collect();
    let fibers = inclusion
        .iter()
        .enumerate()
        .map(|(i, inc)| inc.iter().map(|&s| x.fiber(i)[s].clone()).collect())
        .collect();
    let transitions = nerve
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            inclusion[edge.src]
                .iter()
                .map(|&s| {
                    let u = x.transition(e)[s];
                    inclusion[edge.tgt].iter().position(|&v| v == u).ok_or_else(|| {
                        Error::InvalidDatum(format!("subset is not closed under `{}`", edge.id))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let sub = DescentDatum::new(name, nerve.clone(), fibers, transitions)?;
    Ok((sub, DatumMorphism { maps: inclusion }))
}

/// The equalizer of `f, g: x → y` with its inclusion into `x`. It may be
/// empty; see [`DescentDatum::is_empty`].
pub fn equalizer(
    x: &DescentDatum,
    y: &DescentDatum,
    f: &DatumMorphism,
    g: &DatumMorphism,
) -> Result<(DescentDatum, DatumMorphism)> {
    f.ensure_morphism(x, y)?;
    g.ensure_morphism(x, y)?;
    restrict(x, format!("eq({})", x.name()), |i, s| f.maps[i][s] == g.maps[i][s])
}

/// The image of `f: x → y` as a sub-datum of `y`, with its inclusion.
pub fn image(x: &DescentDatum, y: &DescentDatum, f: &DatumMorphism) -> Result<(DescentDatum, DatumMorphism)> {
    f.ensure_morphism(x, y)?;
    restrict(y, format!("im({})", y.name()), |i, t| f.maps[i].contains(&t))
}

/// The sub-datum on a union of orbits.
pub(crate) fn restrict_to(
    x: &DescentDatum,
    name: String,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<(DescentDatum, DatumMorphism)> {
    restrict(x, name, keep)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{homs, orbits, DEFAULT_HOM_LIMIT};
    use super::*;

    #[test]
    fn product_of_double_cover() {
        let x = double_cover();
        let p = product(&x, &x).unwrap();
        assert_eq!(p.fiber_len(0), 4);
        assert!(p.is_valid());
        assert_eq!(orbits(&p).blocks.len(), 2);
        assert_eq!(p.fiber(0)[1], "(0,1)");
    }

    #[test]
    fn sum_of_connected() {
        let x = double_cover();
        let s = sum(&x, &x).unwrap();
        assert_eq!(orbits(&s).blocks.len(), 2);
        assert_eq!(s.fiber(1), ["0:0", "0:1", "1:0", "1:1"]);
        let empty = sum_all(x.nerve(), &[]).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn equalizer_of_deck_swap_is_empty() {
        let x = double_cover();
        let hs = homs(&x, &x, DEFAULT_HOM_LIMIT).unwrap();
        let (eq, inc) = equalizer(&x, &x, &hs[0], &hs[1]).unwrap();
        assert!(eq.is_empty());
        assert!(inc.is_morphism(&eq, &x));
        let (eq, _) = equalizer(&x, &x, &hs[0], &hs[0]).unwrap();
        assert_eq!(eq, x.clone().with_name("eq(double)"));
    }

    #[test]
    fn image_of_constant_map() {
        let x = double_cover();
        let c = DescentDatum::constant("two", x.nerve(), &["p".into(), "q".into()]);
        let hs = homs(&x, &c, DEFAULT_HOM_LIMIT).unwrap();
        let (im, inc) = image(&x, &c, &hs[0]).unwrap();
        assert_eq!(im.fiber(0), ["p"]);
        assert!(inc.is_morphism(&im, &c));
        assert!(image(&x, &c, &DatumMorphism { maps: vec![vec![0, 1], vec![0, 1]] }).is_err());
    }
}
