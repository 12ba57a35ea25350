//! Orbits of the transition action, atoms and the components functor.

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

use super::limits::restrict_to;
use super::{sum_all, DatumMorphism, DescentDatum};

/// Blocks of `(object, element)` pairs, each closed under all transitions,
/// ordered by least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub blocks: Vec<Vec<(usize, usize)>>,
}

impl OrbitPartition {
    pub fn block_of(&self, i: usize, s: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&(i, s)))
            .expect("every element lies in a block")
    }
}

fn offsets(x: &DescentDatum) -> Vec<usize> {
    let mut out = Vec::with_capacity(x.fibers().len() + 1);
    let mut acc = 0;
    out.push(0);
    for f in x.fibers() {
        acc += f.len();
        out.push(acc);
    }
    out
}

pub fn orbits(x: &DescentDatum) -> OrbitPartition {
    let off = offsets(x);
    let mut uf = UnionFind::new(x.total_len());
    for (e, edge) in x.nerve().edges().iter().enumerate() {
        for (s, &t) in x.transition(e).iter().enumerate() {
            uf.union(off[edge.src] + s, off[edge.tgt] + t);
        }
    }
    let locate = |g: usize| {
        let i = off.partition_point(|&o| o <= g) - 1;
        (i, g - off[i])
    };
    OrbitPartition {
        blocks: uf
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(locate).collect())
            .collect(),
    }
}

pub fn is_connected(x: &DescentDatum) -> bool {
    orbits(x).blocks.len() == 1
}

/// The connected summands together with the isomorphism `Σ atoms → x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atoms {
    pub atoms: Vec<DescentDatum>,
    pub sum: DescentDatum,
    pub iso: DatumMorphism,
}

/// One sub-datum per orbit; the mediating map from their sum is checked to
/// be an isomorphism before it is returned.
pub fn atoms(x: &DescentDatum) -> Result<Atoms> {
    let parts = orbits(x);
    let mut atoms = Vec::new();
    let mut inclusions = Vec::new();
    for (k, block) in parts.blocks.iter().enumerate() {
        let (atom, inc) = restrict_to(x, format!("{}#{k}", x.name()), |i, s| block.contains(&(i, s)))?;
        atoms.push(atom);
        inclusions.push(inc);
    }
    let sum = sum_all(x.nerve(), &atoms)?;
    let iso = DatumMorphism {
        maps: (0..x.fibers().len())
            .map(|i| inclusions.iter().flat_map(|inc| inc.maps[i].iter().copied()).collect())
            .collect(),
    };
    if !iso.is_morphism(&sum, x) || !iso.is_isomorphism(x) {
        return Err(Error::InvalidMorphism("atoms do not reassemble the datum".into()));
    }
    Ok(Atoms { atoms, sum, iso })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi0Certificate {
    /// Sizes of the test sets that were checked.
    pub test_sizes: Vec<usize>,
    pub functions_checked: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi0 {
    pub classes: Vec<Vec<(usize, usize)>>,
    /// `class_of[i][s]` is the class of element `s` over object `i`.
    pub class_of: Vec<Vec<usize>>,
    pub certificate: Pi0Certificate,
}

/// The quotient `⊔S_i / ∼` together with an exhaustive check of its universal
/// property: for every test set `T` of size at most 3 and every function
/// `f: ⊔S_i → T`, `f` is a morphism into the constant datum on `T` exactly
/// when it is constant on classes. `limit` bounds the number of functions.
pub fn pi0(x: &DescentDatum, limit: usize) -> Result<Pi0> {
    let parts = orbits(x);
    let class_of: Vec<Vec<usize>> = (0..x.fibers().len())
        .map(|i| (0..x.fiber_len(i)).map(|s| parts.block_of(i, s)).collect())
        .collect();
    let n = x.total_len();
    let mut functions_checked = 0usize;
    let mut passed = true;
    let mut test_sizes = Vec::new();
    for size in 1..=3usize {
        let count = (size as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if functions_checked as u128 + count > limit as u128 {
            return Err(Error::LimitExceeded(format!(
                "{size}^{n} test functions exceed the limit {limit}"
            )));
        }
        test_sizes.push(size);
        let labels: Vec<String> = (0..size).map(|t| t.to_string()).collect();
        let target = DescentDatum::constant("T", x.nerve(), &labels);
        let mut values = vec![0usize; n];
        loop {
            let mut it = values.iter().copied();
            let f = DatumMorphism {
                maps: x
                    .fibers()
                    .iter()
                    .map(|fib| it.by_ref().take(fib.len()).collect())
                    .collect(),
            };
            let lifts = f.is_morphism(x, &target);
            let factors = parts.blocks.iter().all(|b| {
                b.iter().all(|&(i, s)| f.maps[i][s] == f.maps[b[0].0][b[0].1])
            });
            passed &= lifts == factors;
            functions_checked += 1;
            // odometer
            let mut pos = n;
            let done = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                values[pos] += 1;
                if values[pos] < size {
                    break false;
                }
                values[pos] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok(Pi0 {
        classes: parts.blocks,
        class_of,
        certificate: Pi0Certificate {
            test_sizes,
            functions_checked,
            passed,
        },
    })
}
