//! Seeded generators shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::path::PathBuf;

use cech_descent::descent::DescentDatum;
use cech_descent::nerve::{component_nerve, ComponentNerve, Edge, Triangle};
use cech_descent::perm::{self, Perm};
use cech_descent::space::{Cover, FiniteSpace, PointSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(file)
}

pub fn data_file(file: &str) -> String {
    std::fs::read_to_string(data_path(file)).unwrap()
}

/// A poset on 2–5 points; `p_i < p_j` only for `i < j`.
pub fn random_space(rng: &mut impl Rng) -> FiniteSpace {
    let n = rng.gen_range(2..=5);
    let names = (0..n).map(|i| format!("p{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.35) {
                pairs.push((i, j));
            }
        }
    }
    FiniteSpace::new("rand", names, &pairs).unwrap()
}

/// One to four members, each a union of minimal opens.
pub fn random_cover(rng: &mut impl Rng, space: &FiniteSpace, name: &str) -> Cover {
    let m = rng.gen_range(1..=4);
    let mut members: Vec<PointSet> = (0..m)
        .map(|_| {
            let mut set = PointSet::new();
            for p in 0..space.len() {
                if rng.gen_bool(0.4) {
                    set.extend(space.down_set(p));
                }
            }
            set
        })
        .collect();
    for p in 0..space.len() {
        if !members.iter().any(|u| u.contains(&p)) {
            let k = rng.gen_range(0..m);
            members[k].extend(space.down_set(p));
        }
    }
    members.retain(|u| !u.is_empty());
    let indices = (0..members.len()).map(|i| format!("u{i}")).collect();
    let opens = members.into_iter().map(|u| space.open(u).unwrap()).collect();
    Cover::new(space, name, indices, opens).unwrap()
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Perm {
    let mut p = perm::identity(n);
    p.shuffle(rng);
    p
}

/// A descent datum with one fiber size (0–`max_size`) per connected
/// component: random transitions when they happen to satisfy the cocycle
/// law, otherwise a random gauge of the trivial datum twisted by random
/// holonomy on edges that bound no triangle.
pub fn random_datum(rng: &mut impl Rng, nerve: &ComponentNerve, max_size: usize) -> DescentDatum {
    let comps = nerve.object_components();
    let mut sizes = vec![0; nerve.objects().len()];
    for comp in &comps {
        let s = rng.gen_range(0..=max_size);
        for &i in comp {
            sizes[i] = s;
        }
    }
    for _ in 0..50 {
        let ts: Vec<Perm> = nerve
            .edges()
            .iter()
            .map(|e| random_perm(rng, sizes[e.src]))
            .collect();
        let x = DescentDatum::from_sizes("x", nerve.clone(), &sizes, ts).unwrap();
        if x.is_valid() {
            return x;
        }
    }
    let gauge: Vec<Perm> = sizes.iter().map(|&s| random_perm(rng, s)).collect();
    let on_triangle: Vec<bool> = (0..nerve.edges().len())
        .map(|e| nerve.triangles().iter().any(|t| t.faces.contains(&Some(e))))
        .collect();
    let ts = nerve
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let twist = if on_triangle[e] {
                perm::identity(sizes[edge.src])
            } else {
                random_perm(rng, sizes[edge.src])
            };
            perm::compose(&gauge[edge.tgt], &perm::compose(&twist, &perm::inverse(&gauge[edge.src])))
        })
        .collect();
    let x = DescentDatum::from_sizes("x", nerve.clone(), &sizes, ts).unwrap();
    assert!(x.is_valid());
    x
}

/// A finite-space site together with a datum over its component nerve.
pub struct SiteInstance {
    pub space: FiniteSpace,
    pub cover: Cover,
    pub nerve: ComponentNerve,
    pub datum: DescentDatum,
}

pub fn random_site_instance(rng: &mut impl Rng, max_size: usize) -> SiteInstance {
    let space = random_space(rng);
    let cover = random_cover(rng, &space, "u");
    let nerve = component_nerve(&space, &cover);
    let datum = random_datum(rng, &nerve, max_size);
    SiteInstance {
        space,
        cover,
        nerve,
        datum,
    }
}

/// An abstract nerve with at most 4 objects, 6 edges and 2 triangles.
pub fn random_nerve(rng: &mut impl Rng) -> ComponentNerve {
    let k = rng.gen_range(1..=4usize);
    let objects: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    if k > 1 {
        for e in 0..rng.gen_range(0..=6) {
            let a = rng.gen_range(0..k);
            let mut b = rng.gen_range(0..k - 1);
            if b >= a {
                b += 1;
            }
            edges.push(Edge {
                id: format!("e{e}"),
                src: a.min(b),
                tgt: a.max(b),
                component: None,
            });
        }
    }
    let between = |i: usize, j: usize| -> Vec<usize> {
        (0..edges.len())
            .filter(|&e| edges[e].src == i && edges[e].tgt == j)
            .collect()
    };
    let mut candidates = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let (ij, jl, il) = (between(i, j), between(j, l), between(i, l));
                if !ij.is_empty() && !jl.is_empty() && !il.is_empty() {
                    candidates.push(([i, j, l], ij, jl, il));
                }
            }
        }
    }
    let mut triangles = Vec::new();
    for t in 0..rng.gen_range(0..=2usize) {
        let Some((vs, ij, jl, il)) = candidates.choose(rng) else { break };
        triangles.push(Triangle {
            id: format!("t{t}"),
            vertices: *vs,
            faces: [
                Some(*ij.choose(rng).unwrap()),
                Some(*jl.choose(rng).unwrap()),
                Some(*il.choose(rng).unwrap()),
            ],
            component: None,
        });
    }
    ComponentNerve::checked("rand", objects, edges, triangles).unwrap()
}
