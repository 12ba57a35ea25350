//! Finite bijections stored as image arrays: `p[x]` is the image of `x`.

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `after ∘ before`: apply `before` first.
pub fn compose(after: &[usize], before: &[usize]) -> Perm {
    before.iter().map(|&x| after[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// True when `p` is a bijection from `0..p.len()` onto `0..codomain`.
pub fn is_bijection(p: &[usize], codomain: usize) -> bool {
    if p.len() != codomain {
        return false;
    }
    let mut seen = vec![false; codomain];
    for &y in p {
        if y >= codomain || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(x, &y)| x == y)
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = identity(n);
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}
