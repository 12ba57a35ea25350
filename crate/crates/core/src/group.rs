//! Finite groups given by multiplication tables.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::perm::{self, Perm};
use crate::text;

/// Largest group a `perm-group` line may expand to.
pub const MAX_PERM_GROUP_ORDER: usize = 10080;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    elements: Vec<String>,
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates the table exhaustively: closure, associativity, a two-sided
    /// identity and two-sided inverses.
    pub fn from_table(
        name: impl Into<String>,
        elements: Vec<String>,
        mult: Vec<Vec<usize>>,
    ) -> Result<Self> {
        Self::build(name.into(), elements, mult, true)
    }

    fn build(name: String, elements: Vec<String>, mult: Vec<Vec<usize>>, check_assoc: bool) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidGroup("a group has at least one element".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &elements {
            if !seen.insert(e) {
                return Err(Error::DuplicateIdentifier(e.clone()));
            }
        }
        if mult.len() != n || mult.iter().any(|row| row.len() != n || row.iter().any(|&z| z >= n)) {
            return Err(Error::InvalidGroup("table is not n×n over the elements".into()));
        }
        for a in (0..n).filter(|_| check_assoc) {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e][x] == x && mult[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| mult[x][y] == identity && mult[y][x] == identity)
                    .ok_or_else(|| {
                        Error::InvalidGroup(format!("`{}` has no inverse", elements[x]))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name,
            elements,
            mult,
            identity,
            inverse,
        })
    }

    /// ℤ/n with elements `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|k| k.to_string()).collect();
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), elements, mult).expect("cyclic table is a group")
    }

    /// The symmetric group on `n` points, as generated by a transposition and
    /// an `n`-cycle.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t = perm::identity(n);
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_permutations(format!("S{n}"), n, &gens).expect("symmetric group is small")
    }

    /// Closes a set of permutations of `0..degree` under composition. Elements
    /// are ordered lexicographically by image array (so the identity comes
    /// first) and named in cycle notation on points `1..=degree`.
    pub fn from_permutations(name: impl Into<String>, degree: usize, gens: &[Perm]) -> Result<Self> {
        for g in gens {
            if !perm::is_bijection(g, degree) {
                return Err(Error::InvalidGroup("generator is not a permutation".into()));
            }
        }
        let mut found: BTreeSet<Perm> = BTreeSet::new();
        let id = perm::identity(degree);
        found.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = perm::compose(g, &p);
                if found.insert(q.clone()) {
                    if found.len() > MAX_PERM_GROUP_ORDER {
                        return Err(Error::LimitExceeded(format!(
                            "permutation group exceeds {MAX_PERM_GROUP_ORDER} elements"
                        )));
                    }
                    queue.push_back(q);
                }
            }
        }
        let perms: Vec<Perm> = found.into_iter().collect();
        let index: BTreeMap<&Perm, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // x·y acts as "apply y, then x"
        let mult = perms
            .iter()
            .map(|x| perms.iter().map(|y| index[&perm::compose(x, y)]).collect())
            .collect();
        let elements = perms.iter().map(|p| cycle_notation(p)).collect();
        // composition of permutations is associative; skip the cubic check
        Self::build(name.into(), elements, mult, false)
    }

    /// Parses either a table (`elements:` then `mult:` followed by one row per
    /// element) or `perm-group on <n>: <cycles>, <cycles>, ...`.
    pub fn parse(input: &str) -> Result<Self> {
        let all = text::lines(input);
        let mut rest = &all[..];
        let name = text::header(&mut rest, "group")?
            .map(|(n, _)| n)
            .unwrap_or_else(|| "group".to_string());
        let Some(first) = rest.first() else {
            return Err(Error::parse(0, "empty group file"));
        };
        if first.text.starts_with("perm-group") {
            let (key, value) = first
                .key_value()
                .ok_or_else(|| first.error("expected `perm-group on <n>: ...`"))?;
            let toks: Vec<_> = key.split_whitespace().collect();
            let ["perm-group", "on", n] = toks[..] else {
                return Err(first.error("expected `perm-group on <n>:`"));
            };
            let degree: usize = n
                .parse()
                .map_err(|_| first.error(format!("bad degree `{n}`")))?;
            let gens = value
                .split(',')
                .map(str::trim)
                .filter(|g| !g.is_empty())
                .map(|g| parse_cycles(g, degree).map_err(|m| first.error(m)))
                .collect::<Result<Vec<_>>>()?;
            if rest.len() > 1 {
                return Err(rest[1].error("unexpected line after `perm-group`"));
            }
            return Self::from_permutations(name, degree, &gens);
        }

        let (key, value) = first
            .key_value()
            .ok_or_else(|| first.error("expected `elements:`"))?;
        if key != "elements" {
            return Err(first.error("expected `elements:`"));
        }
        let elements: Vec<String> = value.split_whitespace().map(str::to_string).collect();
        let Some(mult_line) = rest.get(1) else {
            return Err(first.error("missing `mult:`"));
        };
        match mult_line.key_value() {
            Some(("mult", "")) => {}
            _ => return Err(mult_line.error("expected `mult:` on its own line")),
        }
        let mut mult = Vec::new();
        for line in &rest[2..] {
            let row = line
                .tokens()
                .map(|t| {
                    elements
                        .iter()
                        .position(|e| e == t)
                        .ok_or_else(|| line.error(format!("unknown element `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            mult.push(row);
        }
        Self::from_table(name, elements, mult)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("group {}\nelements: {}\nmult:\n", self.name, self.elements.join(" "));
        for row in &self.mult {
            let names: Vec<_> = row.iter().map(|&z| self.elements[z].as_str()).collect();
            let _ = writeln!(out, "{}", names.join(" "));
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn element_index(&self, name: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mult[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    /// `x/y = x·y⁻¹`
    pub fn div(&self, x: usize, y: usize) -> usize {
        self.mult[x][self.inverse[y]]
    }

    /// `x\y = x⁻¹·y`
    pub fn ldiv(&self, x: usize, y: usize) -> usize {
        self.mult[self.inverse[x]][y]
    }

    /// `g·x·g⁻¹`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.div(self.mul(g, x), g)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mult[a][b] == self.mult[b][a]))
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        let _ = write!(out, "({})", cycle.join(","));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

/// Parses `(1 2 3)(4 5)` or `(1,2,3)` on points `1..=degree`; `()` is the identity.
fn parse_cycles(text: &str, degree: usize) -> std::result::Result<Perm, String> {
    let mut p = perm::identity(degree);
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body_end = rest
            .find(')')
            .filter(|_| rest.starts_with('('))
            .ok_or_else(|| format!("bad cycle syntax in `{text}`"))?;
        let body = &rest[1..body_end];
        let points = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(k) if (1..=degree).contains(&k) => Ok(k - 1),
                _ => Err(format!("bad point `{t}`")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let distinct: BTreeSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(format!("repeated point in `({body})`"));
        }
        // multiply on the left: the new cycle is applied after what came before
        let mut c = perm::identity(degree);
        for w in 0..points.len() {
            c[points[w]] = points[(w + 1) % points.len()];
        }
        p = perm::compose(&c, &p);
        rest = rest[body_end + 1..].trim_start();
    }
    Ok(p)
}
