//! Finite Alexandrov spaces, their opens and covers, covering sieves, and the
//! gluing of étale spaces from descent data.
//!
//! A finite space is a preorder on its points. Open sets are the down-closed
//! subsets, so the minimal open neighbourhood of `x` is `{y : y ≤ x}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::descent::DescentDatum;
use crate::error::{Error, Result};
use crate::nerve::component_nerve;
use crate::text::{self, Line};
use crate::unionfind::UnionFind;

pub type PointSet = BTreeSet<usize>;

/// A finite space given by its specialization preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    name: String,
    points: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FiniteSpace {
    /// Builds a space from generating pairs `(x, y)` meaning `x ≤ y`; the
    /// reflexive-transitive closure is taken.
    pub fn new(
        name: impl Into<String>,
        points: Vec<String>,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicateIdentifier(p.clone()));
            }
        }
        let n = points.len();
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::UnknownIdentifier(format!("point #{}", x.max(y))));
            }
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    let row = leq[k].clone();
                    for (j, _) in row.iter().enumerate().filter(|(_, &b)| b) {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Ok(Self {
            name: name.into(),
            points,
            leq,
        })
    }

    /// Convenience constructor from point names and `(lower, upper)` name pairs.
    pub fn from_names(name: &str, points: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let pts: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let idx = |p: &str| {
            pts.iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::UnknownIdentifier(p.to_string()))
        };
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, pts, &pairs)
    }

    pub fn parse(input: &str) -> Result<Self> {
        let all = text::lines(input);
        let mut rest = &all[..];
        let name = text::header(&mut rest, "space")?
            .map(|(n, _)| n)
            .unwrap_or_else(|| "space".to_string());
        let mut points: Option<Vec<String>> = None;
        let mut relations: Vec<(Line, String, String)> = Vec::new();
        for line in rest {
            let (key, value) = line
                .key_value()
                .ok_or_else(|| line.error("expected `points:` or `le:`"))?;
            match key {
                "points" => {
                    if points.is_some() {
                        return Err(line.error("`points:` given twice"));
                    }
                    points = Some(value.split_whitespace().map(str::to_string).collect());
                }
                "le" => {
                    for tok in value.split_whitespace() {
                        let (a, b) = tok
                            .split_once('<')
                            .ok_or_else(|| line.error(format!("bad relation `{tok}`")))?;
                        if a.is_empty() || b.is_empty() {
                            return Err(line.error(format!("bad relation `{tok}`")));
                        }
                        relations.push((*line, a.to_string(), b.to_string()));
                    }
                }
                other => return Err(line.error(format!("unknown key `{other}`"))),
            }
        }
        let points = points.ok_or_else(|| Error::parse(0, "missing `points:` line"))?;
        let mut pairs = Vec::new();
        for (_, a, b) in &relations {
            let ia = points
                .iter()
                .position(|p| p == a)
                .ok_or_else(|| Error::UnknownIdentifier(a.clone()))?;
            let ib = points
                .iter()
                .position(|p| p == b)
                .ok_or_else(|| Error::UnknownIdentifier(b.clone()))?;
            pairs.push((ia, ib));
        }
        Self::new(name, points, &pairs)
    }

    /// Serializes with every strict relation of the closure listed.
    pub fn to_text(&self) -> String {
        let mut out = format!("space {}\npoints: {}\n", self.name, self.points.join(" "));
        let rels: Vec<String> = (0..self.len())
            .flat_map(|x| (0..self.len()).map(move |y| (x, y)))
            .filter(|&(x, y)| x != y && self.leq[x][y])
            .map(|(x, y)| format!("{}<{}", self.points[x], self.points[y]))
            .collect();
        if !rels.is_empty() {
            let _ = writeln!(out, "le: {}", rels.join(" "));
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_name(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq[x][y] || self.leq[y][x]
    }

    pub fn all_points(&self) -> PointSet {
        (0..self.len()).collect()
    }

    pub fn down_set(&self, x: usize) -> PointSet {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    pub fn is_down_closed(&self, set: &PointSet) -> bool {
        set.iter()
            .all(|&x| (0..self.len()).all(|y| !self.leq[y][x] || set.contains(&y)))
    }

    /// Validates `members` as an open set.
    pub fn open(&self, members: PointSet) -> Result<Open> {
        if let Some(&bad) = members.iter().find(|&&x| x >= self.len()) {
            return Err(Error::UnknownIdentifier(format!("point #{bad}")));
        }
        if !self.is_down_closed(&members) {
            let names: Vec<_> = members.iter().map(|&x| self.point_name(x)).collect();
            return Err(Error::InvalidOpen(format!(
                "{{{}}} is not down-closed",
                names.join(",")
            )));
        }
        Ok(Open(members))
    }

    pub fn open_by_names(&self, names: &[&str]) -> Result<Open> {
        let members = names
            .iter()
            .map(|n| self.index_of(n))
            .collect::<Result<PointSet>>()?;
        self.open(members)
    }

    /// The whole space as an open.
    pub fn top(&self) -> Open {
        Open(self.all_points())
    }

    pub fn format_set(&self, set: &PointSet) -> String {
        let names: Vec<_> = set.iter().map(|&x| self.point_name(x)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// A down-closed subset of a finite space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Open(PointSet);

impl Open {
    pub fn members(&self) -> &PointSet {
        &self.0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(&x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_subset(&self, other: &Open) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Opens are closed under finite intersection.
    pub fn intersect(&self, other: &Open) -> Open {
        Open(self.0.intersection(&other.0).copied().collect())
    }

    pub fn union(&self, other: &Open) -> Open {
        Open(self.0.union(&other.0).copied().collect())
    }
}

/// The minimal open neighbourhood `{y : y ≤ point}`.
pub fn min_open(space: &FiniteSpace, point: &str) -> Result<Open> {
    let x = space.index_of(point)?;
    Ok(Open(space.down_set(x)))
}

/// Order-connected components of an arbitrary subset, ordered by least member.
pub fn components_of(space: &FiniteSpace, set: &PointSet) -> Vec<PointSet> {
    let members: Vec<usize> = set.iter().copied().collect();
    let mut uf = UnionFind::new(members.len());
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if space.comparable(members[a], members[b]) {
                uf.union(a, b);
            }
        }
    }
    uf.classes()
        .into_iter()
        .map(|class| class.into_iter().map(|k| members[k]).collect())
        .collect()
}

/// Connected components of an open set.
pub fn components(space: &FiniteSpace, open: &Open) -> Vec<PointSet> {
    components_of(space, open.members())
}

/// An indexed family of nonempty opens whose union is the whole space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    name: String,
    space: String,
    indices: Vec<String>,
    opens: Vec<Open>,
}

impl Cover {
    pub fn new(
        space: &FiniteSpace,
        name: impl Into<String>,
        indices: Vec<String>,
        opens: Vec<Open>,
    ) -> Result<Self> {
        let family = Self::family(space, name, indices, opens)?;
        let union: PointSet = family
            .opens
            .iter()
            .flat_map(|u| u.members().iter().copied())
            .collect();
        if union.len() != space.len() {
            let missing: PointSet = space.all_points().difference(&union).copied().collect();
            return Err(Error::InvalidCover(format!(
                "cover `{}` misses {}",
                family.name,
                space.format_set(&missing)
            )));
        }
        Ok(family)
    }

    /// An indexed family of nonempty opens that is not required to cover.
    /// Only useful as the target of [`find_refinement`].
    pub fn family(
        space: &FiniteSpace,
        name: impl Into<String>,
        indices: Vec<String>,
        opens: Vec<Open>,
    ) -> Result<Self> {
        let name = name.into();
        if indices.len() != opens.len() {
            return Err(Error::InvalidCover("index/open count mismatch".into()));
        }
        if indices.is_empty() {
            return Err(Error::InvalidCover(format!("cover `{name}` has no members")));
        }
        let mut seen = BTreeSet::new();
        for i in &indices {
            if !seen.insert(i.as_str()) {
                return Err(Error::DuplicateIdentifier(i.clone()));
            }
        }
        for (i, u) in indices.iter().zip(&opens) {
            if u.is_empty() {
                return Err(Error::InvalidCover(format!("member `{i}` is empty")));
            }
            if !space.is_down_closed(u.members()) {
                return Err(Error::InvalidOpen(format!("member `{i}` is not open")));
            }
        }
        Ok(Self {
            name,
            space: space.name().to_string(),
            indices,
            opens,
        })
    }

    /// Builds a cover from `(index, member names)` rows.
    pub fn from_names(space: &FiniteSpace, name: &str, rows: &[(&str, &[&str])]) -> Result<Self> {
        let mut indices = Vec::new();
        let mut opens = Vec::new();
        for (i, members) in rows {
            indices.push(i.to_string());
            opens.push(space.open_by_names(members)?);
        }
        Self::new(space, name, indices, opens)
    }

    /// Parses a cover file; the `on <space>` reference must match `space`.
    pub fn parse(input: &str, space: &FiniteSpace) -> Result<Self> {
        let all = text::lines(input);
        let mut rest = &all[..];
        let (name, reference) = text::header(&mut rest, "cover")?
            .unwrap_or_else(|| ("cover".to_string(), None));
        if let Some(r) = reference {
            if r != space.name() {
                return Err(Error::UnknownIdentifier(format!(
                    "cover `{name}` refers to space `{r}`, got `{}`",
                    space.name()
                )));
            }
        }
        let mut indices = Vec::new();
        let mut opens = Vec::new();
        for line in rest {
            let (key, value) = line
                .key_value()
                .ok_or_else(|| line.error("expected `<index>: <points>`"))?;
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(line.error(format!("bad index `{key}`")));
            }
            let members = value
                .split_whitespace()
                .map(|p| space.index_of(p))
                .collect::<Result<PointSet>>()?;
            indices.push(key.to_string());
            opens.push(space.open(members)?);
        }
        Self::new(space, name, indices, opens)
    }

    pub fn to_text(&self, space: &FiniteSpace) -> String {
        let mut out = format!("cover {} on {}\n", self.name, self.space);
        for (i, u) in self.indices.iter().zip(&self.opens) {
            let names: Vec<_> = u.members().iter().map(|&x| space.point_name(x)).collect();
            let _ = writeln!(out, "{}: {}", i, names.join(" "));
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space_name(&self) -> &str {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[String] {
        &self.indices
    }

    pub fn opens(&self) -> &[Open] {
        &self.opens
    }

    pub fn open(&self, i: usize) -> &Open {
        &self.opens[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.indices
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }
}

/// The canonical generator cover: one minimal open per point, duplicates kept.
pub fn minimal_cover(space: &FiniteSpace) -> Result<Cover> {
    if space.is_empty() {
        return Err(Error::InvalidCover("the empty space has no minimal cover".into()));
    }
    let opens = (0..space.len()).map(|x| Open(space.down_set(x))).collect();
    Cover::new(space, "minimal", space.points().to_vec(), opens)
}

/// A refinement map from a finer cover `U` to a coarser `V`: `U_i ⊆ V_{α(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub alpha: Vec<usize>,
}

impl Refinement {
    pub fn identity(cover: &Cover) -> Self {
        Self {
            alpha: (0..cover.len()).collect(),
        }
    }

    pub fn validate(&self, finer: &Cover, coarser: &Cover) -> Result<()> {
        if self.alpha.len() != finer.len() {
            return Err(Error::InvalidCover("refinement map has wrong length".into()));
        }
        for (i, &j) in self.alpha.iter().enumerate() {
            if j >= coarser.len() || !finer.open(i).is_subset(coarser.open(j)) {
                return Err(Error::InvalidCover(format!(
                    "member `{}` of `{}` is not inside its image in `{}`",
                    finer.indices()[i],
                    finer.name(),
                    coarser.name()
                )));
            }
        }
        Ok(())
    }

    /// `self: U → V` followed by `next: V → W`.
    pub fn then(&self, next: &Refinement) -> Refinement {
        Refinement {
            alpha: self.alpha.iter().map(|&j| next.alpha[j]).collect(),
        }
    }
}

/// Pairwise intersections `U_i ∩ V_j` that are nonempty, indexed `(i,j)`
/// in `i`-major order, together with the two coordinate projections.
pub fn common_refinement(
    space: &FiniteSpace,
    u: &Cover,
    v: &Cover,
) -> Result<(Cover, Refinement, Refinement)> {
    let mut indices = Vec::new();
    let mut opens = Vec::new();
    let mut to_u = Vec::new();
    let mut to_v = Vec::new();
    for (i, ui) in u.opens().iter().enumerate() {
        for (j, vj) in v.opens().iter().enumerate() {
            let w = ui.intersect(vj);
            if !w.is_empty() {
                indices.push(format!("({},{})", u.indices()[i], v.indices()[j]));
                opens.push(w);
                to_u.push(i);
                to_v.push(j);
            }
        }
    }
    let name = format!("{}^{}", u.name(), v.name());
    let w = Cover::new(space, name, indices, opens)?;
    Ok((w, Refinement { alpha: to_u }, Refinement { alpha: to_v }))
}

/// Splits every member into its connected components. A connected member
/// keeps its index; the components of a disconnected member `i` are indexed
/// `i@p` by their least point `p`.
pub fn connected_refinement(space: &FiniteSpace, cover: &Cover) -> Result<(Cover, Refinement)> {
    let mut indices = Vec::new();
    let mut opens = Vec::new();
    let mut alpha = Vec::new();
    for (i, u) in cover.opens().iter().enumerate() {
        let comps = components(space, u);
        let split = comps.len() > 1;
        for comp in comps {
            let first = *comp.iter().next().unwrap();
            indices.push(if split {
                format!("{}@{}", cover.indices()[i], space.point_name(first))
            } else {
                cover.indices()[i].clone()
            });
            opens.push(Open(comp));
            alpha.push(i);
        }
    }
    let w = Cover::new(space, cover.name(), indices, opens)?;
    Ok((w, Refinement { alpha }))
}

/// Checks whether `u` refines `v`; each `α(i)` is the first admissible index.
pub fn find_refinement(u: &Cover, v: &Cover) -> Option<Refinement> {
    let alpha = u
        .opens()
        .iter()
        .map(|ui| v.opens().iter().position(|vj| ui.is_subset(vj)))
        .collect::<Option<Vec<_>>>()?;
    Some(Refinement { alpha })
}

/// A sieve on the generator family of minimal opens. The generator of point
/// `p` is its minimal open, and `C_p ⊆ C_q` exactly when `p ≤ q`, so a sieve
/// is a down-closed set of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sieve {
    members: PointSet,
}

impl Sieve {
    pub fn new(space: &FiniteSpace, members: PointSet) -> Result<Self> {
        if !space.is_down_closed(&members) {
            return Err(Error::InvalidOpen(format!(
                "sieve {} is not closed under smaller generators",
                space.format_set(&members)
            )));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }
}

/// Generators that fit inside some member of `cover`.
pub fn sieve_of_cover(space: &FiniteSpace, cover: &Cover) -> Sieve {
    let members = (0..space.len())
        .filter(|&p| {
            let cp = space.down_set(p);
            cover.opens().iter().any(|u| cp.is_subset(u.members()))
        })
        .collect();
    Sieve { members }
}

/// The family of member generators, indexed by their points. Fails when the
/// sieve does not cover.
pub fn cover_of_sieve(space: &FiniteSpace, sieve: &Sieve) -> Result<Cover> {
    let indices = sieve
        .members
        .iter()
        .map(|&p| space.point_name(p).to_string())
        .collect();
    let opens = sieve.members.iter().map(|&p| Open(space.down_set(p))).collect();
    Cover::new(space, "sieve", indices, opens)
}

pub fn is_covering_sieve(space: &FiniteSpace, sieve: &Sieve) -> bool {
    let union: PointSet = sieve
        .members
        .iter()
        .flat_map(|&p| space.down_set(p))
        .collect();
    union.len() == space.len()
}

pub fn intersect_sieves(s: &Sieve, t: &Sieve) -> Sieve {
    Sieve {
        members: s.members.intersection(&t.members).copied().collect(),
    }
}

/// Chart labels recorded by gluing: for every total point, the list of
/// `(cover index, fiber element)` coordinates it has in the charts that
/// contain its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Charts {
    pub cover_indices: Vec<String>,
    pub labels: Vec<Vec<(usize, usize)>>,
}

/// A continuous map of finite spaces, expected to be a local homeomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaleMap {
    pub total: FiniteSpace,
    pub base: FiniteSpace,
    pub proj: Vec<usize>,
    pub charts: Option<Charts>,
}

impl EtaleMap {
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        (0..self.total.len()).filter(|&p| self.proj[p] == x).collect()
    }

    pub fn is_monotone(&self) -> bool {
        let n = self.total.len();
        (0..n).all(|p| {
            (0..n).all(|q| !self.total.leq(p, q) || self.base.leq(self.proj[p], self.proj[q]))
        })
    }

    /// For every total point `p`, the projection restricts to an order
    /// isomorphism from the minimal open of `p` onto that of `proj(p)`.
    pub fn is_local_homeomorphism(&self) -> bool {
        if self.proj.len() != self.total.len() || !self.is_monotone() {
            return false;
        }
        (0..self.total.len()).all(|p| {
            let down: Vec<usize> = self.total.down_set(p).into_iter().collect();
            let image: PointSet = down.iter().map(|&q| self.proj[q]).collect();
            if image.len() != down.len() || image != self.base.down_set(self.proj[p]) {
                return false;
            }
            down.iter().all(|&a| {
                down.iter()
                    .all(|&b| self.total.leq(a, b) == self.base.leq(self.proj[a], self.proj[b]))
            })
        })
    }

    pub fn total_components(&self) -> usize {
        components_of(&self.total, &self.total.all_points()).len()
    }

    pub fn without_charts(&self) -> EtaleMap {
        EtaleMap {
            charts: None,
            ..self.clone()
        }
    }
}

/// Glues the constant families `S_i × U_i` along the transitions of a
/// descent datum over the component nerve of `cover`.
pub fn glue_etale(space: &FiniteSpace, cover: &Cover, datum: &DescentDatum) -> Result<EtaleMap> {
    let nerve = component_nerve(space, cover);
    if datum.nerve() != &nerve {
        return Err(Error::InvalidDatum(format!(
            "datum `{}` is not over the component nerve of cover `{}`",
            datum.name(),
            cover.name()
        )));
    }
    let diags = datum.check_cocycle();
    if let Some(d) = diags.first() {
        return Err(Error::CocycleViolation(d.to_string()));
    }

    // sheet points (i, s, x)
    let mut sheet_id: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut sheets = Vec::new();
    for (i, u) in cover.opens().iter().enumerate() {
        for s in 0..datum.fiber_len(i) {
            for &x in u.members() {
                sheet_id.insert((i, s, x), sheets.len());
                sheets.push((i, s, x));
            }
        }
    }
    let mut uf = UnionFind::new(sheets.len());
    for (e, edge) in nerve.edges().iter().enumerate() {
        let comp = edge.component.as_ref().expect("space nerve edges carry components");
        let t = datum.transition(e);
        for &x in comp {
            for s in 0..datum.fiber_len(edge.src) {
                uf.union(sheet_id[&(edge.src, s, x)], sheet_id[&(edge.tgt, t[s], x)]);
            }
        }
    }
    let classes = uf.classes();
    let mut class_of = vec![0; sheets.len()];
    for (c, members) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }

    let mut proj = Vec::with_capacity(classes.len());
    let mut names = Vec::with_capacity(classes.len());
    let mut per_point = vec![0usize; space.len()];
    let mut labels = Vec::with_capacity(classes.len());
    for members in &classes {
        let x = sheets[members[0]].2;
        proj.push(x);
        names.push(format!("{}.{}", space.point_name(x), per_point[x]));
        per_point[x] += 1;
        labels.push(members.iter().map(|&m| (sheets[m].0, sheets[m].1)).collect());
    }

    let mut pairs = BTreeSet::new();
    for &(i, s, x) in &sheets {
        for &y in cover.open(i).members() {
            if x != y && space.leq(x, y) {
                pairs.insert((class_of[sheet_id[&(i, s, x)]], class_of[sheet_id[&(i, s, y)]]));
            }
        }
    }
    let pairs: Vec<_> = pairs.into_iter().collect();
    let total = FiniteSpace::new(format!("{}~{}", space.name(), datum.name()), names, &pairs)?;
    Ok(EtaleMap {
        total,
        base: space.clone(),
        proj,
        charts: Some(Charts {
            cover_indices: cover.indices().to_vec(),
            labels,
        }),
    })
}

/// Trivializations `θ_i : S_i × U_i ≅ E|U_i` and the descent datum they induce.
#[derive(Debug, Clone)]
pub struct Trivialization {
    /// `theta[i][&(s, x)]` is the total point with coordinate `s` over `x`.
    pub theta: Vec<BTreeMap<(usize, usize), usize>>,
    pub datum: DescentDatum,
}

/// Attempts to split `em` over every member of `cover`. Uses the map's chart
/// labels when they belong to this cover; otherwise decomposes each preimage
/// into sheets.
pub fn verify_trivialization(em: &EtaleMap, cover: &Cover) -> Result<Trivialization> {
    let space = &em.base;
    if !em.is_local_homeomorphism() {
        return Err(Error::NotTrivializable("map is not a local homeomorphism".into()));
    }
    let charts = em
        .charts
        .as_ref()
        .filter(|c| c.cover_indices == cover.indices());
    let mut theta = Vec::with_capacity(cover.len());
    let mut sizes = Vec::with_capacity(cover.len());
    for (i, u) in cover.opens().iter().enumerate() {
        let (map, n) = match charts {
            Some(ch) => chart_trivialization(em, u, i, ch)?,
            None => sheet_trivialization(em, u, &cover.indices()[i])?,
        };
        check_chart_iso(em, u, &map, n, &cover.indices()[i])?;
        theta.push(map);
        sizes.push(n);
    }

    let nerve = component_nerve(space, cover);
    let mut transitions = Vec::with_capacity(nerve.edges().len());
    for edge in nerve.edges() {
        let comp = edge.component.as_ref().expect("space nerve edges carry components");
        let (i, j) = (edge.src, edge.tgt);
        if sizes[i] != sizes[j] {
            return Err(Error::NotTrivializable(format!(
                "fiber sizes differ between `{}` and `{}`",
                cover.indices()[i],
                cover.indices()[j]
            )));
        }
        let inverse_j: HashMap<usize, usize> =
            theta[j].iter().map(|(&(s, _), &p)| (p, s)).collect();
        let mut transition: Option<Vec<usize>> = None;
        for &x in comp {
            let here: Vec<usize> = (0..sizes[i]).map(|s| inverse_j[&theta[i][&(s, x)]]).collect();
            match &transition {
                None => transition = Some(here),
                Some(t) if *t != here => {
                    return Err(Error::NotTrivializable(format!(
                        "transition on edge `{}` is not constant",
                        edge.id
                    )))
                }
                _ => {}
            }
        }
        transitions.push(transition.unwrap_or_default());
    }
    let fibers = sizes
        .iter()
        .map(|&n| (0..n).map(|s| s.to_string()).collect())
        .collect();
    let datum = DescentDatum::new(format!("{}|{}", em.total.name(), cover.name()), nerve, fibers, transitions)?;
    if let Some(d) = datum.check_cocycle().first() {
        return Err(Error::CocycleViolation(d.to_string()));
    }
    Ok(Trivialization { theta, datum })
}

type Chart = (BTreeMap<(usize, usize), usize>, usize);

fn chart_trivialization(em: &EtaleMap, u: &Open, i: usize, charts: &Charts) -> Result<Chart> {
    let mut map = BTreeMap::new();
    let mut n = 0;
    for p in 0..em.total.len() {
        if !u.contains(em.proj[p]) {
            continue;
        }
        let coords: Vec<usize> = charts.labels[p]
            .iter()
            .filter(|(k, _)| *k == i)
            .map(|&(_, s)| s)
            .collect();
        let [s] = coords[..] else {
            return Err(Error::NotTrivializable(format!(
                "point `{}` has {} coordinates in chart `{}`",
                em.total.point_name(p),
                coords.len(),
                charts.cover_indices[i]
            )));
        };
        if map.insert((s, em.proj[p]), p).is_some() {
            return Err(Error::NotTrivializable(format!(
                "chart `{}` is not injective",
                charts.cover_indices[i]
            )));
        }
        n = n.max(s + 1);
    }
    Ok((map, n))
}

fn sheet_trivialization(em: &EtaleMap, u: &Open, index: &str) -> Result<Chart> {
    let mut map = BTreeMap::new();
    let mut n = None;
    for piece in components(&em.base, u) {
        let above: PointSet = (0..em.total.len())
            .filter(|&p| piece.contains(&em.proj[p]))
            .collect();
        let sheets = components_of(&em.total, &above);
        match n {
            None => n = Some(sheets.len()),
            Some(m) if m != sheets.len() => {
                return Err(Error::NotTrivializable(format!(
                    "fiber cardinality varies over `{index}`"
                )))
            }
            _ => {}
        }
        for (s, sheet) in sheets.iter().enumerate() {
            let image: PointSet = sheet.iter().map(|&p| em.proj[p]).collect();
            if image.len() != sheet.len() || image != piece {
                return Err(Error::NotTrivializable(format!(
                    "a sheet over `{index}` does not map bijectively onto {}",
                    em.base.format_set(&piece)
                )));
            }
            for &p in sheet {
                map.insert((s, em.proj[p]), p);
            }
        }
    }
    Ok((map, n.unwrap_or(0)))
}

/// `θ_i` must be a bijection onto the preimage of `U_i` that preserves and
/// reflects the order, with distinct sheets incomparable.
fn check_chart_iso(
    em: &EtaleMap,
    u: &Open,
    map: &BTreeMap<(usize, usize), usize>,
    n: usize,
    index: &str,
) -> Result<()> {
    let preimage = (0..em.total.len()).filter(|&p| u.contains(em.proj[p])).count();
    let fail = |why: &str| Err(Error::NotTrivializable(format!("chart `{index}`: {why}")));
    if map.len() != n * u.len() || preimage != map.len() {
        return fail("not a bijection onto the preimage");
    }
    for s in 0..n {
        for &x in u.members() {
            if !map.contains_key(&(s, x)) {
                return fail("missing a coordinate");
            }
        }
    }
    for (&(s, x), &p) in map {
        if em.proj[p] != x {
            return fail("does not commute with the projection");
        }
        for (&(t, y), &q) in map {
            let expected = s == t && em.base.leq(x, y);
            if em.total.leq(p, q) != expected {
                return fail("not an order isomorphism");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pc4() -> FiniteSpace {
        FiniteSpace::parse("points: a b c d; le: a<c a<d b<c b<d").unwrap()
    }

    fn names(space: &FiniteSpace, set: &PointSet) -> Vec<String> {
        set.iter().map(|&x| space.point_name(x).to_string()).collect()
    }

    #[test]
    fn parse_examples() {
        let s = pc4();
        assert_eq!(s.len(), 4);
        assert!(s.leq(0, 2) && !s.leq(2, 0) && !s.leq(0, 1));
        let one = FiniteSpace::parse("points: p").unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.leq(0, 0));
        let loopy = FiniteSpace::parse("points: a b; le: a<b b<a").unwrap();
        assert!(loopy.leq(0, 1) && loopy.leq(1, 0));
        // only the empty set and the whole space are open
        assert!(loopy.open([0].into()).is_err());
        assert!(loopy.open([0, 1].into()).is_ok());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            FiniteSpace::parse("points: a a"),
            Err(Error::DuplicateIdentifier("a".into()))
        );
        assert_eq!(
            FiniteSpace::parse("points: a; le: a<z"),
            Err(Error::UnknownIdentifier("z".into()))
        );
        assert!(FiniteSpace::parse("le: a<b").unwrap_err().is_parse());
        assert!(FiniteSpace::parse("points: a; le: ab").unwrap_err().is_parse());
    }

    #[test]
    fn transitive_closure() {
        let s = FiniteSpace::parse("points: x y z; le: x<y y<z").unwrap();
        assert!(s.leq(0, 2));
    }

    #[test]
    fn minimal_opens() {
        let s = pc4();
        assert_eq!(names(&s, min_open(&s, "c").unwrap().members()), ["a", "b", "c"]);
        assert_eq!(names(&s, min_open(&s, "a").unwrap().members()), ["a"]);
        assert!(min_open(&s, "q").is_err());
    }

    #[test]
    fn components_examples() {
        let s = pc4();
        let ab = s.open_by_names(&["a", "b"]).unwrap();
        assert_eq!(components(&s, &ab), vec![PointSet::from([0]), PointSet::from([1])]);
        let abc = s.open_by_names(&["a", "b", "c"]).unwrap();
        assert_eq!(components(&s, &abc), vec![PointSet::from([0, 1, 2])]);
        assert!(components(&s, &Open(PointSet::new())).is_empty());
    }

    #[test]
    fn minimal_cover_examples() {
        let s = pc4();
        let m = minimal_cover(&s).unwrap();
        let rows: Vec<_> = m.opens().iter().map(|u| names(&s, u.members())).collect();
        assert_eq!(rows, vec![vec!["a"], vec!["b"], vec!["a", "b", "c"], vec!["a", "b", "d"]]);
        let disc = FiniteSpace::parse("points: x y").unwrap();
        let m = minimal_cover(&disc).unwrap();
        assert_eq!(m.opens()[0].members(), &PointSet::from([0]));
        assert_eq!(m.opens()[1].members(), &PointSet::from([1]));
        let empty = FiniteSpace::new("e", vec![], &[]).unwrap();
        assert!(minimal_cover(&empty).is_err());
    }

    fn cd(s: &FiniteSpace) -> Cover {
        Cover::from_names(s, "cd", &[("c", &["a", "b", "c"]), ("d", &["a", "b", "d"])]).unwrap()
    }

    #[test]
    fn common_refinement_table() {
        let s = pc4();
        let u = cd(&s);
        let (w, pu, pv) = common_refinement(&s, &u, &u).unwrap();
        assert_eq!(w.indices(), ["(c,c)", "(c,d)", "(d,c)", "(d,d)"]);
        let rows: Vec<_> = w.opens().iter().map(|o| names(&s, o.members())).collect();
        assert_eq!(
            rows,
            vec![vec!["a", "b", "c"], vec!["a", "b"], vec!["a", "b"], vec!["a", "b", "d"]]
        );
        pu.validate(&w, &u).unwrap();
        pv.validate(&w, &u).unwrap();

        let whole = Cover::new(&s, "whole", vec!["X".into()], vec![s.top()]).unwrap();
        let (w2, _, _) = common_refinement(&s, &u, &whole).unwrap();
        assert_eq!(w2.opens(), u.opens());
    }

    #[test]
    fn refinement_examples() {
        let s = pc4();
        let m = minimal_cover(&s).unwrap();
        let u = cd(&s);
        assert_eq!(find_refinement(&m, &u).unwrap().alpha, vec![0, 0, 0, 1]);
        // {a},{b},{a,b,c} misses d, so it only exists as a family
        let rows: [(&str, &[&str]); 3] = [("a", &["a"]), ("b", &["b"]), ("c", &["a", "b", "c"])];
        assert!(Cover::from_names(&s, "abc", &rows).is_err());
        let indices = rows.iter().map(|r| r.0.to_string()).collect();
        let opens = rows.iter().map(|r| s.open_by_names(r.1).unwrap()).collect();
        let abc = Cover::family(&s, "abc", indices, opens).unwrap();
        assert!(find_refinement(&u, &abc).is_none());
        assert_eq!(find_refinement(&u, &u).unwrap(), Refinement::identity(&u));
    }

    #[test]
    fn no_refinement_when_member_fits_nowhere() {
        let s = pc4();
        let u = cd(&s);
        let v = Cover::from_names(&s, "v", &[("X", &["a", "b", "c", "d"])]).unwrap();
        assert!(find_refinement(&v, &u).is_none());
    }

    #[test]
    fn connected_refinement_splits_members() {
        let s = pc4();
        let u = cd(&s);
        let (w, _, _) = common_refinement(&s, &u, &u).unwrap();
        let (c, r) = connected_refinement(&s, &w).unwrap();
        assert_eq!(c.indices(), ["(c,c)", "(c,d)@a", "(c,d)@b", "(d,c)@a", "(d,c)@b", "(d,d)"]);
        assert_eq!(r.alpha, vec![0, 1, 1, 2, 2, 3]);
        r.validate(&c, &w).unwrap();
    }

    #[test]
    fn sieve_examples() {
        let s = pc4();
        let sv = sieve_of_cover(&s, &cd(&s));
        assert_eq!(sv.members(), &s.all_points());
        assert!(is_covering_sieve(&s, &sv));
        let ab = Sieve::new(&s, [0, 1].into()).unwrap();
        assert!(!is_covering_sieve(&s, &ab));
        assert!(cover_of_sieve(&s, &ab).is_err());
        assert_eq!(intersect_sieves(&sv, &sv), sv);
        assert!(Sieve::new(&s, [2].into()).is_err());
        let back = cover_of_sieve(&s, &sv).unwrap();
        assert_eq!(back.len(), 4);
    }

    #[test]
    fn cover_round_trip() {
        let s = pc4();
        let u = cd(&s);
        let text = u.to_text(&s);
        assert_eq!(Cover::parse(&text, &s).unwrap(), u);
        assert_eq!(FiniteSpace::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn cover_rejects_non_open_and_gaps() {
        let s = pc4();
        assert!(Cover::parse("cover x on space\nc: c", &s).is_err());
        assert!(Cover::parse("cover x on space\nc: a b c", &s).is_err());
        assert!(Cover::parse("cover x on other\nc: a b c d", &s).is_err());
    }
}
