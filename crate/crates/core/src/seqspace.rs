//! A symbolic model of the converging sequence `C = {0} ∪ {1/n : n ≥ 1}`
//! covered by two opens, with fiber `ℕ` and per-point transitions drawn from
//! a decidable family of swap words whose entries are `n + b` or constants.
//!
//! Points `1/n` are written `n`; the limit point is written `0`. A swap word
//! applies its terms left to right. Transitions at `1/n` are given
//! piecewise: the first piece whose range contains `n` applies, and points
//! covered by no piece carry the identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::text;

/// An open of `C`: finitely many isolated points plus, optionally, a tail
/// `{0} ∪ {1/n : n ≥ m}`. A set containing `0` must contain a tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqOpen {
    pub isolated: BTreeSet<u64>,
    pub tail: Option<u64>,
}

impl SeqOpen {
    pub fn new(isolated: BTreeSet<u64>, tail: Option<u64>) -> Result<Self> {
        if isolated.contains(&0) || tail == Some(0) {
            return Err(Error::InvalidOpen("isolated points and tails start at 1".into()));
        }
        if isolated.is_empty() && tail.is_none() {
            return Err(Error::InvalidOpen("empty open".into()));
        }
        // isolated points inside the tail are redundant
        let isolated = match tail {
            Some(m) => isolated.into_iter().filter(|&n| n < m).collect(),
            None => isolated,
        };
        Ok(Self { isolated, tail })
    }

    pub fn tail(m: u64) -> Result<Self> {
        Self::new(BTreeSet::new(), Some(m))
    }

    pub fn contains(&self, n: u64) -> bool {
        match (n, self.tail) {
            (0, t) => t.is_some(),
            (n, Some(m)) if n >= m => true,
            (n, _) => self.isolated.contains(&n),
        }
    }

    /// The intersection, or `None` when it is empty.
    pub fn intersect(&self, other: &SeqOpen) -> Option<SeqOpen> {
        let tail = match (self.tail, other.tail) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        let bound = self.tail.into_iter().chain(other.tail).max().unwrap_or(0);
        let candidates = self.isolated.iter().chain(&other.isolated).copied().chain(1..bound);
        let isolated: BTreeSet<u64> = candidates
            .filter(|&n| self.contains(n) && other.contains(n) && tail.is_none_or(|m| n < m))
            .collect();
        SeqOpen::new(isolated, tail).ok()
    }

    fn parse(value: &str, line: &text::Line<'_>) -> Result<Self> {
        let mut toks = value.split_whitespace().peekable();
        let mut tail = None;
        let mut isolated = BTreeSet::new();
        while let Some(t) = toks.next() {
            match t {
                "tail" => {
                    let m = toks.next().ok_or_else(|| line.error("`tail` needs a threshold"))?;
                    tail = Some(m.parse().map_err(|_| line.error(format!("bad threshold `{m}`")))?);
                }
                "isolated" => {
                    while let Some(p) = toks.peek().and_then(|p| p.parse::<u64>().ok()) {
                        isolated.insert(p);
                        toks.next();
                    }
                }
                other => return Err(line.error(format!("unexpected `{other}`"))),
            }
        }
        Self::new(isolated, tail).map_err(|e| line.error(e.to_string()))
    }
}

impl fmt::Display for SeqOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(m) = self.tail {
            parts.push(format!("tail {m}"));
        }
        if !self.isolated.is_empty() {
            let pts: Vec<String> = self.isolated.iter().map(u64::to_string).collect();
            parts.push(format!("isolated {}", pts.join(" ")));
        }
        f.write_str(&parts.join(" "))
    }
}

/// `a·n + b` with `a ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineExpr {
    pub a: u8,
    pub b: i64,
}

impl AffineExpr {
    pub fn constant(b: i64) -> Self {
        Self { a: 0, b }
    }

    pub fn shifted(b: i64) -> Self {
        Self { a: 1, b }
    }

    pub fn eval(self, n: u64) -> i64 {
        i64::from(self.a) * n as i64 + self.b
    }

    pub fn parse(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::MalformedTerm(format!("`{input}`"));
        match s.split_once('n') {
            None => s.parse().map(Self::constant).map_err(|_| bad()),
            Some((coef, rest)) => {
                let a = match coef {
                    "" | "1" => 1,
                    "0" => 0,
                    _ => return Err(Error::MalformedTerm(format!("coefficient in `{input}` must be 0 or 1"))),
                };
                let b = match rest {
                    "" => 0,
                    r if r.starts_with('+') => r[1..].parse().map_err(|_| bad())?,
                    r if r.starts_with('-') => r.parse().map_err(|_| bad())?,
                    _ => return Err(bad()),
                };
                Ok(Self { a, b })
            }
        }
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (_, 0) => write!(f, "n"),
            (_, b) if b > 0 => write!(f, "n+{b}"),
            (_, b) => write!(f, "n{b}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AffineSwapWord {
    pub terms: Vec<(AffineExpr, AffineExpr)>,
}

/// A value during symbolic evaluation for large `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Sym {
    Const(i64),
    Shift(i64),
}

impl Sym {
    fn of(e: AffineExpr) -> Self {
        if e.a == 0 {
            Sym::Const(e.b)
        } else {
            Sym::Shift(e.b)
        }
    }
}

impl AffineSwapWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn parse(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        let mut rest = s.as_str();
        if rest == "id" {
            return Ok(Self::identity());
        }
        while !rest.is_empty() {
            let body = rest
                .strip_prefix("swap(")
                .ok_or_else(|| Error::MalformedTerm(format!("expected `swap(..)` at `{rest}`")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::MalformedTerm(format!("unclosed `swap(` in `{input}`")))?;
            let (x, y) = body[..close]
                .split_once(',')
                .ok_or_else(|| Error::MalformedTerm(format!("`swap` needs two entries in `{input}`")))?;
            terms.push((AffineExpr::parse(x)?, AffineExpr::parse(y)?));
            rest = &body[close + 1..];
        }
        Ok(Self { terms })
    }

    pub fn apply(&self, n: u64, s: i64) -> i64 {
        self.terms.iter().fold(s, |v, (x, y)| {
            let (p, q) = (x.eval(n), y.eval(n));
            if v == p {
                q
            } else if v == q {
                p
            } else {
                v
            }
        })
    }

    fn apply_sym(&self, s: Sym) -> Sym {
        self.terms.iter().fold(s, |v, (x, y)| {
            let (p, q) = (Sym::of(*x), Sym::of(*y));
            if v == p {
                q
            } else if v == q {
                p
            } else {
                v
            }
        })
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &AffineSwapWord) -> AffineSwapWord {
        AffineSwapWord {
            terms: self.terms.iter().chain(&other.terms).copied().collect(),
        }
    }

    fn constants(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.iter().flat_map(|(x, y)| [*x, *y]).filter(|e| e.a == 0).map(|e| e.b)
    }

    fn shifts(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.iter().flat_map(|(x, y)| [*x, *y]).filter(|e| e.a == 1).map(|e| e.b)
    }
}

impl fmt::Display for AffineSwapWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.terms.iter().map(|(x, y)| format!("swap({x},{y})")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The points `lo ≤ n ≤ hi` (unbounded above when `hi` is `None`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PieceRange {
    pub lo: u64,
    pub hi: Option<u64>,
}

impl PieceRange {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.lo && self.hi.is_none_or(|h| n <= h)
    }

    fn parse(spec: &str) -> Option<Self> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "n" {
            return Some(Self { lo: 1, hi: None });
        }
        if let Some(k) = s.strip_prefix("n<=") {
            return Some(Self { lo: 1, hi: Some(k.parse().ok()?) });
        }
        if let Some(k) = s.strip_prefix("n>=") {
            return Some(Self { lo: k.parse().ok()?, hi: None });
        }
        if let Some(k) = s.strip_prefix("n=") {
            let k = k.parse().ok()?;
            return Some(Self { lo: k, hi: Some(k) });
        }
        let (lo, rest) = s.split_once("<=n<=")?;
        Some(Self {
            lo: lo.parse().ok()?,
            hi: Some(rest.parse().ok()?),
        })
    }
}

impl fmt::Display for PieceRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo, self.hi) {
            (1, None) => write!(f, "n"),
            (1, Some(h)) => write!(f, "n<={h}"),
            (l, None) => write!(f, "n>={l}"),
            (l, Some(h)) if l == h => write!(f, "n={l}"),
            (l, Some(h)) => write!(f, "{l}<=n<={h}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub range: PieceRange,
    pub word: AffineSwapWord,
}

/// A finitely supported permutation of `ℕ`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FinitePerm {
    map: BTreeMap<i64, i64>,
}

impl FinitePerm {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Fails unless `map` permutes its keys among nonnegative values.
    pub fn from_map(mut map: BTreeMap<i64, i64>) -> Result<Self> {
        let values: BTreeSet<i64> = map.values().copied().collect();
        if values.len() != map.len() || !map.keys().copied().eq(values.iter().copied()) || map.keys().any(|&s| s < 0) {
            return Err(Error::MalformedTerm("not a permutation of its support".into()));
        }
        map.retain(|s, t| s != t);
        Ok(Self { map })
    }

    pub fn apply(&self, s: i64) -> i64 {
        self.map.get(&s).copied().unwrap_or(s)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.map.keys().copied()
    }

    pub fn then(&self, other: &FinitePerm) -> FinitePerm {
        let keys: BTreeSet<i64> = self.support().chain(other.support()).collect();
        let map = keys
            .into_iter()
            .map(|s| (s, other.apply(self.apply(s))))
            .filter(|(s, t)| s != t)
            .collect();
        FinitePerm { map }
    }

    /// Cycle notation `(0 1)(2 3 4)`; `id` or an empty string is the identity.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        let mut map = BTreeMap::new();
        if s.is_empty() || s == "id" {
            return Ok(Self { map });
        }
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::MalformedTerm(format!("expected a cycle at `{rest}`")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::MalformedTerm(format!("unclosed cycle in `{input}`")))?;
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>().ok().filter(|&v| v >= 0))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::MalformedTerm(format!("bad cycle `({})`", &body[..close])))?;
            for (idx, &v) in cycle.iter().enumerate() {
                if map.contains_key(&v) {
                    return Err(Error::MalformedTerm(format!("`{v}` repeated in `{input}`")));
                }
                map.insert(v, cycle[(idx + 1) % cycle.len()]);
            }
            rest = body[close + 1..].trim_start();
        }
        map.retain(|s, t| s != t);
        Ok(Self { map })
    }
}

impl fmt::Display for FinitePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.map.is_empty() {
            return f.write_str("id");
        }
        let mut seen = BTreeSet::new();
        for &start in self.map.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut cycle = vec![start];
            let mut v = self.apply(start);
            while v != start {
                seen.insert(v);
                cycle.push(v);
                v = self.apply(v);
            }
            let parts: Vec<String> = cycle.iter().map(i64::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A locally constant candidate over the two-open cover `{U, V}` of `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqLCObject {
    pub name: String,
    pub u: SeqOpen,
    pub v: SeqOpen,
    pub pieces: Vec<Piece>,
    pub at_zero: FinitePerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalConstancy {
    pub locally_constant: bool,
    /// Bounds of the finitely many elements named by the data (constants of
    /// the words and the support at the limit); every other element is fixed
    /// at the limit and eventually fixed nearby.
    pub bounds: Vec<(i64, u64)>,
    pub max_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstancyOpens {
    /// Every isolated point of `U ∩ V` is an open with a single transition.
    pub singletons: SeqOpen,
    /// The largest tail of `U ∩ V` on which the transition is constant.
    pub tail: Option<u64>,
}

impl SeqLCObject {
    pub fn new(name: impl Into<String>, u: SeqOpen, v: SeqOpen, pieces: Vec<Piece>, at_zero: FinitePerm) -> Result<Self> {
        let x = Self {
            name: name.into(),
            u,
            v,
            pieces,
            at_zero,
        };
        x.validate()?;
        Ok(x)
    }

    /// `U ∩ V`, which must contain a tail.
    pub fn intersection(&self) -> SeqOpen {
        self.u
            .intersect(&self.v)
            .expect("validated objects have a tail in U ∩ V")
    }

    fn domain_tail(&self) -> u64 {
        self.intersection().tail.unwrap()
    }

    fn in_domain(&self, n: u64) -> bool {
        n >= 1 && self.intersection().contains(n)
    }

    fn validate(&self) -> Result<()> {
        let Some(meet) = self.u.intersect(&self.v) else {
            return Err(Error::InvalidCover("U ∩ V is empty".into()));
        };
        if meet.tail.is_none() {
            return Err(Error::InvalidCover("U ∩ V must contain a tail".into()));
        }
        let top = self.u.tail.into_iter().chain(self.v.tail).min().unwrap();
        if let Some(n) = (1..top).find(|&n| !self.u.contains(n) && !self.v.contains(n)) {
            return Err(Error::InvalidCover(format!("1/{n} is not covered")));
        }
        for piece in &self.pieces {
            let r = piece.range;
            let lo = r.lo.max(1);
            let points_exist = r.hi.is_none_or(|h| h >= lo);
            if !points_exist {
                continue;
            }
            let in_range = |n: i64| n >= lo as i64 && r.hi.is_none_or(|h| n <= h as i64) && self.in_domain(n as u64);
            let first = (lo..).take(1_000_000).find(|&n| r.contains(n) && self.in_domain(n));
            let Some(first) = first else { continue };
            for (x, y) in &piece.word.terms {
                for e in [x, y] {
                    if e.eval(first) < 0 || (e.a == 0 && e.b < 0) {
                        return Err(Error::MalformedTerm(format!("`{e}` is negative at 1/{first}")));
                    }
                }
                if x == y {
                    return Err(Error::MalformedTerm(format!("`swap({x},{y})` has equal entries")));
                }
                if x.a != y.a {
                    let (s, c) = if x.a == 1 { (x, y) } else { (y, x) };
                    let n = c.b - s.b;
                    if n >= 1 && in_range(n) {
                        return Err(Error::MalformedTerm(format!(
                            "`swap({x},{y})` has equal entries at 1/{n}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn word_at(&self, n: u64) -> Option<&AffineSwapWord> {
        self.pieces.iter().find(|p| p.range.contains(n)).map(|p| &p.word)
    }

    /// The transition at `1/n` (or at the limit when `n = 0`) applied to `s`.
    pub fn apply(&self, n: u64, s: i64) -> i64 {
        if n == 0 {
            return self.at_zero.apply(s);
        }
        match self.word_at(n) {
            Some(w) => w.apply(n, s),
            None => s,
        }
    }

    /// The word active at every sufficiently large `n`, and where it starts.
    fn tail_word(&self) -> (AffineSwapWord, u64) {
        let mut start = 1;
        for p in &self.pieces {
            if let Some(h) = p.range.hi {
                start = start.max(h + 1);
            } else {
                return (p.word.clone(), start.max(p.range.lo));
            }
        }
        (AffineSwapWord::identity(), start)
    }

    fn all_constants(&self) -> BTreeSet<i64> {
        let mut out: BTreeSet<i64> = self.at_zero.support().collect();
        for p in &self.pieces {
            out.extend(p.word.constants());
        }
        out
    }

    /// Beyond this point numeric evaluation of the tail word agrees with its
    /// symbolic evaluation on every value in `values`.
    fn symbolic_threshold(&self, values: &BTreeSet<i64>) -> u64 {
        let (word, start) = self.tail_word();
        let shifts: BTreeSet<i64> = word.shifts().collect();
        let mut m = start.max(self.domain_tail());
        for &c in values.iter().chain(&word.constants().collect::<BTreeSet<_>>()) {
            for &b in &shifts {
                m = m.max((c - b + 1).max(1) as u64);
            }
        }
        m
    }

    /// The least `N` with `T_n(s) = T_0(s)` for all `n ≥ N` in `U ∩ V`, or
    /// `None` when the value at the limit is never reached eventually.
    pub fn bound_for(&self, s: i64) -> Option<u64> {
        let (word, _) = self.tail_word();
        if word.apply_sym(Sym::Const(s)) != Sym::Const(self.at_zero.apply(s)) {
            return None;
        }
        let values: BTreeSet<i64> = [s].into();
        let m = self.symbolic_threshold(&values);
        let last_bad = (1..m).rev().find(|&n| self.in_domain(n) && self.apply(n, s) != self.at_zero.apply(s));
        Some(last_bad.map_or(1, |n| n + 1))
    }

    /// Per-element eventual constancy. Elements not named by the data are
    /// fixed at the limit and, for large `n`, by every word term, so only the
    /// named elements can fail.
    pub fn check_locally_constant(&self) -> LocalConstancy {
        let mut bounds = Vec::new();
        let mut ok = true;
        let named: BTreeSet<i64> = self.all_constants().into_iter().chain([0]).collect();
        for s in named {
            match self.bound_for(s) {
                Some(b) => bounds.push((s, b)),
                None => ok = false,
            }
        }
        let max_bound = bounds.iter().map(|&(_, b)| b).max().unwrap_or(1);
        LocalConstancy {
            locally_constant: ok,
            bounds,
            max_bound,
        }
    }

    /// Whether the transitions at `1/n` and at the limit are the same
    /// bijection of `ℕ` (only finitely many elements can differ).
    pub fn agrees_with_limit(&self, n: u64) -> bool {
        let mut probe: BTreeSet<i64> = self.all_constants();
        if let Some(w) = self.word_at(n) {
            for (x, y) in &w.terms {
                probe.insert(x.eval(n));
                probe.insert(y.eval(n));
            }
        }
        probe.iter().all(|&s| self.apply(n, s) == self.at_zero.apply(s))
    }

    /// Singletons always qualify; a tail qualifies exactly when the tail word
    /// acts as the limit permutation on every named constant and fixes every
    /// moving entry `n + b`.
    pub fn constancy_opens(&self) -> ConstancyOpens {
        let meet = self.intersection();
        let singletons = SeqOpen {
            isolated: meet.isolated.clone(),
            tail: meet.tail,
        };
        let (word, _) = self.tail_word();
        let constants = self.all_constants();
        let symbolic_ok = constants
            .iter()
            .all(|&c| word.apply_sym(Sym::Const(c)) == Sym::Const(self.at_zero.apply(c)))
            && word.shifts().all(|b| word.apply_sym(Sym::Shift(b)) == Sym::Shift(b))
            && word.constants().all(|c| word.apply_sym(Sym::Const(c)) == Sym::Const(self.at_zero.apply(c)));
        let tail = symbolic_ok.then(|| {
            let m = self.symbolic_threshold(&constants);
            let last_bad = (1..m).rev().find(|&n| self.in_domain(n) && !self.agrees_with_limit(n));
            last_bad.map_or(1, |n| n + 1).max(self.domain_tail())
        });
        ConstancyOpens { singletons, tail }
    }

    /// Covering projection over the two-open site: the constancy opens cover
    /// `U ∩ V`, which contains the limit point, so some tail must qualify.
    pub fn is_cp(&self) -> bool {
        self.constancy_opens().tail.is_some()
    }

    /// Pointwise composite, `self` then `other`, over the same cover.
    pub fn then(&self, other: &SeqLCObject) -> Result<SeqLCObject> {
        if self.u != other.u || self.v != other.v {
            return Err(Error::InvalidCover("objects live over different covers".into()));
        }
        let mut cuts: BTreeSet<u64> = [1].into();
        for p in self.pieces.iter().chain(&other.pieces) {
            cuts.insert(p.range.lo.max(1));
            if let Some(h) = p.range.hi {
                cuts.insert(h + 1);
            }
        }
        let cuts: Vec<u64> = cuts.into_iter().collect();
        let mut pieces = Vec::new();
        for (idx, &lo) in cuts.iter().enumerate() {
            let hi = cuts.get(idx + 1).map(|&next| next - 1);
            let a = self.word_at(lo).cloned().unwrap_or_default();
            let b = other.word_at(lo).cloned().unwrap_or_default();
            pieces.push(Piece {
                range: PieceRange { lo, hi },
                word: a.then(&b),
            });
        }
        SeqLCObject::new(
            format!("{}.{}", self.name, other.name),
            self.u.clone(),
            self.v.clone(),
            pieces,
            self.at_zero.then(&other.at_zero),
        )
    }

    /// ```text
    /// seq-object <name>
    /// coverU: tail <m> isolated <n> ...
    /// coverV: tail <m>
    /// at n: swap(n,n+1)          # also `at n<=K:`, `at n>=K:`, `at K<=n<=L:`, `at n=K:`
    /// at 0: (0 1)(2 3 4)
    /// ```
    pub fn parse(input: &str) -> Result<Self> {
        let lines = text::lines(input);
        let mut rest = lines.as_slice();
        let name = text::header(&mut rest, "seq-object")?
            .map(|(n, _)| n)
            .unwrap_or_else(|| "seq".to_string());
        let (mut u, mut v, mut at_zero) = (None, None, None);
        let mut pieces = Vec::new();
        for line in rest {
            let (key, value) = line.key_value().ok_or_else(|| line.error("expected `key: value`"))?;
            match key {
                "coverU" => u = Some(SeqOpen::parse(value, line)?),
                "coverV" => v = Some(SeqOpen::parse(value, line)?),
                "at 0" => {
                    if at_zero.is_some() {
                        return Err(line.error("transition at 0 given twice"));
                    }
                    at_zero = Some(FinitePerm::parse(value).map_err(|e| line.error(e.to_string()))?);
                }
                k if k.starts_with("at ") => {
                    let range = PieceRange::parse(&k[3..])
                        .ok_or_else(|| line.error(format!("bad range `{}`", &k[3..])))?;
                    let word = AffineSwapWord::parse(value)?;
                    pieces.push(Piece { range, word });
                }
                other => return Err(line.error(format!("unknown key `{other}`"))),
            }
        }
        let u = u.ok_or_else(|| Error::parse(0, "missing `coverU`"))?;
        let v = v.ok_or_else(|| Error::parse(0, "missing `coverV`"))?;
        Self::new(name, u, v, pieces, at_zero.unwrap_or_default())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seq-object {}\ncoverU: {}\ncoverV: {}\n", self.name, self.u, self.v);
        for p in &self.pieces {
            let _ = writeln!(out, "at {}: {}", p.range, p.word);
        }
        let _ = writeln!(out, "at 0: {}", self.at_zero);
        out
    }
}
