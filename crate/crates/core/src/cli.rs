//! The `cech` command line: load inputs into a [`Workspace`], run one
//! computation, and print a deterministic report.
//!
//! Exit status is 0 on success, 1 on a domain error (diagnostics are
//! printed) and 2 on unreadable or malformed input.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::descent::{
    atoms, colimit_hom, homs, is_connected, is_covering_projection, isomorphisms, orbits, pi0,
    prosystem_eval, pullback, DescentDatum, Site, DEFAULT_HOM_LIMIT,
};
use crate::error::Error;
use crate::group::GroupTable;
use crate::groupoid::{free_groupoid, pi1, DEFAULT_ENUMERATION_LIMIT};
use crate::nerve::{component_nerve, nerve_map, plain_nerve, ComponentNerve};
use crate::space::{
    common_refinement, find_refinement, glue_etale, intersect_sieves, is_covering_sieve,
    minimal_cover, sieve_of_cover, verify_trivialization, Cover,
};
use crate::torsor::{compare_counts, h1, is_torsor, torsor_datum, Cocycle, DEFAULT_COCYCLE_LIMIT};
use crate::workspace::{Kind, Workspace};

#[derive(Debug, Parser)]
#[command(name = "cech", version, about = "Čech descent computations on finite models")]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    /// Override the enumeration guard of the chosen computation.
    #[arg(long, global = true)]
    pub limit: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Machine,
    Human,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Inputs {
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Cover file; `minimal` names the minimal cover of the space.
    #[arg(long)]
    pub cover: Vec<PathBuf>,
    #[arg(long)]
    pub nerve: Option<PathBuf>,
    #[arg(long)]
    pub datum: Vec<PathBuf>,
    #[arg(long)]
    pub group: Option<PathBuf>,
    #[arg(long)]
    pub object: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Component nerve of a cover, or validation of a nerve file.
    Nerve(Inputs),
    /// Free groupoid presentation of a nerve.
    Groupoid(Inputs),
    /// Vertex-group presentation at a base object.
    Pi1 {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        base: String,
    },
    /// Orbit decomposition of a datum.
    Orbits(Inputs),
    /// Connected summands of a datum.
    Atoms(Inputs),
    /// Set of orbits with its universal-property certificate.
    Pi0(Inputs),
    /// Cocycle check of a datum.
    Check(Inputs),
    /// Covering-projection test over the datum's site.
    CpTest(Inputs),
    /// Morphisms between two data (over a common refinement when their
    /// covers differ).
    Homs(Inputs),
    /// Pull a datum over the second cover back to the first cover.
    Pullback(Inputs),
    /// Glue a datum into an étale map over the space.
    Glue(Inputs),
    /// Glue, then trivialize again over the same cover.
    Trivialize(Inputs),
    /// Refinement of the second cover by the first, and their common refinement.
    Refine(Inputs),
    /// Sieve generated by each cover, and their intersection.
    Sieve(Inputs),
    /// Class counts along a chain of covers.
    ProEval(Inputs),
    /// First cohomology classes of a nerve.
    H1(Inputs),
    /// Representation, cohomology and torsor class counts.
    CompareCounts(Inputs),
    /// Local constancy and covering-projection test of a seq-object.
    SeqCheck(Inputs),
    /// Torsor datum of a cocycle given by one group element per edge.
    TorsorFromCocycle {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        values: String,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Lib(#[from] Error),
    #[error("missing input: {0}")]
    Missing(&'static str),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if !e.is_parse() => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A report: ordered `key=value` fields plus free-form lines shown only in
/// human output. `failed` turns the run into a domain error.
#[derive(Debug, Default)]
struct Report {
    fields: Vec<(String, String)>,
    details: Vec<String>,
    failed: bool,
}

impl Report {
    fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    fn detail(&mut self, line: impl Into<String>) -> &mut Self {
        self.details.push(line.into());
        self
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Machine => {
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k}={v}\n"));
                }
            }
            Format::Human => {
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k:<width$}  {v}\n"));
                }
                for line in &self.details {
                    out.push_str(line);
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loaded inputs in command-line order.
struct Loaded {
    ws: Workspace,
    covers: Vec<String>,
    nerve: Option<String>,
    data: Vec<String>,
    group: Option<String>,
    object: Option<String>,
}

fn load(inputs: &Inputs) -> CliResult<Loaded> {
    let mut ws = Workspace::new();
    // a file named twice is loaded once
    let mut seen: HashMap<(PathBuf, Kind), String> = HashMap::new();
    let mut load_as = |ws: &mut Workspace, path: &Path, kind: Kind| -> CliResult<String> {
        let key = (path.to_path_buf(), kind);
        if let Some(name) = seen.get(&key) {
            return Ok(name.clone());
        }
        let name = ws.load(&read(path)?, Some(kind))?.1;
        seen.insert(key, name.clone());
        Ok(name)
    };
    let space = inputs
        .space
        .as_deref()
        .map(|p| load_as(&mut ws, p, Kind::Space))
        .transpose()?;
    let mut covers = Vec::new();
    for path in &inputs.cover {
        if path.as_os_str() == "minimal" {
            let name = space.as_ref().ok_or(CliError::Missing("--space for the minimal cover"))?;
            let c = minimal_cover(ws.space(name)?)?;
            if !ws.covers.contains_key(c.name()) {
                ws.add_cover(c.clone())?;
            }
            covers.push(c.name().to_string());
        } else {
            covers.push(load_as(&mut ws, path, Kind::Cover)?);
        }
    }
    let nerve = inputs
        .nerve
        .as_deref()
        .map(|p| load_as(&mut ws, p, Kind::Nerve))
        .transpose()?;
    let group = inputs
        .group
        .as_deref()
        .map(|p| load_as(&mut ws, p, Kind::Group))
        .transpose()?;
    let data = inputs
        .datum
        .iter()
        .map(|p| load_as(&mut ws, p, Kind::Datum))
        .collect::<CliResult<Vec<_>>>()?;
    let object = inputs
        .object
        .as_deref()
        .map(|p| load_as(&mut ws, p, Kind::SeqObject))
        .transpose()?;
    Ok(Loaded {
        ws,
        covers,
        nerve,
        data,
        group,
        object,
    })
}

impl Loaded {
    /// The nerve file if given, otherwise the component nerve of the first cover.
    fn the_nerve(&self) -> CliResult<ComponentNerve> {
        if let Some(n) = &self.nerve {
            return Ok(self.ws.nerve(n)?);
        }
        let c = self.covers.first().ok_or(CliError::Missing("--nerve or --space with --cover"))?;
        Ok(self.ws.nerve(c)?)
    }

    fn cover(&self, k: usize, what: &'static str) -> CliResult<&Cover> {
        let name = self.covers.get(k).ok_or(CliError::Missing(what))?;
        Ok(self.ws.cover(name)?)
    }

    fn datum(&self, k: usize, what: &'static str) -> CliResult<&DescentDatum> {
        let name = self.data.get(k).ok_or(CliError::Missing(what))?;
        Ok(self.ws.datum(name)?)
    }

    fn group(&self) -> CliResult<&GroupTable> {
        let name = self.group.as_ref().ok_or(CliError::Missing("--group"))?;
        Ok(self.ws.group(name)?)
    }

    /// The cover whose component nerve the datum lives over, if loaded.
    fn cover_of(&self, x: &DescentDatum) -> Option<&Cover> {
        self.ws.covers.get(x.nerve().name()).filter(|c| {
            self.ws
                .space_of(c)
                .is_ok_and(|s| &component_nerve(s, c) == x.nerve())
        })
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let mut r = Report::default();
    match &cli.command {
        Command::Nerve(inputs) => {
            let l = load(inputs)?;
            let n = l.the_nerve()?;
            if let (None, Some(c)) = (&l.nerve, l.covers.first()) {
                let cover = l.ws.cover(c)?;
                let plain = plain_nerve(l.ws.space_of(cover)?, cover);
                r.field("plain_edges", plain.pairs.len())
                    .field("plain_triangles", plain.triples.len());
            }
            let diags = n.validate();
            r.field("objects", n.objects().len())
                .field("edges", n.edges().len())
                .field("triangles", n.triangles().len())
                .field("valid", yes(diags.is_empty()));
            for d in &diags {
                r.field("diagnostic", d);
            }
            r.failed = !diags.is_empty();
            r.detail(n.to_text().trim_end());
        }
        Command::Groupoid(inputs) => {
            let n = load(inputs)?.the_nerve()?;
            let g = free_groupoid(&n)?;
            r.field("objects", g.objects.len())
                .field("generators", g.generators.len())
                .field("relations", g.relations.len())
                .field("components", g.components().len());
            for gen in &g.generators {
                r.detail(format!("{}: {} -> {}", gen.name, g.objects[gen.src], g.objects[gen.tgt]));
            }
        }
        Command::Pi1 { inputs, base } => {
            let n = load(inputs)?.the_nerve()?;
            let g = free_groupoid(&n)?;
            let b = n.object_index(base)?;
            let p = pi1(&g, b)?;
            r.field("generators", p.rank()).field("relators", p.relators.len());
            for name in &p.generators {
                r.field("generator", name);
            }
            for rel in &p.relators {
                r.field("relator", p.format_word(rel));
            }
        }
        Command::Orbits(inputs) => {
            let l = load(inputs)?;
            let x = l.datum(0, "--datum")?;
            let o = orbits(x);
            r.field("orbits", o.blocks.len()).field("connected", yes(is_connected(x)));
            for (k, block) in o.blocks.iter().enumerate() {
                let members: Vec<String> = block
                    .iter()
                    .map(|&(i, s)| format!("{}:{}", x.nerve().objects()[i], x.fiber(i)[s]))
                    .collect();
                r.detail(format!("orbit {k}: {}", members.join(" ")));
            }
        }
        Command::Atoms(inputs) => {
            let l = load(inputs)?;
            let x = l.datum(0, "--datum")?;
            let a = atoms(x)?;
            let all_connected = a.atoms.iter().all(is_connected);
            r.field("atoms", a.atoms.len())
                .field("connected", yes(all_connected))
                .field("reassembles", yes(a.iso.is_morphism(&a.sum, x) && a.iso.is_isomorphism(x)));
            for atom in &a.atoms {
                r.detail(atom.to_text().trim_end());
            }
        }
        Command::Pi0(inputs) => {
            let l = load(inputs)?;
            let x = l.datum(0, "--datum")?;
            let p = pi0(x, cli.limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT))?;
            r.field("classes", p.classes.len())
                .field("functions_checked", p.certificate.functions_checked)
                .field("certificate", if p.certificate.passed { "passed" } else { "failed" });
            r.failed = !p.certificate.passed;
        }
        Command::Check(inputs) => {
            let l = load(inputs)?;
            let x = l.datum(0, "--datum")?;
            let diags = x.check_cocycle();
            r.field("valid", yes(diags.is_empty()))
                .field("empty_fiber", yes(x.has_empty_fiber()));
            for d in &diags {
                r.field("diagnostic", d);
            }
            r.failed = !diags.is_empty();
        }
        Command::CpTest(inputs) => {
            let l = load(inputs)?;
            let x = l.datum(0, "--datum")?;
            let site = match l.cover_of(x) {
                Some(cover) => Site::Space {
                    space: l.ws.space_of(cover)?,
                    cover,
                },
                None => Site::Nerve,
            };
            let report = is_covering_projection(x, site)?;
            r.field("covering_projection", yes(report.covering));
            for p in &report.pairs {
                let objs = x.nerve().objects();
                r.detail(format!(
                    "{}-{}: {} witnesses, {} uncovered points",
                    objs[p.pair.0],
                    objs[p.pair.1],
                    p.witnesses.len(),
                    p.residue.len()
                ));
            }
        }
        Command::Homs(inputs) => {
            let l = load(inputs)?;
            let x = l.datum(0, "--datum (source)")?;
            let y = l.datum(1, "a second --datum (target)")?;
            let limit = cli.limit.unwrap_or(DEFAULT_HOM_LIMIT);
            if x.nerve() == y.nerve() {
                let hs = homs(x, y, limit)?;
                r.field("homs", hs.len())
                    .field("isomorphisms", isomorphisms(x, y, limit)?.len());
                for h in &hs {
                    r.detail(format!("{:?}", h.maps));
                }
            } else {
                let (u, v) = match (l.cover_of(x), l.cover_of(y)) {
                    (Some(u), Some(v)) => (u, v),
                    _ => {
                        return Err(Error::InvalidDatum(
                            "data over different nerves need their covers".into(),
                        )
                        .into())
                    }
                };
                if u.space_name() != v.space_name() {
                    return Err(Error::InvalidCover("covers of different spaces".into()).into());
                }
                let h = colimit_hom(l.ws.space_of(u)?, x, u, y, v, limit)?;
                r.field("refinement_members", h.refinement.len())
                    .field("homs", h.morphisms.len());
            }
        }
        Command::Pullback(inputs) => {
            let l = load(inputs)?;
            let fine = l.cover(0, "--cover (finer)")?;
            let coarse = l.cover(1, "a second --cover (coarser)")?;
            let y = l.datum(0, "--datum")?;
            let space = l.ws.space_of(fine)?;
            let rf = find_refinement(fine, coarse).ok_or_else(|| {
                Error::NotAChain(format!("`{}` does not refine `{}`", fine.name(), coarse.name()))
            })?;
            let nm = nerve_map(space, fine, coarse, &rf)?;
            let p = pullback(&nm, y)?;
            r.field("objects", p.nerve().objects().len())
                .field("total", p.total_len())
                .field("valid", yes(p.is_valid()))
                .field("orbits", orbits(&p).blocks.len());
            r.detail(p.to_text().trim_end());
        }
        Command::Glue(inputs) => {
            let l = load(inputs)?;
            let x = l.datum(0, "--datum")?;
            let cover = l.cover_of(x).ok_or(CliError::Missing("the cover of the datum"))?;
            let em = glue_etale(l.ws.space_of(cover)?, cover, x)?;
            r.field("total_points", em.total.len())
                .field("components", em.total_components())
                .field("local_homeomorphism", yes(em.is_local_homeomorphism()));
            r.detail(em.total.to_text().trim_end());
        }
        Command::Trivialize(inputs) => {
            let l = load(inputs)?;
            let x = l.datum(0, "--datum")?;
            let cover = l.cover_of(x).ok_or(CliError::Missing("the cover of the datum"))?;
            let em = glue_etale(l.ws.space_of(cover)?, cover, x)?;
            let t = verify_trivialization(&em.without_charts(), cover)?;
            let limit = cli.limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
            let iso = !isomorphisms(x, &t.datum, limit)?.is_empty();
            r.field("trivialized", "true").field("isomorphic", yes(iso));
            r.failed = !iso;
            r.detail(t.datum.to_text().trim_end());
        }
        Command::Refine(inputs) => {
            let l = load(inputs)?;
            let fine = l.cover(0, "--cover (finer)")?;
            let coarse = l.cover(1, "a second --cover (coarser)")?;
            let space = l.ws.space_of(fine)?;
            match find_refinement(fine, coarse) {
                Some(rf) => {
                    r.field("refines", "true");
                    for (i, &a) in rf.alpha.iter().enumerate() {
                        r.field(&format!("alpha.{}", fine.indices()[i]), &coarse.indices()[a]);
                    }
                }
                None => {
                    r.field("refines", "false");
                }
            }
            let (w, _, _) = common_refinement(space, fine, coarse)?;
            r.field("common_refinement", w.len());
            r.detail(w.to_text(space).trim_end());
        }
        Command::Sieve(inputs) => {
            let l = load(inputs)?;
            let first = l.cover(0, "--cover")?;
            let space = l.ws.space_of(first)?;
            let mut sieves = Vec::new();
            for (k, name) in l.covers.iter().enumerate() {
                let c = l.ws.cover(name)?;
                let s = sieve_of_cover(space, c);
                let tag = if l.covers.len() == 1 { String::new() } else { format!(".{k}") };
                r.field(&format!("sieve{tag}"), space.format_set(s.members()))
                    .field(&format!("covering{tag}"), yes(is_covering_sieve(space, &s)));
                sieves.push(s);
            }
            if sieves.len() > 1 {
                let meet = sieves[1..].iter().fold(sieves[0].clone(), |a, b| intersect_sieves(&a, b));
                r.field("intersection", space.format_set(meet.members()))
                    .field("intersection_covering", yes(is_covering_sieve(space, &meet)));
            }
        }
        Command::ProEval(inputs) => {
            let l = load(inputs)?;
            let k = l.group()?;
            let chain = l
                .covers
                .iter()
                .map(|c| l.ws.cover(c).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let first = chain.first().ok_or(CliError::Missing("--cover"))?;
            let space = l.ws.space_of(first)?;
            let limit = cli.limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
            let rep = prosystem_eval(space, &chain, None, k, limit)?;
            for (c, n) in chain.iter().zip(&rep.stage_counts) {
                r.field(&format!("stage.{}", c.name()), n);
            }
            r.field("colimit", rep.colimit);
        }
        Command::H1(inputs) => {
            let l = load(inputs)?;
            let n = l.the_nerve()?;
            let k = l.group()?;
            let classes = h1(&n, k, cli.limit.unwrap_or(DEFAULT_COCYCLE_LIMIT))?;
            r.field("classes", classes.len());
            for c in &classes {
                let rep: Vec<&str> = c.representative.iter().map(|&g| k.element_name(g)).collect();
                r.field("class", format!("[{}] size {}", rep.join(" "), c.members.len()));
            }
        }
        Command::CompareCounts(inputs) => {
            let l = load(inputs)?;
            let n = l.the_nerve()?;
            let k = l.group()?;
            let c = compare_counts(&n, k, cli.limit.unwrap_or(DEFAULT_COCYCLE_LIMIT))?;
            r.field("hom", c.hom_classes)
                .field("h1", c.h1_classes)
                .field("torsor", c.torsor_classes)
                .field("equal", yes(c.equal()));
            r.failed = !c.equal();
        }
        Command::SeqCheck(inputs) => {
            let l = load(inputs)?;
            let name = l.object.as_ref().ok_or(CliError::Missing("--object"))?;
            let x = &l.ws.seq_objects[name];
            let lc = x.check_locally_constant();
            let opens = x.constancy_opens();
            r.field("locally_constant", yes(lc.locally_constant))
                .field("covering_projection", yes(x.is_cp()))
                .field("max_bound", lc.max_bound)
                .field(
                    "constant_tail",
                    opens.tail.map_or("none".to_string(), |m| m.to_string()),
                );
            for (s, b) in &lc.bounds {
                r.detail(format!("bound({s}) = {b}"));
            }
        }
        Command::TorsorFromCocycle { inputs, values } => {
            let l = load(inputs)?;
            let n = l.the_nerve()?;
            let k = l.group()?;
            let c = Cocycle::parse_values(&n, k, values)?;
            let t = torsor_datum(&c, k)?;
            r.field("objects", n.objects().len())
                .field("fiber_size", k.order())
                .field("valid", yes(t.datum.is_valid()))
                .field("torsor", yes(is_torsor(&t.datum, &t.action, k)))
                .field("orbits", orbits(&t.datum).blocks.len());
            r.detail(t.datum.to_text().trim_end());
        }
    }
    Ok(r)
}

/// Runs one command line, writing the report to `out` and diagnostics to
/// `err`; returns the exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(if e.use_stderr() { err as &mut dyn Write } else { out }, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.format).as_bytes());
            if report.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
