//! Command-line front end. Every subcommand builds a [`Report`] whose
//! verdicts decide the exit code: 0 when all pass, 1 when one fails, 2 on
//! configuration errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{exhaustive_switch_search, verify_hyperoval_family, Hyperoval};
use crate::error::{Error, Result};
use crate::family::{
    check_condition_i, check_condition_ii, codim2_black_spectrum, colour_points,
    family_from_classification, odd_q_spectrum, parse_family, section_tallies,
    theorem_conclusion_check, verify_counting_identities, HyperplaneFamily, SpectrumReport,
    Verdict,
};
use crate::field::{prime_power, FieldSpec};
use crate::quadric::{elliptic_constant, sizes, QuadraticForm, Sign};
use crate::space::{PointId, ProjectiveSpace, SpaceOptions};

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "pgq",
    version,
    about = "Hyperplane families of parabolic quadrics over GF(q)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl Cli {
    /// Parses arguments, program name first.
    pub fn from_args<I, T>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        Cli::try_parse_from(args)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CommonArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write spectra as CSV rows (spectrum,value,multiplicity).
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Most violating points or flats listed per verdict.
    #[arg(long, global = true, default_value_t = 100)]
    pub violation_cap: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "PGQ_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Refuse spaces with more points than this.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    pub max_points: u64,
    /// Leave wall-clock timings out of the report.
    #[arg(long, global = true)]
    pub no_timings: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GeometryArgs {
    /// The space is PG(2n, q).
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Field order, a prime power.
    #[arg(long)]
    pub q: u64,
    /// Which section type forms the family: + (hyperbolic) or - (elliptic).
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    pub sign: Sign,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Build Q(2n,q), classify hyperplanes and colour points.
    Census(GeometryArgs),
    /// Check both conditions on a family and decide its shape.
    CheckTheorem {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Read the family from a file instead of using the quadric sections.
        #[arg(long, value_name = "PATH", conflicts_with = "hyperoval")]
        family_file: Option<PathBuf>,
        /// Use the solids missing a hyperoval (n = 2, sign -).
        #[arg(long)]
        hyperoval: bool,
        /// Translation exponent of the hyperoval.
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Build the solids missing a hyperoval in PG(4,q) and verify them.
    Hyperoval {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Pencil spectra of quadric sections in odd characteristic.
    OddSpectrum(GeometryArgs),
    /// Every nucleus-line switch of Q(4,2).
    SwitchSearch {
        /// Write one JSON line per candidate here.
        #[arg(long, value_name = "PATH")]
        jsonl: Option<PathBuf>,
    },
    /// Exact counting identities for the quadric sections.
    Identities(GeometryArgs),
}

#[derive(Serialize, Debug)]
pub struct FieldEcho {
    pub p: u32,
    pub h: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub elliptic_constant: u32,
}

impl FieldEcho {
    fn of(f: &FieldSpec) -> Self {
        FieldEcho {
            p: f.p(),
            h: f.h(),
            q: f.q(),
            modulus: f.modulus(),
            elliptic_constant: elliptic_constant(f).0,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub config: Command,
    pub violation_cap: usize,
    pub field: Option<FieldEcho>,
    pub verdicts: Vec<Verdict>,
    pub spectra: BTreeMap<String, SpectrumReport>,
    pub payload: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl Report {
    fn new(config: Command, cap: usize) -> Self {
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            config,
            violation_cap: cap,
            field: None,
            verdicts: vec![],
            spectra: BTreeMap::new(),
            payload: BTreeMap::new(),
            timings_ms: Some(BTreeMap::new()),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::is_pass)
    }

    fn put(&mut self, key: &str, value: impl Serialize) {
        self.payload.insert(
            key.into(),
            serde_json::to_value(value).expect("report values serialize"),
        );
    }

    fn spectrum(&mut self, key: &str, s: SpectrumReport) {
        self.spectra.insert(key.into(), s);
    }

    fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if let Some(t) = &mut self.timings_ms {
            t.insert(phase.into(), start.elapsed().as_millis() as u64);
        }
        out
    }

    /// CSV rows spectrum,value,multiplicity over every flat spectrum.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["spectrum", "value", "multiplicity"])
            .map_err(io)?;
        for (name, s) in &self.spectra {
            for (v, m) in &s.values {
                w.write_record([name.as_str(), &v.to_string(), &m.to_string()])
                    .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

/// A configuration problem: reported on stderr with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        ConfigError(e.to_string())
    }
}

type Run<T> = std::result::Result<T, ConfigError>;

fn field_of(q: u64) -> Run<FieldSpec> {
    if prime_power(q).is_none() {
        return Err(ConfigError(format!("q = {q} is not a prime power")));
    }
    Ok(FieldSpec::of_order(q)?)
}

fn space_of(dim: usize, f: FieldSpec, common: &CommonArgs) -> Run<ProjectiveSpace> {
    let opts = SpaceOptions {
        max_points: common.max_points as u128,
        ..SpaceOptions::default()
    };
    Ok(ProjectiveSpace::with_options(dim, f, opts)?)
}

fn geometry(
    g: &GeometryArgs,
    common: &CommonArgs,
    min_n: u32,
) -> Run<(ProjectiveSpace, QuadraticForm, crate::BitSet)> {
    if g.n < min_n {
        return Err(ConfigError(format!(
            "n must be at least {min_n}, got {}",
            g.n
        )));
    }
    let space = space_of(2 * g.n as usize, field_of(g.q)?, common)?;
    let form = QuadraticForm::standard_parabolic(space.field(), g.n as usize)?;
    let quadric = form.point_set(&space)?;
    Ok((space, form, quadric))
}

fn need_even(q: u64, what: &str) -> Run<()> {
    if q.is_multiple_of(2) {
        Ok(())
    } else {
        Err(ConfigError(format!("{what} needs even q, got {q}")))
    }
}

fn point_json(space: &ProjectiveSpace, p: PointId) -> Value {
    json!({ "index": p.0, "coords": space.point_coords(p).iter().map(|e| e.0).collect::<Vec<_>>() })
}

/// Runs the parsed command and returns its report.
pub fn execute(command: &Command, common: &CommonArgs) -> Run<Report> {
    let cap = common.violation_cap;
    let mut rep = Report::new(command.clone(), cap);
    match command {
        Command::Census(g) => {
            let (space, form, quadric) = rep.timed("build", || geometry(g, common, 1))?;
            rep.field = Some(FieldEcho::of(space.field()));
            let n = g.n;
            let part = rep.timed("classify", || {
                family_from_classification(&space, &quadric, g.sign)
            })?;
            let (plus, minus) = match g.sign {
                Sign::Plus => (&part.chosen, &part.opposite),
                Sign::Minus => (&part.opposite, &part.chosen),
            };
            let expected = (
                sizes::parabolic(n, g.q) as u64,
                half_qn(n, g.q, 1),
                half_qn(n, g.q, -1),
            );
            let got = (
                quadric.count() as u64,
                plus.len() as u64,
                minus.len() as u64,
            );
            rep.verdicts.push(Verdict::from_violations(
                "quadric size and section census",
                u64::from(got != expected || part.tangent.len() as u64 != expected.0),
                vec![format!(
                    "(|Q|, |H+|, |H-|) = {got:?}, expected {expected:?}"
                )],
            ));
            rep.put("quadric_size", quadric.count());
            rep.put("form", &form);
            rep.put(
                "sections",
                json!({ "H+": plus.len(), "H-": minus.len(), "T": part.tangent.len() }),
            );
            if space.field().is_even() {
                rep.put("nucleus", point_json(&space, form.nucleus(&space)?));
            }
            let colouring = rep.timed("colour", || {
                colour_points(&space, &part.chosen, g.sign, cap)
            })?;
            if space.field().is_even() {
                rep.verdicts.push(check_condition_i(&colouring));
            }
            rep.put("colouring", &colouring);
        }
        Command::CheckTheorem {
            geometry: g,
            family_file,
            hyperoval,
            k,
        } => {
            need_even(g.q, "check-theorem")?;
            if g.n < 2 {
                return Err(ConfigError(format!("n must be at least 2, got {}", g.n)));
            }
            let space = space_of(2 * g.n as usize, field_of(g.q)?, common)?;
            rep.field = Some(FieldEcho::of(space.field()));
            let family = rep.timed("build", || -> Run<HyperplaneFamily> {
                if let Some(path) = family_file {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
                    Ok(parse_family(&space, &path.display().to_string(), &text)?)
                } else if *hyperoval {
                    if g.n != 2 || g.sign != Sign::Minus {
                        return Err(ConfigError("--hyperoval needs --n 2 --sign -".into()));
                    }
                    let oval = Hyperoval::translation(&space, *k)?;
                    Ok(crate::constructions::solids_disjoint_from(&space, &oval))
                } else {
                    let form = QuadraticForm::standard_parabolic(space.field(), g.n as usize)?;
                    let quadric = form.point_set(&space)?;
                    Ok(family_from_classification(&space, &quadric, g.sign)?.chosen)
                }
            })?;
            rep.put("family_size", family.len());
            let colouring = rep.timed("colour", || colour_points(&space, &family, g.sign, cap))?;
            let ci = check_condition_i(&colouring);
            let cii = rep.timed("codim2", || check_condition_ii(&space, &family, cap));
            rep.spectrum("pencil", cii.spectrum.clone());
            let both = ci.is_pass() && cii.verdict.as_ref().is_some_and(Verdict::is_pass);
            rep.verdicts.push(ci);
            rep.verdicts.extend(cii.verdict);
            rep.put("colouring", &colouring);
            if both {
                let tallies = section_tallies(&space, &colouring, &family);
                rep.put("section_tallies", &tallies);
                let conclusion = rep.timed("conclusion", || {
                    theorem_conclusion_check(&space, &family, g.sign)
                })?;
                rep.verdicts.push(conclusion.verdict.clone());
                rep.put("conclusion", &conclusion.conclusion);
            }
        }
        Command::Hyperoval { q, k } => {
            need_even(*q, "hyperoval")?;
            let space = space_of(4, field_of(*q)?, common)?;
            rep.field = Some(FieldEcho::of(space.field()));
            let oval = Hyperoval::translation(&space, *k)?;
            rep.put(
                "hyperoval",
                oval.points
                    .iter()
                    .map(|&p| point_json(&space, p))
                    .collect::<Vec<_>>(),
            );
            let r = rep.timed("verify", || verify_hyperoval_family(&space, &oval))?;
            rep.verdicts.extend(r.verdicts.iter().cloned());
            rep.spectrum("pencil", r.condition_ii.spectrum.clone());
            rep.put("family_size", r.family_size);
            rep.put(
                "census",
                json!({ "red": r.colouring.red, "white": r.colouring.white, "black": r.colouring.black }),
            );
            rep.put("colouring", &r.colouring);
            rep.put("lines_through_red", &r.lines.by_red_count);
            let family = crate::constructions::solids_disjoint_from(&space, &oval);
            let conclusion = rep.timed("conclusion", || {
                theorem_conclusion_check(&space, &family, Sign::Minus)
            })?;
            rep.verdicts.push(conclusion.verdict.clone());
            rep.put("conclusion", &conclusion.conclusion);
        }
        Command::OddSpectrum(g) => {
            if g.q % 2 == 0 {
                return Err(ConfigError(format!(
                    "odd-spectrum needs odd q, got {}",
                    g.q
                )));
            }
            let (space, form, _) = rep.timed("build", || geometry(g, common, 1))?;
            rep.field = Some(FieldEcho::of(space.field()));
            let r = rep.timed("codim2", || odd_q_spectrum(&space, &form, g.sign))?;
            rep.verdicts.push(r.verdict.clone());
            rep.spectrum("pencil", r.spectrum.clone());
            rep.put("allowed", &r.allowed);
            rep.put("by_perp_meet", &r.by_perp_meet);
        }
        Command::SwitchSearch { jsonl } => {
            let space = space_of(4, field_of(2)?, common)?;
            rep.field = Some(FieldEcho::of(space.field()));
            let r = rep.timed("search", || exhaustive_switch_search(&space))?;
            rep.verdicts.push(Verdict::from_violations(
                "standard quadric selection passes",
                u64::from(!r.standard_passes),
                vec![],
            ));
            rep.verdicts.push(Verdict::from_violations(
                "all 2^15 candidates enumerated",
                u64::from(r.candidates != 1 << 15),
                vec![],
            ));
            rep.put("search", &r);
            if let Some(path) = jsonl {
                write_jsonl(path, &r.records)?;
            }
        }
        Command::Identities(g) => {
            need_even(g.q, "identities")?;
            let (space, _, quadric) = rep.timed("build", || geometry(g, common, 2))?;
            rep.field = Some(FieldEcho::of(space.field()));
            let family = family_from_classification(&space, &quadric, g.sign)?.chosen;
            let colouring = rep.timed("colour", || colour_points(&space, &family, g.sign, cap))?;
            rep.verdicts.push(check_condition_i(&colouring));
            let ids = rep.timed("identities", || {
                verify_counting_identities(&space, &colouring, &family)
            })?;
            rep.verdicts.push(ids.verdict.clone());
            rep.put("identities", &ids);
            let tallies = section_tallies(&space, &colouring, &family);
            rep.put("section_tallies", &tallies);
            let (spec, v) = rep.timed("black_codim2", || {
                codim2_black_spectrum(&space, &colouring.black_set())
            })?;
            rep.verdicts.push(v);
            rep.spectrum("black_points_per_flat", spec);
        }
    }
    if common.no_timings {
        rep.timings_ms = None;
    }
    Ok(rep)
}

fn half_qn(n: u32, q: u64, e: i64) -> u64 {
    let qn = q.pow(n);
    (qn as i64 * (qn as i64 + e) / 2) as u64
}

fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Run<()> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first), runs, writes outputs, and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.workers)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let outcome = pool.install(|| execute(&cli.command, &cli.common));
    let report = match outcome {
        Ok(r) => r,
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    match emit(&report, &cli.common) {
        Ok(()) => {}
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    }
    for v in &report.verdicts {
        let tag = match v.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        };
        eprintln!("{tag} {}", v.check);
    }
    if report.passed() {
        0
    } else {
        1
    }
}

fn emit(report: &Report, common: &CommonArgs) -> Run<()> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    let write = |path: &Path, body: &str| {
        std::fs::write(path, body).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    };
    match &common.json {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &common.csv {
        write(path, &report.to_csv()?)?;
    }
    Ok(())
}
