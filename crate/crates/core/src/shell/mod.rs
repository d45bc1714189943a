//! Input files, command drivers, plain-text reports and DOT output.

mod cache;
mod input;
mod report;

use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

pub use cache::{Cache, CacheEntry, OracleEntry};
pub use input::{load, parse_input, parse_str, AtlasSpec, InputDescription, Loaded, QuiverSpec, Term};
pub use report::dot;

use crate::defectcore::{family_set, Analysis, DefectError, Origin, Substructure};
use crate::exactfield::Subspace;
use crate::funcat::IndexSet;
use report::{mask_label, pair_dims, set_names, table};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShellError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("{0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Defect(#[from] DefectError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Substructures { dot: Option<PathBuf> },
    Defect { c: String, a: String, coeffs: Vec<i64> },
    Verify,
    Oracle,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Substructures { .. } => "substructures",
            Command::Defect { .. } => "defect",
            Command::Verify => "verify",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub p: Option<u64>,
    pub cache: Cache,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: None,
            samples: None,
            p: None,
            cache: Cache::disabled(),
        }
    }
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

pub fn run(cmd: &Command, input: &Path, opts: &Options) -> Outcome {
    let start = Instant::now();
    let result = parse_input(input).and_then(|d| load(d, opts.p)).and_then(|l| dispatch(cmd, &l, opts));
    let elapsed = format!("{}: {:.3}s\n", cmd.name(), start.elapsed().as_secs_f64());
    match result {
        Ok((ok, stdout)) => Outcome {
            code: if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
            stdout,
            stderr: elapsed,
        },
        Err(e) => Outcome {
            code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n{elapsed}"),
        },
    }
}

fn dispatch(cmd: &Command, loaded: &Loaded, opts: &Options) -> Result<(bool, String), ShellError> {
    let seed = opts.seed.unwrap_or(loaded.description.seed);
    let samples = opts.samples.unwrap_or(loaded.description.samples);
    match cmd {
        Command::Analyze => Ok((true, analyze(loaded, &opts.cache))),
        Command::Substructures { dot } => substructures(loaded, dot.as_deref()),
        Command::Defect { c, a, coeffs } => defect(loaded, c, a, coeffs),
        Command::Verify => Ok(verify(loaded, samples, seed)?),
        Command::Oracle => oracle(loaded, &opts.cache),
    }
}

fn analysis(loaded: &Loaded) -> Analysis {
    Analysis::new(loaded.atlas.clone())
}

fn table_entry(an: &Analysis) -> CacheEntry {
    let n = an.len();
    CacheEntry {
        hom_dims: (0..n).map(|i| (0..n).map(|j| an.table().hom(i, j).dim()).collect()).collect(),
        ext_dims: an.ext().dims(),
        simple_defects: an.simple_defects().iter().copied().collect(),
        ..Default::default()
    }
}

fn cached_tables(loaded: &Loaded, cache: &Cache) -> (CacheEntry, Option<Analysis>) {
    let key = loaded.hash();
    if let Some(entry) = cache.get(&key) {
        return (entry, None);
    }
    let an = analysis(loaded);
    let entry = table_entry(&an);
    cache.put(&key, entry.clone());
    (entry, Some(an))
}

pub fn analyze(loaded: &Loaded, cache: &Cache) -> String {
    let (entry, _) = cached_tables(loaded, cache);
    let names = loaded.atlas.names();
    let mut out = String::new();
    let _ = writeln!(out, "field: F_{}", loaded.description.p);
    let _ = writeln!(out, "atlas ({}): {}", names.len(), names.join(" "));
    let _ = writeln!(out, "hom dimensions (row X, column Y: dim Hom(X, Y)):");
    out.push_str(&table(&names, |i, j| entry.hom_dims[i][j]));
    let _ = writeln!(out, "ext dimensions (row C, column A: dim E(C, A)):");
    out.push_str(&table(&names, |i, j| entry.ext_dims[i][j]));
    let total: usize = entry.ext_dims.iter().flatten().sum();
    let simple: IndexSet = entry.simple_defects.iter().copied().collect();
    let _ = writeln!(out, "total ext dimension: {total}");
    let _ = writeln!(out, "simple defects: {}", set_names(&simple, &names));
    let _ = writeln!(out, "serre subsets: {}", 1u64 << simple.len());
    out
}

fn substructures(loaded: &Loaded, dot_path: Option<&Path>) -> Result<(bool, String), ShellError> {
    let an = analysis(loaded);
    let names = an.atlas().names();
    let poset = an.serre_subsets();
    let bits = poset.simples.len();
    let mut out = String::new();
    let simples: IndexSet = poset.simples.iter().copied().collect();
    let _ = writeln!(out, "simple defects: {} (bit i = i-th listed)", set_names(&simples, &names));
    let _ = writeln!(out, "substructures: {}", poset.elements.len());
    for s in &poset.elements {
        let dims = pair_dims(&an, s);
        let body = if dims.is_empty() { "split".to_string() } else { dims.join(" ") };
        let _ = writeln!(out, "  {} {}: {body}", mask_label(poset.mask(s), bits), set_names(s, &names));
    }
    let edges: Vec<String> = poset
        .edges
        .iter()
        .map(|&(a, b)| format!("{}->{}", mask_label(a as u64, bits), mask_label(b as u64, bits)))
        .collect();
    let _ = writeln!(out, "hasse edges ({}): {}", edges.len(), edges.join(" "));
    if let Some(path) = dot_path {
        std::fs::write(path, dot(&an, &poset)).map_err(|e| ShellError::Io(format!("{}: {e}", path.display())))?;
        let _ = writeln!(out, "dot: {} nodes, {} edges", poset.elements.len(), poset.edges.len());
    }
    Ok((true, out))
}

fn atlas_ref(an: &Analysis, s: &str) -> Result<usize, ShellError> {
    let names = an.atlas().names();
    names
        .iter()
        .position(|n| *n == s)
        .or_else(|| s.parse::<usize>().ok().filter(|&i| i < names.len()))
        .ok_or_else(|| ShellError::Usage(format!("`{s}` is neither an atlas name nor an index")))
}

fn defect(loaded: &Loaded, c: &str, a: &str, coeffs: &[i64]) -> Result<(bool, String), ShellError> {
    let an = analysis(loaded);
    let names = an.atlas().names();
    let (ci, ai) = (atlas_ref(&an, c)?, atlas_ref(&an, a)?);
    let dim = an.ext().group(ci, ai).dim();
    if coeffs.len() != dim {
        return Err(ShellError::Usage(format!(
            "E({}, {}) has dimension {dim}, got {} coefficients",
            names[ci],
            names[ai],
            coeffs.len()
        )));
    }
    let field = an.table().field();
    let delta: Vec<u64> = coeffs.iter().map(|&x| field.from_i64(x)).collect();
    let class = an.realize(ci, ai, &delta);
    let d = an.defect(&class)?;
    let parts = crate::repmod::krull_schmidt_decompose(&class.conf.b, an.atlas()).map_err(DefectError::from)?;
    let middle: Vec<&str> = parts.summands.iter().map(|s| names[s.index]).collect();
    let mut out = String::new();
    let _ = writeln!(out, "class {:?} in E({}, {})", delta, names[ci], names[ai]);
    let _ = writeln!(
        out,
        "middle term: {}",
        if middle.is_empty() { "0".to_string() } else { middle.join(" + ") }
    );
    let dims: Vec<String> = names.iter().zip(d.module.dims()).map(|(n, k)| format!("{n}:{k}")).collect();
    let _ = writeln!(out, "defect dimensions: {}", dims.join(" "));
    let factors: Vec<String> = d
        .factors
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(i, m)| format!("{}^{m}", names[i]))
        .collect();
    let _ = writeln!(
        out,
        "factors: {}",
        if factors.is_empty() { "none".to_string() } else { factors.join(" ") }
    );
    let _ = writeln!(
        out,
        "dual construction: {}",
        if d.consistent { "agrees" } else { "DISAGREES" }
    );
    Ok((d.consistent, out))
}

/// The full invariant suite as a deterministic report.
pub fn verify(loaded: &Loaded, samples: usize, seed: u64) -> Result<(bool, String), ShellError> {
    let an = analysis(loaded);
    let names = an.atlas().names();
    let mut ok = true;
    let mut out = String::new();
    let mut line = |out: &mut String, pass: bool, text: String| {
        ok &= pass;
        let _ = writeln!(out, "[{}] {text}", if pass { "pass" } else { "FAIL" });
    };
    let _ = writeln!(out, "verify: p = {}, seed = {seed}, samples = {samples}", loaded.description.p);

    let (by_ext, by_support) = (an.simple_defects(), an.simple_defects_by_support());
    line(
        &mut out,
        by_ext == by_support,
        format!(
            "simple defects: {} by Ext, {} by column factors",
            set_names(by_ext, &names),
            set_names(by_support, &names)
        ),
    );

    let poset = an.serre_subsets();
    let bits = poset.simples.len();
    let oracle = match an.oracle_sweep() {
        Ok(sweep) => Some(sweep),
        Err(DefectError::TooLarge(why)) => {
            let _ = writeln!(out, "[skip] oracle: {why}");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let rt = an.theorem_roundtrip(oracle.as_ref().map(|s| s.closed.as_slice()))?;
    line(
        &mut out,
        rt.serre_roundtrip,
        format!("def F(S) = S for all {} Serre subsets", rt.serre_count),
    );
    line(&mut out, rt.order_preserving, "S -> F(S) is an order isomorphism onto its image".into());
    if let (Some(sweep), Some(m)) = (&oracle, rt.oracle_match) {
        line(
            &mut out,
            m,
            format!(
                "oracle: {} closed of {} families ({} unstable, {} stable but not closed), identical to F(S)",
                sweep.closed.len(),
                sweep.families,
                sweep.unstable.len(),
                sweep.stable_not_closed.len()
            ),
        );
    }
    for f in &rt.failures {
        let _ = writeln!(out, "    {f}");
    }

    match an.exact_structure_report(loaded.description.full_module_category) {
        Ok(r) => line(
            &mut out,
            r.maximal_is_all && r.minimal_is_split,
            format!("exact structures: {} (largest = all short exact sequences)", r.count()),
        ),
        Err(DefectError::NotFullModuleCategory) => {
            let _ = writeln!(out, "[skip] exact structures: full_module_category not set");
        }
        Err(e) => return Err(e.into()),
    }

    for s in &poset.elements {
        let f = an.substructure_from_serre(s);
        let label = format!("{} {}", mask_label(poset.mask(s), bits), set_names(s, &names));
        match an.verify_closed(&f, samples, seed) {
            Ok(r) => line(
                &mut out,
                r.step3_failures == 0 && &r.serre == s,
                format!(
                    "closed {label}: {} composable pairs, four-term sequence exact on {}",
                    r.samples,
                    r.samples - r.step3_failures
                ),
            ),
            Err(e) => line(&mut out, false, format!("closed {label}: {e}")),
        }
    }

    let checks = [
        an.check_dual_construction(2 * samples, seed)?,
        an.check_pullback_monotone(samples, seed)?,
        an.check_pushout_monotone(samples, seed)?,
        an.check_step3(samples, seed)?,
        an.check_additivity(samples, seed)?,
        an.check_serre_closure(samples, seed)?,
        an.check_effaceability(samples, seed)?,
        an.check_membership(2 * samples, seed)?,
    ];
    for c in &checks {
        line(&mut out, c.ok(), format!("{}: {}/{}", c.name, c.passed, c.total));
    }

    let controls = an.negative_controls(samples, seed);
    let rejected = controls.iter().filter(|c| c.rejected()).count();
    line(
        &mut out,
        rejected == controls.len(),
        format!("negative controls rejected: {rejected}/{}", controls.len()),
    );
    for c in &controls {
        let _ = writeln!(out, "    {}: {} (expected {})", c.description, c.got, c.expected);
    }
    let _ = writeln!(out, "result: {}", if ok { "PASS" } else { "FAIL" });
    Ok((ok, out))
}

fn oracle(loaded: &Loaded, cache: &Cache) -> Result<(bool, String), ShellError> {
    let key = loaded.hash();
    let an = analysis(loaded);
    let mut entry = cache.get(&key).unwrap_or_else(|| table_entry(&an));
    let result = match entry.oracle.clone() {
        Some(r) => r,
        None => {
            let sweep = an.oracle_sweep()?;
            let r = OracleEntry {
                families: sweep.families,
                unstable: sweep.unstable.len(),
                stable_not_closed: sweep.stable_not_closed.len(),
                closed: sweep.closed.iter().map(|f| f.spaces.clone()).collect(),
            };
            entry.oracle = Some(r.clone());
            cache.put(&key, entry);
            r
        }
    };
    let closed: Vec<Substructure> = result
        .closed
        .iter()
        .map(|spaces: &Vec<Vec<Subspace>>| Substructure {
            spaces: spaces.clone(),
            origin: Origin::Oracle,
        })
        .collect();
    let serre: Vec<Substructure> = an
        .serre_subsets()
        .elements
        .iter()
        .map(|s| an.substructure_from_serre(s))
        .collect();
    let same = family_set(&closed) == family_set(&serre);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "families: {} ({} unstable, {} stable but not closed, {} closed)",
        result.families,
        result.unstable,
        result.stable_not_closed,
        closed.len()
    );
    let _ = writeln!(
        out,
        "oracle = {}, serre = {}, sets {}",
        closed.len(),
        serre.len(),
        if same { "identical" } else { "differ" }
    );
    Ok((same, out))
}
