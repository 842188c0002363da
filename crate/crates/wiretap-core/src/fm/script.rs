//! Scripted replay of a symbolic elimination chain.
//!
//! A script is a sequence of steps (eliminations, rate transfers, zeroing a
//! rate, explicit removals of redundant rows) interleaved with checkpoints
//! naming a recorded system. The replay runs the engine and compares, at
//! every checkpoint, the produced system with the recorded one as sets of
//! canonical constraints: equalities in reduced row-echelon form, the other
//! rows reduced by them and scaled so their smallest coefficient magnitude
//! is 1, right-hand sides reduced modulo the entropy equalities of the
//! factorization.
//!
//! The engine never discards rows on its own beyond exact duplicates, so
//! every row a recorded system omits must be removed by an explicit `drop`
//! (the row is implied by the others) or `relax` (a variable-free bound
//! removed without enlarging the union region) step. Drops are certified
//! numerically by linear programming on random joint distributions of the
//! factorization.
//!
//! Script syntax, one step per line (`#` starts a comment):
//!
//! ```text
//! structure general_inner | degraded_chain
//! start <system>
//! eliminate <var>
//! transfer <src> -> <dst> via <slack> [; <src> -> <dst> via <slack>]*
//! zero <var>
//! drop <row>
//! relax <row>
//! expect <system>
//! target <system>
//! ```
//!
//! System files list one row per line in the linear-row syntax of
//! [`crate::algebra::parse_linear_row`]; every rate variable of a system is
//! implicitly nonnegative.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::lp::implies;
use super::rhs::Rhs;
use super::system::{fm_eliminate, normalize_row, IneqSystem, LinIneq, Relation};
use super::transfer::{apply_rate_transfer, Transfer};
use super::vertices::region_equal;
use crate::algebra::{derive_equalities, parse_linear_row, Atom, EqualitySet, InfoExpr, Rational, RowOp, Structure};
use crate::error::{Error, Result};
use crate::info::ProbTable;
use crate::rng::stream;

/// Number of random joints used to certify removals.
pub const CERTIFY_SAMPLES: u64 = 300;
/// Implication tolerance (nats) of the certification LPs; the simplex solver
/// is accurate to roughly 1e-8.
pub const CERTIFY_TOL: f64 = 1e-7;
/// Minimum number of joints on which the certified region must be
/// nonempty (an implication on an empty region proves nothing).
pub const CERTIFY_MIN_NONEMPTY: usize = 20;
/// Seed of the certification joints.
pub const CERTIFY_SEED: u64 = 0xB0B5;

/// One step of an elimination script.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Eliminate(String),
    Transfer(Vec<Transfer>),
    SetZero(String),
    /// Rows implied by the rest of the current system.
    Drop(Vec<LinIneq<Rhs>>),
    /// Variable-free rows removed without enlarging the union region.
    Relax(Vec<LinIneq<Rhs>>),
    /// Checkpoint: the current system must equal the named recorded one.
    Expect { name: String, system: IneqSystem<Rhs> },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Eliminate(v) => write!(f, "eliminate {v}"),
            Step::Transfer(ts) => {
                write!(f, "transfer ")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{} -> {} via {}", t.source, t.dest, t.slack)?;
                }
                Ok(())
            }
            Step::SetZero(v) => write!(f, "zero {v}"),
            Step::Drop(rows) => write!(f, "drop {} row(s)", rows.len()),
            Step::Relax(rows) => write!(f, "relax {} row(s)", rows.len()),
            Step::Expect { name, .. } => write!(f, "expect {name}"),
        }
    }
}

/// A parsed script with its recorded systems resolved.
#[derive(Clone, Debug)]
pub struct Script {
    pub structure: Structure,
    pub start: IneqSystem<Rhs>,
    pub steps: Vec<Step>,
    pub target: IneqSystem<Rhs>,
}

/// Outcome of one executed step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub index: usize,
    pub label: String,
    /// Number of rows in the system after the step.
    pub rows: usize,
    /// Free-form note (checkpoint match, certification summary).
    pub note: String,
}

/// Per-step record of a successful replay.
#[derive(Clone, Debug, PartialEq)]
pub struct ScriptReport {
    pub steps: Vec<StepOutcome>,
    pub checkpoints: usize,
    pub final_rows: usize,
}

impl fmt::Display for ScriptReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "step {:>2}  {:<40} rows={:<3} {}", s.index, s.label, s.rows, s.note)?;
        }
        write!(f, "{} checkpoints matched; final system has {} rows", self.checkpoints, self.final_rows)
    }
}

/// Parses one linear row into a symbolic constraint.
pub fn parse_row(src: &str) -> Result<LinIneq<Rhs>> {
    let r = parse_linear_row(src)?;
    let rel = match r.op {
        RowOp::Le => Relation::Le,
        RowOp::Eq => Relation::Eq,
    };
    Ok(LinIneq { coeffs: r.coeffs, rel, rhs: Rhs::min_of(r.rhs)? })
}

/// Parses a system file; every rate variable mentioned is declared
/// nonnegative.
pub fn parse_system(src: &str) -> Result<IneqSystem<Rhs>> {
    let mut rows = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        rows.push(parse_row(line).map_err(|e| at_line(e, ln + 1))?);
    }
    Ok(IneqSystem::new(rows).with_nonnegativity())
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { col, msg, .. } => Error::Parse { line, col, msg },
        other => Error::Parse { line, col: 1, msg: other.to_string() },
    }
}

impl Script {
    /// Parses a script; `load` returns the text of a named system file.
    pub fn parse(src: &str, load: &dyn Fn(&str) -> Result<String>) -> Result<Script> {
        let mut structure = None;
        let mut start = None;
        let mut target = None;
        let mut steps = Vec::new();
        let system = |name: &str, line: usize| -> Result<IneqSystem<Rhs>> {
            let text = load(name).map_err(|e| at_line(e, line))?;
            parse_system(&text).map_err(|e| match e {
                Error::Parse { line: l, col, msg } => Error::Parse { line: l, col, msg: format!("in system `{name}`: {msg}") },
                other => other,
            })
        };
        for (ln, raw) in src.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let bad = |msg: String| Error::Parse { line: ln + 1, col: 1, msg };
            if rest.is_empty() {
                return Err(bad(format!("`{kw}` needs an argument")));
            }
            match kw {
                "structure" => {
                    structure = Some(match rest {
                        "general_inner" => Structure::general_inner(),
                        "degraded_chain" => Structure::degraded_chain(),
                        other => return Err(bad(format!("unknown structure `{other}`"))),
                    })
                }
                "start" => start = Some(system(rest, ln + 1)?),
                "target" => target = Some(system(rest, ln + 1)?),
                "expect" => steps.push(Step::Expect { name: rest.to_string(), system: system(rest, ln + 1)? }),
                "eliminate" => steps.push(Step::Eliminate(rest.to_string())),
                "zero" => steps.push(Step::SetZero(rest.to_string())),
                "drop" | "relax" => {
                    let row = parse_row(rest).map_err(|e| at_line(e, ln + 1))?;
                    let row = vec![row];
                    // consecutive rows of the same kind form one step
                    match (kw, steps.last_mut()) {
                        ("drop", Some(Step::Drop(rows))) | ("relax", Some(Step::Relax(rows))) => rows.extend(row),
                        ("drop", _) => steps.push(Step::Drop(row)),
                        _ => steps.push(Step::Relax(row)),
                    }
                }
                "transfer" => {
                    let mut ts = Vec::new();
                    for part in rest.split(';') {
                        let (src_dst, slack) = part.split_once(" via ").ok_or_else(|| bad("expected `src -> dst via slack`".into()))?;
                        let (s, d) = src_dst.split_once("->").ok_or_else(|| bad("expected `src -> dst via slack`".into()))?;
                        ts.push(Transfer::new(s.trim(), d.trim(), slack.trim()));
                    }
                    steps.push(Step::Transfer(ts));
                }
                other => return Err(bad(format!("unknown step `{other}`"))),
            }
        }
        let missing = |what: &str| Error::Parse { line: 1, col: 1, msg: format!("script has no `{what}` line") };
        Ok(Script {
            structure: structure.ok_or_else(|| missing("structure"))?,
            start: start.ok_or_else(|| missing("start"))?,
            steps,
            target: target.ok_or_else(|| missing("target"))?,
        })
    }

    /// Replays the script against its own start and target systems.
    pub fn verify(&self) -> Result<ScriptReport> {
        let eqs = derive_equalities(&self.structure)?;
        verify_elimination_script(&self.start, &self.steps, &self.target, &eqs)
    }
}

/// Canonical rows of a system keyed by their printed form, together with
/// the key of every original row (in order).
fn canonical(sys: &IneqSystem<Rhs>, eqs: &EqualitySet) -> Result<(BTreeMap<String, LinIneq<Rhs>>, Vec<String>)> {
    // reduced row-echelon form of the equalities, pivots on the smallest
    // variable name
    let mut pivots: BTreeMap<String, LinIneq<Rhs>> = BTreeMap::new();
    let mut constants = Vec::new();
    for row in sys.ineqs.iter().filter(|r| r.rel == Relation::Eq) {
        let mut r = reduce_by(row, &pivots)?;
        let Some((v, c)) = r.coeffs.iter().next().map(|(v, c)| (v.clone(), c.clone())) else {
            constants.push(r);
            continue;
        };
        if !c.is_one() {
            r = r.combine(&(Rational::one() / c), &r, &Rational::zero())?;
        }
        for p in pivots.values_mut() {
            let k = p.coeff(&v);
            if !k.is_zero() {
                *p = p.combine(&Rational::one(), &r, &(-k))?;
            }
        }
        pivots.insert(v, r);
    }
    let mut keys = Vec::with_capacity(sys.ineqs.len());
    let mut out = BTreeMap::new();
    let put = |r: LinIneq<Rhs>, out: &mut BTreeMap<String, LinIneq<Rhs>>| -> String {
        let r = LinIneq { coeffs: r.coeffs, rel: r.rel, rhs: r.rhs.canonical(eqs) };
        let key = r.to_string();
        out.entry(key.clone()).or_insert(r);
        key
    };
    for p in pivots.values().chain(constants.iter()) {
        put(p.clone(), &mut out);
    }
    for row in &sys.ineqs {
        if row.rel == Relation::Eq {
            // equalities are represented by their echelon form as a whole
            keys.push(String::new());
            continue;
        }
        let r = normalize_row(reduce_by(row, &pivots)?);
        if r.coeffs.is_empty() && r.rhs.alternatives().iter().all(|a| eqs.reduce(a).is_zero()) {
            keys.push(String::new());
            continue;
        }
        keys.push(put(r, &mut out));
    }
    Ok((out, keys))
}

fn reduce_by(row: &LinIneq<Rhs>, pivots: &BTreeMap<String, LinIneq<Rhs>>) -> Result<LinIneq<Rhs>> {
    let mut r = row.clone();
    for (v, p) in pivots {
        let k = r.coeff(v);
        if !k.is_zero() {
            r = r.combine(&Rational::one(), p, &(-k))?;
        }
    }
    Ok(r)
}

/// Describes the difference between two systems, or `None` if they agree.
fn diff(got: &IneqSystem<Rhs>, want: &IneqSystem<Rhs>, eqs: &EqualitySet) -> Result<Option<String>> {
    let (g, _) = canonical(got, eqs)?;
    let (w, _) = canonical(want, eqs)?;
    let missing: Vec<&String> = w.keys().filter(|k| !g.contains_key(*k)).collect();
    let extra: Vec<&String> = g.keys().filter(|k| !w.contains_key(*k)).collect();
    if missing.is_empty() && extra.is_empty() {
        return Ok(None);
    }
    let mut s = format!("{} recorded row(s) not produced, {} produced row(s) not recorded", missing.len(), extra.len());
    for m in &missing {
        s += &format!("\n  recorded row not produced: `{m}`");
    }
    for x in &extra {
        s += &format!("\n  produced row not recorded: `{x}`");
    }
    Ok(Some(s))
}

/// Numeric instantiation of a symbolic system on a joint distribution.
fn instantiate(sys: &IneqSystem<Rhs>, t: &ProbTable, cache: &mut HashMap<Atom, f64>) -> Result<IneqSystem<f64>> {
    for row in &sys.ineqs {
        for alt in row.rhs.alternatives() {
            for a in alt.terms().keys() {
                if !cache.contains_key(a) {
                    let names: Vec<&str> = a.vars().iter().map(String::as_str).collect();
                    cache.insert(a.clone(), t.entropy(&names)?);
                }
            }
        }
    }
    let c: &HashMap<Atom, f64> = cache;
    sys.map_rhs(|r| Ok(r.eval_with(&|e: &InfoExpr| e.eval_with(&|a| c[a]))))
}

/// Certification joints, cycling over the factorization itself and two of
/// its sub-models: outputs forming a degraded chain (Y1 → Y2 → Z), and the
/// same with V2 depending on U only. In the sub-models secrecy differences
/// tend to be positive, so the regions are often nonempty.
fn certification_joints(eqs: &EqualitySet) -> Result<Vec<ProbTable>> {
    let s = eqs.structure().cloned().unwrap_or_else(Structure::general_inner);
    let mut models = vec![s.clone()];
    models.extend(restrict(&s, &[("Y2", "Y1"), ("Z", "Y2")])?);
    models.extend(restrict(&s, &[("Y2", "Y1"), ("Z", "Y2"), ("V2", "U")])?);
    (0..CERTIFY_SAMPLES)
        .map(|i| models[i as usize % models.len()].sample_joint(&|_| 2, &mut stream(CERTIFY_SEED, i)))
        .collect()
}

/// The sub-model in which each listed node keeps only the listed parent,
/// when the structure has all those edges.
fn restrict(s: &Structure, edges: &[(&str, &str)]) -> Result<Option<Structure>> {
    if !edges.iter().all(|(n, p)| s.parents(n).is_some_and(|ps| ps.contains(*p))) {
        return Ok(None);
    }
    let nodes: Vec<(String, Vec<String>)> = s
        .nodes()
        .iter()
        .map(|n| {
            let ps: Vec<String> = match edges.iter().find(|(m, _)| m == n) {
                Some((_, p)) => vec![p.to_string()],
                None => s.parents(n).map(|p| p.iter().cloned().collect()).unwrap_or_default(),
            };
            (n.clone(), ps)
        })
        .collect();
    Structure::new(&nodes).map(Some)
}

/// Removes `rows` from `sys`, failing if any of them is not present.
fn remove_rows(sys: &IneqSystem<Rhs>, rows: &[LinIneq<Rhs>], eqs: &EqualitySet) -> std::result::Result<(IneqSystem<Rhs>, IneqSystem<Rhs>), String> {
    let (_, keys) = canonical(sys, eqs).map_err(|e| e.to_string())?;
    let mut removed = IneqSystem::default();
    let mut wanted = BTreeSet::new();
    for r in rows {
        let probe = IneqSystem::new(vec![r.clone()]);
        let (_, k) = canonical(&probe, eqs).map_err(|e| e.to_string())?;
        if !keys.contains(&k[0]) {
            return Err(format!("row to remove is not in the system: `{}`", k[0]));
        }
        wanted.insert(k[0].clone());
    }
    let mut kept = IneqSystem::default();
    kept.vars = sys.vars.clone();
    for (row, key) in sys.ineqs.iter().zip(&keys) {
        if wanted.contains(key) {
            removed.push(row.clone());
        } else {
            kept.push(row.clone());
        }
    }
    Ok((kept, removed))
}

/// Replays `steps` from `start`, checking every checkpoint and finally the
/// target. The first divergence is reported as
/// [`Error::ScriptStepMismatch`] naming the step and the offending row.
pub fn verify_elimination_script(start: &IneqSystem<Rhs>, steps: &[Step], target: &IneqSystem<Rhs>, eqs: &EqualitySet) -> Result<ScriptReport> {
    let (cur, out, checkpoints) = replay(start, steps, eqs, true)?;
    if let Some(d) = diff(&cur, target, eqs)? {
        return Err(Error::ScriptStepMismatch { step: steps.len() + 1, label: "target".into(), detail: d });
    }
    Ok(ScriptReport { steps: out, checkpoints, final_rows: cur.ineqs.len() })
}

/// Runs the transforming steps only: checkpoints are skipped and removals
/// are applied without certification. Returns the final system.
pub fn execute_steps(start: &IneqSystem<Rhs>, steps: &[Step], eqs: &EqualitySet) -> Result<IneqSystem<Rhs>> {
    Ok(replay(start, steps, eqs, false)?.0)
}

fn replay(start: &IneqSystem<Rhs>, steps: &[Step], eqs: &EqualitySet, check: bool) -> Result<(IneqSystem<Rhs>, Vec<StepOutcome>, usize)> {
    let mut cur = start.clone();
    let mut out = Vec::new();
    let mut checkpoints = 0;
    let mut joints: Option<Vec<ProbTable>> = None;
    for (i, step) in steps.iter().enumerate() {
        let label = step.to_string();
        let mismatch = |detail: String| Error::ScriptStepMismatch { step: i + 1, label: label.clone(), detail };
        let present = |v: &str| if cur.vars.contains(v) { Ok(()) } else { Err(mismatch(format!("variable `{v}` is not in the system"))) };
        let mut note = String::new();
        match step {
            Step::Eliminate(v) => {
                present(v)?;
                cur = fm_eliminate(&cur, v)?;
            }
            Step::Transfer(ts) => {
                for t in ts {
                    present(&t.source)?;
                }
                cur = apply_rate_transfer(&cur, ts)?;
            }
            Step::SetZero(v) => {
                present(v)?;
                cur = cur.set_zero(v);
            }
            Step::Drop(rows) | Step::Relax(rows) => {
                let (kept, removed) = remove_rows(&cur, rows, eqs).map_err(&mismatch)?;
                if check {
                    let js = match &mut joints {
                        Some(j) => j,
                        None => joints.insert(certification_joints(eqs)?),
                    };
                    note = if matches!(step, Step::Drop(_)) {
                        certify_implied(&kept, &removed, js).map_err(&mismatch)?
                    } else {
                        certify_relaxed(&kept, &removed, js).map_err(&mismatch)?
                    };
                }
                cur = kept;
            }
            Step::Expect { name, system } => {
                if check {
                    if let Some(d) = diff(&cur, system, eqs)? {
                        return Err(mismatch(d));
                    }
                    checkpoints += 1;
                    note = format!("matches {name}");
                }
            }
        }
        out.push(StepOutcome { index: i + 1, label, rows: cur.ineqs.len(), note });
    }
    Ok((cur, out, checkpoints))
}

/// Every removed row must be implied by the kept rows on each sample.
fn certify_implied(kept: &IneqSystem<Rhs>, removed: &IneqSystem<Rhs>, joints: &[ProbTable]) -> std::result::Result<String, String> {
    let mut nonvacuous = 0;
    for (k, t) in joints.iter().enumerate() {
        let mut cache = HashMap::new();
        let kn = instantiate(kept, t, &mut cache).map_err(|e| e.to_string())?;
        let rn = instantiate(removed, t, &mut cache).map_err(|e| e.to_string())?;
        if super::lp::maximize(&kn, &[]) != super::lp::LpOutcome::Infeasible {
            nonvacuous += 1;
        }
        for (row, sym) in rn.ineqs.iter().zip(&removed.ineqs) {
            if !implies(&kn, row, CERTIFY_TOL) {
                return Err(format!("removed row `{sym}` is not implied by the rest on certification sample {k}"));
            }
        }
    }
    if nonvacuous < CERTIFY_MIN_NONEMPTY {
        return Err(format!("inconclusive: the region is nonempty on only {nonvacuous} certification samples"));
    }
    Ok(format!("implied on {nonvacuous} samples with a nonempty region"))
}

/// Relaxed rows must be free of rate variables; wherever they hold the
/// region with and without them must coincide.
fn certify_relaxed(kept: &IneqSystem<Rhs>, removed: &IneqSystem<Rhs>, joints: &[ProbTable]) -> std::result::Result<String, String> {
    if let Some(r) = removed.ineqs.iter().find(|r| !r.coeffs.is_empty()) {
        return Err(format!("relaxed row `{r}` involves rate variables"));
    }
    let mut holding = 0;
    for t in joints {
        let mut cache = HashMap::new();
        let kn = instantiate(kept, t, &mut cache).map_err(|e| e.to_string())?;
        let rn = instantiate(removed, t, &mut cache).map_err(|e| e.to_string())?;
        if rn.ineqs.iter().all(|r| r.rhs >= -1e-12) && super::lp::maximize(&kn, &[]) != super::lp::LpOutcome::Infeasible {
            holding += 1;
            let mut full = kn.clone();
            for r in rn.ineqs {
                full.push(r);
            }
            if !region_equal(&kn, &full, CERTIFY_TOL).map_err(|e| e.to_string())? {
                return Err("relaxation changed the region where the relaxed rows hold".into());
            }
        }
    }
    if holding < CERTIFY_MIN_NONEMPTY {
        return Err(format!("inconclusive: the relaxed rows hold with a nonempty region on only {holding} samples"));
    }
    Ok(format!("relaxed rows hold on {holding} samples; region unchanged there"))
}

/// Canonical equality of two symbolic systems (as constraint sets).
pub fn systems_equal(a: &IneqSystem<Rhs>, b: &IneqSystem<Rhs>, eqs: &EqualitySet) -> Result<bool> {
    Ok(diff(a, b, eqs)?.is_none())
}
