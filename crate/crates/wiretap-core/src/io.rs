//! File formats: TOML channel, auxiliary and covariance-split documents,
//! and deterministic tabular output (CSV or aligned text) for regions,
//! sweeps and check reports.
//!
//! Channel documents carry a `kind` of `discrete`, `gauss` or `gauss_h`,
//! optional `name` / `seed` metadata, and the kernel rows or matrices in
//! row-major decimal:
//!
//! ```toml
//! kind = "discrete"
//! form = "cascade"            # cascade | marginals | joint
//! kernels = [                 # p(y1|x), p(y2|y1), p(z|y2)
//!   [[1.0, 0.0], [0.0, 1.0]],
//!   [[1.0, 0.0], [0.0, 1.0]],
//!   [[1.0, 0.0], [0.0, 1.0]],
//! ]
//! ```
//!
//! A `joint` discrete channel lists `outputs = [|Y1|, |Y2|, |Z|]` and one
//! row of p(y1,y2,z|x) per input symbol (z fastest) under `joint`. Gaussian
//! channels give the matrices `s`, `sigma1`, `sigma2`, `sigma_z`; gain
//! channels give `h1`, `h2`, `hz`.

use std::io::Write;
use std::path::Path;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fm::{IneqSystem, Relation, VPolytope};
use crate::info::{build_degraded_joint, ChannelKernel, ChannelSpec, Kernel, ProbTable, VarId, OUTPUT_NAMES};
use crate::linalg::Mat;
use crate::regions::discrete::AuxJoint;
use crate::regions::gaussian::{CovSplit, GaussChannel, HGaussChannel};
use crate::regions::{SweepResult, RATES};

type Rows = Vec<Vec<f64>>;

/// How a discrete channel document stores its transition law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscreteForm {
    /// p(y1|x), p(y2|y1), p(z|y2): degraded by construction.
    Cascade,
    /// p(y1|x), p(y2|x), p(z|x) with conditionally independent outputs.
    Marginals,
    /// Full p(y1,y2,z|x).
    Joint,
}

/// The `kind` field alone, read first to pick the document schema.
#[derive(Deserialize)]
struct KindField {
    kind: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscreteDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    form: DiscreteForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kernels: Option<Vec<Rows>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outputs: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    joint: Option<Rows>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    s: Rows,
    sigma1: Rows,
    sigma2: Rows,
    sigma_z: Rows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussHDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    h1: Rows,
    h2: Rows,
    hz: Rows,
}

/// A parsed channel.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelObject {
    Discrete(ChannelSpec),
    Gauss(GaussChannel),
    GaussH(HGaussChannel),
}

/// A channel document: the validated channel plus its metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelFile {
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub channel: ChannelObject,
}

/// Line and column (1-based) of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let (line, col) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        Error::Parse { line, col, msg: e.message().to_string() }
    })
}

fn to_toml<T: Serialize>(doc: &T) -> Result<String> {
    toml::to_string(doc).map_err(|e| Error::Validation(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn matrix(rows: &Rows, what: &str) -> Result<Mat> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if n == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::Validation(format!("{what} must be a non-empty rectangular matrix")));
    }
    Ok(Mat::from_fn(n, m, |i, j| rows[i][j]))
}

fn rows_of(m: &Mat) -> Rows {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn kernel(rows: &Rows, input: &str, output: &str) -> Result<Kernel> {
    let m = rows.first().map_or(0, |r| r.len());
    Kernel::matrix(VarId::new(input, rows.len()), VarId::new(output, m), rows.clone())
}

fn kernel_rows(k: &Kernel) -> Rows {
    k.rows.chunks(k.out_size().max(1)).map(|r| r.to_vec()).collect()
}

/// Reads the `kind` of a document; its position is reported when unknown.
fn kind_of(text: &str, known: &[&str]) -> Result<String> {
    let k: KindField = parse_toml(text)?;
    if !known.contains(&k.kind.as_str()) {
        let offset = text.find(&format!("\"{}\"", k.kind)).unwrap_or(0);
        let (line, col) = line_col(text, offset);
        return Err(Error::Parse { line, col, msg: format!("unknown kind `{}`, expected one of {known:?}", k.kind) });
    }
    Ok(k.kind)
}

/// Parses and validates a channel document.
pub fn parse_channel_str(text: &str) -> Result<ChannelFile> {
    let (name, seed, channel) = match kind_of(text, &["discrete", "gauss", "gauss_h"])?.as_str() {
        "discrete" => {
            let DiscreteDoc { name, seed, form, kernels, outputs, joint, .. } = parse_toml(text)?;
            let ch = match form {
                DiscreteForm::Cascade | DiscreteForm::Marginals => {
                    let ks = kernels.ok_or_else(|| Error::Validation("`kernels` is required for this form".into()))?;
                    if ks.len() != 3 {
                        return Err(Error::Validation(format!("expected 3 kernels, found {}", ks.len())));
                    }
                    if form == DiscreteForm::Cascade {
                        build_degraded_joint(&kernel(&ks[0], "X", "Y1")?, &kernel(&ks[1], "Y1", "Y2")?, &kernel(&ks[2], "Y2", "Z")?)?
                    } else {
                        ChannelSpec::from_marginals(&kernel(&ks[0], "X", "Y1")?, &kernel(&ks[1], "X", "Y2")?, &kernel(&ks[2], "X", "Z")?)?
                    }
                }
                DiscreteForm::Joint => {
                    let cards = outputs.ok_or_else(|| Error::Validation("`outputs` is required for the joint form".into()))?;
                    let rows = joint.ok_or_else(|| Error::Validation("`joint` is required for the joint form".into()))?;
                    let outs = [0, 1, 2].map(|i| VarId::new(OUTPUT_NAMES[i], cards[i]));
                    ChannelSpec::from_joint(VarId::new("X", rows.len()), outs, rows.concat())?
                }
            };
            (name, seed, ChannelObject::Discrete(ch))
        }
        "gauss" => {
            let GaussDoc { name, seed, s, sigma1, sigma2, sigma_z, .. } = parse_toml(text)?;
            let ch = GaussChannel::new(matrix(&s, "s")?, matrix(&sigma1, "sigma1")?, matrix(&sigma2, "sigma2")?, matrix(&sigma_z, "sigma_z")?)?;
            (name, seed, ChannelObject::Gauss(ch))
        }
        _ => {
            let GaussHDoc { name, seed, h1, h2, hz, .. } = parse_toml(text)?;
            let ch = HGaussChannel::new(matrix(&h1, "h1")?, matrix(&h2, "h2")?, matrix(&hz, "hz")?)?;
            (name, seed, ChannelObject::GaussH(ch))
        }
    };
    Ok(ChannelFile { name, seed, channel })
}

/// Reads, parses and validates a channel file.
pub fn parse_channel_file(path: &Path) -> Result<ChannelFile> {
    parse_channel_str(&read(path)?)
}

/// Serializes a channel document; [`parse_channel_str`] reproduces it
/// exactly (floats are written in shortest round-trip form).
pub fn emit_channel(file: &ChannelFile) -> Result<String> {
    let (name, seed) = (file.name.clone(), file.seed);
    match &file.channel {
        ChannelObject::Discrete(ch) => {
            let mut doc =
                DiscreteDoc { kind: "discrete".into(), name, seed, form: DiscreteForm::Cascade, kernels: None, outputs: None, joint: None };
            match &ch.kernel {
                ChannelKernel::Cascade(ks) => doc.kernels = Some(ks.iter().map(kernel_rows).collect()),
                ChannelKernel::Joint(k) => {
                    doc.form = DiscreteForm::Joint;
                    doc.outputs = Some([0, 1, 2].map(|i| ch.outputs[i].card));
                    doc.joint = Some(kernel_rows(k));
                }
            }
            to_toml(&doc)
        }
        ChannelObject::Gauss(g) => to_toml(&GaussDoc {
            kind: "gauss".into(),
            name,
            seed,
            s: rows_of(&g.s),
            sigma1: rows_of(&g.sigma1),
            sigma2: rows_of(&g.sigma2),
            sigma_z: rows_of(&g.sigma_z),
        }),
        ChannelObject::GaussH(h) => {
            to_toml(&GaussHDoc { kind: "gauss_h".into(), name, seed, h1: rows_of(&h.h1), h2: rows_of(&h.h2), hz: rows_of(&h.hz) })
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayersDoc {
    #[allow(dead_code)]
    kind: String,
    p_u: Vec<f64>,
    p_x_given_u: Rows,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    #[allow(dead_code)]
    kind: String,
    vars: Vec<String>,
    cards: Vec<usize>,
    probs: Vec<f64>,
}

/// Parses an auxiliary document: `kind = "layers"` with `p_u` and
/// `p_x_given_u`, or `kind = "table"` with `vars`, `cards` and `probs`
/// (row-major, last variable fastest). A table over (U, X) is a degraded
/// auxiliary; one over (Q, U, V1, V2, X) a general one.
pub fn parse_aux_str(text: &str) -> Result<AuxJoint> {
    if kind_of(text, &["layers", "table"])? == "layers" {
        let d: LayersDoc = parse_toml(text)?;
        return AuxJoint::from_layers(&d.p_u, d.p_x_given_u);
    }
    let TableDoc { vars, cards, probs, .. } = parse_toml(text)?;
    if vars.len() != cards.len() {
        return Err(Error::Validation("`vars` and `cards` differ in length".into()));
    }
    let ids = vars.iter().zip(&cards).map(|(v, &c)| VarId::new(v.as_str(), c)).collect();
    let t = ProbTable::new(ids, probs)?;
    if vars.len() == 2 {
        AuxJoint::degraded(t)
    } else {
        AuxJoint::general(t)
    }
}

pub fn parse_aux_file(path: &Path) -> Result<AuxJoint> {
    parse_aux_str(&read(path)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitDoc {
    #[serde(default)]
    k: Option<Rows>,
    #[serde(default)]
    k0: Option<Rows>,
    #[serde(default)]
    k1: Option<Rows>,
    #[serde(default)]
    k2: Option<Rows>,
}

/// Parses a covariance split: either `k` (single-layer input covariance)
/// or all of `k0`, `k1`, `k2` (three-layer split).
pub fn parse_split_str(text: &str) -> Result<CovSplit> {
    match parse_toml::<SplitDoc>(text)? {
        SplitDoc { k: Some(k), k0: None, k1: None, k2: None } => CovSplit::single(matrix(&k, "k")?),
        SplitDoc { k: None, k0: Some(a), k1: Some(b), k2: Some(c) } => CovSplit::triple(matrix(&a, "k0")?, matrix(&b, "k1")?, matrix(&c, "k2")?),
        _ => Err(Error::Validation("a split gives either `k` or all of `k0`, `k1`, `k2`".into())),
    }
}

pub fn parse_split_file(path: &Path) -> Result<CovSplit> {
    parse_split_str(&read(path)?)
}

/// Significant digits of every float in tabular output.
pub const SIG_DIGITS: usize = 12;

/// Formats a float with [`SIG_DIGITS`] significant digits: positional
/// notation for decimal exponents in [−5, 12), scientific otherwise;
/// trailing zeros are trimmed and −0 prints as 0.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mant, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mant))
    }
}

/// A rectangular table of already-formatted cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    /// Appends a row, padding with empty cells to the header width.
    pub fn push<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        let mut row: Vec<String> = cells.into_iter().map(Into::into).collect();
        row.resize(self.header.len().max(row.len()), String::new());
        self.rows.push(row);
    }

    /// Writes the table as CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    /// Aligned columns for terminals.
    pub fn to_pretty(&self) -> String {
        let ncols = self.rows.iter().map(|r| r.len()).chain([self.header.len()]).max().unwrap_or(0);
        let mut widths = vec![0; ncols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (i, c) in r.iter().enumerate() {
                widths[i] = widths[i].max(c.chars().count());
            }
        }
        let line = |r: &Vec<String>| {
            let cells: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = widths[i])).collect();
            cells.join("  ").trim_end().to_string()
        };
        let mut s = line(&self.header);
        s.push('\n');
        s.push_str(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&line(r));
            s.push('\n');
        }
        s
    }
}

/// Column order for rate variables: the four rates first in their fixed
/// order, then any other variables sorted.
fn rate_columns<'a>(vars: impl IntoIterator<Item = &'a String>) -> Vec<String> {
    let mut cols: Vec<String> = RATES.iter().map(|r| r.to_string()).collect();
    let mut extra: Vec<String> = vars.into_iter().filter(|v| !RATES.contains(&v.as_str())).cloned().collect();
    extra.sort();
    extra.dedup();
    cols.extend(extra);
    cols
}

/// Table of a region: one `constraint` (≤) or `equality` row per row of
/// `sys` with its coefficients and right-hand side, then one `vertex` row
/// per vertex of `poly`. An empty polytope adds a single `EMPTY` row.
pub fn region_table(sys: Option<&IneqSystem<f64>>, poly: Option<&VPolytope>) -> Table {
    let vars: Vec<String> =
        sys.map(|s| s.vars.iter().cloned().collect()).into_iter().chain(poly.map(|p| p.vars.clone())).flatten().collect();
    let cols = rate_columns(&vars);
    let mut t = Table::new(std::iter::once("kind".to_string()).chain(cols.iter().cloned()).chain(["rhs".to_string()]));
    if let Some(sys) = sys {
        for row in &sys.ineqs {
            let kind = if row.rel == Relation::Eq { "equality" } else { "constraint" };
            let coeffs = cols.iter().map(|c| fmt_sig(row.coeff(c).to_f64().unwrap_or(f64::NAN)));
            t.push(std::iter::once(kind.to_string()).chain(coeffs).chain([fmt_sig(row.rhs)]));
        }
    }
    if let Some(p) = poly {
        if p.is_empty() {
            t.push(["EMPTY"]);
        }
        for i in 0..p.vertices.len() {
            let pt = p.point(i);
            let coords = cols.iter().map(|c| fmt_sig(pt.get(c).copied().unwrap_or(0.0)));
            t.push(std::iter::once("vertex".to_string()).chain(coords));
        }
    }
    t
}

/// Table of a sweep: one `sample` row per sample (index, hash of the
/// sampled auxiliary or split, vertex count, bound constants b1..bN), then
/// one `hull` row per generator of the down-closed hull.
pub fn sweep_table(res: &SweepResult) -> Table {
    let nb = res.samples.iter().map(|s| s.point.bounds.len()).max().unwrap_or(0);
    let header = ["kind", "index", "hash", "vertices"]
        .into_iter()
        .map(String::from)
        .chain(RATES.iter().map(|r| r.to_string()))
        .chain((1..=nb).map(|i| format!("b{i}")));
    let mut t = Table::new(header);
    for s in &res.samples {
        let head = ["sample".to_string(), s.index.to_string(), format!("{:016x}", s.hash), s.polytope.vertices.len().to_string()];
        let rates = std::iter::repeat(String::new()).take(RATES.len());
        t.push(head.into_iter().chain(rates).chain(s.point.values().into_iter().map(fmt_sig)));
    }
    for p in &res.hull {
        t.push(["hull", "", "", ""].into_iter().map(String::from).chain(p.iter().copied().map(fmt_sig)));
    }
    t
}
