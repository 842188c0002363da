//! Discrete-channel regions: the degraded inner bound in its final
//! (five-bound) and superposition (four per-message bounds) forms, the
//! degraded outer bound, the general Marton-coded inner bound with ten
//! bounds, the corollary specializations, the map to equivocation rates, and
//! seeded sweeps over auxiliary distributions.

use rayon::prelude::*;

use super::{rate_system, stable_hash, RegionPoint, SweepResult, SweepSample};
use crate::error::{Error, Result};
use crate::fm::lp::prune_redundant;
use crate::fm::{apply_rate_transfer, fm_eliminate, vertices, IneqSystem, LinIneq, Transfer};
use crate::info::{ChannelSpec, Kernel, ProbTable, VarId};
use crate::rng::{random_pmf, random_stochastic, stream};

/// Independence residual accepted when checking an auxiliary factorization.
pub const AUX_TOL: f64 = 1e-10;
/// Tolerance of the LP redundancy test used by corollary specialization.
pub const PRUNE_TOL: f64 = 1e-9;

/// Rows of the degraded inner bound, in order.
pub const INNER_ROWS: [&[&str]; 5] = [
    &["Rs2"],
    &["Rs1", "Rs2"],
    &["Rp2", "Rs2"],
    &["Rs1", "Rp2", "Rs2"],
    &["Rp1", "Rs1", "Rp2", "Rs2"],
];
/// Index in [`INNER_ROWS`] of the bound on Rs1 + Rp2 + Rs2, the only row
/// absent from the outer bound.
pub const EXTRA_ROW: usize = 3;
/// Rows of the superposition form: one bound per message.
pub const ORIGINAL_ROWS: [&[&str]; 4] = [&["Rp2"], &["Rs2"], &["Rp1"], &["Rs1"]];
/// Rows of the general inner bound, in order.
pub const GENERAL_ROWS: [&[&str]; 10] = [
    &["Rs1"],
    &["Rs2"],
    &["Rs1", "Rs2"],
    &["Rp1", "Rs1"],
    &["Rp2", "Rs2"],
    &["Rp1", "Rs1", "Rs2"],
    &["Rp1", "Rs1", "Rs2"],
    &["Rs1", "Rp2", "Rs2"],
    &["Rs1", "Rp2", "Rs2"],
    &["Rp1", "Rs1", "Rp2", "Rs2"],
];

/// Which factorization an auxiliary joint follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxKind {
    /// (U, X): the channel acts on X; U → X → (Y1, Y2, Z).
    Degraded,
    /// (Q, U, V1, V2, X) with p(q,u) p(v1,v2,x|u).
    General,
}

/// Auxiliary random variables jointly distributed with the channel input.
/// The input is the variable named like the channel input (`X`).
#[derive(Clone, Debug, PartialEq)]
pub struct AuxJoint {
    table: ProbTable,
    kind: AuxKind,
}

fn require_vars(t: &ProbTable, names: &[&str]) -> Result<()> {
    let mut have: Vec<&str> = t.names();
    have.sort_unstable();
    let mut want = names.to_vec();
    want.sort_unstable();
    if have != want {
        return Err(Error::InconsistentAux(format!("expected variables {want:?}, found {have:?}")));
    }
    Ok(())
}

impl AuxJoint {
    /// A joint over exactly (U, X).
    pub fn degraded(table: ProbTable) -> Result<Self> {
        crate::info::validate_table(&table)?;
        require_vars(&table, &["U", "X"])?;
        Ok(AuxJoint { table, kind: AuxKind::Degraded })
    }

    /// p(u) and the rows of p(x|u).
    pub fn from_layers(p_u: &[f64], p_x_given_u: Vec<Vec<f64>>) -> Result<Self> {
        let nx = p_x_given_u.first().map_or(0, |r| r.len());
        let u = ProbTable::single(VarId::new("U", p_u.len()), p_u.to_vec())?;
        let k = Kernel::matrix(VarId::new("U", p_u.len()), VarId::new("X", nx), p_x_given_u)?;
        Self::degraded(u.extend(&k)?)
    }

    /// A joint over exactly (Q, U, V1, V2, X) in which Q reaches (V1, V2, X)
    /// only through U.
    pub fn general(table: ProbTable) -> Result<Self> {
        crate::info::validate_table(&table)?;
        require_vars(&table, &["Q", "U", "V1", "V2", "X"])?;
        let r = table.mutual_information(&["Q"], &["V1", "V2", "X"], &["U"])?;
        if r > AUX_TOL {
            return Err(Error::InconsistentAux(format!("I(Q;V1,V2,X|U) = {r:e} exceeds {AUX_TOL:e}")));
        }
        Ok(AuxJoint { table, kind: AuxKind::General })
    }

    pub fn table(&self) -> &ProbTable {
        &self.table
    }

    pub fn kind(&self) -> AuxKind {
        self.kind
    }

    /// The general auxiliary obtained from a degraded one by taking Q
    /// constant, V2 = U and V1 = X.
    pub fn embed_general(&self) -> Result<AuxJoint> {
        if self.kind != AuxKind::Degraded {
            return Err(Error::InconsistentAux("only (U,X) joints embed".into()));
        }
        let u = self.table.var("U")?.clone();
        let x = self.table.var("X")?.clone();
        let t = ProbTable::constant("Q")
            .product(&self.table)?
            .extend(&Kernel::identity(u, VarId::new("V2", 0))?)?
            .extend(&Kernel::identity(x, VarId::new("V1", 0))?)?;
        AuxJoint::general(t)
    }
}

/// Output names of a channel, in the roles (Y1, Y2, Z).
fn roles(ch: &ChannelSpec) -> [&str; 3] {
    [&ch.outputs[0].name, &ch.outputs[1].name, &ch.outputs[2].name]
}

fn check_input(aux: &AuxJoint, ch: &ChannelSpec) -> Result<()> {
    let x = aux.table.var("X")?;
    if ch.input.name != "X" || ch.input.card != x.card {
        return Err(Error::InconsistentAux(format!(
            "auxiliary input X has {} symbols, channel input `{}` has {}",
            x.card, ch.input.name, ch.input.card
        )));
    }
    Ok(())
}

fn compose(aux: &AuxJoint, ch: &ChannelSpec) -> Result<ProbTable> {
    check_input(aux, ch)?;
    ch.compose(&aux.table)
}

/// I(U;Y) and I(X;Y) for one output Y, from the two-variable tables
/// p(u,y) and p(x,y): the three-variable joint is never formed, so fine
/// output alphabets stay cheap.
struct PairTables {
    u_y: f64,
    x_y: f64,
}

impl PairTables {
    fn new(ux: &ProbTable, ch: &ChannelSpec, j: usize) -> Result<Self> {
        let k = ch.output_kernel(j)?;
        let [u, x] = [&ux.vars()[0], &ux.vars()[1]];
        let ny = k.out_size();
        let y = VarId::new("Y", ny);
        let mut p_uy = vec![0.0; u.card * ny];
        let mut p_xy = vec![0.0; x.card * ny];
        for iu in 0..u.card {
            for ix in 0..x.card {
                let p = ux.probs()[iu * x.card + ix];
                if p == 0.0 {
                    continue;
                }
                for (iy, &q) in k.row(ix).iter().enumerate() {
                    p_uy[iu * ny + iy] += p * q;
                    p_xy[ix * ny + iy] += p * q;
                }
            }
        }
        let mi = |a: &VarId, probs: Vec<f64>| {
            ProbTable::from_parts(vec![a.clone(), y.clone()], probs).mutual_information(&[&a.name], &["Y"], &[])
        };
        Ok(PairTables { u_y: mi(u, p_uy)?, x_y: mi(x, p_xy)? })
    }
}

fn require_degraded(aux: &AuxJoint, ch: &ChannelSpec) -> Result<()> {
    if aux.kind != AuxKind::Degraded {
        return Err(Error::InconsistentAux("expected a (U,X) auxiliary joint".into()));
    }
    if !ch.is_degraded()? {
        return Err(Error::NotDegraded);
    }
    Ok(())
}

/// The mutual informations entering the degraded bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegradedTerms {
    /// I(U;Y2)
    pub u_y2: f64,
    /// I(U;Z)
    pub u_z: f64,
    /// I(X;Y1|U)
    pub x_y1_u: f64,
    /// I(X;Z)
    pub x_z: f64,
    /// I(X;Z|U)
    pub x_z_u: f64,
}

impl DegradedTerms {
    /// Computes the terms on the joint of `aux` with the channel.
    pub fn compute(aux: &AuxJoint, ch: &ChannelSpec) -> Result<Self> {
        require_degraded(aux, ch)?;
        check_input(aux, ch)?;
        let ux = aux.table.marginal(&["U", "X"])?;
        let (y1, y2, z) = (PairTables::new(&ux, ch, 0)?, PairTables::new(&ux, ch, 1)?, PairTables::new(&ux, ch, 2)?);
        // U → X → Y gives I(X;Y|U) = I(X;Y) − I(U;Y).
        Ok(DegradedTerms {
            u_y2: y2.u_y,
            u_z: z.u_y,
            x_y1_u: (y1.x_y - y1.u_y).max(0.0),
            x_z: z.x_y,
            x_z_u: (z.x_y - z.u_y).max(0.0),
        })
    }

    /// The five inner-bound constants, in [`INNER_ROWS`] order.
    pub fn inner(&self) -> [f64; 5] {
        let t = self;
        [
            t.u_y2 - t.u_z,
            t.u_y2 + t.x_y1_u - t.x_z,
            t.u_y2,
            t.u_y2 + t.x_y1_u - t.x_z_u,
            t.u_y2 + t.x_y1_u,
        ]
    }

    /// The four per-message constants, in [`ORIGINAL_ROWS`] order.
    pub fn original(&self) -> [f64; 4] {
        let t = self;
        [t.u_z, t.u_y2 - t.u_z, t.x_z_u, t.x_y1_u - t.x_z_u]
    }
}

/// Inner-bound constants for a (U,X) auxiliary on a degraded channel.
pub fn degraded_inner_point(aux: &AuxJoint, ch: &ChannelSpec) -> Result<RegionPoint> {
    Ok(RegionPoint::from_rows(&INNER_ROWS, &DegradedTerms::compute(aux, ch)?.inner()))
}

/// Outer-bound constants: the inner constants without the Rs1 + Rp2 + Rs2 row.
pub fn degraded_outer_point(aux: &AuxJoint, ch: &ChannelSpec) -> Result<RegionPoint> {
    let mut p = degraded_inner_point(aux, ch)?;
    p.bounds.remove(EXTRA_ROW);
    Ok(p)
}

/// The five-bound achievable region of a degraded channel for one (U,X).
pub fn eval_degraded_inner(aux: &AuxJoint, ch: &ChannelSpec) -> Result<IneqSystem<f64>> {
    Ok(degraded_inner_point(aux, ch)?.system())
}

/// The superposition-coding region: one bound per message, with public
/// rates riding on the randomness that protects the confidential ones.
pub fn eval_original_inner(aux: &AuxJoint, ch: &ChannelSpec) -> Result<IneqSystem<f64>> {
    let c = DegradedTerms::compute(aux, ch)?.original();
    Ok(RegionPoint::from_rows(&ORIGINAL_ROWS, &c).system())
}

/// The four-bound outer region of a degraded channel for one (U,X).
pub fn eval_degraded_outer(aux: &AuxJoint, ch: &ChannelSpec) -> Result<IneqSystem<f64>> {
    Ok(degraded_outer_point(aux, ch)?.system())
}

/// The rate moves available on a degraded channel: each user's
/// confidential rate may be declared public, the second user's confidential
/// rate may be handed to either rate of the first user, and the second
/// user's public rate to the first user's public rate.
pub fn degraded_transfers() -> Vec<Transfer> {
    vec![
        Transfer::new("Rs1", "Rp1", "t_s1_p1"),
        Transfer::new("Rs2", "Rp2", "t_s2_p2"),
        Transfer::new("Rs2", "Rp1", "t_s2_p1"),
        Transfer::new("Rs2", "Rs1", "t_s2_s1"),
        Transfer::new("Rp2", "Rp1", "t_p2_p1"),
    ]
}

/// Applies [`degraded_transfers`] to a region and eliminates the slacks.
pub fn transferred_region(sys: &IneqSystem<f64>) -> Result<IneqSystem<f64>> {
    let ts = degraded_transfers();
    let mut out = apply_rate_transfer(sys, &ts)?;
    for t in &ts {
        out = fm_eliminate(&out, &t.slack)?;
    }
    Ok(out)
}

/// The mutual informations entering the general bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
struct GeneralTerms {
    u_y_q: [f64; 2],
    u_y: [f64; 2],
    v1_y1_u: f64,
    v2_y2_u: f64,
    v1_v2_u: f64,
    uv1_z_q: f64,
    uv2_z_q: f64,
    uv1v2_z_q: f64,
    v1_z_u: f64,
    v2_z_u: f64,
    v1v2_z_u: f64,
}

/// The ten constants of the general inner bound; each minimum over the two
/// legitimate receivers is taken numerically.
pub fn general_inner_point(aux: &AuxJoint, ch: &ChannelSpec) -> Result<RegionPoint> {
    if aux.kind != AuxKind::General {
        return Err(Error::InconsistentAux("expected a (Q,U,V1,V2,X) auxiliary joint".into()));
    }
    let j = compose(aux, ch)?;
    let [y1, y2, z] = roles(ch);
    let mi = |a: &[&str], b: &[&str], c: &[&str]| j.mutual_information(a, b, c);
    let t = GeneralTerms {
        u_y_q: [mi(&["U"], &[y1], &["Q"])?, mi(&["U"], &[y2], &["Q"])?],
        u_y: [mi(&["U"], &[y1], &[])?, mi(&["U"], &[y2], &[])?],
        v1_y1_u: mi(&["V1"], &[y1], &["U"])?,
        v2_y2_u: mi(&["V2"], &[y2], &["U"])?,
        v1_v2_u: mi(&["V1"], &["V2"], &["U"])?,
        uv1_z_q: mi(&["U", "V1"], &[z], &["Q"])?,
        uv2_z_q: mi(&["U", "V2"], &[z], &["Q"])?,
        uv1v2_z_q: mi(&["U", "V1", "V2"], &[z], &["Q"])?,
        v1_z_u: mi(&["V1"], &[z], &["U"])?,
        v2_z_u: mi(&["V2"], &[z], &["U"])?,
        v1v2_z_u: mi(&["V1", "V2"], &[z], &["U"])?,
    };
    let mq = t.u_y_q[0].min(t.u_y_q[1]);
    let m = t.u_y[0].min(t.u_y[1]);
    let (a1, a2, c12) = (t.v1_y1_u, t.v2_y2_u, t.v1_v2_u);
    let values = [
        mq + a1 - t.uv1_z_q,
        mq + a2 - t.uv2_z_q,
        mq + a1 + a2 - c12 - t.uv1v2_z_q,
        m + a1,
        m + a2,
        m + a1 + a2 - t.v2_z_u,
        m + 2.0 * a1 + a2 - c12 - t.v1v2_z_u,
        m + a1 + a2 - t.v1_z_u,
        m + a1 + 2.0 * a2 - c12 - t.v1v2_z_u,
        m + a1 + a2 - c12,
    ];
    Ok(RegionPoint::from_rows(&GENERAL_ROWS, &values))
}

/// The ten-bound achievable region of an arbitrary channel for one
/// (Q,U,V1,V2,X).
pub fn eval_general_inner(aux: &AuxJoint, ch: &ChannelSpec) -> Result<IneqSystem<f64>> {
    Ok(general_inner_point(aux, ch)?.system())
}

/// Sub-regions obtained by silencing some messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corollary {
    /// No confidential message for the first user (Rs1 = 0).
    NoConfidential1,
    /// No public message for the second user (Rp2 = 0).
    NoPublic2,
    /// Confidential messages only (Rp1 = Rp2 = 0).
    SecrecyOnly,
    /// Confidential messages only, in the per-user form
    /// Rs2 ≤ I(U;Y2) − I(U;Z), Rs1 ≤ I(X;Y1|U) − I(X;Z|U).
    SecrecyOnlyAlt,
}

impl std::str::FromStr for Corollary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cor1" | "cor4" => Ok(Corollary::NoConfidential1),
            "cor2" | "cor5" => Ok(Corollary::NoPublic2),
            "cor3" | "cor6" => Ok(Corollary::SecrecyOnly),
            "cor3_alt" | "cor6_alt" => Ok(Corollary::SecrecyOnlyAlt),
            other => Err(Error::UnknownCorollary(other.to_string())),
        }
    }
}

impl Corollary {
    /// The rates forced to zero.
    pub fn zeroed(self) -> &'static [&'static str] {
        match self {
            Corollary::NoConfidential1 => &["Rs1"],
            Corollary::NoPublic2 => &["Rp2"],
            Corollary::SecrecyOnly | Corollary::SecrecyOnlyAlt => &["Rp1", "Rp2"],
        }
    }
}

/// Smallest rhs among rows whose left-hand side is exactly the unit sum of `rates`.
fn row_value(sys: &IneqSystem<f64>, rates: &[&str]) -> Option<f64> {
    let want = LinIneq::<f64>::le(rates, 0.0).coeffs;
    sys.ineqs.iter().filter(|r| r.coeffs == want).map(|r| r.rhs).reduce(f64::min)
}

/// Sets the corollary's rates to zero in a five- or four-bound degraded
/// region and removes the redundant rows. The per-user secrecy form reads
/// the Rs2 and Rs1 + Rs2 bounds: the gap between them is
/// I(X;Y1|U) − I(X;Z|U) whenever U → X → Z.
pub fn specialize_corollary(sys: &IneqSystem<f64>, which: Corollary) -> Result<IneqSystem<f64>> {
    let mut out = sys.clone();
    for r in which.zeroed() {
        out = out.set_zero(r);
    }
    if which == Corollary::SecrecyOnlyAlt {
        let missing = || Error::Validation("region lacks the Rs2 or Rs1 + Rs2 bound".into());
        let s2 = row_value(&out, &["Rs2"]).ok_or_else(missing)?;
        let s12 = row_value(&out, &["Rs1", "Rs2"]).ok_or_else(missing)?;
        let mut alt = IneqSystem::default();
        for v in &out.vars {
            alt.declare_var(v);
        }
        alt.push(LinIneq::le(&["Rs2"], s2));
        alt.push(LinIneq::le(&["Rs1"], s12 - s2));
        return Ok(alt.with_nonnegativity());
    }
    Ok(prune_redundant(&out, PRUNE_TOL))
}

/// Maps (Rp1, Rs1, Rp2, Rs2) to (R1, Re1, R2, Re2): total rate and
/// equivocation rate per user.
pub fn to_equivocation(p: [f64; 4]) -> Result<[f64; 4]> {
    if let Some(&r) = p.iter().find(|&&r| !(r >= 0.0)) {
        return Err(Error::NegativeRate(r));
    }
    let [rp1, rs1, rp2, rs2] = p;
    Ok([rp1 + rs1, rs1, rp2 + rs2, rs2])
}

/// Which region a sweep traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepRegion {
    DegradedInner,
    DegradedOuter,
    General,
}

/// Sampler configuration of a discrete sweep. Sample 0, 1 and 2 are the
/// corners U = X, U independent of X and U constant (X uniform); later
/// samples draw Dirichlet(1) rows from per-index streams of `seed`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub budget: u64,
    pub seed: u64,
    pub region: SweepRegion,
    /// |U|; defaults to |X| + 3.
    pub u_card: Option<usize>,
    /// |Q|; defaults to 2.
    pub q_card: Option<usize>,
    /// |V1| = |V2|; defaults to |X| + 1.
    pub v_card: Option<usize>,
}

impl SweepConfig {
    pub fn new(budget: u64, seed: u64, region: SweepRegion) -> Self {
        SweepConfig { budget, seed, region, u_card: None, q_card: None, v_card: None }
    }
}

const CORNERS: u64 = 3;

/// The (U,X) auxiliary of sample `index`.
pub fn sample_degraded_aux(nx: usize, nu: usize, seed: u64, index: u64) -> Result<AuxJoint> {
    let uniform_x = vec![1.0 / nx as f64; nx];
    match index {
        0 => {
            let rows = (0..nx).map(|u| (0..nx).map(|x| if u == x { 1.0 } else { 0.0 }).collect()).collect();
            AuxJoint::from_layers(&uniform_x, rows)
        }
        1 => AuxJoint::from_layers(&vec![1.0 / nu as f64; nu], vec![uniform_x; nu]),
        2 => AuxJoint::from_layers(&[1.0], vec![uniform_x]),
        _ => random_degraded_aux(nx, nu, seed, index),
    }
}

/// The (Q,U,V1,V2,X) auxiliary of sample `index`; the corners embed the
/// degraded corners.
pub fn sample_general_aux(nx: usize, nq: usize, nu: usize, nv: usize, seed: u64, index: u64) -> Result<AuxJoint> {
    if index < CORNERS {
        return sample_degraded_aux(nx, nu, seed, index)?.embed_general();
    }
    let mut rng = stream(seed, index);
    let qu = ProbTable::new(vec![VarId::new("Q", nq), VarId::new("U", nu)], random_pmf(&mut rng, nq * nu))?;
    let rows = random_stochastic(&mut rng, nu, nv * nv * nx).concat();
    let k = Kernel::new(vec![VarId::new("U", nu)], vec![VarId::new("V1", nv), VarId::new("V2", nv), VarId::new("X", nx)], rows)?;
    AuxJoint::general(qu.extend(&k)?)
}

/// A random degraded cascade with alphabet sizes drawn from 2..=max_card,
/// from stream (seed, index): used by property suites and demos.
pub fn sample_degraded_channel(seed: u64, index: u64, max_card: usize) -> Result<ChannelSpec> {
    use rand::RngExt;
    let mut rng = stream(seed, index);
    let mut card = || rng.random_range(2..=max_card.max(2));
    let (nx, n1, n2, nz) = (card(), card(), card(), card());
    let mut rng = stream(seed ^ 0xC4A1, index);
    let k = |rng: &mut crate::rng::SampleRng, a: &str, na: usize, b: &str, nb: usize| {
        Kernel::matrix(VarId::new(a, na), VarId::new(b, nb), random_stochastic(rng, na, nb))
    };
    let k1 = k(&mut rng, "X", nx, "Y1", n1)?;
    let k2 = k(&mut rng, "Y1", n1, "Y2", n2)?;
    let k3 = k(&mut rng, "Y2", n2, "Z", nz)?;
    crate::info::build_degraded_joint(&k1, &k2, &k3)
}

/// A random (U,X) auxiliary with |U| = nu from stream (seed, index).
pub fn random_degraded_aux(nx: usize, nu: usize, seed: u64, index: u64) -> Result<AuxJoint> {
    let mut rng = stream(seed, index);
    let p_u = random_pmf(&mut rng, nu);
    AuxJoint::from_layers(&p_u, random_stochastic(&mut rng, nu, nx))
}

/// Seeded sweep of a discrete region over auxiliary distributions. Samples
/// are evaluated in parallel from independent streams; the result does not
/// depend on scheduling, and a larger budget extends the sample sequence.
pub fn sweep_inner_region(ch: &ChannelSpec, cfg: &SweepConfig) -> Result<SweepResult> {
    if cfg.budget == 0 {
        return Err(Error::BudgetZero);
    }
    let nx = ch.input.card;
    let nu = cfg.u_card.unwrap_or(nx + 3);
    let nq = cfg.q_card.unwrap_or(2);
    let nv = cfg.v_card.unwrap_or(nx + 1);
    if cfg.region != SweepRegion::General && !ch.is_degraded()? {
        return Err(Error::NotDegraded);
    }
    let samples = (0..cfg.budget)
        .into_par_iter()
        .map(|i| {
            let (aux, point) = match cfg.region {
                SweepRegion::General => {
                    let aux = sample_general_aux(nx, nq, nu, nv, cfg.seed, i)?;
                    let p = general_inner_point(&aux, ch)?;
                    (aux, p)
                }
                r => {
                    let aux = sample_degraded_aux(nx, nu, cfg.seed, i)?;
                    let p = if r == SweepRegion::DegradedInner {
                        degraded_inner_point(&aux, ch)?
                    } else {
                        degraded_outer_point(&aux, ch)?
                    };
                    (aux, p)
                }
            };
            let polytope = vertices(&point.system())?;
            Ok(SweepSample { index: i, hash: stable_hash(aux.table().probs()), point, polytope })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_samples(samples))
}

/// The rate system for explicit constants in [`INNER_ROWS`] order.
pub fn inner_system_from(values: &[f64; 5]) -> IneqSystem<f64> {
    rate_system(INNER_ROWS.iter().copied().zip(values.iter().copied()))
}
