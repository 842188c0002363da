//! Command implementations: load inputs, call the library, render tables,
//! and classify failures into property violations and input errors.

use std::path::Path;

use wiretap_core::fisher::{debruijn_suite, lemma_suite_check, random_mixture, sufficiency_evidence_scalar, DEBRUIJN_GAUSS_TOL, EVIDENCE_SLACK, LEMMA_TOL};
use wiretap_core::fm::appendix::general_inner_chain;
use wiretap_core::fm::{vertices, IneqSystem};
use wiretap_core::io::{fmt_sig, parse_aux_file, parse_channel_file, parse_split_file, region_table, sweep_table, ChannelObject, Table};
use wiretap_core::regions::discrete::{
    eval_degraded_inner, eval_degraded_outer, eval_general_inner, specialize_corollary, sweep_inner_region, AuxJoint, AuxKind, Corollary,
    SweepConfig, SweepRegion,
};
use wiretap_core::regions::gaussian::{
    check_degraded_h, check_degraded_order, dpc_identity_check, eval_gauss_inner, eval_gauss_outer, eval_general_gauss, sample_triple_split,
    sweep_covariances, sweep_scalar_grid, CapMode, GaussChannel, GaussRegion, GaussSweepConfig, MartonOrder,
};
use wiretap_core::{ChannelSpec, Error};

use crate::{
    Cmd, DebruijnArgs, DegradedCheck, DiscreteEval, DiscreteSweep, DpcCheck, EvidenceArgs, FisherCmd, FmCmd, Format, GaussCmd, GaussEval,
    GaussSweep, LemmaArgs, OutputArgs, RegionCmd, RegionKind, SamplingArgs,
};

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// A checked property does not hold; the message names it.
    Violation(String),
    /// Bad flags, unreadable or invalid input files.
    Input(String),
}

type Outcome = std::result::Result<(), Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ScriptStepMismatch { .. } => Failure::Violation(format!("elimination chain replay: {e}")),
            Error::NoRoot { .. } => Failure::Violation(format!("interpolation bracket: {e}")),
            Error::StepTooLarge { .. } => Failure::Violation(format!("de Bruijn second-order convergence: {e}")),
            Error::QuadratureNonConvergent { .. } => Failure::Violation(format!("quadrature convergence: {e}")),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// Validated run parameters shared by the seeded commands.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub budget: u64,
    pub tol: f64,
}

impl RunConfig {
    fn from_args(a: &SamplingArgs, budget: u64, tol: f64) -> Result<Self, Failure> {
        let cfg = RunConfig { seed: a.seed, budget: a.budget.unwrap_or(budget), tol: a.tol.unwrap_or(tol) };
        if cfg.budget == 0 {
            return Err(Failure::Input("--budget must be at least 1".into()));
        }
        if !(cfg.tol > 0.0) {
            return Err(Failure::Input(format!("--tol must be positive, got {}", cfg.tol)));
        }
        Ok(cfg)
    }
}

fn emit(table: &Table, out: &OutputArgs) -> Outcome {
    let text = match out.format {
        Format::Csv => table.to_csv()?,
        Format::Pretty => table.to_pretty(),
    };
    match &out.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn discrete_channel(path: &Path) -> Result<ChannelSpec, Failure> {
    match parse_channel_file(path)?.channel {
        ChannelObject::Discrete(ch) => Ok(ch),
        _ => Err(Failure::Input(format!("{}: expected a discrete channel", path.display()))),
    }
}

fn gauss_channel(path: &Path) -> Result<GaussChannel, Failure> {
    match parse_channel_file(path)?.channel {
        ChannelObject::Gauss(ch) => Ok(ch),
        _ => Err(Failure::Input(format!("{}: expected a gauss channel", path.display()))),
    }
}

fn corollary(sys: IneqSystem<f64>, which: &Option<String>) -> Result<IneqSystem<f64>, Failure> {
    match which {
        Some(c) => Ok(specialize_corollary(&sys, c.parse::<Corollary>()?)?),
        None => Ok(sys),
    }
}

fn region_output(sys: &IneqSystem<f64>, out: &OutputArgs) -> Outcome {
    let poly = vertices(sys)?;
    emit(&region_table(Some(sys), Some(&poly)), out)
}

pub fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Region(c) => region(c),
        Cmd::Fm(FmCmd::VerifyAppendix(out)) => verify_appendix(&out),
        Cmd::Gauss(c) => gauss(c),
        Cmd::Fisher(c) => fisher_cmd(c),
    }
}

fn region(cmd: RegionCmd) -> Outcome {
    let eval = |a: &DiscreteEval, kind: RegionKind| -> Outcome {
        let ch = discrete_channel(&a.channel)?;
        let aux: AuxJoint = parse_aux_file(&a.aux)?;
        let sys = match kind {
            RegionKind::General => {
                let aux = if aux.kind() == AuxKind::Degraded { aux.embed_general()? } else { aux };
                eval_general_inner(&aux, &ch)?
            }
            _ if aux.kind() != AuxKind::Degraded => return Err(Failure::Input("degraded regions need a (U, X) auxiliary".into())),
            RegionKind::Inner => eval_degraded_inner(&aux, &ch)?,
            RegionKind::Outer => eval_degraded_outer(&aux, &ch)?,
        };
        region_output(&corollary(sys, &a.corollary)?, &a.output)
    };
    match cmd {
        RegionCmd::EvalInner(a) => eval(&a, RegionKind::Inner),
        RegionCmd::EvalOuter(a) => eval(&a, RegionKind::Outer),
        RegionCmd::EvalGeneral(a) => eval(&a, RegionKind::General),
        RegionCmd::Sweep(a) => discrete_sweep(&a),
    }
}

fn discrete_sweep(a: &DiscreteSweep) -> Outcome {
    let cfg = RunConfig::from_args(&a.sampling, 200, 1e-9)?;
    let ch = discrete_channel(&a.channel)?;
    let region = match a.region {
        RegionKind::Inner => SweepRegion::DegradedInner,
        RegionKind::Outer => SweepRegion::DegradedOuter,
        RegionKind::General => SweepRegion::General,
    };
    let res = sweep_inner_region(&ch, &SweepConfig::new(cfg.budget, cfg.seed, region))?;
    emit(&sweep_table(&res), &a.output)
}

fn verify_appendix(out: &OutputArgs) -> Outcome {
    let report = general_inner_chain()?.verify()?;
    let mut t = Table::new(["step", "label", "rows", "note"]);
    for s in &report.steps {
        t.push([s.index.to_string(), s.label.clone(), s.rows.to_string(), s.note.clone()]);
    }
    t.push([
        "final".to_string(),
        "target".to_string(),
        report.final_rows.to_string(),
        format!("{} checkpoints matched; region identical to the general inner bounds", report.checkpoints),
    ]);
    emit(&t, out)
}

fn gauss(cmd: GaussCmd) -> Outcome {
    match cmd {
        GaussCmd::Eval(a) => gauss_eval(&a),
        GaussCmd::Sweep(a) => gauss_sweep(&a),
        GaussCmd::DpcCheck(a) => dpc_check(&a),
        GaussCmd::DegradedCheck(a) => degraded_check(&a),
    }
}

fn gauss_eval(a: &GaussEval) -> Outcome {
    let order = a.order.parse::<MartonOrder>()?;
    let ch = gauss_channel(&a.channel)?;
    let split = parse_split_file(&a.split)?;
    let sys = match a.region {
        RegionKind::Inner => eval_gauss_inner(&split, &ch)?,
        RegionKind::Outer => eval_gauss_outer(&split, &ch)?,
        RegionKind::General => eval_general_gauss(&split, &ch, order)?,
    };
    region_output(&corollary(sys, &a.corollary)?, &a.output)
}

fn gauss_sweep(a: &GaussSweep) -> Outcome {
    let run = RunConfig::from_args(&a.sampling, 200, 1e-9)?;
    let ch = gauss_channel(&a.channel)?;
    let region = match a.region {
        RegionKind::Inner => GaussRegion::Inner,
        RegionKind::Outer => GaussRegion::Outer,
        RegionKind::General => GaussRegion::General,
    };
    let mode = a.trace.map_or(CapMode::FixedS, CapMode::TraceP);
    let res = sweep_covariances(&ch, &GaussSweepConfig { budget: run.budget, seed: run.seed, mode, region })?;
    emit(&sweep_table(&res), &a.output)
}

fn dpc_check(a: &DpcCheck) -> Outcome {
    let run = RunConfig::from_args(&a.sampling, 100, 1e-9)?;
    let ch = gauss_channel(&a.channel)?;
    let splits = match &a.split {
        Some(p) => vec![(0, parse_split_file(p)?)],
        None => (0..run.budget).map(|i| Ok((i, sample_triple_split(&ch.s, run.seed, i)?))).collect::<Result<Vec<_>, Error>>()?,
    };
    let mut t = Table::new(["index", "lhs", "rhs", "residual", "pass"]);
    let mut worst = 0.0_f64;
    for (i, split) in &splits {
        let c = dpc_identity_check(split, &ch)?;
        worst = worst.max(c.residual);
        t.push([i.to_string(), fmt_sig(c.lhs), fmt_sig(c.rhs), fmt_sig(c.residual), (c.residual <= run.tol).to_string()]);
    }
    emit(&t, &a.output)?;
    if worst > run.tol {
        return Err(Failure::Violation(format!("dirty-paper identity: residual {worst:e} exceeds {:e}", run.tol)));
    }
    Ok(())
}

fn degraded_check(a: &DegradedCheck) -> Outcome {
    let mut t = Table::new(["property", "value"]);
    let degraded = match parse_channel_file(&a.channel)?.channel {
        ChannelObject::Discrete(ch) => {
            let d = ch.is_degraded()?;
            t.push(["markov_chain".to_string(), d.to_string()]);
            d
        }
        ChannelObject::Gauss(ch) => {
            let d = check_degraded_order(&ch);
            t.push(["noise_order".to_string(), d.to_string()]);
            d
        }
        ChannelObject::GaussH(ch) => {
            let g = check_degraded_h(&ch);
            t.push(["gain_degraded".to_string(), g.degraded.to_string()]);
            t.push(["residual21".to_string(), fmt_sig(g.residual21)]);
            t.push(["residual_z2".to_string(), fmt_sig(g.residual_z2)]);
            g.degraded
        }
    };
    emit(&t, &a.output)?;
    if !degraded {
        return Err(Failure::Violation("degradedness: the channel is not degraded".into()));
    }
    Ok(())
}

fn fisher_cmd(cmd: FisherCmd) -> Outcome {
    match cmd {
        FisherCmd::Debruijn(a) => debruijn(&a),
        FisherCmd::Lemmas(a) => lemmas(&a),
        FisherCmd::Evidence(a) => evidence(&a),
    }
}

fn debruijn(a: &DebruijnArgs) -> Outcome {
    let run = RunConfig::from_args(&a.sampling, 200, DEBRUIJN_GAUSS_TOL)?;
    if !(a.mixture_tol > 0.0 && a.step > 0.0) {
        return Err(Failure::Input("--mixture-tol and --step must be positive".into()));
    }
    let rows = debruijn_suite(run.seed, run.budget, a.step)?;
    let mut t = Table::new(["family", "instance", "dim", "residual", "ratio", "step", "pass"]);
    let mut failed = Vec::new();
    for r in &rows {
        let tol = if r.family == "gaussian" { run.tol } else { a.mixture_tol };
        let pass = r.residual <= tol;
        if !pass {
            failed.push(format!("{} #{}", r.family, r.instance));
        }
        t.push([r.family.to_string(), r.instance.to_string(), r.dim.to_string(), fmt_sig(r.residual), fmt_sig(r.ratio), fmt_sig(r.step), pass.to_string()]);
    }
    emit(&t, &a.output)?;
    if !failed.is_empty() {
        return Err(Failure::Violation(format!("de Bruijn identity: residual above tolerance on {}", failed.join(", "))));
    }
    Ok(())
}

fn lemmas(a: &LemmaArgs) -> Outcome {
    let run = RunConfig::from_args(&a.sampling, 200, LEMMA_TOL)?;
    let report = lemma_suite_check(run.seed, run.budget)?;
    let mut t = Table::new(["lemma", "instance", "family", "dim", "min_slack"]);
    for e in &report.entries {
        t.push([e.lemma.id().to_string(), e.instance.to_string(), e.family.to_string(), e.dim.to_string(), fmt_sig(e.min_slack)]);
    }
    emit(&t, &a.output)?;
    let violated: Vec<String> = report
        .min_by_lemma()
        .into_iter()
        .filter(|(_, s)| *s < -run.tol)
        .map(|(l, s)| format!("{} (slack {s:e})", l.id()))
        .collect();
    if !violated.is_empty() {
        return Err(Failure::Violation(format!("Fisher-information inequalities: {}", violated.join(", "))));
    }
    Ok(())
}

fn evidence(a: &EvidenceArgs) -> Outcome {
    let run = RunConfig::from_args(&a.sampling, 50, EVIDENCE_SLACK)?;
    let mut t = Table::new(["instance", "atoms", "max_shortfall", "dominated", "c1", "c2", "c3", "c4", "c5"]);
    let mut failed = Vec::new();
    for i in 0..run.budget {
        let mix = random_mixture(run.seed, i)?;
        let env = sweep_scalar_grid(&mix.channel()?, a.grid)?;
        let r = sufficiency_evidence_scalar(&mix, &env, run.tol)?;
        if !r.dominated {
            failed.push(i.to_string());
        }
        let head = [i.to_string(), mix.support.len().to_string(), fmt_sig(r.max_shortfall), r.dominated.to_string()];
        t.push(head.into_iter().chain(r.constants.iter().copied().map(fmt_sig)));
    }
    emit(&t, &a.output)?;
    if !failed.is_empty() {
        return Err(Failure::Violation(format!("Gaussian envelope dominance: mixtures {} exceed the slack", failed.join(", "))));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_validation() {
        let a = SamplingArgs { seed: 1, budget: Some(0), tol: None };
        assert!(matches!(RunConfig::from_args(&a, 5, 1e-9), Err(Failure::Input(_))));
        let a = SamplingArgs { seed: 1, budget: None, tol: Some(-1.0) };
        assert!(matches!(RunConfig::from_args(&a, 5, 1e-9), Err(Failure::Input(_))));
        let a = SamplingArgs { seed: 1, budget: None, tol: None };
        assert_eq!(RunConfig::from_args(&a, 5, 1e-9).unwrap(), RunConfig { seed: 1, budget: 5, tol: 1e-9 });
    }

    #[test]
    fn error_classes() {
        assert!(matches!(Failure::from(Error::NoRoot { f0: 1.0, f1: 2.0 }), Failure::Violation(_)));
        assert!(matches!(Failure::from(Error::Parse { line: 1, col: 1, msg: String::new() }), Failure::Input(_)));
    }
}
