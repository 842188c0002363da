//! Acceptance suite: ten end-to-end criteria, each reported on one
//! `criterion N ... PASS|FAIL` line with its runtime. Exits non-zero when any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use wiretap_core::fisher::{
    debruijn_suite, lemma_suite_check, random_mixture, sufficiency_evidence_scalar, Lemma, DEBRUIJN_GAUSS_TOL, DEBRUIJN_MIXTURE_TOL,
    EVIDENCE_SLACK, LEMMA_TOL,
};
use wiretap_core::fm::appendix::general_inner_chain;
use wiretap_core::fm::lp::prune_redundant;
use wiretap_core::fm::{contained_in, region_equal, vertices, Step};
use wiretap_core::linalg::Mat;
use wiretap_core::regions::discrete::{
    degraded_inner_point, eval_degraded_inner, eval_degraded_outer, eval_general_inner, eval_original_inner, random_degraded_aux,
    sample_degraded_channel, specialize_corollary, transferred_region, Corollary, EXTRA_ROW,
};
use wiretap_core::regions::gaussian::{
    discretize_scalar, dpc_identity_check, eval_gauss_inner, eval_gauss_outer, eval_general_gauss, gauss_inner_point,
    sample_degraded_gauss_channel, sample_single_split, sample_triple_split, specialize_gauss_corollary, sweep_scalar_grid, CovSplit,
    GaussChannel, MartonOrder, ScalarGrid,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

const TOL: f64 = 1e-9;
const PAIRS: u64 = 100;
const PAIR_SEED: u64 = 0xACC2;

/// Bound of the scalar fixture (S = 1, Σ = 0.5, 1, 2; K = 0.5) on the
/// second user's confidential rate, evaluated with 40-digit arithmetic.
const SCALAR_SECRECY_BOUND: f64 = 0.052680257828913150614;

fn elimination_chain_replay() -> Outcome {
    let script = ok(general_inner_chain(), "load chain")?;
    let expects = script.steps.iter().filter(|s| matches!(s, Step::Expect { .. })).count();
    let report = ok(script.verify(), "replay")?;
    ensure!(expects == 15 && report.checkpoints == expects, "{} of {expects} checkpoints matched", report.checkpoints);
    ensure!(report.final_rows == 14, "final system has {} rows", report.final_rows);
    Ok(format!("{} checkpoints, final system identical ({} rows)", report.checkpoints, report.final_rows))
}

fn discrete_pair(i: u64) -> Result<(wiretap_core::ChannelSpec, wiretap_core::regions::discrete::AuxJoint), String> {
    let ch = ok(sample_degraded_channel(PAIR_SEED, i, 3), "channel")?;
    let aux = ok(random_degraded_aux(ch.input.card, 1 + (i % 4) as usize, PAIR_SEED, i), "aux")?;
    Ok((ch, aux))
}

fn rate_transfer() -> Outcome {
    for i in 0..PAIRS {
        let (ch, aux) = discrete_pair(i)?;
        let inner = ok(eval_degraded_inner(&aux, &ch), "inner")?;
        let moved = ok(transferred_region(&ok(eval_original_inner(&aux, &ch), "original")?), "transfer")?;
        ensure!(ok(region_equal(&moved, &inner, TOL), "compare")?, "pair {i}: transferred system differs");
    }
    Ok(format!("{PAIRS} pairs region-equal at {TOL:e}"))
}

fn discrete_partial_match() -> Outcome {
    for i in 0..PAIRS {
        let (ch, aux) = discrete_pair(i)?;
        let inner = ok(eval_degraded_inner(&aux, &ch), "inner")?;
        let outer = ok(eval_degraded_outer(&aux, &ch), "outer")?;
        ensure!(contained_in(&ok(vertices(&inner), "vertices")?, &outer, TOL), "pair {i}: inner vertex outside outer");
        let mut p = ok(degraded_inner_point(&aux, &ch), "point")?;
        p.bounds.remove(EXTRA_ROW);
        ensure!(ok(region_equal(&p.system(), &outer, TOL), "compare")?, "pair {i}: reduced inner differs from outer");
        for c in [Corollary::NoConfidential1, Corollary::NoPublic2, Corollary::SecrecyOnly] {
            let a = ok(specialize_corollary(&inner, c), "corollary")?;
            let b = ok(specialize_corollary(&outer, c), "corollary")?;
            ensure!(ok(region_equal(&a, &b, TOL), "compare")?, "pair {i}: {c:?} differs");
        }
    }
    Ok(format!("{PAIRS} pairs: containment, reduction and three corollaries"))
}

fn general_reduction() -> Outcome {
    for i in 0..50 {
        let ch = ok(sample_degraded_channel(0x7E03, i, 3), "channel")?;
        let aux = ok(random_degraded_aux(ch.input.card, 1 + (i % 4) as usize, 0x7E03, i), "aux")?;
        let general = ok(eval_general_inner(&ok(aux.embed_general(), "embed")?, &ch), "general")?;
        let inner = ok(eval_degraded_inner(&aux, &ch), "inner")?;
        ensure!(ok(region_equal(&general, &inner, TOL), "compare")?, "channel {i}: general region differs");
    }
    Ok("50 channels region-equal".into())
}

fn gauss_partial_match() -> Outcome {
    for i in 0..100 {
        let d = 1 + (i % 3) as usize;
        let ch = ok(sample_degraded_gauss_channel(d, 0x6A55, i), "channel")?;
        let split = ok(sample_single_split(&ch.s, 0x6A55, i), "split")?;
        let inner = ok(eval_gauss_inner(&split, &ch), "inner")?;
        let outer = ok(eval_gauss_outer(&split, &ch), "outer")?;
        ensure!(contained_in(&ok(vertices(&inner), "vertices")?, &outer, TOL), "instance {i}: inner vertex outside outer");
        for c in [Corollary::NoConfidential1, Corollary::NoPublic2, Corollary::SecrecyOnly] {
            let a = ok(specialize_gauss_corollary(&inner, c), "corollary")?;
            let b = ok(specialize_gauss_corollary(&outer, c), "corollary")?;
            ensure!(ok(region_equal(&a, &b, TOL), "compare")?, "instance {i}: {c:?} differs");
        }
    }
    let ch = ok(GaussChannel::scalar(1.0, 0.5, 1.0, 2.0), "fixture")?;
    let p = ok(gauss_inner_point(&ok(CovSplit::single(Mat::from_element(1, 1, 0.5)), "split")?, &ch), "point")?;
    let got = p.values()[0];
    ensure!((got - SCALAR_SECRECY_BOUND).abs() <= TOL, "scalar bound {got} vs {SCALAR_SECRECY_BOUND}");
    Ok(format!("100 instances; scalar bound {got:.12} (error {:.1e})", (got - SCALAR_SECRECY_BOUND).abs()))
}

fn general_gauss_consistency() -> Outcome {
    for i in 0..50 {
        let d = 1 + (i % 3) as usize;
        let ch = ok(sample_degraded_gauss_channel(d, 0x6E27, i), "channel")?;
        let k = ok(sample_single_split(&ch.s, 0x6E27, i), "split")?.total();
        let split = ok(CovSplit::triple(&ch.s - &k, k.clone(), Mat::zeros(d, d)), "triple")?;
        let general = prune_redundant(&ok(eval_general_gauss(&split, &ch, MartonOrder::R21), "general")?, TOL);
        let inner = ok(eval_gauss_inner(&ok(CovSplit::single(k), "single")?, &ch), "inner")?;
        ensure!(ok(region_equal(&general, &inner, TOL), "compare")?, "instance {i}: general region differs");
    }
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let d = 1 + (i % 3) as usize;
        let ch = ok(sample_degraded_gauss_channel(d, 0xD9C, i), "channel")?;
        let split = ok(sample_triple_split(&ch.s, 0xD9C, i), "split")?;
        worst = worst.max(ok(dpc_identity_check(&split, &ch), "dpc")?.residual);
    }
    ensure!(worst <= TOL, "dirty-paper residual {worst:e}");
    Ok(format!("50 instances region-equal; max dirty-paper residual {worst:.1e} over 100 splits"))
}

fn fisher_lab() -> Outcome {
    let rows = ok(debruijn_suite(0xF15, 200, 1e-4), "de Bruijn")?;
    let worst = |family: &str| rows.iter().filter(|r| r.family == family).map(|r| r.residual).fold(0.0, f64::max);
    let (g, m) = (worst("gaussian"), worst("mixture"));
    ensure!(g <= DEBRUIJN_GAUSS_TOL, "Gaussian de Bruijn residual {g:e}");
    ensure!(m <= DEBRUIJN_MIXTURE_TOL, "mixture de Bruijn residual {m:e}");
    let report = ok(lemma_suite_check(0xF15, 200), "lemma suite")?;
    let mins = report.min_by_lemma();
    for (lemma, slack) in &mins {
        ensure!(slack.is_finite(), "{} never evaluated", lemma.id());
        ensure!(*slack >= -LEMMA_TOL, "{} slack {slack:e}", lemma.id());
    }
    ensure!(mins.iter().any(|(l, _)| *l == Lemma::InterpolationOrder), "no interpolation point evaluated");
    let tightest = mins.iter().map(|(_, s)| *s).fold(f64::INFINITY, f64::min);
    Ok(format!("de Bruijn max residual {g:.1e} / {m:.1e}; {} lemma entries, min slack {tightest:.1e}", report.entries.len()))
}

fn sufficiency_evidence() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..50 {
        let mix = ok(random_mixture(0xE71D, i), "mixture")?;
        let env = ok(sweep_scalar_grid(&ok(mix.channel(), "channel")?, 401), "envelope")?;
        let r = ok(sufficiency_evidence_scalar(&mix, &env, EVIDENCE_SLACK), "evidence")?;
        ensure!(r.dominated, "mixture {i}: shortfall {:e}", r.max_shortfall);
        worst = worst.max(r.max_shortfall);
    }
    Ok(format!("evidence, not proof: 50 mixtures inside the Gaussian envelope, max shortfall {worst:.1e}"))
}

/// (S, Σ1, Σ2, ΣZ, K) of the scalar cross-check fixtures.
const SCALAR_FIXTURES: [[f64; 5]; 10] = [
    [1.0, 0.5, 1.0, 2.0, 0.5],
    [1.0, 0.5, 1.0, 2.0, 0.0],
    [1.0, 0.5, 1.0, 2.0, 1.0],
    [2.0, 1.0, 1.5, 3.0, 1.0],
    [2.0, 0.5, 0.8, 1.6, 0.3],
    [1.0, 0.3, 0.8, 1.6, 0.7],
    [3.0, 1.0, 2.0, 4.0, 1.5],
    [0.5, 0.2, 0.4, 0.9, 0.25],
    [1.5, 0.6, 0.9, 1.2, 0.75],
    [1.0, 0.5, 1.5, 1.5, 0.4],
];

fn scalar_cross_check() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, &[s, s1, s2, sz, k]) in SCALAR_FIXTURES.iter().enumerate() {
        let ch = ok(GaussChannel::scalar(s, s1, s2, sz), "channel")?;
        let gauss = ok(gauss_inner_point(&ok(CovSplit::single(Mat::from_element(1, 1, k)), "split")?, &ch), "gauss")?.values();
        let (aux, dch) = ok(discretize_scalar(&ch, k, &ScalarGrid::default()), "discretize")?;
        let disc = ok(degraded_inner_point(&aux, &dch), "discrete")?.values();
        let err = gauss.iter().zip(&disc).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure!(err <= 5e-3, "fixture {n}: max deviation {err:e}");
        worst = worst.max(err);
    }
    Ok(format!("10 fixtures, max deviation {worst:.1e} nats"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../wiretap-core/fixtures/channels").join(name).display().to_string()
}

fn run_cli(args: &[String]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_wiretap")).args(args).output().map_err(|e| format!("spawn: {e}"))?;
    ensure!(out.status.success(), "`wiretap {}` exited with {}: {}", args.join(" "), out.status, String::from_utf8_lossy(&out.stderr).trim());
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let commands: Vec<Vec<String>> = [
        vec!["region", "eval-inner", "--channel", &fixture("bsc_cascade.toml"), "--aux", &fixture("aux_layers.toml")],
        vec!["region", "sweep", "--channel", &fixture("bsc_cascade.toml"), "--seed", "11", "--budget", "60"],
        vec!["region", "sweep", "--channel", &fixture("product.toml"), "--region", "general", "--seed", "11", "--budget", "20"],
        vec!["fm", "verify-appendix"],
        vec!["gauss", "sweep", "--channel", &fixture("gauss_mimo.toml"), "--seed", "11", "--budget", "40"],
        vec!["gauss", "sweep", "--channel", &fixture("gauss_mimo.toml"), "--trace", "2", "--seed", "11", "--budget", "20"],
        vec!["gauss", "dpc-check", "--channel", &fixture("gauss_mimo.toml"), "--seed", "11", "--budget", "20"],
        vec!["fisher", "debruijn", "--seed", "11", "--budget", "12"],
        vec!["fisher", "lemmas", "--seed", "11", "--budget", "12"],
        vec!["fisher", "evidence", "--seed", "11", "--budget", "2", "--grid", "101"],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();
    for args in &commands {
        let a = run_cli(args)?;
        let b = run_cli(args)?;
        ensure!(!a.is_empty(), "`wiretap {}` printed nothing", args.join(" "));
        ensure!(a == b, "`wiretap {}` output differs between runs", args.join(" "));
    }
    Ok(format!("{} commands byte-identical across two runs", commands.len()))
}

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "elimination-chain replay", limit: secs(10), run: elimination_chain_replay },
        Criterion { name: "rate-transfer equivalence", limit: secs(60), run: rate_transfer },
        Criterion { name: "discrete partial match", limit: secs(60), run: discrete_partial_match },
        Criterion { name: "general region reduction", limit: secs(60), run: general_reduction },
        Criterion { name: "Gaussian partial match", limit: secs(60), run: gauss_partial_match },
        Criterion { name: "general Gaussian consistency", limit: secs(60), run: general_gauss_consistency },
        Criterion { name: "Fisher lab", limit: secs(120), run: fisher_lab },
        Criterion { name: "Gaussian sufficiency evidence", limit: secs(300), run: sufficiency_evidence },
        Criterion { name: "scalar cross-check", limit: secs(120), run: scalar_cross_check },
        Criterion { name: "determinism", limit: None, run: determinism },
    ];
    let mut failed = 0;
    for (n, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("runtime {elapsed:.1?} exceeds {limit:?}")),
            (o, _) => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {:<30} {status} ({:.2} s) {detail}", n + 1, c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
