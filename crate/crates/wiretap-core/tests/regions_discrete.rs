//! Discrete region evaluation against an independent mutual-information
//! summation, plus the structural properties relating the inner, outer,
//! superposition and general forms.

use std::collections::HashMap;

use proptest::prelude::*;
use wiretap_core::fm::{appendix, contained_in, parse_system, region_equal, vertices, IneqSystem};
use wiretap_core::info::{build_degraded_joint, ChannelSpec, Kernel, ProbTable, VarId};
use wiretap_core::regions::discrete::*;
use wiretap_core::rng::{random_pmf, random_stochastic, stream};

/// Dense joint as explicit (assignment, probability) pairs.
struct Joint {
    names: Vec<String>,
    cells: Vec<(Vec<usize>, f64)>,
}

impl Joint {
    /// p(aux) · W(y1,y2,z|x), multiplied out cell by cell.
    fn new(aux: &ProbTable, ch: &ChannelSpec) -> Self {
        let w = ch.joint_kernel().unwrap();
        let xpos = aux.position("X").unwrap();
        let cards: Vec<usize> = aux.vars().iter().map(|v| v.card).collect();
        let outs: Vec<usize> = ch.outputs.iter().map(|v| v.card).collect();
        let mut names: Vec<String> = aux.names().iter().map(|s| s.to_string()).collect();
        names.extend(ch.outputs.iter().map(|v| v.name.clone()));
        let mut cells = Vec::new();
        for (flat, &p) in aux.probs().iter().enumerate() {
            let mut digits = vec![0; cards.len()];
            let mut r = flat;
            for k in (0..cards.len()).rev() {
                digits[k] = r % cards[k];
                r /= cards[k];
            }
            let row = w.row(digits[xpos]);
            let mut o = 0;
            for a in 0..outs[0] {
                for b in 0..outs[1] {
                    for c in 0..outs[2] {
                        let mut d = digits.clone();
                        d.extend([a, b, c]);
                        cells.push((d, p * row[o]));
                        o += 1;
                    }
                }
            }
        }
        Joint { names, cells }
    }

    fn marginal(&self, vars: &[&str]) -> HashMap<Vec<usize>, f64> {
        let idx: Vec<usize> = vars.iter().map(|v| self.names.iter().position(|n| n == v).unwrap()).collect();
        let mut m = HashMap::new();
        for (d, p) in &self.cells {
            *m.entry(idx.iter().map(|&i| d[i]).collect()).or_insert(0.0) += p;
        }
        m
    }

    /// Σ p(a,b,c) ln [p(a,b,c) p(c) / (p(a,c) p(b,c))].
    fn mi(&self, a: &[&str], b: &[&str], c: &[&str]) -> f64 {
        let all: Vec<&str> = a.iter().chain(b).chain(c).copied().collect();
        let ac: Vec<&str> = a.iter().chain(c).copied().collect();
        let bc: Vec<&str> = b.iter().chain(c).copied().collect();
        let (pabc, pac, pbc, pc) = (self.marginal(&all), self.marginal(&ac), self.marginal(&bc), self.marginal(c));
        let (na, nb) = (a.len(), b.len());
        pabc.iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| {
                let kc = k[na + nb..].to_vec();
                let mut kac = k[..na].to_vec();
                kac.extend(&kc);
                let mut kbc = k[na..na + nb].to_vec();
                kbc.extend(&kc);
                p * (p * pc[&kc] / (pac[&kac] * pbc[&kbc])).ln()
            })
            .sum()
    }
}

fn cascade(p: [f64; 3]) -> ChannelSpec {
    build_degraded_joint(
        &Kernel::bsc("X", "Y1", p[0]).unwrap(),
        &Kernel::bsc("Y1", "Y2", p[1]).unwrap(),
        &Kernel::bsc("Y2", "Z", p[2]).unwrap(),
    )
    .unwrap()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (k, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() <= tol, "bound {k}: {g} vs {w}");
    }
}

fn oracle_inner(j: &Joint) -> Vec<f64> {
    let (uy2, uz) = (j.mi(&["U"], &["Y2"], &[]), j.mi(&["U"], &["Z"], &[]));
    let xy1u = j.mi(&["X"], &["Y1"], &["U"]);
    let (xz, xzu) = (j.mi(&["X"], &["Z"], &[]), j.mi(&["X"], &["Z"], &["U"]));
    vec![uy2 - uz, uy2 + xy1u - xz, uy2, uy2 + xy1u - xzu, uy2 + xy1u]
}

#[test]
fn bsc_cascade_with_u_equal_x() {
    let ch = cascade([0.05, 0.1, 0.15]);
    let aux = AuxJoint::from_layers(&[0.5, 0.5], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let got = degraded_inner_point(&aux, &ch).unwrap().values();
    assert_close(&got, &oracle_inner(&Joint::new(aux.table(), &ch)), 1e-12);
    // frozen: I(X;Y2) − I(X;Z) and I(X;Y2) for the composite crossovers
    let frozen = [0.155163749259003, 0.155163749259003, 0.288183695496007, 0.288183695496007, 0.288183695496007];
    assert_close(&got, &frozen, 1e-12);
    let outer = degraded_outer_point(&aux, &ch).unwrap().values();
    assert_close(&outer, &[frozen[0], frozen[1], frozen[2], frozen[4]], 1e-12);
}

#[test]
fn bsc_cascade_with_noisy_u() {
    let ch = cascade([0.05, 0.1, 0.15]);
    let aux = AuxJoint::from_layers(&[0.5, 0.5], vec![vec![0.8, 0.2], vec![0.2, 0.8]]).unwrap();
    let j = Joint::new(aux.table(), &ch);
    assert_close(&degraded_inner_point(&aux, &ch).unwrap().values(), &oracle_inner(&j), 1e-12);
    let uy2 = j.mi(&["U"], &["Y2"], &[]);
    let uz = j.mi(&["U"], &["Z"], &[]);
    let xzu = j.mi(&["X"], &["Z"], &["U"]);
    let xy1u = j.mi(&["X"], &["Y1"], &["U"]);
    let orig = eval_original_inner(&aux, &ch).unwrap();
    let want = IneqSystem::new(vec![
        wiretap_core::fm::LinIneq::le(&["Rp2"], uz),
        wiretap_core::fm::LinIneq::le(&["Rs2"], uy2 - uz),
        wiretap_core::fm::LinIneq::le(&["Rp1"], xzu),
        wiretap_core::fm::LinIneq::le(&["Rs1"], xy1u - xzu),
    ]);
    assert!(region_equal(&orig, &want.with_nonnegativity(), 1e-12).unwrap());
}

fn random_general_aux(seed: u64) -> AuxJoint {
    let mut rng = stream(seed, 0);
    let qu = ProbTable::new(vec![VarId::new("Q", 2), VarId::new("U", 2)], random_pmf(&mut rng, 4)).unwrap();
    let rows = random_stochastic(&mut rng, 2, 8).concat();
    let k = Kernel::new(vec![VarId::new("U", 2)], vec![VarId::new("V1", 2), VarId::new("V2", 2), VarId::new("X", 2)], rows).unwrap();
    AuxJoint::general(qu.extend(&k).unwrap()).unwrap()
}

fn random_channel(seed: u64) -> ChannelSpec {
    let mut rng = stream(seed, 1);
    let rows = random_stochastic(&mut rng, 2, 8).concat();
    ChannelSpec::from_joint(VarId::new("X", 2), [VarId::new("Y1", 2), VarId::new("Y2", 2), VarId::new("Z", 2)], rows).unwrap()
}

#[test]
fn general_bounds_match_direct_summation_and_the_recorded_system() {
    let fixture = parse_system(&appendix::system_text("final_general_inner").unwrap()).unwrap();
    for seed in 0..6 {
        let aux = random_general_aux(seed);
        let ch = random_channel(seed);
        let got = general_inner_point(&aux, &ch).unwrap().values();
        let j = Joint::new(aux.table(), &ch);
        let mq = j.mi(&["U"], &["Y1"], &["Q"]).min(j.mi(&["U"], &["Y2"], &["Q"]));
        let m = j.mi(&["U"], &["Y1"], &[]).min(j.mi(&["U"], &["Y2"], &[]));
        let a1 = j.mi(&["V1"], &["Y1"], &["U"]);
        let a2 = j.mi(&["V2"], &["Y2"], &["U"]);
        let c = j.mi(&["V1"], &["V2"], &["U"]);
        let zz = j.mi(&["V1", "V2"], &["Z"], &["U"]);
        let want = [
            mq + a1 - j.mi(&["U", "V1"], &["Z"], &["Q"]),
            mq + a2 - j.mi(&["U", "V2"], &["Z"], &["Q"]),
            mq + a1 + a2 - c - j.mi(&["U", "V1", "V2"], &["Z"], &["Q"]),
            m + a1,
            m + a2,
            m + a1 + a2 - j.mi(&["V2"], &["Z"], &["U"]),
            m + 2.0 * a1 + a2 - c - zz,
            m + a1 + a2 - j.mi(&["V1"], &["Z"], &["U"]),
            m + a1 + 2.0 * a2 - c - zz,
            m + a1 + a2 - c,
        ];
        assert_close(&got, &want, 1e-10);
        // the symbolic end point of the elimination chain, evaluated on the same joint
        let full = ch.compose(aux.table()).unwrap();
        let sym = fixture
            .map_rhs(|r| Ok(r.eval_with(&|e: &wiretap_core::algebra::InfoExpr| e.eval(&full).unwrap())))
            .unwrap();
        assert!(region_equal(&sym, &eval_general_inner(&aux, &ch).unwrap(), 1e-9).unwrap());
    }
}

#[test]
fn vacuous_v_layers_leave_only_q_and_u_terms() {
    let ch = cascade([0.1, 0.1, 0.2]);
    let mut rng = stream(9, 0);
    let qu = ProbTable::new(vec![VarId::new("Q", 2), VarId::new("U", 2)], random_pmf(&mut rng, 4)).unwrap();
    let kx = Kernel::matrix(VarId::new("U", 2), VarId::new("X", 2), random_stochastic(&mut rng, 2, 2)).unwrap();
    let v = ProbTable::new(vec![VarId::new("V1", 2), VarId::new("V2", 2)], random_pmf(&mut rng, 4)).unwrap();
    let aux = AuxJoint::general(qu.extend(&kx).unwrap().product(&v).unwrap()).unwrap();
    let j = Joint::new(aux.table(), &ch);
    let mq = j.mi(&["U"], &["Y1"], &["Q"]).min(j.mi(&["U"], &["Y2"], &["Q"]));
    let got = general_inner_point(&aux, &ch).unwrap().values();
    assert!((got[0] - (mq - j.mi(&["U"], &["Z"], &["Q"]))).abs() < 1e-10);
}

fn nonneg_rows(s: &IneqSystem<f64>) -> usize {
    s.ineqs.iter().filter(|r| r.nonneg_var().is_none()).count()
}

#[test]
fn corollary_bound_lists() {
    let ch = cascade([0.05, 0.1, 0.15]);
    let aux = AuxJoint::from_layers(&[0.3, 0.7], vec![vec![0.9, 0.1], vec![0.25, 0.75]]).unwrap();
    let j = Joint::new(aux.table(), &ch);
    let uy2 = j.mi(&["U"], &["Y2"], &[]);
    let uz = j.mi(&["U"], &["Z"], &[]);
    let xy1u = j.mi(&["X"], &["Y1"], &["U"]);
    let xz = j.mi(&["X"], &["Z"], &[]);
    let xzu = j.mi(&["X"], &["Z"], &["U"]);
    let inner = eval_degraded_inner(&aux, &ch).unwrap();
    let le = |v: &[&str], r: f64| wiretap_core::fm::LinIneq::le(v, r);
    let stated = |rows: Vec<wiretap_core::fm::LinIneq<f64>>, vars: &[&str]| {
        let mut s = IneqSystem::new(rows);
        for v in vars {
            s.declare_var(v);
        }
        s.with_nonnegativity()
    };
    let cor1 = specialize_corollary(&inner, Corollary::NoConfidential1).unwrap();
    assert_eq!(nonneg_rows(&cor1), 3);
    let want1 = stated(vec![le(&["Rs2"], uy2 - uz), le(&["Rs2", "Rp2"], uy2), le(&["Rp1", "Rp2", "Rs2"], uy2 + xy1u)], &["Rp1", "Rp2", "Rs2"]);
    assert!(region_equal(&cor1, &want1, 1e-10).unwrap());
    let cor2 = specialize_corollary(&inner, Corollary::NoPublic2).unwrap();
    assert_eq!(nonneg_rows(&cor2), 3);
    let want2 = stated(vec![le(&["Rs2"], uy2 - uz), le(&["Rs1", "Rs2"], uy2 + xy1u - xz), le(&["Rp1", "Rs1", "Rs2"], uy2 + xy1u)], &["Rp1", "Rs1", "Rs2"]);
    assert!(region_equal(&cor2, &want2, 1e-10).unwrap());
    let cor3 = specialize_corollary(&inner, Corollary::SecrecyOnly).unwrap();
    assert_eq!(nonneg_rows(&cor3), 2);
    let want3 = stated(vec![le(&["Rs2"], uy2 - uz), le(&["Rs1", "Rs2"], uy2 + xy1u - xz)], &["Rs1", "Rs2"]);
    assert!(region_equal(&cor3, &want3, 1e-10).unwrap());
    let alt = specialize_corollary(&inner, Corollary::SecrecyOnlyAlt).unwrap();
    let want_alt = stated(vec![le(&["Rs2"], uy2 - uz), le(&["Rs1"], xy1u - xzu)], &["Rs1", "Rs2"]);
    assert!(region_equal(&alt, &want_alt, 1e-10).unwrap());
    assert!(contained_in(&vertices(&alt).unwrap(), &cor3, 1e-10));
}

#[test]
fn identity_channel_sweep_has_no_secrecy() {
    let ch = cascade([0.0, 0.0, 0.0]);
    let r = sweep_inner_region(&ch, &SweepConfig::new(16, 5, SweepRegion::DegradedInner)).unwrap();
    for p in &r.hull {
        assert!(p[1].abs() < 1e-9 && p[3].abs() < 1e-9, "{p:?}");
    }
}

#[test]
fn doubling_the_budget_grows_the_hull() {
    let ch = cascade([0.05, 0.1, 0.15]);
    for region in [SweepRegion::DegradedInner, SweepRegion::General] {
        let small = sweep_inner_region(&ch, &SweepConfig::new(10, 21, region)).unwrap();
        let big = sweep_inner_region(&ch, &SweepConfig::new(20, 21, region)).unwrap();
        assert_eq!(small.samples[..], big.samples[..10]);
        for p in &small.hull {
            assert!(big.hull_contains(p, 1e-9), "{p:?} lost");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_outer_transfer_and_reduction(seed in 0u64..1_000_000, nu in 1usize..=4) {
        let ch = sample_degraded_channel(seed, 0, 3).unwrap();
        let aux = random_degraded_aux(ch.input.card, nu, seed, 1).unwrap();
        let inner = eval_degraded_inner(&aux, &ch).unwrap();
        let outer = eval_degraded_outer(&aux, &ch).unwrap();
        let vi = vertices(&inner).unwrap();
        prop_assert!(contained_in(&vi, &outer, 1e-9));
        let mut p = degraded_inner_point(&aux, &ch).unwrap();
        p.bounds.remove(EXTRA_ROW);
        prop_assert!(region_equal(&p.system(), &outer, 1e-9).unwrap());
        let moved = transferred_region(&eval_original_inner(&aux, &ch).unwrap()).unwrap();
        prop_assert!(region_equal(&moved, &inner, 1e-9).unwrap());
        let general = eval_general_inner(&aux.embed_general().unwrap(), &ch).unwrap();
        prop_assert!(region_equal(&general, &inner, 1e-9).unwrap());
        for c in [Corollary::NoConfidential1, Corollary::NoPublic2, Corollary::SecrecyOnly] {
            let a = specialize_corollary(&inner, c).unwrap();
            let b = specialize_corollary(&outer, c).unwrap();
            prop_assert!(region_equal(&a, &b, 1e-9).unwrap());
        }
    }

    #[test]
    fn equivocation_rates_never_exceed_totals(r in proptest::array::uniform4(0.0f64..10.0)) {
        let e = to_equivocation(r).unwrap();
        prop_assert!(e[1] <= e[0] && e[3] <= e[2]);
        prop_assert!((e[0] - e[1] - r[0]).abs() <= 1e-12 * (1.0 + r[0]));
    }
}
