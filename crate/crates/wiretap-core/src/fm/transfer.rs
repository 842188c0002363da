use num_traits::Zero;

use super::rhs::RhsValue;
use super::system::{IneqSystem, LinIneq, Relation};
use crate::algebra::q;
use crate::error::{Error, Result};

/// Moving an amount `slack` of rate from `source` to `dest`: the new tuple
/// is (source − slack, dest + slack) for any 0 ≤ slack ≤ old source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub source: String,
    pub dest: String,
    pub slack: String,
}

impl Transfer {
    pub fn new(source: &str, dest: &str, slack: &str) -> Self {
        Transfer { source: source.into(), dest: dest.into(), slack: slack.into() }
    }
}

/// Rewrites the system in terms of the transferred rates, all transfers
/// applied simultaneously: every old source is replaced by source + slack and
/// every old destination by dest − slack. The slacks are nonnegative, the new
/// sources are nonnegative (slack ≤ old source), so are the new destinations,
/// and a destination that the system never mentions had old value 0, so it
/// equals the incoming slacks.
/// The old nonnegativity row of a pure source (one that receives nothing),
/// −(source + slacks) ≤ 0, is implied by the new nonnegativity rows and is
/// not carried over.
/// The returned system still contains the slacks; eliminate them next.
pub fn apply_rate_transfer<R: RhsValue>(sys: &IneqSystem<R>, transfers: &[Transfer]) -> Result<IneqSystem<R>> {
    for (i, t) in transfers.iter().enumerate() {
        if t.source == t.dest {
            return Err(Error::Validation(format!("transfer from `{}` to itself", t.source)));
        }
        if sys.vars.contains(&t.slack) || transfers[..i].iter().any(|u| u.slack == t.slack) {
            return Err(Error::DuplicateSlackName(t.slack.clone()));
        }
    }
    let mut out = IneqSystem::default();
    out.vars = sys.vars.clone();
    for row in &sys.ineqs {
        let pure_source = |v: &str| transfers.iter().any(|t| t.source == v) && !transfers.iter().any(|t| t.dest == v);
        if row.nonneg_var().is_some_and(pure_source) {
            continue;
        }
        let mut r = row.clone();
        for t in transfers {
            let c = row.coeff(&t.source) - row.coeff(&t.dest);
            if !c.is_zero() {
                r.coeffs.insert(t.slack.clone(), c);
            }
        }
        out.push(r);
    }
    for t in transfers {
        out.declare_var(&t.slack);
        out.push(LinIneq::nonneg(&t.slack));
        out.push(LinIneq::nonneg(&t.source));
        // implied by slack ≥ 0 and the rewritten old nonnegativity of dest,
        // but kept so that every rate of the system stays explicitly ≥ 0
        out.push(LinIneq::nonneg(&t.dest));
        out.declare_var(&t.dest);
    }
    // destinations absent from the original system start at zero
    let fresh: std::collections::BTreeSet<&str> =
        transfers.iter().map(|t| t.dest.as_str()).filter(|d| !sys.vars.contains(*d)).collect();
    for d in fresh {
        let mut terms = vec![(d.to_string(), q(1))];
        for t in transfers.iter().filter(|t| t.dest == d) {
            terms.push((t.slack.clone(), q(-1)));
        }
        out.push(LinIneq::new(&terms, Relation::Eq, R::zero()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::system::fm_eliminate;
    use super::*;

    #[test]
    fn single_transfer_into_fresh_rate() {
        let sys = IneqSystem::new(vec![LinIneq::le(&["Rs"], 1.0f64)]).with_nonnegativity();
        let t = apply_rate_transfer(&sys, &[Transfer::new("Rs", "Rp", "a")]).unwrap();
        let out = fm_eliminate(&t, "a").unwrap();
        assert!(out.ineqs.contains(&LinIneq::le(&["Rp", "Rs"], 1.0)));
        assert!(!out.vars.contains("a"));
    }

    #[test]
    fn duplicate_slack_rejected() {
        let sys = IneqSystem::new(vec![LinIneq::le(&["Rs", "a"], 1.0f64)]);
        let r = apply_rate_transfer(&sys, &[Transfer::new("Rs", "Rp", "a")]);
        assert!(matches!(r, Err(Error::DuplicateSlackName(_))));
    }
}
