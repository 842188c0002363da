use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::expr::expand_mi;
use super::span::EqualitySet;
use crate::error::{Error, Result};
use crate::info::{ProbTable, VarId};
use crate::rng::{random_stochastic, SampleRng};

/// A Bayesian-network factorization: each variable with its parent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    order: Vec<String>,
    parents: BTreeMap<String, BTreeSet<String>>,
}

impl Structure {
    /// Builds a structure from `(node, parents)` pairs. Parents that are not
    /// listed as nodes are added as roots.
    pub fn new<S: AsRef<str>>(nodes: &[(S, Vec<S>)]) -> Result<Self> {
        let mut parents: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut listed = Vec::new();
        for (n, ps) in nodes {
            let n = n.as_ref().to_string();
            listed.push(n.clone());
            let set = parents.entry(n.clone()).or_default();
            for p in ps {
                set.insert(p.as_ref().to_string());
            }
        }
        let extra: Vec<String> = parents.values().flatten().filter(|p| !parents.contains_key(*p)).cloned().collect();
        for p in extra {
            parents.entry(p.clone()).or_default();
            listed.push(p);
        }
        // Kahn's algorithm, preferring the listing order among ready nodes
        let mut indeg: BTreeMap<&str, usize> = parents.iter().map(|(k, v)| (k.as_str(), v.len())).collect();
        let mut order = Vec::new();
        let mut ready: VecDeque<String> = listed.iter().filter(|n| indeg[n.as_str()] == 0).cloned().collect();
        let mut seen = BTreeSet::new();
        while let Some(n) = ready.pop_front() {
            if !seen.insert(n.clone()) {
                continue;
            }
            order.push(n.clone());
            for m in &listed {
                if parents[m].contains(&n) {
                    let d = indeg.get_mut(m.as_str()).unwrap();
                    *d -= 1;
                    if *d == 0 {
                        ready.push_back(m.clone());
                    }
                }
            }
        }
        if order.len() != parents.len() {
            let stuck = parents.keys().find(|k| !seen.contains(*k)).unwrap();
            return Err(Error::CyclicStructure(stuck.clone()));
        }
        Ok(Structure { order, parents })
    }

    /// p(q,u) p(v1,v2,x|u) p(y1,y2,z|x): the factorization of the general
    /// (Marton-coded) inner bound.
    pub fn general_inner() -> Self {
        Structure::new(&[
            ("Q", vec![]),
            ("U", vec!["Q"]),
            ("V1", vec!["U"]),
            ("V2", vec!["U", "V1"]),
            ("X", vec!["U", "V1", "V2"]),
            ("Y1", vec!["X"]),
            ("Y2", vec!["X", "Y1"]),
            ("Z", vec!["X", "Y1", "Y2"]),
        ])
        .expect("acyclic")
    }

    /// U → X → Y1 → Y2 → Z.
    pub fn degraded_chain() -> Self {
        Structure::new(&[
            ("U", vec![]),
            ("X", vec!["U"]),
            ("Y1", vec!["X"]),
            ("Y2", vec!["Y1"]),
            ("Z", vec!["Y2"]),
        ])
        .expect("acyclic")
    }

    /// Nodes in a topological order.
    pub fn nodes(&self) -> &[String] {
        &self.order
    }

    pub fn parents(&self, n: &str) -> Option<&BTreeSet<String>> {
        self.parents.get(n)
    }

    /// A random joint distribution factorizing according to the structure:
    /// every conditional p(node | parents) row is drawn from Dirichlet(1).
    /// Variables appear in topological order.
    pub fn sample_joint(&self, card: &dyn Fn(&str) -> usize, rng: &mut SampleRng) -> Result<ProbTable> {
        let vars: Vec<VarId> = self.order.iter().map(|n| VarId::new(n, card(n))).collect();
        let cells: usize = vars.iter().map(|v| v.card).product();
        if cells > crate::info::CELL_CAP {
            return Err(Error::TableTooLarge { cells: cells as u128, cap: crate::info::CELL_CAP });
        }
        let pos: BTreeMap<&str, usize> = self.order.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        // per node: parent positions and the conditional table
        let mut cpts = Vec::with_capacity(vars.len());
        for (i, n) in self.order.iter().enumerate() {
            let ps: Vec<usize> = self.parents[n].iter().map(|p| pos[p.as_str()]).collect();
            let rows: usize = ps.iter().map(|&p| vars[p].card).product();
            cpts.push((ps, random_stochastic(rng, rows, vars[i].card)));
        }
        let mut probs = vec![0.0; cells];
        let mut idx = vec![0usize; vars.len()];
        for cell in probs.iter_mut() {
            let mut p = 1.0;
            for (i, (ps, table)) in cpts.iter().enumerate() {
                let row = ps.iter().fold(0, |acc, &q| acc * vars[q].card + idx[q]);
                p *= table[row][idx[i]];
            }
            *cell = p;
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < vars[k].card {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(ProbTable::from_parts(vars, probs))
    }

    fn ancestral(&self, seed: &BTreeSet<&str>) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = BTreeSet::new();
        let mut stack: Vec<String> = seed.iter().map(|s| s.to_string()).collect();
        while let Some(n) = stack.pop() {
            if out.insert(n.clone()) {
                if let Some(ps) = self.parents.get(&n) {
                    stack.extend(ps.iter().cloned());
                }
            }
        }
        out
    }

    /// d-separation of A and B given C, via the moralized ancestral graph.
    pub fn d_separated<S: AsRef<str>>(&self, a: &[S], b: &[S], c: &[S]) -> Result<bool> {
        let all: BTreeSet<&str> = a.iter().chain(b).chain(c).map(|s| s.as_ref()).collect();
        for n in &all {
            if !self.parents.contains_key(*n) {
                return Err(Error::UnknownVariable(n.to_string()));
            }
        }
        let anc = self.ancestral(&all);
        let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for n in &anc {
            let ps: Vec<&str> = self.parents[n].iter().map(String::as_str).collect();
            for p in &ps {
                adj.entry(n).or_default().insert(p);
                adj.entry(p).or_default().insert(n);
            }
            for (i, p) in ps.iter().enumerate() {
                for r in &ps[i + 1..] {
                    adj.entry(p).or_default().insert(r);
                    adj.entry(r).or_default().insert(p);
                }
            }
        }
        let blocked: BTreeSet<&str> = c.iter().map(|s| s.as_ref()).collect();
        let targets: BTreeSet<&str> = b.iter().map(|s| s.as_ref()).collect();
        let mut seen: BTreeSet<&str> = a.iter().map(|s| s.as_ref()).collect();
        let mut queue: VecDeque<&str> = seen.iter().copied().collect();
        while let Some(n) = queue.pop_front() {
            if targets.contains(n) {
                return Ok(false);
            }
            if let Some(ns) = adj.get(n) {
                for &m in ns {
                    if !blocked.contains(m) && seen.insert(m) {
                        queue.push_back(m);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// All equalities I(a;b|C) = 0 for single variables a, b and every subset C
/// of the remaining variables such that a and b are d-separated by C.
///
/// Any set-level independence A ⫫ B | C implied by the graph decomposes by
/// the chain rule into such single-variable statements, so their span
/// contains every implied equality.
pub fn derive_equalities(s: &Structure) -> Result<EqualitySet> {
    let nodes = s.nodes();
    let n = nodes.len();
    let mut eqs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let rest: Vec<&String> = (0..n).filter(|&k| k != i && k != j).map(|k| &nodes[k]).collect();
            for mask in 0u32..(1 << rest.len()) {
                let c: Vec<&str> = rest
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, v)| v.as_str())
                    .collect();
                let a = [nodes[i].as_str()];
                let b = [nodes[j].as_str()];
                if s.d_separated(&a, &b, &c)? {
                    eqs.push(expand_mi(&a, &b, &c)?);
                }
            }
        }
    }
    Ok(EqualitySet::new(eqs, Some(s.clone())))
}
