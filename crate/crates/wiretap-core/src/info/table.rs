use crate::error::{Error, Result};

/// Dense tensors are capped at this many cells.
pub const CELL_CAP: usize = 10_000_000;
/// Normalization tolerance for tables and kernel rows.
pub const MASS_TOL: f64 = 1e-12;
const NEG_TOL: f64 = -1e-15;

/// A named finite random variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarId {
    pub name: String,
    pub card: usize,
}

impl VarId {
    pub fn new(name: impl Into<String>, card: usize) -> Self {
        VarId { name: name.into(), card }
    }
}

fn cell_count(vars: &[VarId]) -> Result<usize> {
    let mut n: u128 = 1;
    for v in vars {
        if v.card == 0 {
            return Err(Error::InvalidVariable(format!("`{}` has cardinality 0", v.name)));
        }
        n *= v.card as u128;
        if n > CELL_CAP as u128 {
            return Err(Error::TableTooLarge { cells: n, cap: CELL_CAP });
        }
    }
    Ok(n as usize)
}

/// Joint distribution over an ordered list of variables, stored row-major
/// (the last variable varies fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbTable {
    vars: Vec<VarId>,
    probs: Vec<f64>,
}

impl ProbTable {
    /// Wraps raw parts without validation; see [`validate_table`].
    pub fn from_parts(vars: Vec<VarId>, probs: Vec<f64>) -> Self {
        ProbTable { vars, probs }
    }

    /// Builds and validates a table.
    pub fn new(vars: Vec<VarId>, probs: Vec<f64>) -> Result<Self> {
        let t = ProbTable { vars, probs };
        validate_table(&t)?;
        Ok(t)
    }

    /// A single-variable table.
    pub fn single(var: VarId, probs: Vec<f64>) -> Result<Self> {
        Self::new(vec![var], probs)
    }

    /// Point mass on symbol 0 of a cardinality-1 variable.
    pub fn constant(name: &str) -> Self {
        ProbTable { vars: vec![VarId::new(name, 1)], probs: vec![1.0] }
    }

    pub fn uniform(vars: Vec<VarId>) -> Result<Self> {
        let n = cell_count(&vars)?;
        Ok(ProbTable { vars, probs: vec![1.0 / n as f64; n] })
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<&VarId> {
        Ok(&self.vars[self.position(name)?])
    }

    /// Sums out everything except `keep`; the result lists `keep` in the
    /// requested order.
    pub fn marginal(&self, keep: &[&str]) -> Result<ProbTable> {
        let pos = self.positions(keep)?;
        check_distinct(keep)?;
        let probs = self.project(&pos);
        let vars = pos.iter().map(|&p| self.vars[p].clone()).collect();
        Ok(ProbTable { vars, probs })
    }

    fn positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.position(n)).collect()
    }

    /// Marginal probabilities over the variables at `pos`, row-major in that order.
    fn project(&self, pos: &[usize]) -> Vec<f64> {
        let n = self.vars.len();
        let mut stride = vec![0usize; n];
        let mut size = 1usize;
        for &p in pos.iter().rev() {
            stride[p] = size;
            size *= self.vars[p].card;
        }
        let cards: Vec<usize> = self.vars.iter().map(|v| v.card).collect();
        let mut out = vec![0.0; size];
        let mut digits = vec![0usize; n];
        let mut t = 0usize;
        for &p in &self.probs {
            out[t] += p;
            let mut k = n;
            while k > 0 {
                k -= 1;
                digits[k] += 1;
                t += stride[k];
                if digits[k] < cards[k] {
                    break;
                }
                t -= stride[k] * cards[k];
                digits[k] = 0;
            }
        }
        out
    }

    /// Shannon entropy of the marginal on `names`, in nats.
    pub fn entropy(&self, names: &[&str]) -> Result<f64> {
        if names.is_empty() {
            return Ok(0.0);
        }
        check_distinct(names)?;
        let pos = self.positions(names)?;
        Ok(self.project(&pos).iter().map(|&p| plogp(p)).sum::<f64>().max(0.0))
    }

    /// I(A;B|C) in nats.
    pub fn mutual_information(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        mutual_information(self, a, b, c)
    }

    /// Appends the outputs of `kernel`; its inputs must be variables of this
    /// table with matching cardinalities.
    pub fn extend(&self, kernel: &Kernel) -> Result<ProbTable> {
        for o in &kernel.outputs {
            if self.position(&o.name).is_ok() {
                return Err(Error::OverlappingSets(o.name.clone()));
            }
        }
        let in_names: Vec<&str> = kernel.inputs.iter().map(|v| v.name.as_str()).collect();
        let in_pos = self.positions(&in_names)?;
        for (p, v) in in_pos.iter().zip(&kernel.inputs) {
            if self.vars[*p].card != v.card {
                return Err(Error::DimensionMismatch(format!(
                    "kernel input `{}` has cardinality {}, table has {}",
                    v.name, v.card, self.vars[*p].card
                )));
            }
        }
        let mut vars = self.vars.clone();
        vars.extend(kernel.outputs.iter().cloned());
        cell_count(&vars)?;
        let m = kernel.out_size();
        // flat index of the kernel row for each table cell
        let n = self.vars.len();
        let mut stride = vec![0usize; n];
        let mut s = 1usize;
        for &p in in_pos.iter().rev() {
            stride[p] = s;
            s *= self.vars[p].card;
        }
        let cards: Vec<usize> = self.vars.iter().map(|v| v.card).collect();
        let mut probs = Vec::with_capacity(self.probs.len() * m);
        let mut digits = vec![0usize; n];
        let mut row = 0usize;
        for &p in &self.probs {
            let r = &kernel.rows[row * m..(row + 1) * m];
            probs.extend(r.iter().map(|&q| p * q));
            let mut k = n;
            while k > 0 {
                k -= 1;
                digits[k] += 1;
                row += stride[k];
                if digits[k] < cards[k] {
                    break;
                }
                row -= stride[k] * cards[k];
                digits[k] = 0;
            }
        }
        Ok(ProbTable { vars, probs })
    }

    /// Product of independent tables (disjoint variable names).
    pub fn product(&self, other: &ProbTable) -> Result<ProbTable> {
        for v in &other.vars {
            if self.position(&v.name).is_ok() {
                return Err(Error::OverlappingSets(v.name.clone()));
            }
        }
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        cell_count(&vars)?;
        let mut probs = Vec::with_capacity(self.probs.len() * other.probs.len());
        for &p in &self.probs {
            probs.extend(other.probs.iter().map(|&q| p * q));
        }
        Ok(ProbTable { vars, probs })
    }

    /// Renames a variable.
    pub fn rename(mut self, from: &str, to: &str) -> Result<ProbTable> {
        let p = self.position(from)?;
        if from != to && self.position(to).is_ok() {
            return Err(Error::OverlappingSets(to.to_string()));
        }
        self.vars[p].name = to.to_string();
        Ok(self)
    }

    /// Conditional kernel p(outputs | inputs) read off this table; rows with
    /// zero conditioning mass become uniform.
    pub fn conditional(&self, outputs: &[&str], inputs: &[&str]) -> Result<Kernel> {
        let mut all: Vec<&str> = inputs.to_vec();
        all.extend_from_slice(outputs);
        let m = self.marginal(&all)?;
        let in_vars: Vec<VarId> = m.vars[..inputs.len()].to_vec();
        let out_vars: Vec<VarId> = m.vars[inputs.len()..].to_vec();
        let out: usize = out_vars.iter().map(|v| v.card).product();
        let mut rows = m.probs;
        for r in rows.chunks_mut(out) {
            let s: f64 = r.iter().sum();
            if s > 0.0 {
                r.iter_mut().for_each(|q| *q /= s);
            } else {
                r.iter_mut().for_each(|q| *q = 1.0 / out as f64);
            }
        }
        Ok(Kernel { inputs: in_vars, outputs: out_vars, rows })
    }
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

fn check_distinct(names: &[&str]) -> Result<()> {
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(Error::OverlappingSets(a.to_string()));
        }
    }
    Ok(())
}

/// Checks shape, nonnegativity (down to -1e-15) and normalization (1e-12).
pub fn validate_table(t: &ProbTable) -> Result<()> {
    let mut names: Vec<&str> = Vec::new();
    for v in &t.vars {
        if names.contains(&v.name.as_str()) {
            return Err(Error::InvalidVariable(format!("duplicate name `{}`", v.name)));
        }
        names.push(&v.name);
    }
    let n = cell_count(&t.vars)?;
    if n != t.probs.len() {
        return Err(Error::ShapeMismatch { expected: n, found: t.probs.len() });
    }
    if let Some((index, &value)) = t.probs.iter().enumerate().find(|(_, &p)| !(p >= NEG_TOL)) {
        return Err(Error::NegativeMass { index, value });
    }
    let sum: f64 = t.probs.iter().sum();
    if (sum - 1.0).abs() > MASS_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

/// I(A;B|C) = Σ p(a,b,c) ln[p(a,b,c)p(c) / (p(a,c)p(b,c))] in nats, by
/// direct summation over the (A,B,C) marginal. Rounding noise below zero is
/// clamped.
pub fn mutual_information(t: &ProbTable, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
    let mut all: Vec<&str> = Vec::with_capacity(a.len() + b.len() + c.len());
    all.extend_from_slice(a);
    all.extend_from_slice(b);
    all.extend_from_slice(c);
    let pos = t.positions(&all)?;
    check_distinct(&all)?;
    if a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    let size = |r: &[usize]| r.iter().map(|&p| t.vars[p].card).product::<usize>();
    let na = size(&pos[..a.len()]);
    let nb = size(&pos[a.len()..a.len() + b.len()]);
    let nc = size(&pos[a.len() + b.len()..]);
    let pabc = t.project(&pos);
    let mut pac = vec![0.0; na * nc];
    let mut pbc = vec![0.0; nb * nc];
    let mut pc = vec![0.0; nc];
    for ia in 0..na {
        for ib in 0..nb {
            for ic in 0..nc {
                let p = pabc[(ia * nb + ib) * nc + ic];
                pac[ia * nc + ic] += p;
                pbc[ib * nc + ic] += p;
                pc[ic] += p;
            }
        }
    }
    let mut mi = 0.0;
    for ia in 0..na {
        for ib in 0..nb {
            for ic in 0..nc {
                let p = pabc[(ia * nb + ib) * nc + ic];
                if p > 0.0 {
                    mi += p * (p * pc[ic] / (pac[ia * nc + ic] * pbc[ib * nc + ic])).ln();
                }
            }
        }
    }
    debug_assert!(mi > -1e-9, "mutual information {mi} far below zero");
    Ok(mi.max(0.0))
}

/// True iff I(past; future | present) ≤ tol at every cut of `chain`.
pub fn check_markov(t: &ProbTable, chain: &[&str], tol: f64) -> Result<bool> {
    t.positions(chain)?;
    for i in 1..chain.len().saturating_sub(1) {
        if mutual_information(t, &chain[..i], &chain[i + 1..], &chain[i..i + 1])? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Conditional distribution p(outputs | inputs), one row per joint input
/// symbol (row-major over the inputs).
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub inputs: Vec<VarId>,
    pub outputs: Vec<VarId>,
    pub rows: Vec<f64>,
}

impl Kernel {
    pub fn new(inputs: Vec<VarId>, outputs: Vec<VarId>, rows: Vec<f64>) -> Result<Self> {
        let k = Kernel { inputs, outputs, rows };
        k.validate()?;
        Ok(k)
    }

    /// Single-input, single-output kernel from a row-stochastic matrix.
    pub fn matrix(input: VarId, output: VarId, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.card || rows.iter().any(|r| r.len() != output.card) {
            return Err(Error::DimensionMismatch(format!(
                "kernel {}→{} expects {}×{} entries",
                input.name, output.name, input.card, output.card
            )));
        }
        Self::new(vec![input], vec![output], rows.concat())
    }

    pub fn identity(input: VarId, output: VarId) -> Result<Self> {
        let n = input.card;
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self::matrix(input, VarId::new(output.name, n), rows)
    }

    /// Binary symmetric kernel with crossover probability `p`.
    pub fn bsc(input: &str, output: &str, p: f64) -> Result<Self> {
        Self::matrix(
            VarId::new(input, 2),
            VarId::new(output, 2),
            vec![vec![1.0 - p, p], vec![p, 1.0 - p]],
        )
    }

    pub fn in_size(&self) -> usize {
        self.inputs.iter().map(|v| v.card).product()
    }

    pub fn out_size(&self) -> usize {
        self.outputs.iter().map(|v| v.card).product()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.out_size();
        &self.rows[i * m..(i + 1) * m]
    }

    pub fn validate(&self) -> Result<()> {
        let mut all = self.inputs.clone();
        all.extend(self.outputs.iter().cloned());
        let n = cell_count(&all)?;
        if n != self.rows.len() {
            return Err(Error::ShapeMismatch { expected: n, found: self.rows.len() });
        }
        if let Some((index, &value)) = self.rows.iter().enumerate().find(|(_, &p)| !(p >= NEG_TOL)) {
            return Err(Error::NegativeMass { index, value });
        }
        for i in 0..self.in_size() {
            let sum: f64 = self.row(i).iter().sum();
            if (sum - 1.0).abs() > MASS_TOL {
                return Err(Error::NotNormalized { sum });
            }
        }
        Ok(())
    }

    /// Kernel composition p(c|a) = Σ_b p(b|a) p(c|b) for single-stage kernels.
    pub fn then(&self, next: &Kernel) -> Result<Kernel> {
        if self.out_size() != next.in_size() {
            return Err(Error::DimensionMismatch(format!(
                "stage output size {} does not match next input size {}",
                self.out_size(),
                next.in_size()
            )));
        }
        let (n, m, l) = (self.in_size(), self.out_size(), next.out_size());
        let mut rows = vec![0.0; n * l];
        for i in 0..n {
            for j in 0..m {
                let p = self.rows[i * m + j];
                if p != 0.0 {
                    for k in 0..l {
                        rows[i * l + k] += p * next.rows[j * l + k];
                    }
                }
            }
        }
        Ok(Kernel { inputs: self.inputs.clone(), outputs: next.outputs.clone(), rows })
    }

    /// Renames the single output variable.
    pub fn with_output_name(mut self, name: &str) -> Self {
        if let Some(o) = self.outputs.first_mut() {
            o.name = name.to_string();
        }
        self
    }

    pub fn with_input_name(mut self, name: &str) -> Self {
        if let Some(i) = self.inputs.first_mut() {
            i.name = name.to_string();
        }
        self
    }
}
