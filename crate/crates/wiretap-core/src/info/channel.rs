use super::table::{check_markov, Kernel, ProbTable, VarId};
use crate::error::{Error, Result};

/// Default names of the three channel outputs: two legitimate receivers and
/// the eavesdropper.
pub const OUTPUT_NAMES: [&str; 3] = ["Y1", "Y2", "Z"];
const MARKOV_TOL: f64 = 1e-10;

/// How the transition law p(y1,y2,z|x) is stored.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelKernel {
    /// Full joint kernel over (Y1,Y2,Z).
    Joint(Kernel),
    /// Degraded cascade p(y1|x) p(y2|y1) p(z|y2); never materialized unless asked.
    Cascade([Kernel; 3]),
}

/// A discrete memoryless channel with input X and outputs (Y1, Y2, Z).
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpec {
    pub input: VarId,
    pub outputs: [VarId; 3],
    pub kernel: ChannelKernel,
    pub degraded_flag: Option<bool>,
}

impl ChannelSpec {
    /// Channel from a full joint kernel whose rows are flattened over
    /// (y1, y2, z). The degraded flag is computed under a uniform input.
    pub fn from_joint(input: VarId, outputs: [VarId; 3], rows: Vec<f64>) -> Result<Self> {
        let k = Kernel::new(vec![input.clone()], outputs.to_vec(), rows)?;
        let mut ch = ChannelSpec { input, outputs, kernel: ChannelKernel::Joint(k), degraded_flag: None };
        ch.degraded_flag = Some(ch.markov_under_uniform()?);
        Ok(ch)
    }

    /// Product channel p(y1|x)p(y2|x)p(z|x): outputs conditionally independent.
    pub fn from_marginals(k1: &Kernel, k2: &Kernel, kz: &Kernel) -> Result<Self> {
        let input = k1.inputs[0].clone();
        for k in [k2, kz] {
            if k.inputs[0].card != input.card {
                return Err(Error::DimensionMismatch("marginal kernels disagree on |X|".into()));
            }
        }
        let outs = [k1.outputs[0].clone(), k2.outputs[0].clone(), kz.outputs[0].clone()];
        let (a, b, c) = (outs[0].card, outs[1].card, outs[2].card);
        let mut rows = Vec::with_capacity(input.card * a * b * c);
        for x in 0..input.card {
            for i in 0..a {
                for j in 0..b {
                    for l in 0..c {
                        rows.push(k1.row(x)[i] * k2.row(x)[j] * kz.row(x)[l]);
                    }
                }
            }
        }
        let names = OUTPUT_NAMES;
        let outs = [0, 1, 2].map(|i| VarId::new(names[i], outs[i].card));
        Self::from_joint(VarId::new("X", input.card), outs, rows)
    }

    fn markov_under_uniform(&self) -> Result<bool> {
        let joint = self.compose(&ProbTable::uniform(vec![self.input.clone()])?)?;
        let chain = [self.input.name.as_str(), &self.outputs[0].name, &self.outputs[1].name, &self.outputs[2].name];
        check_markov(&joint, &chain, MARKOV_TOL)
    }

    /// Whether X → Y1 → Y2 → Z holds.
    pub fn is_degraded(&self) -> Result<bool> {
        match (&self.kernel, self.degraded_flag) {
            (ChannelKernel::Cascade(_), _) => Ok(true),
            (_, Some(f)) => Ok(f),
            _ => self.markov_under_uniform(),
        }
    }

    /// Marginal kernel p(y_j | x) for j = 0 (Y1), 1 (Y2), 2 (Z).
    pub fn output_kernel(&self, j: usize) -> Result<Kernel> {
        match &self.kernel {
            ChannelKernel::Cascade(ks) => {
                let mut k = ks[0].clone();
                for next in &ks[1..=j] {
                    k = k.then(next)?;
                }
                Ok(k)
            }
            ChannelKernel::Joint(k) => {
                let t = ProbTable::uniform(vec![self.input.clone()])?.extend(k)?;
                t.conditional(&[&self.outputs[j].name], &[&self.input.name])
            }
        }
    }

    /// The full joint kernel p(y1,y2,z|x) (subject to the dense cell cap).
    pub fn joint_kernel(&self) -> Result<Kernel> {
        match &self.kernel {
            ChannelKernel::Joint(k) => Ok(k.clone()),
            ChannelKernel::Cascade([k1, k2, k3]) => {
                let t = ProbTable::uniform(vec![self.input.clone()])?
                    .extend(k1)?
                    .extend(k2)?
                    .extend(k3)?;
                let names: Vec<&str> = self.outputs.iter().map(|v| v.name.as_str()).collect();
                t.conditional(&names, &[&self.input.name])
            }
        }
    }

    /// Joint of `aux` (which must contain the input variable) with all three outputs.
    pub fn compose(&self, aux: &ProbTable) -> Result<ProbTable> {
        match &self.kernel {
            ChannelKernel::Joint(k) => aux.extend(k),
            ChannelKernel::Cascade([k1, k2, k3]) => aux.extend(k1)?.extend(k2)?.extend(k3),
        }
    }

    /// Joint of `aux` with the single output j only.
    pub fn compose_output(&self, aux: &ProbTable, j: usize) -> Result<ProbTable> {
        aux.extend(&self.output_kernel(j)?)
    }
}

/// Cascades three single-stage kernels into a degraded channel
/// p(y1,y2,z|x) = p(y1|x) p(y2|y1) p(z|y2). Variables are renamed to
/// X, Y1, Y2, Z.
pub fn build_degraded_joint(p_y1_x: &Kernel, p_y2_y1: &Kernel, p_z_y2: &Kernel) -> Result<ChannelSpec> {
    for k in [p_y1_x, p_y2_y1, p_z_y2] {
        if k.inputs.len() != 1 || k.outputs.len() != 1 {
            return Err(Error::DimensionMismatch("cascade stages must be single-variable kernels".into()));
        }
        k.validate()?;
    }
    if p_y1_x.out_size() != p_y2_y1.in_size() || p_y2_y1.out_size() != p_z_y2.in_size() {
        return Err(Error::DimensionMismatch(format!(
            "cascade stages {}→{}, {}→{}, {}→{} do not chain",
            p_y1_x.in_size(),
            p_y1_x.out_size(),
            p_y2_y1.in_size(),
            p_y2_y1.out_size(),
            p_z_y2.in_size(),
            p_z_y2.out_size()
        )));
    }
    let k1 = p_y1_x.clone().with_input_name("X").with_output_name("Y1");
    let k2 = p_y2_y1.clone().with_input_name("Y1").with_output_name("Y2");
    let k3 = p_z_y2.clone().with_input_name("Y2").with_output_name("Z");
    let input = k1.inputs[0].clone();
    let outputs = [k1.outputs[0].clone(), k2.outputs[0].clone(), k3.outputs[0].clone()];
    Ok(ChannelSpec { input, outputs, kernel: ChannelKernel::Cascade([k1, k2, k3]), degraded_flag: Some(true) })
}
