//! Instruments, strategies, and the generalised Born rule.

use crate::tensor::{C64, CMat, LabeledOperator, SpaceLayout};
use crate::DEFAULT_TOL;

use super::{choi_link, PartySpec, ProcessError, ProcessMatrix, Result, P_LABEL};

/// One party's instrument at one setting: completely positive Choi operators
/// on `in ⊗ out`, one per outcome, summing to a CPTP Choi.
#[derive(Clone, Debug)]
pub struct Instrument {
    pub party: String,
    pub setting: usize,
    pub elements: Vec<CMat>,
}

impl Instrument {
    pub fn new(party: impl Into<String>, setting: usize, elements: Vec<CMat>) -> Self {
        Self {
            party: party.into(),
            setting,
            elements,
        }
    }

    /// Each element PSD; the sum's output partial trace equals the input
    /// identity.
    pub fn check(&self, spec: &PartySpec, tol: f64) -> Result<()> {
        let q = spec.d_in * spec.d_out;
        if self.elements.is_empty() {
            return Err(ProcessError::BadInstrument(format!(
                "party {} setting {}: no outcomes",
                self.party, self.setting
            )));
        }
        let layout = SpaceLayout::of(&[("in", spec.d_in), ("out", spec.d_out)]);
        let mut sum = CMat::zeros(q, q);
        for (a, m) in self.elements.iter().enumerate() {
            if m.nrows() != q || m.ncols() != q {
                return Err(ProcessError::BadInstrument(format!(
                    "party {} setting {} outcome {a}: shape {}x{}, expected {q}x{q}",
                    self.party,
                    self.setting,
                    m.nrows(),
                    m.ncols()
                )));
            }
            let op = LabeledOperator::on(layout.clone(), m.clone())?;
            if !op.is_psd(tol.max(1e-8)) {
                return Err(ProcessError::BadInstrument(format!(
                    "party {} setting {} outcome {a}: element not PSD (margin {:.3e})",
                    self.party,
                    self.setting,
                    op.psd_margin()
                )));
            }
            sum += m;
        }
        let sum_op = LabeledOperator::on(layout, sum)?;
        let tr_out = sum_op.partial_trace(&["out"])?;
        let resid = (tr_out.entries() - CMat::identity(spec.d_in, spec.d_in)).norm();
        if resid > tol.max(1e-8) * (1.0 + spec.d_in as f64) {
            return Err(ProcessError::BadInstrument(format!(
                "party {} setting {}: sum not trace-preserving (residual {resid:.3e})",
                self.party, self.setting
            )));
        }
        Ok(())
    }
}

/// Per-party, per-setting instruments.
#[derive(Clone, Debug)]
pub struct StrategySpec {
    /// `instruments[party][setting]`
    pub instruments: Vec<Vec<Instrument>>,
}

impl StrategySpec {
    pub fn new(instruments: Vec<Vec<Instrument>>) -> Self {
        Self { instruments }
    }

    pub fn n_parties(&self) -> usize {
        self.instruments.len()
    }

    pub fn check(&self, parties: &[PartySpec], tol: f64) -> Result<()> {
        if self.instruments.len() != parties.len() {
            return Err(ProcessError::BadInstrument(format!(
                "strategy covers {} parties, process has {}",
                self.instruments.len(),
                parties.len()
            )));
        }
        for (per_setting, spec) in self.instruments.iter().zip(parties.iter()) {
            if per_setting.is_empty() {
                return Err(ProcessError::BadInstrument(format!(
                    "party {}: no settings",
                    spec.name
                )));
            }
            for inst in per_setting {
                inst.check(spec, tol)?;
            }
        }
        Ok(())
    }
}

/// Joint outcome distribution `p(a₁…a_N | x₁…x_N)` with marginalisation
/// support.
#[derive(Clone, Debug)]
pub struct CorrelationTensor {
    outcome_arities: Vec<usize>,
    setting_arities: Vec<usize>,
    /// row-major: settings multi-index outer, outcomes inner
    probs: Vec<f64>,
    pub worst_normalization_residual: f64,
}

impl CorrelationTensor {
    /// Builds a tensor from raw probabilities (settings multi-index outer,
    /// outcomes inner, both row-major).
    pub fn from_probabilities(
        outcome_arities: Vec<usize>,
        setting_arities: Vec<usize>,
        probs: Vec<f64>,
    ) -> Result<Self> {
        let expect: usize = outcome_arities.iter().product::<usize>()
            * setting_arities.iter().product::<usize>();
        if probs.len() != expect {
            return Err(ProcessError::Dimensions(format!(
                "probability table has {} entries, expected {expect}",
                probs.len()
            )));
        }
        let o_total: usize = outcome_arities.iter().product();
        let mut worst = 0.0f64;
        for chunk in probs.chunks(o_total.max(1)) {
            let sum: f64 = chunk.iter().sum();
            worst = worst.max((sum - 1.0).abs());
        }
        Ok(Self {
            outcome_arities,
            setting_arities,
            probs,
            worst_normalization_residual: worst,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.outcome_arities.len()
    }

    pub fn outcome_arities(&self) -> &[usize] {
        &self.outcome_arities
    }

    pub fn setting_arities(&self) -> &[usize] {
        &self.setting_arities
    }

    fn outcome_index(&self, outcomes: &[usize]) -> usize {
        outcomes
            .iter()
            .zip(self.outcome_arities.iter())
            .fold(0usize, |acc, (&a, &n)| acc * n + a)
    }

    fn setting_index(&self, settings: &[usize]) -> usize {
        settings
            .iter()
            .zip(self.setting_arities.iter())
            .fold(0usize, |acc, (&x, &n)| acc * n + x)
    }

    pub fn prob(&self, outcomes: &[usize], settings: &[usize]) -> f64 {
        let o_total: usize = self.outcome_arities.iter().product();
        self.probs[self.setting_index(settings) * o_total + self.outcome_index(outcomes)]
    }

    /// Marginal over every party not listed: `Σ p(a|x)` with the outcomes of
    /// `parties` fixed to `outcomes` and all settings fixed to `settings`.
    pub fn marginal(&self, parties: &[usize], outcomes: &[usize], settings: &[usize]) -> f64 {
        assert_eq!(parties.len(), outcomes.len());
        let n = self.n_parties();
        let free: Vec<usize> = (0..n).filter(|k| !parties.contains(k)).collect();
        let free_sizes: Vec<usize> = free.iter().map(|&k| self.outcome_arities[k]).collect();
        let mut total = 0.0;
        let mut a = vec![0usize; n];
        for (&k, &v) in parties.iter().zip(outcomes.iter()) {
            a[k] = v;
        }
        super::for_each_tuple::<std::convert::Infallible>(&free_sizes, |t| {
            for (slot, &k) in free.iter().enumerate() {
                a[k] = t[slot];
            }
            total += self.prob(&a, settings);
            Ok(())
        })
        .unwrap();
        total
    }

    pub fn all_nonnegative(&self, tol: f64) -> bool {
        self.probs.iter().all(|&p| p >= -tol)
    }
}

fn state_check(rho: &CMat, dim: usize, tol: f64) -> Result<()> {
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(ProcessError::NotAState(format!(
            "shape {}x{}, expected {dim}x{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let op = LabeledOperator::on(SpaceLayout::of(&[("p", dim)]), rho.clone())?;
    if !op.is_psd(tol.max(1e-8)) {
        return Err(ProcessError::NotAState(format!(
            "not PSD (margin {:.3e})",
            op.psd_margin()
        )));
    }
    if (rho.trace() - C64::new(1.0, 0.0)).norm() > tol.max(1e-8) * 10.0 {
        return Err(ProcessError::NotAState(format!(
            "trace {} != 1",
            rho.trace()
        )));
    }
    Ok(())
}

/// Outcome probabilities for all settings tuples:
/// `G_{a|x} = tr_parties(W^{T_parties}·⊗ₖ M_{aₖ|xₖ})`, then
/// `p(a|x) = tr[G_{a|x}·(ρ_P^{T_P} ⊗ id_F)]`.
pub fn correlations(
    w: &ProcessMatrix,
    strategy: &StrategySpec,
    rho_p: &CMat,
) -> Result<CorrelationTensor> {
    strategy.check(w.parties(), DEFAULT_TOL)?;
    state_check(rho_p, w.p_dim(), DEFAULT_TOL)?;

    let n = w.parties().len();
    let setting_arities: Vec<usize> = strategy.instruments.iter().map(|s| s.len()).collect();
    let outcome_arities: Vec<usize> = strategy
        .instruments
        .iter()
        .map(|s| s[0].elements.len())
        .collect();
    for per_setting in &strategy.instruments {
        if per_setting
            .iter()
            .any(|inst| inst.elements.len() != per_setting[0].elements.len())
        {
            return Err(ProcessError::BadInstrument(
                "outcome count must not vary across settings".into(),
            ));
        }
    }

    let o_total: usize = outcome_arities.iter().product();
    let s_total: usize = setting_arities.iter().product();
    let mut probs = vec![0.0f64; s_total * o_total];
    let mut worst_norm = 0.0f64;

    let mut settings_list: Vec<Vec<usize>> = Vec::with_capacity(s_total);
    super::for_each_tuple::<std::convert::Infallible>(&setting_arities, |x| {
        settings_list.push(x.to_vec());
        Ok(())
    })
    .unwrap();

    for x in &settings_list {
        // depth-first over outcomes, contracting one party per level
        let mut sum_p = 0.0f64;
        let base = {
            let mut idx = 0usize;
            for (k, &xi) in x.iter().enumerate() {
                idx = idx * setting_arities[k] + xi;
            }
            idx * o_total
        };
        #[allow(clippy::too_many_arguments)]
        fn dfs(
            g: &LabeledOperator,
            level: usize,
            w: &ProcessMatrix,
            strategy: &StrategySpec,
            x: &[usize],
            outcome_arities: &[usize],
            a_prefix: &mut Vec<usize>,
            rho_p: &CMat,
            probs: &mut [f64],
            base: usize,
            sum_p: &mut f64,
        ) -> Result<()> {
            if level == w.parties().len() {
                let y = choi_link(g, &[P_LABEL], rho_p)?;
                let p = y.trace().re;
                let mut o_idx = 0usize;
                for (k, &a) in a_prefix.iter().enumerate() {
                    o_idx = o_idx * outcome_arities[k] + a;
                }
                probs[base + o_idx] = p;
                *sum_p += p;
                return Ok(());
            }
            let spec = &w.parties()[level];
            let labels = [spec.in_label.as_str(), spec.out_label.as_str()];
            let inst = &strategy.instruments[level][x[level]];
            for (a, m) in inst.elements.iter().enumerate() {
                let next = choi_link(g, &labels, m)?;
                a_prefix.push(a);
                dfs(
                    &next,
                    level + 1,
                    w,
                    strategy,
                    x,
                    outcome_arities,
                    a_prefix,
                    rho_p,
                    probs,
                    base,
                    sum_p,
                )?;
                a_prefix.pop();
            }
            Ok(())
        }
        let mut a_prefix = Vec::with_capacity(n);
        dfs(
            w.matrix(),
            0,
            w,
            strategy,
            x,
            &outcome_arities,
            &mut a_prefix,
            rho_p,
            &mut probs,
            base,
            &mut sum_p,
        )?;
        worst_norm = worst_norm.max((sum_p - 1.0).abs());
    }

    Ok(CorrelationTensor {
        outcome_arities,
        setting_arities,
        probs,
        worst_normalization_residual: worst_norm,
    })
}
