//! Text-based structured file formats: processes, party unitaries,
//! strategies, and past states. Complex entries are stored as `[re, im]`
//! pairs, row-major; process documents carry the factor layout with roles.

use crate::process::{
    canonical_layout, Instrument, PartySpec, ProcessMatrix, ProcessVector, StrategySpec,
};
use crate::tensor::{C64, CMat, CVec, LabeledOperator, LabeledVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Process(#[from] crate::process::ProcessError),
    #[error(transparent)]
    Tensor(#[from] crate::tensor::TensorError),
}

pub type Result<T> = std::result::Result<T, IoError>;

fn malformed(what: &'static str, detail: impl Into<String>) -> IoError {
    IoError::Malformed {
        what,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorEntry {
    pub label: String,
    pub dim: usize,
    /// `p`, `f`, `in:NAME`, or `out:NAME`
    pub role: String,
}

/// A process vector or matrix on disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProcessFile {
    pub format_version: u32,
    pub layout: Vec<FactorEntry>,
    /// `vector` or `matrix`
    pub kind: String,
    /// row-major complex entries as `[re, im]`
    pub data: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

#[derive(Clone, Debug)]
pub enum ProcessData {
    Vector(ProcessVector),
    Matrix(ProcessMatrix),
}

fn layout_entries(parties: &[PartySpec], p_dim: usize, f_dim: usize) -> Vec<FactorEntry> {
    let mut entries = vec![
        FactorEntry {
            label: "P".into(),
            dim: p_dim,
            role: "p".into(),
        },
        FactorEntry {
            label: "F".into(),
            dim: f_dim,
            role: "f".into(),
        },
    ];
    for p in parties {
        entries.push(FactorEntry {
            label: p.in_label.clone(),
            dim: p.d_in,
            role: format!("in:{}", p.name),
        });
        entries.push(FactorEntry {
            label: p.out_label.clone(),
            dim: p.d_out,
            role: format!("out:{}", p.name),
        });
    }
    entries
}

/// Reads the shape out of a file layout; the canonical order
/// `[p, f, in/out pairs]` is required.
fn parse_layout(layout: &[FactorEntry]) -> Result<(Vec<PartySpec>, usize, usize)> {
    if layout.len() < 2 || !layout.len().is_multiple_of(2) {
        return Err(malformed("layout", "expected p, f and in/out pairs"));
    }
    if layout[0].role != "p" || layout[1].role != "f" {
        return Err(malformed(
            "layout",
            "first two factors must carry roles `p` and `f`",
        ));
    }
    let p_dim = layout[0].dim;
    let f_dim = layout[1].dim;
    let mut parties = Vec::new();
    let mut k = 2;
    while k < layout.len() {
        let in_e = &layout[k];
        let out_e = layout
            .get(k + 1)
            .ok_or_else(|| malformed("layout", "dangling input factor"))?;
        let name = in_e
            .role
            .strip_prefix("in:")
            .ok_or_else(|| malformed("layout", format!("factor {k}: expected role in:NAME")))?;
        let out_name = out_e
            .role
            .strip_prefix("out:")
            .ok_or_else(|| malformed("layout", format!("factor {}: expected role out:NAME", k + 1)))?;
        if name != out_name {
            return Err(malformed(
                "layout",
                format!("mismatched party pair `{name}` vs `{out_name}`"),
            ));
        }
        let mut spec = PartySpec::new(name, in_e.dim, out_e.dim);
        spec.in_label = in_e.label.clone();
        spec.out_label = out_e.label.clone();
        parties.push(spec);
        k += 2;
    }
    Ok((parties, p_dim, f_dim))
}

impl ProcessFile {
    pub fn from_vector(w: &ProcessVector) -> Self {
        let data = w
            .vector()
            .entries()
            .iter()
            .map(|z| [z.re, z.im])
            .collect();
        ProcessFile {
            format_version: FORMAT_VERSION,
            layout: layout_entries(w.parties(), w.p_dim(), w.f_dim()),
            kind: "vector".into(),
            data,
            tolerance: None,
            metadata: serde_json::Map::new(),
        }
    }

    pub fn from_matrix(w: &ProcessMatrix) -> Self {
        let m = w.matrix().entries();
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                data.push([m[(r, c)].re, m[(r, c)].im]);
            }
        }
        ProcessFile {
            format_version: FORMAT_VERSION,
            layout: layout_entries(w.parties(), w.p_dim(), w.f_dim()),
            kind: "matrix".into(),
            data,
            tolerance: None,
            metadata: serde_json::Map::new(),
        }
    }

    pub fn decode(&self) -> Result<ProcessData> {
        if self.format_version != FORMAT_VERSION {
            return Err(malformed(
                "process file",
                format!("unsupported format_version {}", self.format_version),
            ));
        }
        let (parties, p_dim, f_dim) = parse_layout(&self.layout)?;
        let layout = canonical_layout(&parties, p_dim, f_dim);
        let total = layout.total_dim();
        // the file's own labels define the layout; reuse the canonical one
        // only for its dims, which parse_layout already matched
        match self.kind.as_str() {
            "vector" => {
                if self.data.len() != total {
                    return Err(malformed(
                        "process file",
                        format!("vector data has {} entries, expected {total}", self.data.len()),
                    ));
                }
                let entries = CVec::from_iterator(
                    total,
                    self.data.iter().map(|&[re, im]| C64::new(re, im)),
                );
                let v = LabeledVector::new(layout, entries)?;
                Ok(ProcessData::Vector(ProcessVector::new(
                    parties, p_dim, f_dim, v,
                )?))
            }
            "matrix" => {
                if self.data.len() != total * total {
                    return Err(malformed(
                        "process file",
                        format!(
                            "matrix data has {} entries, expected {}",
                            self.data.len(),
                            total * total
                        ),
                    ));
                }
                let entries = CMat::from_fn(total, total, |r, c| {
                    let [re, im] = self.data[r * total + c];
                    C64::new(re, im)
                });
                let m = LabeledOperator::on(layout, entries)?;
                Ok(ProcessData::Matrix(ProcessMatrix::new(
                    parties, p_dim, f_dim, m,
                )?))
            }
            other => Err(malformed("process file", format!("unknown kind `{other}`"))),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Per-party unitaries, e.g. the fixed arguments of a frame extraction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitariesFile {
    pub format_version: u32,
    pub unitaries: Vec<UnitaryEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitaryEntry {
    pub party: String,
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl UnitariesFile {
    pub fn from_ops(parties: &[&str], ops: &[CMat]) -> Self {
        UnitariesFile {
            format_version: FORMAT_VERSION,
            unitaries: parties
                .iter()
                .zip(ops.iter())
                .map(|(p, u)| {
                    let mut data = Vec::with_capacity(u.nrows() * u.ncols());
                    for r in 0..u.nrows() {
                        for c in 0..u.ncols() {
                            data.push([u[(r, c)].re, u[(r, c)].im]);
                        }
                    }
                    UnitaryEntry {
                        party: p.to_string(),
                        dim: u.nrows(),
                        data,
                    }
                })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<Vec<(String, CMat)>> {
        self.unitaries
            .iter()
            .map(|e| {
                if e.data.len() != e.dim * e.dim {
                    return Err(malformed(
                        "unitaries file",
                        format!("party {}: {} entries for dim {}", e.party, e.data.len(), e.dim),
                    ));
                }
                let m = CMat::from_fn(e.dim, e.dim, |r, c| {
                    let [re, im] = e.data[r * e.dim + c];
                    C64::new(re, im)
                });
                Ok((e.party.clone(), m))
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A strategy on disk: per-party, per-setting, per-outcome Choi matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategyFile {
    pub format_version: u32,
    pub parties: Vec<StrategyParty>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategyParty {
    pub party: String,
    pub settings: Vec<StrategySetting>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategySetting {
    pub setting: usize,
    pub outcomes: Vec<StrategyOutcome>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategyOutcome {
    pub outcome: usize,
    pub d_in: usize,
    pub d_out: usize,
    pub data: Vec<[f64; 2]>,
}

impl StrategyFile {
    pub fn from_strategy(names: &[String], strategy: &StrategySpec) -> Self {
        StrategyFile {
            format_version: FORMAT_VERSION,
            parties: strategy
                .instruments
                .iter()
                .zip(names.iter())
                .map(|(per_setting, name)| StrategyParty {
                    party: name.clone(),
                    settings: per_setting
                        .iter()
                        .map(|inst| StrategySetting {
                            setting: inst.setting,
                            outcomes: inst
                                .elements
                                .iter()
                                .enumerate()
                                .map(|(a, m)| {
                                    let q = m.nrows();
                                    let d_in = (q as f64).sqrt().round() as usize;
                                    let mut data = Vec::with_capacity(q * q);
                                    for r in 0..q {
                                        for c in 0..q {
                                            data.push([m[(r, c)].re, m[(r, c)].im]);
                                        }
                                    }
                                    StrategyOutcome {
                                        outcome: a,
                                        d_in,
                                        d_out: q / d_in.max(1),
                                        data,
                                    }
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<StrategySpec> {
        let instruments = self
            .parties
            .iter()
            .map(|p| {
                p.settings
                    .iter()
                    .map(|s| {
                        let elements = s
                            .outcomes
                            .iter()
                            .map(|o| {
                                let q = o.d_in * o.d_out;
                                if o.data.len() != q * q {
                                    return Err(malformed(
                                        "strategy file",
                                        format!(
                                            "party {} setting {} outcome {}: {} entries for dims {}x{}",
                                            p.party, s.setting, o.outcome, o.data.len(), o.d_in, o.d_out
                                        ),
                                    ));
                                }
                                Ok(CMat::from_fn(q, q, |r, c| {
                                    let [re, im] = o.data[r * q + c];
                                    C64::new(re, im)
                                }))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Instrument::new(p.party.clone(), s.setting, elements))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StrategySpec::new(instruments))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A density matrix on the global past, for the `--state` arguments.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_matrix(m: &CMat) -> Self {
        let d = m.nrows();
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                data.push([m[(r, c)].re, m[(r, c)].im]);
            }
        }
        StateFile {
            format_version: FORMAT_VERSION,
            dim: d,
            data,
        }
    }

    pub fn decode(&self) -> Result<CMat> {
        if self.data.len() != self.dim * self.dim {
            return Err(malformed(
                "state file",
                format!("{} entries for dim {}", self.data.len(), self.dim),
            ));
        }
        Ok(CMat::from_fn(self.dim, self.dim, |r, c| {
            let [re, im] = self.data[r * self.dim + c];
            C64::new(re, im)
        }))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
