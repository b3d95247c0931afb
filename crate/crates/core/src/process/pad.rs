//! Dimension padding: enlarges mismatched party input/output spaces with
//! maximally entangled pairs linking fresh past/future factors to fresh
//! primed party factors, so every party ends up with equal dimensions.

use crate::tensor::{entangled_pair, LabeledOperator};

use super::{canonical_layout, PartySpec, ProcessMatrix, Result};

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// A padded process together with the bookkeeping needed to trace the
/// padding back out.
#[derive(Clone, Debug)]
pub struct PaddedProcess {
    pub matrix: ProcessMatrix,
    original_parties: Vec<PartySpec>,
    original_p: usize,
    original_f: usize,
    /// per original party: (input-pad dim, output-pad dim)
    pad_dims: Vec<(usize, usize)>,
}

impl ProcessMatrix {
    /// Tensor on `|id⟩⟩⟨⟨id|` pairs so each party has equal in/out dims:
    /// a fresh past factor entangled with the party's primed input and a
    /// fresh primed output entangled with a fresh future factor. A process
    /// with already-equal dimensions is returned unchanged.
    pub fn pad_dimensions(&self) -> Result<PaddedProcess> {
        let pad_dims: Vec<(usize, usize)> = self
            .parties()
            .iter()
            .map(|p| {
                let l = lcm(p.d_in, p.d_out);
                (l / p.d_in, l / p.d_out)
            })
            .collect();

        if pad_dims.iter().all(|&(i, o)| i == 1 && o == 1) {
            return Ok(PaddedProcess {
                matrix: self.clone(),
                original_parties: self.parties().to_vec(),
                original_p: self.p_dim(),
                original_f: self.f_dim(),
                pad_dims,
            });
        }

        let mut full = self.matrix().clone();
        for (party, &(di, dout)) in self.parties().iter().zip(pad_dims.iter()) {
            let p_pad = format!("P~{}", party.name);
            let i_pad = format!("{}~", party.in_label);
            let o_pad = format!("{}~", party.out_label);
            let f_pad = format!("F~{}", party.name);
            full = full.kron(&entangled_pair(&p_pad, &i_pad, di))?;
            full = full.kron(&entangled_pair(&o_pad, &f_pad, dout))?;
        }

        // order: P, its pads, F, its pads, then per party (in, in-pad, out, out-pad)
        let mut order: Vec<String> = vec![super::P_LABEL.to_string()];
        for p in self.parties() {
            order.push(format!("P~{}", p.name));
        }
        order.push(super::F_LABEL.to_string());
        for p in self.parties() {
            order.push(format!("F~{}", p.name));
        }
        for p in self.parties() {
            order.push(p.in_label.clone());
            order.push(format!("{}~", p.in_label));
            order.push(p.out_label.clone());
            order.push(format!("{}~", p.out_label));
        }
        let order_refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
        let full = full.permute_factors(&order_refs)?;

        let n = self.parties().len();
        let mut groups: Vec<(&str, usize)> = vec![(super::P_LABEL, 1 + n), (super::F_LABEL, 1 + n)];
        let new_parties: Vec<PartySpec> = self
            .parties()
            .iter()
            .map(|p| {
                let l = lcm(p.d_in, p.d_out);
                PartySpec::new(p.name.clone(), l, l)
            })
            .collect();
        for p in &new_parties {
            groups.push((p.in_label.as_str(), 2));
            groups.push((p.out_label.as_str(), 2));
        }
        let merged = full.merge_consecutive_factors(&groups)?;

        let new_p = self.p_dim() * pad_dims.iter().map(|&(i, _)| i).product::<usize>();
        let new_f = self.f_dim() * pad_dims.iter().map(|&(_, o)| o).product::<usize>();
        let matrix = ProcessMatrix::new(new_parties, new_p, new_f, merged)?;
        Ok(PaddedProcess {
            matrix,
            original_parties: self.parties().to_vec(),
            original_p: self.p_dim(),
            original_f: self.f_dim(),
            pad_dims,
        })
    }
}

impl PaddedProcess {
    /// Traces the padding factors back out (and divides by their pair
    /// dimensions), recovering the original process exactly.
    pub fn recover(&self) -> Result<ProcessMatrix> {
        if self.pad_dims.iter().all(|&(i, o)| i == 1 && o == 1) {
            return Ok(self.matrix.clone());
        }
        // rebuild the fine-grained layout that merging coarsened
        let mut fine: Vec<(String, usize)> =
            vec![(super::P_LABEL.to_string(), self.original_p)];
        for (p, &(di, _)) in self.original_parties.iter().zip(self.pad_dims.iter()) {
            fine.push((format!("P~{}", p.name), di));
        }
        fine.push((super::F_LABEL.to_string(), self.original_f));
        for (p, &(_, dout)) in self.original_parties.iter().zip(self.pad_dims.iter()) {
            fine.push((format!("F~{}", p.name), dout));
        }
        for (p, &(di, dout)) in self.original_parties.iter().zip(self.pad_dims.iter()) {
            fine.push((p.in_label.clone(), p.d_in));
            fine.push((format!("{}~", p.in_label), di));
            fine.push((p.out_label.clone(), p.d_out));
            fine.push((format!("{}~", p.out_label), dout));
        }
        let fine_pairs: Vec<(&str, usize)> = fine.iter().map(|(l, d)| (l.as_str(), *d)).collect();
        let fine_layout = crate::tensor::SpaceLayout::of(&fine_pairs);
        let fine_op: LabeledOperator = self
            .matrix
            .matrix()
            .with_layouts(fine_layout.clone(), fine_layout)?;

        let pad_labels: Vec<String> = self
            .original_parties
            .iter()
            .flat_map(|p| {
                vec![
                    format!("P~{}", p.name),
                    format!("F~{}", p.name),
                    format!("{}~", p.in_label),
                    format!("{}~", p.out_label),
                ]
            })
            .collect();
        let pad_refs: Vec<&str> = pad_labels.iter().map(|s| s.as_str()).collect();
        let traced = fine_op.partial_trace(&pad_refs)?;

        let scale: f64 = self
            .pad_dims
            .iter()
            .map(|&(i, o)| (i * o) as f64)
            .product();
        let rescaled = traced.scale(crate::tensor::C64::new(1.0 / scale, 0.0));

        // traced factors leave [P, F, in₁, out₁, …] in canonical order
        let canonical = canonical_layout(&self.original_parties, self.original_p, self.original_f);
        let op = rescaled.with_layouts(canonical.clone(), canonical)?;
        ProcessMatrix::new(
            self.original_parties.clone(),
            self.original_p,
            self.original_f,
            op,
        )
    }
}
