//! Causally ordered processes: channels with memory.

use crate::process::{reconstruct_process, PartySpec, ProcessError, ProcessVector};
use crate::tensor::CMat;

use super::Result;

/// The pure process of the chain
/// `G(U₁,…,U_N) = V_N (id_M ⊗ U_N) V_{N-1} ⋯ (id_M ⊗ U₁) V₀`
/// on memory ⊗ system, with `links.len() - 1` parties acting on the system
/// wire. Party names run A, B, C, … in chain order.
pub fn causal_chain(links: &[CMat], d_sys: usize, d_mem: usize) -> Result<ProcessVector> {
    if links.len() < 2 {
        return Err(ProcessError::Dimensions(
            "a chain needs at least two fixed links (one party)".into(),
        ));
    }
    let n = links.len() - 1;
    if n > 26 {
        return Err(ProcessError::Dimensions("too many parties".into()));
    }
    let d = d_sys * d_mem;
    for (k, v) in links.iter().enumerate() {
        if v.nrows() != d || v.ncols() != d {
            return Err(ProcessError::Dimensions(format!(
                "link {k} is {}x{}, expected {d}x{d}",
                v.nrows(),
                v.ncols()
            )));
        }
    }
    let parties: Vec<PartySpec> = (0..n)
        .map(|k| PartySpec::new(((b'A' + k as u8) as char).to_string(), d_sys, d_sys))
        .collect();
    let id_m = CMat::identity(d_mem, d_mem);
    let links = links.to_vec();
    reconstruct_process(
        move |ops: &[CMat]| {
            let mut g = links[0].clone();
            for (k, u) in ops.iter().enumerate() {
                g = &links[k + 1] * id_m.kronecker(u) * g;
            }
            g
        },
        &parties,
        d,
    )
}
