use super::{BasisDescriptor, HamiltonianMatrix, ModelParams, ScaleNote, SymBuilder};
use crate::{Error, Result};

/// Scaled LMG Hamiltonian `h = H / (2 w j)` on `|j, m>`.
///
/// `gx Jx^2 + gy Jy^2 = (gx + gy)/2 (J^2 - Jz^2) + (gx - gy)/4 (J+^2 + J-^2)`.
pub fn build_lmg(params: &ModelParams) -> Result<HamiltonianMatrix> {
    let ModelParams::Lmg {
        omega,
        gamma_x,
        gamma_y,
        two_j,
    } = *params
    else {
        return Err(Error::InvalidParams("build_lmg needs lmg params".into()));
    };
    params.validate()?;
    let j = two_j.j();
    let tj = two_j.0 as usize;
    let dim = two_j.multiplicity();
    let denom = j * (2.0 * j - 1.0);
    let jj1 = j * (j + 1.0);

    let mut h = SymBuilder::new(dim);
    for i in 0..dim {
        let m = two_j.m_of(i);
        h.add(i, i, m / j + 0.5 * (gamma_x + gamma_y) * (jj1 - m * m) / denom);
        if i + 2 < dim && gamma_x != gamma_y {
            let ladder = (((tj - i) * (i + 1)) as f64).sqrt() * (((tj - i - 1) * (i + 2)) as f64).sqrt();
            h.add(i, i + 2, 0.25 * (gamma_x - gamma_y) * ladder / denom);
        }
    }
    Ok(HamiltonianMatrix {
        matrix: h.finish(),
        basis: BasisDescriptor::Spin { two_j },
        params: *params,
        scale: ScaleNote {
            factor: 2.0 * omega * j,
            note: "stored as H / (2 omega j)".into(),
        },
    })
}
