use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::{BasisDescriptor, HamiltonianMatrix, ModelParams, ScaleNote, SymBuilder};
use crate::{Error, Result};

// Occupations (n_sigma, n_plus, n_minus).
type Occupation = [u32; 3];
type FockState = BTreeMap<Occupation, f64>;

const SIGMA: usize = 0;
const PLUS: usize = 1;
const MINUS: usize = 2;

/// `coef * a_create^+ a_annihilate`
#[derive(Clone, Copy)]
struct Hop {
    coef: f64,
    create: usize,
    annihilate: usize,
}

fn apply(ops: &[Hop], state: &FockState) -> FockState {
    let mut out = FockState::new();
    for (occ, amp) in state {
        for op in ops {
            let mut o = *occ;
            if o[op.annihilate] == 0 {
                continue;
            }
            let mut c = op.coef * amp * (o[op.annihilate] as f64).sqrt();
            o[op.annihilate] -= 1;
            o[op.create] += 1;
            c *= (o[op.create] as f64).sqrt();
            *out.entry(o).or_insert(0.0) += c;
        }
    }
    out
}

fn dipole_plus() -> [Hop; 2] {
    let s = std::f64::consts::SQRT_2;
    [
        Hop { coef: s, create: PLUS, annihilate: SIGMA },
        Hop { coef: -s, create: SIGMA, annihilate: MINUS },
    ]
}

fn dipole_minus() -> [Hop; 2] {
    let s = std::f64::consts::SQRT_2;
    [
        Hop { coef: -s, create: MINUS, annihilate: SIGMA },
        Hop { coef: s, create: SIGMA, annihilate: PLUS },
    ]
}

fn block_ket(n_total: u32, l: i32, index: usize) -> Occupation {
    let n = l.unsigned_abs() + 2 * index as u32;
    [n_total - n, ((n as i32 + l) / 2) as u32, ((n as i32 - l) / 2) as u32]
}

/// `W^2 = (D+ D- + D- D+)/2 + l^2` on the fixed-`l` block, obtained by
/// acting with the dipole operators on occupation-number states.
pub fn w_squared_block(n_total: u32, l: i32) -> Result<DMatrix<f64>> {
    if l.unsigned_abs() > n_total {
        return Err(Error::InvalidParams(format!("|l| = {} exceeds N = {n_total}", l.abs())));
    }
    let basis = BasisDescriptor::U3Block { n: n_total, l };
    let dim = basis.dim();
    let index_of: BTreeMap<Occupation, usize> =
        (0..dim).map(|k| (block_ket(n_total, l, k), k)).collect();
    let (dp, dm) = (dipole_plus(), dipole_minus());
    let l2 = (l * l) as f64;

    let mut w2 = SymBuilder::new(dim);
    for col in 0..dim {
        let ket: FockState = [(block_ket(n_total, l, col), 1.0)].into_iter().collect();
        let mut image = apply(&dp, &apply(&dm, &ket));
        for (occ, amp) in apply(&dm, &apply(&dp, &ket)) {
            *image.entry(occ).or_insert(0.0) += amp;
        }
        for (occ, amp) in image {
            let row = *index_of
                .get(&occ)
                .expect("W^2 conserves N and l, so its image stays in the block");
            let mut v = 0.5 * amp;
            if row == col {
                v += l2;
            }
            if row <= col && v != 0.0 {
                w2.add(row, col, v);
            }
        }
    }
    Ok(w2.finish())
}

/// 2D vibron Hamiltonian `(1 - xi) n + xi (N(N+1) - W^2)/(N-1)` on the
/// angular-momentum block `l`.
pub fn build_2dvm(params: &ModelParams) -> Result<HamiltonianMatrix> {
    let ModelParams::Vibron2D { xi, n, l } = *params else {
        return Err(Error::InvalidParams("build_2dvm needs vibron2d params".into()));
    };
    params.validate()?;
    let w2 = w_squared_block(n, l)?;
    let dim = w2.nrows();
    let nf = n as f64;
    let casimir = nf * (nf + 1.0);
    let mut h = SymBuilder::new(dim);
    for j in 0..dim {
        for i in 0..=j {
            let mut v = -xi * w2[(i, j)] / (nf - 1.0);
            if i == j {
                let bending = (l.unsigned_abs() + 2 * i as u32) as f64;
                v += (1.0 - xi) * bending + xi * casimir / (nf - 1.0);
            }
            if v != 0.0 {
                h.add(i, j, v);
            }
        }
    }
    Ok(HamiltonianMatrix {
        matrix: h.finish(),
        basis: BasisDescriptor::U3Block { n, l },
        params: *params,
        scale: ScaleNote::identity(),
    })
}
