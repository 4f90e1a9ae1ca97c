use super::{BasisDescriptor, HamiltonianMatrix, ModelParams, ScaleNote, SymBuilder};
use crate::{Error, Result};

/// IBM-LMG Hamiltonian on `n_t = 0..=N`, with
/// `Q^y = s^+ t + t^+ s + y t^+ t` and the square formed by exact banded
/// products.
pub fn build_ibm_lmg(params: &ModelParams) -> Result<HamiltonianMatrix> {
    let ModelParams::IbmLmg { x, y, n } = *params else {
        return Err(Error::InvalidParams("build_ibm_lmg needs ibm_lmg params".into()));
    };
    params.validate()?;
    let dim = n as usize + 1;
    let nf = n as f64;
    // Q is tridiagonal.
    let q = |a: usize, b: usize| -> f64 {
        if a == b {
            y * a as f64
        } else if a.abs_diff(b) == 1 {
            let k = a.min(b) as f64;
            ((k + 1.0) * (nf - k)).sqrt()
        } else {
            0.0
        }
    };
    let coupling = (1.0 - x) / nf;
    let mut h = SymBuilder::new(dim);
    for a in 0..dim {
        for b in a..(a + 3).min(dim) {
            let lo = b.saturating_sub(1);
            let hi = (a + 1).min(dim - 1);
            let q2: f64 = (lo..=hi).map(|k| q(a, k) * q(k, b)).sum();
            let mut val = -coupling * q2;
            if a == b {
                val += x * a as f64;
            }
            if val != 0.0 {
                h.add(a, b, val);
            }
        }
    }
    Ok(HamiltonianMatrix {
        matrix: h.finish(),
        basis: BasisDescriptor::TwoMode { n },
        params: *params,
        scale: ScaleNote::identity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::lowest_eigenpairs;
    use nalgebra::DMatrix;

    #[test]
    fn decoupled_limit() {
        let h = build_ibm_lmg(&ModelParams::IbmLmg { x: 1.0, y: 0.3, n: 5 }).unwrap();
        assert_eq!(
            h.matrix,
            DMatrix::from_diagonal(&nalgebra::dvector![0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
        );
        let gs = lowest_eigenpairs(&h, 1e-12, 1).unwrap();
        assert_eq!(gs[0].energy, 0.0);
        assert_eq!(gs[0].vector[0], 1.0);
    }

    #[test]
    fn two_by_two_hand_algebra() {
        // N = 1, x = 0, y = 0: Q = [[0,1],[1,0]], H = -Q^2 = -I.
        let h = build_ibm_lmg(&ModelParams::IbmLmg { x: 0.0, y: 0.0, n: 1 }).unwrap();
        assert_eq!(h.matrix, -DMatrix::<f64>::identity(2, 2));
        let e = lowest_eigenpairs(&h, 1e-12, 2).unwrap();
        assert_eq!(e[0].energy, -1.0);
        assert_eq!(e[1].energy, -1.0);
    }

    #[test]
    fn q_squared_matches_dense_product() {
        let (x, y, n) = (0.3, 0.9, 7u32);
        let h = build_ibm_lmg(&ModelParams::IbmLmg { x, y, n }).unwrap();
        let dim = n as usize + 1;
        let mut q = DMatrix::<f64>::zeros(dim, dim);
        for k in 0..dim {
            q[(k, k)] = y * k as f64;
            if k + 1 < dim {
                let v = (((k + 1) * (n as usize - k)) as f64).sqrt();
                q[(k + 1, k)] = v;
                q[(k, k + 1)] = v;
            }
        }
        let nt = DMatrix::from_fn(dim, dim, |a, b| if a == b { a as f64 } else { 0.0 });
        let reference = nt * x - &q * &q * ((1.0 - x) / n as f64);
        assert!((h.matrix.clone() - reference).amax() < 1e-13);
        for a in 0..dim {
            for b in 0..dim {
                if a.abs_diff(b) > 2 {
                    assert_eq!(h.matrix[(a, b)], 0.0);
                }
            }
        }
    }

    #[test]
    fn rejects_x_outside_unit_interval() {
        assert!(build_ibm_lmg(&ModelParams::IbmLmg { x: 1.2, y: 0.0, n: 4 }).is_err());
    }
}
