use super::{BasisDescriptor, HamiltonianMatrix, ModelParams, ScaleNote, SymBuilder};
use crate::{Error, Result};

/// Dicke Hamiltonian on `|n> (x) |j, m>`, `n <= n_max`, index
/// `n (2j + 1) + (j + m)`.
pub fn build_dicke(params: &ModelParams, n_max: usize) -> Result<HamiltonianMatrix> {
    let ModelParams::Dicke {
        omega0,
        omega,
        lambda,
        two_j,
    } = *params
    else {
        return Err(Error::InvalidParams("build_dicke needs dicke params".into()));
    };
    params.validate()?;
    let mult = two_j.multiplicity();
    let tj = two_j.0 as usize;
    let dim = (n_max + 1) * mult;
    let g = lambda / (two_j.0 as f64).sqrt();
    let idx = |n: usize, i: usize| n * mult + i;

    let mut h = SymBuilder::new(dim);
    for n in 0..=n_max {
        for i in 0..mult {
            h.add(idx(n, i), idx(n, i), omega0 * two_j.m_of(i) + omega * n as f64);
            if n == n_max || g == 0.0 {
                continue;
            }
            let field = ((n + 1) as f64).sqrt();
            // J+ : i -> i + 1 with sqrt((2j - i)(i + 1))
            if i < tj {
                let el = g * field * (((tj - i) * (i + 1)) as f64).sqrt();
                h.add(idx(n, i), idx(n + 1, i + 1), el);
            }
            // J- : i -> i - 1 with sqrt(i (2j - i + 1))
            if i > 0 {
                let el = g * field * ((i * (tj - i + 1)) as f64).sqrt();
                h.add(idx(n, i), idx(n + 1, i - 1), el);
            }
        }
    }
    Ok(HamiltonianMatrix {
        matrix: h.finish(),
        basis: BasisDescriptor::DickeProduct { n_max, two_j },
        params: *params,
        scale: ScaleNote::identity(),
    })
}

/// Initial field cutoff `ceil(2j (w0/w)(lambda/lambda_c)^2 + 10)`.
pub fn dicke_seed_cutoff(params: &ModelParams) -> Result<usize> {
    let ModelParams::Dicke {
        omega0,
        omega,
        lambda,
        two_j,
    } = *params
    else {
        return Err(Error::InvalidParams("dicke_seed_cutoff needs dicke params".into()));
    };
    let lambda_c = 0.5 * (omega * omega0).sqrt();
    let ratio = lambda / lambda_c;
    Ok((two_j.0 as f64 * (omega0 / omega) * ratio * ratio + 10.0).ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::TwoJ;

    fn dicke(lambda: f64, two_j: u32) -> ModelParams {
        ModelParams::Dicke {
            omega0: 1.0,
            omega: 1.0,
            lambda,
            two_j: TwoJ(two_j),
        }
    }

    #[test]
    fn decoupled_limit_is_diagonal() {
        let h = build_dicke(&dicke(0.0, 4), 6).unwrap();
        let m = &h.matrix;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    assert_eq!(m[(i, j)], 0.0);
                }
            }
        }
        let min = m.diagonal().iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, -2.0);
        assert_eq!(m[(0, 0)], -2.0);
    }

    #[test]
    fn ladder_matrix_element() {
        // j = 1, n = 0, m = -1, lambda = 1: (1/sqrt2) * 1 * sqrt2 = 1
        let h = build_dicke(&dicke(1.0, 2), 3).unwrap();
        let from = 0; // (n=0, m=-1)
        let to = 3 + 1; // (n=1, m=0)
        assert!((h.matrix[(to, from)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coupling_pattern_and_parity() {
        let h = build_dicke(&dicke(0.7, 5), 5).unwrap();
        let s = h.parity_signs().unwrap();
        let mult = 6;
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                let v = h.matrix[(i, j)];
                assert_eq!(v.to_bits(), h.matrix[(j, i)].to_bits());
                assert_eq!(s[i] * v * s[j], v);
                if v != 0.0 && i != j {
                    let dn = (i / mult).abs_diff(j / mult);
                    let dm = (i % mult).abs_diff(j % mult);
                    assert_eq!((dn, dm), (1, 1));
                }
            }
        }
    }

    #[test]
    fn seed_cutoff() {
        assert_eq!(dicke_seed_cutoff(&dicke(1.0, 20)).unwrap(), 90);
        assert_eq!(dicke_seed_cutoff(&dicke(0.0, 20)).unwrap(), 10);
    }
}
