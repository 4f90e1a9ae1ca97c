//! Fixtures shared by the criterion benches.

use wehrl_qpt::hamiltonians::{solve_ground_state, SolveSettings};
use wehrl_qpt::{GroundState, ModelParams, TwoJ};

/// Representative ground state of each model near its critical point.
pub fn critical_ground_states() -> Vec<(&'static str, GroundState)> {
    let settings = SolveSettings::default();
    let cases = [
        ("cusp", ModelParams::Cusp { u: -1.0, v: 0.0, k: 0.1 }),
        (
            "dicke",
            ModelParams::Dicke {
                omega0: 1.0,
                omega: 1.0,
                lambda: 0.6,
                two_j: TwoJ(10),
            },
        ),
        (
            "lmg",
            ModelParams::Lmg {
                omega: 0.5,
                gamma_x: -1.0,
                gamma_y: 3.0,
                two_j: TwoJ(40),
            },
        ),
        ("ibm_lmg", ModelParams::IbmLmg { x: 0.8, y: 0.0, n: 80 }),
        ("vibron2d", ModelParams::Vibron2D { xi: 0.2, n: 16, l: 0 }),
    ];
    cases
        .into_iter()
        .map(|(name, p)| (name, solve_ground_state(&p, &settings).expect("bench fixture converges")))
        .collect()
}
