//! Scratch probe for acceptance stragglers. Deleted before commit.

use groverian::mixed_measure::{
    ensemble_to_density, fidelity_objective, groverian_mixed, MixedConfig, SeparableEnsemble,
};
use groverian::pure_measure::{grid_oracle_pure, p_max_pure, PureConfig};
use groverian::qstate::random::{haar_state, rng_for};
use groverian::qstate::{density_of, fidelity};

fn main() {
    // mixed/pure case 7
    let mut rng = rng_for(500, 7);
    let psi = haar_state(2, &mut rng);
    let pure_cfg = PureConfig::default();
    let gp = p_max_pure(&psi, &pure_cfg).unwrap();
    let rho = density_of(&psi);
    let mixed_cfg = MixedConfig::default();
    let gm = groverian_mixed(&rho, &mixed_cfg).unwrap();
    println!(
        "case7: G_pure={:.9} p_max={:.9}  G_mixed={:.9} F={:.9} conv={}",
        gp.g, gp.p_max, gm.g, gm.p_max, gm.converged
    );
    let claimed = fidelity_objective(&rho, &gm.best).unwrap();
    let cross = fidelity(&rho, &ensemble_to_density(&gm.best)).unwrap();
    println!(
        "case7: claimed objective={claimed:.9}  independent fidelity={cross:.9}"
    );

    // separable n=3 case 3 (acceptance recipe: one rng per n, sequential draws)
    let mut rng = rng_for(600, 3);
    for i in 0..4usize {
        let e = SeparableEnsemble::random(3, 2 + (i % 4), &mut rng);
        if i == 3 {
            let rho = ensemble_to_density(&e);
            let r = groverian_mixed(&rho, &mixed_cfg).unwrap();
            println!(
                "sep n=3 i=3: G={:.3e} F={:.12} conv={} terms={}",
                r.g,
                r.p_max,
                r.converged,
                r.best.num_terms()
            );
        }
    }

    // n=2 grid case 4
    let mut rng = rng_for(302, 4);
    let psi = haar_state(2, &mut rng);
    let fast = p_max_pure(&psi, &pure_cfg).unwrap().p_max;
    let grid = grid_oracle_pure(&psi, 32).unwrap();
    println!("grid n=2 case4: optimizer={fast:.9} grid={grid:.9} diff={:+.3e}", fast - grid);
}
