// Relaxation-time budget of the catalog particles: Brownian and Néel channel
// times plus the effective time in each binding state.
//
// Run:
//   cargo run --release --example relaxation_times

use mpspec::catalog::Catalog;
use mpspec::physics::{
    brownian_time, effective_time, neel_time, BindingState,
};

fn main() {
    let catalog = Catalog::builtin();
    let env = catalog.environment;
    println!(
        "environment: T = {} K, eta = {:.1e} Pa·s (catalog v{})\n",
        env.temperature, env.viscosity, catalog.version
    );
    println!(
        "{:<12} {:>12} {:>14} {:>8} {:>14} {:>14}",
        "particle", "tau_B (s)", "tau_N (s)", "sigma", "tau_unbound", "tau_bound"
    );
    for name in catalog.particle_names() {
        let model = catalog.particle(name).unwrap();
        let tau_b = brownian_time(model, &env);
        match neel_time(model, &env) {
            Ok(neel) => {
                let unbound = effective_time(tau_b, neel.tau, BindingState::Unbound);
                let bound = effective_time(tau_b, neel.tau, BindingState::Bound);
                println!(
                    "{name:<12} {tau_b:>12.3e} {:>14.3e} {:>8.2} {unbound:>14.3e} {bound:>14.3e}",
                    neel.tau, neel.exponent
                );
            }
            Err(err) => println!("{name:<12} {tau_b:>12.3e}  Néel blocked: {err}"),
        }
    }
}
