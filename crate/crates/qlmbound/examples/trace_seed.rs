use qlmbound::problems::{Problem, StateSpec};
use qlmbound::scalar::Scalar;
use qlmbound::wkb::{langer_seed, solve_wkb, WkbSolution};
use qlmbound::xprec::Dd;

fn main() {
    let p = Problem::anharmonic5();
    let spec = StateSpec::new(0, "1s");
    let sol: WkbSolution<Dd> = solve_wkb(&p, &spec).unwrap();
    let seed = langer_seed(&p, &sol, 0).unwrap();
    println!("E_seed = {:e}", sol.seed_energy.hi);
    println!("match_index = {}, derivative_jump = {:.3e}", seed.match_index, seed.derivative_jump);
    println!("r(match) = {:.8}", seed.grid[seed.match_index].to_f64());
    let kap = (Dd::from_f64(2.0) * Dd::from_dd(p.mass) * sol.seed_energy.abs()).sqrt();
    // raw phase + derivative of phase between samples around the regions of interest
    for (lo, hi) in [(1.297_f64, 1.305), (2.775, 2.79)] {
        println!("-- region {lo}..{hi}");
        let mut prev_u: Option<f64> = None;
        for i in 0..seed.grid.len() {
            let r = seed.grid[i].to_f64();
            if r < lo || r > hi { continue; }
            let raw = (-(kap * seed.chi[i])).atan2(seed.dchi[i]).to_f64();
            let du = prev_u.map(|pu| raw - pu).unwrap_or(0.0);
            println!("i={i} r={r:.8} chi={:+.6e} dchi={:+.6e} raw_u={raw:+.9} d_raw={du:+.3e}", seed.chi[i].to_f64(), seed.dchi[i].to_f64());
            prev_u = Some(raw);
        }
    }
}
