use qlmbound::problems::{Problem, StateSpec};
use qlmbound::qlm::nonlinear_phase_mismatch;
use qlmbound::scalar::Scalar;
use qlmbound::wkb::{solve_wkb, WkbSolution};
use qlmbound::xprec::Dd;

fn main() {
    let p = Problem::anharmonic5();
    let sol: WkbSolution<Dd> = solve_wkb(&p, &StateSpec::new(0, "1s")).unwrap();
    let kap0 = (Dd::from_f64(2.0) * Dd::from_dd(p.mass) * sol.seed_energy.abs()).sqrt();
    let rm0 = sol.turning.outer().to_f64();
    let e_a = Dd::parse("2.04457965744735563536").unwrap(); // oracle
    let e_b = Dd::parse("2.0445796574473556358827101262990").unwrap(); // phase fixed point
    for (tag, kap, rm) in [
        ("base       ", kap0, rm0),
        ("kappa x2   ", kap0 * Dd::from_f64(2.0), rm0),
        ("kappa x0.51", kap0 * Dd::from_f64(0.51), rm0),
        ("rm = 0.8   ", kap0, 0.8),
        ("rm = 1.1   ", kap0, 1.1),
    ] {
        let ma = nonlinear_phase_mismatch(&p, e_a, kap, rm, 0);
        let mb = nonlinear_phase_mismatch(&p, e_b, kap, rm, 0);
        // Linear root estimate between the two energies.
        let root = e_a - ma * (e_b - e_a) / (mb - ma);
        println!("{tag}: M(Ea) = {:+.3e}  root = {}", ma.hi, root);
    }
}
