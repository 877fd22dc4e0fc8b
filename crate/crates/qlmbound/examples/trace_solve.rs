use qlmbound::problems::{Problem, StateSpec};
use qlmbound::qlm::{solve_state, QlmOptions, QlmSolution};
use qlmbound::xprec::Dd;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("harmonic");
    let n: u32 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0);
    let (p, spec) = match which {
        "harmonic" => (Problem::harmonic(n % 2 == 0), StateSpec::new(n / 2, "t")),
        other => (
            Problem::builtin(other, "1s", None).unwrap().0,
            StateSpec::new(n, "t"),
        ),
    };
    let mut opts = QlmOptions::default();
    if let Ok(ppr) = std::env::var("QLM_PPR") { opts.points_per_radian = ppr.parse().unwrap(); }
    let sol: QlmSolution<Dd> = solve_state(&p, &spec, &opts).unwrap();
    println!("E_wkb  = {:e}", sol.wkb_energy.hi);
    println!("E_qlm1 = {:e}", sol.qlm1().hi);
    for (i, (e, d)) in sol.energies.iter().zip(&sol.defects).enumerate() {
        println!("iter {}: E = {:e}  defect = {:.3e}", i + 1, e.hi, d);
    }
    println!("E_final = {}", sol.energy());
}
