use heiscone::verify::*;
use std::time::Instant;
fn main() {
    let cfg = RunConfig::default();
    let pat = std::env::args().nth(1);
    for c in select(pat.as_deref()).unwrap() {
        let t = Instant::now();
        let e = run_check(c, &cfg);
        println!("{:45} {:5} n={:5} max={:.3e} tol={:.0e} {:.2}s {:?}", e.check, e.pass, e.samples, e.max_residual, e.tolerance, t.elapsed().as_secs_f64(), e.error);
    }
}
