//! Homotopy continuation on its own: a total-degree solve at generic
//! parameters, then a parameter homotopy to a chosen target.

use ml_obstruction::ring::{parse, VariableRing};
use ml_obstruction::systems::RandomSource;
use ml_obstruction::tracker::{parameter_track, solve_generic, NumericSystem, TrackerSettings};
use num_complex::Complex64;

fn main() {
    // x^2 + y^2 = b, x*y = 1 ; two unknowns, one parameter
    let ring = VariableRing::complex(&["x", "y", "b"]).unwrap();
    let polys: Vec<_> = ["x^2 + y^2 - b", "x*y - 1"].iter().map(|e| parse(e, &ring).unwrap()).collect();
    let mut source = RandomSource::new(3);
    let sys = NumericSystem::plain(&polys, 2, &mut source).unwrap();
    let settings = TrackerSettings::default();
    println!("Bezout count {}", sys.square().bezout_count());

    let generic = solve_generic(&sys, &mut source, &settings).unwrap();
    println!("generic b = {:.3}: {} regular roots", generic.parameters[0], generic.degree());

    for b in [5.0, 2.0] {
        let ws = parameter_track(&sys, &generic, &[Complex64::new(b, 0.0)], &settings).unwrap();
        println!("b = {b}: degree {}", ws.degree());
        for (p, counted) in ws.points.iter().zip(&ws.flags) {
            println!(
                "  ({:.6}, {:.6})  {:?}  cond {:.1e}  counted {counted}",
                p.coordinates[0], p.coordinates[1], p.status, p.condition
            );
        }
    }
}
