//! Removal ML degrees of the 3x3 Hankel determinant hypersurfaces with the
//! numeric engine. Pass `x2` as the first argument for the five-variable
//! matrix, and `--symbolic` to run the exact engine as well (slow).

use std::time::Instant;

use ml_obstruction::groebner::GbConfig;
use ml_obstruction::obstruction::{removal_ml_degrees_symbolic, WitnessCollection};
use ml_obstruction::ring::{parse, parse_rational, VariableRing};
use ml_obstruction::systems::VarietySpec;
use ml_obstruction::tracker::TrackerSettings;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let second = args.iter().any(|a| a == "x2");
    let symbolic = args.iter().any(|a| a == "--symbolic");
    let (names, det, points): (&[&str], &str, [&str; 3]) = if second {
        (
            &["x1", "x2", "x3", "x4", "x5"],
            "x1*(x4 - x5^2) - x2*(x2 - x3*x5) + x3*(x2*x5 - x3*x4)",
            // (1,1,1,1,2) is not on the determinant; (1,1,1,2,1) is a smooth point
            ["1,2,3,5,7", "1,1,1,2,1", "1,1,1,1,1"],
        )
    } else {
        (
            &["x1", "x2", "x3", "x4"],
            "x1*(x3 - x4^2) - x2*(x2 - x3*x4) + x3*(x2*x4 - x3^2)",
            ["7,5,3,2", "2,1,1,1", "1,1,1,1"],
        )
    };
    let ring = VariableRing::rational(names).unwrap();
    let f = parse(det, &ring).unwrap();
    let x = VarietySpec::new(&ring, vec![f], names.len() - 1).unwrap();
    let seed = 7;

    let clock = Instant::now();
    let wc = WitnessCollection::compute(&x, seed, &TrackerSettings::default()).unwrap();
    println!("generic witness degrees {:?} ({:.1?})", wc.generic_degrees(), clock.elapsed());

    for text in points {
        let p: Vec<_> = text.split(',').map(|s| parse_rational(s).unwrap()).collect();
        let clock = Instant::now();
        let numeric = wc.track_to(&p).unwrap().record();
        println!(
            "p = ({text})  numeric  {:?}  Eu = {}  ({:.1?})",
            numeric.degree_list().unwrap(),
            numeric.euler_obstruction().unwrap(),
            clock.elapsed()
        );
        if symbolic {
            let clock = Instant::now();
            let record = removal_ml_degrees_symbolic(&x, &p, seed, &GbConfig::default()).unwrap();
            println!(
                "p = ({text})  symbolic {:?}  Eu = {}  ({:.1?})",
                record.degree_list().unwrap(),
                record.euler_obstruction().unwrap(),
                clock.elapsed()
            );
        }
    }
}
