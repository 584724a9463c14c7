//! Removal ML degrees and Euler obstruction of the Whitney sombrilla
//! `(x1-1)^2 - (x2-1)^2 (x3-1)` at four points, with both engines.

use std::time::Instant;

use ml_obstruction::groebner::GbConfig;
use ml_obstruction::obstruction::{removal_ml_degrees_symbolic, WitnessCollection};
use ml_obstruction::ring::{parse, parse_rational, VariableRing};
use ml_obstruction::systems::VarietySpec;
use ml_obstruction::tracker::TrackerSettings;

fn main() {
    let ring = VariableRing::rational(&["x1", "x2", "x3"]).unwrap();
    let f = parse("(x1-1)^2 - (x2-1)^2*(x3-1)", &ring).unwrap();
    let x = VarietySpec::new(&ring, vec![f], 2).unwrap();
    let points = ["3,2,1", "3,3,2", "1,1,2", "1,1,1"];
    let seed = 2024;

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
        let clock = Instant::now();
        let symbolic = removal_ml_degrees_symbolic(&x, &p, seed, &GbConfig::default()).unwrap();
        println!(
            "p = ({text})  symbolic {:?}  Eu = {}  ({:.1?})",
            symbolic.degree_list().unwrap(),
            symbolic.euler_obstruction().unwrap(),
            clock.elapsed()
        );
    }
}
