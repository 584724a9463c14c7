//! ML degrees of small varieties, symbolically and as the level-zero witness
//! degree of the numeric engine.

use ml_obstruction::groebner::GbConfig;
use ml_obstruction::obstruction::WitnessCollection;
use ml_obstruction::ring::{parse, VariableRing};
use ml_obstruction::systems::{ml_degree_symbolic, sample_data, RandomSource, VarietySpec};
use ml_obstruction::tracker::TrackerSettings;

fn main() {
    let cases: [(&str, &[&str], &[&str]); 4] = [
        ("generic line", &["x", "y"], &["2*x + 3*y - 5"]),
        ("circle", &["x", "y"], &["x^2 + y^2 - 1"]),
        ("point (2,3)", &["x", "y"], &["x - 2", "y - 3"]),
        ("sombrilla", &["x1", "x2", "x3"], &["(x1-1)^2 - (x2-1)^2*(x3-1)"]),
    ];
    let cfg = GbConfig::default();
    for (name, vars, gens) in cases {
        let ring = VariableRing::rational(vars).unwrap();
        let gens = gens.iter().map(|g| parse(g, &ring).unwrap()).collect();
        let x = VarietySpec::with_computed_dimension(&ring, gens, &cfg).unwrap();
        let mu = sample_data(vars.len(), 0, &mut RandomSource::new(11));
        let symbolic = ml_degree_symbolic(&x, &mu, &cfg).unwrap();
        let numeric = WitnessCollection::compute(&x, 11, &TrackerSettings::default()).unwrap().generic_degrees()[0];
        println!("{name:<14} dim {}  symbolic {symbolic}  numeric {numeric}", x.dimension());
    }
}
