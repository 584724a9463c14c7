//! Witness collections on disk: compute once, reload, track to a point and
//! reclassify the stored endpoints at other tolerances.

use ml_obstruction::obstruction::{TargetEndpoints, WitnessCollection};
use ml_obstruction::ring::{parse, parse_rational, VariableRing};
use ml_obstruction::systems::VarietySpec;
use ml_obstruction::tracker::TrackerSettings;

fn main() {
    let ring = VariableRing::rational(&["x1", "x2", "x3"]).unwrap();
    let f = parse("(x1-1)^2 - (x2-1)^2*(x3-1)", &ring).unwrap();
    let x = VarietySpec::new(&ring, vec![f], 2).unwrap();
    let dir = std::env::temp_dir().join(format!("mlobs-witness-{}", std::process::id()));

    let wc = WitnessCollection::compute(&x, 2024, &TrackerSettings::default()).unwrap();
    wc.save(&dir).unwrap();
    println!("saved witness degrees {:?} to {}", wc.generic_degrees(), dir.display());

    let wc = WitnessCollection::load(&dir).unwrap();
    let p: Vec<_> = ["1", "1", "1"].iter().map(|s| parse_rational(s).unwrap()).collect();
    let targets = wc.track_to(&p).unwrap();
    let tdir = dir.join("target");
    targets.save(&tdir).unwrap();
    let targets = TargetEndpoints::load(&tdir).unwrap();
    println!("p = (1,1,1)   degrees {:?}  Eu = {}", targets.degrees(), targets.record().euler_obstruction().unwrap());

    for tol in [1e-300, 1e-6, 1e-2, 10.0] {
        println!("tolerance {tol:e}  degrees {:?}", targets.reclassify(tol).degrees());
    }
    std::fs::remove_dir_all(&dir).ok();
}
