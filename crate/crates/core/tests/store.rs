use ml_obstruction::obstruction::{ObstructionError, TargetEndpoints, WitnessCollection};
use ml_obstruction::ring::{parse, parse_rational, Rational, VariableRing};
use ml_obstruction::systems::VarietySpec;
use ml_obstruction::tracker::TrackerSettings;

fn sombrilla() -> VarietySpec<Rational> {
    let ring = VariableRing::rational(&["x1", "x2", "x3"]).unwrap();
    let f = parse("(x1-1)^2 - (x2-1)^2*(x3-1)", &ring).unwrap();
    VarietySpec::new(&ring, vec![f], 2).unwrap()
}

fn ones() -> Vec<Rational> {
    vec![parse_rational("1").unwrap(); 3]
}

#[test]
fn saved_collection_tracks_like_the_original() {
    let wc = WitnessCollection::compute(&sombrilla(), 2024, &TrackerSettings::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    wc.save(dir.path()).unwrap();
    let back = WitnessCollection::load(dir.path()).unwrap();

    assert_eq!(back.generic_degrees(), [3, 10, 10, 3]);
    assert_eq!(back.generic_degrees(), wc.generic_degrees());
    assert_eq!(back.seed(), wc.seed());
    for k in 0..=3 {
        assert_eq!(back.data(k), wc.data(k));
    }
    assert_eq!(back.track_to(&ones()).unwrap().degrees(), [3, 10, 9, 1]);
}

#[test]
fn target_endpoints_round_trip() {
    let wc = WitnessCollection::compute(&sombrilla(), 2024, &TrackerSettings::default()).unwrap();
    let targets = wc.track_to(&ones()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    targets.save(dir.path()).unwrap();
    let back = TargetEndpoints::load(dir.path()).unwrap();
    assert_eq!(back.degrees(), targets.degrees());
    for tol in [1e-300, 1e-6, 1.0] {
        assert_eq!(back.reclassify(tol).degrees(), targets.reclassify(tol).degrees());
    }
}

#[test]
fn reclassify_is_idempotent_and_monotone() {
    let wc = WitnessCollection::compute(&sombrilla(), 2024, &TrackerSettings::default()).unwrap();
    let targets = wc.track_to(&ones()).unwrap();
    let mut previous: Option<Vec<usize>> = None;
    for tol in [1e-300, 1e-12, 1e-6, 1e-3, 1e-1, 10.0] {
        let once = targets.reclassify(tol);
        assert_eq!(once.reclassify(tol).degrees(), once.degrees());
        if let Some(prev) = &previous {
            assert!(once.degrees().iter().zip(prev).all(|(a, b)| a <= b));
        }
        previous = Some(once.degrees());
    }
    assert_eq!(previous.unwrap(), [0, 0, 0, 0]);
}

#[test]
fn empty_directory_has_no_manifest() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(WitnessCollection::load(dir.path()), Err(ObstructionError::NoManifest(_))));
    assert!(matches!(TargetEndpoints::load(dir.path()), Err(ObstructionError::NoTargets(_))));
}
