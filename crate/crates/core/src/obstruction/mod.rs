//! Removal ML degrees at a point and the Euler obstruction they determine.

mod store;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::{GbConfig, GroebnerError};
use crate::ring::{rational_to_f64, Rational};
use crate::systems::{
    lagrange_system, ml_degree_symbolic, removal_variety, sample_data, sample_gamma, DataVector, RandomSource,
    RemovalConfig, SystemError, VarietySpec,
};
use crate::tracker::{
    parameter_track, reclassify, solve_generic, NumericSystem, TrackerError, TrackerSettings, WitnessSet,
};

pub use store::FORMAT_VERSION;

/// Attempts per level before a non-generic data vector is reported.
pub const SYMBOLIC_ATTEMPTS: usize = 3;

#[derive(Debug, Error)]
pub enum ObstructionError {
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("point coordinate {0} is zero; the point must lie in the torus")]
    PointOffTorus(usize),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("level {k}: {source}")]
    Level { k: usize, source: SystemError },
    #[error("level {k}: {source}")]
    Tracking { k: usize, source: TrackerError },
    #[error("removal degrees are incomplete: level {0} is missing")]
    IncompleteRecord(usize),
    #[error("no manifest in {0}")]
    NoManifest(PathBuf),
    #[error("corrupt witness store: {0}")]
    Corrupt(String),
    #[error("witness store format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("i/o error on {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("no target endpoints stored in {0}")]
    NoTargets(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Symbolic,
    Numeric,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Symbolic => "symbolic",
            Engine::Numeric => "numeric",
        })
    }
}

/// Removal ML degrees `r_0..r_{d+1}` of a variety at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalRecord {
    pub point: Vec<Rational>,
    pub dimension: usize,
    pub degrees: BTreeMap<usize, usize>,
    pub engine: Engine,
}

impl RemovalRecord {
    /// Degrees in level order; fails if a level is missing.
    pub fn degree_list(&self) -> Result<Vec<usize>, ObstructionError> {
        (0..=self.dimension + 1)
            .map(|k| self.degrees.get(&k).copied().ok_or(ObstructionError::IncompleteRecord(k)))
            .collect()
    }

    pub fn euler_obstruction(&self) -> Result<i64, ObstructionError> {
        Ok(euler_obstruction(self.dimension, &self.degree_list()?))
    }
}

/// `Eu = (-1)^d Σ_k (-1)^k r_k`.
pub fn euler_obstruction(dimension: usize, degrees: &[usize]) -> i64 {
    let sum: i64 = degrees
        .iter()
        .enumerate()
        .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
        .sum();
    if dimension % 2 == 0 {
        sum
    } else {
        -sum
    }
}

fn check_point<C: crate::ring::Coefficient>(x: &VarietySpec<C>, p: &[Rational]) -> Result<(), ObstructionError> {
    if p.len() != x.ambient_dimension() {
        return Err(ObstructionError::PointLength {
            expected: x.ambient_dimension(),
            got: p.len(),
        });
    }
    if let Some(i) = p.iter().position(Zero::is_zero) {
        return Err(ObstructionError::PointOffTorus(i));
    }
    Ok(())
}

/// Random choices of the symbolic engine, fixed by a seed.
#[derive(Debug, Clone)]
pub struct SymbolicSetup {
    data0: DataVector<Rational>,
    data1: DataVector<Rational>,
    gammas: Vec<Vec<Vec<Rational>>>,
    source: RandomSource,
}

impl SymbolicSetup {
    pub fn new(x: &VarietySpec<Rational>, seed: u64) -> Self {
        let n = x.ambient_dimension();
        let mut source = RandomSource::new(seed);
        let data0 = sample_data(n, 0, &mut source);
        let data1 = sample_data(n, 1, &mut source);
        let gammas = x.levels().map(|k| sample_gamma(k, n, &mut source)).collect();
        Self {
            data0,
            data1,
            gammas,
            source,
        }
    }

    pub fn gamma(&self, k: usize) -> &[Vec<Rational>] {
        &self.gammas[k]
    }
}

/// Removal ML degree at level `k` through the likelihood ideal.
pub fn removal_degree_symbolic(
    x: &VarietySpec<Rational>,
    p: &[Rational],
    k: usize,
    setup: &SymbolicSetup,
    cfg: &GbConfig,
) -> Result<usize, ObstructionError> {
    check_point(x, p)?;
    let level = |e| ObstructionError::Level { k, source: e };
    let removal = RemovalConfig::through_point(setup.gammas[k].clone(), p).map_err(level)?;
    let z = removal_variety(x, &removal).map_err(level)?;
    let mut mu = if k == 0 { setup.data0.clone() } else { setup.data1.clone() };
    let mut source = setup.source.clone();
    let mut attempt = 1;
    loop {
        match ml_degree_symbolic(&z, &mu, cfg) {
            Err(SystemError::Groebner(GroebnerError::NotZeroDimensional(_))) if attempt < SYMBOLIC_ATTEMPTS => {
                attempt += 1;
                mu = sample_data(x.ambient_dimension(), k, &mut source);
            }
            other => return other.map_err(level),
        }
    }
}

/// All removal ML degrees at `p` with the exact engine.
pub fn removal_ml_degrees_symbolic(
    x: &VarietySpec<Rational>,
    p: &[Rational],
    seed: u64,
    cfg: &GbConfig,
) -> Result<RemovalRecord, ObstructionError> {
    check_point(x, p)?;
    let setup = SymbolicSetup::new(x, seed);
    let mut degrees = BTreeMap::new();
    for k in x.levels() {
        degrees.insert(k, removal_degree_symbolic(x, p, k, &setup, cfg)?);
    }
    Ok(RemovalRecord {
        point: p.to_vec(),
        dimension: x.dimension(),
        degrees,
        engine: Engine::Symbolic,
    })
}

/// Per-level data of a witness collection.
#[derive(Debug, Clone)]
pub struct WitnessLevel {
    pub gamma: Vec<Vec<Complex64>>,
    pub system: NumericSystem,
    pub witness: WitnessSet,
}

/// Generic witness sets of all removal levels, reusable for any point.
#[derive(Debug, Clone)]
pub struct WitnessCollection {
    variety: VarietySpec<Rational>,
    seed: u64,
    settings: TrackerSettings,
    data0: DataVector<Complex64>,
    data1: DataVector<Complex64>,
    levels: Vec<WitnessLevel>,
}

impl WitnessCollection {
    /// Samples data, hyperplanes and generic parameters, and solves every
    /// level by total-degree homotopy.
    pub fn compute(x: &VarietySpec<Rational>, seed: u64, settings: &TrackerSettings) -> Result<Self, ObstructionError> {
        let xc = x.to_complex();
        let n = x.ambient_dimension();
        let mut source = RandomSource::new(seed);
        let data0: DataVector<Complex64> = sample_data(n, 0, &mut source);
        let data1: DataVector<Complex64> = sample_data(n, 1, &mut source);
        let mut levels = Vec::new();
        for k in x.levels() {
            let gamma: Vec<Vec<Complex64>> = sample_gamma(k, n, &mut source);
            let mu = if k == 0 { &data0 } else { &data1 };
            let level = |e| ObstructionError::Level { k, source: e };
            let cfg = RemovalConfig::new(gamma.clone(), vec![Complex64::zero(); k]).map_err(level)?;
            let lagrange = lagrange_system(&xc, mu, &cfg).map_err(level)?;
            let tracking = |e| ObstructionError::Tracking { k, source: e };
            let system = NumericSystem::from_removal(&lagrange, &mut source).map_err(tracking)?;
            let mut level_source = RandomSource::new(source.next_seed());
            let witness = solve_generic(&system, &mut level_source, settings).map_err(tracking)?;
            levels.push(WitnessLevel { gamma, system, witness });
        }
        Ok(Self {
            variety: x.clone(),
            seed,
            settings: settings.clone(),
            data0,
            data1,
            levels,
        })
    }

    pub fn variety(&self) -> &VarietySpec<Rational> {
        &self.variety
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn settings(&self) -> &TrackerSettings {
        &self.settings
    }

    pub fn levels(&self) -> &[WitnessLevel] {
        &self.levels
    }

    pub fn data(&self, k: usize) -> &DataVector<Complex64> {
        if k == 0 {
            &self.data0
        } else {
            &self.data1
        }
    }

    /// Witness degrees at the generic parameters.
    pub fn generic_degrees(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.witness.degree()).collect()
    }

    /// Hyperplane offsets `b* = Γ p` of level `k`.
    pub fn target_parameters(&self, k: usize, p: &[Rational]) -> Vec<Complex64> {
        let p: Vec<Complex64> = p.iter().map(|q| Complex64::new(rational_to_f64(q), 0.0)).collect();
        crate::systems::mat_vec(&self.levels[k].gamma, &p)
    }

    /// Moves every level's witness set to the hyperplanes through `p`.
    /// Level 0 has no hyperplanes and keeps its generic witness set.
    pub fn track_to(&self, p: &[Rational]) -> Result<TargetEndpoints, ObstructionError> {
        check_point(&self.variety, p)?;
        let mut sets = Vec::with_capacity(self.levels.len());
        for (k, level) in self.levels.iter().enumerate() {
            if k == 0 {
                sets.push(level.witness.clone());
                continue;
            }
            let target = self.target_parameters(k, p);
            let ws = parameter_track(&level.system, &level.witness, &target, &self.settings)
                .map_err(|e| ObstructionError::Tracking { k, source: e })?;
            sets.push(ws);
        }
        Ok(TargetEndpoints {
            point: p.to_vec(),
            dimension: self.variety.dimension(),
            sets,
        })
    }

    pub fn save(&self, dir: &Path) -> Result<(), ObstructionError> {
        store::save_collection(self, dir)
    }

    pub fn load(dir: &Path) -> Result<Self, ObstructionError> {
        store::load_collection(dir)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        variety: VarietySpec<Rational>,
        seed: u64,
        settings: TrackerSettings,
        data0: DataVector<Complex64>,
        data1: DataVector<Complex64>,
        levels: Vec<WitnessLevel>,
    ) -> Self {
        Self {
            variety,
            seed,
            settings,
            data0,
            data1,
            levels,
        }
    }
}

/// Endpoint sets of all levels at one target point.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetEndpoints {
    pub point: Vec<Rational>,
    pub dimension: usize,
    pub sets: Vec<WitnessSet>,
}

impl TargetEndpoints {
    pub fn degrees(&self) -> Vec<usize> {
        self.sets.iter().map(WitnessSet::degree).collect()
    }

    pub fn record(&self) -> RemovalRecord {
        RemovalRecord {
            point: self.point.clone(),
            dimension: self.dimension,
            degrees: self.degrees().into_iter().enumerate().collect(),
            engine: Engine::Numeric,
        }
    }

    /// Reflags every level at a new tolerance without re-tracking.
    pub fn reclassify(&self, tolerance: f64) -> Self {
        Self {
            point: self.point.clone(),
            dimension: self.dimension,
            sets: self.sets.iter().map(|ws| reclassify(ws, tolerance)).collect(),
        }
    }

    pub fn save(&self, dir: &Path) -> Result<(), ObstructionError> {
        store::save_targets(self, dir)
    }

    pub fn load(dir: &Path) -> Result<Self, ObstructionError> {
        store::load_targets(dir)
    }
}

/// All removal ML degrees at `p` with the numeric engine, from a fresh
/// witness collection.
pub fn removal_ml_degrees_numeric(
    x: &VarietySpec<Rational>,
    p: &[Rational],
    seed: u64,
    settings: &TrackerSettings,
) -> Result<RemovalRecord, ObstructionError> {
    check_point(x, p)?;
    let wc = WitnessCollection::compute(x, seed, settings)?;
    Ok(wc.track_to(p)?.record())
}

/// Per-level comparison of the two engines.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck {
    pub symbolic: RemovalRecord,
    pub numeric: RemovalRecord,
}

impl CrossCheck {
    /// Levels at which the engines disagree.
    pub fn disagreements(&self) -> Vec<usize> {
        self.symbolic
            .degrees
            .iter()
            .filter(|(k, r)| self.numeric.degrees.get(k) != Some(r))
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn agree(&self) -> bool {
        self.disagreements().is_empty() && self.symbolic.degrees.len() == self.numeric.degrees.len()
    }
}

pub fn cross_check(
    x: &VarietySpec<Rational>,
    p: &[Rational],
    seed: u64,
    cfg: &GbConfig,
    settings: &TrackerSettings,
) -> Result<CrossCheck, ObstructionError> {
    Ok(CrossCheck {
        symbolic: removal_ml_degrees_symbolic(x, p, seed, cfg)?,
        numeric: removal_ml_degrees_numeric(x, p, seed, settings)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse, VariableRing};

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn sombrilla() -> VarietySpec<Rational> {
        let r = VariableRing::rational(&["x1", "x2", "x3"]).unwrap();
        let f = parse("(x1-1)^2-(x2-1)^2*(x3-1)", &r).unwrap();
        VarietySpec::new(&r, vec![f], 2).unwrap()
    }

    #[test]
    fn alternating_sums() {
        assert_eq!(euler_obstruction(2, &[3, 10, 9, 1]), 1);
        assert_eq!(euler_obstruction(2, &[3, 10, 10, 1]), 2);
        assert_eq!(euler_obstruction(2, &[3, 10, 10, 3]), 0);
        assert_eq!(euler_obstruction(3, &[0, 16, 31, 18, 2]), 1);
        assert_eq!(euler_obstruction(3, &[0, 16, 31, 16, 1]), 0);
        assert_eq!(euler_obstruction(4, &[0, 16, 47, 49, 21, 2]), 1);
    }

    #[test]
    fn incomplete_records_are_rejected() {
        let rec = RemovalRecord {
            point: vec![q(1)],
            dimension: 1,
            degrees: [(0, 1), (2, 0)].into_iter().collect(),
            engine: Engine::Symbolic,
        };
        assert!(matches!(rec.euler_obstruction(), Err(ObstructionError::IncompleteRecord(1))));
    }

    #[test]
    fn points_outside_the_torus_are_rejected() {
        let x = sombrilla();
        let cfg = GbConfig::default();
        assert!(matches!(
            removal_ml_degrees_symbolic(&x, &[q(1), q(0), q(1)], 1, &cfg),
            Err(ObstructionError::PointOffTorus(1))
        ));
        assert!(matches!(
            removal_ml_degrees_symbolic(&x, &[q(1), q(1)], 1, &cfg),
            Err(ObstructionError::PointLength { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn line_through_a_point_is_smooth() {
        let r = VariableRing::rational(&["x", "y"]).unwrap();
        let x = VarietySpec::new(&r, vec![parse("x + 2*y - 3", &r).unwrap()], 1).unwrap();
        let rec = removal_ml_degrees_symbolic(&x, &[q(1), q(1)], 5, &GbConfig::default()).unwrap();
        assert_eq!(rec.euler_obstruction().unwrap(), 1);
        let off = removal_ml_degrees_symbolic(&x, &[q(2), q(2)], 5, &GbConfig::default()).unwrap();
        assert_eq!(off.euler_obstruction().unwrap(), 0);
    }
}
