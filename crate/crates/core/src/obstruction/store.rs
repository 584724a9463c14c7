//! Witness-collection directories.
//!
//! `manifest.json` holds the variety, seed, settings and every random
//! choice; `witness_k<k>.json` holds the generic endpoints of level `k`, and
//! `target_k<k>.json` the endpoints of the last tracked target point.
//! Floating-point values are decimal strings with 17 significant digits, so
//! they read back bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{ObstructionError, TargetEndpoints, WitnessCollection, WitnessLevel};
use crate::ring::{parse, parse_rational, Rational, VariableRing};
use crate::systems::{lagrange_system, DataVector, RemovalConfig, VarietySpec};
use crate::tracker::{Layout, NumericSystem, PathStatus, TrackedPoint, TrackerSettings, WitnessSet};

pub const FORMAT_VERSION: u32 = 1;

const MANIFEST: &str = "manifest.json";

type Pair = [String; 2];

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn unreal(s: &str) -> Result<f64, ObstructionError> {
    s.parse()
        .map_err(|_| ObstructionError::Corrupt(format!("bad number {s:?}")))
}

fn pair(z: &Complex64) -> Pair {
    [real(z.re), real(z.im)]
}

fn unpair(p: &Pair) -> Result<Complex64, ObstructionError> {
    Ok(Complex64::new(unreal(&p[0])?, unreal(&p[1])?))
}

fn pairs(v: &[Complex64]) -> Vec<Pair> {
    v.iter().map(pair).collect()
}

fn unpairs(v: &[Pair]) -> Result<Vec<Complex64>, ObstructionError> {
    v.iter().map(unpair).collect()
}

#[derive(Serialize, Deserialize)]
struct VarietyText {
    variables: Vec<String>,
    generators: Vec<String>,
    dimension: usize,
}

impl VarietyText {
    fn of(x: &VarietySpec<Rational>) -> Self {
        Self {
            variables: x.ring().names().to_vec(),
            generators: x.generators().iter().map(ToString::to_string).collect(),
            dimension: x.dimension(),
        }
    }

    fn build(&self) -> Result<VarietySpec<Rational>, ObstructionError> {
        let corrupt = |e: &dyn std::fmt::Display| ObstructionError::Corrupt(e.to_string());
        let ring = VariableRing::rational(&self.variables).map_err(|e| corrupt(&e))?;
        let gens = self
            .generators
            .iter()
            .map(|g| parse(g, &ring))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| corrupt(&e))?;
        VarietySpec::new(&ring, gens, self.dimension).map_err(|e| corrupt(&e))
    }
}

#[derive(Serialize, Deserialize)]
struct LevelRecord {
    k: usize,
    gamma: Vec<Vec<Pair>>,
    generic_parameters: Vec<Pair>,
    lambda_patch: Vec<Pair>,
    projective_patch: Vec<Pair>,
    generic_degree: usize,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    variety: VarietyText,
    seed: u64,
    tolerance: f64,
    settings: TrackerSettings,
    data0: Vec<Pair>,
    data1: Vec<Pair>,
    levels: Vec<LevelRecord>,
}

#[derive(Serialize, Deserialize)]
struct PointRecord {
    coordinates: Vec<Pair>,
    status: PathStatus,
    condition: String,
    residual: String,
    polish_step: String,
    multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
struct WitnessRecord {
    k: usize,
    layout: Layout,
    parameters: Vec<Pair>,
    tolerance: f64,
    condition_limit: f64,
    degree: usize,
    flags: Vec<bool>,
    points: Vec<PointRecord>,
}

impl WitnessRecord {
    fn of(ws: &WitnessSet) -> Self {
        Self {
            k: ws.k,
            layout: ws.layout,
            parameters: pairs(&ws.parameters),
            tolerance: ws.tolerance,
            condition_limit: ws.condition_limit,
            degree: ws.degree(),
            flags: ws.flags.clone(),
            points: ws
                .points
                .iter()
                .map(|p| PointRecord {
                    coordinates: pairs(&p.coordinates),
                    status: p.status,
                    condition: real(p.condition),
                    residual: real(p.residual),
                    polish_step: real(p.polish_step),
                    multiplicity: p.multiplicity,
                })
                .collect(),
        }
    }

    fn build(&self) -> Result<WitnessSet, ObstructionError> {
        let points = self
            .points
            .iter()
            .map(|p| {
                Ok(TrackedPoint {
                    coordinates: unpairs(&p.coordinates)?,
                    status: p.status,
                    condition: unreal(&p.condition)?,
                    residual: unreal(&p.residual)?,
                    polish_step: unreal(&p.polish_step)?,
                    multiplicity: p.multiplicity,
                })
            })
            .collect::<Result<Vec<_>, ObstructionError>>()?;
        if points.iter().any(|p| p.coordinates.len() != self.layout.len()) {
            return Err(ObstructionError::Corrupt(format!("level {}: coordinate count", self.k)));
        }
        let ws = WitnessSet::new(
            self.k,
            self.layout,
            unpairs(&self.parameters)?,
            points,
            self.tolerance,
            self.condition_limit,
        );
        if ws.flags != self.flags {
            return Err(ObstructionError::Corrupt(format!(
                "level {}: stored flags do not match the endpoints",
                self.k
            )));
        }
        Ok(ws)
    }
}

#[derive(Serialize, Deserialize)]
struct TargetRecord {
    format_version: u32,
    point: Vec<String>,
    dimension: usize,
    witness: WitnessRecord,
}

fn io_err(path: &Path, e: std::io::Error) -> ObstructionError {
    ObstructionError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Writes through a temporary file and a rename.
fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), ObstructionError> {
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let text = serde_json::to_string_pretty(value).expect("plain data serializes");
    fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ObstructionError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| ObstructionError::Corrupt(format!("{}: {e}", path.display())))
}

fn witness_name(k: usize) -> String {
    format!("witness_k{k}.json")
}

fn target_name(k: usize) -> String {
    format!("target_k{k}.json")
}

pub(super) fn save_collection(wc: &WitnessCollection, dir: &Path) -> Result<(), ObstructionError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (k, level) in wc.levels.iter().enumerate() {
        write_json(dir, &witness_name(k), &WitnessRecord::of(&level.witness))?;
    }
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        variety: VarietyText::of(&wc.variety),
        seed: wc.seed,
        tolerance: wc.settings.tolerance,
        settings: wc.settings.clone(),
        data0: pairs(wc.data0.entries()),
        data1: pairs(wc.data1.entries()),
        levels: wc
            .levels
            .iter()
            .enumerate()
            .map(|(k, l)| LevelRecord {
                k,
                gamma: l.gamma.iter().map(|r| pairs(r)).collect(),
                generic_parameters: pairs(&l.witness.parameters),
                lambda_patch: pairs(l.system.lambda_patch()),
                projective_patch: pairs(l.system.projective_patch()),
                generic_degree: l.witness.degree(),
            })
            .collect(),
    };
    // the manifest goes last so a complete manifest implies complete levels
    write_json(dir, MANIFEST, &manifest)
}

fn read_manifest(dir: &Path) -> Result<Manifest, ObstructionError> {
    let path = dir.join(MANIFEST);
    if !path.is_file() {
        return Err(ObstructionError::NoManifest(dir.to_path_buf()));
    }
    let raw: serde_json::Value = read_json(&path)?;
    let found = raw
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| ObstructionError::Corrupt("manifest lacks format_version".into()))? as u32;
    if found != FORMAT_VERSION {
        return Err(ObstructionError::VersionMismatch {
            found,
            expected: FORMAT_VERSION,
        });
    }
    serde_json::from_value(raw).map_err(|e| ObstructionError::Corrupt(format!("manifest: {e}")))
}

pub(super) fn load_collection(dir: &Path) -> Result<WitnessCollection, ObstructionError> {
    let m = read_manifest(dir)?;
    let variety = m.variety.build()?;
    if m.levels.len() != variety.dimension() + 2 {
        return Err(ObstructionError::Corrupt("level count does not match the dimension".into()));
    }
    let xc = variety.to_complex();
    let corrupt = |e: &dyn std::fmt::Display| ObstructionError::Corrupt(e.to_string());
    let data0 = DataVector::new(unpairs(&m.data0)?).map_err(|e| corrupt(&e))?;
    let data1 = DataVector::new(unpairs(&m.data1)?).map_err(|e| corrupt(&e))?;
    let mut levels = Vec::with_capacity(m.levels.len());
    for (k, rec) in m.levels.iter().enumerate() {
        if rec.k != k {
            return Err(ObstructionError::Corrupt(format!("level {k} out of order")));
        }
        let gamma = rec.gamma.iter().map(|r| unpairs(r)).collect::<Result<Vec<_>, _>>()?;
        let cfg = RemovalConfig::new(gamma.clone(), vec![Complex64::new(0.0, 0.0); k]).map_err(|e| corrupt(&e))?;
        let mu = if k == 0 { &data0 } else { &data1 };
        let lagrange = lagrange_system(&xc, mu, &cfg).map_err(|e| corrupt(&e))?;
        let system = NumericSystem::with_patches(&lagrange, unpairs(&rec.lambda_patch)?, unpairs(&rec.projective_patch)?)
            .map_err(|e| corrupt(&e))?;
        let witness = read_json::<WitnessRecord>(&dir.join(witness_name(k)))?.build()?;
        if witness.degree() != rec.generic_degree || witness.k != k {
            return Err(ObstructionError::Corrupt(format!(
                "level {k}: witness degree {} but manifest says {}",
                witness.degree(),
                rec.generic_degree
            )));
        }
        levels.push(WitnessLevel { gamma, system, witness });
    }
    Ok(WitnessCollection::from_parts(
        variety,
        m.seed,
        m.settings,
        data0,
        data1,
        levels,
    ))
}

pub(super) fn save_targets(t: &TargetEndpoints, dir: &Path) -> Result<(), ObstructionError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (k, ws) in t.sets.iter().enumerate() {
        let rec = TargetRecord {
            format_version: FORMAT_VERSION,
            point: t.point.iter().map(ToString::to_string).collect(),
            dimension: t.dimension,
            witness: WitnessRecord::of(ws),
        };
        write_json(dir, &target_name(k), &rec)?;
    }
    Ok(())
}

pub(super) fn load_targets(dir: &Path) -> Result<TargetEndpoints, ObstructionError> {
    let mut sets = Vec::new();
    let mut header: Option<(Vec<String>, usize)> = None;
    for k in 0.. {
        let path: PathBuf = dir.join(target_name(k));
        if !path.is_file() {
            break;
        }
        let rec: TargetRecord = read_json(&path)?;
        if rec.format_version != FORMAT_VERSION {
            return Err(ObstructionError::VersionMismatch {
                found: rec.format_version,
                expected: FORMAT_VERSION,
            });
        }
        match &header {
            None => header = Some((rec.point.clone(), rec.dimension)),
            Some(h) if *h != (rec.point.clone(), rec.dimension) => {
                return Err(ObstructionError::Corrupt(format!("{} belongs to another point", path.display())));
            }
            Some(_) => {}
        }
        sets.push(rec.witness.build()?);
    }
    let Some((point, dimension)) = header else {
        return Err(ObstructionError::NoTargets(dir.to_path_buf()));
    };
    if sets.len() != dimension + 2 {
        return Err(ObstructionError::Corrupt(format!(
            "{} target levels for dimension {dimension}",
            sets.len()
        )));
    }
    let point = point
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<Rational>, _>>()
        .map_err(|e| ObstructionError::Corrupt(e.to_string()))?;
    Ok(TargetEndpoints { point, dimension, sets })
}
