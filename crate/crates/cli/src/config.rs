//! Run configuration: line-oriented `key = value` sections, strict about
//! unknown keys so typos fail loudly instead of silently using defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use spintransfer::{EngineeredChainSpec, ParabolicChainSpec, TridiagonalOperator};

use crate::Failure;

/// Sections and keys the parser accepts. A config may carry sections a
/// command does not use (so one file can drive several commands), but a key
/// unknown to its section is always an error.
const KNOWN: &[(&str, &[&str])] = &[
    (
        "model",
        &[
            "type", "n", "k", "half_length", "distance", "margin", "width", "lambda", "b0",
            "coupling", "diagonal", "offdiagonal",
        ],
    ),
    ("sweep", &["lambda_min", "lambda_max", "points", "refine", "samples", "t_max", "margin"]),
    ("curve", &["samples", "t_max"]),
    ("evolve", &["site", "time"]),
    ("tolerances", &["tol", "max_integer"]),
    ("output", &["format", "path"]),
];

pub struct RunConfig {
    sections: BTreeMap<String, BTreeMap<String, String>>,
    /// Directory of the config file; relative data paths resolve against it.
    base_dir: PathBuf,
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read config {}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base_dir)
    }

    fn parse(text: &str, base_dir: PathBuf) -> Result<Self, Failure> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim().to_ascii_lowercase();
                if !KNOWN.iter().any(|(s, _)| *s == name) {
                    return Err(bad(format!("line {}: unknown section [{name}]", lineno + 1)));
                }
                sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(bad(format!("line {}: expected `key = value`, got `{line}`", lineno + 1)));
            };
            let Some(section) = current.as_ref() else {
                return Err(bad(format!("line {}: key before any [section]", lineno + 1)));
            };
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim().to_string();
            let allowed = KNOWN.iter().find(|(s, _)| s == section).map(|(_, ks)| *ks).unwrap();
            if !allowed.contains(&key.as_str()) {
                return Err(bad(format!("line {}: unknown key `{key}` in [{section}]", lineno + 1)));
            }
            if sections.get_mut(section).unwrap().insert(key.clone(), value).is_some() {
                return Err(bad(format!("line {}: duplicate key `{key}` in [{section}]", lineno + 1)));
            }
        }
        Ok(Self { sections, base_dir })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section).and_then(|s| s.get(key)).map(String::as_str)
    }

    pub fn f64(&self, section: &str, key: &str) -> Result<Option<f64>, Failure> {
        self.get(section, key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| bad(format!("[{section}] {key}: invalid number `{v}`")))
            })
            .transpose()
    }

    pub fn usize(&self, section: &str, key: &str) -> Result<Option<usize>, Failure> {
        self.get(section, key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| bad(format!("[{section}] {key}: invalid integer `{v}`")))
            })
            .transpose()
    }

    pub fn u64(&self, section: &str, key: &str) -> Result<Option<u64>, Failure> {
        self.get(section, key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| bad(format!("[{section}] {key}: invalid integer `{v}`")))
            })
            .transpose()
    }

    pub fn bool(&self, section: &str, key: &str) -> Result<Option<bool>, Failure> {
        self.get(section, key)
            .map(|v| match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(bad(format!("[{section}] {key}: expected true or false, got `{v}`"))),
            })
            .transpose()
    }

    pub fn model(&self) -> Result<Model, Failure> {
        let kind = self
            .get("model", "type")
            .ok_or_else(|| bad("missing [model] type (engineered, parabolic, or custom)"))?;
        match kind {
            "engineered" => {
                let n = self
                    .usize("model", "n")?
                    .ok_or_else(|| bad("engineered model needs [model] n"))?;
                let k = self.usize("model", "k")?.unwrap_or(0);
                Ok(Model::Engineered(EngineeredChainSpec::new(n, k)?))
            }
            "parabolic" => {
                let width = self
                    .f64("model", "width")?
                    .ok_or_else(|| bad("parabolic model needs [model] width"))?;
                let coupling = self.f64("model", "coupling")?.unwrap_or(1.0);
                let geometry = match (self.usize("model", "half_length")?, self.usize("model", "distance")?) {
                    (Some(_), Some(_)) => {
                        return Err(bad("[model] give either half_length or distance, not both"))
                    }
                    (Some(m), None) => {
                        if self.get("model", "margin").is_some() {
                            return Err(bad("[model] margin only applies to distance geometry"));
                        }
                        Geometry::HalfLength(m)
                    }
                    (None, Some(l)) => Geometry::Distance {
                        distance: l,
                        margin: self.usize("model", "margin")?.unwrap_or(20),
                    },
                    (None, None) => {
                        return Err(bad("parabolic model needs [model] half_length or distance"))
                    }
                };
                let field = match (self.f64("model", "lambda")?, self.f64("model", "b0")?) {
                    (Some(_), Some(_)) => {
                        return Err(bad("[model] give either lambda or b0, not both"))
                    }
                    (Some(l), None) => Some(Field::Lambda(l)),
                    (None, Some(b)) => Some(Field::B0(b)),
                    (None, None) => None,
                };
                Ok(Model::Parabolic(ParabolicParams { geometry, width, field, coupling }))
            }
            "custom" => {
                let offdiag_path = self
                    .get("model", "offdiagonal")
                    .ok_or_else(|| bad("custom model needs [model] offdiagonal = <file>"))?;
                let offdiagonal = read_column(&self.resolve(offdiag_path), "offdiagonal")?;
                if offdiagonal.is_empty() {
                    return Err(bad("offdiagonal file has no entries; need a chain of 2+ sites"));
                }
                let diagonal = match self.get("model", "diagonal") {
                    Some(p) => {
                        let d = read_column(&self.resolve(p), "diagonal")?;
                        if d.len() != offdiagonal.len() + 1 {
                            return Err(bad(format!(
                                "diagonal has {} entries but offdiagonal {} needs {}",
                                d.len(),
                                offdiagonal.len(),
                                offdiagonal.len() + 1
                            )));
                        }
                        d
                    }
                    None => vec![0.0; offdiagonal.len() + 1],
                };
                Ok(Model::Custom(TridiagonalOperator::new(diagonal, offdiagonal)?))
            }
            other => Err(bad(format!(
                "[model] type must be engineered, parabolic, or custom, got `{other}`"
            ))),
        }
    }

    fn resolve(&self, p: &str) -> PathBuf {
        let path = Path::new(p);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }
}

pub enum Geometry {
    HalfLength(usize),
    Distance { distance: usize, margin: usize },
}

#[derive(Clone, Copy)]
pub enum Field {
    Lambda(f64),
    B0(f64),
}

pub struct ParabolicParams {
    pub geometry: Geometry,
    pub width: f64,
    pub field: Option<Field>,
    pub coupling: f64,
}

impl ParabolicParams {
    /// Geometry resolved to (distance, margin); errors for half_length form,
    /// which leaves the packet placement undefined.
    pub fn require_distance(&self, margin_flag: Option<usize>) -> Result<(usize, usize), Failure> {
        match self.geometry {
            Geometry::Distance { distance, margin } => {
                Ok((distance, margin_flag.unwrap_or(margin)))
            }
            Geometry::HalfLength(_) => Err(bad(
                "this command places a packet distance/2 left of center; give [model] distance",
            )),
        }
    }

    pub fn half_length(&self, margin_flag: Option<usize>) -> Result<usize, Failure> {
        match self.geometry {
            Geometry::HalfLength(m) => {
                if margin_flag.is_some() {
                    return Err(bad("--margin only applies to distance geometry"));
                }
                Ok(m)
            }
            Geometry::Distance { distance, margin } => {
                Ok(distance / 2 + margin_flag.unwrap_or(margin))
            }
        }
    }

    /// Field factor, converting an explicit curvature through
    /// b0 = 8 (ln2 / width^2)^2 lambda.
    pub fn lambda(&self) -> Result<f64, Failure> {
        match self.field {
            Some(Field::Lambda(l)) => Ok(l),
            Some(Field::B0(b0)) => {
                let r = std::f64::consts::LN_2 / (self.width * self.width);
                Ok(b0 / (8.0 * r * r))
            }
            None => Err(bad("this command needs [model] lambda or b0")),
        }
    }

    pub fn chain(&self, margin_flag: Option<usize>) -> Result<ParabolicChainSpec, Failure> {
        let m = self.half_length(margin_flag)?;
        Ok(ParabolicChainSpec::from_lambda(m, self.coupling, self.width, self.lambda()?)?)
    }
}

pub enum Model {
    Engineered(EngineeredChainSpec),
    Parabolic(ParabolicParams),
    Custom(TridiagonalOperator),
}

impl Model {
    /// The chain operator, for commands that work on any model.
    pub fn operator(&self, margin_flag: Option<usize>) -> Result<TridiagonalOperator, Failure> {
        match self {
            Model::Engineered(c) => Ok(c.hamiltonian()),
            Model::Parabolic(p) => Ok(p.chain(margin_flag)?.hamiltonian()),
            Model::Custom(op) => Ok(op.clone()),
        }
    }
}

/// Two-column `index value` text: 1-based indices, `#` comments, indices
/// must cover 1..=len exactly in any order.
fn read_column(path: &Path, what: &str) -> Result<Vec<f64>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {what} file {}: {e}", path.display())))?;
    let mut pairs: Vec<(usize, f64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(i), Some(v), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(bad(format!("{what} line {}: expected `index value`", lineno + 1)));
        };
        let index: usize = i
            .parse()
            .map_err(|_| bad(format!("{what} line {}: invalid index `{i}`", lineno + 1)))?;
        let value: f64 = v
            .parse()
            .map_err(|_| bad(format!("{what} line {}: invalid value `{v}`", lineno + 1)))?;
        pairs.push((index, value));
    }
    pairs.sort_by_key(|&(i, _)| i);
    for (pos, &(i, _)) in pairs.iter().enumerate() {
        if i != pos + 1 {
            return Err(bad(format!(
                "{what} indices must cover 1..={} exactly; problem at index {i}",
                pairs.len()
            )));
        }
    }
    Ok(pairs.into_iter().map(|(_, v)| v).collect())
}
