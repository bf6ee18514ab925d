use std::path::PathBuf;

use crate::catalg::CatalgConfig;
use crate::crofton::Region;
use crate::dynamics::{Curve, MapSystem};
use crate::error::{Error, Result};
use crate::kv::KeyValues;
use crate::rational::{parse_rational, to_f64, Rational};

use super::pairs::PairSpec;

pub const DEFAULT_TOLERANCE: f64 = 0.05;
pub const DEFAULT_CURVE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapacityMode {
    Exact,
    Sampled { grid: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacitySchedule {
    pub mode: CapacityMode,
    pub ks: Vec<usize>,
    pub epsilons: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeSchedule {
    pub curve: Curve,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarSchedule {
    pub n_max: usize,
    pub epsilons: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CroftonSpec {
    pub curve: Curve,
    pub iterates: usize,
    pub d: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub l1_height: f64,
    pub region: Region,
    pub window: (f64, f64),
    pub bump_height: f64,
}

/// Everything one run needs, read from a `key: value` file.
///
/// ```text
/// system: cat
/// tree: A2
/// word: A+ B-
/// n_max: 30
/// pair: geodesic 1 0 0 1
/// bar_n_max: 16
/// bar_epsilons: 1/2 1/8
/// capacity: exact
/// capacity_k: 1..11
/// capacity_epsilons: 1/8 1/16
/// volume_curve: segment 0.1 0.2 0.7 0.9
/// volume_n_max: 20
/// tol: 0.05
/// seed: 0
/// ```
///
/// Sweeps list their pairs as `pair.1`, `pair.2`, … (numeric order).
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub system_spec: Option<String>,
    pub system: Option<MapSystem>,
    pub cat_model: Option<CatalgConfig>,
    pub pairs: Vec<PairSpec>,
    pub bar: BarSchedule,
    pub capacity: Option<CapacitySchedule>,
    pub volume: Option<VolumeSchedule>,
    pub crofton: Option<CroftonSpec>,
    pub tol: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
}

fn numbers(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|t| {
            parse_rational(t)
                .map(|r| to_f64(&r))
                .or_else(|_| t.parse::<f64>().map_err(|_| bad(key, s)))
        })
        .collect()
}

fn bad(key: &str, value: &str) -> Error {
    Error::Config(format!("bad value for `{key}`: {value:?}"))
}

/// `a..b` (inclusive) or a list of integers.
fn usize_list(key: &str, s: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad(key, s))?;
        let b: usize = b.trim().parse().map_err(|_| bad(key, s))?;
        return Ok((a..=b).collect());
    }
    s.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| bad(key, s)))
        .collect()
}

/// `segment x0 y0 x1 y1` or `loop height`.
pub fn parse_curve(s: &str, tolerance: f64) -> Result<Curve> {
    let (kind, rest) = s.trim().split_once(' ').unwrap_or((s.trim(), ""));
    let v = numbers("curve", rest)?;
    match (kind, v.len()) {
        ("segment", 4) => Curve::segment([v[0], v[1]], [v[2], v[3]], tolerance),
        ("loop", 1) => Curve::horizontal_loop(v[0], 0.0, 1.0, tolerance),
        _ => Err(Error::Config(format!(
            "curve must be `segment x0 y0 x1 y1` or `loop height`, got {s:?}"
        ))),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_kv(&KeyValues::parse(text)?)
    }

    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        let system_spec = kv.get("system").map(str::to_string);
        let system = system_spec.as_deref().map(MapSystem::parse).transpose()?;
        let cat_model = match kv.get("tree") {
            Some(_) => Some(CatalgConfig::from_kv(kv)?),
            None => None,
        };
        let curve_tol = kv.parse_or("curve_tolerance", DEFAULT_CURVE_TOLERANCE)?;

        let mut numbered: Vec<(u32, &str)> = Vec::new();
        for key in kv.keys() {
            if key == "pair" {
                numbered.push((0, key));
            } else if let Some(i) = key.strip_prefix("pair.") {
                let i: u32 = i
                    .parse()
                    .map_err(|_| Error::Config(format!("bad pair key `{key}`")))?;
                numbered.push((i, key));
            }
        }
        numbered.sort();
        let pairs = numbered
            .into_iter()
            .map(|(_, key)| PairSpec::parse(kv.get(key).unwrap_or(""), system.as_ref(), curve_tol))
            .collect::<Result<Vec<_>>>()?;

        let bar_epsilons = match kv.get("bar_epsilons") {
            Some(s) => s
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?,
            None => vec![
                Rational::new(1, 2),
                Rational::new(1, 8),
                Rational::new(1, 32),
            ],
        };
        let bar = BarSchedule {
            n_max: kv.parse_or("bar_n_max", 16usize)?,
            epsilons: bar_epsilons,
        };

        let capacity = match kv.get("capacity") {
            None => None,
            Some(mode) => {
                let parts: Vec<&str> = mode.split_whitespace().collect();
                let mode = match parts.as_slice() {
                    ["exact"] => CapacityMode::Exact,
                    ["sampled", g] => CapacityMode::Sampled {
                        grid: g.parse().map_err(|_| bad("capacity", mode))?,
                    },
                    _ => return Err(bad("capacity", mode)),
                };
                let ks = usize_list("capacity_k", kv.get("capacity_k").unwrap_or("1..8"))?;
                let epsilons = numbers(
                    "capacity_epsilons",
                    kv.get("capacity_epsilons").unwrap_or("1/8 1/16"),
                )?;
                Some(CapacitySchedule { mode, ks, epsilons })
            }
        };

        let volume = match kv.get("volume_curve") {
            None => None,
            Some(c) => Some(VolumeSchedule {
                curve: parse_curve(c, curve_tol)?,
                n_max: kv.parse_or("volume_n_max", 20usize)?,
            }),
        };

        let crofton = match kv.get("crofton_curve") {
            None => None,
            Some(c) => {
                let region = numbers(
                    "crofton_region",
                    kv.get("crofton_region").unwrap_or("0 1 0 1"),
                )?;
                let window = numbers("crofton_window", kv.require("crofton_window")?)?;
                if region.len() != 4 || window.len() != 2 {
                    return Err(Error::Config(
                        "crofton_region takes 4 numbers and crofton_window 2".into(),
                    ));
                }
                Some(CroftonSpec {
                    curve: parse_curve(c, curve_tol)?,
                    iterates: kv.parse_or("crofton_iterates", 10usize)?,
                    d: kv.parse_or("crofton_d", 3usize)?,
                    epsilon: kv.parse_or("crofton_epsilon", 0.5f64)?,
                    samples: kv.parse_or("crofton_samples", 10_000usize)?,
                    l1_height: kv.parse_or("crofton_l1", 0.5f64)?,
                    region: Region {
                        q_lo: region[0],
                        q_hi: region[1],
                        p_lo: region[2],
                        p_hi: region[3],
                    },
                    window: (window[0], window[1]),
                    bump_height: kv.parse_or("crofton_bump_height", 0.2f64)?,
                })
            }
        };

        let cfg = ExperimentConfig {
            system_spec,
            system,
            cat_model,
            pairs,
            bar,
            capacity,
            volume,
            crofton,
            tol: kv.parse_or("tol", DEFAULT_TOLERANCE)?,
            seed: kv.parse_or("seed", 0u64)?,
            out_dir: PathBuf::from(kv.get("out_dir").unwrap_or("out")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.bar.epsilons.is_empty() {
            return Err(Error::Config("bar_epsilons is empty".into()));
        }
        if let Some(c) = &self.capacity {
            if c.ks.is_empty() || c.epsilons.is_empty() {
                return Err(Error::Config("capacity schedule is empty".into()));
            }
            if self.system.is_none() {
                return Err(Error::Config("capacity needs a `system`".into()));
            }
        }
        if (self.volume.is_some() || self.crofton.is_some()) && self.system.is_none() {
            return Err(Error::Config(
                "volume and crofton runs need a `system`".into(),
            ));
        }
        if let Some(c) = &self.crofton {
            if c.iterates == 0 {
                return Err(Error::Config("crofton_iterates must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn map(&self) -> Result<&MapSystem> {
        self.system
            .as_ref()
            .ok_or_else(|| Error::Config("missing key `system`".into()))
    }
}
