use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `c + Σₖ aₖ cos(2πkq) + bₖ sin(2πkq)` on the circle `ℝ/ℤ`, `k = 1, 2, …`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrigPoly {
    pub constant: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn new(constant: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        let p = TrigPoly { constant, cos, sin };
        if !p.coefficients().all(f64::is_finite) {
            return Err(Error::Input(
                "trig polynomial coefficients must be finite".into(),
            ));
        }
        Ok(p)
    }

    pub fn constant(c: f64) -> Self {
        TrigPoly {
            constant: c,
            ..Default::default()
        }
    }

    /// `a · cos(2πkq)`.
    pub fn cosine(k: usize, a: f64) -> Self {
        let mut cos = vec![0.0; k];
        cos[k - 1] = a;
        TrigPoly {
            constant: 0.0,
            cos,
            sin: Vec::new(),
        }
    }

    /// `b · sin(2πkq)`.
    pub fn sine(k: usize, b: f64) -> Self {
        let mut sin = vec![0.0; k];
        sin[k - 1] = b;
        TrigPoly {
            constant: 0.0,
            cos: Vec::new(),
            sin,
        }
    }

    fn coefficients(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.constant)
            .chain(self.cos.iter().copied())
            .chain(self.sin.iter().copied())
    }

    pub fn degree(&self) -> usize {
        let last = |v: &[f64]| v.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
        last(&self.cos).max(last(&self.sin))
    }

    /// `d`-th derivative at `q`.
    pub fn derivative(&self, q: f64, d: u32) -> f64 {
        let mut s = if d == 0 { self.constant } else { 0.0 };
        // d/dq of (cos, sin)(ωq) rotates the pair by a quarter turn and scales by ω
        let n = self.cos.len().max(self.sin.len());
        for k in 1..=n {
            let a = self.cos.get(k - 1).copied().unwrap_or(0.0);
            let b = self.sin.get(k - 1).copied().unwrap_or(0.0);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let w = TAU * k as f64;
            let (sn, cs) = (w * q).sin_cos();
            let mode = match d % 4 {
                0 => a * cs + b * sn,
                1 => -a * sn + b * cs,
                2 => -a * cs - b * sn,
                _ => a * sn - b * cs,
            };
            s += mode * w.powi(d as i32);
        }
        s
    }

    pub fn value(&self, q: f64) -> f64 {
        self.derivative(q, 0)
    }

    /// Sum of absolute coefficients times `(2πk)^d`: a bound for `|f^{(d)}|`.
    pub fn derivative_bound(&self, d: u32) -> f64 {
        let n = self.cos.len().max(self.sin.len());
        let mut s = if d == 0 { self.constant.abs() } else { 0.0 };
        for k in 1..=n {
            let a = self.cos.get(k - 1).copied().unwrap_or(0.0).abs();
            let b = self.sin.get(k - 1).copied().unwrap_or(0.0).abs();
            s += (a + b) * (TAU * k as f64).powi(d as i32);
        }
        s
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, t: f64) -> TrigPoly {
        TrigPoly {
            constant: t * self.constant,
            cos: self.cos.iter().map(|c| t * c).collect(),
            sin: self.sin.iter().map(|c| t * c).collect(),
        }
    }

    fn combine(&self, other: &TrigPoly, sign: f64) -> TrigPoly {
        let merge = |a: &[f64], b: &[f64]| {
            (0..a.len().max(b.len()))
                .map(|i| a.get(i).copied().unwrap_or(0.0) + sign * b.get(i).copied().unwrap_or(0.0))
                .collect()
        };
        TrigPoly {
            constant: self.constant + sign * other.constant,
            cos: merge(&self.cos, &other.cos),
            sin: merge(&self.sin, &other.sin),
        }
    }

    /// Parses `c | a₁ a₂ … | b₁ b₂ …`; trailing sections may be omitted.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split('|');
        let nums = |part: Option<&str>| -> Result<Vec<f64>> {
            part.unwrap_or("")
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::Input(format!("bad coefficient {t:?} in {s:?}")))
                })
                .collect()
        };
        let c = nums(parts.next())?;
        if c.len() > 1 {
            return Err(Error::Input(format!("expected one constant term in {s:?}")));
        }
        let cos = nums(parts.next())?;
        let sin = nums(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::Input(format!("too many sections in {s:?}")));
        }
        TrigPoly::new(c.first().copied().unwrap_or(0.0), cos, sin)
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "{} | {} | {}",
            self.constant,
            join(&self.cos),
            join(&self.sin)
        )
    }
}
