use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::Barcode;

/// Two closed straight geodesics on the torus with primitive integer
/// directions, the second pushed forward by `Aⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicPair {
    pub v1: [i64; 2],
    pub v2: [i64; 2],
    pub matrix: [[i64; 2]; 2],
    pub n: u32,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

impl GeodesicPair {
    pub fn new(v1: [i64; 2], v2: [i64; 2], matrix: [[i64; 2]; 2], n: u32) -> Result<Self> {
        let p = GeodesicPair { v1, v2, matrix, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.v1, self.v2] {
            if gcd(v[0], v[1]) != 1 {
                return Err(Error::Input(format!("direction {v:?} is not primitive")));
            }
        }
        let m = self.matrix;
        let det = m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128;
        if det.abs() != 1 {
            return Err(Error::Input(format!("|det A| must be 1, got {det}")));
        }
        Ok(())
    }

    pub fn with_iterate(&self, n: u32) -> Self {
        GeodesicPair { n, ..*self }
    }

    /// `Aⁿ v₂`, exactly.
    pub fn pushed_direction(&self) -> Result<[i128; 2]> {
        let m = self.matrix.map(|r| r.map(i128::from));
        let mut v = self.v2.map(i128::from);
        let overflow = || Error::Resource {
            message: format!("A^{} v2 overflows 128-bit integers", self.n),
            partial: Vec::new(),
        };
        for _ in 0..self.n {
            let x = m[0][0]
                .checked_mul(v[0])
                .and_then(|a| m[0][1].checked_mul(v[1]).and_then(|b| a.checked_add(b)))
                .ok_or_else(overflow)?;
            let y = m[1][0]
                .checked_mul(v[0])
                .and_then(|a| m[1][1].checked_mul(v[1]).and_then(|b| a.checked_add(b)))
                .ok_or_else(overflow)?;
            v = [x, y];
        }
        Ok(v)
    }
}

/// Minimal intersection number `|det(v₁, Aⁿv₂)|` of the two geodesics.
pub fn geodesic_intersection_count(pair: &GeodesicPair) -> Result<u128> {
    pair.validate()?;
    let w = pair.pushed_direction()?;
    let det = (pair.v1[0] as i128)
        .checked_mul(w[1])
        .zip((pair.v1[1] as i128).checked_mul(w[0]))
        .and_then(|(a, b)| a.checked_sub(b))
        .ok_or_else(|| Error::Resource {
            message: "intersection determinant overflows".into(),
            partial: Vec::new(),
        })?;
    if det == 0 {
        return Err(Error::Parallel);
    }
    Ok(det.unsigned_abs())
}

/// Minimal-position model: the differential vanishes, so every intersection
/// point is an infinite bar.
pub fn geodesic_pair_barcode(pair: &GeodesicPair) -> Result<Barcode> {
    let count = geodesic_intersection_count(pair)?;
    let count = usize::try_from(count).map_err(|_| Error::Resource {
        message: format!("{count} bars do not fit in memory"),
        partial: Vec::new(),
    })?;
    if count > 1 << 24 {
        return Err(Error::Resource {
            message: format!("barcode with {count} bars exceeds the supported size"),
            partial: Vec::new(),
        });
    }
    Ok(Barcode::infinite(count))
}
