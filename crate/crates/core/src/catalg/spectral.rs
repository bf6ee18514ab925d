//! Spectral radius of integer matrices.
//!
//! The primary route is the exact characteristic polynomial: its square-free
//! part has simple roots, which Aberth iteration plus Newton polishing locate
//! to near machine precision, multiplicities and Jordan blocks included.
//!
//! The second route is Gelfand's formula `ρ = lim ‖A^N‖^{1/N}` with
//! `N = 2^64`, reached by normalised repeated squaring so only the modulus is
//! tracked. It is accurate when the dominant eigenvalues are semisimple but
//! loses digits on Jordan blocks of the dominant modulus (the normalised
//! square cancels catastrophically), so it serves as a cross-check and as the
//! fallback when the characteristic polynomial overflows `i128`.

use num_complex::Complex64;
use num_traits::Zero;

use crate::rational::Rational;

use super::matrix::IntegerMatrix;

const SQUARINGS: u32 = 64;

pub fn spectral_radius(m: &IntegerMatrix) -> f64 {
    match checked_characteristic_polynomial(m) {
        Some(p) => max_root_modulus(&p),
        None => spectral_radius_gelfand(&m.to_f64_rows()),
    }
}

/// Coefficients of `det(λI − A)`, ascending, leading coefficient 1.
///
/// # Panics
/// If the Faddeev–LeVerrier recursion overflows `i128`.
pub fn characteristic_polynomial(m: &IntegerMatrix) -> Vec<i128> {
    checked_characteristic_polynomial(m).expect("characteristic polynomial overflows i128")
}

fn checked_characteristic_polynomial(m: &IntegerMatrix) -> Option<Vec<i128>> {
    let n = m.size();
    let a: Vec<Vec<i128>> = m
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect();
    let mat_mul_trace = |mk: &Vec<Vec<i128>>| -> Option<(Vec<Vec<i128>>, i128)> {
        let mut prod = vec![vec![0i128; n]; n];
        let mut trace = 0i128;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0i128;
                for l in 0..n {
                    acc = acc.checked_add(a[i][l].checked_mul(mk[l][j])?)?;
                }
                prod[i][j] = acc;
            }
            trace = trace.checked_add(prod[i][i])?;
        }
        Some((prod, trace))
    };
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    // M_1 = I, c_{n−1} = −tr(A); M_k = A M_{k−1} + c_{n−k+1} I, c_{n−k} = −tr(A M_k)/k
    let mut mk: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect();
    for k in 1..=n {
        let (am, trace) = mat_mul_trace(&mk)?;
        coeffs[n - k] = -trace / k as i128;
        mk = am;
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] = row[i].checked_add(coeffs[n - k])?;
        }
    }
    Some(coeffs)
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Quotient and remainder of `a / b`; `b` must have a nonzero leading coefficient.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if a.len() <= db {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] / b[db];
        q[i] = c;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// `p / gcd(p, p')`, made monic.
pub(crate) fn square_free_part(p: &[i128]) -> Vec<f64> {
    let p: Vec<Rational> = p.iter().map(|&c| Rational::from_integer(c)).collect();
    if p.len() <= 2 {
        return p.iter().map(crate::rational::to_f64).collect();
    }
    let dp: Vec<Rational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(i as i128))
        .collect();
    let (mut a, mut b) = (p.clone(), dp);
    trim(&mut b);
    while !is_zero_poly(&b) {
        let r = poly_divmod(&a, &b).1;
        a = b;
        b = r;
    }
    trim(&mut a);
    let q = poly_divmod(&p, &a).0;
    let lead = *q.last().unwrap();
    q.iter()
        .map(|c| crate::rational::to_f64(&(c / lead)))
        .collect()
}

fn horner(p: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Complex roots of a monic polynomial with simple roots (ascending coefficients).
pub(crate) fn polynomial_roots(p: &[f64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![Complex64::new(-p[0] / p[1], 0.0)];
    }
    let radius = 1.0 + p[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(
                radius,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (v, dv) = horner(p, z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    for root in z.iter_mut() {
        for _ in 0..4 {
            let (v, dv) = horner(p, *root);
            if dv.norm() == 0.0 {
                break;
            }
            *root -= v / dv;
        }
    }
    z
}

/// All eigenvalues (without multiplicity) of a small integer matrix.
pub fn distinct_eigenvalues(m: &IntegerMatrix) -> Vec<Complex64> {
    polynomial_roots(&square_free_part(&characteristic_polynomial(m)))
}

fn max_root_modulus(p: &[i128]) -> f64 {
    polynomial_roots(&square_free_part(p))
        .iter()
        .fold(0.0, |r, z| r.max(z.norm()))
}

pub fn spectral_radius_charpoly(m: &IntegerMatrix) -> f64 {
    max_root_modulus(&characteristic_polynomial(m))
}

fn max_abs(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

/// `lim ‖Aⁿ‖^{1/n}` via `2^64`-fold normalised squaring.
pub fn spectral_radius_gelfand(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let s = max_abs(a);
    if s == 0.0 {
        return 0.0;
    }
    let mut cur: Vec<Vec<f64>> = a
        .iter()
        .map(|r| r.iter().map(|v| v / s).collect())
        .collect();
    // log ‖A^{2^k}‖ / 2^k
    let mut mu = s.ln();
    let mut scale = 1.0f64;
    for _ in 0..SQUARINGS {
        let mut sq = vec![vec![0.0; n]; n];
        for i in 0..n {
            for l in 0..n {
                let x = cur[i][l];
                if x != 0.0 {
                    for j in 0..n {
                        sq[i][j] += x * cur[l][j];
                    }
                }
            }
        }
        let norm = max_abs(&sq);
        if norm == 0.0 {
            return 0.0;
        }
        scale *= 0.5;
        mu += norm.ln() * scale;
        for v in sq.iter_mut().flatten() {
            *v /= norm;
        }
        cur = sq;
    }
    mu.exp()
}
