//! Test-only generators and oracles. Nothing here calls into the reduction
//! code under test.
#![allow(dead_code)]

use entropy_chain::persistence::{BarLength, FilteredComplex, Generator};
use entropy_chain::rational::{rat, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random valid filtered complex with `n` generators.
///
/// A random matching differential `D0` (each pair strictly decreasing in
/// action) is conjugated by a random filtration-preserving unitriangular
/// change of basis, which keeps `D² = 0` and the strict decrease.
pub fn random_complex<R: Rng>(rng: &mut R, n: usize) -> FilteredComplex {
    // actions: small integers so ties are common
    let mut actions: Vec<Rational> = (0..n)
        .map(|_| rat(rng.gen_range(-4..=6), rng.gen_range(1..=2)))
        .collect();
    actions.sort();
    let mut d = vec![vec![false; n]; n]; // d[row][col]
    let mut free: Vec<usize> = (0..n).collect();
    free.shuffle(rng);
    let pairs = rng.gen_range(0..=n / 2);
    let mut used = vec![false; n];
    for _ in 0..pairs {
        let cand: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !used[i] && !used[j] && actions[i] < actions[j])
            .collect();
        if cand.is_empty() {
            break;
        }
        let (i, j) = cand[rng.gen_range(0..cand.len())];
        used[i] = true;
        used[j] = true;
        d[i][j] = true;
    }
    // T upper unitriangular with T[i][j] only when actions[i] <= actions[j]
    let mut t = vec![vec![false; n]; n];
    for i in 0..n {
        t[i][i] = true;
        for j in i + 1..n {
            if actions[i] <= actions[j] && rng.gen_bool(0.4) {
                t[i][j] = true;
            }
        }
    }
    let tinv = upper_unitriangular_inverse(&t);
    let d = mat_mul(&mat_mul(&t, &d), &tinv);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let gens: Vec<Generator> = (0..n)
        .map(|i| Generator::new(format!("x{}", ids[i]), rng.gen_range(0..=1), actions[i]))
        .collect();
    let mut entries = Vec::new();
    for (i, row) in d.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            if e {
                entries.push((j, i));
            }
        }
    }
    // present generators in a shuffled order
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut inv = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let gens: Vec<Generator> = perm.iter().map(|&old| gens[old].clone()).collect();
    let entries: Vec<(usize, usize)> = entries.iter().map(|&(f, t)| (inv[f], inv[t])).collect();
    FilteredComplex::from_indices(gens, &entries).expect("generator produced an invalid complex")
}

fn mat_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut c = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    c[i][j] ^= b[k][j];
                }
            }
        }
    }
    c
}

fn upper_unitriangular_inverse(t: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = t.len();
    let mut inv = vec![vec![false; n]; n];
    for col in 0..n {
        // solve T x = e_col by back substitution
        for i in (0..n).rev() {
            let mut v = i == col;
            for k in i + 1..n {
                v ^= t[i][k] && inv[k][col];
            }
            inv[i][col] = v;
        }
    }
    inv
}

/// Rank over 𝔽₂ of a dense matrix by Gaussian elimination.
pub fn f2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) {
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r][c] {
                    let pivot = rows[rank].clone();
                    for (x, y) in rows[r].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Boundary matrix in filtration order (action, then id): `m[row][col]`.
pub fn ordered_boundary(c: &FilteredComplex) -> (Vec<Rational>, Vec<Vec<bool>>) {
    let gens = c.generators();
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by(|&a, &b| {
        gens[a]
            .action
            .cmp(&gens[b].action)
            .then(gens[a].id.cmp(&gens[b].id))
    });
    let mut pos = vec![0; gens.len()];
    for (p, &g) in order.iter().enumerate() {
        pos[g] = p;
    }
    let n = gens.len();
    let mut m = vec![vec![false; n]; n];
    for (from, to) in c.entries() {
        m[pos[to]][pos[from]] = true;
    }
    (order.iter().map(|&g| gens[g].action).collect(), m)
}

/// Rank of the full differential, i.e. number of finite bars.
pub fn differential_rank(c: &FilteredComplex) -> usize {
    f2_rank(ordered_boundary(c).1)
}

/// Textbook left-to-right column reduction on a dense matrix.
pub fn oracle_barcode_column(c: &FilteredComplex) -> Vec<BarLength> {
    let (acts, m) = ordered_boundary(c);
    let n = acts.len();
    let mut cols: Vec<Vec<bool>> = (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let low = |col: &Vec<bool>| col.iter().rposition(|&x| x);
    let mut bars = Vec::new();
    let mut is_low = vec![false; n];
    for j in 0..n {
        loop {
            let Some(l) = low(&cols[j]) else { break };
            let Some(k) = (0..j).find(|&k| low(&cols[k]) == Some(l)) else {
                break;
            };
            let other = cols[k].clone();
            for (x, y) in cols[j].iter_mut().zip(other) {
                *x ^= y;
            }
        }
        if let Some(l) = low(&cols[j]) {
            is_low[l] = true;
            bars.push(BarLength::Finite(acts[j] - acts[l]));
        }
    }
    for j in 0..n {
        if low(&cols[j]).is_none() && !is_low[j] {
            bars.push(BarLength::Infinite);
        }
    }
    bars.sort();
    bars
}

/// Pairing from ranks of lower-left submatrices: the pair `(i, j)` exists iff
/// `r(i,j) − r(i+1,j) − r(i,j−1) + r(i+1,j−1) = 1`, where `r(i,j)` is the
/// rank of rows `≥ i`, columns `≤ j`.
pub fn oracle_barcode_rank(c: &FilteredComplex) -> Vec<BarLength> {
    let (acts, m) = ordered_boundary(c);
    let n = acts.len();
    let r = |i: usize, j: isize| -> usize {
        if j < 0 || i >= n {
            return 0;
        }
        let sub: Vec<Vec<bool>> = (i..n).map(|row| m[row][..=(j as usize)].to_vec()).collect();
        f2_rank(sub)
    };
    let mut bars = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let jj = j as isize;
            let x = r(i, jj) + r(i + 1, jj - 1);
            let y = r(i + 1, jj) + r(i, jj - 1);
            if x > y {
                bars.push(BarLength::Finite(acts[j] - acts[i]));
            }
        }
    }
    let rank = f2_rank(m);
    bars.extend(std::iter::repeat_n(BarLength::Infinite, n - 2 * rank));
    bars.sort();
    bars
}
