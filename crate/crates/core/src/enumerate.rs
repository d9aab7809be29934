//! Exhaustive enumeration over a prime field: projective points and
//! Grassmannians via canonical echelon representatives.

use itertools::Itertools;

use crate::linalg::Subspace;
use crate::scalar::{Field, Scalar};

/// `|P^{d-1}(F_p)| = (p^d - 1) / (p - 1)`.
pub fn projective_count(p: u64, d: usize) -> u128 {
    let p = p as u128;
    (0..d).map(|i| p.pow(i as u32)).sum()
}

/// Points of `P^{d-1}(F_p)` normalized so the first nonzero coordinate is 1,
/// in lexicographic order of their residues.
pub fn projective_points(field: Field, d: usize) -> impl Iterator<Item = Vec<Scalar>> {
    let p = field.order().expect("projective enumeration needs a finite field");
    // the leading one sits at `lead`; lexicographic order visits later leads first
    (0..d).rev().flat_map(move |lead| {
        let free = d - lead - 1;
        let total = (p as u128).pow(free as u32);
        (0..total).map(move |mut code| {
            let mut v = vec![field.zero(); d];
            v[lead] = field.one();
            for slot in (lead + 1..d).rev() {
                v[slot] = field.element((code % p as u128) as u64);
                code /= p as u128;
            }
            v
        })
    })
}

/// Number of `k`-dimensional subspaces of `F_p^n` (Gaussian binomial).
pub fn grassmannian_count(p: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= p.pow((n - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// All `k`-dimensional subspaces of `F_p^n`, sorted by the row-major residues
/// of their reduced echelon bases (lexicographically least first).
pub fn grassmannian(field: Field, n: usize, k: usize) -> Vec<Subspace> {
    let p = field.order().expect("Grassmannian enumeration needs a finite field");
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Subspace::zero(field, n)];
    }
    let mut keyed: Vec<(Vec<u64>, Subspace)> = Vec::new();
    for pivots in (0..n).combinations(k) {
        // free slots: row i, column j > pivot_i that is not a pivot column
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| {
                let pivots = &pivots;
                (pc + 1..n).filter(move |j| !pivots.contains(j)).map(move |j| (i, j))
            })
            .collect();
        let total = (p as u128).pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u64; n]; k];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = 1;
            }
            for &(i, j) in free.iter().rev() {
                rows[i][j] = (code % p as u128) as u64;
                code /= p as u128;
            }
            let key: Vec<u64> = rows.iter().flatten().copied().collect();
            let vectors = rows
                .iter()
                .map(|r| r.iter().map(|&x| field.element(x)).collect())
                .collect();
            let s = Subspace::from_vectors(field, n, vectors).expect("rows have length n");
            keyed.push((key, s));
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, s)| s).collect()
}
