use crate::scalar::{Field, Scalar};

/// Brings `rows` to reduced row-echelon form in place, drops zero rows and
/// returns the pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Kernel basis read off an RREF: one vector per free column.
pub(crate) fn kernel_vectors(
    field: Field,
    rref_rows: &[Vec<Scalar>],
    pivots: &[usize],
    ncols: usize,
) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &p) in rref_rows.iter().zip(pivots) {
                if !row[f].is_zero() {
                    v[p] = row[f].neg();
                }
            }
            v
        })
        .collect()
}
