use super::field::Field;

/// One exact solution of `A x = b`, or `None` when the system is inconsistent.
///
/// Forward elimination is fraction-free (Bareiss): each update is
/// `(p * a_ij - a_ik * a_pj) / p_prev`, an exact division whenever the
/// entries lie in a polynomial ring. Free variables are set to zero.
pub fn solve_linear_system<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = F::one();
    let mut prow = 0;
    for c in 0..cols {
        if prow == rows {
            break;
        }
        let Some(sel) = (prow..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(prow, sel);
        let pivot = m[prow][c].clone();
        for r in prow + 1..rows {
            let factor = m[r][c].clone();
            for j in c + 1..=cols {
                let v = pivot
                    .mul_ref(&m[r][j])
                    .sub_ref(&factor.mul_ref(&m[prow][j]));
                m[r][j] = v.div_ref(&prev);
            }
            m[r][c] = F::zero();
        }
        pivots.push((prow, c));
        prev = pivot;
        prow += 1;
    }

    if m[prow..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }

    let mut x = vec![F::zero(); cols];
    for &(r, c) in pivots.iter().rev() {
        let mut acc = m[r][cols].clone();
        for j in c + 1..cols {
            if !x[j].is_zero() && !m[r][j].is_zero() {
                acc = acc.sub_ref(&m[r][j].mul_ref(&x[j]));
            }
        }
        x[c] = acc.div_ref(&m[r][c]);
    }
    Some(x)
}
