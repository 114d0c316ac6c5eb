//! Small exact linear algebra helpers over rationals.

use num::{One, Signed, Zero};

use crate::rat::Rat;

/// Solves the square system `rows * x = rhs`. Returns `None` if singular.
pub(crate) fn solve_square(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let d = rhs.len();
    debug_assert!(rows.iter().all(|r| r.len() == d));
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].clone();
        for x in m[col][col..].iter_mut() {
            *x /= &inv;
        }
        for i in 0..d {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=d {
                    let delta = &f * &m[col][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[d].clone()).collect())
}

/// Rank of an arbitrary rational matrix.
pub(crate) fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x /= &inv;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..cols {
                    let delta = &f * &m[rank][j];
                    m[i][j] -= delta;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// A nonzero vector spanning the nullspace of `rows` (each row of length
/// `dim`), provided the nullspace is exactly one-dimensional.
pub(crate) fn nullspace_vector(rows: &[Vec<Rat>], dim: usize) -> Option<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..dim {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x /= &inv;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..dim {
                    let delta = &f * &m[rank][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if rank != dim - 1 {
        return None;
    }
    let free_col = (0..dim).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![Rat::zero(); dim];
    v[free_col] = Rat::one();
    for (row_idx, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -m[row_idx][free_col].clone();
    }
    Some(v)
}

/// Determinant by fraction-free-ish elimination (plain rational Gaussian).
pub(crate) fn determinant(rows: &[Vec<Rat>]) -> Rat {
    let d = rows.len();
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut det = Rat::one();
    for col in 0..d {
        let Some(piv) = (col..d).find(|&i| !m[i][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &inv;
        }
        for i in col + 1..d {
            if !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..d {
                    let delta = &f * &m[col][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    det
}

/// Dot product.
pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub(crate) fn abs(r: &Rat) -> Rat {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn solve_2x2() {
        let rows = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(-1, 1)]];
        let x = solve_square(&rows, &[rat(3, 1), rat(1, 1)]).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
    }

    #[test]
    fn solve_singular() {
        let rows = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]];
        assert!(solve_square(&rows, &[rat(1, 1), rat(2, 1)]).is_none());
    }

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![vec![rat(1, 1), rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1), rat(1, 1)]];
        let v = nullspace_vector(&rows, 3).unwrap();
        assert!(dot(&rows[0], &v).is_zero());
        assert!(dot(&rows[1], &v).is_zero());
        assert!(!is_zero_vec(&v));
    }

    #[test]
    fn determinant_diag() {
        let rows = vec![
            vec![rat(2, 1), rat(0, 1)],
            vec![rat(5, 1), rat(3, 1)],
        ];
        assert_eq!(determinant(&rows), rat(6, 1));
    }
}
