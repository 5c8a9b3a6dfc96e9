use num_traits::Zero;

use super::{rat_int, Rat};
use crate::error::{Error, Result};

/// Rank over the rationals of an integer matrix given by rows.
pub fn rational_rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    let mut a: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| rat_int(x)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[rank][col];
                for j in col..ncols {
                    let d = &f * &a[rank][j];
                    a[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn overflow() -> Error {
    Error::OutOfRange("integer overflow in lattice reduction".into())
}

/// An integer matrix `L` (`ncols` rows) with `L * A = I`, where `A` is given
/// by its rows. Exists iff `A` has full column rank and its column lattice is
/// saturated (all Hermite pivots are units).
pub fn integer_left_inverse(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<Vec<i64>>> {
    let m = rows.len();
    let rank = rational_rank(rows, ncols);
    if rank < ncols {
        return Err(Error::RankDeficient {
            rank,
            params: ncols,
        });
    }
    // Augmented [A | I_m], reduced with unimodular row operations.
    let width = ncols + m;
    let mut b: Vec<Vec<i64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..m).map(|j| i64::from(i == j)));
            row
        })
        .collect();

    let sub_row = |b: &mut Vec<Vec<i64>>, target: usize, source: usize, factor: i64| -> Result<()> {
        for j in 0..width {
            let d = b[source][j].checked_mul(factor).ok_or_else(overflow)?;
            b[target][j] = b[target][j].checked_sub(d).ok_or_else(overflow)?;
        }
        Ok(())
    };

    for col in 0..ncols {
        loop {
            let pivot = (col..m)
                .filter(|&i| b[i][col] != 0)
                .min_by_key(|&i| b[i][col].unsigned_abs());
            let Some(p) = pivot else {
                return Err(Error::RankDeficient {
                    rank,
                    params: ncols,
                });
            };
            b.swap(col, p);
            let mut done = true;
            for i in col + 1..m {
                if b[i][col] != 0 {
                    let q = b[i][col].div_euclid(b[col][col]);
                    sub_row(&mut b, i, col, q)?;
                    if b[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        match b[col][col] {
            1 => {}
            -1 => b[col].iter_mut().for_each(|x| *x = -*x),
            _ => return Err(Error::NoIntegerInverse),
        }
    }
    for col in (0..ncols).rev() {
        for i in 0..col {
            let f = b[i][col];
            if f != 0 {
                sub_row(&mut b, i, col, f)?;
            }
        }
    }
    Ok(b[..ncols].iter().map(|r| r[ncols..].to_vec()).collect())
}
