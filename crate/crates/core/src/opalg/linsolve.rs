use num::{One, Zero};

use super::coeff::Rational;

/// Reduced row-echelon analysis of `A x = b` over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearAnalysis {
    /// Rank of `A`.
    pub rank: usize,
    /// False when some row reduces to `0 = c` with `c ≠ 0`.
    pub consistent: bool,
    /// Value of each unknown if the system pins it down, otherwise `None`.
    pub determined: Vec<Option<Rational>>,
    /// One solution with every free unknown set to zero (meaningful only when
    /// consistent).
    pub particular: Vec<Rational>,
}

impl LinearAnalysis {
    pub fn is_unique(&self) -> bool {
        self.consistent && self.determined.iter().all(Option::is_some)
    }

    pub fn free_unknowns(&self) -> Vec<usize> {
        self.determined
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.is_none().then_some(i))
            .collect()
    }
}

/// Gauss–Jordan elimination with exact arithmetic. `rows` holds `[A | b]`
/// with `cols + 1` entries each.
pub fn analyze(mut rows: Vec<Vec<Rational>>, cols: usize) -> LinearAnalysis {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..=cols {
                let delta = &f * &rows[r][j];
                rows[i][j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let rank = pivots.len();
    let consistent = rows[rank..].iter().all(|row| row[cols].is_zero());
    let mut determined = vec![None; cols];
    let mut particular = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][cols].clone();
        let free_coupled = (c + 1..cols).any(|j| !rows[i][j].is_zero());
        if !free_coupled {
            determined[c] = Some(rows[i][cols].clone());
        }
    }
    LinearAnalysis {
        rank,
        consistent,
        determined,
        particular,
    }
}
