//
// Smith normal form over Z with exact big integers.
//

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Invariant factors of a finitely generated abelian group `Z^n / rowspace(R)`.
///
/// Unit factors are dropped; each factor divides the next and free summands
/// appear as trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrixNF {
    factors: Vec<BigInt>,
}

impl IntegerMatrixNF {
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|f| f.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|f| !f.is_zero()).cloned().collect()
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.factors
            .iter()
            .map(|f| i64::try_from(f).expect("factor fits in i64"))
            .collect()
    }
}

impl fmt::Display for IntegerMatrixNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Result of diagonalising `P * R * Q = D`.
///
/// Only the column transform `Q` is tracked; column `j` of `Q` is the linear
/// functional projecting onto the `j`-th summand of the cokernel.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub q: Vec<Vec<BigInt>>,
    pub ncols: usize,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> IntegerMatrixNF {
        let mut factors: Vec<BigInt> = self
            .diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        let rank = self.diagonal.iter().filter(|d| !d.is_zero()).count();
        factors.extend(std::iter::repeat_n(BigInt::zero(), self.ncols - rank));
        IntegerMatrixNF { factors }
    }

    /// Columns of `Q` whose cokernel summand is free.
    pub fn free_functionals(&self) -> Vec<Vec<BigInt>> {
        let rank = self.diagonal.iter().filter(|d| !d.is_zero()).count();
        (rank..self.ncols)
            .map(|j| self.q.iter().map(|row| row[j].clone()).collect())
            .collect()
    }
}

/// Diagonalises an integer matrix given as rows of length `ncols`.
pub fn smith_normal_form(rows: &[Vec<BigInt>], ncols: usize) -> SmithForm {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    for r in &a {
        assert_eq!(r.len(), ncols, "ragged relation matrix");
    }
    let nrows = a.len();
    let mut q: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut q, t, pj);

        loop {
            let mut dirty = false;
            // clear column t below the pivot
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (quo, _) = a[i][t].div_mod_floor(&a[t][t]);
                for j in t..ncols {
                    let v = &a[t][j] * &quo;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (quo, _) = a[t][j].div_mod_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &quo);
                col_axpy(&mut q, j, t, &quo);
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, t, j);
                    swap_cols(&mut q, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: pivot must divide every remaining entry
            let mut fixed = false;
            'outer: for i in t + 1..nrows {
                for j in t + 1..ncols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        // add row i to row t and restart the sweep
                        for k in t..ncols {
                            let v = a[i][k].clone();
                            a[t][k] += v;
                        }
                        fixed = true;
                        break 'outer;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        if a[t][t].is_negative() {
            for j in t..ncols {
                a[t][j] = -a[t][j].clone();
            }
        }
        t += 1;
    }

    let diagonal = (0..nrows.min(ncols)).map(|i| a[i][i].clone()).collect();
    SmithForm { diagonal, q, ncols }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// column `dst` -= quo * column `src`
fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, quo: &BigInt) {
    for row in m.iter_mut() {
        let v = &row[src] * quo;
        row[dst] -= v;
    }
}

pub fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[Vec<i64>], ncols: usize) -> Vec<i64> {
        smith_normal_form(&to_big(rows), ncols)
            .invariant_factors()
            .as_i64()
    }

    #[test]
    fn free_module() {
        assert_eq!(factors(&[], 2), vec![0, 0]);
    }

    #[test]
    fn classic_examples() {
        assert_eq!(factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3), vec![2, 6, 12]);
        assert_eq!(factors(&[vec![1, 0, 1], vec![2, -1, 2]], 3), vec![0]);
        assert_eq!(factors(&[vec![4, 0], vec![0, 6]], 2), vec![2, 12]);
    }

    #[test]
    fn functional_kills_relations() {
        let rows = to_big(&[vec![1, 0, 1], vec![2, -1, 2]]);
        let s = smith_normal_form(&rows, 3);
        let f = &s.free_functionals()[0];
        for r in &rows {
            let dot: BigInt = r.iter().zip(f).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        let content = f.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        assert!(content.is_one());
    }
}
