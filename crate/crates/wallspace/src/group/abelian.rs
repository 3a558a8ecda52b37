//! Integer lattice arithmetic for free abelian groups.

/// Row-echelon (Hermite-style) basis for the sublattice of `Z^n` spanned by
/// the given vectors. Rows are pivoted in column order with positive pivots.
#[derive(Clone, Debug)]
pub struct Lattice {
    rows: Vec<Vec<i64>>,
    dim: usize,
}

impl Lattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Self {
        let mut rows: Vec<Vec<i64>> = generators
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        assert!(rows.iter().all(|r| r.len() == dim));
        let mut pivot_row = 0;
        for col in 0..dim {
            // gcd-eliminate column `col` below pivot_row
            loop {
                let mut best: Option<usize> = None;
                for (i, r) in rows.iter().enumerate().skip(pivot_row) {
                    if r[col] != 0 && best.is_none_or(|b| r[col].abs() < rows[b][col].abs()) {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                rows.swap(pivot_row, b);
                let mut done = true;
                let pivot = rows[pivot_row].clone();
                for row in rows.iter_mut().skip(pivot_row + 1) {
                    if row[col] != 0 {
                        let q = row[col].div_euclid(pivot[col]);
                        for (x, &pv) in row.iter_mut().zip(&pivot) {
                            *x -= q * pv;
                        }
                        if row[col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if pivot_row < rows.len() && rows[pivot_row][col] != 0 {
                if rows[pivot_row][col] < 0 {
                    for x in rows[pivot_row].iter_mut() {
                        *x = -*x;
                    }
                }
                pivot_row += 1;
            }
        }
        rows.truncate(pivot_row);
        rows.retain(|r| r.iter().any(|&x| x != 0));
        Lattice { rows, dim }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for row in &self.rows {
            let col = row.iter().position(|&x| x != 0).unwrap();
            if v[col] % row[col] != 0 {
                return false;
            }
            let q = v[col] / row[col];
            for c in 0..self.dim {
                v[c] -= q * row[c];
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

/// Integer adjugate and determinant of a square matrix, by cofactor
/// expansion. Matrices here are small (rank of a lattice, at most 4 or so).
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0i64;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc += sign * m[0][j] * det(&minor);
    }
    acc
}

/// adj(M) with adj(M)·M = det(M)·I.
pub fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                        .collect();
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    sign * det(&minor)
                })
                .collect()
        })
        .collect()
}

pub fn l1(v: &[i64]) -> i64 {
    v.iter().map(|&x| x.abs()).sum()
}

/// Canonical representative of the coset `v + Z·z`: lexicographically least
/// among the l1-shortest. Returns `(rep, k)` with `v = rep + k·z`.
pub fn cyclic_coset_rep(v: &[i64], z: &[i64]) -> (Vec<i64>, i64) {
    assert!(z.iter().any(|&x| x != 0));
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(&x, &y)| x * y).sum::<i64>();
    let center = dot(v, z) / dot(z, z).max(1);
    let radius = l1(v) + l1(z) + 2;
    let mut best: Option<(Vec<i64>, i64)> = None;
    for k in center - radius..=center + radius {
        let cand: Vec<i64> = v.iter().zip(z).map(|(&a, &b)| a - k * b).collect();
        let better = match &best {
            None => true,
            Some((b, _)) => {
                let (cn, bn) = (l1(&cand), l1(b));
                cn < bn || (cn == bn && cand < *b)
            }
        };
        if better {
            best = Some((cand, k));
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_membership() {
        // 2Z x Z
        let l = Lattice::new(2, &[vec![2, 0], vec![0, 1]]);
        assert!(l.contains(&[4, 3]));
        assert!(!l.contains(&[3, 0]));
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn lattice_rank_deficient() {
        let l = Lattice::new(3, &[vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(l.rank(), 1);
        assert!(l.contains(&[3, 3, 0]));
        assert!(!l.contains(&[1, 0, 0]));
    }

    #[test]
    fn det_and_adjugate() {
        let m = vec![vec![2, 1], vec![1, 1]];
        assert_eq!(det(&m), 1);
        let adj = adjugate(&m);
        // adj * m = det * I
        for (i, row) in adj.iter().enumerate() {
            for j in 0..2 {
                let s: i64 = row.iter().zip(&m).map(|(&a, mk)| a * mk[j]).sum();
                assert_eq!(s, if i == j { 1 } else { 0 });
            }
        }
    }

    #[test]
    fn coset_rep_shifts_out() {
        let (rep, k) = cyclic_coset_rep(&[5, 3], &[1, 0]);
        assert_eq!(rep, vec![0, 3]);
        assert_eq!(k, 5);
        // (1,1) and (-1,1) tie in l1; lex least wins
        let (rep, k) = cyclic_coset_rep(&[7, 1], &[2, 0]);
        assert_eq!(rep, vec![-1, 1]);
        assert_eq!(k, 4);
    }
}
