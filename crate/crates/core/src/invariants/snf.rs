//! Smith normal form of integer matrices.
//!
//! Arithmetic runs in `i128`; the matrices here are small (link diagrams and
//! group presentations), so growth during pivoting stays far from overflow.

/// Diagonal form with the divisibility chain `d_1 | d_2 | ...`. The list has
/// one entry per diagonal slot (`min(rows, cols)`), zeros at the tail when
/// the rank is deficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<u64>,
    pub left: Option<Vec<Vec<i64>>>,
    pub right: Option<Vec<Vec<i64>>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| **d != 0).count()
    }
}

/// Compute the Smith normal form. `with_transforms` also accumulates the
/// unimodular row and column operations.
pub fn smith_normal_form(m: &[Vec<i64>], with_transforms: bool) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut left = with_transforms.then(|| identity(rows));
    let mut right = with_transforms.then(|| identity(cols));
    let dim = rows.min(cols);

    for k in 0..dim {
        if !move_pivot(&mut a, k, &mut left, &mut right) {
            break;
        }
        loop {
            clear_column(&mut a, k, &mut left);
            clear_row(&mut a, k, &mut right);
            if column_clear(&a, k) && row_clear(&a, k) {
                // Enforce divisibility of the remaining block by the pivot.
                if let Some((i, j)) = non_divisible_entry(&a, k) {
                    let row = a[i].clone();
                    for (x, v) in a[k].iter_mut().zip(row) {
                        *x += v;
                    }
                    if let Some(l) = left.as_mut() {
                        let row = l[i].clone();
                        for (x, v) in l[k].iter_mut().zip(row) {
                            *x += v;
                        }
                    }
                    let _ = j;
                    continue;
                }
                break;
            }
        }
    }

    let mut divisors = Vec::with_capacity(dim);
    for k in 0..dim {
        let v = a[k][k].unsigned_abs();
        divisors.push(u64::try_from(v).expect("divisor fits in u64"));
    }
    SmithForm {
        divisors,
        left: left.map(downcast),
        right: right.map(downcast),
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn downcast(m: Vec<Vec<i128>>) -> Vec<Vec<i64>> {
    m.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).expect("transform entry fits in i64"))
                .collect()
        })
        .collect()
}

/// Move the submatrix entry of least nonzero magnitude to `(k, k)`.
/// Returns false when the submatrix is zero.
fn move_pivot(
    a: &mut [Vec<i128>],
    k: usize,
    left: &mut Option<Vec<Vec<i128>>>,
    right: &mut Option<Vec<Vec<i128>>>,
) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut best: Option<(usize, usize)> = None;
    for i in k..rows {
        for j in k..cols {
            if a[i][j] != 0
                && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
            {
                best = Some((i, j));
            }
        }
    }
    let Some((i, j)) = best else { return false };
    if i != k {
        a.swap(i, k);
        if let Some(l) = left.as_mut() {
            l.swap(i, k);
        }
    }
    if j != k {
        for row in a.iter_mut() {
            row.swap(j, k);
        }
        if let Some(r) = right.as_mut() {
            for row in r.iter_mut() {
                row.swap(j, k);
            }
        }
    }
    if a[k][k] < 0 {
        for row in a.iter_mut() {
            row[k] = -row[k];
        }
        if let Some(r) = right.as_mut() {
            for row in r.iter_mut() {
                row[k] = -row[k];
            }
        }
    }
    true
}

fn clear_column(a: &mut [Vec<i128>], k: usize, left: &mut Option<Vec<Vec<i128>>>) {
    loop {
        let mut changed = false;
        for i in (k + 1)..a.len() {
            if a[i][k] == 0 {
                continue;
            }
            if a[k][k] == 0 || a[i][k].abs() < a[k][k].abs() {
                a.swap(i, k);
                if let Some(l) = left.as_mut() {
                    l.swap(i, k);
                }
            }
            let q = a[i][k].div_euclid(a[k][k]);
            if q != 0 {
                let pivot_row = a[k].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= q * p;
                }
                if let Some(l) = left.as_mut() {
                    let pivot_row = l[k].clone();
                    for (x, p) in l[i].iter_mut().zip(&pivot_row) {
                        *x -= q * p;
                    }
                }
            }
            if a[i][k] != 0 {
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

fn clear_row(a: &mut [Vec<i128>], k: usize, right: &mut Option<Vec<Vec<i128>>>) {
    let cols = a.first().map_or(0, Vec::len);
    loop {
        let mut changed = false;
        for j in (k + 1)..cols {
            if a[k][j] == 0 {
                continue;
            }
            if a[k][k] == 0 || a[k][j].abs() < a[k][k].abs() {
                for row in a.iter_mut() {
                    row.swap(j, k);
                }
                if let Some(r) = right.as_mut() {
                    for row in r.iter_mut() {
                        row.swap(j, k);
                    }
                }
            }
            let q = a[k][j].div_euclid(a[k][k]);
            if q != 0 {
                for i in 0..a.len() {
                    let p = a[i][k];
                    a[i][j] -= q * p;
                }
                if let Some(r) = right.as_mut() {
                    for row in r.iter_mut() {
                        let p = row[k];
                        row[j] -= q * p;
                    }
                }
            }
            if a[k][j] != 0 {
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

fn column_clear(a: &[Vec<i128>], k: usize) -> bool {
    ((k + 1)..a.len()).all(|i| a[i][k] == 0)
}

fn row_clear(a: &[Vec<i128>], k: usize) -> bool {
    let cols = a.first().map_or(0, Vec::len);
    ((k + 1)..cols).all(|j| a[k][j] == 0)
}

fn non_divisible_entry(a: &[Vec<i128>], k: usize) -> Option<(usize, usize)> {
    let p = a[k][k];
    if p == 0 {
        return None;
    }
    let cols = a.first().map_or(0, Vec::len);
    for i in (k + 1)..a.len() {
        for j in (k + 1)..cols {
            if a[i][j] % p != 0 {
                return Some((i, j));
            }
        }
    }
    None
}

/// Brute-force reference: invariant factors via determinantal divisors,
/// `d_k = gcd(k-minors) / gcd((k-1)-minors)`. Exponential in the dimension
/// and used only to cross-check [`smith_normal_form`] on small matrices.
pub mod oracle {
    use num_integer::Integer;

    fn minor_det(m: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> i128 {
        let n = rows.len();
        if n == 1 {
            return i128::from(m[rows[0]][cols[0]]);
        }
        let mut det = 0i128;
        let mut sign = 1i128;
        for (i, &r) in rows.iter().enumerate() {
            let rest: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &x)| x)
                .collect();
            det += sign * i128::from(m[r][cols[0]]) * minor_det(m, &rest, &cols[1..]);
            sign = -sign;
        }
        det
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..n {
            for mut rest in subsets_from(first + 1, n, k - 1) {
                let mut s = vec![first];
                s.append(&mut rest);
                out.push(s);
            }
        }
        out
    }

    fn subsets_from(start: usize, n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in start..n {
            for mut rest in subsets_from(first + 1, n, k - 1) {
                let mut s = vec![first];
                s.append(&mut rest);
                out.push(s);
            }
        }
        out
    }

    /// Invariant factors by the determinantal-divisor formula.
    pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<u64> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let dim = rows.min(cols);
        let mut gcds = vec![0u128; dim + 1];
        gcds[0] = 1;
        for k in 1..=dim {
            let mut g: u128 = 0;
            for r in subsets(rows, k) {
                for c in subsets(cols, k) {
                    let d = minor_det(m, &r, &c).unsigned_abs();
                    g = g.gcd(&d);
                }
            }
            gcds[k] = g;
        }
        let mut out = Vec::with_capacity(dim);
        for k in 1..=dim {
            if gcds[k] == 0 {
                out.push(0);
            } else {
                out.push(u64::try_from(gcds[k] / gcds[k - 1]).expect("divisor fits"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_lens_matrix() {
        let snf = smith_normal_form(&[vec![4, 1], vec![1, 1]], false);
        assert_eq!(snf.divisors, vec![1, 3]);
    }

    #[test]
    fn zero_matrix() {
        let snf = smith_normal_form(&[vec![0; 3], vec![0; 3], vec![0; 3]], false);
        assert_eq!(snf.divisors, vec![0, 0, 0]);
    }

    #[test]
    fn antidiagonal() {
        let snf = smith_normal_form(&[vec![0, 1], vec![1, 0]], false);
        assert_eq!(snf.divisors, vec![1, 1]);
    }

    #[test]
    fn divisibility_fix() {
        // diag(6, 4) has invariant factors (2, 12).
        let snf = smith_normal_form(&[vec![6, 0], vec![0, 4]], false);
        assert_eq!(snf.divisors, vec![2, 12]);
    }

    #[test]
    fn oracle_agrees_on_handpicked() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![4, 1], vec![1, 1]],
            vec![vec![2, 0], vec![0, 2]],
            vec![vec![-6, 111], vec![5, -672]],
            vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]],
            vec![vec![3, 1, 0], vec![1, 2, 1]],
        ];
        for m in &cases {
            let snf = smith_normal_form(m, false);
            assert_eq!(snf.divisors, oracle::invariant_factors(m), "matrix {m:?}");
        }
    }

    #[test]
    fn divisibility_chain_holds() {
        let m = vec![vec![-6, 111, -36, 6], vec![5, -672, 210, 74], vec![0, -255, 81, 24], vec![-7, 255, -81, -10]];
        let snf = smith_normal_form(&m, false);
        for w in snf.divisors.windows(2) {
            if w[0] != 0 && w[1] != 0 {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        assert_eq!(snf.divisors, oracle::invariant_factors(&m));
    }

    #[test]
    fn transforms_are_unimodular_and_diagonalize() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let snf = smith_normal_form(&m, true);
        let l = snf.left.clone().unwrap();
        let r = snf.right.clone().unwrap();
        let det3 = |m: &[Vec<i64>]| -> i64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        assert_eq!(det3(&l).abs(), 1);
        assert_eq!(det3(&r).abs(), 1);
        // left * m * right is the diagonal of divisors.
        let mul = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
            let n = a.len();
            let p = b[0].len();
            let mut c = vec![vec![0i64; p]; n];
            for i in 0..n {
                for (k, bk) in b.iter().enumerate() {
                    for j in 0..p {
                        c[i][j] += a[i][k] * bk[j];
                    }
                }
            }
            c
        };
        let prod = mul(&mul(&l, &m), &r);
        for (i, row) in prod.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(v.unsigned_abs(), snf.divisors[i]);
                } else {
                    assert_eq!(*v, 0);
                }
            }
        }
    }
}
