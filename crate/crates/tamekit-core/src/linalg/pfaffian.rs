//! Pfaffian of a skew-symmetric matrix by recursive expansion along the
//! first row. Exponential in principle, fine for the dims (<= 16) this
//! toolkit targets.

use super::RMat;

/// Pfaffian of a skew-symmetric matrix. Returns 0 for odd dimension.
pub fn pfaffian(m: &RMat) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "pfaffian needs a square matrix");
    if n % 2 != 0 {
        return 0.0;
    }
    let idx: Vec<usize> = (0..n).collect();
    pf_rec(m, &idx)
}

/// Sign of the Pfaffian: the orientation induced by a nondegenerate skew
/// matrix.
pub fn pfaffian_sign(m: &RMat) -> i8 {
    if pfaffian(m) >= 0.0 {
        1
    } else {
        -1
    }
}

fn pf_rec(m: &RMat, idx: &[usize]) -> f64 {
    let n = idx.len();
    if n == 0 {
        return 1.0;
    }
    if n == 2 {
        return m[(idx[0], idx[1])];
    }
    let mut acc = 0.0;
    let mut sign = 1.0;
    for j in 1..n {
        let a = m[(idx[0], idx[j])];
        if a != 0.0 {
            let rest: Vec<usize> = idx[1..]
                .iter()
                .cloned()
                .filter(|&k| k != idx[j])
                .collect();
            acc += sign * a * pf_rec(m, &rest);
        }
        sign = -sign;
    }
    acc
}
