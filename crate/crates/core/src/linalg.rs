use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Determinant over the rationals by Gaussian elimination.
///
/// Zero entries below the pivot are skipped, which keeps the near-triangular
/// matrices produced by one-sided coefficient sequences cheap.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            let (upper, lower) = m.split_at_mut(r);
            let pivot_row = &upper[col];
            for (dst, src) in lower[0][col..].iter_mut().zip(&pivot_row[col..]) {
                if !src.is_zero() {
                    *dst -= &factor * src;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(vec![]), int(1));
        assert_eq!(determinant(vec![vec![rat(3, 2)]]), rat(3, 2));
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(determinant(m), int(-1));
        let m = vec![
            vec![int(2), int(0), int(1)],
            vec![int(1), int(3), int(2)],
            vec![int(1), int(1), int(1)],
        ];
        // 2(3-2) - 0 + 1(1-3)
        assert_eq!(determinant(m), int(0));
        let m = vec![
            vec![int(1), int(2), int(3)],
            vec![int(0), int(1), int(4)],
            vec![int(5), int(6), int(0)],
        ];
        assert_eq!(determinant(m), int(1));
    }
}
