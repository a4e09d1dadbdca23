//! Integer-order Bessel functions of the first kind and the infinite-line
//! walk amplitude they describe.

#[allow(unused_imports)] // inherent methods shadow these when std is linked
use num_traits::Float;

use crate::qcore::Amplitude;

/// Largest argument magnitude supported by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 1e4;

const RESCALE_ABOVE: f64 = 1e250;

/// `J_k(x)`: ascending series while its terms shrink from the start,
/// Miller's downward recurrence normalised by `J_0 + 2 sum J_{2m} = 1`
/// otherwise.
pub fn bessel_j(k: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let v = bessel_j(k, -x);
        return if k.is_multiple_of(2) { v } else { -v };
    }
    if x * x / 4.0 < f64::from(k) + 1.0 || x < 1.0 {
        series(k, x)
    } else {
        downward(k, x)
    }
}

fn series(k: u32, x: f64) -> f64 {
    let half = x / 2.0;
    // (x/2)^k / k!, built incrementally to avoid overflow
    let mut lead = 1.0;
    for j in 1..=k {
        lead *= half / f64::from(j);
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut m = 1.0;
    while term.abs() > f64::EPSILON * 1e-2 * sum.abs() {
        term *= q / (m * (m + f64::from(k)));
        sum += term;
        m += 1.0;
        if m > 500.0 {
            break;
        }
    }
    sum
}

fn downward(k: u32, x: f64) -> f64 {
    let k = k as usize;
    let big = (k as f64).max(x);
    // start well above the turning point so the seed is negligible
    let mut start = (big + 40.0 * big.cbrt() + 30.0) as usize;
    start += start % 2;
    let two_over_x = 2.0 / x;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for j in (1..=start).rev() {
        // cur = J_j, next = J_{j+1}; produce J_{j-1}
        let prev = j as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            next /= RESCALE_ABOVE;
            norm /= RESCALE_ABOVE;
            wanted /= RESCALE_ABOVE;
        }
        let order = j - 1;
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
        if order == k {
            wanted = cur;
        }
    }
    norm += cur;
    wanted / norm
}

/// Amplitude at site `j` after time `t` for a walker started at the origin
/// of the infinite unit-hopping line: `(-i)^|j| J_|j|(2t)`.
pub fn infinite_line_reference(j: i64, t: f64) -> Amplitude {
    let k = j.unsigned_abs();
    let mag = bessel_j(k as u32, 2.0 * t);
    match k % 4 {
        0 => Amplitude::new(mag, 0.0),
        1 => Amplitude::new(0.0, -mag),
        2 => Amplitude::new(-mag, 0.0),
        _ => Amplitude::new(0.0, mag),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trapezoid rule on the periodic integral representation, which
    /// converges geometrically once the node count exceeds the frequency.
    fn quadrature(k: u32, x: f64) -> f64 {
        let nodes = 4 * (x.abs() as usize + k as usize) + 200;
        let h = 2.0 * core::f64::consts::PI / nodes as f64;
        let sum: f64 = (0..nodes)
            .map(|i| {
                let tau = h * i as f64;
                (f64::from(k) * tau - x * tau.sin()).cos()
            })
            .sum();
        sum / nodes as f64
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(1, 0.0), 0.0);
        assert_eq!(infinite_line_reference(0, 0.0), Amplitude::new(1.0, 0.0));
    }

    #[test]
    fn first_zero() {
        assert!(bessel_j(0, 2.404826).abs() < 1e-5);
    }

    #[test]
    fn agrees_with_quadrature() {
        for &x in &[0.3, 1.0, 2.5, 7.0, 19.9, 20.0, 55.5, 150.0, 1000.0, 9999.0] {
            for &k in &[0u32, 1, 2, 5, 13, 40, 99, 300] {
                let a = bessel_j(k, x);
                let b = quadrature(k, x);
                assert!((a - b).abs() < 1e-10, "J_{k}({x}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn negative_argument_parity() {
        assert!((bessel_j(3, -2.0) + bessel_j(3, 2.0)).abs() < 1e-16);
        assert_eq!(bessel_j(4, -2.0), bessel_j(4, 2.0));
    }

    #[test]
    fn sum_rule() {
        for &t in &[0.5, 3.0, 10.0, 40.0] {
            let bound = (2.0 * t) as i64 + 60;
            let s: f64 = (-bound..=bound).map(|j| infinite_line_reference(j, t).norm_sqr()).sum();
            assert!((s - 1.0).abs() < 1e-10, "t={t} sum={s}");
        }
    }
}
