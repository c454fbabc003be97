//! Gamma function and the normalized Bessel function.
//!
//! The normalized Bessel function is
//!
//! ```text
//! j_a(u) = Gamma(a+1) * sum_{n>=0} (-1)^n (u/2)^{2n} / (n! Gamma(n+a+1))
//!        = 2^a Gamma(a+1) J_a(u) / u^a,
//! ```
//!
//! entire and even in `u`, with `j_a(0) = 1`. It is evaluated by the power
//! series with compensated summation inside the switching radius, and by the
//! large-argument asymptotic expansion of `J_a` outside it. Purely imaginary
//! arguments always use the series: all its terms are then positive, so there
//! is no cancellation at any magnitude.

use num_complex::Complex64;

/// Lanczos coefficients, g = 7 (published table, kept verbatim).
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments (Lanczos approximation, reflection for
/// the left half-line).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Radius below which the power series is used unconditionally.
const SERIES_RADIUS: f64 = 12.0;
/// Hard cap on the number of series terms.
const SERIES_MAX_TERMS: usize = 500;

/// Normalized Bessel function `j_a(u)` for `a >= -1/2` and complex `u`.
pub fn normalized_bessel(alpha: f64, u: Complex64) -> Complex64 {
    normalized_bessel_with_error(alpha, u).0
}

/// Same, returning a rough absolute error estimate alongside the value.
///
/// Branch selection is driven by the cancellation the series would suffer:
/// its largest term is ~e^|u| while the result is ~e^|Im u|, so
/// `|u| - |Im u|` is the number of e-foldings lost. Purely imaginary
/// arguments lose nothing (all terms positive) and always use the series;
/// real-dominant arguments switch to the large-argument expansion early.
pub fn normalized_bessel_with_error(alpha: f64, u: Complex64) -> (Complex64, f64) {
    assert!(
        alpha >= -0.5,
        "normalized Bessel requires alpha >= -1/2, got {alpha}"
    );
    // j is even; keep Re u >= 0 so the asymptotic branch is principal.
    let u = if u.re < 0.0 { -u } else { u };
    let modulus = u.norm();
    let cancellation = modulus - u.im.abs();
    if modulus <= SERIES_RADIUS || cancellation <= SERIES_RADIUS {
        series(alpha, u)
    } else {
        match asymptotic(alpha, u) {
            Some(result) => result,
            // Internal fallback, never a user error: the series still
            // converges, just with a larger cancellation-driven estimate.
            None => series(alpha, u),
        }
    }
}

fn series(alpha: f64, u: Complex64) -> (Complex64, f64) {
    let q = (u / 2.0) * (u / 2.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut comp = Complex64::new(0.0, 0.0); // Kahan compensation
    let mut max_term: f64 = 1.0;
    let mut n = 0usize;
    while n < SERIES_MAX_TERMS {
        let nf = (n + 1) as f64;
        term = term * (-q) / (nf * (nf + alpha));
        max_term = max_term.max(term.norm());
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        n += 1;
        if term.norm() <= 1e-17 * sum.norm().max(1e-300) && n as f64 > u.norm() / 2.0 {
            break;
        }
    }
    // Cancellation estimate: eps times the largest intermediate term.
    let est = 2.0 * f64::EPSILON * max_term + term.norm();
    (sum, est)
}

/// Large-|u| expansion of J_a via the P/Q modulus-phase series, converted to
/// the normalized form. Returns None when the divergent tail cannot reach
/// ~1e-11 relative accuracy for this (a, u).
fn asymptotic(alpha: f64, u: Complex64) -> Option<(Complex64, f64)> {
    let omega = u - Complex64::new((0.5 * alpha + 0.25) * std::f64::consts::PI, 0.0);
    let four_a2 = 4.0 * alpha * alpha;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut a_m = 1.0_f64; // a_m / u^m accumulated below
    let mut pow = Complex64::new(1.0, 0.0);
    let mut last_size = f64::INFINITY;
    let mut reached = f64::INFINITY;
    for m in 1..=40usize {
        let mf = m as f64;
        a_m *= (four_a2 - (2.0 * mf - 1.0).powi(2)) / (8.0 * mf);
        pow /= u;
        let term = a_m * pow;
        let size = term.norm();
        if size > last_size {
            // divergent tail reached; stop before it grows
            break;
        }
        last_size = size;
        reached = size;
        let signed = if (m / 2) % 2 == 0 { term } else { -term };
        if m % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if size < 1e-18 {
            reached = size;
            break;
        }
    }
    let scale = (p.norm() + q.norm()).max(1.0);
    if !(reached <= 1e-11 * scale) {
        return None;
    }
    let j_big =
        (Complex64::new(2.0 / std::f64::consts::PI, 0.0) / u).sqrt() * (omega.cos() * p - omega.sin() * q);
    let norm_factor = 2.0_f64.powf(alpha) * gamma(alpha + 1.0) * u.powf(-alpha);
    let value = norm_factor * j_big;
    let est = reached * norm_factor.norm() * (2.0 / u.norm()).sqrt() * omega.cos().norm().max(omega.sin().norm())
        + 4.0 * f64::EPSILON * value.norm();
    Some((value, est))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(1.5) - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        // Legendre duplication at a generic argument
        let x = 1.3_f64;
        let lhs = gamma(2.0 * x);
        let rhs = 2.0_f64.powf(2.0 * x - 1.0) / std::f64::consts::PI.sqrt() * gamma(x) * gamma(x + 0.5);
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs());
    }

    #[test]
    fn bessel_at_zero_is_one() {
        for alpha in [-0.5, 0.0, 0.5, 1.0, 2.7] {
            let v = normalized_bessel(alpha, c(0.0, 0.0));
            assert_eq!(v, c(1.0, 0.0));
        }
    }

    /// Independent 200-term reference summation, kept deliberately naive.
    fn series_oracle(alpha: f64, u: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for n in 0..200 {
            sum += term;
            let nf = (n + 1) as f64;
            term = term * (-(u / 2.0) * (u / 2.0)) / (nf * (nf + alpha));
        }
        sum
    }

    #[test]
    fn half_integer_closed_forms() {
        // j_{1/2}(u) = sin(u)/u, j_{-1/2}(u) = cos(u)
        let u = c(1.0, 0.0);
        let sinc = (u.sin() / u - normalized_bessel(0.5, u)).norm();
        assert!(sinc < 1e-12, "j_1/2 vs sin(u)/u: {sinc:e}");
        let against_oracle = (series_oracle(0.5, u) - normalized_bessel(0.5, u)).norm();
        assert!(against_oracle < 1e-12);

        for x in [0.3, 3.0, 11.0, 17.0, 31.0, 65.0, 240.0] {
            for im in [0.0, 0.4, -2.0] {
                let u = c(x, im);
                let a = (normalized_bessel(0.5, u) - u.sin() / u).norm();
                let b = (normalized_bessel(-0.5, u) - u.cos()).norm();
                let scale = u.cos().norm().max(1.0);
                assert!(a < 1e-10 * scale, "j_1/2 at {u}: {a:e}");
                assert!(b < 1e-10 * scale, "j_-1/2 at {u}: {b:e}");
            }
        }
    }

    #[test]
    fn order_recurrence_ties_the_branches_together() {
        // j_{a-1}(u) + u^2 / (4a(a+1)) j_{a+1}(u) = j_a(u) holds exactly;
        // evaluating it across the series/asymptotic switch catches branch
        // inconsistencies.
        for alpha in [0.7_f64, 1.3, 2.0, 3.2] {
            for u in [c(5.0, 0.0), c(13.0, 0.0), c(25.0, 1.0), c(45.0, 0.0), c(8.0, 20.0)] {
                let lhs = normalized_bessel(alpha - 1.0, u)
                    + u * u / (4.0 * alpha * (alpha + 1.0)) * normalized_bessel(alpha + 1.0, u);
                let rhs = normalized_bessel(alpha, u);
                let scale = rhs.norm().max(u.im.abs().exp() * 1e-3);
                assert!(
                    (lhs - rhs).norm() < 1e-9 * scale,
                    "alpha={alpha} u={u}: {:e} vs scale {scale:e}",
                    (lhs - rhs).norm()
                );
            }
        }
    }

    #[test]
    fn evenness() {
        for (alpha, u) in [
            (0.7, c(1.3, 0.4)),
            (1.5, c(-8.0, 2.0)),
            (0.0, c(40.0, 1.0)),
            (2.5, c(0.0, 55.0)),
        ] {
            let a = normalized_bessel(alpha, u);
            let b = normalized_bessel(alpha, -u);
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn pure_imaginary_large_argument_uses_series_without_cancellation() {
        // j_a(iv) has positive terms; compare with the closed form for a = 1/2:
        // j_{1/2}(iv) = sin(iv)/(iv) = sinh(v)/v.
        for v in [10.0, 80.0, 300.0] {
            let got = normalized_bessel(0.5, c(0.0, v));
            let want = v.sinh() / v;
            assert!(
                (got.re - want).abs() < 1e-12 * want,
                "v={v}: got {} want {want}",
                got.re
            );
            assert!(got.im.abs() < 1e-12 * want);
        }
    }

    #[test]
    fn asymptotic_matches_series_on_the_overlap() {
        // Near the switching radius both methods reach ~1e-11 absolute
        // accuracy; they must agree there.
        for alpha in [0.0, 0.8, 1.5, 3.0] {
            for r in [12.2, 13.5] {
                let u = c(r, 0.4);
                let (series_val, _) = series(alpha, u);
                let (asym_val, _) = asymptotic(alpha, u).expect("asymptotic converges here");
                assert!(
                    (series_val - asym_val).norm() < 5e-11,
                    "alpha={alpha} u={u}: {:e}",
                    (series_val - asym_val).norm()
                );
            }
        }
    }
}
