//! Acceptance suite: every check prints one pass/fail line with the measured
//! value and its pinned tolerance, and fails the build when out of budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_complex::Complex64;

use dunkl_core::convolve::{
    approx_identity, dunkl_convolve_with, translate_1d_fn, BumpFunction,
};
use dunkl_core::foundation::config::{mehta_constant, GroupConfig};
use dunkl_core::foundation::quad::{halfline_power_rule, ProductRule};
use dunkl_core::hypo::{
    check_growth, check_zero_growth, lemma_lower_bound_check, symbol_of, verdict, Verdict,
};
use dunkl_core::intertwine::{vk_function_complex, vk_poly, vk_transmutation_solver};
use dunkl_core::kernel::{kernel_1d, kernel_1d_integral, kernel_eigen_check, kernel_product};
use dunkl_core::polyalg::{dunkl_apply, parse_poly, MultiPoly, RationalK};
use dunkl_core::transform::{
    dunkl_transform, dunkl_transform_with, plancherel_defect_with, radial_transform,
    RadialProfile, SampledFunction,
};

fn report(number: u32, name: &str, measured: f64, tolerance: f64, pass: bool) {
    println!(
        "acceptance {number:02} {name}: {} (measured {measured:.3e}, budget {tolerance:.1e})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {number:02} {name}: measured {measured:e} vs budget {tolerance:e}");
}

struct SplitMix(u64);

impl SplitMix {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let unit = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * unit
    }
}

#[test]
fn acceptance_01_kernel_dual_route() {
    let mut worst = 0.0_f64;
    for &k in &[0.3, 1.0, 2.5] {
        for ix in 0..9 {
            for iz in 0..9 {
                let x = -5.0 + 10.0 * ix as f64 / 8.0;
                let z = -5.0 + 10.0 * iz as f64 / 8.0;
                let series = kernel_1d(k, x, Complex64::new(z, 0.0)).value;
                let integral = kernel_1d_integral(k, x, Complex64::new(z, 0.0))
                    .expect("integral route converges on the lattice")
                    .value;
                let rel = (series - integral).norm() / series.norm().max(1.0);
                worst = worst.max(rel);
            }
        }
    }
    report(1, "kernel-dual-route", worst, 1e-8, worst <= 1e-8);
}

#[test]
fn acceptance_02_kernel_bounds() {
    let mut rng = SplitMix(0xACCE5502);
    let mut worst_unit = 0.0_f64;
    let mut worst_growth = 0.0_f64;
    for d in [1usize, 2] {
        let config = if d == 1 {
            GroupConfig::rank1(1.0).unwrap()
        } else {
            GroupConfig::product(&[0.6, 1.2]).unwrap()
        };
        for _ in 0..500 {
            let x: Vec<f64> = (0..d).map(|_| rng.uniform(-5.0, 5.0)).collect();
            let y: Vec<f64> = (0..d).map(|_| rng.uniform(-5.0, 5.0)).collect();
            // |K(ix, y)| <= 1: evaluate via the product of K(y_j, i x_j)
            let ix: Vec<Complex64> = x.iter().map(|&v| Complex64::new(0.0, v)).collect();
            let modulus = kernel_product(&config, &y, &ix).value.norm();
            worst_unit = worst_unit.max(modulus - 1.0);

            // |K(x, z)| <= exp(|x| |Re z|)
            let z: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)))
                .collect();
            let xs: Vec<f64> = (0..d).map(|_| rng.uniform(-2.5, 2.5)).collect();
            let value = kernel_product(&config, &xs, &z).value.norm();
            let x_norm = xs.iter().map(|v| v * v).sum::<f64>().sqrt();
            let re_norm = z.iter().map(|c| c.re * c.re).sum::<f64>().sqrt();
            let bound = (x_norm * re_norm).exp();
            worst_growth = worst_growth.max(value / bound - 1.0);
        }
    }
    let pass = worst_unit <= 1e-10 && worst_growth <= 1e-9;
    report(
        2,
        "kernel-bounds",
        worst_unit.max(worst_growth),
        1e-10,
        pass,
    );
}

#[test]
fn acceptance_03_eigen_equation() {
    let mut rng = SplitMix(0xACCE5503);
    let mut worst = 0.0_f64;
    for d in [1usize, 2] {
        let config = if d == 1 {
            GroupConfig::rank1(0.9).unwrap()
        } else {
            GroupConfig::product(&[0.5, 1.5]).unwrap()
        };
        for sample in 0..50 {
            let mut x: Vec<f64> = (0..d).map(|_| rng.uniform(-1.5, 1.5)).collect();
            if sample % 10 == 0 {
                x[0] = 0.0; // exercise the removable-singularity branch
            }
            let z: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.uniform(-1.5, 1.5), 0.0))
                .collect();
            let residuals = kernel_eigen_check(&config, &z, &x, 1e-4).unwrap();
            for r in residuals {
                worst = worst.max(r);
            }
        }
    }
    report(3, "kernel-eigen-equation", worst, 1e-5, worst <= 1e-5);
}

#[test]
fn acceptance_04_intertwiner_exactness() {
    let kq = RationalK::from_pairs(&[(2, 3), (7, 4)]).unwrap();
    let mut rng = SplitMix(0xACCE5504);
    let mut checked = 0usize;
    for _ in 0..50 {
        let mut p = MultiPoly::zero(2);
        for _ in 0..7 {
            let e = vec![
                (rng.next_u64() % 6) as u32,
                (rng.next_u64() % 5) as u32,
            ];
            let c = num_rational::BigRational::new(
                ((rng.next_u64() % 19) as i64 - 9).into(),
                (1 + (rng.next_u64() % 7) as i64).into(),
            );
            p = p.add(&MultiPoly::monomial(2, e, c));
        }
        assert!(p.total_degree() <= 10);
        let a = vk_poly(&kq, &p).unwrap();
        let b = vk_transmutation_solver(&kq, &p).unwrap();
        assert_eq!(a, b, "routes must agree exactly");
        // transmutation relation, exactly
        for j in 0..2 {
            let lhs = dunkl_apply(&kq, j, &a).unwrap();
            let rhs = vk_poly(&kq, &p.partial_derivative(j)).unwrap();
            assert_eq!(lhs, rhs);
        }
        checked += 1;
    }
    report(4, "intertwiner-exactness", checked as f64, 50.0, checked == 50);
}

#[test]
fn acceptance_05_intertwiner_kernel_identity() {
    let config = GroupConfig::product(&[0.5, 1.5]).unwrap();
    let mut rng = SplitMix(0xACCE5505);
    let mut worst = 0.0_f64;
    for _ in 0..25 {
        let x: Vec<f64> = (0..2).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let z: Vec<Complex64> = (0..2)
            .map(|_| Complex64::new(rng.uniform(-2.0, 2.0), 0.0))
            .collect();
        let via_vk = vk_function_complex(
            &config,
            |p: &[f64]| (p[0] * z[0] + p[1] * z[1]).exp(),
            &x,
            64,
        )
        .unwrap();
        let via_kernel = kernel_product(&config, &x, &z).value;
        let rel = (via_vk - via_kernel).norm() / via_kernel.norm().max(1.0);
        worst = worst.max(rel);
    }
    report(5, "intertwiner-kernel-identity", worst, 1e-8, worst <= 1e-8);
}

#[test]
fn acceptance_06_plancherel() {
    let mut worst_d1 = 0.0_f64;
    for k in [0.7, 1.0] {
        let config = GroupConfig::rank1(k).unwrap();
        let f = SampledFunction::gaussian(1);
        let defect = plancherel_defect_with(&config, &f, 1e-6, 96).unwrap();
        worst_d1 = worst_d1.max(defect);
    }
    let config2 = GroupConfig::product(&[0.5, 0.5]).unwrap();
    let f2 = SampledFunction::gaussian(2);
    let defect_d2 = plancherel_defect_with(&config2, &f2, 1e-4, 48).unwrap();
    let pass = worst_d1 <= 1e-6 && defect_d2 <= 1e-4;
    report(6, "plancherel", worst_d1.max(defect_d2), 1e-4, pass);
}

#[test]
fn acceptance_07_inversion_round_trip() {
    // d = 1, k = 1
    let config = GroupConfig::rank1(1.0).unwrap();
    let f = SampledFunction::gaussian(1);
    let spectral_rule = halfline_power_rule(2.0, 12.0, 96).unwrap();
    let spectral_nodes: Vec<Vec<f64>> = spectral_rule
        .nodes
        .iter()
        .flat_map(|&y| [vec![y], vec![-y]])
        .collect();
    let forward = dunkl_transform_with(&config, &f, &spectral_nodes, 1e-7, 96).unwrap();
    let prefactor = {
        let ck = mehta_constant(&config);
        ck * ck / 2.0_f64.powf(2.0 * config.gamma() + 1.0)
    };
    let mut sup_d1 = 0.0_f64;
    for i in 0..13 {
        let x = -3.0 + 0.5 * i as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for (point, value) in spectral_nodes.iter().zip(&forward.values) {
            let idx = spectral_rule
                .nodes
                .iter()
                .position(|&n| n == point[0].abs())
                .unwrap();
            let w = spectral_rule.weights[idx];
            let kernel = kernel_1d(1.0, point[0], Complex64::new(0.0, x)).value;
            sum += w * value * kernel;
        }
        let recovered = prefactor * sum;
        sup_d1 = sup_d1.max((recovered.re - f.eval(&[x])).abs());
        sup_d1 = sup_d1.max(recovered.im.abs());
    }

    // d = 2, k = (0.5, 0.5), tensor Gaussian. The spectral data decays like
    // exp(-|y|^2/2), so the inverse integral is truncated at |y_j| <= 8
    // (tail ~ 1e-13) while the forward quadrature keeps the function's box.
    let config2 = GroupConfig::product(&[0.5, 0.5]).unwrap();
    let f2 = SampledFunction::gaussian(2);
    let rule2 = ProductRule::dunkl_box(config2.multiplicities(), 8.0, 40).unwrap();
    let mut grid = Vec::new();
    rule2.for_each_node(|y, _| grid.push(y.to_vec()));
    let forward2 = dunkl_transform_with(&config2, &f2, &grid, 1e-6, 56).unwrap();
    let prefactor2 = {
        let ck = mehta_constant(&config2);
        ck * ck / 2.0_f64.powf(2.0 * config2.gamma() + 2.0)
    };
    let mut sup_d2 = 0.0_f64;
    for xi in [-3.0, -1.5, 0.0, 1.5, 3.0] {
        for xj in [-3.0, 0.75, 2.25] {
            let x = [xi, xj];
            let mut sum = Complex64::new(0.0, 0.0);
            let mut slot = 0usize;
            rule2.for_each_node(|y, w| {
                let kernel = kernel_1d(0.5, y[0], Complex64::new(0.0, x[0])).value
                    * kernel_1d(0.5, y[1], Complex64::new(0.0, x[1])).value;
                sum += w * forward2.values[slot] * kernel;
                slot += 1;
            });
            let recovered = prefactor2 * sum;
            sup_d2 = sup_d2.max((recovered.re - f2.eval(&x)).abs());
        }
    }
    let pass = sup_d1 <= 1e-5 && sup_d2 <= 1e-4;
    report(7, "inversion-round-trip", sup_d1.max(sup_d2), 1e-4, pass);
}

#[test]
fn acceptance_08_radial_reduction() {
    let config = GroupConfig::product(&[0.5, 0.5]).unwrap();
    let profile = RadialProfile::gaussian();
    let f = profile.lift(2).unwrap();
    let radii: Vec<f64> = (0..10).map(|i| 0.25 + 0.35 * i as f64).collect();
    let via_radial = radial_transform(&config, &profile, &radii, 1e-8).unwrap();
    let ys: Vec<Vec<f64>> = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            // spread directions around the circle; the transform of a radial
            // function depends on |y| only
            let theta = 0.7 * i as f64;
            vec![r * theta.cos(), r * theta.sin()]
        })
        .collect();
    let via_full = dunkl_transform(&config, &f, &ys, 1e-7).unwrap();
    let mut worst = 0.0_f64;
    for (a, b) in via_radial.iter().zip(&via_full.values) {
        worst = worst.max((a - b.re).abs());
        worst = worst.max(b.im.abs());
    }
    report(8, "radial-reduction", worst, 1e-6, worst <= 1e-6);
}

#[test]
fn acceptance_09_product_formula() {
    let k = 1.0;
    let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut worst = 0.0_f64;
    for &x in &grid {
        for &y in &grid {
            for &z in &grid {
                let zc = Complex64::new(z, 0.0);
                let translated =
                    translate_1d_fn(k, y, |t| kernel_1d(k, t, zc).value, x, 96).unwrap();
                let product = kernel_1d(k, x, zc).value * kernel_1d(k, y, zc).value;
                worst = worst.max((translated - product).norm());
            }
        }
    }
    report(9, "translation-product-formula", worst, 1e-7, worst <= 1e-7);
}

#[test]
fn acceptance_10_convolution_theorem() {
    let k = 1.0;
    let config = GroupConfig::rank1(k).unwrap();
    let f = SampledFunction::gaussian(1);
    let g = SampledFunction::new(
        1,
        dunkl_core::transform::Decay::Gaussian {
            amplitude: 1.01,
            rate: 0.3,
        },
        12.0,
        |x: &[f64]| (-0.3 * x[0] * x[0]).exp(),
    )
    .unwrap();

    // F(f *_D g) at ten frequencies by direct quadrature of the convolution
    let outer = halfline_power_rule(2.0 * k, 12.0, 128).unwrap();
    let freqs: Vec<f64> = (0..10).map(|i| 0.25 + 0.3 * i as f64).collect();
    let ys: Vec<Vec<f64>> = freqs.iter().map(|&w| vec![w]).collect();
    let ff = dunkl_transform(&config, &f, &ys, 1e-7).unwrap();
    let fg = dunkl_transform(&config, &g, &ys, 1e-7).unwrap();
    let mut worst = 0.0_f64;
    for (i, &omega) in freqs.iter().enumerate() {
        let mut lhs = Complex64::new(0.0, 0.0);
        for (&x, &w) in outer.nodes.iter().zip(&outer.weights) {
            for s in [x, -x] {
                let conv = dunkl_convolve_with(&config, &f, &g, &[s], 1e-5, 96, 64).unwrap();
                let kernel = kernel_1d(k, s, Complex64::new(0.0, -omega)).value;
                lhs += w * conv * kernel;
            }
        }
        let rhs = ff.values[i] * fg.values[i];
        worst = worst.max((lhs - rhs).norm());
    }

    // commutativity residual
    let mut worst_comm = 0.0_f64;
    for x in [-1.3, 0.0, 0.9] {
        let a = dunkl_convolve_with(&config, &f, &g, &[x], 1e-5, 96, 64).unwrap();
        let b = dunkl_convolve_with(&config, &g, &f, &[x], 1e-5, 96, 64).unwrap();
        worst_comm = worst_comm.max((a - b).abs());
    }
    let pass = worst <= 1e-4 && worst_comm <= 1e-6;
    report(10, "convolution-theorem", worst.max(worst_comm), 1e-4, pass);
}

#[test]
fn acceptance_11_approximate_identity() {
    let config = GroupConfig::rank1(1.0).unwrap();
    let f = SampledFunction::gaussian(1);
    let xs: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
    let mut sups = Vec::new();
    for eps in [0.4, 0.2, 0.1, 0.05] {
        let phi = approx_identity(&config, eps).unwrap();
        let mut sup = 0.0_f64;
        for &x in &xs {
            let conv = dunkl_convolve_with(&config, &f, &phi, &[x], 1e-5, 48, 64).unwrap();
            sup = sup.max((conv - f.eval(&[x])).abs());
        }
        sups.push(sup);
    }
    let monotone = sups.windows(2).all(|w| w[1] < w[0]);
    let final_err = *sups.last().unwrap();
    println!("acceptance 11 approx-identity ladder: {sups:?}");
    let pass = monotone && final_err <= 1e-3;
    report(11, "approximate-identity", final_err, 1e-3, pass);
}

#[test]
fn acceptance_12_hypoelliptic_anchor() {
    let config = GroupConfig::product(&[1.0, 1.0]).unwrap();
    let op = parse_poly("T1^2 + T2^2", 2, 'T').unwrap();
    // the symbol equals z1^2 + z2^2 exactly
    let symbol = symbol_of(&config, &op).unwrap();
    assert_eq!(
        symbol.polynomial(),
        &parse_poly("x1^2 + x2^2", 2, 'x').unwrap()
    );
    let report_full = verdict(&config, &op).unwrap();
    assert_eq!(report_full.verdict, Verdict::Hypoelliptic);
    // growth passes with A = 0 admissible from M = 1
    assert_eq!(report_full.growth.threshold_radius, 1.0);
    assert!(
        report_full.growth.best_exponent <= 0.0,
        "least admissible exponent {}",
        report_full.growth.best_exponent
    );
    // final-rung zero-set ratio clears the threshold
    let final_ratio = report_full
        .zeroset
        .rungs
        .last()
        .unwrap()
        .min_ratio
        .expect("zeros found at the final rung");
    report(
        12,
        "hypoelliptic-anchor",
        final_ratio,
        5.0,
        final_ratio >= 5.0,
    );
}

#[test]
fn acceptance_13_negative_control() {
    let config = GroupConfig::product(&[1.0, 1.0]).unwrap();
    let op = parse_poly("T1", 2, 'T').unwrap();
    let full = verdict(&config, &op).unwrap();
    let growth = check_growth(
        &symbol_of(&config, &op).unwrap(),
        &[1.0, 10.0, 100.0],
        64,
        10.0,
        3,
    )
    .unwrap();
    let pass = full.verdict == Verdict::NotHypoelliptic && !growth.pass;
    report(
        13,
        "negative-control",
        if pass { 0.0 } else { 1.0 },
        0.0,
        pass,
    );
}

#[test]
fn acceptance_14_spectral_lower_bound_slope() {
    let config = GroupConfig::rank1(1.0).unwrap();
    let bump = BumpFunction::new(1.0).unwrap().normalized_peak(1).unwrap();
    let xs: Vec<Vec<f64>> = (0..12)
        .map(|i| vec![5.0 * (40.0_f64 / 5.0).powf(i as f64 / 11.0)])
        .collect();
    let lb = lemma_lower_bound_check(&config, &bump, &xs).unwrap();
    let floor = lb.reference_exponent - 0.1; // -(2 gamma + d) - 0.1 = -3.1
    assert!((floor + 3.1).abs() < 1e-12);
    report(
        14,
        "spectral-lower-bound-slope",
        lb.fitted_slope,
        floor,
        lb.fitted_slope >= floor,
    );
}

#[test]
fn zero_growth_protocol_sanity() {
    // supporting check for 12/13: the ladder protocol on the anchor symbol
    let config = GroupConfig::product(&[1.0, 1.0]).unwrap();
    let s = symbol_of(&config, &parse_poly("T1^2 + T2^2", 2, 'T').unwrap()).unwrap();
    let z = check_zero_growth(&s, &[10.0, 100.0, 1000.0, 10000.0], 24, 7).unwrap();
    assert!(z.pass);
    let ratios: Vec<f64> = z.rungs.iter().map(|r| r.min_ratio.unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[1] >= 2.0 * w[0]));
}
