mod common;

use approx::assert_relative_eq;
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use superatom::linalg::LuDecomposition;
use superatom::scattering::linspace;
use superatom::{build_h_eff, device_preset, eigendecompose, resolvent_apply, ArrayModel, ComplexMatrix, DevicePreset};

/// Anti-Bragg N=8, gamma'=0: eigenvalues of (H - omega0) / Gamma, frozen
/// from the characteristic-polynomial oracle (and an external LAPACK run).
const ANTI_BRAGG_8: [(f64, f64); 8] = [
    (-1.011045375391106, -0.375405074117385),
    (-0.866355946727853, -1.544169608057908),
    (-0.683531348042916, -0.069608503620293),
    (-0.538841919379664, -0.010816814204413),
    (0.538841919379664, -0.010816814204413),
    (0.683531348042917, -0.069608503620294),
    (0.866355946727854, -1.544169608057909),
    (1.011045375391107, -0.375405074117385),
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scaled_eigenvalues(model: &ArrayModel) -> Vec<Complex64> {
    let h = build_h_eff(model).unwrap().matrix;
    let s = eigendecompose(&h).unwrap();
    s.eigenvalues.iter().map(|w| (w - omega0()) / GAMMA).collect()
}

#[test]
fn oracle_reproduces_frozen_anti_bragg_roots() {
    let model = ArrayModel::homogeneous(8, omega0(), GAMMA, 0.0, 0.25).unwrap();
    let roots = polynomial_roots(&characteristic_polynomial(&reference_h_eff(&model, GAMMA)));
    let frozen: Vec<Complex64> = ANTI_BRAGG_8.iter().map(|&(a, b)| c(a, b)).collect();
    assert!(multiset_distance(&roots, &frozen) < 1e-9);
}

#[test]
fn anti_bragg_spectrum() {
    let model = ArrayModel::homogeneous(8, omega0(), GAMMA, 0.0, 0.25).unwrap();
    let got = scaled_eigenvalues(&model);
    let frozen: Vec<Complex64> = ANTI_BRAGG_8.iter().map(|&(a, b)| c(a, b)).collect();
    assert!(multiset_distance(&got, &frozen) < 1e-10);

    // mirror symmetry omega -> 2 omega0 - conj(omega)
    let mirrored: Vec<Complex64> = got.iter().map(|w| -w.conj()).collect();
    assert!(multiset_distance(&got, &mirrored) < 1e-10);

    // exactly two dominant decay rates
    let mut decays: Vec<f64> = got.iter().map(|w| -2.0 * w.im).collect();
    decays.sort_by(|a, b| b.total_cmp(a));
    assert!((decays[0] - decays[1]).abs() < 1e-10);
    assert!(decays[1] > 4.0 * decays[2]);
}

#[test]
fn bragg_one_superradiant_seven_dark() {
    let model = ArrayModel::homogeneous(8, omega0(), GAMMA, 0.0, 0.5).unwrap();
    let got = scaled_eigenvalues(&model);
    let bright: Vec<_> = got.iter().filter(|w| w.im < -1.0).collect();
    assert_eq!(bright.len(), 1);
    assert_relative_eq!(-2.0 * bright[0].im, 8.0, max_relative = 1e-9);
    assert!(bright[0].re.abs() < 1e-9);
    let dark: Vec<_> = got.iter().filter(|w| w.im >= -1.0).collect();
    assert_eq!(dark.len(), 7);
    for w in dark {
        assert!(w.norm() < 1e-9, "{w}");
    }
}

#[test]
fn bragg_dark_manifold_is_flagged() {
    let model = ArrayModel::homogeneous(8, omega0(), GAMMA, 0.0, 0.5).unwrap();
    let s = eigendecompose(&build_h_eff(&model).unwrap().matrix).unwrap();
    assert_eq!(s.flagged_count(), 7);
    let bright = s.decay_rates().iter().position(|&d| d > GAMMA).unwrap();
    assert!(!s.near_degenerate[bright]);
}

/// Device A at 5.9 GHz, (H - omega0) / (2 pi 10 MHz), from an external
/// LAPACK run.
const DEVICE_A_5P9: [(f64, f64); 8] = [
    (-0.550254356994375, -3.993187833901612),
    (0.013975559169468, -0.014695892109437),
    (0.016835015043343, -0.015596826660665),
    (0.020774547851812, -0.039506217989564),
    (0.024334684815898, -0.015331393404034),
    (0.041989973845311, -0.015165193245861),
    (0.090200967985228, -0.019853202637542),
    (0.342143608283319, -0.079363440051286),
];

#[test]
fn device_a_matches_oracle() {
    let model = device_preset(DevicePreset::A, superatom::units::ghz_to_rad(5.9)).unwrap();
    let s = eigendecompose(&build_h_eff(&model).unwrap().matrix).unwrap();
    let got: Vec<Complex64> = s.eigenvalues.iter().map(|w| (w - model.medium().omega_ref) / GAMMA).collect();
    let frozen: Vec<Complex64> = DEVICE_A_5P9.iter().map(|&(a, b)| c(a, b)).collect();
    let dist = multiset_distance(&got, &frozen);
    assert!(dist < 1e-10, "distance {dist:e}");
    // The subradiant cluster spans ~0.03 Gamma, so roots recovered from
    // polynomial coefficients are only good to a few 1e-5.
    let roots = polynomial_roots(&characteristic_polynomial(&reference_h_eff(&model, GAMMA)));
    assert!(multiset_distance(&got, &roots) < 1e-3);
}

fn check_decomposition(h: &ComplexMatrix) {
    let s = eigendecompose(h).unwrap();
    let n = h.rows();
    let hn = s.norm;
    for k in 0..n {
        let r = s.right_vector(k);
        let hr = h.mul_vec(&r);
        let res: f64 = hr.iter().zip(&r).map(|(a, b)| (a - s.eigenvalues[k] * b).norm_sqr()).sum::<f64>().sqrt();
        assert!(res <= 1e-9 * hn, "residual {res:e} for mode {k}");
    }
    for m in 0..n {
        for k in 0..n {
            if s.near_degenerate[m] || s.near_degenerate[k] {
                continue;
            }
            let overlap: Complex64 = s.left_vector(m).iter().zip(s.right_vector(k)).map(|(l, r)| l * r).sum();
            let expected = if m == k { 1.0 } else { 0.0 };
            assert!((overlap - expected).norm() < 1e-8, "<L{m}|R{k}> = {overlap}");
        }
    }
    if !s.has_near_degenerate() {
        let rec = s.reconstruct();
        let diff = ComplexMatrix::from_fn(n, n, |i, j| rec[(i, j)] - h[(i, j)]).norm_fro();
        assert!(diff <= 1e-7 * h.norm_fro().max(hn));
    }
}

#[test]
fn left_vectors_are_transposed_right_vectors_for_symmetric_input() {
    let model = device_preset(DevicePreset::B1, superatom::units::ghz_to_rad(6.12)).unwrap();
    let h = build_h_eff(&model).unwrap().matrix;
    let s = eigendecompose(&h).unwrap();
    assert!(!s.has_near_degenerate());
    for k in 0..s.len() {
        let r = s.right_vector(k);
        let norm: Complex64 = r.iter().map(|x| x * x).sum();
        for (l, rv) in s.left_vector(k).iter().zip(&r) {
            assert!((l - rv / norm).norm() < 1e-8 * (rv / norm).norm().max(1.0));
        }
    }
    check_decomposition(&h);
}

#[test]
fn presets_decompose_cleanly() {
    for preset in DevicePreset::ALL {
        for ghz in [5.7, 5.9, 6.0, 6.12] {
            let model = device_preset(preset, superatom::units::ghz_to_rad(ghz)).unwrap();
            check_decomposition(&build_h_eff(&model).unwrap().matrix);
        }
    }
}

#[test]
fn resolvent_matches_dense_inverse_device_a() {
    let model = device_preset(DevicePreset::A, omega0()).unwrap();
    let h = build_h_eff(&model).unwrap().matrix;
    let gamma = model.mean_gamma_wg();
    let wp = omega0() + gamma / 2.0;
    let k0 = model.medium().k0();
    let v: Vec<Complex64> = model.qubits().iter().map(|q| Complex64::from_polar(1.0, k0 * q.position)).collect();

    let x = resolvent_apply(&h, wp, &v).unwrap();

    let a: Vec<Vec<Complex64>> = (0..8)
        .map(|i| (0..8).map(|j| if i == j { c(wp, 0.0) - h[(i, j)] } else { -h[(i, j)] }).collect())
        .collect();
    let inv = dense_inverse(&a);
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..8 {
        let oracle: Complex64 = (0..8).map(|j| inv[i][j] * v[j]).sum();
        assert!((oracle - x[i]).norm() < 1e-10 * scale, "{} vs {}", oracle, x[i]);
    }

    // backward error
    let a_mat = ComplexMatrix::from_rows(&a);
    let ax = a_mat.mul_vec(&x);
    let res: f64 = ax.iter().zip(&v).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    let xn: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    assert!(res <= 1e-12 * a_mat.norm_fro() * xn);
}

#[test]
fn resolvent_agrees_with_spectral_sum() {
    let model = device_preset(DevicePreset::B1, omega0()).unwrap();
    let h = build_h_eff(&model).unwrap().matrix;
    let s = eigendecompose(&h).unwrap();
    assert!(!s.has_near_degenerate());
    let v: Vec<Complex64> = (0..8).map(|k| c(1.0, 0.1 * k as f64)).collect();
    for wp in linspace(omega0() - 5.0 * GAMMA, omega0() + 5.0 * GAMMA, 101) {
        let x = resolvent_apply(&h, wp, &v).unwrap();
        let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut spectral = vec![c(0.0, 0.0); 8];
        for n in 0..8 {
            let proj: Complex64 = s.left_vector(n).iter().zip(&v).map(|(l, vv)| l * vv).sum();
            let coeff = proj / (wp - s.eigenvalues[n]);
            for (i, r) in s.right_vector(n).iter().enumerate() {
                spectral[i] += coeff * r;
            }
        }
        for (a, b) in x.iter().zip(&spectral) {
            assert!((a - b).norm() <= 1e-7 * scale);
        }
    }
}

#[test]
fn lu_rejects_non_square() {
    assert!(LuDecomposition::new(&ComplexMatrix::zeros(2, 3), 0.0).is_err());
}

fn arb_symmetric() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=32, any::<u64>()).prop_map(|(n, seed)| {
        use rand::Rng;
        let mut rng = rng(seed);
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z;
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalue_sum_is_trace(h in arb_symmetric()) {
        let s = eigendecompose(&h).unwrap();
        let sum: Complex64 = s.eigenvalues.iter().sum();
        let tr = h.trace();
        prop_assert!((sum - tr).norm() <= 1e-9 * tr.norm().max(h.norm_fro()));
    }

    #[test]
    fn random_symmetric_decompositions(h in arb_symmetric()) {
        check_decomposition(&h);
    }

    #[test]
    fn random_general_decompositions(n in 1usize..=16, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = rng(seed);
        let h = ComplexMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let s = eigendecompose(&h).unwrap();
        let roots = polynomial_roots(&characteristic_polynomial(&common::to_rows(&h)));
        prop_assert!(multiset_distance(&s.eigenvalues, &roots) < 1e-6);
        check_decomposition(&h);
    }
}
