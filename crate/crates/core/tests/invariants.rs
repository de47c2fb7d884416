use corrector_lab::elliptic::{green_function, kernel_l, kernel_l_via_green, solve_exact};
use corrector_lab::harness::{collect_samples, summarize, ExperimentPlan};
use corrector_lab::kernels::{covariance_lrc_matrix, covariance_src, covariance_src_matrix, DiscreteGreen, KernelContext, KernelId};
use corrector_lab::random_media::{medium_covariance, sample_medium};
use corrector_lab::schemes::{assemble_b, solve};
use corrector_lab::stats::Moments;
use corrector_lab::*;
use proptest::prelude::*;

fn spec(model: MediumModel, nu: f64, epsilon: f64, seed: u64) -> MediumSpec {
    let alpha = if model.is_long_range() { 0.5 } else { 1.0 };
    MediumSpec { model, a_star: 1.0, nu, alpha, epsilon, micro_points_per_eps: 16, seed }
}

fn model() -> impl Strategy<Value = MediumModel> {
    prop_oneof![Just(MediumModel::IidCell), Just(MediumModel::TransformedOu), Just(MediumModel::TransformedLrc)]
}

fn scheme(n: usize) -> impl Strategy<Value = SchemeConfig> {
    prop_oneof![
        Just(SchemeKind::Fem),
        Just(SchemeKind::Msfem),
        prop::sample::select(vec![0.125, 0.25, 0.5, 1.0]).prop_map(|d| SchemeKind::Hmm { delta_over_h: d }),
        (1u32..=4).prop_map(|m| SchemeKind::Hybrid { m_patches: m }),
    ]
    .prop_map(move |k| SchemeConfig::new(k, n))
}

fn probes() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..0.99, 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampling_is_deterministic(m in model(), seed in any::<u64>(), idx in 0u64..1000) {
        let s = spec(m, 0.3, 1.0 / 64.0, seed);
        let a = sample_medium(&s, idx).unwrap();
        let b = sample_medium(&s, idx).unwrap();
        prop_assert_eq!(a.cells(), b.cells());
    }

    #[test]
    fn every_cell_is_elliptic(m in model(), nu in 0.0f64..0.9, seed in any::<u64>(), idx in 0u64..1000) {
        let s = spec(m, nu, 1.0 / 64.0, seed);
        let sample = sample_medium(&s, idx).unwrap();
        for &inv_a in sample.cells() {
            let a = 1.0 / inv_a;
            prop_assert!(a >= s.lambda() && a <= s.big_lambda(), "a = {a} outside [{}, {}]", s.lambda(), s.big_lambda());
        }
    }

    #[test]
    fn stiffness_is_coercive(m in model(), nu in 0.0f64..0.9, seed in any::<u64>(), cfg in scheme(16)) {
        let s = spec(m, nu, 1.0 / 1024.0, seed);
        let sample = sample_medium(&s, 0).unwrap();
        let h = cfg.h();
        let tol = 1e-12 / h;
        for &b in &assemble_b(&sample, &cfg).unwrap().b {
            prop_assert!(b >= s.lambda() / h - tol && b <= s.big_lambda() / h + tol, "b = {b}");
        }
    }

    #[test]
    fn flux_is_constant(m in model(), seed in any::<u64>()) {
        let sample = sample_medium(&spec(m, 0.4, 1.0 / 64.0, seed), 3).unwrap();
        let f = SourceTerm::Polynomial { coeffs: vec![1.0, -2.0, 3.0] };
        let u = solve_exact(&sample, &f).unwrap();
        let c = u.flux();
        for i in 0..sample.len() {
            let x = 0.5 * (sample.cell_left(i) + sample.cell_right(i));
            let flux = u.derivative(x).unwrap() / sample.cells()[i] + f.big_f(x);
            prop_assert!((flux - c).abs() <= 1e-10, "cell {i}: {flux} vs {c}");
        }
    }

    #[test]
    fn green_functions_are_symmetric(x in 0.0f64..=1.0, y in 0.0f64..=1.0, a in 0.2f64..5.0, n in 2usize..40) {
        let g = |x, y| green_function(a, x, y).unwrap();
        prop_assert!((g(x, y) - g(y, x)).abs() <= 1e-15);
        prop_assert_eq!(g(0.0, y), 0.0);
        prop_assert_eq!(g(1.0, y), 0.0);
        let d = DiscreteGreen::new(a, n).unwrap();
        let (j, k) = ((x * n as f64) as usize, (y * n as f64) as usize);
        prop_assert!((d.nodal(j, k) - d.nodal(k, j)).abs() <= 1e-13);
        prop_assert_eq!(d.nodal(0, k), 0.0);
        prop_assert_eq!(d.nodal(n, k), 0.0);
    }

    #[test]
    fn kernel_definitions_agree(x in 0.0f64..=1.0, t in 0.0f64..=1.0, c in prop::collection::vec(-2.0f64..2.0, 1..4)) {
        prop_assume!((x - t).abs() > 1e-9);
        let f = SourceTerm::Polynomial { coeffs: c };
        let a = kernel_l(1.0, &f, x, t).unwrap();
        let b = kernel_l_via_green(1.0, &f, x, t).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
    }

    #[test]
    fn src_covariances_are_psd(p in probes(), n in prop::sample::select(vec![4usize, 8, 16, 32]), d in 0.05f64..=1.0) {
        let ctx = KernelContext::new(1.0, &SourceTerm::ConstantOne, n, d).unwrap();
        for id in KernelId::ALL {
            let m = covariance_src_matrix(&ctx, id, 0.5, &p).unwrap();
            prop_assert!(m.is_psd(), "{:?} min eigenvalue {}", id, m.min_eigenvalue());
        }
    }

    #[test]
    fn amplification_is_exactly_h_over_delta(x in 0.0f64..=1.0, y in 0.0f64..=1.0, n in 2usize..64, d in 0.05f64..=1.0) {
        let ctx = KernelContext::new(1.0, &SourceTerm::ConstantOne, n, d).unwrap();
        let hd = covariance_src(&ctx, KernelId::Lhdelta, 1.0, x, y).unwrap();
        let h11 = covariance_src(&ctx, KernelId::Lh11, 1.0, x, y).unwrap();
        prop_assert!((hd - h11 / d).abs() <= 1e-12 * (1.0 + hd.abs()));
    }

    #[test]
    fn hmm_full_patch_is_hybrid_with_one_patch(m in model(), seed in any::<u64>(), n in prop::sample::select(vec![4usize, 16, 64])) {
        let sample = sample_medium(&spec(m, 0.3, 1.0 / 1024.0, seed), 1).unwrap();
        let f = SourceTerm::ConstantOne;
        let a = solve(&sample, &SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 1.0 }, n), &f).unwrap();
        let b = solve(&sample, &SchemeConfig::new(SchemeKind::Hybrid { m_patches: 1 }, n), &f).unwrap();
        for k in 0..=n {
            prop_assert!((a.node(k) - b.node(k)).abs() <= 1e-12);
        }
    }

    #[test]
    fn msfem_increments_are_order_h(m in model(), seed in any::<u64>(), n in prop::sample::select(vec![8usize, 16, 32, 64])) {
        let s = spec(m, 0.4, 1.0 / 1024.0, seed);
        let sample = sample_medium(&s, 2).unwrap();
        let f = SourceTerm::ConstantOne;
        let u = solve(&sample, &SchemeConfig::new(SchemeKind::Msfem, n), &f).unwrap();
        let h = 1.0 / n as f64;
        let c = 2.0 * s.big_lambda() * f.l2_norm() / s.lambda();
        for k in 1..=n {
            prop_assert!((u.node(k) - u.node(k - 1)).abs() <= c * h);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn lrc_covariances_are_psd(p in probes(), d in prop::sample::select(vec![0.25, 1.0])) {
        let ctx = KernelContext::new(1.0, &SourceTerm::ConstantOne, 8, d).unwrap();
        for id in [KernelId::L, KernelId::Lh, KernelId::Lhdelta] {
            let m = covariance_lrc_matrix(&ctx, id, 0.3, 0.5, &p).unwrap();
            prop_assert!(m.is_psd(), "{:?} min eigenvalue {}", id, m.min_eigenvalue());
        }
    }
}

#[test]
fn iid_cells_have_zero_mean() {
    let s = spec(MediumModel::IidCell, 0.25, 1.0 / 16.0, 11);
    let draws: Vec<Vec<f64>> = (0..10_000).map(|i| sample_medium(&s, i).unwrap().cells().to_vec()).collect();
    for cell in [0usize, 5, 10, 15] {
        let q: Vec<f64> = draws.iter().map(|c| c[cell] - 1.0).collect();
        let m = Moments::of(&q);
        assert!(m.mean.abs() <= 3.0 * m.se_mean(), "cell {cell}: {} vs SE {}", m.mean, m.se_mean());
    }
}

#[test]
fn long_range_autocovariance_matches_model() {
    let s = spec(MediumModel::TransformedLrc, 0.3, 1.0 / 128.0, 5);
    let per_eps = s.micro_points_per_eps as usize;
    let lags = [5usize, 10, 20, 50];
    // per-realization spatial averages are independent across realizations
    let mut estimates = vec![Vec::new(); lags.len()];
    for i in 0..2000 {
        let q: Vec<f64> = sample_medium(&s, i).unwrap().cells().iter().map(|c| c - 1.0).collect();
        for (e, &tau) in estimates.iter_mut().zip(&lags) {
            let lag = tau * per_eps;
            let prods: Vec<f64> = q.iter().zip(&q[lag..]).map(|(a, b)| a * b).collect();
            e.push(stats::mean(&prods));
        }
    }
    for (e, &tau) in estimates.iter().zip(&lags) {
        let m = Moments::of(e);
        let r = medium_covariance(&s, tau as f64);
        assert!((m.mean - r).abs() <= 3.0 * m.se_mean(), "lag {tau}: {} vs {r} (SE {})", m.mean, m.se_mean());
    }
}

#[test]
fn quadrupling_realizations_halves_standard_errors() {
    let s = spec(MediumModel::IidCell, 0.25, 1.0 / 1024.0, 3);
    let plan = |m| ExperimentPlan {
        medium: s.clone(),
        schemes: vec![SchemeConfig::new(SchemeKind::Msfem, 16)],
        source: SourceTerm::ConstantOne,
        probes: vec![0.25, 0.5, 0.75],
        realizations: m,
        epsilons: vec![s.epsilon],
        meshes: vec![16],
        first_index: 0,
    };
    let se = |m| {
        let samples = collect_samples(&plan(m), s.epsilon, 16).unwrap();
        summarize(&samples, 0, &s, &SourceTerm::ConstantOne).unwrap()
    };
    let (small, large) = (se(1000), se(4000));
    for (a, b) in small.mean_se.iter().zip(&large.mean_se) {
        assert!((b / a - 0.5).abs() <= 0.1, "mean SE ratio {}", b / a);
    }
    for (a, b) in small.variance_se().iter().zip(&large.variance_se()) {
        assert!((b / a - 0.5).abs() <= 0.1, "variance SE ratio {}", b / a);
    }
}
