use proptest::prelude::*;
use tar1_core::estimators::StatKind;
use tar1_core::monte_carlo::{
    empirical_quantile, ks_critical_value, ks_two_sample, EmpiricalDistribution,
};
use tar1_core::{scaled_statistic, simulate_path, NoiseFamily, NoiseSpec, Path, RngStream, TarParams};

fn noise() -> impl Strategy<Value = NoiseSpec> {
    (
        prop_oneof![
            Just(NoiseFamily::Gaussian),
            Just(NoiseFamily::Laplace),
            Just(NoiseFamily::UniformCentered)
        ],
        0.01f64..5.0,
    )
        .prop_map(|(family, sigma)| NoiseSpec::new(family, sigma).unwrap())
}

fn params() -> impl Strategy<Value = TarParams> {
    (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0, -3.0f64..3.0, noise())
        .prop_map(|(alpha, beta, r, gamma, delta, y0, noise)| {
            TarParams::new(alpha, beta, r, noise).with_intercepts(gamma, delta).with_y0(y0)
        })
}

fn samples(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3f64..1e3, 1..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn replay_reproduces_simulated_path(p in params(), n in 1usize..200, seed: u64, id: u64) {
        let path = simulate_path(&p, n, &mut RngStream::new(seed, id)).unwrap();
        prop_assert_eq!(path.values().len(), n + 1);
        prop_assert!(path.reconstructs_exactly());
        let again = Path::replay(&p, path.values()[0], path.innovations().to_vec()).unwrap();
        prop_assert_eq!(again.values(), path.values());
    }

    #[test]
    fn equal_regimes_ignore_threshold(
        a in -0.99f64..0.99, g in -1.0f64..1.0, r1 in -5.0f64..5.0, r2 in -5.0f64..5.0,
        noise in noise(), n in 1usize..300, seed: u64,
    ) {
        let base = |r| TarParams::new(a, a, r, noise).with_intercepts(g, g);
        let p1 = simulate_path(&base(r1), n, &mut RngStream::new(seed, 0)).unwrap();
        let p2 = simulate_path(&base(r2), n, &mut RngStream::new(seed, 0)).unwrap();
        prop_assert_eq!(p1.values(), p2.values());
    }

    #[test]
    fn zero_threshold_paths_scale(
        alpha in -2.0f64..2.0, beta in -2.0f64..2.0, y0 in -3.0f64..3.0,
        k in -20i32..20, n in 1usize..200, seed: u64,
    ) {
        // Powers of two keep the scaling exact in floating point.
        let c = 2f64.powi(k);
        let p = TarParams::new(alpha, beta, 0.0, NoiseSpec::gaussian(1.0).unwrap()).with_y0(y0);
        let path = simulate_path(&p, n, &mut RngStream::new(seed, 1)).unwrap();
        let scaled_eps = path.innovations().iter().map(|e| e * c).collect();
        let scaled = Path::replay(&p, y0 * c, scaled_eps).unwrap();
        for (u, v) in path.values().iter().zip(scaled.values()) {
            prop_assert_eq!(u * c, *v);
        }
    }

    #[test]
    fn quantiles_are_monotone(xs in samples(200), p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
        let d = EmpiricalDistribution::new(xs);
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        let (q_lo, q_hi) = (empirical_quantile(&d, lo).unwrap(), empirical_quantile(&d, hi).unwrap());
        prop_assert!(q_lo <= q_hi);
        prop_assert!(d.samples().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(q_lo >= d.samples()[0] && q_hi <= *d.samples().last().unwrap());
    }

    #[test]
    fn ks_is_a_symmetric_bounded_distance(a in samples(100), b in samples(100), c in samples(100)) {
        let (a, b, c) = (EmpiricalDistribution::new(a), EmpiricalDistribution::new(b), EmpiricalDistribution::new(c));
        let ab = ks_two_sample(&a, &b).unwrap();
        prop_assert_eq!(ab, ks_two_sample(&b, &a).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        let via_c = ks_two_sample(&a, &c).unwrap() + ks_two_sample(&c, &b).unwrap();
        prop_assert!(ab <= via_c + 1e-12);
    }
}

#[test]
fn lower_regime_visits_stop_under_explosive_upper_regime() {
    let p = TarParams::new(1.5, 0.5, 0.0, NoiseSpec::gaussian(1.0).unwrap());
    let reps = 2000;
    let mut at_200 = Vec::with_capacity(reps);
    let mut at_400 = Vec::with_capacity(reps);
    for i in 0..reps as u64 {
        let path = simulate_path(&p, 400, &mut RngStream::new(31, i)).unwrap();
        let count = |n: usize| path.values()[..=n].iter().filter(|&&y| y <= 0.0).count() as f64;
        at_200.push(count(200));
        at_400.push(count(400));
    }
    let m200 = EmpiricalDistribution::new(at_200).median().unwrap();
    let m400 = EmpiricalDistribution::new(at_400).median().unwrap();
    assert_eq!(m200, m400);
}

#[test]
fn half_samples_pass_ks_at_one_percent() {
    let trials = 100;
    let reps = 400;
    let p = TarParams::new(1.0, 0.5, -0.5, NoiseSpec::gaussian(1.0).unwrap());
    let half = reps / 2;
    let crit = ks_critical_value(0.01, half, half);
    let mut below = 0;
    for trial in 0..trials {
        let mut kept: Vec<f64> = Vec::with_capacity(reps);
        for i in 0..reps as u64 {
            let path = simulate_path(&p, 100, &mut RngStream::new(5000 + trial, i)).unwrap();
            if let Ok(v) = scaled_statistic(&path, &p, StatKind::UnitRootAlpha) {
                kept.push(v);
            }
        }
        let a = EmpiricalDistribution::new(kept.iter().step_by(2).copied().collect());
        let b = EmpiricalDistribution::new(kept.iter().skip(1).step_by(2).copied().collect());
        if ks_two_sample(&a, &b).unwrap() < crit {
            below += 1;
        }
    }
    assert!(below as f64 >= 0.95 * trials as f64, "{below}/{trials}");
}
