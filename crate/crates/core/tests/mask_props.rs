use addrhash::mask::power_of_two_window;
use addrhash::{
    analytic_rejection_rate, approx_rejection_rate, build_mask, empirical_rejection_rate,
    filter_accepts, mask_size_for, rejection_curve, Address, BitWindow, HashScheme, RejectionModel,
};
use proptest::prelude::*;

#[test]
fn quoted_data_points() {
    assert!((analytic_rejection_rate(10, 8) - 0.2631).abs() < 5e-4);
    assert!((analytic_rejection_rate(10, 512) - 0.9806).abs() < 5e-4);
    // (1 - 1/64)^10, (1 - 1/32)^10, (255/256)^10
    assert!((analytic_rejection_rate(10, 64) - 0.8543).abs() < 1e-4);
    assert!((analytic_rejection_rate(10, 32) - 0.7280).abs() < 1e-4);
    assert!((analytic_rejection_rate(10, 256) - 0.9616).abs() < 1e-4);
}

#[test]
fn sizing_examples() {
    let s = mask_size_for(0.8, 10).unwrap();
    assert_eq!((s.mask_size, s.linear_size), (64, 50));
    let s = mask_size_for(0.98, 10).unwrap();
    assert_eq!(s.mask_size, 512);
    assert!(s.rate >= 0.98);
}

#[test]
fn default_curve_shape() {
    let ks: Vec<u64> = (0..=100).collect();
    let curve = rejection_curve(
        &addrhash::mask::DEFAULT_MASK_SIZES,
        &ks,
        &RejectionModel::Analytic,
    )
    .unwrap();
    assert_eq!(curve.rows.len(), 8 * 101);
    for &m in &addrhash::mask::DEFAULT_MASK_SIZES {
        let rates: Vec<f64> = curve
            .rows
            .iter()
            .filter(|r| r.mask_size == m)
            .map(|r| r.rate)
            .collect();
        assert!(rates.windows(2).all(|w| w[1] <= w[0]), "M={m}");
    }
    for k in [1, 10, 50] {
        let rates: Vec<f64> = addrhash::mask::DEFAULT_MASK_SIZES
            .iter()
            .map(|&m| curve.rate(k, m).unwrap())
            .collect();
        assert!(rates.windows(2).all(|w| w[1] >= w[0]), "k={k}");
    }
    assert!((curve.rate(10, 8).unwrap() - 0.263).abs() < 1e-3);
    assert!((curve.rate(10, 512).unwrap() - 0.981).abs() < 1e-3);
}

#[test]
fn empirical_agrees_with_analytic_on_grid() {
    let ks = [1u64, 2, 3, 5, 8, 10, 15, 20];
    let sizes = [4u64, 8, 16, 64, 256];
    for scheme in [
        HashScheme::crc32(),
        HashScheme::fletcher(),
        HashScheme::XorFold,
    ] {
        let mut inside = 0;
        for &m in &sizes {
            let window = power_of_two_window(m).unwrap();
            for &k in &ks {
                let est = empirical_rejection_rate(&scheme, window, k as usize, 4_000, 77 + k + m)
                    .unwrap();
                if (est.rate - analytic_rejection_rate(k, m)).abs() <= est.ci_half_width() {
                    inside += 1;
                }
            }
        }
        let total = ks.len() * sizes.len();
        assert!(
            inside as f64 >= 0.9 * total as f64,
            "{scheme}: {inside}/{total} grid points inside the 95% interval"
        );
    }
}

#[test]
fn monte_carlo_is_schedule_independent() {
    let window = BitWindow::new(0, 3).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let single = pool
        .install(|| empirical_rejection_rate(&HashScheme::crc32(), window, 10, 5_000, 3).unwrap());
    let parallel = empirical_rejection_rate(&HashScheme::crc32(), window, 10, 5_000, 3).unwrap();
    assert_eq!(single, parallel);
}

fn scheme_strategy() -> impl Strategy<Value = HashScheme> {
    (0..HashScheme::NAMES.len()).prop_map(|i| HashScheme::NAMES[i].parse().unwrap())
}

proptest! {
    #[test]
    fn wanted_addresses_always_accepted(
        scheme in scheme_strategy(),
        wanted in prop::collection::vec(any::<[u8; 6]>().prop_map(Address::new), 1..100),
        len in 1u32..=8,
        pos in any::<prop::sample::Index>(),
    ) {
        let len = len.min(scheme.width());
        let start = pos.index((scheme.width() - len + 1) as usize) as u32;
        let mask = build_mask(&wanted, &scheme, BitWindow::new(start, len).unwrap()).unwrap();
        prop_assert!(mask.set_bits() <= wanted.len().min(mask.size()));
        for a in &wanted {
            prop_assert!(filter_accepts(&mask, a));
        }
    }

    #[test]
    fn linear_model_close_when_mask_is_large(k in 1u64..200, factor in 10u64..100) {
        let m = k * factor;
        let diff = (analytic_rejection_rate(k, m) - approx_rejection_rate(k, m)).abs();
        prop_assert!(diff <= (k * k) as f64 / (m * m) as f64);
    }

    #[test]
    fn small_masks_still_filter(k in 1u64..=1000, log_m in 1u32..=12) {
        prop_assert!(analytic_rejection_rate(k, 1 << log_m) > 0.0);
    }

    #[test]
    fn sizing_is_tight(target in 0.0f64..0.999, k in 1u64..500) {
        let s = mask_size_for(target, k).unwrap();
        prop_assert!(s.mask_size.is_power_of_two());
        prop_assert!(analytic_rejection_rate(k, s.mask_size) >= target);
        if s.mask_size > 1 {
            prop_assert!(analytic_rejection_rate(k, s.mask_size / 2) < target);
        }
        prop_assert!(s.linear_size as f64 + 1e-6 >= k as f64 / (1.0 - target));
    }
}
