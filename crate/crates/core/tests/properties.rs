mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dbbm_core::linear::{h1_decay_bound, linear_evolve};
use dbbm_core::norms::{g_ratio, h1_norm_sq, mean_value};
use dbbm_core::runner::{DampingSpec, ForcingSpec, InitialSpec, NonConvergence, SimulationConfig};
use dbbm_core::{DampingSymbol, Grid, SchemeKind, SpectralField, StepConfig, Tail};

fn grid_strategy() -> impl Strategy<Value = Grid> {
    (
        prop::sample::select(vec![8usize, 16, 32, 64, 128]),
        0.5f64..200.0,
        -100.0f64..100.0,
    )
        .prop_map(|(m, p, x0)| Grid::new(p, x0, m).unwrap())
}

fn field_strategy() -> impl Strategy<Value = SpectralField> {
    (grid_strategy(), any::<u64>(), 0.0f64..3.0).prop_map(|(g, seed, decay)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::random_field(&mut rng, &g, g.size() / 2 - 1, decay)
    })
}

fn symbol_strategy(grid: Grid) -> impl Strategy<Value = DampingSymbol> {
    let m = grid.size();
    prop_oneof![
        (0.01f64..5.0).prop_map({
            let g = grid.clone();
            move |c| DampingSymbol::constant(&g, c).unwrap()
        }),
        prop::sample::select(vec![2u32, 4]).prop_map({
            let g = grid.clone();
            move |p| DampingSymbol::power(&g, p).unwrap()
        }),
        (0.1f64..4.0).prop_map({
            let g = grid.clone();
            move |a| DampingSymbol::poly_decay(&g, a).unwrap()
        }),
        (1..m / 2, 0.5f64..4.0).prop_map({
            let g = grid.clone();
            move |(n, a)| DampingSymbol::band_limited(&g, n, Tail::Poly(a)).unwrap()
        }),
    ]
}

fn field_and_symbol() -> impl Strategy<Value = (SpectralField, DampingSymbol)> {
    field_strategy().prop_flat_map(|u| {
        let g = u.grid().clone();
        (Just(u), symbol_strategy(g))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn transform_round_trip(grid in grid_strategy(), seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..grid.size()).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let back = SpectralField::from_values(&grid, &values).unwrap().values();
        for (a, b) in values.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-12 * 10.0);
        }
    }

    #[test]
    fn derivative_stays_hermitian_and_real(u in field_strategy()) {
        let d = u.derivative();
        let m = u.grid().size();
        for i in 1..m / 2 {
            let (a, b) = (d.coeffs()[i], d.coeffs()[m - i]);
            prop_assert!((a - b.conj()).norm() <= 1e-14 * (1.0 + a.norm()));
        }
        prop_assert!(d.coeffs()[0].norm() == 0.0);
        prop_assert!(d.coeffs()[m / 2].norm() == 0.0);
    }

    #[test]
    fn nonlinear_term_has_zero_mean(u in field_strategy(), dealias in any::<bool>()) {
        prop_assert_eq!(u.nonlinear_term(dealias).coeffs()[0].norm(), 0.0);
    }

    #[test]
    fn decay_ratio_within_rayleigh_bounds((u, gamma) in field_and_symbol()) {
        let grid = u.grid();
        let ratios: Vec<f64> = (0..grid.size())
            .filter(|&i| u.coeffs()[i].norm_sqr() > 0.0)
            .map(|i| gamma.values()[i] / grid.h1_weight_at(i))
            .collect();
        if let Some(g) = g_ratio(&u, &gamma).unwrap() {
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            prop_assert!(g * g >= lo * (1.0 - 1e-12) - 1e-300);
            prop_assert!(g * g <= hi * (1.0 + 1e-12));
        }
    }

    #[test]
    fn derived_weight_identity((u, gamma) in field_and_symbol(), s in 0.1f64..3.0) {
        let grid = u.grid();
        let w = gamma.derived_weight(s);
        for (i, (&wi, &g)) in w.iter().zip(gamma.values()).enumerate() {
            if g > 0.0 {
                let lhs = wi * g.powf(s);
                let rhs = grid.h1_weight_at(i).powf(s + 1.0);
                prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
            } else {
                prop_assert!(wi.is_infinite());
            }
        }
    }

    #[test]
    fn linear_flow_h1_nonincreasing((u, gamma) in field_and_symbol(), t1 in 0.0f64..5.0, dt in 0.0f64..5.0) {
        let a = h1_norm_sq(&linear_evolve(&u, &gamma, t1).unwrap());
        let b = h1_norm_sq(&linear_evolve(&u, &gamma, t1 + dt).unwrap());
        prop_assert!(b <= a * (1.0 + 1e-13));
    }

    #[test]
    fn decay_bound_dominates_exact((u, gamma) in field_and_symbol(), t in 1e-3f64..100.0) {
        let mut c = u.into_coeffs();
        c[0] = num_complex::Complex64::new(0.0, 0.0);
        let u = SpectralField::from_coeffs(gamma.grid(), c).unwrap();
        if let Ok(bound) = h1_decay_bound(&u, &gamma, 1.0, t) {
            let exact = h1_norm_sq(&linear_evolve(&u, &gamma, t).unwrap());
            prop_assert!(exact <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn family_ordering(grid in grid_strategy()) {
        let p1 = DampingSymbol::poly_decay(&grid, 1.0).unwrap();
        let e = DampingSymbol::exp_decay(&grid);
        let p3 = DampingSymbol::poly_decay(&grid, 3.0).unwrap();
        // Negative indices reach every |k| up to M/2 (the Nyquist slot is -M/2).
        for k in 1..=grid.max_mode() {
            prop_assert!(p1.at(-k) >= e.at(-k));
            // The exponential drops below the cubic decay from |k| = 6 on.
            prop_assert_eq!(e.at(-k) >= p3.at(-k), k <= 5);
        }
    }

    #[test]
    fn mean_follows_scalar_recursion(
        seed in any::<u64>(),
        level in 0.0f64..3.0,
        dt in 0.001f64..0.2,
        kind in prop::sample::select(SchemeKind::ALL.to_vec()),
    ) {
        let grid = Grid::new(30.0, -15.0, 32).unwrap();
        let gamma = DampingSymbol::constant(&grid, level).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_field(&mut rng, &grid, 8, 2.0).scaled(0.3);
        let cfg = StepConfig { dt, fp_epsilon: 1e-12, ..StepConfig::default() };
        let res = dbbm_core::stepping::step(kind, &u, None, &gamma, &cfg).unwrap();
        let predicted = kind.mean_factor(level, dt) * mean_value(&u);
        prop_assert!((mean_value(&res.next) - predicted).abs() <= 1e-14);
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, 1e-12f64..1e-3, Just(0.1 + 0.2)]
}

fn config_strategy() -> impl Strategy<Value = SimulationConfig> {
    let damping = prop_oneof![
        finite().prop_map(DampingSpec::Constant),
        (1u32..4).prop_map(|p| DampingSpec::Power(2 * p)),
        finite().prop_map(DampingSpec::PolyDecay),
        Just(DampingSpec::ExpDecay),
        (0usize..600).prop_map(DampingSpec::Band),
        (0usize..600, finite()).prop_map(|(n, a)| DampingSpec::BandExp(n, a)),
        (0usize..600, finite()).prop_map(|(n, a)| DampingSpec::BandPoly(n, a)),
        "[a-z]{1,8}\\.txt".prop_map(|s| DampingSpec::Custom(format!("/x/{s}").into())),
    ];
    let initial = prop_oneof![
        (finite(), finite()).prop_map(|(speed, position)| InitialSpec::Soliton { speed, position }),
        finite().prop_map(|width| InitialSpec::Gaussian { width }),
        Just(InitialSpec::Sine),
    ];
    (
        "[a-z0-9_]{1,10}",
        (finite(), finite(), 2usize..4096),
        damping,
        initial,
        prop::sample::select(SchemeKind::ALL.to_vec()),
        (finite(), finite(), 1usize..500, any::<(bool, bool, bool)>()),
        (finite(), 1usize..50, prop::collection::vec(finite(), 0..5)),
        any::<bool>(),
    )
        .prop_map(
            |(name, (p, x0, m), damping, initial, scheme, step, (t, every, snaps), cont)| {
                SimulationConfig {
                    name,
                    period: p,
                    origin: x0,
                    size: m,
                    damping,
                    scheme,
                    step: StepConfig {
                        dt: step.0,
                        fp_epsilon: step.1,
                        fp_max_iter: step.2,
                        accelerate: step.3 .0,
                        dealias: step.3 .1,
                        nonlinear: step.3 .2,
                    },
                    t_final: t,
                    initial,
                    forcing: if cont {
                        ForcingSpec::Custom("/f.txt".into())
                    } else {
                        ForcingSpec::None
                    },
                    record_every: every,
                    snapshot_times: snaps,
                    output_dir: None,
                    on_nonconvergence: if cont {
                        NonConvergence::Continue
                    } else {
                        NonConvergence::Abort
                    },
                }
            },
        )
}

proptest! {
    #[test]
    fn config_text_round_trip(cfg in config_strategy()) {
        let back = SimulationConfig::parse_str(&cfg.to_text(), None).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
