use forge_anneal::{acceptance_probability, minimize, AnnealConfig, AnnealError, BoxDomain};
use proptest::prelude::*;

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter().map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos()).sum::<f64>()
}

#[test]
fn sphere_reaches_zero() {
    let d = BoxDomain::new(vec![(-5.0, 5.0); 2]);
    let out = minimize(sphere, &d, &AnnealConfig::default()).unwrap();
    assert!(out.value <= 1e-6, "best {} at {:?}", out.value, out.x);
    assert_eq!(out.iterations, 300);
}

#[test]
fn rastrigin_ten_seeds() {
    let d = BoxDomain::new(vec![(-5.12, 5.12); 2]);
    for seed in 0..10 {
        let out = minimize(rastrigin, &d, &AnnealConfig::with_seed(seed)).unwrap();
        assert!(out.value <= 0.1, "seed {seed}: {} at {:?}", out.value, out.x);
    }
}

#[test]
fn frozen_dimension_is_never_perturbed() {
    // A single frozen dimension leaves nothing to search, so a free dummy
    // dimension that the objective ignores carries the run.
    let d = BoxDomain::new(vec![(-10.0, 10.0), (0.0, 1.0)]).freeze(0, 3.0);
    let mut seen_x = Vec::new();
    let out = minimize(
        |x: &[f64]| {
            seen_x.push(x[0]);
            (x[0] - 2.0).powi(2)
        },
        &d,
        &AnnealConfig::default(),
    )
    .unwrap();
    assert_eq!(out.x[0], 3.0);
    assert_eq!(out.value, 1.0);
    assert!(seen_x.iter().all(|&v| v == 3.0));
}

#[test]
fn all_frozen_domain_is_rejected() {
    let d = BoxDomain::new(vec![(-10.0, 10.0)]).freeze(0, 3.0);
    let err = minimize(|x: &[f64]| (x[0] - 2.0).powi(2), &d, &AnnealConfig::default()).unwrap_err();
    assert_eq!(err, AnnealError::AllFrozen);
}

#[test]
fn every_visited_point_is_inside_the_box() {
    let d = BoxDomain::new(vec![(-1.0, 2.0), (10.0, 10.5), (0.0, 1.0)]).freeze(2, 0.25);
    let mut visited = Vec::new();
    minimize(
        |x: &[f64]| {
            visited.push(x.to_vec());
            sphere(x)
        },
        &d,
        &AnnealConfig::with_seed(9),
    )
    .unwrap();
    assert!(visited.len() > 1000);
    for x in &visited {
        assert!(d.contains(x), "{x:?} escaped");
    }
}

#[test]
fn incumbent_trace_never_increases() {
    let d = BoxDomain::new(vec![(-5.12, 5.12); 3]);
    for seed in 0..3 {
        let out = minimize(rastrigin, &d, &AnnealConfig::with_seed(seed)).unwrap();
        assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*out.trace.last().unwrap(), out.value);
    }
}

#[test]
fn same_seed_same_sequence() {
    let d = BoxDomain::new(vec![(-5.12, 5.12); 2]);
    let run = |seed| {
        let mut visited = Vec::new();
        let cfg = AnnealConfig { max_iterations: 40, ..AnnealConfig::with_seed(seed) };
        minimize(
            |x: &[f64]| {
                visited.push(x.to_vec());
                rastrigin(x)
            },
            &d,
            &cfg,
        )
        .unwrap();
        visited
    };
    assert_eq!(run(5), run(5));
    assert_ne!(run(5), run(6));
}

#[test]
fn local_search_off_skips_refinement() {
    let d = BoxDomain::new(vec![(-5.0, 5.0); 2]);
    let on = minimize(sphere, &d, &AnnealConfig::with_seed(2)).unwrap();
    let off = minimize(sphere, &d, &AnnealConfig { local_search: false, ..AnnealConfig::with_seed(2) }).unwrap();
    assert_eq!(off.trace.len(), off.iterations);
    assert_eq!(on.trace.len(), on.iterations + 1);
    assert!(on.value <= off.value);
}

proptest! {
    #[test]
    fn downhill_moves_always_accepted(delta in -1e6f64..=0.0, t in 1e-6f64..1e6, qa in -20.0f64..0.99) {
        prop_assert_eq!(acceptance_probability(delta, t, qa), 1.0);
    }

    #[test]
    fn uphill_probability_is_a_probability(delta in 1e-9f64..1e6, t in 1e-6f64..1e6, qa in -20.0f64..0.99) {
        let p = acceptance_probability(delta, t, qa);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(acceptance_probability(delta * 2.0, t, qa) <= p);
    }
}
