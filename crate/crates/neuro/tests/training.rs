use forge_neuro::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn net(seed: u64) -> Sequential64 {
    let specs = [
        LayerSpec::Linear { in_features: 6, out_features: 32 },
        LayerSpec::Relu,
        LayerSpec::Dropout { p: 0.1 },
        LayerSpec::Linear { in_features: 32, out_features: 4 },
    ];
    Sequential::new(&specs, &[6], &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn memorization(n: usize) -> Samples<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut s = Samples::new(6, 4);
    for _ in 0..n {
        let x: Vec<f64> = (0..6).map(|_| rng.random()).collect();
        let y: Vec<f64> = (0..4).map(|_| rng.random()).collect();
        s.push(x, y);
    }
    s
}

#[test]
fn one_epoch_reduces_training_error() {
    let data = memorization(10);
    let mut model = net(1);
    let config = TrainConfig { epochs: 1, batch_size: 128, lr: 1e-3, seed: 4 };
    let curve = train(&mut model, &data, None, &config, |_| {}).unwrap();
    let after = evaluate_mae(&model, &data, 128).unwrap();
    assert!(after < curve.train[0], "{after} vs baseline {}", curve.train[0]);
}

#[test]
fn zero_epochs_change_nothing() {
    let data = memorization(10);
    let mut model = net(2);
    let before = model.clone();
    let config = TrainConfig { epochs: 0, ..TrainConfig::default() };
    let curve = train(&mut model, &data, Some(&data), &config, |_| {}).unwrap();
    assert_eq!(model, before);
    assert_eq!((curve.train.len(), curve.validation.len()), (1, 1));
}

#[test]
fn same_seed_same_curve_and_weights() {
    let data = memorization(300);
    let config = TrainConfig { epochs: 5, batch_size: 32, lr: 1e-3, seed: 7 };
    let run = || {
        let mut m = net(3);
        let c = train(&mut m, &data, Some(&data), &config, |_| {}).unwrap();
        (m, c)
    };
    let (m1, c1) = run();
    let (m2, c2) = run();
    assert_eq!(c1, c2);
    assert_eq!(m1, m2);
    assert!(c1.train.last() < c1.train.first());
}

#[test]
fn non_finite_loss_reports_position() {
    let mut data = memorization(10);
    data.targets[3] = f64::NAN;
    let mut model = net(5);
    let config = TrainConfig { epochs: 3, batch_size: 4, lr: 1e-3, seed: 1 };
    match train(&mut model, &data, None, &config, |_| {}) {
        Err(NeuroError::NonFiniteLoss { epoch, batch }) => {
            assert_eq!(epoch, 1);
            assert!(batch < 3);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_training_set_is_rejected() {
    let mut model = net(6);
    let err = train(&mut model, &Samples::new(6, 4), None, &TrainConfig::default(), |_| {});
    assert_eq!(err.unwrap_err(), NeuroError::EmptyDataset);
}

#[test]
fn layer_specs_round_trip_through_build() {
    let model = net(8);
    let rebuilt = Sequential64::new(&model.specs(), &[6], &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    assert_eq!(rebuilt, model);
    assert!(LayerSpec::Dropout { p: 1.0 }.validate().is_err());
}
