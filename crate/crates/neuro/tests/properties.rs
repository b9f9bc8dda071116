use forge_neuro::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn outputs_are_finite_for_finite_inputs(
        xs in proptest::collection::vec(-1e3f64..1e3, 2 * 4 * 3),
        seed in 0u64..1000,
    ) {
        let specs = [
            LayerSpec::Conv1d { in_channels: 4, out_channels: 6, stride: 1 },
            LayerSpec::Relu,
            LayerSpec::Gru { input_size: 3, hidden_size: 5 },
            LayerSpec::Linear { in_features: 30, out_features: 7 },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = Sequential64::new(&specs, &[4, 3], &mut rng).unwrap();
        let x = Tensor::from_vec(&[2, 12], xs).unwrap();
        let (y, _) = net.forward_batch(&x, Mode::Train, &mut rng).unwrap();
        prop_assert_eq!(y.shape(), &[2, 7]);
        prop_assert!(y.all_finite());
    }

    #[test]
    fn mae_is_a_nonnegative_symmetric_distance(
        a in proptest::collection::vec(-5.0f64..5.0, 1..40),
        shift in -2.0f64..2.0,
    ) {
        let b: Vec<f64> = a.iter().map(|v| v + shift).collect();
        let d = mae(&a, &b);
        prop_assert!((d - shift.abs()).abs() < 1e-12);
        prop_assert_eq!(mae(&a, &b), mae(&b, &a));
        prop_assert_eq!(mae(&a, &a), 0.0);
    }

    #[test]
    fn tensor_length_must_match_shape(rows in 1usize..5, cols in 1usize..5, extra in 1usize..3) {
        prop_assert!(Tensor::<f64>::from_vec(&[rows, cols], vec![0.0; rows * cols]).is_ok());
        prop_assert!(Tensor::<f64>::from_vec(&[rows, cols], vec![0.0; rows * cols + extra]).is_err());
    }
}
