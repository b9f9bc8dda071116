use forge_procsim::{ForgingStrategy, StrategyLimits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Draws every component uniformly within its limit interval. The eight
/// draws are taken in the order oven, transport, wait 1..3, upsetting 1..3.
pub fn sample_strategy<R: Rng + ?Sized>(rng: &mut R) -> ForgingStrategy {
    let u: [f64; 8] = std::array::from_fn(|_| rng.random::<f64>());
    ForgingStrategy::from_unit(&u, &StrategyLimits::TABLE)
}

/// Generator of run `run` under `seed`; independent of every other run.
pub fn run_rng(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}
