use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{reflect, temperature, AnnealConfig, AnnealError, BoxDomain, VisitingDistribution};

const START_ATTEMPTS: usize = 1000;
/// Pattern search stops once every step is below this fraction of its range.
const PATTERN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// Candidates dropped because the objective was NaN or infinite.
    pub non_finite: usize,
    pub restarts: usize,
    /// Best value after each annealing iteration, then after refinement.
    pub trace: Vec<f64>,
}

struct Evaluator<F> {
    f: F,
    evaluations: usize,
    non_finite: usize,
    budget: usize,
}

impl<F: FnMut(&[f64]) -> f64> Evaluator<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        self.evaluations += 1;
        let e = (self.f)(x);
        if e.is_finite() {
            Some(e)
        } else {
            self.non_finite += 1;
            None
        }
    }

    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }
}

fn random_point<R: Rng>(rng: &mut R, domain: &BoxDomain) -> Vec<f64> {
    (0..domain.dim())
        .map(|i| match domain.frozen(i) {
            Some(v) => v,
            None => {
                let (lo, hi) = domain.bounds()[i];
                lo + (hi - lo) * rng.random::<f64>()
            }
        })
        .collect()
}

fn random_start<R: Rng, F: FnMut(&[f64]) -> f64>(
    rng: &mut R,
    domain: &BoxDomain,
    ev: &mut Evaluator<F>,
) -> Result<(Vec<f64>, f64), AnnealError> {
    for attempt in 0..START_ATTEMPTS {
        if ev.exhausted() {
            return Err(AnnealError::NoFiniteStart { attempts: attempt });
        }
        let x = random_point(rng, domain);
        if let Some(e) = ev.eval(&x) {
            return Ok((x, e));
        }
    }
    Err(AnnealError::NoFiniteStart { attempts: START_ATTEMPTS })
}

/// Generalized Metropolis rule for an energy change `delta` at acceptance
/// temperature `t_accept`.
pub fn acceptance_probability(delta: f64, t_accept: f64, accept: f64) -> f64 {
    if delta <= 0.0 {
        return 1.0;
    }
    let bracket = 1.0 - (1.0 - accept) * delta / t_accept;
    if bracket <= 0.0 {
        0.0
    } else {
        bracket.powf(1.0 / (1.0 - accept)).min(1.0)
    }
}

/// Minimizes `objective` over `domain`. The objective always receives the full
/// vector, with frozen coordinates at their pinned values.
pub fn minimize<F>(objective: F, domain: &BoxDomain, config: &AnnealConfig) -> Result<AnnealOutcome, AnnealError>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    domain.validate()?;
    let free = domain.free_dims();
    let n = free.len();
    let bounds = domain.bounds();
    let visit = VisitingDistribution::new(config.visit);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut ev = Evaluator { f: objective, evaluations: 0, non_finite: 0, budget: config.max_evaluations };

    let (mut cur, mut cur_e) = random_start(&mut rng, domain, &mut ev)?;
    let (mut best, mut best_e) = (cur.clone(), cur_e);
    let mut trace = Vec::with_capacity(config.max_iterations + 1);
    let mut iterations = 0;
    let mut restarts = 0;
    let t_restart = config.initial_temperature * config.restart_temperature_ratio;

    'anneal: while iterations < config.max_iterations && !ev.exhausted() {
        for step in 0..config.max_iterations {
            if iterations >= config.max_iterations {
                break 'anneal;
            }
            let t = temperature(config.initial_temperature, config.visit, step + 1);
            if t < t_restart {
                (cur, cur_e) = random_start(&mut rng, domain, &mut ev)?;
                if cur_e < best_e {
                    (best, best_e) = (cur.clone(), cur_e);
                }
                restarts += 1;
                continue 'anneal;
            }
            let t_accept = t / (step + 1) as f64;
            for j in 0..2 * n {
                let mut cand = cur.clone();
                if j < n {
                    for &d in &free {
                        cand[d] = reflect(cur[d] + visit.sample(&mut rng, t), bounds[d].0, bounds[d].1);
                    }
                } else {
                    let d = free[j - n];
                    cand[d] = reflect(cur[d] + visit.sample(&mut rng, t), bounds[d].0, bounds[d].1);
                }
                if let Some(e) = ev.eval(&cand) {
                    if e < cur_e {
                        if e < best_e {
                            (best, best_e) = (cand.clone(), e);
                        }
                        (cur, cur_e) = (cand, e);
                    } else {
                        let p = acceptance_probability(e - cur_e, t_accept, config.accept);
                        if rng.random::<f64>() <= p {
                            (cur, cur_e) = (cand, e);
                        }
                    }
                }
                if ev.exhausted() {
                    trace.push(best_e);
                    iterations += 1;
                    break 'anneal;
                }
            }
            trace.push(best_e);
            iterations += 1;
        }
    }

    if config.local_search && !ev.exhausted() {
        let (x, e) = refine(&mut ev, domain, best, best_e);
        (best, best_e) = (x, e);
        trace.push(best_e);
    }

    Ok(AnnealOutcome {
        x: best,
        value: best_e,
        evaluations: ev.evaluations,
        iterations,
        non_finite: ev.non_finite,
        restarts,
        trace,
    })
}

/// Coordinate pattern search from `start` over the free dimensions, clamped to
/// the box. Returns the best point, its value and the evaluations spent.
pub fn pattern_search<F>(
    objective: F,
    domain: &BoxDomain,
    start: &[f64],
    max_evaluations: usize,
) -> Result<(Vec<f64>, f64, usize), AnnealError>
where
    F: FnMut(&[f64]) -> f64,
{
    domain.validate()?;
    let mut ev = Evaluator { f: objective, evaluations: 0, non_finite: 0, budget: max_evaluations };
    let e0 = ev.eval(start).unwrap_or(f64::INFINITY);
    let (x, e) = refine(&mut ev, domain, start.to_vec(), e0);
    Ok((x, e, ev.evaluations))
}

fn refine<F: FnMut(&[f64]) -> f64>(
    ev: &mut Evaluator<F>,
    domain: &BoxDomain,
    mut x: Vec<f64>,
    mut e: f64,
) -> (Vec<f64>, f64) {
    let free = domain.free_dims();
    let range: Vec<f64> = free.iter().map(|&d| domain.bounds()[d].1 - domain.bounds()[d].0).collect();
    let mut step: Vec<f64> = range.iter().map(|r| 0.25 * r).collect();
    loop {
        let mut improved = false;
        for (k, &d) in free.iter().enumerate() {
            for sign in [1.0, -1.0] {
                if ev.exhausted() {
                    return (x, e);
                }
                let v = domain.clamp(d, x[d] + sign * step[k]);
                if v == x[d] {
                    continue;
                }
                let mut cand = x.clone();
                cand[d] = v;
                if let Some(c) = ev.eval(&cand) {
                    if c < e {
                        (x, e) = (cand, c);
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
            if step.iter().zip(&range).all(|(s, r)| *s < PATTERN_TOLERANCE * r) {
                return (x, e);
            }
        }
    }
}
