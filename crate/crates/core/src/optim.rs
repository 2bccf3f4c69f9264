//! Small dense optimizers: a Nelder-Mead simplex search for the few-angle
//! objectives and a monotone gradient ascent with Barzilai-Borwein steps for
//! the likelihood fit.

/// Result of a local search.
#[derive(Debug, Clone)]
pub(crate) struct OptimOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    #[allow(dead_code)] // diagnostic, read by tests
    pub iterations: usize,
    #[allow(dead_code)]
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct NelderMeadConfig {
    pub initial_step: f64,
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_iters: usize,
    /// Rounds of simplex re-initialization around the incumbent with a
    /// shrunken step; polishes the last digits out of a converged search.
    pub polish_rounds: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.4,
            f_tol: 1e-12,
            x_tol: 1e-10,
            max_iters: 20_000,
            polish_rounds: 2,
        }
    }
}

/// Minimizes `f` from `x0` with the standard reflection/expansion/contraction
/// coefficients. Deterministic for a fixed start.
pub(crate) fn nelder_mead_min<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    cfg: &NelderMeadConfig,
) -> OptimOutcome {
    let mut best = x0.to_vec();
    let mut best_val = f(&best);
    let mut iterations = 0;
    let mut converged = false;
    let mut step = cfg.initial_step;

    for _round in 0..=cfg.polish_rounds {
        let out = nelder_mead_round(&f, &best, step, cfg, &mut iterations);
        if out.1 < best_val {
            best = out.0;
            best_val = out.1;
        }
        converged = out.2;
        step *= 0.1;
        if iterations >= cfg.max_iters {
            break;
        }
    }

    OptimOutcome {
        x: best,
        value: best_val,
        iterations,
        converged,
    }
}

fn nelder_mead_round<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    step: f64,
    cfg: &NelderMeadConfig,
    iterations: &mut usize,
) -> (Vec<f64>, f64, bool) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut converged = false;
    while *iterations < cfg.max_iters {
        *iterations += 1;

        // order: best first
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let reordered: Vec<Vec<f64>> = order.iter().map(|&k| simplex[k].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
        simplex = reordered;
        values = revalues;

        let spread = values[n] - values[0];
        let diameter = (0..n)
            .map(|i| {
                simplex[1..]
                    .iter()
                    .map(|v| (v[i] - simplex[0][i]).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() < cfg.f_tol && diameter < cfg.x_tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|v| v[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|i| centroid[i] + (centroid[i] - worst[i])).collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[0] {
            let expand: Vec<f64> = (0..n)
                .map(|i| centroid[i] + 2.0 * (centroid[i] - worst[i]))
                .collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[n] = expand;
                values[n] = f_expand;
            } else {
                simplex[n] = reflect;
                values[n] = f_reflect;
            }
        } else if f_reflect < values[n - 1] {
            simplex[n] = reflect;
            values[n] = f_reflect;
        } else {
            // contraction, outside or inside of the worst point
            let (candidate, f_candidate) = if f_reflect < values[n] {
                let c: Vec<f64> = (0..n)
                    .map(|i| centroid[i] + 0.5 * (reflect[i] - centroid[i]))
                    .collect();
                let fc = f(&c);
                (c, fc)
            } else {
                let c: Vec<f64> = (0..n)
                    .map(|i| centroid[i] + 0.5 * (worst[i] - centroid[i]))
                    .collect();
                let fc = f(&c);
                (c, fc)
            };
            if f_candidate < values[n].min(f_reflect) {
                simplex[n] = candidate;
                values[n] = f_candidate;
            } else {
                // shrink toward the best vertex
                for k in 1..=n {
                    for i in 0..n {
                        simplex[k][i] = simplex[0][i] + 0.5 * (simplex[k][i] - simplex[0][i]);
                    }
                    values[k] = f(&simplex[k]);
                }
            }
        }
    }

    let mut best = 0;
    for k in 1..=n {
        if values[k] < values[best] {
            best = k;
        }
    }
    (simplex[best].clone(), values[best], converged)
}

#[derive(Debug, Clone)]
pub(crate) struct AscentConfig {
    pub max_iters: usize,
    /// Relative improvement below which the objective counts as stationary.
    pub rel_f_tol: f64,
    /// Parameter step norm below which the iterate counts as stationary.
    pub step_tol: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            rel_f_tol: 1e-10,
            step_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct AscentOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Accepted objective values, non-decreasing by construction.
    #[allow(dead_code)] // diagnostic, read by tests
    pub history: Vec<f64>,
}

/// Maximizes `f` by steepest ascent with Barzilai-Borwein step lengths and a
/// backtracking safeguard; only improving steps are accepted, so the history
/// is monotone.
pub(crate) fn bb_ascent<F: Fn(&[f64]) -> (f64, Vec<f64>)>(
    f_and_grad: F,
    x0: &[f64],
    cfg: &AscentConfig,
) -> AscentOutcome {
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut grad) = f_and_grad(&x);
    let mut history = vec![fx];
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None; // (x, grad)
    let mut alpha = {
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm > 0.0 {
            (1.0 / gnorm).min(1.0)
        } else {
            1.0
        }
    };
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        iterations += 1;

        // Barzilai-Borwein step from the previous accepted pair.
        if let Some((px, pg)) = &prev {
            let mut ss = 0.0;
            let mut sy = 0.0;
            for i in 0..n {
                let s = x[i] - px[i];
                let y = grad[i] - pg[i];
                ss += s * s;
                sy += s * y;
            }
            // For a locally concave objective s·y < 0; fall back otherwise.
            if sy < 0.0 && ss > 0.0 {
                alpha = -ss / sy;
            }
        }
        if !alpha.is_finite() || alpha <= 0.0 {
            alpha = 1e-3;
        }

        // Backtrack until the step improves the objective.
        let mut accepted = false;
        let mut t = alpha;
        for _ in 0..60 {
            let cand: Vec<f64> = (0..n).map(|i| x[i] + t * grad[i]).collect();
            let (fc, gc) = f_and_grad(&cand);
            if fc > fx {
                let step_norm = t * grad.iter().map(|g| g * g).sum::<f64>().sqrt();
                let rel = (fc - fx) / fx.abs().max(1.0);
                prev = Some((std::mem::replace(&mut x, cand), std::mem::replace(&mut grad, gc)));
                fx = fc;
                history.push(fx);
                accepted = true;
                if rel < cfg.rel_f_tol && step_norm < cfg.step_tol {
                    converged = true;
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted || converged {
            // No improving step at any scale means a (numerical) stationary point.
            converged = true;
            break;
        }
    }

    AscentOutcome {
        x,
        value: fx,
        iterations,
        converged,
        history,
    }
}

/// Central finite differences, used to validate analytic gradients in tests.
#[cfg(test)]
pub(crate) fn numerical_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut g = Vec::with_capacity(x.len());
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        let orig = xp[i];
        xp[i] = orig + h;
        let fp = f(&xp);
        xp[i] = orig - h;
        let fm = f(&xp);
        xp[i] = orig;
        g.push((fp - fm) / (2.0 * h));
    }
    g
}
