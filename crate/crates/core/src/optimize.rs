//! Derivative-free simplex minimization.
//!
//! Nelder-Mead with dimension-adaptive coefficients (Gao & Han 2012), which
//! behave much better than the classic (1, 2, ½, ½) set once the problem has
//! more than a handful of parameters. The best value is non-increasing from
//! one iteration to the next.

/// Simplex descent settings.
#[derive(Clone, Debug)]
pub struct NelderMead {
    pub max_iters: usize,
    /// Converged when the mean simplex value improved by less than
    /// `stall_tol` over the last `stall_window` iterations.
    ///
    /// The mean rather than the best vertex is tracked because in many
    /// dimensions the best vertex can sit still for hundreds of iterations
    /// while the rest of the simplex is still moving.
    pub stall_window: usize,
    pub stall_tol: f64,
    /// Rebuild the simplex around the best vertex after this many
    /// iterations without convergence; 0 disables resets.
    ///
    /// The new simplex has the initial shape, which undoes the flattening
    /// that stalls descent in many dimensions. With resets on, a stall only
    /// counts as convergence once the simplex it stalled in improved on its
    /// starting point by less than `stall_tol`; otherwise it is rebuilt.
    pub reset_interval: usize,
    /// With resets on, also converged when a full interval improved the best
    /// value by less than this.
    pub reset_tol: f64,
    /// Keep the best value after every iteration in [`Minimum::history`].
    pub record_history: bool,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            stall_window: 100,
            stall_tol: 1e-10,
            reset_interval: 0,
            reset_tol: 0.0,
            record_history: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub history: Vec<f64>,
}

impl NelderMead {
    /// Minimizes `f` from `x0` with an initial simplex `x0 + steps[i]·eᵢ`.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64], steps: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        assert_eq!(steps.len(), n, "one step per coordinate");
        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        if n == 0 {
            let value = eval(x0);
            return Minimum {
                x: Vec::new(),
                value,
                iterations: 0,
                evaluations: 1,
                converged: true,
                history: Vec::new(),
            };
        }

        let nf = n as f64;
        let alpha = 1.0;
        let beta = 1.0 + 2.0 / nf;
        let gamma = 0.75 - 1.0 / (2.0 * nf);
        let delta = 1.0 - 1.0 / nf;

        /// Rebuilds vertices `1..=n` around vertex 0.
        fn rebuild(
            simplex: &mut [Vec<f64>],
            values: &mut [f64],
            steps: &[f64],
            scale: f64,
            eval: &mut impl FnMut(&[f64]) -> f64,
        ) {
            let (base, rest) = simplex.split_first_mut().expect("non-empty simplex");
            for (i, (v, &s)) in rest.iter_mut().zip(steps).enumerate() {
                v.copy_from_slice(base);
                v[i] += scale * s;
                values[i + 1] = eval(v);
            }
        }

        let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec(); n + 1];
        let mut values = vec![eval(x0); n + 1];
        rebuild(&mut simplex, &mut values, steps, 1.0, &mut eval);
        let mut evaluations = n + 1;
        let mut order: Vec<usize> = (0..=n).collect();
        let mut mean_trace: Vec<f64> = Vec::new();
        let mut history = Vec::new();
        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut trial2 = vec![0.0; n];
        let mut converged = false;
        let mut iterations = 0;
        let mut since_reset = 0;
        // Best value when the current simplex was built; `None` for the
        // initial one.
        let mut reset_from: Option<f64> = None;

        while iterations < self.max_iters {
            // Stable sort keeps ties in index order.
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let best = values[order[0]];
            let mean = values.iter().sum::<f64>() / (nf + 1.0);
            mean_trace.push(mean);
            let stalled = mean_trace.len() > self.stall_window
                && mean_trace[mean_trace.len() - 1 - self.stall_window] - mean < self.stall_tol;
            let due = self.reset_interval > 0 && since_reset >= self.reset_interval;
            if stalled || due {
                if self.reset_interval == 0 {
                    converged = true;
                    break;
                }
                let tol = if stalled {
                    self.stall_tol
                } else {
                    self.reset_tol
                };
                if reset_from.is_some_and(|v| v - best < tol) {
                    converged = true;
                    break;
                }
                // Rebuild the initial simplex shape around the best vertex.
                simplex.swap(0, order[0]);
                values.swap(0, order[0]);
                rebuild(&mut simplex, &mut values, steps, 1.0, &mut eval);
                evaluations += n;
                reset_from = Some(best);
                since_reset = 0;
                mean_trace.clear();
                order = (0..=n).collect();
                continue;
            }
            if self.record_history {
                history.push(best);
            }
            iterations += 1;
            since_reset += 1;

            let worst = order[n];
            let second_worst = values[order[n - 1]];
            centroid.iter_mut().for_each(|c| *c = 0.0);
            for &i in &order[..n] {
                for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                    *c += x;
                }
            }
            centroid.iter_mut().for_each(|c| *c /= nf);

            let along = |t: f64, out: &mut Vec<f64>, worst_vertex: &[f64]| {
                for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst_vertex) {
                    *o = c + t * (c - w);
                }
            };

            along(alpha, &mut trial, &simplex[worst]);
            let f_r = eval(&trial);
            evaluations += 1;

            if f_r < best {
                along(alpha * beta, &mut trial2, &simplex[worst]);
                let f_e = eval(&trial2);
                evaluations += 1;
                if f_e < f_r {
                    simplex[worst].copy_from_slice(&trial2);
                    values[worst] = f_e;
                } else {
                    simplex[worst].copy_from_slice(&trial);
                    values[worst] = f_r;
                }
                continue;
            }
            if f_r < second_worst {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = f_r;
                continue;
            }
            // Outside contraction when the reflection beat the worst point,
            // inside contraction otherwise.
            let (t, reference) = if f_r < values[worst] {
                (alpha * gamma, f_r)
            } else {
                (-gamma, values[worst])
            };
            along(t, &mut trial2, &simplex[worst]);
            let f_c = eval(&trial2);
            evaluations += 1;
            if f_c < reference {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = f_c;
                continue;
            }

            let anchor = simplex[order[0]].clone();
            for &i in &order[1..] {
                for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                    *x = a + delta * (*x - a);
                }
                values[i] = eval(&simplex[i]);
                evaluations += 1;
            }
        }

        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        Minimum {
            x: simplex[order[0]].clone(),
            value: values[order[0]],
            iterations,
            evaluations,
            converged,
            history,
        }
    }
}
