//! Derivative-free Nelder–Mead minimizer.
//!
//! The simplex is rebuilt around the best point whenever it collapses, and
//! the run stops once a rebuild no longer improves the best value by more
//! than `ftol`, or when `max_iter` iterations have been spent.

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Convergence threshold on the spread of simplex values.
    pub ftol: f64,
    /// Edge length of each freshly built simplex.
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_iter: 2000,
            ftol: 1e-10,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best value after each iteration; never increases.
    pub trace: Vec<f64>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let mut evaluations = 0;
        let mut eval = |x: &[f64]| {
            evaluations += 1;
            f(x)
        };
        let mut best_x = x0.to_vec();
        let mut best_f = eval(&best_x);
        let mut trace = Vec::new();
        let mut iterations = 0;
        let mut converged = false;

        if dim == 0 {
            return Minimum {
                x: best_x,
                fx: best_f,
                iterations: 0,
                evaluations: 1,
                converged: true,
                trace,
            };
        }

        let mut step = self.initial_step;
        while iterations < self.max_iter {
            let start_f = best_f;
            let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
            simplex.push((best_x.clone(), best_f));
            for j in 0..dim {
                let mut x = best_x.clone();
                x[j] += step;
                let fx = eval(&x);
                simplex.push((x, fx));
            }

            let mut collapsed = false;
            while iterations < self.max_iter {
                simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
                if simplex[dim].1 - simplex[0].1 <= self.ftol {
                    collapsed = true;
                    break;
                }
                iterations += 1;

                let centroid: Vec<f64> = (0..dim)
                    .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
                    .collect();
                let toward = |coef: f64, worst: &[f64]| -> Vec<f64> {
                    centroid
                        .iter()
                        .zip(worst)
                        .map(|(c, w)| c + coef * (c - w))
                        .collect()
                };
                let worst = simplex[dim].0.clone();
                let reflected = toward(REFLECT, &worst);
                let fr = eval(&reflected);

                if fr < simplex[0].1 {
                    let expanded = toward(EXPAND, &worst);
                    let fe = eval(&expanded);
                    simplex[dim] = if fe < fr {
                        (expanded, fe)
                    } else {
                        (reflected, fr)
                    };
                } else if fr < simplex[dim - 1].1 {
                    simplex[dim] = (reflected, fr);
                } else {
                    let (contracted, fc) = if fr < simplex[dim].1 {
                        let x = toward(CONTRACT, &worst);
                        let fx = eval(&x);
                        (x, fx)
                    } else {
                        let x = toward(-CONTRACT, &worst);
                        let fx = eval(&x);
                        (x, fx)
                    };
                    if fc < simplex[dim].1.min(fr) {
                        simplex[dim] = (contracted, fc);
                    } else {
                        let anchor = simplex[0].0.clone();
                        for vertex in simplex.iter_mut().skip(1) {
                            let x: Vec<f64> = anchor
                                .iter()
                                .zip(&vertex.0)
                                .map(|(a, v)| a + SHRINK * (v - a))
                                .collect();
                            let fx = eval(&x);
                            *vertex = (x, fx);
                        }
                    }
                }

                let (x, fx) = simplex
                    .iter()
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("simplex is non-empty");
                if *fx < best_f {
                    best_f = *fx;
                    best_x = x.clone();
                }
                trace.push(best_f);
            }

            if collapsed && start_f - best_f <= self.ftol {
                converged = true;
                break;
            }
            // restart with a smaller simplex once the large one stops paying off
            if start_f - best_f <= self.ftol.max(1e-6) {
                step *= 0.5;
            }
        }

        Minimum {
            x: best_x,
            fx: best_f,
            iterations,
            evaluations,
            converged,
            trace,
        }
    }
}
