//! Adaptive Dormand–Prince 5(4) integration with event location.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Sign change an event reacts to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
    Either,
}

impl Direction {
    fn accepts(self, before: f64, after: f64) -> bool {
        let crossed = (before < 0.0 && after >= 0.0) || (before > 0.0 && after <= 0.0);
        crossed
            && match self {
                Direction::Rising => before < 0.0,
                Direction::Falling => before > 0.0,
                Direction::Either => true,
            }
    }
}

pub type EventFn<'a, const D: usize> = Box<dyn Fn(f64, &[f64; D]) -> f64 + 'a>;

pub struct Event<'a, const D: usize> {
    pub g: EventFn<'a, D>,
    pub direction: Direction,
    pub terminal: bool,
}

impl<'a, const D: usize> Event<'a, D> {
    pub fn new(
        g: impl Fn(f64, &[f64; D]) -> f64 + 'a,
        direction: Direction,
        terminal: bool,
    ) -> Self {
        Self {
            g: Box::new(g),
            direction,
            terminal,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventHit<const D: usize> {
    pub index: usize,
    pub t: f64,
    pub y: [f64; D],
}

#[derive(Debug, Clone)]
pub struct Solution<const D: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; D]>,
    pub events: Vec<EventHit<D>>,
    /// Index of the terminal event that stopped the integration.
    pub stopped_by: Option<usize>,
}

impl<const D: usize> Solution<D> {
    pub fn last(&self) -> (f64, [f64; D]) {
        (
            *self.t.last().expect("non-empty"),
            *self.y.last().expect("non-empty"),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DormandPrince<const D: usize> {
    pub rtol: f64,
    pub atol: [f64; D],
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl<const D: usize> DormandPrince<D> {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol: [atol; D],
            h_init: 1e-3,
            h_max: f64::INFINITY,
            max_steps: 10_000_000,
        }
    }

    /// One embedded step; returns the fifth-order solution and the error
    /// estimate.
    pub fn step<F>(&self, f: &F, t: f64, y: &[f64; D], h: f64) -> ([f64; D], [f64; D])
    where
        F: Fn(f64, &[f64; D]) -> [f64; D],
    {
        let mut k = [[0.0; D]; 7];
        k[0] = f(t, y);
        for s in 1..7 {
            let mut ys = *y;
            for (i, yi) in ys.iter_mut().enumerate() {
                *yi += h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y5 = *y;
        let mut err = [0.0; D];
        for i in 0..D {
            y5[i] += h * (0..7).map(|s| B5[s] * k[s][i]).sum::<f64>();
            err[i] = h * (0..7).map(|s| (B5[s] - B4[s]) * k[s][i]).sum::<f64>();
        }
        (y5, err)
    }

    fn error_norm(&self, y: &[f64; D], y_new: &[f64; D], err: &[f64; D]) -> f64 {
        let sum: f64 = (0..D)
            .map(|i| {
                let scale = self.atol[i] + self.rtol * y[i].abs().max(y_new[i].abs());
                (err[i] / scale).powi(2)
            })
            .sum();
        (sum / D as f64).sqrt()
    }

    /// Integrates from `t0` to `t_end`, recording every accepted step and
    /// locating events by bisection on a single step taken from the step
    /// start (to `1e-12` of the step size).
    pub fn solve<F>(
        &self,
        f: F,
        t0: f64,
        y0: [f64; D],
        t_end: f64,
        events: &[Event<'_, D>],
    ) -> Result<Solution<D>>
    where
        F: Fn(f64, &[f64; D]) -> [f64; D],
    {
        self.solve_capped(f, t0, y0, t_end, events, |_| f64::INFINITY)
    }

    /// As [`solve`](Self::solve), with a state-dependent upper bound on the
    /// step size (keeps steps from jumping over thin event regions).
    pub fn solve_capped<F, H>(
        &self,
        f: F,
        t0: f64,
        y0: [f64; D],
        t_end: f64,
        events: &[Event<'_, D>],
        cap: H,
    ) -> Result<Solution<D>>
    where
        F: Fn(f64, &[f64; D]) -> [f64; D],
        H: Fn(&[f64; D]) -> f64,
    {
        if !(t_end > t0) {
            return Err(Error::InvalidInput(format!(
                "t_end {t_end} must exceed t0 {t0}"
            )));
        }
        let mut sol = Solution {
            t: vec![t0],
            y: vec![y0],
            events: Vec::new(),
            stopped_by: None,
        };
        let (mut t, mut y) = (t0, y0);
        let mut h = self.h_init.min(self.h_max).min(t_end - t0);
        let mut g_prev: Vec<f64> = events.iter().map(|e| (e.g)(t, &y)).collect();
        let mut steps = 0;
        while t < t_end {
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::NonConvergence(format!(
                    "step budget exhausted at t = {t}, last state {y:?}"
                )));
            }
            h = h.min(t_end - t).min(cap(&y).max(1e-300));
            let (y_new, err) = self.step(&f, t, &y, h);
            let norm = self.error_norm(&y, &y_new, &err);
            if !norm.is_finite() {
                return Err(Error::NonConvergence(format!(
                    "non-finite step at t = {t}, state {y:?}"
                )));
            }
            if norm > 1.0 {
                h *= (0.9 * norm.powf(-0.2)).max(0.1);
                if h < 1e-15 * t.abs().max(1.0) * 1e-6 {
                    return Err(Error::NonConvergence(format!(
                        "step size underflow at t = {t}, last state {y:?}"
                    )));
                }
                continue;
            }
            let t_new = t + h;
            let g_new: Vec<f64> = events.iter().map(|e| (e.g)(t_new, &y_new)).collect();

            // Earliest triggered event within this step.
            let mut first: Option<(f64, usize, [f64; D])> = None;
            for (i, ev) in events.iter().enumerate() {
                if !ev.direction.accepts(g_prev[i], g_new[i]) {
                    continue;
                }
                let (mut lo, mut hi) = (0.0, h);
                while hi - lo > 1e-12 * h {
                    let mid = 0.5 * (lo + hi);
                    let (ym, _) = self.step(&f, t, &y, mid);
                    let gm = (ev.g)(t + mid, &ym);
                    if ev.direction.accepts(g_prev[i], gm) || gm == 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let (yh, _) = self.step(&f, t, &y, hi);
                if first.as_ref().is_none_or(|(s, _, _)| hi < *s) {
                    first = Some((hi, i, yh));
                }
            }

            if let Some((dt, i, yh)) = first {
                sol.events.push(EventHit {
                    index: i,
                    t: t + dt,
                    y: yh,
                });
                if events[i].terminal {
                    sol.t.push(t + dt);
                    sol.y.push(yh);
                    sol.stopped_by = Some(i);
                    return Ok(sol);
                }
                // Record remaining non-terminal events in this step too.
                for (j, ev) in events.iter().enumerate() {
                    if j != i && !ev.terminal && ev.direction.accepts(g_prev[j], g_new[j]) {
                        let (mut lo, mut hi) = (0.0, h);
                        while hi - lo > 1e-12 * h {
                            let mid = 0.5 * (lo + hi);
                            let (ym, _) = self.step(&f, t, &y, mid);
                            if ev.direction.accepts(g_prev[j], (ev.g)(t + mid, &ym)) {
                                hi = mid;
                            } else {
                                lo = mid;
                            }
                        }
                        let (yh, _) = self.step(&f, t, &y, hi);
                        sol.events.push(EventHit {
                            index: j,
                            t: t + hi,
                            y: yh,
                        });
                    }
                }
                sol.events.sort_by(|a, b| a.t.total_cmp(&b.t));
            }

            t = t_new;
            y = y_new;
            g_prev = g_new;
            sol.t.push(t);
            sol.y.push(y);
            let factor = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h * factor).min(self.h_max);
        }
        Ok(sol)
    }
}
