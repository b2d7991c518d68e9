//! Explicit Runge–Kutta integration of real state vectors.
//!
//! Complex-valued systems flatten their state into interleaved `(re, im)`
//! pairs and implement [`OdeSystem`]. Two methods are provided: classical
//! fixed-step RK4 and adaptive Dormand–Prince 5(4). Both sample the solution
//! on the grid `t_start + k * step * stride`, always including `t_end`.

use thiserror::Error;

pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Rk4,
    Rk45 { rtol: f64, atol: f64 },
}

impl Method {
    pub fn adaptive_default() -> Self {
        Method::Rk45 {
            rtol: 1e-9,
            atol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub t_start: f64,
    pub t_end: f64,
    /// RK4 step; for RK45 this only sets the output grid spacing.
    pub step: f64,
    /// Output every `stride`-th grid point.
    pub stride: usize,
    pub method: Method,
    /// Any state entry beyond this magnitude aborts the run.
    pub blowup_threshold: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_end: 10.0,
            step: 1e-3,
            stride: 1,
            method: Method::Rk4,
            blowup_threshold: 1e9,
        }
    }
}

impl Options {
    pub fn rk4(t_end: f64, step: f64) -> Self {
        Self {
            t_end,
            step,
            ..Self::default()
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("state blew up after t = {last_good_time} (non-finite or magnitude above threshold)")]
    Blowup { last_good_time: f64 },
    #[error("invalid integration options: {0}")]
    InvalidOptions(String),
    #[error("initial state has {got} entries, system expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &[f64])> {
        Some((*self.times.last()?, self.states.last()?.as_slice()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.times
            .iter()
            .copied()
            .zip(self.states.iter().map(Vec::as_slice))
    }
}

fn check_options(opts: &Options) -> Result<(), IntegrationError> {
    let bad = |msg: &str| Err(IntegrationError::InvalidOptions(msg.to_string()));
    if !opts.t_start.is_finite() || !opts.t_end.is_finite() {
        return bad("time span must be finite");
    }
    if opts.t_end <= opts.t_start {
        return bad("t_end must exceed t_start");
    }
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return bad("step must be positive");
    }
    if opts.stride == 0 {
        return bad("stride must be at least 1");
    }
    if let Method::Rk45 { rtol, atol } = opts.method {
        if !(rtol > 0.0 && atol > 0.0) {
            return bad("tolerances must be positive");
        }
    }
    Ok(())
}

fn is_sane(y: &[f64], threshold: f64) -> bool {
    y.iter().all(|v| v.is_finite() && v.abs() <= threshold)
}

/// Scratch buffers for [`rk4_step`].
#[derive(Debug, Clone)]
pub struct Rk4Workspace {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Rk4Workspace {
    pub fn new(dim: usize) -> Self {
        Self {
            k: std::array::from_fn(|_| vec![0.0; dim]),
            tmp: vec![0.0; dim],
        }
    }
}

/// One classical RK4 step of size `h` (which may be negative).
pub fn rk4_step<S: OdeSystem + ?Sized>(
    sys: &S,
    t: f64,
    y: &[f64],
    h: f64,
    out: &mut [f64],
    ws: &mut Rk4Workspace,
) {
    let [k1, k2, k3, k4] = &mut ws.k;
    let tmp = &mut ws.tmp;
    sys.rhs(t, y, k1);
    for i in 0..y.len() {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    sys.rhs(t + 0.5 * h, tmp, k2);
    for i in 0..y.len() {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    sys.rhs(t + 0.5 * h, tmp, k3);
    for i in 0..y.len() {
        tmp[i] = y[i] + h * k3[i];
    }
    sys.rhs(t + h, tmp, k4);
    for i in 0..y.len() {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Advances `y` from `t` by `span` using RK4 steps no larger than `h`.
pub fn rk4_advance<S: OdeSystem + ?Sized>(
    sys: &S,
    t: f64,
    y: &[f64],
    span: f64,
    h: f64,
) -> Vec<f64> {
    let steps = (span.abs() / h).ceil().max(1.0) as usize;
    let dt = span / steps as f64;
    let mut ws = Rk4Workspace::new(y.len());
    let mut cur = y.to_vec();
    let mut next = vec![0.0; y.len()];
    for s in 0..steps {
        rk4_step(sys, t + s as f64 * dt, &cur, dt, &mut next, &mut ws);
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

pub fn integrate<S: OdeSystem + ?Sized>(
    sys: &S,
    y0: &[f64],
    opts: &Options,
) -> Result<Trajectory, IntegrationError> {
    check_options(opts)?;
    if y0.len() != sys.dim() {
        return Err(IntegrationError::DimensionMismatch {
            expected: sys.dim(),
            got: y0.len(),
        });
    }
    if !is_sane(y0, opts.blowup_threshold) {
        return Err(IntegrationError::Blowup {
            last_good_time: opts.t_start,
        });
    }
    match opts.method {
        Method::Rk4 => integrate_rk4(sys, y0, opts),
        Method::Rk45 { rtol, atol } => integrate_dopri(sys, y0, opts, rtol, atol),
    }
}

fn step_count(opts: &Options, spacing: f64) -> usize {
    let span = opts.t_end - opts.t_start;
    // tolerate round-off when the span is an exact multiple of the spacing
    ((span / spacing) - 1e-9).ceil().max(1.0) as usize
}

fn integrate_rk4<S: OdeSystem + ?Sized>(
    sys: &S,
    y0: &[f64],
    opts: &Options,
) -> Result<Trajectory, IntegrationError> {
    let n_steps = step_count(opts, opts.step);
    let mut traj = Trajectory {
        times: vec![opts.t_start],
        states: vec![y0.to_vec()],
    };
    let mut ws = Rk4Workspace::new(y0.len());
    let mut y = y0.to_vec();
    let mut next = vec![0.0; y0.len()];
    let mut t = opts.t_start;
    for k in 1..=n_steps {
        let t_next = if k == n_steps {
            opts.t_end
        } else {
            opts.t_start + k as f64 * opts.step
        };
        rk4_step(sys, t, &y, t_next - t, &mut next, &mut ws);
        if !is_sane(&next, opts.blowup_threshold) {
            return Err(IntegrationError::Blowup { last_good_time: t });
        }
        std::mem::swap(&mut y, &mut next);
        t = t_next;
        if k % opts.stride == 0 || k == n_steps {
            traj.times.push(t);
            traj.states.push(y.clone());
        }
    }
    Ok(traj)
}

// Dormand–Prince 5(4) tableau.
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

struct Dopri {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    rtol: f64,
    atol: f64,
}

impl Dopri {
    /// Returns the weighted RMS error estimate; writes the 5th-order result.
    fn attempt<S: OdeSystem + ?Sized>(
        &mut self,
        sys: &S,
        t: f64,
        y: &[f64],
        h: f64,
        out: &mut [f64],
    ) -> f64 {
        let n = y.len();
        for s in 0..7 {
            for (i, (tmp, yi)) in self.tmp.iter_mut().zip(y).enumerate() {
                let mut acc = *yi;
                for (j, a) in A[s].iter().enumerate().take(s) {
                    acc += h * a * self.k[j][i];
                }
                *tmp = acc;
            }
            sys.rhs(t + C[s] * h, &self.tmp, &mut self.k[s]);
        }
        let mut err_sq = 0.0;
        for i in 0..n {
            let mut hi = y[i];
            let mut lo = y[i];
            for s in 0..7 {
                hi += h * B5[s] * self.k[s][i];
                lo += h * B4[s] * self.k[s][i];
            }
            out[i] = hi;
            let scale = self.atol + self.rtol * y[i].abs().max(hi.abs());
            let e = (hi - lo) / scale;
            err_sq += e * e;
        }
        (err_sq / n as f64).sqrt()
    }
}

fn integrate_dopri<S: OdeSystem + ?Sized>(
    sys: &S,
    y0: &[f64],
    opts: &Options,
    rtol: f64,
    atol: f64,
) -> Result<Trajectory, IntegrationError> {
    let spacing = opts.step * opts.stride as f64;
    let n_out = step_count(opts, spacing);
    let n = y0.len();
    let mut stepper = Dopri {
        k: std::array::from_fn(|_| vec![0.0; n]),
        tmp: vec![0.0; n],
        rtol,
        atol,
    };
    let mut traj = Trajectory {
        times: vec![opts.t_start],
        states: vec![y0.to_vec()],
    };
    let mut y = y0.to_vec();
    let mut trial = vec![0.0; n];
    let mut t = opts.t_start;
    let mut h = spacing.min(1e-2);
    for j in 1..=n_out {
        let target = if j == n_out {
            opts.t_end
        } else {
            opts.t_start + j as f64 * spacing
        };
        while t < target {
            let remaining = target - t;
            let last = h >= remaining;
            let h_try = if last { remaining } else { h };
            let err = stepper.attempt(sys, t, &y, h_try, &mut trial);
            if err <= 1.0 && err.is_finite() {
                if !is_sane(&trial, opts.blowup_threshold) {
                    return Err(IntegrationError::Blowup { last_good_time: t });
                }
                t = if last { target } else { t + h_try };
                std::mem::swap(&mut y, &mut trial);
            }
            let factor = if err.is_finite() {
                (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0)
            } else {
                0.2
            };
            // keep the controller's step when only clipped to hit the grid
            h = if last && err <= 1.0 {
                h.max(h_try * factor)
            } else {
                h_try * factor
            };
            if h < 1e-14 * (1.0 + t.abs()) {
                return Err(IntegrationError::StepUnderflow(t));
            }
        }
        traj.times.push(t);
        traj.states.push(y.clone());
    }
    Ok(traj)
}
