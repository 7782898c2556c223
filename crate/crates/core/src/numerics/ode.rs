//! Dormand–Prince 5(4) with continuous output and terminal events.

use super::{find_root, Bracket, Tolerance};
use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Settings for [`integrate_ode`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
    /// Smallest step magnitude before the integration gives up.
    pub min_step: f64,
    pub max_step: Option<f64>,
}

impl OdeOptions {
    pub fn from_tolerance(tol: &Tolerance) -> Self {
        Self {
            abs_tol: tol.abs_tol,
            rel_tol: tol.rel_tol,
            ..Self::default()
        }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        let t = Tolerance::default();
        Self {
            abs_tol: t.abs_tol,
            rel_tol: t.rel_tol,
            max_steps: 200_000,
            min_step: 1e-14,
            max_step: None,
        }
    }
}

/// Quartic interpolant over one accepted step.
#[derive(Debug, Clone)]
pub struct DenseSegment {
    pub a0: f64,
    pub h: f64,
    rc: [Vec<f64>; 5],
}

impl DenseSegment {
    pub fn eval(&self, a: f64) -> Vec<f64> {
        let th = (a - self.a0) / self.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.rc;
        (0..r1.len())
            .map(|i| r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i]))))
            .collect()
    }

    fn contains(&self, a: f64) -> bool {
        let (lo, hi) = if self.h > 0.0 {
            (self.a0, self.a0 + self.h)
        } else {
            (self.a0 + self.h, self.a0)
        };
        a >= lo && a <= hi
    }
}

/// Where a terminal event stopped the integration.
#[derive(Debug, Clone, PartialEq)]
pub struct EventHit {
    pub param: f64,
    pub state: Vec<f64>,
}

/// Accepted steps plus continuous output between them.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub event: Option<EventHit>,
    segments: Vec<DenseSegment>,
}

impl Trajectory {
    pub fn last_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds at least the start point")
    }

    pub fn last_param(&self) -> f64 {
        *self.params.last().expect("trajectory holds at least the start point")
    }

    /// Interpolated state at `a`, `None` outside the integrated range.
    pub fn eval(&self, a: f64) -> Option<Vec<f64>> {
        if self.segments.is_empty() {
            return (a == self.params[0]).then(|| self.states[0].clone());
        }
        let forward = self.segments[0].h > 0.0;
        let idx = self.segments.partition_point(|s| {
            if forward {
                s.a0 + s.h < a
            } else {
                s.a0 + s.h > a
            }
        });
        let seg = self.segments.get(idx)?;
        seg.contains(a).then(|| seg.eval(a))
    }

    pub fn segments(&self) -> &[DenseSegment] {
        &self.segments
    }
}

/// Integrates `dy/da = rhs(a, y)` over `span`.
pub fn integrate_ode<R>(rhs: R, y0: &[f64], span: (f64, f64), opts: &OdeOptions) -> Result<Trajectory>
where
    R: FnMut(f64, &[f64], &mut [f64]),
{
    integrate_ode_with_event(rhs, None::<fn(f64, &[f64]) -> f64>, y0, span, opts)
}

/// As [`integrate_ode`], stopping at the first sign change of `event`.
pub fn integrate_ode_with_event<R, G>(
    mut rhs: R,
    mut event: Option<G>,
    y0: &[f64],
    span: (f64, f64),
    opts: &OdeOptions,
) -> Result<Trajectory>
where
    R: FnMut(f64, &[f64], &mut [f64]),
    G: FnMut(f64, &[f64]) -> f64,
{
    let (a0, a1) = span;
    if !a0.is_finite() || !a1.is_finite() {
        return Err(Error::InvalidInput("integration span must be finite".into()));
    }
    let n = y0.len();
    let mut traj = Trajectory {
        params: vec![a0],
        states: vec![y0.to_vec()],
        event: None,
        segments: Vec::new(),
    };
    if a0 == a1 {
        return Ok(traj);
    }
    let dir = (a1 - a0).signum();
    let mut a = a0;
    let mut y = y0.to_vec();
    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
    rhs(a, &y, &mut k[0]);
    if k[0].iter().any(|v| !v.is_finite()) {
        return Err(Error::StepUnderflow { param: a, state: y });
    }
    let mut g_prev = event.as_mut().map(|g| g(a, &y));

    let mut h = dir * initial_step(&y, &k[0], (a1 - a0).abs(), opts);
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut err_prev: f64 = 1e-4;
    let mut steps = 0;

    while (a1 - a) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::MaxIterations {
                what: "integrate_ode",
                iterations: opts.max_steps,
            });
        }
        if let Some(hm) = opts.max_step {
            h = dir * h.abs().min(hm);
        }
        let last = (a + h - a1) * dir >= 0.0;
        if last {
            h = a1 - a;
        }
        // stages
        let stage = |coef: &[(usize, f64)], k: &[Vec<f64>; 7], out: &mut Vec<f64>, y: &[f64]| {
            for i in 0..n {
                let mut s = 0.0;
                for &(j, c) in coef {
                    s += c * k[j][i];
                }
                out[i] = y[i] + h * s;
            }
        };
        stage(&[(0, A21)], &k, &mut ytmp, &y);
        rhs(a + C2 * h, &ytmp, &mut k[1]);
        stage(&[(0, A31), (1, A32)], &k, &mut ytmp, &y);
        rhs(a + C3 * h, &ytmp, &mut k[2]);
        stage(&[(0, A41), (1, A42), (2, A43)], &k, &mut ytmp, &y);
        rhs(a + C4 * h, &ytmp, &mut k[3]);
        stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &k, &mut ytmp, &y);
        rhs(a + C5 * h, &ytmp, &mut k[4]);
        stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &k, &mut ytmp, &y);
        rhs(a + h, &ytmp, &mut k[5]);
        stage(&[(0, A71), (2, A73), (3, A74), (4, A75), (5, A76)], &k, &mut ynew, &y);
        let a_new = if last { a1 } else { a + h };
        rhs(a_new, &ynew, &mut k[6]);

        let mut err = 0.0;
        let mut finite = true;
        for i in 0..n {
            let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(ynew[i].abs());
            err += (e / sc).powi(2);
            finite &= ynew[i].is_finite() && k[6][i].is_finite();
        }
        let err = if finite { (err / n.max(1) as f64).sqrt() } else { f64::INFINITY };

        if err <= 1.0 {
            let mut rc: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
            for i in 0..n {
                let dy = ynew[i] - y[i];
                let bspl = h * k[0][i] - dy;
                rc[0][i] = y[i];
                rc[1][i] = dy;
                rc[2][i] = bspl;
                rc[3][i] = dy - h * k[6][i] - bspl;
                rc[4][i] = h
                    * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
            }
            let seg = DenseSegment { a0: a, h, rc };
            if let (Some(g), Some(gp)) = (event.as_mut(), g_prev) {
                let g_new = g(a_new, &ynew);
                if gp != 0.0 && (g_new == 0.0 || g_new.signum() != gp.signum()) {
                    let (lo, hi) = if h > 0.0 { (a, a_new) } else { (a_new, a) };
                    let root = if g_new == 0.0 {
                        a_new
                    } else {
                        let tol = Tolerance::new(1e-300, 4.0 * f64::EPSILON, 200)?;
                        find_root(|s| g(s, &seg.eval(s)), Bracket::new(lo, hi)?, tol)?
                    };
                    let state = if root == a_new { ynew.clone() } else { seg.eval(root) };
                    let mut cut = seg.clone();
                    cut.h = h;
                    traj.segments.push(cut);
                    traj.params.push(root);
                    traj.states.push(state.clone());
                    traj.event = Some(EventHit { param: root, state });
                    return Ok(traj);
                }
                g_prev = Some(g_new);
            }
            traj.segments.push(seg);
            a = a_new;
            y.copy_from_slice(&ynew);
            k[0] = k[6].clone();
            traj.params.push(a);
            traj.states.push(y.clone());
            // PI step control
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0)).clamp(0.2, 5.0)
            };
            err_prev = err.max(1e-4);
            h *= fac;
        } else {
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h *= fac;
        }
        if h.abs() < opts.min_step * a.abs().max(1.0) {
            return Err(Error::StepUnderflow { param: a, state: y });
        }
    }
    Ok(traj)
}

fn initial_step(y: &[f64], f: &[f64], span: f64, opts: &OdeOptions) -> f64 {
    let mut d0: f64 = 0.0;
    let mut d1: f64 = 0.0;
    for i in 0..y.len() {
        let sc = opts.abs_tol + opts.rel_tol * y[i].abs();
        d0 = d0.max((y[i] / sc).abs());
        d1 = d1.max((f[i] / sc).abs());
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h = h.min(span);
    match opts.max_step {
        Some(m) => h.min(m),
        None => h,
    }
    .max(1e-10 * span)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> OdeOptions {
        OdeOptions::default()
    }

    #[test]
    fn exponential() {
        let tr = integrate_ode(|_, y, d| d[0] = y[0], &[1.0], (0.0, 1.0), &opts()).unwrap();
        assert!((tr.last_state()[0] - std::f64::consts::E).abs() < 10.0 * 1e-10 * 3.0);
    }

    #[test]
    fn linear_decay_and_riccati() {
        let tr = integrate_ode(|_, y, d| d[0] = -y[0], &[1.0], (0.0, 2f64.ln()), &opts()).unwrap();
        assert!((tr.last_state()[0] - 0.5).abs() < 1e-9);
        let tr = integrate_ode(|_, y, d| d[0] = -y[0] * y[0], &[1.0], (0.0, 3.0), &opts()).unwrap();
        assert!((tr.last_state()[0] - 0.25).abs() < 1e-9);
    }

    #[test]
    fn dense_output_matches() {
        let tr = integrate_ode(
            |_, y, d| {
                d[0] = y[1];
                d[1] = -y[0];
            },
            &[0.0, 1.0],
            (0.0, 6.0),
            &opts(),
        )
        .unwrap();
        for i in 0..=60 {
            let a = i as f64 * 0.1;
            let s = tr.eval(a).unwrap();
            assert!((s[0] - a.sin()).abs() < 1e-8, "a={a}");
        }
        assert!(tr.eval(6.5).is_none());
    }

    #[test]
    fn backward_integration() {
        let tr = integrate_ode(|_, y, d| d[0] = y[0], &[1.0], (0.0, -1.0), &opts()).unwrap();
        assert!((tr.last_state()[0] - (-1f64).exp()).abs() < 1e-9);
        assert!((tr.eval(-0.5).unwrap()[0] - (-0.5f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn event_stops_at_crossing() {
        let tr = integrate_ode_with_event(
            |_, _, d| d[0] = 1.0,
            Some(|_: f64, y: &[f64]| y[0] - 0.737),
            &[0.0],
            (0.0, 5.0),
            &opts(),
        )
        .unwrap();
        let ev = tr.event.unwrap();
        assert!((ev.param - 0.737).abs() < 1e-12);
    }

    #[test]
    fn blow_up_reports_underflow() {
        let r = integrate_ode(|_, y, d| d[0] = y[0] * y[0], &[1.0], (0.0, 2.0), &opts());
        match r {
            Err(Error::StepUnderflow { param, state }) => {
                assert!(param < 1.001 && param > 0.99, "{param}");
                assert!(state[0] > 100.0);
            }
            other => panic!("expected underflow, got {other:?}"),
        }
    }

    #[test]
    fn zero_span_is_identity() {
        let tr = integrate_ode(|_, _, d| d[0] = 1.0, &[3.0], (1.0, 1.0), &opts()).unwrap();
        assert_eq!(tr.last_state(), &[3.0]);
    }
}
