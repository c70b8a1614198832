//! Deterministic SIR/SIRS dynamics in population fractions.
//!
//! ```text
//! SIR:   s' = -b s i          i' = b s i - g i    r' = g i
//! SIRS:  s' = -b s i + a r    i' = b s i - g i    r' = g i - a r
//! ```
//!
//! Integrated with the classical fourth-order Runge–Kutta scheme at a fixed
//! step.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dynamics::{RateParams, SimError};

pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionState {
    pub s: f64,
    pub i: f64,
    pub r: f64,
}

impl FractionState {
    pub fn new(s: f64, i: f64, r: f64) -> Result<Self, SimError> {
        let st = Self { s, i, r };
        st.validate()?;
        Ok(st)
    }

    /// Fully susceptible population apart from an infected fraction `i0`.
    pub fn seeded(i0: f64) -> Result<Self, SimError> {
        Self::new(1.0 - i0, i0, 0.0)
    }

    pub fn disease_free() -> Self {
        Self { s: 1.0, i: 0.0, r: 0.0 }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, v) in [("s", self.s), ("i", self.i), ("r", self.r)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(SimError::InvalidParameter(format!("{name}={v} outside [0, 1]")));
            }
        }
        let sum = self.s + self.i + self.r;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(SimError::InvalidParameter(format!("fractions sum to {sum}, not 1")));
        }
        Ok(())
    }

    fn as_array(&self) -> [f64; 3] {
        [self.s, self.i, self.r]
    }

    fn from_array([s, i, r]: [f64; 3]) -> Self {
        Self { s, i, r }
    }

    pub fn max_abs_diff(&self, other: &FractionState) -> f64 {
        (self.s - other.s)
            .abs()
            .max((self.i - other.i).abs())
            .max((self.r - other.r).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub params: RateParams,
    pub dt: f64,
    pub points: Vec<(f64, FractionState)>,
}

impl OdeSolution {
    pub fn last(&self) -> FractionState {
        self.points.last().expect("solutions hold the initial point").1
    }

    /// Value at grid time nearest to `t`.
    pub fn at(&self, t: f64) -> FractionState {
        let idx = ((t / self.dt).round().max(0.0) as usize).min(self.points.len() - 1);
        self.points[idx].1
    }

    /// CSV with header `t,S,I,R` holding fractions.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,S,I,R\n");
        for (t, x) in &self.points {
            let _ = writeln!(out, "{t},{},{},{}", x.s, x.i, x.r);
        }
        out
    }
}

/// Right-hand side of the SIR equations.
pub fn sir_rhs(p: &RateParams, x: [f64; 3]) -> [f64; 3] {
    let [s, i, _] = x;
    let infection = p.beta * s * i;
    [-infection, infection - p.gamma * i, p.gamma * i]
}

/// Right-hand side of the SIRS equations.
pub fn sirs_rhs(p: &RateParams, x: [f64; 3]) -> [f64; 3] {
    let [s, i, r] = x;
    let infection = p.beta * s * i;
    let waning = p.alpha * r;
    [-infection + waning, infection - p.gamma * i, p.gamma * i - waning]
}

pub fn ode_sir(p: &RateParams, init: FractionState, t_max: f64, dt: f64) -> Result<OdeSolution, SimError> {
    integrate(p, init, t_max, dt, sir_rhs)
}

pub fn ode_sirs(p: &RateParams, init: FractionState, t_max: f64, dt: f64) -> Result<OdeSolution, SimError> {
    integrate(p, init, t_max, dt, sirs_rhs)
}

fn integrate(
    p: &RateParams,
    init: FractionState,
    t_max: f64,
    dt: f64,
    rhs: fn(&RateParams, [f64; 3]) -> [f64; 3],
) -> Result<OdeSolution, SimError> {
    p.validate()?;
    init.validate()?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SimError::InvalidParameter(format!("dt={dt} must be > 0")));
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "t_max={t_max} must be finite and >= 0"
        )));
    }
    let steps = (t_max / dt - 1e-9).ceil().max(0.0) as usize;
    let mut points = Vec::with_capacity(steps + 1);
    let mut x = init.as_array();
    points.push((0.0, init));
    for k in 1..=steps {
        x = rk4_step(p, x, dt, rhs);
        points.push((k as f64 * dt, FractionState::from_array(x)));
    }
    Ok(OdeSolution { params: *p, dt, points })
}

fn rk4_step(p: &RateParams, x: [f64; 3], h: f64, rhs: fn(&RateParams, [f64; 3]) -> [f64; 3]) -> [f64; 3] {
    let axpy = |a: [f64; 3], k: [f64; 3], c: f64| [a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2]];
    let k1 = rhs(p, x);
    let k2 = rhs(p, axpy(x, k1, h / 2.0));
    let k3 = rhs(p, axpy(x, k2, h / 2.0));
    let k4 = rhs(p, axpy(x, k3, h));
    let mut out = x;
    for j in 0..3 {
        out[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    out
}

/// Basic reproduction number: `beta / gamma`, times the mean degree when
/// one is given.
pub fn r0(p: &RateParams, k_avg: Option<f64>) -> Result<f64, SimError> {
    if p.gamma == 0.0 {
        return Err(SimError::InvalidParameter("R0 undefined for gamma = 0".into()));
    }
    Ok(p.beta * k_avg.unwrap_or(1.0) / p.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equilibrium {
    DiseaseFree,
    Endemic(FractionState),
}

impl Equilibrium {
    pub fn state(&self) -> FractionState {
        match self {
            Equilibrium::DiseaseFree => FractionState::disease_free(),
            Equilibrium::Endemic(x) => *x,
        }
    }
}

/// Fixed point of the SIRS equations.
pub fn endemic_equilibrium(p: &RateParams) -> Result<Equilibrium, SimError> {
    if p.gamma == 0.0 {
        return Err(SimError::InvalidParameter("equilibrium undefined for gamma = 0".into()));
    }
    if p.beta <= p.gamma || p.alpha == 0.0 {
        return Ok(Equilibrium::DiseaseFree);
    }
    let s = p.gamma / p.beta;
    let i = (1.0 - s) / (1.0 + p.gamma / p.alpha);
    let r = p.gamma / p.alpha * i;
    Ok(Equilibrium::Endemic(FractionState { s, i, r }))
}
