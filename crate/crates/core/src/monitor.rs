//! Invariant residuals sampled along trajectories.

use crate::algebra::{Mat2, ZnElement};
use crate::connection::{
    braiding_residual_m2, braiding_residual_zn, reality_residual_m2, reality_residual_zn,
};
use crate::ode::Trajectory;
use crate::transport::{bloch_with_residue, M2GeodesicState, ZnGeodesicState};

/// Largest deviations seen along one run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InvariantSummary {
    /// max |reality residual| entry
    pub reality: f64,
    /// max |braiding residual| entry (Frobenius norm on `M_2`)
    pub braiding: f64,
    /// max |φ(1) - φ(1)(0)|
    pub normalization: f64,
    /// `Z_n`: max ||K_±(i)(t)| - |K_±(i)(0)||; unused on `M_2`
    pub modulus: f64,
    /// `M_2`: max of `s² + x² + y² - ¼` (positive means outside the ball)
    pub bloch_excess: f64,
}

impl InvariantSummary {
    fn merge(&mut self, other: &Self) {
        self.reality = self.reality.max(other.reality);
        self.braiding = self.braiding.max(other.braiding);
        self.normalization = self.normalization.max(other.normalization);
        self.modulus = self.modulus.max(other.modulus);
        self.bloch_excess = self.bloch_excess.max(other.bloch_excess);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZnResiduals {
    pub reality: Vec<f64>,
    pub braiding: Vec<f64>,
    pub normalization: f64,
}

pub fn zn_residuals(state: &ZnGeodesicState) -> ZnResiduals {
    let n = state.order();
    let phi1 = state.phi(&ZnElement::unit(n)).re;
    ZnResiduals {
        reality: abs_samples(&reality_residual_zn(&state.k)),
        braiding: abs_samples(&braiding_residual_zn(&state.k)),
        normalization: phi1 - 1.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct M2Residuals {
    pub commutator: Mat2,
    pub reality: Mat2,
    pub normalization: f64,
    pub bloch_radius_sq: f64,
    pub bloch_residue: f64,
}

pub fn m2_residuals(state: &M2GeodesicState) -> M2Residuals {
    let (p, residue) = bloch_with_residue(&state.m);
    M2Residuals {
        commutator: braiding_residual_m2(&state.k),
        reality: reality_residual_m2(&state.k),
        normalization: state.phi(&Mat2::identity()).re - 1.0,
        bloch_radius_sq: p.radius_sq(),
        bloch_residue: residue,
    }
}

fn abs_samples(f: &ZnElement) -> Vec<f64> {
    f.samples().iter().map(|z| z.norm()).collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

pub fn summarize_zn(n: usize, traj: &Trajectory) -> InvariantSummary {
    let Some(first) = traj.states.first() else {
        return InvariantSummary::default();
    };
    let start = ZnGeodesicState::from_slice(n, first);
    let norm0 = zn_residuals(&start).normalization;
    let mut out = InvariantSummary::default();
    for y in &traj.states {
        let s = ZnGeodesicState::from_slice(n, y);
        let r = zn_residuals(&s);
        let modulus = (0..n)
            .flat_map(|i| {
                [
                    (s.k.plus.samples()[i].norm() - start.k.plus.samples()[i].norm()).abs(),
                    (s.k.minus.samples()[i].norm() - start.k.minus.samples()[i].norm()).abs(),
                ]
            })
            .fold(0.0, f64::max);
        out.merge(&InvariantSummary {
            reality: max_of(&r.reality),
            braiding: max_of(&r.braiding),
            normalization: (r.normalization - norm0).abs(),
            modulus,
            bloch_excess: f64::NEG_INFINITY,
        });
    }
    out
}

pub fn summarize_m2(traj: &Trajectory) -> InvariantSummary {
    let Some(first) = traj.states.first() else {
        return InvariantSummary::default();
    };
    let norm0 = m2_residuals(&M2GeodesicState::from_slice(first)).normalization;
    let mut out = InvariantSummary {
        bloch_excess: f64::NEG_INFINITY,
        ..InvariantSummary::default()
    };
    for y in &traj.states {
        let r = m2_residuals(&M2GeodesicState::from_slice(y));
        let phi1 = 1.0 + r.normalization;
        out.merge(&InvariantSummary {
            reality: r.reality.max_abs(),
            braiding: r.commutator.frobenius_norm(),
            normalization: (r.normalization - norm0).abs(),
            modulus: 0.0,
            // compare against the ball scaled to the current normalization
            bloch_excess: r.bloch_radius_sq - 0.25 * phi1 * phi1,
        });
    }
    out
}
