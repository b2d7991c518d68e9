//! Batches of independent runs from random real initial data.
//!
//! Each member is integrated on its own; the batch is spread across threads
//! according to [`Execution`].

use rand::Rng;

use crate::algebra::{Complex, Mat2, ZnElement};
use crate::calculus::{M2VectorField, ZnVectorField};
use crate::monitor::{summarize_m2, summarize_zn, InvariantSummary};
use crate::ode::{integrate, IntegrationError, Options};
use crate::par::{self, Execution};
use crate::transport::{M2Geodesic, M2GeodesicState, ZnGeodesic, ZnGeodesicState};

fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// A real, braided field on `Z_n` with a normalized `m`.
///
/// Reality forces `K_-(i) = -K_+(i+1)*`; the braiding constraint then
/// requires all `|K_+(i)|` to agree, so only the phases are free.
pub fn random_real_zn<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ZnGeodesicState {
    let radius = rng.random_range(0.2..1.5);
    let plus = ZnElement::from_fn(n, |_| random_phase(rng) * radius);
    let minus = ZnElement::from_fn(n, |i| -plus.at(i as i64 + 1).conj());
    let m = ZnElement::from_fn(n, |_| random_complex(rng));
    let norm = m.inner_product(&m).re.sqrt();
    ZnGeodesicState {
        k: ZnVectorField { plus, minus },
        m: m.scale((1.0 / norm).into()),
    }
}

/// A real field on `M_2` with `[K_1, K_2] = 0`: `K_1` normal, `K_2 = -K_1*`.
pub fn random_real_m2<R: Rng + ?Sized>(rng: &mut R) -> M2GeodesicState {
    // unitary from a normalized column and its orthogonal complement
    let (a, b) = (random_complex(rng), random_complex(rng));
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / r, b / r);
    let u = Mat2::new(a, -b.conj(), b, a.conj());
    let d = Mat2::diag(random_complex(rng), random_complex(rng));
    let k1 = u * d * u.star();
    let m = Mat2::from_flat([0; 4].map(|_| random_complex(rng)));
    let norm = m.inner_product(&m).re.sqrt();
    M2GeodesicState {
        k: M2VectorField { k1, k2: -k1.star() },
        m: m.scale((1.0 / norm).into()),
    }
}

pub fn run_zn_ensemble(
    initial: &[ZnGeodesicState],
    opts: &Options,
    exec: Execution,
) -> Vec<Result<InvariantSummary, IntegrationError>> {
    par::map(exec, initial, |s| {
        let n = s.order();
        let traj = integrate(&ZnGeodesic { n }, &s.to_vec(), opts)?;
        Ok(summarize_zn(n, &traj))
    })
}

pub fn run_m2_ensemble(
    initial: &[M2GeodesicState],
    opts: &Options,
    exec: Execution,
) -> Vec<Result<InvariantSummary, IntegrationError>> {
    par::map(exec, initial, |s| {
        let traj = integrate(&M2Geodesic, &s.to_vec(), opts)?;
        Ok(summarize_m2(&traj))
    })
}
