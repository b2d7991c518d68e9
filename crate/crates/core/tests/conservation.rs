mod common;

use common::{rng, velocity_identity_m2, velocity_identity_zn};
use ncflow::ensemble::{random_real_m2, random_real_zn, run_m2_ensemble, run_zn_ensemble};
use ncflow::monitor::summarize_zn;
use ncflow::ode::{integrate, Method, Options};
use ncflow::presets;
use ncflow::transport::{M2GeodesicState, ZnGeodesic, ZnGeodesicState};
use ncflow::{Execution, Mat2, ZnElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fig1() -> ZnGeodesicState {
    ZnGeodesicState {
        k: presets::fig1_field(),
        m: presets::fig1_m(),
    }
}

fn fig2() -> M2GeodesicState {
    M2GeodesicState {
        k: presets::fig2_field(),
        m: presets::fig2_m(),
    }
}

#[test]
fn zn_ensembles_conserve_invariants() {
    let mut r = rng(5);
    let init: Vec<_> = [2, 3, 4, 5, 7, 9]
        .iter()
        .flat_map(|&n| [0, 1].map(|_| random_real_zn(&mut r, n)))
        .collect();
    let opts = Options::rk4(3.0, 1e-3).with_stride(50);
    for (i, res) in run_zn_ensemble(&init, &opts, Execution::Parallel)
        .into_iter()
        .enumerate()
    {
        let s = res.unwrap();
        assert!(s.reality < 1e-9, "member {i}: {s:?}");
        assert!(s.braiding < 1e-9, "member {i}: {s:?}");
        assert!(s.normalization < 1e-9, "member {i}: {s:?}");
        assert!(s.modulus < 1e-9, "member {i}: {s:?}");
    }
}

#[test]
fn m2_ensembles_conserve_invariants() {
    let mut r = rng(6);
    let init: Vec<_> = (0..12).map(|_| random_real_m2(&mut r)).collect();
    let opts = Options::rk4(3.0, 1e-3).with_stride(50);
    for (i, res) in run_m2_ensemble(&init, &opts, Execution::Parallel)
        .into_iter()
        .enumerate()
    {
        let s = res.unwrap();
        assert!(s.reality < 1e-9 && s.braiding < 1e-9, "member {i}: {s:?}");
        assert!(s.normalization < 1e-9, "member {i}: {s:?}");
        assert!(s.bloch_excess <= 1e-9, "member {i}: {s:?}");
    }
}

#[test]
fn execution_modes_give_identical_results() {
    let mut r = rng(8);
    let init: Vec<_> = (0..8).map(|_| random_real_zn(&mut r, 4)).collect();
    let opts = Options::rk4(1.0, 1e-2);
    assert_eq!(
        run_zn_ensemble(&init, &opts, Execution::Sequential),
        run_zn_ensemble(&init, &opts, Execution::Parallel)
    );
}

#[test]
fn adaptive_integrator_conserves_on_fig1() {
    let opts = Options {
        t_end: 10.0,
        step: 1e-2,
        method: Method::adaptive_default(),
        ..Options::default()
    };
    let traj = integrate(&ZnGeodesic { n: 3 }, &fig1().to_vec(), &opts).unwrap();
    let s = summarize_zn(3, &traj);
    assert!(
        s.reality < 1e-7 && s.braiding < 1e-7 && s.normalization < 1e-7,
        "{s:?}"
    );
    assert_eq!(traj.times.len(), 1001);
}

#[test]
fn velocity_identity_holds_on_presets() {
    let dz = velocity_identity_zn(&fig1(), 1e-4);
    let dm = velocity_identity_m2(&fig2(), 1e-4);
    assert!(dz <= 1e-6, "{dz}");
    assert!(dm <= 1e-6, "{dm}");
}

#[test]
fn velocity_identity_holds_on_random_real_data() {
    let mut r = rng(9);
    for n in [2, 3, 5] {
        let d = velocity_identity_zn(&random_real_zn(&mut r, n), 1e-4);
        assert!(d <= 1e-6, "n = {n}: {d}");
    }
    let d = velocity_identity_m2(&random_real_m2(&mut r), 1e-4);
    assert!(d <= 1e-6, "{d}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// φ(a* a) stays non-negative along the flow.
    #[test]
    fn states_stay_positive(seed in any::<u64>(), n in 2usize..6) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let zs = random_real_zn(&mut r, n);
        let traj = integrate(&ZnGeodesic { n }, &zs.to_vec(), &Options::rk4(2.0, 1e-2).with_stride(20)).unwrap();
        let a = common::zn(&mut r, n);
        let aa = &a.star() * &a;
        for (_, y) in traj.iter() {
            let s = ZnGeodesicState::from_slice(n, y);
            prop_assert!(s.phi(&aa).re >= -1e-10);
            prop_assert!(s.phi(&ZnElement::unit(n)).re >= -1e-10);
        }
        let ms = random_real_m2(&mut r);
        let traj = integrate(&ncflow::transport::M2Geodesic, &ms.to_vec(), &Options::rk4(2.0, 1e-2).with_stride(20)).unwrap();
        let b: Mat2 = common::mat2(&mut r);
        for (_, y) in traj.iter() {
            let s = M2GeodesicState::from_slice(y);
            prop_assert!(s.phi(&(b.star() * b)).re >= -1e-10);
        }
    }
}
