//! Hand transcription of the two Mathematica NDSolve systems, one line per
//! equation, with the original variable names. Kept free of any library
//! helpers so it can serve as an independent oracle.

use ncflow::Complex;

/// Right-hand side of the `Z_3` system. Arrays are indexed by group element.
#[allow(clippy::type_complexity)]
pub fn z3(
    kp: [Complex; 3],
    km: [Complex; 3],
    m: [Complex; 3],
) -> ([Complex; 3], [Complex; 3], [Complex; 3]) {
    let [kp0, kp1, kp2] = kp;
    let [km0, km1, km2] = km;
    let [m0, m1, m2] = m;
    let h = 0.5;
    let kp1_ = kp1 * (kp0 + km2 - kp2 - km1) * h;
    let kp2_ = kp2 * (kp1 + km0 - kp0 - km2) * h;
    let kp0_ = kp0 * (kp2 + km1 - kp1 - km0) * h;
    let km1_ = km1 * (kp0 + km2 - kp1 - km0) * h;
    let km2_ = km2 * (kp1 + km0 - kp2 - km1) * h;
    let km0_ = km0 * (kp2 + km1 - kp0 - km2) * h;
    let m0_ = -m0 * (-kp0 + kp1 - km0 + km2) * h - kp0 * (m0 - m2) - km0 * (m0 - m1);
    let m1_ = -m1 * (-kp1 + kp2 - km1 + km0) * h - kp1 * (m1 - m0) - km1 * (m1 - m2);
    let m2_ = -m2 * (-kp2 + kp0 - km2 + km1) * h - kp2 * (m2 - m1) - km2 * (m2 - m0);
    ([kp0_, kp1_, kp2_], [km0_, km1_, km2_], [m0_, m1_, m2_])
}

/// Right-hand side of the `M_2` system. Matrices are `[a, b, c, d]` for
/// `[[a, b], [c, d]]`.
#[allow(clippy::type_complexity)]
pub fn m2(
    k1: [Complex; 4],
    k2: [Complex; 4],
    m: [Complex; 4],
) -> ([Complex; 4], [Complex; 4], [Complex; 4]) {
    let [a1, b1, c1, d1] = k1;
    let [a2, b2, c2, d2] = k2;
    let [ma, mb, mc, md] = m;
    let two = Complex::new(2.0, 0.0);
    let h = 0.5;
    let a1_ = (-c1 * (a1 + d1) + b1 * (a2 + d2)) * h;
    let b1_ = (a1 * a1 - d1 * d1) * h;
    let c1_ = ((-a1 + d1) * (a2 + d2)) * h;
    let d1_ = (c1 * (a1 + d1) - b1 * (a2 + d2)) * h;
    let a2_ = (-c2 * (a1 + d1) + b2 * (a2 + d2)) * h;
    let b2_ = ((a1 + d1) * (a2 - d2)) * h;
    let c2_ = (-a2 * a2 + d2 * d2) * h;
    let d2_ = (c2 * (a1 + d1) - b2 * (a2 + d2)) * h;
    let ma_ = -(c1 * ma - two * a2 * mb + a1 * mc + d1 * mc + b2 * (ma - two * md)) * h;
    let mb_ = -(b2 * mb + c1 * mb - two * b1 * mc + d1 * md + a1 * (-two * ma + md)) * h;
    let mc_ = -(a2 * ma - two * c2 * mb + b2 * mc + c1 * mc + d2 * (ma - two * md)) * h;
    let md_ = -(a2 * mb + d2 * mb - two * d1 * mc + b2 * md + c1 * (-two * ma + md)) * h;
    (
        [a1_, b1_, c1_, d1_],
        [a2_, b2_, c2_, d2_],
        [ma_, mb_, mc_, md_],
    )
}
