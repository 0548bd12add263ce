//! Quaternion math for head orientations.
//!
//! Quaternions are stored scalar-last `(x, y, z, w)` and interpreted as
//! rotations of the world frame into the head frame. Euler angles use
//! the intrinsic Z-Y-X (yaw, pitch, roll) convention in degrees, the
//! usual choice for head-tracking logs. `q` and `-q` encode the same
//! rotation; series-level helpers keep consecutive samples on the same
//! hemisphere so that componentwise interpolation and forecasting stay
//! continuous.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest deviation from unit norm accepted on quaternion inputs.
pub const UNIT_TOLERANCE: f64 = 1e-6;

/// Norm below which a quaternion cannot be meaningfully normalized.
const DEGENERATE_NORM: f64 = 1e-12;

/// Below this arc (radians) slerp falls back to normalized lerp.
const SLERP_SMALL_ANGLE_RAD: f64 = 1e-7;

/// Pitch this close to +/-90 degrees is treated as gimbal lock.
const GIMBAL_LOCK_DEG: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum QuatError {
    #[error("degenerate quaternion: norm {norm:.3e} is below {DEGENERATE_NORM:.0e}")]
    Degenerate { norm: f64 },
    #[error("quaternion is not unit-norm: |q| = {norm} deviates by more than {UNIT_TOLERANCE:.0e}")]
    NotUnit { norm: f64 },
    #[error("interpolation parameter {0} is outside [0, 1]")]
    ParamOutOfRange(f64),
}

/// Rotation quaternion, scalar-last.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

/// Intrinsic Z-Y-X Euler angles in degrees.
///
/// Yaw and roll lie in (-180, 180], pitch in [-90, 90].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat { x: 0.0, y: 0.0, z: 0.0, w: 1.0 };

    pub fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Quat { x, y, z, w }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Quat) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z + self.w * other.w
    }

    /// Scales to unit norm. Errors when the norm is too close to zero
    /// for the direction to be trusted.
    pub fn normalize(&self) -> Result<Quat, QuatError> {
        let norm = self.norm();
        if !norm.is_finite() || norm < DEGENERATE_NORM {
            return Err(QuatError::Degenerate { norm });
        }
        Ok(Quat::new(self.x / norm, self.y / norm, self.z / norm, self.w / norm))
    }

    /// Like [`Quat::normalize`] but leaves quaternions that are already
    /// unit to machine precision bit-for-bit untouched.
    pub fn renormalize(&self) -> Result<Quat, QuatError> {
        let norm_sq = self.dot(self);
        if norm_sq.is_finite() && (norm_sq - 1.0).abs() <= 1e-14 {
            return Ok(*self);
        }
        self.normalize()
    }

    pub fn is_unit(&self, tolerance: f64) -> bool {
        (self.norm() - 1.0).abs() <= tolerance
    }

    fn ensure_unit(&self) -> Result<(), QuatError> {
        let norm = self.norm();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(QuatError::NotUnit { norm });
        }
        Ok(())
    }

    /// Hamilton product `self * other` (apply `other` first).
    pub fn mul(&self, other: &Quat) -> Quat {
        let (x1, y1, z1, w1) = (self.x, self.y, self.z, self.w);
        let (x2, y2, z2, w2) = (other.x, other.y, other.z, other.w);
        Quat::new(
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        )
    }

    /// Rotation of `angle_rad` about `axis`. The axis does not have to
    /// be unit length but must not be degenerate.
    pub fn from_axis_angle(axis: [f64; 3], angle_rad: f64) -> Result<Quat, QuatError> {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !len.is_finite() || len < DEGENERATE_NORM {
            return Err(QuatError::Degenerate { norm: len });
        }
        let (s, c) = (angle_rad / 2.0).sin_cos();
        Ok(Quat::new(axis[0] / len * s, axis[1] / len * s, axis[2] / len * s, c))
    }

    /// Converts to intrinsic Z-Y-X Euler angles in degrees.
    ///
    /// At gimbal lock (|pitch| within 1e-6 deg of 90) yaw and roll are
    /// no longer separable; roll is reported as 0 and yaw absorbs the
    /// remaining rotation.
    pub fn to_euler(&self) -> Result<EulerAngles, QuatError> {
        self.ensure_unit()?;
        let q = self.normalize()?;
        let sinp = 2.0 * (q.w * q.y - q.z * q.x);
        let pitch = sinp.clamp(-1.0, 1.0).asin().to_degrees();
        if 90.0 - pitch.abs() < GIMBAL_LOCK_DEG {
            // Z-Y-X with pitch +90: only yaw - roll is determined;
            // with pitch -90: only yaw + roll. Roll is pinned to zero.
            let a = 2.0 * (q.y * q.z - q.w * q.x);
            let b = 1.0 - 2.0 * (q.x * q.x + q.z * q.z);
            let yaw = if pitch > 0.0 {
                a.atan2(b).to_degrees()
            } else {
                (-a).atan2(b).to_degrees()
            };
            return Ok(EulerAngles {
                yaw: wrap_degrees(yaw),
                pitch: if pitch > 0.0 { 90.0 } else { -90.0 },
                roll: 0.0,
            });
        }
        let yaw = (2.0 * (q.w * q.z + q.x * q.y))
            .atan2(1.0 - 2.0 * (q.y * q.y + q.z * q.z))
            .to_degrees();
        let roll = (2.0 * (q.w * q.x + q.y * q.z))
            .atan2(1.0 - 2.0 * (q.x * q.x + q.y * q.y))
            .to_degrees();
        Ok(EulerAngles {
            yaw: wrap_degrees(yaw),
            pitch,
            roll: wrap_degrees(roll),
        })
    }

    /// Builds the quaternion for intrinsic Z-Y-X Euler angles in
    /// degrees: `qz(yaw) * qy(pitch) * qx(roll)`.
    pub fn from_euler(angles: &EulerAngles) -> Quat {
        let (sz, cz) = (angles.yaw.to_radians() / 2.0).sin_cos();
        let (sy, cy) = (angles.pitch.to_radians() / 2.0).sin_cos();
        let (sx, cx) = (angles.roll.to_radians() / 2.0).sin_cos();
        let qz = Quat::new(0.0, 0.0, sz, cz);
        let qy = Quat::new(0.0, sy, 0.0, cy);
        let qx = Quat::new(sx, 0.0, 0.0, cx);
        qz.mul(&qy).mul(&qx)
    }
}

impl std::ops::Neg for Quat {
    type Output = Quat;

    fn neg(self) -> Quat {
        Quat::new(-self.x, -self.y, -self.z, -self.w)
    }
}

/// Wraps an angle in degrees to (-180, 180].
pub fn wrap_degrees(deg: f64) -> f64 {
    let wrapped = (deg + 180.0).rem_euclid(360.0) - 180.0;
    if wrapped == -180.0 {
        180.0
    } else {
        wrapped
    }
}

/// Spherical linear interpolation from `q0` (u = 0) to `q1` (u = 1).
///
/// `q1` is flipped onto `q0`'s hemisphere first so the path follows
/// the shorter arc. Arcs below [`SLERP_SMALL_ANGLE_RAD`] use normalized
/// lerp, where the slerp weights lose precision. The result is unit
/// within 1e-12.
pub fn slerp(q0: &Quat, q1: &Quat, u: f64) -> Result<Quat, QuatError> {
    if !(0.0..=1.0).contains(&u) {
        return Err(QuatError::ParamOutOfRange(u));
    }
    q0.ensure_unit()?;
    q1.ensure_unit()?;
    let mut q1 = *q1;
    let mut cos_arc = q0.dot(&q1);
    if cos_arc < 0.0 {
        q1 = -q1;
        cos_arc = -cos_arc;
    }
    if u == 0.0 {
        return Ok(*q0);
    }
    if u == 1.0 {
        return Ok(q1);
    }
    let arc = cos_arc.clamp(-1.0, 1.0).acos();
    let (w0, w1) = if arc < SLERP_SMALL_ANGLE_RAD {
        (1.0 - u, u)
    } else {
        let sin_arc = arc.sin();
        (((1.0 - u) * arc).sin() / sin_arc, (u * arc).sin() / sin_arc)
    };
    Quat::new(
        w0 * q0.x + w1 * q1.x,
        w0 * q0.y + w1 * q1.y,
        w0 * q0.z + w1 * q1.z,
        w0 * q0.w + w1 * q1.w,
    )
    .normalize()
}

/// Geodesic rotation angle between two orientations, in radians, in
/// [0, pi]. Sign-insensitive: `angle_between(q, -q) == 0`.
///
/// Small angles go through the 4D chord instead of `acos`, whose
/// conditioning collapses near 1.
pub fn angle_between(q0: &Quat, q1: &Quat) -> Result<f64, QuatError> {
    q0.ensure_unit()?;
    q1.ensure_unit()?;
    let q1 = if q0.dot(q1) < 0.0 { -*q1 } else { *q1 };
    let cos_arc = q0.dot(&q1).clamp(0.0, 1.0);
    if cos_arc > std::f64::consts::FRAC_1_SQRT_2 {
        let dx = q1.x - q0.x;
        let dy = q1.y - q0.y;
        let dz = q1.z - q0.z;
        let dw = q1.w - q0.w;
        let chord = (dx * dx + dy * dy + dz * dz + dw * dw).sqrt();
        Ok(4.0 * (chord / 2.0).asin())
    } else {
        Ok(2.0 * cos_arc.acos())
    }
}

/// Flips signs so every quaternion has non-negative dot with its
/// predecessor. The first element keeps its sign. Inputs are assumed
/// unit-norm; sign flips cannot change that.
pub fn align_hemisphere(series: &[Quat]) -> Vec<Quat> {
    let mut out: Vec<Quat> = Vec::with_capacity(series.len());
    for q in series {
        let aligned = match out.last() {
            Some(prev) if q.dot(prev) < 0.0 => -*q,
            _ => *q,
        };
        out.push(aligned);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quat_to_matrix(q: &Quat) -> [[f64; 3]; 3] {
        let (x, y, z, w) = (q.x, q.y, q.z, q.w);
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    }

    fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (k, bk) in b.iter().enumerate() {
                    out[i][j] += a[i][k] * bk[j];
                }
            }
        }
        out
    }

    /// Independent oracle: the Z-Y-X rotation matrix built from the
    /// three single-axis matrices.
    fn euler_zyx_matrix(yaw: f64, pitch: f64, roll: f64) -> [[f64; 3]; 3] {
        let (sz, cz) = yaw.to_radians().sin_cos();
        let (sy, cy) = pitch.to_radians().sin_cos();
        let (sx, cx) = roll.to_radians().sin_cos();
        let rz = [[cz, -sz, 0.0], [sz, cz, 0.0], [0.0, 0.0, 1.0]];
        let ry = [[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]];
        let rx = [[1.0, 0.0, 0.0], [0.0, cx, -sx], [0.0, sx, cx]];
        mat_mul(&mat_mul(&rz, &ry), &rx)
    }

    fn assert_mat_close(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3], tol: f64) {
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(a[i][j], b[i][j], epsilon = tol);
            }
        }
    }

    fn random_unit_quat(rng: &mut ChaCha8Rng) -> Quat {
        loop {
            let q = Quat::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if q.norm() > 0.1 {
                return q.normalize().unwrap();
            }
        }
    }

    #[test]
    fn normalize_rescales_to_unit() {
        let q = Quat::new(0.0, 0.0, 0.0, 2.0).normalize().unwrap();
        assert_eq!(q, Quat::IDENTITY);
        let q = Quat::new(1.0, 1.0, 1.0, 1.0).normalize().unwrap();
        assert_abs_diff_eq!(q.x, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(q.w, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn normalize_rejects_degenerate() {
        let err = Quat::new(0.0, 0.0, 0.0, 0.0).normalize().unwrap_err();
        assert!(matches!(err, QuatError::Degenerate { .. }));
        let err = Quat::new(1e-13, 0.0, 0.0, 0.0).normalize().unwrap_err();
        assert!(matches!(err, QuatError::Degenerate { .. }));
    }

    #[test]
    fn renormalize_is_identity_on_unit_input() {
        let q = Quat::from_axis_angle([0.0, 0.0, 1.0], 0.7).unwrap();
        let r = q.renormalize().unwrap();
        assert_eq!(q.x.to_bits(), r.x.to_bits());
        assert_eq!(q.w.to_bits(), r.w.to_bits());
    }

    #[test]
    fn slerp_endpoints_return_inputs() {
        let q0 = Quat::from_axis_angle([0.0, 0.0, 1.0], 0.3).unwrap();
        let q1 = Quat::from_axis_angle([0.0, 1.0, 0.0], 1.1).unwrap();
        assert_eq!(slerp(&q0, &q1, 0.0).unwrap(), q0);
        assert_eq!(slerp(&q0, &q1, 1.0).unwrap(), q1);
    }

    #[test]
    fn slerp_of_identical_endpoints_is_constant() {
        let q = Quat::from_axis_angle([1.0, 2.0, -1.0], 0.9).unwrap();
        let mid = slerp(&q, &q, 0.7).unwrap();
        assert_abs_diff_eq!(mid.dot(&q), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn slerp_midpoint_matches_axis_angle_oracle() {
        // Half of a 90 degree turn about z is a 45 degree turn about z.
        let q0 = Quat::IDENTITY;
        let q1 = Quat::from_axis_angle([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2).unwrap();
        let mid = slerp(&q0, &q1, 0.5).unwrap();
        let expect = Quat::from_axis_angle([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(mid.x, expect.x, epsilon = 1e-15);
        assert_abs_diff_eq!(mid.y, expect.y, epsilon = 1e-15);
        assert_abs_diff_eq!(mid.z, expect.z, epsilon = 1e-15);
        assert_abs_diff_eq!(mid.w, expect.w, epsilon = 1e-15);
    }

    #[test]
    fn slerp_takes_shorter_arc_across_hemispheres() {
        let q0 = Quat::from_axis_angle([0.0, 0.0, 1.0], 0.2).unwrap();
        let q1 = -Quat::from_axis_angle([0.0, 0.0, 1.0], 0.4).unwrap();
        let mid = slerp(&q0, &q1, 0.5).unwrap();
        let expect = Quat::from_axis_angle([0.0, 0.0, 1.0], 0.3).unwrap();
        assert_abs_diff_eq!(mid.dot(&expect).abs(), 1.0, epsilon = 1e-12);
        // The interpolant stays on q0's hemisphere.
        assert!(mid.dot(&q0) > 0.0);
    }

    #[test]
    fn slerp_rejects_bad_inputs() {
        let q = Quat::IDENTITY;
        assert!(matches!(slerp(&q, &q, 1.5), Err(QuatError::ParamOutOfRange(_))));
        assert!(matches!(slerp(&q, &q, -0.1), Err(QuatError::ParamOutOfRange(_))));
        let bad = Quat::new(0.0, 0.0, 0.0, 1.01);
        assert!(matches!(slerp(&bad, &q, 0.5), Err(QuatError::NotUnit { .. })));
        assert!(matches!(slerp(&q, &bad, 0.5), Err(QuatError::NotUnit { .. })));
    }

    #[test]
    fn slerp_small_angle_fallback_stays_unit_and_between() {
        let q0 = Quat::from_axis_angle([0.0, 0.0, 1.0], 1e-9).unwrap();
        let q1 = Quat::from_axis_angle([0.0, 0.0, 1.0], 3e-9).unwrap();
        let mid = slerp(&q0, &q1, 0.5).unwrap();
        assert!(mid.is_unit(1e-12));
        let expect = Quat::from_axis_angle([0.0, 0.0, 1.0], 2e-9).unwrap();
        assert!(angle_between(&mid, &expect).unwrap() < 1e-12);
    }

    #[test]
    fn slerp_norm_and_proportionality_over_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let q0 = random_unit_quat(&mut rng);
            let q1 = random_unit_quat(&mut rng);
            let u: f64 = rng.gen_range(0.0..=1.0);
            let qi = slerp(&q0, &q1, u).unwrap();
            assert!(qi.is_unit(1e-12));
            let full = angle_between(&q0, &q1).unwrap();
            let part = angle_between(&q0, &qi).unwrap();
            assert_abs_diff_eq!(part, u * full, epsilon = 1e-9);
        }
    }

    #[test]
    fn to_euler_identity_is_zero() {
        let e = Quat::IDENTITY.to_euler().unwrap();
        assert_eq!((e.yaw, e.pitch, e.roll), (0.0, 0.0, 0.0));
    }

    #[test]
    fn to_euler_pure_yaw() {
        let q = Quat::from_axis_angle([0.0, 0.0, 1.0], 90.0_f64.to_radians()).unwrap();
        let e = q.to_euler().unwrap();
        assert_abs_diff_eq!(e.yaw, 90.0, epsilon = 1e-9);
        assert_abs_diff_eq!(e.pitch, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(e.roll, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn to_euler_is_sign_invariant() {
        let q = Quat::from_euler(&EulerAngles { yaw: 31.0, pitch: -12.0, roll: 77.0 });
        let a = q.to_euler().unwrap();
        let b = (-q).to_euler().unwrap();
        assert_abs_diff_eq!(a.yaw, b.yaw, epsilon = 1e-12);
        assert_abs_diff_eq!(a.pitch, b.pitch, epsilon = 1e-12);
        assert_abs_diff_eq!(a.roll, b.roll, epsilon = 1e-12);
    }

    #[test]
    fn to_euler_rejects_non_unit() {
        let err = Quat::new(0.0, 0.0, 0.0, 1.1).to_euler().unwrap_err();
        assert!(matches!(err, QuatError::NotUnit { .. }));
    }

    #[test]
    fn from_euler_matches_rotation_matrix_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let yaw = rng.gen_range(-179.0..179.0);
            let pitch = rng.gen_range(-89.0..89.0);
            let roll = rng.gen_range(-179.0..179.0);
            let q = Quat::from_euler(&EulerAngles { yaw, pitch, roll });
            assert!(q.is_unit(1e-12));
            assert_mat_close(&quat_to_matrix(&q), &euler_zyx_matrix(yaw, pitch, roll), 1e-12);
        }
    }

    #[test]
    fn euler_round_trip_away_from_gimbal_lock() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let yaw = rng.gen_range(-179.9..179.9);
            let pitch = rng.gen_range(-88.0..88.0);
            let roll = rng.gen_range(-179.9..179.9);
            let e = Quat::from_euler(&EulerAngles { yaw, pitch, roll }).to_euler().unwrap();
            assert_abs_diff_eq!(e.yaw, yaw, epsilon = 1e-6);
            assert_abs_diff_eq!(e.pitch, pitch, epsilon = 1e-6);
            assert_abs_diff_eq!(e.roll, roll, epsilon = 1e-6);
        }
    }

    #[test]
    fn gimbal_lock_pins_roll_and_reports_combined_yaw() {
        for (yaw, roll, sign) in [(40.0, 15.0, 1.0), (-75.0, 30.0, -1.0), (0.0, 0.0, 1.0)] {
            let pitch = 90.0 * sign;
            let e = Quat::from_euler(&EulerAngles { yaw, pitch, roll }).to_euler().unwrap();
            assert_eq!(e.roll, 0.0);
            assert_eq!(e.pitch, pitch);
            // With pitch +90 only yaw - roll survives; with -90, yaw + roll.
            let expect = wrap_degrees(yaw - sign * roll);
            assert_abs_diff_eq!(e.yaw, expect, epsilon = 1e-6);
            // The recovered angles rebuild the same rotation.
            let q0 = Quat::from_euler(&EulerAngles { yaw, pitch, roll });
            let q1 = Quat::from_euler(&e);
            assert!(angle_between(&q0, &q1).unwrap().to_degrees() < 1e-6);
        }
    }

    #[test]
    fn wrap_degrees_half_open_interval() {
        assert_eq!(wrap_degrees(180.0), 180.0);
        assert_eq!(wrap_degrees(-180.0), 180.0);
        assert_eq!(wrap_degrees(540.0), 180.0);
        assert_abs_diff_eq!(wrap_degrees(190.0), -170.0, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_degrees(-190.0), 170.0, epsilon = 1e-12);
        assert_eq!(wrap_degrees(0.0), 0.0);
    }

    #[test]
    fn angle_between_matches_construction() {
        let q0 = Quat::IDENTITY;
        for deg in [0.1f64, 1.0, 10.0, 90.0, 179.0] {
            let q1 = Quat::from_axis_angle([1.0, 0.0, 0.0], deg.to_radians()).unwrap();
            assert_abs_diff_eq!(angle_between(&q0, &q1).unwrap().to_degrees(), deg, epsilon = 1e-9);
        }
        let q1 = Quat::from_axis_angle([0.0, 1.0, 0.0], 0.5).unwrap();
        assert_eq!(angle_between(&q1, &{ -q1 }).unwrap(), 0.0);
    }

    #[test]
    fn align_hemisphere_flips_alternating_signs() {
        let q = Quat::from_axis_angle([0.0, 1.0, 0.0], 0.4).unwrap();
        let series = vec![q, -q, q, -q];
        let aligned = align_hemisphere(&series);
        for pair in aligned.windows(2) {
            assert!(pair[0].dot(&pair[1]) >= 0.0);
        }
        assert_eq!(aligned[0], q);
        assert_eq!(aligned[1], q);
    }

    #[test]
    fn align_hemisphere_keeps_aligned_series_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut series = Vec::new();
        let mut angle = 0.0;
        for _ in 0..50 {
            angle += rng.gen_range(0.0..0.05);
            series.push(Quat::from_axis_angle([0.0, 0.0, 1.0], angle).unwrap());
        }
        let aligned = align_hemisphere(&series);
        assert_eq!(aligned, series);
    }
}
