//! Small linear-algebra kernel: vectors, quaternions, 4×4 matrices and boxes.
//!
//! Conventions: right-handed, Z-up world; quaternions are scalar-first
//! Hamilton quaternions describing body-to-world rotations; matrices are
//! row-major and act on column vectors.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn splat(v: T) -> Self {
        Self::new(v, v, v)
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction, or `None` for a zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn distance(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn min(self, o: Self) -> Self {
        Self::new(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max(self, o: Self) -> Self {
        Self::new(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    pub fn mul_elem(self, o: Self) -> Self {
        Self::new(self.x * o.x, self.y * o.y, self.z * o.z)
    }

    pub fn lerp(self, o: Self, u: T) -> Self {
        Self::new(
            self.x + (o.x - self.x) * u,
            self.y + (o.y - self.y) * u,
            self.z + (o.z - self.z) * u,
        )
    }

    pub fn cast<U: Real>(self) -> Vec3<U> {
        Vec3::new(
            U::lit(self.x.as_f64()),
            U::lit(self.y.as_f64()),
            U::lit(self.z.as_f64()),
        )
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Quaternion stored scalar-first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quat<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Default for Quat<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Real> Quat<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Rotation of `angle` radians about `axis` (need not be normalized).
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Self {
        let a = axis.normalized().unwrap_or_else(Vec3::unit_z);
        let half = angle / T::lit(2.0);
        let s = half.sin();
        Self::new(half.cos(), a.x * s, a.y * s, a.z * s)
    }

    /// Rotation about world +Z by `yaw` radians.
    pub fn from_yaw(yaw: T) -> Self {
        Self::from_axis_angle(Vec3::unit_z(), yaw)
    }

    pub fn dot(self, o: Self) -> T {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.w * k, self.x * k, self.y * k, self.z * k)
    }

    pub fn neg(self) -> Self {
        self.scale(-T::one())
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Hamilton product `self ⊗ o`.
    pub fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }

    /// Rotates `v` by this (assumed unit) quaternion.
    pub fn rotate(self, v: Vec3<T>) -> Vec3<T> {
        let u = Vec3::new(self.x, self.y, self.z);
        let two = T::lit(2.0);
        let t = u.cross(v) * two;
        v + t * self.w + u.cross(t)
    }

    /// Rotation matrix; columns are the rotated basis vectors.
    pub fn to_mat3(self) -> [[T; 3]; 3] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        let one = T::one();
        let two = T::lit(2.0);
        [
            [one - two * (y * y + z * z), two * (x * y - w * z), two * (x * z + w * y)],
            [two * (x * y + w * z), one - two * (x * x + z * z), two * (y * z - w * x)],
            [two * (x * z - w * y), two * (y * z + w * x), one - two * (x * x + y * y)],
        ]
    }

    /// Unit quaternion for a proper rotation matrix (Shepperd's method).
    pub fn from_mat3(m: [[T; 3]; 3]) -> Self {
        let one = T::one();
        let two = T::lit(2.0);
        let quarter = T::lit(0.25);
        let trace = m[0][0] + m[1][1] + m[2][2];
        let q = if trace > T::zero() {
            let s = (trace + one).sqrt() * two;
            Self::new(
                quarter * s,
                (m[2][1] - m[1][2]) / s,
                (m[0][2] - m[2][0]) / s,
                (m[1][0] - m[0][1]) / s,
            )
        } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
            let s = (one + m[0][0] - m[1][1] - m[2][2]).sqrt() * two;
            Self::new(
                (m[2][1] - m[1][2]) / s,
                quarter * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            )
        } else if m[1][1] > m[2][2] {
            let s = (one + m[1][1] - m[0][0] - m[2][2]).sqrt() * two;
            Self::new(
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                quarter * s,
                (m[1][2] + m[2][1]) / s,
            )
        } else {
            let s = (one + m[2][2] - m[0][0] - m[1][1]).sqrt() * two;
            Self::new(
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                quarter * s,
            )
        };
        let n = q.norm();
        q.scale(one / n)
    }

    /// Heading about world +Z of the body +X axis.
    pub fn yaw(self) -> T {
        let two = T::lit(2.0);
        let siny = two * (self.w * self.z + self.x * self.y);
        let cosy = T::one() - two * (self.y * self.y + self.z * self.z);
        siny.atan2(cosy)
    }

    /// Angle of the relative rotation between two unit quaternions, in [0, π].
    pub fn angle_to(self, o: Self) -> T {
        // atan2 keeps precision near 0 where acos of the dot product does not
        let rel = self.conjugate().mul(o);
        let vnorm = (rel.x * rel.x + rel.y * rel.y + rel.z * rel.z).sqrt();
        T::lit(2.0) * vnorm.atan2(rel.w.abs())
    }

    pub fn cast<U: Real>(self) -> Quat<U> {
        Quat::new(
            U::lit(self.w.as_f64()),
            U::lit(self.x.as_f64()),
            U::lit(self.y.as_f64()),
            U::lit(self.z.as_f64()),
        )
    }
}

/// Row-major 4×4 matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<T> {
    pub m: [[T; 4]; 4],
}

impl<T: Real> Mat4<T> {
    pub fn identity() -> Self {
        let mut m = [[T::zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self { m }
    }

    pub fn from_rows(m: [[T; 4]; 4]) -> Self {
        Self { m }
    }

    /// Affine transform `translate(p) · rotate(q) · scale(s)`.
    pub fn from_trs(p: Vec3<T>, q: Quat<T>, s: Vec3<T>) -> Self {
        let r = q.to_mat3();
        let sv = s.to_array();
        let pv = p.to_array();
        let mut m = [[T::zero(); 4]; 4];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = r[i][j] * sv[j];
            }
            m[i][3] = pv[i];
        }
        m[3][3] = T::one();
        Self { m }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = [[T::zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = T::zero();
                for k in 0..4 {
                    acc += self.m[i][k] * o.m[k][j];
                }
                *cell = acc;
            }
        }
        Self { m }
    }

    pub fn mul_vec4(&self, v: [T; 4]) -> [T; 4] {
        let mut out = [T::zero(); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2] + self.m[i][3] * v[3];
        }
        out
    }

    /// Applies the affine part to a point (w = 1), ignoring projective terms.
    pub fn transform_point(&self, p: Vec3<T>) -> Vec3<T> {
        let r = self.mul_vec4([p.x, p.y, p.z, T::one()]);
        Vec3::new(r[0], r[1], r[2])
    }

    pub fn translation(&self) -> Vec3<T> {
        Vec3::new(self.m[0][3], self.m[1][3], self.m[2][3])
    }

    pub fn linear(&self) -> [[T; 3]; 3] {
        let mut r = [[T::zero(); 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            row.copy_from_slice(&self.m[i][..3]);
        }
        r
    }

    /// Splits an affine `T·R·S` matrix back into position, rotation and scale.
    ///
    /// Returns `None` when the linear part has a non-positive determinant.
    pub fn decompose_trs(&self) -> Option<(Vec3<T>, Quat<T>, Vec3<T>)> {
        let l = self.linear();
        if det3(&l) <= T::zero() {
            return None;
        }
        let col = |j: usize| Vec3::new(l[0][j], l[1][j], l[2][j]);
        let s = Vec3::new(col(0).norm(), col(1).norm(), col(2).norm());
        let sv = s.to_array();
        let mut r = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = l[i][j] / sv[j];
            }
        }
        Some((self.translation(), Quat::from_mat3(r), s))
    }
}

pub fn det3<T: Real>(m: &[[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Axis-aligned bounding box; zero-extent boxes are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb<T> {
    pub min: Vec3<T>,
    pub max: Vec3<T>,
}

impl<T: Real> Aabb<T> {
    pub fn from_point(p: Vec3<T>) -> Self {
        Self { min: p, max: p }
    }

    pub fn grow(&mut self, p: Vec3<T>) {
        self.min = self.min.min(p);
        self.max = self.max.max(p);
    }

    pub fn union(self, o: Self) -> Self {
        Self { min: self.min.min(o.min), max: self.max.max(o.max) }
    }

    pub fn contains(&self, p: Vec3<T>) -> bool {
        p.x >= self.min.x
            && p.y >= self.min.y
            && p.z >= self.min.z
            && p.x <= self.max.x
            && p.y <= self.max.y
            && p.z <= self.max.z
    }

    pub fn center(&self) -> Vec3<T> {
        (self.min + self.max) * T::lit(0.5)
    }

    pub fn half_diagonal(&self) -> T {
        (self.max - self.min).norm() * T::lit(0.5)
    }
}
