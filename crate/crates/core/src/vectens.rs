//! Complex 3-vectors and the irreducible tensors built from a vector pair.
//!
//! Spherical components follow the convention
//!
//! ```text
//! A_{-1} = (A_x - i A_y)/√2,   A_0 = A_z,   A_{+1} = -(A_x + i A_y)/√2
//! ```
//!
//! and the compound tensors `{A*⊗A}_K` (K = 0, 1, 2) are formed from the
//! spherical components of `A*` and `A`. For any pair of complex vectors the
//! coupling strength splits into scalar, vector and tensor parts:
//!
//! ```text
//! |A·B|² = |A|²|B|²/3 + [A*×A]·[B*×B]/2 + {A*⊗A}_2·{B*⊗B}_2
//! ```
//!
//! where the rank-2 contraction is `Σ_q (-1)^q T_q S_{-q}`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A vector with complex Cartesian components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexVector3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl ComplexVector3 {
    pub const fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self { x, y, z }
    }

    pub fn from_real(v: [f64; 3]) -> Self {
        Self::new(v[0].into(), v[1].into(), v[2].into())
    }

    /// Builds a vector from `[re_x, im_x, re_y, im_y, re_z, im_z]`.
    pub fn from_parts(p: [f64; 6]) -> Self {
        Self::new(
            Complex64::new(p[0], p[1]),
            Complex64::new(p[2], p[3]),
            Complex64::new(p[4], p[5]),
        )
    }

    pub fn to_parts(&self) -> [f64; 6] {
        [
            self.x.re, self.x.im, self.y.re, self.y.im, self.z.re, self.z.im,
        ]
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.x.conj(), self.y.conj(), self.z.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    /// `|A_x|² + |A_y|² + |A_z|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    /// Absolute length of the vector.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Bilinear scalar product `A·B = A_x B_x + A_y B_y + A_z B_z` (no conjugation).
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Bilinear scalar product evaluated through spherical components,
    /// `Σ_q (-1)^q A_q B_{-q}`.
    pub fn dot_spherical(&self, other: &Self) -> Complex64 {
        let a = self.spherical();
        let b = other.spherical();
        -a.minus * b.plus + a.zero * b.zero - a.plus * b.minus
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// Ellipticity vector `i[A*×A]`, which is real for every `A`.
    pub fn ellipticity(&self) -> [f64; 3] {
        let c = self.conj().cross(self).scale(I);
        [c.x.re, c.y.re, c.z.re]
    }

    /// `Im[A*×A]`, the ellipticity convention used for field polarizations.
    /// Equal to minus [`ellipticity`](Self::ellipticity).
    pub fn field_ellipticity(&self) -> [f64; 3] {
        let c = self.conj().cross(self);
        [c.x.im, c.y.im, c.z.im]
    }

    pub fn spherical(&self) -> SphericalComponents {
        spherical_components(self)
    }

    pub fn is_finite(&self) -> bool {
        self.components()
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for ComplexVector3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for ComplexVector3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for ComplexVector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for ComplexVector3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Complex64> for ComplexVector3 {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scale(s)
    }
}

/// Spherical components `(A_{-1}, A_0, A_{+1})` of a complex vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalComponents {
    pub minus: Complex64,
    pub zero: Complex64,
    pub plus: Complex64,
}

impl SphericalComponents {
    /// Component with index `q ∈ {-1, 0, 1}`.
    pub fn get(&self, q: i8) -> Complex64 {
        match q {
            -1 => self.minus,
            0 => self.zero,
            1 => self.plus,
            _ => panic!("spherical vector index {q} out of range"),
        }
    }

    /// Inverse of [`spherical_components`].
    pub fn to_cartesian(&self) -> ComplexVector3 {
        let x = (self.minus - self.plus) * FRAC_1_SQRT_2;
        let y = (self.minus + self.plus) * I * FRAC_1_SQRT_2;
        ComplexVector3::new(x, y, self.zero)
    }
}

pub fn spherical_components(a: &ComplexVector3) -> SphericalComponents {
    SphericalComponents {
        minus: (a.x - I * a.y) / SQRT_2,
        zero: a.z,
        plus: -(a.x + I * a.y) / SQRT_2,
    }
}

pub fn scalar_product(a: &ComplexVector3, b: &ComplexVector3) -> Complex64 {
    a.dot(b)
}

pub fn vector_product(a: &ComplexVector3, b: &ComplexVector3) -> ComplexVector3 {
    a.cross(b)
}

/// Rank-2 irreducible tensor with components `q = -2..=2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTwoTensor {
    components: [Complex64; 5],
}

impl RankTwoTensor {
    pub fn from_components(components: [Complex64; 5]) -> Self {
        Self { components }
    }

    /// `{A*⊗A}_2` for a complex vector `A`.
    pub fn compound(a: &ComplexVector3) -> Self {
        let s = a.spherical();
        let (am, a0, ap) = (s.minus, s.zero, s.plus);
        let q0 = (2.0 * a0.norm_sqr() - ap.norm_sqr() - am.norm_sqr()) / 6f64.sqrt();
        let qp1 = -(a0 * am.conj() - a0.conj() * ap) / SQRT_2;
        let qm1 = -(a0 * ap.conj() - a0.conj() * am) / SQRT_2;
        let qp2 = -ap * am.conj();
        let qm2 = -am * ap.conj();
        Self {
            components: [qm2, qm1, q0.into(), qp1, qp2],
        }
    }

    pub fn get(&self, q: i8) -> Complex64 {
        assert!((-2..=2).contains(&q), "rank-2 index {q} out of range");
        self.components[(q + 2) as usize]
    }

    pub fn components(&self) -> &[Complex64; 5] {
        &self.components
    }

    /// Scalar product `Σ_q (-1)^q T_q S_{-q}`.
    pub fn contract(&self, other: &Self) -> Complex64 {
        (-2i8..=2)
            .map(|q| {
                let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                self.get(q) * other.get(-q) * sign
            })
            .sum()
    }
}

/// Components `{A*⊗A}_{K,q}` for `q = -K..=K`, in increasing `q`.
pub fn compound_tensor(a: &ComplexVector3, rank: u8) -> Result<Vec<Complex64>> {
    let s = a.spherical();
    let (am, a0, ap) = (s.minus, s.zero, s.plus);
    match rank {
        0 => Ok(vec![Complex64::from(
            -(a0.norm_sqr() + ap.norm_sqr() + am.norm_sqr()) / 3f64.sqrt(),
        )]),
        1 => {
            let q0 = (ap.norm_sqr() - am.norm_sqr()) / SQRT_2;
            let qp1 = -(a0 * am.conj() + a0.conj() * ap) / SQRT_2;
            let qm1 = (a0 * ap.conj() + a0.conj() * am) / SQRT_2;
            Ok(vec![qm1, q0.into(), qp1])
        }
        2 => Ok(RankTwoTensor::compound(a).components.to_vec()),
        k => Err(Error::UnsupportedRank(k)),
    }
}

/// Scalar, vector and tensor parts of a rate `N |d·e|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateDecomposition {
    pub scalar_part: f64,
    pub vector_part: f64,
    pub tensor_part: f64,
}

impl RateDecomposition {
    pub fn total(&self) -> f64 {
        self.scalar_part + self.vector_part + self.tensor_part
    }
}

/// Splits `N |d·e|²` into its irreducible parts.
pub fn decompose_coupling(d: &ComplexVector3, e: &ComplexVector3, n: f64) -> RateDecomposition {
    let scalar_part = n / 3.0 * d.norm_sqr() * e.norm_sqr();
    // Both cross products are purely imaginary, so their dot product is real.
    let vector_part = n / 2.0 * d.conj().cross(d).dot(&e.conj().cross(e)).re;
    let tensor_part = n * RankTwoTensor::compound(d)
        .contract(&RankTwoTensor::compound(e))
        .re;
    RateDecomposition {
        scalar_part,
        vector_part,
        tensor_part,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn spherical_basis_vectors() {
        let s = ComplexVector3::from_real([1.0, 0.0, 0.0]).spherical();
        assert!(close(s.minus, c(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(s.zero, c(0.0, 0.0), 0.0));
        assert!(close(s.plus, c(-FRAC_1_SQRT_2, 0.0), 1e-15));

        let s = ComplexVector3::from_real([0.0, 0.0, 1.0]).spherical();
        assert_eq!((s.minus, s.zero, s.plus), (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn spherical_of_circular_vector() {
        let a = ComplexVector3::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2), c(0.0, 0.0));
        let s = a.spherical();
        assert!(close(s.minus, c(1.0, 0.0), 1e-15));
        assert!(close(s.zero, c(0.0, 0.0), 1e-15));
        assert!(close(s.plus, c(0.0, 0.0), 1e-15));
    }

    #[test]
    fn compound_tensor_of_z() {
        let z = ComplexVector3::from_real([0.0, 0.0, 1.0]);
        let t0 = compound_tensor(&z, 0).unwrap();
        assert!(close(t0[0], c(-1.0 / 3f64.sqrt(), 0.0), 1e-15));
        assert!(compound_tensor(&z, 1).unwrap().iter().all(|v| v.norm() == 0.0));
        let t2 = compound_tensor(&z, 2).unwrap();
        for (i, v) in t2.iter().enumerate() {
            let expect = if i == 2 { 2.0 / 6f64.sqrt() } else { 0.0 };
            assert!(close(*v, c(expect, 0.0), 1e-15), "q = {}", i as i32 - 2);
        }
    }

    #[test]
    fn compound_tensor_rejects_rank_three() {
        let z = ComplexVector3::from_real([0.0, 0.0, 1.0]);
        assert_eq!(compound_tensor(&z, 3), Err(Error::UnsupportedRank(3)));
    }

    #[test]
    fn rank_two_conjugation_symmetry() {
        let a = ComplexVector3::new(c(0.3, -1.2), c(0.7, 0.4), c(-0.5, 0.9));
        let t = RankTwoTensor::compound(&a);
        for q in -2i8..=2 {
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            assert!(close(t.get(-q), t.get(q).conj() * sign, 1e-15));
        }
    }

    #[test]
    fn scalar_products() {
        let x = ComplexVector3::from_real([1.0, 0.0, 0.0]);
        assert_eq!(x.dot(&x), c(1.0, 0.0));
        let h = FRAC_1_SQRT_2;
        let a = ComplexVector3::new(c(h, 0.0), c(0.0, h), c(0.0, 0.0));
        assert!(close(a.dot(&a.conj()), c(1.0, 0.0), 1e-15));
        assert!(close(a.dot_spherical(&a.conj()), c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn cross_products() {
        let x = ComplexVector3::from_real([1.0, 0.0, 0.0]);
        let y = ComplexVector3::from_real([0.0, 1.0, 0.0]);
        assert_eq!(x.cross(&y), ComplexVector3::from_real([0.0, 0.0, 1.0]));
        let a = ComplexVector3::new(c(0.3, -1.2), c(0.7, 0.4), c(-0.5, 0.9));
        assert_eq!(a.cross(&a).norm(), 0.0);

        let h = FRAC_1_SQRT_2;
        let u = ComplexVector3::new(c(h, 0.0), c(0.0, 0.0), c(0.0, h));
        let e = u.ellipticity();
        assert!(e[0].abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15 && e[2].abs() < 1e-15);
    }

    #[test]
    fn decomposition_of_parallel_z() {
        let z = ComplexVector3::from_real([0.0, 0.0, 1.0]);
        let d = decompose_coupling(&z, &z, 1.0);
        assert!((d.total() - 1.0).abs() < 1e-15);
        assert!((d.scalar_part - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.vector_part, 0.0);
        assert!((d.tensor_part - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn real_pairs_have_no_vector_part() {
        let d = ComplexVector3::from_real([0.2, -0.4, 0.9]);
        let e = ComplexVector3::from_real([1.5, 0.1, -0.3]);
        assert_eq!(decompose_coupling(&d, &e, 2.0).vector_part, 0.0);
    }
}
