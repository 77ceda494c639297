//! Split-complex (double) numbers and linear algebra of the neutral 4-space.
//!
//! The ambient metric has signature `(-, +, -, +)`. Double numbers `a + j b`
//! with `j^2 = 1` carry the isotropic structure of Lorentz surfaces; the null
//! basis `q = (1 - j)/2`, `q̄ = (1 + j)/2` diagonalises their multiplication.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Split-complex number `re + j·im` with `j² = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Double {
    pub re: f64,
    pub im: f64,
}

impl Double {
    pub const ZERO: Double = Double { re: 0.0, im: 0.0 };
    pub const ONE: Double = Double { re: 1.0, im: 0.0 };
    pub const J: Double = Double { re: 0.0, im: 1.0 };
    /// `q = (1 - j)/2`.
    pub const Q: Double = Double { re: 0.5, im: -0.5 };
    /// `q̄ = (1 + j)/2`.
    pub const Q_BAR: Double = Double { re: 0.5, im: 0.5 };

    pub const fn new(re: f64, im: f64) -> Self {
        Double { re, im }
    }

    pub fn conj(self) -> Self {
        Double::new(self.re, -self.im)
    }

    /// `t t̄ = re² − im²`; negative or zero values are legal.
    pub fn modulus_sq(self) -> f64 {
        self.re * self.re - self.im * self.im
    }

    pub fn is_zero_divisor(self) -> bool {
        self.modulus_sq() == 0.0
    }

    /// Coordinates `(t1, t2)` in the null basis: `t = t1·q̄ + t2·q`.
    pub fn null_decompose(self) -> (f64, f64) {
        (self.re + self.im, self.re - self.im)
    }

    pub fn from_null(t1: f64, t2: f64) -> Self {
        Double::new(0.5 * (t1 + t2), 0.5 * (t1 - t2))
    }

    /// Multiplicative inverse; zero divisors are reported, not divided by.
    pub fn inv(self) -> Result<Self> {
        let m = self.modulus_sq();
        if m == 0.0 {
            return Err(Error::ZeroDivisor { re: self.re, im: self.im });
        }
        Ok(Double::new(self.re / m, -self.im / m))
    }

    pub fn scale(self, k: f64) -> Self {
        Double::new(self.re * k, self.im * k)
    }
}

impl Add for Double {
    type Output = Double;
    fn add(self, o: Double) -> Double {
        Double::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Double {
    type Output = Double;
    fn sub(self, o: Double) -> Double {
        Double::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for Double {
    type Output = Double;
    fn neg(self) -> Double {
        Double::new(-self.re, -self.im)
    }
}

impl Mul for Double {
    type Output = Double;
    fn mul(self, o: Double) -> Double {
        d_mul(self, o)
    }
}

impl fmt::Display for Double {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{} - {}j", self.re, -self.im)
        } else {
            write!(f, "{} + {}j", self.re, self.im)
        }
    }
}

pub fn d_mul(a: Double, b: Double) -> Double {
    Double::new(a.re * b.re + a.im * b.im, a.re * b.im + a.im * b.re)
}

/// Real 4-vector in the neutral space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4([x1, x2, x3, x4])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Vec4(v)
    }

    pub fn scale(self, k: f64) -> Self {
        Vec4(self.0.map(|x| x * k))
    }

    /// `inner(self, self)`.
    pub fn sq(self) -> f64 {
        inner(self, self)
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4([
            self.0[0] - o.0[0],
            self.0[1] - o.0[1],
            self.0[2] - o.0[2],
            self.0[3] - o.0[3],
        ])
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        self.scale(-1.0)
    }
}

/// Metric signs of the neutral form.
pub const METRIC: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

pub fn inner(a: Vec4, b: Vec4) -> f64 {
    -a.0[0] * b.0[0] + a.0[1] * b.0[1] - a.0[2] * b.0[2] + a.0[3] * b.0[3]
}

/// `⟨a∧b, c∧d⟩` by the Lagrange identity.
pub fn wedge_inner(a: Vec4, b: Vec4, c: Vec4, d: Vec4) -> f64 {
    inner(a, c) * inner(b, d) - inner(a, d) * inner(b, c)
}

/// Determinant of the 4×4 matrix whose columns are `a, b, c, d`.
pub fn det4(a: Vec4, b: Vec4, c: Vec4, d: Vec4) -> f64 {
    let m = [a.0, b.0, c.0, d.0]; // m[col][row]
    // Laplace expansion along the 2×2 minors of the first two columns.
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[c0][r0] * m[c1][r1] - m[c0][r1] * m[c1][r0]
    };
    let s01 = minor(0, 1, 0, 1);
    let s02 = minor(0, 2, 0, 1);
    let s03 = minor(0, 3, 0, 1);
    let s12 = minor(1, 2, 0, 1);
    let s13 = minor(1, 3, 0, 1);
    let s23 = minor(2, 3, 0, 1);
    let c23 = minor(2, 3, 2, 3);
    let c13 = minor(1, 3, 2, 3);
    let c12 = minor(1, 2, 2, 3);
    let c03 = minor(0, 3, 2, 3);
    let c02 = minor(0, 2, 2, 3);
    let c01 = minor(0, 1, 2, 3);
    s01 * c23 - s02 * c13 + s03 * c12 + s12 * c03 - s13 * c02 + s23 * c01
}

/// Double-valued 4-vector `v = v1·q̄ + v2·q` with real parts `v1, v2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DVec4(pub [Double; 4]);

impl DVec4 {
    pub fn from_null(v1: Vec4, v2: Vec4) -> Self {
        DVec4(std::array::from_fn(|i| Double::from_null(v1.0[i], v2.0[i])))
    }

    /// Null-basis components `(v1, v2)`.
    pub fn null_decompose(&self) -> (Vec4, Vec4) {
        let mut v1 = [0.0; 4];
        let mut v2 = [0.0; 4];
        for (i, d) in self.0.iter().enumerate() {
            let (a, b) = d.null_decompose();
            v1[i] = a;
            v2[i] = b;
        }
        (Vec4(v1), Vec4(v2))
    }

    pub fn conj(&self) -> Self {
        DVec4(self.0.map(Double::conj))
    }

    /// Double-valued bilinear form `Σ ε_i a_i b_i`.
    pub fn dot(&self, other: &DVec4) -> Double {
        self.0
            .iter()
            .zip(other.0.iter())
            .zip(METRIC)
            .fold(Double::ZERO, |acc, ((a, b), s)| acc + (*a * *b).scale(s))
    }

    /// `Φ²`.
    pub fn sq(&self) -> Double {
        self.dot(self)
    }

    /// `‖Φ‖² = Φ·Φ̄`.
    pub fn norm_sq(&self) -> Double {
        self.dot(&self.conj())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn j_squares_to_one() {
        assert_eq!(Double::J * Double::J, Double::ONE);
        let x = Double::new(3.5, -2.0);
        assert_eq!(Double::ONE * x, x);
    }

    #[test]
    fn null_basis_annihilates() {
        assert_eq!(Double::Q * Double::Q_BAR, Double::ZERO);
        assert!(Double::Q.is_zero_divisor());
        assert!(Double::Q.inv().is_err());
    }

    #[test]
    fn null_decompose_examples() {
        assert_eq!(Double::new(1.0, 1.0).null_decompose(), (2.0, 0.0));
        let t = Double::new(3.0, 1.0);
        let (t1, t2) = t.null_decompose();
        assert_eq!((t1, t2), (4.0, 2.0));
        assert_eq!(t.modulus_sq(), 8.0);
        assert_eq!(t1 * t2, 8.0);
        assert_eq!(Double::Q_BAR.scale(t1) + Double::Q.scale(t2), t);
    }

    #[test]
    fn inner_signature() {
        assert_eq!(inner(Vec4::basis(0), Vec4::basis(0)), -1.0);
        assert_eq!(inner(Vec4::basis(1), Vec4::basis(1)), 1.0);
        let n = Vec4::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(inner(n, n), 0.0);
    }

    #[test]
    fn wedge_examples() {
        let a = Vec4::new(0.3, -1.0, 2.0, 0.5);
        let c = Vec4::new(1.0, 2.0, 3.0, 4.0);
        let d = Vec4::new(-1.0, 0.0, 1.0, 2.0);
        assert_eq!(wedge_inner(a, a, c, d), 0.0);
        let (e1, e2) = (Vec4::basis(0), Vec4::basis(1));
        assert_eq!(wedge_inner(e1, e2, e1, e2), -1.0);
    }

    #[test]
    fn det_examples() {
        let e = |i| Vec4::basis(i);
        assert_eq!(det4(e(0), e(1), e(2), e(3)), 1.0);
        assert_eq!(det4(e(1), e(0), e(2), e(3)), -1.0);
        let a = Vec4::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(det4(a, e(1), a, e(3)), 0.0);
    }

    fn cofactor_det(cols: [[f64; 4]; 4]) -> f64 {
        // independent oracle: permutation expansion
        let mut total = 0.0;
        let perms = permutations4();
        for (p, sign) in perms {
            let mut prod = sign;
            for (c, &r) in p.iter().enumerate() {
                prod *= cols[c][r];
            }
            total += prod;
        }
        total
    }

    fn permutations4() -> Vec<([usize; 4], f64)> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let mut seen = [false; 4];
                        if p.iter().any(|&i| std::mem::replace(&mut seen[i], true)) {
                            continue;
                        }
                        let mut inv = 0;
                        for i in 0..4 {
                            for j in i + 1..4 {
                                if p[i] > p[j] {
                                    inv += 1;
                                }
                            }
                        }
                        out.push((p, if inv % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
        out
    }

    fn vec4() -> impl Strategy<Value = Vec4> {
        prop::array::uniform4(-10.0..10.0f64).prop_map(Vec4)
    }

    fn double() -> impl Strategy<Value = Double> {
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| Double::new(a, b))
    }

    proptest! {
        #[test]
        fn modulus_is_null_product(t in double()) {
            let (t1, t2) = t.null_decompose();
            let scale = t.re * t.re + t.im * t.im;
            prop_assert!((t.modulus_sq() - t1 * t2).abs() <= 4.0 * f64::EPSILON * (1.0 + scale));
        }

        #[test]
        fn null_basis_multiplication_is_componentwise(s in double(), t in double()) {
            let (s1, s2) = s.null_decompose();
            let (t1, t2) = t.null_decompose();
            let (p1, p2) = (s * t).null_decompose();
            prop_assert!((p1 - s1 * t1).abs() <= 1e-12 * (1.0 + (s1 * t1).abs()));
            prop_assert!((p2 - s2 * t2).abs() <= 1e-12 * (1.0 + (s2 * t2).abs()));
        }

        #[test]
        fn wedge_symmetries(a in vec4(), b in vec4(), c in vec4(), d in vec4()) {
            let w = wedge_inner(a, b, c, d);
            let tol = 1e-9 * (1.0 + w.abs());
            prop_assert!((w + wedge_inner(b, a, c, d)).abs() <= tol);
            prop_assert!((w - wedge_inner(c, d, a, b)).abs() <= tol);
        }

        #[test]
        fn det_matches_permutation_expansion(a in vec4(), b in vec4(), c in vec4(), d in vec4()) {
            let x = det4(a, b, c, d);
            let y = cofactor_det([a.0, b.0, c.0, d.0]);
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
            prop_assert!((x + det4(a, c, b, d)).abs() <= 1e-9 * (1.0 + y.abs()));
        }

        #[test]
        fn det_is_linear_in_first_column(a in vec4(), a2 in vec4(), b in vec4(), c in vec4(), d in vec4(), k in -3.0..3.0f64) {
            let lhs = det4(a + a2.scale(k), b, c, d);
            let rhs = det4(a, b, c, d) + k * det4(a2, b, c, d);
            prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()));
        }
    }
}
