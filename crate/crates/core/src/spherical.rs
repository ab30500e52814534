//! Vector spherical functions on S², the angular operators and the
//! catalogue of symmetry-generated mode solutions.
//!
//! Functions are stored as homogeneous polynomials in `y1, y2, y3`: a basis
//! element `Z` with angular index `l` is kept as `r^l Z`, which is
//! polynomial for every catalogued case. On the unit sphere the two agree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{expr, int, linalg, poly, MultiPoly, RationalExpr, Var};

pub const Y: [Var; 3] = [Var::Y1, Var::Y2, Var::Y3];

pub type VecPoly = [MultiPoly; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphericalError {
    #[error("no Clebsch-Gordan data for (l, m) = ({0}, {1})")]
    UnsupportedCase(u32, u32),
    #[error("eigenvalue mismatch for {label}: residual {residual}")]
    EigenvalueMismatch { label: String, residual: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorSphericalFunction {
    pub components: VecPoly,
    pub homogeneity_degree: u32,
    pub l: u32,
    pub m: u32,
    pub k: u32,
}

impl VectorSphericalFunction {
    pub fn label(&self) -> String {
        format!("Z^{}_({},{})", self.k, self.l, self.m)
    }
}

/// |y|^2
pub fn r_squared() -> MultiPoly {
    poly("y1^2 + y2^2 + y3^2")
}

fn vec3(a: &str, b: &str, c: &str) -> VecPoly {
    [poly(a), poly(b), poly(c)]
}

/// The published basis rows verbatim (times r^l), in increasing k.
pub fn clebsch_gordan_basis(l: u32, m: u32) -> Result<Vec<VectorSphericalFunction>, SphericalError> {
    let rows: Vec<VecPoly> = match (l, m) {
        (0, 1) => vec![vec3("1", "0", "0"), vec3("0", "1", "0"), vec3("0", "0", "1")],
        (1, 0) => vec![vec3("y1", "y2", "y3")],
        (1, 1) => vec![
            vec3("0", "-y3", "y2"),
            vec3("y3", "0", "-y1"),
            vec3("-y2", "y1", "0"),
        ],
        (1, 2) => vec![
            vec3("0", "y2", "-y3"),
            vec3("0", "y3", "y2"),
            vec3("y3", "0", "y1"),
            vec3("y1", "-y2", "0"),
            vec3("y2", "y1", "0"),
        ],
        (2, 1) => vec![
            vec3("-2*y1^2 + y2^2 + y3^2", "-3*y1*y2", "-3*y1*y3"),
            vec3("-3*y1*y2", "y1^2 - 2*y2^2 + y3^2", "-3*y2*y3"),
            vec3("-3*y1*y3", "-3*y2*y3", "y1^2 + y2^2 - 2*y3^2"),
        ],
        _ => return Err(SphericalError::UnsupportedCase(l, m)),
    };
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, components)| VectorSphericalFunction {
            components,
            homogeneity_degree: l,
            l,
            m,
            k: i as u32 + 1,
        })
        .collect())
}

/// Euler operator `E = sum_i y_i d/dy_i` (equal to r d/dr).
pub fn euler(p: &MultiPoly) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for v in Y {
        acc += &(&MultiPoly::var(v) * &p.derivative(v));
    }
    acc
}

pub fn cartesian_laplacian(p: &MultiPoly) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for v in Y {
        acc += &p.derivative(v).derivative(v);
    }
    acc
}

/// Laplace-Beltrami operator through `r^2 Δ - E^2 - E`; valid for any
/// polynomial, acting on its angular dependence.
pub fn laplace_s2(p: &MultiPoly) -> MultiPoly {
    let e = euler(p);
    let ee = euler(&e);
    &(&(&r_squared() * &cartesian_laplacian(p)) - &ee) - &e
}

pub fn laplace_s2_vec(z: &VecPoly) -> VecPoly {
    [laplace_s2(&z[0]), laplace_s2(&z[1]), laplace_s2(&z[2])]
}

/// `(M Ψ)_c = sum_b y_b ∂_c Ψ_b - y_c div Ψ`.
///
/// Expanding the double Levi-Civita sum as written produces the opposite
/// overall sign; with that sign the Casimir of the linear field y would be 8
/// rather than 0 = m(m+1), so the sign is fixed by the eigenvalue relation.
pub fn momentum_coupling(z: &VecPoly) -> VecPoly {
    let div = &(&z[0].derivative(Var::Y1) + &z[1].derivative(Var::Y2)) + &z[2].derivative(Var::Y3);
    std::array::from_fn(|c| {
        let mut acc = MultiPoly::zero();
        for b in 0..3 {
            acc += &(&MultiPoly::var(Y[b]) * &z[b].derivative(Y[c]));
        }
        &acc - &(&MultiPoly::var(Y[c]) * &div)
    })
}

pub fn momentum_coupling_apply(z: &VectorSphericalFunction) -> VectorSphericalFunction {
    VectorSphericalFunction {
        components: momentum_coupling(&z.components),
        ..z.clone()
    }
}

/// `𝔠 = -Δ_{S²} + 2 + 2𝔐`
pub fn casimir(z: &VecPoly) -> VecPoly {
    let lap = laplace_s2_vec(z);
    let m = momentum_coupling(z);
    std::array::from_fn(|c| {
        let two = int(2);
        &(&(-&lap[c]) + &z[c].scale(&two)) + &m[c].scale(&two)
    })
}

fn vec_is_zero(z: &VecPoly) -> bool {
    z.iter().all(|p| p.is_zero())
}

fn vec_to_string(z: &VecPoly) -> String {
    format!("({}, {}, {})", z[0], z[1], z[2])
}

/// Returns m(m+1) once `𝔠Z - m(m+1)Z` vanishes identically.
pub fn casimir_apply(z: &VectorSphericalFunction) -> Result<BigRational, SphericalError> {
    let ev = int(i64::from(z.m * (z.m + 1)));
    let cz = casimir(&z.components);
    let residual: VecPoly = std::array::from_fn(|c| &cz[c] - &z.components[c].scale(&ev));
    if vec_is_zero(&residual) {
        Ok(ev)
    } else {
        Err(SphericalError::EigenvalueMismatch {
            label: z.label(),
            residual: vec_to_string(&residual),
        })
    }
}

/// Returns -l(l+1) once `Δ_{S²}Z + l(l+1)Z` vanishes identically.
pub fn laplace_apply(z: &VectorSphericalFunction) -> Result<BigRational, SphericalError> {
    let ev = int(-i64::from(z.l * (z.l + 1)));
    let lz = laplace_s2_vec(&z.components);
    let residual: VecPoly = std::array::from_fn(|c| &lz[c] - &z.components[c].scale(&ev));
    if vec_is_zero(&residual) {
        Ok(ev)
    } else {
        Err(SphericalError::EigenvalueMismatch {
            label: z.label(),
            residual: vec_to_string(&residual),
        })
    }
}

fn double_factorial_odd(k: i64) -> BigInt {
    // (2j-1)!! with (-1)!! = 1
    let mut acc = BigInt::one();
    let mut i = k;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

/// `(1/4π) ∫_{S²} y^α dσ`
pub fn sphere_moment(alpha: [u32; 3]) -> BigRational {
    if alpha.iter().any(|a| a % 2 == 1) {
        return BigRational::zero();
    }
    let num: BigInt = alpha.iter().map(|&a| double_factorial_odd(i64::from(a) - 1)).product();
    let total: u32 = alpha.iter().sum();
    BigRational::new(num, double_factorial_odd(i64::from(total) + 1))
}

pub fn sphere_integral(p: &MultiPoly) -> BigRational {
    let mut acc = BigRational::zero();
    for (e, c) in p.terms() {
        acc += c * sphere_moment([e[Var::Y1.index()], e[Var::Y2.index()], e[Var::Y3.index()]]);
    }
    acc
}

/// Normalized L²(S²) inner product of two vector fields.
pub fn sphere_inner(a: &VecPoly, b: &VecPoly) -> BigRational {
    let mut dot = MultiPoly::zero();
    for c in 0..3 {
        dot += &(&a[c] * &b[c]);
    }
    sphere_integral(&dot)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeSolution {
    pub name: String,
    pub growth_rate: u32,
    pub profile: VecPoly,
    /// f_{l,m}(r)
    pub radial_factor: RationalExpr,
    pub angular_part: VectorSphericalFunction,
}

impl ModeSolution {
    /// φ = f/(1+r²), the solution of the radial mode equation.
    pub fn phi(&self) -> RationalExpr {
        &self.radial_factor / &expr("1 + r^2")
    }

    /// `profile == (f(r)/r^l) · (r^l Z)` with r² = |y|².
    pub fn factorizes(&self) -> bool {
        let l = self.angular_part.l as i32;
        let ratio = &self.radial_factor * &RationalExpr::var(Var::R).pow(-l);
        let Some(p) = ratio.to_poly() else { return false };
        // only even powers of r may remain
        if p.terms().any(|(e, _)| e[Var::R.index()] % 2 == 1) {
            return false;
        }
        let mut in_y = MultiPoly::zero();
        for (k, c) in p.coeffs_in(Var::R).iter().enumerate() {
            if k % 2 == 0 && !c.is_zero() {
                in_y += &(c * &r_squared().pow(k as u32 / 2));
            }
        }
        (0..3).all(|c| &in_y * &self.angular_part.components[c] == self.profile[c])
    }
}

/// The 13 symmetry modes: 4 with λ = 1 and 9 with λ = 0.
pub fn mode_catalogue() -> Vec<ModeSolution> {
    let mut out = Vec::new();
    let z01 = clebsch_gordan_basis(0, 1).expect("catalogued");
    let z10 = clebsch_gordan_basis(1, 0).expect("catalogued");
    let z11 = clebsch_gordan_basis(1, 1).expect("catalogued");
    let z21 = clebsch_gordan_basis(2, 1).expect("catalogued");

    out.push(ModeSolution {
        name: "Psi_{1,0}".into(),
        growth_rate: 1,
        profile: vec3("y1", "y2", "y3"),
        radial_factor: expr("r"),
        angular_part: z10[0].clone(),
    });
    for (i, z) in z01.iter().enumerate() {
        out.push(ModeSolution {
            name: format!("Psi^{}_{{0,1}}", i + 1),
            growth_rate: 1,
            profile: z.components.clone(),
            radial_factor: expr("1"),
            angular_part: z.clone(),
        });
    }
    for (i, z) in z01.iter().enumerate() {
        let f = &r_squared() - &MultiPoly::int(3);
        out.push(ModeSolution {
            name: format!("Phi^{}_{{0,1}}", i + 1),
            growth_rate: 0,
            profile: std::array::from_fn(|c| &f * &z.components[c]),
            radial_factor: expr("r^2 - 3"),
            angular_part: z.clone(),
        });
    }
    let psi11 = [
        vec3("0", "-y3", "y2"),
        vec3("y3", "0", "-y1"),
        vec3("-y2", "y1", "0"),
    ];
    for (i, (z, p)) in z11.iter().zip(psi11).enumerate() {
        out.push(ModeSolution {
            name: format!("Psi^{}_{{1,1}}", i + 1),
            growth_rate: 0,
            profile: p,
            radial_factor: expr("r"),
            angular_part: z.clone(),
        });
    }
    let psi21 = [
        vec3("-2*y1^2 + y2^2 + y3^2", "-3*y1*y2", "-3*y1*y3"),
        vec3("-3*y1*y2", "y1^2 - 2*y2^2 + y3^2", "-3*y2*y3"),
        vec3("-3*y1*y3", "-3*y2*y3", "y1^2 + y2^2 - 2*y3^2"),
    ];
    for (i, (z, p)) in z21.iter().zip(psi21).enumerate() {
        out.push(ModeSolution {
            name: format!("Psi^{}_{{2,1}}", i + 1),
            growth_rate: 0,
            profile: p,
            radial_factor: expr("r^2"),
            angular_part: z.clone(),
        });
    }
    out
}

/// Rank of the profiles' coefficient vectors.
pub fn catalogue_rank(modes: &[ModeSolution]) -> usize {
    let mut keys = std::collections::BTreeSet::new();
    for m in modes {
        for (c, p) in m.profile.iter().enumerate() {
            for (e, _) in p.terms() {
                keys.insert((c, *e));
            }
        }
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let rows: Vec<Vec<BigRational>> = modes
        .iter()
        .map(|m| keys.iter().map(|(c, e)| m.profile[*c].coeff(e)).collect())
        .collect();
    linalg::rank(&rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct ModeSummary {
    pub name: String,
    pub growth_rate: u32,
    pub l: u32,
    pub m: u32,
    pub k: u32,
    pub radial_factor: String,
    pub angular_part: [String; 3],
    pub profile: [String; 3],
}

impl From<&ModeSolution> for ModeSummary {
    fn from(s: &ModeSolution) -> Self {
        Self {
            name: s.name.clone(),
            growth_rate: s.growth_rate,
            l: s.angular_part.l,
            m: s.angular_part.m,
            k: s.angular_part.k,
            radial_factor: s.radial_factor.to_string(),
            angular_part: std::array::from_fn(|c| s.angular_part.components[c].to_string()),
            profile: std::array::from_fn(|c| s.profile[c].to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_rows() {
        assert_eq!(clebsch_gordan_basis(0, 1).unwrap().len(), 3);
        let b = clebsch_gordan_basis(1, 0).unwrap();
        assert_eq!(b[0].components, vec3("y1", "y2", "y3"));
        assert_eq!(b[0].homogeneity_degree, 1);
        let b = clebsch_gordan_basis(2, 1).unwrap();
        assert_eq!(b[2].components, vec3("-3*y1*y3", "-3*y2*y3", "y1^2 + y2^2 - 2*y3^2"));
        assert_eq!(clebsch_gordan_basis(3, 2), Err(SphericalError::UnsupportedCase(3, 2)));
    }

    #[test]
    fn coupling_examples() {
        let e1 = clebsch_gordan_basis(0, 1).unwrap().remove(0);
        assert!(vec_is_zero(&momentum_coupling(&e1.components)));
        let y = vec3("y1", "y2", "y3");
        assert_eq!(momentum_coupling(&y), vec3("-2*y1", "-2*y2", "-2*y3"));
    }

    #[test]
    fn casimir_eigenvalues() {
        for (l, m, ev) in [(0, 1, 2), (1, 0, 0), (1, 2, 6), (2, 1, 2), (1, 1, 2)] {
            for z in clebsch_gordan_basis(l, m).unwrap() {
                assert_eq!(casimir_apply(&z).unwrap(), int(ev), "{}", z.label());
                assert_eq!(laplace_apply(&z).unwrap(), int(-i64::from(l * (l + 1))));
            }
        }
    }

    #[test]
    fn moments() {
        assert_eq!(sphere_moment([0, 0, 0]), int(1));
        assert_eq!(sphere_moment([2, 0, 0]), crate::exactmath::rat(1, 3));
        assert_eq!(sphere_moment([2, 2, 0]), crate::exactmath::rat(1, 15));
        assert_eq!(sphere_moment([4, 0, 0]), crate::exactmath::rat(1, 5));
        assert_eq!(sphere_moment([1, 1, 0]), int(0));
    }

    #[test]
    fn catalogue_shape() {
        let cat = mode_catalogue();
        assert_eq!(cat.len(), 13);
        assert_eq!(cat.iter().filter(|m| m.growth_rate == 1).count(), 4);
        assert_eq!(cat.iter().filter(|m| m.growth_rate == 0).count(), 9);
        let phi1 = cat.iter().find(|m| m.name == "Phi^1_{0,1}").unwrap();
        assert_eq!(phi1.profile, vec3("y1^2 + y2^2 + y3^2 - 3", "0", "0"));
        let psi113 = cat.iter().find(|m| m.name == "Psi^3_{1,1}").unwrap();
        assert_eq!(psi113.profile, vec3("-y2", "y1", "0"));
        assert!(cat.iter().all(|m| m.factorizes()));
        assert_eq!(catalogue_rank(&cat), 13);
    }
}
