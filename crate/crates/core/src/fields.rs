//! The regularized generating function Φ = (e/2)·R̃·H_ε(ξ̃), its
//! d'Alembertian, and the static potential of a regularized charge at rest.
//!
//! Components are contravariant, and □ = ∂₀² − ∂₁² − ∂₂² − ∂₃².

use serde::Serialize;

use crate::minkowski::{norm3, FourVector, Worldline};
use crate::regularization::{HeavisideFamily, RegularizationError};
use crate::retarded::{kinematics, RetardedError, RetardedKinematics, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error(transparent)]
    Retarded(#[from] RetardedError),
    #[error(transparent)]
    Regularization(#[from] RegularizationError),
}

/// Which coefficient multiplies ξH″ in the shell term Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiForm {
    /// ξκ − 1/2, what a direct computation of □Φ gives.
    #[default]
    Corrected,
    /// ξκ − 1.
    AsPrinted,
}

impl PsiForm {
    fn second_coefficient(self, xi_kappa: f64) -> f64 {
        match self {
            PsiForm::Corrected => xi_kappa - 0.5,
            PsiForm::AsPrinted => xi_kappa - 1.0,
        }
    }
}

/// Analytic □Φ split into its Liénard–Wiechert part and the shell term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxPhi {
    /// Λ = −e·Ż/ξ̃.
    pub lambda: FourVector,
    /// Ψ, parallel to K̃ and supported in ε ≤ ξ̃ ≤ 2ε.
    pub psi: FourVector,
    /// Λ·H_ε(ξ̃) + Ψ.
    pub total: FourVector,
    pub xi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldPoint {
    pub x: FourVector,
    pub eps: f64,
    pub phi: FourVector,
    pub lambda: FourVector,
    pub psi: FourVector,
    pub box_phi: FourVector,
}

/// Potential, field and charge density of a regularized charge at rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticField {
    pub x: [f64; 3],
    pub phi: f64,
    pub e_field: [f64; 3],
    /// None for families without a second derivative.
    pub rho: Option<f64>,
    pub eps: f64,
}

/// A Heaviside family together with the charge and moment constants.
#[derive(Debug, Clone)]
pub struct FieldModel {
    pub family: HeavisideFamily,
    pub charge: f64,
    pub magnetic_moment: f64,
    pub psi_form: PsiForm,
}

impl FieldModel {
    pub fn new(family: HeavisideFamily) -> Self {
        FieldModel {
            family,
            charge: 1.0,
            magnetic_moment: 1.0,
            psi_form: PsiForm::Corrected,
        }
    }

    pub fn with_charge(mut self, e: f64) -> Self {
        self.charge = e;
        self
    }

    pub fn with_magnetic_moment(mut self, mu: f64) -> Self {
        self.magnetic_moment = mu;
        self
    }

    pub fn with_psi_form(mut self, form: PsiForm) -> Self {
        self.psi_form = form;
        self
    }

    pub fn phi_alpha(&self, w: &dyn Worldline, x: &FourVector, eps: f64) -> Result<FourVector, FieldError> {
        let kin = kinematics(w, x, DEFAULT_TOL)?;
        Ok(self.phi_from(&kin, eps))
    }

    pub fn phi_from(&self, kin: &RetardedKinematics, eps: f64) -> FourVector {
        kin.r * (0.5 * self.charge * self.family.h(kin.xi, eps))
    }

    pub fn box_phi_analytic(&self, w: &dyn Worldline, x: &FourVector, eps: f64) -> Result<BoxPhi, FieldError> {
        let kin = kinematics(w, x, DEFAULT_TOL)?;
        self.box_phi_from(&kin, eps)
    }

    pub fn box_phi_from(&self, kin: &RetardedKinematics, eps: f64) -> Result<BoxPhi, FieldError> {
        let e = self.charge;
        let xi = kin.xi;
        let lambda = kin.velocity * (-e / xi);
        let in_shell = xi > eps && xi < 2.0 * eps;
        let psi = if in_shell {
            self.family.require_smooth()?;
            let xk = xi * kin.kappa;
            let h1 = self.family.h1(xi, eps);
            let h2 = self.family.h2(xi, eps);
            kin.k * (e * ((3.0 * xk - 2.0) * h1 + self.psi_form.second_coefficient(xk) * xi * h2))
        } else {
            FourVector::ZERO
        };
        let total = lambda * self.family.h(xi, eps) + psi;
        Ok(BoxPhi { lambda, psi, total, xi })
    }

    /// □Φ by central second differences with step `h` along each axis.
    pub fn box_phi_fd(&self, w: &dyn Worldline, x: &FourVector, eps: f64, h: f64) -> Result<FourVector, FieldError> {
        let center = self.phi_alpha(w, x, eps)?;
        let mut out = FourVector::ZERO;
        for mu in 0..4 {
            let step = FourVector::basis(mu) * h;
            let plus = self.phi_alpha(w, &(*x + step), eps)?;
            let minus = self.phi_alpha(w, &(*x - step), eps)?;
            let second = (plus - center * 2.0 + minus) * (1.0 / (h * h));
            out = if mu == 0 { out + second } else { out - second };
        }
        Ok(out)
    }

    /// Two-level Richardson extrapolation of [`Self::box_phi_fd`], error O(h⁴).
    pub fn box_phi_fd_extrapolated(
        &self,
        w: &dyn Worldline,
        x: &FourVector,
        eps: f64,
        h: f64,
    ) -> Result<FourVector, FieldError> {
        let coarse = self.box_phi_fd(w, x, eps, h)?;
        let fine = self.box_phi_fd(w, x, eps, 0.5 * h)?;
        Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
    }

    pub fn field_point(&self, w: &dyn Worldline, x: &FourVector, eps: f64) -> Result<FieldPoint, FieldError> {
        let kin = kinematics(w, x, DEFAULT_TOL)?;
        let b = self.box_phi_from(&kin, eps)?;
        Ok(FieldPoint {
            x: *x,
            eps,
            phi: self.phi_from(&kin, eps),
            lambda: b.lambda,
            psi: b.psi,
            box_phi: b.total,
        })
    }

    /// φ = eH/|x|, E = e(H/|x|² − H′/|x|)·x̂, 4πρ = −eH″/|x|.
    ///
    /// Inside the ball |x| ≤ ε all three vanish, so the origin is allowed.
    pub fn static_field(&self, x: [f64; 3], eps: f64) -> StaticField {
        let e = self.charge;
        let r = norm3(&x);
        let smooth = self.family.is_smooth();
        if r <= eps {
            return StaticField {
                x,
                phi: 0.0,
                e_field: [0.0; 3],
                rho: smooth.then_some(0.0),
                eps,
            };
        }
        let h = self.family.h(r, eps);
        let h1 = self.family.h1(r, eps);
        let radial = e * (h / (r * r) - h1 / r);
        let rho = smooth.then(|| -e * self.family.h2(r, eps) / (4.0 * std::f64::consts::PI * r));
        StaticField {
            x,
            phi: e * h / r,
            e_field: x.map(|c| radial * c / r),
            rho,
            eps,
        }
    }

    /// Charge density of the regularized charge at rest, as a function of radius.
    pub fn charge_density(&self, r: f64, eps: f64) -> Result<f64, FieldError> {
        self.family.require_smooth()?;
        if r <= eps {
            return Ok(0.0);
        }
        Ok(-self.charge * self.family.h2(r, eps) / (4.0 * std::f64::consts::PI * r))
    }
}

/// Default finite-difference step for [`FieldModel::box_phi_fd`].
///
/// Away from the shell the step is 1e-3·|X|. Inside it is ε/40, shrunk further
/// toward the inner edge where the bump flattens (with u = 2ξ/ε − 3 the local
/// variation scale is about (1 − u²)²·ε/4), and toward 2ε in proportion to
/// the distance, down to 4e-3·ε.
pub fn default_fd_step(x: &FourVector, xi: f64, eps: f64) -> f64 {
    if xi > 0.5 * eps && xi < 1.5 * eps {
        // Φ is tiny on the whole stencil here, so roundoff stays relative
        // and the step may shrink with the distance to the inner edge
        let u = (2.0 * xi / eps - 3.0).clamp(-1.0, 1.0);
        let edge = (1.0 - u * u).max(0.0);
        let local = 0.25 * edge * edge * eps;
        (eps / 40.0).min(0.2 * local).max(1e-12 * eps)
    } else if xi >= 1.5 * eps && xi < 3.0 * eps {
        // H is flat next to 2ε but Φ is not small, so the step keeps a floor
        (eps / 40.0).min(0.1 * (2.0 * eps - xi).abs()).max(4e-3 * eps)
    } else {
        1e-3 * x.euclidean_norm().max(1.0)
    }
}

/// max_μ |a^μ − b^μ| / max_μ |b^μ|, or the absolute deviation when b = 0.
pub fn relative_deviation(a: &FourVector, b: &FourVector) -> f64 {
    let diff = (*a - *b).max_abs();
    let scale = b.max_abs();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
