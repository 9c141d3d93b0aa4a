#pragma once

#include <optional>
#include <utility>

#include "sllg/energy.hpp"
#include "sllg/noise.hpp"
#include "sllg/operators.hpp"

namespace sllg {

/// Smooth non-increasing cut-off psi_R: 1 on [0, R], 0 on [R + 1, inf).
struct CutoffSpec {
  /// What psi_R is evaluated on: the sup norm |u|_{L^inf} (torus scheme) or
  /// the pointwise |u(x)|^2 (mollified scheme).
  enum class Argument { SupNorm, Pointwise };

  double R = 10.0;
  Argument argument = Argument::SupNorm;

  void validate() const;
};

double cutoff_psi(double y, const CutoffSpec& spec);
double cutoff_psi_derivative(double y, const CutoffSpec& spec);

/// Spatial data of u shared by the drift and diffusion coefficients. The
/// field and gradient use the 2/3-truncated spectrum of u.
struct FieldDerivatives {
  /// -H(u) = Delta^2 u - lambda Delta u - h e3
  MagnetizationField minus_field;
  Gradient grad;
  /// Delta^2 of the modes above the 2/3 band.
  MagnetizationField unresolved;
};

FieldDerivatives field_derivatives(const MagnetizationField& u, const ModelParams& p);

/// Fbar(u) = -u x H(u) - alpha u x (u x H(u)) - gamma u x grad_v u.
/// Cross products are formed pointwise, so this part is orthogonal to u(x).
/// Modes above the 2/3 band, which the products do not see, are damped by
/// -alpha Delta^2 alone; for resolved fields that term is negligible.
MagnetizationField drift_bar(const MagnetizationField& u, const ModelParams& p);
MagnetizationField drift_bar(const MagnetizationField& u, const ModelParams& p,
                             const FieldDerivatives& d, const VectorField* current);

/// F(u) = Fbar(u) - grad_v u.
MagnetizationField drift_full(const MagnetizationField& u, const ModelParams& p);

/// Parameters of the torque formulation, with the raw (unscaled) current.
struct TorqueParams {
  double alpha = 1.0;
  double beta = 0.0;
  double h = 0.3;
  int lambda = -1;
  std::optional<VectorField> raw_current;
};

/// -tau - alpha M x tau with tau = M x [H - beta grad_v M] + grad_v M.
/// Throws std::domain_error with the observed deviation when
/// max ||M| - 1| exceeds `sphere_tolerance`.
MagnetizationField torque_form_rhs(const MagnetizationField& m, const TorqueParams& p,
                                   double sphere_tolerance = 1e-8);

/// (grad_g)^2 u
MagnetizationField transport_second_order(const MagnetizationField& u, const VectorField& g);
/// 1/2 sum_k (grad_{g_k})^2 u
MagnetizationField stratonovich_correction(const MagnetizationField& u, const NoiseModel& noise);
/// G_k(u) = -grad_{g_k} u
MagnetizationField diffusion_apply(const MagnetizationField& u, int k, const NoiseModel& noise);

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  /// |lhs - rhs|
  double residual = 0.0;
  /// Larger of the Hoelder bound of the left-hand side
  /// (|w|_inf^j |D2u| |phi|) and the largest right-hand term.
  double scale = 0.0;
  /// residual / scale
  double relative = 0.0;
};

/// Both weak forms of the bi-Laplacian cross terms:
///   <w x D2u, phi> = <Du, Dphi x w + phi x Dw + 2 grad phi x grad w>
///   <w x (w x D2u), phi> = <w x Du, phi x Dw + Dphi x w + 2 grad phi x grad w>
///                          + <Du, (phi x w) x Dw>
///                          + 2 <grad w x Du, grad phi x w + phi x grad w>
/// with D = Delta and D2 = Delta^2.
std::pair<IdentityResidual, IdentityResidual> weak_form_check(const MagnetizationField& u,
                                                              const MagnetizationField& w,
                                                              const MagnetizationField& phi);

/// Pointwise max of |alpha M x (M x D2M) - (-alpha D2M + alpha <M, D2M> M)|,
/// relative to max |alpha D2M|.
double double_cross_residual(const MagnetizationField& m, double alpha);

}  // namespace sllg
