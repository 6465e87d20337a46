#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermicert/interval.hpp"
#include "fermicert/isosys.hpp"
#include "fermicert/mp.hpp"
#include "fermicert/polyeval.hpp"

namespace fermicert {

/// Scientific-notation rendering of an extended-precision magnitude,
/// e.g. "4.13e-31".
std::string mpf_to_scientific(const mpf_class& x, int digits = 6);

struct RefinedPoint {
  MpVector coords;
  mpf_class residual_norm;  // max-norm of the system at coords
  int steps_taken = 0;
  mpf_class last_step_norm;  // max-norm of the final Newton update

  std::vector<std::complex<double>> to_doubles() const;
};

/// Thrown when Newton refinement hits a singular Jacobian; carries the
/// iterate at which elimination failed.
struct NewtonSingularError : std::runtime_error {
  MpVector iterate;
  NewtonSingularError(const std::string& msg, MpVector it)
      : std::runtime_error(msg), iterate(std::move(it)) {}
};

/// Fixed-step Newton iteration at the requested precision.  Deliberately not
/// run to convergence: the step count is part of the reproducible recipe.
RefinedPoint newton_refine(const SquareSystem& sys,
                           const std::vector<std::complex<double>>& x0,
                           int steps = 3, int precision_bits = 200);
RefinedPoint newton_refine(const CompiledSystem& sys,
                           const std::vector<std::complex<double>>& x0,
                           int steps = 3, int precision_bits = 200);

/// K(B) = m - Y*F(m) + (I - Y*[J](B))*(B - m) with m = midpoint(B) and
/// Y the floating-point inverse of J(m).  F(m) is evaluated in exact
/// rational arithmetic (midpoint components are exact doubles) and then
/// enclosed outward, so the K width is dominated by the Jacobian term.
/// Throws SingularMatrixError when J(m) is not invertible.
ComplexBox krawczyk_operator(const SquareSystem& sys, const ComplexBox& box);
ComplexBox krawczyk_operator(const CompiledSystem& sys, const ComplexBox& box);

struct CertifyConfig {
  double initial_radius = 0.0;  // 0 = max(1e-8, 8 * last Newton step)
  double inflation_factor = 8.0;
  int max_rounds = 6;
  bool require_real = true;
  int newton_steps = 3;
  int precision_bits = 200;
};

struct Certificate {
  bool certified = false;
  bool real_certified = false;
  bool unique_in_box = false;
  ComplexBox box;        // certified enclosure (empty when not certified)
  ComplexBox image_box;  // Krawczyk image of box
  std::vector<std::complex<double>> midpoint;
  int inflation_rounds = 0;
  std::string residual_norm;  // decimal, from the refinement step
  std::string notes;

  bool operator==(const Certificate&) const = default;
};

/// Refines x_star, then searches for a box around the refined point on which
/// the Krawczyk operator contracts, inflating the radius geometrically on
/// failure.  With require_real a conjugate-symmetric box (imaginary parts
/// [-r, r]) is tried first; a plain box around the possibly complex refined
/// point is the fallback, so non-real roots still certify with
/// real_certified = false.  Never throws on bad candidates.
Certificate certify_root(const SquareSystem& sys,
                         const std::vector<std::complex<double>>& x_star,
                         const CertifyConfig& config = {});
Certificate certify_root(const CompiledSystem& sys,
                         const std::vector<std::complex<double>>& x_star,
                         const CertifyConfig& config = {});

std::string certificate_text(const Certificate& c);
nlohmann::ordered_json certificate_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

}  // namespace fermicert
