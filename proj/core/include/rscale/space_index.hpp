#pragma once

#include <string>
#include <string_view>

#include "rscale/function_param.hpp"

namespace rscale {

enum class Domain { Lattice, Omega, OmegaClosure, Gamma };

std::string domain_name(Domain d);
Domain parse_domain(std::string_view name);

/// Name of a refined space: numeric order s, function parameter phi, the
/// geometry the norm lives on, and the modification order r (Omega only).
struct SpaceIndex {
  double s = 0.0;
  FunctionParameter phi = FunctionParameter::one();
  Domain domain = Domain::Lattice;
  int r = 0;

  /// True when r >= 1 and s sits on a critical half-integer k - 1/2 with
  /// 1 <= k <= r (within 1e-9), where the norm is the interpolation norm.
  bool is_critical() const;

  /// Parse "s=2.5,phi=log^1.5,domain=omega,r=4". domain and r are optional
  /// (lattice, 0).
  static SpaceIndex parse(std::string_view text);
  std::string format() const;

  SpaceIndex with_s(double new_s) const;
};

/// The Fourier weight h^{2s} phi(h)^2 at smoothed modulus h >= 1.
double space_weight(double s, const FunctionParameter& phi, double h);

}  // namespace rscale
