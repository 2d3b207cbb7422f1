#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opharm/square.hpp"

namespace opharm {

enum class HardyMethod {
  poisson_radial,           // circular Poisson, eps-form of d/dr P_r: equals phi_radial with d_poisson
  poisson_radial_circular,  // circular Poisson with the (1 - r) dr weight
  poisson_conic,
  phi_radial,
  phi_conic,
  phi_radial_discrete,
  phi_conic_discrete,
  riesz_poisson_k,
};

const char* to_string(HardyMethod method);
HardyMethod parse_hardy_method(const std::string& text);
std::vector<HardyMethod> all_hardy_methods();

struct HardyConfig {
  RadialSymbol phi = RadialSymbol::gauss_lp();
  RadialSymbol phi_discrete = RadialSymbol::annulus_bump();
  double alpha = 1.0;              // riesz_poisson_k order
  std::optional<ScaleGrid> grid;   // default ScaleGrid::torus_default
  ConeSpec cone;
};

/// Pointwise square of the square function selected by `method` (unrooted).
std::vector<cd> hardy_squares(const OperatorField& f, HardyMethod method, const HardyConfig& cfg = {});

/// The square function itself.
OperatorField hardy_square_function(const OperatorField& f, HardyMethod method, const HardyConfig& cfg = {});

/// schatten_norm(fhat(0), p) + lp_field_norm(square function, p).
double hardy_norm(const OperatorField& f, double p, HardyMethod method, const HardyConfig& cfg = {});

/// Row version: the column norm of the adjoint field.
double hardy_norm_row(const OperatorField& f, double p, HardyMethod method, const HardyConfig& cfg = {});

}  // namespace opharm
