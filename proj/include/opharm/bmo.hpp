#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "opharm/companion.hpp"
#include "opharm/field.hpp"
#include "opharm/symbols.hpp"

namespace opharm {

/// Which translates of the dyadic cubes are included at each level.
///  none: the standard dyadic cubes.
///  half_cell: also the cubes shifted by half their side along any subset of axes.
///  all: every lattice translate (the family is then translation invariant).
enum class ShiftMode { none, half_cell, all };

const char* to_string(ShiftMode mode);
ShiftMode parse_shift_mode(const std::string& text);

struct Cube {
  int level = 0;          // side 2^-level
  int shift = 0;          // index into the shift list of that level
  std::size_t index = 0;  // position within (level, shift)
  LatticeVec corner{};    // lowest lattice cell
  int side = 1;           // in cells
};

/// Dyadic cubes of levels 0..J on a lattice. Level 0 is the whole torus.
struct CubeFamily {
  GridSpec grid;
  int max_level = 0;
  ShiftMode shifts = ShiftMode::none;

  CubeFamily() = default;
  /// max_level < 0 means log2 N.
  CubeFamily(const GridSpec& grid, int max_level = -1, ShiftMode shifts = ShiftMode::none);

  int side(int level) const { return grid.N >> level; }
  /// Corner offsets applied at a level, in cells.
  std::vector<LatticeVec> shift_offsets(int level) const;
  /// Cubes of one level in deterministic order (shift major, then row-major corner).
  std::vector<Cube> cubes(int level) const;
  std::vector<Cube> all_cubes() const;
};

/// |Q|^-1 h^d sum_{s in Q} f(s).
Matrix cube_mean(const OperatorField& f, const Cube& Q);

/// q = kInf: max(||fhat(0)||, sup_Q || mean_Q |f - f_Q|^2 ||^{1/2}).
/// q in (2, inf), scalar fields only: max(|fhat(0)|, ||a||_{q/2}^{1/2}) with
/// a(s) the sup of the oscillation over cubes containing s.
double bmo_norm(const OperatorField& f, const CubeFamily& family, double q = kInf);

struct CarlesonRow {
  Cube cube;
  Matrix value;  // averaged tent integral
  double value_opnorm = 0.0;
};

struct CarlesonReport {
  std::vector<CarlesonRow> rows;
  double sup_norm = 0.0;
  std::size_t witness = 0;  // row attaining the sup over cubes
  double q = kInf;
};

nlohmann::json to_json(const CarlesonReport& report);

struct CarlesonOptions {
  std::optional<ScaleGrid> grid;  // continuous scales; default ScaleGrid::torus_default
  bool use_psi = false;           // integrate psi of the pair instead of phi
};

/// |Q|^-1 integral over Q x (0, side/2] of |Phi_eps * f|^2 ds d(eps)/eps for
/// every cube. q < inf: ||sup_{Q contains s} value||_{q/2}, scalar fields only.
CarlesonReport carleson_norm(const OperatorField& f, const MultiplierPair& pair, const CubeFamily& family,
                             double q = kInf, const CarlesonOptions& opts = {});

/// Same with the scale integral replaced by the sum over dyadic scales
/// 2^-i <= side/2.
CarlesonReport discrete_carleson_norm(const OperatorField& f, const MultiplierPair& pair, const CubeFamily& family,
                                      const CarlesonOptions& opts = {});

/// 32 nodes (1 - 2^-10) sin(pi i / 62), i = 0..31.
std::vector<double> default_poisson_nodes();

/// max(||fhat(0)||, max_r sup_s ||P_r(|f - P_r f|^2)(s)||^{1/2}) with the
/// circular Poisson semigroup P_r: fhat(m) -> r^|m| fhat(m).
double poisson_bmo_norm(const OperatorField& f, std::span<const double> r_nodes);
double poisson_bmo_norm(const OperatorField& f);

}  // namespace opharm
