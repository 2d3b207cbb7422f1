#include "opharm/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <tuple>

#include "opharm/error.hpp"
#include "opharm/fft.hpp"

namespace opharm {

namespace {

// Antiderivative of sqrt(R^2 - u^2) on [-R, R].
double arc_primitive(double u, double R) {
  u = std::clamp(u, -R, R);
  return 0.5 * (u * std::sqrt(std::max(R * R - u * u, 0.0)) + R * R * std::asin(u / R));
}

double arc_integral(double a, double b, double R) { return b > a ? arc_primitive(b, R) - arc_primitive(a, R) : 0.0; }

// Area of the disc of radius R intersected with {u <= x, v <= y}.
double quadrant_area(double x, double y, double R) {
  const double hi = std::clamp(x, -R, R);
  if (hi <= -R) return 0.0;
  const double b = std::sqrt(std::max(R * R - y * y, 0.0));
  double area = 0.0;
  // |u| >= b: the chord lies entirely below y (y >= 0) or entirely above (y < 0)
  if (y >= 0.0) {
    area += 2.0 * arc_integral(-R, std::min(-b, hi), R);
    area += 2.0 * arc_integral(b, hi, R);
  }
  const double m0 = -b;
  const double m1 = std::min(b, hi);
  if (m1 > m0) area += y * (m1 - m0) + arc_integral(m0, m1, R);
  return area;
}

double disc_rect_area(double x0, double x1, double y0, double y1, double R) {
  if (R <= 0.0) return 0.0;
  return quadrant_area(x1, y1, R) - quadrant_area(x0, y1, R) - quadrant_area(x1, y0, R) + quadrant_area(x0, y0, R);
}

double nearest_sq(double lo, double hi) {
  if (hi < 0.0) return hi * hi;
  if (lo > 0.0) return lo * lo;
  return 0.0;
}

double farthest_sq(double lo, double hi) { return std::max(lo * lo, hi * hi); }

double max_block_norm(std::span<const cd> squares, std::size_t block) {
  double peak = 0.0;
  for (std::size_t p = 0; p * block < squares.size(); ++p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < block; ++i) acc += std::norm(squares[p * block + i]);
    peak = std::max(peak, std::sqrt(acc));
  }
  return peak;
}

}  // namespace

const char* to_string(BallRule rule) { return rule == BallRule::cell_overlap ? "cell_overlap" : "lattice"; }

double BallKernel::weight_sum() const {
  double acc = 0.0;
  for (double w : weights) acc += w;
  return acc;
}

double cell_ball_overlap(int d, const std::array<double, 3>& lo, double R) {
  if (R <= 0.0) return 0.0;
  double near = 0.0, far = 0.0;
  for (int i = 0; i < d; ++i) {
    near += nearest_sq(lo[i], lo[i] + 1.0);
    far += farthest_sq(lo[i], lo[i] + 1.0);
  }
  if (near >= R * R) return 0.0;
  if (far <= R * R) return 1.0;
  switch (d) {
    case 1: return std::max(0.0, std::min(lo[0] + 1.0, R) - std::max(lo[0], -R));
    case 2: return disc_rect_area(lo[0], lo[0] + 1.0, lo[1], lo[1] + 1.0, R);
    default: {
      const int slices = 128;
      double acc = 0.0;
      for (int k = 0; k < slices; ++k) {
        const double z = lo[2] + (k + 0.5) / slices;
        const double r2 = R * R - z * z;
        if (r2 > 0.0) acc += disc_rect_area(lo[0], lo[0] + 1.0, lo[1], lo[1] + 1.0, std::sqrt(r2));
      }
      return acc / slices;
    }
  }
}

BallKernel ball_kernel(const GridSpec& grid, double radius, const std::array<double, 3>& centre, BallRule rule) {
  if (!(radius > 0.0)) throw_domain("ball_kernel needs a positive radius");
  BallKernel k;
  const double R = radius / grid.h();
  const int d = grid.d;
  if (rule == BallRule::lattice && R < 1.0) {
    // single-sample rule below one cell
    LatticeVec t{0, 0, 0};
    for (int i = 0; i < d; ++i) t[i] = static_cast<int>(std::lround(centre[i]));
    k.offsets.push_back(t);
    k.weights.push_back(unit_ball_volume(d) * std::pow(R, d));
    return k;
  }
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<int>(std::floor(centre[i] - R)) - 1;
    hi[i] = static_cast<int>(std::ceil(centre[i] + R)) + 1;
  }
  for (int a = lo[0]; a <= hi[0]; ++a)
    for (int b = lo[1]; b <= hi[1]; ++b)
      for (int c = lo[2]; c <= hi[2]; ++c) {
        const LatticeVec t{a, b, c};
        double w = 0.0;
        if (rule == BallRule::cell_overlap) {
          std::array<double, 3> cell{0.0, 0.0, 0.0};
          for (int i = 0; i < d; ++i) cell[i] = t[i] - 0.5 - centre[i];
          w = cell_ball_overlap(d, cell, R);
        } else {
          double r2 = 0.0;
          for (int i = 0; i < d; ++i) r2 += (t[i] - centre[i]) * (t[i] - centre[i]);
          w = r2 < R * R ? 1.0 : 0.0;
        }
        if (w > 0.0) {
          k.offsets.push_back(t);
          k.weights.push_back(w);
        }
      }
  return k;
}

std::shared_ptr<const std::vector<cd>> ball_kernel_spectrum(const GridSpec& grid, double radius, BallRule rule) {
  using Key = std::tuple<int, int, std::uint64_t, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const std::vector<cd>>> cache;
  const Key key{grid.d, grid.N, std::bit_cast<std::uint64_t>(radius), static_cast<int>(rule)};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const BallKernel k = ball_kernel(grid, radius, {0.0, 0.0, 0.0}, rule);
  auto spec = std::make_shared<std::vector<cd>>(grid.num_points(), cd{0.0, 0.0});
  for (std::size_t i = 0; i < k.offsets.size(); ++i) (*spec)[grid.flat(k.offsets[i])] += k.weights[i];
  fft::transform(grid, 1, *spec, fft::Direction::forward);
  std::lock_guard lock(mutex);
  if (cache.size() > 4096) cache.clear();
  return cache.emplace(key, std::move(spec)).first->second;
}

namespace kernels {

void scale_spectrum(const SpectrumField& fhat, std::span<const cd> mult, std::span<cd> out) {
  const std::size_t np = fhat.size();
  const std::size_t b = fhat.block();
  if (mult.size() != np || out.size() != np * b) throw_shape("scale_spectrum: size mismatch");
  const cd* src = fhat.raw().data();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < np; ++k) {
    const cd m = mult[k];
    for (std::size_t i = 0; i < b; ++i) out[k * b + i] = m * src[k * b + i];
  }
}

void accumulate_abs_square(std::span<const cd> slice, int n, double weight, std::span<cd> acc) {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (slice.size() != acc.size() || slice.size() % b != 0) throw_shape("accumulate_abs_square: size mismatch");
  const std::size_t np = slice.size() / b;
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < np; ++p) {
    ConstMatrixMap a(slice.data() + p * b, n, n);
    MatrixMap out(acc.data() + p * b, n, n);
    out.noalias() += weight * (a.adjoint() * a);
  }
}

OperatorField psd_sqrt_field(const GridSpec& grid, int n, std::span<const cd> squares) {
  OperatorField out(grid, n);
  const std::size_t b = out.block();
  if (squares.size() != out.raw().size()) throw_shape("psd_sqrt_field: size mismatch");
  const double ref = max_block_norm(squares, b);
  const std::size_t np = out.size();
  const auto values = out.raw();
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < np; ++p) {
    try {
      ConstMatrixMap a(squares.data() + p * b, n, n);
      const Matrix herm = 0.5 * (Matrix(a) + Matrix(a.adjoint()));
      MatrixMap(values.data() + p * b, n, n) = psd_sqrt(herm, ref);
    } catch (...) {
#pragma omp critical(opharm_psd_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  out.mark_hermitian(1e-8);
  return out;
}

void ball_sum(const GridSpec& grid, int n, const BallKernel& kernel, std::span<const cd> a, double scale,
              std::span<cd> out) {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t np = grid.num_points();
  if (a.size() != np * b || out.size() != np * b) throw_shape("ball_sum: size mismatch");
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < np; ++p) {
    const LatticeVec s = grid.unflat(p);
    for (std::size_t i = 0; i < kernel.offsets.size(); ++i) {
      const LatticeVec& t = kernel.offsets[i];
      const std::size_t q = grid.flat({s[0] + t[0], s[1] + t[1], s[2] + t[2]});
      const double w = scale * kernel.weights[i];
      for (std::size_t e = 0; e < b; ++e) out[p * b + e] += w * a[q * b + e];
    }
  }
}

void box_sums(const GridSpec& grid, int n, int side, std::span<const cd> a, std::span<cd> out) {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t np = grid.num_points();
  if (a.size() != np * b || out.size() != np * b) throw_shape("box_sums: size mismatch");
  if (side < 1 || side > grid.N) throw_domain("box side out of range");
  std::vector<cd> cur(a.begin(), a.end());
  std::vector<cd> next(cur.size());
  const int N = grid.N;
  for (int axis = 0; axis < grid.d; ++axis) {
#pragma omp parallel for schedule(static)
    for (std::size_t p = 0; p < np; ++p) {
      LatticeVec s = grid.unflat(p);
      const int base = s[axis];
      for (std::size_t e = 0; e < b; ++e) next[p * b + e] = 0.0;
      for (int k = 0; k < side; ++k) {
        s[axis] = (base + k) % N;
        const std::size_t q = grid.flat(s);
        for (std::size_t e = 0; e < b; ++e) next[p * b + e] += cur[q * b + e];
      }
    }
    cur.swap(next);
  }
  std::copy(cur.begin(), cur.end(), out.begin());
}

}  // namespace kernels

}  // namespace opharm
