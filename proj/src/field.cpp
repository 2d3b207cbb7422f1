#include "opharm/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>

#include "opharm/error.hpp"
#include "opharm/fft.hpp"

namespace opharm {

namespace {

constexpr char kBinaryMagic[4] = {'O', 'P', 'H', 'F'};
constexpr const char* kLayout = "row-major s-index, then n x n row-major complex (re,im) pairs";

void check_same_shape(const OperatorField& a, const OperatorField& b) {
  if (!(a.grid() == b.grid()) || a.n() != b.n()) throw_shape("fields differ in grid or matrix size");
}

// Pairwise sum keeps the reduction order fixed and the roundoff small.
double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace

OperatorField::OperatorField(const GridSpec& grid, int n) : grid_(grid), n_(n) {
  if (n < 1) throw_shape("matrix size must be positive");
  values_.assign(grid.num_points() * block(), cd{0.0, 0.0});
}

OperatorField::OperatorField(const GridSpec& grid, int n, std::vector<cd> values, bool hermitian)
    : grid_(grid), n_(n), values_(std::move(values)) {
  if (n < 1) throw_shape("matrix size must be positive");
  if (values_.size() != grid.num_points() * block()) throw_shape("value array does not match grid");
  if (hermitian && !mark_hermitian()) throw_domain("field flagged Hermitian is not");
}

OperatorField OperatorField::constant(const GridSpec& grid, const Matrix& a) {
  if (a.rows() != a.cols()) throw_shape("constant field needs a square matrix");
  OperatorField f(grid, static_cast<int>(a.rows()));
  for (std::size_t p = 0; p < f.size(); ++p) f.at(p) = a;
  f.hermitian_ = is_hermitian(a);
  return f;
}

OperatorField OperatorField::single_mode(const GridSpec& grid, const LatticeVec& m, const Matrix& a) {
  if (a.rows() != a.cols()) throw_shape("single_mode needs a square matrix");
  OperatorField f(grid, static_cast<int>(a.rows()));
  const long N = grid.N;
  for (std::size_t p = 0; p < f.size(); ++p) {
    const LatticeVec s = grid.unflat(p);
    long phase = 0;
    for (int i = 0; i < grid.d; ++i) phase += static_cast<long>(m[i]) * s[i];
    phase %= N;
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(N);
    f.at(p) = std::polar(1.0, theta) * a;
  }
  return f;
}

bool OperatorField::mark_hermitian(double tol) {
  bool ok = true;
  for (std::size_t p = 0; p < size() && ok; ++p) ok = is_hermitian(value(p), tol);
  hermitian_ = ok;
  return ok;
}

OperatorField& OperatorField::operator*=(cd lambda) {
  for (auto& v : values_) v *= lambda;
  if (lambda.imag() != 0.0) hermitian_ = false;
  return *this;
}

OperatorField& OperatorField::operator+=(const OperatorField& o) {
  check_same_shape(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

OperatorField& OperatorField::operator-=(const OperatorField& o) {
  check_same_shape(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

OperatorField operator*(cd lambda, OperatorField f) { return f *= lambda; }
OperatorField operator+(OperatorField a, const OperatorField& b) { return a += b; }
OperatorField operator-(OperatorField a, const OperatorField& b) { return a -= b; }

OperatorField adjoint(const OperatorField& f) {
  OperatorField g(f.grid(), f.n());
  for (std::size_t p = 0; p < f.size(); ++p) g.at(p) = f.at(p).adjoint();
  if (f.hermitian()) g.mark_hermitian();
  return g;
}

SpectrumField::SpectrumField(const GridSpec& grid, int n) : grid_(grid), n_(n) {
  if (n < 1) throw_shape("matrix size must be positive");
  values_.assign(grid.num_points() * block(), cd{0.0, 0.0});
}

int SpectrumField::band(double rel_tol) const {
  double peak = 0.0;
  std::vector<double> norms(size());
  for (std::size_t k = 0; k < size(); ++k) {
    norms[k] = at(k).norm();
    peak = std::max(peak, norms[k]);
  }
  if (peak == 0.0) return -1;
  int b = 0;
  for (std::size_t k = 0; k < size(); ++k)
    if (norms[k] > rel_tol * peak) b = std::max(b, sup_norm(grid_.frequency(k)));
  return b;
}

SpectrumField fft_forward(const OperatorField& f) {
  SpectrumField out(f.grid(), f.n());
  std::copy(f.raw().begin(), f.raw().end(), out.raw().begin());
  fft::transform(f.grid(), static_cast<int>(f.block()), out.raw(), fft::Direction::forward);
  const double hd = f.grid().cell_volume();
  for (auto& v : out.raw()) v *= hd;
  return out;
}

OperatorField fft_inverse(const SpectrumField& fhat) {
  std::vector<cd> values(fhat.raw().begin(), fhat.raw().end());
  fft::transform(fhat.grid(), static_cast<int>(fhat.block()), values, fft::Direction::backward);
  return OperatorField(fhat.grid(), fhat.n(), std::move(values));
}

Matrix field_mean(const OperatorField& f) {
  RowMajorMatrix acc = RowMajorMatrix::Zero(f.n(), f.n());
  for (std::size_t p = 0; p < f.size(); ++p) acc += f.at(p);
  return acc * f.grid().cell_volume();
}

Matrix plancherel_pairing(const OperatorField& f, const OperatorField& g) {
  check_same_shape(f, g);
  Matrix acc = Matrix::Zero(f.n(), f.n());
  for (std::size_t p = 0; p < f.size(); ++p) acc.noalias() += g.at(p).adjoint() * f.at(p);
  return acc * f.grid().cell_volume();
}

Matrix spectral_pairing(const SpectrumField& fhat, const SpectrumField& ghat) {
  if (!(fhat.grid() == ghat.grid()) || fhat.n() != ghat.n()) throw_shape("spectra differ in grid or matrix size");
  Matrix acc = Matrix::Zero(fhat.n(), fhat.n());
  for (std::size_t k = 0; k < fhat.size(); ++k) acc.noalias() += ghat.at(k).adjoint() * fhat.at(k);
  return acc;
}

double lp_field_norm(const OperatorField& f, double p) {
  if (!(p >= 1.0)) throw_domain("lp_field_norm needs p >= 1");
  const std::size_t np = f.size();
  std::vector<double> local(np);
  if (std::isinf(p)) {
#pragma omp parallel for schedule(static)
    for (std::size_t s = 0; s < np; ++s) local[s] = op_norm(f.value(s));
    return np == 0 ? 0.0 : *std::max_element(local.begin(), local.end());
  }
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < np; ++s) local[s] = schatten_power_sum(f.value(s), p);
  return std::pow(f.grid().cell_volume() * pairwise_sum(local.data(), np), 1.0 / p);
}

nlohmann::json field_to_json(const OperatorField& f) {
  nlohmann::json values = nlohmann::json::array();
  for (const cd& v : f.raw()) {
    values.push_back(v.real());
    values.push_back(v.imag());
  }
  return {{"d", f.grid().d},          {"N", f.grid().N}, {"n", f.n()}, {"hermitian", f.hermitian()},
          {"layout", kLayout}, {"values", std::move(values)}};
}

OperatorField field_from_json(const nlohmann::json& j) {
  try {
    const GridSpec grid(j.at("d").get<int>(), j.at("N").get<int>());
    const int n = j.at("n").get<int>();
    const auto& raw = j.at("values");
    if (raw.size() % 2 != 0) throw_shape("field JSON has an odd number of reals");
    std::vector<cd> values(raw.size() / 2);
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] = {raw[2 * i].get<double>(), raw[2 * i + 1].get<double>()};
    return OperatorField(grid, n, std::move(values), j.value("hermitian", false));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed field JSON: ") + e.what());
  }
}

void write_field_binary(const OperatorField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  nlohmann::json header = field_to_json(f);
  header.erase("values");
  const std::string text = header.dump();
  const auto len = static_cast<std::uint64_t>(text.size());
  out.write(kBinaryMagic, 4);
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(reinterpret_cast<const char*>(f.raw().data()),
            static_cast<std::streamsize>(f.raw().size() * sizeof(cd)));
  if (!out) throw IoError("write failed: " + path.string());
}

OperatorField read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  std::uint64_t len = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || std::memcmp(magic, kBinaryMagic, 4) != 0 || len > (1u << 20))
    throw IoError("not an opharm field file: " + path.string());
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad header in " + path.string() + ": " + e.what());
  }
  const GridSpec grid(header.at("d").get<int>(), header.at("N").get<int>());
  const int n = header.at("n").get<int>();
  std::vector<cd> values(grid.num_points() * static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(cd)));
  if (!in) throw IoError("truncated field file: " + path.string());
  return OperatorField(grid, n, std::move(values), header.value("hermitian", false));
}

}  // namespace opharm
