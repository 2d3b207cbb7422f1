#include "opharm/quantum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "opharm/error.hpp"

namespace opharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long mod(long a, long q) {
  const long r = a % q;
  return r < 0 ? r + q : r;
}

// omega^j with omega = e^{2 pi i p/q}, j reduced mod q first.
cd root_power(long p, long q, long j) {
  return std::polar(1.0, kTwoPi * static_cast<double>(mod(mod(j, q) * p, q)) / static_cast<double>(q));
}

void require_same_theta(const QTElement& x, const QTElement& y) {
  if (!(x.theta == y.theta)) throw_domain("quantum torus elements with different theta");
}

LatticeVec negate(const LatticeVec& m) { return {-m[0], -m[1], -m[2]}; }

std::string rational_string(const ThetaEntry& e) {
  return e.q == 1 ? std::to_string(e.p) : std::to_string(e.p) + "/" + std::to_string(e.q);
}

}  // namespace

Theta::Theta(int d) : d_(d) {
  if (d < 1 || d > 3) throw_domain("Theta supports 1 <= d <= 3");
  lower_.resize(static_cast<std::size_t>(d * (d - 1) / 2));
}

Theta Theta::rational2(long p, long q) {
  Theta t(2);
  t.set_rational(1, 0, p, q);
  return t;
}

const ThetaEntry& Theta::entry(int k, int j) const {
  if (!(k > j && j >= 0 && k < d_)) throw_domain("Theta::entry needs k > j");
  return lower_[slot(k, j)];
}

double Theta::value(int k, int j) const {
  if (k == j) return 0.0;
  return k > j ? entry(k, j).value : -entry(j, k).value;
}

void Theta::set_rational(int k, int j, long p, long q) {
  if (q == 0) throw_domain("zero denominator in theta");
  if (!(k > j && j >= 0 && k < d_)) throw_domain("Theta entries are set for k > j");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const long g = std::gcd(p, q);
  ThetaEntry& e = lower_[slot(k, j)];
  e.p = p / (g == 0 ? 1 : g);
  e.q = q / (g == 0 ? 1 : g);
  e.value = static_cast<double>(e.p) / static_cast<double>(e.q);
  e.rational = true;
}

void Theta::set_real(int k, int j, double v) {
  if (!(k > j && j >= 0 && k < d_)) throw_domain("Theta entries are set for k > j");
  ThetaEntry& e = lower_[slot(k, j)];
  e = ThetaEntry{0, 1, v, false};
}

bool Theta::all_rational() const {
  for (const auto& e : lower_)
    if (!e.rational) return false;
  return true;
}

double Theta::phase(const LatticeVec& a, const LatticeVec& b) const {
  double frac = 0.0;
  for (int k = 1; k < d_; ++k)
    for (int j = 0; j < k; ++j) {
      const ThetaEntry& e = lower_[slot(k, j)];
      const long t = static_cast<long>(a[k]) * b[j];
      if (e.rational)
        frac += static_cast<double>(mod(mod(t, e.q) * mod(e.p, e.q), e.q)) / static_cast<double>(e.q);
      else
        frac += e.value * static_cast<double>(t);
    }
  return frac - std::floor(frac);
}

bool Theta::operator==(const Theta& o) const {
  if (d_ != o.d_) return false;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    const auto& a = lower_[i];
    const auto& b = o.lower_[i];
    if (a.rational != b.rational) return false;
    if (a.rational ? (a.p != b.p || a.q != b.q) : a.value != b.value) return false;
  }
  return true;
}

QTElement QTElement::unit(const Theta& theta) { return monomial(theta, {0, 0, 0}); }

QTElement QTElement::monomial(const Theta& theta, const LatticeVec& m, cd alpha) {
  QTElement x{theta, {}};
  x.coeffs[m] = alpha;
  return x;
}

cd QTElement::coeff(const LatticeVec& m) const {
  const auto it = coeffs.find(m);
  return it == coeffs.end() ? cd{0.0, 0.0} : it->second;
}

QTElement& QTElement::prune(double tol) {
  std::erase_if(coeffs, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
  return *this;
}

int QTElement::band() const {
  int b = -1;
  for (const auto& [m, a] : coeffs)
    if (a != cd{0.0, 0.0}) b = std::max(b, sup_norm(m));
  return b;
}

QTElement operator+(const QTElement& x, const QTElement& y) {
  require_same_theta(x, y);
  QTElement out = x;
  for (const auto& [m, a] : y.coeffs) out.coeffs[m] += a;
  return out;
}

QTElement operator-(const QTElement& x, const QTElement& y) { return x + cd{-1.0, 0.0} * y; }

QTElement operator*(cd lambda, const QTElement& x) {
  QTElement out = x;
  for (auto& [m, a] : out.coeffs) a *= lambda;
  return out;
}

cd qt_reorder_phase(const Theta& theta, const LatticeVec& m, const LatticeVec& n) {
  return std::polar(1.0, kTwoPi * theta.phase(m, n));
}

cd qt_adjoint_phase(const Theta& theta, const LatticeVec& m) { return std::polar(1.0, kTwoPi * theta.phase(m, m)); }

QTElement qt_mul(const QTElement& x, const QTElement& y) {
  require_same_theta(x, y);
  QTElement out{x.theta, {}};
  for (const auto& [m, a] : x.coeffs)
    for (const auto& [n, b] : y.coeffs)
      out.coeffs[{m[0] + n[0], m[1] + n[1], m[2] + n[2]}] += a * b * qt_reorder_phase(x.theta, m, n);
  return out;
}

QTElement qt_adjoint(const QTElement& x) {
  QTElement out{x.theta, {}};
  for (const auto& [m, a] : x.coeffs) out.coeffs[negate(m)] += std::conj(a) * qt_adjoint_phase(x.theta, m);
  return out;
}

cd qt_trace(const QTElement& x) { return x.coeff({0, 0, 0}); }

cd qt_fourier(const QTElement& x, const LatticeVec& m) {
  return qt_trace(qt_mul(qt_adjoint(QTElement::monomial(x.theta, m)), x));
}

QTElement qt_poisson(const QTElement& x, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw_domain("qt_poisson needs 0 <= r < 1");
  QTElement out = x;
  for (auto& [m, a] : out.coeffs) {
    const double len = euclidean_norm(m);
    a *= len == 0.0 ? 1.0 : std::pow(r, len);
  }
  return out;
}

QTElement qt_poisson_derivative(const QTElement& x, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw_domain("qt_poisson_derivative needs 0 <= r < 1");
  QTElement out = x;
  for (auto& [m, a] : out.coeffs) {
    const double len = euclidean_norm(m);
    a *= len == 0.0 ? 0.0 : len * std::pow(r, len - 1.0);
  }
  return out;
}

QTElement qt_apply_multiplier(const QTElement& x, const ScaleMultiplier& mult, double eps) {
  QTElement out = x;
  for (auto& [m, a] : out.coeffs) a *= mult(eps, m);
  return out;
}

Matrix ClockShiftRep::monomial(const LatticeVec& m) const {
  Matrix out = Matrix::Zero(q, q);
  for (long k = 0; k < q; ++k) {
    const long j = mod(k - m[1], q);
    out(j, k) = root_power(p, q, j * m[0]);
  }
  return out;
}

Matrix ClockShiftRep::operator()(const QTElement& x) const {
  if (x.theta.d() != 2 || !x.theta.entry(1, 0).rational || x.theta.entry(1, 0).p != p || x.theta.entry(1, 0).q != q)
    throw_domain("element theta does not match the representation");
  Matrix out = Matrix::Zero(q, q);
  for (const auto& [m, a] : x.coeffs) out += a * monomial(m);
  return out;
}

double ClockShiftRep::commutation_residual() const {
  const cd omega = root_power(p, q, 1);
  const Matrix id = Matrix::Identity(q, q);
  return std::max({op_norm(U2 * U1 - omega * U1 * U2), op_norm(U1.adjoint() * U1 - id),
                   op_norm(U2.adjoint() * U2 - id)});
}

ClockShiftRep clock_shift_rep(const Theta& theta) {
  if (theta.d() != 2) throw UnsupportedError("clock and shift representations exist for d = 2 only");
  const ThetaEntry& e = theta.entry(1, 0);
  if (!e.rational) throw UnsupportedError("clock and shift representations need rational theta");
  ClockShiftRep rep;
  rep.p = e.p;
  rep.q = e.q;
  rep.U1 = Matrix::Zero(rep.q, rep.q);
  rep.U2 = Matrix::Zero(rep.q, rep.q);
  for (long k = 0; k < rep.q; ++k) {
    rep.U1(k, k) = root_power(rep.p, rep.q, k);
    rep.U2(mod(k - 1, rep.q), k) = 1.0;
  }
  return rep;
}

OperatorField qt_transfer(const QTElement& x, const GridSpec& grid, const ClockShiftRep& rep) {
  if (grid.d != 2) throw_shape("transference lattice must be 2-dimensional");
  if (x.band() >= grid.N / 2) throw BandError("element support exceeds the lattice band");
  if (x.theta.d() != 2 || x.theta.entry(1, 0).p != rep.p || x.theta.entry(1, 0).q != rep.q)
    throw_domain("element theta does not match the representation");
  SpectrumField spec(grid, static_cast<int>(rep.q));
  for (const auto& [m, a] : x.coeffs) spec.coeff(m) += a * rep.monomial(m);
  return fft_inverse(spec);
}

OperatorField qt_cond_expectation(const OperatorField& F, const ClockShiftRep& rep) {
  if (F.grid().d != 2 || F.n() != rep.q) throw_shape("conditional expectation needs a 2-d field with n = q");
  const SpectrumField Fhat = fft_forward(F);
  SpectrumField out(F.grid(), F.n());
  const double inv_q = 1.0 / static_cast<double>(rep.q);
#pragma omp parallel for schedule(static)
  for (std::size_t slot = 0; slot < Fhat.size(); ++slot) {
    const Matrix R = rep.monomial(F.grid().frequency(slot));
    const cd c = (R.adjoint() * Matrix(Fhat.at(slot))).trace() * inv_q;
    out.at(slot) = c * R;
  }
  return fft_inverse(out);
}

double qt_lp_norm(const QTElement& x, double p, const GridSpec& grid, const ClockShiftRep& rep) {
  return lp_field_norm(qt_transfer(x, grid, rep), p);
}

const char* to_string(TraceConvention c) { return c == TraceConvention::normalized ? "normalized" : "unnormalized"; }

double qt_hardy_norm(const QTElement& x, double p, HardyMethod method, const GridSpec& grid, const ClockShiftRep& rep,
                     const QTHardyOptions& opts) {
  if (!(p >= 1.0)) throw_domain("qt_hardy_norm needs p >= 1");
  std::set<double> radii;
  for (const auto& [m, a] : x.coeffs)
    if (a != cd{0.0, 0.0} && euclidean_norm(m) > 0.0) radii.insert(euclidean_norm(m));
  const std::vector<double> r(radii.begin(), radii.end());
  // a central element has no frequency to test
  if (!r.empty()) {
    switch (method) {
      case HardyMethod::phi_radial:
      case HardyMethod::phi_conic:
        if (!check_nondegenerate(opts.hardy.phi, NondegMode::torus, r).pass)
          throw DegeneracyError(opts.hardy.phi.name() + " vanishes at a frequency of the element");
        break;
      case HardyMethod::phi_radial_discrete:
      case HardyMethod::phi_conic_discrete:
        if (!check_nondegenerate(opts.hardy.phi_discrete, NondegMode::discrete, r).pass)
          throw DegeneracyError(opts.hardy.phi_discrete.name() + " vanishes at a frequency of the element");
        break;
      default:
        break;
    }
  }
  const OperatorField xt = qt_transfer(x, grid, rep);
  double lp = lp_field_norm(hardy_square_function(xt, method, opts.hardy), p);
  if (opts.trace == TraceConvention::normalized && p != kInf) lp *= std::pow(static_cast<double>(rep.q), -1.0 / p);
  return std::abs(qt_trace(x)) + lp;
}

nlohmann::json qt_to_json(const QTElement& x) {
  const int d = x.theta.d();
  nlohmann::json theta = nlohmann::json::array();
  for (int k = 0; k < d; ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < d; ++j) {
      if (k == j) {
        row.push_back("0");
        continue;
      }
      const ThetaEntry& e = k > j ? x.theta.entry(k, j) : x.theta.entry(j, k);
      if (!e.rational) {
        row.push_back(k > j ? e.value : -e.value);
        continue;
      }
      ThetaEntry s = e;
      if (k < j) s.p = -s.p;
      row.push_back(rational_string(s));
    }
    theta.push_back(row);
  }
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [m, a] : x.coeffs) {
    nlohmann::json mv = nlohmann::json::array();
    for (int i = 0; i < d; ++i) mv.push_back(m[i]);
    coeffs.push_back({{"m", mv}, {"re", a.real()}, {"im", a.imag()}});
  }
  return {{"d", d}, {"theta", theta}, {"coeffs", coeffs}};
}

QTElement qt_from_json(const nlohmann::json& j) {
  try {
    const int d = j.at("d").get<int>();
    Theta theta(d);
    const auto& t = j.at("theta");
    for (int k = 1; k < d; ++k)
      for (int i = 0; i < k; ++i) {
        const auto& v = t.at(k).at(i);
        if (v.is_string()) {
          const std::string s = v.get<std::string>();
          const auto slash = s.find('/');
          const long p = std::stol(s.substr(0, slash));
          const long q = slash == std::string::npos ? 1 : std::stol(s.substr(slash + 1));
          theta.set_rational(k, i, p, q);
        } else {
          theta.set_real(k, i, v.get<double>());
        }
      }
    QTElement x{theta, {}};
    for (const auto& c : j.at("coeffs")) {
      LatticeVec m{0, 0, 0};
      for (int i = 0; i < d; ++i) m[i] = c.at("m").at(i).get<int>();
      x.coeffs[m] += cd{c.at("re").get<double>(), c.at("im").get<double>()};
    }
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed quantum torus element: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("malformed theta entry: ") + e.what());
  }
}

}  // namespace opharm
