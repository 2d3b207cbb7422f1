#include "opharm/check_suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "opharm/bmo.hpp"
#include "opharm/companion.hpp"
#include "opharm/corpus.hpp"
#include "opharm/experiments.hpp"
#include "opharm/hardy.hpp"
#include "opharm/quantum.hpp"
#include "opharm/riesz.hpp"
#include "opharm/square.hpp"

namespace opharm {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

OperatorField random_field(const GridSpec& grid, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cd> v(grid.num_points() * static_cast<std::size_t>(n * n));
  for (auto& x : v) x = {normal(rng), normal(rng)};
  return OperatorField(grid, n, std::move(v));
}

double max_abs(std::span<const cd> v) {
  double m = 0.0;
  for (const cd& x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(std::span<const cd> a, std::span<const cd> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Largest relative spread of the summary endpoints across seed runs.
double endpoint_spread(const std::vector<EquivalenceReport>& runs) {
  std::map<std::tuple<double, std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>> ends;
  for (const auto& r : runs)
    for (const auto& s : r.summary) {
      auto& e = ends[{s.p, s.method_a, s.method_b}];
      e.first.push_back(s.min);
      e.second.push_back(s.max);
    }
  double spread = 0.0;
  for (const auto& [key, e] : ends)
    for (const auto* v : {&e.first, &e.second}) {
      const auto [lo, hi] = std::minmax_element(v->begin(), v->end());
      spread = std::max(spread, *hi / *lo - 1.0);
    }
  return spread;
}

bool bands_finite(const EquivalenceReport& r) {
  for (const auto& s : r.summary)
    if (!(std::isfinite(s.min) && std::isfinite(s.max) && s.min > 0.0)) return false;
  return true;
}

double max_ratio_drift(const EquivalenceReport& a, const EquivalenceReport& b) {
  if (a.rows.size() != b.rows.size()) return kInf;
  double drift = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) drift = std::max(drift, rel_diff(a.rows[i].ratio, b.rows[i].ratio));
  return drift;
}

ExperimentConfig desk_config(const std::string& kind, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.seed = seed;
  cfg.d = 1;
  cfg.N = 32;
  cfg.n = 2;
  cfg.bandM = 6;
  cfg.corpus_size = 50;
  cfg.K = 128;
  return cfg;
}

ExperimentConfig qt_config(std::uint64_t seed) {
  ExperimentConfig cfg = desk_config("qt_hardy", seed);
  cfg.d = 2;
  cfg.n = 1;
  cfg.bandM = 4;
  return cfg;
}

CheckResult check_fft() {
  CheckResult r{1, "fft_plancherel", true, "", 0.0};
  std::mt19937_64 rng(11);
  double roundtrip = 0.0, pairing = 0.0, parseval = 0.0;
  for (const int d : {1, 2})
    for (const int N : {8, 16, 32, 64})
      for (const int n : {1, 2, 4}) {
        const GridSpec grid(d, N);
        const OperatorField f = random_field(grid, n, rng);
        const OperatorField g = random_field(grid, n, rng);
        const SpectrumField fh = fft_forward(f);
        const SpectrumField gh = fft_forward(g);
        const OperatorField back = fft_inverse(fh);
        roundtrip = std::max(roundtrip, max_abs_diff(back.raw(), f.raw()) / max_abs(f.raw()));
        const Matrix lhs = plancherel_pairing(f, g);
        const Matrix rhs = spectral_pairing(fh, gh);
        pairing = std::max(pairing, op_norm(lhs - rhs) / op_norm(lhs));
        double spec = 0.0;
        for (const cd& x : fh.raw()) spec += std::norm(x);
        const double l2 = lp_field_norm(f, 2.0);
        parseval = std::max(parseval, rel_diff(l2 * l2, spec));
      }
  r.pass = roundtrip <= 1e-10 && pairing <= 1e-10 && parseval <= 1e-10;
  r.detail = "roundtrip " + fmt(roundtrip) + ", pairing " + fmt(pairing) + ", parseval " + fmt(parseval);
  return r;
}

CheckResult check_reproducing() {
  CheckResult r{2, "reproducing_pairs", true, "", 0.0};
  std::ostringstream out;
  const MultiplierPair disc = build_companion(RadialSymbol::annulus_bump(), PairMode::discrete);
  r.pass &= disc.valid && disc.residual <= 1e-10;
  out << "annulus_bump(discrete) " << fmt(disc.residual);
  for (const RadialSymbol& sym : {RadialSymbol::d_poisson(), RadialSymbol::gauss_lp(), RadialSymbol::riesz_poisson(1.0)}) {
    const MultiplierPair pair = build_companion(sym, PairMode::continuous);
    r.pass &= pair.valid && pair.residual <= 1e-6;
    out << ", " << sym.name() << " " << fmt(pair.residual);
  }
  r.detail = out.str();
  return r;
}

CheckResult check_p2_identity() {
  CheckResult r{3, "poisson_p2_identity", true, "", 0.0};
  CorpusSpec spec;
  spec.seed = 1;
  const auto corpus = gen_corpus(spec);
  double worst = 0.0;
  for (const auto& item : corpus) {
    const double s = lp_field_norm(hardy_square_function(item.field, HardyMethod::poisson_radial), 2.0);
    worst = std::max(worst, rel_diff(s, 0.5 * lp_field_norm(item.field, 2.0)));
  }
  r.pass = worst <= 1e-3;
  r.detail = std::to_string(corpus.size()) + " fields, max relative error " + fmt(worst);
  return r;
}

CheckResult check_cone_factorization() {
  CheckResult r{4, "cone_factorization", true, "", 0.0};
  std::mt19937_64 rng(4);
  double worst = 0.0;
  const std::vector<std::pair<int, LatticeVec>> cases{{1, {1, 0, 0}}, {1, {3, 0, 0}}, {1, {7, 0, 0}},
                                                      {2, {1, 0, 0}}, {2, {2, 3, 0}}, {2, {5, -4, 0}}};
  for (const auto& [d, m] : cases) {
    const GridSpec grid(d, 32);
    std::normal_distribution<double> normal;
    Matrix a(2, 2);
    for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = cd{normal(rng), normal(rng)};
    const OperatorField f = OperatorField::single_mode(grid, m, a);
    const ScaleGrid sgrid = ScaleGrid::torus_default(grid, 128);
    const auto mult = radial_multiplier(RadialSymbol::gauss_lp());
    const OperatorField radial = square_fn(f, mult, sgrid, SquareKind::radial);
    const OperatorField conic = square_fn(f, mult, sgrid, SquareKind::conic);
    const double c = std::sqrt(unit_ball_volume(d));
    for (std::size_t p = 0; p < grid.num_points(); ++p)
      worst = std::max(worst, op_norm(conic.value(p) - c * radial.value(p)) / (c * op_norm(radial.value(p))));
  }
  r.pass = worst <= 0.02;
  r.detail = "max relative deviation " + fmt(worst);
  return r;
}

CheckResult check_derivative_identity() {
  CheckResult r{5, "poisson_derivative_identity", true, "", 0.0};
  CorpusSpec spec;
  spec.seed = 5;
  spec.size = 4;
  double worst = 0.0;
  const std::vector<double> eps{0.01, 0.03, 0.1, 0.3, 1.0};
  for (const int d : {1, 2}) {
    spec.d = d;
    spec.N = d == 1 ? 32 : 16;
    spec.bandM = d == 1 ? 6 : 3;
    for (const auto& item : gen_corpus(spec))
      for (const int k : {1, 2}) worst = std::max(worst, poisson_deriv_identity_check(item.field, k, eps).max_discrepancy);
  }
  r.pass = worst <= 1e-4;
  r.detail = "max relative discrepancy " + fmt(worst);
  return r;
}

CheckResult check_riesz_decay() {
  CheckResult r{6, "riesz_poisson_decay", true, "", 0.0};
  std::vector<double> radii;
  for (int i = 0; i <= 100; ++i) radii.push_back(std::pow(10.0, -2.0 + 5.0 * i / 100.0));
  std::ostringstream out;
  for (const auto& [alpha, sigma, d] : {std::tuple{1.0, 0.5, 1}, std::tuple{2.0, 1.0, 1}, std::tuple{1.0, 0.5, 2}}) {
    const DecayReport rep = bessel_decay_report(alpha, sigma, radii, d);
    r.pass &= rep.bounded;
    out << (out.tellp() > 0 ? ", " : "") << "(" << alpha << "," << sigma << "," << d << ") max " << fmt(rep.max_value)
        << " slope " << fmt(rep.tail_slope);
  }
  r.detail = out.str();
  return r;
}

CheckResult check_carleson_band() {
  CheckResult r{7, "carleson_bmo_band", true, "", 0.0};
  std::vector<EquivalenceReport> runs;
  std::ostringstream out;
  double width = 0.0;
  for (const std::uint64_t seed : {1, 2, 3}) {
    ExperimentConfig cfg = desk_config("carleson", seed);
    cfg.methods = {{"carleson", "bmo_squared"}};
    runs.push_back(run_experiment(cfg));
    const SummaryRow& s = runs.back().summary.at(0);
    width = std::max(width, std::log(s.max / s.min));
    out << "seed " << seed << " [" << fmt(s.min) << ", " << fmt(s.max) << "]; ";
  }
  const double spread = endpoint_spread(runs);
  r.pass = width <= 3.0 && spread < 0.1 && bands_finite(runs[0]);
  out << "width " << fmt(width) << ", endpoint spread " << fmt(spread);
  r.detail = out.str();
  return r;
}

CheckResult check_hardy_bands() {
  CheckResult r{8, "hardy_equivalence_bands", true, "", 0.0};
  double spread = 0.0, drift = 0.0;
  bool finite = true;
  for (const std::string kind : {"hardy_equiv", "hardy_equiv_discrete"}) {
    std::vector<EquivalenceReport> runs;
    for (const std::uint64_t seed : {1, 2, 3}) runs.push_back(run_experiment(desk_config(kind, seed)));
    for (const auto& run : runs) finite &= bands_finite(run) && run.violations.empty();
    spread = std::max(spread, endpoint_spread(runs));
    ExperimentConfig scaled = desk_config(kind, 1);
    scaled.scale = 7.3;
    drift = std::max(drift, max_ratio_drift(runs[0], run_experiment(scaled)));
  }
  r.pass = finite && spread < 0.1 && drift <= 1e-10;
  r.detail = std::string(finite ? "bands finite" : "non-finite band") + ", endpoint spread " + fmt(spread) +
             ", scaling drift " + fmt(drift);
  return r;
}

CheckResult check_quantum() {
  CheckResult r{9, "quantum_torus", true, "", 0.0};
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  auto random_element = [&](const Theta& theta, int radius) {
    QTElement x{theta, {}};
    for (int a = -radius; a <= radius; ++a)
      for (int b = -radius; b <= radius; ++b) x.coeffs[{a, b, 0}] = cd{normal(rng), normal(rng)};
    return x;
  };

  double commutation = 0.0, product = 0.0, adjoint_err = 0.0, isometry = 0.0, semigroup = 0.0, deriv = 0.0;
  double idempotence = 0.0, contraction = 0.0;
  for (const auto& [p, q] : {std::pair{0L, 1L}, std::pair{1L, 2L}, std::pair{1L, 3L}, std::pair{2L, 5L},
                             std::pair{1L, 4L}, std::pair{3L, 7L}}) {
    const Theta theta = Theta::rational2(p, q);
    const ClockShiftRep rep = clock_shift_rep(theta);
    commutation = std::max(commutation, rep.commutation_residual());
    const int w = static_cast<int>(std::max(1L, q - 1));
    const QTElement x = random_element(theta, w);
    const QTElement y = random_element(theta, w);
    const Matrix xy = rep(qt_mul(x, y));
    product = std::max(product, op_norm(xy - rep(x) * rep(y)) / op_norm(xy));
    adjoint_err = std::max(adjoint_err, op_norm(rep(qt_adjoint(x)) - rep(x).adjoint()) / op_norm(rep(x)));

    const GridSpec grid(2, 16);
    const QTElement small = random_element(theta, 3);
    double l2 = 0.0;
    for (const auto& [m, a] : small.coeffs) l2 += std::norm(a);
    isometry = std::max(isometry, rel_diff(qt_lp_norm(small, 2.0, grid, rep), std::sqrt(l2 * q)));

    const QTElement pr = qt_poisson(qt_poisson(small, 0.3), 0.7);
    const QTElement direct = qt_poisson(small, 0.21);
    for (const auto& [m, a] : direct.coeffs) semigroup = std::max(semigroup, std::abs(pr.coeff(m) - a) / std::abs(a));
    const double h = 1e-5;
    const QTElement dp = qt_poisson_derivative(small, 0.5);
    const QTElement fd = cd{0.5 / h, 0.0} * (qt_poisson(small, 0.5 + h) - qt_poisson(small, 0.5 - h));
    for (const auto& [m, a] : dp.coeffs)
      if (std::abs(a) > 0.0) deriv = std::max(deriv, std::abs(fd.coeff(m) - a) / std::abs(a));

    const OperatorField xt = qt_transfer(small, grid, rep);
    idempotence = std::max(idempotence, max_abs_diff(qt_cond_expectation(xt, rep).raw(), xt.raw()) / max_abs(xt.raw()));
    const OperatorField F = random_field(grid, static_cast<int>(q), rng);
    const OperatorField EF = qt_cond_expectation(F, rep);
    idempotence = std::max(idempotence, max_abs_diff(qt_cond_expectation(EF, rep).raw(), EF.raw()) / max_abs(EF.raw()));
    for (const double pe : {1.0, 2.0, kInf}) {
      if (pe != 2.0 && grid.N % q != 0) continue;
      contraction = std::max(contraction, lp_field_norm(EF, pe) / lp_field_norm(F, pe) - 1.0);
    }
  }

  // commutative limit: theta = 0 against the scalar d = 2 run
  ExperimentConfig qcfg = qt_config(1);
  qcfg.theta = {"0"};
  ExperimentConfig ccfg = qcfg;
  ccfg.kind = "hardy_equiv";
  ccfg.methods = default_methods("qt_hardy");
  const double limit = max_ratio_drift(run_experiment(qcfg), run_experiment(ccfg));

  std::vector<EquivalenceReport> runs;
  bool finite = true;
  for (const std::uint64_t seed : {1, 2, 3}) {
    runs.push_back(run_experiment(qt_config(seed)));
    finite &= bands_finite(runs.back()) && runs.back().violations.empty();
  }
  const double spread = endpoint_spread(runs);

  r.pass = commutation <= 1e-12 && product <= 1e-10 && adjoint_err <= 1e-10 && isometry <= 1e-10 &&
           semigroup <= 1e-14 && deriv <= 1e-6 && idempotence <= 1e-10 && contraction <= 1e-10 && limit <= 1e-8 &&
           finite && spread < 0.1;
  r.detail = "commutation " + fmt(commutation) + ", product " + fmt(product) + ", adjoint " + fmt(adjoint_err) +
             ", isometry " + fmt(isometry) + ", semigroup " + fmt(semigroup) + ", d/dr " + fmt(deriv) +
             ", E idempotence " + fmt(idempotence) + ", E contraction excess " + fmt(contraction) +
             ", theta=0 limit " + fmt(limit) + ", band spread " + fmt(spread);
  return r;
}

}  // namespace

CheckResult run_check(int id) {
  const auto start = Clock::now();
  CheckResult r;
  try {
    switch (id) {
      case 1: r = check_fft(); break;
      case 2: r = check_reproducing(); break;
      case 3: r = check_p2_identity(); break;
      case 4: r = check_cone_factorization(); break;
      case 5: r = check_derivative_identity(); break;
      case 6: r = check_riesz_decay(); break;
      case 7: r = check_carleson_band(); break;
      case 8: r = check_hardy_bands(); break;
      case 9: r = check_quantum(); break;
      default: r = {id, "unknown", false, "no such check", 0.0};
    }
  } catch (const std::exception& e) {
    r = {id, "check_" + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (id == 1 && r.seconds >= 10.0) {
    r.pass = false;
    r.detail += ", too slow";
  }
  return r;
}

std::vector<CheckResult> run_check_suite() {
  std::vector<CheckResult> out;
  for (int id = 1; id <= kNumChecks; ++id) out.push_back(run_check(id));
  return out;
}

nlohmann::json to_json(const CheckResult& r) {
  return {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}};
}

}  // namespace opharm
