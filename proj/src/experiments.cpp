#include "opharm/experiments.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <set>

#include "opharm/bmo.hpp"
#include "opharm/error.hpp"
#include "opharm/hardy.hpp"
#include "opharm/kernels.hpp"

namespace opharm {

namespace {

using MethodPairs = std::vector<std::pair<std::string, std::string>>;

const std::vector<std::string> kKinds{"hardy_equiv", "hardy_equiv_discrete", "carleson",
                                      "bmo_poisson", "radial_conic",         "qt_hardy"};

Theta parse_theta(const std::string& text) {
  const auto slash = text.find('/');
  try {
    const long p = std::stol(text.substr(0, slash));
    const long q = slash == std::string::npos ? 1 : std::stol(text.substr(slash + 1));
    return Theta::rational2(p, q);
  } catch (const std::logic_error&) {
    throw ConfigError("theta entries must be rationals 'p/q', got '" + text + "'");
  }
}

ScaleGrid scale_grid(const ExperimentConfig& cfg) {
  const double lo = cfg.eps_min > 0.0 ? cfg.eps_min : 1e-3 / cfg.N;
  return ScaleGrid::log_spaced(lo, cfg.eps_max, cfg.K);
}

HardyConfig hardy_config(const ExperimentConfig& cfg) {
  HardyConfig h;
  h.phi = parse_symbol(cfg.phi);
  h.phi_discrete = parse_symbol(cfg.phi_discrete);
  h.alpha = cfg.alpha;
  h.grid = scale_grid(cfg);
  return h;
}

double ratio_of(double a, double b) {
  if (a == 0.0 && b == 0.0) return 1.0;
  return a / b;
}

std::string format_p(double p) { return p == kInf ? "inf" : std::to_string(p); }

// Caches one value per (name, p) for a single corpus item.
class NormCache {
 public:
  template <class Fn>
  double get(const std::string& name, double p, Fn&& compute) {
    const auto key = std::make_pair(name, p);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = compute();
    cache_.emplace(key, v);
    return v;
  }

 private:
  std::map<std::pair<std::string, double>, double> cache_;
};

// Square function plus mean term of one Hardy method, for every p.
struct HardyEvaluator {
  const OperatorField& f;
  const HardyConfig& cfg;
  std::map<std::string, OperatorField> squares;

  const OperatorField& square(const std::string& name) {
    auto it = squares.find(name);
    if (it == squares.end())
      it = squares.emplace(name, hardy_square_function(f, parse_hardy_method(name), cfg)).first;
    return it->second;
  }

  double norm(const std::string& name, double p) {
    return schatten_norm(field_mean(f), p) + lp_field_norm(square(name), p);
  }
};

bool is_hardy_name(const std::string& name) {
  for (const HardyMethod m : all_hardy_methods())
    if (name == to_string(m)) return true;
  return false;
}

void check_method_names(const ExperimentConfig& cfg, const MethodPairs& pairs) {
  std::set<std::string> allowed;
  if (cfg.kind == "hardy_equiv" || cfg.kind == "hardy_equiv_discrete" || cfg.kind == "qt_hardy") {
    for (const auto& [a, b] : pairs)
      for (const auto& name : {a, b})
        if (!is_hardy_name(name)) throw ConfigError("unknown Hardy method '" + name + "'");
    return;
  }
  if (cfg.kind == "carleson") allowed = {"carleson", "carleson_discrete", "bmo_squared"};
  if (cfg.kind == "bmo_poisson") allowed = {"poisson_bmo", "bmo"};
  if (cfg.kind == "radial_conic") allowed = {"phi_radial", "conic_derivatives"};
  for (const auto& [a, b] : pairs)
    for (const auto& name : {a, b})
      if (!allowed.count(name)) throw ConfigError("method '" + name + "' is not available for kind " + cfg.kind);
}

void check_row(const EquivalenceRow& row, std::vector<std::string>& violations) {
  const bool finite = std::isfinite(row.norm_a) && std::isfinite(row.norm_b) && row.norm_a >= 0.0 && row.norm_b >= 0.0;
  const bool zero = row.norm_a == 0.0 && row.norm_b == 0.0;
  if (!finite || (!zero && !(std::isfinite(row.ratio) && row.ratio > 0.0)))
    violations.push_back("field " + std::to_string(row.field_id) + ", p=" + format_p(row.p) + ", " + row.method_a +
                         "/" + row.method_b + ": ratio " + std::to_string(row.ratio) + " is not finite and positive");
}

// (sum_{|alpha|_1 <= d} S_{D^alpha Phi}(f)^2)^{1/2}
OperatorField conic_derivative_aggregate(const OperatorField& f, const RadialSymbol& sym, const ScaleGrid& sgrid) {
  const int d = f.grid().d;
  std::vector<cd> total(f.raw().size(), cd{0.0, 0.0});
  for (int a = 0; a <= d; ++a)
    for (int b = 0; b <= (d >= 2 ? d - a : 0); ++b)
      for (int c = 0; c <= (d >= 3 ? d - a - b : 0); ++c) {
        const auto sq = square_fn_squares(f, derivative_multiplier(sym, {a, b, c}), sgrid, SquareKind::conic);
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += sq[i];
      }
  return kernels::psd_sqrt_field(f.grid(), f.n(), total);
}

std::vector<double> carleson_exponents(const ExperimentConfig& cfg) {
  std::vector<double> out{kInf};
  if (cfg.n == 1)
    for (const double p : cfg.p_list)
      if (p > 2.0 && p != kInf) out.push_back(p);
  return out;
}

template <class RowFn>
std::vector<EquivalenceRow> parallel_rows(int count, RowFn&& rows_for) {
  std::vector<std::vector<EquivalenceRow>> per(static_cast<std::size_t>(count));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      per[static_cast<std::size_t>(i)] = rows_for(i);
    } catch (...) {
#pragma omp critical(opharm_experiment_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  std::vector<EquivalenceRow> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

EquivalenceRow make_row(int id, double p, const std::string& a, const std::string& b, double na, double nb) {
  return {id, p, a, b, na, nb, ratio_of(na, nb)};
}

}  // namespace

std::vector<std::string> experiment_kinds() { return kKinds; }

MethodPairs default_methods(const std::string& kind) {
  if (kind == "hardy_equiv")
    return {{"phi_radial", "poisson_radial"},
            {"phi_conic", "poisson_radial"},
            {"poisson_conic", "poisson_radial"},
            {"riesz_poisson_k", "poisson_radial"},
            {"phi_conic", "phi_radial"}};
  if (kind == "hardy_equiv_discrete")
    return {{"phi_radial_discrete", "poisson_radial"},
            {"phi_conic_discrete", "poisson_radial"},
            {"phi_radial_discrete", "phi_radial"},
            {"phi_conic_discrete", "phi_conic"}};
  if (kind == "carleson") return {{"carleson", "bmo_squared"}, {"carleson_discrete", "bmo_squared"}};
  if (kind == "bmo_poisson") return {{"poisson_bmo", "bmo"}};
  if (kind == "radial_conic") return {{"phi_radial", "conic_derivatives"}};
  if (kind == "qt_hardy") return {{"phi_radial", "poisson_radial"}, {"phi_radial_discrete", "poisson_radial"}};
  throw ConfigError("unknown experiment kind '" + kind + "'");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  static const std::set<std::string> known{"kind",  "seed",     "d",           "N",         "n",       "bandM",
                                           "p_list", "phi",     "phi_discrete", "alpha",    "eps_min", "eps_max",
                                           "K",      "theta",   "corpus_size", "zero_mean", "hermitian", "scale",
                                           "adjoint", "shifts", "methods"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
  try {
    auto get = [&j](const char* key, auto& dst) {
      if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
    };
    get("kind", cfg.kind);
    get("seed", cfg.seed);
    get("d", cfg.d);
    get("N", cfg.N);
    get("n", cfg.n);
    get("bandM", cfg.bandM);
    if (j.contains("p_list")) {
      cfg.p_list.clear();
      for (const auto& p : j.at("p_list"))
        cfg.p_list.push_back(p.is_string() && p.get<std::string>() == "inf" ? kInf : p.get<double>());
    }
    get("phi", cfg.phi);
    get("phi_discrete", cfg.phi_discrete);
    get("alpha", cfg.alpha);
    get("eps_min", cfg.eps_min);
    get("eps_max", cfg.eps_max);
    get("K", cfg.K);
    get("theta", cfg.theta);
    get("corpus_size", cfg.corpus_size);
    get("zero_mean", cfg.zero_mean);
    get("hermitian", cfg.hermitian);
    get("scale", cfg.scale);
    get("adjoint", cfg.adjoint);
    get("shifts", cfg.shifts);
    if (j.contains("methods"))
      for (const auto& pr : j.at("methods")) cfg.methods.emplace_back(pr.at(0).get<std::string>(), pr.at(1).get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json p = nlohmann::json::array();
  for (const double v : cfg.p_list) p.push_back(v == kInf ? nlohmann::json("inf") : nlohmann::json(v));
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& [a, b] : cfg.methods) methods.push_back({a, b});
  return {{"kind", cfg.kind},
          {"seed", cfg.seed},
          {"d", cfg.d},
          {"N", cfg.N},
          {"n", cfg.n},
          {"bandM", cfg.bandM},
          {"p_list", p},
          {"phi", cfg.phi},
          {"phi_discrete", cfg.phi_discrete},
          {"alpha", cfg.alpha},
          {"eps_min", cfg.eps_min},
          {"eps_max", cfg.eps_max},
          {"K", cfg.K},
          {"theta", cfg.theta},
          {"corpus_size", cfg.corpus_size},
          {"zero_mean", cfg.zero_mean},
          {"hermitian", cfg.hermitian},
          {"scale", cfg.scale},
          {"adjoint", cfg.adjoint},
          {"shifts", cfg.shifts},
          {"methods", methods}};
}

CorpusSpec corpus_spec(const ExperimentConfig& cfg) {
  CorpusSpec s;
  s.seed = cfg.seed;
  s.d = cfg.d;
  s.N = cfg.N;
  s.n = cfg.n;
  s.bandM = cfg.bandM;
  s.size = cfg.corpus_size;
  s.zero_mean = cfg.zero_mean;
  s.hermitian = cfg.hermitian;
  s.scale = cfg.scale;
  s.adjoint = cfg.adjoint;
  return s;
}

void validate(const ExperimentConfig& cfg) {
  bool known = false;
  for (const auto& k : kKinds) known |= k == cfg.kind;
  if (!known) throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
  validate(corpus_spec(cfg));
  if (cfg.p_list.empty()) throw ConfigError("p_list is empty");
  for (const double p : cfg.p_list)
    if (!(p >= 1.0)) throw ConfigError("every p must be at least 1");
  if (cfg.K < 2 || !(cfg.eps_max > 0.0) || cfg.eps_min < 0.0 || (cfg.eps_min > 0.0 && cfg.eps_min >= cfg.eps_max))
    throw ConfigError("invalid scale grid parameters");
  if (!(cfg.scale != 0.0 && std::isfinite(cfg.scale))) throw ConfigError("scale must be finite and nonzero");
  if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be positive");
  parse_symbol(cfg.phi);
  parse_symbol(cfg.phi_discrete);
  parse_shift_mode(cfg.shifts);
  if (cfg.kind == "qt_hardy") {
    if (cfg.d != 2 || cfg.n != 1) throw ConfigError("qt_hardy needs d = 2 and n = 1 (the coefficient corpus)");
    if (cfg.theta.empty()) throw ConfigError("qt_hardy needs at least one theta");
    for (const auto& t : cfg.theta) parse_theta(t);
  }
  check_method_names(cfg, cfg.methods.empty() ? default_methods(cfg.kind) : cfg.methods);
}

std::vector<SummaryRow> summarize(const std::vector<EquivalenceRow>& rows) {
  std::vector<SummaryRow> out;
  std::vector<double> log_sums;
  for (const auto& r : rows) {
    std::size_t i = 0;
    while (i < out.size() && !(out[i].p == r.p && out[i].method_a == r.method_a && out[i].method_b == r.method_b)) ++i;
    if (i == out.size()) {
      out.push_back({r.p, r.method_a, r.method_b, 0, r.ratio, r.ratio, 0.0});
      log_sums.push_back(0.0);
    }
    SummaryRow& s = out[i];
    ++s.count;
    s.min = std::min(s.min, r.ratio);
    s.max = std::max(s.max, r.ratio);
    log_sums[i] += std::log(r.ratio);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].geo_mean = std::exp(log_sums[i] / static_cast<double>(out[i].count));
  return out;
}

EquivalenceReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const MethodPairs pairs = cfg.methods.empty() ? default_methods(cfg.kind) : cfg.methods;
  EquivalenceReport report;
  report.kind = cfg.kind;

  const HardyConfig hcfg = hardy_config(cfg);
  const bool default_grid = cfg.eps_min == 0.0 && cfg.eps_max >= 1.0 && cfg.K >= 64;
  std::vector<std::string> violations;

  if (cfg.kind == "qt_hardy") {
    const auto corpus = gen_corpus(corpus_spec(cfg));
    const GridSpec grid(2, cfg.N);
    const auto radii = lattice_radii(grid);
    if (!check_nondegenerate(hcfg.phi, NondegMode::torus, radii).pass)
      throw DegeneracyError(hcfg.phi.name() + " is degenerate on the lattice");
    if (!check_nondegenerate(hcfg.phi_discrete, NondegMode::discrete, radii).pass)
      throw DegeneracyError(hcfg.phi_discrete.name() + " is degenerate on the lattice");
    for (const auto& t : cfg.theta) {
      const Theta theta = parse_theta(t);
      const ClockShiftRep rep = clock_shift_rep(theta);
      const std::string tag = "[theta=" + t + "]";
      auto rows = parallel_rows(static_cast<int>(corpus.size()), [&](int i) {
        const QTElement x = element_from_field(corpus[static_cast<std::size_t>(i)].field, theta);
        const OperatorField xt = qt_transfer(x, grid, rep);
        HardyEvaluator eval{xt, hcfg, {}};
        const double mean = std::abs(qt_trace(x));
        std::vector<EquivalenceRow> out;
        for (const double p : cfg.p_list)
          for (const auto& [a, b] : pairs) {
            const double na = mean + lp_field_norm(eval.square(a), p);
            const double nb = mean + lp_field_norm(eval.square(b), p);
            out.push_back(make_row(i, p, a + tag, b + tag, na, nb));
          }
        return out;
      });
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
  } else {
    const auto corpus = gen_corpus(corpus_spec(cfg));
    const CubeFamily family(GridSpec(cfg.d, cfg.N), -1, parse_shift_mode(cfg.shifts));
    MultiplierPair cont_pair, disc_pair;
    if (cfg.kind == "carleson") {
      cont_pair = build_companion(hcfg.phi, PairMode::continuous);
      disc_pair = build_companion(hcfg.phi_discrete, PairMode::discrete);
    }
    report.rows = parallel_rows(static_cast<int>(corpus.size()), [&](int i) {
      const OperatorField& f = corpus[static_cast<std::size_t>(i)].field;
      std::vector<EquivalenceRow> out;
      NormCache cache;
      if (cfg.kind == "hardy_equiv" || cfg.kind == "hardy_equiv_discrete") {
        HardyEvaluator eval{f, hcfg, {}};
        for (const double p : cfg.p_list)
          for (const auto& [a, b] : pairs) out.push_back(make_row(i, p, a, b, eval.norm(a, p), eval.norm(b, p)));
        if (default_grid) {
          // ||s(f)||_2 = ||f - fhat(0)||_2 / 2 for the Poisson radial square function
          const OperatorField centred = f - OperatorField::constant(f.grid(), field_mean(f));
          const double want = 0.5 * lp_field_norm(centred, 2.0);
          const double got = lp_field_norm(eval.square("poisson_radial"), 2.0);
          if (std::abs(got - want) > 1e-3 * std::max(want, 1e-300) && want > 0.0) {
#pragma omp critical(opharm_experiment_violation)
            violations.push_back("field " + std::to_string(i) + ": Poisson p=2 identity off by " +
                                 std::to_string(std::abs(got - want) / want));
          }
        }
      } else if (cfg.kind == "carleson") {
        for (const double q : carleson_exponents(cfg))
          for (const auto& [a, b] : pairs) {
            auto value = [&](const std::string& name) {
              return cache.get(name, q, [&] {
                if (name == "carleson") return carleson_norm(f, cont_pair, family, q, {hcfg.grid, false}).sup_norm;
                if (name == "carleson_discrete") return discrete_carleson_norm(f, disc_pair, family).sup_norm;
                const double b = bmo_norm(f, family, q);
                return b * b;
              });
            };
            out.push_back(make_row(i, q, a, b, value(a), value(b)));
          }
      } else if (cfg.kind == "bmo_poisson") {
        for (const auto& [a, b] : pairs) {
          auto value = [&](const std::string& name) {
            return cache.get(name, kInf, [&] { return name == "bmo" ? bmo_norm(f, family) : poisson_bmo_norm(f); });
          };
          out.push_back(make_row(i, kInf, a, b, value(a), value(b)));
        }
      } else if (cfg.kind == "radial_conic") {
        const OperatorField radial = hardy_square_function(f, HardyMethod::phi_radial, hcfg);
        const OperatorField conic = conic_derivative_aggregate(f, hcfg.phi, *hcfg.grid);
        for (const double p : cfg.p_list)
          for (const auto& [a, b] : pairs) {
            const double na = lp_field_norm(a == "phi_radial" ? radial : conic, p);
            const double nb = lp_field_norm(b == "phi_radial" ? radial : conic, p);
            out.push_back(make_row(i, p, a, b, na, nb));
          }
      }
      return out;
    });
  }
  for (const auto& row : report.rows) check_row(row, violations);
  report.violations = std::move(violations);
  report.summary = summarize(report.rows);
  return report;
}

}  // namespace opharm
