#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "opharm/corpus.hpp"
#include "opharm/error.hpp"
#include "opharm/experiments.hpp"
#include "opharm/hardy.hpp"
#include "opharm/report.hpp"

using namespace opharm;

namespace {

ExperimentConfig small_config(const std::string& kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.seed = 5;
  cfg.N = 16;
  cfg.bandM = 4;
  cfg.corpus_size = 8;
  cfg.K = 48;
  cfg.p_list = {1.0, 2.0};
  return cfg;
}

}  // namespace

TEST_CASE("corpus generation") {
  CorpusSpec spec;
  spec.seed = 42;
  const auto a = gen_corpus(spec);
  const auto b = gen_corpus(spec);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == b[i].label);
    CHECK(std::equal(a[i].field.raw().begin(), a[i].field.raw().end(), b[i].field.raw().begin()));
  }
  CHECK(a[0].label == "lacunary");
  CHECK(a[1].label == "single_mode");
  CHECK(a[2].label == "gaussian");

  double power = 0.0;
  std::size_t count = 0;
  for (const auto& item : a) {
    const auto fhat = fft_forward(item.field);
    CHECK(field_mean(item.field).norm() <= 1e-14 * (1.0 + lp_field_norm(item.field, kInf)));
    CHECK(fhat.band() <= spec.bandM);
    if (item.label != "gaussian") continue;
    for (int m = -spec.bandM; m <= spec.bandM; ++m) {
      if (m == 0) continue;
      const Matrix c = fhat.coeff({m, 0, 0});
      for (int i = 0; i < c.size(); ++i) power += std::norm(c.data()[i]);
      count += static_cast<std::size_t>(c.size());
    }
  }
  // |entry|^2 is exponential with mean 1 and unit variance
  const double mean = power / static_cast<double>(count);
  CHECK(std::abs(mean - 1.0) <= 3.0 / std::sqrt(static_cast<double>(count)));

  spec.seed = 43;
  CHECK_FALSE(std::equal(a[5].field.raw().begin(), a[5].field.raw().end(), gen_corpus(spec)[5].field.raw().begin()));

  spec.hermitian = true;
  for (const auto& item : gen_corpus(spec)) CHECK(item.field.hermitian());
  spec.bandM = 16;
  CHECK_THROWS_AS(gen_corpus(spec), ConfigError);
}

TEST_CASE("configuration") {
  const auto cfg = small_config("carleson");
  const auto back = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(back) == config_to_json(cfg));
  auto j = config_to_json(cfg);
  j["colour"] = "blue";
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  auto bad = cfg;
  bad.kind = "fourier";
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.p_list = {0.5};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = small_config("hardy_equiv");
  bad.methods = {{"phi_radial", "nonsense"}};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = small_config("qt_hardy");
  CHECK_THROWS_AS(validate(bad), ConfigError);
  for (const auto& kind : experiment_kinds()) CHECK_FALSE(default_methods(kind).empty());
}

TEST_CASE("constants give unit ratios") {
  const GridSpec grid(1, 16);
  Matrix a(2, 2);
  a << 1.0, 2.0, 0.0, cd(0, 1);
  const auto c = OperatorField::constant(grid, a);
  for (const auto& [ma, mb] : default_methods("hardy_equiv"))
    for (const double p : {1.0, 2.0, 4.0})
      CHECK(hardy_norm(c, p, parse_hardy_method(ma)) == doctest::Approx(hardy_norm(c, p, parse_hardy_method(mb))));
}

TEST_CASE("hardy_equiv run") {
  auto cfg = small_config("hardy_equiv");
  cfg.phi = "d_poisson";
  cfg.methods = {{"phi_radial", "poisson_radial"}, {"phi_conic", "phi_radial"}};
  const auto rep = run_experiment(cfg);
  CHECK(rep.violations.empty());
  CHECK(rep.rows.size() == cfg.p_list.size() * 2 * 8);
  for (const auto& r : rep.rows) {
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio == doctest::Approx(r.norm_a / r.norm_b).epsilon(1e-14));
    if (r.p == 2.0 && r.method_b == "poisson_radial") CHECK(std::abs(r.ratio - 1.0) <= 1e-3);
  }
  for (const auto& s : rep.summary) {
    double logs = 0.0;
    std::size_t n = 0;
    for (const auto& r : rep.rows)
      if (r.p == s.p && r.method_a == s.method_a && r.method_b == s.method_b) {
        logs += std::log(r.ratio);
        ++n;
      }
    CHECK(n == s.count);
    CHECK(std::abs(s.geo_mean - std::exp(logs / static_cast<double>(n))) <= 1e-12 * s.geo_mean);
  }

  const auto again = run_experiment(cfg);
  CHECK(report_to_json(again) == report_to_json(rep));

  auto scaled = cfg;
  scaled.scale = 7.3;
  const auto srep = run_experiment(scaled);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) CHECK(std::abs(srep.rows[i].ratio - rep.rows[i].ratio) <= 1e-10);

  auto adj = cfg;
  adj.adjoint = true;
  const auto arep = run_experiment(adj);
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    if (rep.rows[i].p == 2.0 && rep.rows[i].method_a == "phi_radial") {
      CHECK(arep.rows[i].norm_a == doctest::Approx(rep.rows[i].norm_a).epsilon(1e-10));
      CHECK(arep.rows[i].norm_b == doctest::Approx(rep.rows[i].norm_b).epsilon(1e-10));
    }
}

TEST_CASE("qt_hardy at theta = 0 reproduces the commutative run") {
  auto q = small_config("qt_hardy");
  q.d = 2;
  q.n = 1;
  q.bandM = 3;
  q.corpus_size = 5;
  q.theta = {"0"};
  q.methods = {{"phi_radial", "poisson_radial"}};
  auto c = q;
  c.kind = "hardy_equiv";
  const auto qr = run_experiment(q);
  const auto cr = run_experiment(c);
  REQUIRE(qr.rows.size() == cr.rows.size());
  for (std::size_t i = 0; i < qr.rows.size(); ++i) {
    CHECK(qr.rows[i].field_id == cr.rows[i].field_id);
    CHECK(std::abs(qr.rows[i].ratio - cr.rows[i].ratio) <= 1e-8);
  }
  CHECK(qr.rows[0].method_a.find("[theta=0]") != std::string::npos);
}

TEST_CASE("other kinds run cleanly") {
  for (const std::string kind : {"hardy_equiv_discrete", "carleson", "bmo_poisson", "radial_conic"}) {
    auto cfg = small_config(kind);
    cfg.corpus_size = 4;
    cfg.n = kind == "carleson" ? 1 : 2;
    cfg.p_list = {2.0, 4.0};
    const auto rep = run_experiment(cfg);
    CHECK_MESSAGE(rep.violations.empty(), kind);
    CHECK_FALSE(rep.rows.empty());
    for (const auto& r : rep.rows) CHECK(r.ratio > 0.0);
  }
}

TEST_CASE("reports") {
  EquivalenceReport empty;
  empty.kind = "hardy_equiv";
  std::ostringstream out;
  write_csv(empty, out);
  CHECK(out.str() == "field_id,p,method_a,method_b,norm_a,norm_b,ratio\n");

  EquivalenceReport rep;
  rep.kind = "carleson";
  rep.rows = {{0, kInf, "carleson", "bmo_squared", 0.1, 0.3, 1.0 / 3.0},
              {1, kInf, "carleson", "bmo_squared", 2.5e-17, 1e300, 2.5e-317},
              {0, 4.0, "carleson", "bmo_squared", 1.0, 1.0, 1.0}};
  rep.summary = summarize(rep.rows);
  rep.violations = {"example"};
  const auto back = report_from_json(nlohmann::json::parse(report_to_json(rep).dump()));
  REQUIRE(back.rows.size() == rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(back.rows[i].p == rep.rows[i].p);
    CHECK(back.rows[i].norm_a == rep.rows[i].norm_a);
    CHECK(back.rows[i].ratio == rep.rows[i].ratio);
    CHECK(back.rows[i].method_b == rep.rows[i].method_b);
  }
  CHECK(back.summary.size() == 2);
  CHECK(back.violations == rep.violations);
  CHECK(report_to_json(rep)["rows"][0]["p"] == "inf");

  std::ostringstream csv;
  write_csv(rep, csv);
  CHECK(csv.str().find("0,inf,carleson,bmo_squared,0.10000000000000001,") != std::string::npos);

  const auto hist = ratio_histogram(rep);
  int total = 0;
  for (const auto& h : hist) {
    CHECK(h["counts"].size() == 32);
    for (const int c : h["counts"]) total += c;
  }
  CHECK(total == 3);

  const auto dir = std::filesystem::temp_directory_path() / "opharm_report_test";
  std::filesystem::create_directories(dir);
  emit_report(rep, ReportFormat::json, dir / "carleson.json");
  CHECK(std::filesystem::exists(dir / "carleson_hist.json"));
  std::ifstream in(dir / "carleson.json");
  CHECK(report_from_json(nlohmann::json::parse(in)).rows.size() == 3);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit_report(rep, ReportFormat::csv, dir / "missing" / "x.csv"), IoError);
  CHECK_THROWS_AS(parse_report_format("xml"), ConfigError);
}
