#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mixedframe/app.hpp"
#include "mixedframe/errors.hpp"

using namespace mixedframe;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mixedframe_app_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("ids parse and print") {
  for (auto id : {app::FigureId::A1A2, app::FigureId::A1A2Diff, app::FigureId::GaussianSmear}) {
    CHECK(app::parse_figure_id(app::to_string(id)) == id);
  }
  for (auto id : {app::DemoId::Thermal, app::DemoId::GalileiBoost, app::DemoId::Semigroup}) {
    CHECK(app::parse_demo_id(app::to_string(id)) == id);
  }
  CHECK_THROWS_AS(app::parse_figure_id("fig3"), ConfigError);
  CHECK_THROWS_AS(app::parse_demo_id(""), ConfigError);
}

TEST_CASE("config text") {
  const auto o = app::parse_config_text("# comment\n alpha = 0.5  # trailing\n\ngrid-n=512\nout = results\n");
  CHECK(o.at("alpha") == "0.5");
  CHECK(o.at("grid_n") == "512");
  CHECK(o.at("out") == "results");
  CHECK_THROWS_AS(app::parse_config_text("alpha 0.5\n"), ConfigError);
  CHECK_THROWS_AS(app::parse_config_text("alpha =\n"), ConfigError);

  app::Parameters p;
  app::apply_overrides(p, o);
  CHECK(p.alpha == 0.5);
  CHECK(p.grid_n == 512);
  CHECK_THROWS_AS(app::apply_overrides(p, {{"alpha", "abc"}}), ConfigError);
  CHECK_THROWS_AS(app::apply_overrides(p, {{"grid_n", "5.5"}}), ConfigError);
  CHECK_THROWS_AS(app::apply_overrides(p, {{"gamma", "1"}}), ConfigError);
}

TEST_CASE("validation") {
  app::Parameters p;
  CHECK_NOTHROW(app::validate(p));
  for (int n : {128, 300, 16384}) {
    p = {};
    p.grid_n = n;
    CHECK_THROWS_AS(app::validate(p), ConfigError);
  }
  p = {};
  p.alpha = -1.0;
  CHECK_THROWS_AS(app::validate(p), ConfigError);
  p = {};
  p.extent = 10.0;  // 16 max(alpha, sigma) + 4 |a2| = 26
  CHECK_THROWS_AS(app::validate(p), ConfigError);
  p = {};
  p.quad_order = 8;
  CHECK_THROWS_AS(app::validate(p), ConfigError);
  p = {};
  p.beta = 2.0;
  p.temperature = 1.0;
  CHECK_THROWS_AS(app::validate(p), ConfigError);
  p.temperature = 0.5;
  CHECK_NOTHROW(app::validate(p));
  CHECK(p.effective_beta() == 2.0);
  p = {};
  p.temperature = 4.0;
  CHECK(p.effective_beta() == 0.25);
}

TEST_CASE("precedence: defaults < config file < flags; MIXEDFRAME_OUT fallback") {
  const auto dir = scratch("precedence");
  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "alpha = 0.5\nsigma = 0.8\nout = " << (dir / "from_file").string() << "\n";

  auto c = app::resolve_config({}, cfg, {{"alpha", "0.6"}}, std::nullopt);
  CHECK(c.params.alpha == 0.6);
  CHECK(c.params.sigma == 0.8);
  CHECK(c.params.a2 == 2.5);
  CHECK(c.output_dir == dir / "from_file");

  c = app::resolve_config({}, cfg, {}, dir / "flag");
  CHECK(c.output_dir == dir / "flag");

  ::setenv("MIXEDFRAME_OUT", (dir / "env").c_str(), 1);
  c = app::resolve_config({}, std::nullopt, {}, std::nullopt);
  CHECK(c.output_dir == dir / "env");
  c = app::resolve_config({}, std::nullopt, {}, dir / "flag");
  CHECK(c.output_dir == dir / "flag");
  ::unsetenv("MIXEDFRAME_OUT");
  c = app::resolve_config({}, std::nullopt, {}, std::nullopt);
  CHECK(c.output_dir == ".");

  CHECK_THROWS_AS(app::resolve_config({}, dir / "missing.cfg", {}, std::nullopt), ConfigError);
  CHECK_THROWS_AS(app::resolve_config({}, std::nullopt, {{"grid_n", "100"}}, std::nullopt), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("figure a1a2: mixed below pure sum at the midpoint") {
  const auto art = app::build_figure(app::FigureId::A1A2, {});
  REQUIRE(art.curves.size() == 2);
  CHECK(art.curves[0].label == "mixed");
  CHECK(art.curves[1].label == "pure_sum");
  const auto& mid = art.metadata["midpoint"];
  CHECK(mid["x"].get<double>() == 1.25);
  CHECK(mid["mixed"].get<double>() < mid["pure_sum"].get<double>());
  CHECK(art.metadata["closed_form_sup_error"]["mixed"].get<double>() <= 1e-6);
  CHECK(art.metadata["closed_form_sup_error"]["pure_sum"].get<double>() <= 1e-6);
  for (const auto key : {"alpha", "a2", "grid_n", "extent"}) CHECK(art.metadata["parameters"].contains(key));
}

TEST_CASE("figure a1a2diff: pure difference vanishes at the midpoint, mixed does not") {
  const auto art = app::build_figure(app::FigureId::A1A2Diff, {});
  const auto& mid = art.metadata["midpoint"];
  CHECK(mid["pure_difference"].get<double>() <= 1e-10);
  CHECK(mid["mixed"].get<double>() > mid["pure_difference"].get<double>());
  // (1 - o) / (1 + o), o = e^{-a2^2 / 8 alpha^2}
  CHECK(art.metadata["normalization"]["integral_with_printed_denominator"].get<double>() ==
        doctest::Approx(0.6008296026925349).epsilon(1e-12));
}

TEST_CASE("figure gaussian-smear records closed-form errors and variances") {
  app::Parameters p;
  p.sigma = 1.0;
  p.alpha = 0.75;
  p.a0 = 1.0;
  const auto art = app::build_figure(app::FigureId::GaussianSmear, p);
  CHECK(art.curves.size() == 4);
  CHECK(art.metadata["closed_form_sup_error"]["mixed"].get<double>() <= 1e-6);
  CHECK(art.metadata["closed_form_sup_error"]["coherent"].get<double>() <= 1e-6);
  const auto& v = art.metadata["variance"];
  CHECK(v["mixed_measured"].get<double>() == doctest::Approx(1.5625).epsilon(1e-9));
  CHECK(v["coherent_measured"].get<double>() == doctest::Approx(1.0625).epsilon(1e-9));
  CHECK(art.metadata["parameters"]["a0"].get<double>() == 1.0);
}

TEST_CASE("run_figure writes csv, plot script and metadata") {
  const auto dir = scratch("figure");
  app::RunConfig c;
  c.output_dir = dir / "nested";
  c.figure = app::FigureId::A1A2;
  c.params.grid_n = 256;
  app::run_figure(c);
  CHECK(slurp(dir / "nested" / "a1a2.csv").rfind("x,mixed,pure_sum\n-20,", 0) == 0);
  CHECK(slurp(dir / "nested" / "a1a2.gp").find("a1a2.csv") != std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(dir / "nested" / "a1a2.json"));
  CHECK(meta["parameters"]["grid_n"] == 256);
  fs::remove_all(dir);

  c.output_dir = "/proc/definitely/not/writable";
  CHECK_THROWS_AS(app::run_figure(c), IoError);
}

TEST_CASE("demos") {
  const auto dir = scratch("demos");
  app::RunConfig c;
  c.output_dir = dir;
  c.params.temperature = 1.0;
  c.demo = app::DemoId::Thermal;
  const auto thermal = app::run_demo(c);
  CHECK(thermal["maxwell_boltzmann_gap"].get<double>() <= 1e-12);
  CHECK(thermal["energy_density_integral"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fs::exists(dir / "thermal_energy.csv"));
  CHECK(slurp(dir / "thermal_momentum.csv").rfind("p,weight,smearing_density,maxwell_boltzmann\n", 0) == 0);

  c.demo = app::DemoId::GalileiBoost;
  const auto boost = app::run_demo(c);
  CHECK(boost["gap"].get<double>() <= 1e-9);
  c.params.v0 = 1.5;
  c.params.p = -0.5;
  CHECK(app::run_demo(c)["gap"].get<double>() <= 1e-9);

  c.demo = app::DemoId::Semigroup;
  const auto semi = app::run_demo(c);
  const auto table = slurp(dir / "semigroup.csv");
  CHECK(table.find("convolve,0.5 d(0) + 0.5 d(2.5),0.5 d(-2.5) + 0.5 d(0),0.25 d(-2.5) + 0.5 d(0) + 0.25 d(2.5),false,false,") !=
        std::string::npos);
  bool found = false;
  for (const auto& row : semi["rows"]) {
    if (row["operation"] == "classify" && row["lhs"] == "0.5 d(0) + 0.5 d(2.5)") {
      found = true;
      CHECK(row["witness"].get<double>() == doctest::Approx(1.2566370614359172).epsilon(1e-9));
    }
  }
  CHECK(found);
  fs::remove_all(dir);
}

TEST_CASE("describe and band helpers") {
  CHECK(app::describe(mix({{0.5, make_delta(0.0)}, {0.5, make_gaussian(1.0, 0.25)}})) == "0.5 d(0) + 0.5 g(1; 0.25)");
  CHECK(app::invertibility_band(mix({{0.5, make_delta(0.0)}, {0.5, make_delta(2.5)}})) == 4.0);
  CHECK(app::invertibility_band(make_gaussian(0.0, 1.0)) == 10.0);
}

TEST_CASE("verify suite at a small grid and its fault injection") {
  app::Parameters p;
  p.grid_n = 256;
  const auto report = app::collect_checks(p);
  CHECK(report.checks.size() > 40);
  for (const auto& c : report.checks) {
    INFO(c.name << " residual " << c.residual << " tolerance " << c.tolerance);
    CHECK(c.passed);
  }
  const auto broken = app::collect_checks(p, 0.0);
  CHECK_FALSE(broken.all_passed());
  REQUIRE(broken.first_failure() != nullptr);
  CHECK(!broken.first_failure()->name.empty());
}
