#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gfm/error.hpp"
#include "gfm/generator.hpp"
#include "gfm/report.hpp"
#include "gfm/scenario.hpp"
#include "gfm/sweep.hpp"
#include "support/instances.hpp"

using namespace gfm;
namespace gt = gfm::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = GFM_SCENARIO_DIR;
const fs::path kFixtures = GFM_FIXTURE_DIR;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no gfm::Error thrown";
  return ErrorKind::FormatError;
}

std::string drop_first_line(const std::string& s) { return s.substr(s.find('\n') + 1); }

const CertificateEntry& entry(const Report& r, CertificateKind k) {
  for (const auto& e : r.certificates) {
    if (e.kind == k) return e;
  }
  throw std::logic_error("missing certificate entry");
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("gfm_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

// ---- scenario files

TEST(Scenario, LoadsParsevalFile) {
  const Scenario s = load_scenario((kScenarios / "parseval.json").string());
  EXPECT_EQ(s.dim(), 2);
  EXPECT_EQ(s.lambda, gt::parseval_axes());
  EXPECT_FALSE(s.theta.has_value());
  EXPECT_EQ(s.symbol, Symbol::ones(2));
  const auto b = frame_bounds(s.lambda);
  EXPECT_EQ(b.lower, 1.0);
  EXPECT_EQ(b.upper, 1.0);
}

TEST(Scenario, ComplexEntriesAsPairs) {
  const Scenario s = parse_scenario(R"({"dim": 1, "weights": [0.5],
      "lambda": [[[[0, 2]]]], "symbol": [[1, -1]]})");
  EXPECT_EQ(s.lambda.block(0)(0, 0), Complex(0.0, 2.0));
  EXPECT_EQ(s.symbol[0], Complex(1.0, -1.0));
}

TEST(Scenario, MismatchedColumnsNameTheBlock) {
  try {
    load_scenario((kFixtures / "bad_columns.json").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
    EXPECT_NE(std::string(e.what()).find("block 1"), std::string::npos) << e.what();
  }
}

TEST(Scenario, FormatErrorsCarryLines) {
  try {
    load_scenario((kFixtures / "truncated.json").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FormatError);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] { load_scenario("/nonexistent/scenario.json"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_scenario(R"({"dim": 2, "weights": [1, 1], "symbol": [1, 1]})"); }),
            ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_scenario(R"({"dim": "two", "weights": [1], "lambda": [[[1]]], "symbol": [1]})"); }),
            ErrorKind::FormatError);
}

TEST(Scenario, ValidationErrors) {
  // symbol length
  EXPECT_EQ(kind_of([] { parse_scenario(R"({"dim": 1, "weights": [1, 1],
      "lambda": [[[1]], [[1]]], "symbol": [1]})"); }), ErrorKind::ValidationError);
  // zero weight
  EXPECT_EQ(kind_of([] { parse_scenario(R"({"dim": 1, "weights": [1, 0],
      "lambda": [[[1]], [[1]]], "symbol": [1, 1]})"); }), ErrorKind::ValidationError);
  // theta block dims differ from lambda
  EXPECT_EQ(kind_of([] { parse_scenario(R"({"dim": 1, "weights": [1],
      "lambda": [[[1]]], "theta": [[[1], [1]]], "symbol": [1]})"); }), ErrorKind::ValidationError);
}

TEST(Scenario, RoundTrip) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    GenerateOptions opt = gt::base_options(rng);
    opt.nu_target = t % 2 == 0 ? 0.0 : 0.05;
    opt.with_dual = t % 3 == 0;
    opt.symbol = {SymbolSpec::Kind::RandomComplex, 1.5};
    Scenario s = generate_scenario(opt);
    if (t % 4 == 0) s.nu_override = 0.3;
    if (t % 5 == 0) s.tolerances.frame_tol = 1e-8;
    const std::string path = temp_path("rt.json").string();
    save_scenario(s, path);
    const Scenario back = load_scenario(path);
    fs::remove(path);
    EXPECT_TRUE(back == s) << "seed " << opt.seed;
    EXPECT_EQ(scenario_to_json(back), scenario_to_json(s));
  }
}

// ---- generator

TEST(Generator, ZeroNuGivesWeaklyEqualTheta) {
  GenerateOptions opt;
  opt.seed = 3;
  opt.dim = 4;
  opt.points = 8;
  const Scenario s = generate_scenario(opt);
  EXPECT_TRUE(weakly_equal(s.lambda, s.theta_or_lambda(), 0.0));
}

TEST(Generator, HitsRatioTarget) {
  GenerateOptions opt;
  opt.seed = 42;
  opt.dim = 8;
  opt.points = 24;
  opt.target_ratio = 0.5;
  const auto b = frame_bounds(generate_scenario(opt).lambda);
  const double ratio = b.lower / b.upper;
  EXPECT_GE(ratio, 0.45);
  EXPECT_LE(ratio, 0.55);
}

TEST(Generator, HitsTargetsAcrossSeeds) {
  std::mt19937_64 rng(72);
  for (int t = 0; t < 40; ++t) {
    GenerateOptions opt = gt::base_options(rng);
    opt.nu_target = gt::uniform(rng, 0.0, 0.5);
    const Scenario s = generate_scenario(opt);
    const auto b = frame_bounds(s.lambda);
    EXPECT_NEAR(b.lower / b.upper, opt.target_ratio, 0.1 * opt.target_ratio);
    EXPECT_NEAR(estimate_nu(s.lambda, s.theta_or_lambda()), opt.nu_target, 0.01 * opt.nu_target + 1e-15);
  }
}

TEST(Generator, Deterministic) {
  GenerateOptions opt;
  opt.seed = 9;
  opt.dim = 5;
  opt.points = 11;
  opt.block_dims = {2};
  opt.target_ratio = 0.7;
  opt.nu_target = 0.02;
  opt.symbol = {SymbolSpec::Kind::RandomComplex, 2.0};
  opt.with_dual = true;
  const Scenario a = generate_scenario(opt);
  const Scenario b = generate_scenario(opt);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(scenario_to_json(a), scenario_to_json(b));
  opt.seed = 10;
  EXPECT_FALSE(generate_scenario(opt) == a);
}

TEST(Generator, SymbolSpecs) {
  EXPECT_EQ(parse_symbol_spec("constant:2").kind, SymbolSpec::Kind::Constant);
  const auto pr = parse_symbol_spec("positive-range:0.5:3");
  EXPECT_EQ(pr.a, 0.5);
  EXPECT_EQ(pr.b, 3.0);
  EXPECT_EQ(kind_of([] { parse_symbol_spec("positive-range:3:1"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_symbol_spec("gaussian:1"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_symbol_spec("near-one"); }), ErrorKind::ValidationError);

  GenerateOptions opt;
  opt.points = 30;
  opt.symbol = parse_symbol_spec("near-one:0.3");
  const Symbol n1 = generate_scenario(opt).symbol;
  EXPECT_NEAR(n1.dist_to_one(), 0.3, 1e-15);
  EXPECT_TRUE(n1.is_real());
  opt.symbol = parse_symbol_spec("positive-range:0.5:3");
  const Symbol p = generate_scenario(opt).symbol;
  EXPECT_NEAR(p.min_real(), 0.5, 1e-15);
  EXPECT_NEAR(p.sup_norm(), 3.0, 1e-15);
  opt.symbol = parse_symbol_spec("random-complex:2");
  EXPECT_LE(generate_scenario(opt).symbol.sup_norm(), 2.0);
}

TEST(Generator, InfeasibleTargets) {
  GenerateOptions opt;
  opt.dim = 5;
  opt.points = 2;  // two rank-one blocks cannot span C^5
  EXPECT_EQ(kind_of([&] { generate_scenario(opt); }), ErrorKind::GenerationError);
  opt.points = 6;
  opt.target_ratio = 0.0;
  EXPECT_EQ(kind_of([&] { generate_scenario(opt); }), ErrorKind::GenerationError);
  opt.target_ratio = 0.5;
  opt.dim = 1;
  EXPECT_EQ(kind_of([&] { generate_scenario(opt); }), ErrorKind::GenerationError);
}

// ---- report

TEST(Report, ParsevalEverythingPasses) {
  const Scenario s = load_scenario((kScenarios / "parseval.json").string());
  const Report r = run_report(s);
  EXPECT_FALSE(r.has_violation());
  EXPECT_LE(r.adjoint_deviation, 1e-12);
  EXPECT_LE(r.rewrite_deviation, 1e-12);
  for (auto k : {CertificateKind::ThmMain, CertificateKind::Cooor, CertificateKind::Combined}) {
    const auto& e = entry(r, k);
    ASSERT_TRUE(e.certificate.has_value()) << to_string(k);
    EXPECT_TRUE(e.certificate->satisfied);
    EXPECT_EQ(e.certificate->neumann_ratio, 0.0);
  }
  EXPECT_FALSE(entry(r, CertificateKind::DualFrames).certificate.has_value());
  for (const auto& a : r.assertions) EXPECT_TRUE(a.holds) << a.claim;
}

TEST(Report, ScalarPerturbation) {
  const Report r = run_report(load_scenario((kScenarios / "axis_perturbed.json").string()));
  EXPECT_FALSE(r.has_violation());
  EXPECT_NEAR(r.nu_estimate, 0.01, 1e-15);
  EXPECT_TRUE(entry(r, CertificateKind::ThmMain).certificate->satisfied);
  EXPECT_TRUE(entry(r, CertificateKind::Combined).certificate->satisfied);
  EXPECT_TRUE(entry(r, CertificateKind::Cooor).certificate->satisfied);
  EXPECT_FALSE(entry(r, CertificateKind::DualFrames).certificate.has_value());
  EXPECT_FALSE(entry(r, CertificateKind::DualFrames).not_applicable.empty());
}

TEST(Report, SufficiencyIsNotNecessity) {
  // m = (2, 0.5): every condition on ||m - 1|| fails, yet M is invertible. The
  // symbol is real positive and Theta = Lambda, so thm_main still applies.
  const Report r = run_report(load_scenario((kScenarios / "sufficiency_gap.json").string()));
  EXPECT_FALSE(r.has_violation());
  EXPECT_TRUE(r.multiplier.invertible);
  EXPECT_EQ(*r.multiplier.inverse_norm, 2.0);
  EXPECT_FALSE(entry(r, CertificateKind::Cooor).certificate->satisfied);
  EXPECT_FALSE(entry(r, CertificateKind::Combined).certificate->satisfied);
  EXPECT_TRUE(entry(r, CertificateKind::ThmMain).certificate->satisfied);
  EXPECT_TRUE(r.necessary.applicable);
  EXPECT_TRUE(r.necessary.all_hold());

  // flipping the sign of one entry takes thm_main away as well
  const Report all = run_report(load_scenario((kScenarios / "no_certificate.json").string()));
  EXPECT_FALSE(all.has_violation());
  EXPECT_TRUE(all.multiplier.invertible);
  for (const auto& e : all.certificates) {
    EXPECT_FALSE(e.certificate && e.certificate->satisfied) << to_string(e.kind);
  }
  EXPECT_FALSE(entry(all, CertificateKind::ThmMain).not_applicable.empty());
  EXPECT_TRUE(all.necessary.all_hold());
}

TEST(Report, DualScenario) {
  const Report r = run_report(load_scenario((kScenarios / "axis_dual.json").string()));
  EXPECT_FALSE(r.has_violation());
  const auto& e = entry(r, CertificateKind::DualFrames);
  ASSERT_TRUE(e.certificate && e.certificate->satisfied);
  EXPECT_EQ(e.certificate->predicted_inv_upper, 2.0);
  ASSERT_TRUE(e.inversion.has_value());
  EXPECT_NEAR(e.inversion->inverse_norm, 2.0, 1e-15);
}

TEST(Report, CorruptedPredictionIsAViolation) {
  const Report r = run_report(load_scenario((kFixtures / "corrupted_bound.json").string()));
  EXPECT_TRUE(r.has_violation());
}

TEST(Report, DeterministicModuloTimestamp) {
  GenerateOptions opt;
  opt.seed = 5;
  opt.dim = 6;
  opt.points = 14;
  opt.target_ratio = 0.6;
  opt.nu_target = 0.02;
  opt.symbol = parse_symbol_spec("near-one:0.2");
  opt.with_dual = true;
  const Scenario s = generate_scenario(opt);
  const std::string a = render_text(run_report(s), "t1");
  const std::string b = render_text(run_report(s), "t2");
  EXPECT_NE(a, b);
  EXPECT_EQ(drop_first_line(a), drop_first_line(b));
  EXPECT_NE(a.find(std::string(kGeneratorId)), std::string::npos);
  EXPECT_EQ(render_json(run_report(s), "t"), render_json(run_report(s), "t"));
}

TEST(Report, AssertionsAreAuditable) {
  std::mt19937_64 rng(73);
  GenerateOptions opt = gt::base_options(rng);
  opt.with_dual = true;
  opt.symbol = parse_symbol_spec("near-one:0.1");
  const Report r = run_report(generate_scenario(opt));
  const std::string text = render_text(r, "t");
  for (const auto& a : r.assertions) {
    EXPECT_NE(text.find(a.claim), std::string::npos) << a.claim;
  }
  EXPECT_NE(text.find("lhs="), std::string::npos);
  EXPECT_NE(text.find("margin="), std::string::npos);
  EXPECT_FALSE(r.has_violation());
}

// ---- sweep

TEST(Sweep, CooorFlipsAtThreshold) {
  GenerateOptions opt;
  opt.seed = 17;
  opt.dim = 4;
  opt.points = 10;
  opt.target_ratio = 0.5;
  SweepSpec spec{SweepParam::LambdaShift, 0.0, 0.6, 13, generate_scenario(opt)};
  const auto b = frame_bounds(spec.base.lambda);
  spec.to = 1.2 * b.lower / b.upper;
  const auto rows = run_sweep(spec, 2);
  ASSERT_EQ(rows.size(), 13u);
  for (const auto& r : rows) {
    EXPECT_NEAR(sweep_scenario(spec, r.value).symbol.dist_to_one(), r.value, 1e-15);
    if (r.step < 10) {
      EXPECT_EQ(r.cooor.status, "satisfied") << r.step;
    } else {
      EXPECT_NE(r.cooor.status, "satisfied") << r.step;
    }
  }
}

TEST(Sweep, ThmMainMarginShrinksWithNu) {
  GenerateOptions opt;
  opt.seed = 18;
  opt.dim = 5;
  opt.points = 12;
  opt.target_ratio = 0.6;
  opt.nu_target = 0.01;
  opt.symbol = parse_symbol_spec("positive-range:0.8:1.2");
  SweepSpec spec{SweepParam::NuScale, 0.0, 0.36, 20, generate_scenario(opt)};
  const auto rows = run_sweep(spec);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].thm_main.margin, rows[i - 1].thm_main.margin);
    EXPECT_NEAR(estimate_nu(spec.base.lambda, sweep_scenario(spec, rows[i].value).theta_or_lambda()),
                rows[i].value, 1e-12);
  }
}

TEST(Sweep, RejectsDegenerateSpecs) {
  const Scenario s = load_scenario((kScenarios / "parseval.json").string());
  EXPECT_EQ(kind_of([&] { run_sweep({SweepParam::SymbolScale, 1.0, 1.0, 5, s}); }),
            ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([&] { run_sweep({SweepParam::SymbolScale, 0.0, 1.0, 1, s}); }),
            ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([&] { run_sweep({SweepParam::SymbolScale, 0.0, 1.0, kMaxSweepSteps + 1, s}); }),
            ErrorKind::ValidationError);
}

TEST(Sweep, BaseUntouchedAndThreadIndependent) {
  GenerateOptions opt;
  opt.seed = 19;
  opt.dim = 3;
  opt.points = 7;
  opt.nu_target = 0.05;
  opt.with_dual = true;
  const Scenario base = generate_scenario(opt);
  const Scenario copy = base;
  for (auto p : {SweepParam::LambdaShift, SweepParam::NuScale, SweepParam::SymbolScale}) {
    const SweepSpec spec{p, 0.1, 0.9, 17, base};
    const std::string one = sweep_csv(run_sweep(spec, 1), p);
    const std::string many = sweep_csv(run_sweep(spec, 5), p);
    EXPECT_EQ(one, many);
    EXPECT_TRUE(spec.base == copy);
    std::istringstream lines(one);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header.rfind("step,param,value,thm_main_status", 0), 0u);
  }
  EXPECT_TRUE(base == copy);
}
