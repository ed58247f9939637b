#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "paultrap/runs.hpp"

using namespace paultrap;

namespace {

constexpr double pi = std::numbers::pi;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::InvalidArgument;
}

RunConfig short_static() {
  RunConfig c = preset("static");
  c.time.t_end = 0.5;
  c.times = {0.0, 0.25};
  return c;
}

std::string render(const Document& doc, OutputFormat format) {
  std::ostringstream os;
  write_document(os, doc, format);
  return os.str();
}

}  // namespace

TEST(Presets, KnownValues) {
  for (const auto& name : preset_names()) EXPECT_NO_THROW(validate(preset(name)));
  const RunConfig s = preset("fig2-soliton");
  EXPECT_EQ(s.U2, 0.25);
  EXPECT_EQ(s.V, 0.05);
  EXPECT_EQ(s.n, 8);
  EXPECT_EQ(s.b0, -10.0);
  const RunConfig c = preset("fig3-collapse");
  EXPECT_EQ(c.init.A, 0.02);
  EXPECT_EQ(c.init.B, 10.0);
  EXPECT_EQ(c.n, 4);
  EXPECT_NEAR(c.time.t_end, 2.0 * pi, 1e-15);
  const RunConfig st = preset("static");
  EXPECT_EQ(st.V, 0.0);
  EXPECT_TRUE(st.params().stability_warning().has_value());
  EXPECT_EQ(code_of([] { preset("no-such-preset"); }), Errc::UnknownPreset);
}

TEST(Times, ParsesMultiplesOfPi) {
  EXPECT_DOUBLE_EQ(parse_time("2pi"), 2.0 * pi);
  EXPECT_DOUBLE_EQ(parse_time("0.5pi"), 0.5 * pi);
  EXPECT_DOUBLE_EQ(parse_time("pi"), pi);
  EXPECT_DOUBLE_EQ(parse_time("-pi"), -pi);
  EXPECT_DOUBLE_EQ(parse_time(" 1.25 "), 1.25);
  const auto list = parse_times("0,pi, 2pi");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_DOUBLE_EQ(list[2], 2.0 * pi);
  EXPECT_THROW(parse_time("two"), Error);
  EXPECT_THROW(parse_times("0,,1"), Error);
}

TEST(ConfigFile, OverridesAndUnknownKeys) {
  const RunConfig c = parse_config(R"({"train": {"n": 3, "declared_c0": 1.0}, "times": ["pi", 0.5]})");
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.b0, -10.0);
  ASSERT_TRUE(c.declared_c0.has_value());
  EXPECT_EQ(c.times.size(), 2u);
  EXPECT_DOUBLE_EQ(c.times[0], pi);
  const RunConfig p = parse_config(R"({"preset": "static", "train": {"n": 2}})", preset("fig3-collapse"));
  EXPECT_EQ(p.U2, 1.0);
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ(code_of([] { parse_config(R"({"trian": {}})"); }), Errc::ConfigError);
  EXPECT_EQ(code_of([] { parse_config(R"({"train": {"m": 1}})"); }), Errc::ConfigError);
  EXPECT_EQ(code_of([] { parse_config(R"({"solver": {"method": "euler"}})"); }), Errc::ConfigError);
  EXPECT_EQ(code_of([] { parse_config("{not json"); }), Errc::ConfigError);
}

TEST(ConfigFile, JsonRoundTrip) {
  RunConfig c = preset("fig3-collapse");
  c.declared_c0 = 0.3;
  c.space.points = 4096;
  c.solver.method = SolverMethod::Picard;
  c.output.format = OutputFormat::Json;
  const RunConfig back = parse_config(to_json(c).dump());
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Validation, RejectsBadValues) {
  RunConfig c = preset("fig2-soliton");
  c.n = -1;
  EXPECT_EQ(code_of([&] { validate(c); }), Errc::ConfigError);
  c = preset("fig2-soliton");
  c.space.points = 1000;
  EXPECT_EQ(code_of([&] { validate(c); }), Errc::ConfigError);
  c = preset("fig2-soliton");
  c.solver.rk4_step = 0.0;
  EXPECT_EQ(code_of([&] { validate(c); }), Errc::ConfigError);
  c = preset("fig2-soliton");
  c.declared_c0 = -1.0;
  EXPECT_EQ(code_of([&] { validate(c); }), Errc::ConfigError);
}

TEST(DeclaredC0, RescalesTheDisplacement) {
  RunConfig c = preset("fig2-soliton");
  EXPECT_EQ(effective_b0(c, 0.5), -10.0);
  c.declared_c0 = 1.0;
  EXPECT_DOUBLE_EQ(effective_b0(c, 0.5), -5.0);
  c.time.t_end = 1.0;
  c.times.clear();
  const RunContext ctx = prepare(c);
  EXPECT_NEAR(ctx.spec.b0(), -10.0 * ctx.c0(), 1e-12);
  EXPECT_NEAR(center_orbit(ctx.track, ctx.spec, 0.0), -10.0, 1e-9);
}

TEST(Output, CsvCarriesSeventeenDigitsAndProvenance) {
  const RunContext ctx = prepare(short_static());
  const std::string csv = render(run_classical(ctx), OutputFormat::Csv);
  EXPECT_NE(csv.find("# tool: paultrap"), std::string::npos);
  EXPECT_NE(csv.find("# version: "), std::string::npos);
  EXPECT_NE(csv.find("# command: classical"), std::string::npos);
  EXPECT_NE(csv.find("# config: "), std::string::npos);
  EXPECT_NE(csv.find("# warning: "), std::string::npos);
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_number(pi)), pi);
}

TEST(Output, DeterministicAcrossRuns) {
  for (auto format : {OutputFormat::Csv, OutputFormat::Json}) {
    const std::string a = render(run_snapshot(prepare(short_static())), format);
    const std::string b = render(run_snapshot(prepare(short_static())), format);
    EXPECT_EQ(a, b);
  }
  const auto j = nlohmann::json::parse(render(run_series(prepare(short_static())), OutputFormat::Json));
  EXPECT_EQ(j.at("command"), "series");
  EXPECT_FALSE(j.at("tables").empty());
}

TEST(Verify, StaticPresetPasses) {
  const VerifyReport report = run_verify(prepare(preset("static")), false);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.value << " " << c.detail;
  EXPECT_TRUE(report.passed());
}

TEST(Verify, CoarseGridReportsNormDeficit) {
  RunConfig c = preset("static");
  c.space.points = 64;
  c.space.policy = SpacePolicy::Explicit;
  c.space.center = 0.0;
  c.space.half_width = 1.0;
  const VerifyReport report = run_verify(prepare(c), false);
  EXPECT_FALSE(report.passed());
}
