#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "pim/modelfile.hpp"
#include "pim/report.hpp"

using namespace pim;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) { return read_file(std::string(PIM_TEST_DATA_DIR) + "/" + name); }

}  // namespace

TEST(RenderReport, DragText) {
  const std::string text = render_report(analyze(fixtures::drag(true)), ReportFormat::text);
  EXPECT_NE(text.find("d = 3"), std::string::npos);
  EXPECT_NE(text.find("d_eff = 2"), std::string::npos);
  EXPECT_NE(text.find("relation: pi2 / pi3 = 1"), std::string::npos);
  EXPECT_NE(text.find("selected: pi1, pi3"), std::string::npos);
  EXPECT_EQ(text.find('\x1b'), std::string::npos);
}

TEST(RenderReport, ColorOnlyWhenAsked) {
  const auto r = analyze(fixtures::drag(true));
  EXPECT_NE(render_report(r, ReportFormat::text, {true}).find("\x1b["), std::string::npos);
  EXPECT_EQ(render_report(r, ReportFormat::json, {true}).find('\x1b'), std::string::npos);
}

TEST(RenderReport, UnconstrainedJson) {
  const std::string json = render_report(analyze(fixtures::pendulum()), ReportFormat::json);
  EXPECT_NE(json.find("\"scale_invariant\": true"), std::string::npos);
  EXPECT_NE(json.find("\"relations\": []"), std::string::npos);
  const auto parsed = nlohmann::json::parse(json);
  EXPECT_EQ(parsed["schema"], 1);
  EXPECT_EQ(parsed["d_eff"], 1);
}

TEST(RenderReport, CMatrixAsStrings) {
  const std::string json = render_report(analyze(fixtures::drag(true)), ReportFormat::json);
  EXPECT_NE(json.find("\"C\": [[\"0\",\"1\",\"-1\"]]"), std::string::npos);
}

TEST(RenderReport, NonInvariantFieldsAreNull) {
  Model m = fixtures::drag();
  m.constraints.push_back(Constraint::pointwise(fixtures::row({1, 0, 0, 0, 0, 0})));
  const auto parsed = nlohmann::json::parse(render_report(analyze(m), ReportFormat::json));
  EXPECT_FALSE(parsed["scale_invariant"].get<bool>());
  EXPECT_TRUE(parsed["C"].is_null());
  EXPECT_TRUE(parsed["selected"].is_null());
  EXPECT_TRUE(parsed["relations"].is_null());
  EXPECT_TRUE(parsed["deff"]["C_rank"].is_null());
  EXPECT_EQ(parsed["warnings"].size(), 2u);
}

TEST(RenderReport, GoldenDragJson) {
  const auto parsed = parse_model(data("drag.pim"));
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(render_report(analyze(*parsed.model), ReportFormat::json), data("drag_report.golden.json"));
}

TEST(RenderReport, Deterministic) {
  const auto r = analyze(fixtures::drag());
  EXPECT_EQ(render_report(r, ReportFormat::json), render_report(analyze(fixtures::drag()), ReportFormat::json));
  EXPECT_EQ(render_report(r, ReportFormat::text), render_report(analyze(fixtures::drag()), ReportFormat::text));
}

TEST(RenderReport, RationalEntriesAsFractions) {
  // auto basis gives C = [0 1/2 -1/2]
  const auto parsed = nlohmann::json::parse(render_report(analyze(fixtures::drag()), ReportFormat::json));
  EXPECT_EQ(parsed["C"][0][1], "1/2");
  EXPECT_EQ(parsed["C"][0][2], "-1/2");
  EXPECT_EQ(parsed["rref_C"][0][1], "1");
}
