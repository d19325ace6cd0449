#include <gtest/gtest.h>

#include <regex>

#include "linkfinger/svg.hpp"

namespace linkfinger::plot {
namespace {

std::size_t Count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

TEST(RenderSvg, OneTwoPointSeries) {
  const std::vector<Series> series = {{"line", {{0.0, 0.0}, {1.0, 2.0}}}};
  const std::string svg = RenderSvg(series, {"t", "x (deg)", "y (mm)", false});
  EXPECT_EQ(Count(svg, "<polyline"), 1u);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex("points=\"([^\"]*)\"")));
  EXPECT_TRUE(std::regex_match(m[1].str(), std::regex(R"([-0-9.]+,[-0-9.]+ [-0-9.]+,[-0-9.]+)")));
  EXPECT_NE(svg.find("x (deg)"), std::string::npos);
  EXPECT_NE(svg.find("y (mm)"), std::string::npos);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(RenderSvg, SameInputSameBytes) {
  const std::vector<Series> series = {{"a", {{0, 1}, {2, 3}, {4, 2}}}, {"b", {{0, -1}, {4, 5}}}};
  const AxesSpec axes{"title", "x", "y", true};
  EXPECT_EQ(RenderSvg(series, axes), RenderSvg(series, axes));
}

TEST(RenderSvg, SeriesAndLegendInInputOrder) {
  const std::vector<Series> series = {{"first", {{0, 1}, {1, 2}}}, {"second", {{0, 3}, {1, 0}}}};
  const std::string svg = RenderSvg(series, {"", "x", "y", false});
  EXPECT_EQ(Count(svg, "<polyline"), 2u);
  EXPECT_LT(svg.find(">first<"), svg.find(">second<"));
}

TEST(RenderSvg, NoExternalReferencesAndEscapedText) {
  const std::vector<Series> series = {{"a<b & c", {{0, 0}, {1, 1}}}};
  const std::string svg = RenderSvg(series, {"\"q\"", "x", "y", false});
  EXPECT_NE(svg.find("a&lt;b &amp; c"), std::string::npos);
  EXPECT_NE(svg.find("&quot;q&quot;"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
}

TEST(RenderSvg, ConstantSeriesStillRenders) {
  const std::vector<Series> series = {{"flat", {{1, 5}, {1, 5}}}};
  EXPECT_NO_THROW(RenderSvg(series, {"", "x", "y", false}));
}

TEST(RenderSvg, EmptyInputsAreRejected) {
  EXPECT_THROW(RenderSvg({}, {}), std::invalid_argument);
  const std::vector<Series> series = {{"empty", {}}};
  EXPECT_THROW(RenderSvg(series, {}), std::invalid_argument);
}

}  // namespace
}  // namespace linkfinger::plot
