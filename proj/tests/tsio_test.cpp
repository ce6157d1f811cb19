#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "scig/tsio.hpp"

namespace scig {
namespace {

RawTable parse(const std::string& text, char delimiter = ',') {
  std::istringstream in(text);
  return read_table(in, delimiter);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::invalid_config;
}

TEST(ReadTable, NodeMajorPassThrough) {
  const auto series = to_series(parse("x,y\n1,2\n3,4\n5,6\n"), ColumnLayout::node_major, 2, 1);
  EXPECT_EQ(series.samples(), 3);
  EXPECT_EQ(series.data()(0, 0), 1.0);
  EXPECT_EQ(series.data()(2, 1), 6.0);
}

TEST(ReadTable, AttributeMajorIsReordered) {
  const auto table = parse("a1n1,a1n2,a2n1,a2n2\n11,12,21,22\n111,112,121,122\n");
  const auto series = to_series(table, ColumnLayout::attribute_major, 2, 2);
  // Node-major channels: n1a1, n1a2, n2a1, n2a2.
  EXPECT_EQ(series.data()(0, 0), 11.0);
  EXPECT_EQ(series.data()(0, 1), 21.0);
  EXPECT_EQ(series.data()(0, 2), 12.0);
  EXPECT_EQ(series.data()(0, 3), 22.0);
  EXPECT_EQ(series.data()(1, 3), 122.0);
}

TEST(ReadTable, MissingValueNamesRowAndColumn) {
  const auto table = parse("u,v\n1,2\n3,\n5,NA\n");
  try {
    to_series(table, ColumnLayout::node_major, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::missing_value);
    const std::string what = e.what();
    EXPECT_NE(what.find("row 2"), std::string::npos) << what;
    EXPECT_NE(what.find("'v'"), std::string::npos) << what;
  }
}

TEST(ReadTable, ForwardFill) {
  const auto series = to_series(parse("u,v\n1,2\n3,\n5,NA\n"), ColumnLayout::node_major, 2, 1,
                                MissingPolicy::forward_fill);
  EXPECT_EQ(series.data()(1, 1), 2.0);
  EXPECT_EQ(series.data()(2, 1), 2.0);
  EXPECT_EQ(kind_of([] { to_series(parse("u\nNA\n1\n"), ColumnLayout::node_major, 1, 1, MissingPolicy::forward_fill); }),
            ErrorKind::missing_value);
}

TEST(ReadTable, Errors) {
  EXPECT_EQ(kind_of([] { parse(""); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { parse("a,a\n1,2\n"); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { parse("a,b\n1,2,3\n"); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { parse("a,b\n1,2x\n"); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { to_series(parse("a,b,c\n1,2,3\n4,5,6\n"), ColumnLayout::node_major, 2, 1); }),
            ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { parse_layout("row-major"); }), ErrorKind::invalid_config);
}

TEST(ReadTable, OtherDelimiterAndBlankLines) {
  const auto table = parse("a;b\n1;2\n\n3;4\n", ';');
  EXPECT_EQ(table.values.rows(), 2);
  EXPECT_EQ(table.values(1, 1), 4.0);
}

TEST(LoadSeries, RoundTripThroughFile) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Matrix x(20, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  const MultiAttributeSeries series(x, 3, 2);
  const auto path = std::filesystem::temp_directory_path() / "scig_tsio_roundtrip.csv";
  {
    std::ofstream out(path);
    write_series(out, series);
  }
  const auto loaded = load_series(path.string(), ColumnLayout::node_major, 3, 2);
  EXPECT_TRUE(loaded.data() == series.data());
  std::filesystem::remove(path);
  EXPECT_EQ(kind_of([] { load_series("/nonexistent/scig.csv", ColumnLayout::node_major, 1, 1); }),
            ErrorKind::invalid_input);
}

TEST(Preprocess, ConstantChannelBecomesZeroWithWarning) {
  std::vector<std::string> messages;
  auto previous = set_warning_handler([&](const std::string& m) { messages.push_back(m); });
  Matrix x(10, 2);
  x.col(0).setConstant(3.0);
  for (int t = 0; t < 10; ++t) x(t, 1) = std::exp(0.3 * t);
  const auto out = preprocess(MultiAttributeSeries(x, 2, 1));
  set_warning_handler(previous);
  EXPECT_EQ(out.samples(), 9);
  EXPECT_EQ(out.data().col(0).norm(), 0.0);
  EXPECT_LE(out.data().col(1).norm(), 1e-12);
  EXPECT_EQ(messages.size(), 2u);
}

TEST(Preprocess, PostconditionsOnRandomPositiveData) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.5, 50.0);
  Matrix x(200, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
  x(10, 3) = 0.0;  // forces the positive shift on one channel
  const auto out = preprocess(MultiAttributeSeries(x, 3, 2));
  ASSERT_EQ(out.samples(), 199);
  ASSERT_EQ(out.channels(), 6);
  const int n = out.samples();
  for (int c = 0; c < 6; ++c) {
    const Vector y = out.data().col(c);
    EXPECT_NEAR(y.squaredNorm() / n, 1.0, 1e-12);
    // Independent regression on the output: slope and intercept of y on t.
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (int t = 0; t < n; ++t) {
      st += t;
      sy += y(t);
      stt += static_cast<double>(t) * t;
      sty += t * y(t);
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    const double intercept = (sy - slope * st) / n;
    EXPECT_LE(std::abs(slope), 1e-10);
    EXPECT_LE(std::abs(intercept), 1e-10);
  }
  // Channel 0 recomputed from scratch: log ratio, regression residual, unit power.
  Vector r(n);
  for (int t = 1; t < 200; ++t) r(t - 1) = std::log(x(t, 0) / x(t - 1, 0));
  Matrix design(n, 2);
  for (int t = 0; t < n; ++t) design.row(t) << 1.0, t;
  const Vector beta = design.colPivHouseholderQr().solve(r);
  Vector expected = r - design * beta;
  expected /= std::sqrt(expected.squaredNorm() / n);
  EXPECT_LE((out.data().col(0) - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Preprocess, NonPositiveAfterShiftRejected) {
  Matrix x = Matrix::Constant(5, 1, -1.0);
  EXPECT_EQ(kind_of([&] { preprocess(MultiAttributeSeries(x, 1, 1)); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { preprocess(MultiAttributeSeries(Matrix::Ones(2, 1), 1, 1)); }), ErrorKind::invalid_input);
}

}  // namespace
}  // namespace scig
