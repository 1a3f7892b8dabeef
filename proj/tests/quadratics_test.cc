#include <doctest.h>

#include "p4p/error.h"
#include "p4p/monomial_list.h"
#include "p4p/p4p_solver.h"
#include "p4p/quadratics.h"
#include "support.h"

namespace p4p {
namespace {

using testing::Rational;

double RowScale(const CoeffRow<double>& row) {
  return std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]);
}

CoordVector RandomCoords(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  CoordVector co;
  for (int i = 0; i < 3; ++i) {
    co.a[i] = u(rng);
    co.b[i] = u(rng);
    co.c[i] = u(rng);
    co.d[i] = u(rng);
  }
  return co;
}

TEST_CASE("Monomial parser") {
  const MonomialPolynomial p = MonomialPolynomial::Parse("c0^2a0b1 - 2c0c1\n +4 - a1");
  REQUIRE(p.terms().size() == 4);
  CHECK(p.terms()[0].coefficient == 1);
  CHECK(p.terms()[0].exponents[VariableSlot('c', 0)] == 2);
  CHECK(p.terms()[1].coefficient == -2);
  CHECK(p.terms()[2].coefficient == 4);
  CHECK(p.terms()[3].coefficient == -1);

  std::array<double, 12> vars{};
  for (int v = 0; v < 12; ++v) vars[v] = v + 1;  // a0=1 .. d2=12
  // c0=7, c1=8, a0=1, b1=5, a1=2
  CHECK(p.Evaluate(vars) == 49.0 * 1 * 5 - 2 * 7 * 8 + 4 - 2);
  CHECK(p.AbsoluteTermSum(vars) == 49.0 * 5 + 2 * 7 * 8 + 4 + 2);

  CHECK_THROWS_AS(MonomialPolynomial::Parse(""), Error);
  CHECK_THROWS_AS(MonomialPolynomial::Parse("a3"), Error);
  CHECK_THROWS_AS(MonomialPolynomial::Parse("a0*b1"), Error);
  CHECK_THROWS_AS(MonomialPolynomial::Parse("a0 b1 +"), Error);
  CHECK_THROWS_AS(MonomialPolynomial::Parse("a0^"), Error);
}

TEST_CASE("Builtin coefficient table") {
  const CoefficientTable& table = CoefficientTable::Builtin();
  CHECK(table.names() == std::vector<std::string>{"X00", "X01", "X02", "X30", "X31", "X32"});
  CHECK(table.text("X00").rfind("c0^2a0b1d0d1-2c0c1a0b1d0d1", 0) == 0);
  CHECK(table.text("X30").rfind("c0^2c1b0b1b2+c0c1^2b0b1b2", 0) == 0);
  // Every monomial of X_{i,j} has the same total degree in (a, c), which
  // drops by one per power of x.
  for (const std::string& name : table.names()) {
    const int j = name[2] - '0';
    for (const Monomial& m : table.at(name).terms()) {
      int ac = 0;
      for (int k = 0; k < 3; ++k) {
        ac += m.exponents[VariableSlot('a', k)] + m.exponents[VariableSlot('c', k)];
      }
      CHECK(ac == 3 - j);
    }
  }
}

TEST_CASE("Index transposition of polynomial text") {
  CHECK(TransposeIndicesInText("a0b1c2^2-3d0d2", 0, 1) == "a1b0c2^2-3d1d2");
  CHECK(TransposeIndicesInText("a0b1c2^2-3d0d2", 0, 2) == "a2b1c0^2-3d2d0");
}

TEST_CASE("Exact rows vanish at the fixture's squared depths") {
  const auto rows = testing::ExactRows(testing::ExactFixtureCoords());
  const std::array<Rational, 4> roots = {Rational(1), Rational(25, 9), Rational(16, 9),
                                         Rational(9)};
  for (int i = 0; i < 4; ++i) {
    const Rational& x = roots[i];
    CHECK(rows[i][2] * x * x + rows[i][1] * x + rows[i][0] == 0);
    CHECK(rows[i][2] != 0);
  }
}

TEST_CASE("Factored rows vanish at the fixture's squared depths") {
  const AugmentedCoords ac = ComputeCoords(testing::FixtureWorld(), testing::FixtureCanvas());
  const QuadraticCoeffs q = EvalAllX(ac.coords);
  const std::array<double, 4> roots = {1.0, 25.0 / 9.0, 16.0 / 9.0, 9.0};
  for (int i = 0; i < 4; ++i) {
    const double x = roots[i];
    const double scale = std::abs(q.rows[i][2]) * x * x + std::abs(q.rows[i][1]) * x +
                         std::abs(q.rows[i][0]);
    CHECK(std::abs(EvaluateQuadratic(q.rows[i], x)) <= 1e-9 * scale);
  }
  // Row 0 at x = 1 is just the coefficient sum.
  CHECK(std::abs(q.rows[0][0] + q.rows[0][1] + q.rows[0][2]) <= 1e-9 * RowScale(q.rows[0]));
}

TEST_CASE("All-zero coordinates give zero rows") {
  const QuadraticCoeffs q = EvalAllX(CoordVector{});
  for (const auto& row : q.rows) CHECK(row == CoeffRow<double>{0, 0, 0});
}

TEST_CASE("Factored evaluation agrees with naive monomial summation") {
  const CoefficientTable& table = CoefficientTable::Builtin();
  Rng rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const CoordVector co = RandomCoords(rng, -10, 10);
    const CoeffRow<double> r0 = EvalXRow0(co);
    const CoeffRow<double> r3 = EvalXRow3(co);
    for (int j = 0; j < 3; ++j) {
      const MonomialPolynomial& p0 = table.at("X0" + std::to_string(j));
      const MonomialPolynomial& p3 = table.at("X3" + std::to_string(j));
      const double e0 = std::abs(r0[j] - p0.Evaluate(co.Flatten())) /
                        p0.AbsoluteTermSum(co.Flatten());
      const double e3 = std::abs(r3[j] - p3.Evaluate(co.Flatten())) /
                        p3.AbsoluteTermSum(co.Flatten());
      worst = std::max({worst, e0, e3});
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("Factored evaluation is exact on small integers") {
  // Integer inputs keep every intermediate exactly representable, so the
  // factored path must agree exactly with the rational evaluation.
  Rng rng(32);
  std::uniform_int_distribution<int> u(-5, 5);
  for (int trial = 0; trial < 300; ++trial) {
    CoordVector co;
    testing::ExactCoords ex;
    for (int i = 0; i < 3; ++i) {
      ex.a[i] = co.a[i] = u(rng);
      ex.b[i] = co.b[i] = u(rng);
      ex.c[i] = co.c[i] = u(rng);
      ex.d[i] = co.d[i] = u(rng);
    }
    const QuadraticCoeffs q = EvalAllX(co);
    const auto exact = testing::ExactRows(ex);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 3; ++j) CHECK(Rational(q.rows[i][j]) == exact[i][j]);
    }
  }
}

TEST_CASE("Rows 1 and 2 match textual index substitution") {
  const CoefficientTable& table = CoefficientTable::Builtin();
  std::array<std::array<MonomialPolynomial, 3>, 2> swapped;
  for (int j = 0; j < 3; ++j) {
    const std::string& text = table.text("X0" + std::to_string(j));
    swapped[0][j] = MonomialPolynomial::Parse(TransposeIndicesInText(text, 0, 1));
    swapped[1][j] = MonomialPolynomial::Parse(TransposeIndicesInText(text, 0, 2));
  }
  Rng rng(33);
  for (int trial = 0; trial < 2000; ++trial) {
    const CoordVector co = RandomCoords(rng, -3, 3);
    const QuadraticCoeffs q = EvalAllX(co);
    for (int s = 0; s < 2; ++s) {
      for (int j = 0; j < 3; ++j) {
        const double want = swapped[s][j].Evaluate(co.Flatten());
        CHECK(std::abs(q.rows[s + 1][j] - want) <=
              1e-9 * swapped[s][j].AbsoluteTermSum(co.Flatten()));
      }
    }
  }
}

TEST_CASE("Coordinates fixed by the 0-1 swap give equal rows 0 and 1") {
  Rng rng(34);
  CoordVector co = RandomCoords(rng, 0.5, 4);
  co.a[1] = co.a[0];
  co.b[1] = co.b[0];
  co.c[1] = co.c[0];
  co.d[1] = co.d[0];
  const QuadraticCoeffs q = EvalAllX(co);
  for (int j = 0; j < 3; ++j) CHECK(q.rows[1][j] == doctest::Approx(q.rows[0][j]));
}

TEST_CASE("Rows vanish at the true squared depths of noiseless scenes") {
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Rng rng(TrialSeed(35, trial));
    const Scenario s = GenScenario(ScenarioKind::kGeneral, 0.0, rng);
    const AugmentedCoords ac = ComputeCoords(testing::FirstFour(s.world), testing::FirstFour(s.canvas));
    const QuadraticCoeffs q = EvalAllX(ac.coords);
    const auto z = testing::TrueRotatedDepths(s);
    for (int i = 0; i < 4; ++i) {
      const double x = z[i] * z[i];
      const double tol = 1e-6 * RowScale(q.rows[i]) * std::max(1.0, x * x);
      CHECK(std::abs(EvaluateQuadratic(q.rows[i], x)) <= tol);
    }
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("SolveRow on factored quadratics") {
  const RootPair pm = SolveRow<double>({-9, 0, 1});
  CHECK(pm.status == RootStatus::kTwoReal);
  REQUIRE(pm.count == 2);
  CHECK(pm.roots[0] == doctest::Approx(3.0));
  CHECK(pm.roots[1] == doctest::Approx(-3.0));
  CHECK_FALSE(pm.IsNegative(0));
  CHECK(pm.IsNegative(1));

  const RootPair two = SolveRow<double>({9, -10, 1});
  REQUIRE(two.count == 2);
  CHECK(two.roots[0] == doctest::Approx(9.0));
  CHECK(two.roots[1] == doctest::Approx(1.0));

  const RootPair scaled = SolveRow<double>({9e20, -10e20, 1e20});
  CHECK(scaled.roots[0] == doctest::Approx(9.0));
  CHECK(scaled.roots[1] == doctest::Approx(1.0));
}

TEST_CASE("SolveRow special statuses") {
  const RootPair none = SolveRow<double>({1, 0, 1});
  CHECK(none.status == RootStatus::kNone);
  CHECK(none.count == 0);

  const RootPair lin = SolveRow<double>({-4, 2, 1e-14});
  CHECK(lin.status == RootStatus::kLinearFallback);
  REQUIRE(lin.count == 1);
  CHECK(lin.roots[0] == doctest::Approx(2.0));

  // (x - 2)^2 nudged to a slightly negative discriminant still gives the
  // double root.
  const RootPair dbl = SolveRow<double>({4 + 1e-12, -4, 1});
  CHECK(dbl.status == RootStatus::kDouble);
  REQUIRE(dbl.count == 1);
  CHECK(dbl.roots[0] == doctest::Approx(2.0));

  CHECK(SolveRow<double>({0, 0, 0}).status == RootStatus::kNone);
  CHECK(SolveRow<double>({1, 0, 0}).status == RootStatus::kNone);
  CHECK(RootStatusName(RootStatus::kLinearFallback) == "linear-fallback");
}

TEST_CASE("SolveRow on the fixture's row 0 finds 1") {
  const AugmentedCoords ac = ComputeCoords(testing::FixtureWorld(), testing::FixtureCanvas());
  CoeffRow<double> row = EvalXRow0(ac.coords);
  const double m = std::max({std::abs(row[0]), std::abs(row[1]), std::abs(row[2])});
  for (double& x : row) x /= m;
  const RootPair r = SolveRow(row);
  REQUIRE(r.count >= 1);
  bool found = false;
  for (int k = 0; k < r.count; ++k) found = found || std::abs(r.roots[k] - 1.0) <= 1e-9;
  CHECK(found);
}

TEST_CASE("Returned roots have small residuals") {
  Rng rng(36);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> e(-8, 8);
  for (int trial = 0; trial < 20000; ++trial) {
    const CoeffRow<double> row = {u(rng) * std::pow(10.0, e(rng)),
                                  u(rng) * std::pow(10.0, e(rng)),
                                  u(rng) * std::pow(10.0, e(rng))};
    const RootPair r = SolveRow(row);
    for (int k = 0; k < r.count; ++k) {
      const double x = r.roots[k];
      const double scale = std::abs(row[2]) * x * x + std::abs(row[1]) * std::abs(x) +
                           std::abs(row[0]) + 1e-300;
      if (r.status == RootStatus::kLinearFallback) {
        // The dropped leading term may dominate far from the origin; only
        // the linear part is solved.
        CHECK(std::abs(row[1] * x + row[0]) <= 1e-12 * (std::abs(row[1] * x) + std::abs(row[0])));
      } else {
        CHECK(std::abs(EvaluateQuadratic(row, x)) <= 1e-7 * scale);
      }
    }
  }
}

TEST_CASE("Single-precision rows agree with double rows") {
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const CoordVector co = RandomCoords(rng, 0.5, 5);
    BasicCoordVector<float> cf;
    for (int i = 0; i < 3; ++i) {
      cf.a[i] = static_cast<float>(co.a[i]);
      cf.b[i] = static_cast<float>(co.b[i]);
      cf.c[i] = static_cast<float>(co.c[i]);
      cf.d[i] = static_cast<float>(co.d[i]);
    }
    const QuadraticCoeffs qd = EvalAllX(co);
    const BasicQuadraticCoeffs<float> qf = EvalAllX(cf);
    const CoefficientTable& table = CoefficientTable::Builtin();
    for (int j = 0; j < 3; ++j) {
      const double scale = table.at("X0" + std::to_string(j)).AbsoluteTermSum(co.Flatten());
      CHECK(std::abs(qf.rows[0][j] - qd.rows[0][j]) <= 1e-4 * scale);
    }
  }
}

}  // namespace
}  // namespace p4p
