#ifndef P4P_TESTS_SUPPORT_H_
#define P4P_TESTS_SUPPORT_H_

// Shared fixtures and independent oracles for the test suites.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "p4p/coords.h"
#include "p4p/geometry.h"
#include "p4p/monomial_list.h"
#include "p4p/quadratics.h"
#include "p4p/synth.h"

namespace p4p::testing {

using Rational = boost::multiprecision::cpp_rational;

// A tetrahedron whose canvas rays have small rational parameters, giving
// integer rotated-frame depths squared: z^2 = (1, 25/9, 16/9, 9).
inline std::array<Point3, 4> FixtureWorld() {
  return {Point3(0, 0, 0), Point3(1, 0, 0), Point3(1, 1, 0), Point3(0, 0, 3)};
}

inline std::array<std::array<Rational, 2>, 4> FixtureCanvasExact() {
  return {{{Rational(2), Rational(1)},
           {Rational(17, 13), Rational(9, 13)},
           {Rational(11, 15), Rational(4, 5)},
           {Rational(1, 2), Rational(-11, 16)}}};
}

inline std::array<CanvasPoint, 4> FixtureCanvas() {
  std::array<CanvasPoint, 4> out;
  const auto exact = FixtureCanvasExact();
  for (int i = 0; i < 4; ++i) {
    out[i] = {exact[i][0].convert_to<double>(), exact[i][1].convert_to<double>()};
  }
  return out;
}

inline constexpr std::array<double, 4> kFixtureRotatedDepths = {1.0, 5.0 / 3.0, 4.0 / 3.0, 3.0};
inline constexpr std::array<double, 4> kFixtureOriginalDepths = {1.0, 13.0 / 7.0, 15.0 / 7.0,
                                                                 16.0 / 7.0};

struct ExactCoords {
  std::array<Rational, 3> a, b, c, d;

  std::array<Rational, 12> Flatten() const {
    return {a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2], d[0], d[1], d[2]};
  }
};

// Exact invariant coordinates straight from their definitions.
inline ExactCoords ExactFixtureCoords() {
  const auto canvas = FixtureCanvasExact();
  const auto world = FixtureWorld();
  std::array<std::array<Rational, 3>, 4> L;
  std::array<std::array<Rational, 3>, 4> P;
  for (int i = 0; i < 4; ++i) {
    L[i] = {canvas[i][0], canvas[i][1], Rational(1)};
    P[i] = {Rational(static_cast<int>(world[i].x())), Rational(static_cast<int>(world[i].y())),
            Rational(static_cast<int>(world[i].z()))};
  }
  const auto dot = [](const std::array<Rational, 3>& u, const std::array<Rational, 3>& v) {
    return Rational(u[0] * v[0] + u[1] * v[1] + u[2] * v[2]);
  };
  const auto dist2 = [](const std::array<Rational, 3>& u, const std::array<Rational, 3>& v) {
    Rational s = 0;
    for (int k = 0; k < 3; ++k) s += (u[k] - v[k]) * (u[k] - v[k]);
    return s;
  };
  ExactCoords out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    out.a[i] = dist2(P[j], P[k]);
    out.c[i] = dist2(P[i], P[3]);
    out.b[i] = dot(L[i], L[i]) * dot(L[3], L[3]) / (dot(L[i], L[3]) * dot(L[i], L[3]));
    out.d[i] = dot(L[j], L[k]) * dot(L[3], L[3]) / (dot(L[j], L[3]) * dot(L[k], L[3]));
  }
  return out;
}

// Rows of Q_i evaluated exactly from the monomial list; rows 1 and 2 use the
// textual index transposition of row 0.
inline std::array<std::array<Rational, 3>, 4> ExactRows(const ExactCoords& co) {
  const CoefficientTable& table = CoefficientTable::Builtin();
  const auto vars = co.Flatten();
  std::array<std::array<Rational, 3>, 4> rows;
  for (int j = 0; j < 3; ++j) {
    const std::string base = "X0" + std::to_string(j);
    rows[0][j] = table.at(base).Evaluate(vars);
    rows[1][j] =
        MonomialPolynomial::Parse(TransposeIndicesInText(table.text(base), 0, 1)).Evaluate(vars);
    rows[2][j] =
        MonomialPolynomial::Parse(TransposeIndicesInText(table.text(base), 0, 2)).Evaluate(vars);
    rows[3][j] = table.at("X3" + std::to_string(j)).Evaluate(vars);
  }
  return rows;
}

// Naive double evaluation of every row from the monomial list.
inline QuadraticCoeffs NaiveRows(const CoordVector& co) {
  const CoefficientTable& table = CoefficientTable::Builtin();
  const CoordVector s01 = SwapIndices(co, 0, 1);
  const CoordVector s02 = SwapIndices(co, 0, 2);
  QuadraticCoeffs out;
  for (int j = 0; j < 3; ++j) {
    const MonomialPolynomial& row0 = table.at("X0" + std::to_string(j));
    out.rows[0][j] = row0.Evaluate(co.Flatten());
    out.rows[1][j] = row0.Evaluate(s01.Flatten());
    out.rows[2][j] = row0.Evaluate(s02.Flatten());
    out.rows[3][j] = table.at("X3" + std::to_string(j)).Evaluate(co.Flatten());
  }
  return out;
}

inline double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline Pose RandomPose(Rng& rng, double translation_scale = 1.0) {
  return Pose(SampleRotation(rng), translation_scale * SampleUnitSphere(rng));
}

inline Point3 UniformPoint(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng)};
}

inline std::array<Point3, 4> FirstFour(const std::vector<Point3>& v) {
  return {v[0], v[1], v[2], v[3]};
}

inline std::array<CanvasPoint, 4> FirstFour(const std::vector<CanvasPoint>& v) {
  return {v[0], v[1], v[2], v[3]};
}

// Camera-frame depths of the clean points of a scenario, i.e. the true
// depths along the original canvas rays.
inline std::array<double, 4> TrueOriginalDepths(const Scenario& s) {
  std::array<double, 4> z;
  for (int i = 0; i < 4; ++i) z[i] = ApplyPose(s.truth, s.world[i]).z();
  return z;
}

// The same depths measured in the frame where the anchor ray is the optical
// axis with its canvas point at distance 1.
inline std::array<double, 4> TrueRotatedDepths(const Scenario& s) {
  const std::array<double, 4> zo = TrueOriginalDepths(s);
  const Eigen::Vector3d anchor = Lift(s.canvas[3]);
  std::array<double, 4> z;
  for (int i = 0; i < 4; ++i) z[i] = Lift(s.canvas[i]).dot(anchor) / anchor.norm() * zo[i];
  return z;
}

}  // namespace p4p::testing

#endif  // P4P_TESTS_SUPPORT_H_
