#ifndef P4P_MONOMIAL_LIST_H_
#define P4P_MONOMIAL_LIST_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace p4p {

// Plain-text multivariate polynomials in the twelve invariant coordinates,
// in the format of data/q_coefficients.txt. This is the reference evaluation
// path for the quadratic coefficients; the production path lives in
// quadratics.h.

inline constexpr int kNumCoordVariables = 12;

// Variable slot for a letter in "abcd" and an index 0..2, matching
// BasicCoordVector::Flatten().
constexpr int VariableSlot(char letter, int index) { return (letter - 'a') * 3 + index; }

struct Monomial {
  std::int64_t coefficient = 0;
  std::array<std::uint8_t, kNumCoordVariables> exponents{};
};

class MonomialPolynomial {
 public:
  MonomialPolynomial() = default;
  explicit MonomialPolynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {}

  // Parses a sum such as "c0^2a0b1d0d1-2c0c1a0b1d0d1+...". Whitespace and
  // line breaks are ignored. Throws Error(kInvalidArgument) on bad input.
  static MonomialPolynomial Parse(std::string_view text);

  const std::vector<Monomial>& terms() const { return terms_; }

  // Naive per-monomial evaluation. T only needs construction from
  // std::int64_t, + and *, so exact rational types work.
  template <typename T>
  T Evaluate(const std::array<T, kNumCoordVariables>& vars) const {
    T sum(static_cast<std::int64_t>(0));
    for (const Monomial& m : terms_) {
      T term(m.coefficient);
      for (int v = 0; v < kNumCoordVariables; ++v) {
        for (int e = 0; e < m.exponents[v]; ++e) term = term * vars[v];
      }
      sum = sum + term;
    }
    return sum;
  }

  // Sum of |term| values; the natural scale for relative comparisons when
  // the terms cancel.
  double AbsoluteTermSum(const std::array<double, kNumCoordVariables>& vars) const;

  // Swaps variable indices i and j in every letter (a, b, c, d at once).
  MonomialPolynomial Transposed(int i, int j) const;

 private:
  std::vector<Monomial> terms_;
};

// Named coefficient blocks ("X00", "X01", ...) parsed from the text format.
class CoefficientTable {
 public:
  static CoefficientTable Parse(std::string_view text);

  // The table compiled into the library from data/q_coefficients.txt,
  // parsed on first use.
  static const CoefficientTable& Builtin();

  // Raw text of the compiled-in table.
  static std::string_view BuiltinText();

  const MonomialPolynomial& at(const std::string& name) const;
  const std::string& text(const std::string& name) const;
  bool contains(const std::string& name) const { return polys_.count(name) != 0; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, MonomialPolynomial> polys_;
  std::map<std::string, std::string> texts_;
};

// Rewrites a polynomial's text by swapping the digit indices i and j on
// every variable token, e.g. "a0b1" with (0,1) -> "a1b0". Exponents and
// coefficients are left untouched.
std::string TransposeIndicesInText(std::string_view text, int i, int j);

}  // namespace p4p

#endif  // P4P_MONOMIAL_LIST_H_
