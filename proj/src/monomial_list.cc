#include "p4p/monomial_list.h"

#include <cctype>
#include <cmath>
#include <sstream>

#include "p4p/coefficient_text.h"
#include "p4p/error.h"

namespace p4p {

namespace {

[[noreturn]] void ParseError(const std::string& msg) {
  throw Error(ErrorCode::kInvalidArgument, "monomial list: " + msg);
}

bool IsVariableLetter(char ch) { return ch >= 'a' && ch <= 'd'; }

}  // namespace

MonomialPolynomial MonomialPolynomial::Parse(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) ParseError("empty polynomial");

  std::vector<Monomial> terms;
  std::size_t pos = 0;
  while (pos < s.size()) {
    Monomial m;
    std::int64_t sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!terms.empty()) {
      ParseError("expected '+' or '-' at offset " + std::to_string(pos));
    }
    std::int64_t coefficient = 1;
    const bool has_digits = pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
    if (has_digits) {
      coefficient = 0;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        coefficient = coefficient * 10 + (s[pos] - '0');
        ++pos;
      }
    }
    m.coefficient = sign * coefficient;
    bool any_variable = false;
    while (pos < s.size() && IsVariableLetter(s[pos])) {
      const char letter = s[pos++];
      if (pos >= s.size() || s[pos] < '0' || s[pos] > '2') {
        ParseError(std::string("variable '") + letter + "' needs an index 0..2");
      }
      const int index = s[pos++] - '0';
      int exponent = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        exponent = 0;
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) {
          ParseError("missing exponent");
        }
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          exponent = exponent * 10 + (s[pos++] - '0');
        }
      }
      m.exponents[VariableSlot(letter, index)] += static_cast<std::uint8_t>(exponent);
      any_variable = true;
    }
    if (!any_variable && !has_digits) {
      ParseError("empty term at offset " + std::to_string(pos));
    }
    if (pos < s.size() && s[pos] != '+' && s[pos] != '-') {
      ParseError("unexpected character '" + std::string(1, s[pos]) + "'");
    }
    terms.push_back(m);
  }
  return MonomialPolynomial(std::move(terms));
}

double MonomialPolynomial::AbsoluteTermSum(
    const std::array<double, kNumCoordVariables>& vars) const {
  double sum = 0.0;
  for (const Monomial& m : terms_) {
    double term = std::abs(static_cast<double>(m.coefficient));
    for (int v = 0; v < kNumCoordVariables; ++v) {
      for (int e = 0; e < m.exponents[v]; ++e) term *= std::abs(vars[v]);
    }
    sum += term;
  }
  return sum;
}

MonomialPolynomial MonomialPolynomial::Transposed(int i, int j) const {
  std::vector<Monomial> out = terms_;
  for (Monomial& m : out) {
    for (int letter = 0; letter < 4; ++letter) {
      std::swap(m.exponents[letter * 3 + i], m.exponents[letter * 3 + j]);
    }
  }
  return MonomialPolynomial(std::move(out));
}

CoefficientTable CoefficientTable::Parse(std::string_view text) {
  CoefficientTable table;
  std::string name;
  std::string body;
  const auto flush = [&] {
    if (name.empty()) return;
    table.polys_[name] = MonomialPolynomial::Parse(body);
    table.texts_[name] = body;
    name.clear();
    body.clear();
  };

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      flush();
      continue;
    }
    if (line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      flush();
      const auto name_end = line.find_last_not_of(" \t", eq - 1);
      name = line.substr(first, name_end - first + 1);
      const auto body_start = line.find_first_not_of(" \t", eq + 1);
      body = body_start == std::string::npos ? std::string() : line.substr(body_start);
    } else {
      if (name.empty()) ParseError("continuation line outside a block");
      body += line;
    }
  }
  flush();
  return table;
}

std::string_view CoefficientTable::BuiltinText() { return internal::kCoefficientText; }

const CoefficientTable& CoefficientTable::Builtin() {
  static const CoefficientTable table = Parse(BuiltinText());
  return table;
}

const MonomialPolynomial& CoefficientTable::at(const std::string& name) const {
  const auto it = polys_.find(name);
  if (it == polys_.end()) ParseError("no block named " + name);
  return it->second;
}

const std::string& CoefficientTable::text(const std::string& name) const {
  const auto it = texts_.find(name);
  if (it == texts_.end()) ParseError("no block named " + name);
  return it->second;
}

std::vector<std::string> CoefficientTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, poly] : polys_) out.push_back(name);
  return out;
}

std::string TransposeIndicesInText(std::string_view text, int i, int j) {
  std::string out(text);
  for (std::size_t pos = 0; pos + 1 < out.size(); ++pos) {
    if (!IsVariableLetter(out[pos])) continue;
    const int index = out[pos + 1] - '0';
    if (index == i) {
      out[pos + 1] = static_cast<char>('0' + j);
    } else if (index == j) {
      out[pos + 1] = static_cast<char>('0' + i);
    }
    ++pos;
  }
  return out;
}

}  // namespace p4p
