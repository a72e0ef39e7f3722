#include "cubespec/probability.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>

#include "cubespec/format.hpp"
#include "cubespec/hypercube.hpp"

namespace cubespec {

EdgeProbability::EdgeProbability(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError("edge probability must lie in [0, 1], got " + format_shortest(p));
  log_p_ = std::log(p);
  log_1mp_ = std::log1p(-p);
}

ProbabilityFamily ProbabilityFamily::literal(double p) {
  (void)EdgeProbability(p);
  return {FamilyKind::literal, p, 0.0};
}

ProbabilityFamily ProbabilityFamily::polynomial(double beta) {
  if (!(beta > 0.0)) throw DomainError("polynomial family needs beta > 0");
  return {FamilyKind::polynomial, 1.0, beta};
}

ProbabilityFamily ProbabilityFamily::exponential(double gamma, double c) {
  if (!(gamma > 1.0) || !(c > 0.0))
    throw DomainError("exponential family needs gamma > 1 and c > 0");
  return {FamilyKind::exponential, c, gamma};
}

ProbabilityFamily ProbabilityFamily::resonant(double k, double c) {
  if (!(k > 0.0) || !(c > 0.0)) throw DomainError("resonant family needs k > 0 and c > 0");
  return {FamilyKind::resonant, c, k};
}

ProbabilityFamily ProbabilityFamily::critical(double nu) {
  if (!(nu > 0.0)) throw DomainError("critical family needs nu > 0");
  return {FamilyKind::critical, nu, 0.0};
}

ProbabilityFamily ProbabilityFamily::subcritical(double c) {
  if (!(c > 0.0)) throw DomainError("subcritical family needs c > 0");
  return {FamilyKind::subcritical, c, 0.0};
}

std::optional<int> ProbabilityFamily::resonance_order() const noexcept {
  if (kind_ != FamilyKind::resonant) return std::nullopt;
  const double r = std::round(parameter_);
  if (r >= 1.0 && std::fabs(parameter_ - r) < 1e-12) return static_cast<int>(r);
  return std::nullopt;
}

double ProbabilityFamily::evaluate(int n) const {
  const double x = n;
  double p = 0.0;
  switch (kind_) {
    case FamilyKind::literal: p = coefficient_; break;
    case FamilyKind::polynomial: p = std::pow(x, -parameter_); break;
    case FamilyKind::exponential: p = coefficient_ * std::pow(parameter_, -x); break;
    case FamilyKind::resonant: p = coefficient_ * std::exp2(-x / parameter_) / x; break;
    case FamilyKind::critical: p = coefficient_ / (x * std::exp2(x)); break;
    case FamilyKind::subcritical:
      if (n < 2) throw DomainError("subcritical family needs n >= 2");
      p = coefficient_ / (x * std::exp2(x) * std::log(x));
      break;
  }
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError("family " + describe() + " leaves [0, 1] at n = " + std::to_string(n));
  return p;
}

std::string ProbabilityFamily::describe() const {
  const auto num = [](double v) {
    auto s = format_shortest(v);
    if (s.size() > 2 && s.ends_with(".0")) s.resize(s.size() - 2);
    return s;
  };
  const auto coef = [&] { return coefficient_ == 1.0 ? std::string{} : num(coefficient_) + "*"; };
  switch (kind_) {
    case FamilyKind::literal: return format_shortest(coefficient_);
    case FamilyKind::polynomial: return "n^-" + num(parameter_);
    case FamilyKind::exponential: return coef() + num(parameter_) + "^-n";
    case FamilyKind::resonant: return coef() + "2^-n/" + num(parameter_) + "/n";
    case FamilyKind::critical: return num(coefficient_) + "/(n*2^n)";
    case FamilyKind::subcritical: return num(coefficient_) + "/(n*2^n*log n)";
  }
  return {};
}

ProbabilityFamily ProbabilityFamily::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(ch));
  s.erase(std::remove(s.begin(), s.end(), '{'), s.end());
  s.erase(std::remove(s.begin(), s.end(), '}'), s.end());

  static const std::string num = R"(([0-9]*\.?[0-9]+(?:e[-+]?[0-9]+)?))";
  static const std::regex literal_re("^" + num + "$");
  static const std::regex poly_re(R"(^n\^\(?-)" + num + R"(\)?$)");
  static const std::regex expo_re("^(?:" + num + R"(\*)?)" + num + R"(\^\(?-n\)?$)");
  static const std::regex reso_re("^(?:" + num + R"(\*)?2\^\(?-n/)" + num + R"(\)?/n$)");
  static const std::regex crit_re("^" + num + R"(/\(n\*2\^n\)$)");
  static const std::regex sub_re("^" + num + R"(/\(n\*2\^n\*logn\)$)");

  const auto value = [](const std::ssub_match& m, double fallback) {
    return m.matched ? std::stod(m.str()) : fallback;
  };
  std::smatch m;
  if (std::regex_match(s, m, literal_re)) return literal(std::stod(m[1].str()));
  if (std::regex_match(s, m, poly_re)) return polynomial(std::stod(m[1].str()));
  if (std::regex_match(s, m, reso_re)) return resonant(std::stod(m[2].str()), value(m[1], 1.0));
  if (std::regex_match(s, m, expo_re)) return exponential(std::stod(m[2].str()), value(m[1], 1.0));
  if (std::regex_match(s, m, crit_re)) return critical(std::stod(m[1].str()));
  if (std::regex_match(s, m, sub_re)) return subcritical(std::stod(m[1].str()));
  throw DomainError("unrecognised probability family '" + std::string(text) + "'");
}

std::string_view to_string(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::literal: return "literal";
    case FamilyKind::polynomial: return "polynomial";
    case FamilyKind::exponential: return "exponential";
    case FamilyKind::resonant: return "resonant";
    case FamilyKind::critical: return "critical";
    case FamilyKind::subcritical: return "subcritical";
  }
  return "unknown";
}

}  // namespace cubespec
