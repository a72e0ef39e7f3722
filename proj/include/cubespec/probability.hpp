#pragma once

// Edge probabilities, either literal or as a parameter family p(n).

#include <optional>
#include <string>
#include <string_view>

namespace cubespec {

/// p together with log p and log(1 - p).
class EdgeProbability {
public:
  explicit EdgeProbability(double p);

  double value() const noexcept { return p_; }
  double log_p() const noexcept { return log_p_; }
  double log_1mp() const noexcept { return log_1mp_; }
  /// log(1/p), +inf at p = 0.
  double log_inverse() const noexcept { return -log_p_; }

  friend bool operator==(const EdgeProbability& a, const EdgeProbability& b) noexcept {
    return a.p_ == b.p_;
  }

private:
  double p_;
  double log_p_;
  double log_1mp_;
};

enum class FamilyKind {
  literal,      // p fixed
  polynomial,   // n^{-beta}
  exponential,  // c * gamma^{-n}
  resonant,     // c * 2^{-n/k} / n
  critical,     // nu / (n 2^n)
  subcritical,  // c / (n 2^n log n)
};

/// A probability family p(n). `parse` accepts:
///   "0.01"                      literal
///   "n^-1.5"                    polynomial, beta = 1.5
///   "c*1.5^-n", "1.5^-n"        exponential, gamma = 1.5
///   "c*2^-n/k/n", "2^(-n/k)/n"  resonant (k may be fractional)
///   "nu/(n*2^n)"                critical
///   "c/(n*2^n*log n)"           subcritical
/// Whitespace is ignored.
class ProbabilityFamily {
public:
  static ProbabilityFamily literal(double p);
  static ProbabilityFamily polynomial(double beta);
  static ProbabilityFamily exponential(double gamma, double c = 1.0);
  static ProbabilityFamily resonant(double k, double c = 1.0);
  static ProbabilityFamily critical(double nu);
  static ProbabilityFamily subcritical(double c = 1.0);
  static ProbabilityFamily parse(std::string_view text);

  FamilyKind kind() const noexcept { return kind_; }
  double coefficient() const noexcept { return coefficient_; }
  /// beta, gamma or k depending on the kind; 0 otherwise.
  double parameter() const noexcept { return parameter_; }

  /// Integer resonance order if this is c*2^{-n/k}/n with integral k.
  std::optional<int> resonance_order() const noexcept;

  double evaluate(int n) const;
  EdgeProbability at(int n) const { return EdgeProbability(evaluate(n)); }

  /// Canonical text form; parse(describe()) reproduces the family.
  std::string describe() const;

private:
  ProbabilityFamily(FamilyKind kind, double coefficient, double parameter)
      : kind_(kind), coefficient_(coefficient), parameter_(parameter) {}

  FamilyKind kind_;
  double coefficient_;
  double parameter_;
};

std::string_view to_string(FamilyKind kind) noexcept;

}  // namespace cubespec
