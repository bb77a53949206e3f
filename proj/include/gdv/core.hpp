#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdv {

/// Finite sample space: ordered atoms with strictly positive reference
/// probabilities summing to one.
struct SampleSpace {
  std::vector<std::string> atoms;
  std::vector<double> probs;

  SampleSpace(std::vector<std::string> atoms_, std::vector<double> probs_);

  static SampleSpace uniform(std::size_t n);

  std::size_t size() const { return probs.size(); }
};

/// A terminal payoff vector indexed by atoms. Entries must be finite.
struct Claim {
  std::vector<double> values;

  Claim() = default;
  explicit Claim(std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
};

Claim operator+(const Claim& a, const Claim& b);
Claim operator-(const Claim& a, const Claim& b);
Claim operator-(const Claim& a);
Claim operator*(double s, const Claim& a);
/// x + r on every atom.
Claim shift(const Claim& x, double r);
Claim constant_claim(std::size_t n, double r);
Claim unit_claim(std::size_t n, std::size_t k, double v = 1.0);

/// A probability measure Q absolutely continuous w.r.t. the reference
/// measure, stored as the measure itself (nonnegative, sums to one).
struct Density {
  std::vector<double> q;

  Density() = default;
  explicit Density(std::vector<double> q_);

  std::size_t size() const { return q.size(); }
  double operator[](std::size_t k) const { return q[k]; }

  /// dQ/dP ratios against the given space.
  std::vector<double> radon_nikodym(const SampleSpace& space) const;
};

enum class DensityClass { Equivalent, AbsolutelyContinuous };

DensityClass classify_density(const SampleSpace& space, const Density& q);

/// Built-in Young functions: even, convex, vanishing at zero.
struct YoungFunction {
  enum class Kind { Power, Exponential, Capped };

  Kind kind = Kind::Power;
  double param = 2.0;  // exponent p >= 1, or growth rate gamma > 0

  static YoungFunction power(double p);
  static YoungFunction exponential(double gamma);
  /// |a| on [-1,1], +infinity outside.
  static YoungFunction capped();

  /// May return +infinity (Capped variant outside its range).
  double operator()(double a) const;
};

/// E_q[x] as a plain dot product.
double expectation(const SampleSpace& space, const Density& q, const Claim& x);
double expectation(const SampleSpace& space, const Density& q,
                   const std::vector<double>& x);

/// inf{c > 0 : E[Phi(x/c)] <= 1}, located by bisection. Zero claim maps
/// to zero.
double luxemburg_norm(const YoungFunction& phi, const SampleSpace& space,
                      const Claim& x);

namespace detail {
void require(bool cond, const std::string& msg);
bool all_finite(const std::vector<double>& v);
}  // namespace detail

}  // namespace gdv
