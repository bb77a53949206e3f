#include "gdv/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace gdv {

namespace detail {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double a) { return std::isfinite(a); });
}

}  // namespace detail

SampleSpace::SampleSpace(std::vector<std::string> atoms_,
                         std::vector<double> probs_)
    : atoms(std::move(atoms_)), probs(std::move(probs_)) {
  detail::require(!probs.empty(), "sample space needs at least one atom");
  detail::require(atoms.size() == probs.size(),
                  "atom labels and probabilities differ in length");
  double sum = 0.0;
  for (double p : probs) {
    detail::require(std::isfinite(p) && p > 0.0,
                    "reference probabilities must be strictly positive");
    sum += p;
  }
  detail::require(std::abs(sum - 1.0) <= 1e-12,
                  "reference probabilities must sum to one");
}

SampleSpace SampleSpace::uniform(std::size_t n) {
  detail::require(n >= 1, "sample space needs at least one atom");
  std::vector<std::string> labels(n);
  for (std::size_t k = 0; k < n; ++k) labels[k] = "w" + std::to_string(k + 1);
  return SampleSpace(std::move(labels), std::vector<double>(n, 1.0 / double(n)));
}

Claim::Claim(std::vector<double> v) : values(std::move(v)) {
  detail::require(detail::all_finite(values), "claim entries must be finite");
}

Claim operator+(const Claim& a, const Claim& b) {
  detail::require(a.size() == b.size(), "claim dimension mismatch");
  Claim r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] += b[k];
  return r;
}

Claim operator-(const Claim& a, const Claim& b) {
  detail::require(a.size() == b.size(), "claim dimension mismatch");
  Claim r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
  return r;
}

Claim operator-(const Claim& a) {
  Claim r = a;
  for (double& v : r.values) v = -v;
  return r;
}

Claim operator*(double s, const Claim& a) {
  Claim r = a;
  for (double& v : r.values) v *= s;
  return r;
}

Claim shift(const Claim& x, double r) {
  Claim y = x;
  for (double& v : y.values) v += r;
  return y;
}

Claim constant_claim(std::size_t n, double r) {
  return Claim(std::vector<double>(n, r));
}

Claim unit_claim(std::size_t n, std::size_t k, double v) {
  std::vector<double> e(n, 0.0);
  e.at(k) = v;
  return Claim(std::move(e));
}

Density::Density(std::vector<double> q_) : q(std::move(q_)) {
  double sum = 0.0;
  for (double w : q) {
    detail::require(std::isfinite(w) && w >= 0.0,
                    "density weights must be nonnegative");
    sum += w;
  }
  detail::require(std::abs(sum - 1.0) <= 1e-12, "density must sum to one");
}

std::vector<double> Density::radon_nikodym(const SampleSpace& space) const {
  detail::require(space.size() == size(), "density dimension mismatch");
  std::vector<double> r(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) r[k] = q[k] / space.probs[k];
  return r;
}

DensityClass classify_density(const SampleSpace& space, const Density& q) {
  detail::require(space.size() == q.size(), "density dimension mismatch");
  double mn = *std::min_element(q.q.begin(), q.q.end());
  return mn > 0.0 ? DensityClass::Equivalent
                  : DensityClass::AbsolutelyContinuous;
}

YoungFunction YoungFunction::power(double p) {
  detail::require(p >= 1.0, "power Young function needs exponent >= 1");
  return YoungFunction{Kind::Power, p};
}

YoungFunction YoungFunction::exponential(double gamma) {
  detail::require(gamma > 0.0, "exponential Young function needs gamma > 0");
  return YoungFunction{Kind::Exponential, gamma};
}

YoungFunction YoungFunction::capped() {
  return YoungFunction{Kind::Capped, 0.0};
}

double YoungFunction::operator()(double a) const {
  double t = std::abs(a);
  switch (kind) {
    case Kind::Power:
      return std::pow(t, param);
    case Kind::Exponential:
      return std::expm1(param * t);
    case Kind::Capped:
      return t <= 1.0 ? t : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double expectation(const SampleSpace& space, const Density& q,
                   const std::vector<double>& x) {
  detail::require(space.size() == q.size() && q.size() == x.size(),
                  "expectation dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += q[k] * x[k];
  return acc;
}

double expectation(const SampleSpace& space, const Density& q, const Claim& x) {
  return expectation(space, q, x.values);
}

double luxemburg_norm(const YoungFunction& phi, const SampleSpace& space,
                      const Claim& x) {
  detail::require(space.size() == x.size(), "norm dimension mismatch");
  double sup = 0.0;
  for (double v : x.values) sup = std::max(sup, std::abs(v));
  if (sup == 0.0) return 0.0;

  // E[Phi(x/c)] - 1, nonincreasing in c; may be +infinity for small c.
  auto excess = [&](double c) {
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      double val = phi(x[k] / c);
      if (std::isinf(val)) return std::numeric_limits<double>::infinity();
      acc += space.probs[k] * val;
    }
    return acc - 1.0;
  };

  double hi = sup * 2.0;
  while (excess(hi) > 0.0) hi *= 2.0;
  double lo = hi / 2.0;
  while (lo > 1e-300 && excess(lo) <= 0.0) {
    hi = lo;
    lo /= 2.0;
  }
  // Invariant: excess(lo) > 0 >= excess(hi) (lo infeasible, hi feasible).
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (excess(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace gdv
