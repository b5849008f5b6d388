#include "posicert/precheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace posicert {

namespace {

constexpr std::size_t kGridPoints = 21;
constexpr std::size_t kMaxGrid = 20000;

std::vector<std::vector<double>> sphere_grid(std::size_t n) {
  std::vector<std::vector<double>> out;
  if (n == 1) return {{1.0}, {-1.0}};
  const std::size_t dims = n - 1;
  std::size_t res = kGridPoints;
  while (res > 2 && std::pow(static_cast<double>(res), static_cast<double>(dims)) > kMaxGrid) --res;
  std::vector<std::size_t> idx(dims, 0);
  for (;;) {
    std::vector<double> x(n);
    double sin_prod = 1.0;
    for (std::size_t a = 0; a < dims; ++a) {
      double range = a + 1 == dims ? 2 * std::numbers::pi : std::numbers::pi;
      double phi = range * static_cast<double>(idx[a]) / static_cast<double>(res - 1);
      x[a] = sin_prod * std::cos(phi);
      sin_prod *= std::sin(phi);
    }
    x[n - 1] = sin_prod;
    out.push_back(std::move(x));
    std::size_t a = 0;
    while (a < dims && ++idx[a] == res) idx[a++] = 0;
    if (a == dims) break;
  }
  return out;
}

std::vector<std::vector<double>> cube_grid(std::size_t n, double radius) {
  std::size_t res = kGridPoints;
  while (res > 2 && std::pow(static_cast<double>(res), static_cast<double>(n)) > kMaxGrid) --res;
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    std::vector<double> x(n);
    for (std::size_t a = 0; a < n; ++a)
      x[a] = -radius + 2 * radius * static_cast<double>(idx[a]) / static_cast<double>(res - 1);
    out.push_back(std::move(x));
    std::size_t a = 0;
    while (a < n && ++idx[a] == res) idx[a++] = 0;
    if (a == n) break;
  }
  return out;
}

}  // namespace

PrecheckResult positivity_precheck(const ProblemSpec& spec, unsigned samples, std::uint64_t seed) {
  const std::size_t n = spec.n_vars();
  const auto& gr = spec.grading;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<std::vector<double>> points;
  for (unsigned s = 0; s < samples; ++s) {
    std::vector<double> x(n);
    for (auto& v : x) v = normal(rng);
    if (spec.homogeneous_required) {
      for (std::size_t b = 0; b < gr.n_blocks(); ++b) {
        double norm = 0;
        for (std::size_t i = gr.block_begin(b); i < gr.block_end(b); ++i) norm += x[i] * x[i];
        norm = std::sqrt(norm);
        if (norm == 0) continue;
        for (std::size_t i = gr.block_begin(b); i < gr.block_end(b); ++i) x[i] /= norm;
      }
    } else {
      for (auto& v : x) v *= 2.0;
    }
    points.push_back(std::move(x));
  }
  if (spec.homogeneous_required) {
    if (gr.n_blocks() == 1)
      for (auto& p : sphere_grid(n)) points.push_back(std::move(p));
  } else {
    for (auto& p : cube_grid(n, 2.0)) points.push_back(std::move(p));
  }

  const bool check_g = spec.mode == Mode::Certify || spec.mode == Mode::EpsilonMargin;
  PrecheckResult res;
  res.sampled = points.size();
  bool have_min = false;
  double worst_violation = 0;
  std::vector<Rational> exact(n);
  for (const auto& x : points) {
    for (std::size_t i = 0; i < n; ++i) exact[i] = Rational(x[i]);
    bool inside = true;
    for (const auto& h : spec.constraints)
      if (evaluate(h, exact) < 0) {
        inside = false;
        break;
      }
    if (!inside) continue;
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0; })) continue;
    ++res.kept;
    for (const char* field : {"f", "g"}) {
      if (field[0] == 'g' && !check_g) continue;
      const Polynomial& p = field[0] == 'f' ? spec.f : spec.g;
      Rational v = evaluate(p, exact);
      double vd = v.get_d();
      if (v == 0 && field[0] == 'f') {
        if (!res.zero) res.zero = x;
      } else if (v <= 0) {
        if (res.kind == PrecheckResult::Kind::NoCounterexample || vd < worst_violation) {
          res.kind = PrecheckResult::Kind::Counterexample;
          res.point = x;
          res.value = vd;
          res.field = field;
          worst_violation = vd;
        }
      } else if (res.kind == PrecheckResult::Kind::NoCounterexample && field[0] == 'f' && (!have_min || vd < res.value)) {
        have_min = true;
        res.point = x;
        res.value = vd;
      }
    }
  }
  return res;
}

}  // namespace posicert
