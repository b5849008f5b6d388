#pragma once

#include "posicert/driver.hpp"
#include "posicert/exact.hpp"
#include "posicert/sdp.hpp"
#include "support.hpp"

#include <random>

namespace posicert::testing {

inline sdp::Problem gram_margin(const std::string& text) {
  auto sys = std::get<gram::GramSystem>(gram::build_for_target(poly(text, {"x", "y"}), {}, Grading::single(2),
                                                               {gram::BasisKind::Graded, false, {}}));
  auto rows = std::get<std::vector<std::size_t>>(exact::independent_rows(sys));
  return margin_problem(sys, rows);
}

/// Strictly feasible margin instance: ⟨I, X⟩ row plus random rows, consistent
/// with X0 = random ≻ 0 and t0.
inline sdp::Problem random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nblocks(1, 3), dim(1, 6);
  std::normal_distribution<double> gauss;
  sdp::Problem p;
  int nb = nblocks(rng);
  std::vector<Eigen::MatrixXd> x0;
  for (int b = 0; b < nb; ++b) {
    int d = dim(rng);
    p.block_dims.push_back(d);
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = gauss(rng);
    x0.push_back(a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d));
  }
  std::size_t total = 0;
  for (auto d : p.block_dims) total += d * (d + 1) / 2;
  std::uniform_int_distribution<std::size_t> rows(1, total);
  const std::size_t m = rows(rng);
  p.n_free = 1;
  p.objective = {1.0};
  const double t0 = gauss(rng);
  for (std::size_t k = 0; k < m; ++k) {
    sdp::Constraint c;
    double trace = 0, value = 0;
    for (std::size_t b = 0; b < p.block_dims.size(); ++b)
      for (std::uint32_t i = 0; i < p.block_dims[b]; ++i)
        for (std::uint32_t j = i; j < p.block_dims[b]; ++j) {
          double v = k == 0 ? (i == j ? 1.0 : 0.0) : gauss(rng);
          bool keep = k == 0 || c.entries.empty() || std::uniform_real_distribution<double>(0, 1)(rng) < 0.5;
          if (v == 0 || !keep) continue;
          c.entries.push_back({static_cast<std::uint32_t>(b), i, j, v});
          if (i == j) trace += v;
          value += (i == j ? 1 : 2) * v * x0[b](i, j);
        }
    c.free = {trace};
    c.rhs = value + t0 * trace;
    p.constraints.push_back(std::move(c));
  }
  return p;
}


}  // namespace posicert::testing
