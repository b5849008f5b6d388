#include "posicert/exact.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace posicert::exact {

Rational best_rational(double value, const Integer& max_denominator) {
  if (max_denominator < 1) throw std::invalid_argument("best_rational: denominator bound must be positive");
  Rational x = exact_rational(value);
  // Convergents h/k of the continued fraction of x.
  Integer h_prev2 = 0, h_prev = 1, k_prev2 = 1, k_prev = 0;
  Rational rem = x;
  for (;;) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    Integer h = a * h_prev + h_prev2;
    Integer k = a * k_prev + k_prev2;
    if (k > max_denominator) {
      // Largest admissible semiconvergent versus the last convergent.
      Integer t = (max_denominator - k_prev2) / k_prev;
      Rational semi(t * h_prev + h_prev2, t * k_prev + k_prev2);
      Rational conv(h_prev, k_prev);
      semi.canonicalize();
      conv.canonicalize();
      return abs(semi - x) < abs(conv - x) ? semi : conv;
    }
    Rational frac = rem - Rational(a);
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    if (frac == 0) {
      Rational q(h, k);
      q.canonicalize();
      return q;
    }
    rem = 1 / frac;
  }
}

RationalMatrix round_to_rational(const Eigen::MatrixXd& q, const Integer& max_denominator) {
  if (q.rows() != q.cols()) throw std::invalid_argument("round_to_rational: matrix is not square");
  const auto n = static_cast<std::size_t>(q.rows());
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double v = 0.5 * (q(i, j) + q(j, i));
      out(i, j) = best_rational(v, max_denominator);
      out(j, i) = out(i, j);
    }
  return out;
}

namespace {

using SparseRow = std::map<std::size_t, Rational>;

struct VariableIndex {
  std::vector<std::size_t> offsets;
  std::size_t free_offset = 0;

  explicit VariableIndex(const gram::GramSystem& s) {
    std::size_t off = 0;
    for (const auto& b : s.blocks) {
      offsets.push_back(off);
      off += b.dim() * b.dim();
    }
    free_offset = off;
  }
  std::size_t of(std::size_t block, std::size_t i, std::size_t j, std::size_t dim) const {
    return offsets[block] + i * dim + j;
  }
};

SparseRow row_of(const gram::GramSystem& s, const gram::GramConstraint& c, const VariableIndex& idx) {
  SparseRow row;
  for (std::size_t b = 0; b < c.blocks.size(); ++b)
    for (const auto& e : c.blocks[b]) {
      Rational v = e.row == e.col ? e.value : 2 * e.value;
      auto& slot = row[idx.of(b, e.row, e.col, s.blocks[b].dim())];
      slot += v;
    }
  for (std::size_t k = 0; k < c.free.size(); ++k)
    if (c.free[k] != 0) row[idx.free_offset + k] += c.free[k];
  std::erase_if(row, [](const auto& kv) { return kv.second == 0; });
  return row;
}

}  // namespace

std::variant<std::vector<std::size_t>, Inconsistent> independent_rows(const gram::GramSystem& system) {
  struct Pivot {
    std::size_t col;
    SparseRow row;
    Rational rhs;
  };
  VariableIndex idx(system);
  std::vector<Pivot> basis;
  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < system.constraints.size(); ++k) {
    const auto& c = system.constraints[k];
    SparseRow row = row_of(system, c, idx);
    Rational rhs = c.rhs;
    for (const auto& p : basis) {
      auto it = row.find(p.col);
      if (it == row.end()) continue;
      Rational factor = it->second / p.row.at(p.col);
      for (const auto& [col, v] : p.row) {
        auto& slot = row[col];
        slot -= factor * v;
        if (slot == 0) row.erase(col);
      }
      rhs -= factor * p.rhs;
    }
    if (row.empty()) {
      if (rhs != 0) return Inconsistent{c.monomial};
      continue;
    }
    std::size_t col = row.begin()->first;
    basis.push_back({col, std::move(row), rhs});
    chosen.push_back(k);
  }
  return chosen;
}

std::vector<Rational> solve_fraction_free(const RationalMatrix& a, const std::vector<Rational>& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_fraction_free: dimension mismatch");
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    Integer scale = b[i].get_den();
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j).get_num() * (scale / a(i, j).get_den());
    m[i][n] = b[i].get_num() * (scale / b[i].get_den());
  }
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) throw std::domain_error("solve_fraction_free: singular matrix");
    if (p != k) std::swap(m[p], m[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        Integer v = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc(m[i][n]);
    for (std::size_t j = i + 1; j < n; ++j)
      if (m[i][j] != 0) acc -= Rational(m[i][j]) * x[j];
    x[i] = acc / Rational(m[i][i]);
  }
  return x;
}

std::variant<std::vector<RationalMatrix>, Inconsistent> project_to_constraints(
    const std::vector<RationalMatrix>& q, const gram::GramSystem& system) {
  if (!system.free_terms.empty()) throw std::invalid_argument("project_to_constraints: free terms must be fixed first");
  if (q.size() != system.blocks.size()) throw std::invalid_argument("project_to_constraints: one matrix per block");
  for (std::size_t b = 0; b < q.size(); ++b)
    if (q[b].rows() != system.blocks[b].dim() || q[b].cols() != system.blocks[b].dim())
      throw std::invalid_argument("project_to_constraints: matrix dimension does not match block");

  auto sel = independent_rows(system);
  if (auto* bad = std::get_if<Inconsistent>(&sel)) return *bad;
  const auto& rows = std::get<std::vector<std::size_t>>(sel);
  const std::size_t m = rows.size();

  // Gram matrix of the constraint matrices under ⟨A, B⟩ = tr(AB).
  struct Touch {
    std::size_t row;
    Rational value;
  };
  std::map<std::tuple<std::size_t, std::uint32_t, std::uint32_t>, std::vector<Touch>> by_var;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = system.constraints[rows[r]];
    for (std::size_t b = 0; b < c.blocks.size(); ++b)
      for (const auto& e : c.blocks[b]) by_var[{b, e.row, e.col}].push_back({r, e.value});
  }
  RationalMatrix gmat(m, m);
  for (const auto& [var, touches] : by_var) {
    int mult = std::get<1>(var) == std::get<2>(var) ? 1 : 2;
    for (const auto& a : touches)
      for (const auto& b : touches) gmat(a.row, b.row) += mult * a.value * b.value;
  }
  std::vector<Rational> resid(m);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = system.constraints[rows[r]];
    resid[r] = c.rhs - gram::evaluate_constraint(c, q);
  }
  std::vector<RationalMatrix> out = q;
  bool all_zero = std::all_of(resid.begin(), resid.end(), [](const Rational& v) { return v == 0; });
  if (m == 0 || all_zero) return out;
  auto lambda = solve_fraction_free(gmat, resid);
  for (std::size_t r = 0; r < m; ++r) {
    if (lambda[r] == 0) continue;
    const auto& c = system.constraints[rows[r]];
    for (std::size_t b = 0; b < c.blocks.size(); ++b)
      for (const auto& e : c.blocks[b]) {
        Rational delta = lambda[r] * e.value;
        out[b](e.row, e.col) += delta;
        if (e.row != e.col) out[b](e.col, e.row) += delta;
      }
  }
  return out;
}

std::variant<Ldlt, Indefinite> exact_ldlt(const RationalMatrix& q) {
  const std::size_t n = q.rows();
  if (q.cols() != n) throw std::invalid_argument("exact_ldlt: matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (q(i, j) != q(j, i)) throw std::invalid_argument("exact_ldlt: matrix is not symmetric");
  RationalMatrix a = q;  // lower triangle is updated in place
  Ldlt f{RationalMatrix::identity(n), std::vector<Rational>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const Rational d = a(k, k);
    if (d < 0) return Indefinite{k};
    if (d == 0) {
      for (std::size_t i = k + 1; i < n; ++i)
        if (a(i, k) != 0) return Indefinite{k};
      continue;
    }
    f.d[k] = d;
    for (std::size_t i = k + 1; i < n; ++i) f.l(i, k) = a(i, k) / d;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (f.l(i, k) == 0) continue;
      for (std::size_t j = k + 1; j <= i; ++j) a(i, j) -= f.l(i, k) * a(j, k);
    }
  }
  return f;
}

std::vector<WeightedSquare> extract_sos(const Ldlt& factor, const std::vector<Polynomial>& gram_vector) {
  const std::size_t n = factor.d.size();
  if (gram_vector.size() != n || factor.l.rows() != n) throw std::invalid_argument("extract_sos: dimension mismatch");
  std::vector<WeightedSquare> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (factor.d[j] == 0) continue;
    Polynomial p(gram_vector[j].n_vars());
    for (std::size_t i = j; i < n; ++i)
      if (factor.l(i, j) != 0) p += gram_vector[i] * factor.l(i, j);
    if (p.is_zero()) continue;
    out.push_back({factor.d[j], std::move(p)});
  }
  return out;
}

double frobenius_distance(const std::vector<RationalMatrix>& a, const std::vector<Eigen::MatrixXd>& b) {
  double sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k].rows(); ++i)
      for (std::size_t j = 0; j < a[k].cols(); ++j) {
        double diff = a[k](i, j).get_d() - b[k](i, j);
        sum += diff * diff;
      }
  return std::sqrt(sum);
}

}  // namespace posicert::exact
