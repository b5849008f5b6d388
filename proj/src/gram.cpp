#include "posicert/gram.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "posicert/problem.hpp"

namespace posicert::gram {

namespace {

bool grlex_ascending(const Monomial& a, const Monomial& b) { return GrlexDescending{}(b, a); }

// All exponent vectors over variables [begin, end) with total degree `degree`,
// appended to each prefix in `prefixes`.
void extend_block(std::vector<Monomial>& prefixes, std::size_t begin, std::size_t end, std::uint64_t degree) {
  std::vector<Monomial> out;
  for (const auto& prefix : prefixes) {
    Monomial m = prefix;
    // Odometer over compositions of `degree` into end-begin parts.
    auto rec = [&](auto&& self, std::size_t var, std::uint64_t left) -> void {
      if (var + 1 == end) {
        m[var] = static_cast<std::uint32_t>(left);
        out.push_back(m);
        m[var] = 0;
        return;
      }
      for (std::uint64_t k = 0; k <= left; ++k) {
        m[var] = static_cast<std::uint32_t>(k);
        self(self, var + 1, left - k);
      }
      m[var] = 0;
    };
    rec(rec, begin, degree);
  }
  prefixes = std::move(out);
}

std::vector<Polynomial> gram_vector_of(const GramBlock& block, std::size_t n_vars) {
  std::vector<Polynomial> out;
  if (!block.active) return out;
  if (!block.transform) {
    for (const auto& m : block.basis) out.push_back(Polynomial::term(m, 1));
    return out;
  }
  const auto& w = *block.transform;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    Polynomial p(n_vars);
    for (std::size_t i = 0; i < w.rows(); ++i) p.add_term(block.basis[i], w(i, j));
    out.push_back(std::move(p));
  }
  return out;
}

GramSystem assemble(Polynomial target, std::vector<GramBlock> blocks, std::vector<Polynomial> free_terms) {
  const std::size_t nb = blocks.size();
  const std::size_t nf = free_terms.size();
  std::map<Monomial, GramConstraint, GrlexDescending> rows;
  auto row = [&](const Monomial& m) -> GramConstraint& {
    auto [it, inserted] = rows.try_emplace(m);
    if (inserted) {
      it->second.monomial = m;
      it->second.blocks.resize(nb);
      it->second.free.assign(nf, Rational(0));
    }
    return it->second;
  };
  for (const auto& [m, c] : target.terms()) row(m).rhs = c;
  for (std::size_t k = 0; k < nf; ++k)
    for (const auto& [m, c] : free_terms[k].terms()) row(m).free[k] = c;

  for (std::size_t b = 0; b < nb; ++b) {
    auto& block = blocks[b];
    block.gram_vector = gram_vector_of(block, target.n_vars());
    const auto& cv = block.gram_vector;
    for (std::uint32_t i = 0; i < cv.size(); ++i)
      for (std::uint32_t j = i; j < cv.size(); ++j) {
        Polynomial prod = cv[i] * cv[j] * block.multiplier;
        for (const auto& [m, c] : prod.terms()) row(m).blocks[b].push_back({i, j, c});
      }
  }

  GramSystem sys;
  sys.target = std::move(target);
  sys.blocks = std::move(blocks);
  sys.free_terms = std::move(free_terms);
  for (auto& [m, c] : rows) sys.constraints.push_back(std::move(c));
  return sys;
}

}  // namespace

std::size_t GramSystem::n_variables() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.dim() * (b.dim() + 1) / 2;
  return n;
}

std::vector<Monomial> prune_basis(std::vector<Monomial> basis, const MonomialSet& support) {
  MonomialSet alive(basis.begin(), basis.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& b : basis) {
      if (!alive.count(b)) continue;
      Monomial twice = b * b;
      if (support.count(twice)) continue;
      bool expressible = false;
      for (const auto& c : alive) {
        if (c == b) continue;
        auto rest = twice.divide(c);
        if (rest && alive.count(*rest)) {
          expressible = true;
          break;
        }
      }
      if (!expressible) {
        alive.erase(b);
        changed = true;
      }
    }
  }
  std::vector<Monomial> out;
  for (auto& b : basis)
    if (alive.count(b)) out.push_back(std::move(b));
  return out;
}

std::vector<Monomial> monomial_basis(std::size_t n_vars, const Grading& grading,
                                     const std::vector<std::uint64_t>& target_multidegree,
                                     const MonomialSet& support_hint, BasisKind kind, bool prune) {
  for (auto d : target_multidegree)
    if (d % 2 != 0) throw std::invalid_argument("monomial_basis: target degree must be even");
  std::vector<Monomial> basis;
  if (kind == BasisKind::Graded) {
    if (grading.n_vars() != n_vars || target_multidegree.size() != grading.n_blocks())
      throw std::invalid_argument("monomial_basis: degree vector does not match grading");
    basis.emplace_back(n_vars);
    for (std::size_t b = 0; b < grading.n_blocks(); ++b)
      extend_block(basis, grading.block_begin(b), grading.block_end(b), target_multidegree[b] / 2);
  } else {
    if (target_multidegree.size() != 1) throw std::invalid_argument("monomial_basis: expected a total degree");
    for (std::uint64_t d = 0; d <= target_multidegree[0] / 2; ++d) {
      std::vector<Monomial> layer{Monomial(n_vars)};
      extend_block(layer, 0, n_vars, d);
      basis.insert(basis.end(), layer.begin(), layer.end());
    }
  }
  std::sort(basis.begin(), basis.end(), grlex_ascending);
  if (prune) basis = prune_basis(std::move(basis), support_hint);
  return basis;
}

BuildResult build_gram_system(const Polynomial& f, const Polynomial& g, unsigned N,
                              const std::vector<Polynomial>& constraints, const Grading& grading,
                              const BuildOptions& options) {
  return build_for_target(f * pow(g, N), constraints, grading, options);
}

BuildResult build_for_target(const Polynomial& target, const std::vector<Polynomial>& constraints,
                             const Grading& grading, const BuildOptions& options) {
  const std::size_t r = constraints.size();
  if (r > kMaxConstraints) throw std::invalid_argument("at most 16 constraints are supported");
  const std::size_t n = target.n_vars();
  if (grading.n_vars() != n) throw std::invalid_argument("grading does not match target variables");

  // Everything the identity must reproduce, for degree bookkeeping and pruning.
  MonomialSet support;
  for (const auto& [m, c] : target.terms()) support.insert(m);
  for (const auto& phi : options.free_terms)
    for (const auto& [m, c] : phi.terms()) support.insert(m);
  if (support.empty()) throw std::invalid_argument("target and free terms are all zero");

  std::vector<std::uint64_t> target_deg;
  if (options.kind == BasisKind::Graded) {
    std::optional<std::vector<std::uint64_t>> common;
    for (const auto& m : support) {
      auto d = grading.degrees(m);
      if (common && *common != d) throw std::invalid_argument("target is not graded with respect to the blocks");
      common = d;
    }
    target_deg = *common;
  } else {
    std::uint64_t top = 0;
    for (const auto& m : support) top = std::max(top, m.degree());
    target_deg = {top + (top % 2)};
  }

  const bool prune = options.prune && r == 0;
  bool any_parity_ok = false;
  std::vector<GramBlock> blocks;
  for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
    GramBlock block;
    block.product_index.resize(r);
    block.multiplier = Polynomial::constant(n, 1);
    for (std::size_t i = 0; i < r; ++i)
      if (mask >> i & 1u) {
        block.product_index[i] = true;
        block.multiplier = block.multiplier * constraints[i];
      }
    std::optional<std::vector<std::uint64_t>> half;
    if (!block.multiplier.is_zero()) {
      std::vector<std::uint64_t> mdeg;
      if (options.kind == BasisKind::Graded) {
        auto d = multidegree(block.multiplier, grading);
        if (!d) throw std::invalid_argument("constraint product is not graded with respect to the blocks");
        mdeg = *d;
      } else {
        mdeg = {block.multiplier.total_degree()};
      }
      bool ok = true;
      std::vector<std::uint64_t> diff(target_deg.size());
      for (std::size_t k = 0; k < target_deg.size(); ++k) {
        if (mdeg[k] > target_deg[k]) {
          ok = false;
          break;
        }
        diff[k] = target_deg[k] - mdeg[k];
        if (diff[k] % 2 != 0) {
          if (options.kind == BasisKind::Graded) {
            ok = false;
            break;
          }
          diff[k] -= 1;
        }
      }
      if (ok) half = diff;
    }
    if (half) {
      any_parity_ok = true;
      block.basis = monomial_basis(n, grading, *half, support, options.kind, prune);
      block.active = !block.basis.empty();
    }
    if (!block.active) block.basis.clear();
    blocks.push_back(std::move(block));
  }
  if (std::none_of(blocks.begin(), blocks.end(), [](const GramBlock& b) { return b.active; })) {
    if (!any_parity_ok) return ParityInfeasible{};
    return SupportInfeasible{target.is_zero() ? Monomial(n) : target.terms().begin()->first};
  }

  GramSystem sys = assemble(target, std::move(blocks), options.free_terms);
  for (const auto& c : sys.constraints) {
    bool reachable = std::any_of(c.blocks.begin(), c.blocks.end(), [](const auto& e) { return !e.empty(); }) ||
                     std::any_of(c.free.begin(), c.free.end(), [](const Rational& q) { return q != 0; });
    if (!reachable && c.rhs != 0) return SupportInfeasible{c.monomial};
  }
  return sys;
}

GramSystem restrict_block(const GramSystem& system, std::size_t block, const RationalMatrix& w) {
  auto blocks = system.blocks;
  auto& b = blocks.at(block);
  if (w.rows() != b.dim()) throw std::invalid_argument("restrict_block: transform has wrong row count");
  b.transform = b.transform ? (*b.transform) * w : w;
  if (w.cols() == 0) {
    b.active = false;
    b.transform.reset();
    b.basis.clear();
  }
  return assemble(system.target, std::move(blocks), system.free_terms);
}

Polynomial reconstruct(const GramSystem& system, const std::vector<RationalMatrix>& matrices,
                       const std::vector<Rational>& free_values) {
  if (matrices.size() != system.blocks.size()) throw std::invalid_argument("reconstruct: one matrix per block expected");
  if (!free_values.empty() && free_values.size() != system.free_terms.size())
    throw std::invalid_argument("reconstruct: wrong number of free values");
  const std::size_t n = system.target.n_vars();
  Polynomial total(n);
  for (std::size_t b = 0; b < system.blocks.size(); ++b) {
    const auto& block = system.blocks[b];
    const auto& q = matrices[b];
    const auto& cv = block.gram_vector;
    if (q.rows() != cv.size() || q.cols() != cv.size())
      throw std::invalid_argument("reconstruct: matrix dimension does not match block basis");
    Polynomial s(n);
    for (std::size_t i = 0; i < cv.size(); ++i) {
      Polynomial qi(n);
      for (std::size_t j = 0; j < cv.size(); ++j)
        if (q(i, j) != 0) qi += cv[j] * q(i, j);
      s += cv[i] * qi;
    }
    if (!s.is_zero()) total += s * block.multiplier;
  }
  for (std::size_t k = 0; k < free_values.size(); ++k) total += system.free_terms[k] * free_values[k];
  return total;
}

Rational evaluate_constraint(const GramConstraint& c, const std::vector<RationalMatrix>& matrices,
                             const std::vector<Rational>& free_values) {
  Rational v = 0;
  for (std::size_t b = 0; b < c.blocks.size(); ++b)
    for (const auto& e : c.blocks[b]) {
      const Rational& q = matrices[b](e.row, e.col);
      v += e.row == e.col ? Rational(e.value * q) : Rational(2 * e.value * q);
    }
  for (std::size_t k = 0; k < free_values.size(); ++k) v += c.free[k] * free_values[k];
  return v;
}

}  // namespace posicert::gram
