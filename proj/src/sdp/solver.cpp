#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "posicert/sdp.hpp"

namespace posicert::sdp {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::MarginFeasible: return "MarginFeasible";
    case Status::MarginNegative: return "MarginNegative";
    case Status::Borderline: return "Borderline";
    case Status::MaxIterations: return "MaxIterations";
    case Status::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

void Problem::check() const {
  if (objective.size() != n_free) throw std::invalid_argument("sdp: objective length differs from n_free");
  for (const auto& c : constraints) {
    if (c.free.size() != n_free) throw std::invalid_argument("sdp: constraint free coefficients have wrong length");
    for (const auto& e : c.entries) {
      if (e.block >= block_dims.size()) throw std::invalid_argument("sdp: entry refers to a missing block");
      if (e.row > e.col || e.col >= block_dims[e.block]) throw std::invalid_argument("sdp: entry index out of range");
    }
  }
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Blocks = std::vector<MatrixXd>;

struct Scaling {
  MatrixXd g;      // W = G Gᵀ
  MatrixXd g_inv;  // G⁻¹
  MatrixXd w;
  VectorXd d;      // G⁻¹ X G⁻ᵀ = Gᵀ S G = diag(d)
};

class InteriorPoint {
 public:
  InteriorPoint(const Problem& p, const Options& o) : p_(p), o_(o) {
    m_ = static_cast<Eigen::Index>(p.constraints.size());
    nf_ = static_cast<Eigen::Index>(p.n_free);
    b_.resize(m_);
    bfree_ = MatrixXd::Zero(m_, nf_);
    for (Eigen::Index k = 0; k < m_; ++k) {
      b_(k) = p.constraints[k].rhs;
      for (Eigen::Index j = 0; j < nf_; ++j) bfree_(k, j) = p.constraints[k].free[j];
    }
    c_.resize(nf_);
    for (Eigen::Index j = 0; j < nf_; ++j) c_(j) = -p.objective[j];  // internal minimization form
    for (auto d : p.block_dims) n_total_ += static_cast<double>(d);
  }

  Solution run() {
    Solution sol;
    // Start at ξI, ηI sized to the data so early steps are not blocked.
    double xi = 10, eta = 10;
    for (Eigen::Index k = 0; k < m_; ++k) {
      double a2 = 0;
      for (const auto& e : p_.constraints[k].entries) a2 += (e.row == e.col ? 1 : 2) * e.value * e.value;
      const double an = std::sqrt(a2);
      xi = std::max(xi, (1 + std::abs(b_(k))) / (1 + an));
      eta = std::max(eta, an);
    }
    xi = std::max(xi, std::sqrt(n_total_));
    eta = std::max(eta, std::sqrt(n_total_));
    Blocks x, s;
    for (auto d : p_.block_dims) {
      x.push_back(xi * MatrixXd::Identity(d, d));
      s.push_back(eta * MatrixXd::Identity(d, d));
    }
    VectorXd u = VectorXd::Zero(nf_);
    VectorXd y = VectorXd::Zero(m_);  // internal dual: 𝒜ᵀy + S = 0, Bᵀy = c

    const double b_norm = b_.norm();
    const double c_norm = c_.norm();
    sol.status = Status::MaxIterations;
    for (int it = 0;; ++it) {
      VectorXd rp = b_ - apply(x) - bfree_ * u;
      Blocks rd = adjoint(y);
      for (std::size_t i = 0; i < rd.size(); ++i) rd[i] = -rd[i] - s[i];
      VectorXd rc = c_ - bfree_.transpose() * y;

      double xs = inner(x, s);
      double mu = n_total_ > 0 ? xs / n_total_ : 0.0;
      double pobj = c_.dot(u);
      double dobj = b_.dot(y);
      double rel_gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
      double pinf = rp.norm() / (1 + b_norm);
      double dinf = (std::sqrt(inner(rd, rd)) + rc.norm()) / (1 + c_norm);
      rel_gap = std::max(rel_gap, xs / (1 + std::abs(pobj) + std::abs(dobj)));
      fill(sol, x, s, u, y, pobj, dobj, rel_gap, pinf, dinf, it);
      sol.history.push_back({-pobj, -dobj, rel_gap, pinf, dinf, mu, last_ap_, last_ad_});

      if (rel_gap <= o_.gap_tolerance && pinf <= o_.gap_tolerance && dinf <= o_.gap_tolerance) {
        classify(sol);
        return sol;
      }
      const double worst = std::max({rel_gap, pinf, dinf});
      if (worst < best_worst_) {
        best_worst_ = worst;
        best_ = sol;
        since_best_ = 0;
      } else if (++since_best_ >= kStagnation) {
        return early_exit(sol, Status::NumericalFailure);
      }
      if (it >= o_.max_iterations) return early_exit(sol, Status::MaxIterations);

      // Roundoff-level dual residuals carry no information, and W·rd·W
      // amplifies them by cond(W)² near the optimum.
      if (std::sqrt(inner(rd, rd)) <= 1e-13 * (1 + std::sqrt(inner(s, s))))
        for (auto& r : rd) r.setZero();

      std::vector<Scaling> sc;
      for (std::size_t i = 0; i < x.size(); ++i) {
        auto scaled = nt_scaling(x[i], s[i]);
        if (!scaled) return early_exit(sol, Status::NumericalFailure);
        sc.push_back(std::move(*scaled));
      }
      Blocks w;
      for (const auto& v : sc) w.push_back(v.w);
      MatrixXd schur = o_.threads > 1 ? schur_complement_parallel(p_, w, o_.threads) : schur_complement_reference(p_, w);
      // Jacobi equilibration: the diagonal of M spans many decades near the
      // optimum and an unscaled Cholesky loses those digits.
      VectorXd eq = schur.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
      MatrixXd scaled = eq.asDiagonal() * schur * eq.asDiagonal();
      Eigen::LLT<MatrixXd> llt(scaled);
      if (llt.info() != Eigen::Success) {
        scaled.diagonal().array() += 1e-14;
        llt.compute(scaled);
        if (llt.info() != Eigen::Success) return early_exit(sol, Status::NumericalFailure);
      }
      auto chol_solve = [&](const auto& r) -> MatrixXd { return eq.asDiagonal() * llt.solve(eq.asDiagonal() * r); };
      MatrixXd minv_b = nf_ > 0 ? chol_solve(bfree_) : MatrixXd(m_, 0);
      Eigen::FullPivLU<MatrixXd> free_lu;
      if (nf_ > 0) {
        free_lu.compute(bfree_.transpose() * minv_b);
        if (!free_lu.isInvertible()) return early_exit(sol, Status::NumericalFailure);
      }

      auto direction = [&](const Blocks& rcomp, Blocks& dx, Blocks& ds, VectorXd& dy, VectorXd& du) {
        Blocks tmp(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = rcomp[i] - w[i] * rd[i] * w[i];
        VectorXd h = rp - apply(tmp);
        // Solves [M B; Bᵀ 0][dy; du] = [h; rc] by block elimination.
        auto solve_kkt = [&](const VectorXd& r1, const VectorXd& r2, VectorXd& sy, VectorXd& su) {
          VectorXd minv_r = chol_solve(r1);
          if (nf_ > 0) {
            su = free_lu.solve(bfree_.transpose() * minv_r - r2);
            sy = minv_r - minv_b * su;
          } else {
            su.resize(0);
            sy = minv_r;
          }
        };
        solve_kkt(h, rc, dy, du);
        auto recover = [&] {
          Blocks aty = adjoint(dy);
          dx.resize(x.size());
          ds.resize(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) {
            ds[i] = rd[i] - aty[i];
            MatrixXd v = rcomp[i] - w[i] * ds[i] * w[i];
            dx[i] = 0.5 * (v + v.transpose());
          }
        };
        recover();
        // Iterative refinement of (dy, du) against the operator residual of
        // 𝒜(dX) + B du = rp. The formed Schur matrix carries rounding errors
        // of order ε·cond(W)², so refining against it alone leaves the primal
        // equation violated. dS and dX are recomputed from dy each pass, which
        // keeps the dual and complementarity equations exact.
        // A pass is kept only if it shrinks the residual; with M near
        // singular the correction can make things worse.
        auto residual = [&](VectorXd& r1, VectorXd& r2) {
          r1 = rp - apply(dx);
          if (nf_ > 0) r1 -= bfree_ * du;
          r2 = nf_ > 0 ? VectorXd(rc - bfree_.transpose() * dy) : VectorXd(0);
          return r1.norm() + r2.norm();
        };
        VectorXd r1, r2;
        double current = residual(r1, r2);
        for (int pass = 0; pass < kRefinements; ++pass) {
          if (current <= 1e-15 * (1 + rp.norm() + rc.norm())) break;
          VectorXd cy, cu;
          solve_kkt(r1, r2, cy, cu);
          VectorXd dy0 = dy, du0 = du;
          Blocks dx0 = dx, ds0 = ds;
          dy += cy;
          if (nf_ > 0) du += cu;
          recover();
          VectorXd n1, n2;
          double next = residual(n1, n2);
          if (!(next < current)) {
            dy = std::move(dy0);
            du = std::move(du0);
            dx = std::move(dx0);
            ds = std::move(ds0);
            break;
          }
          current = next;
          r1 = std::move(n1);
          r2 = std::move(n2);
        }
      };

      // Predictor: drive complementarity to zero.
      Blocks rcomp(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) rcomp[i] = -x[i];
      Blocks dx, ds;
      VectorXd dy, du;
      direction(rcomp, dx, ds, dy, du);
      double ap = std::min(1.0, max_step(x, dx));
      double ad = std::min(1.0, max_step(s, ds));
      if (!std::isfinite(ap) || !std::isfinite(ad)) return early_exit(sol, Status::NumericalFailure);
      double xs_aff = 0;
      for (std::size_t i = 0; i < x.size(); ++i)
        xs_aff += ((x[i] + ap * dx[i]).cwiseProduct(s[i] + ad * ds[i])).sum();
      double sigma = xs > 0 ? std::pow(std::clamp(xs_aff / xs, 0.0, 1.0), 3) : 0.0;
      // A blocked step means the iterate left the central path; recenter.
      if (it > 0 && std::min(last_ap_, last_ad_) < 0.1) sigma = std::max(sigma, 0.5);

      // Corrector in the NT-scaled space, where X̃ = S̃ = diag(d).
      for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& v = sc[i];
        MatrixXd dxt = v.g_inv * dx[i] * v.g_inv.transpose();
        MatrixXd dst = v.g.transpose() * ds[i] * v.g;
        MatrixXd prod = dxt * dst;
        MatrixXd r = -0.5 * (prod + prod.transpose());
        const auto n = v.d.size();
        for (Eigen::Index a = 0; a < n; ++a) r(a, a) += sigma * mu - v.d(a) * v.d(a);
        for (Eigen::Index a = 0; a < n; ++a)
          for (Eigen::Index b = 0; b < n; ++b) r(a, b) *= 2.0 / (v.d(a) + v.d(b));
        rcomp[i] = v.g * r * v.g.transpose();
      }
      direction(rcomp, dx, ds, dy, du);
      ap = std::min(1.0, o_.step_fraction * max_step(x, dx));
      ad = std::min(1.0, o_.step_fraction * max_step(s, ds));
      if (!std::isfinite(ap) || !std::isfinite(ad)) return early_exit(sol, Status::NumericalFailure);
      // Stay in the wide neighbourhood λ_min(XS) >= γ·μ; leaving it makes
      // the next scaling singular to working precision.
      for (int cut = 0; cut < kMaxCuts; ++cut) {
        Blocks xn(x.size()), sn(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
          xn[i] = x[i] + ap * dx[i];
          sn[i] = s[i] + ad * ds[i];
        }
        if (centrality(xn, sn) >= kNeighbourhood * inner(xn, sn) / n_total_) break;
        ap *= 0.8;
        ad *= 0.8;
      }
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += ap * dx[i];
        s[i] += ad * ds[i];
      }
      if (nf_ > 0) u += ap * du;
      y += ad * dy;
      last_ap_ = ap;
      last_ad_ = ad;
    }
  }

 private:
  VectorXd apply(const Blocks& x) const {
    VectorXd out(m_);
    for (Eigen::Index k = 0; k < m_; ++k) {
      double v = 0;
      for (const auto& e : p_.constraints[k].entries) {
        const auto& xb = x[e.block];
        v += e.row == e.col ? e.value * xb(e.row, e.col) : e.value * (xb(e.row, e.col) + xb(e.col, e.row));
      }
      out(k) = v;
    }
    return out;
  }

  Blocks adjoint(const VectorXd& y) const {
    Blocks out;
    for (auto d : p_.block_dims) out.push_back(MatrixXd::Zero(d, d));
    for (Eigen::Index k = 0; k < m_; ++k)
      for (const auto& e : p_.constraints[k].entries) {
        out[e.block](e.row, e.col) += y(k) * e.value;
        if (e.row != e.col) out[e.block](e.col, e.row) += y(k) * e.value;
      }
    return out;
  }

  static constexpr int kRefinements = 2;
  static constexpr double kNeighbourhood = 1e-3;
  static constexpr int kMaxCuts = 30;

  // Smallest eigenvalue of X·S over all blocks (those of L_Xᵀ S L_X).
  static double centrality(const Blocks& x, const Blocks& s) {
    double out = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].size() == 0) continue;
      Eigen::LLT<MatrixXd> lx(x[i]);
      if (lx.info() != Eigen::Success) return -1;
      MatrixXd l = lx.matrixL();
      MatrixXd mid = l.transpose() * s[i] * l;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (mid + mid.transpose()), Eigen::EigenvaluesOnly);
      out = std::min(out, es.eigenvalues()(0));
    }
    return out;
  }

  static double inner(const Blocks& a, const Blocks& b) {
    double v = 0;
    for (std::size_t i = 0; i < a.size(); ++i) v += a[i].cwiseProduct(b[i]).sum();
    return v;
  }

  static std::optional<Scaling> nt_scaling(const MatrixXd& x, const MatrixXd& s) {
    Eigen::LLT<MatrixXd> lx(x);
    if (lx.info() != Eigen::Success) return std::nullopt;
    MatrixXd l = lx.matrixL();
    MatrixXd mid = l.transpose() * s * l;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (mid + mid.transpose()));
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0) return std::nullopt;
    VectorXd sig = es.eigenvalues();
    Scaling out;
    VectorXd quarter = sig.array().pow(-0.25);
    out.g = l * es.eigenvectors() * quarter.asDiagonal();
    MatrixXd linv = l.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(x.rows(), x.cols()));
    out.g_inv = sig.array().pow(0.25).matrix().asDiagonal() * es.eigenvectors().transpose() * linv;
    out.w = out.g * out.g.transpose();
    out.w = 0.5 * (out.w + out.w.transpose());
    out.d = sig.array().sqrt();
    return out;
  }

  // Largest α with x + α·dx ⪰ 0 (infinity when dx keeps x feasible for all α).
  static double max_step(const Blocks& x, const Blocks& dx) {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].size() == 0) continue;
      Eigen::LLT<MatrixXd> lx(x[i]);
      if (lx.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
      MatrixXd l = lx.matrixL();
      MatrixXd t = l.triangularView<Eigen::Lower>().solve(dx[i]);
      MatrixXd p = l.triangularView<Eigen::Lower>().solve(t.transpose());
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (p + p.transpose()), Eigen::EigenvaluesOnly);
      double lmin = es.eigenvalues()(0);
      if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
    }
    return alpha;
  }

  void fill(Solution& sol, const Blocks& x, const Blocks& s, const VectorXd& u, const VectorXd& y, double pobj,
            double dobj, double gap, double pinf, double dinf, int it) const {
    sol.X = x;
    sol.S = s;
    sol.u = u;
    sol.y = -y;  // report the dual of the maximization form
    sol.primal_objective = -pobj;
    sol.dual_objective = -dobj;
    sol.t_star = -pobj;
    sol.relative_gap = gap;
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    sol.iterations = it;
  }

  void classify(Solution& sol) const {
    double band = 10 * o_.gap_tolerance;
    if (sol.t_star > band)
      sol.status = Status::MarginFeasible;
    else if (sol.t_star < -band)
      sol.status = Status::MarginNegative;
    else
      sol.status = Status::Borderline;
  }

  // Unconverged exit: classify the best iterate by what it certifies. A
  // primal-feasible point bounds t* from below, a dual-feasible one from above.
  Solution early_exit(Solution& last, Status fallback) {
    Solution sol = best_ ? std::move(*best_) : std::move(last);
    sol.history = std::move(last.history);
    sol.iterations = last.iterations;
    const double tol = o_.gap_tolerance;
    const double band = 10 * tol;
    const bool primal_ok = sol.primal_infeasibility <= tol;
    const bool dual_ok = sol.dual_infeasibility <= tol;
    if (primal_ok && sol.primal_objective > band) {
      sol.status = Status::MarginFeasible;
    } else if (dual_ok && sol.dual_objective < -band) {
      sol.status = Status::MarginNegative;
      sol.t_star = sol.dual_objective;
    } else if (primal_ok && dual_ok && sol.primal_objective <= band && sol.dual_objective >= -band) {
      sol.status = Status::Borderline;
    } else {
      sol.status = fallback;
    }
    return sol;
  }

  static constexpr int kStagnation = 8;

  const Problem& p_;
  const Options& o_;
  Eigen::Index m_ = 0;
  Eigen::Index nf_ = 0;
  VectorXd b_;
  MatrixXd bfree_;
  VectorXd c_;
  double n_total_ = 0;
  double last_ap_ = 0;
  double last_ad_ = 0;
  std::optional<Solution> best_;
  double best_worst_ = std::numeric_limits<double>::infinity();
  int since_best_ = 0;
};

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  problem.check();
  return InteriorPoint(problem, options).run();
}

}  // namespace posicert::sdp
