// Times the serial and OpenMP Schur complement kernels on Gram systems of
// growing size and checks that both produce identical matrices.

#include "posicert/driver.hpp"
#include "posicert/exact.hpp"
#include "posicert/parse.hpp"
#include "posicert/sdp.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>
#include <random>

using namespace posicert;

namespace {

std::vector<Eigen::MatrixXd> random_scaling(const sdp::Problem& p, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<Eigen::MatrixXd> w;
  for (auto n : p.block_dims) {
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = d(rng);
    w.push_back(a * a.transpose() + Eigen::MatrixXd::Identity(n, n));
  }
  return w;
}

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  std::vector<std::string> vars = {"x", "y", "z"};
  std::mt19937_64 rng(0);
  std::printf("%-8s %6s %6s %12s %12s %8s %s\n", "degree", "dim", "rows", "serial[s]", "parallel[s]", "speedup",
              "identical");
  for (unsigned n = 0; n <= 3; ++n) {
    ProblemSpec spec;
    spec.variables = vars;
    spec.grading = Grading::single(3);
    spec.f = parse_polynomial("x^4*y^2 + x^2*y^4 + z^6 - 3*x^2*y^2*z^2", vars);
    spec.g = sum_of_squared_variables(3);
    spec.mode = Mode::Certify;
    spec.homogeneous_required = true;
    auto built = build_system(spec, n);
    const auto& sys = std::get<gram::GramSystem>(built);
    auto rows = std::get<std::vector<std::size_t>>(exact::independent_rows(sys));
    auto problem = margin_problem(sys, rows);
    auto w = random_scaling(problem, rng);
    Eigen::MatrixXd ms, mp;
    double ts = best_of(3, [&] { ms = sdp::schur_complement_reference(problem, w); });
    double tp = best_of(3, [&] { mp = sdp::schur_complement_parallel(problem, w, threads); });
    std::printf("%-8u %6zu %6zu %12.5f %12.5f %8.2f %s\n", 6 + 2 * n, problem.block_dims[0], rows.size(), ts, tp,
                ts / tp, ms == mp ? "yes" : "NO");
  }
  return 0;
}
