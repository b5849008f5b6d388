#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "posicert/sdp.hpp"

namespace posicert::sdp {

void write_dump(std::ostream& out, const Problem& problem) {
  problem.check();
  auto old_precision = out.precision(17);
  out << "posicert-sdp 1\n";
  out << "blocks " << problem.block_dims.size();
  for (auto d : problem.block_dims) out << ' ' << d;
  out << "\nfree " << problem.n_free;
  for (double c : problem.objective) out << ' ' << c;
  out << "\nconstraints " << problem.constraints.size() << '\n';
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    const auto& c = problem.constraints[k];
    out << "constraint " << k << " rhs " << c.rhs << " free";
    for (double v : c.free) out << ' ' << v;
    out << " entries " << c.entries.size() << '\n';
    for (const auto& e : c.entries) out << e.block << ' ' << e.row << ' ' << e.col << ' ' << e.value << '\n';
  }
  out.precision(old_precision);
}

namespace {

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) throw std::runtime_error("sdp dump: expected '" + word + "', got '" + got + "'");
}

template <typename T>
T read(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw std::runtime_error(std::string("sdp dump: cannot read ") + what);
  return v;
}

}  // namespace

Problem read_dump(std::istream& in) {
  Problem p;
  expect(in, "posicert-sdp");
  if (read<int>(in, "version") != 1) throw std::runtime_error("sdp dump: unsupported version");
  expect(in, "blocks");
  auto nb = read<std::size_t>(in, "block count");
  for (std::size_t i = 0; i < nb; ++i) p.block_dims.push_back(read<std::size_t>(in, "block dimension"));
  expect(in, "free");
  p.n_free = read<std::size_t>(in, "free count");
  for (std::size_t i = 0; i < p.n_free; ++i) p.objective.push_back(read<double>(in, "objective"));
  expect(in, "constraints");
  auto m = read<std::size_t>(in, "constraint count");
  for (std::size_t k = 0; k < m; ++k) {
    Constraint c;
    expect(in, "constraint");
    if (read<std::size_t>(in, "constraint index") != k) throw std::runtime_error("sdp dump: constraints out of order");
    expect(in, "rhs");
    c.rhs = read<double>(in, "rhs");
    expect(in, "free");
    for (std::size_t i = 0; i < p.n_free; ++i) c.free.push_back(read<double>(in, "free coefficient"));
    expect(in, "entries");
    auto ne = read<std::size_t>(in, "entry count");
    for (std::size_t i = 0; i < ne; ++i) {
      Entry e{};
      e.block = read<std::uint32_t>(in, "entry block");
      e.row = read<std::uint32_t>(in, "entry row");
      e.col = read<std::uint32_t>(in, "entry col");
      e.value = read<double>(in, "entry value");
      c.entries.push_back(e);
    }
    p.constraints.push_back(std::move(c));
  }
  p.check();
  return p;
}

}  // namespace posicert::sdp
