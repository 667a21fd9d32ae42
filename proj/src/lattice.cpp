#include "xycorr/lattice.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace xycorr {

namespace {

void add_edge(SpinLattice& lat, int i, int j, EdgeKind kind, int axis) {
  const auto same = [&](const Edge& e) {
    return (e.i == i && e.j == j) || (e.i == j && e.j == i);
  };
  // Periodic wrap on a length-2 direction would double the bond.
  if (std::any_of(lat.edges.begin(), lat.edges.end(), same)) return;
  lat.edges.push_back(Edge{i, j, kind, axis});
}

void check_site_count(int n) {
  if (n > kMaxSites) {
    std::ostringstream os;
    os << "lattice has " << n << " sites; at most " << kMaxSites << " are supported";
    throw std::invalid_argument(os.str());
  }
}

std::uint32_t site_bit(int num_sites, int site) {
  return std::uint32_t{1} << (num_sites - 1 - site);
}

}  // namespace

const Edge& SpinLattice::representative(EdgeKind k, int axis) const {
  for (const auto& e : edges) {
    if (e.kind == k && e.axis == axis) return e;
  }
  throw std::invalid_argument("lattice has no edge of kind " + to_string(k));
}

std::string SpinLattice::describe() const {
  std::ostringstream os;
  switch (kind) {
    case LatticeKind::chain: os << "chain-" << num_sites; break;
    case LatticeKind::ladder: os << "ladder-2x" << nx; break;
    case LatticeKind::torus: os << "torus-" << nx << "x" << ny; break;
  }
  return os.str();
}

SpinLattice build_chain(int num_sites) {
  if (num_sites < 2) throw std::invalid_argument("chain needs at least 2 sites");
  check_site_count(num_sites);
  SpinLattice lat{LatticeKind::chain, num_sites, num_sites, 1, {}};
  for (int i = 0; i < num_sites; ++i) add_edge(lat, i, (i + 1) % num_sites, EdgeKind::bond, 0);
  return lat;
}

SpinLattice build_ladder(int length) {
  if (length < 2) throw std::invalid_argument("ladder length must be at least 2");
  check_site_count(2 * length);
  SpinLattice lat{LatticeKind::ladder, 2 * length, length, 2, {}};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < length; ++c) {
      add_edge(lat, r * length + c, r * length + (c + 1) % length, EdgeKind::leg, 0);
    }
  }
  for (int c = 0; c < length; ++c) add_edge(lat, c, length + c, EdgeKind::rung, 1);
  return lat;
}

SpinLattice build_torus(int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("torus needs nx >= 2 and ny >= 2");
  check_site_count(nx * ny);
  SpinLattice lat{LatticeKind::torus, nx * ny, nx, ny, {}};
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const int s = y * nx + x;
      add_edge(lat, s, y * nx + (x + 1) % nx, EdgeKind::bond, 0);
      add_edge(lat, s, ((y + 1) % ny) * nx + x, EdgeKind::bond, 1);
    }
  }
  return lat;
}

SpinLattice build_lattice(LatticeKind kind, std::array<int, 2> geometry) {
  switch (kind) {
    case LatticeKind::chain: return build_chain(geometry[0]);
    case LatticeKind::ladder: return build_ladder(geometry[0]);
    case LatticeKind::torus: return build_torus(geometry[0], geometry[1]);
  }
  throw std::invalid_argument("unknown lattice kind");
}

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::chain: return "chain";
    case LatticeKind::ladder: return "ladder";
    case LatticeKind::torus: return "torus";
  }
  return "?";
}

std::string to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::bond: return "bond";
    case EdgeKind::leg: return "leg";
    case EdgeKind::rung: return "rung";
  }
  return "?";
}

namespace {

// Fills H (real, dense, full space or a sector) given a basis list and a
// global->local map.
RMatrix assemble(const SpinLattice& lat, const ModelParams& p, const std::vector<std::uint32_t>& basis,
                 const std::vector<std::int32_t>& local, bool with_field) {
  const int n = lat.num_sites;
  const auto d = static_cast<Eigen::Index>(basis.size());
  RMatrix h = RMatrix::Zero(d, d);
  // (1+g)/4 sx sx + (1-g)/4 sy sy flips both spins; <s'|sy sy|s> = -si sj
  // with si = +1 for up (bit 0).
  const double cxx = p.J * (1.0 + p.gamma) / 4.0;
  const double cyy = p.J * (1.0 - p.gamma) / 4.0;
  for (Eigen::Index col = 0; col < d; ++col) {
    const std::uint32_t s = basis[static_cast<std::size_t>(col)];
    for (const auto& e : lat.edges) {
      const std::uint32_t bi = site_bit(n, e.i);
      const std::uint32_t bj = site_bit(n, e.j);
      const double si = (s & bi) ? -1.0 : 1.0;
      const double sj = (s & bj) ? -1.0 : 1.0;
      const std::int32_t row = local[s ^ bi ^ bj];
      h(row, col) += cxx - cyy * si * sj;
    }
    if (with_field) {
      const int down = std::popcount(s);
      h(col, col) += -p.h * 0.5 * static_cast<double>(n - 2 * down);
    }
  }
  return h;
}

}  // namespace

HermitianOperator build_xy_hamiltonian(const SpinLattice& lattice, const ModelParams& params) {
  check_site_count(lattice.num_sites);
  const std::uint32_t dim = std::uint32_t{1} << lattice.num_sites;
  std::vector<std::uint32_t> basis(dim);
  std::vector<std::int32_t> local(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    basis[s] = s;
    local[s] = static_cast<std::int32_t>(s);
  }
  return HermitianOperator(assemble(lattice, params, basis, local, true).cast<Complex>());
}

HermitianOperator build_interaction(const SpinLattice& lattice, const ModelParams& params) {
  ModelParams p = params;
  p.h = 0.0;
  return build_xy_hamiltonian(lattice, p);
}

HermitianOperator build_magnetization(int num_sites) {
  check_site_count(num_sites);
  const Eigen::Index dim = Eigen::Index{1} << num_sites;
  CVector d(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    d(s) = 0.5 * static_cast<double>(num_sites - 2 * std::popcount(static_cast<std::uint32_t>(s)));
  }
  return HermitianOperator(CMatrix(d.asDiagonal()));
}

HermitianOperator phase_flip_operator(int num_sites) {
  check_site_count(num_sites);
  const Eigen::Index dim = Eigen::Index{1} << num_sites;
  CVector d(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    d(s) = (std::popcount(static_cast<std::uint32_t>(s)) % 2 == 0) ? 1.0 : -1.0;
  }
  return HermitianOperator(CMatrix(d.asDiagonal()));
}

std::int64_t ParitySector::position(std::uint32_t state) const {
  const auto it = std::lower_bound(basis.begin(), basis.end(), state);
  if (it == basis.end() || *it != state) return -1;
  return it - basis.begin();
}

std::array<ParitySector, 2> build_parity_sectors(const SpinLattice& lattice, const ModelParams& params) {
  check_site_count(lattice.num_sites);
  const std::uint32_t dim = std::uint32_t{1} << lattice.num_sites;
  std::array<ParitySector, 2> sectors;
  std::vector<std::int32_t> local(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    auto& sec = sectors[std::popcount(s) % 2];
    local[s] = static_cast<std::int32_t>(sec.basis.size());
    sec.basis.push_back(s);
  }
  for (int p = 0; p < 2; ++p) {
    sectors[p].parity = p;
    sectors[p].hamiltonian = assemble(lattice, params, sectors[p].basis, local, true);
  }
  return sectors;
}

}  // namespace xycorr
