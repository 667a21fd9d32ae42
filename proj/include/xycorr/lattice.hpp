#pragma once

// Periodic spin-1/2 lattices and the transverse-field XY Hamiltonian
//
//   H = J sum_<ij> [(1+gamma) S^x_i S^x_j + (1-gamma) S^y_i S^y_j] - h sum_i S^z_i
//
// with S = sigma / 2.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "xycorr/linalg.hpp"

namespace xycorr {

enum class LatticeKind { chain, ladder, torus };
enum class EdgeKind { bond, leg, rung };

struct Edge {
  int i = 0;
  int j = 0;
  EdgeKind kind = EdgeKind::bond;
  /// Lattice direction: 0 along the length (chain, ladder legs, torus x),
  /// 1 across it (ladder rungs, torus y).
  int axis = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct SpinLattice {
  LatticeKind kind = LatticeKind::chain;
  int num_sites = 0;
  /// chain: (N, 1); ladder: (L, 2); torus: (nx, ny).
  int nx = 0;
  int ny = 0;
  std::vector<Edge> edges;

  /// First edge of the given kind and axis; throws if there is none.
  [[nodiscard]] const Edge& representative(EdgeKind kind, int axis = 0) const;
  [[nodiscard]] std::string describe() const;
};

/// Largest supported lattice (dense 2^14 state space).
inline constexpr int kMaxSites = 14;

SpinLattice build_chain(int num_sites);
/// Two-leg ladder with `length` rungs; sites r*length + c for leg r, column c.
SpinLattice build_ladder(int length);
/// nx-by-ny torus; site y*nx + x.
SpinLattice build_torus(int nx, int ny);
/// Geometry per kind: chain {N}, ladder {L}, torus {nx, ny}.
SpinLattice build_lattice(LatticeKind kind, std::array<int, 2> geometry);

std::string to_string(LatticeKind kind);
std::string to_string(EdgeKind kind);

struct ModelParams {
  double J = 1.0;
  double gamma = 0.0;
  double h = 0.0;
};

HermitianOperator build_xy_hamiltonian(const SpinLattice& lattice, const ModelParams& params);
/// Interaction part only (h = 0) and the bare magnetization sum_i S^z_i.
HermitianOperator build_interaction(const SpinLattice& lattice, const ModelParams& params);
HermitianOperator build_magnetization(int num_sites);
/// Tensor product of sigma^z over all sites.
HermitianOperator phase_flip_operator(int num_sites);

/// One symmetry sector of the global phase flip: the computational basis
/// states with a fixed parity of down spins, and H restricted to them.
/// The XY Hamiltonian is real symmetric in the computational basis.
struct ParitySector {
  int parity = 0;
  std::vector<std::uint32_t> basis;
  RMatrix hamiltonian;

  /// Position of a global basis state inside this sector, or -1.
  [[nodiscard]] std::int64_t position(std::uint32_t state) const;
};

/// H split into its even (index 0) and odd (index 1) phase-flip sectors.
std::array<ParitySector, 2> build_parity_sectors(const SpinLattice& lattice, const ModelParams& params);

}  // namespace xycorr
