#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fqaoa/error.hpp"

namespace fqaoa {

enum class LatticeKind { Square, ShastrySutherland, Triangular };

inline std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Square: return "square";
    case LatticeKind::ShastrySutherland: return "shastry-sutherland";
    case LatticeKind::Triangular: return "triangular";
  }
  return "unknown";
}

// Accepts the canonical names plus the short aliases used on the command line.
inline LatticeKind parse_lattice_kind(std::string_view name) {
  if (name == "square" || name == "sq") return LatticeKind::Square;
  if (name == "shastry-sutherland" || name == "ss" || name == "shastry_sutherland")
    return LatticeKind::ShastrySutherland;
  if (name == "triangular" || name == "tri") return LatticeKind::Triangular;
  throw std::invalid_argument("unknown lattice kind '" + std::string(name) + "'");
}

// Unordered site pair, stored with first < second.
struct Edge {
  std::uint32_t first;
  std::uint32_t second;

  Edge(std::uint32_t a, std::uint32_t b) : first(std::min(a, b)), second(std::max(a, b)) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// n x n grid of spins with open boundaries. Sites are indexed row-major,
/// site = row * n + col, with row 0 at the top.
///
/// Next-nearest-neighbor bonds are plaquette diagonals. Plaquette (r, c) has
/// corners (r, c), (r, c+1), (r+1, c), (r+1, c+1). A "falling" diagonal joins
/// (r, c)-(r+1, c+1); a "rising" one joins (r+1, c)-(r, c+1).
///
///  - Square: no diagonals.
///  - Triangular: a rising diagonal on every plaquette.
///  - ShastrySutherland: diagonals on plaquettes with (r + c) even, falling
///    when r is even and rising when r is odd. Neighbouring dimers are then
///    orthogonal and every interior spin belongs to exactly one dimer. The
///    3x3 cell gets dimers (0,0)-(1,1) and (2,1)-(1,2).
struct UnitCell {
  LatticeKind kind = LatticeKind::Square;
  int n = 0;
  std::vector<Edge> nn_edges;
  std::vector<Edge> nnn_edges;

  int num_sites() const { return n * n; }
  int site(int row, int col) const { return row * n + col; }
};

struct EdgeCounts {
  std::size_t nn = 0;
  std::size_t nnn = 0;

  friend bool operator==(const EdgeCounts&, const EdgeCounts&) = default;
};

namespace detail {

inline bool carries_ss_dimer(int r, int c) { return (r + c) % 2 == 0; }

}  // namespace detail

inline UnitCell build_unit_cell(LatticeKind kind, int n) {
  if (n < 2) throw std::invalid_argument("unit cell needs n >= 2, got " + std::to_string(n));
  // Site indices are stored as uint32 and configurations are indexed by bit.
  if (n > 4096) throw std::invalid_argument("unit cell side too large: " + std::to_string(n));

  UnitCell cell;
  cell.kind = kind;
  cell.n = n;
  const auto at = [n](int r, int c) { return static_cast<std::uint32_t>(r * n + c); };

  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c + 1 < n) cell.nn_edges.emplace_back(at(r, c), at(r, c + 1));
      if (r + 1 < n) cell.nn_edges.emplace_back(at(r, c), at(r + 1, c));
    }
  }

  const auto falling = [&](int r, int c) { return Edge(at(r, c), at(r + 1, c + 1)); };
  const auto rising = [&](int r, int c) { return Edge(at(r + 1, c), at(r, c + 1)); };

  for (int r = 0; r + 1 < n; ++r) {
    for (int c = 0; c + 1 < n; ++c) {
      switch (kind) {
        case LatticeKind::Square: break;
        case LatticeKind::Triangular: cell.nnn_edges.push_back(rising(r, c)); break;
        case LatticeKind::ShastrySutherland:
          if (detail::carries_ss_dimer(r, c))
            cell.nnn_edges.push_back(r % 2 == 0 ? falling(r, c) : rising(r, c));
          break;
      }
    }
  }

  std::sort(cell.nn_edges.begin(), cell.nn_edges.end());
  std::sort(cell.nnn_edges.begin(), cell.nnn_edges.end());
  return cell;
}

inline EdgeCounts edge_counts(const UnitCell& cell) {
  return {cell.nn_edges.size(), cell.nnn_edges.size()};
}

// Closed forms for the generated geometries.
inline std::size_t expected_nn_count(int n) { return 2u * n * (n - 1); }

inline std::size_t expected_nnn_count(LatticeKind kind, int n) {
  const std::size_t plaquettes = static_cast<std::size_t>(n - 1) * (n - 1);
  switch (kind) {
    case LatticeKind::Square: return 0;
    case LatticeKind::Triangular: return plaquettes;
    case LatticeKind::ShastrySutherland: return (plaquettes + 1) / 2;
  }
  return 0;
}

}  // namespace fqaoa
