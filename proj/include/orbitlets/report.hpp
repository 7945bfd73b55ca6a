#pragma once

#include <string>
#include <vector>

namespace orbitlets {

/// One contribution to an assembled norm: a covering index or a group node.
struct NormPiece {
  std::string label;
  double weight = 1.0;   ///< u_i, or v(h) for group nodes
  double measure = 1.0;  ///< 1 for sequence norms, Haar weight / |det h| for group nodes
  double local = 0.0;    ///< the L^p norm of the piece
};

struct NormReport {
  std::vector<NormPiece> pieces;
  double p = 2.0;
  double q = 2.0;
  double value = 0.0;
  std::string truncation;

  /// (sum_k measure_k (weight_k local_k)^q)^{1/q}; q = infinity takes the largest weighted piece.
  static double aggregate(const std::vector<NormPiece>& pieces, double q);
  void assemble() { value = aggregate(pieces, q); }
};

}  // namespace orbitlets
