#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oaminlp/errors.hpp"

namespace oaminlp {

/// One affine minorant a.x + b.y + c of the joint variable (x, y).
struct AffinePiece {
  std::vector<double> a;  // coefficients on continuous x
  std::vector<double> b;  // coefficients on discrete y
  double c = 0.0;
};

/// max_k (a_k.x + b_k.y + c_k). Piece order is part of the identity:
/// index-based tie-breaking makes the naive subgradient modes reproducible.
struct MaxAffineTerm {
  std::vector<AffinePiece> pieces;
};

/// Sum of max-affine terms; convex in (x, y) by construction. The sole
/// convex-function representation used throughout the solver.
struct PwlFunction {
  std::vector<MaxAffineTerm> terms;

  std::size_t dim_x() const { return terms.at(0).pieces.at(0).a.size(); }
  std::size_t dim_y() const { return terms.at(0).pieces.at(0).b.size(); }
};

/// A joint subgradient (alpha, beta) at some anchor point.
struct JointSubgradient {
  std::vector<double> alpha;
  std::vector<double> beta;
};

enum class PieceSelect { FirstActive, LastActive };

/// Checks that every piece of `f` has coefficient lengths (n, p) and finite
/// entries; throws InvalidProblem / DimensionError otherwise.
void validate_function(const PwlFunction& f, std::size_t n, std::size_t p);

double piece_value(const AffinePiece& piece, std::span<const double> x,
                   std::span<const double> y);
double term_value(const MaxAffineTerm& term, std::span<const double> x,
                  std::span<const double> y);

/// Value of f at (x, y).
double eval(const PwlFunction& f, std::span<const double> x,
            std::span<const double> y);

/// Indices k with term_value - piece_value_k <= tol, ascending. Never empty
/// for tol >= 0.
std::vector<std::size_t> active_pieces(const MaxAffineTerm& term,
                                       std::span<const double> x,
                                       std::span<const double> y, double tol);

struct SubgradientWeightOptions {
  double activity_tol = 1e-8;  // piece counts as active within this
  double sum_tol = 1e-9;       // per-term weights must sum to 1 within this
  double support_tol = 1e-7;   // max weight allowed on an inactive piece
};

/// Builds the joint subgradient induced by per-term convex combinations of
/// active pieces: alpha = sum_t sum_k w_tk a_tk, beta likewise. Throws
/// WeightError when the weights are not a convex combination supported on
/// pieces active at (x, y).
JointSubgradient subgradient_from_weights(
    const PwlFunction& f, std::span<const double> x, std::span<const double> y,
    const std::vector<std::vector<double>>& weights,
    const SubgradientWeightOptions& opts = {});

/// Weight 1 on the first (or last) active piece of each term. The arbitrary
/// selection used by the naive diagnostic modes.
JointSubgradient default_subgradient(const PwlFunction& f,
                                     std::span<const double> x,
                                     std::span<const double> y,
                                     PieceSelect mode,
                                     double activity_tol = 1e-8);

}  // namespace oaminlp
