#include "oaminlp/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oaminlp {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dims(const PwlFunction& f, std::span<const double> x,
                std::span<const double> y, const char* where) {
  if (f.terms.empty() || f.terms[0].pieces.empty())
    throw InvalidProblem(std::string(where) + ": function has no pieces");
  if (x.size() != f.dim_x() || y.size() != f.dim_y()) {
    std::ostringstream os;
    os << where << ": point has dims (" << x.size() << ", " << y.size()
       << "), function expects (" << f.dim_x() << ", " << f.dim_y() << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

void validate_function(const PwlFunction& f, std::size_t n, std::size_t p) {
  if (f.terms.empty()) throw InvalidProblem("function has no terms");
  for (const MaxAffineTerm& term : f.terms) {
    if (term.pieces.empty()) throw InvalidProblem("term has no pieces");
    for (const AffinePiece& piece : term.pieces) {
      if (piece.a.size() != n || piece.b.size() != p) {
        std::ostringstream os;
        os << "piece has coefficient lengths (" << piece.a.size() << ", "
           << piece.b.size() << "), expected (" << n << ", " << p << ")";
        throw DimensionError(os.str());
      }
      bool finite = std::isfinite(piece.c);
      for (double v : piece.a) finite = finite && std::isfinite(v);
      for (double v : piece.b) finite = finite && std::isfinite(v);
      if (!finite) throw InvalidProblem("piece has non-finite coefficients");
    }
  }
}

double piece_value(const AffinePiece& piece, std::span<const double> x,
                   std::span<const double> y) {
  return dot(piece.a, x) + dot(piece.b, y) + piece.c;
}

double term_value(const MaxAffineTerm& term, std::span<const double> x,
                  std::span<const double> y) {
  double best = piece_value(term.pieces[0], x, y);
  for (std::size_t k = 1; k < term.pieces.size(); ++k)
    best = std::max(best, piece_value(term.pieces[k], x, y));
  return best;
}

double eval(const PwlFunction& f, std::span<const double> x,
            std::span<const double> y) {
  check_dims(f, x, y, "eval");
  double s = 0.0;
  for (const MaxAffineTerm& term : f.terms) s += term_value(term, x, y);
  return s;
}

std::vector<std::size_t> active_pieces(const MaxAffineTerm& term,
                                       std::span<const double> x,
                                       std::span<const double> y, double tol) {
  if (term.pieces.empty()) throw InvalidProblem("term has no pieces");
  if (tol < 0.0) throw InvalidProblem("activity tolerance must be >= 0");
  const double top = term_value(term, x, y);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < term.pieces.size(); ++k)
    if (top - piece_value(term.pieces[k], x, y) <= tol) idx.push_back(k);
  return idx;
}

JointSubgradient subgradient_from_weights(
    const PwlFunction& f, std::span<const double> x, std::span<const double> y,
    const std::vector<std::vector<double>>& weights,
    const SubgradientWeightOptions& opts) {
  check_dims(f, x, y, "subgradient_from_weights");
  if (weights.size() != f.terms.size())
    throw WeightError("weight groups do not match term count");

  JointSubgradient g;
  g.alpha.assign(x.size(), 0.0);
  g.beta.assign(y.size(), 0.0);

  for (std::size_t t = 0; t < f.terms.size(); ++t) {
    const MaxAffineTerm& term = f.terms[t];
    const std::vector<double>& w = weights[t];
    if (w.size() != term.pieces.size())
      throw WeightError("weight vector does not match piece count");

    const double top = term_value(term, x, y);
    double sum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] < -opts.sum_tol)
        throw WeightError("negative subgradient weight");
      sum += w[k];
      const double gap = top - piece_value(term.pieces[k], x, y);
      if (gap > opts.activity_tol && w[k] > opts.support_tol)
        throw WeightError("subgradient weight on inactive piece");
    }
    if (std::abs(sum - 1.0) > opts.sum_tol)
      throw WeightError("subgradient weights do not sum to 1");

    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] == 0.0) continue;
      const AffinePiece& piece = term.pieces[k];
      for (std::size_t i = 0; i < g.alpha.size(); ++i)
        g.alpha[i] += w[k] * piece.a[i];
      for (std::size_t i = 0; i < g.beta.size(); ++i)
        g.beta[i] += w[k] * piece.b[i];
    }
  }
  return g;
}

JointSubgradient default_subgradient(const PwlFunction& f,
                                     std::span<const double> x,
                                     std::span<const double> y,
                                     PieceSelect mode, double activity_tol) {
  check_dims(f, x, y, "default_subgradient");
  std::vector<std::vector<double>> weights(f.terms.size());
  for (std::size_t t = 0; t < f.terms.size(); ++t) {
    const std::vector<std::size_t> act =
        active_pieces(f.terms[t], x, y, activity_tol);
    weights[t].assign(f.terms[t].pieces.size(), 0.0);
    const std::size_t pick =
        mode == PieceSelect::FirstActive ? act.front() : act.back();
    weights[t][pick] = 1.0;
  }
  return subgradient_from_weights(f, x, y, weights,
                                  {.activity_tol = activity_tol});
}

}  // namespace oaminlp
