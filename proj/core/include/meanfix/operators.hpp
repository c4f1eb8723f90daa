#pragma once

#include <cstdint>
#include <vector>

#include "meanfix/geometry.hpp"
#include "meanfix/gridfield.hpp"
#include "meanfix/radius.hpp"

namespace meanfix {

/// Equal-area polar rule on the unit disk: ring radii sqrt((i + 1/2) / n_r),
/// n_th angles per ring (alternate rings rotated by pi / n_th), uniform
/// weights. The node set is closed under p -> -p with bit-exact negation.
class BallRule {
 public:
  /// Throws InvalidArgument unless n_r >= 2, n_th >= 4 and n_th is even.
  BallRule(int n_r, int n_th);

  int n_r() const { return n_r_; }
  int n_th() const { return n_th_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point2> &nodes() const { return nodes_; }
  const std::vector<double> &weights() const { return weights_; }
  double weight() const { return weights_.front(); }

  /// Index of the reflected node -nodes()[k].
  std::size_t antipode(std::size_t k) const { return k ^ 1U; }

 private:
  int n_r_;
  int n_th_;
  std::vector<Point2> nodes_;
  std::vector<double> weights_;
};

/// Everything that defines the operators on a given domain. The parameters
/// are validated on construction.
struct OperatorSpec {
  OperatorSpec(const Domain &domain, const RadiusParams &params, BallRule rule);

  Domain domain;
  RadiusParams params;
  BallRule rule;
};

enum class OperatorKind { S, M, T, H };

const char *to_string(OperatorKind k);

/// Midrange of the samples at x + r * node (plus x itself).
double S_at(const GridField &field, const OperatorSpec &spec, const Point2 &x);
/// Quadrature mean over B(x, r(x)).
double M_at(const GridField &field, const OperatorSpec &spec, const Point2 &x);
/// alpha S + (1 - alpha) M
double T_alpha_at(const GridField &field, const OperatorSpec &spec, const Point2 &x);
/// (u(x) + T u(x)) / 2
double H_alpha_at(const GridField &field, const OperatorSpec &spec, const Point2 &x);

double apply_at(const GridField &field, const OperatorSpec &spec, OperatorKind which, const Point2 &x);

/// Geometry of the sweep, computed once per (spec, lattice): the interior
/// nodes and their radii. Applying it is a Jacobi sweep: every interior node
/// is recomputed from the old field, pinned nodes are copied.
class SweepPlan {
 public:
  SweepPlan(const OperatorSpec &spec, const GridField &lattice);

  const OperatorSpec &spec() const { return *spec_; }
  const std::vector<std::uint32_t> &interior() const { return interior_; }
  const std::vector<double> &radii() const { return radii_; }

  /// out <- Op(u). `out` must share u's lattice; it may not alias u.
  void apply(const GridField &u, OperatorKind which, GridField &out, int workers = 1) const;

  /// max over interior nodes |T u - u|.
  double residual(const GridField &u, int workers = 1) const;

  /// One H step fused with the residual of the input: writes H u into `next`
  /// and returns |T u - u|_inf over interior nodes.
  double step_H(const GridField &u, GridField &next, int workers = 1) const;

 private:
  void check_lattice(const GridField &u) const;

  const OperatorSpec *spec_;
  Point2 origin_;
  double h_;
  int nx_;
  int ny_;
  std::vector<std::uint32_t> interior_;
  std::vector<double> radii_;
};

/// Convenience wrapper: builds a plan and applies one synchronous sweep.
GridField sweep(const GridField &field, const OperatorSpec &spec, OperatorKind which, int workers = 1);

} // namespace meanfix
