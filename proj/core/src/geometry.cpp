#include "meanfix/geometry.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "meanfix/error.hpp"

namespace meanfix {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCoarseSamples = 256;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double pnorm_rho(const PNormBall &s, double t) {
  const double c = std::abs(std::cos(t));
  const double sn = std::abs(std::sin(t));
  return s.radius / std::pow(std::pow(c, s.exponent) + std::pow(sn, s.exponent), 1.0 / s.exponent);
}

Point2 curve(const Domain::Shape &shape, double t) {
  return std::visit(
      Overloaded{
          [t](const Disk &s) {
            return s.center + Point2{s.radius * std::cos(t), s.radius * std::sin(t)};
          },
          [t](const Ellipse &s) {
            return s.center + Point2{s.a * std::cos(t), s.b * std::sin(t)};
          },
          [t](const PNormBall &s) {
            const double rho = pnorm_rho(s, t);
            return s.center + Point2{rho * std::cos(t), rho * std::sin(t)};
          },
      },
      shape);
}

Point2 tangent(const Domain::Shape &shape, double t) {
  return std::visit(
      Overloaded{
          [t](const Disk &s) { return Point2{-s.radius * std::sin(t), s.radius * std::cos(t)}; },
          [t](const Ellipse &s) { return Point2{-s.a * std::sin(t), s.b * std::cos(t)}; },
          [t](const PNormBall &s) {
            const double q = s.exponent;
            const double c = std::cos(t);
            const double sn = std::sin(t);
            const double ac = std::abs(c);
            const double as = std::abs(sn);
            const double sum = std::pow(ac, q) + std::pow(as, q);
            // d/dt (|c|^q + |s|^q) with d|c|/dt = -sgn(c) s, d|s|/dt = sgn(s) c
            const double dsum = q * std::pow(ac, q - 1.0) * (c >= 0 ? -sn : sn) +
                                q * std::pow(as, q - 1.0) * (sn >= 0 ? c : -c);
            const double rho = s.radius / std::pow(sum, 1.0 / q);
            const double drho = -rho / q * dsum / sum;
            return Point2{drho * c - rho * sn, drho * sn + rho * c};
          },
      },
      shape);
}

double sq(double v) { return v * v; }

// Nearest point on a parametrized closed curve: coarse argmin over every
// local minimum of the sampled squared distance, then a bracketed root of
// the stationarity condition (gamma(t) - p) . gamma'(t) = 0 in each basin.
BoundaryPoint nearest_on_curve(const Domain::Shape &shape, const Point2 &p) {
  std::array<double, kCoarseSamples> d2{};
  for (int k = 0; k < kCoarseSamples; ++k) {
    const Point2 g = curve(shape, kTwoPi * k / kCoarseSamples);
    d2[k] = sq(g.x - p.x) + sq(g.y - p.y);
  }

  auto stationarity = [&](double t) { return dot(curve(shape, t) - p, tangent(shape, t)); };
  auto squared = [&](double t) {
    const Point2 g = curve(shape, t);
    return sq(g.x - p.x) + sq(g.y - p.y);
  };

  BoundaryPoint best{{}, std::numeric_limits<double>::infinity()};
  const double step = kTwoPi / kCoarseSamples;
  for (int k = 0; k < kCoarseSamples; ++k) {
    const double prev = d2[(k + kCoarseSamples - 1) % kCoarseSamples];
    const double next = d2[(k + 1) % kCoarseSamples];
    if (d2[k] > prev || d2[k] > next) continue;

    const double lo = step * (k - 1);
    const double hi = step * (k + 1);
    double t = step * k;
    const double glo = stationarity(lo);
    const double ghi = stationarity(hi);
    if (glo < 0.0 && ghi > 0.0) {
      std::uintmax_t iters = 100;
      auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15; };
      const auto root = boost::math::tools::toms748_solve(stationarity, lo, hi, glo, ghi, tol, iters);
      t = 0.5 * (root.first + root.second);
    } else {
      // No sign change: the distance is flat across the bracket (e.g. a
      // circle seen from its center). A direct minimization is enough.
      t = boost::math::tools::brent_find_minima(squared, lo, hi, std::numeric_limits<double>::digits)
              .first;
    }
    const Point2 g = curve(shape, t);
    const double dist = distance(g, p);
    if (dist < best.distance) best = {g, dist};
  }
  return best;
}

} // namespace

const char *to_string(Containment c) {
  switch (c) {
    case Containment::interior:
      return "interior";
    case Containment::boundary:
      return "boundary";
    case Containment::exterior:
      return "exterior";
  }
  return "unknown";
}

Domain::Domain(Shape shape) : shape_(std::move(shape)) {
  auto finite_center = [](const Point2 &c) { return std::isfinite(c.x) && std::isfinite(c.y); };
  std::visit(Overloaded{
                 [&](const Disk &s) {
                   if (!finite_center(s.center) || !(s.radius > 0.0) || !std::isfinite(s.radius))
                     throw InvalidArgument("disk: radius must be positive and finite");
                 },
                 [&](const Ellipse &s) {
                   if (!finite_center(s.center) || !(s.b > 0.0) || !(s.a >= s.b) || !std::isfinite(s.a))
                     throw InvalidArgument("ellipse: semi-axes must satisfy a >= b > 0");
                 },
                 [&](const PNormBall &s) {
                   if (!finite_center(s.center) || !(s.radius > 0.0) || !std::isfinite(s.radius))
                     throw InvalidArgument("pnorm: radius must be positive and finite");
                   if (!(s.exponent > 1.0) || !std::isfinite(s.exponent))
                     throw InvalidArgument("pnorm: exponent must satisfy 1 < q < inf");
                 },
             },
             shape_);
}

std::string Domain::kind() const {
  return std::visit(Overloaded{
                        [](const Disk &) { return std::string("disk"); },
                        [](const Ellipse &) { return std::string("ellipse"); },
                        [](const PNormBall &) { return std::string("pnorm"); },
                    },
                    shape_);
}

Point2 Domain::center() const {
  return std::visit([](const auto &s) { return s.center; }, shape_);
}

BoundingBox Domain::bounding_box() const {
  return std::visit(Overloaded{
                        [](const Disk &s) {
                          const Point2 r{s.radius, s.radius};
                          return BoundingBox{s.center - r, s.center + r};
                        },
                        [](const Ellipse &s) {
                          const Point2 r{s.a, s.b};
                          return BoundingBox{s.center - r, s.center + r};
                        },
                        [](const PNormBall &s) {
                          const Point2 r{s.radius, s.radius};
                          return BoundingBox{s.center - r, s.center + r};
                        },
                    },
                    shape_);
}

double Domain::diameter() const {
  return std::visit(Overloaded{
                        [](const Disk &s) { return 2.0 * s.radius; },
                        [](const Ellipse &s) { return 2.0 * s.a; },
                        // Centrally symmetric, so diam = 2 max |p - c|: attained on the
                        // axes for q <= 2 and on the diagonals for q >= 2.
                        [](const PNormBall &s) {
                          return 2.0 * s.radius * std::max(1.0, std::pow(2.0, 0.5 - 1.0 / s.exponent));
                        },
                    },
                    shape_);
}

Point2 Domain::boundary_point(double t) const { return curve(shape_, t); }

double Domain::angle_of(const Point2 &p) const {
  const Point2 d = p - center();
  return std::atan2(d.y, d.x);
}

bool Domain::inside(const Point2 &p) const {
  return std::visit(Overloaded{
                        [&](const Disk &s) {
                          return sq(p.x - s.center.x) + sq(p.y - s.center.y) < sq(s.radius);
                        },
                        [&](const Ellipse &s) {
                          return sq((p.x - s.center.x) / s.a) + sq((p.y - s.center.y) / s.b) < 1.0;
                        },
                        [&](const PNormBall &s) {
                          const double q = s.exponent;
                          return std::pow(std::abs(p.x - s.center.x) / s.radius, q) +
                                     std::pow(std::abs(p.y - s.center.y) / s.radius, q) <
                                 1.0;
                        },
                    },
                    shape_);
}

BoundaryPoint Domain::nearest_boundary(const Point2 &p) const {
  if (const auto *disk = std::get_if<Disk>(&shape_)) {
    const Point2 d = p - disk->center;
    const double r = norm(d);
    if (r == 0.0) return {disk->center + Point2{disk->radius, 0.0}, disk->radius};
    return {disk->center + d * (disk->radius / r), std::abs(disk->radius - r)};
  }
  return nearest_on_curve(shape_, p);
}

Containment Domain::contains(const Point2 &p) const {
  if (nearest_boundary(p).distance <= kTolGeom) return Containment::boundary;
  return inside(p) ? Containment::interior : Containment::exterior;
}

double Domain::dist_to_boundary(const Point2 &p) const {
  if (const auto *disk = std::get_if<Disk>(&shape_)) {
    return std::max(0.0, disk->radius - norm(p - disk->center));
  }
  if (!inside(p)) return 0.0;
  return nearest_boundary(p).distance;
}

Point2 Domain::project_to_boundary(const Point2 &p) const { return nearest_boundary(p).point; }

} // namespace meanfix
