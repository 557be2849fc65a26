#include "submetry/geometry.hpp"
#include "submetry/topology.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace submetry;

namespace {

PlanePoint pp(const Point& p) { return std::get<PlanePoint>(p); }
Vec3 sv(const Point& p) { return std::get<SpherePoint>(p).v; }

// Dense sampling, then a second pass over the bracket around the best sample.
double sampled_distance(const Point& x, const CurvePiece& piece, int n) {
  double best = 1e300;
  int arg = 0;
  for (int i = 0; i <= n; ++i) {
    const double d = distance(x, point_on_piece(piece, double(i) / n));
    if (d < best) best = d, arg = i;
  }
  const double lo = std::max(0.0, (arg - 1.0) / n), hi = std::min(1.0, (arg + 1.0) / n);
  for (int i = 0; i <= n; ++i) best = std::min(best, distance(x, point_on_piece(piece, lo + (hi - lo) * i / n)));
  return best;
}

}  // namespace

TEST_CASE("distance to an upper half circle") {
  const FootPoint f = distance_to_piece(PlanePoint(0, 2), make_arc({0, 0}, 1, 0, kPi));
  CHECK(f.distance == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pp(f.foot).x == doctest::Approx(0.0));
  CHECK(pp(f.foot).y == doctest::Approx(1.0));
  CHECK_FALSE(f.foot_is_endpoint);
}

TEST_CASE("distance to a segment projects inside") {
  const FootPoint f = distance_to_piece(PlanePoint(3, 4), make_segment({0, 0}, {0, 10}));
  CHECK(f.distance == doctest::Approx(3.0));
  CHECK(pp(f.foot).x == doctest::Approx(0.0));
  CHECK(pp(f.foot).y == doctest::Approx(4.0));
  CHECK_FALSE(f.foot_is_endpoint);
}

TEST_CASE("pole against an equator arc breaks the tie at the start") {
  const SphericalArc eq = make_spherical_arc(SpherePoint(Vec3::UnitZ()), kPi / 2, Vec3::UnitX(), kPi);
  const FootPoint f = distance_to_piece(SpherePoint(Vec3::UnitZ()), eq);
  CHECK(f.distance == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK((sv(f.foot) - Vec3::UnitX()).norm() < 1e-12);
  CHECK(f.param == 0.0);
  CHECK(f.foot_is_endpoint);
}

TEST_CASE("mismatched ambient spaces are rejected") {
  CHECK_THROWS_AS(distance_to_piece(SpherePoint(Vec3::UnitZ()), make_segment({0, 0}, {1, 0})), InvalidInput);
  CHECK_THROWS_AS(distance_to_piece(PlanePoint(0, 0), make_spherical_arc(SpherePoint(Vec3::UnitZ()), 1.0,
                                                                         Vec3::UnitX(), 1.0)),
                  InvalidInput);
}

TEST_CASE("sphere geodesic examples") {
  const SpherePoint s(Vec3::UnitX());
  CHECK((sphere_geodesic(s, Vec3::UnitZ(), 0.0).v - Vec3::UnitX()).norm() < 1e-15);
  CHECK((sphere_geodesic(s, Vec3::UnitZ(), kPi / 2).v - Vec3::UnitZ()).norm() < 1e-15);
  for (const Vec3& dir : {Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(0, 0.6, 0.8)}) {
    CHECK((sphere_geodesic(s, dir, kPi).v + Vec3::UnitX()).norm() < 1e-15);
  }
}

TEST_CASE("endpoint data of a segment and a half circle") {
  const EndpointData s = piece_endpoint_data(make_segment({0, 0}, {2, 0}));
  CHECK(distance(s.start, PlanePoint(0, 0)) == 0.0);
  CHECK(distance(s.end, PlanePoint(2, 0)) == 0.0);
  CHECK((std::get<PlaneTangent>(s.start_tangent).dir - Vec2(1, 0)).norm() < 1e-15);
  CHECK((std::get<PlaneTangent>(s.end_tangent).dir - Vec2(1, 0)).norm() < 1e-15);

  const EndpointData c = piece_endpoint_data(make_arc({0, 0}, 1, 0, kPi));
  CHECK(distance(c.start, PlanePoint(1, 0)) < 1e-15);
  CHECK(distance(c.end, PlanePoint(-1, 0)) < 1e-15);
  CHECK((std::get<PlaneTangent>(c.start_tangent).dir - Vec2(0, 1)).norm() < 1e-15);
  CHECK((std::get<PlaneTangent>(c.end_tangent).dir - Vec2(0, -1)).norm() < 1e-15);
}

TEST_CASE("spherical arc endpoint tangents match finite differences") {
  const SpherePoint c(Vec3::UnitX());
  const SphericalArc arc = make_spherical_arc(c, kPi / 4, Vec3::UnitY(), kPi);
  const EndpointData e = piece_endpoint_data(arc);
  for (const Point& p : {e.start, e.end}) CHECK(distance(p, Point(c)) == doctest::Approx(kPi / 4).epsilon(1e-14));
  const double h = 1e-6;
  const Vec3 fd_start = (sv(point_on_piece(arc, h)) - sv(point_on_piece(arc, 0))).normalized();
  const Vec3 fd_end = (sv(point_on_piece(arc, 1)) - sv(point_on_piece(arc, 1 - h))).normalized();
  const Vec3 ts = std::get<SphereTangent>(e.start_tangent).dir;
  const Vec3 te = std::get<SphereTangent>(e.end_tangent).dir;
  CHECK((ts - fd_start).norm() < 1e-5);
  CHECK((te - fd_end).norm() < 1e-5);
  // tangent to the circle: orthogonal to the great-circle direction toward the center
  for (const auto& [p, t] : {std::pair{sv(e.start), ts}, std::pair{sv(e.end), te}}) {
    const Vec3 radial = (c.v - c.v.dot(p) * p).normalized();
    CHECK(std::abs(t.dot(radial)) < 1e-12);
    CHECK(std::abs(t.dot(p)) < 1e-12);
  }
}

TEST_CASE("point on piece examples") {
  CHECK(distance(point_on_piece(make_segment({0, 0}, {2, 0}), 0.5), PlanePoint(1, 0)) < 1e-15);
  CHECK(distance(point_on_piece(make_arc({0, 0}, 2, 0, kPi), 0.5), PlanePoint(0, 2)) < 1e-15);
  const SphericalArc eq = make_spherical_arc(SpherePoint(Vec3::UnitZ()), kPi / 2, Vec3::UnitX(), kPi);
  CHECK((sv(point_on_piece(eq, 0.5)) - Vec3::UnitY()).norm() < 1e-15);
  CHECK_THROWS_AS(point_on_piece(eq, 1.5), InvalidInput);
  CHECK_THROWS_AS(point_on_piece(eq, -0.1), InvalidInput);
}

TEST_CASE("angles are normalized to (-pi, pi]") {
  CHECK(normalize_angle(kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(-kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(make_arc({0, 0}, 1, 7.0, 1.0).start_angle == doctest::Approx(7.0 - 2 * kPi));
}

TEST_CASE("property: exact distance agrees with dense sampling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const CurvePiece piece = trial % 3 == 0
                                 ? CurvePiece(make_segment({3 * u(rng), 3 * u(rng)}, {3 * u(rng), 3 * u(rng)}))
                             : trial % 3 == 1
                                 ? CurvePiece(make_arc({u(rng), u(rng)}, 0.2 + 2 * std::abs(u(rng)), kPi * u(rng),
                                                       2 * kPi * u(rng)))
                                 : CurvePiece(
                                       [&] {
                                         const SpherePoint c = SpherePoint::normalized(Vec3(u(rng), u(rng), u(rng)));
                                         const Vec3 any = Vec3(u(rng), u(rng), u(rng));
                                         const Vec3 sd = (any - any.dot(c.v) * c.v).normalized();
                                         return make_spherical_arc(c, 0.1 + 3 * std::abs(u(rng)), sd,
                                                                   2 * kPi * u(rng));
                                       }());
    const Point x = ambient_of(piece) == Ambient::Plane
                        ? Point(PlanePoint(4 * u(rng), 4 * u(rng)))
                        : Point(SpherePoint::normalized(Vec3(u(rng), u(rng), u(rng))));
    const double exact = distance_to_piece(x, piece).distance;
    const double sampled = sampled_distance(x, piece, 10000);
    CHECK(exact <= sampled + 1e-12);
    CHECK(sampled - exact < 1e-6);
  }
}

TEST_CASE("property: geodesics stay on the unit sphere") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> t(-20.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const SpherePoint s = SpherePoint::normalized(Vec3(n(rng), n(rng), n(rng)));
    const Vec3 any(n(rng), n(rng), n(rng));
    const Vec3 dir = (any - any.dot(s.v) * s.v).normalized();
    worst = std::max(worst, std::abs(sphere_geodesic(s, dir, t(rng)).v.norm() - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("property: parametrization endpoints match endpoint data") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const CurvePiece pieces[] = {
        make_segment({u(rng), u(rng)}, {u(rng) + 2, u(rng)}),
        make_arc({u(rng), u(rng)}, 0.5 + std::abs(u(rng)), kPi * u(rng), 2 * kPi * u(rng)),
        make_spherical_arc(SpherePoint(Vec3::UnitZ()), 0.2 + 2 * std::abs(u(rng)), Vec3::UnitX(), 6 * u(rng)),
    };
    for (const auto& piece : pieces) {
      const EndpointData e = piece_endpoint_data(piece);
      CHECK(distance(e.start, point_on_piece(piece, 0.0)) <= 1e-12);
      CHECK(distance(e.end, point_on_piece(piece, 1.0)) <= 1e-12);
    }
  }
}

TEST_CASE("union-find groups a square of segments and a stray point") {
  const std::vector<CurvePiece> square{make_segment({0, 0}, {1, 0}), make_segment({1, 1}, {1, 0}),
                                       make_segment({1, 1}, {0, 1}), make_segment({0, 0}, {0, 1}),
                                       make_segment({5, 5}, {6, 5})};
  const std::vector<Point> points{PlanePoint(6, 5), PlanePoint(9, 9)};
  const auto comps = connected_components(square, points);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0].pieces.size() == 4);
  CHECK(comps[1].pieces == std::vector<std::size_t>{4});
  CHECK(comps[1].points == std::vector<std::size_t>{0});
  CHECK(comps[2].points == std::vector<std::size_t>{1});
  const auto chains = order_into_chains(square);
  REQUIRE(chains.size() == 2);
  const auto closed = std::count_if(chains.begin(), chains.end(), [](const Chain& c) { return c.closed; });
  CHECK(closed == 1);
  for (const auto& c : chains) CHECK(c.pieces.size() == (c.closed ? 4u : 1u));
}
