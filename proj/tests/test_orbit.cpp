#include <doctest.h>

#include <cmath>

#include "core/orbit.hpp"
#include "core/rng.hpp"

using namespace leoisl;

namespace {

WalkerConfig reference_walker() {
  return WalkerConfig::make(22, 72, 550.0, 53.0 * M_PI / 180.0, 17, 5460.0);
}

}  // namespace

TEST_CASE("shell radius and orbital speed") {
  WalkerConfig cfg = reference_walker();
  CHECK(cfg.K == 1584);
  CHECK(cfg.shell_radius_km() == doctest::Approx(6928.0));
  CHECK(cfg.period_s() == doctest::Approx(5460.0));
  const double speed = cfg.shell_radius_km() * cfg.omega_rad_s;
  CHECK(speed == doctest::Approx(7.97).epsilon(0.01));
}

TEST_CASE("1D index mapping is row-major and 1-based") {
  WalkerConfig cfg = reference_walker();
  CHECK(to_1d(cfg, {1, 1}) == 1);
  CHECK(to_1d(cfg, {22, 72}) == 1584);
  CHECK(to_1d(cfg, {15, 47}) == 1055);
  CHECK(to_1d(cfg, {6, 5}) == 365);
  CHECK(to_1d(cfg, {16, 44}) == 1124);
  for (int idx : {1, 365, 1055, 1584}) {
    SatIndex s = from_1d(cfg, idx);
    CHECK(to_1d(cfg, s) == idx);
  }
  CHECK_THROWS_AS(from_1d(cfg, 0), Error);
  CHECK_THROWS_AS(from_1d(cfg, 1585), Error);
  CHECK_THROWS_AS(check_index(cfg, {23, 1}), Error);
}

TEST_CASE("first-plane first-slot position at t=0") {
  WalkerConfig cfg = reference_walker();
  const double r = cfg.shell_radius_km();
  const double ca = std::cos(cfg.alpha_rad), sa = std::sin(cfg.alpha_rad);
  Eigen::Vector3d pos = ecef_position(cfg, {1, 1}, 0.0);
  CHECK(pos.x() == doctest::Approx(r * ca).epsilon(1e-12));
  CHECK(pos.y() == doctest::Approx(0.0).scale(r));
  CHECK(pos.z() == doctest::Approx(r * sa).epsilon(1e-12));
  CHECK(pos.norm() == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("velocity matches the numeric derivative of position") {
  WalkerConfig cfg = reference_walker();
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    SatIndex s{1 + static_cast<int>(rng.below(22)),
               1 + static_cast<int>(rng.below(72))};
    const double t = rng.u01() * cfg.period_s();
    const double h = 1e-3;
    Eigen::Vector3d num =
        (ecef_position(cfg, s, t + h) - ecef_position(cfg, s, t - h)) /
        (2.0 * h);
    Eigen::Vector3d ana = ecef_velocity(cfg, s, t);
    CHECK((num - ana).norm() <= 1e-6 * ana.norm());
  }
}

TEST_CASE("positions are periodic over one revolution") {
  WalkerConfig cfg = reference_walker();
  for (const SatIndex& s : {SatIndex{3, 9}, SatIndex{15, 47}}) {
    Eigen::Vector3d a = ecef_position(cfg, s, 123.0);
    Eigen::Vector3d b = ecef_position(cfg, s, 123.0 + cfg.period_s());
    CHECK((a - b).norm() <= 1e-6);
  }
}

TEST_CASE("distance is symmetric and zero for identical satellites") {
  WalkerConfig cfg = reference_walker();
  CHECK(distance_km(cfg, {2, 3}, {5, 8}, 400.0) ==
        doctest::Approx(distance_km(cfg, {5, 8}, {2, 3}, 400.0)));
  CHECK(distance_km(cfg, {2, 3}, {2, 3}, 400.0) == 0.0);
}

TEST_CASE("intra-plane spacing stays constant over time") {
  WalkerConfig cfg = reference_walker();
  const double d0 = distance_km(cfg, {15, 43}, {15, 47}, 0.0);
  for (double t : {100.0, 1000.0, 3000.0}) {
    CHECK(distance_km(cfg, {15, 43}, {15, 47}, t) ==
          doctest::Approx(d0).epsilon(1e-10));
  }
}

TEST_CASE("Doppler shift equals the range-rate finite difference") {
  WalkerConfig cfg = reference_walker();
  const double f_c = 4.0e10;
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    SatIndex a{1 + static_cast<int>(rng.below(22)),
               1 + static_cast<int>(rng.below(72))};
    SatIndex sink{15, 47};
    if (a == sink) continue;
    const double t = rng.u01() * cfg.period_s();
    const double h = 1e-3;
    const double dd = (distance_km(cfg, a, sink, t + h) -
                       distance_km(cfg, a, sink, t - h)) /
                      (2.0 * h);
    const double expected = dd * f_c / kLightSpeedKmS;
    const double got = doppler_shift_hz(cfg, a, sink, t, f_c);
    CHECK(got == doctest::Approx(expected).epsilon(1e-5).scale(1e6));
  }
}

TEST_CASE("Doppler shift is symmetric under endpoint swap") {
  WalkerConfig cfg = reference_walker();
  const double f_c = 4.0e10;
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    SatIndex a{1 + static_cast<int>(rng.below(22)),
               1 + static_cast<int>(rng.below(72))};
    SatIndex b{1 + static_cast<int>(rng.below(22)),
               1 + static_cast<int>(rng.below(72))};
    if (a == b) continue;
    const double t = rng.u01() * cfg.period_s();
    CHECK(doppler_shift_hz(cfg, a, b, t, f_c) ==
          doctest::Approx(doppler_shift_hz(cfg, b, a, t, f_c)).epsilon(1e-12));
  }
}

TEST_CASE("identical endpoints are rejected") {
  WalkerConfig cfg = reference_walker();
  CHECK_THROWS_AS(radial_speed_km_s(cfg, {2, 2}, {2, 2}, 0.0), Error);
  try {
    radial_speed_km_s(cfg, {2, 2}, {2, 2}, 0.0);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::degenerate_pair);
  }
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(WalkerConfig::make(0, 72, 550.0, 0.9, 17, 5460.0), Error);
  CHECK_THROWS_AS(WalkerConfig::make(22, 72, -1.0, 0.9, 17, 5460.0), Error);
  CHECK_THROWS_AS(WalkerConfig::make(22, 72, 550.0, 0.9, 22, 5460.0), Error);
  CHECK_THROWS_AS(WalkerConfig::make(22, 72, 550.0, 0.9, 17, 0.0), Error);
}
