#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fbz/error.hpp"
#include "fbz/phase_space.hpp"
#include "fbz/snapshot_io.hpp"
#include "test_support.hpp"

using namespace fbz;

TEST_SUITE("phase_space") {

TEST_CASE("make_grid arithmetic and rejections") {
  const PhaseGrid g = make_grid(1, 1.0, 8, 6.0, 8, 8);
  CHECK(g.space_count() == 8);
  CHECK(g.velocity_count() == 64);
  CHECK(g.dw() == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  const PhaseGrid g2 = make_grid(2, 1.0, 8, 6.0, 16, 16);
  CHECK(g2.space_count() == 64);
  CHECK(g2.velocity_count() == 256);
  CHECK_THROWS_AS(make_grid(1, 1.0, 8, 6.0, 7, 8), ValidationError);
  CHECK_THROWS_AS(make_grid(1, 1.0, 8, 6.0, 8, 7), ValidationError);
  CHECK_THROWS_AS(make_grid(1, 0.0, 8, 6.0, 8, 8), ValidationError);
  CHECK_THROWS_AS(make_grid(1, 1.0, 8, -1.0, 8, 8), ValidationError);
  CHECK_THROWS_AS(make_grid(3, 1.0, 8, 6.0, 8, 8), ValidationError);
  CHECK_THROWS_AS(make_grid(1, 1.0, 1, 6.0, 8, 8), ValidationError);
}

TEST_CASE("velocity nodes and angular nodes are exactly mirrored") {
  const PhaseGrid g = make_grid(1, 1.0, 4, 6.0, 32, 16);
  for (int j = 0; j < g.Nv(); ++j) CHECK(g.v_node(g.Nv() - 1 - j) == -g.v_node(j));
  const auto w = g.omegas();
  for (int k = 0; k < g.Nomega() / 2; ++k) {
    CHECK(w[k + g.Nomega() / 2][0] == -w[k][0]);
    CHECK(w[k + g.Nomega() / 2][1] == -w[k][1]);
  }
}

TEST_CASE("moments of the discrete Maxwellian") {
  const PhaseGrid g = make_grid(1, 1.0, 4, 6.0, 32, 16);
  const auto M = test::global_maxwellian(g);
  const MomentVector m = moments(M);
  CHECK(std::abs(m.mass - 1.0) <= 1e-6);
  CHECK(std::abs(m.energy - 2.0) <= 1e-6);
  // v -> -v symmetric data: node pairing cancels the momentum exactly.
  CHECK(m.momentum[0] == 0.0);
  CHECK(m.momentum[1] == 0.0);
  // Discrete sums from an independent numpy evaluation.
  CHECK(m.mass == doctest::Approx(0.9999999968037674).epsilon(1e-13));
  CHECK(m.energy == doctest::Approx(1.999999872929913).epsilon(1e-13));
}

TEST_CASE("moments of zero and of a single cell") {
  const PhaseGrid g = make_grid(1, 1.0, 4, 6.0, 12, 8);
  DistributionFunction f(g);
  const MomentVector z = moments(f);
  CHECK(z.mass == 0.0);
  CHECK(z.energy == 0.0);
  // dv = 1: node 7 sits at v = 1.5, node 6 at v = 0.5.
  const int i = 7;
  const int j = 6;
  f(1, std::size_t(i) * g.Nv() + j) = 1.0;
  const MomentVector m = moments(f);
  const double w = g.phase_volume();
  CHECK(m.mass == doctest::Approx(w));
  CHECK(m.momentum[0] == doctest::Approx(1.5 * w));
  CHECK(m.momentum[1] == doctest::Approx(0.5 * w));
  CHECK(m.energy == doctest::Approx((1.5 * 1.5 + 0.25) * w));
}

TEST_CASE("moments are linear") {
  const PhaseGrid g = test::tiny_grid();
  const auto f = test::random_distribution(g, 1);
  const auto h = test::random_distribution(g, 2);
  DistributionFunction s(g);
  for (std::size_t i = 0; i < g.size(); ++i) s.values()[i] = 2.0 * f.values()[i] + 3.0 * h.values()[i];
  const auto mf = moments(f), mh = moments(h), ms = moments(s);
  CHECK(ms.mass == doctest::Approx(2 * mf.mass + 3 * mh.mass).epsilon(1e-14));
  CHECK(ms.energy == doctest::Approx(2 * mf.energy + 3 * mh.energy).epsilon(1e-14));
  CHECK(ms.momentum[0] == doctest::Approx(2 * mf.momentum[0] + 3 * mh.momentum[0]).epsilon(1e-12));
}

TEST_CASE("weighted_norm") {
  const PhaseGrid g = make_grid(1, 1.0, 4, 6.0, 32, 16);
  const auto f = test::random_distribution(g, 3);
  CHECK(weighted_norm(f, 0.0, 0.0) == 2.0 * moments(f).mass);
  CHECK(weighted_norm(DistributionFunction(g), 1.0, 2.0) == 0.0);
  const auto M = test::global_maxwellian(g);
  CHECK(std::abs(weighted_norm(M, 0.0, 2.0) - 4.0) <= 1e-5);
  CHECK(weighted_norm(M, 0.0, 2.0) == doctest::Approx(3.9999998665374474).epsilon(1e-13));
}

TEST_CASE("l1_distance examples and metric properties") {
  const PhaseGrid g = test::tiny_grid();
  const auto f = test::random_distribution(g, 4);
  CHECK(l1_distance(f, f) == 0.0);
  DistributionFunction f2 = f;
  const double mass = moments(f).mass;
  for (double& v : f2.values()) v *= 2.0;
  CHECK(l1_distance(f2, f) == doctest::Approx(mass).epsilon(1e-14));

  DistributionFunction a(g), b(g);
  a(0, 3) = 1.0;
  b(1, 5) = 1.0;
  CHECK(l1_distance(a, b) == doctest::Approx(2.0 * g.phase_volume()));

  for (std::uint64_t s = 10; s < 30; s += 3) {
    const auto x = test::random_distribution(g, s), y = test::random_distribution(g, s + 1),
               z = test::random_distribution(g, s + 2);
    CHECK(l1_distance(x, y) == l1_distance(y, x));
    CHECK(l1_distance(x, z) <= l1_distance(x, y) + l1_distance(y, z) + 1e-15);
    CHECK(l1_distance(x, y) > 0.0);
  }
  CHECK_THROWS_AS(l1_distance(f, DistributionFunction(test::tiny_grid(1, 10))), ValidationError);
}

TEST_CASE("validate rejects negative and non-finite values") {
  const PhaseGrid g = test::tiny_grid();
  DistributionFunction f(g);
  f.validate();
  f(0, 0) = -1e-300;
  CHECK_THROWS_AS(f.validate(), ValidationError);
  f(0, 0) = std::nan("");
  CHECK_THROWS_AS(f.validate(), ValidationError);
}

TEST_CASE("FBZ1 snapshot round trip and layout") {
  const PhaseGrid g = make_grid(2, 1.5, 3, 4.0, 6, 8);
  const auto f = test::random_distribution(g, 5);
  std::stringstream ss;
  write_snapshot(ss, f, 0.25);
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 4 + 16 + 24 + 8 * g.size());
  CHECK(bytes.substr(0, 4) == "FBZ1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 2);
  const Snapshot s = read_snapshot(ss);
  CHECK(s.time == 0.25);
  CHECK(s.f == f);

  std::stringstream bad(std::string("FBZ2") + bytes.substr(4));
  CHECK_THROWS_AS(read_snapshot(bad), ValidationError);
  std::stringstream trunc(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_snapshot(trunc), ValidationError);
}

}
