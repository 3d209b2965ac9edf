#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "colmod/analytic/qubit.hpp"
#include "support/random.hpp"

using namespace colmod;
using Catch::Approx;
using colmod::testing::Rng;

TEST_CASE("Bloch conversions", "[analytic][bloch]") {
  CHECK(density_from_bloch({0, 0, 0}).op().isApprox(identity(2) / 2.0));
  CHECK(density_from_bloch({0, 0, 1}).op().isApprox(DensityMatrix::basis_state(2, 0).op()));
  CHECK(bloch_from_density(DensityMatrix::basis_state(2, 0)) == BlochVector{0, 0, 1});
  CHECK_THROWS_AS(density_from_bloch({1, 0.1, 0}), DomainError);
  CHECK_THROWS_AS(bloch_from_density(DensityMatrix::maximally_mixed(3)), DimensionError);
  Rng rng(21);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const BlochVector r = testing::random_bloch(rng);
    worst = std::max(worst, distance(bloch_from_density(density_from_bloch(r)), r));
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("Gibbs Bloch component", "[analytic][bloch]") {
  CHECK(gibbs_bloch_z(1.0) == Approx(-0.46211715726000974).epsilon(1e-15));
  CHECK(gibbs_bloch_z(0.0) == 0.0);
  CHECK(gibbs_bloch_z(std::numeric_limits<double>::infinity()) == -1.0);
}

TEST_CASE("recursion step", "[analytic][recursion]") {
  const double s = gibbs_bloch_z(1.0);
  CHECK(distance(qubit::recursion_step({0, 0, s}, 0.75, s), {0, 0, s}) < 1e-16);
  CHECK(distance(qubit::recursion_step({0.3, -0.4, 0.5}, std::numbers::pi / 2, s), {0, 0, s}) < 1e-15);
  const BlochVector r = qubit::recursion_step({1, 0, 0}, 0.75, s);
  CHECK(r.x == Approx(0.5353686008338518).epsilon(1e-14));
  CHECK(r.y == Approx(0.23047977379528875).epsilon(1e-14));
  CHECK(r.z == Approx(-0.21471414135640166).epsilon(1e-14));
  // diagonal inputs stay on the z axis
  CHECK(qubit::recursion_step({0, 0, 1}, 0.75, s).z == Approx(0.3206544594774503).epsilon(1e-14));
}

TEST_CASE("closed form agrees with iteration", "[analytic][closed_form]") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = testing::uniform(rng, -3.1, 3.1);
    const double s = gibbs_bloch_z(testing::uniform(rng, 0.0, 4.0));
    const BlochVector r0 = testing::random_bloch(rng);
    CHECK(qubit::closed_form(r0, theta, s, 0).r == r0);
    BlochVector r = r0;
    const BlochVector target{0, 0, s};
    for (std::size_t n = 1; n <= 50; ++n) {
      r = qubit::recursion_step(r, theta, s);
      const auto cf = qubit::closed_form(r0, theta, s, n);
      CHECK(distance(cf.r, r) < 1e-12);
      CHECK(cf.length == Approx(r.norm()).margin(1e-12));
      CHECK(cf.dz == Approx(r.z - r0.z).margin(1e-12));
      const double decay = std::pow(std::cos(theta), 2.0 * static_cast<double>(n));
      // transverse part shrinks by |cos| per step, z part by cos^2
      CHECK(std::abs(cf.r.z - s) == Approx(decay * std::abs(r0.z - s)).margin(1e-12));
      CHECK(distance(cf.r, target) <= std::sqrt(decay) * distance(r0, target) + 1e-12);
    }
  }
}

TEST_CASE("diagonal inputs contract exactly as cos^2n", "[analytic][closed_form]") {
  const double s = gibbs_bloch_z(1.0);
  for (BlochVector r0 : {BlochVector{0, 0, 1}, BlochVector{0, 0, 0}, BlochVector{0, 0, -0.8}}) {
    for (std::size_t n = 0; n <= 30; ++n) {
      const auto cf = qubit::closed_form(r0, 0.75, s, n);
      CHECK(distance(cf.r, {0, 0, s}) ==
            Approx(std::pow(std::cos(0.75), 2.0 * static_cast<double>(n)) * std::abs(r0.z - s)).margin(1e-12));
    }
  }
  const auto far = qubit::closed_form({0, 0, 1}, 0.75, s, 200);
  CHECK(far.r.z == Approx(s).margin(1e-12));
}

TEST_CASE("analytic ledger", "[analytic][ledger]") {
  const auto traj = qubit::analytic_ledger({1, 0, 0}, 0.75, 1.0, 5);
  REQUIRE(traj.steps.size() == 5);
  CHECK(traj.steps[0].dS_A == Approx(0.4853791788320415).epsilon(1e-12));
  CHECK(traj.steps[0].beta_dQ_A == Approx(-0.10735707067820083).epsilon(1e-12));
  CHECK(-traj.steps[0].dS_B_loc == Approx(0.06471743753564774).epsilon(1e-12));
  CHECK(traj.steps[1].dS_A == Approx(0.5764829617026617).epsilon(1e-12));
  CHECK(-traj.steps[1].dS_B_loc == Approx(0.06383225671725279).epsilon(1e-12));
  CHECK(traj.steps[4].dS_A == Approx(0.5896720513699923).epsilon(1e-12));
  CHECK(-traj.steps[4].dS_B_loc == Approx(0.0351250759801478).epsilon(1e-12));
  CHECK(traj.steps[0].ancilla_out.y == Approx(-0.23047977379528875).epsilon(1e-12));

  const auto half = qubit::analytic_ledger({0.5, 0, 0}, 0.75, 1.0, 5);
  CHECK(half.steps[0].dS_A == Approx(0.06378176226568688).epsilon(1e-11));
  CHECK(-half.steps[2].dS_B_loc == Approx(-0.10700146499248198).epsilon(1e-11));
  CHECK(-half.steps[4].dS_B_loc == Approx(-0.12952428402718763).epsilon(1e-11));

  const auto up = qubit::analytic_ledger({0, 0, 1}, 0.75, 1.0, 5);
  CHECK(up.steps[0].dS_A == Approx(0.6408181896603101).epsilon(1e-12));
  CHECK(up.steps[0].beta_dQ_A == Approx(-0.33967277026127485).epsilon(1e-12));
  CHECK(-up.steps[4].dS_B_loc == Approx(-0.3394372205046222).epsilon(1e-12));
}

TEST_CASE("analytic ledger limits and telescoping", "[analytic][ledger]") {
  const double s = gibbs_bloch_z(1.0);
  const auto fixed = qubit::analytic_ledger({0, 0, s}, 0.75, 1.0, 20);
  for (const auto& st : fixed.steps) {
    CHECK(std::abs(st.dS_A) < 1e-15);
    CHECK(std::abs(st.dQ_A) < 1e-15);
    CHECK(std::abs(st.dS_B_loc) < 1e-15);
  }
  const auto up = qubit::analytic_ledger({0, 0, 1}, 0.75, 1.0, 200);
  CHECK(up.steps.back().dQ_A == Approx(-0.7310585786300049).epsilon(1e-12));

  const auto traj = qubit::analytic_ledger({0.3, 0.4, -0.2}, 1.1, 0.7, 15);
  double q = 0.0;
  double loc = 0.0;
  double ds = 0.0;
  for (const auto& st : traj.steps) {
    q += st.incr_beta_dQ_A;
    loc -= st.incr_neg_dS_b;
    ds += st.incr_dS_A;
    CHECK(q == Approx(st.beta_dQ_A).margin(1e-10));
    CHECK(loc == Approx(st.dS_B_loc).margin(1e-10));
    CHECK(ds == Approx(st.dS_A).margin(1e-10));
  }
  CHECK_THROWS_AS(qubit::analytic_ledger({0, 0, 1}, 0.75, std::numeric_limits<double>::infinity(), 3), DomainError);
}

TEST_CASE("entropy grows as the Bloch vector shrinks", "[analytic][monotone]") {
  double prev = qubit::entropy_from_length(1.0);
  for (int i = 99; i >= 0; --i) {
    const double cur = qubit::entropy_from_length(i / 100.0);
    CHECK(cur > prev);
    prev = cur;
  }
}
