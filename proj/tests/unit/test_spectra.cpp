#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "zeno/errors.hpp"
#include "zeno/spectra.hpp"

using namespace zeno;

namespace {

const PhysicalConstants C = PhysicalConstants::codata2018();
const UnitSystem micron(1e-6, C.proton_mass);

IonPair free_ions() {
  IonPair ions;
  ions.interacting = false;
  return ions;
}

GroundStateOptions tight() {
  GroundStateOptions o;
  o.tolerance = 1e-11;
  return o;
}

}  // namespace

TEST_CASE("free pair matches the discrete box eigenvalue") {
  const Grid2D g(1e-6, 64);
  const HamiltonianOperator H = assemble(g, full_square_mask(g), free_ions(), micron);
  const GroundStateResult r = ground_state(H, tight());
  CHECK(r.energy == doctest::Approx(6.5609954752043076e-29).epsilon(1e-10));
  CHECK(r.residual_norm <= 1e-11);
  CHECK(r.psi0.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("free pair converges at second order") {
  const double exact = 6.562272832084772e-29;
  double err[3];
  const int sizes[3] = {63, 127, 255};
  for (int k = 0; k < 3; ++k) {
    const Grid2D g(1e-6, sizes[k]);
    err[k] = ground_state(assemble(g, full_square_mask(g), free_ions(), micron), tight()).energy - exact;
    CHECK(err[k] < 0.0);
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.02));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("interacting ground state agrees with a dense eigensolver") {
  const Grid2D g(2e-6, 16);
  const HamiltonianOperator H = assemble(g, full_square_mask(g), IonPair{}, micron);
  const auto n = static_cast<Eigen::Index>(H.size());
  Eigen::MatrixXd A(n, n);
  std::vector<double> e(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[static_cast<std::size_t>(c)] = 1.0;
    H.apply(e, out);
    for (Eigen::Index r = 0; r < n; ++r) A(r, c) = out[static_cast<std::size_t>(r)];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const GroundStateResult r = ground_state(H, tight());
  CHECK(r.energy_internal == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
  // the two lowest levels are a tunnelling doublet; project onto the near-degenerate subspace
  double weight = 0.0;
  for (Eigen::Index m = 0; m < n && es.eigenvalues()(m) - es.eigenvalues()(0) < 1e-6 * std::abs(es.eigenvalues()(0)); ++m) {
    Complex overlap = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) overlap += es.eigenvectors()(k, m) * r.psi0.amplitudes()[static_cast<std::size_t>(k)];
    weight += std::norm(overlap);
  }
  CHECK(weight == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Rayleigh quotient history never rises and bounds random states") {
  const Grid2D g(2e-6, 255);
  const ConstraintMask m = build_mask(g, 1e-6, ChargeConfig::protons());
  const HamiltonianOperator H = assemble(g, m, IonPair{}, micron);
  const GroundStateResult r = ground_state(H);
  for (std::size_t k = 1; k < r.energy_history.size(); ++k) {
    CHECK(r.energy_history[k] <= r.energy_history[k - 1] * (1.0 + 1e-13));
  }
  CHECK(r.energy_internal >= H.min_potential());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 5; ++t) {
    std::vector<Complex> v(static_cast<std::size_t>(H.size()));
    for (auto& x : v) x = gauss(rng);
    const Wavefunction psi = Wavefunction::normalized(g, H.support_ptr(), v);
    CHECK(expectation_energy(H, psi) >= r.energy);
  }
  CHECK(expectation_energy(H, r.psi0) == doctest::Approx(r.energy).epsilon(1e-12));
}

TEST_CASE("ground state is exchange symmetric for identical ions") {
  const Grid2D g(2e-6, 255);
  const ConfinedGroundState s =
      confined_ground_state(g, build_mask(g, 1e-6, ChargeConfig::protons()), IonPair{}, micron, tight());
  double diff = 0.0, total = 0.0;
  s.result.psi0.support().for_each([&](int i, int j, std::int64_t k) {
    const Complex a = s.result.psi0.amplitudes()[static_cast<std::size_t>(k)];
    diff += std::norm(a - s.result.psi0.amplitude(j, i));
    total += std::norm(a);
  });
  CHECK(std::sqrt(diff / total) < 1e-6);
}

TEST_CASE("energy window solve agrees with the whole mask") {
  const Grid2D g(2e-6, 511);
  const ConstraintMask m = build_mask(g, 1e-6, ChargeConfig::protons());
  LocalizationOptions off;
  off.enabled = false;
  const ConfinedGroundState whole = confined_ground_state(g, m, IonPair{}, micron, tight(), off);
  const ConfinedGroundState local = confined_ground_state(g, m, IonPair{}, micron, tight());
  CHECK_FALSE(whole.localized);
  CHECK(local.localized);
  CHECK(local.support->subset_of(*m.nodes));
  CHECK(local.support->size() < m.inside_count());
  CHECK(local.result.energy == doctest::Approx(whole.result.energy).epsilon(1e-9));
  CHECK(local.window_energy >= 4.0 * (local.result.energy - minimum_potential(g, m, IonPair{})) * 0.999);
}

TEST_CASE("energy window and minimum potential") {
  const Grid2D g(2e-6, 255);
  const ConstraintMask m = build_mask(g, 1e-6, ChargeConfig::protons());
  const IonPair ions;
  const double vmin = minimum_potential(g, m, ions);
  const auto w = energy_window(g, m, ions, micron, 0.05 * vmin);
  CHECK(w->subset_of(*m.nodes));
  m.nodes->for_each([&](int i, int j, std::int64_t) {
    const double v = coulomb_potential(g.node(i), g.node(j), ions.charges, ions.epsilon);
    CHECK(v >= vmin * (1.0 - 1e-14));
    CHECK(w->contains(i, j) == (v < vmin + 0.05 * vmin));
  });
}

TEST_CASE("shrinking the domain raises the ground-state energy") {
  const Grid2D g(2e-6, 511);
  const ChargeConfig p = ChargeConfig::protons();
  double prev = 0.0;
  for (double d : {1.0e-6, 0.992e-6, 0.95e-6, 0.9e-6}) {
    const double e = confined_ground_state(g, build_mask(g, d, p), IonPair{}, micron).result.energy;
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("option validation") {
  GroundStateOptions o;
  o.tolerance = 0.0;
  CHECK_THROWS_AS(o.validate(), ValidationError);
  o = GroundStateOptions{};
  o.max_iterations = 0;
  CHECK_THROWS_AS(o.validate(), ValidationError);
  LocalizationOptions l;
  l.margin_factor = 0.5;
  CHECK_THROWS_AS(l.validate(), ValidationError);
}

TEST_CASE("iteration cap raises a convergence error carrying the best iterate") {
  const Grid2D g(2e-6, 127);
  const HamiltonianOperator H = assemble(g, build_mask(g, 1e-6, ChargeConfig::protons()), IonPair{}, micron);
  GroundStateOptions o;
  o.max_iterations = 1;
  o.imaginary_time_steps = 1;
  o.tolerance = 1e-14;
  try {
    (void)ground_state(H, o);
    FAIL("expected a convergence error");
  } catch (const GroundStateConvergenceError& e) {
    CHECK(e.best().psi0.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.best().residual_norm > 1e-14);
  }
}
