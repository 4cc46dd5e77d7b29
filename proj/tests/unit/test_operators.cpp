#include <doctest.h>

#include <cmath>
#include <random>

#include "zeno/errors.hpp"
#include "zeno/operators.hpp"

using namespace zeno;

namespace {

const PhysicalConstants C = PhysicalConstants::codata2018();
const UnitSystem micron(1e-6, C.proton_mass);

std::vector<Complex> random_vector(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

TEST_CASE("regularized Coulomb potential") {
  const ChargeConfig p = ChargeConfig::protons();
  CHECK(coulomb_potential(0.5e-6, 1.5e-6, p, 1e-15) ==
        doctest::Approx(2.3070775523517033e-22).epsilon(1e-13));
  const double at_contact = coulomb_potential(1e-6, 1e-6, p, 1e-15);
  CHECK(std::isfinite(at_contact));
  CHECK(at_contact == doctest::Approx(C.coulomb_k * C.elementary_charge * C.elementary_charge / 1e-15));
  CHECK(coulomb_potential(0.3, 0.7, p, 1e-15) == coulomb_potential(0.7, 0.3, p, 1e-15));
}

TEST_CASE("ion pair validation") {
  IonPair ions;
  CHECK_NOTHROW(ions.validate());
  ions.epsilon = 0.0;
  CHECK_THROWS_AS(ions.validate(), ValidationError);
  ions = IonPair{};
  ions.interacting = false;
  CHECK(ions.coupling() == 0.0);
}

TEST_CASE("three-node Hamiltonian matches the dense stencil") {
  const Grid2D g(2e-6, 16);
  NodeSet::Builder b(16);
  b.add(5, 5, 7);
  b.add(6, 6, 7);
  auto support = std::make_shared<const NodeSet>(std::move(b).finish());
  const IonPair ions;
  const HamiltonianOperator H = assemble_on(g, support, ions, micron);
  REQUIRE(H.size() == 3);

  const double hp = g.spacing();
  const double hop = C.hbar * C.hbar / (2.0 * C.proton_mass * hp * hp) / micron.energy_scale();
  CHECK(H.hopping1() == doctest::Approx(hop).epsilon(1e-13));
  CHECK(H.hopping2() == doctest::Approx(hop).epsilon(1e-13));

  const std::pair<int, int> nodes[3] = {{5, 5}, {5, 6}, {6, 6}};
  double V[3];
  for (int k = 0; k < 3; ++k) {
    V[k] = coulomb_potential(g.node(nodes[k].first), g.node(nodes[k].second), ions.charges, ions.epsilon) /
           micron.energy_scale();
    CHECK(H.potential()[k] == doctest::Approx(V[k]).epsilon(1e-13));
  }
  const double dense[3][3] = {{V[0] + 4 * hop, -hop, 0.0},
                              {-hop, V[1] + 4 * hop, -hop},
                              {0.0, -hop, V[2] + 4 * hop}};
  for (int c = 0; c < 3; ++c) {
    std::vector<double> e(3, 0.0), out(3);
    e[static_cast<std::size_t>(c)] = 1.0;
    H.apply(e, out);
    for (int r = 0; r < 3; ++r) CHECK(out[static_cast<std::size_t>(r)] == doctest::Approx(dense[r][c]).epsilon(1e-13));
  }
}

TEST_CASE("unequal masses give separate hopping terms") {
  const Grid2D g(1e-6, 31);
  IonPair ions;
  ions.charges = {C.elementary_charge, C.elementary_charge, C.proton_mass, 4.0 * C.proton_mass};
  const HamiltonianOperator H = assemble(g, full_square_mask(g), ions, micron);
  CHECK(H.hopping1() == doctest::Approx(4.0 * H.hopping2()).epsilon(1e-14));
}

TEST_CASE("Hamiltonian is Hermitian on random vectors") {
  const Grid2D g(2e-6, 127);
  const HamiltonianOperator H = assemble(g, build_mask(g, 1e-6, ChargeConfig::protons()), IonPair{}, micron);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto u = random_vector(H.size(), rng), v = random_vector(H.size(), rng);
    std::vector<Complex> Hu(u.size()), Hv(v.size());
    H.apply(u, Hu);
    H.apply(v, Hv);
    const Complex a = dot(u, Hv), b = std::conj(dot(v, Hu));
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    CHECK(std::abs(H.inner(u, v) - a) <= 1e-12 * std::abs(a));
  }
  const auto u = random_vector(H.size(), rng);
  const Wavefunction psi = Wavefunction::normalized(g, H.support_ptr(), u);
  const Complex e = expectation_value_internal(H, psi);
  CHECK(std::abs(e.imag()) <= 1e-12 * std::abs(e.real()));
}

TEST_CASE("spectrum is bounded below by the lowest potential") {
  const Grid2D g(2e-6, 63);
  const HamiltonianOperator H = assemble(g, build_mask(g, 1e-6, ChargeConfig::protons()), IonPair{}, micron);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const Wavefunction psi = Wavefunction::normalized(g, H.support_ptr(), random_vector(H.size(), rng));
    CHECK(expectation_value_internal(H, psi).real() >= H.min_potential());
  }
}

TEST_CASE("rows only couple support nodes") {
  const Grid2D g(2e-6, 63);
  const ConstraintMask m = build_mask(g, 1e-6, ChargeConfig::protons());
  const HamiltonianOperator H = assemble(g, m, IonPair{}, micron);
  CHECK(H.size() == m.inside_count());
  const auto rows = H.row_offsets();
  const auto cols = H.columns();
  REQUIRE(rows.size() == static_cast<std::size_t>(H.size() + 1));
  for (std::int64_t r = 0; r < H.size(); ++r) {
    const auto [i, j] = m.nodes->node(r);
    for (std::int64_t k = rows[r]; k < rows[r + 1]; ++k) {
      const auto [a, b] = m.nodes->node(cols[k]);
      CHECK(std::abs(a - i) + std::abs(b - j) <= 1);
    }
  }
}

TEST_CASE("expectation energy rejects a foreign support") {
  const Grid2D g(2e-6, 31);
  const HamiltonianOperator H = assemble(g, full_square_mask(g), IonPair{}, micron);
  NodeSet::Builder b(31);
  b.add(3, 3, 5);
  auto other = std::make_shared<const NodeSet>(std::move(b).finish());
  const Wavefunction psi = Wavefunction::normalized(g, other, {1.0, 1.0});
  CHECK_THROWS_AS(expectation_energy(H, psi), ShapeError);
}

TEST_CASE("empty mask support is rejected") {
  const Grid2D g(2e-6, 31);
  CHECK_THROWS(assemble_on(g, std::make_shared<const NodeSet>(), IonPair{}, micron));
}

TEST_CASE("wavefunction normalization, embedding and region probability") {
  const Grid2D g(2e-6, 20);
  NodeSet::Builder b(20);
  b.add(2, 2, 4);
  b.add(3, 2, 4);
  auto small = std::make_shared<const NodeSet>(std::move(b).finish());
  const Wavefunction psi = Wavefunction::normalized(g, small, {1.0, Complex(0.0, 1.0), 1.0, 1.0});
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi.amplitude(2, 3) == Complex(0.0, 0.5));
  CHECK(psi.amplitude(9, 9) == Complex(0.0, 0.0));
  CHECK(std::abs(psi.value(2, 2) - 0.5 / g.spacing()) < 1e-9 / g.spacing());

  auto full = std::make_shared<const NodeSet>(NodeSet::full(20));
  const Wavefunction wide = psi.embedded(full);
  CHECK(wide.size() == 400);
  CHECK(wide.amplitude(3, 3) == psi.amplitude(3, 3));
  CHECK_THROWS_AS(wide.embedded(small), ShapeError);

  NodeSet::Builder r(20);
  r.add(2, 0, 20);
  CHECK(psi.probability_in(std::move(r).finish()) == doctest::Approx(0.5));

  CHECK_THROWS_AS(Wavefunction(g, small, {1.0, 1.0, 1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(Wavefunction::normalized(g, small, {0.0, 0.0, 0.0, 0.0}), ZeroProbabilityError);
  CHECK_THROWS_AS(Wavefunction::normalized(g, small, {1.0}), ShapeError);
}
