#include "zeno/spectra.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace zeno {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;

SparseMatrix to_eigen(const HamiltonianOperator& H) {
  // H is symmetric, so its CSR arrays double as CSC arrays.
  const auto n = static_cast<int>(H.size());
  const auto rows = H.row_offsets();
  const auto cols = H.columns();
  const auto vals = H.values();
  SparseMatrix A(n, n);
  A.resizeNonZeros(static_cast<Eigen::Index>(vals.size()));
  for (int c = 0; c <= n; ++c) A.outerIndexPtr()[c] = static_cast<int>(rows[static_cast<std::size_t>(c)]);
  for (std::size_t p = 0; p < vals.size(); ++p) {
    A.innerIndexPtr()[p] = static_cast<int>(cols[p]);
    A.valuePtr()[p] = vals[p];
  }
  return A;
}

void apply(const HamiltonianOperator& H, const Vector& x, Vector& y) {
  y.resize(x.size());
  H.apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
          std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
}

struct Estimate {
  double energy;
  double residual;  // absolute ||Hx - Ex||
};

Estimate rayleigh(const HamiltonianOperator& H, const Vector& x, Vector& work) {
  apply(H, x, work);
  const double e = x.dot(work);
  work -= e * x;
  return {e, work.norm()};
}

// Index of the exchange partner (j, i) of every node, or -1.
std::vector<std::int64_t> exchange_partners(const NodeSet& s) {
  std::vector<std::int64_t> partner(static_cast<std::size_t>(s.size()), -1);
  s.for_each([&](int i, int j, std::int64_t k) { partner[static_cast<std::size_t>(k)] = s.index(j, i); });
  return partner;
}

bool exchange_symmetric(const HamiltonianOperator& H, const std::vector<std::int64_t>& partner) {
  if (!H.ions().charges.exchange_symmetric()) return false;
  return std::all_of(partner.begin(), partner.end(), [](std::int64_t p) { return p >= 0; });
}

Vector starting_vector(const HamiltonianOperator& H, std::uint64_t seed) {
  const NodeSet& s = H.support();
  const auto n = static_cast<Eigen::Index>(s.size());

  struct Centre { double i, j; };
  std::vector<Centre> centres;
  const double spread = H.max_potential() - H.min_potential();
  if (spread <= 1e-14 * std::max(1.0, std::abs(H.max_potential()))) {
    double si = 0.0, sj = 0.0;
    s.for_each([&](int i, int j, std::int64_t) { si += i; sj += j; });
    centres.push_back({si / static_cast<double>(n), sj / static_cast<double>(n)});
  } else {
    // the two most separated configurations, x2 >> x1 and x1 >> x2
    int best_a = std::numeric_limits<int>::min(), best_b = std::numeric_limits<int>::min();
    Centre a{}, b{};
    s.for_each([&](int i, int j, std::int64_t) {
      if (j - i > best_a) { best_a = j - i; a = {double(i), double(j)}; }
      if (i - j > best_b) { best_b = i - j; b = {double(i), double(j)}; }
    });
    centres.push_back(a);
    if (best_b > -best_a) centres.push_back(b);
  }
  const double width = std::max(2.0, 0.125 * std::sqrt(static_cast<double>(n) / centres.size()));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  Vector x(n);
  s.for_each([&](int i, int j, std::int64_t k) {
    double g = 0.0;
    for (const Centre& c : centres) {
      const double r2 = (i - c.i) * (i - c.i) + (j - c.j) * (j - c.j);
      g += std::exp(-r2 / (2.0 * width * width));
    }
    x[k] = g + 1e-3 * noise(rng);
  });
  return x;
}

void symmetrize(Vector& x, const std::vector<std::int64_t>& partner) {
  Vector y = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) y[k] = 0.5 * (x[k] + x[partner[static_cast<std::size_t>(k)]]);
  x.swap(y);
}

class ShiftedSolver {
 public:
  explicit ShiftedSolver(const SparseMatrix& A) : A_(A) { ldlt_.analyzePattern(A_); }

  /// Factorizes H - sigma; true when the factorization exists and is positive definite.
  bool factor(double sigma) {
    ldlt_.setShift(-sigma);
    ldlt_.factorize(A_);
    if (ldlt_.info() != Eigen::Success) return false;
    return (ldlt_.vectorD().array() > 0.0).all();
  }

  Vector solve(const Vector& b) const { return ldlt_.solve(b); }

 private:
  const SparseMatrix& A_;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt_;
};

GroundStateResult make_result(const HamiltonianOperator& H, const Vector& x, const Estimate& est,
                              int iterations, std::vector<double> history) {
  std::vector<Complex> amps(static_cast<std::size_t>(x.size()));
  for (Eigen::Index k = 0; k < x.size(); ++k) amps[static_cast<std::size_t>(k)] = x[k];
  return GroundStateResult{
      Wavefunction::normalized(H.grid(), H.support_ptr(), std::move(amps)),
      from_internal(est.energy, QuantityKind::energy, H.units()),
      est.energy,
      est.residual / std::abs(est.energy),
      iterations,
      std::move(history)};
}

}  // namespace

void GroundStateOptions::validate() const {
  if (!(tolerance > 0.0 && tolerance <= 1e-3)) throw ValidationError("must lie in (0, 1e-3]", "tolerance");
  if (max_iterations < 1) throw ValidationError("must be at least 1", "max_iterations");
  if (imaginary_time_steps < 0) throw ValidationError("must be non-negative", "imaginary_time_steps");
  if (!(imaginary_time_step > 0.0)) throw ValidationError("must be positive", "imaginary_time_step");
}

GroundStateResult ground_state(const HamiltonianOperator& H, const GroundStateOptions& options) {
  options.validate();
  const SparseMatrix A = to_eigen(H);
  const auto partner = exchange_partners(H.support());
  const bool symmetric = exchange_symmetric(H, partner);

  Vector x = starting_vector(H, options.seed);
  if (symmetric) symmetrize(x, partner);
  x.normalize();

  Vector work;
  Estimate est = rayleigh(H, x, work);
  std::vector<double> history{est.energy};
  Vector best = x;
  Estimate best_est = est;
  int iterations = 0;

  auto converged = [&] { return est.residual <= options.tolerance * std::abs(est.energy); };
  auto step = [&](const ShiftedSolver& solver) {
    x = solver.solve(x);
    if (symmetric) symmetrize(x, partner);
    x.normalize();
    est = rayleigh(H, x, work);
    history.push_back(est.energy);
    ++iterations;
    if (est.residual < best_est.residual) {
      best = x;
      best_est = est;
    }
  };

  ShiftedSolver solver(A);

  // Imaginary time: (1 + tau (H - V_min)) x' = x, i.e. a shift below the spectrum.
  const double floor = H.min_potential();
  double safe_shift = floor - (est.energy - floor) / options.imaginary_time_step;
  if (!converged() && options.imaginary_time_steps > 0) {
    if (!solver.factor(safe_shift)) {
      throw ConvergenceError("imaginary-time operator is not positive definite", est.residual);
    }
    for (int t = 0; t < options.imaginary_time_steps && !converged() &&
                    iterations < options.max_iterations;
         ++t) {
      step(solver);
    }
  }

  // Shifted inverse iteration with inertia-checked shifts sigma = E - ||r||.
  while (!converged() && iterations < options.max_iterations) {
    double sigma = std::max(safe_shift, est.energy - est.residual);
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      if (solver.factor(sigma)) {
        accepted = true;
        break;
      }
      sigma = safe_shift + 0.5 * (sigma - safe_shift);
    }
    if (!accepted) {
      if (!solver.factor(safe_shift)) {
        throw GroundStateConvergenceError("no positive-definite shift found",
                                          make_result(H, best, best_est, iterations, history));
      }
      sigma = safe_shift;
    }
    safe_shift = sigma;
    for (int s = 0; s < 2 && !converged() && iterations < options.max_iterations; ++s) step(solver);
  }

  if (!converged()) {
    std::ostringstream os;
    os << "ground state not converged after " << iterations << " iterations (relative residual "
       << best_est.residual / std::abs(best_est.energy) << ")";
    throw GroundStateConvergenceError(os.str(), make_result(H, best, best_est, iterations, history));
  }
  return make_result(H, x, est, iterations, std::move(history));
}

void LocalizationOptions::validate() const {
  if (!(window_fraction > 0.0)) throw ValidationError("must be positive", "window_fraction");
  if (!(margin_factor >= 1.0)) throw ValidationError("must be at least 1", "margin_factor");
  if (max_rounds < 1) throw ValidationError("must be at least 1", "max_rounds");
}

namespace {

// Largest |i - j| over the mask; the Coulomb energy is lowest there.
int max_separation(const NodeSet& s) {
  int best = 0;
  for (const Run& r : s.runs()) {
    best = std::max({best, std::abs(r.row - r.begin), std::abs(r.row - (r.end - 1))});
  }
  return best;
}

double potential_at_separation(int separation, const Grid2D& grid, const IonPair& ions) {
  const double dx = separation * grid.spacing();
  return ions.coupling() / std::sqrt(dx * dx + ions.epsilon * ions.epsilon);
}

}  // namespace

double minimum_potential(const Grid2D& grid, const ConstraintMask& mask, const IonPair& ions) {
  if (!mask.nodes || mask.nodes->empty()) throw EmptyRegionError("empty mask");
  return potential_at_separation(max_separation(*mask.nodes), grid, ions);
}

std::shared_ptr<const NodeSet> energy_window(const Grid2D& grid, const ConstraintMask& mask,
                                             const IonPair& ions, const UnitSystem& /*units*/,
                                             double window_energy) {
  if (!mask.nodes || mask.nodes->empty()) throw EmptyRegionError("empty mask");
  if (!(window_energy > 0.0)) throw ValidationError("must be positive", "window_energy");
  const int d_max = max_separation(*mask.nodes);
  const double cutoff = potential_at_separation(d_max, grid, ions) + window_energy;

  // smallest separation whose potential falls below the cutoff (V decreases with separation)
  int lo = 0, hi = d_max;
  while (lo < hi) {
    const int m = lo + (hi - lo) / 2;
    if (potential_at_separation(m, grid, ions) < cutoff) hi = m; else lo = m + 1;
  }
  const int d_min = lo;

  NodeSet::Builder b(grid.points_per_axis());
  for (const Run& r : mask.nodes->runs()) {
    const int left_end = std::min(r.end, r.row - d_min + 1);
    if (r.begin < left_end) b.add(r.row, r.begin, left_end);
    const int right_begin = std::max(r.begin, r.row + d_min);
    if (right_begin < r.end) b.add(r.row, right_begin, r.end);
  }
  return std::make_shared<const NodeSet>(std::move(b).finish());
}

ConfinedGroundState confined_ground_state(const Grid2D& grid, const ConstraintMask& mask,
                                          const IonPair& ions, const UnitSystem& units,
                                          const GroundStateOptions& options,
                                          const LocalizationOptions& localization) {
  localization.validate();
  if (!localization.enabled || ions.coupling() == 0.0) {
    HamiltonianOperator H = assemble(grid, mask, ions, units);
    return ConfinedGroundState{ground_state(H, options), mask, mask.nodes, 0.0, 1, false};
  }

  const double v_min = minimum_potential(grid, mask, ions);
  double window = localization.window_fraction * v_min;
  for (int round = 1;; ++round) {
    auto support = energy_window(grid, mask, ions, units, window);
    HamiltonianOperator H = assemble_on(grid, support, ions, units);
    GroundStateResult result = ground_state(H, options);
    const double required = localization.margin_factor * (result.energy - v_min);
    if (window >= required || round >= localization.max_rounds) {
      if (window < required) {
        throw InvariantViolation("energy window still below the required margin after " +
                                 std::to_string(round) + " rounds");
      }
      return ConfinedGroundState{std::move(result), mask, std::move(support), window, round, true};
    }
    window = 1.5 * required;
  }
}

}  // namespace zeno
