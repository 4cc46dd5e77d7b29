#include "zeno/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

constexpr Complex I{0.0, 1.0};

// Unconjugated bilinear form used by COCG.
Complex dotu(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(const std::vector<Complex>& a) { return std::sqrt(squared_norm(a)); }

Wavefunction on_support(const Wavefunction& psi, const HamiltonianOperator& H) {
  if (psi.grid() != H.grid()) throw ShapeError("wavefunction grid does not match the operator");
  if (psi.support_ptr() == H.support_ptr() || psi.support() == H.support()) return psi;
  return psi.embedded(H.support_ptr());
}

}  // namespace

EvolutionParams EvolutionParams::from_frequency(double f_qze, int n_sub, double solver_tol) {
  if (!(f_qze > 0.0)) throw ValidationError("must be positive", "f_qze");
  if (n_sub < 1) throw ValidationError("must be at least 1", "n_sub");
  EvolutionParams p{1.0 / (f_qze * n_sub), n_sub, solver_tol};
  p.validate();
  return p;
}

void EvolutionParams::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("must be positive", "dt");
  if (n_sub < 1) throw ValidationError("must be at least 1", "n_sub");
  if (!(solver_tol > 0.0 && solver_tol < 1e-3)) throw ValidationError("must lie in (0, 1e-3)", "solver_tol");
  if (max_iterations < 1) throw ValidationError("must be at least 1", "max_iterations");
}

CrankNicolson::CrankNicolson(const HamiltonianOperator& H, double dt, double solver_tol,
                             int max_iterations)
    : H_(H), dt_(dt), tol_(solver_tol), max_iterations_(max_iterations) {
  if (!(dt > 0.0)) throw ValidationError("must be positive", "dt");
  half_ = 0.5 * to_internal(dt, QuantityKind::time, H.units());
  const auto n = static_cast<std::size_t>(H.size());
  inv_diag_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    inv_diag_[k] = 1.0 / (1.0 + I * half_ * H.diagonal(static_cast<std::int64_t>(k)));
  }
  rhs_.resize(n);
  r_.resize(n);
  z_.resize(n);
  p_.resize(n);
  q_.resize(n);
  hv_.resize(n);
}

SolveStats CrankNicolson::step(std::vector<Complex>& x) {
  const std::size_t n = inv_diag_.size();
  if (x.size() != n) throw ShapeError("state length does not match the propagator");

  H_.apply(x, hv_);
  for (std::size_t k = 0; k < n; ++k) rhs_[k] = x[k] - I * half_ * hv_[k];
  const double bnorm = norm2(rhs_);
  if (bnorm == 0.0) return {};

  // forward Euler start, x0 = psi - i dt H psi
  for (std::size_t k = 0; k < n; ++k) x[k] = rhs_[k] - I * half_ * hv_[k];
  H_.apply(x, hv_);
  for (std::size_t k = 0; k < n; ++k) r_[k] = rhs_[k] - (x[k] + I * half_ * hv_[k]);

  SolveStats stats;
  double rnorm = norm2(r_);
  stats.relative_residual = rnorm / bnorm;
  if (rnorm <= tol_ * bnorm) return stats;

  for (std::size_t k = 0; k < n; ++k) z_[k] = inv_diag_[k] * r_[k];
  p_ = z_;
  Complex rho = dotu(r_, z_);

  for (int it = 1; it <= max_iterations_; ++it) {
    H_.apply(p_, hv_);
    for (std::size_t k = 0; k < n; ++k) q_[k] = p_[k] + I * half_ * hv_[k];
    const Complex alpha = rho / dotu(p_, q_);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p_[k];
      r_[k] -= alpha * q_[k];
    }
    rnorm = norm2(r_);
    stats.iterations = it;
    stats.relative_residual = rnorm / bnorm;
    if (rnorm <= tol_ * bnorm) return stats;

    for (std::size_t k = 0; k < n; ++k) z_[k] = inv_diag_[k] * r_[k];
    const Complex rho_next = dotu(r_, z_);
    const Complex beta = rho_next / rho;
    rho = rho_next;
    for (std::size_t k = 0; k < n; ++k) p_[k] = z_[k] + beta * p_[k];
  }
  std::ostringstream os;
  os << "Crank-Nicolson solve did not reach " << tol_ << " in " << max_iterations_ << " iterations";
  throw ConvergenceError(os.str(), stats.relative_residual);
}

Wavefunction cn_step(const HamiltonianOperator& H_free, const Wavefunction& psi, double dt,
                     double solver_tol, int max_iterations) {
  Wavefunction start = on_support(psi, H_free);
  std::vector<Complex> x(start.amplitudes().begin(), start.amplitudes().end());
  CrankNicolson cn(H_free, dt, solver_tol, max_iterations);
  cn.step(x);
  return Wavefunction::normalized(H_free.grid(), H_free.support_ptr(), std::move(x));
}

Wavefunction evolve(const HamiltonianOperator& H_free, const Wavefunction& psi, double t_total,
                    const EvolutionParams& params, EvolutionTrace* trace) {
  params.validate();
  if (!(t_total >= 0.0) || !std::isfinite(t_total)) throw ValidationError("must be non-negative", "t_total");
  Wavefunction start = on_support(psi, H_free);
  if (t_total == 0.0) return start;

  const auto steps = std::max<long long>(1, std::llround(t_total / params.dt));
  std::vector<Complex> x(start.amplitudes().begin(), start.amplitudes().end());
  CrankNicolson cn(H_free, t_total / static_cast<double>(steps), params.solver_tol,
                   params.max_iterations);
  std::vector<Complex> hx;
  if (trace) hx.resize(x.size());
  for (long long s = 0; s < steps; ++s) {
    const SolveStats st = cn.step(x);
    if (trace) {
      trace->max_solver_iterations = std::max(trace->max_solver_iterations, st.iterations);
      const double nn = squared_norm(x);
      H_free.apply(x, hx);
      Complex e{};
      for (std::size_t k = 0; k < x.size(); ++k) e += std::conj(x[k]) * hx[k];
      trace->norm.push_back(std::sqrt(nn));
      trace->energy.push_back(from_internal(e.real() / nn, QuantityKind::energy, H_free.units()));
    }
  }
  // drift before this renormalization is what the trace records
  return Wavefunction::normalized(H_free.grid(), H_free.support_ptr(), std::move(x));
}

MeasurementOutcome project(const Wavefunction& psi, const ConstraintMask& mask) {
  if (!mask.nodes) throw ShapeError("mask has no nodes");
  if (mask.nodes->points_per_axis() != psi.grid().points_per_axis()) {
    throw ShapeError("mask lattice does not match the wavefunction grid");
  }
  const auto region = std::make_shared<const NodeSet>(psi.support().intersect(*mask.nodes));
  std::vector<Complex> inside(static_cast<std::size_t>(region->size()));
  double p_in = 0.0;
  for (const Run& r : region->runs()) {
    const std::int64_t src = psi.support().index(r.row, r.begin);
    for (int t = 0; t < r.length(); ++t) {
      const Complex z = psi.amplitudes()[static_cast<std::size_t>(src + t)];
      inside[static_cast<std::size_t>(r.offset + t)] = z;
      p_in += std::norm(z);
    }
  }
  double p_out = 0.0;
  psi.support().for_each([&](int i, int j, std::int64_t k) {
    if (!mask.nodes->contains(i, j)) p_out += std::norm(psi.amplitudes()[static_cast<std::size_t>(k)]);
  });

  MeasurementOutcome out;
  out.success_probability = p_in / (p_in + p_out);
  out.leaked_probability = p_out / (p_in + p_out);
  if (p_in == 0.0) {
    out.zero_probability = true;
    return out;
  }
  out.post_state = Wavefunction::normalized(psi.grid(), region, std::move(inside));
  return out;
}

std::shared_ptr<const NodeSet> evolution_region(const Wavefunction& psi, double t_total,
                                                const IonPair& ions, const UnitSystem& units,
                                                int full_square_limit) {
  const int n = psi.grid().points_per_axis();
  if (n <= full_square_limit) return std::make_shared<const NodeSet>(NodeSet::full(n));
  const double m = std::min(ions.charges.m1, ions.charges.m2);
  const double spread = std::sqrt(units.constants().hbar * t_total / m);
  const int radius = static_cast<int>(std::ceil(12.0 * spread / psi.grid().spacing())) + 8;
  return std::make_shared<const NodeSet>(psi.support().dilated(radius));
}

double leakage(const Wavefunction& psi_d, const HamiltonianOperator& H_free, double t_qze,
               const ConstraintMask& mask_d, const EvolutionParams& params) {
  const Wavefunction evolved = evolve(H_free, psi_d, t_qze, params);
  const MeasurementOutcome m = project(evolved, mask_d);
  return m.leaked_probability;
}

double leakage(const Wavefunction& psi_d, const IonPair& ions, const UnitSystem& units,
               double t_qze, const ConstraintMask& mask_d, const EvolutionParams& params) {
  const auto region = evolution_region(psi_d, t_qze, ions, units);
  const HamiltonianOperator H = assemble_on(psi_d.grid(), region, ions, units);
  return leakage(psi_d, H, t_qze, mask_d, params);
}

}  // namespace zeno
