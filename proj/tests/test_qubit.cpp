#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "mmoc/control.hpp"
#include "mmoc/ensemble.hpp"
#include "mmoc/errors.hpp"
#include "mmoc/params.hpp"
#include "mmoc/qubit.hpp"
#include "mmoc/time_grid.hpp"

using namespace mmoc;

namespace {

const std::complex<double> kI(0.0, 1.0);

QubitState ground() {
  QubitState psi;
  psi << std::complex<double>(0.0, 0.0), std::complex<double>(1.0, 0.0);
  return psi;
}

Eigen::VectorXd embed(const QubitState& psi) {
  Eigen::VectorXd x(4);
  x << psi[0].real(), psi[0].imag(), psi[1].real(), psi[1].imag();
  return x;
}

// Long-double re-statement of the open-loop pulse formula, kept independent of the
// library implementation so drift in either is caught.
long double pulse_oracle(long double e1, long double e2, long double a0, long double a1,
                         long double energy, long double t) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double envelope = 2.0L * e1 * (1.0L - std::cos(2.0L * pi * e1 * e2 * t));
  const long double phase = 2.0L * energy * t +
                            (a0 - a1) * std::sin(pi * e1 * e2 * t) / (pi * e1 * e2) +
                            (a0 + a1) * t;
  return envelope * std::cos(phase);
}

}  // namespace

TEST_CASE("exact propagator matches the closed forms of its commuting limits") {
  const double dt = 0.37;

  SUBCASE("drive off: phases rotate, populations freeze") {
    const double d = 1.3;
    QubitState psi;
    psi << std::complex<double>(0.6, 0.0), std::complex<double>(0.0, 0.8);
    const QubitState out = pauli_step(psi, d, 0.0, dt);
    const std::complex<double> phase = std::exp(-kI * d * dt);
    CHECK(std::abs(out[0] - phase * psi[0]) <= 1e-14);
    CHECK(std::abs(out[1] - std::conj(phase) * psi[1]) <= 1e-14);

    const QubitState g = pauli_step(ground(), d, 0.0, dt);
    CHECK(std::abs(g[0]) <= 1e-15);
    CHECK(std::abs(g[1] - std::exp(kI * d * dt)) <= 1e-14);
  }

  SUBCASE("splitting off: pure sigma_x rotation from the ground state") {
    const double u = 0.9;
    const QubitState out = pauli_step(ground(), 0.0, u, dt);
    CHECK(std::abs(out[0] - (-kI * std::sin(u * dt))) <= 1e-14);
    CHECK(std::abs(out[1] - std::complex<double>(std::cos(u * dt), 0.0)) <= 1e-14);
  }

  SUBCASE("resonant quarter rotation transfers the full population") {
    // u * T = pi/2 with d = 0 maps (0,1) to (-i, 0).
    const double u = M_PI / 2.0;
    const QubitState out = pauli_step(ground(), 0.0, u, 1.0);
    CHECK(std::abs(target_overlap(out)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity_cost(out) <= 1e-12);
  }

  SUBCASE("zero generator is the identity") {
    QubitState psi;
    psi << std::complex<double>(0.36, -0.48), std::complex<double>(0.6, 0.48);
    psi /= psi.norm();
    const QubitState out = pauli_step(psi, 0.0, 0.0, dt);
    CHECK((out - psi).norm() <= 1e-15);
  }
}

TEST_CASE("propagator steps compose: splitting a step changes nothing") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double d = unif(rng);
    const double u = unif(rng);
    const double h = 0.05 + 0.1 * std::abs(unif(rng));
    QubitState psi;
    psi << std::complex<double>(unif(rng), unif(rng)), std::complex<double>(unif(rng), unif(rng));
    psi /= psi.norm();

    const QubitState whole = pauli_step(psi, d, u, 2.0 * h);
    const QubitState split = pauli_step(pauli_step(psi, d, u, h), d, u, h);
    CHECK((whole - split).norm() <= 1e-12);
    CHECK(std::abs(whole.norm() - 1.0) <= 1e-14);
  }
}

TEST_CASE("propagator agrees with dense RK4 on the real embedding") {
  QubitEmbeddingProblem embedding(0.0);  // detuning enters via theta
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::uniform_real_distribution<double> step(1e-3, 0.25);

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double d = unif(rng);
    const double u = unif(rng);
    const double dt = step(rng);

    QubitState psi;
    psi << std::complex<double>(unif(rng), unif(rng)), std::complex<double>(unif(rng), unif(rng));
    psi /= psi.norm();

    const QubitState exact = pauli_step(psi, d, u, dt);

    ParamPoint theta(1);
    theta << d;
    Eigen::RowVectorXd uu(1);
    uu << u;
    Eigen::VectorXd x = embed(psi);
    const int sub = 64;
    for (int s = 0; s < sub; ++s) x = rk4_step(embedding, theta, x, uu, dt / sub);

    const double err = (x - embed(exact)).norm();
    worst = std::max(worst, err);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("forward paths stay unitary over long horizons") {
  TimeGrid grid = TimeGrid::from_cells(50.0, 1600);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd vals(grid.cells(), 1);
  for (int m = 0; m < grid.cells(); ++m) vals(m, 0) = unif(rng);
  const Control u(grid, vals);

  QubitEnsembleSpec spec;
  const auto path = simulate_qubit(spec, 0.37, u);
  REQUIRE(static_cast<int>(path.size()) == grid.cells() + 1);
  CHECK(max_norm_deviation(path) <= 1e-12);
}

TEST_CASE("backward states carry the conserved overlap norm") {
  TimeGrid grid = TimeGrid::from_cells(4.0, 128);
  Eigen::MatrixXd vals(grid.cells(), 1);
  for (int m = 0; m < grid.cells(); ++m) vals(m, 0) = 0.4 * std::cos(0.2 * grid.cell_midpoint(m));
  const Control u(grid, vals);

  QubitEnsembleSpec spec;
  const double alpha = -0.25;
  const auto psi = simulate_qubit(spec, alpha, u);
  const auto chi = simulate_qubit_adjoint(spec, alpha, u, psi);
  REQUIRE(chi.size() == psi.size());

  const std::complex<double> o = target_overlap(psi.back());
  // Terminal condition: -2 <target|psi(T)> in the target component only.
  CHECK(std::abs(chi.back()[0] - (-2.0 * o)) <= 1e-14);
  CHECK(std::abs(chi.back()[1]) <= 1e-14);
  for (const auto& c : chi) {
    CHECK(std::abs(c.norm() - 2.0 * std::abs(o)) <= 1e-12);
  }
}

TEST_CASE("coupling cells are the exact discrete gradient of the terminal cost") {
  TimeGrid grid = TimeGrid::from_cells(2.0, 64);
  Eigen::MatrixXd vals(grid.cells(), 1);
  for (int m = 0; m < grid.cells(); ++m) vals(m, 0) = 0.5 * std::sin(grid.cell_midpoint(m));
  const Control u(grid, vals);

  QubitEnsembleSpec spec;
  const double alpha = 0.2;
  const auto psi = simulate_qubit(spec, alpha, u);
  const auto chi = simulate_qubit_adjoint(spec, alpha, u, psi);
  const Eigen::VectorXd cells = coupling_cells(spec, alpha, u, psi, chi);
  REQUIRE(cells.size() == grid.cells());

  const double eps = 1e-6;
  for (int m = 0; m < grid.cells(); m += 7) {
    auto bumped_cost = [&](double delta) {
      Eigen::MatrixXd v = vals;
      v(m, 0) += delta;
      const Control ub(grid, v);
      return fidelity_cost(simulate_qubit(spec, alpha, ub).back());
    };
    const double fd = (bumped_cost(eps) - bumped_cost(-eps)) / (2.0 * eps * grid.dt());
    CHECK(cells[m] == doctest::Approx(fd).epsilon(1e-5));
  }

  SUBCASE("backend rows carry the adjoint sign convention") {
    ParamSet alphas = ParamSet::from_scalars({alpha});
    QubitBackend backend(spec, alphas, 1);
    const Eigen::MatrixXd row = backend.cell_coupling(u, 0);
    REQUIRE(row.rows() == grid.cells());
    REQUIRE(row.cols() == 1);
    CHECK((row.col(0) + cells).lpNorm<Eigen::Infinity>() <= 1e-14);

    const Eigen::VectorXd costs = backend.terminal_costs(u);
    REQUIRE(costs.size() == 1);
    CHECK(costs[0] == doctest::Approx(fidelity_cost(psi.back())).epsilon(1e-14));
  }
}

TEST_CASE("native backend matches the generic four-dimensional embedding") {
  TimeGrid grid = TimeGrid::from_cells(4.0, 128);
  Eigen::MatrixXd vals(grid.cells(), 1);
  for (int m = 0; m < grid.cells(); ++m) vals(m, 0) = 0.3 * std::cos(0.7 * grid.cell_midpoint(m));
  const Control u(grid, vals);

  QubitEnsembleSpec spec;
  ParamSet alphas = ParamSet::from_scalars({-0.5, 0.0, 0.5});
  QubitBackend native(spec, alphas, 1);

  QubitEmbeddingProblem embedding(spec.energy);
  QubitEmbeddingCost cost;
  Rk4Backend generic(embedding, alphas, cost, 8, 1);

  const Eigen::VectorXd exact_costs = native.terminal_costs(u);
  const Eigen::VectorXd rk4_costs = generic.terminal_costs(u);
  REQUIRE(exact_costs.size() == rk4_costs.size());
  for (int j = 0; j < exact_costs.size(); ++j) {
    CHECK(exact_costs[j] == doctest::Approx(rk4_costs[j]).epsilon(1e-6).scale(1.0));
  }

  for (int j = 0; j < alphas.size(); ++j) {
    const Eigen::MatrixXd be = native.cell_coupling(u, j);
    const Eigen::MatrixXd bg = generic.cell_coupling(u, j);
    REQUIRE(be.rows() == bg.rows());
    const double scale = std::max(1.0, be.lpNorm<Eigen::Infinity>());
    CHECK((be - bg).lpNorm<Eigen::Infinity>() / scale <= 1e-4);
  }
}

TEST_CASE("open-loop pulse: zero launch, peak envelope, oracle agreement") {
  AnalyticPulseParams p;
  p.eps1 = 0.5;
  p.eps2 = 0.1;
  p.alpha0 = -0.5;
  p.alpha1 = 0.5;
  const double energy = 1.0;
  const double T = 1.0 / (p.eps1 * p.eps2);  // 20

  CHECK(std::abs(analytic_pulse_value(p, energy, 0.0)) <= 1e-15);

  // At t = T/2 the envelope reaches its maximum 4 eps1.
  const double mid = analytic_pulse_value(p, energy, T / 2.0);
  const double phase = 2.0 * energy * T / 2.0 +
                       (p.alpha0 - p.alpha1) * std::sin(M_PI * p.eps1 * p.eps2 * T / 2.0) /
                           (M_PI * p.eps1 * p.eps2) +
                       (p.alpha0 + p.alpha1) * T / 2.0;
  CHECK(mid == doctest::Approx(4.0 * p.eps1 * std::cos(phase)).epsilon(1e-12));

  for (int k = 0; k <= 200; ++k) {
    const double t = T * k / 200.0;
    const double expect = static_cast<double>(
        pulse_oracle(p.eps1, p.eps2, p.alpha0, p.alpha1, energy, t));
    CHECK(analytic_pulse_value(p, energy, t) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
  }

  SUBCASE("sampling onto a matching grid hits the midpoints") {
    TimeGrid grid = TimeGrid::from_cells(T, 640);
    const Control u = analytic_control(p, energy, grid);
    for (int m = 0; m < grid.cells(); m += 41) {
      CHECK(u.values()(m, 0) == analytic_pulse_value(p, energy, grid.cell_midpoint(m)));
    }
  }

  SUBCASE("horizon that contradicts the pulse period is rejected") {
    TimeGrid grid = TimeGrid::from_cells(10.0, 320);
    CHECK_THROWS_AS(analytic_control(p, energy, grid), ConfigError);
  }
}

TEST_CASE("terminal diagnostics: shape, content, and schedule independence") {
  TimeGrid grid = TimeGrid::from_cells(2.0, 64);
  const Control zero = Control::zero(grid, 1);
  QubitEnsembleSpec spec;
  const std::vector<double> alphas = {-0.5, -0.1, 0.0, 0.3, 0.5};

  const Eigen::MatrixXd prof = overlap_profile(spec, alphas, zero, 1);
  REQUIRE(prof.rows() == static_cast<int>(alphas.size()));
  REQUIRE(prof.cols() == 4);
  for (int k = 0; k < prof.rows(); ++k) {
    CHECK(prof(k, 0) == alphas[static_cast<size_t>(k)]);
    // No drive: the ground state never acquires target overlap.
    CHECK(prof(k, 1) <= 1e-14);
    CHECK(prof(k, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(prof(k, 3) == doctest::Approx(1.0).epsilon(1e-14));
  }

  Eigen::MatrixXd vals(grid.cells(), 1);
  for (int m = 0; m < grid.cells(); ++m) vals(m, 0) = 0.8 * std::sin(1.3 * grid.cell_midpoint(m));
  const Control u(grid, vals);
  const Eigen::MatrixXd p1 = overlap_profile(spec, alphas, u, 1);
  const Eigen::MatrixXd p3 = overlap_profile(spec, alphas, u, 3);
  CHECK((p1 - p3).lpNorm<Eigen::Infinity>() == 0.0);  // bitwise schedule independence

  for (int k = 0; k < p1.rows(); ++k) {
    CHECK(p1(k, 3) == doctest::Approx(1.0 - p1(k, 1) * p1(k, 1)).epsilon(1e-13));
    CHECK(p1(k, 2) == doctest::Approx(1.0 - p1(k, 1)).epsilon(1e-13));
  }
}

TEST_CASE("fidelity cost rejects states that left the sphere") {
  QubitState psi;
  psi << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 0.0);
  CHECK(fidelity_cost(psi) <= 1e-15);

  psi << std::complex<double>(0.0, 0.0), std::complex<double>(1.0, 0.0);
  CHECK(fidelity_cost(psi) == doctest::Approx(1.0));

  psi << std::complex<double>(0.7, 0.0), std::complex<double>(0.0, 0.0);
  CHECK_THROWS_AS(fidelity_cost(psi), ContractViolationError);
}
