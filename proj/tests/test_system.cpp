#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "oscint/errors.hpp"
#include "oscint/integrator.hpp"
#include "oscint/sampling.hpp"
#include "oscint/system.hpp"
#include "support.hpp"

using namespace oscint;
using oscint::testing::random_vector;

namespace {

// Independent dense evaluation of the modified energy:
// ½ qᴴΩ²q + ½|q̇|² + ½ Re((CΦq)ᴴ AΦq) − ⅛h² |Ψ₁AΦq|²
double dense_modified_energy(const OscillatorSystem& sys, const FilterPair& fp, double h,
                             const State& s) {
  const Eigen::Index d = static_cast<Eigen::Index>(sys.dim());
  Eigen::MatrixXcd A(d, d);
  Eigen::VectorXcd q(d), p(d);
  Eigen::VectorXd w2(d), c(d), phi(d), psi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double w = sys.omegas()[i];
    w2(i) = w * w;
    c(i) = std::cos(h * w);
    phi(i) = fp.phi(h * w);
    psi(i) = fp.psi1(h * w);
    q(i) = s.q[i];
    p(i) = s.qdot[i];
    for (Eigen::Index j = 0; j < d; ++j) A(i, j) = sys.coupling()(i, j);
  }
  const Eigen::MatrixXcd Phi = phi.cast<Complex>().asDiagonal();
  const Eigen::MatrixXcd C = c.cast<Complex>().asDiagonal();
  const Eigen::MatrixXcd Psi = psi.cast<Complex>().asDiagonal();
  const Eigen::MatrixXcd W2 = w2.cast<Complex>().asDiagonal();
  const Complex kinetic = (q.adjoint() * W2 * q)(0) + p.squaredNorm();
  const Complex mixed = ((C * Phi * q).adjoint() * A * Phi * q)(0);
  const double corr = (Psi * A * Phi * q).squaredNorm();
  return 0.5 * kinetic.real() + 0.5 * mixed.real() - 0.125 * h * h * corr;
}

State random_state_of(std::mt19937_64& rng, std::size_t d) {
  return {random_vector(rng, d), random_vector(rng, d), 0.0};
}

OscillatorSystem hermitian_system(std::mt19937_64& rng, RVector w, double a_norm) {
  CMatrix a = random_hermitian(rng, w.size());
  a = (a_norm / hermitian_spectral_norm(a)) * a;
  return OscillatorSystem(std::move(w), std::move(a));
}

}  // namespace

TEST_SUITE("system") {

TEST_CASE("construction validates and symmetrizes") {
  CHECK_THROWS_AS(OscillatorSystem(RVector{1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(OscillatorSystem(RVector{1.0, NAN}), std::invalid_argument);
  CHECK_THROWS_AS(OscillatorSystem(RVector{1.0, 2.0}, CMatrix(3)), DimensionError);

  CMatrix a(2);
  a(0, 1) = Complex(1.0, 2.0);
  a(1, 0) = Complex(3.0, 0.0);
  a(0, 0) = Complex(1.0, 0.5);
  const OscillatorSystem sys(RVector{1.0, 2.0}, a);
  CHECK(sys.input_asymmetry() > 1.0);
  CHECK(sys.coupling().hermitian_defect() == 0.0);
  CHECK(sys.coupling()(0, 1) == Complex(2.0, 1.0));
  CHECK(sys.coupling()(0, 0) == Complex(1.0, 0.0));
}

TEST_CASE("smallest nonzero frequency") {
  CHECK(OscillatorSystem(RVector{0.0, 3.0, 7.0}).smallest_nonzero_frequency() == 3.0);
  CHECK(std::isinf(OscillatorSystem(RVector{0.0, 0.0}).smallest_nonzero_frequency()));
  CHECK(OscillatorSystem(RVector{0.0, 1.0}).has_zero_frequency());
}

TEST_CASE("energy examples") {
  const OscillatorSystem sys(RVector{2.0});
  CHECK(energy(sys, State{{0.0}, {0.0}}) == 0.0);
  CHECK(energy(sys, State{{1.0}, {0.0}}) == 2.0);
  CHECK_THROWS_AS(energy(sys, State{{1.0, 2.0}, {0.0, 0.0}}), DimensionError);
}

TEST_CASE("energy matches a componentwise re-derivation") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    std::uniform_real_distribution<double> u(0.0, 10.0);
    RVector w(5);
    for (auto& x : w) x = u(rng);
    const auto sys = hermitian_system(rng, w, 2.0);
    const State s = random_state_of(rng, 5);
    double ref = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      ref += 0.5 * w[j] * w[j] * (s.q[j].real() * s.q[j].real() + s.q[j].imag() * s.q[j].imag());
      ref += 0.5 * (s.qdot[j].real() * s.qdot[j].real() + s.qdot[j].imag() * s.qdot[j].imag());
      for (std::size_t l = 0; l < 5; ++l) {
        const Complex a = sys.coupling()(j, l);
        // Re(conj(q_j) a q_l) in real arithmetic
        const double xr = s.q[j].real(), xi = s.q[j].imag();
        const double yr = s.q[l].real(), yi = s.q[l].imag();
        ref += 0.5 * ((xr * a.real() + xi * a.imag()) * yr - (xr * a.imag() - xi * a.real()) * yi);
      }
    }
    CHECK(energy(sys, s) == doctest::Approx(ref).epsilon(1e-13));
    // the discarded imaginary part is roundoff only
    const Complex form = dot(s.q, sys.coupling().apply(s.q));
    CHECK(std::abs(form.imag()) <= 1e-12 * std::abs(energy(sys, s)) + 1e-12);
  }
}

TEST_CASE("modified energy reduces to the quadratic part for A = 0") {
  const OscillatorSystem sys(RVector{0.0, 1.0, 10.0});
  const State s{{1.0, Complex(0, 2), 3.0}, {0.5, 0.5, -1.0}};
  const double quad = 0.5 * (0 + 4.0 + 900.0) + 0.5 * (0.25 + 0.25 + 1.0);
  for (const auto& fp : catalog())
    for (double h : {0.01, 0.3, 1.0, 2.7}) CHECK(modified_energy(sys, fp, h, s) == doctest::Approx(quad));
}

TEST_CASE("modified energy at h -> 0 approaches H") {
  std::mt19937_64 rng(2);
  const auto sys = hermitian_system(rng, RVector{0.0, 1.0, 10.0, 100.0}, 1.5);
  const State s = random_state_of(rng, 4);
  for (const auto& fp : catalog()) {
    const double diff = std::abs(modified_energy(sys, fp, 1e-8, s) - energy(sys, s));
    CHECK(diff <= 1e-7 * norm_squared(s.q) * 1.5);
  }
}

TEST_CASE("modified energy matches a dense evaluation") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const auto sys = hermitian_system(rng, RVector{0.0, 1.0, 10.0, 100.0}, 3.0);
    const State s = random_state_of(rng, 4);
    for (const auto& fp : catalog()) {
      CAPTURE(fp.name);
      const double ref = dense_modified_energy(sys, fp, 0.3, s);
      CHECK(modified_energy(sys, fp, 0.3, s) == doctest::Approx(ref).epsilon(1e-13));
    }
  }
}

TEST_CASE("general modified energy") {
  std::mt19937_64 rng(4);
  const auto sys = hermitian_system(rng, RVector{0.5, 2.0, 7.0}, 1.0);
  const State s = random_state_of(rng, 3);
  const auto& fp = find_filter("hairer-lubich");
  const double quad = 0.5 * norm_squared(sys.omega_times(s.q)) + 0.5 * norm_squared(s.qdot);
  CHECK(modified_energy_general(sys, zero_force(), fp, 0.2, s) == doctest::Approx(quad).epsilon(1e-15));
  CHECK(modified_energy_general(sys, linear_force(sys), fp, 0.2, s) ==
        doctest::Approx(modified_energy(sys, fp, 0.2, s)).epsilon(1e-15));

  // cubic force: re-evaluate the formula term by term
  const double h = 0.2;
  double ref = quad;
  for (std::size_t j = 0; j < 3; ++j) {
    const double xi = h * sys.omegas()[j];
    const Complex pq = fp.phi(xi) * s.q[j];
    const Complex gj = -std::norm(pq) * pq;
    ref -= 0.5 * (std::conj(std::cos(xi) * pq) * gj).real();
    ref -= 0.125 * h * h * std::norm(fp.psi1(xi) * gj);
  }
  CHECK(modified_energy_general(OscillatorSystem(sys.omegas()), cubic_force(), fp, h, s) ==
        doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("potentials are consistent with their forces") {
  std::mt19937_64 rng(5);
  const auto sys = hermitian_system(rng, RVector{1.0, 2.0, 3.0}, 2.0);
  for (const auto& g : {linear_force(sys), cubic_force()}) {
    CAPTURE(g.label);
    const CVector q = random_vector(rng, 3);
    const CVector v = random_vector(rng, 3);
    const double slope = -dot(v, g(q)).real();
    double defect[2];
    int k = 0;
    for (double eps : {1e-4, 1e-5}) {
      CVector qp(q), qm(q);
      for (std::size_t j = 0; j < 3; ++j) {
        qp[j] += eps * v[j];
        qm[j] -= eps * v[j];
      }
      defect[k++] = std::abs((g.potential(qp) - g.potential(qm)) / (2 * eps) - slope);
    }
    if (g.label == "cubic") {
      CHECK(defect[0] < 1e-6);
      CHECK(defect[0] / defect[1] > 30.0);  // O(ε²)
    } else {
      CHECK(defect[0] < 1e-9);  // quadratic U: central differences are exact
      CHECK(defect[1] < 1e-9);
    }
  }
}

TEST_CASE("exchange identity") {
  std::mt19937_64 rng(6);
  const auto sys = hermitian_system(rng, RVector{0.0, 1.0, 5.0, 30.0}, 2.0);
  for (const FilterPair* fp : testing::compliant_pairs()) {
    CAPTURE(fp->name);
    for (double h : {0.1, 0.5, std::numbers::pi / 5.0}) {
      const State s = random_state_of(rng, 4);
      const StepWorkspace ws(h, sys.omegas(), *fp);

      const auto free = OscillatorSystem(sys.omegas());
      const auto z = exchange_defect(free, zero_force(), *fp, h, s, step_splitting(free, zero_force(), ws, s));
      CHECK(z.defect <= 1e-13 * z.scale);

      const auto g = linear_force(sys);
      const State next = step_splitting(sys, g, ws, s);
      const auto x = exchange_defect(sys, g, *fp, h, s, next);
      CHECK(x.defect <= 1e-12 * x.scale);
      // Hermitian A: (Φq_n)*AΦq_{n+1} and (Φq_{n+1})*AΦq_n are conjugates
      CHECK(std::abs(x.forward_term - std::conj(x.backward_term)) <=
            1e-13 * std::max(1.0, std::abs(x.forward_term)));

      const OscillatorSystem nl(RVector{1.0, 2.0, 4.0});
      const State s3{random_vector(rng, 3), random_vector(rng, 3), 0.0};
      const StepWorkspace ws3(h, nl.omegas(), *fp);
      const auto c = exchange_defect(nl, cubic_force(), *fp, h, s3, step_splitting(nl, cubic_force(), ws3, s3));
      CHECK(c.defect <= 1e-12 * c.scale);
    }
  }
}

TEST_CASE("bound constants") {
  const auto& fp = find_filter("deuflhard");
  const auto zero = bound_constants(OscillatorSystem(RVector{1.0, 2.0}), fp);
  CHECK(zero.c_breve == 0.0);
  CHECK(zero.c_hat == 0.0);
  CHECK(zero.c_tilde == 0.0);

  const auto bc = bound_constants(2.0, 3.0, fp);
  CHECK(bc.c_breve == 1.0);
  CHECK(bc.c_hat == 0.5);
  CHECK(bc.c_tilde == 6.0);
  CHECK(bc.min_h_inverse_omega(0.1) == 0.1);
  CHECK(bc.min_h_inverse_omega(1.0) == doctest::Approx(1.0 / 3.0));

  CHECK(bound_constants(OscillatorSystem(RVector{0.0, 3.0, 7.0}), fp).omega_min_nonzero == 3.0);
  const auto none = bound_constants(OscillatorSystem(RVector{0.0, 0.0}), fp);
  CHECK(none.min_h_inverse_omega(0.5) == 0.0);

  // A = 2·diag(1,-1)
  CMatrix a(2);
  a(0, 0) = 2.0;
  a(1, 1) = -2.0;
  CHECK(bound_constants(OscillatorSystem(RVector{1.0, 1.0}, a), fp).a_norm == doctest::Approx(2.0));
}

TEST_CASE("bound constants scale with A") {
  std::mt19937_64 rng(7);
  const auto sys = hermitian_system(rng, RVector{1.0, 2.0, 3.0}, 1.3);
  for (const auto& fp : catalog()) {
    const auto b1 = bound_constants(sys, fp);
    for (double s : {0.5, 3.0}) {
      const OscillatorSystem scaled(sys.omegas(), s * sys.coupling());
      const auto b2 = bound_constants(scaled, fp);
      CHECK(b2.c_breve == doctest::Approx(s * b1.c_breve).epsilon(1e-12));
      CHECK(b2.c_tilde == doctest::Approx(s * b1.c_tilde).epsilon(1e-12));
      CHECK(b2.c_hat == doctest::Approx(s * s * b1.c_hat).epsilon(1e-12));
    }
  }
}

TEST_CASE("closeness inequalities") {
  const auto& fp = find_filter("hairer-lubich");
  const OscillatorSystem free(RVector{1.0, 2.0});
  const auto r0 = closeness_check(free, fp, 0.3, State{{1.0, 2.0}, {0.0, 1.0}});
  CHECK(r0.slack_quadratic == 0.0);
  CHECK(r0.slack_energy == 0.0);
  CHECK(r0.ok());

  std::mt19937_64 rng(8);
  const auto sys = hermitian_system(rng, RVector{0.0, 5.0, 50.0}, 4.0);
  const auto rq = closeness_check(sys, fp, 0.3, State{CVector(3), random_vector(rng, 3)});
  CHECK(rq.slack_quadratic == 0.0);
  CHECK(rq.ok());

  const auto adv = closeness_check(sys, fp, 1.5, random_state_of(rng, 3));
  CHECK(adv.advisory);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 8);
  const double hs[] = {0.01, 0.3, 1.0};
  for (int draw = 0; draw < 300; ++draw) {
    RandomSystemSpec spec;
    spec.dim = static_cast<std::size_t>(dim(rng));
    spec.a_norm = 5.0 * unit(rng);
    const auto rs = random_system(rng, spec);
    const State s = random_state_of(rng, spec.dim);
    for (const auto& f : catalog()) {
      const double h = draw % 2 ? hs[draw % 3] : unit(rng);
      const auto r = closeness_check(rs, f, h, s);
      REQUIRE(r.ok());
    }
  }
}

TEST_CASE("regularity bound") {
  const auto& fp = find_filter("deuflhard");
  CHECK_THROWS_AS(regularity_bound(OscillatorSystem(RVector{1.0}), find_filter("gautschi"), 0.1,
                                   State{{1.0}, {0.0}}, 1.0),
                  PreconditionError);

  // A = 0: pure rotation keeps the bound tight
  const OscillatorSystem free(RVector{1.0, 3.0});
  const State s0{{1.0, Complex(0, 1)}, {0.5, 0.0}};
  const double b = regularity_bound(free, fp, 0.5, s0, 10.0);
  CHECK(b == doctest::Approx(std::sqrt(norm_squared(free.omega_times(s0.q)) + norm_squared(s0.qdot))));
  IntegrateOptions opt;
  const auto tr = integrate(free, zero_force(), IntegratorConfig{0.5, fp}, s0, 1000, opt);
  for (std::size_t i = 0; i < tr.series.size(); ++i) {
    const double v = std::hypot(tr.series.omega_q_norm[i], tr.series.qdot_norm[i]);
    REQUIRE(v <= b * (1 + 1e-13));
    REQUIRE(v >= b * (1 - 1e-13));
  }

  // zero data
  std::mt19937_64 rng(9);
  const auto sys = hermitian_system(rng, RVector{1.0, 2.0}, 1.0);
  const auto bc = bound_constants(sys, fp);
  CHECK(regularity_bound(sys, fp, 0.5, State{CVector(2), CVector(2)}, 2.0) ==
        doctest::Approx(std::sqrt(2 * (bc.c_breve + bc.c_hat * 0.25)) * 2.0));
}

TEST_CASE("regularity bound along a coupled trajectory") {
  std::mt19937_64 rng(10);
  const double h = 0.5;
  const auto sys = testing::bounded_system(rng, 6, 20.0, 1.0, {h});
  const State s0 = random_state_of(rng, 6);
  for (const FilterPair* fp : testing::compliant_pairs()) {
    const auto tr = integrate(sys, linear_force(sys), IntegratorConfig{h, *fp}, s0, 10000);
    double qmax = 0.0;
    for (double q : tr.series.q_norm) qmax = std::max(qmax, q);
    const double b = regularity_bound(sys, *fp, h, s0, qmax);
    for (std::size_t i = 0; i < tr.series.size(); ++i)
      REQUIRE(std::hypot(tr.series.omega_q_norm[i], tr.series.qdot_norm[i]) <= b);
  }
}

TEST_CASE("drift bound") {
  const auto& fp = find_filter("deuflhard");
  // A = 0: H is conserved to roundoff and the bound is satisfied
  const OscillatorSystem free(RVector{0.0, 1.0, 10.0});
  const State s0{{1.0, 1.0, 1.0}, {0.1, 0.0, 1.0}};
  const auto tr = integrate(free, linear_force(free), IntegratorConfig{0.1, fp}, s0, 10000);
  // The stored rotation coefficients satisfy c² + ω²h²sinc² = 1 only to an
  // ulp, so the energy of each mode can move by ~2ε per step, systematically.
  const double rounding_floor = 10000 * 2 * std::numeric_limits<double>::epsilon();
  CHECK(tr.series.max_abs_drift_energy() <= rounding_floor * energy(free, s0));
  const auto r = drift_bound_check(free, fp, 0.1, tr.series);
  CHECK(r.ok);

  CHECK_THROWS_AS(drift_bound_check(free, find_filter("gautschi"), 0.1, tr.series), PreconditionError);
  CHECK_THROWS_AS(drift_bound_check(free, fp, 0.1, EnergySeries{}), PreconditionError);
}

TEST_CASE("drift bound at a resonant step size") {
  // ω ∈ {0, 1, 10, 100, 1000}, h = π/100 resonant with ω = 100
  std::mt19937_64 rng(12);
  const RVector w{0.0, 1.0, 10.0, 100.0, 1000.0, 0.0, 10.0, 100.0};
  const double h = std::numbers::pi / 100.0;
  const auto& fp = find_filter("deuflhard");
  OscillatorSystem sys(w);
  for (;;) {
    CMatrix a = random_hermitian(rng, w.size());
    a = (1.0 / hermitian_spectral_norm(a)) * a;
    OscillatorSystem cand(w, a);
    if (modified_energy_min_eigenvalue(cand, fp, h) > 0.0) {
      sys = cand;
      break;
    }
  }
  const State s0 = random_state_of(rng, w.size());
  const auto tr = integrate(sys, linear_force(sys), IntegratorConfig{h, fp}, s0, 100000);
  const auto r = drift_bound_check(sys, fp, h, tr.series);
  CHECK(r.ok);
  CHECK(r.worst_slack >= 0.0);
  CHECK_THROWS_AS(drift_bound_check(sys, find_filter("gautschi"), h, tr.series), PreconditionError);
}

TEST_CASE("unconditional certificate") {
  const auto& fp = find_filter("deuflhard");
  // A = 0 and ω ≥ 1: ceiling 0
  const OscillatorSystem free(RVector{1.0, 2.0, 5.0});
  const auto c0 = unconditional_bound_check(free, fp, 0.3, State{{1.0, 1.0, 1.0}, {0.0, 1.0, 0.0}});
  CHECK(c0.issued);
  CHECK(c0.drift_ceiling == 0.0);

  // ω = 1, ||A|| = 4: threshold 3
  CMatrix a(1);
  a(0, 0) = 4.0;
  const auto r = unconditional_bound_check(OscillatorSystem(RVector{1.0}, a), fp, 0.3,
                                           State{{1.0}, {0.0}});
  CHECK_FALSE(r.issued);
  CHECK(r.omega_threshold == 3.0);
  CHECK(r.diagnostic.find("threshold") != std::string::npos);

  const auto z = unconditional_bound_check(OscillatorSystem(RVector{1.0, 0.0}), fp, 0.3,
                                           State{{1.0, 1.0}, {0.0, 0.0}});
  CHECK_FALSE(z.issued);
  CHECK(z.diagnostic.find("index 1") != std::string::npos);

  const auto g = unconditional_bound_check(free, find_filter("gautschi"), 0.3,
                                           State{{1.0, 1.0, 1.0}, {0.0, 1.0, 0.0}});
  CHECK_FALSE(g.issued);
  CHECK_THROWS_AS(audit_unconditional(g, EnergySeries{}), PreconditionError);
}

TEST_CASE("unconditional certificate along a long run") {
  // ω_j = √(j² + 9), ||A|| = 1: threshold 1.5 ≤ 3
  std::mt19937_64 rng(13);
  RVector w(6);
  for (std::size_t j = 0; j < 6; ++j) w[j] = std::sqrt(double(j * j) + 9.0);
  const auto sys = hermitian_system(rng, w, 1.0);
  const State s0 = random_state_of(rng, 6);
  for (const FilterPair* fp : testing::compliant_pairs()) {
    const double h = 0.1;
    const auto cert = unconditional_bound_check(sys, *fp, h, s0);
    REQUIRE(cert.issued);
    CHECK(cert.omega_threshold == doctest::Approx(1.5));
    const auto tr = integrate(sys, linear_force(sys), IntegratorConfig{h, *fp}, s0, 100000);
    const auto a = audit_unconditional(cert, tr.series);
    CHECK(a.ok);
    CHECK(a.worst_energy_slack >= 0.0);
    CHECK(a.worst_drift_slack >= 0.0);
  }
}

TEST_CASE("drift scale") {
  const OscillatorSystem free(RVector{2.0});
  const auto bc = bound_constants(free, find_filter("deuflhard"));
  CHECK(drift_scale(free, bc, 0.1, State{{1.0}, {2.0}}) == 4.0);
}

}  // TEST_SUITE
