#include "dfc/byparts.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace dfc;

namespace {
mpq_class q(long n, long d = 1) { return mpq_class(n, d); }

const std::vector<mpq_class> kAlphas{q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)};

GridFunction<mpq_class> power(const Grid &g, int k) {
  return GridFunction<mpq_class>::sample(g, [k](const Point &t) {
    mpq_class v = 1;
    for (int i = 0; i < k; ++i)
      v *= t;
    return v;
  });
}

bool same_terms(const SbpReport<mpq_class> &x, const SbpReport<mpq_class> &y) {
  return x.lhs == y.lhs && x.rhs_boundary == y.rhs_boundary && x.rhs_sum == y.rhs_sum;
}
} // namespace

TEST_SUITE("byparts") {

TEST_CASE("theorem and reading names") {
  for (auto th : all_sbp_theorems())
    CHECK(parse_sbp_theorem(sbp_name(th)) == th);
  CHECK(parse_reading("Corrected") == SbpReading::corrected);
  CHECK_THROWS_AS(parse_reading("loose"), ParseError);
  CHECK_THROWS_AS(parse_sbp_theorem("SBP_X"), ParseError);
}

TEST_CASE("boundary conventions") {
  std::mt19937_64 rng(1);
  const auto g = oracle::random_function(Grid(q(1, 2), 7), rng);
  const Point a = g.grid().base(), b = g.grid().top();
  for (const auto &alpha : kAlphas) {
    CHECK(sbp_boundary_convention(SbpTheorem::SBP_CAPUTO_LEFT, g, alpha, b - 1) == g.at(b - 1));
    CHECK(sbp_boundary_convention(SbpTheorem::SBP_RL_LEFT, g, alpha, a) == 0);
    CHECK(sbp_boundary_convention(SbpTheorem::SBP_CAPUTO_RIGHT, g, alpha, a + 1) == g.at(a + 1));
    CHECK(sbp_boundary_convention(SbpTheorem::SBP_RL_RIGHT, g, alpha, b) == 0);
  }
  CHECK_THROWS_AS(sbp_boundary_convention(SbpTheorem::SBP_RL_RIGHT, g, q(1, 2), b - 1), DomainError);
  CHECK_THROWS_AS(sbp_boundary_convention(SbpTheorem::SBP_CAPUTO_LEFT, g, q(1, 2), b), DomainError);
}

TEST_CASE("left hand side against the definition") {
  std::mt19937_64 rng(2);
  const Grid w(q(0), 7);
  const auto f = oracle::random_function(w, rng);
  const auto g = oracle::random_function(w, rng);
  const mpq_class alpha(1, 3);
  mpq_class expected = 0;
  for (long s = 1; s <= 5; ++s) {
    mpq_class caputo = 0; // nabla_0^{-(1-alpha)} (nabla f)(s)
    for (long r = 1; r <= s; ++r)
      caputo += oracle::rising_kernel(q(s - r + 1), 1 - alpha) * (f.at(q(r)) - f.at(q(r - 1)));
    expected += g.at(q(s)) * caputo;
  }
  CHECK(sbp(SbpTheorem::SBP_CAPUTO_LEFT, f, g, alpha).lhs == expected);
}

TEST_CASE("caputo theorems hold literally") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Grid w(oracle::random_rational(rng, 3, 4), 4 + static_cast<std::size_t>(trial % 14));
    const auto f = oracle::random_function(w, rng);
    const auto g = oracle::random_function(w, rng);
    const auto &alpha = kAlphas[static_cast<std::size_t>(trial) % kAlphas.size()];
    CAPTURE(trial);
    const auto left = sbp(SbpTheorem::SBP_CAPUTO_LEFT, f, g, alpha);
    const auto right = sbp(SbpTheorem::SBP_CAPUTO_RIGHT, f, g, alpha);
    CHECK(left.pass);
    CHECK(left.deviation == 0);
    CHECK(right.pass);
    CHECK(right.deviation == 0);
  }
}

TEST_CASE("riemann-liouville theorems as printed") {
  std::mt19937_64 rng(4);
  const Grid w(q(0), 9);
  const auto f = oracle::random_function(w, rng);
  const auto g = oracle::random_function(w, rng);
  const Point a = w.base(), b = w.top();
  for (const auto &alpha : kAlphas) {
    const auto r = sbp(SbpTheorem::SBP_RL_LEFT, f, g, alpha);
    CHECK_FALSE(r.pass);
    // The residual is carried by f(b) alone.
    mpq_class residual = 0;
    for (Point s = a + 1; s <= b - 1; s += 1)
      residual += g.at(s) * oracle::rising_kernel(b - s + 1, 1 - alpha);
    residual *= f.at(b - 1) - f.at(b);
    CHECK(r.deviation == abs(residual));
    CHECK_FALSE(sbp(SbpTheorem::SBP_RL_RIGHT, f, g, alpha).pass);
  }
  // Constant tail: f(b-1) = f(b) kills the residual.
  auto flat = f;
  flat.at(b) = flat.at(b - 1);
  CHECK(sbp(SbpTheorem::SBP_RL_LEFT, flat, g, q(1, 2)).pass);
}

TEST_CASE("rl right example on t and t^2") {
  const Grid w(q(0), 5);
  const auto f = power(w, 1);
  const auto g = power(w, 2);
  SbpOptions corrected;
  corrected.reading = SbpReading::corrected;
  const auto lit = sbp(SbpTheorem::SBP_RL_RIGHT, f, g, q(1, 2));
  const auto fixed = sbp(SbpTheorem::SBP_RL_RIGHT, f, g, q(1, 2), corrected);
  CHECK(fixed.pass);
  CHECK(fixed.deviation == 0);
  CHECK(lit.deviation != 0);
}

TEST_CASE("corrected readings are exact") {
  std::mt19937_64 rng(5);
  SbpOptions opt;
  opt.reading = SbpReading::corrected;
  for (int trial = 0; trial < 40; ++trial) {
    const Grid w(oracle::random_rational(rng, 3, 4), 4 + static_cast<std::size_t>(trial % 14));
    const auto f = oracle::random_function(w, rng);
    const auto g = oracle::random_function(w, rng);
    const auto &alpha = kAlphas[static_cast<std::size_t>(trial) % kAlphas.size()];
    CAPTURE(trial);
    for (auto th : all_sbp_theorems())
      CHECK(sbp(th, f, g, alpha, opt).pass);
  }
}

TEST_CASE("constant f under caputo right") {
  std::mt19937_64 rng(6);
  const Grid w(q(0), 8);
  const auto one = GridFunction<mpq_class>::constant(w, q(1));
  const auto g = oracle::random_function(w, rng);
  const auto r = sbp(SbpTheorem::SBP_CAPUTO_RIGHT, one, g, q(1, 2));
  CHECK(r.lhs == 0);
  CHECK(r.rhs_boundary == -r.rhs_sum);
  CHECK(r.rhs_sum != 0);
  CHECK(r.pass);
}

TEST_CASE("off-by-one mutant is caught") {
  const Grid w(q(0), 9);
  const auto one = GridFunction<mpq_class>::constant(w, q(1));
  const auto g = power(w, 2);
  SbpOptions mutant;
  mutant.shift_mutant = true;
  const auto m1 = sbp(SbpTheorem::SBP_CAPUTO_RIGHT, one, g, q(1, 2), mutant);
  CHECK_FALSE(m1.pass);
  CHECK(m1.deviation != 0);
  mutant.reading = SbpReading::corrected;
  const auto m2 = sbp(SbpTheorem::SBP_RL_RIGHT, one, g, q(1, 2), mutant);
  CHECK_FALSE(m2.pass);
  CHECK(m2.deviation != 0);
  CHECK_THROWS_AS(sbp(SbpTheorem::SBP_CAPUTO_LEFT, one, g, q(1, 2), mutant), DomainError);
}

TEST_CASE("caputo right with the sum running to b") {
  std::mt19937_64 rng(7);
  const Grid ext(q(0), 9); // [a, b+1] with b = 7
  const auto f = oracle::random_function(ext, rng);
  const auto g = oracle::random_function(ext, rng);
  SbpOptions proof;
  proof.reading = SbpReading::proof;
  const mpq_class alpha(1, 2);
  const auto r = sbp(SbpTheorem::SBP_CAPUTO_RIGHT, f, g, alpha, proof);
  CHECK(r.grid == Grid(q(0), 8));
  const auto dg = apply(OperatorSpec::rl(Direction::nabla, Side::left, alpha, q(0)), g);
  CHECK(r.deviation == abs(f.at(q(8)) * dg.at(q(8))));
  CHECK(r.deviation != 0);
  // Statement form on the same theorem window.
  const auto statement = sbp(SbpTheorem::SBP_CAPUTO_RIGHT, restrict(f, r.grid), restrict(g, r.grid), alpha);
  CHECK(statement.pass);
  CHECK_THROWS_AS(sbp(SbpTheorem::SBP_RL_LEFT, f, g, alpha, proof), DomainError);
}

TEST_CASE("right theorems are the left ones on the duals") {
  std::mt19937_64 rng(8);
  SbpOptions corrected;
  corrected.reading = SbpReading::corrected;
  for (int trial = 0; trial < 20; ++trial) {
    const Grid w(oracle::random_rational(rng, 3, 2), 4 + static_cast<std::size_t>(trial % 10));
    const auto f = oracle::random_function(w, rng);
    const auto g = oracle::random_function(w, rng);
    const auto &alpha = kAlphas[static_cast<std::size_t>(trial) % kAlphas.size()];
    const auto fs = symmetric_dual(f);
    const auto gs = symmetric_dual(g);
    CHECK(same_terms(sbp(SbpTheorem::SBP_CAPUTO_RIGHT, f, g, alpha),
                     sbp(SbpTheorem::SBP_CAPUTO_LEFT, fs, gs, alpha)));
    CHECK(same_terms(sbp(SbpTheorem::SBP_RL_RIGHT, f, g, alpha, corrected),
                     sbp(SbpTheorem::SBP_RL_LEFT, fs, gs, alpha, corrected)));
  }
}

TEST_CASE("float backend") {
  std::mt19937_64 rng(9);
  const Grid w(q(0), 17);
  const auto f = to_float(oracle::random_function(w, rng));
  const auto g = to_float(oracle::random_function(w, rng));
  SbpOptions opt;
  opt.reading = SbpReading::corrected;
  for (const auto &alpha : kAlphas)
    for (auto th : all_sbp_theorems())
      CHECK(sbp(th, f, g, alpha, opt).pass);
}

TEST_CASE("preconditions") {
  const Grid w(q(0), 6);
  const auto f = power(w, 1);
  CHECK_THROWS_AS(sbp(SbpTheorem::SBP_CAPUTO_LEFT, f, f, q(1)), DomainError);
  CHECK_THROWS_AS(sbp(SbpTheorem::SBP_CAPUTO_LEFT, f, f, q(0)), DomainError);
  CHECK_THROWS_AS(sbp(SbpTheorem::SBP_CAPUTO_LEFT, f, f, q(3, 2)), DomainError);
  const auto small = power(Grid(q(0), 3), 1);
  CHECK_THROWS_AS(sbp(SbpTheorem::SBP_CAPUTO_LEFT, small, small, q(1, 2)), DomainError);
  CHECK_THROWS_AS(sbp(SbpTheorem::SBP_CAPUTO_LEFT, f, power(Grid(q(1, 2), 6), 1), q(1, 2)), DomainError);
}

TEST_CASE("report json") {
  const Grid w(q(0), 5);
  const auto j = to_json(sbp(SbpTheorem::SBP_CAPUTO_RIGHT, power(w, 1), power(w, 2), q(1, 2)));
  CHECK(j.at("theorem") == "SBP_CAPUTO_RIGHT");
  CHECK(j.at("reading") == "literal");
  CHECK(j.at("deviation") == "0");
  CHECK(j.at("pass") == true);
  CHECK(j.at("lhs").is_string());
}

}
