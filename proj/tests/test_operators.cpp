#include "dfc/operators.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace dfc;

namespace {

mpq_class q(long n, long d = 1) { return mpq_class(n, d); }

using QF = GridFunction<mpq_class>;

QF sample(long base, std::size_t count, const std::function<mpq_class(const Point &)> &fn) {
  return QF::sample(Grid(q(base), count), fn);
}

QF ones(long base, std::size_t count) { return QF::constant(Grid(q(base), count), q(1)); }

const Direction kDirs[] = {Direction::delta, Direction::nabla};
const Side kSides[] = {Side::left, Side::right};

std::vector<OperatorSpec> all_specs(const mpq_class &alpha, const Point &a, const Point &b) {
  std::vector<OperatorSpec> out;
  for (auto d : kDirs)
    for (auto s : kSides) {
      const Point anchor = s == Side::left ? a : b;
      out.push_back(OperatorSpec::sum(d, s, alpha, anchor));
      out.push_back(OperatorSpec::rl(d, s, alpha, anchor));
      const Point ca = d == Direction::nabla ? caputo_anchor(s, anchor, alpha) : anchor;
      out.push_back(OperatorSpec::caputo(d, s, alpha, ca));
    }
  return out;
}

} // namespace

TEST_SUITE("operators") {

TEST_CASE("nabla left sum of order one is a running sum") {
  const auto out = frac_sum(OperatorSpec::sum(Direction::nabla, Side::left, q(1), q(0)), ones(0, 6));
  CHECK(out.grid() == Grid(q(0), 6));
  CHECK(out.values() == std::vector<mpq_class>{q(0), q(1), q(2), q(3), q(4), q(5)});
}

TEST_CASE("nabla left half sum of a constant") {
  const mpq_class alpha(1, 2);
  const auto out = frac_sum(OperatorSpec::sum(Direction::nabla, Side::left, alpha, q(0)), ones(0, 6));
  CHECK(out.at(q(2)) == q(3, 2));
  CHECK(out.at(q(3)) == q(15, 8));
  // closed form (t-a)^{overline{alpha}} / Gamma(alpha+1)
  for (long t = 1; t < 6; ++t) {
    const auto ref = rising_factorial_exact(q(t), alpha) / GammaProduct::gamma(alpha + 1);
    REQUIRE(ref.is_rational());
    CHECK(out.at(q(t)) == ref.coefficient());
  }
}

TEST_CASE("delta left half sum lands on the shifted grid") {
  const auto out = frac_sum(OperatorSpec::sum(Direction::delta, Side::left, q(1, 2), q(0)), ones(0, 5));
  CHECK(out.grid() == Grid(q(1, 2), 5));
  CHECK(out.at(q(3, 2)) == q(3, 2));
}

TEST_CASE("sums match the factorial-function definitions") {
  std::mt19937_64 rng(1234);
  for (const auto &alpha : {q(1, 2), q(1, 3), q(3, 2), q(5, 4), q(1), q(2), q(7, 3)}) {
    const auto f = oracle::random_function(Grid(q(-1), 9), rng);
    const auto fn = oracle::as_fn(f);
    const Point a(0), b(6);

    const auto nl = frac_sum(OperatorSpec::sum(Direction::nabla, Side::left, alpha, a), f);
    for (std::size_t i = 0; i < nl.size(); ++i)
      CHECK(nl[i] == oracle::nabla_left_sum(fn, alpha, a, nl.grid().point(i)));

    const auto nr = frac_sum(OperatorSpec::sum(Direction::nabla, Side::right, alpha, b), f);
    CHECK(nr.grid() == Grid::between(q(-1), b));
    for (std::size_t i = 0; i < nr.size(); ++i)
      CHECK(nr[i] == oracle::nabla_right_sum(fn, alpha, b, nr.grid().point(i)));

    const auto dl = frac_sum(OperatorSpec::sum(Direction::delta, Side::left, alpha, a), f);
    CHECK(dl.grid().base() == a + alpha);
    for (std::size_t i = 0; i < dl.size(); ++i)
      CHECK(dl[i] == oracle::delta_left_sum(fn, alpha, a, dl.grid().point(i)));

    const auto dr = frac_sum(OperatorSpec::sum(Direction::delta, Side::right, alpha, b), f);
    CHECK(dr.grid().top() == b - alpha);
    for (std::size_t i = 0; i < dr.size(); ++i)
      CHECK(dr[i] == oracle::delta_right_sum(fn, alpha, b, dr.grid().point(i)));
  }
}

TEST_CASE("float sums track the exact ones") {
  std::mt19937_64 rng(77);
  const auto f = oracle::random_function(Grid(q(0), 12), rng);
  const auto ff = to_float(f);
  for (const auto &spec : all_specs(q(2, 3), q(0), q(11))) {
    const auto ex = apply(spec, f);
    const auto fl = apply(spec, ff);
    REQUIRE(ex.grid() == fl.grid());
    for (std::size_t i = 0; i < ex.size(); ++i)
      CHECK(fl[i] == doctest::Approx(ex[i].get_d()).epsilon(1e-12));
  }
}

TEST_CASE("sum argument checks") {
  CHECK_THROWS_AS(OperatorSpec::sum(Direction::nabla, Side::left, q(0), q(0)), DomainError);
  CHECK_THROWS_AS(OperatorSpec::sum(Direction::delta, Side::left, q(-1, 2), q(0)), DomainError);
  const auto f = ones(0, 5);
  // anchor not aligned with the grid
  CHECK_THROWS_AS(frac_sum(OperatorSpec::sum(Direction::nabla, Side::left, q(1, 2), q(1, 2)), f),
                  DomainError);
  // input starts after a+1
  CHECK_THROWS_AS(frac_sum(OperatorSpec::sum(Direction::nabla, Side::left, q(1, 2), q(-3)), f),
                  DomainError);
  // input ends before b-1
  CHECK_THROWS_AS(frac_sum(OperatorSpec::sum(Direction::nabla, Side::right, q(1, 2), q(7)), f),
                  DomainError);
  CHECK_THROWS_AS(frac_sum(OperatorSpec::sum(Direction::delta, Side::left, q(1, 2), q(-1)), f),
                  DomainError);
  CHECK_THROWS_AS(frac_sum(OperatorSpec::rl(Direction::delta, Side::left, q(1, 2), q(0)), f),
                  DomainError);
}

TEST_CASE("integer differences") {
  const auto sq = sample(0, 5, [](const Point &t) -> mpq_class { return t * t; });
  const auto d1 = int_diff(Direction::delta, false, 1, sq);
  CHECK(d1.grid() == Grid(q(0), 4));
  CHECK(d1.values() == std::vector<mpq_class>{q(1), q(3), q(5), q(7)});
  const auto n2 = int_diff(Direction::nabla, false, 2, sq);
  CHECK(n2.grid() == Grid(q(2), 3));
  CHECK(n2.values() == std::vector<mpq_class>{q(2), q(2), q(2)});
  const auto id = sample(0, 4, [](const Point &t) { return t; });
  CHECK(int_diff(Direction::delta, true, 1, id).values() == std::vector<mpq_class>(3, q(-1)));
  CHECK(int_diff(Direction::nabla, true, 2, sq).values() == std::vector<mpq_class>(3, q(2)));
  CHECK_THROWS_AS(int_diff(Direction::delta, false, 5, sq), DomainError);
}

TEST_CASE("nabla left RL difference of a constant") {
  const mpq_class alpha(1, 2);
  const auto out = frac_diff_rl(OperatorSpec::rl(Direction::nabla, Side::left, alpha, q(0)), ones(0, 6));
  CHECK(out.grid().base() == 1);
  CHECK(out.at(q(2)) == q(1, 2));
  CHECK(out.at(q(3)) == q(3, 8));
  // (t-a)^{overline{-alpha}} / Gamma(1-alpha)
  for (long t = 1; t < 6; ++t) {
    const auto ref = rising_factorial_exact(q(t), -alpha) / GammaProduct::gamma(1 - alpha);
    REQUIRE(ref.is_rational());
    CHECK(out.at(q(t)) == ref.coefficient());
  }
}

TEST_CASE("nabla right RL difference of a constant") {
  const mpq_class alpha(1, 2);
  const auto out = frac_diff_rl(OperatorSpec::rl(Direction::nabla, Side::right, alpha, q(4)), ones(0, 5));
  CHECK(out.grid().top() == 3);
  CHECK(out.at(q(2)) == q(1, 2));
  // mirror of the left operator on the reflected constant
  const auto left = frac_diff_rl(OperatorSpec::rl(Direction::nabla, Side::left, alpha, q(-4)), ones(-4, 5));
  CHECK(left.at(q(-2)) == out.at(q(2)));
  // definition route: -Delta of the right sum of order 1/2
  const auto fn = [](const Point &) { return q(1); };
  const mpq_class ref = -(oracle::nabla_right_sum(fn, alpha, q(4), q(3)) -
                     oracle::nabla_right_sum(fn, alpha, q(4), q(2)));
  CHECK(out.at(q(2)) == ref);
}

TEST_CASE("integer order RL differences reduce to integer differences") {
  std::mt19937_64 rng(8);
  const auto f = oracle::random_function(Grid(q(0), 9), rng);
  for (int n : {1, 2, 3}) {
    const mpq_class alpha(n);
    CHECK(frac_diff_rl(OperatorSpec::rl(Direction::delta, Side::left, alpha, q(0)), f) ==
          int_diff(Direction::delta, false, n, f));
    CHECK(frac_diff_rl(OperatorSpec::rl(Direction::nabla, Side::left, alpha, q(0)), f) ==
          int_diff(Direction::nabla, false, n, f));
    CHECK(frac_diff_rl(OperatorSpec::rl(Direction::delta, Side::right, alpha, q(8)), f) ==
          int_diff(Direction::nabla, true, n, f));
    CHECK(frac_diff_rl(OperatorSpec::rl(Direction::nabla, Side::right, alpha, q(8)), f) ==
          int_diff(Direction::delta, true, n, f));
  }
}

TEST_CASE("Caputo differences") {
  const mpq_class alpha(1, 2);
  const auto c = QF::constant(Grid(q(0), 7), q(5, 3));
  for (const auto &spec : all_specs(alpha, q(0), q(6)))
    if (spec.flavor == Flavor::caputo) {
      const auto out = apply(spec, c);
      for (const auto &v : out.values())
        CHECK(v == 0);
    }

  const auto id = sample(0, 5, [](const Point &t) { return t; });
  const auto cap = frac_diff_caputo(OperatorSpec::caputo(Direction::nabla, Side::left, alpha, q(0)), id);
  CHECK(cap.at(q(2)) == q(3, 2));

  // degree < n polynomials vanish
  const auto lin = sample(0, 9, [](const Point &t) -> mpq_class { return 3 * t - 2; });
  for (const auto &spec : all_specs(q(3, 2), q(0), q(8)))
    if (spec.flavor == Flavor::caputo) {
      const auto out = apply(spec, lin);
      for (const auto &v : out.values())
        CHECK(v == 0);
    }
}

TEST_CASE("output windows follow the domain laws") {
  const Point a(0), b(8);
  const auto f = ones(0, 9);
  for (const auto &alpha : {q(1, 2), q(3, 2)}) {
    const int n = FracOrder(alpha).n();
    auto out = [&](Direction d, Side s, Flavor fl) {
      const Point anchor = s == Side::left ? a : b;
      OperatorSpec spec = fl == Flavor::sum ? OperatorSpec::sum(d, s, alpha, anchor)
                          : fl == Flavor::riemann_liouville
                              ? OperatorSpec::rl(d, s, alpha, anchor)
                              : OperatorSpec::caputo(d, s, alpha,
                                                     d == Direction::nabla ? caputo_anchor(s, anchor, alpha)
                                                                           : anchor);
      const Grid g = apply(spec, f).grid();
      CHECK(g == output_grid(spec, f.grid()));
      return g;
    };
    CHECK(out(Direction::delta, Side::left, Flavor::sum).base() == a + alpha);
    CHECK(out(Direction::delta, Side::left, Flavor::sum).top() == b + alpha);
    CHECK(out(Direction::delta, Side::right, Flavor::sum).top() == b - alpha);
    CHECK(out(Direction::delta, Side::right, Flavor::sum).base() == a - alpha);
    CHECK(out(Direction::nabla, Side::left, Flavor::sum) == Grid::between(a, b));
    CHECK(out(Direction::nabla, Side::right, Flavor::sum) == Grid::between(a, b));

    CHECK(out(Direction::delta, Side::left, Flavor::riemann_liouville).base() == a + (n - alpha));
    CHECK(out(Direction::delta, Side::right, Flavor::riemann_liouville).top() == b - (n - alpha));
    CHECK(out(Direction::nabla, Side::left, Flavor::riemann_liouville).base() == a + n);
    CHECK(out(Direction::nabla, Side::right, Flavor::riemann_liouville).top() == b - n);

    CHECK(out(Direction::delta, Side::left, Flavor::caputo).base() == a + (n - alpha));
    CHECK(out(Direction::delta, Side::right, Flavor::caputo).top() == b - (n - alpha));
    CHECK(out(Direction::nabla, Side::left, Flavor::caputo).base() == a + n);
    CHECK(out(Direction::nabla, Side::right, Flavor::caputo).top() == b - n);
  }
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = oracle::random_function(Grid(q(0), 10), rng);
    const auto g = oracle::random_function(Grid(q(0), 10), rng);
    const mpq_class x = oracle::random_rational(rng), y = oracle::random_rational(rng);
    const mpq_class alpha = trial % 2 == 0 ? q(1, 3) : q(7, 4);
    for (const auto &spec : all_specs(alpha, q(0), q(9)))
      CHECK(apply(spec, combine(x, f, y, g)) == combine(x, apply(spec, f), y, apply(spec, g)));
  }
}

TEST_CASE("matrices act like the operators") {
  std::mt19937_64 rng(66);
  const auto f = oracle::random_function(Grid(q(-1), 11), rng);
  for (const auto &alpha : {q(1, 2), q(3, 2), q(2), q(1, 3)}) {
    for (const auto &spec : all_specs(alpha, q(0), q(8))) {
      const auto m = operator_matrix<mpq_class>(spec, f.grid());
      CHECK(m.apply(f) == apply(spec, f));
    }
    for (int p = 0; p < 3; ++p)
      for (auto d : kDirs) {
        const auto m = operator_matrix<mpq_class>(OperatorSpec::integer(d, p, true), f.grid());
        CHECK(m.apply(f) == int_diff(d, true, p, f));
      }
  }
}

TEST_CASE("matrix entries") {
  const Grid g(q(0), 4);
  const auto m1 = operator_matrix<mpq_class>(OperatorSpec::sum(Direction::nabla, Side::left, q(1), q(0)), g);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(m1(r, c) == ((c >= 1 && c <= r) ? 1 : 0));

  const auto mh =
      operator_matrix<mpq_class>(OperatorSpec::sum(Direction::nabla, Side::left, q(1, 2), q(0)), g);
  const std::vector<mpq_class> kern{q(1), q(1, 2), q(3, 8)};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(mh(r, c) == ((c >= 1 && c <= r) ? kern[r - c] : q(0)));

  // RL = integer difference after sum
  const auto rl = OperatorSpec::rl(Direction::nabla, Side::left, q(1, 2), q(0));
  const auto sum = operator_matrix<mpq_class>(OperatorSpec::sum(Direction::nabla, Side::left, q(1, 2), q(0)), g);
  const auto diff = operator_matrix<mpq_class>(OperatorSpec::integer(Direction::nabla, 1), sum.output_grid());
  const auto composed = compose(diff, sum);
  const auto direct = operator_matrix<mpq_class>(rl, g);
  REQUIRE(composed.output_grid() == direct.output_grid());
  for (std::size_t r = 0; r < direct.rows(); ++r)
    for (std::size_t c = 0; c < direct.cols(); ++c)
      CHECK(composed(r, c) == direct(r, c));

  CHECK_THROWS_AS(compose(sum, diff), DomainError);

  std::ostringstream out;
  write_matrix_csv(out, mh);
  CHECK(out.str() == "t,0,1,2,3\n0,0,0,0,0\n1,0,1,0,0\n2,0,1/2,1,0\n3,0,3/8,1/2,1\n");
}

TEST_CASE("initial value problems for integer orders") {
  std::mt19937_64 rng(31);
  const Point a(0), b(9);
  const auto f = oracle::random_function(Grid::between(a, b), rng);
  for (int n : {1, 2}) {
    const mpq_class order(n);
    // u = Delta_a^{-n} f lives on N_{a+n}; with u(a+j-1) = 0 we get Delta^n u = f.
    {
      const auto u = frac_sum(OperatorSpec::sum(Direction::delta, Side::left, order, a), f);
      std::vector<mpq_class> ext(static_cast<std::size_t>(n), q(0));
      ext.insert(ext.end(), u.values().begin(), u.values().end());
      const auto du = int_diff(Direction::delta, false, n, QF(Grid(a, ext.size()), ext));
      CHECK(restrict(du, f.grid()) == f);
    }
    // u = _b Delta^{-n} f, u(b-j+1) = 0, nabla_(-)^n u = f.
    {
      const auto u = frac_sum(OperatorSpec::sum(Direction::delta, Side::right, order, b), f);
      std::vector<mpq_class> ext = u.values();
      ext.resize(ext.size() + static_cast<std::size_t>(n), q(0));
      const auto du = int_diff(Direction::nabla, true, n, QF(Grid(u.grid().base(), ext.size()), ext));
      CHECK(restrict(du, f.grid()) == f);
    }
    // y = nabla_a^{-n} f, nabla^i y(a) = 0, nabla^n y = f on N_{a+1}.
    {
      const auto y = frac_sum(OperatorSpec::sum(Direction::nabla, Side::left, order, a), f);
      CHECK(y.at(a) == 0);
      std::vector<mpq_class> ext(static_cast<std::size_t>(n - 1), q(0));
      ext.insert(ext.end(), y.values().begin(), y.values().end());
      const auto dy = int_diff(Direction::nabla, false, n, QF(Grid(a - (n - 1), ext.size()), ext));
      CHECK(restrict(dy, Grid::between(a + 1, b)) == restrict(f, Grid::between(a + 1, b)));
    }
    // y = _b nabla^{-n} f, _(-)Delta^i y(b) = 0, _(-)Delta^n y = f on _{b-1}N.
    {
      const auto y = frac_sum(OperatorSpec::sum(Direction::nabla, Side::right, order, b), f);
      CHECK(y.at(b) == 0);
      std::vector<mpq_class> ext = y.values();
      ext.resize(ext.size() + static_cast<std::size_t>(n - 1), q(0));
      const auto dy = int_diff(Direction::delta, true, n, QF(Grid(y.grid().base(), ext.size()), ext));
      CHECK(restrict(dy, Grid::between(a, b - 1)) == restrict(f, Grid::between(a, b - 1)));
    }
  }
}

TEST_CASE("order-one mirror smoke test") {
  std::mt19937_64 rng(2);
  const auto f = oracle::random_function(Grid(q(0), 8), rng);
  const auto fs = symmetric_dual(f);
  const auto left = frac_sum(OperatorSpec::sum(Direction::nabla, Side::left, q(1), q(0)), f);
  const auto right = frac_sum(OperatorSpec::sum(Direction::nabla, Side::right, q(1), q(0)), fs);
  CHECK(symmetric_dual(right) == left);
}

TEST_CASE("continuity of differences as the order approaches an integer") {
  std::mt19937_64 rng(4);
  const auto f = to_float(oracle::random_function(Grid(q(0), 10), rng));
  const mpq_class below = q(1) - mpq_class(1, 1000000);
  for (auto d : kDirs)
    for (auto s : kSides) {
      const Point anchor = s == Side::left ? q(0) : q(9);
      const auto at_one = apply(OperatorSpec::rl(d, s, q(1), anchor), f);
      const auto near = apply(OperatorSpec::rl(d, s, below, anchor), f);
      // Delta operators shift by n - alpha; compare at matching positions.
      std::size_t first = 0, last = near.size();
      if (d == Direction::nabla) {
        // the empty-sum endpoint keeps value 0 at the anchor
        if (s == Side::left)
          first = 1;
        else
          last -= 1;
      }
      REQUIRE(near.size() == at_one.size());
      for (std::size_t i = first; i < last; ++i)
        CHECK(near[i] == doctest::Approx(at_one[i]).epsilon(1e-4));
    }
}

TEST_CASE("operator names") {
  const auto spec = parse_operator("delta-right-caputo", q(1, 2), q(3));
  CHECK(spec.direction == Direction::delta);
  CHECK(spec.side == Side::right);
  CHECK(spec.flavor == Flavor::caputo);
  CHECK(operator_name(spec) == "delta-right-caputo");
  for (const auto &s : all_specs(q(1, 2), q(0), q(4)))
    CHECK(operator_name(parse_operator(operator_name(s), s.order, s.anchor)) == operator_name(s));
  CHECK_THROWS_AS(parse_operator("nabla-up-sum", q(1), q(0)), ParseError);
  CHECK_THROWS_AS(parse_operator("nabla", q(1), q(0)), ParseError);
  CHECK_THROWS_AS(parse_operator("nabla-left-rl", q(0), q(0)), DomainError);
}

}
