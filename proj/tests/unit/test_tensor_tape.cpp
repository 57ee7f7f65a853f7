#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <doctest.h>
#include <fixlab/error.hpp>
#include <fixlab/tape.hpp>
#include <fixlab/tensor.hpp>

using fixlab::Error;
using fixlab::ErrorCode;
using fixlab::Tape;
using fixlab::Tensor2D;

namespace {

// Finite-difference slope of a scalar tape expression with respect to one
// coordinate of one input tensor. Builds a fresh graph per probe.
double numeric_slope(const std::function<double(const Tensor2D&)>& f, Tensor2D at, std::size_t i,
                     double h = 1e-6) {
  at.data[i] += h;
  double up = f(at);
  at.data[i] -= 2.0 * h;
  double down = f(at);
  return (up - down) / (2.0 * h);
}

} // namespace

TEST_CASE("matmul multiplies by hand") {
  Tensor2D a = Tensor2D::from_rows({{1, 2, 3}, {4, 5, 6}});
  Tensor2D b = Tensor2D::from_rows({{7, 8}, {9, 10}, {11, 12}});
  Tape tape;
  Tape::Var va = tape.leaf(a);
  Tape::Var vb = tape.leaf(b);
  const Tensor2D& c = tape.value(tape.matmul(va, vb));
  REQUIRE(c.rows == 2);
  REQUIRE(c.cols == 2);
  CHECK(c.at(0, 0) == 1 * 7 + 2 * 9 + 3 * 11);
  CHECK(c.at(0, 1) == 1 * 8 + 2 * 10 + 3 * 12);
  CHECK(c.at(1, 0) == 4 * 7 + 5 * 9 + 6 * 11);
  CHECK(c.at(1, 1) == 4 * 8 + 5 * 10 + 6 * 12);
}

TEST_CASE("softmax rows sum to one and equal logits give uniform") {
  Tape tape;
  Tape::Var logits = tape.leaf(Tensor2D::from_rows({{0, 0, 0}, {1, 2, 3}}));
  const Tensor2D& p = tape.value(tape.softmax_rows(logits));
  for (std::size_t c = 0; c < 3; ++c) CHECK(p.at(0, c) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  for (std::size_t r = 0; r < 2; ++r) {
    double sum = p.at(r, 0) + p.at(r, 1) + p.at(r, 2);
    CHECK(std::fabs(sum - 1.0) < 1e-12);
  }
  CHECK(p.at(1, 0) < p.at(1, 1));
  CHECK(p.at(1, 1) < p.at(1, 2));
}

TEST_CASE("mean_pool_rows averages only the valid prefix") {
  Tape tape;
  Tape::Var x = tape.leaf(Tensor2D::from_rows({{2, 4}, {6, 8}, {10, 12}, {100, 100}, {100, 100}}));
  const Tensor2D& pooled = tape.value(tape.mean_pool_rows(x, 3));
  REQUIRE(pooled.rows == 1);
  REQUIRE(pooled.cols == 2);
  CHECK(pooled.at(0, 0) == doctest::Approx((2.0 + 6.0 + 10.0) / 3));
  CHECK(pooled.at(0, 1) == doctest::Approx((4.0 + 8.0 + 12.0) / 3));
}

TEST_CASE("backward through a quadratic gives the textbook slope") {
  // loss = sum(0.5 * x * x); d/dx at 3 is 3, at -2 is -2.
  Tape tape;
  Tape::Var x = tape.leaf(Tensor2D::from_rows({{3, -2}}));
  Tape::Var loss = tape.sum_all(tape.scale(tape.mul(x, x), 0.5));
  tape.backward(loss);
  CHECK(tape.value(loss).at(0, 0) == doctest::Approx(0.5 * 9 + 0.5 * 4));
  CHECK(tape.grad(x).at(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(tape.grad(x).at(0, 1) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("cross-entropy gradient is softmax minus one-hot") {
  Tensor2D logits = Tensor2D::from_rows({{0.3, -1.2, 2.0, 0.1}});
  Tape tape;
  Tape::Var v = tape.leaf(logits);
  Tape::Var loss = tape.softmax_cross_entropy(v, 2);
  tape.backward(loss);

  double denom = 0.0;
  for (double z : logits.data) denom += std::exp(z);
  for (std::size_t k = 0; k < 4; ++k) {
    double soft = std::exp(logits.data[k]) / denom;
    double expected = soft - (k == 2 ? 1.0 : 0.0);
    CHECK(tape.grad(v).at(0, k) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(tape.value(loss).at(0, 0) == doctest::Approx(-std::log(std::exp(2.0) / denom)));
}

TEST_CASE("cross-entropy stays finite for large logit magnitudes") {
  Tape tape;
  Tape::Var v = tape.leaf(Tensor2D::from_rows({{50.0, -50.0, 0.0}}));
  Tape::Var loss = tape.softmax_cross_entropy(v, 1);
  tape.backward(loss);
  CHECK(std::isfinite(tape.value(loss).at(0, 0)));
  CHECK(tape.value(loss).at(0, 0) == doctest::Approx(100.0).epsilon(1e-6));
  for (double g : tape.grad(v).data) CHECK(std::isfinite(g));
}

TEST_CASE("sigmoid bce at zero logits is ln 2 and its gradient is sigmoid minus target") {
  Tape tape;
  Tape::Var zeros = tape.leaf(Tensor2D(1, 4, 0.0));
  Tape::Var loss = tape.sigmoid_bce_mean(zeros, {1.0, 0.0, 1.0, 0.0});
  tape.backward(loss);
  CHECK(tape.value(loss).at(0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (std::size_t t = 0; t < 4; ++t) {
    double target = (t % 2 == 0) ? 1.0 : 0.0;
    // d/dz mean BCE = (sigmoid(z) - y) / T with sigmoid(0) = 0.5, T = 4.
    CHECK(tape.grad(zeros).at(0, t) == doctest::Approx((0.5 - target) / 4.0).epsilon(1e-10));
  }

  Tape tape2;
  Tape::Var big = tape2.leaf(Tensor2D::from_rows({{40.0, -40.0}}));
  Tape::Var l2 = tape2.sigmoid_bce_mean(big, {1.0, 0.0});
  tape2.backward(l2);
  CHECK(std::isfinite(tape2.value(l2).at(0, 0)));
  CHECK(tape2.value(l2).at(0, 0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("embedding lookup gathers rows and accumulates duplicate gradients") {
  Tensor2D table = Tensor2D::from_rows({{1, 2}, {3, 4}, {5, 6}});
  Tape tape;
  Tape::Var vt = tape.leaf(table);
  std::vector<int> ids = {2, 0, 2};
  Tape::Var rows = tape.embedding_lookup(vt, ids);
  const Tensor2D& gathered = tape.value(rows);
  REQUIRE(gathered.rows == 3);
  CHECK(gathered.at(0, 0) == 5);
  CHECK(gathered.at(1, 0) == 1);
  CHECK(gathered.at(2, 1) == 6);

  Tape::Var loss = tape.sum_all(rows);
  tape.backward(loss);
  // Row 2 was used twice, row 0 once, row 1 never.
  CHECK(tape.grad(vt).at(2, 0) == doctest::Approx(2.0));
  CHECK(tape.grad(vt).at(0, 0) == doctest::Approx(1.0));
  CHECK(tape.grad(vt).at(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("add_bias broadcasts over rows and its gradient is the column sum") {
  Tape tape;
  Tape::Var x = tape.leaf(Tensor2D::from_rows({{1, 2}, {3, 4}, {5, 6}}));
  Tape::Var bias = tape.leaf(Tensor2D::from_rows({{10, 20}}));
  Tape::Var out = tape.add_bias(x, bias);
  CHECK(tape.value(out).at(0, 0) == 11);
  CHECK(tape.value(out).at(2, 1) == 26);
  tape.backward(tape.sum_all(out));
  CHECK(tape.grad(bias).at(0, 0) == doctest::Approx(3.0));
  CHECK(tape.grad(bias).at(0, 1) == doctest::Approx(3.0));
  CHECK(tape.grad(x).at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("relu and sigmoid forward values") {
  Tape tape;
  Tape::Var x = tape.leaf(Tensor2D::from_rows({{-2, 0, 3}}));
  const Tensor2D& r = tape.value(tape.relu(x));
  CHECK(r.at(0, 0) == 0);
  CHECK(r.at(0, 1) == 0);
  CHECK(r.at(0, 2) == 3);
  const Tensor2D& s = tape.value(tape.sigmoid(x));
  CHECK(s.at(0, 1) == doctest::Approx(0.5));
  CHECK(s.at(0, 2) == doctest::Approx(1.0 / (1.0 + std::exp(-3.0))));
}

TEST_CASE("every differentiable op agrees with finite differences") {
  Tensor2D x0 = Tensor2D::from_rows({{0.4, -0.7, 1.3}, {0.9, 0.2, -1.1}});

  auto scalar_graph = [](const std::function<Tape::Var(Tape&, Tape::Var)>& body) {
    return std::pair{
        [body](const Tensor2D& in) {
          Tape tape;
          Tape::Var v = tape.leaf(in);
          return tape.value(body(tape, v)).at(0, 0);
        },
        [body](const Tensor2D& in) {
          Tape tape;
          Tape::Var v = tape.leaf(in);
          Tape::Var loss = body(tape, v);
          tape.backward(loss);
          return tape.grad(v);
        }};
  };

  std::vector<std::pair<const char*, std::function<Tape::Var(Tape&, Tape::Var)>>> bodies = {
      {"relu", [](Tape& t, Tape::Var v) { return t.sum_all(t.relu(v)); }},
      {"sigmoid", [](Tape& t, Tape::Var v) { return t.sum_all(t.sigmoid(v)); }},
      {"softmax", [](Tape& t, Tape::Var v) { return t.sum_all(t.mul(t.softmax_rows(v), v)); }},
      {"mean_pool", [](Tape& t, Tape::Var v) { return t.sum_all(t.mean_pool_rows(v, 2)); }},
      {"scale", [](Tape& t, Tape::Var v) { return t.sum_all(t.scale(t.mul(v, v), -1.5)); }},
  };
  for (auto& [name, body] : bodies) {
    CAPTURE(name);
    auto [value, grad] = scalar_graph(body);
    Tensor2D analytic = grad(x0);
    for (std::size_t i = 0; i < x0.data.size(); ++i) {
      double numeric = numeric_slope(value, x0, i);
      CHECK(analytic.data[i] == doctest::Approx(numeric).epsilon(1e-5));
    }
  }
}

TEST_CASE("shape and state violations throw typed errors") {
  Tape tape;
  Tape::Var a = tape.leaf(Tensor2D(2, 3, 1.0));
  Tape::Var b = tape.leaf(Tensor2D(2, 3, 1.0));
  Tape::Var c = tape.leaf(Tensor2D(3, 2, 1.0));

  CHECK_THROWS_AS(tape.matmul(a, b), Error);
  CHECK_THROWS_AS(tape.add(a, c), Error);
  try {
    tape.add(a, c);
    FAIL("expected a shape error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }

  // backward demands a scalar loss
  try {
    tape.backward(tape.add(a, b));
    FAIL("expected a non-scalar-loss error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }

  // ... and a tape that has actually recorded something
  Tape untouched;
  try {
    untouched.backward(Tape::Var{});
    FAIL("expected a not-evaluated error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GraphNotEvaluated);
  }
}

TEST_CASE("non-finite results are rejected at the producing op") {
  Tape tape;
  Tape::Var huge = tape.leaf(Tensor2D(1, 2, 1e308));
  try {
    tape.add(huge, huge); // overflows to infinity
    FAIL("expected a finiteness error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("constants receive no gradient") {
  Tape tape;
  Tape::Var x = tape.leaf(Tensor2D(1, 2, 2.0));
  Tape::Var k = tape.constant(Tensor2D(1, 2, 5.0));
  Tape::Var loss = tape.sum_all(tape.mul(x, k));
  tape.backward(loss);
  CHECK(tape.grad(x).at(0, 0) == doctest::Approx(5.0));
  CHECK(tape.value(loss).at(0, 0) == doctest::Approx(20.0));
}
