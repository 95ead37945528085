#include <doctest.h>

#include <string>

#include "saddlekit/config.hpp"

using namespace saddlekit;

namespace {

const char* kProblemText = R"(format_version = 1
dims = 2 1

[g]
mu = 1
L = 4
A = 1 0 0 4   # row-major
a = 1 -1

[fstar]
variant = zero

[k]
K = 1 2
L_xy = 2.5
mu_xy = 2.2
)";

}  // namespace

TEST_CASE("KvFile parses sections, comments, and values") {
  auto kv = KvFile::parse(kProblemText);
  kv.require_format_version();
  CHECK(kv.has_section("g"));
  CHECK(kv.get_double("g", "mu") == 1);
  CHECK(kv.get_string("fstar", "variant") == "zero");
  Matrix A = kv.get_matrix("g", "A", 2, 2);
  CHECK(A(1, 1) == 4);
  CHECK(A(0, 1) == 0);
  Vector a = kv.get_vector("g", "a", 2);
  CHECK(a(1) == -1);
  CHECK_FALSE(kv.get_optional("g", "missing").has_value());
}

TEST_CASE("format_version is mandatory and pinned") {
  auto missing = KvFile::parse("x = 1\n");
  CHECK_THROWS_AS(missing.require_format_version(), ConfigError);
  auto wrong = KvFile::parse("format_version = 2\n");
  CHECK_THROWS_AS(wrong.require_format_version(), ConfigError);
}

TEST_CASE("errors carry line numbers") {
  CHECK_THROWS_WITH_AS(KvFile::parse("a = 1\nbroken line\n"),
                       doctest::Contains("line 2"), ConfigError);
  auto kv = KvFile::parse("a = 1\nb = not_a_number\n");
  CHECK_THROWS_WITH_AS(kv.get_double("", "b"), doctest::Contains("line 2"),
                       ConfigError);
  CHECK_THROWS_AS(KvFile::parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(KvFile::parse("[unclosed\n"), ConfigError);
}

TEST_CASE("unknown keys are rejected after consumption") {
  auto kv = KvFile::parse("format_version = 1\nknown = 3\nstray = 1\n");
  kv.require_format_version();
  kv.get_double("", "known");
  CHECK_THROWS_WITH_AS(kv.reject_unconsumed(), doctest::Contains("stray"),
                       ConfigError);
}

TEST_CASE("load_problem builds the declared instance") {
  auto kv = KvFile::parse(kProblemText);
  kv.require_format_version();
  auto p = load_problem(kv);
  kv.reject_unconsumed();
  CHECK(p.d_x == 2);
  CHECK(p.d_y == 1);
  CHECK(p.g.L == 4);
  CHECK(p.k.K(0, 1) == 2);
  CHECK(p.k.mu_xy == doctest::Approx(2.2));
  Vector x(2);
  x << 1, 1;
  CHECK(apply_k(p, x)(0) == doctest::Approx(3));
}

TEST_CASE("load_problem quadratic dual variant") {
  std::string text = R"(format_version = 1
dims = 1 1
[g]
mu = 1
L = 1
A = 1
a = 0
[fstar]
variant = quadratic
mu_y = 2
B = 2
b = 1
[k]
K = 1
L_xy = 1
mu_xy = 1
)";
  auto kv = KvFile::parse(text);
  kv.require_format_version();
  auto p = load_problem(kv);
  kv.reject_unconsumed();
  CHECK(p.fstar.variant == DualVariant::Quadratic);
  CHECK(p.fstar.mu_y == 2);
  // prox_{s F*}(v) with F* = x^2 - x at s=1: (2+1)^{-1}(v+1)
  CHECK(p.fstar.prox(Vector::Constant(1, 5.0), 1.0)(0) == doctest::Approx(2.0));
}

TEST_CASE("problem serialization round-trips") {
  auto kv = KvFile::parse(kProblemText);
  kv.require_format_version();
  auto p = load_problem(kv);
  std::string text = problem_to_string(p);
  auto kv2 = KvFile::parse(text);
  kv2.require_format_version();
  auto q = load_problem(kv2);
  kv2.reject_unconsumed();
  CHECK((p.g.quad->A - q.g.quad->A).norm() == 0);
  CHECK((p.k.dense() - q.k.dense()).norm() == 0);
  CHECK(q.k.L_xy == p.k.L_xy);
}

TEST_CASE("dims guardrails") {
  auto kv = KvFile::parse("format_version = 1\ndims = 0 1\n");
  kv.require_format_version();
  CHECK_THROWS_AS(load_problem(kv), ConfigError);
}
