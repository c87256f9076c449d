#include <doctest.h>

#include <string>

#include "support.hpp"

using namespace ncpa;

TEST_CASE("property suites on a random corpus") {
  const auto corpus = ncpa::testing::make_corpus(50, 2024);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    for (const auto& rep : ncpa::testing::corpus_properties(corpus[k], k)) {
      INFO("problem " << k << ", check " << rep.name << ": " << rep.note);
      CHECK(rep.passed);
      CHECK(rep.samples_tested > 0);
    }
  }
}

TEST_CASE("corpus generation is reproducible") {
  const auto a = ncpa::testing::make_corpus(5, 9);
  const auto b = ncpa::testing::make_corpus(5, 9);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].r == b[k].r);
    REQUIRE(a[k].functions.size() == b[k].functions.size());
    for (double x : {-1.0, 0.0, 2.0}) CHECK(a[k].functions[0](x) == b[k].functions[0](x));
  }
}

TEST_CASE("verify suite on a corpus problem that crosses no threshold") {
  const auto corpus = ncpa::testing::make_corpus(3, 77);
  for (const auto& p : corpus) {
    const std::vector<InputFunction> fs(p.functions.begin(), p.functions.end());
    const SuiteReport suite = run_verify_suite(fs, p.r, DeltaSpec::symmetric_quadratic(),
                                               ncpa::testing::corpus_grid(), {}, 1);
    for (const auto& c : suite.checks) {
      INFO(c.name << ": " << c.note);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("verify suite stops at a threshold failure") {
  const MaxQuadFunction steep(1, {QuadraticPiece(-3.0, 0.0, 0.0), QuadraticPiece(-4.0, 1.0, -1.0)});
  const SuiteReport suite = run_verify_suite({steep}, 2.0, DeltaSpec::symmetric_quadratic(),
                                             GridSpec::line(-2.0, 2.0, 81), {}, 0);
  CHECK_FALSE(suite.passed);
  REQUIRE(suite.checks.size() == 1);
  CHECK(suite.checks[0].name == "prox_threshold");
  CHECK(suite.checks[0].note.find("below threshold") != std::string::npos);
}
