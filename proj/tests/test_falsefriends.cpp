#include <doctest.h>

#include <cmath>
#include <random>

#include "cognate/alignment.hpp"
#include "cognate/errors.hpp"
#include "cognate/falsefriends.hpp"
#include "fixtures.hpp"

using namespace cognate;

namespace {

std::vector<double> at_angle(double cosine) { return {cosine, std::sqrt(1.0 - cosine * cosine), 0.0}; }

CognateSet pair_set(const std::string& a, const std::string& b) {
  return CognateSet("", LanguageTag("la"), {{LanguageTag("fr"), a}, {LanguageTag("es"), b}});
}

FalseFriendReport with_falseness(double f) {
  FalseFriendReport r;
  r.is_false_friend = f > 0;
  r.falseness = f;
  return r;
}

}  // namespace

TEST_CASE("identical cognate vectors are not false friends") {
  const auto fr = fixtures::make_space("fr", {{"huit", {0.2, 0.9, 0.1}}});
  const auto es = fixtures::make_space("es", {{"ocho", {0.2, 0.9, 0.1}}, {"nueve", {0.1, 0.8, 0.4}}});
  const auto r = detect("huit", "ocho", fr, es);
  CHECK_FALSE(r.is_false_friend);
  CHECK(r.falseness == 0.0);
  CHECK_FALSE(r.correction.has_value());
  CHECK(r.best_similarity >= r.cognate_similarity);
}

TEST_CASE("a closer lang2 word makes a false friend and becomes the correction") {
  const auto fr = fixtures::make_space("fr", {{"prix", {1, 0, 0}}});
  const auto es = fixtures::make_space("es", {{"prez", at_angle(0.3)}, {"x", at_angle(0.8)}, {"y", at_angle(0.1)}});
  const auto r = detect("prix", "prez", fr, es);
  CHECK(r.is_false_friend);
  REQUIRE(r.correction.has_value());
  CHECK(*r.correction == "x");
  CHECK(r.falseness == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.cognate_similarity == doctest::Approx(0.3));
  CHECK(r.best_similarity == doctest::Approx(0.8));
}

TEST_CASE("a tie between c2 and another word keeps c2") {
  const auto fr = fixtures::make_space("fr", {{"c1", {1, 0, 0}}});
  const auto es = fixtures::make_space("es", {{"other", at_angle(0.6)}, {"c2", at_angle(0.6)}, {"far", at_angle(-0.2)}});
  const auto r = detect("c1", "c2", fr, es);
  CHECK_FALSE(r.is_false_friend);
  CHECK(r.falseness == 0.0);
}

TEST_CASE("alternates carry search_k neighbours") {
  const auto fr = fixtures::make_space("fr", {{"c1", {1, 0, 0}}});
  const auto es = fixtures::make_space("es", {{"a", at_angle(0.1)}, {"b", at_angle(0.9)}, {"c", at_angle(0.5)}});
  const auto r = detect("c1", "a", fr, es, 2);
  REQUIRE(r.alternates.size() == 2);
  CHECK(r.alternates[0].word == "b");
  CHECK(r.alternates[1].word == "c");
  CHECK(detect("c1", "a", fr, es, 10).alternates.size() == 3);
}

TEST_CASE("detect errors") {
  const auto fr = fixtures::make_space("fr", {{"c1", {1, 0}}});
  const auto es = fixtures::make_space("es", {{"c2", {0, 1}}});
  CHECK_THROWS_AS(detect("nope", "c2", fr, es), InputError);
  CHECK_THROWS_AS(detect("c1", "nope", fr, es), InputError);
  CHECK_THROWS_AS(detect("c1", "c2", fr, es, 0), InputError);
  const auto raw = fixtures::make_space("es", {{"c2", {0, 1}}}, false);
  CHECK_THROWS_AS(detect("c1", "c2", fr, raw), InputError);
}

TEST_CASE("classify") {
  CHECK(classify(with_falseness(0.0), 0.3).kind == Falseness::true_cognate);
  CHECK(classify(with_falseness(0.67), 0.3).kind == Falseness::hard);
  CHECK(classify(with_falseness(0.14), 0.3).kind == Falseness::soft);
  CHECK(classify(with_falseness(0.3), 0.3).kind == Falseness::hard);
  CHECK(classify(with_falseness(0.14), 0.3).threshold == 0.3);
  CHECK_THROWS_AS(classify(with_falseness(0.1), 0.0), InputError);
  CHECK_THROWS_AS(classify(with_falseness(0.1), -1.0), InputError);
}

TEST_CASE("property: raising the threshold never turns soft into hard") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const auto r = with_falseness(u(rng));
    const double t1 = 0.01 + u(rng);
    const double t2 = t1 + u(rng);
    const auto low = classify(r, t1).kind;
    const auto high = classify(r, t2).kind;
    if (low == Falseness::soft) CHECK(high == Falseness::soft);
    if (high == Falseness::hard) CHECK(low == Falseness::hard);
  }
}

TEST_CASE("detect_batch sorts by descending falseness, stable on ties") {
  // c1 words all point along e1; each c2 sits at a chosen cosine and a
  // shared decoy sits at cosine 0.9.
  const auto fr = fixtures::make_space("fr", {{"a", {1, 0, 0}}, {"b", {1, 0, 0}}, {"c", {1, 0, 0}}, {"d", {1, 0, 0}}});
  const auto es = fixtures::make_space(
      "es", {{"decoy", at_angle(0.9)}, {"a2", at_angle(0.9)}, {"b2", at_angle(0.4)}, {"c2", at_angle(0.7)}, {"d2", at_angle(0.4)}});
  const std::vector<CognateSet> sets{pair_set("a", "a2"), pair_set("b", "b2"), pair_set("c", "c2"),
                                     pair_set("d", "d2"), pair_set("zz", "a2")};
  const SpaceTable spaces{{LanguageTag("fr"), &fr}, {LanguageTag("es"), &es}};
  const auto batch = detect_batch(sets, LanguageTag("fr"), LanguageTag("es"), spaces, 0.3);
  REQUIRE(batch.reports.size() == 4);
  CHECK(batch.skipped_oov == 1);
  CHECK(batch.reports[0].report.word1 == "b");
  CHECK(batch.reports[1].report.word1 == "d");
  CHECK(batch.reports[2].report.word1 == "c");
  CHECK(batch.reports[3].report.word1 == "a");
  CHECK(batch.reports[0].report.falseness == doctest::Approx(0.5));
  CHECK(batch.reports[2].report.falseness == doctest::Approx(0.2));
  CHECK(batch.reports[3].report.falseness == 0.0);
  CHECK(batch.reports[0].falseness_class.kind == Falseness::hard);
  CHECK(batch.reports[2].falseness_class.kind == Falseness::soft);
  CHECK(batch.reports[3].falseness_class.kind == Falseness::true_cognate);
}

TEST_CASE("detect_batch with nothing in vocabulary returns an empty list") {
  set_warnings_enabled(false);
  const auto fr = fixtures::make_space("fr", {{"a", {1, 0}}});
  const auto es = fixtures::make_space("es", {{"b", {0, 1}}});
  const std::vector<CognateSet> sets{pair_set("x", "y"), pair_set("p", "q")};
  const SpaceTable spaces{{LanguageTag("fr"), &fr}, {LanguageTag("es"), &es}};
  const auto batch = detect_batch(sets, LanguageTag("fr"), LanguageTag("es"), spaces);
  CHECK(batch.reports.empty());
  CHECK(batch.skipped_oov == 2);
  set_warnings_enabled(true);
}

TEST_CASE("property: detect agrees with a brute-force scan") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 2 + rng() % 10;
    const std::size_t n1 = 1 + rng() % 50;
    const std::size_t n2 = 1 + rng() % 400;
    std::normal_distribution<double> g;
    Eigen::MatrixXd m1(n1, d), m2(n2, d);
    for (auto* m : {&m1, &m2}) {
      for (Eigen::Index i = 0; i < m->rows(); ++i) {
        for (Eigen::Index j = 0; j < m->cols(); ++j) (*m)(i, j) = g(rng);
      }
    }
    const std::size_t c1 = rng() % n1;
    const std::size_t c2 = rng() % n2;
    const auto s1 = fixtures::make_space("fr", m1);
    const auto s2 = fixtures::make_space("es", m2);
    const auto oracle = fixtures::brute_force_verdict(m1, c1, m2, c2);
    const auto r = detect(s1.word(c1), s2.word(c2), s1, s2);
    CHECK(r.is_false_friend == oracle.is_false_friend);
    if (oracle.is_false_friend) CHECK(*r.correction == s2.word(oracle.best_index));
    CHECK(std::abs(r.falseness - oracle.falseness) < 1e-9);
    CHECK(r.falseness >= 0.0);
    CHECK(r.best_similarity >= r.cognate_similarity);
  }
}

TEST_CASE("property: a joint orthogonal map leaves verdicts unchanged") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 3 + rng() % 8;
    const auto s1 = fixtures::make_space("fr", fixtures::random_unit_rows(20, d, rng));
    const auto s2 = fixtures::make_space("es", fixtures::random_unit_rows(200, d, rng));
    const Matrix q = fixtures::random_orthogonal(d, rng);
    const auto t1 = normalize(apply_alignment(s1, AlignmentMap(LanguageTag("fr"), LanguageTag("xx"), q)));
    const auto t2 = normalize(apply_alignment(s2, AlignmentMap(LanguageTag("es"), LanguageTag("xx"), q)));
    for (int p = 0; p < 10; ++p) {
      const auto w1 = s1.word(rng() % 20);
      const auto w2 = s2.word(rng() % 200);
      const auto a = detect(w1, w2, s1, s2);
      const auto b = detect(w1, w2, t1, t2);
      CHECK(a.is_false_friend == b.is_false_friend);
      CHECK(a.correction == b.correction);
      CHECK(std::abs(a.falseness - b.falseness) < 1e-6);
    }
  }
}
