#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cognate/embedding_store.hpp"
#include "cognate/errors.hpp"
#include "fixtures.hpp"

using namespace cognate;

namespace {

EmbeddingSpace parse(const std::string& text, std::optional<std::size_t> limit = std::nullopt,
                     LoadStats* stats = nullptr) {
  std::istringstream in(text);
  return parse_embeddings(in, LanguageTag("xx"), limit, stats);
}

}  // namespace

TEST_CASE("load_embeddings parses the text dump in file order") {
  const auto space = parse("2 3\na 1 0 0\nb 0 2 0");
  CHECK(space.vocab() == std::vector<std::string>{"a", "b"});
  CHECK(space.dim() == 3);
  CHECK_FALSE(space.normalized());
  CHECK(space.vectors()(0, 0) == 1.0);
  CHECK(space.vectors()(1, 1) == 2.0);
  CHECK(space.vectors()(1, 0) == 0.0);
}

TEST_CASE("limit keeps a prefix") {
  const auto space = parse("2 3\na 1 0 0\nb 0 2 0", 1);
  CHECK(space.vocab() == std::vector<std::string>{"a"});
}

TEST_CASE("duplicate tokens keep the first occurrence") {
  set_warnings_enabled(false);
  LoadStats stats;
  const auto space = parse("3 2\nx 1 0\nx 9 9\ny 0 1", std::nullopt, &stats);
  set_warnings_enabled(true);
  CHECK(space.vocab() == std::vector<std::string>{"x", "y"});
  CHECK(space.vectors()(0, 0) == 1.0);
  CHECK(stats.duplicates_dropped == 1);
}

TEST_CASE("CRLF line endings are tolerated") {
  const auto space = parse("2 2\r\na 1 0\r\nb 0 1\r\n");
  CHECK(space.size() == 2);
  CHECK(space.vectors()(1, 1) == 1.0);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("hello\na 1 0"), InputError);
  CHECK_THROWS_AS(parse("2 0\na\n"), InputError);
  CHECK_THROWS_AS(parse("2 -3\na 1 2 3\n"), InputError);
  CHECK_THROWS_AS(parse("0 3\n"), InputError);
  try {
    parse("3 2\na 1 0\nb 1 2 3\nc 0 1");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("1 2\na 1 zz\n"), InputError);
  CHECK_THROWS_AS(parse("1 2\na 1 nan\n"), InputError);
  CHECK_THROWS_AS(load_embeddings("/nonexistent/file.vec", LanguageTag("xx")), InputError);
}

TEST_CASE("normalize scales rows to unit norm") {
  const auto space = normalize(fixtures::make_space("xx", {{"a", {0, 2, 0}}, {"b", {3, 4, 0}}, {"c", {1, 0, 0}}}, false));
  CHECK(space.normalized());
  CHECK(space.vectors()(0, 1) == doctest::Approx(1.0));
  CHECK(space.vectors()(1, 0) == doctest::Approx(0.6));
  CHECK(space.vectors()(1, 1) == doctest::Approx(0.8));
  CHECK(space.vectors()(2, 0) == 1.0);
  CHECK(space.vocab() == std::vector<std::string>{"a", "b", "c"});

  const auto twice = normalize(space);
  CHECK((twice.vectors() - space.vectors()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("normalize rejects zero rows and names the word") {
  const auto space = fixtures::make_space("xx", {{"ok", {1, 0}}, {"zero", {0, 0}}}, false);
  try {
    normalize(space);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("zero") != std::string::npos);
  }
}

TEST_CASE("lookup: exact, then lowercase fold, else absent") {
  const auto space = fixtures::make_space(
      "es", {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {1, 1}}, {"d", {1, 2}}, {"e", {2, 1}}, {"casa", {3, 1}}, {"Casa", {1, 3}}},
      false);
  CHECK(lookup(space, "casa")->isApprox(space.vectors().row(5).transpose()));
  CHECK(lookup(space, "Casa")->isApprox(space.vectors().row(6).transpose()));
  CHECK_FALSE(lookup(space, "zzz").has_value());

  const auto only_lower = fixtures::make_space("es", {{"casa", {1, 0}}}, false);
  REQUIRE(lookup(only_lower, "CASA").has_value());
  CHECK(only_lower.find("Casa") == std::optional<std::size_t>(0));
}

TEST_CASE("fold_lowercase handles accented capitals") {
  CHECK(fold_lowercase("ÉCOLE") == "école");
  CHECK(fold_lowercase("Ştiinţă") == "ştiinţă");
  CHECK(fold_lowercase("Șir") == "șir");
  CHECK(fold_lowercase("ÑANDÚ") == "ñandú");
  CHECK(fold_lowercase("×") == "×");
}

TEST_CASE("nearest_neighbor basics") {
  const auto space = fixtures::make_space("xx", {{"a", {1, 0, 0}}, {"b", {0, 1, 0}}, {"c", {0, 0, 1}}});
  const auto hits = nearest_neighbor(space, space.row(1), 1);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].word == "b");
  CHECK(hits[0].similarity == doctest::Approx(1.0));

  const auto pq = fixtures::make_space("xx", {{"p", {1, 0}}, {"q", {0, 1}}});
  const std::vector<double> query{0.8, 0.6};
  const auto ranked = nearest_neighbor(pq, query, 2);
  CHECK(ranked[0].word == "p");
  CHECK(ranked[0].similarity == doctest::Approx(0.8));
  CHECK(ranked[1].similarity == doctest::Approx(0.6));
}

TEST_CASE("nearest_neighbor ties go to the lower index") {
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({"w" + std::to_string(i), {1.0 + i, 2.0 - 0.1 * i, 0.5}});
  rows[2].second = rows[7].second = {0, 0, 1};
  const auto space = fixtures::make_space("xx", rows);
  const auto hits = nearest_neighbor(space, space.row(7), 2);
  CHECK(hits[0].index == 2);
  CHECK(hits[1].index == 7);
}

TEST_CASE("nearest_neighbor errors") {
  const auto raw = fixtures::make_space("xx", {{"a", {1, 0}}, {"b", {0, 1}}}, false);
  const std::vector<double> q{1, 0};
  CHECK_THROWS_AS(nearest_neighbor(raw, q, 1), InputError);
  const auto space = normalize(raw);
  CHECK_THROWS_AS(nearest_neighbor(space, q, 0), InputError);
  CHECK_THROWS_AS(nearest_neighbor(space, q, 3), InputError);
  const std::vector<double> not_unit{2, 0};
  CHECK_THROWS_AS(nearest_neighbor(space, not_unit, 1), InputError);
}

TEST_CASE("property: full nearest_neighbor is a permutation with non-increasing scores") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    const std::size_t d = 1 + rng() % 12;
    const auto space = fixtures::make_space("xx", fixtures::random_unit_rows(n, d, rng));
    const std::size_t probe = rng() % n;
    const auto hits = nearest_neighbor(space, space.row(probe), n);
    REQUIRE(hits.size() == n);
    std::vector<int> seen(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++seen[hits[i].index];
      if (i > 0) CHECK(hits[i - 1].similarity >= hits[i].similarity);
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    CHECK(hits[0].similarity == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(hits[0].index <= probe);
  }
}

TEST_CASE("property: serialize then parse round-trips to printed precision") {
  std::mt19937_64 rng(5);
  const auto m = fixtures::random_unit_rows(40, 7, rng);
  const auto space = fixtures::make_space("xx", m, false);
  std::ostringstream out;
  serialize_embeddings(space, out);
  std::istringstream in(out.str());
  const auto back = parse_embeddings(in, LanguageTag("xx"));
  CHECK(back.vocab() == space.vocab());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double a = space.vectors()(i, j);
      CHECK(std::abs(back.vectors()(i, j) - a) <= 5e-6 * std::max(1.0, std::abs(a)));
    }
  }
  std::ostringstream again;
  serialize_embeddings(back, again);
  CHECK(again.str() == out.str());
}

TEST_CASE("language tags are lowercase and non-empty") {
  CHECK_THROWS_AS(LanguageTag(""), InputError);
  CHECK_THROWS_AS(LanguageTag("ES"), InputError);
  CHECK(LanguageTag("pt").code() == "pt");
}
