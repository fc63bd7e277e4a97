#include "doctest.h"
#include "gamet/corpus.hpp"
#include "gamet/game.hpp"
#include "gamet/game_io.hpp"
#include "support.hpp"

using namespace gamet;

TEST_CASE("corpus: six named games, unknown names rejected") {
  CHECK(corpus_names() ==
        std::vector<std::string>{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"});
  CHECK(is_corpus_name("fig3"));
  CHECK_FALSE(is_corpus_name("fig7"));
  CHECK_THROWS_AS(builtin_game("fig7"), std::invalid_argument);
}

TEST_CASE("corpus: every entry validates and carries tagged expectations") {
  for (const std::string& name : corpus_names()) {
    CorpusEntry entry = builtin_game(name);
    CHECK(validate_structure(entry.game).empty());
    CHECK_FALSE(entry.notes.empty());
    CHECK_FALSE(entry.expectations.empty());
    for (const ExpectedResult& r : entry.expectations) {
      CHECK((r.provenance == "stated" || r.provenance == "derived" ||
             r.provenance == "direct"));
      CHECK_FALSE(r.anchor.empty());
    }
  }
}

TEST_CASE("fig1 carries the published tables verbatim") {
  GameStructure g = testsupport::corpus("fig1");
  int w = g.state_index("w"), u = g.state_index("u");
  int s = g.state_index("s"), t = g.state_index("t");
  auto entry = [&](int state, int i1, int i2) { return g.transition(state, i1, i2); };
  // t rows: (b,f) (b,g) (c,f) (c,g), w-mass then u-mass complement
  CHECK(entry(t, 0, 0)[w] == doctest::Approx(1.0 / 9.0));
  CHECK(entry(t, 0, 0)[u] == doctest::Approx(8.0 / 9.0));
  CHECK(entry(t, 0, 1)[w] == doctest::Approx(5.0 / 9.0));
  CHECK(entry(t, 0, 1)[u] == doctest::Approx(4.0 / 9.0));
  CHECK(entry(t, 1, 0)[w] == doctest::Approx(4.0 / 9.0));
  CHECK(entry(t, 1, 0)[u] == doctest::Approx(5.0 / 9.0));
  CHECK(entry(t, 1, 1)[w] == doctest::Approx(8.0 / 9.0));
  CHECK(entry(t, 1, 1)[u] == doctest::Approx(1.0 / 9.0));
  CHECK(entry(s, 0, 0)[w] == doctest::Approx(1.0 / 3.0));
  CHECK(entry(s, 0, 1)[w] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("fig5 is penny matching with 2- and 3-sided pennies") {
  GameStructure g = testsupport::corpus("fig5");
  int s = g.state_index("s"), t = g.state_index("t");
  int u = g.state_index("u"), v = g.state_index("v");
  CHECK(g.moves1[s].size() == 2);
  CHECK(g.moves2[s].size() == 2);
  CHECK(g.moves1[t].size() == 3);
  for (size_t i = 0; i < g.moves1[t].size(); ++i)
    for (size_t j = 0; j < g.moves2[t].size(); ++j) {
      const Distribution& d = g.transition(t, static_cast<int>(i), static_cast<int>(j));
      CHECK(d[i == j ? u : v] == doctest::Approx(1.0));
    }
  CHECK(observation_distance(g, u, v) == 1.0);
  CHECK(observation_distance(g, s, t) == 0.0);
}

TEST_CASE("builtin text stays parseable with provenance comments") {
  for (const std::string& name : corpus_names()) {
    std::string text = builtin_game_text(name);
    CHECK(text.find("//") != std::string::npos);  // provenance notes in place
    LoadedGame loaded = parse_game_text(text);
    CHECK(loaded.violations.empty());
  }
}

TEST_CASE("run_suite: default flags pass everything") {
  SuiteReport report = run_suite(0.05, 1e-6);
  CHECK(report.all_pass());
  CHECK(report.failed == 0);
  CHECK(report.approx_failed == 0);
  CHECK(report.passed == static_cast<int>(report.rows.size()));
}

TEST_CASE("run_suite: the only filter restricts to one entry") {
  SuiteReport report = run_suite(0.05, 1e-6, "fig1");
  CHECK_FALSE(report.rows.empty());
  for (const SuiteRow& row : report.rows) CHECK(row.id.rfind("fig1/", 0) == 0);
  CHECK(report.rows.size() == builtin_game("fig1").expectations.size());
}

TEST_CASE("run_suite: a coarse mesh downgrades misses to approx failures") {
  SuiteReport report = run_suite(0.5, 1e-6);
  CHECK(report.failed == 0);  // every miss is explained by the coarse grid
  CHECK(report.approx_failed >= 1);
  bool labeled = false;
  for (const SuiteRow& row : report.rows)
    if (row.outcome == RowOutcome::ApproxFail &&
        row.detail.find("certified") != std::string::npos)
      labeled = true;
  CHECK(labeled);
}
