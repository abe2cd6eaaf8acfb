#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "helpers.hpp"

using namespace irvaudit;
using test_helpers::cid;

namespace {

std::string serialize(const Election& e) {
    std::ostringstream os;
    serialize_election_json(os, e);
    return os.str();
}

Election parse_json_text(const std::string& text) {
    std::istringstream in(text);
    return parse_election_json(in);
}

Election parse_csv_text(const std::string& text) {
    std::istringstream in(text);
    return parse_election_csv(in);
}

}  // namespace

TEST_CASE("CSV body of the worked example parses to 60000 ballots") {
    Election e = test_helpers::load_data("table1.csv");
    CHECK(e.total_ballots() == 60000);
    CHECK(e.candidate_count() == 4);
    CHECK(e.ballots().size() == 6);
    auto f = first_preferences(e);
    CHECK(f[cid(e, "c1")] == 26000);
    CHECK(f[cid(e, "c3")] == 9000);
}

TEST_CASE("CSV and JSON encodings of the same election agree") {
    Election csv = test_helpers::load_data("table1.csv");
    Election json = test_helpers::table1();
    CHECK(tabulate_irv(csv).winner() == cid(csv, "c4"));
    for (const std::string& name : json.candidates()) {
        auto fj = first_preferences(json)[cid(json, name)];
        auto fc = first_preferences(csv)[cid(csv, name)];
        CHECK(fj == fc);
    }
}

TEST_CASE("parse errors carry positions and reasons") {
    CHECK_THROWS_WITH(parse_json_text(R"({"candidates":["a"],"ballots":[]})"),
                      "no ballots");
    CHECK_THROWS_WITH(
        parse_json_text(
            R"({"candidates":["a"],"ballots":[{"ranking":["b"],"count":1}]})"),
        Catch::Matchers::ContainsSubstring("unknown candidate name: b"));
    CHECK_THROWS_WITH(
        parse_json_text(
            R"({"candidates":["a","b"],"ballots":[{"ranking":["a","a"],"count":1}]})"),
        Catch::Matchers::ContainsSubstring("duplicate candidate"));
    CHECK_THROWS_WITH(
        parse_json_text(
            R"({"candidates":["a"],"ballots":[{"ranking":[],"count":1}]})"),
        Catch::Matchers::ContainsSubstring("empty ranking"));
    CHECK_THROWS_WITH(
        parse_json_text(
            R"({"candidates":["a"],"ballots":[{"ranking":["a"],"count":0}]})"),
        Catch::Matchers::ContainsSubstring("count"));

    CHECK_THROWS_WITH(parse_csv_text("nope\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(parse_csv_text("ranking,count\na;b\n"),
                      Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse_csv_text("ranking,count\na;a,3\n"),
                      Catch::Matchers::ContainsSubstring("duplicate candidate"));
    CHECK_THROWS_WITH(parse_csv_text("ranking,count\na;b,x\n"),
                      Catch::Matchers::ContainsSubstring("malformed count"));
}

TEST_CASE("metadata round-trips") {
    Election e = test_helpers::table1();
    REQUIRE(e.metadata().reported_winner);
    CHECK(*e.metadata().reported_winner == "c4");
    Election back = parse_json_text(serialize(e));
    CHECK(back.metadata().reported_winner == e.metadata().reported_winner);
}

TEST_CASE("serialize-parse round trip is the canonical form") {
    Rng rng(21);
    for (int t = 0; t < 100; ++t) {
        // Random 5-candidate election with deliberate duplicate classes and
        // scrambled class order.
        std::vector<std::string> names{"c1", "c2", "c3", "c4", "c5"};
        std::vector<BallotClass> classes;
        const int k = 2 + static_cast<int>(rng.uniform_below(6));
        for (int i = 0; i < k; ++i) {
            Ranking perm{0, 1, 2, 3, 4};
            for (int j = 4; j > 0; --j)
                std::swap(perm[static_cast<std::size_t>(j)],
                          perm[rng.uniform_below(static_cast<std::uint64_t>(j + 1))]);
            perm.resize(1 + rng.uniform_below(5));
            classes.push_back({perm, static_cast<Count>(1 + rng.uniform_below(50))});
            if (rng.bernoulli(0.4))  // duplicate class to exercise merging
                classes.push_back(
                    {classes.back().ranking,
                     static_cast<Count>(1 + rng.uniform_below(50))});
        }
        Election e(names, classes);
        CHECK(serialize(parse_json_text(serialize(e))) ==
              serialize(e.canonical()));
    }
}

TEST_CASE("canonical form merges duplicates and sorts classes") {
    Election e({"a", "b"},
               {{Ranking{1}, 2}, {Ranking{0, 1}, 3}, {Ranking{1}, 5}});
    Election c = e.canonical();
    REQUIRE(c.ballots().size() == 2);
    CHECK(c.ballots()[0].ranking == Ranking{0, 1});
    CHECK(c.ballots()[1].ranking == Ranking{1});
    CHECK(c.ballots()[1].count == 7);
    CHECK(c.total_ballots() == e.total_ballots());
}
