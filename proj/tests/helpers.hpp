#pragma once

#include <fstream>

#include <irvaudit/irvaudit.hpp>

namespace test_helpers {

inline irvaudit::Election make_election(
    std::vector<std::string> names,
    std::vector<std::pair<std::vector<std::string>, irvaudit::Count>> classes,
    irvaudit::ElectionMetadata metadata = {}) {
    std::vector<irvaudit::BallotClass> ballots;
    for (auto& [ranking_names, count] : classes) {
        irvaudit::BallotClass bc;
        bc.count = count;
        for (const std::string& nm : ranking_names) {
            auto it = std::find(names.begin(), names.end(), nm);
            if (it == names.end()) throw std::runtime_error("bad test name");
            bc.ranking.push_back(
                static_cast<irvaudit::CandidateId>(it - names.begin()));
        }
        ballots.push_back(std::move(bc));
    }
    return irvaudit::Election(std::move(names), std::move(ballots),
                              std::move(metadata));
}

inline irvaudit::Election load_data(const std::string& filename) {
    const std::string path = std::string(IRVAUDIT_DATA_DIR) + "/" + filename;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    if (filename.size() > 4 &&
        filename.compare(filename.size() - 4, 4, ".csv") == 0)
        return irvaudit::parse_election_csv(in);
    return irvaudit::parse_election_json(in);
}

// The worked examples, by their roles in this suite.
inline irvaudit::Election table1() { return load_data("table1.json"); }
inline irvaudit::Election hard_first_round() { return load_data("example4.json"); }
inline irvaudit::Election winner_only_demo() { return load_data("example6.json"); }
inline irvaudit::Election winner_only_variant() {
    return load_data("example6_variant.json");
}
inline irvaudit::Election search_demo() { return load_data("example8.json"); }

inline irvaudit::CandidateId cid(const irvaudit::Election& e,
                                 const std::string& name) {
    auto idx = e.candidate_index(name);
    if (!idx) throw std::runtime_error("no candidate " + name);
    return *idx;
}

}  // namespace test_helpers
