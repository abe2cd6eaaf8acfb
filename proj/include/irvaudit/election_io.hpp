// Election file I/O. Two formats:
//   - canonical JSON:
//       {"candidates":[names...],
//        "ballots":[{"ranking":[names...],"count":int},...],
//        "metadata":{"reported_winner":name?,"mov":int?,"source":str?}}
//   - ranking/count CSV: header `ranking,count`, one class per line, the
//     ranking cell a `;`-separated name list. The roster is the set of
//     names in order of first appearance.
// Parsing canonicalises (duplicate classes merged, classes sorted); both
// readers reject empty rankings and report positions on malformed input.
#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ballots.hpp"

namespace irvaudit {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ElectionFormat { canonical_json, ranking_count_csv };

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline Election finish_parse(std::vector<std::string> candidates,
                             std::vector<BallotClass> ballots,
                             ElectionMetadata metadata) {
    if (ballots.empty()) throw ParseError("no ballots");
    try {
        return Election(std::move(candidates), std::move(ballots),
                        std::move(metadata))
            .canonical();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

}  // namespace detail

inline Election parse_election_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("candidates") ||
        !doc.contains("ballots"))
        throw ParseError("election JSON needs `candidates` and `ballots`");

    std::vector<std::string> candidates;
    for (const auto& c : doc.at("candidates")) {
        if (!c.is_string()) throw ParseError("candidate names must be strings");
        candidates.push_back(c.get<std::string>());
    }

    auto index_of = [&](const std::string& name,
                        std::size_t pos) -> CandidateId {
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (candidates[i] == name) return static_cast<CandidateId>(i);
        throw ParseError("ballot " + std::to_string(pos) +
                         ": unknown candidate name: " + name);
    };

    std::vector<BallotClass> ballots;
    std::size_t pos = 0;
    for (const auto& entry : doc.at("ballots")) {
        ++pos;
        if (!entry.is_object() || !entry.contains("ranking") ||
            !entry.contains("count"))
            throw ParseError("ballot " + std::to_string(pos) +
                             ": needs `ranking` and `count`");
        BallotClass bc;
        CandidateSet seen;
        for (const auto& name : entry.at("ranking")) {
            CandidateId c = index_of(name.get<std::string>(), pos);
            if (seen.contains(c))
                throw ParseError("ballot " + std::to_string(pos) +
                                 ": duplicate candidate in ranking: " +
                                 name.get<std::string>());
            seen.insert(c);
            bc.ranking.push_back(c);
        }
        if (bc.ranking.empty())
            throw ParseError("ballot " + std::to_string(pos) +
                             ": empty ranking");
        if (!entry.at("count").is_number_integer() ||
            entry.at("count").get<Count>() < 1)
            throw ParseError("ballot " + std::to_string(pos) +
                             ": count must be a positive integer");
        bc.count = entry.at("count").get<Count>();
        ballots.push_back(std::move(bc));
    }

    ElectionMetadata meta;
    if (doc.contains("metadata")) {
        const auto& m = doc.at("metadata");
        if (m.contains("reported_winner") && !m.at("reported_winner").is_null())
            meta.reported_winner = m.at("reported_winner").get<std::string>();
        if (m.contains("mov") && !m.at("mov").is_null())
            meta.margin_of_victory = m.at("mov").get<Count>();
        if (m.contains("source") && !m.at("source").is_null())
            meta.source = m.at("source").get<std::string>();
    }
    return detail::finish_parse(std::move(candidates), std::move(ballots),
                                std::move(meta));
}

inline Election parse_election_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input");
    if (detail::trim(line) != "ranking,count")
        throw ParseError("line 1: expected header `ranking,count`");

    std::vector<std::string> candidates;
    std::vector<BallotClass> ballots;
    auto index_of = [&](const std::string& name, int lineno) -> CandidateId {
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (candidates[i] == name) return static_cast<CandidateId>(i);
        if (candidates.size() >=
            static_cast<std::size_t>(CandidateSet::kMaxCandidates))
            throw ParseError("line " + std::to_string(lineno) +
                             ": more than 64 candidates");
        candidates.push_back(name);
        return static_cast<CandidateId>(candidates.size() - 1);
    };

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected `ranking,count`");
        const std::string names = line.substr(0, comma);
        const std::string count_field = detail::trim(line.substr(comma + 1));

        BallotClass bc;
        CandidateSet seen;
        std::stringstream ss(names);
        std::string name;
        while (std::getline(ss, name, ';')) {
            name = detail::trim(name);
            if (name.empty())
                throw ParseError("line " + std::to_string(lineno) +
                                 ": empty candidate name in ranking");
            CandidateId c = index_of(name, lineno);
            if (seen.contains(c))
                throw ParseError("line " + std::to_string(lineno) +
                                 ": duplicate candidate in ranking: " + name);
            seen.insert(c);
            bc.ranking.push_back(c);
        }
        if (bc.ranking.empty())
            throw ParseError("line " + std::to_string(lineno) +
                             ": empty ranking");
        try {
            std::size_t used = 0;
            bc.count = std::stoll(count_field, &used);
            if (used != count_field.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) +
                             ": malformed count field `" + count_field + "`");
        }
        if (bc.count < 1)
            throw ParseError("line " + std::to_string(lineno) +
                             ": count must be >= 1");
        ballots.push_back(std::move(bc));
    }
    return detail::finish_parse(std::move(candidates), std::move(ballots), {});
}

inline Election parse_election(std::istream& in, ElectionFormat format) {
    return format == ElectionFormat::canonical_json ? parse_election_json(in)
                                                    : parse_election_csv(in);
}

inline nlohmann::json election_to_json(const Election& e) {
    nlohmann::json doc;
    doc["candidates"] = e.candidates();
    doc["ballots"] = nlohmann::json::array();
    for (const BallotClass& bc : e.ballots()) {
        nlohmann::json names = nlohmann::json::array();
        for (CandidateId c : bc.ranking) names.push_back(e.candidate_name(c));
        doc["ballots"].push_back({{"ranking", names}, {"count", bc.count}});
    }
    nlohmann::json meta = nlohmann::json::object();
    if (e.metadata().reported_winner)
        meta["reported_winner"] = *e.metadata().reported_winner;
    if (e.metadata().margin_of_victory)
        meta["mov"] = *e.metadata().margin_of_victory;
    if (e.metadata().source) meta["source"] = *e.metadata().source;
    doc["metadata"] = meta;
    return doc;
}

inline void serialize_election_json(std::ostream& out, const Election& e) {
    out << election_to_json(e).dump(2) << '\n';
}

inline void serialize_election_csv(std::ostream& out, const Election& e) {
    out << "ranking,count\n";
    for (const BallotClass& bc : e.ballots()) {
        for (std::size_t i = 0; i < bc.ranking.size(); ++i) {
            if (i) out << ';';
            out << e.candidate_name(bc.ranking[i]);
        }
        out << ',' << bc.count << '\n';
    }
}

}  // namespace irvaudit
