#pragma once
// Evidence scoring of a candidate object label against an entity's star of
// statements. Query tokens are matched to path labels under a string
// distance threshold; the best-matching paths decide the evidence level
// (full / partial / none -> 5 / 3 / 2).

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triscore/fact.hpp"
#include "triscore/io.hpp"
#include "triscore/rdf.hpp"
#include "triscore/text.hpp"

namespace triscore {

// Lowercased units split on whitespace and ASCII punctuation; duplicates
// dropped, first-occurrence order kept.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && seen.insert(cur).second) out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        unsigned char b = static_cast<unsigned char>(c);
        bool word = (b >= 0x80) || std::isalnum(b);
        if (word) cur.push_back(ascii_lower(c));
        else flush();
    }
    flush();
    return out;
}

enum class TokenDistance { normalized_levenshtein, exact };
enum class PathWeightScheme { inverse_length, unit };

inline TokenDistance parse_token_distance(std::string_view name) {
    if (name == "normalized_levenshtein") return TokenDistance::normalized_levenshtein;
    if (name == "exact") return TokenDistance::exact;
    throw std::invalid_argument("unknown token distance: " + std::string(name));
}

inline PathWeightScheme parse_path_weight(std::string_view name) {
    if (name == "inverse_length") return PathWeightScheme::inverse_length;
    if (name == "unit") return PathWeightScheme::unit;
    throw std::invalid_argument("unknown path weight scheme: " + std::string(name));
}

struct SwmConfig {
    double theta = 0.35;
    TokenDistance distance = TokenDistance::normalized_levenshtein;
    PathWeightScheme weight = PathWeightScheme::inverse_length;
};

inline double token_distance(std::string_view a, std::string_view b, TokenDistance metric) {
    if (metric == TokenDistance::exact) return a == b ? 0.0 : 1.0;
    return normalized_levenshtein(a, b);
}

// ------------------------------------------------------------------ paths

struct PathHop {
    Iri predicate;
    Term object;
};

struct Path {
    std::vector<PathHop> hops;  // rooted at the component's subject
    std::string label;          // per-hop predicate and object labels joined by spaces
};

namespace detail {

// Text of a term for path labelling: its labels (sorted, joined) when the
// component records any, the IRI local name otherwise; literals label
// themselves.
inline std::string term_text(const Scc& s, const Term& t) {
    if (const Literal* lit = term_literal(t)) return lit->lexical;
    const Iri& iri = *term_iri(t);
    std::set<std::string> labels = s.term_labels(iri);
    if (labels.empty()) return local_name(iri.value);
    std::string out;
    for (const std::string& l : labels) {
        if (!out.empty()) out += ' ';
        out += l;
    }
    return out;
}

}  // namespace detail

inline std::string path_label(const Scc& s, const std::vector<PathHop>& hops) {
    std::string out;
    for (const PathHop& hop : hops) {
        if (!out.empty()) out += ' ';
        out += detail::term_text(s, Term{hop.predicate});
        out += ' ';
        out += detail::term_text(s, hop.object);
    }
    return out;
}

// One single-hop path per star statement. Components here are depth-1
// stars, so this enumerates all of E(S)+.
inline std::vector<Path> paths_of(const Scc& s) {
    std::vector<Path> out;
    for (const Triple& t : s.star()) {
        Path p;
        p.hops.push_back(PathHop{t.predicate, t.object});
        p.label = path_label(s, p.hops);
        out.push_back(std::move(p));
    }
    return out;
}

inline double path_weight(const Path& p, const SwmConfig& cfg) {
    if (cfg.weight == PathWeightScheme::unit) return 1.0;
    return 1.0 / static_cast<double>(p.hops.size());
}

// Path-label tokens lying within distance theta of some query token.
inline std::vector<std::string> tp(const Path& p, std::string_view query, const SwmConfig& cfg) {
    std::vector<std::string> matched;
    std::vector<std::string> query_tokens = tokenize(query);
    for (const std::string& t : tokenize(p.label)) {
        for (const std::string& q : query_tokens) {
            if (token_distance(t, q, cfg.distance) < cfg.theta) {
                matched.push_back(t);
                break;
            }
        }
    }
    return matched;
}

namespace detail {

struct PathMatch {
    const Path* path;
    std::vector<std::string> matched;
    double product;  // weight * |matched|
};

inline std::vector<PathMatch> match_all(const std::vector<Path>& paths, std::string_view query,
                                        const SwmConfig& cfg) {
    std::vector<PathMatch> out;
    out.reserve(paths.size());
    for (const Path& p : paths) {
        PathMatch m{&p, tp(p, query, cfg), 0.0};
        m.product = path_weight(p, cfg) * static_cast<double>(m.matched.size());
        out.push_back(std::move(m));
    }
    return out;
}

inline double max_product(const std::vector<PathMatch>& ms) {
    double best = 0.0;
    for (const PathMatch& m : ms) best = std::max(best, m.product);
    return best;
}

}  // namespace detail

// tp(p) when p attains the maximum of weight * |tp| over the whole
// component, empty otherwise.
inline std::vector<std::string> mtp(const Path& p, std::string_view query, const Scc& s,
                                    const SwmConfig& cfg) {
    std::vector<std::string> own = tp(p, query, cfg);
    if (own.empty()) return {};
    double product = path_weight(p, cfg) * static_cast<double>(own.size());
    for (const Path& other : paths_of(s)) {
        double other_product =
            path_weight(other, cfg) * static_cast<double>(tp(other, query, cfg).size());
        if (product < other_product) return {};
    }
    return own;
}

// Sum of weight * |tp| over best-matching paths. Paths that match the same
// token set with equal score contribute once; the representative is the
// path with the lexicographically smallest label.
inline double scc_score(const Scc& s, std::string_view query, const SwmConfig& cfg = {}) {
    std::vector<Path> paths = paths_of(s);
    std::vector<detail::PathMatch> matches = detail::match_all(paths, query, cfg);
    double best = detail::max_product(matches);
    if (best <= 0.0) return 0.0;

    // matched-token-set -> representative path label
    std::map<std::set<std::string>, std::pair<std::string, double>> groups;
    for (const detail::PathMatch& m : matches) {
        if (m.matched.empty() || m.product != best) continue;
        std::set<std::string> key(m.matched.begin(), m.matched.end());
        auto it = groups.find(key);
        if (it == groups.end()) groups.emplace(std::move(key), std::make_pair(m.path->label, m.product));
        else if (m.path->label < it->second.first) it->second.first = m.path->label;
    }
    double total = 0.0;
    for (const auto& [key, rep] : groups) total += rep.second;
    return total;
}

// ------------------------------------------------------- predicate mapping

// Which stored properties carry evidence for each scored predicate.
class PredicateMapping {
public:
    static PredicateMapping defaults() {
        PredicateMapping m;
        m.add(Predicate::nationality, Iri{"http://dbpedia.org/property/birthPlace"});
        m.add(Predicate::nationality, Iri{"http://dbpedia.org/ontology/birthPlace"});
        m.add(Predicate::nationality, Iri{"http://dbpedia.org/property/citizenship"});
        m.add(Predicate::profession, vocab::rdf_type);
        m.add(Predicate::profession, Iri{"http://dbpedia.org/property/profession"});
        m.add(Predicate::profession, Iri{"http://dbpedia.org/ontology/profession"});
        m.add(Predicate::profession, Iri{"http://dbpedia.org/ontology/occupation"});
        return m;
    }

    // Rows `predicate<TAB>property_iri`. A mapping file replaces the
    // defaults entirely.
    static PredicateMapping load_tsv(const std::string& path) {
        PredicateMapping m;
        size_t line_no = 0;
        for (const std::string& line : read_lines(path)) {
            ++line_no;
            std::string_view trimmed = trim(line);
            if (trimmed.empty() || trimmed.front() == '#') continue;
            std::vector<std::string> cols = split(line, '\t');
            if (cols.size() != 2) throw ParseError(path, line_no, "expected 2 tab-separated columns");
            Predicate p;
            try {
                p = parse_predicate(trim(cols[0]));
            } catch (const std::invalid_argument& e) {
                throw ParseError(path, line_no, e.what());
            }
            std::string iri(trim(cols[1]));
            if (iri.empty()) throw ParseError(path, line_no, "empty property IRI");
            m.add(p, Iri{std::move(iri)});
        }
        return m;
    }

    void add(Predicate p, Iri property) { properties_[p].insert(std::move(property)); }

    const std::set<Iri>& properties(Predicate p) const {
        static const std::set<Iri> empty;
        auto it = properties_.find(p);
        return it == properties_.end() ? empty : it->second;
    }

private:
    std::map<Predicate, std::set<Iri>> properties_;
};

// Entity location: namespace prefix + label with spaces replaced by
// underscores.
inline Iri entity_iri(std::string_view ns_prefix, std::string_view name) {
    std::string value(ns_prefix);
    for (char c : name) value.push_back(c == ' ' ? '_' : c);
    return Iri{std::move(value)};
}

// ---------------------------------------------------------------- score 1

enum class EvidenceScore : int { none = 2, partial = 3, full = 5 };

inline int evidence_value(EvidenceScore e) { return static_cast<int>(e); }

// Piecewise mapping of a component score to an evidence level: full at
// score >= 1, partial strictly between 0 and 1, none otherwise.
inline EvidenceScore evidence_level(double score) {
    if (score >= 1.0) return EvidenceScore::full;
    if (score > 0.0) return EvidenceScore::partial;
    return EvidenceScore::none;
}

// Scores the candidate object label against the star restricted to the
// properties mapped for the predicate. An unknown subject has an empty
// component and scores as no evidence.
inline EvidenceScore score1(const GraphIndex& g, const Iri& subject, Predicate predicate,
                            std::string_view object_label, const SwmConfig& cfg = {},
                            const PredicateMapping& mapping = PredicateMapping::defaults()) {
    Scc restricted = scc_filtered(g, subject, mapping.properties(predicate));
    return evidence_level(scc_score(restricted, object_label, cfg));
}

}  // namespace triscore
