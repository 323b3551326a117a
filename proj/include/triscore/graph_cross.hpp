#pragma once
// Cross-lookup of (subject, object) in a weighted instance->concept graph,
// plus demonym-occurrence scoring for nationality. Raw co-occurrence counts
// are mapped onto {1..7} on a log scale; demonym hits are scaled linearly
// and capped at 7.

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triscore/fact.hpp"
#include "triscore/io.hpp"
#include "triscore/text.hpp"

namespace triscore {

struct ConceptEdge {
    std::string instance;
    std::string concept_label;
    double count = 0.0;  // raw co-occurrence count before normalization
};

// instance -> concept -> weight in {1..7}, with case-insensitive lookup on
// both keys. Keeps the raw count range the weights were derived from.
class ConceptGraph {
public:
    void add(std::string_view instance, std::string_view concept_label, int weight) {
        if (weight < 1 || weight > 7)
            throw std::invalid_argument("concept weight out of [1,7]: " + std::to_string(weight));
        edges_[to_lower(instance)][to_lower(concept_label)] = weight;
    }

    // 0 when the pair has no edge.
    int weight(std::string_view instance, std::string_view concept_label) const {
        auto it = edges_.find(to_lower(instance));
        if (it == edges_.end()) return 0;
        auto jt = it->second.find(to_lower(concept_label));
        return jt == it->second.end() ? 0 : jt->second;
    }

    bool has_instance(std::string_view instance) const {
        return edges_.count(to_lower(instance)) > 0;
    }

    // Concept labels the instance is linked to (case-folded, sorted).
    std::vector<std::string> concepts_of(std::string_view instance) const {
        std::vector<std::string> out;
        auto it = edges_.find(to_lower(instance));
        if (it == edges_.end()) return out;
        for (const auto& [label, weight] : it->second) out.push_back(label);
        return out;
    }

    size_t edge_count() const {
        size_t n = 0;
        for (const auto& [inst, m] : edges_) n += m.size();
        return n;
    }

    bool empty() const { return edges_.empty(); }

    double raw_min = 0.0;  // count range seen by normalize_weights
    double raw_max = 0.0;

private:
    std::map<std::string, std::map<std::string, int>> edges_;
};

// Log-scale min-max normalization of raw counts onto {1..7}:
// weight = 1 + round(6 * (log c - log cmin) / (log cmax - log cmin)).
// All-equal counts (including a single edge) map to 7.
inline ConceptGraph normalize_weights(const std::vector<ConceptEdge>& edges) {
    if (edges.empty()) throw std::invalid_argument("concept graph has no edges");
    double cmin = edges.front().count;
    double cmax = edges.front().count;
    for (const ConceptEdge& e : edges) {
        if (!(e.count >= 1.0))
            throw std::invalid_argument("concept count must be >= 1, got " +
                                        std::to_string(e.count) + " for " + e.instance);
        cmin = std::min(cmin, e.count);
        cmax = std::max(cmax, e.count);
    }
    ConceptGraph g;
    g.raw_min = cmin;
    g.raw_max = cmax;
    if (cmin == cmax) {
        for (const ConceptEdge& e : edges) g.add(e.instance, e.concept_label, 7);
        return g;
    }
    double log_min = std::log(cmin);
    double span = std::log(cmax) - log_min;
    for (const ConceptEdge& e : edges) {
        double w = 1.0 + std::round(6.0 * (std::log(e.count) - log_min) / span);
        g.add(e.instance, e.concept_label, static_cast<int>(w));
    }
    return g;
}

// Rows `instance<TAB>concept<TAB>count`. With pre_normalized the third
// column is taken as a ready integer weight in [1,7] instead of a raw
// count.
inline ConceptGraph load_concept_graph(const std::string& path, bool pre_normalized = false) {
    std::vector<ConceptEdge> edges;
    size_t line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 3) throw ParseError(path, line_no, "expected 3 tab-separated columns");
        ConceptEdge e;
        e.instance = std::string(trim(cols[0]));
        e.concept_label = std::string(trim(cols[1]));
        if (e.instance.empty() || e.concept_label.empty())
            throw ParseError(path, line_no, "empty instance or concept");
        std::optional<double> count = parse_double(trim(cols[2]));
        if (!count || !std::isfinite(*count)) throw ParseError(path, line_no, "bad count: " + cols[2]);
        e.count = *count;
        edges.push_back(std::move(e));
    }
    if (edges.empty()) throw ParseError(path, line_no, "concept graph file has no edges");
    if (pre_normalized) {
        ConceptGraph g;
        for (const ConceptEdge& e : edges) {
            double rounded = std::round(e.count);
            if (e.count != rounded || e.count < 1.0 || e.count > 7.0)
                throw std::invalid_argument("pre-normalized weight must be an integer in [1,7], got " +
                                            std::to_string(e.count) + " for " + e.instance);
            g.add(e.instance, e.concept_label, static_cast<int>(rounded));
        }
        g.raw_min = 1.0;
        g.raw_max = 7.0;
        return g;
    }
    try {
        return normalize_weights(edges);
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, 0, e.what());
    }
}

// ---------------------------------------------------------------- demonyms

// country <-> demonym, looked up case-insensitively in both directions but
// returning the strings as written in the source (downstream vector-store
// lookups are case-sensitive). A country may list several demonyms, and a
// demonym may belong to several countries.
class DemonymMap {
public:
    void add(std::string_view country, std::string_view demonym) {
        by_country_[to_lower(country)].insert(std::string(demonym));
        by_demonym_[to_lower(demonym)].insert(std::string(country));
    }

    // Rows `country<TAB>demonym`.
    static DemonymMap load_tsv(const std::string& path) {
        DemonymMap m;
        size_t line_no = 0;
        for (const std::string& line : read_lines(path)) {
            ++line_no;
            std::string_view trimmed = trim(line);
            if (trimmed.empty() || trimmed.front() == '#') continue;
            std::vector<std::string> cols = split(line, '\t');
            if (cols.size() != 2) throw ParseError(path, line_no, "expected 2 tab-separated columns");
            std::string_view country = trim(cols[0]);
            std::string_view demonym = trim(cols[1]);
            if (country.empty() || demonym.empty())
                throw ParseError(path, line_no, "empty country or demonym");
            m.add(country, demonym);
        }
        return m;
    }

    const std::set<std::string>& demonyms_of(std::string_view country) const {
        static const std::set<std::string> empty;
        auto it = by_country_.find(to_lower(country));
        return it == by_country_.end() ? empty : it->second;
    }

    const std::set<std::string>& countries_of(std::string_view demonym) const {
        static const std::set<std::string> empty;
        auto it = by_demonym_.find(to_lower(demonym));
        return it == by_demonym_.end() ? empty : it->second;
    }

    bool empty() const { return by_country_.empty(); }

private:
    std::map<std::string, std::set<std::string>> by_country_;
    std::map<std::string, std::set<std::string>> by_demonym_;
};

// Whole-word containment of a demonym in a concept label, case-insensitive,
// words delimited by spaces and hyphens (so "german" does not match
// "germane" but does match "german-born").
inline bool concept_contains_demonym(std::string_view concept_label, std::string_view demonym) {
    std::string folded = to_lower(concept_label);
    std::string target = to_lower(demonym);
    std::string cur;
    auto word_matches = [&] {
        bool hit = !cur.empty() && cur == target;
        cur.clear();
        return hit;
    };
    for (char c : folded) {
        if (c == ' ' || c == '-') {
            if (word_matches()) return true;
        } else {
            cur.push_back(c);
        }
    }
    return word_matches();
}

// Number of the subject's concept edges whose label contains any demonym
// of the country; each edge contributes at most once.
inline int count_demonym_occurrences(const ConceptGraph& cg, std::string_view subject,
                                     std::string_view country, const DemonymMap& dm) {
    const std::set<std::string>& demonyms = dm.demonyms_of(country);
    if (demonyms.empty()) return 0;
    int d = 0;
    for (const std::string& label : cg.concepts_of(subject)) {
        for (const std::string& dem : demonyms) {
            if (concept_contains_demonym(label, dem)) {
                ++d;
                break;
            }
        }
    }
    return d;
}

// ----------------------------------------------------------------- scoring

struct GraphCrossConfig {
    double a = 3.0;  // demonym occurrence multiplier

    void validate() const {
        if (!(a > 0.0) || a > 7.0)
            throw std::invalid_argument("demonym multiplier must lie in (0,7], got " +
                                        std::to_string(a));
    }
};

// Concept-graph weight of the pair, 0 when no edge exists.
inline int score2(const ConceptGraph& cg, std::string_view subject, std::string_view object) {
    return cg.weight(subject, object);
}

// Linear scaling of the demonym count with the multiplier, saturating at 7:
// round(a*d) while d < 7/a, else 7.
inline int score3(int d, const GraphCrossConfig& cfg = {}) {
    cfg.validate();
    if (d < 0) throw std::invalid_argument("negative demonym count");
    if (static_cast<double>(d) < 7.0 / cfg.a)
        return static_cast<int>(std::round(cfg.a * static_cast<double>(d)));
    return 7;
}

inline int score3(const ConceptGraph& cg, const DemonymMap& dm, std::string_view subject,
                  std::string_view country, const GraphCrossConfig& cfg = {}) {
    return score3(count_demonym_occurrences(cg, subject, country, dm), cfg);
}

// ------------------------------------------------------------- prediction

// subject -> object -> gold score in [0,7].
class TrainingTable {
public:
    void add(std::string_view subject, std::string_view object, int score) {
        if (score < 0 || score > 7)
            throw std::invalid_argument("training score out of [0,7]: " + std::to_string(score));
        rows_[std::string(subject)][std::string(object)] = score;
    }

    const std::map<std::string, std::map<std::string, int>>& rows() const { return rows_; }

    // Flattened in subject-then-object order.
    std::vector<Fact> facts(Predicate p) const {
        std::vector<Fact> out;
        for (const auto& [subject, objects] : rows_)
            for (const auto& [object, score] : objects) out.push_back(Fact{subject, p, object});
        return out;
    }

    bool empty() const { return rows_.empty(); }

private:
    std::map<std::string, std::map<std::string, int>> rows_;
};

struct GraphCrossPrediction {
    Fact fact;
    int score2 = 0;
    int score3 = 0;  // stays 0 for profession facts
};

// Both cross-lookup scores for each fact, in input order. Demonym evidence
// applies to nationality only.
inline std::vector<GraphCrossPrediction> graph_cross_predict(const ConceptGraph& cg,
                                                             const DemonymMap& dm,
                                                             const std::vector<Fact>& facts,
                                                             const GraphCrossConfig& cfg = {}) {
    cfg.validate();
    std::vector<GraphCrossPrediction> out;
    out.reserve(facts.size());
    for (const Fact& f : facts) {
        GraphCrossPrediction p;
        p.fact = f;
        p.score2 = score2(cg, f.subject, f.object);
        if (f.predicate == Predicate::nationality) p.score3 = score3(cg, dm, f.subject, f.object, cfg);
        out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<GraphCrossPrediction> graph_cross_predict(const TrainingTable& training,
                                                             const ConceptGraph& cg,
                                                             const DemonymMap& dm,
                                                             Predicate predicate,
                                                             const GraphCrossConfig& cfg = {}) {
    return graph_cross_predict(cg, dm, training.facts(predicate), cfg);
}

}  // namespace triscore
