#pragma once
// Cosine-similarity scoring of (subject, object) pairs against a word-vector
// store, normalized over the candidate objects of the predicate onto [2, 7].
// Nationality additionally gets a demonym-similarity score on the same
// scale; profession triples get 0 there.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triscore/fact.hpp"
#include "triscore/graph_cross.hpp"
#include "triscore/io.hpp"
#include "triscore/text.hpp"

namespace triscore {

// Entity labels become dictionary tokens by replacing spaces with
// underscores; nothing else is altered.
inline std::string normalize_entity_name(std::string_view name) {
    std::string out(name);
    std::replace(out.begin(), out.end(), ' ', '_');
    return out;
}

// Rewrites corpus annotations `[Entity_Id|surface text]` to `Entity_Id`.
// Bracketed text without a pipe is kept verbatim; a line with an unclosed
// or nested bracket is returned unchanged (and noted on `log`).
inline std::string preprocess_corpus_line(std::string_view line, std::ostream* log = nullptr) {
    std::string out;
    out.reserve(line.size());
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] != '[') {
            out.push_back(line[i]);
            ++i;
            continue;
        }
        size_t close = line.find(']', i + 1);
        std::string_view inner =
            close == std::string_view::npos ? std::string_view{} : line.substr(i + 1, close - i - 1);
        if (close == std::string_view::npos || inner.find('[') != std::string_view::npos) {
            if (log) *log << "unbalanced annotation, line kept as-is: " << line << '\n';
            return std::string(line);
        }
        size_t pipe = inner.find('|');
        if (pipe == std::string_view::npos) {
            out.append(line.substr(i, close - i + 1));  // plain bracketed text
        } else {
            out.append(inner.substr(0, pipe));
        }
        i = close + 1;
    }
    return out;
}

// ----------------------------------------------------------------- vectors

// token -> embedding; a missed lookup is an expected outcome, not an error.
class VectorStore {
public:
    VectorStore() = default;
    explicit VectorStore(size_t dimension) : dimension_(dimension) {}

    void insert(std::string token, std::vector<double> components) {
        if (dimension_ == 0) dimension_ = components.size();
        if (components.size() != dimension_)
            throw std::invalid_argument("vector for '" + token + "' has dimension " +
                                        std::to_string(components.size()) + ", store has " +
                                        std::to_string(dimension_));
        for (double v : components)
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite component in vector for '" + token + "'");
        if (!vectors_.emplace(std::move(token), std::move(components)).second)
            throw std::invalid_argument("duplicate token");
    }

    const std::vector<double>* find(std::string_view token) const {
        auto it = vectors_.find(token);
        return it == vectors_.end() ? nullptr : &it->second;
    }

    size_t dimension() const { return dimension_; }
    size_t size() const { return vectors_.size(); }
    bool empty() const { return vectors_.empty(); }

private:
    std::map<std::string, std::vector<double>, std::less<>> vectors_;
    size_t dimension_ = 0;
};

// Text format: header `count dimension`, then `token v1 ... vd` rows,
// whitespace-separated.
inline VectorStore load_vectors(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ParseError(path, 0, "missing header line");
    std::vector<std::string> header = split_ws(lines[0]);
    if (header.size() != 2) throw ParseError(path, 1, "header must be `count dimension`");
    auto parse_count = [&](const std::string& s) -> std::optional<size_t> {
        size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
        return v;
    };
    std::optional<size_t> count = parse_count(header[0]);
    std::optional<size_t> dim = parse_count(header[1]);
    if (!count || !dim) throw ParseError(path, 1, "header must be `count dimension`");
    if (*dim == 0) throw ParseError(path, 1, "dimension must be positive");

    VectorStore store(*dim);
    size_t rows = 0;
    for (size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        ++rows;
        size_t line_no = li + 1;
        std::vector<std::string> fields = split_ws(lines[li]);
        if (fields.size() != *dim + 1)
            throw ParseError(path, line_no,
                             "expected token + " + std::to_string(*dim) + " components, got " +
                                 std::to_string(fields.size() ? fields.size() - 1 : 0));
        std::vector<double> components;
        components.reserve(*dim);
        for (size_t j = 1; j < fields.size(); ++j) {
            std::optional<double> v = parse_double(fields[j]);
            if (!v || !std::isfinite(*v))
                throw ParseError(path, line_no, "bad component: " + fields[j]);
            components.push_back(*v);
        }
        try {
            store.insert(fields[0], std::move(components));
        } catch (const std::invalid_argument& e) {
            throw ParseError(path, line_no, e.what() + std::string(": ") + fields[0]);
        }
    }
    if (rows != *count)
        throw ParseError(path, 0,
                         "header declares " + std::to_string(*count) + " vectors, file has " +
                             std::to_string(rows));
    return store;
}

inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("cosine: zero vector");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

// -------------------------------------------------------------- candidates

// The closed list of possible objects for one predicate, in file order.
struct CandidateSet {
    Predicate predicate = Predicate::nationality;
    std::vector<std::string> objects;
};

// Rows `predicate<TAB>object_label`; both predicates may share one file.
// Repeated objects keep their first position.
inline std::map<Predicate, CandidateSet> load_candidate_sets(const std::string& path) {
    std::map<Predicate, CandidateSet> out;
    std::map<Predicate, std::set<std::string>> seen;
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
        std::string object(trim(cols[1]));
        if (object.empty()) throw ParseError(path, line_no, "empty object label");
        CandidateSet& cs = out[p];
        cs.predicate = p;
        if (seen[p].insert(object).second) cs.objects.push_back(std::move(object));
    }
    return out;
}

// ----------------------------------------------------------------- scoring

namespace detail {

// Embedding of a token, rejecting zero vectors (no direction to compare).
inline const std::vector<double>* usable_vector(const VectorStore& store, std::string_view token) {
    const std::vector<double>* v = store.find(token);
    if (!v) return nullptr;
    for (double x : *v)
        if (x != 0.0) return v;
    return nullptr;
}

// 2 + 5(sigma - m)/(M - m), the affine map of [m, M] onto [2, 7]. The ratio
// is formed before scaling so the endpoints land on exactly 2 and 7.
inline double affine_27(double sigma, double m, double M) {
    return 2.0 + 5.0 * ((sigma - m) / (M - m));
}

}  // namespace detail

// Similarity of subject and object, normalized over the candidate objects
// of the predicate. Fallbacks: unknown subject -> 7; unknown object -> 7;
// no spread among resolvable candidates (M = m) -> 7.
inline double score4(const VectorStore& store, std::string_view subject,
                     const CandidateSet& candidates, std::string_view object) {
    const std::vector<double>* sv = detail::usable_vector(store, normalize_entity_name(subject));
    if (!sv) return 7.0;

    std::optional<double> object_sigma;
    double m = 0.0, M = 0.0;
    bool any = false;
    auto consider = [&](std::string_view label, bool is_object) {
        const std::vector<double>* cv = detail::usable_vector(store, normalize_entity_name(label));
        if (!cv) return;
        double sigma = cosine(*sv, *cv);
        if (is_object) object_sigma = sigma;
        if (!any) m = M = sigma;
        else {
            m = std::min(m, sigma);
            M = std::max(M, sigma);
        }
        any = true;
    };
    bool object_listed = false;
    for (const std::string& cand : candidates.objects) {
        bool is_object = (cand == object);
        object_listed = object_listed || is_object;
        consider(cand, is_object);
    }
    if (!object_listed) consider(object, true);

    if (!object_sigma) return 7.0;
    if (M == m) return 7.0;
    return detail::affine_27(*object_sigma, m, M);
}

// Demonym similarity for nationality: each country is represented by the
// best cosine over its demonyms, and the queried country's value is
// normalized over the candidate countries exactly as in score4. Profession
// triples score 0.
inline double score5(const VectorStore& store, std::string_view subject, Predicate predicate,
                     std::string_view country, const DemonymMap& dm,
                     const CandidateSet& candidates) {
    if (predicate == Predicate::profession) return 0.0;
    const std::vector<double>* sv = detail::usable_vector(store, normalize_entity_name(subject));
    if (!sv) return 7.0;

    auto best_demonym_sigma = [&](std::string_view c) -> std::optional<double> {
        std::optional<double> best;
        for (const std::string& dem : dm.demonyms_of(c)) {
            const std::vector<double>* dv = detail::usable_vector(store, normalize_entity_name(dem));
            if (!dv) continue;
            double sigma = cosine(*sv, *dv);
            if (!best || sigma > *best) best = sigma;
        }
        return best;
    };

    std::optional<double> country_sigma;
    double m = 0.0, M = 0.0;
    bool any = false;
    auto consider = [&](std::string_view label, bool is_query) {
        std::optional<double> sigma = best_demonym_sigma(label);
        if (!sigma) return;
        if (is_query) country_sigma = sigma;
        if (!any) m = M = *sigma;
        else {
            m = std::min(m, *sigma);
            M = std::max(M, *sigma);
        }
        any = true;
    };
    bool country_listed = false;
    for (const std::string& cand : candidates.objects) {
        bool is_query = (cand == country);
        country_listed = country_listed || is_query;
        consider(cand, is_query);
    }
    if (!country_listed) consider(country, true);

    if (!country_sigma) return 7.0;
    if (M == m) return 7.0;
    return detail::affine_27(*country_sigma, m, M);
}

}  // namespace triscore
