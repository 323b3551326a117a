#pragma once
// End-to-end orchestration: load the evidence resources, turn each
// (subject, predicate, object) row into the five module scores, and run the
// train / score / eval entry points behind the CLI.

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triscore/fact.hpp"
#include "triscore/graph_cross.hpp"
#include "triscore/io.hpp"
#include "triscore/rdf.hpp"
#include "triscore/skipgram.hpp"
#include "triscore/starpath.hpp"
#include "triscore/super_classifier.hpp"
#include "triscore/text.hpp"

namespace triscore {

struct PipelineConfig {
    std::string kg_path;
    std::string concepts_path;
    std::string demonyms_path;
    std::string vectors_path;
    std::string candidates_path;
    std::string mapping_path;  // empty -> built-in predicate mapping
    std::string model_path;
    bool concepts_normalized = false;
    std::string entity_namespace = "http://dbpedia.org/resource/";
    SwmConfig swm;
    GraphCrossConfig graph_cross;
    uint32_t seed = kDefaultCvSeed;
    size_t folds = 10;
    double ridge = 1e-8;
};

// Line-oriented `key = value`; blank lines and # comments allowed; unknown
// keys rejected. Command-line flags override these values.
inline void apply_config_line(PipelineConfig& cfg, std::string_view key, std::string_view value,
                              const std::string& source, size_t line_no) {
    auto bad = [&](const std::string& what) { return ParseError(source, line_no, what); };
    auto as_double = [&]() {
        std::optional<double> v = parse_double(value);
        if (!v) throw bad("bad number: " + std::string(value));
        return *v;
    };
    std::string val(value);
    if (key == "kg") cfg.kg_path = val;
    else if (key == "concepts") cfg.concepts_path = val;
    else if (key == "demonyms") cfg.demonyms_path = val;
    else if (key == "vectors") cfg.vectors_path = val;
    else if (key == "candidates") cfg.candidates_path = val;
    else if (key == "mapping") cfg.mapping_path = val;
    else if (key == "model") cfg.model_path = val;
    else if (key == "namespace") cfg.entity_namespace = val;
    else if (key == "concepts_normalized") {
        if (value == "true" || value == "1") cfg.concepts_normalized = true;
        else if (value == "false" || value == "0") cfg.concepts_normalized = false;
        else throw bad("bad boolean: " + val);
    } else if (key == "theta") cfg.swm.theta = as_double();
    else if (key == "distance") {
        try {
            cfg.swm.distance = parse_token_distance(value);
        } catch (const std::invalid_argument& e) {
            throw bad(e.what());
        }
    } else if (key == "weight_scheme") {
        try {
            cfg.swm.weight = parse_path_weight(value);
        } catch (const std::invalid_argument& e) {
            throw bad(e.what());
        }
    } else if (key == "a") cfg.graph_cross.a = as_double();
    else if (key == "seed") {
        uint32_t seed = 0;
        auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), seed);
        if (ec != std::errc() || ptr != val.data() + val.size()) throw bad("bad seed: " + val);
        cfg.seed = seed;
    } else if (key == "folds") {
        size_t k = 0;
        auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), k);
        if (ec != std::errc() || ptr != val.data() + val.size() || k < 2)
            throw bad("bad fold count: " + val);
        cfg.folds = k;
    } else if (key == "ridge") cfg.ridge = as_double();
    else throw bad("unknown config key: " + std::string(key));
}

inline PipelineConfig load_config(const std::string& path, PipelineConfig cfg = {}) {
    size_t line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        size_t eq = trimmed.find('=');
        if (eq == std::string_view::npos) throw ParseError(path, line_no, "expected `key = value`");
        apply_config_line(cfg, trim(trimmed.substr(0, eq)), trim(trimmed.substr(eq + 1)), path,
                          line_no);
    }
    return cfg;
}

// ---------------------------------------------------------------- datasets

struct DatasetRow {
    Fact fact;
    std::optional<int> score;
};

// TSV without header: `subject<TAB>object<TAB>score` when labeled,
// `subject<TAB>object` otherwise. The predicate comes from the caller (one
// dataset file covers one predicate).
inline std::vector<DatasetRow> load_dataset(const std::string& path, Predicate predicate,
                                            bool labeled) {
    std::vector<DatasetRow> rows;
    size_t line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        std::vector<std::string> cols = split(line, '\t');
        size_t expected = labeled ? 3 : 2;
        if (cols.size() != expected)
            throw ParseError(path, line_no,
                             "expected " + std::to_string(expected) + " tab-separated columns, got " +
                                 std::to_string(cols.size()));
        DatasetRow row;
        row.fact.subject = std::string(trim(cols[0]));
        row.fact.predicate = predicate;
        row.fact.object = std::string(trim(cols[1]));
        if (row.fact.subject.empty() || row.fact.object.empty())
            throw ParseError(path, line_no, "empty subject or object");
        if (labeled) {
            std::string value(trim(cols[2]));
            int score = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), score);
            if (ec != std::errc() || ptr != value.data() + value.size())
                throw ParseError(path, line_no, "bad score: " + value);
            if (score < 0 || score > 7)
                throw ParseError(path, line_no, "score out of [0,7]: " + value);
            row.score = score;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// --------------------------------------------------------------- resources

struct Resources {
    GraphIndex kg;  // entailment-closed
    ConceptGraph concepts;
    DemonymMap demonyms;
    VectorStore vectors;
    std::map<Predicate, CandidateSet> candidates;
    PredicateMapping mapping = PredicateMapping::defaults();

    const CandidateSet& candidates_of(Predicate p) const {
        static const CandidateSet empty_nationality{Predicate::nationality, {}};
        static const CandidateSet empty_profession{Predicate::profession, {}};
        auto it = candidates.find(p);
        if (it != candidates.end()) return it->second;
        return p == Predicate::nationality ? empty_nationality : empty_profession;
    }
};

inline Resources load_resources(const PipelineConfig& cfg) {
    auto require = [](const std::string& path, const char* flag) {
        if (path.empty())
            throw std::invalid_argument(std::string("missing required path: ") + flag);
    };
    require(cfg.kg_path, "--kg");
    require(cfg.concepts_path, "--concepts");
    require(cfg.demonyms_path, "--demonyms");
    require(cfg.vectors_path, "--vectors");
    require(cfg.candidates_path, "--candidates");

    Resources r;
    r.kg = entail_closure(build_index(parse_ntriples(read_file(cfg.kg_path), cfg.kg_path)));
    r.concepts = load_concept_graph(cfg.concepts_path, cfg.concepts_normalized);
    r.demonyms = DemonymMap::load_tsv(cfg.demonyms_path);
    r.vectors = load_vectors(cfg.vectors_path);
    r.candidates = load_candidate_sets(cfg.candidates_path);
    if (!cfg.mapping_path.empty()) r.mapping = PredicateMapping::load_tsv(cfg.mapping_path);
    return r;
}

// ----------------------------------------------------------------- features

// The five module outputs for one row, in stacking order.
inline FeatureVector extract_features(const Fact& fact, const Resources& r,
                                      const PipelineConfig& cfg) {
    FeatureVector f{};
    Iri subject_iri = entity_iri(cfg.entity_namespace, fact.subject);
    f[0] = static_cast<double>(
        evidence_value(score1(r.kg, subject_iri, fact.predicate, fact.object, cfg.swm, r.mapping)));
    f[1] = static_cast<double>(score2(r.concepts, fact.subject, fact.object));
    f[2] = fact.predicate == Predicate::nationality
               ? static_cast<double>(score3(r.concepts, r.demonyms, fact.subject, fact.object,
                                            cfg.graph_cross))
               : 0.0;
    const CandidateSet& cands = r.candidates_of(fact.predicate);
    f[3] = score4(r.vectors, fact.subject, cands, fact.object);
    f[4] = score5(r.vectors, fact.subject, fact.predicate, fact.object, r.demonyms, cands);
    return f;
}

// -------------------------------------------------------------- formatting

namespace detail {

inline std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return std::string(buf);
}

inline std::string eval_report_lines(const EvalReport& rep, const char* prefix) {
    std::string out;
    out += std::string(prefix) + "accuracy2 = " + format_fixed(rep.accuracy2 * 100.0, 2) + "%\n";
    out += std::string(prefix) + "asd = " + format_fixed(rep.asd, 2) + "\n";
    if (rep.kendall_defined)
        out += std::string(prefix) + "kendall_tau = " + format_fixed(rep.kendall_tau, 2) + "\n";
    else
        out += std::string(prefix) +
               "kendall_tau = n/a (no subject group with a defined tau; groups were skipped)\n";
    return out;
}

}  // namespace detail

// ------------------------------------------------------------------ train

// Fits the stacker on the merged labeled rows: k-fold report first, then a
// final fit on the full set, threshold re-search on its regression scores,
// and the model written to cfg.model_path.
inline EvalReport run_train(const PipelineConfig& cfg, const Resources& r,
                            const std::vector<DatasetRow>& rows, std::ostream& out) {
    if (cfg.model_path.empty()) throw std::invalid_argument("missing required path: --model");
    std::vector<FeatureVector> X;
    std::vector<int> y;
    std::vector<std::string> subjects;  // per-predicate grouping keys
    for (const DatasetRow& row : rows) {
        if (!row.score)
            throw std::invalid_argument("training rows must carry scores: " + row.fact.subject);
        X.push_back(extract_features(row.fact, r, cfg));
        y.push_back(*row.score);
        subjects.push_back(std::string(predicate_name(row.fact.predicate)) + "\t" +
                           row.fact.subject);
    }

    CvOptions options{cfg.folds, cfg.ridge, cfg.seed};
    EvalReport report = cross_validate(X, y, options, &subjects);
    out << "cv_folds = " << cfg.folds << "\n" << detail::eval_report_lines(report, "cv_");
    if (report.rho_defined)
        out << "cv_rho = " << detail::format_fixed(report.rho, 4) << "\n";
    else
        out << "cv_rho = n/a (constant scores)\n";

    std::vector<double> yd(y.begin(), y.end());
    RidgeModel model = fit_ridge(X, yd, cfg.ridge);
    std::vector<double> lr;
    lr.reserve(X.size());
    for (const FeatureVector& f : X) lr.push_back(score_lr(model, f));
    ThresholdClassifier clf = fit_threshold(lr, y);
    save_model(ModelFile{model, clf, cfg.seed}, cfg.model_path);
    out << "model written to " << cfg.model_path << "\n";
    return report;
}

// ------------------------------------------------------------------ score

// Scores rows in order: `subject<TAB>object<TAB>score` per row, plus the
// five features and the regression score as extra columns under `trace`.
inline void run_score(const PipelineConfig& cfg, const Resources& r,
                      const std::vector<DatasetRow>& rows, const std::string& output_path,
                      bool trace = false) {
    if (cfg.model_path.empty()) throw std::invalid_argument("missing required path: --model");
    ModelFile m = load_model(cfg.model_path);
    std::string out;
    for (const DatasetRow& row : rows) {
        FeatureVector f = extract_features(row.fact, r, cfg);
        double lr = score_lr(m.model, f);
        int score = classify(lr, m.classifier);
        out += row.fact.subject + "\t" + row.fact.object + "\t" + std::to_string(score);
        if (trace) {
            for (double v : f) out += "\t" + format_double(v);
            out += "\t" + format_double(lr);
        }
        out += "\n";
    }
    write_file(output_path, out);
}

// ------------------------------------------------------------------- eval

struct ScoredRow {
    std::string subject;
    std::string object;
    int score = 0;
};

inline std::vector<ScoredRow> load_scored_rows(const std::string& path) {
    std::vector<ScoredRow> rows;
    size_t line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() < 3)
            throw ParseError(path, line_no, "expected at least 3 tab-separated columns");
        ScoredRow row;
        row.subject = std::string(trim(cols[0]));
        row.object = std::string(trim(cols[1]));
        std::string value(trim(cols[2]));
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), row.score);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw ParseError(path, line_no, "bad score: " + value);
        if (row.score < 0 || row.score > 7)
            throw ParseError(path, line_no, "score out of [0,7]: " + value);
        rows.push_back(std::move(row));
    }
    return rows;
}

// Compares a prediction file against a truth file over identical
// (subject, object) rows and prints the challenge metrics.
inline EvalReport run_eval(const std::string& pred_path, const std::string& truth_path,
                           std::ostream& out) {
    std::vector<ScoredRow> pred = load_scored_rows(pred_path);
    std::vector<ScoredRow> truth = load_scored_rows(truth_path);
    if (pred.empty()) throw std::invalid_argument("prediction file has no rows");
    if (pred.size() != truth.size())
        throw std::invalid_argument("row count mismatch: " + std::to_string(pred.size()) +
                                    " predictions vs " + std::to_string(truth.size()) + " truths");
    for (size_t i = 0; i < pred.size(); ++i) {
        if (pred[i].subject != truth[i].subject || pred[i].object != truth[i].object)
            throw std::invalid_argument("files disagree at row " + std::to_string(i + 1) + ": (" +
                                        pred[i].subject + ", " + pred[i].object + ") vs (" +
                                        truth[i].subject + ", " + truth[i].object + ")");
    }

    std::vector<int> p, t;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (size_t i = 0; i < pred.size(); ++i) {
        p.push_back(pred[i].score);
        t.push_back(truth[i].score);
        auto& [gp, gt] = groups[pred[i].subject];
        gp.push_back(static_cast<double>(pred[i].score));
        gt.push_back(static_cast<double>(truth[i].score));
    }

    EvalReport rep;
    rep.accuracy2 = accuracy2(p, t);
    rep.asd = asd(p, t);
    try {
        rep.kendall_tau = kendall_tau_per_subject(groups);
        rep.kendall_defined = true;
    } catch (const std::invalid_argument&) {
        rep.kendall_defined = false;
    }
    std::vector<double> pd(p.begin(), p.end()), td(t.begin(), t.end());
    if (std::optional<double> rho = pearson(pd, td)) {
        rep.rho = *rho;
        rep.rho_defined = true;
    }
    out << detail::eval_report_lines(rep, "");
    return rep;
}

}  // namespace triscore
