// Command-line front end: train, score, and eval subcommands over the
// triple-scoring pipeline. Exit codes: 0 success, 1 usage error, 2 data
// error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "triscore/triscore.hpp"

namespace {

struct ResourceFlags {
    std::string kg, concepts, demonyms, vectors, candidates, mapping, model, config;
    uint32_t seed = triscore::kDefaultCvSeed;
    CLI::Option* kg_opt = nullptr;
    CLI::Option* concepts_opt = nullptr;
    CLI::Option* demonyms_opt = nullptr;
    CLI::Option* vectors_opt = nullptr;
    CLI::Option* candidates_opt = nullptr;
    CLI::Option* mapping_opt = nullptr;
    CLI::Option* model_opt = nullptr;
    CLI::Option* config_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_resource_flags(CLI::App* cmd, ResourceFlags& f) {
    f.kg_opt = cmd->add_option("--kg", f.kg, "knowledge graph file (N-Triples)");
    f.concepts_opt = cmd->add_option("--concepts", f.concepts,
                                     "concept graph TSV: instance<TAB>concept<TAB>count");
    f.demonyms_opt =
        cmd->add_option("--demonyms", f.demonyms, "demonym TSV: country<TAB>demonym");
    f.vectors_opt = cmd->add_option("--vectors", f.vectors,
                                    "word-vector file: `count dim` header + token rows");
    f.candidates_opt = cmd->add_option("--candidates", f.candidates,
                                       "candidate objects TSV: predicate<TAB>object");
    f.mapping_opt = cmd->add_option("--mapping", f.mapping,
                                    "predicate-to-property TSV overriding the built-in mapping");
    f.model_opt = cmd->add_option("--model", f.model, "model file to write (train) or read (score)");
    f.config_opt = cmd->add_option("--config", f.config, "config file: `key = value` lines");
    f.seed_opt = cmd->add_option("--seed", f.seed, "fold-shuffle seed");
}

// Config file first, explicit flags on top.
triscore::PipelineConfig merge_config(const ResourceFlags& f) {
    triscore::PipelineConfig cfg;
    if (f.config_opt->count()) cfg = triscore::load_config(f.config, cfg);
    if (f.kg_opt->count()) cfg.kg_path = f.kg;
    if (f.concepts_opt->count()) cfg.concepts_path = f.concepts;
    if (f.demonyms_opt->count()) cfg.demonyms_path = f.demonyms;
    if (f.vectors_opt->count()) cfg.vectors_path = f.vectors;
    if (f.candidates_opt->count()) cfg.candidates_path = f.candidates;
    if (f.mapping_opt->count()) cfg.mapping_path = f.mapping;
    if (f.model_opt->count()) cfg.model_path = f.model;
    if (f.seed_opt->count()) cfg.seed = f.seed;
    return cfg;
}

// Missing-path usage errors, reported before any file is touched.
bool check_paths(const triscore::PipelineConfig& cfg, bool need_model) {
    auto missing = [](const std::string& path, const char* flag) {
        if (!path.empty()) return false;
        std::cerr << "error: missing required path (flag " << flag << " or config key)\n";
        return true;
    };
    bool bad = missing(cfg.kg_path, "--kg");
    bad = missing(cfg.concepts_path, "--concepts") || bad;
    bad = missing(cfg.demonyms_path, "--demonyms") || bad;
    bad = missing(cfg.vectors_path, "--vectors") || bad;
    bad = missing(cfg.candidates_path, "--candidates") || bad;
    if (need_model) bad = missing(cfg.model_path, "--model") || bad;
    return !bad;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid evidence scoring of person-fact triples"};
    app.require_subcommand(1);

    // ---- train
    CLI::App* train = app.add_subcommand("train", "fit the stacker on labeled datasets");
    ResourceFlags train_flags;
    add_resource_flags(train, train_flags);
    std::vector<std::string> train_inputs;
    std::vector<std::string> train_predicates;
    train->add_option("--input", train_inputs, "labeled TSV: subject<TAB>object<TAB>score")
        ->required();
    train->add_option("--predicate", train_predicates,
                      "predicate of the matching --input file, in order")
        ->required();

    // ---- score
    CLI::App* score = app.add_subcommand("score", "score an unlabeled dataset with a model");
    ResourceFlags score_flags;
    add_resource_flags(score, score_flags);
    std::string score_input, score_output, score_predicate;
    bool trace = false;
    score->add_option("--input", score_input, "unlabeled TSV: subject<TAB>object")->required();
    score->add_option("--predicate", score_predicate, "predicate of the input file")->required();
    score->add_option("--output", score_output, "where to write scored rows")->required();
    score->add_flag("--trace", trace, "append the five features and the regression score");

    // ---- eval
    CLI::App* eval = app.add_subcommand("eval", "compare a prediction file against a truth file");
    std::string eval_pred, eval_truth;
    eval->add_option("predictions", eval_pred, "scored TSV to evaluate")->required();
    eval->add_option("truth", eval_truth, "scored TSV with true scores")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) {
            if (train_inputs.size() != train_predicates.size()) {
                std::cerr << "error: " << train_inputs.size() << " --input files but "
                          << train_predicates.size() << " --predicate values\n";
                return 1;
            }
            std::vector<triscore::Predicate> predicates;
            for (const std::string& name : train_predicates) {
                try {
                    predicates.push_back(triscore::parse_predicate(name));
                } catch (const std::invalid_argument& e) {
                    std::cerr << "error: " << e.what() << "\n";
                    return 1;
                }
            }
            triscore::PipelineConfig cfg = merge_config(train_flags);
            if (!check_paths(cfg, true)) return 1;
            std::vector<triscore::DatasetRow> rows;
            for (size_t i = 0; i < train_inputs.size(); ++i) {
                std::vector<triscore::DatasetRow> part =
                    triscore::load_dataset(train_inputs[i], predicates[i], true);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            triscore::Resources resources = triscore::load_resources(cfg);
            triscore::run_train(cfg, resources, rows, std::cout);
            return 0;
        }
        if (score->parsed()) {
            triscore::Predicate predicate;
            try {
                predicate = triscore::parse_predicate(score_predicate);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            triscore::PipelineConfig cfg = merge_config(score_flags);
            if (!check_paths(cfg, true)) return 1;
            std::vector<triscore::DatasetRow> rows =
                triscore::load_dataset(score_input, predicate, false);
            triscore::Resources resources = triscore::load_resources(cfg);
            triscore::run_score(cfg, resources, rows, score_output, trace);
            return 0;
        }
        triscore::run_eval(eval_pred, eval_truth, std::cout);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
