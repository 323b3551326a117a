// Acceptance gate: nine self-contained checks over the scoring pipeline,
// one pass/fail line each. Exits 0 only when every criterion holds.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "triscore/triscore.hpp"

using namespace triscore;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::string(buf);
}

RidgeModel shipped_model() {
    return RidgeModel{{0.5245, 0.4532, 0.3513, 0.3824, 0.3824}, -0.5606, 1e-8};
}

// --- criterion 1: the shipped stacker weights reproduce the documented
// regression scores and classes, in well under a millisecond.
Outcome criterion1() {
    RidgeModel m = shipped_model();
    ThresholdClassifier clf{3.5};
    FeatureVector strong{5.0, 0.0, 0.0, 7.0, 0.0};
    FeatureVector zeros{};
    double lr_strong = score_lr(m, strong);
    double lr_zero = score_lr(m, zeros);

    bool values_ok = std::abs(lr_strong - 4.7387) <= 1e-9 && classify(lr_strong, clf) == 5 &&
                     lr_zero == -0.5606 && classify(lr_zero, clf) == 2;

    Clock::time_point t0 = Clock::now();
    volatile double sink = 0.0;
    for (int i = 0; i < 1000; ++i) sink = sink + score_lr(m, strong) + classify(lr_zero, clf);
    double ms_per_call = seconds_since(t0) * 1000.0 / 1000.0;
    (void)sink;

    return {values_ok && ms_per_call < 1.0,
            "lr(5,0,0,7,0)=" + fmt(lr_strong, 10) + " -> 5, lr(0)=" + fmt(lr_zero) + " -> 2, " +
                fmt(ms_per_call, 2) + " ms/call"};
}

// --- criterion 2: the ridge fit recovers a random linear rule from 1000
// samples, exactly without noise and closely under Gaussian noise.
Outcome criterion2() {
    oracles::TestRng rng(8161);
    std::array<double, 5> w_true;
    for (double& w : w_true) w = rng.uniform(-1.0, 1.0);
    double b_true = rng.uniform(-1.0, 1.0);

    std::vector<FeatureVector> X;
    std::vector<double> clean, noisy;
    for (int i = 0; i < 1000; ++i) {
        FeatureVector f;
        for (double& v : f) v = rng.uniform(0.0, 7.0);
        double y = b_true;
        for (size_t j = 0; j < 5; ++j) y += w_true[j] * f[j];
        X.push_back(f);
        clean.push_back(y);
        noisy.push_back(y + rng.normal(0.0, 0.1));
    }

    Clock::time_point t0 = Clock::now();
    RidgeModel clean_fit = fit_ridge(X, clean, 1e-8);
    RidgeModel noisy_fit = fit_ridge(X, noisy, 1e-8);
    double elapsed = seconds_since(t0);

    auto max_err = [&](const RidgeModel& m) {
        double e = std::abs(m.b - b_true);
        for (size_t j = 0; j < 5; ++j) e = std::max(e, std::abs(m.w[j] - w_true[j]));
        return e;
    };
    double clean_err = max_err(clean_fit);
    double noisy_err = max_err(noisy_fit);
    return {clean_err <= 1e-4 && noisy_err <= 5e-2 && elapsed < 1.0,
            "n=1000: clean err " + fmt(clean_err, 3) + " (<=1e-4), noisy err " + fmt(noisy_err, 3) +
                " (<=5e-2), " + fmt(elapsed, 3) + " s"};
}

std::set<Triple> all_triples(const GraphIndex& g) {
    std::set<Triple> out;
    for (const auto& [subject, triples] : g.by_subject) out.insert(triples.begin(), triples.end());
    return out;
}

// --- criterion 3: the subclass/type closure equals fixpoint iteration on
// random graphs with chains and cycles, and closing twice changes nothing.
Outcome criterion3() {
    oracles::TestRng rng(31007);
    Clock::time_point t0 = Clock::now();
    size_t largest = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Triple> triples = oracles::random_graph(rng, 500);
        GraphIndex closed = entail_closure(build_index(triples));
        std::set<Triple> got = all_triples(closed);
        std::set<Triple> want = oracles::naive_closure(triples);
        if (got != want)
            return {false, "closure mismatch on trial " + std::to_string(trial) + " (" +
                               std::to_string(got.size()) + " vs " + std::to_string(want.size()) +
                               " triples)"};
        GraphIndex twice = entail_closure(closed);
        if (!twice.closed || all_triples(twice) != got)
            return {false, "closure not idempotent on trial " + std::to_string(trial)};
        largest = std::max(largest, got.size());
    }
    double elapsed = seconds_since(t0);
    return {elapsed < 10.0, "100 graphs vs fixpoint oracle, largest closure " +
                                std::to_string(largest) + " triples, " + fmt(elapsed, 3) + " s"};
}

// --- criterion 4: the component score equals exhaustive path enumeration on
// random stars (plain and predicate-filtered), and the evidence score only
// ever takes the values 2, 3, 5.
Outcome criterion4() {
    oracles::TestRng rng(41414);
    std::vector<std::pair<GraphIndex, oracles::StarFixture>> fixtures;
    for (int i = 0; i < 50; ++i) {
        oracles::StarFixture fx = oracles::random_star(rng, 50);
        fixtures.emplace_back(entail_closure(build_index(fx.triples)), std::move(fx));
    }

    size_t comparisons = 0;
    for (const auto& [g, fx] : fixtures) {
        SwmConfig cfg;
        if (rng.chance(0.25)) cfg.distance = TokenDistance::exact;
        if (rng.chance(0.25)) cfg.theta = rng.uniform(0.1, 0.6);
        for (int q = 0; q < 4; ++q) {
            std::string query = oracles::random_query(rng);
            double lib = scc_score(scc(g, fx.subject), query, cfg);
            double ref = oracles::swm_score(g, fx.subject, nullptr, query, cfg);
            if (lib != ref)
                return {false, "score mismatch (" + fmt(lib) + " vs " + fmt(ref) + ") on query \"" +
                                   query + "\""};
            std::set<Iri> allowed;
            for (const Iri& p : fx.predicates)
                if (rng.chance(0.6)) allowed.insert(p);
            double lib_f = scc_score(scc_filtered(g, fx.subject, allowed), query, cfg);
            double ref_f = oracles::swm_score(g, fx.subject, &allowed, query, cfg);
            if (lib_f != ref_f)
                return {false, "filtered score mismatch (" + fmt(lib_f) + " vs " + fmt(ref_f) +
                                   ") on query \"" + query + "\""};
            comparisons += 2;
        }
    }

    for (int i = 0; i < 10000; ++i) {
        const auto& [g, fx] = fixtures[rng.index(fixtures.size())];
        PredicateMapping mapping;
        for (const Iri& p : fx.predicates)
            if (rng.chance(0.5)) mapping.add(Predicate::nationality, p);
        Iri subject = rng.chance(0.9) ? fx.subject : Iri{"http://t/absent"};
        int value = evidence_value(
            score1(g, subject, Predicate::nationality, oracles::random_query(rng), {}, mapping));
        if (value != 2 && value != 3 && value != 5)
            return {false, "evidence value " + std::to_string(value) + " outside {2,3,5}"};
    }
    return {true, std::to_string(comparisons) +
                      " oracle comparisons equal, 10000 evidence values all in {2,3,5}"};
}

// --- criterion 5: the demonym scaling table and its monotonicity.
Outcome criterion5() {
    GraphCrossConfig a3{3.0};
    const int expected[] = {0, 3, 6, 7, 7};
    const int inputs[] = {0, 1, 2, 3, 10};
    for (int i = 0; i < 5; ++i)
        if (score3(inputs[i], a3) != expected[i])
            return {false, "score3(" + std::to_string(inputs[i]) + ", a=3) = " +
                               std::to_string(score3(inputs[i], a3)) + ", expected " +
                               std::to_string(expected[i])};
    for (double a : {0.5, 1.0, 3.0, 7.0}) {
        GraphCrossConfig cfg{a};
        for (int d = 0; d < 20; ++d)
            if (score3(d, cfg) > score3(d + 1, cfg))
                return {false, "score3 decreases at d=" + std::to_string(d) + ", a=" + fmt(a)};
    }
    return {true, "mapping table (0,1,2,3,10)->(0,3,6,7,7) exact; non-decreasing for a in "
                  "{0.5,1,3,7}, d in 0..20"};
}

// --- criterion 6: the similarity normalization maps extremes to exactly 2
// and 7, preserves the cosine order, and falls back to 7 without spread or
// without a subject vector.
Outcome criterion6() {
    oracles::TestRng rng(60606);
    for (int trial = 0; trial < 1000; ++trial) {
        VectorStore store;
        auto random_vec = [&] {
            std::vector<double> v{rng.uniform(0.2, 1.0), rng.uniform(-1.0, 1.0),
                                  rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            return v;
        };
        std::vector<double> sv = random_vec();
        store.insert("subject", sv);
        int k = rng.uniform_int(1, 12);
        CandidateSet cands{Predicate::nationality, {}};
        std::vector<double> sigmas;
        for (int i = 0; i < k; ++i) {
            std::string name = "c" + std::to_string(i);
            std::vector<double> cv = random_vec();
            store.insert(name, cv);
            cands.objects.push_back(name);
            sigmas.push_back(cosine(sv, cv));
        }
        double m = sigmas[0], M = sigmas[0];
        for (double s : sigmas) {
            m = std::min(m, s);
            M = std::max(M, s);
        }
        std::vector<double> scores;
        for (int i = 0; i < k; ++i)
            scores.push_back(score4(store, "subject", cands, cands.objects[i]));
        for (int i = 0; i < k; ++i) {
            if (scores[i] < 2.0 || scores[i] > 7.0)
                return {false, "score4 " + fmt(scores[i]) + " outside [2,7]"};
            if (M > m) {
                if (sigmas[i] == M && scores[i] != 7.0)
                    return {false, "argmax scored " + fmt(scores[i]) + ", not 7"};
                if (sigmas[i] == m && scores[i] != 2.0)
                    return {false, "argmin scored " + fmt(scores[i]) + ", not 2"};
            } else if (scores[i] != 7.0) {
                return {false, "no spread but score " + fmt(scores[i]) + ", not 7"};
            }
            for (int j = 0; j < k; ++j) {
                if (sigmas[i] < sigmas[j] && scores[i] > scores[j])
                    return {false, "score4 order disagrees with cosine order"};
                if (sigmas[i] == sigmas[j] && scores[i] != scores[j])
                    return {false, "equal cosines got unequal scores"};
            }
        }
        if (score4(store, "someone_else", cands, cands.objects[0]) != 7.0)
            return {false, "unknown subject did not fall back to 7"};
    }
    return {true, "1000 random candidate sets: range, extremes, order, and fallbacks all hold"};
}

// --- criterion 7: the evaluation metrics against pair/group-counting
// oracles, including the inclusive accuracy boundary.
Outcome criterion7() {
    if (accuracy2({5}, {7}) != 1.0) return {false, "|5-7|=2 was not counted as accurate"};

    oracles::TestRng rng(70707);
    double max_tau_diff = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.uniform_int(1, 20);
        std::vector<int> pred, truth;
        for (int i = 0; i < n; ++i) {
            pred.push_back(trial % 2 == 0 ? rng.uniform_int(0, 7)
                                          : (rng.chance(0.5) ? 2 : 5));
            truth.push_back(rng.uniform_int(0, 7));
        }
        if (accuracy2(pred, truth) != oracles::accuracy2(pred, truth))
            return {false, "accuracy2 disagrees with the oracle on trial " + std::to_string(trial)};
        if (asd(pred, truth) != oracles::asd(pred, truth))
            return {false, "asd disagrees with the oracle on trial " + std::to_string(trial)};

        std::vector<double> pd(pred.begin(), pred.end()), td(truth.begin(), truth.end());
        std::optional<double> lib = kendall_tau_b(pd, td);
        std::optional<double> ref = oracles::kendall_tau_b(pd, td);
        if (lib.has_value() != ref.has_value())
            return {false, "kendall definedness disagrees on trial " + std::to_string(trial)};
        if (lib) {
            double diff = std::abs(*lib - *ref);
            max_tau_diff = std::max(max_tau_diff, diff);
            if (diff > 1e-12)
                return {false, "kendall tau off by " + fmt(diff) + " on trial " +
                                   std::to_string(trial)};
        }
    }
    return {true, "100 random instances: accuracy2/asd exact, tau within " +
                      fmt(max_tau_diff, 2) + " (<=1e-12)"};
}

// --- criterion 9: the threshold grid search is optimal and tie-breaks low.
Outcome criterion9() {
    oracles::TestRng rng(90909);
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.uniform_int(1, 40);
        std::vector<double> lr;
        std::vector<int> truth;
        for (int i = 0; i < n; ++i) {
            lr.push_back(rng.uniform(-1.0, 8.0));
            truth.push_back(rng.uniform_int(0, 7));
        }
        double tau = fit_threshold(lr, truth).tau;
        auto acc_at = [&](double t) {
            ThresholdClassifier clf{t};
            std::vector<int> pred;
            for (double s : lr) pred.push_back(classify(s, clf));
            return oracles::accuracy2(pred, truth);
        };
        double chosen = acc_at(tau);
        for (int i = 0; i <= 70; ++i) {
            double grid = static_cast<double>(i) / 10.0;
            double acc = acc_at(grid);
            if (acc > chosen)
                return {false, "tau " + fmt(tau) + " beaten by " + fmt(grid) + " on trial " +
                                   std::to_string(trial)};
            if (grid < tau && acc == chosen)
                return {false, "tie not broken toward the smaller tau on trial " +
                                   std::to_string(trial)};
        }
    }
    return {true, "100 random score sets: chosen tau maximizes accuracy2 over all 71 grid points, "
                  "smallest on ties"};
}

// --- criterion 8: the full command-line round trip is byte-deterministic
// and the traced regression scores match the written model.
Outcome criterion8(Clock::time_point suite_start) {
    const std::string cli = TRISCORE_CLI;
    const std::string data = TRISCORE_DATA_DIR;
    fs::path dir = fs::temp_directory_path() / "triscore_acceptance";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return {false, "cannot create " + dir.string()};

    auto run = [](const std::string& cmd) {
        int status = std::system(cmd.c_str());
        if (status == -1) return -1;
        return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
    };
    std::string resources = " --kg " + data + "/kg.nt --concepts " + data +
                            "/concepts.tsv --demonyms " + data + "/demonyms.tsv --vectors " +
                            data + "/vectors.txt --candidates " + data +
                            "/candidates.tsv --mapping " + data + "/mapping.tsv";

    // Train twice with the identical command line; model bytes and stdout
    // must both come out the same.
    std::string model_path = (dir / "model.txt").string();
    std::string model_bytes[2], train_outs[2];
    for (int i = 0; i < 2; ++i) {
        std::string out = (dir / ("train" + std::to_string(i) + ".out")).string();
        std::string cmd = cli + " train" + resources + " --model " + model_path + " --input " +
                          data + "/nationality.train.tsv --predicate nationality --input " + data +
                          "/profession.train.tsv --predicate profession > " + out + " 2>&1";
        if (run(cmd) != 0) return {false, "train exited nonzero (see " + out + ")"};
        model_bytes[i] = read_file(model_path);
        train_outs[i] = read_file(out);
    }
    if (model_bytes[0] != model_bytes[1] || model_bytes[0].empty())
        return {false, "two train runs wrote different model files"};
    if (train_outs[0] != train_outs[1] || train_outs[0].empty())
        return {false, "two train runs printed different reports"};

    // Pairs file for scoring: the labeled rows without their scores.
    std::string pairs = (dir / "pairs.tsv").string();
    {
        std::string text;
        for (const DatasetRow& row :
             load_dataset(data + "/nationality.train.tsv", Predicate::nationality, true))
            text += row.fact.subject + "\t" + row.fact.object + "\n";
        write_file(pairs, text);
    }

    std::string preds[2];
    for (int i = 0; i < 2; ++i) {
        preds[i] = (dir / ("preds" + std::to_string(i) + ".tsv")).string();
        std::string out = (dir / ("score" + std::to_string(i) + ".out")).string();
        std::string cmd = cli + " score" + resources + " --model " + model_path + " --input " +
                          pairs + " --predicate nationality --output " + preds[i] + " --trace > " +
                          out + " 2>&1";
        if (run(cmd) != 0) return {false, "score exited nonzero (see " + out + ")"};
    }
    if (read_file(preds[0]) != read_file(preds[1]) || read_file(preds[0]).empty())
        return {false, "two score runs wrote different predictions"};

    // Traced regression scores vs the model applied to the traced features.
    ModelFile model = load_model(model_path);
    double max_lr_err = 0.0;
    std::vector<std::string> lines = split_lines(read_file(preds[0]));
    size_t rows = 0;
    for (const std::string& line : lines) {
        if (trim(line).empty()) continue;
        ++rows;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 9) return {false, "traced row has " + std::to_string(cols.size()) +
                                                 " columns, expected 9"};
        FeatureVector f;
        for (size_t j = 0; j < 5; ++j) f[j] = parse_double(cols[3 + j]).value();
        double lr = parse_double(cols[8]).value();
        max_lr_err = std::max(max_lr_err, std::abs(lr - score_lr(model.model, f)));
        if (cols[2] != std::to_string(classify(lr, model.classifier)))
            return {false, "traced class disagrees with the thresholded score"};
    }
    if (rows != 12) return {false, "expected 12 scored rows, got " + std::to_string(rows)};
    if (max_lr_err > 1e-9)
        return {false, "traced regression score off by " + fmt(max_lr_err)};

    std::string evals[2];
    for (int i = 0; i < 2; ++i) {
        std::string out = (dir / ("eval" + std::to_string(i) + ".out")).string();
        std::string cmd = cli + " eval " + preds[0] + " " + data + "/nationality.train.tsv > " +
                          out + " 2>&1";
        if (run(cmd) != 0) return {false, "eval exited nonzero (see " + out + ")"};
        evals[i] = read_file(out);
    }
    if (evals[0] != evals[1] || evals[0].find("accuracy2 = ") == std::string::npos)
        return {false, "two eval runs printed different reports"};

    double total = seconds_since(suite_start);
    if (total >= 30.0) return {false, "suite took " + fmt(total, 3) + " s (>= 30 s)"};
    return {true, "train/score/eval byte-identical across reruns, trace lr err " +
                      fmt(max_lr_err, 2) + " (<=1e-9), suite " + fmt(total, 3) + " s"};
}

}  // namespace

int main() {
    Clock::time_point suite_start = Clock::now();
    std::array<Outcome, 9> results;
    results[0] = criterion1();
    results[1] = criterion2();
    results[2] = criterion3();
    results[3] = criterion4();
    results[4] = criterion5();
    results[5] = criterion6();
    results[6] = criterion7();
    results[8] = criterion9();
    results[7] = criterion8(suite_start);  // last: folds total elapsed time into its check

    bool all = true;
    for (size_t i = 0; i < results.size(); ++i) {
        all = all && results[i].pass;
        std::printf("criterion %zu: %s — %s\n", i + 1, results[i].pass ? "PASS" : "FAIL",
                    results[i].detail.c_str());
    }
    return all ? 0 : 1;
}
