#pragma once
// Stacking layer: ridge-regularized linear regression over the five module
// scores, binarized to {2, 5} by a learned threshold. Also the evaluation
// metrics (accuracy within 2, mean absolute difference, Kendall tau-b,
// Pearson correlation) and seeded k-fold cross-validation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triscore/io.hpp"
#include "triscore/text.hpp"

namespace triscore {

using FeatureVector = std::array<double, 5>;

struct RidgeModel {
    std::array<double, 5> w{};  // per-source trustworthiness
    double b = 0.0;
    double ridge = 0.0;

    void validate() const {
        for (double x : w)
            if (!std::isfinite(x)) throw std::invalid_argument("non-finite model weight");
        if (!std::isfinite(b)) throw std::invalid_argument("non-finite model bias");
        if (!(ridge >= 0.0)) throw std::invalid_argument("ridge strength must be >= 0");
    }
};

inline double score_lr(const RidgeModel& model, const FeatureVector& f) {
    double s = model.b;
    for (size_t i = 0; i < f.size(); ++i) s += model.w[i] * f[i];
    return s;
}

namespace detail {

// Gaussian elimination with partial pivoting on an n x n system held as
// rows of (coefficients, rhs).
template <size_t N>
inline std::array<double, N> solve_linear(std::array<std::array<double, N + 1>, N> a) {
    double scale = 0.0;
    for (size_t i = 0; i < N; ++i) scale = std::max(scale, std::abs(a[i][i]));
    double tol = scale * 1e-13;

    for (size_t col = 0; col < N; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < N; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) <= tol)
            throw std::runtime_error(
                "normal equations are singular; use a positive ridge strength");
        std::swap(a[col], a[pivot]);
        for (size_t r = col + 1; r < N; ++r) {
            double factor = a[r][col] / a[col][col];
            for (size_t c = col; c <= N; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    std::array<double, N> x{};
    for (size_t i = N; i-- > 0;) {
        double s = a[i][N];
        for (size_t c = i + 1; c < N; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

}  // namespace detail

// Least squares over the 5 features plus an unpenalized constant column for
// the bias; the ridge term penalizes only the five weights. Solved directly
// through the 6x6 normal equations.
inline RidgeModel fit_ridge(const std::vector<FeatureVector>& X, const std::vector<double>& y,
                            double ridge) {
    if (X.size() != y.size()) throw std::invalid_argument("feature/target length mismatch");
    if (X.size() < 6) throw std::invalid_argument("need at least 6 samples to fit 5 weights + bias");
    if (!(ridge >= 0.0)) throw std::invalid_argument("ridge strength must be >= 0");

    constexpr size_t D = 6;  // 5 weights + bias
    std::array<std::array<double, D + 1>, D> a{};
    auto component = [](const FeatureVector& f, size_t j) { return j < 5 ? f[j] : 1.0; };
    for (size_t n = 0; n < X.size(); ++n) {
        for (size_t i = 0; i < D; ++i) {
            double xi = component(X[n], i);
            for (size_t j = 0; j < D; ++j) a[i][j] += xi * component(X[n], j);
            a[i][D] += xi * y[n];
        }
    }
    for (size_t i = 0; i < 5; ++i) a[i][i] += ridge;

    std::array<double, D> sol = detail::solve_linear<D>(a);
    RidgeModel m;
    std::copy(sol.begin(), sol.begin() + 5, m.w.begin());
    m.b = sol[5];
    m.ridge = ridge;
    m.validate();
    return m;
}

// ------------------------------------------------------------ binarization

struct ThresholdClassifier {
    double tau = 3.5;

    void validate() const {
        if (!(tau >= 0.0) || tau > 7.0)
            throw std::invalid_argument("threshold must lie in [0,7]");
    }
};

// 5 when the regression score reaches the threshold, 2 otherwise.
inline int classify(double lr_score, const ThresholdClassifier& clf) {
    return lr_score >= clf.tau ? 5 : 2;
}

// --------------------------------------------------------------- metrics

// Fraction of predictions within an absolute difference of 2, inclusive.
inline double accuracy2(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) throw std::invalid_argument("accuracy2: length mismatch");
    if (pred.empty()) throw std::invalid_argument("accuracy2: empty input");
    size_t ok = 0;
    for (size_t i = 0; i < pred.size(); ++i)
        if (std::abs(pred[i] - truth[i]) <= 2) ++ok;
    return static_cast<double>(ok) / static_cast<double>(pred.size());
}

// Mean absolute difference.
inline double asd(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) throw std::invalid_argument("asd: length mismatch");
    if (pred.empty()) throw std::invalid_argument("asd: empty input");
    double sum = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - truth[i]);
    return sum / static_cast<double>(pred.size());
}

// Tie-corrected Kendall tau-b; empty when undefined (all of either side
// tied, or fewer than two items).
inline std::optional<double> kendall_tau_b(const std::vector<double>& a,
                                           const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("kendall_tau_b: length mismatch");
    size_t n = a.size();
    if (n < 2) return std::nullopt;
    long long concordant = 0, discordant = 0, tied_a = 0, tied_b = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double da = a[i] - a[j];
            double db = b[i] - b[j];
            if (da == 0.0) ++tied_a;  // pairs tied in both sides count in both totals
            if (db == 0.0) ++tied_b;
            if (da == 0.0 || db == 0.0) continue;
            if ((da > 0.0) == (db > 0.0)) ++concordant;
            else ++discordant;
        }
    }
    long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
    double denom_a = static_cast<double>(n0 - tied_a);
    double denom_b = static_cast<double>(n0 - tied_b);
    if (denom_a == 0.0 || denom_b == 0.0) return std::nullopt;
    return static_cast<double>(concordant - discordant) / std::sqrt(denom_a * denom_b);
}

// Average tau-b over subjects, skipping groups where tau is undefined.
// `groups` maps a subject key to parallel (pred, truth) lists.
inline double kendall_tau_per_subject(
    const std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>& groups) {
    double sum = 0.0;
    size_t defined = 0;
    for (const auto& [subject, lists] : groups) {
        std::optional<double> tau = kendall_tau_b(lists.first, lists.second);
        if (tau) {
            sum += *tau;
            ++defined;
        }
    }
    if (defined == 0)
        throw std::invalid_argument("kendall_tau_per_subject: no group has a defined tau");
    return sum / static_cast<double>(defined);
}

// Pearson correlation; empty when either side has zero variance.
inline std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
    size_t n = a.size();
    if (n < 2) return std::nullopt;
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) return std::nullopt;
    return cov / std::sqrt(va * vb);
}

// ---------------------------------------------------------- threshold fit

// Exhaustive grid search of tau over {0.0, 0.1, ..., 7.0} maximizing
// accuracy2 of the binarized scores; ties keep the smallest tau.
inline ThresholdClassifier fit_threshold(const std::vector<double>& lr_scores,
                                         const std::vector<int>& truths) {
    if (lr_scores.size() != truths.size())
        throw std::invalid_argument("fit_threshold: length mismatch");
    if (lr_scores.empty()) throw std::invalid_argument("fit_threshold: empty input");
    double best_tau = 0.0;
    double best_acc = -1.0;
    for (int i = 0; i <= 70; ++i) {
        ThresholdClassifier clf{static_cast<double>(i) / 10.0};
        std::vector<int> pred;
        pred.reserve(lr_scores.size());
        for (double s : lr_scores) pred.push_back(classify(s, clf));
        double acc = accuracy2(pred, truths);
        if (acc > best_acc) {
            best_acc = acc;
            best_tau = clf.tau;
        }
    }
    return ThresholdClassifier{best_tau};
}

// --------------------------------------------------------- cross-validation

inline constexpr uint32_t kDefaultCvSeed = 42;

struct CvOptions {
    size_t k = 10;
    double ridge = 1e-8;
    uint32_t seed = kDefaultCvSeed;
};

struct EvalReport {
    double accuracy2 = 0.0;
    double asd = 0.0;
    double kendall_tau = 0.0;
    double rho = 0.0;
    bool kendall_defined = false;
    bool rho_defined = false;
};

namespace detail {

// Explicit Fisher-Yates on a fixed generator, so fold assignment never
// depends on the standard library's std::shuffle implementation.
inline std::vector<size_t> shuffled_indices(size_t n, uint32_t seed) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937 rng(seed);
    for (size_t i = n; i > 1; --i) {
        size_t j = static_cast<size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

}  // namespace detail

// Seeded k-fold cross-validation: per-fold ridge + threshold fit on the
// train split, metrics on the held-out fold. accuracy2/asd are averaged
// over folds; tau is computed per subject on the pooled out-of-fold
// predictions (when subject keys are supplied); rho is the Pearson
// correlation of pooled out-of-fold regression scores against the truths.
inline EvalReport cross_validate(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                                 const CvOptions& options = {},
                                 const std::vector<std::string>* subjects = nullptr) {
    if (X.size() != y.size()) throw std::invalid_argument("cross_validate: length mismatch");
    if (options.k < 2) throw std::invalid_argument("cross_validate: need k >= 2");
    if (X.size() < options.k)
        throw std::invalid_argument("cross_validate: fewer samples than folds");
    if (subjects && subjects->size() != X.size())
        throw std::invalid_argument("cross_validate: subject list length mismatch");

    size_t n = X.size();
    std::vector<size_t> order = detail::shuffled_indices(n, options.seed);
    std::vector<size_t> fold_of(n);
    for (size_t pos = 0; pos < n; ++pos) fold_of[order[pos]] = pos % options.k;

    double acc_sum = 0.0, asd_sum = 0.0;
    std::vector<double> pooled_lr(n, 0.0);
    std::vector<int> pooled_pred(n, 0);

    for (size_t fold = 0; fold < options.k; ++fold) {
        std::vector<FeatureVector> train_x;
        std::vector<double> train_y;
        std::vector<size_t> test_idx;
        for (size_t i = 0; i < n; ++i) {
            if (fold_of[i] == fold) test_idx.push_back(i);
            else {
                train_x.push_back(X[i]);
                train_y.push_back(static_cast<double>(y[i]));
            }
        }
        RidgeModel model = fit_ridge(train_x, train_y, options.ridge);
        std::vector<double> train_lr;
        std::vector<int> train_truth;
        train_lr.reserve(train_x.size());
        for (const FeatureVector& f : train_x) train_lr.push_back(score_lr(model, f));
        for (double t : train_y) train_truth.push_back(static_cast<int>(t));
        ThresholdClassifier clf = fit_threshold(train_lr, train_truth);

        std::vector<int> pred, truth;
        for (size_t i : test_idx) {
            double lr = score_lr(model, X[i]);
            pooled_lr[i] = lr;
            pooled_pred[i] = classify(lr, clf);
            pred.push_back(pooled_pred[i]);
            truth.push_back(y[i]);
        }
        acc_sum += accuracy2(pred, truth);
        asd_sum += asd(pred, truth);
    }

    EvalReport report;
    report.accuracy2 = acc_sum / static_cast<double>(options.k);
    report.asd = asd_sum / static_cast<double>(options.k);

    std::vector<double> truth_d(n);
    for (size_t i = 0; i < n; ++i) truth_d[i] = static_cast<double>(y[i]);
    if (std::optional<double> rho = pearson(pooled_lr, truth_d)) {
        report.rho = *rho;
        report.rho_defined = true;
    }
    if (subjects) {
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
        for (size_t i = 0; i < n; ++i) {
            auto& [p, t] = groups[(*subjects)[i]];
            p.push_back(static_cast<double>(pooled_pred[i]));
            t.push_back(truth_d[i]);
        }
        try {
            report.kendall_tau = kendall_tau_per_subject(groups);
            report.kendall_defined = true;
        } catch (const std::invalid_argument&) {
            report.kendall_defined = false;
        }
    }
    return report;
}

// ------------------------------------------------------------- model file

struct ModelFile {
    RidgeModel model;
    ThresholdClassifier classifier;
    uint32_t seed = kDefaultCvSeed;
};

// Plain-text `key = value` lines; values carry full precision and
// round-trip bit-exactly.
inline void save_model(const ModelFile& m, const std::string& path) {
    m.model.validate();
    m.classifier.validate();
    std::string out;
    for (size_t i = 0; i < 5; ++i)
        out += "w" + std::to_string(i + 1) + " = " + format_double(m.model.w[i]) + "\n";
    out += "b = " + format_double(m.model.b) + "\n";
    out += "R = " + format_double(m.model.ridge) + "\n";
    out += "tau = " + format_double(m.classifier.tau) + "\n";
    out += "seed = " + std::to_string(m.seed) + "\n";
    write_file(path, out);
}

inline ModelFile load_model(const std::string& path) {
    ModelFile m;
    std::array<bool, 9> have{};
    static const std::array<std::string, 9> keys = {"w1", "w2", "w3",  "w4",  "w5",
                                                    "b",  "R",  "tau", "seed"};
    size_t line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        size_t eq = trimmed.find('=');
        if (eq == std::string_view::npos) throw ParseError(path, line_no, "expected `key = value`");
        std::string key(trim(trimmed.substr(0, eq)));
        std::string value(trim(trimmed.substr(eq + 1)));
        auto it = std::find(keys.begin(), keys.end(), key);
        if (it == keys.end()) throw ParseError(path, line_no, "unknown key: " + key);
        size_t ki = static_cast<size_t>(it - keys.begin());
        if (have[ki]) throw ParseError(path, line_no, "duplicate key: " + key);
        have[ki] = true;
        if (key == "seed") {
            uint32_t seed = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
            if (ec != std::errc() || ptr != value.data() + value.size())
                throw ParseError(path, line_no, "bad seed: " + value);
            m.seed = seed;
            continue;
        }
        std::optional<double> v = parse_double(value);
        if (!v || !std::isfinite(*v)) throw ParseError(path, line_no, "bad value: " + value);
        if (ki < 5) m.model.w[ki] = *v;
        else if (key == "b") m.model.b = *v;
        else if (key == "R") m.model.ridge = *v;
        else m.classifier.tau = *v;
    }
    for (size_t i = 0; i < keys.size(); ++i)
        if (!have[i]) throw ParseError(path, 0, "missing key: " + keys[i]);
    m.model.validate();
    m.classifier.validate();
    return m;
}

}  // namespace triscore
