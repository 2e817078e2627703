#include "stylus/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "stylus/error.hpp"
#include "stylus/rng.hpp"
#include "stylus/text.hpp"

namespace stylus {

namespace {

// Bootstrap SE over one figure's record subset.
AccuracyFigure bootstrap_figure(std::span<const char> correctness, int iters, uint64_t seed,
                                std::string_view figure_salt) {
    AccuracyFigure fig;
    fig.n = correctness.size();
    for (char c : correctness) fig.correct += c;
    fig.value = fig.n ? static_cast<double>(fig.correct) / static_cast<double>(fig.n) : 0.0;
    if (iters < 2 || fig.n == 0) {
        fig.se_degenerate = true;
        return fig;
    }
    const uint64_t figure_seed = derive_seed(seed, figure_salt);
    std::vector<double> replicates;
    replicates.reserve(static_cast<size_t>(iters));
    for (int it = 0; it < iters; ++it) {
        SplitMix64 rng(derive_seed(figure_seed, static_cast<uint64_t>(it)));
        size_t hits = 0;
        for (size_t k = 0; k < fig.n; ++k) hits += correctness[rng.next_below(fig.n)];
        replicates.push_back(static_cast<double>(hits) / static_cast<double>(fig.n));
    }
    double mean = 0;
    for (double r : replicates) mean += r;
    mean /= static_cast<double>(replicates.size());
    double ss = 0;
    for (double r : replicates) ss += (r - mean) * (r - mean);
    fig.se = std::sqrt(ss / static_cast<double>(replicates.size() - 1));
    return fig;
}

} // namespace

AccuracyReport accuracy_report(std::span<const PredictionRecord> preds, int bootstrap_iters,
                               uint64_t seed) {
    if (preds.empty()) throw Error(ErrorCode::EmptyPredictions, "no prediction records");
    if (bootstrap_iters < 1)
        throw Error(ErrorCode::ConfigError, "bootstrap iterations must be >= 1");

    std::vector<char> overall;
    std::map<std::string, std::vector<char>> by_class;
    std::map<std::string, std::vector<char>> by_withheld;
    for (const auto& rec : preds) {
        const char correct = rec.predicted_label == rec.true_label ? 1 : 0;
        overall.push_back(correct);
        by_class[rec.true_label].push_back(correct);
        by_withheld[rec.from_withheld_novel ? "withheld" : "in_training"].push_back(correct);
    }

    AccuracyReport report;
    report.overall = bootstrap_figure(overall, bootstrap_iters, seed, "overall");
    for (const auto& [label, records] : by_class)
        report.by_class[label] =
            bootstrap_figure(records, bootstrap_iters, seed, "class:" + label);
    for (const auto& [key, records] : by_withheld)
        report.by_withheld[key] =
            bootstrap_figure(records, bootstrap_iters, seed, "withheld:" + key);
    return report;
}

ConfusionMatrix confusion_matrix(std::span<const PredictionRecord> preds) {
    if (preds.empty()) throw Error(ErrorCode::EmptyPredictions, "no prediction records");
    std::set<std::string> labels;
    for (const auto& rec : preds) {
        labels.insert(rec.true_label);
        if (rec.predicted_label != kOutOfSet) labels.insert(rec.predicted_label);
    }
    ConfusionMatrix m;
    m.classes.assign(labels.begin(), labels.end());
    std::unordered_map<std::string, size_t> index;
    for (size_t i = 0; i < m.classes.size(); ++i) index[m.classes[i]] = i;

    m.counts.assign(m.classes.size(), std::vector<size_t>(m.classes.size(), 0));
    m.out_of_set.assign(m.classes.size(), 0);
    for (const auto& rec : preds) {
        size_t row = index.at(rec.true_label);
        if (rec.predicted_label == kOutOfSet)
            ++m.out_of_set[row];
        else
            ++m.counts[row][index.at(rec.predicted_label)];
    }

    m.row_percent.assign(m.classes.size(), std::vector<double>(m.classes.size(), 0.0));
    for (size_t r = 0; r < m.classes.size(); ++r) {
        size_t in_set = 0;
        for (size_t c = 0; c < m.classes.size(); ++c) in_set += m.counts[r][c];
        if (in_set == 0) continue;
        for (size_t c = 0; c < m.classes.size(); ++c)
            m.row_percent[r][c] =
                100.0 * static_cast<double>(m.counts[r][c]) / static_cast<double>(in_set);
    }
    return m;
}

ScapegoatShares scapegoat_shares(std::span<const PredictionRecord> preds, size_t top_n) {
    std::map<std::string, size_t> errors; // predicted label -> misattribution count
    size_t total = 0;
    for (const auto& rec : preds) {
        if (rec.predicted_label == rec.true_label) continue;
        ++errors[rec.predicted_label];
        ++total;
    }
    if (total == 0) throw Error(ErrorCode::NoMisattributions, "all predictions correct");

    std::vector<std::pair<std::string, size_t>> ranked(errors.begin(), errors.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    ScapegoatShares shares;
    shares.total_errors = total;
    size_t cumulative = 0;
    for (size_t n = 0; n < top_n; ++n) {
        if (n < ranked.size()) {
            shares.ranked_labels.push_back(ranked[n].first);
            cumulative += ranked[n].second;
        }
        shares.cumulative_percent.push_back(100.0 * static_cast<double>(cumulative) /
                                            static_cast<double>(total));
    }
    return shares;
}

std::vector<ClassStyleMetrics> class_style_metrics(std::span<const Sample> train,
                                                   size_t sample_cap, uint64_t seed) {
    std::map<std::string, std::vector<const Sample*>> by_class;
    for (const auto& sample : train) by_class[sample.class_label].push_back(&sample);
    if (by_class.empty()) return {};
    for (const auto& [label, list] : by_class)
        if (list.empty()) throw Error(ErrorCode::EmptyClass, label);

    size_t quota = sample_cap;
    for (const auto& [label, list] : by_class) quota = std::min(quota, list.size());

    // seeded equal-size sample per class, then lowercased alphabetic types
    std::map<std::string, std::set<std::string>> types;
    for (const auto& [label, list] : by_class) {
        std::vector<size_t> order(list.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        SplitMix64 rng(derive_seed(seed, label));
        seeded_shuffle(order, rng);
        auto& type_set = types[label];
        for (size_t i = 0; i < quota; ++i) {
            for (auto& word : word_tokens(list[order[i]]->text)) {
                if (word.find('\'') != std::string::npos) continue; // alphabetic types only
                type_set.insert(std::move(word));
            }
        }
    }

    std::map<std::string, size_t> class_df;
    for (const auto& [label, type_set] : types)
        for (const auto& word : type_set) ++class_df[word];

    std::vector<ClassStyleMetrics> metrics;
    for (const auto& [label, type_set] : types) {
        ClassStyleMetrics m;
        m.class_label = label;
        m.vocab_size = type_set.size();
        m.metric_version = std::string(kUniquenessMetricVersion);
        if (!type_set.empty()) {
            double sum = 0;
            for (const auto& word : type_set)
                sum += 1.0 / static_cast<double>(class_df.at(word));
            m.uniqueness = 100.0 * sum / static_cast<double>(type_set.size());
        }
        metrics.push_back(std::move(m));
    }
    return metrics;
}

namespace {

// Regularized incomplete beta by Lentz's continued fraction.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

} // namespace

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    const size_t n = x.size();
    if (n < 3) throw Error(ErrorCode::DegenerateInput, "need at least 3 points");

    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error(ErrorCode::DegenerateInput, "constant input vector");

    PearsonResult result;
    result.n = n;
    result.r = sxy / std::sqrt(sxx * syy);
    result.r = std::clamp(result.r, -1.0, 1.0);

    const double df = static_cast<double>(n - 2);
    const double one_minus_r2 = 1.0 - result.r * result.r;
    if (one_minus_r2 <= 0.0) {
        result.p = 0.0;
        return result;
    }
    const double t = result.r * std::sqrt(df / one_minus_r2);
    // two-sided p: survival of |t| under Student's t with df degrees of freedom
    result.p = reg_inc_beta(df / 2.0, 0.5, df / (df + t * t));
    return result;
}

const char* to_string(PriorKind prior) {
    return prior == PriorKind::uniform ? "uniform" : "informative";
}

double default_alpha0(const WeightMatrix& matrix) {
    return 0.01 * static_cast<double>(matrix.token_types().size());
}

FightinWordsResult fightin_words(const WeightMatrix& matrix, const std::string& group_i,
                                 const std::string& group_j, double alpha0, PriorKind prior) {
    if (alpha0 <= 0.0)
        throw Error(ErrorCode::NonpositiveAlpha, "alpha0 = " + std::to_string(alpha0));
    const size_t gi = matrix.group_index(group_i);
    const size_t gj = matrix.group_index(group_j);
    const auto& tokens = matrix.token_types();
    const size_t v = tokens.size();

    const double ni = matrix.row_sum(gi);
    const double nj = matrix.row_sum(gj);
    const double pooled_total = ni + nj;

    FightinWordsResult result;
    result.alpha0 = alpha0;
    result.prior = prior;
    result.group_i = group_i;
    result.group_j = group_j;
    result.scores.reserve(v);
    for (size_t w = 0; w < v; ++w) {
        const double yi = matrix.at(gi, w);
        const double yj = matrix.at(gj, w);
        double aw;
        if (prior == PriorKind::uniform) {
            aw = alpha0 / static_cast<double>(v);
        } else {
            aw = pooled_total > 0 ? alpha0 * (yi + yj) / pooled_total : 0.0;
            if (aw <= 0.0) aw = alpha0 / static_cast<double>(v); // unseen token fallback
        }
        TokenScore score;
        score.token = tokens[w];
        score.delta = std::log((yi + aw) / (ni + alpha0 - yi - aw)) -
                      std::log((yj + aw) / (nj + alpha0 - yj - aw));
        const double variance = 1.0 / (yi + aw) + 1.0 / (yj + aw);
        score.zscore = score.delta / std::sqrt(variance);
        score.rate_i = ni > 0 ? yi / ni : 0.0;
        score.rate_j = nj > 0 ? yj / nj : 0.0;
        result.scores.push_back(std::move(score));
    }
    std::stable_sort(result.scores.begin(), result.scores.end(),
                     [](const TokenScore& a, const TokenScore& b) { return a.zscore > b.zscore; });
    return result;
}

FightinWordsResult one_vs_rest_fightin(const WeightMatrix& matrix,
                                       const std::string& target_group, double alpha0,
                                       PriorKind prior) {
    if (matrix.groups().size() < 2)
        throw Error(ErrorCode::UnknownGroup, "one-vs-rest needs at least 2 groups");
    matrix.group_index(target_group);

    std::vector<WeightTriple> triples;
    const std::string rest_label = "__rest__";
    for (size_t g = 0; g < matrix.groups().size(); ++g) {
        const bool is_target = matrix.groups()[g] == target_group;
        for (size_t c = 0; c < matrix.token_types().size(); ++c) {
            if (is_target) {
                triples.push_back({target_group, matrix.token_types()[c], matrix.at(g, c)});
            }
        }
    }
    for (size_t c = 0; c < matrix.token_types().size(); ++c) {
        double sum = 0;
        for (size_t g = 0; g < matrix.groups().size(); ++g)
            if (matrix.groups()[g] != target_group) sum += matrix.at(g, c);
        triples.push_back({rest_label, matrix.token_types()[c], sum});
    }
    WeightMatrix combined = WeightMatrix::from_triples(triples, matrix.kind());
    FightinWordsResult result = fightin_words(combined, target_group, rest_label, alpha0, prior);
    result.group_j = "rest";
    return result;
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    if (std::equal(a.begin(), a.end(), b.begin())) return a.empty() ? 0.0 : 1.0;
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace

EmbeddingTable build_average_table(std::span<const EmbeddingTable> class_tables) {
    if (class_tables.empty()) throw Error(ErrorCode::DimensionMismatch, "no class tables");
    EmbeddingTable average;
    average.owner = std::string(kAverageOwner);
    average.dim = class_tables.front().dim;

    std::map<std::string, std::pair<std::vector<double>, long long>> accum; // sum over classes, df
    for (const auto& table : class_tables) {
        if (table.dim != average.dim)
            throw Error(ErrorCode::DimensionMismatch,
                        table.owner + ": dim " + std::to_string(table.dim) + " vs " +
                            std::to_string(average.dim));
        for (const auto& [word, vec] : table.vectors) {
            auto& [sum, df] = accum[word];
            if (sum.empty()) sum.assign(average.dim, 0.0);
            for (size_t i = 0; i < average.dim; ++i) sum[i] += vec[i];
            ++df;
        }
    }
    for (auto& [word, entry] : accum) {
        auto& [sum, df] = entry;
        std::vector<double> mean(average.dim);
        for (size_t i = 0; i < average.dim; ++i)
            mean[i] = sum[i] / static_cast<double>(df); // unweighted over classes using the word
        average.vectors.emplace(word, std::move(mean));
        average.support.emplace(word, df);
    }
    return average;
}

std::vector<EmbeddingSimilarityScores> embedding_similarity_scores(
    std::span<const EmbeddingTable> class_tables, const EmbeddingTable& average_table,
    std::span<const EmbeddingTable> test_excerpts,
    const std::map<std::string, std::string>& sample_to_class) {
    std::map<std::string, const EmbeddingTable*> by_class;
    for (const auto& table : class_tables) {
        if (table.dim != average_table.dim)
            throw Error(ErrorCode::DimensionMismatch, table.owner);
        by_class[table.owner] = &table;
    }

    // per-class mean over the training vocabulary, zero for uncovered words
    std::map<std::string, EmbeddingSimilarityScores> scores;
    for (const auto& [label, table] : by_class) {
        EmbeddingSimilarityScores s;
        s.class_label = label;
        if (!average_table.vectors.empty()) {
            double sum = 0;
            for (const auto& [word, avg_vec] : average_table.vectors) {
                const auto* class_vec = table->find(word);
                sum += class_vec ? cosine(*class_vec, avg_vec) : 0.0;
            }
            s.train_vs_average = sum / static_cast<double>(average_table.vectors.size());
        }
        scores[label] = std::move(s);
    }

    // per-excerpt mean vs. the class's training vectors, averaged per class
    std::map<std::string, std::pair<double, size_t>> excerpt_sums; // class -> (sum, excerpts)
    for (const auto& excerpt : test_excerpts) {
        auto cls = sample_to_class.find(excerpt.owner);
        if (cls == sample_to_class.end())
            throw Error(ErrorCode::UnknownSampleId, excerpt.owner);
        auto table_it = by_class.find(cls->second);
        if (table_it == by_class.end()) throw Error(ErrorCode::UnknownGroup, cls->second);
        if (excerpt.dim != average_table.dim)
            throw Error(ErrorCode::DimensionMismatch, excerpt.owner);
        double sum = 0;
        for (const auto& [word, test_vec] : excerpt.vectors) {
            const auto* train_vec = table_it->second->find(word);
            sum += train_vec ? cosine(test_vec, *train_vec) : 0.0; // zero for unseen words
        }
        const double mean =
            excerpt.vectors.empty() ? 0.0 : sum / static_cast<double>(excerpt.vectors.size());
        auto& [total, count] = excerpt_sums[cls->second];
        total += mean;
        ++count;
    }
    for (auto& [label, entry] : excerpt_sums) {
        auto it = scores.find(label);
        if (it != scores.end() && entry.second > 0)
            it->second.test_vs_train = entry.first / static_cast<double>(entry.second);
    }

    std::vector<EmbeddingSimilarityScores> out;
    out.reserve(scores.size());
    for (auto& [label, s] : scores) out.push_back(std::move(s));
    return out;
}

} // namespace stylus
