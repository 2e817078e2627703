#include "stylus/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stylus/analysis.hpp"
#include "stylus/classify.hpp"
#include "stylus/error.hpp"
#include "stylus/io_util.hpp"
#include "stylus/perturb.hpp"
#include "stylus/probe_io.hpp"
#include "stylus/report.hpp"
#include "stylus/rng.hpp"
#include "stylus/text.hpp"

namespace stylus {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

fs::path resolve(const fs::path& base, const fs::path& p) {
    return p.is_absolute() ? p : base / p;
}

void parallel_for(size_t n, size_t jobs, const std::function<void(size_t)>& body) {
    jobs = std::max<size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (size_t t = 0; t < jobs; ++t)
        workers.emplace_back([&] {
            try {
                for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(n); // stop the other workers
            }
        });
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct RunInfo {
    std::string version;
    std::string task;
    uint64_t config_hash = 0;
    uint64_t seed = 0;
    uint64_t split_seed = 0;
    uint64_t perturb_seed = 0;
    uint64_t analysis_seed = 0;
    AnalysisToggles toggles;

    std::string serialize() const {
        std::ostringstream out;
        out << "version\t" << version << "\n";
        out << "task\t" << task << "\n";
        out << "config_hash\t" << std::hex << config_hash << std::dec << "\n";
        out << "seed\t" << seed << "\n";
        out << "split_seed\t" << split_seed << "\n";
        out << "perturb_seed\t" << perturb_seed << "\n";
        out << "analysis_seed\t" << analysis_seed << "\n";
        out << "bootstrap_iters\t" << toggles.bootstrap_iters << "\n";
        out << "scapegoat_top_n\t" << toggles.scapegoat_top_n << "\n";
        out << "accuracy\t" << toggles.accuracy << "\n";
        out << "confusion\t" << toggles.confusion << "\n";
        out << "scapegoat\t" << toggles.scapegoat << "\n";
        out << "style_metrics\t" << toggles.style_metrics << "\n";
        out << "style_sample_cap\t" << toggles.style_sample_cap << "\n";
        out << "svg\t" << toggles.svg << "\n";
        return out.str();
    }

    static RunInfo parse(const std::string& content) {
        RunInfo info;
        for (auto line : split_view(content, '\n')) {
            auto fields = split_view(line, '\t');
            if (fields.size() != 2) continue;
            std::string key(fields[0]), value(fields[1]);
            if (key == "version") info.version = value;
            else if (key == "task") info.task = value;
            else if (key == "config_hash") info.config_hash = std::stoull(value, nullptr, 16);
            else if (key == "seed") info.seed = std::stoull(value);
            else if (key == "split_seed") info.split_seed = std::stoull(value);
            else if (key == "perturb_seed") info.perturb_seed = std::stoull(value);
            else if (key == "analysis_seed") info.analysis_seed = std::stoull(value);
            else if (key == "bootstrap_iters") info.toggles.bootstrap_iters = std::stoi(value);
            else if (key == "scapegoat_top_n") info.toggles.scapegoat_top_n = std::stoul(value);
            else if (key == "accuracy") info.toggles.accuracy = value == "1";
            else if (key == "confusion") info.toggles.confusion = value == "1";
            else if (key == "scapegoat") info.toggles.scapegoat = value == "1";
            else if (key == "style_metrics") info.toggles.style_metrics = value == "1";
            else if (key == "style_sample_cap") info.toggles.style_sample_cap = std::stoull(value);
            else if (key == "svg") info.toggles.svg = value == "1";
        }
        return info;
    }
};

// Content-hash checkpoints: a stage is skipped when its stamp matches and its
// outputs already exist.
class Stamps {
public:
    explicit Stamps(const fs::path& dir) : dir_(dir / ".stamps") {}

    bool fresh(const std::string& stage, uint64_t fingerprint,
               const std::vector<fs::path>& outputs) const {
        fs::path stamp = dir_ / stage;
        if (!fs::exists(stamp)) return false;
        for (const auto& out : outputs)
            if (!fs::exists(out)) return false;
        std::ifstream in(stamp);
        std::string stored;
        get_line(in, stored);
        std::ostringstream expect;
        expect << std::hex << fingerprint;
        return stored == expect.str();
    }

    void record(const std::string& stage, uint64_t fingerprint) const {
        std::ostringstream out;
        out << std::hex << fingerprint << "\n";
        write_file_atomic(dir_ / stage, out.str());
    }

private:
    fs::path dir_;
};

std::string perturbed_file_content(const std::vector<Sample>& samples,
                                   const std::vector<std::string>& texts) {
    std::ostringstream out;
    for (size_t i = 0; i < samples.size(); ++i)
        out << samples[i].sample_id << '\t' << texts[i] << "\n";
    return out.str();
}

std::vector<std::pair<std::string, std::string>> load_perturbed_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open variant file " + path.string());
    std::vector<std::pair<std::string, std::string>> rows;
    std::string line;
    while (get_line(in, line)) {
        if (line.empty()) continue;
        auto fields = split_view(line, '\t');
        if (fields.size() != 2) throw Error(ErrorCode::MalformedLine, path.string());
        rows.emplace_back(std::string(fields[0]), std::string(fields[1]));
    }
    return rows;
}

bool is_builtin_model(const std::string& id) {
    return id == "cosine_delta" || id == "svm_tfidf" || id == "random";
}

std::string sanitize_component(std::string s) {
    for (char& c : s)
        if (c == '/' || c == '\\' || c == ' ') c = '_';
    return s;
}

struct PredictionGroup {
    std::string model_id;
    std::string variant_id;
    std::vector<PredictionRecord> records;
};

void analyze_group(const PredictionGroup& group, const fs::path& out_dir,
                   const AnalysisToggles& toggles, uint64_t analysis_seed,
                   std::ostringstream& summary_csv, std::ostringstream& report_md) {
    const std::string stem =
        sanitize_component(group.model_id) + "__" + sanitize_component(group.variant_id);
    if (toggles.accuracy) {
        AccuracyReport report =
            accuracy_report(group.records, toggles.bootstrap_iters,
                            derive_seed(analysis_seed, group.model_id + "/" + group.variant_id));
        write_file_atomic(out_dir / ("accuracy_" + stem + ".csv"), accuracy_csv(report));
        report_md << accuracy_markdown(report, group.model_id + " / " + group.variant_id);
        auto figure = [&](const char* key) -> const AccuracyFigure* {
            auto it = report.by_withheld.find(key);
            return it == report.by_withheld.end() ? nullptr : &it->second;
        };
        const AccuracyFigure* in_training = figure("in_training");
        const AccuracyFigure* withheld = figure("withheld");
        summary_csv << group.model_id << ',' << group.variant_id << ','
                    << format_double(report.overall.value) << ','
                    << format_double(report.overall.se) << ',' << report.overall.n << ','
                    << (in_training ? format_double(in_training->value) : "") << ','
                    << (withheld ? format_double(withheld->value) : "") << "\n";
        if (toggles.svg) {
            std::vector<std::string> labels;
            std::vector<double> values, errors;
            for (const auto& [label, fig] : report.by_class) {
                labels.push_back(label);
                values.push_back(fig.value);
                errors.push_back(fig.se);
            }
            write_file_atomic(out_dir / ("accuracy_" + stem + ".svg"),
                              svg_bar_chart(labels, values, errors,
                                            group.model_id + " / " + group.variant_id));
        }
    }
    if (toggles.confusion) {
        ConfusionMatrix matrix = confusion_matrix(group.records);
        write_file_atomic(out_dir / ("confusion_" + stem + ".csv"), confusion_csv(matrix));
        write_file_atomic(out_dir / ("confusion_counts_" + stem + ".csv"),
                          confusion_counts_csv(matrix));
    }
    if (toggles.scapegoat) {
        try {
            ScapegoatShares shares = scapegoat_shares(group.records, toggles.scapegoat_top_n);
            write_file_atomic(out_dir / ("scapegoat_" + stem + ".csv"), scapegoat_csv(shares));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoMisattributions) throw;
            write_file_atomic(out_dir / ("scapegoat_" + stem + ".csv"),
                              "n,label,cumulative_percent\n# no misattributions\n");
        }
    }
}

void run_analysis_stage(const fs::path& out_dir, const RunInfo& info) {
    const AnalysisToggles& toggles = info.toggles;
    const fs::path pred_dir = out_dir / "predictions";
    const fs::path analysis_dir = out_dir / "analysis";
    fs::create_directories(analysis_dir);

    // class set = classes named in the manifest
    CorpusManifest manifest = load_manifest(out_dir / "manifest.tsv");
    std::set<std::string> classes(manifest.classes.begin(), manifest.classes.end());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(pred_dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::ostringstream summary_csv;
    summary_csv << "model,variant,overall,se,n,in_training,withheld\n";
    std::ostringstream report_md;
    report_md << "# stylus report\n\n";
    report_md << "- task: " << info.task << "\n";
    report_md << "- tool version: " << info.version << "\n";
    report_md << "- seed: " << info.seed << "\n";
    report_md << "- novels: " << manifest.novels.size() << ", classes: " << manifest.classes.size()
              << "\n\n";
    for (const auto& warning : manifest.warnings) report_md << "- warning: " << warning << "\n";

    for (const auto& file : files) {
        auto records = ingest_predictions(file, classes);
        if (records.empty()) continue;
        std::map<std::pair<std::string, std::string>, PredictionGroup> groups;
        for (auto& rec : records) {
            auto& group = groups[{rec.model_id, rec.variant_id}];
            group.model_id = rec.model_id;
            group.variant_id = rec.variant_id;
            group.records.push_back(std::move(rec));
        }
        for (const auto& [key, group] : groups)
            analyze_group(group, analysis_dir, toggles, info.analysis_seed, summary_csv,
                          report_md);
    }

    if (toggles.style_metrics) {
        auto samples = load_samples(out_dir / "samples.tsv");
        auto split = load_split(out_dir / "split.tsv");
        std::vector<Sample> train;
        for (auto& s : samples)
            if (split.tag_of(s.sample_id) == SplitTag::train) train.push_back(std::move(s));
        auto metrics = class_style_metrics(train, toggles.style_sample_cap,
                                           derive_seed(info.analysis_seed, "style"));
        write_file_atomic(analysis_dir / "style_metrics.csv", style_metrics_csv(metrics));
    }

    report_md << "\nSee analysis/ for per-model CSV matrices and rankings.\n";
    write_file_atomic(analysis_dir / "accuracy_summary.csv", summary_csv.str());
    write_file_atomic(out_dir / "report.md", report_md.str());
}

} // namespace

ExperimentConfig ExperimentConfig::load(const fs::path& file) {
    const std::string bytes = read_file(file);
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, file.string() + ": " + e.what());
    }
    const fs::path base = file.parent_path();

    ExperimentConfig config;
    config.config_hash = fnv1a64(bytes);
    try {
        config.task = parse_task(doc.at("task").get<std::string>());
        config.descriptor = resolve(base, doc.at("corpus").at("descriptor").get<std::string>());
        config.seed = doc.value("seed", 0ULL);

        config.split = SplitSpec::defaults_for(config.task);
        if (doc.contains("split")) {
            const auto& s = doc["split"];
            config.split.train_per_novel = s.value("train_per_novel", config.split.train_per_novel);
            config.split.val_per_novel = s.value("val_per_novel", config.split.val_per_novel);
            config.split.test_per_novel = s.value("test_per_novel", config.split.test_per_novel);
            config.split.withheld_test_per_novel =
                s.value("withheld_test_per_novel", config.split.withheld_test_per_novel);
            if (s.contains("seed")) {
                config.split.seed = s["seed"].get<uint64_t>();
                config.split_seed_explicit = true;
            }
        }
        if (doc.contains("variants")) config.variants = doc["variants"].get<std::vector<std::string>>();
        if (config.variants.empty()) config.variants = {"normal"};
        if (doc.contains("models")) config.models = doc["models"].get<std::vector<std::string>>();
        if (doc.contains("analysis")) {
            const auto& a = doc["analysis"];
            config.analysis.accuracy = a.value("accuracy", true);
            config.analysis.confusion = a.value("confusion", true);
            config.analysis.scapegoat = a.value("scapegoat", true);
            config.analysis.style_metrics = a.value("style_metrics", false);
            config.analysis.svg = a.value("svg", false);
            config.analysis.bootstrap_iters = a.value("bootstrap_iters", 1000);
            config.analysis.scapegoat_top_n = a.value("scapegoat_top_n", size_t{10});
            config.analysis.style_sample_cap = a.value("style_sample_cap", SIZE_MAX);
        }
        if (doc.contains("classifiers")) {
            const auto& c = doc["classifiers"];
            config.delta_mfw = c.value("delta_mfw", config.delta_mfw);
            config.svm_reg = c.value("svm_reg", config.svm_reg);
            config.svm_epochs = c.value("svm_epochs", config.svm_epochs);
        }
        if (doc.contains("output_dir"))
            config.output_dir = resolve(base, doc["output_dir"].get<std::string>());
        if (doc.contains("propn")) {
            const auto& p = doc["propn"];
            if (p.contains("file")) config.propn_file = resolve(base, p["file"].get<std::string>());
            config.heuristic_propn = p.value("heuristic", false);
        }
        config.jobs = doc.value("jobs", size_t{1});
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, file.string() + ": " + e.what());
    }
    // external model paths resolve against the config location
    for (auto& model : config.models) {
        if (model.rfind("external:", 0) == 0) {
            fs::path p = model.substr(9);
            model = "external:" + resolve(base, p).string();
        }
    }
    return config;
}

void ExperimentConfig::validate() const {
    if (!fs::exists(descriptor))
        throw Error(ErrorCode::ConfigError, "descriptor not found: " + descriptor.string());
    if (variants.empty()) throw Error(ErrorCode::ConfigError, "variant list is empty");
    bool needs_propn = false;
    for (const auto& id : variants) {
        VariantSpec spec = VariantSpec::parse(id); // throws on unknown ids
        if (spec.kind == VariantKind::mask_propn || spec.kind == VariantKind::all_modifications)
            needs_propn = true;
    }
    if (needs_propn && !propn_file && !heuristic_propn)
        throw Error(ErrorCode::MissingAnnotation,
                    "a variant needs proper-noun spans; set propn.file or propn.heuristic");
    if (propn_file && !fs::exists(*propn_file))
        throw Error(ErrorCode::ConfigError, "propn file not found: " + propn_file->string());
    if (models.empty()) throw Error(ErrorCode::ConfigError, "model list is empty");
    for (const auto& model : models) {
        if (is_builtin_model(model)) continue;
        if (model.rfind("external:", 0) == 0) {
            const fs::path path = model.substr(9);
            if (!fs::exists(path))
                throw Error(ErrorCode::ConfigError, "external predictions not found: " + path.string());
            continue;
        }
        throw Error(ErrorCode::ConfigError, "unknown model '" + model + "'");
    }
    if (analysis.bootstrap_iters < 1)
        throw Error(ErrorCode::ConfigError, "bootstrap_iters must be >= 1");
}

int run_pipeline(const ExperimentConfig& config) {
    const fs::path out = config.output_dir;
    try {
        config.validate();
        fs::create_directories(out);
        fs::remove(out / "FAILED");
        Stamps stamps(out);

        RunInfo info;
        info.version = std::string(kToolVersion);
        info.task = to_string(config.task);
        info.config_hash = config.config_hash;
        info.seed = config.seed;
        info.split_seed =
            config.split_seed_explicit ? config.split.seed : derive_seed(config.seed, "split");
        info.perturb_seed = derive_seed(config.seed, "perturb");
        info.analysis_seed = derive_seed(config.seed, "analysis");
        info.toggles = config.analysis;
        write_file_atomic(out / "RUNINFO", info.serialize());

        // ------------------------------------------------------------------
        // corpus
        const std::string descriptor_bytes = read_file(config.descriptor);
        uint64_t corpus_fp = fnv1a64(descriptor_bytes);
        std::vector<NovelDoc> novels = load_corpus_descriptor(config.descriptor);
        for (const auto& novel : novels)
            corpus_fp = mix64(corpus_fp ^ fnv1a64(novel.raw_text));

        BuiltCorpus corpus;
        if (stamps.fresh("corpus", corpus_fp, {out / "manifest.tsv", out / "samples.tsv"})) {
            corpus.manifest = load_manifest(out / "manifest.tsv");
            corpus.samples = load_samples(out / "samples.tsv");
        } else {
            corpus = build_corpus(config.task, novels);
            save_manifest(corpus.manifest, out / "manifest.tsv");
            save_samples(corpus.samples, out / "samples.tsv");
            stamps.record("corpus", corpus_fp);
        }
        for (const auto& warning : corpus.manifest.warnings)
            std::cerr << "warning: " << warning << "\n";

        // ------------------------------------------------------------------
        // split
        SplitSpec split_spec = config.split;
        split_spec.seed = info.split_seed;
        const uint64_t split_fp =
            mix64(corpus_fp ^ fnv1a64(std::to_string(split_spec.train_per_novel) + "/" +
                                      std::to_string(split_spec.val_per_novel) + "/" +
                                      std::to_string(split_spec.test_per_novel) + "/" +
                                      std::to_string(split_spec.withheld_test_per_novel) + "/" +
                                      std::to_string(split_spec.seed)));
        SplitAssignment split;
        if (stamps.fresh("split", split_fp, {out / "split.tsv"})) {
            split = load_split(out / "split.tsv");
        } else {
            split = assign_splits(corpus.manifest, corpus.samples, split_spec);
            save_split(split, out / "split.tsv");
            stamps.record("split", split_fp);
        }

        std::vector<Sample> train_samples, test_samples;
        for (const auto& sample : corpus.samples) {
            switch (split.tag_of(sample.sample_id)) {
                case SplitTag::train: train_samples.push_back(sample); break;
                case SplitTag::test: test_samples.push_back(sample); break;
                default: break;
            }
        }

        // ------------------------------------------------------------------
        // proper-noun spans, when needed
        const StopwordLexicon& lexicon = StopwordLexicon::builtin();
        PropnAnnotation propn;
        bool have_propn = false;
        uint64_t propn_fp = 0;
        if (config.propn_file) {
            propn_fp = fnv1a64(read_file(*config.propn_file));
            propn = PropnAnnotation::load(*config.propn_file);
            have_propn = true;
        } else if (config.heuristic_propn) {
            propn_fp = 1; // heuristic output is a function of the corpus fingerprint
            std::map<std::string, std::vector<Sample>> by_novel;
            for (const auto& s : corpus.samples) by_novel[s.novel_id].push_back(s);
            for (const auto& [novel_id, samples] : by_novel)
                propn.merge(heuristic_propn_for_novel(samples, lexicon));
            have_propn = true;
        }
        if (have_propn)
            for (const auto& sample : test_samples) propn.validate_against(sample);

        // ------------------------------------------------------------------
        // perturb test samples per variant; masking variants also record the
        // mean masked words per sample for the masked-count correlations
        fs::create_directories(out / "variants");
        std::ostringstream masked_counts;
        masked_counts << "variant,mean_masked_per_sample,n\n";
        bool any_masking = false;
        for (const auto& variant_id : config.variants) {
            VariantSpec spec = VariantSpec::parse(
                variant_id, derive_seed(info.perturb_seed, variant_id));
            const uint64_t variant_fp =
                mix64(split_fp ^ fnv1a64(variant_id) ^ mix64(propn_fp) ^ spec.seed);
            const fs::path variant_path = out / "variants" / (variant_id + ".tsv");
            if (!stamps.fresh("variant_" + variant_id, variant_fp, {variant_path})) {
                std::vector<std::string> texts(test_samples.size());
                parallel_for(test_samples.size(), config.jobs, [&](size_t i) {
                    texts[i] = apply_variant(test_samples[i], spec, lexicon,
                                             have_propn ? &propn : nullptr);
                });
                write_file_atomic(variant_path, perturbed_file_content(test_samples, texts));
                stamps.record("variant_" + variant_id, variant_fp);
            }
            if (spec.kind == VariantKind::mask_stopwords ||
                spec.kind == VariantKind::mask_random_matched) {
                any_masking = true;
                size_t total = 0;
                const StopCategory category = spec.kind == VariantKind::mask_stopwords
                                                  ? spec.category
                                                  : StopCategory::all;
                for (const auto& sample : test_samples)
                    total += static_cast<size_t>(stopword_count(sample, category, lexicon));
                masked_counts << variant_id << ','
                              << format_double(static_cast<double>(total) /
                                               static_cast<double>(test_samples.size()))
                              << ',' << test_samples.size() << "\n";
            }
        }
        if (any_masking) {
            fs::create_directories(out / "analysis");
            write_file_atomic(out / "analysis" / "masked_counts.csv", masked_counts.str());
        }

        // ------------------------------------------------------------------
        // train builtin models on the unperturbed train split
        fs::create_directories(out / "models");
        const bool want_delta =
            std::count(config.models.begin(), config.models.end(), "cosine_delta") > 0;
        const bool want_svm =
            std::count(config.models.begin(), config.models.end(), "svm_tfidf") > 0;
        const uint64_t train_fp =
            mix64(split_fp ^ fnv1a64(std::to_string(config.delta_mfw) + "/" +
                                     format_double(config.svm_reg) + "/" +
                                     std::to_string(config.svm_epochs) + "/" +
                                     std::to_string(config.seed)));
        DeltaModel delta_model;
        TfidfModel svm_model;
        if (want_delta) {
            const fs::path path = out / "models" / "cosine_delta.json";
            if (stamps.fresh("train_delta", train_fp, {path})) {
                delta_model = DeltaModel::load(path);
            } else {
                delta_model = build_delta_profiles(train_samples, config.delta_mfw);
                delta_model.save(path);
                stamps.record("train_delta", train_fp);
            }
        }
        if (want_svm) {
            const fs::path path = out / "models" / "svm_tfidf.json";
            if (stamps.fresh("train_svm", train_fp, {path})) {
                svm_model = TfidfModel::load(path);
            } else {
                svm_model = train_svm(train_samples, config.svm_reg, config.svm_epochs,
                                      derive_seed(config.seed, "svm"));
                svm_model.save(path);
                stamps.record("train_svm", train_fp);
            }
        }

        // ------------------------------------------------------------------
        // predict: builtin models x variants, then external files
        fs::create_directories(out / "predictions");
        std::map<std::string, const Sample*> sample_by_id;
        for (const auto& s : corpus.samples) sample_by_id[s.sample_id] = &s;

        std::optional<DeltaPredictor> delta_predictor;
        if (want_delta) delta_predictor.emplace(delta_model);
        std::optional<SvmPredictor> svm_predictor;
        if (want_svm) svm_predictor.emplace(svm_model);
        const uint64_t random_seed = derive_seed(config.seed, "random_baseline");

        for (const auto& model_id : config.models) {
            if (!is_builtin_model(model_id)) continue;
            for (const auto& variant_id : config.variants) {
                const fs::path pred_path =
                    out / "predictions" /
                    (sanitize_component(model_id) + "__" + sanitize_component(variant_id) + ".tsv");
                const uint64_t pred_fp = mix64(train_fp ^ fnv1a64(model_id + "##" + variant_id));
                if (stamps.fresh("predict_" + model_id + "_" + variant_id, pred_fp, {pred_path}))
                    continue;
                auto rows = load_perturbed_file(out / "variants" / (variant_id + ".tsv"));
                std::vector<PredictionRecord> records(rows.size());
                parallel_for(rows.size(), config.jobs, [&](size_t i) {
                    const Sample& original = *sample_by_id.at(rows[i].first);
                    Sample perturbed = original;
                    perturbed.text = rows[i].second;
                    PredictionRecord rec;
                    rec.sample_id = original.sample_id;
                    rec.model_id = model_id;
                    rec.variant_id = variant_id;
                    rec.true_label = original.class_label;
                    rec.from_withheld_novel = original.from_withheld_novel;
                    if (model_id == "cosine_delta")
                        rec.predicted_label = delta_predictor->predict(perturbed).label;
                    else if (model_id == "svm_tfidf")
                        rec.predicted_label = svm_predictor->predict(perturbed).label;
                    else
                        rec.predicted_label =
                            random_predict(perturbed, corpus.manifest.classes, random_seed);
                    records[i] = std::move(rec);
                });
                save_predictions(records, pred_path);
                stamps.record("predict_" + model_id + "_" + variant_id, pred_fp);
            }
        }

        std::set<std::string> classes(corpus.manifest.classes.begin(),
                                      corpus.manifest.classes.end());
        std::set<std::string> known_ids;
        for (const auto& s : corpus.samples) known_ids.insert(s.sample_id);
        for (const auto& model : config.models) {
            if (model.rfind("external:", 0) != 0) continue;
            const fs::path src = model.substr(9);
            auto records = ingest_predictions(src, classes, &known_ids);
            const fs::path dst =
                out / "predictions" / ("external_" + sanitize_component(src.stem().string()) + ".tsv");
            save_predictions(records, dst);
        }

        // ------------------------------------------------------------------
        // analyze + report
        run_analysis_stage(out, info);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        try {
            write_file_atomic(out / "FAILED", std::string(e.what()) + "\n");
        } catch (...) {
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        try {
            write_file_atomic(out / "FAILED", std::string(e.what()) + "\n");
        } catch (...) {
        }
        return 1;
    }
}

int reanalyze_bundle(const fs::path& bundle_dir) {
    try {
        RunInfo info = RunInfo::parse(read_file(bundle_dir / "RUNINFO"));
        run_analysis_stage(bundle_dir, info);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace stylus
