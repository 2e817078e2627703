// stylus: corpus construction, splitting, text ablation, classical style
// classifiers, and the statistical probes around them, plus file interfaces
// for externally produced predictions, weight matrices, and embeddings.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "stylus/analysis.hpp"
#include "stylus/classify.hpp"
#include "stylus/corpus.hpp"
#include "stylus/error.hpp"
#include "stylus/io_util.hpp"
#include "stylus/perturb.hpp"
#include "stylus/pipeline.hpp"
#include "stylus/probe_io.hpp"
#include "stylus/report.hpp"
#include "stylus/rng.hpp"
#include "stylus/splitter.hpp"
#include "stylus/text.hpp"

namespace fs = std::filesystem;
using namespace stylus;

namespace {

std::vector<Sample> samples_for_tag(const fs::path& samples_path, const fs::path& split_path,
                                    SplitTag tag) {
    auto samples = load_samples(samples_path);
    if (split_path.empty()) return samples;
    auto split = load_split(split_path);
    std::vector<Sample> picked;
    for (auto& s : samples)
        if (split.tag_of(s.sample_id) == tag) picked.push_back(std::move(s));
    return picked;
}

std::vector<double> load_numeric_column(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    while (get_line(in, line)) {
        auto trimmed = trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto fields = split_view(trimmed, '\t');
        values.push_back(std::stod(std::string(fields.back())));
    }
    return values;
}

// Predictions loaded standalone infer the class set from the true labels.
std::vector<PredictionRecord> load_predictions_inferring_classes(const fs::path& path) {
    auto first = ingest_predictions(path, {});
    std::set<std::string> classes;
    for (const auto& r : first) classes.insert(r.true_label);
    return ingest_predictions(path, classes);
}

std::map<std::string, int> parse_multiplicities(const std::vector<std::string>& entries) {
    std::map<std::string, int> mult;
    for (const auto& entry : entries) {
        auto pos = entry.rfind('=');
        if (pos == std::string::npos)
            throw Error(ErrorCode::ConfigError, "expected group=N, got '" + entry + "'");
        mult[entry.substr(0, pos)] = std::stoi(entry.substr(pos + 1));
    }
    return mult;
}

void emit(const fs::path& out, const std::string& content) {
    if (out.empty())
        std::cout << content;
    else
        write_file_atomic(out, content);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stylus: stylometric experimentation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    uint64_t seed = 0;
    app.add_option("--seed", seed, "global seed")->envname("STYLUS_SEED");

    try {
        // ------------------------------------------------------------------
        // corpus build
        auto* corpus_cmd = app.add_subcommand("corpus", "corpus operations");
        auto* build_cmd = corpus_cmd->add_subcommand("build", "build manifest and samples");
        fs::path descriptor, out_manifest = "manifest.tsv", out_samples = "samples.tsv";
        std::string task_name = "authorship";
        fs::path norm_table_path;
        build_cmd->add_option("--descriptor", descriptor, "corpus descriptor TSV")->required();
        build_cmd->add_option("--task", task_name, "authorship|genre");
        build_cmd->add_option("--norm-table", norm_table_path,
                              "normalization rule overrides (U+XXXX<TAB>replacement)");
        build_cmd->add_option("--out-manifest", out_manifest, "manifest output path");
        build_cmd->add_option("--out-samples", out_samples, "samples output path");
        build_cmd->callback([&] {
            auto novels = load_corpus_descriptor(descriptor);
            const NormalizationTable table = norm_table_path.empty()
                                                 ? NormalizationTable::builtin()
                                                 : NormalizationTable::load(norm_table_path);
            auto corpus = build_corpus(parse_task(task_name), novels, table);
            save_manifest(corpus.manifest, out_manifest);
            save_samples(corpus.samples, out_samples);
            for (const auto& warning : corpus.manifest.warnings)
                std::cerr << "warning: " << warning << "\n";
            std::cout << corpus.samples.size() << " samples from " << novels.size() << " novels\n";
        });

        // ------------------------------------------------------------------
        // split
        auto* split_cmd = app.add_subcommand("split", "assign train/val/test/unused");
        fs::path manifest_path = "manifest.tsv", samples_path = "samples.tsv",
                 split_out = "split.tsv";
        std::string spec_name = "authorship";
        int opt_train = -1, opt_val = -1, opt_test = -1, opt_withheld = -1;
        split_cmd->add_option("--manifest", manifest_path, "manifest path");
        split_cmd->add_option("--samples", samples_path, "samples path");
        split_cmd->add_option("--spec", spec_name, "authorship|genre quota defaults");
        split_cmd->add_option("--train", opt_train, "train quota override");
        split_cmd->add_option("--val", opt_val, "val quota override");
        split_cmd->add_option("--test", opt_test, "test quota override");
        split_cmd->add_option("--withheld-test", opt_withheld, "withheld-novel test quota");
        split_cmd->add_option("--out", split_out, "split output path");
        split_cmd->callback([&] {
            auto manifest = load_manifest(manifest_path);
            auto samples = load_samples(samples_path);
            SplitSpec spec = SplitSpec::defaults_for(parse_task(spec_name), seed);
            if (opt_train >= 0) spec.train_per_novel = opt_train;
            if (opt_val >= 0) spec.val_per_novel = opt_val;
            if (opt_test >= 0) spec.test_per_novel = opt_test;
            if (opt_withheld >= 0) spec.withheld_test_per_novel = opt_withheld;
            auto assignment = assign_splits(manifest, samples, spec);
            save_split(assignment, split_out);
            std::cout << "train=" << assignment.count(SplitTag::train)
                      << " val=" << assignment.count(SplitTag::val)
                      << " test=" << assignment.count(SplitTag::test)
                      << " unused=" << assignment.count(SplitTag::unused) << "\n";
        });

        // ------------------------------------------------------------------
        // perturb
        auto* perturb_cmd = app.add_subcommand("perturb", "apply a text ablation");
        std::string variant_id = "normal";
        fs::path perturb_samples = "samples.tsv", perturb_split, perturb_out, propn_path;
        bool use_heuristic = false;
        std::string only_tag = "test";
        perturb_cmd->add_option("--samples", perturb_samples, "samples path");
        perturb_cmd->add_option("--split", perturb_split, "restrict to one split tag");
        perturb_cmd->add_option("--only", only_tag, "split tag when --split given");
        perturb_cmd->add_option("--variant", variant_id, "variant id")->required();
        std::string category_name;
        perturb_cmd->add_option("--category", category_name,
                                "stop-word category for mask_stopwords");
        perturb_cmd->add_option("--propn", propn_path, "proper-noun span file");
        perturb_cmd->add_flag("--heuristic-propn", use_heuristic,
                              "use the capitalization-heuristic tagger");
        perturb_cmd->add_option("--out", perturb_out, "output TSV (sample_id, text)");
        fs::path counts_out;
        perturb_cmd->add_option("--counts-out", counts_out,
                                "per-sample masked-word counts TSV (masking variants)");
        perturb_cmd->callback([&] {
            auto samples = perturb_split.empty()
                               ? load_samples(perturb_samples)
                               : samples_for_tag(perturb_samples, perturb_split,
                                                 parse_split_tag(only_tag));
            const auto& lexicon = StopwordLexicon::builtin();
            VariantSpec spec = VariantSpec::parse(variant_id, seed);
            if (!category_name.empty()) {
                if (spec.kind != VariantKind::mask_stopwords)
                    throw Error(ErrorCode::ConfigError,
                                "--category applies only to mask_stopwords");
                spec.category = parse_stop_category(category_name);
            }
            PropnAnnotation propn;
            bool have_propn = false;
            if (!propn_path.empty()) {
                propn = PropnAnnotation::load(propn_path);
                have_propn = true;
            } else if (use_heuristic) {
                std::map<std::string, std::vector<Sample>> by_novel;
                auto all = load_samples(perturb_samples);
                for (auto& s : all) by_novel[s.novel_id].push_back(std::move(s));
                for (const auto& [novel_id, list] : by_novel)
                    propn.merge(heuristic_propn_for_novel(list, lexicon));
                have_propn = true;
            }
            std::ostringstream out;
            for (const auto& sample : samples)
                out << sample.sample_id << '\t'
                    << apply_variant(sample, spec, lexicon, have_propn ? &propn : nullptr) << "\n";
            emit(perturb_out, out.str());
            if (!counts_out.empty()) {
                const StopCategory category =
                    spec.kind == VariantKind::mask_stopwords ? spec.category : StopCategory::all;
                std::ostringstream counts;
                for (const auto& sample : samples)
                    counts << sample.sample_id << '\t'
                           << stopword_count(sample, category, lexicon) << "\n";
                write_file_atomic(counts_out, counts.str());
            }
        });

        // ------------------------------------------------------------------
        // train
        auto* train_cmd = app.add_subcommand("train", "train a builtin classifier");
        std::string train_model = "cosine_delta";
        fs::path train_samples_path = "samples.tsv", train_split_path, model_out = "model.json";
        size_t mfw = kDefaultMfw;
        double reg = kDefaultSvmReg;
        int epochs = kDefaultSvmEpochs;
        train_cmd->add_option("--model", train_model, "cosine_delta|svm_tfidf")->required();
        train_cmd->add_option("--samples", train_samples_path, "samples path");
        train_cmd->add_option("--split", train_split_path, "use only train-tagged samples");
        train_cmd->add_option("--mfw", mfw, "most-frequent-word count (cosine delta)");
        train_cmd->add_option("--reg", reg, "L2 regularization (svm)");
        train_cmd->add_option("--epochs", epochs, "training epochs (svm)");
        train_cmd->add_option("--out", model_out, "model output path");
        train_cmd->callback([&] {
            auto samples =
                samples_for_tag(train_samples_path, train_split_path, SplitTag::train);
            if (train_model == "cosine_delta") {
                build_delta_profiles(samples, mfw).save(model_out);
            } else if (train_model == "svm_tfidf") {
                train_svm(samples, reg, epochs, seed).save(model_out);
            } else {
                throw Error(ErrorCode::ConfigError, "unknown model '" + train_model + "'");
            }
            std::cout << "saved " << model_out.string() << "\n";
        });

        // ------------------------------------------------------------------
        // predict
        auto* predict_cmd = app.add_subcommand("predict", "emit prediction records");
        fs::path model_file, predict_samples_path = "samples.tsv", predict_split_path, texts_path,
                 predict_out;
        std::string predict_model_id = "random", predict_variant = "normal";
        fs::path predict_manifest;
        predict_cmd->add_option("--model-file", model_file, "trained model JSON");
        predict_cmd->add_option("--model", predict_model_id,
                                "model id for records; 'random' draws a baseline");
        predict_cmd->add_option("--manifest", predict_manifest, "manifest (random baseline classes)");
        predict_cmd->add_option("--samples", predict_samples_path, "samples path");
        predict_cmd->add_option("--split", predict_split_path, "restrict to test-tagged samples");
        predict_cmd->add_option("--texts", texts_path, "perturbed texts TSV to classify");
        predict_cmd->add_option("--variant-id", predict_variant, "variant id for records");
        predict_cmd->add_option("--out", predict_out, "predictions output path");
        predict_cmd->callback([&] {
            auto samples =
                samples_for_tag(predict_samples_path, predict_split_path, SplitTag::test);
            if (!texts_path.empty()) {
                std::map<std::string, std::string> texts;
                std::ifstream in(texts_path);
                if (!in) throw Error(ErrorCode::IoError, "cannot open " + texts_path.string());
                std::string line;
                while (get_line(in, line)) {
                    if (line.empty()) continue;
                    auto fields = split_view(line, '\t');
                    if (fields.size() != 2) throw Error(ErrorCode::MalformedLine, texts_path.string());
                    texts[std::string(fields[0])] = std::string(fields[1]);
                }
                for (auto& s : samples) {
                    auto it = texts.find(s.sample_id);
                    if (it != texts.end()) s.text = it->second;
                }
            }
            std::vector<PredictionRecord> records;
            auto make_record = [&](const Sample& s, std::string predicted) {
                PredictionRecord rec;
                rec.sample_id = s.sample_id;
                rec.model_id = predict_model_id;
                rec.variant_id = predict_variant;
                rec.predicted_label = std::move(predicted);
                rec.true_label = s.class_label;
                rec.from_withheld_novel = s.from_withheld_novel;
                records.push_back(std::move(rec));
            };
            if (!model_file.empty()) {
                const std::string bytes = read_file(model_file);
                if (bytes.find("stylus.delta.v1") != std::string::npos) {
                    DeltaModel model = DeltaModel::load(model_file);
                    DeltaPredictor predictor(model);
                    if (predict_model_id == "random") predict_model_id = "cosine_delta";
                    for (const auto& s : samples) make_record(s, predictor.predict(s).label);
                } else {
                    TfidfModel model = TfidfModel::load(model_file);
                    SvmPredictor predictor(model);
                    if (predict_model_id == "random") predict_model_id = "svm_tfidf";
                    for (const auto& s : samples) make_record(s, predictor.predict(s).label);
                }
            } else {
                if (predict_manifest.empty())
                    throw Error(ErrorCode::ConfigError, "--manifest required for the random baseline");
                auto manifest = load_manifest(predict_manifest);
                for (const auto& s : samples)
                    make_record(s, random_predict(s, manifest.classes, seed));
            }
            if (predict_out.empty()) predict_out = "predictions.tsv";
            save_predictions(records, predict_out);
            std::cout << records.size() << " records -> " << predict_out.string() << "\n";
        });

        // ------------------------------------------------------------------
        // emit (fine-tune records)
        auto* emit_cmd = app.add_subcommand("emit", "emit interchange files");
        auto* finetune_cmd = emit_cmd->add_subcommand("finetune", "fine-tune record JSONL");
        fs::path ft_samples = "samples.tsv", ft_split, ft_out;
        std::string ft_task = "authorship", ft_style = "t5_mask", ft_tag = "train";
        finetune_cmd->add_option("--samples", ft_samples, "samples path");
        finetune_cmd->add_option("--split", ft_split, "restrict to one split tag");
        finetune_cmd->add_option("--only", ft_tag, "split tag when --split given");
        finetune_cmd->add_option("--task", ft_task, "authorship|genre");
        finetune_cmd->add_option("--style", ft_style, "t5_mask|causal_suffix");
        finetune_cmd->add_option("--out", ft_out, "output JSONL");
        finetune_cmd->callback([&] {
            auto samples = ft_split.empty()
                               ? load_samples(ft_samples)
                               : samples_for_tag(ft_samples, ft_split, parse_split_tag(ft_tag));
            auto records = emit_finetune_records(samples, parse_task(ft_task),
                                                 parse_finetune_style(ft_style));
            if (ft_out.empty()) ft_out = "finetune.jsonl";
            save_finetune_records(records, ft_out);
            std::cout << records.size() << " records -> " << ft_out.string() << "\n";
        });

        // ------------------------------------------------------------------
        // ingest
        auto* ingest_cmd = app.add_subcommand("ingest", "ingest external files");

        auto* ingest_preds = ingest_cmd->add_subcommand("predictions", "external predictions");
        fs::path ip_file, ip_manifest = "manifest.tsv", ip_samples, ip_out;
        ingest_preds->add_option("--file", ip_file, "predictions TSV")->required();
        ingest_preds->add_option("--manifest", ip_manifest, "manifest for the class set");
        ingest_preds->add_option("--samples", ip_samples, "samples for id validation");
        ingest_preds->add_option("--out", ip_out, "normalized output path");
        ingest_preds->callback([&] {
            auto manifest = load_manifest(ip_manifest);
            std::set<std::string> classes(manifest.classes.begin(), manifest.classes.end());
            std::set<std::string> ids;
            std::set<std::string>* ids_ptr = nullptr;
            if (!ip_samples.empty()) {
                for (const auto& s : load_samples(ip_samples)) ids.insert(s.sample_id);
                ids_ptr = &ids;
            }
            auto records = ingest_predictions(ip_file, classes, ids_ptr);
            size_t out_of_set = 0;
            for (const auto& r : records)
                if (r.predicted_label == kOutOfSet) ++out_of_set;
            if (!ip_out.empty()) save_predictions(records, ip_out);
            std::cout << records.size() << " records, " << out_of_set << " OUT_OF_SET\n";
        });

        auto* ingest_weights = ingest_cmd->add_subcommand("weights", "weight-matrix triples");
        fs::path iw_file, iw_out;
        std::string iw_kind = "attention_sum";
        bool iw_clamp = false;
        ingest_weights->add_option("--file", iw_file, "group/token/weight TSV")->required();
        ingest_weights->add_option("--kind", iw_kind, "count|attention_sum|attribution_sum");
        ingest_weights->add_flag("--clamp-negatives", iw_clamp,
                                 "clamp negative attribution weights to 0 with a warning");
        ingest_weights->add_option("--out", iw_out, "canonicalized output path");
        ingest_weights->callback([&] {
            std::vector<std::string> warnings;
            auto matrix =
                ingest_weight_matrix(iw_file, parse_weight_kind(iw_kind), iw_clamp, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            if (!iw_out.empty()) save_weight_matrix(matrix, iw_out);
            std::cout << matrix.groups().size() << " groups x " << matrix.token_types().size()
                      << " token types\n";
        });

        auto* ingest_emb = ingest_cmd->add_subcommand("embeddings", "embedding JSONL");
        fs::path ie_file, ie_out;
        ingest_emb->add_option("--file", ie_file, "embedding JSONL")->required();
        ingest_emb->add_option("--out", ie_out, "canonicalized output path");
        ingest_emb->callback([&] {
            auto tables = ingest_embeddings(ie_file);
            size_t words = 0;
            for (const auto& t : tables) words += t.vectors.size();
            if (!ie_out.empty()) save_embeddings(tables, ie_out);
            std::cout << tables.size() << " owners, " << words << " word vectors\n";
        });

        auto* ingest_gen = ingest_cmd->add_subcommand("generations", "generation-to-label matches");
        fs::path ig_file, ig_out;
        ingest_gen->add_option("--file", ig_file, "TSV: sample_id, target_label, generation")
            ->required();
        ingest_gen->add_option("--out", ig_out, "per-sample match report");
        ingest_gen->callback([&] {
            std::ifstream in(ig_file);
            if (!in) throw Error(ErrorCode::IoError, "cannot open " + ig_file.string());
            std::ostringstream out;
            out << "sample_id\tfull_match\tsurname_match\n";
            size_t n = 0, full = 0, surname = 0;
            std::string line;
            size_t line_no = 0;
            while (get_line(in, line)) {
                ++line_no;
                if (line.empty()) continue;
                auto fields = split_view(line, '\t');
                if (fields.size() != 3)
                    throw Error(ErrorCode::MalformedLine,
                                ig_file.string() + ":" + std::to_string(line_no));
                auto match = match_generation(fields[2], fields[1]);
                out << fields[0] << '\t' << match.full << '\t' << match.surname << "\n";
                ++n;
                full += match.full;
                surname += match.surname;
            }
            emit(ig_out, out.str());
            std::cout << "full: " << full << "/" << n << ", surname: " << surname << "/" << n
                      << " (channels reported separately)\n";
        });

        auto* ingest_pop = ingest_cmd->add_subcommand("popularity", "Wikipedia page lengths");
        fs::path pop_authors, pop_manual, pop_out;
        fs::path cache_dir = [] {
            const char* env = std::getenv("STYLUS_CACHE_DIR");
            return fs::path(env ? env : ".stylus_cache");
        }();
        bool offline = false;
        ingest_pop->add_option("--authors", pop_authors, "file with one author per line")
            ->required();
        ingest_pop->add_option("--cache-dir", cache_dir, "cache directory")
            ->envname("STYLUS_CACHE_DIR");
        ingest_pop->add_option("--manual", pop_manual, "manual override CSV");
        ingest_pop->add_flag("--offline", offline, "never touch the network");
        ingest_pop->add_option("--out", pop_out, "output CSV");
        ingest_pop->callback([&] {
            WikipediaClient::Options options;
            options.cache_dir = cache_dir;
            options.offline = offline;
            if (!pop_manual.empty()) options.manual_file = pop_manual;
            WikipediaClient client(std::move(options));
            std::ifstream in(pop_authors);
            if (!in) throw Error(ErrorCode::IoError, "cannot open " + pop_authors.string());
            std::ostringstream out;
            out << "author,chars,timestamp,source\n";
            std::string author;
            while (get_line(in, author)) {
                auto name = trim(author);
                if (name.empty()) continue;
                auto rec = client.fetch_length(std::string(name));
                out << rec.author << ',' << rec.wiki_char_length << ',' << rec.fetched_at << ','
                    << to_string(rec.source) << "\n";
            }
            emit(pop_out, out.str());
        });

        // ------------------------------------------------------------------
        // analyze
        auto* analyze_cmd = app.add_subcommand("analyze", "run statistics and probes");

        auto* acc_cmd = analyze_cmd->add_subcommand("accuracy", "accuracy with bootstrap SEs");
        fs::path acc_preds, acc_out, acc_svg;
        int acc_iters = kDefaultBootstrapIters;
        acc_cmd->add_option("--preds", acc_preds, "predictions TSV")->required();
        acc_cmd->add_option("--bootstrap", acc_iters, "bootstrap iterations");
        acc_cmd->add_option("--out", acc_out, "CSV output");
        acc_cmd->add_option("--svg", acc_svg, "per-class bar chart SVG");
        acc_cmd->callback([&] {
            auto records = load_predictions_inferring_classes(acc_preds);
            auto report = accuracy_report(records, acc_iters, seed);
            emit(acc_out, accuracy_csv(report));
            if (!acc_svg.empty()) {
                std::vector<std::string> labels;
                std::vector<double> values, errors;
                for (const auto& [label, fig] : report.by_class) {
                    labels.push_back(label);
                    values.push_back(fig.value);
                    errors.push_back(fig.se);
                }
                write_file_atomic(acc_svg, svg_bar_chart(labels, values, errors, "accuracy by class"));
            }
        });

        auto* conf_cmd = analyze_cmd->add_subcommand("confusion", "confusion matrices");
        fs::path conf_preds, conf_out, conf_counts_out;
        conf_cmd->add_option("--preds", conf_preds, "predictions TSV")->required();
        conf_cmd->add_option("--out", conf_out, "row-percent CSV");
        conf_cmd->add_option("--counts-out", conf_counts_out, "raw counts CSV with OUT_OF_SET");
        conf_cmd->callback([&] {
            auto records = load_predictions_inferring_classes(conf_preds);
            auto matrix = confusion_matrix(records);
            emit(conf_out, confusion_csv(matrix));
            if (!conf_counts_out.empty())
                write_file_atomic(conf_counts_out, confusion_counts_csv(matrix));
        });

        auto* scape_cmd = analyze_cmd->add_subcommand("scapegoat", "misattribution shares");
        fs::path scape_preds, scape_out;
        size_t top_n = 10;
        scape_cmd->add_option("--preds", scape_preds, "predictions TSV")->required();
        scape_cmd->add_option("--top-n", top_n, "ranks to report");
        scape_cmd->add_option("--out", scape_out, "CSV output");
        scape_cmd->callback([&] {
            auto records = load_predictions_inferring_classes(scape_preds);
            emit(scape_out, scapegoat_csv(scapegoat_shares(records, top_n)));
        });

        auto* fightin_cmd = analyze_cmd->add_subcommand("fightin", "weighted log-odds ranking");
        fs::path fw_file, fw_out;
        std::string fw_kind = "attention_sum", fw_prior = "uniform", fw_rownorm = "none";
        std::string fw_group_i, fw_group_j, fw_target;
        std::vector<std::string> fw_mult;
        double fw_alpha0 = 0; // 0 -> default 0.01 per token type
        bool fw_clamp = false;
        fightin_cmd->add_option("--weights", fw_file, "weight triples TSV")->required();
        fightin_cmd->add_option("--kind", fw_kind, "count|attention_sum|attribution_sum");
        fightin_cmd->add_flag("--clamp-negatives", fw_clamp, "clamp negative attributions");
        fightin_cmd->add_option("--group-i", fw_group_i, "first group");
        fightin_cmd->add_option("--group-j", fw_group_j, "second group");
        fightin_cmd->add_option("--one-vs-rest", fw_target, "target group vs the rest");
        fightin_cmd->add_option("--alpha0", fw_alpha0, "Dirichlet mass (default 0.01/token type)");
        fightin_cmd->add_option("--prior", fw_prior, "uniform|informative");
        fightin_cmd->add_option("--standardize", fw_mult,
                                "group=N multiplicity divisions, e.g. incorrect=26");
        fightin_cmd->add_option("--row-norm", fw_rownorm, "none|mass|unit_variance");
        fightin_cmd->add_option("--out", fw_out, "ranking CSV");
        fightin_cmd->callback([&] {
            std::vector<std::string> warnings;
            auto matrix =
                ingest_weight_matrix(fw_file, parse_weight_kind(fw_kind), fw_clamp, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            std::string note = "none";
            if (!fw_mult.empty()) {
                matrix = standardize_groups(matrix, parse_multiplicities(fw_mult));
                note = "multiplicity_division";
            }
            auto row_mode = parse_row_normalization(fw_rownorm);
            if (row_mode != RowNormalization::none) {
                matrix = normalize_rows(matrix, row_mode);
                note = note == "none" ? to_string(row_mode)
                                      : note + "+" + to_string(row_mode);
            }
            const double alpha0 = fw_alpha0 > 0 ? fw_alpha0 : default_alpha0(matrix);
            const PriorKind prior =
                fw_prior == "informative" ? PriorKind::informative : PriorKind::uniform;
            FightinWordsResult result;
            if (!fw_target.empty())
                result = one_vs_rest_fightin(matrix, fw_target, alpha0, prior);
            else if (!fw_group_i.empty() && !fw_group_j.empty())
                result = fightin_words(matrix, fw_group_i, fw_group_j, alpha0, prior);
            else
                throw Error(ErrorCode::ConfigError,
                            "need --group-i/--group-j or --one-vs-rest");
            emit(fw_out, fightin_csv(result, note));
        });

        auto* embsim_cmd = analyze_cmd->add_subcommand("embsim", "embedding similarity scores");
        fs::path es_class, es_test, es_samples = "samples.tsv", es_out;
        embsim_cmd->add_option("--class-embeddings", es_class, "class tables JSONL")->required();
        embsim_cmd->add_option("--test-embeddings", es_test,
                               "per-excerpt tables JSONL (owner = sample id)");
        embsim_cmd->add_option("--samples", es_samples, "samples for excerpt-to-class mapping");
        embsim_cmd->add_option("--out", es_out, "CSV output");
        embsim_cmd->callback([&] {
            auto class_tables = ingest_embeddings(es_class);
            auto average = build_average_table(class_tables);
            std::vector<EmbeddingTable> test_tables;
            std::map<std::string, std::string> sample_to_class;
            if (!es_test.empty()) {
                test_tables = ingest_embeddings(es_test);
                for (const auto& s : load_samples(es_samples))
                    sample_to_class[s.sample_id] = s.class_label;
            }
            auto scores =
                embedding_similarity_scores(class_tables, average, test_tables, sample_to_class);
            emit(es_out, embedding_similarity_csv(scores));
        });

        auto* corr_cmd = analyze_cmd->add_subcommand("correlate", "Pearson correlation");
        fs::path corr_x, corr_y, corr_svg;
        corr_cmd->add_option("--x", corr_x, "numeric file (last TSV field per line)")->required();
        corr_cmd->add_option("--y", corr_y, "numeric file")->required();
        corr_cmd->add_option("--scatter", corr_svg, "scatter SVG output");
        corr_cmd->callback([&] {
            auto x = load_numeric_column(corr_x);
            auto y = load_numeric_column(corr_y);
            auto result = pearson(x, y);
            std::cout << pearson_markdown(result, corr_x.string(), corr_y.string());
            if (!corr_svg.empty()) write_file_atomic(corr_svg, svg_scatter(x, y, "correlation"));
        });

        auto* style_cmd = analyze_cmd->add_subcommand("style", "vocabulary size and uniqueness");
        fs::path style_samples = "samples.tsv", style_split, style_out;
        size_t style_cap = SIZE_MAX;
        style_cmd->add_option("--samples", style_samples, "samples path");
        style_cmd->add_option("--split", style_split, "restrict to train-tagged samples");
        style_cmd->add_option("--cap", style_cap, "per-class sentence cap");
        style_cmd->add_option("--out", style_out, "CSV output");
        style_cmd->callback([&] {
            auto samples = samples_for_tag(style_samples, style_split, SplitTag::train);
            emit(style_out, style_metrics_csv(class_style_metrics(samples, style_cap, seed)));
        });

        // ------------------------------------------------------------------
        // report / run
        auto* report_cmd = app.add_subcommand("report", "re-render a bundle's analyses");
        fs::path bundle_dir;
        report_cmd->add_option("--bundle", bundle_dir, "bundle directory")->required();
        report_cmd->callback([&] {
            if (reanalyze_bundle(bundle_dir) != 0)
                throw Error(ErrorCode::IoError, "reanalysis failed");
        });

        auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
        fs::path config_path, run_out;
        size_t run_jobs = 0;
        bool seed_given = false;
        run_cmd->add_option("--config", config_path, "experiment config JSON")->required();
        run_cmd->add_option("--out", run_out, "output directory override");
        run_cmd->add_option("--jobs", run_jobs, "worker threads");
        run_cmd->add_flag("--use-seed", seed_given, "override config seed with --seed");
        run_cmd->callback([&] {
            ExperimentConfig config = ExperimentConfig::load(config_path);
            if (!run_out.empty()) config.output_dir = run_out;
            if (run_jobs > 0) config.jobs = run_jobs;
            if (seed_given) config.seed = seed;
            if (run_pipeline(config) != 0) std::exit(1);
        });

        // global flags like --seed are accepted anywhere on the command line
        std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
            for (CLI::App* sub : cmd->get_subcommands({})) {
                sub->fallthrough();
                enable_fallthrough(sub);
            }
        };
        enable_fallthrough(&app);

        CLI11_PARSE(app, argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
