#include "stylus/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace stylus {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

void accuracy_row(std::ostringstream& out, const std::string& key, const AccuracyFigure& fig) {
    out << csv_field(key) << ',' << format_double(fig.value) << ',' << format_double(fig.se) << ','
        << fig.n << ',' << fig.correct << ',' << (fig.se_degenerate ? 1 : 0) << "\n";
}

} // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::string accuracy_csv(const AccuracyReport& report) {
    std::ostringstream out;
    out << "figure,accuracy,se,n,correct,se_degenerate\n";
    accuracy_row(out, "overall", report.overall);
    for (const auto& [key, fig] : report.by_withheld) accuracy_row(out, "withheld:" + key, fig);
    for (const auto& [key, fig] : report.by_class) accuracy_row(out, "class:" + key, fig);
    return out.str();
}

std::string accuracy_markdown(const AccuracyReport& report, std::string_view title) {
    std::ostringstream out;
    out << "## " << title << "\n\n";
    out << "| figure | accuracy | se | n |\n|---|---|---|---|\n";
    auto row = [&](const std::string& key, const AccuracyFigure& fig) {
        out << "| " << key << " | " << format_double(fig.value) << " | " << format_double(fig.se)
            << " | " << fig.n << " |\n";
    };
    row("overall", report.overall);
    for (const auto& [key, fig] : report.by_withheld) row(key, fig);
    for (const auto& [key, fig] : report.by_class) row(key, fig);
    out << "\n";
    return out.str();
}

std::string confusion_csv(const ConfusionMatrix& matrix) {
    std::ostringstream out;
    out << "true\\predicted_pct";
    for (const auto& label : matrix.classes) out << ',' << csv_field(label);
    out << "\n";
    for (size_t r = 0; r < matrix.classes.size(); ++r) {
        out << csv_field(matrix.classes[r]);
        for (size_t c = 0; c < matrix.classes.size(); ++c)
            out << ',' << format_double(matrix.row_percent[r][c]);
        out << "\n";
    }
    return out.str();
}

std::string confusion_counts_csv(const ConfusionMatrix& matrix) {
    std::ostringstream out;
    out << "true\\predicted";
    for (const auto& label : matrix.classes) out << ',' << csv_field(label);
    out << ",OUT_OF_SET\n";
    for (size_t r = 0; r < matrix.classes.size(); ++r) {
        out << csv_field(matrix.classes[r]);
        for (size_t c = 0; c < matrix.classes.size(); ++c) out << ',' << matrix.counts[r][c];
        out << ',' << matrix.out_of_set[r] << "\n";
    }
    return out.str();
}

std::string scapegoat_csv(const ScapegoatShares& shares) {
    std::ostringstream out;
    out << "n,label,cumulative_percent\n";
    for (size_t i = 0; i < shares.cumulative_percent.size(); ++i) {
        out << (i + 1) << ','
            << (i < shares.ranked_labels.size() ? csv_field(shares.ranked_labels[i]) : "") << ','
            << format_double(shares.cumulative_percent[i]) << "\n";
    }
    return out.str();
}

std::string style_metrics_csv(std::span<const ClassStyleMetrics> metrics) {
    std::ostringstream out;
    out << "class,vocab_size,uniqueness,metric_version\n";
    for (const auto& m : metrics)
        out << csv_field(m.class_label) << ',' << m.vocab_size << ',' << format_double(m.uniqueness)
            << ',' << m.metric_version << "\n";
    return out.str();
}

std::string fightin_csv(const FightinWordsResult& result, std::string_view standardization_note) {
    std::ostringstream out;
    out << "# groups: " << result.group_i << " vs " << result.group_j
        << "; alpha0=" << format_double(result.alpha0) << "; prior=" << to_string(result.prior)
        << "; standardization=" << standardization_note << "\n";
    out << "token,zscore,delta,rate_i,rate_j\n";
    for (const auto& s : result.scores)
        out << csv_field(s.token) << ',' << format_double(s.zscore) << ','
            << format_double(s.delta) << ',' << format_double(s.rate_i) << ','
            << format_double(s.rate_j) << "\n";
    return out.str();
}

std::string embedding_similarity_csv(std::span<const EmbeddingSimilarityScores> scores) {
    std::ostringstream out;
    out << "class,train_vs_average,test_vs_train\n";
    for (const auto& s : scores)
        out << csv_field(s.class_label) << ',' << format_double(s.train_vs_average) << ','
            << format_double(s.test_vs_train) << "\n";
    return out.str();
}

std::string pearson_markdown(const PearsonResult& result, std::string_view label_x,
                             std::string_view label_y) {
    std::ostringstream out;
    out << "Pearson correlation of " << label_x << " vs " << label_y << ": r = "
        << format_double(result.r) << ", p = " << format_double(result.p) << " (n = " << result.n
        << ")\n";
    return out.str();
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string svg_bar_chart(std::span<const std::string> labels, std::span<const double> values,
                          std::span<const double> errors, std::string_view title) {
    const int bar_width = 28;
    const int gap = 12;
    const int height = 240;
    const int base = 200;
    const int left = 40;
    const int width = left + static_cast<int>(values.size()) * (bar_width + gap) + 20;
    double max_value = 1e-12;
    for (double v : values) max_value = std::max(max_value, v);
    for (size_t i = 0; i < errors.size(); ++i) max_value = std::max(max_value, values[i] + errors[i]);

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<text x=\"" << left << "\" y=\"16\" font-size=\"13\">" << xml_escape(title)
        << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << base << "\" x2=\"" << (width - 10) << "\" y2=\""
        << base << "\" stroke=\"black\"/>\n";
    for (size_t i = 0; i < values.size(); ++i) {
        const double h = values[i] / max_value * (base - 40);
        const int x = left + static_cast<int>(i) * (bar_width + gap);
        out << "<rect x=\"" << x << "\" y=\"" << format_double(base - h) << "\" width=\""
            << bar_width << "\" height=\"" << format_double(h) << "\" fill=\"#4878a8\"/>\n";
        if (i < errors.size() && errors[i] > 0) {
            const double e = errors[i] / max_value * (base - 40);
            const int cx = x + bar_width / 2;
            out << "<line x1=\"" << cx << "\" y1=\"" << format_double(base - h - e) << "\" x2=\""
                << cx << "\" y2=\"" << format_double(base - h + e)
                << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        }
        if (i < labels.size())
            out << "<text x=\"" << x << "\" y=\"" << (base + 14) << "\" font-size=\"9\">"
                << xml_escape(labels[i].substr(0, 8)) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_scatter(std::span<const double> x, std::span<const double> y,
                        std::string_view title) {
    const int size = 260;
    const int margin = 30;
    double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
    if (!x.empty()) {
        min_x = *std::min_element(x.begin(), x.end());
        max_x = *std::max_element(x.begin(), x.end());
        min_y = *std::min_element(y.begin(), y.end());
        max_y = *std::max_element(y.begin(), y.end());
        if (max_x == min_x) max_x = min_x + 1;
        if (max_y == min_y) max_y = min_y + 1;
    }
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\">\n";
    out << "<text x=\"" << margin << "\" y=\"16\" font-size=\"13\">" << xml_escape(title)
        << "</text>\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << (size - 2 * margin)
        << "\" height=\"" << (size - 2 * margin) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
        const double px = margin + (x[i] - min_x) / (max_x - min_x) * (size - 2 * margin);
        const double py = size - margin - (y[i] - min_y) / (max_y - min_y) * (size - 2 * margin);
        out << "<circle cx=\"" << format_double(px) << "\" cy=\"" << format_double(py)
            << "\" r=\"3\" fill=\"#a84848\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace stylus
