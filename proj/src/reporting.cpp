#include "mldkit/reporting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "mldkit/errors.hpp"
#include "mldkit/xml.hpp"

namespace mldkit {
namespace {

std::string fmt3(double v) {
    if (std::isnan(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

nlohmann::json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

}  // namespace

ConcurrenceReport build_report(const MultiLabelDataset& dataset, std::size_t top_k) {
    ImbalanceProfile imbalance = imbalance_profile(dataset);
    ConcurrenceProfile concurrence = concurrence_profile(dataset, imbalance);
    CoOccurrenceMatrix pairs = co_occurrence(dataset);

    ConcurrenceReport report;
    report.summary.relation = dataset.relation_name();
    report.summary.instances = dataset.num_instances();
    report.summary.labels = dataset.num_labels();
    report.summary.features = dataset.num_features();
    report.summary.labelsets = distinct_labelsets(dataset).count();
    report.summary.card = imbalance.card;
    report.summary.dens = imbalance.dens;
    report.summary.mean_ir = imbalance.mean_ir;
    report.summary.max_ir = imbalance.max_ir;
    report.summary.scumble = concurrence.scumble;
    report.summary.scumble_cv = concurrence.scumble_cv;

    for (std::size_t l = 0; l < dataset.num_labels(); ++l) {
        report.per_label.push_back(ConcurrenceReport::LabelRow{
            dataset.label_names()[l], dataset.label_counts()[l], imbalance.irlbl[l],
            concurrence.scumble_lbl[l], concurrence.scumble_lbl_cv[l]});
    }

    report.difficult = difficult_labels(dataset, imbalance, concurrence, pairs, top_k);

    for (std::size_t i = 0; i < dataset.num_labels(); ++i)
        for (std::size_t j = i + 1; j < dataset.num_labels(); ++j)
            if (pairs.at(i, j) > 0)
                report.pairs.push_back(ConcurrenceReport::Pair{static_cast<std::int32_t>(i),
                                                               static_cast<std::int32_t>(j),
                                                               pairs.at(i, j)});
    std::stable_sort(report.pairs.begin(), report.pairs.end(),
                     [](const ConcurrenceReport::Pair& a, const ConcurrenceReport::Pair& b) {
                         return a.count > b.count;
                     });
    return report;
}

std::string report_text(const ConcurrenceReport& report) {
    const auto& s = report.summary;
    std::string out;
    out += "Concurrence report for '" + s.relation + "'\n";
    out += "  Instances:  " + std::to_string(s.instances) + "\n";
    out += "  Labels:     " + std::to_string(s.labels) + "\n";
    out += "  Features:   " + std::to_string(s.features) + "\n";
    out += "  Labelsets:  " + std::to_string(s.labelsets) + "\n";
    out += "  Card:       " + fmt3(s.card) + "\n";
    out += "  Dens:       " + fmt3(s.dens) + "\n";
    out += "  MeanIR:     " + fmt3(s.mean_ir) + "\n";
    out += "  MaxIR:      " + fmt3(s.max_ir) + "\n";
    out += "  SCUMBLE:    " + fmt3(s.scumble) + "\n";
    out += "  SCUMBLE.CV: " + fmt3(s.scumble_cv) + "\n";

    std::size_t name_width = 5;
    for (const auto& row : report.per_label) name_width = std::max(name_width, row.name.size());

    out += "\nPer-label metrics\n";
    out += "  " + std::string("label") + std::string(name_width - 5, ' ') +
           "  count  IRLbl    SCUMBLELbl  SCUMBLELbl.CV\n";
    for (const auto& row : report.per_label) {
        char line[256];
        std::snprintf(line, sizeof(line), "  %-*s  %5lld  %-7s  %-10s  %s\n",
                      static_cast<int>(name_width), row.name.c_str(),
                      static_cast<long long>(row.count), fmt3(row.irlbl).c_str(),
                      fmt3(row.scumble_lbl).c_str(), fmt3(row.scumble_lbl_cv).c_str());
        out += line;
    }

    out += "\nDifficult labels\n";
    if (report.difficult.empty()) {
        out += "  no difficult labels\n";
    } else {
        for (const DifficultLabel& d : report.difficult) {
            out += "  " + report.per_label[static_cast<std::size_t>(d.label)].name + " (IRLbl " +
                   fmt3(d.irlbl) + ", SCUMBLELbl " + fmt3(d.scumble_lbl) + ")";
            if (!d.majority_partners.empty()) {
                out += " interacts with:";
                for (const auto& partner : d.majority_partners) {
                    out += " " + report.per_label[static_cast<std::size_t>(partner.label)].name +
                           " (" + std::to_string(partner.shared_instances) + " shared)";
                }
            }
            out += "\n";
        }
    }

    out += "\nLabel pair co-occurrences\n";
    if (report.pairs.empty()) {
        out += "  none\n";
    } else {
        constexpr std::size_t kShown = 25;
        for (std::size_t i = 0; i < report.pairs.size() && i < kShown; ++i) {
            const auto& pair = report.pairs[i];
            out += "  " + report.per_label[static_cast<std::size_t>(pair.first)].name + " + " +
                   report.per_label[static_cast<std::size_t>(pair.second)].name + ": " +
                   std::to_string(pair.count) + "\n";
        }
        if (report.pairs.size() > kShown)
            out += "  (+" + std::to_string(report.pairs.size() - kShown) + " more pairs)\n";
    }
    return out;
}

std::string report_text(const MultiLabelDataset& dataset, std::size_t top_k) {
    return report_text(build_report(dataset, top_k));
}

nlohmann::json report_json(const ConcurrenceReport& report) {
    nlohmann::json doc;
    doc["report_version"] = 1;
    doc["relation"] = report.summary.relation;
    doc["summary"] = {
        {"instances", report.summary.instances},   {"labels", report.summary.labels},
        {"features", report.summary.features},     {"labelsets", report.summary.labelsets},
        {"card", number_or_null(report.summary.card)},
        {"dens", number_or_null(report.summary.dens)},
        {"mean_ir", number_or_null(report.summary.mean_ir)},
        {"max_ir", number_or_null(report.summary.max_ir)},
        {"scumble", number_or_null(report.summary.scumble)},
        {"scumble_cv", number_or_null(report.summary.scumble_cv)},
    };

    doc["labels"] = nlohmann::json::array();
    for (const auto& row : report.per_label) {
        doc["labels"].push_back({{"name", row.name},
                                 {"count", row.count},
                                 {"irlbl", number_or_null(row.irlbl)},
                                 {"scumble_lbl", number_or_null(row.scumble_lbl)},
                                 {"scumble_lbl_cv", number_or_null(row.scumble_lbl_cv)}});
    }

    doc["difficult_labels"] = nlohmann::json::array();
    for (const DifficultLabel& d : report.difficult) {
        nlohmann::json partners = nlohmann::json::array();
        for (const auto& partner : d.majority_partners) {
            partners.push_back(
                {{"name", report.per_label[static_cast<std::size_t>(partner.label)].name},
                 {"shared_instances", partner.shared_instances}});
        }
        doc["difficult_labels"].push_back(
            {{"name", report.per_label[static_cast<std::size_t>(d.label)].name},
             {"irlbl", number_or_null(d.irlbl)},
             {"scumble_lbl", number_or_null(d.scumble_lbl)},
             {"partners", std::move(partners)}});
    }

    doc["pairs"] = nlohmann::json::array();
    for (const auto& pair : report.pairs) {
        doc["pairs"].push_back(
            {{"labels",
              {report.per_label[static_cast<std::size_t>(pair.first)].name,
               report.per_label[static_cast<std::size_t>(pair.second)].name}},
             {"count", pair.count}});
    }
    return doc;
}

nlohmann::json report_json(const MultiLabelDataset& dataset, std::size_t top_k) {
    return report_json(build_report(dataset, top_k));
}

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;
constexpr double kGap = 0.04;        // radians between adjacent arcs
constexpr double kCenter = 350.0;    // canvas is 700x700
constexpr double kOuterRadius = 300.0;
constexpr double kInnerRadius = 276.0;
constexpr double kTextRadius = 312.0;

constexpr const char* kPalette[15] = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

std::string fmt4(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 4);
    if (ec != std::errc{}) return "0.0000";
    return std::string(buf, ptr);
}

std::string pt(double radius, double angle) {
    return fmt4(kCenter + radius * std::cos(angle)) + " " +
           fmt4(kCenter + radius * std::sin(angle)) + " ";
}

std::string arc_to(double radius, double from, double to, int sweep) {
    int large = std::fabs(to - from) > std::numbers::pi ? 1 : 0;
    return "A " + fmt4(radius) + " " + fmt4(radius) + " 0 " + std::to_string(large) + " " +
           std::to_string(sweep) + " " + pt(radius, to);
}

struct Slice {
    double start = 0.0;
    double end = 0.0;
};

}  // namespace

std::vector<std::int32_t> chord_selection(const MultiLabelDataset& dataset,
                                          const ChordOptions& options) {
    const auto& counts = dataset.label_counts();
    std::vector<std::int32_t> selection;

    if (!options.labels.empty()) {
        for (std::int32_t label : options.labels) {
            if (label < 0 || static_cast<std::size_t>(label) >= dataset.num_labels())
                throw DatasetError("label index " + std::to_string(label) + " out of range");
            if (counts[static_cast<std::size_t>(label)] == 0) continue;
            if (std::find(selection.begin(), selection.end(), label) == selection.end())
                selection.push_back(label);
        }
    } else {
        auto difficult = difficult_labels(dataset, options.top_k);
        auto add = [&](std::int32_t label) {
            if (selection.size() >= options.max_arcs) return;
            if (counts[static_cast<std::size_t>(label)] == 0) return;
            if (std::find(selection.begin(), selection.end(), label) == selection.end())
                selection.push_back(label);
        };
        for (const DifficultLabel& d : difficult) {
            add(d.label);
            for (const auto& partner : d.majority_partners) add(partner.label);
        }
        if (selection.size() < 2) {
            // Concurrence-free data: fall back to the most frequent labels.
            std::vector<std::int32_t> by_count;
            for (std::size_t l = 0; l < dataset.num_labels(); ++l)
                if (counts[l] > 0) by_count.push_back(static_cast<std::int32_t>(l));
            std::stable_sort(by_count.begin(), by_count.end(),
                             [&](std::int32_t a, std::int32_t b) {
                                 return counts[static_cast<std::size_t>(a)] >
                                        counts[static_cast<std::size_t>(b)];
                             });
            selection.assign(by_count.begin(),
                             by_count.begin() + std::min(by_count.size(), options.max_arcs));
        }
    }

    if (selection.size() < 2)
        throw DatasetError("chord diagram needs at least two labels with instances");
    std::sort(selection.begin(), selection.end());
    return selection;
}

std::string chord_svg(const MultiLabelDataset& dataset, const ChordOptions& options) {
    std::vector<std::int32_t> selection = chord_selection(dataset, options);
    CoOccurrenceMatrix pairs = co_occurrence(dataset);
    const auto& counts = dataset.label_counts();
    const std::size_t n = selection.size();

    std::int64_t total = 0;
    for (std::int32_t label : selection) total += counts[static_cast<std::size_t>(label)];

    const double usable = kTau - kGap * static_cast<double>(n);
    std::vector<double> start(n), span(n);
    double cursor = -std::numbers::pi / 2.0;
    for (std::size_t k = 0; k < n; ++k) {
        cursor += kGap / 2.0;
        start[k] = cursor;
        span[k] = usable * static_cast<double>(counts[static_cast<std::size_t>(selection[k])]) /
                  static_cast<double>(total);
        cursor += span[k] + kGap / 2.0;
    }

    // Per arc, consecutive slices for its co-occurring partners in selection
    // order. The denominator keeps all slices inside the arc even when pair
    // counts sum past the label count.
    std::vector<std::vector<Slice>> slices(n, std::vector<Slice>(n));
    for (std::size_t k = 0; k < n; ++k) {
        auto i = static_cast<std::size_t>(selection[k]);
        std::int64_t pair_sum = 0;
        for (std::size_t m = 0; m < n; ++m) {
            if (m == k) continue;
            pair_sum += pairs.at(i, static_cast<std::size_t>(selection[m]));
        }
        double denom = static_cast<double>(
            std::max(counts[i], pair_sum));
        double at = start[k];
        for (std::size_t m = 0; m < n; ++m) {
            if (m == k) continue;
            std::int64_t c = pairs.at(i, static_cast<std::size_t>(selection[m]));
            if (c == 0) continue;
            double width = denom == 0.0 ? 0.0 : span[k] * static_cast<double>(c) / denom;
            slices[k][m] = Slice{at, at + width};
            at += width;
        }
    }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"700\" "
           "height=\"700\" viewBox=\"0 0 700 700\">\n";
    svg += "<title>Label interactions: " + xml::escape(dataset.relation_name()) + "</title>\n";
    svg += "<rect width=\"700\" height=\"700\" fill=\"#ffffff\"/>\n";

    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = k + 1; m < n; ++m) {
            auto i = static_cast<std::size_t>(selection[k]);
            auto j = static_cast<std::size_t>(selection[m]);
            if (pairs.at(i, j) == 0) continue;
            const Slice& a = slices[k][m];
            const Slice& b = slices[m][k];
            std::string d = "M " + pt(kInnerRadius, a.start);
            d += arc_to(kInnerRadius, a.start, a.end, 1);
            d += "Q " + fmt4(kCenter) + " " + fmt4(kCenter) + " " + pt(kInnerRadius, b.start);
            d += arc_to(kInnerRadius, b.start, b.end, 1);
            d += "Q " + fmt4(kCenter) + " " + fmt4(kCenter) + " " + pt(kInnerRadius, a.start);
            d += "Z";
            svg += "<path class=\"ribbon\" data-source=\"" +
                   xml::escape(dataset.label_names()[i]) + "\" data-target=\"" +
                   xml::escape(dataset.label_names()[j]) + "\" d=\"" + d + "\" fill=\"" +
                   kPalette[k % 15] + "\" fill-opacity=\"0.55\" stroke=\"none\"/>\n";
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        auto i = static_cast<std::size_t>(selection[k]);
        double a0 = start[k];
        double a1 = start[k] + span[k];
        std::string d = "M " + pt(kOuterRadius, a0);
        d += arc_to(kOuterRadius, a0, a1, 1);
        d += "L " + pt(kInnerRadius, a1);
        d += arc_to(kInnerRadius, a1, a0, 0);
        d += "Z";
        svg += "<path class=\"arc\" data-name=\"" + xml::escape(dataset.label_names()[i]) +
               "\" d=\"" + d + "\" fill=\"" + kPalette[k % 15] + "\" stroke=\"none\"/>\n";

        double mid = (a0 + a1) / 2.0;
        double cos_mid = std::cos(mid);
        const char* anchor = cos_mid > 0.1 ? "start" : (cos_mid < -0.1 ? "end" : "middle");
        svg += "<text class=\"arc-label\" x=\"" + fmt4(kCenter + kTextRadius * cos_mid) +
               "\" y=\"" + fmt4(kCenter + kTextRadius * std::sin(mid)) +
               "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\" text-anchor=\"" +
               anchor + "\">" + xml::escape(dataset.label_names()[i]) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

void write_chord_svg(const std::filesystem::path& path, const MultiLabelDataset& dataset,
                     const ChordOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
    out << chord_svg(dataset, options);
    out.flush();
    if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

}  // namespace mldkit
