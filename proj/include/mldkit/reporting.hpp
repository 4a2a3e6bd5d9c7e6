#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mldkit/concurrence.hpp"
#include "mldkit/dataset.hpp"
#include "mldkit/imbalance.hpp"

namespace mldkit {

/// Precomputed report content. Formatters only lay these numbers out; they
/// never re-derive anything.
struct ConcurrenceReport {
    struct Summary {
        std::string relation;
        std::size_t instances = 0;
        std::size_t labels = 0;
        std::size_t features = 0;
        std::size_t labelsets = 0;
        double card = 0.0;
        double dens = 0.0;
        double mean_ir = 0.0;
        double max_ir = 0.0;
        double scumble = 0.0;
        double scumble_cv = 0.0;
    };

    struct LabelRow {
        std::string name;
        std::int64_t count = 0;
        double irlbl = 0.0;
        double scumble_lbl = 0.0;
        double scumble_lbl_cv = 0.0;
    };

    struct Pair {
        std::int32_t first = 0;
        std::int32_t second = 0;
        std::int64_t count = 0;
    };

    Summary summary;
    std::vector<LabelRow> per_label;          // label declaration order
    std::vector<DifficultLabel> difficult;    // descending score order
    std::vector<Pair> pairs;                  // descending count, then indices
};

ConcurrenceReport build_report(const MultiLabelDataset& dataset, std::size_t top_k = 10);

/// Plain-text report, three decimals, undefined values printed as n/a.
std::string report_text(const ConcurrenceReport& report);
std::string report_text(const MultiLabelDataset& dataset, std::size_t top_k = 10);

/// JSON report carrying full-precision numbers; undefined values are null.
/// Layout is versioned via the top-level "report_version" field.
nlohmann::json report_json(const ConcurrenceReport& report);
nlohmann::json report_json(const MultiLabelDataset& dataset, std::size_t top_k = 10);

struct ChordOptions {
    /// Explicit arc selection; empty means the default policy: labels with
    /// the highest per-label concurrence among minority labels plus their
    /// majority partners, up to max_arcs.
    std::vector<std::int32_t> labels;
    std::size_t top_k = 10;
    std::size_t max_arcs = 15;
};

/// Labels the diagram will draw, in declaration order.
std::vector<std::int32_t> chord_selection(const MultiLabelDataset& dataset,
                                          const ChordOptions& options = {});

/// Deterministic SVG 1.1 chord diagram: one arc per selected label with
/// angular span proportional to its count among the selection, one ribbon
/// per co-occurring pair with per-arc slice widths proportional to the pair
/// counts. Needs at least two drawable labels.
std::string chord_svg(const MultiLabelDataset& dataset, const ChordOptions& options = {});

void write_chord_svg(const std::filesystem::path& path, const MultiLabelDataset& dataset,
                     const ChordOptions& options = {});

}  // namespace mldkit
