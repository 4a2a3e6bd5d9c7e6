#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mldkit/dataset.hpp"

namespace mldkit {

/// Per-instance, per-label confidence scores with thresholded decisions.
/// Scores live in [0,1]; decisions default to score >= threshold but may be
/// set independently when they come from an external source.
class PredictionSet {
public:
    PredictionSet() = default;
    PredictionSet(std::size_t rows, std::size_t cols, double threshold = 0.5);

    static PredictionSet from_scores(std::vector<double> scores, std::size_t rows,
                                     std::size_t cols, double threshold = 0.5);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double threshold() const { return threshold_; }

    double score(std::size_t row, std::size_t col) const { return scores_[row * cols_ + col]; }
    void set_score(std::size_t row, std::size_t col, double value) {
        scores_[row * cols_ + col] = value;
    }

    bool decision(std::size_t row, std::size_t col) const {
        return decisions_[row * cols_ + col] != 0;
    }
    void set_decision(std::size_t row, std::size_t col, bool value) {
        decisions_[row * cols_ + col] = value ? 1 : 0;
    }

    /// Recomputes every decision as score >= threshold.
    void rethreshold(double threshold);

    bool operator==(const PredictionSet&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    double threshold_ = 0.5;
    std::vector<double> scores_;
    std::vector<std::uint8_t> decisions_;
};

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;
};

std::vector<ConfusionCounts> confusion_by_label(const MultiLabelDataset& truth,
                                                const PredictionSet& predictions);

/// Mean symmetric difference between true and predicted labelsets over |L|.
double hamming_loss(const MultiLabelDataset& truth, const PredictionSet& predictions);

/// Example-based precision |Y∩Z|/|Z|, averaged over instances with |Z| > 0;
/// instances with an empty prediction are skipped. NaN when none qualify.
double precision(const MultiLabelDataset& truth, const PredictionSet& predictions);

/// Example-based recall |Y∩Z|/|Y|, empty-truth instances skipped.
double recall(const MultiLabelDataset& truth, const PredictionSet& predictions);

/// 2PR/(P+R) over the example-based aggregates; 0 when P + R = 0.
double f_measure(const MultiLabelDataset& truth, const PredictionSet& predictions);

enum class ZeroDivisionPolicy { score_zero, skip_label };

/// Mean per-label F measure. A label with no true and no predicted positives
/// scores 0 by default, or is left out of the mean under skip_label.
double macro_fm(const MultiLabelDataset& truth, const PredictionSet& predictions,
                ZeroDivisionPolicy policy = ZeroDivisionPolicy::score_zero);

/// Fraction of instances whose highest-scoring label (ties resolved to the
/// lowest index) is not relevant; instances with no relevant labels count
/// as errors.
double one_error(const MultiLabelDataset& truth, const PredictionSet& predictions);

enum class TiePolicy { half, strict };

/// Mean fraction of (relevant, irrelevant) label pairs ranked in the wrong
/// order. Tied scores count 1/2 by default, 0 under strict. Instances with
/// an empty or full labelset are skipped; NaN when every instance is.
double ranking_loss(const MultiLabelDataset& truth, const PredictionSet& predictions,
                    TiePolicy ties = TiePolicy::half);

/// Sample correlation coefficient; NaN when either variance is zero.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct FoldSplit {
    std::vector<std::size_t> train;  // ascending source indices
    std::vector<std::size_t> test;
};

/// Seeded shuffle split into `folds` near-equal parts per repetition; fold
/// sizes differ by at most one, larger folds first. Every instance lands in
/// exactly one test fold per repetition.
std::vector<std::vector<FoldSplit>> k_fold_partition(const MultiLabelDataset& dataset,
                                                     std::size_t folds, std::size_t repetitions,
                                                     std::uint64_t seed);

/// New dataset holding the selected instances, in the order given.
MultiLabelDataset subset(const MultiLabelDataset& dataset,
                         const std::vector<std::size_t>& indices);

/// Nearest-neighbor reference predictor: each test row receives the labelset
/// indicator of its closest training row under Euclidean distance (nominal
/// features one-hot expanded, missing values as 0, ties to the lowest
/// training index). String features are not supported.
PredictionSet baseline_predict(const MultiLabelDataset& train, const MultiLabelDataset& test);

/// Prediction CSV: one row per instance, |L| comma-separated scores in label
/// declaration order, optional header (auto-detected on read).
PredictionSet read_predictions_csv(const std::filesystem::path& path, std::size_t num_labels,
                                   double threshold = 0.5);
void write_predictions_csv(const std::filesystem::path& path, const PredictionSet& predictions,
                           const std::vector<std::string>& label_names = {});

}  // namespace mldkit
