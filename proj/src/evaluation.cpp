#include "mldkit/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mldkit/arff.hpp"
#include "mldkit/errors.hpp"
#include "mldkit/imbalance.hpp"
#include "mldkit/random.hpp"

namespace mldkit {
namespace {

void check_dimensions(const MultiLabelDataset& truth, const PredictionSet& predictions) {
    if (truth.num_instances() != predictions.rows() || truth.num_labels() != predictions.cols())
        throw DatasetError("prediction matrix is " + std::to_string(predictions.rows()) + "x" +
                           std::to_string(predictions.cols()) + " but the dataset needs " +
                           std::to_string(truth.num_instances()) + "x" +
                           std::to_string(truth.num_labels()));
}

std::int64_t intersection_size(const Instance& instance, const PredictionSet& predictions,
                               std::size_t row) {
    std::int64_t hits = 0;
    for (std::int32_t label : instance.labels)
        if (predictions.decision(row, static_cast<std::size_t>(label))) ++hits;
    return hits;
}

std::int64_t predicted_size(const PredictionSet& predictions, std::size_t row) {
    std::int64_t size = 0;
    for (std::size_t l = 0; l < predictions.cols(); ++l)
        if (predictions.decision(row, l)) ++size;
    return size;
}

}  // namespace

PredictionSet::PredictionSet(std::size_t rows, std::size_t cols, double threshold)
    : rows_(rows),
      cols_(cols),
      threshold_(threshold),
      scores_(rows * cols, 0.0),
      decisions_(rows * cols, 0) {}

PredictionSet PredictionSet::from_scores(std::vector<double> scores, std::size_t rows,
                                         std::size_t cols, double threshold) {
    if (scores.size() != rows * cols)
        throw DatasetError("score vector has " + std::to_string(scores.size()) +
                           " entries, expected " + std::to_string(rows * cols));
    PredictionSet set;
    set.rows_ = rows;
    set.cols_ = cols;
    set.threshold_ = threshold;
    set.scores_ = std::move(scores);
    set.decisions_.assign(rows * cols, 0);
    set.rethreshold(threshold);
    return set;
}

void PredictionSet::rethreshold(double threshold) {
    threshold_ = threshold;
    for (std::size_t i = 0; i < scores_.size(); ++i)
        decisions_[i] = scores_[i] >= threshold ? 1 : 0;
}

std::vector<ConfusionCounts> confusion_by_label(const MultiLabelDataset& truth,
                                                const PredictionSet& predictions) {
    check_dimensions(truth, predictions);
    std::vector<ConfusionCounts> counts(truth.num_labels());
    for (std::size_t i = 0; i < truth.num_instances(); ++i) {
        const Instance& instance = truth.instances()[i];
        for (std::size_t l = 0; l < truth.num_labels(); ++l) {
            bool actual = instance.has_label(static_cast<std::int32_t>(l));
            bool predicted = predictions.decision(i, l);
            if (actual && predicted)
                ++counts[l].tp;
            else if (!actual && predicted)
                ++counts[l].fp;
            else if (actual)
                ++counts[l].fn;
            else
                ++counts[l].tn;
        }
    }
    return counts;
}

double hamming_loss(const MultiLabelDataset& truth, const PredictionSet& predictions) {
    check_dimensions(truth, predictions);
    if (truth.num_instances() == 0 || truth.num_labels() == 0) return kUndefinedRatio;
    std::int64_t differing = 0;
    for (std::size_t i = 0; i < truth.num_instances(); ++i) {
        const Instance& instance = truth.instances()[i];
        for (std::size_t l = 0; l < truth.num_labels(); ++l) {
            bool actual = instance.has_label(static_cast<std::int32_t>(l));
            if (actual != predictions.decision(i, l)) ++differing;
        }
    }
    return static_cast<double>(differing) /
           (static_cast<double>(truth.num_instances()) * static_cast<double>(truth.num_labels()));
}

double precision(const MultiLabelDataset& truth, const PredictionSet& predictions) {
    check_dimensions(truth, predictions);
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < truth.num_instances(); ++i) {
        std::int64_t predicted = predicted_size(predictions, i);
        if (predicted == 0) continue;
        sum += static_cast<double>(intersection_size(truth.instances()[i], predictions, i)) /
               static_cast<double>(predicted);
        ++counted;
    }
    if (counted == 0) return kUndefinedRatio;
    return sum / static_cast<double>(counted);
}

double recall(const MultiLabelDataset& truth, const PredictionSet& predictions) {
    check_dimensions(truth, predictions);
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < truth.num_instances(); ++i) {
        const Instance& instance = truth.instances()[i];
        if (instance.labels.empty()) continue;
        sum += static_cast<double>(intersection_size(instance, predictions, i)) /
               static_cast<double>(instance.labels.size());
        ++counted;
    }
    if (counted == 0) return kUndefinedRatio;
    return sum / static_cast<double>(counted);
}

double f_measure(const MultiLabelDataset& truth, const PredictionSet& predictions) {
    double p = precision(truth, predictions);
    double r = recall(truth, predictions);
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

double macro_fm(const MultiLabelDataset& truth, const PredictionSet& predictions,
                ZeroDivisionPolicy policy) {
    auto counts = confusion_by_label(truth, predictions);
    double sum = 0.0;
    std::size_t counted = 0;
    for (const ConfusionCounts& c : counts) {
        std::int64_t denom = 2 * c.tp + c.fp + c.fn;
        if (denom == 0) {
            if (policy == ZeroDivisionPolicy::skip_label) continue;
            ++counted;  // contributes 0
            continue;
        }
        sum += 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
        ++counted;
    }
    if (counted == 0) return kUndefinedRatio;
    return sum / static_cast<double>(counted);
}

double one_error(const MultiLabelDataset& truth, const PredictionSet& predictions) {
    check_dimensions(truth, predictions);
    if (truth.num_labels() == 0) throw DatasetError("one_error needs at least one label");
    if (truth.num_instances() == 0) return kUndefinedRatio;
    std::int64_t errors = 0;
    for (std::size_t i = 0; i < truth.num_instances(); ++i) {
        std::size_t best = 0;
        for (std::size_t l = 1; l < truth.num_labels(); ++l)
            if (predictions.score(i, l) > predictions.score(i, best)) best = l;
        if (!truth.instances()[i].has_label(static_cast<std::int32_t>(best))) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(truth.num_instances());
}

double ranking_loss(const MultiLabelDataset& truth, const PredictionSet& predictions,
                    TiePolicy ties) {
    check_dimensions(truth, predictions);
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < truth.num_instances(); ++i) {
        const Instance& instance = truth.instances()[i];
        std::size_t relevant = instance.labels.size();
        std::size_t irrelevant = truth.num_labels() - relevant;
        if (relevant == 0 || irrelevant == 0) continue;
        double inverted = 0.0;
        for (std::int32_t a : instance.labels) {
            double score_a = predictions.score(i, static_cast<std::size_t>(a));
            for (std::size_t b = 0; b < truth.num_labels(); ++b) {
                if (instance.has_label(static_cast<std::int32_t>(b))) continue;
                double score_b = predictions.score(i, b);
                if (score_a < score_b)
                    inverted += 1.0;
                else if (score_a == score_b && ties == TiePolicy::half)
                    inverted += 0.5;
            }
        }
        sum += inverted / (static_cast<double>(relevant) * static_cast<double>(irrelevant));
        ++counted;
    }
    if (counted == 0) return kUndefinedRatio;
    return sum / static_cast<double>(counted);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson inputs differ in length");
    if (x.size() < 2) throw std::invalid_argument("pearson needs at least two points");
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(x.size());
    mean_y /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mean_x;
        double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return kUndefinedRatio;
    return sxy / std::sqrt(sxx * syy);
}

std::vector<std::vector<FoldSplit>> k_fold_partition(const MultiLabelDataset& dataset,
                                                     std::size_t folds, std::size_t repetitions,
                                                     std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("k_fold_partition needs at least 2 folds");
    if (dataset.num_instances() < folds)
        throw std::invalid_argument("k_fold_partition: fewer instances than folds");
    if (repetitions == 0) throw std::invalid_argument("k_fold_partition needs at least 1 repetition");

    const std::size_t n = dataset.num_instances();
    std::vector<std::vector<FoldSplit>> result;
    result.reserve(repetitions);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        Rng rng(splitmix64(seed + rep));
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        rng.shuffle(order);

        std::vector<FoldSplit> splits(folds);
        std::size_t base = n / folds;
        std::size_t extra = n % folds;
        std::size_t cursor = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            std::size_t size = base + (f < extra ? 1 : 0);
            auto& split = splits[f];
            split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                              order.begin() + static_cast<std::ptrdiff_t>(cursor + size));
            split.train.reserve(n - size);
            split.train.insert(split.train.end(), order.begin(),
                               order.begin() + static_cast<std::ptrdiff_t>(cursor));
            split.train.insert(split.train.end(),
                               order.begin() + static_cast<std::ptrdiff_t>(cursor + size),
                               order.end());
            std::sort(split.test.begin(), split.test.end());
            std::sort(split.train.begin(), split.train.end());
            cursor += size;
        }
        result.push_back(std::move(splits));
    }
    return result;
}

MultiLabelDataset subset(const MultiLabelDataset& dataset,
                         const std::vector<std::size_t>& indices) {
    std::vector<Instance> instances;
    instances.reserve(indices.size());
    for (std::size_t index : indices) {
        if (index >= dataset.num_instances())
            throw std::out_of_range("subset index " + std::to_string(index) + " out of range");
        instances.push_back(dataset.instances()[index]);
    }
    return MultiLabelDataset(dataset.relation_name(), dataset.schema(), std::move(instances));
}

namespace {

/// Dense one-hot encoding of the feature columns; missing values become 0.
std::vector<double> encode_features(const MultiLabelDataset& dataset, std::size_t& width) {
    width = 0;
    std::vector<std::size_t> offsets;
    offsets.reserve(dataset.num_features());
    for (std::size_t f = 0; f < dataset.num_features(); ++f) {
        const AttributeSchema& attr = dataset.schema()[dataset.feature_schema_pos(f)];
        offsets.push_back(width);
        switch (attr.kind) {
            case AttributeKind::numeric: width += 1; break;
            case AttributeKind::nominal: width += attr.nominal_values.size(); break;
            case AttributeKind::text:
                throw DatasetError("string feature '" + attr.name +
                                   "' is not supported by the baseline predictor");
        }
    }

    std::vector<double> matrix(dataset.num_instances() * width, 0.0);
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        const Instance& instance = dataset.instances()[i];
        double* row = matrix.data() + i * width;
        for (std::size_t f = 0; f < dataset.num_features(); ++f) {
            const FeatureValue& value = instance.features[f];
            if (std::holds_alternative<Missing>(value)) continue;
            if (const double* v = std::get_if<double>(&value)) {
                row[offsets[f]] = *v;
            } else if (const NominalIndex* v = std::get_if<NominalIndex>(&value)) {
                row[offsets[f] + static_cast<std::size_t>(v->index)] = 1.0;
            }
        }
    }
    return matrix;
}

}  // namespace

PredictionSet baseline_predict(const MultiLabelDataset& train, const MultiLabelDataset& test) {
    if (train.schema() != test.schema())
        throw DatasetError("train and test schemas differ");
    if (train.num_instances() == 0) throw DatasetError("empty training set");

    std::size_t train_width = 0, test_width = 0;
    std::vector<double> train_matrix = encode_features(train, train_width);
    std::vector<double> test_matrix = encode_features(test, test_width);

    PredictionSet predictions(test.num_instances(), train.num_labels(), 0.5);
    for (std::size_t i = 0; i < test.num_instances(); ++i) {
        const double* test_row = test_matrix.data() + i * test_width;
        std::size_t best = 0;
        double best_distance = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < train.num_instances(); ++j) {
            const double* train_row = train_matrix.data() + j * train_width;
            double distance = 0.0;
            for (std::size_t c = 0; c < train_width; ++c) {
                double d = test_row[c] - train_row[c];
                distance += d * d;
            }
            if (distance < best_distance) {
                best_distance = distance;
                best = j;
            }
        }
        for (std::int32_t label : train.instances()[best].labels) {
            predictions.set_score(i, static_cast<std::size_t>(label), 1.0);
            predictions.set_decision(i, static_cast<std::size_t>(label), true);
        }
    }
    return predictions;
}

PredictionSet read_predictions_csv(const std::filesystem::path& path, std::size_t num_labels,
                                   double threshold) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");

    std::vector<double> scores;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view view = line;
        while (!view.empty() && (view.front() == ' ' || view.front() == '\t')) view.remove_prefix(1);
        if (view.empty()) continue;

        std::vector<double> row;
        bool numeric = true;
        std::size_t start = 0;
        std::string_view body = line;
        while (start <= body.size()) {
            std::size_t end = body.find(',', start);
            if (end == std::string_view::npos) end = body.size();
            std::string_view cell = body.substr(start, end - start);
            while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
                cell.remove_prefix(1);
            while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t'))
                cell.remove_suffix(1);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                numeric = false;
                break;
            }
            row.push_back(v);
            if (end == body.size()) break;
            start = end + 1;
        }

        if (!numeric) {
            if (first_content_line) {
                first_content_line = false;  // header row
                continue;
            }
            throw ParseError("non-numeric score", line_no);
        }
        first_content_line = false;
        if (row.size() != num_labels)
            throw ParseError("row has " + std::to_string(row.size()) + " scores, expected " +
                                 std::to_string(num_labels),
                             line_no);
        for (double v : row) {
            if (!(v >= 0.0 && v <= 1.0))
                throw ParseError("score " + arff::format_double(v) + " is outside [0,1]", line_no);
        }
        scores.insert(scores.end(), row.begin(), row.end());
    }

    if (scores.empty())
        throw ParseError("'" + path.string() + "' holds no prediction rows");
    std::size_t rows = scores.size() / num_labels;
    return PredictionSet::from_scores(std::move(scores), rows, num_labels, threshold);
}

void write_predictions_csv(const std::filesystem::path& path, const PredictionSet& predictions,
                           const std::vector<std::string>& label_names) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
    if (!label_names.empty()) {
        for (std::size_t l = 0; l < label_names.size(); ++l) {
            if (l != 0) out << ',';
            out << label_names[l];
        }
        out << '\n';
    }
    for (std::size_t i = 0; i < predictions.rows(); ++i) {
        for (std::size_t l = 0; l < predictions.cols(); ++l) {
            if (l != 0) out << ',';
            out << arff::format_double(predictions.score(i, l));
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

}  // namespace mldkit
