#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mldkit/concurrence.hpp"
#include "mldkit/dataset.hpp"
#include "mldkit/errors.hpp"
#include "mldkit/evaluation.hpp"
#include "mldkit/formats.hpp"
#include "mldkit/imbalance.hpp"
#include "mldkit/reporting.hpp"
#include "mldkit/resampling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("MLD_SEED")) {
        std::string_view text(env);
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc{} && ptr == text.data() + text.size()) return value;
        std::cerr << "warning: ignoring non-numeric MLD_SEED '" << text << "'\n";
    }
    return 42;
}

std::string fmt(double v, int decimals) {
    if (std::isnan(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

mldkit::MultiLabelDataset load_dataset(const std::string& path, const std::string& xml) {
    if (!xml.empty()) return mldkit::formats::read_dataset(path, fs::path(xml));
    if (auto sibling = mldkit::formats::sibling_labels_file(path))
        return mldkit::formats::read_dataset(path, *sibling);
    return mldkit::formats::read_dataset(path);
}

/// No subcommand may write over its own inputs.
void refuse_overwrite(const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs) {
    for (const fs::path& out : outputs) {
        fs::path canonical_out = fs::weakly_canonical(out);
        for (const fs::path& in : inputs) {
            if (fs::weakly_canonical(in) == canonical_out)
                throw mldkit::DatasetError("refusing to overwrite input file '" + in.string() +
                                           "'");
        }
    }
}

mldkit::arff::RowStyle parse_style(const std::string& style) {
    return style == "sparse" ? mldkit::arff::RowStyle::sparse : mldkit::arff::RowStyle::dense;
}

struct InfoArgs {
    std::vector<std::string> paths;
    std::string xml;
};

void run_info(const InfoArgs& args, bool as_json) {
    if (!args.xml.empty() && args.paths.size() > 1)
        throw std::invalid_argument("--xml applies to a single dataset path");

    json all = json::array();
    bool first = true;
    for (const std::string& path : args.paths) {
        mldkit::MultiLabelDataset dataset = load_dataset(path, args.xml);
        mldkit::ImbalanceProfile imbalance = mldkit::imbalance_profile(dataset);
        mldkit::ConcurrenceProfile concurrence = mldkit::concurrence_profile(dataset, imbalance);
        std::size_t labelsets = mldkit::distinct_labelsets(dataset).count();

        if (as_json) {
            all.push_back({{"path", path},
                           {"relation", dataset.relation_name()},
                           {"instances", dataset.num_instances()},
                           {"attributes", dataset.schema().size()},
                           {"features", dataset.num_features()},
                           {"labels", dataset.num_labels()},
                           {"labelsets", labelsets},
                           {"card", number_or_null(imbalance.card)},
                           {"dens", number_or_null(imbalance.dens)},
                           {"mean_ir", number_or_null(imbalance.mean_ir)},
                           {"max_ir", number_or_null(imbalance.max_ir)},
                           {"scumble", number_or_null(concurrence.scumble)},
                           {"scumble_cv", number_or_null(concurrence.scumble_cv)}});
            continue;
        }
        if (!first) std::cout << "\n";
        first = false;
        std::cout << "Dataset: " << path << "\n"
                  << "Relation: " << dataset.relation_name() << "\n"
                  << "Instances: " << dataset.num_instances() << "\n"
                  << "Attributes: " << dataset.schema().size() << "\n"
                  << "Features: " << dataset.num_features() << "\n"
                  << "Labels: " << dataset.num_labels() << "\n"
                  << "Labelsets: " << labelsets << "\n"
                  << "Card: " << fmt(imbalance.card, 3) << "\n"
                  << "Dens: " << fmt(imbalance.dens, 3) << "\n"
                  << "MeanIR: " << fmt(imbalance.mean_ir, 3) << "\n"
                  << "MaxIR: " << fmt(imbalance.max_ir, 3) << "\n"
                  << "SCUMBLE: " << fmt(concurrence.scumble, 3) << "\n"
                  << "SCUMBLE.CV: " << fmt(concurrence.scumble_cv, 3) << "\n";
    }
    if (as_json) std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
}

struct ConcurrenceArgs {
    std::string path;
    std::string xml;
    std::string svg;
    std::size_t top_k = 10;
};

void run_concurrence(const ConcurrenceArgs& args, bool as_json) {
    mldkit::MultiLabelDataset dataset = load_dataset(args.path, args.xml);
    mldkit::ConcurrenceReport report = mldkit::build_report(dataset, args.top_k);

    if (!args.svg.empty()) {
        refuse_overwrite({fs::path(args.path)}, {fs::path(args.svg)});
        mldkit::ChordOptions options;
        options.top_k = args.top_k;
        mldkit::write_chord_svg(args.svg, dataset, options);
    }

    if (as_json) {
        json doc = mldkit::report_json(report);
        if (!args.svg.empty()) doc["svg_path"] = args.svg;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << mldkit::report_text(report);
        if (!args.svg.empty()) std::cout << "\nWrote chord diagram to " << args.svg << "\n";
    }
}

struct RemedialArgs {
    std::string in;
    std::string out;
    std::string xml;
    std::size_t iterations = 1;
    std::string style = "dense";
};

void run_remedial(const RemedialArgs& args, bool as_json) {
    if (args.iterations == 0) throw std::invalid_argument("--iterations must be at least 1");
    fs::path out_arff(args.out);
    fs::path out_xml = mldkit::formats::labels_path_for(out_arff);
    std::vector<fs::path> inputs{fs::path(args.in)};
    if (!args.xml.empty()) inputs.push_back(fs::path(args.xml));
    if (auto sibling = mldkit::formats::sibling_labels_file(args.in)) inputs.push_back(*sibling);
    refuse_overwrite(inputs, {out_arff, out_xml});

    mldkit::MultiLabelDataset dataset = load_dataset(args.in, args.xml);
    json iterations = json::array();
    for (std::size_t i = 1; i <= args.iterations; ++i) {
        double scumble_before = mldkit::concurrence_profile(dataset).scumble;
        std::size_t before = dataset.num_instances();
        mldkit::ResampleOutcome outcome = mldkit::remedial(dataset);
        dataset = std::move(outcome.dataset);
        double scumble_after = mldkit::concurrence_profile(dataset).scumble;

        if (as_json) {
            iterations.push_back({{"iteration", i},
                                  {"instances_before", before},
                                  {"instances_after", dataset.num_instances()},
                                  {"decoupled", outcome.decoupled_count},
                                  {"dropped_empty", outcome.dropped_empty_count},
                                  {"added", outcome.added_count},
                                  {"scumble_before", number_or_null(scumble_before)},
                                  {"scumble_after", number_or_null(scumble_after)}});
        } else {
            std::cout << "Iteration " << i << ": instances " << before << " -> "
                      << dataset.num_instances() << ", " << outcome.decoupled_count
                      << " instances decoupled (" << outcome.dropped_empty_count
                      << " empty sides dropped), SCUMBLE " << fmt(scumble_before, 3) << " -> "
                      << fmt(scumble_after, 3) << "\n";
        }
    }

    mldkit::formats::write_dataset(out_arff, dataset, parse_style(args.style),
                          mldkit::formats::LabelLayout::mulan);
    if (as_json) {
        json doc{{"iterations", std::move(iterations)},
                 {"output", {{"arff", out_arff.string()}, {"xml", out_xml.string()}}}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "Wrote " << out_arff.string() << " and " << out_xml.string() << "\n";
    }
}

struct ResampleArgs {
    std::string in;
    std::string out;
    std::string xml;
    std::string method;
    double percentage = 10.0;
    std::uint64_t seed = 42;
    std::string style = "dense";
};

void run_resample(const ResampleArgs& args, bool as_json) {
    fs::path out_arff(args.out);
    fs::path out_xml = mldkit::formats::labels_path_for(out_arff);
    std::vector<fs::path> inputs{fs::path(args.in)};
    if (!args.xml.empty()) inputs.push_back(fs::path(args.xml));
    if (auto sibling = mldkit::formats::sibling_labels_file(args.in)) inputs.push_back(*sibling);
    refuse_overwrite(inputs, {out_arff, out_xml});

    mldkit::MultiLabelDataset dataset = load_dataset(args.in, args.xml);
    mldkit::ImbalanceProfile before = mldkit::imbalance_profile(dataset);

    mldkit::ResampleOutcome outcome;
    if (args.method == "lp-ros")
        outcome = mldkit::lp_ros(dataset, args.percentage, args.seed);
    else if (args.method == "lp-rus")
        outcome = mldkit::lp_rus(dataset, args.percentage, args.seed);
    else
        throw std::invalid_argument("unknown method '" + args.method +
                                    "', expected lp-ros or lp-rus");

    for (const std::string& warning : outcome.warnings)
        std::cerr << "warning: " << warning << "\n";

    mldkit::ImbalanceProfile after = mldkit::imbalance_profile(outcome.dataset);
    mldkit::formats::write_dataset(out_arff, outcome.dataset, parse_style(args.style),
                          mldkit::formats::LabelLayout::mulan);

    if (as_json) {
        json doc{{"method", args.method},
                 {"percentage", args.percentage},
                 {"seed", args.seed},
                 {"instances_before", dataset.num_instances()},
                 {"instances_after", outcome.dataset.num_instances()},
                 {"added", outcome.added_count},
                 {"removed", outcome.removed_count},
                 {"mean_ir_before", number_or_null(before.mean_ir)},
                 {"mean_ir_after", number_or_null(after.mean_ir)},
                 {"max_ir_before", number_or_null(before.max_ir)},
                 {"max_ir_after", number_or_null(after.max_ir)},
                 {"warnings", outcome.warnings},
                 {"output", {{"arff", out_arff.string()}, {"xml", out_xml.string()}}}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "Method: " << args.method << " (P=" << fmt(args.percentage, 1)
                  << ", seed=" << args.seed << ")\n"
                  << "Instances: " << dataset.num_instances() << " -> "
                  << outcome.dataset.num_instances() << " (added " << outcome.added_count
                  << ", removed " << outcome.removed_count << ")\n"
                  << "         Before    After\n"
                  << "MeanIR  " << fmt(before.mean_ir, 3) << "  " << fmt(after.mean_ir, 3) << "\n"
                  << "MaxIR   " << fmt(before.max_ir, 3) << "  " << fmt(after.max_ir, 3) << "\n"
                  << "Wrote " << out_arff.string() << " and " << out_xml.string() << "\n";
    }
}

struct PartitionArgs {
    std::string in;
    std::string xml;
    std::size_t folds = 5;
    std::size_t reps = 2;
    std::uint64_t seed = 42;
    std::string outdir = ".";
    std::string style = "dense";
};

void run_partition(const PartitionArgs& args, bool as_json) {
    mldkit::MultiLabelDataset dataset = load_dataset(args.in, args.xml);
    auto partitions = mldkit::k_fold_partition(dataset, args.folds, args.reps, args.seed);

    fs::path outdir(args.outdir);
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) throw mldkit::DatasetError("cannot create output directory '" + args.outdir + "'");

    std::string stem = fs::path(args.in).stem().string();
    fs::path labels_file = outdir / (stem + ".xml");

    std::vector<fs::path> inputs{fs::path(args.in)};
    if (!args.xml.empty()) inputs.push_back(fs::path(args.xml));
    if (auto sibling = mldkit::formats::sibling_labels_file(args.in)) inputs.push_back(*sibling);
    refuse_overwrite(inputs, {labels_file});

    mldkit::formats::write_labels_file(labels_file, dataset.label_names());

    json files = json::array();
    for (std::size_t r = 0; r < partitions.size(); ++r) {
        for (std::size_t f = 0; f < partitions[r].size(); ++f) {
            const mldkit::FoldSplit& split = partitions[r][f];
            fs::path train_path =
                outdir / (stem + "-rep" + std::to_string(r + 1) + "-fold" + std::to_string(f + 1) +
                          "-train.arff");
            fs::path test_path =
                outdir / (stem + "-rep" + std::to_string(r + 1) + "-fold" + std::to_string(f + 1) +
                          "-test.arff");
            refuse_overwrite(inputs, {train_path, test_path});

            mldkit::arff::write_file(
                train_path,
                mldkit::formats::to_raw(mldkit::subset(dataset, split.train),
                                        mldkit::formats::LabelLayout::mulan),
                parse_style(args.style));
            mldkit::arff::write_file(
                test_path,
                mldkit::formats::to_raw(mldkit::subset(dataset, split.test),
                                        mldkit::formats::LabelLayout::mulan),
                parse_style(args.style));

            if (as_json) {
                files.push_back({{"rep", r + 1},
                                 {"fold", f + 1},
                                 {"train", train_path.string()},
                                 {"train_size", split.train.size()},
                                 {"test", test_path.string()},
                                 {"test_size", split.test.size()}});
            } else {
                std::cout << "rep " << r + 1 << " fold " << f + 1 << ": train "
                          << split.train.size() << ", test " << split.test.size() << "\n";
            }
        }
    }

    if (as_json) {
        json doc{{"folds", args.folds},
                 {"reps", args.reps},
                 {"seed", args.seed},
                 {"labels_file", labels_file.string()},
                 {"files", std::move(files)}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "Wrote " << args.reps * args.folds * 2 << " dataset files and "
                  << labels_file.string() << "\n";
    }
}

struct EvaluateArgs {
    std::string truth;
    std::string xml;
    std::string pred;
    double threshold = 0.5;
    bool strict_ties = false;
    bool macro_skip = false;
};

void run_evaluate(const EvaluateArgs& args, bool as_json) {
    mldkit::MultiLabelDataset truth = load_dataset(args.truth, args.xml);
    mldkit::PredictionSet predictions =
        mldkit::read_predictions_csv(args.pred, truth.num_labels(), args.threshold);

    double hl = mldkit::hamming_loss(truth, predictions);
    double p = mldkit::precision(truth, predictions);
    double r = mldkit::recall(truth, predictions);
    double f = mldkit::f_measure(truth, predictions);
    double macro = mldkit::macro_fm(truth, predictions,
                                    args.macro_skip ? mldkit::ZeroDivisionPolicy::skip_label
                                                    : mldkit::ZeroDivisionPolicy::score_zero);
    double oe = mldkit::one_error(truth, predictions);
    double rl = mldkit::ranking_loss(
        truth, predictions, args.strict_ties ? mldkit::TiePolicy::strict : mldkit::TiePolicy::half);

    if (as_json) {
        json doc{{"truth", args.truth},       {"predictions", args.pred},
                 {"threshold", args.threshold}, {"hamming_loss", number_or_null(hl)},
                 {"precision", number_or_null(p)}, {"recall", number_or_null(r)},
                 {"f_measure", number_or_null(f)}, {"macro_fm", number_or_null(macro)},
                 {"one_error", number_or_null(oe)}, {"ranking_loss", number_or_null(rl)}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "HammingLoss: " << fmt(hl, 6) << "\n"
                  << "Precision: " << fmt(p, 6) << "\n"
                  << "Recall: " << fmt(r, 6) << "\n"
                  << "FMeasure: " << fmt(f, 6) << "\n"
                  << "MacroFM: " << fmt(macro, 6) << "\n"
                  << "OneError: " << fmt(oe, 6) << "\n"
                  << "RankingLoss: " << fmt(rl, 6) << "\n";
    }
}

struct ConvertArgs {
    std::string in;
    std::string out;
    std::string xml;
    std::string style = "dense";
    std::string format = "mulan";
};

void run_convert(const ConvertArgs& args, bool as_json) {
    fs::path out_arff(args.out);
    auto layout = args.format == "meka" ? mldkit::formats::LabelLayout::meka
                                        : mldkit::formats::LabelLayout::mulan;

    std::vector<fs::path> inputs{fs::path(args.in)};
    if (!args.xml.empty()) inputs.push_back(fs::path(args.xml));
    if (auto sibling = mldkit::formats::sibling_labels_file(args.in)) inputs.push_back(*sibling);
    std::vector<fs::path> outputs{out_arff};
    if (layout == mldkit::formats::LabelLayout::mulan)
        outputs.push_back(mldkit::formats::labels_path_for(out_arff));
    refuse_overwrite(inputs, outputs);

    mldkit::MultiLabelDataset dataset = load_dataset(args.in, args.xml);
    mldkit::formats::write_dataset(out_arff, dataset, parse_style(args.style), layout);

    if (as_json) {
        json doc{{"arff", out_arff.string()}};
        if (layout == mldkit::formats::LabelLayout::mulan)
            doc["xml"] = mldkit::formats::labels_path_for(out_arff).string();
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "Wrote " << out_arff.string();
        if (layout == mldkit::formats::LabelLayout::mulan)
            std::cout << " and " << mldkit::formats::labels_path_for(out_arff).string();
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilabel dataset imbalance and label-concurrence toolkit"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "Emit JSON instead of plain text");

    const std::uint64_t seed_default = default_seed();

    InfoArgs info_args;
    CLI::App* info = app.add_subcommand("info", "Summarize datasets");
    info->add_option("paths", info_args.paths, "Dataset ARFF paths")->required()->expected(-1);
    info->add_option("--xml", info_args.xml, "Label-space XML (single dataset only)");

    ConcurrenceArgs conc_args;
    CLI::App* conc = app.add_subcommand("concurrence", "Label concurrence report");
    conc->add_option("path", conc_args.path, "Dataset ARFF path")->required();
    conc->add_option("--xml", conc_args.xml, "Label-space XML path");
    conc->add_option("--svg", conc_args.svg, "Write a chord diagram to this path");
    conc->add_option("--top-k", conc_args.top_k, "Difficult labels to list")->default_val(10);

    RemedialArgs rem_args;
    CLI::App* rem = app.add_subcommand("remedial", "Decouple imbalanced co-occurring labels");
    rem->add_option("in", rem_args.in, "Input dataset ARFF")->required();
    rem->add_option("out", rem_args.out, "Output ARFF path")->required();
    rem->add_option("--xml", rem_args.xml, "Label-space XML path");
    rem->add_option("--iterations", rem_args.iterations, "Sequential applications")
        ->default_val(1);
    rem->add_option("--style", rem_args.style, "Row style: dense or sparse")
        ->default_val("dense")
        ->check(CLI::IsMember({"dense", "sparse"}));

    ResampleArgs res_args;
    CLI::App* res = app.add_subcommand("resample", "Labelset-frequency resampling");
    res->add_option("in", res_args.in, "Input dataset ARFF")->required();
    res->add_option("out", res_args.out, "Output ARFF path")->required();
    res->add_option("--xml", res_args.xml, "Label-space XML path");
    res->add_option("--method", res_args.method, "lp-ros or lp-rus")
        ->required()
        ->check(CLI::IsMember({"lp-ros", "lp-rus"}));
    res->add_option("--percentage", res_args.percentage, "Resampling percentage")
        ->default_val(10.0);
    res->add_option("--seed", res_args.seed, "Random seed")->default_val(seed_default);
    res->add_option("--style", res_args.style, "Row style: dense or sparse")
        ->default_val("dense")
        ->check(CLI::IsMember({"dense", "sparse"}));

    PartitionArgs part_args;
    CLI::App* part = app.add_subcommand("partition", "Seeded k-fold train/test partitions");
    part->add_option("in", part_args.in, "Input dataset ARFF")->required();
    part->add_option("--xml", part_args.xml, "Label-space XML path");
    part->add_option("--folds", part_args.folds, "Folds per repetition")->default_val(5);
    part->add_option("--reps", part_args.reps, "Repetitions")->default_val(2);
    part->add_option("--seed", part_args.seed, "Random seed")->default_val(seed_default);
    part->add_option("--outdir", part_args.outdir, "Output directory")->default_val(".");
    part->add_option("--style", part_args.style, "Row style: dense or sparse")
        ->default_val("dense")
        ->check(CLI::IsMember({"dense", "sparse"}));

    EvaluateArgs eval_args;
    CLI::App* eval = app.add_subcommand("evaluate", "Score predictions against ground truth");
    eval->add_option("--truth", eval_args.truth, "Ground-truth dataset ARFF")->required();
    eval->add_option("--xml", eval_args.xml, "Label-space XML path");
    eval->add_option("--pred", eval_args.pred, "Prediction CSV")->required();
    eval->add_option("--threshold", eval_args.threshold, "Decision threshold")
        ->default_val(0.5)
        ->check(CLI::Range(0.0, 1.0));
    eval->add_flag("--strict-ties", eval_args.strict_ties,
                   "Count tied ranking pairs as correct instead of half");
    eval->add_flag("--macro-skip-undefined", eval_args.macro_skip,
                   "Skip labels with no positives from MacroFM instead of scoring 0");

    ConvertArgs conv_args;
    CLI::App* conv = app.add_subcommand("convert", "Convert between formats and row styles");
    conv->add_option("in", conv_args.in, "Input dataset ARFF")->required();
    conv->add_option("out", conv_args.out, "Output ARFF path")->required();
    conv->add_option("--xml", conv_args.xml, "Label-space XML path");
    conv->add_option("--style", conv_args.style, "Row style: dense or sparse")
        ->default_val("dense")
        ->check(CLI::IsMember({"dense", "sparse"}));
    conv->add_option("--format", conv_args.format, "Label designation: mulan or meka")
        ->default_val("mulan")
        ->check(CLI::IsMember({"mulan", "meka"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*info)
            run_info(info_args, as_json);
        else if (*conc)
            run_concurrence(conc_args, as_json);
        else if (*rem)
            run_remedial(rem_args, as_json);
        else if (*res)
            run_resample(res_args, as_json);
        else if (*part)
            run_partition(part_args, as_json);
        else if (*eval)
            run_evaluate(eval_args, as_json);
        else if (*conv)
            run_convert(conv_args, as_json);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
