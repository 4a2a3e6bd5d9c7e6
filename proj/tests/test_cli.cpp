#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "mldkit/formats.hpp"

using namespace mldkit;
namespace fs = std::filesystem;

namespace {

const std::string cli = MLDKIT_CLI_PATH;
const fs::path data_dir = MLDKIT_DATA_DIR;

struct RunResult {
    int code = -1;
    std::string output;  // stdout and stderr combined unless redirected
};

RunResult run(const std::string& command) {
    std::string full = command + " 2>&1";
    FILE* pipe = ::popen(full.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    int status = ::pclose(pipe);
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = std::move(out);
    return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int n = 0;
        path = fs::temp_directory_path() /
               ("mldkit-cli-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path toy_arff() { return data_dir / "toy" / "toy.arff"; }

void write_uniform_fixture(const fs::path& dir) {
    std::ofstream(dir / "uni.arff")
        << "@relation uni\n@attribute f1 numeric\n@attribute A {0,1}\n@attribute B {0,1}\n"
        << "@data\n1,1,0\n2,1,0\n3,0,1\n4,0,1\n";
    std::ofstream(dir / "uni.xml")
        << "<labels xmlns=\"http://mulan.sourceforge.net/labels\">"
        << "<label name=\"A\"></label><label name=\"B\"></label></labels>\n";
}

}  // namespace

TEST_CASE("info prints the summary with three-decimal metrics") {
    auto r = run(cli + " info " + q(toy_arff()));
    CHECK(r.code == 0);
    CHECK(r.output.find("Relation: toy") != std::string::npos);
    CHECK(r.output.find("Instances: 4") != std::string::npos);
    CHECK(r.output.find("Labels: 2") != std::string::npos);
    CHECK(r.output.find("Labelsets: 2") != std::string::npos);
    CHECK(r.output.find("Card: 1.250") != std::string::npos);
    CHECK(r.output.find("Dens: 0.625") != std::string::npos);
    CHECK(r.output.find("MeanIR: 2.500") != std::string::npos);
    CHECK(r.output.find("MaxIR: 4.000") != std::string::npos);
    CHECK(r.output.find("SCUMBLE: 0.050") != std::string::npos);
    CHECK(r.output.find("SCUMBLE.CV: 2.000") != std::string::npos);
}

TEST_CASE("info --json emits a parsable document") {
    auto r = run(cli + " --json info " + q(toy_arff()));
    CHECK(r.code == 0);
    auto doc = nlohmann::json::parse(r.output);
    CHECK(doc["relation"] == "toy");
    CHECK(doc["instances"] == 4);
    CHECK(doc["scumble"].get<double>() == doctest::Approx(0.05).epsilon(1e-9));

    // Two datasets come back as an array.
    auto multi = run(cli + " --json info " + q(toy_arff()) + " " + q(toy_arff()));
    CHECK(multi.code == 0);
    auto arr = nlohmann::json::parse(multi.output);
    REQUIRE(arr.is_array());
    CHECK(arr.size() == 2);
}

TEST_CASE("exit codes: 1 for data errors, 2 for usage errors") {
    CHECK(run(cli + " info /no/such/file.arff").code == 1);
    CHECK(run(cli + " frobnicate").code == 2);
    CHECK(run(cli + " info").code == 2);  // missing required positional
    CHECK(run(cli + " resample " + q(toy_arff()) + " /tmp/x.arff --method bogus").code == 2);
    auto multi_xml = run(cli + " info " + q(toy_arff()) + " " + q(toy_arff()) + " --xml " +
                         q(data_dir / "toy" / "toy.xml"));
    CHECK(multi_xml.code == 2);
    // Percentage outside the valid range is a usage error.
    CHECK(run(cli + " resample " + q(toy_arff()) + " /tmp/x.arff --method lp-ros --percentage 0")
              .code == 2);
    CHECK(run(cli + " --help").code == 0);
    CHECK(run(cli + " info --help").code == 0);
}

TEST_CASE("remedial decouples the toy dataset and writes a loadable pair") {
    TempDir tmp;
    auto out = tmp.path / "out.arff";
    auto r = run(cli + " remedial " + q(toy_arff()) + " " + q(out));
    CHECK(r.code == 0);
    CHECK(r.output.find("instances 4 -> 5") != std::string::npos);
    CHECK(r.output.find("1 instances decoupled") != std::string::npos);

    auto ds = formats::read_dataset(out, tmp.path / "out.xml");
    CHECK(ds.num_instances() == 5);
    auto original = formats::read_dataset(toy_arff(), data_dir / "toy" / "toy.xml");
    CHECK(ds.label_counts() == original.label_counts());

    // The decoupled dataset has zero concurrence, visible through info.
    auto after = run(cli + " info " + q(out));
    CHECK(after.output.find("SCUMBLE: 0.000") != std::string::npos);
}

TEST_CASE("resample is seed-deterministic and honors MLD_SEED") {
    TempDir tmp;
    auto a = tmp.path / "a.arff";
    auto b = tmp.path / "b.arff";
    auto c = tmp.path / "c.arff";
    auto base = " resample " + q(toy_arff()) + " ";

    CHECK(run(cli + base + q(a) + " --method lp-ros --percentage 50 --seed 7").code == 0);
    CHECK(run(cli + base + q(b) + " --method lp-ros --percentage 50 --seed 7").code == 0);
    CHECK(read_file(a) == read_file(b));

    CHECK(run("MLD_SEED=7 " + cli + base + q(c) + " --method lp-ros --percentage 50").code == 0);
    CHECK(read_file(a) == read_file(c));

    // A non-numeric MLD_SEED warns and falls back to the default seed 42.
    auto d = tmp.path / "d.arff";
    auto e = tmp.path / "e.arff";
    auto junk = run("MLD_SEED=banana " + cli + base + q(d) + " --method lp-ros --percentage 50");
    CHECK(junk.code == 0);
    CHECK(junk.output.find("MLD_SEED") != std::string::npos);
    CHECK(run(cli + base + q(e) + " --method lp-ros --percentage 50 --seed 42").code == 0);
    CHECK(read_file(d) == read_file(e));
}

TEST_CASE("resample reports before/after statistics and warns without minority bags") {
    TempDir tmp;
    write_uniform_fixture(tmp.path);
    auto out = tmp.path / "out.arff";
    auto r = run(cli + " resample " + q(tmp.path / "uni.arff") + " " + q(out) +
                 " --method lp-ros --percentage 50 --seed 1");
    CHECK(r.code == 0);
    CHECK(r.output.find("warning") != std::string::npos);
    auto ds = formats::read_dataset(out, tmp.path / "out.xml");
    CHECK(ds.num_instances() == 4);  // unchanged

    auto rus = run(cli + " resample " + q(toy_arff()) + " " + q(tmp.path / "rus.arff") +
                   " --method lp-rus --percentage 25 --seed 3");
    CHECK(rus.code == 0);
    CHECK(rus.output.find("MeanIR") != std::string::npos);
}

TEST_CASE("partition writes train/test pairs plus one shared labels file") {
    TempDir tmp;
    auto r = run(cli + " partition " + q(toy_arff()) + " --folds 2 --reps 2 --seed 5 --outdir " +
                 q(tmp.path));
    CHECK(r.code == 0);
    CHECK(fs::exists(tmp.path / "toy.xml"));
    for (int rep = 1; rep <= 2; ++rep)
        for (int fold = 1; fold <= 2; ++fold) {
            auto stem = "toy-rep" + std::to_string(rep) + "-fold" + std::to_string(fold);
            CHECK(fs::exists(tmp.path / (stem + "-train.arff")));
            CHECK(fs::exists(tmp.path / (stem + "-test.arff")));
        }

    auto train = formats::read_dataset(tmp.path / "toy-rep1-fold1-train.arff", tmp.path / "toy.xml");
    auto test = formats::read_dataset(tmp.path / "toy-rep1-fold1-test.arff", tmp.path / "toy.xml");
    CHECK(train.num_instances() + test.num_instances() == 4);
    CHECK(train.num_instances() == 2);

    // Fold contents are complementary: every toy row appears exactly once.
    auto original = formats::read_dataset(toy_arff(), data_dir / "toy" / "toy.xml");
    std::vector<bool> seen(original.num_instances(), false);
    for (const auto& source : {train, test})
        for (const auto& instance : source.instances())
            for (std::size_t i = 0; i < original.num_instances(); ++i)
                if (!seen[i] && instance == original.instances()[i]) {
                    seen[i] = true;
                    break;
                }
    for (bool s : seen) CHECK(s);
}

TEST_CASE("evaluate scores a prediction CSV in text and JSON") {
    TempDir tmp;
    auto pred = tmp.path / "pred.csv";
    std::ofstream(pred) << "A,B\n1,0\n1,0\n1,1\n1,0\n";

    auto r = run(cli + " evaluate --truth " + q(toy_arff()) + " --pred " + q(pred));
    CHECK(r.code == 0);
    CHECK(r.output.find("HammingLoss: 0.000000") != std::string::npos);
    CHECK(r.output.find("Precision: 1.000000") != std::string::npos);
    CHECK(r.output.find("Recall: 1.000000") != std::string::npos);
    CHECK(r.output.find("FMeasure: 1.000000") != std::string::npos);
    CHECK(r.output.find("MacroFM: 1.000000") != std::string::npos);
    CHECK(r.output.find("OneError: 0.000000") != std::string::npos);
    CHECK(r.output.find("RankingLoss: 0.000000") != std::string::npos);

    auto j = run(cli + " --json evaluate --truth " + q(toy_arff()) + " --pred " + q(pred));
    CHECK(j.code == 0);
    auto doc = nlohmann::json::parse(j.output);
    CHECK(doc["hamming_loss"] == 0.0);
    CHECK(doc["f_measure"] == 1.0);

    // Malformed CSV: nonzero exit naming the offending line.
    auto bad = tmp.path / "bad.csv";
    std::ofstream(bad) << "0.5,0.5\noops,1\n";
    auto err = run(cli + " evaluate --truth " + q(toy_arff()) + " --pred " + q(bad));
    CHECK(err.code == 1);
    CHECK(err.output.find("line 2") != std::string::npos);

    // Row count must match the truth dataset.
    auto shorter = tmp.path / "short.csv";
    std::ofstream(shorter) << "1,0\n1,0\n";
    CHECK(run(cli + " evaluate --truth " + q(toy_arff()) + " --pred " + q(shorter)).code == 1);
}

TEST_CASE("convert changes layout and style and refuses clobbering its input") {
    TempDir tmp;
    auto meka = tmp.path / "toy-meka.arff";
    auto r = run(cli + " convert " + q(toy_arff()) + " " + q(meka) +
                 " --format meka --style sparse");
    CHECK(r.code == 0);
    auto text = read_file(meka);
    CHECK(text.find("@relation 'toy: -C -2'") != std::string::npos);
    CHECK(text.find("{") != std::string::npos);  // sparse rows

    // The MEKA file is self-describing and loads back to the same dataset.
    auto ds = formats::read_dataset(meka);
    auto original = formats::read_dataset(toy_arff(), data_dir / "toy" / "toy.xml");
    CHECK(ds == original);

    // Converting back to MULAN emits the labels file.
    auto mulan = tmp.path / "back.arff";
    CHECK(run(cli + " convert " + q(meka) + " " + q(mulan) + " --format mulan").code == 0);
    CHECK(fs::exists(tmp.path / "back.xml"));
    CHECK(formats::read_dataset(mulan, tmp.path / "back.xml") == original);

    // In-place conversion is refused, input left intact.
    auto before = read_file(meka);
    auto refuse = run(cli + " convert " + q(meka) + " " + q(meka) + " --style dense");
    CHECK(refuse.code == 1);
    CHECK(refuse.output.find("refusing") != std::string::npos);
    CHECK(read_file(meka) == before);
}

TEST_CASE("concurrence prints the report and draws the chord diagram") {
    TempDir tmp;
    auto svg = tmp.path / "chord.svg";
    auto r = run(cli + " concurrence " + q(toy_arff()) + " --svg " + q(svg));
    CHECK(r.code == 0);
    CHECK(r.output.find("SCUMBLE") != std::string::npos);
    CHECK(r.output.find("B (IRLbl 4.000, SCUMBLELbl 0.200)") != std::string::npos);
    auto text = read_file(svg);
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("class=\"arc\"") != std::string::npos);
    CHECK(text.find("class=\"ribbon\"") != std::string::npos);

    auto j = run(cli + " --json concurrence " + q(toy_arff()));
    CHECK(j.code == 0);
    auto doc = nlohmann::json::parse(j.output);
    CHECK(doc["report_version"] == 1);
    CHECK(doc["difficult_labels"][0]["name"] == "B");
}
