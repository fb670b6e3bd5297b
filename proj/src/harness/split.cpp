#include "icsim/harness/split.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace icsim::harness {

namespace fs = std::filesystem;
using nlohmann::json;

SplitResult split_dataset(const std::vector<collect::CaptureRecord>& captures,
                          const SplitCounts& counts, std::uint64_t seed,
                          const std::string& out_dir)
{
    const std::size_t want = counts.train + counts.validation + counts.test;
    if (captures.size() < want) {
        throw std::invalid_argument(
            "split_dataset: need " + std::to_string(want) + " captures, have " +
            std::to_string(captures.size()) + " (short by " +
            std::to_string(want - captures.size()) + ")");
    }

    std::vector<collect::CaptureRecord> benign, attacks;
    for (const auto& r : captures)
        (r.label == 0 ? benign : attacks).push_back(r);
    if (benign.size() < counts.train)
        throw std::invalid_argument("split_dataset: need " + std::to_string(counts.train) +
                                    " benign training captures, have " +
                                    std::to_string(benign.size()));

    std::mt19937_64 rng(seed);
    std::shuffle(benign.begin(), benign.end(), rng);
    std::shuffle(attacks.begin(), attacks.end(), rng);

    SplitResult result;
    for (std::size_t i = 0; i < counts.train; ++i)
        result.train.push_back(benign[i]);

    std::vector<collect::CaptureRecord> pool(benign.begin() + static_cast<long>(counts.train),
                                             benign.end());
    pool.insert(pool.end(), attacks.begin(), attacks.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    if (pool.size() < counts.validation + counts.test)
        throw std::invalid_argument("split_dataset: not enough non-training captures");

    result.validation.assign(pool.begin(), pool.begin() + static_cast<long>(counts.validation));
    result.test.assign(pool.begin() + static_cast<long>(counts.validation),
                       pool.begin() + static_cast<long>(counts.validation + counts.test));

    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    result.train_manifest = (out / "train_manifest.json").string();
    result.validation_manifest = (out / "validation_manifest.json").string();
    result.test_manifest = (out / "test_manifest.json").string();
    result.truth_path = (out / "test_truth.json").string();

    collect::save_manifest(result.train, result.train_manifest);
    collect::save_manifest(result.validation, result.validation_manifest);

    // Test manifest hides labels and attack metadata; truth goes to the grader file.
    std::vector<collect::CaptureRecord> blinded = result.test;
    json truth = json::object();
    for (auto& r : blinded) {
        truth[fs::path(r.path).filename().string()] = r.label;
        r.label = -1;
        r.scenario = "withheld";
        r.category.clear();
        r.stealthy = false;
        r.onset_s = 0.0;
    }
    collect::save_manifest(blinded, result.test_manifest);

    std::ofstream truth_out(result.truth_path);
    if (!truth_out)
        throw std::runtime_error("cannot write truth file: " + result.truth_path);
    truth_out << truth.dump(2) << "\n";
    return result;
}

GradeResult grade_submission(const std::string& truth_path, const std::string& submission_path)
{
    std::ifstream truth_in(truth_path);
    if (!truth_in)
        throw std::runtime_error("cannot open truth file: " + truth_path);
    json truth;
    truth_in >> truth;

    std::ifstream sub(submission_path);
    if (!sub)
        throw std::runtime_error("cannot open submission: " + submission_path);

    std::map<std::string, int> answers;
    std::string line;
    while (std::getline(sub, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed submission line: " + line);
        std::string name = line.substr(0, comma);
        if (name == "capture")
            continue; // header
        answers[name] = std::stoi(line.substr(comma + 1));
    }

    GradeResult result;
    for (const auto& [name, label] : truth.items()) {
        auto it = answers.find(name);
        if (it == answers.end())
            throw std::runtime_error("submission missing capture: " + name);
        const int want = label.get<int>();
        const int got = it->second;
        if (want == 1)
            got == 1 ? ++result.tp : ++result.fn;
        else
            got == 1 ? ++result.fp : ++result.tn;
    }
    return result;
}

void write_submission_template(const SplitResult& split, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write submission template: " + path);
    out << "capture,label\n";
    for (const auto& r : split.test)
        out << fs::path(r.path).filename().string() << ",0\n";
}

} // namespace icsim::harness
