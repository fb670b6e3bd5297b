#ifndef ICSIM_HARNESS_SPLIT_HPP
#define ICSIM_HARNESS_SPLIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "icsim/collect/collector.hpp"

namespace icsim::harness {

struct SplitCounts {
    std::size_t train = 1; // benign only
    std::size_t validation = 23;
    std::size_t test = 58;
};

struct SplitResult {
    std::vector<collect::CaptureRecord> train;
    std::vector<collect::CaptureRecord> validation;
    std::vector<collect::CaptureRecord> test; // labels withheld in the manifest
    std::string train_manifest;
    std::string validation_manifest;
    std::string test_manifest;
    std::string truth_path; // held-out test labels, grader input
};

// Three-way education split: benign-only training, labeled validation,
// label-withheld test plus a truth file. Deterministic under the seed;
// throws with the exact deficit when the capture set is too small.
SplitResult split_dataset(const std::vector<collect::CaptureRecord>& captures,
                          const SplitCounts& counts, std::uint64_t seed,
                          const std::string& out_dir);

struct GradeResult {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Compares a submission (CSV lines "capture,label") against the held-out
// truth; every test capture must be labeled.
GradeResult grade_submission(const std::string& truth_path, const std::string& submission_path);

void write_submission_template(const SplitResult& split, const std::string& path);

} // namespace icsim::harness

#endif
