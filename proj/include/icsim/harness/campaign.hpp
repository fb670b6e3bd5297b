#ifndef ICSIM_HARNESS_CAMPAIGN_HPP
#define ICSIM_HARNESS_CAMPAIGN_HPP

#include <string>
#include <vector>

#include "icsim/detect/model_io.hpp"
#include "icsim/harness/evaluate.hpp"
#include "icsim/harness/testbed.hpp"
#include "icsim/mitm/scenario.hpp"

namespace icsim::harness {

// One benign training capture (its own boot, disjoint from evaluation).
collect::CaptureRecord run_training_capture(const TestbedConfig& config, Platform platform,
                                            const std::string& csv_path, std::uint64_t seed);

// n successive benign captures from one unbroken run.
std::vector<collect::CaptureRecord> run_benign_series(const TestbedConfig& config,
                                                      Platform platform, std::size_t n,
                                                      const std::string& out_dir,
                                                      std::uint64_t seed);

// One attack capture: plant and PLC routed through the MITM proxy.
collect::CaptureRecord run_attack_capture(const TestbedConfig& config,
                                          const mitm::AttackScenario& scenario,
                                          const std::string& csv_path, std::uint64_t seed);

// Fits a detector of the given kind ("ocsvm", "iforest", "lof") on the rows
// of the training captures; the window wrapper is shared by all kinds.
detect::AnomalyModel train_model(const std::string& kind,
                                 const std::vector<collect::CaptureRecord>& training,
                                 const TestbedConfig& config);

struct CampaignOptions {
    Platform platform = Platform::chem;
    std::string out_dir;
    std::size_t benign_captures = 50;
    std::vector<mitm::AttackScenario> scenarios;
    std::string model_kind = "ocsvm";
};

struct CampaignResult {
    collect::CaptureRecord training;
    std::vector<collect::CaptureRecord> evaluation; // benign + attacks
    std::string manifest_path;
    std::string model_path;
    EvalReport report;
};

// Full dataset campaign: train capture, benign series, attack suite, model
// fit, evaluation report. Deterministic under a fixed config seed.
CampaignResult run_campaign(const TestbedConfig& config, const CampaignOptions& options);

} // namespace icsim::harness

#endif
