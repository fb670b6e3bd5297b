#ifndef ICSIM_HARNESS_CONFIG_HPP
#define ICSIM_HARNESS_CONFIG_HPP

#include <cstdint>
#include <string>

#include "icsim/plant/chem.hpp"
#include "icsim/plant/line.hpp"
#include "icsim/plc/control.hpp"

namespace icsim::harness {

enum class Platform { chem, line };
const char* to_string(Platform p);
Platform platform_from_string(const std::string& s);

struct WindowConfig {
    std::size_t size = 15;
    double theta = 0.6;
};

struct ChemConfig {
    double cycle_s = 1000.0; // control cycle; capture length and schedule period
    WindowConfig window{15, 0.6};
    double warmup_s = 60.0; // past the window floor; the training capture keeps the
                            // boot transient, which widens the learned benign envelope
    double onset_s = 15.0;    // one full window of benign samples before attack
    plant::ChemParams plant;
    plc::ChemControlLaw::Schedule schedule;
};

struct LineConfig {
    double cycle_s = 400.0;
    WindowConfig window{5, 0.6};
    double warmup_s = 800.0; // both staggered centers complete a part and
                             // settle into the steady joint cycle
    double onset_s = 5.0;
    plant::LineParams plant;
};

struct TestbedConfig {
    std::uint64_t seed = 1;
    double acceleration = 20.0; // wall pacing only, never the dynamics
    double dt_s = 1.0;          // scan and sampling period in simulated time
    ChemConfig chem;
    LineConfig line;

    const WindowConfig& window(Platform p) const
    {
        return p == Platform::chem ? chem.window : line.window;
    }
    double cycle_s(Platform p) const { return p == Platform::chem ? chem.cycle_s : line.cycle_s; }
    double warmup_s(Platform p) const
    {
        return p == Platform::chem ? chem.warmup_s : line.warmup_s;
    }
    double onset_s(Platform p) const { return p == Platform::chem ? chem.onset_s : line.onset_s; }
};

TestbedConfig default_config();
TestbedConfig load_config(const std::string& path);
void save_config(const TestbedConfig& config, const std::string& path);

} // namespace icsim::harness

#endif
