#ifndef ICSIM_HARNESS_SUITE_HPP
#define ICSIM_HARNESS_SUITE_HPP

#include <string>
#include <vector>

#include "icsim/mitm/scenario.hpp"

namespace icsim::harness {

// Shipped attack suites. Chem: 54 scenarios in the category mix
// 28 SingleSensor / 8 SingleActuator / 10 MultipleSensor / 6 MultipleActuator
// / 2 Complex with 16 flagged stealthy. Line: 2 MultipleSensor + 5 Complex
// with single-center and both-center variants.
std::vector<mitm::AttackScenario> chem_attack_suite(double onset_s);
std::vector<mitm::AttackScenario> line_attack_suite(double onset_s);

// Reduced chem suite for smoke campaigns: 10 scenarios covering every category.
std::vector<mitm::AttackScenario> smoke_attack_suite(double onset_s);

void write_suite(const std::vector<mitm::AttackScenario>& suite, const std::string& dir);
std::vector<mitm::AttackScenario> load_suite_dir(const std::string& dir);

} // namespace icsim::harness

#endif
