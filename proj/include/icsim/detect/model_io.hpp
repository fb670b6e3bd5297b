#ifndef ICSIM_DETECT_MODEL_IO_HPP
#define ICSIM_DETECT_MODEL_IO_HPP

#include <string>

#include "icsim/detect/monitor.hpp"

namespace icsim::detect {

// Self-describing JSON model files: kind, parameters, training fingerprint
// and column order, so a monitor run can verify feature compatibility.
void save_model(const AnomalyModel& model, const std::string& path);
AnomalyModel load_model(const std::string& path);

// FNV-1a over a file's bytes; identifies the training capture in model files.
std::string file_fingerprint(const std::string& path);

} // namespace icsim::detect

#endif
