#ifndef ICSIM_COLLECT_COLLECTOR_HPP
#define ICSIM_COLLECT_COLLECTOR_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "icsim/modbus/client.hpp"

namespace icsim::collect {

// What the collector reads from the PLC for one platform, in canonical column
// order. Register points normalize as raw/65535, bit points as 0/1.
struct PlatformSchema {
    struct Range {
        modbus::Table table;
        std::uint16_t first;
        std::uint16_t count;
    };

    std::string platform;
    std::size_t n_sensors = 0;
    std::size_t n_actuators = 0;
    std::vector<Range> sensor_ranges;
    std::vector<Range> readback_ranges;
    std::vector<Range> commanded_ranges;

    std::size_t feature_dim() const { return 2 * n_sensors + 2 * n_actuators; }
    std::vector<std::string> column_names() const; // s_*, d_*, a_*, c_*
    static PlatformSchema chem();
    static PlatformSchema line();
    static PlatformSchema for_platform(const std::string& name);
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> sensors;
    std::vector<double> readbacks;
    std::vector<double> commanded;
};

// One consistent poll of all mirrored points via minimal contiguous reads.
Snapshot poll_sample(modbus::ModbusTcpClient& plc, const PlatformSchema& schema, double t);

struct FeatureVector {
    std::vector<double> values; // s_0.. d_0.. a_0.. c_0..
};

// Deltas are current minus previous normalized sensors; with no previous
// snapshot they are zero.
FeatureVector featurize(const Snapshot& current, const Snapshot* previous,
                        const PlatformSchema& schema);

// Append-only CSV capture, one row per sample, flushed per row.
// Header: t, s_0.., d_0.., a_0.., c_0.., label.
class CsvCaptureWriter {
public:
    CsvCaptureWriter(const std::string& path, const PlatformSchema& schema, int label);
    void append(double t, const FeatureVector& features);
    std::size_t rows() const { return rows_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t dim_;
    int label_;
    std::size_t rows_ = 0;
};

struct CaptureRow {
    double t = 0.0;
    std::vector<double> features;
    int label = 0;
};

struct LoadedCapture {
    std::vector<std::string> columns;
    std::vector<CaptureRow> rows;
};

LoadedCapture load_capture_csv(const std::string& path);

// Per-capture metadata record, one entry of the run manifest.
struct CaptureRecord {
    std::string path;
    std::string platform;
    std::string scenario = "benign"; // scenario name or "benign"
    int label = 0;
    double cycle_s = 0.0;
    double onset_s = 0.0;
    std::string category; // empty for benign
    bool stealthy = false;
    std::uint64_t seed = 0;
    std::size_t rows = 0;
    std::size_t dropped_samples = 0;
    std::vector<double> gap_times; // capture-relative times of dropped samples
    bool valid = true;
};

void save_manifest(const std::vector<CaptureRecord>& records, const std::string& path);
std::vector<CaptureRecord> load_manifest(const std::string& path);

} // namespace icsim::collect

#endif
