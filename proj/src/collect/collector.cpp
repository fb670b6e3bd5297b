#include "icsim/collect/collector.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "icsim/plant/line.hpp"
#include "icsim/plc/plc.hpp"

namespace icsim::collect {

using modbus::Table;
using nlohmann::json;

PlatformSchema PlatformSchema::chem()
{
    PlatformSchema s;
    s.platform = "chem";
    s.n_sensors = 9;
    s.n_actuators = 4;
    s.sensor_ranges = {{Table::input_register, plc::PlcMap::sensor_base, 9}};
    s.readback_ranges = {{Table::holding_register, plc::PlcMap::readback_base, 4}};
    s.commanded_ranges = {{Table::holding_register, plc::PlcMap::commanded_base, 4}};
    return s;
}

PlatformSchema PlatformSchema::line()
{
    PlatformSchema s;
    s.platform = "line";
    s.n_sensors = plant::line_sensor_bits + plant::line_sensor_regs;
    s.n_actuators = plant::line_actuator_count;
    s.sensor_ranges = {{Table::discrete_input, plc::PlcMap::sensor_base, plant::line_sensor_bits},
                       {Table::input_register, plc::PlcMap::sensor_base, plant::line_sensor_regs}};
    s.readback_ranges = {
        {Table::coil, plc::PlcMap::readback_base, plant::line_actuator_count}};
    s.commanded_ranges = {
        {Table::coil, plc::PlcMap::commanded_base, plant::line_actuator_count}};
    return s;
}

PlatformSchema PlatformSchema::for_platform(const std::string& name)
{
    if (name == "chem")
        return chem();
    if (name == "line")
        return line();
    throw std::invalid_argument("unknown platform: " + name);
}

std::vector<std::string> PlatformSchema::column_names() const
{
    std::vector<std::string> cols;
    for (std::size_t i = 0; i < n_sensors; ++i)
        cols.push_back("s_" + std::to_string(i));
    for (std::size_t i = 0; i < n_sensors; ++i)
        cols.push_back("d_" + std::to_string(i));
    for (std::size_t i = 0; i < n_actuators; ++i)
        cols.push_back("a_" + std::to_string(i));
    for (std::size_t i = 0; i < n_actuators; ++i)
        cols.push_back("c_" + std::to_string(i));
    return cols;
}

namespace {

void read_ranges(modbus::ModbusTcpClient& plc, const std::vector<PlatformSchema::Range>& ranges,
                 std::vector<double>& out)
{
    for (const auto& r : ranges) {
        if (r.table == Table::input_register || r.table == Table::holding_register) {
            for (auto v : plc.read_registers(r.table, r.first, r.count))
                out.push_back(static_cast<double>(v) / 65535.0);
        } else {
            for (bool b : plc.read_bits(r.table, r.first, r.count))
                out.push_back(b ? 1.0 : 0.0);
        }
    }
}

} // namespace

Snapshot poll_sample(modbus::ModbusTcpClient& plc, const PlatformSchema& schema, double t)
{
    Snapshot snap;
    snap.t = t;
    read_ranges(plc, schema.sensor_ranges, snap.sensors);
    read_ranges(plc, schema.readback_ranges, snap.readbacks);
    read_ranges(plc, schema.commanded_ranges, snap.commanded);
    return snap;
}

FeatureVector featurize(const Snapshot& current, const Snapshot* previous,
                        const PlatformSchema& schema)
{
    if (current.sensors.size() != schema.n_sensors ||
        current.readbacks.size() != schema.n_actuators ||
        current.commanded.size() != schema.n_actuators)
        throw std::invalid_argument("featurize: snapshot does not match schema");
    if (previous && previous->sensors.size() != current.sensors.size())
        throw std::invalid_argument("featurize: snapshots disagree on the address map");

    FeatureVector fv;
    fv.values.reserve(schema.feature_dim());
    fv.values.insert(fv.values.end(), current.sensors.begin(), current.sensors.end());
    for (std::size_t i = 0; i < schema.n_sensors; ++i)
        fv.values.push_back(previous ? current.sensors[i] - previous->sensors[i] : 0.0);
    fv.values.insert(fv.values.end(), current.readbacks.begin(), current.readbacks.end());
    fv.values.insert(fv.values.end(), current.commanded.begin(), current.commanded.end());
    return fv;
}

namespace {

// Shortest round-trip decimal so identical doubles always print identically.
std::string format_value(double v)
{
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

} // namespace

CsvCaptureWriter::CsvCaptureWriter(const std::string& path, const PlatformSchema& schema,
                                   int label)
    : path_(path), out_(path), dim_(schema.feature_dim()), label_(label)
{
    if (!out_)
        throw std::runtime_error("cannot open capture file: " + path);
    out_ << "t";
    for (const auto& c : schema.column_names())
        out_ << "," << c;
    out_ << ",label\n";
    out_.flush();
}

void CsvCaptureWriter::append(double t, const FeatureVector& features)
{
    if (features.values.size() != dim_)
        throw std::invalid_argument("capture row has wrong dimension");
    out_ << format_value(t);
    for (double v : features.values)
        out_ << "," << format_value(v);
    out_ << "," << label_ << "\n";
    out_.flush();
    ++rows_;
}

LoadedCapture load_capture_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open capture file: " + path);

    LoadedCapture cap;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty capture file: " + path);

    std::stringstream header(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(header, col, ','))
        cols.push_back(col);
    if (cols.size() < 3 || cols.front() != "t" || cols.back() != "label")
        throw std::runtime_error("malformed capture header: " + path);
    cap.columns.assign(cols.begin() + 1, cols.end() - 1);

    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        CaptureRow row;
        std::stringstream ss(line);
        std::string cell;
        std::size_t i = 0;
        while (std::getline(ss, cell, ',')) {
            const double v = std::stod(cell);
            if (i == 0)
                row.t = v;
            else if (i <= cap.columns.size())
                row.features.push_back(v);
            else
                row.label = static_cast<int>(v);
            ++i;
        }
        if (row.features.size() != cap.columns.size())
            throw std::runtime_error("short row in capture: " + path);
        cap.rows.push_back(std::move(row));
    }
    return cap;
}

void save_manifest(const std::vector<CaptureRecord>& records, const std::string& path)
{
    json j = json::array();
    for (const auto& r : records) {
        json e;
        e["path"] = r.path;
        e["platform"] = r.platform;
        e["scenario"] = r.scenario;
        e["label"] = r.label;
        e["cycle_s"] = r.cycle_s;
        e["onset_s"] = r.onset_s;
        e["category"] = r.category;
        e["stealthy"] = r.stealthy;
        e["seed"] = r.seed;
        e["rows"] = r.rows;
        e["dropped_samples"] = r.dropped_samples;
        if (!r.gap_times.empty())
            e["gap_times"] = r.gap_times;
        e["valid"] = r.valid;
        j.push_back(std::move(e));
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

std::vector<CaptureRecord> load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open manifest: " + path);
    json j;
    in >> j;

    std::vector<CaptureRecord> records;
    for (const auto& e : j) {
        CaptureRecord r;
        r.path = e.at("path").get<std::string>();
        r.platform = e.at("platform").get<std::string>();
        r.scenario = e.value("scenario", std::string("benign"));
        r.label = e.at("label").get<int>();
        r.cycle_s = e.value("cycle_s", 0.0);
        r.onset_s = e.value("onset_s", 0.0);
        r.category = e.value("category", std::string());
        r.stealthy = e.value("stealthy", false);
        r.seed = e.value("seed", std::uint64_t{0});
        r.rows = e.value("rows", std::size_t{0});
        r.dropped_samples = e.value("dropped_samples", std::size_t{0});
        r.gap_times = e.value("gap_times", std::vector<double>{});
        r.valid = e.value("valid", true);
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace icsim::collect
