#include "netfuzz/json_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace netfuzz {

namespace {

std::string mask_to_string(const std::vector<std::uint8_t>& mask)
{
    std::string s(mask.size(), '0');
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i])
            s[i] = '1';
    return s;
}

std::vector<std::uint8_t> mask_from_string(const std::string& s)
{
    std::vector<std::uint8_t> mask(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        mask[i] = s[i] == '1';
    return mask;
}

} // namespace

json to_json(const Finding& finding)
{
    json j;
    j["kind"] = finding_kind_name(finding.kind);
    j["subject"] = finding.subject;
    j["items"] = finding.items;
    j["message"] = finding.message;
    return j;
}

json to_json(const std::vector<Finding>& findings)
{
    json list = json::array();
    for (const auto& f : findings)
        list.push_back(to_json(f));
    json j;
    j["findings"] = std::move(list);
    return j;
}

json to_json(const CoverageMap& map)
{
    json rise = json::object();
    for (const auto& [k, v] : map.rise_count)
        rise[k] = v;
    json fall = json::object();
    for (const auto& [k, v] : map.fall_count)
        fall[k] = v;
    json pins = json::object();
    for (const auto& [k, v] : map.pin_values) {
        std::string seen;
        if (v & 1)
            seen += '0';
        if (v & 2)
            seen += '1';
        pins[k.first][k.second] = seen;
    }
    json j;
    j["rise"] = std::move(rise);
    j["fall"] = std::move(fall);
    j["pins"] = std::move(pins);
    return j;
}

CoverageMap coverage_from_json(const json& j)
{
    CoverageMap map;
    for (const auto& [k, v] : j.at("rise").items())
        map.rise_count[k] = v.get<std::uint64_t>();
    for (const auto& [k, v] : j.at("fall").items())
        map.fall_count[k] = v.get<std::uint64_t>();
    for (const auto& [inst, pins] : j.at("pins").items())
        for (const auto& [pin, seen] : pins.items()) {
            std::uint8_t mask = 0;
            for (char c : seen.get<std::string>())
                mask |= c == '0' ? 1 : 2;
            map.pin_values[{inst, pin}] = mask;
        }
    return map;
}

json to_json(const CoverageReport& report)
{
    json j;
    j["toggle"] = {{"covered", report.toggled_instances},
                   {"total", report.total_instances},
                   {"pct", report.toggle_pct}};
    j["pins"] = {{"covered", report.covered_pins},
                 {"total", report.total_pins},
                 {"pct", report.pin_pct}};
    j["uncovered_instances"] = report.uncovered_instances;
    json stuck = json::array();
    for (const auto& s : report.stuck_pins) {
        stuck.push_back(
            {{"instance", s.instance}, {"pin", s.pin}, {"observed", s.observed}});
    }
    j["stuck_pins"] = std::move(stuck);
    return j;
}

json to_json(const MappingReport& report)
{
    json cells = json::object();
    for (const auto& [name, use] : report.cells)
        cells[name] = {{"count", use.count}, {"area", use.area}};
    json j;
    j["cells"] = std::move(cells);
    j["total"] = {{"count", report.total_count}, {"area", report.total_area}};
    return j;
}

json to_json(const NetInput& input)
{
    json frames = json::array();
    for (const auto& frame : input.frames) {
        std::string s(frame.size(), '0');
        for (std::size_t i = 0; i < frame.size(); ++i)
            if (frame[i])
                s[i] = '1';
        frames.push_back(s);
    }
    json j;
    j["frame_width"] = input.frame_width;
    j["frames"] = std::move(frames);
    j["control_mask"] = mask_to_string(input.control_mask);
    return j;
}

NetInput netinput_from_json(const json& j)
{
    NetInput input;
    input.frame_width = j.at("frame_width").get<int>();
    input.control_mask = mask_from_string(j.at("control_mask").get<std::string>());
    if (static_cast<int>(input.control_mask.size()) != input.frame_width)
        throw std::invalid_argument("NetInput JSON: mask width mismatch");
    for (const auto& f : j.at("frames")) {
        std::string s = f.get<std::string>();
        if (static_cast<int>(s.size()) != input.frame_width)
            throw std::invalid_argument("NetInput JSON: frame width mismatch");
        std::vector<std::uint8_t> frame(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            frame[i] = s[i] == '1';
        input.frames.push_back(std::move(frame));
    }
    return input;
}

json to_json(const Trace& trace)
{
    json rows = json::array();
    for (const auto& frame : trace.frames) {
        std::string s;
        for (Logic v : frame)
            s += logic_char(v);
        rows.push_back(s);
    }
    json j;
    j["signals"] = trace.signals;
    j["frames"] = std::move(rows);
    return j;
}

json to_json(const DivergingSignal& signal)
{
    return {{"name", signal.name},
            {"reference", std::string(1, logic_char(signal.reference))},
            {"dut", std::string(1, logic_char(signal.dut))}};
}

json to_json(const BugReport& bug)
{
    json signals = json::array();
    for (const auto& s : bug.signals)
        signals.push_back(to_json(s));
    json j;
    j["iteration"] = bug.iteration;
    j["cycle"] = bug.first_divergence_cycle;
    j["dut"] = bug.dut_id;
    j["reference"] = bug.reference_id;
    j["signals"] = std::move(signals);
    j["input"] = to_json(bug.input);
    return j;
}

json to_json(const InjectionRecord& record)
{
    json j;
    j["target"] = record.target_cell;
    j["donor"] = record.donor;
    j["old_function"] = record.old_function;
    j["new_function"] = record.new_function;
    j["old_area"] = record.old_area;
    j["new_area"] = record.new_area;
    j["area_policy"] = record.area_policy;
    j["epsilon"] = record.epsilon;
    j["mode"] = record.mode;
    return j;
}

json to_json(const ScanFinding& finding)
{
    json j;
    j["cell"] = finding.cell;
    j["kind"] = scan_finding_kind_name(finding.kind);
    j["detail"] = finding.detail;
    j["suspect"] = finding.suspect_value;
    j["reference"] = finding.reference_value;
    return j;
}

json to_json(const std::vector<ScanFinding>& findings)
{
    json list = json::array();
    for (const auto& f : findings)
        list.push_back(to_json(f));
    json j;
    j["findings"] = std::move(list);
    return j;
}

json to_json(const CoverageSnapshot& snap)
{
    json j;
    j["iteration"] = snap.iteration;
    j["toggle_pct"] = snap.toggle_pct;
    j["pin_pct"] = snap.pin_pct;
    j["seconds"] = snap.seconds;
    return j;
}

json to_json(const DiffMatrix& matrix, const DiffConfig& config)
{
    json cells = json::array();
    for (const auto& cell : matrix.cells) {
        json c;
        c["a"] = {{"tool", config.sources[cell.a].tool},
                  {"lib", config.sources[cell.a].lib_tag},
                  {"id", config.sources[cell.a].executable->id()}};
        c["b"] = {{"tool", config.sources[cell.b].tool},
                  {"lib", config.sources[cell.b].lib_tag},
                  {"id", config.sources[cell.b].executable->id()}};
        c["inputs"] = cell.inputs_run;
        c["divergences"] = cell.divergences;
        c["first_bug"] = cell.first_bug ? to_json(*cell.first_bug) : json(nullptr);
        cells.push_back(std::move(c));
    }
    json j;
    j["cells"] = std::move(cells);
    return j;
}

void save_corpus(const Corpus& corpus, const std::string& directory)
{
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    char name[64];
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        const CorpusEntry& entry = corpus.entries[i];
        std::snprintf(name, sizeof(name), "entry_%06zu", i);
        auto bytes = pack_frames(entry.input);
        std::ofstream bin(fs::path(directory) / (std::string(name) + ".bin"),
                          std::ios::binary);
        bin.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));

        json side;
        side["frame_width"] = entry.input.frame_width;
        side["frames"] = entry.input.frames.size();
        side["control_mask"] = mask_to_string(entry.input.control_mask);
        side["fingerprint"] = entry.fingerprint;
        side["iteration"] = entry.iteration;
        std::ofstream meta(fs::path(directory) / (std::string(name) + ".json"));
        meta << side.dump(2) << "\n";
    }
}

Corpus load_corpus(const std::string& directory)
{
    namespace fs = std::filesystem;
    Corpus corpus;
    std::vector<fs::path> sidecars;
    for (const auto& entry : fs::directory_iterator(directory))
        if (entry.path().extension() == ".json")
            sidecars.push_back(entry.path());
    std::sort(sidecars.begin(), sidecars.end());
    for (const auto& side_path : sidecars) {
        std::ifstream meta(side_path);
        json side = json::parse(meta);
        CorpusEntry entry;
        entry.fingerprint = side.at("fingerprint").get<std::string>();
        entry.iteration = side.at("iteration").get<std::uint64_t>();
        entry.input.control_mask =
            mask_from_string(side.at("control_mask").get<std::string>());

        fs::path bin_path = side_path;
        bin_path.replace_extension(".bin");
        std::ifstream bin(bin_path, std::ios::binary);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(bin)),
                                        std::istreambuf_iterator<char>());
        unpack_frames(entry.input, bytes, side.at("frame_width").get<int>(),
                      side.at("frames").get<int>());
        corpus.entries.push_back(std::move(entry));
    }
    return corpus;
}

} // namespace netfuzz
