#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "netfuzz/diff.hpp"
#include "netfuzz/netinput.hpp"

namespace netfuzz {

enum class MutationOp : std::uint8_t {
    control_bit_flip,
    control_multi_flip,
    control_splice,
    data_bit_flip,
    data_arith,
    data_interesting,
    data_byte_swap,
    frame_duplicate,
    frame_delete
};

const char* mutation_op_name(MutationOp op);

struct MutateConfig {
    int min_frames = 1;
    int max_frames = 16;
};

struct MutationResult {
    NetInput input;
    MutationOp op;
};

/// Apply exactly one mutation. The engine (control vs data) is chosen by a
/// coin weighted by the control-mask density; control mutations only touch
/// control-mask positions and data mutations only data positions.
MutationResult mutate(const NetInput& input, const PortLayout& layout,
                      const MutateConfig& config, Rng& rng);

/// New toggle direction or new pin-value observation relative to what the
/// campaign has already accumulated.
bool is_interesting(const CoverageMap& accumulated, const CoverageMap& delta);

struct CorpusEntry {
    NetInput input;
    std::string fingerprint;     // hash over the novel coverage items
    std::uint64_t iteration = 0;  // discovery iteration
};

struct Corpus {
    std::vector<CorpusEntry> entries;
};

enum class InterestPolicy : std::uint8_t {
    any_new_coverage,   // new toggle direction or new pin value
    new_toggle_only
};

struct CampaignConfig {
    std::uint64_t max_iterations = 10000;
    double max_seconds = 0.0;  // 0: no wall-clock budget
    int frames_min = 1;
    int frames_max = 8;
    int initial_seeds = 8;
    int seed_frames = 2;
    std::uint64_t rng_seed = 1;
    int workers = 1;
    InterestPolicy policy = InterestPolicy::any_new_coverage;
    std::uint64_t snapshot_every = 1000;  // iterations between coverage snapshots
    std::vector<std::uint8_t> control_mask;  // empty: all data
    std::uint64_t max_bugs = 0;  // stop early after this many bugs (0: no cap)
};

struct CoverageSnapshot {
    std::uint64_t iteration = 0;
    double toggle_pct = 0.0;
    double pin_pct = 0.0;
    double seconds = 0.0;
};

struct CampaignResult {
    std::vector<BugReport> bugs;
    Corpus corpus;
    CoverageMap accumulated;
    std::vector<CoverageSnapshot> snapshots;
    std::uint64_t executions = 0;
    std::map<std::string, std::uint64_t> op_counts;
    std::string termination;  // "budget", "wall-clock" or "bug-cap"
};

/// Coverage-guided differential campaign: mutate corpus entries, execute the
/// DUT and the reference, compare traces, keep inputs that reach new
/// coverage. Fully reproducible from the rng seed at workers == 1.
CampaignResult run_campaign(const CampaignConfig& config, ExecutableDesign& dut,
                            ExecutableDesign& reference, const ComparePolicy& policy,
                            const ElaboratedDesign* report_design = nullptr,
                            const CellLibrary* report_library = nullptr);

} // namespace netfuzz
