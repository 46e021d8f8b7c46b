#include "netfuzz/fuzz.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <thread>

namespace netfuzz {

const char* mutation_op_name(MutationOp op)
{
    switch (op) {
    case MutationOp::control_bit_flip: return "control-bit-flip";
    case MutationOp::control_multi_flip: return "control-multi-flip";
    case MutationOp::control_splice: return "control-splice";
    case MutationOp::data_bit_flip: return "data-bit-flip";
    case MutationOp::data_arith: return "data-arith";
    case MutationOp::data_interesting: return "data-interesting";
    case MutationOp::data_byte_swap: return "data-byte-swap";
    case MutationOp::frame_duplicate: return "frame-duplicate";
    case MutationOp::frame_delete: return "frame-delete";
    }
    return "?";
}

namespace {

std::uint64_t pick(Rng& rng, std::uint64_t n) { return rng() % n; }

double unit_real(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<int> mask_positions(const NetInput& input, bool control)
{
    std::vector<int> out;
    for (int i = 0; i < input.frame_width; ++i)
        if ((input.control_mask[i] != 0) == control)
            out.push_back(i);
    return out;
}

// data bits of one port field, MSB first
std::vector<int> field_data_positions(const NetInput& input, const PortLayout::Field& f)
{
    std::vector<int> out;
    for (int i = f.offset; i < f.offset + f.width; ++i)
        if (!input.control_mask[i])
            out.push_back(i);
    return out;
}

void write_field_value(std::vector<std::uint8_t>& frame, const PortLayout::Field& f,
                       const NetInput& input, std::uint64_t value)
{
    // bit offset+k is weight 2^(width-1-k); only data positions are written
    for (int k = 0; k < f.width; ++k) {
        int idx = f.offset + k;
        if (input.control_mask[idx])
            continue;
        frame[idx] = (value >> (f.width - 1 - k)) & 1;
    }
}

std::uint64_t read_field_value(const std::vector<std::uint8_t>& frame,
                               const PortLayout::Field& f)
{
    std::uint64_t v = 0;
    for (int k = 0; k < f.width; ++k)
        v = (v << 1) | frame[f.offset + k];
    return v;
}

} // namespace

MutationResult mutate(const NetInput& input, const PortLayout& layout,
                      const MutateConfig& config, Rng& rng)
{
    if (input.frames.empty())
        throw std::invalid_argument("mutate: input has no frames");
    if (input.frame_width != layout.frame_width)
        throw std::invalid_argument("mutate: input does not match layout");

    NetInput out = input;
    const std::vector<int> control = mask_positions(input, true);
    const std::vector<int> data = mask_positions(input, false);

    const double density =
        static_cast<double>(control.size()) / static_cast<double>(input.frame_width);
    const bool use_control =
        !control.empty() && (data.empty() || unit_real(rng) < density);

    std::vector<MutationOp> candidates;
    if (use_control) {
        candidates.push_back(MutationOp::control_bit_flip);
        if (control.size() >= 2)
            candidates.push_back(MutationOp::control_multi_flip);
        if (input.frames.size() >= 2)
            candidates.push_back(MutationOp::control_splice);
    } else {
        candidates.push_back(MutationOp::data_bit_flip);
        candidates.push_back(MutationOp::data_arith);
        candidates.push_back(MutationOp::data_interesting);
        if (data.size() >= 16)
            candidates.push_back(MutationOp::data_byte_swap);
        if (static_cast<int>(input.frames.size()) < config.max_frames)
            candidates.push_back(MutationOp::frame_duplicate);
        if (static_cast<int>(input.frames.size()) > config.min_frames)
            candidates.push_back(MutationOp::frame_delete);
    }
    MutationOp op = candidates[pick(rng, candidates.size())];

    auto& frames = out.frames;
    std::size_t fi = pick(rng, frames.size());
    auto& frame = frames[fi];

    // fields that still own at least one data bit
    auto data_fields = [&]() {
        std::vector<const PortLayout::Field*> fields;
        for (const auto& f : layout.fields)
            if (!field_data_positions(input, f).empty())
                fields.push_back(&f);
        return fields;
    };

    switch (op) {
    case MutationOp::control_bit_flip: {
        int idx = control[pick(rng, control.size())];
        frame[idx] ^= 1;
        break;
    }
    case MutationOp::control_multi_flip: {
        std::size_t k = 2 + pick(rng, std::min<std::size_t>(control.size(), 4) - 1);
        for (std::size_t i = 0; i < k; ++i)
            frame[control[pick(rng, control.size())]] ^= 1;
        break;
    }
    case MutationOp::control_splice: {
        std::size_t fj = pick(rng, frames.size() - 1);
        if (fj >= fi)
            ++fj;
        for (int idx : control)
            frame[idx] = frames[fj][idx];
        break;
    }
    case MutationOp::data_bit_flip: {
        int idx = data[pick(rng, data.size())];
        frame[idx] ^= 1;
        break;
    }
    case MutationOp::data_arith: {
        auto fields = data_fields();
        const PortLayout::Field& f = *fields[pick(rng, fields.size())];
        std::uint64_t value = read_field_value(frame, f);
        std::uint64_t k = 1 + pick(rng, 35);
        std::uint64_t mask = f.width >= 64 ? ~std::uint64_t{0}
                                           : (std::uint64_t{1} << f.width) - 1;
        value = (pick(rng, 2) ? value + k : value - k) & mask;
        write_field_value(frame, f, input, value);
        break;
    }
    case MutationOp::data_interesting: {
        auto fields = data_fields();
        const PortLayout::Field& f = *fields[pick(rng, fields.size())];
        std::uint64_t mask = f.width >= 64 ? ~std::uint64_t{0}
                                           : (std::uint64_t{1} << f.width) - 1;
        const std::uint64_t interesting[] = {0, 1, mask,
                                             std::uint64_t{1} << (f.width - 1)};
        write_field_value(frame, f, input, interesting[pick(rng, 4)] & mask);
        break;
    }
    case MutationOp::data_byte_swap: {
        std::size_t chunks = data.size() / 8;
        std::size_t a = pick(rng, chunks);
        std::size_t b = pick(rng, chunks - 1);
        if (b >= a)
            ++b;
        for (int i = 0; i < 8; ++i)
            std::swap(frame[data[a * 8 + i]], frame[data[b * 8 + i]]);
        break;
    }
    case MutationOp::frame_duplicate:
        frames.insert(frames.begin() + fi, frame);
        break;
    case MutationOp::frame_delete:
        frames.erase(frames.begin() + fi);
        break;
    }
    return {std::move(out), op};
}

bool is_interesting(const CoverageMap& accumulated, const CoverageMap& delta)
{
    return delta.novel_vs(accumulated);
}

namespace {

bool novel_toggle_only(const CoverageMap& accumulated, const CoverageMap& delta)
{
    CoverageMap toggles;
    toggles.rise_count = delta.rise_count;
    toggles.fall_count = delta.fall_count;
    return toggles.novel_vs(accumulated);
}

std::string coverage_fingerprint(const CoverageMap& delta)
{
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    };
    for (const auto& [k, v] : delta.rise_count)
        if (v)
            mix("r:" + k);
    for (const auto& [k, v] : delta.fall_count)
        if (v)
            mix("f:" + k);
    for (const auto& [k, v] : delta.pin_values)
        mix("p:" + k.first + "." + k.second + ":" + std::to_string(v));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string bug_key(const BugReport& bug)
{
    std::string key = std::to_string(bug.first_divergence_cycle);
    for (const auto& s : bug.signals)
        key += "|" + s.name;
    return key;
}

struct CampaignState {
    std::mutex mutex;
    Corpus corpus;
    CoverageMap accumulated;
    std::vector<BugReport> bugs;
    std::vector<std::string> bug_keys;
    std::vector<CoverageSnapshot> snapshots;
    std::map<std::string, std::uint64_t> op_counts;
    std::uint64_t executions = 0;
    std::size_t cursor = 0;
    std::string termination;
};

} // namespace

CampaignResult run_campaign(const CampaignConfig& config, ExecutableDesign& dut,
                            ExecutableDesign& reference, const ComparePolicy& policy,
                            const ElaboratedDesign* report_design,
                            const CellLibrary* report_library)
{
    if (config.max_iterations == 0 && config.max_seconds <= 0.0)
        throw std::invalid_argument("campaign needs an iteration or wall-clock budget");
    if (!(dut.layout() == reference.layout()))
        throw std::invalid_argument("dut and reference layouts differ");

    const PortLayout& layout = dut.layout();
    if (!config.control_mask.empty() &&
        static_cast<int>(config.control_mask.size()) != layout.frame_width)
        throw std::invalid_argument("control mask width does not match layout");

    auto novel = [&](const CoverageMap& acc, const CoverageMap& delta) {
        return config.policy == InterestPolicy::new_toggle_only
                   ? novel_toggle_only(acc, delta)
                   : is_interesting(acc, delta);
    };

    MutateConfig mcfg{config.frames_min, config.frames_max};
    CampaignState state;
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    };

    auto snapshot = [&](std::uint64_t iteration) {
        CoverageSnapshot snap;
        snap.iteration = iteration;
        snap.seconds = elapsed();
        if (report_design) {
            CoverageReport rep =
                coverage_report(state.accumulated, *report_design, report_library);
            snap.toggle_pct = rep.toggle_pct;
            snap.pin_pct = rep.pin_pct;
        }
        state.snapshots.push_back(snap);
    };

    // one full execution of an input on both designs, with bookkeeping;
    // caller holds no lock
    auto execute = [&](const NetInput& input, std::uint64_t iteration,
                       ExecutableDesign& d, ExecutableDesign& r,
                       const char* op_name) -> bool {
        Trace dut_trace = d.run(input);
        Trace ref_trace = r.run(input);
        auto div = compare_traces(ref_trace, dut_trace, policy);
        const CoverageMap* delta = d.last_coverage();

        std::lock_guard<std::mutex> lock(state.mutex);
        ++state.executions;
        if (op_name)
            ++state.op_counts[op_name];
        if (div) {
            BugReport bug;
            bug.input = input;
            bug.first_divergence_cycle = div->cycle;
            bug.signals = div->signals;
            bug.dut_id = d.id();
            bug.reference_id = r.id();
            bug.iteration = iteration;
            std::string key = bug_key(bug);
            if (std::find(state.bug_keys.begin(), state.bug_keys.end(), key) ==
                state.bug_keys.end()) {
                state.bug_keys.push_back(key);
                state.bugs.push_back(std::move(bug));
            }
        }
        if (delta) {
            bool keep = novel(state.accumulated, *delta);
            state.accumulated.merge(*delta);
            if (keep) {
                CorpusEntry entry;
                entry.input = input;
                entry.fingerprint = coverage_fingerprint(*delta);
                entry.iteration = iteration;
                state.corpus.entries.push_back(std::move(entry));
                state.cursor = state.corpus.entries.size() - 1;
            }
        }
        if (config.snapshot_every && (iteration + 1) % config.snapshot_every == 0)
            snapshot(iteration + 1);
        return config.max_bugs > 0 && state.bugs.size() >= config.max_bugs;
    };

    // seed phase: deterministic, single-threaded
    Rng seed_rng(config.rng_seed);
    std::uint64_t iteration = 0;
    const std::vector<std::uint8_t>* mask =
        config.control_mask.empty() ? nullptr : &config.control_mask;
    bool stop = false;
    for (int i = 0; i < config.initial_seeds && !stop; ++i) {
        if (config.max_iterations && iteration >= config.max_iterations)
            break;
        NetInput input = random_seed(layout, config.seed_frames, seed_rng, mask);
        stop = execute(input, iteration, dut, reference, nullptr);
        ++iteration;
    }
    if (state.corpus.entries.empty() && !stop) {
        // ensure the loop has something to mutate even without instrumentation
        Rng fallback(config.rng_seed ^ 0x9e3779b97f4a7c15ull);
        CorpusEntry entry;
        entry.input = random_seed(layout, config.seed_frames, fallback, mask);
        entry.fingerprint = "seed";
        entry.iteration = 0;
        state.corpus.entries.push_back(std::move(entry));
    }

    auto worker_body = [&](int worker_index, std::atomic<std::uint64_t>* shared_iter,
                           ExecutableDesign* d, ExecutableDesign* r) {
        Rng rng(config.rng_seed + 0x1000ull * (worker_index + 1));
        while (true) {
            std::uint64_t it = shared_iter->fetch_add(1);
            if (config.max_iterations && it >= config.max_iterations)
                break;
            if (config.max_seconds > 0 && elapsed() > config.max_seconds) {
                std::lock_guard<std::mutex> lock(state.mutex);
                if (state.termination.empty())
                    state.termination = "wall-clock";
                break;
            }
            NetInput base;
            {
                std::lock_guard<std::mutex> lock(state.mutex);
                const auto& entries = state.corpus.entries;
                base = entries[state.cursor % entries.size()].input;
                state.cursor = (state.cursor + 1) % entries.size();
            }
            MutationResult m = mutate(base, layout, mcfg, rng);
            if (execute(m.input, it, *d, *r, mutation_op_name(m.op))) {
                std::lock_guard<std::mutex> lock(state.mutex);
                if (state.termination.empty())
                    state.termination = "bug-cap";
                break;
            }
        }
    };

    std::atomic<std::uint64_t> shared_iter{iteration};
    if (!stop) {
        if (config.workers <= 1) {
            worker_body(0, &shared_iter, &dut, &reference);
        } else {
            // every worker owns a private simulator pair
            std::vector<std::unique_ptr<ExecutableDesign>> duts, refs;
            std::vector<std::thread> threads;
            for (int w = 1; w < config.workers; ++w) {
                duts.push_back(dut.clone());
                refs.push_back(reference.clone());
            }
            for (int w = 1; w < config.workers; ++w)
                threads.emplace_back(worker_body, w, &shared_iter, duts[w - 1].get(),
                                     refs[w - 1].get());
            worker_body(0, &shared_iter, &dut, &reference);
            for (auto& t : threads)
                t.join();
        }
    } else {
        state.termination = "bug-cap";
    }

    if (state.termination.empty())
        state.termination =
            config.max_seconds > 0 && elapsed() > config.max_seconds ? "wall-clock"
                                                                     : "budget";
    snapshot(std::min<std::uint64_t>(shared_iter.load(), config.max_iterations
                                                             ? config.max_iterations
                                                             : shared_iter.load()));

    CampaignResult result;
    result.bugs = std::move(state.bugs);
    result.corpus = std::move(state.corpus);
    result.accumulated = std::move(state.accumulated);
    result.snapshots = std::move(state.snapshots);
    result.executions = state.executions;
    result.op_counts = std::move(state.op_counts);
    result.termination = state.termination;
    return result;
}

} // namespace netfuzz
