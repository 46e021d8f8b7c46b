#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netfuzz/sim.hpp"

namespace netfuzz {

/// Emit a trace as IEEE-1364-style VCD with one timestamp per cycle
/// (t = cycle * period). Only changed signals are dumped after cycle 0.
std::string write_vcd(const Trace& trace, std::uint64_t cycle_period = 10,
                      std::string_view timescale = "1ns",
                      std::string_view scope = "top");

/// Sample a VCD at t = cycle * period with last-value-holds semantics.
/// signal_map pairs are (VCD reference name, trace signal name); the trace
/// signal order follows the map order. Scalar variables only.
Trace parse_vcd(std::string_view text,
                const std::vector<std::pair<std::string, std::string>>& signal_map,
                std::uint64_t cycle_period);

} // namespace netfuzz
