#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "netfuzz/netlist.hpp"

namespace netfuzz {

/// Frame bit layout over the fuzzable input ports (everything except ports
/// with clock or reset role). Offsets are contiguous in port declaration
/// order; within a port, bit `offset` is the MSB and `offset+width-1` the LSB.
struct PortLayout {
    struct Field {
        std::string port;
        int offset = 0;
        int width = 1;

        bool operator==(const Field&) const = default;
    };

    std::vector<Field> fields;
    int frame_width = 0;

    /// Net name carrying frame bit `index`.
    std::string net_for_bit(int index) const;

    bool operator==(const PortLayout&) const = default;
};

/// Throws std::invalid_argument when the netlist has no fuzzable input bits.
PortLayout derive_layout(const Netlist& netlist);

/// Fuzzer seed: a sequence of input frames plus a control/data annotation
/// mask (1 = control bit). Frames hold one 0/1 byte per bit.
struct NetInput {
    int frame_width = 0;
    std::vector<std::vector<std::uint8_t>> frames;
    std::vector<std::uint8_t> control_mask;  // frame_width entries

    bool operator==(const NetInput&) const = default;
};

using Rng = std::mt19937_64;

/// Uniformly random frames; mask defaults to all-data unless provided.
NetInput random_seed(const PortLayout& layout, int frames, Rng& rng,
                     const std::vector<std::uint8_t>* control_mask = nullptr);

/// Build a control mask from whole-port names and/or explicit bit indices.
std::vector<std::uint8_t> make_control_mask(const PortLayout& layout,
                                            const std::vector<std::string>& control_ports,
                                            const std::vector<int>& control_bits);

/// Frame text: one line per frame, characters 0/1, MSB of the first port
/// first. This is also the stimulus-file format of the external-process
/// adapter.
std::string frames_to_text(const NetInput& input);
NetInput frames_from_text(const std::string& text, int frame_width);

/// Packed binary corpus encoding (frames only; the mask travels in the JSON
/// sidecar). Bits are packed MSB-of-frame-first, eight per byte.
std::vector<std::uint8_t> pack_frames(const NetInput& input);
void unpack_frames(NetInput& input, const std::vector<std::uint8_t>& bytes,
                   int frame_width, int frame_count);

} // namespace netfuzz
