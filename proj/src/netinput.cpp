#include "netfuzz/netinput.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace netfuzz {

std::string PortLayout::net_for_bit(int index) const
{
    for (const auto& f : fields) {
        if (index >= f.offset && index < f.offset + f.width) {
            int bit = f.width - 1 - (index - f.offset);  // MSB-first layout
            if (f.width == 1)
                return f.port;
            return f.port + "[" + std::to_string(bit) + "]";
        }
    }
    throw std::out_of_range("frame bit index out of range");
}

PortLayout derive_layout(const Netlist& netlist)
{
    PortLayout layout;
    for (const auto& p : netlist.ports) {
        if (p.direction != PortDir::input || p.role != PortRole::data)
            continue;
        layout.fields.push_back({p.name, layout.frame_width, p.width});
        layout.frame_width += p.width;
    }
    if (layout.frame_width == 0)
        throw std::invalid_argument("netlist has no fuzzable input bits");
    return layout;
}

NetInput random_seed(const PortLayout& layout, int frames, Rng& rng,
                     const std::vector<std::uint8_t>* control_mask)
{
    if (frames < 1)
        throw std::invalid_argument("random_seed: frames must be >= 1");
    NetInput input;
    input.frame_width = layout.frame_width;
    input.control_mask.assign(layout.frame_width, 0);
    if (control_mask) {
        if (static_cast<int>(control_mask->size()) != layout.frame_width)
            throw std::invalid_argument("control mask width mismatch");
        input.control_mask = *control_mask;
    }
    for (int f = 0; f < frames; ++f) {
        std::vector<std::uint8_t> frame(layout.frame_width);
        for (auto& b : frame)
            b = static_cast<std::uint8_t>(rng() & 1);
        input.frames.push_back(std::move(frame));
    }
    return input;
}

std::vector<std::uint8_t> make_control_mask(const PortLayout& layout,
                                            const std::vector<std::string>& control_ports,
                                            const std::vector<int>& control_bits)
{
    std::vector<std::uint8_t> mask(layout.frame_width, 0);
    for (const auto& name : control_ports) {
        bool found = false;
        for (const auto& f : layout.fields) {
            if (f.port == name) {
                for (int i = 0; i < f.width; ++i)
                    mask[f.offset + i] = 1;
                found = true;
            }
        }
        if (!found)
            throw std::invalid_argument("control annotation names unknown port: " + name);
    }
    for (int bit : control_bits) {
        if (bit < 0 || bit >= layout.frame_width)
            throw std::invalid_argument("control annotation bit out of range: " +
                                        std::to_string(bit));
        mask[bit] = 1;
    }
    return mask;
}

std::string frames_to_text(const NetInput& input)
{
    std::string out;
    for (const auto& frame : input.frames) {
        for (auto b : frame)
            out += b ? '1' : '0';
        out += '\n';
    }
    return out;
}

NetInput frames_from_text(const std::string& text, int frame_width)
{
    NetInput input;
    input.frame_width = frame_width;
    input.control_mask.assign(frame_width, 0);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty())
            continue;
        if (static_cast<int>(line.size()) != frame_width)
            throw std::invalid_argument("frame line width " +
                                        std::to_string(line.size()) + " != layout width " +
                                        std::to_string(frame_width));
        std::vector<std::uint8_t> frame(frame_width);
        for (int i = 0; i < frame_width; ++i) {
            if (line[i] != '0' && line[i] != '1')
                throw std::invalid_argument("frame line contains non-bit character");
            frame[i] = line[i] == '1';
        }
        input.frames.push_back(std::move(frame));
    }
    return input;
}

std::vector<std::uint8_t> pack_frames(const NetInput& input)
{
    std::vector<std::uint8_t> bytes;
    for (const auto& frame : input.frames) {
        std::uint8_t acc = 0;
        int nbits = 0;
        for (auto b : frame) {
            acc = static_cast<std::uint8_t>((acc << 1) | (b & 1));
            if (++nbits == 8) {
                bytes.push_back(acc);
                acc = 0;
                nbits = 0;
            }
        }
        if (nbits)
            bytes.push_back(static_cast<std::uint8_t>(acc << (8 - nbits)));
    }
    return bytes;
}

void unpack_frames(NetInput& input, const std::vector<std::uint8_t>& bytes,
                   int frame_width, int frame_count)
{
    const std::size_t stride = (static_cast<std::size_t>(frame_width) + 7) / 8;
    if (bytes.size() != stride * static_cast<std::size_t>(frame_count))
        throw std::invalid_argument("packed frame data has wrong size");
    input.frame_width = frame_width;
    input.frames.clear();
    for (int f = 0; f < frame_count; ++f) {
        std::vector<std::uint8_t> frame(frame_width);
        for (int i = 0; i < frame_width; ++i) {
            std::uint8_t byte = bytes[f * stride + i / 8];
            frame[i] = (byte >> (7 - i % 8)) & 1;
        }
        input.frames.push_back(std::move(frame));
    }
    if (input.control_mask.size() != static_cast<std::size_t>(frame_width))
        input.control_mask.assign(frame_width, 0);
}

} // namespace netfuzz
