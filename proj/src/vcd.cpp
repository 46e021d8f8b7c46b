#include "netfuzz/vcd.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "netfuzz/errors.hpp"

namespace netfuzz {

namespace {

// printable identifier codes, base 94 starting at '!'
std::string id_code(std::size_t n)
{
    std::string code;
    do {
        code += static_cast<char>('!' + n % 94);
        n /= 94;
    } while (n);
    return code;
}

struct VcdTokenizer {
    std::string_view text;
    std::size_t pos = 0;

    std::string next()
    {
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        std::size_t start = pos;
        while (pos < text.size() &&
               !std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        return std::string(text.substr(start, pos - start));
    }
};

} // namespace

std::string write_vcd(const Trace& trace, std::uint64_t cycle_period,
                      std::string_view timescale, std::string_view scope)
{
    if (trace.signals.empty())
        throw std::invalid_argument("write_vcd: trace has no signals");

    std::ostringstream out;
    out << "$timescale " << timescale << " $end\n";
    out << "$scope module " << scope << " $end\n";
    std::vector<std::string> codes;
    for (std::size_t i = 0; i < trace.signals.size(); ++i) {
        codes.push_back(id_code(i));
        out << "$var wire 1 " << codes[i] << " " << trace.signals[i] << " $end\n";
    }
    out << "$upscope $end\n";
    out << "$enddefinitions $end\n";

    std::vector<Logic> last(trace.signals.size(), Logic::x);
    for (std::size_t cycle = 0; cycle < trace.frames.size(); ++cycle) {
        const auto& row = trace.frames[cycle];
        bool opened = false;
        auto open = [&]() {
            if (opened)
                return;
            out << "#" << cycle * cycle_period << "\n";
            if (cycle == 0)
                out << "$dumpvars\n";
            opened = true;
        };
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (cycle == 0 || row[i] != last[i]) {
                open();
                out << logic_char(row[i]) << codes[i] << "\n";
                last[i] = row[i];
            }
        }
        if (cycle == 0) {
            open();  // degenerate: no signals would still open the dump section
            out << "$end\n";
        }
    }
    return out.str();
}

Trace parse_vcd(std::string_view text,
                const std::vector<std::pair<std::string, std::string>>& signal_map,
                std::uint64_t cycle_period)
{
    if (cycle_period == 0)
        throw std::invalid_argument("parse_vcd: cycle period must be positive");

    VcdTokenizer tok{text};
    std::map<std::string, std::string> code_of_ref;  // reference name -> id code
    std::map<std::string, int> code_width;

    // header
    while (true) {
        std::string t = tok.next();
        if (t.empty())
            throw ParseError("VCD: missing $enddefinitions");
        if (t == "$enddefinitions") {
            while (true) {
                std::string e = tok.next();
                if (e == "$end" || e.empty())
                    break;
            }
            break;
        }
        if (t == "$var") {
            std::string type = tok.next();
            std::string width = tok.next();
            std::string code = tok.next();
            std::string name = tok.next();
            // reference may be "name [3]" split across tokens
            std::string part = tok.next();
            while (part != "$end") {
                if (part.empty())
                    throw ParseError("VCD: unterminated $var");
                name += part;
                part = tok.next();
            }
            int w = 0;
            try {
                w = std::stoi(width);
            } catch (const std::exception&) {
                throw ParseError("VCD: bad width in $var");
            }
            code_of_ref[name] = code;
            code_width[code] = w;
        } else if (!t.empty() && t[0] == '$') {
            // other header command: skip to $end (some, like $comment, nest text)
            if (t == "$timescale" || t == "$date" || t == "$version" ||
                t == "$comment" || t == "$scope" || t == "$upscope") {
                while (true) {
                    std::string e = tok.next();
                    if (e == "$end" || e.empty())
                        break;
                }
            }
        }
    }

    // resolve mapping
    std::map<std::string, std::vector<std::size_t>> watch;  // id code -> trace columns
    Trace trace;
    for (std::size_t col = 0; col < signal_map.size(); ++col) {
        const auto& [ref, signal] = signal_map[col];
        auto it = code_of_ref.find(ref);
        if (it == code_of_ref.end())
            throw ParseError("VCD: mapped signal not declared: " + ref);
        if (code_width[it->second] != 1)
            throw ParseError("VCD: mapped signal " + ref + " is not scalar");
        watch[it->second].push_back(col);
        trace.signals.push_back(signal);
    }

    // value changes
    std::vector<Logic> current(signal_map.size(), Logic::x);
    std::vector<std::vector<Logic>> samples;  // per change-time snapshot
    std::vector<std::uint64_t> times;
    std::uint64_t now = 0;
    bool have_time = false;
    std::uint64_t last_time = 0;

    auto flush = [&]() {
        if (!have_time)
            return;
        if (!times.empty() && now < times.back())
            throw ParseError("VCD: timestamps must be non-decreasing");
        if (!times.empty() && now == times.back()) {
            samples.back() = current;
            return;
        }
        times.push_back(now);
        samples.push_back(current);
    };

    while (true) {
        std::string t = tok.next();
        if (t.empty())
            break;
        if (t[0] == '#') {
            flush();
            try {
                now = std::stoull(t.substr(1));
            } catch (const std::exception&) {
                throw ParseError("VCD: bad timestamp " + t);
            }
            have_time = true;
            last_time = now;
            continue;
        }
        if (t == "$dumpvars" || t == "$dumpall" || t == "$dumpon" || t == "$dumpoff" ||
            t == "$end")
            continue;
        if (t[0] == 'b' || t[0] == 'B') {
            std::string code = tok.next();  // vector value, code follows
            if (watch.count(code))
                throw ParseError("VCD: vector change on mapped scalar signal");
            continue;
        }
        if (t[0] == 'r' || t[0] == 'R') {
            tok.next();
            continue;  // real value, never mapped
        }
        char v = t[0];
        if (v != '0' && v != '1' && v != 'x' && v != 'X' && v != 'z' && v != 'Z')
            throw ParseError("VCD: malformed value change: " + t);
        std::string code = t.substr(1);
        if (code.empty())
            throw ParseError("VCD: value change without identifier: " + t);
        auto it = watch.find(code);
        if (it == watch.end())
            continue;
        Logic value = (v == '0')   ? Logic::zero
                      : (v == '1') ? Logic::one
                                   : Logic::x;  // z treated as unknown
        for (std::size_t col : it->second)
            current[col] = value;
    }
    flush();

    if (!have_time)
        return trace;  // no dump section: zero cycles

    // sample at cycle boundaries, last value holds
    std::uint64_t t_max = last_time;
    std::size_t cycles = static_cast<std::size_t>(t_max / cycle_period) + 1;
    std::vector<Logic> hold(signal_map.size(), Logic::x);
    std::size_t next_change = 0;
    for (std::size_t c = 0; c < cycles; ++c) {
        std::uint64_t t = c * cycle_period;
        while (next_change < times.size() && times[next_change] <= t)
            hold = samples[next_change++];
        trace.frames.push_back(hold);
    }
    return trace;
}

} // namespace netfuzz
