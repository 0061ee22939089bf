#include "locus/dot.hpp"

#include <sstream>

namespace locus {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string emit_dot(const StructuredSpace& x, const std::string& graph_name) {
    const auto& s = x.space();
    const int n = x.size();
    // y strictly generizes p: y in U_p but p not in U_y
    auto below = [&](int p, int y) { return p != y && contains(s.min_open(p), y) && !contains(s.min_open(y), p); };
    std::ostringstream out;
    out << "digraph " << quoted(graph_name) << " {\n  rankdir=BT;\n";
    for (int p = 0; p < n; ++p)
        out << "  n" << p << " [label=" << quoted(s.name(p) + "\n" + x.stalk(p).summary()) << "];\n";
    for (int p = 0; p < n; ++p)
        for (int y = 0; y < n; ++y) {
            if (below(p, y)) {
                bool covering = true;
                for (int m = 0; m < n && covering; ++m)
                    if (below(p, m) && below(m, y)) covering = false;
                if (covering) out << "  n" << y << " -> n" << p << ";\n";
            } else if (p < y && contains(s.min_open(p), y) && contains(s.min_open(y), p)) {
                out << "  n" << y << " -> n" << p << " [dir=none];\n";
            }
        }
    out << "}\n";
    return out.str();
}

}  // namespace locus
