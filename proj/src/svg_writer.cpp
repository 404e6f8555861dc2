#include "fcnlay/io/svg_writer.hpp"

#include <cstdint>
#include <sstream>
#include <string>

namespace fcnlay
{

namespace
{

[[nodiscard]] std::string xml_escape(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    for (const char c : s)
    {
        switch (c)
        {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

[[nodiscard]] const char* phase_fill(const std::optional<std::uint8_t> clock)
{
    if (!clock.has_value())
    {
        return "#e8e8e8";
    }
    switch (*clock % 4)
    {
        case 0: return "#c5e8c5";
        case 1: return "#e3c8ec";
        case 2: return "#c2dcee";
        default: return "#f7f7f7";
    }
}

struct point
{
    int x, y;
};

[[nodiscard]] point side_midpoint(const tile t, const direction d, const int ts)
{
    const int bx = static_cast<int>(t.x) * ts;
    const int by = static_cast<int>(t.y) * ts;
    switch (d)
    {
        case direction::N: return {bx + ts / 2, by};
        case direction::E: return {bx + ts, by + ts / 2};
        case direction::S: return {bx + ts / 2, by + ts};
        case direction::W: return {bx, by + ts / 2};
    }
    return {bx + ts / 2, by + ts / 2};
}

}  // namespace

std::string render_svg(const gate_layout& layout)
{
    constexpr int ts = 60;
    const int w = static_cast<int>(layout.width()) * ts;
    const int h = static_cast<int>(layout.height()) * ts;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 2 << "\" height=\""
        << h + 2 << "\" viewBox=\"-1 -1 " << w + 2 << " " << h + 2 << "\">\n";
    svg << "<g font-family=\"sans-serif\">\n";

    for (std::uint32_t y = 0; y < layout.height(); ++y)
    {
        for (std::uint32_t x = 0; x < layout.width(); ++x)
        {
            const tile t{x, y};
            svg << "<rect x=\"" << x * ts << "\" y=\"" << y * ts << "\" width=\"" << ts
                << "\" height=\"" << ts << "\" fill=\"" << phase_fill(layout.clock_at(t))
                << "\" stroke=\"#808080\" stroke-width=\"1\"/>\n";
            if (const auto clock = layout.clock_at(t); clock.has_value())
            {
                svg << "<text x=\"" << x * ts + ts - 5 << "\" y=\"" << y * ts + ts - 4
                    << "\" font-size=\"10\" text-anchor=\"end\" fill=\"#606060\">"
                    << static_cast<int>(*clock) << "</text>\n";
            }
        }
    }

    // wire paths under the vertex labels, crossing layer dashed
    for (std::uint32_t y = 0; y < layout.height(); ++y)
    {
        for (std::uint32_t x = 0; x < layout.width(); ++x)
        {
            const tile t{x, y};
            for (const auto& seg : layout.wires_at(t))
            {
                const auto a = side_midpoint(t, seg.entry, ts);
                const auto b = side_midpoint(t, seg.exit, ts);
                const point c{static_cast<int>(x) * ts + ts / 2,
                              static_cast<int>(y) * ts + ts / 2};
                svg << "<polyline points=\"" << a.x << "," << a.y << " " << c.x << "," << c.y
                    << " " << b.x << "," << b.y << "\" fill=\"none\" stroke=\""
                    << (seg.layer == wire_layer::CROSSING ? "#c0392b" : "#2c3e50")
                    << "\" stroke-width=\"3\""
                    << (seg.layer == wire_layer::CROSSING ? " stroke-dasharray=\"6,4\"" : "")
                    << "/>\n";
            }
            if (const auto delay = layout.latch_at(t); delay > 0)
            {
                svg << "<rect x=\"" << x * ts + 4 << "\" y=\"" << y * ts + 4
                    << "\" width=\"16\" height=\"12\" fill=\"#f1c40f\" stroke=\"#806000\"/>\n";
                svg << "<text x=\"" << x * ts + 12 << "\" y=\"" << y * ts + 14
                    << "\" font-size=\"9\" text-anchor=\"middle\">L" << static_cast<int>(delay)
                    << "</text>\n";
            }
        }
    }

    const auto& net = layout.network();
    for (std::uint32_t y = 0; y < layout.height(); ++y)
    {
        for (std::uint32_t x = 0; x < layout.width(); ++x)
        {
            const tile t{x, y};
            const auto v = layout.vertex_at(t);
            if (!v.has_value())
            {
                continue;
            }
            const auto& vert = net.vertex(*v);
            const bool pin = layout.pi_tiles().contains(t) || layout.po_tiles().contains(t);
            svg << "<circle cx=\"" << x * ts + ts / 2 << "\" cy=\"" << y * ts + ts / 2
                << "\" r=\"20\" fill=\"" << (pin ? "#fdf2d0" : "#ffffff")
                << "\" stroke=\"#303030\" stroke-width=\"1.5\"/>\n";
            const std::string text = vert.label.empty() ? op_name(vert.op) : vert.label;
            svg << "<text x=\"" << x * ts + ts / 2 << "\" y=\"" << y * ts + ts / 2 + 4
                << "\" font-size=\"12\" text-anchor=\"middle\">" << xml_escape(text)
                << "</text>\n";
        }
    }

    svg << "</g>\n</svg>\n";
    return svg.str();
}

std::string render_svg(const cell_layout& cells)
{
    constexpr int cs = 10;
    const int w = static_cast<int>(cells.width()) * cs;
    const int h = static_cast<int>(cells.height()) * cs;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 2 << "\" height=\""
        << h + 2 << "\" viewBox=\"-1 -1 " << w + 2 << " " << h + 2 << "\">\n";
    svg << "<rect x=\"-1\" y=\"-1\" width=\"" << w + 2 << "\" height=\"" << h + 2
        << "\" fill=\"#fcfcfc\"/>\n";
    svg << "<g font-family=\"sans-serif\">\n";

    for (std::uint8_t layer = 0; layer < 2; ++layer)
    {
        for (const auto& [pos, c] : cells.cells())
        {
            if (pos.layer != layer)
            {
                continue;
            }
            const char* fill = "#ffffff";
            switch (c.kind)
            {
                case cell_kind::INPUT: fill = "#5b9bd5"; break;
                case cell_kind::OUTPUT: fill = "#e8b63c"; break;
                case cell_kind::CONST0:
                case cell_kind::CONST1: fill = "#4d4d4d"; break;
                case cell_kind::NORMAL: fill = phase_fill(c.clock); break;
            }
            svg << "<rect x=\"" << pos.x * cs + 1 << "\" y=\"" << pos.y * cs + 1
                << "\" width=\"" << cs - 2 << "\" height=\"" << cs - 2 << "\" fill=\"" << fill
                << "\" stroke=\"" << (layer > 0 ? "#c0392b" : "#707070") << "\" stroke-width=\""
                << (layer > 0 ? 2 : 1) << "\"/>\n";
            if (c.rotated)
            {
                svg << "<circle cx=\"" << pos.x * cs + cs / 2 << "\" cy=\""
                    << pos.y * cs + cs / 2 << "\" r=\"2\" fill=\"none\" stroke=\"#303030\"/>\n";
            }
            if (!c.label.empty())
            {
                svg << "<text x=\"" << pos.x * cs + cs / 2 << "\" y=\"" << pos.y * cs - 2
                    << "\" font-size=\"8\" text-anchor=\"middle\">" << xml_escape(c.label)
                    << "</text>\n";
            }
        }
    }

    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace fcnlay
