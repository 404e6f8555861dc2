#include "fcnlay/io/qca_io.hpp"

#include "fcnlay/network/logic_network.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fcnlay
{

namespace
{

constexpr double cell_pitch = 20.0;
constexpr double cell_size = 18.0;
constexpr double dot_diameter = 5.0;
constexpr double dot_offset = 4.5;
/// one quarter of the elementary charge, the neutral per-dot value
constexpr double quarter_charge = 4.005441e-20;

[[nodiscard]] std::string fixed6(const double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

[[nodiscard]] std::string sci6(const double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

/// Dot centers in NE, SE, SW, NW order; polarization +1 charges NE and SW.
[[nodiscard]] std::array<std::pair<double, double>, 4> dot_centers(const double cx,
                                                                   const double cy,
                                                                   const bool rotated)
{
    if (rotated)
    {
        return {{{cx, cy - dot_offset},
                 {cx + dot_offset, cy},
                 {cx, cy + dot_offset},
                 {cx - dot_offset, cy}}};
    }
    return {{{cx + dot_offset, cy - dot_offset},
             {cx + dot_offset, cy + dot_offset},
             {cx - dot_offset, cy + dot_offset},
             {cx - dot_offset, cy - dot_offset}}};
}

struct clock_color
{
    int r, g, b;
};

[[nodiscard]] clock_color color_of(const std::uint8_t clock)
{
    switch (clock % 4)
    {
        case 0: return {0, 65535, 0};
        case 1: return {65535, 0, 65535};
        case 2: return {0, 65535, 65535};
        default: return {65535, 65535, 65535};
    }
}

void write_cell(std::ostream& out, const cell_position pos, const cell& c)
{
    const double cx = cell_pitch * pos.x + cell_pitch / 2;
    const double cy = cell_pitch * pos.y + cell_pitch / 2;
    const auto col = color_of(c.clock);

    out << "[TYPE:QCADCell]\n";
    out << "[TYPE:QCADDesignObject]\n";
    out << "x=" << fixed6(cx) << "\n";
    out << "y=" << fixed6(cy) << "\n";
    out << "bSelected=FALSE\n";
    out << "clr.red=" << col.r << "\nclr.green=" << col.g << "\nclr.blue=" << col.b << "\n";
    out << "bounding_box.xWorld=" << fixed6(cx - cell_size / 2) << "\n";
    out << "bounding_box.yWorld=" << fixed6(cy - cell_size / 2) << "\n";
    out << "bounding_box.cxWorld=" << fixed6(cell_size) << "\n";
    out << "bounding_box.cyWorld=" << fixed6(cell_size) << "\n";
    out << "[#TYPE:QCADDesignObject]\n";
    out << "cell_options.cxCell=" << fixed6(cell_size) << "\n";
    out << "cell_options.cyCell=" << fixed6(cell_size) << "\n";
    out << "cell_options.dot_diameter=" << fixed6(dot_diameter) << "\n";
    out << "cell_options.clock=" << static_cast<int>(c.clock) << "\n";
    const char* mode = pos.layer > 0          ? "QCAD_CELL_MODE_VERTICAL"
                       : c.rotated            ? "QCAD_CELL_MODE_ROTATED"
                                              : "QCAD_CELL_MODE_NORMAL";
    out << "cell_options.mode=" << mode << "\n";
    const char* function = c.kind == cell_kind::INPUT    ? "QCAD_CELL_INPUT"
                           : c.kind == cell_kind::OUTPUT ? "QCAD_CELL_OUTPUT"
                           : c.kind == cell_kind::NORMAL ? "QCAD_CELL_NORMAL"
                                                         : "QCAD_CELL_FIXED";
    out << "cell_function=" << function << "\n";
    out << "number_of_dots=4\n";

    const auto dots = dot_centers(cx, cy, c.rotated);
    for (std::size_t i = 0; i < 4; ++i)
    {
        double charge = quarter_charge;
        if (c.kind == cell_kind::CONST1)
        {
            charge = (i == 0 || i == 2) ? 2 * quarter_charge : 0.0;
        }
        else if (c.kind == cell_kind::CONST0)
        {
            charge = (i == 1 || i == 3) ? 2 * quarter_charge : 0.0;
        }
        out << "[TYPE:CELL_DOT]\n";
        out << "x=" << fixed6(dots[i].first) << "\n";
        out << "y=" << fixed6(dots[i].second) << "\n";
        out << "diameter=" << fixed6(dot_diameter) << "\n";
        out << "charge=" << sci6(charge) << "\n";
        out << "spin=" << sci6(0.0) << "\n";
        out << "potential=" << sci6(0.0) << "\n";
        out << "[#TYPE:CELL_DOT]\n";
    }
    if (c.kind == cell_kind::INPUT || c.kind == cell_kind::OUTPUT)
    {
        out << "[TYPE:QCADLabel]\n";
        out << "[TYPE:QCADStretchyObject]\n";
        out << "[TYPE:QCADDesignObject]\n";
        out << "x=" << fixed6(cx) << "\n";
        out << "y=" << fixed6(cy - cell_size) << "\n";
        out << "bSelected=FALSE\n";
        out << "[#TYPE:QCADDesignObject]\n";
        out << "[#TYPE:QCADStretchyObject]\n";
        out << "psz=" << c.label << "\n";
        out << "[#TYPE:QCADLabel]\n";
    }
    out << "[#TYPE:QCADCell]\n";
}

}  // namespace

void write_qca(const cell_layout& cells, const std::string& path)
{
    if (cells.num_cells() == 0)
    {
        throw fcn_error{"qca export: cell layout is empty"};
    }
    std::ostringstream out;
    out << "[VERSION]\n";
    out << "qcadesigner_version=2.000000\n";
    out << "[#VERSION]\n";
    out << "[TYPE:DESIGN]\n";
    out << "[TYPE:QCADLayer]\n";
    out << "type=0\nstatus=1\npszDescription=Substrate\n";
    out << "[#TYPE:QCADLayer]\n";

    bool has_upper = false;
    for (const auto& [pos, c] : cells.cells())
    {
        has_upper = has_upper || pos.layer > 0;
    }
    const int layer_count = has_upper ? 2 : 1;
    for (int layer = 0; layer < layer_count; ++layer)
    {
        out << "[TYPE:QCADLayer]\n";
        out << "type=1\nstatus=0\n";
        out << "pszDescription=" << (layer == 0 ? "Main Cell Layer" : "Crossover Cell Layer")
            << "\n";
        for (const auto& [pos, c] : cells.cells())
        {
            if (pos.layer == layer)
            {
                write_cell(out, pos, c);
            }
        }
        out << "[#TYPE:QCADLayer]\n";
    }
    out << "[#TYPE:DESIGN]\n";

    std::ofstream file{path};
    if (!file || !(file << out.str()))
    {
        throw fcn_error{"qca export: cannot write " + path};
    }
}

cell_layout read_qca(const std::string& path)
{
    std::ifstream file{path};
    if (!file)
    {
        throw fcn_error{"qca import: cannot read " + path};
    }
    const auto fail = [&path](const std::string& msg) -> void
    { throw fcn_error{"qca import " + path + ": " + msg}; };

    std::vector<std::string> stack;
    int cell_layer = -1;  // index among cell layers, -1 outside any

    struct pending_cell
    {
        double x{}, y{};
        int clock{};
        bool rotated{false};
        bool vertical{false};
        std::string function{};
        std::string label{};
        std::vector<double> charges{};
    } cur;
    bool in_cell = false;

    struct parsed
    {
        cell_position pos;
        cell content;
    };
    std::vector<parsed> result;

    std::string line;
    while (std::getline(file, line))
    {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        {
            line.pop_back();
        }
        if (line.empty())
        {
            continue;
        }
        if (line.rfind("[#TYPE:", 0) == 0 || line == "[#VERSION]")
        {
            const auto name = line == "[#VERSION]" ? std::string{"VERSION"}
                                                   : line.substr(7, line.size() - 8);
            if (stack.empty() || stack.back() != name)
            {
                fail("unbalanced section close '" + line + "'");
            }
            stack.pop_back();
            if (name == "QCADCell")
            {
                if (cur.charges.size() != 4)
                {
                    fail("cell with " + std::to_string(cur.charges.size()) + " dots");
                }
                parsed p;
                p.pos.x = static_cast<std::uint32_t>(
                    std::llround((cur.x - cell_pitch / 2) / cell_pitch));
                p.pos.y = static_cast<std::uint32_t>(
                    std::llround((cur.y - cell_pitch / 2) / cell_pitch));
                p.pos.layer = cur.vertical ? 1 : static_cast<std::uint8_t>(cell_layer);
                p.content.clock = static_cast<std::uint8_t>(cur.clock);
                p.content.rotated = cur.rotated;
                p.content.label = cur.label;
                if (cur.function == "QCAD_CELL_NORMAL")
                {
                    p.content.kind = cell_kind::NORMAL;
                }
                else if (cur.function == "QCAD_CELL_INPUT")
                {
                    p.content.kind = cell_kind::INPUT;
                }
                else if (cur.function == "QCAD_CELL_OUTPUT")
                {
                    p.content.kind = cell_kind::OUTPUT;
                }
                else if (cur.function == "QCAD_CELL_FIXED")
                {
                    const auto diag0 = cur.charges[0] + cur.charges[2];
                    const auto diag1 = cur.charges[1] + cur.charges[3];
                    p.content.kind = diag0 > diag1 ? cell_kind::CONST1 : cell_kind::CONST0;
                }
                else
                {
                    fail("unknown cell function '" + cur.function + "'");
                }
                result.push_back(std::move(p));
                in_cell = false;
            }
            continue;
        }
        if (line.rfind("[TYPE:", 0) == 0 || line == "[VERSION]")
        {
            const auto name =
                line == "[VERSION]" ? std::string{"VERSION"} : line.substr(6, line.size() - 7);
            stack.push_back(name);
            if (name == "QCADCell")
            {
                cur = {};
                in_cell = true;
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            fail("expected key=value, got '" + line + "'");
        }
        const auto key = line.substr(0, eq);
        const auto val = line.substr(eq + 1);
        if (!in_cell)
        {
            if (key == "pszDescription" && !stack.empty() && stack.back() == "QCADLayer")
            {
                if (val.find("Cell Layer") != std::string::npos)
                {
                    ++cell_layer;
                }
            }
            continue;
        }
        if (stack.back() == "QCADDesignObject" && stack[stack.size() - 2] == "QCADCell")
        {
            if (key == "x")
            {
                cur.x = std::stod(val);
            }
            else if (key == "y")
            {
                cur.y = std::stod(val);
            }
        }
        else if (stack.back() == "QCADCell")
        {
            if (key == "cell_options.clock")
            {
                cur.clock = std::stoi(val);
            }
            else if (key == "cell_options.mode")
            {
                cur.rotated = val == "QCAD_CELL_MODE_ROTATED";
                cur.vertical = val == "QCAD_CELL_MODE_VERTICAL";
            }
            else if (key == "cell_function")
            {
                cur.function = val;
            }
        }
        else if (stack.back() == "CELL_DOT")
        {
            if (key == "charge")
            {
                cur.charges.push_back(std::stod(val));
            }
        }
        else if (stack.back() == "QCADLabel" && key == "psz")
        {
            cur.label = val;
        }
    }
    if (!stack.empty())
    {
        fail("unterminated section '" + stack.back() + "'");
    }

    std::uint32_t width = 1;
    std::uint32_t height = 1;
    for (const auto& p : result)
    {
        width = std::max(width, p.pos.x + 1);
        height = std::max(height, p.pos.y + 1);
    }
    cell_layout cells{width, height, std::filesystem::path{path}.stem().string(), 4};
    for (auto& p : result)
    {
        cells.assign_cell(p.pos, std::move(p.content));
    }
    return cells;
}

}  // namespace fcnlay
