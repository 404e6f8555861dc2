#include "fcnlay/techmap/gate_library.hpp"

#include "fcnlay/embedded_data.hpp"
#include "fcnlay/network/logic_network.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace fcnlay
{

namespace
{

[[nodiscard]] direction parse_direction(const std::string& token, const std::string& where)
{
    if (token.size() == 1)
    {
        switch (token[0])
        {
            case 'N': return direction::N;
            case 'E': return direction::E;
            case 'S': return direction::S;
            case 'W': return direction::W;
            default: break;
        }
    }
    throw fcn_error{where + ": bad direction '" + token + "'"};
}

[[nodiscard]] std::vector<direction> parse_direction_list(const std::string& csv,
                                                          const std::string& where)
{
    std::vector<direction> dirs;
    std::string item;
    std::istringstream in{csv};
    while (std::getline(in, item, ','))
    {
        dirs.push_back(parse_direction(item, where));
    }
    return dirs;
}

[[nodiscard]] direction rotate_cw(const direction d) noexcept
{
    switch (d)
    {
        case direction::N: return direction::E;
        case direction::E: return direction::S;
        case direction::S: return direction::W;
        default: return direction::N;
    }
}

[[nodiscard]] direction mirror_lr(const direction d) noexcept
{
    switch (d)
    {
        case direction::E: return direction::W;
        case direction::W: return direction::E;
        default: return d;
    }
}

[[nodiscard]] block_matrix rotate_cw(const block_matrix& m)
{
    const auto n = m.size();
    block_matrix out(n, std::string(n, ' '));
    for (std::size_t r = 0; r < n; ++r)
    {
        for (std::size_t c = 0; c < n; ++c)
        {
            out[r][c] = m[n - 1 - c][r];
        }
    }
    return out;
}

[[nodiscard]] block_matrix mirror_lr(const block_matrix& m)
{
    block_matrix out = m;
    for (auto& row : out)
    {
        std::reverse(row.begin(), row.end());
    }
    return out;
}

[[nodiscard]] library_block rotate_cw(const library_block& b)
{
    library_block out = b;
    out.name += "/r";
    for (auto& d : out.ins) d = rotate_cw(d);
    for (auto& d : out.outs) d = rotate_cw(d);
    for (auto& m : out.layers) m = rotate_cw(m);
    for (auto& run : out.layer_runs)
    {
        run = {rotate_cw(run.first), rotate_cw(run.second)};
    }
    return out;
}

[[nodiscard]] library_block mirror_lr(const library_block& b)
{
    library_block out = b;
    out.name += "/m";
    for (auto& d : out.ins) d = mirror_lr(d);
    for (auto& d : out.outs) d = mirror_lr(d);
    for (auto& m : out.layers) m = mirror_lr(m);
    for (auto& run : out.layer_runs)
    {
        run = {mirror_lr(run.first), mirror_lr(run.second)};
    }
    return out;
}

[[nodiscard]] std::string variant_key(const std::string& kind, std::vector<direction> ins,
                                      std::vector<direction> outs)
{
    std::sort(ins.begin(), ins.end());
    std::sort(outs.begin(), outs.end());
    std::string key = kind + "|";
    for (const auto d : ins) key += direction_letter(d);
    key += "|";
    for (const auto d : outs) key += direction_letter(d);
    return key;
}

/// Midpoint matrix coordinates (row, col) of a block edge.
[[nodiscard]] std::pair<std::size_t, std::size_t> edge_midpoint(const direction d,
                                                                const std::size_t rows,
                                                                const std::size_t cols)
{
    switch (d)
    {
        case direction::N: return {0, cols / 2};
        case direction::S: return {rows - 1, cols / 2};
        case direction::W: return {rows / 2, 0};
        default: return {rows / 2, cols - 1};
    }
}

}  // namespace

gate_library gate_library::parse(const std::string& text, const std::string& origin)
{
    const auto fail = [&origin](const std::string& msg) -> void
    { throw fcn_error{"gate library " + origin + ": " + msg}; };

    gate_library lib;
    std::vector<library_block> bases;
    std::vector<std::pair<bool, bool>> base_flags;  // (rotate, mirror)

    std::istringstream in{text};
    std::string line;
    std::vector<std::vector<std::string>> lines;
    while (std::getline(in, line))
    {
        std::istringstream ls{line};
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok)
        {
            if (tok[0] == '#')
            {
                break;
            }
            tokens.push_back(tok);
        }
        if (!tokens.empty())
        {
            lines.push_back(std::move(tokens));
        }
    }

    std::size_t i = 0;
    const auto next_line = [&]() -> const std::vector<std::string>&
    {
        if (i >= lines.size())
        {
            fail("unexpected end of file");
        }
        return lines[i++];
    };

    bool saw_block_size = false;
    while (i < lines.size())
    {
        const auto& toks = next_line();
        const auto& head = toks[0];
        if (head == "library" && toks.size() == 2)
        {
            lib.name_ = toks[1];
        }
        else if (head == "version" && toks.size() == 2)
        {
            continue;
        }
        else if (head == "block_size" && toks.size() == 3)
        {
            lib.block_rows_ = static_cast<std::uint32_t>(std::stoul(toks[1]));
            lib.block_cols_ = static_cast<std::uint32_t>(std::stoul(toks[2]));
            if (lib.block_rows_ == 0 || lib.block_cols_ == 0)
            {
                fail("block_size must be positive");
            }
            saw_block_size = true;
        }
        else if (head == "crossover" && toks.size() == 2)
        {
            if (toks[1] == "second-layer")
            {
                lib.crossover_ = crossover_style::SECOND_LAYER;
            }
            else if (toks[1] == "coplanar")
            {
                lib.crossover_ = crossover_style::COPLANAR;
            }
            else
            {
                fail("unknown crossover style '" + toks[1] + "'");
            }
        }
        else if (head == "alphabet")
        {
            if (toks.size() < 3 || toks.size() % 2 == 0)
            {
                fail("alphabet expects glyph/meaning pairs");
            }
            for (std::size_t k = 1; k + 1 < toks.size(); k += 2)
            {
                if (toks[k].size() != 1)
                {
                    fail("alphabet glyphs must be single characters");
                }
                lib.alphabet_[toks[k][0]] = toks[k + 1];
            }
        }
        else if (head == "block")
        {
            if (!saw_block_size || lib.alphabet_.empty())
            {
                fail("block_size and alphabet must precede blocks");
            }
            if (toks.size() < 3)
            {
                fail("block header needs a name and a kind");
            }
            library_block blk;
            blk.name = toks[1];
            bool rotate = false;
            bool mirror = false;
            std::size_t layers = 1;
            const std::string where = "block " + blk.name;
            for (std::size_t k = 2; k < toks.size(); ++k)
            {
                const auto& t = toks[k];
                if (t == "rotate")
                {
                    rotate = true;
                }
                else if (t == "mirror")
                {
                    mirror = true;
                }
                else if (t.rfind("kind=", 0) == 0)
                {
                    blk.kind = t.substr(5);
                }
                else if (t.rfind("in=", 0) == 0)
                {
                    blk.ins = parse_direction_list(t.substr(3), where);
                }
                else if (t.rfind("out=", 0) == 0)
                {
                    blk.outs = parse_direction_list(t.substr(4), where);
                }
                else if (t.rfind("layers=", 0) == 0)
                {
                    layers = std::stoul(t.substr(7));
                    if (layers < 1 || layers > 2)
                    {
                        fail(where + ": layers must be 1 or 2");
                    }
                }
                else
                {
                    fail(where + ": unknown attribute '" + t + "'");
                }
            }
            if (blk.kind.empty())
            {
                fail(where + ": missing kind");
            }
            for (std::size_t li = 0; li < layers; ++li)
            {
                block_matrix m;
                for (std::uint32_t r = 0; r < lib.block_rows_; ++r)
                {
                    const auto& row = next_line();
                    if (row.size() != lib.block_cols_)
                    {
                        fail(where + ": block size mismatch (expected " +
                             std::to_string(lib.block_rows_) + "x" +
                             std::to_string(lib.block_cols_) + ")");
                    }
                    std::string glyphs;
                    for (const auto& g : row)
                    {
                        if (g.size() != 1)
                        {
                            fail(where + ": matrix entries must be single glyphs");
                        }
                        if (lib.alphabet_.find(g[0]) == lib.alphabet_.end())
                        {
                            fail(where + ": glyph '" + g + "' not in alphabet");
                        }
                        glyphs += g[0];
                    }
                    m.push_back(std::move(glyphs));
                }
                blk.layers.push_back(std::move(m));
            }

            // Structural checks: ports at edge midpoints, I/O and fixed-cell
            // glyphs only where the kind warrants them.
            const auto occupied = [&](const block_matrix& m, const direction d)
            {
                const auto [r, c] = edge_midpoint(d, lib.block_rows_, lib.block_cols_);
                return lib.alphabet_.at(m[r][c]) != "empty";
            };
            for (const auto side : {true, false})
            {
                for (const auto d : side ? blk.ins : blk.outs)
                {
                    const bool hit = std::any_of(blk.layers.begin(), blk.layers.end(),
                                                 [&](const auto& m) { return occupied(m, d); });
                    if (!hit)
                    {
                        fail(where + ": port " + std::string(1, direction_letter(d)) +
                             " has no cell at its edge midpoint");
                    }
                }
            }
            for (const auto& m : blk.layers)
            {
                for (const auto& row : m)
                {
                    for (const char g : row)
                    {
                        const auto& meaning = lib.alphabet_.at(g);
                        if (meaning == "input" && blk.kind != "pi")
                        {
                            fail(where + ": input cells outside a pi block");
                        }
                        if (meaning == "output" && blk.kind != "po")
                        {
                            fail(where + ": output cells outside a po block");
                        }
                        if ((meaning == "const0" || meaning == "const1") &&
                            (blk.kind == "wire" || blk.kind == "pi" || blk.kind == "po" ||
                             blk.kind.rfind("crossing", 0) == 0))
                        {
                            fail(where + ": fixed cells outside a gate block");
                        }
                    }
                }
            }
            if (blk.layers.size() == 2)
            {
                // Each layer must realize exactly one straight run.
                for (const auto& m : blk.layers)
                {
                    direction in_d{};
                    direction out_d{};
                    int in_n = 0;
                    int out_n = 0;
                    for (const auto d : blk.ins)
                    {
                        if (occupied(m, d))
                        {
                            in_d = d;
                            ++in_n;
                        }
                    }
                    for (const auto d : blk.outs)
                    {
                        if (occupied(m, d))
                        {
                            out_d = d;
                            ++out_n;
                        }
                    }
                    if (in_n != 1 || out_n != 1)
                    {
                        fail(where + ": each layer must carry exactly one run");
                    }
                    blk.layer_runs.emplace_back(in_d, out_d);
                }
            }
            if (rotate && lib.block_rows_ != lib.block_cols_)
            {
                fail(where + ": rotate requires square blocks");
            }
            bases.push_back(std::move(blk));
            base_flags.emplace_back(rotate, mirror);
        }
        else
        {
            fail("unrecognized line starting with '" + head + "'");
        }
    }

    if (lib.name_.empty())
    {
        fail("missing library name");
    }
    if (bases.empty())
    {
        fail("no blocks defined");
    }

    for (std::size_t b = 0; b < bases.size(); ++b)
    {
        std::vector<library_block> batch{bases[b]};
        if (base_flags[b].first)
        {
            for (int k = 0; k < 3; ++k)
            {
                batch.push_back(rotate_cw(batch.back()));
            }
        }
        if (base_flags[b].second)
        {
            const auto n = batch.size();
            for (std::size_t k = 0; k < n; ++k)
            {
                batch.push_back(mirror_lr(batch[k]));
            }
        }
        for (auto& var : batch)
        {
            auto key = variant_key(var.kind, var.ins, var.outs);
            lib.variants_.emplace(std::move(key), std::move(var));
        }
    }
    return lib;
}

const std::string& gate_library::glyph_meaning(const char glyph) const
{
    const auto it = alphabet_.find(glyph);
    if (it == alphabet_.end())
    {
        throw fcn_error{"gate library " + name_ + ": glyph '" + std::string(1, glyph) +
                        "' not in alphabet"};
    }
    return it->second;
}

const library_block* gate_library::find(const std::string& kind, std::vector<direction> ins,
                                        std::vector<direction> outs) const
{
    const auto it = variants_.find(variant_key(kind, std::move(ins), std::move(outs)));
    return it == variants_.end() ? nullptr : &it->second;
}

gate_library load_library(const std::string& name_or_path)
{
    if (name_or_path == "qca-one")
    {
        return gate_library::parse(embedded::qca_one_lib, "qca-one");
    }
    std::ifstream file{name_or_path};
    if (!file)
    {
        throw fcn_error{"gate library file not found: " + name_or_path};
    }
    std::ostringstream text;
    text << file.rdbuf();
    return gate_library::parse(text.str(), name_or_path);
}

}  // namespace fcnlay
