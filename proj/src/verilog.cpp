#include "fcnlay/network/verilog.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace fcnlay
{

parse_error::parse_error(const unsigned line, const unsigned column, const std::string& message)
    : fcn_error{std::to_string(line) + ":" + std::to_string(column) + ": " + message},
      line_{line},
      column_{column}
{
}

namespace
{

enum class tok_kind : std::uint8_t
{
    identifier,
    keyword,
    punct,
    const0,
    const1,
    end
};

struct token
{
    tok_kind kind{tok_kind::end};
    std::string text{};
    unsigned line{1};
    unsigned column{1};
};

const std::unordered_set<std::string> keywords = {"module", "endmodule", "input",
                                                  "output", "wire",      "assign"};

// Constructs rejected with a dedicated "unsupported construct" message.
const std::unordered_set<std::string> unsupported = {
    "always", "reg", "initial", "inout", "parameter", "localparam", "generate", "function",
    "task",   "if",  "else",    "case",  "begin",     "end",        "posedge",  "negedge"};

class lexer
{
  public:
    explicit lexer(const std::string_view text) : text_{text} { advance(); }

    [[nodiscard]] const token& peek() const noexcept { return current_; }

    token next()
    {
        auto t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const token& at, const std::string& msg) const
    {
        throw parse_error{at.line, at.column, msg};
    }

  private:
    void skip_space_and_comments()
    {
        while (pos_ < text_.size())
        {
            const char c = text_[pos_];
            if (c == '\n')
            {
                ++line_;
                col_ = 1;
                ++pos_;
            }
            else if (std::isspace(static_cast<unsigned char>(c)) != 0)
            {
                ++col_;
                ++pos_;
            }
            else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')
            {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                {
                    ++pos_;
                }
            }
            else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*')
            {
                pos_ += 2;
                col_ += 2;
                while (pos_ + 1 < text_.size() &&
                       !(text_[pos_] == '*' && text_[pos_ + 1] == '/'))
                {
                    if (text_[pos_] == '\n')
                    {
                        ++line_;
                        col_ = 1;
                    }
                    else
                    {
                        ++col_;
                    }
                    ++pos_;
                }
                pos_ = pos_ + 2 <= text_.size() ? pos_ + 2 : text_.size();
                col_ += 2;
            }
            else
            {
                break;
            }
        }
    }

    void advance()
    {
        skip_space_and_comments();
        current_.line = line_;
        current_.column = col_;
        if (pos_ >= text_.size())
        {
            current_ = token{tok_kind::end, "", line_, col_};
            return;
        }
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_')
        {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 ||
                    text_[pos_] == '_'))
            {
                word.push_back(text_[pos_]);
                ++pos_;
                ++col_;
            }
            current_.kind = keywords.count(word) != 0 ? tok_kind::keyword : tok_kind::identifier;
            current_.text = std::move(word);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0)
        {
            // Only the 1-bit literals 1'b0 / 1'b1 are part of the subset.
            if (text_.substr(pos_).rfind("1'b0", 0) == 0)
            {
                current_ = token{tok_kind::const0, "1'b0", line_, col_};
                pos_ += 4;
                col_ += 4;
                return;
            }
            if (text_.substr(pos_).rfind("1'b1", 0) == 0)
            {
                current_ = token{tok_kind::const1, "1'b1", line_, col_};
                pos_ += 4;
                col_ += 4;
                return;
            }
            throw parse_error{line_, col_, "unsupported literal (only 1'b0 and 1'b1 are allowed)"};
        }
        static const std::string punct_chars = "(),;=~&|^";
        if (punct_chars.find(c) != std::string::npos)
        {
            current_ = token{tok_kind::punct, std::string(1, c), line_, col_};
            ++pos_;
            ++col_;
            return;
        }
        throw parse_error{line_, col_, std::string{"unexpected character '"} + c + "'"};
    }

    std::string_view text_;
    std::size_t pos_{0};
    unsigned line_{1};
    unsigned col_{1};
    token current_{};
};

// Expression AST kept until all assigns are known, so wires may be referenced
// before their defining assign.
struct expr
{
    enum class kind : std::uint8_t
    {
        ident,
        constant,
        unary_not,
        binary
    };
    kind k{kind::ident};
    std::string name{};
    bool cval{false};
    char op{};
    std::unique_ptr<expr> lhs{};
    std::unique_ptr<expr> rhs{};
    unsigned line{1};
    unsigned column{1};
};

struct assign_stmt
{
    std::string lhs;
    std::unique_ptr<expr> rhs;
    unsigned line{1};
    unsigned column{1};
};

class parser
{
  public:
    explicit parser(const std::string_view text) : lex_{text} {}

    logic_network run()
    {
        expect_keyword("module");
        const auto name_tok = expect(tok_kind::identifier, "module name");
        net_ = logic_network{name_tok.text};
        parse_port_header();
        parse_body();
        build();
        net_.finalize();
        return std::move(net_);
    }

  private:
    void expect_keyword(const std::string& kw)
    {
        const auto t = lex_.next();
        if (t.kind != tok_kind::keyword || t.text != kw)
        {
            report_unexpected(t, "'" + kw + "'");
        }
    }

    token expect(const tok_kind kind, const std::string& what)
    {
        const auto t = lex_.next();
        if (t.kind != kind)
        {
            report_unexpected(t, what);
        }
        return t;
    }

    token expect_punct(const char c)
    {
        const auto t = lex_.next();
        if (t.kind != tok_kind::punct || t.text[0] != c)
        {
            report_unexpected(t, std::string{"'"} + c + "'");
        }
        return t;
    }

    [[noreturn]] void report_unexpected(const token& t, const std::string& expected)
    {
        if (unsupported.count(t.text) != 0)
        {
            lex_.fail(t, "unsupported construct '" + t.text + "'");
        }
        const auto got = t.kind == tok_kind::end ? std::string{"end of input"}
                                                 : "'" + t.text + "'";
        lex_.fail(t, "expected " + expected + ", got " + got);
    }

    void declare(const std::string& name, const char role, const token& at)
    {
        if (const auto it = roles_.find(name); it != roles_.end())
        {
            if (it->second != role)
            {
                lex_.fail(at, "conflicting declaration of '" + name + "'");
            }
            return;
        }
        roles_[name] = role;
        if (role == 'i')
        {
            input_order_.push_back(name);
        }
        else if (role == 'o')
        {
            output_order_.push_back(name);
        }
    }

    void parse_port_header()
    {
        expect_punct('(');
        // Both classic name-only lists and ANSI "input a, b" headers are
        // accepted; ';' is tolerated as a separator in the ANSI form.
        char pending_role = 0;
        while (true)
        {
            auto t = lex_.next();
            if (t.kind == tok_kind::punct && t.text == ")")
            {
                break;
            }
            if (t.kind == tok_kind::keyword && (t.text == "input" || t.text == "output"))
            {
                pending_role = t.text == "input" ? 'i' : 'o';
                t = lex_.next();
            }
            if (t.kind != tok_kind::identifier)
            {
                report_unexpected(t, "port name");
            }
            if (pending_role != 0)
            {
                declare(t.text, pending_role, t);
            }
            else
            {
                header_ports_.push_back(t.text);
            }
            const auto sep = lex_.peek();
            if (sep.kind == tok_kind::punct && (sep.text == "," || sep.text == ";"))
            {
                lex_.next();
            }
        }
        expect_punct(';');
    }

    void parse_body()
    {
        while (true)
        {
            const auto t = lex_.next();
            if (t.kind == tok_kind::keyword && t.text == "endmodule")
            {
                return;
            }
            if (t.kind == tok_kind::keyword &&
                (t.text == "input" || t.text == "output" || t.text == "wire"))
            {
                const char role = t.text == "input" ? 'i' : t.text == "output" ? 'o' : 'w';
                while (true)
                {
                    const auto id = expect(tok_kind::identifier, "identifier");
                    declare(id.text, role, id);
                    const auto sep = lex_.next();
                    if (sep.kind == tok_kind::punct && sep.text == ";")
                    {
                        break;
                    }
                    if (!(sep.kind == tok_kind::punct && sep.text == ","))
                    {
                        report_unexpected(sep, "',' or ';'");
                    }
                }
                continue;
            }
            if (t.kind == tok_kind::keyword && t.text == "assign")
            {
                const auto lhs = expect(tok_kind::identifier, "assignment target");
                expect_punct('=');
                auto rhs = parse_expr();
                expect_punct(';');
                assigns_.push_back(assign_stmt{lhs.text, std::move(rhs), lhs.line, lhs.column});
                continue;
            }
            report_unexpected(t, "declaration, assign, or endmodule");
        }
    }

    // Precedence: ~ > & > ^ > |.
    std::unique_ptr<expr> parse_expr() { return parse_or(); }

    std::unique_ptr<expr> parse_or() { return parse_binary('|', [this] { return parse_xor(); }); }
    std::unique_ptr<expr> parse_xor() { return parse_binary('^', [this] { return parse_and(); }); }
    std::unique_ptr<expr> parse_and()
    {
        return parse_binary('&', [this] { return parse_unary(); });
    }

    template <typename Sub>
    std::unique_ptr<expr> parse_binary(const char op, Sub sub)
    {
        auto lhs = sub();
        while (lex_.peek().kind == tok_kind::punct && lex_.peek().text[0] == op)
        {
            const auto t = lex_.next();
            auto node = std::make_unique<expr>();
            node->k = expr::kind::binary;
            node->op = op;
            node->line = t.line;
            node->column = t.column;
            node->lhs = std::move(lhs);
            node->rhs = sub();
            lhs = std::move(node);
        }
        return lhs;
    }

    std::unique_ptr<expr> parse_unary()
    {
        const auto t = lex_.peek();
        if (t.kind == tok_kind::punct && t.text == "~")
        {
            lex_.next();
            auto node = std::make_unique<expr>();
            node->k = expr::kind::unary_not;
            node->line = t.line;
            node->column = t.column;
            node->lhs = parse_unary();
            return node;
        }
        return parse_primary();
    }

    std::unique_ptr<expr> parse_primary()
    {
        const auto t = lex_.next();
        auto node = std::make_unique<expr>();
        node->line = t.line;
        node->column = t.column;
        if (t.kind == tok_kind::identifier)
        {
            node->k = expr::kind::ident;
            node->name = t.text;
            return node;
        }
        if (t.kind == tok_kind::const0 || t.kind == tok_kind::const1)
        {
            node->k = expr::kind::constant;
            node->cval = t.kind == tok_kind::const1;
            return node;
        }
        if (t.kind == tok_kind::punct && t.text == "(")
        {
            auto inner = parse_expr();
            expect_punct(')');
            return inner;
        }
        report_unexpected(t, "identifier, constant, or '('");
    }

    // Instantiates vertices on demand, following signal dependencies so that
    // wires may be assigned after their first use. On-stack markers catch
    // combinational cycles.
    std::uint32_t instantiate_signal(const std::string& name, const unsigned line,
                                     const unsigned column)
    {
        if (const auto it = signal_vertex_.find(name); it != signal_vertex_.end())
        {
            return it->second;
        }
        const auto role_it = roles_.find(name);
        if (role_it == roles_.end())
        {
            throw parse_error{line, column, "undeclared identifier '" + name + "'"};
        }
        if (role_it->second == 'i')
        {
            throw parse_error{line, column, "internal error: PI '" + name + "' not instantiated"};
        }
        const auto as_it = assign_of_.find(name);
        if (as_it == assign_of_.end())
        {
            throw parse_error{line, column, "'" + name + "' is never assigned"};
        }
        if (in_progress_.count(name) != 0)
        {
            throw parse_error{line, column, "combinational cycle through '" + name + "'"};
        }
        in_progress_.insert(name);
        const auto& st = assigns_[as_it->second];
        const auto v = instantiate_expr(*st.rhs);
        in_progress_.erase(name);
        signal_vertex_[name] = v;
        return v;
    }

    std::uint32_t instantiate_expr(const expr& e)
    {
        switch (e.k)
        {
            case expr::kind::ident: return instantiate_signal(e.name, e.line, e.column);
            case expr::kind::constant:
                return net_.add_vertex(e.cval ? logic_op::CONST1 : logic_op::CONST0);
            case expr::kind::unary_not:
            {
                const auto in = instantiate_expr(*e.lhs);
                const auto v = net_.add_vertex(logic_op::NOT);
                net_.add_edge(in, 0, v, 0);
                return v;
            }
            case expr::kind::binary:
            {
                const auto l = instantiate_expr(*e.lhs);
                const auto r = instantiate_expr(*e.rhs);
                const auto op = e.op == '&' ? logic_op::AND
                                            : e.op == '|' ? logic_op::OR : logic_op::XOR;
                const auto v = net_.add_vertex(op);
                net_.add_edge(l, 0, v, 0);
                net_.add_edge(r, 0, v, 1);
                return v;
            }
        }
        throw fcn_error{"verilog: unreachable expression kind"};
    }

    void build()
    {
        // Classic headers name the ports first and type them in the body.
        for (const auto& p : header_ports_)
        {
            if (roles_.find(p) == roles_.end())
            {
                throw parse_error{1, 1, "port '" + p + "' has no input/output declaration"};
            }
        }
        for (std::size_t i = 0; i < assigns_.size(); ++i)
        {
            const auto& st = assigns_[i];
            const auto role_it = roles_.find(st.lhs);
            if (role_it == roles_.end())
            {
                throw parse_error{st.line, st.column, "undeclared identifier '" + st.lhs + "'"};
            }
            if (role_it->second == 'i')
            {
                throw parse_error{st.line, st.column, "assignment to input '" + st.lhs + "'"};
            }
            if (assign_of_.count(st.lhs) != 0)
            {
                throw parse_error{st.line, st.column, "'" + st.lhs + "' is driven twice"};
            }
            assign_of_[st.lhs] = i;
        }
        for (const auto& name : input_order_)
        {
            signal_vertex_[name] = net_.add_vertex(logic_op::PI, name);
        }
        // Assigns are instantiated in parse order; forward references recurse.
        for (const auto& st : assigns_)
        {
            instantiate_signal(st.lhs, st.line, st.column);
        }
        for (const auto& name : output_order_)
        {
            const auto it = signal_vertex_.find(name);
            if (it == signal_vertex_.end())
            {
                throw parse_error{1, 1, "output '" + name + "' is never assigned"};
            }
            const auto po = net_.add_vertex(logic_op::PO, name);
            net_.add_edge(it->second, 0, po, 0);
        }
    }

    lexer lex_;
    logic_network net_{""};
    std::vector<std::string> header_ports_;
    std::unordered_map<std::string, char> roles_;
    std::vector<std::string> input_order_;
    std::vector<std::string> output_order_;
    std::vector<assign_stmt> assigns_;
    std::unordered_map<std::string, std::size_t> assign_of_;
    std::unordered_map<std::string, std::uint32_t> signal_vertex_;
    std::unordered_set<std::string> in_progress_;
};

}  // namespace

logic_network parse_verilog(const std::string_view text)
{
    parser p{text};
    return p.run();
}

logic_network parse_verilog_file(const std::string& path)
{
    std::ifstream in{path};
    if (!in)
    {
        throw fcn_error{"cannot open '" + path + "'"};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_verilog(buf.str());
}

std::string write_verilog(const logic_network& net)
{
    // Internal signals are named n<id>; PI/PO keep their labels.
    const auto signal_name = [&](const std::uint32_t id) -> std::string
    {
        const auto& v = net.vertex(id);
        if (v.op == logic_op::PI)
        {
            return v.label;
        }
        if (v.op == logic_op::CONST0)
        {
            return "1'b0";
        }
        if (v.op == logic_op::CONST1)
        {
            return "1'b1";
        }
        return "n" + std::to_string(id);
    };

    std::ostringstream out;
    out << "module " << net.name() << " (";
    bool first = true;
    for (const auto pi : net.pis())
    {
        out << (first ? " " : ", ") << net.vertex(pi).label;
        first = false;
    }
    for (const auto po : net.pos())
    {
        out << (first ? " " : ", ") << net.vertex(po).label;
        first = false;
    }
    out << " );\n";
    if (!net.pis().empty())
    {
        out << "  input ";
        for (std::size_t i = 0; i < net.pis().size(); ++i)
        {
            out << (i == 0 ? " " : ", ") << net.vertex(net.pis()[i]).label;
        }
        out << ";\n";
    }
    if (!net.pos().empty())
    {
        out << "  output ";
        for (std::size_t i = 0; i < net.pos().size(); ++i)
        {
            out << (i == 0 ? " " : ", ") << net.vertex(net.pos()[i]).label;
        }
        out << ";\n";
    }
    std::vector<std::uint32_t> internals;
    for (const auto& v : net.vertices())
    {
        switch (v.op)
        {
            case logic_op::PI:
            case logic_op::PO:
            case logic_op::CONST0:
            case logic_op::CONST1: break;
            default: internals.push_back(v.id);
        }
    }
    if (!internals.empty())
    {
        out << "  wire ";
        for (std::size_t i = 0; i < internals.size(); ++i)
        {
            out << (i == 0 ? " " : ", ") << signal_name(internals[i]);
        }
        out << ";\n";
    }
    const auto input_name = [&](const std::uint32_t id, const std::size_t slot)
    { return signal_name(net.edge(net.in_edges(id)[slot]).source); };
    for (const auto id : net.topological_order())
    {
        const auto& v = net.vertex(id);
        switch (v.op)
        {
            case logic_op::PI:
            case logic_op::CONST0:
            case logic_op::CONST1: break;
            case logic_op::PO:
                out << "  assign " << v.label << " = " << input_name(id, 0) << ";\n";
                break;
            case logic_op::FANOUT:
                out << "  assign " << signal_name(id) << " = " << input_name(id, 0) << ";\n";
                break;
            case logic_op::NOT:
                out << "  assign " << signal_name(id) << " = ~" << input_name(id, 0) << ";\n";
                break;
            case logic_op::AND:
                out << "  assign " << signal_name(id) << " = " << input_name(id, 0) << " & "
                    << input_name(id, 1) << ";\n";
                break;
            case logic_op::OR:
                out << "  assign " << signal_name(id) << " = " << input_name(id, 0) << " | "
                    << input_name(id, 1) << ";\n";
                break;
            case logic_op::XOR:
                out << "  assign " << signal_name(id) << " = " << input_name(id, 0) << " ^ "
                    << input_name(id, 1) << ";\n";
                break;
            case logic_op::NAND:
                out << "  assign " << signal_name(id) << " = ~(" << input_name(id, 0) << " & "
                    << input_name(id, 1) << ");\n";
                break;
            case logic_op::NOR:
                out << "  assign " << signal_name(id) << " = ~(" << input_name(id, 0) << " | "
                    << input_name(id, 1) << ");\n";
                break;
            case logic_op::XNOR:
                out << "  assign " << signal_name(id) << " = ~(" << input_name(id, 0) << " ^ "
                    << input_name(id, 1) << ");\n";
                break;
            case logic_op::MAJ:
                out << "  assign " << signal_name(id) << " = (" << input_name(id, 0) << " & "
                    << input_name(id, 1) << ") | (" << input_name(id, 0) << " & "
                    << input_name(id, 2) << ") | (" << input_name(id, 1) << " & "
                    << input_name(id, 2) << ");\n";
                break;
        }
    }
    out << "endmodule\n";
    return out.str();
}

}  // namespace fcnlay
