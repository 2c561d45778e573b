#include "prodmin/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace prodmin {

namespace {

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
    throw Error(Errc::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

// nlohmann reports a byte offset; translate to line/column
[[noreturn]] void json_fail(const std::string& text, const nlohmann::json::parse_error& e) {
    std::size_t off = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    int line = 1, col = 1;
    for (std::size_t i = 0; i < off; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::string what = e.what();
    auto p = what.find("syntax error");
    parse_fail(line, col, p == std::string::npos ? what : what.substr(p));
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        json_fail(text, e);
    }
}

Vec number_array(const Json& j, const std::string& key) {
    if (!j.contains(key)) throw Error(Errc::Parse, "missing field '" + key + "'");
    const Json& a = j.at(key);
    if (!a.is_array()) throw Error(Errc::Parse, "field '" + key + "' must be an array");
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number())
            throw Error(Errc::Parse, key + "[" + std::to_string(i) + "] is not a number");
        v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    }
    return v;
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, int line, const std::string& what) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        parse_fail(line, 1, what + " '" + tok + "' is not a number");
    return v;
}

}  // namespace

std::string exact_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProblemSpec parse_problem_json(const std::string& text) {
    Json j = parse_json(text);
    if (!j.is_object()) throw Error(Errc::Parse, "problem must be a JSON object");
    ProblemSpec s;
    s.w = number_array(j, "weights");
    if (!j.contains("constraints") || !j["constraints"].is_array())
        throw Error(Errc::Parse, "field 'constraints' must be an array");
    const Json& cs = j["constraints"];
    s.A.resize(static_cast<Eigen::Index>(cs.size()), s.w.size());
    s.t.resize(static_cast<Eigen::Index>(cs.size()));
    for (std::size_t r = 0; r < cs.size(); ++r) {
        const std::string where = "constraints[" + std::to_string(r) + "]";
        if (!cs[r].is_object()) throw Error(Errc::Parse, where + " must be an object");
        Vec row = number_array(cs[r], "exponents");
        if (row.size() != s.w.size())
            throw Error(Errc::Parse, where + ".exponents has " + std::to_string(row.size()) + " entries, expected " +
                                         std::to_string(s.w.size()));
        if (!cs[r].contains("product") || !cs[r]["product"].is_number())
            throw Error(Errc::Parse, where + ".product must be a number");
        s.A.row(static_cast<Eigen::Index>(r)) = row.transpose();
        s.t[static_cast<Eigen::Index>(r)] = cs[r]["product"].get<double>();
    }
    if (j.contains("names")) {
        if (!j["names"].is_array()) throw Error(Errc::Parse, "field 'names' must be an array");
        for (const auto& n : j["names"]) {
            if (!n.is_string()) throw Error(Errc::Parse, "names must be strings");
            s.names.push_back(n.get<std::string>());
        }
        if (s.names.size() != static_cast<std::size_t>(s.w.size()))
            throw Error(Errc::Parse, "one name per variable expected");
    }
    return s;
}

std::string write_problem_json(const ProblemSpec& s) {
    Json j;
    j["weights"] = to_std(s.w);
    Json cs = Json::array();
    for (int r = 0; r < s.r(); ++r) {
        Json c;
        c["exponents"] = to_std(s.A.row(r).transpose());
        c["product"] = s.t[r];
        cs.push_back(c);
    }
    j["constraints"] = cs;
    if (!s.names.empty()) j["names"] = s.names;
    return j.dump(2) + "\n";
}

Json solution_json(const Solution& sol, const std::vector<std::string>& names) {
    Json j;
    j["min"] = sol.f;
    j["x"] = to_std(sol.x);
    j["lambda"] = to_std(sol.lambda);
    j["residual"] = sol.residual;
    j["iterations"] = sol.iterations;
    j["nonessential"] = sol.nonessential;
    if (!names.empty()) j["names"] = names;
    return j;
}

GraphFile parse_graph_text(const std::string& text) {
    GraphFile f;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool saw_homogeneous = false;
    auto node_of = [&](const std::string& name) {
        int v = f.graph.find_node(name);
        return v >= 0 ? v : f.graph.add_node(name);
    };
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
        auto tok = split_ws(raw);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        if (kw == "node") {
            if (tok.size() != 2) parse_fail(line, 1, "expected 'node <name>'");
            if (f.graph.find_node(tok[1]) >= 0) parse_fail(line, 6, "duplicate node '" + tok[1] + "'");
            f.graph.add_node(tok[1]);
        } else if (kw == "arc") {
            if (tok.size() != 4 && tok.size() != 5) parse_fail(line, 1, "expected 'arc <name> <from> <to> [weight]'");
            if (f.graph.find_arc(tok[1]) >= 0) parse_fail(line, 5, "duplicate arc '" + tok[1] + "'");
            double w = tok.size() == 5 ? parse_number(tok[4], line, "weight") : 1.0;
            if (!(w > 0.0) || !std::isfinite(w)) parse_fail(line, 1, "arc weight must be positive");
            int a = node_of(tok[2]), b = node_of(tok[3]);
            f.graph.add_arc(a, b, tok[1], w);
        } else if (kw == "constraint") {
            auto eq = std::find(tok.begin(), tok.end(), "=");
            if (eq == tok.end() || eq + 2 != tok.end() || eq == tok.begin() + 1)
                parse_fail(line, 1, "expected 'constraint <arcs...> = <target>'");
            std::vector<int> arcs;
            for (auto it = tok.begin() + 1; it != eq; ++it) {
                int a = f.graph.find_arc(*it);
                if (a < 0) parse_fail(line, 1, "unknown arc '" + *it + "'");
                arcs.push_back(a);
            }
            double t = parse_number(*(eq + 1), line, "target");
            if (!(t > 0.0) || !std::isfinite(t)) parse_fail(line, 1, "target must be positive");
            f.basis.circuits.push_back(std::move(arcs));
            f.basis.targets.push_back(t);
        } else if (kw == "homogeneous") {
            if (tok.size() != 1) parse_fail(line, 13, "unexpected text after 'homogeneous'");
            saw_homogeneous = true;
        } else {
            parse_fail(line, 1, "unknown keyword '" + kw + "'");
        }
    }
    if (saw_homogeneous && f.basis.size() > 0)
        throw Error(Errc::Parse, "'homogeneous' conflicts with explicit constraints");
    f.homogeneous = f.basis.size() == 0;
    return f;
}

std::string write_graph_text(const GraphFile& f) {
    const Digraph& g = f.graph;
    auto plain = [](const std::string& s) {
        if (s.empty() || s.find_first_of(" \t#\n") != std::string::npos || s == "=")
            throw Error(Errc::BadData, "name '" + s + "' cannot be written in the graph format");
        return s;
    };
    std::ostringstream out;
    for (int v = 0; v < g.node_count; ++v) out << "node " << plain(g.node_label(v)) << "\n";
    for (const Arc& a : g.arcs) {
        out << "arc " << plain(a.name) << " " << g.node_label(a.alpha) << " " << g.node_label(a.beta);
        if (a.weight != 1.0) out << " " << exact_number(a.weight);
        out << "\n";
    }
    if (f.homogeneous) {
        out << "homogeneous\n";
    } else {
        for (int c = 0; c < f.basis.size(); ++c) {
            out << "constraint";
            for (int a : f.basis.circuits[c]) out << " " << g.arcs[a].name;
            out << " = " << exact_number(f.basis.targets[c]) << "\n";
        }
    }
    return out.str();
}

TreeFile parse_tree_text(const std::string& text) {
    TreeFile f;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool have_tree = false, have_targets = false;
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
        auto colon = raw.find(':');
        if (split_ws(raw).empty()) continue;
        if (colon == std::string::npos) parse_fail(line, 1, "expected 'tree:' or 'targets:'");
        auto key = split_ws(raw.substr(0, colon));
        std::string rest = raw.substr(colon + 1);
        if (key.size() == 1 && key[0] == "tree") {
            if (have_tree) parse_fail(line, 1, "duplicate 'tree:' line");
            auto toks = split_ws(rest);
            std::string code;
            for (auto& t : toks) code += t;
            try {
                f.tree = parse_tree_code(code);
            } catch (const Error& e) {
                parse_fail(line, static_cast<int>(colon) + 2, e.what());
            }
            have_tree = true;
        } else if (key.size() == 1 && key[0] == "targets") {
            if (have_targets) parse_fail(line, 1, "duplicate 'targets:' line");
            // accepts "1 2 3", "[1, 2, 3]" and mixtures
            for (char& c : rest)
                if (c == '[' || c == ']' || c == ',') c = ' ';
            for (auto& t : split_ws(rest)) f.targets.push_back(parse_number(t, line, "target"));
            have_targets = true;
        } else {
            parse_fail(line, 1, "unknown key");
        }
    }
    if (!have_tree) throw Error(Errc::Parse, "missing 'tree:' line");
    if (have_targets && static_cast<int>(f.targets.size()) != f.tree.leaf_count())
        throw Error(Errc::Parse, "expected " + std::to_string(f.tree.leaf_count()) + " targets, got " +
                                     std::to_string(f.targets.size()));
    return f;
}

std::string write_tree_text(const TreeFile& f) {
    std::string s = "tree: " + tree_code(f.tree) + "\n";
    if (!f.targets.empty()) {
        s += "targets: [";
        for (std::size_t i = 0; i < f.targets.size(); ++i) s += (i ? ", " : "") + exact_number(f.targets[i]);
        s += "]\n";
    }
    return s;
}

AssignmentFile parse_assignment_json(const std::string& text) {
    Json j = parse_json(text);
    if (!j.is_object() || !j.contains("omega") || !j["omega"].is_array())
        throw Error(Errc::Parse, "assignment needs an 'omega' array");
    AssignmentFile f;
    const Json& om = j["omega"];
    const int n = static_cast<int>(om.size());
    for (int i = 0; i < n; ++i) {
        if (!om[i].is_array()) throw Error(Errc::Parse, "omega[" + std::to_string(i) + "] must be an array");
        std::vector<int> set;
        for (const auto& e : om[i]) {
            if (!e.is_number_integer()) throw Error(Errc::Parse, "omega entries must be integers");
            int k = e.get<int>();
            if (k < 1 || k > n)
                throw Error(Errc::Parse, "omega[" + std::to_string(i) + "] entry " + std::to_string(k) +
                                             " outside 1.." + std::to_string(n));
            set.push_back(k - 1);
        }
        f.assignment.omega.push_back(std::move(set));
    }
    if (j.contains("x")) {
        f.x = number_array(j, "x");
        if (f.x->size() != n) throw Error(Errc::Parse, "'x' needs one value per index");
    }
    return f;
}

std::string write_assignment_json(const AssignmentFile& f) {
    Json j;
    Json om = Json::array();
    for (const auto& set : f.assignment.omega) {
        Json s = Json::array();
        for (int k : set) s.push_back(k + 1);
        om.push_back(s);
    }
    j["omega"] = om;
    if (f.x) j["x"] = to_std(*f.x);
    return j.dump() + "\n";
}

}  // namespace prodmin
