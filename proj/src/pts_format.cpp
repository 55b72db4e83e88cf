#include "reactest/pts_format.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "reactest/errors.hpp"

namespace reactest {

namespace {

bool is_state_id(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '.';
        if (!ok) return false;
    }
    return true;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line.substr(0, line.find('#')));
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

} // namespace

PtsDocument parse_pts(std::string_view text) {
    std::optional<GraphRole> declared_kind;
    std::vector<Action> declared_actions;
    std::set<Action> used_actions;
    std::optional<std::string> root;
    std::vector<std::string> order; // states in order of first mention
    std::set<std::string> seen;
    std::vector<std::pair<std::string, StateKind>> declarations;
    std::set<std::string> declared;
    struct Edge {
        std::string from;
        std::string label; // action, or empty for a probabilistic branch
        Rational probability;
        std::string to;
    };
    std::vector<Edge> edges;
    std::vector<std::pair<std::string, std::size_t>> successes;

    auto mention = [&](const std::string& id, std::size_t line_no) {
        if (!is_state_id(id)) throw ParseError(line_no, "invalid state name '" + id + "'");
        if (seen.insert(id).second) order.push_back(id);
    };

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = tokenize(line);
        if (t.empty()) continue;
        const std::string& head = t[0];
        if (head == "kind") {
            if (t.size() != 2 || (t[1] != "process" && t[1] != "test")) {
                throw ParseError(line_no, "expected 'kind process' or 'kind test'");
            }
            if (declared_kind) throw ParseError(line_no, "kind declared twice");
            declared_kind = t[1] == "test" ? GraphRole::Test : GraphRole::Process;
        } else if (head == "actions") {
            for (std::size_t i = 1; i < t.size(); ++i) {
                if (!is_action_name(t[i])) throw ParseError(line_no, "invalid action name '" + t[i] + "'");
                declared_actions.push_back(t[i]);
            }
        } else if (head == "root") {
            if (t.size() != 2) throw ParseError(line_no, "expected 'root <state>'");
            if (root) throw ParseError(line_no, "root declared twice");
            mention(t[1], line_no);
            root = t[1];
        } else if (head == "state") {
            if (t.size() != 3 || (t[2] != "prob" && t[2] != "act")) {
                throw ParseError(line_no, "expected 'state <name> prob|act'");
            }
            mention(t[1], line_no);
            declarations.emplace_back(t[1], t[2] == "prob" ? StateKind::Probabilistic : StateKind::Action);
            declared.insert(t[1]);
        } else if (head == "success") {
            if (t.size() != 2) throw ParseError(line_no, "expected 'success <state>'");
            mention(t[1], line_no);
            successes.emplace_back(t[1], line_no);
        } else if (t.size() == 4 && t[1] == "->") {
            mention(t[0], line_no);
            if (t[2].find('.') != std::string::npos) {
                throw ParseError(line_no, "decimal probability '" + t[2] + "'; write it as p/q");
            }
            Rational p;
            try {
                p = parse_rational(t[2]);
            } catch (const std::exception& e) {
                throw ParseError(line_no, "invalid probability '" + t[2] + "'");
            }
            mention(t[3], line_no);
            edges.push_back({t[0], "", p, t[3]});
        } else if (t.size() == 3 && t[1].size() > 3 && t[1].front() == '-' && t[1].ends_with("->")) {
            const std::string label = t[1].substr(1, t[1].size() - 3);
            if (is_reserved_name(label)) {
                throw ParseError(line_no, "the success symbol cannot label a transition; use 'success'");
            }
            if (!is_action_name(label)) throw ParseError(line_no, "invalid action name '" + label + "'");
            mention(t[0], line_no);
            mention(t[2], line_no);
            used_actions.insert(label);
            edges.push_back({t[0], label, Rational{0}, t[2]});
        } else {
            throw ParseError(line_no, "unrecognized line '" + line + "'");
        }
    }

    const GraphRole kind = declared_kind.value_or(successes.empty() ? GraphRole::Process : GraphRole::Test);
    if (kind == GraphRole::Process && !successes.empty()) {
        throw ParseError(successes.front().second, "success is only allowed in tests");
    }
    if (order.empty()) throw ParseError(0, "no states");

    std::vector<Action> actions = declared_actions;
    if (actions.empty()) actions.assign(used_actions.begin(), used_actions.end());
    if (actions.empty()) {
        // A lone deadlock or success state still needs a non-empty alphabet.
        throw ParseError(0, "no actions: add an 'actions' line");
    }
    Alphabet alphabet;
    try {
        alphabet = Alphabet{actions};
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, e.what());
    }

    GraphBuilder builder(alphabet);
    std::set<std::string> has_branches;
    for (const auto& e : edges) {
        if (e.label.empty()) has_branches.insert(e.from);
    }
    for (const auto& [id, k] : declarations) builder.state(id, k);
    for (const auto& id : order) {
        if (!declared.contains(id)) {
            builder.state(id, has_branches.contains(id) ? StateKind::Probabilistic : StateKind::Action);
        }
    }
    for (const auto& e : edges) {
        if (e.label.empty()) {
            builder.branch(e.from, e.probability, e.to);
        } else {
            builder.action(e.from, e.label, e.to);
        }
    }
    for (const auto& [id, line_no] : successes) builder.success(id);
    builder.root(root.value_or(order.front()));
    return PtsDocument{kind, builder.build(kind)};
}

std::string render_pts(const ProcessGraph& graph, GraphRole kind) {
    const auto states = graph.states();
    std::map<const Node*, std::string> names;
    std::set<std::string> taken;
    for (const Node* n : states) {
        std::string name = is_state_id(n->id) ? n->id : "s";
        if (taken.contains(name)) {
            std::size_t k = 2;
            while (taken.contains(name + "_" + std::to_string(k))) ++k;
            name += "_" + std::to_string(k);
        }
        taken.insert(name);
        names.emplace(n, name);
    }
    std::ostringstream out;
    out << "kind " << (kind == GraphRole::Test ? "test" : "process") << '\n';
    out << "actions";
    for (const auto& a : graph.alphabet().actions()) out << ' ' << a;
    out << '\n';
    out << "root " << names.at(graph.root().get()) << '\n';
    for (const Node* n : states) {
        out << "state " << names.at(n) << (n->is_probabilistic() ? " prob" : " act") << '\n';
    }
    for (const Node* n : states) {
        for (const auto& b : n->branches) {
            out << names.at(n) << " -> " << to_string(b.probability) << ' ' << names.at(b.target.get()) << '\n';
        }
        for (const auto& e : n->actions) {
            out << names.at(n) << " -" << e.action << "-> " << names.at(e.target.get()) << '\n';
        }
    }
    for (const Node* n : states) {
        if (n->success) out << "success " << names.at(n) << '\n';
    }
    return out.str();
}

} // namespace reactest
