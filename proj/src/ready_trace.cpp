#include "reactest/ready_trace.hpp"

#include <cctype>
#include <map>
#include <stdexcept>
#include <tuple>

#include "reactest/errors.hpp"

namespace reactest {

ReadyTrace::ReadyTrace(std::vector<Menu> menus, std::vector<Action> actions)
    : menus_(std::move(menus)), actions_(std::move(actions)) {
    if (menus_.empty() || menus_.size() != actions_.size() + 1) {
        throw std::invalid_argument("a ready trace alternates n menus with n-1 actions");
    }
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        if (!menus_[i].contains(actions_[i])) {
            throw std::invalid_argument("action " + actions_[i] + " is not in menu " +
                                        to_string(menus_[i]));
        }
    }
}

ReadyTrace ReadyTrace::then(const Action& action, const Menu& next) const {
    auto menus = menus_;
    auto actions = actions_;
    actions.push_back(action);
    menus.push_back(next);
    return ReadyTrace{std::move(menus), std::move(actions)};
}

std::string to_string(const ReadyTrace& trace) {
    std::string out = to_string(trace.menus().front());
    for (std::size_t i = 0; i < trace.actions().size(); ++i) {
        out += " " + trace.actions()[i] + " " + to_string(trace.menus()[i + 1]);
    }
    return out;
}

ReadyTrace parse_ready_trace(std::string_view text) {
    std::vector<Menu> menus;
    std::vector<Action> actions;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& message) -> ParseError {
        return ParseError(0, "ready trace, offset " + std::to_string(pos) + ": " + message);
    };
    for (skip(); pos < text.size(); skip()) {
        const bool expect_menu = menus.size() == actions.size();
        if (expect_menu) {
            if (text[pos] != '{') throw fail("expected '{'");
            const auto close = text.find('}', pos);
            if (close == std::string_view::npos) throw fail("unterminated menu");
            std::vector<Action> items;
            std::string current;
            for (char c : text.substr(pos + 1, close - pos - 1)) {
                if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                    if (!current.empty()) items.push_back(std::move(current));
                    current.clear();
                } else {
                    current += c;
                }
            }
            if (!current.empty()) items.push_back(std::move(current));
            for (const auto& a : items) {
                if (!is_action_name(a)) throw fail("invalid action '" + a + "'");
            }
            menus.emplace_back(std::move(items));
            pos = close + 1;
        } else {
            const std::size_t start = pos;
            while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
                   text[pos] != '{') {
                ++pos;
            }
            const std::string a(text.substr(start, pos - start));
            if (!is_action_name(a)) throw fail("invalid action '" + a + "'");
            actions.push_back(a);
        }
    }
    if (menus.size() != actions.size() + 1) {
        throw fail("a ready trace must end with a menu");
    }
    try {
        return ReadyTrace{std::move(menus), std::move(actions)};
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, std::string("ready trace: ") + e.what());
    }
}

const Rational& TraceProbability::value() const {
    if (!value_) {
        throw std::logic_error("trace probability is undefined");
    }
    return *value_;
}

std::string to_string(const TraceProbability& p) {
    return p.is_defined() ? to_string(p.value()) : "undefined";
}

Rational p1(const Node& root, const Menu& wanted) {
    if (root.is_probabilistic()) {
        Rational total = 0;
        for (const auto& b : root.branches) {
            total += b.probability * p1(*b.target, wanted);
        }
        return total;
    }
    return menu(root) == wanted ? Rational{1} : Rational{0};
}

Rational p1(const ProcessGraph& graph, const Menu& wanted) { return p1(*graph.root(), wanted); }

TraceProbability pn(const ProcessGraph& graph, const ReadyTrace& trace) {
    NodePtr current = graph.root();
    for (std::size_t i = 0; i + 1 < trace.length(); ++i) {
        if (p1(*current, trace.menus()[i]) == 0) {
            return TraceProbability::undefined();
        }
        current = after(current, trace.menus()[i], trace.actions()[i]);
    }
    return TraceProbability{p1(*current, trace.menus().back())};
}

std::size_t completeness_depth(const ProcessGraph& g1, const ProcessGraph& g2) {
    return 1 + std::max(g1.action_depth(), g2.action_depth());
}

namespace {

// Derived processes are shared between traces with a common prefix.
class AfterCache {
public:
    NodePtr get(const NodePtr& root, const Menu& m, const Action& a) {
        auto key = std::make_tuple(root.get(), m, a);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        NodePtr derived = after(root, m, a);
        cache_.emplace(std::move(key), derived);
        return derived;
    }

private:
    std::map<std::tuple<const Node*, Menu, Action>, NodePtr> cache_;
};

struct Frontier {
    NodePtr first;
    NodePtr second;
    std::optional<ReadyTrace> prefix; // menus/actions so far, ending in an action
    std::vector<Menu> menus;
    std::vector<Action> actions;
};

} // namespace

ReadyTraceVerdict rt_equiv(const ProcessGraph& g1, const ProcessGraph& g2, std::size_t depth) {
    if (depth == 0) {
        throw std::invalid_argument("ready-trace depth must be positive");
    }
    AfterCache cache;
    std::vector<Frontier> level{{g1.root(), g2.root(), std::nullopt, {}, {}}};
    for (std::size_t length = 1; length <= depth && !level.empty(); ++length) {
        std::vector<Frontier> next;
        for (const auto& f : level) {
            const auto left = first_level_menus(*f.first);
            const auto right = first_level_menus(*f.second);
            std::map<Menu, std::pair<Rational, Rational>> joint;
            for (const auto& [m, p] : left) joint[m].first = p;
            for (const auto& [m, p] : right) joint[m].second = p;
            for (const auto& [m, probs] : joint) {
                if (probs.first == probs.second) continue;
                auto menus = f.menus;
                menus.push_back(m);
                ReadyTraceVerdict verdict;
                verdict.equivalent = false;
                verdict.witness = ReadyTrace{std::move(menus), f.actions};
                verdict.first = TraceProbability{probs.first};
                verdict.second = TraceProbability{probs.second};
                return verdict;
            }
            if (length == depth) continue;
            for (const auto& [m, probs] : joint) {
                // Equal and positive: both conditional continuations are
                // defined. A one-sided zero was reported above.
                for (const auto& a : m.actions()) {
                    Frontier child{cache.get(f.first, m, a), cache.get(f.second, m, a), std::nullopt,
                                   f.menus, f.actions};
                    child.menus.push_back(m);
                    child.actions.push_back(a);
                    next.push_back(std::move(child));
                }
            }
        }
        level = std::move(next);
    }
    return {};
}

} // namespace reactest
