#include "reactest/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reactest/blackbox.hpp"
#include "reactest/pts_format.hpp"
#include "reactest/ready_trace.hpp"
#include "reactest/testing.hpp"

namespace reactest {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

PtsDocument load(const std::string& path) {
    try {
        return parse_pts(read_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

ProcessGraph load_process(const std::string& path) {
    auto doc = load(path);
    if (doc.kind != GraphRole::Process) throw std::runtime_error(path + ": expected a process, found a test");
    return std::move(doc.graph);
}

Test load_test(const std::string& path) {
    auto doc = load(path);
    // Any process is also a (never succeeding) test.
    return Test{std::move(doc.graph)};
}

std::unique_ptr<BlackBoxProcess> open_box(const std::string& spec) {
    if (spec.rfind("exec:", 0) == 0) return std::make_unique<PipeBlackBox>(spec.substr(5));
    return std::make_unique<WhiteBoxProcess>(load_process(spec));
}

std::string fixed(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

void print_test_witness(std::ostream& out, const TestWitness& w) {
    out << "witness test:\n" << render_pts(w.test.graph(), GraphRole::Test);
    out << "result 1: " << to_string(w.first) << '\n';
    out << "result 2: " << to_string(w.second) << '\n';
}

void print_trace_witness(std::ostream& out, const ReadyTraceVerdict& v) {
    out << "witness trace: " << to_string(*v.witness) << '\n';
    out << "probability 1: " << to_string(v.first) << '\n';
    out << "probability 2: " << to_string(v.second) << '\n';
}

void print_distribution(std::ostream& out, const OutcomeDistribution& d) {
    out << "runs " << d.runs << '\n';
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
        out << to_string(d.entries[i].outcome) << '\t' << d.entries[i].count << '\t'
            << fixed(d.frequency(i).get_d()) << '\n';
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact testing equivalence for reactive probabilistic processes"};
    app.require_subcommand(1);

    std::string file1, file2, trace_text, box_spec, box_spec2, test_file;
    std::vector<std::string> test_files;
    std::optional<std::size_t> depth;
    std::string mode = "testing";
    std::string strategy = "spine";
    std::size_t runs = 10000;
    std::uint64_t seed = 0;
    std::string significance = "1/100";

    auto* check = app.add_subcommand("check", "Decide equivalence of two processes (exit 0 equal, 1 different)");
    check->add_option("first", file1, "Process file")->required();
    check->add_option("second", file2, "Process file")->required();
    check->add_option("--depth", depth, "Longest test or trace to consider");
    check->add_option("--mode", mode, "testing, readytrace or both")
        ->check(CLI::IsMember({"testing", "readytrace", "both"}));
    check->add_option("--strategy", strategy, "Test family: spine or exhaustive")
        ->check(CLI::IsMember({"spine", "exhaustive"}));

    auto* res = app.add_subcommand("result", "Print the outcome of a test on a process");
    res->add_option("process", file1)->required();
    res->add_option("test", file2)->required();

    auto* trace = app.add_subcommand("trace", "Print a ready-trace probability");
    trace->add_option("process", file1)->required();
    trace->add_option("trace", trace_text, "e.g. \"{h,t} h {p}\"")->required();

    auto* distinguish = app.add_subcommand("distinguish", "Print a test telling two processes apart");
    distinguish->add_option("first", file1)->required();
    distinguish->add_option("second", file2)->required();

    auto* simulate = app.add_subcommand("simulate", "Estimate the outcome distribution of a black box");
    simulate->add_option("box", box_spec, "Process file or exec:<command>")->required();
    simulate->add_option("test", test_file)->required();
    simulate->add_option("--runs", runs)->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed);

    auto* compare_cmd = app.add_subcommand("compare", "Compare two black boxes statistically");
    compare_cmd->add_option("first", box_spec, "Process file or exec:<command>")->required();
    compare_cmd->add_option("second", box_spec2, "Process file or exec:<command>")->required();
    compare_cmd->add_option("tests", test_files)->required();
    compare_cmd->add_option("--runs", runs)->check(CLI::PositiveNumber);
    compare_cmd->add_option("--seed", seed);
    compare_cmd->add_option("--significance", significance);

    auto* serve = app.add_subcommand("serve-box", "Serve a process as a black box on stdin/stdout");
    serve->add_option("process", file1)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (check->parsed()) {
            const auto g1 = load_process(file1);
            const auto g2 = load_process(file2);
            std::optional<Verdict> by_tests;
            std::optional<ReadyTraceVerdict> by_traces;
            if (mode != "readytrace") {
                TestingOptions options;
                options.depth = depth;
                options.strategy = strategy == "exhaustive" ? Strategy::Exhaustive : Strategy::Spine;
                by_tests = testing_equiv(g1, g2, options);
            }
            if (mode != "testing") {
                by_traces = rt_equiv(g1, g2, depth.value_or(completeness_depth(g1, g2)));
            }
            if (by_tests && by_traces && by_tests->equivalent != by_traces->equivalent) {
                out << "testing: " << (by_tests->equivalent ? "equivalent" : "not equivalent") << '\n';
                out << "ready traces: " << (by_traces->equivalent ? "equivalent" : "not equivalent") << '\n';
                err << "error: the two deciders disagree\n";
                return kExitDisagreement;
            }
            const bool equivalent = by_tests ? by_tests->equivalent : by_traces->equivalent;
            out << (equivalent ? "equivalent" : "not equivalent") << '\n';
            if (by_tests && by_tests->witness) print_test_witness(out, *by_tests->witness);
            if (by_traces && by_traces->witness) print_trace_witness(out, *by_traces);
            return equivalent ? kExitEquivalent : kExitDifferent;
        }
        if (res->parsed()) {
            out << to_string(result(load_process(file1), load_test(file2))) << '\n';
            return 0;
        }
        if (trace->parsed()) {
            out << to_string(pn(load_process(file1), parse_ready_trace(trace_text))) << '\n';
            return 0;
        }
        if (distinguish->parsed()) {
            const auto g1 = load_process(file1);
            const auto g2 = load_process(file2);
            if (auto t = synthesize_distinguisher(g1, g2)) {
                out << render_pts(t->graph(), GraphRole::Test);
            } else {
                out << "equivalent\n";
            }
            return 0;
        }
        if (simulate->parsed()) {
            auto box = open_box(box_spec);
            print_distribution(out, estimate(*box, load_test(test_file), runs, seed));
            return 0;
        }
        if (compare_cmd->parsed()) {
            auto b1 = open_box(box_spec);
            auto b2 = open_box(box_spec2);
            std::vector<Test> tests;
            for (const auto& f : test_files) tests.push_back(load_test(f));
            const auto report = compare(*b1, *b2, tests, runs, parse_rational(significance), seed);
            for (const auto& c : report.tests) {
                out << test_files[c.test_index] << ": " << (c.distinguished ? "distinguished" : "not distinguished")
                    << " (chi2 " << fixed(c.statistic) << ", dof " << c.degrees_of_freedom << ", p "
                    << fixed(c.p_value) << ")\n";
            }
            return report.any_distinguished() ? kExitDifferent : kExitEquivalent;
        }
        if (serve->parsed()) {
            WhiteBoxProcess box(load_process(file1));
            BlackBoxServer(box).serve(std::cin, out);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

} // namespace reactest
