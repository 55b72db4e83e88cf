#pragma once

#include <string>
#include <string_view>

#include "reactest/model.hpp"

namespace reactest {

/// A parsed file: one rooted graph, either a process or a test.
struct PtsDocument {
    GraphRole kind = GraphRole::Process;
    ProcessGraph graph;
};

/// Line-based format, `#` starts a comment:
///
///     kind process|test        optional; `test` when success lines appear
///     actions h t p            optional; defaults to the labels used
///     root s0                  optional; defaults to the first state named
///     state s0 prob|act        optional; inferred from the transitions
///     s0 -> 1/2 s1             probabilistic transition
///     s1 -h-> s2               action transition
///     success s3               tests only
///
/// Probabilities are exact (`p/q` or an integer). Throws ParseError (with
/// the line) on syntax errors and ValidationError on malformed graphs.
PtsDocument parse_pts(std::string_view text);

/// Inverse of parse_pts. Repeated state ids are made unique.
std::string render_pts(const ProcessGraph& graph, GraphRole kind = GraphRole::Process);

} // namespace reactest
