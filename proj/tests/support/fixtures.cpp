#include "fixtures.hpp"

#include "reactest/pts_format.hpp"

namespace reactest::fixtures {

ProcessGraph process(std::string_view pts_text) { return parse_pts(pts_text).graph; }

Test test(std::string_view pts_text) { return Test{parse_pts(pts_text).graph}; }

const char* const kCoinFirst = R"(actions h t p
s0 -> 1/2 s1
s0 -> 1/2 s2
s1 -h-> s3
s1 -t-> s4
s3 -p-> s5
s2 -h-> s6
s2 -t-> s7
s7 -p-> s8
)";

const char* const kCoinAfter = R"(actions h t p
s0 -h-> s1
s0 -t-> s2
s1 -> 1/2 s3
s1 -> 1/2 s4
s3 -p-> s5
s2 -> 1/2 s6
s2 -> 1/2 s7
s7 -p-> s8
)";

const char* const kUser = R"(kind test
actions h t p
u0 -h-> u1
u0 -t-> u1
u1 -p-> u2
success u2
)";

ProcessGraph coin_first() { return process(kCoinFirst); }
ProcessGraph coin_after() { return process(kCoinAfter); }
Test user() { return test(kUser); }

ProcessGraph ca() {
    return process("actions a b c\nx0 -c-> x1\nx1 -a-> x2\n");
}

ProcessGraph cb() {
    return process("actions a b c\nx0 -c-> x1\nx1 -b-> x2\n");
}

ProcessGraph late_choice() {
    return process(R"(actions a b c e
p0 -e-> p1
p1 -a-> p2
p2 -> 1/2 p3
p2 -> 1/2 p4
p3 -b-> p5
p4 -c-> p6
)");
}

ProcessGraph early_choice() {
    return process(R"(actions a b c e
q0 -e-> q1
q1 -> 1/2 q2
q1 -> 1/2 q3
q2 -a-> q4
q3 -a-> q5
q4 -b-> q6
q5 -c-> q7
)");
}

} // namespace reactest::fixtures
