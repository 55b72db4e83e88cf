#pragma once

#include <string_view>

#include "reactest/model.hpp"
#include "reactest/testing.hpp"

namespace reactest::fixtures {

ProcessGraph process(std::string_view pts_text);
Test test(std::string_view pts_text);

// The coin machine that chooses before offering head/tail, the one that
// chooses after, and the user who presses either and hopes for a prize.
extern const char* const kCoinFirst;
extern const char* const kCoinAfter;
extern const char* const kUser;

ProcessGraph coin_first();
ProcessGraph coin_after();
Test user();

/// c.a.0 and c.b.0 over {a,b,c}.
ProcessGraph ca();
ProcessGraph cb();

/// e.a.(b ⊕½ c) and e.((a.b) ⊕½ (a.c)).
ProcessGraph late_choice();
ProcessGraph early_choice();

} // namespace reactest::fixtures
