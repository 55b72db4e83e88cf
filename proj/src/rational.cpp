#include "reactest/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace reactest {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den =
        slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
        throw std::invalid_argument("not an exact rational literal: '" + std::string(text) + "'");
    }
    Rational value{mpz_class{std::string(num)}, mpz_class{std::string(den)}};
    if (value.get_den() == 0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    value.canonicalize();
    return value;
}

std::string to_string(const Rational& value) {
    return value.get_str();
}

} // namespace reactest
