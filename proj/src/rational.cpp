#include "holonomy/rational.hpp"

#include <cstdlib>

namespace holonomy {

Rat parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rat::make(std::stoll(text), 1).mod1();
        const long long num = std::stoll(text.substr(0, slash));
        const long long den = std::stoll(text.substr(slash + 1));
        return Rat::make(num, den).mod1();
    } catch (const std::logic_error&) {
        throw Error(Err::ParseError, "bad rational '" + text + "'");
    }
}

}  // namespace holonomy
