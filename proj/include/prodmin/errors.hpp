#pragma once

#include <stdexcept>
#include <string>

namespace prodmin {

enum class Errc {
    RankDeficient,
    BadData,
    NonCompact,
    NoConvergence,
    SingularStep,
    ZeroComponent,
    BadExponent,
    SingularG,
    NotInvariant,
    CapExceeded,
    BadShape,
    BudgetExceeded,
    NoBracket,
    Parse,
    Mismatch,
};

const char* errc_name(Errc c);

// true for failures of the numerics (as opposed to malformed input)
bool is_numerical(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace prodmin
