#include "prodmin/errors.hpp"

namespace prodmin {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::RankDeficient: return "RankDeficient";
        case Errc::BadData: return "BadData";
        case Errc::NonCompact: return "NonCompact";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::SingularStep: return "SingularStep";
        case Errc::ZeroComponent: return "ZeroComponent";
        case Errc::BadExponent: return "BadExponent";
        case Errc::SingularG: return "SingularG";
        case Errc::NotInvariant: return "NotInvariant";
        case Errc::CapExceeded: return "CapExceeded";
        case Errc::BadShape: return "BadShape";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::NoBracket: return "NoBracket";
        case Errc::Parse: return "Parse";
        case Errc::Mismatch: return "Mismatch";
    }
    return "Unknown";
}

bool is_numerical(Errc c) {
    switch (c) {
        case Errc::NonCompact:
        case Errc::NoConvergence:
        case Errc::SingularStep:
        case Errc::ZeroComponent:
        case Errc::SingularG:
        case Errc::NoBracket:
        case Errc::Mismatch:
            return true;
        default:
            return false;
    }
}

}  // namespace prodmin
