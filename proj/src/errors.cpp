#include "geo4/errors.hpp"

namespace geo4 {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonIntegralChi: return "NonIntegralChi";
        case Errc::NotAllowed: return "NotAllowed";
        case Errc::ZeroChi: return "ZeroChi";
        case Errc::BadParams: return "BadParams";
        case Errc::BadKnotParams: return "BadKnotParams";
        case Errc::ParseError: return "ParseError";
        case Errc::ValidationError: return "ValidationError";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::UnknownBlock: return "UnknownBlock";
        case Errc::UnknownSlot: return "UnknownSlot";
        case Errc::MissingSlot: return "MissingSlot";
        case Errc::SlotMismatch: return "SlotMismatch";
        case Errc::NonTorusSlot: return "NonTorusSlot";
        case Errc::BasisClash: return "BasisClash";
        case Errc::UnknownSW: return "UnknownSW";
        case Errc::PartialSW: return "PartialSW";
        case Errc::PairingMismatch: return "PairingMismatch";
        case Errc::OutOfRegion: return "OutOfRegion";
        case Errc::NoRealization: return "NoRealization";
        case Errc::NotCovered: return "NotCovered";
        case Errc::BelowThreshold: return "BelowThreshold";
        case Errc::RatioTooSmall: return "RatioTooSmall";
        case Errc::IoError: return "IoError";
    }
    return "Error";
}

} // namespace geo4
