#ifndef GEO4_ERRORS_HPP
#define GEO4_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace geo4 {

enum class Errc {
    NonIntegralChi,
    NotAllowed,
    ZeroChi,
    BadParams,
    BadKnotParams,
    ParseError,
    ValidationError,
    SyntaxError,
    UnknownBlock,
    UnknownSlot,
    MissingSlot,
    SlotMismatch,
    NonTorusSlot,
    BasisClash,
    UnknownSW,
    PartialSW,
    PairingMismatch,
    OutOfRegion,
    NoRealization,
    NotCovered,
    BelowThreshold,
    RatioTooSmall,
    IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace geo4

#endif
