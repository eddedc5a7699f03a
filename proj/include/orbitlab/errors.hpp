#pragma once

#include <stdexcept>
#include <string>

namespace orbitlab {

enum class Errc {
    UnsupportedSeries,
    RankTooLarge,
    NotARoot,
    GroupTooLarge,
    ParseError,
    InconsistentFrame,
    WrongLabel,
    NotAChamber,
    DegenerateInput,
    NotFixed,
    NoStableChamber,
    DescentUndefined,
    UnsupportedStabilizer,
    MalformedGenerator,
    ZeroAngle,
    NonSemisimple,
    InconsistentSignature,
    NotInStabilizer,
    NotRealRoot,
    MissingCalibration,
    SingularX,
    NotIntegral,
    MissingGeneratorValue,
    OutsideVe,
    SingularPoint,
    Ambiguous,
    NoMatch,
    Unsupported,
    Usage,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc c, const std::string& what)
        : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

}  // namespace orbitlab
