#include "orbitlab/errors.hpp"

namespace orbitlab {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::UnsupportedSeries: return "UnsupportedSeries";
    case Errc::RankTooLarge: return "RankTooLarge";
    case Errc::NotARoot: return "NotARoot";
    case Errc::GroupTooLarge: return "GroupTooLarge";
    case Errc::ParseError: return "ParseError";
    case Errc::InconsistentFrame: return "InconsistentFrame";
    case Errc::WrongLabel: return "WrongLabel";
    case Errc::NotAChamber: return "NotAChamber";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NotFixed: return "NotFixed";
    case Errc::NoStableChamber: return "NoStableChamber";
    case Errc::DescentUndefined: return "DescentUndefined";
    case Errc::UnsupportedStabilizer: return "UnsupportedStabilizer";
    case Errc::MalformedGenerator: return "MalformedGenerator";
    case Errc::ZeroAngle: return "ZeroAngle";
    case Errc::NonSemisimple: return "NonSemisimple";
    case Errc::InconsistentSignature: return "InconsistentSignature";
    case Errc::NotInStabilizer: return "NotInStabilizer";
    case Errc::NotRealRoot: return "NotRealRoot";
    case Errc::MissingCalibration: return "MissingCalibration";
    case Errc::SingularX: return "SingularX";
    case Errc::NotIntegral: return "NotIntegral";
    case Errc::MissingGeneratorValue: return "MissingGeneratorValue";
    case Errc::OutsideVe: return "OutsideVe";
    case Errc::SingularPoint: return "SingularPoint";
    case Errc::Ambiguous: return "Ambiguous";
    case Errc::NoMatch: return "NoMatch";
    case Errc::Unsupported: return "Unsupported";
    case Errc::Usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace orbitlab
