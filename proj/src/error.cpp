#include "pfalab/error.hpp"

namespace pfalab {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::AllocationMismatch: return "AllocationMismatch";
    case ErrorKind::InvalidFault: return "InvalidFault";
    case ErrorKind::PlacementInfeasible: return "PlacementInfeasible";
    case ErrorKind::InvalidHex: return "InvalidHex";
    case ErrorKind::Config: return "Config";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    }
    return "Unknown";
}

} // namespace pfalab
