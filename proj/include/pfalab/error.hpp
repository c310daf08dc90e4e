#ifndef PFALAB_ERROR_HPP
#define PFALAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pfalab {

enum class ErrorKind {
    NotAPermutation,
    Infeasible,
    AllocationMismatch,
    InvalidFault,
    PlacementInfeasible,
    InvalidHex,
    Config,
    DivisionByZero,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace pfalab

#endif
