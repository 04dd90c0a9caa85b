#pragma once

#include <stdexcept>
#include <string>

namespace ferro {

// Exit-code classes used by the command line tool.
enum class ErrorKind { InvalidInput, Degenerate, Numeric, Config, Infeasible };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& w) : Error(ErrorKind::InvalidInput, w) {}
};
struct DegenerateTensor : Error {
    explicit DegenerateTensor(const std::string& w) : Error(ErrorKind::Degenerate, w) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& w) : Error(ErrorKind::Numeric, w) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct InfeasibleGeometry : Error {
    explicit InfeasibleGeometry(const std::string& w) : Error(ErrorKind::Infeasible, w) {}
};

int exit_code(ErrorKind kind);

} // namespace ferro
