#include "ferro/errors.hpp"

namespace ferro {

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Numeric:
    case ErrorKind::Degenerate:
        return 1;
    case ErrorKind::Config:
    case ErrorKind::InvalidInput:
        return 2;
    case ErrorKind::Infeasible:
        return 3;
    }
    return 1;
}

} // namespace ferro
