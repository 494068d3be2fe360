#ifndef JOINTSLAB_ERROR_HPP
#define JOINTSLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace jointslab {

enum class ErrorKind {
    DimensionMismatch,
    FieldMismatch,
    InvalidArgument,
    SingularFrame,
    Verification,
    BudgetExceeded,
    Internal,
    Parse
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace jointslab

#endif
