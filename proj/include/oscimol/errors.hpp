// errors.hpp — Error types shared by all modules
//
// InputError: invalid arguments, configurations, or states supplied by the
// caller (maps to CLI exit code 2 when raised during config handling).
// NumericalError: a computation failed or left its validity envelope
// (maps to CLI exit code 3).

#pragma once

#include <stdexcept>
#include <string>

namespace oscimol {

class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace oscimol
