#pragma once

#include <stdexcept>
#include <string>

namespace scmra {

/// Raised by every module on contract violations (bad input, exhausted subspace, ...).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scmra
