// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_DIAG_HPP
#define TICL_DIAG_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ticl {

// Thrown for unrecoverable input errors (syntax, unresolved references,
// invalid parameters). Analysis findings are reported as Diagnostic values,
// not exceptions.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

struct Diagnostic {
    enum class Severity { Warning, Error };
    Severity severity = Severity::Error;
    std::string object;
    std::string message;
};

inline bool has_errors(const std::vector<Diagnostic> &diags)
{
    for (const auto &d : diags)
        if (d.severity == Diagnostic::Severity::Error)
            return true;
    return false;
}

} // namespace ticl

#endif
