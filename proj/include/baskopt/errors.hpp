#ifndef BASKOPT_ERRORS_HPP
#define BASKOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace baskopt {

// Quadrature or continued-fraction failure. Carries the iteration count at
// which the evaluation gave up.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, long iterations)
        : std::runtime_error(what + " (after " + std::to_string(iterations) +
                             " iterations)"),
          iterations_(iterations) {}
    long iterations() const noexcept { return iterations_; }

private:
    long iterations_;
};

// A computation was refused because it would exceed a configured resource
// guard (e.g. the exact-enumeration outcome-space ceiling).
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration rejected during validation. `path` is the offending field,
// dotted from the document root (e.g. "phi.tau").
class config_error : public std::runtime_error {
public:
    config_error(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace baskopt

#endif
