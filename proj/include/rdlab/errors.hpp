#pragma once

#include <stdexcept>
#include <string>

namespace rdlab {

/// Series or quadrature could not certify the requested tolerance within the
/// term budget. Carries the number of terms consumed before giving up.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, int terms_used)
        : std::runtime_error(what), terms_used_(terms_used) {}
    int terms_used() const noexcept { return terms_used_; }

private:
    int terms_used_;
};

class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfDomain : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parse failure in a data file; line() is 1-based, 0 when not line-specific.
class MalformedFile : public std::runtime_error {
public:
    MalformedFile(const std::string& what, long line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

class VersionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A forward/training pass produced a non-finite value.
class NonFinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateFeature : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rdlab
