#pragma once

#include <stdexcept>
#include <string>

namespace gbr {

/// Caller handed us data that violates a precondition (bad dimensions,
/// out-of-range disparity, inconsistent inputs).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A serialized stream or file is malformed (bad magic, truncation,
/// unknown tag, values outside the declared format).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An in-memory structure fails its own invariants (graph traversal
/// over/underrun, count mismatches between matched streams).
class IntegrityError : public std::runtime_error {
public:
    explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gbr
