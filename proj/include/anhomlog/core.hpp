#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anhomlog {

/// Absolute tolerance used for equality checks on normalized measures.
inline constexpr double kDefaultTolerance = 1e-9;

/// Largest space size for which 2^n exhaustive scans are attempted.
inline constexpr std::size_t kDefaultCap = 20;

/// Largest space size for the disjoint-triple sum-rule scan (4^n work).
inline constexpr std::size_t kDefaultTripleCap = 10;

/// Largest history count for which model builders materialize a dense matrix.
inline constexpr std::size_t kDefaultMaterializeCap = 2048;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two values from different history spaces were combined.
class SpaceMismatchError : public Error {
public:
    using Error::Error;
};

/// An exhaustive operation was requested on a space above its cap.
class CapExceededError : public Error {
public:
    using Error::Error;
};

/// The whole history space is null: no preclusive co-event exists.
class TotalPreclusionError : public Error {
public:
    using Error::Error;
};

/// A measure table admits no bilinear realization.
class SumRuleError : public Error {
public:
    using Error::Error;
};

/// An experiment file is malformed.
class ParseError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

inline void require_cap(std::size_t n, std::size_t cap, const std::string& what) {
    if (n > cap) {
        throw CapExceededError(what + ": size " + std::to_string(n) + " exceeds cap " +
                               std::to_string(cap));
    }
}

}  // namespace detail

}  // namespace anhomlog
