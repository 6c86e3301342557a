#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace motivic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the operation's domain (not prime, k = 0, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DivisionByZero : public Error {
public:
  DivisionByZero() : Error("inversion of zero in a finite field") {}
};

/// p^k (or an intermediate integer) does not fit the native word.
class OverflowError : public Error {
public:
  using Error::Error;
};

/// The curve does not reduce to a smooth curve of the same degree mod p.
class BadReduction : public Error {
public:
  BadReduction(std::uint64_t p, std::string witness)
      : Error("bad reduction at p = " + std::to_string(p) + ": " + witness),
        p_(p), witness_(std::move(witness)) {}

  std::uint64_t prime() const noexcept { return p_; }
  const std::string& witness() const noexcept { return witness_; }

private:
  std::uint64_t p_;
  std::string witness_;
};

/// A point count or trace lies outside the Weil interval. Always a counting bug.
class WeilBoundViolation : public Error {
public:
  using Error::Error;
};

/// Newton's recurrence produced a non-integer coefficient.
class NonIntegralCoefficient : public Error {
public:
  using Error::Error;
};

class RootFinderDivergence : public Error {
public:
  using Error::Error;
};

class PalindromeViolation : public Error {
public:
  using Error::Error;
};

/// Continued-fraction terms differ between the two working precisions.
class PrecisionInstability : public Error {
public:
  using Error::Error;
};

/// A required point count is neither cached nor allowed to be computed.
class CountUnavailable : public Error {
public:
  using Error::Error;
};

/// Sieve step requested for a prime that is not the next one in sequence.
class OutOfOrderPrime : public Error {
public:
  using Error::Error;
};

/// Malformed Standard MIDI File handed to the reader.
class MidiFormatError : public Error {
public:
  using Error::Error;
};

} // namespace motivic
