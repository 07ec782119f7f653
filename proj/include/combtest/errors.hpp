#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace combtest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two index sets or an observation and a class disagree on n.
class DimensionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// estimate_tC cannot draw M distinct members cheaply (N < 4M).
class MTooLargeForClass : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// An operation would enumerate more members than the configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::string cardinality, std::uint64_t cap)
      : Error("class has " + cardinality + " members, over the enumeration cap of " +
              std::to_string(cap)),
        cardinality_(std::move(cardinality)),
        cap_(cap) {}

  const std::string& cardinality() const { return cardinality_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::string cardinality_;
  std::uint64_t cap_;
};

}  // namespace combtest
