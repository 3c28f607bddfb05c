#pragma once

#include <stdexcept>
#include <string>

namespace bt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define BT_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }   \
  };

BT_DEFINE_ERROR(DivisionByZero)
BT_DEFINE_ERROR(OutOfPrecision)
BT_DEFINE_ERROR(Singular)
BT_DEFINE_ERROR(NonIntegral)
BT_DEFINE_ERROR(NonLaurent)
BT_DEFINE_ERROR(OutOfWindow)
BT_DEFINE_ERROR(ResourceLimit)
BT_DEFINE_ERROR(DepthInsufficient)
BT_DEFINE_ERROR(InvalidArgument)

#undef BT_DEFINE_ERROR

}  // namespace bt
