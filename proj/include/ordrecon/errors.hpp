#pragma once

#include <stdexcept>
#include <string>

namespace ordrecon {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ORDRECON_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

ORDRECON_DEFINE_ERROR(ParseError);
ORDRECON_DEFINE_ERROR(CycleError);
ORDRECON_DEFINE_ERROR(IndexError);
ORDRECON_DEFINE_ERROR(EmptySetError);
ORDRECON_DEFINE_ERROR(SizeError);
ORDRECON_DEFINE_ERROR(ArithmeticError);
ORDRECON_DEFINE_ERROR(NotConnectedError);
ORDRECON_DEFINE_ERROR(NotCoconnectedError);
ORDRECON_DEFINE_ERROR(NotDecomposableError);
ORDRECON_DEFINE_ERROR(NotMaximalError);
ORDRECON_DEFINE_ERROR(InconsistentDeckError);
ORDRECON_DEFINE_ERROR(InvalidPairError);
ORDRECON_DEFINE_ERROR(OrbitError);
ORDRECON_DEFINE_ERROR(StructureError);
ORDRECON_DEFINE_ERROR(AmbiguousParameterError);
ORDRECON_DEFINE_ERROR(ProcedureFailure);
ORDRECON_DEFINE_ERROR(CapExceededError);
ORDRECON_DEFINE_ERROR(UnknownPropertyError);
ORDRECON_DEFINE_ERROR(CacheCorruptError);

#undef ORDRECON_DEFINE_ERROR

}  // namespace ordrecon
