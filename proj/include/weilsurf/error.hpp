#ifndef WEILSURF_ERROR_HPP
#define WEILSURF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace weilsurf {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WEILSURF_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

WEILSURF_DEFINE_ERROR(NotAPrimePower);
WEILSURF_DEFINE_ERROR(ZeroInput);
WEILSURF_DEFINE_ERROR(NotAdmissible);
WEILSURF_DEFINE_ERROR(NotSimple);
WEILSURF_DEFINE_ERROR(SizeGuard);
WEILSURF_DEFINE_ERROR(DivisionByZero);
WEILSURF_DEFINE_ERROR(EvenCharacteristic);
WEILSURF_DEFINE_ERROR(OddCharacteristic);
WEILSURF_DEFINE_ERROR(UnsupportedQ);
WEILSURF_DEFINE_ERROR(ParityViolation);
WEILSURF_DEFINE_ERROR(InadmissibleCount);
WEILSURF_DEFINE_ERROR(VerificationFailure);

#undef WEILSURF_DEFINE_ERROR

}  // namespace weilsurf

#endif  // WEILSURF_ERROR_HPP
