#ifndef HT_ERRORS_HPP
#define HT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ht {

// Base for all library errors.  Each concrete error carries a stable
// numeric code so the CLI can map failures to distinct exit codes.
class Error : public std::runtime_error {
public:
    Error(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

#define HT_DEFINE_ERROR(Name, Code)                                         \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what = #Name) : Error(Code, what) {} \
    }

HT_DEFINE_ERROR(SizeMismatch, 10);
HT_DEFINE_ERROR(NotStructured, 11);
HT_DEFINE_ERROR(ZeroDivisor, 12);
HT_DEFINE_ERROR(Singular, 13);
HT_DEFINE_ERROR(NotStarSymmetric, 14);
HT_DEFINE_ERROR(NotNonnegative, 15);
HT_DEFINE_ERROR(EigenFailure, 16);
HT_DEFINE_ERROR(NotIdempotent, 17);
HT_DEFINE_ERROR(NotStarHermitian, 18);
HT_DEFINE_ERROR(PoleAt, 20);
HT_DEFINE_ERROR(DNotInvertible, 21);
HT_DEFINE_ERROR(NotMinimal, 22);
HT_DEFINE_ERROR(NotSimilar, 23);
HT_DEFINE_ERROR(InternalInconsistency, 24);
HT_DEFINE_ERROR(NotInClass, 30);
HT_DEFINE_ERROR(KindMismatch, 31);
HT_DEFINE_ERROR(AInvertibilityRequired, 32);
HT_DEFINE_ERROR(NotSupporting, 40);
HT_DEFINE_ERROR(NotInvariant, 41);
HT_DEFINE_ERROR(DegenerateSubspace, 42);
HT_DEFINE_ERROR(CircleInvertibilityRequired, 43);
HT_DEFINE_ERROR(DegenerateAlpha, 50);
HT_DEFINE_ERROR(DegeneratePair, 51);
HT_DEFINE_ERROR(UnimodularAlpha, 52);
HT_DEFINE_ERROR(SpectralRadiusTooLarge, 53);
HT_DEFINE_ERROR(GramSingular, 54);
HT_DEFINE_ERROR(PreconditionViolated, 55);
HT_DEFINE_ERROR(ParseError, 60);

#undef HT_DEFINE_ERROR

} // namespace ht

#endif // HT_ERRORS_HPP
