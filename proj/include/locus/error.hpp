#pragma once

#include <stdexcept>
#include <string>

namespace locus {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define LOCUS_DEFINE_ERROR(Name)            \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    }

LOCUS_DEFINE_ERROR(InvalidParameter);
LOCUS_DEFINE_ERROR(UnsupportedAlgebra);
LOCUS_DEFINE_ERROR(WordProblemBudgetExceeded);
LOCUS_DEFINE_ERROR(EnumerationBudgetExceeded);
LOCUS_DEFINE_ERROR(NotLocal);
LOCUS_DEFINE_ERROR(NotPRS);
LOCUS_DEFINE_ERROR(NotAMap);
LOCUS_DEFINE_ERROR(MonoidUnsupported);
LOCUS_DEFINE_ERROR(UnknownPrime);
LOCUS_DEFINE_ERROR(GeneratorExtractionFailed);
LOCUS_DEFINE_ERROR(ParseError);
LOCUS_DEFINE_ERROR(ValidationError);

#undef LOCUS_DEFINE_ERROR

}  // namespace locus
