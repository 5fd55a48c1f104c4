#pragma once

#include <stdexcept>
#include <string>

namespace specsparse {

struct Error : std::runtime_error {
    Error(std::string type, const std::string& what)
        : std::runtime_error(what), type(std::move(type)) {}
    std::string type;
};

#define SPECSPARSE_DEFINE_ERROR(Name)                                     \
    struct Name : Error {                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}    \
    }

SPECSPARSE_DEFINE_ERROR(NonSquare);
SPECSPARSE_DEFINE_ERROR(AsymmetricInput);
SPECSPARSE_DEFINE_ERROR(EntryOutOfRange);
SPECSPARSE_DEFINE_ERROR(BadSizes);
SPECSPARSE_DEFINE_ERROR(ParseError);
SPECSPARSE_DEFINE_ERROR(IoError);
SPECSPARSE_DEFINE_ERROR(DimensionMismatch);
SPECSPARSE_DEFINE_ERROR(NoConvergence);
SPECSPARSE_DEFINE_ERROR(NotBinaryPsd);
SPECSPARSE_DEFINE_ERROR(EntryOutOfAlphabet);
SPECSPARSE_DEFINE_ERROR(DegenerateBlock);

#undef SPECSPARSE_DEFINE_ERROR

} // namespace specsparse
