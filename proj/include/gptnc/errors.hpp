#pragma once

#include <stdexcept>
#include <string>

namespace gptnc {

/// Root of every error raised by the library. `kind()` is the stable name
/// used by the CLI and the Python bindings.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define GPTNC_ERROR(Name)                                                                          \
    class Name : public Error {                                                                    \
    public:                                                                                        \
        explicit Name(const std::string& what) : Error(#Name, what) {}                             \
    }

GPTNC_ERROR(DimensionMismatch);
GPTNC_ERROR(UnnormalizedBody);
GPTNC_ERROR(DegenerateBody);
GPTNC_ERROR(UnboundedBody);
GPTNC_ERROR(NotPointed);
GPTNC_ERROR(CenterOutsideBody);
GPTNC_ERROR(InvalidDimension);
GPTNC_ERROR(UnknownName);
GPTNC_ERROR(BadParams);
GPTNC_ERROR(RankDeficientNormalization);
GPTNC_ERROR(InconsistentTable);
GPTNC_ERROR(ModelMismatch);
GPTNC_ERROR(NotWellDefined);
GPTNC_ERROR(NonPolytopic);
GPTNC_ERROR(NotIdentityDecomposition);
GPTNC_ERROR(NotPositive);
GPTNC_ERROR(MalformedInput);
GPTNC_ERROR(NormalizationViolation);
GPTNC_ERROR(SingularMap);

#undef GPTNC_ERROR

} // namespace gptnc
