#pragma once

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace boseq {

using cplx = std::complex<double>;

inline constexpr double kInputNormTol = 1e-9;
inline constexpr double kInternalTol = 1e-12;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentError : Error {
    using Error::Error;
};
struct NormalizationError : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct DuplicateSiteError : Error {
    using Error::Error;
};
struct ZeroProbabilityError : Error {
    using Error::Error;
};
struct NonHermitianError : Error {
    using Error::Error;
};
struct NegativeEigenvalueError : Error {
    using Error::Error;
};
struct StepSizeError : Error {
    using Error::Error;
};
struct FitError : Error {
    using Error::Error;
};
struct CutoffError : Error {
    using Error::Error;
};
struct DimensionCapError : Error {
    using Error::Error;
};
struct OrderError : Error {
    using Error::Error;
};
struct SyntaxError : Error {
    SyntaxError(const std::string& msg, int line, int column)
        : Error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line(line),
          column(column) {}
    int line;
    int column;
};
struct UnknownSiteError : Error {
    using Error::Error;
};
struct AmbiguousOutcomeError : Error {
    using Error::Error;
};
struct NoPeakError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

/// Register dimension cap; BOSEQ_DIM_CAP overrides the 250 000 default.
inline std::size_t dim_cap() {
    if (const char* env = std::getenv("BOSEQ_DIM_CAP")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 250000;
}

inline void check_dim_cap(std::size_t dim) {
    if (dim > dim_cap())
        throw DimensionCapError("dimension " + std::to_string(dim) + " exceeds cap " +
                                std::to_string(dim_cap()) + " (set BOSEQ_DIM_CAP to override)");
}

}  // namespace boseq
