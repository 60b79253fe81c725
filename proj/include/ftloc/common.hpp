#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ftloc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Every failure the library raises derives from Error so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct InvalidGauge : Error {
    using Error::Error;
};
struct InvalidSet : Error {
    using Error::Error;
};
struct EmptyInstance : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};
struct EmptySublevel : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

inline void require_dim(const Vec& v, Eigen::Index d, const char* what) {
    if (v.size() != d)
        throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(d) +
                                ", got " + std::to_string(v.size()));
}

inline bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace ftloc
