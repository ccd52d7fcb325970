#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ofudiff {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Runtime fault in the artifact itself (bad config, non-finite model output, ...).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A stability/validation check failed on otherwise valid inputs.
class CertificateError : public Error {
public:
    explicit CertificateError(const std::string& what) : Error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

}  // namespace ofudiff
