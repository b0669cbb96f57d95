#ifndef LWC_COMMON_HPP
#define LWC_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lwc {

using Index = Eigen::Index;

/// Integer label matrix, rows are objects and columns are base clusterings.
using LabelArray = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// One label per object.
using Labels = std::vector<int>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input (files, label matrices).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Out-of-range or inconsistent numeric parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

using Warnings = std::vector<std::string>;

}  // namespace lwc

#endif
