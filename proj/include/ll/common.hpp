#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ll {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixD = Matrix<double>;
using MatrixF = Matrix<float>;
using VectorD = Vector<double>;
using VectorF = Vector<float>;
using TraceMatrix = RowMatrix<float>;  // one trace per row
using LabelMatrix = RowMatrix<std::int8_t>;

// Log-domain scores over the 256 byte hypotheses.
using LogScores = Eigen::ArrayXd;

inline constexpr int kByteClasses = 256;

// Base error; CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class VersionError : public DataError {
 public:
  using DataError::DataError;
};

inline int hamming_weight(std::uint8_t b) {
  int w = 0;
  while (b) {
    w += b & 1;
    b >>= 1;
  }
  return w;
}

inline std::uint8_t to_byte(std::int8_t v) { return static_cast<std::uint8_t>(v); }
inline std::int8_t from_byte(std::uint8_t b) { return static_cast<std::int8_t>(b); }

}  // namespace ll
