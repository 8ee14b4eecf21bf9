#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace moodkit {

using Scalar = double;

// (valence, arousal, dominance)
using Vad = Eigen::Vector3d;
// (openness, conscientiousness, extraversion, agreeableness, neuroticism)
using Ocean = Eigen::Matrix<Scalar, 5, 1>;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec7 = Eigen::Matrix<Scalar, 7, 1>;

// Error hierarchy; the CLI maps these onto exit codes (2 data, 3 numeric).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};

}  // namespace moodkit
