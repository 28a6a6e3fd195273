#pragma once

#include <stdexcept>
#include <string>

namespace emlab {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& msg = "matrix is singular within tol_sing") : Error(msg) {}
};

struct NotPsd : Error {
  explicit NotPsd(const std::string& msg = "matrix is not positive semidefinite") : Error(msg) {}
};

struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& msg = "matrix is not positive definite") : Error(msg) {}
};

struct BadGrade : Error {
  explicit BadGrade(const std::string& msg = "exterior power grade out of range") : Error(msg) {}
};

struct BadParam : Error {
  explicit BadParam(const std::string& msg = "parameter outside admissible range") : Error(msg) {}
};

struct BadShape : Error {
  explicit BadShape(const std::string& msg = "matrix has the wrong shape for this operation") : Error(msg) {}
};

struct NotOrthogonal : Error {
  explicit NotOrthogonal(const std::string& msg = "matrix is not orthogonal within tolerance") : Error(msg) {}
};

struct NotUnit : Error {
  explicit NotUnit(const std::string& msg = "vector is not unit length within tolerance") : Error(msg) {}
};

struct ConformalCase : Error {
  explicit ConformalCase(const std::string& msg = "p = n: trace inversion formula is invalid") : Error(msg) {}
};

struct NotInImage : Error {
  explicit NotInImage(const std::string& msg = "matrix is not in the image of the reduced tensor") : Error(msg) {}
};

struct OutsideHull : Error {
  explicit OutsideHull(const std::string& msg = "matrix lies outside co O(n)") : Error(msg) {}
};

struct StageLimit : Error {
  explicit StageLimit(const std::string& msg = "refinement stage count exceeds limit") : Error(msg) {}
};

struct InvalidConnection : Error {
  explicit InvalidConnection(const std::string& msg = "wells are not rank-one connected") : Error(msg) {}
};

struct DomainViolation : Error {
  explicit DomainViolation(const std::string& msg = "gradient left the Lagrangian domain") : Error(msg) {}
};

struct BoxOutsideDomain : Error {
  explicit BoxOutsideDomain(const std::string& msg = "test-field box is not strictly inside the domain") : Error(msg) {}
};

struct NotALaminate : Error {
  explicit NotALaminate(const std::string& msg = "map was not built from a LaminateSpec") : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace emlab
