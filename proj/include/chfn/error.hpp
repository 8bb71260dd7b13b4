#pragma once

#include <stdexcept>
#include <string>

namespace chfn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (zero input, branch cut, s < 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Evaluation failed at a specific point, e.g. a pole on the real axis.
class EvaluationError : public Error {
public:
  using Error::Error;
};

/// Tabulated data queried outside its grid.
class RangeError : public Error {
public:
  using Error::Error;
};

/// A construction parameter violates a stated bound.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// GammaDrift drift parameter violates the principal-branch condition.
class AdmissibilityError : public Error {
public:
  AdmissibilityError(const std::string& what, double bound) : Error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

private:
  double bound_;
};

/// An object is not of the expected structural form (e.g. exponent not
/// proportional to the indecomposable one).
class StructureError : public Error {
public:
  StructureError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class MultiplicityError : public Error {
public:
  using Error::Error;
};

/// Complex-conjugate root pair where a real pole was required.
class ConjugatePairError : public Error {
public:
  using Error::Error;
};

class InvalidPgfError : public Error {
public:
  using Error::Error;
};

/// A checked precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Sampler refuses a law it cannot certify.
class RefusalError : public Error {
public:
  using Error::Error;
};

/// Rejection sampler envelope too loose to be useful.
class EnvelopeError : public Error {
public:
  using Error::Error;
};

}  // namespace chfn
