#pragma once

#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace torrec {

// Exit-code classes used by the CLI: 0 ok, 1 usage, 2 hypothesis
// violation, 3 resource cap, 4 precision failure.
enum class ErrorClass { Usage = 1, Hypothesis = 2, Cap = 3, Precision = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }

private:
    ErrorClass cls_;
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& w = "matrix is singular")
        : Error(ErrorClass::Hypothesis, w) {}
};

struct PrecisionFailure : Error {
    explicit PrecisionFailure(const std::string& w = "requested certification precision unattainable")
        : Error(ErrorClass::Precision, w) {}
};

struct InvalidSpectrum : Error {
    explicit InvalidSpectrum(const std::string& w = "spectrum has a modulus <= 1")
        : Error(ErrorClass::Hypothesis, w) {}
};

struct AmbiguousComparison : Error {
    explicit AmbiguousComparison(const std::string& w = "strict comparison undecidable at current precision")
        : Error(ErrorClass::Precision, w) {}
};

struct RootOfUnity : Error {
    explicit RootOfUnity(const std::string& w = "an eigenvalue modulus could not be certified away from 1")
        : Error(ErrorClass::Hypothesis, w) {}
};

struct CapExceeded : Error {
    CapExceeded(const mpz_class& required, const std::string& what_cap)
        : Error(ErrorClass::Cap, what_cap + " cap exceeded, need " + required.get_str()),
          required_count(required) {}
    mpz_class required_count;
};

struct HypothesisNotMet : Error {
    explicit HypothesisNotMet(const std::string& w) : Error(ErrorClass::Hypothesis, w) {}
};

struct NotDiagonalizableOverQ : Error {
    explicit NotDiagonalizableOverQ(const std::string& w = "matrix is not diagonalizable over Q")
        : Error(ErrorClass::Hypothesis, w) {}
};

struct NonIntegerEigenvalues : Error {
    explicit NonIntegerEigenvalues(const std::string& w = "matrix has non-integer eigenvalues")
        : Error(ErrorClass::Hypothesis, w) {}
};

struct Infeasible : Error {
    explicit Infeasible(const std::string& w) : Error(ErrorClass::Hypothesis, w) {}
};

struct EmptyLevel : Error {
    explicit EmptyLevel(const std::string& w = "a tree node has no children; level selection is broken")
        : Error(ErrorClass::Hypothesis, w) {}
};

struct ScaleTooFine : Error {
    explicit ScaleTooFine(const std::string& w = "grid scale exceeds the per-scale box budget")
        : Error(ErrorClass::Cap, w) {}
};

struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(ErrorClass::Usage, w) {}
};

}  // namespace torrec
