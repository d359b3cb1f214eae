#pragma once

#include <stdexcept>
#include <string>

namespace ccproof {

// Base of every failure raised by the proof pipeline. Callers that only
// need "did this stage prove its claim" catch this type.
class ProofError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZeroInterval : public ProofError {
 public:
  DivisionByZeroInterval() : ProofError("division by an interval containing zero") {}
};

class NegativeDomain : public ProofError {
 public:
  NegativeDomain() : ProofError("square root of an interval with negative lower bound") {}
};

// The squared-distance enclosure of some pair touches zero.
class CollisionBox : public ProofError {
 public:
  CollisionBox() : ProofError("box touches a collision configuration") {}
};

class SingularMidpointJacobian : public ProofError {
 public:
  explicit SingularMidpointJacobian(const std::string& what = "midpoint Jacobian is numerically singular")
      : ProofError(what) {}
};

class MultipleCandidates : public ProofError {
 public:
  explicit MultipleCandidates(std::size_t n)
      : ProofError(std::to_string(n) + " distinct certified solutions survived"), count(n) {}
  std::size_t count;
};

class NoSolutionFound : public ProofError {
 public:
  NoSolutionFound() : ProofError("every candidate box was refuted") {}
};

class BudgetExhausted : public ProofError {
 public:
  using ProofError::ProofError;
};

class NeumannBoundFails : public ProofError {
 public:
  NeumannBoundFails() : ProofError("Neumann bound needs ||I - C A|| < 1") {}
  explicit NeumannBoundFails(long double q)
      : ProofError("Neumann bound needs ||I - C A|| < 1, got " + std::to_string(static_cast<double>(q))) {}
};

class NonpositiveRadius : public ProofError {
 public:
  NonpositiveRadius() : ProofError("IFT radius r or epsilon is not positive") {}
};

class CorruptJournal : public ProofError {
 public:
  using ProofError::ProofError;
};

}  // namespace ccproof
