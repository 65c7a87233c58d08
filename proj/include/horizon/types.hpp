#ifndef HORIZON_TYPES_HPP
#define HORIZON_TYPES_HPP

#include <Eigen/Core>
#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace horizon {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Desk-scale caps for exact face enumeration.
inline constexpr int kMaxDim = 6;
inline constexpr int kMaxRows = 16;
inline constexpr int kMaxLpRows = 64;

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kConeTol = 1e-9;
inline constexpr double kDupCosTol = 1e-10;
inline constexpr double kOverflowLimit = 1e300;

// Scale-aware activity band |a.x - b| <= tau_act(x).
inline double activity_tol(const Vector& x) { return 1e-8 * (1.0 + x.norm()); }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptySetError : Error {
  EmptySetError() : Error("polyhedron is empty") {}
};
struct BoundedSetError : Error {
  BoundedSetError() : Error("polyhedron is bounded") {}
};
struct DimensionLimitError : Error {
  explicit DimensionLimitError(const std::string& what) : Error(what) {}
};
struct NotMemberError : Error {
  explicit NotMemberError(const std::string& what) : Error(what) {}
};
struct NumericalFailure : Error {
  explicit NumericalFailure(const std::string& what) : Error(what) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& what) : Error(what) {}
};
struct NotInDomainError : Error {
  explicit NotInDomainError(const std::string& what) : Error(what) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};
struct DomainUnreachableError : Error {
  explicit DomainUnreachableError(const std::string& what) : Error(what) {}
};
struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& what) : Error(what) {}
};

enum class Verdict { Holds, Fails, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    default: return "Unknown";
  }
}

}  // namespace horizon

#endif  // HORIZON_TYPES_HPP
