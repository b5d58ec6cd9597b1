#pragma once

#include <stdexcept>
#include <string>

namespace kneadlab {

/* all library failures carry a stable kind tag plus a human message */
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

namespace errk {
inline constexpr const char* OverlappingDomains = "OverlappingDomains";
inline constexpr const char* PiecesDontCover = "PiecesDontCover";
inline constexpr const char* NonMonotoneBranch = "NonMonotoneBranch";
inline constexpr const char* ImageEscapes = "ImageEscapes";
inline constexpr const char* InvalidSidedPoint = "InvalidSidedPoint";
inline constexpr const char* TolExceeded = "TolExceeded";
inline constexpr const char* NotSupported = "NotSupported";
inline constexpr const char* BudgetExceeded = "BudgetExceeded";
inline constexpr const char* UndecidableAtDepth = "UndecidableAtDepth";
inline constexpr const char* NotUnimodal = "NotUnimodal";
inline constexpr const char* NonConvergence = "NonConvergence";
inline constexpr const char* NotPositiveRecurrent = "NotPositiveRecurrent";
inline constexpr const char* EmptyGraph = "EmptyGraph";
inline constexpr const char* NotAPath = "NotAPath";
inline constexpr const char* BadSpec = "BadSpec";
}  // namespace errk

/* three-valued answer for truncation-honest predicates */
enum class Tri { no = 0, yes = 1, undecidable = 2 };

inline const char* tri_str(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    default: return "undecidable";
  }
}

}  // namespace kneadlab
