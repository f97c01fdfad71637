#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hyprec/family.hpp"

namespace hyprec {

enum class ErrorKind {
  Pole,
  Overflow,
  Domain,
  NoConvergence,
  DegenerateBase,
  CoefficientPole,
  CollapsedIndex,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error raised by the library. Recursion failures carry the
/// lattice point at which they happened.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<FamilyPoint> point = std::nullopt)
      : std::runtime_error(what), kind_(kind), point_(std::move(point)) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::optional<FamilyPoint>& point() const noexcept { return point_; }
  void attach(const FamilyPoint& p) {
    if (!point_) point_ = p;
  }

 private:
  ErrorKind kind_;
  std::optional<FamilyPoint> point_;
};

#define HYPREC_DECLARE_ERROR(Name, Kind)                                              \
  class Name : public Error {                                                         \
   public:                                                                            \
    explicit Name(const std::string& what, std::optional<FamilyPoint> p = std::nullopt) \
        : Error(ErrorKind::Kind, what, std::move(p)) {}                               \
  };

HYPREC_DECLARE_ERROR(PoleError, Pole)
HYPREC_DECLARE_ERROR(OverflowError, Overflow)
HYPREC_DECLARE_ERROR(DomainError, Domain)
HYPREC_DECLARE_ERROR(NoConvergenceError, NoConvergence)
HYPREC_DECLARE_ERROR(DegenerateBaseError, DegenerateBase)
HYPREC_DECLARE_ERROR(CoefficientPoleError, CoefficientPole)
HYPREC_DECLARE_ERROR(CollapsedIndexError, CollapsedIndex)
HYPREC_DECLARE_ERROR(InvalidArgumentError, InvalidArgument)

#undef HYPREC_DECLARE_ERROR

}  // namespace hyprec
