#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyprec {

/// The recursion families. Parameter order for each family is fixed and
/// matches FamilyInfo::param_names.
enum class FamilyId {
  Gauss2nd,         // (a, b, j)    2F1(a, b+k; (a+b+j+1)/2 | 1/2), j in {0,1}
  Gauss2ndDiag,     // (a)          2F1(a, a+k; a+1 | 1/2)
  Srivastava,       // (n, a)       2F1(-n, a; 2a-1+k | 2), k <= 0
  Kummer,           // (a, b)       2F1(a+k, b; a-b+1 | -1), k >= 1
  Miller,           // (a, b, c, d) 3F2(a, b, c+k+1; d+1, c | 1)
  PfaffSaalschutz,  // (n, a, b, c) 3F2(-n, a, b; c+k, a+b+1-n-c | 1)
  Dixon,            // (a, b, c)    3F2(a, b+k, c+k; a-b+1, a-c+1 | 1), k >= 1
  WatsonLavoie,     // (a, b, c)    3F2(a, b, c; (a+b+1)/2, 2c+k | 1)
  WatsonShift,      // (a, b, c)    3F2(a+k, b, c; (a+b+1)/2, 2c | 1)
  Bailey,           // (a, b, c)    3F2(a, b, c+1; 1+2c-b+k, c | 1)
};

inline constexpr std::size_t kFamilyCount = 10;

struct FamilyInfo {
  FamilyId id;
  std::string_view name;       // kebab-case CLI name
  std::string_view enum_name;  // FamilyId spelled out
  std::vector<std::string_view> param_names;
  std::vector<bool> integer_param;  // n and j must be integers
  int base_k;                       // index of the closed-form base case
  int k_direction;                  // +1: k >= base_k, -1: k <= base_k
};

const FamilyInfo& family_info(FamilyId id);
std::span<const FamilyId> all_families();

/// Accepts the kebab-case name, the enum spelling, and "pfaff" as an alias.
std::optional<FamilyId> parse_family(std::string_view name);

/// Whether k lies in the family's admissible range (Kummer/Dixon admit k = 0
/// through the classical theorem even though the recursion starts at 1).
bool k_admissible(FamilyId id, int k);

/// One G_k value on a family's shift lattice. The parameters of the point are
/// base[i] + shift[i]; the memo key compares base bitwise and shift exactly.
struct FamilyPoint {
  FamilyId family{};
  int k = 0;
  std::vector<double> base;
  std::vector<int> shift;

  FamilyPoint() = default;
  FamilyPoint(FamilyId f, int k_, std::vector<double> base_);
  FamilyPoint(FamilyId f, int k_, std::vector<double> base_, std::vector<int> shift_);

  [[nodiscard]] std::vector<double> params() const;
  [[nodiscard]] double param(std::size_t i) const { return base[i] + shift[i]; }
  [[nodiscard]] FamilyPoint child(int child_k, std::span<const int> delta) const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const FamilyPoint& x, const FamilyPoint& y);
};

struct FamilyPointHash {
  std::size_t operator()(const FamilyPoint& p) const noexcept;
};

}  // namespace hyprec
