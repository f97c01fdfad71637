#include "hyprec/family.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <sstream>

namespace hyprec {
namespace {

const std::array<FamilyInfo, kFamilyCount>& table() {
  static const std::array<FamilyInfo, kFamilyCount> infos = {{
      {FamilyId::Gauss2nd, "gauss2nd", "Gauss2nd", {"a", "b", "j"}, {false, false, true}, 0, +1},
      {FamilyId::Gauss2ndDiag, "gauss2nd-diag", "Gauss2ndDiag", {"a"}, {false}, 0, +1},
      {FamilyId::Srivastava, "srivastava", "Srivastava", {"n", "a"}, {true, false}, 0, -1},
      {FamilyId::Kummer, "kummer", "Kummer", {"a", "b"}, {false, false}, 1, +1},
      {FamilyId::Miller, "miller", "Miller", {"a", "b", "c", "d"}, {false, false, false, false}, 0, +1},
      {FamilyId::PfaffSaalschutz, "pfaff-saalschutz", "PfaffSaalschutz", {"n", "a", "b", "c"},
       {true, false, false, false}, 0, +1},
      {FamilyId::Dixon, "dixon", "Dixon", {"a", "b", "c"}, {false, false, false}, 1, +1},
      {FamilyId::WatsonLavoie, "watson-lavoie", "WatsonLavoie", {"a", "b", "c"}, {false, false, false}, 0, +1},
      {FamilyId::WatsonShift, "watson-shift", "WatsonShift", {"a", "b", "c"}, {false, false, false}, 0, +1},
      {FamilyId::Bailey, "bailey", "Bailey", {"a", "b", "c"}, {false, false, false}, 0, +1},
  }};
  return infos;
}

constexpr std::array<FamilyId, kFamilyCount> kAll = {
    FamilyId::Gauss2nd,        FamilyId::Gauss2ndDiag, FamilyId::Srivastava,   FamilyId::Kummer,
    FamilyId::Miller,          FamilyId::PfaffSaalschutz, FamilyId::Dixon,     FamilyId::WatsonLavoie,
    FamilyId::WatsonShift,     FamilyId::Bailey,
};

}  // namespace

const FamilyInfo& family_info(FamilyId id) { return table()[static_cast<std::size_t>(id)]; }

std::span<const FamilyId> all_families() { return kAll; }

std::optional<FamilyId> parse_family(std::string_view name) {
  if (name == "pfaff") return FamilyId::PfaffSaalschutz;
  for (const auto& info : table()) {
    if (name == info.name || name == info.enum_name) return info.id;
  }
  return std::nullopt;
}

bool k_admissible(FamilyId id, int k) {
  switch (id) {
    case FamilyId::Srivastava: return k <= 0;
    case FamilyId::Kummer:
    case FamilyId::Dixon: return k >= 0;
    default: return k >= 0;
  }
}

FamilyPoint::FamilyPoint(FamilyId f, int k_, std::vector<double> base_)
    : family(f), k(k_), base(std::move(base_)), shift(base.size(), 0) {}

FamilyPoint::FamilyPoint(FamilyId f, int k_, std::vector<double> base_, std::vector<int> shift_)
    : family(f), k(k_), base(std::move(base_)), shift(std::move(shift_)) {}

std::vector<double> FamilyPoint::params() const {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = param(i);
  return out;
}

FamilyPoint FamilyPoint::child(int child_k, std::span<const int> delta) const {
  FamilyPoint c = *this;
  c.k = child_k;
  for (std::size_t i = 0; i < delta.size() && i < c.shift.size(); ++i) c.shift[i] += delta[i];
  return c;
}

std::string FamilyPoint::to_string() const {
  std::ostringstream os;
  const auto& info = family_info(family);
  os << info.name << "(k=" << k;
  for (std::size_t i = 0; i < base.size(); ++i) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, base[i]);  // shortest round-trip form
    os << ", " << info.param_names[i] << "=" << std::string_view(buf, res.ptr - buf);
    if (shift[i] != 0) os << (shift[i] > 0 ? "+" : "") << shift[i];
  }
  os << ")";
  return os.str();
}

bool operator==(const FamilyPoint& x, const FamilyPoint& y) {
  if (x.family != y.family || x.k != y.k || x.shift != y.shift || x.base.size() != y.base.size()) {
    return false;
  }
  for (std::size_t i = 0; i < x.base.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(x.base[i]) != std::bit_cast<std::uint64_t>(y.base[i])) return false;
  }
  return true;
}

std::size_t FamilyPointHash::operator()(const FamilyPoint& p) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(p.family));
  mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(p.k)));
  for (double b : p.base) mix(std::bit_cast<std::uint64_t>(b));
  for (int s : p.shift) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(s)));
  return static_cast<std::size_t>(h);
}

}  // namespace hyprec
