#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace hrrm {

/// Opaque numeric identifier; the tag keeps cell, UE and flow ids apart.
template <typename Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;
};

struct CellTag {};
struct UeTag {};
struct FlowTag {};

using CellId = Id<CellTag>;
using UeId = Id<UeTag>;
using FlowId = Id<FlowTag>;

template <typename Tag>
std::string to_string(Id<Tag> id) {
  return std::to_string(id.value);
}

}  // namespace hrrm

template <typename Tag>
struct std::hash<hrrm::Id<Tag>> {
  std::size_t operator()(hrrm::Id<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
